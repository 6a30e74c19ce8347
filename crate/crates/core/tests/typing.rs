//! Rule-by-rule coverage of the type checker and uniqueness of typing.

mod common;

use common::typing::{census, check_rule_case, RULE_CASES};
use jacobiform::lang::{parse_term, SyntaxError};

#[test]
fn every_rule_accepts_and_rejects() {
    assert_eq!(RULE_CASES.len(), 28);
    for (rule, accept, reject) in RULE_CASES {
        if let Err(e) = check_rule_case(accept, reject) {
            panic!("{rule}: {e}");
        }
    }
}

#[test]
fn zero_arity_is_a_parse_error() {
    for text in ["(lam-tt 0 x (var x 0))", "(lam-ts 0 x (var x 0))", "(sum 0 i (var i 0))"] {
        assert!(matches!(parse_term(text), Err(SyntaxError { .. })), "{text}");
    }
}

#[test]
fn typing_is_unique_up_to_depth_three() {
    let c = census();
    println!("raw terms checked: {}, well-typed by depth: {:?}", c.raw, c.well_typed);
    assert!(c.failures.is_empty(), "{:#?}", c.failures);
    assert_eq!(c.raw, 1401);
    assert_eq!(c.well_typed, [6, 31, 753]);
}
