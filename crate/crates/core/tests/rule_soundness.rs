//! Every equivalence rule preserves the exact value of the term it rewrites.

mod common;

use common::soundness::{rewrite_walk, same_value, TAGS, TRIALS_PER_TAG};
use jacobiform::gen::{self, Rng64, SeedableRng};
use jacobiform::lang::{Dim, Idx};
use jacobiform::rewrite::{derive_chain_rule, ChainRuleSpec};
use rand::Rng;

#[test]
fn random_rewrites_preserve_values() {
    let report = rewrite_walk(0x50_0d);
    eprintln!("verified applications per rule tag: {:?}", report.verified);
    assert!(report.failures.is_empty(), "{:#?}", report.failures);
    for tag in TAGS {
        let n = report.count(tag);
        assert!(n >= TRIALS_PER_TAG, "only {n} verified applications of {tag}: {:?}", report.verified);
    }
}

#[test]
fn derivation_steps_preserve_values() {
    let mut rng = Rng64::seed_from_u64(0xde_71);
    let mut checked = 0;
    for m in 1..=3 {
        for n in 1..=3 {
            for k in 1..=3 {
                let spec = ChainRuleSpec {
                    m: Dim::Lit(m),
                    n: Dim::Lit(n),
                    k: Dim::Lit(k),
                    j: Idx::Lit(rng.gen_range(0..n)),
                    i: Idx::Lit(rng.gen_range(0..m)),
                    pointfree: true,
                    tensor_annotation: false,
                };
                let tr = derive_chain_rule(&spec).unwrap();
                let env = gen::environment(&mut rng, &tr.ctx, 2);
                let mut prev = tr.start.clone();
                for step in &tr.steps {
                    if !step.tag.is_assumed() {
                        assert_eq!(same_value(&tr.ctx, &env, &prev, &step.result), Ok(Some(true)), "{} step", step.tag);
                        checked += 1;
                    }
                    prev = step.result.clone();
                }
            }
        }
    }
    assert!(checked >= 27 * 10);
}
