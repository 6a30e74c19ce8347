//! The partial-derivative encoding and the two assumed equalities under the
//! polynomial interpretation.

use jacobiform::deriv::{encode_in, encode_partial_derivative, PartialDerivativeSpec};
use jacobiform::gen::{self, Rng64, SeedableRng};
use jacobiform::interp::{check_assumed_equalities, eval, Environment, MultiPoly, Rational, Value};
use jacobiform::lang::{Context, GContext, GTerm, Idx, Name, Slot, Subject, Term, Ty, TypeExpr};
use jacobiform::rewrite::{beta_normalize, eta_normalize};
use proptest::prelude::*;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Exact difference quotient in direction `i`: expand p(x + h e_i) - p(x) in
/// one extra indeterminate h, keep the terms linear in h, divide by h.
fn difference_quotient(p: &MultiPoly, i: usize) -> MultiPoly {
    let m = p.nvars();
    let shifted: Vec<MultiPoly> = (0..m)
        .map(|v| {
            let x = MultiPoly::var(m + 1, v);
            if v == i {
                &x + &MultiPoly::var(m + 1, m)
            } else {
                x
            }
        })
        .collect();
    let plain: Vec<MultiPoly> = (0..m).map(|v| MultiPoly::var(m + 1, v)).collect();
    let diff = &p.compose(&shifted).unwrap() - &p.compose(&plain).unwrap();
    let linear = diff.terms().iter().filter(|(e, _)| e[m] == 1).map(|(e, c)| (e[..m].to_vec(), c.clone()));
    MultiPoly::from_terms(m, linear.collect::<Vec<_>>()).unwrap()
}

#[test]
fn product_partial_at_three_five() {
    let ctx = Context::new().extend(Name::new("f"), TypeExpr::FunMN(2, 1));
    let p = MultiPoly::parse(2, "x1 x2").unwrap();
    let d = encode_in(&ctx, &Term::var("f", 0), 0, 0).unwrap();
    let Value::FunM1(q) = eval(&Environment::new(vec![Value::FunMN(2, vec![p.clone()])]), &d).unwrap() else {
        panic!("a FunM1 value")
    };
    let point = [r(3, 1), r(5, 1)];
    assert_eq!(q.eval(&point).unwrap(), r(5, 1));
    assert_eq!(difference_quotient(&p, 0).eval(&point).unwrap(), r(5, 1));
}

#[test]
fn one_by_one_is_the_univariate_derivative() {
    let ctx = GContext::from_entries(vec![(Name::new("f"), Ty::Fun1N(1.into()))]);
    let f = GTerm::var("f", 0);
    let spec = PartialDerivativeSpec { ctx, f: f.clone(), j: Idx::Lit(0), i: Idx::Lit(0) };
    let (t, _) = encode_partial_derivative(&spec).unwrap();
    let expected = GTerm::prime(GTerm::proj(Subject::N, f, Slot::At(Idx::Lit(0))));
    assert_eq!(eta_normalize(&beta_normalize(&t)), expected);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn encoding_matches_coefficient_rule(m in 1usize..4, n in 1usize..4, seed in any::<u64>()) {
        let mut rng = Rng64::seed_from_u64(seed);
        let ps = gen::map(&mut rng, m, n, 3);
        let j = (seed % n as u64) as usize;
        let i = ((seed >> 8) % m as u64) as usize;
        let ctx = Context::new().extend(Name::new("f"), TypeExpr::FunMN(m, n));
        let d = encode_in(&ctx, &Term::var("f", 0), j, i).unwrap();
        let Value::FunM1(q) = eval(&Environment::new(vec![Value::FunMN(m, ps.clone())]), &d).unwrap() else {
            panic!("a FunM1 value")
        };
        prop_assert_eq!(&q, &ps[j].partial(i).unwrap());
        prop_assert_eq!(&q, &difference_quotient(&ps[j], i));
        let point: Vec<Rational> = (0..m).map(|_| gen::rational(&mut rng)).collect();
        prop_assert_eq!(q.eval(&point).unwrap(), difference_quotient(&ps[j], i).eval(&point).unwrap());
    }

    #[test]
    fn assumed_equalities_hold_exactly(m in 1usize..4, n in 1usize..4, k in 1usize..4, seed in any::<u64>()) {
        let mut rng = Rng64::seed_from_u64(seed);
        let f = Value::FunMN(k, gen::map(&mut rng, k, n, 3));
        let g = Value::FunMN(m, gen::map(&mut rng, m, k, 3));
        let report = check_assumed_equalities(&f, &g, 3, seed).unwrap();
        prop_assert_eq!(report.symbolic.len(), m * n);
        prop_assert!(report.holds(), "{}", report);
    }
}
