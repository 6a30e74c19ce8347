//! Transformation laws of tensor densities under polynomial transition maps.

use std::collections::BTreeMap;

use jacobiform::gen::{self, Rng64, SeedableRng};
use jacobiform::interp::{MultiPoly, Rational};
use jacobiform::tensor::{
    chain_transform, determinant, jacobian, transform_components, ComponentField, Direction, TensorDensitySpec,
    TransitionMap,
};
use proptest::prelude::*;

fn poly(s: &str) -> MultiPoly {
    MultiPoly::parse(2, s).unwrap()
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn affine(rng: &mut Rng64, dim: usize, label: &str) -> TransitionMap {
    let (f, g) = gen::affine_pair(rng, dim);
    TransitionMap::new(dim, f, Some(g), label).unwrap()
}

fn random_field(rng: &mut Rng64, dim: usize, spec: TensorDensitySpec, degree: u32) -> ComponentField {
    let empty = ComponentField::new(dim, spec, BTreeMap::new()).unwrap();
    let listed = empty.components().keys().map(|k| (k.clone(), gen::poly(rng, dim, degree, 3))).collect();
    ComponentField::new(dim, spec, listed).unwrap()
}

fn constants(field: &ComponentField) -> Vec<Rational> {
    field
        .components()
        .values()
        .map(|p| {
            assert!(p.degree() == 0);
            p.terms().values().next().cloned().unwrap_or_else(|| r(0))
        })
        .collect()
}

#[test]
fn bi_covector_matches_the_explicit_double_sum() {
    let f = TransitionMap::new(2, vec![poly("x1 + x2^2"), poly("x2")], Some(vec![poly("x1 + -1 x2^2"), poly("x2")]), "A→B").unwrap();
    let spec = TensorDensitySpec::new(0, 2, 0).unwrap();
    let b = ComponentField::new(
        2,
        spec,
        [
            ((vec![], vec![0, 0]), poly("x1")),
            ((vec![], vec![0, 1]), poly("x1 x2 + 1")),
            ((vec![], vec![1, 0]), poly("-2")),
            ((vec![], vec![1, 1]), poly("x2^2")),
        ]
        .into_iter()
        .collect(),
    )
    .unwrap();
    let out = transform_components(&b, &f, Direction::Forward).unwrap();
    let finv = f.inverse().unwrap();
    for ip in 0..2 {
        for jp in 0..2 {
            let mut expected = MultiPoly::zero(2);
            for i in 0..2 {
                for j in 0..2 {
                    let comp = b.component(&[], &[i, j]).unwrap().compose(finv).unwrap();
                    let term = &(&finv[i].partial(ip).unwrap() * &finv[j].partial(jp).unwrap()) * &comp;
                    expected = &expected + &term;
                }
            }
            assert_eq!(out.component(&[], &[ip, jp]).unwrap(), &expected, "component ({ip},{jp})");
        }
    }
}

#[test]
fn contravariant_chain_of_two_affine_maps() {
    let g = TransitionMap::new(2, vec![poly("x1 + 2 x2"), poly("x2")], Some(vec![poly("x1 + -2 x2"), poly("x2")]), "A→B").unwrap();
    let f = TransitionMap::new(2, vec![poly("3 x1"), poly("x1 + x2 + 1")], Some(vec![poly("1/3 x1"), poly("x2 + -1/3 x1 + -1")]), "B→C").unwrap();
    let spec = TensorDensitySpec::new(1, 0, 0).unwrap();
    let e = ComponentField::constant(2, spec, &[r(5), r(-1)]).unwrap();
    let res = chain_transform(&e, &[g.clone(), f.clone()]).unwrap();
    // Oracle: the product of the constant Jacobians [[3,0],[1,1]]·[[1,2],[0,1]] applied to (5,-1).
    let jf = [[r(3), r(0)], [r(1), r(1)]];
    let jg = [[r(1), r(2)], [r(0), r(1)]];
    let prod: Vec<Vec<Rational>> =
        (0..2).map(|a| (0..2).map(|c| (0..2).map(|k| &jf[a][k] * &jg[k][c]).sum()).collect()).collect();
    let v = [r(5), r(-1)];
    let expected: Vec<Rational> = (0..2).map(|a| (0..2).map(|c| &prod[a][c] * &v[c]).sum()).collect();
    assert_eq!(constants(&res.field), expected);
    assert_eq!(res.collapsed.as_ref(), Some(&res.field));
    let one = chain_transform(&e, std::slice::from_ref(&g)).unwrap();
    assert_eq!(one.field, transform_components(&e, &g, Direction::Forward).unwrap());
    assert_eq!(chain_transform(&e, &[]).unwrap().field, e);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn jacobian_chain_rule(m in 1usize..4, k in 1usize..4, n in 1usize..4, seed in any::<u64>()) {
        let mut rng = Rng64::seed_from_u64(seed);
        let f = gen::map(&mut rng, k, n, 2);
        let g = gen::map(&mut rng, m, k, 2);
        let fg: Vec<MultiPoly> = f.iter().map(|p| p.compose(&g).unwrap()).collect();
        let lhs = jacobian(m, &fg).unwrap();
        let rhs = jacobian(k, &f).unwrap().compose(&g).unwrap().mul(&jacobian(m, &g).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn determinant_is_multiplicative_at_points(dim in 1usize..4, seed in any::<u64>()) {
        let mut rng = Rng64::seed_from_u64(seed);
        let f = gen::map(&mut rng, dim, dim, 2);
        let g = gen::map(&mut rng, dim, dim, 2);
        let fg: Vec<MultiPoly> = f.iter().map(|p| p.compose(&g).unwrap()).collect();
        let x: Vec<Rational> = (0..dim).map(|_| gen::rational(&mut rng)).collect();
        let gx: Vec<Rational> = g.iter().map(|p| p.eval(&x).unwrap()).collect();
        let df = determinant(&jacobian(dim, &f).unwrap()).unwrap().eval(&gx).unwrap();
        let dg = determinant(&jacobian(dim, &g).unwrap()).unwrap().eval(&x).unwrap();
        let dfg = determinant(&jacobian(dim, &fg).unwrap()).unwrap().eval(&x).unwrap();
        prop_assert_eq!(df * dg, dfg);
    }

    #[test]
    fn chained_equals_composite(dim in 1usize..4, p in 0usize..3, q in 0usize..3, omega in -2i32..=2, seed in any::<u64>()) {
        let mut rng = Rng64::seed_from_u64(seed);
        let spec = TensorDensitySpec::new(p, q, omega).unwrap();
        let field = random_field(&mut rng, dim, spec, 2);
        let g = affine(&mut rng, dim, "g");
        let f = affine(&mut rng, dim, "f");
        let res = chain_transform(&field, &[g.clone(), f.clone()]).unwrap();
        let direct = transform_components(&field, &f.after(&g).unwrap(), Direction::Forward).unwrap();
        prop_assert_eq!(&res.field, &direct);
        prop_assert_eq!(res.collapsed.as_ref(), Some(&direct));
    }

    #[test]
    fn contraction_is_invariant(dim in 1usize..4, seed in any::<u64>()) {
        let mut rng = Rng64::seed_from_u64(seed);
        let t_map = affine(&mut rng, dim, "t");
        let mk = |rng: &mut Rng64, p, q| {
            let spec = TensorDensitySpec::new(p, q, 0).unwrap();
            let n = dim.pow((p + q) as u32);
            let vals: Vec<Rational> = (0..n).map(|_| gen::rational(rng)).collect();
            ComponentField::constant(dim, spec, &vals).unwrap()
        };
        let s = mk(&mut rng, 2, 0);
        let t = mk(&mut rng, 0, 1);
        let u = mk(&mut rng, 0, 1);
        let scalar = |s: &ComponentField, t: &ComponentField, u: &ComponentField| -> MultiPoly {
            let mut acc = MultiPoly::zero(dim);
            for i in 0..dim {
                for j in 0..dim {
                    let term = &(s.component(&[i, j], &[]).unwrap() * t.component(&[], &[i]).unwrap()) * u.component(&[], &[j]).unwrap();
                    acc = &acc + &term;
                }
            }
            acc
        };
        let before = scalar(&s, &t, &u);
        let tr = |f: &ComponentField| transform_components(f, &t_map, Direction::Forward).unwrap();
        prop_assert_eq!(scalar(&tr(&s), &tr(&t), &tr(&u)), before);
    }

    #[test]
    fn forward_then_inverse_round_trips(dim in 1usize..4, p in 0usize..3, q in 0usize..3, omega in -2i32..=2, seed in any::<u64>()) {
        let mut rng = Rng64::seed_from_u64(seed);
        let spec = TensorDensitySpec::new(p, q, omega).unwrap();
        let field = random_field(&mut rng, dim, spec, 2);
        let t = affine(&mut rng, dim, "t");
        let there = transform_components(&field, &t, Direction::Forward).unwrap();
        prop_assert_eq!(transform_components(&there, &t, Direction::Inverse).unwrap(), field);
    }

    #[test]
    fn kronecker_on_affine_maps(dim in 1usize..4, seed in any::<u64>()) {
        let mut rng = Rng64::seed_from_u64(seed);
        let t = affine(&mut rng, dim, "t");
        let pts: Vec<Vec<Rational>> = (0..3).map(|_| (0..dim).map(|_| gen::rational(&mut rng)).collect()).collect();
        prop_assert!(jacobiform::tensor::kronecker_check(&t, &pts).unwrap().holds());
    }
}
