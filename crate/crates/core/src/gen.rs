//! Seeded random generation of polynomials, values and well-typed terms,
//! for property tests and numeric checks.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::interp::{Environment, MultiPoly, Rational, Value};
use crate::lang::{AppKind, Binder, CompKind, Dim, GContext, GSlot, GTerm, Idx, Name, Slot, Subject, Ty, TypeExpr};

pub use rand::SeedableRng;
pub type Rng64 = ChaCha8Rng;

/// A small nonzero-denominator rational.
pub fn rational(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into())
}

/// A polynomial in `nvars` indeterminates of total degree at most `degree`.
pub fn poly(rng: &mut impl Rng, nvars: usize, degree: u32, terms: usize) -> MultiPoly {
    let ts = (0..rng.gen_range(0..=terms)).map(|_| {
        let mut e = vec![0u32; nvars];
        let d = rng.gen_range(0..=degree);
        for _ in 0..d {
            e[rng.gen_range(0..nvars)] += 1;
        }
        (e, rational(rng))
    });
    MultiPoly::from_terms(nvars, ts.collect::<Vec<_>>()).expect("small polynomials stay within limits")
}

/// `n` component polynomials in `m` indeterminates.
pub fn map(rng: &mut impl Rng, m: usize, n: usize, degree: u32) -> Vec<MultiPoly> {
    (0..n).map(|_| poly(rng, m, degree, 4)).collect()
}

/// A random value of a concrete type.
pub fn value(rng: &mut impl Rng, ty: &TypeExpr, degree: u32) -> Value {
    match ty {
        Ty::Scalar => Value::Scalar(rational(rng)),
        Ty::Tuple(k) => Value::Tuple((0..*k).map(|_| rational(rng)).collect()),
        Ty::Index(k) => Value::Index(rng.gen_range(0..*k), *k),
        Ty::Fun11 => Value::Fun11(poly(rng, 1, degree, 4)),
        Ty::FunM1(m) => Value::FunM1(poly(rng, *m, degree, 4)),
        Ty::Fun1N(n) => Value::Fun1N(map(rng, 1, *n, degree)),
        Ty::FunMN(m, n) => Value::FunMN(*m, map(rng, *m, *n, degree)),
    }
}

/// A random environment for a concrete context.
pub fn environment(rng: &mut impl Rng, ctx: &GContext, degree: u32) -> Environment {
    let ctx = ctx.concrete().expect("a concrete context");
    Environment::new(ctx.entries().iter().map(|(_, t)| value(rng, t, degree)).collect())
}

/// A random invertible affine map `a ↦ M a + t` on `dim` coordinates and
/// its inverse `b ↦ M⁻¹ (b − t)`, built from elementary row operations.
pub fn affine_pair(rng: &mut impl Rng, dim: usize) -> (Vec<MultiPoly>, Vec<MultiPoly>) {
    let unit = |i: usize, j: usize| if i == j { Rational::one() } else { Rational::zero() };
    let mut m: Vec<Vec<Rational>> = (0..dim).map(|i| (0..dim).map(|j| unit(i, j)).collect()).collect();
    let mut inv = m.clone();
    for _ in 0..3 * dim {
        let i = rng.gen_range(0..dim);
        let j = rng.gen_range(0..dim);
        if i != j && rng.gen_bool(0.7) {
            // Row i += c · row j on M; column j -= c · column i on M⁻¹.
            let c = rational(rng);
            for col in 0..dim {
                let v = &m[j][col] * &c;
                m[i][col] += v;
            }
            for row in inv.iter_mut() {
                let v = &row[i] * &c;
                row[j] -= v;
            }
        } else {
            let c = loop {
                let c = rational(rng);
                if !c.is_zero() {
                    break c;
                }
            };
            for v in m[i].iter_mut() {
                *v *= &c;
            }
            for row in inv.iter_mut() {
                row[i] /= &c;
            }
        }
    }
    let t: Vec<Rational> = (0..dim).map(|_| rational(rng)).collect();
    let linear = |rows: &[Vec<Rational>], shift: &[Rational]| -> Vec<MultiPoly> {
        rows.iter()
            .zip(shift)
            .map(|(row, s)| {
                let mut terms: Vec<(Vec<u32>, Rational)> = vec![(vec![0; dim], s.clone())];
                for (k, c) in row.iter().enumerate() {
                    let mut e = vec![0; dim];
                    e[k] = 1;
                    terms.push((e, c.clone()));
                }
                MultiPoly::from_terms(dim, terms).expect("affine polynomials are small")
            })
            .collect()
    };
    // M⁻¹ (b − t) = M⁻¹ b − M⁻¹ t.
    let back: Vec<Rational> = inv.iter().map(|row| -row.iter().zip(&t).map(|(a, b)| a * b).sum::<Rational>()).collect();
    (linear(&m, &t), linear(&inv, &back))
}

/// One variable of every type with arities `1..=max_arity`.
pub fn rich_context(max_arity: usize) -> GContext {
    let mut entries = vec![(Name::new("a"), Ty::Scalar), (Name::new("h"), Ty::Fun11)];
    for k in 1..=max_arity {
        let d = Dim::Lit(k);
        entries.push((Name::new(format!("t{k}")), Ty::Tuple(d.clone())));
        entries.push((Name::new(format!("c{k}")), Ty::Index(d.clone())));
        entries.push((Name::new(format!("p{k}")), Ty::FunM1(d.clone())));
        entries.push((Name::new(format!("q{k}")), Ty::Fun1N(d.clone())));
        for n in 1..=max_arity {
            entries.push((Name::new(format!("F{k}{n}")), Ty::FunMN(d.clone(), Dim::Lit(n))));
        }
    }
    GContext::from_entries(entries)
}

/// Generator of well-typed concrete terms over a context that has a
/// variable of every type it is asked for.
pub struct TermGen<'r, R: Rng> {
    pub rng: &'r mut R,
    pub max_arity: usize,
}

fn lit(n: usize) -> Dim {
    Dim::Lit(n)
}

impl<R: Rng> TermGen<'_, R> {
    fn arity(&mut self) -> usize {
        self.rng.gen_range(1..=self.max_arity)
    }

    fn var_of(&mut self, ctx: &GContext, ty: &Ty<Dim>) -> Option<GTerm> {
        let entries = ctx.entries();
        let n = entries.len();
        let hits: Vec<usize> = (0..n).filter(|i| entries[n - 1 - i].1 == *ty).collect();
        let i = *hits.choose(self.rng)?;
        Some(GTerm::Var(entries[n - 1 - i].0.clone(), i))
    }

    fn slot(&mut self, ctx: &GContext, bound: usize) -> GSlot {
        if self.rng.gen_bool(0.3) {
            if let Some(v) = self.var_of(ctx, &Ty::Index(lit(bound))) {
                return Slot::By(Box::new(v));
            }
        }
        Slot::At(Idx::Lit(self.rng.gen_range(0..bound)))
    }

    /// A term of type `ty` in `ctx` with at most `depth` nested constructors.
    pub fn term(&mut self, ctx: &GContext, ty: &TypeExpr, depth: usize) -> GTerm {
        let gty = ty.generic();
        if depth == 0 || self.rng.gen_bool(0.2) {
            if let Some(v) = self.var_of(ctx, &gty) {
                return v;
            }
        }
        let d = depth.saturating_sub(1);
        let choice = self.rng.gen_range(0..6);
        match ty {
            Ty::Scalar => match choice {
                0 => GTerm::mul(self.term(ctx, ty, d), self.term(ctx, ty, d)),
                1 => GTerm::app(AppKind::A11, self.term(ctx, &Ty::Fun11, d), self.term(ctx, ty, d)),
                2 => {
                    let m = self.arity();
                    GTerm::app(AppKind::AM1, self.term(ctx, &Ty::FunM1(m), d), self.term(ctx, &Ty::Tuple(m), d))
                }
                3 => {
                    let k = self.arity();
                    let inner = ctx.extend(Name::new("k"), Ty::Index(lit(k)));
                    GTerm::sum(lit(k), "k", self.term(&inner, ty, d))
                }
                _ => {
                    let k = self.arity();
                    let t = self.term(ctx, &Ty::Tuple(k), d);
                    let s = self.slot(ctx, k);
                    GTerm::proj(Subject::K, t, s)
                }
            },
            Ty::Tuple(n) => match choice {
                0 => GTerm::app(AppKind::A1N, self.term(ctx, &Ty::Fun1N(*n), d), self.term(ctx, &Ty::Scalar, d)),
                1 | 2 => {
                    let m = self.arity();
                    GTerm::app(AppKind::AMN, self.term(ctx, &Ty::FunMN(m, *n), d), self.term(ctx, &Ty::Tuple(m), d))
                }
                3 => {
                    let t = self.term(ctx, ty, d);
                    let s = self.slot(ctx, *n);
                    GTerm::subst(Subject::K, t, s, self.term(ctx, &Ty::Scalar, d))
                }
                _ => self.var_of(ctx, &gty).expect("tuple variable"),
            },
            Ty::Fun11 => match choice {
                0 | 1 => {
                    let inner = ctx.extend(Name::new("z"), Ty::Scalar);
                    GTerm::lam(Binder::SS, "z", self.term(&inner, &Ty::Scalar, d))
                }
                2 => GTerm::comp(CompKind::C111, self.term(ctx, ty, d), self.term(ctx, ty, d)),
                3 => {
                    let k = self.arity();
                    GTerm::comp(CompKind::C1K1, self.term(ctx, &Ty::FunM1(k), d), self.term(ctx, &Ty::Fun1N(k), d))
                }
                4 => GTerm::prime(self.term(ctx, ty, d)),
                _ => {
                    let n = self.arity();
                    let f = self.term(ctx, &Ty::Fun1N(n), d);
                    let s = self.slot(ctx, n);
                    GTerm::proj(Subject::N, f, s)
                }
            },
            Ty::FunM1(m) => match choice {
                0..=2 => {
                    let inner = ctx.extend(Name::new("x"), Ty::Tuple(lit(*m)));
                    GTerm::lam(Binder::TS(lit(*m)), "x", self.term(&inner, &Ty::Scalar, d))
                }
                _ => {
                    let n = self.arity();
                    let f = self.term(ctx, &Ty::FunMN(*m, n), d);
                    let s = self.slot(ctx, n);
                    GTerm::proj(Subject::MN, f, s)
                }
            },
            Ty::Fun1N(n) => match choice {
                0..=2 => {
                    let inner = ctx.extend(Name::new("z"), Ty::Scalar);
                    GTerm::lam(Binder::ST, "z", self.term(&inner, &Ty::Tuple(*n), d))
                }
                _ => {
                    let f = self.term(ctx, ty, d);
                    let s = self.slot(ctx, *n);
                    GTerm::subst(Subject::N, f, s, self.term(ctx, &Ty::Scalar, d))
                }
            },
            Ty::FunMN(m, n) => match choice {
                0 | 1 => {
                    let inner = ctx.extend(Name::new("x"), Ty::Tuple(lit(*m)));
                    GTerm::lam(Binder::TT(lit(*m)), "x", self.term(&inner, &Ty::Tuple(*n), d))
                }
                2 => {
                    let k = self.arity();
                    GTerm::comp(CompKind::CMKN, self.term(ctx, &Ty::FunMN(k, *n), d), self.term(ctx, &Ty::FunMN(*m, k), d))
                }
                3 => GTerm::comp(CompKind::CM1N, self.term(ctx, &Ty::Fun1N(*n), d), self.term(ctx, &Ty::FunM1(*m), d)),
                4 => {
                    let f = self.term(ctx, ty, d);
                    let s = self.slot(ctx, *n);
                    GTerm::subst(Subject::MN, f, s, self.term(ctx, &Ty::Scalar, d))
                }
                _ => self.var_of(ctx, &gty).expect("function variable"),
            },
            Ty::Index(_) => self.var_of(ctx, &gty).expect("index variable"),
        }
    }

    /// A random concrete type with arities up to `max_arity`.
    pub fn ty(&mut self) -> TypeExpr {
        match self.rng.gen_range(0..6) {
            0 => Ty::Scalar,
            1 => Ty::Tuple(self.arity()),
            2 => Ty::Fun11,
            3 => Ty::FunM1(self.arity()),
            4 => Ty::Fun1N(self.arity()),
            _ => Ty::FunMN(self.arity(), self.arity()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::infer;

    #[test]
    fn generated_terms_have_the_requested_type() {
        let mut rng = Rng64::seed_from_u64(3);
        let ctx = rich_context(3);
        for _ in 0..300 {
            let mut g = TermGen { rng: &mut rng, max_arity: 3 };
            let ty = g.ty();
            let t = g.term(&ctx, &ty, 4);
            assert_eq!(infer(&ctx, &t).unwrap(), ty.generic(), "{t:?}");
        }
    }

    #[test]
    fn affine_pairs_are_inverse() {
        let mut rng = Rng64::seed_from_u64(5);
        for dim in 1..=3 {
            let (f, g) = affine_pair(&mut rng, dim);
            let id: Vec<MultiPoly> = (0..dim).map(|i| MultiPoly::var(dim, i)).collect();
            let fg: Vec<MultiPoly> = f.iter().map(|p| p.compose(&g).unwrap()).collect();
            assert_eq!(fg, id);
        }
    }

    #[test]
    fn environments_match_their_context() {
        let mut rng = Rng64::seed_from_u64(4);
        let ctx = rich_context(2);
        let env = environment(&mut rng, &ctx, 2);
        env.check_against(&ctx.concrete().unwrap()).unwrap();
    }
}
