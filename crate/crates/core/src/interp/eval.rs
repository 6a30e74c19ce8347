//! Evaluation of typed terms. Every binder introduces fresh indeterminates,
//! so function values are polynomials that may still mention the
//! indeterminates of enclosing binders.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::lang::{
    infer, AppKind, Binder, CompKind, Dim, GContext, GSlot, GTerm, Idx, Slot, Subject, TypedTerm,
};

use super::{InterpError, MultiPoly, Rational, Value, MAX_DEGREE, MAX_TERMS};
use super::value::Environment;

/// A monomial as sorted `(indeterminate, exponent)` pairs.
type Mono = Vec<(u32, u32)>;

/// A sparse polynomial over the evaluator's indeterminates.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct SPoly(BTreeMap<Mono, Rational>);

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn mono_degree(m: &Mono) -> u32 {
    m.iter().map(|(_, e)| e).sum()
}

impl SPoly {
    fn constant(c: Rational) -> Self {
        let mut p = SPoly::default();
        p.add_term(Vec::new(), c);
        p
    }

    fn var(id: u32) -> Self {
        let mut p = SPoly::default();
        p.add_term(vec![(id, 1)], Rational::one());
        p
    }

    fn add_term(&mut self, m: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(m.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&m);
        }
    }

    fn degree(&self) -> u32 {
        self.0.keys().map(mono_degree).max().unwrap_or(0)
    }

    fn add(&self, other: &SPoly) -> SPoly {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    fn mul(&self, other: &SPoly) -> Result<SPoly, InterpError> {
        if self.degree() + other.degree() > MAX_DEGREE {
            return Err(InterpError::ResourceLimit(format!("degree above {MAX_DEGREE}")));
        }
        let mut out = SPoly::default();
        for (a, c) in &self.0 {
            for (b, d) in &other.0 {
                out.add_term(mono_mul(a, b), c * d);
            }
            if out.0.len() > MAX_TERMS {
                return Err(InterpError::ResourceLimit(format!("more than {MAX_TERMS} terms")));
            }
        }
        Ok(out)
    }

    fn partial(&self, id: u32) -> SPoly {
        let mut out = SPoly::default();
        for (m, c) in &self.0 {
            if let Some(pos) = m.iter().position(|(v, _)| *v == id) {
                let e = m[pos].1;
                let mut m2 = m.clone();
                if e == 1 {
                    m2.remove(pos);
                } else {
                    m2[pos].1 -= 1;
                }
                out.add_term(m2, c * Rational::from_integer(e.into()));
            }
        }
        out
    }

    /// Simultaneously replace `params[i]` by `args[i]`.
    fn substitute(&self, params: &[u32], args: &[SPoly]) -> Result<SPoly, InterpError> {
        let mut powers: Vec<Vec<SPoly>> = args.iter().map(|a| vec![SPoly::constant(Rational::one()), a.clone()]).collect();
        let mut out = SPoly::default();
        for (m, c) in &self.0 {
            let mut kept = Vec::new();
            let mut t = SPoly::constant(c.clone());
            for &(v, e) in m {
                match params.iter().position(|p| *p == v) {
                    Some(i) => {
                        while powers[i].len() <= e as usize {
                            let next = powers[i].last().unwrap().mul(&args[i])?;
                            powers[i].push(next);
                        }
                        t = t.mul(&powers[i][e as usize])?;
                    }
                    None => kept.push((v, e)),
                }
            }
            let mut k = SPoly::default();
            k.add_term(kept, Rational::one());
            out = out.add(&t.mul(&k)?);
            if out.0.len() > MAX_TERMS {
                return Err(InterpError::ResourceLimit(format!("more than {MAX_TERMS} terms")));
            }
        }
        Ok(out)
    }

    fn from_multi(p: &MultiPoly, ids: &[u32]) -> SPoly {
        let mut out = SPoly::default();
        for (e, c) in p.terms() {
            let m: Mono = ids.iter().zip(e).filter(|(_, k)| **k > 0).map(|(v, k)| (*v, *k)).collect();
            let mut m = m;
            m.sort_unstable();
            out.add_term(m, c.clone());
        }
        out
    }

    fn to_multi(&self, ids: &[u32]) -> Option<MultiPoly> {
        let terms = self
            .0
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; ids.len()];
                for (v, k) in m {
                    e[ids.iter().position(|p| p == v)?] += k;
                }
                Some((e, c.clone()))
            })
            .collect::<Option<Vec<_>>>()?;
        MultiPoly::from_terms(ids.len(), terms).ok()
    }
}

/// Intermediate values: scalars are polynomials in the live indeterminates.
#[derive(Debug, Clone)]
enum SVal {
    Scalar(SPoly),
    Tuple(Vec<SPoly>),
    Index(usize),
    Fun { params: Vec<u32>, outs: Vec<SPoly>, tuple_in: bool, tuple_out: bool },
}

struct Evaluator {
    stack: Vec<SVal>,
    next_id: u32,
}

fn internal(what: &str) -> InterpError {
    InterpError::TypeMismatch { expected: what.into(), found: "an ill-shaped value".into() }
}

impl Evaluator {
    fn fresh(&mut self, n: usize) -> Vec<u32> {
        let ids = (self.next_id..self.next_id + n as u32).collect();
        self.next_id += n as u32;
        ids
    }

    fn lift(&mut self, v: &Value) -> SVal {
        let fun = |ev: &mut Self, m: usize, ps: &[MultiPoly], tuple_in: bool, tuple_out: bool| {
            let params = ev.fresh(m);
            let outs = ps.iter().map(|p| SPoly::from_multi(p, &params)).collect();
            SVal::Fun { params, outs, tuple_in, tuple_out }
        };
        match v {
            Value::Scalar(r) => SVal::Scalar(SPoly::constant(r.clone())),
            Value::Tuple(rs) => SVal::Tuple(rs.iter().map(|r| SPoly::constant(r.clone())).collect()),
            Value::Index(c, _) => SVal::Index(*c),
            Value::Fun11(p) => fun(self, 1, std::slice::from_ref(p), false, false),
            Value::FunM1(p) => fun(self, p.nvars(), std::slice::from_ref(p), true, false),
            Value::Fun1N(ps) => fun(self, 1, ps, false, true),
            Value::FunMN(m, ps) => fun(self, *m, ps, true, true),
        }
    }

    fn dim(d: &Dim) -> Result<usize, InterpError> {
        d.lit().ok_or_else(|| InterpError::Symbolic(format!("arity {d}")))
    }

    fn slot(&mut self, s: &GSlot) -> Result<usize, InterpError> {
        match s {
            Slot::At(Idx::Lit(p)) => Ok(*p),
            Slot::At(Idx::Param(p)) => Err(InterpError::Symbolic(format!("position {p}"))),
            Slot::By(t) => match self.eval(t)? {
                SVal::Index(c) => Ok(c),
                _ => Err(internal("an index")),
            },
        }
    }

    fn scalar(&mut self, t: &GTerm) -> Result<SPoly, InterpError> {
        match self.eval(t)? {
            SVal::Scalar(p) => Ok(p),
            _ => Err(internal("a scalar")),
        }
    }

    fn fun(&mut self, t: &GTerm) -> Result<(Vec<u32>, Vec<SPoly>, bool, bool), InterpError> {
        match self.eval(t)? {
            SVal::Fun { params, outs, tuple_in, tuple_out } => Ok((params, outs, tuple_in, tuple_out)),
            _ => Err(internal("a function")),
        }
    }

    fn bind<T>(&mut self, v: SVal, f: impl FnOnce(&mut Self) -> Result<T, InterpError>) -> Result<T, InterpError> {
        self.stack.push(v);
        let r = f(self);
        self.stack.pop();
        r
    }

    fn eval(&mut self, t: &GTerm) -> Result<SVal, InterpError> {
        Ok(match t {
            GTerm::Var(_, i) => {
                let n = self.stack.len();
                if *i >= n {
                    return Err(InterpError::EnvironmentMismatch(format!("unbound index {i}")));
                }
                self.stack[n - 1 - i].clone()
            }
            GTerm::Lam(b, _, body) => {
                let (m, tuple_in) = match b {
                    Binder::TT(m) | Binder::TS(m) => (Self::dim(m)?, true),
                    Binder::ST | Binder::SS => (1, false),
                };
                let params = self.fresh(m);
                let arg = if tuple_in {
                    SVal::Tuple(params.iter().map(|p| SPoly::var(*p)).collect())
                } else {
                    SVal::Scalar(SPoly::var(params[0]))
                };
                let (outs, tuple_out) = match self.bind(arg, |ev| ev.eval(body))? {
                    SVal::Scalar(p) => (vec![p], false),
                    SVal::Tuple(ps) => (ps, true),
                    _ => return Err(InterpError::NonPolynomialBody),
                };
                SVal::Fun { params, outs, tuple_in, tuple_out }
            }
            GTerm::Sum(k, _, body) => {
                let k = Self::dim(k)?;
                let mut acc = SPoly::default();
                for c in 0..k {
                    let term = self.bind(SVal::Index(c), |ev| ev.scalar(body))?;
                    acc = acc.add(&term);
                }
                SVal::Scalar(acc)
            }
            GTerm::App(kind, head, arg) => {
                let (params, outs, _, tuple_out) = self.fun(head)?;
                let args = match (kind, self.eval(arg)?) {
                    (AppKind::A11 | AppKind::A1N, SVal::Scalar(p)) => vec![p],
                    (AppKind::AM1 | AppKind::AMN, SVal::Tuple(ps)) => ps,
                    _ => return Err(internal("an argument")),
                };
                if args.len() != params.len() {
                    return Err(InterpError::ArityMismatch { expected: params.len(), found: args.len() });
                }
                let outs = outs.iter().map(|o| o.substitute(&params, &args)).collect::<Result<Vec<_>, _>>()?;
                if tuple_out {
                    SVal::Tuple(outs)
                } else {
                    SVal::Scalar(outs.into_iter().next().ok_or_else(|| internal("one output"))?)
                }
            }
            GTerm::Subst(subject, target, slot, value) => {
                let v = self.eval(target)?;
                let p = self.slot(slot)?;
                let u = self.scalar(value)?;
                replace(v, *subject, p, u)?
            }
            GTerm::ExpandSubst(target, slot, value) => {
                let v = self.eval(target)?;
                let p = self.slot(slot)?;
                let u = self.scalar(value)?;
                replace(v, Subject::K, p, u)?
            }
            GTerm::Proj(_, target, slot) => {
                let v = self.eval(target)?;
                let p = self.slot(slot)?;
                match v {
                    SVal::Tuple(ps) => SVal::Scalar(ps.get(p).cloned().ok_or_else(|| internal("a component"))?),
                    SVal::Fun { params, outs, tuple_in, .. } => SVal::Fun {
                        params,
                        outs: vec![outs.get(p).cloned().ok_or_else(|| internal("a component"))?],
                        tuple_in,
                        tuple_out: false,
                    },
                    _ => return Err(internal("a tuple or function")),
                }
            }
            GTerm::Comp(kind, outer, inner) => {
                let (op, oo, _, tuple_out) = self.fun(outer)?;
                let (ip, io, tuple_in, _) = self.fun(inner)?;
                let args = match kind {
                    CompKind::C111 | CompKind::C1K1 | CompKind::CMKN | CompKind::CM1N => io,
                };
                if args.len() != op.len() {
                    return Err(InterpError::ArityMismatch { expected: op.len(), found: args.len() });
                }
                let outs = oo.iter().map(|o| o.substitute(&op, &args)).collect::<Result<Vec<_>, _>>()?;
                SVal::Fun { params: ip, outs, tuple_in, tuple_out }
            }
            GTerm::Prime(f) => {
                let (params, outs, tuple_in, tuple_out) = self.fun(f)?;
                if params.len() != 1 || outs.len() != 1 {
                    return Err(InterpError::ArityMismatch { expected: 1, found: params.len() });
                }
                SVal::Fun { outs: vec![outs[0].partial(params[0])], params, tuple_in, tuple_out }
            }
            GTerm::Mul(a, b) => {
                let a = self.scalar(a)?;
                let b = self.scalar(b)?;
                SVal::Scalar(a.mul(&b)?)
            }
            GTerm::Expand(t) | GTerm::Note(_, t) => self.eval(t)?,
        })
    }
}

fn replace(v: SVal, subject: Subject, p: usize, u: SPoly) -> Result<SVal, InterpError> {
    Ok(match (subject, v) {
        (Subject::K, SVal::Tuple(mut ps)) => {
            *ps.get_mut(p).ok_or_else(|| internal("a component"))? = u;
            SVal::Tuple(ps)
        }
        (Subject::N | Subject::MN, SVal::Fun { params, mut outs, tuple_in, tuple_out }) => {
            *outs.get_mut(p).ok_or_else(|| internal("a component"))? = u;
            SVal::Fun { params, outs, tuple_in, tuple_out }
        }
        _ => return Err(internal("a substitutable value")),
    })
}

fn lower(v: SVal, ty: &crate::lang::TypeExpr) -> Result<Value, InterpError> {
    use crate::lang::TypeExpr as T;
    let closed = |p: &SPoly, ids: &[u32]| p.to_multi(ids).ok_or_else(|| internal("a closed polynomial"));
    let constant = |p: &SPoly| -> Result<Rational, InterpError> {
        Ok(closed(p, &[])?.terms().values().next().cloned().unwrap_or_else(Rational::zero))
    };
    Ok(match (ty, v) {
        (T::Scalar, SVal::Scalar(p)) => Value::Scalar(constant(&p)?),
        (T::Tuple(_), SVal::Tuple(ps)) => Value::Tuple(ps.iter().map(constant).collect::<Result<_, _>>()?),
        (T::Index(k), SVal::Index(c)) => Value::Index(c, *k),
        (T::Fun11, SVal::Fun { params, outs, .. }) => Value::Fun11(closed(&outs[0], &params)?),
        (T::FunM1(_), SVal::Fun { params, outs, .. }) => Value::FunM1(closed(&outs[0], &params)?),
        (T::Fun1N(_), SVal::Fun { params, outs, .. }) => {
            Value::Fun1N(outs.iter().map(|o| closed(o, &params)).collect::<Result<_, _>>()?)
        }
        (T::FunMN(m, _), SVal::Fun { params, outs, .. }) => {
            Value::FunMN(*m, outs.iter().map(|o| closed(o, &params)).collect::<Result<_, _>>()?)
        }
        _ => return Err(internal("a value of the inferred type")),
    })
}

/// Evaluate a generic term whose arities and positions are all literal.
/// Notes and expansion nodes are transparent.
pub fn eval_generic(ctx: &GContext, env: &Environment, t: &GTerm) -> Result<Value, InterpError> {
    let cctx = ctx.concrete().ok_or_else(|| InterpError::Symbolic("context arity".into()))?;
    env.check_against(&cctx)?;
    let ty = infer(ctx, t)?;
    let ty = ty.concrete().ok_or_else(|| InterpError::Symbolic(format!("type {ty}")))?;
    let mut ev = Evaluator { stack: Vec::new(), next_id: 0 };
    for v in env.values() {
        let s = ev.lift(v);
        ev.stack.push(s);
    }
    let v = ev.eval(t)?;
    lower(v, &ty)
}

/// Evaluate a checked term in an environment for its context.
pub fn eval(env: &Environment, t: &TypedTerm) -> Result<Value, InterpError> {
    eval_generic(&t.ctx().generic(), env, &GTerm::from(t.term()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deriv::encode_in;
    use crate::lang::{parse_term, type_check, Context, Name, Term, TypeExpr};

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn p(m: usize, s: &str) -> MultiPoly {
        MultiPoly::parse(m, s).unwrap()
    }

    fn run(ctx: &[(&str, TypeExpr, Value)], term: &str) -> Value {
        let mut c = Context::new();
        let mut env = Environment::default();
        for (n, t, v) in ctx {
            c = c.extend(Name::new(*n), t.clone());
            env.push(v.clone());
        }
        let t = type_check(&c, &parse_term(term).unwrap()).unwrap();
        eval(&env, &t).unwrap()
    }

    #[test]
    fn lookup() {
        let half = Rational::new(7.into(), 2.into());
        assert_eq!(run(&[("x", TypeExpr::Scalar, Value::Scalar(half.clone()))], "(var x 0)"), Value::Scalar(half));
    }

    #[test]
    fn application_at_a_point() {
        let f = ("f", TypeExpr::Fun11, Value::Fun11(p(1, "x1^2 + 1")));
        let three = ("a", TypeExpr::Scalar, Value::Scalar(r(3)));
        // Long-hand: 3 * 3 + 1.
        let expected = r(3) * r(3) + r(1);
        assert_eq!(run(&[f, three], "(app-11 (var f 1) (var a 0))"), Value::Scalar(expected));
    }

    #[test]
    fn sum_over_index() {
        let t = ("t", TypeExpr::Tuple(2), Value::Tuple(vec![r(2), r(5)]));
        let got = run(&[t], "(sum 2 k (proj-ki (var t 1) (var k 0)))");
        let brute: Rational = [r(2), r(5)].iter().sum();
        assert_eq!(got, Value::Scalar(brute));
    }

    #[test]
    fn lambdas_become_polynomials() {
        let got = run(&[], "(lam-ts 2 x (mul (proj-k (var x 0) 0) (proj-k (var x 0) 1)))");
        assert_eq!(got, Value::FunM1(p(2, "x1 x2")));
        let got = run(&[], "(prime (lam-ss z (mul (var z 0) (var z 0))))");
        assert_eq!(got, Value::Fun11(p(1, "2 x1")));
    }

    #[test]
    fn partial_derivative_at_a_point() {
        let f = Value::FunMN(2, vec![p(2, "x1 x2")]);
        let ctx = Context::new().extend(Name::new("f"), TypeExpr::FunMN(2, 1));
        let d = encode_in(&ctx, &Term::var("f", 0), 0, 0).unwrap();
        let dv = eval(&Environment::new(vec![f]), &d).unwrap();
        let Value::FunM1(q) = dv else { panic!("expected a FunM1 value") };
        assert_eq!(q.eval(&[r(3), r(5)]).unwrap(), r(5));
    }

    #[test]
    fn composition_and_substitution() {
        let f = ("f", TypeExpr::FunMN(2, 1), Value::FunMN(2, vec![p(2, "x1 x2")]));
        let g = ("g", TypeExpr::FunMN(2, 2), Value::FunMN(2, vec![p(2, "x1 + x2"), p(2, "x1 x2")]));
        let got = run(&[f.clone(), g], "(comp-mkn (var f 1) (var g 0))");
        assert_eq!(got, Value::FunMN(2, vec![p(2, "x1^2 x2 + x1 x2^2")]));
        let t = ("t", TypeExpr::Tuple(2), Value::Tuple(vec![r(2), r(5)]));
        assert_eq!(run(&[t], "(subst-k (var t 0) 1 (mul (proj-k (var t 0) 0) (proj-k (var t 0) 0)))"), Value::Tuple(vec![r(2), r(4)]));
    }

    #[test]
    fn symbolic_input_is_rejected() {
        let ctx = GContext::new();
        let t = GTerm::lam(Binder::TS(Dim::Var("m".into())), "x", GTerm::proj(Subject::K, GTerm::var("x", 0), Slot::At(Idx::Lit(0))));
        assert!(matches!(eval_generic(&ctx, &Environment::default(), &t), Err(InterpError::Symbolic(_))));
    }
}
