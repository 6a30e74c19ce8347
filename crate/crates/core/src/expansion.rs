//! Tuple expansion: instantiating symbolic arities and writing expansion
//! nodes out component by component.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::lang::{
    infer, type_check, AppKind, Binder, CompKind, Context, Dim, GContext, GSlot, GTerm, GType, Idx,
    Name, Slot, Subject, Term, Ty, TypeError, TypeExpr, MAX_ARITY,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpansionError {
    #[error("arity variable {0} has no assigned value")]
    UnassignedArity(String),
    #[error("index parameter {0} has no assigned value")]
    UnassignedIndex(String),
    #[error("position {position} out of range for arity {arity}")]
    PositionOutOfRange { position: usize, arity: usize },
    #[error("arity {value} assigned to {name} is outside 1..={MAX_ARITY}")]
    BadArity { name: String, value: usize },
    #[error("expanded term is ill-typed: {0}")]
    IllTyped(#[from] TypeError),
}

/// Values for arity variables and, optionally, symbolic component positions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ArityAssignment {
    pub arities: BTreeMap<String, usize>,
    pub positions: BTreeMap<String, usize>,
}

impl ArityAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn arity(mut self, name: &str, value: usize) -> Self {
        self.arities.insert(name.to_string(), value);
        self
    }

    pub fn position(mut self, name: &str, value: usize) -> Self {
        self.positions.insert(name.to_string(), value);
        self
    }

    /// Parse `m=2,n=3` into a name-to-value map.
    pub fn parse_bindings(text: &str) -> Result<BTreeMap<String, usize>, String> {
        let mut out = BTreeMap::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected NAME=VALUE, found {part:?}"))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| format!("expected a natural number in {part:?}"))?;
            out.insert(name.trim().to_string(), value);
        }
        Ok(out)
    }

    fn dim(&self, d: &Dim) -> Result<usize, ExpansionError> {
        match d {
            Dim::Lit(n) => Ok(*n),
            Dim::Var(v) => {
                let n = *self
                    .arities
                    .get(v)
                    .ok_or_else(|| ExpansionError::UnassignedArity(v.clone()))?;
                if n == 0 || n > MAX_ARITY {
                    return Err(ExpansionError::BadArity { name: v.clone(), value: n });
                }
                Ok(n)
            }
        }
    }

    fn idx(&self, i: &Idx) -> Result<usize, ExpansionError> {
        match i {
            Idx::Lit(n) => Ok(*n),
            Idx::Param(p) => self
                .positions
                .get(p)
                .copied()
                .ok_or_else(|| ExpansionError::UnassignedIndex(p.clone())),
        }
    }
}

/// Component `p` of a tuple-valued term, pushed through the constructors
/// that build tuples so that no projection of a known tuple remains.
pub fn component(t: &GTerm, p: &GSlot) -> GTerm {
    match t.peel() {
        GTerm::App(AppKind::AMN, h, x) => {
            GTerm::app(AppKind::AM1, GTerm::Proj(Subject::MN, h.clone(), p.clone()), (**x).clone())
        }
        GTerm::App(AppKind::A1N, h, s) => {
            GTerm::app(AppKind::A11, GTerm::Proj(Subject::N, h.clone(), p.clone()), (**s).clone())
        }
        GTerm::Subst(Subject::K, inner, q, v) | GTerm::ExpandSubst(inner, q, v) => {
            match (p, q) {
                (Slot::At(a), Slot::At(b)) if a == b => (**v).clone(),
                (Slot::At(Idx::Lit(_)), Slot::At(Idx::Lit(_))) => component(inner, p),
                (Slot::By(a), Slot::By(b)) if a == b => (**v).clone(),
                _ => GTerm::Proj(Subject::K, Box::new(t.clone()), p.clone()),
            }
        }
        GTerm::Expand(inner) => component(inner, p),
        _ => GTerm::Proj(Subject::K, Box::new(t.clone()), p.clone()),
    }
}

/// Replace arity variables and index parameters by their assigned values.
pub fn instantiate_symbols(g: &GTerm, a: &ArityAssignment) -> Result<GTerm, ExpansionError> {
    let d = |x: &Dim| a.dim(x).map(Dim::Lit);
    let slot = |s: &GSlot| -> Result<GSlot, ExpansionError> {
        Ok(match s {
            Slot::At(i) => Slot::At(Idx::Lit(a.idx(i)?)),
            Slot::By(t) => Slot::By(Box::new(instantiate_symbols(t, a)?)),
        })
    };
    let b = |t: &GTerm| instantiate_symbols(t, a).map(Box::new);
    Ok(match g {
        GTerm::Var(n, i) => GTerm::Var(n.clone(), *i),
        GTerm::Lam(bd, n, body) => {
            let bd = match bd {
                Binder::TT(m) => Binder::TT(d(m)?),
                Binder::TS(m) => Binder::TS(d(m)?),
                Binder::ST => Binder::ST,
                Binder::SS => Binder::SS,
            };
            GTerm::Lam(bd, n.clone(), b(body)?)
        }
        GTerm::Sum(k, n, body) => GTerm::Sum(d(k)?, n.clone(), b(body)?),
        GTerm::App(k, x, y) => GTerm::App(*k, b(x)?, b(y)?),
        GTerm::Subst(k, t, s, u) => GTerm::Subst(*k, b(t)?, slot(s)?, b(u)?),
        GTerm::Proj(k, t, s) => GTerm::Proj(*k, b(t)?, slot(s)?),
        GTerm::Comp(k, x, y) => GTerm::Comp(*k, b(x)?, b(y)?),
        GTerm::Prime(t) => GTerm::Prime(b(t)?),
        GTerm::Mul(x, y) => GTerm::Mul(b(x)?, b(y)?),
        GTerm::Expand(t) => GTerm::Expand(b(t)?),
        GTerm::ExpandSubst(t, s, u) => GTerm::ExpandSubst(b(t)?, slot(s)?, b(u)?),
        GTerm::Note(note, t) => GTerm::Note(note.clone(), b(t)?),
    })
}

pub fn instantiate_type(t: &GType, a: &ArityAssignment) -> Result<GType, ExpansionError> {
    let mut err = None;
    let out = t.clone().map(|d| match a.dim(&d) {
        Ok(n) => Dim::Lit(n),
        Err(e) => {
            err.get_or_insert(e);
            d
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Write every expansion node of a term with literal arities as the chain
/// `t[•0 := t⁰]…[•K-1 := tᴷ⁻¹]` of literal substitutions.
pub fn expand_nodes(ctx: &GContext, g: &GTerm) -> Result<GTerm, ExpansionError> {
    let mut ctx = ctx.clone();
    expand_in(&mut ctx, g)
}

fn tuple_arity(ctx: &GContext, t: &GTerm) -> Result<usize, ExpansionError> {
    match infer(ctx, t)? {
        Ty::Tuple(Dim::Lit(k)) => Ok(k),
        Ty::Tuple(Dim::Var(v)) => Err(ExpansionError::UnassignedArity(v)),
        other => Err(ExpansionError::IllTyped(TypeError::TypeMismatch {
            expected: "Tuple _".into(),
            found: other.to_string(),
            path: Default::default(),
        })),
    }
}

fn chain(t: &GTerm, k: usize, mut slot_value: impl FnMut(usize) -> Option<GTerm>) -> GTerm {
    let mut acc = t.clone();
    for c in 0..k {
        let v = slot_value(c).unwrap_or_else(|| component(t, &Slot::At(Idx::Lit(c))));
        acc = GTerm::subst(Subject::K, acc, Slot::At(Idx::Lit(c)), v);
    }
    acc
}

fn expand_in(ctx: &mut GContext, g: &GTerm) -> Result<GTerm, ExpansionError> {
    match g {
        GTerm::Expand(t) => {
            let t = expand_in(ctx, t)?;
            let k = tuple_arity(ctx, &t)?;
            Ok(chain(&t, k, |_| None))
        }
        GTerm::ExpandSubst(t, s, u) => {
            let t = expand_in(ctx, t)?;
            let u = expand_in(ctx, u)?;
            let k = tuple_arity(ctx, &t)?;
            match s {
                Slot::At(Idx::Lit(p)) => {
                    if *p >= k {
                        return Err(ExpansionError::PositionOutOfRange { position: *p, arity: k });
                    }
                    Ok(chain(&t, k, |c| (c == *p).then(|| u.clone())))
                }
                Slot::At(Idx::Param(p)) => Err(ExpansionError::UnassignedIndex(p.clone())),
                Slot::By(i) => {
                    let i = expand_in(ctx, i)?;
                    Ok(GTerm::subst(Subject::K, chain(&t, k, |_| None), Slot::By(Box::new(i)), u))
                }
            }
        }
        _ => {
            let mut out = g.clone();
            let n = g.children().len();
            for i in 0..n {
                let child = g.children()[i];
                let bound = g.binding_for_child(i);
                if let Some((name, ty)) = bound.clone() {
                    ctx.push(name, ty);
                }
                let r = expand_in(ctx, child);
                if bound.is_some() {
                    ctx.pop();
                }
                *out.at_mut(&vec![i].into()).expect("child exists") = r?;
            }
            Ok(out)
        }
    }
}

/// Instantiate a generic term and its context, expand every expansion node,
/// and check that the result is a well-typed concrete term.
pub fn instantiate_arity(
    ctx: &GContext,
    g: &GTerm,
    a: &ArityAssignment,
) -> Result<(Context, Term), ExpansionError> {
    let entries = ctx
        .entries()
        .iter()
        .map(|(n, t)| Ok((n.clone(), instantiate_type(t, a)?)))
        .collect::<Result<Vec<_>, ExpansionError>>()?;
    let gctx = GContext::from_entries(entries);
    let g = instantiate_symbols(&g.erase_notes(), a)?;
    let expanded = expand_nodes(&gctx, &g)?;
    let cctx = gctx.concrete().expect("all arities were instantiated");
    let term = expanded.to_term().expect("no symbols or expansion nodes remain");
    type_check(&cctx, &term)?;
    Ok((cctx, term))
}

/// A display name not bound in `ctx`: `base`, then `base1`, `base2`, …
pub fn fresh_name(ctx: &GContext, base: &str) -> String {
    let taken: BTreeSet<&str> = ctx.entries().iter().map(|(n, _)| n.as_str()).collect();
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !taken.contains(n.as_str()))
        .expect("an unbounded supply of names")
}

fn collapse_type(t: &TypeExpr) -> TypeExpr {
    match t {
        Ty::Tuple(1) => Ty::Scalar,
        Ty::FunM1(1) | Ty::Fun1N(1) | Ty::FunMN(1, 1) => Ty::Fun11,
        Ty::FunMN(m, 1) => Ty::FunM1(*m),
        Ty::FunMN(1, n) => Ty::Fun1N(*n),
        other => other.clone(),
    }
}

/// Identify one-tuples with scalars: every arity-1 tuple becomes a scalar
/// and every constructor is replaced by the one matching the collapsed
/// types.
pub fn collapse_unit_arity(ctx: &Context, t: &Term) -> Result<(Context, Term), TypeError> {
    type_check(ctx, t)?;
    let mut c = ctx.clone();
    let out = Collapser { ctx: &mut c }.go(t);
    let new_ctx = Context::from_entries(
        ctx.entries()
            .iter()
            .map(|(n, ty)| (n.clone(), collapse_type(ty)))
            .collect(),
    );
    Ok((new_ctx, out))
}

struct Collapser<'a> {
    ctx: &'a mut Context,
}

impl Collapser<'_> {
    fn ty(&self, t: &Term) -> TypeExpr {
        type_check(self.ctx, t).expect("subterms of a well-typed term").ty().clone()
    }

    fn under(&mut self, name: &Name, ty: TypeExpr, body: &Term) -> Term {
        self.ctx.push(name.clone(), ty);
        let r = self.go(body);
        self.ctx.pop();
        r
    }

    fn go(&mut self, t: &Term) -> Term {
        let bx = Box::new;
        match t {
            Term::Var(n, i) => Term::Var(n.clone(), *i),
            Term::Lam(b, n, body) => {
                let dom = match b {
                    Binder::TT(m) | Binder::TS(m) => Ty::Tuple(*m),
                    _ => Ty::Scalar,
                };
                let new_body = self.under(n, dom.clone(), body);
                let cod = {
                    self.ctx.push(n.clone(), dom.clone());
                    let c = collapse_type(&self.ty(body));
                    self.ctx.pop();
                    c
                };
                let binder = match (collapse_type(&dom), cod) {
                    (Ty::Scalar, Ty::Scalar) => Binder::SS,
                    (Ty::Scalar, _) => Binder::ST,
                    (_, Ty::Scalar) => Binder::TS(dom_arity(&dom)),
                    _ => Binder::TT(dom_arity(&dom)),
                };
                Term::Lam(binder, n.clone(), bx(new_body))
            }
            Term::Sum(k, n, body) => Term::Sum(*k, n.clone(), bx(self.under(n, Ty::Index(*k), body))),
            Term::App(_, h, x) => {
                let kind = match collapse_type(&self.ty(h)) {
                    Ty::Fun11 => AppKind::A11,
                    Ty::FunM1(_) => AppKind::AM1,
                    Ty::Fun1N(_) => AppKind::A1N,
                    _ => AppKind::AMN,
                };
                Term::App(kind, bx(self.go(h)), bx(self.go(x)))
            }
            Term::Subst(s, target, slot, v) => {
                let tty = self.ty(target);
                let unit = matches!(
                    (s, &tty),
                    (Subject::K, Ty::Tuple(1)) | (Subject::N, Ty::Fun1N(1)) | (Subject::MN, Ty::FunMN(_, 1))
                );
                if unit {
                    match (s, &tty) {
                        (Subject::K, _) => self.go(v),
                        (Subject::N, _) => Term::lam(Binder::SS, "_", self.go(v).shift(1, 0)),
                        (_, Ty::FunMN(1, _)) => Term::lam(Binder::SS, "_", self.go(v).shift(1, 0)),
                        (_, Ty::FunMN(m, _)) => Term::lam(Binder::TS(*m), "_", self.go(v).shift(1, 0)),
                        _ => unreachable!(),
                    }
                } else {
                    let slot = match slot {
                        Slot::At(p) => Slot::At(*p),
                        Slot::By(i) => Slot::By(bx(self.go(i))),
                    };
                    Term::Subst(*s, bx(self.go(target)), slot, bx(self.go(v)))
                }
            }
            Term::Proj(s, target, slot) => {
                let tty = self.ty(target);
                let unit = matches!(
                    (s, &tty),
                    (Subject::K, Ty::Tuple(1)) | (Subject::N, Ty::Fun1N(1)) | (Subject::MN, Ty::FunMN(_, 1))
                );
                if unit {
                    self.go(target)
                } else {
                    let slot = match slot {
                        Slot::At(p) => Slot::At(*p),
                        Slot::By(i) => Slot::By(bx(self.go(i))),
                    };
                    Term::Proj(*s, bx(self.go(target)), slot)
                }
            }
            Term::Comp(_, a, b) => {
                let kind = match (collapse_type(&self.ty(a)), collapse_type(&self.ty(b))) {
                    (Ty::Fun11, Ty::Fun11) => CompKind::C111,
                    (Ty::FunM1(_), Ty::Fun1N(_)) => CompKind::C1K1,
                    (Ty::Fun1N(_), Ty::FunM1(_)) => CompKind::CM1N,
                    _ => CompKind::CMKN,
                };
                Term::Comp(kind, bx(self.go(a)), bx(self.go(b)))
            }
            Term::Prime(a) => Term::Prime(bx(self.go(a))),
            Term::Mul(a, b) => Term::Mul(bx(self.go(a)), bx(self.go(b))),
        }
    }
}

fn dom_arity(t: &TypeExpr) -> usize {
    match t {
        Ty::Tuple(m) => *m,
        _ => 1,
    }
}
