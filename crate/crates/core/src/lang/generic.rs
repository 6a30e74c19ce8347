//! Terms whose arities and component positions may be symbolic, plus the
//! tuple-expansion nodes and display notes used by derivation listings.

use std::fmt;

use super::context::{GContext, Name};
use super::term::{AppKind, Binder, CompKind, Slot, Subject, Term};
use super::types::{Dim, GType};

/// A literal component position, or a symbolic parameter such as `i` or `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Idx {
    Lit(usize),
    Param(String),
}

impl fmt::Display for Idx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Idx::Lit(n) => write!(f, "{n}"),
            Idx::Param(p) => f.write_str(p),
        }
    }
}

pub type GSlot = Slot<Idx, GTerm>;

/// Presentation-only wrappers. A note never changes the type or value of
/// the term it wraps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Note {
    /// Display the wrapped term as a named symbol such as `a^k`.
    Abbrev { symbol: String, sup: Option<Box<GTerm>> },
    /// Display a partial-derivative encoding as `∂f^j/∂var^i`.
    Partial { var: Name },
    /// `(x…) ↦ D(g(x…)…)` displayed as `D ∘ g`.
    Compose,
    /// `(x…) ↦ A(x…) · B(x…)` displayed as `A ⊗ B`.
    Tensor,
    /// A tensor whose left factor is precomposed, displayed as `D ⊗^{(g×id)} B`.
    TensorPre,
    /// `(x…) ↦ Σ_k T(x…)` displayed as `⊕_k T`.
    DirectSum,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GTerm {
    Var(Name, usize),
    Lam(Binder<Dim>, Name, Box<GTerm>),
    Sum(Dim, Name, Box<GTerm>),
    App(AppKind, Box<GTerm>, Box<GTerm>),
    Subst(Subject, Box<GTerm>, GSlot, Box<GTerm>),
    Proj(Subject, Box<GTerm>, GSlot),
    Comp(CompKind, Box<GTerm>, Box<GTerm>),
    Prime(Box<GTerm>),
    Mul(Box<GTerm>, Box<GTerm>),
    /// `t…`: the tuple `t` written out component by component.
    Expand(Box<GTerm>),
    /// `t…[•^p := u]`: the expansion of `t` with position `p` replaced by `u`.
    ExpandSubst(Box<GTerm>, GSlot, Box<GTerm>),
    Note(Note, Box<GTerm>),
}

/// A position in a syntax tree: the child ordinals taken from the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TermPath(pub Vec<usize>);

impl TermPath {
    pub fn root() -> Self {
        TermPath(Vec::new())
    }

    pub fn child(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.push(i);
        TermPath(v)
    }

    pub fn join(&self, rest: &[usize]) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(rest);
        TermPath(v)
    }
}

impl From<Vec<usize>> for TermPath {
    fn from(v: Vec<usize>) -> Self {
        TermPath(v)
    }
}

impl fmt::Display for TermPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("/");
        }
        for i in &self.0 {
            write!(f, "/{i}")?;
        }
        Ok(())
    }
}

fn bx(t: GTerm) -> Box<GTerm> {
    Box::new(t)
}

impl GTerm {
    pub fn var(name: &str, index: usize) -> GTerm {
        GTerm::Var(Name::new(name), index)
    }

    pub fn lam(binder: Binder<Dim>, name: &str, body: GTerm) -> GTerm {
        GTerm::Lam(binder, Name::new(name), bx(body))
    }

    pub fn sum(k: Dim, name: &str, body: GTerm) -> GTerm {
        GTerm::Sum(k, Name::new(name), bx(body))
    }

    pub fn app(kind: AppKind, head: GTerm, arg: GTerm) -> GTerm {
        GTerm::App(kind, bx(head), bx(arg))
    }

    pub fn subst(subject: Subject, t: GTerm, at: GSlot, u: GTerm) -> GTerm {
        GTerm::Subst(subject, bx(t), at, bx(u))
    }

    pub fn proj(subject: Subject, t: GTerm, at: GSlot) -> GTerm {
        GTerm::Proj(subject, bx(t), at)
    }

    pub fn comp(kind: CompKind, t: GTerm, u: GTerm) -> GTerm {
        GTerm::Comp(kind, bx(t), bx(u))
    }

    pub fn prime(t: GTerm) -> GTerm {
        GTerm::Prime(bx(t))
    }

    pub fn mul(t: GTerm, u: GTerm) -> GTerm {
        GTerm::Mul(bx(t), bx(u))
    }

    pub fn note(note: Note, t: GTerm) -> GTerm {
        GTerm::Note(note, bx(t))
    }

    /// Immediate subterms in textual order.
    pub fn children(&self) -> Vec<&GTerm> {
        match self {
            GTerm::Var(..) => vec![],
            GTerm::Lam(_, _, b)
            | GTerm::Sum(_, _, b)
            | GTerm::Prime(b)
            | GTerm::Expand(b)
            | GTerm::Note(_, b) => vec![b],
            GTerm::App(_, a, b) | GTerm::Comp(_, a, b) | GTerm::Mul(a, b) => vec![a, b],
            GTerm::Subst(_, t, Slot::At(_), u) | GTerm::ExpandSubst(t, Slot::At(_), u) => {
                vec![t, u]
            }
            GTerm::Subst(_, t, Slot::By(i), u) | GTerm::ExpandSubst(t, Slot::By(i), u) => {
                vec![t, i, u]
            }
            GTerm::Proj(_, t, Slot::At(_)) => vec![t],
            GTerm::Proj(_, t, Slot::By(i)) => vec![t, i],
        }
    }

    fn children_mut(&mut self) -> Vec<&mut GTerm> {
        match self {
            GTerm::Var(..) => vec![],
            GTerm::Lam(_, _, b)
            | GTerm::Sum(_, _, b)
            | GTerm::Prime(b)
            | GTerm::Expand(b)
            | GTerm::Note(_, b) => vec![b],
            GTerm::App(_, a, b) | GTerm::Comp(_, a, b) | GTerm::Mul(a, b) => vec![a, b],
            GTerm::Subst(_, t, Slot::At(_), u) | GTerm::ExpandSubst(t, Slot::At(_), u) => {
                vec![t, u]
            }
            GTerm::Subst(_, t, Slot::By(i), u) | GTerm::ExpandSubst(t, Slot::By(i), u) => {
                vec![t, i, u]
            }
            GTerm::Proj(_, t, Slot::At(_)) => vec![t],
            GTerm::Proj(_, t, Slot::By(i)) => vec![t, i],
        }
    }

    /// The binding introduced for child `i`, if that child sits under a binder.
    pub fn binding_for_child(&self, i: usize) -> Option<(Name, GType)> {
        match (self, i) {
            (GTerm::Lam(b, n, _), 0) => Some((
                n.clone(),
                match b {
                    Binder::TT(m) | Binder::TS(m) => GType::Tuple(m.clone()),
                    Binder::ST | Binder::SS => GType::Scalar,
                },
            )),
            (GTerm::Sum(k, n, _), 0) => Some((n.clone(), GType::Index(k.clone()))),
            _ => None,
        }
    }

    pub fn at(&self, path: &TermPath) -> Option<&GTerm> {
        let mut t = self;
        for &i in &path.0 {
            t = *t.children().get(i)?;
        }
        Some(t)
    }

    pub fn at_mut(&mut self, path: &TermPath) -> Option<&mut GTerm> {
        let mut t = self;
        for &i in &path.0 {
            t = t.children_mut().into_iter().nth(i)?;
        }
        Some(t)
    }

    /// The context in force at `path`, starting from `ctx` at the root.
    pub fn context_at(&self, ctx: &GContext, path: &TermPath) -> Option<GContext> {
        let mut ctx = ctx.clone();
        let mut t = self;
        for &i in &path.0 {
            if let Some((n, ty)) = t.binding_for_child(i) {
                ctx.push(n, ty);
            }
            t = *t.children().get(i)?;
        }
        Some(ctx)
    }

    /// Number of binders crossed on the way down to `path`.
    pub fn binders_above(&self, path: &TermPath) -> Option<usize> {
        let mut t = self;
        let mut n = 0;
        for &i in &path.0 {
            if t.binding_for_child(i).is_some() {
                n += 1;
            }
            t = *t.children().get(i)?;
        }
        Some(n)
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Rebuild the term, replacing every variable occurrence by `f(depth, name, index)`
    /// where `depth` counts binders crossed since the root of this call.
    pub fn map_vars(&self, f: &mut impl FnMut(usize, &Name, usize) -> GTerm) -> GTerm {
        self.map_vars_at(0, f)
    }

    fn map_vars_at(&self, d: usize, f: &mut impl FnMut(usize, &Name, usize) -> GTerm) -> GTerm {
        let slot = |s: &GSlot, f: &mut dyn FnMut(&GTerm) -> GTerm| match s {
            Slot::At(p) => Slot::At(p.clone()),
            Slot::By(i) => Slot::By(bx(f(i))),
        };
        match self {
            GTerm::Var(n, i) => f(d, n, *i),
            GTerm::Lam(b, n, body) => GTerm::Lam(b.clone(), n.clone(), bx(body.map_vars_at(d + 1, f))),
            GTerm::Sum(k, n, body) => GTerm::Sum(k.clone(), n.clone(), bx(body.map_vars_at(d + 1, f))),
            GTerm::App(k, a, b) => GTerm::App(*k, bx(a.map_vars_at(d, f)), bx(b.map_vars_at(d, f))),
            GTerm::Subst(k, t, s, u) => {
                let t = t.map_vars_at(d, f);
                let s = slot(s, &mut |i| i.map_vars_at(d, f));
                GTerm::Subst(*k, bx(t), s, bx(u.map_vars_at(d, f)))
            }
            GTerm::Proj(k, t, s) => {
                let t = t.map_vars_at(d, f);
                GTerm::Proj(*k, bx(t), slot(s, &mut |i| i.map_vars_at(d, f)))
            }
            GTerm::Comp(k, a, b) => GTerm::Comp(*k, bx(a.map_vars_at(d, f)), bx(b.map_vars_at(d, f))),
            GTerm::Prime(t) => GTerm::Prime(bx(t.map_vars_at(d, f))),
            GTerm::Mul(a, b) => GTerm::Mul(bx(a.map_vars_at(d, f)), bx(b.map_vars_at(d, f))),
            GTerm::Expand(t) => GTerm::Expand(bx(t.map_vars_at(d, f))),
            GTerm::ExpandSubst(t, s, u) => {
                let t = t.map_vars_at(d, f);
                let s = slot(s, &mut |i| i.map_vars_at(d, f));
                GTerm::ExpandSubst(bx(t), s, bx(u.map_vars_at(d, f)))
            }
            GTerm::Note(note, t) => {
                let note = match note {
                    Note::Abbrev { symbol, sup } => Note::Abbrev {
                        symbol: symbol.clone(),
                        sup: sup.as_ref().map(|s| bx(s.map_vars_at(d, f))),
                    },
                    other => other.clone(),
                };
                GTerm::Note(note, bx(t.map_vars_at(d, f)))
            }
        }
    }

    /// Shift free variables at or above `cutoff` by `delta`.
    pub fn shift(&self, delta: isize, cutoff: usize) -> GTerm {
        if delta == 0 {
            return self.clone();
        }
        self.map_vars(&mut |d, n, i| {
            if i >= cutoff + d {
                let j = i as isize + delta;
                assert!(j >= 0, "negative de Bruijn index after shift");
                GTerm::Var(n.clone(), j as usize)
            } else {
                GTerm::Var(n.clone(), i)
            }
        })
    }

    /// Replace free variable `j` by `s`, leaving every other index unchanged.
    pub fn replace_var(&self, j: usize, s: &GTerm) -> GTerm {
        self.map_vars(&mut |d, n, i| {
            if i == j + d {
                s.shift(d as isize, 0)
            } else {
                GTerm::Var(n.clone(), i)
            }
        })
    }

    /// Contract a binder: `body` lives under one extra binding that is
    /// instantiated with `arg`.
    pub fn instantiate(body: &GTerm, arg: &GTerm) -> GTerm {
        body.replace_var(0, &arg.shift(1, 0)).shift(-1, 0)
    }

    /// Does free variable `j` occur?
    pub fn mentions(&self, j: usize) -> bool {
        let mut found = false;
        self.map_vars(&mut |d, n, i| {
            if i == j + d {
                found = true;
            }
            GTerm::Var(n.clone(), i)
        });
        found
    }

    /// Strip every display note.
    pub fn erase_notes(&self) -> GTerm {
        let mut t = self.clone();
        t.erase_notes_in_place();
        t
    }

    fn erase_notes_in_place(&mut self) {
        while let GTerm::Note(_, inner) = self {
            *self = std::mem::replace(inner.as_mut(), GTerm::var("_", 0));
        }
        for c in self.children_mut() {
            c.erase_notes_in_place();
        }
    }

    /// Strip notes that sit directly on top of this node.
    pub fn peel(&self) -> &GTerm {
        let mut t = self;
        while let GTerm::Note(_, inner) = t {
            t = inner;
        }
        t
    }

    /// The concrete term, if this tree has no symbolic arities or positions,
    /// no expansion nodes and no notes.
    pub fn to_term(&self) -> Option<Term> {
        let slot = |s: &GSlot| -> Option<Slot<usize, Term>> {
            Some(match s {
                Slot::At(Idx::Lit(p)) => Slot::At(*p),
                Slot::At(Idx::Param(_)) => return None,
                Slot::By(i) => Slot::By(Box::new(i.to_term()?)),
            })
        };
        let b = |t: &GTerm| t.to_term().map(Box::new);
        Some(match self {
            GTerm::Var(n, i) => Term::Var(n.clone(), *i),
            GTerm::Lam(bd, n, body) => {
                let bd = match bd {
                    Binder::TT(m) => Binder::TT(m.lit()?),
                    Binder::TS(m) => Binder::TS(m.lit()?),
                    Binder::ST => Binder::ST,
                    Binder::SS => Binder::SS,
                };
                Term::Lam(bd, n.clone(), b(body)?)
            }
            GTerm::Sum(k, n, body) => Term::Sum(k.lit()?, n.clone(), b(body)?),
            GTerm::App(k, x, y) => Term::App(*k, b(x)?, b(y)?),
            GTerm::Subst(k, t, s, u) => Term::Subst(*k, b(t)?, slot(s)?, b(u)?),
            GTerm::Proj(k, t, s) => Term::Proj(*k, b(t)?, slot(s)?),
            GTerm::Comp(k, x, y) => Term::Comp(*k, b(x)?, b(y)?),
            GTerm::Prime(t) => Term::Prime(b(t)?),
            GTerm::Mul(x, y) => Term::Mul(b(x)?, b(y)?),
            GTerm::Expand(_) | GTerm::ExpandSubst(..) | GTerm::Note(..) => return None,
        })
    }

    /// Every arity variable and symbolic parameter that occurs.
    pub fn symbols(&self) -> (Vec<String>, Vec<String>) {
        let mut dims = Vec::new();
        let mut params = Vec::new();
        self.collect_symbols(&mut dims, &mut params);
        dims.sort();
        dims.dedup();
        params.sort();
        params.dedup();
        (dims, params)
    }

    fn collect_symbols(&self, dims: &mut Vec<String>, params: &mut Vec<String>) {
        let mut dim = |d: &Dim| {
            if let Dim::Var(v) = d {
                dims.push(v.clone());
            }
        };
        match self {
            GTerm::Lam(b, _, _) => {
                if let Some(m) = b.arity() {
                    dim(m);
                }
            }
            GTerm::Sum(k, _, _) => dim(k),
            GTerm::Subst(_, _, Slot::At(Idx::Param(p)), _)
            | GTerm::Proj(_, _, Slot::At(Idx::Param(p)))
            | GTerm::ExpandSubst(_, Slot::At(Idx::Param(p)), _) => params.push(p.clone()),
            _ => {}
        }
        for c in self.children() {
            c.collect_symbols(dims, params);
        }
    }
}

impl From<&Term> for GTerm {
    fn from(t: &Term) -> GTerm {
        let slot = |s: &Slot<usize, Term>| match s {
            Slot::At(p) => Slot::At(Idx::Lit(*p)),
            Slot::By(i) => Slot::By(bx(GTerm::from(i.as_ref()))),
        };
        let b = |t: &Term| bx(GTerm::from(t));
        match t {
            Term::Var(n, i) => GTerm::Var(n.clone(), *i),
            Term::Lam(bd, n, body) => GTerm::Lam(bd.clone().map(Dim::Lit), n.clone(), b(body)),
            Term::Sum(k, n, body) => GTerm::Sum(Dim::Lit(*k), n.clone(), b(body)),
            Term::App(k, x, y) => GTerm::App(*k, b(x), b(y)),
            Term::Subst(k, x, s, u) => GTerm::Subst(*k, b(x), slot(s), b(u)),
            Term::Proj(k, x, s) => GTerm::Proj(*k, b(x), slot(s)),
            Term::Comp(k, x, y) => GTerm::Comp(*k, b(x), b(y)),
            Term::Prime(x) => GTerm::Prime(b(x)),
            Term::Mul(x, y) => GTerm::Mul(b(x), b(y)),
        }
    }
}

impl From<Term> for GTerm {
    fn from(t: Term) -> GTerm {
        GTerm::from(&t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ss(body: GTerm) -> GTerm {
        GTerm::lam(Binder::SS, "z", body)
    }

    #[test]
    fn instantiate_is_capture_avoiding() {
        // (λz. z · c)[c is index 0 outside] applied to the outer variable c
        let body = GTerm::mul(GTerm::var("z", 0), GTerm::var("c", 1));
        let arg = GTerm::var("c", 0);
        let r = GTerm::instantiate(&body, &arg);
        assert_eq!(r, GTerm::mul(GTerm::var("c", 0), GTerm::var("c", 0)));
    }

    #[test]
    fn instantiate_under_binder_lifts_argument() {
        let body = ss(GTerm::mul(GTerm::var("w", 0), GTerm::var("y", 1)));
        let arg = GTerm::var("c", 3);
        let r = GTerm::instantiate(&body, &arg);
        assert_eq!(r, ss(GTerm::mul(GTerm::var("w", 0), GTerm::var("c", 4))));
    }

    #[test]
    fn paths_and_contexts() {
        let t = ss(GTerm::prime(GTerm::var("f", 1)));
        let p = TermPath(vec![0, 0]);
        assert_eq!(t.at(&p), Some(&GTerm::var("f", 1)));
        let ctx = t.context_at(&GContext::new(), &p).unwrap();
        assert_eq!(ctx.len(), 1);
        assert_eq!(t.binders_above(&p), Some(1));
        assert_eq!(p.to_string(), "/0/0");
    }

    #[test]
    fn mentions_tracks_depth() {
        let t = ss(GTerm::var("x", 1));
        assert!(t.mentions(0));
        assert!(!t.mentions(1));
    }

    #[test]
    fn concrete_round_trip() {
        let t = Term::app(
            AppKind::A11,
            Term::lam(Binder::SS, "z", Term::var("z", 0)),
            Term::var("c", 0),
        );
        assert_eq!(GTerm::from(&t).to_term(), Some(t));
    }
}
