//! Directed rewrite rules on generic terms.

use std::fmt;

use thiserror::Error;

use crate::deriv::match_partial;
use crate::expansion::component;
use crate::lang::{
    infer, AppKind, Binder, CompKind, Dim, GContext, GSlot, GTerm, GType, Name, Note, Slot, Subject, TermPath, Ty,
    TypeError,
};

/// The family a rule belongs to, as shown in listing markers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleTag {
    Eta,
    Alpha,
    Beta,
    Comp,
    MExpand,
    Def,
    LinPrime,
    ChainPrime,
}

impl RuleTag {
    /// `true` for the two assumed equalities, `false` for computational equivalences.
    pub fn is_assumed(self) -> bool {
        matches!(self, RuleTag::LinPrime | RuleTag::ChainPrime)
    }

    pub fn name(self) -> &'static str {
        match self {
            RuleTag::Eta => "eta",
            RuleTag::Alpha => "alpha",
            RuleTag::Beta => "beta",
            RuleTag::Comp => "comp",
            RuleTag::MExpand => "mexpand",
            RuleTag::Def => "def",
            RuleTag::LinPrime => "lin'",
            RuleTag::ChainPrime => "chain'",
        }
    }

    /// The marker in text listings, e.g. `≡def` or `=lin′`.
    pub fn text_marker(self) -> &'static str {
        match self {
            RuleTag::Eta => "≡η",
            RuleTag::Alpha => "≡α",
            RuleTag::Beta => "≡β",
            RuleTag::Comp => "≡∘",
            RuleTag::MExpand => "≡…",
            RuleTag::Def => "≡def",
            RuleTag::LinPrime => "=lin′",
            RuleTag::ChainPrime => "=chain′",
        }
    }

    /// The relation symbol with subscript in LaTeX listings.
    pub fn latex_marker(self) -> &'static str {
        match self {
            RuleTag::Eta => "\\equiv_{\\eta}",
            RuleTag::Alpha => "\\equiv_{\\alpha}",
            RuleTag::Beta => "\\equiv_{\\beta}",
            RuleTag::Comp => "\\equiv_{\\circ}",
            RuleTag::MExpand => "\\equiv_{...}",
            RuleTag::Def => "\\equiv_{\\text{def}}",
            RuleTag::LinPrime => "=_{\\text{lin}'}",
            RuleTag::ChainPrime => "=_{\\text{chain}'}",
        }
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A single directed rewrite. Reverse directions are separate variants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// `(x ↦ T)(u) → T[x := u]`.
    Beta,
    /// `T → (y ↦ T[target := y])(target)`; for a tuple target, component
    /// occurrences `g^c(x…)` of `g(x…)…` become `y^c`.
    BetaExpand { target: GTerm, name: String },
    /// `x ↦ f(x) → f`.
    Eta,
    /// `f → x ↦ f(x)`.
    EtaExpand { name: String },
    /// Rename the binder at the position; the tree is unchanged otherwise.
    Alpha { name: String },
    /// `(f ∘ g)(x) → f(g(x))`, also through a component projection.
    CompUnfold,
    /// `f(g(x)) → (f ∘ g)(x)`, also through a component projection.
    CompFold,
    /// `z ↦ C[B] → (z ↦ C[z]) ∘ (z ↦ B)` with `B` at `hole` below the binder.
    CompSplit { hole: TermPath },
    /// `(z ↦ C) ∘ (w ↦ B) → w ↦ C[z := B]`.
    CompJoin,
    /// `D(g(X)…) → ((x…) ↦ D(g(x…)…))(X)`, displayed as `(D ∘ g)(X)`.
    CompAbstract { name: String },
    /// Mark a tuple as written out: `t → t…`, `t[•^p:=u] → t…[•^p:=u]`.
    MExpand,
    /// Inverse of [`Rule::MExpand`].
    MCollapse,
    /// `t[•^p := t^p] → t`.
    SubstIdentity,
    /// Wrap the subterm in a display note.
    Fold(Note),
    /// Remove a display note.
    Unfold,
    /// Replace a display note by another.
    Relabel(Note),
    /// `A(X) · B(X) → ((x…) ↦ A(x…) · B(x…))(X)`, displayed as `(A ⊗ B)(X)`.
    TensorIntro { name: String },
    /// Derivative of a multivariate composition as a sum over occurrences.
    LinPrime,
    /// `(a ∘ b)′(s) → (a′ ∘ b)(s) · b′(s)`.
    ChainPrime,
}

impl Rule {
    pub fn tag(&self) -> RuleTag {
        match self {
            Rule::Beta | Rule::BetaExpand { .. } => RuleTag::Beta,
            Rule::Eta | Rule::EtaExpand { .. } => RuleTag::Eta,
            Rule::Alpha { .. } => RuleTag::Alpha,
            Rule::CompUnfold
            | Rule::CompFold
            | Rule::CompSplit { .. }
            | Rule::CompJoin
            | Rule::CompAbstract { .. } => RuleTag::Comp,
            Rule::MExpand | Rule::MCollapse | Rule::SubstIdentity => RuleTag::MExpand,
            Rule::Fold(_) | Rule::Unfold | Rule::Relabel(_) | Rule::TensorIntro { .. } => RuleTag::Def,
            Rule::LinPrime => RuleTag::LinPrime,
            Rule::ChainPrime => RuleTag::ChainPrime,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Rule::Beta => "beta",
            Rule::BetaExpand { .. } => "beta-expand",
            Rule::Eta => "eta",
            Rule::EtaExpand { .. } => "eta-expand",
            Rule::Alpha { .. } => "alpha",
            Rule::CompUnfold => "comp-unfold",
            Rule::CompFold => "comp-fold",
            Rule::CompSplit { .. } => "comp-split",
            Rule::CompJoin => "comp-join",
            Rule::CompAbstract { .. } => "comp-abstract",
            Rule::MExpand => "m-expand",
            Rule::MCollapse => "m-collapse",
            Rule::SubstIdentity => "subst-identity",
            Rule::Fold(_) => "fold",
            Rule::Unfold => "unfold",
            Rule::Relabel(_) => "relabel",
            Rule::TensorIntro { .. } => "tensor-intro",
            Rule::LinPrime => "lin-prime",
            Rule::ChainPrime => "chain-prime",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("rule {rule} not applicable at {at}: {reason}")]
    RuleNotApplicable { rule: String, at: TermPath, reason: String },
    #[error("rule {rule} at {at} changed the type from {before} to {after}")]
    TypeChanged { rule: String, at: TermPath, before: String, after: String },
    #[error(transparent)]
    IllTyped(#[from] TypeError),
}

type Local = Result<GTerm, String>;

fn bx(t: GTerm) -> Box<GTerm> {
    Box::new(t)
}

/// Rebuild `t` with every direct child mapped; `f` also receives the number
/// of binders between `t` and that child.
pub(crate) fn map_children(t: &GTerm, f: &mut impl FnMut(&GTerm, usize) -> GTerm) -> GTerm {
    let slot = |s: &GSlot, f: &mut dyn FnMut(&GTerm, usize) -> GTerm| match s {
        Slot::At(p) => Slot::At(p.clone()),
        Slot::By(i) => Slot::By(bx(f(i, 0))),
    };
    match t {
        GTerm::Var(..) => t.clone(),
        GTerm::Lam(b, n, body) => GTerm::Lam(b.clone(), n.clone(), bx(f(body, 1))),
        GTerm::Sum(k, n, body) => GTerm::Sum(k.clone(), n.clone(), bx(f(body, 1))),
        GTerm::App(k, a, b) => GTerm::App(*k, bx(f(a, 0)), bx(f(b, 0))),
        GTerm::Subst(k, x, s, u) => {
            let x = f(x, 0);
            let s = slot(s, f);
            GTerm::Subst(*k, bx(x), s, bx(f(u, 0)))
        }
        GTerm::Proj(k, x, s) => {
            let x = f(x, 0);
            GTerm::Proj(*k, bx(x), slot(s, f))
        }
        GTerm::Comp(k, a, b) => GTerm::Comp(*k, bx(f(a, 0)), bx(f(b, 0))),
        GTerm::Prime(a) => GTerm::Prime(bx(f(a, 0))),
        GTerm::Mul(a, b) => GTerm::Mul(bx(f(a, 0)), bx(f(b, 0))),
        GTerm::Expand(a) => GTerm::Expand(bx(f(a, 0))),
        GTerm::ExpandSubst(x, s, u) => {
            let x = f(x, 0);
            let s = slot(s, f);
            GTerm::ExpandSubst(bx(x), s, bx(f(u, 0)))
        }
        GTerm::Note(note, a) => {
            let note = match note {
                Note::Abbrev { symbol, sup } => Note::Abbrev {
                    symbol: symbol.clone(),
                    sup: sup.as_ref().map(|s| bx(f(s, 0))),
                },
                other => other.clone(),
            };
            GTerm::Note(note, bx(f(a, 0)))
        }
    }
}

fn binder_matches(b: &Binder<Dim>, k: AppKind) -> bool {
    matches!(
        (b, k),
        (Binder::SS, AppKind::A11) | (Binder::TS(_), AppKind::AM1) | (Binder::ST, AppKind::A1N) | (Binder::TT(_), AppKind::AMN)
    )
}

/// Application kind and binder for a function from `dom` to `cod`.
fn arrow(dom: &GType, cod: &GType) -> Option<(AppKind, Binder<Dim>)> {
    Some(match (dom, cod) {
        (Ty::Scalar, Ty::Scalar) => (AppKind::A11, Binder::SS),
        (Ty::Tuple(m), Ty::Scalar) => (AppKind::AM1, Binder::TS(m.clone())),
        (Ty::Scalar, Ty::Tuple(_)) => (AppKind::A1N, Binder::ST),
        (Ty::Tuple(m), Ty::Tuple(_)) => (AppKind::AMN, Binder::TT(m.clone())),
        _ => return None,
    })
}

/// Apply `rule` to the subterm of `t` at `at`. The result must have the
/// same type as `t` in `ctx`.
pub fn apply_rule(ctx: &GContext, t: &GTerm, rule: &Rule, at: &TermPath) -> Result<GTerm, RewriteError> {
    let not_applicable = |reason: String| RewriteError::RuleNotApplicable {
        rule: rule.name().to_string(),
        at: at.clone(),
        reason,
    };
    let before = infer(ctx, t)?;
    let sub = t.at(at).ok_or_else(|| not_applicable("no subterm at this path".into()))?;
    let local = t.context_at(ctx, at).expect("path resolved above");
    let new = rewrite_local(&local, sub, rule).map_err(not_applicable)?;
    let mut out = t.clone();
    *out.at_mut(at).expect("path resolved above") = new;
    let after = infer(ctx, &out)?;
    if after != before {
        return Err(RewriteError::TypeChanged {
            rule: rule.name().to_string(),
            at: at.clone(),
            before: before.to_string(),
            after: after.to_string(),
        });
    }
    Ok(out)
}

/// Rewrite a subterm in its own context.
pub fn rewrite_local(ctx: &GContext, t: &GTerm, rule: &Rule) -> Local {
    let ty = |t: &GTerm| infer(ctx, t).map_err(|e| e.to_string());
    match rule {
        Rule::Beta => beta(t),
        Rule::BetaExpand { target, name } => {
            let tty = ty(target)?;
            let body_ty = ty(t)?;
            let (kind, binder) = arrow(&tty, &body_ty).ok_or("target is not a scalar or tuple")?;
            let body = abstract_target(t, target, name, 0);
            Ok(GTerm::app(kind, GTerm::lam(binder, name, body), target.clone()))
        }
        Rule::Eta => {
            let GTerm::Lam(b, _, body) = t else { return Err("not an abstraction".into()) };
            let GTerm::App(k, f, x) = body.as_ref() else { return Err("body is not an application".into()) };
            if !binder_matches(b, *k) || !matches!(x.as_ref(), GTerm::Var(_, 0)) || f.mentions(0) {
                return Err("body is not an application of a function to the bound variable".into());
            }
            Ok(f.shift(-1, 0))
        }
        Rule::EtaExpand { name } => {
            let (dom, cod) = match ty(t)? {
                Ty::Fun11 => (Ty::Scalar, Ty::Scalar),
                Ty::FunM1(m) => (Ty::Tuple(m), Ty::Scalar),
                Ty::Fun1N(n) => (Ty::Scalar, Ty::Tuple(n)),
                Ty::FunMN(m, n) => (Ty::Tuple(m), Ty::Tuple(n)),
                other => return Err(format!("cannot abstract over a {other}")),
            };
            let (kind, binder) = arrow(&dom, &cod).expect("function types have arrows");
            Ok(GTerm::lam(binder, name, GTerm::app(kind, t.shift(1, 0), GTerm::var(name, 0))))
        }
        Rule::Alpha { name } => match t {
            GTerm::Lam(b, _, body) => Ok(GTerm::Lam(b.clone(), Name::new(name.clone()), body.clone())),
            GTerm::Sum(k, _, body) => Ok(GTerm::Sum(k.clone(), Name::new(name.clone()), body.clone())),
            _ => Err("not a binder".into()),
        },
        Rule::CompUnfold => comp_unfold(t),
        Rule::CompFold => comp_fold(t),
        Rule::CompSplit { hole } => comp_split(ctx, t, hole),
        Rule::CompJoin => {
            let GTerm::Comp(CompKind::C111, a, b) = t else { return Err("not a scalar composition".into()) };
            let (GTerm::Lam(Binder::SS, _, c), GTerm::Lam(Binder::SS, w, bb)) = (a.peel(), b.peel()) else {
                return Err("operands are not abstractions".into());
            };
            Ok(GTerm::Lam(Binder::SS, w.clone(), bx(c.replace_var(0, bb))))
        }
        Rule::CompAbstract { name } => {
            let GTerm::App(AppKind::AM1, d, arg) = t else { return Err("not a tuple-input application".into()) };
            let GTerm::App(AppKind::AMN, g, x) = arg.as_ref() else {
                return Err("argument is not an application of a tuple function".into());
            };
            let Ty::Tuple(m) = ty(x)? else { return Err("inner argument is not a tuple".into()) };
            let body = GTerm::app(
                AppKind::AM1,
                d.shift(1, 0),
                GTerm::app(AppKind::AMN, g.shift(1, 0), GTerm::var(name, 0)),
            );
            Ok(GTerm::app(
                AppKind::AM1,
                GTerm::note(Note::Compose, GTerm::lam(Binder::TS(m), name, body)),
                x.as_ref().clone(),
            ))
        }
        Rule::MExpand => match t {
            GTerm::Subst(Subject::K, x, s, u) => Ok(GTerm::ExpandSubst(x.clone(), s.clone(), u.clone())),
            GTerm::Expand(_) | GTerm::ExpandSubst(..) => Err("already expanded".into()),
            _ => match ty(t)? {
                Ty::Tuple(_) => Ok(GTerm::Expand(bx(t.clone()))),
                other => Err(format!("a {other} has no expansion")),
            },
        },
        Rule::MCollapse => match t {
            GTerm::Expand(x) => Ok(x.as_ref().clone()),
            GTerm::ExpandSubst(x, s, u) => Ok(GTerm::Subst(Subject::K, x.clone(), s.clone(), u.clone())),
            _ => Err("not an expansion".into()),
        },
        Rule::SubstIdentity => match t {
            GTerm::Subst(Subject::K, x, s, u) | GTerm::ExpandSubst(x, s, u) => match u.peel() {
                GTerm::Proj(Subject::K, y, s2) if y == x && s2 == s => Ok(x.as_ref().clone()),
                _ => Err("the substituted value is not the same component".into()),
            },
            _ => Err("not a tuple substitution".into()),
        },
        Rule::Fold(note) => {
            check_note_shape(note, t)?;
            Ok(GTerm::note(note.clone(), t.clone()))
        }
        Rule::Unfold => match t {
            GTerm::Note(_, inner) => Ok(inner.as_ref().clone()),
            _ => Err("no note here".into()),
        },
        Rule::Relabel(note) => match t {
            GTerm::Note(_, inner) => {
                check_note_shape(note, inner)?;
                Ok(GTerm::note(note.clone(), inner.as_ref().clone()))
            }
            _ => Err("no note here".into()),
        },
        Rule::TensorIntro { name } => {
            let GTerm::Mul(l, r) = t else { return Err("not a product".into()) };
            let (GTerm::App(AppKind::AM1, a, x), GTerm::App(AppKind::AM1, b, y)) = (l.as_ref(), r.as_ref()) else {
                return Err("factors are not tuple-input applications".into());
            };
            if x != y {
                return Err("factors are applied to different arguments".into());
            }
            let Ty::Tuple(m) = ty(x)? else { return Err("argument is not a tuple".into()) };
            let body = GTerm::mul(
                GTerm::app(AppKind::AM1, a.shift(1, 0), GTerm::var(name, 0)),
                GTerm::app(AppKind::AM1, b.shift(1, 0), GTerm::var(name, 0)),
            );
            Ok(GTerm::app(
                AppKind::AM1,
                GTerm::note(Note::Tensor, GTerm::lam(Binder::TS(m), name, body)),
                x.as_ref().clone(),
            ))
        }
        Rule::LinPrime => lin_prime(ctx, t),
        Rule::ChainPrime => {
            let GTerm::App(AppKind::A11, p, s) = t else { return Err("not a scalar application".into()) };
            let GTerm::Prime(c) = p.peel() else { return Err("head is not a derivative".into()) };
            let GTerm::Comp(CompKind::C111, a, b) = c.peel() else {
                return Err("derivative of something other than a scalar composition".into());
            };
            Ok(GTerm::mul(
                GTerm::app(AppKind::A11, GTerm::comp(CompKind::C111, GTerm::prime(a.as_ref().clone()), b.as_ref().clone()), s.as_ref().clone()),
                GTerm::app(AppKind::A11, GTerm::prime(b.as_ref().clone()), s.as_ref().clone()),
            ))
        }
    }
}

fn beta(t: &GTerm) -> Local {
    let GTerm::App(k, h, a) = t else { return Err("not an application".into()) };
    match h.peel() {
        GTerm::Lam(b, _, body) if binder_matches(b, *k) => Ok(GTerm::instantiate(body, a)),
        _ => Err("head is not an abstraction".into()),
    }
}

/// Replace occurrences of `target` (and of its components) by a new
/// variable bound just outside `t`.
fn abstract_target(t: &GTerm, target: &GTerm, name: &str, d: usize) -> GTerm {
    let here = target.shift(d as isize, 0);
    if *t == here {
        return GTerm::var(name, d);
    }
    let component_of = |g: &GTerm, s: &GSlot, arg: &GTerm, kind: AppKind| -> Option<GSlot> {
        let GTerm::App(tk, tg, ta) = &here else { return None };
        (*tk == kind && tg.as_ref() == g && ta.as_ref() == arg).then(|| match s {
            Slot::At(p) => Slot::At(p.clone()),
            Slot::By(i) => Slot::By(bx(abstract_target(i, target, name, d))),
        })
    };
    let matched = match t {
        GTerm::App(AppKind::AM1, h, x) => match h.as_ref() {
            GTerm::Proj(Subject::MN, g, s) => component_of(g, s, x, AppKind::AMN),
            _ => None,
        },
        GTerm::App(AppKind::A11, h, x) => match h.as_ref() {
            GTerm::Proj(Subject::N, g, s) => component_of(g, s, x, AppKind::A1N),
            _ => None,
        },
        _ => None,
    };
    if let Some(slot) = matched {
        return GTerm::proj(Subject::K, GTerm::var(name, d), slot);
    }
    match t {
        GTerm::Var(n, i) if *i >= d => GTerm::Var(n.clone(), i + 1),
        GTerm::Var(..) => t.clone(),
        _ => map_children(t, &mut |c, b| abstract_target(c, target, name, d + b)),
    }
}

fn comp_unfold(t: &GTerm) -> Local {
    let GTerm::App(k, h, x) = t else { return Err("not an application".into()) };
    let x = x.as_ref().clone();
    match (k, h.peel()) {
        (AppKind::A11, GTerm::Comp(CompKind::C111, a, b)) => {
            Ok(GTerm::app(AppKind::A11, a.as_ref().clone(), GTerm::app(AppKind::A11, b.as_ref().clone(), x)))
        }
        (AppKind::A11, GTerm::Comp(CompKind::C1K1, a, b)) => {
            Ok(GTerm::app(AppKind::AM1, a.as_ref().clone(), GTerm::app(AppKind::A1N, b.as_ref().clone(), x)))
        }
        (AppKind::AMN, GTerm::Comp(CompKind::CMKN, a, b)) => {
            Ok(GTerm::app(AppKind::AMN, a.as_ref().clone(), GTerm::app(AppKind::AMN, b.as_ref().clone(), x)))
        }
        (AppKind::AMN, GTerm::Comp(CompKind::CM1N, a, b)) => {
            Ok(GTerm::app(AppKind::A1N, a.as_ref().clone(), GTerm::app(AppKind::AM1, b.as_ref().clone(), x)))
        }
        (AppKind::AM1, GTerm::Proj(Subject::MN, c, s)) => match c.peel() {
            GTerm::Comp(CompKind::CMKN, a, b) => Ok(GTerm::app(
                AppKind::AM1,
                GTerm::proj(Subject::MN, a.as_ref().clone(), s.clone()),
                GTerm::app(AppKind::AMN, b.as_ref().clone(), x),
            )),
            GTerm::Comp(CompKind::CM1N, a, b) => Ok(GTerm::app(
                AppKind::A11,
                GTerm::proj(Subject::N, a.as_ref().clone(), s.clone()),
                GTerm::app(AppKind::AM1, b.as_ref().clone(), x),
            )),
            _ => Err("projection of something other than a composition".into()),
        },
        _ => Err("head is not a composition".into()),
    }
}

fn comp_fold(t: &GTerm) -> Local {
    let GTerm::App(k, a, inner) = t else { return Err("not an application".into()) };
    let GTerm::App(k2, b, x) = inner.as_ref() else { return Err("argument is not an application".into()) };
    let (a, b, x) = (a.as_ref().clone(), b.as_ref().clone(), x.as_ref().clone());
    match (k, k2) {
        (AppKind::A11, AppKind::A11) => Ok(GTerm::app(AppKind::A11, GTerm::comp(CompKind::C111, a, b), x)),
        (AppKind::AM1, AppKind::A1N) => Ok(GTerm::app(AppKind::A11, GTerm::comp(CompKind::C1K1, a, b), x)),
        (AppKind::AMN, AppKind::AMN) => Ok(GTerm::app(AppKind::AMN, GTerm::comp(CompKind::CMKN, a, b), x)),
        (AppKind::A1N, AppKind::AM1) => Ok(GTerm::app(AppKind::AMN, GTerm::comp(CompKind::CM1N, a, b), x)),
        (AppKind::AM1, AppKind::AMN) => match a {
            GTerm::Proj(Subject::MN, f, s) => Ok(GTerm::app(
                AppKind::AM1,
                GTerm::proj(Subject::MN, GTerm::comp(CompKind::CMKN, *f, b), s),
                x,
            )),
            _ => Err("outer function is not a component projection".into()),
        },
        (AppKind::A11, AppKind::AM1) => match a {
            GTerm::Proj(Subject::N, f, s) => Ok(GTerm::app(
                AppKind::AM1,
                GTerm::proj(Subject::MN, GTerm::comp(CompKind::CM1N, *f, b), s),
                x,
            )),
            _ => Err("outer function is not a component projection".into()),
        },
        _ => Err("applications do not compose".into()),
    }
}

/// Does free variable `j` occur in `t` outside the subterm at `path`?
fn mentions_except(t: &GTerm, path: &[usize], j: usize) -> bool {
    let Some((&first, rest)) = path.split_first() else { return false };
    t.children().iter().enumerate().any(|(c, child)| {
        let jj = j + usize::from(t.binding_for_child(c).is_some());
        if c == first {
            mentions_except(child, rest, jj)
        } else {
            child.mentions(jj)
        }
    })
}

fn comp_split(ctx: &GContext, t: &GTerm, hole: &TermPath) -> Local {
    let GTerm::Lam(Binder::SS, z, body) = t else { return Err("not a scalar abstraction".into()) };
    if hole.0.first() != Some(&0) {
        return Err("hole must lie in the body".into());
    }
    if t.binders_above(hole) != Some(1) {
        return Err("hole must not lie under another binder".into());
    }
    let b = t.at(hole).ok_or("no subterm at the hole")?.clone();
    let inner_ctx = ctx.extend(z.clone(), Ty::Scalar);
    if infer(&inner_ctx, &b).map_err(|e| e.to_string())? != Ty::Scalar {
        return Err("hole is not a scalar".into());
    }
    if mentions_except(body, &hole.0[1..], 0) {
        return Err("the bound variable occurs outside the hole".into());
    }
    let mut outer = t.clone();
    *outer.at_mut(hole).unwrap() = GTerm::Var(z.clone(), 0);
    Ok(GTerm::comp(CompKind::C111, outer, GTerm::Lam(Binder::SS, z.clone(), bx(b))))
}

/// Rewrite every `t[•^p := t^p]` inside `t` to `t`.
pub fn subst_identities(t: &GTerm) -> GTerm {
    let t = map_children(t, &mut |c, _| subst_identities(c));
    match rewrite_local(&GContext::new(), &t, &Rule::SubstIdentity) {
        Ok(r) => r,
        Err(_) => t,
    }
}

fn lin_prime(ctx: &GContext, t: &GTerm) -> Local {
    let GTerm::App(AppKind::A11, p, a) = t else { return Err("not a scalar application".into()) };
    let GTerm::Prime(f) = p.peel() else { return Err("head is not a derivative".into()) };
    let GTerm::Lam(Binder::SS, z, body) = f.peel() else { return Err("derivative of a non-abstraction".into()) };
    let GTerm::App(AppKind::AM1, h, arg) = body.as_ref() else {
        return Err("body is not a tuple-input application".into());
    };
    if h.mentions(0) {
        return Err("the outer function depends on the bound variable".into());
    }
    let inner_ctx = ctx.extend(z.clone(), Ty::Scalar);
    let Ty::Tuple(k) = infer(&inner_ctx, arg).map_err(|e| e.to_string())? else {
        return Err("argument is not a tuple".into());
    };
    // Scope inside the new λz: enclosing, k, z.
    let at_point = subst_identities(&GTerm::instantiate(arg, a)).shift(2, 0);
    let kth = component(&arg.shift(1, 1), &Slot::By(bx(GTerm::var("k", 1))));
    let new_arg = GTerm::subst(Subject::K, at_point, Slot::By(bx(GTerm::var("k", 1))), kth);
    let summand = GTerm::app(
        AppKind::A11,
        GTerm::prime(GTerm::Lam(Binder::SS, z.clone(), bx(GTerm::app(AppKind::AM1, h.shift(1, 1), new_arg)))),
        a.shift(1, 0),
    );
    Ok(GTerm::sum(k, "k", summand))
}

fn check_note_shape(note: &Note, t: &GTerm) -> Result<(), String> {
    let ok = match note {
        Note::Abbrev { .. } => true,
        Note::Partial { .. } => match_partial(t).is_some(),
        Note::Compose => matches!(t.peel(), GTerm::Lam(Binder::TS(_), _, b)
            if matches!(b.as_ref(), GTerm::App(AppKind::AM1, _, x) if matches!(x.as_ref(), GTerm::App(AppKind::AMN, ..)))),
        Note::Tensor | Note::TensorPre => matches!(t.peel(), GTerm::Lam(Binder::TS(_), _, b)
            if matches!(b.as_ref(), GTerm::Mul(l, r)
                if matches!(l.as_ref(), GTerm::App(AppKind::AM1, ..)) && matches!(r.as_ref(), GTerm::App(AppKind::AM1, ..)))),
        Note::DirectSum => matches!(t.peel(), GTerm::Lam(Binder::TS(_), _, b)
            if matches!(b.as_ref(), GTerm::Sum(_, _, s) if matches!(s.as_ref(), GTerm::App(AppKind::AM1, ..)))),
    };
    let ok = ok
        && match note {
            Note::TensorPre => match t.peel() {
                GTerm::Lam(_, _, b) => match b.as_ref() {
                    GTerm::Mul(l, _) => matches!(l.as_ref(), GTerm::App(_, c, _) if matches!(c.as_ref(), GTerm::Note(Note::Compose, _))),
                    _ => false,
                },
                _ => false,
            },
            _ => true,
        };
    if ok {
        Ok(())
    } else {
        Err("subterm does not have the shape this notation abbreviates".into())
    }
}

/// Contract every β-redex, innermost heads first. Notes on reduced heads
/// are dropped; all other notes are kept.
pub fn beta_normalize(t: &GTerm) -> GTerm {
    match t {
        GTerm::App(k, h, a) => {
            let h = beta_normalize(h);
            let a = beta_normalize(a);
            match h.peel() {
                GTerm::Lam(b, _, body) if binder_matches(b, *k) => beta_normalize(&GTerm::instantiate(body, &a)),
                _ => GTerm::App(*k, bx(h), bx(a)),
            }
        }
        _ => map_children(t, &mut |c, _| beta_normalize(c)),
    }
}

/// Contract every η-redex bottom-up.
pub fn eta_normalize(t: &GTerm) -> GTerm {
    let t = map_children(t, &mut |c, _| eta_normalize(c));
    rewrite_local(&GContext::new(), &t, &Rule::Eta).unwrap_or(t)
}
