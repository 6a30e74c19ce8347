//! The partial-derivative encoding `(x…) ↦ (z ↦ f^j(x…[•^i := z]))′(x^i)`
//! and component projection.

use thiserror::Error;

use crate::lang::{
    infer, type_check, AppKind, Binder, Context, Dim, GContext, GSlot, GTerm, GType, Idx, Slot, Subject, Term,
    Ty, TypeError, TypedTerm,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivError {
    #[error("index {index} out of range for {bound} components")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: String, found: String },
    #[error(transparent)]
    IllTyped(#[from] TypeError),
}

/// The function to differentiate, the output component `j` and the input slot `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialDerivativeSpec {
    pub ctx: GContext,
    pub f: GTerm,
    pub j: Idx,
    pub i: Idx,
}

fn check_bound(i: &Idx, bound: &Dim) -> Result<(), DerivError> {
    if let (Idx::Lit(i), Dim::Lit(b)) = (i, bound) {
        if i >= b {
            return Err(DerivError::IndexOutOfRange { index: *i, bound: *b });
        }
    }
    Ok(())
}

fn shift_slot(s: &GSlot, d: isize) -> GSlot {
    match s {
        Slot::At(i) => Slot::At(i.clone()),
        Slot::By(t) => Slot::By(Box::new(t.shift(d, 0))),
    }
}

/// `λᵗˢ m x. (λˢˢ z. h(x…[•^slot := z]))′(x^slot)` for `h : FunM1 m`.
/// `h` and `slot` are read in the enclosing scope; nothing is captured.
pub fn partial_term(h: &GTerm, m: Dim, slot: &GSlot, x: &str) -> GTerm {
    let inner = GTerm::lam(
        Binder::SS,
        "z",
        GTerm::app(
            AppKind::AM1,
            h.shift(2, 0),
            GTerm::subst(Subject::K, GTerm::var(x, 1), shift_slot(slot, 2), GTerm::var("z", 0)),
        ),
    );
    GTerm::lam(
        Binder::TS(m),
        x,
        GTerm::app(
            AppKind::A11,
            GTerm::prime(inner),
            GTerm::proj(Subject::K, GTerm::var(x, 0), shift_slot(slot, 1)),
        ),
    )
}

/// Recognise a term built by [`partial_term`]; returns `h`, the arity and
/// the slot, all read in the enclosing scope.
pub fn match_partial(t: &GTerm) -> Option<(GTerm, Dim, GSlot)> {
    let GTerm::Lam(Binder::TS(m), _, body) = t.peel() else { return None };
    let GTerm::App(AppKind::A11, pr, at) = body.as_ref() else { return None };
    let GTerm::Prime(inner) = pr.as_ref() else { return None };
    let GTerm::Lam(Binder::SS, _, ib) = inner.as_ref() else { return None };
    let GTerm::App(AppKind::AM1, h, arg) = ib.as_ref() else { return None };
    let GTerm::Subst(Subject::K, x1, s_in, z) = arg.as_ref() else { return None };
    let GTerm::Proj(Subject::K, x0, s_out) = at.as_ref() else { return None };
    if !matches!(x1.as_ref(), GTerm::Var(_, 1)) || !matches!(z.as_ref(), GTerm::Var(_, 0)) {
        return None;
    }
    if !matches!(x0.as_ref(), GTerm::Var(_, 0)) || h.mentions(0) || h.mentions(1) {
        return None;
    }
    let slot = match (s_in, s_out) {
        (Slot::At(a), Slot::At(b)) if a == b => Slot::At(a.clone()),
        (Slot::By(a), Slot::By(b)) if !b.mentions(0) && **a == b.shift(1, 0) => Slot::By(Box::new(b.shift(-1, 0))),
        _ => return None,
    };
    Some((h.shift(-2, 0), m.clone(), slot))
}

/// The univariate form `λˢˢ x. (λˢˢ z. h(z))′(x)` for `h : Fun11`.
fn scalar_partial_term(h: &GTerm) -> GTerm {
    let inner = GTerm::lam(Binder::SS, "z", GTerm::app(AppKind::A11, h.shift(2, 0), GTerm::var("z", 0)));
    GTerm::lam(Binder::SS, "x", GTerm::app(AppKind::A11, GTerm::prime(inner), GTerm::var("x", 0)))
}

/// Encode `∂f^j/∂x^i`. A `FunMN m n` function yields a `FunM1 m` term;
/// scalar-input functions use the one-tuple identification and yield `Fun11`.
pub fn encode_partial_derivative(spec: &PartialDerivativeSpec) -> Result<(GTerm, GType), DerivError> {
    let ty = infer(&spec.ctx, &spec.f)?;
    let f = spec.f.clone();
    let (t, ty) = match &ty {
        Ty::FunMN(m, n) => {
            check_bound(&spec.j, n)?;
            check_bound(&spec.i, m)?;
            let h = GTerm::proj(Subject::MN, f, Slot::At(spec.j.clone()));
            (partial_term(&h, m.clone(), &Slot::At(spec.i.clone()), "x"), Ty::FunM1(m.clone()))
        }
        Ty::FunM1(m) => {
            check_bound(&spec.j, &Dim::Lit(1))?;
            check_bound(&spec.i, m)?;
            (partial_term(&f, m.clone(), &Slot::At(spec.i.clone()), "x"), Ty::FunM1(m.clone()))
        }
        Ty::Fun1N(n) => {
            check_bound(&spec.j, n)?;
            check_bound(&spec.i, &Dim::Lit(1))?;
            let h = GTerm::proj(Subject::N, f, Slot::At(spec.j.clone()));
            (scalar_partial_term(&h), Ty::Fun11)
        }
        Ty::Fun11 => {
            check_bound(&spec.j, &Dim::Lit(1))?;
            check_bound(&spec.i, &Dim::Lit(1))?;
            (scalar_partial_term(&f), Ty::Fun11)
        }
        other => {
            return Err(DerivError::TypeMismatch { expected: "a function type".into(), found: other.to_string() })
        }
    };
    let checked = infer(&spec.ctx, &t)?;
    debug_assert_eq!(checked, ty);
    Ok((t, ty))
}

/// The concrete form of [`encode_partial_derivative`].
pub fn encode_partial_derivative_typed(f: &TypedTerm, j: usize, i: usize) -> Result<TypedTerm, DerivError> {
    let spec = PartialDerivativeSpec {
        ctx: f.ctx().generic(),
        f: GTerm::from(f.term()),
        j: Idx::Lit(j),
        i: Idx::Lit(i),
    };
    let (t, _) = encode_partial_derivative(&spec)?;
    let t = t.to_term().expect("concrete input yields a concrete term");
    Ok(type_check(f.ctx(), &t)?)
}

/// Project component `j` out of a tuple or a tuple-valued function.
pub fn project_component(f: &TypedTerm, j: usize) -> Result<TypedTerm, DerivError> {
    let (subject, bound) = match f.ty() {
        Ty::Tuple(k) => (Subject::K, *k),
        Ty::Fun1N(n) => (Subject::N, *n),
        Ty::FunMN(_, n) => (Subject::MN, *n),
        other => {
            return Err(DerivError::TypeMismatch {
                expected: "a tuple or tuple-valued function".into(),
                found: other.to_string(),
            })
        }
    };
    if j >= bound {
        return Err(DerivError::IndexOutOfRange { index: j, bound });
    }
    let t = Term::proj(subject, f.term().clone(), j);
    Ok(type_check(f.ctx(), &t)?)
}

/// Convenience: type-check `f` in `ctx`, then encode.
pub fn encode_in(ctx: &Context, f: &Term, j: usize, i: usize) -> Result<TypedTerm, DerivError> {
    let f = type_check(ctx, f)?;
    encode_partial_derivative_typed(&f, j, i)
}
