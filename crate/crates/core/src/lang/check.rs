//! Syntax-directed type checking: every constructor matches exactly one rule.

use thiserror::Error;

use super::context::{Context, GContext};
use super::generic::{GSlot, GTerm, Idx, TermPath};
use super::term::{AppKind, Binder, CompKind, Slot, Subject, Term};
use super::types::{Dim, GType, Ty, TypeExpr, MAX_ARITY};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("type mismatch at {path}: expected {expected}, found {found}")]
    TypeMismatch {
        expected: String,
        found: String,
        path: TermPath,
    },
    #[error("unbound variable at {path}: index {index} in a context of length {len}")]
    UnboundVariable {
        path: TermPath,
        index: usize,
        len: usize,
    },
    #[error("arity mismatch at {path}: {detail}")]
    ArityMismatch { path: TermPath, detail: String },
}

impl TypeError {
    pub fn path(&self) -> &TermPath {
        match self {
            TypeError::TypeMismatch { path, .. }
            | TypeError::UnboundVariable { path, .. }
            | TypeError::ArityMismatch { path, .. } => path,
        }
    }
}

/// A term together with the context it was checked in and its unique type.
/// Only [`type_check`] constructs values of this type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedTerm {
    ctx: Context,
    term: Term,
    ty: TypeExpr,
}

impl TypedTerm {
    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn term(&self) -> &Term {
        &self.term
    }

    pub fn ty(&self) -> &TypeExpr {
        &self.ty
    }

    pub fn into_term(self) -> Term {
        self.term
    }
}

/// Check a concrete term in a concrete context.
pub fn type_check(ctx: &Context, t: &Term) -> Result<TypedTerm, TypeError> {
    let ty = infer(&ctx.generic(), &GTerm::from(t))?;
    let ty = ty
        .concrete()
        .expect("a concrete term in a concrete context has a concrete type");
    Ok(TypedTerm {
        ctx: ctx.clone(),
        term: t.clone(),
        ty,
    })
}

/// Infer the type of a generic term. Symbolic arities are compared
/// structurally; symbolic positions are accepted against any bound.
pub fn infer(ctx: &GContext, t: &GTerm) -> Result<GType, TypeError> {
    let mut ctx = ctx.clone();
    let mut path = Vec::new();
    Checker {
        ctx: &mut ctx,
        path: &mut path,
    }
    .infer(t)
}

struct Checker<'a> {
    ctx: &'a mut GContext,
    path: &'a mut Vec<usize>,
}

fn shape(ty: &GType) -> &'static str {
    match ty {
        Ty::Index(_) => "Index _",
        Ty::Fun11 => "Fun11",
        Ty::FunM1(_) => "FunM1 _",
        Ty::Fun1N(_) => "Fun1N _",
        Ty::FunMN(..) => "FunMN _ _",
        Ty::Tuple(_) => "Tuple _",
        Ty::Scalar => "Scalar",
    }
}

impl Checker<'_> {
    fn here(&self) -> TermPath {
        TermPath(self.path.clone())
    }

    fn child(&mut self, i: usize, t: &GTerm) -> Result<GType, TypeError> {
        self.path.push(i);
        let r = self.infer(t);
        self.path.pop();
        r
    }

    fn bound_child(&mut self, i: usize, t: &GTerm, name: &super::context::Name, ty: GType) -> Result<GType, TypeError> {
        self.ctx.push(name.clone(), ty);
        let r = self.child(i, t);
        self.ctx.pop();
        r
    }

    fn mismatch(&self, i: Option<usize>, expected: impl Into<String>, found: &GType) -> TypeError {
        let mut path = self.here();
        if let Some(i) = i {
            path = path.child(i);
        }
        TypeError::TypeMismatch {
            expected: expected.into(),
            found: found.to_string(),
            path,
        }
    }

    fn check_dim(&self, d: &Dim) -> Result<(), TypeError> {
        match d {
            Dim::Lit(n) if *n == 0 || *n > MAX_ARITY => Err(TypeError::ArityMismatch {
                path: self.here(),
                detail: format!("arity {n} outside 1..={MAX_ARITY}"),
            }),
            _ => Ok(()),
        }
    }

    fn same_dim(&self, i: usize, want: &Dim, got: &Dim, what: &str) -> Result<(), TypeError> {
        if want == got {
            Ok(())
        } else {
            Err(TypeError::ArityMismatch {
                path: self.here().child(i),
                detail: format!("{what}: expected arity {want}, found {got}"),
            })
        }
    }

    fn scalar(&mut self, i: usize, t: &GTerm) -> Result<(), TypeError> {
        match self.child(i, t)? {
            Ty::Scalar => Ok(()),
            other => Err(self.mismatch(Some(i), "Scalar", &other)),
        }
    }

    /// Check a component position against the number of components `bound`.
    fn slot(&mut self, slot: &GSlot, i: usize, bound: &Dim) -> Result<(), TypeError> {
        match slot {
            Slot::At(Idx::Lit(p)) => match bound {
                Dim::Lit(b) if p >= b => Err(TypeError::ArityMismatch {
                    path: self.here(),
                    detail: format!("position {p} out of range for {b} components"),
                }),
                _ => Ok(()),
            },
            Slot::At(Idx::Param(_)) => Ok(()),
            Slot::By(idx) => match self.child(i, idx)? {
                Ty::Index(k) => self.same_dim(i, bound, &k, "index type"),
                other => Err(self.mismatch(Some(i), format!("Index {bound}"), &other)),
            },
        }
    }

    fn infer(&mut self, t: &GTerm) -> Result<GType, TypeError> {
        match t {
            GTerm::Var(_, i) => match self.ctx.lookup(*i) {
                Ok((_, ty)) => Ok(ty.clone()),
                Err(e) => Err(TypeError::UnboundVariable {
                    path: self.here(),
                    index: e.index,
                    len: e.len,
                }),
            },
            GTerm::Lam(b, name, body) => {
                let dom = match b {
                    Binder::TT(m) | Binder::TS(m) => {
                        self.check_dim(m)?;
                        Ty::Tuple(m.clone())
                    }
                    Binder::ST | Binder::SS => Ty::Scalar,
                };
                let cod = self.bound_child(0, body, name, dom)?;
                match (b, cod) {
                    (Binder::TT(m), Ty::Tuple(n)) => Ok(Ty::FunMN(m.clone(), n)),
                    (Binder::TS(m), Ty::Scalar) => Ok(Ty::FunM1(m.clone())),
                    (Binder::ST, Ty::Tuple(n)) => Ok(Ty::Fun1N(n)),
                    (Binder::SS, Ty::Scalar) => Ok(Ty::Fun11),
                    (Binder::TT(_) | Binder::ST, other) => Err(self.mismatch(Some(0), "Tuple _", &other)),
                    (Binder::TS(_) | Binder::SS, other) => Err(self.mismatch(Some(0), "Scalar", &other)),
                }
            }
            GTerm::Sum(k, name, body) => {
                self.check_dim(k)?;
                match self.bound_child(0, body, name, Ty::Index(k.clone()))? {
                    Ty::Scalar => Ok(Ty::Scalar),
                    other => Err(self.mismatch(Some(0), "Scalar", &other)),
                }
            }
            GTerm::App(kind, head, arg) => {
                let h = self.child(0, head)?;
                match (kind, h) {
                    (AppKind::A11, Ty::Fun11) => {
                        self.scalar(1, arg)?;
                        Ok(Ty::Scalar)
                    }
                    (AppKind::AM1, Ty::FunM1(m)) => {
                        self.tuple_arg(1, arg, &m)?;
                        Ok(Ty::Scalar)
                    }
                    (AppKind::A1N, Ty::Fun1N(n)) => {
                        self.scalar(1, arg)?;
                        Ok(Ty::Tuple(n))
                    }
                    (AppKind::AMN, Ty::FunMN(m, n)) => {
                        self.tuple_arg(1, arg, &m)?;
                        Ok(Ty::Tuple(n))
                    }
                    (kind, other) => {
                        let want = match kind {
                            AppKind::A11 => "Fun11",
                            AppKind::AM1 => "FunM1 _",
                            AppKind::A1N => "Fun1N _",
                            AppKind::AMN => "FunMN _ _",
                        };
                        Err(self.mismatch(Some(0), want, &other))
                    }
                }
            }
            GTerm::Subst(subject, target, slot, value) => {
                let ty = self.child(0, target)?;
                let bound = self.components(0, *subject, &ty)?;
                let vi = if matches!(slot, Slot::By(_)) { 2 } else { 1 };
                self.slot(slot, 1, &bound)?;
                self.scalar(vi, value)?;
                Ok(ty)
            }
            GTerm::Proj(subject, target, slot) => {
                let ty = self.child(0, target)?;
                let bound = self.components(0, *subject, &ty)?;
                self.slot(slot, 1, &bound)?;
                Ok(match ty {
                    Ty::Tuple(_) => Ty::Scalar,
                    Ty::Fun1N(_) => Ty::Fun11,
                    Ty::FunMN(m, _) => Ty::FunM1(m),
                    _ => unreachable!("components() accepted a non-projectable type"),
                })
            }
            GTerm::Comp(kind, outer, inner) => {
                let o = self.child(0, outer)?;
                let i = self.child(1, inner)?;
                match (kind, o, i) {
                    (CompKind::C111, Ty::Fun11, Ty::Fun11) => Ok(Ty::Fun11),
                    (CompKind::C1K1, Ty::FunM1(k), Ty::Fun1N(k2)) => {
                        self.same_dim(1, &k, &k2, "inner output")?;
                        Ok(Ty::Fun11)
                    }
                    (CompKind::CMKN, Ty::FunMN(k, n), Ty::FunMN(m, k2)) => {
                        self.same_dim(1, &k, &k2, "inner output")?;
                        Ok(Ty::FunMN(m, n))
                    }
                    (CompKind::CM1N, Ty::Fun1N(n), Ty::FunM1(m)) => Ok(Ty::FunMN(m, n)),
                    (kind, o, i) => {
                        let (wo, wi) = match kind {
                            CompKind::C111 => ("Fun11", "Fun11"),
                            CompKind::C1K1 => ("FunM1 _", "Fun1N _"),
                            CompKind::CMKN => ("FunMN _ _", "FunMN _ _"),
                            CompKind::CM1N => ("Fun1N _", "FunM1 _"),
                        };
                        if shape(&o) != wo {
                            Err(self.mismatch(Some(0), wo, &o))
                        } else {
                            Err(self.mismatch(Some(1), wi, &i))
                        }
                    }
                }
            }
            GTerm::Prime(f) => match self.child(0, f)? {
                Ty::Fun11 => Ok(Ty::Fun11),
                other => Err(self.mismatch(Some(0), "Fun11", &other)),
            },
            GTerm::Mul(a, b) => {
                self.scalar(0, a)?;
                self.scalar(1, b)?;
                Ok(Ty::Scalar)
            }
            GTerm::Expand(target) => match self.child(0, target)? {
                Ty::Tuple(k) => Ok(Ty::Tuple(k)),
                other => Err(self.mismatch(Some(0), "Tuple _", &other)),
            },
            GTerm::ExpandSubst(target, slot, value) => {
                let ty = self.child(0, target)?;
                let bound = self.components(0, Subject::K, &ty)?;
                let vi = if matches!(slot, Slot::By(_)) { 2 } else { 1 };
                self.slot(slot, 1, &bound)?;
                self.scalar(vi, value)?;
                Ok(ty)
            }
            GTerm::Note(_, inner) => self.child(0, inner),
        }
    }

    fn tuple_arg(&mut self, i: usize, arg: &GTerm, m: &Dim) -> Result<(), TypeError> {
        match self.child(i, arg)? {
            Ty::Tuple(k) => self.same_dim(i, m, &k, "argument tuple"),
            other => Err(self.mismatch(Some(i), format!("Tuple {m}"), &other)),
        }
    }

    /// The number of components a substitution or projection ranges over.
    fn components(&self, i: usize, subject: Subject, ty: &GType) -> Result<Dim, TypeError> {
        match (subject, ty) {
            (Subject::K, Ty::Tuple(k)) => Ok(k.clone()),
            (Subject::N, Ty::Fun1N(n)) => Ok(n.clone()),
            (Subject::MN, Ty::FunMN(_, n)) => Ok(n.clone()),
            (Subject::K, other) => Err(self.mismatch(Some(i), "Tuple _", other)),
            (Subject::N, other) => Err(self.mismatch(Some(i), "Fun1N _", other)),
            (Subject::MN, other) => Err(self.mismatch(Some(i), "FunMN _ _", other)),
        }
    }
}
