use super::context::Name;

/// The four λ-binders, named by domain and codomain (t = tuple, s = scalar).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Binder<D> {
    /// `λᵗᵗ m`: tuple of arity m to tuple.
    TT(D),
    /// `λᵗˢ m`: tuple of arity m to scalar.
    TS(D),
    /// `λˢᵗ`: scalar to tuple.
    ST,
    /// `λˢˢ`: scalar to scalar.
    SS,
}

impl<D> Binder<D> {
    pub fn arity(&self) -> Option<&D> {
        match self {
            Binder::TT(m) | Binder::TS(m) => Some(m),
            Binder::ST | Binder::SS => None,
        }
    }

    pub fn map<E>(self, f: impl FnOnce(D) -> E) -> Binder<E> {
        match self {
            Binder::TT(m) => Binder::TT(f(m)),
            Binder::TS(m) => Binder::TS(f(m)),
            Binder::ST => Binder::ST,
            Binder::SS => Binder::SS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AppKind {
    /// Fun11 applied to a scalar.
    A11,
    /// FunM1 m applied to a tuple.
    AM1,
    /// Fun1N n applied to a scalar.
    A1N,
    /// FunMN m n applied to a tuple.
    AMN,
}

/// Which kind of subject a substitution or projection acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subject {
    /// A tuple.
    K,
    /// A scalar-to-tuple function (its output components).
    N,
    /// A tuple-to-tuple function (its output components).
    MN,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompKind {
    C111,
    C1K1,
    CMKN,
    CM1N,
}

/// A component position: a literal or an index-typed term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Slot<P, T> {
    At(P),
    By(Box<T>),
}

/// Concrete terms. Variables carry a display
/// name and a de Bruijn index; names are ignored by equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name, usize),
    Lam(Binder<usize>, Name, Box<Term>),
    Sum(usize, Name, Box<Term>),
    App(AppKind, Box<Term>, Box<Term>),
    Subst(Subject, Box<Term>, Slot<usize, Term>, Box<Term>),
    Proj(Subject, Box<Term>, Slot<usize, Term>),
    Comp(CompKind, Box<Term>, Box<Term>),
    Prime(Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str, index: usize) -> Term {
        Term::Var(Name::new(name), index)
    }

    pub fn lam(binder: Binder<usize>, name: &str, body: Term) -> Term {
        Term::Lam(binder, Name::new(name), Box::new(body))
    }

    pub fn sum(k: usize, name: &str, body: Term) -> Term {
        Term::Sum(k, Name::new(name), Box::new(body))
    }

    pub fn app(kind: AppKind, head: Term, arg: Term) -> Term {
        Term::App(kind, Box::new(head), Box::new(arg))
    }

    pub fn subst(subject: Subject, t: Term, at: usize, u: Term) -> Term {
        Term::Subst(subject, Box::new(t), Slot::At(at), Box::new(u))
    }

    pub fn subst_by(subject: Subject, t: Term, idx: Term, u: Term) -> Term {
        Term::Subst(subject, Box::new(t), Slot::By(Box::new(idx)), Box::new(u))
    }

    pub fn proj(subject: Subject, t: Term, at: usize) -> Term {
        Term::Proj(subject, Box::new(t), Slot::At(at))
    }

    pub fn proj_by(subject: Subject, t: Term, idx: Term) -> Term {
        Term::Proj(subject, Box::new(t), Slot::By(Box::new(idx)))
    }

    pub fn comp(kind: CompKind, t: Term, u: Term) -> Term {
        Term::Comp(kind, Box::new(t), Box::new(u))
    }

    pub fn prime(t: Term) -> Term {
        Term::Prime(Box::new(t))
    }

    pub fn mul(t: Term, u: Term) -> Term {
        Term::Mul(Box::new(t), Box::new(u))
    }

    /// Immediate subterms in textual order.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(..) => vec![],
            Term::Lam(_, _, b) | Term::Sum(_, _, b) | Term::Prime(b) => vec![b],
            Term::App(_, a, b) | Term::Comp(_, a, b) | Term::Mul(a, b) => vec![a, b],
            Term::Subst(_, t, Slot::At(_), u) => vec![t, u],
            Term::Subst(_, t, Slot::By(i), u) => vec![t, i, u],
            Term::Proj(_, t, Slot::At(_)) => vec![t],
            Term::Proj(_, t, Slot::By(i)) => vec![t, i],
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Height of the tree; a variable has depth 1.
    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Add `delta` to every free variable index at or above `cutoff`.
    pub fn shift(&self, delta: usize, cutoff: usize) -> Term {
        self.shift_from(delta, cutoff)
    }

    fn shift_from(&self, delta: usize, cutoff: usize) -> Term {
        let s = |t: &Term, c: usize| Box::new(t.shift_from(delta, c));
        let slot = |sl: &Slot<usize, Term>| match sl {
            Slot::At(p) => Slot::At(*p),
            Slot::By(i) => Slot::By(s(i, cutoff)),
        };
        match self {
            Term::Var(n, i) if *i >= cutoff => Term::Var(n.clone(), i + delta),
            Term::Var(n, i) => Term::Var(n.clone(), *i),
            Term::Lam(b, n, body) => Term::Lam(b.clone(), n.clone(), s(body, cutoff + 1)),
            Term::Sum(k, n, body) => Term::Sum(*k, n.clone(), s(body, cutoff + 1)),
            Term::App(k, a, b) => Term::App(*k, s(a, cutoff), s(b, cutoff)),
            Term::Subst(k, t, sl, u) => Term::Subst(*k, s(t, cutoff), slot(sl), s(u, cutoff)),
            Term::Proj(k, t, sl) => Term::Proj(*k, s(t, cutoff), slot(sl)),
            Term::Comp(k, a, b) => Term::Comp(*k, s(a, cutoff), s(b, cutoff)),
            Term::Prime(t) => Term::Prime(s(t, cutoff)),
            Term::Mul(a, b) => Term::Mul(s(a, cutoff), s(b, cutoff)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_ignores_names() {
        let a = Term::lam(Binder::SS, "x", Term::var("x", 0));
        let b = Term::lam(Binder::SS, "y", Term::var("y", 0));
        assert_eq!(a, b);
    }

    #[test]
    fn shift_respects_binders() {
        let t = Term::lam(
            Binder::SS,
            "z",
            Term::mul(Term::var("z", 0), Term::var("c", 1)),
        );
        let shifted = t.shift(2, 0);
        assert_eq!(
            shifted,
            Term::lam(
                Binder::SS,
                "z",
                Term::mul(Term::var("z", 0), Term::var("c", 3))
            )
        );
    }
}
