use std::fmt;

/// Largest tuple arity accepted anywhere in the language.
pub const MAX_ARITY: usize = 16;

/// An arity slot of a generic type: a literal or a named arity variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dim {
    Lit(usize),
    Var(String),
}

impl Dim {
    pub fn lit(&self) -> Option<usize> {
        match self {
            Dim::Lit(n) => Some(*n),
            Dim::Var(_) => None,
        }
    }
}

impl From<usize> for Dim {
    fn from(n: usize) -> Self {
        Dim::Lit(n)
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Lit(n) => write!(f, "{n}"),
            Dim::Var(v) => f.write_str(v),
        }
    }
}

/// The seven type constructors, parameterised over the arity representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ty<D> {
    Index(D),
    Fun11,
    FunM1(D),
    Fun1N(D),
    FunMN(D, D),
    Tuple(D),
    Scalar,
}

/// Concrete types: every arity is a natural number.
pub type TypeExpr = Ty<usize>;

/// Types whose arities may be symbolic.
pub type GType = Ty<Dim>;

impl<D> Ty<D> {
    pub fn map<E>(self, mut f: impl FnMut(D) -> E) -> Ty<E> {
        match self {
            Ty::Index(k) => Ty::Index(f(k)),
            Ty::Fun11 => Ty::Fun11,
            Ty::FunM1(m) => Ty::FunM1(f(m)),
            Ty::Fun1N(n) => Ty::Fun1N(f(n)),
            Ty::FunMN(m, n) => {
                let m = f(m);
                Ty::FunMN(m, f(n))
            }
            Ty::Tuple(k) => Ty::Tuple(f(k)),
            Ty::Scalar => Ty::Scalar,
        }
    }

    pub fn dims(&self) -> Vec<&D> {
        match self {
            Ty::Index(k) | Ty::FunM1(k) | Ty::Fun1N(k) | Ty::Tuple(k) => vec![k],
            Ty::FunMN(m, n) => vec![m, n],
            Ty::Fun11 | Ty::Scalar => vec![],
        }
    }
}

impl TypeExpr {
    pub fn generic(&self) -> GType {
        self.clone().map(Dim::Lit)
    }
}

impl GType {
    /// The concrete type, when every arity is a literal.
    pub fn concrete(&self) -> Option<TypeExpr> {
        let mut ok = true;
        let t = self.clone().map(|d| match d {
            Dim::Lit(n) => n,
            Dim::Var(_) => {
                ok = false;
                0
            }
        });
        ok.then_some(t)
    }
}

impl<D: fmt::Display> fmt::Display for Ty<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Index(k) => write!(f, "Index {k}"),
            Ty::Fun11 => f.write_str("Fun11"),
            Ty::FunM1(m) => write!(f, "FunM1 {m}"),
            Ty::Fun1N(n) => write!(f, "Fun1N {n}"),
            Ty::FunMN(m, n) => write!(f, "FunMN {m} {n}"),
            Ty::Tuple(k) => write!(f, "Tuple {k}"),
            Ty::Scalar => f.write_str("Scalar"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concrete_round_trip() {
        let t = TypeExpr::FunMN(2, 3);
        assert_eq!(t.generic().concrete(), Some(t));
        assert_eq!(GType::Tuple(Dim::Var("m".into())).concrete(), None);
    }

    #[test]
    fn display() {
        assert_eq!(TypeExpr::FunMN(2, 3).to_string(), "FunMN 2 3");
        assert_eq!(GType::Tuple(Dim::Var("k".into())).to_string(), "Tuple k");
    }
}
