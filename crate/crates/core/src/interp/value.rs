//! Values of the interpretation and the environment file format.

use std::fmt;

use crate::lang::parse::type_from_sexp;
use crate::lang::sexpr::{read_all, Sexp};
use crate::lang::{Context, Name, TypeExpr};

use super::{parse_rational, InterpError, MultiPoly, Rational};

/// One value per type constructor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Scalar(Rational),
    Tuple(Vec<Rational>),
    /// A position `c` of `Index k`, `c < k`.
    Index(usize, usize),
    Fun11(MultiPoly),
    FunM1(MultiPoly),
    Fun1N(Vec<MultiPoly>),
    /// `n` component polynomials in `m` indeterminates.
    FunMN(usize, Vec<MultiPoly>),
}

impl Value {
    pub fn ty(&self) -> TypeExpr {
        match self {
            Value::Scalar(_) => TypeExpr::Scalar,
            Value::Tuple(v) => TypeExpr::Tuple(v.len()),
            Value::Index(_, k) => TypeExpr::Index(*k),
            Value::Fun11(_) => TypeExpr::Fun11,
            Value::FunM1(p) => TypeExpr::FunM1(p.nvars()),
            Value::Fun1N(v) => TypeExpr::Fun1N(v.len()),
            Value::FunMN(m, v) => TypeExpr::FunMN(*m, v.len()),
        }
    }

    /// Check the internal invariants: arities agree with the polynomials.
    pub fn is_well_formed(&self) -> bool {
        match self {
            Value::Index(c, k) => c < k,
            Value::Fun11(p) => p.nvars() == 1,
            Value::Fun1N(v) => v.iter().all(|p| p.nvars() == 1),
            Value::FunMN(m, v) => v.iter().all(|p| p.nvars() == *m),
            _ => true,
        }
    }

    /// Parse the printed form of a value of type `ty`.
    pub fn from_sexp(s: &Sexp, ty: &TypeExpr) -> Result<Value, InterpError> {
        let bad = |what: &str| InterpError::Syntax(s.error(what));
        let rational = |s: &Sexp| s.atom().and_then(parse_rational).ok_or_else(|| InterpError::Syntax(s.error("a rational")));
        let poly = |s: &Sexp, m: usize| -> Result<MultiPoly, InterpError> {
            let text = match (s.string(), s.form()) {
                (Some(t), _) => t,
                (None, Some(("poly", [n, t]))) => {
                    let declared: usize = n.atom().and_then(|a| a.parse().ok()).ok_or_else(|| InterpError::Syntax(n.error("an arity")))?;
                    if declared != m {
                        return Err(InterpError::ArityMismatch { expected: m, found: declared });
                    }
                    t.string().ok_or_else(|| InterpError::Syntax(t.error("a polynomial string")))?
                }
                _ => return Err(InterpError::Syntax(s.error("(poly M \"…\") or a polynomial string"))),
            };
            MultiPoly::parse(m, text)
        };
        let polys = |m: usize, n: usize| -> Result<Vec<MultiPoly>, InterpError> {
            let Some(("polys", items)) = s.form() else { return Err(bad("(polys …)")) };
            if items.len() != n {
                return Err(InterpError::ArityMismatch { expected: n, found: items.len() });
            }
            items.iter().map(|p| poly(p, m)).collect()
        };
        let v = match ty {
            TypeExpr::Scalar => Value::Scalar(rational(s)?),
            TypeExpr::Tuple(k) => {
                let Some(("tuple", items)) = s.form() else { return Err(bad("(tuple …)")) };
                if items.len() != *k {
                    return Err(InterpError::ArityMismatch { expected: *k, found: items.len() });
                }
                Value::Tuple(items.iter().map(rational).collect::<Result<_, _>>()?)
            }
            TypeExpr::Index(k) => {
                let Some(("index", [c])) = s.form() else { return Err(bad("(index C)")) };
                let c: usize = c.atom().and_then(|a| a.parse().ok()).ok_or_else(|| bad("a position"))?;
                if c >= *k {
                    return Err(InterpError::ArityMismatch { expected: *k, found: c + 1 });
                }
                Value::Index(c, *k)
            }
            TypeExpr::Fun11 => Value::Fun11(poly(s, 1)?),
            TypeExpr::FunM1(m) => Value::FunM1(poly(s, *m)?),
            TypeExpr::Fun1N(n) => Value::Fun1N(polys(1, *n)?),
            TypeExpr::FunMN(m, n) => Value::FunMN(*m, polys(*m, *n)?),
        };
        Ok(v)
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, p: &MultiPoly) -> fmt::Result {
    write!(f, "(poly {} \"{p}\")", p.nvars())
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(r) => write!(f, "{r}"),
            Value::Tuple(v) => {
                f.write_str("(tuple")?;
                for r in v {
                    write!(f, " {r}")?;
                }
                f.write_str(")")
            }
            Value::Index(c, _) => write!(f, "(index {c})"),
            Value::Fun11(p) | Value::FunM1(p) => write_poly(f, p),
            Value::Fun1N(v) | Value::FunMN(_, v) => {
                f.write_str("(polys")?;
                for p in v {
                    f.write_str(" ")?;
                    write_poly(f, p)?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Values parallel to a context, oldest binding first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Environment {
    values: Vec<Value>,
}

impl Environment {
    pub fn new(values: Vec<Value>) -> Self {
        Environment { values }
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn push(&mut self, v: Value) {
        self.values.push(v);
    }

    /// Fail unless every value has the type of its context entry.
    pub fn check_against(&self, ctx: &Context) -> Result<(), InterpError> {
        if ctx.len() != self.values.len() {
            return Err(InterpError::EnvironmentMismatch(format!(
                "{} values for a context of length {}",
                self.values.len(),
                ctx.len()
            )));
        }
        for ((name, ty), v) in ctx.entries().iter().zip(&self.values) {
            if v.ty() != *ty || !v.is_well_formed() {
                return Err(InterpError::EnvironmentMismatch(format!(
                    "{} is declared {ty} but bound to a {}",
                    name.as_str(),
                    v.ty()
                )));
            }
        }
        Ok(())
    }
}

/// Read `(bind NAME TYPE VALUE)` forms, oldest binding first.
pub fn parse_env_file(text: &str) -> Result<(Context, Environment), InterpError> {
    let mut ctx = Context::new();
    let mut env = Environment::default();
    for form in read_all(text)? {
        let Some(("bind", [name, ty, value])) = form.form() else {
            return Err(InterpError::Syntax(form.error("(bind NAME TYPE VALUE)")));
        };
        let name = name.atom().ok_or_else(|| InterpError::Syntax(name.error("a name")))?;
        let ty = type_from_sexp(ty, false)?
            .concrete()
            .expect("concrete type syntax has literal arities");
        env.push(Value::from_sexp(value, &ty)?);
        ctx = ctx.extend(Name::new(name), ty);
    }
    Ok((ctx, env))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_file_round_trip() {
        let text = r#"
            (bind f (funmn 2 2) (polys (poly 2 "x1 + x2") "x1 x2"))
            (bind t (tuple 2) (tuple 2 5))
            (bind s scalar 7/2)
            (bind i (index 3) (index 1))
            (bind h fun11 "x1^2 + 1")
        "#;
        let (ctx, env) = parse_env_file(text).unwrap();
        env.check_against(&ctx).unwrap();
        assert_eq!(env.values()[2], Value::Scalar(Rational::new(7.into(), 2.into())));
        for v in env.values() {
            let again = Value::from_sexp(&crate::lang::sexpr::read_one(&v.to_string()).unwrap(), &v.ty()).unwrap();
            assert_eq!(&again, v);
        }
    }

    #[test]
    fn mismatches_are_reported() {
        assert!(parse_env_file(r#"(bind t (tuple 2) (tuple 1))"#).is_err());
        assert!(parse_env_file(r#"(bind f (funm1 2) (poly 3 "x1"))"#).is_err());
        let ctx = Context::new().extend(Name::new("x"), TypeExpr::Scalar);
        let env = Environment::new(vec![Value::Tuple(vec![])]);
        assert!(matches!(env.check_against(&ctx), Err(InterpError::EnvironmentMismatch(_))));
    }
}
