//! Parsing terms, types and term files from S-expressions.

use super::context::{GContext, Name};
use super::generic::{GSlot, GTerm, Idx};
use super::sexpr::{read_all, read_one, Sexp, SyntaxError};
use super::term::{AppKind, Binder, CompKind, Slot, Subject, Term};
use super::types::{Dim, GType, Ty, MAX_ARITY};

const TERM_FORMS: &str = "a term form (var, lam-tt, lam-ts, lam-st, lam-ss, sum, app-*, subst-*, proj-*, comp-*, prime, mul)";

struct Parser {
    generic: bool,
}

fn is_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn arity_err(s: &Sexp) -> SyntaxError {
    s.error(format!("an arity between 1 and {MAX_ARITY}"))
}

impl Parser {
    fn nat(&self, s: &Sexp) -> Result<usize, SyntaxError> {
        s.atom()
            .filter(|a| !a.is_empty() && a.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|a| a.parse().ok())
            .ok_or_else(|| s.error("a natural number"))
    }

    fn name(&self, s: &Sexp) -> Result<Name, SyntaxError> {
        match s.atom() {
            Some(a) if is_name(a) => Ok(Name::new(a)),
            _ => Err(s.error("a name [A-Za-z][A-Za-z0-9_]*")),
        }
    }

    fn dim(&self, s: &Sexp) -> Result<Dim, SyntaxError> {
        if let Some(("arity-var", args)) = s.form() {
            if !self.generic {
                return Err(s.error("a natural-number arity (arity variables need a generic term)"));
            }
            return match args {
                [n] => Ok(Dim::Var(self.name(n)?.0)),
                _ => Err(s.error("(arity-var NAME)")),
            };
        }
        let n = self.nat(s).map_err(|_| arity_err(s))?;
        if n == 0 || n > MAX_ARITY {
            return Err(arity_err(s));
        }
        Ok(Dim::Lit(n))
    }

    fn pos(&self, s: &Sexp) -> Result<Idx, SyntaxError> {
        if let Some(("index-var", args)) = s.form() {
            if !self.generic {
                return Err(s.error("a natural-number position"));
            }
            return match args {
                [n] => Ok(Idx::Param(self.name(n)?.0)),
                _ => Err(s.error("(index-var NAME)")),
            };
        }
        Ok(Idx::Lit(self.nat(s)?))
    }

    fn arity(&self, form: &Sexp, args: &[Sexp], n: usize, shape: &str) -> Result<(), SyntaxError> {
        if args.len() == n {
            Ok(())
        } else {
            Err(form.error(shape.to_string()))
        }
    }

    fn term(&self, s: &Sexp) -> Result<GTerm, SyntaxError> {
        let Some((head, a)) = s.form() else {
            return Err(s.error(TERM_FORMS));
        };
        let t = |x: &Sexp| self.term(x).map(Box::new);
        let app = |k| -> Result<GTerm, SyntaxError> {
            self.arity(s, a, 2, &format!("({head} term term)"))?;
            Ok(GTerm::App(k, t(&a[0])?, t(&a[1])?))
        };
        let comp = |k| -> Result<GTerm, SyntaxError> {
            self.arity(s, a, 2, &format!("({head} term term)"))?;
            Ok(GTerm::Comp(k, t(&a[0])?, t(&a[1])?))
        };
        let subst = |k, by: bool| -> Result<GTerm, SyntaxError> {
            self.arity(s, a, 3, &format!("({head} term {} term)", if by { "term" } else { "NAT" }))?;
            let slot: GSlot = if by { Slot::By(t(&a[1])?) } else { Slot::At(self.pos(&a[1])?) };
            Ok(GTerm::Subst(k, t(&a[0])?, slot, t(&a[2])?))
        };
        let proj = |k, by: bool| -> Result<GTerm, SyntaxError> {
            self.arity(s, a, 2, &format!("({head} term {})", if by { "term" } else { "NAT" }))?;
            let slot: GSlot = if by { Slot::By(t(&a[1])?) } else { Slot::At(self.pos(&a[1])?) };
            Ok(GTerm::Proj(k, t(&a[0])?, slot))
        };
        let lam_t = |mk: fn(Dim) -> Binder<Dim>| -> Result<GTerm, SyntaxError> {
            self.arity(s, a, 3, &format!("({head} NAT NAME term)"))?;
            Ok(GTerm::Lam(mk(self.dim(&a[0])?), self.name(&a[1])?, t(&a[2])?))
        };
        let lam_s = |b: Binder<Dim>| -> Result<GTerm, SyntaxError> {
            self.arity(s, a, 2, &format!("({head} NAME term)"))?;
            Ok(GTerm::Lam(b, self.name(&a[0])?, t(&a[1])?))
        };
        match head {
            "var" => {
                self.arity(s, a, 2, "(var NAME NAT)")?;
                Ok(GTerm::Var(self.name(&a[0])?, self.nat(&a[1])?))
            }
            "lam-tt" => lam_t(Binder::TT),
            "lam-ts" => lam_t(Binder::TS),
            "lam-st" => lam_s(Binder::ST),
            "lam-ss" => lam_s(Binder::SS),
            "sum" => {
                self.arity(s, a, 3, "(sum NAT NAME term)")?;
                Ok(GTerm::Sum(self.dim(&a[0])?, self.name(&a[1])?, t(&a[2])?))
            }
            "app-11" => app(AppKind::A11),
            "app-m1" => app(AppKind::AM1),
            "app-1n" => app(AppKind::A1N),
            "app-mn" => app(AppKind::AMN),
            "subst-k" => subst(Subject::K, false),
            "subst-n" => subst(Subject::N, false),
            "subst-mn" => subst(Subject::MN, false),
            "subst-ki" => subst(Subject::K, true),
            "subst-ni" => subst(Subject::N, true),
            "subst-mni" => subst(Subject::MN, true),
            "proj-k" => proj(Subject::K, false),
            "proj-n" => proj(Subject::N, false),
            "proj-mn" => proj(Subject::MN, false),
            "proj-ki" => proj(Subject::K, true),
            "proj-ni" => proj(Subject::N, true),
            "proj-mni" => proj(Subject::MN, true),
            "comp-111" => comp(CompKind::C111),
            "comp-1k1" => comp(CompKind::C1K1),
            "comp-mkn" => comp(CompKind::CMKN),
            "comp-m1n" => comp(CompKind::CM1N),
            "prime" => {
                self.arity(s, a, 1, "(prime term)")?;
                Ok(GTerm::Prime(t(&a[0])?))
            }
            "mul" => {
                self.arity(s, a, 2, "(mul term term)")?;
                Ok(GTerm::Mul(t(&a[0])?, t(&a[1])?))
            }
            "expand" if self.generic => {
                self.arity(s, a, 1, "(expand term)")?;
                Ok(GTerm::Expand(t(&a[0])?))
            }
            "expand-subst" if self.generic => {
                self.arity(s, a, 3, "(expand-subst term POSEXPR term)")?;
                let slot: GSlot = match (a[1].form(), a[1].atom()) {
                    (Some(("index-var", _)), _) | (_, Some(_)) => Slot::At(self.pos(&a[1])?),
                    _ => Slot::By(t(&a[1])?),
                };
                Ok(GTerm::ExpandSubst(t(&a[0])?, slot, t(&a[2])?))
            }
            _ => Err(s.list().unwrap()[0].error(TERM_FORMS)),
        }
    }

    fn ty(&self, s: &Sexp) -> Result<GType, SyntaxError> {
        const TYPES: &str = "a type (scalar, fun11, (index D), (tuple D), (funm1 D), (fun1n D), (funmn D D))";
        if let Some(a) = s.atom() {
            return match a {
                "scalar" => Ok(Ty::Scalar),
                "fun11" => Ok(Ty::Fun11),
                _ => Err(s.error(TYPES)),
            };
        }
        let Some((head, a)) = s.form() else {
            return Err(s.error(TYPES));
        };
        let one = |mk: fn(Dim) -> GType| -> Result<GType, SyntaxError> {
            self.arity(s, a, 1, &format!("({head} D)"))?;
            Ok(mk(self.dim(&a[0])?))
        };
        match head {
            "index" => one(Ty::Index),
            "tuple" => one(Ty::Tuple),
            "funm1" => one(Ty::FunM1),
            "fun1n" => one(Ty::Fun1N),
            "funmn" => {
                self.arity(s, a, 2, "(funmn D D)")?;
                Ok(Ty::FunMN(self.dim(&a[0])?, self.dim(&a[1])?))
            }
            _ => Err(s.error(TYPES)),
        }
    }
}

/// Parse a concrete term.
pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let s = read_one(text)?;
    term_from_sexp(&s)
}

pub fn term_from_sexp(s: &Sexp) -> Result<Term, SyntaxError> {
    let g = Parser { generic: false }.term(s)?;
    Ok(g.to_term().expect("the concrete grammar yields concrete terms"))
}

/// Parse a term that may use arity variables, index parameters and expansion forms.
pub fn parse_generic(text: &str) -> Result<GTerm, SyntaxError> {
    let s = read_one(text)?;
    generic_from_sexp(&s)
}

pub fn generic_from_sexp(s: &Sexp) -> Result<GTerm, SyntaxError> {
    Parser { generic: true }.term(s)
}

pub fn parse_type(text: &str, generic: bool) -> Result<GType, SyntaxError> {
    type_from_sexp(&read_one(text)?, generic)
}

pub fn type_from_sexp(s: &Sexp, generic: bool) -> Result<GType, SyntaxError> {
    Parser { generic }.ty(s)
}

/// A term file: any number of `(decl NAME TYPE)` forms, oldest binding
/// first, followed by exactly one term.
pub fn parse_term_file(text: &str, generic: bool) -> Result<(GContext, GTerm), SyntaxError> {
    let forms = read_all(text)?;
    let p = Parser { generic };
    let mut ctx = GContext::new();
    let mut term = None;
    for f in &forms {
        if let Some(("decl", args)) = f.form() {
            if term.is_some() {
                return Err(f.error("no declarations after the term"));
            }
            p.arity(f, args, 2, "(decl NAME TYPE)")?;
            ctx.push(p.name(&args[0])?, p.ty(&args[1])?);
        } else if term.is_some() {
            return Err(f.error("end of input after the term"));
        } else {
            term = Some(p.term(f)?);
        }
    }
    let term = term.ok_or_else(|| super::sexpr::SyntaxError {
        line: 1,
        column: 1,
        expected: "a term".into(),
    })?;
    Ok((ctx, term))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity() {
        assert_eq!(
            parse_term("(lam-ss x (var x 0))").unwrap(),
            Term::lam(Binder::SS, "x", Term::var("x", 0))
        );
    }

    #[test]
    fn prime_of_var() {
        assert_eq!(parse_term("(prime (var f 0))").unwrap(), Term::prime(Term::var("f", 0)));
    }

    #[test]
    fn unbalanced() {
        let e = parse_term("(app-11 (var f 0)").unwrap_err();
        assert_eq!(e.expected, "')'");
    }

    #[test]
    fn zero_arity_rejected() {
        let e = parse_term("(lam-ts 0 x (proj-k (var x 0) 0))").unwrap_err();
        assert!(e.expected.contains("arity"));
        assert!(parse_term("(lam-ts 17 x (proj-k (var x 0) 0))").is_err());
    }

    #[test]
    fn bad_name() {
        assert!(parse_term("(var 1x 0)").is_err());
        assert!(parse_term("(var x_1 0)").is_ok());
    }

    #[test]
    fn generic_forms_need_generic_mode() {
        let src = "(lam-ts (arity-var m) x (proj-k (var x 0) (index-var i)))";
        assert!(parse_term(src).is_err());
        let g = parse_generic(src).unwrap();
        assert_eq!(g.symbols(), (vec!["m".to_string()], vec!["i".to_string()]));
    }

    #[test]
    fn term_file_with_declarations() {
        let (ctx, t) = parse_term_file(
            "(decl f (funmn 2 3))\n(decl x (tuple 2))\n(app-mn (var f 1) (var x 0))",
            false,
        )
        .unwrap();
        assert_eq!(ctx.len(), 2);
        assert_eq!(ctx.lookup(1).unwrap().1, Ty::FunMN(Dim::Lit(2), Dim::Lit(3)));
        assert!(matches!(t, GTerm::App(AppKind::AMN, ..)));
    }

    #[test]
    fn unknown_form() {
        let e = parse_term("(frob (var x 0))").unwrap_err();
        assert_eq!((e.line, e.column), (1, 2));
    }
}
