//! S-expression printing; the inverse of the parser.

use super::generic::{GSlot, GTerm, Idx};
use super::term::{AppKind, Binder, CompKind, Slot, Subject, Term};
use super::types::{Dim, GType, Ty};

fn dim(d: &Dim) -> String {
    match d {
        Dim::Lit(n) => n.to_string(),
        Dim::Var(v) => format!("(arity-var {v})"),
    }
}

fn idx(i: &Idx) -> String {
    match i {
        Idx::Lit(n) => n.to_string(),
        Idx::Param(p) => format!("(index-var {p})"),
    }
}

pub fn type_sexpr(t: &GType) -> String {
    match t {
        Ty::Scalar => "scalar".into(),
        Ty::Fun11 => "fun11".into(),
        Ty::Index(k) => format!("(index {})", dim(k)),
        Ty::Tuple(k) => format!("(tuple {})", dim(k)),
        Ty::FunM1(m) => format!("(funm1 {})", dim(m)),
        Ty::Fun1N(n) => format!("(fun1n {})", dim(n)),
        Ty::FunMN(m, n) => format!("(funmn {} {})", dim(m), dim(n)),
    }
}

fn app_head(k: AppKind) -> &'static str {
    match k {
        AppKind::A11 => "app-11",
        AppKind::AM1 => "app-m1",
        AppKind::A1N => "app-1n",
        AppKind::AMN => "app-mn",
    }
}

fn comp_head(k: CompKind) -> &'static str {
    match k {
        CompKind::C111 => "comp-111",
        CompKind::C1K1 => "comp-1k1",
        CompKind::CMKN => "comp-mkn",
        CompKind::CM1N => "comp-m1n",
    }
}

fn subject_suffix(s: Subject, by: bool) -> &'static str {
    match (s, by) {
        (Subject::K, false) => "k",
        (Subject::N, false) => "n",
        (Subject::MN, false) => "mn",
        (Subject::K, true) => "ki",
        (Subject::N, true) => "ni",
        (Subject::MN, true) => "mni",
    }
}

/// Print a generic term. Display notes are dropped, since they carry no
/// meaning of their own.
pub fn gterm_sexpr(t: &GTerm) -> String {
    let mut out = String::new();
    write(t, &mut out);
    out
}

pub fn term_sexpr(t: &Term) -> String {
    gterm_sexpr(&GTerm::from(t))
}

fn slot(s: &GSlot, out: &mut String) {
    match s {
        Slot::At(i) => out.push_str(&idx(i)),
        Slot::By(t) => write(t, out),
    }
}

fn write(t: &GTerm, out: &mut String) {
    match t {
        GTerm::Var(n, i) => out.push_str(&format!("(var {n} {i})")),
        GTerm::Lam(b, n, body) => {
            match b {
                Binder::TT(m) => out.push_str(&format!("(lam-tt {} {n} ", dim(m))),
                Binder::TS(m) => out.push_str(&format!("(lam-ts {} {n} ", dim(m))),
                Binder::ST => out.push_str(&format!("(lam-st {n} ")),
                Binder::SS => out.push_str(&format!("(lam-ss {n} ")),
            }
            write(body, out);
            out.push(')');
        }
        GTerm::Sum(k, n, body) => {
            out.push_str(&format!("(sum {} {n} ", dim(k)));
            write(body, out);
            out.push(')');
        }
        GTerm::App(k, a, b) => binary(app_head(*k), a, b, out),
        GTerm::Comp(k, a, b) => binary(comp_head(*k), a, b, out),
        GTerm::Mul(a, b) => binary("mul", a, b, out),
        GTerm::Subst(s, target, sl, v) => {
            out.push_str(&format!("(subst-{} ", subject_suffix(*s, matches!(sl, Slot::By(_)))));
            write(target, out);
            out.push(' ');
            slot(sl, out);
            out.push(' ');
            write(v, out);
            out.push(')');
        }
        GTerm::Proj(s, target, sl) => {
            out.push_str(&format!("(proj-{} ", subject_suffix(*s, matches!(sl, Slot::By(_)))));
            write(target, out);
            out.push(' ');
            slot(sl, out);
            out.push(')');
        }
        GTerm::Prime(a) => {
            out.push_str("(prime ");
            write(a, out);
            out.push(')');
        }
        GTerm::Expand(a) => {
            out.push_str("(expand ");
            write(a, out);
            out.push(')');
        }
        GTerm::ExpandSubst(target, sl, v) => {
            out.push_str("(expand-subst ");
            write(target, out);
            out.push(' ');
            slot(sl, out);
            out.push(' ');
            write(v, out);
            out.push(')');
        }
        GTerm::Note(_, inner) => write(inner, out),
    }
}

fn binary(head: &str, a: &GTerm, b: &GTerm, out: &mut String) {
    out.push('(');
    out.push_str(head);
    out.push(' ');
    write(a, out);
    out.push(' ');
    write(b, out);
    out.push(')');
}
