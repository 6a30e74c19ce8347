//! A declarative, set-valued reading of the inference rules, a table of
//! accepting and rejecting terms per rule, and an exhaustive small-term
//! enumerator. Shared by the typing tests and the acceptance harness.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use jacobiform::lang::{
    parse_term, type_check, AppKind, Binder, CompKind, Context, Name, Slot, Subject, Term, Ty, TypeExpr,
};

/// Every type derivable for `t` in `ctx` (most recent binding last), trying
/// every rule against every combination of premise types.
pub fn derivable(ctx: &[TypeExpr], t: &Term) -> HashSet<TypeExpr> {
    let sub = |t: &Term| derivable(ctx, t);
    let under = |ty: TypeExpr, t: &Term| {
        let mut c = ctx.to_vec();
        c.push(ty);
        derivable(&c, t)
    };
    let mut out = HashSet::new();
    match t {
        Term::Var(_, i) => {
            if *i < ctx.len() {
                out.insert(ctx[ctx.len() - 1 - i].clone());
            }
        }
        Term::Lam(b, _, body) => match b {
            Binder::TT(m) if *m >= 1 => {
                for ty in under(Ty::Tuple(*m), body) {
                    if let Ty::Tuple(n) = ty {
                        out.insert(Ty::FunMN(*m, n));
                    }
                }
            }
            Binder::TS(m) if *m >= 1 => {
                if under(Ty::Tuple(*m), body).contains(&Ty::Scalar) {
                    out.insert(Ty::FunM1(*m));
                }
            }
            Binder::ST => {
                for ty in under(Ty::Scalar, body) {
                    if let Ty::Tuple(n) = ty {
                        out.insert(Ty::Fun1N(n));
                    }
                }
            }
            Binder::SS => {
                if under(Ty::Scalar, body).contains(&Ty::Scalar) {
                    out.insert(Ty::Fun11);
                }
            }
            _ => {}
        },
        Term::Sum(k, _, body) => {
            if *k >= 1 && under(Ty::Index(*k), body).contains(&Ty::Scalar) {
                out.insert(Ty::Scalar);
            }
        }
        Term::App(kind, f, a) => {
            let fs = sub(f);
            let args = sub(a);
            for ft in &fs {
                for at in &args {
                    match (kind, ft, at) {
                        (AppKind::A11, Ty::Fun11, Ty::Scalar) => out.insert(Ty::Scalar),
                        (AppKind::AM1, Ty::FunM1(m), Ty::Tuple(k)) if m == k => out.insert(Ty::Scalar),
                        (AppKind::A1N, Ty::Fun1N(n), Ty::Scalar) => out.insert(Ty::Tuple(*n)),
                        (AppKind::AMN, Ty::FunMN(m, n), Ty::Tuple(k)) if m == k => out.insert(Ty::Tuple(*n)),
                        _ => false,
                    };
                }
            }
        }
        Term::Subst(subject, target, slot, value) => {
            if !sub(value).contains(&Ty::Scalar) {
                return out;
            }
            for tt in sub(target) {
                if let Some(bound) = range(*subject, &tt) {
                    if slot_ok(ctx, slot, bound) {
                        out.insert(tt);
                    }
                }
            }
        }
        Term::Proj(subject, target, slot) => {
            for tt in sub(target) {
                if let Some(bound) = range(*subject, &tt) {
                    if slot_ok(ctx, slot, bound) {
                        out.insert(match tt {
                            Ty::Tuple(_) => Ty::Scalar,
                            Ty::Fun1N(_) => Ty::Fun11,
                            Ty::FunMN(m, _) => Ty::FunM1(m),
                            _ => unreachable!(),
                        });
                    }
                }
            }
        }
        Term::Comp(kind, outer, inner) => {
            let os = sub(outer);
            let is = sub(inner);
            for o in &os {
                for i in &is {
                    match (kind, o, i) {
                        (CompKind::C111, Ty::Fun11, Ty::Fun11) => out.insert(Ty::Fun11),
                        (CompKind::C1K1, Ty::FunM1(k), Ty::Fun1N(k2)) if k == k2 => out.insert(Ty::Fun11),
                        (CompKind::CMKN, Ty::FunMN(k, n), Ty::FunMN(m, k2)) if k == k2 => out.insert(Ty::FunMN(*m, *n)),
                        (CompKind::CM1N, Ty::Fun1N(n), Ty::FunM1(m)) => out.insert(Ty::FunMN(*m, *n)),
                        _ => false,
                    };
                }
            }
        }
        Term::Prime(f) => {
            if sub(f).contains(&Ty::Fun11) {
                out.insert(Ty::Fun11);
            }
        }
        Term::Mul(a, b) => {
            if sub(a).contains(&Ty::Scalar) && sub(b).contains(&Ty::Scalar) {
                out.insert(Ty::Scalar);
            }
        }
    }
    out
}

fn range(subject: Subject, ty: &TypeExpr) -> Option<usize> {
    match (subject, ty) {
        (Subject::K, Ty::Tuple(k)) | (Subject::N, Ty::Fun1N(k)) | (Subject::MN, Ty::FunMN(_, k)) => Some(*k),
        _ => None,
    }
}

fn slot_ok(ctx: &[TypeExpr], slot: &Slot<usize, Term>, bound: usize) -> bool {
    match slot {
        Slot::At(c) => *c < bound,
        Slot::By(u) => derivable(ctx, u).contains(&Ty::Index(bound)),
    }
}

/// `a: Scalar, t: Tuple 2, f: Fun11, p: Fun1N 2, q: FunM1 2, F: FunMN 2 2, c: Index 2`,
/// so that `c` has index 0 and `a` index 6.
pub fn rule_context() -> Vec<(&'static str, TypeExpr)> {
    vec![
        ("a", Ty::Scalar),
        ("t", Ty::Tuple(2)),
        ("f", Ty::Fun11),
        ("p", Ty::Fun1N(2)),
        ("q", Ty::FunM1(2)),
        ("F", Ty::FunMN(2, 2)),
        ("c", Ty::Index(2)),
    ]
}

pub fn context_of(entries: &[(&str, TypeExpr)]) -> Context {
    entries.iter().fold(Context::new(), |c, (n, ty)| c.extend(Name::new(*n), ty.clone()))
}

/// One accepting and one rejecting term for every inference rule, in [`rule_context`].
pub const RULE_CASES: &[(&str, &str, &str)] = &[
    ("var", "(var c 0)", "(var z 7)"),
    ("lam-tt", "(lam-tt 2 x (var x 0))", "(lam-tt 2 x (var a 7))"),
    ("lam-ts", "(lam-ts 2 x (proj-k (var x 0) 0))", "(lam-ts 2 x (var x 0))"),
    ("lam-st", "(lam-st x (var t 6))", "(lam-st x (var x 0))"),
    ("lam-ss", "(lam-ss x (var x 0))", "(lam-ss x (var t 6))"),
    ("sum", "(sum 2 i (proj-ki (var t 6) (var i 0)))", "(sum 2 i (var i 0))"),
    ("app-11", "(app-11 (var f 4) (var a 6))", "(app-11 (var f 4) (var t 5))"),
    ("app-m1", "(app-m1 (var q 2) (var t 5))", "(app-m1 (var q 2) (var a 6))"),
    ("app-1n", "(app-1n (var p 3) (var a 6))", "(app-1n (var q 2) (var a 6))"),
    ("app-mn", "(app-mn (var F 1) (var t 5))", "(app-mn (var f 4) (var t 5))"),
    ("subst-k", "(subst-k (var t 5) 1 (var a 6))", "(subst-k (var t 5) 2 (var a 6))"),
    ("subst-n", "(subst-n (var p 3) 0 (var a 6))", "(subst-n (var F 1) 0 (var a 6))"),
    ("subst-mn", "(subst-mn (var F 1) 1 (var a 6))", "(subst-mn (var F 1) 0 (var t 5))"),
    ("subst-ki", "(subst-ki (var t 5) (var c 0) (var a 6))", "(subst-ki (var t 5) (var a 6) (var a 6))"),
    ("subst-ni", "(subst-ni (var p 3) (var c 0) (var a 6))", "(subst-ni (var p 3) (var c 0) (var t 5))"),
    ("subst-mni", "(subst-mni (var F 1) (var c 0) (var a 6))", "(subst-mni (var q 2) (var c 0) (var a 6))"),
    ("proj-k", "(proj-k (var t 5) 0)", "(proj-k (var a 6) 0)"),
    ("proj-n", "(proj-n (var p 3) 1)", "(proj-n (var p 3) 2)"),
    ("proj-mn", "(proj-mn (var F 1) 0)", "(proj-mn (var q 2) 0)"),
    ("proj-ki", "(proj-ki (var t 5) (var c 0))", "(proj-ki (var t 5) (var a 6))"),
    ("proj-ni", "(proj-ni (var p 3) (var c 0))", "(proj-ni (var F 1) (var c 0))"),
    ("proj-mni", "(proj-mni (var F 1) (var c 0))", "(sum 3 j (app-m1 (proj-mni (var F 2) (var j 0)) (var t 6)))"),
    ("comp-111", "(comp-111 (var f 4) (prime (var f 4)))", "(comp-111 (var f 4) (var p 3))"),
    ("comp-1k1", "(comp-1k1 (var q 2) (var p 3))", "(comp-1k1 (var p 3) (var q 2))"),
    ("comp-mkn", "(comp-mkn (var F 1) (var F 1))", "(comp-mkn (var F 1) (var q 2))"),
    ("comp-m1n", "(comp-m1n (var p 3) (var q 2))", "(comp-m1n (var q 2) (var p 3))"),
    ("prime", "(prime (var f 4))", "(prime (var q 2))"),
    ("mul", "(mul (var a 6) (app-11 (var f 4) (var a 6)))", "(mul (var a 6) (var t 5))"),
];

/// Outcome of checking one rule's accepting and rejecting case against both
/// the checker and the oracle.
pub fn check_rule_case(accept: &str, reject: &str) -> Result<(), String> {
    let entries = rule_context();
    let ctx = context_of(&entries);
    let tys: Vec<TypeExpr> = entries.iter().map(|(_, t)| t.clone()).collect();
    let good = parse_term(accept).map_err(|e| format!("{accept}: {e}"))?;
    let typed = type_check(&ctx, &good).map_err(|e| format!("{accept}: {e}"))?;
    let oracle = derivable(&tys, &good);
    if oracle.len() != 1 || !oracle.contains(typed.ty()) {
        return Err(format!("{accept}: checker says {}, oracle says {oracle:?}", typed.ty()));
    }
    let bad = parse_term(reject).map_err(|e| format!("{reject}: {e}"))?;
    if let Ok(t) = type_check(&ctx, &bad) {
        return Err(format!("{reject}: accepted at {}", t.ty()));
    }
    if !derivable(&tys, &bad).is_empty() {
        return Err(format!("{reject}: oracle derives a type"));
    }
    Ok(())
}

/// Counts from an exhaustive enumeration.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Census {
    /// Raw terms of depth ≤ 2 checked, well-typed or not.
    pub raw: usize,
    /// Well-typed terms per depth (index 0 is depth 1).
    pub well_typed: [usize; 3],
    /// Terms where the checker and the oracle disagreed, or where the oracle
    /// derived more than one type.
    pub failures: Vec<String>,
}

/// The enumeration context: `a: Scalar, t: Tuple 2, c: Index 2, f: Fun11, p: Fun1N 2, F: FunMN 2 1`.
pub fn enumeration_context() -> Vec<TypeExpr> {
    vec![Ty::Scalar, Ty::Tuple(2), Ty::Index(2), Ty::Fun11, Ty::Fun1N(2), Ty::FunMN(2, 1)]
}

const ARITIES: [usize; 2] = [1, 2];
const LITERALS: [usize; 2] = [0, 1];

fn binders() -> Vec<(Binder<usize>, TypeExpr)> {
    let mut v = vec![(Binder::ST, Ty::Scalar), (Binder::SS, Ty::Scalar)];
    for m in ARITIES {
        v.push((Binder::TT(m), Ty::Tuple(m)));
        v.push((Binder::TS(m), Ty::Tuple(m)));
    }
    v
}

fn bx(t: &Term) -> Box<Term> {
    Box::new(t.clone())
}

/// All terms of depth exactly `d` whose children come from `kids` (terms of
/// depth < d in the same context) and `bodies` (terms of depth < d under
/// each binder). Variables are emitted at depth 1 only, with every index
/// below `ctx_len + 1` so that unbound variables are included.
fn layer(ctx_len: usize, d: usize, kids: &[Term], bodies: &dyn Fn(&TypeExpr) -> Vec<Term>) -> Vec<Term> {
    let x = || Name::new("x");
    if d == 1 {
        return (0..=ctx_len).map(|i| Term::Var(x(), i)).collect();
    }
    let mut out = Vec::new();
    for (b, dom) in binders() {
        for body in bodies(&dom) {
            out.push(Term::Lam(b.clone(), x(), Box::new(body)));
        }
    }
    for k in ARITIES {
        for body in bodies(&Ty::Index(k)) {
            out.push(Term::Sum(k, x(), Box::new(body)));
        }
    }
    for a in kids {
        out.push(Term::Prime(bx(a)));
        for subject in [Subject::K, Subject::N, Subject::MN] {
            for c in LITERALS {
                out.push(Term::Proj(subject, bx(a), Slot::At(c)));
            }
        }
        for b in kids {
            for kind in [AppKind::A11, AppKind::AM1, AppKind::A1N, AppKind::AMN] {
                out.push(Term::App(kind, bx(a), bx(b)));
            }
            for kind in [CompKind::C111, CompKind::C1K1, CompKind::CMKN, CompKind::CM1N] {
                out.push(Term::Comp(kind, bx(a), bx(b)));
            }
            out.push(Term::Mul(bx(a), bx(b)));
            for subject in [Subject::K, Subject::N, Subject::MN] {
                out.push(Term::Proj(subject, bx(a), Slot::By(bx(b))));
                for c in LITERALS {
                    out.push(Term::Subst(subject, bx(a), Slot::At(c), bx(b)));
                }
                for v in kids {
                    out.push(Term::Subst(subject, bx(a), Slot::By(bx(b)), bx(v)));
                }
            }
        }
    }
    // Keep only terms that reach depth d.
    out.retain(|t| depth(t) == d);
    out
}

pub fn depth(t: &Term) -> usize {
    1 + match t {
        Term::Var(..) => 0,
        Term::Lam(_, _, b) | Term::Sum(_, _, b) | Term::Prime(b) => depth(b),
        Term::App(_, a, b) | Term::Comp(_, a, b) | Term::Mul(a, b) => depth(a).max(depth(b)),
        Term::Proj(_, a, s) => depth(a).max(slot_depth(s)),
        Term::Subst(_, a, s, v) => depth(a).max(slot_depth(s)).max(depth(v)),
    }
}

fn slot_depth(s: &Slot<usize, Term>) -> usize {
    match s {
        Slot::At(_) => 0,
        Slot::By(u) => depth(u),
    }
}

struct Enumerator {
    census: Census,
    /// Well-typed terms of depth ≤ d per context, memoised.
    memo: HashMap<(Vec<TypeExpr>, usize), Vec<Term>>,
}

impl Enumerator {
    fn judge(&mut self, ctx: &[TypeExpr], t: &Term) -> bool {
        let oracle = derivable(ctx, t);
        let names: Vec<(String, TypeExpr)> = ctx.iter().enumerate().map(|(i, ty)| (format!("v{i}"), ty.clone())).collect();
        let c = names.iter().fold(Context::new(), |c, (n, ty)| c.extend(Name::new(n.as_str()), ty.clone()));
        let checked = type_check(&c, t).ok().map(|tt| tt.ty().clone());
        let agree = match &checked {
            Some(ty) => oracle.len() == 1 && oracle.contains(ty),
            None => oracle.is_empty(),
        };
        if !agree && self.census.failures.len() < 10 {
            self.census.failures.push(format!("{t:?}: checker {checked:?}, oracle {oracle:?}"));
        }
        checked.is_some()
    }

    /// Well-typed terms of depth ≤ d in `ctx`. At the top level and for
    /// d ≤ 2 every raw term is judged; deeper layers draw their children from
    /// well-typed terms only, since an ill-typed child never yields a
    /// well-typed parent under any rule.
    fn typed(&mut self, ctx: &[TypeExpr], d: usize, top: bool) -> Vec<Term> {
        if d == 0 {
            return Vec::new();
        }
        if let Some(v) = self.memo.get(&(ctx.to_vec(), d)) {
            if !top {
                return v.clone();
            }
        }
        let mut acc = self.typed(ctx, d - 1, false);
        let kids = acc.clone();
        let mut under: HashMap<TypeExpr, Vec<Term>> = HashMap::new();
        for (_, dom) in binders().into_iter().chain(ARITIES.map(|k| (Binder::SS, Ty::Index(k)))) {
            if !under.contains_key(&dom) {
                let mut c = ctx.to_vec();
                c.push(dom.clone());
                let v = self.typed(&c, d - 1, false);
                under.insert(dom, v);
            }
        }
        let candidates = layer(ctx.len(), d, &kids, &|dom| under.get(dom).cloned().unwrap_or_default());
        for t in candidates {
            if top && d <= 2 {
                self.census.raw += 1;
            }
            if self.judge(ctx, &t) {
                if top {
                    self.census.well_typed[d - 1] += 1;
                }
                acc.push(t);
            }
        }
        self.memo.insert((ctx.to_vec(), d), acc.clone());
        acc
    }
}

/// Enumerate every well-typed term up to depth 3 in [`enumeration_context`],
/// judging each raw candidate with both the checker and the oracle.
pub fn census() -> Census {
    let mut e = Enumerator { census: Census::default(), memo: HashMap::new() };
    let ctx = enumeration_context();
    for d in 1..=3 {
        e.typed(&ctx, d, true);
    }
    e.census
}
