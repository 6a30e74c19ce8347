//! Mathematical rendering of terms: LaTeX in the listing conventions
//! (colored atoms, bullet substitutions, tuple expansions) and a plain
//! Unicode text form.

use crate::lang::{
    infer, term_sexpr, AppKind, Binder, CompKind, Dim, GContext, GSlot, GTerm, GType, Idx, Name, Note,
    Slot, Subject, Term, TermPath, Ty,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    /// LaTeX; `color` selects the colored listing markup.
    Latex { color: bool },
    /// Unicode text without braces or colors.
    Text,
}

/// The output styles of [`print_term`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrintStyle {
    Sexpr,
    BarredArrow,
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BraceKind {
    Over,
    Under,
}

/// An over- or underbrace around the subterm at `path`. The label is a
/// term in the scope of that subterm and is rendered, never checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Brace {
    pub path: TermPath,
    pub kind: BraceKind,
    pub label: GTerm,
}

/// Print a concrete term in a closed or unknown context.
pub fn print_term(t: &Term, style: PrintStyle) -> String {
    match style {
        PrintStyle::Sexpr => term_sexpr(t),
        PrintStyle::BarredArrow => render(&GContext::new(), &GTerm::from(t), Style::Text, &[]),
        PrintStyle::Latex => render(&GContext::new(), &GTerm::from(t), Style::Latex { color: false }, &[]),
    }
}

/// Render a term whose free variables are described by `ctx`.
pub fn render(ctx: &GContext, t: &GTerm, style: Style, braces: &[Brace]) -> String {
    let mut r = Renderer::new(ctx, style, braces);
    r.value(t)
}

/// Like [`render`], but a written-out sum shows its first summand only,
/// followed by a count of the omitted ones.
pub fn render_elided(ctx: &GContext, t: &GTerm, style: Style, braces: &[Brace]) -> String {
    let mut r = Renderer::new(ctx, style, braces);
    r.elide = true;
    r.value(t)
}

/// The superscript atom for a component position (1-based when literal).
pub fn position_atom(style: Style, i: &Idx) -> String {
    let r = Renderer::new(&GContext::new(), style, &[]);
    r.idx_atom(i)
}

/// The atom for a symbolic summation index such as `k`.
pub fn index_name_atom(style: Style, k: &str) -> String {
    let r = Renderer::new(&GContext::new(), style, &[]);
    r.index_atom(k)
}

#[derive(Debug, Clone)]
struct Entry {
    name: String,
    ty: Option<GType>,
    /// The concrete value of an index variable while a sum is written out.
    value: Option<usize>,
}

struct Renderer<'a> {
    style: Style,
    braces: &'a [Brace],
    env: Vec<Entry>,
    path: Vec<usize>,
    /// Disable braces while rendering labels and note contents.
    quiet: usize,
    elide: bool,
}

fn lit(n: usize) -> String {
    if n < 10 {
        n.to_string()
    } else {
        format!("{{{n}}}")
    }
}

fn is_lam(t: &GTerm) -> bool {
    matches!(t, GTerm::Lam(..))
}

impl<'a> Renderer<'a> {
    fn new(ctx: &GContext, style: Style, braces: &'a [Brace]) -> Self {
        let env = ctx
            .entries()
            .iter()
            .map(|(n, t)| Entry { name: n.to_string(), ty: Some(t.clone()), value: None })
            .collect();
        Renderer { style, braces, env, path: Vec::new(), quiet: 0, elide: false }
    }

    fn latex(&self) -> bool {
        matches!(self.style, Style::Latex { .. })
    }

    // ---- style tokens -------------------------------------------------

    fn paren(&self, s: &str) -> String {
        if self.latex() {
            format!("\\left({s}\\right)")
        } else {
            format!("({s})")
        }
    }

    fn mapsto(&self) -> &'static str {
        if self.latex() {
            "\\mapsto "
        } else {
            " ↦ "
        }
    }

    fn circ(&self) -> &'static str {
        if self.latex() {
            "\\circ "
        } else {
            "∘"
        }
    }

    fn cdot(&self) -> &'static str {
        if self.latex() {
            "\\cdot "
        } else {
            " · "
        }
    }

    fn primed(&self, inner: &str) -> String {
        match self.style {
            Style::Latex { color: true } => format!("{{{inner}}}^{{\\color{{red}}\\mathbf{{'}}}}"),
            Style::Latex { color: false } => format!("{{{inner}}}^{{'}}"),
            Style::Text => format!("{inner}′"),
        }
    }

    fn sup(&self, base: &str, atom: &str) -> String {
        format!("{base}^{atom}")
    }

    fn braced_sup(&self, base: &str, atom: &str) -> String {
        if self.latex() {
            format!("{{{base}}}^{{{atom}}}")
        } else {
            format!("{base}^{atom}")
        }
    }

    fn bullet(&self, atom: &str, value: &str) -> String {
        match self.style {
            Style::Latex { color: true } => format!("\\left[\\bullet^{{{atom}}}:={value}\\right]"),
            Style::Latex { color: false } => format!("[\\bullet^{{{atom}}}:={value}]"),
            Style::Text => format!("[•^{atom}:={value}]"),
        }
    }

    fn underline_pack(&self, s: &str) -> String {
        if self.latex() {
            format!("\\underline{{{s}}}...")
        } else {
            format!("{s}…")
        }
    }

    fn scalar_name(&self, n: &str) -> String {
        match self.style {
            Style::Latex { color: true } => format!("{{\\color{{purple}}\\mathbf{{{n}}}}}"),
            Style::Latex { color: false } => format!("\\mathbf{{{n}}}"),
            Style::Text => n.to_string(),
        }
    }

    fn param_atom(&self, p: &str) -> String {
        match self.style {
            Style::Latex { color: true } => format!("{{\\color{{blue}}\\mathbf{{{p}}}}}"),
            _ => p.to_string(),
        }
    }

    fn index_atom(&self, k: &str) -> String {
        match self.style {
            Style::Latex { color: true } => format!("{{\\color{{green}}{k}}}"),
            _ => k.to_string(),
        }
    }

    fn sum_sign(&self, k: &str) -> String {
        match self.style {
            Style::Latex { color: true } => format!("{{\\color{{green}}\\sum_{k}}}"),
            Style::Latex { color: false } => format!("\\sum_{{{k}}}"),
            Style::Text => format!("Σ_{k} "),
        }
    }

    fn oplus_sign(&self, k: &str) -> String {
        match self.style {
            Style::Latex { color: true } => format!("{{\\color{{green}}\\bigoplus_{k}}}"),
            Style::Latex { color: false } => format!("\\bigoplus_{{{k}}}"),
            Style::Text => format!("⊕_{k} "),
        }
    }

    // ---- environment ----------------------------------------------------

    fn push(&mut self, name: &Name, ty: Option<GType>, value: Option<usize>) {
        self.env.push(Entry { name: name.to_string(), ty, value });
    }

    fn pop(&mut self) {
        self.env.pop();
    }

    fn entry(&self, i: usize) -> Option<&Entry> {
        self.env.len().checked_sub(i + 1).map(|j| &self.env[j])
    }

    fn gctx(&self) -> GContext {
        GContext::from_entries(
            self.env
                .iter()
                .map(|e| (Name::new(e.name.clone()), e.ty.clone().unwrap_or(Ty::Scalar)))
                .collect(),
        )
    }

    fn type_of(&self, t: &GTerm) -> Option<GType> {
        infer(&self.gctx(), t).ok()
    }

    fn binder_type(t: &GTerm) -> Option<(Name, GType)> {
        t.binding_for_child(0)
    }

    // ---- braces ---------------------------------------------------------

    fn decorate(&mut self, s: String) -> String {
        if self.quiet > 0 {
            return s;
        }
        if !self.latex() {
            return s;
        }
        let here = TermPath(self.path.clone());
        let braces: Vec<Brace> = self.braces.iter().filter(|b| b.path == here).cloned().collect();
        let mut out = s;
        for kind in [BraceKind::Over, BraceKind::Under] {
            for b in braces.iter().filter(|b| b.kind == kind) {
                let label = self.label(&b.label);
                out = match kind {
                    BraceKind::Over => format!("\\overbrace{{{out}}}^{{{label}}}"),
                    BraceKind::Under => format!("\\underbrace{{{out}}}_{{{label}}}"),
                };
            }
        }
        out
    }

    fn label(&mut self, t: &GTerm) -> String {
        self.quiet += 1;
        let saved = std::mem::take(&mut self.path);
        let s = self.value(t);
        self.path = saved;
        self.quiet -= 1;
        s
    }

    /// Render child `i` of the current node, optionally parenthesised,
    /// then apply any braces registered at its path.
    fn child(&mut self, i: usize, t: &GTerm, wrap: bool, mode: Mode) -> String {
        self.path.push(i);
        let s = match mode {
            Mode::Value => self.value(t),
            Mode::List => self.list(t),
            Mode::Component => self.component_value(t),
        };
        let s = if wrap { self.paren(&s) } else { s };
        let s = self.decorate(s);
        self.path.pop();
        s
    }

    fn bound_child(&mut self, parent: &GTerm, t: &GTerm, value: Option<usize>, mode: Mode) -> String {
        let (name, ty) = Self::binder_type(parent).expect("binder");
        self.push(&name, Some(ty), value);
        let s = self.child(0, t, false, mode);
        self.pop();
        s
    }

    // ---- atoms ----------------------------------------------------------

    fn idx_atom(&self, i: &Idx) -> String {
        match i {
            Idx::Lit(p) => lit(p + 1),
            Idx::Param(p) => self.param_atom(p),
        }
    }

    fn term_atom(&mut self, t: &GTerm) -> String {
        if let GTerm::Var(_, i) = t {
            if let Some(e) = self.entry(*i) {
                return match e.value {
                    Some(c) => lit(c + 1),
                    None => self.index_atom(&e.name.clone()),
                };
            }
        }
        let s = self.value(t);
        format!("{{{s}}}")
    }

    fn slot_atom(&mut self, s: &GSlot) -> String {
        match s {
            Slot::At(i) => self.idx_atom(i),
            Slot::By(t) => self.term_atom(t),
        }
    }

    /// The literal position a slot denotes, when it is known.
    fn slot_value(&self, s: &GSlot) -> Option<usize> {
        match s {
            Slot::At(Idx::Lit(p)) => Some(*p),
            Slot::At(Idx::Param(_)) => None,
            Slot::By(t) => match t.peel() {
                GTerm::Var(_, i) => self.entry(*i).and_then(|e| e.value),
                _ => None,
            },
        }
    }

    fn var_name(&self, i: usize) -> String {
        self.entry(i).map(|e| e.name.clone()).unwrap_or_else(|| format!("#{i}"))
    }

    // ---- terms ----------------------------------------------------------

    fn value(&mut self, t: &GTerm) -> String {
        match t {
            GTerm::Var(_, i) => {
                let e = self.entry(*i).cloned();
                match e.as_ref().and_then(|e| e.ty.clone()) {
                    Some(Ty::Scalar) => self.scalar_name(&e.unwrap().name),
                    Some(Ty::Index(_)) => self.term_atom(t),
                    Some(Ty::Tuple(_)) => {
                        let l = self.list(t);
                        self.paren(&l)
                    }
                    _ => self.var_name(*i),
                }
            }
            GTerm::Lam(b, _, body) => {
                let head = match b {
                    Binder::TT(_) | Binder::TS(_) => {
                        let bl = self.binder_list(t);
                        format!("{}{}", self.paren(&bl), self.mapsto())
                    }
                    Binder::ST | Binder::SS => {
                        let (n, _) = Self::binder_type(t).unwrap();
                        format!("{}{}", self.scalar_name(n.as_str()), self.mapsto())
                    }
                };
                let body_s = self.bound_child(t, body, None, Mode::Value);
                format!("{head}{body_s}")
            }
            GTerm::Sum(k, n, body) => match k {
                Dim::Lit(kk) => {
                    let shown = if self.elide { (*kk).min(1) } else { *kk };
                    let parts: Vec<String> = (0..shown)
                        .map(|c| self.bound_child(t, body, Some(c), Mode::Value))
                        .collect();
                    let mut out = parts.join(if self.latex() { "+" } else { " + " });
                    let rest = kk - shown;
                    if rest > 0 {
                        let what = if rest == 1 { "one more term".to_string() } else { format!("{rest} more terms") };
                        if self.latex() {
                            out.push_str(&format!("+\\;\\text{{{what}}}"));
                        } else {
                            out.push_str(&format!(" + {what}"));
                        }
                    }
                    out
                }
                Dim::Var(_) => {
                    let sign = self.sum_sign(n.as_str());
                    let body_s = self.bound_child(t, body, None, Mode::Value);
                    format!("{sign}{body_s}")
                }
            },
            GTerm::App(AppKind::A1N | AppKind::AMN, ..) => {
                let l = self.list(t);
                self.paren(&l)
            }
            GTerm::App(kind, h, a) => {
                let head = self.child(0, h, is_lam(h), Mode::Value);
                let mode = if *kind == AppKind::AM1 { Mode::List } else { Mode::Value };
                let arg = self.child(1, a, false, mode);
                format!("{head}{}", self.paren(&arg))
            }
            GTerm::Subst(Subject::K, ..) | GTerm::Expand(_) | GTerm::ExpandSubst(..) => {
                let l = self.list(t);
                self.paren(&l)
            }
            GTerm::Subst(_, f, s, v) => {
                let fs = self.child(0, f, is_lam(f), Mode::Value);
                let atom = self.slot_atom(s);
                let vi = if matches!(s, Slot::By(_)) { 2 } else { 1 };
                let vs = self.child(vi, v, false, Mode::Value);
                format!("{fs}{}", self.bullet(&atom, &vs))
            }
            GTerm::Proj(Subject::K, x, s) => {
                let base = match x.as_ref() {
                    GTerm::Var(_, i) => self.var_name(*i),
                    _ => {
                        let l = self.child(0, x, false, Mode::List);
                        self.paren(&l)
                    }
                };
                let atom = self.slot_atom(s);
                match s {
                    Slot::At(_) => self.braced_sup(&base, &atom),
                    Slot::By(_) => self.sup(&base, &atom),
                }
            }
            GTerm::Proj(_, f, s) => {
                let atom = self.slot_atom(s);
                self.function_component(f, &atom)
            }
            GTerm::Comp(_, a, b) => {
                let l = self.child(0, a, is_lam(a), Mode::Value);
                let r = self.child(1, b, is_lam(b), Mode::Value);
                self.paren(&format!("{l}{}{r}", self.circ()))
            }
            GTerm::Prime(a) => {
                let inner = self.child(0, a, is_lam(a), Mode::Value);
                self.primed(&inner)
            }
            GTerm::Mul(a, b) => {
                let wrap_left = match a.as_ref() {
                    GTerm::App(AppKind::A11, h, _) => matches!(h.as_ref(), GTerm::Prime(_) | GTerm::Comp(..)),
                    GTerm::Sum(..) => true,
                    _ => false,
                };
                let l = self.child(0, a, wrap_left, Mode::Value);
                let r = self.child(1, b, matches!(b.as_ref(), GTerm::Sum(..)), Mode::Value);
                format!("{l}{}{r}", self.cdot())
            }
            GTerm::Note(note, inner) => self.note(note, inner),
        }
    }

    /// `f^a`, or `(f^a ∘ g)` when `f` is a composition.
    fn function_component(&mut self, f: &GTerm, atom: &str) -> String {
        match f {
            GTerm::Comp(CompKind::CMKN | CompKind::CM1N, a, b) => {
                self.path.push(0);
                let l = self.child(0, a, is_lam(a), Mode::Value);
                let r = self.child(1, b, is_lam(b), Mode::Value);
                self.path.pop();
                let head = self.sup(&l, atom);
                self.paren(&format!("{head}{}{r}", self.circ()))
            }
            _ => {
                let base = self.child(0, f, is_lam(f), Mode::Value);
                self.sup(&base, atom)
            }
        }
    }

    fn binder_list(&self, lam: &GTerm) -> String {
        let (n, ty) = Self::binder_type(lam).unwrap();
        match ty {
            Ty::Tuple(Dim::Lit(k)) => (0..k)
                .map(|c| self.sup(n.as_str(), &lit(c + 1)))
                .collect::<Vec<_>>()
                .join(","),
            _ => self.underline_pack(n.as_str()),
        }
    }

    // ---- tuples -----------------------------------------------------------

    /// A tuple-valued term written as the contents of an argument list.
    fn list(&mut self, t: &GTerm) -> String {
        if let Some(Ty::Tuple(Dim::Lit(k))) = self.type_of(t) {
            if let Some(parts) = self.components(t, k) {
                return parts.join(",");
            }
        }
        self.generic_list(t)
    }

    fn generic_list(&mut self, t: &GTerm) -> String {
        match t {
            GTerm::Var(_, i) => {
                let n = self.var_name(*i);
                self.underline_pack(&n)
            }
            GTerm::App(AppKind::AMN, h, x) => {
                let hs = self.child(0, h, is_lam(h), Mode::Value);
                let xs = self.child(1, x, false, Mode::List);
                let inner = format!("{}{}", self.underline_head(&hs), self.paren(&xs));
                if self.latex() {
                    format!("{inner}...")
                } else {
                    format!("{inner}…")
                }
            }
            GTerm::App(AppKind::A1N, h, s) => {
                let hs = self.child(0, h, is_lam(h), Mode::Value);
                let ss = self.child(1, s, false, Mode::Value);
                let inner = format!("{}{}", self.underline_head(&hs), self.paren(&ss));
                if self.latex() {
                    format!("{inner}...")
                } else {
                    format!("{inner}…")
                }
            }
            GTerm::Subst(Subject::K, x, s, v) | GTerm::ExpandSubst(x, s, v) => {
                let xs = self.child(0, x, false, Mode::List);
                let atom = self.slot_atom(s);
                let vi = if matches!(s, Slot::By(_)) { 2 } else { 1 };
                let vs = self.child(vi, v, false, Mode::Value);
                format!("{xs}{}", self.bullet(&atom, &vs))
            }
            GTerm::Expand(x) | GTerm::Note(_, x) => self.child(0, x, false, Mode::List),
            other => {
                let s = self.value(other);
                let p = self.paren(&s);
                self.underline_pack(&p)
            }
        }
    }

    fn underline_head(&self, h: &str) -> String {
        if self.latex() {
            format!("\\underline{{{h}}}")
        } else {
            h.to_string()
        }
    }

    /// The `k` components of a tuple, or `None` when some substituted
    /// position is not known.
    fn components(&mut self, t: &GTerm, k: usize) -> Option<Vec<String>> {
        (0..k).map(|c| self.component(t, c)).collect()
    }

    fn component(&mut self, t: &GTerm, c: usize) -> Option<String> {
        Some(match t {
            GTerm::Var(_, i) => {
                let n = self.var_name(*i);
                self.sup(&n, &lit(c + 1))
            }
            GTerm::App(AppKind::AMN, h, x) => {
                let atom = lit(c + 1);
                let hs = self.function_component(h, &atom);
                let xs = self.child(1, x, false, Mode::List);
                format!("{hs}{}", self.paren(&xs))
            }
            GTerm::App(AppKind::A1N, h, s) => {
                let atom = lit(c + 1);
                let hs = self.function_component(h, &atom);
                let ss = self.child(1, s, false, Mode::Value);
                format!("{hs}{}", self.paren(&ss))
            }
            GTerm::Subst(Subject::K, x, s, v) | GTerm::ExpandSubst(x, s, v) => {
                let p = self.slot_value(s)?;
                if p == c {
                    let vi = if matches!(s, Slot::By(_)) { 2 } else { 1 };
                    self.child(vi, v, false, Mode::Component)
                } else {
                    self.path.push(0);
                    let r = self.component(x, c);
                    self.path.pop();
                    r?
                }
            }
            GTerm::Expand(x) | GTerm::Note(_, x) => {
                self.path.push(0);
                let r = self.component(x, c);
                self.path.pop();
                r?
            }
            other => {
                let s = self.value(other);
                let p = self.paren(&s);
                self.braced_sup(&p, &lit(c + 1))
            }
        })
    }

    /// A scalar written as one entry of a component list; a literal
    /// projection of a variable drops its grouping braces there.
    fn component_value(&mut self, t: &GTerm) -> String {
        if let GTerm::Proj(Subject::K, x, Slot::At(Idx::Lit(p))) = t {
            if let GTerm::Var(_, i) = x.as_ref() {
                let n = self.var_name(*i);
                return self.sup(&n, &lit(p + 1));
            }
        }
        self.value(t)
    }

    // ---- notes ----------------------------------------------------------

    fn quietly<T>(&mut self, f: impl FnOnce(&mut Self) -> T) -> T {
        self.quiet += 1;
        let r = f(self);
        self.quiet -= 1;
        r
    }

    fn note(&mut self, note: &Note, inner: &GTerm) -> String {
        let rendered = match note {
            Note::Abbrev { symbol, sup } => {
                let atom = sup.as_ref().map(|s| self.term_atom(s));
                Some(match (self.style, atom) {
                    (Style::Latex { color: true }, Some(a)) => format!("{{\\color{{green}}{symbol}^{a}}}"),
                    (Style::Latex { color: true }, None) => format!("{{\\color{{green}}{symbol}}}"),
                    (Style::Latex { color: false }, Some(a)) => format!("{symbol}^{{{a}}}"),
                    (Style::Text, Some(a)) => format!("{symbol}^{a}"),
                    (_, None) => symbol.clone(),
                })
            }
            Note::Partial { var } => self.quietly(|r| r.partial(inner, var.as_str())),
            Note::Compose => self.quietly(|r| r.compose(inner)),
            Note::Tensor => self.quietly(|r| r.tensor(inner, false)),
            Note::TensorPre => self.quietly(|r| r.tensor(inner, true)),
            Note::DirectSum => self.quietly(|r| r.direct_sum(inner)),
        };
        match rendered {
            Some(s) => s,
            None => self.child(0, inner, false, Mode::Value),
        }
    }

    /// Run `f` with the binders of the given lambdas in scope.
    fn under<T>(&mut self, binders: &[&GTerm], f: impl FnOnce(&mut Self) -> T) -> T {
        for b in binders {
            let (n, ty) = Self::binder_type(b).unwrap();
            self.push(&n, Some(ty), None);
        }
        let r = f(self);
        for _ in binders {
            self.pop();
        }
        r
    }

    fn partial(&mut self, t: &GTerm, var: &str) -> Option<String> {
        let (h, _, slot) = crate::deriv::match_partial(t)?;
        let num = self.value(&h);
        let den_atom = self.slot_atom(&slot);
        let den = match slot {
            Slot::At(_) => self.braced_sup(var, &den_atom),
            Slot::By(_) => self.sup(var, &den_atom),
        };
        Some(if self.latex() {
            format!("\\frac{{\\partial {num}}}{{\\partial {den}}}")
        } else {
            format!("∂{num}/∂{den}")
        })
    }

    /// `(x…) ↦ D(g(x…)…)` gives `(D, g)`, rendered under the binder.
    fn compose_parts(&mut self, t: &GTerm) -> Option<(String, String)> {
        let GTerm::Lam(_, _, body) = t else { return None };
        let GTerm::App(AppKind::AM1, d, arg) = body.as_ref() else { return None };
        let GTerm::App(AppKind::AMN, g, _) = arg.as_ref() else { return None };
        Some(self.under(&[t], |r| (r.value(d), r.value(g))))
    }

    fn compose(&mut self, t: &GTerm) -> Option<String> {
        let (d, g) = self.compose_parts(t)?;
        Some(self.paren(&format!("{d}{}{g}", self.circ())))
    }

    fn tensor(&mut self, t: &GTerm, pre: bool) -> Option<String> {
        let GTerm::Lam(_, _, body) = t else { return None };
        let GTerm::Mul(a, b) = body.as_ref() else { return None };
        let GTerm::App(AppKind::AM1, l, _) = a.as_ref() else { return None };
        let GTerm::App(AppKind::AM1, r, _) = b.as_ref() else { return None };
        let rs = self.under(&[t], |me| me.value(r));
        if pre {
            let GTerm::Note(Note::Compose, c) = l.as_ref() else { return None };
            let (d, g) = self.under(&[t], |me| me.compose_parts(c))?;
            Some(if self.latex() {
                self.paren(&format!("{d}\\quad\\otimes^{{({g}\\,\\times\\,\\text{{id}})}}\\;{rs}"))
            } else {
                format!("({d} ⊗^({g}×id) {rs})")
            })
        } else {
            let ls = self.under(&[t], |me| me.value(l));
            Some(if self.latex() {
                self.paren(&format!("{ls}\\otimes{rs}"))
            } else {
                format!("({ls} ⊗ {rs})")
            })
        }
    }

    fn direct_sum(&mut self, t: &GTerm) -> Option<String> {
        let GTerm::Lam(_, _, body) = t else { return None };
        let GTerm::Sum(k, n, sb) = body.as_ref() else { return None };
        let GTerm::App(AppKind::AM1, h, _) = sb.as_ref() else { return None };
        let (kn, kty) = body.binding_for_child(0).unwrap();
        match k {
            Dim::Lit(kk) => {
                let parts: Vec<String> = (0..*kk)
                    .map(|c| {
                        self.under(&[t], |me| {
                            me.push(&kn, Some(kty.clone()), Some(c));
                            let s = me.value(h);
                            me.pop();
                            s
                        })
                    })
                    .collect();
                Some(parts.join(if self.latex() { "\\oplus" } else { " ⊕ " }))
            }
            Dim::Var(_) => {
                let sign = self.oplus_sign(n.as_str());
                let hs = self.under(&[t], |me| {
                    me.push(&kn, Some(kty.clone()), None);
                    let s = me.value(h);
                    me.pop();
                    s
                });
                Some(format!("{sign}{hs}"))
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Mode {
    Value,
    List,
    Component,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse_generic, parse_term_file, Context};

    #[test]
    fn identity_barred_arrow() {
        let t = Term::lam(Binder::SS, "z", Term::var("z", 0));
        assert_eq!(print_term(&t, PrintStyle::BarredArrow), "z ↦ z");
        assert_eq!(print_term(&t, PrintStyle::Sexpr), "(lam-ss z (var z 0))");
    }

    #[test]
    fn substituted_expansion_latex() {
        let g = parse_generic(
            "(lam-ts (arity-var m) x (app-11 (prime (lam-ss z (app-m1 (var h 2) (subst-k (var x 1) (index-var i) (var z 0))))) (proj-k (var x 0) (index-var i))))",
        )
        .unwrap();
        let ctx = GContext::from_entries(vec![(Name::new("h"), Ty::FunM1(Dim::Var("m".into())))]);
        let s = render(&ctx, &g, Style::Latex { color: false }, &[]);
        assert!(s.contains("[\\bullet^{i}:=\\mathbf{z}]"), "{s}");
    }

    #[test]
    fn concrete_tuple_lists() {
        let (ctx, g) = parse_term_file(
            "(decl g (funmn 2 2)) (lam-ts 2 x (app-m1 (proj-mn (var g 1) 0) (subst-k (var x 0) 0 (proj-k (var x 0) 1))))",
            false,
        )
        .unwrap();
        let s = render(&ctx, &g, Style::Text, &[]);
        assert_eq!(s, "(x^1,x^2) ↦ g^1(x^2,x^2)");
    }

    #[test]
    fn print_term_is_total_on_free_variables() {
        let t = Term::app(AppKind::AMN, Term::var("T", 1), Term::var("U", 0));
        let _ = type_check_free(&t);
        assert!(!print_term(&t, PrintStyle::Latex).is_empty());
    }

    fn type_check_free(t: &Term) -> bool {
        crate::lang::type_check(&Context::new(), t).is_ok()
    }
}
