//! The scripted chain-rule derivation for `∂(f^j ∘ g)/∂x^i`.

use thiserror::Error;

use super::rules::{apply_rule, RewriteError, Rule, RuleTag};
use crate::deriv::partial_term;
use crate::lang::{
    infer, AppKind, CompKind, Dim, GContext, GSlot, GTerm, GType, Idx, Name, Note, Slot, Subject, TermPath, Ty,
    TypeError,
};
use crate::render::{Brace, BraceKind};

/// Arities and positions of a chain-rule derivation for
/// `g : FunMN m k` and `f : FunMN k n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainRuleSpec {
    pub m: Dim,
    pub n: Dim,
    pub k: Dim,
    pub j: Idx,
    pub i: Idx,
    /// Continue to the point-free ⊕/⊗ form.
    pub pointfree: bool,
    /// Append the two annotation-only Jacobian lines (needs `pointfree`).
    pub tensor_annotation: bool,
}

impl ChainRuleSpec {
    /// Fully symbolic arities and positions.
    pub fn general() -> Self {
        ChainRuleSpec {
            m: Dim::Var("m".into()),
            n: Dim::Var("n".into()),
            k: Dim::Var("k".into()),
            j: Idx::Param("j".into()),
            i: Idx::Param("i".into()),
            pointfree: false,
            tensor_annotation: false,
        }
    }

    /// The context `f : FunMN k n, g : FunMN m k` (so `g` is index 0).
    pub fn context(&self) -> GContext {
        GContext::from_entries(vec![
            (Name::new("f"), Ty::FunMN(self.k.clone(), self.n.clone())),
            (Name::new("g"), Ty::FunMN(self.m.clone(), self.k.clone())),
        ])
    }
}

/// One displayed step: the rewrites that produce it and its overlays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub tag: RuleTag,
    pub rewrites: Vec<(Rule, TermPath)>,
    pub result: GTerm,
    pub braces: Vec<Brace>,
}

/// Annotation-only lines that make no semantic claim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorAnnotation {
    pub j: Idx,
    pub i: Idx,
    pub k: Dim,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTrace {
    pub ctx: GContext,
    pub start: GTerm,
    pub steps: Vec<TraceStep>,
    pub annotation: Option<TensorAnnotation>,
}

impl DerivationTrace {
    /// A trace with no steps yet.
    pub fn new(ctx: GContext, start: GTerm) -> Self {
        DerivationTrace { ctx, start, steps: Vec::new(), annotation: None }
    }

    pub fn last(&self) -> &GTerm {
        self.steps.last().map_or(&self.start, |s| &s.result)
    }

    /// Apply `rewrites` in order to the current end of the trace and record
    /// the result as one step.
    pub fn push(&mut self, tag: RuleTag, rewrites: Vec<(Rule, TermPath)>, braces: Vec<Brace>) -> Result<(), RewriteError> {
        let mut t = self.last().clone();
        for (rule, at) in &rewrites {
            t = apply_rule(&self.ctx, &t, rule, at)?;
        }
        self.steps.push(TraceStep { tag, rewrites, result: t, braces });
        Ok(())
    }

    /// Re-apply every recorded rewrite from the start; returns the
    /// intermediate terms.
    pub fn replay(&self) -> Result<Vec<GTerm>, RewriteError> {
        let mut t = self.start.clone();
        let mut out = vec![t.clone()];
        for s in &self.steps {
            for (rule, at) in &s.rewrites {
                t = apply_rule(&self.ctx, &t, rule, at)?;
            }
            out.push(t.clone());
        }
        Ok(out)
    }

    /// The type shared by every line.
    pub fn ty(&self) -> Result<GType, TypeError> {
        infer(&self.ctx, &self.start)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeriveError {
    #[error("f and g do not compose: {0}")]
    TypeMismatch(TypeError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

fn p(v: &[usize]) -> TermPath {
    TermPath(v.to_vec())
}

fn over(path: &[usize], label: GTerm) -> Brace {
    Brace { path: p(path), kind: BraceKind::Over, label }
}

fn under(path: &[usize], label: GTerm) -> Brace {
    Brace { path: p(path), kind: BraceKind::Under, label }
}

fn abbrev(symbol: &str, inner: GTerm) -> GTerm {
    GTerm::note(Note::Abbrev { symbol: symbol.into(), sup: Some(Box::new(GTerm::var("k", 0))) }, inner)
}

fn abbrev_note(symbol: &str) -> Note {
    Note::Abbrev { symbol: symbol.into(), sup: Some(Box::new(GTerm::var("k", 0))) }
}

/// Build the derivation. Every line is produced by [`apply_rule`] and has
/// the type `FunM1 m` of the start.
pub fn derive_chain_rule(spec: &ChainRuleSpec) -> Result<DerivationTrace, DeriveError> {
    let ctx = spec.context();
    let fg = GTerm::comp(CompKind::CMKN, GTerm::var("f", 1), GTerm::var("g", 0));
    infer(&ctx, &fg).map_err(DeriveError::TypeMismatch)?;
    let big_f = GTerm::proj(Subject::MN, fg, Slot::At(spec.j.clone()));
    let slot_i: GSlot = Slot::At(spec.i.clone());
    let body = partial_term(&big_f, spec.m.clone(), &slot_i, "x");
    let start = GTerm::note(Note::Partial { var: Name::new("x") }, body);
    infer(&ctx, &start).map_err(DeriveError::TypeMismatch)?;
    let mut tr = DerivationTrace::new(ctx, start);

    // Terms in the scope under λx and Σk: k = 0, x = 1, g = 2, f = 3.
    let k_var = GTerm::var("k", 0);
    let x_var = GTerm::var("x", 1);
    let g_k = GTerm::proj(Subject::MN, GTerm::var("g", 2), Slot::By(Box::new(k_var.clone())));
    let f_j = GTerm::proj(Subject::MN, GTerm::var("f", 3), Slot::At(spec.j.clone()));
    let partial_f = GTerm::note(
        Note::Partial { var: Name::new("y") },
        partial_term(&f_j, spec.k.clone(), &Slot::By(Box::new(k_var.clone())), "y"),
    );
    let partial_g = GTerm::note(
        Note::Partial { var: Name::new("x") },
        partial_term(&g_k, spec.m.clone(), &slot_i, "x"),
    );
    let partial_f_at_g = GTerm::app(AppKind::A11, partial_f.clone(), GTerm::app(AppKind::AM1, g_k.clone(), x_var.clone()));
    let partial_g_at_x = GTerm::app(AppKind::AM1, partial_g.clone(), x_var.clone());

    // A2: unfold the partial-derivative notation.
    tr.push(RuleTag::Def, vec![(Rule::Unfold, p(&[]))], vec![])?;
    // A3: the projected composition applied to the substituted tuple.
    tr.push(RuleTag::Comp, vec![(Rule::CompUnfold, p(&[0, 0, 0, 0]))], vec![])?;
    // A4: one summand per component of g.
    tr.push(RuleTag::LinPrime, vec![(Rule::LinPrime, p(&[0]))], vec![])?;
    // A5: split each summand's function into a ∘ b.
    let split = Rule::CompSplit { hole: p(&[0, 1, 2]) };
    let a5 = apply_rule(&tr.ctx, tr.last(), &split, &p(&[0, 0, 0, 0]))?;
    let a_fun = a5.at(&p(&[0, 0, 0, 0, 0])).unwrap().clone();
    let b_fun = a5.at(&p(&[0, 0, 0, 0, 1])).unwrap().clone();
    tr.push(
        RuleTag::Comp,
        vec![(split, p(&[0, 0, 0, 0]))],
        vec![
            over(&[0, 0, 0, 0, 0], abbrev("a", a_fun.clone())),
            over(&[0, 0, 0, 0, 1], abbrev("b", b_fun.clone())),
        ],
    )?;
    // A6: name them a^k and b^k.
    tr.push(
        RuleTag::Def,
        vec![
            (Rule::Fold(abbrev_note("a")), p(&[0, 0, 0, 0, 0])),
            (Rule::Fold(abbrev_note("b")), p(&[0, 0, 0, 0, 1])),
        ],
        vec![],
    )?;
    // A7: univariate chain rule.
    tr.push(RuleTag::ChainPrime, vec![(Rule::ChainPrime, p(&[0, 0]))], vec![])?;
    // A8: unfold the names again and read off the two factors.
    let s_i = GTerm::proj(Subject::K, x_var.clone(), slot_i.clone());
    tr.push(
        RuleTag::Def,
        vec![
            (Rule::Unfold, p(&[0, 0, 0, 0, 0, 0])),
            (Rule::Unfold, p(&[0, 0, 0, 0, 1])),
            (Rule::Unfold, p(&[0, 0, 1, 0, 0])),
        ],
        vec![
            over(&[0, 0, 0, 0, 0], GTerm::prime(abbrev("a", a_fun))),
            over(&[0, 0, 0, 0, 1], abbrev("b", b_fun.clone())),
            under(&[0, 0, 0], partial_f_at_g.clone()),
            over(&[0, 0, 1], GTerm::app(AppKind::A11, GTerm::prime(abbrev("b", b_fun)), s_i)),
            under(&[0, 0, 1], partial_g_at_x),
        ],
    )?;
    // A9: abstract x out of the right factor.
    tr.push(
        RuleTag::Beta,
        vec![(Rule::BetaExpand { target: x_var.clone(), name: "y".into() }, p(&[0, 0, 1]))],
        vec![under(&[0, 0, 1, 0], partial_g)],
    )?;
    // A10: the right factor is ∂g^k/∂x^i.
    tr.push(
        RuleTag::Def,
        vec![(Rule::Fold(Note::Partial { var: Name::new("x") }), p(&[0, 0, 1, 0]))],
        vec![under(&[0, 0, 0], partial_f_at_g.clone())],
    )?;
    // A11: evaluate the inner function at x^i.
    tr.push(
        RuleTag::Comp,
        vec![
            (Rule::CompUnfold, p(&[0, 0, 0])),
            (Rule::Beta, p(&[0, 0, 0, 1])),
            (Rule::SubstIdentity, p(&[0, 0, 0, 1, 1])),
        ],
        vec![under(&[0, 0, 0], partial_f_at_g)],
    )?;
    // A12: abstract g(x…)… out of the left factor.
    let g_x = GTerm::app(AppKind::AMN, GTerm::var("g", 2), x_var.clone());
    tr.push(
        RuleTag::Beta,
        vec![(Rule::BetaExpand { target: g_x, name: "y".into() }, p(&[0, 0, 0]))],
        vec![under(&[0, 0, 0, 0], partial_f)],
    )?;
    // A13: the left factor is ∂f^j/∂y^k at g(x…)….
    tr.push(
        RuleTag::Def,
        vec![(Rule::Fold(Note::Partial { var: Name::new("y") }), p(&[0, 0, 0, 0]))],
        vec![],
    )?;

    if spec.pointfree {
        // A14: (∂f^j/∂y^k ∘ g)(x…).
        tr.push(RuleTag::Comp, vec![(Rule::CompAbstract { name: "x".into() }, p(&[0, 0, 0]))], vec![])?;
        // A15: the product of two functions of x… as ⊗.
        tr.push(RuleTag::Def, vec![(Rule::TensorIntro { name: "x".into() }, p(&[0, 0]))], vec![])?;
        // A16: move the precomposition with g onto the operator.
        tr.push(RuleTag::Def, vec![(Rule::Relabel(Note::TensorPre), p(&[0, 0, 0]))], vec![])?;
        // A17: the sum over k of functions applied to x… as ⊕.
        tr.push(RuleTag::Def, vec![(Rule::Fold(Note::DirectSum), p(&[]))], vec![])?;
        if spec.tensor_annotation {
            tr.annotation = Some(TensorAnnotation { j: spec.j.clone(), i: spec.i.clone(), k: spec.k.clone() });
        }
    }
    Ok(tr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn general_trace_tags() {
        let tr = derive_chain_rule(&ChainRuleSpec::general()).unwrap();
        let tags: Vec<RuleTag> = tr.steps.iter().map(|s| s.tag).collect();
        use RuleTag::*;
        assert_eq!(tags, vec![Def, Comp, LinPrime, Comp, Def, ChainPrime, Def, Beta, Def, Comp, Beta, Def]);
    }

    #[test]
    fn every_line_keeps_the_type() {
        let mut spec = ChainRuleSpec::general();
        spec.pointfree = true;
        let tr = derive_chain_rule(&spec).unwrap();
        let ty = tr.ty().unwrap();
        assert_eq!(ty, Ty::FunM1(Dim::Var("m".into())));
        for s in &tr.steps {
            assert_eq!(infer(&tr.ctx, &s.result).unwrap(), ty);
        }
        let replayed = tr.replay().unwrap();
        for (a, b) in replayed.iter().skip(1).zip(&tr.steps) {
            assert_eq!(a, &b.result);
        }
    }
}
