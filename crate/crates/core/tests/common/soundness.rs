//! A random rewrite walk: every successful rule application at every
//! position is checked by exact evaluation in a random polynomial environment.

#![allow(dead_code)]

use std::collections::BTreeMap;

use jacobiform::gen::{self, Rng64, SeedableRng, TermGen};
use jacobiform::interp::{eval_generic, Environment, InterpError};
use jacobiform::lang::{infer, GContext, GTerm, Note, TermPath, Ty};
use jacobiform::rewrite::{apply_rule, Rule, RuleTag};
use rand::seq::SliceRandom;

/// Verified applications required of every rule tag.
pub const TRIALS_PER_TAG: usize = 100;

/// Largest degree of environment polynomials.
pub const ENV_DEGREE: u32 = 3;

fn paths(t: &GTerm, here: TermPath, out: &mut Vec<TermPath>) {
    for (i, c) in t.children().into_iter().enumerate() {
        paths(c, here.child(i), out);
    }
    out.push(here);
}

/// Subterm paths of `t` (relative to `t`) that cross exactly `binders` binders.
fn paths_under(t: &GTerm, binders: usize) -> Vec<TermPath> {
    let mut all = Vec::new();
    paths(t, TermPath::root(), &mut all);
    all.into_iter().filter(|p| t.binders_above(p) == Some(binders)).collect()
}

fn candidates(rng: &mut Rng64, ctx: &GContext, sub: &GTerm) -> Vec<Rule> {
    let mut rules = vec![
        Rule::Beta,
        Rule::Eta,
        Rule::EtaExpand { name: "w".into() },
        Rule::Alpha { name: "r".into() },
        Rule::CompUnfold,
        Rule::CompFold,
        Rule::CompJoin,
        Rule::CompAbstract { name: "x".into() },
        Rule::MExpand,
        Rule::MCollapse,
        Rule::SubstIdentity,
        Rule::Fold(Note::Abbrev { symbol: "A".into(), sup: None }),
        Rule::Fold(Note::Compose),
        Rule::Fold(Note::Tensor),
        Rule::Fold(Note::DirectSum),
        Rule::Unfold,
        Rule::TensorIntro { name: "x".into() },
    ];
    let targets: Vec<TermPath> = paths_under(sub, 0)
        .into_iter()
        .filter(|p| {
            let t = sub.at(p).unwrap();
            matches!(infer(ctx, t), Ok(Ty::Scalar | Ty::Tuple(_)))
        })
        .collect();
    if let Some(p) = targets.choose(rng) {
        rules.push(Rule::BetaExpand { target: sub.at(p).unwrap().clone(), name: "v".into() });
    }
    if let Some(hole) = paths_under(sub, 1).choose(rng) {
        rules.push(Rule::CompSplit { hole: hole.clone() });
    }
    rules
}

/// `Some(equal)` when both sides evaluate, `None` when a resource limit is hit.
pub fn same_value(ctx: &GContext, env: &Environment, a: &GTerm, b: &GTerm) -> Result<Option<bool>, String> {
    match (eval_generic(ctx, env, a), eval_generic(ctx, env, b)) {
        (Ok(x), Ok(y)) => Ok(Some(x == y)),
        (Err(InterpError::ResourceLimit(_)), _) | (_, Err(InterpError::ResourceLimit(_))) => Ok(None),
        (Err(e), _) | (_, Err(e)) => Err(format!("evaluation failed: {e}")),
    }
}

/// The rule tags whose applications the walk must verify.
pub const TAGS: [RuleTag; 6] = [RuleTag::Beta, RuleTag::Eta, RuleTag::Alpha, RuleTag::Comp, RuleTag::MExpand, RuleTag::Def];

#[derive(Debug, Clone, Default)]
pub struct WalkReport {
    /// Applications checked per rule tag.
    pub verified: BTreeMap<&'static str, usize>,
    pub failures: Vec<String>,
}

impl WalkReport {
    pub fn count(&self, tag: RuleTag) -> usize {
        self.verified.get(tag.name()).copied().unwrap_or(0)
    }

    pub fn complete(&self) -> bool {
        TAGS.iter().all(|&t| self.count(t) >= TRIALS_PER_TAG)
    }
}

/// Walk random terms until every tag in [`TAGS`] has [`TRIALS_PER_TAG`]
/// verified applications or the round budget runs out.
pub fn rewrite_walk(seed: u64) -> WalkReport {
    let mut rng = Rng64::seed_from_u64(seed);
    let ctx = gen::rich_context(2);
    let mut report = WalkReport::default();
    for _round in 0..400 {
        if report.complete() {
            break;
        }
        let env = gen::environment(&mut rng, &ctx, ENV_DEGREE);
        let ty = TermGen { rng: &mut rng, max_arity: 2 }.ty();
        let mut t = TermGen { rng: &mut rng, max_arity: 2 }.term(&ctx, &ty, 4);
        for _step in 0..5 {
            let mut all = Vec::new();
            paths(&t, TermPath::root(), &mut all);
            let mut applied = Vec::new();
            for at in &all {
                let local = t.context_at(&ctx, at).unwrap();
                let sub = t.at(at).unwrap().clone();
                for rule in candidates(&mut rng, &local, &sub) {
                    let Ok(after) = apply_rule(&ctx, &t, &rule, at) else { continue };
                    match same_value(&ctx, &env, &t, &after) {
                        Ok(Some(true)) => *report.verified.entry(rule.tag().name()).or_default() += 1,
                        Ok(Some(false)) => report.failures.push(format!("{} changed the value at {at} of {t:?}", rule.name())),
                        Ok(None) => {}
                        Err(e) => report.failures.push(format!("{} at {at}: {e}", rule.name())),
                    }
                    applied.push(after);
                }
            }
            match applied.choose(&mut rng) {
                Some(next) if next.size() < 400 => t = next.clone(),
                _ => break,
            }
        }
    }
    report
}
