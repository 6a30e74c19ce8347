//! Exact checks of the two assumed equalities of the chain-rule derivation,
//! lin′ and chain′, and of the resulting local chain rule.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lang::{AppKind, Dim, GContext, GTerm, Idx, Name, Ty};
use crate::rewrite::{derive_chain_rule, ChainRuleSpec, RuleTag};

use super::{eval_generic, Environment, InterpError, MultiPoly, Rational, Value};

/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 0x6a61_636f_6269;

/// Symbolic comparison is attempted when both maps have at most this degree.
const SYMBOLIC_DEGREE: u32 = 8;

/// One random point: each pair is `(left side, right side)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialVerdict {
    pub trial: usize,
    pub j: usize,
    pub i: usize,
    pub point: Vec<Rational>,
    pub lin: (Rational, Rational),
    pub chain_step: (Rational, Rational),
    pub chain_rule: (Rational, Rational),
}

impl TrialVerdict {
    pub fn holds(&self) -> bool {
        self.lin.0 == self.lin.1 && self.chain_step.0 == self.chain_step.1 && self.chain_rule.0 == self.chain_rule.1
    }
}

/// Canonical-form equality of both sides for one `(j, i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicVerdict {
    pub j: usize,
    pub i: usize,
    pub lin: bool,
    pub chain_step: bool,
    pub chain_rule: bool,
}

impl SymbolicVerdict {
    pub fn holds(&self) -> bool {
        self.lin && self.chain_step && self.chain_rule
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssumptionReport {
    pub seed: u64,
    pub trials: Vec<TrialVerdict>,
    /// Empty when a map exceeds the degree bound for symbolic comparison.
    pub symbolic: Vec<SymbolicVerdict>,
}

impl AssumptionReport {
    pub fn holds(&self) -> bool {
        self.trials.iter().all(TrialVerdict::holds) && self.symbolic.iter().all(SymbolicVerdict::holds)
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

impl fmt::Display for AssumptionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}", self.seed)?;
        for t in &self.trials {
            let pt: Vec<String> = t.point.iter().map(ToString::to_string).collect();
            writeln!(
                f,
                "trial {} j={} i={} at ({}): lin′ {} = {} {}; chain′ {} = {} {}; chain rule {} = {} {}",
                t.trial,
                t.j + 1,
                t.i + 1,
                pt.join(", "),
                t.lin.0,
                t.lin.1,
                verdict(t.lin.0 == t.lin.1),
                t.chain_step.0,
                t.chain_step.1,
                verdict(t.chain_step.0 == t.chain_step.1),
                t.chain_rule.0,
                t.chain_rule.1,
                verdict(t.chain_rule.0 == t.chain_rule.1),
            )?;
        }
        if self.symbolic.is_empty() {
            writeln!(f, "symbolic comparison skipped (degree above {SYMBOLIC_DEGREE})")?;
        }
        for s in &self.symbolic {
            writeln!(
                f,
                "symbolic j={} i={}: lin′ {}; chain′ {}; chain rule {}",
                s.j + 1,
                s.i + 1,
                verdict(s.lin),
                verdict(s.chain_step),
                verdict(s.chain_rule)
            )?;
        }
        write!(f, "{}", if self.holds() { "all equalities hold" } else { "some equality FAILED" })
    }
}

/// Components and input arity of a polynomial map.
fn as_map(v: &Value) -> Result<(usize, Vec<MultiPoly>), InterpError> {
    Ok(match v {
        Value::Fun11(p) => (1, vec![p.clone()]),
        Value::FunM1(p) => (p.nvars(), vec![p.clone()]),
        Value::Fun1N(ps) => (1, ps.clone()),
        Value::FunMN(m, ps) => (*m, ps.clone()),
        other => {
            return Err(InterpError::TypeMismatch { expected: "a polynomial map".into(), found: other.ty().to_string() })
        }
    })
}

/// The five lines compared for one `(j, i)`: the start, the two sides of
/// lin′, the two sides of chain′ and the final sum.
struct Lines {
    start: GTerm,
    lin: (GTerm, GTerm),
    chain_step: (GTerm, GTerm),
    end: GTerm,
}

fn lines(m: usize, n: usize, k: usize, j: usize, i: usize) -> Result<Lines, InterpError> {
    let spec = ChainRuleSpec {
        m: Dim::Lit(m),
        n: Dim::Lit(n),
        k: Dim::Lit(k),
        j: Idx::Lit(j),
        i: Idx::Lit(i),
        pointfree: false,
        tensor_annotation: false,
    };
    let tr = derive_chain_rule(&spec)
        .map_err(|e| InterpError::TypeMismatch { expected: "composable maps".into(), found: e.to_string() })?;
    let mut all = vec![tr.start.clone()];
    all.extend(tr.steps.iter().map(|s| s.result.clone()));
    let around = |tag: RuleTag| -> Result<(GTerm, GTerm), InterpError> {
        let at = tr
            .steps
            .iter()
            .position(|s| s.tag == tag)
            .ok_or_else(|| InterpError::TypeMismatch { expected: format!("a {} step", tag.name()), found: "none".into() })?;
        Ok((all[at].clone(), all[at + 1].clone()))
    };
    Ok(Lines {
        start: tr.start.clone(),
        lin: around(RuleTag::LinPrime)?,
        chain_step: around(RuleTag::ChainPrime)?,
        end: all.last().cloned().expect("a trace has a start"),
    })
}

fn cached(
    cache: &mut BTreeMap<(usize, usize), Lines>,
    (m, n, k): (usize, usize, usize),
    j: usize,
    i: usize,
) -> Result<&Lines, InterpError> {
    match cache.entry((j, i)) {
        Entry::Occupied(e) => Ok(e.into_mut()),
        Entry::Vacant(e) => Ok(e.insert(lines(m, n, k, j, i)?)),
    }
}

struct Checker {
    ctx: GContext,
    env: Environment,
}

impl Checker {
    fn value(&self, t: &GTerm) -> Result<Value, InterpError> {
        eval_generic(&self.ctx, &self.env, t)
    }

    /// Evaluate `t(point)` with the point bound as a tuple variable.
    fn at(&self, t: &GTerm, point: &[Rational]) -> Result<Rational, InterpError> {
        let ctx = self.ctx.extend(Name::new("p"), Ty::Tuple(Dim::Lit(point.len())));
        let mut env = self.env.clone();
        env.push(Value::Tuple(point.to_vec()));
        let app = GTerm::app(AppKind::AM1, t.shift(1, 0), GTerm::var("p", 0));
        match eval_generic(&ctx, &env, &app)? {
            Value::Scalar(r) => Ok(r),
            other => Err(InterpError::TypeMismatch { expected: "Scalar".into(), found: other.ty().to_string() }),
        }
    }

    fn pair_at(&self, (a, b): &(GTerm, GTerm), point: &[Rational]) -> Result<(Rational, Rational), InterpError> {
        Ok((self.at(a, point)?, self.at(b, point)?))
    }

    fn same(&self, a: &GTerm, b: &GTerm) -> Result<bool, InterpError> {
        Ok(self.value(a)? == self.value(b)?)
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-12i64..=12).into(), rng.gen_range(1i64..=5).into())
}

/// Check lin′, chain′ and the local chain rule for `f ∘ g` exactly: at
/// `trials` random rational points and, for low degrees, symbolically.
pub fn check_assumed_equalities(f: &Value, g: &Value, trials: usize, seed: u64) -> Result<AssumptionReport, InterpError> {
    let (k, fs) = as_map(f)?;
    let (m, gs) = as_map(g)?;
    if gs.len() != k {
        return Err(InterpError::TypeMismatch {
            expected: format!("an inner map with {k} components"),
            found: format!("{} components", gs.len()),
        });
    }
    let n = fs.len();
    let checker = Checker {
        ctx: GContext::from_entries(vec![
            (Name::new("f"), Ty::FunMN(Dim::Lit(k), Dim::Lit(n))),
            (Name::new("g"), Ty::FunMN(Dim::Lit(m), Dim::Lit(k))),
        ]),
        env: Environment::new(vec![Value::FunMN(k, fs.clone()), Value::FunMN(m, gs.clone())]),
    };
    let mut cache: BTreeMap<(usize, usize), Lines> = BTreeMap::new();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    for trial in 0..trials {
        let j = rng.gen_range(0..n);
        let i = rng.gen_range(0..m);
        let point: Vec<Rational> = (0..m).map(|_| random_rational(&mut rng)).collect();
        let l = cached(&mut cache, (m, n, k), j, i)?;
        out.push(TrialVerdict {
            trial,
            j,
            i,
            lin: checker.pair_at(&l.lin, &point)?,
            chain_step: checker.pair_at(&l.chain_step, &point)?,
            chain_rule: checker.pair_at(&(l.start.clone(), l.end.clone()), &point)?,
            point,
        });
    }

    let degree = fs.iter().chain(&gs).map(MultiPoly::degree).max().unwrap_or(0);
    let mut symbolic = Vec::new();
    if degree <= SYMBOLIC_DEGREE {
        for j in 0..n {
            for i in 0..m {
                let l = cached(&mut cache, (m, n, k), j, i)?;
                symbolic.push(SymbolicVerdict {
                    j,
                    i,
                    lin: checker.same(&l.lin.0, &l.lin.1)?,
                    chain_step: checker.same(&l.chain_step.0, &l.chain_step.1)?,
                    chain_rule: checker.same(&l.start, &l.end)?,
                });
            }
        }
    }
    Ok(AssumptionReport { seed, trials: out, symbolic })
}
