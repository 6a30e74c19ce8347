//! One function per subcommand; each returns its rendered result.

use std::fs;
use std::path::{Path, PathBuf};

use jacobiform::deriv::encode_partial_derivative_typed;
use jacobiform::expansion::{instantiate_arity, ArityAssignment};
use jacobiform::gen::{self, Rng64, SeedableRng};
use jacobiform::interp::{self, check_assumed_equalities, parse_env_file, Value, DEFAULT_SEED};
use jacobiform::lang::{
    gterm_sexpr, infer, parse_term_file, type_check, type_sexpr, Dim, GContext, GTerm, Idx, Term, TypedTerm,
};
use jacobiform::render::{render, Style};
use jacobiform::rewrite::{derive_chain_rule, emit_listing, ChainRuleSpec, ListingOptions};
use jacobiform::tensor::{
    chain_transform, kronecker_check, parse_field, parse_transition, transform_components, Direction, TransitionMap,
};
use serde_json::json;

use crate::error::CliError;
use crate::{DeriveArgs, DirectionArg, Format, Outcome, VerifyArgs};

/// Environment variable overriding the default seed of random trials.
pub const SEED_VAR: &str = "JACOBIFORM_SEED";

fn read(path: &Path) -> Result<(String, String), CliError> {
    let name = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {name}: {e}")))?;
    Ok((name, text))
}

fn read_generic(path: &Path) -> Result<(GContext, GTerm), CliError> {
    let (name, text) = read(path)?;
    parse_term_file(&text, true).map_err(|e| CliError::syntax(&name, e))
}

fn read_typed(path: &Path) -> Result<TypedTerm, CliError> {
    let (name, text) = read(path)?;
    let (ctx, g) = parse_term_file(&text, false).map_err(|e| CliError::syntax(&name, e))?;
    let ctx = ctx.concrete().expect("concrete grammar yields concrete types");
    let t = g.to_term().expect("concrete grammar yields concrete terms");
    type_check(&ctx, &t).map_err(|e| CliError::from_type(&e))
}

/// Render a term in one of the term notations.
fn show(ctx: &GContext, t: &GTerm, format: Format) -> Outcome {
    let sexpr = gterm_sexpr(t);
    let text = match format {
        Format::BarredArrow | Format::Text => render(ctx, t, Style::Text, &[]),
        Format::Latex => render(ctx, t, Style::Latex { color: false }, &[]),
        Format::Sexpr | Format::Json => sexpr.clone(),
    };
    let json = json!({
        "sexpr": sexpr,
        "barred_arrow": render(ctx, t, Style::Text, &[]),
        "latex": render(ctx, t, Style::Latex { color: false }, &[]),
    });
    Outcome { text, json }
}

pub fn check(file: &Path, format: Format) -> Result<Outcome, CliError> {
    let (ctx, g) = read_generic(file)?;
    let ty = infer(&ctx, &g).map_err(|e| CliError::from_type(&e))?;
    let text = if format == Format::Text { ty.to_string() } else { type_sexpr(&ty) };
    Ok(Outcome { text, json: json!({ "type": type_sexpr(&ty) }) })
}

pub fn emit(file: &Path, format: Format) -> Result<Outcome, CliError> {
    let (ctx, g) = read_generic(file)?;
    infer(&ctx, &g).map_err(|e| CliError::from_type(&e))?;
    Ok(show(&ctx, &g, format))
}

pub fn expand(file: &Path, arity: &str, format: Format) -> Result<Outcome, CliError> {
    let bindings = ArityAssignment::parse_bindings(arity).map_err(CliError::Usage)?;
    let (ctx, g) = read_generic(file)?;
    let (_, params) = g.symbols();
    let mut a = ArityAssignment::new();
    for (name, value) in bindings {
        if params.contains(&name) {
            if value == 0 {
                return Err(CliError::Usage(format!("position {name} is 1-based")));
            }
            a = a.position(&name, value - 1);
        } else {
            a = a.arity(&name, value);
        }
    }
    let (cctx, t) = instantiate_arity(&ctx, &g, &a).map_err(CliError::from_expansion)?;
    Ok(show(&cctx.generic(), &GTerm::from(&t), format))
}

pub fn deriv(f: &Path, j: usize, i: usize, format: Format) -> Result<Outcome, CliError> {
    let typed = read_typed(f)?;
    let d = encode_partial_derivative_typed(&typed, j - 1, i - 1).map_err(CliError::from_deriv)?;
    Ok(show(&d.ctx().generic(), &GTerm::from(d.term()), format))
}

fn dim(v: Option<u64>, name: &str) -> Dim {
    v.map_or_else(|| Dim::Var(name.into()), |n| Dim::Lit(n as usize))
}

fn position(v: Option<u64>, name: &str, bound: &Dim, of: &str) -> Result<Idx, CliError> {
    match (v, bound) {
        (None, _) => Ok(Idx::Param(name.into())),
        (Some(p), Dim::Lit(b)) if p as usize > *b => {
            Err(CliError::domain("dimension", format!("--{name} {p} exceeds {of} = {b}")))
        }
        (Some(p), _) => Ok(Idx::Lit(p as usize - 1)),
    }
}

pub fn derive(a: &DeriveArgs) -> Result<Outcome, CliError> {
    let m = dim(a.m, "m");
    let n = dim(a.n, "n");
    let k = dim(a.k, "k");
    let spec = ChainRuleSpec {
        i: position(a.i, "i", &m, "m")?,
        j: position(a.j, "j", &n, "n")?,
        m,
        n,
        k,
        pointfree: a.pointfree,
        tensor_annotation: a.tensor_annotation,
    };
    let trace = derive_chain_rule(&spec).map_err(CliError::from_derive)?;
    let style = if a.format == Format::Text { Style::Text } else { Style::Latex { color: true } };
    let text = emit_listing(&trace, &ListingOptions { style, elide: a.elide });
    let tags: Vec<&str> = trace.steps.iter().map(|s| s.tag.name()).collect();
    Ok(Outcome { json: json!({ "tags": tags, "listing": text }), text })
}

pub fn eval(file: &Path, env_file: &Path) -> Result<Outcome, CliError> {
    let (term_name, term_text) = read(file)?;
    let (env_name, env_text) = read(env_file)?;
    let (ctx, g) = parse_term_file(&term_text, false).map_err(|e| CliError::syntax(&term_name, e))?;
    let (env_ctx, env) = parse_env_file(&env_text).map_err(|e| CliError::from_interp(&env_name, e))?;
    let ctx = if ctx.is_empty() { env_ctx } else { ctx.concrete().expect("concrete grammar yields concrete types") };
    env.check_against(&ctx).map_err(|e| CliError::from_interp(&env_name, e))?;
    let t: Term = g.to_term().expect("concrete grammar yields concrete terms");
    let typed = type_check(&ctx, &t).map_err(|e| CliError::from_type(&e))?;
    let v = interp::eval(&env, &typed).map_err(|e| CliError::from_interp(&term_name, e))?;
    Ok(Outcome { text: v.to_string(), json: json!({ "type": v.ty().to_string(), "value": v.to_string() }) })
}

fn seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("{SEED_VAR}={v} is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

pub fn transform(
    field_file: &Path,
    map_files: &[PathBuf],
    direction: DirectionArg,
    check: bool,
    points: usize,
    seed_flag: Option<u64>,
) -> Result<Outcome, CliError> {
    let (field_name, field_text) = read(field_file)?;
    let field = parse_field(&field_text).map_err(|e| CliError::from_tensor(&field_name, e))?;
    let mut maps: Vec<TransitionMap> = Vec::new();
    for path in map_files {
        let (name, text) = read(path)?;
        let label = path.file_stem().map_or(name.clone(), |s| s.to_string_lossy().into_owned());
        maps.push(parse_transition(&text, &label).map_err(|e| CliError::from_tensor(&name, e))?);
    }
    let tensor = |e| CliError::from_tensor(&field_name, e);
    let out = match direction {
        DirectionArg::Forward => chain_transform(&field, &maps).map_err(tensor)?.field,
        DirectionArg::Inverse => {
            let mut f = field.clone();
            for t in maps.iter().rev() {
                f = transform_components(&f, t, Direction::Inverse).map_err(tensor)?;
            }
            f
        }
    };
    let mut text = out.to_string();
    let mut json = json!({ "field": out.to_string() });
    if check {
        let seed = seed(seed_flag)?;
        let mut rng = Rng64::seed_from_u64(seed);
        let mut reports = Vec::new();
        let mut all = true;
        text.push_str(&format!("\nseed {seed}"));
        for t in &maps {
            let pts: Vec<Vec<_>> = (0..points).map(|_| (0..t.dim()).map(|_| gen::rational(&mut rng)).collect()).collect();
            let report = kronecker_check(t, &pts).map_err(tensor)?;
            all &= report.holds();
            text.push_str(&format!("\nkronecker {}: {}\n{report}", t.label(), if report.holds() { "holds" } else { "FAILS" }));
            reports.push(json!({ "map": t.label(), "holds": report.holds(), "report": report.to_string() }));
        }
        json["seed"] = json!(seed);
        json["kronecker"] = json!(reports);
        if !all {
            return Err(CliError::domain("kronecker", "J_f · J_{f⁻¹} differs from the identity"));
        }
    }
    Ok(Outcome { text, json })
}

fn env_maps(path: &Path) -> Result<(Value, Value), CliError> {
    let (name, text) = read(path)?;
    let (ctx, env) = parse_env_file(&text).map_err(|e| CliError::from_interp(&name, e))?;
    let find = |want: &str| {
        ctx.entries()
            .iter()
            .zip(env.values())
            .find(|((n, _), _)| n.as_str() == want)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| CliError::domain("environment", format!("{name} binds no `{want}`")))
    };
    Ok((find("f")?, find("g")?))
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let seed = seed(a.seed)?;
    let (f, g) = match &a.env {
        Some(path) => env_maps(path)?,
        None => {
            let (m, n, k) = (a.m as usize, a.n as usize, a.k as usize);
            let mut rng = Rng64::seed_from_u64(seed);
            let f = Value::FunMN(k, gen::map(&mut rng, k, n, a.degree));
            let g = Value::FunMN(m, gen::map(&mut rng, m, k, a.degree));
            (f, g)
        }
    };
    let report = check_assumed_equalities(&f, &g, a.trials, seed).map_err(|e| CliError::from_interp("verify", e))?;
    let text = format!("f = {f}\ng = {g}\n{report}");
    if !report.holds() {
        return Err(CliError::domain("assumed_equality", text));
    }
    Ok(Outcome { json: json!({ "seed": seed, "holds": true, "f": f.to_string(), "g": g.to_string(), "report": report.to_string() }), text })
}
