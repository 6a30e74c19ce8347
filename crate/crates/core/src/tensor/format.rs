//! Field and transition-map files.
//!
//! ```text
//! (spec 0 1 0)
//! (dim 2)
//! (component () (0) "4")
//! (component () (1) "9")
//!
//! (transition 2 (forward "2 x1" "3 x2") (inverse "1/2 x1" "1/3 x2"))
//! ```
//! Polynomials are strings or `(poly DIM "…")` forms; indices are 0-based;
//! components that are not listed are zero.

use std::collections::BTreeMap;

use crate::interp::{InterpError, MultiPoly};
use crate::lang::sexpr::{read_all, Sexp};

use super::field::{ComponentField, TensorDensitySpec};
use super::transition::TransitionMap;
use super::TensorError;

fn syntax(s: &Sexp, what: &str) -> TensorError {
    TensorError::Syntax(s.error(what))
}

fn nat(s: &Sexp) -> Result<usize, TensorError> {
    s.atom().and_then(|a| a.parse().ok()).ok_or_else(|| syntax(s, "a natural number"))
}

fn int(s: &Sexp) -> Result<i32, TensorError> {
    s.atom().and_then(|a| a.parse().ok()).ok_or_else(|| syntax(s, "an integer"))
}

fn poly(s: &Sexp, dim: usize) -> Result<MultiPoly, TensorError> {
    if let Some(text) = s.string() {
        return Ok(MultiPoly::parse(dim, text)?);
    }
    match s.form() {
        Some(("poly", [n, text])) => {
            let declared = nat(n)?;
            if declared != dim {
                return Err(InterpError::ArityMismatch { expected: dim, found: declared }.into());
            }
            let text = text.string().ok_or_else(|| syntax(text, "a polynomial string"))?;
            Ok(MultiPoly::parse(dim, text)?)
        }
        _ => Err(syntax(s, "a polynomial string or (poly DIM \"…\")")),
    }
}

fn indices(s: &Sexp) -> Result<Vec<usize>, TensorError> {
    s.list().ok_or_else(|| syntax(s, "an index list"))?.iter().map(nat).collect()
}

/// Read a field file.
pub fn parse_field(text: &str) -> Result<ComponentField, TensorError> {
    let forms = read_all(text)?;
    let mut spec = None;
    let mut dim = None;
    let mut raw = Vec::new();
    for f in &forms {
        match f.form() {
            Some(("spec", [p, q, w])) => spec = Some(TensorDensitySpec::new(nat(p)?, nat(q)?, int(w)?)?),
            Some(("dim", [d])) => dim = Some(nat(d)?),
            Some(("component", [up, lo, p])) => raw.push((indices(up)?, indices(lo)?, p)),
            _ => return Err(syntax(f, "(spec P Q W), (dim D) or (component (UPPER…) (LOWER…) POLY)")),
        }
    }
    let first = forms.first();
    let missing = |what: &str| match first {
        Some(f) => syntax(f, what),
        None => TensorError::InvalidSpec(format!("empty field file: {what}")),
    };
    let spec = spec.ok_or_else(|| missing("a (spec P Q W) form"))?;
    let dim = dim.ok_or_else(|| missing("a (dim D) form"))?;
    let mut listed = BTreeMap::new();
    for (up, lo, p) in raw {
        if up.len() != spec.p || lo.len() != spec.q || up.iter().chain(&lo).any(|&i| i >= dim) {
            return Err(syntax(p, &format!("{} upper and {} lower indices below {dim}", spec.p, spec.q)));
        }
        listed.insert((up, lo), poly(p, dim)?);
    }
    ComponentField::new(dim, spec, listed)
}

/// Read a transition-map file; `label` names the map in diagnostics.
pub fn parse_transition(text: &str, label: &str) -> Result<TransitionMap, TensorError> {
    let forms = read_all(text)?;
    let [form] = forms.as_slice() else {
        return Err(TensorError::InvalidSpec("a transition file holds exactly one (transition …) form".into()));
    };
    let Some(("transition", [d, rest @ ..])) = form.form() else {
        return Err(syntax(form, "(transition DIM (forward POLY…) (inverse POLY…)?)"));
    };
    let dim = nat(d)?;
    let mut forward = None;
    let mut inverse = None;
    for part in rest {
        match part.form() {
            Some(("forward", ps)) => forward = Some(ps.iter().map(|p| poly(p, dim)).collect::<Result<Vec<_>, _>>()?),
            Some(("inverse", ps)) => inverse = Some(ps.iter().map(|p| poly(p, dim)).collect::<Result<Vec<_>, _>>()?),
            _ => return Err(syntax(part, "(forward POLY…) or (inverse POLY…)")),
        }
    }
    let forward = forward.ok_or_else(|| syntax(form, "a (forward POLY…) part"))?;
    TransitionMap::new(dim, forward, inverse, label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{transform_components, Direction};

    #[test]
    fn round_trip_and_transform() {
        let field = parse_field("(spec 0 1 0) (dim 2) (component () (0) \"4\") (component () (1) (poly 2 \"9\"))").unwrap();
        let map = parse_transition("(transition 2 (forward \"2 x1\" \"3 x2\") (inverse \"1/2 x1\" \"1/3 x2\"))", "A→B").unwrap();
        let out = transform_components(&field, &map, Direction::Forward).unwrap();
        assert_eq!(out.to_string(), "(spec 0 1 0)\n(dim 2)\n(component () (0) \"2\")\n(component () (1) \"3\")");
        assert_eq!(parse_field(&out.to_string()).unwrap(), out);
    }

    #[test]
    fn errors() {
        assert!(parse_field("(dim 2)").is_err());
        assert!(parse_field("(spec 0 1 0) (dim 2) (component () (2) \"1\")").is_err());
        assert!(parse_transition("(transition 2 (forward \"x1\"))", "f").is_err());
        assert!(matches!(
            parse_transition("(transition 1 (forward \"2 x1\") (inverse \"x1\"))", "f"),
            Err(TensorError::InverseMismatch(_))
        ));
    }
}
