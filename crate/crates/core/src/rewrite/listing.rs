//! Listing emission: one line per derivation step with its relation marker.

use super::derivation::{DerivationTrace, TensorAnnotation};
use crate::lang::Dim;
use crate::render::{index_name_atom, position_atom, render, render_elided, BraceKind, Style};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ListingOptions {
    pub style: Style,
    /// On lines carrying underbraces, print only the first summand of a
    /// written-out sum.
    pub elide: bool,
}

impl Default for ListingOptions {
    fn default() -> Self {
        ListingOptions { style: Style::Latex { color: true }, elide: false }
    }
}

/// Render a trace as an `align*` block (LaTeX) or as marked text lines.
pub fn emit_listing(tr: &DerivationTrace, opts: &ListingOptions) -> String {
    let latex = matches!(opts.style, Style::Latex { .. });
    let mut lines = Vec::new();
    let first = render(&tr.ctx, &tr.start, opts.style, &[]);
    lines.push(if latex { format!("& &&{first}") } else { format!("{:<8}{first}", "") });
    for s in &tr.steps {
        let has_under = s.braces.iter().any(|b| b.kind == BraceKind::Under);
        let body = if opts.elide && has_under {
            render_elided(&tr.ctx, &s.result, opts.style, &s.braces)
        } else {
            render(&tr.ctx, &s.result, opts.style, &s.braces)
        };
        lines.push(if latex {
            format!("&{}&&{body}", s.tag.latex_marker())
        } else {
            format!("{:<8}{body}", s.tag.text_marker())
        });
    }
    if let Some(a) = &tr.annotation {
        let (pair, product) = annotation_lines(a, opts.style);
        if latex {
            lines.push(format!("&\\cong_{{\\text{{T}}}}&&{pair}"));
            lines.push(format!("&\\equiv&&{product}"));
        } else {
            lines.push(format!("{:<8}{pair}", "≅T"));
            lines.push(format!("{:<8}{product}", "≡"));
        }
    }
    if latex {
        format!("\\begin{{align*}}\n{}\n\\end{{align*}}\n", lines.join("\\\\\n"))
    } else {
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }
}

/// The Jacobian-pair line and the Jacobian-product line.
fn annotation_lines(a: &TensorAnnotation, style: Style) -> (String, String) {
    let latex = matches!(style, Style::Latex { .. });
    let j = position_atom(style, &a.j);
    let i = position_atom(style, &a.i);
    let pieces = |k: &str| -> (String, String) {
        if latex {
            let left = format!("\\text{{J}}^{{{{{j}}}}}_{{{{{k}}}'}}");
            let right = format!("\\text{{J}}^{{{{{k}}}'}}_{{{{{i}}}''}}");
            (
                format!("\\left({left}\\quad\\quad\\quad\\quad\\quad\\quad{right}\\right)"),
                format!("{left}{right}"),
            )
        } else {
            let left = format!("J^{j}_{k}'");
            let right = format!("J^{k}'_{i}''");
            (format!("({left}      {right})"), format!("{left} {right}"))
        }
    };
    match &a.k {
        Dim::Lit(n) => {
            let parts: Vec<(String, String)> = (1..=*n).map(|c| pieces(&c.to_string())).collect();
            let sep = if latex { "+_{T}" } else { " +T " };
            (
                parts.iter().map(|p| p.0.clone()).collect::<Vec<_>>().join(sep),
                parts.iter().map(|p| p.1.clone()).collect::<Vec<_>>().join(sep),
            )
        }
        Dim::Var(_) => {
            let k = index_name_atom(style, "k");
            let (pair, product) = pieces(&k);
            if latex {
                let ph = match style {
                    Style::Latex { color: true } => "\\phantom{\\color{green}\\sum_k}",
                    _ => "\\phantom{\\sum_k}",
                };
                (format!("{ph}{pair}"), format!("{ph}{product}"))
            } else {
                (pair, product)
            }
        }
    }
}
