//! The command surface: expression grammar, run configuration, verification
//! suites and the commands of the `innerfield` binary.

mod config;
mod grammar;
mod report;
mod specfile;
mod suites;

pub use config::{ReportFormat, RunConfig};
pub use grammar::{parse_expression, parse_ket};
pub use report::{Case, Report, Status};
pub use specfile::{parse_greens, parse_legs, GreenSpec};
pub use suites::{run_suite, Suite, SAMPLES};

use serde_json::json;

use crate::error::{Error, Result};
use crate::opalg::{anticommutator, commutator, normal_order, reduce_to_normal_form, vev, FieldKind, OperatorExpr};
use crate::smatrix::{lsz_reduce, printed_structure, wick_two_point, WickConfig};

/// Text output of a command, rendered in the configured format.
fn render(cfg: &RunConfig, command: &str, inputs: &[&str], fields: Vec<(&str, String)>) -> String {
    match cfg.format {
        ReportFormat::Text => {
            let mut out = String::new();
            for (i, (k, v)) in fields.iter().enumerate() {
                if i == 0 && fields.len() == 1 {
                    out.push_str(v);
                } else {
                    out.push_str(&format!("{k}: {v}"));
                }
                out.push('\n');
            }
            out
        }
        ReportFormat::Json => {
            let result: serde_json::Map<String, serde_json::Value> =
                fields.into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            let v = json!({ "command": command, "inputs": inputs, "result": result });
            serde_json::to_string_pretty(&v).expect("serializes") + "\n"
        }
    }
}

pub fn command_commutator(x: &str, y: &str, anti: bool, cfg: &RunConfig) -> Result<String> {
    let (a, b) = (parse_expression(x)?, parse_expression(y)?);
    let r = if anti { anticommutator(&a, &b) } else { commutator(&a, &b) };
    Ok(render(cfg, if anti { "anticommutator" } else { "commutator" }, &[x, y], vec![("result", r.to_string())]))
}

pub fn command_normal_form(src: &str, cfg: &RunConfig) -> Result<String> {
    let e = reduce_to_normal_form(&parse_expression(src)?);
    Ok(render(cfg, "normal-form", &[src], vec![("result", e.to_string())]))
}

pub fn command_normal_order(src: &str, cfg: &RunConfig) -> Result<String> {
    let e = normal_order(&parse_expression(src)?);
    Ok(render(cfg, "normal-order", &[src], vec![("result", e.to_string())]))
}

/// Splits `a(k;K) a'(h;H)` at top-level whitespace.
fn juxtaposed(src: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let (mut depth, mut cur) = (0i32, String::new());
    for c in src.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if c.is_whitespace() && depth == 0 {
            if !cur.is_empty() {
                parts.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(c);
        }
    }
    if !cur.is_empty() {
        parts.push(cur);
    }
    parts
}

/// `⟨0|e|0⟩`. With a leading `T`, the operators may be juxtaposed; when they
/// belong to one field kind, the two-point structure of that field built from
/// its mode expansion is printed alongside the stated one.
pub fn command_vev(src: &str, cfg: &RunConfig) -> Result<String> {
    let trimmed = src.trim_start();
    let Some(body) = trimmed.strip_prefix("T ") else {
        let e = vev(&parse_expression(src)?);
        return Ok(render(cfg, "vev", &[src], vec![("result", e.to_string())]));
    };
    let parts = juxtaposed(body);
    let mut e = OperatorExpr::one();
    let mut kinds = Vec::new();
    for part in &parts {
        let x = parse_expression(part)?;
        for (t, _) in x.terms() {
            kinds.extend(t.ops.iter().map(|o| FieldKind::of(o.field())));
        }
        e = e * x;
    }
    let mut fields = vec![("vev", vev(&e).to_string())];
    kinds.dedup();
    if let [kind] = kinds.as_slice() {
        if parts.len() == 2 {
            let wcfg = WickConfig { masses: cfg.masses.clone(), ..WickConfig::default() };
            let w = wick_two_point(*kind, &wcfg)?;
            let printed = printed_structure(*kind);
            let diffs = w.differences(&printed);
            fields.push(("propagator", w.to_string()));
            fields.push(("stated", printed.to_string()));
            fields.push(("agreement", if diffs.is_empty() { "exact".into() } else { diffs.join("; ") }));
        }
    }
    Ok(render(cfg, "vev", &[src], fields))
}

/// LSZ reduction of the Green function described by a Green-function file and a legs file.
/// Returns the report and whether the reduction produced an amplitude.
pub fn command_reduce(greens: &str, legs: &str, cfg: &RunConfig) -> Result<String> {
    let spec = parse_greens(greens)?;
    let legs = parse_legs(legs)?;
    if legs.is_empty() {
        return Err(Error::Lsz("no legs given".into()));
    }
    let g = spec.green_function(legs);
    let recipe = crate::smatrix::LSZRecipe { grav_limit: spec.grav_limit, ..cfg.lsz_recipe() };
    let amp = lsz_reduce(&g, &recipe, &cfg.regularization()?, &cfg.masses)?;
    let legs: Vec<String> = g.legs.iter().map(|l| l.to_string()).collect();
    let pairings: Vec<_> = amp.elastic_pairings.iter().map(|p| json!({ "pairs": p.pairs, "sign": p.sign })).collect();
    Ok(match cfg.format {
        ReportFormat::Json => {
            let v = json!({
                "command": "reduce",
                "config": cfg.to_json(),
                "legs": legs,
                "grav_limit": spec.grav_limit,
                "vertices": spec.vertices.iter().map(|(n, _)| n).collect::<Vec<_>>(),
                "connected": { "re": amp.connected.re, "im": amp.connected.im },
                "elastic": amp.elastic.to_string(),
                "normalized_elastic": amp.normalized_elastic.to_string(),
                "elastic_pairings": pairings,
                "leg_factors": amp.leg_factors.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            });
            serde_json::to_string_pretty(&v).expect("serializes") + "\n"
        }
        ReportFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!("legs: {}\n", legs.join(", ")));
            out.push_str(&format!("connected: {}\n", amp.connected));
            out.push_str(&format!("elastic: {}\n", amp.elastic));
            out.push_str(&format!("normalized elastic: {}\n", amp.normalized_elastic));
            for p in &amp.elastic_pairings {
                out.push_str(&format!("pairing {:?} sign {}\n", p.pairs, p.sign));
            }
            out
        }
    })
}
