use anyhow::Result;
use qsphere::equivariant_triple::{decay_report, decay_residual, torus_weight, NOISE_FLOOR};
use qsphere::operators::{IndexSet, TruncatedSpace};
use serde_json::{json, Value};

use crate::report::{gamma_string, num, Report};
use crate::{classify, usage, Settings};

/// Residual tables for `j` (or every generator), one row per entry above the
/// noise floor; passes when every fitted exponent is at least `1 - tol`.
pub fn run(s: &Settings) -> Result<Report> {
    let ctx = s.ctx()?;
    let ell = ctx.ell;
    let js: Vec<usize> = match s.j {
        Some(j) if (1..=ell + 1).contains(&j) => vec![j],
        Some(j) => return usage(format!("j = {j} outside 1..={}", ell + 1)),
        None => (1..=ell + 1).collect(),
    };
    let q = ctx.q;
    let space = TruncatedSpace::new(ctx, IndexSet::sigma(ell));
    let threshold = 1.0 - s.tol_or(0.02);
    let mut pass = true;
    let mut rows = Vec::new();
    let mut body = Vec::new();
    for j in js {
        let r = decay_residual(j, &space).map_err(classify)?;
        let rep = decay_report(&r, |g| torus_weight(ell, g), q).map_err(classify)?;
        pass &= rep.alpha_fit.is_none_or(|a| a >= threshold);
        for (row, col, v) in r.entries() {
            if v.abs() <= NOISE_FLOOR {
                continue;
            }
            let g = space.gamma(col);
            let w = torus_weight(ell, &g);
            rows.push(vec![
                j.to_string(),
                gamma_string(&space.gamma(row)),
                gamma_string(&g),
                w.to_string(),
                num(v),
                num(v.abs() / q.powi(w as i32)),
            ]);
        }
        body.push(json!({
            "j": j,
            "cutoff": space.cutoff(),
            "entries": rep.entries,
            "c_fit": rep.c_fit,
            "alpha_fit": rep.alpha_fit,
            "envelope": rep.envelope,
        }));
    }
    Ok(Report {
        command: "decay",
        params: s.params(),
        body: Value::Array(body),
        header: vec!["j", "row_gamma", "col_gamma", "weight", "entry", "ratio"],
        rows,
        pass,
    })
}
