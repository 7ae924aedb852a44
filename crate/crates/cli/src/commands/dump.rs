use anyhow::Result;
use qsphere::equivariant_triple::{build_u, build_x, build_z_star_cg, build_z_star_q0};
use qsphere::operators::{dirac_equivariant, dirac_torus, IndexSet, SparseOperator, TruncatedSpace};
use qsphere::torus_triple::build_y;
use serde_json::{json, Value};

use crate::report::{gamma_string, num, Report};
use crate::{classify, usage, Settings};

fn split_index(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.parse().ok()
}

pub fn run(s: &Settings) -> Result<Report> {
    let ctx = s.ctx()?;
    let ell = ctx.ell;
    let name = s.op.clone().unwrap_or_else(|| "y1".into());
    let torus = || TruncatedSpace::new(ctx, IndexSet::torus(ell));
    let sigma = || TruncatedSpace::new(ctx, IndexSet::sigma(ell));
    let z_star = |j: usize| {
        let sp = sigma();
        if ctx.q == 0.0 {
            build_z_star_q0(j, &sp)
        } else {
            build_z_star_cg(j, &sp)
        }
    };
    let op: SparseOperator = if let Some(j) = split_index(&name, "zstar") {
        z_star(j).map_err(classify)?
    } else if let Some(j) = split_index(&name, "z") {
        z_star(j).map_err(classify)?.adjoint()
    } else if let Some(j) = split_index(&name, "y") {
        build_y(j, &torus()).map_err(classify)?
    } else if let Some(j) = split_index(&name, "x") {
        build_x(j, &sigma()).map_err(classify)?
    } else {
        match name.as_str() {
            "u" => build_u(&sigma()).map_err(classify)?,
            "d-torus" => dirac_torus(&torus()).map_err(classify)?.d,
            "d-eq" => dirac_equivariant(&sigma()).map_err(classify)?.d,
            other => return usage(format!("unknown operator {other:?}")),
        }
    };
    let triplets = op.triplets();
    let rows = triplets
        .iter()
        .map(|(r, c, v)| vec![gamma_string(r), gamma_string(c), num(*v)])
        .collect();
    let body = json!({
        "operator": name,
        "dim": op.dim(),
        "nnz": triplets.len(),
        "entries": triplets.iter().map(|(r, c, v)| json!([r, c, v])).collect::<Vec<Value>>(),
    });
    Ok(Report {
        command: "operator-dump",
        params: s.params(),
        body,
        header: vec!["row_gamma", "col_gamma", "value"],
        rows,
        pass: true,
    })
}
