use anyhow::Result;
use qsphere::cg::cg_table;
use qsphere::tableaux::{validate_tableau, GTTableau};
use serde_json::Value;

use crate::report::{num, Report};
use crate::{classify, usage, Settings};

fn parse_pattern(text: &str) -> Result<Vec<Vec<i64>>> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| match x.trim().parse() {
                    Ok(v) => Ok(v),
                    Err(_) => usage(format!("pattern entry {x:?} is not an integer")),
                })
                .collect()
        })
        .collect()
}

pub fn run(s: &Settings) -> Result<Report> {
    let ctx = s.ctx()?;
    if ctx.q == 0.0 {
        return usage("Clebsch-Gordan tables need q > 0");
    }
    let r = match &s.pattern {
        Some(p) => validate_tableau(parse_pattern(p)?).map_err(classify)?,
        None => GTTableau::r_nk(ctx.ell, s.n.unwrap_or(1), s.k.unwrap_or(1)),
    };
    if r.ell != ctx.ell {
        return usage(format!("pattern has rank {}, but ell = {}", r.ell, ctx.ell));
    }
    let i = s.i.unwrap_or(ctx.ell + 1);
    let table = cg_table(i, &r, &ctx).map_err(classify)?;
    let rows = table
        .iter()
        .map(|row| {
            vec![
                row.i.to_string(),
                row.m.clone(),
                row.sign.to_string(),
                row.q_exponent.clone(),
                num(row.l_product),
                num(row.value),
            ]
        })
        .collect();
    let mut params = s.params();
    params["pattern"] = Value::String(r.to_string());
    params["i"] = i.into();
    Ok(Report {
        command: "cg-table",
        params,
        body: serde_json::to_value(&table)?,
        header: vec!["i", "m", "sign", "q_exponent", "l_product", "value"],
        rows,
        pass: true,
    })
}
