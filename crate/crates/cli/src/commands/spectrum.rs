use anyhow::Result;
use qsphere::cg::format_rational;
use qsphere::spectral_zeta::{numeric_residue, trace_deq_symbolic, trace_torus_symbolic, TorusSymbol, ZetaCombination};
use qsphere::Rational;
use serde_json::{json, Value};

use crate::report::{num, Report};
use crate::{classify, UsageError, Settings};

struct Table {
    source: String,
    zeta: ZetaCombination,
}

fn load_symbol(path: &std::path::Path) -> Result<TorusSymbol> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read symbol file {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        UsageError(format!(
            "symbol file {}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
        .into()
    })
}

fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn run(s: &Settings) -> Result<Report> {
    let ell = s.ctx()?.ell;
    let mut tables = vec![
        Table { source: "deq".into(), zeta: trace_deq_symbolic(ell).map_err(classify)? },
        Table { source: "torus-identity".into(), zeta: trace_torus_symbolic(&TorusSymbol::identity(ell)).map_err(classify)? },
    ];
    for path in &s.symbols {
        let sym = load_symbol(path)?;
        let zeta = trace_torus_symbolic(&sym)
            .map_err(|e| UsageError(format!("symbol file {}: {e}", path.display())))?;
        tables.push(Table { source: path.display().to_string(), zeta });
    }
    let tol = s.tol_or(1e-6);
    let mut pass = true;
    let mut rows = Vec::new();
    let mut body = Vec::new();
    for t in &tables {
        let mut residues = Vec::new();
        for (pole, a) in t.zeta.residues() {
            let numeric = numeric_residue(&t.zeta, pole as f64).map_err(classify)?;
            let deviation = (numeric - to_f64(&a)).abs();
            pass &= deviation <= tol;
            if t.source == "deq" {
                pass &= a > Rational::from_integer(0);
            }
            rows.push(vec![
                t.source.clone(),
                pole.to_string(),
                format_rational(&a),
                num(numeric),
                num(deviation),
            ]);
            residues.push(json!({
                "pole": pole,
                "residue": format_rational(&a),
                "numeric": numeric,
                "deviation": deviation,
            }));
        }
        body.push(json!({ "source": t.source, "zeta": t.zeta, "residues": residues }));
    }
    Ok(Report {
        command: "dimension-spectrum",
        params: s.params(),
        body: Value::Array(body),
        header: vec!["source", "pole", "residue", "numeric", "deviation"],
        rows,
        pass,
    })
}
