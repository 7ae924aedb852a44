use std::sync::Arc;

use anyhow::Result;
use qsphere::cg::{cg_direct, cg_factorized};
use qsphere::equivariant_triple::{
    build_u, build_y_star_tensor, build_z_star_q0, conjugate, st_decomposition_check, EquivariantGenerators,
};
use qsphere::operators::{dirac_equivariant, dirac_torus, IndexSet, SparseOperator, TruncatedSpace};
use qsphere::tableaux::{apply_move, enumerate_moves, enumerate_patterns, lambda_nk};
use qsphere::torus_triple::{
    build_generators, build_y, canonical_seminorm, canonical_to_operator, verify_sphere_relations, Block,
    CanonicalElement,
};
use qsphere::QContext;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::{num, Report};
use crate::{classify, usage, Settings};

const CHECKS: [&str; 5] = ["relations", "decompositions", "commutators", "seminorms", "cg"];

struct Assertion {
    check: String,
    params: Value,
    max_deviation: f64,
    tolerance: f64,
}

impl Assertion {
    fn pass(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

pub fn run(s: &Settings) -> Result<Report> {
    let selected: Vec<&str> = match s.check.as_deref() {
        None | Some("all") => CHECKS.to_vec(),
        Some(c) if CHECKS.contains(&c) => vec![c],
        Some(other) => return usage(format!("unknown check {other:?}; expected one of {CHECKS:?} or all")),
    };
    let ctx = s.ctx()?;
    let mut out = Vec::new();
    for check in selected {
        match check {
            "relations" => relations(s, &ctx, &mut out)?,
            "decompositions" => decompositions(s, &ctx, &mut out)?,
            "commutators" => commutators(s, &ctx, &mut out)?,
            "seminorms" => seminorms(s, &ctx, &mut out)?,
            _ => cg(s, &ctx, &mut out)?,
        }
    }
    let pass = out.iter().all(Assertion::pass);
    let body: Vec<Value> = out
        .iter()
        .map(|a| {
            json!({
                "check": a.check,
                "params": a.params,
                "max_deviation": a.max_deviation,
                "tolerance": a.tolerance,
                "pass": a.pass(),
            })
        })
        .collect();
    let rows = out
        .iter()
        .map(|a| {
            vec![
                a.check.clone(),
                a.params.to_string(),
                num(a.max_deviation),
                num(a.tolerance),
                a.pass().to_string(),
            ]
        })
        .collect();
    Ok(Report {
        command: "verify",
        params: s.params(),
        body: Value::Array(body),
        header: vec!["check", "params", "max_deviation", "tolerance", "pass"],
        rows,
        pass,
    })
}

fn torus_space(ctx: &QContext, ell: usize, cutoff: usize) -> Result<Arc<TruncatedSpace>> {
    Ok(TruncatedSpace::new(ctx.with_cutoff(cutoff).map_err(classify)?, IndexSet::torus(ell)))
}

fn sigma_space(ctx: &QContext, cutoff: usize) -> Result<Arc<TruncatedSpace>> {
    Ok(TruncatedSpace::new(ctx.with_cutoff(cutoff).map_err(classify)?, IndexSet::sigma(ctx.ell)))
}

fn equivariant_generators(space: &Arc<TruncatedSpace>) -> Result<EquivariantGenerators> {
    if space.ctx.q == 0.0 {
        EquivariantGenerators::q0(space).map_err(classify)
    } else {
        EquivariantGenerators::cg(space).map_err(classify)
    }
}

fn relations(s: &Settings, ctx: &QContext, out: &mut Vec<Assertion>) -> Result<()> {
    let sp = torus_space(ctx, ctx.ell, ctx.cutoff)?;
    let dev = verify_sphere_relations(&build_generators(&sp).map_err(classify)?, ctx).map_err(classify)?;
    out.push(Assertion {
        check: "relations/torus".into(),
        params: json!({ "generators": "Y" }),
        max_deviation: dev,
        tolerance: s.tol_or(1e-12),
    });
    if ctx.ell >= 2 {
        let sp = sigma_space(ctx, ctx.cutoff)?;
        let gens = equivariant_generators(&sp)?;
        let dev = verify_sphere_relations(&gens.z, ctx).map_err(classify)?;
        out.push(Assertion {
            check: "relations/equivariant".into(),
            params: json!({ "generators": "Z", "provenance": gens.provenance[0] }),
            max_deviation: dev,
            tolerance: s.tol_or(1e-9),
        });
    }
    Ok(())
}

fn decompositions(s: &Settings, ctx: &QContext, out: &mut Vec<Assertion>) -> Result<()> {
    let sp = sigma_space(ctx, ctx.cutoff)?;
    let ell = ctx.ell;
    dirac_equivariant(&sp).map_err(classify)?;
    out.push(Assertion {
        check: "decompositions/dirac".into(),
        params: json!({}),
        max_deviation: 0.0,
        tolerance: s.tol_or(0.0),
    });
    if ctx.q == 0.0 {
        let u = build_u(&sp).map_err(classify)?;
        for j in 1..=ell + 1 {
            let z = conjugate(&u, &build_z_star_q0(j, &sp).map_err(classify)?).map_err(classify)?;
            let y = build_y_star_tensor(j, &sp).map_err(classify)?;
            let dev = z.compress(1).max_abs_diff(&y.compress(1)).map_err(classify)?;
            out.push(Assertion {
                check: "decompositions/q0-model".into(),
                params: json!({ "j": j }),
                max_deviation: dev,
                tolerance: s.tol_or(0.0),
            });
        }
    } else {
        for j in 1..=ell + 1 {
            let rep = st_decomposition_check(j, &sp).map_err(classify)?;
            out.push(Assertion {
                check: "decompositions/st".into(),
                params: json!({ "j": j }),
                max_deviation: rep.max_deviation.max(rep.tmminus_deviation.unwrap_or(0.0)),
                tolerance: s.tol_or(1e-12),
            });
        }
    }
    Ok(())
}

/// Relative norm drift of `[D, generator]` between `cutoff` and `cutoff + 2`.
/// The truncation error decays like `q^(2 cutoff)`, hence the loose default.
fn commutators(s: &Settings, ctx: &QContext, out: &mut Vec<Assertion>) -> Result<()> {
    let cuts = [ctx.cutoff, ctx.cutoff + 2];
    for j in 1..=ctx.ell + 1 {
        let mut norms = Vec::new();
        for &c in &cuts {
            let sp = torus_space(ctx, ctx.ell, c)?;
            let d = dirac_torus(&sp).map_err(classify)?.d;
            let y = build_y(j, &sp).map_err(classify)?;
            norms.push(SparseOperator::commutator(&d, &y).map_err(classify)?.op_norm());
        }
        out.push(Assertion {
            check: "commutators/torus".into(),
            params: json!({ "j": j, "cutoffs": cuts, "norms": norms }),
            max_deviation: (norms[1] - norms[0]).abs() / norms[1].max(1.0),
            tolerance: s.tol_or(1e-3),
        });
    }
    if ctx.ell >= 2 {
        let mut norms = vec![Vec::new(); ctx.ell + 1];
        for &c in &cuts {
            let sp = sigma_space(ctx, c)?;
            let d = dirac_equivariant(&sp).map_err(classify)?.d;
            let gens = equivariant_generators(&sp)?;
            for (j, z) in gens.z.iter().enumerate() {
                norms[j].push(SparseOperator::commutator(&d, z).map_err(classify)?.op_norm());
            }
        }
        for (j, n) in norms.into_iter().enumerate() {
            out.push(Assertion {
                check: "commutators/equivariant".into(),
                params: json!({ "j": j + 1, "cutoffs": cuts, "norms": n }),
                max_deviation: (n[1] - n[0]).abs() / n[1].max(1.0),
                tolerance: s.tol_or(1e-3),
            });
        }
    }
    Ok(())
}

pub fn random_element(rng: &mut ChaCha8Rng, ell: usize) -> CanonicalElement {
    let mut a = CanonicalElement::zero(ell);
    for _ in 0..rng.gen_range(0..4) {
        a.lambda.insert(rng.gen_range(-3..=3), rng.gen_range(-1.0..1.0));
    }
    if ell > 0 {
        for _ in 0..rng.gen_range(0..3) {
            let inner = random_element(rng, ell - 1);
            a.blocks.push(Block { j: rng.gen_range(0..3), k: rng.gen_range(0..3), a: inner });
        }
    }
    a
}

/// `op_norm(a) <= ||a||_0` and `||a*||_m = ||a||_m` on 50 seeded elements per rank.
fn seminorms(s: &Settings, ctx: &QContext, out: &mut Vec<Assertion>) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    for ell in 0..=ctx.ell.min(2) {
        let sp = torus_space(ctx, ell, ctx.cutoff)?;
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let a = random_element(&mut rng, ell);
            let op = canonical_to_operator(&a, &sp).map_err(classify)?;
            worst = worst.max(op.op_norm() - canonical_seminorm(&a, 0));
            let adj = a.adjoint();
            for m in 0..=4 {
                let norm = canonical_seminorm(&a, m);
                worst = worst.max((canonical_seminorm(&adj, m) - norm).abs() / norm.max(1.0));
            }
        }
        out.push(Assertion {
            check: "seminorms/contract".into(),
            params: json!({ "rank": ell, "samples": 50, "seminorm": "truncated seminorm", "cutoff": ctx.cutoff }),
            max_deviation: worst.max(0.0),
            tolerance: s.tol_or(1e-9),
        });
    }
    Ok(())
}

/// Direct against factorized coefficients on 100 seeded patterns.
fn cg(s: &Settings, ctx: &QContext, out: &mut Vec<Assertion>) -> Result<()> {
    if ctx.q == 0.0 {
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let ell = ctx.ell;
    let mut pool = Vec::new();
    for n in 0..=3 {
        for k in 0..=3 {
            pool.extend(enumerate_patterns(&lambda_nk(ell, n, k)).map_err(classify)?);
        }
    }
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let r = pool.choose(&mut rng).expect("non-empty pattern pool");
        for j in 1..=ell + 1 {
            for m in enumerate_moves(j, ell).map_err(classify)? {
                if apply_move(r, &m).map_err(classify)?.is_none() {
                    continue;
                }
                let d = cg_direct(j, r, &m, ctx).map_err(classify)?;
                let f = cg_factorized(j, r, &m, ctx).map_err(classify)?.value;
                worst = worst.max((d - f).abs() / d.abs().max(1.0));
            }
        }
    }
    out.push(Assertion {
        check: "cg/dual-form".into(),
        params: json!({ "samples": 100 }),
        max_deviation: worst,
        tolerance: s.tol_or(1e-12),
    });
    Ok(())
}
