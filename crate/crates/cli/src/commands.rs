//! Subcommand implementations. Each returns `Ok(true)` when every requested
//! computation met its tolerance; `Ok(false)` drives the nonzero exit code.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use num_complex::Complex;
use rayon::prelude::*;

use cvclone::cloner::{
    best_gaussian_for_weights, classical_fidelity, fidelity_pair, heterodyne_overlap_integral,
    max_classical_fidelity_over_random_states, ClonerAncilla, TradeoffContext,
};
use cvclone::conventions::STRICT_TAIL_BUDGET;
use cvclone::fock::{FockSpaceDesc, FockVector};
use cvclone::gauss::{joint_fidelity_operator, WeightPair};
use cvclone::golden::{all_pass, run_all, GoldenConfig};
use cvclone::optics::{run_cloner_with, ClonerRun};
use cvclone::spectral::{dense_spectrum, power_iteration, restricted_dominant};

use crate::output::{emit, Cell, Format, Table};
use crate::{IoArgs, SolverArgs};

type C64 = Complex<f64>;

fn parse_weight_list(s: &str) -> Result<Vec<WeightPair<f64>>> {
    let mut out = Vec::new();
    for (i, pair) in s.split(';').enumerate() {
        let parts: Vec<&str> = pair.split(',').collect();
        if parts.len() != 2 {
            bail!("weight entry {i} must be 'l1,l2', got '{pair}'");
        }
        let l1: f64 = parts[0].trim().parse().context("bad weight")?;
        let l2: f64 = parts[1].trim().parse().context("bad weight")?;
        out.push(WeightPair::new(l1, l2)?);
    }
    Ok(out)
}

fn parse_float_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().context("bad number in list"))
        .collect()
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().context("bad integer in list"))
        .collect()
}

/// Accepts "0.3", "0.5i", "0.3+0.5i", "-0.2-0.1i".
fn parse_complex(s: &str) -> Result<C64> {
    let t = s.trim();
    if let Some(im) = t.strip_suffix('i') {
        // split an optional real part from the imaginary coefficient
        let bytes = im.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-')
                && bytes[k - 1] != b'e'
                && bytes[k - 1] != b'E'
            {
                split = Some(k);
                break;
            }
        }
        match split {
            Some(k) => {
                let re: f64 = im[..k].parse().context("bad real part")?;
                let rest = &im[k..];
                let imag: f64 = if rest == "+" || rest == "-" {
                    format!("{rest}1").parse().unwrap()
                } else {
                    rest.parse().context("bad imaginary part")?
                };
                Ok(C64::new(re, imag))
            }
            None => {
                let imag: f64 = if im.is_empty() || im == "+" || im == "-" {
                    format!("{im}1").parse().unwrap()
                } else {
                    im.parse().context("bad imaginary part")?
                };
                Ok(C64::new(0.0, imag))
            }
        }
    } else {
        Ok(C64::new(t.parse().context("bad real number")?, 0.0))
    }
}

fn parse_complex_list(s: &str) -> Result<Vec<C64>> {
    s.split(',').map(parse_complex).collect()
}

/// Default grid: a uniform central band plus log-spaced endpoint ratios on
/// both sides, where the curve is interesting.
fn default_weight_grid() -> Vec<WeightPair<f64>> {
    let mut grid = Vec::new();
    let ratios = [0.001, 0.003, 0.01, 0.03, 0.1];
    for &r in &ratios {
        grid.push(WeightPair::from_ratio(r).expect("valid ratio"));
    }
    let mut l1 = 0.95;
    while l1 >= 0.05 - 1e-12 {
        grid.push(WeightPair::new(l1, 1.0 - l1).expect("valid weights"));
        l1 -= 0.05;
    }
    for &r in ratios.iter().rev() {
        grid.push(WeightPair::from_ratio(r).expect("valid ratio").swapped());
    }
    grid
}

pub fn tradeoff(
    cutoff: usize,
    weights: Option<String>,
    ratios: Option<String>,
    gaussian_baseline: bool,
    solver: &SolverArgs,
    io: &IoArgs,
) -> Result<bool> {
    let mut grid = match &weights {
        Some(s) => parse_weight_list(s)?,
        None => default_weight_grid(),
    };
    if let Some(r) = &ratios {
        for ratio in parse_float_list(r)? {
            grid.push(WeightPair::from_ratio(ratio)?);
        }
    }

    type PointOutcome = (
        WeightPair<f64>,
        Result<cvclone::cloner::TradeoffPoint<f64>, String>,
    );
    let ctx = TradeoffContext::<f64>::new(cutoff)?;
    let mut rows: Vec<PointOutcome> = grid
        .par_iter()
        .map(|w| {
            (
                *w,
                ctx.point(w, solver.tol, solver.max_iter)
                    .map_err(|e| e.to_string()),
            )
        })
        .collect();
    rows.sort_by(|a, b| {
        let fa = a.1.as_ref().map(|p| p.f1).unwrap_or(f64::NAN);
        let fb = b.1.as_ref().map(|p| p.f1).unwrap_or(f64::NAN);
        fa.partial_cmp(&fb).unwrap_or(std::cmp::Ordering::Equal)
    });

    let mut columns = vec![
        "lambda1",
        "lambda2",
        "f1",
        "f2",
        "objective",
        "cutoff",
        "residual",
        "status",
    ];
    if gaussian_baseline {
        columns.push("family");
    }
    let mut table = Table::new(columns);
    let mut clean = true;
    for (w, point) in &rows {
        match point {
            Ok(p) => {
                let status = if p.converged { "ok" } else { "unconverged" };
                if !p.converged {
                    clean = false;
                }
                let mut row: Vec<Cell> = vec![
                    p.lambda1.into(),
                    p.lambda2.into(),
                    p.f1.into(),
                    p.f2.into(),
                    p.objective.into(),
                    p.cutoff.into(),
                    p.residual.into(),
                    status.into(),
                ];
                if gaussian_baseline {
                    row.push("optimal".into());
                }
                table.push(row);
            }
            Err(msg) => {
                clean = false;
                let mut row: Vec<Cell> = vec![
                    w.l1().into(),
                    w.l2().into(),
                    f64::NAN.into(),
                    f64::NAN.into(),
                    f64::NAN.into(),
                    cutoff.into(),
                    f64::NAN.into(),
                    format!("error: {msg}").into(),
                ];
                if gaussian_baseline {
                    row.push("optimal".into());
                }
                table.push(row);
            }
        }
    }
    if gaussian_baseline {
        let mut base: Vec<(WeightPair<f64>, cvclone::cloner::GaussianFamilyPoint<f64>)> = grid
            .iter()
            .map(|w| (*w, best_gaussian_for_weights(w)))
            .collect();
        base.sort_by(|a, b| {
            a.1.f1
                .partial_cmp(&b.1.f1)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        for (w, g) in base {
            let wn = w.normalized();
            table.push(vec![
                wn.l1().into(),
                wn.l2().into(),
                g.f1.into(),
                g.f2.into(),
                (wn.l1() * g.f1 + wn.l2() * g.f2).into(),
                cutoff.into(),
                0.0.into(),
                "ok".into(),
                "gaussian".into(),
            ]);
        }
    }
    emit(&io.output, &table.render(io.format))?;
    Ok(clean)
}

pub fn golden(
    cutoff: usize,
    circuit_cutoff: usize,
    seed: u64,
    solver: &SolverArgs,
    output: &Option<PathBuf>,
    format: Format,
) -> Result<bool> {
    let cfg = GoldenConfig {
        two_mode_cutoff: cutoff,
        circuit_cutoff,
        tol: solver.tol,
        max_iter: solver.max_iter,
        seed,
    };
    let checks = run_all(&cfg);
    let pass = all_pass(&checks);
    match format {
        Format::Json => {
            let report = serde_json::json!({
                "config": {
                    "two_mode_cutoff": cfg.two_mode_cutoff,
                    "circuit_cutoff": cfg.circuit_cutoff,
                    "tol": cfg.tol,
                    "max_iter": cfg.max_iter,
                    "seed": cfg.seed,
                },
                "checks": checks.iter().map(|c| serde_json::json!({
                    "criterion": c.criterion,
                    "id": c.id,
                    "measured": c.measured,
                    "target": c.target,
                    "tolerance": c.tolerance,
                    "comparison": c.comparison.label(),
                    "pass": c.pass,
                    "detail": c.detail,
                })).collect::<Vec<_>>(),
                "all_pass": pass,
            });
            let mut s = serde_json::to_string_pretty(&report)?;
            s.push('\n');
            emit(output, &s)?;
        }
        Format::Csv => {
            let mut table = Table::new(vec![
                "criterion",
                "id",
                "measured",
                "target",
                "tolerance",
                "comparison",
                "pass",
                "detail",
            ]);
            for c in &checks {
                table.push(vec![
                    c.criterion.into(),
                    c.id.into(),
                    c.measured.into(),
                    c.target.into(),
                    c.tolerance.into(),
                    c.comparison.label().into(),
                    c.pass.into(),
                    c.detail.clone().into(),
                ]);
            }
            emit(output, &table.render(Format::Csv))?;
        }
    }
    Ok(pass)
}

pub fn truncation(cutoff: usize, max_photons: &str, io: &IoArgs) -> Result<bool> {
    let caps = parse_usize_list(max_photons)?;
    if caps.is_empty() {
        bail!("need at least one photon cap");
    }
    let space = FockSpaceDesc::new(2, cutoff)?;
    let (f1, f2) = cvclone::gauss::bmode_observables::<f64>(space)?;
    let fsym = f1.add(&f2)?.scale(0.5);
    let mut table = Table::new(vec!["max_photon", "fidelity"]);
    for &cap in &caps {
        let mut basis = Vec::new();
        let mut n = 0;
        while n <= cap.min(cutoff) {
            basis.push(FockVector::<f64>::basis_state(space, &[n, n])?);
            n += 2;
        }
        let res = restricted_dominant(&fsym, &basis)?;
        table.push(vec![cap.into(), res.eigenvalue.into()]);
    }
    emit(&io.output, &table.render(io.format))?;
    Ok(true)
}

pub fn joint(circuit_cutoff: usize, block_cutoff: Option<usize>, io: &IoArgs) -> Result<bool> {
    let block = block_cutoff.unwrap_or(circuit_cutoff / 2).max(1);
    let space = FockSpaceDesc::new(2, block)?;
    let jf = joint_fidelity_operator::<f64>(space, circuit_cutoff)?;
    let spectrum = dense_spectrum(&jf.operator)?;
    let top = power_iteration(&jf.operator, &FockVector::vacuum(space), 1e-10, 100_000)
        .map_err(cvclone::Error::from)?;
    let overlap = top.eigenvector.dot(&FockVector::vacuum(space))?.norm();
    let d = space.dim_per_mode();

    let mut table = Table::new(vec!["metric", "value"]);
    table.push(vec!["top_eigenvalue".into(), spectrum[0].into()]);
    table.push(vec![
        "vacuum_expectation".into(),
        jf.operator.entry(0, 0).re.into(),
    ]);
    table.push(vec![
        "one_one_expectation".into(),
        jf.operator.entry(d + 1, d + 1).re.into(),
    ]);
    table.push(vec!["vacuum_overlap".into(), overlap.into()]);
    table.push(vec!["vacuum_tail".into(), jf.vacuum_tail.into()]);
    table.push(vec!["max_column_tail".into(), jf.max_column_tail.into()]);
    table.push(vec!["block_cutoff".into(), block.into()]);
    table.push(vec!["circuit_cutoff".into(), circuit_cutoff.into()]);
    emit(&io.output, &table.render(io.format))?;
    Ok(jf.cutoff_adequate())
}

pub fn classical(cutoff: usize, samples: usize, seed: u64, io: &IoArgs) -> Result<bool> {
    let space = FockSpaceDesc::new(2, cutoff)?;
    let max_random = max_classical_fidelity_over_random_states(space, samples, seed)?;
    let vac = FockVector::<f64>::vacuum(FockSpaceDesc::new(1, cutoff)?);
    let vacuum_fidelity = classical_fidelity(&vac)?;
    let heterodyne = heterodyne_overlap_integral(6.0, 600);

    let mut table = Table::new(vec!["metric", "value"]);
    table.push(vec!["vacuum_fidelity".into(), vacuum_fidelity.into()]);
    table.push(vec!["max_random_fidelity".into(), max_random.into()]);
    table.push(vec!["heterodyne_integral".into(), heterodyne.into()]);
    table.push(vec!["samples".into(), samples.into()]);
    emit(&io.output, &table.render(io.format))?;

    Ok(vacuum_fidelity == 0.5 && max_random <= 0.5 + 1e-12 && (heterodyne - 0.5).abs() <= 1e-6)
}

pub fn optical_verify(
    circuit_cutoff: usize,
    alphas: &str,
    max_deviation: f64,
    solver: &SolverArgs,
    io: &IoArgs,
) -> Result<bool> {
    let alphas = parse_complex_list(alphas)?;
    if alphas.is_empty() {
        bail!("need at least one displacement");
    }
    let space = FockSpaceDesc::new(2, circuit_cutoff)?;
    let ancillas = vec![
        ClonerAncilla::<f64>::vacuum(space),
        ClonerAncilla::<f64>::optimal(space, solver.tol, solver.max_iter)?,
    ];

    let mut table = Table::new(vec![
        "ancilla",
        "alpha_re",
        "alpha_im",
        "f1",
        "f2",
        "f_joint",
        "tail_mass",
    ]);
    let mut clean = true;
    for anc in &ancillas {
        let mut runs: Vec<(C64, ClonerRun<f64>)> = Vec::new();
        for &alpha in &alphas {
            let run = run_cloner_with(anc, alpha, circuit_cutoff, 1e-12, 1.0)?;
            table.push(vec![
                anc.kind().tag().into(),
                alpha.re.into(),
                alpha.im.into(),
                run.f1.into(),
                run.f2.into(),
                run.f_joint.into(),
                run.tail_mass.into(),
            ]);
            runs.push((alpha, run));
        }
        // covariance: deviation from the vacuum-input run
        let base = runs
            .iter()
            .find(|(a, _)| a.norm_sqr() == 0.0)
            .map(|(_, r)| *r)
            .unwrap_or(runs[0].1);
        for (_, r) in &runs {
            let dev = (r.f1 - base.f1).abs().max((r.f2 - base.f2).abs());
            if dev > max_deviation {
                eprintln!(
                    "covariance deviation {dev:.3e} exceeds {max_deviation:.1e} for {}",
                    anc.kind().tag()
                );
                clean = false;
            }
        }
        // operator picture vs circuit
        let (f1_op, f2_op) = fidelity_pair(anc)?;
        let agree = (base.f1 - f1_op).abs().max((base.f2 - f2_op).abs());
        if agree > max_deviation {
            eprintln!(
                "operator/circuit disagreement {agree:.3e} exceeds {max_deviation:.1e} for {}",
                anc.kind().tag()
            );
            clean = false;
        }
        if base.tail_mass > STRICT_TAIL_BUDGET && anc.kind().tag() == "gaussian" {
            eprintln!(
                "vacuum-ancilla tail mass {:.3e} exceeds the strict budget {STRICT_TAIL_BUDGET:.1e}",
                base.tail_mass
            );
            clean = false;
        }
    }
    emit(&io.output, &table.render(io.format))?;
    Ok(clean)
}
