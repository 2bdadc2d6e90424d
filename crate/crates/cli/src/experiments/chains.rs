use arealab_core::bosonic::{self, HarmonicModel};
use arealab_core::error::Result;
use arealab_core::fermionic::{
    block_entropy, disorder_average, single_copy_entanglement, DisorderEnsemble, FermionicGaussianState, XyParams,
};
use arealab_core::lattice::{Boundary, Region};
use arealab_core::numerics::fit_log_scaling;

use super::{par_map, window_sizes, Outcome};
use crate::config::ExperimentConfig;
use crate::report::{Cell, FitSummary, Table, Verdict};

fn xy_state(cfg: &ExperimentConfig, gamma: f64, lambda: f64) -> Result<FermionicGaussianState> {
    Ok(XyParams::new(gamma, lambda, cfg.usize("n_sites"), Boundary::Periodic)?.periodic_state())
}

fn entropies(state: &FermionicGaussianState, sizes: &[usize], alpha: f64) -> Result<Vec<f64>> {
    par_map(sizes, |&n| block_entropy(state, &Region::interval(0, n), alpha))
}

fn points(sizes: &[usize], values: &[f64]) -> Vec<(f64, f64)> {
    sizes.iter().zip(values).map(|(&n, &v)| (n as f64, v)).collect()
}

pub(super) fn xx_scaling(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<()> {
    let sizes = window_sizes(cfg);
    let s = entropies(&xy_state(cfg, 0.0, 0.0)?, &sizes, 1.0)?;
    out.table = Table::new(&["n", "entropy"]);
    for (&n, &v) in sizes.iter().zip(&s) {
        out.table.push(vec![n.into(), v.into()]);
    }
    let fit = fit_log_scaling(&points(&sizes, &s), cfg.window())?;
    out.fit = Some(FitSummary::from(&fit));
    let dev = (fit.slope - 1.0 / 3.0).abs();
    out.verdicts.push(Verdict::new(
        3,
        "slope",
        "XX entropy slope versus log2 n",
        fit.slope,
        "|slope − 1/3| ≤ 0.02",
        dev <= 0.02,
    ));
    Ok(())
}

pub(super) fn ising_scaling(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<()> {
    let sizes = window_sizes(cfg);
    let critical = entropies(&xy_state(cfg, 1.0, cfg.float("lambda"))?, &sizes, 1.0)?;
    let gapped_state = xy_state(cfg, 1.0, cfg.float("gapped_lambda"))?;
    let gapped = entropies(&gapped_state, &sizes, 1.0)?;
    let harmonic = HarmonicModel::chain(
        cfg.usize("harmonic_sites"),
        cfg.float("harmonic_a"),
        cfg.float("harmonic_b"),
        Boundary::Periodic,
    )?;
    let hstate = bosonic::ground_state(&harmonic)?;
    let hs = par_map(&sizes, |&n| bosonic::entropy(&hstate, &Region::interval(0, n), 1.0))?;
    out.table = Table::new(&["n", "critical_ising", "gapped_ising", "gapped_harmonic"]);
    for i in 0..sizes.len() {
        out.table.push(vec![sizes[i].into(), critical[i].into(), gapped[i].into(), hs[i].into()]);
    }
    let fit = fit_log_scaling(&points(&sizes, &critical), cfg.window())?;
    out.fit = Some(FitSummary::from(&fit));
    let dev = (fit.slope - 1.0 / 6.0).abs();
    out.verdicts.push(Verdict::new(
        4,
        "slope",
        "critical Ising entropy slope versus log2 n",
        fit.slope,
        "|slope − 1/6| ≤ 0.02",
        dev <= 0.02,
    ));

    let top = cfg.window().1.floor() as usize;
    let (big, half) = (Region::interval(0, top), Region::interval(0, top / 2));
    let d_ising = (block_entropy(&gapped_state, &big, 1.0)? - block_entropy(&gapped_state, &half, 1.0)?).abs();
    let d_harm = (bosonic::entropy(&hstate, &big, 1.0)? - bosonic::entropy(&hstate, &half, 1.0)?).abs();
    let tol = format!("|S({top}) − S({})| < 1e-3", top / 2);
    out.verdicts.push(Verdict::new(
        4,
        "gapped_ising",
        "gapped Ising entropy saturates",
        d_ising,
        tol.clone(),
        d_ising < 1e-3,
    ));
    out.verdicts.push(Verdict::new(
        4,
        "gapped_harmonic",
        "gapped harmonic entropy saturates",
        d_harm,
        tol,
        d_harm < 1e-3,
    ));
    Ok(())
}

pub(super) fn renyi_scaling(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<()> {
    let alpha = cfg.float("alpha");
    let sizes = window_sizes(cfg);
    let s = entropies(&xy_state(cfg, 0.0, 0.0)?, &sizes, alpha)?;
    out.table = Table::new(&["n", "renyi_entropy"]);
    for (&n, &v) in sizes.iter().zip(&s) {
        out.table.push(vec![n.into(), v.into()]);
    }
    let fit = fit_log_scaling(&points(&sizes, &s), cfg.window())?;
    out.fit = Some(FitSummary::from(&fit));
    let target = (1.0 + 1.0 / alpha) / 6.0;
    out.verdicts.push(Verdict::new(
        5,
        "slope",
        format!("XX Renyi-{alpha} entropy slope versus log2 n"),
        fit.slope,
        format!("|slope − {}| ≤ 0.03", crate::report::fmt12(target)),
        (fit.slope - target).abs() <= 0.03,
    ));
    Ok(())
}

pub(super) fn single_copy(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<()> {
    let sizes = window_sizes(cfg);
    let state = xy_state(cfg, 0.0, 0.0)?;
    let rows = par_map(&sizes, |&n| {
        let r = Region::interval(0, n);
        Ok((block_entropy(&state, &r, 1.0)?, single_copy_entanglement(&state, &r)?))
    })?;
    out.table = Table::new(&["n", "entropy", "single_copy_smooth", "single_copy_floor"]);
    for (&n, (s, e)) in sizes.iter().zip(&rows) {
        out.table.push(vec![n.into(), (*s).into(), e.smooth.into(), e.floor.into()]);
    }
    let s: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let e: Vec<f64> = rows.iter().map(|r| r.1.smooth).collect();
    let fs = fit_log_scaling(&points(&sizes, &s), cfg.window())?;
    let fe = fit_log_scaling(&points(&sizes, &e), cfg.window())?;
    out.fit = Some(FitSummary::from(&fs));
    let ratio = fe.slope / fs.slope;
    out.verdicts.push(Verdict::new(
        6,
        "ratio",
        format!(
            "single-copy slope {} over entropy slope {}",
            crate::report::fmt12(fe.slope),
            crate::report::fmt12(fs.slope)
        ),
        ratio,
        "|ratio − 0.5| ≤ 0.05",
        (ratio - 0.5).abs() <= 0.05,
    ));
    Ok(())
}

pub(super) fn disorder(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<()> {
    let sizes = window_sizes(cfg);
    let n = cfg.usize("n_sites");
    let dirty = disorder_average(
        &DisorderEnsemble::RandomXx { low: cfg.float("low"), high: cfg.float("high") },
        n,
        &sizes,
        cfg.usize("samples"),
        cfg.seed,
    )?;
    // equal couplings: every sample is the same clean chain
    let clean = disorder_average(&DisorderEnsemble::RandomXx { low: 1.0, high: 1.0 }, n, &sizes, 2, cfg.seed)?;
    out.table = Table::new(&["n", "mean_entropy", "stderr", "clean_entropy"]);
    for (d, c) in dirty.rows.iter().zip(&clean.rows) {
        out.table.push(vec![d.n.into(), d.mean.into(), d.stderr.into(), Cell::from(c.mean)]);
    }
    let pts = |rows: &[arealab_core::fermionic::DisorderRow]| -> Vec<(f64, f64)> {
        rows.iter().map(|r| (r.n as f64, r.mean)).collect()
    };
    let fd = fit_log_scaling(&pts(&dirty.rows), cfg.window())?;
    let fc = fit_log_scaling(&pts(&clean.rows), cfg.window())?;
    out.fit = Some(FitSummary::from(&fd));
    out.verdicts.push(Verdict::new(
        16,
        "slope",
        format!("disordered slope over {} samples ({} skipped)", dirty.used, dirty.skipped),
        fd.slope,
        format!("< clean slope {}", crate::report::fmt12(fc.slope)),
        fd.slope < fc.slope,
    ));
    Ok(())
}
