use arealab_core::error::Result;
use arealab_core::fermionic::{self, block_entropy, QuadraticFermionModel};
use arealab_core::lattice::{Boundary, LatticeGraph, Region};
use arealab_core::oracle::{ground_state_dense, propagate_dense, reduced_entropy, DenseSpinSystem};
use arealab_core::tensor::{
    dmrg_ground_state, tebd_evolve, DmrgConfig, LocalHamiltonian1D, MatrixProductState, TebdConfig,
};
use num_complex::Complex64;

use super::{linear_fit, Outcome};
use crate::config::ExperimentConfig;
use crate::report::{Cell, FitSummary, Table, Verdict};

const ED_BOND: usize = 256;

pub(super) fn quench(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<()> {
    let n = cfg.usize("n_sites");
    let g = cfg.float("g");
    let h = LocalHamiltonian1D::ising(n, 1.0, g)?;
    let tc = TebdConfig { dt: cfg.float("dt"), max_bond: cfg.usize("bond_dim") };
    let (t_block, t_max) = (cfg.float("t_block"), cfg.float("t_max"));
    let blocks = cfg.usizes("blocks");
    out.table = Table::new(&["series", "x", "value"]);

    let mut m = MatrixProductState::<Complex64>::basis_product(n, 2, 0)?;
    let mut history: Vec<(f64, f64)> = vec![(0.0, m.cut_entropy(n / 2, 1.0)?)];
    let mut discarded: f64 = 0.0;
    let mut warned = false;
    let mut block_entropies = Vec::new();
    let mut t0 = 0.0;
    for stop in [t_block, t_max] {
        if stop > t0 {
            let rep = tebd_evolve(&mut m, &h, stop - t0, &tc)?;
            history.extend(rep.times.iter().map(|t| t + t0).zip(rep.half_entropy.iter().copied()));
            discarded += rep.discarded.iter().sum::<f64>();
            warned |= rep.fidelity_warning;
            t0 = stop;
        }
        if stop == t_block && block_entropies.is_empty() {
            for &b in &blocks {
                block_entropies.push(m.cut_entropy(b, 1.0)?);
            }
        }
    }
    for &(t, s) in &history {
        out.table.push(vec!["half_entropy".into(), t.into(), s.into()]);
    }
    for (&b, &s) in blocks.iter().zip(&block_entropies) {
        out.table.push(vec!["block_entropy".into(), b.into(), s.into()]);
    }
    out.table.push(vec!["discarded_weight".into(), t_max.into(), discarded.into()]);

    let (lo, hi) = cfg.window();
    let pts: Vec<(f64, f64)> = history.iter().copied().filter(|&(t, _)| t >= lo - 1e-9 && t <= hi + 1e-9).collect();
    let (slope, intercept, residual) = linear_fit(&pts);
    out.fit = Some(FitSummary { slope, intercept, residual, window: (lo, hi), points: pts.len() });
    out.verdicts.push(Verdict::new(
        12,
        "growth",
        format!("slope of S(n/2) against t{}", if warned { " (truncation above warning level)" } else { "" }),
        slope,
        "≥ 0.1",
        slope >= 0.1,
    ));
    let sat =
        block_entropies.last().copied().unwrap_or(f64::NAN) - block_entropies.first().copied().unwrap_or(f64::NAN);
    out.verdicts.push(Verdict::new(
        12,
        "saturation",
        format!("S({}) − S({}) at t = {t_block}", blocks.last().unwrap_or(&0), blocks.first().unwrap_or(&0)),
        sat,
        "< 0.05",
        sat < 0.05,
    ));

    let ne = cfg.usize("ed_sites");
    let te = cfg.float("ed_time");
    let sys = DenseSpinSystem::ising(ne, 1.0, g, Boundary::Open)?;
    let mut small = MatrixProductState::<Complex64>::basis_product(ne, 2, 0)?;
    let exact = propagate_dense(&sys, &small.to_dense()?, te)?;
    tebd_evolve(
        &mut small,
        &LocalHamiltonian1D::ising(ne, 1.0, g)?,
        te,
        &TebdConfig { dt: cfg.float("ed_dt"), max_bond: ED_BOND },
    )?;
    let infidelity = 1.0 - exact.dotc(&small.to_dense()?).norm();
    out.table.push(vec!["ed_infidelity".into(), te.into(), infidelity.into()]);
    out.verdicts.push(Verdict::new(
        12,
        "ed_overlap",
        format!("1 − |⟨ψ_exact|ψ_TEBD⟩| for {ne} sites at t = {te}"),
        infidelity,
        "≤ 1e-8",
        infidelity <= 1e-8,
    ));
    Ok(())
}

pub(super) fn dmrg_vs_ed(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<()> {
    let n = cfg.usize("n_sites");
    let ising = cfg.text("model") == "ising";
    let bond = match cfg.usize("bond_dim") {
        0 if ising => 16,
        0 => 32,
        d => d,
    };
    let (h, sys) = if ising {
        let g = cfg.float("g");
        (LocalHamiltonian1D::ising(n, 1.0, g)?, DenseSpinSystem::ising(n, 1.0, g, Boundary::Open)?)
    } else {
        (LocalHamiltonian1D::xx(n)?, DenseSpinSystem::xx(n, Boundary::Open)?)
    };
    let mut dc = DmrgConfig::new(bond);
    dc.seed = cfg.seed;
    let res = dmrg_ground_state::<f64>(&h, &dc)?;
    let ed = ground_state_dense(&sys)?;
    out.table = Table::new(&["quantity", "cut", "dmrg", "exact", "gaussian", "abs_diff"]);
    let rel = ((res.energy - ed.energy) / ed.energy).abs();
    out.table.push(vec![
        "energy".into(),
        Cell::Text(String::new()),
        res.energy.into(),
        ed.energy.into(),
        f64::NAN.into(),
        (res.energy - ed.energy).abs().into(),
    ]);

    let profile = res.mps.entropy_profile(1.0)?;
    let gaussian = if ising {
        None
    } else {
        let model = QuadraticFermionModel::hopping(LatticeGraph::chain(n, Boundary::Open)?, 0.5, 0.0, 0.0)?;
        Some(fermionic::ground_state(&model)?)
    };
    let mut worst: f64 = 0.0;
    let mut worst_gauss: f64 = 0.0;
    for k in 1..n {
        let region = Region::interval(0, k);
        let exact = reduced_entropy(&ed.vector, &region, 1.0)?;
        let gs = match &gaussian {
            Some(s) => block_entropy(s, &region, 1.0)?,
            None => f64::NAN,
        };
        let mut diff = (profile[k - 1] - exact).abs();
        if gs.is_finite() {
            worst_gauss = worst_gauss.max((gs - exact).abs());
            diff = diff.max((gs - exact).abs()).max((gs - profile[k - 1]).abs());
        }
        if ising || k == n / 2 {
            worst = worst.max(diff);
        }
        out.table.push(vec!["entropy".into(), k.into(), profile[k - 1].into(), exact.into(), gs.into(), diff.into()]);
    }
    if ising {
        out.verdicts.push(Verdict::new(11, "energy", "relative DMRG energy error", rel, "≤ 1e-8", rel <= 1e-8));
        out.verdicts.push(Verdict::new(
            11,
            "entropies",
            "largest cut-entropy difference, DMRG vs exact",
            worst,
            "≤ 1e-6",
            worst <= 1e-6,
        ));
    } else {
        out.verdicts.push(Verdict::new(
            14,
            "gaussian_ed",
            "largest cut-entropy difference, Gaussian vs exact",
            worst_gauss,
            "≤ 1e-6",
            worst_gauss <= 1e-6,
        ));
        out.verdicts.push(Verdict::new(
            14,
            "half_cut",
            "largest pairwise half-chain entropy difference among DMRG, exact and Gaussian",
            worst,
            "≤ 1e-6",
            worst <= 1e-6,
        ));
    }
    Ok(())
}
