use arealab_core::bosonic::{
    self, half_chain_negativity_closed_form, log_negativity, negativity_area_scan_2d, HarmonicModel,
};
use arealab_core::error::Result;
use arealab_core::fermionic::{self, entropy_scan_2d, halfspace_scan, QuadraticFermionModel};
use arealab_core::lattice::{Boundary, LatticeGraph, Region};
use arealab_core::numerics::fit_log_scaling;

use super::{band, par_map, Outcome};
use crate::config::ExperimentConfig;
use crate::report::{fmt12, Cell, FitSummary, Table, Verdict};

fn half_negativity(n: usize, a: f64, b: f64) -> Result<f64> {
    let s = bosonic::ground_state(&HarmonicModel::chain(n, a, b, Boundary::Periodic)?)?;
    log_negativity(&s, &Region::interval(0, n / 2))
}

pub(super) fn halfchain_negativity(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<()> {
    let mut grid = Vec::new();
    for &a in &cfg.floats("a") {
        for &b in &cfg.floats("b") {
            for &n in &cfg.usizes("n") {
                grid.push((a, b, n));
            }
        }
    }
    let values =
        par_map(&grid, |&(a, b, n)| Ok((half_negativity(n, a, b)?, half_chain_negativity_closed_form(a, b)?.value)))?;
    out.table = Table::new(&["a", "b", "n", "negativity", "closed_form", "abs_error"]);
    let mut worst: f64 = 0.0;
    for (&(a, b, n), &(num, cf)) in grid.iter().zip(&values) {
        out.table.push(vec![a.into(), b.into(), n.into(), num.into(), cf.into(), (num - cf).abs().into()]);
        worst = worst.max((num - cf).abs());
    }
    let spread = grid
        .chunks(cfg.usizes("n").len())
        .zip(values.chunks(cfg.usizes("n").len()))
        .map(|(_, v)| {
            let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| (l.min(x.0), h.max(x.0)));
            hi - lo
        })
        .fold(0.0, f64::max);
    out.verdicts.push(Verdict::new(
        1,
        "closed_form",
        "max |E_N − ¼log2((a+2|b|)/(a−2|b|))|",
        worst,
        "≤ 1e-9",
        worst <= 1e-9,
    ));
    out.verdicts.push(Verdict::new(
        1,
        "n_independence",
        "max spread of E_N over chain lengths",
        spread,
        "≤ 1e-9",
        spread <= 1e-9,
    ));
    Ok(())
}

pub(super) fn kg_divergence(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<()> {
    let mut grid = Vec::new();
    for &n in &cfg.usizes("n") {
        for &m in &cfg.floats("mass") {
            grid.push((n, m));
        }
    }
    let values = par_map(&grid, |&(n, m)| {
        let s = bosonic::ground_state(&HarmonicModel::klein_gordon(n, m)?)?;
        log_negativity(&s, &Region::interval(0, n / 2))
    })?;
    out.table = Table::new(&["n", "mass", "negativity", "formula", "abs_error"]);
    let mut worst: f64 = 0.0;
    for (&(n, m), &v) in grid.iter().zip(&values) {
        let f = 0.25 * (1.0 + 4.0 * (n * n) as f64 / (m * m)).log2();
        out.table.push(vec![n.into(), m.into(), v.into(), f.into(), (v - f).abs().into()]);
        worst = worst.max((v - f).abs());
    }
    out.verdicts.push(Verdict::new(2, "formula", "max |E_N − ¼log2(1+4N²/m²)|", worst, "≤ 1e-8", worst <= 1e-8));
    Ok(())
}

pub(super) fn boundary(cfg: &ExperimentConfig, name: &str) -> Boundary {
    match cfg.text(name) {
        "open" => Boundary::Open,
        _ => Boundary::Periodic,
    }
}

fn lattice(cfg: &ExperimentConfig, side: &str) -> Result<LatticeGraph> {
    LatticeGraph::cubic(cfg.usize(side), 2, boundary(cfg, "boundary"))
}

pub(super) fn area_2d_boson(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<()> {
    let model = HarmonicModel::nearest_neighbor(lattice(cfg, "side")?, cfg.float("a"), cfg.float("b"))?;
    let state = bosonic::ground_state(&model)?;
    let rows = negativity_area_scan_2d(&model, &state, &cfg.usizes("blocks"))?;
    out.table = Table::new(&["side", "boundary_sites", "cut_edges", "negativity", "per_boundary_site"]);
    for r in &rows {
        out.table.push(vec![r.side.into(), r.area.into(), r.cut_edges.into(), r.value.into(), r.ratio.into()]);
    }
    let b = band(&rows.iter().map(|r| r.ratio).collect::<Vec<_>>());
    out.verdicts.push(Verdict::new(
        8,
        "boson_band",
        "max/min of E_N/s(I) over blocks, gapped 2D boson",
        b,
        "≤ 1.2",
        b <= 1.2,
    ));
    Ok(())
}

pub(super) fn area_2d_fermion(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<()> {
    let g = LatticeGraph::cubic(cfg.usize("side"), 2, Boundary::Periodic)?;
    let gapped =
        fermionic::ground_state(&QuadraticFermionModel::hopping(g.clone(), 1.0, 0.0, cfg.float("gapped_stagger"))?)?;
    let gapless =
        fermionic::ground_state(&QuadraticFermionModel::hopping(g.clone(), 1.0, cfg.float("gapless_onsite"), 0.0)?)?;
    let rg = entropy_scan_2d(&gapped, &g, &cfg.usizes("gapped_blocks"))?;
    let rl = entropy_scan_2d(&gapless, &g, &cfg.usizes("gapless_blocks"))?;
    out.table = Table::new(&["model", "side", "boundary_sites", "entropy", "per_side", "per_side_log"]);
    for (name, rows) in [("gapped", &rg), ("gapless", &rl)] {
        for r in rows.iter() {
            out.table.push(vec![
                name.into(),
                r.side.into(),
                r.area.into(),
                r.entropy.into(),
                r.per_side.into(),
                r.log_ratio.into(),
            ]);
        }
    }
    let bg = band(&rg.iter().map(|r| r.per_side).collect::<Vec<_>>());
    let bl = band(&rl.iter().map(|r| r.log_ratio).collect::<Vec<_>>());
    let growth = rl.windows(2).map(|w| w[1].per_side - w[0].per_side).fold(f64::INFINITY, f64::min);
    out.verdicts.push(Verdict::new(
        8,
        "fermion_gapped_band",
        "max/min of S/n, gapped 2D fermion",
        bg,
        "≤ 1.2",
        bg <= 1.2,
    ));
    out.verdicts.push(Verdict::new(
        8,
        "fermion_gapless_band",
        "max/min of S/(n log2 n), gapless 2D fermion",
        bl,
        "≤ 2",
        bl <= 2.0,
    ));
    out.verdicts.push(Verdict::new(
        8,
        "fermion_gapless_growth",
        "smallest increase of S/n between block sides",
        growth,
        "> 0",
        growth > 0.0,
    ));
    Ok(())
}

pub(super) fn halfspace(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<()> {
    let g = LatticeGraph::grid(&[cfg.usize("length"), cfg.usize("width")], Boundary::Periodic)?;
    let model = QuadraticFermionModel::hopping(g, 1.0, cfg.float("onsite"), 0.0)?;
    let cuts = cfg.usizes("cuts");
    let rows = halfspace_scan(&model, &cuts)?;
    out.table = Table::new(&["cut", "boundary_sites", "entropy", "per_boundary_site"]);
    for (c, r) in cuts.iter().zip(&rows) {
        out.table.push(vec![(*c).into(), r.area.into(), r.entropy.into(), r.per_boundary_site.into()]);
    }
    let pts: Vec<(f64, f64)> = cuts.iter().zip(&rows).map(|(&c, r)| (c as f64, r.per_boundary_site)).collect();
    if pts.iter().filter(|p| p.0 >= cfg.window().0 && p.0 <= cfg.window().1).count() >= 2 {
        out.fit = Some(FitSummary::from(&fit_log_scaling(&pts, cfg.window())?));
    }
    Ok(())
}

pub(super) fn thermal_negativity(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<()> {
    let model = HarmonicModel::nearest_neighbor(lattice(cfg, "side")?, cfg.float("a"), cfg.float("b"))?;
    let blocks = cfg.usizes("blocks");
    out.table = Table::new(&["beta", "side", "boundary_sites", "negativity", "per_boundary_site"]);
    let mut worst: f64 = 0.0;
    let mut detail = Vec::new();
    for &beta in &cfg.floats("beta") {
        let state = bosonic::thermal_state(&model, beta)?;
        let rows = negativity_area_scan_2d(&model, &state, &blocks)?;
        for r in &rows {
            out.table.push(vec![Cell::from(beta), r.side.into(), r.area.into(), r.value.into(), r.ratio.into()]);
        }
        let b = band(&rows.iter().map(|r| r.ratio).collect::<Vec<_>>());
        detail.push(format!("β={}: {}", fmt12(beta), fmt12(b)));
        worst = worst.max(b);
    }
    out.verdicts.push(Verdict::new(
        9,
        "band",
        format!("largest max/min of E_N/s(I) over temperatures ({})", detail.join(", ")),
        worst,
        "≤ 1.5",
        worst <= 1.5,
    ));
    Ok(())
}
