use std::f64::consts::PI;

use arealab_core::bosonic::{classical_mutual_information, HarmonicModel};
use arealab_core::error::Result;
use arealab_core::lattice::{Boundary, LatticeGraph, Region};
use arealab_core::oracle::{
    classical_spin_mutual_information, thermal_mutual_information, ClassicalIsing, DenseSpinSystem,
};
use arealab_core::stabilizer::{
    parse_partition, square_sectors, topological_entropy, toric_code, GraphState, KP_TORUS3, KP_TORUS3_ROTATED,
    KP_TORUS3_SHIFTED,
};
use arealab_core::toeplitz::{convergence_check, FhFactor, Symbol};
use num_complex::Complex64;

use super::{band, Outcome};
use crate::config::ExperimentConfig;
use crate::report::{Cell, Table, Verdict};

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn fh_symbol(name: &str) -> Result<Symbol> {
    match name {
        "constant" => Symbol::constant(real(2.0)),
        "single-jump" => Symbol::new(|_| real(1.0), vec![FhFactor { phi: 0.0, alpha: 0.0, beta: 0.5 }]),
        _ => Symbol::new(
            |p| real(3.0 + p.cos()),
            vec![FhFactor { phi: PI / 2.0, alpha: 0.0, beta: 0.3 }, FhFactor { phi: 1.5 * PI, alpha: 0.0, beta: -0.2 }],
        ),
    }
}

pub(super) fn fh_check(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<()> {
    let names: Vec<&str> = match cfg.text("symbol") {
        "all" => vec!["constant", "single-jump", "two-jump"],
        one => vec![one],
    };
    let grid = cfg.usizes("grid");
    out.table = Table::new(&["symbol", "n", "log_abs_det", "log_prediction", "ratio", "singular"]);
    for name in names {
        let rep = convergence_check(&fh_symbol(name)?, &grid)?;
        for r in &rep.rows {
            out.table.push(vec![
                name.into(),
                r.n.into(),
                r.log_abs_det.into(),
                r.log_prediction.into(),
                r.ratio.into(),
                Cell::from(if r.singular { "true" } else { "false" }),
            ]);
        }
        if name == "constant" {
            let dev = rep.rows.iter().map(|r| (r.ratio - 1.0).abs()).fold(0.0, f64::max);
            out.verdicts.push(Verdict::new(
                7,
                "constant",
                "max |ratio − 1| for a constant symbol",
                dev,
                "≤ 1e-12",
                dev <= 1e-12,
            ));
        } else {
            let last = rep.changes.last().copied().unwrap_or(f64::NAN);
            let check = name.replace('-', "_");
            out.verdicts.push(Verdict::new(
                7,
                &check,
                format!("relative ratio change between the last two orders, {name} symbol"),
                last,
                "ratio changes shrink and the last is below the convergence threshold",
                rep.pass,
            ));
        }
    }
    Ok(())
}

const PLANAR_SIDE: usize = 11;
const PLANAR_CUTS: [(f64, f64); 4] = [(3.0, 0.0), (4.0, 30.0), (4.0, 90.0), (3.0, 60.0)];

pub(super) fn topo(_cfg: &ExperimentConfig, out: &mut Outcome) -> Result<()> {
    out.table = Table::new(&["state", "partition", "size_a", "size_b", "size_c", "topological_entropy"]);
    let toric = toric_code(3)?;
    let mut toric_ok = true;
    let mut toric_worst: f64 = 0.0;
    for (label, text) in
        [("torus3", KP_TORUS3), ("torus3_rotated", KP_TORUS3_ROTATED), ("torus3_shifted", KP_TORUS3_SHIFTED)]
    {
        let [a, b, c] = parse_partition(text)?;
        let v = topological_entropy(&toric, &a, &b, &c)?;
        toric_ok &= v == -1;
        toric_worst = toric_worst.max((v + 1).abs() as f64);
        out.table.push(vec![
            "toric_code".into(),
            label.into(),
            a.len().into(),
            b.len().into(),
            c.len().into(),
            Cell::Int(v),
        ]);
    }
    let g = LatticeGraph::cubic(PLANAR_SIDE, 2, Boundary::Open)?;
    let cluster = GraphState::new(g.clone()).tableau();
    let mut graph_worst: f64 = 0.0;
    for (r, offset) in PLANAR_CUTS {
        let [a, b, c] = square_sectors(&g, r, offset)?;
        let v = topological_entropy(&cluster, &a, &b, &c)?;
        graph_worst = graph_worst.max(v.abs() as f64);
        let label = format!("square_r{r}_offset{offset}");
        out.table.push(vec![
            "cluster".into(),
            label.as_str().into(),
            a.len().into(),
            b.len().into(),
            c.len().into(),
            Cell::Int(v),
        ]);
    }
    out.verdicts.push(Verdict::new(
        10,
        "toric",
        "largest |S_topo + 1| over toric-code partitions",
        toric_worst,
        "= 0",
        toric_ok,
    ));
    out.verdicts.push(Verdict::new(
        10,
        "graph",
        "largest |S_topo| over planar cluster-state partitions",
        graph_worst,
        "= 0",
        graph_worst == 0.0,
    ));
    Ok(())
}

pub(super) fn mutual_info(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<()> {
    out.table = Table::new(&[
        "section",
        "beta",
        "block",
        "boundary_sites",
        "cut_edges",
        "mutual_information",
        "bound",
        "bound_paper",
        "per_boundary_site",
    ]);
    let per_site = |mi: f64, s: usize| if s == 0 { 0.0 } else { mi / s as f64 };

    let n = cfg.usize("quantum_sites");
    let sys = DenseSpinSystem::ising(n, 1.0, cfg.float("g"), Boundary::Open)?;
    let half = Region::interval(0, n / 2);
    let mut slack = f64::INFINITY;
    for &beta in &cfg.floats("beta") {
        let mi = thermal_mutual_information(&sys, beta, &half)?;
        slack = slack.min(mi.bound_exact - mi.mutual_information);
        out.table.push(vec![
            "quantum_ising".into(),
            beta.into(),
            half.len().into(),
            mi.boundary_sites.into(),
            1usize.into(),
            mi.mutual_information.into(),
            mi.bound_exact.into(),
            mi.bound_paper.into(),
            per_site(mi.mutual_information, mi.boundary_sites).into(),
        ]);
    }
    out.verdicts.push(Verdict::new(
        13,
        "quantum",
        "smallest β tr[H_∂(ρ_I⊗ρ_O − ρ)] − I over temperatures, open Ising chain",
        slack,
        "≥ −1e-10",
        slack >= -1e-10,
    ));

    let ring =
        ClassicalIsing { graph: LatticeGraph::chain(cfg.usize("ring_sites"), Boundary::Periodic)?, j: 1.0, h: 0.0 };
    let block = Region::interval(0, cfg.usize("ring_block"));
    let mut excess = f64::NEG_INFINITY;
    for &beta in &cfg.floats("ring_beta") {
        let mi = classical_spin_mutual_information(&ring, beta, &block)?;
        excess = excess.max(mi.mutual_information - mi.bound);
        out.table.push(vec![
            "classical_ising".into(),
            beta.into(),
            block.len().into(),
            mi.boundary_sites.into(),
            ring.graph.cut_edges(&block)?.into(),
            mi.mutual_information.into(),
            mi.bound.into(),
            mi.bound.into(),
            per_site(mi.mutual_information, mi.boundary_sites).into(),
        ]);
    }
    out.verdicts.push(Verdict::new(
        13,
        "classical_ising",
        "largest I − s(I) log2 2 over temperatures, Ising ring",
        excess,
        "≤ 1e-12",
        excess <= 1e-12,
    ));

    let lattice =
        LatticeGraph::cubic(cfg.usize("lattice_side"), 2, super::gaussian::boundary(cfg, "lattice_boundary"))?;
    let model = HarmonicModel::nearest_neighbor(lattice.clone(), cfg.float("harmonic_a"), cfg.float("harmonic_b"))?;
    let beta = cfg.float("harmonic_beta");
    let mut ratios = Vec::new();
    for &side in &cfg.usizes("blocks") {
        let r = lattice.block(&[0, 0], &[side, side])?;
        let mi = classical_mutual_information(&model, beta, &r)?;
        let area = lattice.surface_area(&r)?;
        ratios.push(per_site(mi, area));
        out.table.push(vec![
            "classical_harmonic".into(),
            beta.into(),
            side.into(),
            area.into(),
            lattice.cut_edges(&r)?.into(),
            mi.into(),
            f64::NAN.into(),
            f64::NAN.into(),
            per_site(mi, area).into(),
        ]);
    }
    let b = band(&ratios);
    out.verdicts.push(Verdict::new(
        13,
        "classical_harmonic",
        "max/min of I/s(I) over blocks, classical harmonic lattice",
        b,
        "≤ 1.5",
        b <= 1.5,
    ));
    Ok(())
}
