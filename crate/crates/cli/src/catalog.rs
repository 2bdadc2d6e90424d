use std::fmt::Write as _;

use crate::config::{ConfigError, ExperimentConfig, ExperimentKind, ParamValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamType {
    Int,
    Float,
    IntList,
    FloatList,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DefaultValue {
    Int(i64),
    Float(f64),
    Ints(&'static [i64]),
    Floats(&'static [f64]),
    Text(&'static str),
}

#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    pub ty: ParamType,
    pub default: DefaultValue,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub choices: &'static [&'static str],
    pub help: &'static str,
}

impl ParamSpec {
    pub fn default(&self) -> ParamValue {
        match self.default {
            DefaultValue::Int(i) => ParamValue::Int(i),
            DefaultValue::Float(x) => ParamValue::Float(x),
            DefaultValue::Ints(v) => ParamValue::IntList(v.to_vec()),
            DefaultValue::Floats(v) => ParamValue::FloatList(v.to_vec()),
            DefaultValue::Text(s) => ParamValue::Text(s.to_string()),
        }
    }

    fn type_name(&self) -> &'static str {
        match self.ty {
            ParamType::Int => "integer",
            ParamType::Float => "number",
            ParamType::IntList => "integer list",
            ParamType::FloatList => "number list",
            ParamType::Text => "string",
        }
    }
}

pub struct KindSpec {
    pub kind: ExperimentKind,
    pub summary: &'static str,
    /// The statement the experiment reproduces and where it comes from.
    pub claim: &'static str,
    pub criteria: &'static [u8],
    pub params: &'static [ParamSpec],
    pub default_window: Option<(f64, f64)>,
    pub validate: fn(&ExperimentConfig) -> Result<(), ConfigError>,
}

const fn int(name: &'static str, default: i64, min: i64, help: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        ty: ParamType::Int,
        default: DefaultValue::Int(default),
        min: Some(min as f64),
        max: None,
        choices: &[],
        help,
    }
}

const fn num(name: &'static str, default: f64, help: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        ty: ParamType::Float,
        default: DefaultValue::Float(default),
        min: None,
        max: None,
        choices: &[],
        help,
    }
}

const fn pos(name: &'static str, default: f64, help: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        ty: ParamType::Float,
        default: DefaultValue::Float(default),
        min: Some(f64::MIN_POSITIVE),
        max: None,
        choices: &[],
        help,
    }
}

const fn ints(name: &'static str, default: &'static [i64], min: i64, help: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        ty: ParamType::IntList,
        default: DefaultValue::Ints(default),
        min: Some(min as f64),
        max: None,
        choices: &[],
        help,
    }
}

const fn nums(name: &'static str, default: &'static [f64], help: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        ty: ParamType::FloatList,
        default: DefaultValue::Floats(default),
        min: Some(f64::MIN_POSITIVE),
        max: None,
        choices: &[],
        help,
    }
}

const fn text(
    name: &'static str,
    default: &'static str,
    choices: &'static [&'static str],
    help: &'static str,
) -> ParamSpec {
    ParamSpec { name, ty: ParamType::Text, default: DefaultValue::Text(default), min: None, max: None, choices, help }
}

const SCALING_WINDOW: Option<(f64, f64)> = Some((16.0, 128.0));
const BLOCKS_2_10: &[i64] = &[2, 3, 4, 5, 6, 7, 8, 9, 10];

fn err(path: &str, msg: impl Into<String>) -> Result<(), ConfigError> {
    Err(ConfigError::new(path, msg))
}

fn no_checks(_: &ExperimentConfig) -> Result<(), ConfigError> {
    Ok(())
}

fn chain_window(c: &ExperimentConfig) -> Result<(), ConfigError> {
    let (_, hi) = c.window();
    if hi >= c.usize("n_sites") as f64 / 2.0 {
        return err("fit_window[1]", "largest block must be below half the chain");
    }
    Ok(())
}

fn block_sides(c: &ExperimentConfig, side_param: &str, blocks: &[&str]) -> Result<(), ConfigError> {
    let side = c.usize(side_param);
    for b in blocks {
        if c.usizes(b).iter().any(|&s| s >= side) {
            return err(&format!("params.{b}"), format!("blocks must be smaller than {side_param} = {side}"));
        }
    }
    Ok(())
}

fn check_halfchain(c: &ExperimentConfig) -> Result<(), ConfigError> {
    if c.usizes("n").iter().any(|n| n % 2 == 1) {
        return err("params.n", "chain lengths must be even");
    }
    for (i, &a) in c.floats("a").iter().enumerate() {
        if c.floats("b").iter().any(|&b| a <= 2.0 * b.abs()) {
            return err(&format!("params.a[{i}]"), "need a > 2|b| for a gapped chain");
        }
    }
    Ok(())
}

fn check_area_boson(c: &ExperimentConfig) -> Result<(), ConfigError> {
    if c.float("a") <= 4.0 * c.float("b").abs() {
        return err("params.a", "need a > 4|b| for a gapped lattice");
    }
    block_sides(c, "side", &["blocks"])
}

fn check_area_fermion(c: &ExperimentConfig) -> Result<(), ConfigError> {
    if c.usizes("gapless_blocks").iter().any(|&s| s < 2) {
        return err("params.gapless_blocks", "S/(n log n) needs n ≥ 2");
    }
    block_sides(c, "side", &["gapped_blocks", "gapless_blocks"])
}

fn check_halfspace(c: &ExperimentConfig) -> Result<(), ConfigError> {
    let l = c.usize("length");
    if c.usizes("cuts").iter().any(|&x| x == 0 || x >= l) {
        return err("params.cuts", "cuts must lie strictly inside the lattice");
    }
    Ok(())
}

fn check_quench(c: &ExperimentConfig) -> Result<(), ConfigError> {
    for p in ["dt", "ed_dt"] {
        if c.float(p) > 0.05 {
            return err(&format!("params.{p}"), "TEBD step must be ≤ 0.05");
        }
    }
    if c.usize("ed_sites") > 12 {
        return err("params.ed_sites", "dense propagation is limited to 12 sites");
    }
    let n = c.usize("n_sites");
    if c.usizes("blocks").iter().any(|&b| b == 0 || b >= n) {
        return err("params.blocks", "blocks must be proper cuts of the chain");
    }
    if c.window().1 > c.float("t_max") {
        return err("fit_window[1]", "window ends after t_max");
    }
    if c.float("t_block") > c.float("t_max") {
        return err("params.t_block", "must not exceed t_max");
    }
    Ok(())
}

fn check_dmrg(c: &ExperimentConfig) -> Result<(), ConfigError> {
    if c.usize("n_sites") > 14 {
        return err("params.n_sites", "exact diagonalization is limited to 14 sites");
    }
    Ok(())
}

fn check_mutual_info(c: &ExperimentConfig) -> Result<(), ConfigError> {
    if c.usize("quantum_sites") > 12 {
        return err("params.quantum_sites", "thermal states are dense; at most 12 sites");
    }
    if c.usize("ring_sites") > 20 {
        return err("params.ring_sites", "classical enumeration is limited to 20 spins");
    }
    if c.usize("ring_block") >= c.usize("ring_sites") {
        return err("params.ring_block", "block must be a proper part of the ring");
    }
    if c.float("harmonic_a") <= 4.0 * c.float("harmonic_b").abs() {
        return err("params.harmonic_a", "need a > 4|b| for a gapped lattice");
    }
    block_sides(c, "lattice_side", &["blocks"])
}

fn check_disorder(c: &ExperimentConfig) -> Result<(), ConfigError> {
    if c.float("low") > c.float("high") {
        return err("params.low", "must not exceed high");
    }
    let (_, hi) = c.window();
    if hi + (c.usize("n_sites") / 4) as f64 + 8.0 > c.usize("n_sites") as f64 {
        return err("fit_window[1]", "blocks do not fit in the chain");
    }
    Ok(())
}

static SPECS: [KindSpec; 16] = [
    KindSpec {
        kind: ExperimentKind::XxScaling,
        summary: "Block entropy of the critical XX chain versus block size.",
        claim: "Critical XX chain: S(n) = (1/3) log2 n + const, i.e. slope 1/3 on a log2 axis \
                (fermionic chains, Toeplitz asymptotics of the correlation matrix).",
        criteria: &[3],
        params: &[
            int("n_sites", 2048, 16, "periodic chain length"),
            int("step", 8, 1, "block-size spacing inside the fit window"),
        ],
        default_window: SCALING_WINDOW,
        validate: chain_window,
    },
    KindSpec {
        kind: ExperimentKind::IsingScaling,
        summary: "Critical and gapped transverse Ising chains, plus a gapped harmonic chain.",
        claim: "Critical Ising chain: slope 1/6 (central charge 1/2); gapped Ising and gapped harmonic chains \
                saturate (fermionic chains, divergence at criticality; bosonic harmonic chains).",
        criteria: &[4],
        params: &[
            int("n_sites", 2048, 16, "periodic chain length"),
            int("step", 8, 1, "block-size spacing inside the fit window"),
            pos("lambda", 1.0, "transverse field of the critical chain"),
            pos("gapped_lambda", 2.0, "transverse field of the gapped chain"),
            pos("harmonic_a", 5.0, "on-site coupling of the harmonic chain"),
            num("harmonic_b", 1.0, "nearest-neighbour coupling of the harmonic chain"),
            int("harmonic_sites", 512, 16, "harmonic chain length"),
        ],
        default_window: SCALING_WINDOW,
        validate: |c| {
            chain_window(c)?;
            if c.usize("harmonic_sites") < 2 * c.window().1 as usize + 2 {
                return err("params.harmonic_sites", "chain too short for the fit window");
            }
            Ok(())
        },
    },
    KindSpec {
        kind: ExperimentKind::RenyiScaling,
        summary: "Renyi entropy scaling of the critical XX chain.",
        claim: "S_alpha = (c/6)(1 + 1/alpha) log2 n with c = 1; slope 1/4 at alpha = 2 (conformal field theory formulas).",
        criteria: &[5],
        params: &[
            int("n_sites", 2048, 16, "periodic chain length"),
            int("step", 8, 1, "block-size spacing inside the fit window"),
            pos("alpha", 2.0, "Renyi order"),
        ],
        default_window: SCALING_WINDOW,
        validate: chain_window,
    },
    KindSpec {
        kind: ExperimentKind::SingleCopy,
        summary: "Single-copy entanglement versus von Neumann entropy on the critical XX chain.",
        claim: "Single-copy entanglement grows with half the slope of the entropy (single-copy entanglement theorem).",
        criteria: &[6],
        params: &[
            int("n_sites", 2048, 16, "periodic chain length"),
            int("step", 8, 1, "block-size spacing inside the fit window"),
        ],
        default_window: SCALING_WINDOW,
        validate: chain_window,
    },
    KindSpec {
        kind: ExperimentKind::HalfchainNegativity,
        summary: "Logarithmic negativity of half of a periodic harmonic chain.",
        claim: "E_N = (1/4) log2((a + 2|b|)/(a − 2|b|)), independent of the chain length \
                (exact negativity of the half-chain, bosonic harmonic chains).",
        criteria: &[1],
        params: &[
            nums("a", &[3.0, 5.0, 10.0], "on-site couplings"),
            ParamSpec {
                name: "b",
                ty: ParamType::FloatList,
                default: DefaultValue::Floats(&[0.5, 1.0]),
                min: None,
                max: None,
                choices: &[],
                help: "nearest-neighbour couplings",
            },
            ints("n", &[8, 16, 32, 64], 4, "chain lengths"),
        ],
        default_window: None,
        validate: check_halfchain,
    },
    KindSpec {
        kind: ExperimentKind::KgDivergence,
        summary: "Half-chain negativity of the discretized Klein-Gordon field.",
        claim: "E_N = (1/4) log2(1 + 4N²/m²), diverging in the continuum limit (Klein-Gordon limit of the harmonic chain).",
        criteria: &[2],
        params: &[ints("n", &[20, 50, 100], 4, "chain lengths (even)"), nums("mass", &[0.5, 1.0, 2.0], "field masses")],
        default_window: None,
        validate: |c| {
            if c.usizes("n").iter().any(|n| n % 2 == 1) {
                return err("params.n", "chain lengths must be even");
            }
            Ok(())
        },
    },
    KindSpec {
        kind: ExperimentKind::Area2dBoson,
        summary: "Negativity of square blocks in a gapped two-dimensional harmonic lattice.",
        claim: "Gapped bosonic lattices obey an area law: E_N/s(I) stays bounded as blocks grow \
                (quasi-free higher-dimensional systems, entropic bounds from matrix norms).",
        criteria: &[8],
        params: &[
            int("side", 32, 4, "lattice side"),
            text("boundary", "open", &["open", "periodic"], "lattice boundary; blocks sit at the corner (0, 0)"),
            pos("a", 5.0, "on-site coupling"),
            num("b", -1.0, "nearest-neighbour coupling per axis"),
            ints("blocks", BLOCKS_2_10, 1, "block sides"),
        ],
        default_window: None,
        validate: check_area_boson,
    },
    KindSpec {
        kind: ExperimentKind::Area2dFermion,
        summary: "Entropy of square blocks in gapped and gapless two-dimensional hopping models.",
        claim: "Gapped fermions obey an area law; a Fermi surface gives S ~ n log n \
                (violation of area laws for critical fermions).",
        criteria: &[8],
        params: &[
            int("side", 32, 4, "periodic lattice side"),
            num("gapped_stagger", 2.0, "staggered potential of the gapped model"),
            num("gapless_onsite", 0.05, "uniform potential of the gapless model"),
            ints("gapped_blocks", BLOCKS_2_10, 1, "block sides for the gapped model"),
            ints("gapless_blocks", &[4, 5, 6, 7, 8, 9, 10, 11, 12], 2, "block sides for the gapless model"),
        ],
        default_window: None,
        validate: check_area_fermion,
    },
    KindSpec {
        kind: ExperimentKind::Halfspace,
        summary: "Entropy per boundary site of a half-space in a two-dimensional hopping model.",
        claim: "Translation invariance along the cut decouples the half-space into chains; \
                with a Fermi surface the entropy per boundary site grows logarithmically (fermionic half-space decoupling).",
        criteria: &[],
        params: &[
            int("length", 256, 4, "lattice length across the cut"),
            int("width", 16, 1, "lattice width along the cut"),
            num("onsite", 0.05, "uniform potential"),
            ints("cuts", &[4, 8, 16, 32, 64], 1, "strip widths"),
        ],
        default_window: Some((4.0, 64.0)),
        validate: check_halfspace,
    },
    KindSpec {
        kind: ExperimentKind::ThermalNegativity,
        summary: "Negativity of square blocks in thermal states of a gapped harmonic lattice.",
        claim: "Thermal bosonic states obey an area law for the negativity at every temperature (thermal states, area law).",
        criteria: &[9],
        params: &[
            int("side", 20, 4, "lattice side"),
            text("boundary", "open", &["open", "periodic"], "lattice boundary; blocks sit at the corner (0, 0)"),
            pos("a", 50.0, "on-site coupling"),
            num("b", -10.0, "nearest-neighbour coupling per axis"),
            nums("beta", &[0.5, 1.0, 2.0], "inverse temperatures"),
            ints("blocks", BLOCKS_2_10, 1, "block sides"),
        ],
        default_window: None,
        validate: check_area_boson,
    },
    KindSpec {
        kind: ExperimentKind::FhCheck,
        summary: "Toeplitz determinants against Fisher-Hartwig asymptotics.",
        claim: "det T_n ~ E G^n n^(sum alpha² − beta²); the ratio to the prediction converges \
                (Fisher-Hartwig asymptotics).",
        criteria: &[7],
        params: &[
            text("symbol", "all", &["all", "constant", "single-jump", "two-jump"], "which symbol to test"),
            ints("grid", &[32, 64, 128, 256, 512], 1, "matrix orders (ascending, ≤ 512)"),
        ],
        default_window: None,
        validate: |c| {
            let g = c.usizes("grid");
            if g.windows(2).any(|w| w[1] <= w[0]) || g.iter().any(|&n| n > 512) {
                return err("params.grid", "orders must be strictly ascending and ≤ 512");
            }
            Ok(())
        },
    },
    KindSpec {
        kind: ExperimentKind::Topo,
        summary: "Topological entanglement entropy of the toric code and a planar graph state.",
        claim: "Kitaev-Preskill combination S_A + S_B + S_C − S_AB − S_BC − S_CA + S_ABC = −γ with γ = 1 bit \
                for the toric code and 0 for a planar cluster state (graph states and the toric code).",
        criteria: &[10],
        params: &[],
        default_window: None,
        validate: no_checks,
    },
    KindSpec {
        kind: ExperimentKind::Quench,
        summary: "Entanglement after a global quench of the transverse Ising chain (TEBD).",
        claim: "After a quench the entropy grows linearly in time but obeys an area law in the block size \
                (area laws in non-equilibrium systems).",
        criteria: &[12],
        params: &[
            int("n_sites", 64, 4, "open chain length"),
            pos("g", 1.0, "transverse field after the quench"),
            int("bond_dim", 64, 1, "maximal bond dimension"),
            pos("dt", 0.05, "Trotter step"),
            pos("t_max", 2.0, "final time"),
            pos("t_block", 1.0, "time of the block-size scan"),
            ints("blocks", &[16, 24], 1, "block sizes compared for saturation"),
            int("ed_sites", 10, 2, "chain length of the exact cross-check"),
            pos("ed_time", 3.0, "time of the exact cross-check"),
            pos("ed_dt", 0.01, "Trotter step of the exact cross-check"),
        ],
        default_window: Some((0.5, 2.0)),
        validate: check_quench,
    },
    KindSpec {
        kind: ExperimentKind::DmrgVsEd,
        summary: "Two-site DMRG against exact diagonalization.",
        claim: "Variational MPS ground states reproduce energies and block entropies of gapped chains \
                (DMRG variational problem; approximability with MPS).",
        criteria: &[11, 14],
        params: &[
            text("model", "ising", &["ising", "xx"], "ising: −ΣZZ − gΣX; xx: −¼Σ(XX+YY)"),
            int("n_sites", 12, 2, "open chain length"),
            pos("g", 2.0, "transverse field (ising only)"),
            int("bond_dim", 0, 0, "maximal bond dimension; 0 picks 16 for ising and 32 for xx"),
        ],
        default_window: None,
        validate: check_dmrg,
    },
    KindSpec {
        kind: ExperimentKind::MutualInfo,
        summary: "Mutual information in thermal quantum and classical lattice systems.",
        claim: "Thermal mutual information obeys an area law: I ≤ β tr[H_∂(ρ_I⊗ρ_O − ρ)] for quantum spins, \
                I ≤ s(I) log2 d for classical spins, and I/s(I) bounded for harmonic lattices.",
        criteria: &[13],
        params: &[
            int("quantum_sites", 10, 2, "open Ising chain length"),
            pos("g", 1.0, "transverse field"),
            nums("beta", &[0.25, 1.0, 4.0], "inverse temperatures of the quantum chain"),
            int("ring_sites", 16, 3, "classical Ising ring length"),
            int("ring_block", 5, 1, "contiguous block on the ring"),
            nums("ring_beta", &[0.3, 1.0, 5.0], "inverse temperatures of the ring"),
            int("lattice_side", 24, 4, "harmonic lattice side"),
            text("lattice_boundary", "open", &["open", "periodic"], "lattice boundary; blocks sit at the corner (0, 0)"),

            pos("harmonic_a", 5.0, "on-site coupling"),
            num("harmonic_b", -1.0, "nearest-neighbour coupling per axis"),
            pos("harmonic_beta", 1.0, "inverse temperature of the harmonic lattice"),
            ints("blocks", BLOCKS_2_10, 1, "block sides on the harmonic lattice"),
        ],
        default_window: None,
        validate: check_mutual_info,
    },
    KindSpec {
        kind: ExperimentKind::Disorder,
        summary: "Disorder-averaged entropy of random XX chains.",
        claim: "Random couplings change the logarithmic prefactor; the fitted slope lies below the clean 1/3 \
                (disordered systems, free-fermion sampling).",
        criteria: &[16],
        params: &[
            int("n_sites", 512, 16, "open chain length"),
            int("samples", 20, 2, "disorder realizations"),
            num("low", 0.5, "lower end of the coupling distribution"),
            num("high", 1.5, "upper end of the coupling distribution"),
            int("step", 8, 1, "block-size spacing inside the fit window"),
        ],
        default_window: SCALING_WINDOW,
        validate: check_disorder,
    },
];

pub fn spec_for(kind: ExperimentKind) -> &'static KindSpec {
    SPECS.iter().find(|s| s.kind == kind).expect("every kind has a spec")
}

pub fn list_experiments() -> String {
    let mut out = String::new();
    for s in &SPECS {
        let _ = writeln!(out, "{:<22}{}", s.kind.as_str(), s.summary);
    }
    out
}

pub fn describe(kind: ExperimentKind) -> String {
    let s = spec_for(kind);
    let mut out = String::new();
    let _ = writeln!(out, "{}\n\n{}\n\nClaim: {}", kind, s.summary, s.claim);
    if !s.criteria.is_empty() {
        let ids: Vec<String> = s.criteria.iter().map(|c| format!("C{c}")).collect();
        let _ = writeln!(out, "Verdicts: {}", ids.join(", "));
    }
    if let Some((lo, hi)) = s.default_window {
        let _ = writeln!(out, "Fit window: [{lo}, {hi}] (override with \"fit_window\")");
    }
    let _ = writeln!(out, "\nParameters (\"params\" object):");
    for p in s.params {
        let default = serde_json::to_string(&p.default()).expect("defaults serialize");
        let _ = writeln!(out, "  {:<16}{:<14}default {:<26}{}", p.name, p.type_name(), default, p.help);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_covers_every_kind_once() {
        for k in ExperimentKind::ALL {
            assert_eq!(SPECS.iter().filter(|s| s.kind == k).count(), 1, "{k}");
        }
        assert_eq!(list_experiments().lines().count(), 16);
    }

    #[test]
    fn describe_mentions_the_claims() {
        assert!(describe(ExperimentKind::XxScaling).contains("slope 1/3"));
        assert!(describe(ExperimentKind::Topo).contains("Kitaev-Preskill"));
        assert!(describe(ExperimentKind::Quench).contains("Fit window"));
    }

    #[test]
    fn defaults_pass_validation() {
        for s in &SPECS {
            (s.validate)(&ExperimentConfig::defaults(s.kind)).unwrap_or_else(|e| panic!("{}: {e}", s.kind));
        }
    }
}
