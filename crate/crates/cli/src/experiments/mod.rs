//! One runner per experiment kind. Each pushes rows into an [`Outcome`] as
//! it goes, so a failure part-way still leaves the finished rows behind.

mod chains;
mod exact;
mod gaussian;
mod tensor;

use arealab_core::error::Result;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::report::{FitSummary, Table, Verdict};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Outcome {
    pub table: Table,
    pub fit: Option<FitSummary>,
    pub verdicts: Vec<Verdict>,
}

pub fn execute(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<()> {
    match cfg.kind {
        ExperimentKind::XxScaling => chains::xx_scaling(cfg, out),
        ExperimentKind::IsingScaling => chains::ising_scaling(cfg, out),
        ExperimentKind::RenyiScaling => chains::renyi_scaling(cfg, out),
        ExperimentKind::SingleCopy => chains::single_copy(cfg, out),
        ExperimentKind::Disorder => chains::disorder(cfg, out),
        ExperimentKind::HalfchainNegativity => gaussian::halfchain_negativity(cfg, out),
        ExperimentKind::KgDivergence => gaussian::kg_divergence(cfg, out),
        ExperimentKind::Area2dBoson => gaussian::area_2d_boson(cfg, out),
        ExperimentKind::Area2dFermion => gaussian::area_2d_fermion(cfg, out),
        ExperimentKind::Halfspace => gaussian::halfspace(cfg, out),
        ExperimentKind::ThermalNegativity => gaussian::thermal_negativity(cfg, out),
        ExperimentKind::FhCheck => exact::fh_check(cfg, out),
        ExperimentKind::Topo => exact::topo(cfg, out),
        ExperimentKind::MutualInfo => exact::mutual_info(cfg, out),
        ExperimentKind::Quench => tensor::quench(cfg, out),
        ExperimentKind::DmrgVsEd => tensor::dmrg_vs_ed(cfg, out),
    }
}

/// Block sizes `lo, lo+step, …` inside the fit window.
fn window_sizes(cfg: &ExperimentConfig) -> Vec<usize> {
    let (lo, hi) = cfg.window();
    (lo.ceil() as usize..=hi.floor() as usize).step_by(cfg.usize("step").max(1)).collect()
}

/// Order-preserving parallel map.
fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> Result<U> + Sync + Send) -> Result<Vec<U>> {
    items.par_iter().map(f).collect()
}

/// `max/min` of positive values; infinite if any value is not positive.
fn band(values: &[f64]) -> f64 {
    let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    if lo > 0.0 {
        hi / lo
    } else {
        f64::INFINITY
    }
}

/// Least-squares line through `(x, y)`: `(slope, intercept, rms residual)`.
fn linear_fit(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx = pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx;
    let intercept = my - slope * mx;
    let rms = (pts.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum::<f64>() / n).sqrt();
    (slope, intercept, rms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helpers() {
        assert_eq!(band(&[1.0, 2.0, 1.5]), 2.0);
        assert!(band(&[0.0, 1.0]).is_infinite());
        let (s, i, r) = linear_fit(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)]);
        assert!((s - 2.0).abs() < 1e-14 && (i - 1.0).abs() < 1e-14 && r < 1e-14);
        let cfg = ExperimentConfig::defaults(ExperimentKind::XxScaling);
        let w = window_sizes(&cfg);
        assert_eq!((w[0], *w.last().unwrap(), w.len()), (16, 128, 15));
    }
}
