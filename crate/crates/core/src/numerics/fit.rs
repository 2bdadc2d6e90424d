use crate::error::{Error, Result};

/// Least-squares fit `S ≈ slope·log₂(n) + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
    pub window: (f64, f64),
    /// `3·slope`: the effective central charge when `S` is a von Neumann entropy in bits.
    pub c_eff: f64,
    pub points: usize,
}

pub const DEFAULT_WINDOW: (f64, f64) = (16.0, 128.0);

pub fn fit_log_scaling(samples: &[(f64, f64)], window: (f64, f64)) -> Result<FitResult> {
    let pts: Vec<(f64, f64)> =
        samples.iter().copied().filter(|&(n, _)| n >= window.0 && n <= window.1).map(|(n, s)| (n.log2(), s)).collect();
    if pts.len() < 3 {
        return Err(Error::Fit(format!(
            "{} samples in window [{}, {}], need at least 3",
            pts.len(),
            window.0,
            window.1
        )));
    }
    let mut xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    if xs.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Fit("repeated block size in fit window".into()));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum::<f64>() / m).sqrt();
    Ok(FitResult { slope, intercept, residual, window, c_eff: 3.0 * slope, points: pts.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_line() {
        let s: Vec<_> = (16..=128).step_by(8).map(|n| (n as f64, (n as f64).log2() / 3.0 + 0.7)).collect();
        let f = fit_log_scaling(&s, DEFAULT_WINDOW).unwrap();
        assert!((f.slope - 1.0 / 3.0).abs() < 1e-12);
        assert!((f.intercept - 0.7).abs() < 1e-12);
        assert!(f.residual < 1e-12);
        assert!((f.c_eff - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_samples() {
        let s: Vec<_> = [16.0, 32.0, 64.0, 128.0].iter().map(|&n| (n, 2.0)).collect();
        assert_eq!(fit_log_scaling(&s, DEFAULT_WINDOW).unwrap().slope, 0.0);
    }

    #[test]
    fn degenerate_windows() {
        let s = [(16.0, 1.0), (32.0, 2.0), (300.0, 3.0)];
        assert!(matches!(fit_log_scaling(&s, DEFAULT_WINDOW), Err(Error::Fit(_))));
        let dup = [(16.0, 1.0), (16.0, 2.0), (32.0, 3.0)];
        assert!(fit_log_scaling(&dup, DEFAULT_WINDOW).is_err());
    }

    proptest! {
        #[test]
        fn recovers_planted_slope(slope in -2.0f64..2.0, icpt in -5.0f64..5.0) {
            let s: Vec<_> = (2..40).map(|n| (n as f64, slope * (n as f64).log2() + icpt)).collect();
            let f = fit_log_scaling(&s, (1.0, 64.0)).unwrap();
            prop_assert!((f.slope - slope).abs() < 1e-12);
        }
    }
}
