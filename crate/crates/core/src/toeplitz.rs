//! Toeplitz matrices generated by symbols on the circle and their
//! Fisher-Hartwig determinant asymptotics.
//!
//! A symbol has the form `g(φ) = b(φ) Π_r t_{β_r}(φ−φ_r) u_{α_r}(φ−φ_r)` with
//! `t_β(θ) = e^{−iβ(π−θ)}` on the principal branch `θ ∈ [0, 2π)` and
//! `u_α(θ) = (2 − 2cos θ)^α`. For admissible exponents
//! `det T_n ≈ E · G^n · n^{Σ(α_r² − β_r²)}` with `G = exp((1/2π)∫ ln b)`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::log_det_complex;
use crate::numerics::quadrature::fourier_coefficients;

const TWO_PI: f64 = 2.0 * PI;
const QUAD_NODES: usize = 4096;
const QUAD_TOL: f64 = 1e-10;
/// Largest matrix order accepted by [`convergence_check`].
pub const MAX_ORDER: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FhFactor {
    pub phi: f64,
    pub alpha: f64,
    pub beta: f64,
}

type Smooth = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
pub struct Symbol {
    smooth: Smooth,
    factors: Vec<FhFactor>,
    winding: i64,
}

impl std::fmt::Debug for Symbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Symbol").field("factors", &self.factors).finish_non_exhaustive()
    }
}

/// `e^{−iβ(π−θ)}` with `θ` reduced to `[0, 2π)`.
pub fn jump_factor(beta: f64, theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, -beta * (PI - theta.rem_euclid(TWO_PI)))
}

/// `(2 − 2cos θ)^α`.
pub fn root_factor(alpha: f64, theta: f64) -> f64 {
    if alpha == 0.0 {
        1.0
    } else {
        (2.0 - 2.0 * theta.cos()).powf(alpha)
    }
}

impl Symbol {
    /// Validates `α_r > −1/2` and that `b` does not vanish on a 4096-point
    /// grid. The winding number of `b` is recorded; only winding zero is
    /// admissible for the asymptotic formula.
    pub fn new(smooth: impl Fn(f64) -> Complex64 + Send + Sync + 'static, factors: Vec<FhFactor>) -> Result<Self> {
        for f in &factors {
            if !(f.alpha > -0.5) || !f.beta.is_finite() || !f.phi.is_finite() {
                return Err(Error::Parameter(format!("invalid Fisher-Hartwig factor {f:?}")));
            }
        }
        let samples: Vec<Complex64> = (0..QUAD_NODES).map(|k| smooth(TWO_PI * k as f64 / QUAD_NODES as f64)).collect();
        let top = samples.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        if !(top.is_finite() && top > 0.0) || samples.iter().any(|z| !(z.norm() > 1e-12 * top)) {
            return Err(Error::Parameter("smooth part of the symbol vanishes".into()));
        }
        let winding: f64 =
            (0..QUAD_NODES).map(|k| (samples[(k + 1) % QUAD_NODES] / samples[k]).arg()).sum::<f64>() / TWO_PI;
        Ok(Self { smooth: Arc::new(smooth), factors, winding: winding.round() as i64 })
    }

    pub fn constant(c: Complex64) -> Result<Self> {
        Self::new(move |_| c, Vec::new())
    }

    pub fn winding(&self) -> i64 {
        self.winding
    }

    pub fn factors(&self) -> &[FhFactor] {
        &self.factors
    }

    pub fn smooth_part(&self, phi: f64) -> Complex64 {
        (self.smooth)(phi)
    }

    pub fn evaluate(&self, phi: f64) -> Complex64 {
        self.factors.iter().fold(self.smooth_part(phi), |acc, f| {
            let theta = phi - f.phi;
            acc * jump_factor(f.beta, theta) * root_factor(f.alpha, theta)
        })
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.factors.iter().map(|f| f.phi.rem_euclid(TWO_PI)).collect()
    }

    /// Fourier coefficients `T_l`, `l = −l_max..=l_max`, at index `l + l_max`.
    pub fn coefficients(&self, l_max: usize) -> Result<Vec<Complex64>> {
        let g = |phi: f64| self.evaluate(phi);
        fourier_coefficients(&g, &self.breakpoints(), l_max, QUAD_NODES, QUAD_TOL)
    }
}

fn matrix_from_coefficients(c: &[Complex64], l_max: usize, n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |i, j| c[(l_max as i64 + i as i64 - j as i64) as usize])
}

/// `(T_n)_{ij} = T_{i−j}` with `T_l = (1/2π)∫ g(φ) e^{−ilφ} dφ`.
pub fn toeplitz_matrix(symbol: &Symbol, n: usize) -> Result<DMatrix<Complex64>> {
    if n == 0 {
        return Err(Error::Parameter("Toeplitz order must be at least 1".into()));
    }
    let c = symbol.coefficients(n - 1)?;
    Ok(matrix_from_coefficients(&c, n - 1, n))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FhPrediction {
    /// Geometric mean `G = exp((1/2π)∫ ln b)`.
    pub g: Complex64,
    /// `Σ_r (α_r² − β_r²)`.
    pub exponent: f64,
    /// Exponents inside `|α_r|, |β_r| < 1/2`, or a single factor with `α = 0`, `|β| < 5/2`.
    pub valid: bool,
}

impl FhPrediction {
    /// `ln |G^n n^{exponent}|`.
    pub fn log_magnitude(&self, n: usize) -> f64 {
        n as f64 * self.g.norm().ln() + self.exponent * (n as f64).ln()
    }
}

/// `ln G` by the trapezoid rule on a continuous branch of `ln b`, doubled
/// until two successive grids agree.
fn log_geometric_mean(smooth: &Smooth) -> Result<Complex64> {
    let eval = |m: usize| {
        let mut phase = 0.0;
        let mut prev = smooth(0.0);
        // accumulate deviations from the first sample to keep rounding small
        let anchor = Complex64::new(prev.norm().ln(), prev.arg());
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 1..m {
            let z = smooth(TWO_PI * k as f64 / m as f64);
            phase += (z / prev).arg();
            sum += Complex64::new(z.norm().ln() - anchor.re, phase);
            prev = z;
        }
        anchor + sum / m as f64
    };
    let mut m = QUAD_NODES;
    let mut last = eval(m);
    for _ in 0..6 {
        m *= 2;
        let next = eval(m);
        if (next - last).norm() <= 1e-13 * next.norm().max(1.0) {
            return Ok(next);
        }
        last = next;
    }
    Err(Error::Accuracy("geometric mean of the symbol did not converge".into()))
}

pub fn fh_parameters(symbol: &Symbol) -> Result<FhPrediction> {
    if symbol.winding != 0 {
        return Err(Error::LemmaScope(format!("smooth part winds {} times", symbol.winding)));
    }
    let log_g = log_geometric_mean(&symbol.smooth)?;
    let f = &symbol.factors;
    let exponent = f.iter().map(|x| x.alpha * x.alpha - x.beta * x.beta).sum();
    let standard = f.iter().all(|x| x.alpha.abs() < 0.5 && x.beta.abs() < 0.5);
    let extended = f.len() == 1 && f[0].alpha == 0.0 && f[0].beta.abs() < 2.5;
    Ok(FhPrediction { g: log_g.exp(), exponent, valid: standard || extended })
}

/// Log-magnitude of the `n`-dependent part `G^n n^{Σ(α²−β²)}`.
pub fn fh_predict(symbol: &Symbol, n: usize) -> Result<f64> {
    let p = fh_parameters(symbol)?;
    if !p.valid {
        return Err(Error::LemmaScope(format!("factors {:?} lie outside the Fisher-Hartwig range", symbol.factors)));
    }
    Ok(p.log_magnitude(n))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    /// `ln|det T_n|`; `−∞` for a singular matrix.
    pub log_abs_det: f64,
    pub log_prediction: f64,
    /// `|det T_n| / (|G|^n n^{exponent})`.
    pub ratio: f64,
    pub singular: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// `|ratio_{k+1}/ratio_k − 1|` between consecutive grid points.
    pub changes: Vec<f64>,
    /// Changes decrease monotonically and the last one is below 0.05.
    pub pass: bool,
}

pub fn convergence_check(symbol: &Symbol, grid: &[usize]) -> Result<ConvergenceReport> {
    if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) || grid[0] == 0 {
        return Err(Error::Parameter("grid must be non-empty, positive and strictly ascending".into()));
    }
    let top = *grid.last().unwrap();
    if top > MAX_ORDER {
        return Err(Error::Size(format!("order {top} above {MAX_ORDER}")));
    }
    let p = fh_parameters(symbol)?;
    if !p.valid {
        return Err(Error::LemmaScope(format!("factors {:?} lie outside the Fisher-Hartwig range", symbol.factors)));
    }
    let c = symbol.coefficients(top - 1)?;
    let rows = grid
        .par_iter()
        .map(|&n| {
            let (_, log_abs_det) = log_det_complex(&matrix_from_coefficients(&c, top - 1, n))?;
            let log_prediction = p.log_magnitude(n);
            let singular = log_abs_det == f64::NEG_INFINITY;
            Ok(ConvergenceRow {
                n,
                log_abs_det,
                log_prediction,
                ratio: if singular { 0.0 } else { (log_abs_det - log_prediction).exp() },
                singular,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let changes: Vec<f64> = rows.windows(2).map(|w| (w[1].ratio / w[0].ratio - 1.0).abs()).collect();
    let pass = rows.iter().all(|r| !r.singular)
        && changes.windows(2).all(|w| w[1] < w[0])
        && changes.last().is_some_and(|&x| x < 0.05);
    Ok(ConvergenceReport { rows, changes, pass })
}
