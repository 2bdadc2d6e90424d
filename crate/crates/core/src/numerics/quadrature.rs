//! Fourier coefficients of piecewise-smooth functions on `[0, 2π)`.
//!
//! The circle is cut at the supplied breakpoints, each piece is covered by
//! Gauss-Legendre panels that are graded geometrically towards the cuts,
//! and every coefficient is checked against a run with doubled panels.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;
const ORDER: usize = 20;
const GRADING_LEVELS: usize = 24;
const GRADING_RATIO: f64 = 0.25;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * p - pm) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Quadrature nodes on the circle with weights summing to 2π.
#[derive(Debug, Clone)]
pub struct CircleRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CircleRule {
    /// At least `min_nodes` nodes; `breakpoints` are angles in `[0, 2π)`.
    pub fn new(breakpoints: &[f64], min_nodes: usize) -> Self {
        let mut cuts: Vec<f64> = breakpoints.iter().map(|b| b.rem_euclid(TWO_PI)).collect();
        cuts.push(0.0);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        let graded = cuts.len() > 1 || !breakpoints.is_empty();
        let pieces: Vec<(f64, f64)> =
            cuts.iter().enumerate().map(|(k, &a)| (a, if k + 1 < cuts.len() { cuts[k + 1] } else { TWO_PI })).collect();
        let panels_total = min_nodes.div_ceil(ORDER).max(pieces.len());
        let (gx, gw) = gauss_legendre(ORDER);
        let mut nodes = Vec::with_capacity(panels_total * ORDER * 2);
        let mut weights = Vec::with_capacity(panels_total * ORDER * 2);
        let mut push_panel = |a: f64, b: f64| {
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            for k in 0..ORDER {
                nodes.push(mid + half * gx[k]);
                weights.push(half * gw[k]);
            }
        };
        for &(a, b) in &pieces {
            let len = b - a;
            let uniform = ((panels_total as f64 * len / TWO_PI).ceil() as usize).max(1);
            if !graded {
                let h = len / uniform as f64;
                for k in 0..uniform {
                    push_panel(a + k as f64 * h, a + (k + 1) as f64 * h);
                }
                continue;
            }
            // graded layers next to both ends, uniform core in between
            let h = len / (uniform + 2) as f64;
            let mut edges = vec![0.0];
            let mut s = h * GRADING_RATIO.powi(GRADING_LEVELS as i32);
            edges.push(s);
            for _ in 0..GRADING_LEVELS {
                s /= GRADING_RATIO;
                edges.push(s.min(h));
            }
            let grade: Vec<f64> = edges;
            for w in grade.windows(2) {
                push_panel(a + w[0], a + w[1]);
            }
            let core = len - 2.0 * h;
            for k in 0..uniform {
                let lo = a + h + core * k as f64 / uniform as f64;
                let hi = a + h + core * (k + 1) as f64 / uniform as f64;
                push_panel(lo, hi);
            }
            for w in grade.windows(2).rev() {
                push_panel(b - w[1], b - w[0]);
            }
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `c_l = (1/2π) ∫₀^{2π} f(φ) e^{-ilφ} dφ` for `l = -l_max..=l_max`
/// (index `l + l_max`), on a fixed rule.
pub fn fourier_on_rule(samples: &[Complex64], rule: &CircleRule, l_max: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); 2 * l_max + 1];
    for (k, (&phi, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        let fw = samples[k] * (w / TWO_PI);
        let step = Complex64::from_polar(1.0, -phi);
        // e^{-ilφ} for l = 0, 1, 2, ... by recurrence, re-anchored every 64 steps
        let mut pos = Complex64::new(1.0, 0.0);
        for l in 0..=l_max {
            if l % 64 == 0 {
                pos = Complex64::from_polar(1.0, -(l as f64) * phi);
            }
            out[l_max + l] += fw * pos;
            if l > 0 {
                out[l_max - l] += fw * pos.conj();
            }
            pos *= step;
        }
    }
    out
}

/// Fourier coefficients with a refinement check: the computation is repeated
/// with twice as many panels and must agree to `tol`.
pub fn fourier_coefficients(
    f: &dyn Fn(f64) -> Complex64,
    breakpoints: &[f64],
    l_max: usize,
    min_nodes: usize,
    tol: f64,
) -> Result<Vec<Complex64>> {
    let base = min_nodes.max(4096).max(8 * (l_max + 1));
    let coarse_rule = CircleRule::new(breakpoints, base);
    let fine_rule = CircleRule::new(breakpoints, 2 * base);
    let sample = |rule: &CircleRule| rule.nodes.iter().map(|&p| f(p)).collect::<Vec<_>>();
    let coarse = fourier_on_rule(&sample(&coarse_rule), &coarse_rule, l_max);
    let fine = fourier_on_rule(&sample(&fine_rule), &fine_rule, l_max);
    let worst = coarse.iter().zip(&fine).map(|(a, b)| (a - b).norm()).fold(0.0f64, f64::max);
    if !(worst <= tol) {
        return Err(Error::Accuracy(format!(
            "Fourier coefficients changed by {worst:e} under refinement (tolerance {tol:e})"
        )));
    }
    Ok(fine)
}

/// Locates jump discontinuities of `f` on the circle: adjacent samples on a
/// uniform grid whose difference stands out from the local variation are
/// refined by bisection.
pub fn detect_jumps(f: &dyn Fn(f64) -> Complex64, grid: usize) -> Vec<f64> {
    let h = TWO_PI / grid as f64;
    let vals: Vec<Complex64> = (0..grid).map(|k| f((k as f64 + 0.5) * h)).collect();
    let diffs: Vec<f64> = (0..grid).map(|k| (vals[(k + 1) % grid] - vals[k]).norm()).collect();
    let scale = vals.iter().map(|v| v.norm()).fold(0.0f64, f64::max).max(1e-300);
    let mut jumps = Vec::new();
    for k in 0..grid {
        let d = diffs[k];
        let prev = diffs[(k + grid - 1) % grid];
        let next = diffs[(k + 1) % grid];
        if d > 1e-3 * scale && d > 8.0 * prev.max(next) {
            let (mut lo, mut hi) = ((k as f64 + 0.5) * h, (k as f64 + 1.5) * h);
            let left = vals[k];
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if (f(mid) - left).norm() < 0.5 * d {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            jumps.push((0.5 * (lo + hi)).rem_euclid(TWO_PI));
        }
    }
    jumps.sort_by(f64::total_cmp);
    jumps
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(20);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for deg in 0..40 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-13, "degree {deg}");
        }
    }

    #[test]
    fn circle_weights_sum_to_two_pi() {
        for bps in [vec![], vec![1.0], vec![0.5, 2.0, 4.0]] {
            let r = CircleRule::new(&bps, 4096);
            assert!((r.weights.iter().sum::<f64>() - TWO_PI).abs() < 1e-12);
            assert!(r.len() >= 4096);
        }
    }

    #[test]
    fn single_mode_and_constant() {
        let c = fourier_coefficients(&|_| Complex64::new(1.0, 0.0), &[], 5, 4096, 1e-12).unwrap();
        assert!((c[5] - 1.0).norm() < 1e-14);
        assert!(c.iter().enumerate().all(|(k, v)| k == 5 || v.norm() < 1e-14));
        let c = fourier_coefficients(&|p| Complex64::from_polar(1.0, 3.0 * p), &[], 5, 4096, 1e-12).unwrap();
        assert!((c[8] - 1.0).norm() < 1e-13);
    }

    #[test]
    fn square_wave_coefficients() {
        // sign(-cos φ): c_l = -2 sin(πl/2)/(πl)
        let f = |p: f64| Complex64::new(if p.cos() < 0.0 { 1.0 } else { -1.0 }, 0.0);
        let jumps = detect_jumps(&f, 4096);
        assert_eq!(jumps.len(), 2);
        assert!((jumps[0] - PI / 2.0).abs() < 1e-12 && (jumps[1] - 1.5 * PI).abs() < 1e-12);
        let c = fourier_coefficients(&f, &jumps, 200, 4096, 1e-10).unwrap();
        for l in 1..=200i64 {
            let exact = -2.0 * (PI * l as f64 / 2.0).sin() / (PI * l as f64);
            assert!((c[(200 + l) as usize].re - exact).abs() < 1e-12, "l={l}");
        }
        // without breakpoints the refinement check catches the jump
        assert!(fourier_coefficients(&f, &[], 10, 4096, 1e-10).is_err());
    }

    #[test]
    fn smooth_function_has_no_jumps() {
        assert!(detect_jumps(&|p| Complex64::new(3.0 + p.cos(), p.sin()), 4096).is_empty());
    }
}
