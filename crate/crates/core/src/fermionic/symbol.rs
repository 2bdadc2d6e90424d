use nalgebra::DMatrix;
use num_complex::Complex64;

use super::FermionicGaussianState;
use crate::error::{Error, Result};
use crate::numerics::quadrature::{detect_jumps, fourier_coefficients};

const MIN_NODES: usize = 4096;
const REFINEMENT_TOL: f64 = 1e-9;

/// Correlations `V_l = (1/2π) ∫ g(φ) e^{ilφ} dφ` of an infinite translation-invariant chain.
#[derive(Debug, Clone)]
pub struct InfiniteChain {
    l_max: usize,
    coeffs: Vec<Complex64>,
    /// Discontinuities of the symbol in `[0, 2π)`, i.e. the Fermi points.
    pub jumps: Vec<f64>,
}

impl InfiniteChain {
    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn v(&self, l: i64) -> Complex64 {
        assert!(l.unsigned_abs() as usize <= self.l_max, "|l| beyond l_max");
        self.coeffs[(l + self.l_max as i64) as usize]
    }

    /// Toeplitz block `(V_n)_{ij} = V_{i−j}` of `n` consecutive sites.
    pub fn block_state(&self, n: usize) -> Result<FermionicGaussianState> {
        if n == 0 || n > self.l_max + 1 {
            return Err(Error::Parameter(format!("block size {n} needs 1 ≤ n ≤ {}", self.l_max + 1)));
        }
        let imag = (0..n as i64).map(|l| self.v(l).im.abs().max(self.v(-l).im.abs())).fold(0.0, f64::max);
        if imag > 1e-10 {
            return Err(Error::InvalidState(format!("symbol gives complex correlations (|Im V_l| = {imag:e})")));
        }
        let v = DMatrix::from_fn(n, n, |i, j| self.v(i as i64 - j as i64).re);
        Ok(FermionicGaussianState { v, degenerate: false })
    }
}

/// Fourier coefficients of the symbol on graded Gauss-Legendre panels cut at
/// its detected jumps, checked against a refined run.
pub fn infinite_chain_correlations(symbol: &dyn Fn(f64) -> Complex64, l_max: usize) -> Result<InfiniteChain> {
    let jumps = detect_jumps(symbol, MIN_NODES);
    let c = fourier_coefficients(symbol, &jumps, l_max, MIN_NODES, REFINEMENT_TOL)?;
    // c_l carries e^{−ilφ}, so V_l = c_{−l}
    let coeffs = c.into_iter().rev().collect();
    Ok(InfiniteChain { l_max, coeffs, jumps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermionic::{xy_symbol, XyParams};
    use crate::lattice::Boundary;
    use std::f64::consts::PI;

    #[test]
    fn constant_symbol() {
        let ch = infinite_chain_correlations(&|_| Complex64::new(1.0, 0.0), 10).unwrap();
        assert!(ch.jumps.is_empty());
        assert!((ch.v(0) - 1.0).norm() < 1e-14);
        assert!((1..=10).all(|l| ch.v(l).norm() < 1e-14 && ch.v(-l).norm() < 1e-14));
    }

    #[test]
    fn xx_symbol_matches_long_ring() {
        let ch = infinite_chain_correlations(&xy_symbol(0.0, 0.0), 64).unwrap();
        assert_eq!(ch.jumps.len(), 2);
        assert!((ch.jumps[0] - PI / 2.0).abs() < 1e-10);
        // the ring's discretisation error grows like l/N², so only short distances reach 1e-6
        let ring = XyParams::new(0.0, 0.0, 4096, Boundary::Periodic).unwrap().periodic_state();
        for l in 0..=6 {
            assert!((ch.v(l).re - ring.v[(l as usize, 0)]).abs() < 1e-6, "l={l}");
        }
        let block = ch.block_state(16).unwrap();
        assert!((block.v[(3, 0)] - ch.v(3).re).abs() == 0.0);
    }

    #[test]
    fn smooth_gapped_symbol_decays_exponentially() {
        let ch = infinite_chain_correlations(&xy_symbol(1.0, 2.0), 30).unwrap();
        assert!(ch.jumps.is_empty());
        let pts: Vec<(f64, f64)> = (2..=20).map(|l| (l as f64, ch.v(l).norm().ln())).collect();
        let n = pts.len() as f64;
        let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let slope = sxy / sxx;
        assert!(slope < -0.5, "slope {slope}");
        assert!((3..20).all(|l| ch.v(l + 1).norm() < 0.6 * ch.v(l).norm()));
    }
}
