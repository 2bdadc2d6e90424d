use nalgebra::DVector;
use num_complex::Complex64;

use super::MatrixProductState;
use crate::error::{Error, Result};
use crate::lattice::Region;
use crate::oracle::reduced_entropy;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxRow {
    pub bond_dim: usize,
    /// Trace distance `√(1 − |⟨ψ|φ⟩|²)` to the normalized truncation `φ`.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxReport {
    pub rows: Vec<ApproxRow>,
    /// Half-chain Rényi entropies of the target for α = ½, 1, 2.
    pub half_renyi: [(f64, f64); 3],
}

impl ApproxReport {
    /// Smallest bond dimension of the grid reaching `error ≤ eps`.
    pub fn required_bond_dim(&self, eps: f64) -> Option<usize> {
        self.rows.iter().find(|r| r.error <= eps).map(|r| r.bond_dim)
    }
}

/// Truncation error of the sequential-SVD MPS of a dense qubit state at
/// each bond dimension of `grid`.
pub fn approximability_experiment(psi: &DVector<Complex64>, grid: &[usize]) -> Result<ApproxReport> {
    if !psi.len().is_power_of_two() || psi.len() < 4 {
        return Err(Error::Shape(format!("length {} is not a multi-qubit state", psi.len())));
    }
    let n = psi.len().trailing_zeros() as usize;
    let target = psi.unscale(psi.norm());
    let mut rows = Vec::with_capacity(grid.len());
    for &d in grid {
        if d == 0 {
            return Err(Error::Parameter("bond dimension must be positive".into()));
        }
        let phi = MatrixProductState::from_dense(&target, 2, n, d)?.to_dense()?;
        let ov = target.dotc(&phi).norm() / phi.norm();
        rows.push(ApproxRow { bond_dim: d, error: (1.0 - ov * ov).max(0.0).sqrt() });
    }
    let half = Region::interval(0, n / 2);
    let mut half_renyi = [(0.5, 0.0), (1.0, 0.0), (2.0, 0.0)];
    for entry in half_renyi.iter_mut() {
        entry.1 = reduced_entropy(&target, &half, entry.0)?;
    }
    Ok(ApproxReport { rows, half_renyi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Boundary;
    use crate::oracle::{ground_state_dense, DenseSpinSystem};

    #[test]
    fn product_state_is_exact_at_bond_one() {
        let mut psi = DVector::zeros(1 << 6);
        psi[0b010011] = Complex64::new(1.0, 0.0);
        let r = approximability_experiment(&psi, &[1, 2]).unwrap();
        assert!(r.rows.iter().all(|row| row.error < 1e-12));
        assert_eq!(r.required_bond_dim(1e-10), Some(1));
    }

    #[test]
    fn gapped_ground_state_needs_small_bond() {
        let sys = DenseSpinSystem::ising(12, 1.0, 2.0, Boundary::Open).unwrap();
        let g = ground_state_dense(&sys).unwrap();
        let r = approximability_experiment(&g.vector, &[1, 2, 4, 8, 16]).unwrap();
        assert!(r.rows.windows(2).all(|w| w[1].error <= w[0].error + 1e-12));
        assert!(r.rows[3].error < 1e-6, "{:?}", r.rows);
        let (s05, s1, s2) = (r.half_renyi[0].1, r.half_renyi[1].1, r.half_renyi[2].1);
        assert!(s05 >= s1 && s1 >= s2);
    }
}
