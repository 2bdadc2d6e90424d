//! Quasi-free fermionic lattice models
//! `H = ½ Σ (f†ᵢAᵢⱼfⱼ − fᵢAᵢⱼf†ⱼ + fᵢBᵢⱼfⱼ − f†ᵢBᵢⱼf†ⱼ)`.
//!
//! The ground state is fixed by `V = |A+B|⁺(A+B)`; the reduced state of a
//! region `I` depends only on the singular values `σ_k` of the principal
//! block `V_I`, each contributing an independent mode with occupation
//! probabilities `(1 ± σ_k)/2`.

mod disorder;
mod scan;
mod symbol;
mod xy;

pub use disorder::{disorder_average, DisorderEnsemble, DisorderReport, DisorderRow};
pub use scan::{entropy_scan_2d, halfspace_entropy, halfspace_scan, EntropyRow, HalfspaceResult};
pub use symbol::{infinite_chain_correlations, InfiniteChain};
pub use xy::{build_xy, periodic_chain_state, spectrum_xy, xy_symbol, XyParams};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lattice::{LatticeGraph, Region};
use crate::numerics::{eig_sym, log_det, max_abs, principal_submatrix, singular_values, SymmetricMatrix};

/// Singular values of `A+B` below this fraction of `‖A+B‖` count as zero modes.
pub const ZERO_MODE_TOL: f64 = 1e-10;
const SIGMA_SLACK: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct QuadraticFermionModel {
    graph: LatticeGraph,
    a: SymmetricMatrix,
    b: DMatrix<f64>,
}

impl QuadraticFermionModel {
    pub fn new(graph: LatticeGraph, a: SymmetricMatrix, b: DMatrix<f64>) -> Result<Self> {
        let n = graph.vertex_count();
        if a.order() != n || b.nrows() != n || b.ncols() != n {
            return Err(Error::Shape(format!("coupling matrices do not match {n} sites")));
        }
        let scale = max_abs(&b).max(a.norm_max()).max(f64::MIN_POSITIVE);
        if max_abs(&(&b + b.transpose())) > 1e-12 * scale {
            return Err(Error::Parameter("pairing matrix B must be antisymmetric".into()));
        }
        Ok(Self { graph, a, b })
    }

    /// Hopping model `A = onsite·1 + staggered·(−1)^{Σ coords} − t·adjacency`, `B = 0`.
    pub fn hopping(graph: LatticeGraph, t: f64, onsite: f64, staggered: f64) -> Result<Self> {
        let n = graph.vertex_count();
        let mut a = DMatrix::zeros(n, n);
        for i in 0..n {
            let parity = graph.coords(i).iter().sum::<usize>() % 2;
            a[(i, i)] = onsite + if parity == 0 { staggered } else { -staggered };
        }
        for (i, j) in graph.edges() {
            a[(i, j)] = -t;
            a[(j, i)] = -t;
        }
        Self::new(graph, SymmetricMatrix::symmetrized(a), DMatrix::zeros(n, n))
    }

    pub fn graph(&self) -> &LatticeGraph {
        &self.graph
    }

    pub fn a(&self) -> &SymmetricMatrix {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn site_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn coupling(&self) -> DMatrix<f64> {
        self.a.matrix() + &self.b
    }

    fn is_isotropic(&self) -> bool {
        self.b.iter().all(|&x| x == 0.0)
    }

    /// Smallest non-zero singular value of `A+B`.
    pub fn gap(&self) -> Result<f64> {
        let s = singular_values(&self.coupling())?;
        let tol = ZERO_MODE_TOL * s.first().copied().unwrap_or(0.0);
        Ok(s.iter().rev().copied().find(|&x| x > tol).unwrap_or(0.0))
    }
}

#[derive(Debug, Clone)]
pub struct FermionicGaussianState {
    pub v: DMatrix<f64>,
    /// Set when `A+B` has zero modes; `V` then describes the average over
    /// the degenerate ground space.
    pub degenerate: bool,
}

/// `V = |A+B|⁺(A+B)`. For `B = 0` this is the matrix sign of `A`.
pub fn ground_state(model: &QuadraticFermionModel) -> Result<FermionicGaussianState> {
    let n = model.site_count();
    if model.is_isotropic() {
        let e = eig_sym(&model.a)?;
        let scale = e.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = ZERO_MODE_TOL * scale;
        let degenerate = e.values.iter().any(|v| v.abs() <= tol);
        let v = e.apply(|x| {
            if x > tol {
                1.0
            } else if x < -tol {
                -1.0
            } else {
                0.0
            }
        });
        return Ok(FermionicGaussianState { v, degenerate });
    }
    let svd = crate::numerics::svd(&model.coupling())?;
    let (u, vt) = (&svd.u, &svd.v_adj);
    let top = svd.s.first().copied().unwrap_or(0.0);
    let tol = ZERO_MODE_TOL * top;
    let mut v = DMatrix::zeros(n, n);
    let mut degenerate = false;
    for k in 0..n {
        if svd.s[k] > tol {
            v += u.column(k) * vt.row(k);
        } else {
            degenerate = true;
        }
    }
    Ok(FermionicGaussianState { v, degenerate })
}

impl FermionicGaussianState {
    pub fn site_count(&self) -> usize {
        self.v.nrows()
    }

    fn check(&self, region: &Region) -> Result<()> {
        match region.as_slice().last() {
            Some(&i) if i >= self.site_count() => {
                Err(Error::InvalidRegion(format!("site {i} outside {} sites", self.site_count())))
            }
            _ => Ok(()),
        }
    }

    /// Principal block `V_I`.
    pub fn block(&self, region: &Region) -> Result<DMatrix<f64>> {
        self.check(region)?;
        Ok(principal_submatrix(&self.v, region.as_slice()))
    }

    /// Singular values of `V_I`, clamped to `[0, 1]`.
    pub fn block_spectrum(&self, region: &Region) -> Result<Vec<f64>> {
        let s = singular_values(&self.block(region)?)?;
        s.into_iter()
            .map(|x| {
                if x > 1.0 + SIGMA_SLACK {
                    Err(Error::InvalidState(format!("singular value {x} of V_I exceeds one")))
                } else {
                    Ok(x.min(1.0))
                }
            })
            .collect()
    }
}

/// Binary entropy kernel `f(x) = −(1−x)/2 log₂((1−x)/2) − (1+x)/2 log₂((1+x)/2)`.
pub fn entropy_kernel(x: f64) -> f64 {
    use crate::numerics::xlog2x_neg;
    xlog2x_neg((1.0 - x) / 2.0) + xlog2x_neg((1.0 + x) / 2.0)
}

/// Rényi entropy of one mode with occupation probabilities `(1 ± σ)/2`.
pub fn mode_entropy(sigma: f64, alpha: f64) -> f64 {
    if alpha == 1.0 {
        return entropy_kernel(sigma);
    }
    let (p, q) = ((1.0 + sigma) / 2.0, (1.0 - sigma) / 2.0);
    if alpha.is_infinite() {
        return -p.log2();
    }
    (p.powf(alpha) + q.powf(alpha)).log2() / (1.0 - alpha)
}

/// Entropy of order `alpha` (1 = von Neumann) of the region, in bits.
pub fn block_entropy(state: &FermionicGaussianState, region: &Region, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Parameter(format!("Renyi order {alpha} must be positive")));
    }
    Ok(state.block_spectrum(region)?.iter().map(|&s| mode_entropy(s, alpha)).sum())
}

/// `(tr[1 − V_IV_Iᵀ], tr[(1 − V_IV_Iᵀ)^{1/2}])`, which bracket the von Neumann entropy.
pub fn entropy_bounds(state: &FermionicGaussianState, region: &Region) -> Result<(f64, f64)> {
    let s = state.block_spectrum(region)?;
    let lower = s.iter().map(|x| 1.0 - x * x).sum();
    let upper = s.iter().map(|x| (1.0 - x * x).max(0.0).sqrt()).sum();
    Ok((lower, upper))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleCopy {
    /// `log₂⌊1/λ_max⌋`.
    pub floor: f64,
    /// `−log₂ λ_max`.
    pub smooth: f64,
    /// Largest eigenvalue `λ_max = ‖ρ_I‖_∞ = Π (1+σ_k)/2`.
    pub largest_eigenvalue: f64,
}

pub fn single_copy_entanglement(state: &FermionicGaussianState, region: &Region) -> Result<SingleCopy> {
    let s = state.block_spectrum(region)?;
    let smooth: f64 = s.iter().map(|x| -((1.0 + x) / 2.0).log2()).sum();
    let inv = 2f64.powf(smooth);
    // guard against 1/λ landing a rounding error below an integer
    let floor_count = if (inv - inv.round()).abs() < 1e-9 * inv { inv.round() } else { inv.floor() };
    Ok(SingleCopy { floor: floor_count.max(1.0).log2(), smooth, largest_eigenvalue: 2f64.powf(-smooth) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBound {
    /// `−log₂‖ρ_I‖_∞ = −Σ log₂((1+σ_k)/2)`.
    pub min_entropy: f64,
    /// `−½ log₂|det V_I|`; `+∞` when `V_I` is singular.
    pub det_bound: f64,
}

impl NormBound {
    /// Per mode `(1+σ)/2 ≥ √σ`, so `min_entropy ≤ det_bound` always holds.
    pub fn holds(&self) -> bool {
        self.min_entropy <= self.det_bound + 1e-10
    }
}

/// Compares the single-copy (min-)entropy of a block with `−½ log₂|det V_I|`,
/// the quantity that Toeplitz asymptotics can reach without singular values.
pub fn operator_norm_log_bound(state: &FermionicGaussianState, region: &Region) -> Result<NormBound> {
    let min_entropy = single_copy_entanglement(state, region)?.smooth;
    let (sign, log_abs) = log_det(&state.block(region)?)?;
    let det_bound = if sign == 0.0 { f64::INFINITY } else { -0.5 * log_abs / std::f64::consts::LN_2 };
    Ok(NormBound { min_entropy, det_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Boundary;
    use crate::numerics::{fit_log_scaling, DEFAULT_WINDOW};

    #[test]
    fn filled_product_state() {
        let g = LatticeGraph::chain(6, Boundary::Open).unwrap();
        let m = QuadraticFermionModel::new(g, SymmetricMatrix::identity(6), DMatrix::zeros(6, 6)).unwrap();
        let s = ground_state(&m).unwrap();
        assert!(max_abs(&(&s.v - DMatrix::identity(6, 6))) < 1e-14);
        assert!(!s.degenerate);
        let r = Region::interval(1, 3);
        assert_eq!(block_entropy(&s, &r, 1.0).unwrap(), 0.0);
        assert_eq!(entropy_bounds(&s, &r).unwrap(), (0.0, 0.0));
        let sc = single_copy_entanglement(&s, &r).unwrap();
        assert_eq!((sc.floor, sc.smooth), (0.0, 0.0));
        let nb = operator_norm_log_bound(&s, &r).unwrap();
        assert!(nb.min_entropy.abs() < 1e-15 && nb.det_bound.abs() < 1e-15);
    }

    #[test]
    fn kernel_endpoints() {
        assert_eq!(entropy_kernel(1.0), 0.0);
        assert_eq!(entropy_kernel(0.0), 1.0);
        // maximally mixed mode
        let s = FermionicGaussianState { v: DMatrix::zeros(1, 1), degenerate: true };
        let r = Region::interval(0, 1);
        assert_eq!(block_entropy(&s, &r, 1.0).unwrap(), 1.0);
        assert_eq!(entropy_bounds(&s, &r).unwrap(), (1.0, 1.0));
        let sc = single_copy_entanglement(&s, &r).unwrap();
        assert_eq!(sc.largest_eigenvalue, 0.5);
        assert_eq!((sc.floor, sc.smooth), (1.0, 1.0));
        assert!(operator_norm_log_bound(&s, &r).unwrap().det_bound.is_infinite());
    }

    #[test]
    fn oversized_singular_value_is_invalid() {
        let s = FermionicGaussianState { v: DMatrix::from_element(1, 1, 1.5), degenerate: false };
        assert!(matches!(block_entropy(&s, &Region::interval(0, 1), 1.0), Err(Error::InvalidState(_))));
    }

    // per-mode Rényi against diagonalising the 2x2 mode density matrix
    #[test]
    fn mode_renyi_matches_two_level_density_matrix() {
        for &sigma in &[0.0, 0.3, 0.77, 0.999] {
            let rho = SymmetricMatrix::from_diagonal(&[(1.0 + sigma) / 2.0, (1.0 - sigma) / 2.0]);
            let p = eig_sym(&rho).unwrap().values;
            for &alpha in &[0.5, 2.0, 3.0] {
                let oracle = (p[0].powf(alpha) + p[1].powf(alpha)).log2() / (1.0 - alpha);
                assert!((mode_entropy(sigma, alpha) - oracle).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn general_path_isometry_and_complementarity() {
        let p = XyParams::new(0.6, 1.5, 20, Boundary::Open).unwrap();
        let s = ground_state(&build_xy(&p).unwrap()).unwrap();
        assert!(!s.degenerate);
        assert!(max_abs(&(s.v.transpose() * &s.v - DMatrix::identity(20, 20))) < 1e-9);
        for len in 1..20 {
            let r = Region::interval(0, len);
            let c = r.complement(20);
            let (a, b) = (block_entropy(&s, &r, 1.0).unwrap(), block_entropy(&s, &c, 1.0).unwrap());
            assert!((a - b).abs() < 1e-8);
            let (lo, hi) = entropy_bounds(&s, &r).unwrap();
            assert!(lo <= a + 1e-9 && a <= hi + 1e-9);
            let sc = single_copy_entanglement(&s, &r).unwrap();
            assert!(sc.smooth <= a + 1e-12 && sc.floor <= sc.smooth + 1e-12);
            assert!(operator_norm_log_bound(&s, &r).unwrap().holds());
        }
    }

    #[test]
    fn xx_block_sandwich_and_scaling() {
        let s = periodic_chain_state(2048, |q| num_complex::Complex64::new(-q.cos(), 0.0));
        let (lo, hi) = entropy_bounds(&s, &Region::interval(0, 64)).unwrap();
        let e = block_entropy(&s, &Region::interval(0, 64), 1.0).unwrap();
        assert!(lo < e && e < hi, "{lo} {e} {hi}");
        let samples: Vec<(f64, f64)> = (16..=128)
            .step_by(8)
            .map(|n| (n as f64, block_entropy(&s, &Region::interval(0, n), 1.0).unwrap()))
            .collect();
        let fit = fit_log_scaling(&samples, DEFAULT_WINDOW).unwrap();
        assert!((fit.slope - 1.0 / 3.0).abs() < 0.02, "slope {}", fit.slope);
    }

    #[test]
    fn critical_ising_norm_bound_grows_and_gapped_saturates() {
        let crit = XyParams::new(1.0, 1.0, 1024, Boundary::Periodic).unwrap().periodic_state();
        let vals: Vec<f64> = [8, 16, 32, 64, 128]
            .iter()
            .map(|&n| operator_norm_log_bound(&crit, &Region::interval(0, n)).unwrap().det_bound)
            .collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]), "{vals:?}");
        let gapped = XyParams::new(1.0, 2.0, 1024, Boundary::Periodic).unwrap().periodic_state();
        let b64 = operator_norm_log_bound(&gapped, &Region::interval(0, 64)).unwrap();
        let b128 = operator_norm_log_bound(&gapped, &Region::interval(0, 128)).unwrap();
        assert!((b128.det_bound - b64.det_bound).abs() < 1e-4);
        assert!(b64.holds() && b128.holds());
    }

    #[test]
    fn gap_of_xy_chain() {
        let m = build_xy(&XyParams::new(1.0, 2.0, 16, Boundary::Periodic).unwrap()).unwrap();
        let spec = spectrum_xy(&XyParams::new(1.0, 2.0, 16, Boundary::Periodic).unwrap());
        let min = spec.iter().copied().fold(f64::INFINITY, f64::min);
        assert!((m.gap().unwrap() - min).abs() < 1e-10);
    }
}
