use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{FermionicGaussianState, QuadraticFermionModel, ZERO_MODE_TOL};
use crate::error::{Error, Result};
use crate::lattice::{Boundary, LatticeGraph};
use crate::numerics::SymmetricMatrix;

/// Jordan-Wigner image of the XY chain with anisotropy `gamma` and field `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XyParams {
    pub gamma: f64,
    pub lambda: f64,
    pub n: usize,
    pub bc: Boundary,
}

impl XyParams {
    pub fn new(gamma: f64, lambda: f64, n: usize, bc: Boundary) -> Result<Self> {
        if !gamma.is_finite() || !lambda.is_finite() {
            return Err(Error::Parameter("XY couplings must be finite".into()));
        }
        if n < 2 {
            return Err(Error::Parameter(format!("XY chain needs N >= 2, got {n}")));
        }
        if bc == Boundary::Periodic && n < 3 {
            return Err(Error::Parameter("periodic XY chain needs N >= 3".into()));
        }
        Ok(Self { gamma, lambda, n, bc })
    }

    /// Eigenvalue of the circulant `A+B` at momentum `q`: `λ − cos q + iγ sin q`.
    pub fn dispersion(&self, q: f64) -> Complex64 {
        Complex64::new(self.lambda - q.cos(), self.gamma * q.sin())
    }

    /// Ground state of the periodic chain from its momentum-space symbol,
    /// without forming or decomposing `A+B`.
    pub fn periodic_state(&self) -> FermionicGaussianState {
        let p = *self;
        periodic_chain_state(self.n, move |q| p.dispersion(q))
    }
}

/// Single-particle energies. Periodic chains use the closed form
/// `E_k = |λ − cos(2πk/N) + iγ sin(2πk/N)|` for `k = 0..N`; open chains return
/// the singular values of `A+B` in ascending order.
pub fn spectrum_xy(params: &XyParams) -> Vec<f64> {
    match params.bc {
        Boundary::Periodic => {
            (0..params.n).map(|k| params.dispersion(2.0 * PI * k as f64 / params.n as f64).norm()).collect()
        }
        Boundary::Open => {
            let m = build_xy(params).expect("validated parameters");
            let mut s = crate::numerics::singular_values(&m.coupling()).expect("SVD of XY coupling");
            s.reverse();
            s
        }
    }
}

/// `A_ii = λ`, `A_ij = −1/2` on bonds, `B_{i,i+1} = −B_{i+1,i} = γ/2`.
pub fn build_xy(params: &XyParams) -> Result<QuadraticFermionModel> {
    let n = params.n;
    let graph = LatticeGraph::chain(n, params.bc)?;
    let mut a = DMatrix::from_diagonal_element(n, n, params.lambda);
    let mut b = DMatrix::zeros(n, n);
    let bonds = if params.bc == Boundary::Periodic { n } else { n - 1 };
    for i in 0..bonds {
        let j = (i + 1) % n;
        a[(i, j)] = -0.5;
        a[(j, i)] = -0.5;
        b[(i, j)] = params.gamma / 2.0;
        b[(j, i)] = -params.gamma / 2.0;
    }
    QuadraticFermionModel::new(graph, SymmetricMatrix::symmetrized(a), b)
}

/// Symbol `g(φ) = μ(φ)/|μ(φ)|` of the infinite XY chain (zero where `μ` vanishes).
pub fn xy_symbol(gamma: f64, lambda: f64) -> impl Fn(f64) -> Complex64 {
    move |q| {
        let mu = Complex64::new(lambda - q.cos(), gamma * q.sin());
        let r = mu.norm();
        if r == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            mu / r
        }
    }
}

/// Ground state of a translation-invariant ring whose coupling `A+B` has
/// eigenvalue `mu(q)` on the plane wave `e^{iqj}`. Requires `mu(−q) = conj mu(q)`
/// so that `V` is real. `V_ij = v_{(i−j) mod N}` with
/// `v_l = (1/N) Σ_q g(q) e^{iql}`, `g = mu/|mu|`.
pub fn periodic_chain_state(n: usize, mu: impl Fn(f64) -> Complex64) -> FermionicGaussianState {
    let qs: Vec<Complex64> = (0..n).map(|k| mu(2.0 * PI * k as f64 / n as f64)).collect();
    let top = qs.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let tol = ZERO_MODE_TOL * top;
    let mut degenerate = false;
    let g: Vec<Complex64> = qs
        .iter()
        .map(|z| {
            let r = z.norm();
            if r <= tol {
                degenerate = true;
                Complex64::new(0.0, 0.0)
            } else {
                z / r
            }
        })
        .collect();
    // exact table of e^{2πi m/N}; k·l is reduced mod N before lookup
    let roots: Vec<Complex64> = (0..n).map(|m| Complex64::from_polar(1.0, 2.0 * PI * m as f64 / n as f64)).collect();
    let v: Vec<f64> = (0..n)
        .map(|l| {
            let s: f64 = g.iter().enumerate().map(|(k, gk)| (gk * roots[(k * l) % n]).re).sum();
            s / n as f64
        })
        .collect();
    let v = DMatrix::from_fn(n, n, |i, j| v[(i + n - j) % n]);
    FermionicGaussianState { v, degenerate }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermionic::ground_state;
    use crate::numerics::max_abs;

    #[test]
    fn builder_shapes() {
        let p = XyParams::new(0.0, 0.3, 4, Boundary::Periodic).unwrap();
        let m = build_xy(&p).unwrap();
        assert!(m.b().iter().all(|&x| x == 0.0));
        let a = m.a().matrix();
        let off = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).filter(|&(i, j)| i != j && a[(i, j)] == -0.5);
        assert_eq!(off.count(), 8);
        let open = build_xy(&XyParams::new(1.0, 0.3, 4, Boundary::Open).unwrap()).unwrap();
        assert_eq!(open.a().matrix()[(0, 3)], 0.0);
        assert_eq!(open.b()[(3, 0)], 0.0);
        assert_eq!(open.b()[(0, 1)], 0.5);
        assert!(XyParams::new(0.0, 0.0, 1, Boundary::Open).is_err());
    }

    #[test]
    fn spectrum_closed_forms() {
        let flat = spectrum_xy(&XyParams::new(1.0, 0.0, 33, Boundary::Periodic).unwrap());
        assert!(flat.iter().all(|e| (e - 1.0).abs() < 1e-14));
        for n in [8, 64, 1000] {
            let gapped = spectrum_xy(&XyParams::new(1.0, 2.0, n, Boundary::Periodic).unwrap());
            assert!(gapped.iter().all(|&e| e >= 1.0 - 1e-14));
        }
        let gaps: Vec<f64> = [16, 64, 256]
            .iter()
            .map(|&n| {
                spectrum_xy(&XyParams::new(1.0, 1.0, n, Boundary::Periodic).unwrap())
                    .into_iter()
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        assert!(gaps.iter().all(|&g| g < 1e-12));
        let open: Vec<f64> = [16, 64, 256]
            .iter()
            .map(|&n| spectrum_xy(&XyParams::new(1.0, 1.0, n, Boundary::Open).unwrap())[0])
            .collect();
        assert!(open[0] > open[1] && open[1] > open[2]);
    }

    #[test]
    fn circulant_path_matches_svd_path() {
        for &(gamma, lambda) in &[(0.0, 0.3), (1.0, 2.0), (0.5, 0.7), (1.0, 0.0)] {
            let p = XyParams::new(gamma, lambda, 30, Boundary::Periodic).unwrap();
            let fast = p.periodic_state();
            let slow = ground_state(&build_xy(&p).unwrap()).unwrap();
            assert_eq!(fast.degenerate, slow.degenerate);
            assert!(max_abs(&(&fast.v - &slow.v)) < 1e-10, "γ={gamma} λ={lambda}");
        }
    }

    #[test]
    fn critical_ising_ring_rank_deficiency() {
        // μ(0) = 0 so A+B loses rank; the flag must agree with an SVD rank count
        let p = XyParams::new(1.0, 1.0, 12, Boundary::Periodic).unwrap();
        let m = build_xy(&p).unwrap();
        let s = crate::numerics::singular_values(&m.coupling()).unwrap();
        let rank_deficient = s.iter().any(|&x| x <= ZERO_MODE_TOL * s[0]);
        assert!(rank_deficient);
        assert!(ground_state(&m).unwrap().degenerate);
        assert!(p.periodic_state().degenerate);
    }

    #[test]
    fn xx_circulant_entries() {
        // N ≡ 2 mod 4 has no zero mode; v_l = (1/N) Σ sign(−cos q) cos(ql)
        let n = 30;
        let s = XyParams::new(0.0, 0.0, n, Boundary::Periodic).unwrap().periodic_state();
        for l in 0..n {
            let direct: f64 = (0..n)
                .map(|k| {
                    let q = 2.0 * PI * k as f64 / n as f64;
                    (-q.cos()).signum() * (q * l as f64).cos()
                })
                .sum::<f64>()
                / n as f64;
            assert!((s.v[(l, 0)] - direct).abs() < 1e-13);
        }
    }
}
