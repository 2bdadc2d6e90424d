use nalgebra::{DMatrix, DVector};

use super::{
    scale_cols, scale_rows, truncated_svd, CanonicalForm, LocalHamiltonian1D, MatrixProductState, Mpo, Scalar,
};
use crate::error::{Error, Result};
use crate::numerics::lanczos_lowest;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DmrgConfig {
    pub max_bond: usize,
    pub max_sweeps: usize,
    /// Converged when the energy changes by less than this over a sweep.
    pub energy_tol: f64,
    /// Residual target of the local eigensolver.
    pub lanczos_tol: f64,
    pub seed: u64,
}

impl DmrgConfig {
    pub fn new(max_bond: usize) -> Self {
        Self { max_bond, max_sweeps: 40, energy_tol: 1e-9, lanczos_tol: 1e-10, seed: 7 }
    }
}

#[derive(Debug, Clone)]
pub struct DmrgResult<T: Scalar> {
    pub mps: MatrixProductState<T>,
    /// `⟨ψ|H|ψ⟩` of the returned state.
    pub energy: f64,
    /// Energy after each full (right + left) sweep.
    pub sweep_energies: Vec<f64>,
    /// Largest discarded weight in each sweep.
    pub truncation: Vec<f64>,
    pub converged: bool,
    /// The sweep energies never increased.
    pub monotone: bool,
}

type Env<T> = Vec<DMatrix<T>>;

struct Sweeper<'a, T: Scalar> {
    mpo: &'a Mpo<T>,
    mps: MatrixProductState<T>,
    left: Vec<Option<Env<T>>>,
    right: Vec<Option<Env<T>>>,
}

impl<'a, T: Scalar> Sweeper<'a, T> {
    fn w(&self) -> usize {
        self.mpo.bond_dim()
    }

    fn boundary(&self, index: usize) -> Env<T> {
        (0..self.w()).map(|a| DMatrix::from_element(1, 1, if a == index { T::one() } else { T::zero() })).collect()
    }

    /// Environment of sites `< j+1` from the one of sites `< j`.
    fn grow_left(&self, env: &Env<T>, j: usize) -> Env<T> {
        let site = &self.mps.tensors()[j];
        let grid = &self.mpo.sites[j];
        let d = self.mpo.d;
        let dr = site[0].ncols();
        let w = self.w();
        let mut out = vec![DMatrix::zeros(dr, dr); w];
        for a in 0..w {
            if env[a].iter().all(|x| *x == T::zero()) {
                continue;
            }
            let la: Vec<DMatrix<T>> = (0..d).map(|s| site[s].adjoint() * &env[a]).collect();
            for b in 0..w {
                let Some(o) = &grid[a][b] else { continue };
                for s in 0..d {
                    for s2 in 0..d {
                        let c = o[(s, s2)];
                        if c != T::zero() {
                            out[b] += (&la[s] * &site[s2]) * c;
                        }
                    }
                }
            }
        }
        out
    }

    /// Environment of sites `≥ j` from the one of sites `≥ j+1`.
    fn grow_right(&self, env: &Env<T>, j: usize) -> Env<T> {
        let site = &self.mps.tensors()[j];
        let grid = &self.mpo.sites[j];
        let d = self.mpo.d;
        let dl = site[0].nrows();
        let w = self.w();
        let mut out = vec![DMatrix::zeros(dl, dl); w];
        for b in 0..w {
            if env[b].iter().all(|x| *x == T::zero()) {
                continue;
            }
            let rb: Vec<DMatrix<T>> = (0..d).map(|s2| &env[b] * site[s2].transpose()).collect();
            for a in 0..w {
                let Some(o) = &grid[a][b] else { continue };
                for s in 0..d {
                    let bra = site[s].map(|x| x.conjugate());
                    for s2 in 0..d {
                        let c = o[(s, s2)];
                        if c != T::zero() {
                            out[a] += (&bra * &rb[s2]) * c;
                        }
                    }
                }
            }
        }
        out
    }

    /// `H_eff Θ` for the two-site block at `(j, j+1)`; `theta[s1·d + s2]` is `D_l × D_r`.
    fn apply_two_site(&self, j: usize, theta: &[DMatrix<T>]) -> Vec<DMatrix<T>> {
        let d = self.mpo.d;
        let w = self.w();
        let l = self.left[j].as_ref().expect("left environment");
        let r = self.right[j + 2].as_ref().expect("right environment");
        let (w1, w2) = (&self.mpo.sites[j], &self.mpo.sites[j + 1]);
        let (dl, dr) = (theta[0].nrows(), theta[0].ncols());
        // p[c][s1'·d + s2'] = Θ R[c]ᵀ
        let rt: Vec<Option<DMatrix<T>>> =
            r.iter().map(|m| if m.iter().all(|x| *x == T::zero()) { None } else { Some(m.transpose()) }).collect();
        let p: Vec<Option<Vec<DMatrix<T>>>> =
            rt.iter().map(|m| m.as_ref().map(|m| theta.iter().map(|t| t * m).collect())).collect();
        // z[b][s1'·d + s2] = Σ_{c,s2'} W2[b][c]_{s2 s2'} p[c][s1'·d + s2']
        let mut z: Vec<Option<Vec<DMatrix<T>>>> = vec![None; w];
        for b in 0..w {
            for c in 0..w {
                let (Some(o), Some(pc)) = (&w2[b][c], &p[c]) else { continue };
                let zb = z[b].get_or_insert_with(|| vec![DMatrix::zeros(dl, dr); d * d]);
                for s1p in 0..d {
                    for s2 in 0..d {
                        for s2p in 0..d {
                            let coef = o[(s2, s2p)];
                            if coef != T::zero() {
                                zb[s1p * d + s2] += &pc[s1p * d + s2p] * coef;
                            }
                        }
                    }
                }
            }
        }
        let mut y = vec![DMatrix::zeros(dl, dr); d * d];
        for a in 0..w {
            if l[a].iter().all(|x| *x == T::zero()) {
                continue;
            }
            let mut q: Option<Vec<DMatrix<T>>> = None;
            for b in 0..w {
                let (Some(o), Some(zb)) = (&w1[a][b], &z[b]) else { continue };
                let qa = q.get_or_insert_with(|| vec![DMatrix::zeros(dl, dr); d * d]);
                for s1 in 0..d {
                    for s1p in 0..d {
                        let coef = o[(s1, s1p)];
                        if coef == T::zero() {
                            continue;
                        }
                        for s2 in 0..d {
                            qa[s1 * d + s2] += &zb[s1p * d + s2] * coef;
                        }
                    }
                }
            }
            if let Some(qa) = q {
                for (yk, qk) in y.iter_mut().zip(&qa) {
                    *yk += &l[a] * qk;
                }
            }
        }
        y
    }

    fn theta(&self, j: usize) -> Vec<DMatrix<T>> {
        let t = self.mps.tensors();
        let d = self.mpo.d;
        let mut out = Vec::with_capacity(d * d);
        for s1 in 0..d {
            for s2 in 0..d {
                out.push(&t[j][s1] * &t[j + 1][s2]);
            }
        }
        out
    }

    /// Optimizes bond `(j, j+1)`; returns `(energy, discarded weight)`.
    fn optimize(&mut self, j: usize, cfg: &DmrgConfig, moving_right: bool) -> Result<(f64, f64)> {
        let d = self.mpo.d;
        let theta = self.theta(j);
        let (dl, dr) = (theta[0].nrows(), theta[0].ncols());
        let block = dl * dr;
        let flatten = |ms: &[DMatrix<T>]| -> DVector<T> {
            DVector::from_iterator(block * d * d, ms.iter().flat_map(|m| m.iter().copied()))
        };
        let unflatten = |v: &DVector<T>| -> Vec<DMatrix<T>> {
            (0..d * d).map(|k| DMatrix::from_column_slice(dl, dr, &v.as_slice()[k * block..(k + 1) * block])).collect()
        };
        let start = flatten(&theta);
        let res = lanczos_lowest(|v| flatten(&self.apply_two_site(j, &unflatten(v))), &start, cfg.lanczos_tol, 40, 20)?;
        let opt = unflatten(&res.vector);
        let m = DMatrix::from_fn(d * dl, d * dr, |row, col| {
            let (s1, l) = (row / dl, row % dl);
            let (s2, r) = (col / dr, col % dr);
            opt[s1 * d + s2][(l, r)]
        });
        let (mut u, s, mut vt, discarded) = truncated_svd(m, cfg.max_bond)?;
        let norm = s.iter().map(|x| x * x).sum::<f64>().sqrt();
        let s: Vec<f64> = s.iter().map(|x| x / norm).collect();
        if moving_right {
            scale_rows(&mut vt, &s);
        } else {
            scale_cols(&mut u, &s);
        }
        self.mps.set_left_matrix(j, &u);
        self.mps.set_right_matrix(j + 1, &vt);
        Ok((res.value, discarded))
    }
}

/// Two-site DMRG ground-state search on an open chain.
pub fn dmrg_ground_state<T: Scalar>(h: &LocalHamiltonian1D, cfg: &DmrgConfig) -> Result<DmrgResult<T>> {
    if cfg.max_bond == 0 {
        return Err(Error::Parameter("bond dimension must be at least 1".into()));
    }
    let n = h.site_count();
    let mpo = h.mpo::<T>()?;
    let mut mps = MatrixProductState::<T>::random(n, h.local_dim(), cfg.max_bond.min(4), cfg.seed)?;
    mps.canonicalize(0)?;
    let mut sw = Sweeper { mpo: &mpo, mps, left: vec![None; n + 1], right: vec![None; n + 1] };
    let w = sw.w();
    sw.left[0] = Some(sw.boundary(w - 1));
    sw.right[n] = Some(sw.boundary(0));
    for j in (2..n).rev() {
        let env = sw.grow_right(sw.right[j + 1].as_ref().expect("set"), j);
        sw.right[j] = Some(env);
    }
    let mut sweep_energies = Vec::new();
    let mut truncation = Vec::new();
    let mut converged = false;
    let mut monotone = true;
    for _ in 0..cfg.max_sweeps {
        let mut energy = f64::NAN;
        let mut worst: f64 = 0.0;
        for j in 0..n - 1 {
            let (e, disc) = sw.optimize(j, cfg, true)?;
            energy = e;
            worst = worst.max(disc);
            if j + 2 < n {
                let env = sw.grow_left(sw.left[j].as_ref().expect("set"), j);
                sw.left[j + 1] = Some(env);
            }
        }
        for j in (0..n - 1).rev() {
            let (e, disc) = sw.optimize(j, cfg, false)?;
            energy = e;
            worst = worst.max(disc);
            if j > 0 {
                let env = sw.grow_right(sw.right[j + 2].as_ref().expect("set"), j + 1);
                sw.right[j + 1] = Some(env);
            }
        }
        if let Some(&prev) = sweep_energies.last() {
            let prev: f64 = prev;
            if energy > prev + 1e-10 * prev.abs().max(1.0) {
                monotone = false;
            }
            sweep_energies.push(energy);
            truncation.push(worst);
            if (prev - energy).abs() < cfg.energy_tol {
                converged = true;
                break;
            }
        } else {
            sweep_energies.push(energy);
            truncation.push(worst);
        }
    }
    let mut mps = sw.mps;
    mps.set_form(CanonicalForm::Mixed(0));
    let energy = mpo_energy(&mpo, &mps)?;
    Ok(DmrgResult { mps, energy, sweep_energies, truncation, converged, monotone })
}

/// `⟨ψ|H|ψ⟩ / ⟨ψ|ψ⟩` by contracting the MPO.
fn mpo_energy<T: Scalar>(mpo: &Mpo<T>, mps: &MatrixProductState<T>) -> Result<f64> {
    let n = mps.site_count();
    let sw = Sweeper { mpo, mps: mps.clone(), left: Vec::new(), right: Vec::new() };
    let w = sw.w();
    let mut env = sw.boundary(w - 1);
    for j in 0..n {
        env = sw.grow_left(&env, j);
    }
    let norm = mps.overlap(mps)?;
    Ok((env[0][(0, 0)] / norm).real())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Boundary, Region};
    use crate::numerics::{eig_sym, SymmetricMatrix};
    use crate::oracle::{ground_state_dense, reduced_entropy, DenseSpinSystem};
    use num_complex::Complex64;

    #[test]
    fn two_sites_are_exact() {
        let h = LocalHamiltonian1D::ising(2, 1.0, 0.6).unwrap();
        let r = dmrg_ground_state::<f64>(&h, &DmrgConfig::new(4)).unwrap();
        let dense = DenseSpinSystem::ising(2, 1.0, 0.6, Boundary::Open).unwrap().matrix_real().unwrap();
        let exact = eig_sym(&SymmetricMatrix::symmetrized(dense)).unwrap().values[0];
        assert!((r.energy - exact).abs() < 1e-12);
    }

    #[test]
    fn gapped_ising_matches_exact_diagonalization() {
        let n = 10;
        let h = LocalHamiltonian1D::ising(n, 1.0, 2.0).unwrap();
        let r = dmrg_ground_state::<f64>(&h, &DmrgConfig::new(16)).unwrap();
        assert!(r.converged && r.monotone, "{:?}", r.sweep_energies);
        let ed = ground_state_dense(&DenseSpinSystem::ising(n, 1.0, 2.0, Boundary::Open).unwrap()).unwrap();
        assert!(((r.energy - ed.energy) / ed.energy).abs() < 1e-8);
        let prof = r.mps.entropy_profile(1.0).unwrap();
        for b in 1..n {
            let exact = reduced_entropy(&ed.vector, &Region::interval(0, b), 1.0).unwrap();
            assert!((prof[b - 1] - exact).abs() < 1e-6);
        }
        assert!(r.mps.max_bond() <= 16);
    }

    #[test]
    fn complex_arithmetic_agrees() {
        let h = LocalHamiltonian1D::xx(8).unwrap();
        let a = dmrg_ground_state::<f64>(&h, &DmrgConfig::new(16)).unwrap();
        let b = dmrg_ground_state::<Complex64>(&h, &DmrgConfig::new(16)).unwrap();
        assert!((a.energy - b.energy).abs() < 1e-9);
    }

    #[test]
    fn zero_bond_dimension_is_rejected() {
        let h = LocalHamiltonian1D::ising(4, 1.0, 1.0).unwrap();
        assert!(dmrg_ground_state::<f64>(&h, &DmrgConfig::new(0)).is_err());
    }
}
