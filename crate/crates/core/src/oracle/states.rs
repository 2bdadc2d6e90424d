use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DenseSpinSystem, PauliOp, MAX_QUBITS};
use crate::error::{Error, Result};
use crate::lattice::Region;
use crate::numerics::{eig_herm, lanczos_lowest, xlog2x_neg};
use crate::stabilizer::StabilizerTableau;

const LANCZOS_DIM: usize = 60;
const LANCZOS_RESTARTS: usize = 400;

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub vector: DVector<Complex64>,
    pub residual: f64,
}

fn random_start(dim: usize, seed: u64) -> (DVector<f64>, DVector<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let re = DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0));
    let im = DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0));
    (re, im)
}

/// Lowest eigenpair by restarted Lanczos, in real arithmetic when the
/// Hamiltonian matrix is real.
pub fn ground_state_dense(system: &DenseSpinSystem) -> Result<GroundState> {
    let dim = system.dimension();
    let scale = system.norm_bound().max(f64::MIN_POSITIVE);
    let tol = 1e-11 * scale;
    let (re, im) = random_start(dim, 0x5eed);
    let vector: DVector<Complex64> = if dim == 1 {
        DVector::from_element(1, Complex64::new(1.0, 0.0))
    } else if system.is_real() {
        let r = lanczos_lowest(|v| system.apply_real(v), &re, tol, LANCZOS_DIM, LANCZOS_RESTARTS)?;
        r.vector.map(|a| Complex64::new(a, 0.0))
    } else {
        let start = re.zip_map(&im, Complex64::new);
        lanczos_lowest(|v| system.apply(v), &start, tol, LANCZOS_DIM, LANCZOS_RESTARTS)?.vector
    };
    let vector = vector.unscale(vector.norm());
    let hv = system.apply(&vector);
    let energy = vector.dotc(&hv).re;
    let residual = (hv - &vector * Complex64::new(energy, 0.0)).norm();
    if residual > 1e-10 * scale {
        return Err(Error::Numerical(format!("ground state residual {residual:.3e} above 1e-10·‖H‖")));
    }
    Ok(GroundState { energy, vector, residual })
}

fn qubits_of(psi_len: usize) -> Result<usize> {
    if !psi_len.is_power_of_two() || psi_len < 2 {
        return Err(Error::Shape(format!("length {psi_len} is not a qubit state")));
    }
    let n = psi_len.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(Error::Size(format!("{n} qubits above {MAX_QUBITS}")));
    }
    Ok(n)
}

/// Local index of `b` on `sites` (bit `k` ↔ `sites[k]`).
#[inline]
fn gather(b: usize, sites: &[usize]) -> usize {
    sites.iter().enumerate().fold(0, |acc, (k, &q)| acc | (b >> q & 1) << k)
}

/// Amplitudes arranged as a `2^{|I|} × 2^{|O|}` matrix.
fn bipartite_matrix(psi: &DVector<Complex64>, region: &Region) -> Result<DMatrix<Complex64>> {
    let n = qubits_of(psi.len())?;
    if let Some(q) = region.iter().find(|&q| q >= n) {
        return Err(Error::InvalidRegion(format!("qubit {q} outside {n} qubits")));
    }
    let inside = region.as_slice();
    let outside = region.complement(n);
    let outside = outside.as_slice();
    let mut m = DMatrix::zeros(1 << inside.len(), 1 << outside.len());
    for (b, &a) in psi.iter().enumerate() {
        m[(gather(b, inside), gather(b, outside))] = a;
    }
    Ok(m)
}

/// `ρ_I = tr_O |ψ⟩⟨ψ|`.
pub fn reduced_density(psi: &DVector<Complex64>, region: &Region) -> Result<DMatrix<Complex64>> {
    let m = bipartite_matrix(psi, region)?;
    Ok(&m * m.adjoint())
}

/// Partial trace of an `n`-qubit density matrix onto `keep`.
pub fn partial_trace(rho: &DMatrix<Complex64>, n: usize, keep: &Region) -> Result<DMatrix<Complex64>> {
    if rho.nrows() != 1 << n || rho.ncols() != 1 << n {
        return Err(Error::Shape(format!("{}×{} is not a {n}-qubit operator", rho.nrows(), rho.ncols())));
    }
    if let Some(q) = keep.iter().find(|&q| q >= n) {
        return Err(Error::InvalidRegion(format!("qubit {q} outside {n} qubits")));
    }
    let inside = keep.as_slice();
    let outside = keep.complement(n);
    let outside = outside.as_slice();
    let scatter = |a: usize, c: usize| -> usize {
        let mut b = 0;
        for (k, &q) in inside.iter().enumerate() {
            b |= (a >> k & 1) << q;
        }
        for (k, &q) in outside.iter().enumerate() {
            b |= (c >> k & 1) << q;
        }
        b
    };
    let di = 1 << inside.len();
    let mut out = DMatrix::zeros(di, di);
    for c in 0..1usize << outside.len() {
        let rows: Vec<usize> = (0..di).map(|a| scatter(a, c)).collect();
        for (a, &ra) in rows.iter().enumerate() {
            for (a2, &ra2) in rows.iter().enumerate() {
                out[(a, a2)] += rho[(ra, ra2)];
            }
        }
    }
    Ok(out)
}

/// Rényi entropy in bits of a probability vector; `α = 1` is von Neumann,
/// `α = ∞` the min-entropy.
pub fn renyi_from_spectrum(p: &[f64], alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0) {
        return Err(Error::Parameter(format!("Rényi index {alpha} must be non-negative")));
    }
    let p: Vec<f64> = p.iter().map(|&x| x.max(0.0)).collect();
    Ok(if alpha == 1.0 {
        p.iter().map(|&x| xlog2x_neg(x)).sum()
    } else if alpha.is_infinite() {
        -p.iter().copied().fold(0.0, f64::max).log2()
    } else if alpha == 0.0 {
        (p.iter().filter(|&&x| x > 1e-14).count() as f64).log2()
    } else {
        p.iter().map(|&x| x.powf(alpha)).sum::<f64>().log2() / (1.0 - alpha)
    })
}

/// Entropy of `tr_O |ψ⟩⟨ψ|` from the Schmidt coefficients.
pub fn reduced_entropy(psi: &DVector<Complex64>, region: &Region, alpha: f64) -> Result<f64> {
    let m = bipartite_matrix(psi, region)?;
    let norm2 = m.norm_squared();
    let p: Vec<f64> = if m.nrows() == 1 || m.ncols() == 1 {
        vec![1.0]
    } else {
        crate::numerics::svd(&m)?.s.iter().map(|s| s * s / norm2).collect()
    };
    renyi_from_spectrum(&p, alpha)
}

/// State vector of a stabilizer tableau (all generators with eigenvalue +1),
/// by projecting a random vector.
pub fn stabilizer_state(tab: &StabilizerTableau) -> Result<DVector<Complex64>> {
    let n = tab.qubit_count();
    if n > MAX_QUBITS {
        return Err(Error::Size(format!("{n} qubits above {MAX_QUBITS}")));
    }
    let (re, im) = random_start(1 << n, 0x57ab);
    let mut psi = re.zip_map(&im, Complex64::new);
    for k in 0..n {
        let (xs, zs) = tab.generator(k);
        let bits = |v: &[bool]| v.iter().enumerate().fold(0u64, |m, (q, &s)| m | (s as u64) << q);
        let g = PauliOp::hermitian(bits(&xs), bits(&zs));
        let mut gp = DVector::zeros(psi.len());
        g.apply_add(psi.as_slice(), gp.as_mut_slice());
        psi = (psi + gp) * Complex64::new(0.5, 0.0);
    }
    let norm = psi.norm();
    if norm < 1e-8 {
        return Err(Error::Numerical("projection onto the stabilizer state vanished".into()));
    }
    Ok(psi.unscale(norm))
}

/// Entropy spectrum of a Hermitian density matrix (eigenvalues).
pub(crate) fn density_spectrum(rho: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    Ok(eig_herm(rho)?.0)
}
