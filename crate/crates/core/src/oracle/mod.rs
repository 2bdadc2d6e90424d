//! Exact-diagonalization reference engine for small qubit systems.
//!
//! Basis state `b` has qubit `q` in `|1⟩` when bit `q` of `b` is set. A
//! Pauli operator is stored as `c · X^x Z^z` (Z applied first), so
//! `Y = i·XZ` and `c·X^x Z^z |b⟩ = c (−1)^{|b ∧ z|} |b ⊕ x⟩`.

mod dynamics;
mod pauli;
mod states;
mod thermal;

pub use dynamics::{lieb_robinson_profile, propagate_dense, propagate_series, LrProfile, LrRow, Propagator};
pub use pauli::PauliOp;
pub use states::{
    ground_state_dense, partial_trace, reduced_density, reduced_entropy, renyi_from_spectrum, stabilizer_state,
    GroundState,
};
pub use thermal::{
    classical_spin_mutual_information, thermal_mutual_information, thermal_state, ClassicalIsing, ClassicalMi,
    ThermalMi,
};

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fermionic::QuadraticFermionModel;
use crate::lattice::{Boundary, Region};

/// Largest qubit count handled by the Lanczos ground-state path.
pub const MAX_QUBITS: usize = 14;
/// Largest qubit count for full diagonalization (propagation, thermal states).
pub const MAX_DENSE_QUBITS: usize = 12;

const HERMITIAN_TOL: f64 = 1e-12;

/// Hamiltonian as a sum of Pauli strings, applied lazily or densified on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSpinSystem {
    n: usize,
    terms: Vec<PauliOp>,
}

/// Terms split by support relative to a region: inside, crossing, outside.
#[derive(Debug, Clone, PartialEq)]
pub struct TermPartition {
    pub inside: Vec<PauliOp>,
    pub boundary: Vec<PauliOp>,
    pub outside: Vec<PauliOp>,
}

impl DenseSpinSystem {
    /// Merges equal Pauli strings and checks Hermiticity term by term.
    pub fn new(n: usize, terms: Vec<PauliOp>) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Size(format!("{n} qubits outside 1..={MAX_QUBITS}")));
        }
        let mut merged: BTreeMap<(u64, u64), Complex64> = BTreeMap::new();
        for t in terms {
            if (t.x | t.z) >> n != 0 {
                return Err(Error::Parameter("Pauli term acts outside the system".into()));
            }
            *merged.entry((t.x, t.z)).or_default() += t.c;
        }
        let scale = merged.values().map(|c| c.norm()).fold(0.0f64, f64::max).max(1.0);
        let mut out = Vec::with_capacity(merged.len());
        for ((x, z), c) in merged {
            if c.norm() <= 1e-15 * scale {
                continue;
            }
            let op = PauliOp { x, z, c };
            if (op.adjoint().c - c).norm() > HERMITIAN_TOL * scale {
                return Err(Error::Parameter(format!("term {op:?} is not Hermitian")));
            }
            out.push(op);
        }
        Ok(Self { n, terms: out })
    }

    /// `H = −J Σ Z_i Z_{i+1} − g Σ X_i`.
    pub fn ising(n: usize, j: f64, g: f64, bc: Boundary) -> Result<Self> {
        let mut terms = Vec::new();
        for (a, b) in chain_bonds(n, bc)? {
            terms.push(PauliOp::z_string(&[a, b]).scaled(-j));
        }
        for q in 0..n {
            terms.push(PauliOp::single('X', q)?.scaled(-g));
        }
        Self::new(n, terms)
    }

    /// `H = −¼ Σ (X_i X_{i+1} + Y_i Y_{i+1})`, the Jordan-Wigner image of
    /// hopping `A_{i,i+1} = −1/2`.
    pub fn xx(n: usize, bc: Boundary) -> Result<Self> {
        let mut terms = Vec::new();
        for (a, b) in chain_bonds(n, bc)? {
            terms.push(PauliOp::single('X', a)?.mul(&PauliOp::single('X', b)?).scaled(-0.25));
            terms.push(PauliOp::single('Y', a)?.mul(&PauliOp::single('Y', b)?).scaled(-0.25));
        }
        Self::new(n, terms)
    }

    /// `H = Σ (X X + Y Y + Z Z)` on nearest neighbours.
    pub fn heisenberg(n: usize, bc: Boundary) -> Result<Self> {
        let mut terms = Vec::new();
        for (a, b) in chain_bonds(n, bc)? {
            for p in ['X', 'Y', 'Z'] {
                terms.push(PauliOp::single(p, a)?.mul(&PauliOp::single(p, b)?));
            }
        }
        Self::new(n, terms)
    }

    /// Jordan-Wigner image (site order = index order) of
    /// `Σ A_ij f†_i f_j − tr A/2 + ½ Σ B_ij (f_i f_j − f†_i f†_j)`.
    pub fn from_quadratic_fermions(model: &QuadraticFermionModel) -> Result<Self> {
        let n = model.site_count();
        if n > MAX_QUBITS {
            return Err(Error::Size(format!("{n} modes above {MAX_QUBITS}")));
        }
        let a = model.a().matrix();
        let b = model.b();
        let ann: Vec<Vec<PauliOp>> = (0..n).map(PauliOp::annihilator).collect();
        let cre: Vec<Vec<PauliOp>> = ann.iter().map(|f| f.iter().map(PauliOp::adjoint).collect()).collect();
        let product = |l: &[PauliOp], r: &[PauliOp], c: f64| -> Vec<PauliOp> {
            l.iter().flat_map(|p| r.iter().map(move |q| p.mul(q).scaled(c))).collect()
        };
        let mut terms = Vec::new();
        let trace: f64 = (0..n).map(|i| a[(i, i)]).sum();
        terms.push(PauliOp::identity().scaled(-trace / 2.0));
        for i in 0..n {
            for j in 0..n {
                if a[(i, j)] != 0.0 {
                    terms.extend(product(&cre[i], &ann[j], a[(i, j)]));
                }
                if b[(i, j)] != 0.0 {
                    terms.extend(product(&ann[i], &ann[j], 0.5 * b[(i, j)]));
                    terms.extend(product(&cre[i], &cre[j], -0.5 * b[(i, j)]));
                }
            }
        }
        Self::new(n, terms)
    }

    pub fn qubit_count(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        1 << self.n
    }

    pub fn terms(&self) -> &[PauliOp] {
        &self.terms
    }

    /// All coefficients real, so the Hamiltonian matrix is real symmetric.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|t| t.c.im == 0.0)
    }

    /// `Σ |c|`, an upper bound on `‖H‖`.
    pub fn norm_bound(&self) -> f64 {
        self.terms.iter().map(|t| t.c.norm()).sum()
    }

    pub fn partition(&self, region: &Region) -> Result<TermPartition> {
        let inside_mask = region_mask(self.n, region)?;
        let mut p = TermPartition { inside: Vec::new(), boundary: Vec::new(), outside: Vec::new() };
        for t in &self.terms {
            let s = t.support();
            if s & !inside_mask == 0 {
                p.inside.push(*t);
            } else if s & inside_mask == 0 {
                p.outside.push(*t);
            } else {
                p.boundary.push(*t);
            }
        }
        Ok(p)
    }

    pub fn apply(&self, psi: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = DVector::zeros(psi.len());
        for t in &self.terms {
            t.apply_add(psi.as_slice(), out.as_mut_slice());
        }
        out
    }

    /// Requires [`Self::is_real`].
    pub fn apply_real(&self, psi: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(psi.len());
        for t in &self.terms {
            t.apply_add_real(psi.as_slice(), out.as_mut_slice());
        }
        out
    }

    fn check_dense(&self) -> Result<()> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(Error::Size(format!("{} qubits above the dense limit {MAX_DENSE_QUBITS}", self.n)));
        }
        Ok(())
    }

    pub fn matrix(&self) -> Result<DMatrix<Complex64>> {
        self.check_dense()?;
        let d = self.dimension();
        let mut m = DMatrix::zeros(d, d);
        for t in &self.terms {
            for b in 0..d {
                let (target, amp) = t.act(b);
                m[(target, b)] += amp;
            }
        }
        Ok(m)
    }

    pub fn matrix_real(&self) -> Result<DMatrix<f64>> {
        self.check_dense()?;
        if !self.is_real() {
            return Err(Error::Unsupported("Hamiltonian has complex matrix elements".into()));
        }
        let d = self.dimension();
        let mut m = DMatrix::zeros(d, d);
        for t in &self.terms {
            for b in 0..d {
                let (target, amp) = t.act(b);
                m[(target, b)] += amp.re;
            }
        }
        Ok(m)
    }
}

fn chain_bonds(n: usize, bc: Boundary) -> Result<Vec<(usize, usize)>> {
    if n < 2 {
        return Err(Error::Parameter("spin chain needs at least two sites".into()));
    }
    let mut bonds: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    if bc == Boundary::Periodic && n > 2 {
        bonds.push((n - 1, 0));
    }
    Ok(bonds)
}

pub(crate) fn region_mask(n: usize, region: &Region) -> Result<u64> {
    let mut m = 0u64;
    for q in region.iter() {
        if q >= n {
            return Err(Error::InvalidRegion(format!("qubit {q} outside {n} qubits")));
        }
        m |= 1 << q;
    }
    Ok(m)
}
