use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DenseSpinSystem, PauliOp};
use crate::error::{Error, Result};
use crate::numerics::{eig_herm, eig_sym, lanczos_lowest, SymmetricMatrix};

#[derive(Debug, Clone)]
enum Basis {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

/// Full eigendecomposition of a dense Hamiltonian, reused for propagation,
/// thermal states and Heisenberg-picture operators.
#[derive(Debug, Clone)]
pub struct Propagator {
    values: Vec<f64>,
    basis: Basis,
}

fn split(v: &DVector<Complex64>) -> (DVector<f64>, DVector<f64>) {
    (v.map(|z| z.re), v.map(|z| z.im))
}

impl Propagator {
    pub fn new(system: &DenseSpinSystem) -> Result<Self> {
        if system.is_real() {
            let e = eig_sym(&SymmetricMatrix::symmetrized(system.matrix_real()?))?;
            Ok(Self { values: e.values.iter().copied().collect(), basis: Basis::Real(e.vectors) })
        } else {
            let (values, vectors) = eig_herm(&system.matrix()?)?;
            Ok(Self { values, basis: Basis::Complex(vectors) })
        }
    }

    /// Ascending energies.
    pub fn energies(&self) -> &[f64] {
        &self.values
    }

    pub fn dimension(&self) -> usize {
        self.values.len()
    }

    /// `U† ψ`.
    pub fn to_eigenbasis(&self, psi: &DVector<Complex64>) -> DVector<Complex64> {
        match &self.basis {
            Basis::Real(u) => {
                let (re, im) = split(psi);
                let (a, b) = (u.tr_mul(&re), u.tr_mul(&im));
                a.zip_map(&b, Complex64::new)
            }
            Basis::Complex(u) => u.ad_mul(psi),
        }
    }

    /// `U c`.
    pub fn from_eigenbasis(&self, c: &DVector<Complex64>) -> DVector<Complex64> {
        match &self.basis {
            Basis::Real(u) => {
                let (re, im) = split(c);
                (u * re).zip_map(&(u * im), Complex64::new)
            }
            Basis::Complex(u) => u * c,
        }
    }

    /// `e^{−iHt} ψ`.
    pub fn evolve(&self, psi: &DVector<Complex64>, t: f64) -> Result<DVector<Complex64>> {
        if psi.len() != self.dimension() {
            return Err(Error::Shape(format!("state of length {} for dimension {}", psi.len(), self.dimension())));
        }
        let mut c = self.to_eigenbasis(psi);
        for (ck, &e) in c.iter_mut().zip(&self.values) {
            *ck *= Complex64::from_polar(1.0, -e * t);
        }
        Ok(self.from_eigenbasis(&c))
    }

    /// `U† P U`.
    pub fn operator_in_eigenbasis(&self, p: &PauliOp) -> DMatrix<Complex64> {
        let d = self.dimension();
        match &self.basis {
            Basis::Real(u) => {
                // P U row-permuted with signs, coefficient applied afterwards
                let mut pu = DMatrix::<f64>::zeros(d, d);
                let unit = PauliOp { c: Complex64::new(1.0, 0.0), ..*p };
                for b in 0..d {
                    let (t, a) = unit.act(b);
                    pu.row_mut(t).copy_from(&(u.row(b) * a.re));
                }
                u.tr_mul(&pu).map(|x| p.c * x)
            }
            Basis::Complex(u) => {
                let mut pu = DMatrix::<Complex64>::zeros(d, d);
                for b in 0..d {
                    let (t, a) = p.act(b);
                    pu.row_mut(t).copy_from(&(u.row(b) * a));
                }
                u.ad_mul(&pu)
            }
        }
    }

    /// Gibbs weights `e^{−βE}/Z` in the eigenbasis.
    pub fn gibbs_weights(&self, beta: f64) -> Vec<f64> {
        let e0 = self.values.first().copied().unwrap_or(0.0);
        let w: Vec<f64> = self.values.iter().map(|&e| (-beta * (e - e0)).exp()).collect();
        let z: f64 = w.iter().sum();
        w.into_iter().map(|x| x / z).collect()
    }

    /// `U diag(w) U†`.
    pub fn density(&self, weights: &[f64]) -> DMatrix<Complex64> {
        match &self.basis {
            Basis::Real(u) => {
                let mut scaled = u.clone();
                for (c, &w) in weights.iter().enumerate() {
                    scaled.column_mut(c).scale_mut(w);
                }
                (&scaled * u.transpose()).map(|x| Complex64::new(x, 0.0))
            }
            Basis::Complex(u) => {
                let mut scaled = u.clone();
                for (c, &w) in weights.iter().enumerate() {
                    scaled.column_mut(c).scale_mut(w);
                }
                &scaled * u.adjoint()
            }
        }
    }
}

/// `e^{−iHt} ψ` by full diagonalization.
pub fn propagate_dense(system: &DenseSpinSystem, psi: &DVector<Complex64>, t: f64) -> Result<DVector<Complex64>> {
    Propagator::new(system)?.evolve(psi, t)
}

/// `e^{−iHt}|ψ⟩` by a Taylor series in steps with `τ·Σ|c| ≤ ½`, using only
/// the Pauli action (up to [`super::MAX_QUBITS`] qubits).
pub fn propagate_series(system: &DenseSpinSystem, psi: &DVector<Complex64>, t: f64) -> Result<DVector<Complex64>> {
    if psi.len() != system.dimension() {
        return Err(Error::Shape("state does not match the system dimension".into()));
    }
    if !t.is_finite() {
        return Err(Error::Parameter("evolution time must be finite".into()));
    }
    let steps = ((t.abs() * system.norm_bound()) / 0.5).ceil().max(1.0) as usize;
    let tau = t / steps as f64;
    let mut v = psi.clone();
    for _ in 0..steps {
        let mut term = v.clone();
        let mut acc = v.clone();
        for k in 1..=60 {
            term = system.apply(&term) * Complex64::new(0.0, -tau / k as f64);
            acc += &term;
            if term.norm() <= 1e-17 * acc.norm() {
                break;
            }
        }
        v = acc;
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrRow {
    pub dist: usize,
    pub t: f64,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LrProfile {
    pub rows: Vec<LrRow>,
    /// Per time: least-squares slope of `ln ‖[A(t),B]‖` against distance,
    /// over points above the round-off floor (NaN with fewer than two).
    pub tail_slopes: Vec<(f64, f64)>,
}

const COMMUTATOR_FLOOR: f64 = 1e-13;

/// Largest `|λ|` of the Hermitian operator `i[A(t), B]` in the eigenbasis.
fn commutator_norm(a_t: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Result<f64> {
    let i = Complex64::new(0.0, 1.0);
    let apply = |v: &DVector<Complex64>, sign: f64| -> DVector<Complex64> {
        let ab = a_t * (b * v);
        let ba = b * (a_t * v);
        (ab - ba) * (i * sign)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x1b);
    let start =
        DVector::from_fn(a_t.nrows(), |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let lo = lanczos_lowest(|v| apply(v, 1.0), &start, 1e-14, 80, 40)?;
    let hi = lanczos_lowest(|v| apply(v, -1.0), &start, 1e-14, 80, 40)?;
    Ok(lo.value.abs().max(hi.value.abs()))
}

/// Operator norms `‖[Z_a(t), Z_b]‖` on the grid `b_sites × times`, with
/// `Z_a(t) = e^{iHt} Z_a e^{−iHt}` and distance `|a − b|`.
pub fn lieb_robinson_profile(
    system: &DenseSpinSystem,
    a_site: usize,
    b_sites: &[usize],
    times: &[f64],
) -> Result<LrProfile> {
    let n = system.qubit_count();
    if a_site >= n || b_sites.iter().any(|&b| b >= n) {
        return Err(Error::Parameter(format!("operator site outside {n} qubits")));
    }
    let prop = Propagator::new(system)?;
    let a_op = PauliOp::single('Z', a_site)?;
    let a_tilde = prop.operator_in_eigenbasis(&a_op);
    let b_tilde: Vec<(usize, PauliOp, DMatrix<Complex64>)> = b_sites
        .iter()
        .map(|&b| {
            let op = PauliOp::single('Z', b)?;
            Ok((b, op, prop.operator_in_eigenbasis(&op)))
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut tail_slopes = Vec::new();
    for &t in times {
        let phase: Vec<Complex64> = prop.energies().iter().map(|&e| Complex64::from_polar(1.0, e * t)).collect();
        let a_t =
            DMatrix::from_fn(prop.dimension(), prop.dimension(), |m, k| a_tilde[(m, k)] * phase[m] * phase[k].conj());
        let mut pts = Vec::new();
        for (b, op, bt) in &b_tilde {
            let norm = if t == 0.0 {
                // Pauli strings either commute or anticommute: ‖[A,B]‖ ∈ {0, 2}
                let ab = a_op.mul(op);
                let ba = op.mul(&a_op);
                if ab.c == ba.c {
                    0.0
                } else {
                    2.0
                }
            } else {
                commutator_norm(&a_t, bt)?
            };
            let dist = b.abs_diff(a_site);
            rows.push(LrRow { dist, t, norm });
            if norm > COMMUTATOR_FLOOR {
                pts.push((dist as f64, norm.ln()));
            }
        }
        tail_slopes.push((t, slope(&pts)));
    }
    Ok(LrProfile { rows, tail_slopes })
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
