//! Matrix-product states on open chains: construction, contraction,
//! canonical forms, Schmidt-cut entropies, DMRG, TEBD and checkpoints.
//!
//! Site tensors are stored as `d` matrices `A^{(k)}[s]` of size
//! `D_k × D_{k+1}` with `D_0 = D_N = 1`. Dense vectors use the qubit-style
//! little-endian index `Σ_k s_k d^k`, matching [`crate::oracle`].

mod approx;
mod checkpoint;
mod dmrg;
mod hamiltonian;
mod tebd;
mod transfer;

pub use approx::{approximability_experiment, ApproxReport, ApproxRow};
pub use checkpoint::{
    load_checkpoint, read_checkpoint, save_checkpoint, write_checkpoint, CHECKPOINT_MAGIC, CHECKPOINT_VERSION,
};
pub use dmrg::{dmrg_ground_state, DmrgConfig, DmrgResult};
pub use hamiltonian::{LocalHamiltonian1D, Mpo};
pub use tebd::{tebd_evolve, TebdConfig, TebdReport};
pub use transfer::{aklt_tensors, correlation_length, transfer_operator, uniform_correlator, CorrelationLength};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numerics::{svd, Svd, SvdField};
use crate::oracle::renyi_from_spectrum;

/// Scalar field of MPS tensors: `f64` or `Complex64`.
pub trait Scalar: SvdField + Send + Sync {
    fn from_c64(z: Complex64) -> Option<Self>;
    fn to_c64(self) -> Complex64;
}

impl Scalar for f64 {
    fn from_c64(z: Complex64) -> Option<Self> {
        (z.im == 0.0).then_some(z.re)
    }
    fn to_c64(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Scalar for Complex64 {
    fn from_c64(z: Complex64) -> Option<Self> {
        Some(z)
    }
    fn to_c64(self) -> Complex64 {
        self
    }
}

pub(crate) fn convert<T: Scalar>(m: &DMatrix<Complex64>) -> Result<DMatrix<T>> {
    let mut out = DMatrix::zeros(m.nrows(), m.ncols());
    for (o, z) in out.iter_mut().zip(m.iter()) {
        *o = T::from_c64(*z).ok_or_else(|| Error::Unsupported("complex entry in a real computation".into()))?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalForm {
    None,
    /// Orthogonality centre at the given site.
    Mixed(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixProductState<T: Scalar> {
    d: usize,
    tensors: Vec<Vec<DMatrix<T>>>,
    form: CanonicalForm,
}

/// Singular values kept above this fraction of the largest one.
pub(crate) const SVD_CUTOFF: f64 = 1e-13;

/// `(U, S, V†, discarded weight fraction)`.
pub(crate) type Truncation<T> = (DMatrix<T>, Vec<f64>, DMatrix<T>, f64);

/// Truncated SVD `M ≈ U S V†`.
pub(crate) fn truncated_svd<T: Scalar>(m: DMatrix<T>, max_rank: usize) -> Result<Truncation<T>> {
    let Svd { u, s, v_adj: vt } = svd(&m)?;
    let total: f64 = s.iter().map(|x| x * x).sum();
    let s0 = s.first().copied().unwrap_or(0.0);
    let keep = s.iter().take_while(|&&x| x > SVD_CUTOFF * s0).count().clamp(1, max_rank.max(1));
    let kept: f64 = s[..keep].iter().map(|x| x * x).sum();
    let discarded = if total > 0.0 { ((total - kept) / total).max(0.0) } else { 0.0 };
    Ok((u.columns(0, keep).into_owned(), s[..keep].to_vec(), vt.rows(0, keep).into_owned(), discarded))
}

pub(crate) fn scale_rows<T: Scalar>(m: &mut DMatrix<T>, s: &[f64]) {
    for (r, &x) in s.iter().enumerate() {
        m.row_mut(r).scale_mut(x);
    }
}

pub(crate) fn scale_cols<T: Scalar>(m: &mut DMatrix<T>, s: &[f64]) {
    for (c, &x) in s.iter().enumerate() {
        m.column_mut(c).scale_mut(x);
    }
}

impl<T: Scalar> MatrixProductState<T> {
    /// Validates chain-consistent bond dimensions and open boundaries.
    pub fn new(tensors: Vec<Vec<DMatrix<T>>>) -> Result<Self> {
        let n = tensors.len();
        if n == 0 {
            return Err(Error::Shape("MPS needs at least one site".into()));
        }
        let d = tensors[0].len();
        if d == 0 {
            return Err(Error::Shape("local dimension must be positive".into()));
        }
        let mut left = 1;
        for (k, site) in tensors.iter().enumerate() {
            if site.len() != d {
                return Err(Error::Shape(format!("site {k} has {} matrices, expected {d}", site.len())));
            }
            let right = site[0].ncols();
            if site.iter().any(|a| a.nrows() != left || a.ncols() != right) {
                return Err(Error::Shape(format!("site {k} bond dimensions are inconsistent")));
            }
            left = right;
        }
        if left != 1 {
            return Err(Error::Shape("open chain must end with bond dimension 1".into()));
        }
        Ok(Self { d, tensors, form: CanonicalForm::None })
    }

    /// Product state from per-site amplitude vectors of length `d`.
    pub fn product(sites: &[Vec<T>]) -> Result<Self> {
        let tensors = sites.iter().map(|v| v.iter().map(|&a| DMatrix::from_element(1, 1, a)).collect()).collect();
        let mut m = Self::new(tensors)?;
        m.normalize()?;
        Ok(m)
    }

    /// All sites in basis state `s`.
    pub fn basis_product(n: usize, d: usize, s: usize) -> Result<Self> {
        if s >= d {
            return Err(Error::Parameter(format!("basis state {s} outside local dimension {d}")));
        }
        let v: Vec<T> = (0..d).map(|k| if k == s { T::one() } else { T::zero() }).collect();
        Self::product(&vec![v; n])
    }

    /// `(|0…0⟩ + |1…1⟩)/√2` with bond dimension 2.
    pub fn ghz(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter("GHZ state needs two sites".into()));
        }
        let h = T::from_real(0.5f64.sqrt());
        let mut tensors = Vec::with_capacity(n);
        for k in 0..n {
            let site: Vec<DMatrix<T>> = (0..2)
                .map(|s| {
                    if k == 0 {
                        DMatrix::from_fn(1, 2, |_, c| if c == s { h } else { T::zero() })
                    } else if k == n - 1 {
                        DMatrix::from_fn(2, 1, |r, _| if r == s { T::one() } else { T::zero() })
                    } else {
                        DMatrix::from_fn(2, 2, |r, c| if r == s && c == s { T::one() } else { T::zero() })
                    }
                })
                .collect();
            tensors.push(site);
        }
        Self::new(tensors)
    }

    /// Random normalized MPS with bond dimensions `min(D, d^k, d^{N−k})`.
    pub fn random(n: usize, d: usize, bond: usize, seed: u64) -> Result<Self> {
        if n == 0 || d == 0 || bond == 0 {
            return Err(Error::Parameter("random MPS needs n, d, D ≥ 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = |k: usize| -> usize {
            let cap =
                |e: usize| (0..e).try_fold(1usize, |acc, _| acc.checked_mul(d).filter(|&v| v < bond)).unwrap_or(bond);
            bond.min(cap(k)).min(cap(n - k))
        };
        let mut tensors = Vec::with_capacity(n);
        for k in 0..n {
            let (l, r) = (dim(k), dim(k + 1));
            let site = (0..d)
                .map(|_| {
                    DMatrix::from_fn(l, r, |_, _| {
                        let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                        T::from_c64(z).unwrap_or_else(|| T::from_real(z.re))
                    })
                })
                .collect();
            tensors.push(site);
        }
        let mut m = Self::new(tensors)?;
        m.normalize()?;
        Ok(m)
    }

    /// Sequential SVD decomposition of a dense vector (little-endian sites).
    pub fn from_dense(psi: &DVector<T>, d: usize, n: usize, max_bond: usize) -> Result<Self> {
        if d < 2 || (d as f64).powi(n as i32) != psi.len() as f64 {
            return Err(Error::Shape(format!("length {} is not {d}^{n}", psi.len())));
        }
        let mut tensors = Vec::with_capacity(n);
        // rows: left bond, columns: s_k + d·(rest)
        let mut c = DMatrix::from_row_slice(1, psi.len(), psi.as_slice());
        for _ in 0..n - 1 {
            let dl = c.nrows();
            let rest = c.ncols() / d;
            let m = DMatrix::from_fn(d * dl, rest, |row, col| c[(row % dl, row / dl + d * col)]);
            let (u, s, mut vt, _) = truncated_svd(m, max_bond)?;
            tensors.push((0..d).map(|s| u.rows(s * dl, dl).into_owned()).collect());
            scale_rows(&mut vt, &s);
            c = vt;
        }
        let dl = c.nrows();
        tensors.push((0..d).map(|s| DMatrix::from_fn(dl, 1, |r, _| c[(r, s)])).collect());
        Self::new(tensors)
    }

    pub fn site_count(&self) -> usize {
        self.tensors.len()
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    pub fn form(&self) -> CanonicalForm {
        self.form
    }

    pub fn tensors(&self) -> &[Vec<DMatrix<T>>] {
        &self.tensors
    }

    /// Bond dimensions `D_0 … D_N`.
    pub fn bond_dims(&self) -> Vec<usize> {
        let mut v = vec![1];
        v.extend(self.tensors.iter().map(|s| s[0].ncols()));
        v
    }

    pub fn max_bond(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap_or(1)
    }

    /// Rows `s·D_k + l`, columns `r`.
    pub(crate) fn left_matrix(&self, k: usize) -> DMatrix<T> {
        let site = &self.tensors[k];
        let (dl, dr) = (site[0].nrows(), site[0].ncols());
        DMatrix::from_fn(self.d * dl, dr, |row, col| site[row / dl][(row % dl, col)])
    }

    pub(crate) fn set_left_matrix(&mut self, k: usize, m: &DMatrix<T>) {
        let dl = m.nrows() / self.d;
        self.tensors[k] = (0..self.d).map(|s| m.rows(s * dl, dl).into_owned()).collect();
    }

    /// Rows `l`, columns `s·D_{k+1} + r`.
    pub(crate) fn right_matrix(&self, k: usize) -> DMatrix<T> {
        let site = &self.tensors[k];
        let (dl, dr) = (site[0].nrows(), site[0].ncols());
        DMatrix::from_fn(dl, self.d * dr, |row, col| site[col / dr][(row, col % dr)])
    }

    pub(crate) fn set_right_matrix(&mut self, k: usize, m: &DMatrix<T>) {
        let dr = m.ncols() / self.d;
        self.tensors[k] = (0..self.d).map(|s| m.columns(s * dr, dr).into_owned()).collect();
    }

    pub(crate) fn set_form(&mut self, f: CanonicalForm) {
        self.form = f;
    }

    /// Moves the orthogonality centre one site right by QR.
    pub(crate) fn shift_right(&mut self, k: usize) {
        let qr = self.left_matrix(k).qr();
        let (q, r) = (qr.q(), qr.r());
        self.set_left_matrix(k, &q);
        for a in self.tensors[k + 1].iter_mut() {
            *a = &r * &*a;
        }
    }

    /// Moves the orthogonality centre one site left by QR of the adjoint.
    pub(crate) fn shift_left(&mut self, k: usize) {
        let qr = self.right_matrix(k).adjoint().qr();
        let (q, r) = (qr.q(), qr.r());
        self.set_right_matrix(k, &q.adjoint());
        let ra = r.adjoint();
        for a in self.tensors[k - 1].iter_mut() {
            *a = &*a * &ra;
        }
    }

    /// Mixed canonical form: sites left of `center` left-orthonormal, sites
    /// right of it right-orthonormal.
    pub fn canonicalize(&mut self, center: usize) -> Result<()> {
        let n = self.site_count();
        if center >= n {
            return Err(Error::Parameter(format!("centre {center} outside {n} sites")));
        }
        for k in 0..center {
            self.shift_right(k);
        }
        for k in (center + 1..n).rev() {
            self.shift_left(k);
        }
        self.form = CanonicalForm::Mixed(center);
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &Self) -> Result<T> {
        if self.site_count() != other.site_count() || self.d != other.d {
            return Err(Error::Shape("overlap of MPS with different shapes".into()));
        }
        let mut e = DMatrix::from_element(1, 1, T::one());
        for (a, b) in self.tensors.iter().zip(&other.tensors) {
            let mut next = DMatrix::zeros(a[0].ncols(), b[0].ncols());
            for s in 0..self.d {
                next += a[s].adjoint() * &e * &b[s];
            }
            e = next;
        }
        Ok(e[(0, 0)])
    }

    pub fn norm(&self) -> f64 {
        self.overlap(self).map(|z| z.real().max(0.0).sqrt()).unwrap_or(0.0)
    }

    /// Canonicalizes at site 0 and rescales to unit norm.
    pub fn normalize(&mut self) -> Result<()> {
        self.canonicalize(0)?;
        let nrm = self.tensors[0].iter().map(|a| a.norm_squared()).sum::<f64>().sqrt();
        if !(nrm > 0.0) || !nrm.is_finite() {
            return Err(Error::Numerical("cannot normalize a zero MPS".into()));
        }
        for a in self.tensors[0].iter_mut() {
            a.unscale_mut(nrm);
        }
        Ok(())
    }

    /// `⟨ψ| Π_k O_k |ψ⟩ / ⟨ψ|ψ⟩` for single-site operators `(site, d×d)`.
    pub fn expectation(&self, ops: &[(usize, DMatrix<T>)]) -> Result<T> {
        let n = self.site_count();
        let mut per_site: Vec<Option<&DMatrix<T>>> = vec![None; n];
        for (k, op) in ops {
            if *k >= n {
                return Err(Error::Parameter(format!("operator site {k} outside {n} sites")));
            }
            if op.nrows() != self.d || op.ncols() != self.d {
                return Err(Error::Shape(format!(
                    "operator is {}×{}, expected {}×{}",
                    op.nrows(),
                    op.ncols(),
                    self.d,
                    self.d
                )));
            }
            if per_site[*k].is_some() {
                return Err(Error::Parameter(format!("two operators on site {k}")));
            }
            per_site[*k] = Some(op);
        }
        let mut e = DMatrix::from_element(1, 1, T::one());
        for (site, op) in self.tensors.iter().zip(&per_site) {
            let mut next = DMatrix::zeros(site[0].ncols(), site[0].ncols());
            for s in 0..self.d {
                let left = site[s].adjoint() * &e;
                match op {
                    None => next += &left * &site[s],
                    Some(o) => {
                        for s2 in 0..self.d {
                            let w = o[(s, s2)];
                            if w != T::zero() {
                                next += (&left * &site[s2]) * w;
                            }
                        }
                    }
                }
            }
            e = next;
        }
        let nrm = self.overlap(self)?;
        Ok(e[(0, 0)] / nrm)
    }

    /// Dense state vector, index `Σ_k s_k d^k`.
    pub fn to_dense(&self) -> Result<DVector<T>> {
        let n = self.site_count();
        let dim = (self.d as f64).powi(n as i32);
        if dim > (1u64 << 26) as f64 {
            return Err(Error::Size(format!("dense vector of dimension {dim} too large")));
        }
        let mut p = DMatrix::from_element(1, 1, T::one());
        let mut stride = 1;
        for site in &self.tensors {
            let mut next = DMatrix::zeros(stride * self.d, site[0].ncols());
            for (s, a) in site.iter().enumerate() {
                next.rows_mut(s * stride, stride).copy_from(&(&p * a));
            }
            p = next;
            stride *= self.d;
        }
        Ok(p.column(0).into_owned())
    }

    /// Schmidt coefficients (normalized, descending) across every bond
    /// `1..N`; entry `b−1` is the cut after the first `b` sites.
    pub fn schmidt_profile(&self) -> Result<Vec<Vec<f64>>> {
        let mut m = self.clone();
        m.canonicalize(0)?;
        let mut out = Vec::with_capacity(self.site_count().saturating_sub(1));
        for k in 0..self.site_count() - 1 {
            let (u, s, mut vt, _) = truncated_svd(m.left_matrix(k), usize::MAX)?;
            m.set_left_matrix(k, &u);
            scale_rows(&mut vt, &s);
            for a in m.tensors[k + 1].iter_mut() {
                *a = &vt * &*a;
            }
            out.push(normalized_schmidt(s)?);
        }
        Ok(out)
    }

    /// Schmidt coefficients across the cut after the first `bond` sites.
    pub fn schmidt_values(&self, bond: usize) -> Result<Vec<f64>> {
        let n = self.site_count();
        if bond == 0 || bond >= n {
            return Err(Error::Parameter(format!("bond {bond} outside 1..{n}")));
        }
        let mut m = self.clone();
        m.canonicalize(bond)?;
        let (_, s, _, _) = truncated_svd(m.right_matrix(bond), usize::MAX)?;
        normalized_schmidt(s)
    }

    /// Rényi entropy in bits across the cut after the first `bond` sites.
    pub fn cut_entropy(&self, bond: usize, alpha: f64) -> Result<f64> {
        let dim = self.bond_dims()[bond.min(self.site_count())];
        let s = self.schmidt_values(bond)?;
        entropy_with_bound(&s, alpha, dim)
    }

    /// Entropies across all bonds.
    pub fn entropy_profile(&self, alpha: f64) -> Result<Vec<f64>> {
        let dims = self.bond_dims();
        self.schmidt_profile()?.iter().enumerate().map(|(b, s)| entropy_with_bound(s, alpha, dims[b + 1])).collect()
    }
}

fn normalized_schmidt(s: Vec<f64>) -> Result<Vec<f64>> {
    let total: f64 = s.iter().map(|x| x * x).sum();
    if !(total > 0.0) {
        return Err(Error::Numerical("zero Schmidt spectrum".into()));
    }
    if (total - 1.0).abs() > 1e-8 {
        log::warn!("MPS norm drifted to {:.3e}; renormalizing", total.sqrt());
    }
    let r = total.sqrt();
    Ok(s.into_iter().map(|x| x / r).collect())
}

fn entropy_with_bound(s: &[f64], alpha: f64, bond: usize) -> Result<f64> {
    let p: Vec<f64> = s.iter().map(|x| x * x).collect();
    let e = renyi_from_spectrum(&p, alpha)?;
    let cap = (bond as f64).log2();
    if e > cap + 1e-10 {
        return Err(Error::Numerical(format!("cut entropy {e} exceeds log₂ D = {cap}")));
    }
    Ok(e)
}

/// Pauli and spin-½ helper matrices.
pub fn pauli<T: Scalar>(p: char) -> Result<DMatrix<T>> {
    let c = |re: f64, im: f64| T::from_c64(Complex64::new(re, im));
    let entries: [Option<T>; 4] = match p.to_ascii_uppercase() {
        'I' => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        'X' => [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        'Z' => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        'Y' => [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
        _ => return Err(Error::Parameter(format!("unknown Pauli '{p}'"))),
    };
    let v: Option<Vec<T>> = entries.into_iter().collect();
    let v = v.ok_or_else(|| Error::Unsupported("σ_y has no real representation".into()))?;
    Ok(DMatrix::from_row_slice(2, 2, &v))
}
