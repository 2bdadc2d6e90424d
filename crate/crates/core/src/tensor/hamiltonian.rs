use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{convert, pauli, truncated_svd, Scalar};
use crate::error::{Error, Result};
use crate::numerics::eig_herm;

/// Nearest-neighbour chain Hamiltonian `Σ h_{j,j+1} + Σ f_j` on open boundaries.
///
/// Bond terms are `d²×d²` with row index `s_j·d + s_{j+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalHamiltonian1D {
    d: usize,
    bonds: Vec<DMatrix<Complex64>>,
    fields: Vec<DMatrix<Complex64>>,
}

fn hermitian(m: &DMatrix<Complex64>) -> bool {
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    (m - m.adjoint()).iter().all(|z| z.norm() <= 1e-12 * scale)
}

fn kron2(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

impl LocalHamiltonian1D {
    pub fn new(d: usize, bonds: Vec<DMatrix<Complex64>>, fields: Vec<DMatrix<Complex64>>) -> Result<Self> {
        let n = fields.len();
        if n < 2 || bonds.len() != n - 1 {
            return Err(Error::Shape(format!(
                "{n} fields need {} bond terms, got {}",
                n.saturating_sub(1),
                bonds.len()
            )));
        }
        for b in &bonds {
            if b.nrows() != d * d || b.ncols() != d * d {
                return Err(Error::Shape("bond term is not d²×d²".into()));
            }
            if !hermitian(b) {
                return Err(Error::Parameter("bond term is not Hermitian".into()));
            }
        }
        for f in &fields {
            if f.nrows() != d || f.ncols() != d {
                return Err(Error::Shape("field term is not d×d".into()));
            }
            if !hermitian(f) {
                return Err(Error::Parameter("field term is not Hermitian".into()));
            }
        }
        Ok(Self { d, bonds, fields })
    }

    /// `H = −J Σ Z_j Z_{j+1} − g Σ X_j`.
    pub fn ising(n: usize, j: f64, g: f64) -> Result<Self> {
        let (x, z) = (pauli::<Complex64>('X')?, pauli::<Complex64>('Z')?);
        let bond = kron2(&z, &z) * Complex64::new(-j, 0.0);
        Self::new(2, vec![bond; n.saturating_sub(1)], vec![x * Complex64::new(-g, 0.0); n])
    }

    /// `H = −¼ Σ (X_j X_{j+1} + Y_j Y_{j+1})`.
    pub fn xx(n: usize) -> Result<Self> {
        let (x, y) = (pauli::<Complex64>('X')?, pauli::<Complex64>('Y')?);
        let bond = (kron2(&x, &x) + kron2(&y, &y)) * Complex64::new(-0.25, 0.0);
        Self::new(2, vec![bond; n.saturating_sub(1)], vec![DMatrix::zeros(2, 2); n])
    }

    pub fn site_count(&self) -> usize {
        self.fields.len()
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    pub fn bonds(&self) -> &[DMatrix<Complex64>] {
        &self.bonds
    }

    pub fn fields(&self) -> &[DMatrix<Complex64>] {
        &self.fields
    }

    /// `J = max_j ‖h_{j,j+1}‖`.
    pub fn interaction_bound(&self) -> Result<f64> {
        let mut j: f64 = 0.0;
        for b in &self.bonds {
            let (v, _) = eig_herm(b)?;
            j = j.max(v.iter().map(|x| x.abs()).fold(0.0, f64::max));
        }
        Ok(j)
    }

    /// Bond term with the fields shared between neighbouring bonds (ends get
    /// their full field).
    pub fn bond_with_fields(&self, j: usize) -> DMatrix<Complex64> {
        let n = self.site_count();
        let id = DMatrix::<Complex64>::identity(self.d, self.d);
        let wl = if j == 0 { 1.0 } else { 0.5 };
        let wr = if j + 2 == n { 1.0 } else { 0.5 };
        &self.bonds[j]
            + kron2(&self.fields[j], &id) * Complex64::new(wl, 0.0)
            + kron2(&id, &self.fields[j + 1]) * Complex64::new(wr, 0.0)
    }

    pub fn mpo<T: Scalar>(&self) -> Result<Mpo<T>> {
        Mpo::new(self)
    }
}

/// Matrix-product operator: per site a `w_l × w_r` grid of optional `d×d` blocks.
#[derive(Debug, Clone)]
pub struct Mpo<T: Scalar> {
    pub(crate) d: usize,
    pub(crate) sites: Vec<Vec<Vec<Option<DMatrix<T>>>>>,
}

/// `h = Σ_k L_k ⊗ R_k` by an SVD of the operator-reshuffled bond term.
fn split_bond<T: Scalar>(h: &DMatrix<T>, d: usize) -> Result<Vec<(DMatrix<T>, DMatrix<T>)>> {
    let r = DMatrix::from_fn(d * d, d * d, |row, col| {
        let (s1, s1p) = (row / d, row % d);
        let (s2, s2p) = (col / d, col % d);
        h[(s1 * d + s2, s1p * d + s2p)]
    });
    if r.norm() == 0.0 {
        return Ok(Vec::new());
    }
    let (u, s, vt, _) = truncated_svd(r, d * d)?;
    Ok((0..s.len())
        .filter(|&k| s[k] > 1e-14 * s[0])
        .map(|k| {
            let l = DMatrix::from_fn(d, d, |a, b| u[(a * d + b, k)] * T::from_real(s[k]));
            let rr = DMatrix::from_fn(d, d, |a, b| vt[(k, a * d + b)]);
            (l, rr)
        })
        .collect())
}

impl<T: Scalar> Mpo<T> {
    /// Lower-triangular MPO: index `w−1` is "nothing placed yet", `0` is
    /// "term completed", `1..=r` carry an open bond term.
    pub fn new(h: &LocalHamiltonian1D) -> Result<Self> {
        let n = h.site_count();
        let d = h.d;
        let split: Vec<Vec<(DMatrix<T>, DMatrix<T>)>> =
            h.bonds.iter().map(|b| split_bond(&convert::<T>(b)?, d)).collect::<Result<_>>()?;
        let r = split.iter().map(|v| v.len()).max().unwrap_or(0);
        let w = r + 2;
        let id = DMatrix::<T>::identity(d, d);
        let mut sites = Vec::with_capacity(n);
        for j in 0..n {
            let mut g: Vec<Vec<Option<DMatrix<T>>>> = vec![vec![None; w]; w];
            g[0][0] = Some(id.clone());
            g[w - 1][w - 1] = Some(id.clone());
            let f = convert::<T>(&h.fields[j])?;
            if f.norm() > 0.0 {
                g[w - 1][0] = Some(f);
            }
            if j + 1 < n {
                for (k, (l, _)) in split[j].iter().enumerate() {
                    g[w - 1][k + 1] = Some(l.clone());
                }
            }
            if j > 0 {
                for (k, (_, rr)) in split[j - 1].iter().enumerate() {
                    g[k + 1][0] = Some(rr.clone());
                }
            }
            sites.push(g);
        }
        Ok(Self { d, sites })
    }

    pub fn bond_dim(&self) -> usize {
        self.sites[0].len()
    }

    /// Dense matrix in the little-endian basis (small chains only).
    pub fn to_dense(&self) -> Result<DMatrix<T>> {
        let n = self.sites.len();
        let dim = (self.d as f64).powi(n as i32);
        if dim > 4096.0 {
            return Err(Error::Size("dense MPO limited to dimension 4096".into()));
        }
        let w = self.bond_dim();
        // partial[a] = operator on the sites so far ending in MPO index a
        let mut partial: Vec<Option<DMatrix<T>>> = vec![None; w];
        partial[w - 1] = Some(DMatrix::identity(1, 1));
        for site in &self.sites {
            let mut next: Vec<Option<DMatrix<T>>> = vec![None; w];
            for a in 0..w {
                let Some(p) = &partial[a] else { continue };
                for b in 0..w {
                    let Some(o) = &site[a][b] else { continue };
                    // the new site is the most significant digit
                    let term = o.kronecker(p);
                    next[b] = Some(match next[b].take() {
                        Some(acc) => acc + term,
                        None => term,
                    });
                }
            }
            partial = next;
        }
        partial[0].take().ok_or_else(|| Error::Numerical("MPO has no completed terms".into()))
    }
}
