use nalgebra::{ComplexField, DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;
const EIG_MAX_ITER: usize = 100_000;

/// Real symmetric matrix. Construction checks symmetry to a relative
/// tolerance and then symmetrizes exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix(DMatrix<f64>);

impl SymmetricMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Shape(format!("{}x{} matrix is not square", m.nrows(), m.ncols())));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numerical("non-finite matrix entry".into()));
        }
        let scale = max_abs(&m).max(f64::MIN_POSITIVE);
        let asym = max_abs(&(&m - m.transpose()));
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::Shape(format!("matrix not symmetric (deviation {asym:e})")));
        }
        Ok(Self::symmetrized(m))
    }

    /// Skips the tolerance check; `(m + mᵀ)/2` is stored.
    pub fn symmetrized(m: DMatrix<f64>) -> Self {
        let t = m.transpose();
        Self((m + t) * 0.5)
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(d)))
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    /// Principal submatrix on the given (sorted) index set.
    pub fn principal(&self, idx: &[usize]) -> SymmetricMatrix {
        Self(principal_submatrix(&self.0, idx))
    }

    pub fn norm_max(&self) -> f64 {
        max_abs(&self.0)
    }

    /// Spectral norm.
    pub fn operator_norm(&self) -> Result<f64> {
        let e = eig_sym(self)?;
        Ok(e.values.iter().fold(0.0f64, |m, v| m.max(v.abs())))
    }
}

pub fn max_abs<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.clone().abs()))
}

pub fn principal_submatrix<T: nalgebra::Scalar + Copy>(m: &DMatrix<T>, idx: &[usize]) -> DMatrix<T> {
    DMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])])
}

#[derive(Debug, Clone)]
pub struct Eigen {
    /// Ascending.
    pub values: DVector<f64>,
    /// Columns are the matching orthonormal eigenvectors.
    pub vectors: DMatrix<f64>,
}

pub fn eig_sym(m: &SymmetricMatrix) -> Result<Eigen> {
    let n = m.order();
    if n == 0 {
        return Ok(Eigen { values: DVector::zeros(0), vectors: DMatrix::zeros(0, 0) });
    }
    let se = SymmetricEigen::try_new(m.0.clone(), f64::EPSILON, EIG_MAX_ITER)
        .ok_or_else(|| Error::Numerical(format!("symmetric eigensolver did not converge (n={n})")))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&k| se.eigenvalues[k]));
    let vectors = DMatrix::from_fn(n, n, |r, c| se.eigenvectors[(r, order[c])]);
    Ok(Eigen { values, vectors })
}

impl Eigen {
    /// `Q f(Λ) Qᵀ`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let mut scaled = self.vectors.clone();
        for (c, &lam) in self.values.iter().enumerate() {
            let fl = f(lam);
            scaled.column_mut(c).scale_mut(fl);
        }
        &scaled * self.vectors.transpose()
    }
}

/// Default eigenvalue floor used to guard inverse powers: `1e-12·‖M‖_max`.
pub fn default_floor(m: &SymmetricMatrix) -> f64 {
    1e-12 * m.norm_max().max(f64::MIN_POSITIVE)
}

/// `M^p` through the spectral decomposition.
///
/// Eigenvalues in `[-floor, floor)` are clamped to `floor` for negative `p`
/// and to zero otherwise; anything below `-floor` is rejected unless `p` is a
/// non-negative integer.
pub fn mat_power(m: &SymmetricMatrix, p: f64, floor: f64) -> Result<SymmetricMatrix> {
    let e = eig_sym(m)?;
    let integer = p >= 0.0 && p.fract() == 0.0;
    if !integer {
        if let Some(&low) = e.values.iter().find(|&&v| v < -floor) {
            return Err(Error::NotPositiveDefinite { eigenvalue: low, floor });
        }
    }
    let out = e.apply(|lam| {
        if integer {
            lam.powi(p as i32)
        } else if p < 0.0 {
            lam.max(floor).powf(p)
        } else {
            lam.max(0.0).powf(p)
        }
    });
    Ok(SymmetricMatrix::symmetrized(out))
}

pub fn mat_power_default(m: &SymmetricMatrix, p: f64) -> Result<SymmetricMatrix> {
    mat_power(m, p, default_floor(m))
}

/// Thin singular value decomposition `M = U diag(s) V†` with `s` descending.
#[derive(Debug, Clone)]
pub struct Svd<T: nalgebra::Scalar> {
    pub u: DMatrix<T>,
    pub s: Vec<f64>,
    pub v_adj: DMatrix<T>,
}

/// Field types accepted by [`svd`].
pub trait SvdField: ComplexField<RealField = f64> + Copy {
    fn thin_svd(m: &DMatrix<Self>) -> Result<Svd<Self>>;
}

macro_rules! faer_svd {
    ($t:ty, $re:expr) => {
        impl SvdField for $t {
            fn thin_svd(m: &DMatrix<Self>) -> Result<Svd<Self>> {
                let (r, c) = m.shape();
                let k = r.min(c);
                if k == 0 {
                    return Ok(Svd { u: DMatrix::zeros(r, 0), s: Vec::new(), v_adj: DMatrix::zeros(0, c) });
                }
                if m.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Numerical("non-finite matrix entry".into()));
                }
                let f = faer::Mat::<$t>::from_fn(r, c, |i, j| m[(i, j)]);
                let svd = f.thin_svd().map_err(|e| Error::Numerical(format!("SVD failed: {e:?}")))?;
                let (u, sv, v) = (svd.U(), svd.S(), svd.V());
                let re = $re;
                Ok(Svd {
                    u: DMatrix::from_fn(r, k, |i, j| u[(i, j)]),
                    s: (0..k).map(|j| re(sv[j])).collect(),
                    v_adj: DMatrix::from_fn(k, c, |i, j| ComplexField::conjugate(v[(j, i)])),
                })
            }
        }
    };
}

faer_svd!(f64, |x: f64| x);
faer_svd!(Complex64, |x: Complex64| x.re);

pub fn svd<T: SvdField>(m: &DMatrix<T>) -> Result<Svd<T>> {
    T::thin_svd(m)
}

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    Ok(svd(m)?.s)
}

/// Sign and natural-log magnitude of a real determinant. A singular matrix
/// yields `(0, -inf)`.
pub fn log_det(m: &DMatrix<f64>) -> Result<(f64, f64)> {
    if !m.is_square() {
        return Err(Error::Shape("determinant of a non-square matrix".into()));
    }
    if m.nrows() == 0 {
        return Ok((1.0, 0.0));
    }
    let lu = m.clone().lu();
    let u = lu.u();
    let mut sign: f64 = lu.p().determinant();
    let mut log_mag = 0.0;
    for k in 0..u.nrows() {
        let d = u[(k, k)];
        if d == 0.0 {
            return Ok((0.0, f64::NEG_INFINITY));
        }
        sign *= d.signum();
        log_mag += d.abs().ln();
    }
    Ok((sign, log_mag))
}

/// Unit phase and natural-log magnitude of a complex determinant. A singular
/// matrix yields a zero phase and `-inf`.
pub fn log_det_complex(m: &DMatrix<Complex64>) -> Result<(Complex64, f64)> {
    if !m.is_square() {
        return Err(Error::Shape("determinant of a non-square matrix".into()));
    }
    if m.nrows() == 0 {
        return Ok((Complex64::new(1.0, 0.0), 0.0));
    }
    let lu = m.clone().lu();
    let u = lu.u();
    let mut phase: Complex64 = lu.p().determinant();
    let mut log_mag = 0.0;
    for k in 0..u.nrows() {
        let d = u[(k, k)];
        let r = d.norm();
        if r == 0.0 {
            return Ok((Complex64::new(0.0, 0.0), f64::NEG_INFINITY));
        }
        phase *= d / r;
        log_mag += r.ln();
    }
    Ok((phase, log_mag))
}

/// Hermitian eigendecomposition, eigenvalues ascending.
pub fn eig_herm(m: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let se = SymmetricEigen::try_new(h, f64::EPSILON, EIG_MAX_ITER)
        .ok_or_else(|| Error::Numerical("hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| se.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, seed: u64) -> SymmetricMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        SymmetricMatrix::symmetrized(a)
    }

    #[test]
    fn identity_and_diagonal_spectra() {
        let e = eig_sym(&SymmetricMatrix::identity(5)).unwrap();
        assert!(e.values.iter().all(|&v| (v - 1.0).abs() < 1e-15));
        let e = eig_sym(&SymmetricMatrix::from_diagonal(&[9.0, 4.0])).unwrap();
        assert_eq!(e.values.as_slice(), &[4.0, 9.0]);
        assert!((e.vectors[(1, 0)].abs() - 1.0).abs() < 1e-15);
        assert!((e.vectors[(0, 1)].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_reconstruction_residual() {
        let m = random_symmetric(50, 7);
        let e = eig_sym(&m).unwrap();
        let lam = DMatrix::from_diagonal(&e.values);
        let resid = max_abs(&(m.matrix() * &e.vectors - &e.vectors * lam));
        assert!(resid <= 1e-10 * m.norm_max(), "residual {resid}");
        let orth = max_abs(&(e.vectors.transpose() * &e.vectors - DMatrix::identity(50, 50)));
        assert!(orth <= 1e-10);
        assert!(e.values.as_slice().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn asymmetric_input_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(SymmetricMatrix::new(m).is_err());
    }

    #[test]
    fn powers_of_diagonal_matrices() {
        let d = SymmetricMatrix::from_diagonal(&[4.0, 9.0]);
        let r = mat_power_default(&d, 0.5).unwrap();
        assert!((r.matrix()[(0, 0)] - 2.0).abs() < 1e-14);
        assert!((r.matrix()[(1, 1)] - 3.0).abs() < 1e-14);
        let i = mat_power_default(&SymmetricMatrix::identity(3), -0.5).unwrap();
        assert!(max_abs(&(i.matrix() - DMatrix::identity(3, 3))) < 1e-15);
    }

    #[test]
    fn square_root_squares_back() {
        // circulant chain couplings a=5, b=1
        let n = 8;
        let x = DMatrix::from_fn(n, n, |i, j| {
            let d = i.abs_diff(j);
            if d == 0 {
                5.0
            } else if d == 1 || d == n - 1 {
                1.0
            } else {
                0.0
            }
        });
        let x = SymmetricMatrix::new(x).unwrap();
        let r = mat_power_default(&x, 0.5).unwrap();
        let sq = r.matrix() * r.matrix();
        assert!(max_abs(&(sq - x.matrix())) < 1e-10);
    }

    #[test]
    fn negative_eigenvalue_rejected() {
        let m = SymmetricMatrix::from_diagonal(&[1.0, -0.5]);
        assert!(matches!(mat_power_default(&m, 0.5), Err(Error::NotPositiveDefinite { .. })));
        // integer powers are fine
        assert!(mat_power_default(&m, 2.0).is_ok());
    }

    #[test]
    fn singular_values_examples() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let s = singular_values(&a).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-15 && (s[1] - 1.0).abs() < 1e-15);
        assert_eq!(singular_values(&DMatrix::zeros(2, 2)).unwrap(), vec![0.0, 0.0]);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = DMatrix::from_fn(20, 20, |_, _| rng.random_range(-1.0..1.0));
        let s = singular_values(&m).unwrap();
        let g = SymmetricMatrix::symmetrized(m.transpose() * &m);
        let mut oracle: Vec<f64> = eig_sym(&g).unwrap().values.iter().map(|v| v.max(0.0).sqrt()).collect();
        oracle.reverse();
        for (a, b) in s.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn determinant_examples() {
        let d = DMatrix::from_diagonal(&DVector::from_element(3, 2.0));
        let (s, l) = log_det(&d).unwrap();
        assert_eq!(s, 1.0);
        assert!((l - 3.0 * 2f64.ln()).abs() < 1e-15);
        let r1 = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert_eq!(log_det(&r1).unwrap().0, 0.0);
        let tri = DMatrix::from_row_slice(3, 3, &[2.0, 5.0, 1.0, 0.0, -3.0, 7.0, 0.0, 0.0, 0.5]);
        let (s, l) = log_det(&tri).unwrap();
        assert_eq!(s, -1.0);
        assert!((l - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn hilbert_determinant_against_exact_rationals() {
        let n = 8;
        // exact determinant by fraction-valued Gaussian elimination
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| BigRational::new(BigInt::from(1), BigInt::from(i + j + 1))).collect())
            .collect();
        let mut det = BigRational::from_integer(BigInt::from(1));
        for k in 0..n {
            let pivot = a[k][k].clone();
            det *= pivot.clone();
            for r in k + 1..n {
                let factor = a[r][k].clone() / pivot.clone();
                for c in k..n {
                    let sub = factor.clone() * a[k][c].clone();
                    a[r][c] -= sub;
                }
            }
        }
        let exact = {
            let (num, den) = (det.numer().clone(), det.denom().clone());
            let ln = |x: &BigInt| {
                let s = x.to_string();
                let digits = s.len() as f64;
                let lead: f64 = format!("0.{}", &s[..s.len().min(17)]).parse().unwrap();
                lead.ln() + digits * 10f64.ln()
            };
            ln(&num) - ln(&den)
        };
        let h = DMatrix::from_fn(n, n, |i, j| 1.0 / (i + j + 1) as f64);
        let (s, l) = log_det(&h).unwrap();
        assert_eq!(s, 1.0);
        let rel = (l - exact).exp() - 1.0;
        assert!(rel.abs() < 1e-8, "relative error {rel}");
    }

    #[test]
    fn complex_determinant_of_shift_plus_identity() {
        let n = 6;
        let m = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(0.0, 2.0)
            } else if j == i + 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let (phase, l) = log_det_complex(&m).unwrap();
        // (2i)^6 = -64
        assert!((l - 64f64.ln()).abs() < 1e-13);
        assert!((phase - Complex64::new(-1.0, 0.0)).norm() < 1e-13);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn power_law_adds_exponents(seed in 0u64..1000, a in -1.0f64..1.0, b in -1.0f64..1.0) {
            let n = 6;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
            let m = SymmetricMatrix::symmetrized(&g * g.transpose() + DMatrix::identity(n, n));
            let lhs = mat_power_default(&m, a).unwrap().matrix() * mat_power_default(&m, b).unwrap().matrix();
            let rhs = mat_power_default(&m, a + b).unwrap();
            prop_assert!(max_abs(&(lhs - rhs.matrix())) < 1e-9);
        }
    }
}
