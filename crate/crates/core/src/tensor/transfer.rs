use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;

use super::Scalar;
use crate::error::{Error, Result};

/// `E_S = Σ_{s,s'} S_{s s'} conj(A[s]) ⊗ A[s']`, identity insertion when `op` is `None`.
pub fn transfer_operator<T: Scalar>(tensors: &[DMatrix<T>], op: Option<&DMatrix<T>>) -> Result<DMatrix<T>> {
    let d = tensors.len();
    let dim = tensors.first().map(|a| a.nrows()).unwrap_or(0);
    if d == 0 || tensors.iter().any(|a| a.nrows() != dim || a.ncols() != dim) {
        return Err(Error::Shape("uniform tensors must be square and equally sized".into()));
    }
    if let Some(o) = op {
        if o.nrows() != d || o.ncols() != d {
            return Err(Error::Shape("operator does not match the local dimension".into()));
        }
    }
    let mut e = DMatrix::zeros(dim * dim, dim * dim);
    for s in 0..d {
        let bra = tensors[s].map(|x| x.conjugate());
        for s2 in 0..d {
            let w = match op {
                None if s == s2 => T::one(),
                None => continue,
                Some(o) => o[(s, s2)],
            };
            if w != T::zero() {
                e += bra.kronecker(&tensors[s2]) * w;
            }
        }
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationLength {
    /// Transfer eigenvalues divided by the dominant one, sorted by modulus.
    pub eigenvalues: Vec<Complex64>,
    /// `−1/ln|λ₂|`; infinite when the dominant eigenvalue is degenerate.
    pub xi: f64,
    pub long_range_order: bool,
}

/// Correlation length from the subleading eigenvalue of `E_1`.
pub fn correlation_length<T: Scalar>(tensors: &[DMatrix<T>]) -> Result<CorrelationLength> {
    let e = transfer_operator(tensors, None)?.map(|x| x.to_c64());
    let schur =
        Schur::try_new(e, f64::EPSILON, 0).ok_or_else(|| Error::Numerical("Schur decomposition failed".into()))?;
    let mut vals: Vec<Complex64> =
        schur.eigenvalues().expect("complex Schur form is triangular").iter().copied().collect();
    vals.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    let top = vals[0];
    if !(top.norm() > 0.0) {
        return Err(Error::Numerical("transfer operator is nilpotent".into()));
    }
    let eigenvalues: Vec<Complex64> = vals.iter().map(|v| v / top).collect();
    let second = eigenvalues.get(1).map(|v| v.norm()).unwrap_or(0.0);
    let long_range_order = second >= 1.0 - 1e-10;
    let xi = if long_range_order {
        f64::INFINITY
    } else if second == 0.0 {
        0.0
    } else {
        -1.0 / second.ln()
    };
    Ok(CorrelationLength { eigenvalues, xi, long_range_order })
}

fn dominant_vector(m: &DMatrix<Complex64>) -> Result<DVector<Complex64>> {
    let n = m.nrows();
    let mut v = DVector::from_fn(n, |i, _| Complex64::new(1.0 + 0.1 * i as f64, 0.05 * i as f64));
    v.unscale_mut(v.norm());
    for _ in 0..10_000 {
        let mut w = m * &v;
        let nrm = w.norm();
        if !(nrm > 0.0) {
            return Err(Error::Numerical("transfer power iteration collapsed".into()));
        }
        w.unscale_mut(nrm);
        // fix the phase on the largest component
        let k = w.iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).map(|p| p.0).unwrap_or(0);
        let ph = w[k] / w[k].norm();
        w /= ph;
        if (&w - &v).norm() < 1e-14 {
            return Ok(w);
        }
        v = w;
    }
    Err(Error::Numerical("transfer power iteration did not converge".into()))
}

/// Connected correlator `⟨A_0 B_l⟩ − ⟨A⟩⟨B⟩` of the infinite uniform MPS.
pub fn uniform_correlator<T: Scalar>(
    tensors: &[DMatrix<T>],
    a: &DMatrix<T>,
    b: &DMatrix<T>,
    l: usize,
) -> Result<Complex64> {
    if l == 0 {
        return Err(Error::Parameter("correlator distance must be positive".into()));
    }
    let c = |m: DMatrix<T>| m.map(|x| x.to_c64());
    let e1 = c(transfer_operator(tensors, None)?);
    let ea = c(transfer_operator(tensors, Some(a))?);
    let eb = c(transfer_operator(tensors, Some(b))?);
    let right = dominant_vector(&e1)?;
    let left = dominant_vector(&e1.transpose())?;
    let lam = left.dot(&(&e1 * &right)) / left.dot(&right);
    let norm = left.dot(&right);
    let mut v = &eb * &right;
    for _ in 1..l {
        v = &e1 * v / lam;
    }
    let ab = left.dot(&(&ea * v)) / (lam * lam * norm);
    let ma = left.dot(&(&ea * &right)) / (lam * norm);
    let mb = left.dot(&(&eb * &right)) / (lam * norm);
    Ok(ab - ma * mb)
}

/// AKLT tensors, local basis ordered `(+1, 0, −1)`.
pub fn aklt_tensors() -> Vec<DMatrix<f64>> {
    let a = (2.0f64 / 3.0).sqrt();
    let b = (1.0f64 / 3.0).sqrt();
    vec![
        DMatrix::from_row_slice(2, 2, &[0.0, a, 0.0, 0.0]),
        DMatrix::from_row_slice(2, 2, &[-b, 0.0, 0.0, b]),
        DMatrix::from_row_slice(2, 2, &[0.0, 0.0, -a, 0.0]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_tensor_has_zero_correlation_length() {
        let t = vec![DMatrix::from_element(1, 1, 1.0), DMatrix::from_element(1, 1, 0.0)];
        let c = correlation_length(&t).unwrap();
        assert_eq!(c.xi, 0.0);
        assert!(!c.long_range_order);
    }

    #[test]
    fn ghz_transfer_matrix() {
        let t = vec![
            DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]),
            DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]),
        ];
        let e = transfer_operator(&t, None).unwrap();
        // diag(1, 0, 0, 1) written out by hand
        let expect = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.0, 0.0, 1.0]));
        assert_eq!(e, expect);
        let c = correlation_length(&t).unwrap();
        assert!(c.long_range_order);
        assert!(c.xi.is_infinite());
    }

    #[test]
    fn aklt_spectrum_and_decay() {
        let t = aklt_tensors();
        // normalization: Σ A†A = 1
        let id: DMatrix<f64> = t.iter().map(|a| a.transpose() * a).sum();
        assert!((id - DMatrix::identity(2, 2)).norm() < 1e-14);
        let c = correlation_length(&t).unwrap();
        assert!((c.eigenvalues[0] - 1.0).norm() < 1e-12);
        for v in &c.eigenvalues[1..] {
            assert!((v + 1.0 / 3.0).norm() < 1e-10, "{v}");
        }
        assert!((c.xi - 1.0 / 3f64.ln()).abs() < 1e-10);
        let sz = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.0, -1.0]));
        let ls: Vec<usize> = (2..=((4.0 * c.xi).ceil() as usize).max(3)).collect();
        let pts: Vec<(f64, f64)> =
            ls.iter().map(|&l| (l as f64, uniform_correlator(&t, &sz, &sz, l).unwrap().norm().ln())).collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
            / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
        let fitted = -1.0 / slope;
        assert!((fitted / c.xi - 1.0).abs() < 0.1, "{fitted} vs {}", c.xi);
        // known amplitude: ⟨S^z_0 S^z_l⟩ = (4/3)(−1/3)^l
        let v = uniform_correlator(&t, &sz, &sz, 3).unwrap();
        assert!((v.re - 4.0 / 3.0 * (-1.0f64 / 3.0).powi(3)).abs() < 1e-12);
    }
}
