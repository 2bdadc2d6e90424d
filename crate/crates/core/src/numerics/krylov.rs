use nalgebra::{ComplexField, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct LanczosResult<T: ComplexField> {
    pub value: f64,
    pub vector: DVector<T>,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Lowest eigenpair of a Hermitian operator given as a matrix-vector product.
///
/// Restarted Lanczos with full reorthogonalisation; each cycle builds at most
/// `krylov_dim` vectors and restarts from the current Ritz vector. Converged
/// when `‖Hv − θv‖ ≤ tol`.
pub fn lanczos_lowest<T, F>(
    apply: F,
    start: &DVector<T>,
    tol: f64,
    krylov_dim: usize,
    max_restarts: usize,
) -> Result<LanczosResult<T>>
where
    T: ComplexField<RealField = f64> + Copy,
    F: Fn(&DVector<T>) -> DVector<T>,
{
    let n = start.len();
    if n == 0 {
        return Err(Error::Shape("empty Lanczos start vector".into()));
    }
    let norm0 = start.norm();
    if !(norm0 > 0.0) {
        return Err(Error::Numerical("zero Lanczos start vector".into()));
    }
    let mut v0 = start.unscale(norm0);
    let m_max = krylov_dim.clamp(1, n);
    let mut iterations = 0;
    let mut best: Option<LanczosResult<T>> = None;
    for _ in 0..=max_restarts {
        let mut basis: Vec<DVector<T>> = vec![v0.clone()];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut ritz = (0.0, DVector::<f64>::zeros(1));
        for j in 0..m_max {
            let mut w = apply(&basis[j]);
            iterations += 1;
            let a = basis[j].dotc(&w).real();
            alpha.push(a);
            // two passes of Gram-Schmidt against the whole basis
            for _ in 0..2 {
                for q in &basis {
                    let c = q.dotc(&w);
                    w.axpy(-c, q, T::one());
                }
            }
            let b = w.norm();
            let k = alpha.len();
            let mut t = DMatrix::<f64>::zeros(k, k);
            for i in 0..k {
                t[(i, i)] = alpha[i];
                if i + 1 < k {
                    t[(i, i + 1)] = beta[i];
                    t[(i + 1, i)] = beta[i];
                }
            }
            let se = SymmetricEigen::new(t);
            let (imin, &theta) =
                se.eigenvalues.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty tridiagonal");
            let y = se.eigenvectors.column(imin).into_owned();
            ritz = (theta, y.clone());
            // residual of the Ritz pair is |b · y_last|
            if (b * y[k - 1]).abs() <= tol || b <= 1e-14 * a.abs().max(1.0) || j + 1 == m_max {
                break;
            }
            beta.push(b);
            basis.push(w.unscale(b));
        }
        let (theta, y) = ritz;
        let mut x = DVector::<T>::zeros(n);
        for (i, q) in basis.iter().enumerate().take(y.len()) {
            x.axpy(T::from_real(y[i]), q, T::one());
        }
        let xn = x.norm();
        x.unscale_mut(xn);
        let r = apply(&x) - x.scale(theta);
        iterations += 1;
        let residual = r.norm();
        let converged = residual <= tol;
        let result = LanczosResult { value: theta, vector: x.clone(), residual, iterations, converged };
        if converged {
            return Ok(result);
        }
        best = Some(result);
        v0 = x;
    }
    Ok(best.expect("at least one Lanczos cycle"))
}
