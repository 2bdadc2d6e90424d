//! Dense linear algebra, GF(2) elimination and log-scaling fits shared by
//! the physics modules. All entropies downstream are in bits.

mod fit;
mod gf2;
mod krylov;
mod linalg;
pub mod quadrature;

pub use fit::{fit_log_scaling, FitResult, DEFAULT_WINDOW};
pub use gf2::{gf2_rank, BitMatrix};
pub use krylov::{lanczos_lowest, LanczosResult};
pub use linalg::{
    default_floor, eig_herm, eig_sym, log_det, log_det_complex, mat_power, mat_power_default, max_abs,
    principal_submatrix, singular_values, svd, Eigen, Svd, SvdField, SymmetricMatrix,
};

/// `-x log₂ x` with the convention `0·log 0 = 0`.
pub fn xlog2x_neg(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}
