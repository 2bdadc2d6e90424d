use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{block_entropy, mode_entropy, FermionicGaussianState, QuadraticFermionModel, ZERO_MODE_TOL};
use crate::error::{Error, Result};
use crate::lattice::{LatticeGraph, Region};
use crate::numerics::{eig_herm, principal_submatrix};

/// Largest block handled by [`entropy_scan_2d`].
pub const MAX_SCAN_BLOCK: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyRow {
    pub side: usize,
    pub area: usize,
    pub entropy: f64,
    /// `S/n`.
    pub per_side: f64,
    /// `S/(n log₂ n)`; `NaN` for `n = 1`.
    pub log_ratio: f64,
}

/// Von Neumann entropy of square blocks with corner at the origin.
pub fn entropy_scan_2d(
    state: &FermionicGaussianState,
    graph: &LatticeGraph,
    sides: &[usize],
) -> Result<Vec<EntropyRow>> {
    if graph.dimension() != 2 {
        return Err(Error::Parameter("entropy scan needs a two-dimensional lattice".into()));
    }
    if graph.vertex_count() != state.site_count() {
        return Err(Error::Shape("state and lattice sizes differ".into()));
    }
    sides
        .iter()
        .map(|&n| {
            if n * n > MAX_SCAN_BLOCK {
                return Err(Error::Size(format!("block of {} sites exceeds {MAX_SCAN_BLOCK}", n * n)));
            }
            let region = graph.block(&[0, 0], &[n, n])?;
            let entropy = block_entropy(state, &region, 1.0)?;
            let nf = n as f64;
            Ok(EntropyRow {
                side: n,
                area: graph.surface_area(&region)?,
                entropy,
                per_side: entropy / nf,
                log_ratio: if n > 1 { entropy / (nf * nf.log2()) } else { f64::NAN },
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalfspaceResult {
    pub entropy: f64,
    /// `s(I)` of the strip.
    pub area: usize,
    /// `S/s(I)`.
    pub per_boundary_site: f64,
    /// Entropy carried by each transverse momentum `k = 2πj/n_⊥`.
    pub per_chain: Vec<f64>,
}

/// Entropy of the strip `x < cut` of a hopping model on an `Lx × n_⊥` lattice
/// that is translation invariant along the second axis. Each transverse
/// momentum gives an independent chain with Hermitian coupling
/// `A_k[x,x'] = Σ_dy A[(x,0),(x',dy)] e^{ik·dy}`; the strip entropy is the sum
/// of the chain block entropies.
pub fn halfspace_entropy(model: &QuadraticFermionModel, cut: usize) -> Result<HalfspaceResult> {
    Ok(halfspace_scan(model, &[cut])?.remove(0))
}

/// [`halfspace_entropy`] for several cuts, decomposing each chain once.
pub fn halfspace_scan(model: &QuadraticFermionModel, cuts: &[usize]) -> Result<Vec<HalfspaceResult>> {
    let graph = model.graph();
    if graph.dimension() != 2 {
        return Err(Error::Parameter("half-space decoupling needs a two-dimensional lattice".into()));
    }
    if model.b().iter().any(|&x| x != 0.0) {
        return Err(Error::Unsupported("half-space decoupling needs B = 0".into()));
    }
    let (lx, ny) = (graph.dims()[0], graph.dims()[1]);
    if let Some(&cut) = cuts.iter().find(|&&c| c == 0 || c >= lx) {
        return Err(Error::InvalidRegion(format!("cut {cut} outside 1..{lx}")));
    }
    let a = model.a().matrix();
    let site = |x: usize, y: usize| x * ny + y;
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for x in 0..lx {
        for xp in 0..lx {
            for dy in 0..ny {
                let reference = a[(site(x, 0), site(xp, dy))];
                for y in 1..ny {
                    if (a[(site(x, y), site(xp, (y + dy) % ny))] - reference).abs() > 1e-12 * scale {
                        return Err(Error::Unsupported(
                            "couplings are not translation invariant along the transverse axis".into(),
                        ));
                    }
                }
            }
        }
    }
    let mut per_cut = vec![Vec::with_capacity(ny); cuts.len()];
    for j in 0..ny {
        let k = 2.0 * PI * j as f64 / ny as f64;
        let ak = DMatrix::from_fn(lx, lx, |x, xp| {
            (0..ny).map(|dy| Complex64::from_polar(a[(site(x, 0), site(xp, dy))], k * dy as f64)).sum::<Complex64>()
        });
        let (vals, vecs) = eig_herm(&ak)?;
        let top = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = ZERO_MODE_TOL * top;
        let mut vk = DMatrix::<Complex64>::zeros(lx, lx);
        for (c, &e) in vals.iter().enumerate() {
            let s = if e > tol {
                1.0
            } else if e < -tol {
                -1.0
            } else {
                continue;
            };
            let col = vecs.column(c);
            vk += (col * col.adjoint()) * Complex64::new(s, 0.0);
        }
        for (c, &cut) in cuts.iter().enumerate() {
            let strip: Vec<usize> = (0..cut).collect();
            // V_k is Hermitian, so the singular values of its principal block are |eigenvalues|
            let (block_vals, _) = eig_herm(&principal_submatrix(&vk, &strip))?;
            let mut s = 0.0;
            for e in block_vals {
                let sigma = e.abs();
                if sigma > 1.0 + 1e-8 {
                    return Err(Error::InvalidState(format!("singular value {sigma} exceeds one")));
                }
                s += mode_entropy(sigma.min(1.0), 1.0);
            }
            per_cut[c].push(s);
        }
    }
    cuts.iter()
        .zip(per_cut)
        .map(|(&cut, per_chain)| {
            let entropy: f64 = per_chain.iter().sum();
            let area = graph.surface_area(&Region::interval(0, cut * ny))?;
            Ok(HalfspaceResult { entropy, area, per_boundary_site: entropy / area as f64, per_chain })
        })
        .collect()
}
