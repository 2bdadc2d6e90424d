use std::collections::BTreeMap;
use std::f64::consts::LN_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::states::density_spectrum;
use super::{partial_trace, region_mask, renyi_from_spectrum, DenseSpinSystem, PauliOp, Propagator};
use crate::error::{Error, Result};
use crate::lattice::{LatticeGraph, Region};
use crate::numerics::{eig_herm, xlog2x_neg};

/// Gibbs state `e^{−βH}/Z`.
pub fn thermal_state(system: &DenseSpinSystem, beta: f64) -> Result<DMatrix<Complex64>> {
    check_beta(beta, false)?;
    let p = Propagator::new(system)?;
    Ok(p.density(&p.gibbs_weights(beta)))
}

fn check_beta(beta: f64, allow_zero: bool) -> Result<()> {
    if !beta.is_finite() || beta < 0.0 || (beta == 0.0 && !allow_zero) {
        return Err(Error::Parameter(format!("inverse temperature {beta} out of range")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalMi {
    /// `S_I + S_O − S` in bits.
    pub mutual_information: f64,
    /// `β tr[H_∂(ρ_I⊗ρ_O − ρ_β)] / ln 2`.
    pub bound_exact: f64,
    /// `β ‖h‖ s(I) / ln 2`.
    pub bound_paper: f64,
    /// Largest operator norm of a boundary term (terms grouped by support).
    pub boundary_norm: f64,
    /// Sites of the region touched by boundary terms.
    pub boundary_sites: usize,
}

/// `tr[P ρ]` for a Pauli operator on the qubits of `ρ`.
fn pauli_trace(p: &PauliOp, rho: &DMatrix<Complex64>) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for b in 0..rho.nrows() {
        let (t, a) = p.act(b);
        acc += a * rho[(b, t)];
    }
    acc
}

fn local_norm(group: &[PauliOp]) -> Result<f64> {
    let support = group.iter().fold(0u64, |m, t| m | t.support());
    let sites: Vec<usize> = (0..64).filter(|&q| support >> q & 1 == 1).collect();
    let d = 1 << sites.len();
    let mut m = DMatrix::zeros(d, d);
    for t in group {
        let local = t.restrict(&sites);
        for b in 0..d {
            let (r, a) = local.act(b);
            m[(r, b)] += a;
        }
    }
    let (vals, _) = eig_herm(&m)?;
    Ok(vals.iter().map(|v| v.abs()).fold(0.0, f64::max))
}

fn entropy_bits(rho: &DMatrix<Complex64>) -> Result<f64> {
    renyi_from_spectrum(&density_spectrum(rho)?, 1.0)
}

/// Mutual information of the Gibbs state across `region` together with the
/// free-energy bound and the area-law bound.
pub fn thermal_mutual_information(system: &DenseSpinSystem, beta: f64, region: &Region) -> Result<ThermalMi> {
    check_beta(beta, false)?;
    let n = system.qubit_count();
    let inside_mask = region_mask(n, region)?;
    let outside = region.complement(n);
    if region.is_empty() || outside.is_empty() {
        return Err(Error::InvalidRegion("region must be a proper non-empty subset".into()));
    }
    let prop = Propagator::new(system)?;
    let weights = prop.gibbs_weights(beta);
    let rho = prop.density(&weights);
    let rho_i = partial_trace(&rho, n, region)?;
    let rho_o = partial_trace(&rho, n, &outside)?;
    let s_total: f64 = weights.iter().map(|&w| xlog2x_neg(w)).sum();
    let mutual_information = entropy_bits(&rho_i)? + entropy_bits(&rho_o)? - s_total;

    let boundary = system.partition(region)?.boundary;
    let mut delta = Complex64::new(0.0, 0.0);
    let mut groups: BTreeMap<u64, Vec<PauliOp>> = BTreeMap::new();
    let mut touched = 0u64;
    for t in &boundary {
        let pi = PauliOp { c: t.c, ..t.restrict(region.as_slice()) };
        let po = PauliOp { c: Complex64::new(1.0, 0.0), ..t.restrict(outside.as_slice()) };
        delta += pauli_trace(&pi, &rho_i) * pauli_trace(&po, &rho_o) - pauli_trace(t, &rho);
        groups.entry(t.support()).or_default().push(*t);
        touched |= t.support() & inside_mask;
    }
    let boundary_norm =
        groups.values().map(|g| local_norm(g)).collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
    let boundary_sites = touched.count_ones() as usize;
    Ok(ThermalMi {
        mutual_information,
        bound_exact: beta * delta.re / LN_2,
        bound_paper: beta * boundary_norm * boundary_sites as f64 / LN_2,
        boundary_norm,
        boundary_sites,
    })
}

/// Classical Ising model `E(s) = −J Σ_{⟨ij⟩} s_i s_j − h Σ s_i`, `s_i = ±1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalIsing {
    pub graph: LatticeGraph,
    pub j: f64,
    pub h: f64,
}

pub const MAX_CLASSICAL_SPINS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalMi {
    /// Shannon mutual information in bits.
    pub mutual_information: f64,
    /// `s(I) · log₂ 2`.
    pub bound: f64,
    pub boundary_sites: usize,
}

fn shannon_from_logs(logw: &[f64]) -> f64 {
    let lse = log_sum_exp(logw);
    logw.iter().map(|&l| xlog2x_neg((l - lse).exp())).sum()
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|&x| (x - m).exp()).sum::<f64>().ln()
}

/// Accumulates `ln Σ e^{x}` into slot `k` without overflow.
fn lse_add(acc: &mut [f64], k: usize, x: f64) {
    let a = acc[k];
    acc[k] = if a == f64::NEG_INFINITY {
        x
    } else if a > x {
        a + (x - a).exp().ln_1p()
    } else {
        x + (a - x).exp().ln_1p()
    };
}

/// Mutual information of the Gibbs distribution by exact enumeration.
pub fn classical_spin_mutual_information(model: &ClassicalIsing, beta: f64, region: &Region) -> Result<ClassicalMi> {
    check_beta(beta, true)?;
    let n = model.graph.vertex_count();
    if n > MAX_CLASSICAL_SPINS {
        return Err(Error::Size(format!("{n} classical spins above {MAX_CLASSICAL_SPINS}")));
    }
    model.graph.check(region)?;
    let inside = region.as_slice();
    let outside = region.complement(n);
    let outside = outside.as_slice();
    let edges: Vec<(usize, usize)> = model.graph.edges().collect();
    let mut logw = Vec::with_capacity(1 << n);
    let mut marg_i = vec![f64::NEG_INFINITY; 1 << inside.len()];
    let mut marg_o = vec![f64::NEG_INFINITY; 1 << outside.len()];
    let spin = |c: usize, q: usize| if c >> q & 1 == 1 { 1.0 } else { -1.0 };
    for c in 0..1usize << n {
        let bond: f64 = edges.iter().map(|&(a, b)| spin(c, a) * spin(c, b)).sum();
        let field: f64 = (0..n).map(|q| spin(c, q)).sum();
        let lw = beta * (model.j * bond + model.h * field);
        logw.push(lw);
        let gi = inside.iter().enumerate().fold(0, |m, (k, &q)| m | (c >> q & 1) << k);
        let go = outside.iter().enumerate().fold(0, |m, (k, &q)| m | (c >> q & 1) << k);
        lse_add(&mut marg_i, gi, lw);
        lse_add(&mut marg_o, go, lw);
    }
    let mi = shannon_from_logs(&marg_i) + shannon_from_logs(&marg_o) - shannon_from_logs(&logw);
    let boundary_sites = model.graph.surface_area(region)?;
    Ok(ClassicalMi { mutual_information: mi.max(0.0), bound: boundary_sites as f64, boundary_sites })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Boundary;

    #[test]
    fn high_temperature_limit() {
        let sys = DenseSpinSystem::ising(6, 1.0, 1.0, Boundary::Open).unwrap();
        let mi = thermal_mutual_information(&sys, 1e-4, &Region::interval(0, 3)).unwrap();
        assert!(mi.mutual_information >= 0.0 && mi.mutual_information < 1e-7);
        assert!(thermal_mutual_information(&sys, 0.0, &Region::interval(0, 3)).is_err());
        assert!(thermal_mutual_information(&sys, -1.0, &Region::interval(0, 3)).is_err());
    }

    #[test]
    fn decoupled_halves_have_zero_information() {
        let mut terms = Vec::new();
        for (a, b) in [(0, 1), (2, 3)] {
            terms.push(PauliOp::z_string(&[a, b]).scaled(-1.0));
        }
        for q in 0..4 {
            terms.push(PauliOp::single('X', q).unwrap().scaled(-0.6));
        }
        let sys = DenseSpinSystem::new(4, terms).unwrap();
        let mi = thermal_mutual_information(&sys, 2.0, &Region::interval(0, 2)).unwrap();
        assert!(mi.mutual_information.abs() < 1e-10);
        assert_eq!(mi.boundary_sites, 0);
        assert_eq!(mi.bound_exact, 0.0);
        let rho = thermal_state(&sys, 2.0).unwrap();
        let ri = partial_trace(&rho, 4, &Region::interval(0, 2)).unwrap();
        let ro = partial_trace(&rho, 4, &Region::interval(2, 2)).unwrap();
        // ρ = ρ_I ⊗ ρ_O with qubits 0,1 as the low bits
        let prod = ro.kronecker(&ri);
        assert!((rho - prod).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn ising_half_cut_satisfies_derived_bound() {
        let sys = DenseSpinSystem::ising(10, 1.0, 1.0, Boundary::Open).unwrap();
        let mi = thermal_mutual_information(&sys, 1.0, &Region::interval(0, 5)).unwrap();
        assert!(mi.mutual_information > 0.0);
        assert!(mi.mutual_information <= mi.bound_exact + 1e-12, "{mi:?}");
        assert_eq!(mi.boundary_sites, 1);
        assert!((mi.boundary_norm - 1.0).abs() < 1e-12);
        assert!((mi.bound_paper - 1.0 / LN_2).abs() < 1e-12);
    }

    #[test]
    fn xx_boundary_term_norm_groups_by_support() {
        let sys = DenseSpinSystem::xx(4, Boundary::Open).unwrap();
        let mi = thermal_mutual_information(&sys, 1.0, &Region::interval(0, 2)).unwrap();
        // −¼(XX + YY) has eigenvalues ±½ and 0
        assert!((mi.boundary_norm - 0.5).abs() < 1e-12);
    }

    #[test]
    fn shrinking_region_lowers_information() {
        let sys = DenseSpinSystem::ising(8, 1.0, 0.8, Boundary::Open).unwrap();
        let mut prev = f64::INFINITY;
        for len in (1..=4).rev() {
            let mi = thermal_mutual_information(&sys, 1.5, &Region::interval(0, len)).unwrap();
            assert!(mi.mutual_information <= prev + 1e-12);
            prev = mi.mutual_information;
        }
    }

    fn ring(n: usize, j: f64) -> ClassicalIsing {
        ClassicalIsing { graph: LatticeGraph::chain(n, Boundary::Periodic).unwrap(), j, h: 0.0 }
    }

    // independent oracle: plain weights and hash-map marginals (no log-space)
    fn ring_mi_reference(n: usize, block: &[usize], beta: f64) -> f64 {
        use std::collections::HashMap;
        let mut joint = Vec::new();
        let (mut pi, mut po): (HashMap<Vec<bool>, f64>, HashMap<Vec<bool>, f64>) = Default::default();
        for c in 0..1usize << n {
            let s: Vec<f64> = (0..n).map(|q| if c >> q & 1 == 1 { 1.0 } else { -1.0 }).collect();
            let e: f64 = (0..n).map(|q| s[q] * s[(q + 1) % n]).sum();
            let w = (beta * e).exp();
            joint.push(w);
            let key_i: Vec<bool> = block.iter().map(|&q| s[q] > 0.0).collect();
            let key_o: Vec<bool> = (0..n).filter(|q| !block.contains(q)).map(|q| s[q] > 0.0).collect();
            *pi.entry(key_i).or_default() += w;
            *po.entry(key_o).or_default() += w;
        }
        let z: f64 = joint.iter().sum();
        let h = |v: Vec<f64>| -> f64 { v.into_iter().map(|w| w / z).filter(|&p| p > 0.0).map(|p| -p * p.log2()).sum() };
        h(pi.into_values().collect()) + h(po.into_values().collect()) - h(joint)
    }

    #[test]
    fn classical_ring_information() {
        let r = Region::interval(3, 5);
        assert!(classical_spin_mutual_information(&ring(16, 1.0), 0.0, &r).unwrap().mutual_information.abs() < 1e-12);
        for beta in [0.3, 1.0, 5.0] {
            let mi = classical_spin_mutual_information(&ring(16, 1.0), beta, &r).unwrap();
            assert_eq!(mi.boundary_sites, 2);
            assert!(mi.mutual_information <= mi.bound + 1e-12);
        }
        for beta in [0.2, 0.7, 2.0] {
            let block = [2, 3, 4, 5];
            let mi = classical_spin_mutual_information(&ring(10, 1.0), beta, &Region::new(block.to_vec()).unwrap())
                .unwrap()
                .mutual_information;
            let reference = ring_mi_reference(10, &block, beta);
            assert!((mi - reference).abs() < 1e-10, "β={beta}: {mi} vs {reference}");
        }
        // frozen ring: only the global spin is shared
        let cold = classical_spin_mutual_information(&ring(16, 1.0), 5.0, &r).unwrap().mutual_information;
        assert!((cold - 1.0).abs() < 0.05, "{cold}");
        let big = ClassicalIsing { graph: LatticeGraph::chain(21, Boundary::Open).unwrap(), j: 1.0, h: 0.0 };
        assert!(classical_spin_mutual_information(&big, 1.0, &Region::interval(0, 3)).is_err());
    }
}
