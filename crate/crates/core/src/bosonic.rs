//! Gaussian states of harmonic lattices `H = ½(Σ pᵢPᵢⱼpⱼ + Σ xᵢXᵢⱼxⱼ)`.
//!
//! Covariance matrices are stored in the block form `Γ = Γ_x ⊕ Γ_p`
//! (coordinate order `x₁..x_n, p₁..p_n`), which is all the models here
//! ever produce, so the symplectic form never appears explicitly.
//! Partial transposition on a region is the sign flip `p_i → -p_i` there.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lattice::{Boundary, LatticeGraph, Region};
use crate::numerics::{eig_sym, log_det, mat_power, principal_submatrix, SymmetricMatrix};

/// Symplectic eigenvalues this far below one are rounded up to one.
const CLAMP_WINDOW: f64 = 1e-10;
/// Symplectic eigenvalues below `1 - INVALID_BELOW` indicate an unphysical state.
const INVALID_BELOW: f64 = 1e-8;
/// Relative gap `λ_min(X)/‖X‖` under which results carry a conditioning warning.
const NEAR_CRITICAL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct HarmonicModel {
    graph: LatticeGraph,
    x: SymmetricMatrix,
    p: SymmetricMatrix,
}

impl HarmonicModel {
    pub fn new(graph: LatticeGraph, x: SymmetricMatrix, p: SymmetricMatrix) -> Result<Self> {
        let n = graph.vertex_count();
        if x.order() != n || p.order() != n {
            return Err(Error::Shape(format!("coupling matrices of order {}/{} on {n} sites", x.order(), p.order())));
        }
        for (name, m) in [("X", &x), ("P", &p)] {
            let low = eig_sym(m)?.values[0];
            if low <= 0.0 {
                return Err(Error::Parameter(format!("{name} not positive definite (smallest eigenvalue {low:e})")));
            }
        }
        Ok(Self { graph, x, p })
    }

    /// `X = a·1 + b·adjacency`, `P = 1`.
    pub fn nearest_neighbor(graph: LatticeGraph, a: f64, b: f64) -> Result<Self> {
        let n = graph.vertex_count();
        let mut x = DMatrix::from_diagonal_element(n, n, a);
        for (i, j) in graph.edges() {
            x[(i, j)] = b;
            x[(j, i)] = b;
        }
        Self::new(graph, SymmetricMatrix::symmetrized(x), SymmetricMatrix::identity(n))
    }

    /// Chain with `X = circ(a, b, 0, …, 0, b)` under periodic boundaries.
    pub fn chain(n: usize, a: f64, b: f64, bc: Boundary) -> Result<Self> {
        if a <= 2.0 * b.abs() && bc == Boundary::Periodic {
            return Err(Error::Critical { eigenvalue: a - 2.0 * b.abs() });
        }
        Self::nearest_neighbor(LatticeGraph::chain(n, bc)?, a, b)
    }

    /// Lattice discretisation of the Klein-Gordon field on `[0,1]` with `n`
    /// sites: `a = m² + 2n²`, `b = -n²`.
    pub fn klein_gordon(n: usize, mass: f64) -> Result<Self> {
        let n2 = (n * n) as f64;
        Self::chain(n, mass * mass + 2.0 * n2, -n2, Boundary::Periodic)
    }

    pub fn uncoupled(graph: LatticeGraph) -> Result<Self> {
        Self::nearest_neighbor(graph, 1.0, 0.0)
    }

    pub fn graph(&self) -> &LatticeGraph {
        &self.graph
    }

    pub fn x(&self) -> &SymmetricMatrix {
        &self.x
    }

    pub fn p(&self) -> &SymmetricMatrix {
        &self.p
    }

    pub fn mode_count(&self) -> usize {
        self.x.order()
    }

    /// Spectral gap `λ_min(XP)^{1/2}`.
    pub fn gap(&self) -> Result<f64> {
        let xh = mat_power(&self.x, 0.5, 0.0)?;
        let m = SymmetricMatrix::symmetrized(xh.matrix() * self.p.matrix() * xh.matrix());
        Ok(eig_sym(&m)?.values[0].max(0.0).sqrt())
    }

    /// True when `λ_min(X)/‖X‖` is below the near-critical threshold.
    pub fn near_critical(&self) -> Result<bool> {
        let e = eig_sym(&self.x)?;
        let top = e.values[e.values.len() - 1].abs();
        Ok(e.values[0] / top < NEAR_CRITICAL)
    }
}

#[derive(Debug, Clone)]
pub struct GaussianBosonicState {
    pub gamma_x: SymmetricMatrix,
    pub gamma_p: SymmetricMatrix,
    /// `None` for the ground state.
    pub beta: Option<f64>,
    pub near_critical: bool,
}

/// Decomposition of `M = X^{1/2} P X^{1/2}` shared by ground and thermal states.
struct Normal {
    x_half: DMatrix<f64>,
    x_inv_half: DMatrix<f64>,
    eig: crate::numerics::Eigen,
}

fn normal_modes(model: &HarmonicModel) -> Result<Normal> {
    let ex = eig_sym(&model.x)?;
    let top = ex.values[ex.values.len() - 1].abs();
    let floor = 1e-12 * top;
    if ex.values[0] <= floor {
        return Err(Error::Critical { eigenvalue: ex.values[0] });
    }
    let x_half = ex.apply(f64::sqrt);
    let x_inv_half = ex.apply(|v| 1.0 / v.sqrt());
    let m = SymmetricMatrix::symmetrized(&x_half * model.p.matrix() * &x_half);
    let eig = eig_sym(&m)?;
    Ok(Normal { x_half, x_inv_half, eig })
}

/// Ground state: `Γ_p = X^{1/2}(X^{1/2}PX^{1/2})^{-1/2}X^{1/2}`, `Γ_x = Γ_p^{-1}`.
pub fn ground_state(model: &HarmonicModel) -> Result<GaussianBosonicState> {
    build_state(model, None)
}

/// Gibbs state at inverse temperature `beta`.
///
/// With `M = X^{1/2}PX^{1/2}` and `G = 2(exp(βM^{1/2}) − 1)^{-1}`,
/// `Γ_x = X^{-1/2} M^{1/2} (1+G) X^{-1/2}` and
/// `Γ_p = X^{1/2} M^{-1/2} (1+G) X^{1/2}`. Since `1 + G = coth(βM^{1/2}/2)`,
/// the factor is evaluated in that form.
pub fn thermal_state(model: &HarmonicModel, beta: f64) -> Result<GaussianBosonicState> {
    if !(beta > 0.0) {
        return Err(Error::Parameter(format!("inverse temperature {beta} must be positive")));
    }
    build_state(model, Some(beta))
}

fn build_state(model: &HarmonicModel, beta: Option<f64>) -> Result<GaussianBosonicState> {
    let nm = normal_modes(model)?;
    let occupation = |mu: f64| -> f64 {
        let w = mu.max(0.0).sqrt();
        match beta {
            None => 1.0,
            Some(b) => {
                let x = 0.5 * b * w;
                if x > 40.0 {
                    1.0
                } else {
                    1.0 / x.tanh()
                }
            }
        }
    };
    let inner_x = nm.eig.apply(|mu| mu.max(0.0).sqrt() * occupation(mu));
    let inner_p = nm.eig.apply(|mu| occupation(mu) / mu.max(0.0).sqrt());
    let gamma_x = SymmetricMatrix::symmetrized(&nm.x_inv_half * inner_x * &nm.x_inv_half);
    let gamma_p = SymmetricMatrix::symmetrized(&nm.x_half * inner_p * &nm.x_half);
    let near_critical = model.near_critical()?;
    if near_critical {
        log::warn!("harmonic model is near critical; covariance matrices are ill-conditioned");
    }
    Ok(GaussianBosonicState { gamma_x, gamma_p, beta, near_critical })
}

impl GaussianBosonicState {
    pub fn mode_count(&self) -> usize {
        self.gamma_x.order()
    }

    fn check(&self, region: &Region) -> Result<()> {
        match region.as_slice().last() {
            Some(&i) if i >= self.mode_count() => {
                Err(Error::InvalidRegion(format!("site {i} outside {} modes", self.mode_count())))
            }
            _ => Ok(()),
        }
    }
}

/// Symplectic eigenvalues of the reduced covariance matrix on `region`,
/// descending. Values within `1e-10` below one are set to one.
pub fn symplectic_spectrum(state: &GaussianBosonicState, region: &Region) -> Result<Vec<f64>> {
    state.check(region)?;
    if region.is_empty() {
        return Ok(Vec::new());
    }
    let idx = region.as_slice();
    let gx = state.gamma_x.principal(idx);
    let gp = state.gamma_p.principal(idx);
    let gx_half = mat_power(&gx, 0.5, 0.0).map_err(|e| Error::Conditioning(e.to_string()))?;
    let prod = SymmetricMatrix::symmetrized(gx_half.matrix() * gp.matrix() * gx_half.matrix());
    let eig = eig_sym(&prod)?;
    let mut d = Vec::with_capacity(idx.len());
    for &v in eig.values.iter().rev() {
        let dj = v.max(0.0).sqrt();
        if dj < 1.0 - INVALID_BELOW {
            return Err(Error::Conditioning(format!(
                "symplectic eigenvalue {dj} below one; reduced covariance is not physical"
            )));
        }
        d.push(if (1.0 - CLAMP_WINDOW..1.0).contains(&dj) { 1.0 } else { dj.max(1.0) });
    }
    Ok(d)
}

/// Entropy in bits of a Gaussian state with the given symplectic eigenvalues.
///
/// `alpha = 1` is von Neumann; other positive orders (including infinity)
/// are Rényi entropies, using the thermal-oscillator spectrum
/// `p_k = (1−q)q^k`, `q = (d−1)/(d+1)` of each normal mode.
pub fn gaussian_entropy(symplectic: &[f64], alpha: f64) -> Result<f64> {
    check_order(alpha)?;
    Ok(symplectic.iter().map(|&d| mode_entropy(d, alpha)).sum())
}

fn check_order(alpha: f64) -> Result<()> {
    if alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("Renyi order {alpha} must be positive")))
    }
}

fn mode_entropy(d: f64, alpha: f64) -> f64 {
    if d <= 1.0 {
        return 0.0;
    }
    let (up, down) = ((d + 1.0) / 2.0, (d - 1.0) / 2.0);
    if alpha == 1.0 {
        up * up.log2() - down * down.log2()
    } else if alpha.is_infinite() {
        up.log2()
    } else {
        // tr ρ^α = 1 / (up^α − down^α)
        let log_tr = -(up.powf(alpha) - down.powf(alpha)).log2();
        log_tr / (1.0 - alpha)
    }
}

pub fn entropy(state: &GaussianBosonicState, region: &Region, alpha: f64) -> Result<f64> {
    check_order(alpha)?;
    let d = symplectic_spectrum(state, region)?;
    gaussian_entropy(&d, alpha)
}

/// Logarithmic negativity `E_N = ½ Σ_k log₂ max{1, λ_k(Γ_p^{-1}FΓ_x^{-1}F)}`
/// with `F = diag(±1)`, `-1` on the region.
///
/// The eigenvalues are the inverse squares of the symplectic eigenvalues of
/// the partially time-reversed covariance `Γ_x ⊕ FΓ_pF`, which is how they
/// are computed: `λ_k⁻¹ = eig(Γ_x^{1/2} FΓ_pF Γ_x^{1/2})`.
pub fn log_negativity(state: &GaussianBosonicState, region: &Region) -> Result<f64> {
    state.check(region)?;
    let n = state.mode_count();
    let mut flipped = state.gamma_p.matrix().clone();
    for i in region.iter() {
        flipped.row_mut(i).neg_mut();
        flipped.column_mut(i).neg_mut();
    }
    let gx_half = mat_power(&state.gamma_x, 0.5, 0.0).map_err(|e| Error::Conditioning(e.to_string()))?;
    let prod = SymmetricMatrix::symmetrized(gx_half.matrix() * flipped * gx_half.matrix());
    let eig = eig_sym(&prod)?;
    let mut en = 0.0;
    for k in 0..n {
        let inv = eig.values[k];
        if inv <= 0.0 {
            return Err(Error::Conditioning(format!("non-positive eigenvalue {inv:e} in negativity spectrum")));
        }
        if inv < 1.0 {
            en += -0.5 * inv.log2();
        }
    }
    Ok(en)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfChainNegativity {
    /// `¼ log₂((a+2|b|)/(a−2|b|))`.
    pub value: f64,
    /// `ΔE = (a − 2|b|)^{1/2}`.
    pub gap: f64,
    /// `½ log₂(‖X‖^{1/2}/ΔE)`, equal to `value`.
    pub norm_form: f64,
}

/// Closed-form negativity of the symmetrically bisected periodic chain with
/// `X = circ(a, b, 0, …, 0, b)`, `P = 1`.
pub fn half_chain_negativity_closed_form(a: f64, b: f64) -> Result<HalfChainNegativity> {
    let low = a - 2.0 * b.abs();
    if low <= 0.0 {
        return Err(Error::Critical { eigenvalue: low });
    }
    let high = a + 2.0 * b.abs();
    let gap = low.sqrt();
    Ok(HalfChainNegativity { value: 0.25 * (high / low).log2(), gap, norm_form: 0.5 * (high.sqrt() / gap).log2() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaRow {
    pub side: usize,
    /// Boundary-site count `s(I)`.
    pub area: usize,
    pub cut_edges: usize,
    pub value: f64,
    /// `value / area`.
    pub ratio: f64,
}

/// Logarithmic negativity of square `side × side` blocks anchored at the
/// origin of a two-dimensional lattice.
pub fn negativity_area_scan_2d(
    model: &HarmonicModel,
    state: &GaussianBosonicState,
    sides: &[usize],
) -> Result<Vec<AreaRow>> {
    let g = model.graph();
    if g.dimension() != 2 {
        return Err(Error::Parameter("area scan needs a two-dimensional lattice".into()));
    }
    sides
        .iter()
        .map(|&side| {
            let block = g.block(&[0, 0], &[side, side])?;
            let area = g.surface_area(&block)?;
            let value = log_negativity(state, &block)?;
            Ok(AreaRow {
                side,
                area,
                cut_edges: g.cut_edges(&block)?,
                value,
                ratio: if area == 0 { 0.0 } else { value / area as f64 },
            })
        })
        .collect()
}

/// Mutual information in bits between `region` and its complement for the
/// classical Gibbs distribution of `H = ½(p² + xᵀXx)` at inverse temperature
/// `beta`, in the zero-cell-size limit.
///
/// Positions are Gaussian with covariance `Σ = (βX)^{-1}` and momenta are
/// independent of them, so `I = ½ log₂(det Σ_I det Σ_O / det Σ)`.
pub fn classical_mutual_information(model: &HarmonicModel, beta: f64, region: &Region) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::Parameter(format!("inverse temperature {beta} must be positive")));
    }
    model.graph().check(region)?;
    let n = model.mode_count();
    let outside = region.complement(n);
    if region.is_empty() || outside.is_empty() {
        return Ok(0.0);
    }
    let scaled = SymmetricMatrix::symmetrized(model.x().matrix() * beta);
    let sigma = mat_power(&scaled, -1.0, 0.0).map_err(|e| Error::Conditioning(e.to_string()))?;
    let ld = |m: &DMatrix<f64>| -> Result<f64> {
        let (s, l) = log_det(m)?;
        if s <= 0.0 {
            return Err(Error::Conditioning("covariance block not positive definite".into()));
        }
        Ok(l)
    };
    let whole = ld(sigma.matrix())?;
    let inner = ld(&principal_submatrix(sigma.matrix(), region.as_slice()))?;
    let outer = ld(&principal_submatrix(sigma.matrix(), outside.as_slice()))?;
    Ok((0.5 * (inner + outer - whole) / std::f64::consts::LN_2).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::max_abs;

    fn gapped_chain(n: usize) -> HarmonicModel {
        HarmonicModel::chain(n, 5.0, 1.0, Boundary::Periodic).unwrap()
    }

    #[test]
    fn uncoupled_ground_state_is_a_product() {
        let g = LatticeGraph::chain(6, Boundary::Periodic).unwrap();
        let s = ground_state(&HarmonicModel::uncoupled(g).unwrap()).unwrap();
        assert!(max_abs(&(s.gamma_x.matrix() - DMatrix::identity(6, 6))) < 1e-14);
        assert!(max_abs(&(s.gamma_p.matrix() - DMatrix::identity(6, 6))) < 1e-14);
        let r = Region::interval(1, 3);
        assert_eq!(entropy(&s, &r, 1.0).unwrap(), 0.0);
        assert!(symplectic_spectrum(&s, &r).unwrap().iter().all(|&d| d == 1.0));
        assert_eq!(log_negativity(&s, &r).unwrap(), 0.0);
    }

    #[test]
    fn unit_momentum_coupling_collapses_formula() {
        let m = gapped_chain(8);
        let s = ground_state(&m).unwrap();
        let xh = mat_power(m.x(), 0.5, 0.0).unwrap();
        let xih = mat_power(m.x(), -0.5, 0.0).unwrap();
        assert!(max_abs(&(s.gamma_p.matrix() - xh.matrix())) < 1e-12);
        assert!(max_abs(&(s.gamma_x.matrix() - xih.matrix())) < 1e-12);
        let prod = s.gamma_x.matrix() * s.gamma_p.matrix();
        assert!(max_abs(&(prod - DMatrix::identity(8, 8))) < 1e-9);
    }

    #[test]
    fn pure_state_whole_lattice_is_pure() {
        let s = ground_state(&gapped_chain(12)).unwrap();
        let d = symplectic_spectrum(&s, &Region::interval(0, 12)).unwrap();
        assert!(d.iter().all(|&x| (x - 1.0).abs() < 1e-9));
    }

    #[test]
    fn entropy_formula_values() {
        assert_eq!(gaussian_entropy(&[1.0, 1.0, 1.0], 1.0).unwrap(), 0.0);
        assert!((gaussian_entropy(&[3.0], 1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(gaussian_entropy(&[3.0], 0.0).is_err());
    }

    // Two-mode squeezed vacuum: Schmidt coefficients (1-q) q^k, q = tanh² r.
    #[test]
    fn renyi_entropy_matches_two_mode_squeezed_state() {
        for &r in &[0.3f64, 0.8, 1.5] {
            let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
            let gx = DMatrix::from_row_slice(2, 2, &[c, s, s, c]);
            let gp = DMatrix::from_row_slice(2, 2, &[c, -s, -s, c]);
            let state = GaussianBosonicState {
                gamma_x: SymmetricMatrix::new(gx).unwrap(),
                gamma_p: SymmetricMatrix::new(gp).unwrap(),
                beta: None,
                near_critical: false,
            };
            let q = r.tanh().powi(2);
            let probs: Vec<f64> = (0..4000).map(|k| (1.0 - q) * q.powi(k)).collect();
            for &alpha in &[0.5, 1.0, 2.0, 4.0, f64::INFINITY] {
                let oracle = if alpha == 1.0 {
                    probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum::<f64>()
                } else if alpha.is_infinite() {
                    -probs[0].log2()
                } else {
                    probs.iter().map(|p| p.powf(alpha)).sum::<f64>().log2() / (1.0 - alpha)
                };
                let got = entropy(&state, &Region::interval(0, 1), alpha).unwrap();
                assert!((got - oracle).abs() < 1e-10, "r={r} alpha={alpha}: {got} vs {oracle}");
                let whole = entropy(&state, &Region::interval(0, 2), alpha).unwrap();
                assert!(whole.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn half_chain_negativity_matches_closed_form() {
        let exact = 0.25 * (7.0f64 / 3.0).log2();
        let cf = half_chain_negativity_closed_form(5.0, 1.0).unwrap();
        assert!((cf.value - exact).abs() < 1e-15);
        assert!((cf.norm_form - exact).abs() < 1e-14);
        assert!((cf.gap - 3f64.sqrt()).abs() < 1e-15);
        for n in [8, 16, 32] {
            let s = ground_state(&gapped_chain(n)).unwrap();
            let en = log_negativity(&s, &Region::interval(0, n / 2)).unwrap();
            assert!((en - exact).abs() < 1e-9, "n={n}: {en}");
        }
        assert_eq!(half_chain_negativity_closed_form(3.0, 0.0).unwrap().value, 0.0);
        assert!(matches!(half_chain_negativity_closed_form(2.0, 1.0), Err(Error::Critical { .. })));
    }

    #[test]
    fn negativity_bounds_entropy_for_pure_states() {
        let s = ground_state(&gapped_chain(16)).unwrap();
        for len in 1..16 {
            for start in [0, 3] {
                let r = Region::ring_interval(start, len, 16).unwrap();
                let en = log_negativity(&s, &r).unwrap();
                let se = entropy(&s, &r, 1.0).unwrap();
                assert!(en >= se - 1e-9, "len {len}: E_N {en} < S {se}");
            }
        }
        let half = Region::interval(0, 8);
        assert!(symplectic_spectrum(&s, &half).unwrap()[0] > 1.0);
    }

    #[test]
    fn klein_gordon_negativity() {
        let s = ground_state(&HarmonicModel::klein_gordon(100, 1.0).unwrap()).unwrap();
        let en = log_negativity(&s, &Region::interval(0, 50)).unwrap();
        let oracle = 0.25 * (1.0f64 + 4.0e4).log2();
        assert!((en - oracle).abs() < 1e-8, "{en} vs {oracle}");
    }

    #[test]
    fn renyi_monotone_in_order() {
        let s = ground_state(&gapped_chain(16)).unwrap();
        let r = Region::interval(0, 5);
        let vals: Vec<f64> = [0.5, 1.0, 2.0, 4.0].iter().map(|&a| entropy(&s, &r, a).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[0] >= w[1] - 1e-12), "{vals:?}");
    }

    #[test]
    fn thermal_state_limits() {
        let m = gapped_chain(16);
        let g = ground_state(&m).unwrap();
        let cold = thermal_state(&m, 1e6).unwrap();
        assert!(max_abs(&(cold.gamma_x.matrix() - g.gamma_x.matrix())) <= 1e-8);
        assert!(max_abs(&(cold.gamma_p.matrix() - g.gamma_p.matrix())) <= 1e-8);
        let half = Region::interval(0, 8);
        let warm = thermal_state(&m, 1.0).unwrap();
        assert!(entropy(&warm, &half, 1.0).unwrap() > entropy(&g, &half, 1.0).unwrap());
        let mut last = 0.0;
        for beta in [4.0, 1.0, 0.25, 0.05, 0.01] {
            let s = thermal_state(&m, beta).unwrap();
            assert!(symplectic_spectrum(&s, &half).unwrap().iter().all(|&d| d >= 1.0));
            let e = entropy(&s, &Region::interval(0, 1), 1.0).unwrap();
            assert!(e > last);
            last = e;
        }
        assert!(thermal_state(&m, 0.0).is_err());
    }

    #[test]
    fn criticality_is_reported() {
        assert!(matches!(HarmonicModel::chain(8, 2.0, 1.0, Boundary::Periodic), Err(Error::Critical { .. })));
    }

    #[test]
    fn gapped_entropy_saturates() {
        let n = 1024;
        let s = ground_state(&gapped_chain(n)).unwrap();
        let s64 = entropy(&s, &Region::interval(0, 64), 1.0).unwrap();
        let s128 = entropy(&s, &Region::interval(0, 128), 1.0).unwrap();
        assert!((s128 - s64).abs() < 1e-6, "{s64} {s128}");
    }

    #[test]
    fn classical_mutual_information_basics() {
        let g = LatticeGraph::cubic(6, 2, Boundary::Periodic).unwrap();
        let diag = HarmonicModel::uncoupled(g.clone()).unwrap();
        let block = g.block(&[0, 0], &[3, 3]).unwrap();
        assert!(classical_mutual_information(&diag, 1.0, &block).unwrap().abs() < 1e-12);
        let coupled = HarmonicModel::nearest_neighbor(g, 5.0, -1.0).unwrap();
        let i1 = classical_mutual_information(&coupled, 1.0, &block).unwrap();
        let i2 = classical_mutual_information(&coupled, 3.0, &block).unwrap();
        assert!(i1 > 0.0);
        assert!((i1 - i2).abs() < 1e-10);
    }
}
