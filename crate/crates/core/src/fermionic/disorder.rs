use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{block_entropy, ground_state, QuadraticFermionModel};
use crate::error::{Error, Result};
use crate::lattice::{Boundary, LatticeGraph, Region};
use crate::numerics::SymmetricMatrix;

/// Number of consecutive block positions averaged per sample.
pub const BLOCK_OFFSETS: usize = 8;

/// Open chains with independent uniformly distributed couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DisorderEnsemble {
    /// `A_{i,i+1} = −J_i/2`, `J_i ~ U[low, high]`.
    RandomXx { low: f64, high: f64 },
    /// `A_ii = h_i`, `A_{i,i+1} = −J_i/2`, `B_{i,i+1} = J_i/2`.
    RandomIsing { j_low: f64, j_high: f64, h_low: f64, h_high: f64 },
}

impl DisorderEnsemble {
    fn validate(&self) -> Result<()> {
        let ranges: &[(f64, f64)] = match self {
            Self::RandomXx { low, high } => &[(*low, *high)],
            Self::RandomIsing { j_low, j_high, h_low, h_high } => &[(*j_low, *j_high), (*h_low, *h_high)],
        };
        for &(lo, hi) in ranges {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Parameter(format!("invalid coupling range [{lo}, {hi}]")));
            }
        }
        Ok(())
    }

    /// Draws one chain of `n` sites.
    pub fn sample(&self, n: usize, rng: &mut impl Rng) -> Result<QuadraticFermionModel> {
        self.validate()?;
        let graph = LatticeGraph::chain(n, Boundary::Open)?;
        let mut a = DMatrix::zeros(n, n);
        let mut b = DMatrix::zeros(n, n);
        match *self {
            Self::RandomXx { low, high } => {
                for i in 0..n - 1 {
                    let j = rng.random_range(low..=high);
                    a[(i, i + 1)] = -j / 2.0;
                    a[(i + 1, i)] = -j / 2.0;
                }
            }
            Self::RandomIsing { j_low, j_high, h_low, h_high } => {
                for i in 0..n {
                    a[(i, i)] = rng.random_range(h_low..=h_high);
                }
                for i in 0..n - 1 {
                    let j = rng.random_range(j_low..=j_high);
                    a[(i, i + 1)] = -j / 2.0;
                    a[(i + 1, i)] = -j / 2.0;
                    b[(i, i + 1)] = j / 2.0;
                    b[(i + 1, i)] = -j / 2.0;
                }
            }
        }
        QuadraticFermionModel::new(graph, SymmetricMatrix::symmetrized(a), b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisorderRow {
    pub n: usize,
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisorderReport {
    pub rows: Vec<DisorderRow>,
    pub used: usize,
    /// Samples dropped because their ground state was degenerate.
    pub skipped: usize,
}

/// Disorder-averaged block entropies on open chains of `n_sites`.
///
/// Sample `k` draws its couplings from a ChaCha stream `k` keyed by `seed`, so
/// the result does not depend on how samples are scheduled. Within a sample
/// each block entropy is averaged over [`BLOCK_OFFSETS`] consecutive positions
/// starting a quarter of the way into the chain.
pub fn disorder_average(
    ensemble: &DisorderEnsemble,
    n_sites: usize,
    block_sizes: &[usize],
    samples: usize,
    seed: u64,
) -> Result<DisorderReport> {
    if samples < 2 {
        return Err(Error::Parameter("disorder averaging needs at least two samples".into()));
    }
    ensemble.validate()?;
    let start = n_sites / 4;
    let largest = block_sizes.iter().copied().max().unwrap_or(0);
    if block_sizes.contains(&0) || start + BLOCK_OFFSETS + largest > n_sites {
        return Err(Error::InvalidRegion(format!("blocks up to {largest} sites do not fit a chain of {n_sites}")));
    }
    let per_sample: Vec<Option<Vec<f64>>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let state = ground_state(&ensemble.sample(n_sites, &mut rng)?)?;
            if state.degenerate {
                return Ok(None);
            }
            block_sizes
                .iter()
                .map(|&n| {
                    let mut total = 0.0;
                    for off in 0..BLOCK_OFFSETS {
                        total += block_entropy(&state, &Region::interval(start + off, n), 1.0)?;
                    }
                    Ok(total / BLOCK_OFFSETS as f64)
                })
                .collect::<Result<Vec<f64>>>()
                .map(Some)
        })
        .collect::<Result<_>>()?;
    let kept: Vec<&Vec<f64>> = per_sample.iter().flatten().collect();
    let used = kept.len();
    if used < 2 {
        return Err(Error::Numerical(format!("only {used} non-degenerate samples")));
    }
    let rows = block_sizes
        .iter()
        .enumerate()
        .map(|(c, &n)| {
            let m = used as f64;
            let mean = kept.iter().map(|s| s[c]).sum::<f64>() / m;
            let var = kept.iter().map(|s| (s[c] - mean).powi(2)).sum::<f64>() / (m - 1.0);
            DisorderRow { n, mean, stderr: (var / m).sqrt() }
        })
        .collect();
    Ok(DisorderReport { rows, used, skipped: samples - used })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermionic::{build_xy, XyParams};

    #[test]
    fn zero_width_is_the_clean_chain() {
        let sizes = [4, 8, 16];
        let rep = disorder_average(&DisorderEnsemble::RandomXx { low: 1.0, high: 1.0 }, 96, &sizes, 3, 1).unwrap();
        // clean open XX chain with unit hopping is the XY builder at γ=λ=0
        let clean = ground_state(&build_xy(&XyParams::new(0.0, 0.0, 96, Boundary::Open).unwrap()).unwrap()).unwrap();
        for row in &rep.rows {
            let direct: f64 = (0..BLOCK_OFFSETS)
                .map(|o| block_entropy(&clean, &Region::interval(24 + o, row.n), 1.0).unwrap())
                .sum::<f64>()
                / BLOCK_OFFSETS as f64;
            assert!((row.mean - direct).abs() < 1e-12);
            assert!(row.stderr < 1e-12);
        }
        assert_eq!((rep.used, rep.skipped), (3, 0));
    }

    #[test]
    fn deterministic_and_monotone() {
        let e = DisorderEnsemble::RandomXx { low: 0.5, high: 1.5 };
        let sizes = [2, 4, 8, 16, 32];
        let a = disorder_average(&e, 128, &sizes, 4, 99).unwrap();
        let b = disorder_average(&e, 128, &sizes, 4, 99).unwrap();
        assert_eq!(a, b);
        assert!(a.rows.windows(2).all(|w| w[1].mean >= w[0].mean));
        let c = disorder_average(&e, 128, &sizes, 4, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn random_ising_samples_are_antisymmetric() {
        let e = DisorderEnsemble::RandomIsing { j_low: 0.5, j_high: 1.5, h_low: 0.5, h_high: 1.5 };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = e.sample(20, &mut rng).unwrap();
        assert!(m.b().iter().any(|&x| x != 0.0));
        assert!(disorder_average(&e, 64, &[4, 8], 2, 5).is_ok());
        assert!(disorder_average(&e, 64, &[4], 1, 5).is_err());
        assert!(disorder_average(&DisorderEnsemble::RandomXx { low: 2.0, high: 1.0 }, 64, &[4], 2, 5).is_err());
    }
}
