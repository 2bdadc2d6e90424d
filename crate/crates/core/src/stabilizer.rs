//! Stabilizer states: graph states, general tableaus, exact GF(2) entropies,
//! the toric code and the Kitaev-Preskill combination.
//!
//! A Pauli operator on `n` qubits is a row of `2n` bits `(x | z)`. Entropies
//! are in bits and are exact integers.

use std::path::Path;

use crate::error::{Error, Result};
use crate::lattice::{LatticeGraph, Region};
use crate::numerics::{gf2_rank, BitMatrix};

/// Kitaev-Preskill partition of `toric_code(3)` shipped with the crate.
pub const KP_TORUS3: &str = include_str!("../fixtures/kp_torus3.txt");
/// The same partition with the sectors rotated.
pub const KP_TORUS3_ROTATED: &str = include_str!("../fixtures/kp_torus3_rotated.txt");
/// A partition around a different vertex with rotated sectors.
pub const KP_TORUS3_SHIFTED: &str = include_str!("../fixtures/kp_torus3_shifted.txt");

#[derive(Debug, Clone)]
pub struct GraphState {
    pub graph: LatticeGraph,
}

impl GraphState {
    pub fn new(graph: LatticeGraph) -> Self {
        Self { graph }
    }

    pub fn qubit_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Generators `K_v = X_v Π_{w ~ v} Z_w`.
    pub fn tableau(&self) -> StabilizerTableau {
        let n = self.qubit_count();
        let mut g = BitMatrix::zeros(n, 2 * n);
        for v in 0..n {
            g.set(v, v, true);
            for &w in self.graph.neighbors(v) {
                g.set(v, n + w, true);
            }
        }
        StabilizerTableau { n, generators: g }
    }
}

/// Rank over GF(2) of the adjacency block between the region and its complement.
pub fn graph_state_entropy(gs: &GraphState, region: &Region) -> Result<u64> {
    gs.graph.check(region)?;
    let rest = region.complement(gs.qubit_count());
    let cut = BitMatrix::from_fn(region.len(), rest.len(), |r, c| {
        gs.graph.is_adjacent(region.as_slice()[r], rest.as_slice()[c])
    });
    Ok(gf2_rank(&cut) as u64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    generators: BitMatrix,
}

fn symplectic(g: &BitMatrix, n: usize, a: usize, b: usize) -> bool {
    (0..n).fold(false, |acc, q| acc ^ (g.get(a, q) & g.get(b, n + q)) ^ (g.get(a, n + q) & g.get(b, q)))
}

impl StabilizerTableau {
    /// `generators` is `n × 2n` in `(x | z)` layout; the rows must be
    /// independent and pairwise commuting.
    pub fn new(generators: BitMatrix) -> Result<Self> {
        let n = generators.rows();
        if generators.cols() != 2 * n || n == 0 {
            return Err(Error::InvalidTableau(format!(
                "expected n × 2n generators, got {} × {}",
                n,
                generators.cols()
            )));
        }
        if gf2_rank(&generators) != n {
            return Err(Error::InvalidTableau("generators are not independent".into()));
        }
        for a in 0..n {
            for b in a + 1..n {
                if symplectic(&generators, n, a, b) {
                    return Err(Error::InvalidTableau(format!("generators {a} and {b} anticommute")));
                }
            }
        }
        Ok(Self { n, generators })
    }

    /// `|0…0⟩`, stabilized by every `Z_q`.
    pub fn product_zero(n: usize) -> Self {
        Self { n, generators: BitMatrix::from_fn(n, 2 * n, |r, c| c == n + r) }
    }

    pub fn qubit_count(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &BitMatrix {
        &self.generators
    }

    /// `(x, z)` bit vectors of generator `k`.
    pub fn generator(&self, k: usize) -> (Vec<bool>, Vec<bool>) {
        let n = self.n;
        ((0..n).map(|q| self.generators.get(k, q)).collect(), (0..n).map(|q| self.generators.get(k, n + q)).collect())
    }

    /// Whether the Pauli operator with the given support commutes with every generator.
    pub fn commutes_with(&self, x: &[usize], z: &[usize]) -> bool {
        let n = self.n;
        (0..n).all(|k| {
            let xs = z.iter().filter(|&&q| self.generators.get(k, q)).count();
            let zs = x.iter().filter(|&&q| self.generators.get(k, n + q)).count();
            (xs + zs) % 2 == 0
        })
    }

    fn restricted_rank(&self, qubits: &[usize]) -> usize {
        let mut cols: Vec<usize> = qubits.to_vec();
        cols.extend(qubits.iter().map(|&q| q + self.n));
        gf2_rank(&self.generators.select_cols(&cols))
    }
}

/// `S(I) = rank(G|_I) − |I|`, which equals `|I|` minus the dimension of the
/// stabilizer subgroup supported inside `I`.
pub fn tableau_entropy(tab: &StabilizerTableau, region: &Region) -> Result<u64> {
    if let Some(&q) = region.as_slice().last() {
        if q >= tab.n {
            return Err(Error::InvalidRegion(format!("qubit {q} outside {} qubits", tab.n)));
        }
    }
    let r = tab.restricted_rank(region.as_slice());
    r.checked_sub(region.len())
        .map(|s| s as u64)
        .ok_or_else(|| Error::InvalidTableau("restricted rank below region size".into()))
}

/// `|I| − n + rank(G|_{L∖I})`: the same entropy computed from the complement.
pub fn tableau_entropy_from_complement(tab: &StabilizerTableau, region: &Region) -> Result<u64> {
    let rest = region.complement(tab.n);
    let r = tab.restricted_rank(rest.as_slice());
    (region.len() + r)
        .checked_sub(tab.n)
        .map(|s| s as u64)
        .ok_or_else(|| Error::InvalidTableau("inconsistent complement rank".into()))
}

/// Horizontal edge leaving vertex `(x, y)` of the `n × n` torus.
pub fn toric_h(n: usize, x: usize, y: usize) -> usize {
    2 * ((y % n) * n + x % n)
}

/// Vertical edge leaving vertex `(x, y)` of the `n × n` torus.
pub fn toric_v(n: usize, x: usize, y: usize) -> usize {
    toric_h(n, x, y) + 1
}

/// Star operators `A_s` (Z on the four edges at a vertex).
pub fn toric_stars(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(n * n);
    for y in 0..n {
        for x in 0..n {
            out.push(vec![toric_h(n, x, y), toric_h(n, x + n - 1, y), toric_v(n, x, y), toric_v(n, x, y + n - 1)]);
        }
    }
    out
}

/// Plaquette operators `B_p` (X on the four edges around a face).
pub fn toric_plaquettes(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(n * n);
    for y in 0..n {
        for x in 0..n {
            out.push(vec![toric_h(n, x, y), toric_h(n, x, y + 1), toric_v(n, x, y), toric_v(n, x + 1, y)]);
        }
    }
    out
}

/// Z on the edges crossed by the two non-contractible dual loops.
pub fn toric_logical_z(n: usize) -> [Vec<usize>; 2] {
    [(0..n).map(|x| toric_v(n, x, 0)).collect(), (0..n).map(|y| toric_h(n, 0, y)).collect()]
}

/// Ground state of `H = −Σ A_s − Σ B_p` on the `n × n` torus (`2n²` qubits)
/// with both logical Z loops fixed to +1. The last star and last plaquette
/// are products of the others and are left out.
pub fn toric_code(n: usize) -> Result<StabilizerTableau> {
    if n < 2 {
        return Err(Error::Parameter(format!("toric code needs n >= 2, got {n}")));
    }
    let q = 2 * n * n;
    let mut g = BitMatrix::zeros(q, 2 * q);
    let mut row = 0;
    for star in toric_stars(n).iter().take(n * n - 1) {
        for &e in star {
            g.set(row, q + e, true);
        }
        row += 1;
    }
    for plaq in toric_plaquettes(n).iter().take(n * n - 1) {
        for &e in plaq {
            g.set(row, e, true);
        }
        row += 1;
    }
    for logical in toric_logical_z(n) {
        for e in logical {
            g.set(row, q + e, true);
        }
        row += 1;
    }
    StabilizerTableau::new(g)
}

/// `S_A + S_B + S_C − S_AB − S_BC − S_AC + S_ABC`.
pub fn topological_entropy(tab: &StabilizerTableau, a: &Region, b: &Region, c: &Region) -> Result<i64> {
    if !a.is_disjoint(b) || !b.is_disjoint(c) || !a.is_disjoint(c) {
        return Err(Error::InvalidPartition("regions overlap".into()));
    }
    let s = |r: &Region| tableau_entropy(tab, r).map(|v| v as i64);
    let (ab, bc, ac) = (a.union(b), b.union(c), a.union(c));
    let abc = ab.union(c);
    Ok(s(a)? + s(b)? + s(c)? - s(&ab)? - s(&bc)? - s(&ac)? + s(&abc)?)
}

/// Sites within Chebyshev distance `r` of the centre of a two-dimensional
/// lattice, split into three 120° sectors starting at `offset` degrees.
pub fn square_sectors(g: &LatticeGraph, r: f64, offset: f64) -> Result<[Region; 3]> {
    if g.dimension() != 2 {
        return Err(Error::Parameter("sectors need a two-dimensional lattice".into()));
    }
    let (cx, cy) = ((g.dims()[0] as f64 - 1.0) / 2.0, (g.dims()[1] as f64 - 1.0) / 2.0);
    let mut parts = [Vec::new(), Vec::new(), Vec::new()];
    for i in 0..g.vertex_count() {
        let xy = g.coords(i);
        let (dx, dy) = (xy[0] as f64 - cx, xy[1] as f64 - cy);
        if dx.abs().max(dy.abs()) <= r {
            let angle = (dy.atan2(dx).to_degrees() - offset).rem_euclid(360.0);
            parts[((angle / 120.0) as usize).min(2)].push(i);
        }
    }
    let [a, b, c] = parts;
    Ok([Region::new(a)?, Region::new(b)?, Region::new(c)?])
}

/// Parses lines `A <sites>`, `B <sites>`, `C <sites>`; `#` starts a comment.
pub fn parse_partition(text: &str) -> Result<[Region; 3]> {
    let mut parts: [Option<Region>; 3] = [None, None, None];
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let label = words.next().unwrap_or_default();
        let slot = match label {
            "A" => 0,
            "B" => 1,
            "C" => 2,
            other => {
                return Err(Error::InvalidPartition(format!("line {}: unknown label {other:?}", lineno + 1)));
            }
        };
        if parts[slot].is_some() {
            return Err(Error::InvalidPartition(format!("line {}: region {label} repeated", lineno + 1)));
        }
        let sites = words
            .map(|w| {
                w.parse::<usize>().map_err(|_| Error::InvalidPartition(format!("line {}: bad site {w:?}", lineno + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        parts[slot] = Some(Region::new(sites)?);
    }
    let [a, b, c] = parts;
    match (a, b, c) {
        (Some(a), Some(b), Some(c)) => Ok([a, b, c]),
        _ => Err(Error::InvalidPartition("partition needs regions A, B and C".into())),
    }
}

pub fn load_partition(path: &Path) -> Result<[Region; 3]> {
    parse_partition(&std::fs::read_to_string(path)?)
}
