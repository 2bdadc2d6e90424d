//! Lattice graphs and distinguished regions.
//!
//! Vertices are flat 0-based indices. Cubic lattices use row-major
//! encoding: the last coordinate runs fastest, so on a `side × side`
//! lattice the site `(r, c)` has index `r * side + c`.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Returned by [`LatticeGraph::distance`] for pairs in different components.
pub const UNREACHABLE: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Open,
    Periodic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeGraph {
    neighbors: Vec<Vec<usize>>,
    dims: Vec<usize>,
    bc: Boundary,
}

impl LatticeGraph {
    /// Simple graph from an undirected edge list. Self-loops are rejected and
    /// repeated edges collapse.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Parameter("graph needs at least one vertex".into()));
        }
        let mut neighbors = vec![Vec::new(); vertex_count];
        for &(a, b) in edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::Parameter(format!("edge ({a},{b}) out of range")));
            }
            if a == b {
                return Err(Error::Parameter(format!("self-loop at vertex {a}")));
            }
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self { neighbors, dims: vec![vertex_count], bc: Boundary::Open })
    }

    pub fn chain(n: usize, bc: Boundary) -> Result<Self> {
        Self::cubic(n, 1, bc)
    }

    /// Hypercubic lattice with `side^dim` sites and nearest-neighbour edges.
    pub fn cubic(side: usize, dim: usize, bc: Boundary) -> Result<Self> {
        if side < 2 {
            return Err(Error::Parameter(format!("side length {side} below 2")));
        }
        if !(1..=3).contains(&dim) {
            return Err(Error::Parameter(format!("dimension {dim} not in 1..=3")));
        }
        Self::grid(&vec![side; dim], bc)
    }

    /// Rectangular grid with the given extents. An axis of extent one carries
    /// no edges.
    pub fn grid(dims: &[usize], bc: Boundary) -> Result<Self> {
        if dims.is_empty() || dims.len() > 3 || dims.contains(&0) {
            return Err(Error::Parameter(format!("invalid grid extents {dims:?}")));
        }
        let n: usize = dims.iter().product();
        let dim = dims.len();
        let mut edges = Vec::with_capacity(n * dim);
        for i in 0..n {
            let c = coords_of(i, dims);
            for d in 0..dim {
                let mut nc = c.clone();
                if c[d] + 1 < dims[d] {
                    nc[d] = c[d] + 1;
                } else if bc == Boundary::Periodic && dims[d] > 1 {
                    nc[d] = 0;
                } else {
                    continue;
                }
                edges.push((i, index_of(&nc, dims)));
            }
        }
        let mut g = Self::from_edges(n, &edges)?;
        g.dims = dims.to_vec();
        g.bc = bc;
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dimension(&self) -> usize {
        self.dims.len()
    }

    pub fn boundary_condition(&self) -> Boundary {
        self.bc
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.neighbors[i].binary_search(&j).is_ok()
    }

    /// Each undirected edge once, as `(low, high)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors.iter().enumerate().flat_map(|(i, ns)| ns.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn coords(&self, i: usize) -> Vec<usize> {
        coords_of(i, &self.dims)
    }

    pub fn index(&self, coords: &[usize]) -> usize {
        index_of(coords, &self.dims)
    }

    /// Breadth-first shortest-path length, [`UNREACHABLE`] for disconnected pairs.
    pub fn distance(&self, i: usize, j: usize) -> Result<usize> {
        let n = self.vertex_count();
        if i >= n || j >= n {
            return Err(Error::InvalidRegion(format!("vertex out of range: {i}, {j}")));
        }
        Ok(self.distances_from(i)[j])
    }

    pub fn distances_from(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![UNREACHABLE; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            for &w in &self.neighbors[v] {
                if dist[w] == UNREACHABLE {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Sites of `region` with at least one neighbour outside it.
    pub fn boundary(&self, region: &Region) -> Result<Region> {
        self.check(region)?;
        let members = region.iter().filter(|&i| self.neighbors[i].iter().any(|&j| !region.contains(j))).collect();
        Ok(Region { members })
    }

    /// Surface area `s(I)`: the number of boundary sites.
    pub fn surface_area(&self, region: &Region) -> Result<usize> {
        Ok(self.boundary(region)?.len())
    }

    /// Number of edges with exactly one endpoint in `region`.
    pub fn cut_edges(&self, region: &Region) -> Result<usize> {
        self.check(region)?;
        Ok(region.iter().map(|i| self.neighbors[i].iter().filter(|&&j| !region.contains(j)).count()).sum())
    }

    pub fn check(&self, region: &Region) -> Result<()> {
        match region.members.last() {
            Some(&last) if last >= self.vertex_count() => {
                Err(Error::InvalidRegion(format!("site {last} outside lattice of {} sites", self.vertex_count())))
            }
            _ => Ok(()),
        }
    }

    pub fn whole(&self) -> Region {
        Region { members: (0..self.vertex_count()).collect() }
    }

    /// Axis-aligned box with corner `origin` and extent `sides` (wrapping on
    /// periodic lattices).
    pub fn block(&self, origin: &[usize], sides: &[usize]) -> Result<Region> {
        let dim = self.dimension();
        if origin.len() != dim || sides.len() != dim {
            return Err(Error::Parameter("block rank does not match lattice".into()));
        }
        for d in 0..dim {
            let fits = origin[d] + sides[d] <= self.dims[d];
            let wraps = self.bc == Boundary::Periodic && sides[d] <= self.dims[d];
            if !(fits || wraps) || origin[d] >= self.dims[d] {
                return Err(Error::InvalidRegion(format!("block along axis {d} leaves the lattice")));
            }
        }
        let count: usize = sides.iter().product();
        let mut members = Vec::with_capacity(count);
        for k in 0..count {
            let offset = coords_of(k, sides);
            let c: Vec<usize> = (0..dim).map(|d| (origin[d] + offset[d]) % self.dims[d]).collect();
            members.push(index_of(&c, &self.dims));
        }
        Region::new(members)
    }
}

fn coords_of(mut i: usize, dims: &[usize]) -> Vec<usize> {
    let mut c = vec![0; dims.len()];
    for d in (0..dims.len()).rev() {
        c[d] = i % dims[d];
        i /= dims[d];
    }
    c
}

fn index_of(c: &[usize], dims: &[usize]) -> usize {
    c.iter().zip(dims).fold(0, |acc, (&x, &s)| acc * s + x)
}

/// Strictly increasing list of vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Region {
    members: Vec<usize>,
}

impl Region {
    /// Sorts the input; duplicates are an error.
    pub fn new(mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidRegion("duplicate site".into()));
        }
        Ok(Self { members })
    }

    /// Contiguous run `start..start + len`.
    pub fn interval(start: usize, len: usize) -> Self {
        Self { members: (start..start + len).collect() }
    }

    /// Contiguous run on a ring of `n` sites, wrapping past the end.
    pub fn ring_interval(start: usize, len: usize, n: usize) -> Result<Self> {
        if len > n {
            return Err(Error::InvalidRegion(format!("interval of {len} on ring of {n}")));
        }
        Self::new((0..len).map(|k| (start + k) % n).collect())
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn complement(&self, n: usize) -> Self {
        Self { members: (0..n).filter(|&i| !self.contains(i)).collect() }
    }

    pub fn union(&self, other: &Region) -> Self {
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        members.sort_unstable();
        members.dedup();
        Self { members }
    }

    pub fn is_disjoint(&self, other: &Region) -> bool {
        !self.iter().any(|i| other.contains(i))
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        self.iter().all(|i| other.contains(i))
    }
}

impl From<Region> for Vec<usize> {
    fn from(r: Region) -> Self {
        r.members
    }
}
