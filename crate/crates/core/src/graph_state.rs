//! Graph states, two-colourings, and the Hadamard map from a bipartite graph
//! state to a G-homogeneous state.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::entanglement::{homogeneous_entropy, EntropyReport, Partition};
use crate::error::{parse_err, Error, Result};
use crate::gf2::{BitMatrix, BitRow};
use crate::spin_flip::SpinFlipGroup;
use crate::stabilizer::{PauliString, StabilizerGroup};

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// `u < v` for every stored pair.
    edges: BTreeSet<(usize, usize)>,
    neighbours: Vec<BitRow>,
}

impl Graph {
    /// Duplicate edges are merged; self-loops and out-of-range vertices are
    /// errors.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self {
            n,
            edges: BTreeSet::new(),
            neighbours: vec![BitRow::zeros(n); n],
        };
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        Self::new(n, []).expect("no edges")
    }

    fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidGraph(format!(
                "edge ({}, {}) out of range for n = {}",
                u + 1,
                v + 1,
                self.n
            )));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at vertex {}", u + 1)));
        }
        self.edges.insert((u.min(v), u.max(v)));
        self.neighbours[u].set(v, true);
        self.neighbours[v].set(u, true);
        Ok(())
    }

    /// From a symmetric 0/1 matrix with zero diagonal.
    pub fn from_adjacency(m: &BitMatrix) -> Result<Self> {
        let n = m.ncols();
        if m.nrows() != n || !m.is_binary() {
            return Err(Error::InvalidGraph("adjacency must be a square binary matrix".into()));
        }
        let mut edges = Vec::new();
        for i in 0..n {
            if m.get(i, i) != 0 {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {}", i + 1)));
            }
            for j in 0..i {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::InvalidGraph("adjacency is not symmetric".into()));
                }
                if m.get(i, j) == 1 {
                    edges.push((j, i));
                }
            }
        }
        Self::new(n, edges)
    }

    /// Star with centre vertex 0; locally equivalent to GHZ.
    pub fn star(n: usize) -> Self {
        Self::new(n, (1..n).map(|v| (0, v))).expect("valid star")
    }

    pub fn line(n: usize) -> Self {
        Self::new(n, (1..n).map(|v| (v - 1, v))).expect("valid line")
    }

    /// Cycle on `n >= 3` vertices.
    pub fn ring(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!(
                "a ring needs at least 3 vertices, got {n}"
            )));
        }
        Self::new(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    /// `rows × cols` grid, vertex `r·cols + c`.
    pub fn cluster(rows: usize, cols: usize) -> Self {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Self::new(rows * cols, edges).expect("valid grid")
    }

    /// Header `n=<int>`, then one edge `u v` per line, 1-based.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header line"))?;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| parse_err(hline, "header must be n=<int>"))?;
        let mut g = Graph::empty(n);
        for (line, body) in lines {
            let ends: Vec<usize> = body
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| parse_err(line, "edge must be two integers"))?;
            match ends[..] {
                [u, v] if u >= 1 && v >= 1 => g.add_edge(u - 1, v - 1).map_err(|e| parse_err(line, e.to_string()))?,
                _ => return Err(parse_err(line, "edge must be two 1-based vertex indices")),
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbours(&self, v: usize) -> &BitRow {
        &self.neighbours[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbours[u].get(v)
    }

    pub fn adjacency(&self) -> BitMatrix {
        BitMatrix::from_bit_rows(self.n, self.neighbours.iter().cloned()).expect("n×n")
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.component_of(0).len() == self.n
    }

    fn component_of(&self, start: usize) -> Vec<usize> {
        let mut seen = BitRow::zeros(self.n);
        let mut order = vec![start];
        seen.set(start, true);
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            for v in self.neighbours[u].iter_ones() {
                if !seen.get(v) {
                    seen.set(v, true);
                    order.push(v);
                }
            }
            i += 1;
        }
        order
    }
}

impl fmt::Display for Graph {
    /// The graph file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        for (u, v) in &self.edges {
            writeln!(f, "{} {}", u + 1, v + 1)?;
        }
        Ok(())
    }
}

/// Vertex classes `V1`, `V2` (0-based, sorted) with no edge inside either.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoColoring {
    pub v1: Vec<usize>,
    pub v2: Vec<usize>,
}

impl TwoColoring {
    /// Checks the coloring against `g`, including `|V1| ≤ |V2|`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let mut colour = vec![None; g.n];
        for (side, set) in [(0u8, &self.v1), (1u8, &self.v2)] {
            for &v in set.iter() {
                if v >= g.n || colour[v].is_some() {
                    return Err(Error::InvalidColoring(format!(
                        "vertex {} out of range or listed twice",
                        v + 1
                    )));
                }
                colour[v] = Some(side);
            }
        }
        if let Some(v) = colour.iter().position(Option::is_none) {
            return Err(Error::InvalidColoring(format!("vertex {} uncoloured", v + 1)));
        }
        if let Some((u, v)) = g.edges().find(|&(u, v)| colour[u] == colour[v]) {
            return Err(Error::InvalidColoring(format!(
                "edge ({}, {}) inside one class",
                u + 1,
                v + 1
            )));
        }
        if self.v1.len() > self.v2.len() {
            return Err(Error::InvalidColoring("|V1| must not exceed |V2|".into()));
        }
        Ok(())
    }
}

/// Generators `g_i = X_i ∏_{j∼i} Z_j`, all signs +.
pub fn graph_state_stabilizer(g: &Graph) -> StabilizerGroup {
    let gens = (0..g.n)
        .map(|i| {
            PauliString::new(BitRow::from_indices(g.n, [i]), g.neighbours[i].clone(), 0)
                .expect("X_i Z(neigh) is Hermitian")
        })
        .collect();
    StabilizerGroup::new(g.n, gens).expect("graph stabilizers commute and are independent")
}

/// Breadth-first two-colouring. Per component the smaller class goes to V1;
/// on a tie, the class holding the component's smallest vertex. `None` if
/// some component has an odd cycle.
pub fn two_coloring(g: &Graph) -> Option<TwoColoring> {
    bfs_coloring(g).ok()
}

/// As [`two_coloring`], reporting the vertex on an odd cycle.
pub fn bfs_coloring(g: &Graph) -> Result<TwoColoring> {
    let mut colour: Vec<Option<bool>> = vec![None; g.n];
    let (mut v1, mut v2) = (Vec::new(), Vec::new());
    for start in 0..g.n {
        if colour[start].is_some() {
            continue;
        }
        let mut queue = VecDeque::from([start]);
        colour[start] = Some(false);
        let (mut same, mut other) = (vec![start], Vec::new());
        while let Some(u) = queue.pop_front() {
            let cu = colour[u].expect("queued vertices are coloured");
            for v in g.neighbours[u].iter_ones() {
                match colour[v] {
                    None => {
                        colour[v] = Some(!cu);
                        if cu {
                            same.push(v)
                        } else {
                            other.push(v)
                        }
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => return Err(Error::NotBipartite(v)),
                    Some(_) => {}
                }
            }
        }
        if other.len() < same.len() {
            std::mem::swap(&mut same, &mut other);
        }
        v1.extend(same);
        v2.extend(other);
    }
    v1.sort_unstable();
    v2.sort_unstable();
    Ok(TwoColoring { v1, v2 })
}

/// Spin-flip group of the Hadamard-transformed graph state: one generator per
/// `v ∈ V1`, the indicator of `{v} ∪ neigh(v)`. Returns the group and the
/// Hadamard set `V2`.
pub fn to_ghomogeneous(g: &Graph, c: &TwoColoring) -> Result<(SpinFlipGroup, Vec<usize>)> {
    c.validate(g)?;
    if g.n == 0 {
        return Err(Error::NoSites);
    }
    let rows = c.v1.iter().map(|&v| {
        let mut r = g.neighbours[v].clone();
        r.set(v, true);
        r
    });
    let group = SpinFlipGroup::from_bit_rows(g.n, rows)?;
    debug_assert_eq!(group.k(), c.v1.len());
    Ok((group, c.v2.clone()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphEntropyReport {
    #[serde(flatten)]
    pub entropy: EntropyReport,
    /// `|V1|`, an upper bound on the entropy.
    pub v1_size: usize,
    /// `⌊n/2⌋`, which bounds `|V1|`.
    pub half_n: usize,
    pub coloring: TwoColoring,
}

/// Entropy of the graph state across `p`, through the converted group. Only
/// single-site Hadamards separate the two states, so every cut sees the
/// same entropy.
pub fn graph_entropy(g: &Graph, p: &Partition) -> Result<GraphEntropyReport> {
    let coloring = bfs_coloring(g)?;
    let (group, _) = to_ghomogeneous(g, &coloring)?;
    let entropy = homogeneous_entropy(&group, p)?;
    Ok(GraphEntropyReport {
        entropy,
        v1_size: coloring.v1.len(),
        half_n: g.n / 2,
        coloring,
    })
}
