#![allow(dead_code)]

use gstate::{BitMatrix, BitRow, Graph, Partition, SpinFlipGroup};
use num_complex::Complex64;
use rand::Rng;

pub fn random_row(rng: &mut impl Rng, n: usize) -> BitRow {
    BitRow::from_indices(n, (0..n).filter(|_| rng.random_bool(0.5)))
}

/// Uniformly random rows until the span reaches rank `k`.
pub fn random_group(rng: &mut impl Rng, n: usize, k: usize) -> SpinFlipGroup {
    assert!(k <= n);
    let mut m = BitMatrix::new(n);
    while m.rank() < k {
        m.push_bit_row(random_row(rng, n)).unwrap();
        if m.nrows() > m.rank() {
            m = m.rref().matrix;
        }
    }
    let g = SpinFlipGroup::from_generators(&m).unwrap();
    assert_eq!(g.k(), k);
    g
}

pub fn random_partition(rng: &mut impl Rng, n: usize) -> Partition {
    Partition::new(n, (0..n).filter(|_| rng.random_bool(0.5))).unwrap()
}

pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// The same group from a random invertible mix of its basis.
pub fn rebased(rng: &mut impl Rng, g: &SpinFlipGroup) -> Vec<BitRow> {
    let rows = g.basis_rows();
    let k = rows.len();
    loop {
        let mixed: Vec<BitRow> = (0..k)
            .map(|_| {
                let mut v = BitRow::zeros(g.n());
                for r in rows {
                    if rng.random_bool(0.5) {
                        v.xor_assign(r);
                    }
                }
                v
            })
            .collect();
        let check = BitMatrix::from_bit_rows(g.n(), mixed.clone()).unwrap();
        if check.rank() == k {
            return mixed;
        }
    }
}

/// Every graph on `n` labelled vertices.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e);
        Graph::new(n, edges).unwrap()
    })
}

/// Random connected bipartite graph: random colour classes, random cross
/// edges, resampled until connected.
pub fn random_connected_bipartite(rng: &mut impl Rng, n: usize) -> Graph {
    loop {
        let side: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        let density = rng.random_range(0.3..0.9);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if side[u] != side[v] && rng.random_bool(density) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(n, edges).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

/// Nontrivial bipartitions with site 1 on side A.
pub fn unordered_bipartitions(n: usize) -> impl Iterator<Item = Partition> {
    (0..1u64 << n.saturating_sub(1))
        .map(move |m| (m << 1) | 1)
        .filter(move |&m| m != (1u64 << n) - 1)
        .map(move |m| Partition::from_mask(n, m).unwrap())
}
