//! Glue between generated graphs and the reference oracles.
#![allow(dead_code)]

pub use tessgraph_oracle::{brute_delta, Adjacency};

use tessgraph::{Dyadic, Graph, VertexId};

pub fn adjacency(g: &Graph) -> Adjacency {
    Adjacency::from_edges(
        g.vertex_count(),
        g.edges()
            .iter()
            .map(|e| (e.endpoints.0.index(), e.endpoints.1.index(), e.length)),
    )
}

/// Positions in `keep` of its even-level vertices.
pub fn even_subset(g: &Graph, keep: &[usize]) -> Vec<usize> {
    keep.iter()
        .enumerate()
        .filter(|(_, &v)| g.label(VertexId::from(v)).level % 2 == 0)
        .map(|(i, _)| i)
        .collect()
}

/// `table[n][i-1]` = id of `v_{2n,i}` on the non-negative side of strip 0,
/// found by its coordinates `(2n, (2i-1)/2^{n+1})`.
pub fn even_ids(g: &Graph, max_n: u32) -> Vec<Vec<usize>> {
    let index = g.position_index();
    (0..=max_n)
        .map(|n| {
            (1..=1i64 << n)
                .map(|i| index[&(Dyadic::integer(2 * n as i64), Dyadic::new(2 * i - 1, n + 1))].index())
                .collect()
        })
        .collect()
}
