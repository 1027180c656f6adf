//! Single-source shortest-path distances.
//!
//! Graphs whose edges all share one length go through a breadth-first hop
//! counter, so their distances are exact integer multiples of that length.
//! Everything else goes through Dijkstra.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::Result;
use crate::graph::{Graph, VertexId};

/// Absolute tolerance for comparisons of weighted distances.
pub const WEIGHTED_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceField {
    pub source: VertexId,
    pub dist: Vec<f64>,
}

impl DistanceField {
    #[inline]
    pub fn get(&self, v: VertexId) -> f64 {
        self.dist[v.index()]
    }
}

/// Hop counts from `source`, ignoring edge lengths.
pub fn hop_counts(g: &Graph, source: VertexId) -> Vec<u32> {
    let mut hops = vec![u32::MAX; g.vertex_count()];
    let mut queue = VecDeque::with_capacity(g.vertex_count());
    hops[source.index()] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let next = hops[u.index()] + 1;
        for (v, _) in g.neighbors(u) {
            if hops[v.index()] == u32::MAX {
                hops[v.index()] = next;
                queue.push_back(v);
            }
        }
    }
    hops
}

fn dijkstra(g: &Graph, source: VertexId) -> Vec<f64> {
    let mut dist = vec![u128::MAX; g.vertex_count()];
    let mut heap = BinaryHeap::new();
    dist[source.index()] = 0;
    heap.push(Reverse((0u128, source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u.index()] {
            continue;
        }
        for (v, len) in g.fixed_neighbors(u) {
            let cand = d + len;
            if cand < dist[v.index()] {
                dist[v.index()] = cand;
                heap.push(Reverse((cand, v)));
            }
        }
    }
    dist.into_iter().map(|d| g.fixed_to_length(d)).collect()
}

pub fn single_source_distances(g: &Graph, source: VertexId) -> Result<DistanceField> {
    g.check_vertex(source)?;
    let dist = match g.uniform_length() {
        Some(c) => hop_counts(g, source)
            .into_iter()
            .map(|h| h as f64 * c)
            .collect(),
        None => dijkstra(g, source),
    };
    Ok(DistanceField { source, dist })
}

pub fn distance(g: &Graph, u: VertexId, v: VertexId) -> Result<f64> {
    g.check_vertex(v)?;
    Ok(single_source_distances(g, u)?.get(v))
}

/// Tolerance used when comparing distances in `g`: zero for unit-length
/// graphs, [`WEIGHTED_TOLERANCE`] otherwise.
pub fn tolerance_for(g: &Graph) -> f64 {
    if g.uniform_length().is_some() {
        0.0
    } else {
        WEIGHTED_TOLERANCE
    }
}

/// Ball of `radius` around `center` as an induced subgraph, together with
/// the original id of every ball vertex. Ball vertices keep the id order of
/// the parent graph.
pub fn ball_subgraph_with_map(
    g: &Graph,
    center: VertexId,
    radius: f64,
) -> Result<(Graph, Vec<VertexId>)> {
    let field = single_source_distances(g, center)?;
    let tol = tolerance_for(g);
    let keep: Vec<VertexId> = g
        .vertices()
        .filter(|&v| field.get(v) <= radius + tol)
        .collect();
    // The ball of a shortest-path metric is connected through its own
    // geodesics, so the induced subgraph is always connected.
    let ball = g
        .induced(&keep)
        .expect("ball around a vertex is connected");
    Ok((ball, keep))
}

pub fn ball_subgraph(g: &Graph, center: VertexId, radius: f64) -> Result<Graph> {
    ball_subgraph_with_map(g, center, radius).map(|(b, _)| b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{cycle, plain_label};
    use proptest::prelude::*;

    #[test]
    fn path_of_two() {
        let g = Graph::assemble(
            vec![plain_label(0), plain_label(1)],
            [(VertexId(0), VertexId(1), 1.0)],
        )
        .unwrap();
        assert_eq!(single_source_distances(&g, VertexId(0)).unwrap().dist, vec![0.0, 1.0]);
    }

    #[test]
    fn four_cycle() {
        let g = cycle(4);
        for s in 0..4u32 {
            let f = single_source_distances(&g, VertexId(s)).unwrap();
            let expect: Vec<f64> = (0..4u32)
                .map(|t| {
                    let k = (t + 4 - s) % 4;
                    k.min(4 - k) as f64
                })
                .collect();
            assert_eq!(f.dist, expect);
        }
        assert_eq!(distance(&g, VertexId(2), VertexId(2)).unwrap(), 0.0);
    }

    #[test]
    fn invalid_source() {
        let g = cycle(4);
        assert!(single_source_distances(&g, VertexId(9)).is_err());
    }

    #[test]
    fn ball_radius_zero_and_full() {
        let g = cycle(6);
        assert_eq!(ball_subgraph(&g, VertexId(0), 0.0).unwrap().vertex_count(), 1);
        let all = ball_subgraph(&g, VertexId(0), 3.0).unwrap();
        assert_eq!(all.vertex_count(), 6);
        assert_eq!(all.edge_count(), 6);
    }

    fn weighted_graph(n: usize, extra: &[(usize, usize, u8)], base: &[u8]) -> Graph {
        let labels = (0..n as i64).map(plain_label).collect();
        let mut edges: Vec<(VertexId, VertexId, f64)> = (1..n)
            .map(|i| ((i - 1).into(), i.into(), 0.25 + base[i % base.len()] as f64))
            .collect();
        let mut seen: std::collections::HashSet<(usize, usize)> =
            (1..n).map(|i| (i - 1, i)).collect();
        for &(a, b, w) in extra {
            let (a, b) = (a % n, b % n);
            if a != b && seen.insert((a.min(b), a.max(b))) {
                edges.push((a.into(), b.into(), 0.5 + w as f64));
            }
        }
        Graph::assemble(labels, edges).unwrap()
    }

    proptest! {
        #[test]
        fn weighted_invariants(
            n in 2usize..24,
            extra in proptest::collection::vec((0usize..24, 0usize..24, 0u8..5), 0..30),
            base in proptest::collection::vec(0u8..4, 1..5),
        ) {
            let g = weighted_graph(n, &extra, &base);
            let fields: Vec<_> = g.vertices().map(|s| single_source_distances(&g, s).unwrap()).collect();
            for f in &fields {
                prop_assert_eq!(f.get(f.source), 0.0);
                for e in g.edges() {
                    let (u, v) = e.endpoints;
                    prop_assert!((f.get(u) - f.get(v)).abs() <= e.length + WEIGHTED_TOLERANCE);
                }
            }
            for u in g.vertices() {
                for v in g.vertices() {
                    prop_assert_eq!(fields[u.index()].get(v), fields[v.index()].get(u));
                }
            }
        }
    }
}
