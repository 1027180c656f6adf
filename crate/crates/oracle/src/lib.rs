//! Reference computations used to cross-check `tessgraph`.
//!
//! Deliberately independent of the library: plain adjacency lists over
//! `usize` ids, textbook BFS, binary-heap Dijkstra over `f64` and a
//! triple loop for the fixed-base hyperbolicity constant.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

#[derive(Debug, Clone)]
pub struct Adjacency {
    pub nbrs: Vec<Vec<(usize, f64)>>,
}

impl Adjacency {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut nbrs = vec![Vec::new(); n];
        for (a, b, l) in edges {
            nbrs[a].push((b, l));
            nbrs[b].push((a, l));
        }
        Adjacency { nbrs }
    }

    /// Induced on `keep` (sorted ids), renumbered by position in `keep`.
    pub fn restricted(&self, keep: &[usize]) -> Self {
        let mut local = vec![usize::MAX; self.len()];
        for (i, &v) in keep.iter().enumerate() {
            local[v] = i;
        }
        let nbrs = keep
            .iter()
            .map(|&v| {
                self.nbrs[v]
                    .iter()
                    .filter(|(w, _)| local[*w] != usize::MAX)
                    .map(|&(w, l)| (local[w], l))
                    .collect()
            })
            .collect();
        Adjacency { nbrs }
    }

    pub fn len(&self) -> usize {
        self.nbrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nbrs.is_empty()
    }

    /// Hop counts; `u32::MAX` for unreachable vertices.
    pub fn bfs(&self, s: usize) -> Vec<u32> {
        let mut d = vec![u32::MAX; self.len()];
        let mut q = VecDeque::from([s]);
        d[s] = 0;
        while let Some(v) = q.pop_front() {
            for &(w, _) in &self.nbrs[v] {
                if d[w] == u32::MAX {
                    d[w] = d[v] + 1;
                    q.push_back(w);
                }
            }
        }
        d
    }

    pub fn dijkstra(&self, s: usize) -> Vec<f64> {
        #[derive(PartialEq)]
        struct Item(f64, usize);
        impl Eq for Item {}
        impl PartialOrd for Item {
            fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
                Some(self.cmp(o))
            }
        }
        impl Ord for Item {
            fn cmp(&self, o: &Self) -> Ordering {
                o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
            }
        }
        let mut d = vec![f64::INFINITY; self.len()];
        let mut heap = BinaryHeap::from([Item(0.0, s)]);
        d[s] = 0.0;
        while let Some(Item(dv, v)) = heap.pop() {
            if dv > d[v] {
                continue;
            }
            for &(w, l) in &self.nbrs[v] {
                if dv + l < d[w] {
                    d[w] = dv + l;
                    heap.push(Item(dv + l, w));
                }
            }
        }
        d
    }

    pub fn all_pairs_hops(&self) -> Vec<Vec<f64>> {
        (0..self.len())
            .map(|s| self.bfs(s).into_iter().map(f64::from).collect())
            .collect()
    }

    pub fn all_pairs(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|s| self.dijkstra(s)).collect()
    }

    /// Ids within `radius` of `center`, ascending.
    pub fn ball(&self, center: usize, radius: f64) -> Vec<usize> {
        self.dijkstra(center)
            .iter()
            .enumerate()
            .filter(|(_, &d)| d <= radius + 1e-9)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Largest `min((x|z)_w, (z|y)_w) - (x|y)_w` over all ordered triples of
/// `subset`, at least 0.
pub fn brute_delta(dist: &[Vec<f64>], w: usize, subset: &[usize]) -> f64 {
    let p = |a: usize, b: usize| (dist[a][w] + dist[b][w] - dist[a][b]) / 2.0;
    let mut best = 0.0f64;
    for &x in subset {
        for &y in subset {
            let pxy = p(x, y);
            for &z in subset {
                best = best.max(p(x, z).min(p(z, y)) - pxy);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Adjacency {
        Adjacency::from_edges(n, (0..n).map(|i| (i, (i + 1) % n, 1.0)))
    }

    #[test]
    fn cycle_distances() {
        let c = cycle(4);
        assert_eq!(c.bfs(0), vec![0, 1, 2, 1]);
        assert_eq!(c.dijkstra(1), vec![1.0, 0.0, 1.0, 2.0]);
    }

    #[test]
    fn cycle_delta() {
        let d = cycle(4).all_pairs_hops();
        assert_eq!(brute_delta(&d, 0, &[0, 1, 2, 3]), 1.0);
    }

    #[test]
    fn path_is_zero_hyperbolic() {
        let p = Adjacency::from_edges(5, (0..4).map(|i| (i, i + 1, 2.0)));
        let d = p.all_pairs();
        for w in 0..5 {
            assert_eq!(brute_delta(&d, w, &[0, 1, 2, 3, 4]), 0.0);
        }
    }

    #[test]
    fn restriction_and_ball() {
        let c = cycle(6);
        assert_eq!(c.ball(0, 1.0), vec![0, 1, 5]);
        let r = c.restricted(&[0, 1, 5]);
        assert_eq!(r.bfs(1), vec![1, 0, 2]);
    }
}
