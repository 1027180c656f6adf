//! Immutable weighted graphs with exact vertex metadata.
//!
//! A [`Graph`] is validated once in [`Graph::assemble`] and never mutated
//! afterwards. Adjacency is stored in compressed sparse rows sorted by
//! neighbor id, which keeps every traversal order deterministic.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(u32::try_from(i).expect("vertex id exceeds u32"))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexKind {
    EvenInterior,
    OddInterior,
    BoundaryLine,
    /// Any vertex of strip `k != 0` in a stacked tessellation.
    StripCopy(i32),
}

impl VertexKind {
    pub fn code(&self) -> String {
        match self {
            VertexKind::EvenInterior => "even".to_string(),
            VertexKind::OddInterior => "odd".to_string(),
            VertexKind::BoundaryLine => "boundary".to_string(),
            VertexKind::StripCopy(k) => format!("strip{k}"),
        }
    }

    pub fn parse(code: &str) -> Option<Self> {
        match code {
            "even" => Some(VertexKind::EvenInterior),
            "odd" => Some(VertexKind::OddInterior),
            "boundary" => Some(VertexKind::BoundaryLine),
            _ => code
                .strip_prefix("strip")
                .and_then(|k| k.parse().ok())
                .map(VertexKind::StripCopy),
        }
    }
}

/// Level, in-level index, exact plane position and kind of a vertex.
///
/// Even levels use 1-based indices (`v_{2n,i}`, `i = 1..=2^n`), odd levels
/// 0-based indices whose value is the height numerator (`j / 2^{n+1}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexLabel {
    pub level: i32,
    pub index: i64,
    pub position: (Dyadic, Dyadic),
    pub kind: VertexKind,
}

impl VertexLabel {
    pub fn is_even_level(&self) -> bool {
        self.level % 2 == 0
    }

    pub fn xy(&self) -> (f64, f64) {
        (self.position.0.to_f64(), self.position.1.to_f64())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub endpoints: (VertexId, VertexId),
    pub length: f64,
}

#[derive(Debug, Clone)]
pub struct Graph {
    labels: Vec<VertexLabel>,
    edges: Vec<EdgeRecord>,
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
    lengths: Vec<f64>,
    fixed_lengths: Vec<u128>,
    fixed_exponent: i32,
    uniform_length: Option<f64>,
}

impl Graph {
    /// Validates and freezes a graph.
    ///
    /// Rejects out-of-range endpoints, self-loops, duplicate unordered pairs,
    /// non-positive lengths, coincident positions and disconnected input.
    pub fn assemble(
        labels: Vec<VertexLabel>,
        edges: impl IntoIterator<Item = (VertexId, VertexId, f64)>,
    ) -> Result<Graph> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut positions = HashMap::with_capacity(n);
        for (i, label) in labels.iter().enumerate() {
            if let Some(prev) = positions.insert(label.position, i) {
                return Err(Error::DuplicatePosition(prev.into(), i.into()));
            }
        }

        let mut records = Vec::new();
        let mut seen = HashSet::new();
        let mut degree = vec![0usize; n];
        for (u, v, length) in edges {
            for w in [u, v] {
                if w.index() >= n {
                    return Err(Error::EndpointOutOfRange {
                        endpoint: w.index(),
                        vertices: n,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !(length > 0.0 && length.is_finite()) {
                return Err(Error::NonPositiveLength(u, v, length));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge(u, v));
            }
            degree[u.index()] += 1;
            degree[v.index()] += 1;
            records.push(EdgeRecord {
                endpoints: (u, v),
                length,
            });
        }

        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut rows: Vec<Vec<(VertexId, f64)>> =
            degree.iter().map(|&d| Vec::with_capacity(d)).collect();
        for e in &records {
            let (u, v) = e.endpoints;
            rows[u.index()].push((v, e.length));
            rows[v.index()].push((u, e.length));
        }
        let mut targets = Vec::with_capacity(2 * records.len());
        let mut lengths = Vec::with_capacity(2 * records.len());
        for mut row in rows {
            row.sort_by_key(|&(t, _)| t);
            for (t, l) in row {
                targets.push(t);
                lengths.push(l);
            }
        }

        // Fixed-point copies of the lengths. Path sums over them are exact
        // integer additions, so weighted distances do not depend on the
        // direction or order in which a path is accumulated.
        let total: f64 = records.iter().map(|e| e.length).sum::<f64>().max(1.0);
        let fixed_exponent = 124 - total.log2().ceil() as i32;
        let scale = (fixed_exponent as f64).exp2();
        let fixed_lengths = lengths
            .iter()
            .map(|&l| ((l * scale).round() as u128).max(1))
            .collect();

        let uniform_length = match records.first() {
            None => None,
            Some(first) => records
                .iter()
                .all(|e| e.length == first.length)
                .then_some(first.length),
        };

        let graph = Graph {
            labels,
            edges: records,
            offsets,
            targets,
            lengths,
            fixed_lengths,
            fixed_exponent,
            uniform_length,
        };
        graph.check_connected()?;
        Ok(graph)
    }

    fn check_connected(&self) -> Result<()> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([VertexId(0)]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for (v, _) in self.neighbors(u) {
                if !seen[v.index()] {
                    seen[v.index()] = true;
                    queue.push_back(v);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(i) => Err(Error::Disconnected {
                unreachable: i.into(),
            }),
            None => Ok(()),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.labels.len()).map(VertexId::from)
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &VertexLabel {
        &self.labels[v.index()]
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v.index() + 1] - self.offsets[v.index()]
    }

    /// Neighbors of `v` with edge lengths, in increasing id order.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, f64)> + '_ {
        let range = self.offsets[v.index()]..self.offsets[v.index() + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.lengths[range].iter().copied())
    }

    /// Neighbors of `v` with fixed-point edge lengths (see [`Graph::fixed_to_length`]).
    pub(crate) fn fixed_neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, u128)> + '_ {
        let range = self.offsets[v.index()]..self.offsets[v.index() + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.fixed_lengths[range].iter().copied())
    }

    /// Converts a fixed-point path length back to a real length.
    pub(crate) fn fixed_to_length(&self, value: u128) -> f64 {
        value as f64 * (-self.fixed_exponent as f64).exp2()
    }

    pub fn edge_length(&self, u: VertexId, v: VertexId) -> Option<f64> {
        let range = self.offsets[u.index()]..self.offsets[u.index() + 1];
        let row = &self.targets[range.clone()];
        row.binary_search(&v).ok().map(|i| self.lengths[range.start + i])
    }

    /// The common edge length when every edge has the same length.
    pub fn uniform_length(&self) -> Option<f64> {
        self.uniform_length
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.index() < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertex(v))
        }
    }

    pub fn find_label(&self, pred: impl Fn(&VertexLabel) -> bool) -> Option<VertexId> {
        self.labels.iter().position(pred).map(VertexId::from)
    }

    pub fn find_position(&self, x: Dyadic, y: Dyadic) -> Option<VertexId> {
        self.find_label(|l| l.position == (x, y))
    }

    /// Map from exact position to vertex id.
    pub fn position_index(&self) -> HashMap<(Dyadic, Dyadic), VertexId> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.position, VertexId::from(i)))
            .collect()
    }

    /// Induced subgraph on `keep` (in the given order), or `None` if it is
    /// disconnected or empty. Returned ids index into `keep`.
    pub fn induced(&self, keep: &[VertexId]) -> Option<Graph> {
        let mut map = vec![u32::MAX; self.vertex_count()];
        for (i, v) in keep.iter().enumerate() {
            map[v.index()] = i as u32;
        }
        let labels = keep.iter().map(|&v| self.labels[v.index()]).collect();
        let edges = self.edges.iter().filter_map(|e| {
            let (a, b) = (map[e.endpoints.0.index()], map[e.endpoints.1.index()]);
            (a != u32::MAX && b != u32::MAX).then_some((VertexId(a), VertexId(b), e.length))
        });
        Graph::assemble(labels, edges).ok()
    }

    /// Connected components of the graph with `removed` deleted.
    pub fn components_without(&self, removed: &[VertexId]) -> usize {
        let mut dead = vec![false; self.vertex_count()];
        for v in removed {
            dead[v.index()] = true;
        }
        let mut seen = dead.clone();
        let mut count = 0;
        for start in 0..self.vertex_count() {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut stack = vec![VertexId::from(start)];
            while let Some(u) = stack.pop() {
                for (v, _) in self.neighbors(u) {
                    if !seen[v.index()] {
                        seen[v.index()] = true;
                        stack.push(v);
                    }
                }
            }
        }
        count
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn plain_label(i: i64) -> VertexLabel {
        VertexLabel {
            level: 0,
            index: i,
            position: (Dyadic::integer(i), Dyadic::ZERO),
            kind: VertexKind::EvenInterior,
        }
    }

    pub fn cycle(n: usize) -> Graph {
        let labels = (0..n as i64).map(plain_label).collect();
        let edges = (0..n).map(|i| (i.into(), ((i + 1) % n).into(), 1.0));
        Graph::assemble(labels, edges).unwrap()
    }

    #[test]
    fn path_of_two() {
        let g = Graph::assemble(
            vec![plain_label(0), plain_label(1)],
            [(VertexId(0), VertexId(1), 1.0)],
        )
        .unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.uniform_length(), Some(1.0));
        assert_eq!(g.edge_length(VertexId(1), VertexId(0)), Some(1.0));
    }

    #[test]
    fn four_cycle_degrees() {
        let g = cycle(4);
        assert!(g.vertices().all(|v| g.degree(v) == 2));
    }

    #[test]
    fn rejects_isolated_vertex() {
        let err = Graph::assemble(
            vec![plain_label(0), plain_label(1), plain_label(2)],
            [(VertexId(0), VertexId(1), 1.0)],
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::Disconnected {
                unreachable: VertexId(2)
            }
        );
    }

    #[test]
    fn rejects_bad_edges() {
        let labels = || vec![plain_label(0), plain_label(1)];
        assert_eq!(
            Graph::assemble(
                labels(),
                [(VertexId(0), VertexId(1), 1.0), (VertexId(1), VertexId(0), 2.0)]
            )
            .unwrap_err(),
            Error::DuplicateEdge(VertexId(1), VertexId(0))
        );
        assert!(matches!(
            Graph::assemble(labels(), [(VertexId(0), VertexId(1), 0.0)]).unwrap_err(),
            Error::NonPositiveLength(..)
        ));
        assert!(matches!(
            Graph::assemble(labels(), [(VertexId(0), VertexId(1), -1.0)]).unwrap_err(),
            Error::NonPositiveLength(..)
        ));
        assert_eq!(
            Graph::assemble(labels(), [(VertexId(0), VertexId(0), 1.0)]).unwrap_err(),
            Error::SelfLoop(VertexId(0))
        );
        assert!(matches!(
            Graph::assemble(labels(), [(VertexId(0), VertexId(5), 1.0)]).unwrap_err(),
            Error::EndpointOutOfRange { endpoint: 5, .. }
        ));
    }

    #[test]
    fn rejects_coincident_positions() {
        let err = Graph::assemble(
            vec![plain_label(0), plain_label(0)],
            [(VertexId(0), VertexId(1), 1.0)],
        )
        .unwrap_err();
        assert_eq!(err, Error::DuplicatePosition(VertexId(0), VertexId(1)));
    }

    #[test]
    fn kind_codes_round_trip() {
        for k in [
            VertexKind::EvenInterior,
            VertexKind::OddInterior,
            VertexKind::BoundaryLine,
            VertexKind::StripCopy(-3),
            VertexKind::StripCopy(2),
        ] {
            assert_eq!(VertexKind::parse(&k.code()), Some(k));
        }
        assert_eq!(VertexKind::parse("strip"), None);
    }
}
