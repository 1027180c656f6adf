//! Finite truncations of the binary-subdivision period graph and of the
//! tessellations it generates.
//!
//! Coordinates follow a closed form: the even level `2n` holds `2^n`
//! vertices `v_{2n,i}` at height `(2i-1)/2^{n+1}`, and the odd level `2n+1`
//! holds `2^{n+1}+1` vertices `u_{2n+1,j}` at height `j/2^{n+1}`. Each
//! `v_{2n,i}` is joined to `u_{2n+1,j}` for `j in {2i-2, 2i-1, 2i}` and each
//! `u_{2n+1,j}` to `v_{2n+2,k}` for `j in {k-1, k}`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexKind, VertexLabel};
use crate::tiles::extract_tiles;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Every edge has length 1.
    Unit,
    /// Euclidean edge lengths from the plane coordinates.
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// The `x >= 0` half without boundary lines.
    HalfPeriod,
    /// Both mirrored halves glued at `v_{0,1}`, no boundary lines.
    PeriodInterior,
    /// The period graph including the boundary lines `y = 0` and `y = 1`.
    Period,
    /// `2S+1` stacked copies of the period graph.
    Tessellation,
    /// Tessellation with the long diagonal added to every quadrilateral.
    TriangulationLong,
    /// Tessellation with the short (vertical) diagonal added to every quadrilateral.
    TriangulationShort,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::HalfPeriod,
        Variant::PeriodInterior,
        Variant::Period,
        Variant::Tessellation,
        Variant::TriangulationLong,
        Variant::TriangulationShort,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Variant::HalfPeriod => "half-period",
            Variant::PeriodInterior => "period-interior",
            Variant::Period => "period",
            Variant::Tessellation => "tessellation",
            Variant::TriangulationLong => "tri-long",
            Variant::TriangulationShort => "tri-short",
        }
    }

    pub fn is_stacked(&self) -> bool {
        matches!(
            self,
            Variant::Tessellation | Variant::TriangulationLong | Variant::TriangulationShort
        )
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown variant {s:?}")))
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Unit => "unit",
            Mode::Geometric => "geometric",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(Mode::Unit),
            "geometric" => Ok(Mode::Geometric),
            _ => Err(Error::InvalidConfig(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    /// Maximum even level is `2 * depth`.
    pub depth: u32,
    /// Number of strips on each side of strip 0.
    pub strips: u32,
    pub mode: Mode,
    pub variant: Variant,
    /// Diagonal length for triangulations built in unit mode.
    pub diagonal_length: Option<f64>,
}

impl GenConfig {
    pub fn new(variant: Variant, depth: u32, mode: Mode) -> Self {
        GenConfig {
            depth,
            strips: 0,
            mode,
            variant,
            diagonal_length: None,
        }
    }

    pub fn with_strips(mut self, strips: u32) -> Self {
        self.strips = strips;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth == 0 {
            return Err(Error::InvalidConfig("depth must be at least 1".into()));
        }
        if self.depth > 24 {
            return Err(Error::InvalidConfig(format!(
                "depth {} exceeds the supported maximum of 24",
                self.depth
            )));
        }
        let triangulation = matches!(
            self.variant,
            Variant::TriangulationLong | Variant::TriangulationShort
        );
        if triangulation && self.mode == Mode::Unit {
            match self.diagonal_length {
                Some(l) if l > 0.0 && l.is_finite() => {}
                _ => {
                    return Err(Error::InvalidVariantMode {
                        variant: self.variant.name().into(),
                    })
                }
            }
        }
        Ok(())
    }

    pub fn generate(&self) -> Result<Graph> {
        self.validate()?;
        match self.variant {
            Variant::HalfPeriod => build_half_period(self.depth, self.mode),
            Variant::PeriodInterior => build_period(self.depth, false, self.mode),
            Variant::Period => build_period(self.depth, true, self.mode),
            Variant::Tessellation => {
                build_tessellation(self.depth, self.strips, Variant::Tessellation, self.mode)
            }
            Variant::TriangulationLong | Variant::TriangulationShort => {
                let w = build_tessellation(self.depth, self.strips, Variant::Tessellation, self.mode)?;
                add_diagonals(&w, self.variant, self.mode, self.diagonal_length)
            }
        }
    }

    /// Whether a vertex sits on the cut where the infinite graph was truncated.
    pub fn is_frontier(&self, label: &VertexLabel) -> bool {
        let max_level = 2 * self.depth as i32;
        if label.level.abs() == max_level {
            return true;
        }
        let (_, y) = label.position;
        let on_line = y.is_integer();
        let has_lines = self.variant == Variant::Period || self.variant.is_stacked();
        if has_lines && on_line && label.level.abs() == max_level - 1 {
            return true;
        }
        if self.variant.is_stacked() && on_line {
            let y = y.numerator();
            return y == -(self.strips as i64) || y == self.strips as i64 + 1;
        }
        false
    }
}

/// Height `(2i-1)/2^{n+1}` of `v_{2n,i}`.
pub fn even_height(n: u32, i: i64) -> Dyadic {
    Dyadic::new(2 * i - 1, n + 1)
}

/// Height `j/2^{n+1}` of `u_{2n+1,j}`.
pub fn odd_height(n: u32, j: i64) -> Dyadic {
    Dyadic::new(j, n + 1)
}

fn euclidean(a: &VertexLabel, b: &VertexLabel) -> f64 {
    let dx = (a.position.0 - b.position.0).to_f64();
    let dy = (a.position.1 - b.position.1).to_f64();
    (dx * dx + dy * dy).sqrt()
}

/// Accumulates vertices keyed by exact position, so shared vertices of
/// glued copies are created once.
#[derive(Default)]
struct Builder {
    labels: Vec<VertexLabel>,
    by_position: HashMap<(Dyadic, Dyadic), VertexId>,
    edges: Vec<(VertexId, VertexId)>,
    edge_set: HashSet<(VertexId, VertexId)>,
}

impl Builder {
    fn vertex(&mut self, label: VertexLabel) -> VertexId {
        if let Some(&id) = self.by_position.get(&label.position) {
            return id;
        }
        let id = VertexId::from(self.labels.len());
        self.labels.push(label);
        self.by_position.insert(label.position, id);
        id
    }

    fn edge(&mut self, u: VertexId, v: VertexId) {
        let key = (u.min(v), u.max(v));
        if self.edge_set.insert(key) {
            self.edges.push((u, v));
        }
    }

    fn finish(self, mode: Mode) -> Result<Graph> {
        let labels = self.labels;
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let len = match mode {
                    Mode::Unit => 1.0,
                    Mode::Geometric => euclidean(&labels[u.index()], &labels[v.index()]),
                };
                (u, v, len)
            })
            .collect();
        Graph::assemble(labels, edges)
    }

    /// Adds one half of the period graph; `side` is `1` or `-1`.
    fn half(&mut self, depth: u32, side: i32, boundary_kind: bool) {
        let mut prev_even: Vec<VertexId> = Vec::new();
        for n in 0..=depth {
            let count = 1i64 << n;
            let level = side * 2 * n as i32;
            let evens: Vec<VertexId> = (1..=count)
                .map(|i| {
                    self.vertex(VertexLabel {
                        level,
                        index: i,
                        position: (Dyadic::integer(level as i64), even_height(n, i)),
                        kind: VertexKind::EvenInterior,
                    })
                })
                .collect();
            if n > 0 {
                // odd level 2n-1 sits between prev_even and evens
                let m = n - 1;
                let top = 1i64 << n;
                let odd_level = side * (2 * m as i32 + 1);
                let odds: Vec<VertexId> = (0..=top)
                    .map(|j| {
                        let kind = if boundary_kind && (j == 0 || j == top) {
                            VertexKind::BoundaryLine
                        } else {
                            VertexKind::OddInterior
                        };
                        self.vertex(VertexLabel {
                            level: odd_level,
                            index: j,
                            position: (Dyadic::integer(odd_level as i64), odd_height(m, j)),
                            kind,
                        })
                    })
                    .collect();
                for (i0, &v) in prev_even.iter().enumerate() {
                    let i = i0 as i64 + 1;
                    for j in [2 * i - 2, 2 * i - 1, 2 * i] {
                        self.edge(v, odds[j as usize]);
                    }
                }
                for (k0, &v) in evens.iter().enumerate() {
                    let k = k0 as i64 + 1;
                    for j in [k - 1, k] {
                        self.edge(odds[j as usize], v);
                    }
                }
            }
            prev_even = evens;
        }
    }
}

fn half_builder(depth: u32, sides: &[i32], boundary_kind: bool) -> Builder {
    let mut b = Builder::default();
    for &side in sides {
        b.half(depth, side, boundary_kind);
    }
    b
}

/// Truncated `G''` (geometric) or `G''_1` (unit) up to even level `2N`.
pub fn build_half_period(depth: u32, mode: Mode) -> Result<Graph> {
    GenConfig::new(Variant::HalfPeriod, depth, mode).validate()?;
    let b = sorted(half_builder(depth, &[1], false));
    b.finish(mode)
}

/// Renumbers vertices by (|level|, side, index) so that ids grow outward.
fn sorted(b: Builder) -> Builder {
    let mut order: Vec<usize> = (0..b.labels.len()).collect();
    order.sort_by_key(|&i| {
        let l = &b.labels[i];
        (l.level.abs(), l.level < 0, l.index)
    });
    let mut new_id = vec![VertexId(0); order.len()];
    for (new, &old) in order.iter().enumerate() {
        new_id[old] = new.into();
    }
    let mut out = Builder::default();
    for &old in &order {
        out.vertex(b.labels[old]);
    }
    for &(u, v) in &b.edges {
        out.edge(new_id[u.index()], new_id[v.index()]);
    }
    out
}

fn period_builder(depth: u32, with_boundary: bool) -> Builder {
    let mut b = sorted(half_builder(depth, &[1, -1], with_boundary));
    if with_boundary {
        let top = Dyadic::integer(1);
        for y in [Dyadic::ZERO, top] {
            let mut line: Vec<(Dyadic, VertexId)> = b
                .labels
                .iter()
                .enumerate()
                .filter(|(_, l)| l.kind == VertexKind::BoundaryLine && l.position.1 == y)
                .map(|(i, l)| (l.position.0, VertexId::from(i)))
                .collect();
            line.sort();
            for w in line.windows(2) {
                b.edge(w[0].1, w[1].1);
            }
        }
    }
    b
}

/// Truncated `G'` (with boundary lines) or `G'_1` (without).
pub fn build_period(depth: u32, with_boundary: bool, mode: Mode) -> Result<Graph> {
    GenConfig::new(Variant::Period, depth, mode).validate()?;
    period_builder(depth, with_boundary).finish(mode)
}

/// Stacks strips `-S..=S` of the truncated period graph, identifying the top
/// line of each strip with the bottom line of the next one. Triangulation
/// variants then add one diagonal per quadrilateral tile.
pub fn build_tessellation(depth: u32, strips: u32, variant: Variant, mode: Mode) -> Result<Graph> {
    let cfg = GenConfig {
        depth,
        strips,
        mode,
        variant,
        diagonal_length: None,
    };
    cfg.validate()?;
    if !variant.is_stacked() {
        return Err(Error::InvalidConfig(format!(
            "{variant} is not a tessellation variant"
        )));
    }
    let base = period_builder(depth, true);
    let mut b = Builder::default();
    let s = strips as i64;
    for k in -s..=s {
        let mut ids = Vec::with_capacity(base.labels.len());
        for l in &base.labels {
            let kind = if k == 0 {
                l.kind
            } else {
                VertexKind::StripCopy(k as i32)
            };
            ids.push(b.vertex(VertexLabel {
                position: (l.position.0, l.position.1 + Dyadic::integer(k)),
                kind,
                ..*l
            }));
        }
        for &(u, v) in &base.edges {
            b.edge(ids[u.index()], ids[v.index()]);
        }
    }
    let w = b.finish(mode)?;
    match variant {
        Variant::Tessellation => Ok(w),
        _ => add_diagonals(&w, variant, mode, None),
    }
}

/// Inserts one diagonal into every quadrilateral tile of `w`: the one whose
/// endpoints are two levels apart (long) or the vertical one (short).
fn add_diagonals(
    w: &Graph,
    variant: Variant,
    mode: Mode,
    diagonal_length: Option<f64>,
) -> Result<Graph> {
    if mode == Mode::Unit && diagonal_length.is_none() {
        return Err(Error::InvalidVariantMode {
            variant: variant.name().into(),
        });
    }
    let tiles = extract_tiles(w)?;
    let mut edges: Vec<(VertexId, VertexId, f64)> = w
        .edges()
        .iter()
        .map(|e| (e.endpoints.0, e.endpoints.1, e.length))
        .collect();
    for face in tiles.faces.iter().filter(|f| f.vertices.len() == 4) {
        let c = &face.vertices;
        let pairs = [(c[0], c[2]), (c[1], c[3])];
        let vertical = |&(a, b): &(VertexId, VertexId)| {
            w.label(a).position.0 == w.label(b).position.0
        };
        let (a, b) = match variant {
            Variant::TriangulationShort => pairs.iter().find(|p| vertical(p)),
            _ => pairs.iter().find(|p| !vertical(p)),
        }
        .copied()
        .expect("every quadrilateral tile has one vertical diagonal");
        let len = match mode {
            Mode::Unit => diagonal_length.unwrap(),
            Mode::Geometric => euclidean(w.label(a), w.label(b)),
        };
        edges.push((a, b, len));
    }
    Graph::assemble(w.labels().to_vec(), edges)
}

/// `ids[n][i-1]` is the id of `v_{2n,i}` on the `x >= 0` side of strip 0.
pub fn even_level_table(g: &Graph) -> Vec<Vec<VertexId>> {
    let mut table: Vec<Vec<(i64, VertexId)>> = Vec::new();
    for v in g.vertices() {
        let l = g.label(v);
        if l.kind == VertexKind::EvenInterior && l.level >= 0 {
            let n = (l.level / 2) as usize;
            if table.len() <= n {
                table.resize_with(n + 1, Vec::new);
            }
            table[n].push((l.index, v));
        }
    }
    table
        .into_iter()
        .map(|mut row| {
            row.sort();
            row.into_iter().map(|(_, v)| v).collect()
        })
        .collect()
}

/// `v_{2n,i}` on the `x >= 0` side of strip 0.
pub fn even_vertex(g: &Graph, level: i32, index: i64) -> Option<VertexId> {
    g.find_label(|l| l.kind == VertexKind::EvenInterior && l.level == level && l.index == index)
}

/// Unit-square grid with `cols x rows` cells, used as a control input whose
/// tiles all have area 1.
pub fn square_grid(cols: u32, rows: u32) -> Result<Graph> {
    let mut b = Builder::default();
    let id = |x: u32, y: u32| VertexId::from((y * (cols + 1) + x) as usize);
    for y in 0..=rows {
        for x in 0..=cols {
            b.vertex(VertexLabel {
                level: x as i32,
                index: y as i64,
                position: (Dyadic::integer(x as i64), Dyadic::integer(y as i64)),
                kind: VertexKind::EvenInterior,
            });
        }
    }
    for y in 0..=rows {
        for x in 0..=cols {
            if x < cols {
                b.edge(id(x, y), id(x + 1, y));
            }
            if y < rows {
                b.edge(id(x, y), id(x, y + 1));
            }
        }
    }
    b.finish(Mode::Geometric)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn odd_vertex(g: &Graph, level: i32, j: i64) -> VertexId {
        g.find_label(|l| l.level == level && l.index == j && !l.is_even_level())
            .unwrap()
    }

    #[test]
    fn motif_at_depth_one() {
        let g = build_half_period(1, Mode::Unit).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 7);
        let v01 = even_vertex(&g, 0, 1).unwrap();
        let v21 = even_vertex(&g, 2, 1).unwrap();
        let v22 = even_vertex(&g, 2, 2).unwrap();
        let u = |j| odd_vertex(&g, 1, j);
        let nbrs = |v| g.neighbors(v).map(|(w, _)| w).collect::<Vec<_>>();
        let mut expect = vec![u(0), u(1), u(2)];
        expect.sort();
        assert_eq!(nbrs(v01), expect);
        assert_eq!(nbrs(v21), vec![u(0), u(1)]);
        assert_eq!(nbrs(v22), vec![u(1), u(2)]);
    }

    #[test]
    fn level_populations() {
        let g = build_half_period(5, Mode::Unit).unwrap();
        let table = even_level_table(&g);
        assert_eq!(table.len(), 6);
        for (n, row) in table.iter().enumerate() {
            assert_eq!(row.len(), 1 << n);
        }
        for n in 0..5 {
            let odd = g
                .labels()
                .iter()
                .filter(|l| l.level == 2 * n + 1)
                .count();
            assert_eq!(odd, (1 << (n + 1)) + 1);
        }
        // ids grow with level
        assert_eq!(table[0][0], VertexId(0));
    }

    #[test]
    fn geometric_edge_lengths_bounded() {
        let g = build_half_period(3, Mode::Geometric).unwrap();
        let max = 5f64.sqrt() / 2.0;
        for e in g.edges() {
            assert!(e.length >= 1.0 && e.length <= max, "{e:?}");
        }
        let v01 = even_vertex(&g, 0, 1).unwrap();
        assert!(g.neighbors(v01).all(|(_, l)| l == max || l == 1.0));
        assert!(g.neighbors(v01).any(|(_, l)| l == max));
    }

    #[test]
    fn period_cut_vertex() {
        for depth in 1..=4 {
            let g = build_period(depth, false, Mode::Unit).unwrap();
            let half = build_half_period(depth, Mode::Unit).unwrap();
            assert_eq!(g.vertex_count(), 2 * half.vertex_count() - 1);
            let v01 = even_vertex(&g, 0, 1).unwrap();
            assert_eq!(g.components_without(&[v01]), 2);
        }
    }

    #[test]
    fn period_boundary_chain() {
        let depth = 4;
        let g = build_period(depth, true, Mode::Geometric).unwrap();
        let half = build_half_period(depth, Mode::Geometric).unwrap();
        assert_eq!(g.vertex_count(), 2 * half.vertex_count() - 1);
        let line: Vec<VertexId> = g
            .vertices()
            .filter(|&v| g.label(v).kind == VertexKind::BoundaryLine && g.label(v).position.1 == Dyadic::ZERO)
            .collect();
        assert_eq!(line.len(), 2 * depth as usize);
        let mut chain = 0;
        for e in g.edges() {
            let (a, b) = e.endpoints;
            if line.contains(&a) && line.contains(&b) {
                assert_eq!(e.length, 2.0);
                chain += 1;
            }
        }
        assert_eq!(chain, line.len() - 1);
        let xs: Vec<i64> = line.iter().map(|&v| g.label(v).position.0.numerator()).collect();
        assert_eq!(xs.iter().min(), Some(&-(2 * depth as i64 - 1)));
        assert_eq!(xs.iter().max(), Some(&(2 * depth as i64 - 1)));
    }

    #[test]
    fn single_strip_is_the_period_graph() {
        let w = build_tessellation(3, 0, Variant::Tessellation, Mode::Geometric).unwrap();
        let p = build_period(3, true, Mode::Geometric).unwrap();
        assert_eq!(w.labels(), p.labels());
        assert_eq!(w.edges(), p.edges());
    }

    #[test]
    fn unit_triangulation_needs_diagonal_rule() {
        let err = build_tessellation(2, 0, Variant::TriangulationShort, Mode::Unit).unwrap_err();
        assert!(matches!(err, Error::InvalidVariantMode { .. }));
        let mut cfg = GenConfig::new(Variant::TriangulationLong, 2, Mode::Unit);
        assert!(cfg.generate().is_err());
        cfg.diagonal_length = Some(1.0);
        let g = cfg.generate().unwrap();
        assert_eq!(g.uniform_length(), Some(1.0));
    }

    #[test]
    fn short_diagonals_form_vertical_chains() {
        let depth = 4;
        let t = build_tessellation(depth, 0, Variant::TriangulationShort, Mode::Geometric).unwrap();
        for n in 0..depth {
            let x = Dyadic::integer(2 * n as i64 + 1);
            let mut total = 0.0;
            let mut count = 0;
            for e in t.edges() {
                let (a, b) = (t.label(e.endpoints.0), t.label(e.endpoints.1));
                if a.position.0 == x && b.position.0 == x {
                    total += e.length;
                    count += 1;
                }
            }
            assert_eq!(count, 1 << (n + 1));
            assert_eq!(total, 1.0);
        }
    }

    #[test]
    fn long_diagonals_span_two_levels() {
        let w = build_tessellation(3, 0, Variant::Tessellation, Mode::Geometric).unwrap();
        let t = build_tessellation(3, 0, Variant::TriangulationLong, Mode::Geometric).unwrap();
        assert!(t.edge_count() > w.edge_count());
        for e in &t.edges()[w.edge_count()..] {
            let (a, b) = (t.label(e.endpoints.0), t.label(e.endpoints.1));
            assert_eq!((a.level - b.level).abs(), 2);
        }
    }

    #[test]
    fn strips_share_lines() {
        let w = build_tessellation(3, 1, Variant::Tessellation, Mode::Geometric).unwrap();
        let p = build_period(3, true, Mode::Geometric).unwrap();
        let line = p
            .labels()
            .iter()
            .filter(|l| l.kind == VertexKind::BoundaryLine)
            .count()
            / 2;
        assert_eq!(w.vertex_count(), 3 * p.vertex_count() - 2 * line);
        assert_eq!(w.edge_count(), 3 * p.edge_count() - 2 * (line - 1));
    }

    #[test]
    fn frontier_classification() {
        let cfg = GenConfig::new(Variant::Tessellation, 2, Mode::Geometric).with_strips(1);
        let g = cfg.generate().unwrap();
        let frontier = g.labels().iter().filter(|l| cfg.is_frontier(l)).count();
        assert!(frontier > 0);
        let v01 = even_vertex(&g, 0, 1).unwrap();
        assert!(!cfg.is_frontier(g.label(v01)));
    }

    #[test]
    fn parse_names() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
        assert!("nope".parse::<Variant>().is_err());
        assert_eq!("unit".parse::<Mode>().unwrap(), Mode::Unit);
    }
}
