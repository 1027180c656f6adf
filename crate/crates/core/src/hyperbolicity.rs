//! Gromov products and the fixed-base hyperbolicity constant.
//!
//! For a base point `w` the constant is
//!
//! ```text
//! delta_w = max over x, y, z of  min{(x|z)_w, (z|y)_w} - (x|y)_w
//! ```
//!
//! taken over a vertex subset. The exact search precomputes the product
//! matrix of the subset with one shortest-path sweep per subset vertex and
//! then scans pairs `x < y`, pruning a pair whenever
//! `min{d(x,w), d(y,w)} - (x|y)_w` cannot beat the best value found so far.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distance::{ball_subgraph_with_map, single_source_distances, tolerance_for, WEIGHTED_TOLERANCE};
use crate::error::{Error, Result};
use crate::generators::{even_vertex, GenConfig};
use crate::graph::{Graph, VertexId};

/// Default cap on the number of subset vertices for exact evaluation.
pub const DEFAULT_VERTEX_BUDGET: usize = 20_000;

static CLAMPED_PRODUCTS: AtomicU64 = AtomicU64::new(0);

/// Number of Gromov products clamped from a tiny negative value to zero
/// since the process started.
pub fn clamped_product_count() -> u64 {
    CLAMPED_PRODUCTS.load(Ordering::Relaxed)
}

/// `(x|y)_w = (d(x,w) + d(y,w) - d(x,y)) / 2`.
pub fn gromov_product(d_xw: f64, d_yw: f64, d_xy: f64) -> Result<f64> {
    let tol = WEIGHTED_TOLERANCE;
    let violated = d_xw < -tol
        || d_yw < -tol
        || d_xy < -tol
        || d_xy > d_xw + d_yw + tol
        || d_xw > d_yw + d_xy + tol
        || d_yw > d_xw + d_xy + tol;
    if violated {
        return Err(Error::TriangleViolation { d_xw, d_yw, d_xy });
    }
    Ok(clamp_product(raw_product(d_xw, d_yw, d_xy)))
}

#[inline]
fn raw_product(d_xw: f64, d_yw: f64, d_xy: f64) -> f64 {
    (d_xw + d_yw - d_xy) / 2.0
}

#[inline]
fn clamp_product(p: f64) -> f64 {
    if p < 0.0 {
        CLAMPED_PRODUCTS.fetch_add(1, Ordering::Relaxed);
        0.0
    } else {
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GromovValue {
    pub x: VertexId,
    pub y: VertexId,
    pub w: VertexId,
    pub value: f64,
}

pub fn gromov_value(g: &Graph, x: VertexId, y: VertexId, w: VertexId) -> Result<GromovValue> {
    let from_w = single_source_distances(g, w)?;
    let from_x = single_source_distances(g, x)?;
    g.check_vertex(y)?;
    let value = gromov_product(from_w.get(x), from_w.get(y), from_x.get(y))?;
    Ok(GromovValue { x, y, w, value })
}

/// `min{(x|z)_w, (z|y)_w} - (x|y)_w` computed from fresh distance sweeps.
pub fn evaluate_triple(g: &Graph, w: VertexId, x: VertexId, y: VertexId, z: VertexId) -> Result<f64> {
    let xz = gromov_value(g, x, z, w)?.value;
    let zy = gromov_value(g, z, y, w)?.value;
    let xy = gromov_value(g, x, y, w)?.value;
    Ok(xz.min(zy) - xy)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexFilter {
    /// Vertices on even levels.
    EvenLevels,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subset {
    pub filter: VertexFilter,
    /// Evaluate this many uniformly sampled triples instead of all of them.
    pub sample: Option<usize>,
}

impl Subset {
    pub const EVEN: Subset = Subset {
        filter: VertexFilter::EvenLevels,
        sample: None,
    };
    pub const ALL: Subset = Subset {
        filter: VertexFilter::All,
        sample: None,
    };

    pub fn select(&self, g: &Graph) -> Vec<VertexId> {
        g.vertices()
            .filter(|&v| match self.filter {
                VertexFilter::EvenLevels => g.label(v).is_even_level(),
                VertexFilter::All => true,
            })
            .collect()
    }

    pub fn describe(&self) -> String {
        let base = match self.filter {
            VertexFilter::EvenLevels => "even",
            VertexFilter::All => "all",
        };
        match self.sample {
            Some(k) => format!("{base}:sample:{k}"),
            None => base.to_string(),
        }
    }
}

impl std::str::FromStr for Subset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Subset::EVEN),
            "all" => Ok(Subset::ALL),
            _ => s
                .strip_prefix("sample:")
                .and_then(|k| k.parse().ok())
                .filter(|&k: &usize| k > 0)
                .map(|k| Subset {
                    filter: VertexFilter::EvenLevels,
                    sample: Some(k),
                })
                .ok_or_else(|| Error::InvalidConfig(format!("bad subset {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaOptions {
    pub budget: usize,
    pub seed: u64,
}

impl Default for DeltaOptions {
    fn default() -> Self {
        DeltaOptions {
            budget: DEFAULT_VERTEX_BUDGET,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub base: VertexId,
    pub subset: String,
    pub subset_size: usize,
    pub delta: f64,
    pub witness: (VertexId, VertexId, VertexId),
    pub triples_evaluated: u64,
    /// Set when triples were sampled; `delta` is then only a lower bound.
    pub lower_bound: bool,
    pub clamped_products: u64,
}

#[derive(Clone, Copy)]
struct Best {
    value: f64,
    witness: (u32, u32, u32),
}

impl Best {
    const NONE: Best = Best {
        value: 0.0,
        witness: (u32::MAX, u32::MAX, u32::MAX),
    };

    fn merge(self, other: Best) -> Best {
        match self.value.total_cmp(&other.value) {
            std::cmp::Ordering::Greater => self,
            std::cmp::Ordering::Less => other,
            std::cmp::Ordering::Equal => {
                if self.witness <= other.witness {
                    self
                } else {
                    other
                }
            }
        }
    }
}

/// Symmetric matrix of Gromov products over `subset`, row-major.
struct ProductMatrix {
    n: usize,
    products: Vec<f64>,
    clamped: u64,
}

impl ProductMatrix {
    fn build(g: &Graph, w: VertexId, subset: &[VertexId]) -> Result<ProductMatrix> {
        let n = subset.len();
        let from_w = single_source_distances(g, w)?;
        let dw: Vec<f64> = subset.iter().map(|&v| from_w.get(v)).collect();
        let rows: Vec<(Vec<f64>, u64)> = subset
            .par_iter()
            .map(|&x| {
                let field = single_source_distances(g, x).expect("subset vertex is valid");
                let dx = from_w.get(x);
                let mut clamped = 0;
                let row = subset
                    .iter()
                    .zip(&dw)
                    .map(|(&y, &dy)| {
                        let p = raw_product(dx, dy, field.get(y));
                        if p < 0.0 {
                            clamped += 1;
                            0.0
                        } else {
                            p
                        }
                    })
                    .collect();
                (row, clamped)
            })
            .collect();
        let mut products = Vec::with_capacity(n * n);
        let mut clamped = 0;
        for (row, c) in rows {
            products.extend_from_slice(&row);
            clamped += c;
        }
        CLAMPED_PRODUCTS.fetch_add(clamped, Ordering::Relaxed);
        Ok(ProductMatrix {
            n,
            products,
            clamped,
        })
    }

    #[inline]
    fn row(&self, i: usize) -> &[f64] {
        &self.products[i * self.n..(i + 1) * self.n]
    }

    fn search(&self) -> Best {
        let n = self.n;
        let global = AtomicU64::new(0f64.to_bits());
        (0..n)
            .into_par_iter()
            .fold(
                || Best::NONE,
                |mut best, x| {
                    let px = self.row(x);
                    for y in x + 1..n {
                        let py = self.row(y);
                        let pxy = px[y];
                        let bound = px[x].min(py[y]) - pxy;
                        let shared = f64::from_bits(global.load(Ordering::Relaxed));
                        if bound <= best.value || bound < shared {
                            continue;
                        }
                        let mut m = f64::NEG_INFINITY;
                        for (a, b) in px.iter().zip(py) {
                            let v = if a < b { *a } else { *b };
                            if v > m {
                                m = v;
                            }
                        }
                        let value = m - pxy;
                        if value > best.value {
                            let z = px
                                .iter()
                                .zip(py)
                                .position(|(a, b)| a.min(*b) == m)
                                .unwrap();
                            best = Best {
                                value,
                                witness: (x as u32, y as u32, z as u32),
                            };
                            global.fetch_max(value.to_bits(), Ordering::Relaxed);
                        }
                    }
                    best
                },
            )
            .reduce(|| Best::NONE, Best::merge)
    }
}

/// Exact (or sampled) hyperbolicity constant of `subset` at base `w`.
///
/// The witness is the lexicographically smallest maximizing triple of
/// vertex ids; a zero constant is witnessed by `(s, s, s)` for the smallest
/// subset vertex `s`.
pub fn delta_at_base(g: &Graph, w: VertexId, subset: &Subset, opts: &DeltaOptions) -> Result<DeltaReport> {
    g.check_vertex(w)?;
    let members = subset.select(g);
    if members.is_empty() {
        return Err(Error::EmptySubset);
    }
    if let Some(k) = subset.sample {
        return sampled_delta(g, w, subset, &members, k, opts);
    }
    if members.len() > opts.budget {
        return Err(Error::BudgetExceeded {
            required: members.len(),
            available: opts.budget,
        });
    }
    let matrix = ProductMatrix::build(g, w, &members)?;
    let best = matrix.search();
    let tol = tolerance_for(g);
    let n = members.len() as u64;
    let (delta, witness) = if best.value > tol && best.witness.0 != u32::MAX {
        let (x, y, z) = best.witness;
        (
            best.value,
            (members[x as usize], members[y as usize], members[z as usize]),
        )
    } else {
        (0.0, (members[0], members[0], members[0]))
    };
    Ok(DeltaReport {
        base: w,
        subset: subset.describe(),
        subset_size: members.len(),
        delta,
        witness,
        triples_evaluated: n * n * n,
        lower_bound: false,
        clamped_products: matrix.clamped,
    })
}

fn sampled_delta(
    g: &Graph,
    w: VertexId,
    subset: &Subset,
    members: &[VertexId],
    samples: usize,
    opts: &DeltaOptions,
) -> Result<DeltaReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let n = members.len();
    let triples: Vec<(VertexId, VertexId, VertexId)> = (0..samples)
        .map(|_| {
            (
                members[rng.gen_range(0..n)],
                members[rng.gen_range(0..n)],
                members[rng.gen_range(0..n)],
            )
        })
        .collect();
    let mut sources: Vec<VertexId> = triples.iter().flat_map(|t| [t.0, t.1]).collect();
    sources.sort();
    sources.dedup();
    let fields: Vec<_> = sources
        .par_iter()
        .map(|&s| single_source_distances(g, s).expect("valid source"))
        .collect();
    let lookup = |a: VertexId, b: VertexId| {
        let i = sources.binary_search(&a).unwrap();
        fields[i].get(b)
    };
    let from_w = single_source_distances(g, w)?;
    let best = triples
        .par_iter()
        .map(|&(x, y, z)| {
            let p = |a: VertexId, b: VertexId, d: f64| {
                clamp_product(raw_product(from_w.get(a), from_w.get(b), d))
            };
            let value = p(x, z, lookup(x, z)).min(p(z, y, lookup(y, z))) - p(x, y, lookup(x, y));
            Best {
                value,
                witness: (x.0, y.0, z.0),
            }
        })
        .reduce(|| Best::NONE, Best::merge);
    let tol = tolerance_for(g);
    let (delta, witness) = if best.value > tol && best.witness.0 != u32::MAX {
        let (x, y, z) = best.witness;
        (best.value, (VertexId(x), VertexId(y), VertexId(z)))
    } else {
        (0.0, (members[0], members[0], members[0]))
    };
    Ok(DeltaReport {
        base: w,
        subset: subset.describe(),
        subset_size: n,
        delta,
        witness,
        triples_evaluated: samples as u64,
        lower_bound: true,
        clamped_products: 0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoublingReport {
    pub first: DeltaReport,
    pub second: DeltaReport,
    /// Both `delta(w2) <= 2 delta(w) + tol` and `delta(w) <= 2 delta(w2) + tol`.
    pub holds: bool,
}

pub fn base_point_doubling_check(
    g: &Graph,
    w: VertexId,
    w2: VertexId,
    subset: &Subset,
    opts: &DeltaOptions,
) -> Result<DoublingReport> {
    let first = delta_at_base(g, w, subset, opts)?;
    let second = delta_at_base(g, w2, subset, opts)?;
    let tol = WEIGHTED_TOLERANCE;
    let holds = second.delta <= 2.0 * first.delta + tol && first.delta <= 2.0 * second.delta + tol;
    Ok(DoublingReport {
        first,
        second,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub radius: f64,
    pub vertices: usize,
    pub delta: f64,
    /// Witness as ids of the generated (unrestricted) graph.
    pub witness: (VertexId, VertexId, VertexId),
    /// The ball reached the truncation frontier.
    pub flagged: bool,
    pub lower_bound: bool,
}

/// Even-level vertex `v_{level,index}` of strip 0 used as ball center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterLabel {
    pub level: i32,
    pub index: i64,
}

impl Default for CenterLabel {
    fn default() -> Self {
        CenterLabel { level: 0, index: 1 }
    }
}

/// Hyperbolicity constants of balls around `center` for increasing radii.
pub fn delta_growth_curve(
    config: &GenConfig,
    center: CenterLabel,
    radii: &[f64],
    subset: &Subset,
    opts: &DeltaOptions,
) -> Result<Vec<CurvePoint>> {
    let g = config.generate()?;
    growth_curve_on(&g, config, center, radii, subset, opts)
}

pub fn growth_curve_on(
    g: &Graph,
    config: &GenConfig,
    center: CenterLabel,
    radii: &[f64],
    subset: &Subset,
    opts: &DeltaOptions,
) -> Result<Vec<CurvePoint>> {
    if radii.windows(2).any(|w| w[0] >= w[1]) || radii.iter().any(|r| *r < 0.0) {
        return Err(Error::InvalidConfig("radii must be non-negative and increasing".into()));
    }
    let c = even_vertex(g, center.level, center.index).ok_or_else(|| {
        Error::InvalidConfig(format!("no vertex v_({},{})", center.level, center.index))
    })?;
    radii
        .iter()
        .map(|&radius| {
            let (ball, map) = ball_subgraph_with_map(g, c, radius)?;
            let flagged = map.iter().any(|&v| config.is_frontier(g.label(v)));
            let local_center = VertexId::from(map.binary_search(&c).expect("center in ball"));
            let report = delta_at_base(&ball, local_center, subset, opts)?;
            let (x, y, z) = report.witness;
            Ok(CurvePoint {
                radius,
                vertices: ball.vertex_count(),
                delta: report.delta,
                witness: (map[x.index()], map[y.index()], map[z.index()]),
                flagged,
                lower_bound: report.lower_bound,
            })
        })
        .collect()
}

pub const CURVE_HEADER: &str = "radius,vertices,delta,witness_x,witness_y,witness_z,flagged";

pub fn curve_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from(CURVE_HEADER);
    out.push('\n');
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            p.radius, p.vertices, p.delta, p.witness.0, p.witness.1, p.witness.2, p.flagged
        )
        .unwrap();
    }
    out
}
