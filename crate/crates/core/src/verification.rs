//! Executable checks for the distance estimates of the construction.
//!
//! Each check returns a [`LemmaReport`] with a pass flag, the first
//! counterexample found (in a fixed scan order) and the empirical constants
//! observed over the tested range. Unit-mode checks compare hop counts
//! exactly; geometric checks use [`WEIGHTED_TOLERANCE`].
//!
//! Checks that depend on a truncation depth are run twice, at `N` and at
//! `N + 1` over the same parameter range; `stability` records whether the
//! two runs agree.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distance::{hop_counts, single_source_distances, WEIGHTED_TOLERANCE};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::generators::{
    build_half_period, build_period, build_tessellation, even_level_table, even_vertex, Mode,
    Variant,
};
use crate::graph::{Graph, VertexId};
use crate::hyperbolicity::{base_point_doubling_check, delta_at_base, DeltaOptions, Subset};
use crate::tiles::{extract_tiles, TileSet};

pub const DEFAULT_DEPTH: u32 = 8;
pub const DEFAULT_MARGIN: u32 = 2;
pub const DEFAULT_LEVELS_M: u32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub ranges: String,
    pub pass: bool,
    pub counterexample: Option<String>,
    pub constants: BTreeMap<String, f64>,
    /// Whether the same range gives the same result one level deeper.
    pub stability: Option<bool>,
}

impl LemmaReport {
    fn new(lemma: &str, ranges: String) -> Self {
        LemmaReport {
            lemma: lemma.to_string(),
            ranges,
            pass: true,
            counterexample: None,
            constants: BTreeMap::new(),
            stability: None,
        }
    }

    /// Records a failure; only the first counterexample is kept.
    fn fail(&mut self, what: impl FnOnce() -> String) {
        if self.pass {
            self.counterexample = Some(what());
        }
        self.pass = false;
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.fail(what);
        }
    }

    fn set(&mut self, key: &str, value: f64) {
        self.constants.insert(key.to_string(), value);
    }

    pub fn constant(&self, key: &str) -> Option<f64> {
        self.constants.get(key).copied()
    }

    fn same_outcome(&self, other: &LemmaReport) -> bool {
        self.pass == other.pass
            && self.counterexample == other.counterexample
            && self.constants == other.constants
    }

    fn with_stability(mut self, deeper: &LemmaReport) -> Self {
        let stable = self.same_outcome(deeper);
        self.stability = Some(stable);
        self
    }

    /// Key-value text block.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "[{}]", self.lemma).unwrap();
        writeln!(out, "ranges = {}", self.ranges).unwrap();
        writeln!(out, "pass = {}", self.pass).unwrap();
        let stability = match self.stability {
            Some(s) => s.to_string(),
            None => "n/a".to_string(),
        };
        writeln!(out, "stability = {stability}").unwrap();
        writeln!(
            out,
            "counterexample = {}",
            self.counterexample.as_deref().unwrap_or("none")
        )
        .unwrap();
        for (k, v) in &self.constants {
            writeln!(out, "{k} = {v}").unwrap();
        }
        out
    }
}

pub fn reports_to_json(reports: &[LemmaReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

pub fn reports_from_json(text: &str) -> Result<Vec<LemmaReport>> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })
}

/// Unit half-period truncation with its even-level id table.
struct UnitHalf {
    g: Graph,
    levels: Vec<Vec<VertexId>>,
}

impl UnitHalf {
    fn new(depth: u32) -> Result<Self> {
        let g = build_half_period(depth, Mode::Unit)?;
        let levels = even_level_table(&g);
        Ok(UnitHalf { g, levels })
    }

    /// `rows[i][t][k]`: hop distance from `v_{2*from, i+1}` to
    /// `v_{2*to[t], k+1}`.
    fn level_rows(&self, from: usize, to: &[usize]) -> Vec<Vec<Vec<u32>>> {
        self.levels[from]
            .par_iter()
            .map(|&src| {
                let hops = hop_counts(&self.g, src);
                to.iter()
                    .map(|&t| self.levels[t].iter().map(|v| hops[v.index()]).collect())
                    .collect()
            })
            .collect()
    }

    fn same_level(&self, level: usize) -> Vec<Vec<u32>> {
        self.level_rows(level, &[level])
            .into_iter()
            .map(|mut r| r.swap_remove(0))
            .collect()
    }
}

fn pow2(e: u32) -> i64 {
    1i64 << e
}

/// Upward window of `v_{2n,k}` at level `2(n+m)`:
/// `max{2^m k - 2^{m+1} + 2, 1} ..= min{2^m k + 2^m - 1, 2^{n+m}}`.
pub fn lift_window(n: u32, k: i64, m: u32) -> (i64, i64) {
    let lo = (pow2(m) * k - pow2(m + 1) + 2).max(1);
    let hi = (pow2(m) * k + pow2(m) - 1).min(pow2(n + m));
    (lo, hi)
}

fn depth_range(depth: u32, margin: u32, extra: u32) -> Result<u32> {
    depth
        .checked_sub(margin + extra)
        .filter(|&n| n >= 1)
        .ok_or_else(|| {
            Error::InvalidConfig(format!(
                "depth {depth} too small for margin {margin} and {extra} extra levels"
            ))
        })
}

fn dist_levels_at(depth: u32, n_max: u32, levels_m: u32) -> Result<LemmaReport> {
    let h = UnitHalf::new(depth)?;
    let mut rep = LemmaReport::new(
        "dist_levels",
        format!("n=1..{n_max} m=1..{levels_m}"),
    );
    let mut pairs = 0u64;
    let mut max_down = 0usize;
    for n in 1..=n_max {
        let targets: Vec<usize> = (1..=levels_m).map(|m| (n + m) as usize).collect();
        let rows = h.level_rows(n as usize, &targets);
        for m in 1..=levels_m {
            let two_m = 2 * m;
            let bound = pow2(m + 1) + pow2(m) - 2;
            rep.check(bound >= pow2(m + 1) && bound < pow2(m + 2), || {
                format!("m={m}: bound {bound} outside [2^(m+1), 2^(m+2))")
            });
            let top = pow2(n + m);
            let mut down: Vec<Vec<i64>> = vec![Vec::new(); top as usize];
            let mut up_max = 0i64;
            let mut up_min_interior = i64::MAX;
            for k in 1..=pow2(n) {
                let row = &rows[(k - 1) as usize][(m - 1) as usize];
                let (lo, hi) = lift_window(n, k, m);
                let mut count = 0i64;
                for km in 1..=top {
                    let d = row[(km - 1) as usize];
                    pairs += 1;
                    if (lo..=hi).contains(&km) {
                        rep.check(d == two_m, || {
                            format!("n={n} k={k} m={m} k_m={km}: d={d}, expected {two_m}")
                        });
                    } else {
                        rep.check(d >= two_m + 2, || {
                            format!("n={n} k={k} m={m} k_m={km}: d={d}, expected >= {}", two_m + 2)
                        });
                    }
                    if d == two_m {
                        count += 1;
                        down[(km - 1) as usize].push(k);
                    }
                }
                rep.check(count <= bound, || {
                    format!("n={n} k={k} m={m}: {count} vertices at distance {two_m}, bound {bound}")
                });
                up_max = up_max.max(count);
                if k >= 2 && k < pow2(n) {
                    rep.check(count >= pow2(m + 1), || {
                        format!("n={n} k={k} m={m}: only {count} vertices at distance {two_m}")
                    });
                    up_min_interior = up_min_interior.min(count);
                }
            }
            for (l0, ks) in down.iter().enumerate() {
                let consecutive = ks.windows(2).all(|w| w[1] == w[0] + 1);
                rep.check(ks.len() <= 3 && consecutive, || {
                    format!(
                        "n={n} m={m} l={}: reaches level {} at indices {ks:?}",
                        l0 + 1,
                        2 * n
                    )
                });
                max_down = max_down.max(ks.len());
            }
            rep.set(&format!("up_count_max_m{m}"), up_max as f64);
            if up_min_interior != i64::MAX {
                rep.set(&format!("up_count_min_interior_m{m}"), up_min_interior as f64);
            }
        }
    }
    rep.set("down_count_max", max_down as f64);
    rep.set("pairs_checked", pairs as f64);
    Ok(rep)
}

/// Exact distance window between levels `2n` and `2(n+m)` and the two
/// counting bounds on the vertices inside it.
pub fn verify_dist_levels(depth: u32, levels_m: u32, margin: u32) -> Result<LemmaReport> {
    let n_max = depth_range(depth, margin, levels_m)?;
    let base = dist_levels_at(depth, n_max, levels_m)?;
    let deeper = dist_levels_at(depth + 1, n_max, levels_m)?;
    let mut rep = base.with_stability(&deeper);
    rep.ranges = format!("depth={depth} margin={margin} {}", rep.ranges);
    Ok(rep)
}

fn log_deviation_at(depth: u32, n_max: u32) -> Result<LemmaReport> {
    let h = UnitHalf::new(depth)?;
    let mut rep = LemmaReport::new("log_deviation", format!("levels=2..{}", 2 * n_max));
    let (mut alpha, mut alpha_small, mut alpha_large) = (0.0f64, 0.0f64, 0.0f64);
    let mut pairs = 0u64;
    for n in 1..=n_max as usize {
        let dist = h.same_level(n);
        let count = dist.len();
        for i in 0..count {
            for j in i + 1..count {
                let d = dist[i][j];
                let gap = (j - i) as u64;
                pairs += 1;
                rep.check(d % 2 == 0, || {
                    format!("level {} i={} j={}: odd distance {d}", 2 * n, i + 1, j + 1)
                });
                let dev = (d as f64 - 4.0 * (gap as f64).log2()).abs();
                alpha = alpha.max(dev);
                if gap >= 4 {
                    let r = gap.ilog2() as i64;
                    let d = d as i64;
                    rep.check(4 * r - 8 < d && d <= 4 * r + 4, || {
                        format!(
                            "level {} i={} j={}: d={d} outside ({}, {}]",
                            2 * n,
                            i + 1,
                            j + 1,
                            4 * r - 8,
                            4 * r + 4
                        )
                    });
                    alpha_large = alpha_large.max(dev);
                } else {
                    rep.check(d <= 6, || {
                        format!("level {} i={} j={}: d={d} > 6", 2 * n, i + 1, j + 1)
                    });
                    alpha_small = alpha_small.max(dev);
                }
            }
        }
    }
    rep.set("alpha", alpha);
    rep.set("alpha_small_gaps", alpha_small);
    rep.set("alpha_large_gaps", alpha_large);
    rep.set("pairs_checked", pairs as f64);
    Ok(rep)
}

/// Same-level distances against `4 log2 |i - j|`.
pub fn sup_log_deviation(depth: u32, margin: u32) -> Result<LemmaReport> {
    let n_max = depth_range(depth, margin, 0)?;
    let base = log_deviation_at(depth, n_max)?;
    let deeper = log_deviation_at(depth + 1, n_max)?;
    let mut rep = base.with_stability(&deeper);
    rep.ranges = format!("depth={depth} margin={margin} {}", rep.ranges);
    Ok(rep)
}

fn product_shift_at(depth: u32, n_max: u32, levels_m: u32) -> Result<LemmaReport> {
    let h = UnitHalf::new(depth)?;
    let mut rep = LemmaReport::new(
        "product_shift",
        format!("n=1..{n_max} m=1..{levels_m}"),
    );
    let w = h.levels[0][0];
    let from_w = hop_counts(&h.g, w);
    // every v_{2r,s} is at distance 2r from v_{0,1}
    for (r, row) in h.levels.iter().enumerate().take((n_max + levels_m) as usize + 1) {
        for (s, v) in row.iter().enumerate() {
            let d = from_w[v.index()];
            rep.check(d as usize == 2 * r, || {
                format!("d(v_(0,1), v_({},{})) = {d}, expected {}", 2 * r, s + 1, 2 * r)
            });
        }
    }
    let top = (n_max + levels_m) as usize;
    let same: Vec<Vec<Vec<u32>>> = (0..=top)
        .map(|a| if a == 0 { vec![vec![0]] } else { h.same_level(a) })
        .collect();
    let product = |a: usize, i: usize, j: usize| -> f64 {
        let dw = 2.0 * a as f64;
        (dw + dw - same[a][i][j] as f64) / 2.0
    };

    let mut beta = 0.0f64;
    let mut quadruples = 0u64;
    let mut lifts_checked = 0u64;
    for n in 1..=n_max {
        let targets: Vec<usize> = (1..=levels_m).map(|m| (n + m) as usize).collect();
        let rows = h.level_rows(n as usize, &targets);
        let width = pow2(n);
        for m in 1..=levels_m {
            let upper = (n + m) as usize;
            let lifts: Vec<Vec<usize>> = (0..width as usize)
                .map(|i| {
                    rows[i][(m - 1) as usize]
                        .iter()
                        .enumerate()
                        .filter(|(_, &d)| d == 2 * m)
                        .map(|(i0, _)| i0)
                        .collect()
                })
                .collect();
            for (i, li) in lifts.iter().enumerate() {
                let k = i as i64 + 1;
                let lo = pow2(m) * k - pow2(m + 1) + 2;
                let hi = pow2(m) * k + pow2(m) - 1;
                for &i0 in li {
                    lifts_checked += 1;
                    let k0 = i0 as i64 + 1;
                    rep.check(lo <= k0 && k0 <= hi, || {
                        format!("n={n} m={m} i={k}: lift {k0} outside [{lo}, {hi}]")
                    });
                }
            }
            for i in 0..width as usize {
                for j in i..width as usize {
                    let base = product(n as usize, i, j);
                    let gap = (j - i) as i64;
                    for &i0 in &lifts[i] {
                        for &j0 in &lifts[j] {
                            quadruples += 1;
                            let lifted = product(upper, i0, j0);
                            beta = beta.max((base - lifted).abs());
                            let gap0 = (i0 as i64 - j0 as i64).abs();
                            rep.check(
                                pow2(m) * (gap - 3) < gap0 && gap0 < pow2(m) * (gap + 3),
                                || format!("n={n} m={m} (i,j)=({},{}) lifts ({},{}): index gap {gap0}", i + 1, j + 1, i0 + 1, j0 + 1),
                            );
                        }
                    }
                }
            }
        }
    }
    rep.set("beta", beta);
    rep.set("quadruples_checked", quadruples as f64);
    rep.set("lifts_checked", lifts_checked as f64);
    Ok(rep)
}

/// Gromov products at `v_{0,1}` of a pair against those of its lifts.
pub fn sup_product_shift(depth: u32, levels_m: u32, margin: u32) -> Result<LemmaReport> {
    let n_max = depth_range(depth, margin, levels_m)?;
    let base = product_shift_at(depth, n_max, levels_m)?;
    let deeper = product_shift_at(depth + 1, n_max, levels_m)?;
    let mut rep = base.with_stability(&deeper);
    rep.ranges = format!("depth={depth} margin={margin} {}", rep.ranges);
    Ok(rep)
}

fn quasi_isometry_at(depth: u32, vertex_limit: Option<usize>) -> Result<LemmaReport> {
    let unit = build_half_period(depth, Mode::Unit)?;
    let geom = build_half_period(depth, Mode::Geometric)?;
    let n = vertex_limit.unwrap_or(unit.vertex_count());
    let mut rep = LemmaReport::new("quasi_isometry", format!("vertices={n}"));
    rep.check(unit.labels() == geom.labels(), || "label maps differ".to_string());
    let alpha = 5f64.sqrt() / 2.0;
    let tol = WEIGHTED_TOLERANCE;

    let (mut min_edge, mut max_edge) = (f64::INFINITY, 0.0f64);
    for e in geom.edges() {
        let (a, b) = e.endpoints;
        if a.index() >= n || b.index() >= n {
            continue;
        }
        min_edge = min_edge.min(e.length);
        max_edge = max_edge.max(e.length);
        rep.check(e.length >= 1.0 - tol && e.length <= alpha + tol, || {
            format!("edge {a}-{b} has length {}", e.length)
        });
    }

    struct Row {
        min_ratio: f64,
        max_ratio: f64,
        failure: Option<String>,
    }
    let rows: Vec<Row> = (0..n)
        .into_par_iter()
        .map(|s| {
            let s = VertexId::from(s);
            let du = single_source_distances(&unit, s).expect("valid source");
            let dg = single_source_distances(&geom, s).expect("valid source");
            let mut row = Row {
                min_ratio: f64::INFINITY,
                max_ratio: 0.0,
                failure: None,
            };
            for t in (0..n).map(VertexId::from) {
                let (a, b) = (du.get(t), dg.get(t));
                if !(a <= b + tol && b <= alpha * a + tol) && row.failure.is_none() {
                    row.failure = Some(format!("pair ({s},{t}): d_unit={a} d_geom={b}"));
                }
                if s != t {
                    row.min_ratio = row.min_ratio.min(b / a);
                    row.max_ratio = row.max_ratio.max(b / a);
                }
            }
            row
        })
        .collect();
    let (mut min_ratio, mut max_ratio) = (f64::INFINITY, 0.0f64);
    for row in rows {
        min_ratio = min_ratio.min(row.min_ratio);
        max_ratio = max_ratio.max(row.max_ratio);
        if let Some(f) = row.failure {
            rep.fail(|| f);
        }
    }
    rep.set("qi_alpha", alpha);
    rep.set("qi_beta", 0.0);
    rep.set("qi_epsilon", 0.0);
    rep.set("min_edge_length", min_edge);
    rep.set("max_edge_length", max_edge);
    rep.set("min_distance_ratio", min_ratio);
    rep.set("max_distance_ratio", max_ratio);
    Ok(rep)
}

/// Label-preserving map from the unit to the geometric half-period graph
/// as a `(sqrt(5)/2, 0)` quasi-isometry.
pub fn verify_quasi_isometry(depth: u32) -> Result<LemmaReport> {
    let base = quasi_isometry_at(depth, None)?;
    let n = build_half_period(depth, Mode::Unit)?.vertex_count();
    let deeper = quasi_isometry_at(depth + 1, Some(n))?;
    let mut rep = base.with_stability(&deeper);
    rep.ranges = format!("depth={depth} {}", rep.ranges);
    Ok(rep)
}

/// Hyperbolicity constant at the cut vertex `v_{0,1}` of the two-sided
/// interior graph against the constants of its two halves.
pub fn verify_t_decomposition(depth: u32, subset: &Subset, opts: &DeltaOptions) -> Result<LemmaReport> {
    let g = build_period(depth, false, Mode::Unit)?;
    let w = even_vertex(&g, 0, 1).expect("v_(0,1) exists");
    let mut rep = LemmaReport::new(
        "t_decomposition",
        format!("depth={depth} subset={}", subset.describe()),
    );
    rep.check(g.components_without(&[w]) == 2, || {
        "v_(0,1) is not a cut vertex".to_string()
    });
    let whole = delta_at_base(&g, w, subset, opts)?;
    let mut parts = Vec::new();
    for right in [true, false] {
        let keep: Vec<VertexId> = g
            .vertices()
            .filter(|&v| if right { g.label(v).level >= 0 } else { g.label(v).level <= 0 })
            .collect();
        let half = g.induced(&keep).expect("each side is connected");
        let hw = VertexId::from(keep.binary_search(&w).unwrap());
        parts.push(delta_at_base(&half, hw, subset, opts)?.delta);
    }
    let sup = parts[0].max(parts[1]);
    rep.check(whole.delta == sup, || {
        format!("delta(glued)={} but max over halves={sup}", whole.delta)
    });
    rep.set("delta_glued", whole.delta);
    rep.set("delta_right", parts[0]);
    rep.set("delta_left", parts[1]);
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingProfile {
    pub variant: Variant,
    /// `(x, d((x,0), (x,1)))` for the tested odd `x`.
    pub points: Vec<(i64, f64)>,
    pub report: LemmaReport,
}

/// Distance across one strip between `(x, 0)` and `(x, 1)` for odd `x`.
pub fn boundary_crossing_profile(variant: Variant, depth: u32, margin: u32) -> Result<CrossingProfile> {
    let g = match variant {
        Variant::Period => build_period(depth, true, Mode::Geometric)?,
        Variant::TriangulationShort => {
            build_tessellation(depth, 0, Variant::TriangulationShort, Mode::Geometric)?
        }
        other => {
            return Err(Error::InvalidConfig(format!(
                "crossing profile is defined for period and tri-short, not {other}"
            )))
        }
    };
    if depth < 2 {
        return Err(Error::InvalidConfig("crossing profile needs depth >= 2".into()));
    }
    let x_max = 2 * depth as i64 - 2 * margin as i64 - 1;
    let mut rep = LemmaReport::new(
        "crossing",
        format!("variant={variant} depth={depth} margin={margin} x=1..{x_max} odd"),
    );
    let index = g.position_index();
    let at = |x: i64, y: i64| index[&(Dyadic::integer(x), Dyadic::integer(y))];
    let mut points = Vec::new();
    let mut inf = f64::INFINITY;
    let tol = WEIGHTED_TOLERANCE;
    for x in (1..=x_max).step_by(2) {
        let mut d_pair = [0.0; 2];
        for (slot, xx) in [x, -x].into_iter().enumerate() {
            let field = single_source_distances(&g, at(xx, 0))?;
            d_pair[slot] = field.get(at(xx, 1));
        }
        inf = inf.min(d_pair[0]).min(d_pair[1]);
        rep.check(d_pair[0] == d_pair[1], || {
            format!("x={x}: mirror distances differ {d_pair:?}")
        });
        points.push((x, d_pair[0]));
    }
    match variant {
        Variant::TriangulationShort => {
            for &(x, d) in &points {
                rep.check((d - 1.0).abs() <= tol, || format!("x={x}: d={d}, expected 1"));
            }
        }
        _ => {
            for w in points.windows(2) {
                let ((x0, d0), (x1, d1)) = (w[0], w[1]);
                if x0 >= 3 {
                    rep.check(d1 > d0 + tol, || {
                        format!("d at x={x1} ({d1}) not above d at x={x0} ({d0})")
                    });
                }
            }
            for &(x, d) in &points {
                if x >= 4 {
                    rep.check(d >= x as f64 - tol, || format!("x={x}: d={d} < x"));
                }
            }
        }
    }
    rep.check(inf >= 1.0 - tol, || format!("inf of crossing distances {inf} < 1"));
    rep.set("inf_crossing", inf);
    if let Some(&(_, d)) = points.first() {
        rep.set("crossing_at_1", d);
    }
    if let Some(&(_, d)) = points.last() {
        rep.set("crossing_at_max", d);
    }
    Ok(CrossingProfile {
        variant,
        points,
        report: rep,
    })
}

pub fn crossing_csv(profiles: &[CrossingProfile]) -> String {
    let mut out = String::from("variant,x,distance\n");
    for p in profiles {
        for (x, d) in &p.points {
            writeln!(out, "{},{x},{d}", p.variant).unwrap();
        }
    }
    out
}

/// Tile convexity and the two size statistics whose boundedness would
/// force non-hyperbolicity: the minimum area must shrink to `<= 2^-N` and
/// the largest perimeter/inradius ratio must reach `2^(N-2)`.
pub fn tile_statistics(tiles: &TileSet, depth: u32) -> LemmaReport {
    let mut rep = LemmaReport::new("tiles", format!("depth={depth} tiles={}", tiles.faces.len()));
    let mut min_area = f64::INFINITY;
    let mut max_ratio = 0.0f64;
    let (mut triangles, mut quads, mut nonconvex) = (0usize, 0usize, 0usize);
    for (i, f) in tiles.faces.iter().enumerate() {
        min_area = min_area.min(f.area);
        max_ratio = max_ratio.max(f.perimeter / f.inradius);
        match f.vertices.len() {
            3 => triangles += 1,
            4 => quads += 1,
            k => rep.fail(|| format!("tile {i} has {k} sides")),
        }
        if !f.convex {
            nonconvex += 1;
            rep.fail(|| format!("tile {i} is not convex"));
        }
    }
    let area_bound = (-(depth as f64)).exp2();
    let ratio_bound = (depth as f64 - 2.0).exp2();
    rep.check(min_area <= area_bound + 1e-12, || {
        format!("min area {min_area} > 2^-{depth}")
    });
    rep.check(max_ratio >= ratio_bound, || {
        format!("max perimeter/inradius {max_ratio} < 2^{}", depth as i64 - 2)
    });
    rep.set("min_area", min_area);
    rep.set("max_perimeter_inradius_ratio", max_ratio);
    rep.set("triangles", triangles as f64);
    rep.set("quadrilaterals", quads as f64);
    rep.set("nonconvex", nonconvex as f64);
    rep
}

/// Vertical translation by one strip as an isometry of a stacked
/// tessellation, and the separation property of the line `y = 0`.
pub fn verify_periodic_shift(g: &Graph, depth: u32, strips: u32) -> LemmaReport {
    let mut rep = LemmaReport::new("periodic_shift", format!("depth={depth} strips={strips}"));
    if strips == 0 {
        rep.fail(|| "needs at least one strip on each side".to_string());
        return rep;
    }
    let index = g.position_index();
    let one = Dyadic::integer(1);
    let in_strip = |v: VertexId, k: i64| {
        let y = g.label(v).position.1;
        Dyadic::integer(k) <= y && y <= Dyadic::integer(k + 1)
    };
    let s = strips as i64;
    let (mut vertices_mapped, mut edges_mapped) = (0u64, 0u64);
    for k in -s..s {
        let members: Vec<VertexId> = g.vertices().filter(|&v| in_strip(v, k)).collect();
        let next_count = g.vertices().filter(|&v| in_strip(v, k + 1)).count();
        rep.check(members.len() == next_count, || {
            format!("strip {k} has {} vertices, strip {} has {next_count}", members.len(), k + 1)
        });
        let mut image = HashMap::new();
        for &v in &members {
            let l = g.label(v);
            match index.get(&(l.position.0, l.position.1 + one)) {
                Some(&t) => {
                    let lt = g.label(t);
                    // line vertices are the top of one strip and the bottom of the next
                    let on_line = l.position.1.is_integer();
                    rep.check(lt.level == l.level && (on_line || lt.index == l.index), || {
                        format!("vertex {v} shifts onto {t} with a different label")
                    });
                    image.insert(v, t);
                    vertices_mapped += 1;
                }
                None => rep.fail(|| format!("vertex {v} of strip {k} has no image")),
            }
        }
        let (mut here, mut there) = (0usize, 0usize);
        for e in g.edges() {
            let (a, b) = e.endpoints;
            if in_strip(a, k + 1) && in_strip(b, k + 1) {
                there += 1;
            }
            if !(in_strip(a, k) && in_strip(b, k)) {
                continue;
            }
            here += 1;
            if let (Some(&ta), Some(&tb)) = (image.get(&a), image.get(&b)) {
                match g.edge_length(ta, tb) {
                    Some(l) if l == e.length => edges_mapped += 1,
                    _ => rep.fail(|| format!("edge {a}-{b} of strip {k} has no equal image")),
                }
            }
        }
        rep.check(here == there, || {
            format!("strip {k} has {here} edges, strip {} has {there}", k + 1)
        });
    }
    let line = |y: i64| -> Vec<VertexId> {
        g.vertices()
            .filter(|&v| g.label(v).position.1 == Dyadic::integer(y))
            .collect()
    };
    let gamma: Vec<VertexId> = line(0);
    let shifted: HashSet<VertexId> = line(1).into_iter().collect();
    rep.check(!gamma.is_empty(), || "no vertices on y=0".to_string());
    rep.check(gamma.iter().all(|v| !shifted.contains(v)), || {
        "y=0 and y=1 lines share a vertex".to_string()
    });
    let components = g.components_without(&gamma);
    rep.check(components == 2, || {
        format!("removing y=0 leaves {components} components")
    });
    rep.set("vertices_mapped", vertices_mapped as f64);
    rep.set("edges_mapped", edges_mapped as f64);
    rep.set("components_without_line", components as f64);
    rep
}

/// Constants at `v_{0,1}` and at sampled even-level base points of the unit
/// half-period graph: moving the base point at most doubles the constant.
pub fn verify_base_point_doubling(depth: u32, pairs: usize, seed: u64, opts: &DeltaOptions) -> Result<LemmaReport> {
    let g = build_half_period(depth, Mode::Unit)?;
    let mut rep = LemmaReport::new(
        "base_point_doubling",
        format!("depth={depth} pairs={pairs} seed={seed}"),
    );
    let even = Subset::EVEN.select(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let root = even_vertex(&g, 0, 1).expect("v_(0,1) exists");
    let bases: Vec<(VertexId, VertexId)> = (0..pairs)
        .map(|i| {
            let a = if i == 0 { root } else { even[rng.gen_range(0..even.len())] };
            (a, even[rng.gen_range(0..even.len())])
        })
        .collect();
    let mut worst = 0.0f64;
    for (w, w2) in bases {
        let r = base_point_doubling_check(&g, w, w2, &Subset::EVEN, opts)?;
        rep.check(r.holds, || {
            format!("base {w}: {} vs base {w2}: {}", r.first.delta, r.second.delta)
        });
        if r.first.delta > 0.0 {
            worst = worst.max(r.second.delta / r.first.delta);
        }
    }
    rep.set("max_delta_ratio", worst);
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub depth: u32,
    pub levels_m: u32,
    pub margin: u32,
    pub strips: u32,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            depth: DEFAULT_DEPTH,
            levels_m: DEFAULT_LEVELS_M,
            margin: DEFAULT_MARGIN,
            strips: 1,
            seed: 0,
        }
    }
}

/// Largest depth at which the exact constants of the suite stay cheap.
const SUITE_DELTA_DEPTH: u32 = 6;

/// Runs every check at the configured depth.
pub fn run_suite(cfg: &SuiteConfig, opts: &DeltaOptions) -> Result<Vec<LemmaReport>> {
    let delta_depth = cfg.depth.min(SUITE_DELTA_DEPTH);
    let mut reports = vec![
        verify_dist_levels(cfg.depth, cfg.levels_m, cfg.margin)?,
        sup_log_deviation(cfg.depth, cfg.margin)?,
        sup_product_shift(cfg.depth, cfg.levels_m, cfg.margin)?,
        verify_quasi_isometry(cfg.depth)?,
        verify_t_decomposition(delta_depth, &Subset::EVEN, opts)?,
        verify_base_point_doubling(delta_depth.min(4), 10, cfg.seed, opts)?,
    ];
    for variant in [Variant::Period, Variant::TriangulationShort] {
        reports.push(boundary_crossing_profile(variant, cfg.depth, cfg.margin)?.report);
    }
    let w = build_tessellation(cfg.depth, cfg.strips.max(1), Variant::Tessellation, Mode::Geometric)?;
    reports.push(tile_statistics(&extract_tiles(&w)?, cfg.depth));
    reports.push(verify_periodic_shift(&w, cfg.depth, cfg.strips.max(1)));
    Ok(reports)
}

pub fn suite_header(cfg: &SuiteConfig) -> String {
    format!(
        "# depth = {}\n# levels_m = {}\n# margin = {}\n# strips = {}\n# seed = {}\n",
        cfg.depth, cfg.levels_m, cfg.margin, cfg.strips, cfg.seed
    )
}

pub fn suite_text(cfg: &SuiteConfig, reports: &[LemmaReport]) -> String {
    let mut out = suite_header(cfg);
    let all = reports.iter().all(|r| r.pass);
    writeln!(out, "# overall = {}", if all { "pass" } else { "fail" }).unwrap();
    for r in reports {
        out.push('\n');
        out.push_str(&r.to_text());
    }
    out
}
