//! Face extraction for straight-line planar embeddings.
//!
//! Neighbors are sorted counterclockwise around every vertex; a face is
//! traced by leaving each vertex along the edge immediately clockwise of the
//! one it was entered by. Bounded faces come out counterclockwise, the
//! unbounded face clockwise (most negative signed area).

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Tolerance for the convexity test on cross products.
pub const CONVEXITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tile {
    /// Boundary cycle, counterclockwise, starting at its smallest id.
    pub vertices: Vec<VertexId>,
    pub area: f64,
    pub perimeter: f64,
    pub inradius: f64,
    pub convex: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TileSet {
    /// Bounded faces in discovery order.
    pub faces: Vec<Tile>,
    /// Number of faces including the unbounded one.
    pub total_faces: usize,
}

fn direction_cmp(a: (f64, f64), b: (f64, f64)) -> Ordering {
    let half = |(x, y): (f64, f64)| if y > 0.0 || (y == 0.0 && x > 0.0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = a.0 * b.1 - a.1 * b.0;
        0.0.partial_cmp(&cross).unwrap_or(Ordering::Equal)
    })
}

/// Signed shoelace area; positive for counterclockwise polygons.
pub fn signed_area(points: &[(f64, f64)]) -> f64 {
    let n = points.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let (a, b) = (points[i], points[(i + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum();
    twice / 2.0
}

pub fn perimeter(points: &[(f64, f64)]) -> f64 {
    let n = points.len();
    (0..n)
        .map(|i| {
            let (a, b) = (points[i], points[(i + 1) % n]);
            (b.0 - a.0).hypot(b.1 - a.1)
        })
        .sum()
}

/// Convexity of a counterclockwise polygon.
pub fn is_convex(points: &[(f64, f64)]) -> bool {
    let n = points.len();
    (0..n).all(|i| {
        let (a, b, c) = (points[i], points[(i + 1) % n], points[(i + 2) % n]);
        let cross = (b.0 - a.0) * (c.1 - b.1) - (b.1 - a.1) * (c.0 - b.0);
        cross >= -CONVEXITY_TOLERANCE
    })
}

/// Radius of the largest circle inside a convex counterclockwise polygon.
///
/// The optimum touches three edge lines, so every triple of edges is
/// solved for its equidistant point and the largest feasible radius kept.
pub fn inradius(points: &[(f64, f64)]) -> f64 {
    let n = points.len();
    // inward unit normal (nx, ny) and offset b with n.c - b = distance
    let lines: Vec<(f64, f64, f64)> = (0..n)
        .filter_map(|i| {
            let (a, b) = (points[i], points[(i + 1) % n]);
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            let len = dx.hypot(dy);
            (len > 0.0).then(|| {
                let (nx, ny) = (-dy / len, dx / len);
                (nx, ny, nx * a.0 + ny * a.1)
            })
        })
        .collect();
    let scale = points
        .iter()
        .fold(0.0f64, |m, p| m.max(p.0.abs()).max(p.1.abs()))
        .max(1.0);
    let mut best = 0.0f64;
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            for k in j + 1..lines.len() {
                // nx*cx + ny*cy - r = b for each of the three lines
                let rows = [lines[i], lines[j], lines[k]];
                let det3 = |m: [[f64; 3]; 3]| {
                    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
                };
                let a: [[f64; 3]; 3] = rows.map(|(nx, ny, _)| [nx, ny, -1.0]);
                let det = det3(a);
                if det.abs() < 1e-18 {
                    continue;
                }
                let rhs = rows.map(|(_, _, b)| b);
                let solve = |col: usize| {
                    let mut m = a;
                    for r in 0..3 {
                        m[r][col] = rhs[r];
                    }
                    det3(m) / det
                };
                let (cx, cy, r) = (solve(0), solve(1), solve(2));
                if r <= best {
                    continue;
                }
                let feasible = lines
                    .iter()
                    .all(|&(nx, ny, b)| nx * cx + ny * cy - b >= r - 1e-12 * scale);
                if feasible {
                    best = r;
                }
            }
        }
    }
    best
}

pub fn extract_tiles(g: &Graph) -> Result<TileSet> {
    let xy: Vec<(f64, f64)> = g.labels().iter().map(|l| l.xy()).collect();
    let rotation: Vec<Vec<VertexId>> = g
        .vertices()
        .map(|v| {
            let p = xy[v.index()];
            let mut nbrs: Vec<VertexId> = g.neighbors(v).map(|(w, _)| w).collect();
            nbrs.sort_by(|&a, &b| {
                let da = (xy[a.index()].0 - p.0, xy[a.index()].1 - p.1);
                let db = (xy[b.index()].0 - p.0, xy[b.index()].1 - p.1);
                direction_cmp(da, db)
            });
            nbrs
        })
        .collect();
    let mut slot: HashMap<(VertexId, VertexId), usize> = HashMap::new();
    for v in g.vertices() {
        for (i, &w) in rotation[v.index()].iter().enumerate() {
            slot.insert((v, w), i);
        }
    }

    let mut used: HashMap<(VertexId, VertexId), bool> = HashMap::with_capacity(slot.len());
    let mut raw_faces: Vec<(Vec<VertexId>, f64)> = Vec::new();
    for v in g.vertices() {
        for &w in &rotation[v.index()] {
            if used.contains_key(&(v, w)) {
                continue;
            }
            let mut cycle = Vec::new();
            let (mut a, mut b) = (v, w);
            loop {
                used.insert((a, b), true);
                cycle.push(a);
                let around = &rotation[b.index()];
                let i = slot[&(b, a)];
                let next = around[(i + around.len() - 1) % around.len()];
                (a, b) = (b, next);
                if (a, b) == (v, w) {
                    break;
                }
            }
            let pts: Vec<(f64, f64)> = cycle.iter().map(|u| xy[u.index()]).collect();
            raw_faces.push((cycle, signed_area(&pts)));
        }
    }

    let (nv, ne, nf) = (g.vertex_count(), g.edge_count(), raw_faces.len());
    if nv as i64 - ne as i64 + nf as i64 != 2 {
        return Err(Error::NonPlanarInput {
            vertices: nv,
            edges: ne,
            faces: nf,
        });
    }
    let outer = raw_faces
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .unwrap_or(0);

    let faces = raw_faces
        .into_iter()
        .enumerate()
        .filter(|&(i, _)| i != outer)
        .map(|(_, (mut cycle, area))| {
            let start = cycle
                .iter()
                .enumerate()
                .min_by_key(|(_, v)| **v)
                .map(|(i, _)| i)
                .unwrap();
            cycle.rotate_left(start);
            let pts: Vec<(f64, f64)> = cycle.iter().map(|u| xy[u.index()]).collect();
            Tile {
                area,
                perimeter: perimeter(&pts),
                inradius: inradius(&pts),
                convex: is_convex(&pts),
                vertices: cycle,
            }
        })
        .collect();
    Ok(TileSet {
        faces,
        total_faces: nf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{build_tessellation, square_grid, Mode, Variant};

    #[test]
    fn diamond_area_by_hand() {
        // corners (2n,h), (2n+1,h-g), (2n+2,h-g/2), (2n+1,h) with n = 2
        let g = 0.125;
        let h = 3.0 * g;
        let pts = [(4.0, h), (5.0, h - g), (6.0, h - g / 2.0), (5.0, h)];
        assert_eq!(signed_area(&pts), g);
        assert!(is_convex(&pts));
    }

    #[test]
    fn boundary_triangle_area() {
        let pts = [(3.0, 0.0), (5.0, 0.0), (4.0, 0.125)];
        assert_eq!(signed_area(&pts), 0.125);
        let r = inradius(&pts);
        let expect = 2.0 * 0.125 / perimeter(&pts);
        assert!((r - expect).abs() < 1e-15, "{r} vs {expect}");
    }

    #[test]
    fn square_inradius_and_convexity() {
        let sq = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        assert!((inradius(&sq) - 0.5).abs() < 1e-15);
        let rect = [(0.0, 0.0), (4.0, 0.0), (4.0, 1.0), (0.0, 1.0)];
        assert!((inradius(&rect) - 0.5).abs() < 1e-15);
        let dart = [(0.0, 0.0), (2.0, 1.0), (0.0, 2.0), (1.0, 1.0)];
        assert!(!is_convex(&dart));
    }

    #[test]
    fn grid_faces() {
        let g = square_grid(3, 2).unwrap();
        let t = extract_tiles(&g).unwrap();
        assert_eq!(t.faces.len(), 6);
        assert_eq!(t.total_faces, 7);
        for f in &t.faces {
            assert_eq!(f.area, 1.0);
            assert_eq!(f.vertices.len(), 4);
            assert!(f.convex);
        }
    }

    #[test]
    fn euler_on_generated_variants() {
        for variant in [Variant::Tessellation, Variant::TriangulationLong, Variant::TriangulationShort] {
            for strips in 0..2 {
                let g = build_tessellation(3, strips, variant, Mode::Geometric).unwrap();
                let t = extract_tiles(&g).unwrap();
                assert_eq!(
                    g.vertex_count() as i64 - g.edge_count() as i64 + t.total_faces as i64,
                    2
                );
                assert!(t.faces.iter().all(|f| f.area > 0.0 && f.convex));
                if variant != Variant::Tessellation {
                    assert!(t.faces.iter().all(|f| f.vertices.len() == 3));
                }
            }
        }
    }
}
