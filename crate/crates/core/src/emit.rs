//! Output formats for graphs, reports, curves, tiles and crossing profiles.

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeRecord, Graph, VertexLabel};
use crate::hyperbolicity::{curve_csv, CurvePoint};
use crate::serialize::{format_length, write_graph};
use crate::tiles::TileSet;
use crate::verification::{crossing_csv, reports_to_json, CrossingProfile, LemmaReport};

/// DOT output is meant for inspection of small graphs only.
pub const DOT_VERTEX_LIMIT: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    Edgelist,
    Json,
    Dot,
    Csv,
    Report,
}

impl Format {
    pub fn name(&self) -> &'static str {
        match self {
            Format::Edgelist => "edgelist",
            Format::Json => "json",
            Format::Dot => "dot",
            Format::Csv => "csv",
            Format::Report => "report",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Format::Edgelist, Format::Json, Format::Dot, Format::Csv, Format::Report]
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown format {s:?}")))
    }
}

pub enum Payload<'a> {
    Graph(&'a Graph),
    /// Reports preceded by a free-form header.
    Reports(&'a str, &'a [LemmaReport]),
    Curve(&'a [CurvePoint]),
    Tiles(&'a TileSet),
    Crossing(&'a [CrossingProfile]),
}

impl Payload<'_> {
    fn name(&self) -> &'static str {
        match self {
            Payload::Graph(_) => "graph",
            Payload::Reports(..) => "reports",
            Payload::Curve(_) => "curve",
            Payload::Tiles(_) => "tiles",
            Payload::Crossing(_) => "crossing",
        }
    }
}

#[derive(Serialize)]
struct GraphJson<'a> {
    vertices: &'a [VertexLabel],
    edges: &'a [EdgeRecord],
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("payload serializes");
    s.push('\n');
    s
}

fn dot(g: &Graph) -> Result<String> {
    if g.vertex_count() > DOT_VERTEX_LIMIT {
        return Err(Error::SizeLimit {
            what: "dot vertices".into(),
            size: g.vertex_count(),
            limit: DOT_VERTEX_LIMIT,
        });
    }
    let mut out = String::from("graph G {\n");
    for (i, l) in g.labels().iter().enumerate() {
        let (x, y) = l.xy();
        writeln!(
            out,
            "  {i} [label=\"{}:{}\", pos=\"{x},{y}!\"];",
            l.level, l.index
        )
        .unwrap();
    }
    for e in g.edges() {
        writeln!(
            out,
            "  {} -- {} [len={}];",
            e.endpoints.0,
            e.endpoints.1,
            format_length(e.length)
        )
        .unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}

/// One line per tile: `face_id k vertex_ids... area perimeter inradius convex`.
pub fn face_table(tiles: &TileSet) -> String {
    let mut out = String::new();
    for (i, t) in tiles.faces.iter().enumerate() {
        write!(out, "{i} {}", t.vertices.len()).unwrap();
        for v in &t.vertices {
            write!(out, " {v}").unwrap();
        }
        writeln!(out, " {} {} {} {}", t.area, t.perimeter, t.inradius, t.convex).unwrap();
    }
    out
}

pub fn emit(payload: &Payload<'_>, format: Format) -> Result<String> {
    let out = match (payload, format) {
        (Payload::Graph(g), Format::Edgelist) => write_graph(g),
        (Payload::Graph(g), Format::Json) => json(&GraphJson {
            vertices: g.labels(),
            edges: g.edges(),
        }),
        (Payload::Graph(g), Format::Dot) => dot(g)?,
        (Payload::Reports(header, r), Format::Report) => {
            let mut out = header.to_string();
            for rep in r.iter() {
                out.push('\n');
                out.push_str(&rep.to_text());
            }
            out
        }
        (Payload::Reports(_, r), Format::Json) => {
            let mut s = reports_to_json(r);
            s.push('\n');
            s
        }
        (Payload::Curve(c), Format::Csv) => curve_csv(c),
        (Payload::Curve(c), Format::Json) => json(c),
        (Payload::Tiles(t), Format::Report) => face_table(t),
        (Payload::Tiles(t), Format::Json) => json(t),
        (Payload::Crossing(c), Format::Csv) => crossing_csv(c),
        (Payload::Crossing(c), Format::Json) => json(c),
        (p, f) => {
            return Err(Error::FormatMismatch {
                format: f.to_string(),
                payload: p.name().to_string(),
            })
        }
    };
    Ok(out)
}

/// Writes to `path`, or to stdout when no path is given.
pub fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)?,
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{build_half_period, build_period, Mode};
    use crate::tiles::extract_tiles;

    #[test]
    fn dot_of_motif() {
        let g = build_half_period(1, Mode::Unit).unwrap();
        let s = emit(&Payload::Graph(&g), Format::Dot).unwrap();
        assert_eq!(s.matches(" -- ").count(), 7);
        assert_eq!(s.matches("pos=").count(), 6);
    }

    #[test]
    fn dot_size_limit() {
        let g = build_half_period(8, Mode::Unit).unwrap();
        assert!(matches!(
            emit(&Payload::Graph(&g), Format::Dot),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn mismatched_formats() {
        let g = build_half_period(1, Mode::Unit).unwrap();
        assert!(matches!(
            emit(&Payload::Graph(&g), Format::Csv),
            Err(Error::FormatMismatch { .. })
        ));
        assert!(emit(&Payload::Curve(&[]), Format::Dot).is_err());
    }

    #[test]
    fn face_table_columns() {
        let g = build_period(2, true, Mode::Geometric).unwrap();
        let t = extract_tiles(&g).unwrap();
        let table = emit(&Payload::Tiles(&t), Format::Report).unwrap();
        for (line, tile) in table.lines().zip(&t.faces) {
            let cols: Vec<&str> = line.split(' ').collect();
            assert_eq!(cols.len(), 2 + tile.vertices.len() + 4);
            assert_eq!(cols[1].parse::<usize>().unwrap(), tile.vertices.len());
        }
    }

    #[test]
    fn format_names() {
        for f in ["edgelist", "json", "dot", "csv", "report"] {
            assert_eq!(f.parse::<Format>().unwrap().to_string(), f);
        }
        assert!("xml".parse::<Format>().is_err());
    }
}
