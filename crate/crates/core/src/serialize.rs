//! Plain-text graph serialization.
//!
//! ```text
//! # vertices <n>
//! id  level  index  x_num  x_exp  y_num  y_exp  kind
//! # edges <m>
//! u  v  length
//! ```
//!
//! Columns are tab-separated. Lengths are written with 17 significant
//! digits, which round-trips every `f64` exactly.

use std::fmt::Write as _;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexKind, VertexLabel};

pub fn format_length(length: f64) -> String {
    format!("{length:.16e}")
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "# vertices {}", g.vertex_count()).unwrap();
    for (i, l) in g.labels().iter().enumerate() {
        writeln!(
            out,
            "{i}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            l.level,
            l.index,
            l.position.0.numerator(),
            l.position.0.exponent(),
            l.position.1.numerator(),
            l.position.1.exponent(),
            l.kind.code()
        )
        .unwrap();
    }
    writeln!(out, "# edges {}", g.edge_count()).unwrap();
    for e in g.edges() {
        writeln!(
            out,
            "{}\t{}\t{}",
            e.endpoints.0,
            e.endpoints.1,
            format_length(e.length)
        )
        .unwrap();
    }
    out
}

fn field<T: std::str::FromStr>(line: usize, cols: &[&str], i: usize, name: &str) -> Result<T> {
    cols.get(i)
        .ok_or_else(|| Error::Parse {
            line,
            message: format!("missing column {name}"),
        })?
        .parse()
        .map_err(|_| Error::Parse {
            line,
            message: format!("bad {name}: {:?}", cols[i]),
        })
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    #[derive(PartialEq)]
    enum Section {
        None,
        Vertices,
        Edges,
    }
    let mut section = Section::None;
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        if raw.trim().is_empty() {
            continue;
        }
        if let Some(header) = raw.strip_prefix('#') {
            section = match header.split_whitespace().next() {
                Some("vertices") => Section::Vertices,
                Some("edges") => Section::Edges,
                _ => section,
            };
            continue;
        }
        let cols: Vec<&str> = raw.split('\t').collect();
        match section {
            Section::Vertices => {
                let id: usize = field(line, &cols, 0, "id")?;
                if id != labels.len() {
                    return Err(Error::Parse {
                        line,
                        message: format!("expected vertex id {}, found {id}", labels.len()),
                    });
                }
                let kind_code: String = field(line, &cols, 7, "kind")?;
                let kind = VertexKind::parse(&kind_code).ok_or_else(|| Error::Parse {
                    line,
                    message: format!("unknown kind {kind_code:?}"),
                })?;
                labels.push(VertexLabel {
                    level: field(line, &cols, 1, "level")?,
                    index: field(line, &cols, 2, "index")?,
                    position: (
                        Dyadic::new(field(line, &cols, 3, "x_num")?, field(line, &cols, 4, "x_exp")?),
                        Dyadic::new(field(line, &cols, 5, "y_num")?, field(line, &cols, 6, "y_exp")?),
                    ),
                    kind,
                });
            }
            Section::Edges => {
                let u: u32 = field(line, &cols, 0, "u")?;
                let v: u32 = field(line, &cols, 1, "v")?;
                let length: f64 = field(line, &cols, 2, "length")?;
                edges.push((VertexId(u), VertexId(v), length));
            }
            Section::None => {
                return Err(Error::Parse {
                    line,
                    message: "data before section header".into(),
                })
            }
        }
    }
    Graph::assemble(labels, edges)
}
