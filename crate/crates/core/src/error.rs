use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge endpoint {endpoint} out of range (graph has {vertices} vertices)")]
    EndpointOutOfRange { endpoint: usize, vertices: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),

    #[error("duplicate edge between {0} and {1}")]
    DuplicateEdge(VertexId, VertexId),

    #[error("edge {0}-{1} has non-positive or non-finite length {2}")]
    NonPositiveLength(VertexId, VertexId, f64),

    #[error("vertices {0} and {1} share the same position")]
    DuplicatePosition(VertexId, VertexId),

    #[error("graph is disconnected: vertex {unreachable} is unreachable from vertex 0")]
    Disconnected { unreachable: VertexId },

    #[error("graph has no vertices")]
    Empty,

    #[error("invalid vertex {0}")]
    InvalidVertex(VertexId),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("variant {variant} cannot be built in unit mode without an explicit diagonal length")]
    InvalidVariantMode { variant: String },

    #[error("face traversal inconsistent with Euler's formula: V={vertices} E={edges} F={faces}")]
    NonPlanarInput {
        vertices: usize,
        edges: usize,
        faces: usize,
    },

    #[error("distances {d_xw}, {d_yw}, {d_xy} violate the triangle inequality")]
    TriangleViolation { d_xw: f64, d_yw: f64, d_xy: f64 },

    #[error("computation needs {required} vertices but the budget is {available}")]
    BudgetExceeded { required: usize, available: usize },

    #[error("empty vertex subset")]
    EmptySubset,

    #[error("ball of radius {radius} touches the truncation frontier")]
    FrontierContact { radius: f64 },

    #[error("format {format} cannot encode {payload}")]
    FormatMismatch { format: String, payload: String },

    #[error("{what} has {size} elements, limit is {limit}")]
    SizeLimit {
        what: String,
        size: usize,
        limit: usize,
    },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
