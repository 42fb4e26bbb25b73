use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("pair ({coface}, {free_face}) is not a free pair of the complex")]
    NotFree { coface: String, free_face: String },

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("simplex {simplex} is not realizable (Cayley-Menger value {determinant:e})")]
    Unrealizable { simplex: String, determinant: f64 },

    #[error("missing length for edge {0}")]
    MissingLength(String),

    #[error("non-positive length {value} for edge {edge}")]
    NegativeLength { edge: String, value: f64 },

    #[error("length given for edge {0}, which is not in the complex")]
    UnknownEdge(String),

    #[error("unknown vertex label {0:?}")]
    UnknownVertex(String),

    #[error("degenerate simplex: {0}")]
    DegenerateSimplex(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("no interior crossing of the edge")]
    NoInteriorCrossing,

    #[error("fan error: {0}")]
    Fan(String),

    #[error("evaluator undefined: {0}")]
    Domain(String),

    #[error("geodesic does not cross through two distinct faces: {0}")]
    CrossingNotThroughTwoFaces(String),

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    #[error("no path found between {0}")]
    NoPath(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}
