use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("label count k = {0} is below the minimum of 2")]
    TooFewLabels(usize),

    #[error("permutation {map:?} is not a bijection on 0..{len}")]
    NonBijective { map: Vec<usize>, len: usize },

    #[error("edge {edge}: permutation has length {got}, expected k = {k}")]
    PermutationLength { edge: usize, got: usize, k: usize },

    #[error("edge {edge}: weight {weight} is not positive")]
    NonPositiveWeight { edge: usize, weight: f64 },

    #[error("edge {edge}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { edge: usize, vertex: usize, n: usize },

    #[error("edge {edge}: self-loop on vertex {vertex}")]
    SelfLoop { edge: usize, vertex: usize },

    #[error("edge {edge}: duplicate of an earlier edge on pair ({i}, {j})")]
    DuplicateEdge { edge: usize, i: usize, j: usize },

    #[error("requested {m} edges but only {max} vertex pairs exist")]
    TooManyEdges { m: usize, max: usize },

    #[error("unsupported format header {0:?}, expected \"UG 1\"")]
    UnsupportedVersion(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("value {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("enumeration needs {states} labelings, budget is {limit}")]
    BudgetExceeded { states: u128, limit: u128 },

    #[error("vector {index} has norm {norm}, expected a unit vector")]
    NonUnitVector { index: usize, norm: f64 },

    #[error("solver options: {0}")]
    InvalidOptions(String),
}
