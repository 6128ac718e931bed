use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("grade {0} out of range for dimension {1}")]
    GradeOverflow(usize, usize),
    #[error("grade mismatch: {0} vs {1}")]
    GradeMismatch(usize, usize),
    #[error("contraction needs q <= p, got p = {p}, q = {q}")]
    ContractionGrade { p: usize, q: usize },
    #[error("bullet product would have negative grade ({p} + {q} - 2)")]
    BulletUnderflow { p: usize, q: usize },
    #[error("unsupported ambient dimension {0} (expected 3..=6)")]
    UnsupportedDimension(usize),
    #[error("normal is not a unit simple (m-2)-vector: {0}")]
    NotSimpleUnit(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("degenerate immersion at grid point ({i}, {j})")]
    Degenerate { i: usize, j: usize },
    #[error("operation requires {0}")]
    Topology(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("invalid surface spec: {0}")]
    InvalidSpec(String),
    #[error("inversion center too close to surface (distance {distance:.3e}, required {required:.3e})")]
    NonGenericInversion { distance: f64, required: f64 },
    #[error("curl defect {defect:.3e} of {field} exceeds guard {limit:.3e}")]
    CurlDefect {
        field: &'static str,
        defect: f64,
        limit: f64,
    },
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
