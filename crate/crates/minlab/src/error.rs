//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point ({re}, {im}) lies outside the chart of the base manifold")]
    OutOfChart { re: f64, im: f64 },

    #[error("grid too small: {n_u} x {n_v} samples (need at least 9 x 9)")]
    GridTooSmall { n_u: usize, n_v: usize },

    #[error("grid cells are not square: du = {du}, dv = {dv}")]
    NonSquareCells { du: f64, dv: f64 },

    #[error("degenerate point configuration (smallest singular value {sigma_min:.3e})")]
    DegenerateConfiguration { sigma_min: f64 },

    #[error("Hopf coefficient has a zero of odd order {winding} near ({u}, {v})")]
    OddOrderZero { u: f64, v: f64, winding: i64 },

    #[error("dilatation vanishes identically: h_wbar ~ 0 on the whole grid")]
    ZeroDilatation,

    #[error("Hopf coefficient vanishes on the grid; {context}")]
    PhiZero { context: &'static str },

    #[error("height one-form has period defect {defect:.3e} > tolerance {tolerance:.3e}")]
    PeriodDefect { defect: f64, tolerance: f64 },

    #[error("closed-loop defect {defect:.3e} of dh^theta exceeds tolerance {tolerance:.3e}")]
    LoopDefectExceeded { defect: f64, tolerance: f64 },

    #[error("associate march left the chart of the base manifold near ({u}, {v})")]
    ChartExit { u: f64, v: f64 },

    #[error("degenerate metric: min lambda^2 = {min:.3e}")]
    DegenerateMetric { min: f64 },

    #[error("projected curve not immersed at sample {index} (speed {speed:.3e})")]
    ZeroSpeed { index: usize, speed: f64 },

    #[error("turning-angle branch ambiguous at sample {index} (jump {jump:.3e})")]
    BranchAmbiguity { index: usize, jump: f64 },

    #[error("tail fit inconclusive for divergence classification")]
    InconclusiveTail,

    #[error("adaptive quadrature failed to reach error target (estimate {estimate:.3e})")]
    QuadratureFailure { estimate: f64 },

    #[error("unknown catalog entry `{name}`; known entries: {known}")]
    UnknownEntry { name: String, known: String },

    #[error("unknown check `{name}`")]
    UnknownCheck { name: String },

    #[error("bad parameter `{name}`: {reason}")]
    BadParameter { name: String, reason: String },

    #[error("operation requires the {required} base manifold")]
    UnsupportedManifold { required: &'static str },

    #[error("parameter point ({u}, {v}) outside the entry's conformal domain")]
    DomainExceeded { u: f64, v: f64 },

    #[error("field data mismatch: {0}")]
    SchemaMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
