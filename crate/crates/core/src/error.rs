use thiserror::Error;

use crate::exactpoly::ExactPoly;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial division left a nonzero remainder of degree {remainder_degree}")]
    NotDivisible { remainder_degree: usize },

    #[error("polynomial is not squarefree; gcd with derivative has degree {}", gcd.degree().unwrap_or(0))]
    NotSquarefree { gcd: ExactPoly },

    #[error("polynomial has a multiple root; gcd with derivative has degree {}", gcd.degree().unwrap_or(0))]
    MultipleRoot { gcd: ExactPoly },

    #[error("polynomial size {size} exceeds the coefficient cap {cap}")]
    DegreeCap { size: usize, cap: usize },

    #[error("computed degree {got} differs from the expected degree {expected}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("iteration did not converge (first stuck index {index}, worst correction {worst:e}); raise the working precision")]
    NonConvergence { index: usize, worst: f64 },

    #[error("evaluation point lies within {distance:e} of a point of the set")]
    TooClose { distance: f64 },

    #[error("structure violation: {0}")]
    StructureViolation(String),

    #[error("branch continuation collided with another root near beta = {re}{im:+}i")]
    BranchCollision { re: f64, im: f64 },

    #[error("beta = {re}{im:+}i lies inside the support")]
    InsideSupport { re: f64, im: f64 },

    #[error("trajectory stalled near a turning point at {re}{im:+}i")]
    StallNearTurningPoint { re: f64, im: f64 },

    #[error("ambiguous topology: {endpoints} endpoints and {junctions} junctions")]
    AmbiguousTopology { endpoints: usize, junctions: usize },

    #[error("sample point lies within {distance:e} of a pole")]
    PoleTooClose { distance: f64 },

    #[error("grid indexing failed: {0}")]
    IndexingAmbiguity(String),

    #[error("path passes within {distance:e} of a branching point (clearance {clearance:e})")]
    ClearanceViolation { distance: f64, clearance: f64 },

    #[error("eigenvalue collision could not be resolved at path parameter {t}")]
    CollisionUnresolved { t: f64 },

    #[error("unknown figure `{0}`")]
    UnknownFigure(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
