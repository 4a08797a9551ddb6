use thiserror::Error;

/// A sampled point at which a zero test failed, with the offending value.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub point: Vec<(String, f64)>,
    pub value: f64,
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "value {:.6e} at (", self.value)?;
        for (k, (name, v)) in self.point.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{name}={v:.6}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("domain violation in `{expr}`: {reason}")]
    Domain { expr: String, reason: String },
    #[error("unassigned variable `{0}`")]
    Unassigned(String),
    #[error("could not find a valid sample point after {attempts} attempts")]
    Sampling { attempts: usize },
    #[error("chart mismatch: {0}")]
    ChartMismatch(String),
    #[error("degree overflow: {lhs} + {rhs} exceeds dimension {dim}")]
    DegreeOverflow { lhs: usize, rhs: usize, dim: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("Jacobi identity fails: [pi,pi]{component:?} has {witness}")]
    JacobiFailed { component: Vec<usize>, witness: Witness },
    #[error("modular operator has a non-vanishing second-order part: {witness}")]
    SecondOrderResidue { witness: Witness },
    #[error("non-positive volume density: {witness}")]
    NonPositiveDensity { witness: Witness },
    #[error("invalid Lie algebra data: {0}")]
    InvalidLieAlgebra(String),
    #[error("input is not polynomial: {0}")]
    NonPolynomialInput(String),
    #[error("not a Poisson map: residual component {component:?} has {witness}")]
    NotPoissonMap { component: (usize, usize), witness: Witness },
    #[error("invalid cotangent path: {0}")]
    InvalidPath(String),
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("not a Poisson submanifold: component {component:?} does not vanish ({witness})")]
    NotPoissonSubmanifold { component: (String, String), witness: Witness },
    #[error("bracket with conormal frame leaks into tangential direction `{direction}` at t={t}: {value:.3e}")]
    ConormalLeak { direction: String, t: f64, value: f64 },
    #[error("ODE integration failed: {0}")]
    OdeFailure(String),
    #[error("degenerate frame: {0}")]
    DegenerateFrame(String),
    #[error("invalid group action: {invariant} ({detail})")]
    InvalidAction { invariant: String, detail: String },
    #[error("volume density is not invariant under generator {generator}: {witness}")]
    NonInvariantDensity { generator: usize, witness: Witness },
    #[error("moment map is not invariant under generator {generator}: {witness}")]
    NonInvariantMoment { generator: usize, witness: Witness },
    #[error("level is not regular: {0}")]
    RankDeficientLevel(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
