//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong while building grids, iterating kernels or
/// searching for critical couplings.
#[derive(Debug, Error)]
pub enum Error {
    /// Tabulated radii must be strictly increasing.
    #[error("tabulated radii are not strictly increasing at index {index}")]
    NonMonotonicGrid { index: usize },

    /// Potential shapes must satisfy v(r) >= 0 everywhere.
    #[error("negative potential value {value} at r = {radius}")]
    NegativeValue { radius: f64, value: f64 },

    /// A tabulated shape needs at least four sample points.
    #[error("tabulated potential needs at least 4 points, got {count}")]
    TooFewPoints { count: usize },

    /// The adaptive integrator ran out of its node budget.
    #[error("quadrature node budget of {budget} exhausted (reached {reached})")]
    BudgetExhausted { budget: usize, reached: usize },

    /// An integrand returned NaN or infinity.
    #[error("integrand returned a non-finite value at r = {radius}")]
    NonFinite { radius: f64 },

    /// A required potential moment does not converge.
    #[error("moment integral of r^{power} * v(r) does not converge")]
    DivergentMoment { power: f64 },

    /// The potential vanishes identically; no bound state at any strength.
    #[error("potential is identically zero on its support")]
    ZeroPotential,

    /// Two grid functions live on different grids.
    #[error("grid functions live on different radial grids")]
    GridMismatch,

    /// A sequence invariant (monotone bounds) was violated beyond tolerance.
    #[error("{method} sequence violated monotonicity at n = {index} by {excess:e}")]
    MonotonicityViolated {
        method: &'static str,
        index: usize,
        excess: f64,
    },

    /// The assembled lower limit exceeds the upper limit.
    #[error("inconsistent bracket: lower {lower} exceeds upper {upper}")]
    InconsistentBracket { lower: f64, upper: f64 },

    /// No strength solves the nonlinear sufficiency condition for any scanned radius.
    #[error("no root of the sufficiency condition for any scanned radius")]
    NoRoot,

    /// A trial function is not square integrable on the grid.
    #[error("trial function is not square integrable ({norm})")]
    NotSquareIntegrable { norm: f64 },

    /// A trial function must vanish wherever the potential does.
    #[error("explicit trial function does not vanish outside the potential support")]
    TrialOutsideSupport,

    /// The ODE integrator broke down.
    #[error("shooting integrator failed near r = {radius} (step {step:e})")]
    StepFailure { radius: f64, step: f64 },

    /// The bisection bracket could not be expanded to straddle criticality.
    #[error("could not bracket the critical coupling below g = {cap}")]
    BracketFailure { cap: f64 },

    /// Requested Jost expansion order is outside the supported range.
    #[error("Jost coefficient order {order} exceeds the supported maximum {max}")]
    JostOrderTooLarge { order: usize, max: usize },

    /// The self-consistency check of a freshly built grid failed.
    #[error("radial grid self-check failed: grid {grid} vs adaptive {adaptive}")]
    GridSelfCheck { grid: f64, adaptive: f64 },

    /// Scan interval or tolerances of an optimizer are malformed.
    #[error("invalid optimizer configuration: {reason}")]
    InvalidConfig { reason: String },

    /// Failure reading a tabulated potential from disk.
    #[error("cannot read potential table: {0}")]
    TableIo(#[from] std::io::Error),

    /// Malformed line in a potential table file.
    #[error("cannot parse potential table line {line}: {content:?}")]
    TableParse { line: usize, content: String },
}

pub type Result<T> = std::result::Result<T, Error>;
