//! Error type shared by all modules.

/// Crate-wide error enumeration.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Matrix input whose determinant is not strictly positive.
    #[error("matrix determinant must be positive, got {0}")]
    NonPositiveDeterminant(f64),

    /// Principal logarithm is ambiguous for trace-zero elements.
    #[error("no principal logarithm: trace is zero (rotation by pi)")]
    NoPrincipalLog,

    /// The two arguments coincide as projective points.
    #[error("the two points coincide projectively")]
    SamePoint,

    /// Generator index outside the representation's rank.
    #[error("generator index {index} out of range for rank {rank}")]
    BadIndex { index: usize, rank: usize },

    /// The ping-pong certificate could not be established.
    #[error("ping-pong certificate failed: {0}")]
    NotPingPong(String),

    /// Constraint points collide, leaving ratios undefined.
    #[error("coincident points in constraint set")]
    CoincidentPoints,

    /// A contraction bound does not clear the required threshold.
    #[error("no certified contraction: bound {0} does not clear the threshold")]
    NoContraction(f64),

    /// An iterative solver exhausted its iteration budget.
    #[error("solver exceeded {0} iterations")]
    MaxIterations(usize),

    /// A word evaluates to a non-hyperbolic element where hyperbolic is required.
    #[error("word '{0}' evaluates to a non-hyperbolic element")]
    NonHyperbolicBase(String),

    /// The Lipschitz extension problem has no solution at the given constant.
    #[error("constraints admit no Lipschitz extension at the given constant")]
    Infeasible,

    /// Two strips of a deformation datum intersect.
    #[error("strips {0} and {1} overlap")]
    StripsOverlap(usize, usize),

    /// The arc system fails to decompose the surface into disks.
    #[error("arc system does not decompose the surface into disks")]
    NotFilling,

    /// Admissibility could not be certified for the cocycle.
    #[error("cocycle not certified admissible: {0}")]
    NotAdmissible(String),

    /// No candidate simplex carries an all-positive solution.
    #[error("no all-positive solution among candidate simplices: {patterns:?}")]
    NoPositiveSolution {
        /// Sign pattern of the solved weights for every candidate simplex.
        patterns: Vec<(String, Vec<f64>)>,
    },

    /// A sampled map was queried outside its stored domain.
    #[error("query lies outside the sampled domain")]
    OutsideDomain,

    /// Catch-all for malformed inputs.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
