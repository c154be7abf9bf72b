use alloc::string::String;

/// Errors raised by evaluation, quadrature and decomposition routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A point expected in the open disk has modulus at least one.
    #[error("point outside the open unit disk (modulus {modulus})")]
    OutsideDisk {
        /// Modulus of the offending point.
        modulus: f64,
    },

    /// A point expected on the unit circle is off by more than `1e-12`.
    #[error("point not on the unit circle (modulus {modulus})")]
    OffCircle {
        /// Modulus of the offending point.
        modulus: f64,
    },

    /// Logarithmic derivative requested at a zero of the function.
    #[error("evaluation at a zero of f (distance {distance:e})")]
    Pole {
        /// Distance from the evaluation point to the zero.
        distance: f64,
    },

    /// The hyperbolic derivative came out above one by more than `1e-9`.
    #[error("hyperbolic derivative {value} exceeds 1")]
    Consistency {
        /// The unclamped value.
        value: f64,
    },

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error("quadrature budget exhausted after {subdivisions} subdivisions (error estimate {error_estimate:e})")]
    Budget {
        /// Number of subintervals at exhaustion.
        subdivisions: usize,
        /// Global error estimate at exhaustion.
        error_estimate: f64,
    },

    /// Midpoint refinement of a dyadic-tree Poisson integral did not settle.
    #[error("Poisson refinement did not reach relative change {tolerance:e} within {levels} levels")]
    RefinementBudget {
        /// Target relative change.
        tolerance: f64,
        /// Number of refinement levels tried.
        levels: u32,
    },

    /// An angle that must lie in an arc does not.
    #[error("angle {angle} lies outside the arc")]
    OutsideArc {
        /// The angle in turns.
        angle: f64,
    },

    /// An operation precondition is violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An input description is malformed.
    #[error("invalid input: {0}")]
    InvalidSpec(String),

    /// Exact arithmetic was requested for an atom whose angle is a float.
    #[error("atom angle {angle} is not an exact rational")]
    Representation {
        /// The floating angle.
        angle: f64,
    },

    /// A gap rule produced total length above one.
    #[error("gap lengths sum to {total}, exceeding the circle")]
    Rule {
        /// Total gap length produced.
        total: f64,
    },
}

/// Crate result alias.
pub type Result<T> = core::result::Result<T, Error>;
