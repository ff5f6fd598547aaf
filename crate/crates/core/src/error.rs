use thiserror::Error;

/// Errors produced while constructing or evaluating a design.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside its domain (non-finite, wrong sign, out of range).
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The requested total cannot be split so that both arms are non-empty.
    #[error("infeasible layout: n_total {n_total} with allocation ratio {allocation_ratio} leaves an arm empty")]
    InfeasibleLayout { n_total: u32, allocation_ratio: f64 },

    /// Requested prior moments that no member of the family can attain.
    #[error("infeasible moments: {reason}")]
    InfeasibleMoments { reason: String },

    /// A search target that no sample size can reach; `limit` is the supremum
    /// of the quantity being targeted.
    #[error("infeasible target {target}: the limiting value is {limit:.6}")]
    InfeasibleTarget { target: f64, limit: f64 },

    /// Too few Monte Carlo replications for a meaningful estimate.
    #[error("{reps} replications is below the minimum of {min}")]
    TooFewReps { reps: u64, min: u64 },

    /// An internal computation lost all precision; inputs were nominally
    /// valid but numerically hopeless.
    #[error("numeric degeneracy: {0}")]
    NumericDegeneracy(String),
}

pub type Result<T> = std::result::Result<T, Error>;
