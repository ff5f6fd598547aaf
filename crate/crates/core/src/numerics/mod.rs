//! Special functions and reproducible random sampling.
//!
//! Everything downstream reduces to the standard normal distribution, the
//! Student t distribution, and gamma variates, so those live here behind a
//! small set of carefully tested entry points.

mod rng;
mod special;

pub use rng::{
    sample_chi_square, sample_gamma, sample_normal, McEstimate, RandomStream,
};
pub use special::{std_normal_cdf, std_normal_quantile, student_t_quantile};

pub(crate) use rng::{bernoulli, mc_success_proportion, MC_MIN_REPS};
pub(crate) use special::{ln_normal_pdf, phi, phi_inv, student_t_cdf};
