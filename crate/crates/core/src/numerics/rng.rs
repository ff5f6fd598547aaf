//! Reproducible random sampling.
//!
//! A `RandomStream` is a value, not a generator: the pair (seed, substream)
//! keys a ChaCha8 cipher, so any consumer can be replayed bit for bit and
//! distinct substreams are independent by construction. The Monte Carlo
//! driver additionally splits a stream into fixed-size lanes (the ChaCha
//! stream counter), one per block of replications, which makes estimates
//! identical no matter how many threads execute the blocks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Handle naming one reproducible sequence of random numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RandomStream {
    seed: u64,
    substream: u64,
}

impl RandomStream {
    /// Stream 0 of the given seed.
    pub fn new(seed: u64) -> Self {
        Self { seed, substream: 0 }
    }

    /// The stream with the same seed and the given substream index.
    /// Distinct indices key distinct ciphers: their outputs are unrelated.
    pub fn substream(self, index: u64) -> Self {
        Self {
            seed: self.seed,
            substream: index,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn substream_index(&self) -> u64 {
        self.substream
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.substream.to_le_bytes());
        ChaCha8Rng::from_seed(key)
    }

    /// Lane `chunk` of this stream: same key, distinct cipher stream counter.
    pub(crate) fn chunk_rng(&self, chunk: u64) -> ChaCha8Rng {
        let mut rng = self.rng();
        rng.set_stream(chunk);
        rng
    }
}

/// A Monte Carlo proportion with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub replications: u64,
}

impl McEstimate {
    pub(crate) fn from_successes(successes: u64, replications: u64) -> Self {
        let p = successes as f64 / replications as f64;
        Self {
            estimate: p,
            std_error: (p * (1.0 - p) / replications as f64).sqrt(),
            replications,
        }
    }
}

/// Fewer replications than this gives standard errors too wide to act on.
pub(crate) const MC_MIN_REPS: u64 = 1_000;

/// Replications per lane. Fixed so the lane partition, and therefore the
/// estimate, does not depend on thread count.
const MC_CHUNK: u64 = 1 << 16;

/// Runs `sim` for `reps` replications and returns the success proportion.
///
/// Lanes are aggregated as exact integer counts, so the result is identical
/// for any number of worker threads.
pub(crate) fn mc_success_proportion<F>(stream: RandomStream, reps: u64, sim: F) -> McEstimate
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    let chunks = reps.div_ceil(MC_CHUNK);
    let successes: u64 = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * MC_CHUNK;
            let hi = (lo + MC_CHUNK).min(reps);
            let mut rng = stream.chunk_rng(chunk);
            let mut hits = 0u64;
            for _ in lo..hi {
                if sim(&mut rng) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    McEstimate::from_successes(successes, reps)
}

fn check_count(count: usize) -> Result<()> {
    if count == 0 {
        return Err(Error::InvalidParameter {
            name: "count",
            reason: "must be at least 1".into(),
        });
    }
    Ok(())
}

/// `count` draws from N(mean, sd^2).
///
/// Each draw is mean + sd * z with z standard normal, so rescaling sd with
/// the same stream rescales every deviation from the mean exactly.
pub fn sample_normal(stream: RandomStream, mean: f64, sd: f64, count: usize) -> Result<Vec<f64>> {
    if !mean.is_finite() {
        return Err(Error::InvalidParameter {
            name: "mean",
            reason: format!("{mean} is not finite"),
        });
    }
    if !(sd > 0.0 && sd.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "sd",
            reason: format!("{sd} is not a positive real"),
        });
    }
    check_count(count)?;
    let mut rng = stream.rng();
    Ok((0..count)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            mean + sd * z
        })
        .collect())
}

/// `count` draws from Gamma(shape, rate), mean shape/rate.
pub fn sample_gamma(stream: RandomStream, shape: f64, rate: f64, count: usize) -> Result<Vec<f64>> {
    if !(shape > 0.0 && shape.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "shape",
            reason: format!("{shape} is not a positive real"),
        });
    }
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "rate",
            reason: format!("{rate} is not a positive real"),
        });
    }
    check_count(count)?;
    let gamma = Gamma::new(shape, 1.0 / rate).map_err(|e| Error::InvalidParameter {
        name: "shape",
        reason: e.to_string(),
    })?;
    let mut rng = stream.rng();
    Ok((0..count).map(|_| gamma.sample(&mut rng)).collect())
}

/// `count` draws from chi-square with `df` degrees of freedom.
///
/// Delegates to `sample_gamma(df/2, 1/2)`: the chi-square law is that gamma
/// law, and routing through the same sampler makes the equivalence exact,
/// stream for stream.
pub fn sample_chi_square(stream: RandomStream, df: u32, count: usize) -> Result<Vec<f64>> {
    if df == 0 {
        return Err(Error::InvalidParameter {
            name: "df",
            reason: "must be at least 1".into(),
        });
    }
    sample_gamma(stream, df as f64 / 2.0, 0.5, count)
}

/// Draw one Bernoulli(p) indicator.
pub(crate) fn bernoulli(rng: &mut ChaCha8Rng, p: f64) -> bool {
    // gen::<f64>() is uniform on [0, 1); p = 0 never fires, p = 1 always.
    rng.gen::<f64>() < p
}
