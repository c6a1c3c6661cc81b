//! Monte Carlo oracle for chain-polytope volumes `Vol(H_k(1))`.
//!
//! The first k constraints of `H_k(1)` are enforced by construction: the
//! chain draws `x_1 ~ U[-1,1]` and `x_{j+1} ~ U[x_j - 1, x_j + 1]`, a
//! proposal region of exactly known volume `2^k`. Only the closing
//! constraint `|x_k| <= 1` needs rejection, so the acceptance fraction
//! decays like k^{-1/2} rather than exponentially.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::stream_rng;

pub const MIN_SAMPLES: usize = 10_000;

/// One Monte Carlo volume estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct VolumeEstimate {
    pub k: usize,
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Estimates `Vol(H_k(1))` from `samples` independent chains.
///
/// Sample `i` draws from stream `i` of the master seed, so the result is
/// deterministic for a fixed `(k, samples, seed)` and invariant to thread
/// count.
pub fn estimate_volume(k: usize, samples: usize, seed: u64) -> Result<VolumeEstimate> {
    if k < 1 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "samples={samples} below minimum {MIN_SAMPLES}"
        )));
    }

    const CHUNK: usize = 1 << 14;
    let chunks: Vec<(usize, usize)> = (0..samples)
        .step_by(CHUNK)
        .map(|lo| (lo, (lo + CHUNK).min(samples)))
        .collect();
    let accepted: u64 = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let template = stream_rng(seed, 0);
            let mut count = 0u64;
            for i in lo..hi {
                let mut rng = template.clone();
                rng.set_stream(i as u64);
                let mut x: f64 = rng.gen_range(-1.0..1.0);
                for _ in 1..k {
                    x += rng.gen_range(-1.0..1.0);
                }
                if x.abs() <= 1.0 {
                    count += 1;
                }
            }
            count
        })
        .sum();

    let p = accepted as f64 / samples as f64;
    let scale = 2f64.powi(k as i32);
    Ok(VolumeEstimate {
        k,
        estimate: scale * p,
        std_error: scale * (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
        seed,
    })
}
