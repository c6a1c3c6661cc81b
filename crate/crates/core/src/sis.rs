//! Discrete-time mean-field SIS dynamics on a graph.
//!
//! The update is
//! `p_i[k+1] = (1 - prod_{j in N_i} (1 - beta p_j[k])) + (1 - delta) p_i[k]`,
//! applied verbatim and then clamped to `[0,1]`. The model is derived for
//! the low-density regime `beta p << 1`, where the clamp never triggers;
//! outside it boundedness has to be imposed, and the clamp count is
//! reported so callers can see when that happened.

use std::io::Write;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rgg::Graph;
use crate::rng::stream_rng;
use crate::spectral::spectral_radius;

pub const DEFAULT_DIE_OUT_THRESHOLD: f64 = 1e-6;
/// Window for the trailing moving-average persistence check.
const PERSIST_WINDOW: usize = 100;

#[derive(Debug, Clone, Serialize)]
pub struct EpidemicParams {
    /// infection probability per infected neighbor per step
    pub beta: f64,
    /// recovery probability per step
    pub delta: f64,
    /// initial infection probabilities, one per node
    pub p0: Vec<f64>,
    /// simulation horizon in steps
    pub steps: usize,
    pub die_out_threshold: f64,
}

impl EpidemicParams {
    pub fn validate(&self, n: usize) -> Result<()> {
        if !(0.0..=1.0).contains(&self.beta) || !(0.0..=1.0).contains(&self.delta) {
            return Err(Error::InvalidParameter(
                "beta and delta must lie in [0,1]".into(),
            ));
        }
        if self.p0.len() != n {
            return Err(Error::InvalidParameter(format!(
                "p0 length {} does not match graph size {n}",
                self.p0.len()
            )));
        }
        if self.p0.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidParameter("p0 entries must lie in [0,1]".into()));
        }
        if !(self.die_out_threshold > 0.0) {
            return Err(Error::InvalidParameter("die_out_threshold must be > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    DiedOut,
    Persisted,
    HorizonReached,
}

/// Full infection-probability history plus the outcome classification.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    /// `probabilities[k][i]` = infection probability of node i at step k;
    /// row 0 is the initial condition.
    pub probabilities: Vec<Vec<f64>>,
    pub outcome: Outcome,
    pub die_out_step: Option<usize>,
    /// number of entries clamped back into [0,1] across the whole run
    pub clamp_count: u64,
}

/// One synchronous update; returns the new vector and how many entries
/// needed clamping. An isolated node evolves as `p <- (1 - delta) p`.
pub fn step(g: &Graph, p: &[f64], beta: f64, delta: f64) -> Result<(Vec<f64>, u64)> {
    if p.len() != g.n() {
        return Err(Error::InvalidParameter(format!(
            "probability vector length {} does not match graph size {}",
            p.len(),
            g.n()
        )));
    }
    let mut clamps = 0u64;
    let next = (0..g.n())
        .map(|i| {
            let mut no_infection = 1.0f64;
            for &j in g.neighbors(i) {
                no_infection *= 1.0 - beta * p[j as usize];
            }
            let raw = (1.0 - no_infection) + (1.0 - delta) * p[i];
            if raw > 1.0 {
                clamps += 1;
                1.0
            } else if raw < 0.0 {
                clamps += 1;
                0.0
            } else {
                raw
            }
        })
        .collect();
    Ok((next, clamps))
}

/// Iterates `step` up to the horizon.
///
/// Classification: died-out as soon as `max_i p_i` falls below the
/// threshold (the run stops there); at the horizon, persisted when the
/// trailing 100-step moving average of the mean infection level is
/// non-decreasing, otherwise horizon-reached.
pub fn simulate(g: &Graph, params: &EpidemicParams) -> Result<Trajectory> {
    params.validate(g.n())?;
    let mut history = Vec::with_capacity(params.steps + 1);
    let mut clamp_count = 0u64;
    history.push(params.p0.clone());

    let max0 = params.p0.iter().cloned().fold(0.0f64, f64::max);
    if max0 < params.die_out_threshold {
        return Ok(Trajectory {
            probabilities: history,
            outcome: Outcome::DiedOut,
            die_out_step: Some(0),
            clamp_count,
        });
    }

    for k in 1..=params.steps {
        let (next, clamps) = step(g, history.last().unwrap(), params.beta, params.delta)?;
        clamp_count += clamps;
        let max_p = next.iter().cloned().fold(0.0f64, f64::max);
        history.push(next);
        if max_p < params.die_out_threshold {
            return Ok(Trajectory {
                probabilities: history,
                outcome: Outcome::DiedOut,
                die_out_step: Some(k),
                clamp_count,
            });
        }
    }

    let means: Vec<f64> = history
        .iter()
        .map(|row| row.iter().sum::<f64>() / row.len() as f64)
        .collect();
    let outcome = if means.len() >= 2 * PERSIST_WINDOW {
        let tail = &means[means.len() - PERSIST_WINDOW..];
        let prev = &means[means.len() - 2 * PERSIST_WINDOW..means.len() - PERSIST_WINDOW];
        let tail_avg: f64 = tail.iter().sum::<f64>() / PERSIST_WINDOW as f64;
        let prev_avg: f64 = prev.iter().sum::<f64>() / PERSIST_WINDOW as f64;
        if tail_avg >= prev_avg - 1e-12 {
            Outcome::Persisted
        } else {
            Outcome::HorizonReached
        }
    } else {
        Outcome::HorizonReached
    };
    Ok(Trajectory {
        probabilities: history,
        outcome,
        die_out_step: None,
        clamp_count,
    })
}

/// Threshold report for the sufficient die-out condition
/// `lambda_max < delta/beta`.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdReport {
    pub lambda_max: f64,
    pub ratio: f64,
    pub satisfied: bool,
    /// relative margin `|ratio - lambda_max| / lambda_max`; runs inside a
    /// 5% margin converge arbitrarily slowly and are flagged
    pub margin: f64,
    pub near_threshold: bool,
}

pub fn threshold_check(g: &Graph, beta: f64, delta: f64) -> Result<ThresholdReport> {
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter("beta must be > 0".into()));
    }
    let lambda_max = spectral_radius(g, 1e-8)?.value;
    let ratio = delta / beta;
    let margin = if lambda_max > 0.0 {
        (ratio - lambda_max).abs() / lambda_max
    } else {
        f64::INFINITY
    };
    Ok(ThresholdReport {
        lambda_max,
        ratio,
        satisfied: lambda_max < ratio,
        margin,
        near_threshold: margin < 0.05,
    })
}

/// Initial infection vector with entries `level * Uniform[0,1)`.
pub fn seed_infection(n: usize, level: f64, seed: u64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&level) {
        return Err(Error::InvalidParameter("level must lie in [0,1]".into()));
    }
    let mut rng = stream_rng(seed, 1);
    Ok((0..n).map(|_| level * rng.gen::<f64>()).collect())
}

impl Trajectory {
    /// CSV export: one row per time step, one column per node.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        for row in &self.probabilities {
            let cells: Vec<String> = row.iter().map(|p| format!("{p:.16e}")).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    /// Binary PPM (P6, 8-bit RGB) heatmap: one pixel row per node, one
    /// column per time step; blue near 0 through green/yellow to red near 1.
    pub fn write_ppm<W: Write>(&self, w: &mut W) -> Result<()> {
        let height = self.probabilities.first().map_or(0, Vec::len);
        let width = self.probabilities.len();
        writeln!(w, "P6\n{width} {height}\n255")?;
        let mut buf = Vec::with_capacity(width * height * 3);
        for i in 0..height {
            for row in &self.probabilities {
                buf.extend_from_slice(&heat_color(row[i]));
            }
        }
        w.write_all(&buf)?;
        Ok(())
    }
}

/// Blue -> cyan -> green -> yellow -> red ramp over [0,1].
fn heat_color(p: f64) -> [u8; 3] {
    let p = p.clamp(0.0, 1.0);
    let (r, g, b) = if p < 0.25 {
        (0.0, 4.0 * p, 1.0)
    } else if p < 0.5 {
        (0.0, 1.0, 1.0 - 4.0 * (p - 0.25))
    } else if p < 0.75 {
        (4.0 * (p - 0.5), 1.0, 0.0)
    } else {
        (1.0, 1.0 - 4.0 * (p - 0.75), 0.0)
    };
    [(r * 255.0) as u8, (g * 255.0) as u8, (b * 255.0) as u8]
}
