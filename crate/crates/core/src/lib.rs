//! Random geometric graphs on the unit torus: construction, spectral
//! moments (empirical and analytic), spectral-radius bounds, and
//! mean-field SIS epidemic simulation and design.
//!
//! The crate is organized around one pipeline: sample points on the torus
//! ([`torus`]), connect them into an RGG ([`rgg`]), measure spectral
//! quantities of the adjacency matrix ([`spectral`]), predict them
//! analytically ([`moments1d`], [`moments2d`], with the Monte Carlo volume
//! oracle in [`polytope`]), bound the spectral radius ([`bound`]), and run
//! the SIS dynamics against the threshold `lambda_max < delta/beta`
//! ([`sis`]).
//!
//! All randomness is ChaCha8 with explicit seeds and per-task streams, so
//! every result regenerates bit-identically and is independent of thread
//! count.

pub mod bound;
pub mod error;
pub mod moments1d;
pub mod moments2d;
pub mod polytope;
pub mod rgg;
pub mod rng;
pub mod sis;
pub mod spectral;
pub mod torus;

pub use error::{Error, Result};
pub use rgg::{build, expected_degree, Graph, RggSpec};
pub use spectral::{moments_by_eigenvalues, moments_by_walks, spectral_radius, SpectralSummary};
