//! Distributed adaptive learning of bandlimited graph signals.
//!
//! The crate provides the building blocks for reconstructing a graph signal
//! from noisy observations collected at a random subset of vertices, using
//! diffusion LMS adaptation over a communication graph:
//!
//! - [`graph`]: undirected graphs, Laplacian spectral bases, GFT/IGFT and
//!   vertex-limiting operators;
//! - [`sampling`]: expected sampling sets, reconstruction conditions and
//!   greedy/exhaustive/random sampling-set selection;
//! - [`diffusion`]: the ATC/CTA diffusion LMS recursions with Bernoulli
//!   sampling, combination weights, and Monte Carlo simulation drivers;
//! - [`theory`]: exact mean-square analysis (weighting-operator recursion,
//!   stability checks, transient and steady-state MSD predictions);
//! - [`protocol`]: message-level simulation of the distributed selection
//!   protocol (max consensus + flooding) with round/message accounting;
//! - [`rng`]: seeded, purpose-split random streams so experiments are
//!   reproducible bit-for-bit.

pub mod diffusion;
pub mod generators;
pub mod graph;
pub mod protocol;
pub mod rng;
pub mod sampling;
pub mod theory;

pub use graph::{FrequencySupport, Graph, GraphRole, SpectralBasis};

