//! Sampler and bound calculator for a gas of closed lattice contours with
//! volume exclusion, driven as a loss network.
//!
//! Contours attempt to appear at rate `exp(-beta * length)`, are rejected
//! when they share a face with a present contour, and die at rate one. The
//! crate provides the contour combinatorics, a lazy consistent realization
//! of the underlying marked Poisson field, finite-volume forward dynamics,
//! an exact backward sampler of the infinite-volume equilibrium measure via
//! the clan-of-ancestors construction, the dominating multitype branching
//! bounds, and a statistical validation suite.

pub mod bounds;
pub mod clan;
pub mod cli;
pub mod config;
pub mod experiments;
pub mod field;
pub mod forward;
pub mod gibbs;
pub mod lattice;
pub mod rng;

pub use lattice::{Axis, Catalog, ClassId, Contour, Instance, Plaquette, Point};
