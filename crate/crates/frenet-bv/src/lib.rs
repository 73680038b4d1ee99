//! Frames and curves from curvature/torsion data of bounded variation.
//!
//! The library solves the measure-driven Frenet-Serret system
//! `DG = -G DOmega`, `G(0) = Gbar`, where the datum `Omega` is a
//! skew-matrix-valued function of bounded variation built from an angle
//! pair `(theta, phi)`. Jumps in the data produce frame rotations with
//! sinc-weighted atoms; the solver glues exact exponential steps across
//! them, reconstructs the solution curve, and computes total curvature
//! and total absolute torsion both in closed form and through inscribed
//! polygons.
//!
//! Modules:
//! - [`liegroup`]: dense Sk(N)/SO(N) primitives (Rodrigues, Cayley, logs).
//! - [`bvmeasure`]: scalar BV functions, derivative decomposition,
//!   mollification, and the skew-path datum.
//! - [`solver`]: the frame integrators (continuous, jumping, mollified
//!   oracle, planar) and the residual check.
//! - [`curvegeom`]: curve reconstruction, jump angles, exact and
//!   polygonal invariants, Frechet distance.
//! - [`scenario`]: scenario files and built-in named scenarios.
//! - [`export`]: CSV/JSON/OBJ writers with deterministic output.

pub mod bvmeasure;
pub mod cli;
pub mod curvegeom;
pub mod error;
pub mod export;
pub mod liegroup;
pub mod scenario;
pub mod solver;

pub use error::{Error, Result};
