//! Bergman geometry of the unit ball of `C^n` and numerical certification of
//! sharp Lipschitz and distortion estimates for Bloch-type densities
//! `D_f(z) = (1 − |z|²)^{α(n+1)/(2n)} |det f′(z)|^{1/n}`.
//!
//! The library is organized bottom-up:
//!
//! - [`ball_geometry`]: inner products, the Bergman matrix, automorphisms,
//!   distances, curve lengths and geodesic minimization;
//! - [`holo`]: holomorphic maps with exact Jacobians and a text format;
//! - [`bloch`]: densities, prenorms, constants and distortion bounds;
//! - [`verify`]: theorem-level checks producing replayable reports;
//! - [`cli`]: the command-line campaigns behind the `bergman-bloch` binary.

pub mod ball_geometry;
pub mod bloch;
pub mod cli;
pub mod error;
pub mod holo;
pub mod optim;
pub mod sampling;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
