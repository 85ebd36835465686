//! Connectedness analysis of fractal cubes `E(n, D)`.
//!
//! * [`model`]: digit sets, level composition, affine reduction.
//! * [`approx`]: bitmaps of the approximations `E_k` and PBM output.
//! * [`topology`]: components, islands, and trivial-point verdicts.
//! * [`bounds`]: upper bounds on the connectedness index.
//! * [`gd`]: graph-directed dimensions and decomposition checks.
//! * [`cli`]: the `fracube` command-line front end.

pub mod approx;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod gd;
pub mod model;
pub mod topology;

pub use error::{Error, Result};
