//! Weighted harmonic Bergman kernels on the upper half-space H^n with
//! vertical weights ρ(y)^α, the holomorphic Siegel-domain kernel slice they
//! reduce to, the Berezin transform of vertical symbols, and numerical
//! verification of the associated large-α asymptotic expansions.
//!
//! Everything large lives in log-magnitude/phase form ([`LogComplex`]); the
//! public kernel and transform values come back as ordinary floats once the
//! α-scaling has been divided out.
//!
//! The `examples/` directory walks through each capability; the `bergman`
//! binary exposes the same operations as batch subcommands.

pub mod asymptotics;
pub mod berezin;
pub mod cli;
pub mod error;
pub mod kernels;
pub mod numerics;
pub mod transform;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use numerics::{LogComplex, QuadratureResult};
pub use weights::Weight;
