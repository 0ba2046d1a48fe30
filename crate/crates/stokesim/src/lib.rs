//! Simulator and analysis toolkit for spatial-mode (TEM_pq) quantum states
//! of light.
//!
//! The crate computes spatial Stokes-operator signals, noise, squeezing, and
//! two-beam entanglement for optical circuits described in a small circuit
//! language, and cross-validates the linearized formulas against an exact
//! truncated-Fock-space oracle.
//!
//! Layout:
//! - [`modes`]: Hermite-Gauss mode functions, overlaps, intensity grids.
//! - [`gaussian`]: multimode Gaussian states and optical-element transforms.
//! - [`stokes`]: spatial Stokes means, variances, Poincare coordinates and
//!   squeezing classification for a TEM_pq / TEM_qp pair.
//! - [`entanglement`]: conditional variances and Duan-style degrees of
//!   inseparability for two-beam configurations.
//! - [`oracle`]: exact truncated-Fock-space reference implementation.
//! - [`dsl`]: the circuit description language (parser, compiler, runner).
//! - [`report`]: canonical JSON, CSV, and PGM emission.

pub mod modes;
pub mod gaussian;

pub use gaussian::{Entry, GaussianBeamState, QuadratureSpec, SqueezerConfig};
pub use modes::{GridConfig, ModeIndex, Superposition};
