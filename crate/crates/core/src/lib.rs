//! Numerical spherical harmonic analysis on real-rank-one groups.
//!
//! The reference realization is SL(2,R) acting on the upper half-plane;
//! every radial computation also runs for abstract root multiplicities
//! (p, q).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convolution;
pub mod error;
pub mod group_model;
pub mod quadrature;
pub mod radial;
pub mod special_functions;
pub mod spherical;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use group_model::{GroupElement, RankOneGroup, Realization, SpectralParameter, TubeDomain};
