//! Computing in the Lorentzian model spaces built from PSL(2,R).
//!
//! The group G = PSL(2,R) carries a bi-invariant Lorentzian metric of
//! constant negative curvature; its Lie algebra, with the Killing form, is
//! the flat counterpart. This crate provides:
//!
//! - exact linear-algebraic kernels for the group and algebra ([`lie`]),
//! - the pseudo-metric on the projective quadric and its boundary
//!   structure ([`ads`]),
//! - holonomy-style representations of free groups, ping-pong
//!   certificates, and cocycles ([`rep`]),
//! - contraction certificates for equivariant maps and vector fields,
//!   with the fibration and properness machinery built on them
//!   ([`contraction`]),
//! - strip deformations over the arc complex, the associated cocycles,
//!   and the inversion of the infinitesimal strip map ([`strip`]).

pub mod ads;
pub mod contraction;
pub mod error;
pub mod lie;
pub mod rep;
pub mod strip;
pub mod tol;

pub use error::{Error, Result};
