//! Scale-invariant hydrostatics.
//!
//! Polytrope structure computed three independent ways (second-order
//! Lane-Emden integration, the first-order equation between homology
//! invariants, and closed-form approximants), the scaling charge and its
//! non-conservation law, the `n = 3` white-dwarf and Eddington standard
//! models, and a central-field orbit laboratory for the power-law virial
//! and period-amplitude relations.
//!
//! The crate is `no_std` + `alloc`; disable default features to drop `std`.
//! All file formats and the command-line driver live in `emden-lab`.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` is how NaN gets rejected alongside the bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod math;

pub mod approximants;
pub mod astro;
pub mod central_field;
pub mod constants;
pub mod emden;
pub mod error;
pub mod invariant_plane;
pub mod noether;
pub mod ode;
pub mod quad;
pub mod roots;
pub mod series;

pub use emden::{
    EmdenProfile, HomologyInvariants, IntegratorOptions, PhysicalProfile, PolytropeIndex,
    ProfileNode, SurfaceConstants,
};
pub use error::{Error, Result};
