//! Lane-Emden structure: the Emden function, its surface and core, the
//! homology invariants along it, and the map to physical units.

mod dimensional;
mod index;
mod invariants;
mod profile;
mod surface;

pub use dimensional::{dimensionalize, mass_radius, mass_radius_with, MassOrRadius, PhysicalProfile};
pub use index::PolytropeIndex;
pub use invariants::{invariants_at, HomologyInvariants};
pub use profile::{
    integrate_profile, taylor_start, EmdenProfile, IntegratorMeta, IntegratorOptions, ProfileNode,
    TAYLOR_MAX_XI,
};
pub use surface::{core_radius, find_surface, CoreRadius, SurfaceConstants};
