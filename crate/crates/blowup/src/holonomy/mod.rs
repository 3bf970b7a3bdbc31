//! Holonomy multipliers, Masuda detours around blow-up times and blow-up stars.

mod detour;
mod multiplier;

pub use detour::{
    approach_blowup, blowup_star, fit_blowup_time, BlowupFit, masuda_detour, masuda_detour_with, Branch, BranchKind, DetourReport, Windings,
    DEFAULT_CLOSURE, FIT_SAMPLES,
};
pub use multiplier::{
    default_fiber_radii, has_invariant_fiber, holonomy_iterates, holonomy_multiplier, holonomy_multiplier_with,
    richardson, HolonomyEstimate, HolonomyOptions,
};
