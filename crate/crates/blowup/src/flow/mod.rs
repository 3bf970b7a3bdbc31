//! Integration along complex-time paths, winding numbers and leaf continuation.

pub mod dopri;
mod integrate;
mod leaf;
mod path;
mod winding;

pub use integrate::{
    fmt17, integrate_path, IntegrationConfig, PathTime, Sample, Target, TerminationReason, Trajectory,
    DIVERGENCE,
};
pub use leaf::{continue_leaf, continue_leaf_with, LeafContinuation, TANGENCY};
pub use path::{Segment, TimePath, JOIN_TOL};
pub use winding::{accumulated_turns, winding_number, winding_number_with_gap, CLOSED_TOL};
