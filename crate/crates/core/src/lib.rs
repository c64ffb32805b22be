//! Exact blow-up calculus, Wahl-chain arithmetic and rational blow-down
//! homology for rational surfaces.

pub mod bigjson;
pub mod hj;
pub mod surface;
pub mod zlinalg;
pub mod blowdown;
pub mod construction;
pub mod format;
pub mod cli;
