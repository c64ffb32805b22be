//! The elliptic-fibration construction: pencil incidences, the `Z` blow-up
//! centers, and end-to-end verification of the two chains.

pub mod pencil;
pub mod centers;
pub mod verify;
