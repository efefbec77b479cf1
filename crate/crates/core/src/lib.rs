//! Lifting open sets to one higher dimension via the distance function,
//! with topology checks and singular-integral operators on the resulting
//! boundaries.

pub mod distfield;
pub mod grid;
pub mod io;
pub mod lift;
pub mod ops;
pub mod mesh;
pub mod region;
pub mod topo;
