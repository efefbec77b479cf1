//! Singular-integral operators on lifted boundaries: complex analysis on
//! closed curves and quaternionic analysis on closed surfaces.

pub mod cmatrix;
pub mod curve;
pub mod index;
pub mod qmatrix;
pub mod quaternion;
pub mod surface;
