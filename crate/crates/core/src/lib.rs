//! Edge densities of convex mosaics.
//!
//! The crate builds 3-dimensional parallelohedra as zonotopes, evaluates the
//! belt-weighted edge functionals `w_m`, certifies the per-type minima and
//! the optimal type as a function of the weights, evaluates lower-bound
//! functionals for mosaics decomposable into planar and linear components,
//! and simulates lattice tilings to measure edge density empirically.

pub mod cli;
pub mod decomposable;
pub mod geometry;
pub mod report;
pub mod sampling;
pub mod simplex_opt;
pub mod tetra;
pub mod tiling;
pub mod wm_min;
pub mod zonotope;

pub use geometry::{Mat3, Vec3};
