//! Canonical representatives of the five combinatorial types.

use super::{Zonotope, ZonotopeError};
use crate::geometry::Vec3;

impl Zonotope {
    /// Cube of the given edge length.
    pub fn cube(edge: f64) -> Result<Self, ZonotopeError> {
        Self::from_vectors(&[Vec3::x() * edge, Vec3::y() * edge, Vec3::z() * edge])
    }

    /// Right prism over a regular hexagon with base edge `a`, height `b`.
    pub fn hex_prism(a: f64, b: f64) -> Result<Self, ZonotopeError> {
        let dir = |deg: f64| {
            let t = deg.to_radians();
            Vec3::new(t.cos(), t.sin(), 0.0) * a
        };
        Self::from_vectors(&[dir(0.0), dir(60.0), dir(120.0), Vec3::z() * b])
    }

    /// Kepler's rhombic dodecahedron, generated by the four cube diagonals.
    pub fn rhombic_dodecahedron(edge: f64) -> Result<Self, ZonotopeError> {
        Self::from_vectors(&cube_diagonals(edge))
    }

    /// Rhombic dodecahedron stretched along a 4-fold axis by `elongation`.
    pub fn elongated_rhombic_dodecahedron(edge: f64, elongation: f64) -> Result<Self, ZonotopeError> {
        let mut dirs = cube_diagonals(edge).to_vec();
        dirs.push(Vec3::z() * elongation);
        Self::from_vectors(&dirs)
    }

    /// Regular truncated octahedron, generated by the six segments joining
    /// midpoints of opposite edges of a cube.
    pub fn truncated_octahedron(edge: f64) -> Result<Self, ZonotopeError> {
        let s = edge / 2f64.sqrt();
        Self::from_vectors(&[
            Vec3::new(1.0, 1.0, 0.0) * s,
            Vec3::new(1.0, -1.0, 0.0) * s,
            Vec3::new(1.0, 0.0, 1.0) * s,
            Vec3::new(1.0, 0.0, -1.0) * s,
            Vec3::new(0.0, 1.0, 1.0) * s,
            Vec3::new(0.0, 1.0, -1.0) * s,
        ])
    }
}

fn cube_diagonals(edge: f64) -> [Vec3; 4] {
    let s = edge / 3f64.sqrt();
    [
        Vec3::new(1.0, 1.0, 1.0) * s,
        Vec3::new(1.0, 1.0, -1.0) * s,
        Vec3::new(1.0, -1.0, 1.0) * s,
        Vec3::new(-1.0, 1.0, 1.0) * s,
    ]
}
