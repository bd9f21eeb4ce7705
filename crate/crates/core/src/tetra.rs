//! Centered tetrahedra and the quadratic identities
//! `f(gamma) = 9 V^2 / 4` and `sum zeta = 27 V^2 / 4`.

use thiserror::Error;

use crate::geometry::{det3, is_finite, Vec3, PAIRS};
use crate::zonotope::{volume_f, GeneratorSet, ZonotopeError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TetraError {
    #[error("non-finite vertex coordinates")]
    NonFinite,
    #[error("tetrahedron has zero volume")]
    ZeroVolume,
}

/// Tetrahedron with centroid at the origin and `det[p1 p2 p3] > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenteredTetrahedron {
    p: [Vec3; 4],
}

impl CenteredTetrahedron {
    /// Translates the vertices so they sum to zero, then swaps `p1` and `p2`
    /// if `det[p1 p2 p3] < 0`.
    pub fn new(vertices: [Vec3; 4]) -> Result<Self, TetraError> {
        if !vertices.iter().all(is_finite) {
            return Err(TetraError::NonFinite);
        }
        let c = (vertices[0] + vertices[1] + vertices[2] + vertices[3]) / 4.0;
        let mut p = vertices.map(|v| v - c);
        let d = det3(&p[0], &p[1], &p[2]);
        if d == 0.0 || !d.is_finite() {
            return Err(TetraError::ZeroVolume);
        }
        if d < 0.0 {
            p.swap(0, 1);
        }
        Ok(Self { p })
    }

    /// Vertices of the frame, which is a centered tetrahedron of volume 2/3.
    pub fn from_frame(g: &GeneratorSet) -> Self {
        Self { p: *g.vectors() }
    }

    pub fn vertices(&self) -> &[Vec3; 4] {
        &self.p
    }

    /// `p_i` with 1-based index.
    pub fn p(&self, i: usize) -> Vec3 {
        self.p[i - 1]
    }

    /// `det[p1 p2 p3]`; for a centered tetrahedron the volume is `2/3` of it.
    pub fn det123(&self) -> f64 {
        det3(&self.p[0], &self.p[1], &self.p[2])
    }

    pub fn volume(&self) -> f64 {
        2.0 / 3.0 * self.det123()
    }

    pub fn scaled_to_volume(&self, v: f64) -> Self {
        let s = (v / self.volume()).cbrt();
        Self { p: self.p.map(|x| x * s) }
    }

    pub fn rotated(&self, r: &crate::geometry::Mat3) -> Self {
        Self { p: self.p.map(|x| r * x) }
    }

    /// The frame `v_i = p_i` after normalizing to volume 2/3.
    pub fn to_frame(&self) -> Result<GeneratorSet, ZonotopeError> {
        GeneratorSet::validate(self.scaled_to_volume(2.0 / 3.0).p)
    }

    pub fn gamma_zeta(&self) -> GammaZeta {
        let mut gamma = [0.0; 6];
        let mut zeta = [0.0; 6];
        for (idx, &(i, j)) in PAIRS.iter().enumerate() {
            let (s, t) = PAIRS[crate::geometry::complement(idx)];
            gamma[idx] = -self.p(s).dot(&self.p(t));
            zeta[idx] = gamma[idx] * self.p(i).cross(&self.p(j)).norm_squared();
        }
        GammaZeta { gamma, zeta }
    }

    /// `(f(gamma), sum zeta)`, to be compared with `9V^2/4` and `27V^2/4`.
    pub fn verify_identities(&self) -> (f64, f64) {
        let gz = self.gamma_zeta();
        (volume_f(&gz.gamma), gz.zeta.iter().sum())
    }

    /// Largest residual of the two identities, scaled by `max(1, V^2)`.
    pub fn identity_residual(&self) -> f64 {
        let (f, z) = self.verify_identities();
        let v2 = self.volume().powi(2);
        let scale = v2.max(1.0);
        ((f - 2.25 * v2).abs() / scale).max((z - 6.75 * v2).abs() / scale)
    }
}

/// `gamma_ij = -<p_s, p_t>` and `zeta_ij = gamma_ij |p_i x p_j|^2` over
/// complementary pairs `{i,j,s,t} = {1,2,3,4}`, stored in pair order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaZeta {
    pub gamma: [f64; 6],
    pub zeta: [f64; 6],
}
