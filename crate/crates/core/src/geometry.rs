//! Small vector helpers shared by every module.

use nalgebra::{Matrix3, Vector3};

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Absolute tolerance for vector equality at unit scale.
pub const VEC_TOL: f64 = 1e-10;

/// Tolerance used when normalizing determinants.
pub const DET_TOL: f64 = 1e-12;

/// Triple product `det[a b c]` with the vectors as columns.
#[inline]
pub fn det3(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    a.dot(&b.cross(c))
}

/// Triple product normalized by the three lengths; `|result| <= 1`.
pub fn normalized_det3(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let scale = a.norm() * b.norm() * c.norm();
    if scale == 0.0 {
        0.0
    } else {
        det3(a, b, c) / scale
    }
}

pub fn is_finite(v: &Vec3) -> bool {
    v.iter().all(|x| x.is_finite())
}

pub(crate) fn to_array(v: &Vec3) -> [f64; 3] {
    [v.x, v.y, v.z]
}

pub(crate) fn from_array(a: [f64; 3]) -> Vec3 {
    Vec3::new(a[0], a[1], a[2])
}

/// The six index pairs `12, 13, 14, 23, 24, 34` in storage order.
pub const PAIRS: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

/// Position of the complementary pair `{s,t}` for the pair at `idx`.
pub const fn complement(idx: usize) -> usize {
    5 - idx
}

/// Storage index of the unordered pair `{i, j}` (1-based labels).
pub fn pair_index(i: usize, j: usize) -> Option<usize> {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    PAIRS.iter().position(|&p| p == (a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_pairs_are_disjoint() {
        for (idx, &(i, j)) in PAIRS.iter().enumerate() {
            let (s, t) = PAIRS[complement(idx)];
            let mut all = [i, j, s, t];
            all.sort();
            assert_eq!(all, [1, 2, 3, 4]);
        }
    }

    #[test]
    fn det3_matches_matrix_determinant() {
        let a = Vec3::new(0.3, -1.2, 2.0);
        let b = Vec3::new(1.1, 0.4, -0.7);
        let c = Vec3::new(-0.5, 0.9, 0.25);
        let m = Mat3::from_columns(&[a, b, c]);
        assert!((det3(&a, &b, &c) - m.determinant()).abs() < 1e-14);
    }

    #[test]
    fn pair_index_is_symmetric() {
        assert_eq!(pair_index(3, 1), Some(1));
        assert_eq!(pair_index(4, 3), Some(5));
        assert_eq!(pair_index(2, 2), None);
    }
}
