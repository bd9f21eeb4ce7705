//! The `(v_i, beta_ij)` parametrization of 3-dimensional parallelohedra.
//!
//! A parallelohedron is written as the Minkowski sum of the six segments
//! `[o, beta_ij (v_i x v_j)]`, where `v_1..v_4` sum to zero and any three of
//! them are linearly independent. The zero pattern of `beta` alone decides
//! the combinatorial type, and the volume is the cubic `volume_f(beta)`,
//! independent of the frame once `det[v1 v2 v3] = 1`.

use serde::{Deserialize, Serialize};

use super::{Segment, ZonotopeError};
use crate::geometry::{det3, is_finite, normalized_det3, Vec3, DET_TOL, PAIRS, VEC_TOL};

/// Four vectors of a centered tetrahedron, normalized so `det[v1 v2 v3] = +1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSet {
    v: [Vec3; 4],
}

impl GeneratorSet {
    /// Validates and normalizes a raw frame.
    ///
    /// The input must already sum to zero (up to `1e-10` relative to its
    /// scale). The returned frame is rescaled so `|V_123| = 1`; if the
    /// determinant was negative, `v1` and `v2` are swapped. `v4` is then set
    /// to `-(v1 + v2 + v3)` so the sum is exactly zero.
    pub fn validate(raw: [Vec3; 4]) -> Result<Self, ZonotopeError> {
        if !raw.iter().all(is_finite) {
            return Err(ZonotopeError::NonFinite);
        }
        let scale = raw.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(ZonotopeError::DegenerateFrame("all vectors are zero".into()));
        }
        let residual = (raw[0] + raw[1] + raw[2] + raw[3]).norm();
        if residual > VEC_TOL * scale.max(1.0) {
            return Err(ZonotopeError::NotCentered { residual });
        }
        for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
            if normalized_det3(&raw[i], &raw[j], &raw[k]).abs() <= DET_TOL {
                return Err(ZonotopeError::DegenerateFrame(format!(
                    "v{} v{} v{} are linearly dependent",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
        }
        let d = det3(&raw[0], &raw[1], &raw[2]);
        let s = d.abs().powf(-1.0 / 3.0);
        let (mut a, mut b) = (raw[0] * s, raw[1] * s);
        if d < 0.0 {
            std::mem::swap(&mut a, &mut b);
        }
        let c = raw[2] * s;
        Ok(Self { v: [a, b, c, -(a + b + c)] })
    }

    /// Builds a frame from `v1, v2, v3`; `v4` is their negated sum.
    pub fn from_three(v1: Vec3, v2: Vec3, v3: Vec3) -> Result<Self, ZonotopeError> {
        Self::validate([v1, v2, v3, -(v1 + v2 + v3)])
    }

    /// The regular centered tetrahedron frame, `v_i` along alternate cube corners.
    pub fn regular() -> Self {
        Self::validate([
            Vec3::new(1.0, 1.0, 1.0),
            Vec3::new(1.0, -1.0, -1.0),
            Vec3::new(-1.0, 1.0, -1.0),
            Vec3::new(-1.0, -1.0, 1.0),
        ])
        .expect("regular frame is valid")
    }

    pub fn vectors(&self) -> &[Vec3; 4] {
        &self.v
    }

    /// `v_i` with 1-based index.
    pub fn v(&self, i: usize) -> Vec3 {
        self.v[i - 1]
    }

    /// `V_ijk = det[v_i v_j v_k]` (1-based indices).
    pub fn signed_volume(&self, i: usize, j: usize, k: usize) -> f64 {
        det3(&self.v(i), &self.v(j), &self.v(k))
    }

    /// Signs of `V_123, V_124, V_134, V_234` implied by `V_123 = +1` and
    /// `V_ijs = -V_ijt`: `(+1, -1, +1, -1)`.
    pub const TRIPLE_SIGNS: [((usize, usize, usize), f64); 4] = [
        ((1, 2, 3), 1.0),
        ((1, 2, 4), -1.0),
        ((1, 3, 4), 1.0),
        ((2, 3, 4), -1.0),
    ];

    /// Cross product `v_i x v_j` for the pair at storage index `idx`.
    pub fn cross(&self, idx: usize) -> Vec3 {
        let (i, j) = PAIRS[idx];
        self.v(i).cross(&self.v(j))
    }
}

/// The six coefficients `beta_12, beta_13, beta_14, beta_23, beta_24, beta_34`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 6]", into = "[f64; 6]")]
pub struct BetaVector([f64; 6]);

impl BetaVector {
    pub fn new(b: [f64; 6]) -> Result<Self, ZonotopeError> {
        if b.iter().all(|x| x.is_finite() && *x >= 0.0) {
            Ok(Self(b))
        } else {
            Err(ZonotopeError::InvalidBeta)
        }
    }

    pub fn values(&self) -> &[f64; 6] {
        &self.0
    }

    /// Value for the pair `{i, j}` (1-based).
    pub fn get(&self, i: usize, j: usize) -> f64 {
        crate::geometry::pair_index(i, j).map_or(0.0, |idx| self.0[idx])
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.map(|x| x * s))
    }

    /// Relabels indices by `perm` (0-based images of labels 1..4), so the
    /// entry for `{i,j}` moves to `{perm(i), perm(j)}`.
    pub fn relabeled(&self, perm: [usize; 4]) -> Self {
        let mut out = [0.0; 6];
        for (idx, &(i, j)) in PAIRS.iter().enumerate() {
            let target = crate::geometry::pair_index(perm[i - 1] + 1, perm[j - 1] + 1)
                .expect("permutation maps pairs to pairs");
            out[target] = self.0[idx];
        }
        Self(out)
    }
}

impl TryFrom<[f64; 6]> for BetaVector {
    type Error = ZonotopeError;
    fn try_from(b: [f64; 6]) -> Result<Self, Self::Error> {
        Self::new(b)
    }
}

impl From<BetaVector> for [f64; 6] {
    fn from(b: BetaVector) -> Self {
        b.0
    }
}

/// Combinatorial type of a 3-dimensional parallelohedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParallelohedronType {
    Cube,
    HexPrism,
    RhombicDodeca,
    ElongatedRhombicDodeca,
    TruncOcta,
    Degenerate,
}

impl ParallelohedronType {
    /// Number `1..=5` of the type, `None` for planar patterns.
    pub fn number(self) -> Option<u8> {
        match self {
            Self::Cube => Some(1),
            Self::HexPrism => Some(2),
            Self::RhombicDodeca => Some(3),
            Self::ElongatedRhombicDodeca => Some(4),
            Self::TruncOcta => Some(5),
            Self::Degenerate => None,
        }
    }

    pub fn from_number(i: u8) -> Option<Self> {
        match i {
            1 => Some(Self::Cube),
            2 => Some(Self::HexPrism),
            3 => Some(Self::RhombicDodeca),
            4 => Some(Self::ElongatedRhombicDodeca),
            5 => Some(Self::TruncOcta),
            _ => None,
        }
    }

    /// Edge count `4 * (#4-belts) + 6 * (#6-belts)`.
    pub fn edge_count(self) -> Option<usize> {
        let (four, six) = self.belt_counts()?;
        Some(4 * four + 6 * six)
    }

    /// `(number of 4-belts, number of 6-belts)`.
    pub fn belt_counts(self) -> Option<(usize, usize)> {
        match self {
            Self::Cube => Some((3, 0)),
            Self::HexPrism => Some((3, 1)),
            Self::RhombicDodeca => Some((0, 4)),
            Self::ElongatedRhombicDodeca => Some((1, 4)),
            Self::TruncOcta => Some((0, 6)),
            Self::Degenerate => None,
        }
    }
}

/// Classifies a coefficient vector by its zero pattern.
pub fn classify_type(b: &BetaVector) -> ParallelohedronType {
    let positive: Vec<(usize, usize)> = PAIRS
        .iter()
        .zip(b.values())
        .filter(|(_, &x)| x > 0.0)
        .map(|(&p, _)| p)
        .collect();
    match positive.len() {
        6 => ParallelohedronType::TruncOcta,
        5 => ParallelohedronType::ElongatedRhombicDodeca,
        4 => {
            let zeros: Vec<(usize, usize)> =
                PAIRS.iter().copied().filter(|p| !positive.contains(p)).collect();
            let (a, b) = (zeros[0], zeros[1]);
            let share = a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1;
            if share {
                ParallelohedronType::HexPrism
            } else {
                ParallelohedronType::RhombicDodeca
            }
        }
        3 => {
            let common = (1..=4).any(|s| positive.iter().all(|&(i, j)| i == s || j == s));
            if common {
                ParallelohedronType::Degenerate
            } else {
                ParallelohedronType::Cube
            }
        }
        _ => ParallelohedronType::Degenerate,
    }
}

/// The 16-term cubic `f(tau_12, ..., tau_34)` giving the volume of the body.
pub fn volume_f(t: &[f64; 6]) -> f64 {
    let [t12, t13, t14, t23, t24, t34] = *t;
    t12 * t13 * t23
        + t12 * t14 * t24
        + t13 * t14 * t34
        + t23 * t24 * t34
        + (t12 + t34) * (t13 * t24 + t14 * t23)
        + (t13 + t24) * (t12 * t34 + t14 * t23)
        + (t14 + t23) * (t12 * t34 + t13 * t24)
}

/// The six segments `beta_ij (v_i x v_j)`, zero-length ones included.
pub fn segments_from_parameters(g: &GeneratorSet, b: &BetaVector) -> Vec<Segment> {
    PAIRS
        .iter()
        .enumerate()
        .map(|(idx, &pair)| Segment {
            direction: g.cross(idx) * b.values()[idx],
            index: idx,
            pair: Some(pair),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Mat3;

    fn beta(b: [f64; 6]) -> BetaVector {
        BetaVector::new(b).unwrap()
    }

    #[test]
    fn regular_frame_is_accepted_unchanged() {
        // regular tetrahedron scaled so that V_123 = 1
        let raw = [
            Vec3::new(1.0, 1.0, 1.0),
            Vec3::new(1.0, -1.0, -1.0),
            Vec3::new(-1.0, 1.0, -1.0),
            Vec3::new(-1.0, -1.0, 1.0),
        ];
        let d = det3(&raw[0], &raw[1], &raw[2]);
        assert!(d > 0.0);
        let s = d.powf(-1.0 / 3.0);
        let raw = raw.map(|v| v * s);
        let g = GeneratorSet::validate(raw).unwrap();
        for i in 0..4 {
            assert!((g.vectors()[i] - raw[i]).norm() < 1e-14);
        }
        assert!((g.signed_volume(1, 2, 3) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uncentered_frame_is_rejected() {
        let (v1, v2, v3) = (Vec3::new(1.0, 0.2, 0.0), Vec3::new(0.0, 1.0, 0.3), Vec3::new(0.1, 0.0, 1.0));
        let u = Vec3::new(0.0, 0.0, 1.0);
        let v4 = -(v1 + v2 + v3) + u * 1e-6;
        assert!(matches!(
            GeneratorSet::validate([v1, v2, v3, v4]),
            Err(ZonotopeError::NotCentered { .. })
        ));
    }

    #[test]
    fn negative_orientation_is_swapped() {
        let g = GeneratorSet::regular();
        let [a, b, c, d] = *g.vectors();
        // V_213 = -1
        let flipped = GeneratorSet::validate([b, a, c, d]).unwrap();
        let v = flipped.vectors();
        let direct = Mat3::from_columns(&[v[0], v[1], v[2]]).determinant();
        assert!((direct - 1.0).abs() < 1e-12);
        assert!((v[0] - a).norm() < 1e-14 && (v[1] - b).norm() < 1e-14);
    }

    #[test]
    fn dependent_triple_is_rejected() {
        let v1 = Vec3::new(1.0, 0.0, 0.0);
        let v2 = Vec3::new(0.0, 1.0, 0.0);
        let v3 = Vec3::new(1.0, 1.0, 0.0);
        assert!(matches!(
            GeneratorSet::from_three(v1, v2, v3),
            Err(ZonotopeError::DegenerateFrame(_))
        ));
    }

    #[test]
    fn triple_signs_follow_from_v123() {
        let g = GeneratorSet::from_three(
            Vec3::new(0.9, 0.1, -0.3),
            Vec3::new(-0.2, 1.3, 0.4),
            Vec3::new(0.5, -0.6, 1.1),
        )
        .unwrap();
        for ((i, j, k), sign) in GeneratorSet::TRIPLE_SIGNS {
            assert!((g.signed_volume(i, j, k) - sign).abs() < 1e-12, "V{i}{j}{k}");
        }
    }

    #[test]
    fn classify_examples() {
        use ParallelohedronType::*;
        assert_eq!(classify_type(&beta([1.0; 6])), TruncOcta);
        assert_eq!(classify_type(&beta([1., 1., 1., 1., 1., 0.])), ElongatedRhombicDodeca);
        assert_eq!(classify_type(&beta([0., 1., 1., 1., 1., 0.])), RhombicDodeca);
        assert_eq!(classify_type(&beta([1., 0., 0., 1., 1., 1.])), HexPrism);
        assert_eq!(classify_type(&beta([1., 1., 0., 1., 0., 0.])), Cube);
        assert_eq!(classify_type(&beta([1., 1., 1., 0., 0., 0.])), Degenerate);
        assert_eq!(classify_type(&beta([1., 1., 0., 0., 0., 0.])), Degenerate);
        assert_eq!(classify_type(&beta([0.0; 6])), Degenerate);
    }

    #[test]
    fn volume_f_examples() {
        assert_eq!(volume_f(&[1., 1., 1., 0., 0., 0.]), 0.0);
        assert_eq!(volume_f(&[1., 1., 0., 1., 0., 0.]), 1.0);
        assert_eq!(volume_f(&[1.0; 6]), 16.0);
    }

    #[test]
    fn volume_f_term_count_matches_expansion() {
        // Expanding the grouped products yields 16 distinct monomials, each
        // with coefficient 1: counting at tau = 1 gives 16, and every
        // single-variable derivative at tau = 1 equals the number of terms
        // containing that variable (8 each, by symmetry of the 16 terms).
        let h = 1e-6;
        for idx in 0..6 {
            let mut t = [1.0; 6];
            t[idx] += h;
            let d = (volume_f(&t) - 16.0) / h;
            assert!((d - 8.0).abs() < 1e-4, "derivative {idx}: {d}");
        }
    }

    #[test]
    fn segments_match_cross_products() {
        let g = GeneratorSet::regular();
        let segs = segments_from_parameters(&g, &beta([1.0; 6]));
        assert_eq!(segs.len(), 6);
        for (idx, s) in segs.iter().enumerate() {
            let (i, j) = PAIRS[idx];
            assert!((s.direction - g.v(i).cross(&g.v(j))).norm() < 1e-14);
        }
        // regular frame: cross products of a regular tetrahedron point along
        // the six face diagonals of a cube, pairwise at 60 or 90 degrees
        for a in 0..6 {
            for b in (a + 1)..6 {
                let (u, w) = (segs[a].direction, segs[b].direction);
                let c = (u.dot(&w) / (u.norm() * w.norm())).abs();
                assert!(c.abs() < 1e-12 || (c - 0.5).abs() < 1e-12, "cos = {c}");
            }
        }
        let zero = segments_from_parameters(&g, &beta([0.0; 6]));
        assert!(zero.iter().all(|s| s.direction.norm() == 0.0));
    }

    #[test]
    fn three_segment_pattern_spans_space() {
        let g = GeneratorSet::from_three(Vec3::x(), Vec3::y(), Vec3::z()).unwrap();
        let segs = segments_from_parameters(&g, &beta([1., 1., 0., 1., 0., 0.]));
        let nonzero: Vec<_> = segs.iter().filter(|s| s.direction.norm() > 0.0).collect();
        assert_eq!(nonzero.len(), 3);
        assert!(det3(&nonzero[0].direction, &nonzero[1].direction, &nonzero[2].direction).abs() > 0.1);
    }

    #[test]
    fn relabeling_preserves_type() {
        let perms = permutations4();
        let samples = [
            [1., 1., 1., 1., 1., 1.],
            [1., 1., 1., 1., 1., 0.],
            [0., 1., 1., 1., 1., 0.],
            [1., 0., 0., 1., 1., 1.],
            [1., 1., 0., 1., 0., 0.],
            [1., 1., 1., 0., 0., 0.],
            [0., 0., 1., 1., 0., 1.],
        ];
        for s in samples {
            let b = beta(s);
            let t = classify_type(&b);
            for p in &perms {
                assert_eq!(classify_type(&b.relabeled(*p)), t);
            }
        }
    }

    pub(crate) fn permutations4() -> Vec<[usize; 4]> {
        let mut out = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let p = [a, b, c, d];
                        let mut s = p;
                        s.sort();
                        if s == [0, 1, 2, 3] {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }
}
