//! Seeded random generators for frames, tetrahedra and coefficient vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{normalized_det3, Vec3};
use crate::zonotope::{BetaVector, GeneratorSet};

/// Smallest normalized triple product accepted for a random frame.
pub const MIN_FRAME_CONDITION: f64 = 0.05;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for item `index` of a run seeded with `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

pub fn uniform_vec<R: Rng>(rng: &mut R) -> Vec3 {
    Vec3::new(
        rng.random_range(-1.0..=1.0),
        rng.random_range(-1.0..=1.0),
        rng.random_range(-1.0..=1.0),
    )
}

/// Four vertices i.i.d. uniform in `[-1, 1]^3`, translated so they sum to zero.
pub fn centered_vertices<R: Rng>(rng: &mut R) -> [Vec3; 4] {
    let mut p = [uniform_vec(rng), uniform_vec(rng), uniform_vec(rng), uniform_vec(rng)];
    let c = (p[0] + p[1] + p[2] + p[3]) / 4.0;
    for v in &mut p {
        *v -= c;
    }
    p
}

/// Smallest `|det|` over the four triples, normalized by the lengths.
pub fn frame_condition(v: &[Vec3; 4]) -> f64 {
    [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
        .iter()
        .map(|&(i, j, k)| normalized_det3(&v[i], &v[j], &v[k]).abs())
        .fold(f64::INFINITY, f64::min)
}

/// A normalized frame from a random centered tetrahedron, rejecting frames
/// with a triple product below [`MIN_FRAME_CONDITION`].
pub fn random_frame<R: Rng>(rng: &mut R) -> GeneratorSet {
    loop {
        let p = centered_vertices(rng);
        if frame_condition(&p) < MIN_FRAME_CONDITION {
            continue;
        }
        if let Ok(g) = GeneratorSet::validate(p) {
            return g;
        }
    }
}

/// Coefficients i.i.d. uniform in `(0, 1]`, each set to zero with
/// probability `p_zero`.
pub fn random_beta<R: Rng>(rng: &mut R, p_zero: f64) -> BetaVector {
    let mut b = [0.0; 6];
    for x in &mut b {
        *x = if rng.random_bool(p_zero) { 0.0 } else { 1.0 - rng.random::<f64>() };
    }
    BetaVector::new(b).expect("nonnegative")
}

/// All six coefficients positive: a type (5) pattern.
pub fn random_positive_beta<R: Rng>(rng: &mut R) -> BetaVector {
    random_beta(rng, 0.0)
}

/// Random rotation matrix (uniform quaternion).
pub fn random_rotation<R: Rng>(rng: &mut R) -> crate::geometry::Mat3 {
    let q = loop {
        let q: nalgebra::Vector4<f64> = nalgebra::Vector4::new(
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        );
        let n = q.norm();
        if n > 0.1 && n <= 1.0 {
            break q / n;
        }
    };
    let uq = nalgebra::UnitQuaternion::from_quaternion(nalgebra::Quaternion::new(q[0], q[1], q[2], q[3]));
    *uq.to_rotation_matrix().matrix()
}
