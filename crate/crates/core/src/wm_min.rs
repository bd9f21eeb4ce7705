//! Minima of `w_m` over unit-volume parallelohedra of each type, the winner
//! as a function of `alpha_4 / alpha_6`, surface isotropic position and the
//! stationary coefficients on the type (4) stratum.

use nalgebra::SymmetricEigen;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{Mat3, Vec3, PAIRS};
use crate::sampling;
use crate::tetra::{CenteredTetrahedron, TetraError};
use crate::zonotope::{volume_f, BetaVector, ParallelohedronType, WeightPair, Zonotope, ZonotopeError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WmError {
    #[error("type index must be 1..=5, got {0}")]
    UnknownType(u8),
    #[error("invalid facet measure: {0}")]
    InvalidMeasure(String),
    #[error("no isotropic position after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("<v1, v2> = {dot:e} is not zero")]
    NotOrthogonal { dot: f64 },
    #[error("gamma_{}{} = {gamma:e} is negative", .pair.0, .pair.1)]
    NegativeBeta { pair: (usize, usize), gamma: f64 },
    #[error(transparent)]
    Zonotope(#[from] ZonotopeError),
    #[error(transparent)]
    Tetra(#[from] TetraError),
}

/// How a [`TypeMinimum`] value relates to the true minimum of the type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Exact,
    LowerBound,
    /// Every body of the type is strictly above the type (5) minimum, which
    /// is the reported value.
    ExceedsTypeFive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum OptimalShape {
    Cube { edge: f64 },
    HexPrism { base_edge: f64, lateral_edge: f64 },
    RhombicDodeca { edge: f64 },
    TruncOcta { edge: f64 },
}

impl OptimalShape {
    pub fn build(&self) -> Result<Zonotope, ZonotopeError> {
        match *self {
            OptimalShape::Cube { edge } => Zonotope::cube(edge),
            OptimalShape::HexPrism { base_edge, lateral_edge } => Zonotope::hex_prism(base_edge, lateral_edge),
            OptimalShape::RhombicDodeca { edge } => Zonotope::rhombic_dodecahedron(edge),
            OptimalShape::TruncOcta { edge } => Zonotope::truncated_octahedron(edge),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TypeMinimum {
    pub type_tag: ParallelohedronType,
    pub value: f64,
    pub bound: BoundKind,
    pub optimal_shape: Option<OptimalShape>,
}

impl TypeMinimum {
    pub fn is_exact(&self) -> bool {
        self.bound == BoundKind::Exact
    }
}

pub fn w1(m: &WeightPair) -> f64 {
    3.0 * m.alpha4
}

pub fn w2(m: &WeightPair) -> f64 {
    3f64.powf(7.0 / 6.0) / 2f64.cbrt() * m.alpha4.powf(2.0 / 3.0) * m.alpha6.cbrt()
}

pub fn w3(m: &WeightPair) -> f64 {
    2f64.powf(2.0 / 3.0) * 3f64.sqrt() * m.alpha6
}

/// Lower bound for type (4) when `alpha_4 <= alpha_6`.
pub fn w4_bound(m: &WeightPair) -> f64 {
    3.0 * m.alpha4.cbrt() * (4.0 * m.alpha6 * m.alpha6 - m.alpha4 * m.alpha4).cbrt() / 2f64.powf(2.0 / 3.0)
}

pub fn w5(m: &WeightPair) -> f64 {
    3.0 * m.alpha6 / 2f64.powf(1.0 / 6.0)
}

pub fn type_minimum(i: u8, m: &WeightPair) -> Result<TypeMinimum, WmError> {
    let t = ParallelohedronType::from_number(i).ok_or(WmError::UnknownType(i))?;
    let exact = |value, shape| TypeMinimum { type_tag: t, value, bound: BoundKind::Exact, optimal_shape: Some(shape) };
    Ok(match i {
        1 => exact(w1(m), OptimalShape::Cube { edge: 1.0 }),
        2 => exact(
            w2(m),
            OptimalShape::HexPrism {
                base_edge: 2f64.powf(2.0 / 3.0) * m.alpha6.cbrt() / (3f64.powf(5.0 / 6.0) * m.alpha4.cbrt()),
                lateral_edge: 3f64.powf(1.0 / 6.0) * m.alpha4.powf(2.0 / 3.0)
                    / (2f64.cbrt() * m.alpha6.powf(2.0 / 3.0)),
            },
        ),
        3 => exact(w3(m), OptimalShape::RhombicDodeca { edge: 3f64.sqrt() / 2f64.powf(4.0 / 3.0) }),
        4 if m.alpha4 <= m.alpha6 => {
            TypeMinimum { type_tag: t, value: w4_bound(m), bound: BoundKind::LowerBound, optimal_shape: None }
        }
        4 => TypeMinimum { type_tag: t, value: w5(m), bound: BoundKind::ExceedsTypeFive, optimal_shape: None },
        _ => exact(w5(m), OptimalShape::TruncOcta { edge: 2f64.powf(-7.0 / 6.0) }),
    })
}

pub fn all_type_minima(m: &WeightPair) -> Vec<TypeMinimum> {
    (1..=5).map(|i| type_minimum(i, m).expect("valid type index")).collect()
}

/// Winner below which the cube is optimal, as a ratio `alpha_4 / alpha_6`.
pub fn cube_prism_threshold() -> f64 {
    3f64.sqrt() / 2.0
}

pub fn prism_octa_threshold() -> f64 {
    (2.0f64 / 3.0).powf(0.25)
}

/// Relative tolerance on `alpha_4 / alpha_6` for reporting a tie.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Winner {
    Cube,
    HexPrism,
    TruncOcta,
    TieCubePrism,
    TiePrismOcta,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalAnswer {
    pub winner: Winner,
    pub value: f64,
}

pub fn classify_optimal(m: &WeightPair) -> OptimalAnswer {
    let r = m.alpha4 / m.alpha6;
    let (t1, t2) = (cube_prism_threshold(), prism_octa_threshold());
    let (winner, value) = if (r - t1).abs() <= TIE_TOL * t1 {
        (Winner::TieCubePrism, w1(m).min(w2(m)))
    } else if r < t1 {
        (Winner::Cube, w1(m))
    } else if (r - t2).abs() <= TIE_TOL * t2 {
        (Winner::TiePrismOcta, w2(m).min(w5(m)))
    } else if r < t2 {
        (Winner::HexPrism, w2(m))
    } else {
        (Winner::TruncOcta, w5(m))
    };
    OptimalAnswer { winner, value }
}

/// Surface area measure: outer unit normals with facet areas.
#[derive(Debug, Clone, PartialEq)]
pub struct FacetMeasure {
    facets: Vec<(Vec3, f64)>,
}

impl FacetMeasure {
    pub fn new(facets: Vec<(Vec3, f64)>) -> Result<Self, WmError> {
        if facets.iter().any(|(u, a)| !(a.is_finite() && *a > 0.0) || !u.iter().all(|x| x.is_finite())) {
            return Err(WmError::InvalidMeasure("areas must be positive and finite".into()));
        }
        let facets: Vec<(Vec3, f64)> = facets
            .into_iter()
            .map(|(u, a)| {
                let n = u.norm();
                (u / n, a)
            })
            .collect();
        let total: f64 = facets.iter().map(|f| f.1).sum();
        let closure: Vec3 = facets.iter().map(|(u, a)| u * *a).sum();
        if closure.norm() > 1e-9 * total {
            return Err(WmError::InvalidMeasure(format!("sum F_i u_i = {:e}", closure.norm())));
        }
        let gram: Mat3 = facets.iter().map(|(u, a)| u * u.transpose() * *a).sum();
        let eig = SymmetricEigen::new(gram).eigenvalues;
        if eig.min() <= 1e-12 * eig.max() {
            return Err(WmError::InvalidMeasure("normals do not span 3-space".into()));
        }
        Ok(Self { facets })
    }

    pub fn from_zonotope(z: &Zonotope) -> Result<Self, WmError> {
        Self::new(z.facets().iter().map(|f| (f.normal, f.area)).collect())
    }

    pub fn facets(&self) -> &[(Vec3, f64)] {
        &self.facets
    }

    pub fn surface(&self) -> f64 {
        self.facets.iter().map(|f| f.1).sum()
    }

    /// `(3 / surf) sum F_i u_i u_i^T`.
    pub fn isotropy_matrix(&self) -> Mat3 {
        let s: Mat3 = self.facets.iter().map(|(u, a)| u * u.transpose() * *a).sum();
        s * (3.0 / self.surface())
    }

    pub fn isotropy_residual(&self) -> f64 {
        (self.isotropy_matrix() - Mat3::identity()).abs().max()
    }

    /// Facet measure of the image of the body under `a`.
    pub fn transformed(&self, a: &Mat3) -> Result<Self, WmError> {
        let det = a.determinant();
        let inv_t = a
            .try_inverse()
            .ok_or_else(|| WmError::InvalidMeasure("singular map".into()))?
            .transpose();
        let facets = self
            .facets
            .iter()
            .map(|(u, f)| {
                let v = inv_t * u * (f * det.abs());
                let n = v.norm();
                (v / n, n)
            })
            .collect();
        Ok(Self { facets })
    }
}

pub const ISOTROPY_MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropicPosition {
    /// Determinant-one map taking the body to isotropic position.
    pub map: Mat3,
    pub iterations: usize,
    pub residual: f64,
}

fn sym_power(m: &Mat3, p: f64) -> Mat3 {
    let e = SymmetricEigen::new(*m);
    let d = Mat3::from_diagonal(&e.eigenvalues.map(|x| x.powf(p)));
    e.eigenvectors * d * e.eigenvectors.transpose()
}

fn unit_det(m: Mat3) -> Mat3 {
    m / m.determinant().cbrt()
}

/// Fixed-point iteration: the body is mapped by `M^(1/2)` normalized to
/// determinant one until `|M - Id|_max <= tol`.
pub fn isotropic_position(fm: &FacetMeasure, tol: f64) -> Result<IsotropicPosition, WmError> {
    let mut a = Mat3::identity();
    let mut current = fm.clone();
    for it in 0..=ISOTROPY_MAX_ITERATIONS {
        let residual = current.isotropy_residual();
        if residual <= tol {
            return Ok(IsotropicPosition { map: a, iterations: it, residual });
        }
        if it == ISOTROPY_MAX_ITERATIONS {
            return Err(WmError::NoConvergence { iterations: it, residual });
        }
        let step = unit_det(sym_power(&current.isotropy_matrix(), 0.5));
        a = unit_det(step * a);
        current = fm.transformed(&a)?;
    }
    unreachable!()
}

/// Orthogonality tolerance for `<v1, v2>` in [`stationary_betas_type4`].
pub const ORTHO_TOL: f64 = 1e-8;

/// `beta_ij = -<v_s, v_t> |v_i x v_j| / (3 alpha)` with `alpha = alpha_4` for
/// the pair 12 and `alpha_6` for 13, 14, 23, 24; `beta_34 = 0`. The
/// tetrahedron is first rescaled to volume 2/3, and the result is defined up
/// to a common factor.
pub fn stationary_betas_type4(t: &CenteredTetrahedron, m: &WeightPair) -> Result<BetaVector, WmError> {
    let t = t.scaled_to_volume(2.0 / 3.0);
    let dot = t.p(1).dot(&t.p(2));
    if dot.abs() > ORTHO_TOL {
        return Err(WmError::NotOrthogonal { dot });
    }
    let gz = t.gamma_zeta();
    let mut b = [0.0; 6];
    for (idx, &(i, j)) in PAIRS.iter().enumerate().take(5) {
        let gamma = gz.gamma[idx];
        if gamma < 0.0 {
            return Err(WmError::NegativeBeta { pair: (i, j), gamma });
        }
        let alpha = if idx == 0 { m.alpha4 } else { m.alpha6 };
        b[idx] = gamma * t.p(i).cross(&t.p(j)).norm() / (3.0 * alpha);
    }
    Ok(BetaVector::new(b)?)
}

/// `w_m(P) / vol(P)^(1/3)` read off the belt structure.
pub fn normalized_functional(z: &Zonotope, m: &WeightPair) -> Result<f64, ZonotopeError> {
    Ok(z.weighted_edge_functional(m)? / z.volume().cbrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Type4Sweep {
    pub samples: usize,
    pub min_observed: f64,
    pub argmin_sample: usize,
    pub bound: f64,
    pub bound_kind: BoundKind,
    /// Draws discarded because the body was not of type (4).
    pub rejected: usize,
}

impl Type4Sweep {
    pub fn pass(&self, tol: f64) -> bool {
        match self.bound_kind {
            BoundKind::ExceedsTypeFive => self.min_observed > self.bound,
            _ => self.min_observed >= self.bound - tol,
        }
    }
}

/// One random type (4) body: centered tetrahedron with vertices uniform in
/// `[-1, 1]^3`, coefficients uniform in `(0, 1]` with `beta_34 = 0`.
/// Returns `w_m / vol^(1/3)` and the number of rejected draws.
pub fn type4_sample(m: &WeightPair, seed: u64, index: u64) -> (f64, usize) {
    let mut rng = sampling::stream(seed, index);
    let mut rejected = 0;
    loop {
        let body = CenteredTetrahedron::new(sampling::centered_vertices(&mut rng))
            .ok()
            .and_then(|t| t.to_frame().ok())
            .and_then(|g| {
                let mut b = *sampling::random_positive_beta(&mut rng).values();
                b[5] = 0.0;
                let b = BetaVector::new(b).ok()?;
                let z = Zonotope::from_parameters(&g, &b).ok()?;
                (z.combinatorial_type().ok()? == ParallelohedronType::ElongatedRhombicDodeca)
                    .then(|| z.weighted_edge_functional(m).ok().map(|w| w / volume_f(b.values()).cbrt()))
                    .flatten()
            });
        match body {
            Some(w) => return (w, rejected),
            None => rejected += 1,
        }
    }
}

pub fn type4_sweep(m: &WeightPair, samples: usize, seed: u64) -> Type4Sweep {
    let results: Vec<(f64, usize)> =
        (0..samples as u64).into_par_iter().map(|i| type4_sample(m, seed, i)).collect();
    let (argmin_sample, min_observed) = results
        .iter()
        .enumerate()
        .map(|(i, r)| (i, r.0))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    let t4 = type_minimum(4, m).expect("type 4");
    Type4Sweep {
        samples,
        min_observed,
        argmin_sample,
        bound: t4.value,
        bound_kind: t4.bound,
        rejected: results.iter().map(|r| r.1).sum(),
    }
}

/// Rows `alpha4,w1,w2,w4,w5` at `alpha_6 = 1` for `alpha_4` in
/// `(0, alpha4_max]` with the given step.
pub fn fig2_csv(step: f64, alpha4_max: f64) -> String {
    let mut out = String::from("alpha4,w1,w2,w4,w5\n");
    let n = (alpha4_max / step).round() as usize;
    for k in 1..=n {
        let a4 = k as f64 * step;
        let m = WeightPair::new(1.0, a4);
        let w4 = type_minimum(4, &m).expect("type 4").value;
        out.push_str(&format!("{a4},{},{},{},{}\n", w1(&m), w2(&m), w4, w5(&m)));
    }
    out
}

/// Rows `type,value,bound,shape` for the five types.
pub fn table1_csv(m: &WeightPair) -> String {
    let mut out = String::from("type,value,bound,shape\n");
    for t in all_type_minima(m) {
        let bound = match t.bound {
            BoundKind::Exact => "exact",
            BoundKind::LowerBound => "lower_bound",
            BoundKind::ExceedsTypeFive => "exceeds_type5",
        };
        let shape = match t.optimal_shape {
            Some(OptimalShape::Cube { edge }) => format!("cube edge={edge}"),
            Some(OptimalShape::HexPrism { base_edge, lateral_edge }) => {
                format!("hexagonal prism base={base_edge} lateral={lateral_edge}")
            }
            Some(OptimalShape::RhombicDodeca { edge }) => format!("rhombic dodecahedron edge={edge}"),
            Some(OptimalShape::TruncOcta { edge }) => format!("truncated octahedron edge={edge}"),
            None => "unknown".into(),
        };
        out.push_str(&format!("{},{},{bound},{shape}\n", t.type_tag.number().unwrap_or(0), t.value));
    }
    out
}

#[cfg(test)]
mod tests;
