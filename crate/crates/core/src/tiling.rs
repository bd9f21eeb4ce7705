//! Face-to-face lattice tilings by translates of a parallelohedron and the
//! edge length of their skeleton inside a ball.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{det3, Mat3, Vec3};
use crate::sampling;
use crate::zonotope::{BeltKind, WeightPair, Zonotope, ZonotopeError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TilingError {
    #[error("lattice basis is singular")]
    SingularBasis,
    #[error("|det| = {det} differs from the cell volume {volume}")]
    VolumeMismatch { det: f64, volume: f64 },
    #[error("translates overlap near {witness:?}")]
    Overlap { witness: [f64; 3], translate: [f64; 3] },
    #[error("point {witness:?} lies in no translate")]
    Gap { witness: [f64; 3] },
    #[error("no triple of facet vectors spans a tiling lattice")]
    NoValidBasis,
    #[error("radius {radius} is below 3 * diameter = {min}")]
    RadiusTooSmall { radius: f64, min: f64 },
    #[error("radii must be ascending")]
    UnsortedRadii,
    #[error(transparent)]
    Zonotope(#[from] ZonotopeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lattice {
    pub basis: [[f64; 3]; 3],
}

impl Lattice {
    pub fn new(b: [Vec3; 3]) -> Result<Self, TilingError> {
        if det3(&b[0], &b[1], &b[2]).abs() <= 1e-14 * b.iter().map(|v| v.norm()).product::<f64>() {
            return Err(TilingError::SingularBasis);
        }
        Ok(Self { basis: b.map(|v| [v.x, v.y, v.z]) })
    }

    pub fn vector(&self, i: usize) -> Vec3 {
        Vec3::from(self.basis[i])
    }

    /// Basis vectors as columns.
    pub fn matrix(&self) -> Mat3 {
        Mat3::from_columns(&[self.vector(0), self.vector(1), self.vector(2)])
    }

    pub fn det(&self) -> f64 {
        self.matrix().determinant()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { basis: self.basis.map(|v| v.map(|x| x * s)) }
    }

    pub fn point(&self, c: [i64; 3]) -> Vec3 {
        self.matrix() * Vec3::new(c[0] as f64, c[1] as f64, c[2] as f64)
    }

    /// Integer coordinates of all lattice points with `|t| <= r`, in
    /// lexicographic order.
    pub fn points_within(&self, r: f64) -> Vec<[i64; 3]> {
        let m = self.matrix();
        let inv = m.try_inverse().expect("nonsingular basis");
        let bound: Vec<i64> = (0..3).map(|i| (r * inv.row(i).norm()).floor() as i64).collect();
        let (b0, b1, b2) = (bound[0], bound[1], bound[2]);
        (-b0..=b0)
            .into_par_iter()
            .flat_map_iter(|i| {
                (-b1..=b1).flat_map(move |j| {
                    (-b2..=b2).filter_map(move |k| {
                        let t = m * Vec3::new(i as f64, j as f64, k as f64);
                        (t.norm() <= r).then_some([i, j, k])
                    })
                })
            })
            .collect()
    }

    /// Integer coordinates of `v` when it is a lattice vector.
    pub fn coordinates(&self, v: &Vec3, tol: f64) -> Option<[i64; 3]> {
        let c = self.matrix().try_inverse()? * v;
        let r = c.map(f64::round);
        ((c - r).amax() <= tol).then(|| [r.x as i64, r.y as i64, r.z as i64])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TilingReport {
    pub det: f64,
    pub volume: f64,
    pub translates_checked: usize,
    pub covering_samples: usize,
    pub uncovered: usize,
}

/// Monte-Carlo sample count of the covering check.
pub const COVERING_SAMPLES: usize = 1_000_000;
const LATTICE_PROBE_SAMPLES: usize = 20_000;
const CHUNK: usize = 10_000;

fn witness(v: Vec3) -> [f64; 3] {
    [v.x, v.y, v.z]
}

/// Checks the determinant, pairwise interior disjointness of `z` and `z + t`
/// for `|t| <= 2 diam`, and coverage of `samples` random points of a
/// fundamental domain.
pub fn validate_tiling(z: &Zonotope, lat: &Lattice, samples: usize, seed: u64) -> Result<TilingReport, TilingError> {
    let volume = z.volume();
    let det = lat.det();
    let translates = lat.points_within(2.0 * z.diameter());
    for c in &translates {
        if *c == [0, 0, 0] {
            continue;
        }
        let t = lat.point(*c);
        // int z meets int (z + t) iff t lies in int 2z
        let gauge = z.facets().iter().map(|f| t.dot(&f.normal) / f.normal.dot(&f.center)).fold(f64::MIN, f64::max);
        if gauge < 2.0 - 1e-9 {
            return Err(TilingError::Overlap { witness: witness(t / 2.0), translate: witness(t) });
        }
    }
    let uncovered = covering_misses(z, lat, samples, seed);
    if let Some(p) = uncovered.first() {
        return Err(TilingError::Gap { witness: witness(*p) });
    }
    if (det.abs() - volume).abs() > 1e-9 * volume {
        return Err(TilingError::VolumeMismatch { det, volume });
    }
    Ok(TilingReport { det, volume, translates_checked: translates.len(), covering_samples: samples, uncovered: 0 })
}

/// Sample points of the fundamental parallelepiped not covered by any translate.
fn covering_misses(z: &Zonotope, lat: &Lattice, samples: usize, seed: u64) -> Vec<Vec3> {
    let m = lat.matrix();
    let corner = (0..8)
        .map(|s| m * Vec3::new((s & 1) as f64, ((s >> 1) & 1) as f64, ((s >> 2) & 1) as f64))
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    let near: Vec<Vec3> = lat.points_within(corner + z.circumradius() + 1e-9).into_iter().map(|c| lat.point(c)).collect();
    let tol = 1e-12 * z.circumradius().max(1.0);
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|ci| {
            let mut rng = sampling::stream(seed, ci as u64);
            let n = CHUNK.min(samples - ci * CHUNK);
            let mut misses = Vec::new();
            for _ in 0..n {
                let p = m * Vec3::new(rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>());
                if !near.iter().any(|t| z.contains(&(p - t), tol)) {
                    misses.push(p);
                }
            }
            misses
        })
        .collect()
}

/// Picks three vectors `2 c_F` (facet centroids) spanning a lattice that tiles
/// space with translates of `z`.
pub fn lattice_from_parallelohedron(z: &Zonotope) -> Result<Lattice, TilingError> {
    let mut cands: Vec<Vec3> = Vec::new();
    for f in z.facets() {
        let v = f.center * 2.0;
        if !cands.iter().any(|c| (c + v).norm() <= 1e-9 * v.norm()) {
            cands.push(v);
        }
    }
    let volume = z.volume();
    let n = cands.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let d = det3(&cands[i], &cands[j], &cands[k]);
                if (d.abs() - volume).abs() > 1e-9 * volume {
                    continue;
                }
                let b = if d < 0.0 { [cands[j], cands[i], cands[k]] } else { [cands[i], cands[j], cands[k]] };
                let lat = Lattice::new(b)?;
                if validate_tiling(z, &lat, LATTICE_PROBE_SAMPLES, 0).is_ok() {
                    return Ok(lat);
                }
            }
        }
    }
    Err(TilingError::NoValidBasis)
}

/// Length of the part of segment `pq` inside the ball of radius `r`.
pub fn clipped_length(p: &Vec3, q: &Vec3, r: f64) -> f64 {
    let d = q - p;
    let a = d.norm_squared();
    if a == 0.0 {
        return 0.0;
    }
    let b = p.dot(&d);
    let c = p.norm_squared() - r * r;
    let disc = b * b - a * c;
    if disc <= 0.0 {
        return 0.0;
    }
    let s = disc.sqrt();
    let lo = ((-b - s) / a).max(0.0);
    let hi = ((-b + s) / a).min(1.0);
    if hi <= lo {
        0.0
    } else {
        (hi - lo) * a.sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct MultiplicityCensus {
    /// Edges met by the ball and shared by exactly 3 cells.
    pub three: usize,
    pub four: usize,
    pub other: usize,
    /// Edges whose multiplicity differs from the belt prediction.
    pub mismatched: usize,
}

impl MultiplicityCensus {
    pub fn pass(&self) -> bool {
        self.other == 0 && self.mismatched == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub radius: f64,
    pub cells: usize,
    /// Each edge counted once.
    pub skeleton_length: f64,
    /// Sum over cells and edges of length / (cells sharing the edge).
    pub weighted_length: f64,
    pub density: f64,
    pub target: f64,
    pub relative_error: f64,
    pub census: MultiplicityCensus,
}

impl DensityEstimate {
    pub fn mode_gap(&self) -> f64 {
        (self.skeleton_length - self.weighted_length).abs() / self.skeleton_length.max(1e-300)
    }
}

/// A vertex of the tiling: class of the cell vertex modulo the lattice plus
/// integer coordinates of its translate.
type VertexKey = (u16, [i64; 3]);

struct VertexClasses {
    class: Vec<u16>,
    offset: Vec<[i64; 3]>,
}

fn vertex_classes(z: &Zonotope, lat: &Lattice) -> VertexClasses {
    let v = z.vertices();
    let mut class = vec![u16::MAX; v.len()];
    let mut offset = vec![[0i64; 3]; v.len()];
    for a in 0..v.len() {
        if class[a] != u16::MAX {
            continue;
        }
        class[a] = a as u16;
        for b in a + 1..v.len() {
            if class[b] == u16::MAX {
                if let Some(o) = lat.coordinates(&(v[b] - v[a]), 1e-7) {
                    class[b] = a as u16;
                    offset[b] = o;
                }
            }
        }
    }
    VertexClasses { class, offset }
}

fn add(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Edge length of the tiling `z + lat` inside the ball of radius `r`,
/// counted both once per geometric edge and as a weighted sum over cells.
pub fn skeleton_density(z: &Zonotope, lat: &Lattice, r: f64) -> Result<DensityEstimate, TilingError> {
    let min = 3.0 * z.diameter();
    if !(r >= min) {
        return Err(TilingError::RadiusTooSmall { radius: r, min });
    }
    let belts = z.belts()?;
    let target = z.weighted_edge_functional(&WeightPair::TILING)? / z.volume();
    let classes = vertex_classes(z, lat);
    let cells = lat.points_within(r + z.circumradius() + 1e-9);
    let verts = z.vertices();
    let edges = z.edges();

    struct Item {
        key: (VertexKey, VertexKey),
        cell: u32,
        length: f64,
        kind: BeltKind,
    }
    let mut items: Vec<Item> = cells
        .par_iter()
        .enumerate()
        .flat_map_iter(|(ci, c)| {
            let t = lat.point(*c);
            let classes = &classes;
            let belts = &belts;
            edges.iter().filter_map(move |e| {
                let [a, b] = e.vertices;
                let length = clipped_length(&(verts[a] + t), &(verts[b] + t), r);
                if length == 0.0 {
                    return None;
                }
                let ka = (classes.class[a], add(*c, classes.offset[a]));
                let kb = (classes.class[b], add(*c, classes.offset[b]));
                let key = if ka <= kb { (ka, kb) } else { (kb, ka) };
                Some(Item { key, cell: ci as u32, length, kind: belts.0[e.generator] })
            })
        })
        .collect();
    items.par_sort_unstable_by(|x, y| x.key.cmp(&y.key).then(x.cell.cmp(&y.cell)));

    let groups: Vec<(usize, usize)> = {
        let mut g = Vec::new();
        let mut start = 0;
        for i in 1..=items.len() {
            if i == items.len() || items[i].key != items[start].key {
                g.push((start, i));
                start = i;
            }
        }
        g
    };
    let skeleton_length: f64 = groups.iter().map(|&(s, _)| items[s].length).sum();
    let weighted_length: f64 = items.iter().map(|it| it.length / it.kind.cells_per_edge() as f64).sum();
    let mut census = MultiplicityCensus::default();
    for &(s, e) in &groups {
        let n = e - s;
        match n {
            3 => census.three += 1,
            4 => census.four += 1,
            _ => census.other += 1,
        }
        if n != items[s].kind.cells_per_edge() {
            census.mismatched += 1;
        }
    }
    let density = skeleton_length / (4.0 / 3.0 * PI * r.powi(3));
    Ok(DensityEstimate {
        radius: r,
        cells: cells.len(),
        skeleton_length,
        weighted_length,
        density,
        target,
        relative_error: (density - target).abs() / target,
        census,
    })
}

pub fn convergence_series(z: &Zonotope, lat: &Lattice, radii: &[f64]) -> Result<Vec<DensityEstimate>, TilingError> {
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(TilingError::UnsortedRadii);
    }
    radii.iter().map(|&r| skeleton_density(z, lat, r)).collect()
}
