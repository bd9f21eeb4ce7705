//! Zonotopes generated by at most six segments, with the belt structure and
//! weighted edge-length functionals of 3-dimensional parallelohedra.

mod frame;
mod hull;
pub mod io;
mod shapes;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use frame::{
    classify_type, segments_from_parameters, volume_f, BetaVector, GeneratorSet,
    ParallelohedronType,
};
pub use hull::MAX_GENERATORS;

use crate::geometry::{Mat3, Vec3};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZonotopeError {
    #[error("non-finite coordinates in input")]
    NonFinite,
    #[error("degenerate generator frame: {0}")]
    DegenerateFrame(String),
    #[error("generator frame is not centered (|sum| = {residual:e})")]
    NotCentered { residual: f64 },
    #[error("beta coefficients must be finite and nonnegative")]
    InvalidBeta,
    #[error("nonzero segments do not span 3-space")]
    FlatBody,
    #[error("segments {0} and {1} are parallel")]
    ParallelSegments(usize, usize),
    #[error("{0} nonzero segments given, at most 6 are supported")]
    TooManySegments(usize),
    #[error("zone of generator {generator} has {count} facets, expected 4 or 6")]
    BeltAnomaly { generator: usize, count: usize },
    #[error("invalid zonotope document: {0}")]
    Document(String),
}

/// A generating segment `[-d/2, d/2]` of a zonotope.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub direction: Vec3,
    /// Position of the segment in the list it was built from.
    pub index: usize,
    /// Frame pair `(i, j)` when the segment is `beta_ij (v_i x v_j)`.
    pub pair: Option<(usize, usize)>,
}

impl Segment {
    pub fn new(direction: Vec3, index: usize) -> Self {
        Self { direction, index, pair: None }
    }

    pub fn length(&self) -> f64 {
        self.direction.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub vertices: [usize; 2],
    /// Index into [`Zonotope::generators`].
    pub generator: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    /// Vertex cycle, counterclockwise seen from outside.
    pub vertices: Vec<usize>,
    pub normal: Vec3,
    pub area: f64,
    /// Centroid (the facet is centrally symmetric about it).
    pub center: Vec3,
}

/// Belt weights `m = (alpha_6, alpha_4)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightPair {
    pub alpha6: f64,
    pub alpha4: f64,
}

impl WeightPair {
    /// Panics unless both weights are finite and positive.
    pub fn new(alpha6: f64, alpha4: f64) -> Self {
        Self::try_new(alpha6, alpha4).expect("belt weights must be positive")
    }

    pub fn try_new(alpha6: f64, alpha4: f64) -> Option<Self> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        (ok(alpha6) && ok(alpha4)).then_some(Self { alpha6, alpha4 })
    }

    /// Weights that turn `w_m` into the total edge length.
    pub const EDGE_LENGTH: Self = Self { alpha6: 6.0, alpha4: 4.0 };
    /// Weights that turn `w_m` into the edge density of the face-to-face tiling.
    pub const TILING: Self = Self { alpha6: 2.0, alpha4: 1.0 };
    /// Weights that turn `w_m` into the mean width.
    pub const MEAN_WIDTH: Self = Self { alpha6: 0.5, alpha4: 0.5 };

    pub fn weight(&self, belt: BeltKind) -> f64 {
        match belt {
            BeltKind::FourBelt => self.alpha4,
            BeltKind::SixBelt => self.alpha6,
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { alpha6: self.alpha6 * s, alpha4: self.alpha4 * s }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BeltKind {
    FourBelt,
    SixBelt,
}

impl BeltKind {
    pub fn size(self) -> usize {
        match self {
            Self::FourBelt => 4,
            Self::SixBelt => 6,
        }
    }

    /// Cells of a face-to-face tiling sharing an edge from this belt.
    pub fn cells_per_edge(self) -> usize {
        match self {
            Self::FourBelt => 4,
            Self::SixBelt => 3,
        }
    }
}

/// Belt class of every nonzero generator, in generator order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeltClass(pub Vec<BeltKind>);

impl BeltClass {
    pub fn count(&self, kind: BeltKind) -> usize {
        self.0.iter().filter(|&&b| b == kind).count()
    }
}

/// A centered 3-dimensional zonotope with its full face lattice.
#[derive(Debug, Clone)]
pub struct Zonotope {
    generators: Vec<Segment>,
    vertices: Vec<Vec3>,
    vertex_masks: Vec<u8>,
    edges: Vec<Edge>,
    facets: Vec<Facet>,
    frame: Option<GeneratorSet>,
    beta: Option<BetaVector>,
}

/// Builds the zonotope `sum [-s/2, s/2]` centered at the origin.
///
/// Zero-length segments are dropped. Fails with `FlatBody` when the rest do
/// not span 3-space.
pub fn build_zonotope(segments: &[Segment]) -> Result<Zonotope, ZonotopeError> {
    let c = hull::build(segments)?;
    Ok(Zonotope {
        generators: c.generators,
        vertices: c.vertices,
        vertex_masks: c.vertex_masks,
        edges: c.edges,
        facets: c.facets,
        frame: None,
        beta: None,
    })
}

impl Zonotope {
    /// Parallelohedron `sum [o, beta_ij (v_i x v_j)]`, translated to be centered.
    pub fn from_parameters(g: &GeneratorSet, b: &BetaVector) -> Result<Self, ZonotopeError> {
        let mut z = build_zonotope(&segments_from_parameters(g, b))?;
        z.frame = Some(*g);
        z.beta = Some(*b);
        Ok(z)
    }

    pub fn from_vectors(dirs: &[Vec3]) -> Result<Self, ZonotopeError> {
        let segs: Vec<Segment> =
            dirs.iter().enumerate().map(|(i, d)| Segment::new(*d, i)).collect();
        build_zonotope(&segs)
    }

    pub fn generators(&self) -> &[Segment] {
        &self.generators
    }
    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }
    pub fn frame(&self) -> Option<&GeneratorSet> {
        self.frame.as_ref()
    }
    pub fn beta(&self) -> Option<&BetaVector> {
        self.beta.as_ref()
    }

    /// Sign vector of a vertex: bit `c` set when generator `c` is taken at `+d/2`.
    pub fn vertex_signs(&self, v: usize) -> u8 {
        self.vertex_masks[v]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.facets.len() as i64
    }

    /// Volume by decomposition into pyramids over the facets.
    pub fn volume(&self) -> f64 {
        self.facets.iter().map(|f| f.area * f.normal.dot(&f.center)).sum::<f64>() / 3.0
    }

    pub fn surface_area(&self) -> f64 {
        self.facets.iter().map(|f| f.area).sum()
    }

    pub fn circumradius(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn diameter(&self) -> f64 {
        2.0 * self.circumradius()
    }

    /// Support function `h(u) = sum |<g, u>| / 2`.
    pub fn support(&self, u: &Vec3) -> f64 {
        0.5 * self.generators.iter().map(|g| g.direction.dot(u).abs()).sum::<f64>()
    }

    /// True when `p` lies in the body, with slack `tol` on every facet.
    pub fn contains(&self, p: &Vec3, tol: f64) -> bool {
        self.facets.iter().all(|f| p.dot(&f.normal) <= f.normal.dot(&f.center) + tol)
    }

    /// Zone size of each generator: facets whose boundary contains a translate of it.
    pub fn zone_sizes(&self) -> Vec<usize> {
        let mut counts = vec![0; self.generators.len()];
        for f in &self.facets {
            let mut seen = vec![false; self.generators.len()];
            let n = f.vertices.len();
            for i in 0..n {
                let (a, b) = (f.vertices[i], f.vertices[(i + 1) % n]);
                let c = (self.vertex_masks[a] ^ self.vertex_masks[b]).trailing_zeros() as usize;
                seen[c] = true;
            }
            for (c, s) in seen.into_iter().enumerate() {
                if s {
                    counts[c] += 1;
                }
            }
        }
        counts
    }

    /// Classifies every generator as spanning a 4-belt or a 6-belt.
    pub fn belts(&self) -> Result<BeltClass, ZonotopeError> {
        self.zone_sizes()
            .into_iter()
            .enumerate()
            .map(|(c, n)| match n {
                4 => Ok(BeltKind::FourBelt),
                6 => Ok(BeltKind::SixBelt),
                count => Err(ZonotopeError::BeltAnomaly { generator: c, count }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BeltClass)
    }

    /// `w_m = sum_i w_i L(S_i)` with `w_i = alpha_6` on 6-belts, `alpha_4` on 4-belts.
    pub fn weighted_edge_functional(&self, m: &WeightPair) -> Result<f64, ZonotopeError> {
        let belts = self.belts()?;
        Ok(self
            .generators
            .iter()
            .zip(&belts.0)
            .map(|(g, &b)| m.weight(b) * g.length())
            .sum())
    }

    /// Total edge length via belts: `sum (belt size) L(S_i)`.
    pub fn total_edge_length(&self) -> Result<f64, ZonotopeError> {
        let belts = self.belts()?;
        Ok(self
            .generators
            .iter()
            .zip(&belts.0)
            .map(|(g, &b)| b.size() as f64 * g.length())
            .sum())
    }

    /// Sum of the lengths of all edges of the complex.
    pub fn edge_length_sum(&self) -> f64 {
        self.edges
            .iter()
            .map(|e| (self.vertices[e.vertices[0]] - self.vertices[e.vertices[1]]).norm())
            .sum()
    }

    /// Combinatorial type read off the belt structure.
    pub fn combinatorial_type(&self) -> Result<ParallelohedronType, ZonotopeError> {
        let b = self.belts()?;
        let counts = (b.count(BeltKind::FourBelt), b.count(BeltKind::SixBelt));
        Ok([
            ParallelohedronType::Cube,
            ParallelohedronType::HexPrism,
            ParallelohedronType::RhombicDodeca,
            ParallelohedronType::ElongatedRhombicDodeca,
            ParallelohedronType::TruncOcta,
        ]
        .into_iter()
        .find(|t| t.belt_counts() == Some(counts))
        .unwrap_or(ParallelohedronType::Degenerate))
    }

    /// Image under the linear map `a`. Frame and coefficients are dropped.
    pub fn transformed(&self, a: &Mat3) -> Result<Self, ZonotopeError> {
        let segs: Vec<Segment> = self
            .generators
            .iter()
            .map(|g| Segment { direction: a * g.direction, ..g.clone() })
            .collect();
        build_zonotope(&segs)
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut z = self.clone();
        for g in &mut z.generators {
            g.direction *= s;
        }
        for v in &mut z.vertices {
            *v *= s;
        }
        for f in &mut z.facets {
            f.center *= s;
            f.area *= s * s;
        }
        if let Some(b) = &z.beta {
            z.beta = Some(b.scaled(s));
        }
        z
    }

    /// Copy rescaled to unit volume.
    pub fn unit_volume(&self) -> Self {
        self.scaled(self.volume().powf(-1.0 / 3.0))
    }

    /// Mean width by midpoint quadrature of the support function over the
    /// sphere, `(1 / 2pi) * integral of h`, on an `n x 2n` grid in
    /// `(cos theta, phi)`.
    pub fn mean_width_numeric(&self, n: usize) -> f64 {
        let n_phi = 2 * n;
        let dz = 2.0 / n as f64;
        let dphi = std::f64::consts::TAU / n_phi as f64;
        let mut total = 0.0;
        for i in 0..n {
            let z = -1.0 + (i as f64 + 0.5) * dz;
            let r = (1.0 - z * z).sqrt();
            let mut ring = 0.0;
            for j in 0..n_phi {
                let phi = (j as f64 + 0.5) * dphi;
                ring += self.support(&Vec3::new(r * phi.cos(), r * phi.sin(), z));
            }
            total += ring;
        }
        total * dz * dphi / std::f64::consts::TAU
    }
}
