//! Face lattice of a 3-dimensional zonotope.
//!
//! Every facet of `Z = sum [-g/2, g/2]` is a translate of the zonogon
//! spanned by the generators lying in one plane; the translation picks, for
//! each generator off the plane, the endpoint on the side of the outward
//! normal. Vertices are identified by their sign vectors `eps in {+-1}^k`
//! (`vertex = sum eps_c g_c / 2`), so deduplication is exact once the plane
//! membership of each generator has been decided.

use std::collections::HashMap;

use super::{Edge, Facet, Segment, ZonotopeError};
use crate::geometry::{Vec3, VEC_TOL};

/// At most this many nonzero generators (64 candidate vertices).
pub const MAX_GENERATORS: usize = 6;

pub(super) struct Complex {
    pub generators: Vec<Segment>,
    pub vertices: Vec<Vec3>,
    pub vertex_masks: Vec<u8>,
    pub edges: Vec<Edge>,
    pub facets: Vec<Facet>,
}

/// A maximal set of generators sharing one plane.
struct Plane {
    normal: Vec3,
    members: Vec<usize>,
}

pub(super) fn build(segments: &[Segment]) -> Result<Complex, ZonotopeError> {
    let scale = segments.iter().map(|s| s.direction.norm()).fold(0.0, f64::max);
    if !scale.is_finite() {
        return Err(ZonotopeError::NonFinite);
    }
    let gens: Vec<Segment> = segments
        .iter()
        .filter(|s| s.direction.norm() > VEC_TOL * scale.max(f64::MIN_POSITIVE))
        .cloned()
        .collect();
    if gens.len() > MAX_GENERATORS {
        return Err(ZonotopeError::TooManySegments(gens.len()));
    }
    if gens.len() < 3 {
        return Err(ZonotopeError::FlatBody);
    }
    let units: Vec<Vec3> = gens.iter().map(|s| s.direction.normalize()).collect();
    for a in 0..units.len() {
        for b in (a + 1)..units.len() {
            if units[a].cross(&units[b]).norm() <= VEC_TOL {
                return Err(ZonotopeError::ParallelSegments(gens[a].index, gens[b].index));
            }
        }
    }

    let planes = find_planes(&units);
    if planes.len() == 1 {
        return Err(ZonotopeError::FlatBody);
    }

    let k = gens.len();
    let mut mask_to_vertex: HashMap<u8, usize> = HashMap::new();
    let mut vertex_masks = Vec::new();
    let mut edge_index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut facets = Vec::new();

    for plane in &planes {
        for orient in [plane.normal, -plane.normal] {
            let mut base_mask = 0u8;
            let mut center = Vec3::zeros();
            for c in 0..k {
                if plane.members.contains(&c) {
                    continue;
                }
                if gens[c].direction.dot(&orient) > 0.0 {
                    base_mask |= 1 << c;
                    center += gens[c].direction * 0.5;
                } else {
                    center -= gens[c].direction * 0.5;
                }
            }

            // Walk the zonogon counterclockwise about `orient`.
            let x_axis = units[plane.members[0]];
            let y_axis = orient.cross(&x_axis);
            let mut dirs: Vec<(f64, usize, bool)> = plane
                .members
                .iter()
                .map(|&c| {
                    let g = gens[c].direction;
                    let (gx, gy) = (g.dot(&x_axis), g.dot(&y_axis));
                    let positive = if c == plane.members[0] { true } else { gy > 0.0 };
                    let (dx, dy) = if positive { (gx, gy) } else { (-gx, -gy) };
                    (dy.atan2(dx), c, positive)
                })
                .collect();
            dirs.sort_by(|a, b| a.0.total_cmp(&b.0));

            // Start at the vertex where every member points against its
            // half-turn representative.
            let mut mask = base_mask;
            for &(_, c, positive) in &dirs {
                if !positive {
                    mask |= 1 << c;
                }
            }
            let mut cycle = Vec::with_capacity(2 * dirs.len());
            let mut labels = Vec::with_capacity(2 * dirs.len());
            for _ in 0..2 {
                for &(_, c, _) in &dirs {
                    cycle.push(mask);
                    labels.push(c);
                    mask ^= 1 << c;
                }
            }

            let mut ids = Vec::with_capacity(cycle.len());
            for &m in &cycle {
                let next = vertex_masks.len();
                let id = *mask_to_vertex.entry(m).or_insert(next);
                if id == next {
                    vertex_masks.push(m);
                }
                ids.push(id);
            }
            for (pos, &c) in labels.iter().enumerate() {
                let (a, b) = (ids[pos], ids[(pos + 1) % ids.len()]);
                let key = (a.min(b), a.max(b));
                let next = edges.len();
                if *edge_index.entry(key).or_insert(next) == next {
                    edges.push(Edge { vertices: [key.0, key.1], generator: c });
                }
            }

            facets.push(Facet {
                vertices: ids,
                normal: orient,
                area: 0.0,
                center,
            });
        }
    }

    let vertices: Vec<Vec3> = vertex_masks
        .iter()
        .map(|&m| {
            (0..k).fold(Vec3::zeros(), |acc, c| {
                let half = gens[c].direction * 0.5;
                if m & (1 << c) != 0 {
                    acc + half
                } else {
                    acc - half
                }
            })
        })
        .collect();
    for f in &mut facets {
        f.area = polygon_area(&f.vertices, &vertices, &f.normal);
    }

    Ok(Complex {
        generators: gens,
        vertices,
        vertex_masks,
        edges,
        facets,
    })
}

fn find_planes(units: &[Vec3]) -> Vec<Plane> {
    let k = units.len();
    let mut covered = vec![vec![false; k]; k];
    let mut planes = Vec::new();
    for a in 0..k {
        for b in (a + 1)..k {
            if covered[a][b] {
                continue;
            }
            let normal = units[a].cross(&units[b]).normalize();
            let members: Vec<usize> = (0..k)
                .filter(|&c| c == a || c == b || units[c].dot(&normal).abs() <= VEC_TOL)
                .collect();
            for &p in &members {
                for &q in &members {
                    covered[p][q] = true;
                }
            }
            planes.push(Plane { normal, members });
        }
    }
    planes
}

fn polygon_area(cycle: &[usize], vertices: &[Vec3], normal: &Vec3) -> f64 {
    let n = cycle.len();
    let mut acc = Vec3::zeros();
    for i in 0..n {
        acc += vertices[cycle[i]].cross(&vertices[cycle[(i + 1) % n]]);
    }
    0.5 * acc.dot(normal)
}
