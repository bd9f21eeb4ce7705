use super::*;
use crate::sampling;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn table_values_at_unit_weights() {
    let m = WeightPair::new(1.0, 1.0);
    assert!(close(type_minimum(2, &m).unwrap().value, 2.859_6, 1e-4));
    assert!(close(type_minimum(3, &m).unwrap().value, 2.749_46, 1e-5));
    assert!(close(type_minimum(5, &m).unwrap().value, 2.672_70, 1e-5));
    let t1 = type_minimum(1, &WeightPair::TILING).unwrap();
    assert_eq!(t1.value, 3.0);
    assert_eq!(t1.optimal_shape, Some(OptimalShape::Cube { edge: 1.0 }));
    match type_minimum(2, &m).unwrap().optimal_shape {
        Some(OptimalShape::HexPrism { base_edge, lateral_edge }) => {
            assert!(close(base_edge, 2f64.powf(2.0 / 3.0) / 3f64.powf(5.0 / 6.0), 1e-15));
            assert!(close(lateral_edge, 3f64.powf(1.0 / 6.0) / 2f64.cbrt(), 1e-15));
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(type_minimum(0, &m), Err(WmError::UnknownType(0))));
    assert!(matches!(type_minimum(6, &m), Err(WmError::UnknownType(6))));
}

#[test]
fn only_type_four_is_inexact() {
    for m in [WeightPair::new(1.0, 0.5), WeightPair::new(1.0, 2.0)] {
        for t in all_type_minima(&m) {
            assert!(t.value > 0.0);
            assert_eq!(t.is_exact(), t.type_tag != ParallelohedronType::ElongatedRhombicDodeca);
        }
    }
    assert_eq!(type_minimum(4, &WeightPair::new(1.0, 0.9)).unwrap().bound, BoundKind::LowerBound);
    let t = type_minimum(4, &WeightPair::new(1.0, 2.0)).unwrap();
    assert_eq!(t.bound, BoundKind::ExceedsTypeFive);
    assert_eq!(t.value, w5(&WeightPair::new(1.0, 2.0)));
}

#[test]
fn canonical_shapes_reproduce_the_table() {
    for m in [WeightPair::new(1.0, 1.0), WeightPair::TILING, WeightPair::EDGE_LENGTH, WeightPair::new(0.3, 1.7)] {
        for t in all_type_minima(&m) {
            let Some(shape) = t.optimal_shape else { continue };
            let z = shape.build().unwrap();
            assert!(close(z.volume(), 1.0, 1e-12));
            assert_eq!(z.combinatorial_type().unwrap(), t.type_tag);
            assert!(close(z.weighted_edge_functional(&m).unwrap(), t.value, 1e-9));
        }
    }
}

#[test]
fn classifier_examples() {
    let a = classify_optimal(&WeightPair::new(1.0, 0.5));
    assert_eq!(a.winner, Winner::Cube);
    assert!(close(a.value, 1.5, 1e-15));
    let a = classify_optimal(&WeightPair::new(1.0, 0.88));
    assert_eq!(a.winner, Winner::HexPrism);
    assert!(close(a.value, 3f64.powf(7.0 / 6.0) * 0.88f64.powf(2.0 / 3.0) / 2f64.cbrt(), 1e-15));
    let a = classify_optimal(&WeightPair::new(1.0, 1.0));
    assert_eq!(a.winner, Winner::TruncOcta);
    assert!(close(a.value, 3.0 / 2f64.powf(1.0 / 6.0), 1e-15));
    let a = classify_optimal(&WeightPair::EDGE_LENGTH);
    assert_eq!(a.winner, Winner::Cube);
    assert_eq!(a.value, 12.0);
}

#[test]
fn winner_is_the_smallest_type_value() {
    let mut r = 0.05;
    while r < 3.0 {
        let m = WeightPair::new(1.0, r);
        let a = classify_optimal(&m);
        let mins = all_type_minima(&m);
        let exact_min = mins.iter().filter(|t| t.is_exact()).map(|t| t.value).fold(f64::INFINITY, f64::min);
        assert!(close(a.value, exact_min, 1e-14), "ratio {r}");
        let t4 = &mins[3];
        assert!(t4.bound == BoundKind::ExceedsTypeFive || t4.value > a.value, "ratio {r}");
        r += 0.01;
    }
}

#[test]
fn thresholds_are_ties() {
    let m = WeightPair::new(1.0, cube_prism_threshold());
    assert_eq!(classify_optimal(&m).winner, Winner::TieCubePrism);
    assert!(close(w1(&m), w2(&m), 1e-12));
    let m = WeightPair::new(1.0, prism_octa_threshold());
    assert_eq!(classify_optimal(&m).winner, Winner::TiePrismOcta);
    assert!(close(w2(&m), w5(&m), 1e-12));
    assert!((cube_prism_threshold() - 0.866_025).abs() < 1e-6);
    assert!((prism_octa_threshold() - 0.903_602).abs() < 1e-6);
}

#[test]
fn rhombic_dodecahedron_never_wins() {
    let mut rng = sampling::rng(5);
    for _ in 0..1000 {
        use rand::Rng;
        let m = WeightPair::new(rng.random_range(1e-3..10.0), rng.random_range(1e-3..10.0));
        assert!(w3(&m) > w5(&m));
    }
}

#[test]
fn isotropic_cube_is_identity() {
    let fm = FacetMeasure::from_zonotope(&Zonotope::cube(1.0).unwrap()).unwrap();
    let p = isotropic_position(&fm, 1e-12).unwrap();
    assert_eq!(p.iterations, 0);
    assert_eq!(p.map, Mat3::identity());
}

#[test]
fn isotropic_box_becomes_cube() {
    let z = Zonotope::from_vectors(&[Vec3::x() * 4.0, Vec3::y() * 2.0, Vec3::z()]).unwrap();
    let fm = FacetMeasure::from_zonotope(&z).unwrap();
    let p = isotropic_position(&fm, 1e-10).unwrap();
    assert!((p.map.determinant() - 1.0).abs() < 1e-12);
    let img = z.transformed(&p.map).unwrap();
    let lengths: Vec<f64> = img.generators().iter().map(|g| g.length()).collect();
    for l in &lengths {
        assert!(close(*l, 2.0, 1e-9), "{lengths:?}");
    }
    assert!(FacetMeasure::from_zonotope(&img).unwrap().isotropy_residual() <= 1e-9);
}

#[test]
fn isotropic_random_type5() {
    let mut rng = sampling::rng(77);
    for _ in 0..20 {
        let g = sampling::random_frame(&mut rng);
        let z = Zonotope::from_parameters(&g, &sampling::random_positive_beta(&mut rng)).unwrap();
        let fm = FacetMeasure::from_zonotope(&z).unwrap();
        let p = isotropic_position(&fm, 1e-8).unwrap();
        assert!(p.iterations <= ISOTROPY_MAX_ITERATIONS);
        assert!((p.map.determinant() - 1.0).abs() < 1e-12);
        let img = FacetMeasure::from_zonotope(&z.transformed(&p.map).unwrap()).unwrap();
        assert!(img.isotropy_residual() <= 1e-8 * 1.01);
    }
}

#[test]
fn facet_measure_validation() {
    assert!(FacetMeasure::new(vec![(Vec3::x(), 1.0), (-Vec3::x(), 2.0)]).is_err());
    assert!(FacetMeasure::new(vec![(Vec3::x(), 1.0), (-Vec3::x(), 1.0), (Vec3::y(), 1.0), (-Vec3::y(), 1.0)])
        .is_err());
    assert!(FacetMeasure::new(vec![(Vec3::x(), -1.0)]).is_err());
}

fn symmetric_tetra() -> CenteredTetrahedron {
    CenteredTetrahedron::new([
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(0.0, 1.0, 0.0),
        Vec3::new(-0.5, -0.5, 1.0),
        Vec3::new(-0.5, -0.5, -1.0),
    ])
    .unwrap()
}

#[test]
fn stationary_betas_symmetric_case() {
    let t = symmetric_tetra();
    let gz = t.gamma_zeta();
    for g in &gz.gamma[..5] {
        assert!(close(*g, gz.gamma[0], 1e-15));
    }
    let m = WeightPair::new(1.0, 0.7);
    let b = stationary_betas_type4(&t, &m).unwrap();
    let v = b.values();
    for x in &v[2..5] {
        assert!(close(*x, v[1], 1e-14));
    }
    assert_eq!(v[5], 0.0);
    let (c12, c13) = (t.p(1).cross(&t.p(2)).norm(), t.p(1).cross(&t.p(3)).norm());
    assert!(close(v[0], m.alpha6 / m.alpha4 * c12 / c13 * v[1], 1e-14));
}

#[test]
fn stationary_betas_errors() {
    let skew = CenteredTetrahedron::new([
        Vec3::new(1.0, 0.2, 0.0),
        Vec3::new(0.3, 1.0, 0.0),
        Vec3::new(-0.5, -0.5, 1.0),
        Vec3::new(-0.8, -0.7, -1.0),
    ])
    .unwrap();
    assert!(matches!(stationary_betas_type4(&skew, &WeightPair::new(1.0, 1.0)), Err(WmError::NotOrthogonal { .. })));
    // p2 and p4 pull the same way, so gamma_13 = -<p2, p4> < 0
    let t = CenteredTetrahedron::new([
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(0.0, 1.0, 0.0),
        Vec3::new(-0.5, -2.0, 1.0),
        Vec3::new(-0.5, 1.0, -1.0),
    ])
    .unwrap();
    assert!(t.p(2).dot(&t.p(4)) > 0.0);
    assert!(matches!(
        stationary_betas_type4(&t, &WeightPair::new(1.0, 1.0)),
        Err(WmError::NegativeBeta { .. })
    ));
}

#[test]
fn stationary_bodies_respect_the_type4_bound() {
    let mut rng = sampling::rng(12);
    let mut checked = 0;
    for m in [WeightPair::new(1.0, 1.0), WeightPair::new(1.0, 0.8), WeightPair::new(1.0, 2.0)] {
        for _ in 0..1500 {
            let v1 = sampling::uniform_vec(&mut rng);
            let mut v2 = sampling::uniform_vec(&mut rng);
            v2 -= v1 * (v1.dot(&v2) / v1.norm_squared());
            let v3 = sampling::uniform_vec(&mut rng);
            let Ok(t) = CenteredTetrahedron::new([v1, v2, v3, -(v1 + v2 + v3)]) else { continue };
            let Ok(b) = stationary_betas_type4(&t, &m) else { continue };
            let g = t.to_frame().unwrap();
            let z = Zonotope::from_parameters(&g, &b).unwrap();
            if z.combinatorial_type() != Ok(ParallelohedronType::ElongatedRhombicDodeca) {
                continue;
            }
            let w = normalized_functional(&z, &m).unwrap();
            let t4 = type_minimum(4, &m).unwrap();
            match t4.bound {
                BoundKind::ExceedsTypeFive => assert!(w > t4.value),
                _ => assert!(w >= t4.value - 1e-9),
            }
            checked += 1;
        }
    }
    assert!(checked > 100, "{checked}");
}

#[test]
fn type4_sweep_small() {
    let m = WeightPair::new(1.0, 0.9);
    let s = type4_sweep(&m, 300, 3);
    assert!(s.pass(1e-9));
    assert!((s.bound - 3.0 * 0.9f64.cbrt() * 3.19f64.cbrt() / 2f64.powf(2.0 / 3.0)).abs() < 1e-14);
    assert_eq!(s, type4_sweep(&m, 300, 3));
    let s = type4_sweep(&WeightPair::new(1.0, 2.0), 300, 3);
    assert!(s.min_observed > 3.0 / 2f64.powf(1.0 / 6.0));
}

#[test]
fn csv_shapes() {
    let f = fig2_csv(0.25, 1.0);
    let lines: Vec<&str> = f.lines().collect();
    assert_eq!(lines[0], "alpha4,w1,w2,w4,w5");
    assert_eq!(lines.len(), 5);
    assert!(lines[4].starts_with("1,3,"));
    let t = table1_csv(&WeightPair::new(1.0, 1.0));
    assert_eq!(t.lines().count(), 6);
    assert!(t.contains("4,") && t.contains("lower_bound"));
}

#[test]
fn classifier_is_scale_invariant() {
    for r in [0.3, 0.87, 0.9, 1.5] {
        let base = classify_optimal(&WeightPair::new(1.0, r));
        for s in [0.01, 2.0, 1e3] {
            let a = classify_optimal(&WeightPair::new(s, s * r));
            assert_eq!(a.winner, base.winner);
            assert!(close(a.value, s * base.value, 1e-13));
        }
    }
}
