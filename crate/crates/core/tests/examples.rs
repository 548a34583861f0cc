//! Worked examples with known answers.

use quasi_sharp::constructions::plane::{distance_to_triangle_boundary, in_bijective_annulus};
use quasi_sharp::constructions::{
    covering_count_diagnostic, fg_plane, preimage_count, rho, smoothing_radius, spacing_for_level,
    theorem1_fields, theorem2_surface,
    ConstructionParams, SmoothStepProfile, SPHERE_MARKERS,
};
use quasi_sharp::mesh::{build_icosphere, build_marked_icosphere};
use quasi_sharp::poisson::ImageCover;
use quasi_sharp::quasistate::median_direct;
use quasi_sharp::{
    config, poisson_l1, sharpness_ratio, QuasiMeasure, QuasiState, ScalarField, SetKind,
    SolidSetFunction, SurfaceMesh, VertexSet,
};

const PROFILE: SmoothStepProfile = SmoothStepProfile::Exponential;

fn marked(level: u32) -> SurfaceMesh {
    build_marked_icosphere(level, &SPHERE_MARKERS).unwrap()
}

fn region(m: &SurfaceMesh, kind: SetKind, pred: impl Fn([f64; 3]) -> bool) -> VertexSet {
    m.set_from_predicate(kind, |v| pred(m.vertices()[v]))
}

fn cap(m: &SurfaceMesh, kind: SetKind, centre: [f64; 3], min_dot: f64) -> VertexSet {
    region(m, kind, |p| p[0] * centre[0] + p[1] * centre[1] + p[2] * centre[2] > min_dot)
}

fn three_point(m: &SurfaceMesh) -> QuasiMeasure {
    QuasiMeasure::new(m, SolidSetFunction::three_point_from_markers(m).unwrap()).unwrap()
}

#[test]
fn icosahedron_counts() {
    let m = marked(0);
    assert_eq!((m.num_vertices(), m.num_edges(), m.num_triangles()), (12, 30, 20));
    assert_eq!(m.euler_characteristic(), 2);
    let m = marked(3);
    assert_eq!((m.num_vertices(), m.num_edges(), m.num_triangles()), (642, 1920, 1280));
    assert_eq!(m.euler_characteristic(), 2);
}

#[test]
fn weights_are_normalized() {
    for level in 0..=5 {
        assert!((build_icosphere(level).unwrap().total_weight() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn components() {
    let m = marked(2);
    assert_eq!(m.connected_components(&m.full_set(SetKind::Closed)).unwrap().len(), 1);
    assert!(m.connected_components(&m.empty_set(SetKind::Open)).unwrap().is_empty());
    let poles = region(&m, SetKind::Closed, |p| p[2].abs() > 0.999);
    assert_eq!(poles.len(), 2);
    assert_eq!(m.connected_components(&poles).unwrap().len(), 2);
}

#[test]
fn complements() {
    let m = marked(2);
    let full = m.complement(&m.empty_set(SetKind::Open)).unwrap();
    assert_eq!(full, m.full_set(SetKind::Closed));
    let s = cap(&m, SetKind::Open, [0.0, 0.6, 0.8], 0.3);
    let c = m.complement(&s).unwrap();
    assert_eq!(c.kind(), SetKind::Closed);
    assert_eq!(m.complement(&c).unwrap(), s);
    assert_eq!(s.len() + c.len(), m.num_vertices());
}

#[test]
fn solidity() {
    let m = marked(3);
    assert!(m.is_solid(&region(&m, SetKind::Closed, |p| p[0] <= 0.0)).unwrap());
    let two_caps = cap(&m, SetKind::Closed, [0.0, 0.0, 1.0], 0.8)
        .union(&cap(&m, SetKind::Closed, [0.0, 0.0, -1.0], 0.8));
    assert!(!m.is_solid(&two_caps).unwrap());
    let band = region(&m, SetKind::Closed, |p| p[2].abs() < 0.3);
    assert!(!m.is_solid(&band).unwrap());
}

#[test]
fn areas() {
    let m = marked(4);
    assert!((m.set_area(&m.full_set(SetKind::Closed)).unwrap() - m.total_weight()).abs() <= 1e-12);
    assert_eq!(m.set_area(&m.empty_set(SetKind::Closed)).unwrap(), 0.0);
    let half = m.set_area(&region(&m, SetKind::Closed, |p| p[2] >= 0.0)).unwrap();
    assert!((half - 0.5).abs() <= 0.02, "hemisphere area {half}");
}

#[test]
fn three_point_values() {
    let m = marked(3);
    let q = three_point(&m);
    assert_eq!(q.tau(&m, &region(&m, SetKind::Closed, |p| p[0] <= 0.0)).unwrap(), 1);
    assert_eq!(q.tau(&m, &cap(&m, SetKind::Closed, [1.0, 0.0, 0.0], 0.9)).unwrap(), 0);
    let two_caps = cap(&m, SetKind::Open, [1.0, 0.0, 0.0], 0.9).union(&cap(&m, SetKind::Open, [0.0, 1.0, 0.0], 0.9));
    assert_eq!(q.tau_open(&m, &two_caps).unwrap(), 0);
    // Holds p1 and p2; p3 sits in the northern complement disk.
    let annulus = region(&m, SetKind::Open, |p| p[2].abs() < 0.5);
    assert_eq!(q.tau_open(&m, &annulus).unwrap(), 1);
    assert_eq!(q.tau_closed(&m, &m.full_set(SetKind::Closed)).unwrap(), 1);
    assert_eq!(q.tau_closed(&m, &m.empty_set(SetKind::Closed)).unwrap(), 0);
}

#[test]
fn area_threshold_hemisphere() {
    let m = marked(4);
    let q = QuasiMeasure::new(&m, SolidSetFunction::area_threshold(&m, 0.5).unwrap()).unwrap();
    let north = region(&m, SetKind::Closed, |p| p[2] >= 0.0);
    assert!(m.set_area(&north).unwrap() >= 0.5);
    assert_eq!(q.tau(&m, &north).unwrap(), 1);
}

#[test]
fn sphere_pair_sublevels() {
    let (m, f, g) = theorem1_fields(&ConstructionParams::sphere(4, PROFILE)).unwrap();
    let state = QuasiState::three_point(&m).unwrap();
    let q = state.measure();
    let sum = f.try_add(&g).unwrap();
    for t in [1e-9, 0.25, 0.5, 0.75, 1.0] {
        assert_eq!(q.tau_open(&m, &f.below(t)).unwrap(), 1, "t = {t}");
        assert_eq!(q.tau_open(&m, &sum.below(t)).unwrap(), 0, "t = {t}");
    }
    let b = state.b_function(&m, &f).unwrap();
    for t in [1e-9, 0.1, 0.5, 0.9, 1.0] {
        assert_eq!(b.eval(t), 1, "t = {t}");
    }
    let z = state.zeta_triple(&m, &f, &g).unwrap();
    assert_eq!((z.f, z.g, z.sum), (0.0, 0.0, 1.0));
    assert_eq!(state.nonlinearity_defect(&m, &f, &g).unwrap(), 1.0);
}

#[test]
fn sphere_pair_values() {
    let (m, f, g) = theorem1_fields(&ConstructionParams::sphere(4, PROFILE)).unwrap();
    let [p1, p2, p3] = [m.markers()[0], m.markers()[1], m.markers()[2]];
    assert_eq!((f.values()[p1], g.values()[p1]), (1.0, 0.0));
    assert_eq!((f.values()[p2], g.values()[p2]), (0.0, 1.0));
    assert_eq!((f.values()[p3], g.values()[p3]), (0.0, 0.0));
    let mut on_arc = 0;
    for (v, p) in m.vertices().iter().enumerate() {
        if p[0] <= 0.0 {
            assert_eq!(f.values()[v], 0.0);
        }
        if p[0] >= 0.0 && p[1] >= 0.0 && p[2].abs() < 1e-12 {
            on_arc += 1;
            assert!((f.values()[v] + g.values()[v] - 1.0).abs() < 1e-9);
        }
    }
    assert!(on_arc > 2);
}

#[test]
fn constant_fields() {
    let m = marked(3);
    for state in [QuasiState::three_point(&m).unwrap(), QuasiState::median(&m).unwrap()] {
        let c = ScalarField::constant(&m, 0.37).unwrap();
        let b = state.b_function(&m, &c).unwrap();
        assert_eq!((b.eval(0.37), b.eval(0.3700001)), (0, 1));
        assert_eq!(state.quasi_integral(&m, &c).unwrap(), 0.37);
        let f = ScalarField::from_fn(&m, |p| p[0] * p[1] + p[2]).unwrap();
        assert_eq!(state.nonlinearity_defect(&m, &f, &c).unwrap(), 0.0);
        assert_eq!(sharpness_ratio(&state, &m, &c, &c).unwrap(), 0.0);
    }
    assert_eq!(median_direct(&m, &ScalarField::constant(&m, -2.5).unwrap(), config::MEDIAN_AREA_TOL).unwrap().value, -2.5);
}

#[test]
fn height_median_is_the_equator() {
    let m = marked(4);
    let z = ScalarField::from_fn(&m, |p| p[2]).unwrap();
    let tol = config::median_oracle_tol(m.max_edge_length());
    let zeta = QuasiState::median(&m).unwrap().quasi_integral(&m, &z).unwrap();
    assert!(zeta.abs() <= tol, "{zeta}");
    let direct = median_direct(&m, &z, config::MEDIAN_AREA_TOL).unwrap().value;
    assert!(direct.abs() <= tol, "{direct}");
}

#[test]
fn bracket_norm_of_the_sphere_pair() {
    let (m, f, g) = theorem1_fields(&ConstructionParams::sphere(5, PROFILE)).unwrap();
    let l1 = poisson_l1(&m, &f, &g).unwrap().l1_norm;
    assert!((l1 - 1.0).abs() <= config::THEOREM1_L1_TOL, "{l1}");
    assert_eq!(poisson_l1(&m, &f, &f).unwrap().l1_norm, 0.0);
    let ratio = sharpness_ratio(&QuasiState::three_point(&m).unwrap(), &m, &f, &g).unwrap();
    assert!((ratio - 1.0).abs() <= config::THEOREM1_RATIO_TOL, "{ratio}");
    let cover = covering_count_diagnostic(&m, &f, &g, config::COVERING_SAMPLES, 7).unwrap();
    assert!((cover.mean - 2.0).abs() <= config::COVERING_TOL, "{cover:?}");
    let image = ImageCover::new(&m, &f, &g).unwrap();
    assert_eq!(preimage_count(&image, 0.8, 0.7), Some(0));
    assert_eq!(preimage_count(&image, -0.1, 0.2), Some(0));
    assert_eq!(preimage_count(&image, 0.25, 0.75), None);
}

#[test]
fn profile_values() {
    for p in [SmoothStepProfile::Exponential, SmoothStepProfile::Smootherstep] {
        assert_eq!(p.alpha(-1.0), 0.0);
        assert_eq!(p.alpha(2.0), 1.0);
        assert!((p.alpha(0.5) - 0.5).abs() < 1e-15);
    }
}

#[test]
fn plane_map_values() {
    assert_eq!(rho(PROFILE, 0.3, 0.4), 0.0);
    assert_eq!(rho(PROFILE, 0.0, 0.0), 0.0);
    assert_eq!(rho(PROFILE, -0.9, -0.1), 0.0);
    for k in 0..=10 {
        let a = 0.1 * k as f64 * std::f64::consts::FRAC_PI_2;
        assert!((rho(PROFILE, a.cos(), a.sin()) - 1.0).abs() < 1e-12);
    }
    assert_eq!(fg_plane(PROFILE, 1.0, 0.0), (1.0, 0.0));
    assert_eq!(fg_plane(PROFILE, 0.0, 1.0), (0.0, 1.0));
    assert_eq!(fg_plane(PROFILE, -0.5, -0.3), (0.0, 0.0));
}

fn disk_grid(step: f64) -> impl Iterator<Item = (f64, f64)> {
    let n = (1.0 / step).round() as i64;
    (-n..=n).flat_map(move |i| (-n..=n).map(move |j| (i as f64 * step, j as f64 * step)))
        .filter(|(x, y)| x * x + y * y <= 1.0)
}

#[test]
fn plane_map_range_and_boundary() {
    for profile in [SmoothStepProfile::Exponential, SmoothStepProfile::Smootherstep] {
        for (x, y) in disk_grid(0.01) {
            let (f, g) = fg_plane(profile, x, y);
            assert!(f >= 0.0 && g >= 0.0 && f + g <= 1.0 + 1e-15, "({x}, {y})");
            if !in_bijective_annulus(x, y) {
                assert!(distance_to_triangle_boundary(f, g) < 1e-9, "({x}, {y})");
            }
        }
    }
}

#[test]
fn plane_map_is_injective_on_the_annulus() {
    let mut images = Vec::new();
    // α saturates in f64 near both circles, so keep clear of them.
    for (x, y) in disk_grid(0.005).filter(|&(x, y)| in_bijective_annulus(x, y) && (0.55..0.95).contains(&(x * x + y * y))) {
        let (f, g) = fg_plane(PROFILE, x, y);
        assert!(f > 0.0 && g > 0.0 && f + g < 1.0, "({x}, {y})");
        images.push([f.to_bits(), g.to_bits()]);
    }
    let n = images.len();
    images.sort_unstable();
    images.dedup();
    assert_eq!(images.len(), n);
}

#[test]
fn seam_values_vanish() {
    let step = 1e-3;
    let n = (1.0 / step) as i64;
    let mut worst: f64 = 0.0;
    for j in -n..=n {
        let y = j as f64 * step;
        let x = step;
        if (2.0 * x).powi(2) + y * y <= 1.0 && y < 0.0 {
            let (f1, f2) = (fg_plane(PROFILE, x, y).0, fg_plane(PROFILE, 2.0 * x, y).0);
            let (g1, g2) = (fg_plane(PROFILE, y, x).1, fg_plane(PROFILE, y, 2.0 * x).1);
            worst = worst.max(f1).max(f2).max(g1).max(g2);
            worst = worst.max((f2 - f1).abs() / step).max((g2 - g1).abs() / step);
        }
    }
    for (x, y) in disk_grid(step).filter(|(x, y)| x * x + y * y < 0.49) {
        let (f, g) = fg_plane(PROFILE, x, y);
        worst = worst.max(f).max(g);
    }
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn epsilon_triangle() {
    let eps = 0.1;
    let s = theorem2_surface(&ConstructionParams::new(4, eps, PROFILE).unwrap()).unwrap();
    let m = &s.mesh;
    assert!((m.total_weight() - 1.0).abs() <= config::MASS_TOL);
    assert_eq!(m.euler_characteristic(), 2);
    for (a, b) in s.cut_masses() {
        assert!((a - 0.5).abs() <= config::MASS_TOL && (b - 0.5).abs() <= config::MASS_TOL);
    }
    assert!((s.smoothing_radius - smoothing_radius(eps)).abs() <= 1e-15);
    assert_eq!(s.spacing, spacing_for_level(4));

    let state = QuasiState::median(m).unwrap();
    let z = state.zeta_triple(m, &s.f, &s.g).unwrap();
    let tol = config::THEOREM2_ZETA_TOL;
    assert!((z.f - eps).abs() <= tol && (z.g - eps).abs() <= tol, "{z:?}");
    assert!((z.sum - (1.0 - eps)).abs() <= tol, "{z:?}");
    assert!((z.defect() - 0.7).abs() <= 3.0 * tol, "{z:?}");
    let direct = median_direct(m, &s.f, config::MEDIAN_AREA_TOL).unwrap().value;
    assert!((direct - eps).abs() <= tol, "{direct}");

    let l1 = poisson_l1(m, &s.f, &s.g).unwrap().l1_norm;
    assert!((l1 - 2.0 * s.area_u).abs() <= 1e-12, "{l1} vs {}", 2.0 * s.area_u);
    assert!((1.0 - 3.0 * eps).powi(2) < l1 && l1 < 1.0);
}

#[test]
fn small_epsilon_ratio() {
    let s = theorem2_surface(&ConstructionParams::new(4, 0.05, PROFILE).unwrap()).unwrap();
    let ratio = sharpness_ratio(&QuasiState::median(&s.mesh).unwrap(), &s.mesh, &s.f, &s.g).unwrap();
    assert!(ratio >= 0.7225 - config::THEOREM2_RATIO_TOL, "{ratio}");
}

#[test]
fn epsilon_out_of_range_is_rejected() {
    for eps in [0.0, 0.25, 0.3, -0.1, f64::NAN] {
        assert!(ConstructionParams::new(4, eps, PROFILE).is_err(), "{eps}");
    }
}
