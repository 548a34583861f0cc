//! The doubled ε-triangle.
//!
//! The triangle with corners `A = (0,0)`, `B = (0,1)`, `C = (1,0)` has its
//! corners rounded by circular fillets and is cut by the segments
//! `DK: y = ε`, `IL: x = ε` and `EJ: x + y = 1 − ε` into seven regions. The
//! planar region `U` is triangulated with the segments as constrained edge
//! paths, then two oppositely oriented copies are glued along `∂U`, giving a
//! PL sphere that projects two-to-one onto `U`.

use std::collections::HashMap;

use serde::Serialize;
use spade::{ConstrainedDelaunayTriangulation, Point2, Triangulation};

use super::ConstructionParams;
use crate::error::{Error, Result};
use crate::mesh::{ScalarField, SurfaceMesh};
use crate::poisson::neumaier_sum;

/// The seven pieces of `U`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Region {
    /// Corner at `A`: `x < ε, y < ε`.
    U1,
    /// Corner at `B`: `x < ε, x + y > 1 − ε`.
    U2,
    /// Corner at `C`: `y < ε, x + y > 1 − ε`.
    U3,
    /// Left strip.
    U4,
    /// Diagonal strip.
    U5,
    /// Bottom strip.
    U6,
    /// Inner triangle.
    U7,
}

impl Region {
    pub const ALL: [Region; 7] = [
        Region::U1,
        Region::U2,
        Region::U3,
        Region::U4,
        Region::U5,
        Region::U6,
        Region::U7,
    ];

    /// Mass of the region's preimage (both sheets together).
    pub fn target_mass(self) -> f64 {
        match self {
            Region::U1 | Region::U2 | Region::U3 => 0.2,
            _ => 0.1,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    fn classify(x: f64, y: f64, eps: f64) -> Region {
        let left = x < eps;
        let low = y < eps;
        let diag = x + y > 1.0 - eps;
        match (left, low, diag) {
            (true, true, _) => Region::U1,
            (true, _, true) => Region::U2,
            (_, true, true) => Region::U3,
            (true, false, false) => Region::U4,
            (false, false, true) => Region::U5,
            (false, true, false) => Region::U6,
            (false, false, false) => Region::U7,
        }
    }

    /// Closed description, used to check that a triangle's corners all lie
    /// in the region of its centroid.
    fn contains_closed(self, x: f64, y: f64, eps: f64) -> bool {
        const TOL: f64 = 1e-12;
        let le = |a: f64, b: f64| a <= b + TOL;
        match self {
            Region::U1 => le(x, eps) && le(y, eps),
            Region::U2 => le(x, eps) && le(1.0 - eps, x + y),
            Region::U3 => le(y, eps) && le(1.0 - eps, x + y),
            Region::U4 => le(x, eps) && le(eps, y) && le(x + y, 1.0 - eps),
            Region::U5 => le(eps, x) && le(eps, y) && le(1.0 - eps, x + y),
            Region::U6 => le(eps, x) && le(y, eps) && le(x + y, 1.0 - eps),
            Region::U7 => le(eps, x) && le(eps, y) && le(x + y, 1.0 - eps),
        }
    }

    /// Sides of the three cut curves.
    pub fn left_of_il(self) -> bool {
        matches!(self, Region::U1 | Region::U4 | Region::U2)
    }

    pub fn below_dk(self) -> bool {
        matches!(self, Region::U1 | Region::U6 | Region::U3)
    }

    pub fn beyond_ej(self) -> bool {
        matches!(self, Region::U2 | Region::U5 | Region::U3)
    }
}

/// The constructed surface with its fields and bookkeeping.
#[derive(Debug, Clone)]
pub struct Theorem2Surface {
    pub mesh: SurfaceMesh,
    /// `F = x`.
    pub f: ScalarField,
    /// `G = y`.
    pub g: ScalarField,
    /// Region of each triangle of the doubled mesh.
    pub regions: Vec<Region>,
    /// Area of the PL region `U` (one sheet).
    pub area_u: f64,
    /// Radius of the corner fillets.
    pub smoothing_radius: f64,
    /// Target edge length of the planar triangulation.
    pub spacing: f64,
    pub planar_vertices: usize,
    pub planar_triangles: usize,
}

impl Theorem2Surface {
    /// Masses on the two sides of the doubled curves `IL`, `DK` and `EJ`,
    /// as `(x < ε, rest)`, `(y < ε, rest)` and `(x + y > 1 − ε, rest)`.
    pub fn cut_masses(&self) -> [(f64, f64); 3] {
        let side = |pred: fn(Region) -> bool| {
            let (mut inside, mut outside) = (Vec::new(), Vec::new());
            for (r, &w) in self.regions.iter().zip(self.mesh.weights()) {
                if pred(*r) {
                    inside.push(w);
                } else {
                    outside.push(w);
                }
            }
            (neumaier_sum(&inside), neumaier_sum(&outside))
        };
        [
            side(Region::left_of_il),
            side(Region::below_dk),
            side(Region::beyond_ej),
        ]
    }

    /// Total mass per region, in [`Region::ALL`] order.
    pub fn region_masses(&self) -> [f64; 7] {
        Region::ALL.map(|region| {
            let w: Vec<f64> = self
                .regions
                .iter()
                .zip(self.mesh.weights())
                .filter(|(r, _)| **r == region)
                .map(|(_, &w)| w)
                .collect();
            neumaier_sum(&w)
        })
    }
}

/// Planar spacing used at a given refinement level.
pub fn spacing_for_level(level: u32) -> f64 {
    1.0 / (4.0 * 2f64.powi(level as i32))
}

/// Fillet radius for a given ε. Tangent points at the 45° corners sit
/// `r / tan(22.5°) ≈ 2.414 r` from the corner and must stay closer than the
/// segment endpoints, which requires `r < (√2 − 1) ε`.
pub fn smoothing_radius(epsilon: f64) -> f64 {
    0.25 * epsilon
}

struct PointSet {
    points: Vec<[f64; 2]>,
    index: HashMap<(u64, u64), usize>,
}

impl PointSet {
    fn new() -> Self {
        PointSet {
            points: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn add(&mut self, p: [f64; 2]) -> usize {
        let key = (p[0].to_bits(), p[1].to_bits());
        *self.index.entry(key).or_insert_with(|| {
            self.points.push(p);
            self.points.len() - 1
        })
    }
}

fn lerp(a: [f64; 2], b: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t]
}

fn len(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt()
}

/// Points from `a` to `b` inclusive, passing exactly through each stop.
fn polyline(stops: &[[f64; 2]], spacing: f64) -> Vec<[f64; 2]> {
    let mut out = vec![stops[0]];
    for w in stops.windows(2) {
        let n = (len(w[0], w[1]) / spacing).ceil().max(1.0) as usize;
        for k in 1..n {
            out.push(lerp(w[0], w[1], k as f64 / n as f64));
        }
        out.push(w[1]);
    }
    out
}

/// Fillet at `corner` between unit edge directions `d1` (arc start side)
/// and `d2` (arc end side); returns points from the first tangent point to
/// the second, inclusive.
fn fillet(corner: [f64; 2], d1: [f64; 2], d2: [f64; 2], r: f64, spacing: f64) -> Vec<[f64; 2]> {
    let cos_theta = d1[0] * d2[0] + d1[1] * d2[1];
    let half = 0.5 * cos_theta.clamp(-1.0, 1.0).acos();
    let t = r / half.tan();
    let t1 = [corner[0] + t * d1[0], corner[1] + t * d1[1]];
    let t2 = [corner[0] + t * d2[0], corner[1] + t * d2[1]];
    let bis = {
        let b = [d1[0] + d2[0], d1[1] + d2[1]];
        let n = (b[0] * b[0] + b[1] * b[1]).sqrt();
        [b[0] / n, b[1] / n]
    };
    let c = r / half.sin();
    let center = [corner[0] + c * bis[0], corner[1] + c * bis[1]];
    let a1 = (t1[1] - center[1]).atan2(t1[0] - center[0]);
    let mut a2 = (t2[1] - center[1]).atan2(t2[0] - center[0]);
    let pi = std::f64::consts::PI;
    // Short way round.
    while a2 - a1 > pi {
        a2 -= 2.0 * pi;
    }
    while a1 - a2 > pi {
        a2 += 2.0 * pi;
    }
    let sweep = a2 - a1;
    let n = ((sweep.abs() * r) / spacing).ceil().max(3.0) as usize;
    let mut out = vec![t1];
    for k in 1..n {
        let a = a1 + sweep * k as f64 / n as f64;
        out.push([center[0] + r * a.cos(), center[1] + r * a.sin()]);
    }
    out.push(t2);
    out
}

/// Rounds to a multiple of `2⁻⁵²`, so that `1 − x` is exact for `x ∈ [0, 1]`.
fn snap(x: f64) -> f64 {
    let scale = 2f64.powi(52);
    (x * scale).round() / scale
}

/// Moves a point onto `x + y = 1` exactly, keeping the exact-predicate
/// triangulation from seeing a dented hypotenuse.
fn on_hypotenuse(p: [f64; 2]) -> [f64; 2] {
    let x = snap(p[0]);
    [x, 1.0 - x]
}

/// Boundary of the smoothed triangle, counter-clockwise, without repeating
/// the first point.
fn boundary_polygon(eps: f64, r: f64, h: f64) -> Vec<[f64; 2]> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let a = [0.0, 0.0];
    let b = [0.0, 1.0];
    let c = [1.0, 0.0];

    let fa = fillet(a, [0.0, 1.0], [1.0, 0.0], r, h);
    let mut fc = fillet(c, [-1.0, 0.0], [-s, s], r, h);
    let mut fb = fillet(b, [s, -s], [0.0, -1.0], r, h);
    let last = fc.len() - 1;
    fc[last] = on_hypotenuse(fc[last]);
    fb[0] = on_hypotenuse(fb[0]);

    let bottom = polyline(
        &[*fa.last().unwrap(), [eps, 0.0], [1.0 - eps, 0.0], fc[0]],
        h,
    );
    let hyp: Vec<[f64; 2]> = polyline(
        &[*fc.last().unwrap(), [1.0 - eps, eps], [eps, 1.0 - eps], fb[0]],
        h,
    )
    .into_iter()
    .map(on_hypotenuse)
    .collect();
    let left = polyline(
        &[*fb.last().unwrap(), [0.0, 1.0 - eps], [0.0, eps], fa[0]],
        h,
    );

    let mut out = Vec::new();
    for piece in [&fa, &bottom, &fc, &hyp, &fb, &left] {
        for p in piece.iter() {
            if out.last() != Some(p) {
                out.push(*p);
            }
        }
    }
    if out.first() == out.last() {
        out.pop();
    }
    out
}

fn polygon_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    0.5 * (0..n)
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
}

fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let t = ((ap[0] * ab[0] + ap[1] * ab[1]) / (ab[0] * ab[0] + ab[1] * ab[1])).clamp(0.0, 1.0);
    len(p, lerp(a, b, t))
}

/// Signed distance to the boundary of a convex counter-clockwise polygon
/// (positive inside).
fn convex_inset(poly: &[[f64; 2]], p: [f64; 2]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
            cross / len(a, b)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Builds the doubled surface for `params.epsilon` at `params.level`.
pub fn theorem2_surface(params: &ConstructionParams) -> Result<Theorem2Surface> {
    params.validate_epsilon()?;
    let eps = snap(params.epsilon);
    let h = spacing_for_level(params.level);
    let r = smoothing_radius(eps);

    let boundary = boundary_polygon(eps, r, h);
    let area_u = polygon_area(&boundary);

    let d = [0.0, eps];
    let e = [0.0, 1.0 - eps];
    let i = [eps, 0.0];
    let j = [1.0 - eps, 0.0];
    let k = [1.0 - eps, eps];
    let l = [eps, 1.0 - eps];
    let x_il_dk = [eps, eps];
    let x_dk_ej = [1.0 - 2.0 * eps, eps];
    let x_il_ej = [eps, 1.0 - 2.0 * eps];
    let segments = [
        polyline(&[i, x_il_dk, x_il_ej, l], h),
        polyline(&[d, x_il_dk, x_dk_ej, k], h),
        polyline(&[e, x_il_ej, x_dk_ej, j], h),
    ];
    let lines = [(i, l), (d, k), (e, j)];

    let mut pts = PointSet::new();
    let boundary_ids: Vec<usize> = boundary.iter().map(|&p| pts.add(p)).collect();
    let segment_ids: Vec<Vec<usize>> = segments
        .iter()
        .map(|s| s.iter().map(|&p| pts.add(p)).collect())
        .collect();

    let margin = 0.45 * h;
    let steps = (1.0 / h).ceil() as usize;
    for a in 0..=steps {
        for b in 0..=steps - a {
            let p = [a as f64 * h, b as f64 * h];
            if convex_inset(&boundary, p) < margin {
                continue;
            }
            if lines
                .iter()
                .any(|&(s, t)| point_segment_distance(p, s, t) < margin)
            {
                continue;
            }
            pts.add(p);
        }
    }

    let mut cdt: ConstrainedDelaunayTriangulation<Point2<f64>> =
        ConstrainedDelaunayTriangulation::new();
    let mut handles = Vec::with_capacity(pts.points.len());
    for p in &pts.points {
        let handle = cdt
            .insert(Point2::new(p[0], p[1]))
            .map_err(|e| Error::InvariantViolation(format!("triangulation insert: {e:?}")))?;
        handles.push(handle);
    }
    if cdt.num_vertices() != pts.points.len() {
        return Err(Error::InvariantViolation(
            "duplicate points in the planar triangulation".into(),
        ));
    }
    let mut constrain = |a: usize, b: usize| {
        if cdt.can_add_constraint(handles[a], handles[b]) {
            cdt.add_constraint(handles[a], handles[b]);
            Ok(())
        } else {
            Err(Error::InvariantViolation("crossing constraint edges".into()))
        }
    };
    let nb = boundary_ids.len();
    for q in 0..nb {
        constrain(boundary_ids[q], boundary_ids[(q + 1) % nb])?;
    }
    for ids in &segment_ids {
        for w in ids.windows(2) {
            constrain(w[0], w[1])?;
        }
    }

    // A chord between two boundary vertices would be shared by both sheets
    // after gluing; split every such chord at its midpoint.
    let boundary_handle: std::collections::HashSet<usize> =
        boundary_ids.iter().map(|&b| handles[b].index()).collect();
    loop {
        let chords: Vec<[f64; 2]> = cdt
            .undirected_edges()
            .filter(|e| !e.is_constraint_edge())
            .filter_map(|e| {
                let [a, b] = e.vertices();
                if boundary_handle.contains(&a.fix().index()) && boundary_handle.contains(&b.fix().index()) {
                    let (pa, pb) = (a.position(), b.position());
                    Some([0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)])
                } else {
                    None
                }
            })
            .collect();
        if chords.is_empty() {
            break;
        }
        for m in chords {
            let before = pts.points.len();
            if pts.add(m) != before {
                return Err(Error::InvariantViolation(format!("chord midpoint {m:?} already present")));
            }
            let handle = cdt
                .insert(Point2::new(m[0], m[1]))
                .map_err(|e| Error::InvariantViolation(format!("triangulation insert: {e:?}")))?;
            handles.push(handle);
        }
    }

    // Spade handle index -> point index.
    let mut point_of_handle = vec![usize::MAX; cdt.num_vertices()];
    for (idx, h) in handles.iter().enumerate() {
        point_of_handle[h.index()] = idx;
    }

    let mut planar: Vec<[usize; 3]> = Vec::with_capacity(cdt.num_inner_faces());
    let mut regions_planar = Vec::with_capacity(cdt.num_inner_faces());
    let mut areas = Vec::with_capacity(cdt.num_inner_faces());
    for face in cdt.inner_faces() {
        let tri = face.vertices().map(|v| point_of_handle[v.fix().index()]);
        let [p, q, s] = tri.map(|v| pts.points[v]);
        let centroid = [(p[0] + q[0] + s[0]) / 3.0, (p[1] + q[1] + s[1]) / 3.0];
        if convex_inset(&boundary, centroid) <= 0.0 {
            continue;
        }
        let area = 0.5 * ((q[0] - p[0]) * (s[1] - p[1]) - (s[0] - p[0]) * (q[1] - p[1]));
        if area <= 0.0 {
            return Err(Error::InvariantViolation("non-positive planar triangle".into()));
        }
        let region = Region::classify(centroid[0], centroid[1], eps);
        if ![p, q, s]
            .iter()
            .all(|v| region.contains_closed(v[0], v[1], eps))
        {
            return Err(Error::InvariantViolation(format!(
                "triangle crosses a cut segment near {centroid:?}"
            )));
        }
        planar.push(tri);
        regions_planar.push(region);
        areas.push(area);
    }

    let mut region_area = [0.0; 7];
    for (rg, a) in regions_planar.iter().zip(&areas) {
        region_area[rg.index()] += a;
    }
    if region_area.iter().any(|&a| a <= 0.0) {
        return Err(Error::InvariantViolation("empty region".into()));
    }

    // Double: boundary vertices are shared, interior ones get a twin.
    let n_planar = pts.points.len();
    let mut on_boundary = vec![false; n_planar];
    for &b in &boundary_ids {
        on_boundary[b] = true;
    }
    let mut twin = vec![0usize; n_planar];
    let mut next = n_planar;
    for v in 0..n_planar {
        if on_boundary[v] {
            twin[v] = v;
        } else {
            twin[v] = next;
            next += 1;
        }
    }
    let mut vertices: Vec<[f64; 3]> = pts.points.iter().map(|p| [p[0], p[1], 0.0]).collect();
    vertices.resize(next, [0.0; 3]);
    for v in 0..n_planar {
        if !on_boundary[v] {
            vertices[twin[v]] = [pts.points[v][0], pts.points[v][1], 0.0];
        }
    }

    let mut triangles = Vec::with_capacity(2 * planar.len());
    let mut weights = Vec::with_capacity(2 * planar.len());
    let mut regions = Vec::with_capacity(2 * planar.len());
    for ((tri, rg), a) in planar.iter().zip(&regions_planar).zip(&areas) {
        triangles.push(*tri);
        weights.push(a / region_area[rg.index()] * rg.target_mass() / 2.0);
        regions.push(*rg);
    }
    for ((tri, rg), a) in planar.iter().zip(&regions_planar).zip(&areas) {
        triangles.push([twin[tri[0]], twin[tri[2]], twin[tri[1]]]);
        weights.push(a / region_area[rg.index()] * rg.target_mass() / 2.0);
        regions.push(*rg);
    }

    let mesh = SurfaceMesh::new(vertices, triangles, weights, Vec::new())?;
    let f = ScalarField::from_fn(&mesh, |p| p[0])?;
    let g = ScalarField::from_fn(&mesh, |p| p[1])?;
    Ok(Theorem2Surface {
        mesh,
        f,
        g,
        regions,
        area_u,
        smoothing_radius: r,
        spacing: h,
        planar_vertices: n_planar,
        planar_triangles: planar.len(),
    })
}
