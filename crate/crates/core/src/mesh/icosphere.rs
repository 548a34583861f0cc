use std::collections::HashMap;

use super::SurfaceMesh;
use crate::error::{Error, Result};

const BASE_FACES: [[usize; 3]; 20] = [
    [0, 11, 5],
    [0, 5, 1],
    [0, 1, 7],
    [0, 7, 10],
    [0, 10, 11],
    [1, 5, 9],
    [5, 11, 4],
    [11, 10, 2],
    [10, 7, 6],
    [7, 1, 8],
    [3, 9, 4],
    [3, 4, 2],
    [3, 2, 6],
    [3, 6, 8],
    [3, 8, 9],
    [4, 9, 5],
    [2, 4, 11],
    [6, 2, 10],
    [8, 6, 7],
    [9, 8, 1],
];

fn normalize(p: [f64; 3]) -> [f64; 3] {
    let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    [p[0] / n, p[1] / n, p[2] / n]
}

fn subdivided(level: u32) -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices: Vec<[f64; 3]> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .into_iter()
    .map(normalize)
    .collect();
    let mut faces = BASE_FACES.to_vec();

    for _ in 0..level {
        let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<[f64; 3]>| {
            let key = (a.min(b), a.max(b));
            *cache.entry(key).or_insert_with(|| {
                let (p, q) = (vertices[a], vertices[b]);
                vertices.push(normalize([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                vertices.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for &[a, b, c] in &faces {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }
    (vertices, faces)
}

/// Area of the spherical triangle with unit-vector corners (Van Oosterom–Strackee).
fn spherical_area(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> f64 {
    let dot = |u: &[f64; 3], v: &[f64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    let cross = [
        b[1] * c[2] - b[2] * c[1],
        b[2] * c[0] - b[0] * c[2],
        b[0] * c[1] - b[1] * c[0],
    ];
    let triple = dot(a, &cross).abs();
    let denom = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    2.0 * triple.atan2(denom)
}

fn normalized_spherical_weights(vertices: &[[f64; 3]], faces: &[[usize; 3]]) -> Vec<f64> {
    let areas: Vec<f64> = faces
        .iter()
        .map(|&[a, b, c]| spherical_area(&vertices[a], &vertices[b], &vertices[c]))
        .collect();
    let total: f64 = areas.iter().sum();
    areas.into_iter().map(|a| a / total).collect()
}

/// Icosahedron subdivided `level` times and projected to the unit sphere,
/// weighted by normalized spherical triangle area. No markers.
pub fn build_icosphere(level: u32) -> Result<SurfaceMesh> {
    let (vertices, faces) = subdivided(level);
    let weights = normalized_spherical_weights(&vertices, &faces);
    SurfaceMesh::new(vertices, faces, weights, Vec::new())
}

/// Icosphere whose nearest vertex to each marker is moved onto the marker,
/// so markers are exact mesh vertices (listed in `markers()` in input order).
pub fn build_marked_icosphere(level: u32, markers: &[[f64; 3]]) -> Result<SurfaceMesh> {
    let (mut vertices, faces) = subdivided(level);
    let mut snapped: Vec<usize> = Vec::with_capacity(markers.len());
    for marker in markers {
        let norm = (marker[0].powi(2) + marker[1].powi(2) + marker[2].powi(2)).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidParameter("marker must be a nonzero point".into()));
        }
        let target = normalize(*marker);
        let nearest = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (i, super::dist(v, &target)))
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
            .0;
        if snapped.contains(&nearest) {
            return Err(Error::MarkersTooClose);
        }
        snapped.push(nearest);
    }
    for (&v, marker) in snapped.iter().zip(markers) {
        vertices[v] = normalize(*marker);
    }
    let weights = normalized_spherical_weights(&vertices, &faces);
    SurfaceMesh::new(vertices, faces, weights, snapped)
}
