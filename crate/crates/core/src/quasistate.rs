//! Quasi-integrals of PL fields against simple quasi-measures.
//!
//! `ζ(F) = max F − ∫_{min F}^{max F} b_F(x) dx` with `b_F(x) = τ({F < x})`.
//! Between two consecutive distinct vertex values the set `{F < x}` does not
//! change, so `b_F` is a step function sampled once per interval. For a
//! simple measure `b_F` jumps once from 0 to 1 and `ζ(F)` is the vertex value
//! at the jump.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mesh::{ScalarField, SetKind, SurfaceMesh};
use crate::quasimeasure::{QuasiMeasure, SolidSetFunction};

/// The step function `b_F`.
///
/// `breakpoints` are the sorted distinct values of `F`; `steps[k]` is the
/// value on the open interval `(breakpoints[k], breakpoints[k + 1])`.
/// Below the first breakpoint `b = 0`, above the last `b = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionFunction {
    pub breakpoints: Vec<f64>,
    pub steps: Vec<u8>,
}

impl DistributionFunction {
    pub fn eval(&self, x: f64) -> u8 {
        let n = self.breakpoints.len();
        if x <= self.breakpoints[0] {
            return 0;
        }
        if x > self.breakpoints[n - 1] {
            return 1;
        }
        // x in (breakpoints[k], breakpoints[k + 1]], where {F < x} = {F ≤ breakpoints[k]}.
        let k = self.breakpoints.partition_point(|&b| b < x) - 1;
        self.steps[k]
    }

    pub fn is_monotone(&self) -> bool {
        self.steps.windows(2).all(|w| w[0] <= w[1])
    }

    /// `max F − ∫ b_F`, integrated exactly over the steps.
    pub fn quasi_integral(&self) -> f64 {
        let max = *self.breakpoints.last().expect("at least one breakpoint");
        let area: f64 = self
            .breakpoints
            .windows(2)
            .zip(&self.steps)
            .map(|(w, &b)| f64::from(b) * (w[1] - w[0]))
            .sum();
        max - area
    }
}

/// Quasi-state induced by a simple quasi-measure.
#[derive(Debug, Clone)]
pub struct QuasiState {
    measure: QuasiMeasure,
}

impl QuasiState {
    pub fn new(measure: QuasiMeasure) -> Self {
        QuasiState { measure }
    }

    /// Aarnes' 3-point quasi-state on the mesh's first three markers.
    pub fn three_point(mesh: &SurfaceMesh) -> Result<Self> {
        let base = SolidSetFunction::three_point_from_markers(mesh)?;
        Ok(QuasiState::new(QuasiMeasure::new(mesh, base)?))
    }

    /// Median quasi-state for the mesh weights.
    pub fn median(mesh: &SurfaceMesh) -> Result<Self> {
        let base = SolidSetFunction::median(mesh)?;
        Ok(QuasiState::new(QuasiMeasure::new(mesh, base)?))
    }

    pub fn measure(&self) -> &QuasiMeasure {
        &self.measure
    }

    /// `b_F` on every interval between consecutive distinct values.
    pub fn b_function(&self, mesh: &SurfaceMesh, f: &ScalarField) -> Result<DistributionFunction> {
        self.check(mesh, f)?;
        let breakpoints = distinct_sorted(f.values());
        let steps = (0..breakpoints.len() - 1)
            .map(|k| self.step(mesh, f, breakpoints[k]))
            .collect::<Result<Vec<_>>>()?;
        Ok(DistributionFunction { breakpoints, steps })
    }

    /// `ζ(F)`, found as the jump of `b_F` by bisection over the distinct values.
    pub fn quasi_integral(&self, mesh: &SurfaceMesh, f: &ScalarField) -> Result<f64> {
        self.check(mesh, f)?;
        let values = distinct_sorted(f.values());
        let intervals = values.len() - 1;
        // Smallest k with b = 1 on interval k; `intervals` if there is none.
        let (mut lo, mut hi) = (0usize, intervals);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.step(mesh, f, values[mid])? == 1 {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(values[lo])
    }

    /// `Π(F, G) = |ζ(F + G) − ζ(F) − ζ(G)|`.
    pub fn nonlinearity_defect(
        &self,
        mesh: &SurfaceMesh,
        f: &ScalarField,
        g: &ScalarField,
    ) -> Result<f64> {
        Ok(self.zeta_triple(mesh, f, g)?.defect())
    }

    /// `ζ(F)`, `ζ(G)` and `ζ(F + G)` together.
    pub fn zeta_triple(
        &self,
        mesh: &SurfaceMesh,
        f: &ScalarField,
        g: &ScalarField,
    ) -> Result<ZetaTriple> {
        let sum = f.try_add(g)?;
        Ok(ZetaTriple {
            f: self.quasi_integral(mesh, f)?,
            g: self.quasi_integral(mesh, g)?,
            sum: self.quasi_integral(mesh, &sum)?,
        })
    }

    /// `b` on the interval just above `value`: `τ({F ≤ value})` read as an
    /// open set, which is `{F < x}` for every `x` up to the next value.
    fn step(&self, mesh: &SurfaceMesh, f: &ScalarField, value: f64) -> Result<u8> {
        let set = f.at_most(value).with_kind(SetKind::Open);
        self.measure.tau_open(mesh, &set)
    }

    fn check(&self, mesh: &SurfaceMesh, f: &ScalarField) -> Result<()> {
        if mesh.id() != self.measure.mesh_id() {
            return Err(Error::MeshMismatch);
        }
        mesh.check_field(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaTriple {
    pub f: f64,
    pub g: f64,
    pub sum: f64,
}

impl ZetaTriple {
    pub fn defect(&self) -> f64 {
        (self.sum - self.f - self.g).abs()
    }
}

fn distinct_sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Result of the direct median search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MedianLevel {
    /// Level value of the selected band.
    pub value: f64,
    /// Largest complementary area (same units as the mesh weights).
    pub max_side_area: f64,
    /// Rank cut of the selected band: the band separates the `cut`
    /// lowest vertices from the rest.
    pub cut: usize,
}

/// Median of `F` found directly from level bands, independently of the
/// quasi-measure machinery.
///
/// Vertices are ordered by `(F(v), v)`, which breaks plateaus by index. For
/// every cut of this order the band is the set of triangles with corners on
/// both sides, split into components through shared crossing edges. Each
/// band component is removed from the surface (with its vertices) and the
/// remaining vertices are grouped into connected pieces. The band whose
/// largest piece is smallest is returned, provided that piece has area at
/// most `(½ + area_tol) · total`.
pub fn median_direct(mesh: &SurfaceMesh, f: &ScalarField, area_tol: f64) -> Result<MedianLevel> {
    mesh.check_field(f)?;
    let n = mesh.num_vertices();
    let values = f.values();
    let total = mesh.total_weight();
    let limit = (0.5 + area_tol) * total;
    let masses = mesh.vertex_masses();

    if values.iter().all(|&v| v == values[0]) {
        return Ok(MedianLevel {
            value: values[0],
            max_side_area: 0.0,
            cut: 0,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut rank = vec![0usize; n];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }

    let tris = mesh.triangles();
    let tri_neighbors = triangle_neighbors(mesh);

    let mut best: Option<MedianLevel> = None;
    let mut band_label = vec![NONE; tris.len()];
    let mut in_band_vertex = vec![false; n];
    let mut seen = vec![false; n];
    let mut stack = Vec::new();

    for cut in 1..n {
        let low = |v: usize| rank[v] < cut;
        let band: Vec<usize> = (0..tris.len())
            .filter(|&t| {
                let l = tris[t].iter().filter(|&&v| low(v)).count();
                l == 1 || l == 2
            })
            .collect();
        for &t in &band {
            band_label[t] = PENDING;
        }
        // Band components: triangles joined across edges that cross the cut.
        let mut components: Vec<Vec<usize>> = Vec::new();
        for &t in &band {
            if band_label[t] != PENDING {
                continue;
            }
            let id = components.len();
            let mut members = vec![t];
            band_label[t] = id;
            let mut head = 0;
            while head < members.len() {
                let s = members[head];
                head += 1;
                for k in 0..3 {
                    let (a, b) = (tris[s][k], tris[s][(k + 1) % 3]);
                    if low(a) == low(b) {
                        continue;
                    }
                    let nb = tri_neighbors[s][k];
                    if band_label[nb] == PENDING {
                        band_label[nb] = id;
                        members.push(nb);
                    }
                }
            }
            components.push(members);
        }

        let value = 0.5 * (values[order[cut - 1]] + values[order[cut]]);
        let bound = best.map_or(limit, |b| b.max_side_area.min(limit));
        for members in &components {
            for &t in members {
                for &v in &tris[t] {
                    in_band_vertex[v] = true;
                }
            }
            seen.iter_mut().for_each(|s| *s = false);
            let mut max_side: f64 = 0.0;
            let mut rejected = false;
            'pieces: for start in 0..n {
                if in_band_vertex[start] || seen[start] {
                    continue;
                }
                seen[start] = true;
                stack.push(start);
                let mut area = 0.0;
                while let Some(v) = stack.pop() {
                    area += masses[v];
                    if area > bound {
                        rejected = true;
                        stack.clear();
                        break 'pieces;
                    }
                    for &w in mesh.neighbors(v) {
                        if !in_band_vertex[w] && !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
                max_side = max_side.max(area);
            }
            for &t in members {
                for &v in &tris[t] {
                    in_band_vertex[v] = false;
                }
            }
            let better = match best {
                None => true,
                Some(b) => max_side < b.max_side_area,
            };
            if !rejected && better {
                best = Some(MedianLevel {
                    value,
                    max_side_area: max_side,
                    cut,
                });
            }
        }
        for &t in &band {
            band_label[t] = NONE;
        }
    }
    best.ok_or(Error::MedianNotFound)
}

const NONE: usize = usize::MAX;
const PENDING: usize = usize::MAX - 1;

/// For each triangle and each corner `k`, the triangle across edge `(k, k+1)`.
fn triangle_neighbors(mesh: &SurfaceMesh) -> Vec<[usize; 3]> {
    use std::collections::HashMap;
    let tris = mesh.triangles();
    let mut owner: HashMap<(usize, usize), usize> = HashMap::with_capacity(3 * tris.len());
    for (t, tri) in tris.iter().enumerate() {
        for k in 0..3 {
            owner.insert((tri[k], tri[(k + 1) % 3]), t);
        }
    }
    tris.iter()
        .map(|tri| {
            let mut out = [0; 3];
            for k in 0..3 {
                out[k] = owner[&(tri[(k + 1) % 3], tri[k])];
            }
            out
        })
        .collect()
}
