//! L1 norm of the Poisson bracket of two PL fields.
//!
//! On a surface `dF ∧ dG = −{F,G}·ω`, so `‖{F,G}‖₁ = ∫ |dF ∧ dG|`, which does
//! not depend on the area form or on the embedding. For PL fields `dF ∧ dG`
//! is constant on each triangle and its integral over the triangle is the
//! signed area of the image triangle `(F, G)(t)` in the plane.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mesh::{ScalarField, SurfaceMesh};
use crate::quasistate::QuasiState;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BracketReport {
    /// `Σ_t |area((F, G)(t))|`.
    pub l1_norm: f64,
    /// Contribution of each triangle, in mesh order.
    pub per_triangle: Vec<f64>,
}

/// Exact `∫ |dF ∧ dG|` for the PL interpolants of `f` and `g`.
pub fn poisson_l1(mesh: &SurfaceMesh, f: &ScalarField, g: &ScalarField) -> Result<BracketReport> {
    mesh.check_field(f)?;
    mesh.check_field(g)?;
    let (fv, gv) = (f.values(), g.values());
    let per_triangle: Vec<f64> = mesh
        .triangles()
        .iter()
        .map(|&[i, j, k]| {
            let (df1, dg1) = (fv[j] - fv[i], gv[j] - gv[i]);
            let (df2, dg2) = (fv[k] - fv[i], gv[k] - gv[i]);
            0.5 * (df1 * dg2 - df2 * dg1).abs()
        })
        .collect();
    Ok(BracketReport {
        l1_norm: neumaier_sum(&per_triangle),
        per_triangle,
    })
}

/// `Π(F,G)² / ‖{F,G}‖₁`.
///
/// Returns 0 when both numerator and denominator vanish and `+∞` when only
/// the bracket vanishes; the latter cannot happen for smooth fields and
/// flags a discretization inconsistency.
pub fn sharpness_ratio(
    state: &QuasiState,
    mesh: &SurfaceMesh,
    f: &ScalarField,
    g: &ScalarField,
) -> Result<f64> {
    let defect = state.nonlinearity_defect(mesh, f, g)?;
    let norm = poisson_l1(mesh, f, g)?.l1_norm;
    Ok(ratio(defect, norm))
}

pub(crate) fn ratio(defect: f64, norm: f64) -> f64 {
    if norm > 0.0 {
        defect * defect / norm
    } else if defect == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Compensated sum in slice order.
pub(crate) fn neumaier_sum(xs: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Monte-Carlo and point-query access to the covering multiplicity of the
/// PL map `(F, G)`: how many triangles' images contain a given point.
#[derive(Debug, Clone)]
pub struct ImageCover {
    images: Vec<[[f64; 2]; 3]>,
    min: [f64; 2],
    cell: [f64; 2],
    res: usize,
    bins: Vec<Vec<usize>>,
}

impl ImageCover {
    pub fn new(mesh: &SurfaceMesh, f: &ScalarField, g: &ScalarField) -> Result<Self> {
        mesh.check_field(f)?;
        mesh.check_field(g)?;
        let (fv, gv) = (f.values(), g.values());
        let images: Vec<[[f64; 2]; 3]> = mesh
            .triangles()
            .iter()
            .map(|t| t.map(|v| [fv[v], gv[v]]))
            .collect();
        let (fmin, fmax) = (f.min(), f.max());
        let (gmin, gmax) = (g.min(), g.max());
        if !(fmax > fmin && gmax > gmin) {
            return Err(Error::InvalidParameter(
                "image of (F, G) is degenerate".into(),
            ));
        }
        let res = ((images.len() as f64).sqrt() as usize).clamp(1, 256);
        let cell = [(fmax - fmin) / res as f64, (gmax - gmin) / res as f64];
        let mut cover = ImageCover {
            images,
            min: [fmin, gmin],
            cell,
            res,
            bins: vec![Vec::new(); res * res],
        };
        for t in 0..cover.images.len() {
            let tri = cover.images[t];
            if signed_area(&tri) == 0.0 {
                continue;
            }
            let lo = [0, 1].map(|d| tri.iter().map(|p| p[d]).fold(f64::INFINITY, f64::min));
            let hi = [0, 1].map(|d| tri.iter().map(|p| p[d]).fold(f64::NEG_INFINITY, f64::max));
            let (i0, j0) = cover.bin_of(lo);
            let (i1, j1) = cover.bin_of(hi);
            for i in i0..=i1 {
                for j in j0..=j1 {
                    cover.bins[i * cover.res + j].push(t);
                }
            }
        }
        Ok(cover)
    }

    fn bin_of(&self, p: [f64; 2]) -> (usize, usize) {
        let idx = |d: usize| {
            let x = ((p[d] - self.min[d]) / self.cell[d]).floor();
            (x.max(0.0) as usize).min(self.res - 1)
        };
        (idx(0), idx(1))
    }

    /// Number of non-degenerate image triangles containing `p` in their
    /// interior.
    pub fn count(&self, p: [f64; 2]) -> usize {
        let inside_box = (0..2).all(|d| {
            p[d] >= self.min[d] && p[d] <= self.min[d] + self.cell[d] * self.res as f64
        });
        if !inside_box {
            return 0;
        }
        let (i, j) = self.bin_of(p);
        self.bins[i * self.res + j]
            .iter()
            .filter(|&&t| strictly_inside(&self.images[t], p))
            .count()
    }
}

fn signed_area(t: &[[f64; 2]; 3]) -> f64 {
    0.5 * ((t[1][0] - t[0][0]) * (t[2][1] - t[0][1]) - (t[2][0] - t[0][0]) * (t[1][1] - t[0][1]))
}

fn strictly_inside(t: &[[f64; 2]; 3], p: [f64; 2]) -> bool {
    let d = signed_area(t);
    let s = |a: [f64; 2], b: [f64; 2]| {
        0.5 * ((a[0] - p[0]) * (b[1] - p[1]) - (b[0] - p[0]) * (a[1] - p[1]))
    };
    let l0 = s(t[1], t[2]) / d;
    let l1 = s(t[2], t[0]) / d;
    let l2 = s(t[0], t[1]) / d;
    l0 > 0.0 && l1 > 0.0 && l2 > 0.0
}
