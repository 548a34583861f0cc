//! The two extremal configurations.
//!
//! * [`theorem1_fields`]: `F = f ∘ P`, `G = g ∘ P` on the unit sphere marked
//!   at the three coordinate axes, where `P` drops the `z` coordinate and
//!   `(f, g)` is the smoothed map of [`plane`]. Under the 3-point quasi-state
//!   `Π(F, G) = 1 = ‖{F, G}‖₁`.
//! * [`theorem2_surface`]: the doubled, corner-smoothed triangle with
//!   `F = x`, `G = y` and an area form that gives the median quasi-state
//!   `ζ(F) = ζ(G) = ε`, `ζ(F + G) = 1 − ε`.

pub mod plane;
mod profile;
mod surface;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::{build_marked_icosphere, ScalarField, SurfaceMesh};
use crate::poisson::ImageCover;

pub use plane::{fg_plane, rho};
pub use profile::SmoothStepProfile;
pub use surface::{smoothing_radius, spacing_for_level, theorem2_surface, Region, Theorem2Surface};

/// Marker points of the 3-point quasi-state used by the sphere construction.
pub const SPHERE_MARKERS: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub level: u32,
    /// Segment offset of the triangle construction, in `(0, ¼)`.
    pub epsilon: f64,
    pub profile: SmoothStepProfile,
}

impl Default for ConstructionParams {
    fn default() -> Self {
        ConstructionParams {
            level: 4,
            epsilon: 0.1,
            profile: SmoothStepProfile::Exponential,
        }
    }
}

impl ConstructionParams {
    pub fn new(level: u32, epsilon: f64, profile: SmoothStepProfile) -> Result<Self> {
        let p = ConstructionParams {
            level,
            epsilon,
            profile,
        };
        p.validate_epsilon()?;
        Ok(p)
    }

    pub fn sphere(level: u32, profile: SmoothStepProfile) -> Self {
        ConstructionParams {
            level,
            profile,
            ..Default::default()
        }
    }

    pub fn validate_epsilon(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 0.25) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0, 1/4), got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Marked icosphere at `params.level` with `F(v) = f(x_v, y_v)` and
/// `G(v) = g(x_v, y_v)`.
pub fn theorem1_fields(params: &ConstructionParams) -> Result<(SurfaceMesh, ScalarField, ScalarField)> {
    let mesh = build_marked_icosphere(params.level, &SPHERE_MARKERS)?;
    let (fs, gs): (Vec<f64>, Vec<f64>) = mesh
        .vertices()
        .iter()
        .map(|p| fg_plane(params.profile, p[0], p[1]))
        .unzip();
    let f = ScalarField::new(&mesh, fs)?;
    let g = ScalarField::new(&mesh, gs)?;
    Ok((mesh, f, g))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoveringStats {
    pub mean: f64,
    pub samples: usize,
    /// Draws rejected because they fell on the boundary of the triangle.
    pub excluded: usize,
}

/// Preimage count of `(u, v)` under the PL map `(F, G)`; `None` on the
/// boundary of the triangle `Δ`, where the count is not defined.
pub fn preimage_count(cover: &ImageCover, u: f64, v: f64) -> Option<usize> {
    let on_boundary = (u == 0.0 && (0.0..=1.0).contains(&v))
        || (v == 0.0 && (0.0..=1.0).contains(&u))
        || (u >= 0.0 && v >= 0.0 && u + v == 1.0);
    if on_boundary {
        None
    } else {
        Some(cover.count([u, v]))
    }
}

/// Mean number of triangles whose `(F, G)`-image contains a uniform random
/// interior point of `Δ`.
pub fn covering_count_diagnostic(
    mesh: &SurfaceMesh,
    f: &ScalarField,
    g: &ScalarField,
    samples: usize,
    seed: u64,
) -> Result<CoveringStats> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive".into()));
    }
    let cover = ImageCover::new(mesh, f, g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut total, mut taken, mut excluded) = (0usize, 0usize, 0usize);
    while taken < samples {
        let (mut u, mut v): (f64, f64) = (rng.gen(), rng.gen());
        if u + v > 1.0 {
            (u, v) = (1.0 - u, 1.0 - v);
        }
        match preimage_count(&cover, u, v) {
            Some(c) => {
                total += c;
                taken += 1;
            }
            None => excluded += 1,
        }
    }
    Ok(CoveringStats {
        mean: total as f64 / samples as f64,
        samples,
        excluded,
    })
}
