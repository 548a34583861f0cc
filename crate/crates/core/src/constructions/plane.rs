//! The planar map `ψ = (f, g)` from the unit disk onto the closed triangle
//! `cl Δ = {u, v ≥ 0, u + v ≤ 1}`.
//!
//! On `A = {x, y > 0, ½ < x² + y² < 1}` the map is a bijection onto the open
//! triangle; everything else lands on its boundary.

use super::SmoothStepProfile;

/// `ρ(x, y) = α(2x² + 2y² − 1) · α((x + y) / √(x² + y²))`, and 0 on the disk
/// `x² + y² ≤ ½` without evaluating the quotient.
pub fn rho(profile: SmoothStepProfile, x: f64, y: f64) -> f64 {
    let r2 = x * x + y * y;
    if r2 <= 0.5 {
        return 0.0;
    }
    let radial = profile.alpha(2.0 * r2 - 1.0);
    if radial == 0.0 {
        return 0.0;
    }
    radial * profile.alpha((x + y) / r2.sqrt())
}

/// `(f(x, y), g(x, y))` for `x² + y² ≤ 1`.
///
/// Where both are positive the larger one is taken as `ρ` minus the smaller,
/// so that `f + g` rounds to `ρ` and the level set `f + g = 1` keeps its
/// shape. Panics if the angular denominator is not positive on an evaluated
/// branch, which the branch guards rule out.
pub fn fg_plane(profile: SmoothStepProfile, x: f64, y: f64) -> (f64, f64) {
    if x <= 0.0 && y <= 0.0 {
        return (0.0, 0.0);
    }
    let rho = rho(profile, x, y);
    if rho == 0.0 {
        return (0.0, 0.0);
    }
    let r = (x * x + y * y).sqrt();
    let ax = profile.alpha(x / r);
    let ay = profile.alpha(y / r);
    let denom = ax + ay;
    assert!(
        denom > 0.0,
        "angular denominator vanished at ({x}, {y}) with ρ = {rho}"
    );
    let f = if x > 0.0 { rho * ax / denom } else { 0.0 };
    let g = if y > 0.0 { rho * ay / denom } else { 0.0 };
    if f == 0.0 || g == 0.0 {
        (f, g)
    } else if f <= g {
        (f, rho - f)
    } else {
        (rho - g, g)
    }
}

/// Membership in `A`.
pub fn in_bijective_annulus(x: f64, y: f64) -> bool {
    let r2 = x * x + y * y;
    x > 0.0 && y > 0.0 && r2 > 0.5 && r2 < 1.0
}

/// Distance from `(u, v)` to the boundary of the triangle `Δ`.
pub fn distance_to_triangle_boundary(u: f64, v: f64) -> f64 {
    let hyp = (1.0 - u - v).abs() / std::f64::consts::SQRT_2;
    u.abs().min(v.abs()).min(hyp)
}
