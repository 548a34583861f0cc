use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Smooth monotone step `α : ℝ → [0, 1]` with `α = 0` on `s ≤ 0`, `α = 1`
/// on `s ≥ 1` and `α' > 0` on `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmoothStepProfile {
    /// `h(s) / (h(s) + h(1 − s))` with `h(s) = exp(−1/s)`; flat to all
    /// orders at both ends.
    #[default]
    Exponential,
    /// `6s⁵ − 15s⁴ + 10s³`; only C² at the ends.
    Smootherstep,
}

fn h(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

fn dh(s: f64) -> f64 {
    if s > 0.0 {
        h(s) / (s * s)
    } else {
        0.0
    }
}

impl SmoothStepProfile {
    pub const ALL: [SmoothStepProfile; 2] =
        [SmoothStepProfile::Exponential, SmoothStepProfile::Smootherstep];

    pub fn name(self) -> &'static str {
        match self {
            SmoothStepProfile::Exponential => "exponential",
            SmoothStepProfile::Smootherstep => "smootherstep",
        }
    }

    pub fn alpha(self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        if s >= 1.0 {
            return 1.0;
        }
        match self {
            SmoothStepProfile::Exponential => {
                let (a, b) = (h(s), h(1.0 - s));
                a / (a + b)
            }
            SmoothStepProfile::Smootherstep => s * s * s * (s * (6.0 * s - 15.0) + 10.0),
        }
    }

    pub fn derivative(self, s: f64) -> f64 {
        if s <= 0.0 || s >= 1.0 {
            return 0.0;
        }
        match self {
            SmoothStepProfile::Exponential => {
                let (a, b) = (h(s), h(1.0 - s));
                let (da, db) = (dh(s), dh(1.0 - s));
                (da * b + a * db) / ((a + b) * (a + b))
            }
            SmoothStepProfile::Smootherstep => 30.0 * s * s * (1.0 - s) * (1.0 - s),
        }
    }
}

impl fmt::Display for SmoothStepProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SmoothStepProfile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exponential" | "exp" => Ok(SmoothStepProfile::Exponential),
            "smootherstep" | "quintic" => Ok(SmoothStepProfile::Smootherstep),
            other => Err(format!("unknown profile `{other}`")),
        }
    }
}
