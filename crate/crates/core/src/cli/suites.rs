//! Randomized verification suites shared by `verify` and the tests.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config;
use crate::error::{Error, Result};
use crate::fields::{random_pair, trial_rng, Polynomial};
use crate::mesh::{ScalarField, SetKind, SurfaceMesh, VertexSet};
use crate::poisson::poisson_l1;
use crate::quasistate::{median_direct, QuasiState};

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub cases: usize,
    /// Cases that could not be built (e.g. a disjoint pair that touches).
    pub skipped: usize,
    pub violations: Vec<String>,
}

impl SuiteOutcome {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.violations.push(what());
        }
    }
}

fn random_field<R: Rng>(mesh: &SurfaceMesh, rng: &mut R) -> Result<ScalarField> {
    Polynomial::random(rng).sample(mesh)
}

fn random_value<R: Rng>(f: &ScalarField, rng: &mut R) -> f64 {
    f.values()[rng.gen_range(0..f.len())]
}

/// `{F < t}`, `{F ≤ t}`, `{F > t}` or `{F ≥ t}`.
fn level_set(f: &ScalarField, t: f64, lower: bool, kind: SetKind) -> VertexSet {
    match (lower, kind) {
        (true, SetKind::Open) => f.below(t),
        (true, SetKind::Closed) => f.at_most(t),
        (false, SetKind::Open) => f.above(t),
        (false, SetKind::Closed) => f.at_least(t),
    }
}

/// Disjoint and not joined by any mesh edge.
pub fn separated(mesh: &SurfaceMesh, a: &VertexSet, b: &VertexSet) -> bool {
    a.is_disjoint(b)
        && mesh.edges().iter().all(|&[u, v]| {
            !(a.contains(u) && b.contains(v) || a.contains(v) && b.contains(u))
        })
}

/// Axioms of the extended set function on `sets` sampled level sets:
/// values in {0, 1}, trivial sets, complements, monotonicity along nested
/// chains and additivity on separated disjoint pairs.
pub fn axiom_suite(mesh: &SurfaceMesh, state: &QuasiState, seed: u64, sets: usize) -> Result<SuiteOutcome> {
    let q = state.measure();
    let mut out = SuiteOutcome::default();
    let tau = |s: &VertexSet| q.tau(mesh, s);

    out.check(tau(&mesh.full_set(SetKind::Open))? == 1, || "τ(full open) ≠ 1".into());
    out.check(tau(&mesh.full_set(SetKind::Closed))? == 1, || "τ(full closed) ≠ 1".into());
    out.check(tau(&mesh.empty_set(SetKind::Open))? == 0, || "τ(∅ open) ≠ 0".into());
    out.check(tau(&mesh.empty_set(SetKind::Closed))? == 0, || "τ(∅ closed) ≠ 0".into());

    for i in 0..sets {
        let mut rng = trial_rng(seed, i as u64);
        let f = random_field(mesh, &mut rng)?;
        let (mut t1, mut t2) = (random_value(&f, &mut rng), random_value(&f, &mut rng));
        if t1 > t2 {
            std::mem::swap(&mut t1, &mut t2);
        }
        let lower = i % 2 == 0;
        let kind = if (i / 2) % 2 == 0 { SetKind::Open } else { SetKind::Closed };
        out.cases += 1;

        let s = level_set(&f, if lower { t1 } else { t2 }, lower, kind);
        let value = match tau(&s) {
            Ok(v) => v,
            Err(e) => {
                out.violations.push(format!("set {i}: {e}"));
                continue;
            }
        };
        out.check(value <= 1, || format!("set {i}: τ = {value}"));

        let comp = mesh.complement(&s)?;
        let cv = tau(&comp)?;
        out.check(value + cv == 1, || format!("set {i}: τ(S) + τ(Sᶜ) = {}", value + cv));

        // Nested chain, smallest first.
        let chain = if lower {
            [f.below(t1), f.at_most(t1), f.below(t2), f.at_most(t2)]
        } else {
            [f.above(t2), f.at_least(t2), f.above(t1), f.at_least(t1)]
        };
        let values = chain.iter().map(tau).collect::<Result<Vec<u8>>>()?;
        for w in chain.windows(2) {
            if !w[0].is_subset(&w[1]) {
                return Err(Error::InvariantViolation("level chain not nested".into()));
            }
        }
        out.check(values.windows(2).all(|w| w[0] <= w[1]), || {
            format!("set {i}: τ not monotone along {values:?}")
        });

        // Disjoint partner on the other side of the band [t1, t2].
        let (a, b) = (level_set(&f, t1, true, kind), level_set(&f, t2, false, kind));
        if t1 < t2 && separated(mesh, &a, &b) {
            let (ta, tb, tu) = (tau(&a)?, tau(&b)?, tau(&a.union(&b))?);
            out.check(tu == ta + tb, || format!("set {i}: τ(A ∪ B) = {tu}, τ(A) + τ(B) = {}", ta + tb));
        } else {
            out.skipped += 1;
        }
    }
    Ok(out)
}

/// Fills the component of `mask` containing `seed` with every complementary
/// component except the heaviest, giving a solid set; `None` if that is
/// the whole surface.
pub fn fill_to_solid(mesh: &SurfaceMesh, mask: &[bool], seed: usize) -> Option<Vec<bool>> {
    let (labels, _) = mesh.component_labels(mask);
    let own = labels[seed]?;
    let core: Vec<bool> = labels.iter().map(|l| *l == Some(own)).collect();
    let outside: Vec<bool> = core.iter().map(|c| !c).collect();
    let (olabels, count) = mesh.component_labels(&outside);
    if count == 0 {
        return None;
    }
    let masses = mesh.vertex_masses();
    let mut weight = vec![0.0; count];
    for (l, m) in olabels.iter().zip(&masses) {
        if let Some(l) = l {
            weight[*l] += m;
        }
    }
    let heaviest = (0..count)
        .max_by(|&a, &b| weight[a].total_cmp(&weight[b]).then(b.cmp(&a)))
        .expect("nonempty");
    Some(olabels.iter().map(|l| *l != Some(heaviest)).collect())
}

/// `τ = ν` on sampled solid sets, read both as closed and as open sets.
pub fn extension_suite(mesh: &SurfaceMesh, state: &QuasiState, seed: u64, sets: usize) -> Result<SuiteOutcome> {
    let q = state.measure();
    let mut out = SuiteOutcome::default();
    let mut attempt = 0u64;
    while out.cases < sets {
        if attempt > 20 * sets as u64 {
            return Err(Error::InvariantViolation("could not sample solid sets".into()));
        }
        let mut rng = trial_rng(seed ^ 0x501d, attempt);
        attempt += 1;
        let f = random_field(mesh, &mut rng)?;
        let t = random_value(&f, &mut rng);
        let mask = f.at_most(t);
        let start = match mask.indices().next() {
            Some(v) => v,
            None => {
                out.skipped += 1;
                continue;
            }
        };
        let Some(solid) = fill_to_solid(mesh, mask.mask(), start) else {
            out.skipped += 1;
            continue;
        };
        let closed = mesh.set_from_predicate(SetKind::Closed, |v| solid[v]);
        if !mesh.is_solid(&closed)? {
            return Err(Error::InvariantViolation("filled set is not solid".into()));
        }
        out.cases += 1;
        let nu = q.base().nu(mesh, &closed)?;
        let tc = q.tau_closed(mesh, &closed)?;
        let open = closed.clone().with_kind(SetKind::Open);
        let to = q.tau_open(mesh, &open)?;
        let n = out.cases;
        out.check(tc == nu && to == nu, || {
            format!("solid set {n}: ν = {nu}, τ closed = {tc}, τ open = {to}")
        });
    }
    Ok(out)
}

/// Monotonicity, range and affine behaviour of `ζ` on `trials` fields.
pub fn zeta_suite(mesh: &SurfaceMesh, state: &QuasiState, seed: u64, trials: usize) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    for i in 0..trials {
        let mut rng = trial_rng(seed ^ 0x2e7a, i as u64);
        let f = random_field(mesh, &mut rng)?;
        let bump = random_field(mesh, &mut rng)?;
        let g = ScalarField::new(mesh, f.values().iter().zip(bump.values()).map(|(a, b)| a + b.abs()).collect())?;
        let (a, c) = (rng.gen_range(0.1..10.0), rng.gen_range(-5.0..5.0));
        out.cases += 1;
        let zf = state.quasi_integral(mesh, &f)?;
        let zg = state.quasi_integral(mesh, &g)?;
        let za = state.quasi_integral(mesh, &f.affine(a, c))?;
        out.check(zf <= zg, || format!("field {i}: ζ(F) = {zf} > ζ(F + |P|) = {zg}"));
        out.check(f.min() <= zf && zf <= f.max(), || format!("field {i}: ζ(F) = {zf} outside the range"));
        out.check((za - (a * zf + c)).abs() <= config::AFFINE_TOL, || {
            format!("field {i}: ζ({a}F + {c}) = {za}, expected {}", a * zf + c)
        });
    }
    let k = ScalarField::constant(mesh, 0.75)?;
    let l = ScalarField::constant(mesh, -2.0)?;
    out.cases += 1;
    let d = state.nonlinearity_defect(mesh, &k, &l)?;
    out.check(d == 0.0, || format!("constant fields: Π = {d}"));
    Ok(out)
}

/// One random pair checked against `Π² ≤ ‖{F,G}‖₁ + δ(h)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZapolskyRow {
    pub trial: u64,
    pub zeta_f: f64,
    pub zeta_g: f64,
    pub zeta_sum: f64,
    pub defect_sq: f64,
    pub l1_norm: f64,
    pub slack: f64,
    pub pass: bool,
}

/// A replayable case: the trial index and both polynomials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub trial: u64,
    pub f: Polynomial,
    pub g: Polynomial,
}

pub fn zapolsky_case(seed: u64, trial: u64) -> Case {
    let (f, g) = random_pair(seed, trial);
    Case { trial, f, g }
}

pub fn zapolsky_check(
    mesh: &SurfaceMesh,
    state: &QuasiState,
    trial: u64,
    f: &ScalarField,
    g: &ScalarField,
) -> Result<ZapolskyRow> {
    let z = state.zeta_triple(mesh, f, g)?;
    let l1 = poisson_l1(mesh, f, g)?.l1_norm;
    let slack = config::slack(mesh.max_edge_length());
    let defect_sq = z.defect().powi(2);
    Ok(ZapolskyRow {
        trial,
        zeta_f: z.f,
        zeta_g: z.g,
        zeta_sum: z.sum,
        defect_sq,
        l1_norm: l1,
        slack,
        pass: defect_sq <= l1 + slack,
    })
}

pub fn zapolsky_run(mesh: &SurfaceMesh, state: &QuasiState, case: &Case) -> Result<ZapolskyRow> {
    let f = case.f.sample(mesh)?;
    let g = case.g.sample(mesh)?;
    zapolsky_check(mesh, state, case.trial, &f, &g)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRow {
    pub trial: u64,
    pub zeta: f64,
    pub direct: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Median oracle against the bisection quasi-integral on a random field.
pub fn median_oracle(mesh: &SurfaceMesh, median: &QuasiState, seed: u64, trial: u64) -> Result<OracleRow> {
    let mut rng = trial_rng(seed ^ 0x0_4ac1e, trial);
    let f = random_field(mesh, &mut rng)?;
    let zeta = median.quasi_integral(mesh, &f)?;
    let direct = median_direct(mesh, &f, config::MEDIAN_AREA_TOL)?.value;
    let tolerance = config::median_oracle_tol(mesh.max_edge_length());
    Ok(OracleRow {
        trial,
        zeta,
        direct,
        tolerance,
        pass: (zeta - direct).abs() <= tolerance,
    })
}
