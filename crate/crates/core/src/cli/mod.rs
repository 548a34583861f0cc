//! Command-line harness: the two constructions and the verification suites,
//! reported as versioned JSON or CSV.

pub mod report;
pub mod suites;

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::config;
use crate::constructions::{
    covering_count_diagnostic, theorem1_fields, theorem2_surface, ConstructionParams,
    SmoothStepProfile,
};
use crate::error::{Error, Result};
use crate::mesh::io::{read_field, read_mesh, write_field, write_mesh};
use crate::mesh::{build_marked_icosphere, ScalarField, SurfaceMesh};
use crate::poisson::{poisson_l1, ratio};
use crate::quasistate::QuasiState;

pub use report::{Check, Params, RunReport, Table};
use suites::{Case, ZapolskyRow};

/// Largest accepted refinement level.
pub const MAX_LEVEL: u32 = 8;

#[derive(Debug, Parser)]
#[command(name = "quasi-sharp", version, about = "Simple quasi-states and Poisson-bracket sharpness on triangulated spheres")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sphere pair under the 3-point quasi-state.
    Theorem1(Theorem1Args),
    /// Doubled ε-triangle under the median quasi-state.
    Theorem2(Theorem2Args),
    /// Axiom, monotonicity, Zapolsky and median-oracle suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateKind {
    ThreePoint,
    Median,
}

impl StateKind {
    pub fn name(self) -> &'static str {
        match self {
            StateKind::ThreePoint => "three-point",
            StateKind::Median => "median",
        }
    }

    pub fn build(self, mesh: &SurfaceMesh) -> Result<QuasiState> {
        match self {
            StateKind::ThreePoint => QuasiState::three_point(mesh),
            StateKind::Median => QuasiState::median(mesh),
        }
    }
}

/// A single level `5` or an inclusive range `3..6`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Levels(pub Vec<u32>);

impl FromStr for Levels {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("invalid level `{t}`: expected a non-negative integer"))
                .and_then(|l| {
                    if l <= MAX_LEVEL {
                        Ok(l)
                    } else {
                        Err(format!("level {l} exceeds {MAX_LEVEL}"))
                    }
                })
        };
        match s.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (parse(a)?, parse(b.trim_start_matches('='))?);
                if a > b {
                    return Err(format!("empty level range {s}"));
                }
                Ok(Levels((a..=b).collect()))
            }
            None => Ok(Levels(vec![parse(s)?])),
        }
    }
}

/// One ε or a comma-separated list.
#[derive(Debug, Clone, PartialEq)]
pub struct Epsilons(pub Vec<f64>);

impl FromStr for Epsilons {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let v = s
            .split(',')
            .map(|t| {
                let e: f64 = t.trim().parse().map_err(|_| format!("invalid epsilon `{t}`"))?;
                if e > 0.0 && e < 0.25 {
                    Ok(e)
                } else {
                    Err(format!("epsilon {e} outside (0, 1/4)"))
                }
            })
            .collect::<std::result::Result<Vec<f64>, String>>()?;
        Ok(Epsilons(v))
    }
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Report destination; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct Theorem1Args {
    /// Refinement level, or an inclusive range such as `3..6`.
    #[arg(long, default_value = "5")]
    pub level: Levels,
    #[arg(long, default_value_t = SmoothStepProfile::Exponential)]
    pub profile: SmoothStepProfile,
    /// Seed of the covering-count sampler.
    #[arg(long, default_value_t = config::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = config::COVERING_SAMPLES)]
    pub samples: usize,
    /// Write mesh, fields and provenance of the (single) level here.
    #[arg(long)]
    pub export: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct Theorem2Args {
    /// One ε or a comma-separated sweep such as `0.2,0.1,0.05`.
    #[arg(long, default_value = "0.1")]
    pub epsilon: Epsilons,
    #[arg(long, default_value_t = 4)]
    pub level: u32,
    /// Recorded for provenance; the construction does not use a profile.
    #[arg(long, default_value_t = SmoothStepProfile::Exponential)]
    pub profile: SmoothStepProfile,
    #[arg(long, default_value_t = config::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub export: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "three-point")]
    pub quasi_state: StateKind,
    /// Icosphere level when no mesh file is given.
    #[arg(long, default_value_t = 4)]
    pub level: u32,
    /// Mesh file (JSON); needs three markers for the 3-point state.
    #[arg(long)]
    pub mesh: Option<PathBuf>,
    /// A pair of field files (one value per line) checked in addition.
    #[arg(long, num_args = 2, value_names = ["F", "G"])]
    pub fields: Option<Vec<PathBuf>>,
    #[arg(long, default_value_t = config::DEFAULT_TRIALS)]
    pub trials: usize,
    /// Sampled sets for the axiom suite.
    #[arg(long, default_value_t = config::AXIOM_SETS)]
    pub sets: usize,
    #[arg(long, default_value_t = config::DEFAULT_SEED)]
    pub seed: u64,
    /// Write every Zapolsky case here (failing cases are always written
    /// next to `--out`).
    #[arg(long)]
    pub save_cases: Option<PathBuf>,
    /// Re-run the cases of a replay file instead of sampling.
    #[arg(long)]
    pub replay: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

/// Cases file accepted by `verify --replay`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayFile {
    pub schema: u32,
    pub quasi_state: StateKind,
    pub level: u32,
    pub seed: u64,
    pub cases: Vec<Case>,
}

impl Cli {
    pub fn output(&self) -> &Output {
        match &self.command {
            Command::Theorem1(a) => &a.output,
            Command::Theorem2(a) => &a.output,
            Command::Verify(a) => &a.output,
        }
    }
}

/// Runs a parsed command and returns its report; the caller renders it.
pub fn run(cli: &Cli) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Theorem1(a) => cmd_theorem1(a)?,
        Command::Theorem2(a) => cmd_theorem2(a)?,
        Command::Verify(a) => cmd_verify(a)?,
    };
    report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// Renders the report in the requested format and writes it out. A JSON
/// report written to a file gets its table as a sibling `.csv`.
pub fn emit(report: &RunReport, output: &Output) -> Result<String> {
    let body = match output.format {
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
        Format::Csv => report.table.to_csv(),
    };
    if let Some(path) = &output.out {
        fs::write(path, &body)?;
        if output.format == Format::Json && report.table.rows.len() > 1 {
            fs::write(path.with_extension("csv"), report.table.to_csv())?;
        }
    }
    Ok(body)
}

pub fn cmd_theorem1(a: &Theorem1Args) -> Result<RunReport> {
    if a.samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive".into()));
    }
    if a.export.is_some() && a.level.0.len() != 1 {
        return Err(Error::InvalidParameter("--export needs a single level".into()));
    }
    let mut report = RunReport::new(
        "theorem1",
        Params {
            levels: Some(a.level.0.clone()),
            profile: Some(a.profile.name().into()),
            seed: Some(a.seed),
            samples: Some(a.samples),
            quasi_state: Some(StateKind::ThreePoint.name().into()),
            ..Default::default()
        },
    );
    report.table = Table::new(&[
        "level",
        "vertices",
        "triangles",
        "max_edge",
        "zeta_f",
        "zeta_g",
        "zeta_sum",
        "defect",
        "l1_norm",
        "ratio",
        "ratio_error",
        "covering_mean",
    ]);
    for &level in &a.level.0 {
        let params = ConstructionParams::sphere(level, a.profile);
        let (mesh, f, g) = theorem1_fields(&params)?;
        let state = QuasiState::three_point(&mesh)?;
        let z = state.zeta_triple(&mesh, &f, &g)?;
        let l1 = poisson_l1(&mesh, &f, &g)?.l1_norm;
        let r = ratio(z.defect(), l1);
        let cover = covering_count_diagnostic(&mesh, &f, &g, a.samples, a.seed)?;
        let tag = |s: &str| format!("level {level}: {s}");
        report.check(Check::near(tag("euler characteristic"), mesh.euler_characteristic() as f64, 2.0, 0.0));
        report.check(Check::near(tag("zeta(F)"), z.f, 0.0, config::ZETA_EXACT_TOL));
        report.check(Check::near(tag("zeta(G)"), z.g, 0.0, config::ZETA_EXACT_TOL));
        report.check(Check::near(tag("zeta(F+G)"), z.sum, 1.0, config::ZETA_EXACT_TOL));
        report.check(Check::near(tag("l1 norm"), l1, 1.0, config::THEOREM1_L1_TOL));
        report.check(Check::near(tag("sharpness ratio"), r, 1.0, config::THEOREM1_RATIO_TOL));
        report.check(Check::near(tag("covering mean"), cover.mean, 2.0, config::COVERING_TOL));
        report.table.push(vec![
            level as f64,
            mesh.num_vertices() as f64,
            mesh.num_triangles() as f64,
            mesh.max_edge_length(),
            z.f,
            z.g,
            z.sum,
            z.defect(),
            l1,
            r,
            (r - 1.0).abs(),
            cover.mean,
        ]);
        if let Some(dir) = &a.export {
            export(dir, &mesh, &f, &g, &serde_json::json!({
                "construction": "theorem1",
                "profile": a.profile.name(),
                "level": level,
                "markers": crate::constructions::SPHERE_MARKERS,
                "seed": a.seed,
            }))?;
        }
    }
    Ok(report)
}

pub fn cmd_theorem2(a: &Theorem2Args) -> Result<RunReport> {
    if a.level > MAX_LEVEL {
        return Err(Error::InvalidParameter(format!("level {} exceeds {MAX_LEVEL}", a.level)));
    }
    if a.export.is_some() && a.epsilon.0.len() != 1 {
        return Err(Error::InvalidParameter("--export needs a single epsilon".into()));
    }
    let mut report = RunReport::new(
        "theorem2",
        Params {
            levels: Some(vec![a.level]),
            epsilon: Some(a.epsilon.0.clone()),
            profile: Some(a.profile.name().into()),
            seed: Some(a.seed),
            quasi_state: Some(StateKind::Median.name().into()),
            ..Default::default()
        },
    );
    report.table = Table::new(&[
        "epsilon",
        "triangles",
        "smoothing_radius",
        "zeta_f",
        "zeta_g",
        "zeta_sum",
        "defect",
        "l1_norm",
        "area_u",
        "lower_bound",
        "ratio",
    ]);
    let mut radii = Vec::new();
    for &eps in &a.epsilon.0 {
        let params = ConstructionParams::new(a.level, eps, a.profile)?;
        let s = theorem2_surface(&params)?;
        let state = QuasiState::median(&s.mesh)?;
        let z = state.zeta_triple(&s.mesh, &s.f, &s.g)?;
        let l1 = poisson_l1(&s.mesh, &s.f, &s.g)?.l1_norm;
        let r = ratio(z.defect(), l1);
        let bound = (1.0 - 3.0 * eps).powi(2);
        let tag = |t: &str| format!("epsilon {eps}: {t}");
        report.check(Check::near(tag("euler characteristic"), s.mesh.euler_characteristic() as f64, 2.0, 0.0));
        report.check(Check::near(tag("total weight"), s.mesh.total_weight(), 1.0, config::MASS_TOL));
        for (name, (inside, _)) in ["IL", "DK", "EJ"].iter().zip(s.cut_masses()) {
            report.check(Check::near(tag(&format!("mass on one side of {name}")), inside, 0.5, config::MASS_TOL));
        }
        report.check(Check::near(tag("zeta(F)"), z.f, eps, config::THEOREM2_ZETA_TOL));
        report.check(Check::near(tag("zeta(G)"), z.g, eps, config::THEOREM2_ZETA_TOL));
        report.check(Check::near(tag("zeta(F+G)"), z.sum, 1.0 - eps, config::THEOREM2_ZETA_TOL));
        report.check(Check::near(tag("l1 norm - 2 area(U)"), l1 - 2.0 * s.area_u, 0.0, config::MASS_TOL));
        report.check(Check::strictly_between(tag("l1 norm"), l1, bound, 1.0));
        report.check(Check::at_least(tag("sharpness ratio"), r, bound, config::THEOREM2_RATIO_TOL));
        report.table.push(vec![
            eps,
            s.mesh.num_triangles() as f64,
            s.smoothing_radius,
            z.f,
            z.g,
            z.sum,
            z.defect(),
            l1,
            s.area_u,
            bound,
            r,
        ]);
        radii.push(s.smoothing_radius);
        if let Some(dir) = &a.export {
            export(dir, &s.mesh, &s.f, &s.g, &serde_json::json!({
                "construction": "theorem2",
                "profile": a.profile.name(),
                "epsilon": eps,
                "level": a.level,
                "smoothing_radius": s.smoothing_radius,
                "seed": a.seed,
            }))?;
        }
    }
    report.params.smoothing_radius = Some(radii);

    // Sweep: the ratio must grow as ε shrinks.
    if a.epsilon.0.len() > 1 {
        let mut by_eps: Vec<(f64, f64)> = report
            .table
            .rows
            .iter()
            .map(|row| (row[0], row[10]))
            .collect();
        by_eps.sort_by(|x, y| y.0.total_cmp(&x.0));
        let drops = by_eps.windows(2).filter(|w| w[1].1 <= w[0].1).count();
        report.check(Check::zero("sweep: ratio not increasing as epsilon decreases", drops));
    }
    Ok(report)
}

fn export(dir: &Path, mesh: &SurfaceMesh, f: &ScalarField, g: &ScalarField, provenance: &serde_json::Value) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_mesh(&dir.join("mesh.json"), mesh)?;
    write_field(&dir.join("f.csv"), f)?;
    write_field(&dir.join("g.csv"), g)?;
    fs::write(dir.join("provenance.json"), serde_json::to_string_pretty(provenance)? + "\n")?;
    Ok(())
}

fn verify_mesh(a: &VerifyArgs, level: u32) -> Result<SurfaceMesh> {
    match &a.mesh {
        Some(path) => read_mesh(path),
        None => {
            if level > MAX_LEVEL {
                return Err(Error::InvalidParameter(format!("level {level} exceeds {MAX_LEVEL}")));
            }
            build_marked_icosphere(level, &crate::constructions::SPHERE_MARKERS)
        }
    }
}

fn build_state(kind: StateKind, mesh: &SurfaceMesh) -> Result<QuasiState> {
    if kind == StateKind::ThreePoint && mesh.markers().len() < 3 {
        return Err(Error::InvalidParameter(
            "the 3-point quasi-state needs a mesh with three markers".into(),
        ));
    }
    kind.build(mesh)
}

fn zapolsky_table() -> Table {
    Table::new(&["trial", "zeta_f", "zeta_g", "zeta_sum", "defect_sq", "l1_norm", "slack", "pass"])
}

fn zapolsky_row(row: &ZapolskyRow) -> Vec<f64> {
    vec![
        row.trial as f64,
        row.zeta_f,
        row.zeta_g,
        row.zeta_sum,
        row.defect_sq,
        row.l1_norm,
        row.slack,
        if row.pass { 1.0 } else { 0.0 },
    ]
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<RunReport> {
    if let Some(path) = &a.replay {
        return cmd_replay(a, path);
    }
    if a.trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let mesh = verify_mesh(a, a.level)?;
    let state = build_state(a.quasi_state, &mesh)?;
    let mut report = RunReport::new(
        "verify",
        Params {
            levels: a.mesh.is_none().then(|| vec![a.level]),
            seed: Some(a.seed),
            trials: Some(a.trials),
            samples: Some(a.sets),
            quasi_state: Some(a.quasi_state.name().into()),
            mesh: a.mesh.as_ref().map(|p| p.display().to_string()),
            slack_slope: Some(config::SLACK_SLOPE),
            ..Default::default()
        },
    );

    let axioms = suites::axiom_suite(&mesh, &state, a.seed, a.sets)?;
    report.check(Check::zero("axioms: violations", axioms.violations.len()));
    report.check(Check::at_least(
        "axioms: separated disjoint pairs tested",
        (axioms.cases - axioms.skipped) as f64,
        1.0,
        0.0,
    ));
    let extension = suites::extension_suite(&mesh, &state, a.seed, config::SOLID_SETS)?;
    report.check(Check::zero("extension: violations", extension.violations.len()));
    let zeta = suites::zeta_suite(&mesh, &state, a.seed, a.trials)?;
    report.check(Check::zero("zeta monotonicity, range and affinity: violations", zeta.violations.len()));
    for v in axioms.violations.iter().chain(&extension.violations).chain(&zeta.violations) {
        report.failures.push(serde_json::json!({ "suite": "axioms", "detail": v }));
    }

    report.table = zapolsky_table();
    let mut cases = Vec::with_capacity(a.trials);
    let mut failing = Vec::new();
    for trial in 0..a.trials as u64 {
        let case = suites::zapolsky_case(a.seed, trial);
        let row = suites::zapolsky_run(&mesh, &state, &case)?;
        report.table.push(zapolsky_row(&row));
        if !row.pass {
            failing.push(case.clone());
        }
        cases.push(case);
    }
    report.check(Check::zero("zapolsky: violations", failing.len()));

    if let Some(paths) = &a.fields {
        let f = read_field(&paths[0], &mesh)?;
        let g = read_field(&paths[1], &mesh)?;
        let row = suites::zapolsky_check(&mesh, &state, u64::MAX, &f, &g)?;
        report.check(Check::at_most(
            "zapolsky: field files, defect squared",
            row.defect_sq,
            row.l1_norm,
            row.slack,
        ));
    }

    let median = QuasiState::median(&mesh)?;
    let mut oracle_bad = 0;
    for trial in 0..a.trials.min(config::ORACLE_FIELDS) as u64 {
        let row = suites::median_oracle(&mesh, &median, a.seed, trial)?;
        if !row.pass {
            oracle_bad += 1;
            report.failures.push(serde_json::json!({ "suite": "median-oracle", "row": row }));
        }
    }
    report.check(Check::zero("median oracle: disagreements", oracle_bad));

    let replay = |cases: Vec<Case>| ReplayFile {
        schema: report::SCHEMA,
        quasi_state: a.quasi_state,
        level: a.level,
        seed: a.seed,
        cases,
    };
    if let Some(path) = &a.save_cases {
        fs::write(path, serde_json::to_string_pretty(&replay(cases))? + "\n")?;
    }
    if !failing.is_empty() {
        for c in &failing {
            report.failures.push(serde_json::json!({ "suite": "zapolsky", "case": c }));
        }
        if let Some(out) = &a.output.out {
            let text = serde_json::to_string_pretty(&replay(failing))? + "\n";
            fs::write(out.with_extension("replay.json"), text)?;
        }
    }
    Ok(report)
}

fn cmd_replay(a: &VerifyArgs, path: &Path) -> Result<RunReport> {
    let file: ReplayFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    if file.schema != report::SCHEMA {
        return Err(Error::Parse(format!("unsupported replay schema {}", file.schema)));
    }
    let mesh = verify_mesh(a, file.level)?;
    let state = build_state(file.quasi_state, &mesh)?;
    let mut report = RunReport::new(
        "verify-replay",
        Params {
            levels: a.mesh.is_none().then(|| vec![file.level]),
            seed: Some(file.seed),
            trials: Some(file.cases.len()),
            quasi_state: Some(file.quasi_state.name().into()),
            mesh: a.mesh.as_ref().map(|p| p.display().to_string()),
            slack_slope: Some(config::SLACK_SLOPE),
            ..Default::default()
        },
    );
    report.table = zapolsky_table();
    let mut bad = 0;
    for case in &file.cases {
        let row = suites::zapolsky_run(&mesh, &state, case)?;
        if !row.pass {
            bad += 1;
            report.failures.push(serde_json::json!({ "suite": "zapolsky", "case": case }));
        }
        report.table.push(zapolsky_row(&row));
    }
    report.check(Check::zero("zapolsky: violations", bad));
    Ok(report)
}

/// Exit status for an error: usage errors are 2, failed invariants 1.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::SimplicityViolation(_) | Error::InvariantViolation(_) | Error::MedianNotFound => 1,
        _ => 2,
    }
}
