//! Command-line front end: argument types, option validation and the
//! subcommand pipelines.
//!
//! Text results go to stdout unless `--out` names a directory. Exit codes:
//! 0 success, 1 verification failure, 2 input error, 3 no solution.

mod plot;

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::mesh_forge::{
    carve_with, core_cavity, export_stl, max_cut_spacing, CarveConfig, CavityConfig, SolidCheck,
    SolidMetadata, TrajectoidSolid, DEFAULT_SHELL_RATIO,
};
use crate::path_model::{
    gen_fourier_random_with_samples, gen_straight, gen_v_path, gen_wedge_path, gen_zigzag, load_path_csv,
    path_to_csv, turning_profile, PlanarPath, FOURIER_DEFAULT_SAMPLES,
};
use crate::roll_verify::{
    verify_holonomy, verify_solution, verify_trace_support, HolonomyCheck, SupportCheck, SUPPORT_TOL_REL,
};
use crate::rolling_map::{sphere_trace_with_step, SphereTrace};
use crate::solver::{scan, solution_at, solve_n, solve_on_sweep, SigmaRange, Solution, Sweep, DEFAULT_GRID};
use plot::{Level, Panel, Series};

#[derive(Debug, Parser)]
#[command(
    name = "trajectoid",
    version,
    about = "Find, carve and verify solids that roll along periodic planar paths"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output directory. Text results are printed to stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct InputArgs {
    /// Path file: `x,y` rows, optional header.
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct RangeArgs {
    #[arg(long, default_value_t = 0.05)]
    pub sigma_min: f64,
    #[arg(long, default_value_t = 6.0)]
    pub sigma_max: f64,
    /// Uniform σ samples before adaptive refinement.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
}

impl RangeArgs {
    fn validate(&self) -> Result<SigmaRange, CliError> {
        if self.grid < 2 {
            return Err(CliError::Input(format!(
                "--grid needs at least 2 samples, got {}",
                self.grid
            )));
        }
        Ok(SigmaRange::new(self.sigma_min, self.sigma_max)?)
    }
}

#[derive(Debug, Args, Clone, Copy)]
pub struct CarveArgs {
    /// Shell radius as a multiple of the ball radius.
    #[arg(long, default_value_t = DEFAULT_SHELL_RATIO)]
    pub shell_ratio: f64,
    /// Icosphere subdivision level of the shell.
    #[arg(long, default_value_t = 5)]
    pub subdiv: u32,
    /// Cut budget; by default enough cuts to hold the support tolerance along the trace.
    #[arg(long)]
    pub max_cuts: Option<usize>,
}

impl CarveArgs {
    fn validate(&self) -> Result<(), CliError> {
        if !(self.shell_ratio > 1.0 && self.shell_ratio.is_finite()) {
            return Err(CliError::Input(format!(
                "--shell-ratio must exceed 1, got {}",
                self.shell_ratio
            )));
        }
        if !(1..=8).contains(&self.subdiv) {
            return Err(CliError::Input(format!(
                "--subdiv must lie in 1..=8, got {}",
                self.subdiv
            )));
        }
        if self.max_cuts == Some(0) {
            return Err(CliError::Input("--max-cuts must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Straight,
    V,
    Wedge,
    Zigzag,
    Fourier,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Length, total turning and index of a path.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Holonomy angle and normalized area over a σ grid, as CSV and SVG.
    Scan {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        range: RangeArgs,
        /// Draw the 2πk/n levels and mark roots for n up to this value.
        #[arg(long, default_value_t = 4)]
        n_max: u32,
        /// Overlay the 2β bound of a wedge path.
        #[arg(long)]
        beta_bound: Option<f64>,
    },
    /// Certified radii for which rolling n periods closes.
    Solve {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        range: RangeArgs,
        /// Only this period count.
        #[arg(long)]
        n: Option<u32>,
        /// Otherwise every period count up to this one.
        #[arg(long, default_value_t = 2)]
        n_max: u32,
    },
    /// Carve the solid for a solution and write STL plus a JSON sidecar.
    Mesh {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// Use this σ instead of the smallest solution.
        #[arg(long)]
        sigma: Option<f64>,
        #[command(flatten)]
        carve: CarveArgs,
        /// Hollow a cavity for a ball of this radius (as a fraction of r).
        #[arg(long)]
        cavity: Option<f64>,
        /// Write the STL even when verification fails or is skipped.
        #[arg(long)]
        no_verify: bool,
    },
    /// Holonomy, replay and support checks for a solution.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long)]
        sigma: Option<f64>,
        /// Periods to replay; defaults to 2n.
        #[arg(long)]
        periods: Option<u32>,
        #[command(flatten)]
        carve: CarveArgs,
        /// Skip carving and the support check.
        #[arg(long)]
        no_mesh: bool,
    },
    /// Write a generated path as CSV.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 1.0)]
        length: f64,
        #[arg(long, default_value_t = 1.0)]
        x: f64,
        #[arg(long, default_value_t = 1.0)]
        y: f64,
        /// Zigzag segment ratio.
        #[arg(long, default_value_t = FRAC_1_SQRT_2)]
        k: f64,
        /// Zigzag interior angle.
        #[arg(long, default_value_t = 3.0 * PI / 4.0)]
        alpha: f64,
        /// Zigzag opening angle.
        #[arg(long, default_value_t = PI / 4.0)]
        beta: f64,
        /// Wedge opening angle; the wedge arm is a Fourier path.
        #[arg(long, default_value_t = PI / 8.0)]
        wedge_beta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        modes: usize,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, default_value_t = FOURIER_DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Fraction of random smooth paths that admit a two-period solution.
    ProbeConjecture {
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        /// First seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, default_value_t = 5)]
        modes: usize,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Extra wedge paths with opening `--wedge-beta`, expected to fail.
        #[arg(long, default_value_t = 0)]
        inject_wedges: u64,
        #[arg(long, default_value_t = PI / 8.0)]
        wedge_beta: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    VerificationFailed,
    InputError,
    NoSolution,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::VerificationFailed => 1,
            Status::InputError => 2,
            Status::NoSolution => 3,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    NoSolution(String),
    #[error(transparent)]
    Library(#[from] Error),
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Input(_) => Status::InputError,
            CliError::NoSolution(_) => Status::NoSolution,
            CliError::Library(e) => match e {
                Error::Antipodal | Error::NonManifold { .. } | Error::ThinShell(_) => {
                    Status::VerificationFailed
                }
                _ => Status::InputError,
            },
        }
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn main(cli: Cli) -> u8 {
    match run(&cli) {
        Ok(status) => status.code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.status().code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<Status, CliError> {
    let out = Output { dir: cli.out.clone() };
    match &cli.command {
        Command::Analyze { input } => cmd_analyze(input, &out),
        Command::Scan {
            input,
            range,
            n_max,
            beta_bound,
        } => cmd_scan(input, range, *n_max, *beta_bound, &out),
        Command::Solve {
            input,
            range,
            n,
            n_max,
        } => cmd_solve(input, range, *n, *n_max, &out),
        Command::Mesh {
            input,
            range,
            n,
            sigma,
            carve,
            cavity,
            no_verify,
        } => cmd_mesh(input, range, *n, *sigma, carve, *cavity, *no_verify, &out),
        Command::Verify {
            input,
            range,
            n,
            sigma,
            periods,
            carve,
            no_mesh,
        } => cmd_verify(input, range, *n, *sigma, *periods, carve, *no_mesh, &out),
        Command::Gen { .. } => cmd_gen(&cli.command, &out),
        Command::ProbeConjecture {
            seeds,
            seed,
            range,
            modes,
            scale,
            inject_wedges,
            wedge_beta,
        } => cmd_probe(
            *seeds,
            *seed,
            range,
            *modes,
            *scale,
            *inject_wedges,
            *wedge_beta,
            &out,
        ),
    }
}

struct Output {
    dir: Option<PathBuf>,
}

impl Output {
    /// Writes `name` into the output directory, or prints it when there is none.
    fn text(&self, name: &str, body: &str) -> Result<(), CliError> {
        match &self.dir {
            Some(dir) => self.write(dir, name, body.as_bytes()),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }

    /// Files that only make sense on disk; skipped without `--out`.
    fn file(&self, name: &str, body: &[u8]) -> Result<(), CliError> {
        match &self.dir {
            Some(dir) => self.write(dir, name, body),
            None => Ok(()),
        }
    }

    fn json(&self, name: &str, value: &impl Serialize) -> Result<(), CliError> {
        let mut body = serde_json::to_string_pretty(value).map_err(Error::from)?;
        body.push('\n');
        self.text(name, &body)
    }

    fn write(&self, dir: &Path, name: &str, body: &[u8]) -> Result<(), CliError> {
        fs::create_dir_all(dir).map_err(Error::from)?;
        let path = dir.join(name);
        fs::write(&path, body).map_err(Error::from)?;
        log::info!("wrote {}", path.display());
        Ok(())
    }
}

fn load(input: &InputArgs) -> Result<PlanarPath, CliError> {
    let bytes = fs::read(&input.input)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", input.input.display())))?;
    let name = input
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(load_path_csv(&bytes)?.with_name(name))
}

fn check_n(name: &str, n: u32) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Input(format!("--{name} must be at least 1")));
    }
    Ok(())
}

#[derive(Serialize)]
struct Analysis {
    name: String,
    length: f64,
    total_turning: f64,
    index: f64,
    vertex_count: usize,
    segment_count: usize,
    displacement: [f64; 2],
    junction_turn: f64,
}

fn cmd_analyze(input: &InputArgs, out: &Output) -> Result<Status, CliError> {
    let path = load(input)?;
    let turning = turning_profile(&path)?;
    let d = path.displacement();
    out.json(
        "analyze.json",
        &Analysis {
            name: path.name().to_string(),
            length: path.length(),
            total_turning: turning.total_turning,
            index: turning.index,
            vertex_count: path.vertices().len(),
            segment_count: path.segment_count(),
            displacement: [d.x, d.y],
            junction_turn: path.junction_turn(),
        },
    )?;
    Ok(Status::Success)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn cmd_scan(
    input: &InputArgs,
    range: &RangeArgs,
    n_max: u32,
    beta_bound: Option<f64>,
    out: &Output,
) -> Result<Status, CliError> {
    let sigma_range = range.validate()?;
    check_n("n-max", n_max)?;
    if let Some(b) = beta_bound {
        if !(b > 0.0 && b < PI) {
            return Err(CliError::Input(format!(
                "--beta-bound must lie in (0, π), got {b}"
            )));
        }
    }
    let path = load(input)?;
    let table = scan(&path, sigma_range, range.grid)?;
    let sweep = Sweep::new(&path, sigma_range, range.grid)?;
    let mut roots = Vec::new();
    for n in 1..=n_max {
        roots.extend(solve_on_sweep(&path, &sweep, n)?);
    }

    let mut levels = Vec::new();
    for n in 1..=n_max {
        for k in (1..=n / 2).filter(|&k| gcd(k, n) == 1) {
            levels.push(Level {
                y: TAU * k as f64 / n as f64,
                label: format!("2π·{k}/{n}"),
                color: "gray",
            });
        }
    }
    if let Some(b) = beta_bound {
        levels.push(Level {
            y: (2.0 * b).min(PI),
            label: "2β".into(),
            color: "blue",
        });
    }
    let phi = Panel {
        title: format!("holonomy angle φ(σ), {}", path.name()),
        y_label: "φ".into(),
        y_range: (0.0, PI),
        series: vec![Series {
            points: table.rows.iter().map(|r| Some((r.sigma, r.phi))).collect(),
            color: "black",
            dashed: false,
        }],
        levels,
        markers: roots
            .iter()
            .map(|s| (s.sigma, 2.0 * PI * s.k as f64 / s.n as f64))
            .collect(),
    };
    // antipodal rows and 2π wraps both break the area curve
    let mut area_points = Vec::with_capacity(table.rows.len());
    let mut prev: Option<f64> = None;
    for r in &table.rows {
        if r.antipodal || !r.area_norm.is_finite() {
            area_points.push(None);
            prev = None;
            continue;
        }
        if prev.is_some_and(|p| (r.area_norm - p).abs() > PI) {
            area_points.push(None);
        }
        area_points.push(Some((r.sigma, r.area_norm)));
        prev = Some(r.area_norm);
    }
    let area = Panel {
        title: "normalized enclosed area S̄(σ)".into(),
        y_label: "S̄".into(),
        y_range: (0.0, TAU),
        series: vec![Series {
            points: area_points,
            color: "green",
            dashed: false,
        }],
        levels: vec![Level {
            y: PI,
            label: "π".into(),
            color: "gray",
        }],
        markers: roots
            .iter()
            .filter(|s| s.n == 2 && !s.antipodal)
            .map(|s| (s.sigma, PI))
            .collect(),
    };
    out.text("scan.csv", &table.to_csv())?;
    out.file(
        "scan.svg",
        plot::render(&[phi, area], (sigma_range.min, sigma_range.max), "σ = L / 2πr").as_bytes(),
    )?;
    if let Some(b) = beta_bound {
        let max_phi = table.max_phi();
        if max_phi > 2.0 * b + 1e-8 {
            log::warn!("φ reaches {max_phi}, above the 2β bound {}", 2.0 * b);
        }
    }
    Ok(Status::Success)
}

#[derive(Serialize)]
struct SolveReport {
    path: String,
    length: f64,
    sigma_range: SigmaRange,
    grid: usize,
    solutions: Vec<Solution>,
}

fn cmd_solve(
    input: &InputArgs,
    range: &RangeArgs,
    n: Option<u32>,
    n_max: u32,
    out: &Output,
) -> Result<Status, CliError> {
    let sigma_range = range.validate()?;
    let counts: Vec<u32> = match n {
        Some(n) => {
            check_n("n", n)?;
            vec![n]
        }
        None => {
            check_n("n-max", n_max)?;
            (1..=n_max).collect()
        }
    };
    let path = load(input)?;
    let sweep = Sweep::new(&path, sigma_range, range.grid)?;
    let mut solutions = Vec::new();
    for n in counts {
        solutions.extend(solve_on_sweep(&path, &sweep, n)?);
    }
    solutions.sort_by(|a, b| a.sigma.total_cmp(&b.sigma).then(a.n.cmp(&b.n)));
    let found = !solutions.is_empty();
    out.json(
        "solutions.json",
        &SolveReport {
            path: path.name().to_string(),
            length: path.length(),
            sigma_range,
            grid: range.grid,
            solutions,
        },
    )?;
    if found {
        Ok(Status::Success)
    } else {
        Err(CliError::NoSolution(
            "no certified solution in the σ range".into(),
        ))
    }
}

/// The solution at `sigma`, or the smallest-σ solution with a defined trace area.
fn pick_solution(
    path: &PlanarPath,
    n: u32,
    sigma: Option<f64>,
    range: &RangeArgs,
) -> Result<Solution, CliError> {
    let sigma_range = range.validate()?;
    match sigma {
        Some(s) => solution_at(path, n, s)?
            .ok_or_else(|| CliError::NoSolution(format!("σ = {s} is not an {n}-period solution"))),
        None => {
            let all = solve_n(path, n, sigma_range, range.grid)?;
            all.iter()
                .find(|s| !s.antipodal)
                .or(all.first())
                .copied()
                .ok_or_else(|| CliError::NoSolution(format!("no {n}-period solution in the σ range")))
        }
    }
}

/// Carves over `n` periods. Returns the solid and a trace four times denser
/// than the cuts, so the support check also probes between contact planes.
fn carve_solution(
    path: &PlanarPath,
    sol: &Solution,
    carve: &CarveArgs,
) -> Result<(SphereTrace, TrajectoidSolid), CliError> {
    let periods = path.repeated(sol.n as usize);
    let spacing = 0.9 * max_cut_spacing(SUPPORT_TOL_REL);
    let trace = sphere_trace_with_step(&periods, sol.radius, spacing)?;
    let config = CarveConfig {
        max_cuts: carve.max_cuts.unwrap_or(trace.len() + 1),
        ..CarveConfig::default()
    };
    let solid = carve_with(&trace, carve.shell_ratio * sol.radius, carve.subdiv, &config)?;
    log::info!(
        "carved {} cuts, {} triangles",
        solid.cut_count(),
        solid.mesh.triangles.len()
    );
    let probe = sphere_trace_with_step(&periods, sol.radius, 0.25 * spacing)?;
    Ok((probe, solid))
}

#[derive(Serialize)]
struct MeshSidecar {
    #[serde(flatten)]
    metadata: SolidMetadata,
    solution: Solution,
    solid_check: Option<SolidCheck>,
    support: Option<SupportCheck>,
    holonomy: Option<HolonomyCheck>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_mesh(
    input: &InputArgs,
    range: &RangeArgs,
    n: u32,
    sigma: Option<f64>,
    carve: &CarveArgs,
    cavity: Option<f64>,
    no_verify: bool,
    out: &Output,
) -> Result<Status, CliError> {
    range.validate()?;
    check_n("n", n)?;
    carve.validate()?;
    if let Some(c) = cavity {
        if !(c > 0.0 && c < 1.0) {
            return Err(CliError::Input(format!("--cavity must lie in (0, 1), got {c}")));
        }
    }
    let out = Output {
        dir: Some(out.dir.clone().unwrap_or_else(|| PathBuf::from("."))),
    };
    let path = load(input)?;
    let sol = pick_solution(&path, n, sigma, range)?;
    let (trace, mut solid) = carve_solution(&path, &sol, carve)?;
    if let Some(c) = cavity {
        solid = core_cavity(&solid, &CavityConfig::new(c * sol.radius))?;
    }
    let (solid_check, support, holonomy, verified) = if no_verify {
        (None, None, None, false)
    } else {
        let c = solid.check();
        let s = verify_trace_support(&solid, &trace);
        let h = verify_holonomy(&path, &sol)?;
        let ok = c.pass && s.pass && h.pass;
        (Some(c), Some(s), Some(h), ok)
    };
    let mut metadata = SolidMetadata::new(&solid, Some(sol.n), Some(sol.sigma), verified);
    if no_verify {
        metadata = metadata.with_warning("verification skipped");
    } else if !verified {
        metadata = metadata.with_warning("verification failed; STL withheld");
    }
    out.json(
        "trajectoid.json",
        &MeshSidecar {
            metadata,
            solution: sol,
            solid_check,
            support,
            holonomy,
        },
    )?;
    if !no_verify && !verified {
        eprintln!("error: carved solid failed verification; see trajectoid.json");
        return Ok(Status::VerificationFailed);
    }
    out.file("trajectoid.stl", &export_stl(&solid.mesh))?;
    Ok(Status::Success)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    input: &InputArgs,
    range: &RangeArgs,
    n: u32,
    sigma: Option<f64>,
    periods: Option<u32>,
    carve: &CarveArgs,
    no_mesh: bool,
    out: &Output,
) -> Result<Status, CliError> {
    range.validate()?;
    check_n("n", n)?;
    carve.validate()?;
    let periods = periods.unwrap_or(2 * n);
    check_n("periods", periods)?;
    let path = load(input)?;
    let sol = pick_solution(&path, n, sigma, range)?;
    let carved = if no_mesh {
        None
    } else {
        Some(carve_solution(&path, &sol, carve)?)
    };
    let report = verify_solution(&path, &sol, carved.as_ref().map(|(t, s)| (s, t)), periods)?;
    out.json("verification.json", &report)?;
    out.file("replay.csv", report.replay.to_csv().as_bytes())?;
    Ok(if report.pass {
        Status::Success
    } else {
        Status::VerificationFailed
    })
}

fn cmd_gen(command: &Command, out: &Output) -> Result<Status, CliError> {
    let Command::Gen {
        kind,
        length,
        x,
        y,
        k,
        alpha,
        beta,
        wedge_beta,
        seed,
        modes,
        scale,
        samples,
    } = command
    else {
        unreachable!("cmd_gen called with another subcommand");
    };
    let path = match kind {
        GenKind::Straight => gen_straight(*length)?,
        GenKind::V => gen_v_path(*x, *y)?,
        GenKind::Zigzag => gen_zigzag(*k, *alpha, *beta)?,
        GenKind::Fourier => gen_fourier_random_with_samples(*seed, *modes, *scale, *samples)?,
        GenKind::Wedge => {
            let w = gen_fourier_random_with_samples(*seed, *modes, *scale, *samples)?;
            gen_wedge_path(&w, *wedge_beta)?
        }
    };
    let name = format!(
        "{}.csv",
        kind.to_possible_value().expect("no skipped variants").get_name()
    );
    out.text(&name, &path_to_csv(&path))?;
    Ok(Status::Success)
}

#[derive(Debug, Clone, Serialize)]
struct ProbeRow {
    seed: u64,
    kind: &'static str,
    two_path: bool,
    solutions: usize,
    min_sigma: f64,
}

#[derive(Debug, Serialize)]
struct ProbeSummary {
    paths: usize,
    fourier_paths: usize,
    wedge_paths: usize,
    two_path_count: usize,
    fraction: f64,
    fourier_fraction: f64,
    wedge_fraction: f64,
}

#[allow(clippy::too_many_arguments)]
fn cmd_probe(
    seeds: u64,
    first_seed: u64,
    range: &RangeArgs,
    modes: usize,
    scale: f64,
    inject_wedges: u64,
    wedge_beta: f64,
    out: &Output,
) -> Result<Status, CliError> {
    let sigma_range = range.validate()?;
    if seeds + inject_wedges == 0 {
        return Err(CliError::Input(
            "--seeds and --inject-wedges are both zero".into(),
        ));
    }
    if modes == 0 {
        return Err(CliError::Input("--modes must be at least 1".into()));
    }
    if !(scale.is_finite() && scale >= 0.0) {
        return Err(CliError::Input(format!(
            "--scale must be finite and ≥ 0, got {scale}"
        )));
    }
    if inject_wedges > 0 && !(wedge_beta > 0.0 && wedge_beta < PI / 2.0) {
        return Err(CliError::Input(format!(
            "--wedge-beta must lie in (0, π/2), got {wedge_beta}"
        )));
    }
    let jobs: Vec<(u64, bool)> = (0..seeds)
        .map(|i| (first_seed + i, false))
        .chain((0..inject_wedges).map(|i| (first_seed + seeds + i, true)))
        .collect();
    let rows = jobs
        .into_par_iter()
        .map(|(seed, wedge)| -> Result<ProbeRow, CliError> {
            let base = gen_fourier_random_with_samples(seed, modes, scale, FOURIER_DEFAULT_SAMPLES)?;
            let path = if wedge {
                gen_wedge_path(&base, wedge_beta)?
            } else {
                base
            };
            let sols = solve_n(&path, 2, sigma_range, range.grid)?;
            Ok(ProbeRow {
                seed,
                kind: if wedge { "wedge" } else { "fourier" },
                two_path: !sols.is_empty(),
                solutions: sols.len(),
                min_sigma: sols.first().map_or(f64::NAN, |s| s.sigma),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut csv = String::from("seed,kind,two_path,solutions,min_sigma\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{:.16e}\n",
            r.seed, r.kind, r.two_path, r.solutions, r.min_sigma
        ));
    }
    let fraction = |kind: Option<&str>| {
        let sel: Vec<&ProbeRow> = rows.iter().filter(|r| kind.is_none_or(|k| r.kind == k)).collect();
        let hits = sel.iter().filter(|r| r.two_path).count();
        (
            sel.len(),
            hits,
            if sel.is_empty() {
                f64::NAN
            } else {
                hits as f64 / sel.len() as f64
            },
        )
    };
    let (paths, hits, all) = fraction(None);
    let (fourier_paths, _, fourier_fraction) = fraction(Some("fourier"));
    let (wedge_paths, _, wedge_fraction) = fraction(Some("wedge"));
    let summary = ProbeSummary {
        paths,
        fourier_paths,
        wedge_paths,
        two_path_count: hits,
        fraction: all,
        fourier_fraction,
        wedge_fraction,
    };
    out.text("probe.csv", &csv)?;
    let body = serde_json::to_string_pretty(&summary).map_err(Error::from)?;
    out.file("probe_summary.json", format!("{body}\n").as_bytes())?;
    if out.dir.is_none() {
        eprintln!("{body}");
    }
    Ok(Status::Success)
}
