//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input or validation error, 2 numerical failure
//! (non-convergence still writes its best-effort output).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::boundstates::{calibrate_wall, threshold_levels, RadialGrid, SolveOptions, WallSearch};
use crate::dataio::{read_isotopologues_file, read_line_list_file};
use crate::error::{Error, Result};
use crate::fitter::{fit_nde, write_residual_csv, FitProblem, FitReport};
use crate::potential::{centrifugal_barrier, PotentialParams};
use crate::rotation::{components, RotationConfig, RotationalLevel, HYPERFINE_SPLITTING_CM1, NU_RES_CM1};
use crate::spectra::{self, dips_from_components, LineShape, SpectrumConfig};
use crate::units::{amu_to_electron_mass, cm1_to_hartree, hartree_to_cm1};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "pafit",
    version,
    about = "Long-range potentials from photoassociation line lists"
)]
pub struct Cli {
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for synthetic noise.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Suppress progress and warning messages.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit C6, C8 and per-isotopologue v_d to a line list.
    Fit(FitArgs),
    /// Predict line positions from a saved fit.
    Predict(PredictArgs),
    /// Numerov levels behind a calibrated inner wall.
    Levels(LevelsArgs),
    /// Synthesize the rotational structure of one line.
    Spectrum(SpectrumArgs),
    /// Centrifugal barrier of a pure-C6 potential.
    Barrier(BarrierArgs),
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub lines: PathBuf,
    #[arg(long)]
    pub isotopologues: PathBuf,
    /// Also write the residual table (CSV) here.
    #[arg(long)]
    pub residuals: Option<PathBuf>,
    /// Hold C8 fixed (a.u.) instead of fitting it.
    #[arg(long)]
    pub fix_c8: Option<f64>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[arg(long)]
    pub param_tol: Option<f64>,
    #[arg(long)]
    pub cost_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Fit result JSON written by `fit`.
    #[arg(long)]
    pub fit: PathBuf,
    #[arg(long)]
    pub isotopologue: String,
    #[arg(long, allow_hyphen_values = true)]
    pub dv_from: i32,
    #[arg(long, allow_hyphen_values = true)]
    pub dv_to: Option<i32>,
}

#[derive(Debug, Args)]
pub struct LevelsArgs {
    #[arg(long)]
    pub fit: PathBuf,
    #[arg(long)]
    pub isotopologue: String,
    #[arg(long, allow_hyphen_values = true)]
    pub anchor_dv: i32,
    /// Anchor energy (cm-1).
    #[arg(long, allow_hyphen_values = true)]
    pub anchor_energy: f64,
    /// Deepest energy to report (cm-1).
    #[arg(long, allow_hyphen_values = true, default_value_t = -25.0)]
    pub e_min: f64,
    #[arg(long, default_value_t = 8.0)]
    pub wall_min: f64,
    #[arg(long, default_value_t = 12.0)]
    pub wall_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub wall_step: f64,
    #[arg(long, default_value_t = crate::boundstates::DEFAULT_POINTS)]
    pub points: usize,
    #[arg(long, default_value_t = crate::boundstates::DEFAULT_R_MAX)]
    pub r_max: f64,
    /// Write each wavefunction as `<dir>/psi_dv<N>.csv`.
    #[arg(long)]
    pub wavefunctions: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Line position (cm-1); alternatively give --fit, --isotopologue and --dv.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "fit")]
    pub delta_pa: Option<f64>,
    #[arg(long, requires_all = ["isotopologue", "dv"])]
    pub fit: Option<PathBuf>,
    #[arg(long)]
    pub isotopologue: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub dv: Option<i32>,
    /// Rotational constant (cm-1).
    #[arg(long)]
    pub b_rot: f64,
    /// m' splitting (cm-1).
    #[arg(long, allow_hyphen_values = true)]
    pub delta_r: f64,
    #[arg(long, default_value_t = 2)]
    pub f_prime: u8,
    #[arg(long, default_value_t = 2)]
    pub r_max: u32,
    /// Depth of the R'=0 component.
    #[arg(long, default_value_t = 0.5)]
    pub depth: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 0.6, 0.3])]
    pub band_amplitudes: Vec<f64>,
    /// Offset of the F'=1 progression (cm-1); negative places it below F'=2.
    #[arg(long, allow_hyphen_values = true, default_value_t = -HYPERFINE_SPLITTING_CM1)]
    pub f1_offset: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub start: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub stop: f64,
    #[arg(long, default_value_t = spectra::DEFAULT_STEP_CM1)]
    pub step: f64,
    #[arg(long, default_value_t = spectra::DEFAULT_FWHM_CM1)]
    pub fwhm: f64,
    #[arg(long, default_value = "gaussian")]
    pub shape: LineShape,
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Also write an SVG plot here.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BarrierArgs {
    /// Ground-state C6 (a.u.).
    #[arg(long)]
    pub c6: f64,
    /// Reduced mass (amu).
    #[arg(long)]
    pub mu: f64,
    #[arg(long)]
    pub l: u32,
}

#[derive(Debug, Serialize)]
struct BarrierReport {
    schema_version: u32,
    l: u32,
    r_b_a0: f64,
    #[serde(rename = "height_uK")]
    height_uk: f64,
}

#[derive(Debug, Serialize)]
struct LevelRow {
    dv: i32,
    energy_cm1: f64,
    r_eff_wf_a0: f64,
    r_turning_a0: f64,
    nde_cm1: f64,
}

#[derive(Debug, Serialize)]
struct LevelsReport {
    schema_version: u32,
    isotopologue: String,
    wall_a0: f64,
    levels: Vec<LevelRow>,
}

#[derive(Debug, Serialize)]
struct PredictionRow {
    isotopologue: String,
    dv: i32,
    count: f64,
    delta_pa_cm1: f64,
}

/// Failure with the exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Numeric { .. } | Error::Calibration(_) | Error::Resolution { .. } => EXIT_NUMERIC,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

struct Ctx<'a> {
    out: Option<&'a Path>,
    quiet: bool,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit(&mut self, text: &str) -> std::result::Result<(), Failure> {
        match self.out {
            Some(path) => write_file(path, text),
            None => self
                .stdout
                .write_all(text.as_bytes())
                .map_err(|e| usage(format!("cannot write output: {e}"))),
        }
    }

    fn note(&mut self, msg: &str) {
        if !self.quiet {
            let _ = writeln!(self.stderr, "{msg}");
        }
    }
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let mut ctx = Ctx {
        out: cli.out.as_deref(),
        quiet: cli.quiet,
        stdout,
        stderr,
    };
    let result = match &cli.command {
        Command::Fit(a) => cmd_fit(a, cli.format, &mut ctx),
        Command::Predict(a) => cmd_predict(a, cli.format, &mut ctx),
        Command::Levels(a) => cmd_levels(a, cli.format, &mut ctx),
        Command::Spectrum(a) => cmd_spectrum(a, cli.format, cli.seed, &mut ctx),
        Command::Barrier(a) => cmd_barrier(a, cli.format, &mut ctx),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(ctx.stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn reject_format(
    format: Option<Format>,
    allowed: &[Format],
    command: &str,
) -> std::result::Result<(), Failure> {
    match format {
        Some(f) if !allowed.contains(&f) => Err(usage(format!("`{command}` cannot write {f:?} output"))),
        _ => Ok(()),
    }
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn load_fit(path: &Path) -> Result<FitReport> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    FitReport::from_json(&text)
}

fn cmd_fit(a: &FitArgs, format: Option<Format>, ctx: &mut Ctx) -> std::result::Result<i32, Failure> {
    reject_format(format, &[Format::Json, Format::Csv], "fit")?;
    let isos = read_isotopologues_file(&a.isotopologues)?;
    let list = read_line_list_file(&a.lines, &isos)?;
    for w in &list.warnings {
        ctx.note(&format!("warning: {w}"));
    }
    let mut problem = FitProblem::from_records(&list.records, &isos);
    problem.fixed_c8 = a.fix_c8;
    if let Some(n) = a.max_iterations {
        problem.options.max_iterations = n;
    }
    if let Some(t) = a.param_tol {
        problem.options.param_tol = t;
    }
    if let Some(t) = a.cost_tol {
        problem.options.cost_tol = t;
    }
    ctx.note(&format!("fitting {} lines", problem.lines.len()));
    let result = fit_nde(&problem)?;
    let report = FitReport::new(&result, &problem)?;
    for w in &report.warnings {
        ctx.note(&format!("warning: {w}"));
    }
    let residual_csv = write_residual_csv(&report.residuals);
    if let Some(path) = &a.residuals {
        write_file(path, &residual_csv)?;
    }
    match format.unwrap_or(Format::Json) {
        Format::Csv => ctx.emit(&residual_csv)?,
        _ => ctx.emit(&(report.to_json()? + "\n"))?,
    }
    ctx.note(&format!(
        "c6 = {:.2} a.u., c8 = {:.4e} a.u., rms = {:.4} cm-1, {} iterations",
        report.c6_au, report.c8_au, report.rms_cm1, report.iterations
    ));
    if report.converged {
        Ok(EXIT_OK)
    } else {
        ctx.note("fit did not converge; result written anyway");
        Ok(EXIT_NUMERIC)
    }
}

fn cmd_predict(a: &PredictArgs, format: Option<Format>, ctx: &mut Ctx) -> std::result::Result<i32, Failure> {
    reject_format(format, &[Format::Csv, Format::Json], "predict")?;
    let dv_to = a.dv_to.unwrap_or(a.dv_from);
    if a.dv_from >= 0 || dv_to >= 0 {
        return Err(usage(format!(
            "dv must be negative, got {}..{}",
            a.dv_from, dv_to
        )));
    }
    let (from, to) = (a.dv_from.min(dv_to), a.dv_from.max(dv_to));
    let fit = load_fit(&a.fit)?;
    let model = fit.model(&a.isotopologue)?;
    let v_d = fit.v_d_of(&a.isotopologue)?;
    let rows: Vec<PredictionRow> = model
        .predict_series(v_d, from, to)?
        .into_iter()
        .rev()
        .map(|(dv, e)| PredictionRow {
            isotopologue: a.isotopologue.clone(),
            dv,
            count: v_d - f64::from(dv),
            delta_pa_cm1: hartree_to_cm1(e),
        })
        .collect();
    let text = match format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&rows)?,
        _ => to_csv(&rows)?,
    };
    ctx.emit(&text)?;
    Ok(EXIT_OK)
}

fn cmd_levels(a: &LevelsArgs, format: Option<Format>, ctx: &mut Ctx) -> std::result::Result<i32, Failure> {
    reject_format(format, &[Format::Csv, Format::Json], "levels")?;
    if a.anchor_dv >= 0 {
        return Err(usage(format!("anchor dv must be negative, got {}", a.anchor_dv)));
    }
    if !(a.anchor_energy < 0.0) || !(a.e_min < a.anchor_energy) {
        return Err(usage("need e_min < anchor energy < 0"));
    }
    let fit = load_fit(&a.fit)?;
    let params = fit.params();
    let mu = fit.isotopologue(&a.isotopologue)?.mu_au();
    let v_d = fit.v_d_of(&a.isotopologue)?;
    let search = WallSearch {
        r_lo: a.wall_min,
        r_hi: a.wall_max,
        step: a.wall_step,
        grid_points: a.points,
        r_max: a.r_max,
        ..WallSearch::default()
    };
    RadialGrid::new(a.wall_min, a.r_max, a.points)?;
    ctx.note("calibrating inner wall");
    let wall = calibrate_wall(&params, mu, (a.anchor_dv, a.anchor_energy), v_d, &search)?;
    ctx.note(&format!("wall at {wall:.6} a0"));
    let grid = RadialGrid::new(wall, a.r_max, a.points)?;
    let levels = threshold_levels(
        &params,
        mu,
        &grid,
        cm1_to_hartree(a.e_min),
        &SolveOptions::default(),
    )?;
    let model = fit.model(&a.isotopologue)?;

    let mut rows = Vec::with_capacity(levels.len());
    for lvl in levels.iter().rev() {
        let s = &lvl.state;
        let nde = if lvl.dv <= -1 {
            hartree_to_cm1(model.level_energy(v_d - f64::from(lvl.dv))?)
        } else {
            f64::NAN
        };
        rows.push(LevelRow {
            dv: lvl.dv,
            energy_cm1: s.energy_cm1(),
            r_eff_wf_a0: s.r_eff,
            r_turning_a0: params.outer_turning_point(s.energy)?,
            nde_cm1: nde,
        });
        if let Some(dir) = &a.wavefunctions {
            std::fs::create_dir_all(dir)
                .map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
            write_file(&dir.join(format!("psi_dv{}.csv", lvl.dv)), &s.to_csv())?;
        }
    }
    let text = match format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&LevelsReport {
            schema_version: FitReport::SCHEMA_VERSION,
            isotopologue: a.isotopologue.clone(),
            wall_a0: wall,
            levels: rows,
        })?,
        _ => to_csv(&rows)?,
    };
    ctx.emit(&text)?;
    Ok(EXIT_OK)
}

fn cmd_spectrum(
    a: &SpectrumArgs,
    format: Option<Format>,
    seed: u64,
    ctx: &mut Ctx,
) -> std::result::Result<i32, Failure> {
    reject_format(format, &[Format::Csv, Format::Svg], "spectrum")?;
    let delta_pa = match (a.delta_pa, &a.fit) {
        (Some(d), _) => d,
        (None, Some(path)) => {
            let (Some(id), Some(dv)) = (&a.isotopologue, a.dv) else {
                return Err(usage("--fit needs --isotopologue and --dv"));
            };
            if dv >= 0 {
                return Err(usage(format!("dv must be negative, got {dv}")));
            }
            let fit = load_fit(path)?;
            let count = fit.v_d_of(id)? - f64::from(dv);
            hartree_to_cm1(fit.model(id)?.level_energy(count)?)
        }
        (None, None) => {
            return Err(usage(
                "give either --delta-pa or --fit with --isotopologue and --dv",
            ))
        }
    };
    if !(0.0..=1.0).contains(&a.depth) {
        return Err(usage(format!("depth must lie in [0, 1], got {}", a.depth)));
    }
    let level = RotationalLevel::new(a.b_rot, a.delta_r, a.f_prime, a.r_max)?;
    let rot = RotationConfig {
        nu_res: NU_RES_CM1,
        f1_offset: a.f1_offset,
        band_amplitudes: a.band_amplitudes.clone(),
    };
    let comps = components(delta_pa, &level, &rot);
    let dips = dips_from_components(&comps, a.depth, rot.nu_res);
    let cfg = SpectrumConfig {
        grid_start: a.start,
        grid_stop: a.stop,
        grid_step: a.step,
        line_fwhm: a.fwhm,
        line_shape: a.shape,
        noise_rms: a.noise,
        seed,
    };
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    let spectrum = spectra::synthesize(&dips, &cfg)?;
    ctx.note(&format!(
        "{} components at delta_pa = {delta_pa:.5} cm-1",
        comps.len()
    ));
    let mut title = String::new();
    let _ = write!(title, "line at {delta_pa:.4} cm-1, B = {} cm-1", a.b_rot);
    let svg = spectra::to_svg(&spectrum, &title);
    if let Some(path) = &a.svg {
        write_file(path, &svg)?;
    }
    match format.unwrap_or(Format::Csv) {
        Format::Svg => ctx.emit(&svg)?,
        _ => ctx.emit(&spectra::write_spectrum_csv(&spectrum))?,
    }
    Ok(EXIT_OK)
}

fn cmd_barrier(a: &BarrierArgs, format: Option<Format>, ctx: &mut Ctx) -> std::result::Result<i32, Failure> {
    reject_format(format, &[Format::Json], "barrier")?;
    if a.l == 0 {
        return Err(usage("l must be at least 1 (the s-wave has no barrier)"));
    }
    let params = PotentialParams::new(a.c6, 0.0)?;
    if !(a.mu > 0.0) {
        return Err(usage(format!("reduced mass must be positive, got {}", a.mu)));
    }
    let b = centrifugal_barrier(&params, amu_to_electron_mass(a.mu), a.l)?;
    ctx.emit(&to_json(&BarrierReport {
        schema_version: FitReport::SCHEMA_VERSION,
        l: b.l,
        r_b_a0: b.r_barrier,
        height_uk: b.height_microkelvin(),
    })?)?;
    Ok(EXIT_OK)
}
