//! Command-line front end.
//!
//! Parameters come from three layers, later ones winning: built-in defaults,
//! an optional `key = value` file given with `--config`, and command-line
//! flags. Keys in the file use the flag names with `_` or `-` (`r_star`,
//! `t-end`, `B`). Unknown keys are rejected.
//!
//! Exit codes: 0 success, 1 failed acceptance criterion, 2 usage error,
//! 3 numerical failure.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bifurcation::{self, compare_with_kenmotsu, trace_branch_with, KenmotsuComparison};
use crate::equilibria::{self, classify_equilibrium, unduloid_profile, EquilibriumKind};
use crate::evolution::{evolve, fit_exponential_rate, perturbed_cylinder, DiagnosticRecord, Scheme, StepController, Termination};
use crate::geometry;
use crate::io::{self, Header};
use crate::reduction::equivolume_radius;
use crate::stability::{self, cylinder_spectrum, numeric_spectrum, reduced_cylinder_spectrum, Basis, SpectrumReport, StabilityClass};
use crate::torus::ProfileFunction;
use crate::verify::{self, VerifyOptions};
use crate::{AmcfError, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CRITERION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

pub const OUTPUT_DIR_ENV: &str = "AMCF_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "amcf", version, about = "Averaged mean curvature flow of periodic surfaces of revolution")]
pub struct Cli {
    /// Key-value configuration file; flags override its entries.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Directory for emitted files [default: $AMCF_OUTPUT_DIR, else .]
    #[arg(long, global = true, value_name = "DIR")]
    pub output_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve a perturbed cylinder and write the trajectory.
    Simulate(SimulateArgs),
    /// Generate an unduloid, or the family of undulary curves.
    Equilibrium(EquilibriumArgs),
    /// Cylinder spectra, closed form and numeric.
    Spectrum(SpectrumArgs),
    /// Trace the branch of unduloids bifurcating at lambda = ell.
    Branch(BranchArgs),
    /// Run the acceptance criteria.
    Verify(VerifyArgs),
}

#[derive(Debug, Args, Default)]
pub struct SimulateArgs {
    /// Grid size [default: 128]
    #[arg(long)]
    pub n: Option<usize>,
    /// semi-implicit or rk4 [default: semi-implicit]
    #[arg(long)]
    pub scheme: Option<String>,
    /// Time step; `auto` picks 0.01 (semi-implicit) or the RK4 bound [default: auto]
    #[arg(long)]
    pub dt: Option<String>,
    /// Final time [default: 100]
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Cylinder radius [default: 2]
    #[arg(long)]
    pub r_star: Option<f64>,
    /// Mode of the cosine perturbation [default: 1]
    #[arg(long)]
    pub perturb_mode: Option<usize>,
    /// Amplitude of the perturbation [default: 0.01]
    #[arg(long)]
    pub perturb_amp: Option<f64>,
    /// Stop once ‖G‖∞ falls below this [default: 1e-9]
    #[arg(long)]
    pub tol_equilibrium: Option<f64>,
    /// Positivity floor for min r [default: 1e-6]
    #[arg(long)]
    pub r_min_floor: Option<f64>,
    /// Record diagnostics every this many steps [default: 10]
    #[arg(long)]
    pub diag_every: Option<usize>,
    /// Re-project onto the initial volume after every step [default: false]
    #[arg(long)]
    pub reproject_volume: Option<bool>,
}

#[derive(Debug, Args, Default)]
pub struct EquilibriumArgs {
    /// Kenmotsu parameter B, |B| <= 0.99 [default: 0.5]
    #[arg(long = "B", allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Number of periods on [-π, π) [default: 1]
    #[arg(long)]
    pub k: Option<u32>,
    /// Grid size [default: 512]
    #[arg(long)]
    pub n: Option<usize>,
    /// Emit the whole family B ∈ {-0.99, ..., 0.99} instead [default: false]
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub family: Option<bool>,
}

#[derive(Debug, Args, Default)]
pub struct SpectrumArgs {
    /// Cylinder radius for the JSON report [default: 2]
    #[arg(long)]
    pub r_star: Option<f64>,
    /// Highest closed-form mode [default: 10]
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Grid size of the numeric spectrum [default: 128]
    #[arg(long)]
    pub n: Option<usize>,
    /// Numeric basis size [default: 21]
    #[arg(long)]
    pub m: Option<usize>,
    /// Comma-separated radii for the r_star,k,eigenvalue table [default: 0.5,1,2]
    #[arg(long)]
    pub radii: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct BranchArgs {
    /// Branch index [default: 1]
    #[arg(long)]
    pub ell: Option<u32>,
    /// Largest pinned amplitude [default: 0.2]
    #[arg(long)]
    pub s_max: Option<f64>,
    /// Continuation steps per direction [default: 40]
    #[arg(long)]
    pub steps: Option<usize>,
    /// Cosine modes; 0 picks max(32, 8ℓ) [default: 0]
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Debug, Args, Default)]
pub struct VerifyArgs {
    /// Only criteria 1-6
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub quick: Option<bool>,
    /// Mutation mode: `flip-source-sign` negates f(r)
    #[arg(long)]
    pub mutate: Option<String>,
    /// Seed for randomized criteria [default: 20240607]
    #[arg(long)]
    pub seed: Option<u64>,
}

fn push<T: ToString>(out: &mut Vec<(&'static str, String)>, key: &'static str, v: &Option<T>) {
    if let Some(v) = v {
        out.push((key, v.to_string()));
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Simulate(_) => "simulate",
            Self::Equilibrium(_) => "equilibrium",
            Self::Spectrum(_) => "spectrum",
            Self::Branch(_) => "branch",
            Self::Verify(_) => "verify",
        }
    }

    fn flag_values(&self) -> Vec<(&'static str, String)> {
        let mut o = Vec::new();
        match self {
            Self::Simulate(a) => {
                push(&mut o, "n", &a.n);
                push(&mut o, "scheme", &a.scheme);
                push(&mut o, "dt", &a.dt);
                push(&mut o, "t_end", &a.t_end);
                push(&mut o, "r_star", &a.r_star);
                push(&mut o, "perturb_mode", &a.perturb_mode);
                push(&mut o, "perturb_amp", &a.perturb_amp);
                push(&mut o, "tol_equilibrium", &a.tol_equilibrium);
                push(&mut o, "r_min_floor", &a.r_min_floor);
                push(&mut o, "diag_every", &a.diag_every);
                push(&mut o, "reproject_volume", &a.reproject_volume);
            }
            Self::Equilibrium(a) => {
                push(&mut o, "b", &a.b);
                push(&mut o, "k", &a.k);
                push(&mut o, "n", &a.n);
                push(&mut o, "family", &a.family);
            }
            Self::Spectrum(a) => {
                push(&mut o, "r_star", &a.r_star);
                push(&mut o, "k_max", &a.k_max);
                push(&mut o, "n", &a.n);
                push(&mut o, "m", &a.m);
                push(&mut o, "radii", &a.radii);
            }
            Self::Branch(a) => {
                push(&mut o, "ell", &a.ell);
                push(&mut o, "s_max", &a.s_max);
                push(&mut o, "steps", &a.steps);
                push(&mut o, "m", &a.m);
            }
            Self::Verify(a) => {
                push(&mut o, "quick", &a.quick);
                push(&mut o, "mutate", &a.mutate);
                push(&mut o, "seed", &a.seed);
            }
        }
        o
    }
}

/// Built-in defaults per command; the key set is also the set of accepted keys.
pub fn defaults(command: &str) -> Result<BTreeMap<String, String>> {
    let pairs: &[(&str, &str)] = match command {
        "simulate" => &[
            ("n", "128"),
            ("scheme", "semi-implicit"),
            ("dt", "auto"),
            ("t_end", "100"),
            ("r_star", "2"),
            ("perturb_mode", "1"),
            ("perturb_amp", "0.01"),
            ("tol_equilibrium", "1e-9"),
            ("r_min_floor", "1e-6"),
            ("diag_every", "10"),
            ("reproject_volume", "false"),
        ],
        "equilibrium" => &[("b", "0.5"), ("k", "1"), ("n", "512"), ("family", "false")],
        "spectrum" => &[("r_star", "2"), ("k_max", "10"), ("n", "128"), ("m", "21"), ("radii", "0.5,1,2")],
        "branch" => &[("ell", "1"), ("s_max", "0.2"), ("steps", "40"), ("m", "0")],
        "verify" => &[("quick", "false"), ("mutate", "none"), ("seed", "20240607")],
        other => return Err(AmcfError::Usage(format!("unknown command '{other}'"))),
    };
    Ok(pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect())
}

fn normalize_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| AmcfError::Usage(format!("config line {}: expected `key = value`, got '{line}'", i + 1)))?;
        let key = normalize_key(k);
        if key.is_empty() {
            return Err(AmcfError::Usage(format!("config line {}: empty key", i + 1)));
        }
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(AmcfError::Usage(format!("config key '{key}' given twice")));
        }
    }
    Ok(out)
}

/// Fully resolved parameters of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: String,
    pub values: BTreeMap<String, String>,
    pub output_dir: PathBuf,
}

impl RunConfig {
    /// Layers defaults, the config file and flags, rejecting unknown keys.
    pub fn resolve(
        command: &str,
        file: Option<BTreeMap<String, String>>,
        flags: &[(&str, String)],
        output_dir_flag: Option<PathBuf>,
        output_dir_env: Option<String>,
    ) -> Result<Self> {
        let mut values = defaults(command)?;
        let mut output_dir = None;
        for (key, v) in file.unwrap_or_default() {
            if key == "output_dir" {
                output_dir = Some(PathBuf::from(v));
            } else if values.contains_key(&key) {
                values.insert(key, v);
            } else {
                return Err(AmcfError::Usage(format!("unknown key '{key}' for command '{command}'")));
            }
        }
        for (key, v) in flags {
            values.insert(key.to_string(), v.clone());
        }
        let output_dir = output_dir_flag
            .or(output_dir)
            .or_else(|| output_dir_env.filter(|s| !s.is_empty()).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        let cfg = Self {
            command: command.to_string(),
            values,
            output_dir,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn raw(&self, key: &str) -> Result<&str> {
        self.values
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| AmcfError::Usage(format!("missing key '{key}'")))
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T> {
        let raw = self.raw(key)?;
        raw.parse()
            .map_err(|_| AmcfError::Usage(format!("invalid value '{raw}' for key '{key}'")))
    }

    fn positive(&self, key: &str) -> Result<f64> {
        let v: f64 = self.get(key)?;
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(AmcfError::Usage(format!("key '{key}' must be positive, got {v}")))
        }
    }

    fn grid(&self, key: &str) -> Result<usize> {
        let n: usize = self.get(key)?;
        crate::torus::check_grid(n).map_err(|_| AmcfError::Usage(format!("key '{key}' must be an even grid size >= 8, got {n}")))?;
        Ok(n)
    }

    fn at_least(&self, key: &str, min: usize) -> Result<usize> {
        let v: usize = self.get(key)?;
        if v >= min {
            Ok(v)
        } else {
            Err(AmcfError::Usage(format!("key '{key}' must be at least {min}, got {v}")))
        }
    }

    /// Range checks for every key of the command.
    pub fn validate(&self) -> Result<()> {
        match self.command.as_str() {
            "simulate" => {
                self.grid("n")?;
                self.raw("scheme")?
                    .parse::<Scheme>()
                    .map_err(|_| AmcfError::Usage(format!("invalid value '{}' for key 'scheme'", self.raw("scheme").unwrap_or(""))))?;
                if self.raw("dt")? != "auto" {
                    self.positive("dt")?;
                }
                self.positive("t_end")?;
                self.positive("r_star")?;
                self.at_least("perturb_mode", 1)?;
                let amp: f64 = self.get("perturb_amp")?;
                let rs: f64 = self.get("r_star")?;
                if !(amp.abs() < rs) {
                    return Err(AmcfError::Usage(format!("key 'perturb_amp' must satisfy |amp| < r_star, got {amp}")));
                }
                self.positive("tol_equilibrium")?;
                self.positive("r_min_floor")?;
                self.at_least("diag_every", 1)?;
                self.get::<bool>("reproject_volume")?;
            }
            "equilibrium" => {
                let b: f64 = self.get("b")?;
                if !(b.abs() <= equilibria::B_CAP) {
                    return Err(AmcfError::Usage(format!("key 'B' must satisfy |B| <= {}, got {b}", equilibria::B_CAP)));
                }
                self.at_least("k", 1)?;
                self.grid("n")?;
                self.get::<bool>("family")?;
            }
            "spectrum" => {
                self.positive("r_star")?;
                self.at_least("k_max", 1)?;
                let n = self.grid("n")?;
                let m = self.at_least("m", 1)?;
                if 3 * m > 2 * n {
                    return Err(AmcfError::Usage(format!("key 'm' must be at most 2n/3 = {}, got {m}", 2 * n / 3)));
                }
                self.radii()?;
            }
            "branch" => {
                let ell = self.at_least("ell", 1)?;
                self.positive("s_max")?;
                self.at_least("steps", 1)?;
                let m: usize = self.get("m")?;
                if m != 0 && m < 4 * ell {
                    return Err(AmcfError::Usage(format!("key 'm' must be 0 or at least 4ℓ = {}, got {m}", 4 * ell)));
                }
            }
            "verify" => {
                self.get::<bool>("quick")?;
                self.get::<u64>("seed")?;
                match self.raw("mutate")? {
                    "none" | "flip-source-sign" => {}
                    other => return Err(AmcfError::Usage(format!("invalid value '{other}' for key 'mutate'"))),
                }
            }
            other => return Err(AmcfError::Usage(format!("unknown command '{other}'"))),
        }
        Ok(())
    }

    fn radii(&self) -> Result<Vec<f64>> {
        self.raw("radii")?
            .split(',')
            .map(|s| {
                let v: f64 = s
                    .trim()
                    .parse()
                    .map_err(|_| AmcfError::Usage(format!("invalid entry '{s}' in key 'radii'")))?;
                if v > 0.0 {
                    Ok(v)
                } else {
                    Err(AmcfError::Usage(format!("key 'radii' entries must be positive, got {v}")))
                }
            })
            .collect()
    }

    pub fn header(&self) -> Header {
        Header::new(&self.command, self.values.clone())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.output_dir.join(name)
    }
}

/// Parses the command line and the optional config file into a [`RunConfig`].
pub fn parse_config(cli: &Cli) -> Result<RunConfig> {
    let file = match &cli.config {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| AmcfError::Usage(format!("cannot read config file {}: {e}", p.display())))?;
            Some(parse_config_text(&text)?)
        }
        None => None,
    };
    RunConfig::resolve(
        cli.command.name(),
        file,
        &cli.command.flag_values(),
        cli.output_dir.clone(),
        std::env::var(OUTPUT_DIR_ENV).ok(),
    )
}

/// Maps an error to its exit code.
pub fn exit_code(e: &AmcfError) -> i32 {
    match e {
        AmcfError::Usage(_) => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

/// Runs a parsed command line; returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = parse_config(cli).and_then(|cfg| {
        fs::create_dir_all(&cfg.output_dir)?;
        execute(&cfg)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("amcf: {e}");
            exit_code(&e)
        }
    }
}

/// Runs a resolved configuration, writing its files; returns the exit code.
pub fn execute(cfg: &RunConfig) -> Result<i32> {
    match cfg.command.as_str() {
        "simulate" => simulate(cfg),
        "equilibrium" => equilibrium(cfg),
        "spectrum" => spectrum(cfg),
        "branch" => branch(cfg),
        "verify" => verify_all(cfg),
        other => Err(AmcfError::Usage(format!("unknown command '{other}'"))),
    }
}

#[derive(Serialize)]
struct SimulationSummary {
    termination: Termination,
    steps: usize,
    initial: DiagnosticRecord,
    last: DiagnosticRecord,
    equivolume_radius: f64,
    max_volume_drift: f64,
    max_area_increase: f64,
    /// Fitted rate of the perturbed mode, when enough records fall in the linear window.
    fitted_rate: Option<f64>,
    predicted_rate: f64,
    stability: StabilityClass,
    final_state: EquilibriumKind,
}

fn simulate(cfg: &RunConfig) -> Result<i32> {
    let n = cfg.grid("n")?;
    let scheme: Scheme = cfg.raw("scheme")?.parse()?;
    let t_end = cfg.positive("t_end")?;
    let mut ctrl = StepController::default_for(scheme, n, t_end);
    if scheme == Scheme::SemiImplicitEuler {
        ctrl.dt = 0.01;
    }
    if cfg.raw("dt")? != "auto" {
        ctrl.dt = cfg.positive("dt")?;
    }
    ctrl.tol_equilibrium = cfg.positive("tol_equilibrium")?;
    ctrl.r_min_floor = cfg.positive("r_min_floor")?;
    ctrl.diag_every = cfg.get("diag_every")?;
    ctrl.reproject_volume = cfg.get("reproject_volume")?;

    let r_star = cfg.positive("r_star")?;
    let mode: usize = cfg.get("perturb_mode")?;
    let r0 = perturbed_cylinder(n, r_star, mode, cfg.get("perturb_amp")?)?;
    let traj = evolve(&r0, &ctrl)?;

    let header = cfg.header();
    io::write_trajectory(&cfg.path("trajectory.csv"), &header, &traj)?;
    io::write_profile(&cfg.path("final_profile.csv"), &header, traj.final_profile())?;
    let summary = SimulationSummary {
        termination: traj.termination.clone(),
        steps: traj.steps,
        initial: traj.diagnostics[0],
        last: *traj.diagnostics.last().expect("non-empty"),
        equivolume_radius: equivolume_radius(&r0),
        max_volume_drift: traj.max_volume_drift(),
        max_area_increase: traj.max_area_increase(),
        fitted_rate: fit_exponential_rate(&traj, mode).ok(),
        predicted_rate: stability::cylinder_multiplier(equivolume_radius(&r0), mode),
        stability: stability::classify(r_star)?,
        final_state: classify_equilibrium(traj.final_profile(), 1e-6)?,
    };
    io::write_json(&cfg.path("summary.json"), &header, &summary)?;
    println!(
        "{:?} after {} steps, t = {:.6}; volume drift {:.3e}; final ‖G‖∞ {:.3e}",
        traj.termination,
        traj.steps,
        summary.last.t,
        summary.max_volume_drift,
        summary.last.g_inf
    );
    Ok(match traj.termination {
        Termination::StepFailure(_) => EXIT_NUMERICAL,
        _ => EXIT_OK,
    })
}

#[derive(Serialize)]
struct UnduloidReport {
    b: f64,
    k: u32,
    h: f64,
    n: usize,
    max_radius: f64,
    min_radius: f64,
    volume: f64,
    area: f64,
    g_inf: f64,
    /// `max |H(x) - mean H| / mean H` over the grid.
    cmc_deviation: f64,
}

fn unduloid_report(b: f64, k: u32, r: &ProfileFunction) -> Result<UnduloidReport> {
    let params = equilibria::UnduloidParams::new(b, k)?;
    let hv = geometry::mean_curvature(r)?;
    let mean = hv.iter().sum::<f64>() / hv.len() as f64;
    let dev = hv.iter().fold(0.0, |a: f64, h| a.max((h - mean).abs())) / mean;
    Ok(UnduloidReport {
        b,
        k,
        h: params.h,
        n: r.n(),
        max_radius: params.max_radius(),
        min_radius: params.min_radius(),
        volume: geometry::enclosed_volume(r),
        area: geometry::surface_area(r)?,
        g_inf: geometry::amcf_rhs(r)?.sup_norm(),
        cmc_deviation: dev,
    })
}

fn equilibrium(cfg: &RunConfig) -> Result<i32> {
    let k: u32 = cfg.get("k")?;
    let n = cfg.grid("n")?;
    let header = cfg.header();
    if cfg.get::<bool>("family")? {
        let family = equilibria::undulary_family(&equilibria::FAMILY_B, k, n)?;
        io::write_family(&cfg.path(&format!("family_k{k}.csv")), &header, &family)?;
        let reports = family
            .iter()
            .map(|(b, r)| unduloid_report(*b, k, r))
            .collect::<Result<Vec<_>>>()?;
        io::write_json(&cfg.path(&format!("family_k{k}.json")), &header, &reports)?;
        for r in &reports {
            println!("B = {:+.2}: H = {:.12}, ‖G‖∞ = {:.2e}", r.b, r.h, r.g_inf);
        }
    } else {
        let b: f64 = cfg.get("b")?;
        let r = unduloid_profile(b, k, n)?;
        io::write_profile(&cfg.path("unduloid.csv"), &header, &r)?;
        let report = unduloid_report(b, k, &r)?;
        io::write_json(&cfg.path("equilibrium.json"), &header, &report)?;
        println!(
            "B = {b}, k = {k}: H = {:.12}, ‖G‖∞ = {:.2e}, CMC deviation {:.2e}",
            report.h, report.g_inf, report.cmc_deviation
        );
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SpectrumDocument {
    closed_form: SpectrumReport,
    reduced_closed_form: SpectrumReport,
    numeric_full: SpectrumReport,
    numeric_even: SpectrumReport,
    decay_rate_prediction: f64,
    stability: StabilityClass,
}

fn spectrum(cfg: &RunConfig) -> Result<i32> {
    let r_star = cfg.positive("r_star")?;
    let k_max: usize = cfg.get("k_max")?;
    let n = cfg.grid("n")?;
    let m: usize = cfg.get("m")?;
    let r = ProfileFunction::constant(n, r_star)?;
    let doc = SpectrumDocument {
        closed_form: cylinder_spectrum(r_star, k_max)?,
        reduced_closed_form: reduced_cylinder_spectrum(r_star, k_max)?,
        numeric_full: numeric_spectrum(&r, Basis::Full, m)?,
        numeric_even: numeric_spectrum(&r, Basis::EvenZeroMean, m)?,
        decay_rate_prediction: stability::decay_rate_prediction(r_star)?,
        stability: stability::classify(r_star)?,
    };
    let header = cfg.header();
    io::write_json(&cfg.path("spectrum.json"), &header, &doc)?;
    let table = cfg
        .radii()?
        .into_iter()
        .map(|rs| Ok((rs, cylinder_spectrum(rs, k_max)?)))
        .collect::<Result<Vec<_>>>()?;
    io::write_csv(
        &cfg.path("spectrum_table.csv"),
        &header,
        &["r_star", "k", "eigenvalue"],
        &io::spectrum_table_rows(&table),
    )?;
    println!(
        "r* = {r_star}: leading nonzero rate {:.6} ({}), numeric leading {:.6}",
        doc.decay_rate_prediction, doc.stability, doc.numeric_even.leading().re
    );
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct PitchforkDocument {
    ell: u32,
    m: usize,
    points: usize,
    lambda_dot0: Option<f64>,
    lambda_ddot0: Option<f64>,
    truncated: Option<String>,
    kenmotsu: Vec<KenmotsuComparison>,
}

fn branch(cfg: &RunConfig) -> Result<i32> {
    let ell: u32 = cfg.get("ell")?;
    let s_max = cfg.positive("s_max")?;
    let steps: usize = cfg.get("steps")?;
    let m = match cfg.get::<usize>("m")? {
        0 => bifurcation::default_modes(ell),
        m => m,
    };
    let branch = trace_branch_with(ell, s_max, steps, m)?;
    let header = cfg.header();
    io::write_branch(&cfg.path(&format!("branch_ell{ell}.csv")), &header, &branch)?;
    let n = 256.max(bifurcation::grid_for(m));
    let kenmotsu = branch
        .points
        .iter()
        .filter(|p| p.s > 0.0)
        .map(|p| compare_with_kenmotsu(p, ell, n))
        .filter_map(|c| c.ok())
        .collect();
    let doc = PitchforkDocument {
        ell,
        m,
        points: branch.points.len(),
        lambda_dot0: branch.pitchfork_fit.map(|f| f.0),
        lambda_ddot0: branch.pitchfork_fit.map(|f| f.1),
        truncated: branch.truncated.clone(),
        kenmotsu,
    };
    io::write_json(&cfg.path(&format!("pitchfork_ell{ell}.json")), &header, &doc)?;
    match branch.pitchfork_fit {
        Some((d, dd)) => println!("ℓ = {ell}: {} points, λ'(0) = {d:.3e}, λ''(0) = {dd:.6}", branch.points.len()),
        None => println!("ℓ = {ell}: {} points, too few for a pitchfork fit", branch.points.len()),
    }
    if let Some(t) = &branch.truncated {
        println!("branch truncated: {t}");
    }
    Ok(EXIT_OK)
}

/// Runs the acceptance criteria and prints one line per criterion.
pub fn verify_all(cfg: &RunConfig) -> Result<i32> {
    let opts = VerifyOptions {
        seed: cfg.get("seed")?,
        flip_source: cfg.raw("mutate")? == "flip-source-sign",
    };
    let quick: bool = cfg.get("quick")?;
    let ids: Vec<u8> = if quick {
        verify::QUICK.to_vec()
    } else {
        verify::CRITERIA.iter().map(|c| c.0).collect()
    };
    let mut failed = Vec::new();
    for id in ids {
        let outcome = verify::run_criterion(id, &opts);
        println!("{outcome}");
        if !outcome.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("all criteria passed");
        Ok(EXIT_OK)
    } else {
        let list: Vec<String> = failed.iter().map(u8::to_string).collect();
        println!("failed criteria: {}", list.join(", "));
        Ok(EXIT_CRITERION)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(pairs: &[(&'static str, &str)]) -> Vec<(&'static str, String)> {
        pairs.iter().map(|(k, v)| (*k, v.to_string())).collect()
    }

    #[test]
    fn config_text_parsing() {
        let m = parse_config_text("# comment\nr-star = 1.5\n\nT_END=3 # trailing\n").unwrap();
        assert_eq!(m["r_star"], "1.5");
        assert_eq!(m["t_end"], "3");
        assert!(parse_config_text("n 64").is_err());
        assert!(parse_config_text("n=1\nn=2").is_err());
    }

    #[test]
    fn flags_override_file_and_env_is_fallback() {
        let mut file = BTreeMap::new();
        file.insert("r_star".into(), "3".into());
        file.insert("n".into(), "64".into());
        let cfg = RunConfig::resolve("simulate", Some(file), &flags(&[("n", "32")]), None, Some("/tmp/x".into())).unwrap();
        assert_eq!(cfg.raw("r_star").unwrap(), "3");
        assert_eq!(cfg.raw("n").unwrap(), "32");
        assert_eq!(cfg.output_dir, PathBuf::from("/tmp/x"));
        let cfg = RunConfig::resolve("simulate", None, &[], Some("out".into()), Some("/tmp/x".into())).unwrap();
        assert_eq!(cfg.output_dir, PathBuf::from("out"));
    }

    #[test]
    fn unknown_and_bad_keys_are_named() {
        let mut file = BTreeMap::new();
        file.insert("bogus".into(), "1".into());
        let err = RunConfig::resolve("simulate", Some(file), &[], None, None).unwrap_err();
        assert!(matches!(&err, AmcfError::Usage(s) if s.contains("bogus")));
        assert_eq!(exit_code(&err), EXIT_USAGE);

        let err = RunConfig::resolve("simulate", None, &flags(&[("n", "7")]), None, None).unwrap_err();
        assert!(err.to_string().contains("'n'"));
        let err = RunConfig::resolve("equilibrium", None, &flags(&[("b", "1.5")]), None, None).unwrap_err();
        assert!(err.to_string().contains("'B'"));
        let err = RunConfig::resolve("spectrum", None, &flags(&[("m", "200")]), None, None).unwrap_err();
        assert!(err.to_string().contains("'m'"));
        let err = RunConfig::resolve("verify", None, &flags(&[("mutate", "other")]), None, None).unwrap_err();
        assert!(err.to_string().contains("'mutate'"));
        let err = RunConfig::resolve("simulate", None, &flags(&[("dt", "abc")]), None, None).unwrap_err();
        assert!(err.to_string().contains("'dt'"));
    }

    #[test]
    fn cli_flags_map_to_keys() {
        let cli = Cli::try_parse_from(["amcf", "equilibrium", "--B", "-0.3", "--k", "2", "--family"]).unwrap();
        let f = cli.command.flag_values();
        assert!(f.contains(&("b", "-0.3".to_string())));
        assert!(f.contains(&("k", "2".to_string())));
        assert!(f.contains(&("family", "true".to_string())));
        assert!(Cli::try_parse_from(["amcf", "simulate", "--nope", "1"]).is_err());
    }

    #[test]
    fn runs_are_deterministic() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        for dir in [&a, &b] {
            let cfg = RunConfig::resolve(
                "simulate",
                None,
                &flags(&[("n", "32"), ("t_end", "0.5"), ("scheme", "rk4")]),
                Some(dir.path().to_path_buf()),
                None,
            )
            .unwrap();
            assert_eq!(execute(&cfg).unwrap(), EXIT_OK);
        }
        for name in ["trajectory.csv", "final_profile.csv", "summary.json"] {
            let x = fs::read(a.path().join(name)).unwrap();
            let y = fs::read(b.path().join(name)).unwrap();
            assert_eq!(x, y, "{name}");
            assert!(String::from_utf8(x).unwrap().contains(crate::VERSION));
        }
    }
}
