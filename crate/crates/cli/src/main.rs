//! `abqaoa`: generate MaxCut instances, run level sweeps, aggregate results.
//!
//! Exit codes: 0 success, 2 configuration or input error, 3 numerical
//! failure, 4 I/O failure. Outputs go to `--out-dir`, falling back to
//! `$ABQAOA_OUT_DIR` and then the current directory. Every command also
//! writes a `<name>.manifest.toml` that `abqaoa rerun` replays.

mod config;
mod manifest;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use abqaoa::io::{self, FitRow, PStarRow, ResultRow};
use abqaoa::maxcut::generate_ensemble;
use abqaoa::metrics::{
    aggregate_ensemble, fit_curve, fit_curve_weighted, p_star_from_curve, p_star_from_fit, scan_landscape, EnsembleCurve,
    FitForm, LandscapeGrid, DEFAULT_R_STAR,
};
use abqaoa::{build_cost_diagonal, collect_nonisomorphic_u3r, run_sweep, BiasField, FourierPoint, GraphInstance, Mode, VariationalPoint};
use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use config::ConfigFile;
use manifest::RunManifest;

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError { code: EXIT_CONFIG, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError { code: EXIT_IO, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<abqaoa::Error> for CliError {
    fn from(e: abqaoa::Error) -> Self {
        use abqaoa::Error as E;
        let code = match &e {
            E::Numerical(_) | E::Domain(_) | E::Unreachable { .. } | E::LevelFailed { .. } => EXIT_NUMERICAL,
            E::Io { .. } | E::Csv(_) | E::Parse { .. } => EXIT_IO,
            _ => EXIT_CONFIG,
        };
        CliError { code, message: e.to_string() }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "abqaoa", version, about = "Standard and adaptive-bias QAOA for MaxCut")]
struct Cli {
    /// Output directory [default: $ABQAOA_OUT_DIR, else the current directory]
    #[arg(long, global = true, env = "ABQAOA_OUT_DIR")]
    out_dir: Option<PathBuf>,

    /// Worker threads [default: available cores]
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Generate random regular graphs (or all connected cubic graphs on n vertices)
    Gen(GenArgs),
    /// Run the level-by-level protocol on graph files
    Sweep(SweepArgs),
    /// Aggregate results files into curves, fits and p*/speedup tables
    Report(ReportArgs),
    /// Level-1 energy over a (u1, v1) grid
    Landscape(LandscapeArgs),
    /// Replay the command recorded in a manifest
    Rerun(RerunArgs),
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub regularity: usize,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Draw edge weights uniformly from (0, 1]
    #[arg(long)]
    pub weighted: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// One graph per isomorphism class of connected unweighted cubic graphs
    #[arg(long, conflicts_with_all = ["weighted", "count"])]
    pub nonisomorphic: bool,
    /// Sampling attempts for --nonisomorphic
    #[arg(long, default_value_t = 20_000)]
    pub budget: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SweepArgs {
    /// Graph files
    #[arg(required = true)]
    pub graphs: Vec<PathBuf>,
    /// Configuration file of flat `key = value` lines
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub mode: Option<Mode>,
    #[arg(long)]
    pub target_p: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Write per-iteration traces of the best restart of every level
    #[arg(long)]
    pub traces: bool,
    /// Results file stem [default: results-<mode>]
    #[arg(long)]
    pub name: Option<String>,
    /// Fully resolved configuration recorded by a previous run
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolved: Option<ConfigFile>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ReportArgs {
    /// Results files
    #[arg(required = true)]
    pub results: Vec<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_R_STAR)]
    pub r_star: f64,
    /// Weight fits by the ensemble standard deviation
    #[arg(long)]
    pub weighted_fit: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct LandscapeArgs {
    pub graph: PathBuf,
    #[arg(long, default_value_t = -std::f64::consts::SQRT_2 * std::f64::consts::FRAC_PI_2, allow_negative_numbers = true)]
    pub u_min: f64,
    #[arg(long, default_value_t = std::f64::consts::SQRT_2 * std::f64::consts::FRAC_PI_2, allow_negative_numbers = true)]
    pub u_max: f64,
    #[arg(long, default_value_t = -std::f64::consts::SQRT_2 * std::f64::consts::FRAC_PI_4, allow_negative_numbers = true)]
    pub v_min: f64,
    #[arg(long, default_value_t = std::f64::consts::SQRT_2 * std::f64::consts::FRAC_PI_4, allow_negative_numbers = true)]
    pub v_max: f64,
    #[arg(long, default_value_t = 50)]
    pub resolution: usize,
    /// Uniform bias on every qubit
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub bias: f64,
    /// Per-qubit biases, comma separated (overrides --bias)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub biases: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RerunArgs {
    pub manifest: PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::config("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::config(format!("cannot configure {jobs} workers: {e}")))?;
    }
    let out_dir = cli.out_dir.unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir).map_err(|e| CliError::io(format!("{}: {e}", out_dir.display())))?;
    execute(cli.command, &out_dir)
}

fn execute(command: Command, out_dir: &Path) -> CliResult<()> {
    match command {
        Command::Gen(args) => cmd_gen(args, out_dir),
        Command::Sweep(args) => cmd_sweep(args, out_dir),
        Command::Report(args) => cmd_report(args, out_dir),
        Command::Landscape(args) => cmd_landscape(args, out_dir),
        Command::Rerun(args) => {
            let m = RunManifest::load(&args.manifest)?;
            if matches!(m.command, Command::Rerun(_)) {
                return Err(CliError::config("a manifest cannot record another rerun"));
            }
            info!("replaying {} recorded by version {}", args.manifest.display(), m.version);
            execute(m.command, out_dir)
        }
    }
}

fn absolute(path: &Path) -> CliResult<PathBuf> {
    std::fs::canonicalize(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn cmd_gen(args: GenArgs, out_dir: &Path) -> CliResult<()> {
    let graphs = if args.nonisomorphic {
        if args.regularity != 3 {
            return Err(CliError::config("--nonisomorphic only supports cubic graphs"));
        }
        let set = collect_nonisomorphic_u3r(args.n, args.budget, args.seed)?;
        if !set.complete {
            warn!("new isomorphism classes were still appearing late in the budget; raise --budget");
        }
        set.graphs
    } else {
        generate_ensemble(args.n, args.regularity, args.weighted, args.count, args.seed)?
    };
    let mut outputs = Vec::new();
    for g in &graphs {
        let path = out_dir.join(format!("{}.graph", g.id()));
        io::write_graph(&path, g)?;
        outputs.push(path);
    }
    println!("wrote {} graphs to {}", graphs.len(), out_dir.display());
    RunManifest::new(Command::Gen(args), Some(0), outputs).save(&out_dir.join("gen.manifest.toml"))
}

fn load_graphs(paths: &[PathBuf]) -> CliResult<Vec<GraphInstance>> {
    let graphs = paths.iter().map(|p| io::read_graph(p)).collect::<abqaoa::Result<Vec<_>>>()?;
    let mut seen = BTreeSet::new();
    for g in &graphs {
        if !seen.insert(g.id().to_string()) {
            return Err(CliError::config(format!("graph id `{}` appears twice", g.id())));
        }
    }
    Ok(graphs)
}

fn cmd_sweep(mut args: SweepArgs, out_dir: &Path) -> CliResult<()> {
    let resolved = match &args.resolved {
        Some(snapshot) => snapshot.clone(),
        None => {
            let file = match &args.config {
                Some(p) => ConfigFile::load(p)?,
                None => ConfigFile::default(),
            };
            let flags = ConfigFile {
                mode: args.mode,
                target_p: args.target_p,
                master_seed: args.seed,
                restarts: args.restarts,
                ..ConfigFile::default()
            };
            ConfigFile::snapshot(&file.merged(&flags).to_protocol()?)
        }
    };
    let mut cfg = resolved.to_protocol()?;
    cfg.optimizer.record_trace = args.traces;
    args.graphs = args.graphs.iter().map(|p| absolute(p)).collect::<CliResult<_>>()?;
    args.resolved = Some(resolved);
    let graphs = load_graphs(&args.graphs)?;
    info!("sweeping {} graphs to level {} in {} mode", graphs.len(), cfg.target_p, cfg.mode);

    let outcomes: Vec<_> = graphs.par_iter().map(|g| run_sweep(g, &cfg)).collect();
    let mut rows: Vec<ResultRow> = Vec::new();
    let mut first_error = None;
    let trace_dir = out_dir.join("traces");
    for (g, outcome) in graphs.iter().zip(outcomes) {
        match outcome {
            Ok(records) => {
                for rec in &records {
                    rows.push(ResultRow::from_level(g.id(), cfg.mode, cfg.master_seed, rec));
                    if let Some(trace) = &rec.trace {
                        std::fs::create_dir_all(&trace_dir).map_err(|e| CliError::io(format!("{}: {e}", trace_dir.display())))?;
                        io::write_trace(&trace_dir.join(format!("{}-{}-p{}.csv", g.id(), cfg.mode, rec.level)), trace)?;
                    }
                }
            }
            Err(e) => {
                eprintln!("{}: {e}", g.id());
                first_error.get_or_insert(e);
            }
        }
    }
    let stem = args.name.clone().unwrap_or_else(|| format!("results-{}", cfg.mode));
    let results_path = out_dir.join(format!("{stem}.csv"));
    io::write_results(&results_path, &rows)?;
    println!("wrote {} rows to {}", rows.len(), results_path.display());
    RunManifest::new(Command::Sweep(args), Some(cfg.master_seed), vec![results_path])
        .save(&out_dir.join(format!("{stem}.manifest.toml")))?;
    match first_error {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn fit_rows(curve: &EnsembleCurve, weighted: bool) -> Vec<FitRow> {
    let mut out = Vec::new();
    for quantity in ["accuracy", "fidelity"] {
        let (pts, stds): (Vec<(f64, f64)>, Vec<f64>) = curve
            .points
            .iter()
            .map(|pt| match quantity {
                "accuracy" => ((pt.p as f64, pt.mean_infidelity_r), pt.std_infidelity_r),
                _ => ((pt.p as f64, pt.mean_infidelity_f), pt.std_infidelity_f),
            })
            .unzip();
        for form in [FitForm::ExpLinear, FitForm::ExpSqrt] {
            let fit = if weighted { fit_curve_weighted(&pts, form, Some(&stds)) } else { fit_curve(&pts, form) };
            match fit {
                Ok(fit) => out.push(FitRow { n: curve.n, mode: curve.mode, quantity: quantity.into(), fit }),
                Err(e) => warn!("n={} {} {quantity} {}: {e}", curve.n, curve.mode, form.as_str()),
            }
        }
    }
    out
}

fn cmd_report(mut args: ReportArgs, out_dir: &Path) -> CliResult<()> {
    args.results = args.results.iter().map(|p| absolute(p)).collect::<CliResult<_>>()?;
    let mut groups: BTreeMap<(usize, Mode), Vec<ResultRow>> = BTreeMap::new();
    for path in &args.results {
        for row in io::read_results(path)? {
            groups.entry((row.n, row.mode)).or_default().push(row);
        }
    }
    let curves = groups.values().map(|rows| aggregate_ensemble(rows)).collect::<abqaoa::Result<Vec<_>>>()?;
    let fits: Vec<FitRow> = curves.iter().flat_map(|c| fit_rows(c, args.weighted_fit)).collect();

    let mut p_star: BTreeMap<usize, PStarRow> = BTreeMap::new();
    for curve in &curves {
        let row = p_star.entry(curve.n).or_insert(PStarRow { n: curve.n, p_star_standard: None, p_star_adaptive: None });
        match curve.mode {
            // standard QAOA is extrapolated from its accuracy fit, adaptive read off the data
            Mode::Standard => {
                row.p_star_standard = fits
                    .iter()
                    .find(|f| f.n == curve.n && f.mode == Mode::Standard && f.quantity == "accuracy" && f.fit.form == FitForm::ExpSqrt)
                    .and_then(|f| p_star_from_fit(&f.fit, args.r_star).ok())
            }
            Mode::AdaptiveBias => row.p_star_adaptive = p_star_from_curve(curve, args.r_star).ok(),
        }
    }
    let p_star: Vec<PStarRow> = p_star.into_values().collect();

    let outputs = vec![out_dir.join("curves.csv"), out_dir.join("fits.csv"), out_dir.join("p_star.csv")];
    io::write_curves(&outputs[0], &curves)?;
    io::write_fits(&outputs[1], &fits)?;
    io::write_p_star(&outputs[2], &p_star)?;
    for row in &p_star {
        println!(
            "n={} p*_standard={} p*_adaptive={} speedup={}",
            row.n,
            row.p_star_standard.map_or("-".into(), |p| p.to_string()),
            row.p_star_adaptive.map_or("-".into(), |p| p.to_string()),
            row.speedup().map_or("-".into(), |s| format!("{s:.2}"))
        );
    }
    RunManifest::new(Command::Report(args), None, outputs).save(&out_dir.join("report.manifest.toml"))
}

fn cmd_landscape(mut args: LandscapeArgs, out_dir: &Path) -> CliResult<()> {
    args.graph = absolute(&args.graph)?;
    let g = io::read_graph(&args.graph)?;
    let bias = match &args.biases {
        Some(h) => BiasField::new(h.clone())?,
        None => BiasField::uniform(g.n(), args.bias),
    };
    if bias.len() != g.n() {
        return Err(CliError::config(format!("{} biases for {} qubits", bias.len(), g.n())));
    }
    let d = build_cost_diagonal(&g)?;
    let base = VariationalPoint {
        fourier: FourierPoint::new(vec![(args.u_min + args.u_max) / 2.0], vec![(args.v_min + args.v_max) / 2.0])?,
        bias,
    };
    let grid = LandscapeGrid { u_range: (args.u_min, args.u_max), v_range: (args.v_min, args.v_max), resolution: args.resolution };
    let land = scan_landscape(&d, &base, &grid)?;
    let path = out_dir.join(format!("landscape-{}.csv", g.id()));
    let mut text = String::from("u,v,energy\n");
    for (i, u) in land.u.iter().enumerate() {
        for (j, v) in land.v.iter().enumerate() {
            text.push_str(&format!("{u},{v},{}\n", land.energies[i][j]));
        }
    }
    std::fs::write(&path, text).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    let (u, v, e) = land.minimum();
    println!("grid minimum {e} at u1={u} v1={v}; wrote {}", path.display());
    RunManifest::new(Command::Landscape(args), None, vec![path.clone()])
        .save(&out_dir.join(format!("landscape-{}.manifest.toml", g.id())))
}
