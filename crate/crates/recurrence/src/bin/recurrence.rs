//! Command-line front end: exploration subcommands plus the full
//! experiment runner. All heavy lifting lives in the library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use recurrence::error::Result;
use recurrence::experiment::{
    run_experiment, Budgets, ExperimentConfig, MapSpec, Quantity,
};
use recurrence::maps::make_builtin_map;
use recurrence::returns::{scan_scales, symbolic_series, SeriesKind};
use recurrence::symbolic::{encode_orbit_by_branch, generate_bernoulli_word, Admissibility};

#[derive(Parser)]
#[command(
    name = "recurrence",
    about = "Return times and recurrence-based estimators for interval maps",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct MapArgs {
    /// Built-in map name (see `maps list`).
    #[arg(long)]
    map: String,
    /// Map parameters, e.g. `--params 4.0` for logistic(a).
    #[arg(long, value_delimiter = ',')]
    params: Vec<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in map families.
    Maps {
        #[command(subcommand)]
        sub: MapsCommand,
    },
    /// Print an orbit (and optionally its symbolic coding).
    Orbit {
        #[command(flatten)]
        map: MapArgs,
        /// Initial point; defaults to a mu-distributed sample.
        #[arg(long)]
        x0: Option<f64>,
        #[arg(long, default_value_t = 0)]
        master_seed: u64,
        #[arg(long, default_value_t = 20)]
        len: usize,
        /// Also print the branch coding.
        #[arg(long)]
        code: bool,
    },
    /// Compute one return-time series and print it as CSV.
    Returns {
        #[command(flatten)]
        map: MapArgs,
        /// point-return | ball-set-return | cylinder-return | repetition
        #[arg(long)]
        kind: String,
        #[arg(long)]
        x0: Option<f64>,
        #[arg(long, default_value_t = 0)]
        master_seed: u64,
        /// Radii for metric kinds, strictly decreasing.
        #[arg(long, value_delimiter = ',')]
        r_grid: Vec<f64>,
        /// Prefix lengths for symbolic kinds, strictly increasing.
        #[arg(long, value_delimiter = ',')]
        n_grid: Vec<usize>,
        #[arg(long, default_value_t = 100_000)]
        orbit_len: usize,
        #[arg(long, default_value_t = 1.0)]
        budget_scale: f64,
    },
    /// Run one estimator pipeline and print the JSON estimate.
    Estimate {
        #[command(flatten)]
        map: MapArgs,
        /// lyapunov | dimension | entropy | complexity
        #[arg(long)]
        quantity: String,
        #[arg(long, default_value_t = 8)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        master_seed: u64,
        #[arg(long, value_delimiter = ',')]
        r_grid: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        n_grid: Vec<usize>,
        #[arg(long, default_value_t = 100_000)]
        orbit_len: usize,
        #[arg(long, default_value_t = 1.0)]
        budget_scale: f64,
        /// Output directory for the full artifact set.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run a full experiment from a JSON config, with flag overrides.
    Experiment {
        /// JSON config path (schema: ExperimentConfig).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        map: Option<String>,
        #[arg(long, value_delimiter = ',')]
        params: Vec<f64>,
        #[arg(long)]
        seeds: Option<u64>,
        #[arg(long)]
        master_seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated quantity list.
        #[arg(long, value_delimiter = ',')]
        quantities: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        r_grid: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        n_grid: Vec<usize>,
        #[arg(long)]
        budget_scale: Option<f64>,
        #[arg(long)]
        orbit_len: Option<usize>,
    },
    /// Run the oracle-equivalence suites.
    Selftest,
}

#[derive(Subcommand)]
enum MapsCommand {
    List,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::FAILURE
        }
    }
}

fn initial_point(map: &recurrence::IntervalMap, x0: Option<f64>, seed: u64) -> Result<f64> {
    match x0 {
        Some(x) => Ok(x),
        None => map.sample_initial_point(seed),
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Maps { sub: MapsCommand::List } => {
            println!("name                 params        markov  measure        notes");
            println!("tripling             -             yes     lebesgue       3x mod 1, expanding Markov workhorse");
            println!("doubling             -             yes     lebesgue       symbolic-exact only (fair-bit words)");
            println!("tent                 -             yes     lebesgue       min(2x, 2-2x)");
            println!("logistic             a in (0,4]    a=4     arcsine (a=4)  a x (1-x)");
            println!("gauss                -             yes     gauss          1/x mod 1, countable branches");
            println!("rotation             alpha in (0,1) no     lebesgue       zero entropy, circle metric");
            println!("manneville-pomeau    s > 0         no      -              parabolic fixed point, qualitative only");
        }
        Command::Orbit { map, x0, master_seed, len, code } => {
            let m = make_builtin_map(&map.map, &map.params)?;
            let x = initial_point(&m, x0, master_seed)?;
            let orbit = m.orbit(x, len)?;
            for p in &orbit.points {
                println!("{:.17}", p);
            }
            if code {
                println!("{}", encode_orbit_by_branch(&m, &orbit)?.to_line());
            }
        }
        Command::Returns {
            map,
            kind,
            x0,
            master_seed,
            r_grid,
            n_grid,
            orbit_len,
            budget_scale,
        } => {
            let m = make_builtin_map(&map.map, &map.params)?;
            let kind = SeriesKind::parse(&kind)?;
            let series = match kind {
                SeriesKind::PointReturn | SeriesKind::BallSetReturn => {
                    let x = initial_point(&m, x0, master_seed)?;
                    scan_scales(kind, &m, x, &r_grid, budget_scale)
                }
                SeriesKind::CylinderReturn | SeriesKind::Repetition => {
                    let word = if m.symbolic_only() {
                        generate_bernoulli_word(&[0.5, 0.5], orbit_len, master_seed)?
                    } else {
                        let x = initial_point(&m, x0, master_seed)?;
                        encode_orbit_by_branch(&m, &m.orbit(x, orbit_len)?)?
                    };
                    let limit = (orbit_len - n_grid.last().copied().unwrap_or(1)) as u64;
                    symbolic_series(kind, &word, &n_grid, &Admissibility::FullShift, limit)
                }
            };
            print!("kind,seed,x,scale,value,flag\n");
            for row in &series.rows {
                println!(
                    "{},{},{:.16e},{:.16e},{},{}",
                    series.kind.as_str(),
                    master_seed,
                    series.x,
                    row.scale,
                    row.value,
                    row.flag.as_str()
                );
            }
        }
        Command::Estimate {
            map,
            quantity,
            seeds,
            master_seed,
            r_grid,
            n_grid,
            orbit_len,
            budget_scale,
            out,
        } => {
            let q = Quantity::parse(&quantity)?;
            let config = ExperimentConfig {
                map: MapSpec { name: map.map, params: map.params },
                seeds,
                master_seed,
                r_grid,
                n_grid,
                budgets: Budgets { budget_scale, orbit_len, ..Budgets::default() },
                out_dir: out,
                quantities: vec![q],
            };
            let summary = run_experiment(&config)?;
            for f in summary.files.iter().filter(|f| f.starts_with("estimate_")) {
                let text = std::fs::read_to_string(summary.out_dir.join(f))?;
                println!("{}", text.trim_end());
            }
            if summary.degraded {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Experiment {
            config,
            map,
            params,
            seeds,
            master_seed,
            out,
            quantities,
            r_grid,
            n_grid,
            budget_scale,
            orbit_len,
        } => {
            let mut cfg: ExperimentConfig = match config {
                Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
                None => ExperimentConfig {
                    map: MapSpec { name: "tripling".into(), params: vec![] },
                    seeds: 8,
                    master_seed: 0,
                    r_grid: vec![],
                    n_grid: vec![],
                    budgets: Budgets::default(),
                    out_dir: "out".into(),
                    quantities: vec![],
                },
            };
            // Flags override config fields.
            if let Some(name) = map {
                cfg.map = MapSpec { name, params };
            }
            if let Some(s) = seeds {
                cfg.seeds = s;
            }
            if let Some(s) = master_seed {
                cfg.master_seed = s;
            }
            if let Some(o) = out {
                cfg.out_dir = o;
            }
            if !quantities.is_empty() {
                cfg.quantities = quantities
                    .iter()
                    .map(|s| Quantity::parse(s))
                    .collect::<Result<Vec<_>>>()?;
            }
            if !r_grid.is_empty() {
                cfg.r_grid = r_grid;
            }
            if !n_grid.is_empty() {
                cfg.n_grid = n_grid;
            }
            if let Some(b) = budget_scale {
                cfg.budgets.budget_scale = b;
            }
            if let Some(l) = orbit_len {
                cfg.budgets.orbit_len = l;
            }
            let summary = run_experiment(&cfg)?;
            println!("wrote {} files to {}", summary.files.len(), summary.out_dir.display());
            if summary.degraded {
                eprintln!("warning: degraded run (flagged rows or failed seeds)");
                return Ok(ExitCode::from(2));
            }
        }
        Command::Selftest => {
            let results = recurrence::selftest::run_all();
            let mut ok = true;
            for r in &results {
                println!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
                ok &= r.passed;
            }
            if !ok {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
