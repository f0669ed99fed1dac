use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use entcost::config::{parse_angle, RunConfig};
use entcost::measurement::CanonicalParams;
use entcost::par::Execution;
use entcost::tolerance::DELTA_TOL;
use entcost::{
    read_csv, run_sweep, search_params, verify_special_cases, write_scatter_svg, Detector, Error,
};

const EXIT_CONFIG: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_VERIFY: u8 = 3;

/// Entanglement-production lower bounds for two-qubit orthogonal measurements.
#[derive(Parser)]
#[command(name = "entcost", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep measurement parameter space and search detectors at every point.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        meas: MeasArgs,
        /// Worker threads (overrides the config file and ENTCOST_THREADS).
        #[arg(long)]
        workers: Option<usize>,
        /// Output CSV path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also render the scatter plot to this SVG path.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check the product, Bell and case-(iii) bases and local images of them.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Seed for the random local unitaries.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate one measurement given by its eight canonical parameters.
    Point {
        #[command(flatten)]
        common: CommonArgs,
        /// a b c d u v x y; accepts forms like pi/8.
        #[arg(num_args = 8, value_names = ["A", "B", "C", "D", "U", "V", "X", "Y"], allow_hyphen_values = true)]
        params: Vec<String>,
    },
    /// Render a sweep CSV as an SVG scatter plot.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// key = value configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    det_angle_step: Option<String>,
    #[arg(long)]
    det_phase_step: Option<String>,
    #[arg(long)]
    det_x_step: Option<String>,
    /// full_grid, random or grid_then_refine.
    #[arg(long)]
    det_mode: Option<String>,
    #[arg(long)]
    det_samples: Option<String>,
    #[arg(long)]
    det_seed: Option<String>,
    #[arg(long)]
    refine_iters: Option<String>,
    #[arg(long)]
    refine_shrink: Option<String>,
    #[arg(long)]
    refine_starts: Option<String>,
}

#[derive(Args)]
struct MeasArgs {
    #[arg(long)]
    meas_angle_step: Option<String>,
    #[arg(long)]
    meas_phase_step: Option<String>,
    #[arg(long)]
    meas_x_step: Option<String>,
    /// full_grid or random.
    #[arg(long)]
    meas_mode: Option<String>,
    #[arg(long)]
    meas_samples: Option<String>,
    #[arg(long)]
    meas_seed: Option<String>,
}

impl CommonArgs {
    fn load(&self) -> Result<RunConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        let flags = [
            ("det_angle_step", &self.det_angle_step),
            ("det_phase_step", &self.det_phase_step),
            ("det_x_step", &self.det_x_step),
            ("det_mode", &self.det_mode),
            ("det_samples", &self.det_samples),
            ("det_seed", &self.det_seed),
            ("refine_iters", &self.refine_iters),
            ("refine_shrink", &self.refine_shrink),
            ("refine_starts", &self.refine_starts),
        ];
        apply_flags(&mut cfg, &flags)?;
        Ok(cfg)
    }
}

fn apply_flags(cfg: &mut RunConfig, flags: &[(&str, &Option<String>)]) -> Result<(), Error> {
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => EXIT_IO,
        _ => EXIT_CONFIG,
    }
}

fn resolve_workers(flag: Option<usize>, configured: Option<usize>) -> Result<usize, Error> {
    if let Some(w) = flag {
        return if w == 0 {
            Err(Error::Spec("--workers must be at least 1".into()))
        } else {
            Ok(w)
        };
    }
    let default = std::thread::available_parallelism().map_or(1, |n| n.get());
    let base = configured.unwrap_or(default);
    match std::env::var("ENTCOST_THREADS") {
        Ok(v) => {
            let cap: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
                Error::Spec(format!("ENTCOST_THREADS = {v:?} is not a positive integer"))
            })?;
            Ok(base.min(cap))
        }
        Err(_) => Ok(base),
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Sweep {
            common,
            meas,
            workers,
            out,
            svg,
        } => {
            let mut cfg = common.load()?;
            apply_flags(
                &mut cfg,
                &[
                    ("meas_angle_step", &meas.meas_angle_step),
                    ("meas_phase_step", &meas.meas_phase_step),
                    ("meas_x_step", &meas.meas_x_step),
                    ("meas_mode", &meas.meas_mode),
                    ("meas_samples", &meas.meas_samples),
                    ("meas_seed", &meas.meas_seed),
                ],
            )?;
            if let Some(out) = out {
                cfg.out = out;
            }
            if svg.is_some() {
                cfg.svg = svg;
            }
            cfg.validate()?;
            let workers = resolve_workers(workers, cfg.workers)?;
            let (records, summary) = run_sweep(&cfg.meas, &cfg.det, workers, &cfg.out)?;
            if let Some(svg) = &cfg.svg {
                write_scatter_svg(&records, svg)?;
            }
            println!(
                "points={} strict={} max_delta={} runtime={:.3}s csv={}",
                summary.n_points,
                summary.n_strict,
                summary.max_delta,
                summary.runtime.as_secs_f64(),
                cfg.out.display()
            );
            Ok(0)
        }
        Command::Verify { common, seed } => {
            let cfg = common.load()?;
            cfg.det.validate()?;
            let report = verify_special_cases(&cfg.det, seed.unwrap_or(cfg.seed))?;
            for o in &report.outcomes {
                let image = o
                    .image
                    .map_or_else(|| "base".to_string(), |k| format!("lu{k}"));
                println!(
                    "{:<8} {:<5} entropy_bound={:.12} best_CL={:.12} delta={:+.3e} {}",
                    o.basis.as_str(),
                    image,
                    o.best.entropy_bound,
                    o.best.lower_bound,
                    o.best.delta,
                    if o.passed { "PASS" } else { "FAIL" }
                );
            }
            Ok(if report.all_passed() { 0 } else { EXIT_VERIFY })
        }
        Command::Point { common, params } => {
            let cfg = common.load()?;
            let mut values = [0.0; 8];
            for (slot, text) in values.iter_mut().zip(&params) {
                *slot = parse_angle(text)?;
            }
            let p = CanonicalParams::from_array(values)?;
            let r = search_params(&p, &cfg.det, Execution::default())?;
            println!("measurement      {p}");
            println!("entropy_bound    {}", r.best.entropy_bound);
            println!("avg_detector_E   {}", r.best.avg_detector_entanglement);
            println!("cut_entanglement {}", r.best.cut_entanglement);
            println!("best_CL          {}", r.best.lower_bound);
            println!("delta            {}", r.best.delta);
            if let Detector::Canonical { params, pairing } = r.best.detector {
                println!("detector         {params}");
                println!("pairing          {pairing:?}");
            }
            println!("evaluations      {}", r.evaluations);
            println!(
                "class            {}",
                if r.best.delta > DELTA_TOL {
                    "strict"
                } else {
                    "boundary"
                }
            );
            Ok(0)
        }
        Command::Plot { input, out } => {
            let records = read_csv(&input)?;
            write_scatter_svg(&records, &out)?;
            println!("plotted {} records to {}", records.len(), out.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
