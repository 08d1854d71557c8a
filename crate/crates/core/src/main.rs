use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use spieboard::doc::Document;
use spieboard::experiment::exp1::{
    analytic_success, fit_noise_params, simulate_exp1, FitOptions, NoiseModel, Observation,
};
use spieboard::experiment::gaze::{self, parse_gaze_trace, DEFAULT_DISPERSION_DEG, DEFAULT_MIN_FIXATION_MS};
use spieboard::experiment::stats::paired_t_test;
use spieboard::gesture::EngineConfig;
use spieboard::session::{replay, Session};
use spieboard::touch::parse_trace;

#[derive(Parser)]
#[command(name = "spieboard", version, about = "Multi-touch whiteboard engine and experiment harness")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Host a live session over WebSocket at ws://<addr>/ws?role=presenter|audience
    Serve {
        #[arg(long)]
        listen: SocketAddr,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Initial document (canonical text); defaults to one blank slide.
        #[arg(long)]
        doc: Option<PathBuf>,
    },
    /// Replay a touch trace and print or write the final document
    Replay {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        doc: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a touch trace against the stream rules
    Validate {
        #[arg(long)]
        trace: PathBuf,
    },
    /// Monte Carlo of menu selection accuracy per item count
    #[command(name = "simulate-exp1")]
    SimulateExp1 {
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,16")]
        items: Vec<usize>,
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 0.0)]
        lapse: f64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Fit the angular-noise model to observed success rates (CSV: n_items,rate)
    #[command(name = "fit-exp1")]
    FitExp1 {
        #[arg(long)]
        observed: PathBuf,
        #[arg(long)]
        fix_lapse: Option<f64>,
    },
    /// Gaze trace analysis
    Gaze {
        #[command(subcommand)]
        command: GazeCmd,
    },
}

#[derive(Subcommand)]
enum GazeCmd {
    /// Total movement and fixations for one trace
    Analyze {
        #[arg(long)]
        trace: PathBuf,
        /// Overrides the viewing distance in the trace header.
        #[arg(long)]
        distance_mm: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_DISPERSION_DEG)]
        dispersion: f64,
        #[arg(long, default_value_t = DEFAULT_MIN_FIXATION_MS)]
        min_duration: u64,
        /// Writes fixations as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Paired t-test of total movement across same-named trace files in two directories
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Use movement per second instead of the per-sample sum.
        #[arg(long)]
        rate: bool,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_config(path: Option<&Path>) -> Result<EngineConfig> {
    match path {
        Some(p) => Ok(EngineConfig::from_json(&read(p)?).with_context(|| format!("config {}", p.display()))?),
        None => Ok(EngineConfig::default()),
    }
}

fn load_doc(path: Option<&Path>) -> Result<Document> {
    match path {
        Some(p) => Ok(Document::deserialize(&read(p)?).with_context(|| format!("document {}", p.display()))?),
        None => Ok(Document::default()),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Cmd::Serve { listen, config, doc } => {
            let session = Session::new(load_config(config.as_deref())?, load_doc(doc.as_deref())?)?;
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(spieboard::server::serve(listen, session))?;
        }
        Cmd::Replay { trace, config, doc, out } => {
            let trace = parse_trace(&read(&trace)?).with_context(|| format!("trace {}", trace.display()))?;
            let result = replay(&trace, &load_config(config.as_deref())?, load_doc(doc.as_deref())?)?;
            for d in &result.diagnostics {
                log::warn!("{d}");
            }
            match out {
                Some(p) => fs::write(&p, format!("{}\n", result.document))?,
                None => println!("{}", result.document),
            }
        }
        Cmd::Validate { trace } => {
            let trace = parse_trace(&read(&trace)?).with_context(|| format!("trace {}", trace.display()))?;
            let violations = trace.validate();
            if violations.is_empty() {
                println!("ok: {} events", trace.events.len());
            } else {
                for v in &violations {
                    println!("{v}");
                }
                return Ok(ExitCode::FAILURE);
            }
        }
        Cmd::SimulateExp1 { items, sigma, lapse, trials, seed, csv } => {
            let model = NoiseModel::new(sigma, lapse)?;
            if trials == 0 {
                bail!("--trials must be at least 1");
            }
            let mut rows = Vec::new();
            for &n in &items {
                if n < 2 {
                    bail!("item counts must be at least 2");
                }
                let sim = simulate_exp1(&model, n, trials, seed);
                rows.push((n, sim, analytic_success(&model, n)));
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["n_items", "trials", "successes", "simulated_rate", "analytic_rate"])?;
            for (n, sim, analytic) in &rows {
                w.write_record([
                    n.to_string(),
                    sim.trials.to_string(),
                    sim.successes.to_string(),
                    format!("{:.6}", sim.rate()),
                    format!("{analytic:.6}"),
                ])?;
            }
            let text = String::from_utf8(w.into_inner()?)?;
            match csv {
                Some(p) => fs::write(p, text)?,
                None => print!("{text}"),
            }
        }
        Cmd::FitExp1 { observed, fix_lapse } => {
            let mut reader = csv::Reader::from_path(&observed).with_context(|| format!("reading {}", observed.display()))?;
            let mut obs = Vec::new();
            for row in reader.deserialize::<(usize, f64)>() {
                let (n_items, rate) = row?;
                obs.push(Observation { n_items, rate });
            }
            let fit = fit_noise_params(&obs, &FitOptions { fixed_lapse: fix_lapse, ..FitOptions::default() })?;
            for w in &fit.warnings {
                log::warn!("{w}");
            }
            println!("sigma_deg,{:.4}", fit.model.sigma);
            println!("lapse,{:.5}", fit.model.lapse);
            println!("sse,{:.3e}", fit.sse);
            println!("n_items,observed,fitted,residual");
            for r in &fit.residuals {
                println!("{},{:.4},{:.4},{:+.4}", r.n_items, r.observed, r.fitted, r.error());
            }
        }
        Cmd::Gaze { command: GazeCmd::Analyze { trace, distance_mm, dispersion, min_duration, csv } } => {
            let mut t = parse_gaze_trace(&read(&trace)?).with_context(|| format!("gaze trace {}", trace.display()))?;
            if let Some(d) = distance_mm {
                if !(d > 0.0) {
                    bail!("--distance-mm must be positive");
                }
                t.viewing_distance_mm = d;
            }
            if t.samples.len() < 2 {
                log::warn!("fewer than two samples; movement is zero");
            }
            let m = gaze::analyze(&t, dispersion, min_duration);
            println!("samples,{}", t.samples.len());
            println!("total_movement_deg,{:.4}", m.total_movement);
            println!("movement_rate_deg_per_s,{:.4}", m.movement_rate);
            println!("fixations,{}", m.fixations.len());
            if let Some(p) = csv {
                let mut w = csv::Writer::from_path(&p)?;
                w.write_record(["index", "start_ms", "duration_ms", "x", "y"])?;
                for (i, f) in m.fixations.iter().enumerate() {
                    w.write_record([
                        i.to_string(),
                        f.start.to_string(),
                        f.duration.to_string(),
                        format!("{:.2}", f.centroid.x),
                        format!("{:.2}", f.centroid.y),
                    ])?;
                }
                w.flush()?;
            }
        }
        Cmd::Gaze { command: GazeCmd::Compare { a, b, rate } } => {
            let metric = |p: &Path| -> Result<f64> {
                let t = parse_gaze_trace(&read(p)?).with_context(|| format!("gaze trace {}", p.display()))?;
                Ok(if rate { gaze::gaze_movement_rate(&t) } else { gaze::total_gaze_movement(&t) })
            };
            let mut names: Vec<_> = fs::read_dir(&a)?
                .filter_map(|e| e.ok())
                .filter(|e| e.path().is_file())
                .map(|e| e.file_name())
                .filter(|n| b.join(n).is_file())
                .collect();
            names.sort();
            if names.is_empty() {
                bail!("no matching trace files in {} and {}", a.display(), b.display());
            }
            println!("subject,a,b");
            let (mut xs, mut ys) = (Vec::new(), Vec::new());
            for n in &names {
                let (x, y) = (metric(&a.join(n))?, metric(&b.join(n))?);
                println!("{},{x:.4},{y:.4}", n.to_string_lossy());
                xs.push(x);
                ys.push(y);
            }
            let r = paired_t_test(&xs, &ys)?;
            println!("t({})={:.4}, p={:.3e}", r.df, r.t, r.p);
        }
    }
    Ok(ExitCode::SUCCESS)
}
