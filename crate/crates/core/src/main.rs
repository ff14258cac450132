use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dandelion_core::cli::{
    calibrate_steering, default_azimuth_grid, expand_glob, run_batch, run_episode, summarize, world_config, CliError,
    EpisodeReport, Outcome, RunOverrides, Scenario,
};
use dandelion_core::controller::SteeringPolicy;
use dandelion_core::gait::{write_calibration, write_gait_table};
use dandelion_core::geometry::GammaFormula;
use dandelion_core::simulator::{write_trajectory_log, WorldConfig, WorldState};

#[derive(Parser)]
#[command(name = "dandelion", about = "Dandelion-picking hexapod simulator", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum Steering {
    Calibrated,
    ArcSolver,
}

#[derive(Clone, Copy, ValueEnum)]
enum Gamma {
    Paper,
    Standard,
}

#[derive(clap::Args)]
struct RunFlags {
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Stride noise.
    #[arg(long, value_enum)]
    noise: Option<Switch>,
    #[arg(long, value_enum)]
    steering: Option<Steering>,
    /// Elevation formula for the reported cylindrical target.
    #[arg(long, value_enum, default_value = "paper")]
    gamma: Gamma,
}

impl RunFlags {
    fn overrides(&self) -> RunOverrides {
        RunOverrides {
            seed: self.seed,
            noise: self.noise.map(|n| matches!(n, Switch::On)),
            steering: self.steering.map(|s| match s {
                Steering::Calibrated => SteeringPolicy::Calibrated,
                Steering::ArcSolver => SteeringPolicy::ArcSolver,
            }),
            gamma: match self.gamma {
                Gamma::Paper => GammaFormula::Paper,
                Gamma::Standard => GammaFormula::Standard,
            },
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one episode.
    Run {
        scenario: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
        /// Trajectory log path [default: <scenario>.trajectory.csv]
        #[arg(long)]
        log: Option<PathBuf>,
        /// JSON report path [default: <scenario>.report.json]
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run several seeds of every scenario matching a glob.
    Batch {
        pattern: String,
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[command(flatten)]
        flags: RunFlags,
        /// JSON report path.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Regenerate the azimuth-to-turn-value steering table.
    Calibrate {
        #[arg(long, default_value_t = 1.5)]
        distance: f64,
        /// Comma-separated azimuths in degrees [default: -27..27 by 3]
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        azimuths: Option<Vec<f64>>,
        #[arg(long, default_value = "steering_calibration.csv")]
        out: PathBuf,
    },
    /// Write the swoop gait table.
    Swoop {
        #[arg(long, default_value = "swoop.csv")]
        out: PathBuf,
    },
    /// Render the scenario's first camera frame as PPM plus a depth dump.
    Render {
        scenario: PathBuf,
        #[arg(long, default_value = "frame")]
        out: PathBuf,
    },
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    PathBuf::from(format!("{stem}{suffix}"))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn print_report(r: &EpisodeReport) {
    println!("outcome: {:?}", r.outcome);
    println!("final_mode: {}", r.final_mode);
    match r.cut_mode {
        Some(m) => println!("cut_mode: {m}"),
        None => println!("cut_mode: none"),
    }
    match r.time_to_pick {
        Some(t) => println!("time_to_pick_s: {t:.2}"),
        None => println!("time_to_pick_s: none"),
    }
    println!("sim_time_s: {:.2}", r.sim_time);
    println!("path_length_m: {:.4}", r.path_length);
    println!("overshoots: {}", r.overshoot_count);
    println!("backoffs: {}", r.backoffs);
    println!("attempts: {}", r.attempts);
    let p = r.final_pose;
    println!("final_pose: x={:.4} y={:.4} heading={:.2}", p.x, p.y, p.heading);
    if let Some(c) = r.initial_target {
        println!("initial_target: r={:.4} z={:.4} theta={:.2}", c.r, c.z, c.theta);
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Cmd::Run { scenario, flags, log, report } => {
            let s = Scenario::load(&scenario)?;
            let opts = flags.overrides().options_for(&s);
            let (rep, traj) = run_episode(&s, &opts)?;
            let log_path = log.unwrap_or_else(|| with_suffix(&scenario, ".trajectory.csv"));
            write_trajectory_log(&traj, BufWriter::new(File::create(&log_path)?))?;
            let report_path = report.unwrap_or_else(|| with_suffix(&scenario, ".report.json"));
            write_json(&report_path, &rep)?;
            print_report(&rep);
            Ok(if rep.outcome == Outcome::Picked { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Cmd::Batch { pattern, seeds, flags, report } => {
            let mut scenarios = Vec::new();
            for path in expand_glob(&pattern)? {
                scenarios.push((path.display().to_string(), Scenario::load(&path)?));
            }
            let items = run_batch(&scenarios, seeds, &flags.overrides());
            let summary = summarize(&items);
            for i in &items {
                match (&i.report, &i.error) {
                    (Some(r), _) => println!(
                        "{} seed={} outcome={:?} time={:.2} path={:.3}",
                        i.scenario, i.seed, r.outcome, r.sim_time, r.path_length
                    ),
                    (None, Some(e)) => println!("{} seed={} error={e}", i.scenario, i.seed),
                    _ => {}
                }
            }
            println!("episodes: {}", summary.episodes);
            println!("errors: {}", summary.errors);
            println!("pick_rate: {:.4}", summary.pick_rate);
            match summary.mean_time_to_pick {
                Some(t) => println!("mean_time_to_pick_s: {t:.2}"),
                None => println!("mean_time_to_pick_s: none"),
            }
            match summary.mean_path_length {
                Some(l) => println!("mean_path_length_m: {l:.4}"),
                None => println!("mean_path_length_m: none"),
            }
            if let Some(path) = report {
                write_json(&path, &serde_json::json!({ "summary": summary, "episodes": items }))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Calibrate { distance, azimuths, out } => {
            let grid = azimuths.unwrap_or_else(default_azimuth_grid);
            let stop = dandelion_core::controller::ControllerConfig::default().stop_distance;
            let (table, points) = calibrate_steering(distance, &grid, &WorldConfig::default(), stop)?;
            for p in &points {
                let note = if p.overshoot_found { "" } else { "  (no overshoot found, clamped)" };
                println!("{:6.1} -> {:.4}{note}", p.azimuth, p.turn_value);
            }
            write_calibration(&table, BufWriter::new(File::create(&out)?))?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Swoop { out } => {
            let table = WorldConfig::default().swoop_table();
            write_gait_table(&table, BufWriter::new(File::create(&out)?))?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Render { scenario, out } => {
            let s = Scenario::load(&scenario)?;
            let world = WorldState::new(world_config(&s, false), s.robot.chassis(), s.dandelions.clone(), s.seed)?;
            let frame = world.render();
            let ppm = out.with_extension("ppm");
            let depth = out.with_extension("depth");
            frame.write_ppm(BufWriter::new(File::create(&ppm)?)).map_err(|e| CliError::Io(e.to_string()))?;
            frame.write_depth(BufWriter::new(File::create(&depth)?)).map_err(|e| CliError::Io(e.to_string()))?;
            println!("wrote {} and {}", ppm.display(), depth.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
