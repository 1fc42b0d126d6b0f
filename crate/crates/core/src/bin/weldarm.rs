use clap::{Parser, Subcommand};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use weldarm::ik::{solve_ik, Branch};
use weldarm::kinematics::PlanarPose;
use weldarm::model::{parse_config, Config};
use weldarm::pathplan::{check_collision, clearance, plan_trajectory};
use weldarm::sim::{peak_values, run_simulation, write_outputs, SimError};

const EXIT_CONFIG: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "weldarm", version, about = "Pipe-welding arm kinematics, planning and inverse dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one weld revolution and write CSV, SVG plots and a summary.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override sim.sample_count.
        #[arg(long)]
        samples: Option<usize>,
        /// Override sim.revolution_period_s (seconds).
        #[arg(long)]
        period: Option<f64>,
        /// Skip the SVG plots.
        #[arg(long)]
        no_plots: bool,
    },
    /// Validate a config and report whether the weld can be planned.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
    /// Solve inverse kinematics for a single tip pose (angles in degrees).
    Ik {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, allow_hyphen_values = true)]
        theta2: f64,
        #[arg(long, allow_hyphen_values = true)]
        theta3: f64,
        #[arg(long, default_value = "elbow_up")]
        branch: Branch,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl ToString) -> Self {
        Self { code, message: message.to_string() }
    }
}

fn load(path: &Path) -> Result<Config, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))?;
    let cfg = parse_config(&text).map_err(|e| Failure::new(EXIT_CONFIG, format!("{}: {e}", path.display())))?;
    for w in cfg.robot.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(cfg)
}

fn simulate(config: &Path, out: &Path, samples: Option<usize>, period: Option<f64>, no_plots: bool) -> Result<(), Failure> {
    let mut cfg = load(config)?;
    if let Some(n) = samples {
        cfg.sim.sample_count = n;
    }
    if let Some(p) = period {
        cfg.sim.revolution_period = p;
    }
    cfg.sim.validate().map_err(|e| Failure::new(EXIT_CONFIG, e))?;

    let trajectory = run_simulation(&cfg.robot, &cfg.pipe, &cfg.sim).map_err(|e| match e {
        SimError::Io { .. } => Failure::new(EXIT_IO, e),
        _ => Failure::new(EXIT_INFEASIBLE, e),
    })?;
    let files = write_outputs(&trajectory, out, !no_plots).map_err(|e| Failure::new(EXIT_IO, e))?;

    println!("samples: {}", trajectory.len());
    println!("csv: {}", files.csv.display());
    println!("summary: {}", files.summary.display());
    println!("plots: {}", files.plots.len());
    for (joint, peaks) in peak_values(&trajectory) {
        println!("{joint}: peak |tau| = {:.6} N m, peak |dtheta| = {:.6} rad/s", peaks["tau"], peaks["dtheta"]);
    }
    Ok(())
}

fn check(config: &Path) -> Result<(), Failure> {
    let cfg = load(config)?;
    println!("config ok: {}", config.display());
    println!("reach: {:.4} m from joint 2, plinth {:.4} m", cfg.robot.reach(), cfg.robot.plinth_height());
    let plan = plan_trajectory(&cfg.robot, &cfg.pipe, &cfg.sim).map_err(|e| Failure::new(EXIT_INFEASIBLE, format!("infeasible: {e}")))?;

    let mut max_step: f64 = 0.0;
    for pair in plan.windows(2) {
        for j in 0..weldarm::NUM_JOINTS {
            max_step = max_step.max((pair[1].q[j] - pair[0].q[j]).abs());
        }
    }
    let min_clearance = plan.iter().map(|p| clearance(&cfg.robot, &p.q, &cfg.pipe)).fold(f64::INFINITY, f64::min);
    let penetrating = plan.iter().filter(|p| p.collides).count();
    let singular = plan.iter().filter(|p| p.near_singular).count();
    println!("planned samples: {}", plan.len());
    println!("max joint step: {max_step:.6} rad");
    println!("min link clearance: {min_clearance:.6} m");
    println!("near-singular samples: {singular}");
    println!("penetrating samples: {penetrating}");
    if penetrating > 0 {
        eprintln!("warning: {penetrating} samples penetrate the pipe (collision policy: report)");
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn ik(config: &Path, x: f64, z: f64, phi: f64, theta2: f64, theta3: f64, branch: Branch) -> Result<(), Failure> {
    let cfg = load(config)?;
    let target = PlanarPose::new(x, z, phi.to_radians());
    let sol = solve_ik(&cfg.robot, &target, theta2.to_radians(), theta3.to_radians(), branch, cfg.sim.tolerances.reach_eps)
        .map_err(|e| Failure::new(EXIT_INFEASIBLE, e))?;
    println!("{}", sol.joints);
    let degrees: Vec<String> = sol.joints.iter().map(|v| format!("{:.6}", v.to_degrees())).collect();
    println!("degrees: {}", degrees.join(" "));
    if sol.near_singular {
        println!("note: near-singular (L4, L5) subchain");
    }
    if check_collision(&cfg.robot, &sol.joints, &cfg.pipe, cfg.sim.tolerances.penetration_eps) {
        println!("note: pose penetrates the pipe");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate { config, out, samples, period, no_plots } => simulate(&config, &out, samples, period, no_plots),
        Command::Check { config } => check(&config),
        Command::Ik { config, x, z, phi, theta2, theta3, branch } => ik(&config, x, z, phi, theta2, theta3, branch),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
