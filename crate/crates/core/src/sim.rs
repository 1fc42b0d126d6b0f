//! Batch simulation of one weld revolution and its output files.

use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use thiserror::Error;

use crate::angle;
use crate::dynamics::inverse_dynamics;
use crate::ik::JointVector;
use crate::model::{PipeSpec, RobotModel, SimConfig};
use crate::pathplan::{plan_trajectory, PlanError};
use crate::plot::{line_plot_svg, Series};
use crate::NUM_JOINTS;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("need at least 4 samples to differentiate, got {0}")]
    TooFewSamples(usize),
    #[error("nothing to write: trajectory is empty")]
    EmptyTrajectory,
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("rendering {name}: {message}")]
    Plot { name: String, message: String },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> SimError + '_ {
    move |source| SimError::Io { path: path.to_path_buf(), source }
}

/// One row of the simulation output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub psi: f64,
    pub q: JointVector,
    pub qdot: JointVector,
    pub qddot: JointVector,
    /// Joint reaction force along base x.
    pub fx: JointVector,
    /// Joint reaction force along base z.
    pub fz: JointVector,
    pub tau: JointVector,
}

// Consecutive difference of an unwrapped angle sequence; the seam step of a
// closed loop may straddle a whole turn.
fn step(next: f64, cur: f64) -> f64 {
    let d = next - cur;
    if d.abs() <= PI {
        d
    } else {
        angle::diff(next, cur)
    }
}

/// Periodic central differences over one closed revolution sampled every `dt`.
pub fn differentiate_trajectory(q: &[JointVector], dt: f64) -> Result<(Vec<JointVector>, Vec<JointVector>), SimError> {
    let n = q.len();
    if n < 4 {
        return Err(SimError::TooFewSamples(n));
    }
    let mut qdot = vec![JointVector::zeros(); n];
    let mut qddot = vec![JointVector::zeros(); n];
    for k in 0..n {
        let prev = &q[(k + n - 1) % n];
        let next = &q[(k + 1) % n];
        for j in 0..NUM_JOINTS {
            let fwd = step(next[j], q[k][j]);
            let back = step(q[k][j], prev[j]);
            qdot[k][j] = (fwd + back) / (2.0 * dt);
            qddot[k][j] = (fwd - back) / (dt * dt);
        }
    }
    Ok((qdot, qddot))
}

/// Plans the weld, differentiates the joint trajectory and runs inverse
/// dynamics at every sample.
pub fn run_simulation(model: &RobotModel, pipe: &PipeSpec, cfg: &SimConfig) -> Result<Vec<TrajectorySample>, SimError> {
    let plan = plan_trajectory(model, pipe, cfg)?;
    let q: Vec<JointVector> = plan.iter().map(|p| p.q).collect();
    let (qdot, qddot) = differentiate_trajectory(&q, cfg.dt())?;

    Ok(plan
        .iter()
        .zip(qdot.iter().zip(&qddot))
        .map(|(p, (qd, qdd))| {
            let id = inverse_dynamics(model, &p.q, qd, qdd);
            TrajectorySample {
                t: p.path.t,
                psi: p.path.psi,
                q: p.q,
                qdot: *qd,
                qddot: *qdd,
                fx: JointVector(id.loads.map(|l| l.fx)),
                fz: JointVector(id.loads.map(|l| l.fz)),
                tau: JointVector(id.loads.map(|l| l.tau)),
            }
        })
        .collect())
}

/// The six plotted quantities per joint, in CSV column order.
pub const QUANTITIES: [Quantity; 6] = [
    Quantity { key: "theta", caption: "Angular position", unit: "rad" },
    Quantity { key: "dtheta", caption: "Angular velocity", unit: "rad/s" },
    Quantity { key: "ddtheta", caption: "Angular acceleration", unit: "rad/s^2" },
    Quantity { key: "fx", caption: "Horizontal actuator force", unit: "N" },
    Quantity { key: "fz", caption: "Vertical actuator force", unit: "N" },
    Quantity { key: "tau", caption: "Actuator torque", unit: "N m" },
];

#[derive(Debug, Clone, Copy)]
pub struct Quantity {
    pub key: &'static str,
    pub caption: &'static str,
    pub unit: &'static str,
}

impl TrajectorySample {
    pub fn quantity(&self, index: usize) -> &JointVector {
        match index {
            0 => &self.q,
            1 => &self.qdot,
            2 => &self.qddot,
            3 => &self.fx,
            4 => &self.fz,
            5 => &self.tau,
            _ => panic!("quantity index {index} out of range"),
        }
    }
}

/// `%.12e` as printf writes it: 12 fraction digits, signed two-digit exponent.
pub fn format_e12(v: f64) -> String {
    let s = format!("{v:.12e}");
    match s.split_once('e') {
        Some((mantissa, exp)) => {
            let (sign, digits) = match exp.strip_prefix('-') {
                Some(d) => ('-', d),
                None => ('+', exp),
            };
            format!("{mantissa}e{sign}{digits:0>2}")
        }
        None => s,
    }
}

pub fn csv_header() -> String {
    let mut cols = vec!["t".to_string(), "psi".to_string()];
    for q in QUANTITIES {
        cols.extend((2..2 + NUM_JOINTS).map(|j| format!("{}{j}", q.key)));
    }
    cols.join(",")
}

pub fn to_csv(samples: &[TrajectorySample]) -> String {
    let mut out = csv_header();
    out.push('\n');
    for s in samples {
        let mut row = vec![format_e12(s.t), format_e12(s.psi)];
        for k in 0..QUANTITIES.len() {
            row.extend(s.quantity(k).iter().map(|&v| format_e12(v)));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize)]
struct Summary {
    samples: usize,
    duration_s: f64,
    /// joint name → quantity → peak |value|
    peaks: BTreeMap<String, BTreeMap<String, f64>>,
}

/// Peak |value| per joint and quantity, keyed like the CSV columns.
pub fn peak_values(samples: &[TrajectorySample]) -> BTreeMap<String, BTreeMap<String, f64>> {
    let mut peaks = BTreeMap::new();
    for j in 0..NUM_JOINTS {
        let mut per = BTreeMap::new();
        for (k, q) in QUANTITIES.iter().enumerate() {
            let peak = samples.iter().map(|s| s.quantity(k)[j].abs()).fold(0.0, f64::max);
            per.insert(q.key.to_string(), peak);
        }
        peaks.insert(format!("joint{}", j + 2), per);
    }
    peaks
}

fn render_plots(samples: &[TrajectorySample]) -> Result<Vec<(String, String)>, SimError> {
    let ts: Vec<f64> = samples.iter().map(|s| s.t).collect();
    let mut files = Vec::with_capacity(NUM_JOINTS * QUANTITIES.len());
    for j in 0..NUM_JOINTS {
        for (k, q) in QUANTITIES.iter().enumerate() {
            let ys: Vec<f64> = samples.iter().map(|s| s.quantity(k)[j]).collect();
            let name = format!("{}_{}.svg", q.key, j + 2);
            let title = format!("{} of joint {} ({}{})", q.caption, j + 2, q.key, j + 2);
            let svg = line_plot_svg(&Series { title: &title, x_label: "t [s]", y_label: q.unit, xs: &ts, ys: &ys })
                .map_err(|message| SimError::Plot { name: name.clone(), message })?;
            files.push((name, svg));
        }
    }
    Ok(files)
}

/// Files produced by [`write_outputs`].
#[derive(Debug, Clone)]
pub struct OutputFiles {
    pub csv: PathBuf,
    pub summary: PathBuf,
    pub plots: Vec<PathBuf>,
}

/// Writes `trajectory.csv`, `summary.json` and (optionally) the per-joint SVG
/// plots into `out_dir`. Everything is rendered and written to a scratch
/// directory first and only moved into place once all files exist.
pub fn write_outputs(samples: &[TrajectorySample], out_dir: &Path, plots: bool) -> Result<OutputFiles, SimError> {
    if samples.is_empty() {
        return Err(SimError::EmptyTrajectory);
    }
    let mut files = vec![("trajectory.csv".to_string(), to_csv(samples))];
    let summary = Summary {
        samples: samples.len(),
        duration_s: samples.last().map_or(0.0, |s| s.t) + samples.get(1).map_or(0.0, |s| s.t - samples[0].t),
        peaks: peak_values(samples),
    };
    let mut summary_json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    summary_json.push('\n');
    files.push(("summary.json".to_string(), summary_json));
    if plots {
        files.extend(render_plots(samples)?);
    }

    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let scratch = tempfile::Builder::new().prefix(".weldarm-").tempdir_in(out_dir).map_err(io_err(out_dir))?;
    for (name, contents) in &files {
        let path = scratch.path().join(name);
        fs::write(&path, contents).map_err(io_err(&path))?;
    }
    let mut written = Vec::with_capacity(files.len());
    for (name, _) in &files {
        let dest = out_dir.join(name);
        fs::rename(scratch.path().join(name), &dest).map_err(io_err(&dest))?;
        written.push(dest);
    }
    scratch.close().map_err(io_err(out_dir))?;

    let csv = written.remove(0);
    let summary = written.remove(0);
    Ok(OutputFiles { csv, summary, plots: written })
}
