//! Weld path generation, arm/pipe collision checks and trajectory planning.
//!
//! The weld angle ψ is measured about the pipe centre from base +x and sweeps
//! counterclockwise in the (x, z) plane. The electrode always points at the
//! pipe centre, so the tip orientation is φ = ψ + π.

use std::f64::consts::{PI, TAU};
use thiserror::Error;

use crate::angle;
use crate::ik::{redundancy_select, solve_ik, IkError, JointVector};
use crate::kinematics::{joint_positions, PlanarPose};
use crate::model::{CollisionPolicy, PipeSpec, RobotModel, SimConfig};
use crate::NUM_JOINTS;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeldPathSample {
    pub t: f64,
    /// Weld angle about the pipe centre, in [0, 2π).
    pub psi: f64,
    pub target: PlanarPose,
}

/// Tip target at weld angle `psi`.
pub fn weld_target(pipe: &PipeSpec, psi: f64) -> PlanarPose {
    let r = pipe.path_radius();
    let (s, c) = psi.sin_cos();
    PlanarPose::new(pipe.center_x + r * c, pipe.center_z + r * s, psi + PI)
}

/// One revolution sampled uniformly in time and angle, endpoint excluded.
pub fn weld_path(pipe: &PipeSpec, cfg: &SimConfig) -> Vec<WeldPathSample> {
    let n = cfg.sample_count;
    (0..n)
        .map(|k| {
            let psi = TAU * k as f64 / n as f64;
            WeldPathSample { t: cfg.revolution_period * k as f64 / n as f64, psi, target: weld_target(pipe, psi) }
        })
        .collect()
}

/// Distance from `center` to the segment [p1, p2].
pub fn segment_distance(p1: [f64; 2], p2: [f64; 2], center: [f64; 2]) -> f64 {
    let d = [p2[0] - p1[0], p2[1] - p1[1]];
    let w = [center[0] - p1[0], center[1] - p1[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let s = if len2 > 0.0 { ((w[0] * d[0] + w[1] * d[1]) / len2).clamp(0.0, 1.0) } else { 0.0 };
    let e = [w[0] - s * d[0], w[1] - s * d[1]];
    e[0].hypot(e[1])
}

/// True when the segment reaches more than `penetration_eps` inside the
/// circle. Touching the surface is not a penetration.
pub fn segment_circle_intersects(p1: [f64; 2], p2: [f64; 2], center: [f64; 2], radius: f64, penetration_eps: f64) -> bool {
    segment_distance(p1, p2, center) < radius - penetration_eps
}

/// True when any of the five moving links penetrates the pipe.
pub fn check_collision(model: &RobotModel, q: &JointVector, pipe: &PipeSpec, penetration_eps: f64) -> bool {
    let pts = joint_positions(model, q);
    pts.windows(2)
        .any(|seg| segment_circle_intersects(seg[0], seg[1], pipe.center(), pipe.radius, penetration_eps))
}

/// Smallest gap between links 2..5 and the pipe surface. Link 6 carries the
/// electrode and touches the surface by design, so it is left out.
pub fn clearance(model: &RobotModel, q: &JointVector, pipe: &PipeSpec) -> f64 {
    let pts = joint_positions(model, q);
    pts[..5]
        .windows(2)
        .map(|seg| segment_distance(seg[0], seg[1], pipe.center()) - pipe.radius)
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("sample {sample}: target unreachable (cos(theta5) = {cos_theta5:.6})")]
    Unreachable { sample: usize, cos_theta5: f64 },
    #[error("sample {sample}: no reachable, collision-free (theta2, theta3) on the search grid")]
    NoFeasibleRedundancy { sample: usize },
    #[error("sample {sample}: arm penetrates the pipe")]
    CollisionAtSample { sample: usize },
    #[error("sample {sample}: theta{joint} jumps by {step:.4} rad")]
    ContinuityViolation { joint: usize, sample: usize, step: f64 },
}

impl PlanError {
    pub fn sample(&self) -> usize {
        match *self {
            PlanError::Unreachable { sample, .. }
            | PlanError::NoFeasibleRedundancy { sample }
            | PlanError::CollisionAtSample { sample }
            | PlanError::ContinuityViolation { sample, .. } => sample,
        }
    }

    fn from_ik(e: IkError, sample: usize) -> Self {
        match e {
            IkError::Unreachable { cos_theta5 } => PlanError::Unreachable { sample, cos_theta5 },
            IkError::NoFeasibleRedundancy => PlanError::NoFeasibleRedundancy { sample },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannedSample {
    pub path: WeldPathSample,
    /// Unwrapped joint angles: consecutive samples differ by less than π.
    pub q: JointVector,
    pub near_singular: bool,
    /// A link penetrates the pipe (only possible under `CollisionPolicy::Report`).
    pub collides: bool,
}

/// Plans one full revolution in joint space.
///
/// Each sample is solved in order, seeded with the previous solution, and
/// must be collision-free unless the policy is `Report`. The step between
/// consecutive samples, including the closing step from the last sample back
/// to the first, may not exceed `continuity_max_step` on any joint.
pub fn plan_trajectory(model: &RobotModel, pipe: &PipeSpec, cfg: &SimConfig) -> Result<Vec<PlannedSample>, PlanError> {
    let tol = &cfg.tolerances;
    let path = weld_path(pipe, cfg);
    let mut planned: Vec<PlannedSample> = Vec::with_capacity(path.len());

    for (k, sample) in path.into_iter().enumerate() {
        let previous = planned.last().map(|p| p.q);
        let (t2, t3, branch) = redundancy_select(model, &sample.target, pipe, previous.as_ref(), cfg)
            .map_err(|e| PlanError::from_ik(e, k))?;
        let sol = solve_ik(model, &sample.target, t2, t3, branch, tol.reach_eps).map_err(|e| PlanError::from_ik(e, k))?;
        let collides = check_collision(model, &sol.joints, pipe, tol.penetration_eps);
        if collides && cfg.collision == CollisionPolicy::Enforce {
            return Err(PlanError::CollisionAtSample { sample: k });
        }
        let mut q = sol.joints;
        if let Some(prev) = previous {
            for j in 0..NUM_JOINTS {
                q[j] = angle::unwrap_near(q[j], prev[j]);
            }
            check_step(&prev, &q, tol.continuity_max_step, k)?;
        }
        planned.push(PlannedSample { path: sample, q, near_singular: sol.near_singular, collides });
    }

    if let (Some(first), Some(last)) = (planned.first(), planned.last()) {
        let mut wrapped = first.q;
        for j in 0..NUM_JOINTS {
            wrapped[j] = angle::unwrap_near(first.q[j], last.q[j]);
        }
        check_step(&last.q, &wrapped, tol.continuity_max_step, planned.len())?;
    }
    Ok(planned)
}

fn check_step(prev: &JointVector, next: &JointVector, max_step: f64, sample: usize) -> Result<(), PlanError> {
    for j in 0..NUM_JOINTS {
        let step = (next[j] - prev[j]).abs();
        if step > max_step {
            return Err(PlanError::ContinuityViolation { joint: j + 2, sample, step });
        }
    }
    Ok(())
}
