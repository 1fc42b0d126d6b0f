//! Closed-form inverse kinematics.
//!
//! A planar tip pose fixes three quantities while the arm has five joints, so
//! θ2 and θ3 are chosen first (see [`redundancy_select`]). With them fixed the
//! problem reduces to a two-link (L4, L5) subchain reaching the wrist point
//! behind the electrode, solved with the law of cosines. θ6 then closes the
//! joint sum to the requested electrode direction.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;
use thiserror::Error;

use crate::angle;
use crate::kinematics::PlanarPose;
use crate::model::{PipeSpec, RedundancyStrategy, RobotModel, SimConfig};
use crate::pathplan::check_collision;
use crate::NUM_JOINTS;

/// |sin θ5| below which the (L4, L5) subchain is reported as near-singular.
pub const NEAR_SINGULAR_S5: f64 = 1e-6;

/// Revolute joint angles θ2..θ6 (rad). Also used for rate and acceleration
/// vectors of the same shape.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JointVector(pub [f64; NUM_JOINTS]);

impl JointVector {
    pub fn zeros() -> Self {
        Self([0.0; NUM_JOINTS])
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.0.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn map(&self, f: impl FnMut(f64) -> f64) -> Self {
        Self(self.0.map(f))
    }
}

impl From<[f64; NUM_JOINTS]> for JointVector {
    fn from(v: [f64; NUM_JOINTS]) -> Self {
        Self(v)
    }
}

impl Index<usize> for JointVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for JointVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl fmt::Display for JointVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "theta{}={v:.12}", i + 2)?;
        }
        Ok(())
    }
}

/// Sign choice for sin θ5; fixed for a whole sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    ElbowUp,
    ElbowDown,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::ElbowUp => 1.0,
            Branch::ElbowDown => -1.0,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::ElbowUp => "elbow_up",
            Branch::ElbowDown => "elbow_down",
        })
    }
}

impl FromStr for Branch {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "elbow_up" => Ok(Branch::ElbowUp),
            "elbow_down" => Ok(Branch::ElbowDown),
            other => Err(format!("expected \"elbow_up\" or \"elbow_down\", got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IkError {
    #[error("target unreachable: cos(theta5) = {cos_theta5:.6} is outside [-1, 1]")]
    Unreachable { cos_theta5: f64 },
    #[error("no reachable, collision-free (theta2, theta3) on the search grid")]
    NoFeasibleRedundancy,
}

/// Intermediate quantities of one solve, exposed for inspection and tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IkIntermediates {
    /// Wrist point relative to joint 4, x component.
    pub a: f64,
    /// Wrist point relative to joint 4, z component.
    pub b: f64,
    /// a² + b².
    pub k: f64,
    pub c5: f64,
    pub s5: f64,
    pub s234: f64,
    pub c234: f64,
    /// Required θ2 + … + θ6 (the tip orientation).
    pub theta_sum: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IkSolution {
    pub joints: JointVector,
    pub intermediates: IkIntermediates,
    /// The (L4, L5) subchain is (almost) fully stretched or folded.
    pub near_singular: bool,
}

pub fn solve_ik(
    model: &RobotModel,
    target: &PlanarPose,
    theta2: f64,
    theta3: f64,
    branch: Branch,
    reach_eps: f64,
) -> Result<IkSolution, IkError> {
    let [l1, l2, l3, l4, l5, l6] = model.lengths;
    let theta_sum = target.phi;
    let (s_sum, c_sum) = theta_sum.sin_cos();
    let (s2, c2) = theta2.sin_cos();
    let (s23, c23) = (theta2 + theta3).sin_cos();

    let a = target.x - l6 * c_sum - l3 * c23 - l2 * c2;
    let b = target.z - l1 - l6 * s_sum - l3 * s23 - l2 * s2;
    let k = a * a + b * b;

    let mut c5 = (k - l4 * l4 - l5 * l5) / (2.0 * l4 * l5);
    if !c5.is_finite() || c5.abs() > 1.0 + reach_eps {
        return Err(IkError::Unreachable { cos_theta5: c5 });
    }
    c5 = c5.clamp(-1.0, 1.0);
    let s5 = branch.sign() * (1.0 - c5 * c5).sqrt();
    let theta5 = s5.atan2(c5);

    let theta234 = b.atan2(a) - (l5 * s5).atan2(l4 + l5 * c5);
    let (s234, c234) = theta234.sin_cos();
    let theta4 = theta234 - theta3 - theta2;
    let theta6 = theta_sum - theta5 - theta234;

    let joints = JointVector([theta2, theta3, theta4, theta5, theta6].map(angle::normalize));
    Ok(IkSolution {
        joints,
        intermediates: IkIntermediates { a, b, k, c5, s5, s234, c234, theta_sum },
        near_singular: s5.abs() < NEAR_SINGULAR_S5,
    })
}

/// Chooses (θ2, θ3, branch) for one target.
///
/// `Hold` returns the configured values untouched. `GridSearch` keeps the
/// grid points whose solution exists and clears the pipe, then minimises the
/// summed joint distance to `previous` (or, for the first sample, the distance
/// of (θ2, θ3) to the held values). Equal costs resolve to the smallest
/// (θ2, θ3) in lexicographic order.
pub fn redundancy_select(
    model: &RobotModel,
    target: &PlanarPose,
    pipe: &PipeSpec,
    previous: Option<&JointVector>,
    cfg: &SimConfig,
) -> Result<(f64, f64, Branch), IkError> {
    if cfg.redundancy == RedundancyStrategy::Hold {
        return Ok((cfg.theta2_held, cfg.theta3_held, cfg.branch));
    }
    let tol = &cfg.tolerances;
    let cost = |sol: &IkSolution| -> f64 {
        match previous {
            Some(prev) => sol.joints.iter().zip(prev.iter()).map(|(a, b)| angle::diff(*a, *b).abs()).sum(),
            None => {
                angle::diff(sol.joints[0], cfg.theta2_held).abs() + angle::diff(sol.joints[1], cfg.theta3_held).abs()
            }
        }
    };

    let mut best: Option<(f64, f64, f64)> = None;
    for &t2 in &cfg.grid.theta2_values() {
        for &t3 in &cfg.grid.theta3_values() {
            let Ok(sol) = solve_ik(model, target, t2, t3, cfg.branch, tol.reach_eps) else {
                continue;
            };
            if check_collision(model, &sol.joints, pipe, tol.penetration_eps) {
                continue;
            }
            let c = cost(&sol);
            if best.is_none_or(|(bc, _, _)| c < bc) {
                best = Some((c, t2, t3));
            }
        }
    }
    best.map(|(_, t2, t3)| (t2, t3, cfg.branch)).ok_or(IkError::NoFeasibleRedundancy)
}
