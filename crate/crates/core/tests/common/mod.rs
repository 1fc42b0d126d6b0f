//! Independent oracles shared by the integration tests. None of these go
//! through the Newton–Euler recursion or the analytic Jacobian.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::f64::consts::PI;
use weldarm::dynamics::total_energy;
use weldarm::kinematics::{forward_kinematics, joint_positions};
use weldarm::{JointVector, PipeSpec, RobotModel};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_q(rng: &mut StdRng) -> JointVector {
    JointVector(std::array::from_fn(|_| rng.random_range(-PI..PI)))
}

pub fn random_vec(rng: &mut StdRng, scale: f64) -> JointVector {
    JointVector(std::array::from_fn(|_| rng.random_range(-scale..scale)))
}

fn add(a: &JointVector, b: &JointVector, s: f64) -> JointVector {
    JointVector(std::array::from_fn(|i| a[i] + s * b[i]))
}

fn unit(j: usize) -> JointVector {
    let mut e = JointVector::zeros();
    e[j] = 1.0;
    e
}

/// Joint torques from the Euler–Lagrange equations,
/// d/dt(∂T/∂q̇) − ∂T/∂q + ∂V/∂q, with every derivative taken by central
/// differences of `total_energy`.
pub fn lagrangian_torques(model: &RobotModel, q: &JointVector, qd: &JointVector, qdd: &JointVector) -> JointVector {
    const H: f64 = 1e-6;
    // T is quadratic in q̇, so a wide step is exact up to rounding.
    const HV: f64 = 1e-2;
    let kinetic = |q: &JointVector, qd: &JointVector| total_energy(model, q, qd).kinetic;
    let potential = |q: &JointVector| total_energy(model, q, &JointVector::zeros()).potential;
    let momentum = |q: &JointVector, qd: &JointVector, j: usize| {
        (kinetic(q, &add(qd, &unit(j), HV)) - kinetic(q, &add(qd, &unit(j), -HV))) / (2.0 * HV)
    };
    let mut tau = JointVector::zeros();
    for j in 0..5 {
        let (q_f, qd_f) = (add(q, qd, H), add(qd, qdd, H));
        let (q_b, qd_b) = (add(q, qd, -H), add(qd, qdd, -H));
        let dp_dt = (momentum(&q_f, &qd_f, j) - momentum(&q_b, &qd_b, j)) / (2.0 * H);
        let dt_dq = (kinetic(&add(q, &unit(j), H), qd) - kinetic(&add(q, &unit(j), -H), qd)) / (2.0 * H);
        let dv_dq = (potential(&add(q, &unit(j), H)) - potential(&add(q, &unit(j), -H))) / (2.0 * H);
        tau[j] = dp_dt - dt_dq + dv_dq;
    }
    tau
}

/// Collision by dense sampling of each link: 10⁴ points per segment.
pub fn sampled_collision(model: &RobotModel, q: &JointVector, pipe: &PipeSpec, penetration_eps: f64) -> bool {
    const POINTS: usize = 10_000;
    let pts = joint_positions(model, q);
    pts.windows(2).any(|seg| {
        (0..POINTS).any(|s| {
            let u = s as f64 / (POINTS - 1) as f64;
            let x = seg[0][0] + u * (seg[1][0] - seg[0][0]);
            let z = seg[0][1] + u * (seg[1][1] - seg[0][1]);
            (x - pipe.center_x).hypot(z - pipe.center_z) < pipe.radius - penetration_eps
        })
    })
}

/// Tip (x, z, φ) by central differences of forward kinematics in joint `j`.
pub fn fd_tip_column(model: &RobotModel, q: &JointVector, j: usize, h: f64) -> [f64; 3] {
    let f = forward_kinematics(model, &add(q, &unit(j), h)).tip;
    let b = forward_kinematics(model, &add(q, &unit(j), -h)).tip;
    let dphi = weldarm::angle::diff(f.phi, b.phi);
    [(f.x - b.x) / (2.0 * h), (f.z - b.z) / (2.0 * h), dphi / (2.0 * h)]
}

pub fn max_abs(v: &JointVector) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}
