//! Recursive Newton–Euler inverse dynamics.
//!
//! The outward pass propagates angular velocity, angular acceleration and
//! linear acceleration from the base to the tool frame and forms the inertial
//! force and moment of each link at its centre of mass. The inward pass sums
//! those from the tool back to joint 2, giving the force and moment each joint
//! transmits and the actuator torque about its axis. Gravity enters as an
//! upward acceleration of the base.
//!
//! Quantities of frame i are expressed in frame i. The tool end carries no
//! external load.

use nalgebra::{Matrix3, Vector3};

use crate::ik::JointVector;
use crate::kinematics::{joint_positions, link_transform};
use crate::model::{JointKind, RobotModel};
use crate::NUM_JOINTS;

/// Motion and inertial load of one moving link, in its own frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LinkState {
    pub omega: Vector3<f64>,
    pub omega_dot: Vector3<f64>,
    /// Linear acceleration of the frame origin.
    pub vdot: Vector3<f64>,
    /// Linear acceleration of the centre of mass.
    pub vdot_c: Vector3<f64>,
    /// Net force on the link, m·v̇_c.
    pub force: Vector3<f64>,
    /// Net moment about the centre of mass, I·ω̇ + ω × I·ω.
    pub moment: Vector3<f64>,
}

/// What link i−1 exerts on link i through joint i.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JointLoad {
    /// Reaction force in the link frame.
    pub f: Vector3<f64>,
    /// Reaction moment in the link frame.
    pub n: Vector3<f64>,
    /// Actuator torque, the component of `n` along the joint axis.
    pub tau: f64,
    /// Reaction force along base x (horizontal).
    pub fx: f64,
    /// Reaction force along base z (vertical).
    pub fz: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InverseDynamics {
    pub links: [LinkState; NUM_JOINTS],
    pub loads: [JointLoad; NUM_JOINTS],
}

impl InverseDynamics {
    pub fn torques(&self) -> JointVector {
        JointVector(self.loads.map(|l| l.tau))
    }
}

struct FrameStep {
    rotation: Matrix3<f64>,
    offset: Vector3<f64>,
    /// Index into q for revolute rows.
    joint: Option<usize>,
}

pub fn inverse_dynamics(model: &RobotModel, q: &JointVector, qdot: &JointVector, qddot: &JointVector) -> InverseDynamics {
    let z = Vector3::z();

    let mut steps = Vec::with_capacity(model.rows.len());
    let mut joint = 0;
    for row in &model.rows {
        let index = match row.kind {
            JointKind::Revolute => {
                joint += 1;
                Some(joint - 1)
            }
            JointKind::Fixed => None,
        };
        let t = link_transform(row, index.map_or(0.0, |j| q[j]));
        steps.push(FrameStep { rotation: t.rotation, offset: t.translation, joint: index });
    }

    // Outward pass. Index i holds frame i; frame 0 is the base.
    let nframes = steps.len() + 1;
    let mut omega = vec![Vector3::zeros(); nframes];
    let mut omega_dot = vec![Vector3::zeros(); nframes];
    let mut vdot = vec![Vector3::zeros(); nframes];
    let mut base_rot = vec![Matrix3::identity(); nframes];
    vdot[0] = model.gravity * z;

    let mut links = [LinkState::default(); NUM_JOINTS];
    for (i, step) in steps.iter().enumerate() {
        let rt = step.rotation.transpose();
        let (rate, accel) = step.joint.map_or((0.0, 0.0), |j| (qdot[j], qddot[j]));
        let w_prev = omega[i];
        let wd_prev = omega_dot[i];
        let p = step.offset;

        let w_in = rt * w_prev;
        omega[i + 1] = w_in + rate * z;
        omega_dot[i + 1] = rt * wd_prev + w_in.cross(&(rate * z)) + accel * z;
        vdot[i + 1] = rt * (wd_prev.cross(&p) + w_prev.cross(&w_prev.cross(&p)) + vdot[i]);
        base_rot[i + 1] = base_rot[i] * step.rotation;

        if let Some(j) = step.joint {
            let body = &model.links[j];
            let (w, wd) = (omega[i + 1], omega_dot[i + 1]);
            let pc = body.com;
            let vdot_c = wd.cross(&pc) + w.cross(&w.cross(&pc)) + vdot[i + 1];
            let inertia = Matrix3::from_diagonal(&body.inertia_diag);
            links[j] = LinkState {
                omega: w,
                omega_dot: wd,
                vdot: vdot[i + 1],
                vdot_c,
                force: body.mass * vdot_c,
                moment: inertia * wd + w.cross(&(inertia * w)),
            };
        }
    }

    // Inward pass, tool frame back to the base. (f, n) is what frame i−1 exerts
    // on frame i; the tool end is free.
    let mut f_next = Vector3::zeros();
    let mut n_next = Vector3::zeros();
    let mut loads = [JointLoad::default(); NUM_JOINTS];
    for i in (0..steps.len()).rev() {
        // Transform from this frame to the next one outward.
        let (r_next, p_next) = match steps.get(i + 1) {
            Some(s) => (s.rotation, s.offset),
            None => (Matrix3::identity(), Vector3::zeros()),
        };
        let f_out = r_next * f_next;
        let (mut f, mut n) = (f_out, r_next * n_next + p_next.cross(&f_out));
        if let Some(j) = steps[i].joint {
            let ls = &links[j];
            f += ls.force;
            n += ls.moment + model.links[j].com.cross(&ls.force);
            let f_base = base_rot[i + 1] * f;
            loads[j] = JointLoad { f, n, tau: n.dot(&z), fx: f_base.x, fz: f_base.z };
        }
        f_next = f;
        n_next = n;
    }

    InverseDynamics { links, loads }
}

/// Actuator torques that hold the arm still against gravity, from a direct
/// moment sum over the links outboard of each joint.
pub fn gravity_torques_oracle(model: &RobotModel, q: &JointVector) -> JointVector {
    let pts = joint_positions(model, q);
    let com_x: Vec<f64> = (0..NUM_JOINTS).map(|k| 0.5 * (pts[k][0] + pts[k + 1][0])).collect();
    let mut tau = JointVector::zeros();
    for j in 0..NUM_JOINTS {
        tau[j] = model.gravity * (j..NUM_JOINTS).map(|i| model.links[i].mass * (com_x[i] - pts[j][0])).sum::<f64>();
    }
    tau
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Energy {
    pub kinetic: f64,
    pub potential: f64,
}

impl Energy {
    pub fn total(&self) -> f64 {
        self.kinetic + self.potential
    }
}

/// Kinetic and gravitational potential energy from planar rigid-body
/// kinematics (no frame propagation).
pub fn total_energy(model: &RobotModel, q: &JointVector, qdot: &JointVector) -> Energy {
    let pts = joint_positions(model, q);
    let mut kinetic = 0.0;
    let mut potential = 0.0;
    let mut omega = 0.0;
    for k in 0..NUM_JOINTS {
        omega += qdot[k];
        let c = [0.5 * (pts[k][0] + pts[k + 1][0]), 0.5 * (pts[k][1] + pts[k + 1][1])];
        let (mut vx, mut vz) = (0.0, 0.0);
        for j in 0..=k {
            vx -= qdot[j] * (c[1] - pts[j][1]);
            vz += qdot[j] * (c[0] - pts[j][0]);
        }
        let link = &model.links[k];
        kinetic += 0.5 * link.mass * (vx * vx + vz * vz) + 0.5 * link.inertia_zz() * omega * omega;
        potential += model.gravity * link.mass * c[1];
    }
    Energy { kinetic, potential }
}
