//! Direct kinematics of the arm.
//!
//! Frames follow the modified (proximal) Denavit–Hartenberg convention: the
//! transform from frame i−1 to frame i is Rx(α_{i−1})·Tx(a_{i−1})·Rz(θ_i)·Tz(d_i).
//! With the plinth row first and α = 90° on joint 2, every joint axis is the
//! base −y axis and the arm moves in the base (x, z) plane.

use nalgebra::{Matrix3, Matrix4, SMatrix, Vector3};
use std::f64::consts::{PI, TAU};

use crate::angle;
use crate::ik::JointVector;
use crate::model::{DhRow, JointKind, RobotModel};

/// Rigid transform stored as a rotation block and a translation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomTransform {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

impl HomTransform {
    pub fn identity() -> Self {
        Self { rotation: Matrix3::identity(), translation: Vector3::zeros() }
    }

    /// `self · other`.
    pub fn compose(&self, other: &HomTransform) -> HomTransform {
        HomTransform {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn to_matrix(&self) -> Matrix4<f64> {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.rotation);
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.translation);
        m
    }

    /// Position in the base (x, z) plane.
    pub fn planar_origin(&self) -> [f64; 2] {
        [self.translation.x, self.translation.z]
    }
}

/// Electrode tip pose in the base (x, z) plane. `phi` is the direction of the
/// electrode axis measured from +x toward +z, kept in (−π, π]; `turns` counts
/// whole revolutions for poses taken from an unwrapped sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarPose {
    pub x: f64,
    pub z: f64,
    pub phi: f64,
    pub turns: i64,
}

impl PlanarPose {
    pub fn new(x: f64, z: f64, phi: f64) -> Self {
        Self { x, z, phi: angle::normalize(phi), turns: 0 }
    }

    /// Builds a pose from a continuous (unwrapped) orientation.
    pub fn unwrapped(x: f64, z: f64, phi: f64) -> Self {
        let wrapped = angle::normalize(phi);
        let turns = ((phi - wrapped) / TAU).round() as i64;
        Self { x, z, phi: wrapped, turns }
    }

    pub fn unwrapped_phi(&self) -> f64 {
        self.phi + TAU * self.turns as f64
    }
}

/// sin/cos with the quarter-turn twists used by DH tables returned exactly.
fn sin_cos_exact(a: f64) -> (f64, f64) {
    if a == 0.0 {
        (0.0, 1.0)
    } else if a == PI / 2.0 {
        (1.0, 0.0)
    } else if a == -PI / 2.0 {
        (-1.0, 0.0)
    } else {
        a.sin_cos()
    }
}

/// Transform from frame i−1 to frame i for one DH row. `joint_value` is added
/// to `theta_home` for revolute rows and ignored for fixed rows.
pub fn link_transform(row: &DhRow, joint_value: f64) -> HomTransform {
    let theta = match row.kind {
        JointKind::Revolute => row.theta_home + joint_value,
        JointKind::Fixed => row.theta_home,
    };
    let (st, ct) = sin_cos_exact(theta);
    let (sa, ca) = sin_cos_exact(row.alpha_prev);
    HomTransform {
        rotation: Matrix3::new(
            ct, -st, 0.0, //
            st * ca, ct * ca, -sa, //
            st * sa, ct * sa, ca,
        ),
        translation: Vector3::new(row.a_prev, -sa * row.d, ca * row.d),
    }
}

/// Chain of base→frame transforms together with the tip pose.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardKinematics {
    /// `frames[k]` is the base→frame k transform: `frames[0]` is the base
    /// itself, `frames[1]` the top of the plinth, `frames[2..=6]` the joint
    /// frames 2..6 and `frames[7]` the tool.
    pub frames: Vec<HomTransform>,
    pub tip: PlanarPose,
}

impl ForwardKinematics {
    pub fn tool(&self) -> &HomTransform {
        self.frames.last().expect("chain is never empty")
    }
}

pub fn forward_kinematics(model: &RobotModel, q: &JointVector) -> ForwardKinematics {
    let mut acc = HomTransform::identity();
    let mut frames = Vec::with_capacity(model.rows.len() + 1);
    frames.push(acc);
    let mut joint = 0;
    for row in &model.rows {
        let value = match row.kind {
            JointKind::Revolute => {
                joint += 1;
                q[joint - 1]
            }
            JointKind::Fixed => 0.0,
        };
        acc = acc.compose(&link_transform(row, value));
        frames.push(acc);
    }
    let tool = frames.last().expect("model has rows");
    let r = &tool.rotation;
    let tip = PlanarPose::new(tool.translation.x, tool.translation.z, r[(2, 0)].atan2(r[(0, 0)]));
    ForwardKinematics { frames, tip }
}

/// Planar positions of joint 2 … joint 6 and the tip (six points).
pub fn joint_positions(model: &RobotModel, q: &JointVector) -> [[f64; 2]; 6] {
    let fk = forward_kinematics(model, q);
    let mut pts = [[0.0; 2]; 6];
    for (p, frame) in pts.iter_mut().zip(&fk.frames[2..]) {
        *p = frame.planar_origin();
    }
    pts
}

/// Maps joint rates (θ̇2..θ̇6) to tip rates (ẋ, ż, φ̇).
pub fn planar_jacobian(model: &RobotModel, q: &JointVector) -> SMatrix<f64, 3, 5> {
    let pts = joint_positions(model, q);
    let [xt, zt] = pts[5];
    SMatrix::<f64, 3, 5>::from_fn(|row, j| {
        let [xj, zj] = pts[j];
        match row {
            0 => -(zt - zj),
            1 => xt - xj,
            _ => 1.0,
        }
    })
}
