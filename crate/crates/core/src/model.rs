//! Robot, pipe and simulation configuration.
//!
//! A [`Config`] is loaded from a JSON document (see [`parse_config`]) and is
//! immutable afterwards. Lengths are metres, masses kilograms and angles are
//! radians everywhere except in the JSON document, which uses degrees.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;
use thiserror::Error;

use crate::ik::Branch;

/// Plinth height and arm lengths L1..L6 of the reference welding arm (m).
pub const PAPER_LENGTHS: [f64; 6] = [3.45, 3.22, 2.99, 2.76, 2.53, 2.3];
/// Plexiglas density (kg/m³).
pub const PAPER_DENSITY: f64 = 1190.0;
pub const PAPER_LINK_WIDTH: f64 = 0.03;
pub const PAPER_LINK_THICKNESS: f64 = 0.004;
pub const DEFAULT_GRAVITY: f64 = 9.81;

/// The reference configuration shipped with the crate.
pub const PAPER_DEFAULT_JSON: &str = include_str!("../configs/paper_default.json");

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("malformed config: {0}")]
    Malformed(String),
    #[error("invalid value for `{field}`: {reason}")]
    InvalidValue { field: String, reason: String },
}

impl ConfigError {
    fn invalid(field: &str, reason: impl Into<String>) -> Self {
        ConfigError::InvalidValue {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    fn missing(field: &str) -> Self {
        Self::invalid(field, "required field is missing")
    }

    /// Name of the offending field for `InvalidValue` errors.
    pub fn field(&self) -> Option<&str> {
        match self {
            ConfigError::InvalidValue { field, .. } => Some(field),
            ConfigError::Malformed(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JointKind {
    Fixed,
    Revolute,
}

/// One row of the modified Denavit–Hartenberg table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DhRow {
    pub alpha_prev: f64,
    pub a_prev: f64,
    pub d: f64,
    pub theta_home: f64,
    pub kind: JointKind,
}

impl DhRow {
    pub fn fixed(alpha_prev: f64, a_prev: f64, d: f64) -> Self {
        Self { alpha_prev, a_prev, d, theta_home: 0.0, kind: JointKind::Fixed }
    }

    pub fn revolute(alpha_prev: f64, a_prev: f64, d: f64) -> Self {
        Self { alpha_prev, a_prev, d, theta_home: 0.0, kind: JointKind::Revolute }
    }
}

/// Mass properties of one moving link, expressed in that link's DH frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkInertia {
    pub mass: f64,
    /// Centre of mass in the link frame (on the x axis, at half length).
    pub com: Vector3<f64>,
    /// Principal moments (I_xx, I_yy, I_zz) about the centre of mass.
    pub inertia_diag: Vector3<f64>,
}

impl LinkInertia {
    /// Moment of inertia about the axis normal to the motion plane.
    pub fn inertia_zz(&self) -> f64 {
        self.inertia_diag.z
    }
}

/// Uniform rectangular bar of the given length, width (in the motion plane)
/// and thickness (along the joint axes).
pub fn link_inertia_from_geometry(length: f64, width: f64, thickness: f64, density: f64) -> LinkInertia {
    let mass = density * width * thickness * length;
    let (l2, w2, t2) = (length * length, width * width, thickness * thickness);
    LinkInertia {
        mass,
        com: Vector3::new(length / 2.0, 0.0, 0.0),
        inertia_diag: Vector3::new(mass * (w2 + t2) / 12.0, mass * (l2 + t2) / 12.0, mass * (l2 + w2) / 12.0),
    }
}

/// Kinematic and inertial description of the arm.
///
/// `rows` holds seven DH rows: the fixed plinth offset, the five revolute
/// joints θ2..θ6 and a fixed tool row carrying L6 out to the electrode tip.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotModel {
    pub rows: Vec<DhRow>,
    /// L1..L6 in metres.
    pub lengths: [f64; 6],
    /// Moving links 2..6.
    pub links: [LinkInertia; 5],
    /// Magnitude of gravity, acting along base −z.
    pub gravity: f64,
    pub link_width: f64,
    pub link_thickness: f64,
    pub density: f64,
}

impl RobotModel {
    pub fn new(
        lengths: [f64; 6],
        link_width: f64,
        link_thickness: f64,
        density: f64,
        gravity: f64,
    ) -> Result<Self, ConfigError> {
        for (i, &l) in lengths.iter().enumerate() {
            if !(l.is_finite() && l > 0.0) {
                return Err(ConfigError::invalid(
                    "robot.lengths_m",
                    format!("L{} must be finite and > 0, got {l}", i + 1),
                ));
            }
        }
        positive("robot.link_width_m", link_width)?;
        positive("robot.link_thickness_m", link_thickness)?;
        positive("robot.density_kg_m3", density)?;
        if !(gravity.is_finite() && gravity >= 0.0) {
            return Err(ConfigError::invalid("robot.gravity_m_s2", "must be finite and >= 0"));
        }

        let [l1, l2, l3, l4, l5, l6] = lengths;
        let rows = vec![
            DhRow::fixed(0.0, 0.0, l1),
            DhRow::revolute(FRAC_PI_2, 0.0, 0.0),
            DhRow::revolute(0.0, l2, 0.0),
            DhRow::revolute(0.0, l3, 0.0),
            DhRow::revolute(0.0, l4, 0.0),
            DhRow::revolute(0.0, l5, 0.0),
            DhRow::fixed(0.0, l6, 0.0),
        ];
        let links = [l2, l3, l4, l5, l6]
            .map(|l| link_inertia_from_geometry(l, link_width, link_thickness, density));
        Ok(Self { rows, lengths, links, gravity, link_width, link_thickness, density })
    }

    /// The reference Plexiglas arm.
    pub fn paper() -> Self {
        Self::new(PAPER_LENGTHS, PAPER_LINK_WIDTH, PAPER_LINK_THICKNESS, PAPER_DENSITY, DEFAULT_GRAVITY)
            .expect("reference model is valid")
    }

    pub fn plinth_height(&self) -> f64 {
        self.lengths[0]
    }

    /// Lengths of the moving links L2..L6.
    pub fn arm_lengths(&self) -> [f64; 5] {
        let l = self.lengths;
        [l[1], l[2], l[3], l[4], l[5]]
    }

    /// Distance from joint 2 to the tip at full extension.
    pub fn reach(&self) -> f64 {
        self.arm_lengths().iter().sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.links.iter().map(|l| l.mass).sum()
    }

    /// Non-fatal observations about the geometry.
    pub fn warnings(&self) -> Vec<String> {
        let arm = self.arm_lengths();
        if arm.windows(2).all(|w| w[0] > w[1]) {
            Vec::new()
        } else {
            vec![format!("arm lengths {arm:?} are not strictly decreasing from L2 to L6")]
        }
    }

    pub fn with_gravity(&self, gravity: f64) -> Self {
        Self { gravity, ..self.clone() }
    }
}

/// Pipe cross-section in the base (x, z) plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipeSpec {
    pub center_x: f64,
    pub center_z: f64,
    pub radius: f64,
    /// Gap between electrode tip and pipe surface.
    pub standoff: f64,
}

impl PipeSpec {
    pub fn center(&self) -> [f64; 2] {
        [self.center_x, self.center_z]
    }

    /// Radius of the circle traced by the electrode tip.
    pub fn path_radius(&self) -> f64 {
        self.radius + self.standoff
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RedundancyStrategy {
    /// Keep θ2 and θ3 at their configured values.
    Hold,
    /// Search a θ2 × θ3 grid per sample for the collision-free candidate
    /// closest to the previous sample.
    GridSearch,
}

/// What planning does when a planned pose penetrates the pipe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollisionPolicy {
    /// Fail with `CollisionAtSample`.
    Enforce,
    /// Keep the pose and flag the sample.
    Report,
}

/// θ2 × θ3 candidate grid, inclusive ranges in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub theta2_range: (f64, f64),
    pub theta3_range: (f64, f64),
    pub steps: usize,
}

impl GridSpec {
    fn axis(range: (f64, f64), steps: usize) -> Vec<f64> {
        if steps == 1 {
            return vec![range.0];
        }
        (0..steps)
            .map(|k| range.0 + (range.1 - range.0) * k as f64 / (steps - 1) as f64)
            .collect()
    }

    pub fn theta2_values(&self) -> Vec<f64> {
        Self::axis(self.theta2_range, self.steps)
    }

    pub fn theta3_values(&self) -> Vec<f64> {
        Self::axis(self.theta3_range, self.steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Slack allowed on |cos θ5| ≤ 1 before a target is unreachable.
    pub reach_eps: f64,
    /// Depth a link may touch into the pipe before it counts as a collision.
    pub penetration_eps: f64,
    /// Largest per-joint change between consecutive samples (rad).
    pub continuity_max_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { reach_eps: 1e-9, penetration_eps: 1e-6, continuity_max_step: 0.2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub revolution_period: f64,
    pub sample_count: usize,
    pub theta2_held: f64,
    pub theta3_held: f64,
    pub branch: Branch,
    pub redundancy: RedundancyStrategy,
    pub collision: CollisionPolicy,
    pub grid: GridSpec,
    pub tolerances: Tolerances,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            revolution_period: 60.0,
            sample_count: 360,
            theta2_held: 0.0,
            theta3_held: 0.0,
            branch: Branch::ElbowUp,
            redundancy: RedundancyStrategy::Hold,
            collision: CollisionPolicy::Enforce,
            grid: GridSpec {
                theta2_range: (-30f64.to_radians(), 30f64.to_radians()),
                theta3_range: (-30f64.to_radians(), 30f64.to_radians()),
                steps: 13,
            },
            tolerances: Tolerances::default(),
        }
    }
}

impl SimConfig {
    pub fn dt(&self) -> f64 {
        self.revolution_period / self.sample_count as f64
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.revolution_period.is_finite() && self.revolution_period > 0.0) {
            return Err(ConfigError::invalid("sim.revolution_period_s", "must be finite and > 0"));
        }
        if self.sample_count < 4 {
            return Err(ConfigError::invalid("sim.sample_count", format!("must be >= 4, got {}", self.sample_count)));
        }
        finite("sim.theta2_deg", self.theta2_held)?;
        finite("sim.theta3_deg", self.theta3_held)?;
        let g = &self.grid;
        for (field, (lo, hi)) in [("sim.grid.theta2_range_deg", g.theta2_range), ("sim.grid.theta3_range_deg", g.theta3_range)] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(ConfigError::invalid(field, "expected finite [low, high] with low <= high"));
            }
        }
        if g.steps == 0 {
            return Err(ConfigError::invalid("sim.grid.steps", "must be >= 1"));
        }
        let t = &self.tolerances;
        positive("sim.tolerances.reach_eps", t.reach_eps)?;
        positive("sim.tolerances.penetration_eps", t.penetration_eps)?;
        positive("sim.tolerances.continuity_max_step", t.continuity_max_step)?;
        Ok(())
    }
}

/// Everything a simulation run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub robot: RobotModel,
    pub pipe: PipeSpec,
    pub sim: SimConfig,
}

impl Config {
    pub fn paper_default() -> Self {
        parse_config(PAPER_DEFAULT_JSON).expect("bundled config is valid")
    }
}

fn positive(field: &str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ConfigError::invalid(field, format!("must be finite and > 0, got {v}")))
    }
}

fn finite(field: &str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::invalid(field, "must be finite"))
    }
}

// On-disk document. Every field is optional here so that missing values are
// reported by name rather than as a generic parse failure.

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    robot: Option<RobotDoc>,
    pipe: Option<PipeDoc>,
    sim: Option<SimDoc>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RobotDoc {
    lengths_m: Option<Vec<f64>>,
    link_width_m: Option<f64>,
    link_thickness_m: Option<f64>,
    density_kg_m3: Option<f64>,
    gravity_m_s2: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PipeDoc {
    center_x_m: Option<f64>,
    center_z_m: Option<f64>,
    radius_m: Option<f64>,
    standoff_m: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimDoc {
    revolution_period_s: Option<f64>,
    sample_count: Option<i64>,
    theta2_deg: Option<f64>,
    theta3_deg: Option<f64>,
    branch: Option<String>,
    redundancy: Option<String>,
    collision: Option<String>,
    grid: Option<GridDoc>,
    tolerances: Option<TolerancesDoc>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridDoc {
    theta2_range_deg: Option<[f64; 2]>,
    theta3_range_deg: Option<[f64; 2]>,
    steps: Option<i64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TolerancesDoc {
    reach_eps: Option<f64>,
    penetration_eps: Option<f64>,
    continuity_max_step: Option<f64>,
}

/// Parses and validates a JSON config document.
pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| ConfigError::Malformed(e.to_string()))?;

    let robot_doc = doc.robot.unwrap_or_default();
    let lengths = robot_doc.lengths_m.ok_or_else(|| ConfigError::missing("robot.lengths_m"))?;
    let lengths: [f64; 6] = lengths
        .try_into()
        .map_err(|v: Vec<f64>| ConfigError::invalid("robot.lengths_m", format!("expected 6 lengths [L1..L6], got {}", v.len())))?;
    let robot = RobotModel::new(
        lengths,
        robot_doc.link_width_m.unwrap_or(PAPER_LINK_WIDTH),
        robot_doc.link_thickness_m.unwrap_or(PAPER_LINK_THICKNESS),
        robot_doc.density_kg_m3.unwrap_or(PAPER_DENSITY),
        robot_doc.gravity_m_s2.unwrap_or(DEFAULT_GRAVITY),
    )?;

    let pipe_doc = doc.pipe.unwrap_or_default();
    let pipe = PipeSpec {
        center_x: pipe_doc.center_x_m.ok_or_else(|| ConfigError::missing("pipe.center_x_m"))?,
        center_z: pipe_doc.center_z_m.unwrap_or(robot.plinth_height()),
        radius: pipe_doc.radius_m.ok_or_else(|| ConfigError::missing("pipe.radius"))?,
        standoff: pipe_doc.standoff_m.unwrap_or(0.0),
    };
    finite("pipe.center_x_m", pipe.center_x)?;
    finite("pipe.center_z_m", pipe.center_z)?;
    positive("pipe.radius", pipe.radius)?;
    if !(pipe.standoff.is_finite() && pipe.standoff >= 0.0) {
        return Err(ConfigError::invalid("pipe.standoff_m", "must be finite and >= 0"));
    }

    let sim_doc = doc.sim.unwrap_or_default();
    let mut sim = SimConfig::default();
    if let Some(p) = sim_doc.revolution_period_s {
        sim.revolution_period = p;
    }
    if let Some(n) = sim_doc.sample_count {
        sim.sample_count = usize::try_from(n).map_err(|_| ConfigError::invalid("sim.sample_count", "must be >= 4"))?;
    }
    if let Some(d) = sim_doc.theta2_deg {
        sim.theta2_held = d.to_radians();
    }
    if let Some(d) = sim_doc.theta3_deg {
        sim.theta3_held = d.to_radians();
    }
    if let Some(b) = sim_doc.branch {
        sim.branch = b.parse().map_err(|e: String| ConfigError::invalid("sim.branch", e))?;
    }
    if let Some(r) = sim_doc.redundancy {
        sim.redundancy = match r.as_str() {
            "hold" => RedundancyStrategy::Hold,
            "grid_search" => RedundancyStrategy::GridSearch,
            other => {
                return Err(ConfigError::invalid("sim.redundancy", format!("expected \"hold\" or \"grid_search\", got {other:?}")))
            }
        };
    }
    if let Some(c) = sim_doc.collision {
        sim.collision = match c.as_str() {
            "enforce" => CollisionPolicy::Enforce,
            "report" => CollisionPolicy::Report,
            other => {
                return Err(ConfigError::invalid("sim.collision", format!("expected \"enforce\" or \"report\", got {other:?}")))
            }
        };
    }
    if let Some(g) = sim_doc.grid {
        if let Some([lo, hi]) = g.theta2_range_deg {
            sim.grid.theta2_range = (lo.to_radians(), hi.to_radians());
        }
        if let Some([lo, hi]) = g.theta3_range_deg {
            sim.grid.theta3_range = (lo.to_radians(), hi.to_radians());
        }
        if let Some(s) = g.steps {
            sim.grid.steps = usize::try_from(s).map_err(|_| ConfigError::invalid("sim.grid.steps", "must be >= 1"))?;
        }
    }
    if let Some(t) = sim_doc.tolerances {
        let tol = &mut sim.tolerances;
        tol.reach_eps = t.reach_eps.unwrap_or(tol.reach_eps);
        tol.penetration_eps = t.penetration_eps.unwrap_or(tol.penetration_eps);
        tol.continuity_max_step = t.continuity_max_step.unwrap_or(tol.continuity_max_step);
    }
    sim.validate()?;

    Ok(Config { robot, pipe, sim })
}

/// Writes a config back out as a pretty-printed JSON document with every
/// field present.
pub fn serialize_config(cfg: &Config) -> String {
    let r = &cfg.robot;
    let s = &cfg.sim;
    let doc = Document {
        robot: Some(RobotDoc {
            lengths_m: Some(r.lengths.to_vec()),
            link_width_m: Some(r.link_width),
            link_thickness_m: Some(r.link_thickness),
            density_kg_m3: Some(r.density),
            gravity_m_s2: Some(r.gravity),
        }),
        pipe: Some(PipeDoc {
            center_x_m: Some(cfg.pipe.center_x),
            center_z_m: Some(cfg.pipe.center_z),
            radius_m: Some(cfg.pipe.radius),
            standoff_m: Some(cfg.pipe.standoff),
        }),
        sim: Some(SimDoc {
            revolution_period_s: Some(s.revolution_period),
            sample_count: Some(s.sample_count as i64),
            theta2_deg: Some(s.theta2_held.to_degrees()),
            theta3_deg: Some(s.theta3_held.to_degrees()),
            branch: Some(s.branch.to_string()),
            redundancy: Some(
                match s.redundancy {
                    RedundancyStrategy::Hold => "hold",
                    RedundancyStrategy::GridSearch => "grid_search",
                }
                .to_string(),
            ),
            collision: Some(
                match s.collision {
                    CollisionPolicy::Enforce => "enforce",
                    CollisionPolicy::Report => "report",
                }
                .to_string(),
            ),
            grid: Some(GridDoc {
                theta2_range_deg: Some([s.grid.theta2_range.0.to_degrees(), s.grid.theta2_range.1.to_degrees()]),
                theta3_range_deg: Some([s.grid.theta3_range.0.to_degrees(), s.grid.theta3_range.1.to_degrees()]),
                steps: Some(s.grid.steps as i64),
            }),
            tolerances: Some(TolerancesDoc {
                reach_eps: Some(s.tolerances.reach_eps),
                penetration_eps: Some(s.tolerances.penetration_eps),
                continuity_max_step: Some(s.tolerances.continuity_max_step),
            }),
        }),
    };
    serde_json::to_string_pretty(&doc).expect("config document serializes")
}
