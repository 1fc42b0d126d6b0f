//! Kinematics, weld-path planning and inverse dynamics for a fixed-plinth,
//! five-revolute pipe-welding arm.
//!
//! The arm moves in the vertical (x, z) plane of its base frame. Joint 2 sits
//! on top of a plinth of height `L1`; links 2 through 6 carry the electrode,
//! whose tip is the end of link 6. The crate is organised bottom-up:
//!
//! * [`model`]: robot, pipe and simulation configuration (JSON config file).
//! * [`kinematics`]: modified Denavit–Hartenberg transforms, forward
//!   kinematics, joint positions and the planar Jacobian.
//! * [`ik`]: closed-form inverse kinematics with θ2/θ3 redundancy resolution.
//! * [`pathplan`]: circular weld path, arm/pipe collision checks and the
//!   continuous joint-space plan for one revolution.
//! * [`dynamics`]: recursive Newton–Euler inverse dynamics plus independent
//!   statics and energy routines.
//! * [`sim`]: the batch pipeline and its CSV / SVG / JSON outputs.

pub mod angle;
pub mod dynamics;
pub mod ik;
pub mod kinematics;
pub mod model;
pub mod pathplan;
pub mod plot;
pub mod sim;

pub use dynamics::{gravity_torques_oracle, inverse_dynamics, total_energy, JointLoad, LinkState};
pub use ik::{redundancy_select, solve_ik, Branch, IkError, IkIntermediates, IkSolution, JointVector};
pub use kinematics::{forward_kinematics, joint_positions, link_transform, planar_jacobian, HomTransform, PlanarPose};
pub use model::{link_inertia_from_geometry, parse_config, ConfigError, DhRow, LinkInertia, PipeSpec, RobotModel, SimConfig};
pub use pathplan::{check_collision, plan_trajectory, segment_circle_intersects, weld_path, PlanError, WeldPathSample};
pub use sim::{differentiate_trajectory, run_simulation, write_outputs, SimError, TrajectorySample};

/// Number of revolute joints (θ2..θ6).
pub const NUM_JOINTS: usize = 5;
