use std::f64::consts::PI;
use weldarm::model::Config;
use weldarm::pathplan::weld_target;
use weldarm::sim::{peak_values, to_csv};
use weldarm::{gravity_torques_oracle, planar_jacobian, run_simulation, write_outputs};

#[test]
fn joint_rates_reproduce_tip_speed() {
    let cfg = Config::paper_default();
    let traj = run_simulation(&cfg.robot, &cfg.pipe, &cfg.sim).unwrap();
    let speed = 2.0 * PI * cfg.pipe.path_radius() / cfg.sim.revolution_period;
    let omega = 2.0 * PI / cfg.sim.revolution_period;
    for s in &traj {
        let v = planar_jacobian(&cfg.robot, &s.q) * nalgebra::SVector::<f64, 5>::from(s.qdot.0);
        let linear = ((v[0] + speed * s.psi.sin()).powi(2) + (v[1] - speed * s.psi.cos()).powi(2)).sqrt();
        assert!(linear <= 1e-3 * speed, "t={}: tip velocity off by {linear}", s.t);
        assert!((v[2] - omega).abs() <= 1e-3 * omega, "t={}: phi rate {}", s.t, v[2]);
    }
}

#[test]
fn csv_round_trips_to_twelve_digits() {
    let cfg = Config::paper_default();
    let traj = run_simulation(&cfg.robot, &cfg.pipe, &cfg.sim).unwrap();
    let csv = to_csv(&traj);
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), 32);
    assert_eq!(header[2], "theta2");
    assert_eq!(header[31], "tau6");
    for (row, s) in lines.zip(&traj) {
        let v: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        let expect: Vec<f64> = [s.t, s.psi]
            .into_iter()
            .chain(s.q.0)
            .chain(s.qdot.0)
            .chain(s.qddot.0)
            .chain(s.fx.0)
            .chain(s.fz.0)
            .chain(s.tau.0)
            .collect();
        for (a, b) in v.iter().zip(&expect) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300), "{a} vs {b}");
        }
    }
}

#[test]
fn slow_revolution_approaches_statics() {
    let mut cfg = Config::paper_default();
    cfg.sim.revolution_period = 1e6;
    let traj = run_simulation(&cfg.robot, &cfg.pipe, &cfg.sim).unwrap();
    let mut oracle_peak = 0.0f64;
    for s in &traj {
        let g = gravity_torques_oracle(&cfg.robot, &s.q);
        for j in 0..5 {
            assert!((s.tau[j] - g[j]).abs() < 1e-6, "joint {} at t={}", j + 2, s.t);
        }
        oracle_peak = oracle_peak.max(g[0].abs());
    }
    let peak = peak_values(&traj)["joint2"]["tau"];
    assert!((peak - oracle_peak).abs() < 1e-6 * oracle_peak);
}

#[test]
fn four_samples_are_enough() {
    let mut cfg = Config::paper_default();
    cfg.sim.sample_count = 4;
    cfg.sim.tolerances.continuity_max_step = 3.0;
    let traj = run_simulation(&cfg.robot, &cfg.pipe, &cfg.sim).unwrap();
    assert_eq!(traj.len(), 4);
    for (i, s) in traj.iter().enumerate() {
        assert!((s.psi - i as f64 * PI / 2.0).abs() < 1e-12);
        let tip = weldarm::forward_kinematics(&cfg.robot, &s.q).tip;
        let want = weld_target(&cfg.pipe, s.psi);
        assert!((tip.x - want.x).abs() < 1e-9 && (tip.z - want.z).abs() < 1e-9);
    }
}

#[test]
fn unreachable_pipe_is_rejected() {
    let mut cfg = Config::paper_default();
    cfg.pipe.center_x = 40.0;
    assert!(run_simulation(&cfg.robot, &cfg.pipe, &cfg.sim).is_err());
}

#[test]
fn no_plots_writes_csv_and_summary_only() {
    let ok = Config::paper_default();
    let traj = run_simulation(&ok.robot, &ok.pipe, &ok.sim).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let files = write_outputs(&traj, dir.path(), false).unwrap();
    let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 2, "{names:?}");
    assert!(files.plots.is_empty());
}
