use dandelion_core::cli::{run_episode, world_config, EpisodeOptions, Scenario};
use dandelion_core::simulator::{
    read_trajectory_log, replay, turn_radius, write_trajectory_log, ChassisState, Command, TrajectoryLog, TurnRadius,
    WorldConfig, WorldState,
};

fn episode(azimuth: f64, seed: u64, noise: bool) -> (Scenario, TrajectoryLog, f64) {
    let mut s = Scenario::single_target(azimuth, 1.5, 0.10);
    s.seed = seed;
    s.noise = noise;
    let (report, log) = run_episode(&s, &EpisodeOptions::from_scenario(&s)).unwrap();
    (s, log, report.sim_time)
}

#[test]
fn row_count_matches_duration() {
    let (s, log, duration) = episode(9.0, 3, true);
    let dt = s.controller.period;
    assert_eq!(log.len(), (duration / dt - 1e-9).ceil() as usize);
    for (k, r) in log.records.iter().enumerate() {
        assert_eq!(r.t, k as f64 * dt);
    }
}

#[test]
fn replay_reproduces_logged_poses() {
    for noise in [false, true] {
        let (s, log, _) = episode(-18.0, 21, noise);
        let mut world =
            WorldState::new(world_config(&s, noise), s.robot.chassis(), s.dandelions.clone(), s.seed).unwrap();
        let dt = s.controller.period;
        for (k, pair) in log.records.windows(2).enumerate() {
            let head = TrajectoryLog { records: vec![pair[0].clone()] };
            replay(&mut world, &head, dt).unwrap();
            assert_eq!(world.robot, pair[1].pose, "row {k}, noise {noise}");
        }
    }
}

#[test]
fn file_round_trip_is_byte_stable() {
    let (_, log, _) = episode(18.0, 1, false);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.trajectory.csv");
    write_trajectory_log(&log, std::fs::File::create(&path).unwrap()).unwrap();
    let on_disk = std::fs::read(&path).unwrap();
    assert_eq!(on_disk, log.to_bytes());
    let back = read_trajectory_log(on_disk.as_slice()).unwrap();
    assert_eq!(back, log);
    assert_eq!(back.to_bytes(), on_disk);
}

#[test]
fn different_seeds_diverge_under_noise() {
    let (_, a, _) = episode(9.0, 5, true);
    let (_, b, _) = episode(9.0, 6, true);
    assert_ne!(a.to_bytes(), b.to_bytes());
}

/// Circumradius of three points.
fn circumradius(p: [(f64, f64); 3]) -> f64 {
    let d = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).hypot(a.1 - b.1);
    let (a, b, c) = (d(p[0], p[1]), d(p[1], p[2]), d(p[2], p[0]));
    let area2 = ((p[1].0 - p[0].0) * (p[2].1 - p[0].1) - (p[2].0 - p[0].0) * (p[1].1 - p[0].1)).abs();
    a * b * c / (2.0 * area2)
}

#[test]
fn logged_arc_curvature_matches_turn_radius() {
    let cfg = WorldConfig { noise: false, ..WorldConfig::default() };
    let dt = 0.2;
    for t in [-0.3, -0.1, 0.05, 0.15, 0.3] {
        let mut world = WorldState::new(cfg.clone(), ChassisState::default(), vec![], 0).unwrap();
        let mut points = Vec::new();
        for _ in 0..60 {
            points.push((world.robot.x, world.robot.y));
            world.step(&Command::forward(t), dt).unwrap();
        }
        let expected = match turn_radius(t, &cfg.motion).unwrap() {
            TurnRadius::Arc(r) => r.abs(),
            TurnRadius::Straight => unreachable!(),
        };
        for k in (0..40).step_by(7) {
            let r = circumradius([points[k], points[k + 10], points[k + 20]]);
            assert!((1.0 / r - 1.0 / expected).abs() < 1e-6, "T = {t}: curvature {} vs {}", 1.0 / r, 1.0 / expected);
        }
    }
}
