//! Acceptance suite. Each test checks one exit criterion at a fixed
//! tolerance and writes a single `criterion N: PASS|FAIL` line to
//! stderr (bypassing the test harness capture) before asserting.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dandelion_core::cli::{run_batch, run_episode, summarize, EpisodeOptions, Outcome, RunOverrides, Scenario};
use dandelion_core::controller::{Mode, SteeringPolicy};
use dandelion_core::gait::{shaft_angles, BuehlerClock, GaitParams};
use dandelion_core::geometry::{
    critical_distance, max_stem_radius, spherical_to_cylindrical, BladeGeometry, GammaFormula, SphericalTarget,
};
use dandelion_core::perception::{
    classify_dandelion, detect_dandelion, find_blobs, hsv_mask, render_frame, CameraModel, HsvThresholds, Mask,
};
use dandelion_core::simulator::{
    dead_reckon_duration, wrap_degrees, ChassisState, Command, DandelionSpec, WorldConfig, WorldState,
};

fn verdict(n: u32, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {n}: {status} ({detail})");
}

#[test]
fn criterion_1_dead_reckoning() {
    const TOL: f64 = 1e-6;
    const MAX_RUNTIME_S: f64 = 1.0;
    let started = Instant::now();
    let cfg = WorldConfig { noise: false, ..WorldConfig::default() };
    let duration = dead_reckon_duration(1.0, &cfg.gait, &cfg.motion);
    let mut world = WorldState::new(cfg, ChassisState::default(), vec![], 0).unwrap();
    let dt = 0.05;
    let ticks = (duration / dt).round() as usize;
    for _ in 0..ticks {
        world.step(&Command::forward(0.0), dt).unwrap();
    }
    let covered = world.robot.x.hypot(world.robot.y);
    let elapsed = started.elapsed().as_secs_f64();
    let pass = (covered - 1.0).abs() <= TOL && elapsed < MAX_RUNTIME_S;
    verdict(1, pass, &format!("walked {duration} s, covered {covered:.9} m, runtime {elapsed:.3} s"));
    assert!(pass);
}

#[test]
fn criterion_2_steering_equation_algebra() {
    const TOL: f64 = 1e-9;
    const N_PHASE: usize = 1000;
    const N_STEER: usize = 21;
    let clock = BuehlerClock::default();
    let params = |s: f64| GaitParams { steer_param: s, k_s: 1.0, ..GaitParams::default() };

    let gap = |x: f64, y: f64| wrap_degrees(x - y).abs();
    let mut mirror_err: f64 = 0.0;
    let mut same_sign_err: f64 = 0.0;
    let mut collapse_err: f64 = 0.0;
    for i in 0..N_PHASE {
        let phi = i as f64 / N_PHASE as f64;
        for j in 0..N_STEER {
            let s = -0.2 + 0.4 * j as f64 / (N_STEER - 1) as f64;
            let left = shaft_angles(phi, &params(s), &clock).unwrap();
            let right = shaft_angles(phi + 0.5, &params(-s), &clock).unwrap();
            mirror_err = mirror_err.max(gap(left.ml, right.mr));
            let same = shaft_angles(phi + 0.5, &params(s), &clock).unwrap();
            same_sign_err = same_sign_err.max(gap(left.ml, same.mr));
        }
        let tripod = shaft_angles(phi, &params(0.0), &clock).unwrap();
        collapse_err = collapse_err.max(gap(tripod.ml, tripod.fr)).max(gap(tripod.mr, tripod.fl));
    }
    let pass = mirror_err <= TOL && collapse_err <= TOL;
    verdict(
        2,
        pass,
        &format!(
            "max |ML(phi; s) - MR(phi + 1/2; -s)| = {mirror_err:.3e} deg, \
             s = 0 collapse error {collapse_err:.3e} deg; with +s instead the gap is {same_sign_err:.3e} deg"
        ),
    );
    assert!(collapse_err <= TOL, "s = 0 does not reduce to the tripod pattern");
    assert!(mirror_err <= TOL, "mirror identity violated by {mirror_err} deg");
}

#[test]
fn criterion_3_blade_identity() {
    const TOL: f64 = 1e-12;
    let mut worst: f64 = 0.0;
    for half_angle in (1..=8).map(|k| 10.0 * k as f64) {
        let blade = BladeGeometry { half_angle, ..BladeGeometry::default() };
        for i in 0..=490 {
            let d = 0.001 + 0.0001 * i as f64;
            let back = critical_distance(max_stem_radius(d, &blade), &blade);
            worst = worst.max((back - d).abs());
        }
    }
    let pass = worst <= TOL;
    verdict(3, pass, &format!("max round-trip error {worst:.3e} m"));
    assert!(pass);
}

#[test]
fn criterion_4_coordinate_transform() {
    const TOL: f64 = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut norm_err: f64 = 0.0;
    let mut theta_exact = true;
    for _ in 0..10_000 {
        let a = rng.gen_range(-27.0..=27.0);
        let mut e: f64 = rng.gen_range(-20.0..=20.0);
        if e.abs() < 1e-3 {
            e = 1e-3_f64.copysign(e);
        }
        let d = rng.gen_range(0.05..5.0);
        let t = SphericalTarget::new(a, e, d).unwrap();
        let c = spherical_to_cylindrical(&t).unwrap();
        norm_err = norm_err.max(((c.r * c.r + c.z * c.z) - d * d).abs());
        theta_exact &= c.theta == a;
    }

    // Independent route: atan(1/x) = 90 deg - atan(x) for x > 0.
    let oracle = |a: f64, e: f64, d: f64| {
        let g = 90.0 - (a.to_radians().cos() * e.to_radians().tan()).atan().to_degrees();
        (g, d * g.to_radians().cos(), d * g.to_radians().sin())
    };
    let mut point_err: f64 = 0.0;
    for (a, e, d) in [(0.0, 45.0, 1.0), (0.0, 89.999, 1.0), (18.0, 10.0, 1.5)] {
        let (_, r, z) = oracle(a, e, d);
        let c = spherical_to_cylindrical(&SphericalTarget { azimuth: a, elevation: e, distance: d }).unwrap();
        point_err = point_err.max((c.r - r).abs()).max((c.z - z).abs());
    }
    let (g, r, z) = oracle(18.0, 10.0, 1.5);
    let published = (g - 80.48).abs() < 0.005 && (r - 0.248).abs() < 5e-4 && (z - 1.479).abs() < 5e-4;

    let pass = norm_err <= TOL && theta_exact && point_err <= TOL && published;
    verdict(
        4,
        pass,
        &format!("max |r^2 + z^2 - d^2| = {norm_err:.3e}, theta exact: {theta_exact}, point error {point_err:.3e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_5_perception_round_trip() {
    const ANGLE_TOL: f64 = 0.5;
    const DIST_TOL: f64 = 0.02;
    const REQUIRED: usize = 99;
    let camera = CameraModel::default();
    let robot = ChassisState::default();
    let vertex_offset = camera.mount_offset;
    let pose = camera.pose_for(&robot, vertex_offset);
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    let mut good = 0;
    let mut gated_out = 0;
    for _ in 0..100 {
        let a: f64 = rng.gen_range(-24.0..=24.0);
        let e: f64 = rng.gen_range(-17.0..=17.0);
        let d: f64 = rng.gen_range(0.5..=3.0);
        let (ar, er) = (a.to_radians(), e.to_radians());
        let point = (pose.x + d * er.cos() * ar.cos(), pose.y - d * er.cos() * ar.sin(), pose.z + d * er.sin());
        let spec = DandelionSpec::new(point.0, point.1, 0.002, point.2);
        let truth = camera.observe(&pose, point).unwrap();
        let frame = render_frame(&[spec], &camera, &robot, vertex_offset);

        let blobs = find_blobs(&hsv_mask(&frame, &HsvThresholds::default()));
        if !blobs.iter().any(|b| classify_dandelion(b.circularity)) {
            gated_out += 1;
        }
        if let Some(t) = detect_dandelion(&frame, &camera) {
            if (t.azimuth - truth.azimuth).abs() <= ANGLE_TOL
                && (t.elevation - truth.elevation).abs() <= ANGLE_TOL
                && (t.distance - truth.distance).abs() <= DIST_TOL
            {
                good += 1;
            }
        }
    }

    let mut stripe = Mask::new(140, 40);
    for y in 15..25 {
        for x in 20..120 {
            stripe.set(x, y, true);
        }
    }
    let stripe_blobs = find_blobs(&stripe);
    let stripe_c = stripe_blobs[0].circularity;
    let stripe_rejected = stripe_blobs.len() == 1 && !classify_dandelion(stripe_c) && (stripe_c - 0.26).abs() < 0.02;

    let pass = good >= REQUIRED && gated_out == 0 && stripe_rejected;
    verdict(
        5,
        pass,
        &format!("{good}/100 scenes recovered, {gated_out} disks gated out, 10:1 stripe c = {stripe_c:.4}"),
    );
    assert!(pass);
}

fn arc_scenario(azimuth: f64, seed: u64, noise: bool) -> Scenario {
    let mut s = Scenario::single_target(azimuth, 1.5, 0.10);
    s.seed = seed;
    s.noise = noise;
    s
}

#[test]
fn criterion_6_overshoot_arc_reconstruction() {
    const MAX_WALL_S: f64 = 5.0;
    let s = arc_scenario(18.0, 1, false);
    let opts = EpisodeOptions { steering: SteeringPolicy::Calibrated, ..EpisodeOptions::from_scenario(&s) };
    let started = Instant::now();
    let (report, _) = run_episode(&s, &opts).unwrap();
    let wall = started.elapsed().as_secs_f64();
    let pass = report.outcome == Outcome::Picked
        && report.final_mode == Mode::Done
        && report.overshoot_count >= 1
        && wall < MAX_WALL_S;
    verdict(
        6,
        pass,
        &format!(
            "outcome {:?}, {} overshoots, {:.1} s simulated, {wall:.2} s wall-clock",
            report.outcome, report.overshoot_count, report.sim_time
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_7_robust_pick_rate() {
    const MIN_PICK_RATE: f64 = 0.9;
    let scenarios: Vec<(String, Scenario)> =
        [-18.0, -9.0, 0.0, 9.0, 18.0].iter().map(|&a| (format!("arc {a}"), arc_scenario(a, 100, true))).collect();
    let overrides = RunOverrides { noise: Some(true), gamma: GammaFormula::Paper, ..RunOverrides::default() };
    let items = run_batch(&scenarios, 10, &overrides);
    let summary = summarize(&items);
    let pass = summary.episodes == 50
        && summary.errors == 0
        && summary.pick_rate >= MIN_PICK_RATE
        && summary.with_backoff >= 1;
    verdict(
        7,
        pass,
        &format!(
            "{} episodes, pick rate {:.2}, {} with back-off",
            summary.episodes, summary.pick_rate, summary.with_backoff
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_8_swoop_kinematics() {
    let cfg = WorldConfig::default();
    let table = cfg.swoop_table();
    let track = cfg.swoop_track();
    let s = &track.samples;
    let n = s.len();

    let mirrored = table.rows().iter().all(|r| {
        r.positions[0] == r.positions[1] && r.positions[2] == r.positions[3] && r.positions[4] == r.positions[5]
    });

    // Stage signs of the chassis pitch trace.
    let level_start = s[0].pitch.abs() < 0.5;
    let first_negative = s.iter().position(|p| p.pitch < -1.0);
    let lowest = (0..n).min_by(|&i, &j| s[i].height.total_cmp(&s[j].height)).unwrap();
    let most_negative = (0..n).min_by(|&i, &j| s[i].pitch.total_cmp(&s[j].pitch)).unwrap();
    let recovered = s[n - 1].pitch.abs() < 0.5 && (s[n - 1].height - s[0].height).abs() < 1e-9;
    let stages = level_start
        && first_negative.is_some_and(|i| i < most_negative && most_negative < lowest)
        && lowest < n - 1
        && recovered;

    // Vertex trace: monotone into and out of the nadir, convex around it.
    let v = track.nadir_index();
    let w = n / 10;
    let (lo, hi) = (v.saturating_sub(w), (v + w).min(n - 1));
    let monotone = (lo..v).all(|i| s[i + 1].vertex_height <= s[i].vertex_height)
        && (v..hi).all(|i| s[i + 1].vertex_height >= s[i].vertex_height);
    let convex = (1..=w.min(v).min(n - 1 - v))
        .all(|k| s[v - k].vertex_height + s[v + k].vertex_height > 2.0 * s[v].vertex_height);
    let concave_up = v > 0 && v < n - 1 && monotone && convex;

    let pass = mirrored && stages && concave_up;
    verdict(
        8,
        pass,
        &format!(
            "min pitch {:.1} deg at {:.2}, lowest chassis at {:.2}, vertex nadir {:.3} m at {:.2}",
            s[most_negative].pitch, s[most_negative].progress, s[lowest].progress, s[v].vertex_height, s[v].progress
        ),
    );
    assert!(pass, "mirrored {mirrored}, stages {stages}, concave-up {concave_up}");
}

#[test]
fn criterion_9_determinism() {
    let mut identical = true;
    for (azimuth, seed, noise) in [(18.0, 1, false), (9.0, 7, true), (-18.0, 123, true)] {
        let s = arc_scenario(azimuth, seed, noise);
        let opts = EpisodeOptions::from_scenario(&s);
        let (_, first) = run_episode(&s, &opts).unwrap();
        let (_, second) = run_episode(&s, &opts).unwrap();
        identical &= !first.is_empty() && first.to_bytes() == second.to_bytes();
    }
    verdict(9, identical, "three episodes re-run with the same seed");
    assert!(identical);
}
