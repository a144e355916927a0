//! Property and statistical tests: coordinate round-trips, basin structure,
//! draw statistics, and ensemble invariants.

mod common;

use common::{ks_statistic_uniform, ks_two_sample, random_weights};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use suv_core::*;

proptest! {
    // Round-trip weights -> angles -> weights for any N in 2..64.
    #[test]
    fn weights_round_trip_through_angles(raw in prop::collection::vec(1e-6..1.0f64, 2..64)) {
        let w = WeightVector::normalized_from(raw).unwrap();
        let back = weights_from_angles(&angles_from_weights(&w));
        for (a, b) in w.as_slice().iter().zip(back.as_slice()) {
            prop_assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
        }
    }
}

#[test]
fn angle_weights_sum_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(311);
    for _ in 0..10_000 {
        let n = rng.gen_range(2..=16usize);
        let angles: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(0.0..PI)).collect();
        let w = weights_from_angles(&AngleCoords::new(angles).unwrap());
        let sum: f64 = w.as_slice().iter().sum();
        assert!((sum - 1.0).abs() <= 1e-12, "sum {sum}");
    }
}

#[test]
fn born_weights_ignore_scale_and_global_phase() {
    let mut rng = ChaCha8Rng::seed_from_u64(313);
    for _ in 0..1000 {
        let n = rng.gen_range(2..=8usize);
        let amps: Vec<num_complex::Complex64> = (0..n)
            .map(|_| num_complex::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let Ok(state) = StateVector::new(amps.clone()) else {
            continue;
        };
        if state.norm_sqr() < 1e-3 {
            continue;
        }
        let scale = num_complex::Complex64::from_polar(
            rng.gen_range(0.1..10.0),
            rng.gen_range(0.0..2.0 * PI),
        );
        let scaled = StateVector::new(amps.iter().map(|a| a * scale).collect()).unwrap();
        let w1 = born_weights(&state).unwrap();
        let w2 = born_weights(&scaled).unwrap();
        for (a, b) in w1.as_slice().iter().zip(w2.as_slice()) {
            assert!((a - b).abs() <= 1e-12);
        }
    }
}

/// The single-λ flow and the two-state flow describe the same N = 2 basins:
/// both send θ to π exactly when λ lies below the cumulative weight c_1
/// (the draws pair through the mirror λ ↔ 1−λ; only the interval lengths are
/// observable).
#[test]
fn single_lambda_n2_signs_match_two_state_basins() {
    let mut rng = ChaCha8Rng::seed_from_u64(317);
    for _ in 0..1000 {
        let theta = rng.gen_range(1e-3..PI - 1e-3);
        let lambda = rng.gen_range(0.0..1.0);
        let c1 = (0.5 * theta).sin().powi(2);
        if (lambda - c1).abs() < 1e-9 {
            continue;
        }
        let v10 = theta_velocity_single_lambda(
            &AngleCoords::new(vec![theta]).unwrap(),
            lambda,
            1.0,
        )[0];
        // Born oracle: λ below the block boundary flows to θ = π (outcome 0).
        assert_eq!(v10 > 0.0, lambda < c1, "theta {theta} lambda {lambda}");
        // Two-state stage velocity at the mirrored draw has the same sign.
        let v5 = theta.sin() * ((1.0 - lambda) - (0.5 * theta).cos().powi(2));
        assert_eq!(v10 > 0.0, v5 > 0.0);
    }
}

/// Basin consistency on a 100×100 grid: outcome 0 exactly when ξ > cos θ_0.
#[test]
fn two_state_basin_grid() {
    let model = ModelSpec::two_state(1.0).unwrap();
    let cfg = IntegratorConfig {
        dt: 0.01,
        ..IntegratorConfig::default()
    };
    for i in 0..100 {
        let theta0 = PI * (i as f64 + 0.5) / 100.0;
        let w0 = (0.5 * theta0).sin().powi(2);
        let initial = WeightVector::new(vec![w0, 1.0 - w0]).unwrap();
        for j in 0..100 {
            let xi = -1.0 + 2.0 * (j as f64 + 0.5) / 100.0;
            if (xi - theta0.cos()).abs() < 1e-4 {
                continue; // tie excluded
            }
            let draws = StochasticDraw::xi(vec![xi]).unwrap();
            let rec = run_trajectory_with_draws(&initial, &model, &cfg, &draws).unwrap();
            let expect = if xi > theta0.cos() { 0 } else { 1 };
            assert_eq!(rec.outcome, Some(expect), "theta0 {theta0} xi {xi}");
        }
    }
}

/// Along any single-λ trajectory the sign of each dθ_n/dt never flips.
#[test]
fn single_lambda_velocity_signs_never_flip() {
    let mut rng = ChaCha8Rng::seed_from_u64(331);
    let model = ModelSpec::single_lambda(4, 1.0).unwrap();
    let cfg = IntegratorConfig {
        dt: 0.005,
        ..IntegratorConfig::default()
    };
    for _ in 0..20 {
        let initial = random_weights(&mut rng, 4, 0.05);
        let lambda = rng.gen_range(0.0..1.0);
        let mut state = ModelState::Angles(angles_from_weights(&initial));
        let draws = StochasticDraw::lambda(vec![lambda]).unwrap();
        let mut signs = vec![0i8; 3];
        for _ in 0..3000 {
            let prev = match &state {
                ModelState::Angles(a) => a.as_slice().to_vec(),
                _ => unreachable!(),
            };
            state = step(&state, &model, &draws, &cfg).unwrap();
            let cur = match &state {
                ModelState::Angles(a) => a.as_slice().to_vec(),
                _ => unreachable!(),
            };
            for k in 0..3 {
                let d = cur[k] - prev[k];
                if d != 0.0 {
                    let s = if d > 0.0 { 1 } else { -1 };
                    if signs[k] == 0 {
                        signs[k] = s;
                    } else {
                        assert_eq!(signs[k], s, "angle {k} reversed");
                    }
                }
            }
        }
    }
}

/// Halving dt flips the outcome on fewer than 0.1% of a fixed-seed ensemble.
#[test]
fn dt_halving_rarely_changes_outcomes() {
    let model = ModelSpec::single_lambda(4, 1.0).unwrap();
    let initial = WeightVector::new(vec![0.15, 0.4, 0.2, 0.25]).unwrap();
    let n = 10_000u64;
    let mut flips = 0u32;
    for i in 0..n {
        let draws = draw_uniform(SeedSpec::new(4242, i), 1, DrawConvention::Lambda);
        let mut outcomes = [None, None];
        for (k, dt) in [0.01, 0.005].into_iter().enumerate() {
            let cfg = IntegratorConfig {
                dt,
                ..IntegratorConfig::default()
            };
            outcomes[k] = run_trajectory_with_draws(&initial, &model, &cfg, &draws)
                .unwrap()
                .outcome;
        }
        if outcomes[0] != outcomes[1] {
            flips += 1;
        }
    }
    assert!(
        (flips as f64) < 0.001 * n as f64,
        "{flips} outcome flips out of {n}"
    );
}

/// In the sequential hierarchy the stage-2 decision resolves slower than
/// stage 1 by at least 1/(2η) on average (angle form, where stages evolve
/// independently).
#[test]
fn sequential_stage_times_are_hierarchical() {
    let eta = 0.1;
    let model = ModelSpec::sequential(3, 1.0, eta).unwrap();
    let cfg = IntegratorConfig {
        dt: 0.01,
        form: Some(StateForm::Angles),
        ..IntegratorConfig::default()
    };
    let initial = WeightVector::new(vec![0.4, 0.3, 0.3]).unwrap();
    let mut t1_sum = 0.0;
    let mut t2_sum = 0.0;
    let mut count = 0u32;
    for i in 0..100u64 {
        let draws = draw_uniform(SeedSpec::new(555, i), 2, DrawConvention::Lambda);
        let mut state = ModelState::Angles(angles_from_weights(&initial));
        let mut resolved = [None::<f64>, None::<f64>];
        for s in 1..=200_000u64 {
            state = step(&state, &model, &draws, &cfg).unwrap();
            let angles = match &state {
                ModelState::Angles(a) => a.as_slice(),
                _ => unreachable!(),
            };
            for (k, theta) in angles.iter().enumerate() {
                let decided = (0.5 * theta).sin().powi(2);
                if resolved[k].is_none() && (decided < 1e-3 || decided > 1.0 - 1e-3) {
                    resolved[k] = Some(s as f64 * cfg.dt);
                }
            }
            if resolved.iter().all(|r| r.is_some()) {
                break;
            }
        }
        if let [Some(t1), Some(t2)] = resolved {
            t1_sum += t1;
            t2_sum += t2;
            count += 1;
        }
    }
    assert!(count >= 95, "only {count} trajectories resolved both stages");
    let ratio = (t2_sum / count as f64) / (t1_sum / count as f64);
    assert!(
        ratio >= 1.0 / (2.0 * eta),
        "stage-time ratio {ratio} below {}",
        1.0 / (2.0 * eta)
    );
}

/// O(η) law: the final deviation at η = 0.2 exceeds the one at η = 0.05 by
/// more than three combined standard errors.
#[test]
fn sequential_deviation_grows_with_eta() {
    let initial = WeightVector::new(vec![0.2, 0.1, 0.7]).unwrap();
    let n = 10_000u64;
    let cfg = IntegratorConfig {
        dt: 0.005,
        ..IntegratorConfig::default()
    };
    let dev = |eta: f64| {
        let model = ModelSpec::sequential(3, 1.0, eta).unwrap();
        run_ensemble(&initial, &model, &cfg, n, 777)
            .unwrap()
            .final_deviation()
            .unwrap()
    };
    let (hi, lo) = (dev(0.2), dev(0.05));
    let se = binomial_standard_error(&initial, n);
    let combined = (2.0 * se * se).sqrt();
    assert!(
        hi - lo > 3.0 * combined,
        "gap {} vs 3x combined SE {}",
        hi - lo,
        3.0 * combined
    );
}

#[test]
fn uniform_draws_have_uniform_statistics() {
    let n = 1_000_000usize;
    let draws = draw_uniform(SeedSpec::new(8080, 0), n, DrawConvention::Xi);
    let mean: f64 = draws.values().iter().sum::<f64>() / n as f64;
    assert!(mean.abs() < 0.004, "mean {mean}");

    let mut values = draws.values().to_vec();
    let ks = ks_statistic_uniform(&mut values, -1.0, 1.0);
    let critical = 1.95 / (n as f64).sqrt();
    assert!(ks < critical, "ks {ks} vs critical {critical}");
}

/// The distribution of Λ(x) does not depend on x.
#[test]
fn field_distribution_is_x_independent() {
    let spec = FieldSpec::new(0.35, 16, 8).unwrap();
    let n = 50_000;
    let sample_at = |x: f64, stream: u64| -> Vec<f64> {
        let mut rng = SeedSpec::new(987, stream).rng();
        (0..n)
            .map(|_| {
                let d: Vec<f64> = (0..spec.draw_count())
                    .map(|_| rng.gen_range(-1.0..1.0))
                    .collect();
                random_field_sample(&StochasticDraw::xi(d).unwrap(), &spec, x)
            })
            .collect()
    };
    let mut a = sample_at(0.15, 0);
    let mut b = sample_at(0.77, 1);
    let ks = ks_two_sample(&mut a, &mut b);
    // 99% two-sample critical value c(0.01)·sqrt(2/n), doubled.
    let bound = 2.0 * 1.628 * (2.0 / n as f64).sqrt();
    assert!(ks < bound, "ks {ks} vs bound {bound}");
}

/// Near η = 0 the field density is flat at 1/2 over the interior of [−1,1].
#[test]
fn field_density_flattens_for_small_eta() {
    let spec = FieldSpec::new(0.01, 16, 8).unwrap();
    let hist = field_pdf_histogram(&spec, 0.3, 50_000, 50, SeedSpec::new(13, 0)).unwrap();
    let centers = hist.centers();
    let densities = hist.densities();
    for (c, d) in centers.iter().zip(&densities) {
        if c.abs() <= 0.8 {
            assert!((d - 0.5).abs() < 0.05, "density {d} at {c}");
        }
    }
}

/// Per-step renormalized weights stay normalized through a whole trajectory.
#[test]
fn normalized_evolution_preserves_weight_sum() {
    let model = ModelSpec::bisection(4, 1.0, 0.3).unwrap();
    let cfg = IntegratorConfig {
        dt: 0.01,
        ..IntegratorConfig::default()
    };
    let initial = WeightVector::new(vec![0.3, 0.2, 0.15, 0.35]).unwrap();
    let rec = run_trajectory(&initial, &model, &cfg, SeedSpec::new(21, 0)).unwrap();
    for w in &rec.weights {
        let sum: f64 = w.as_slice().iter().sum();
        assert!((sum - 1.0).abs() <= 1e-12);
    }
}
