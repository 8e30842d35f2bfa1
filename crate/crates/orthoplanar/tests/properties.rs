//! Randomized invariants over the public API.

use num_complex::Complex64;
use orthoplanar::analytic;
use orthoplanar::model::{sample_turn, Direction, TurnKind};
use orthoplanar::sim::Trajectory;
use orthoplanar::{simulate, simulate_with_trajectory, Axis, ModelParams, RegionClass};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_pq() -> impl Strategy<Value = (f64, f64)> {
    (0.0..1.0f64, 0.0..1.0f64).prop_map(|(a, b)| (a, b * (1.0 - a)))
}

fn arb_params() -> impl Strategy<Value = ModelParams> {
    (arb_pq(), 0.05..5.0f64, 0.1..4.0f64)
        .prop_map(|((p, q), lambda, c)| ModelParams::new(lambda, c, p, q).unwrap())
}

/// Small enough horizons that a single case stays cheap even at lambda=5.
fn arb_time() -> impl Strategy<Value = f64> {
    0.05..2.5f64
}

proptest! {
    #[test]
    fn turn_algebra_inverts(dir_idx in 0u8..4) {
        let d = Direction::from_index(dir_idx);
        prop_assert_eq!(d.turned(TurnKind::Reflect).turned(TurnKind::Reflect), d);
        prop_assert_eq!(d.turned(TurnKind::Ccw).turned(TurnKind::Cw), d);
        prop_assert_eq!(d.turned(TurnKind::Cw).turned(TurnKind::Ccw), d);
    }

    #[test]
    fn sample_turn_respects_interval_partition(params in arb_params(), u in 0.0..1.0f64) {
        let kind = sample_turn(&params, u);
        let expected = if u < params.p() {
            TurnKind::Ccw
        } else if u < params.p() + params.q() {
            TurnKind::Cw
        } else {
            TurnKind::Reflect
        };
        prop_assert_eq!(kind, expected);
    }

    #[test]
    fn paths_respect_speed_and_occupation_budget(
        params in arb_params(),
        t in arb_time(),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let o = simulate(&params, t, &mut rng);
        let ct = params.c() * t;
        let slack = 4.0 * f64::EPSILON * ct.max(1.0);
        prop_assert!(o.t_vertical >= 0.0 && o.t_vertical <= t + slack);
        prop_assert!(o.final_state.y.abs() <= params.c() * o.t_vertical + slack);
        prop_assert!(o.final_state.x.abs() <= params.c() * (t - o.t_vertical) + slack);
        prop_assert!((o.final_state.x + o.final_state.y).abs() <= ct + slack);
        prop_assert!((o.final_state.x - o.final_state.y).abs() <= ct + slack);
    }

    #[test]
    fn region_labels_agree_with_coordinates(
        params in arb_params(),
        t in arb_time(),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let o = simulate(&params, t, &mut rng);
        let ct = params.c() * t;
        let (x, y) = (o.final_state.x, o.final_state.y);
        // Accumulated over n+1 segments, so allow a few ulp per segment.
        let slack = 64.0 * f64::EPSILON * ct.max(1.0) * (o.final_state.n_events + 1) as f64;
        match o.region {
            RegionClass::Vertex { dir } => {
                let (sx, sy) = dir.step();
                prop_assert_eq!(x, params.c() * t * sx);
                prop_assert_eq!(y, params.c() * t * sy);
            }
            RegionClass::SideInterior { .. } => {
                let on_rising = ((x + y).abs() - ct).abs() <= slack;
                let on_falling = ((x - y).abs() - ct).abs() <= slack;
                prop_assert!(on_rising || on_falling, "({x},{y}) not on the square at ct={ct}");
            }
            RegionClass::DiagonalInterior { axis } => {
                match axis {
                    Axis::Horizontal => prop_assert_eq!(y, 0.0),
                    Axis::Vertical => prop_assert_eq!(x, 0.0),
                }
            }
            RegionClass::Interior => {
                prop_assert!((x + y).abs() < ct && (x - y).abs() < ct);
            }
        }
    }

    #[test]
    fn trajectory_csv_round_trips_bitwise(
        params in arb_params(),
        t in arb_time(),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, traj) = simulate_with_trajectory(&params, t, &mut rng);
        let csv = traj.to_csv();
        let parsed = Trajectory::from_csv(&csv).unwrap();
        prop_assert_eq!(parsed.to_csv(), csv);
    }

    #[test]
    fn boundary_mass_accounting_is_consistent(params in arb_params(), t in arb_time()) {
        let e_lt = (-params.lambda() * t).exp();
        let sides = 4.0 * analytic::prob_side_interior(&params, t);
        let boundary = analytic::prob_boundary(&params, t);
        // Shared bracket makes the identity hold to rounding.
        prop_assert!((sides + e_lt - boundary).abs() <= 4.0 * f64::EPSILON * boundary);
        // Each probability is a probability.
        for v in [boundary, sides / 4.0, analytic::prob_diagonals(&params, t)] {
            prop_assert!((0.0..=1.0).contains(&v), "{v} outside [0,1]");
        }
        prop_assert!(analytic::prob_diagonals(&params, t) >= e_lt - f64::EPSILON);
    }

    #[test]
    fn densities_are_nonnegative_on_their_supports(
        params in arb_params(),
        t in arb_time(),
        u in -0.999..0.999f64,
        v in 0.001..0.999f64,
    ) {
        let ct = params.c() * t;
        prop_assert!(analytic::side_density(&params, t, u * ct).unwrap() >= 0.0);
        prop_assert!(analytic::t_density(&params, t, v * t).unwrap() >= 0.0);
        if !params.is_reflection_free() {
            prop_assert!(analytic::diag_density(&params, t, u * ct).unwrap() >= 0.0);
            prop_assert!(analytic::vertical_side_density(&params, t, u * ct).unwrap() >= 0.0);
        }
    }

    #[test]
    fn densities_reject_points_outside_the_support(
        params in arb_params(),
        t in arb_time(),
        excess in 1.0001..3.0f64,
    ) {
        let ct = params.c() * t;
        prop_assert!(analytic::side_density(&params, t, excess * ct).is_err());
        prop_assert!(analytic::t_density(&params, t, excess * t).is_err());
        prop_assert!(analytic::t_density(&params, t, -0.1 * t).is_err());
    }

    #[test]
    fn charfn_modulus_peaks_at_zero_phase(
        params in arb_params(),
        t in arb_time(),
        alpha in -30.0..30.0f64,
    ) {
        let tol = 1e-10;
        prop_assert!(
            analytic::side_charfn(&params, t, alpha).norm()
                <= analytic::side_charfn(&params, t, 0.0).norm() + tol
        );
        prop_assert!(
            analytic::t_charfn(&params, t, alpha).norm()
                <= analytic::t_charfn(&params, t, 0.0).norm() + tol
        );
        if !params.is_reflection_free() {
            prop_assert!(
                analytic::diag_charfn(&params, t, alpha).norm()
                    <= analytic::diag_charfn(&params, t, 0.0).norm() + tol
            );
        }
    }

    #[test]
    fn position_charfn_is_bounded_by_total_mass(
        p in 0.001..0.999f64,
        t in arb_time(),
        alpha in -20.0..20.0f64,
        beta in -20.0..20.0f64,
    ) {
        let params = ModelParams::new(1.0, 1.0, p, 1.0 - p).unwrap();
        let phi = analytic::interior_charfn_noref(&params, t, alpha, beta).unwrap();
        prop_assert!(phi.norm() <= 1.0 + 1e-7, "|phi|={} at ({alpha},{beta})", phi.norm());
        let at_zero = analytic::interior_charfn_noref(&params, t, 0.0, 0.0).unwrap();
        prop_assert!((at_zero - Complex64::new(1.0, 0.0)).norm() <= 1e-7);
    }

    #[test]
    fn occupation_charfn_interpolates_its_endpoint_masses(
        params in arb_params(),
        t in arb_time(),
    ) {
        // At alpha = 0 the charfn is the total mass 1.
        let phi0 = analytic::t_charfn(&params, t, 0.0);
        prop_assert!((phi0.re - 1.0).abs() <= 1e-12 && phi0.im.abs() <= 1e-12);
    }
}
