//! Acceptance battery: every release gate in one target, one pass/fail
//! line per criterion. Budgeted criteria time themselves; the heavy Monte
//! Carlo ones serialize on a mutex so wall-clock limits stay honest under
//! parallel test execution.

use orthoplanar::analytic;
use orthoplanar::bessel::{bessel_i0, bessel_i1, i0_dt_lightcone};
use orthoplanar::mc;
use orthoplanar::quad::integrate_symmetric_cusped;
use orthoplanar::verify::{self, HydroMode};
use orthoplanar::{ModelParams, RegionClass};
use std::process::Command;
use std::sync::Mutex;
use std::time::Instant;

static HEAVY: Mutex<()> = Mutex::new(());

fn heavy_guard() -> std::sync::MutexGuard<'static, ()> {
    HEAVY.lock().unwrap_or_else(|e| e.into_inner())
}

fn params(lambda: f64, c: f64, p: f64, q: f64) -> ModelParams {
    ModelParams::new(lambda, c, p, q).unwrap()
}

#[test]
fn criterion_1_special_case_identities() {
    let grid = [0.5, 1.0, 2.0];
    let tol = 1e-12;
    for lambda in grid {
        for c in grid {
            for t in grid {
                for p in [0.1, 0.25, 0.4, 0.5] {
                    let got = analytic::prob_boundary(&params(lambda, c, p, p), t);
                    let want = 2.0 * (-lambda * t * (1.0 - p)).exp() - (-lambda * t).exp();
                    assert!(
                        ((got - want) / want).abs() <= tol,
                        "balanced boundary mass: lambda={lambda} t={t} p={p}: {got} vs {want}"
                    );
                }
                let got = analytic::prob_boundary(&params(lambda, c, 0.5, 0.5), t);
                let want = 2.0 * (-0.5 * lambda * t).exp() - (-lambda * t).exp();
                assert!(((got - want) / want).abs() <= tol);
                for (p, q) in [(0.3, 0.7), (0.5, 0.5), (0.8, 0.2), (1.0, 0.0)] {
                    let got = analytic::prob_diagonals(&params(lambda, c, p, q), t);
                    let want = (-lambda * t).exp();
                    assert!(
                        ((got - want) / want).abs() <= tol,
                        "diagonal mass without reflection: p={p} q={q}: {got} vs {want}"
                    );
                }
            }
        }
    }
    println!("ACCEPTANCE 1 special-case identities: PASS");
}

#[test]
fn criterion_2_quadrature_consistency() {
    let start = Instant::now();
    for (p, q) in verify::reference_grid() {
        for t in verify::reference_times() {
            let report = verify::quadrature_consistency(&params(1.0, 1.0, p, q), t);
            assert!(report.all_pass(), "p={p} q={q} t={t}: {}", report.to_json());
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}, budget 10s");
    println!("ACCEPTANCE 2 quadrature consistency ({elapsed:?}): PASS");
}

#[test]
fn criterion_3_fourier_consistency() {
    let start = Instant::now();
    for (p, q) in verify::reference_grid() {
        for t in verify::reference_times() {
            let report =
                verify::fourier_consistency(&params(1.0, 1.0, p, q), t, &[0.5, 1.0, 2.0, 5.0]);
            assert!(report.all_pass(), "p={p} q={q} t={t}: {}", report.to_json());
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}, budget 30s");
    println!("ACCEPTANCE 3 fourier consistency ({elapsed:?}): PASS");
}

#[test]
fn criterion_4_monte_carlo_component_masses() {
    let _guard = heavy_guard();
    let start = Instant::now();
    let (t, n, seed) = (1.0, 1_000_000u64, 0xACCE5541u64);
    for (pair_idx, (p, q)) in verify::reference_grid().into_iter().enumerate() {
        let pr = params(1.0, 1.0, p, q);
        let reflection_free = pr.is_reflection_free();
        let oblique_noref = reflection_free && p > 0.0 && p < 1.0;
        let oblique_pq = p == q;
        // One simulation pass scores every event: k=0 boundary, 1 diagonals,
        // 2 occupation=0, 3 occupation=t, 4 oblique side.
        let ests = mc::empirical_charfn_batch(
            &pr,
            t,
            n,
            seed + pair_idx as u64,
            5,
            move |o, k| {
                let hit = match k {
                    0 => matches!(
                        o.region,
                        RegionClass::Vertex { .. } | RegionClass::SideInterior { .. }
                    ),
                    1 => matches!(
                        o.region,
                        RegionClass::Vertex { .. } | RegionClass::DiagonalInterior { .. }
                    ),
                    2 => o.t_vertical == 0.0,
                    3 => o.t_vertical == t,
                    _ => o.on_oblique_side(),
                };
                if hit {
                    Some(0.0)
                } else {
                    None
                }
            },
        );
        let freq = |k: usize| ests[k].0;
        let gate = |name: &str, k: usize, want: f64| {
            let z = freq(k).z_against(want);
            assert!(
                z <= 4.0,
                "p={p} q={q} {name}: freq {} vs {want}, z={z:.2}",
                freq(k).mean
            );
        };
        gate("boundary", 0, analytic::prob_boundary(&pr, t));
        gate("diagonals", 1, analytic::prob_diagonals(&pr, t));
        gate("never-vertical", 2, analytic::t_endpoint_mass(&pr, t));
        gate("always-vertical", 3, analytic::t_endpoint_mass(&pr, t));
        if oblique_noref {
            gate("oblique", 4, analytic::oblique_prob_noref(&pr, t).unwrap());
        }
        if oblique_pq {
            gate("oblique", 4, analytic::oblique_prob_pq(&pr, t).unwrap());
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}, budget 2min");
    println!("ACCEPTANCE 4 Monte Carlo component masses ({elapsed:?}): PASS");
}

#[test]
fn criterion_5_interior_charfn_against_mc() {
    let _guard = heavy_guard();
    let start = Instant::now();
    let (t, n, seed) = (1.0, 10_000_000u64, 0xACCE5542u64);
    let points = [
        (0.5, 0.5),
        (1.0, 0.5),
        (2.0, 1.0),
        (1.0, 0.0), // root collision at p=1/2: exercises the perturbed path
        (0.0, 1.5),
        (3.0, -2.0),
    ];
    for p in [0.3, 0.5, 0.7] {
        let pr = params(1.0, 1.0, p, 1.0 - p);
        let ests = mc::empirical_charfn_batch(&pr, t, n, seed, points.len(), move |o, k| {
            let (alpha, beta) = points[k];
            Some(alpha * o.final_state.x + beta * o.final_state.y)
        });
        for (k, &(alpha, beta)) in points.iter().enumerate() {
            let want = analytic::interior_charfn_noref(&pr, t, alpha, beta).unwrap();
            let (re, im) = &ests[k];
            assert!(
                (re.mean - want.re).abs() <= 4.0 * re.stderr,
                "p={p} ({alpha},{beta}) re: {} vs {} (se {})",
                re.mean,
                want.re,
                re.stderr
            );
            assert!(
                (im.mean - want.im).abs() <= 4.0 * im.stderr,
                "p={p} ({alpha},{beta}) im: {} vs {} (se {})",
                im.mean,
                want.im,
                im.stderr
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}, budget 5min");
    println!("ACCEPTANCE 5 interior characteristic function vs MC ({elapsed:?}): PASS");
}

#[test]
fn criterion_6_pde_residuals() {
    for (p, q) in [(0.3, 0.5), (0.2, 0.3), (0.25, 0.25)] {
        let report = verify::pde_residuals(&params(1.0, 1.0, p, q), 1.0, 25);
        assert!(report.all_pass(), "p={p} q={q}: {}", report.to_json());
    }
    println!("ACCEPTANCE 6 PDE residuals: PASS");
}

#[test]
fn criterion_7_hydrodynamic_limit() {
    let _guard = heavy_guard();
    let start = Instant::now();
    for (i, (p, q)) in [(0.5, 0.5), (0.6, 0.2), (0.3, 0.3)].into_iter().enumerate() {
        let report = verify::hydro_convergence(
            p,
            q,
            1.0,
            &[10.0, 20.0, 30.0],
            200_000,
            0xACCE5543 + i as u64,
            HydroMode::Strict,
        );
        assert!(report.all_pass(), "p={p} q={q}: {}", report.to_json());
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}, budget 5min");
    println!("ACCEPTANCE 7 hydrodynamic limit ({elapsed:?}): PASS");
}

/// Plain power series with compensated summation: an oracle independent of
/// the two-regime production evaluator (all terms positive, so f64 keeps
/// ~2e-15 relative accuracy even at x=100).
fn i0_series_oracle(x: f64) -> f64 {
    let z = 0.25 * x * x;
    let (mut sum, mut comp, mut term) = (1.0f64, 0.0f64, 1.0f64);
    for k in 1..400 {
        term *= z / ((k * k) as f64);
        let t = sum + term;
        comp += if sum.abs() >= term { (sum - t) + term } else { (term - t) + sum };
        sum = t;
        if term < f64::EPSILON * sum {
            break;
        }
    }
    sum + comp
}

fn i1_series_oracle(x: f64) -> f64 {
    let z = 0.25 * x * x;
    let (mut sum, mut comp, mut term) = (1.0f64, 0.0f64, 1.0f64);
    for k in 1..400 {
        term *= z / ((k * (k + 1)) as f64);
        let t = sum + term;
        comp += if sum.abs() >= term { (sum - t) + term } else { (term - t) + sum };
        sum = t;
        if term < f64::EPSILON * sum {
            break;
        }
    }
    0.5 * x * (sum + comp)
}

#[test]
fn criterion_8_bessel_kernel() {
    let mut x = 0.0f64;
    while x <= 100.0 {
        let i0 = bessel_i0(x).unwrap();
        let i1 = bessel_i1(x).unwrap();
        let (o0, o1) = (i0_series_oracle(x), i1_series_oracle(x));
        assert!(
            ((i0 - o0) / o0).abs() <= 1e-12,
            "I0({x}): {i0} vs oracle {o0}"
        );
        let gap1 = if x == 0.0 { (i1 - o1).abs() } else { ((i1 - o1) / o1).abs() };
        assert!(gap1 <= 1e-12, "I1({x}): {i1} vs oracle {o1}");
        x += 0.25;
    }

    // Integral identities for the light-cone kernel.
    for k in [0.5, 1.0, 2.0] {
        for c in [0.5, 1.0, 2.0] {
            for t in [0.5, 1.0, 2.0] {
                let ct = c * t;
                let mass = integrate_symmetric_cusped(
                    ct,
                    |w| bessel_i0(k * (ct * ct - w * w).sqrt()).unwrap(),
                    1e-13,
                );
                let want = ((k * ct).exp() - (-k * ct).exp()) / k;
                assert!(
                    ((mass - want) / want).abs() <= 1e-9,
                    "I0 mass at K={k} c={c} t={t}: {mass} vs {want}"
                );

                let dt_mass = integrate_symmetric_cusped(
                    ct,
                    |w| i0_dt_lightcone(k, c, t, w).unwrap(),
                    1e-13,
                );
                let want_dt = c * ((k * ct).exp() + (-k * ct).exp() - 2.0);
                assert!(
                    ((dt_mass - want_dt) / want_dt).abs() <= 1e-9,
                    "dI0/dt mass at K={k} c={c} t={t}: {dt_mass} vs {want_dt}"
                );
            }
        }
    }
    println!("ACCEPTANCE 8 Bessel kernel: PASS");
}

#[test]
fn criterion_9_binary_determinism_across_thread_counts() {
    let _guard = heavy_guard();
    let bin = env!("CARGO_BIN_EXE_orthoplanar");
    let run = |args: &[&str]| {
        let out = Command::new(bin).args(args).output().expect("binary runs");
        assert!(
            out.status.code() == Some(0),
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    let sim = |threads: &str| {
        run(&[
            "simulate", "--n-paths", "50", "--seed", "31", "--t", "2", "--p", "0.3", "--q", "0.4",
            "--concat", "--threads", threads,
        ])
    };
    assert_eq!(sim("1"), sim("4"), "simulate output depends on thread count");

    let ver = |threads: &str| {
        run(&[
            "verify", "--suite", "hydro", "--n", "3000", "--seed", "17", "--mode", "survey",
            "--threads", threads,
        ])
    };
    assert_eq!(ver("1"), ver("4"), "verify output depends on thread count");
    println!("ACCEPTANCE 9 binary determinism across thread counts: PASS");
}
