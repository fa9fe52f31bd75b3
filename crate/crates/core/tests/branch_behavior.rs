//! Cross-module checks of tracked quantities along real branches.

use semistable::analysis::{
    ball_integral, diagnose_boundedness, track, QuantitySpec, TailBehavior,
};
use semistable::estimates::GChoice;
use semistable::nonlinearity::Nonlinearity;
use semistable::radial::{branch_sweep, SweepOptions};

fn sweep(f: &Nonlinearity, n: u32, grid: &[f64]) -> semistable::radial::Branch {
    let opts = SweepOptions { eigen: None, threads: 2, ..Default::default() };
    branch_sweep(f, n, grid, &opts)
}

#[test]
fn h_integral_matches_closed_form_at_the_disk_fold() {
    // At the fold of the n = 2 exponential branch, the tracked
    // ∫ H_{f,0}(u) dx must equal the direct ball integral of
    // (e^{3u} - e^u)/2 over the same profile.
    let f = Nonlinearity::exponential();
    let fold = 2.0 * (2.0f64).ln();
    let grid = vec![0.5, 1.0, fold];
    let b = sweep(&f, 2, &grid);
    let t = track(&f, &b, &[QuantitySpec::IntHfBeta { beta: 0.0 }], 1e-11).unwrap();
    let tracked = t.columns[0].values[2].unwrap();
    let profile = b.points[2].profile.as_ref().unwrap();
    let direct = ball_integral(profile, &|_, u, _| ((3.0 * u).exp() - u.exp()) / 2.0);
    assert!(
        (tracked - direct).abs() <= 1e-8 * direct.abs(),
        "{tracked} vs {direct}"
    );
}

#[test]
fn h_integral_is_nondecreasing_along_the_minimal_branch() {
    let f = Nonlinearity::exponential();
    let grid: Vec<f64> = (1..=13).map(|k| k as f64 * 0.1).collect();
    let b = sweep(&f, 2, &grid);
    for beta in [0.0, 0.5] {
        let t = track(&f, &b, &[QuantitySpec::IntHfBeta { beta }], 1e-10).unwrap();
        let vals: Vec<f64> = t.columns[0].values.iter().map(|v| v.unwrap()).collect();
        for w in vals.windows(2) {
            assert!(w[1] >= w[0] * (1.0 - 1e-10), "beta={beta}: {w:?}");
        }
    }
}

#[test]
fn tracked_integrals_vanish_at_the_trivial_end() {
    let f = Nonlinearity::exponential();
    let grid = vec![1e-4, 0.5];
    let b = sweep(&f, 3, &grid);
    let t = track(
        &f,
        &b,
        &[
            QuantitySpec::IntHfBeta { beta: 0.5 },
            QuantitySpec::IntNedev,
            QuantitySpec::IntFfPrime,
            QuantitySpec::IntUf,
        ],
        1e-10,
    )
    .unwrap();
    for col in &t.columns {
        let near_zero = col.values[0].unwrap();
        let later = col.values[1].unwrap();
        // f f' -> f(0) f'(0) vol(B) as u -> 0; the genuinely u-weighted
        // integrals collapse outright
        if col.label == "int_f_fprime" {
            let vol = 4.0 * std::f64::consts::PI / 3.0;
            assert!((near_zero - vol).abs() < 1e-2, "{}: {near_zero}", col.label);
        } else {
            assert!(near_zero.abs() < 1e-3, "{}: {near_zero}", col.label);
            assert!(near_zero < later, "{}", col.label);
        }
    }
}

#[test]
fn lemma21_h_integral_stays_nonpositive_on_minimal_branch() {
    let f = Nonlinearity::exponential();
    let grid: Vec<f64> = (1..=13).map(|k| k as f64 * 0.1).collect();
    let b = sweep(&f, 2, &grid);
    let t = track(
        &f,
        &b,
        &[QuantitySpec::IntLemma21H { g: GChoice::GEqualsF }],
        1e-10,
    )
    .unwrap();
    for (p, v) in b.points.iter().zip(&t.columns[0].values) {
        let v = v.unwrap();
        assert!(v <= 1e-8 * (1.0 + v.abs()), "m={}: int H = {v}", p.m);
    }
}

#[test]
fn supercritical_branch_sup_norm_grows_while_h_integral_converges() {
    // n = 11: u(0) = m diverges logarithmically in λ* - λ, while
    // ∫ H_{f,β}(u) dx saturates at its singular-profile value
    // ω/(2+2β) (1/(n-2(3+2β)) - 1/(n-2)) — the uniform bound is
    // dimension-independent.
    let f = Nonlinearity::exponential();
    let grid: Vec<f64> = (1..=140).map(|k| k as f64 * 0.25).collect();
    let b = sweep(&f, 11, &grid);
    assert!(b.monotone);
    let lambdas: Vec<f64> = b.points.iter().map(|p| p.lambda).collect();

    let sup: Vec<f64> = b.points.iter().map(|p| p.m).collect();
    let d = diagnose_boundedness(&lambdas, &sup, b.lambda_star).unwrap();
    assert_eq!(d.behavior, TailBehavior::GrowsLikeLog, "{:?}", d.behavior);

    let beta = 0.9;
    let t = track(&f, &b, &[QuantitySpec::IntHfBeta { beta }], 1e-10).unwrap();
    let vals: Vec<f64> = t.columns[0].values.iter().map(|v| v.unwrap()).collect();
    let d = diagnose_boundedness(&lambdas, &vals, b.lambda_star).unwrap();
    let omega = semistable::analysis::ball_surface(11);
    let limit = omega / (2.0 + 2.0 * beta)
        * (1.0 / (11.0 - 2.0 * (3.0 + 2.0 * beta)) - 1.0 / 9.0);
    match d.behavior {
        TailBehavior::ConvergesTo(v) => {
            assert!((v - limit).abs() < 0.01 * limit, "{v} vs singular limit {limit}");
        }
        other => panic!("expected convergence to {limit}, got {other:?}"),
    }
}
