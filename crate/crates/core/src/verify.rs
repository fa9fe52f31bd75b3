//! The acceptance suite: every criterion the artifact must satisfy, run
//! programmatically. The CLI `verify` subcommand prints one JSON line per
//! criterion; the `acceptance` integration test asserts each one.

use crate::analysis::{diagnose_boundedness, track, QuantitySpec};
use crate::asymptotics::{estimate_tau, profile, ProfileOptions};
use crate::eigen::{principal_eigenvalue, EigenControls};
use crate::estimates::{theorem11_closed_form_check, GChoice, Multiplier};
use crate::nonlinearity::Nonlinearity;
use crate::radial::{branch_sweep, integrate_profile, verify_stability_inequality, Branch, OdeControls, SweepOptions};
use crate::verdict::{bootstrap_exponents, regularity_verdict, EstimateCertificate, Clause, Threshold};
use serde::Serialize;

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub threads: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { threads: 4, seed: 0x5EED_0001 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub details: String,
}

/// Collects pass/fail checks with human-readable notes.
struct Checker {
    ok: bool,
    notes: Vec<String>,
}

impl Checker {
    fn new() -> Self {
        Checker { ok: true, notes: Vec::new() }
    }

    fn check(&mut self, cond: bool, label: &str) {
        if !cond {
            self.ok = false;
            self.notes.push(format!("FAIL: {label}"));
        }
    }

    fn note(&mut self, text: String) {
        self.notes.push(text);
    }

    fn finish(self, id: u32, name: &str) -> CriterionResult {
        CriterionResult {
            id,
            name: name.to_string(),
            passed: self.ok,
            details: self.notes.join(" | "),
        }
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Criterion 1: the verdict engine reproduces the closed-form dimension
/// thresholds.
pub fn criterion1_thresholds(_cfg: &VerifyConfig) -> CriterionResult {
    let mut c = Checker::new();

    let exp_profile = profile(&Nonlinearity::exponential(), ProfileOptions::default());
    let v = regularity_verdict(&exp_profile, 9).expect("verdict");
    match v.thresholds.linf.threshold {
        Threshold::Below(x) => {
            c.note(format!("exp linf n_sup = {x:.12}"));
            c.check(close(x, 10.0, 1e-9), "exp n_sup = 10");
        }
        other => c.check(false, &format!("exp threshold finite, got {other:?}")),
    }

    for p in [2.0, 3.0, 5.0] {
        let f = Nonlinearity::power_shifted(p).unwrap();
        let prof = profile(&f, ProfileOptions::default());
        let v = regularity_verdict(&prof, 9).expect("verdict");
        let want = 2.0 * (1.0 + 2.0 * p / (p - 1.0) + 2.0 * (p / (p - 1.0)).sqrt());
        let tau = (p - 1.0) / p;
        let alt = 2.0 + 4.0 / tau + 4.0 / tau.sqrt();
        c.check(
            (want - alt).abs() <= 1e-12 * want,
            &format!("p={p}: CR closed form equals Prop 1.2(c) value at tau=(p-1)/p"),
        );
        let got = v.thresholds.linf.threshold.value().unwrap_or(f64::NAN);
        c.note(format!("p={p}: n_sup = {got:.12}"));
        c.check(close(got, want, 1e-9), &format!("p={p}: n_sup within 1e-9"));
    }

    let tau_b = 2.0 / (9.0 - 2.0 * 14.0f64.sqrt());
    c.check(
        close(4.0 + 2.0 / tau_b + 4.0 / tau_b.sqrt(), 9.0, 1e-9),
        "4+2/tau+4/sqrt(tau) = 9 at tau = 2/(9-2sqrt(14))",
    );
    let tau_c: f64 = 16.0 / 9.0;
    c.check(
        close(6.0 + 4.0 / tau_c.sqrt(), 9.0, 1e-9),
        "6+4/sqrt(tau) = 9 at tau = 16/9",
    );

    let nedev = EstimateCertificate::new(2.0, 1.0, Clause::Nedev, false).unwrap();
    c.check(close(nedev.linf_n_sup(), 4.0, 1e-9), "Nedev L-infinity n_sup = 4");
    c.check(close(nedev.h10_n_sup(), 6.0, 1e-9), "Nedev H^1_0 n_sup = 6");

    c.finish(1, "threshold regression table")
}

/// Criterion 2: numeric tau estimation on parsed expressions.
pub fn criterion2_tau(_cfg: &VerifyConfig) -> CriterionResult {
    let mut c = Checker::new();
    let e = estimate_tau(&Nonlinearity::parse("exp(t)").unwrap(), 1e8, 5);
    c.note(format!("exp(t): tau = [{:?}, {:?}]", e.tau_minus, e.tau_plus));
    c.check(
        e.tau_minus.map(|v| close(v, 1.0, 1e-3)).unwrap_or(false)
            && e.tau_plus.map(|v| close(v, 1.0, 1e-3)).unwrap_or(false),
        "exp(t) within 1e-3 of 1",
    );
    let p = estimate_tau(&Nonlinearity::parse("(1+t)^3").unwrap(), 1e8, 5);
    c.note(format!("(1+t)^3: tau = [{:?}, {:?}]", p.tau_minus, p.tau_plus));
    c.check(
        p.tau_minus.map(|v| close(v, 2.0 / 3.0, 1e-3)).unwrap_or(false)
            && p.tau_plus.map(|v| close(v, 2.0 / 3.0, 1e-3)).unwrap_or(false),
        "(1+t)^3 within 1e-3 of 2/3",
    );
    let ll = estimate_tau(&Nonlinearity::lin_log().unwrap(), 1e8, 5);
    c.note(format!("linlog: tau_plus = {:?}", ll.tau_plus));
    c.check(
        ll.tau_plus.map(|v| v <= 1e-3).unwrap_or(false),
        "linlog tail estimate <= 1e-3",
    );
    c.finish(2, "tau estimation")
}

/// Criterion 3: H_{f,beta} quadrature against the exponential closed form.
pub fn criterion3_h_quadrature(_cfg: &VerifyConfig) -> CriterionResult {
    let mut c = Checker::new();
    let f = Nonlinearity::exponential();
    let grid: Vec<f64> = (0..=100).map(|k| k as f64 * 0.1).collect();
    for beta in [0.0, 0.5, 0.9] {
        match theorem11_closed_form_check(&f, beta, &grid, 1e-11) {
            Ok(worst) => {
                c.note(format!("beta={beta}: max rel err {worst:.3e}"));
                c.check(worst < 1e-8, &format!("beta={beta}: rel err < 1e-8"));
            }
            Err(e) => c.check(false, &format!("beta={beta}: {e}")),
        }
    }
    c.finish(3, "H_{f,beta} quadrature vs closed form")
}

/// Criterion 4: the disk Gelfand problem against the Liouville family.
pub fn criterion4_gelfand_disk(cfg: &VerifyConfig) -> CriterionResult {
    let mut c = Checker::new();
    let f = Nonlinearity::exponential();
    let grid: Vec<f64> = (1..=60).map(|k| k as f64 * 0.1).collect();
    let opts = SweepOptions { eigen: None, threads: cfg.threads, ..Default::default() };
    let b = branch_sweep(&f, 2, &grid, &opts);
    c.note(format!(
        "lambda_star = {:.10}, fold_m = {:?}",
        b.lambda_star, b.fold_m
    ));
    c.check(close(b.lambda_star, 2.0, 1e-5), "lambda_star = 2 within 1e-5");
    match b.fold_m {
        Some(fold) => c.check(
            close(fold, 2.0 * (2.0f64).ln(), 1e-4),
            "fold at m = 2 ln 2 within 1e-4",
        ),
        None => c.check(false, "fold not found"),
    }
    c.finish(4, "Gelfand n=2 oracle")
}

/// Criterion 5: singular-solution limit lambda -> 2(n-2) and supercritical
/// monotonicity.
pub fn criterion5_singular_limit(cfg: &VerifyConfig) -> CriterionResult {
    let mut c = Checker::new();
    let f = Nonlinearity::exponential();
    for n in [3u32, 4, 5, 6, 7, 8, 9, 11] {
        match integrate_profile(&f, n, 30.0, &OdeControls::default()) {
            Ok(p) => {
                let want = 2.0 * (n as f64 - 2.0);
                c.note(format!("n={n}: lambda(30) = {:.6}", p.lambda));
                c.check(
                    (p.lambda - want).abs() <= 0.01 * want,
                    &format!("n={n}: lambda(30) within 1% of {want}"),
                );
            }
            Err(e) => c.check(false, &format!("n={n}: {e}")),
        }
    }
    let grid: Vec<f64> = (1..=160).map(|k| k as f64 * 0.25).collect();
    let opts = SweepOptions { eigen: None, threads: cfg.threads, ..Default::default() };
    let b = branch_sweep(&f, 11, &grid, &opts);
    c.check(b.monotone, "n=11 sweep is monotone up to m = 40");
    c.check(b.fold_m.is_none(), "n=11 has no fold for m <= 40");
    c.finish(5, "singular-limit check")
}

fn eigen_sweep(f: &Nonlinearity, n: u32, grid: &[f64], threads: usize) -> Branch {
    let opts = SweepOptions {
        eigen: Some(EigenControls::default()),
        threads,
        ..Default::default()
    };
    branch_sweep(f, n, grid, &opts)
}

fn mu1_at(f: &Nonlinearity, n: u32, m: f64) -> Option<f64> {
    let p = integrate_profile(f, n, m, &OdeControls::default()).ok()?;
    principal_eigenvalue(&p, f, &EigenControls::default()).ok().map(|r| r.mu1)
}

/// Criterion 6: semistability along the minimal branch and the
/// fold/eigenvalue crossing.
pub fn criterion6_semistability(cfg: &VerifyConfig) -> CriterionResult {
    let mut c = Checker::new();
    let f = Nonlinearity::exponential();
    for (n, m_max) in [(2u32, 6.0), (3, 10.0), (9, 16.0)] {
        let count = (m_max / 0.1) as usize;
        let grid: Vec<f64> = (1..=count).map(|k| k as f64 * 0.1).collect();
        let b = eigen_sweep(&f, n, &grid, cfg.threads);
        let Some(fold) = b.fold_m else {
            c.check(false, &format!("n={n}: no fold found"));
            continue;
        };
        c.note(format!("n={n}: fold_m = {fold:.6}, lambda_star = {:.8}", b.lambda_star));
        let minimal = b.minimal_points();
        c.check(minimal.len() >= 5, &format!("n={n}: minimal branch populated"));
        let worst = minimal
            .iter()
            .filter_map(|p| p.mu1)
            .fold(f64::INFINITY, f64::min);
        c.note(format!("n={n}: min mu1 on minimal branch = {worst:.3e}"));
        c.check(worst >= -1e-6, &format!("n={n}: mu1 >= -1e-6 on minimal branch"));

        // locate the mu1 sign crossing near the fold
        let mut lo_m = fold - 0.2;
        let mut hi_m = fold + 0.2;
        let lo_mu = mu1_at(&f, n, lo_m);
        let hi_mu = mu1_at(&f, n, hi_m);
        if lo_mu.map(|v| v > 0.0) != Some(true) || hi_mu.map(|v| v < 0.0) != Some(true) {
            c.check(false, &format!("n={n}: crossing bracket invalid"));
            continue;
        }
        for _ in 0..24 {
            let mid = 0.5 * (lo_m + hi_m);
            match mu1_at(&f, n, mid) {
                Some(v) if v > 0.0 => lo_m = mid,
                Some(_) => hi_m = mid,
                None => break,
            }
        }
        let crossing = 0.5 * (lo_m + hi_m);
        c.note(format!("n={n}: mu1 crossing at m = {crossing:.6}"));
        c.check(
            (crossing - fold).abs() <= 1e-3,
            &format!("n={n}: mu1 = 0 at the fold within 1e-3 in m"),
        );
        match mu1_at(&f, n, fold + 0.05) {
            Some(v) => c.check(v < 0.0, &format!("n={n}: mu1 < 0 just past the fold (got {v:.3e})")),
            None => c.check(false, &format!("n={n}: eigen solve failed past the fold")),
        }
    }
    c.finish(6, "semistability consistency")
}

/// Criterion 7: the Lemma 2.1 sign and the two margin forms.
pub fn criterion7_lemma21(cfg: &VerifyConfig) -> CriterionResult {
    let mut c = Checker::new();
    let cases: Vec<(Nonlinearity, u32, f64)> = vec![
        (Nonlinearity::exponential(), 3, 10.0),
        (Nonlinearity::exponential(), 9, 16.0),
        (Nonlinearity::power_shifted(2.0).unwrap(), 3, 25.0),
    ];
    for (f, n, m_max) in cases {
        let count = (m_max / 0.2) as usize;
        let grid: Vec<f64> = (1..=count).map(|k| k as f64 * 0.2).collect();
        let opts = SweepOptions { eigen: None, threads: cfg.threads, ..Default::default() };
        let b = branch_sweep(&f, n, &grid, &opts);
        let Some(_fold) = b.fold_m else {
            c.check(false, &format!("{} n={n}: no fold", f.description()));
            continue;
        };
        let g = match Multiplier::from_choice(&f, &GChoice::GEqualsF, m_max * 1.01, 1e-10) {
            Ok(g) => g,
            Err(e) => {
                c.check(false, &format!("{} n={n}: {e}", f.description()));
                continue;
            }
        };
        let mut worst_h: f64 = f64::NEG_INFINITY;
        let mut worst_gap: f64 = 0.0;
        let mut checked = 0usize;
        for p in b.minimal_points() {
            let Some(profile) = p.profile.as_ref() else { continue };
            match verify_stability_inequality(profile, &f, &g, 1e-11) {
                Ok(margin) => {
                    let scale = margin.positive_part.abs().max(1e-300);
                    worst_h = worst_h.max(margin.integral_h() / scale);
                    worst_gap = worst_gap.max((margin.direct - margin.lemma_form).abs() / scale);
                    checked += 1;
                }
                Err(e) => c.check(false, &format!("margin at m={}: {e}", p.m)),
            }
        }
        c.note(format!(
            "{} n={n}: {checked} points, max int H / positive part = {worst_h:.3e}, max form gap = {worst_gap:.3e}",
            f.description()
        ));
        c.check(checked >= 5, &format!("{} n={n}: enough minimal points", f.description()));
        c.check(
            worst_h <= 1e-8,
            &format!("{} n={n}: int H(u) <= 1e-8 * positive part", f.description()),
        );
        c.check(
            worst_gap <= 1e-6,
            &format!("{} n={n}: margin forms agree to 1e-6", f.description()),
        );
    }
    c.finish(7, "Lemma 2.1 sign on the minimal branch")
}

/// Criterion 8: uniform bound of ∫ H_{f,beta}(u) dx along the branch —
/// property-based growth classification.
pub fn criterion8_uniform_bound(cfg: &VerifyConfig) -> CriterionResult {
    let mut c = Checker::new();
    let f = Nonlinearity::exponential();

    // n = 9: coarse sweep to find the fold, then a dense grid near it so
    // the 0.99 lambda* window holds >= 10 points.
    let coarse: Vec<f64> = (1..=160).map(|k| k as f64 * 0.1).collect();
    let opts = SweepOptions { eigen: None, threads: cfg.threads, ..Default::default() };
    let pre = branch_sweep(&f, 9, &coarse, &opts);
    let Some(fold) = pre.fold_m else {
        c.check(false, "n=9: no fold found");
        return c.finish(8, "Theorem 1.1 uniform bound (property-based)");
    };
    let mut grid: Vec<f64> = coarse.iter().cloned().filter(|m| *m < fold - 0.8).collect();
    let dense_from = (fold - 0.8).max(0.1);
    for k in 0..=60 {
        grid.push(dense_from + (fold - dense_from) * k as f64 / 60.0);
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let b9 = branch_sweep(&f, 9, &grid, &opts);
    let minimal = b9.minimal_points();
    let lambdas: Vec<f64> = minimal.iter().map(|p| p.lambda).collect();
    let branch_only = Branch {
        n: 9,
        points: minimal.iter().map(|p| (**p).clone()).collect(),
        lambda_star: b9.lambda_star,
        fold_m: b9.fold_m,
        monotone: b9.monotone,
    };
    for beta in [0.0, 0.9] {
        match track(&f, &branch_only, &[QuantitySpec::IntHfBeta { beta }], 1e-10) {
            Ok(table) => {
                let vals: Vec<f64> = table.columns[0]
                    .values
                    .iter()
                    .map(|v| v.unwrap_or(f64::NAN))
                    .collect();
                let increasing = vals.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9));
                c.check(increasing, &format!("n=9 beta={beta}: integral increasing in m"));
                match diagnose_boundedness(&lambdas, &vals, b9.lambda_star) {
                    Ok(diag) => {
                        c.note(format!(
                            "n=9 beta={beta}: {:?}, sup = {:.6e}",
                            diag.behavior, diag.empirical_sup
                        ));
                        c.check(
                            diag.behavior.is_bounded(),
                            &format!("n=9 beta={beta}: tail diagnosis converges"),
                        );
                    }
                    Err(e) => c.check(false, &format!("n=9 beta={beta}: {e}")),
                }
            }
            Err(e) => c.check(false, &format!("n=9 beta={beta}: {e}")),
        }
    }

    // n = 11 (monotone, unbounded u): the stated expectation is a growing
    // tail for beta = 0.9.
    let grid11: Vec<f64> = (1..=160).map(|k| k as f64 * 0.25).collect();
    let b11 = branch_sweep(&f, 11, &grid11, &opts);
    let lambdas11: Vec<f64> = b11
        .points
        .iter()
        .filter(|p| p.error.is_none())
        .map(|p| p.lambda)
        .collect();
    match track(&f, &b11, &[QuantitySpec::IntHfBeta { beta: 0.9 }], 1e-10) {
        Ok(table) => {
            let vals: Vec<f64> = table.columns[0]
                .values
                .iter()
                .map(|v| v.unwrap_or(f64::NAN))
                .collect();
            match diagnose_boundedness(&lambdas11, &vals, b11.lambda_star) {
                Ok(diag) => {
                    // ∫ H over the ball of the singular limit profile
                    // u = -2 ln r: ω/(2+2β) (1/(n-2(3+2β)) - 1/(n-2))
                    let beta = 0.9;
                    let omega = crate::analysis::ball_surface(11);
                    let singular_limit = omega / (2.0 + 2.0 * beta)
                        * (1.0 / (11.0 - 2.0 * (3.0 + 2.0 * beta)) - 1.0 / 9.0);
                    c.note(format!(
                        "n=11 beta=0.9: {:?}, sup = {:.6e}, u(0) grows to {}, singular-profile limit = {singular_limit:.6e}",
                        diag.behavior,
                        diag.empirical_sup,
                        b11.points.last().map(|p| p.m).unwrap_or(f64::NAN)
                    ));
                    c.check(
                        !diag.behavior.is_bounded(),
                        "n=11 beta=0.9: tail diagnosis grows",
                    );
                }
                Err(e) => c.check(false, &format!("n=11: {e}")),
            }
        }
        Err(e) => c.check(false, &format!("n=11: {e}")),
    }
    c.finish(8, "Theorem 1.1 uniform bound (property-based)")
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn uniform(state: &mut u64) -> f64 {
    (splitmix64(state) >> 11) as f64 / (1u64 << 53) as f64
}

/// Criterion 9: the bootstrap recursion converges to its fixed point.
pub fn criterion9_bootstrap(cfg: &VerifyConfig) -> CriterionResult {
    let mut c = Checker::new();
    let mut state = cfg.seed;
    let mut produced = 0usize;
    let mut attempts = 0usize;
    while produced < 50 && attempts < 100_000 {
        attempts += 1;
        let alpha = 1.2 + 4.8 * uniform(&mut state);
        let n = (2.0 * alpha).ceil() as u32 + 1 + (uniform(&mut state) * 20.0) as u32;
        let nf = n as f64;
        if nf <= 2.0 * alpha + 0.2 {
            continue;
        }
        // stay inside the region where the contraction rate sigma/alpha
        // leaves room to converge within 500 iterations
        let sigma_cap = (0.9 * alpha).min(0.95 * (alpha - 1.0) * nf / (nf - 2.0));
        if sigma_cap <= 0.0 {
            continue;
        }
        let sigma = sigma_cap * uniform(&mut state);
        match bootstrap_exponents(alpha, sigma, n, 500) {
            Ok(b) => {
                produced += 1;
                let tol = 1e-9 * b.q_limit.abs().max(1.0);
                if b.final_gap > tol {
                    c.check(
                        false,
                        &format!(
                            "({alpha:.4},{sigma:.4},{n}): gap {:.3e} exceeds 1e-9",
                            b.final_gap
                        ),
                    );
                }
                let monotone = b.q.windows(2).all(|w| w[1] >= w[0] - 1e-12);
                c.check(monotone, &format!("({alpha:.4},{sigma:.4},{n}): q increasing"));
            }
            Err(e) => c.check(false, &format!("sampler produced invalid case: {e}")),
        }
    }
    c.check(produced == 50, "generated 50 valid samples");
    c.note(format!("{produced} samples converged to (alpha-sigma)n/(n-2alpha)"));
    c.finish(9, "bootstrap exponent convergence")
}

/// Criterion 10: determinism — the fast sub-suite, run twice, produces
/// byte-identical reports.
pub fn criterion10_determinism(cfg: &VerifyConfig) -> CriterionResult {
    let mut c = Checker::new();
    let run_fast = |cfg: &VerifyConfig| -> String {
        let results = vec![
            criterion1_thresholds(cfg),
            criterion2_tau(cfg),
            criterion3_h_quadrature(cfg),
            criterion9_bootstrap(cfg),
        ];
        report_lines(&results)
    };
    let a = run_fast(cfg);
    let b = run_fast(cfg);
    c.check(a == b, "two verify runs are byte-identical");
    c.note(format!("report bytes: {}", a.len()));
    c.finish(10, "determinism")
}

type CriterionFn = fn(&VerifyConfig) -> CriterionResult;

pub const CRITERIA: &[(u32, &str, CriterionFn)] = &[
    (1, "thresholds", criterion1_thresholds as CriterionFn),
    (2, "tau", criterion2_tau as CriterionFn),
    (3, "estimates", criterion3_h_quadrature as CriterionFn),
    (4, "gelfand", criterion4_gelfand_disk as CriterionFn),
    (5, "singular", criterion5_singular_limit as CriterionFn),
    (6, "semistability", criterion6_semistability as CriterionFn),
    (7, "lemma21", criterion7_lemma21 as CriterionFn),
    (8, "uniform-bound", criterion8_uniform_bound as CriterionFn),
    (9, "bootstrap", criterion9_bootstrap as CriterionFn),
    (10, "determinism", criterion10_determinism as CriterionFn),
];

/// Runs the suite, optionally filtered by substring of the criterion name
/// or by numeric id.
pub fn run_all(cfg: &VerifyConfig, filter: Option<&str>) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .filter(|(id, name, _)| match filter {
            None => true,
            Some(f) => name.contains(f) || f.parse::<u32>().map(|v| v == *id).unwrap_or(false),
        })
        .map(|(_, _, func)| func(cfg))
        .collect()
}

/// One JSON object per line; deliberately excludes wall-clock timings so
/// identical configurations give identical bytes.
pub fn report_lines(results: &[CriterionResult]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&serde_json::to_string(r).expect("serializable"));
        out.push('\n');
    }
    out
}
