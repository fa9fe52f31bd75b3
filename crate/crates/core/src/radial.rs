//! Radial solver for u'' + ((n-1)/r) u' + λ f(u) = 0 on the unit ball.
//!
//! Scaling-shooting: for each center value m the unscaled IVP
//! v'' + ((n-1)/s) v' + f(v) = 0, v(0) = m, v'(0) = 0 is integrated to its
//! first zero R; then u(r) = v(R r) solves the Dirichlet problem with
//! λ = R². Sweeping m traces the bifurcation diagram λ(m); the first
//! interior maximum of λ(m) is the fold, and the segment before it is the
//! (semistable) minimal branch.

use crate::estimates::{
    stability_margin_radial, EstimatesError, GTable, Multiplier, StabilityMargin,
};
use crate::nonlinearity::Nonlinearity;
use crate::ode::{Dopri5, State, StepOutcome, StepRecord};
use crate::quad::integrate;
use serde::Serialize;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RadialError {
    #[error("center value must be nonnegative and finite, got {0}")]
    BadCenter(f64),
    #[error("dimension must be >= 2, got {0}")]
    BadDimension(u32),
    #[error("f({m}) = {value} is not usable as an initial slope scale")]
    BadNonlinearity { m: f64, value: f64 },
    #[error("no zero of v found before s = {s_max} (f may be too weak)")]
    NoZero { s_max: f64 },
    #[error("step size underflow at s = {s}")]
    StepUnderflow { s: f64 },
    #[error("step budget exhausted at s = {s}")]
    MaxSteps { s: f64 },
    #[error("eigenvalue bracket not found in [{lo}, {hi}]")]
    NoEigenBracket { lo: f64, hi: f64 },
    #[error(transparent)]
    Estimates(#[from] EstimatesError),
    #[error(transparent)]
    Quad(#[from] crate::quad::QuadError),
}

#[derive(Debug, Clone, Copy)]
pub struct OdeControls {
    pub rtol: f64,
    pub atol: f64,
    pub s_max: f64,
    pub max_steps: usize,
    /// points in the stored uniform r-grid (incl. both endpoints)
    pub dense_points: usize,
}

impl Default for OdeControls {
    fn default() -> Self {
        OdeControls {
            rtol: 1e-10,
            atol: 1e-12,
            s_max: 1e6,
            max_steps: 4_000_000,
            dense_points: 1025,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct OriginSeries {
    m: f64,
    c2: f64,
    c4: f64,
    s_end: f64,
}

impl OriginSeries {
    fn eval(&self, s: f64) -> (f64, f64) {
        let s2 = s * s;
        (
            self.m - self.c2 * s2 + self.c4 * s2 * s2,
            -2.0 * self.c2 * s + 4.0 * self.c4 * s2 * s,
        )
    }
}

/// A solved radial profile u on [0,1] with u(0) = m, u(1) = 0, λ = R².
#[derive(Debug, Clone)]
pub struct RadialProfile {
    pub n: u32,
    pub m: f64,
    pub lambda: f64,
    /// first zero R of the unscaled profile; λ = R².
    pub r_scale: f64,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    /// flux-form defect of the BVP on a fresh check grid (relative scale).
    pub residual: f64,
    series: Option<OriginSeries>,
    steps: Vec<StepRecord>,
}

impl RadialProfile {
    fn trivial(n: u32, points: usize) -> RadialProfile {
        let r: Vec<f64> = (0..points).map(|i| i as f64 / (points - 1) as f64).collect();
        RadialProfile {
            n,
            m: 0.0,
            lambda: 0.0,
            r_scale: 0.0,
            u: vec![0.0; points],
            du: vec![0.0; points],
            r,
            residual: 0.0,
            series: None,
            steps: Vec::new(),
        }
    }

    /// Profile from explicit grid data; the dense in-step representation is
    /// absent, so only the grid-based integrals may touch it.
    #[cfg(test)]
    pub(crate) fn synthetic(n: u32, r: Vec<f64>, u: Vec<f64>, du: Vec<f64>) -> RadialProfile {
        RadialProfile {
            n,
            m: u[0],
            lambda: 1.0,
            r_scale: 1.0,
            r,
            u,
            du,
            residual: 0.0,
            series: None,
            steps: Vec::new(),
        }
    }

    /// (v, v') of the unscaled profile at s in [0, R].
    fn eval_s(&self, s: f64) -> (f64, f64) {
        let series = self.series.as_ref().expect("nontrivial profile");
        if s <= series.s_end || self.steps.is_empty() {
            return series.eval(s);
        }
        // binary search for the step containing s
        let mut lo = 0usize;
        let mut hi = self.steps.len() - 1;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.steps[mid].s1 < s {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let rec = &self.steps[lo];
        rec.eval_quintic(s.clamp(rec.s0, rec.s1))
    }

    /// (u(r), u'(r)); r outside [0,1] is clamped.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        if self.r_scale == 0.0 {
            return (0.0, 0.0);
        }
        let r = r.clamp(0.0, 1.0);
        let (v, vp) = self.eval_s(r * self.r_scale);
        (v, self.r_scale * vp)
    }

    /// max over the stored grid of |u| — equals u(0) = m for the monotone
    /// profiles produced here.
    pub fn sup_norm(&self) -> f64 {
        self.m
    }
}

/// Solves the IVP to its first zero and returns the scaled profile.
pub fn integrate_profile(
    f: &Nonlinearity,
    n: u32,
    m: f64,
    controls: &OdeControls,
) -> Result<RadialProfile, RadialError> {
    if n < 2 {
        return Err(RadialError::BadDimension(n));
    }
    if !(m >= 0.0) || !m.is_finite() {
        return Err(RadialError::BadCenter(m));
    }
    if m == 0.0 {
        return Ok(RadialProfile::trivial(n, controls.dense_points));
    }
    let fm = f.eval(m);
    if !(fm.f > 0.0) || !fm.f.is_finite() {
        return Err(RadialError::BadNonlinearity { m, value: fm.f });
    }

    let nf = n as f64;
    let f0 = f.f0();
    let slope0 = f.f1(0.0);
    // linear extension below zero keeps the RHS smooth while the root is
    // being bracketed
    let f_ext = move |f: &Nonlinearity, v: f64| {
        if v >= 0.0 {
            f.f(v)
        } else {
            f0 + slope0 * v
        }
    };
    let rhs = {
        let f = f.clone();
        move |s: f64, y: State| -> State { [y[1], -(nf - 1.0) / s * y[1] - f_ext(&f, y[0])] }
    };

    // series step past the coordinate singularity at s = 0
    let s0 = 1e-4 * (m / fm.f).sqrt().min(1.0);
    let series = OriginSeries {
        m,
        c2: fm.f / (2.0 * nf),
        c4: fm.f * fm.f1 / (8.0 * nf * (nf + 2.0)),
        s_end: s0,
    };
    let (v0, w0) = series.eval(s0);

    let stepper = Dopri5 { rtol: controls.rtol, atol: controls.atol };
    let mut s = s0;
    let mut y = [v0, w0];
    let mut d = rhs(s, y);
    let mut h = s0;
    let mut steps: Vec<StepRecord> = Vec::new();
    let mut crossing: Option<StepRecord> = None;

    for _ in 0..controls.max_steps {
        if s >= controls.s_max {
            return Err(RadialError::NoZero { s_max: controls.s_max });
        }
        if h < 1e-14 * s.max(1.0) {
            return Err(RadialError::StepUnderflow { s });
        }
        match stepper.try_step(&rhs, s, y, d, h) {
            StepOutcome::Accepted { rec, h_next } => {
                s = rec.s1;
                y = rec.y1;
                d = rec.d1;
                h = h_next;
                let crossed = rec.y1[0] <= 0.0;
                steps.push(rec);
                if crossed {
                    crossing = Some(rec);
                    break;
                }
            }
            StepOutcome::Rejected { h_next } => h = h_next,
        }
    }
    let Some(last) = crossing else {
        return Err(RadialError::MaxSteps { s });
    };

    // locate the first zero inside the crossing step by bisection on the
    // quintic interpolant
    let mut lo = last.s0;
    let mut hi = last.s1;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if last.eval_quintic(mid).0 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    let r_scale = 0.5 * (lo + hi);
    let lambda = r_scale * r_scale;

    let mut profile = RadialProfile {
        n,
        m,
        lambda,
        r_scale,
        r: Vec::new(),
        u: Vec::new(),
        du: Vec::new(),
        residual: f64::NAN,
        series: Some(series),
        steps,
    };
    let points = controls.dense_points;
    let mut r = Vec::with_capacity(points);
    let mut u = Vec::with_capacity(points);
    let mut du = Vec::with_capacity(points);
    for i in 0..points {
        let ri = i as f64 / (points - 1) as f64;
        let (ui, dui) = profile.eval(ri);
        r.push(ri);
        u.push(ui);
        du.push(dui);
    }
    profile.r = r;
    profile.u = u;
    profile.du = du;
    profile.residual = flux_defect(&profile, f)?;
    Ok(profile)
}

/// Flux-form defect of the Dirichlet problem: with
/// F(r) = r^(n-1) u'(r) + λ ∫_0^r ρ^(n-1) f(u(ρ)) dρ (identically zero for
/// an exact solution), returns max over a fresh grid of
/// |F(r)| · n / (r^n λ f(m)) — an f(m)-normalized running average of the
/// pointwise ODE defect.
fn flux_defect(profile: &RadialProfile, f: &Nonlinearity) -> Result<f64, RadialError> {
    let n = profile.n as f64;
    let lambda = profile.lambda;
    let scale = lambda * f.f(profile.m);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let checks = 128usize;
    let mut worst: f64 = 0.0;
    let mut acc = 0.0;
    let mut prev = 0.0;
    for k in 1..=checks {
        let r = k as f64 / checks as f64;
        acc += integrate(
            |rho: f64| {
                let (u, _) = profile.eval(rho);
                rho.powf(n - 1.0) * f.f(u.max(0.0))
            },
            prev,
            r,
            1e-13,
        )?;
        prev = r;
        let (_, dur) = profile.eval(r);
        let flux = r.powf(n - 1.0) * dur + lambda * acc;
        worst = worst.max((flux * n / r.powf(n)).abs() / scale);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchPoint {
    pub m: f64,
    pub r_scale: f64,
    pub lambda: f64,
    pub mu1: Option<f64>,
    #[serde(skip)]
    pub profile: Option<RadialProfile>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Branch {
    pub n: u32,
    pub points: Vec<BranchPoint>,
    pub lambda_star: f64,
    /// center value of the first interior maximum of λ(m), when present
    pub fold_m: Option<f64>,
    pub monotone: bool,
}

impl Branch {
    /// Points on the minimal branch: m <= fold_m (all points when the
    /// sweep is monotone), successfully integrated.
    pub fn minimal_points(&self) -> Vec<&BranchPoint> {
        self.points
            .iter()
            .filter(|p| p.error.is_none())
            .filter(|p| match self.fold_m {
                Some(fold) => p.m <= fold,
                None => true,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub ode: OdeControls,
    pub eigen: Option<crate::eigen::EigenControls>,
    pub threads: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            ode: OdeControls::default(),
            eigen: Some(crate::eigen::EigenControls::default()),
            threads: 1,
        }
    }
}

fn sweep_point(f: &Nonlinearity, n: u32, m: f64, opts: &SweepOptions) -> BranchPoint {
    match integrate_profile(f, n, m, &opts.ode) {
        Ok(profile) => {
            let mu1 = opts
                .eigen
                .as_ref()
                .and_then(|ctl| crate::eigen::principal_eigenvalue(&profile, f, ctl).ok())
                .map(|res| res.mu1);
            BranchPoint {
                m,
                r_scale: profile.r_scale,
                lambda: profile.lambda,
                mu1,
                profile: Some(profile),
                error: None,
            }
        }
        Err(e) => BranchPoint {
            m,
            r_scale: f64::NAN,
            lambda: f64::NAN,
            mu1: None,
            profile: None,
            error: Some(e.to_string()),
        },
    }
}

/// Sweeps λ(m) over `m_grid` (increasing, positive); failures annotate
/// their point instead of aborting. The result is independent of the worker
/// count: points are merged by index.
pub fn branch_sweep(f: &Nonlinearity, n: u32, m_grid: &[f64], opts: &SweepOptions) -> Branch {
    let threads = opts.threads.max(1).min(m_grid.len().max(1));
    let slots: Vec<Mutex<Option<BranchPoint>>> =
        m_grid.iter().map(|_| Mutex::new(None)).collect();
    let cursor = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::Relaxed);
                if i >= m_grid.len() {
                    break;
                }
                let point = sweep_point(f, n, m_grid[i], opts);
                *slots[i].lock().unwrap() = Some(point);
            });
        }
    });
    let points: Vec<BranchPoint> = slots
        .into_iter()
        .map(|s| s.into_inner().unwrap().expect("every slot filled"))
        .collect();

    let lambda_of = |m: f64| -> f64 {
        integrate_profile(f, n, m, &opts.ode)
            .map(|p| p.lambda)
            .unwrap_or(f64::NAN)
    };

    // first interior local max of λ(m), ignoring plateau-level noise
    let lambda_max_grid = points
        .iter()
        .filter(|p| p.error.is_none())
        .map(|p| p.lambda)
        .fold(f64::NEG_INFINITY, f64::max);
    let tol_fold = 1e-7 * lambda_max_grid.max(1e-12);
    let mut fold_idx = None;
    for i in 1..points.len().saturating_sub(1) {
        if points[i].error.is_some() || points[i + 1].error.is_some() || points[i - 1].error.is_some()
        {
            continue;
        }
        if points[i].lambda > points[i + 1].lambda + tol_fold
            && points[i].lambda + tol_fold > points[i - 1].lambda
        {
            fold_idx = Some(i);
            break;
        }
    }

    let (fold_m, lambda_star, monotone) = match fold_idx {
        Some(i) => {
            let (fm, fl) = golden_max(&lambda_of, points[i - 1].m, points[i + 1].m, 1e-7);
            (Some(fm), fl.max(lambda_max_grid), false)
        }
        None => (None, lambda_max_grid, true),
    };

    Branch { n, points, lambda_star, fold_m, monotone }
}

/// Golden-section maximization of a unimodal function on [a, b].
pub fn golden_max(f: &dyn Fn(f64) -> f64, a: f64, b: f64, xtol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut lo = a;
    let mut hi = b;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > xtol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let xm = 0.5 * (lo + hi);
    (xm, f(xm))
}

/// Both forms of the semistability margin for η = g(u): the direct Rayleigh
/// form and the Lemma-2.1 form λ∫(G f - g² f'), which agree by integration
/// by parts since G(0) = 0 and u(1) = 0.
pub fn verify_stability_inequality(
    profile: &RadialProfile,
    f: &Nonlinearity,
    g: &Multiplier,
    quad_tol: f64,
) -> Result<StabilityMargin, RadialError> {
    let g_table = GTable::build(g, profile.m.max(1e-6) * 1.0001, quad_tol)?;
    let eval = |r: f64| profile.eval(r);
    Ok(stability_margin_radial(
        profile.n,
        profile.lambda,
        &eval,
        f,
        g,
        &g_table,
        quad_tol,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimates::GChoice;

    fn exp_f() -> Nonlinearity {
        Nonlinearity::exponential()
    }

    #[test]
    fn degenerate_center_value_gives_trivial_profile() {
        let p = integrate_profile(&exp_f(), 2, 0.0, &OdeControls::default()).unwrap();
        assert_eq!(p.r_scale, 0.0);
        assert_eq!(p.lambda, 0.0);
        assert!(p.u.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn liouville_oracle_n2() {
        // u_b(r) = 2 ln((1+b)/(1+b r^2)) solves Δu + λ e^u = 0 in the disk
        // with λ(b) = 8b/(1+b)^2; at b = 1: m = 2 ln 2, λ = 2.
        let m = 2.0 * (2.0f64).ln();
        let p = integrate_profile(&exp_f(), 2, m, &OdeControls::default()).unwrap();
        assert!(
            (p.lambda - 2.0).abs() < 1e-6,
            "lambda = {} (expected 2)",
            p.lambda
        );
        // full profile check against the closed form with b = 1
        for &r in &[0.1, 0.37, 0.5, 0.82, 1.0] {
            let (u, _) = p.eval(r);
            let want = 2.0 * (2.0 / (1.0 + r * r)).ln();
            assert!((u - want).abs() < 1e-7, "u({r}) = {u} vs {want}");
        }
    }

    #[test]
    fn liouville_family_spans_lambda_of_m() {
        // λ(m) = 8b/(1+b)^2 with m = 2 ln(1+b)
        for &b in &[0.3f64, 1.0, 2.5] {
            let m = 2.0 * (1.0 + b).ln();
            let p = integrate_profile(&exp_f(), 2, m, &OdeControls::default()).unwrap();
            let want = 8.0 * b / ((1.0 + b) * (1.0 + b));
            assert!((p.lambda - want).abs() < 1e-7, "b={b}");
        }
    }

    #[test]
    fn singular_solution_limit_n3() {
        // u = -2 ln r solves Δu + λ e^u = 0 iff λ = 2(n-2)
        let p = integrate_profile(&exp_f(), 3, 30.0, &OdeControls::default()).unwrap();
        assert!(
            (p.lambda - 2.0).abs() < 0.02,
            "lambda = {} (expected ~2)",
            p.lambda
        );
    }

    #[test]
    fn profile_invariants() {
        let p = integrate_profile(&exp_f(), 3, 1.5, &OdeControls::default()).unwrap();
        assert!((p.u[0] - 1.5).abs() < 1e-12);
        assert!(p.u.last().unwrap().abs() < 1e-9, "u(1) = {}", p.u.last().unwrap());
        // monotone decreasing
        for w in p.u.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        assert!(p.residual < 1e-8, "defect {}", p.residual);
    }

    #[test]
    fn residual_small_even_for_steep_profiles() {
        let p = integrate_profile(&exp_f(), 11, 25.0, &OdeControls::default()).unwrap();
        assert!(p.residual < 1e-8, "defect {}", p.residual);
        assert!((p.lambda - 18.0).abs() < 0.2);
    }

    #[test]
    fn integrator_order_on_oracle() {
        // halving the tolerance must reduce the R-error consistently with a
        // 5th-order pair (errors here are far below the fold-scale anyway)
        let m = 2.0 * (2.0f64).ln();
        let exact = (2.0f64).sqrt();
        let mut errs = Vec::new();
        for rtol in [1e-6, 1e-8, 1e-10] {
            let c = OdeControls { rtol, atol: rtol * 1e-2, ..OdeControls::default() };
            let p = integrate_profile(&exp_f(), 2, m, &c).unwrap();
            errs.push((p.r_scale - exact).abs().max(1e-16));
        }
        assert!(errs[1] < errs[0].max(1e-13));
        assert!(errs[2] < 1e-9);
    }

    #[test]
    fn branch_sweep_finds_gelfand_fold_n2() {
        let grid: Vec<f64> = (1..=60).map(|k| k as f64 * 0.1).collect();
        let opts = SweepOptions { eigen: None, threads: 2, ..SweepOptions::default() };
        let b = branch_sweep(&exp_f(), 2, &grid, &opts);
        assert!(!b.monotone);
        assert!((b.lambda_star - 2.0).abs() < 1e-5, "λ* = {}", b.lambda_star);
        let fold = b.fold_m.unwrap();
        assert!((fold - 2.0 * (2.0f64).ln()).abs() < 1e-4, "fold at {fold}");
    }

    #[test]
    fn sweep_annotates_failures_without_aborting() {
        // f decaying in t leaves v nearly flat from a large center value,
        // so no zero appears before s_max
        let f = Nonlinearity::parse("1/(1+t)").unwrap();
        let c = OdeControls { s_max: 10.0, ..OdeControls::default() };
        let opts = SweepOptions { ode: c, eigen: None, threads: 1 };
        let b = branch_sweep(&f, 2, &[0.01, 1e6], &opts);
        assert!(b.points[0].error.is_none());
        assert!(b.points[1].error.is_some());
    }

    #[test]
    fn sweep_is_thread_count_invariant() {
        let grid: Vec<f64> = (1..=12).map(|k| k as f64 * 0.3).collect();
        let o1 = SweepOptions { eigen: None, threads: 1, ..SweepOptions::default() };
        let o4 = SweepOptions { eigen: None, threads: 4, ..SweepOptions::default() };
        let b1 = branch_sweep(&exp_f(), 3, &grid, &o1);
        let b4 = branch_sweep(&exp_f(), 3, &grid, &o4);
        for (p, q) in b1.points.iter().zip(b4.points.iter()) {
            assert_eq!(p.lambda.to_bits(), q.lambda.to_bits());
        }
        assert_eq!(b1.lambda_star.to_bits(), b4.lambda_star.to_bits());
    }

    #[test]
    fn stability_margin_forms_agree() {
        let f = exp_f();
        let p = integrate_profile(&f, 2, 0.8, &OdeControls::default()).unwrap();
        let g = Multiplier::from_choice(&f, &GChoice::GEqualsF, p.m * 1.01, 1e-10).unwrap();
        let margin = verify_stability_inequality(&p, &f, &g, 1e-11).unwrap();
        let scale = margin.positive_part.abs().max(1e-300);
        assert!(
            (margin.direct - margin.lemma_form).abs() <= 1e-6 * scale,
            "direct {} vs lemma {}",
            margin.direct,
            margin.lemma_form
        );
        // semistable point on the minimal branch: ∫ H(u) <= 0 (+tolerance)
        assert!(margin.integral_h() <= 1e-8 * scale);
    }

    #[test]
    fn stability_margin_trivial_solution() {
        let f = exp_f();
        let p = RadialProfile::trivial(2, 257);
        let g = Multiplier::from_choice(&f, &GChoice::GEqualsF, 1.0, 1e-10).unwrap();
        let margin = verify_stability_inequality(&p, &f, &g, 1e-11).unwrap();
        assert_eq!(margin.direct, 0.0);
        assert_eq!(margin.lemma_form, 0.0);
    }

    #[test]
    fn energy_identity_gradient_vs_source() {
        // ∫|∇u|² = λ ∫ f(u) u  (multiply the equation by u, integrate)
        let f = exp_f();
        let p = integrate_profile(&f, 3, 2.0, &OdeControls::default()).unwrap();
        let omega = crate::analysis::ball_surface(3);
        let grad = omega
            * integrate(
                |r: f64| {
                    let (_, du) = p.eval(r);
                    du * du * r * r
                },
                0.0,
                1.0,
                1e-12,
            )
            .unwrap();
        let src = omega
            * p.lambda
            * integrate(
                |r: f64| {
                    let (u, _) = p.eval(r);
                    f.f(u.max(0.0)) * u * r * r
                },
                0.0,
                1.0,
                1e-12,
            )
            .unwrap();
        assert!((grad - src).abs() <= 1e-6 * grad.abs(), "{grad} vs {src}");
    }
}
