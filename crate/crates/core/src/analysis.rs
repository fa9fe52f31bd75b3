//! Norms and estimate integrals along a branch, and the empirical
//! boundedness diagnosis as λ approaches λ*.

use crate::estimates::{EstimateTables, EstimatesError, GChoice, GTable, Multiplier};
use crate::nonlinearity::Nonlinearity;
use crate::radial::{Branch, RadialProfile};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("need at least {need} tail points with λ >= {frac} λ*, found {found}")]
    InsufficientTail { need: usize, found: usize, frac: f64 },
    #[error(transparent)]
    Estimates(#[from] EstimatesError),
}

/// Surface measure of the unit sphere S^(n-1): 2 π^(n/2) / Γ(n/2).
pub fn ball_surface(n: u32) -> f64 {
    let half = n as f64 / 2.0;
    2.0 * std::f64::consts::PI.powf(half) / gamma_half_integer(n)
}

/// Γ(n/2) for integer n >= 1.
fn gamma_half_integer(n: u32) -> f64 {
    if n % 2 == 0 {
        let mut acc = 1.0;
        for k in 1..(n / 2) {
            acc *= k as f64;
        }
        acc
    } else {
        let mut acc = std::f64::consts::PI.sqrt();
        let mut x = 0.5;
        while x < n as f64 / 2.0 - 0.25 {
            acc *= x;
            x += 1.0;
        }
        acc
    }
}

fn simpson(y: &[f64], h: f64) -> f64 {
    let n = y.len() - 1;
    assert!(n >= 2 && n % 2 == 0, "need an even number of intervals");
    let mut acc = y[0] + y[n];
    for (i, v) in y.iter().enumerate().take(n).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0
}

/// ω_{n-1} ∫_0^1 integrand(r, u, u') r^(n-1) dr on the profile's dense
/// grid, with a Richardson half-grid consistency estimate.
pub fn ball_integral_checked(
    profile: &RadialProfile,
    integrand: &dyn Fn(f64, f64, f64) -> f64,
) -> (f64, f64) {
    let n = profile.n as f64;
    let omega = ball_surface(profile.n);
    let pts = profile.r.len();
    let h = 1.0 / (pts - 1) as f64;
    let values: Vec<f64> = (0..pts)
        .map(|i| {
            let r = profile.r[i];
            integrand(r, profile.u[i], profile.du[i]) * r.powf(n - 1.0)
        })
        .collect();
    let full = omega * simpson(&values, h);
    let coarse: Vec<f64> = values.iter().step_by(2).cloned().collect();
    let half = omega * simpson(&coarse, 2.0 * h);
    (full, (full - half).abs() / 15.0)
}

pub fn ball_integral(
    profile: &RadialProfile,
    integrand: &dyn Fn(f64, f64, f64) -> f64,
) -> f64 {
    ball_integral_checked(profile, integrand).0
}

/// Quantities that can be tracked along a branch.
#[derive(Debug, Clone, Serialize)]
pub enum QuantitySpec {
    /// L^r norm of u; r = inf is the sup norm u(0).
    LpNorm { r: f64 },
    GradLpNorm { r: f64 },
    /// ∫ H_{f,β}(u) dx.
    IntHfBeta { beta: f64 },
    /// ∫ f̃(u)²/u dx with the limit 0 at u = 0.
    IntNedev,
    /// ∫ f(u) f'(u) dx.
    IntFfPrime,
    /// λ ∫ (g(u)² f'(u) - G(u) f(u)) dx = ∫ H(u) dx of the Lemma machinery.
    IntLemma21H { g: GChoice },
    /// ∫ u f(u) dx.
    IntUf,
}

impl QuantitySpec {
    pub fn label(&self) -> String {
        match self {
            QuantitySpec::LpNorm { r } if r.is_infinite() => "u_inf".into(),
            QuantitySpec::LpNorm { r } => format!("u_L{r}"),
            QuantitySpec::GradLpNorm { r } => format!("grad_u_L{r}"),
            QuantitySpec::IntHfBeta { beta } => format!("int_H_beta_{beta}"),
            QuantitySpec::IntNedev => "int_ftilde2_over_u".into(),
            QuantitySpec::IntFfPrime => "int_f_fprime".into(),
            QuantitySpec::IntLemma21H { .. } => "int_lemma21_H".into(),
            QuantitySpec::IntUf => "int_u_f".into(),
        }
    }
}

enum Evaluator {
    Plain(Box<dyn Fn(&RadialProfile) -> Option<f64> + Sync>),
}

fn build_evaluator(
    f: &Nonlinearity,
    spec: &QuantitySpec,
    u_max: f64,
    tol: f64,
) -> Result<Evaluator, AnalysisError> {
    let f = f.clone();
    Ok(match spec {
        QuantitySpec::LpNorm { r } => {
            let r = *r;
            if r.is_infinite() {
                Evaluator::Plain(Box::new(|p| Some(p.sup_norm())))
            } else {
                assert!(r >= 1.0, "exponent must be >= 1");
                Evaluator::Plain(Box::new(move |p| {
                    Some(ball_integral(p, &|_, u, _| u.abs().powf(r)).powf(1.0 / r))
                }))
            }
        }
        QuantitySpec::GradLpNorm { r } => {
            let r = *r;
            assert!(r >= 1.0, "exponent must be >= 1");
            Evaluator::Plain(Box::new(move |p| {
                Some(ball_integral(p, &|_, _, du| du.abs().powf(r)).powf(1.0 / r))
            }))
        }
        QuantitySpec::IntHfBeta { beta } => {
            let tables = EstimateTables::build(&f, *beta, u_max.max(1e-6), tol)?;
            Evaluator::Plain(Box::new(move |p| {
                let v = ball_integral(p, &|_, u, _| {
                    tables.h(u.max(0.0)).unwrap_or(f64::NAN)
                });
                if v.is_finite() {
                    Some(v)
                } else {
                    None
                }
            }))
        }
        QuantitySpec::IntNedev => Evaluator::Plain(Box::new(move |p| {
            let f0 = f.f0();
            let slope0 = f.f1(0.0);
            Some(ball_integral(p, &|_, u, _| {
                if u > 1e-8 {
                    let ft = f.f(u) - f0;
                    ft * ft / u
                } else {
                    slope0 * slope0 * u.max(0.0)
                }
            }))
        })),
        QuantitySpec::IntFfPrime => Evaluator::Plain(Box::new(move |p| {
            Some(ball_integral(p, &|_, u, _| {
                let e = f.eval(u.max(0.0));
                e.f * e.f1
            }))
        })),
        QuantitySpec::IntLemma21H { g } => {
            let mult = Multiplier::from_choice(&f, g, u_max.max(1e-6), tol)?;
            let table = GTable::build(&mult, u_max.max(1e-6), tol)?;
            Evaluator::Plain(Box::new(move |p| {
                let lambda = p.lambda;
                let v = ball_integral(p, &|_, u, _| {
                    let u = u.max(0.0);
                    let (gv, _) = table.multiplier.eval(u);
                    let e = f.eval(u);
                    match table.g_cumulative(u) {
                        Ok(big_g) => lambda * (gv * gv * e.f1 - big_g * e.f),
                        Err(_) => f64::NAN,
                    }
                });
                if v.is_finite() {
                    Some(v)
                } else {
                    None
                }
            }))
        }
        QuantitySpec::IntUf => Evaluator::Plain(Box::new(move |p| {
            Some(ball_integral(p, &|_, u, _| u * f.f(u.max(0.0))))
        })),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TrackColumn {
    pub label: String,
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrackTable {
    pub columns: Vec<TrackColumn>,
}

/// Per-point values of every requested quantity, in branch order. Failed
/// points (or failed quadratures) yield empty cells.
pub fn track(
    f: &Nonlinearity,
    branch: &Branch,
    specs: &[QuantitySpec],
    tol: f64,
) -> Result<TrackTable, AnalysisError> {
    let u_max = branch
        .points
        .iter()
        .filter(|p| p.error.is_none())
        .map(|p| p.m)
        .fold(0.0, f64::max)
        * 1.001;
    let mut columns = Vec::with_capacity(specs.len());
    for spec in specs {
        let eval = build_evaluator(f, spec, u_max, tol)?;
        let Evaluator::Plain(eval) = eval;
        let values: Vec<Option<f64>> = branch
            .points
            .iter()
            .map(|p| p.profile.as_ref().and_then(&eval))
            .collect();
        columns.push(TrackColumn { label: spec.label(), values });
    }
    Ok(TrackTable { columns })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TailBehavior {
    ConvergesTo(f64),
    GrowsLikeLog,
    GrowsLikePower { q: f64 },
    GrowsUndetermined,
}

impl TailBehavior {
    pub fn is_bounded(&self) -> bool {
        matches!(self, TailBehavior::ConvergesTo(_))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelFit {
    pub model: &'static str,
    pub params: Vec<f64>,
    pub rms_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictConsistency {
    pub predicted_bounded: bool,
    pub observed_bounded: bool,
    pub consistent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundednessDiagnosis {
    pub behavior: TailBehavior,
    pub empirical_sup: f64,
    pub tail_points: usize,
    pub fits: Vec<ModelFit>,
    pub verdict_consistency: Option<VerdictConsistency>,
}

impl BoundednessDiagnosis {
    pub fn attach_consistency(&mut self, predicted_bounded: bool) {
        let observed = self.behavior.is_bounded();
        self.verdict_consistency = Some(VerdictConsistency {
            predicted_bounded,
            observed_bounded: observed,
            consistent: predicted_bounded == observed,
        });
    }
}

fn least_squares_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return (sy / n, 0.0);
    }
    let b = (n * sxy - sx * sy) / denom;
    let a = (sy - b * sx) / n;
    (a, b)
}

fn rms(res: impl Iterator<Item = f64>, count: usize) -> f64 {
    (res.map(|r| r * r).sum::<f64>() / count as f64).sqrt()
}

/// Classifies the tail of `values` as λ -> λ* using octave-binned
/// increments, and reports least-squares fits of the three candidate
/// models (constant, log, power).
pub fn diagnose_boundedness(
    lambdas: &[f64],
    values: &[f64],
    lambda_star: f64,
) -> Result<BoundednessDiagnosis, AnalysisError> {
    assert_eq!(lambdas.len(), values.len());
    let frac = 0.99;
    let tail: Vec<(f64, f64)> = lambdas
        .iter()
        .zip(values)
        .filter(|(l, v)| **l >= frac * lambda_star && l.is_finite() && v.is_finite())
        .map(|(l, v)| (*l, *v))
        .collect();
    if tail.len() < 10 {
        return Err(AnalysisError::InsufficientTail {
            need: 10,
            found: tail.len(),
            frac,
        });
    }
    let empirical_sup = tail.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let scale = tail.iter().map(|p| p.1.abs()).fold(0.0, f64::max).max(1e-300);

    // distance to the extremal parameter, floored at the λ noise level
    let floor = 1e-11 * lambda_star.abs().max(1e-300);
    let pts: Vec<(f64, f64)> = tail
        .iter()
        .map(|(l, v)| ((lambda_star - l).max(floor), *v))
        .collect();

    // least-squares fits reported alongside the classification
    let ln_inv_x: Vec<f64> = pts.iter().map(|p| -p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let fit_const = ModelFit {
        model: "constant",
        params: vec![mean],
        rms_residual: rms(ys.iter().map(|y| y - mean), ys.len()) / scale,
    };
    let (a_log, b_log) = least_squares_line(&ln_inv_x, &ys);
    let fit_log = ModelFit {
        model: "log",
        params: vec![a_log, b_log],
        rms_residual: rms(
            ln_inv_x.iter().zip(&ys).map(|(x, y)| y - (a_log + b_log * x)),
            ys.len(),
        ) / scale,
    };
    let fit_power = if ys.iter().all(|y| *y > 0.0) {
        let ln_x: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
        let ln_y: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
        let (a, neg_q) = least_squares_line(&ln_x, &ln_y);
        let q = -neg_q;
        ModelFit {
            model: "power",
            params: vec![a.exp(), q],
            rms_residual: rms(
                ln_x.iter().zip(&ys).map(|(x, y)| y - (a - q * x).exp()),
                ys.len(),
            ) / scale,
        }
    } else {
        ModelFit { model: "power", params: vec![], rms_residual: f64::INFINITY }
    };

    // octave-binned means in the approach direction (x shrinking)
    let x_max = pts.iter().map(|p| p.0).fold(0.0, f64::max);
    let mut bins: Vec<(usize, f64, usize)> = Vec::new(); // (octave, sum, count)
    for &(x, y) in &pts {
        if x <= floor * 1.001 {
            continue; // below the λ noise floor
        }
        let oct = (x_max / x).log2().floor() as usize;
        match bins.iter_mut().find(|b| b.0 == oct) {
            Some(b) => {
                b.1 += y;
                b.2 += 1;
            }
            None => bins.push((oct, y, 1)),
        }
    }
    bins.sort_by_key(|b| b.0);
    let means: Vec<f64> = bins.iter().map(|b| b.1 / b.2 as f64).collect();

    let total_variation = empirical_sup - tail.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let behavior = classify_octaves(&means, total_variation, scale, &ys);

    let fits = vec![fit_const, fit_log, fit_power];
    Ok(BoundednessDiagnosis {
        behavior,
        empirical_sup,
        tail_points: tail.len(),
        fits,
        verdict_consistency: None,
    })
}

fn classify_octaves(means: &[f64], total_variation: f64, scale: f64, ys: &[f64]) -> TailBehavior {
    let last = *ys.last().unwrap();
    if total_variation <= 1e-3 * scale {
        return TailBehavior::ConvergesTo(last);
    }
    if means.len() < 4 {
        return TailBehavior::GrowsUndetermined;
    }
    // increments between successive octaves, approaching λ*
    let incs: Vec<f64> = means.windows(2).map(|w| w[1] - w[0]).collect();
    let active: Vec<f64> = incs
        .iter()
        .cloned()
        .filter(|d| d.abs() > 1e-9 * scale)
        .collect();
    if active.len() < 3 {
        return TailBehavior::ConvergesTo(last);
    }
    let take = active.len().min(8);
    let recent = &active[active.len() - take..];
    if recent.iter().any(|d| *d < 0.0) && recent.iter().any(|d| *d > 0.0) {
        return if total_variation <= 0.02 * scale {
            TailBehavior::ConvergesTo(last)
        } else {
            TailBehavior::GrowsUndetermined
        };
    }
    let decreasing_magnitude = recent.last().unwrap().abs();
    let mut ratios = Vec::new();
    for w in recent.windows(2) {
        if w[0].abs() > 1e-300 {
            ratios.push(w[1].abs() / w[0].abs());
        }
    }
    let mut sorted = ratios.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = sorted[sorted.len() / 2];
    if median <= 0.8 {
        // geometric decay of increments: extrapolate the limit
        let extra = decreasing_magnitude * median / (1.0 - median);
        let limit = last + recent.last().unwrap().signum() * extra;
        TailBehavior::ConvergesTo(limit)
    } else if median < 1.25 {
        TailBehavior::GrowsLikeLog
    } else {
        // per-octave increments grow like 2^q
        TailBehavior::GrowsLikePower { q: median.log2() }
    }
}

/// Deterministic uniform CSV float formatting (17 significant digits).
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Branch + tracked columns as CSV: m, R, lambda, mu1, u_inf, then one
/// column per tracked quantity.
pub fn branch_csv(branch: &Branch, table: &TrackTable) -> String {
    let mut header = String::from("m,R,lambda,mu1,u_inf");
    for col in &table.columns {
        header.push(',');
        header.push_str(&col.label);
    }
    header.push('\n');
    let mut out = header;
    for (i, p) in branch.points.iter().enumerate() {
        let mut row = vec![
            fmt_f64(p.m),
            fmt_f64(p.r_scale),
            fmt_f64(p.lambda),
            p.mu1.map(fmt_f64).unwrap_or_default(),
            fmt_f64(p.m),
        ];
        for col in &table.columns {
            row.push(col.values[i].map(fmt_f64).unwrap_or_default());
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Reads back a CSV produced by [`branch_csv`]; used by the round-trip
/// checks.
pub fn parse_csv(text: &str) -> Option<(Vec<String>, Vec<Vec<Option<f64>>>)> {
    let mut lines = text.lines();
    let header: Vec<String> = lines.next()?.split(',').map(|s| s.to_string()).collect();
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let row: Vec<Option<f64>> = line
            .split(',')
            .map(|cell| {
                if cell.is_empty() {
                    None
                } else {
                    cell.parse::<f64>().ok()
                }
            })
            .collect();
        if row.len() != header.len() {
            return None;
        }
        rows.push(row);
    }
    Some((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{integrate_profile, OdeControls};

    #[test]
    fn sphere_surface_values() {
        assert!((ball_surface(2) - 2.0 * std::f64::consts::PI).abs() < 1e-14);
        assert!((ball_surface(3) - 4.0 * std::f64::consts::PI).abs() < 1e-13);
        // ω_3 = 2 π²
        assert!((ball_surface(4) - 2.0 * std::f64::consts::PI.powi(2)).abs() < 1e-13);
    }

    fn parabola_profile(n: u32) -> RadialProfile {
        // u = 1 - r², u' = -2r on a uniform grid; only the grid fields are
        // used by ball_integral.
        let pts = 1025;
        let r: Vec<f64> = (0..pts).map(|i| i as f64 / (pts - 1) as f64).collect();
        let u: Vec<f64> = r.iter().map(|r| 1.0 - r * r).collect();
        let du: Vec<f64> = r.iter().map(|r| -2.0 * r).collect();
        RadialProfile::synthetic(n, r, u, du)
    }

    #[test]
    fn ball_integral_closed_forms() {
        let p = parabola_profile(2);
        // ||u||_L2^2 = 2π ∫ (1-r²)² r dr = π/3
        let l2 = ball_integral(&p, &|_, u, _| u * u);
        assert!((l2 - std::f64::consts::PI / 3.0).abs() < 1e-10);
        // ∫ |∇u|² = 2π ∫ 4r² r dr = 2π
        let grad = ball_integral(&p, &|_, _, du| du * du);
        assert!((grad - 2.0 * std::f64::consts::PI).abs() < 1e-10);
        // volume of the unit 3-ball
        let p3 = parabola_profile(3);
        let vol = ball_integral(&p3, &|_, _, _| 1.0);
        assert!((vol - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-10);
    }

    #[test]
    fn ball_integral_richardson_estimate_is_tiny_for_smooth_integrands() {
        let p = parabola_profile(3);
        let (_, err) = ball_integral_checked(&p, &|_, u, _| (1.0 + u).exp());
        assert!(err < 1e-10);
    }

    #[test]
    fn nedev_integrand_limit_at_zero() {
        let f = Nonlinearity::exponential();
        let p = integrate_profile(&f, 2, 1e-6, &OdeControls::default()).unwrap();
        let branch = Branch {
            n: 2,
            points: vec![crate::radial::BranchPoint {
                m: p.m,
                r_scale: p.r_scale,
                lambda: p.lambda,
                mu1: None,
                profile: Some(p),
                error: None,
            }],
            lambda_star: 1.0,
            fold_m: None,
            monotone: true,
        };
        let t = track(&f, &branch, &[QuantitySpec::IntNedev], 1e-10).unwrap();
        let v = t.columns[0].values[0].unwrap();
        // integrand ~ f'(0)^2 u near u = 0, so the integral scales with m
        assert!(v >= 0.0 && v < 4.0 * 1e-6, "integral should vanish with u: {v}");
    }

    #[test]
    fn diagnosis_constant_series() {
        let lambdas: Vec<f64> = (0..40).map(|k| 2.0 - 1e-4 / (k + 1) as f64).collect();
        let values = vec![3.5; 40];
        let d = diagnose_boundedness(&lambdas, &values, 2.0).unwrap();
        match d.behavior {
            TailBehavior::ConvergesTo(v) => assert!((v - 3.5).abs() < 1e-12),
            other => panic!("expected convergence, got {other:?}"),
        }
        assert_eq!(d.empirical_sup, 3.5);
    }

    #[test]
    fn diagnosis_log_growth() {
        // y = 7 - ln(λ* - λ)
        let star = 2.0;
        let lambdas: Vec<f64> = (0..60).map(|k| star - 1e-2 * 0.8f64.powi(k)).collect();
        let values: Vec<f64> = lambdas.iter().map(|l| 7.0 - (star - l).ln()).collect();
        let d = diagnose_boundedness(&lambdas, &values, star).unwrap();
        assert_eq!(d.behavior, TailBehavior::GrowsLikeLog, "{:?}", d);
    }

    #[test]
    fn diagnosis_power_growth() {
        let star = 2.0;
        let lambdas: Vec<f64> = (0..60).map(|k| star - 1e-2 * 0.8f64.powi(k)).collect();
        let values: Vec<f64> = lambdas.iter().map(|l| (star - l).powf(-0.8)).collect();
        let d = diagnose_boundedness(&lambdas, &values, star).unwrap();
        match d.behavior {
            TailBehavior::GrowsLikePower { q } => assert!((q - 0.8).abs() < 0.25, "q = {q}"),
            other => panic!("expected power growth, got {other:?}"),
        }
    }

    #[test]
    fn diagnosis_fold_approach_converges() {
        // y = 5 - sqrt(λ* - λ): bounded, increments decay geometrically
        let star = 2.0;
        let lambdas: Vec<f64> = (0..60).map(|k| star - 1e-2 * 0.8f64.powi(k)).collect();
        let values: Vec<f64> = lambdas.iter().map(|l| 5.0 - (star - l).sqrt()).collect();
        let d = diagnose_boundedness(&lambdas, &values, star).unwrap();
        match d.behavior {
            TailBehavior::ConvergesTo(v) => assert!((v - 5.0).abs() < 0.02, "limit {v}"),
            other => panic!("expected convergence, got {other:?}"),
        }
    }

    #[test]
    fn diagnosis_requires_tail() {
        let lambdas = vec![1.0, 1.5, 1.9];
        let values = vec![1.0, 2.0, 3.0];
        assert!(matches!(
            diagnose_boundedness(&lambdas, &values, 2.0),
            Err(AnalysisError::InsufficientTail { .. })
        ));
    }

    #[test]
    fn csv_round_trip() {
        let f = Nonlinearity::exponential();
        let grid: Vec<f64> = (1..=6).map(|k| k as f64 * 0.2).collect();
        let opts = crate::radial::SweepOptions {
            eigen: None,
            threads: 1,
            ..Default::default()
        };
        let b = crate::radial::branch_sweep(&f, 2, &grid, &opts);
        let t = track(
            &f,
            &b,
            &[QuantitySpec::IntFfPrime, QuantitySpec::LpNorm { r: 2.0 }],
            1e-10,
        )
        .unwrap();
        let csv = branch_csv(&b, &t);
        let (header, rows) = parse_csv(&csv).unwrap();
        assert_eq!(header[0], "m");
        assert_eq!(rows.len(), 6);
        for (i, p) in b.points.iter().enumerate() {
            assert_eq!(rows[i][0].unwrap(), p.m);
            assert_eq!(rows[i][2].unwrap(), p.lambda);
        }
    }
}
