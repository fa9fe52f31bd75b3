//! Asymptotic classifiers of a nonlinearity: the convexity ratio
//! q(t) = f f''/f'^2 with its liminf/limsup (τ₋, τ₊), the convex-power
//! exponent δ, and the battery of tail growth conditions used by the
//! verdict rules.
//!
//! Everything numeric here samples a geometric grid and judges the tail by
//! comparing extrema over dyadic windows. A limit that cannot be resolved is
//! reported `Inconclusive` and stays that way — downstream rules simply do
//! not fire on inconclusive inputs.

use crate::nonlinearity::{FEval, Nonlinearity};
use serde::Serialize;
use thiserror::Error;

pub const DEFAULT_T_MAX: f64 = 1e8;
pub const DEFAULT_WINDOWS: usize = 5;
/// Window-extrema agreement tolerance for "converged".
pub const WINDOW_TOL: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum AsymptoticsError {
    #[error("invalid condition parameter: {0}")]
    Parameter(String),
    #[error("unknown condition id '{0}'")]
    UnknownCondition(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Confidence {
    ClosedForm,
    NumericConverged,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Trend {
    Converged,
    Increasing,
    Decreasing,
    Mixed,
}

/// Geometric sample (ratio 1.1 from t = 1) of the tail, keeping only points
/// with a finite derivative triple.
pub struct TailGrid {
    pub samples: Vec<(f64, FEval)>,
}

impl TailGrid {
    pub fn build(f: &Nonlinearity, t_max: f64) -> TailGrid {
        let mut samples = Vec::new();
        let mut t = 1.0;
        while t <= t_max {
            let e = f.eval(t);
            if !(e.f.is_finite() && e.f1.is_finite() && e.f2.is_finite()) {
                break;
            }
            samples.push((t, e));
            t *= 1.1;
        }
        TailGrid { samples }
    }

    pub fn t_end(&self) -> Option<f64> {
        self.samples.last().map(|(t, _)| *t)
    }
}

/// Extrema of `value` over the last `windows` dyadic windows
/// (T/2^W, T/2^(W-1)], ..., (T/2, T], earliest window first.
fn window_extrema(
    points: &[(f64, f64)],
    windows: usize,
) -> Option<(Vec<f64>, Vec<f64>)> {
    let t_end = points.last()?.0;
    let mut infs = Vec::with_capacity(windows);
    let mut sups = Vec::with_capacity(windows);
    for j in 0..windows {
        let hi = t_end / 2f64.powi((windows - 1 - j) as i32);
        let lo = hi / 2.0;
        let mut inf = f64::INFINITY;
        let mut sup = f64::NEG_INFINITY;
        let mut count = 0usize;
        for &(t, v) in points {
            if t > lo && t <= hi {
                inf = inf.min(v);
                sup = sup.max(v);
                count += 1;
            }
        }
        if count < 2 {
            return None;
        }
        infs.push(inf);
        sups.push(sup);
    }
    Some((infs, sups))
}

fn classify(w: &[f64], tol: f64) -> Trend {
    if w.iter().any(|x| x.is_nan()) {
        return Trend::Mixed;
    }
    let diffs: Vec<f64> = w.windows(2).map(|p| p[1] - p[0]).collect();
    if diffs.iter().all(|d| d.abs() <= tol) {
        return Trend::Converged;
    }
    let pos = diffs.iter().any(|d| *d > tol);
    let neg = diffs.iter().any(|d| *d < -tol);
    match (pos, neg) {
        (true, false) => {
            if diffs.last().map(|d| d.abs() <= tol).unwrap_or(false) {
                Trend::Converged // settled after an initial rise
            } else {
                Trend::Increasing
            }
        }
        (false, true) => {
            if diffs.last().map(|d| d.abs() <= tol).unwrap_or(false) {
                Trend::Converged
            } else {
                Trend::Decreasing
            }
        }
        _ => Trend::Mixed,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TauEstimate {
    pub tau_minus: Option<f64>,
    pub tau_plus: Option<f64>,
    pub confidence: Confidence,
}

/// liminf/limsup of q(t) = f f''/f'^2 over the sampled tail. Built-in
/// families short-circuit to their closed forms.
pub fn estimate_tau(f: &Nonlinearity, t_max: f64, windows: usize) -> TauEstimate {
    if let Some((tm, tp)) = f.closed_form_tau() {
        return TauEstimate {
            tau_minus: Some(tm),
            tau_plus: Some(tp),
            confidence: Confidence::ClosedForm,
        };
    }
    let grid = TailGrid::build(f, t_max);
    // q computed as (f/f')(f''/f') so huge-but-cancelling magnitudes
    // (e.g. exp) never overflow.
    let points: Vec<(f64, f64)> = grid
        .samples
        .iter()
        .filter(|(_, e)| e.f1 > 0.0)
        .map(|(t, e)| (*t, (e.f / e.f1) * (e.f2 / e.f1)))
        .collect();
    if points.len() < grid.samples.len().max(8) / 2 {
        // f' vanished on a substantial part of the tail
        return TauEstimate { tau_minus: None, tau_plus: None, confidence: Confidence::Inconclusive };
    }
    let Some((infs, sups)) = window_extrema(&points, windows) else {
        return TauEstimate { tau_minus: None, tau_plus: None, confidence: Confidence::Inconclusive };
    };
    let tau_minus = infs.iter().cloned().fold(f64::INFINITY, f64::min);
    let tau_plus = sups.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let conf = if classify(&infs, WINDOW_TOL) == Trend::Converged
        && classify(&sups, WINDOW_TOL) == Trend::Converged
    {
        Confidence::NumericConverged
    } else {
        Confidence::Inconclusive
    };
    TauEstimate { tau_minus: Some(tau_minus), tau_plus: Some(tau_plus), confidence: conf }
}

/// The tail growth conditions. Numbers follow the profile's field names.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Condition {
    /// f' <= C f^(1+eps) on the tail.
    C1_6 { eps: f64 },
    /// f' <= C f^(1-eps) on the tail.
    C1_7 { eps: f64 },
    /// liminf t^(2-gamma) f^(1+gamma) f'' / f'^(1+eps) > 0.
    C1_25 { gamma: f64, eps: f64 },
    /// f' <= C t^delta f^gamma on the tail.
    C1_26 { gamma: f64, delta: f64 },
    /// t f' - f >= eps f on the tail.
    C1_29,
    /// t f' - f >= eps t on the tail.
    C1_30,
    /// f'(t) f(t - f/f') >= eps t on the tail.
    C1_31,
    /// f''/f >= C / (t^2 (ln t)^gamma) on the tail.
    C1_32 { gamma: f64 },
}

impl Condition {
    /// Builds a condition from its textual id, taking whatever parameters
    /// it needs from `params` (keys: gamma, delta, eps).
    pub fn from_id(id: &str, params: &[(&str, f64)]) -> Result<Condition, AsymptoticsError> {
        let get = |key: &str| params.iter().find(|p| p.0 == key).map(|p| p.1);
        let missing =
            |key: &str| AsymptoticsError::Parameter(format!("condition {id} needs '{key}'"));
        let cond = match id.trim_matches(|c| c == '(' || c == ')') {
            "1.6" => Condition::C1_6 { eps: get("eps").ok_or_else(|| missing("eps"))? },
            "1.7" => Condition::C1_7 { eps: get("eps").ok_or_else(|| missing("eps"))? },
            "1.25" => Condition::C1_25 {
                gamma: get("gamma").ok_or_else(|| missing("gamma"))?,
                eps: get("eps").ok_or_else(|| missing("eps"))?,
            },
            "1.26" => Condition::C1_26 {
                gamma: get("gamma").ok_or_else(|| missing("gamma"))?,
                delta: get("delta").unwrap_or(0.0),
            },
            "1.29" => Condition::C1_29,
            "1.30" => Condition::C1_30,
            "1.31" => Condition::C1_31,
            "1.32" => Condition::C1_32 { gamma: get("gamma").ok_or_else(|| missing("gamma"))? },
            other => return Err(AsymptoticsError::UnknownCondition(other.to_string())),
        };
        cond.validate()?;
        Ok(cond)
    }

    pub fn id(&self) -> &'static str {
        match self {
            Condition::C1_6 { .. } => "(1.6)",
            Condition::C1_7 { .. } => "(1.7)",
            Condition::C1_25 { .. } => "(1.25)",
            Condition::C1_26 { .. } => "(1.26)",
            Condition::C1_29 => "(1.29)",
            Condition::C1_30 => "(1.30)",
            Condition::C1_31 => "(1.31)",
            Condition::C1_32 { .. } => "(1.32)",
        }
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Condition::C1_6 { eps } | Condition::C1_7 { eps } => vec![("eps", eps)],
            Condition::C1_25 { gamma, eps } => vec![("gamma", gamma), ("eps", eps)],
            Condition::C1_26 { gamma, delta } => vec![("gamma", gamma), ("delta", delta)],
            Condition::C1_29 | Condition::C1_30 | Condition::C1_31 => vec![],
            Condition::C1_32 { gamma } => vec![("gamma", gamma)],
        }
    }

    fn validate(&self) -> Result<(), AsymptoticsError> {
        let bad = |m: String| Err(AsymptoticsError::Parameter(m));
        match *self {
            Condition::C1_6 { eps } if !(eps > 0.0) => bad(format!("(1.6) needs eps > 0, got {eps}")),
            Condition::C1_7 { eps } if !(eps > 0.0 && eps < 1.0) => {
                bad(format!("(1.7) needs eps in (0,1), got {eps}"))
            }
            Condition::C1_25 { gamma, eps } if !(0.0..=2.0).contains(&gamma) || !(eps > 0.0) => {
                bad(format!("(1.25) needs gamma in [0,2] and eps > 0, got ({gamma},{eps})"))
            }
            Condition::C1_26 { gamma, delta } if !(gamma >= 0.0 && (0.0..=gamma).contains(&delta)) => {
                bad(format!("(1.26) needs gamma >= 0 and delta in [0,gamma], got ({gamma},{delta})"))
            }
            Condition::C1_32 { gamma } if !(gamma > 0.0 && gamma < 2.0) => {
                bad(format!("(1.32) needs gamma in (0,2), got {gamma}"))
            }
            _ => Ok(()),
        }
    }

    /// Is the condition of the form "ratio stays bounded above" (upper) or
    /// "ratio stays bounded below away from zero" (lower)?
    fn is_upper(&self) -> bool {
        matches!(self, Condition::C1_6 { .. } | Condition::C1_7 { .. } | Condition::C1_26 { .. })
    }

    /// ln of the defining ratio at a tail sample; -inf encodes ratio <= 0.
    fn ln_ratio(&self, f: &Nonlinearity, t: f64, e: &FEval) -> f64 {
        let ln_pos = |x: f64| if x > 0.0 { x.ln() } else { f64::NEG_INFINITY };
        match *self {
            Condition::C1_6 { eps } => ln_pos(e.f1) - (1.0 + eps) * ln_pos(e.f),
            Condition::C1_7 { eps } => ln_pos(e.f1) - (1.0 - eps) * ln_pos(e.f),
            Condition::C1_25 { gamma, eps } => {
                (2.0 - gamma) * t.ln() + (1.0 + gamma) * ln_pos(e.f) + ln_pos(e.f2)
                    - (1.0 + eps) * ln_pos(e.f1)
            }
            Condition::C1_26 { gamma, delta } => {
                ln_pos(e.f1) - delta * t.ln() - gamma * ln_pos(e.f)
            }
            Condition::C1_29 => ln_pos(t * e.f1 - e.f) - ln_pos(e.f),
            Condition::C1_30 => ln_pos(t * e.f1 - e.f) - t.ln(),
            Condition::C1_31 => {
                if e.f1 <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                let h = t - e.f / e.f1;
                if h < 0.0 {
                    return f64::NEG_INFINITY;
                }
                ln_pos(e.f1) + ln_pos(f.f(h)) - t.ln()
            }
            Condition::C1_32 { gamma } => {
                ln_pos(e.f2) - ln_pos(e.f) + 2.0 * t.ln() + gamma * t.ln().ln()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub condition: String,
    pub params: Vec<(String, f64)>,
    pub outcome: Outcome,
    /// Empirical tail constant: sup of the ratio for upper conditions, inf
    /// for lower ones. Only a statement about the sampled tail.
    pub empirical_constant: Option<f64>,
    pub trend: Trend,
    pub tail_range: (f64, f64),
}

/// Samples the condition's defining inequality on the tail of `grid` and
/// classifies the window trend.
pub fn check_condition(
    f: &Nonlinearity,
    cond: Condition,
    grid: &TailGrid,
    windows: usize,
) -> Result<ConditionReport, AsymptoticsError> {
    cond.validate()?;
    // (1.32) needs ln ln t; every condition is a tail statement anyway.
    let t_min = 2.0;
    let points: Vec<(f64, f64)> = grid
        .samples
        .iter()
        .filter(|(t, _)| *t >= t_min)
        .map(|(t, e)| (*t, cond.ln_ratio(f, *t, e)))
        .collect();
    let params = cond
        .params()
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    let mut report = ConditionReport {
        condition: cond.id().to_string(),
        params,
        outcome: Outcome::Inconclusive,
        empirical_constant: None,
        trend: Trend::Mixed,
        tail_range: (
            points.first().map(|p| p.0).unwrap_or(f64::NAN),
            points.last().map(|p| p.0).unwrap_or(f64::NAN),
        ),
    };
    let Some((infs, sups)) = window_extrema(&points, windows) else {
        return Ok(report);
    };
    if cond.is_upper() {
        let tracked = &sups;
        report.trend = classify(tracked, WINDOW_TOL);
        let sup_all = tracked.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        report.empirical_constant = Some(sup_all.exp());
        report.outcome = match report.trend {
            Trend::Converged | Trend::Decreasing => Outcome::Holds,
            Trend::Increasing => Outcome::Fails,
            Trend::Mixed => Outcome::Inconclusive,
        };
    } else {
        let tracked = &infs;
        if tracked.iter().any(|v| *v == f64::NEG_INFINITY) {
            report.trend = Trend::Decreasing;
            report.empirical_constant = Some(0.0);
            report.outcome = Outcome::Fails;
            return Ok(report);
        }
        report.trend = classify(tracked, WINDOW_TOL);
        let inf_all = tracked.iter().cloned().fold(f64::INFINITY, f64::min);
        report.empirical_constant = Some(inf_all.exp());
        report.outcome = match report.trend {
            Trend::Converged | Trend::Increasing => Outcome::Holds,
            Trend::Decreasing => Outcome::Fails,
            Trend::Mixed => Outcome::Inconclusive,
        };
    }
    Ok(report)
}

/// Largest delta in (0,1) with (f^(1-delta))'' >= 0 on the sampled tail,
/// i.e. delta <= inf q over the tail. Closed-form tau families shortcut to
/// tau_minus - 1e-6.
pub fn convex_power_delta(f: &Nonlinearity, t_max: f64) -> (Option<f64>, Confidence) {
    const EPS_HAT: f64 = 1e-6;
    if let Some((tm, _)) = f.closed_form_tau() {
        if tm >= 1e-3 {
            return (Some((tm - EPS_HAT).min(1.0 - EPS_HAT)), Confidence::ClosedForm);
        }
        return (None, Confidence::ClosedForm);
    }
    let grid = TailGrid::build(f, t_max);
    let points: Vec<(f64, f64)> = grid
        .samples
        .iter()
        .filter(|(t, e)| *t >= 2.0 && e.f1 > 0.0)
        .map(|(t, e)| (*t, (e.f / e.f1) * (e.f2 / e.f1)))
        .collect();
    if points.len() < 8 {
        return (None, Confidence::Inconclusive);
    }
    let admissible = |delta: f64| points.iter().all(|(_, q)| *q >= delta);
    if !admissible(1e-3) {
        return (None, Confidence::NumericConverged);
    }
    let (mut lo, mut hi) = (1e-3, 1.0);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if admissible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (Some((lo - EPS_HAT).max(1e-3)), Confidence::NumericConverged)
}

/// Everything the verdict engine wants to know about f's tail.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticProfile {
    pub description: String,
    pub hypotheses: crate::nonlinearity::Hypotheses,
    pub tau_minus: Option<f64>,
    pub tau_plus: Option<f64>,
    pub tau_confidence: Confidence,
    pub convex_power_delta: Option<f64>,
    pub delta_confidence: Confidence,
    /// Established conditions, with the parameters that held. Absent fields
    /// mean "not established on the sampled tail".
    pub cond_1_6: Option<ConditionReport>,
    pub cond_1_7: Option<ConditionReport>,
    pub cond_1_25: Option<ConditionReport>,
    pub cond_1_26: Option<ConditionReport>,
    pub cond_1_29: ConditionReport,
    pub cond_1_30: ConditionReport,
    pub cond_1_31: ConditionReport,
    pub cond_1_32: Option<ConditionReport>,
}

#[derive(Debug, Clone, Copy)]
pub struct ProfileOptions {
    pub t_max: f64,
    pub windows: usize,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions { t_max: DEFAULT_T_MAX, windows: DEFAULT_WINDOWS }
    }
}

pub fn profile(f: &Nonlinearity, opts: ProfileOptions) -> AsymptoticProfile {
    let grid = TailGrid::build(f, opts.t_max);
    let w = opts.windows;
    let tau = estimate_tau(f, opts.t_max, w);
    let (delta, delta_conf) = convex_power_delta(f, opts.t_max);

    let holding = |c: Condition| -> Option<ConditionReport> {
        check_condition(f, c, &grid, w)
            .ok()
            .filter(|r| r.outcome == Outcome::Holds)
    };

    // (1.6) is an every-eps family: record the smallest sampled eps that held.
    let cond_1_6 = [0.1, 0.25, 0.5]
        .iter()
        .find_map(|&eps| holding(Condition::C1_6 { eps }));
    // (1.7) is existential: larger eps is the stronger statement.
    let cond_1_7 = [0.9, 0.75, 0.5, 0.25, 0.1]
        .iter()
        .find_map(|&eps| holding(Condition::C1_7 { eps }));

    // (1.25): prefer the largest eps - gamma (it drives the certificate).
    let mut cond_1_25 = None;
    'outer: for &gap in &[2.0, 1.5, 1.25, 1.0, 0.9, 0.75, 0.6] {
        for &gamma in &[0.0, 0.5, 1.0, 1.5, 2.0] {
            if let Some(rep) = holding(Condition::C1_25 { gamma, eps: gamma + gap }) {
                cond_1_25 = Some(rep);
                break 'outer;
            }
        }
    }

    // (1.26): smallest gamma that holds (delta = 0 first), by bisection on
    // the monotone predicate.
    let mut cond_1_26 = None;
    for &delta_p in &[0.0f64, 0.5, 1.0] {
        let lo_limit = delta_p.max(1e-2);
        if holding(Condition::C1_26 { gamma: 8.0, delta: delta_p }).is_none() {
            continue;
        }
        let (mut lo, mut hi) = (lo_limit, 8.0);
        for _ in 0..24 {
            let mid = 0.5 * (lo + hi);
            if holding(Condition::C1_26 { gamma: mid, delta: delta_p }).is_some() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let gamma = (hi + 2e-3).min(8.0);
        cond_1_26 = holding(Condition::C1_26 { gamma, delta: delta_p });
        if cond_1_26.is_some() {
            break;
        }
    }

    let cond_1_29 = check_condition(f, Condition::C1_29, &grid, w).expect("no params");
    let cond_1_30 = check_condition(f, Condition::C1_30, &grid, w).expect("no params");
    let cond_1_31 = check_condition(f, Condition::C1_31, &grid, w).expect("no params");

    // (1.32): smallest grid gamma that holds.
    let cond_1_32 = [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75]
        .iter()
        .find_map(|&gamma| holding(Condition::C1_32 { gamma }));

    AsymptoticProfile {
        description: f.description(),
        hypotheses: f.hypotheses(),
        tau_minus: tau.tau_minus,
        tau_plus: tau.tau_plus,
        tau_confidence: tau.confidence,
        convex_power_delta: delta,
        delta_confidence: delta_conf,
        cond_1_6,
        cond_1_7,
        cond_1_25,
        cond_1_26,
        cond_1_29,
        cond_1_30,
        cond_1_31,
        cond_1_32,
    }
}

impl AsymptoticProfile {
    /// τ₋ usable by rules requiring a strictly positive liminf.
    pub fn usable_tau_minus(&self) -> Option<f64> {
        match (self.tau_minus, self.tau_confidence) {
            (Some(tm), Confidence::ClosedForm | Confidence::NumericConverged) if tm >= 1e-3 => {
                Some(tm)
            }
            _ => None,
        }
    }

    pub fn usable_tau_plus(&self) -> Option<f64> {
        match (self.tau_plus, self.tau_confidence) {
            (Some(tp), Confidence::ClosedForm | Confidence::NumericConverged) if tp.is_finite() => {
                Some(tp)
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_f() -> Nonlinearity {
        Nonlinearity::exponential()
    }

    #[test]
    fn closed_form_taus() {
        let t = estimate_tau(&exp_f(), 1e8, 5);
        assert_eq!((t.tau_minus, t.tau_plus), (Some(1.0), Some(1.0)));
        assert_eq!(t.confidence, Confidence::ClosedForm);

        let p3 = Nonlinearity::power_shifted(3.0).unwrap();
        let t = estimate_tau(&p3, 1e8, 5);
        assert_eq!(t.tau_minus, Some(2.0 / 3.0));
        assert_eq!(t.confidence, Confidence::ClosedForm);

        let ll = Nonlinearity::lin_log().unwrap();
        let t = estimate_tau(&ll, 1e8, 5);
        assert_eq!((t.tau_minus, t.tau_plus), (Some(0.0), Some(0.0)));
    }

    #[test]
    fn numeric_tau_on_parsed_expressions() {
        let f = Nonlinearity::parse("exp(t)").unwrap();
        let t = estimate_tau(&f, 1e8, 5);
        assert_eq!(t.confidence, Confidence::NumericConverged);
        assert!((t.tau_minus.unwrap() - 1.0).abs() < 1e-3);
        assert!((t.tau_plus.unwrap() - 1.0).abs() < 1e-3);

        let f = Nonlinearity::parse("(1+t)^3").unwrap();
        let t = estimate_tau(&f, 1e8, 5);
        assert_eq!(t.confidence, Confidence::NumericConverged);
        assert!((t.tau_minus.unwrap() - 2.0 / 3.0).abs() < 1e-3);
        assert!((t.tau_plus.unwrap() - 2.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn linlog_ratio_decays_toward_zero() {
        // Confirms the closed-form limit by direct sampling: q(t) =
        // ln t/(ln t + 1)^2 is small and decreasing at t = 1e4..1e6.
        let f = Nonlinearity::lin_log().unwrap();
        let q = |t: f64| {
            let e = f.eval(t);
            (e.f / e.f1) * (e.f2 / e.f1)
        };
        let q4 = q(1e4);
        let q6 = q(1e6);
        let expected = |t: f64| t.ln() / (t.ln() + 1.0).powi(2);
        assert!((q6 - expected(1e6)).abs() < 1e-12);
        assert!(q6 < q4 && q6 < 0.07);
    }

    #[test]
    fn tau_order_invariant() {
        for f in [
            Nonlinearity::parse("exp(t)").unwrap(),
            Nonlinearity::parse("(1+t)^2").unwrap(),
            Nonlinearity::parse("exp(t) + t*t*t").unwrap(),
            Nonlinearity::parse("1 + t + t^4").unwrap(),
        ] {
            let t = estimate_tau(&f, 1e8, 5);
            if let (Some(a), Some(b)) = (t.tau_minus, t.tau_plus) {
                assert!(a <= b + 1e-15, "{}: {a} > {b}", f.description());
            }
        }
    }

    #[test]
    fn tau_scale_invariance_is_bit_exact_for_power_of_two_scaling() {
        // q = (f/f')(f''/f') sees c*f with c a power of two as exact
        // scalings, so the estimate is bit-identical.
        let a = estimate_tau(&Nonlinearity::parse("exp(t)").unwrap(), 1e8, 5);
        let b = estimate_tau(&Nonlinearity::parse("2*exp(t)").unwrap(), 1e8, 5);
        assert_eq!(
            a.tau_minus.unwrap().to_bits(),
            b.tau_minus.unwrap().to_bits()
        );
        assert_eq!(a.tau_plus.unwrap().to_bits(), b.tau_plus.unwrap().to_bits());
    }

    #[test]
    fn condition_1_26_exp_holds_with_c_one() {
        let f = exp_f();
        let grid = TailGrid::build(&f, 1e8);
        let rep = check_condition(&f, Condition::C1_26 { gamma: 1.0, delta: 0.0 }, &grid, 5).unwrap();
        assert_eq!(rep.outcome, Outcome::Holds);
        assert!((rep.empirical_constant.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn condition_1_30_fails_for_linlogpow_half() {
        // t f' - f = a t / (ln t)^(1-a) = o(t), so the per-t ratio decays.
        let f = Nonlinearity::lin_log_pow(0.5).unwrap();
        let grid = TailGrid::build(&f, 1e8);
        let rep = check_condition(&f, Condition::C1_30, &grid, 5).unwrap();
        assert_eq!(rep.outcome, Outcome::Fails);
        let rep29 = check_condition(&f, Condition::C1_29, &grid, 5).unwrap();
        assert_eq!(rep29.outcome, Outcome::Fails);
    }

    #[test]
    fn condition_1_31_on_linlogpow() {
        // Direct expansion gives f' f(t - f/f') ~ a t (ln t)^(2a-1), so the
        // check holds for a = 1/2 and decays (fails) for a = 1/4.
        let half = Nonlinearity::lin_log_pow(0.5).unwrap();
        let grid = TailGrid::build(&half, 1e8);
        let rep = check_condition(&half, Condition::C1_31, &grid, 5).unwrap();
        assert_eq!(rep.outcome, Outcome::Holds);

        let quarter = Nonlinearity::lin_log_pow(0.25).unwrap();
        let grid = TailGrid::build(&quarter, 1e8);
        let rep = check_condition(&quarter, Condition::C1_31, &grid, 5).unwrap();
        assert_eq!(rep.outcome, Outcome::Fails);
    }

    #[test]
    fn condition_1_32_on_linlogpow() {
        // f''/f ~ a/(t^2 ln t): gamma = 1 is the crossover, anything above
        // holds, well below fails.
        let f = Nonlinearity::lin_log_pow(0.5).unwrap();
        let grid = TailGrid::build(&f, 1e8);
        let hold = check_condition(&f, Condition::C1_32 { gamma: 1.25 }, &grid, 5).unwrap();
        assert_eq!(hold.outcome, Outcome::Holds);
        let fail = check_condition(&f, Condition::C1_32 { gamma: 0.5 }, &grid, 5).unwrap();
        assert_eq!(fail.outcome, Outcome::Fails);
    }

    #[test]
    fn condition_1_29_implies_1_30_for_superlinear_f() {
        for f in [
            exp_f(),
            Nonlinearity::power_shifted(2.0).unwrap(),
            Nonlinearity::power_shifted(5.0).unwrap(),
            Nonlinearity::lin_log().unwrap(),
            Nonlinearity::lin_log_pow(0.5).unwrap(),
        ] {
            let grid = TailGrid::build(&f, 1e8);
            let r29 = check_condition(&f, Condition::C1_29, &grid, 5).unwrap();
            let r30 = check_condition(&f, Condition::C1_30, &grid, 5).unwrap();
            if r29.outcome == Outcome::Holds {
                assert_eq!(r30.outcome, Outcome::Holds, "{}", f.description());
            }
        }
    }

    #[test]
    fn condition_parameter_validation() {
        let f = exp_f();
        let grid = TailGrid::build(&f, 1e4);
        assert!(check_condition(&f, Condition::C1_7 { eps: 1.5 }, &grid, 5).is_err());
        assert!(check_condition(&f, Condition::C1_26 { gamma: 1.0, delta: 2.0 }, &grid, 5).is_err());
        assert!(check_condition(&f, Condition::C1_32 { gamma: 2.5 }, &grid, 5).is_err());
    }

    #[test]
    fn condition_ids_parse_and_reject_unknowns() {
        assert_eq!(Condition::from_id("(1.29)", &[]).unwrap(), Condition::C1_29);
        assert_eq!(
            Condition::from_id("1.26", &[("gamma", 1.0)]).unwrap(),
            Condition::C1_26 { gamma: 1.0, delta: 0.0 }
        );
        assert!(matches!(
            Condition::from_id("(1.99)", &[]),
            Err(AsymptoticsError::UnknownCondition(_))
        ));
        assert!(Condition::from_id("(1.32)", &[]).is_err()); // gamma required
    }

    #[test]
    fn convex_power_delta_examples() {
        let (d, c) = convex_power_delta(&exp_f(), 1e8);
        assert_eq!(c, Confidence::ClosedForm);
        assert!((d.unwrap() - (1.0 - 1e-6)).abs() < 1e-12);

        let p3 = Nonlinearity::power_shifted(3.0).unwrap();
        let (d, _) = convex_power_delta(&p3, 1e8);
        assert!((d.unwrap() - (2.0 / 3.0 - 1e-6)).abs() < 1e-12);

        let ll = Nonlinearity::lin_log().unwrap();
        let (d, _) = convex_power_delta(&ll, 1e8);
        assert_eq!(d, None);

        // numeric route: sign check of (f^(1-delta))'' via bisection
        let p3n = Nonlinearity::parse("(1+t)^3").unwrap();
        let (d, c) = convex_power_delta(&p3n, 1e8);
        assert_eq!(c, Confidence::NumericConverged);
        assert!((d.unwrap() - 2.0 / 3.0).abs() < 2e-3);
    }

    #[test]
    fn profile_of_exponential() {
        let p = profile(&exp_f(), ProfileOptions::default());
        assert_eq!(p.tau_minus, Some(1.0));
        assert_eq!(p.tau_plus, Some(1.0));
        assert!(p.cond_1_26.is_some());
        assert!(p.cond_1_32.is_some());
        assert_eq!(p.cond_1_29.outcome, Outcome::Holds);
        assert_eq!(p.cond_1_31.outcome, Outcome::Holds);
        assert!(p.usable_tau_minus().is_some());
    }
}
