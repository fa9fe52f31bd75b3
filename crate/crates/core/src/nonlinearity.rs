//! Nonlinearities f with exact first and second derivatives.
//!
//! Built-in families carry closed-form derivatives; parsed expressions
//! propagate second-order jets. Everything here assumes the source problem's
//! standing hypotheses: f(0) > 0, f' ≥ 0, and superlinear growth
//! f(t)/t → ∞. Those are *validated by sampling*, not assumed, and the
//! validation outcome travels with the value so downstream consumers can
//! refuse to fire rules whose hypotheses failed.

use crate::expr::{ExprAst, ParseError};
use crate::jet::Jet2;
use serde::Serialize;
use thiserror::Error;

/// Crossover where the `t ln t`-type families switch from the convex blend
/// to their asymptotic formula: T0 = e^2.
pub const LINLOG_T0: f64 = 7.38905609893065;

#[derive(Debug, Error)]
pub enum NonlinearityError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("no convex quintic extension exists on [0, T0) for this family")]
    BlendNotConvex,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FEval {
    pub f: f64,
    pub f1: f64,
    pub f2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Exponential,
    PowerShifted { p: f64 },
    LinLog,
    LinLogPow { a: f64 },
    Custom(ExprAst),
}

impl Family {
    pub fn label(&self) -> String {
        match self {
            Family::Exponential => "exp(t)".into(),
            Family::PowerShifted { p } => format!("(1+t)^{p}"),
            Family::LinLog => "t*ln(t) blended near 0".into(),
            Family::LinLogPow { a } => format!("t*ln(t)^{a} blended near 0"),
            Family::Custom(ast) => ast.source().to_string(),
        }
    }
}

/// Quintic Hermite bridge on [0, T0] matching (f, f', f'') at T0 and
/// (1, 0, c2) at 0, with c2 the smallest value >= 0 keeping f'' >= 0.
#[derive(Debug, Clone, PartialEq)]
struct Blend {
    t0: f64,
    left: [f64; 3],
    right: [f64; 3],
}

fn quintic_bases(x: f64) -> ([f64; 6], [f64; 6], [f64; 6]) {
    let x2 = x * x;
    let x3 = x2 * x;
    let x4 = x3 * x;
    let x5 = x4 * x;
    let val = [
        1.0 - 10.0 * x3 + 15.0 * x4 - 6.0 * x5,
        x - 6.0 * x3 + 8.0 * x4 - 3.0 * x5,
        0.5 * (x2 - 3.0 * x3 + 3.0 * x4 - x5),
        10.0 * x3 - 15.0 * x4 + 6.0 * x5,
        -4.0 * x3 + 7.0 * x4 - 3.0 * x5,
        0.5 * (x3 - 2.0 * x4 + x5),
    ];
    let d1 = [
        -30.0 * x2 + 60.0 * x3 - 30.0 * x4,
        1.0 - 18.0 * x2 + 32.0 * x3 - 15.0 * x4,
        0.5 * (2.0 * x - 9.0 * x2 + 12.0 * x3 - 5.0 * x4),
        30.0 * x2 - 60.0 * x3 + 30.0 * x4,
        -12.0 * x2 + 28.0 * x3 - 15.0 * x4,
        0.5 * (3.0 * x2 - 8.0 * x3 + 5.0 * x4),
    ];
    let d2 = [
        -60.0 * x + 180.0 * x2 - 120.0 * x3,
        -36.0 * x + 96.0 * x2 - 60.0 * x3,
        0.5 * (2.0 - 18.0 * x + 36.0 * x2 - 20.0 * x3),
        60.0 * x - 180.0 * x2 + 120.0 * x3,
        -24.0 * x + 84.0 * x2 - 60.0 * x3,
        0.5 * (6.0 * x - 24.0 * x2 + 20.0 * x3),
    ];
    (val, d1, d2)
}

impl Blend {
    fn eval(&self, t: f64) -> FEval {
        let tt = self.t0;
        let x = t / tt;
        let (v, d1, d2) = quintic_bases(x);
        let c = [
            self.left[0],
            self.left[1] * tt,
            self.left[2] * tt * tt,
            self.right[0],
            self.right[1] * tt,
            self.right[2] * tt * tt,
        ];
        let dot = |b: &[f64; 6]| c.iter().zip(b.iter()).map(|(a, b)| a * b).sum::<f64>();
        FEval {
            f: dot(&v),
            f1: dot(&d1) / tt,
            f2: dot(&d2) / (tt * tt),
        }
    }

    fn convex_on_samples(&self, samples: usize) -> bool {
        for k in 0..=samples {
            let t = self.t0 * k as f64 / samples as f64;
            if self.eval(t).f2 < -1e-12 {
                return false;
            }
        }
        true
    }

    /// Builds the bridge, picking the smallest c2 >= 0 that keeps f'' >= 0.
    fn build(t0: f64, right: [f64; 3]) -> Result<Blend, NonlinearityError> {
        let make = |c2: f64| Blend { t0, left: [1.0, 0.0, c2], right };
        let admissible = |c2: f64| make(c2).convex_on_samples(10_000);
        if admissible(0.0) {
            return Ok(make(0.0));
        }
        // Scan upward for any admissible c2, then bisect down to the
        // smallest one; keep a whisker above the critical value so the
        // minimum of f'' stays clear of rounding.
        let cap = 16.0 * (right[2].abs() + right[0] / (t0 * t0) + 1.0);
        let mut hi = None;
        for k in 1..=64 {
            let c2 = cap * k as f64 / 64.0;
            if admissible(c2) {
                hi = Some(c2);
                break;
            }
        }
        let Some(mut hi) = hi else {
            return Err(NonlinearityError::BlendNotConvex);
        };
        let mut lo = 0.0;
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if admissible(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let c2 = hi * (1.0 + 1e-6);
        let blend = make(c2);
        if !blend.convex_on_samples(10_000) {
            return Err(NonlinearityError::BlendNotConvex);
        }
        Ok(blend)
    }
}

/// Hypothesis flags carried by a nonlinearity. For built-in families these
/// are known in closed form; for parsed expressions they come from a sampled
/// probe at construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hypotheses {
    pub f0_positive: bool,
    pub nondecreasing: bool,
    pub convex: bool,
    pub superlinear: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Nonlinearity {
    family: Family,
    blend: Option<Blend>,
    f0: f64,
    hypotheses: Hypotheses,
}

impl Nonlinearity {
    pub fn exponential() -> Self {
        Nonlinearity {
            family: Family::Exponential,
            blend: None,
            f0: 1.0,
            hypotheses: ALL_GOOD,
        }
    }

    pub fn power_shifted(p: f64) -> Result<Self, NonlinearityError> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(NonlinearityError::Parameter(format!("p must be > 1, got {p}")));
        }
        Ok(Nonlinearity {
            family: Family::PowerShifted { p },
            blend: None,
            f0: 1.0,
            hypotheses: ALL_GOOD,
        })
    }

    pub fn lin_log() -> Result<Self, NonlinearityError> {
        let t0 = LINLOG_T0;
        let right = [t0 * t0.ln(), t0.ln() + 1.0, 1.0 / t0];
        let blend = Blend::build(t0, right)?;
        Ok(Nonlinearity {
            family: Family::LinLog,
            blend: Some(blend),
            f0: 1.0,
            hypotheses: ALL_GOOD,
        })
    }

    pub fn lin_log_pow(a: f64) -> Result<Self, NonlinearityError> {
        if !(a > 0.0 && a < 1.0) {
            return Err(NonlinearityError::Parameter(format!("a must lie in (0,1), got {a}")));
        }
        let t0 = LINLOG_T0;
        let l = t0.ln(); // = 2
        let right = [
            t0 * l.powf(a),
            l.powf(a) + a * l.powf(a - 1.0),
            (a / t0) * l.powf(a - 2.0) * (l + a - 1.0),
        ];
        let blend = Blend::build(t0, right)?;
        Ok(Nonlinearity {
            family: Family::LinLogPow { a },
            blend: Some(blend),
            f0: 1.0,
            hypotheses: ALL_GOOD,
        })
    }

    /// Parses `expr` and wraps it as a nonlinearity. Fails if the expression
    /// is syntactically invalid or undefined at t = 0.
    pub fn parse(expr: &str) -> Result<Self, NonlinearityError> {
        let ast = ExprAst::parse(expr)?;
        ast.check_defined_at(0.0)?;
        let f0 = ast.eval(0.0);
        let mut nl = Nonlinearity {
            family: Family::Custom(ast),
            blend: None,
            f0,
            hypotheses: ALL_GOOD,
        };
        nl.hypotheses = probe_hypotheses(&nl);
        Ok(nl)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn description(&self) -> String {
        self.family.label()
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn hypotheses(&self) -> Hypotheses {
        self.hypotheses
    }

    /// `(f(t), f'(t), f''(t))` for t >= 0.
    pub fn eval(&self, t: f64) -> FEval {
        match &self.family {
            Family::Exponential => {
                let e = t.exp();
                FEval { f: e, f1: e, f2: e }
            }
            Family::PowerShifted { p } => {
                let base = 1.0 + t;
                let f = base.powf(*p);
                let f1 = p * base.powf(p - 1.0);
                let f2 = p * (p - 1.0) * base.powf(p - 2.0);
                FEval { f, f1, f2 }
            }
            Family::LinLog => {
                if t >= LINLOG_T0 {
                    let l = t.ln();
                    FEval { f: t * l, f1: l + 1.0, f2: 1.0 / t }
                } else {
                    self.blend.as_ref().expect("blend built at construction").eval(t)
                }
            }
            Family::LinLogPow { a } => {
                if t >= LINLOG_T0 {
                    let l = t.ln();
                    FEval {
                        f: t * l.powf(*a),
                        f1: l.powf(*a) + a * l.powf(a - 1.0),
                        f2: (a / t) * l.powf(a - 2.0) * (l + a - 1.0),
                    }
                } else {
                    self.blend.as_ref().expect("blend built at construction").eval(t)
                }
            }
            Family::Custom(ast) => {
                let j = ast.eval_jet(Jet2::variable(t));
                FEval { f: j.value, f1: j.d1, f2: j.d2 }
            }
        }
    }

    pub fn f(&self, t: f64) -> f64 {
        self.eval(t).f
    }

    pub fn f1(&self, t: f64) -> f64 {
        self.eval(t).f1
    }

    pub fn f2(&self, t: f64) -> f64 {
        self.eval(t).f2
    }

    /// f̃(t) = f(t) - f(0).
    pub fn f_tilde(&self, t: f64) -> f64 {
        self.f(t) - self.f0
    }

    /// Closed-form (τ₋, τ₊) where the family admits one.
    pub fn closed_form_tau(&self) -> Option<(f64, f64)> {
        match &self.family {
            Family::Exponential => Some((1.0, 1.0)),
            Family::PowerShifted { p } => {
                let tau = (p - 1.0) / p;
                Some((tau, tau))
            }
            Family::LinLog | Family::LinLogPow { .. } => Some((0.0, 0.0)),
            Family::Custom(_) => None,
        }
    }
}

const ALL_GOOD: Hypotheses = Hypotheses {
    f0_positive: true,
    nondecreasing: true,
    convex: true,
    superlinear: true,
};

/// Geometric sample of [0, t_max]: zero plus a ratio-1.2 ladder from 1e-6.
pub fn geometric_grid(t_max: f64) -> Vec<f64> {
    let mut g = vec![0.0];
    let mut t = 1e-6;
    while t <= t_max {
        g.push(t);
        t *= 1.2;
    }
    g
}

fn probe_hypotheses(f: &Nonlinearity) -> Hypotheses {
    let report = validate(f, &geometric_grid(1e6), 1e3);
    Hypotheses {
        f0_positive: report.f0_positive.passed,
        nondecreasing: report.nondecreasing.passed,
        convex: report.convex.passed,
        superlinear: report.superlinear.passed,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HypothesisCheck {
    pub name: &'static str,
    pub passed: bool,
    /// First sampled t at which the check failed, with the offending value.
    pub witness: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub f0_positive: HypothesisCheck,
    pub nondecreasing: HypothesisCheck,
    pub convex: HypothesisCheck,
    pub superlinear: HypothesisCheck,
    /// max of f(t)/t over the top decade of the grid.
    pub superlinearity_tail_ratio: f64,
    pub requested_bound: f64,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.f0_positive.passed
            && self.nondecreasing.passed
            && self.convex.passed
            && self.superlinear.passed
    }
}

/// Samples the standing hypotheses on `grid`. Failures are data, not errors.
pub fn validate(f: &Nonlinearity, grid: &[f64], superlinearity_bound: f64) -> ValidationReport {
    assert!(!grid.is_empty(), "validation grid must be nonempty");
    let f0 = f.f0();
    let f0_positive = HypothesisCheck {
        name: "f(0) > 0",
        passed: f0 > 0.0,
        witness: if f0 > 0.0 { None } else { Some((0.0, f0)) },
    };

    let mut nondecreasing = HypothesisCheck { name: "f' >= 0", passed: true, witness: None };
    let mut convex = HypothesisCheck { name: "f'' >= 0", passed: true, witness: None };
    let mut exceeded = false;
    let mut tail_ratio: f64 = 0.0;
    let t_last = grid.iter().cloned().fold(0.0, f64::max);

    for &t in grid {
        let e = f.eval(t);
        if !(e.f.is_finite() && e.f1.is_finite() && e.f2.is_finite()) {
            continue;
        }
        if nondecreasing.passed && e.f1 < -1e-12 * (1.0 + e.f.abs()) {
            nondecreasing.passed = false;
            nondecreasing.witness = Some((t, e.f1));
        }
        if convex.passed && e.f2 < -1e-12 * (1.0 + e.f.abs()) {
            convex.passed = false;
            convex.witness = Some((t, e.f2));
        }
        // the bound probe looks at large t only; f(t)/t blows up near 0
        // for any f with f(0) > 0
        if t >= 1.0 {
            let ratio = e.f / t;
            if ratio >= superlinearity_bound {
                exceeded = true;
            }
            if t >= t_last / 10.0 {
                tail_ratio = tail_ratio.max(ratio);
            }
        }
    }

    let superlinear = HypothesisCheck {
        name: "f(t)/t exceeds the requested bound on the grid",
        passed: exceeded,
        witness: if exceeded { None } else { Some((t_last, tail_ratio)) },
    };

    ValidationReport {
        f0_positive,
        nondecreasing,
        convex,
        superlinear,
        superlinearity_tail_ratio: tail_ratio,
        requested_bound: superlinearity_bound,
    }
}
