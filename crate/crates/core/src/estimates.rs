//! The integral functionals behind the a priori estimates:
//!
//! * `Phi(t) = ∫_0^t sqrt(f''/f)`,
//! * `I(u) = ∫_0^u f f'' e^{2β Phi}` and `H(u) = f(u) · I(u)`,
//! * the test-function machinery `g`, `G(s) = ∫_0^s g'(t)^2 dt` and
//!   `H(s) = g(s)^2 f'(s) - G(s) f(s)`.
//!
//! All integrals run through cached cumulative tables so sweeping thousands
//! of upper limits along a branch costs a single adaptive pass.

use crate::expr::ExprAst;
use crate::nonlinearity::Nonlinearity;
use crate::quad::{integrate, CumulativeIntegral, QuadError};
use serde::Serialize;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EstimatesError {
    #[error("f is not convex on the integration range: f''({t}) = {value}")]
    NonConvex { t: f64, value: f64 },
    #[error("f must stay positive on the integration range: f({t}) = {value}")]
    NonPositive { t: f64, value: f64 },
    #[error("beta must lie in [0,1), got {0}")]
    BadBeta(f64),
    #[error("multiplier g must vanish at 0, got g(0) = {0}")]
    GNotZeroAtOrigin(f64),
    #[error("closed-form check supports only the exponential and shifted-power families")]
    UnsupportedFamily,
    #[error(transparent)]
    Quad(#[from] QuadError),
}

pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

fn scan_convexity(f: &Nonlinearity, t_max: f64) -> Result<(), EstimatesError> {
    let samples = 2000;
    for k in 0..=samples {
        let t = t_max * k as f64 / samples as f64;
        let e = f.eval(t);
        if e.f <= 0.0 {
            return Err(EstimatesError::NonPositive { t, value: e.f });
        }
        if e.f2 < -1e-10 * (1.0 + e.f.abs()) {
            return Err(EstimatesError::NonConvex { t, value: e.f2 });
        }
    }
    Ok(())
}

/// Cumulative tables for Phi and I at a fixed beta.
pub struct EstimateTables {
    f: Nonlinearity,
    beta: f64,
    phi: Arc<CumulativeIntegral>,
    i_cum: CumulativeIntegral,
}

impl EstimateTables {
    pub fn build(
        f: &Nonlinearity,
        beta: f64,
        t_max: f64,
        tol: f64,
    ) -> Result<Self, EstimatesError> {
        if !(0.0..1.0).contains(&beta) {
            return Err(EstimatesError::BadBeta(beta));
        }
        let t_max = t_max.max(1e-6);
        scan_convexity(f, t_max)?;
        let ff = f.clone();
        // sqrt(f''/f), with the continuous extension 0 where f'' vanishes
        // (or dips below zero by rounding).
        let phi = CumulativeIntegral::build(
            move |t: f64| {
                let e = ff.eval(t);
                (e.f2.max(0.0) / e.f).sqrt()
            },
            t_max,
            tol,
        )?;
        let phi = Arc::new(phi);
        let ff = f.clone();
        let phi_for_i = Arc::clone(&phi);
        let i_cum = CumulativeIntegral::build(
            move |t: f64| {
                let e = ff.eval(t);
                let p = match phi_for_i.eval(t) {
                    Ok(v) => v,
                    Err(_) => return f64::NAN,
                };
                e.f * e.f2.max(0.0) * (2.0 * beta * p).exp()
            },
            t_max,
            tol,
        )?;
        Ok(EstimateTables { f: f.clone(), beta, phi, i_cum })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn t_max(&self) -> f64 {
        self.i_cum.t_max()
    }

    /// Phi(t) = ∫_0^t sqrt(f''/f).
    pub fn phi(&self, t: f64) -> Result<f64, EstimatesError> {
        Ok(self.phi.eval(t)?)
    }

    /// I(u) = ∫_0^u f f'' e^{2β Phi}.
    pub fn inner_integral(&self, u: f64) -> Result<f64, EstimatesError> {
        Ok(self.i_cum.eval(u)?)
    }

    /// H_{f,β}(u) = f(u) · I(u).
    pub fn h(&self, u: f64) -> Result<f64, EstimatesError> {
        Ok(self.f.f(u) * self.i_cum.eval(u)?)
    }

    /// Debug export at the Phi table's breakpoints: `t,Phi,I` plus a `G`
    /// column when a multiplier table is supplied.
    pub fn to_csv(&self, g: Option<&GTable>) -> String {
        let mut out = String::from(if g.is_some() { "t,Phi,I,G\n" } else { "t,Phi,I\n" });
        for &t in self.phi.breakpoints() {
            let phi = self.phi.eval(t).unwrap_or(f64::NAN);
            let i = self.i_cum.eval(t).unwrap_or(f64::NAN);
            match g {
                Some(table) => {
                    let gv = table.g_cumulative(t).unwrap_or(f64::NAN);
                    out.push_str(&format!("{t:.16e},{phi:.16e},{i:.16e},{gv:.16e}\n"));
                }
                None => out.push_str(&format!("{t:.16e},{phi:.16e},{i:.16e}\n")),
            }
        }
        out
    }
}

/// One-shot H_{f,β}(u).
pub fn h_f_beta(f: &Nonlinearity, beta: f64, u: f64, tol: f64) -> Result<f64, EstimatesError> {
    if u == 0.0 {
        // empty integral; still validate beta
        if !(0.0..1.0).contains(&beta) {
            return Err(EstimatesError::BadBeta(beta));
        }
        return Ok(0.0);
    }
    let tables = EstimateTables::build(f, beta, u, tol)?;
    tables.h(u)
}

/// Choice of the Lemma 2.1 multiplier g.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum GChoice {
    /// g = f - f(0), the convex multiplier with g(0) = 0.
    GEqualsF,
    /// g(s) = f(s) e^{β Phi(s)} for s >= s0 = 1, joined to g(0) = 0 by a
    /// linear ramp on [0, s0].
    GPaperProof { beta: f64 },
    /// user-supplied expression, validated to vanish at 0.
    Custom(ExprAst),
}

/// An evaluable multiplier `s -> (g(s), g'(s))`.
#[derive(Clone)]
pub struct Multiplier {
    label: String,
    eval: Arc<dyn Fn(f64) -> (f64, f64) + Send + Sync>,
}

impl std::fmt::Debug for Multiplier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Multiplier({})", self.label)
    }
}

impl Multiplier {
    pub fn from_choice(
        f: &Nonlinearity,
        choice: &GChoice,
        t_max: f64,
        tol: f64,
    ) -> Result<Multiplier, EstimatesError> {
        match choice {
            GChoice::GEqualsF => {
                let ff = f.clone();
                let f0 = f.f0();
                Ok(Multiplier {
                    label: "f - f(0)".into(),
                    eval: Arc::new(move |s| {
                        let e = ff.eval(s);
                        (e.f - f0, e.f1)
                    }),
                })
            }
            GChoice::GPaperProof { beta } => {
                if !(0.0..1.0).contains(beta) {
                    return Err(EstimatesError::BadBeta(*beta));
                }
                let tables = EstimateTables::build(f, *beta, t_max.max(2.0), tol)?;
                let s0 = 1.0;
                let at = |tables: &EstimateTables, f: &Nonlinearity, s: f64, beta: f64| {
                    let e = f.eval(s);
                    let phi = tables.phi(s).unwrap_or(f64::NAN);
                    let scale = (beta * phi).exp();
                    let sq = (e.f2.max(0.0) / e.f).sqrt();
                    (e.f * scale, (e.f1 + beta * sq * e.f) * scale)
                };
                let (g0, _) = at(&tables, f, s0, *beta);
                let ff = f.clone();
                let beta = *beta;
                Ok(Multiplier {
                    label: format!("f e^(beta Phi), beta={beta}, ramped on [0,1]"),
                    eval: Arc::new(move |s| {
                        if s < s0 {
                            (s * g0 / s0, g0 / s0)
                        } else {
                            at(&tables, &ff, s, beta)
                        }
                    }),
                })
            }
            GChoice::Custom(ast) => {
                let g0 = ast.eval(0.0);
                if !(g0.abs() <= 1e-10) {
                    return Err(EstimatesError::GNotZeroAtOrigin(g0));
                }
                let ast = ast.clone();
                Ok(Multiplier {
                    label: ast.source().to_string(),
                    eval: Arc::new(move |s| {
                        let j = ast.eval_jet(crate::jet::Jet2::variable(s));
                        (j.value, j.d1)
                    }),
                })
            }
        }
    }

    /// Wraps an arbitrary closure; no g(0) = 0 validation. Meant for direct
    /// formula checks.
    pub fn from_fn<F>(label: &str, f: F) -> Multiplier
    where
        F: Fn(f64) -> (f64, f64) + Send + Sync + 'static,
    {
        Multiplier { label: label.into(), eval: Arc::new(f) }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, s: f64) -> (f64, f64) {
        (self.eval)(s)
    }
}

/// G(s) = ∫_0^s g'(t)^2 dt as a frozen table.
pub struct GTable {
    pub multiplier: Multiplier,
    cum: CumulativeIntegral,
}

impl GTable {
    pub fn build(g: &Multiplier, t_max: f64, tol: f64) -> Result<GTable, EstimatesError> {
        let gg = g.clone();
        let cum = CumulativeIntegral::build(
            move |t| {
                let (_, dg) = gg.eval(t);
                dg * dg
            },
            t_max.max(1e-6),
            tol,
        )?;
        Ok(GTable { multiplier: g.clone(), cum })
    }

    pub fn g_cumulative(&self, s: f64) -> Result<f64, EstimatesError> {
        Ok(self.cum.eval(s)?)
    }

    /// H(s) = g(s)^2 f'(s) - G(s) f(s).
    pub fn lemma21_h(&self, f: &Nonlinearity, s: f64) -> Result<f64, EstimatesError> {
        let (g, _) = self.multiplier.eval(s);
        let e = f.eval(s);
        Ok(g * g * e.f1 - self.cum.eval(s)? * e.f)
    }
}

/// Convenience: H(s) for a one-off multiplier.
pub fn lemma21_h(
    f: &Nonlinearity,
    g: &Multiplier,
    s: f64,
    tol: f64,
) -> Result<f64, EstimatesError> {
    let table = GTable::build(g, s.max(1e-6), tol)?;
    table.lemma21_h(f, s)
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma22Report {
    pub gamma: f64,
    /// max over the tail of G f / (g^2 f').
    pub max_lhs: f64,
    /// (1/(2-gamma)) * max over the tail of g' f / (g f').
    pub rhs_bound: f64,
    /// max_lhs - rhs_bound; the lemma predicts <= 0 in the limit.
    pub violation: f64,
    pub g_pow_gamma_convex: bool,
    /// f/(g^2 f') at the last grid point; the lemma needs this to vanish,
    /// so a visible value flags a pre-asymptotic grid.
    pub vanishing_ratio: f64,
    pub conclusive: bool,
}

/// Samples both sides of the ratio bound
/// `limsup G f/(g^2 f') <= (1/(2-gamma)) limsup g' f/(g f')` on `s_grid`.
pub fn lemma22_ratio_bound(
    f: &Nonlinearity,
    g: &Multiplier,
    gamma: f64,
    s_grid: &[f64],
    tol: f64,
) -> Result<Lemma22Report, EstimatesError> {
    assert!(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0,1]");
    assert!(!s_grid.is_empty());
    let s_max = s_grid.iter().cloned().fold(0.0, f64::max);
    let table = GTable::build(g, s_max, tol)?;

    // sampled convexity of g^gamma via central second differences
    let mut convex = true;
    for &s in s_grid {
        if s <= 0.0 {
            continue;
        }
        let h = (s * 1e-4).max(1e-7);
        let p = |x: f64| g.eval(x).0.powf(gamma);
        if p(s + h) - 2.0 * p(s) + p(s - h) < -1e-6 * p(s).abs().max(1e-12) {
            convex = false;
            break;
        }
    }

    // tail = top half (in log scale) of the grid
    let tail_lo = s_max.sqrt().max(s_grid[0]);
    let mut max_lhs = f64::NEG_INFINITY;
    let mut max_rhs_factor = f64::NEG_INFINITY;
    for &s in s_grid {
        if s < tail_lo {
            continue;
        }
        let (gv, dg) = g.eval(s);
        let e = f.eval(s);
        if gv <= 0.0 || e.f1 <= 0.0 {
            continue;
        }
        let lhs = table.g_cumulative(s)? * e.f / (gv * gv * e.f1);
        let rhs = dg * e.f / (gv * e.f1);
        max_lhs = max_lhs.max(lhs);
        max_rhs_factor = max_rhs_factor.max(rhs);
    }
    let rhs_bound = max_rhs_factor / (2.0 - gamma);
    let (g_end, _) = g.eval(s_max);
    let e_end = f.eval(s_max);
    let vanishing_ratio = e_end.f / (g_end * g_end * e_end.f1);
    let conclusive = convex && vanishing_ratio.abs() <= 1e-3;
    Ok(Lemma22Report {
        gamma,
        max_lhs,
        rhs_bound,
        violation: max_lhs - rhs_bound,
        g_pow_gamma_convex: convex,
        vanishing_ratio,
        conclusive,
    })
}

/// Compares quadrature H_{f,β} against the family's exact antiderivative:
/// exponential: `(e^{(3+2β)u} - e^u)/(2+2β)`;
/// shifted power: `(1+u)^p · p(p-1) ((1+u)^{2p-1+2βc} - 1)/(2p-1+2βc)` with
/// `c = sqrt(p(p-1))`. Returns the max relative error over `u_grid`.
pub fn theorem11_closed_form_check(
    f: &Nonlinearity,
    beta: f64,
    u_grid: &[f64],
    tol: f64,
) -> Result<f64, EstimatesError> {
    use crate::nonlinearity::Family;
    let closed: Box<dyn Fn(f64) -> f64> = match f.family() {
        Family::Exponential => {
            Box::new(move |u: f64| (((3.0 + 2.0 * beta) * u).exp() - u.exp()) / (2.0 + 2.0 * beta))
        }
        Family::PowerShifted { p } => {
            let p = *p;
            let c = (p * (p - 1.0)).sqrt();
            let expo = 2.0 * p - 1.0 + 2.0 * beta * c;
            Box::new(move |u: f64| {
                (1.0 + u).powf(p) * p * (p - 1.0) * ((1.0 + u).powf(expo) - 1.0) / expo
            })
        }
        _ => return Err(EstimatesError::UnsupportedFamily),
    };
    let u_max = u_grid.iter().cloned().fold(0.0, f64::max).max(1e-6);
    let tables = EstimateTables::build(f, beta, u_max, tol)?;
    let mut worst: f64 = 0.0;
    for &u in u_grid {
        let got = tables.h(u)?;
        let want = closed(u);
        let denom = want.abs().max(1e-300);
        worst = worst.max((got - want).abs() / denom);
    }
    Ok(worst)
}

/// The stability margin of a radial profile in its two algebraically equal
/// forms, plus the positive part used to scale tolerances.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StabilityMargin {
    /// ∫ |∇η|^2 - λ ∫ f'(u) η^2 with η = g(u).
    pub direct: f64,
    /// λ ∫ (G(u) f(u) - g(u)^2 f'(u)) dx, equal to `direct` by parts.
    pub lemma_form: f64,
    /// λ ∫ G(u) f(u) dx.
    pub positive_part: f64,
}

impl StabilityMargin {
    /// ∫_Ω H(u) dx = -lemma_form.
    pub fn integral_h(&self) -> f64 {
        -self.lemma_form
    }
}

pub(crate) fn stability_margin_radial(
    n: u32,
    lambda: f64,
    eval_profile: &dyn Fn(f64) -> (f64, f64),
    f: &Nonlinearity,
    g: &Multiplier,
    g_table: &GTable,
    tol: f64,
) -> Result<StabilityMargin, EstimatesError> {
    let omega = crate::analysis::ball_surface(n);
    let pow = |r: f64| r.powi(n as i32 - 1);
    let direct = integrate(
        |r: f64| {
            let (u, du) = eval_profile(r);
            let (gv, dg) = g.eval(u.max(0.0));
            let e = f.eval(u.max(0.0));
            (dg * dg * du * du - lambda * e.f1 * gv * gv) * pow(r)
        },
        0.0,
        1.0,
        tol,
    )?;
    let lemma = integrate(
        |r: f64| {
            let (u, _) = eval_profile(r);
            let u = u.max(0.0);
            let (gv, _) = g.eval(u);
            let e = f.eval(u);
            let big_g = g_table.g_cumulative(u).unwrap_or(f64::NAN);
            lambda * (big_g * e.f - gv * gv * e.f1) * pow(r)
        },
        0.0,
        1.0,
        tol,
    )?;
    let positive = integrate(
        |r: f64| {
            let (u, _) = eval_profile(r);
            let u = u.max(0.0);
            let e = f.eval(u);
            let big_g = g_table.g_cumulative(u).unwrap_or(f64::NAN);
            lambda * big_g * e.f * pow(r)
        },
        0.0,
        1.0,
        tol,
    )?;
    Ok(StabilityMargin {
        direct: omega * direct,
        lemma_form: omega * lemma,
        positive_part: omega * positive,
    })
}
