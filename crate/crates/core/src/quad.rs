//! Adaptive panel quadrature with a cumulative breakpoint table.
//!
//! Panels use a 15-point Gauss–Legendre rule; the error indicator compares
//! one panel against its two halves. A [`CumulativeIntegral`] freezes the
//! accepted panels with prefix sums, so evaluating the running integral at
//! thousands of upper limits costs one binary search plus a short partial
//! panel each — the table itself is immutable and safe to share.

use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadError {
    #[error("integrand returned a non-finite value at t = {t}")]
    NonFinite { t: f64 },
    #[error("adaptive quadrature failed to converge on [{a}, {b}] (best error {err:.3e})")]
    NoConvergence { a: f64, b: f64, err: f64 },
    #[error("upper limit {t} lies outside the table range [0, {t_max}]")]
    OutOfRange { t: f64, t_max: f64 },
}

const GL_N: usize = 15;

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Nodes and weights of the 15-point Gauss–Legendre rule on [-1, 1],
/// generated once by Newton iteration on P_15.
fn gl15() -> &'static ([f64; GL_N], [f64; GL_N]) {
    static CACHE: OnceLock<([f64; GL_N], [f64; GL_N])> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut nodes = [0.0; GL_N];
        let mut weights = [0.0; GL_N];
        for i in 0..GL_N {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (GL_N as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre_and_derivative(GL_N, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_and_derivative(GL_N, x);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * d * d);
        }
        (nodes, weights)
    })
}

fn gl_panel(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gl15();
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..GL_N {
        acc += weights[i] * f(c + h * nodes[i]);
    }
    acc * h
}

struct Panel {
    b: f64,
    integral: f64,
    err: f64,
}

/// Recursively subdivide [a, b] until the half-vs-whole discrepancy is below
/// `tol * max(|local|, (b-a)/total_width)`.
fn refine(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    total_width: f64,
    tol: f64,
    depth: usize,
    out: &mut Vec<Panel>,
) -> Result<(), QuadError> {
    let whole = gl_panel(f, a, b);
    let mid = 0.5 * (a + b);
    let left = gl_panel(f, a, mid);
    let right = gl_panel(f, mid, b);
    let better = left + right;
    if !better.is_finite() {
        return Err(QuadError::NonFinite { t: mid });
    }
    let err = (whole - better).abs();
    let budget = tol * better.abs().max((b - a) / total_width);
    if err <= budget || depth >= 48 {
        if err > budget && err > tol {
            return Err(QuadError::NoConvergence { a, b, err });
        }
        out.push(Panel { b: mid, integral: left, err: 0.5 * err });
        out.push(Panel { b, integral: right, err: 0.5 * err });
        return Ok(());
    }
    refine(f, a, mid, total_width, tol, depth + 1, out)?;
    refine(f, mid, b, total_width, tol, depth + 1, out)
}

/// One-shot adaptive integral over [a, b].
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64, QuadError> {
    if a == b {
        return Ok(0.0);
    }
    let mut panels = Vec::new();
    refine(&f, a, b, (b - a).abs(), tol, 0, &mut panels)?;
    Ok(panels.iter().map(|p| p.integral).sum())
}

/// Frozen cumulative table of `∫_0^t f` on [0, t_max].
pub struct CumulativeIntegral {
    f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    breaks: Vec<f64>,
    prefix: Vec<f64>,
    errors: Vec<f64>,
    tol: f64,
}

impl CumulativeIntegral {
    pub fn build<F>(f: F, t_max: f64, tol: f64) -> Result<Self, QuadError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        assert!(t_max > 0.0 && tol > 0.0);
        // Seed with a modest uniform split so the adaptive pass sees local
        // structure even for very wide ranges.
        let seeds = 16usize;
        let mut panels = Vec::new();
        for k in 0..seeds {
            let a = t_max * k as f64 / seeds as f64;
            let b = t_max * (k + 1) as f64 / seeds as f64;
            refine(&f, a, b, t_max, tol, 0, &mut panels)?;
        }
        let mut breaks = Vec::with_capacity(panels.len() + 1);
        let mut prefix = Vec::with_capacity(panels.len() + 1);
        let mut errors = Vec::with_capacity(panels.len());
        breaks.push(0.0);
        prefix.push(0.0);
        let mut acc = 0.0;
        for p in &panels {
            acc += p.integral;
            breaks.push(p.b);
            prefix.push(acc);
            errors.push(p.err);
        }
        Ok(CumulativeIntegral { f: Box::new(f), breaks, prefix, errors, tol })
    }

    pub fn t_max(&self) -> f64 {
        *self.breaks.last().unwrap()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breaks
    }

    pub fn panel_errors(&self) -> &[f64] {
        &self.errors
    }

    /// Cumulative values at the breakpoints.
    pub fn prefix_values(&self) -> &[f64] {
        &self.prefix
    }

    /// `∫_0^t f`, for t in [0, t_max].
    pub fn eval(&self, t: f64) -> Result<f64, QuadError> {
        if t < 0.0 || t > self.t_max() * (1.0 + 1e-12) {
            return Err(QuadError::OutOfRange { t, t_max: self.t_max() });
        }
        let t = t.min(self.t_max());
        // last breakpoint <= t
        let idx = match self.breaks.binary_search_by(|b| b.partial_cmp(&t).unwrap()) {
            Ok(i) => return Ok(self.prefix[i]),
            Err(i) => i - 1,
        };
        let a = self.breaks[idx];
        if t == a {
            return Ok(self.prefix[idx]);
        }
        let partial = integrate(&self.f, a, t, self.tol)?;
        Ok(self.prefix[idx] + partial)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|t| 3.0 * t * t, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 8.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_cumulative_table() {
        let table = CumulativeIntegral::build(|t: f64| t.exp(), 10.0, 1e-11).unwrap();
        for &u in &[0.0, 0.3, 1.0, 2.5, 7.77, 10.0] {
            let got = table.eval(u).unwrap();
            let want = u.exp() - 1.0;
            assert!(
                (got - want).abs() <= 1e-9 * (1.0 + want.abs()),
                "u={u}: {got} vs {want}"
            );
        }
        assert!(table.eval(-1.0).is_err());
        assert!(table.eval(10.5).is_err());
    }

    #[test]
    fn cumulative_is_nondecreasing_for_nonnegative_integrand() {
        let table = CumulativeIntegral::build(|t: f64| (t.sin() + 1.2).abs(), 50.0, 1e-10).unwrap();
        let mut prev = -1.0;
        for v in table.prefix_values() {
            assert!(*v >= prev - 1e-12);
            prev = *v;
        }
    }

    #[test]
    fn halving_seed_width_leaves_result_within_tolerance() {
        // same integral computed with different initial panelizations
        let a = integrate(|t: f64| (2.0 * t).exp() * (1.0 + t).sqrt(), 0.0, 6.0, 1e-11).unwrap();
        let half1 = integrate(|t: f64| (2.0 * t).exp() * (1.0 + t).sqrt(), 0.0, 3.0, 1e-11).unwrap();
        let half2 = integrate(|t: f64| (2.0 * t).exp() * (1.0 + t).sqrt(), 3.0, 6.0, 1e-11).unwrap();
        assert!((a - (half1 + half2)).abs() <= 1e-9 * a.abs());
    }

    #[test]
    fn rejects_non_finite_integrand() {
        assert!(matches!(
            integrate(|t: f64| 1.0 / (t - 0.5), 0.0, 1.0, 1e-10),
            Err(QuadError::NoConvergence { .. }) | Err(QuadError::NonFinite { .. })
        ));
    }
}
