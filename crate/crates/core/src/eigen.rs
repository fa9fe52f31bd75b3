//! Principal Dirichlet eigenvalue of the linearized operator -Δ - λ f'(u)
//! on the unit ball, by shooting.
//!
//! For a trial μ the radial equation
//! φ'' + ((n-1)/r) φ' + (λ f'(u(r)) + μ) φ = 0, φ(0) = 1, φ'(0) = 0
//! is integrated to r = 1. μ₁ is the μ at which the first zero of φ sits
//! exactly at r = 1; below μ₁ the shot stays positive on (0, 1]. Bisection
//! runs on the predicate "φ has a zero in (0, 1]", which flips exactly at
//! μ₁, and the solution is rescaled in flight when the trial μ makes it
//! grow past the floating-point range (the equation is linear).

use crate::nonlinearity::Nonlinearity;
use crate::ode::{Dopri5, State, StepOutcome};
use crate::radial::{RadialError, RadialProfile};

#[derive(Debug, Clone, Copy)]
pub struct EigenControls {
    pub rtol: f64,
    pub atol: f64,
    pub mu_tol: f64,
}

impl Default for EigenControls {
    fn default() -> Self {
        EigenControls { rtol: 1e-9, atol: 1e-13, mu_tol: 1e-9 }
    }
}

#[derive(Debug, Clone)]
pub struct EigenResult {
    pub mu1: f64,
    /// eigenfunction at the profile's stored r grid, normalized to φ(0) = 1
    pub phi: Vec<f64>,
    /// Rayleigh quotient of the returned eigenfunction; a consistency check
    /// that should reproduce mu1.
    pub rayleigh: f64,
}

struct Shot {
    zero_count: usize,
    phi_end: f64,
}

fn shoot(
    profile: &RadialProfile,
    f: &Nonlinearity,
    mu: f64,
    ctl: &EigenControls,
    mut record: Option<&mut Vec<(f64, f64, f64)>>,
) -> Result<Shot, RadialError> {
    let n = profile.n as f64;
    let lambda = profile.lambda;
    let q = |r: f64| -> f64 {
        let (u, _) = profile.eval(r);
        lambda * f.f1(u.max(0.0)) + mu
    };
    let q0 = q(0.0);
    let s0 = 1e-4 * (1.0 / (q0.abs() + 1.0)).sqrt().min(1.0);
    let phi = 1.0 - q0 * s0 * s0 / (2.0 * n);
    let dphi = -q0 * s0 / n;
    let rhs = |r: f64, y: State| -> State { [y[1], -(n - 1.0) / r * y[1] - q(r) * y[0]] };

    let stepper = Dopri5 { rtol: ctl.rtol, atol: ctl.atol };
    let mut s = s0;
    let mut y = [phi, dphi];
    let mut d = rhs(s, y);
    let mut h = s0;
    let mut zero_count = 0usize;
    let mut scale_log = 0.0f64; // accumulated ln of renormalization factors
    if let Some(rec) = record.as_deref_mut() {
        rec.push((0.0, 1.0, 0.0));
    }

    let mut guard = 0usize;
    while s < 1.0 {
        guard += 1;
        if guard > 2_000_000 {
            return Err(RadialError::MaxSteps { s });
        }
        if h < 1e-15 {
            return Err(RadialError::StepUnderflow { s });
        }
        let h_try = h.min(1.0 - s);
        match stepper.try_step(&rhs, s, y, d, h_try) {
            StepOutcome::Accepted { rec, h_next } => {
                // count sign changes, including interior dips, on the dense
                // interpolant
                let mut prev = rec.y0[0];
                for k in 1..=6 {
                    let sq = rec.s0 + rec.h() * k as f64 / 6.0;
                    let (v, _) = rec.eval_quintic(sq);
                    if prev != 0.0 && v != 0.0 && prev.signum() != v.signum() {
                        zero_count += 1;
                    }
                    if v != 0.0 {
                        prev = v;
                    }
                }
                s = rec.s1;
                y = rec.y1;
                d = rec.d1;
                h = h_next;
                if let Some(out) = record.as_deref_mut() {
                    out.push((s, y[0] * scale_log.exp(), y[1] * scale_log.exp()));
                }
                let mag = y[0].abs().max(y[1].abs());
                if mag > 1e120 {
                    let inv = 1.0 / mag;
                    y[0] *= inv;
                    y[1] *= inv;
                    d[0] *= inv;
                    d[1] *= inv;
                    scale_log += mag.ln();
                }
            }
            StepOutcome::Rejected { h_next } => h = h_next,
        }
    }
    Ok(Shot { zero_count, phi_end: y[0] })
}

/// μ₁ of -Δ - λ f'(u) with Dirichlet conditions, plus the (positive)
/// eigenfunction and its Rayleigh quotient.
pub fn principal_eigenvalue(
    profile: &RadialProfile,
    f: &Nonlinearity,
    ctl: &EigenControls,
) -> Result<EigenResult, RadialError> {
    let has_zero = |mu: f64| -> Result<bool, RadialError> {
        let shot = shoot(profile, f, mu, ctl, None)?;
        Ok(shot.zero_count >= 1 || shot.phi_end < 0.0)
    };

    // bracket: expand upward until the shot oscillates, downward until it
    // stays positive
    let mut hi = 10.0;
    let mut tries = 0;
    while !has_zero(hi)? {
        hi *= 2.0;
        tries += 1;
        if tries > 60 {
            return Err(RadialError::NoEigenBracket { lo: f64::NEG_INFINITY, hi });
        }
    }
    let mut lo = 0.0;
    if has_zero(lo)? {
        lo = -1.0;
        tries = 0;
        while has_zero(lo)? {
            lo *= 2.0;
            tries += 1;
            if tries > 80 {
                return Err(RadialError::NoEigenBracket { lo, hi });
            }
        }
    }

    while hi - lo > ctl.mu_tol * hi.abs().max(lo.abs()).max(1.0) {
        let mid = 0.5 * (lo + hi);
        if has_zero(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mu1 = 0.5 * (lo + hi);

    // final pass at μ slightly inside the positive regime records the
    // eigenfunction
    let mut trace = Vec::new();
    let shot = shoot(profile, f, lo, ctl, Some(&mut trace))?;
    debug_assert_eq!(shot.zero_count, 0, "eigenfunction must stay positive");

    // resample the trace onto the profile grid by linear interpolation
    let grid = &profile.r;
    let mut phi = Vec::with_capacity(grid.len());
    let mut dphi = Vec::with_capacity(grid.len());
    let mut j = 0usize;
    for &r in grid {
        while j + 1 < trace.len() && trace[j + 1].0 < r {
            j += 1;
        }
        if j + 1 >= trace.len() {
            let last = trace.last().unwrap();
            phi.push(last.1);
            dphi.push(last.2);
            continue;
        }
        let (r0, p0, d0) = trace[j];
        let (r1, p1, d1) = trace[j + 1];
        let w = if r1 > r0 { (r - r0) / (r1 - r0) } else { 0.0 };
        phi.push(p0 + w * (p1 - p0));
        dphi.push(d0 + w * (d1 - d0));
    }

    // Rayleigh quotient on the stored grid (composite Simpson)
    let n = profile.n;
    let nf = n as f64;
    let lambda = profile.lambda;
    let m = grid.len();
    let mut num = Vec::with_capacity(m);
    let mut den = Vec::with_capacity(m);
    for i in 0..m {
        let r = grid[i];
        let (u, _) = (profile.u[i], profile.du[i]);
        let w = r.powf(nf - 1.0);
        num.push((dphi[i] * dphi[i] - lambda * f.f1(u.max(0.0)) * phi[i] * phi[i]) * w);
        den.push(phi[i] * phi[i] * w);
    }
    let rayleigh = simpson(&num, 1.0 / (m - 1) as f64) / simpson(&den, 1.0 / (m - 1) as f64);

    Ok(EigenResult { mu1, phi, rayleigh })
}

fn simpson(y: &[f64], h: f64) -> f64 {
    let n = y.len() - 1;
    assert!(n >= 2 && n % 2 == 0, "simpson needs an even interval count");
    let mut acc = y[0] + y[n];
    for (i, v) in y.iter().enumerate().take(n).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{integrate_profile, OdeControls};

    #[test]
    fn laplacian_eigenvalue_in_small_lambda_limit() {
        // m -> 0: μ₁ -> first Dirichlet eigenvalue of the unit ball; for
        // n = 3 the radial eigenfunction is sin(pi r)/r, eigenvalue pi^2.
        let f = Nonlinearity::exponential();
        let p = integrate_profile(&f, 3, 1e-4, &OdeControls::default()).unwrap();
        let res = principal_eigenvalue(&p, &f, &EigenControls::default()).unwrap();
        let want = std::f64::consts::PI.powi(2);
        assert!(
            (res.mu1 - want).abs() < 2e-3,
            "mu1 = {} vs pi^2 = {}",
            res.mu1,
            want
        );
        assert!((res.rayleigh - res.mu1).abs() < 1e-3 * want);
        assert!(res.phi.iter().take(res.phi.len() - 1).all(|&v| v > 0.0));
    }

    #[test]
    fn disk_laplacian_eigenvalue_n2() {
        // j_{0,1}^2 = 5.7831859629...
        let f = Nonlinearity::exponential();
        let p = integrate_profile(&f, 2, 1e-5, &OdeControls::default()).unwrap();
        let res = principal_eigenvalue(&p, &f, &EigenControls::default()).unwrap();
        assert!((res.mu1 - 5.783185962946785).abs() < 1e-3, "mu1 = {}", res.mu1);
    }

    #[test]
    fn mu1_vanishes_at_the_gelfand_fold() {
        let f = Nonlinearity::exponential();
        let fold_m = 2.0 * (2.0f64).ln();
        let p = integrate_profile(&f, 2, fold_m, &OdeControls::default()).unwrap();
        let res = principal_eigenvalue(&p, &f, &EigenControls::default()).unwrap();
        assert!(res.mu1.abs() < 5e-3, "mu1 at fold = {}", res.mu1);

        // strictly inside the minimal branch it is positive, past the fold
        // negative
        let p_in = integrate_profile(&f, 2, 0.8, &OdeControls::default()).unwrap();
        let r_in = principal_eigenvalue(&p_in, &f, &EigenControls::default()).unwrap();
        assert!(r_in.mu1 > 0.1);
        let p_out = integrate_profile(&f, 2, 2.2, &OdeControls::default()).unwrap();
        let r_out = principal_eigenvalue(&p_out, &f, &EigenControls::default()).unwrap();
        assert!(r_out.mu1 < -0.1);
        assert!(r_out.rayleigh < 0.0, "negative margin with η = eigenfunction");
    }

    #[test]
    fn mu1_decreases_along_the_minimal_branch() {
        let f = Nonlinearity::exponential();
        let ctl = EigenControls::default();
        let mut prev = f64::INFINITY;
        for &m in &[0.2, 0.8, 1.6, 2.6, 3.6] {
            let p = integrate_profile(&f, 3, m, &OdeControls::default()).unwrap();
            let res = principal_eigenvalue(&p, &f, &ctl).unwrap();
            assert!(res.mu1 < prev, "mu1({m}) = {} not below {prev}", res.mu1);
            prev = res.mu1;
        }
    }
}
