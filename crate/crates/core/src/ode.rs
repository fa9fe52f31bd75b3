//! Embedded Dormand–Prince 5(4) stepper for two-dimensional systems, with
//! per-step dense output.
//!
//! Accepted steps keep the state and its derivative at both endpoints, so a
//! quintic Hermite interpolant (matching value, first and second derivative
//! of the solution component at both ends) reconstructs the solution inside
//! a step to roughly the integrator's own accuracy.

pub type State = [f64; 2];

#[derive(Debug, Clone, Copy)]
pub struct StepRecord {
    pub s0: f64,
    pub s1: f64,
    pub y0: State,
    pub y1: State,
    /// RHS at (s0, y0) and (s1, y1); FSAL makes both free.
    pub d0: State,
    pub d1: State,
}

impl StepRecord {
    pub fn h(&self) -> f64 {
        self.s1 - self.s0
    }

    /// Interpolates component 0 (and its derivative) of a second-order
    /// scalar equation recorded as y = [v, v']: the quintic matches
    /// (v, v', v'') at both endpoints, with v'' = d[1].
    pub fn eval_quintic(&self, s: f64) -> (f64, f64) {
        quintic_hermite(
            self.s0,
            self.h(),
            self.y0[0],
            self.y0[1],
            self.d0[1],
            self.y1[0],
            self.y1[1],
            self.d1[1],
            s,
        )
    }
}

/// Quintic Hermite on [s0, s0+h] from endpoint data (p, m, c) =
/// (value, slope, curvature). Returns (value, slope) at s.
#[allow(clippy::too_many_arguments)]
pub fn quintic_hermite(
    s0: f64,
    h: f64,
    p0: f64,
    m0: f64,
    c0: f64,
    p1: f64,
    m1: f64,
    c1: f64,
    s: f64,
) -> (f64, f64) {
    let x = (s - s0) / h;
    let x2 = x * x;
    let x3 = x2 * x;
    let x4 = x3 * x;
    let x5 = x4 * x;
    let basis_v = [
        1.0 - 10.0 * x3 + 15.0 * x4 - 6.0 * x5,
        x - 6.0 * x3 + 8.0 * x4 - 3.0 * x5,
        0.5 * (x2 - 3.0 * x3 + 3.0 * x4 - x5),
        10.0 * x3 - 15.0 * x4 + 6.0 * x5,
        -4.0 * x3 + 7.0 * x4 - 3.0 * x5,
        0.5 * (x3 - 2.0 * x4 + x5),
    ];
    let basis_d = [
        -30.0 * x2 + 60.0 * x3 - 30.0 * x4,
        1.0 - 18.0 * x2 + 32.0 * x3 - 15.0 * x4,
        0.5 * (2.0 * x - 9.0 * x2 + 12.0 * x3 - 5.0 * x4),
        30.0 * x2 - 60.0 * x3 + 30.0 * x4,
        -12.0 * x2 + 28.0 * x3 - 15.0 * x4,
        0.5 * (3.0 * x2 - 8.0 * x3 + 5.0 * x4),
    ];
    let coeff = [p0, m0 * h, c0 * h * h, p1, m1 * h, c1 * h * h];
    let mut v = 0.0;
    let mut d = 0.0;
    for i in 0..6 {
        v += coeff[i] * basis_v[i];
        d += coeff[i] * basis_d[i];
    }
    (v, d / h)
}

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

/// b5 - b4, applied to the stages (k1..k7) for the error estimate.
const E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
}

pub enum StepOutcome {
    Accepted { rec: StepRecord, h_next: f64 },
    Rejected { h_next: f64 },
}

impl Dopri5 {
    /// Attempts one step of size `h` from `(s, y)`, `d` being the RHS at
    /// `(s, y)` (FSAL).
    pub fn try_step<F>(&self, rhs: &F, s: f64, y: State, d: State, h: f64) -> StepOutcome
    where
        F: Fn(f64, State) -> State,
    {
        let mut k = [[0.0; 2]; 7];
        k[0] = d;
        for stage in 0..6 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(stage + 1) {
                let a = A[stage][j];
                if a != 0.0 {
                    yi[0] += h * a * kj[0];
                    yi[1] += h * a * kj[1];
                }
            }
            k[stage + 1] = rhs(s + C[stage] * h, yi);
        }
        // 5th-order solution is the last stage's argument (a7* = b row)
        let mut y1 = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            let a = A[5][j];
            if a != 0.0 {
                y1[0] += h * a * kj[0];
                y1[1] += h * a * kj[1];
            }
        }
        let mut err = [0.0; 2];
        for (j, kj) in k.iter().enumerate() {
            err[0] += E[j] * kj[0];
            err[1] += E[j] * kj[1];
        }
        let mut norm = 0.0;
        for i in 0..2 {
            let scale = self.atol + self.rtol * y[i].abs().max(y1[i].abs());
            let e = h * err[i] / scale;
            norm += e * e;
        }
        let norm = (norm / 2.0).sqrt();
        if !norm.is_finite() {
            return StepOutcome::Rejected { h_next: 0.1 * h };
        }
        let factor = if norm == 0.0 {
            5.0
        } else {
            (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
        };
        if norm <= 1.0 {
            StepOutcome::Accepted {
                rec: StepRecord { s0: s, s1: s + h, y0: y, y1, d0: d, d1: k[6] },
                h_next: h * factor,
            }
        } else {
            StepOutcome::Rejected { h_next: h * factor }
        }
    }
}
