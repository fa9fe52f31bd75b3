//! Certificate-to-threshold engine.
//!
//! A certificate is a uniform L¹ bound on f̃(u)^α/u^σ. The threshold
//! machinery turns each certificate into per-dimension guarantees:
//!
//! * L^∞ for n < 2α,
//! * for n > 2α with (n-2)σ/n < α-1: u ∈ L^r (r < (α-σ)n/(n-2α)),
//!   f(u) ∈ L^r (r < (α-σ)n/(n-2σ)), u ∈ W^{1,r} (r < (α-σ)n/(n-α-σ)),
//! * H¹₀ whenever α >= 2+σ, or n < 2(α+σ)/(2+σ-α) otherwise.
//!
//! Certificates are generated from an asymptotic profile by the clause
//! rules; bounds obtained as suprema over the proof parameters stay open
//! (strict inequalities throughout).

use crate::asymptotics::{AsymptoticProfile, Outcome};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerdictError {
    #[error("certificate requires alpha >= 1 and 0 <= sigma <= alpha, got ({alpha}, {sigma})")]
    BadCertificate { alpha: f64, sigma: f64 },
    #[error("dimension must be an integer >= 2, got {0}")]
    BadDimension(u32),
    #[error("bootstrap needs n > 2 alpha and (n-2) sigma / n < alpha - 1, got alpha={alpha}, sigma={sigma}, n={n}")]
    BootstrapPrecondition { alpha: f64, sigma: f64, n: u32 },
}

/// Which derivation produced a certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Clause {
    Nedev,
    CrTauMinus { tau_minus: f64 },
    Prop11 { delta: f64 },
    Prop12a,
    Prop12c { tau_plus: f64, route: Prop12Route },
    Cor13 { tau_plus: f64 },
    Cor14 { gamma: f64, eps: f64 },
    Prop13 { gamma: f64, delta: f64, route: Prop13Route },
    User,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Prop12Route {
    /// f̃^(1+2/τ+2/√τ) / u^(same): α = σ.
    EqualExponents,
    /// f̃^(2+1/τ+2/√τ) / u^(1+1/τ+2/√τ): α = σ + 1.
    ShiftedExponents,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Prop13Route {
    Main,
    FPrimeIntegrability,
}

impl Clause {
    pub fn label(&self) -> String {
        match self {
            Clause::Nedev => "Nedev".into(),
            Clause::CrTauMinus { tau_minus } => format!("CR-tau-minus({tau_minus:.6})"),
            Clause::Prop11 { delta } => format!("Prop1.1({delta:.6})"),
            Clause::Prop12a => "Prop1.2-a".into(),
            Clause::Prop12c { tau_plus, route } => match route {
                Prop12Route::EqualExponents => format!("Prop1.2-c/eq({tau_plus:.6})"),
                Prop12Route::ShiftedExponents => format!("Prop1.2-c/shift({tau_plus:.6})"),
            },
            Clause::Cor13 { tau_plus } => format!("Cor1.3({tau_plus:.6})"),
            Clause::Cor14 { gamma, eps } => format!("Cor1.4({gamma:.3},{eps:.3})"),
            Clause::Prop13 { gamma, delta, route } => match route {
                Prop13Route::Main => format!("Prop1.3({gamma:.3},{delta:.3})"),
                Prop13Route::FPrimeIntegrability => {
                    format!("Prop1.3-f'({gamma:.3},{delta:.3})")
                }
            },
            Clause::User => "User".into(),
        }
    }
}

/// A uniform L¹ bound on f̃(u)^alpha / u^sigma.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateCertificate {
    pub alpha: f64,
    pub sigma: f64,
    pub source: Clause,
    /// true when (alpha, sigma) is a supremum over proof parameters
    /// (β < 1, τ -> τ±), so the pair itself is not attained.
    pub open_sup: bool,
}

impl EstimateCertificate {
    pub fn new(alpha: f64, sigma: f64, source: Clause, open_sup: bool) -> Result<Self, VerdictError> {
        if !(alpha >= 1.0) || !(0.0..=alpha).contains(&sigma) {
            return Err(VerdictError::BadCertificate { alpha, sigma });
        }
        Ok(EstimateCertificate { alpha, sigma, source, open_sup })
    }

    /// n below which the certificate gives L^∞.
    pub fn linf_n_sup(&self) -> f64 {
        2.0 * self.alpha
    }

    /// n below which the certificate gives H¹₀ (infinite when α >= 2+σ).
    pub fn h10_n_sup(&self) -> f64 {
        if self.alpha >= 2.0 + self.sigma {
            f64::INFINITY
        } else {
            2.0 * (self.alpha + self.sigma) / (2.0 + self.sigma - self.alpha)
        }
    }
}

/// Guarantees granted by a single certificate in one dimension. Exponent
/// bounds are open (norms hold for every r strictly below them).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GuaranteeSet {
    pub linf: bool,
    pub h10: bool,
    pub lr_u: Option<f64>,
    pub lr_f: Option<f64>,
    pub w1r: Option<f64>,
}

/// Theorem thresholds for one (alpha, sigma, n).
pub fn theorem12_thresholds(alpha: f64, sigma: f64, n: u32) -> Result<GuaranteeSet, VerdictError> {
    if !(alpha >= 1.0) || !(0.0..=alpha).contains(&sigma) {
        return Err(VerdictError::BadCertificate { alpha, sigma });
    }
    if n < 2 {
        return Err(VerdictError::BadDimension(n));
    }
    let nf = n as f64;
    let linf = nf < 2.0 * alpha;
    // α >= 2+σ short-circuits H¹₀ before the (1.16) expression, whose
    // denominator 2+σ-α would vanish or flip sign.
    let h10 = linf
        || alpha >= 2.0 + sigma
        || nf < 2.0 * (alpha + sigma) / (2.0 + sigma - alpha);
    let mut set = GuaranteeSet { linf, h10, lr_u: None, lr_f: None, w1r: None };
    if nf > 2.0 * alpha && (nf - 2.0) * sigma / nf < alpha - 1.0 {
        set.lr_u = Some((alpha - sigma) * nf / (nf - 2.0 * alpha));
        set.lr_f = Some((alpha - sigma) * nf / (nf - 2.0 * sigma));
        set.w1r = Some((alpha - sigma) * nf / (nf - alpha - sigma));
    }
    Ok(set)
}

#[derive(Debug, Clone, Serialize)]
pub struct BootstrapResult {
    pub q: Vec<f64>,
    pub q_limit: f64,
    pub final_gap: f64,
}

/// The elliptic bootstrap q_1 = n/(n-2),
/// q_m = α n q_{m-1} / ((σ + q_{m-1}) n - 2 α q_{m-1}), with limit
/// (α-σ) n / (n - 2α).
pub fn bootstrap_exponents(
    alpha: f64,
    sigma: f64,
    n: u32,
    iterations: usize,
) -> Result<BootstrapResult, VerdictError> {
    if !(alpha >= 1.0) || !(0.0..=alpha).contains(&sigma) {
        return Err(VerdictError::BadCertificate { alpha, sigma });
    }
    let nf = n as f64;
    if !(nf > 2.0 * alpha) || !((nf - 2.0) * sigma / nf < alpha - 1.0) {
        return Err(VerdictError::BootstrapPrecondition { alpha, sigma, n });
    }
    let mut q = Vec::with_capacity(iterations + 1);
    let mut qm = nf / (nf - 2.0);
    q.push(qm);
    for _ in 0..iterations {
        qm = alpha * nf * qm / ((sigma + qm) * nf - 2.0 * alpha * qm);
        q.push(qm);
    }
    let q_limit = (alpha - sigma) * nf / (nf - 2.0 * alpha);
    let final_gap = (qm - q_limit).abs();
    Ok(BootstrapResult { q, q_limit, final_gap })
}

#[derive(Debug, Clone, Serialize)]
pub struct NotFired {
    pub clause: String,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateSet {
    pub certificates: Vec<EstimateCertificate>,
    /// Some(clause label) when τ₊ = 0 gives L^∞ in every dimension.
    pub linf_all_dimensions: Option<String>,
    pub not_fired: Vec<NotFired>,
}

/// Applies every generation rule the profile supports.
pub fn generate_certificates(profile: &AsymptoticProfile) -> CertificateSet {
    let mut certs = Vec::new();
    let mut not_fired = Vec::new();
    let mut linf_all = None;
    let skip = |clause: &str, reason: String, not_fired: &mut Vec<NotFired>| {
        not_fired.push(NotFired { clause: clause.into(), reason });
    };

    let convex = profile.hypotheses.convex && profile.hypotheses.superlinear;
    if convex {
        certs.push(EstimateCertificate::new(2.0, 1.0, Clause::Nedev, false).unwrap());
    } else {
        skip(
            "Nedev",
            "requires a convex superlinear nonlinearity".into(),
            &mut not_fired,
        );
    }

    match profile.usable_tau_minus() {
        Some(tm) => {
            certs.push(
                EstimateCertificate::new(
                    3.0 + 2.0 * tm.sqrt(),
                    1.0,
                    Clause::CrTauMinus { tau_minus: tm },
                    true,
                )
                .unwrap(),
            );
        }
        None => skip(
            "CR-tau-minus",
            "needs tau_minus known and >= 1e-3".into(),
            &mut not_fired,
        ),
    }

    match profile.convex_power_delta {
        Some(delta) if delta > 0.0 => {
            certs.push(
                EstimateCertificate::new(
                    3.0 + 2.0 * delta.sqrt(),
                    1.0,
                    Clause::Prop11 { delta },
                    true,
                )
                .unwrap(),
            );
        }
        _ => skip(
            "Prop1.1",
            "no delta in (0,1) with f^(1-delta) convex on the tail".into(),
            &mut not_fired,
        ),
    }

    match profile.usable_tau_plus() {
        Some(tp) if tp <= 1e-9 => {
            linf_all = Some(Clause::Prop12a.label());
        }
        Some(tp) => {
            if !convex {
                skip("Prop1.2-c", "requires convexity".into(), &mut not_fired);
            } else {
                let rt = tp.sqrt();
                certs.push(
                    EstimateCertificate::new(
                        1.0 + 2.0 / tp + 2.0 / rt,
                        1.0 + 2.0 / tp + 2.0 / rt,
                        Clause::Prop12c { tau_plus: tp, route: Prop12Route::EqualExponents },
                        true,
                    )
                    .unwrap(),
                );
                certs.push(
                    EstimateCertificate::new(
                        2.0 + 1.0 / tp + 2.0 / rt,
                        1.0 + 1.0 / tp + 2.0 / rt,
                        Clause::Prop12c { tau_plus: tp, route: Prop12Route::ShiftedExponents },
                        true,
                    )
                    .unwrap(),
                );
                match profile.usable_tau_minus() {
                    Some(_) => {
                        certs.push(
                            EstimateCertificate::new(
                                3.0 + 2.0 / rt,
                                1.0 + 2.0 / rt,
                                Clause::Cor13 { tau_plus: tp },
                                true,
                            )
                            .unwrap(),
                        );
                    }
                    None => skip(
                        "Cor1.3",
                        "needs tau_minus > 0 in addition to finite tau_plus".into(),
                        &mut not_fired,
                    ),
                }
            }
        }
        None => {
            skip("Prop1.2", "tau_plus unknown".into(), &mut not_fired);
            skip("Cor1.3", "tau_plus unknown".into(), &mut not_fired);
        }
    }

    match &profile.cond_1_25 {
        Some(rep) if rep.outcome == Outcome::Holds => {
            let gamma = rep.params.iter().find(|p| p.0 == "gamma").map(|p| p.1).unwrap_or(0.0);
            let eps = rep.params.iter().find(|p| p.0 == "eps").map(|p| p.1).unwrap_or(0.0);
            if eps - gamma > 0.5 {
                let a = 2.0 + eps - gamma;
                certs.push(
                    EstimateCertificate::new(a, a, Clause::Cor14 { gamma, eps }, false).unwrap(),
                );
            } else {
                skip("Cor1.4", format!("established (1.25) has eps-gamma = {} <= 1/2", eps - gamma), &mut not_fired);
            }
        }
        _ => skip("Cor1.4", "(1.25) not established".into(), &mut not_fired),
    }

    match &profile.cond_1_26 {
        Some(rep) if rep.outcome == Outcome::Holds => {
            let gamma = rep.params.iter().find(|p| p.0 == "gamma").map(|p| p.1).unwrap_or(0.0);
            let delta = rep.params.iter().find(|p| p.0 == "delta").map(|p| p.1).unwrap_or(0.0);
            if gamma > 0.0 {
                certs.push(
                    EstimateCertificate::new(
                        2.0 + 1.0 / gamma,
                        1.0 + (1.0 + delta) / gamma,
                        Clause::Prop13 { gamma, delta, route: Prop13Route::Main },
                        false,
                    )
                    .unwrap(),
                );
                // f'(u) ∈ L^(1+2/(γ+δ)) with f' >= f̃/u
                let a = 1.0 + 2.0 / (gamma + delta);
                certs.push(
                    EstimateCertificate::new(
                        a,
                        a,
                        Clause::Prop13 { gamma, delta, route: Prop13Route::FPrimeIntegrability },
                        false,
                    )
                    .unwrap(),
                );
            }
        }
        _ => skip("Prop1.3", "(1.26) not established".into(), &mut not_fired),
    }

    CertificateSet { certificates: certs, linf_all_dimensions: linf_all, not_fired }
}

/// Prop 1.4: H¹₀ in every dimension when (1.32) (checked first — it covers
/// the slowly-growing families) or (1.31) holds.
pub fn h1_all_dimensions(profile: &AsymptoticProfile) -> Option<String> {
    if let Some(rep) = &profile.cond_1_32 {
        if rep.outcome == Outcome::Holds {
            return Some("(1.32)".into());
        }
    }
    if profile.cond_1_31.outcome == Outcome::Holds {
        return Some("(1.31)".into());
    }
    None
}

/// An open threshold: guarantees hold for integer n strictly below it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Threshold {
    AllDimensions,
    Below(f64),
    None,
}

impl Threshold {
    pub fn grants(&self, n: u32) -> bool {
        match self {
            Threshold::AllDimensions => true,
            Threshold::Below(x) => (n as f64) < *x,
            Threshold::None => false,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Threshold::Below(x) => Some(*x),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GuaranteeKind {
    Linf,
    H10,
    L1Only,
}

#[derive(Debug, Clone, Serialize)]
pub struct DimRow {
    pub n: u32,
    pub guarantee: GuaranteeKind,
    pub linf: bool,
    pub h10: bool,
    pub w1r: Option<f64>,
    pub lr_u: Option<f64>,
    pub lr_f: Option<f64>,
    /// clauses granting the top guarantee, sorted by their own n_sup
    /// (strongest last)
    pub clauses: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdReport {
    pub threshold: Threshold,
    pub clauses: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Thresholds {
    pub linf: ThresholdReport,
    pub h10: ThresholdReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub profile: AsymptoticProfile,
    pub certificates: Vec<EstimateCertificate>,
    pub not_fired: Vec<NotFired>,
    pub thresholds: Thresholds,
    pub h10_prop14_clause: Option<String>,
    pub table: Vec<DimRow>,
    /// the dimension the caller asked about (always present in the table)
    pub queried_n: u32,
}

/// Aggregates Theorem-1.2 outputs over all generated certificates.
pub fn regularity_verdict(profile: &AsymptoticProfile, n: u32) -> Result<Verdict, VerdictError> {
    if n < 2 {
        return Err(VerdictError::BadDimension(n));
    }
    let set = generate_certificates(profile);
    let prop14 = h1_all_dimensions(profile);

    // headline thresholds
    let mut linf_pairs: Vec<(f64, String)> = set
        .certificates
        .iter()
        .map(|c| (c.linf_n_sup(), c.source.label()))
        .collect();
    linf_pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let linf = if let Some(clause) = &set.linf_all_dimensions {
        ThresholdReport {
            threshold: Threshold::AllDimensions,
            clauses: vec![clause.clone()],
        }
    } else if let Some(best) = linf_pairs.last() {
        let top = best.0;
        ThresholdReport {
            threshold: Threshold::Below(top),
            clauses: linf_pairs
                .iter()
                .filter(|p| p.0 >= top - 1e-12)
                .map(|p| p.1.clone())
                .collect(),
        }
    } else {
        ThresholdReport { threshold: Threshold::None, clauses: vec![] }
    };

    let mut h10_pairs: Vec<(f64, String)> = set
        .certificates
        .iter()
        .map(|c| (c.h10_n_sup(), c.source.label()))
        .collect();
    h10_pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let h10 = {
        let mut clauses: Vec<String> = Vec::new();
        let mut threshold = Threshold::None;
        if set.linf_all_dimensions.is_some() {
            threshold = Threshold::AllDimensions;
            clauses.push(set.linf_all_dimensions.clone().unwrap());
        }
        if let Some(clause) = &prop14 {
            threshold = Threshold::AllDimensions;
            clauses.push(format!("Prop1.4 via {clause}"));
        }
        if threshold == Threshold::None {
            if let Some(best) = h10_pairs.last() {
                if best.0.is_infinite() {
                    threshold = Threshold::AllDimensions;
                } else {
                    threshold = Threshold::Below(best.0);
                }
                let top = best.0;
                clauses.extend(
                    h10_pairs
                        .iter()
                        .filter(|p| p.0 >= top - 1e-12 || (top.is_infinite() && p.0.is_infinite()))
                        .map(|p| p.1.clone()),
                );
            }
        }
        ThresholdReport { threshold, clauses }
    };

    let n_max = n.max(15);
    let mut table = Vec::new();
    for dim in 2..=n_max {
        table.push(dim_row(dim, &set, &prop14)?);
    }

    Ok(Verdict {
        profile: profile.clone(),
        certificates: set.certificates,
        not_fired: set.not_fired,
        thresholds: Thresholds { linf, h10 },
        h10_prop14_clause: prop14,
        table,
        queried_n: n,
    })
}

fn dim_row(
    dim: u32,
    set: &CertificateSet,
    prop14: &Option<String>,
) -> Result<DimRow, VerdictError> {
    let mut linf = set.linf_all_dimensions.is_some();
    let mut h10 = linf || prop14.is_some();
    let mut w1r: Option<f64> = None;
    let mut lr_u: Option<f64> = None;
    let mut lr_f: Option<f64> = None;
    let mut granting: Vec<(f64, String)> = Vec::new();
    if let Some(clause) = &set.linf_all_dimensions {
        granting.push((f64::INFINITY, clause.clone()));
    }
    for cert in &set.certificates {
        let g = theorem12_thresholds(cert.alpha, cert.sigma, dim)?;
        if g.linf {
            linf = true;
            granting.push((cert.linf_n_sup(), cert.source.label()));
        }
        if g.h10 {
            h10 = true;
        }
        let max_opt = |cur: Option<f64>, new: Option<f64>| match (cur, new) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, None) => a,
            (None, b) => b,
        };
        w1r = max_opt(w1r, g.w1r);
        lr_u = max_opt(lr_u, g.lr_u);
        lr_f = max_opt(lr_f, g.lr_f);
    }
    let guarantee = if linf {
        GuaranteeKind::Linf
    } else if h10 {
        GuaranteeKind::H10
    } else {
        GuaranteeKind::L1Only
    };
    if !linf {
        // clauses granting the (weaker) top guarantee
        granting.clear();
        if guarantee == GuaranteeKind::H10 {
            if let Some(clause) = prop14 {
                granting.push((f64::INFINITY, format!("Prop1.4 via {clause}")));
            }
            for cert in &set.certificates {
                let g = theorem12_thresholds(cert.alpha, cert.sigma, dim)?;
                if g.h10 {
                    granting.push((cert.h10_n_sup(), cert.source.label()));
                }
            }
        }
    }
    granting.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let clauses = granting.into_iter().map(|p| p.1).collect();
    Ok(DimRow { n: dim, guarantee, linf, h10, w1r, lr_u, lr_f, clauses })
}

impl Verdict {
    pub fn row(&self, n: u32) -> Option<&DimRow> {
        self.table.iter().find(|r| r.n == n)
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# Regularity verdict: {}\n\n", self.profile.description));
        out.push_str(&format!(
            "tau_minus = {:?}, tau_plus = {:?} ({:?})\n\n",
            self.profile.tau_minus, self.profile.tau_plus, self.profile.tau_confidence
        ));
        let fmt_thr = |t: &Threshold| match t {
            Threshold::AllDimensions => "all dimensions".to_string(),
            Threshold::Below(x) => format!("n < {x:.9}"),
            Threshold::None => "none".to_string(),
        };
        out.push_str(&format!(
            "* L-infinity: {} [{}]\n",
            fmt_thr(&self.thresholds.linf.threshold),
            self.thresholds.linf.clauses.join("; ")
        ));
        out.push_str(&format!(
            "* H^1_0: {} [{}]\n\n",
            fmt_thr(&self.thresholds.h10.threshold),
            self.thresholds.h10.clauses.join("; ")
        ));
        out.push_str("| n | guarantee | W^{1,r} sup | L^r(u) sup | L^r(f) sup | clauses |\n");
        out.push_str("|---|-----------|-------------|------------|------------|---------|\n");
        for row in &self.table {
            let g = match row.guarantee {
                GuaranteeKind::Linf => "L-infinity",
                GuaranteeKind::H10 => "H^1_0",
                GuaranteeKind::L1Only => "L^1 only",
            };
            let f = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} |\n",
                row.n,
                g,
                f(row.w1r),
                f(row.lr_u),
                f(row.lr_f),
                row.clauses.join("; ")
            ));
        }
        if !self.not_fired.is_empty() {
            out.push_str("\nNot fired:\n");
            for nf in &self.not_fired {
                out.push_str(&format!("* {}: {}\n", nf.clause, nf.reason));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::{profile, ProfileOptions};
    use crate::nonlinearity::Nonlinearity;

    fn exp_profile() -> AsymptoticProfile {
        profile(&Nonlinearity::exponential(), ProfileOptions::default())
    }

    #[test]
    fn theorem12_nedev_cases() {
        // (2,1): L^∞ for n < 4, H¹₀ for n < 6
        let g = theorem12_thresholds(2.0, 1.0, 3).unwrap();
        assert!(g.linf && g.h10);
        let g = theorem12_thresholds(2.0, 1.0, 5).unwrap();
        assert!(!g.linf && g.h10);
        let g = theorem12_thresholds(2.0, 1.0, 6).unwrap();
        assert!(!g.h10);
    }

    #[test]
    fn theorem12_exponent_formulas_at_n8() {
        // (2,1,8): u ∈ L^r for r < 2, f(u) ∈ L^r for r < 4/3, u ∈ W^{1,r}
        // for r < 8/5 (direct substitution in the three formulas).
        let g = theorem12_thresholds(2.0, 1.0, 8).unwrap();
        assert!(!g.linf && !g.h10);
        assert!((g.lr_u.unwrap() - 2.0).abs() < 1e-15);
        assert!((g.lr_f.unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!((g.w1r.unwrap() - 8.0 / 5.0).abs() < 1e-15);
    }

    #[test]
    fn theorem12_validates_inputs() {
        assert!(theorem12_thresholds(0.9, 0.5, 3).is_err());
        assert!(theorem12_thresholds(2.0, 2.5, 3).is_err());
        assert!(theorem12_thresholds(2.0, 1.0, 1).is_err());
    }

    #[test]
    fn bootstrap_examples() {
        let b = bootstrap_exponents(2.0, 1.0, 7, 200).unwrap();
        assert!((b.q[0] - 7.0 / 5.0).abs() < 1e-15);
        assert!((b.q_limit - 7.0 / 3.0).abs() < 1e-15);
        for w in b.q.windows(2) {
            assert!(w[1] >= w[0] - 1e-12, "sequence must increase");
        }
        assert!(b.final_gap < 1e-9);

        // precondition n > 2 alpha: fails at n = 3 and at the boundary n = 4
        assert!(bootstrap_exponents(2.0, 1.0, 3, 10).is_err());
        assert!(bootstrap_exponents(2.0, 1.0, 4, 10).is_err());

        let b = bootstrap_exponents(3.0, 1.0, 8, 200).unwrap();
        assert!((b.q_limit - 8.0).abs() < 1e-12);
        assert!(b.final_gap < 1e-9);
    }

    #[test]
    fn certificates_for_exponential() {
        let set = generate_certificates(&exp_profile());
        let has = |alpha: f64, sigma: f64| {
            set.certificates
                .iter()
                .any(|c| (c.alpha - alpha).abs() < 1e-9 && (c.sigma - sigma).abs() < 1e-9)
        };
        assert!(has(2.0, 1.0), "Nedev");
        assert!(has(5.0, 1.0), "CR tau-minus at tau = 1");
        assert!(has(5.0, 5.0), "Prop 1.2-c equal-exponent route");
        assert!(has(5.0, 4.0), "Prop 1.2-c shifted route");
        assert!(has(5.0, 3.0), "Cor 1.3");
        assert!(set.linf_all_dimensions.is_none());
    }

    #[test]
    fn certificates_for_linlog() {
        let p = profile(&Nonlinearity::lin_log().unwrap(), ProfileOptions::default());
        let set = generate_certificates(&p);
        assert!(set.linf_all_dimensions.is_some(), "tau_plus = 0 gives Prop 1.2(a)");
        let v = regularity_verdict(&p, 50).unwrap();
        assert_eq!(v.thresholds.linf.threshold, Threshold::AllDimensions);
        assert!(v.row(50).unwrap().linf);
    }

    #[test]
    fn sparse_profile_yields_only_nedev() {
        let mut p = exp_profile();
        p.tau_minus = None;
        p.tau_plus = None;
        p.tau_confidence = crate::asymptotics::Confidence::Inconclusive;
        p.convex_power_delta = None;
        p.cond_1_25 = None;
        p.cond_1_26 = None;
        let set = generate_certificates(&p);
        assert_eq!(set.certificates.len(), 1);
        assert_eq!(set.certificates[0].source, Clause::Nedev);
        assert!(!set.not_fired.is_empty());
    }

    #[test]
    fn exponential_linf_threshold_is_ten() {
        let v = regularity_verdict(&exp_profile(), 9).unwrap();
        assert_eq!(v.thresholds.linf.threshold, Threshold::Below(10.0));
        assert!((v.thresholds.linf.threshold.value().unwrap() - 10.0).abs() < 1e-9);
        for n in 2..=9 {
            assert_eq!(v.row(n).unwrap().guarantee, GuaranteeKind::Linf, "n = {n}");
        }
        assert_ne!(v.row(10).unwrap().guarantee, GuaranteeKind::Linf);
        // H¹₀ everywhere: several certificates have α >= 2 + σ, and (1.31)
        // also holds for exp
        assert_eq!(v.thresholds.h10.threshold, Threshold::AllDimensions);
        assert!(v.row(12).unwrap().h10);
    }

    #[test]
    fn power_family_linf_threshold_matches_closed_form() {
        for p_exp in [2.0, 3.0, 5.0] {
            let f = Nonlinearity::power_shifted(p_exp).unwrap();
            let prof = profile(&f, ProfileOptions::default());
            let v = regularity_verdict(&prof, 9).unwrap();
            let tau = (p_exp - 1.0) / p_exp;
            let want = 2.0 * (1.0 + 2.0 * p_exp / (p_exp - 1.0) + 2.0 * (p_exp / (p_exp - 1.0)).sqrt());
            let equivalent = 2.0 + 4.0 / tau + 4.0 / tau.sqrt();
            assert!((want - equivalent).abs() < 1e-12 * want);
            let got = v.thresholds.linf.threshold.value().unwrap();
            assert!((got - want).abs() < 1e-9, "p={p_exp}: {got} vs {want}");
        }
    }

    #[test]
    fn prop12c_map_is_strictly_decreasing() {
        let tau_threshold = |tau: f64| {
            let rt = tau.sqrt();
            (2.0 + 4.0 / tau + 4.0 / rt).max(4.0 + 2.0 / tau + 4.0 / rt)
        };
        let mut prev = f64::INFINITY;
        for k in 1..=1000 {
            let tau = k as f64 * 0.01;
            let v = tau_threshold(tau);
            assert!(v < prev, "not decreasing at tau = {tau}");
            prev = v;
        }
    }

    #[test]
    fn boundary_identities() {
        // 4 + 2/τ + 4/√τ = 9 at τ = 2/(9 - 2 sqrt(14))
        let tau = 2.0 / (9.0 - 2.0 * 14.0f64.sqrt());
        let v = 4.0 + 2.0 / tau + 4.0 / tau.sqrt();
        assert!((v - 9.0).abs() < 1e-9, "{v}");
        // 6 + 4/√τ = 9 at τ = 16/9
        let tau: f64 = 16.0 / 9.0;
        let v = 6.0 + 4.0 / tau.sqrt();
        assert!((v - 9.0).abs() < 1e-9);
        // The W^{1,r} exponent n/(n-3-2/τ-4/√τ) equals 2 exactly at n = 9,
        // τ = 4/(11-4√7): there 11-4√7 = (√7-2)², so 2/τ + 4/√τ = 3/2 + 2√7
        // - 2√7 ... = 1.5; direct evaluation:
        let tau = 4.0 / (11.0 - 4.0 * 7.0f64.sqrt());
        let n = 9.0;
        let r = n / (n - 3.0 - 2.0 / tau - 4.0 / tau.sqrt());
        assert!((r - 2.0).abs() < 1e-9, "r = {r}");
    }

    #[test]
    fn cor13_bound_at_tau_sixteen_ninths() {
        // with τ₋ > 0 and τ₊ = 16/9 the Cor 1.3 certificate alone grants
        // L^∞ up to n < 9
        let mut p = exp_profile();
        p.tau_minus = Some(0.5);
        p.tau_plus = Some(16.0 / 9.0);
        let set = generate_certificates(&p);
        let cor = set
            .certificates
            .iter()
            .find(|c| matches!(c.source, Clause::Cor13 { .. }))
            .unwrap();
        assert!((cor.linf_n_sup() - 9.0).abs() < 1e-12);
    }

    #[test]
    fn kernel_verdict_exponential_n12() {
        // At n = 12 the exponential keeps H¹₀ (α >= 2+σ certificates) and
        // W^{1,r} up to r < 4 via the (5,4) certificate.
        let v = regularity_verdict(&exp_profile(), 12).unwrap();
        let row = v.row(12).unwrap();
        assert_eq!(row.guarantee, GuaranteeKind::H10);
        assert!(row.w1r.unwrap() >= 4.0 - 1e-9, "w1r = {:?}", row.w1r);
        assert!(row.w1r.unwrap() > 2.0);
    }

    #[test]
    fn linf_nsup_monotone_in_alpha() {
        let mut prev = 0.0;
        for k in 0..50 {
            let alpha = 1.0 + k as f64 * 0.25;
            let c = EstimateCertificate::new(alpha, 1.0, Clause::User, false).unwrap();
            assert!(c.linf_n_sup() > prev);
            prev = c.linf_n_sup();
        }
    }

    #[test]
    fn guarantees_weaken_monotonically_in_n() {
        let v = regularity_verdict(&exp_profile(), 15).unwrap();
        let rank = |g: GuaranteeKind| match g {
            GuaranteeKind::Linf => 2,
            GuaranteeKind::H10 => 1,
            GuaranteeKind::L1Only => 0,
        };
        for w in v.table.windows(2) {
            assert!(rank(w[1].guarantee) <= rank(w[0].guarantee));
        }
        // L^∞ rows always also grant H¹₀
        for row in &v.table {
            if row.linf {
                assert!(row.h10);
            }
        }
    }

    #[test]
    fn adding_certificates_never_weakens_rows() {
        let p = exp_profile();
        let mut set = generate_certificates(&p);
        let base: Vec<DimRow> = (2..=15).map(|d| dim_row(d, &set, &None).unwrap()).collect();
        set.certificates
            .push(EstimateCertificate::new(6.0, 0.5, Clause::User, false).unwrap());
        let more: Vec<DimRow> = (2..=15).map(|d| dim_row(d, &set, &None).unwrap()).collect();
        let rank = |g: GuaranteeKind| match g {
            GuaranteeKind::Linf => 2,
            GuaranteeKind::H10 => 1,
            GuaranteeKind::L1Only => 0,
        };
        for (b, m) in base.iter().zip(&more) {
            assert!(rank(m.guarantee) >= rank(b.guarantee));
            if let (Some(a), Some(b)) = (b.w1r, m.w1r) {
                assert!(b >= a - 1e-12);
            }
        }
    }

    #[test]
    fn h1_all_dimensions_examples() {
        // t (ln t)^a families satisfy (1.32) (f''/f ~ a/(t² ln t)); the
        // exponential fires trivially.
        for a in [0.25, 0.5] {
            let f = Nonlinearity::lin_log_pow(a).unwrap();
            let p = profile(&f, ProfileOptions::default());
            assert_eq!(h1_all_dimensions(&p).as_deref(), Some("(1.32)"), "a = {a}");
        }
        assert!(h1_all_dimensions(&exp_profile()).is_some());
    }

    #[test]
    fn markdown_rendering_mentions_thresholds() {
        let v = regularity_verdict(&exp_profile(), 9).unwrap();
        let md = v.to_markdown();
        assert!(md.contains("n < 10.0"));
        assert!(md.contains("| 9 | L-infinity"));
    }
}
