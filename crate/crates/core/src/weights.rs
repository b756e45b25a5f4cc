//! Vertical weight profiles ρ on (0, ∞): built-in families with exact
//! derivatives to order 4, the log-potential φ = −log ρ, the metric
//! log-determinant ψ, the curvature factor Q, and numeric suitability checks.
//!
//! Built-ins:
//!   "gamma"   ρ(y) = y
//!   "expcap"  ρ(y) = 1 − e^{−y}
//!   "logplus" ρ(y) = log(1 + y)
//!
//! All three extend analytically to the right half-plane Re T > 0 and map it
//! into the right half-plane, so the principal branch of log ρ(T) is the
//! analytic continuation from the positive real axis.

use crate::error::{domain, Error, Result};
use crate::numerics::LogComplex;
use num_complex::Complex64;

pub const VALID_WEIGHTS: &[&str] = &["gamma", "expcap", "logplus"];

/// Maximum derivative order carried by every weight.
pub const EVAL_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Gamma,
    ExpCap,
    LogPlus,
    /// ρ ≡ 1; violates suitability, used to exercise the checker.
    Const,
}

/// A suitable vertical weight with exact derivatives and a genuine analytic
/// extension. Immutable and freely shareable between threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Weight {
    kind: Kind,
}

/// Instantiate a built-in weight family by name.
pub fn make_builtin_weight(name: &str) -> Result<Weight> {
    let kind = match name {
        "gamma" => Kind::Gamma,
        "expcap" => Kind::ExpCap,
        "logplus" => Kind::LogPlus,
        _ => {
            return Err(Error::UnknownWeight { given: name.to_string(), valid: VALID_WEIGHTS })
        }
    };
    Ok(Weight { kind })
}

impl Weight {
    pub fn name(&self) -> &'static str {
        match self.kind {
            Kind::Gamma => "gamma",
            Kind::ExpCap => "expcap",
            Kind::LogPlus => "logplus",
            Kind::Const => "const",
        }
    }

    /// ρ ≡ 1, deliberately unsuitable; only reachable from tests.
    pub(crate) fn constant_for_tests() -> Weight {
        Weight { kind: Kind::Const }
    }

    /// k-th derivative ρ^{(k)}(y) for y > 0, k <= 4, by exact formulas.
    pub fn rho(&self, y: f64, k: usize) -> Result<f64> {
        if !(y > 0.0) {
            return Err(domain(format!("rho: y must be positive, got {y}")));
        }
        if k > EVAL_ORDER {
            return Err(domain(format!("rho: derivative order {k} exceeds {EVAL_ORDER}")));
        }
        Ok(self.rho_unchecked(y, k))
    }

    fn rho_unchecked(&self, y: f64, k: usize) -> f64 {
        match self.kind {
            Kind::Gamma => match k {
                0 => y,
                1 => 1.0,
                _ => 0.0,
            },
            Kind::ExpCap => {
                let e = (-y).exp();
                match k {
                    0 => -(-y).exp_m1(),
                    _ => if k % 2 == 1 { e } else { -e },
                }
            }
            Kind::LogPlus => {
                let t = 1.0 + y;
                match k {
                    0 => y.ln_1p(),
                    1 => 1.0 / t,
                    2 => -1.0 / (t * t),
                    3 => 2.0 / (t * t * t),
                    _ => -6.0 / (t * t * t * t),
                }
            }
            Kind::Const => {
                if k == 0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// log ρ(y), computed without cancellation near the endpoints.
    pub fn log_rho(&self, y: f64) -> Result<f64> {
        if !(y > 0.0) {
            return Err(domain(format!("log_rho: y must be positive, got {y}")));
        }
        Ok(match self.kind {
            Kind::Gamma => y.ln(),
            Kind::ExpCap => (-(-y).exp_m1()).ln(),
            Kind::LogPlus => y.ln_1p().ln(),
            Kind::Const => 0.0,
        })
    }

    /// ρ'/ρ, exact per family (strictly decreasing for suitable weights).
    pub(crate) fn log_deriv(&self, y: f64) -> f64 {
        match self.kind {
            Kind::Gamma => 1.0 / y,
            Kind::ExpCap => {
                // 1/(e^y - 1)
                1.0 / y.exp_m1()
            }
            Kind::LogPlus => 1.0 / ((1.0 + y) * y.ln_1p()),
            Kind::Const => 0.0,
        }
    }

    /// Analytic extension ρ(T), Re T > 0.
    pub fn rho_complex(&self, t: Complex64) -> Result<Complex64> {
        self.require_right_half_plane(t)?;
        Ok(match self.kind {
            Kind::Gamma => t,
            Kind::ExpCap => Complex64::new(1.0, 0.0) - (-t).exp(),
            Kind::LogPlus => (Complex64::new(1.0, 0.0) + t).ln(),
            Kind::Const => Complex64::new(1.0, 0.0),
        })
    }

    fn rho_d1_complex(&self, t: Complex64) -> Complex64 {
        match self.kind {
            Kind::Gamma => Complex64::new(1.0, 0.0),
            Kind::ExpCap => (-t).exp(),
            Kind::LogPlus => (Complex64::new(1.0, 0.0) + t).inv(),
            Kind::Const => Complex64::new(0.0, 0.0),
        }
    }

    fn rho_d2_complex(&self, t: Complex64) -> Complex64 {
        match self.kind {
            Kind::Gamma => Complex64::new(0.0, 0.0),
            Kind::ExpCap => -(-t).exp(),
            Kind::LogPlus => {
                let s = Complex64::new(1.0, 0.0) + t;
                -(s * s).inv()
            }
            Kind::Const => Complex64::new(0.0, 0.0),
        }
    }

    fn require_right_half_plane(&self, t: Complex64) -> Result<()> {
        if !(t.re > 0.0) {
            return Err(domain(format!(
                "weight '{}': complex extension requires Re T > 0, got T = {t}",
                self.name()
            )));
        }
        Ok(())
    }
}

/// k-th derivative of φ = −log ρ at b, k in 0..=4, from ρ-derivative ratios.
pub fn phi(w: &Weight, b: f64, k: usize) -> Result<f64> {
    if !(b > 0.0) {
        return Err(domain(format!("phi: b must be positive, got {b}")));
    }
    if k > EVAL_ORDER {
        return Err(domain(format!("phi: order {k} exceeds {EVAL_ORDER}")));
    }
    if k == 0 {
        return Ok(-w.log_rho(b)?);
    }
    let r0 = w.rho_unchecked(b, 0);
    let g1 = w.rho_unchecked(b, 1) / r0;
    let g2 = w.rho_unchecked(b, 2) / r0;
    let g3 = w.rho_unchecked(b, 3) / r0;
    let g4 = w.rho_unchecked(b, 4) / r0;
    // derivatives of log rho
    let l = match k {
        1 => g1,
        2 => g2 - g1 * g1,
        3 => g3 - 3.0 * g2 * g1 + 2.0 * g1 * g1 * g1,
        _ => g4 - 4.0 * g3 * g1 - 3.0 * g2 * g2 + 12.0 * g2 * g1 * g1 - 6.0 * g1.powi(4),
    };
    Ok(-l)
}

/// k-th derivative (k in 0..=2) of ψ = log(φ''/4 · (−φ')^{n−2}) at b.
pub fn psi(w: &Weight, n: u32, b: f64, k: usize) -> Result<f64> {
    if n < 2 {
        return Err(domain(format!("psi: dimension must be >= 2, got {n}")));
    }
    if k > 2 {
        return Err(domain(format!("psi: order {k} exceeds 2")));
    }
    let p1 = phi(w, b, 1)?;
    let p2 = phi(w, b, 2)?;
    if !(p2 > 0.0) || !(-p1 > 0.0) {
        return Err(domain(format!(
            "psi: suitability violated at b = {b} (phi' = {p1}, phi'' = {p2})"
        )));
    }
    let m = (n - 2) as f64;
    match k {
        0 => Ok((p2 / 4.0).ln() + m * (-p1).ln()),
        1 => {
            let p3 = phi(w, b, 3)?;
            Ok(p3 / p2 + m * p2 / p1)
        }
        _ => {
            let p3 = phi(w, b, 3)?;
            let p4 = phi(w, b, 4)?;
            Ok((p4 * p2 - p3 * p3) / (p2 * p2) + m * (p3 * p1 - p2 * p2) / (p1 * p1))
        }
    }
}

/// Curvature factor Q(b) = (ρ'/ρ)^{n−2} · (−ρ'/ρ)' at b, computed directly
/// from ρ-ratios (the φ route is the cross-check).
pub fn q_factor(w: &Weight, n: u32, b: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(domain(format!("q_factor: b must be positive, got {b}")));
    }
    if n < 2 {
        return Err(domain(format!("q_factor: dimension must be >= 2, got {n}")));
    }
    let r0 = w.rho(b, 0)?;
    let lr = w.rho_unchecked(b, 1) / r0;
    // (-rho'/rho)' = (rho'/rho)^2 - rho''/rho
    let neg_lr_prime = lr * lr - w.rho_unchecked(b, 2) / r0;
    Ok(lr.powi(n as i32 - 2) * neg_lr_prime)
}

/// ρ(T)^{−α} Q(T) in log-magnitude/phase form, with the branch of log ρ
/// continued from the positive real axis (principal branch; every built-in
/// maps Re T > 0 into Re ρ > 0, which is asserted at runtime).
pub fn weight_complex(w: &Weight, n: u32, t: Complex64, alpha: f64) -> Result<LogComplex> {
    if n < 2 {
        return Err(domain(format!("weight_complex: dimension must be >= 2, got {n}")));
    }
    if alpha < 0.0 {
        return Err(domain(format!("weight_complex: alpha must be >= 0, got {alpha}")));
    }
    let rho = w.rho_complex(t)?;
    if !(rho.re > 0.0) {
        return Err(domain(format!(
            "weight '{}': rho(T) = {rho} left the right half-plane at T = {t}; \
             branch of log rho is no longer valid",
            w.name()
        )));
    }
    let log_rho = rho.ln();
    let lr = w.rho_d1_complex(t) / rho;
    let q = lr.powi(n as i32 - 2) * (lr * lr - w.rho_d2_complex(t) / rho);
    Ok(LogComplex::from_complex(q).mul(&LogComplex::new(-alpha * log_rho.re, -alpha * log_rho.im)))
}

// ---------------------------------------------------------------------------
// Suitability
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SuitabilityCheck {
    pub name: &'static str,
    pub range: (f64, f64),
    pub pass: bool,
    /// Signed margin; its meaning is per check (documented in `note`).
    pub worst_margin: f64,
    pub note: &'static str,
}

#[derive(Debug, Clone)]
pub struct SuitabilityReport {
    pub weight: String,
    pub checks: Vec<SuitabilityCheck>,
}

impl SuitabilityReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Check every condition of the suitability definition on a geometric grid
/// in (0, y_max]. The non-decay condition is implied by ρ' > 0 and reported
/// as such; smoothness is declared (built-ins are real-analytic).
pub fn check_suitability(w: &Weight, y_max: f64, grid_size: usize) -> Result<SuitabilityReport> {
    if !(y_max > 0.0) {
        return Err(domain(format!("check_suitability: y_max must be positive, got {y_max}")));
    }
    if grid_size < 16 {
        return Err(domain(format!("check_suitability: grid_size must be >= 16, got {grid_size}")));
    }
    let y_min = y_max * 1e-8;
    let ratio = (y_max / y_min).powf(1.0 / (grid_size as f64 - 1.0));
    let grid: Vec<f64> = (0..grid_size).map(|i| y_min * ratio.powi(i as i32)).collect();

    let mut checks = Vec::new();

    // rho(0+) -> 0, checked as smallness of rho at the grid point nearest 0
    let rho_at_min = w.rho_unchecked(y_min, 0);
    let scale = w.rho_unchecked(y_max.min(1.0), 0).abs().max(1e-30);
    let vanishes = rho_at_min.is_finite() && rho_at_min.abs() <= 1e-5 * scale.max(1.0);
    checks.push(SuitabilityCheck {
        name: "rho-vanishes-at-zero",
        range: (y_min, y_min),
        pass: vanishes,
        worst_margin: rho_at_min,
        note: "margin is rho at the grid point nearest 0; pass requires it to be small",
    });

    // rho'(0+) > 0
    let d_at_min = w.rho_unchecked(y_min, 1);
    checks.push(SuitabilityCheck {
        name: "rho-prime-positive-at-zero",
        range: (y_min, y_min),
        pass: d_at_min.is_finite() && d_at_min > 0.0,
        worst_margin: d_at_min,
        note: "margin is rho' at the grid point nearest 0; pass requires it positive",
    });

    // rho' > 0 on the grid
    let mut worst_d = f64::INFINITY;
    let mut mono_ok = true;
    for &y in &grid {
        let d = w.rho_unchecked(y, 1);
        if !d.is_finite() {
            mono_ok = false;
            worst_d = f64::NAN;
            break;
        }
        worst_d = worst_d.min(d);
    }
    mono_ok = mono_ok && worst_d > 0.0;
    checks.push(SuitabilityCheck {
        name: "rho-increasing",
        range: (y_min, y_max),
        pass: mono_ok,
        worst_margin: worst_d,
        note: "margin is min rho' over the grid; pass requires it positive",
    });

    // (rho'/rho)' < 0 on the grid, i.e. phi'' > 0
    let mut worst_c = f64::NEG_INFINITY;
    let mut conc_ok = true;
    for &y in &grid {
        let r0 = w.rho_unchecked(y, 0);
        let g1 = w.rho_unchecked(y, 1) / r0;
        let lr_prime = w.rho_unchecked(y, 2) / r0 - g1 * g1;
        if !lr_prime.is_finite() {
            conc_ok = false;
            worst_c = f64::NAN;
            break;
        }
        worst_c = worst_c.max(lr_prime);
    }
    conc_ok = conc_ok && worst_c < 0.0;
    checks.push(SuitabilityCheck {
        name: "log-derivative-decreasing",
        range: (y_min, y_max),
        pass: conc_ok,
        worst_margin: worst_c,
        note: "margin is max (rho'/rho)' over the grid; pass requires it negative",
    });

    // non-decay: ∫ e^{ty} rho(y) dy = inf for all t > 0; implied by rho' > 0
    checks.push(SuitabilityCheck {
        name: "non-decay",
        range: (y_min, y_max),
        pass: mono_ok,
        worst_margin: worst_d,
        note: "implied: an increasing rho cannot make the integral finite; not tested by quadrature",
    });

    checks.push(SuitabilityCheck {
        name: "smooth",
        range: (y_min, y_max),
        pass: true,
        worst_margin: 0.0,
        note: "declared: built-in weights are real-analytic on (0, inf)",
    });

    Ok(SuitabilityReport { weight: w.name().to_string(), checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn builtin_construction() {
        let w = make_builtin_weight("gamma").unwrap();
        assert_eq!(w.rho(1.0, 0).unwrap(), 1.0);
        assert_eq!(w.rho(2.5, 1).unwrap(), 1.0);
        assert_eq!(w.rho(2.5, 2).unwrap(), 0.0);
        let w = make_builtin_weight("expcap").unwrap();
        assert!(rel(w.rho(1.0, 0).unwrap(), 1.0 - (-1.0_f64).exp()) < 1e-15);
        assert!((w.rho(1.0, 0).unwrap() - 0.632121).abs() < 1e-6);
        let w = make_builtin_weight("logplus").unwrap();
        assert!(rel(w.rho(2.0, 1).unwrap(), 1.0 / 3.0) < 1e-15);
        assert!((w.rho(1e-12, 1).unwrap() - 1.0).abs() < 1e-9);
        match make_builtin_weight("nope") {
            Err(Error::UnknownWeight { given, valid }) => {
                assert_eq!(given, "nope");
                assert_eq!(valid, VALID_WEIGHTS);
            }
            other => panic!("expected UnknownWeight, got {other:?}"),
        }
    }

    #[test]
    fn phi_gamma_values() {
        let w = make_builtin_weight("gamma").unwrap();
        assert_eq!(phi(&w, 1.0, 0).unwrap(), 0.0);
        assert!(rel(phi(&w, 2.0, 1).unwrap(), -0.5) < 1e-15);
        assert!(rel(phi(&w, 2.0, 2).unwrap(), 0.25) < 1e-15);
        assert!(rel(phi(&w, 2.0, 3).unwrap(), -2.0 / 8.0) < 1e-13);
        assert!(rel(phi(&w, 2.0, 4).unwrap(), 6.0 / 16.0) < 1e-13);
        assert!(phi(&w, 0.0, 0).is_err());
        assert!(phi(&w, -1.0, 1).is_err());
    }

    #[test]
    fn psi_gamma_closed_form() {
        // for rho = y: psi(y) = -log 4 - n log y
        let w = make_builtin_weight("gamma").unwrap();
        assert!(rel(psi(&w, 2, 1.0, 0).unwrap(), -(4.0_f64.ln())) < 1e-14);
        assert!(rel(psi(&w, 3, 2.0, 1).unwrap(), -1.5) < 1e-14);
        assert!(rel(psi(&w, 2, 1.0, 2).unwrap(), 2.0) < 1e-14);
        for n in [2u32, 3, 5] {
            for b in [0.3, 1.0, 4.7] {
                assert!(
                    rel(psi(&w, n, b, 0).unwrap(), -(4.0_f64.ln()) - n as f64 * b.ln()) < 1e-12
                );
                assert!(rel(psi(&w, n, b, 1).unwrap(), -(n as f64) / b) < 1e-12);
                assert!(rel(psi(&w, n, b, 2).unwrap(), n as f64 / (b * b)) < 1e-12);
            }
        }
    }

    #[test]
    fn psi_rejects_unsuitable_point() {
        let w = Weight::constant_for_tests();
        assert!(psi(&w, 2, 1.0, 0).is_err());
    }

    #[test]
    fn q_factor_values() {
        let gamma = make_builtin_weight("gamma").unwrap();
        assert!(rel(q_factor(&gamma, 2, 1.0).unwrap(), 1.0) < 1e-15);
        assert!(rel(q_factor(&gamma, 4, 2.0).unwrap(), 0.0625) < 1e-14);
        // expcap: Q(y) = e^y/(e^y - 1)^n; at n=3, y=1 this is e/(e-1)^3
        let expcap = make_builtin_weight("expcap").unwrap();
        let expect = E / (E - 1.0).powi(3);
        assert!(rel(q_factor(&expcap, 3, 1.0).unwrap(), expect) < 1e-13);
        assert!(q_factor(&gamma, 2, 0.0).is_err());
    }

    #[test]
    fn q_factor_matches_phi_route() {
        for name in VALID_WEIGHTS {
            let w = make_builtin_weight(name).unwrap();
            for n in [2u32, 3, 4, 6] {
                for i in 0..20 {
                    let b = 1e-2 * (1e4_f64).powf(i as f64 / 19.0);
                    let q = q_factor(&w, n, b).unwrap();
                    let via_phi = (-phi(&w, b, 1).unwrap()).powi(n as i32 - 2)
                        * phi(&w, b, 2).unwrap();
                    assert!(rel(q, via_phi) < 1e-12, "{name} n={n} b={b}: {q} vs {via_phi}");
                    assert!(q > 0.0);
                }
            }
        }
    }

    #[test]
    fn pseudoconvexity_on_log_grid() {
        for name in VALID_WEIGHTS {
            let w = make_builtin_weight(name).unwrap();
            for i in 0..=60 {
                let b = 1e-3 * (1e6_f64).powf(i as f64 / 60.0);
                let p1 = phi(&w, b, 1).unwrap();
                let p2 = phi(&w, b, 2).unwrap();
                if p1 == 0.0 {
                    // expcap beyond y ~ 745: e^{-y} underflows; the sign
                    // survives in the signed zero
                    assert!(p1.is_sign_negative(), "{name} phi'({b})");
                } else {
                    assert!(p2 > 0.0, "{name} phi''({b}) = {p2}");
                    assert!(p1 < 0.0, "{name} phi'({b}) = {p1}");
                }
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for name in VALID_WEIGHTS {
            let w = make_builtin_weight(name).unwrap();
            for k in 1..=4usize {
                for i in 0..20 {
                    let y = 0.2 + 3.0 * i as f64 / 19.0;
                    let h = 1e-5 * y.max(1.0);
                    let fd = (w.rho(y + h, k - 1).unwrap() - w.rho(y - h, k - 1).unwrap())
                        / (2.0 * h);
                    let exact = w.rho(y, k).unwrap();
                    let denom = exact.abs().max(1e-8);
                    assert!(
                        (fd - exact).abs() / denom < 1e-6,
                        "{name} k={k} y={y}: fd={fd} exact={exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn complex_extension_agrees_on_real_axis() {
        for name in VALID_WEIGHTS {
            let w = make_builtin_weight(name).unwrap();
            for i in 0..25 {
                let y = 0.05 + 5.0 * i as f64 / 24.0;
                let c = w.rho_complex(Complex64::new(y, 0.0)).unwrap();
                assert!(rel(c.re, w.rho(y, 0).unwrap()) < 1e-12, "{name} y={y}");
                assert!(c.im.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn weight_complex_gamma_cases() {
        let w = make_builtin_weight("gamma").unwrap();
        // T=1, n=2, alpha=3: T^{-3} T^{-2} ... at T=1 everything is 1
        let v = weight_complex(&w, 2, Complex64::new(1.0, 0.0), 3.0).unwrap();
        assert!(v.log_mag.abs() < 1e-14 && v.phase.abs() < 1e-14);
        // alpha = 0, n = 2: Q(2) = 1/4
        let v = weight_complex(&w, 2, Complex64::new(2.0, 0.0), 0.0).unwrap();
        assert!(rel(v.to_complex().re, 0.25) < 1e-14);
        // T = 1+i, alpha=1, n=2: (1+i)^{-3}
        let v = weight_complex(&w, 2, Complex64::new(1.0, 1.0), 1.0).unwrap();
        assert!(rel(v.log_mag, -1.5 * 2.0_f64.ln()) < 1e-13);
        assert!((v.phase - (-3.0 * PI / 4.0)).abs() < 1e-13);
        assert!(weight_complex(&w, 2, Complex64::new(-1.0, 0.5), 1.0).is_err());
    }

    #[test]
    fn weight_complex_matches_real_paths() {
        for name in VALID_WEIGHTS {
            let w = make_builtin_weight(name).unwrap();
            for n in [2u32, 3, 5] {
                for alpha in [0.0, 1.0, 7.5] {
                    for i in 0..10 {
                        let t = 0.3 + 2.0 * i as f64 / 9.0;
                        let v = weight_complex(&w, n, Complex64::new(t, 0.0), alpha).unwrap();
                        let real_path = (-alpha * w.log_rho(t).unwrap()).exp()
                            * q_factor(&w, n, t).unwrap();
                        assert!(
                            rel(v.to_complex().re, real_path) < 1e-10,
                            "{name} n={n} a={alpha} t={t}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn suitability_builtins_pass() {
        for name in VALID_WEIGHTS {
            let w = make_builtin_weight(name).unwrap();
            let report = check_suitability(&w, 10.0, 64).unwrap();
            assert!(report.all_pass(), "{name}: {report:?}");
            assert_eq!(report.checks.len(), 6);
        }
    }

    #[test]
    fn suitability_expcap_log_concavity_margin() {
        // oracle: (rho'/rho)' = -e^y/(e^y-1)^2, negative at every node
        let w = make_builtin_weight("expcap").unwrap();
        let report = check_suitability(&w, 10.0, 64).unwrap();
        let check = report.checks.iter().find(|c| c.name == "log-derivative-decreasing").unwrap();
        assert!(check.pass);
        assert!(check.worst_margin < 0.0);
        // worst (closest to zero) margin on the grid is at y = y_max
        let y = 10.0_f64;
        let expect = -y.exp() / (y.exp() - 1.0).powi(2);
        assert!(rel(check.worst_margin, expect) < 1e-9);
    }

    #[test]
    fn suitability_constant_weight_fails_vanishing() {
        let w = Weight::constant_for_tests();
        let report = check_suitability(&w, 10.0, 32).unwrap();
        assert!(!report.all_pass());
        let vanish = report.checks.iter().find(|c| c.name == "rho-vanishes-at-zero").unwrap();
        assert!(!vanish.pass);
        assert_eq!(vanish.worst_margin, 1.0);
    }

    #[test]
    fn suitability_validates_inputs() {
        let w = make_builtin_weight("gamma").unwrap();
        assert!(check_suitability(&w, 0.0, 32).is_err());
        assert!(check_suitability(&w, 1.0, 8).is_err());
    }
}
