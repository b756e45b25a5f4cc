//! Quadrature engines: a double-exponential rule on (0, ∞) for log-domain
//! integrands, and Gauss–Jacobi rules on [-1, 1] with weight (1-t²)^λ.

use super::logc::{LogAccumulator, LogComplex};
use crate::error::{domain, Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Value of one integral evaluation together with an a-posteriori error
/// estimate (relative difference of the last two refinement levels).
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: LogComplex,
    /// |I_k - I_{k-1}| / |I_k|, never negative.
    pub rel_err_est: f64,
    pub nodes_used: usize,
    pub converged: bool,
}

impl QuadratureResult {
    pub fn value_complex(&self) -> Complex64 {
        self.value.to_complex()
    }

    /// Absolute error estimate in ordinary floating point (may saturate).
    pub fn err_est(&self) -> f64 {
        if self.value.is_zero() {
            return 0.0;
        }
        self.rel_err_est * self.value.log_mag.exp()
    }
}

/// Node cap for the adaptive refinement; exceeding it flags non-convergence.
const NODE_CAP: usize = 1 << 20;

/// Integrate f over (0, ∞) where f returns log-domain values.
///
/// Substitution r = s·exp(π/2·sinh t) with s = 1/decay_rate_hint, trapezoid
/// sums at halving step sizes until the level difference drops under `tol`.
/// The value is always returned; `converged` is false past the node cap.
pub fn quad_semiinfinite<F>(f: F, decay_rate_hint: f64, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> LogComplex,
{
    if !(decay_rate_hint > 0.0) || !decay_rate_hint.is_finite() {
        return Err(domain(format!(
            "quad_semiinfinite requires a positive finite decay hint, got {decay_rate_hint}"
        )));
    }
    if !(tol > 0.0) {
        return Err(domain("quad_semiinfinite requires tol > 0"));
    }
    let scale = 1.0 / decay_rate_hint;
    let log_scale = scale.ln();
    let g = PI / 2.0;

    // One node of the transformed trapezoid sum, or None once r would leave
    // the representable range.
    let node_term = |j: i64, h: f64| -> Option<LogComplex> {
        let t = j as f64 * h;
        let sh = g * t.sinh();
        if (sh + log_scale).abs() > 660.0 {
            return None;
        }
        let r = scale * sh.exp();
        let wlog = log_scale + sh + (g * t.cosh() * h).ln();
        Some(f(r).mul(&LogComplex::from_log_mag(wlog)))
    };

    // One trapezoid pass at step h. Sums j = 0, then outward on each side
    // until terms fall 60 e-folds under the running peak.
    let level_sum = |h: f64| -> (LogComplex, usize) {
        let mut acc = LogAccumulator::new();
        let mut nodes = 0usize;
        if let Some(term) = node_term(0, h) {
            acc.push(term);
            nodes += 1;
        }
        for dir in [1i64, -1] {
            let mut fading = 0;
            let mut j = dir;
            loop {
                match node_term(j, h) {
                    None => break,
                    Some(term) => {
                        nodes += 1;
                        acc.push(term);
                        if term.log_mag < acc.peak() - 60.0 {
                            fading += 1;
                            if fading >= 6 {
                                break;
                            }
                        } else {
                            fading = 0;
                        }
                    }
                }
                j += dir;
                if j.unsigned_abs() as usize > NODE_CAP {
                    break;
                }
            }
        }
        (acc.value(), nodes)
    };

    let mut h = 0.5;
    let (mut prev, mut total_nodes) = level_sum(h);
    let mut rel = f64::INFINITY;
    for _ in 0..14 {
        h *= 0.5;
        let (cur, n) = level_sum(h);
        total_nodes += n;
        rel = LogComplex::rel_diff(&cur, &prev);
        prev = cur;
        if rel <= tol {
            return Ok(QuadratureResult {
                value: cur,
                rel_err_est: rel,
                nodes_used: total_nodes,
                converged: true,
            });
        }
        if total_nodes > NODE_CAP {
            break;
        }
    }
    Ok(QuadratureResult { value: prev, rel_err_est: rel, nodes_used: total_nodes, converged: false })
}

// ---------------------------------------------------------------------------
// Gauss–Jacobi on [-1, 1] with weight (1 - t²)^λ (symmetric Jacobi).
// ---------------------------------------------------------------------------

type JacobiRule = Arc<Vec<(f64, f64)>>;

fn jacobi_cache() -> &'static Mutex<HashMap<(u64, usize), JacobiRule>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), JacobiRule>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Nodes and weights of the m-point Gauss–Jacobi rule for ∫ (1-t²)^λ F dt,
/// by the Golub–Welsch algorithm on the symmetric Jacobi matrix.
pub fn jacobi_rule(lambda: f64, m: usize) -> Result<JacobiRule> {
    if !(lambda >= -0.5) {
        return Err(domain(format!(
            "jacobi_rule requires lambda >= -1/2 (n >= 3), got {lambda}"
        )));
    }
    if m < 2 {
        return Err(domain("jacobi_rule requires at least 2 nodes"));
    }
    let key = (lambda.to_bits(), m);
    if let Some(r) = jacobi_cache().lock().unwrap().get(&key) {
        return Ok(r.clone());
    }

    let a = lambda; // both Jacobi exponents equal
    let mut mat = DMatrix::<f64>::zeros(m, m);
    for k in 1..m {
        let kf = k as f64;
        // First off-diagonal coefficient needs its own formula: the general
        // one is 0/0 at 2k + 2a = 0 (lambda = -1/2, k = 1).
        let off = if k == 1 {
            (4.0 * (1.0 + a) * (1.0 + a) / ((2.0 * a + 2.0) * (2.0 * a + 2.0) * (2.0 * a + 3.0)))
                .sqrt()
        } else {
            let denom = 2.0 * kf + 2.0 * a;
            (4.0 * kf * (kf + a) * (kf + a) * (kf + 2.0 * a)
                / (denom * denom * (denom + 1.0) * (denom - 1.0)))
                .sqrt()
        };
        mat[(k - 1, k)] = off;
        mat[(k, k - 1)] = off;
    }
    let eigen = mat.symmetric_eigen();
    // mu0 = ∫ (1-t²)^λ dt = sqrt(pi) Γ(λ+1)/Γ(λ+3/2)
    let mu0 = (0.5 * PI.ln() + super::special::ln_gamma_unchecked(a + 1.0)
        - super::special::ln_gamma_unchecked(a + 1.5))
        .exp();
    let mut pairs: Vec<(f64, f64)> = eigen
        .eigenvalues
        .iter()
        .copied()
        .zip(eigen.eigenvectors.row(0).iter().map(|v| v * v * mu0))
        .collect();
    pairs.sort_unstable_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    // symmetric weight: middle node of an odd rule is exactly 0
    if m % 2 == 1 {
        pairs[m / 2].0 = 0.0;
    }
    let rule = Arc::new(pairs);
    jacobi_cache().lock().unwrap().insert(key, rule.clone());
    Ok(rule)
}

/// ∫_{-1}^{1} (1-t²)^λ F(t) dt with an m-node Gauss–Jacobi rule.
/// Exact for polynomial F of degree <= 2m-1.
pub fn quad_jacobi<F>(mut f: F, lambda: f64, m: usize) -> Result<Complex64>
where
    F: FnMut(f64) -> Complex64,
{
    let rule = jacobi_rule(lambda, m)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for &(x, w) in rule.iter() {
        sum += f(x) * w;
    }
    Ok(sum)
}

/// Same rule applied to a log-domain integrand, summed without overflow.
pub fn quad_jacobi_log<F>(mut f: F, lambda: f64, m: usize) -> Result<LogComplex>
where
    F: FnMut(f64) -> LogComplex,
{
    let rule = jacobi_rule(lambda, m)?;
    let mut acc = LogAccumulator::new();
    for &(x, w) in rule.iter() {
        acc.push(f(x).mul(&LogComplex::from_real(w)));
    }
    Ok(acc.value())
}

/// Convenience wrapper turning a flagged result into a hard error.
pub fn require_converged(r: QuadratureResult, what: &str) -> Result<QuadratureResult> {
    if r.converged {
        Ok(r)
    } else {
        Err(Error::NonConvergence {
            what: what.to_string(),
            rel_err: r.rel_err_est,
            nodes: r.nodes_used,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::ln_gamma;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn exponential_integral() {
        let r = quad_semiinfinite(|x| LogComplex::from_log_mag(-x), 1.0, 1e-12).unwrap();
        assert!(r.converged);
        assert!((r.value_complex().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_integrals_vs_log_gamma() {
        // ∫ r^k e^{-c r} dr = Γ(k+1)/c^{k+1}
        for k in 0..=6 {
            for c in [0.5, 1.0, 3.0] {
                let r = quad_semiinfinite(
                    |x| LogComplex::from_log_mag(k as f64 * x.ln() - c * x),
                    c,
                    1e-12,
                )
                .unwrap();
                let expect = (ln_gamma(k as f64 + 1.0).unwrap() - (k as f64 + 1.0) * c.ln()).exp();
                assert!(
                    rel(r.value_complex().re, expect) < 1e-10,
                    "k={k} c={c}: {} vs {expect}",
                    r.value_complex().re
                );
            }
        }
        // r^3 e^{-2r} -> Γ(4)/2^4 = 0.375
        let r = quad_semiinfinite(|x| LogComplex::from_log_mag(3.0 * x.ln() - 2.0 * x), 2.0, 1e-12)
            .unwrap();
        assert!(rel(r.value_complex().re, 0.375) < 1e-11);
    }

    #[test]
    fn complex_phase_integral() {
        // ∫ r e^{-r} e^{ir} dr = Γ(2) (1-i)^{-2} = i/2
        let r = quad_semiinfinite(|x| LogComplex::new(x.ln() - x, x), 1.0, 1e-12).unwrap();
        let v = r.value_complex();
        assert!(v.re.abs() < 1e-11, "re = {}", v.re);
        assert!((v.im - 0.5).abs() < 1e-11, "im = {}", v.im);
    }

    #[test]
    fn peaked_large_exponent_integrand() {
        // ∫ r^400 e^{-2r} dr = Γ(401)/2^401, far outside f64 range
        let r = quad_semiinfinite(
            |x| LogComplex::from_log_mag(400.0 * x.ln() - 2.0 * x),
            2.0 / 401.0,
            1e-12,
        )
        .unwrap();
        let expect_log = ln_gamma(401.0).unwrap() - 401.0 * 2.0_f64.ln();
        assert!(r.converged);
        assert!((r.value.log_mag - expect_log).abs() < 1e-9, "{} vs {expect_log}", r.value.log_mag);
    }

    #[test]
    fn hint_misestimate_still_converges() {
        let r = quad_semiinfinite(|x| LogComplex::from_log_mag(-x), 40.0, 1e-11).unwrap();
        assert!(r.converged);
        assert!((r.value_complex().re - 1.0).abs() < 1e-10);
        let r = quad_semiinfinite(|x| LogComplex::from_log_mag(-x), 0.03, 1e-11).unwrap();
        assert!(r.converged);
        assert!((r.value_complex().re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(quad_semiinfinite(|_| LogComplex::one(), 0.0, 1e-10).is_err());
        assert!(quad_semiinfinite(|_| LogComplex::one(), 1.0, 0.0).is_err());
    }

    #[test]
    fn jacobi_interval_lengths() {
        // λ=0: ∫ dt = 2; λ=-1/2: ∫ (1-t²)^{-1/2} dt = π
        let v = quad_jacobi(|_| Complex64::new(1.0, 0.0), 0.0, 8).unwrap();
        assert!(rel(v.re, 2.0) < 1e-13);
        let v = quad_jacobi(|_| Complex64::new(1.0, 0.0), -0.5, 8).unwrap();
        assert!(rel(v.re, PI) < 1e-13);
    }

    #[test]
    fn jacobi_monomial() {
        let v = quad_jacobi(|t| Complex64::new(t * t, 0.0), 0.0, 2).unwrap();
        assert!(rel(v.re, 2.0 / 3.0) < 1e-13);
    }

    #[test]
    fn jacobi_beta_integral_for_dimension_weights() {
        // λ = (n-4)/2, F ≡ 1 → sqrt(π) Γ((n-2)/2)/Γ((n-1)/2)
        for n in 3..=8u32 {
            let lam = (n as f64 - 4.0) / 2.0;
            let v = quad_jacobi(|_| Complex64::new(1.0, 0.0), lam, 24).unwrap();
            let expect = (0.5 * PI.ln() + ln_gamma((n as f64 - 2.0) / 2.0).unwrap()
                - ln_gamma((n as f64 - 1.0) / 2.0).unwrap())
            .exp();
            assert!(rel(v.re, expect) < 1e-12, "n={n}: {} vs {expect}", v.re);
        }
    }

    #[test]
    fn jacobi_rejects_lambda_below_chebyshev() {
        assert!(jacobi_rule(-1.0, 8).is_err());
    }

    #[test]
    fn jacobi_log_variant_agrees() {
        let a = quad_jacobi(|t| Complex64::new((2.0 * t).cos(), 0.0), 0.5, 32).unwrap();
        let b = quad_jacobi_log(|t| LogComplex::from_real((2.0 * t).cos()), 0.5, 32).unwrap();
        assert!(rel(a.re, b.to_complex().re) < 1e-13);
    }
}
