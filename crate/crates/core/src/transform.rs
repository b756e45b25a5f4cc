//! The weighted Laplace transform ρ̃_α(t) = ∫₀^∞ ρ(y)^α e^{−2ty} dy, in log
//! domain. Every kernel formula divides by this quantity, so it gets a
//! dedicated peak-normalized evaluator and a per-(weight, α) memo table.

use crate::error::{domain, Result};
use crate::numerics::{quad_semiinfinite, LogComplex};
use crate::weights::Weight;
use std::collections::HashMap;
use std::sync::Mutex;

/// One evaluation of log ρ̃_α(t).
#[derive(Debug, Clone, Copy)]
pub struct RhoTildeEval {
    pub log_value: f64,
    /// Relative a-posteriori estimate from the quadrature.
    pub err_est: f64,
    pub alpha: f64,
    pub t: f64,
    pub nodes_used: usize,
    pub converged: bool,
}

/// Interior maximizer of α log ρ(y) − 2ty, found by bisection plus a Newton
/// polish on the monotone equation α ρ'/ρ = 2t. Returns the scale 1/(2t)
/// when α = 0 (no interior peak).
pub(crate) fn integrand_peak(w: &Weight, alpha: f64, t: f64) -> f64 {
    if alpha <= 0.0 {
        return 1.0 / (2.0 * t);
    }
    let target = 2.0 * t / alpha;
    // rho'/rho is strictly decreasing from +inf to 0 for the built-ins
    let mut lo = 1e-300;
    let mut hi = 1.0;
    let mut tries = 0;
    while w.log_deriv(hi) > target && tries < 2100 {
        lo = hi;
        hi *= 2.0;
        tries += 1;
    }
    if tries == 0 {
        // peak below 1: walk down
        while w.log_deriv(lo.max(1e-308)) < target && lo > 1e-300 {
            hi = lo;
            lo /= 2.0;
        }
        if lo <= 1e-300 {
            lo = 1e-300;
        }
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..80 {
        mid = 0.5 * (lo + hi);
        if w.log_deriv(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) < 1e-14 * hi {
            break;
        }
    }
    // Newton polish: g(y) = lr(y) - target, g' = rho''/rho - lr^2
    let mut y = mid;
    for _ in 0..4 {
        let r0 = match w.rho(y, 0) {
            Ok(v) => v,
            Err(_) => break,
        };
        let lr = w.rho(y, 1).unwrap_or(f64::NAN) / r0;
        let dlr = w.rho(y, 2).unwrap_or(f64::NAN) / r0 - lr * lr;
        if !dlr.is_finite() || dlr == 0.0 {
            break;
        }
        let step = (lr - target) / dlr;
        let cand = y - step;
        if cand.is_finite() && cand > 0.0 {
            y = cand;
        } else {
            break;
        }
    }
    if y.is_finite() && y > 0.0 {
        y
    } else {
        mid
    }
}

/// log ρ̃_α(t) by peak-normalized double-exponential quadrature.
pub fn log_rho_tilde(w: &Weight, alpha: f64, t: f64, tol: f64) -> Result<RhoTildeEval> {
    if alpha < 0.0 {
        return Err(domain(format!("log_rho_tilde: alpha must be >= 0, got {alpha}")));
    }
    if !(t > 0.0) {
        return Err(domain(format!("log_rho_tilde: t must be positive, got {t}")));
    }
    let peak = integrand_peak(w, alpha, t);
    // cover both the peak location and the 1/(2t) decay scale
    let scale = peak + 1.0 / (2.0 * t);
    let quad = quad_semiinfinite(
        |y| match w.log_rho(y) {
            Ok(lr) => LogComplex::from_log_mag(alpha * lr - 2.0 * t * y),
            Err(_) => LogComplex::zero(),
        },
        1.0 / scale,
        tol,
    )?;
    let log_value = quad.value.log_mag;
    if !log_value.is_finite() {
        return Err(domain(format!(
            "log_rho_tilde: integral for weight '{}' at alpha={alpha}, t={t} is not finite",
            w.name()
        )));
    }
    Ok(RhoTildeEval {
        log_value,
        err_est: quad.rel_err_est,
        alpha,
        t,
        nodes_used: quad.nodes_used,
        converged: quad.converged,
    })
}

/// Exact oracle for the gamma weight: ρ̃_α(t) = Γ(α+1)/(2t)^{α+1}, as a log.
pub fn rho_tilde_gamma_closed(alpha: f64, t: f64) -> Result<f64> {
    if alpha < 0.0 {
        return Err(domain(format!("rho_tilde_gamma_closed: alpha must be >= 0, got {alpha}")));
    }
    if !(t > 0.0) {
        return Err(domain(format!("rho_tilde_gamma_closed: t must be positive, got {t}")));
    }
    Ok(crate::numerics::ln_gamma(alpha + 1.0)? - (alpha + 1.0) * (2.0 * t).ln())
}

/// Memoized log ρ̃_α evaluator for a fixed (weight, α, tol). Kernel
/// quadratures re-query identical t nodes; results are bitwise independent
/// of cache state.
pub struct RhoTilde {
    weight: Weight,
    alpha: f64,
    tol: f64,
    cache: Mutex<HashMap<u64, f64>>,
}

impl RhoTilde {
    pub fn new(weight: Weight, alpha: f64, tol: f64) -> Self {
        RhoTilde { weight, alpha, tol, cache: Mutex::new(HashMap::new()) }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn log_at(&self, t: f64) -> Result<f64> {
        let key = t.to_bits();
        if let Some(&v) = self.cache.lock().unwrap().get(&key) {
            return Ok(v);
        }
        let eval = log_rho_tilde(&self.weight, self.alpha, t, self.tol)?;
        self.cache.lock().unwrap().insert(key, eval.log_value);
        Ok(eval.log_value)
    }
}
