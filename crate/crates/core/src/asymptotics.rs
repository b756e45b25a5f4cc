//! Leading asymptotic terms of the kernel expansions and coefficient
//! fitting from computed data by Richardson-style extrapolation in 1/α.

use crate::error::{domain, Result};
use crate::kernels::KernelPoint;
use crate::numerics::{ln_gamma, quad_jacobi_log, sphere_area, LogAccumulator, LogComplex};
use crate::weights::{q_factor, weight_complex, Weight};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

/// log of C_n = 2^{3-2n} / (π^{(n-1)/2} Γ((n-1)/2)), the diagonal-limit
/// constant.
pub fn diag_constant_log(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(domain(format!("dimension must be >= 2, got {n}")));
    }
    let nf = n as f64;
    Ok((3.0 - 2.0 * nf) * 2.0_f64.ln() - 0.5 * (nf - 1.0) * PI.ln() - ln_gamma((nf - 1.0) / 2.0)?)
}

/// C_n itself.
pub fn diag_constant(n: u32) -> Result<f64> {
    Ok(diag_constant_log(n)?.exp())
}

/// Leading diagonal prediction α^{n-1} ρ(b)^{-α} C_n Q(b), as a log.
pub fn diag_leading_log(w: &Weight, n: u32, alpha: f64, b: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(domain(format!("diag_leading: alpha must be positive, got {alpha}")));
    }
    if !(b > 0.0) {
        return Err(domain(format!("diag_leading: b must be positive, got {b}")));
    }
    let q = q_factor(w, n, b)?;
    if !(q > 0.0) {
        return Err(domain(format!("diag_leading: Q(b) = {q} not positive at b = {b}")));
    }
    Ok((n as f64 - 1.0) * alpha.ln() - alpha * w.log_rho(b)? + diag_constant_log(n)? + q.ln())
}

/// Leading diagonal prediction in ordinary floating point.
pub fn diag_leading(w: &Weight, n: u32, alpha: f64, b: f64) -> Result<f64> {
    Ok(diag_leading_log(w, n, alpha, b)?.exp())
}

/// Off-diagonal leading-term profile: the kernel expansion with the series
/// truncated at c₀ ≡ 1 and the α^{n-1} prefactor divided out.
///
/// For n > 2 this is π^{1-n} I_t[ρ(T)^{-α} Q(T)] with
/// T = (y+b)/2 − i d t/2 and I_t carrying its constant 2^{2-2n} ω_{n-2};
/// for n = 2 it is (1/4π) · 2 Re[ρ(T)^{-α} Q(T)] at T = (y+b)/2 − i d/2.
pub fn offdiag_leading_profile(
    w: &Weight,
    n: u32,
    alpha: f64,
    p: &KernelPoint,
    m_nodes: usize,
) -> Result<f64> {
    if n < 2 {
        return Err(domain(format!("dimension must be >= 2, got {n}")));
    }
    if alpha < 0.0 {
        return Err(domain(format!("alpha must be >= 0, got {alpha}")));
    }
    let nf = n as f64;
    let c = (p.y + p.b) / 2.0;
    if n == 2 {
        let t = Complex64::new(c, -p.d / 2.0);
        let v = weight_complex(w, n, t, alpha)?;
        let mut acc = LogAccumulator::new();
        acc.push(v);
        acc.push(v.conj());
        let two_re = acc.value();
        return Ok(two_re.mul(&LogComplex::from_log_mag(-(4.0 * PI).ln())).to_complex().re);
    }
    let lambda = (nf - 4.0) / 2.0;
    let sum = quad_jacobi_log(
        |t| match weight_complex(w, n, Complex64::new(c, -p.d * t / 2.0), alpha) {
            Ok(v) => v,
            Err(_) => LogComplex::zero(),
        },
        lambda,
        m_nodes,
    )?;
    // I_t constant 2^{2-2n} ω_{n-2}, and the expansion prefactor π^{1-n}
    let coef = LogComplex::from_log_mag(
        (2.0 - 2.0 * nf) * 2.0_f64.ln() + sphere_area(n - 2)?.ln() + (1.0 - nf) * PI.ln(),
    );
    Ok(sum.mul(&coef).to_complex().re)
}

/// Leading off-diagonal term of the kernel expansion,
/// α^{n-1} · offdiag_leading_profile.
pub fn offdiag_leading(
    w: &Weight,
    n: u32,
    alpha: f64,
    p: &KernelPoint,
    m_nodes: usize,
) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(domain(format!("offdiag_leading: alpha must be positive, got {alpha}")));
    }
    let profile = offdiag_leading_profile(w, n, alpha, p, m_nodes)?;
    Ok(((n as f64 - 1.0) * alpha.ln()).exp() * profile)
}

// ---------------------------------------------------------------------------
// Coefficient fitting
// ---------------------------------------------------------------------------

/// Least-squares fit of samples to Σ_{j<=k} c_j α^{-j}, with leave-one-out
/// uncertainty for each coefficient and a condition estimate of the design.
#[derive(Debug, Clone)]
pub struct ExpansionFit {
    pub coefficients: Vec<f64>,
    pub residual_norm: f64,
    /// Per-coefficient spread across leave-one-out refits.
    pub uncertainty: Vec<f64>,
    pub condition: f64,
    pub well_conditioned: bool,
}

fn solve_least_squares(samples: &[(f64, f64)], k: usize) -> Result<(Vec<f64>, f64, f64)> {
    let rows = samples.len();
    let cols = k + 1;
    let mut design = DMatrix::<f64>::zeros(rows, cols);
    let mut rhs = DVector::<f64>::zeros(rows);
    for (i, &(alpha, value)) in samples.iter().enumerate() {
        for j in 0..cols {
            design[(i, j)] = alpha.powi(-(j as i32));
        }
        rhs[i] = value;
    }
    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let sol = svd
        .solve(&rhs, 0.0)
        .map_err(|e| domain(format!("richardson_fit: SVD solve failed: {e}")))?;
    let residual = (&design * &sol - &rhs).norm();
    Ok((sol.iter().copied().collect(), residual, condition))
}

/// Fit value(α) ≈ Σ_{j<=k} c_j α^{-j} from samples at strictly increasing α.
pub fn richardson_fit(samples: &[(f64, f64)], k: usize) -> Result<ExpansionFit> {
    if samples.len() < k + 2 {
        return Err(domain(format!(
            "richardson_fit: need at least k+2 = {} samples, got {}",
            k + 2,
            samples.len()
        )));
    }
    for w in samples.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(domain("richardson_fit: alpha samples must be strictly increasing"));
        }
    }
    if samples.iter().any(|&(a, _)| !(a > 0.0)) {
        return Err(domain("richardson_fit: alpha samples must be positive"));
    }
    let (coefficients, residual_norm, condition) = solve_least_squares(samples, k)?;
    let mut uncertainty = vec![0.0_f64; k + 1];
    for skip in 0..samples.len() {
        let subset: Vec<(f64, f64)> =
            samples.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &s)| s).collect();
        if subset.len() >= k + 1 {
            if let Ok((loo, _, _)) = solve_least_squares(&subset, k) {
                for j in 0..=k {
                    uncertainty[j] = uncertainty[j].max((loo[j] - coefficients[j]).abs());
                }
            }
        }
    }
    Ok(ExpansionFit {
        coefficients,
        residual_norm,
        uncertainty,
        condition,
        well_conditioned: condition < 1e12,
    })
}

/// Three-point Richardson estimate of the α → ∞ limit for samples at
/// (α, 2α, 4α): eliminates the 1/α and 1/α² terms exactly.
pub fn richardson3_ratio2(v1: f64, v2: f64, v3: f64) -> f64 {
    (8.0 * v3 - 6.0 * v2 + v1) / 3.0
}

/// Slope of log error against log α by least squares; the empirical
/// convergence order of a remainder.
pub fn convergence_order(samples: &[(f64, f64)]) -> Result<f64> {
    if samples.len() < 3 {
        return Err(domain(format!("convergence_order: need >= 3 samples, got {}", samples.len())));
    }
    if samples.iter().any(|&(a, e)| !(a > 0.0) || !(e > 0.0)) {
        return Err(domain("convergence_order: alphas and errors must be positive"));
    }
    let n = samples.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(a, e) in samples {
        let x = a.ln();
        let y = e.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    Ok((n * sxy - sx * sy) / (n * sxx - sx * sx))
}
