//! Harmonic Bergman kernel R_α on the half-space and the Siegel-domain
//! holomorphic slice K⁰_α it reduces to, each by quadrature routes that are
//! independent apart from the shared Laplace transform ρ̃_α, plus the
//! closed forms available for the gamma weight ρ(y) = y.

use crate::error::{domain, Result};
use crate::numerics::{
    hyp0f1, ln_gamma, quad_jacobi_log, quad_semiinfinite, LogAccumulator, LogComplex,
};
use crate::transform::RhoTilde;
use crate::weights::Weight;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Kernel evaluation point: R_α(x, y; a, b) depends on (x, a) only through
/// the horizontal separation d = |x - a|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    pub d: f64,
    pub y: f64,
    pub b: f64,
}

impl KernelPoint {
    pub fn new(d: f64, y: f64, b: f64) -> Result<Self> {
        if !(d >= 0.0) {
            return Err(domain(format!("KernelPoint: d must be >= 0, got {d}")));
        }
        if !(y > 0.0) || !(b > 0.0) {
            return Err(domain(format!("KernelPoint: y and b must be positive, got y={y}, b={b}")));
        }
        Ok(KernelPoint { d, y, b })
    }

    pub fn diagonal(b: f64) -> Result<Self> {
        Self::new(0.0, b, b)
    }
}

/// Which code path produced a kernel value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Radial,
    HolomorphicReduction,
    ClosedForm,
}

impl Route {
    pub fn as_str(&self) -> &'static str {
        match self {
            Route::Radial => "radial",
            Route::HolomorphicReduction => "holomorphic-reduction",
            Route::ClosedForm => "closed-form",
        }
    }
}

/// Real harmonic-kernel value with propagated quadrature error.
#[derive(Debug, Clone, Copy)]
pub struct KernelValue {
    pub value: f64,
    pub err_est: f64,
    pub route: Route,
    pub converged: bool,
}

/// Complex holomorphic-slice value K⁰_α.
#[derive(Debug, Clone, Copy)]
pub struct K0Value {
    pub value: Complex64,
    pub err_est: f64,
    pub converged: bool,
}

fn validate_common(n: u32, alpha: f64, tol: f64) -> Result<()> {
    if n < 2 {
        return Err(domain(format!("dimension must be >= 2, got {n}")));
    }
    if alpha < 0.0 {
        return Err(domain(format!("alpha must be >= 0, got {alpha}")));
    }
    if !(tol > 0.0) {
        return Err(domain(format!("tol must be positive, got {tol}")));
    }
    Ok(())
}

/// Shared evaluation context: one weight, dimension, α and tolerance, with
/// a memoized ρ̃_α so that all quadratures against the same kernel reuse
/// transform values.
pub struct KernelCtx {
    weight: Weight,
    n: u32,
    alpha: f64,
    tol: f64,
    rho_tilde: RhoTilde,
}

impl KernelCtx {
    pub fn new(weight: Weight, n: u32, alpha: f64, tol: f64) -> Result<Self> {
        validate_common(n, alpha, tol)?;
        // the transform is queried at every outer node; keep it tighter
        let inner_tol = (tol * 0.1).max(1e-13);
        Ok(KernelCtx { weight, n, alpha, tol, rho_tilde: RhoTilde::new(weight, alpha, inner_tol) })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rho_tilde(&self) -> &RhoTilde {
        &self.rho_tilde
    }

    /// Log of the common kernel integrand r^{n-2} e^{-(y+b) r} / ρ̃_α(r).
    fn integrand_log_mag(&self, r: f64, y_plus_b: f64) -> Result<f64> {
        let lrt = self.rho_tilde.log_at(r)?;
        Ok((self.n as f64 - 2.0) * r.ln() - y_plus_b * r - lrt)
    }

    /// Locate the integrand concentration scale by a coarse log-spaced scan
    /// of the actual log-integrand; the evaluations stay in the ρ̃ cache.
    pub(crate) fn scan_scale_for(&self, y_plus_b: f64) -> Result<f64> {
        let r0 = (self.alpha + self.n as f64) / y_plus_b;
        let lo = r0 * 1e-3;
        let hi = r0 * 1e2;
        let ratio = (hi / lo).powf(1.0 / 39.0);
        let mut best_r = r0;
        let mut best_v = f64::NEG_INFINITY;
        for i in 0..40 {
            let r = lo * ratio.powi(i);
            let v = self.integrand_log_mag(r, y_plus_b)?;
            if v > best_v {
                best_v = v;
                best_r = r;
            }
        }
        Ok(best_r)
    }

    /// K⁰_α(x + iy; ib) in log form.
    pub fn k0_log(&self, x: f64, y: f64, b: f64) -> Result<(LogComplex, f64, usize, bool)> {
        if !(y > 0.0) || !(b > 0.0) {
            return Err(domain(format!("k0: y and b must be positive, got y={y}, b={b}")));
        }
        let ypb = y + b;
        let scale = self.scan_scale_for(ypb)?;
        let quad = quad_semiinfinite(
            |r| match self.integrand_log_mag(r, ypb) {
                Ok(lm) => LogComplex::new(lm, x * r),
                Err(_) => LogComplex::zero(),
            },
            1.0 / scale,
            self.tol,
        )?;
        let nf = self.n as f64;
        let coef = LogComplex::from_log_mag((nf - 3.0) * 2.0_f64.ln() - (nf - 1.0) * PI.ln());
        Ok((quad.value.mul(&coef), quad.rel_err_est, quad.nodes_used, quad.converged))
    }

    /// Radial route: single quadrature against the sphere-integral factor
    /// (₀F₁ for n > 2, cosine for n = 2).
    pub fn radial_log(&self, p: &KernelPoint) -> Result<(LogComplex, f64, usize, bool)> {
        let ypb = p.y + p.b;
        let scale = self.scan_scale_for(ypb)?;
        let n = self.n;
        let nf = n as f64;
        let d = p.d;
        let quad = quad_semiinfinite(
            |r| {
                let lm = match self.integrand_log_mag(r, ypb) {
                    Ok(v) => v,
                    Err(_) => return LogComplex::zero(),
                };
                let angular = if n == 2 {
                    (r * d).cos()
                } else {
                    let z = -(r * d / 2.0) * (r * d / 2.0);
                    hyp0f1((nf - 1.0) / 2.0, z).unwrap_or(0.0)
                };
                LogComplex::from_log_mag(lm).mul(&LogComplex::from_real(angular))
            },
            1.0 / scale,
            self.tol,
        )?;
        let coef = LogComplex::from_log_mag(
            (2.0 - nf) * 2.0_f64.ln() + 0.5 * (1.0 - nf) * PI.ln()
                - ln_gamma((nf - 1.0) / 2.0)?,
        );
        Ok((quad.value.mul(&coef), quad.rel_err_est, quad.nodes_used, quad.converged))
    }

    /// Holomorphic-reduction route: 2 Re K⁰ for n = 2, else the weighted
    /// interval integral of K⁰ slices with Gauss–Jacobi nodes, doubling the
    /// node count until two rules agree.
    pub fn via_holomorphic_log(&self, p: &KernelPoint) -> Result<(LogComplex, f64, bool)> {
        let n = self.n;
        let nf = n as f64;
        if n == 2 {
            let (k0, rel, _, conv) = self.k0_log(p.d, p.y, p.b)?;
            let mut acc = LogAccumulator::new();
            acc.push(k0);
            acc.push(k0.conj());
            return Ok((acc.value(), rel, conv));
        }
        let lambda = (nf - 4.0) / 2.0;
        // oscillation across t scales like alpha*d/(y+b)
        let osc = self.alpha * p.d / (p.y + p.b);
        let mut m = (32 + (0.8 * osc) as usize).next_multiple_of(16);
        let mut prev: Option<LogComplex> = None;
        let mut worst_rel = 0.0_f64;
        let mut all_conv = true;
        loop {
            let mut node_rel = 0.0_f64;
            // K⁰(-dt + iy) = conj K⁰(dt + iy): fold the two half-intervals
            let val = quad_jacobi_log(
                |t| {
                    if t < 0.0 {
                        return LogComplex::zero();
                    }
                    match self.k0_log(p.d * t, p.y, p.b) {
                        Ok((v, rel, _, conv)) => {
                            node_rel = node_rel.max(rel);
                            all_conv &= conv;
                            if t == 0.0 {
                                v
                            } else {
                                let mut acc = LogAccumulator::new();
                                acc.push(v);
                                acc.push(v.conj());
                                acc.value()
                            }
                        }
                        Err(_) => {
                            all_conv = false;
                            LogComplex::zero()
                        }
                    }
                },
                lambda,
                m,
            )?;
            worst_rel = worst_rel.max(node_rel);
            if let Some(last) = prev {
                let diff = LogComplex::rel_diff(&val, &last);
                if diff <= self.tol.max(1e-13) * 10.0 || m >= 1024 {
                    let coef = LogComplex::from_log_mag(
                        (4.0 - 2.0 * nf) * 2.0_f64.ln()
                            + crate::numerics::sphere_area(n - 2)?.ln(),
                    );
                    let converged = all_conv && m < 1024;
                    return Ok((val.mul(&coef), worst_rel + diff, converged));
                }
            }
            prev = Some(val);
            m *= 2;
        }
    }
}

fn log_to_real(v: LogComplex, rel: f64, route: Route, converged: bool) -> KernelValue {
    let z = v.to_complex();
    KernelValue { value: z.re, err_est: rel * z.norm(), route, converged }
}

/// Holomorphic kernel slice K⁰_α(x + iy; ib), complex-valued.
pub fn k0_alpha(
    w: &Weight,
    n: u32,
    alpha: f64,
    x: f64,
    y: f64,
    b: f64,
    tol: f64,
) -> Result<K0Value> {
    let ctx = KernelCtx::new(*w, n, alpha, tol)?;
    let (v, rel, _, conv) = ctx.k0_log(x, y, b)?;
    let z = v.to_complex();
    Ok(K0Value { value: z, err_est: rel * z.norm(), converged: conv })
}

/// Closed form of K⁰_α for the gamma weight:
/// 2^{n+α-2} Γ(n+α) / (π^{n-1} Γ(α+1)) · (b - ix + y)^{-n-α}.
pub fn k0_gamma_closed(n: u32, alpha: f64, x: f64, y: f64, b: f64) -> Result<Complex64> {
    if n < 2 || alpha < 0.0 {
        return Err(domain(format!("k0_gamma_closed: need n >= 2, alpha >= 0; got n={n}, alpha={alpha}")));
    }
    if !(y > 0.0) || !(b > 0.0) {
        return Err(domain(format!("k0_gamma_closed: y and b must be positive, got y={y}, b={b}")));
    }
    let nf = n as f64;
    let coef = (nf + alpha - 2.0) * 2.0_f64.ln() + ln_gamma(nf + alpha)?
        - (nf - 1.0) * PI.ln()
        - ln_gamma(alpha + 1.0)?;
    let base = Complex64::new(b + y, -x);
    let v = LogComplex::from_complex(base).powf(-(nf + alpha)).mul(&LogComplex::from_log_mag(coef));
    Ok(v.to_complex())
}

/// Harmonic kernel by the radial (polar-coordinate) route.
pub fn r_alpha_radial(
    w: &Weight,
    n: u32,
    alpha: f64,
    p: &KernelPoint,
    tol: f64,
) -> Result<KernelValue> {
    let ctx = KernelCtx::new(*w, n, alpha, tol)?;
    let (v, rel, _, conv) = ctx.radial_log(p)?;
    Ok(log_to_real(v, rel, Route::Radial, conv))
}

/// Harmonic kernel through the holomorphic slice (interval integral of K⁰
/// for n > 2, twice the real part for n = 2). Independent of the radial
/// route except for the shared ρ̃_α.
pub fn r_alpha_via_holomorphic(
    w: &Weight,
    n: u32,
    alpha: f64,
    p: &KernelPoint,
    tol: f64,
) -> Result<KernelValue> {
    let ctx = KernelCtx::new(*w, n, alpha, tol)?;
    let (v, rel, conv) = ctx.via_holomorphic_log(p)?;
    Ok(log_to_real(v, rel, Route::HolomorphicReduction, conv))
}

/// Diagonal value R_α(a, b; a, b): the radial route at d = 0, where the
/// sphere factor is identically 1.
pub fn r_alpha_diagonal(w: &Weight, n: u32, alpha: f64, b: f64, tol: f64) -> Result<KernelValue> {
    let p = KernelPoint::diagonal(b)?;
    r_alpha_radial(w, n, alpha, &p, tol)
}

/// Diagonal value in log form, for α too large for the plain float range.
pub fn r_alpha_diagonal_log(
    w: &Weight,
    n: u32,
    alpha: f64,
    b: f64,
    tol: f64,
) -> Result<(LogComplex, f64, bool)> {
    let ctx = KernelCtx::new(*w, n, alpha, tol)?;
    let p = KernelPoint::diagonal(b)?;
    let (v, rel, _, conv) = ctx.radial_log(&p)?;
    Ok((v, rel, conv))
}

/// Closed form of R_α for the gamma weight and n > 2 (the b = 1 special
/// case is the classical display; general (y, b) comes out of the same
/// derivation):
/// [2^{α-n+3} Γ(α+n) / (π^{n/2} Γ(α+1) Γ((n-2)/2))] ·
/// ∫_{-1}^{1} (1-t²)^{(n-4)/2} (y + b - i d t)^{-α-n} dt.
pub fn r_alpha_gamma_closed(n: u32, alpha: f64, p: &KernelPoint) -> Result<f64> {
    if n <= 2 {
        return Err(domain(format!("r_alpha_gamma_closed requires n > 2, got {n}")));
    }
    if alpha < 0.0 {
        return Err(domain(format!("alpha must be >= 0, got {alpha}")));
    }
    let nf = n as f64;
    let coef = (alpha - nf + 3.0) * 2.0_f64.ln() + ln_gamma(alpha + nf)?
        - 0.5 * nf * PI.ln()
        - ln_gamma(alpha + 1.0)?
        - ln_gamma((nf - 2.0) / 2.0)?;
    let lambda = (nf - 4.0) / 2.0;
    let power = -(alpha + nf);
    let integrand = |t: f64| {
        LogComplex::from_complex(Complex64::new(p.y + p.b, -p.d * t)).powf(power)
    };
    // node count driven by the oscillation scale alpha*d/(y+b)
    let mut m = (48 + (alpha * p.d / (p.y + p.b)) as usize).next_multiple_of(16);
    let mut prev = quad_jacobi_log(integrand, lambda, m)?;
    loop {
        m *= 2;
        let cur = quad_jacobi_log(integrand, lambda, m)?;
        if LogComplex::rel_diff(&cur, &prev) < 1e-12 || m >= 4096 {
            return Ok(cur.mul(&LogComplex::from_log_mag(coef)).to_complex().re);
        }
        prev = cur;
    }
}

/// n = 2 closed chain for the gamma weight: R_α = 2 Re K⁰_α.
pub fn r_alpha_gamma_closed_n2(alpha: f64, p: &KernelPoint) -> Result<f64> {
    Ok(2.0 * k0_gamma_closed(2, alpha, p.d, p.y, p.b)?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::make_builtin_weight;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    const TOL: f64 = 1e-11;

    #[test]
    fn k0_gamma_closed_values() {
        // n=2, alpha=0, x=0, y=b=1: 1/(4π)
        let v = k0_gamma_closed(2, 0.0, 0.0, 1.0, 1.0).unwrap();
        assert!(rel(v.re, 1.0 / (4.0 * PI)) < 1e-13 && v.im.abs() < 1e-18);
        // n=3, alpha=1, x=0, y=b=1: 3/(2π²)
        let v = k0_gamma_closed(3, 1.0, 0.0, 1.0, 1.0).unwrap();
        assert!(rel(v.re, 1.5 / (PI * PI)) < 1e-13);
        // modulus decays as x grows
        let a = k0_gamma_closed(2, 0.0, 10.0, 1.0, 1.0).unwrap().norm();
        let b = k0_gamma_closed(2, 0.0, 100.0, 1.0, 1.0).unwrap().norm();
        assert!(b < a && b < 1e-4);
    }

    #[test]
    fn k0_quadrature_matches_closed_form() {
        let w = make_builtin_weight("gamma").unwrap();
        // n=2, alpha=0, x=0, y=b=1/2 -> 1/π
        let v = k0_alpha(&w, 2, 0.0, 0.0, 0.5, 0.5, TOL).unwrap();
        assert!(rel(v.value.re, 1.0 / PI) < 1e-9, "{}", v.value.re);
        assert!(v.value.im.abs() < 1e-10);
        // n=4, alpha=0, x=0, y=b=1 -> 3/(2π³)
        let v = k0_alpha(&w, 4, 0.0, 0.0, 1.0, 1.0, TOL).unwrap();
        assert!(rel(v.value.re, 1.5 / PI.powi(3)) < 1e-9);
        // n=2, alpha=0, x=1, y=b=1/2 -> i/(2π)
        let v = k0_alpha(&w, 2, 0.0, 1.0, 0.5, 0.5, TOL).unwrap();
        assert!(v.value.re.abs() < 1e-10);
        assert!(rel(v.value.im, 1.0 / (2.0 * PI)) < 1e-9);
    }

    #[test]
    fn k0_matches_closed_on_grid() {
        let w = make_builtin_weight("gamma").unwrap();
        for n in [2u32, 3, 4] {
            for alpha in [0.0, 1.0, 5.0, 20.0] {
                for x in [0.0, 0.5, 1.0] {
                    let (y, b) = (0.8, 1.1);
                    let got = k0_alpha(&w, n, alpha, x, y, b, TOL).unwrap().value;
                    let expect = k0_gamma_closed(n, alpha, x, y, b).unwrap();
                    assert!(
                        (got - expect).norm() / expect.norm() < 1e-8,
                        "n={n} a={alpha} x={x}: {got} vs {expect}"
                    );
                }
            }
        }
    }

    #[test]
    fn radial_gamma_diagonal_closed_values() {
        let w = make_builtin_weight("gamma").unwrap();
        // n=4, alpha=0, diag b=1: 3/(8π²)
        let p = KernelPoint::diagonal(1.0).unwrap();
        let v = r_alpha_radial(&w, 4, 0.0, &p, TOL).unwrap();
        assert!(rel(v.value, 3.0 / (8.0 * PI * PI)) < 1e-9, "{}", v.value);
        // n=2: (α+1)/(2π)
        for alpha in [0.0, 1.0, 5.0, 20.0] {
            let v = r_alpha_diagonal(&w, 2, alpha, 1.0, TOL).unwrap();
            assert!(rel(v.value, (alpha + 1.0) / (2.0 * PI)) < 1e-9, "alpha={alpha}");
        }
    }

    #[test]
    fn gamma_closed_form_n3_diagonal() {
        // hand evaluation: (2/π²)·(π/8) = 1/(4π)
        let p = KernelPoint::diagonal(1.0).unwrap();
        let v = r_alpha_gamma_closed(3, 0.0, &p).unwrap();
        assert!(rel(v, 1.0 / (4.0 * PI)) < 1e-11, "{v}");
        let v = r_alpha_gamma_closed(4, 0.0, &p).unwrap();
        assert!(rel(v, 3.0 / (8.0 * PI * PI)) < 1e-11);
        assert!(r_alpha_gamma_closed(2, 0.0, &p).is_err());
    }

    #[test]
    fn radial_matches_gamma_closed_off_diagonal() {
        let w = make_builtin_weight("gamma").unwrap();
        let p = KernelPoint::new(0.5, 0.7, 1.2).unwrap();
        for n in [3u32, 4, 5] {
            for alpha in [0.0, 2.0, 20.0] {
                let got = r_alpha_radial(&w, n, alpha, &p, TOL).unwrap().value;
                let expect = r_alpha_gamma_closed(n, alpha, &p).unwrap();
                assert!(rel(got, expect) < 1e-8, "n={n} a={alpha}: {got} vs {expect}");
            }
        }
    }

    #[test]
    fn n2_closed_chain_off_diagonal() {
        let w = make_builtin_weight("gamma").unwrap();
        // d=1, y=b=1/2: 2 Re[(1/π)(1-i)^{-2}] = Re[i/(2π)]·2 = 0
        let p = KernelPoint::new(1.0, 0.5, 0.5).unwrap();
        let closed = r_alpha_gamma_closed_n2(0.0, &p).unwrap();
        assert!(closed.abs() < 1e-14);
        let got = r_alpha_radial(&w, 2, 0.0, &p, TOL).unwrap().value;
        assert!(got.abs() < 1e-10, "{got}");
        // generic point
        let p = KernelPoint::new(0.6, 0.9, 1.4).unwrap();
        for alpha in [0.0, 3.0, 12.0] {
            let got = r_alpha_radial(&w, 2, alpha, &p, TOL).unwrap().value;
            let expect = r_alpha_gamma_closed_n2(alpha, &p).unwrap();
            assert!(rel(got, expect) < 1e-8, "alpha={alpha}: {got} vs {expect}");
        }
    }

    #[test]
    fn route_equivalence_spot() {
        // expcap, n=3, alpha=5: radial vs holomorphic reduction
        let w = make_builtin_weight("expcap").unwrap();
        let p = KernelPoint::new(0.3, 0.8, 1.1).unwrap();
        let a = r_alpha_radial(&w, 3, 5.0, &p, TOL).unwrap();
        let b = r_alpha_via_holomorphic(&w, 3, 5.0, &p, TOL).unwrap();
        assert!(rel(a.value, b.value) < 1e-7, "{} vs {}", a.value, b.value);
        assert_eq!(a.route, Route::Radial);
        assert_eq!(b.route, Route::HolomorphicReduction);
    }

    #[test]
    fn symmetry_in_vertical_coordinates() {
        let w = make_builtin_weight("logplus").unwrap();
        let p1 = KernelPoint::new(0.4, 0.6, 1.5).unwrap();
        let p2 = KernelPoint::new(0.4, 1.5, 0.6).unwrap();
        for n in [2u32, 4] {
            let a = r_alpha_radial(&w, n, 7.0, &p1, TOL).unwrap().value;
            let b = r_alpha_radial(&w, n, 7.0, &p2, TOL).unwrap().value;
            assert!(rel(a, b) < 1e-10, "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn diagonal_positive() {
        for name in ["gamma", "expcap", "logplus"] {
            let w = make_builtin_weight(name).unwrap();
            for n in [2u32, 3, 4] {
                for alpha in [0.0, 5.0, 50.0] {
                    for b in [0.5, 1.0, 2.0] {
                        let v = r_alpha_diagonal(&w, n, alpha, b, 1e-9).unwrap();
                        assert!(v.value > 0.0, "{name} n={n} a={alpha} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_invalid_inputs() {
        let w = make_builtin_weight("gamma").unwrap();
        assert!(KernelPoint::new(-0.1, 1.0, 1.0).is_err());
        assert!(KernelPoint::new(0.0, 0.0, 1.0).is_err());
        assert!(k0_alpha(&w, 1, 0.0, 0.0, 1.0, 1.0, 1e-10).is_err());
        let p = KernelPoint::diagonal(1.0).unwrap();
        assert!(r_alpha_radial(&w, 2, -1.0, &p, 1e-10).is_err());
        assert!(r_alpha_radial(&w, 2, 1.0, &p, 0.0).is_err());
    }
}
