//! Harmonic Berezin transform of vertical symbols and the first three
//! operators of its large-α expansion.
//!
//! For f(x, y) = g(y) the transform collapses to a double integral over
//! (r, y); the expansion operators act on g through the Siegel metric
//! attached to φ = −log ρ. Functions invariant under horizontal rotations
//! reduce to two scalar variables u = Im w − |z|² and s = |z|², and the
//! metric Laplacian closes on that class:
//!
//!   Δ̃F(u, s) = (n−2)(F_s − F_u)/(−φ'(u)) + F_uu/φ''(u) + s·F_ss/(−φ'(u)),
//!
//! which is what powers the Δ̃² term of the second-order operator.

use crate::error::{domain, Error, Result};
use crate::kernels::KernelCtx;
use crate::numerics::{quad_semiinfinite, sphere_area, LogComplex};
use crate::transform::integrand_peak;
use crate::weights::{phi, psi, Weight};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

pub const VALID_SYMBOLS: &[&str] = &["one", "exp", "exp:<c>", "recip", "ratio"];

#[derive(Debug, Clone)]
enum SymKind {
    /// g ≡ 1
    One,
    /// g(y) = e^{-c y}, c > 0
    ExpDecay(f64),
    /// g(y) = 1/(1+y)
    Recip,
    /// g(y) = y/(1+y)
    Ratio,
    /// c1 g1 + c2 g2
    Combo(f64, Box<SymKind>, f64, Box<SymKind>),
}

/// A bounded smooth vertical symbol with exact derivatives to order 4.
#[derive(Debug, Clone)]
pub struct VerticalSymbol {
    name: String,
    kind: SymKind,
}

fn sym_eval(kind: &SymKind, y: f64, k: usize) -> f64 {
    match kind {
        SymKind::One => {
            if k == 0 {
                1.0
            } else {
                0.0
            }
        }
        SymKind::ExpDecay(c) => (-c).powi(k as i32) * (-c * y).exp(),
        SymKind::Recip => {
            // d^k (1+y)^{-1} = (-1)^k k! (1+y)^{-k-1}
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let fact: f64 = (1..=k).map(|i| i as f64).product();
            sign * fact * (1.0 + y).powi(-(k as i32) - 1)
        }
        SymKind::Ratio => {
            // y/(1+y) = 1 - 1/(1+y)
            if k == 0 {
                y / (1.0 + y)
            } else {
                -sym_eval(&SymKind::Recip, y, k)
            }
        }
        SymKind::Combo(c1, a, c2, b) => c1 * sym_eval(a, y, k) + c2 * sym_eval(b, y, k),
    }
}

fn sym_bound(kind: &SymKind) -> f64 {
    match kind {
        SymKind::One | SymKind::ExpDecay(_) | SymKind::Recip | SymKind::Ratio => 1.0,
        SymKind::Combo(c1, a, c2, b) => c1.abs() * sym_bound(a) + c2.abs() * sym_bound(b),
    }
}

impl VerticalSymbol {
    /// Parse a symbol name: "one", "exp" (= e^{-y}), "exp:<c>", "recip"
    /// (= 1/(1+y)), "ratio" (= y/(1+y)).
    pub fn by_name(name: &str) -> Result<Self> {
        let kind = if name == "one" {
            SymKind::One
        } else if name == "exp" {
            SymKind::ExpDecay(1.0)
        } else if let Some(c) = name.strip_prefix("exp:") {
            let c: f64 = c
                .parse()
                .map_err(|_| Error::UnknownSymbol { given: name.to_string(), valid: VALID_SYMBOLS })?;
            if !(c > 0.0) {
                return Err(domain(format!("symbol exp:<c> requires c > 0, got {c}")));
            }
            SymKind::ExpDecay(c)
        } else if name == "recip" {
            SymKind::Recip
        } else if name == "ratio" {
            SymKind::Ratio
        } else {
            return Err(Error::UnknownSymbol { given: name.to_string(), valid: VALID_SYMBOLS });
        };
        Ok(VerticalSymbol { name: name.to_string(), kind })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// k-th derivative g^{(k)}(y), k <= 4.
    pub fn eval(&self, y: f64, k: usize) -> Result<f64> {
        if !(y > 0.0) {
            return Err(domain(format!("symbol eval: y must be positive, got {y}")));
        }
        if k > 4 {
            return Err(domain(format!("symbol eval: order {k} exceeds 4")));
        }
        Ok(sym_eval(&self.kind, y, k))
    }

    /// A bound with |g| <= bound on (0, inf).
    pub fn bound(&self) -> f64 {
        sym_bound(&self.kind)
    }

    /// c1·g1 + c2·g2, for linearity checks.
    pub(crate) fn linear_combination(c1: f64, g1: &Self, c2: f64, g2: &Self) -> Self {
        VerticalSymbol {
            name: format!("{}*{} + {}*{}", c1, g1.name, c2, g2.name),
            kind: SymKind::Combo(c1, Box::new(g1.kind.clone()), c2, Box::new(g2.kind.clone())),
        }
    }
}

// ---------------------------------------------------------------------------
// Berezin transform
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct BerezinValue {
    pub value: f64,
    pub err_est: f64,
    pub converged: bool,
}

/// (B_α f)(a, b) for f(x, y) = g(y); independent of a by horizontal
/// translation invariance.
///
/// Computed as 2^{1−n} π^{1−n} ω_{n−1} · N / R_α(a,b;a,b), where
/// N = ∫∫ g(y) ρ(y)^α r^{n−2} e^{−2(b+y)r} / ρ̃_α(r)² dr dy is evaluated
/// inner-y-first and the diagonal kernel comes from its own radial route,
/// so the normalization exercises the full constant chain.
pub fn berezin_vertical(
    w: &Weight,
    n: u32,
    alpha: f64,
    g: &VerticalSymbol,
    b: f64,
    tol: f64,
) -> Result<BerezinValue> {
    if !(b > 0.0) {
        return Err(domain(format!("berezin_vertical: b must be positive, got {b}")));
    }
    let ctx = KernelCtx::new(*w, n, alpha, tol * 0.3)?;
    let inner_tol = (tol * 0.1).max(1e-13);
    let nf = n as f64;

    // inner y-integral: same peak structure as the Laplace transform
    let inner = |r: f64| -> Result<(LogComplex, bool)> {
        let scale = integrand_peak(w, alpha, r) + 1.0 / (2.0 * r);
        let quad = quad_semiinfinite(
            |y| {
                let lr = match w.log_rho(y) {
                    Ok(v) => v,
                    Err(_) => return LogComplex::zero(),
                };
                let gv = sym_eval(&g.kind, y, 0);
                LogComplex::from_real(gv).mul(&LogComplex::from_log_mag(alpha * lr - 2.0 * r * y))
            },
            1.0 / scale,
            inner_tol,
        )?;
        Ok((quad.value, quad.converged))
    };

    // outer r-integral of r^{n-2} e^{-2br} / rho~(r)^2 * inner(r)
    let scale = ctx.scan_scale_for(2.0 * b)?;
    let all_conv = std::cell::Cell::new(true);
    let outer = quad_semiinfinite(
        |r| {
            let lrt = match ctx.rho_tilde().log_at(r) {
                Ok(v) => v,
                Err(_) => {
                    all_conv.set(false);
                    return LogComplex::zero();
                }
            };
            let (iv, conv) = match inner(r) {
                Ok(v) => v,
                Err(_) => {
                    all_conv.set(false);
                    return LogComplex::zero();
                }
            };
            if !conv {
                all_conv.set(false);
            }
            iv.mul(&LogComplex::from_log_mag((nf - 2.0) * r.ln() - 2.0 * b * r - 2.0 * lrt))
        },
        1.0 / scale,
        tol * 0.3,
    )?;
    let mut all_conv = all_conv.get() && outer.converged;

    let (diag, diag_rel, diag_conv) =
        crate::kernels::r_alpha_diagonal_log(w, n, alpha, b, tol * 0.3)?;
    all_conv &= diag_conv;

    let coef = LogComplex::from_log_mag(
        (1.0 - nf) * 2.0_f64.ln() + (1.0 - nf) * PI.ln() + sphere_area(n - 1)?.ln(),
    );
    let b_val = outer.value.mul(&coef).div(&diag);
    let z = b_val.to_complex();
    let rel = outer.rel_err_est + diag_rel + inner_tol;
    Ok(BerezinValue { value: z.re, err_est: rel * z.norm(), converged: all_conv })
}

// ---------------------------------------------------------------------------
// Expansion operators
// ---------------------------------------------------------------------------

/// First-order operator applied to a vertical symbol:
/// Q₁g(b) = g''(b)/φ''(b) + (n−2) g'(b)/φ'(b).
pub fn q1_vertical(w: &Weight, n: u32, g: &VerticalSymbol, b: f64) -> Result<f64> {
    if n < 2 {
        return Err(domain(format!("q1_vertical: dimension must be >= 2, got {n}")));
    }
    let p1 = phi(w, b, 1)?;
    let p2 = phi(w, b, 2)?;
    if !(p2 > 0.0) {
        return Err(domain(format!("q1_vertical: phi''(b) = {p2} is not positive at b = {b}")));
    }
    Ok(g.eval(b, 2)? / p2 + (n as f64 - 2.0) * g.eval(b, 1)? / p1)
}

/// Functions of (u, s) with partial derivatives up to total order 4,
/// u = Im w − |z|² and s = |z|².
pub trait UsFunction {
    /// ∂^{du+ds} F / ∂u^{du} ∂s^{ds} at (u, s).
    fn partial(&self, u: f64, s: f64, du: usize, ds: usize) -> f64;
}

/// Vertical symbol viewed as the (u, s)-class function F(u, s) = g(u).
pub struct VerticalUs<'a>(pub &'a VerticalSymbol);

impl UsFunction for VerticalUs<'_> {
    fn partial(&self, u: f64, _s: f64, du: usize, ds: usize) -> f64 {
        if ds > 0 {
            0.0
        } else {
            sym_eval(&self.0.kind, u, du)
        }
    }
}

/// The metric Laplacian Σ g^{j̄k} ∂²/∂z̄_j∂z_k applied to an (u, s)-class
/// function, as the closed block contraction (rational in s, so it extends
/// to small s < 0, which the second-order stencil uses at s = 0).
pub fn tilde_laplace_us(w: &Weight, n: u32, f: &dyn UsFunction, u: f64, s: f64) -> Result<f64> {
    if n < 2 {
        return Err(domain(format!("tilde_laplace_us: dimension must be >= 2, got {n}")));
    }
    let p1 = phi(w, u, 1)?;
    let p2 = phi(w, u, 2)?;
    if !(p2 > 0.0) || !(-p1 > 0.0) {
        return Err(domain(format!(
            "tilde_laplace_us: metric degenerate at u = {u} (phi' = {p1}, phi'' = {p2})"
        )));
    }
    let fuu = f.partial(u, s, 2, 0);
    if n == 2 {
        if s != 0.0 {
            return Err(domain("tilde_laplace_us: n = 2 has no horizontal variables; s must be 0"));
        }
        return Ok(fuu / p2);
    }
    let fu = f.partial(u, s, 1, 0);
    let fs = f.partial(u, s, 0, 1);
    let fss = f.partial(u, s, 0, 2);
    Ok((n as f64 - 2.0) * (fs - fu) / (-p1) + fuu / p2 + s * fss / (-p1))
}

/// The Siegel metric g_{jk̄} = ∂²φ(Im w − |z|²)/∂z_j∂z̄_k at a point with
/// |z|² = s (taken as z = (√s, 0, …, 0) by unitary invariance).
#[derive(Debug, Clone, Copy)]
pub struct SiegelMetric {
    pub n: u32,
    pub u: f64,
    pub s: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl SiegelMetric {
    pub fn at(w: &Weight, n: u32, u: f64, s: f64) -> Result<Self> {
        if n < 3 {
            return Err(domain("SiegelMetric::at requires n >= 3 (n = 2 is the scalar φ''/4)"));
        }
        if !(s >= 0.0) {
            return Err(domain(format!("SiegelMetric: s must be >= 0, got {s}")));
        }
        let phi1 = phi(w, u, 1)?;
        let phi2 = phi(w, u, 2)?;
        if !(phi2 > 0.0) || !(-phi1 > 0.0) {
            return Err(domain(format!("SiegelMetric: degenerate at u = {u}")));
        }
        Ok(SiegelMetric { n, u, s, phi1, phi2 })
    }

    /// Dense (n-1)×(n-1) Hermitian matrix: diagonal −φ' I plus the rank-one
    /// φ'' z̄ zᵀ block, cross column −(i/2) z̄_j φ'', corner φ''/4.
    pub fn assemble(&self) -> DMatrix<Complex64> {
        let m = (self.n - 1) as usize;
        let z1 = self.s.sqrt();
        let mut a = DMatrix::<Complex64>::zeros(m, m);
        for j in 0..m - 1 {
            a[(j, j)] = Complex64::new(-self.phi1, 0.0);
        }
        a[(0, 0)] += Complex64::new(self.phi2 * self.s, 0.0);
        a[(0, m - 1)] = Complex64::new(0.0, -0.5 * z1 * self.phi2);
        a[(m - 1, 0)] = a[(0, m - 1)].conj();
        a[(m - 1, m - 1)] = Complex64::new(self.phi2 / 4.0, 0.0);
        a
    }

    /// log det of the metric; equals ψ(u) for every s.
    pub fn det_log(&self) -> f64 {
        (self.phi2 / 4.0).ln() + (self.n as f64 - 2.0) * (-self.phi1).ln()
    }
}

/// Dense-solve evaluation of the same contraction, kept as the oracle the
/// closed form must match to 1e-12.
pub(crate) fn tilde_laplace_dense(
    w: &Weight,
    n: u32,
    f: &dyn UsFunction,
    u: f64,
    s: f64,
) -> Result<f64> {
    let metric = SiegelMetric::at(w, n, u, s)?;
    let a = metric.assemble();
    let m = (n - 1) as usize;
    let z1 = s.sqrt();
    let fu = f.partial(u, s, 1, 0);
    let fs = f.partial(u, s, 0, 1);
    let fuu = f.partial(u, s, 2, 0);
    let fus = f.partial(u, s, 1, 1);
    let fss = f.partial(u, s, 0, 2);
    // H[j][k] = d^2 F / dz_j dz̄_k with the same (u,s) chain-rule structure
    let mut h = DMatrix::<Complex64>::zeros(m, m);
    for j in 0..m - 1 {
        h[(j, j)] = Complex64::new(fs - fu, 0.0);
    }
    h[(0, 0)] += Complex64::new((fss - 2.0 * fus + fuu) * s, 0.0);
    h[(0, m - 1)] = Complex64::new(0.0, 0.5 * z1 * (fus - fuu));
    h[(m - 1, 0)] = h[(0, m - 1)].conj();
    h[(m - 1, m - 1)] = Complex64::new(fuu / 4.0, 0.0);
    let lu = a.lu();
    let solved = lu
        .solve(&h)
        .ok_or_else(|| domain(format!("tilde_laplace_dense: singular metric at u={u}, s={s}")))?;
    Ok(solved.trace().re)
}

/// Second-order operator applied to a vertical symbol:
/// Q₂g(b) = ½ (Δ̃²h)(0, ib) − ψ''(b) g''(b)/(2 φ''(b)²)
///          − (n−2) ψ'(b) g'(b)/(2 φ'(b)²),
/// with h(z, x+iy) = g(y − |z|²) and Δ̃² the variable-coefficient
/// composition evaluated through a finite-difference stencil on Δ̃h.
pub fn q2_vertical(w: &Weight, n: u32, g: &VerticalSymbol, b: f64, fd_step: f64) -> Result<f64> {
    if !(fd_step > 0.0) {
        return Err(domain(format!("q2_vertical: fd_step must be positive, got {fd_step}")));
    }
    let p1 = phi(w, b, 1)?;
    let p2 = phi(w, b, 2)?;
    if !(p2 > 0.0) || !(-p1 > 0.0) {
        return Err(domain(format!("q2_vertical: metric degenerate at b = {b}")));
    }
    let f = VerticalUs(g);
    let h = fd_step;
    let big_g = |u: f64, s: f64| tilde_laplace_us(w, n, &f, u, s);

    let g0 = big_g(b, 0.0)?;
    let gp = big_g(b + h, 0.0)?;
    let gm = big_g(b - h, 0.0)?;
    let g_u = (gp - gm) / (2.0 * h);
    let g_uu = (gp - 2.0 * g0 + gm) / (h * h);

    let laplace_sq = if n == 2 {
        g_uu / p2
    } else {
        let g_s = (big_g(b, h)? - big_g(b, -h)?) / (2.0 * h);
        (n as f64 - 2.0) * (g_s - g_u) / (-p1) + g_uu / p2
    };

    let s1 = psi(w, n, b, 1)?;
    let s2 = psi(w, n, b, 2)?;
    let ricci_part =
        -s2 * g.eval(b, 2)? / (2.0 * p2 * p2) - (n as f64 - 2.0) * s1 * g.eval(b, 1)? / (2.0 * p1 * p1);
    Ok(0.5 * laplace_sq + ricci_part)
}

/// Diagonal entries of the inverse Siegel metric at z = 0:
/// n−2 horizontal copies of −1/φ'(b) and the corner 4/φ''(b).
#[derive(Debug, Clone, Copy)]
pub struct MetricInverseAtOrigin {
    pub horizontal: f64,
    pub corner: f64,
}

pub fn siegel_metric_inverse_at_origin(w: &Weight, n: u32, b: f64) -> Result<MetricInverseAtOrigin> {
    if n < 2 {
        return Err(domain(format!("dimension must be >= 2, got {n}")));
    }
    let p1 = phi(w, b, 1)?;
    let p2 = phi(w, b, 2)?;
    if !(p2 > 0.0) || !(-p1 > 0.0) {
        return Err(domain(format!("siegel metric degenerate at b = {b} (suitability violated)")));
    }
    Ok(MetricInverseAtOrigin { horizontal: -1.0 / p1, corner: 4.0 / p2 })
}
