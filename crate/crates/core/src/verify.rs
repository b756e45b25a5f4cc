//! The verification catalog: every identity and convergence claim the
//! library is expected to satisfy, as self-contained checks shared by the
//! `bergman verify` subcommand and the acceptance test suite.

use crate::asymptotics::{
    convergence_order, diag_constant, diag_leading, offdiag_leading, richardson3_ratio2,
    richardson_fit,
};
use crate::berezin::{
    berezin_vertical, q1_vertical, q2_vertical, tilde_laplace_us, UsFunction, VerticalSymbol,
    VerticalUs,
};
use crate::kernels::{
    k0_alpha, k0_gamma_closed, r_alpha_diagonal, r_alpha_diagonal_log, r_alpha_gamma_closed,
    r_alpha_gamma_closed_n2, r_alpha_radial, r_alpha_via_holomorphic, KernelPoint,
};
use crate::numerics::{hyp0f1, jacobi_rule, sphere_area};
use crate::transform::RhoTilde;
use crate::weights::{make_builtin_weight, phi, psi, q_factor, Weight};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

/// Verification depth: `Quick` runs the gamma-weight closed-form checks,
/// `Full` adds cross-route, Berezin and expansion-fit checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

/// One verification check: a measured value against its tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: &'static str,
    pub desc: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub verdict: String,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn worst_check(id: &'static str, desc: &str, value: f64, tol: f64) -> Check {
    Check { id, desc: desc.to_string(), value, tol, pass: value.is_finite() && value <= tol }
}

fn failed_check(id: &'static str, desc: &str, err: impl std::fmt::Display) -> Check {
    Check { id, desc: format!("{desc} [error: {err}]"), value: f64::NAN, tol: 0.0, pass: false }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

const PI: f64 = std::f64::consts::PI;

/// Small deterministic generator for the randomized point sets, so that the
/// verify output is byte-identical between runs without a rand dependency.
struct SplitMix(u64);

impl SplitMix {
    fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z = z ^ (z >> 31);
        (z >> 11) as f64 / (1u64 << 53) as f64
    }

    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

const TOL: f64 = 1e-10;

// ---------------------------------------------------------------------------
// Acceptance criteria
// ---------------------------------------------------------------------------

/// Gamma-weight kernel exactness: radial route against the closed form for
/// n in {3,4,5}, alpha in {0,1,5,20}, on the diagonal and two off-diagonal
/// points, including the hand values 3/(8π²) and 1/(4π).
pub fn check_gamma_kernel_exactness() -> Check {
    let id = "gamma-kernel-exactness";
    let desc = "radial route vs closed form (gamma weight), max relative error";
    let run = || -> crate::Result<f64> {
        let w = make_builtin_weight("gamma")?;
        let points = [
            KernelPoint::diagonal(1.0)?,
            KernelPoint::new(0.5, 0.8, 1.2)?,
            KernelPoint::new(1.0, 1.0, 1.0)?,
        ];
        let mut worst = 0.0_f64;
        for n in [3u32, 4, 5] {
            for alpha in [0.0, 1.0, 5.0, 20.0] {
                for p in &points {
                    let got = r_alpha_radial(&w, n, alpha, p, TOL)?.value;
                    let expect = r_alpha_gamma_closed(n, alpha, p)?;
                    worst = worst.max(rel(got, expect));
                }
            }
        }
        // hand-derived anchors
        let diag = KernelPoint::diagonal(1.0)?;
        worst = worst.max(rel(
            r_alpha_radial(&w, 4, 0.0, &diag, TOL)?.value,
            3.0 / (8.0 * PI * PI),
        ));
        worst = worst.max(rel(r_alpha_radial(&w, 3, 0.0, &diag, TOL)?.value, 1.0 / (4.0 * PI)));
        Ok(worst)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, 1e-8),
        Err(e) => failed_check(id, desc, e),
    }
}

/// n=2 closed chain: diagonal kernel equals (α+1)/(2π) at b = 1.
pub fn check_n2_closed_chain() -> Check {
    let id = "n2-diagonal-closed-chain";
    let desc = "gamma diagonal at b=1 vs (alpha+1)/(2 pi), max relative error";
    let run = || -> crate::Result<f64> {
        let w = make_builtin_weight("gamma")?;
        let mut worst = 0.0_f64;
        for alpha in [0.0, 1.0, 5.0, 20.0, 100.0] {
            let got = r_alpha_diagonal(&w, 2, alpha, 1.0, TOL)?.value;
            worst = worst.max(rel(got, (alpha + 1.0) / (2.0 * PI)));
        }
        Ok(worst)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, 1e-8),
        Err(e) => failed_check(id, desc, e),
    }
}

/// Holomorphic slice k0 against its gamma closed form.
pub fn check_k0_closed_form() -> Check {
    let id = "k0-vs-closed-form";
    let desc = "K0 quadrature vs gamma closed form, max relative error";
    let run = || -> crate::Result<f64> {
        let w = make_builtin_weight("gamma")?;
        let (y, b) = (0.8, 1.1);
        let mut worst = 0.0_f64;
        for n in [2u32, 3, 4] {
            for alpha in [0.0, 1.0, 5.0, 20.0] {
                for x in [0.0, 0.5, 1.0] {
                    let got = k0_alpha(&w, n, alpha, x, y, b, TOL)?.value;
                    let expect = k0_gamma_closed(n, alpha, x, y, b)?;
                    worst = worst.max((got - expect).norm() / expect.norm());
                }
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, 1e-8),
        Err(e) => failed_check(id, desc, e),
    }
}

/// Diagonal factorization: R_diag = 2^{4-2n} ω_{n-1} K⁰(ib; ib) through
/// independent code paths.
pub fn check_corollary_diagonal(gamma_only: bool) -> Check {
    let id = "corollary-diagonal-factorization";
    let desc = "R_diag vs 2^{4-2n} w_{n-1} K0(ib;ib), max relative error";
    let run = || -> crate::Result<f64> {
        let weights: &[&str] = if gamma_only { &["gamma"] } else { &["gamma", "expcap", "logplus"] };
        let mut worst = 0.0_f64;
        for name in weights {
            let w = make_builtin_weight(name)?;
            for n in [2u32, 3, 4] {
                for alpha in [0.0, 5.0, 50.0] {
                    for b in [0.6, 1.0] {
                        let diag = r_alpha_diagonal(&w, n, alpha, b, TOL)?.value;
                        let k0 = k0_alpha(&w, n, alpha, 0.0, b, b, TOL)?.value.re;
                        let chain = ((4.0 - 2.0 * n as f64) * 2.0_f64.ln()).exp()
                            * sphere_area(n - 1)?
                            * k0;
                        worst = worst.max(rel(diag, chain));
                    }
                }
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, 1e-9),
        Err(e) => failed_check(id, desc, e),
    }
}

/// Cross-route equivalence on non-gamma weights at seeded random points.
pub fn check_cross_route() -> Check {
    let id = "cross-route-equivalence";
    let desc = "radial vs holomorphic-reduction (expcap, logplus), max relative error; \
                also enforces |diff| <= 3(err_est sum)";
    let run = || -> crate::Result<f64> {
        let mut rng = SplitMix(0x5eed_2024);
        let mut worst = 0.0_f64;
        for name in ["expcap", "logplus"] {
            let w = make_builtin_weight(name)?;
            for n in [2u32, 3, 4] {
                for alpha in [0.0, 5.0, 20.0] {
                    for _ in 0..5 {
                        let p = KernelPoint::new(
                            rng.range(0.0, 2.0),
                            rng.range(0.5, 2.0),
                            rng.range(0.5, 2.0),
                        )?;
                        let a = r_alpha_radial(&w, n, alpha, &p, TOL)?;
                        let h = r_alpha_via_holomorphic(&w, n, alpha, &p, TOL)?;
                        let denom = a.value.abs().max(h.value.abs()).max(1e-300);
                        worst = worst.max((a.value - h.value).abs() / denom);
                        let budget = 3.0 * (a.err_est + h.err_est) + 1e-13 * denom;
                        if (a.value - h.value).abs() > budget {
                            return Ok(f64::INFINITY);
                        }
                    }
                }
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, 1e-7),
        Err(e) => failed_check(id, desc, e),
    }
}

const THEOREM3_ALPHAS: [f64; 5] = [25.0, 50.0, 100.0, 200.0, 400.0];

fn theorem3_samples(w: &Weight, n: u32, b: f64) -> crate::Result<Vec<(f64, f64)>> {
    THEOREM3_ALPHAS
        .iter()
        .map(|&alpha| {
            let (v, _, _) = r_alpha_diagonal_log(w, n, alpha, b, TOL)?;
            let scaled =
                (v.log_mag + alpha * w.log_rho(b)? + (1.0 - n as f64) * alpha.ln()).exp();
            Ok((alpha, scaled))
        })
        .collect()
}

/// Diagonal-limit reproduction: fitted c0 of α^{1-n} ρ(b)^α R_diag equals
/// C_n Q(b) within 1% on every built-in, n in {2,3}, b in {0.5,1,2}.
pub fn check_theorem3_c0() -> Check {
    let id = "diag-limit-coefficient";
    let desc = "fitted c0 of scaled diagonal kernel vs C_n Q(b), max relative deviation";
    let run = || -> crate::Result<f64> {
        let mut worst = 0.0_f64;
        for name in ["gamma", "expcap", "logplus"] {
            let w = make_builtin_weight(name)?;
            for n in [2u32, 3] {
                for b in [0.5, 1.0, 2.0] {
                    let samples = theorem3_samples(&w, n, b)?;
                    let fit = richardson_fit(&samples, 2)?;
                    let expect = diag_constant(n)? * q_factor(&w, n, b)?;
                    worst = worst.max(rel(fit.coefficients[0], expect));
                }
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, 0.01),
        Err(e) => failed_check(id, desc, e),
    }
}

/// Remainder order of the diagonal-limit ratio: -1 within +-0.2.
pub fn check_theorem3_order() -> Check {
    let id = "diag-limit-remainder-order";
    let desc = "fitted order of |R_diag/leading - 1|, max |order + 1|";
    let run = || -> crate::Result<f64> {
        let mut worst = 0.0_f64;
        for name in ["gamma", "expcap", "logplus"] {
            let w = make_builtin_weight(name)?;
            for n in [2u32, 3] {
                for b in [0.5, 1.0, 2.0] {
                    let samples = theorem3_samples(&w, n, b)?;
                    let expect = diag_constant(n)? * q_factor(&w, n, b)?;
                    let errs: Vec<(f64, f64)> =
                        samples.iter().map(|&(a, s)| (a, (s / expect - 1.0).abs())).collect();
                    let order = convergence_order(&errs)?;
                    worst = worst.max((order + 1.0).abs());
                }
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, 0.2),
        Err(e) => failed_check(id, desc, e),
    }
}

/// Off-diagonal leading term: exact/leading ratio for the gamma weight
/// tends to 1 with order -1 (checked for d in {0.25, 0.5} plus d = 1 when
/// `wide` is set, n in {2, 4}).
pub fn check_offdiag_order(wide: bool) -> Check {
    let id = if wide { "offdiag-leading-order-wide" } else { "offdiag-leading-order" };
    let desc = "fitted order of |exact/leading - 1| off the diagonal (gamma), max |order + 1|";
    let run = || -> crate::Result<f64> {
        let w = make_builtin_weight("gamma")?;
        let ds: &[f64] = if wide { &[1.0] } else { &[0.25, 0.5] };
        let mut worst = 0.0_f64;
        for n in [2u32, 4] {
            for &d in ds {
                let p = KernelPoint::new(d, 1.0, 1.0)?;
                let mut errs = Vec::new();
                for &alpha in &THEOREM3_ALPHAS {
                    let exact = if n == 2 {
                        r_alpha_gamma_closed_n2(alpha, &p)?
                    } else {
                        r_alpha_gamma_closed(n, alpha, &p)?
                    };
                    let lead = offdiag_leading(&w, n, alpha, &p, 256)?;
                    errs.push((alpha, (exact / lead - 1.0).abs()));
                }
                let order = convergence_order(&errs)?;
                worst = worst.max((order + 1.0).abs());
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, 0.2),
        Err(e) => failed_check(id, desc, e),
    }
}

/// Reproducing property: B_alpha(1) = 1 across the full grid.
pub fn check_berezin_normalization() -> Check {
    let id = "berezin-normalization";
    let desc = "B_alpha(1) vs 1 across weights, n in {2,3,4}, alpha in {0,5,50,200}, \
                b in {0.5,1,2}; max |B-1|";
    let run = || -> crate::Result<f64> {
        let one = VerticalSymbol::by_name("one")?;
        let cells: Vec<(&str, u32, f64, f64)> = ["gamma", "expcap", "logplus"]
            .iter()
            .flat_map(|&w| {
                [2u32, 3, 4].iter().flat_map(move |&n| {
                    [0.0, 5.0, 50.0, 200.0].iter().flat_map(move |&a| {
                        [0.5, 1.0, 2.0].iter().map(move |&b| (w, n, a, b))
                    })
                })
            })
            .collect();
        let worst = cells
            .par_iter()
            .map(|&(name, n, alpha, b)| {
                let w = make_builtin_weight(name)?;
                let v = berezin_vertical(&w, n, alpha, &one, b, 1e-9)?;
                Ok((v.value - 1.0).abs())
            })
            .try_reduce(|| 0.0, |a: f64, b: f64| Ok(a.max(b)))?;
        Ok(worst)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, 1e-8),
        Err(e) => failed_check(id, desc, e),
    }
}

fn q_grid() -> Vec<(&'static str, &'static str, u32, f64)> {
    let mut cells = Vec::new();
    for w in ["gamma", "expcap", "logplus"] {
        for g in ["exp", "recip"] {
            for n in [2u32, 3] {
                for b in [1.0, 2.0] {
                    cells.push((w, g, n, b));
                }
            }
        }
    }
    cells
}

/// First-order expansion: 3-point Richardson of alpha (B_alpha g - g)
/// against Q1 g within 2%.
pub fn check_berezin_first_order() -> Check {
    let id = "berezin-first-order";
    let desc = "Richardson estimate of alpha(B g - g) vs Q1 g, max relative deviation";
    let run = || -> crate::Result<f64> {
        let worst = q_grid()
            .par_iter()
            .map(|&(wname, gname, n, b)| {
                let w = make_builtin_weight(wname)?;
                let g = VerticalSymbol::by_name(gname)?;
                let gb = g.eval(b, 0)?;
                let mut v = [0.0; 3];
                for (i, &alpha) in [80.0, 160.0, 320.0].iter().enumerate() {
                    let bv = berezin_vertical(&w, n, alpha, &g, b, 1e-10)?;
                    v[i] = alpha * (bv.value - gb);
                }
                let est = richardson3_ratio2(v[0], v[1], v[2]);
                let q1 = q1_vertical(&w, n, &g, b)?;
                Ok(rel(est, q1))
            })
            .try_reduce(|| 0.0, |a: f64, b: f64| Ok(a.max(b)))?;
        Ok(worst)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, 0.02),
        Err(e) => failed_check(id, desc, e),
    }
}

/// For the gamma weight Q1 must coincide with the classical first-order
/// operator (2-n) y g' + y² g''.
pub fn check_q1_gamma_closed() -> Check {
    let id = "q1-gamma-first-operator";
    let desc = "Q1 (gamma) vs (2-n) b g' + b^2 g''; max relative deviation";
    let run = || -> crate::Result<f64> {
        let w = make_builtin_weight("gamma")?;
        let mut worst = 0.0_f64;
        for gname in ["exp", "recip", "ratio"] {
            let g = VerticalSymbol::by_name(gname)?;
            for n in [2u32, 3, 4, 6] {
                for b in [0.5, 1.0, 2.0] {
                    let got = q1_vertical(&w, n, &g, b)?;
                    let expect =
                        (2.0 - n as f64) * b * g.eval(b, 1)? + b * b * g.eval(b, 2)?;
                    worst = worst.max((got - expect).abs() / expect.abs().max(1e-12));
                }
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, 1e-12),
        Err(e) => failed_check(id, desc, e),
    }
}

const Q2_ALPHAS: [f64; 4] = [40.0, 80.0, 160.0, 320.0];

/// Second-order expansion: fitted alpha^{-2} coefficient against Q2 within
/// 5% over the first-order grid.
pub fn check_berezin_second_order() -> Check {
    let id = "berezin-second-order";
    let desc = "fitted alpha^{-2} coefficient of B g vs Q2 g, max relative deviation";
    let run = || -> crate::Result<f64> {
        let worst = q_grid()
            .par_iter()
            .map(|&(wname, gname, n, b)| {
                let w = make_builtin_weight(wname)?;
                let g = VerticalSymbol::by_name(gname)?;
                let gb = g.eval(b, 0)?;
                let q1 = q1_vertical(&w, n, &g, b)?;
                let samples: Vec<(f64, f64)> = Q2_ALPHAS
                    .iter()
                    .map(|&alpha| {
                        let bv = berezin_vertical(&w, n, alpha, &g, b, 1e-11)?;
                        Ok((alpha, alpha * alpha * (bv.value - gb - q1 / alpha)))
                    })
                    .collect::<crate::Result<_>>()?;
                let fit = richardson_fit(&samples, 1)?;
                let q2 = q2_vertical(&w, n, &g, b, 1e-3 * b.max(1.0))?;
                Ok(rel(fit.coefficients[0], q2))
            })
            .try_reduce(|| 0.0, |a: f64, b: f64| Ok(a.max(b)))?;
        Ok(worst)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, 0.05),
        Err(e) => failed_check(id, desc, e),
    }
}

/// Residual after Q0 + Q1/alpha + Q2/alpha^2 decays with order <= -2.5.
pub fn check_berezin_residual_order() -> Check {
    let id = "berezin-residual-order";
    let desc = "fitted order of |B g - g - Q1/a - Q2/a^2|; reported worst (largest) order";
    let run = || -> crate::Result<f64> {
        let worst = q_grid()
            .par_iter()
            .map(|&(wname, gname, n, b)| {
                let w = make_builtin_weight(wname)?;
                let g = VerticalSymbol::by_name(gname)?;
                let gb = g.eval(b, 0)?;
                let q1 = q1_vertical(&w, n, &g, b)?;
                let q2 = q2_vertical(&w, n, &g, b, 1e-3 * b.max(1.0))?;
                let errs: Vec<(f64, f64)> = Q2_ALPHAS
                    .iter()
                    .map(|&alpha| {
                        let bv = berezin_vertical(&w, n, alpha, &g, b, 1e-11)?;
                        let resid =
                            (bv.value - gb - q1 / alpha - q2 / (alpha * alpha)).abs();
                        Ok((alpha, resid.max(1e-300)))
                    })
                    .collect::<crate::Result<_>>()?;
                convergence_order(&errs)
            })
            .try_reduce(|| f64::NEG_INFINITY, |a: f64, b: f64| Ok(a.max(b)))?;
        Ok(worst)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, -2.5),
        Err(e) => failed_check(id, desc, e),
    }
}

/// Full-coordinate finite-difference oracle for the metric Laplacian on
/// the (u, s) class, at seeded random points and general complex z.
pub fn check_tilde_laplace_oracle() -> Check {
    let id = "metric-laplacian-oracle";
    let desc = "(u,s) Laplacian vs full-coordinate finite differences, max relative deviation";
    struct Smooth;
    impl UsFunction for Smooth {
        fn partial(&self, u: f64, s: f64, du: usize, ds: usize) -> f64 {
            // F = sin(1.1 u + 0.4 s) + u s^2 / 4
            let trig = match (du + ds) % 4 {
                0 => (1.1 * u + 0.4 * s).sin(),
                1 => (1.1 * u + 0.4 * s).cos(),
                2 => -(1.1 * u + 0.4 * s).sin(),
                _ => -(1.1 * u + 0.4 * s).cos(),
            } * 1.1_f64.powi(du as i32)
                * 0.4_f64.powi(ds as i32);
            let poly = match (du, ds) {
                (0, 0) => u * s * s / 4.0,
                (1, 0) => s * s / 4.0,
                (0, 1) => u * s / 2.0,
                (0, 2) => u / 2.0,
                (1, 1) => s / 2.0,
                (1, 2) => 0.5,
                _ => 0.0,
            };
            trig + poly
        }
    }
    let run = || -> crate::Result<f64> {
        let w = make_builtin_weight("logplus")?;
        let f = Smooth;
        let mut rng = SplitMix(0xfd_1234);
        let mut worst = 0.0_f64;
        for n in [3u32, 4] {
            for _ in 0..10 {
                let u = rng.range(0.4, 2.0);
                let s = rng.range(0.05, 0.9);
                let got = tilde_laplace_us(&w, n, &f, u, s)?;
                let oracle = full_coordinate_laplacian(&w, n, &f, u, s, &mut rng)?;
                worst = worst.max((got - oracle).abs() / oracle.abs().max(1e-8));
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, 1e-5),
        Err(e) => failed_check(id, desc, e),
    }
}

/// At s = 0 the Laplacian on vertical symbols reproduces Q1.
pub fn check_tilde_laplace_q1_origin() -> Check {
    let id = "metric-laplacian-q1-at-origin";
    let desc = "(u,s) Laplacian of vertical symbols at s=0 vs Q1, max relative deviation";
    let run = || -> crate::Result<f64> {
        let mut worst = 0.0_f64;
        for wname in ["gamma", "expcap", "logplus"] {
            let w = make_builtin_weight(wname)?;
            let g = VerticalSymbol::by_name("exp")?;
            for n in [3u32, 4] {
                for b in [0.7, 1.3] {
                    let a = tilde_laplace_us(&w, n, &VerticalUs(&g), b, 0.0)?;
                    let q1 = q1_vertical(&w, n, &g, b)?;
                    worst = worst.max((a - q1).abs() / q1.abs().max(1e-12));
                }
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, 1e-9),
        Err(e) => failed_check(id, desc, e),
    }
}

/// Generic-z finite-difference evaluation of Σ g^{j̄k} ∂²h/∂z̄_j∂z_k for
/// h(z, w) = F(Im w − |z|², |z|²), with dense Hermitian metric inversion.
fn full_coordinate_laplacian(
    w: &Weight,
    n: u32,
    f: &dyn UsFunction,
    u: f64,
    s: f64,
    rng: &mut SplitMix,
) -> crate::Result<f64> {
    let m = (n - 1) as usize;
    // random z direction with |z|^2 = s
    let mut z: Vec<Complex64> =
        (0..m - 1).map(|_| Complex64::new(rng.range(-1.0, 1.0), rng.range(-1.0, 1.0))).collect();
    let norm: f64 = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in z.iter_mut() {
        *c *= s.sqrt() / norm;
    }
    let wc = Complex64::new(rng.range(-1.0, 1.0), u + s);
    let p1 = phi(w, u, 1)?;
    let p2 = phi(w, u, 2)?;

    // metric at general z
    let mut a = DMatrix::<Complex64>::zeros(m, m);
    for j in 0..m - 1 {
        for k in 0..m - 1 {
            a[(j, k)] = Complex64::new(p2, 0.0) * z[j].conj() * z[k];
            if j == k {
                a[(j, k)] += Complex64::new(-p1, 0.0);
            }
        }
    }
    for j in 0..m - 1 {
        a[(j, m - 1)] = Complex64::new(0.0, -0.5 * p2) * z[j].conj();
        a[(m - 1, j)] = a[(j, m - 1)].conj();
    }
    a[(m - 1, m - 1)] = Complex64::new(p2 / 4.0, 0.0);

    // h evaluated from real coordinates
    let h_eval = |coords: &[Complex64]| -> f64 {
        let s_val: f64 = coords[..m - 1].iter().map(|c| c.norm_sqr()).sum();
        let u_val = coords[m - 1].im - s_val;
        f.partial(u_val, s_val, 0, 0)
    };
    let mut base: Vec<Complex64> = z.clone();
    base.push(wc);
    let h = 1e-4;
    let perturb = |pert: &[(usize, f64, f64)]| -> f64 {
        let mut c = base.clone();
        for &(idx, dre, dim) in pert {
            c[idx] += Complex64::new(dre, dim);
        }
        h_eval(&c)
    };
    let mut hmat = DMatrix::<Complex64>::zeros(m, m);
    for j in 0..m {
        for k in 0..m {
            if j == k {
                let hxx = (perturb(&[(j, h, 0.0)]) - 2.0 * perturb(&[]) + perturb(&[(j, -h, 0.0)]))
                    / (h * h);
                let hyy = (perturb(&[(j, 0.0, h)]) - 2.0 * perturb(&[]) + perturb(&[(j, 0.0, -h)]))
                    / (h * h);
                hmat[(j, k)] = Complex64::new(0.25 * (hxx + hyy), 0.0);
            } else {
                let mixed = |are: f64, aim: f64, bre: f64, bim: f64| -> f64 {
                    (perturb(&[(j, are, aim), (k, bre, bim)])
                        - perturb(&[(j, are, aim), (k, -bre, -bim)])
                        - perturb(&[(j, -are, -aim), (k, bre, bim)])
                        + perturb(&[(j, -are, -aim), (k, -bre, -bim)]))
                        / (4.0 * h * h)
                };
                let hxx = mixed(h, 0.0, h, 0.0);
                let hyy = mixed(0.0, h, 0.0, h);
                let hxy = mixed(h, 0.0, 0.0, h);
                let hyx = mixed(0.0, h, h, 0.0);
                // H[j][k] = d^2 h / dz_j dz̄_k
                hmat[(j, k)] = Complex64::new(0.25 * (hxx + hyy), 0.25 * (hxy - hyx));
            }
        }
    }
    let solved = a
        .lu()
        .solve(&hmat)
        .ok_or_else(|| crate::error::Error::Domain("singular metric in oracle".into()))?;
    Ok(solved.trace().re)
}

/// The cosine identity for the sphere-integral function.
pub fn check_hyp0f1_identity() -> Check {
    let id = "hyp0f1-cosine-identity";
    let desc = "|0F1(1/2; -z) - cos(2 sqrt z)| on 100 points of [0, 100], max absolute error";
    let run = || -> crate::Result<f64> {
        let mut worst = 0.0_f64;
        for i in 0..100 {
            let z = 100.0 * (i as f64 + 0.5) / 100.0;
            let got = hyp0f1(0.5, -z)?;
            worst = worst.max((got - (2.0 * z.sqrt()).cos()).abs());
        }
        Ok(worst)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, 1e-11),
        Err(e) => failed_check(id, desc, e),
    }
}

// ---------------------------------------------------------------------------
// Module-invariant checks beyond the acceptance criteria
// ---------------------------------------------------------------------------

/// Kernel symmetry under swapping the two vertical coordinates.
pub fn check_kernel_symmetry() -> Check {
    let id = "kernel-vertical-symmetry";
    let desc = "R(d, y, b) vs R(d, b, y), max relative deviation";
    let run = || -> crate::Result<f64> {
        let mut worst = 0.0_f64;
        for name in ["gamma", "expcap", "logplus"] {
            let w = make_builtin_weight(name)?;
            for n in [2u32, 4] {
                let p1 = KernelPoint::new(0.4, 0.6, 1.5)?;
                let p2 = KernelPoint::new(0.4, 1.5, 0.6)?;
                let a = r_alpha_radial(&w, n, 7.0, &p1, TOL)?.value;
                let b = r_alpha_radial(&w, n, 7.0, &p2, TOL)?.value;
                worst = worst.max(rel(a, b));
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, 1e-10),
        Err(e) => failed_check(id, desc, e),
    }
}

/// Positivity of the diagonal kernel (reported as the minimum value; the
/// tolerance field holds the lower bound 0).
pub fn check_diagonal_positivity() -> Check {
    let id = "diagonal-positivity";
    let desc = "minimum diagonal kernel value across the test grid (must be positive)";
    let run = || -> crate::Result<f64> {
        let mut min = f64::INFINITY;
        for name in ["gamma", "expcap", "logplus"] {
            let w = make_builtin_weight(name)?;
            for n in [2u32, 3, 4] {
                for alpha in [0.0, 5.0, 50.0] {
                    for b in [0.5, 1.0, 2.0] {
                        min = min.min(r_alpha_diagonal(&w, n, alpha, b, 1e-9)?.value);
                    }
                }
            }
        }
        Ok(min)
    };
    match run() {
        Ok(v) => Check {
            id,
            desc: desc.to_string(),
            value: v,
            tol: 0.0,
            pass: v.is_finite() && v > 0.0,
        },
        Err(e) => failed_check(id, desc, e),
    }
}

/// Fourier-slice consistency: ∫ K⁰(x+iy; ib) e^{-i ξ x} dx against
/// (2ξ/π)^{n-2} e^{-(b+y)ξ}/ρ̃_α(ξ) for n = 2, gamma weight.
pub fn check_fourier_slice() -> Check {
    let id = "fourier-slice-consistency";
    let desc = "numeric Fourier inversion of K0 vs e^{-(b+y)xi}/rho~(xi), relative error";
    let run = || -> crate::Result<f64> {
        let w = make_builtin_weight("gamma")?;
        let (n, alpha, y, b, xi) = (2u32, 6.0, 1.0, 1.0, 1.0);
        // composite Gauss-Legendre over [-30, 30]; K0 decays like |x|^{-8}
        let rule = jacobi_rule(0.0, 16)?;
        let mut total = Complex64::new(0.0, 0.0);
        let panels = 60;
        let (lo, hi) = (-30.0, 30.0);
        let width = (hi - lo) / panels as f64;
        for i in 0..panels {
            let a0 = lo + i as f64 * width;
            for &(t, wq) in rule.iter() {
                let x = a0 + 0.5 * width * (t + 1.0);
                let k0 = k0_alpha(&w, n, alpha, x, y, b, 1e-9)?.value;
                let phase = Complex64::new(0.0, -xi * x).exp();
                total += k0 * phase * (wq * 0.5 * width);
            }
        }
        let rt = RhoTilde::new(w, alpha, 1e-12);
        let expect = (-(b + y) * xi - rt.log_at(xi)?).exp();
        Ok((total.re - expect).abs() / expect + total.im.abs() / expect)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, 1e-5),
        Err(e) => failed_check(id, desc, e),
    }
}

/// Linearity of the Berezin transform.
pub fn check_berezin_linearity() -> Check {
    let id = "berezin-linearity";
    let desc = "B(c1 g1 + c2 g2) vs c1 B g1 + c2 B g2, max absolute deviation";
    let run = || -> crate::Result<f64> {
        let w = make_builtin_weight("expcap")?;
        let g1 = VerticalSymbol::by_name("exp")?;
        let g2 = VerticalSymbol::by_name("recip")?;
        let combo = VerticalSymbol::linear_combination(2.0, &g1, -0.5, &g2);
        let tol = 1e-10;
        let mut worst = 0.0_f64;
        for (n, alpha, b) in [(2u32, 7.0, 1.2), (3u32, 20.0, 0.8)] {
            let b1 = berezin_vertical(&w, n, alpha, &g1, b, tol)?.value;
            let b2 = berezin_vertical(&w, n, alpha, &g2, b, tol)?.value;
            let bc = berezin_vertical(&w, n, alpha, &combo, b, tol)?.value;
            worst = worst.max((bc - (2.0 * b1 - 0.5 * b2)).abs());
        }
        Ok(worst)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, 1e-9),
        Err(e) => failed_check(id, desc, e),
    }
}

/// Positivity: non-negative symbols have non-negative transforms.
pub fn check_berezin_positivity() -> Check {
    let id = "berezin-positivity";
    let desc = "minimum B_alpha g over non-negative symbols (must be non-negative)";
    let run = || -> crate::Result<f64> {
        let mut min = f64::INFINITY;
        for name in ["gamma", "logplus"] {
            let w = make_builtin_weight(name)?;
            for gname in ["exp", "ratio"] {
                let g = VerticalSymbol::by_name(gname)?;
                for (n, alpha) in [(2u32, 5.0), (3u32, 40.0)] {
                    min = min.min(berezin_vertical(&w, n, alpha, &g, 1.0, 1e-9)?.value);
                }
            }
        }
        Ok(min)
    };
    match run() {
        Ok(v) => Check {
            id,
            desc: desc.to_string(),
            value: v,
            tol: 0.0,
            pass: v.is_finite() && v >= 0.0,
        },
        Err(e) => failed_check(id, desc, e),
    }
}

/// Metric determinant identity: exp(ψ) = (φ''/4)(−φ')^{n−2}.
pub fn check_metric_det_identity() -> Check {
    let id = "metric-determinant-identity";
    let desc = "exp(psi(b)) vs (phi''/4)(-phi')^{n-2}, max relative deviation";
    let run = || -> crate::Result<f64> {
        let mut worst = 0.0_f64;
        for name in ["gamma", "expcap", "logplus"] {
            let w = make_builtin_weight(name)?;
            for n in [2u32, 3, 4, 6] {
                for b in [0.5, 1.0, 2.0] {
                    let lhs = psi(&w, n, b, 0)?.exp();
                    let p1 = phi(&w, b, 1)?;
                    let p2 = phi(&w, b, 2)?;
                    worst = worst.max(rel(lhs, p2 / 4.0 * (-p1).powi(n as i32 - 2)));
                }
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, 1e-12),
        Err(e) => failed_check(id, desc, e),
    }
}

/// Constant consistency: the off-diagonal leading term at d = 0 must equal
/// the diagonal prediction (exercises the I_t constant against C_n).
pub fn check_leading_constant_consistency() -> Check {
    let id = "leading-constant-consistency";
    let desc = "offdiag_leading at d=0 vs diag_leading, max relative deviation";
    let run = || -> crate::Result<f64> {
        let mut worst = 0.0_f64;
        for name in ["gamma", "expcap", "logplus"] {
            let w = make_builtin_weight(name)?;
            for n in [2u32, 3, 4, 5] {
                for b in [0.5, 1.0, 2.0] {
                    let p = KernelPoint::diagonal(b)?;
                    let a = offdiag_leading(&w, n, 30.0, &p, 48)?;
                    let d = diag_leading(&w, n, 30.0, b)?;
                    worst = worst.max(rel(a, d));
                }
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, 1e-10),
        Err(e) => failed_check(id, desc, e),
    }
}

/// Diagonal-ratio order on the wider n grid (adds n = 4 to the

/// acceptance grid).
pub fn check_diag_order_n4() -> Check {
    let id = "diag-limit-order-n4";
    let desc = "fitted order of |R_diag/leading - 1| at n=4, max |order + 1|";
    let run = || -> crate::Result<f64> {
        let mut worst = 0.0_f64;
        for name in ["gamma", "expcap", "logplus"] {
            let w = make_builtin_weight(name)?;
            for b in [0.5, 1.0, 2.0] {
                let mut errs = Vec::new();
                for &alpha in &THEOREM3_ALPHAS {
                    let (v, _, _) = r_alpha_diagonal_log(&w, 4, alpha, b, TOL)?;
                    let lead = crate::asymptotics::diag_leading_log(&w, 4, alpha, b)?;
                    errs.push((alpha, ((v.log_mag - lead).exp() - 1.0).abs()));
                }
                worst = worst.max((convergence_order(&errs)? + 1.0).abs());
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(v) => worst_check(id, desc, v, 0.2),
        Err(e) => failed_check(id, desc, e),
    }
}

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

type CheckFn = fn() -> Check;

fn quick_checks() -> Vec<CheckFn> {
    vec![
        check_gamma_kernel_exactness,
        check_n2_closed_chain,
        check_k0_closed_form,
        || check_corollary_diagonal(true),
        check_hyp0f1_identity,
    ]
}

fn full_checks() -> Vec<CheckFn> {
    vec![
        check_gamma_kernel_exactness,
        check_n2_closed_chain,
        check_k0_closed_form,
        || check_corollary_diagonal(false),
        check_cross_route,
        check_theorem3_c0,
        check_theorem3_order,
        || check_offdiag_order(false),
        || check_offdiag_order(true),
        check_berezin_normalization,
        check_berezin_first_order,
        check_q1_gamma_closed,
        check_berezin_second_order,
        check_berezin_residual_order,
        check_tilde_laplace_oracle,
        check_tilde_laplace_q1_origin,
        check_hyp0f1_identity,
        check_kernel_symmetry,
        check_diagonal_positivity,
        check_fourier_slice,
        check_berezin_linearity,
        check_berezin_positivity,
        check_metric_det_identity,
        check_leading_constant_consistency,
        check_diag_order_n4,
    ]
}

/// Run the verification suite at the requested depth. Check order in the
/// report is fixed regardless of execution interleaving.
pub fn run_verify(level: Level) -> VerifyReport {
    let fns = match level {
        Level::Quick => quick_checks(),
        Level::Full => full_checks(),
    };
    let checks: Vec<Check> = fns.par_iter().map(|f| f()).collect();
    let verdict = if checks.iter().all(|c| c.pass) { "pass" } else { "fail" };
    VerifyReport { checks, verdict: verdict.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_ids_are_unique_and_stable() {
        let report_fns = full_checks();
        let checks: Vec<Check> = vec![
            // cheap subset only; ids of the heavy ones are covered by the
            // acceptance suite
            check_q1_gamma_closed(),
            check_metric_det_identity(),
            check_hyp0f1_identity(),
        ];
        for c in &checks {
            assert!(c.pass, "{}: value {} vs tol {}", c.id, c.value, c.tol);
        }
        assert_eq!(report_fns.len(), 25);
    }

    #[test]
    fn quick_report_shape() {
        let fns = quick_checks();
        assert_eq!(fns.len(), 5);
    }
}
