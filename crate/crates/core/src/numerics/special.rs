//! Special functions: log-Gamma, unit-sphere areas, and the confluent
//! limit function ₀F₁ on the negative real axis.

use crate::error::{domain, Result};
use std::f64::consts::PI;

/// Lanczos coefficients, g = 7, 9 terms. Relative accuracy ~1e-15 on x >= 0.5.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    // Shift small arguments up through the recurrence Γ(x) = Γ(x+1)/x.
    if x < 0.5 {
        return ln_gamma_unchecked(x + 1.0) - x.ln();
    }
    let z = x - 1.0;
    let mut series = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

/// Surface area of the unit sphere S^{n-1} in R^n: ω_n = 2 π^{n/2} / Γ(n/2).
pub fn sphere_area(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(domain("sphere_area requires n >= 1"));
    }
    let half = n as f64 / 2.0;
    Ok((2.0_f64.ln() + half * PI.ln() - ln_gamma_unchecked(half)).exp())
}

// ---------------------------------------------------------------------------
// Double-double arithmetic (Dekker/Knuth), just enough for the ₀F₁ series.
// The series for large negative argument cancels catastrophically in f64:
// the partial sums reach e^{2√|z|} while the result stays O(1).
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = f64::mul_add(a, b, -p);
    (p, err)
}

fn dd_add(a: Dd, b: Dd) -> Dd {
    let (s, e) = two_sum(a.hi, b.hi);
    let e = e + a.lo + b.lo;
    let (hi, lo) = two_sum(s, e);
    Dd { hi, lo }
}

fn dd_mul_f64(a: Dd, b: f64) -> Dd {
    let (p, e) = two_prod(a.hi, b);
    let e = e + a.lo * b;
    let (hi, lo) = two_sum(p, e);
    Dd { hi, lo }
}

fn dd_div_f64(a: Dd, b: f64) -> Dd {
    let q1 = a.hi / b;
    let (p, e) = two_prod(q1, b);
    let r = ((a.hi - p) - e) + a.lo;
    let q2 = r / b;
    let (hi, lo) = two_sum(q1, q2);
    Dd { hi, lo }
}

// ---------------------------------------------------------------------------
// ₀F₁
// ---------------------------------------------------------------------------

/// Below this |z| the double-double power series keeps the cancellation error
/// under ~1e-13 of the result envelope; above it the Bessel route takes over.
const SERIES_LIMIT: f64 = 400.0;

/// The confluent limit function ₀F₁(b; z) for b > 0 and z <= 0.
///
/// Power series in double-double arithmetic for |z| <= 400; for larger |z|
/// the Bessel relation ₀F₁(ν+1; −x²/4) = Γ(ν+1) (x/2)^{−ν} J_ν(x) with the
/// Hankel large-argument expansion of J_ν.
pub fn hyp0f1(b: f64, z: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(domain(format!("hyp0f1 requires b > 0, got {b}")));
    }
    if z > 0.0 {
        return Err(domain(format!("hyp0f1 here only supports z <= 0, got {z}")));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if -z <= SERIES_LIMIT {
        Ok(hyp0f1_series_dd(b, z))
    } else {
        Ok(hyp0f1_bessel(b, z))
    }
}

fn hyp0f1_series_dd(b: f64, z: f64) -> f64 {
    let mut term = Dd::from(1.0);
    let mut sum = Dd::from(1.0);
    for k in 0..500u32 {
        let kf = k as f64;
        term = dd_mul_f64(term, z);
        term = dd_div_f64(term, (b + kf) * (kf + 1.0));
        sum = dd_add(sum, term);
        if term.hi.abs() < 1e-40 * sum.hi.abs().max(1e-30) {
            break;
        }
    }
    sum.value()
}

fn hyp0f1_bessel(b: f64, z: f64) -> f64 {
    let x = 2.0 * (-z).sqrt();
    if !x.is_finite() {
        return 0.0;
    }
    let nu = b - 1.0;
    // J_nu(x) ~ sqrt(2/(pi x)) [P cos(chi) - Q sin(chi)], chi = x - (nu/2 + 1/4) pi
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0; // a_k
    let mut prev = f64::INFINITY;
    for k in 1..=30u32 {
        let kf = k as f64;
        a *= (mu - (2.0 * kf - 1.0) * (2.0 * kf - 1.0)) / (8.0 * kf);
        let t = a / x.powi(k as i32);
        if t.abs() >= prev {
            break;
        }
        prev = t.abs();
        match k % 4 {
            1 => q += t,
            2 => p -= t,
            3 => q -= t,
            _ => p += t,
        }
        if t.abs() < 1e-18 {
            break;
        }
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    let osc = p * chi.cos() - q * chi.sin();
    // result = Γ(b) (x/2)^{1-b} sqrt(2/(pi x)) * osc, assembled in logs
    let log_amp =
        ln_gamma_unchecked(b) + (1.0 - b) * (0.5 * x).ln() + 0.5 * (2.0 / (PI * x)).ln();
    log_amp.exp() * osc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn ln_gamma_known_values() {
        assert!(ln_gamma(1.0).unwrap().abs() < 5e-15);
        assert!(rel(ln_gamma(0.5).unwrap(), PI.sqrt().ln()) < 1e-13);
        assert!(rel(ln_gamma(11.0).unwrap(), 3_628_800.0_f64.ln()) < 1e-13);
        assert!(rel(ln_gamma(2.0).unwrap(), 0.0_f64) < 1e-13 || ln_gamma(2.0).unwrap().abs() < 1e-14);
        // Γ(100.5), reference value from extended-precision computation
        assert!(rel(ln_gamma(100.5).unwrap(), 361.435540467777622) < 1e-13);
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-1.0).is_err());
    }

    #[test]
    fn sphere_areas() {
        assert!(rel(sphere_area(2).unwrap(), 2.0 * PI) < 1e-14);
        assert!(rel(sphere_area(3).unwrap(), 4.0 * PI) < 1e-14);
        assert!(rel(sphere_area(1).unwrap(), 2.0) < 1e-14);
        assert!(rel(sphere_area(4).unwrap(), 2.0 * PI * PI) < 1e-14);
        assert!(sphere_area(0).is_err());
    }

    #[test]
    fn hyp0f1_at_zero_is_one() {
        for b in [0.5, 1.0, 1.5, 2.0, 3.5] {
            assert_eq!(hyp0f1(b, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn hyp0f1_cosine_identity_series_branch() {
        // 0F1(1/2; -z) = cos(2 sqrt(z))
        let z = PI * PI / 4.0;
        assert!((hyp0f1(0.5, -z).unwrap() - (-1.0)).abs() < 1e-12);
        for i in 0..=100 {
            let z = i as f64;
            let expect = (2.0 * z.sqrt()).cos();
            assert!(
                (hyp0f1(0.5, -z).unwrap() - expect).abs() <= 1e-11,
                "z={z}: {} vs {}",
                hyp0f1(0.5, -z).unwrap(),
                expect
            );
        }
    }

    #[test]
    fn hyp0f1_sine_value() {
        // 0F1(3/2; -1) = sin(2)/2; oracle: direct extended-precision series
        let expect = 2.0_f64.sin() / 2.0;
        assert!(rel(hyp0f1(1.5, -1.0).unwrap(), expect) < 1e-13);
    }

    #[test]
    fn hyp0f1_bessel_branch_matches_cos() {
        // branch seam and beyond, using the half-integer closed form
        for z in [401.0f64, 500.0, 1000.0, 1e5, 1e6] {
            let expect = (2.0 * z.sqrt()).cos();
            let got = hyp0f1(0.5, -z).unwrap();
            assert!((got - expect).abs() < 1e-10, "z={z}: {got} vs {expect}");
        }
        // 0F1(3/2; -z) = sin(2 sqrt z)/(2 sqrt z)
        for z in [450.0f64, 2500.0, 1e5] {
            let x = 2.0 * z.sqrt();
            let expect = x.sin() / x;
            let got = hyp0f1(1.5, -z).unwrap();
            assert!((got - expect).abs() < 1e-10, "z={z}: {got} vs {expect}");
        }
    }

    #[test]
    fn hyp0f1_both_branches_near_seam() {
        // reference values from extended-precision series evaluation
        let cases = [
            (1.0, 399.999999, 0.0073668968861531901), // series branch
            (1.0, 400.000001, 0.0073668842823213863), // bessel branch
            (1.0, 500.0, 0.11916388332742326),
            (2.0, 399.999999, 0.0063019158992168054),
            (2.0, 400.000001, 0.0063019159045416788),
            (2.0, 500.0, -0.00020247553649034876),
            (2.5, 399.999999, 0.001285435979961485),
            (2.5, 400.000001, 0.0012854361100294322),
            (2.5, 500.0, -0.0010860575990965549),
        ];
        for (b, z, expect) in cases {
            let got = hyp0f1(b, -z).unwrap();
            assert!((got - expect).abs() < 1e-12, "b={b} z={z}: {got} vs {expect}");
        }
    }

    #[test]
    fn hyp0f1_domain_errors() {
        assert!(hyp0f1(0.0, -1.0).is_err());
        assert!(hyp0f1(-1.0, -1.0).is_err());
        assert!(hyp0f1(1.0, 1.0).is_err());
    }
}
