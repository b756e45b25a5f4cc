//! Overflow-safe complex scalars stored as (log-magnitude, phase).
//!
//! Integrands of the form ρ(y)^α e^{−2ty} overflow `f64` long before the
//! integrals they feed become large, so every quadrature in this crate
//! carries its values in log-magnitude/phase form and only converts back
//! to ordinary floating point at the end.

use num_complex::Complex64;
use std::f64::consts::PI;

/// A complex number `exp(log_mag) * e^{i*phase}`.
///
/// `log_mag = -inf` encodes exact zero; `phase` is kept in `(-π, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex {
    pub log_mag: f64,
    pub phase: f64,
}

/// Wrap an angle into `(-π, π]`.
fn wrap_phase(p: f64) -> f64 {
    if p > -PI && p <= PI {
        return p;
    }
    let mut w = p.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    // rem_euclid returns values in [0, 2π); map the boundary case -π to π.
    if w <= -PI {
        w += 2.0 * PI;
    }
    w
}

impl LogComplex {
    pub fn zero() -> Self {
        LogComplex { log_mag: f64::NEG_INFINITY, phase: 0.0 }
    }

    pub fn one() -> Self {
        LogComplex { log_mag: 0.0, phase: 0.0 }
    }

    pub fn is_zero(&self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    /// Positive real number given directly by its natural log.
    pub fn from_log_mag(log_mag: f64) -> Self {
        LogComplex { log_mag, phase: 0.0 }
    }

    pub fn new(log_mag: f64, phase: f64) -> Self {
        LogComplex { log_mag, phase: wrap_phase(phase) }
    }

    pub fn from_real(x: f64) -> Self {
        if x == 0.0 {
            Self::zero()
        } else if x > 0.0 {
            LogComplex { log_mag: x.ln(), phase: 0.0 }
        } else {
            LogComplex { log_mag: (-x).ln(), phase: PI }
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return Self::zero();
        }
        LogComplex { log_mag: z.norm().ln(), phase: z.arg() }
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let m = self.log_mag.exp();
        Complex64::new(m * self.phase.cos(), m * self.phase.sin())
    }

    /// Real part as f64; saturates for |log_mag| beyond f64 range.
    pub fn re(&self) -> f64 {
        self.to_complex().re
    }

    pub fn mul(&self, other: &LogComplex) -> LogComplex {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        LogComplex::new(self.log_mag + other.log_mag, self.phase + other.phase)
    }

    pub fn div(&self, other: &LogComplex) -> LogComplex {
        if self.is_zero() {
            return Self::zero();
        }
        LogComplex::new(self.log_mag - other.log_mag, self.phase - other.phase)
    }

    /// Raise to a real power along the current branch.
    pub fn powf(&self, p: f64) -> LogComplex {
        if self.is_zero() {
            return Self::zero();
        }
        LogComplex::new(self.log_mag * p, self.phase * p)
    }

    pub fn conj(&self) -> LogComplex {
        LogComplex::new(self.log_mag, -self.phase)
    }

    pub fn neg(&self) -> LogComplex {
        if self.is_zero() {
            return *self;
        }
        LogComplex::new(self.log_mag, self.phase + PI)
    }

    /// `|a - b| / max(|a|, |b|)`; 0 when both are zero.
    pub fn rel_diff(a: &LogComplex, b: &LogComplex) -> f64 {
        if a.is_zero() && b.is_zero() {
            return 0.0;
        }
        let m = a.log_mag.max(b.log_mag);
        let za = if a.is_zero() {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar((a.log_mag - m).exp(), a.phase)
        };
        let zb = if b.is_zero() {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar((b.log_mag - m).exp(), b.phase)
        };
        (za - zb).norm() / za.norm().max(zb.norm())
    }
}

/// Streaming complex log-sum-exp: sums terms by factoring out the maximal
/// log-magnitude seen so far. Deterministic in push order.
#[derive(Debug, Clone)]
pub struct LogAccumulator {
    max_lm: f64,
    re: f64,
    im: f64,
}

impl LogAccumulator {
    pub fn new() -> Self {
        LogAccumulator { max_lm: f64::NEG_INFINITY, re: 0.0, im: 0.0 }
    }

    pub fn push(&mut self, term: LogComplex) {
        if term.is_zero() {
            return;
        }
        if term.log_mag > self.max_lm {
            let rescale = if self.max_lm == f64::NEG_INFINITY {
                0.0
            } else {
                (self.max_lm - term.log_mag).exp()
            };
            self.re *= rescale;
            self.im *= rescale;
            self.max_lm = term.log_mag;
        }
        let m = (term.log_mag - self.max_lm).exp();
        self.re += m * term.phase.cos();
        self.im += m * term.phase.sin();
    }

    pub fn value(&self) -> LogComplex {
        if self.max_lm == f64::NEG_INFINITY {
            return LogComplex::zero();
        }
        let norm = self.re.hypot(self.im);
        if norm == 0.0 {
            return LogComplex::zero();
        }
        LogComplex::new(self.max_lm + norm.ln(), self.im.atan2(self.re))
    }

    /// Log-magnitude of the largest term pushed so far.
    pub fn peak(&self) -> f64 {
        self.max_lm
    }
}

impl Default for LogAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

/// Sum of a slice of log-domain terms; exact zero when all terms are zero.
pub fn logc_sum(terms: &[LogComplex]) -> LogComplex {
    let mut acc = LogAccumulator::new();
    for t in terms {
        acc.push(*t);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sum_of_two_ones() {
        let s = logc_sum(&[LogComplex::one(), LogComplex::one()]);
        assert!((s.log_mag - 2.0_f64.ln()).abs() < 1e-15);
        assert_eq!(s.phase, 0.0);
    }

    #[test]
    fn zero_is_additive_identity() {
        let x = LogComplex::new(3.7, 1.2);
        let s = logc_sum(&[x, LogComplex::zero()]);
        assert!((s.log_mag - x.log_mag).abs() < 1e-14);
        assert!((s.phase - x.phase).abs() < 1e-14);
        assert!(logc_sum(&[LogComplex::zero(), LogComplex::zero()]).is_zero());
    }

    #[test]
    fn dominant_term_no_overflow() {
        let s = logc_sum(&[LogComplex::from_log_mag(700.0), LogComplex::one()]);
        assert!((s.log_mag - 700.0).abs() < 1e-12);
        assert!(s.log_mag.is_finite());
    }

    #[test]
    fn round_trip_and_associativity_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let lm = rng.gen_range(-600.0..600.0);
            let ph = rng.gen_range(-3.1..3.1);
            let x = LogComplex::new(lm, ph);
            if lm.abs() < 700.0 {
                let back = LogComplex::from_complex(x.to_complex());
                assert!((back.log_mag - x.log_mag).abs() <= 1e-14 * x.log_mag.abs().max(1.0));
                assert!((back.phase - x.phase).abs() < 1e-13);
            }
            let y = LogComplex::new(rng.gen_range(-600.0..600.0), rng.gen_range(-3.1..3.1));
            let z = LogComplex::new(rng.gen_range(-600.0..600.0), rng.gen_range(-3.1..3.1));
            let a = x.mul(&y).mul(&z);
            let b = x.mul(&y.mul(&z));
            assert!((a.log_mag - b.log_mag).abs() <= 1e-13 * a.log_mag.abs().max(1.0));
            let dphase = wrap_phase(a.phase - b.phase);
            assert!(dphase.abs() < 1e-13);
        }
    }

    #[test]
    fn mul_adds_logs_and_wraps_phase() {
        let a = LogComplex::new(1.0, 3.0);
        let b = LogComplex::new(2.0, 3.0);
        let p = a.mul(&b);
        assert!((p.log_mag - 3.0).abs() < 1e-15);
        assert!(p.phase > -PI && p.phase <= PI);
        assert!((p.phase - (6.0 - 2.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn cancellation_yields_zero() {
        let x = LogComplex::from_real(5.0);
        let s = logc_sum(&[x, x.neg()]);
        assert!(s.is_zero() || s.log_mag < x.log_mag - 30.0);
    }
}
