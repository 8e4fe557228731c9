//! Gamma-family special functions and the functional-equation factor.
//!
//! The factor in `zeta(s) = chi(s) zeta(1 - s)` is
//!
//! ```text
//! chi(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1 - s)
//!        = (2 pi)^s / (2 cos(pi s / 2) Gamma(s))
//! ```
//!
//! Both forms are used, each on the half plane where its Gamma factor is
//! regular, and always in the log domain: `|chi(sigma + it)|` behaves like
//! `(t / 2 pi)^(1/2 - sigma)` and the individual factors overflow long before
//! the product does.
//!
//! Phase convention for Hardy's function: `theta(t) = Im log Gamma(1/4 + it/2)
//! - (t/2) log pi` on the branch that is continuous in `t` and vanishes at
//! `t = 0`. With it, `chi(1/2 + it) = exp(-2 i theta(t))` and
//! `Z(t) = exp(i theta(t)) zeta(1/2 + it)` is real.

use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A complex number `re + i im`; every successful return is finite.
pub type ComplexValue = Complex64;

const LN_PI: f64 = 1.144_729_885_849_400_2;
const LN_2PI: f64 = 1.837_877_066_409_345_5;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_7;

/// Number of `B_2k / (2k)!` ratios kept in the shared table.
pub(crate) const BERNOULLI_TERMS: usize = 60;

/// Tolerances shared by the evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionConfig {
    /// Absolute tolerance for function values.
    pub target_abs_tol: f64,
    /// Relative tolerance for function values.
    pub target_rel_tol: f64,
    /// Cap on asymptotic correction terms (Euler–Maclaurin, Stirling).
    pub max_series_terms: usize,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            target_abs_tol: 1e-9,
            target_rel_tol: 1e-10,
            max_series_terms: 40,
        }
    }
}

impl PrecisionConfig {
    pub fn validate(&self) -> Result<()> {
        let tol_ok = |v: f64| v > 0.0 && v <= 1e-6;
        if !tol_ok(self.target_abs_tol) {
            return Err(Error::InvalidConfig(format!(
                "target_abs_tol = {} must lie in (0, 1e-6]",
                self.target_abs_tol
            )));
        }
        if !tol_ok(self.target_rel_tol) {
            return Err(Error::InvalidConfig(format!(
                "target_rel_tol = {} must lie in (0, 1e-6]",
                self.target_rel_tol
            )));
        }
        if self.max_series_terms < 8 {
            return Err(Error::InvalidConfig(format!(
                "max_series_terms = {} must be at least 8",
                self.max_series_terms
            )));
        }
        if self.max_series_terms > BERNOULLI_TERMS {
            return Err(Error::InvalidConfig(format!(
                "max_series_terms = {} exceeds the Bernoulli table size {}",
                self.max_series_terms, BERNOULLI_TERMS
            )));
        }
        Ok(())
    }
}

/// `B_2k / (2k)!` for `k = 1..=BERNOULLI_TERMS` (index `k - 1`).
///
/// Uses `B_2k / (2k)! = (-1)^(k+1) 2 zeta(2k) / (2 pi)^(2k)`, which avoids the
/// cancellation of the rational recurrences in floating point.
pub(crate) fn bernoulli_ratios() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let two_pi_sq = (2.0 * PI) * (2.0 * PI);
        let mut scale = 1.0;
        (1..=BERNOULLI_TERMS)
            .map(|k| {
                scale /= two_pi_sq;
                let z = even_zeta(k);
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * 2.0 * z * scale
            })
            .collect()
    })
}

/// `B_2k` for `k = 1..=BERNOULLI_TERMS`.
pub(crate) fn bernoulli_even(k: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut fact = 1.0;
        bernoulli_ratios()
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let k = i + 1;
                fact *= ((2 * k - 1) * (2 * k)) as f64;
                r * fact
            })
            .collect()
    })[k - 1]
}

fn even_zeta(k: usize) -> f64 {
    match k {
        1 => PI * PI / 6.0,
        2 => PI.powi(4) / 90.0,
        _ => {
            // Tail beyond 1000 is below 1e-16 for exponents >= 6.
            let e = 2 * k as i32;
            (1..=1000).rev().map(|n| (n as f64).powi(-e)).sum()
        }
    }
}

fn is_nonpositive_integer(s: Complex64) -> bool {
    s.im.abs() < 1e-13 && s.re <= 0.5 && (s.re - s.re.round()).abs() < 1e-13
}

/// `log sin z`, stable for large `|Im z|`. The imaginary part is only
/// determined modulo `2 pi`.
fn log_sin(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im > 2.0 {
        // sin z = (i/2) e^{-iz} (1 - e^{2iz})
        Complex64::new(-LN_2, PI / 2.0) - i * z + (1.0 - (2.0 * i * z).exp()).ln()
    } else if z.im < -2.0 {
        // sin z = (-i/2) e^{iz} (1 - e^{-2iz})
        Complex64::new(-LN_2, -PI / 2.0) + i * z + (1.0 - (-2.0 * i * z).exp()).ln()
    } else {
        z.sin().ln()
    }
}

fn log_cos(z: Complex64) -> Complex64 {
    log_sin(z + PI / 2.0)
}

fn cot(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im >= 0.0 {
        let w = (2.0 * i * z).exp();
        i * (w + 1.0) / (w - 1.0)
    } else {
        let w = (-2.0 * i * z).exp();
        i * (1.0 + w) / (1.0 - w)
    }
}

fn tan(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im >= 0.0 {
        let w = (2.0 * i * z).exp();
        i * (1.0 - w) / (1.0 + w)
    } else {
        let w = (-2.0 * i * z).exp();
        -i * (1.0 - w) / (1.0 + w)
    }
}

const STIRLING_MIN_MODULUS: f64 = 15.0;

fn stirling_log_gamma(z: Complex64) -> Complex64 {
    let mut acc = (z - 0.5) * z.ln() - z + HALF_LN_2PI;
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    for k in 1..=20 {
        let term = pow * (bernoulli_even(k) / ((2 * k) * (2 * k - 1)) as f64);
        acc += term;
        if term.norm() < 1e-17 * acc.norm() {
            break;
        }
        pow *= inv2;
    }
    acc
}

/// Principal branch of `log Gamma(s)`.
///
/// Off the left sector the value is the analytic continuation from the
/// positive real axis (continuous in `s` away from `(-inf, 0]`). In the left
/// sector the reflection formula is used and the imaginary part is only
/// meaningful modulo `2 pi`.
pub fn log_gamma(s: ComplexValue) -> Result<ComplexValue> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain {
            op: "log_gamma",
            reason: "non-finite argument".into(),
        });
    }
    if is_nonpositive_integer(s) {
        return Err(Error::GammaPole { re: s.re, im: s.im });
    }
    if s.re < 0.0 && s.im.abs() < -s.re {
        // Gamma(s) Gamma(1 - s) = pi / sin(pi s)
        let rest = log_gamma(1.0 - s)?;
        return Ok(LN_PI - log_sin(PI * s) - rest);
    }
    let mut z = s;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.norm() < STIRLING_MIN_MODULUS {
        shift += z.ln();
        z += 1.0;
    }
    Ok(stirling_log_gamma(z) - shift)
}

/// Digamma `psi(s) = Gamma'(s) / Gamma(s)`.
pub fn digamma(s: ComplexValue) -> Result<ComplexValue> {
    if is_nonpositive_integer(s) {
        return Err(Error::GammaPole { re: s.re, im: s.im });
    }
    if s.re < 0.0 && s.im.abs() < -s.re {
        // psi(s) = psi(1 - s) - pi cot(pi s)
        return Ok(digamma(1.0 - s)? - PI * cot(PI * s));
    }
    let mut z = s;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.norm() < STIRLING_MIN_MODULUS {
        shift += z.inv();
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut acc = z.ln() - 0.5 * inv;
    let mut pow = inv2;
    for k in 1..=20 {
        let term = pow * (bernoulli_even(k) / (2 * k) as f64);
        acc -= term;
        if term.norm() < 1e-17 * acc.norm().max(1.0) {
            break;
        }
        pow *= inv2;
    }
    Ok(acc - shift)
}

fn log_chi(s: Complex64) -> Result<Complex64> {
    let log = if s.re >= 0.5 {
        let lc = log_cos(PI * s / 2.0);
        if !lc.re.is_finite() {
            return Err(Error::Pole {
                op: "chi",
                re: s.re,
                im: s.im,
            });
        }
        s * LN_2PI - LN_2 - lc - log_gamma(s)?
    } else {
        s * LN_2 + (s - 1.0) * LN_PI + log_sin(PI * s / 2.0) + log_gamma(1.0 - s)?
    };
    Ok(log)
}

/// `chi(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1 - s)`.
pub fn chi(s: ComplexValue) -> Result<ComplexValue> {
    // poles at s = 1, 3, 5, ... (Gamma(1 - s) not cancelled by the sine)
    if s.im.abs() < 1e-13 && s.re > 0.5 && {
        let r = s.re.round();
        (s.re - r).abs() < 1e-13 && r as i64 % 2 == 1
    } {
        return Err(Error::Pole {
            op: "chi",
            re: s.re,
            im: s.im,
        });
    }
    let log = log_chi(s)?;
    if log.re > 700.0 {
        return Err(Error::Overflow {
            op: "chi",
            reason: format!("log |chi| = {:.1}", log.re),
        });
    }
    if log.re == f64::NEG_INFINITY {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(log.exp())
}

/// `omega(s) = chi'(s) / chi(s)`, from the log-derivative of the product form.
///
/// Defined for `|Im s| >= 1`, where it behaves like `-log(|t| / 2 pi) + O(1/t)`.
pub fn omega(s: ComplexValue) -> Result<ComplexValue> {
    if !(s.im.abs() >= 1.0) {
        return Err(Error::Domain {
            op: "omega",
            reason: format!("|Im s| = {} < 1", s.im.abs()),
        });
    }
    if s.re >= 0.5 {
        Ok(LN_2PI + (PI / 2.0) * tan(PI * s / 2.0) - digamma(s)?)
    } else {
        Ok(LN_2PI + (PI / 2.0) * cot(PI * s / 2.0) - digamma(1.0 - s)?)
    }
}

fn check_theta_domain(t: f64) -> Result<()> {
    if !(t >= 1.0) || !t.is_finite() {
        return Err(Error::Domain {
            op: "riemann_siegel_theta",
            reason: format!("t = {t} < 1"),
        });
    }
    Ok(())
}

/// Riemann–Siegel phase `theta(t)` on its continuous branch with `theta(0) = 0`.
pub fn riemann_siegel_theta(t: f64) -> Result<f64> {
    check_theta_domain(t)?;
    Ok(theta_unchecked(t))
}

pub(crate) fn theta_unchecked(t: f64) -> f64 {
    // Re(1/4 + it/2) > 0, so log_gamma takes the shift/Stirling path, which
    // is continuous in t.
    let lg = log_gamma(Complex64::new(0.25, 0.5 * t)).expect("regular point");
    lg.im - 0.5 * t * LN_PI
}

/// `theta'(t) = (1/2) Re psi(1/4 + it/2) - (1/2) log pi`.
pub fn riemann_siegel_theta_prime(t: f64) -> Result<f64> {
    check_theta_domain(t)?;
    Ok(theta_prime_unchecked(t))
}

pub(crate) fn theta_prime_unchecked(t: f64) -> f64 {
    let psi = digamma(Complex64::new(0.25, 0.5 * t)).expect("regular point");
    0.5 * psi.re - 0.5 * LN_PI
}
