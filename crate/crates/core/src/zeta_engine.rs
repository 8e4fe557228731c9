//! Riemann zeta and Hardy's Z-function.
//!
//! `zeta(s)` and its first few derivatives come from one Euler–Maclaurin
//! evaluation with `N = 20 + ceil(|s| / 2)` summed terms, differentiated term
//! by term:
//!
//! ```text
//! zeta(s) = sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2
//!         + sum_k B_2k/(2k)! s(s+1)...(s+2k-2) N^(1-s-2k) + R
//! ```
//!
//! With this `N` the ratio of consecutive correction terms is below about
//! `1/pi`, so a few dozen corrections reach double precision. Within `0.1`
//! of the pole the truncated Laurent expansion is used instead.
//!
//! On the critical line `Z(t) = exp(i theta(t)) zeta(1/2 + it)` and
//! `Z'(t) = Re[i exp(i theta) (theta'(t) zeta + zeta')]`; both are computed
//! from the same zeta evaluation.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{series_zeta, stieltjes_table, LaurentSeries, MAX_STIELTJES_INDEX};
use crate::special_fn::{
    bernoulli_ratios, omega, theta_prime_unchecked, theta_unchecked, ComplexValue,
    PrecisionConfig,
};

/// Largest `|Im s|` the evaluator accepts.
pub const IM_ENVELOPE: f64 = 1e5;

/// Highest derivative order available from [`ZetaEngine::jet`].
pub const MAX_JET_ORDER: usize = 3;

const LAURENT_RADIUS: f64 = 0.1;
const POLE_EXCLUSION: f64 = 1e-8;

/// `zeta^(order)(s)` with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaEvaluation {
    pub value: ComplexValue,
    pub derivative_order: usize,
    pub est_abs_err: f64,
}

/// `zeta, zeta', ..., zeta^(order)` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaJet {
    pub values: [ComplexValue; MAX_JET_ORDER + 1],
    pub order: usize,
    pub est_abs_err: f64,
}

/// `Z_1(s) = zeta'(s) - omega(s) zeta(s) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Z1Value {
    pub s: ComplexValue,
    pub value: ComplexValue,
}

/// `Z(t)` and `Z'(t)` at one height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyValue {
    pub t: f64,
    pub z: f64,
    pub z_prime: f64,
    /// `zeta(1/2 + it)` and `zeta'(1/2 + it)` used to build the above.
    pub zeta: ComplexValue,
    pub zeta_prime: ComplexValue,
}

/// Zeta evaluator bound to one precision configuration.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZetaEngine {
    cfg: PrecisionConfig,
}

fn ln_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = (IM_ENVELOPE / 2.0) as usize + 200;
        (0..n).map(|k| if k == 0 { 0.0 } else { (k as f64).ln() }).collect()
    })
}

fn laurent_jet_series() -> &'static [LaurentSeries; MAX_JET_ORDER + 1] {
    static SERIES: OnceLock<[LaurentSeries; MAX_JET_ORDER + 1]> = OnceLock::new();
    SERIES.get_or_init(|| {
        let z = series_zeta(MAX_STIELTJES_INDEX, stieltjes_table()).expect("table depth");
        let d1 = z.derivative();
        let d2 = d1.derivative();
        let d3 = d2.derivative();
        [z, d1, d2, d3]
    })
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl ZetaEngine {
    pub fn new(cfg: PrecisionConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(ZetaEngine { cfg })
    }

    pub fn config(&self) -> &PrecisionConfig {
        &self.cfg
    }

    /// `zeta^(order)(s)` for `order` in `0..=2`.
    pub fn zeta(&self, s: ComplexValue, order: usize) -> Result<ZetaEvaluation> {
        if order > 2 {
            return Err(Error::Domain {
                op: "zeta",
                reason: format!("derivative order {order} not in 0..=2"),
            });
        }
        let jet = self.jet(s, order)?;
        Ok(ZetaEvaluation {
            value: jet.values[order],
            derivative_order: order,
            est_abs_err: jet.est_abs_err,
        })
    }

    /// All derivatives up to `max_order` (at most 3) in one pass.
    pub fn jet(&self, s: ComplexValue, max_order: usize) -> Result<ZetaJet> {
        if max_order > MAX_JET_ORDER {
            return Err(Error::Domain {
                op: "zeta",
                reason: format!("derivative order {max_order} > {MAX_JET_ORDER}"),
            });
        }
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(Error::Domain {
                op: "zeta",
                reason: "non-finite argument".into(),
            });
        }
        if s.im.abs() > IM_ENVELOPE {
            return Err(Error::EnvelopeExceeded {
                im: s.im.abs(),
                limit: IM_ENVELOPE,
            });
        }
        let u = s - 1.0;
        if u.norm() < POLE_EXCLUSION {
            return Err(Error::Pole {
                op: "zeta",
                re: s.re,
                im: s.im,
            });
        }
        let jet = if u.norm() < LAURENT_RADIUS {
            laurent_jet(u, max_order)
        } else {
            self.euler_maclaurin(s, max_order)
        };
        if jet.est_abs_err > self.cfg.target_abs_tol {
            return Err(Error::AccuracyNotReached {
                op: "zeta",
                estimate: jet.est_abs_err,
                target: self.cfg.target_abs_tol,
            });
        }
        Ok(jet)
    }

    fn euler_maclaurin(&self, s: Complex64, dmax: usize) -> ZetaJet {
        let n_terms = 20 + (0.5 * s.norm()).ceil() as usize;
        let lns = ln_table();
        let zero = Complex64::new(0.0, 0.0);
        let mut vals = [zero; MAX_JET_ORDER + 1];

        // direct sum, n = N-1 down to 1
        let (sigma, t) = (s.re, s.im);
        let mut abs_mass = 0.0;
        for n in (1..n_terms).rev() {
            let l = lns[n];
            let mag = (-sigma * l).exp();
            let (sn, cs) = (t * l).sin_cos();
            let term = Complex64::new(mag * cs, -mag * sn);
            abs_mass += mag;
            let mut w = term;
            vals[0] += w;
            for v in vals.iter_mut().take(dmax + 1).skip(1) {
                w *= -l;
                *v += w;
            }
        }

        let n = n_terms as f64;
        let ln_n = lns[n_terms];
        let n_pow = ((1.0 - s) * ln_n).exp(); // N^(1-s)
        let inv_sm1 = (s - 1.0).inv();

        // N^(1-s) / (s - 1)
        let mut fact = 1.0;
        let mut h = [zero; MAX_JET_ORDER + 1]; // derivatives of 1/(s-1)
        let mut p = inv_sm1;
        for (j, slot) in h.iter_mut().enumerate().take(dmax + 1) {
            if j > 0 {
                fact *= j as f64;
                p *= inv_sm1;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            *slot = p * (sign * fact);
        }
        for (d, v) in vals.iter_mut().enumerate().take(dmax + 1) {
            let mut acc = zero;
            for j in 0..=d {
                acc += h[j] * (binom(d, j) * (-ln_n).powi((d - j) as i32));
            }
            *v += n_pow * acc;
        }
        // N^-s / 2
        let half = n_pow / n * 0.5;
        for (d, v) in vals.iter_mut().enumerate().take(dmax + 1) {
            *v += half * (-ln_n).powi(d as i32);
        }

        // Bernoulli corrections; P_k(s) = s (s+1) ... (s+2k-2) with derivatives
        let mut poly = [zero; MAX_JET_ORDER + 1];
        poly[0] = s;
        poly[1] = Complex64::new(1.0, 0.0);
        let ratios = bernoulli_ratios();
        let n_sq_inv = 1.0 / (n * n);
        let mut base = n_pow * n_sq_inv; // N^(1-s-2k)
        let mut last = f64::INFINITY;
        let mut stalled = false;
        let max_k = self.cfg.max_series_terms.min(ratios.len());
        for k in 1..=max_k {
            if k > 1 {
                for c in [(2 * k - 3) as f64, (2 * k - 2) as f64] {
                    let q = s + c;
                    for i in (0..=dmax).rev() {
                        let lower = if i > 0 { poly[i - 1] * i as f64 } else { zero };
                        poly[i] = poly[i] * q + lower;
                    }
                }
                base *= n_sq_inv;
            }
            let coef = ratios[k - 1];
            let mut size = 0.0f64;
            for (d, v) in vals.iter_mut().enumerate().take(dmax + 1) {
                let mut acc = zero;
                for j in 0..=d {
                    acc += poly[j] * (binom(d, j) * (-ln_n).powi((d - j) as i32));
                }
                let term = base * acc * coef;
                size = size.max(term.norm());
                *v += term;
            }
            if size > last {
                stalled = true;
                last = size;
                break;
            }
            last = size;
            let scale = vals.iter().take(dmax + 1).fold(1.0f64, |m, v| m.max(v.norm()));
            if size < 1e-17 * scale {
                break;
            }
        }
        let _ = stalled;
        let rounding = 4e-16 * abs_mass * ln_n.max(1.0).powi(dmax as i32);
        ZetaJet {
            values: vals,
            order: dmax,
            est_abs_err: last + rounding,
        }
    }

    /// `Z(t)`.
    pub fn hardy_z(&self, t: f64) -> Result<f64> {
        Ok(self.hardy_inner(t, 0)?.z)
    }

    /// `Z'(t)` from the analytic product rule.
    pub fn hardy_z_prime(&self, t: f64) -> Result<f64> {
        Ok(self.hardy_inner(t, 1)?.z_prime)
    }

    /// `Z(t)` and `Z'(t)` together.
    pub fn hardy(&self, t: f64) -> Result<HardyValue> {
        self.hardy_inner(t, 1)
    }

    fn hardy_inner(&self, t: f64, dmax: usize) -> Result<HardyValue> {
        if !(t >= 1.0) || !t.is_finite() {
            return Err(Error::Domain {
                op: "hardy_z",
                reason: format!("t = {t} < 1"),
            });
        }
        let jet = self.jet(Complex64::new(0.5, t), dmax)?;
        let theta = theta_unchecked(t);
        let rot = Complex64::from_polar(1.0, theta);
        let zeta = jet.values[0];
        let w = rot * zeta;
        if w.im.abs() > 1e-7 * (1.0 + zeta.norm()) {
            return Err(Error::PhaseInconsistency { t, im: w.im });
        }
        let (z_prime, zeta_prime) = if dmax >= 1 {
            let dtheta = theta_prime_unchecked(t);
            let zp = jet.values[1];
            let v = Complex64::i() * rot * (zeta * dtheta + zp);
            (v.re, zp)
        } else {
            (f64::NAN, Complex64::new(f64::NAN, f64::NAN))
        };
        Ok(HardyValue {
            t,
            z: w.re,
            z_prime,
            zeta,
            zeta_prime,
        })
    }

    /// `Z_1(s) = zeta'(s) - omega(s) zeta(s) / 2`, for `|Im s| >= 1`.
    pub fn z1(&self, s: ComplexValue) -> Result<Z1Value> {
        let jet = self.jet(s, 1)?;
        let w = omega(s)?;
        Ok(Z1Value {
            s,
            value: jet.values[1] - 0.5 * w * jet.values[0],
        })
    }
}

fn laurent_jet(u: Complex64, dmax: usize) -> ZetaJet {
    let series = laurent_jet_series();
    let mut values = [Complex64::new(0.0, 0.0); MAX_JET_ORDER + 1];
    let mut err = 0.0f64;
    for (d, v) in values.iter_mut().enumerate().take(dmax + 1) {
        let ser = &series[d];
        *v = ser.eval(u);
        // size of the last retained term, times |u|, as the truncation estimate
        let k = ser.trunc_order();
        let last = ser.coeff(k).unwrap_or(0.0).abs() * u.norm().powi(k as i32 + 1);
        err = err.max(last + ser.est_err());
    }
    ZetaJet {
        values,
        order: dmax,
        est_abs_err: err,
    }
}

fn default_engine() -> &'static ZetaEngine {
    static ENGINE: OnceLock<ZetaEngine> = OnceLock::new();
    ENGINE.get_or_init(ZetaEngine::default)
}

/// `zeta^(order)(s)` with the default precision.
pub fn zeta(s: ComplexValue, order: usize) -> Result<ZetaEvaluation> {
    default_engine().zeta(s, order)
}

/// Hardy's `Z(t)` with the default precision.
pub fn hardy_z(t: f64) -> Result<f64> {
    default_engine().hardy_z(t)
}

/// `Z'(t)` with the default precision.
pub fn hardy_z_prime(t: f64) -> Result<f64> {
    default_engine().hardy_z_prime(t)
}

/// `Z_1(s)` with the default precision.
pub fn z1(s: ComplexValue) -> Result<Z1Value> {
    default_engine().z1(s)
}
