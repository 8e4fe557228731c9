//! Dirichlet coefficients and their partial sums.
//!
//! `Lambda(n)` is sieved, `D(n) = sum_{d | n} log d log(n/d)` comes from a
//! divisor loop, and `(1 * log)(n) = tau(n) log(n) / 2` from the divisor count.
//! All sums here are exact finite sums; they serve as the brute-force side of
//! the residue and mean-value comparisons.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{adaptive, pairwise_sum, GaussLegendre};
use crate::special_fn::chi;
use crate::zeta_engine::ZetaEngine;

/// Largest table [`build_tables`] will allocate.
pub const N_MAX_CAP: usize = 10_000_000;

/// `Lambda`, `D` and divisor counts for `n <= n_max`.
#[derive(Debug, Clone)]
pub struct CoeffTable {
    n_max: usize,
    lambda: Vec<f64>,
    dd: Vec<f64>,
    tau: Vec<u32>,
    d_prefix: Vec<f64>,
}

/// Weighted partial sums needed beyond `Lambda * D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    /// `sum D(n) log n`
    DLogN,
    /// `sum (1 * log)(n) log^2 n`
    OneStarLogLog2N,
}

/// Coefficient sequences accepted by the mean-value lemma check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoeffKind {
    /// `Lambda * D`, generated by `-(zeta'/zeta) zeta'^2`
    LambdaStarD,
    /// `D`, generated by `zeta'^2`
    D,
    /// `1 * log`, generated by `-zeta zeta'`
    OneStarLog,
}

/// Both sides of the mean-value lemma for one `(a, m, T)` cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GonekCheck {
    pub a: f64,
    pub m: u32,
    pub t: f64,
    pub kind: CoeffKind,
    pub sum_side: f64,
    pub integral_side: Complex64,
    /// `|integral_side - sum_side|`.
    pub residual: f64,
    /// `T^(a - 1/2) log^m T`.
    pub envelope: f64,
}

/// Sieves the tables up to `n_max`.
pub fn build_tables(n_max: usize) -> Result<CoeffTable> {
    if n_max < 1 {
        return Err(Error::InvalidConfig("n_max must be at least 1".into()));
    }
    if n_max > N_MAX_CAP {
        return Err(Error::MemoryBudget {
            requested: n_max,
            cap: N_MAX_CAP,
        });
    }
    let n = n_max;
    let ln: Vec<f64> = (0..=n).map(|k| if k == 0 { 0.0 } else { (k as f64).ln() }).collect();

    let mut lambda = vec![0.0; n + 1];
    let mut composite = vec![false; n + 1];
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        let mut m = p * p;
        while m <= n {
            composite[m] = true;
            m += p;
        }
        let mut q = p;
        loop {
            lambda[q] = ln[p];
            match q.checked_mul(p) {
                Some(next) if next <= n => q = next,
                _ => break,
            }
        }
    }

    let mut dd = vec![0.0; n + 1];
    let mut tau = vec![0u32; n + 1];
    for d in 1..=n {
        let ld = ln[d];
        let mut k = 1;
        let mut m = d;
        while m <= n {
            dd[m] += ld * ln[k];
            tau[m] += 1;
            k += 1;
            m += d;
        }
    }

    let mut d_prefix = vec![0.0; n + 1];
    for k in 1..=n {
        d_prefix[k] = d_prefix[k - 1] + dd[k];
    }
    Ok(CoeffTable {
        n_max,
        lambda,
        dd,
        tau,
        d_prefix,
    })
}

impl CoeffTable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn lambda(&self, n: usize) -> f64 {
        self.lambda[n]
    }

    pub fn d(&self, n: usize) -> f64 {
        self.dd[n]
    }

    /// `(1 * log)(n) = sum_{d | n} log d`.
    pub fn one_star_log(&self, n: usize) -> f64 {
        0.5 * self.tau[n] as f64 * (n as f64).ln()
    }

    /// `(Lambda * D)(n)` by direct convolution over divisors.
    pub fn lambda_star_d(&self, n: usize) -> f64 {
        let mut acc = 0.0;
        let mut d = 1;
        while d * d <= n {
            if n % d == 0 {
                let e = n / d;
                acc += self.lambda[d] * self.dd[e];
                if e != d {
                    acc += self.lambda[e] * self.dd[d];
                }
            }
            d += 1;
        }
        acc
    }

    pub fn coeff(&self, kind: CoeffKind, n: usize) -> f64 {
        match kind {
            CoeffKind::LambdaStarD => self.lambda_star_d(n),
            CoeffKind::D => self.d(n),
            CoeffKind::OneStarLog => self.one_star_log(n),
        }
    }

    fn cutoff(&self, op: &'static str, x: f64) -> Result<usize> {
        if !x.is_finite() {
            return Err(Error::Domain {
                op,
                reason: format!("x = {x}"),
            });
        }
        if x < 1.0 {
            return Ok(0);
        }
        let k = x.floor() as usize;
        if k > self.n_max {
            return Err(Error::TableTooSmall {
                op,
                n_max: self.n_max,
                x,
            });
        }
        Ok(k)
    }

    /// Chebyshev `psi(x) = sum_{n <= x} Lambda(n)`.
    pub fn chebyshev_psi(&self, x: f64) -> Result<f64> {
        let k = self.cutoff("conv_sum_ld", x)?;
        Ok(pairwise_sum(&self.lambda[..=k]))
    }

    /// `sum_{mn <= x} Lambda(m) D(n)`.
    pub fn conv_sum_ld(&self, x: f64) -> Result<f64> {
        let k = self.cutoff("conv_sum_ld", x)?;
        let terms: Vec<f64> = (2..=k)
            .filter(|&m| self.lambda[m] != 0.0)
            .map(|m| self.lambda[m] * self.d_prefix[k / m])
            .collect();
        Ok(pairwise_sum(&terms))
    }

    /// The weighted partial sums of [`WeightKind`] up to `x`.
    pub fn weighted_sums(&self, x: f64, kind: WeightKind) -> Result<f64> {
        let k = self.cutoff("weighted_sums", x)?;
        let terms: Vec<f64> = (2..=k)
            .map(|n| {
                let l = (n as f64).ln();
                match kind {
                    WeightKind::DLogN => self.dd[n] * l,
                    WeightKind::OneStarLogLog2N => self.one_star_log(n) * l * l,
                }
            })
            .collect();
        Ok(pairwise_sum(&terms))
    }

    /// Compares
    /// `(1/2pi) int_1^T F(a + it) chi(1 - a - it) log^m(t/2pi) dt`
    /// with `sum_{n <= T/2pi} b_n log^m n`, where `F = sum b_n n^-s` is
    /// evaluated in closed form through zeta.
    pub fn gonek_lemma_check(
        &self,
        a: f64,
        m: u32,
        t: f64,
        kind: CoeffKind,
        engine: &ZetaEngine,
    ) -> Result<GonekCheck> {
        if !(a > 1.0 && a <= 1.5) {
            return Err(Error::Domain {
                op: "gonek_lemma_check",
                reason: format!("a = {a} not in (1, 1.5]"),
            });
        }
        if m > 2 {
            return Err(Error::Domain {
                op: "gonek_lemma_check",
                reason: format!("m = {m} not in 0..=2"),
            });
        }
        if !(t > 1.0 && t <= 2000.0) {
            return Err(Error::Domain {
                op: "gonek_lemma_check",
                reason: format!("T = {t} not in (1, 2000]"),
            });
        }
        let k = self.cutoff("gonek_lemma_check", t / (2.0 * PI))?;
        let terms: Vec<f64> = (1..=k)
            .map(|n| self.coeff(kind, n) * (n as f64).ln().powi(m as i32))
            .collect();
        let sum_side = pairwise_sum(&terms);

        let integrand = |tt: f64| -> Result<Complex64> {
            let s = Complex64::new(a, tt);
            let jet = engine.jet(s, 1)?;
            let (z, zp) = (jet.values[0], jet.values[1]);
            let f = match kind {
                CoeffKind::LambdaStarD => -zp * zp * zp / z,
                CoeffKind::D => zp * zp,
                CoeffKind::OneStarLog => -z * zp,
            };
            let w = (tt / (2.0 * PI)).ln().powi(m as i32);
            Ok(f * chi(1.0 - s)? * (w / (2.0 * PI)))
        };
        let rule = GaussLegendre::new(16);
        let panel = 2.0;
        let n_panels = ((t - 1.0) / panel).ceil() as usize;
        let h = (t - 1.0) / n_panels as f64;
        let tol = 1e-9 * (1.0 + sum_side.abs()) / n_panels as f64;
        let mut re = Vec::with_capacity(n_panels);
        let mut im = Vec::with_capacity(n_panels);
        for j in 0..n_panels {
            let lo = 1.0 + j as f64 * h;
            let hi = if j + 1 == n_panels { t } else { lo + h };
            let r = adaptive(&rule, lo, hi, tol, 12, "gonek_lemma_check", &integrand)?;
            re.push(r.value.re);
            im.push(r.value.im);
        }
        let integral_side = Complex64::new(pairwise_sum(&re), pairwise_sum(&im));
        Ok(GonekCheck {
            a,
            m,
            t,
            kind,
            sum_side,
            integral_side,
            residual: (integral_side - sum_side).norm(),
            envelope: t.powf(a - 0.5) * t.ln().powi(m as i32),
        })
    }
}
