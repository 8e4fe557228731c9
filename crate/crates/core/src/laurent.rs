//! Truncated Laurent series at `s = 1` and the constants read off them.
//!
//! Series are in `u = s - 1`. A [`LaurentSeries`] stores the coefficients of
//! `u^-p, ..., u^K` where `p` is the pole order and `K` the highest power that
//! is known exactly. Arithmetic tracks `K`: a product or quotient is only
//! valid up to the order both operands support, and that order is carried
//! along instead of being padded with zeros.
//!
//! The zeta expansion is
//!
//! ```text
//! zeta(s) = 1/u + sum_h (-1)^h gamma_h / h! u^h
//! ```
//!
//! with the Stieltjes constants `gamma_h`, and
//! `zeta'/zeta(s) = -1/u + sum_k eta_k u^k`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special_fn::bernoulli_ratios;

/// Largest Stieltjes index the table builder accepts.
pub const MAX_STIELTJES_INDEX: usize = 8;

/// Default truncation order used by the main-term assembly.
pub const DEFAULT_TRUNC: usize = 8;

/// `gamma_0 ..= gamma_H` with per-entry error estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StieltjesTable {
    pub values: Vec<f64>,
    pub est_err: Vec<f64>,
}

impl StieltjesTable {
    /// Builds a table from given values (error estimates set to zero).
    /// Used for synthetic inputs such as all-zero constants.
    pub fn from_values(values: Vec<f64>) -> Self {
        let est_err = vec![0.0; values.len()];
        StieltjesTable { values, est_err }
    }

    pub fn h_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn gamma(&self, h: usize) -> f64 {
        self.values[h]
    }
}

/// Stieltjes constants `gamma_0 ..= gamma_{h_max}`.
///
/// Each constant is the limit of `sum_{k<=n} log^h k / k - log^{h+1} n / (h+1)`.
/// The tail beyond `n = 20` is summed with Euler–Maclaurin, using the exact
/// odd derivatives of `log^h x / x`.
pub fn stieltjes(h_max: usize) -> Result<StieltjesTable> {
    if h_max > MAX_STIELTJES_INDEX {
        return Err(Error::Domain {
            op: "stieltjes",
            reason: format!("h_max = {h_max} > {MAX_STIELTJES_INDEX}"),
        });
    }
    let mut values = Vec::with_capacity(h_max + 1);
    let mut est_err = Vec::with_capacity(h_max + 1);
    for h in 0..=h_max {
        let (v, e) = stieltjes_one(h);
        if e > 1e-10 {
            return Err(Error::AccuracyNotReached {
                op: "stieltjes",
                estimate: e,
                target: 1e-10,
            });
        }
        values.push(v);
        est_err.push(e);
    }
    Ok(StieltjesTable { values, est_err })
}

/// Process-wide table to `MAX_STIELTJES_INDEX`, computed once.
pub fn stieltjes_table() -> &'static StieltjesTable {
    static TABLE: OnceLock<StieltjesTable> = OnceLock::new();
    TABLE.get_or_init(|| stieltjes(MAX_STIELTJES_INDEX).expect("Stieltjes constants converge"))
}

fn stieltjes_one(h: usize) -> (f64, f64) {
    const N: usize = 20;
    let f = |k: usize| {
        let l = (k as f64).ln();
        l.powi(h as i32) / k as f64
    };
    let head: f64 = (1..N).rev().map(f).sum();
    let n = N as f64;
    let l = n.ln();
    let mut acc = head + 0.5 * f(N) - l.powi(h as i32 + 1) / (h + 1) as f64;

    // f^(m)(x) = x^(-1-m) p_m(log x); p_0 = L^h, p_{m+1} = -(m+1) p_m + p_m'
    let mut p = vec![0.0; h + 1];
    p[h] = 1.0;
    let eval = |p: &[f64]| p.iter().rev().fold(0.0, |a, c| a * l + c);
    let step = |p: &[f64], m: usize| -> Vec<f64> {
        let mut q: Vec<f64> = p.iter().map(|c| -((m + 1) as f64) * c).collect();
        for (i, c) in p.iter().enumerate().skip(1) {
            q[i - 1] += i as f64 * c;
        }
        q
    };
    let mut m = 0;
    let mut last = f64::INFINITY;
    let ratios = bernoulli_ratios();
    for (j, ratio) in ratios.iter().enumerate().take(40) {
        let order = 2 * j + 1;
        while m < order {
            p = step(&p, m);
            m += 1;
        }
        let term = ratio * eval(&p) * n.powi(-(order as i32) - 1);
        acc -= term;
        if term.abs() > last {
            break;
        }
        last = term.abs();
        if last < 1e-20 {
            break;
        }
    }
    let rounding = 1e-16 * (head.abs() + l.powi(h as i32 + 1) / (h + 1) as f64);
    (acc, last + rounding)
}

/// A truncated Laurent series in `u = s - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentSeries {
    pole_order: usize,
    coeffs: Vec<f64>,
    est_err: f64,
}

/// Binary/unary operations accepted by [`series_ops`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Div,
    /// Derivative of the first operand; the second is ignored.
    Derivative,
}

impl LaurentSeries {
    /// Series with coefficients of `u^-pole_order, ...` in ascending order.
    pub fn new(pole_order: usize, coeffs: Vec<f64>) -> Self {
        LaurentSeries {
            pole_order,
            coeffs,
            est_err: 0.0,
        }
    }

    pub fn with_error(mut self, est_err: f64) -> Self {
        self.est_err = est_err;
        self
    }

    pub fn constant(c: f64, trunc: i64) -> Self {
        let mut coeffs = vec![0.0; (trunc + 1).max(1) as usize];
        coeffs[0] = c;
        LaurentSeries::new(0, coeffs)
    }

    pub fn pole_order(&self) -> usize {
        self.pole_order
    }

    /// Highest power of `u` whose coefficient is known.
    pub fn trunc_order(&self) -> i64 {
        self.coeffs.len() as i64 - self.pole_order as i64 - 1
    }

    pub fn est_err(&self) -> f64 {
        self.est_err
    }

    /// Coefficient of `u^power`; `None` beyond the truncation order.
    pub fn coeff(&self, power: i64) -> Option<f64> {
        let idx = power + self.pole_order as i64;
        if idx < 0 {
            Some(0.0)
        } else {
            self.coeffs.get(idx as usize).copied()
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    fn lowest_power(&self) -> i64 {
        -(self.pole_order as i64)
    }

    pub fn scale(&self, k: f64) -> Self {
        LaurentSeries {
            pole_order: self.pole_order,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
            est_err: self.est_err * k.abs(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let lo = self.lowest_power().min(other.lowest_power());
        let hi = self.trunc_order().min(other.trunc_order());
        let coeffs = (lo..=hi)
            .map(|k| self.coeff(k).unwrap() + other.coeff(k).unwrap())
            .collect();
        LaurentSeries {
            pole_order: (-lo) as usize,
            coeffs,
            est_err: self.est_err + other.est_err,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let lo = self.lowest_power() + other.lowest_power();
        let hi = (self.trunc_order() + other.lowest_power())
            .min(other.trunc_order() + self.lowest_power());
        let coeffs = (lo..=hi)
            .map(|k| {
                (self.lowest_power()..=self.trunc_order())
                    .filter_map(|i| {
                        let j = k - i;
                        if j < other.lowest_power() || j > other.trunc_order() {
                            None
                        } else {
                            Some(self.coeff(i).unwrap() * other.coeff(j).unwrap())
                        }
                    })
                    .sum()
            })
            .collect();
        let mag = |s: &Self| s.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        LaurentSeries {
            pole_order: (-lo).max(0) as usize,
            coeffs: pad_front(lo, coeffs),
            est_err: self.est_err * mag(other) + other.est_err * mag(self),
        }
    }

    /// `self / other`. The leading stored coefficient of `other` must be
    /// nonzero.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let lead = other.coeffs.first().copied().unwrap_or(0.0);
        if lead == 0.0 {
            return Err(Error::SeriesDivisionByZero);
        }
        // other = u^-q beta(u), beta known to order K_b + q
        let q = other.pole_order as i64;
        let beta_order = other.trunc_order() + q;
        let mut inv = vec![0.0; (beta_order + 1).max(0) as usize];
        if !inv.is_empty() {
            inv[0] = 1.0 / lead;
            for n in 1..inv.len() {
                let s: f64 = (1..=n).map(|k| other.coeffs[k] * inv[n - k]).sum();
                inv[n] = -s / lead;
            }
        }
        // 1/other = u^q / beta, valid to q + beta_order
        let mut recip_coeffs = vec![0.0; q.max(0) as usize];
        recip_coeffs.extend_from_slice(&inv);
        let recip = LaurentSeries {
            pole_order: 0,
            coeffs: recip_coeffs,
            est_err: other.est_err / (lead * lead),
        };
        // the first q product coefficients are structural zeros
        let mut out = self.mul(&recip);
        let strip = (q as usize).min(out.pole_order);
        out.coeffs.drain(..strip);
        out.pole_order -= strip;
        Ok(out)
    }

    pub fn derivative(&self) -> Self {
        let lo = self.lowest_power();
        let hi = self.trunc_order();
        let new_lo = if self.pole_order > 0 { lo - 1 } else { 0 };
        let coeffs = (new_lo..hi)
            .map(|k| {
                let src = k + 1;
                src as f64 * self.coeff(src).unwrap()
            })
            .collect();
        LaurentSeries {
            pole_order: (-new_lo) as usize,
            coeffs,
            est_err: self.est_err * (self.pole_order.max(1) + hi.max(1) as usize) as f64,
        }
    }

    /// Evaluates the truncated series at a complex offset `u`.
    pub fn eval(&self, u: num_complex::Complex64) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * u + c;
        }
        acc * u.powi(-(self.pole_order as i32))
    }
}

fn pad_front(lo: i64, coeffs: Vec<f64>) -> Vec<f64> {
    if lo > 0 {
        let mut v = vec![0.0; lo as usize];
        v.extend(coeffs);
        v
    } else {
        coeffs
    }
}

/// Dispatches one of the four series operations.
pub fn series_ops(a: &LaurentSeries, b: &LaurentSeries, op: SeriesOp) -> Result<LaurentSeries> {
    match op {
        SeriesOp::Add => Ok(a.add(b)),
        SeriesOp::Mul => Ok(a.mul(b)),
        SeriesOp::Div => a.div(b),
        SeriesOp::Derivative => Ok(a.derivative()),
    }
}

/// Laurent series of zeta at `s = 1` through `u^trunc`.
pub fn series_zeta(trunc: usize, table: &StieltjesTable) -> Result<LaurentSeries> {
    if trunc > table.h_max() {
        return Err(Error::InsufficientTruncation {
            op: "series_zeta",
            needed: trunc as i64,
            available: table.h_max() as i64,
        });
    }
    let mut coeffs = vec![1.0];
    let mut fact = 1.0;
    let mut err = 0.0f64;
    for h in 0..=trunc {
        if h > 0 {
            fact *= h as f64;
        }
        let sign = if h % 2 == 0 { 1.0 } else { -1.0 };
        coeffs.push(sign * table.gamma(h) / fact);
        err = err.max(table.est_err[h] / fact);
    }
    Ok(LaurentSeries::new(1, coeffs).with_error(err))
}

/// `eta_0 ..= eta_{k_max}` from `zeta'/zeta = -1/u + sum eta_k u^k`.
pub fn eta_coeffs(k_max: usize, table: &StieltjesTable) -> Result<Vec<f64>> {
    let z = series_zeta(table.h_max(), table)?;
    let ratio = z.derivative().div(&z)?;
    (0..=k_max as i64)
        .map(|k| {
            ratio.coeff(k).ok_or(Error::InsufficientTruncation {
                op: "eta_coeffs",
                needed: k,
                available: ratio.trunc_order(),
            })
        })
        .collect()
}

/// `Res_{s=1} F(s) x^s / s`, with its polynomial form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidueMainTerm {
    /// `c_i` in `x * sum_i c_i log^i x`.
    pub log_coeffs: Vec<f64>,
    pub value: f64,
}

impl ResidueMainTerm {
    /// Evaluates `x * sum c_i log^i x`.
    pub fn eval(&self, x: f64) -> f64 {
        let l = x.ln();
        x * self.log_coeffs.iter().rev().fold(0.0, |a, c| a * l + c)
    }
}

/// Polynomial form of `Res_{s=1} F(s) x^s / s` without a specific `x`.
///
/// Writing `x^s / s = x e^{u log x} / (1 + u)`, the coefficient of
/// `x log^i x` is `sum_{j >= i} a_{-(j+1)} (-1)^{j-i} / i!`.
pub fn residue_log_coeffs(f: &LaurentSeries) -> Result<Vec<f64>> {
    let p = f.pole_order();
    if p == 0 {
        return Ok(vec![0.0]);
    }
    if f.trunc_order() < -1 {
        return Err(Error::InsufficientTruncation {
            op: "residue_main_term",
            needed: -1,
            available: f.trunc_order(),
        });
    }
    let mut out = vec![0.0; p];
    let mut ifact = 1.0;
    for (i, slot) in out.iter_mut().enumerate() {
        if i > 0 {
            ifact *= i as f64;
        }
        let mut acc = 0.0;
        for j in i..p {
            let a = f.coeff(-(j as i64) - 1).unwrap();
            let sign = if (j - i) % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * a;
        }
        *slot = acc / ifact;
    }
    Ok(out)
}

/// `Res_{s=1} F(s) x^s / s` for `x > 1`.
pub fn residue_main_term(f: &LaurentSeries, x: f64) -> Result<ResidueMainTerm> {
    if !(x > 1.0) {
        return Err(Error::Domain {
            op: "residue_main_term",
            reason: format!("x = {x} must exceed 1"),
        });
    }
    let log_coeffs = residue_log_coeffs(f)?;
    let mut r = ResidueMainTerm {
        log_coeffs,
        value: 0.0,
    };
    r.value = r.eval(x);
    Ok(r)
}

/// Laurent series of the zeta-family generating functions that appear in the
/// main-term assembly, all at `s = 1`.
#[derive(Debug, Clone)]
pub struct ZetaFamily {
    pub zeta: LaurentSeries,
    pub zeta_d1: LaurentSeries,
    pub zeta_d2: LaurentSeries,
    pub log_deriv: LaurentSeries,
}

impl ZetaFamily {
    pub fn new(table: &StieltjesTable) -> Result<Self> {
        let zeta = series_zeta(table.h_max(), table)?;
        let zeta_d1 = zeta.derivative();
        let zeta_d2 = zeta_d1.derivative();
        let log_deriv = zeta_d1.div(&zeta)?;
        Ok(ZetaFamily {
            zeta,
            zeta_d1,
            zeta_d2,
            log_deriv,
        })
    }

    /// `-(zeta'/zeta) zeta'^2 = sum (Lambda * D)(n) n^-s`.
    pub fn lambda_star_d(&self) -> LaurentSeries {
        self.log_deriv
            .mul(&self.zeta_d1)
            .mul(&self.zeta_d1)
            .scale(-1.0)
    }

    /// `-(zeta'^2)' = sum D(n) log n n^-s`.
    pub fn d_log(&self) -> LaurentSeries {
        self.zeta_d1.mul(&self.zeta_d1).derivative().scale(-1.0)
    }

    /// `-(zeta zeta')'' = sum (1 * log)(n) log^2 n n^-s`.
    pub fn one_star_log_log2(&self) -> LaurentSeries {
        self.zeta
            .mul(&self.zeta_d1)
            .derivative()
            .derivative()
            .scale(-1.0)
    }
}

/// Per-block comparison of a hand expansion of
/// `Res_{s=1} (zeta'/zeta)(s) zeta'(s)^2 x^s / s` with the series result.
///
/// The residue is written as `x * sum_j B_j b_j(log x) / j!` with
/// `b_j(L) = sum_i j!/i! (-1)^(j-i) L^i`; `B_j` is the coefficient of
/// `u^-(j+1)`. The hand expansion states, from `j = 4` down to `j = 0`:
/// `-1`, `eta_0`, `2 gamma_1 + eta_1`, `eta_2 + 4 gamma_2 - 2 gamma_1 eta_0`,
/// `eta_3 + 6 gamma_3 - gamma_1^2 - 2 eta_1 gamma_1`.
/// Only the `j = 4` and `j = 3` values agree with direct expansion; the
/// lower three carry different `gamma` terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HandExpansionCheck {
    /// `j = 4, 3, 2, 1, 0` values from the hand expansion.
    pub hand: [f64; 5],
    /// Same blocks from series arithmetic.
    pub computed: [f64; 5],
    pub matches: [bool; 5],
}

pub fn hand_expansion_check(table: &StieltjesTable, tol: f64) -> Result<HandExpansionCheck> {
    let eta = eta_coeffs(3, table)?;
    let g = |h: usize| table.gamma(h);
    // the written blocks carry 1/j! inside the polynomial factor:
    // -(1/4!)(...), (eta_0/3!)(...), (gamma_1 + eta_1/2)(...) = (2 gamma_1 + eta_1)/2! (...)
    let hand = [
        -1.0,
        eta[0],
        2.0 * g(1) + eta[1],
        eta[2] + 4.0 * g(2) - 2.0 * g(1) * eta[0],
        eta[3] + 6.0 * g(3) - g(1) * g(1) - 2.0 * eta[1] * g(1),
    ];
    let fam = ZetaFamily::new(table)?;
    let f = fam.log_deriv.mul(&fam.zeta_d1).mul(&fam.zeta_d1);
    let mut computed = [0.0; 5];
    for (slot, j) in computed.iter_mut().zip((0..5).rev()) {
        *slot = f.coeff(-(j as i64) - 1).ok_or(Error::InsufficientTruncation {
            op: "residue_main_term",
            needed: -1,
            available: f.trunc_order(),
        })?;
    }
    let mut matches = [false; 5];
    for i in 0..5 {
        matches[i] = (hand[i] - computed[i]).abs() <= tol * (1.0 + computed[i].abs());
    }
    Ok(HandExpansionCheck {
        hand,
        computed,
        matches,
    })
}
