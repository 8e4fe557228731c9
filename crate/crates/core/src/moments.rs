//! Moments of `Z` and `Z'` and their predicted main terms.
//!
//! Main terms are polynomials in `x = log(T / 2 pi)` multiplying `T`. Hall's
//! polynomials are built from `W_g(v) = e^-v int_0^{e^v} log^g u du`, which
//! satisfies `W_g = v^g - g W_{g-1}`.
//!
//! The discrete moment `M(T) = sum_{0 < gamma <= T} Z'(gamma)^2` is compared
//! with the sum of two blocks:
//!
//! * the b-block `(T / 24 pi) [x P_3(x) - sum_k p_k W_k(x)]`, the main term of
//!   `(1 / 2 pi) int_1^T log(t / 2 pi) Z'(t)^2 dt`;
//! * the c-block `(T / pi) [R_1 - R_2 + R_3 / 4](x)`, where `x R_i(log x)` are
//!   the residues at `s = 1` of `F_i(s) x^s / s` for the generating functions
//!   of `Lambda * D`, `D log` and `(1 * log) log^2`.
//!
//! Constants from the lower endpoint of the integrals are dropped.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{residue_log_coeffs, StieltjesTable, ZetaFamily};
use crate::quadrature::{adaptive, pairwise_sum, GaussLegendre};
use crate::special_fn::theta_prime_unchecked;
use crate::zeros::ZeroSet;
use crate::zeta_engine::ZetaEngine;

/// Highest `W_g` index supported.
pub const MAX_W_INDEX: usize = 6;

/// `normalization * T * sum_j coeffs[j] x^j` with `x = log(T / 2 pi)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MainTermPolynomial {
    /// Ascending powers of `x`.
    pub coeffs: Vec<f64>,
    pub normalization: f64,
}

impl MainTermPolynomial {
    pub fn new(coeffs: Vec<f64>, normalization: f64) -> Self {
        MainTermPolynomial {
            coeffs,
            normalization,
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap_or(&0.0)
    }

    /// The bare polynomial `sum_j coeffs[j] x^j`.
    pub fn eval_poly(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |a, c| a * x + c)
    }

    /// `normalization * T * poly(log(T / 2 pi))`.
    pub fn value(&self, t: f64) -> f64 {
        self.normalization * t * self.eval_poly((t / (2.0 * PI)).ln())
    }

    /// Coefficients with the normalization folded in.
    pub fn scaled_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c * self.normalization).collect()
    }
}

fn poly_add_scaled(acc: &mut Vec<f64>, p: &[f64], k: f64) {
    if acc.len() < p.len() {
        acc.resize(p.len(), 0.0);
    }
    for (a, c) in acc.iter_mut().zip(p) {
        *a += k * c;
    }
}

/// `W_g` as a polynomial in `v`.
pub fn w_poly(g: usize) -> Result<MainTermPolynomial> {
    if g > MAX_W_INDEX {
        return Err(Error::Domain {
            op: "w_poly",
            reason: format!("g = {g} > {MAX_W_INDEX}"),
        });
    }
    let mut w = vec![1.0];
    for k in 1..=g {
        let mut next = vec![0.0; k + 1];
        next[k] = 1.0;
        poly_add_scaled(&mut next, &w, -(k as f64));
        w = next;
    }
    Ok(MainTermPolynomial::new(w, 1.0))
}

/// Hall's `P_{2k+1}`, with normalization `1 / (4^k (2k + 1))` so that
/// `value(T)` is the predicted `int_0^T Z^(k)(t)^2 dt`.
///
/// `P_{2k+1} = W_{2k+1} + (4k + 2) sum_{h <= 2k} C(2k, h) (-2)^h gamma_h W_{2k-h}`.
pub fn hall_poly(k: usize, gammas: &StieltjesTable) -> Result<MainTermPolynomial> {
    if k > 2 {
        return Err(Error::Domain {
            op: "hall_poly",
            reason: format!("k = {k} not in 0..=2"),
        });
    }
    if gammas.h_max() < 2 * k {
        return Err(Error::InsufficientConstants {
            k,
            needed: 2 * k,
            available: gammas.h_max(),
        });
    }
    let mut p = w_poly(2 * k + 1)?.coeffs;
    let mut binom = 1.0;
    for h in 0..=2 * k {
        if h > 0 {
            binom *= (2 * k + 1 - h) as f64 / h as f64;
        }
        let c = (4 * k + 2) as f64 * binom * (-2.0f64).powi(h as i32) * gammas.gamma(h);
        poly_add_scaled(&mut p, &w_poly(2 * k - h)?.coeffs, c);
    }
    let norm = 1.0 / (4f64.powi(k as i32) * (2 * k + 1) as f64);
    Ok(MainTermPolynomial::new(p, norm))
}

/// `P_3` written out term by term, independent of the `W_g` route:
/// `x^3 + 3(2g0 - 1) x^2 - 6(2g0 + 4g1 - 1) x + 6(2g0 + 4g1 + 4g2 - 1)`.
pub fn p3_explicit(gammas: &StieltjesTable) -> Result<MainTermPolynomial> {
    if gammas.h_max() < 2 {
        return Err(Error::InsufficientConstants {
            k: 1,
            needed: 2,
            available: gammas.h_max(),
        });
    }
    let (g0, g1, g2) = (gammas.gamma(0), gammas.gamma(1), gammas.gamma(2));
    Ok(MainTermPolynomial::new(
        vec![
            6.0 * (2.0 * g0 + 4.0 * g1 + 4.0 * g2 - 1.0),
            -6.0 * (2.0 * g0 + 4.0 * g1 - 1.0),
            3.0 * (2.0 * g0 - 1.0),
            1.0,
        ],
        1.0 / 12.0,
    ))
}

/// One computed-versus-predicted comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub kind: String,
    pub t_max: f64,
    pub computed: f64,
    pub predicted: f64,
    pub residual: f64,
    pub envelope: f64,
    pub residual_over_envelope: f64,
    pub parts: BTreeMap<String, f64>,
}

impl MomentReport {
    fn new(kind: &str, t_max: f64, computed: f64, predicted: f64, envelope: f64) -> Self {
        let residual = computed - predicted;
        MomentReport {
            kind: kind.to_string(),
            t_max,
            computed,
            predicted,
            residual,
            envelope,
            residual_over_envelope: residual / envelope,
            parts: BTreeMap::new(),
        }
    }

    pub fn ratio(&self) -> f64 {
        self.computed / self.predicted
    }
}

/// Panels whose width follows the mean zero spacing `pi / theta'(t)`,
/// scaled by `fraction`.
fn zero_gap_panels(lo: f64, hi: f64, fraction: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut t = lo;
    while t < hi {
        let d = theta_prime_unchecked(t);
        let gap = if d > 0.0 { (PI / d).clamp(0.5, 4.0) } else { 1.0 };
        let w = gap * fraction;
        let mut next = t + w;
        if next > hi || hi - next < 0.1 * w {
            next = hi;
        }
        out.push((t, next));
        t = next;
    }
    out
}

fn integrate_panels<F>(panels: &[(f64, f64)], tol_per_unit: f64, op: &'static str, f: &F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let rule = GaussLegendre::new(16);
    let values: Vec<f64> = panels
        .par_iter()
        .map(|&(a, b)| adaptive(&rule, a, b, tol_per_unit * (b - a), 10, op, f).map(|r| r.value))
        .collect::<Result<_>>()?;
    Ok(pairwise_sum(&values))
}

/// `int_lo^hi Z^(k)(t)^2 dt` for `k` in `{0, 1}`.
pub fn moment_integral(k: usize, lo: f64, hi: f64, engine: &ZetaEngine) -> Result<f64> {
    if k > 1 {
        return Err(Error::Domain {
            op: "continuous_moment",
            reason: format!("k = {k} not in 0..=1"),
        });
    }
    if !(lo >= 1.0 && hi >= lo) {
        return Err(Error::Domain {
            op: "continuous_moment",
            reason: format!("interval [{lo}, {hi}]"),
        });
    }
    let f = |t: f64| -> Result<f64> {
        let v = if k == 0 {
            engine.hardy_z(t)?
        } else {
            engine.hardy(t)?.z_prime
        };
        Ok(v * v)
    };
    integrate_panels(&zero_gap_panels(lo, hi, 1.0), 1e-9, "continuous_moment", &f)
}

/// `int_1^T Z^(k)(t)^2 dt` against `T P_{2k+1}(x) / (4^k (2k+1))`.
///
/// The residual is scaled by `T^(3/4) log^(2k + 1/2) T`.
pub fn continuous_moment(
    k: usize,
    t_max: f64,
    gammas: &StieltjesTable,
    engine: &ZetaEngine,
) -> Result<MomentReport> {
    if !(100.0..=1e4).contains(&t_max) {
        return Err(Error::Domain {
            op: "continuous_moment",
            reason: format!("t_max = {t_max} not in [100, 1e4]"),
        });
    }
    let poly = hall_poly(k, gammas)?;
    let computed = moment_integral(k, 1.0, t_max, engine)?;
    let predicted = poly.value(t_max);
    let envelope = t_max.powf(0.75) * t_max.ln().powf(2.0 * k as f64 + 0.5);
    let mut r = MomentReport::new(&format!("continuous_k{k}"), t_max, computed, predicted, envelope);
    r.parts.insert("hall_main_term".into(), predicted);
    Ok(r)
}

/// Both sides of the log-weighted moment of `Z'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedMoment {
    pub t_max: f64,
    /// `(1/2pi) int_1^T log(t/2pi) Z'(t)^2 dt`.
    pub direct: f64,
    /// `(1/2pi) [log(T/2pi) I(T) - int_1^T I(t)/t dt]`, `I(t) = int_1^t Z'^2`.
    pub by_parts: f64,
    /// The b-block main term at `T`.
    pub predicted: f64,
}

/// The log-weighted moment computed directly and through integration by parts.
pub fn weighted_continuous_moment(
    t_max: f64,
    gammas: &StieltjesTable,
    engine: &ZetaEngine,
) -> Result<WeightedMoment> {
    if !(t_max > 1.0 && t_max <= 1e4) {
        return Err(Error::Domain {
            op: "weighted_continuous_moment",
            reason: format!("t_max = {t_max} not in (1, 1e4]"),
        });
    }
    let zp2 = |t: f64| -> Result<f64> {
        let v = engine.hardy(t)?.z_prime;
        Ok(v * v)
    };
    let weighted = |t: f64| -> Result<f64> { Ok((t / (2.0 * PI)).ln() * zp2(t)? / (2.0 * PI)) };
    let direct = integrate_panels(
        &zero_gap_panels(1.0, t_max, 1.0),
        1e-10,
        "weighted_continuous_moment",
        &weighted,
    )?;

    // fixed panels; I(t) at every node through the spectral cumulative matrix
    let rule = GaussLegendre::new(16);
    let cum = rule.cumulative_matrix();
    let panels = zero_gap_panels(1.0, t_max, 0.25);
    let node_values: Vec<Vec<f64>> = panels
        .par_iter()
        .map(|&(a, b)| rule.mapped_nodes(a, b).map(&zp2).collect::<Result<Vec<f64>>>())
        .collect::<Result<_>>()?;
    let mut running = 0.0;
    let mut inner = Vec::with_capacity(panels.len());
    for (&(a, b), f) in panels.iter().zip(&node_values) {
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for ((row, w), t) in cum.iter().zip(rule.weights()).zip(rule.mapped_nodes(a, b)) {
            let partial: f64 = row.iter().zip(f).map(|(s, v)| s * v).sum();
            acc += w * (running + half * partial) / t;
        }
        inner.push(half * acc);
        let whole: f64 = rule.weights().iter().zip(f).map(|(w, v)| w * v).sum();
        running += half * whole;
    }
    let l = (t_max / (2.0 * PI)).ln();
    let by_parts = (l * running - pairwise_sum(&inner)) / (2.0 * PI);
    let theorem = main_term_theorem(gammas)?;
    Ok(WeightedMoment {
        t_max,
        direct,
        by_parts,
        predicted: theorem.b_block.value(t_max),
    })
}

/// The assembled main term of the discrete moment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssembledMainTerm {
    /// `(1/24pi) [x P_3(x) - sum p_k W_k(x)]`.
    pub b_block: MainTermPolynomial,
    /// `(1/pi) [R_1 - R_2 + R_3/4](x)`.
    pub c_block: MainTermPolynomial,
    /// `a_i = b_i + c_i`, normalization 1.
    pub total: MainTermPolynomial,
    /// Residue polynomials `R_1, R_2, R_3` (coefficients of `x log^i x`).
    pub residues: BTreeMap<String, Vec<f64>>,
}

impl AssembledMainTerm {
    pub fn value(&self, t: f64) -> f64 {
        self.total.value(t)
    }

    /// `(1 / 24 pi) T log^4(T / 2 pi)` alone.
    pub fn leading_block(&self, t: f64) -> f64 {
        let x = (t / (2.0 * PI)).ln();
        t * x.powi(4) / (24.0 * PI)
    }

    /// `T x^j a_j` for `j = 4, 3, 2, 1, 0`.
    pub fn blocks(&self, t: f64) -> [f64; 5] {
        let x = (t / (2.0 * PI)).ln();
        let a = &self.total.coeffs;
        let mut out = [0.0; 5];
        for (i, j) in (0..5).rev().enumerate() {
            out[i] = t * a.get(j).copied().unwrap_or(0.0) * x.powi(j as i32);
        }
        out
    }
}

const ASSEMBLY_TOL: f64 = 1e-12;

/// Builds the b- and c-blocks and checks the two top coefficients:
/// `x^4` must be `1/(24 pi)` and `x^3` must be `(2 gamma_0 - 1)/(6 pi)`, split
/// as `(3 gamma_0 - 2)/(12 pi)` from the b-block and `gamma_0/(12 pi)` from
/// the c-block.
pub fn main_term_theorem(gammas: &StieltjesTable) -> Result<AssembledMainTerm> {
    let g0 = gammas.gamma(0);
    let p3 = hall_poly(1, gammas)?.coeffs;
    // x P_3(x) - sum_k p_k W_k(x)
    let mut b = vec![0.0; 5];
    for (k, c) in p3.iter().enumerate() {
        b[k + 1] += c;
        poly_add_scaled(&mut b, &w_poly(k)?.coeffs, -c);
    }
    let b_block = MainTermPolynomial::new(b, 1.0 / (24.0 * PI));

    let fam = ZetaFamily::new(gammas)?;
    let r1 = residue_log_coeffs(&fam.lambda_star_d())?;
    let r2 = residue_log_coeffs(&fam.d_log())?;
    let r3 = residue_log_coeffs(&fam.one_star_log_log2())?;
    let mut c = vec![0.0; 5];
    poly_add_scaled(&mut c, &r1, 1.0);
    poly_add_scaled(&mut c, &r2, -1.0);
    poly_add_scaled(&mut c, &r3, 0.25);
    c.truncate(5);
    let c_block = MainTermPolynomial::new(c, 1.0 / PI);

    let mut total = b_block.scaled_coeffs();
    poly_add_scaled(&mut total, &c_block.scaled_coeffs(), 1.0);
    let total = MainTermPolynomial::new(total, 1.0);

    let checks = [
        ("b-block log^3", b_block.scaled_coeffs()[3], (3.0 * g0 - 2.0) / (12.0 * PI)),
        ("c-block log^4", c_block.scaled_coeffs()[4], 0.0),
        ("c-block log^3", c_block.scaled_coeffs()[3], g0 / (12.0 * PI)),
        ("log^4", total.coeffs[4], 1.0 / (24.0 * PI)),
        ("log^3", total.coeffs[3], (2.0 * g0 - 1.0) / (6.0 * PI)),
    ];
    for (which, got, expected) in checks {
        if (got - expected).abs() > ASSEMBLY_TOL {
            return Err(Error::AssemblyInconsistency {
                which,
                got,
                expected,
            });
        }
    }
    let mut residues = BTreeMap::new();
    residues.insert("lambda_star_d".to_string(), r1);
    residues.insert("d_log".to_string(), r2);
    residues.insert("one_star_log_log2".to_string(), r3);
    Ok(AssembledMainTerm {
        b_block,
        c_block,
        total,
        residues,
    })
}

/// `sum Z'(gamma)^2` over the zero set against the assembled main term.
///
/// The residual is scaled by `T^(3/4) log^(7/2) T`.
pub fn discrete_moment(zero_set: &ZeroSet, gammas: &StieltjesTable) -> Result<MomentReport> {
    let terms: Vec<f64> = zero_set.zeros.iter().map(|z| z.z_prime * z.z_prime).collect();
    let computed = pairwise_sum(&terms);
    let t = zero_set.t_max;
    let theorem = main_term_theorem(gammas)?;
    let predicted = theorem.value(t);
    let envelope = t.powf(0.75) * t.ln().powf(3.5);
    let mut r = MomentReport::new("discrete", t, computed, predicted, envelope);
    let blocks = theorem.blocks(t);
    for (name, v) in ["block_log4", "block_log3", "block_log2", "block_log1", "block_log0"]
        .iter()
        .zip(blocks)
    {
        r.parts.insert(name.to_string(), v);
    }
    r.parts.insert("b_block".into(), theorem.b_block.value(t));
    r.parts.insert("c_block".into(), theorem.c_block.value(t));
    r.parts.insert("leading_block".into(), theorem.leading_block(t));
    r.parts.insert("zero_count".into(), zero_set.len() as f64);
    Ok(r)
}

/// `c_1, c_2, c_3` from residues and from a least-squares fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedC {
    /// Coefficients of `T x^2`, `T x`, `T`.
    pub analytic: [f64; 3],
    pub fitted: [f64; 3],
    /// Root-mean-square of the fit residual divided by `T`.
    pub rms: f64,
    pub points: usize,
}

/// Fits `M(T) - b(T) - (gamma_0 / 12 pi) T x^3 = T (c_1 x^2 + c_2 x + c_3)`
/// over the given heights.
pub fn fit_c_block(zero_set: &ZeroSet, t_grid: &[f64], gammas: &StieltjesTable) -> Result<FittedC> {
    if t_grid.len() < 3 {
        return Err(Error::InvalidConfig("the c-block fit needs at least three heights".into()));
    }
    let theorem = main_term_theorem(gammas)?;
    let c_scaled = theorem.c_block.scaled_coeffs();
    let g0 = gammas.gamma(0);
    let mut cumulative = Vec::with_capacity(zero_set.len());
    let mut acc = 0.0;
    for z in &zero_set.zeros {
        acc += z.z_prime * z.z_prime;
        cumulative.push((z.gamma, acc));
    }
    let m_at = |t: f64| -> f64 {
        let idx = cumulative.partition_point(|(g, _)| *g <= t);
        if idx == 0 {
            0.0
        } else {
            cumulative[idx - 1].1
        }
    };
    let n = t_grid.len();
    let mut a = DMatrix::zeros(n, 3);
    let mut y = DVector::zeros(n);
    for (i, &t) in t_grid.iter().enumerate() {
        if t > zero_set.t_max {
            return Err(Error::Domain {
                op: "fit_c_block",
                reason: format!("T = {t} beyond the scanned range {}", zero_set.t_max),
            });
        }
        let x = (t / (2.0 * PI)).ln();
        let rest = m_at(t) - theorem.b_block.value(t) - g0 / (12.0 * PI) * t * x.powi(3);
        a[(i, 0)] = x * x;
        a[(i, 1)] = x;
        a[(i, 2)] = 1.0;
        y[i] = rest / t;
    }
    let svd = a.clone().svd(true, true);
    let sol = svd
        .solve(&y, 1e-12)
        .map_err(|e| Error::InvalidConfig(format!("c-block fit: {e}")))?;
    let res = &a * &sol - &y;
    Ok(FittedC {
        analytic: [c_scaled[2], c_scaled[1], c_scaled[0]],
        fitted: [sol[0], sol[1], sol[2]],
        rms: (res.norm_squared() / n as f64).sqrt(),
        points: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::stieltjes_table;
    use crate::special_fn::PrecisionConfig;
    use crate::zeros::scan_zeros;

    #[test]
    fn w_polynomials() {
        assert_eq!(w_poly(0).unwrap().coeffs, vec![1.0]);
        assert_eq!(w_poly(1).unwrap().coeffs, vec![-1.0, 1.0]);
        assert_eq!(w_poly(3).unwrap().coeffs, vec![-6.0, 6.0, -3.0, 1.0]);
        assert!(w_poly(7).is_err());
    }

    #[test]
    fn w_matches_defining_integral() {
        // oracle: e^-v int_0^{e^v} log^g u du with u = e^y, i.e.
        // int_{-inf}^{v} y^g e^{y - v} dy, on a truncated range
        let rule = GaussLegendre::new(32);
        for g in 0..=MAX_W_INDEX {
            let v = 1.7;
            let mut acc = 0.0;
            let mut hi = v;
            while hi > v - 80.0 {
                let lo = hi - 2.0;
                acc += rule.integrate(lo, hi, |y| y.powi(g as i32) * (y - v).exp());
                hi = lo;
            }
            let w = w_poly(g).unwrap().eval_poly(v);
            assert!((acc - w).abs() < 1e-10 * (1.0 + w.abs()), "g = {g}");
        }
    }

    #[test]
    fn hall_polynomials() {
        let g = stieltjes_table();
        let p1 = hall_poly(0, g).unwrap();
        assert!((p1.coeffs[0] - (2.0 * g.gamma(0) - 1.0)).abs() < 1e-15);
        assert_eq!(p1.leading(), 1.0);
        for k in 0..=2 {
            let p = hall_poly(k, g).unwrap();
            assert_eq!(p.degree(), 2 * k + 1);
            assert_eq!(p.leading(), 1.0);
        }
        let a = hall_poly(1, g).unwrap();
        let b = p3_explicit(g).unwrap();
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            assert!((x - y).abs() <= 1e-12);
        }
        assert_eq!(a.normalization, b.normalization);
        let short = StieltjesTable::from_values(vec![0.5, 0.1]);
        assert!(matches!(
            hall_poly(1, &short),
            Err(Error::InsufficientConstants { .. })
        ));
    }

    #[test]
    fn theorem_top_coefficients() {
        let g = stieltjes_table();
        let th = main_term_theorem(g).unwrap();
        assert!((th.total.coeffs[4] - 1.0 / (24.0 * PI)).abs() < 1e-12);
        let want = (2.0 * g.gamma(0) - 1.0) / (6.0 * PI);
        assert!((th.total.coeffs[3] - want).abs() < 1e-12);
    }

    #[test]
    fn theorem_with_vanishing_constants() {
        // every gamma_h = 0: P_3 = W_3 and the b-block is
        // (1/24pi)[x W_3 - (W_3 - 6 W_2 + 6 W_1 - 6 W_0)]
        //   = (1/24pi)[x^4 - 4x^3 + 12x^2 - 24x + 24]
        let zeros = StieltjesTable::from_values(vec![0.0; 9]);
        let th = main_term_theorem(&zeros).unwrap();
        let want = [24.0, -24.0, 12.0, -4.0, 1.0];
        for (x, y) in th.b_block.coeffs.iter().zip(want) {
            assert!((x - y).abs() < 1e-12);
        }
        // and int_1^T W-polynomial algebra agrees with a numeric derivative:
        // d/dT [T W_k(log T/2pi)] = log^k(T/2pi)
        let t = 321.0;
        let h = 1e-3;
        for k in 0..=4 {
            let w = w_poly(k).unwrap();
            let f = |t: f64| t * w.eval_poly((t / (2.0 * PI)).ln());
            let d = (f(t + h) - f(t - h)) / (2.0 * h);
            assert!((d - (t / (2.0 * PI)).ln().powi(k as i32)).abs() < 1e-6);
        }
    }

    #[test]
    fn continuous_moment_additivity() {
        let e = ZetaEngine::default();
        let whole = moment_integral(0, 1.0, 300.0, &e).unwrap();
        let left = moment_integral(0, 1.0, 170.0, &e).unwrap();
        let right = moment_integral(0, 170.0, 300.0, &e).unwrap();
        assert!((whole - left - right).abs() < 1e-8 * whole);
    }

    #[test]
    fn continuous_moment_against_trapezoid_oracle() {
        let e = ZetaEngine::default();
        let (a, b) = (100.0, 110.0);
        let n = 20_000;
        let h = (b - a) / n as f64;
        let mut acc = 0.0;
        for j in 0..=n {
            let z = e.hardy_z(a + j as f64 * h).unwrap();
            let w = if j == 0 || j == n { 0.5 } else { 1.0 };
            acc += w * z * z;
        }
        let got = moment_integral(0, a, b, &e).unwrap();
        assert!((got - acc * h).abs() < 1e-6 * got);
    }

    #[test]
    fn weighted_moment_near_two_pi_is_small() {
        // log(t / 2pi) < 0 on (1, 2pi), so the value is small and negative
        let g = stieltjes_table();
        let e = ZetaEngine::default();
        let w = weighted_continuous_moment(2.0 * PI, g, &e).unwrap();
        assert!(w.direct < 0.0 && w.direct.abs() < 1.0, "{w:?}");
    }

    #[test]
    fn integration_by_parts_agrees() {
        let g = stieltjes_table();
        let e = ZetaEngine::default();
        let w = weighted_continuous_moment(500.0, g, &e).unwrap();
        assert!((w.direct - w.by_parts).abs() <= 1e-5 * w.direct.abs(), "{w:?}");
    }

    #[test]
    fn discrete_moment_at_100() {
        let g = stieltjes_table();
        let zs = scan_zeros(100.0, &PrecisionConfig::default()).unwrap();
        let r = discrete_moment(&zs, g).unwrap();
        let e = ZetaEngine::default();
        let oracle: f64 = zs
            .zeros
            .iter()
            .map(|z| {
                e.zeta(num_complex::Complex64::new(0.5, z.gamma), 1)
                    .unwrap()
                    .value
                    .norm_sqr()
            })
            .sum();
        assert!((r.computed - oracle).abs() <= 1e-6 * oracle);
        assert_eq!(r.residual, r.computed - r.predicted);
        let empty = ZeroSet {
            t_max: 14.0,
            zeros: vec![],
            count_expected: 0.0,
            exact_count: 0,
            flagged: vec![],
        };
        assert_eq!(discrete_moment(&empty, g).unwrap().computed, 0.0);
    }
}
