//! Zeros of `Z(t)` on `(1, t_max]`.
//!
//! The range is cut into blocks of fixed length. Each block is sampled on a
//! grid of step `min(0.5, pi / theta'(t))`, and its sign changes are compared
//! with the exact zero count `N(b) - N(a)`, where
//! `N(T) = theta(T)/pi + 1 + S(T)` and `S(T)` comes from tracking
//! `arg zeta(sigma + iT)` from `sigma = 3` to `1/2`. Blocks whose counts
//! disagree get their grid refined by 4, at most three times. Every sign change
//! is then narrowed with Illinois regula falsi.
//!
//! Blocks are independent, so they are scanned in parallel and concatenated in
//! order; the result does not depend on the thread count.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special_fn::{theta_prime_unchecked, theta_unchecked, PrecisionConfig};
use crate::zeta_engine::ZetaEngine;

/// Width of the blocks checked against the exact count.
pub const BLOCK_LEN: f64 = 32.0;
/// Final bracket width guaranteed for every record.
pub const BRACKET_WIDTH: f64 = 1e-9;
/// `|Z'(gamma)|` below this is reported as a possible multiple zero.
pub const SIMPLICITY_FLAG: f64 = 1e-12;
const MAX_SUBDIVISION_LEVELS: u32 = 3;
const SCAN_START: f64 = 1.0;

/// One zero of `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub gamma: f64,
    pub bracket: (f64, f64),
    pub z_prime: f64,
    pub refine_iters: u32,
}

/// All zeros found up to `t_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub t_max: f64,
    pub zeros: Vec<ZeroRecord>,
    /// `theta(t_max)/pi + 1`.
    pub count_expected: f64,
    /// `N(t_max)` including `S(t_max)`.
    pub exact_count: i64,
    /// Ordinates whose `|Z'|` fell below [`SIMPLICITY_FLAG`].
    pub flagged: Vec<f64>,
}

impl ZeroSet {
    /// The zeros with `gamma <= t`, with counts recomputed for `t`.
    pub fn truncate(&self, t: f64, engine: &ZetaEngine) -> Result<ZeroSet> {
        if t > self.t_max {
            return Err(Error::Domain {
                op: "scan_zeros",
                reason: format!("cannot truncate a scan up to {} at {t}", self.t_max),
            });
        }
        let zeros: Vec<ZeroRecord> = self.zeros.iter().copied().filter(|z| z.gamma <= t).collect();
        let flagged = self.flagged.iter().copied().filter(|g| *g <= t).collect();
        Ok(ZeroSet {
            t_max: t,
            count_expected: count_expected(t)?,
            exact_count: exact_count(t, engine)?,
            zeros,
            flagged,
        })
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn ordinates(&self) -> Vec<f64> {
        self.zeros.iter().map(|z| z.gamma).collect()
    }
}

/// Knobs that do not change the mathematical result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Offset of the sampling grid inside each block, as a fraction of a cell.
    pub grid_phase: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { grid_phase: 0.0 }
    }
}

/// Riemann–von Mangoldt smooth count `theta(t)/pi + 1`.
pub fn count_expected(t: f64) -> Result<f64> {
    if !(t >= 10.0) {
        return Err(Error::Domain {
            op: "count_expected",
            reason: format!("t = {t} < 10"),
        });
    }
    Ok(theta_unchecked(t) / PI + 1.0)
}

/// `S(t) = arg zeta(1/2 + it) / pi`, the argument taken by continuous
/// variation along `sigma + it`, `sigma` from 3 down to 1/2.
pub fn s_of_t(t: f64, engine: &ZetaEngine) -> Result<f64> {
    let z_at = |sigma: f64| -> Result<Complex64> {
        Ok(engine.jet(Complex64::new(sigma, t), 0)?.values[0])
    };
    let mut sigma = 3.0;
    let mut prev = z_at(sigma)?;
    let mut arg = prev.arg();
    let mut h: f64 = 0.05;
    while sigma > 0.5 {
        let step = h.min(sigma - 0.5);
        let next_sigma = if sigma - step - 0.5 < 1e-15 { 0.5 } else { sigma - step };
        let next = z_at(next_sigma)?;
        let d = (next / prev).arg();
        if d.abs() > PI / 4.0 && step > 1e-6 {
            h = 0.5 * step;
            continue;
        }
        arg += d;
        sigma = next_sigma;
        prev = next;
        if d.abs() < PI / 16.0 {
            h = (2.0 * h).min(0.1);
        }
    }
    Ok(arg / PI)
}

/// Exact `N(t)` from `theta` and `S`. `t` must not be an ordinate.
pub fn exact_count(t: f64, engine: &ZetaEngine) -> Result<i64> {
    if !(t >= SCAN_START) {
        return Err(Error::Domain {
            op: "exact_count",
            reason: format!("t = {t} < {SCAN_START}"),
        });
    }
    let n = theta_unchecked(t) / PI + 1.0 + s_of_t(t, engine)?;
    let r = n.round();
    if (n - r).abs() > 0.1 {
        return Err(Error::AccuracyNotReached {
            op: "exact_count",
            estimate: (n - r).abs(),
            target: 0.1,
        });
    }
    Ok(r as i64)
}

fn grid_step(t: f64) -> f64 {
    let d = theta_prime_unchecked(t);
    if d > 0.0 {
        (PI / d).min(0.5)
    } else {
        0.5
    }
}

struct BlockScan {
    zeros: Vec<ZeroRecord>,
    flagged: Vec<f64>,
}

fn sample(engine: &ZetaEngine, a: f64, b: f64, cells: usize, phase: f64) -> Result<Vec<(f64, f64)>> {
    let h = (b - a) / cells as f64;
    let mut pts = Vec::with_capacity(cells + 2);
    pts.push(a);
    for j in 0..cells {
        let t = a + (j as f64 + phase) * h;
        if t > a && t < b {
            pts.push(t);
        }
    }
    pts.push(b);
    pts.dedup();
    pts.into_iter()
        .map(|t| Ok((t, engine.hardy_z(t)?)))
        .collect()
}

fn sign_changes(samples: &[(f64, f64)]) -> Vec<(f64, f64, f64, f64)> {
    samples
        .windows(2)
        .filter(|w| w[0].1 * w[1].1 < 0.0 || (w[1].1 == 0.0 && w[0].1 != 0.0))
        .map(|w| (w[0].0, w[0].1, w[1].0, w[1].1))
        .collect()
}

fn scan_block(
    engine: &ZetaEngine,
    a: f64,
    b: f64,
    expected: i64,
    phase: f64,
) -> Result<BlockScan> {
    let base_cells = ((b - a) / grid_step(b)).ceil().max(1.0) as usize;
    let mut brackets = Vec::new();
    for level in 0..=MAX_SUBDIVISION_LEVELS {
        let cells = base_cells * 4usize.pow(level);
        let samples = sample(engine, a, b, cells, phase)?;
        brackets = sign_changes(&samples);
        if brackets.len() as i64 == expected {
            break;
        }
    }
    let mut zeros = Vec::with_capacity(brackets.len());
    let mut flagged = Vec::new();
    for (lo, flo, hi, fhi) in brackets {
        let rec = refine(engine, lo, flo, hi, fhi)?;
        if rec.z_prime.abs() < SIMPLICITY_FLAG {
            flagged.push(rec.gamma);
        }
        zeros.push(rec);
    }
    Ok(BlockScan { zeros, flagged })
}

/// Illinois regula falsi on a sign-change bracket.
fn refine(engine: &ZetaEngine, mut lo: f64, mut flo: f64, mut hi: f64, mut fhi: f64) -> Result<ZeroRecord> {
    let tol = (4.0 * f64::EPSILON * hi.abs()).max(1e-11);
    let mut iters = 0u32;
    let mut side = 0i8;
    if fhi == 0.0 {
        lo = hi;
        flo = 0.0;
    }
    while hi - lo > tol && flo != 0.0 && iters < 200 {
        iters += 1;
        let mut x = (lo * fhi - hi * flo) / (fhi - flo);
        // plain bisection every few steps keeps the bracket shrinking
        if !(x > lo && x < hi) || iters % 8 == 0 {
            x = 0.5 * (lo + hi);
        }
        let fx = engine.hardy_z(x)?;
        if fx == 0.0 {
            lo = x;
            hi = x;
            break;
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
    }
    // endpoints carry halved values after Illinois steps; re-evaluate
    let zl = engine.hardy_z(lo)?.abs();
    let zh = if hi == lo { zl } else { engine.hardy_z(hi)?.abs() };
    let gamma = if zl <= zh { lo } else { hi };
    let z_prime = engine.hardy(gamma)?.z_prime;
    debug_assert!(hi - lo <= BRACKET_WIDTH);
    Ok(ZeroRecord {
        gamma,
        bracket: (lo, hi),
        z_prime,
        refine_iters: iters,
    })
}

/// Scans `(1, t_max]` for zeros of `Z(t)`.
pub fn scan_zeros(t_max: f64, config: &PrecisionConfig) -> Result<ZeroSet> {
    scan_zeros_with(t_max, config, ScanOptions::default())
}

/// [`scan_zeros`] with explicit grid options.
pub fn scan_zeros_with(t_max: f64, config: &PrecisionConfig, opts: ScanOptions) -> Result<ZeroSet> {
    if !(10.0..=1e5).contains(&t_max) {
        return Err(Error::Domain {
            op: "scan_zeros",
            reason: format!("t_max = {t_max} not in [10, 1e5]"),
        });
    }
    if !(0.0..1.0).contains(&opts.grid_phase) {
        return Err(Error::InvalidConfig(format!(
            "grid_phase = {} not in [0, 1)",
            opts.grid_phase
        )));
    }
    let engine = ZetaEngine::new(*config)?;
    let mut edges = vec![SCAN_START];
    let mut e = SCAN_START + BLOCK_LEN;
    while e < t_max {
        edges.push(e);
        e += BLOCK_LEN;
    }
    edges.push(t_max);
    // a grid edge sitting on an ordinate would make N undefined; nudge it
    for edge in edges.iter_mut().skip(1) {
        if engine.hardy_z(*edge)?.abs() < 1e-6 {
            *edge -= 1e-4;
        }
    }
    let counts: Vec<i64> = edges
        .par_iter()
        .map(|&t| exact_count(t, &engine))
        .collect::<Result<_>>()?;
    let blocks: Vec<BlockScan> = (0..edges.len() - 1)
        .into_par_iter()
        .map(|i| {
            scan_block(
                &engine,
                edges[i],
                edges[i + 1],
                counts[i + 1] - counts[i],
                opts.grid_phase,
            )
        })
        .collect::<Result<_>>()?;

    let mut zeros = Vec::new();
    let mut flagged = Vec::new();
    for b in blocks {
        zeros.extend(b.zeros);
        flagged.extend(b.flagged);
    }
    // the last edge may have been nudged below t_max; pick up a zero in the gap
    let last = *edges.last().unwrap_or(&t_max);
    if last < t_max {
        let zl = engine.hardy_z(last)?;
        let zt = engine.hardy_z(t_max)?;
        if zl * zt < 0.0 {
            zeros.push(refine(&engine, last, zl, t_max, zt)?);
        }
    }
    let expected = count_expected(t_max)?;
    let exact = counts[counts.len() - 1] - counts[0];
    if (zeros.len() as i64 - expected.round() as i64).abs() > 2 {
        return Err(Error::CountMismatch {
            t_max,
            found: zeros.len(),
            expected: expected.round() as i64,
        });
    }
    Ok(ZeroSet {
        t_max,
        zeros,
        count_expected: expected,
        exact_count: exact,
        flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scan(t: f64) -> ZeroSet {
        scan_zeros(t, &PrecisionConfig::default()).unwrap()
    }

    // Oracle: plain sign-change census on a uniform fine grid, no counting
    // formula involved.
    fn naive_sign_changes(a: f64, b: f64, h: f64) -> usize {
        let e = ZetaEngine::default();
        let n = ((b - a) / h).ceil() as usize;
        let mut prev = e.hardy_z(a).unwrap();
        let mut count = 0;
        for j in 1..=n {
            let t = (a + j as f64 * h).min(b);
            let z = e.hardy_z(t).unwrap();
            if z * prev < 0.0 {
                count += 1;
            }
            prev = z;
        }
        count
    }

    #[test]
    fn census_up_to_100() {
        let z = scan(100.0);
        assert_eq!(z.len(), 29);
        assert_eq!(z.exact_count, 29);
        assert_eq!(naive_sign_changes(1.0, 100.0, 0.05), 29);
        assert!((z.zeros[0].gamma - 14.134_725_141_734_694).abs() < 1e-9);
        assert!((z.zeros[28].gamma - 98.831_194_218_193_69).abs() < 1e-8);
    }

    #[test]
    fn census_up_to_1000() {
        let z = scan(1000.0);
        assert_eq!(z.len(), 649);
        assert_eq!(z.exact_count, 649);
        assert!(z.flagged.is_empty());
    }

    #[test]
    fn nothing_below_the_first_ordinate() {
        let z = scan(14.0);
        assert!(z.is_empty());
        assert_eq!(z.exact_count, 0);
    }

    #[test]
    fn records_are_sorted_tight_and_alternating() {
        let z = scan(300.0);
        let e = ZetaEngine::default();
        for w in z.zeros.windows(2) {
            assert!(w[0].gamma < w[1].gamma);
            assert!(w[0].z_prime.signum() != w[1].z_prime.signum());
        }
        for r in &z.zeros {
            assert!(r.bracket.1 - r.bracket.0 <= BRACKET_WIDTH);
            assert!(r.bracket.0 <= r.gamma && r.gamma <= r.bracket.1);
            assert!(e.hardy_z(r.gamma).unwrap().abs() <= 1e-8);
        }
    }

    #[test]
    fn grid_phase_does_not_change_ordinates() {
        let cfg = PrecisionConfig::default();
        let a = scan_zeros_with(400.0, &cfg, ScanOptions { grid_phase: 0.0 }).unwrap();
        let b = scan_zeros_with(400.0, &cfg, ScanOptions { grid_phase: 0.37 }).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.zeros.iter().zip(&b.zeros) {
            assert!((x.gamma - y.gamma).abs() <= 1e-9);
        }
    }

    #[test]
    fn count_expected_values() {
        // oracle: asymptotic theta(t) = t/2 log(t/2 pi) - t/2 - pi/8 + 1/(48t) + 7/(5760 t^3)
        let t = 100.0f64;
        let theta = t / 2.0 * (t / (2.0 * PI)).ln() - t / 2.0 - PI / 8.0
            + 1.0 / (48.0 * t)
            + 7.0 / (5760.0 * t.powi(3));
        let c = count_expected(100.0).unwrap();
        assert!((c - (theta / PI + 1.0)).abs() < 1e-9, "{c}");
        assert!((c - 29.0024).abs() < 1e-4);
        let t0 = 2.0 * PI * std::f64::consts::E;
        let c0 = count_expected(t0).unwrap();
        assert!((c0 - 1.0 - theta_unchecked(t0) / PI).abs() < 1e-15);
        assert!(count_expected(20.0).unwrap() < count_expected(20.5).unwrap());
        assert!(count_expected(5.0).is_err());
    }

    #[test]
    fn s_of_t_is_small() {
        let e = ZetaEngine::default();
        for t in [50.0, 123.4, 777.7] {
            assert!(s_of_t(t, &e).unwrap().abs() < 1.5);
        }
    }

    #[test]
    fn truncation_keeps_prefix() {
        let z = scan(200.0);
        let e = ZetaEngine::default();
        let t = z.truncate(100.0, &e).unwrap();
        assert_eq!(t.len(), 29);
        assert_eq!(t.exact_count, 29);
        assert!(z.truncate(300.0, &e).is_err());
    }

    #[test]
    fn rejects_out_of_range() {
        let cfg = PrecisionConfig::default();
        assert!(scan_zeros(5.0, &cfg).is_err());
        assert!(scan_zeros(2e5, &cfg).is_err());
    }
}
