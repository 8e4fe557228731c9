//! Acceptance suite. Prints one PASS/FAIL line per criterion and fails if
//! any criterion fails. Run with
//! `cargo test -p hardyz-cli --test acceptance -- --nocapture`.

use std::f64::consts::PI;
use std::process::Command;

use hardyz::arithmetic::{build_tables, CoeffKind};
use hardyz::laurent::{eta_coeffs, residue_main_term, ZetaFamily};
use hardyz::moments::{continuous_moment, discrete_moment, hall_poly, main_term_theorem, p3_explicit};
use hardyz::{scan_zeros, stieltjes_table, ComplexValue, PrecisionConfig, ZetaEngine};

// Pinned tolerances.
const LEMMA1_REL: f64 = 1e-6;
const HALL_RATIO_BAND: f64 = 0.05;
/// Bound on `|residual| / (T^(3/4) log^(2k+1/2) T)` for the continuous moments.
const HALL_ENVELOPE_C: f64 = 0.25;
/// Largest allowed growth of the scaled residual from the earlier heights to the last.
const HALL_GROWTH: f64 = 2.0;
const P3_TOL: f64 = 1e-12;
const ASSEMBLY_TOL: f64 = 1e-12;
const DISCRETE_LAST: f64 = 0.25;
const PERRON_REL: f64 = 0.05;
const ETA_TOL: f64 = 1e-10;
const CONTOUR_REL: f64 = 1e-6;
/// Frozen constant in `|integral - sum| <= C T^(a - 1/2) log^m T`.
const GONEK_C: f64 = 0.25;

struct Outcome {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(id: u32, name: &'static str, pass: bool, detail: String) -> Outcome {
    Outcome {
        id,
        name,
        pass,
        detail,
    }
}

fn engine() -> ZetaEngine {
    ZetaEngine::new(PrecisionConfig::default()).unwrap()
}

fn lemma1() -> Outcome {
    let eng = engine();
    let zs = scan_zeros(240.0, &PrecisionConfig::default()).unwrap();
    let first: Vec<_> = zs.zeros.iter().take(100).collect();
    let mut worst = 0.0f64;
    for z in &first {
        let d = eng.zeta(ComplexValue::new(0.5, z.gamma), 1).unwrap().value.norm();
        worst = worst.max((z.z_prime.abs() - d).abs() / d);
    }
    outcome(
        1,
        "|Z'(gamma)| = |zeta'(rho)| over the first 100 zeros",
        first.len() == 100 && worst <= LEMMA1_REL,
        format!("{} zeros, max rel diff {worst:.2e} (tol {LEMMA1_REL:e})", first.len()),
    )
}

fn census() -> Outcome {
    let cfg = PrecisionConfig::default();
    let a = scan_zeros(100.0, &cfg).unwrap();
    let b = scan_zeros(1000.0, &cfg).unwrap();
    let ok = a.len() == 29
        && b.len() == 649
        && a.exact_count == a.len() as i64
        && b.exact_count == b.len() as i64;
    outcome(
        2,
        "zero census at 100 and 1000",
        ok,
        format!(
            "found {} / {}, argument-principle counts {} / {}",
            a.len(),
            b.len(),
            a.exact_count,
            b.exact_count
        ),
    )
}

fn hall(k: usize) -> (bool, String) {
    let eng = engine();
    let g = stieltjes_table();
    let reports: Vec<_> = [500.0, 1000.0, 2000.0]
        .iter()
        .map(|&t| continuous_moment(k, t, g, &eng).unwrap())
        .collect();
    let ratio = reports[2].ratio();
    let scaled: Vec<f64> = reports.iter().map(|r| r.residual_over_envelope.abs()).collect();
    let earlier = scaled[0].max(scaled[1]);
    let ok = (ratio - 1.0).abs() <= HALL_RATIO_BAND
        && scaled.iter().all(|&s| s <= HALL_ENVELOPE_C)
        && scaled[2] <= HALL_GROWTH * earlier;
    (
        ok,
        format!(
            "ratio(2000) {ratio:.6}, |residual|/envelope {:.3e} {:.3e} {:.3e} (C {HALL_ENVELOPE_C}, growth {HALL_GROWTH})",
            scaled[0], scaled[1], scaled[2]
        ),
    )
}

fn hall_k0() -> Outcome {
    let (ok, detail) = hall(0);
    outcome(3, "continuous moment k = 0 against P_1", ok, detail)
}

fn hall_k1() -> Outcome {
    let (ok, mut detail) = hall(1);
    let g = stieltjes_table();
    let a = hall_poly(1, g).unwrap();
    let b = p3_explicit(g).unwrap();
    let coeff_err = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let norm_ok = (a.normalization - 1.0 / 12.0).abs() <= P3_TOL;
    detail.push_str(&format!(", P_3 coefficient diff {coeff_err:.1e}"));
    outcome(
        4,
        "continuous moment k = 1 against P_3/12",
        ok && norm_ok && coeff_err <= P3_TOL && a.coeffs.len() == 4,
        detail,
    )
}

fn assembly() -> Outcome {
    let g0 = stieltjes_table().gamma(0);
    let m = main_term_theorem(stieltjes_table()).unwrap();
    let b = m.b_block.scaled_coeffs();
    let c = m.c_block.scaled_coeffs();
    let a = &m.total.coeffs;
    let checks = [
        (a[4], 1.0 / (24.0 * PI)),
        (a[3], (2.0 * g0 - 1.0) / (6.0 * PI)),
        (b[3], (3.0 * g0 - 2.0) / (12.0 * PI)),
        (c[3], g0 / (12.0 * PI)),
    ];
    let worst = checks.iter().map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    outcome(
        5,
        "assembled log^4 and log^3 coefficients",
        worst <= ASSEMBLY_TOL,
        format!("a4 {:.15}, a3 {:.15}, max diff {worst:.1e}", a[4], a[3]),
    )
}

fn discrete_trend() -> Outcome {
    let eng = engine();
    let g = stieltjes_table();
    let grid = [500.0, 1000.0, 2000.0, 5000.0];
    let full = scan_zeros(5000.0, &PrecisionConfig::default()).unwrap();
    let mut dev = Vec::new();
    let mut leading_worse = true;
    for &t in &grid {
        let set = full.truncate(t, &eng).unwrap();
        let r = discrete_moment(&set, g).unwrap();
        let full_dev = (r.computed / r.predicted - 1.0).abs();
        let lead_dev = (r.computed / r.parts["leading_block"] - 1.0).abs();
        leading_worse &= lead_dev > full_dev;
        dev.push(full_dev);
    }
    let monotone = dev.windows(2).all(|w| w[1] <= w[0]);
    outcome(
        6,
        "discrete moment trend over 500, 1000, 2000, 5000",
        monotone && dev[3] <= DISCRETE_LAST && leading_worse,
        format!(
            "|M/pred - 1| = {:.2e} {:.2e} {:.2e} {:.2e}, leading block worse everywhere: {leading_worse}",
            dev[0], dev[1], dev[2], dev[3]
        ),
    )
}

fn perron() -> Outcome {
    let fam = ZetaFamily::new(stieltjes_table()).unwrap();
    let f = fam.lambda_star_d();
    let table = build_tables(1_000_000).unwrap();
    let rel = |x: f64| {
        let s = table.conv_sum_ld(x).unwrap();
        let m = residue_main_term(&f, x).unwrap().value;
        ((s - m) / m).abs()
    };
    let (r4, r6) = (rel(1e4), rel(1e6));
    outcome(
        7,
        "sum of Lambda*D against its residue",
        r4 <= PERRON_REL && r6 < r4,
        format!("rel err {r4:.2e} at 1e4, {r6:.2e} at 1e6 (tol {PERRON_REL})"),
    )
}

/// `(1/2 pi i) oint F(s) x^s / s ds` on `|s - 1| = 1/2`, with `F` from the
/// zeta jet rather than the truncated series.
fn contour(which: usize, x: f64, eng: &ZetaEngine) -> f64 {
    let m = 256;
    let r = 0.5;
    let mut acc = ComplexValue::new(0.0, 0.0);
    for j in 0..m {
        let u = ComplexValue::from_polar(r, 2.0 * PI * j as f64 / m as f64);
        let s = u + 1.0;
        let v = eng.jet(s, 3).unwrap().values;
        let f = match which {
            0 => -(v[1] / v[0]) * v[1] * v[1],
            1 => -2.0 * v[1] * v[2],
            _ => -(3.0 * v[1] * v[2] + v[0] * v[3]),
        };
        acc += f * (s * x.ln()).exp() / s * u;
    }
    acc.re / m as f64
}

fn laurent() -> Outcome {
    let g = stieltjes_table();
    let eta0 = eta_coeffs(0, g).unwrap()[0];
    let eta_err = (eta0 - g.gamma(0)).abs();
    let fam = ZetaFamily::new(g).unwrap();
    let eng = engine();
    let mut worst = 0.0f64;
    for (i, f) in [fam.lambda_star_d(), fam.d_log(), fam.one_star_log_log2()].iter().enumerate() {
        for &x in &[100.0, 1e4] {
            let exact = residue_main_term(f, x).unwrap().value;
            worst = worst.max((contour(i, x, &eng) - exact).abs() / exact.abs());
        }
    }
    outcome(
        8,
        "Laurent engine: eta_0 and residues against contour integrals",
        eta_err <= ETA_TOL && worst <= CONTOUR_REL,
        format!("|eta_0 - gamma_0| {eta_err:.1e}, max contour rel diff {worst:.2e}"),
    )
}

fn gonek() -> Outcome {
    let eng = engine();
    let table = build_tables(100).unwrap();
    let mut worst = 0.0f64;
    let mut cells = Vec::new();
    for m in [0u32, 1] {
        for t in [100.0, 200.0, 400.0] {
            let c = table
                .gonek_lemma_check(9.0 / 8.0, m, t, CoeffKind::LambdaStarD, &eng)
                .unwrap();
            let ratio = c.residual / c.envelope;
            worst = worst.max(ratio);
            cells.push(format!("{ratio:.3}"));
        }
    }
    outcome(
        9,
        "integral against sum for Lambda*D at a = 9/8",
        worst <= GONEK_C,
        format!("residual/envelope {} (C {GONEK_C})", cells.join(" ")),
    )
}

fn determinism() -> Outcome {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_hardyz"))
            .args(["compare", "--t-grid", "500,1000,2000,5000", "--threads", threads])
            .env_remove("HARDYZ_CACHE_DIR")
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let a = run("1");
    let b = run("8");
    outcome(
        10,
        "compare is byte-identical across thread counts",
        !a.is_empty() && a == b,
        format!("{} bytes vs {} bytes", a.len(), b.len()),
    )
}

#[test]
fn acceptance() {
    let results = [
        lemma1(),
        census(),
        hall_k0(),
        hall_k1(),
        assembly(),
        discrete_trend(),
        perron(),
        laurent(),
        gonek(),
        determinism(),
    ];
    for r in &results {
        println!(
            "criterion {:>2} {}: {} ({})",
            r.id,
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        );
    }
    let failed: Vec<u32> = results.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
