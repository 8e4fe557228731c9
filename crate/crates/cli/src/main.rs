mod cache;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hardyz::arithmetic::{build_tables, WeightKind};
use hardyz::laurent::{eta_coeffs, hand_expansion_check, residue_main_term, stieltjes, ZetaFamily};
use hardyz::moments::{
    continuous_moment, discrete_moment, fit_c_block, hall_poly, main_term_theorem,
    weighted_continuous_moment, FittedC, MomentReport, AssembledMainTerm,
};
use hardyz::{stieltjes_table, Error, PrecisionConfig, ZeroSet, ZetaEngine};

use output::{csv, emit, f17, json, Header, WriteResult};

#[derive(Debug, Parser)]
#[command(name = "hardyz", version = output::version(), about = "Zeros and derivative moments of Hardy's Z-function")]
struct RunConfig {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for cached zero scans.
    #[arg(long, env = "HARDYZ_CACHE_DIR", global = true)]
    cache: Option<PathBuf>,
    /// Absolute tolerance for zeta evaluations.
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    /// Relative tolerance.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Maximum number of series correction terms.
    #[arg(long, global = true)]
    max_terms: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
enum SumKind {
    /// sum_{mn <= x} Lambda(m) D(n)
    LambdaStarD,
    /// sum_{n <= x} D(n) log n
    DLogN,
    /// sum_{n <= x} (1 * log)(n) log^2 n
    OneStarLogLog2N,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the zeros of Z(t) up to --t-max.
    Zeros {
        #[arg(long)]
        t_max: f64,
    },
    /// Discrete moment sum Z'(gamma)^2 against the assembled main term.
    Dmoment {
        #[arg(long)]
        t_max: f64,
    },
    /// Continuous moment of Z^(k) against Hall's main term.
    Cmoment {
        #[arg(long)]
        t_max: f64,
        #[arg(long, default_value_t = 0)]
        k: usize,
    },
    /// Log-weighted moment of Z', directly and by parts.
    Wmoment {
        #[arg(long)]
        t_max: f64,
    },
    /// Main-term polynomials, optionally evaluated at --t-max.
    Asympt {
        #[arg(long)]
        t_max: Option<f64>,
    },
    /// Stieltjes constants, eta coefficients and the residue polynomial.
    Constants {
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Exact arithmetic partial sums against their residue main terms.
    Convsum {
        #[arg(long)]
        x: f64,
        #[arg(long, value_enum, default_value_t = SumKind::LambdaStarD)]
        kind: SumKind,
    },
    /// Discrete moment reports over a grid of heights.
    Compare {
        #[arg(long, value_delimiter = ',', default_value = "500,1000,2000,5000")]
        t_grid: Vec<f64>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Zeros { .. } => "zeros",
            Command::Dmoment { .. } => "dmoment",
            Command::Cmoment { .. } => "cmoment",
            Command::Wmoment { .. } => "wmoment",
            Command::Asympt { .. } => "asympt",
            Command::Constants { .. } => "constants",
            Command::Convsum { .. } => "convsum",
            Command::Compare { .. } => "compare",
        }
    }
}

enum Failure {
    Numeric(Error),
    Output(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numeric(e)
    }
}

impl From<Box<dyn std::error::Error + Send + Sync>> for Failure {
    fn from(e: Box<dyn std::error::Error + Send + Sync>) -> Self {
        Failure::Output(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Output(e.to_string())
    }
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    module: &'a str,
    operation: &'a str,
    reason: String,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidConfig(_) | Error::Domain { .. } | Error::MemoryBudget { .. } => 2,
        Error::CountMismatch { .. } => 4,
        _ => 3,
    }
}

fn report_error(module: &str, operation: &str, reason: String) {
    let body = ErrorReport {
        error: ErrorBody {
            module,
            operation,
            reason,
        },
    };
    eprintln!("{}", serde_json::to_string(&body).unwrap_or_default());
}

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    let started = Instant::now();
    let precision = match precision(&cfg.common) {
        Ok(p) => p,
        Err(e) => {
            report_error(e.module(), e.operation(), e.to_string());
            return ExitCode::from(exit_code(&e));
        }
    };
    if let Some(n) = cfg.common.threads {
        if n == 0 {
            report_error("cli", "run", "--threads must be positive".into());
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            report_error("cli", "run", e.to_string());
            return ExitCode::from(2);
        }
    }
    let code = match run(&cfg, precision) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Numeric(e)) => {
            report_error(e.module(), e.operation(), e.to_string());
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Output(msg)) => {
            report_error("cli", "write", msg);
            ExitCode::from(3)
        }
    };
    eprintln!(
        "hardyz {}: wall time {:.3} s",
        cfg.command.name(),
        started.elapsed().as_secs_f64()
    );
    code
}

fn precision(c: &Common) -> hardyz::Result<PrecisionConfig> {
    let mut p = PrecisionConfig::default();
    if let Some(v) = c.abs_tol {
        p.target_abs_tol = v;
    }
    if let Some(v) = c.rel_tol {
        p.target_rel_tol = v;
    }
    if let Some(v) = c.max_terms {
        p.max_series_terms = v;
    }
    p.validate()?;
    Ok(p)
}

fn zeros_for(t_max: f64, precision: &PrecisionConfig, common: &Common) -> Result<ZeroSet, Failure> {
    if let Some(dir) = &common.cache {
        if let Some(set) = cache::load(dir, t_max, precision) {
            return Ok(set);
        }
    }
    let set = hardyz::scan_zeros(t_max, precision)?;
    if let Some(dir) = &common.cache {
        cache::store(dir, t_max, precision, &set)?;
    }
    Ok(set)
}

const REPORT_COLUMNS: [&str; 7] = [
    "kind",
    "t_max",
    "computed",
    "predicted",
    "residual",
    "envelope",
    "residual_over_envelope",
];

fn report_row(r: &MomentReport) -> Vec<String> {
    vec![
        r.kind.clone(),
        f17(r.t_max),
        f17(r.computed),
        f17(r.predicted),
        f17(r.residual),
        f17(r.envelope),
        f17(r.residual_over_envelope),
    ]
}

#[derive(Serialize)]
struct ZerosOut<'a> {
    t_max: f64,
    count_expected: f64,
    exact_count: i64,
    found: usize,
    flagged: &'a [f64],
    zeros: Vec<ZeroRow>,
}

#[derive(Serialize)]
struct ZeroRow {
    gamma: f64,
    z_prime: f64,
    bracket_lo: f64,
    bracket_hi: f64,
    refine_iters: u32,
}

#[derive(Serialize)]
struct AsymptOut {
    hall_p1: hardyz::MainTermPolynomial,
    hall_p3: hardyz::MainTermPolynomial,
    assembled: AssembledMainTerm,
    at: Option<AsymptValues>,
}

#[derive(Serialize)]
struct AsymptValues {
    t: f64,
    total: f64,
    b_block: f64,
    c_block: f64,
    leading_block: f64,
}

#[derive(Serialize)]
struct ConstantsOut {
    stieltjes: Vec<IndexedValue>,
    eta: Vec<IndexedValue>,
    residue_log_coeffs: Vec<f64>,
    hand_expansion: hardyz::laurent::HandExpansionCheck,
}

#[derive(Serialize)]
struct IndexedValue {
    index: usize,
    value: f64,
    est_err: f64,
}

#[derive(Serialize)]
struct ConvsumOut {
    x: f64,
    kind: SumKind,
    sum: f64,
    residue_main_term: f64,
    relative_difference: f64,
}

#[derive(Serialize)]
struct CompareOut {
    reports: Vec<MomentReport>,
    summary: Vec<SummaryRow>,
    c_fit: Option<FittedC>,
}

#[derive(Serialize)]
struct SummaryRow {
    t_max: f64,
    zero_count: usize,
    computed: f64,
    predicted: f64,
    leading_block: f64,
    b_block: f64,
    c_block: f64,
    residual: f64,
    residual_over_envelope: f64,
    ratio_full: f64,
    ratio_leading: f64,
}

const SUMMARY_COLUMNS: [&str; 11] = [
    "t_max",
    "zero_count",
    "computed",
    "predicted",
    "leading_block",
    "b_block",
    "c_block",
    "residual",
    "residual_over_envelope",
    "ratio_full",
    "ratio_leading",
];

fn run(cfg: &RunConfig, precision: PrecisionConfig) -> Result<(), Failure> {
    let common = &cfg.common;
    let header = Header::new(cfg.command.name(), precision);
    let engine = ZetaEngine::new(precision)?;
    let gammas = stieltjes_table();
    let bytes: Vec<u8> = match &cfg.command {
        Command::Zeros { t_max } => {
            let set = zeros_for(*t_max, &precision, common)?;
            match common.format {
                Format::Json => json(
                    &header,
                    &ZerosOut {
                        t_max: set.t_max,
                        count_expected: set.count_expected,
                        exact_count: set.exact_count,
                        found: set.len(),
                        flagged: &set.flagged,
                        zeros: set
                            .zeros
                            .iter()
                            .map(|z| ZeroRow {
                                gamma: z.gamma,
                                z_prime: z.z_prime,
                                bracket_lo: z.bracket.0,
                                bracket_hi: z.bracket.1,
                                refine_iters: z.refine_iters,
                            })
                            .collect(),
                    },
                )?,
                Format::Csv => {
                    let rows: Vec<Vec<String>> = set
                        .zeros
                        .iter()
                        .map(|z| vec![f17(z.gamma), f17(z.z_prime), f17(z.bracket.0), f17(z.bracket.1)])
                        .collect();
                    csv(&header, &["gamma", "z_prime", "bracket_lo", "bracket_hi"], &rows)?
                }
            }
        }
        Command::Dmoment { t_max } => {
            let set = zeros_for(*t_max, &precision, common)?;
            let r = discrete_moment(&set, gammas)?;
            write_report(&header, common.format, &r)?
        }
        Command::Cmoment { t_max, k } => {
            let r = continuous_moment(*k, *t_max, gammas, &engine)?;
            write_report(&header, common.format, &r)?
        }
        Command::Wmoment { t_max } => {
            let w = weighted_continuous_moment(*t_max, gammas, &engine)?;
            match common.format {
                Format::Json => json(&header, &w)?,
                Format::Csv => csv(
                    &header,
                    &["t_max", "direct", "by_parts", "predicted"],
                    &[vec![f17(w.t_max), f17(w.direct), f17(w.by_parts), f17(w.predicted)]],
                )?,
            }
        }
        Command::Asympt { t_max } => {
            let theorem = main_term_theorem(gammas)?;
            let at = t_max.map(|t| AsymptValues {
                t,
                total: theorem.value(t),
                b_block: theorem.b_block.value(t),
                c_block: theorem.c_block.value(t),
                leading_block: theorem.leading_block(t),
            });
            match common.format {
                Format::Json => json(
                    &header,
                    &AsymptOut {
                        hall_p1: hall_poly(0, gammas)?,
                        hall_p3: hall_poly(1, gammas)?,
                        assembled: theorem,
                        at,
                    },
                )?,
                Format::Csv => {
                    let b = theorem.b_block.scaled_coeffs();
                    let c = theorem.c_block.scaled_coeffs();
                    let rows: Vec<Vec<String>> = (0..theorem.total.coeffs.len())
                        .rev()
                        .map(|j| {
                            vec![
                                j.to_string(),
                                f17(b.get(j).copied().unwrap_or(0.0)),
                                f17(c.get(j).copied().unwrap_or(0.0)),
                                f17(theorem.total.coeffs[j]),
                            ]
                        })
                        .collect();
                    csv(&header, &["log_power", "b", "c", "a"], &rows)?
                }
            }
        }
        Command::Constants { order } => {
            let table = stieltjes(*order)?;
            let eta_max = order.saturating_sub(2).min(6);
            let eta = eta_coeffs(eta_max, &table)?;
            let fam = ZetaFamily::new(gammas)?;
            let res = hardyz::laurent::residue_log_coeffs(&fam.lambda_star_d())?;
            let hand = hand_expansion_check(gammas, 1e-10)?;
            let out = ConstantsOut {
                stieltjes: table
                    .values
                    .iter()
                    .zip(&table.est_err)
                    .enumerate()
                    .map(|(index, (v, e))| IndexedValue {
                        index,
                        value: *v,
                        est_err: *e,
                    })
                    .collect(),
                eta: eta
                    .iter()
                    .enumerate()
                    .map(|(index, v)| IndexedValue {
                        index,
                        value: *v,
                        est_err: 0.0,
                    })
                    .collect(),
                residue_log_coeffs: res,
                hand_expansion: hand,
            };
            match common.format {
                Format::Json => json(&header, &out)?,
                Format::Csv => {
                    let mut rows = Vec::new();
                    for v in &out.stieltjes {
                        rows.push(vec!["gamma".into(), v.index.to_string(), f17(v.value), f17(v.est_err)]);
                    }
                    for v in &out.eta {
                        rows.push(vec!["eta".into(), v.index.to_string(), f17(v.value), f17(v.est_err)]);
                    }
                    csv(&header, &["name", "index", "value", "est_err"], &rows)?
                }
            }
        }
        Command::Convsum { x, kind } => {
            if !(*x >= 1.0) {
                return Err(Error::Domain {
                    op: "conv_sum_ld",
                    reason: format!("x = {x} < 1"),
                }
                .into());
            }
            let n = (x.floor() as usize).max(2);
            let table = build_tables(n)?;
            let fam = ZetaFamily::new(gammas)?;
            let (sum, series) = match kind {
                SumKind::LambdaStarD => (table.conv_sum_ld(*x)?, fam.lambda_star_d()),
                SumKind::DLogN => (table.weighted_sums(*x, WeightKind::DLogN)?, fam.d_log()),
                SumKind::OneStarLogLog2N => (
                    table.weighted_sums(*x, WeightKind::OneStarLogLog2N)?,
                    fam.one_star_log_log2(),
                ),
            };
            let main = if *x > 1.0 {
                residue_main_term(&series, *x)?.value
            } else {
                0.0
            };
            let out = ConvsumOut {
                x: *x,
                kind: *kind,
                sum,
                residue_main_term: main,
                relative_difference: if main != 0.0 { (sum - main) / main } else { 0.0 },
            };
            match common.format {
                Format::Json => json(&header, &out)?,
                Format::Csv => csv(
                    &header,
                    &["x", "sum", "residue_main_term", "relative_difference"],
                    &[vec![f17(out.x), f17(out.sum), f17(out.residue_main_term), f17(out.relative_difference)]],
                )?,
            }
        }
        Command::Compare { t_grid } => {
            let mut grid = t_grid.clone();
            if grid.is_empty() || grid.iter().any(|t| !t.is_finite()) {
                return Err(Error::InvalidConfig("--t-grid needs finite heights".into()).into());
            }
            grid.sort_by(f64::total_cmp);
            grid.dedup();
            let top = *grid.last().unwrap_or(&0.0);
            let full = zeros_for(top, &precision, common)?;
            let mut reports = Vec::with_capacity(grid.len());
            for &t in &grid {
                let set = if t == top { full.clone() } else { full.truncate(t, &engine)? };
                reports.push(discrete_moment(&set, gammas)?);
            }
            let summary: Vec<SummaryRow> = reports
                .iter()
                .map(|r| SummaryRow {
                    t_max: r.t_max,
                    zero_count: r.parts["zero_count"] as usize,
                    computed: r.computed,
                    predicted: r.predicted,
                    leading_block: r.parts["leading_block"],
                    b_block: r.parts["b_block"],
                    c_block: r.parts["c_block"],
                    residual: r.residual,
                    residual_over_envelope: r.residual_over_envelope,
                    ratio_full: r.computed / r.predicted,
                    ratio_leading: r.computed / r.parts["leading_block"],
                })
                .collect();
            let lo = grid[0];
            let c_fit = if top > lo {
                let dense: Vec<f64> = (0..64).map(|i| lo + (top - lo) * i as f64 / 63.0).collect();
                Some(fit_c_block(&full, &dense, gammas)?)
            } else {
                None
            };
            match common.format {
                Format::Json => json(
                    &header,
                    &CompareOut {
                        reports,
                        summary,
                        c_fit,
                    },
                )?,
                Format::Csv => {
                    let rows: Vec<Vec<String>> = summary
                        .iter()
                        .map(|s| {
                            vec![
                                f17(s.t_max),
                                s.zero_count.to_string(),
                                f17(s.computed),
                                f17(s.predicted),
                                f17(s.leading_block),
                                f17(s.b_block),
                                f17(s.c_block),
                                f17(s.residual),
                                f17(s.residual_over_envelope),
                                f17(s.ratio_full),
                                f17(s.ratio_leading),
                            ]
                        })
                        .collect();
                    csv(&header, &SUMMARY_COLUMNS, &rows)?
                }
            }
        }
    };
    emit(&bytes, common.out.as_deref())?;
    Ok(())
}

fn write_report(header: &Header, format: Format, r: &MomentReport) -> WriteResult<Vec<u8>> {
    match format {
        Format::Json => json(header, r),
        Format::Csv => csv(header, &REPORT_COLUMNS, &[report_row(r)]),
    }
}
