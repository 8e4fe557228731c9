use thiserror::Error;

/// Everything that can go wrong while evaluating, scanning or assembling.
///
/// Each variant names the operation that failed so front ends can report
/// `(module, operation, reason)` triples without string matching.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{op}: argument outside the supported domain ({reason})")]
    Domain { op: &'static str, reason: String },

    #[error("log_gamma: s = {re} + {im}i is a pole of Gamma")]
    GammaPole { re: f64, im: f64 },

    #[error("{op}: pole at s = {re} + {im}i")]
    Pole { op: &'static str, re: f64, im: f64 },

    #[error("{op}: result not representable ({reason})")]
    Overflow { op: &'static str, reason: String },

    #[error("zeta: |Im s| = {im} exceeds the supported envelope {limit}")]
    EnvelopeExceeded { im: f64, limit: f64 },

    #[error("{op}: accuracy not reached (estimated error {estimate:e}, target {target:e})")]
    AccuracyNotReached {
        op: &'static str,
        estimate: f64,
        target: f64,
    },

    #[error("hardy_z: e^(i theta) zeta(1/2 + it) has imaginary part {im:e} at t = {t}")]
    PhaseInconsistency { t: f64, im: f64 },

    #[error("scan_zeros: found {found} zeros up to {t_max} but the theta count gives {expected}")]
    CountMismatch {
        t_max: f64,
        found: usize,
        expected: i64,
    },

    #[error("series_ops: division by a series with vanishing leading coefficient")]
    SeriesDivisionByZero,

    #[error("{op}: series truncated at u^{available} but u^{needed} is required")]
    InsufficientTruncation {
        op: &'static str,
        needed: i64,
        available: i64,
    },

    #[error("hall_poly: k = {k} needs Stieltjes constants up to index {needed}, table has {available}")]
    InsufficientConstants {
        k: usize,
        needed: usize,
        available: usize,
    },

    #[error("{op}: table covers n <= {n_max} but x = {x} was requested")]
    TableTooSmall { op: &'static str, n_max: usize, x: f64 },

    #[error("build_tables: n_max = {requested} exceeds the cap {cap}")]
    MemoryBudget { requested: usize, cap: usize },

    #[error("{op}: quadrature failed on [{lo}, {hi}] (panel error {error:e}, tolerance {tol:e})")]
    QuadratureFailure {
        op: &'static str,
        lo: f64,
        hi: f64,
        error: f64,
        tol: f64,
    },

    #[error("main_term_theorem: {which} coefficient is {got}, expected {expected}")]
    AssemblyInconsistency {
        which: &'static str,
        got: f64,
        expected: f64,
    },
}

impl Error {
    /// Library module the error originates from.
    pub fn module(&self) -> &'static str {
        match self {
            Error::InvalidConfig(_) => "config",
            Error::GammaPole { .. } | Error::Overflow { .. } => "special_fn",
            Error::Domain { op, .. } | Error::Pole { op, .. } => module_of(op),
            Error::EnvelopeExceeded { .. } | Error::PhaseInconsistency { .. } => "zeta_engine",
            Error::AccuracyNotReached { op, .. } => module_of(op),
            Error::CountMismatch { .. } => "zeros",
            Error::SeriesDivisionByZero | Error::InsufficientTruncation { .. } => {
                "laurent_constants"
            }
            Error::InsufficientConstants { .. } | Error::AssemblyInconsistency { .. } => {
                "moments_asymptotics"
            }
            Error::TableTooSmall { .. } | Error::MemoryBudget { .. } => "arithmetic_sums",
            Error::QuadratureFailure { op, .. } => module_of(op),
        }
    }

    /// Operation name, where one is attached.
    pub fn operation(&self) -> &'static str {
        match self {
            Error::InvalidConfig(_) => "validate",
            Error::Domain { op, .. }
            | Error::Pole { op, .. }
            | Error::Overflow { op, .. }
            | Error::AccuracyNotReached { op, .. }
            | Error::TableTooSmall { op, .. }
            | Error::QuadratureFailure { op, .. }
            | Error::InsufficientTruncation { op, .. } => op,
            Error::GammaPole { .. } => "log_gamma",
            Error::EnvelopeExceeded { .. } => "zeta",
            Error::PhaseInconsistency { .. } => "hardy_z",
            Error::CountMismatch { .. } => "scan_zeros",
            Error::SeriesDivisionByZero => "series_ops",
            Error::InsufficientConstants { .. } => "hall_poly",
            Error::MemoryBudget { .. } => "build_tables",
            Error::AssemblyInconsistency { .. } => "main_term_theorem",
        }
    }
}

fn module_of(op: &str) -> &'static str {
    match op {
        "log_gamma" | "digamma" | "chi" | "omega" | "riemann_siegel_theta" => "special_fn",
        "zeta" | "hardy_z" | "hardy_z_prime" | "z1" => "zeta_engine",
        "scan_zeros" | "count_expected" | "exact_count" => "zeros",
        "stieltjes" | "residue_main_term" | "eta_coeffs" => "laurent_constants",
        "conv_sum_ld" | "weighted_sums" | "gonek_lemma_check" => "arithmetic_sums",
        _ => "moments_asymptotics",
    }
}

pub type Result<T> = std::result::Result<T, Error>;
