//! Hardy's Z-function, its zeros, and moments of `Z` and `Z'` compared with
//! their asymptotic main terms.
//!
//! ```
//! use hardyz::{hardy_z, hardy_z_prime};
//!
//! let z = hardy_z(14.134_725_141_734_694).unwrap();
//! assert!(z.abs() < 1e-10);
//! assert!(hardy_z_prime(14.134_725_141_734_694).unwrap() > 0.0);
//! ```
//!
//! Modules, bottom up:
//!
//! * [`special_fn`]: `log Gamma`, digamma, `chi`, `omega = chi'/chi`, `theta`.
//! * [`zeta_engine`]: `zeta` and derivatives, `Z`, `Z'`, `Z_1`.
//! * [`zeros`]: zero scan with exact counting.
//! * [`laurent`]: series at `s = 1`, Stieltjes constants, residues.
//! * [`arithmetic`]: `Lambda`, `D` and their partial sums.
//! * [`moments`]: moments, Hall polynomials, main-term assembly.

pub mod arithmetic;
pub mod error;
pub mod laurent;
pub mod moments;
pub mod quadrature;
pub mod special_fn;
pub mod zeros;
pub mod zeta_engine;

pub use error::{Error, Result};
pub use laurent::{stieltjes, stieltjes_table, LaurentSeries, StieltjesTable};
pub use moments::{MainTermPolynomial, MomentReport};
pub use special_fn::{chi, omega, riemann_siegel_theta, ComplexValue, PrecisionConfig};
pub use zeros::{scan_zeros, ZeroRecord, ZeroSet};
pub use zeta_engine::{hardy_z, hardy_z_prime, z1, zeta, ZetaEngine};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/hardy-z.md")]
    pub struct HardyZ;
    #[doc = include_str!("../../../book/src/zeros.md")]
    pub struct Zeros;
    #[doc = include_str!("../../../book/src/laurent.md")]
    pub struct Laurent;
    #[doc = include_str!("../../../book/src/arithmetic.md")]
    pub struct Arithmetic;
    #[doc = include_str!("../../../book/src/moments.md")]
    pub struct Moments;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
