//! Exact arithmetic for Engel-type series `p/q + sum_{j>=2} 1/x_j` whose terms
//! follow the non-autonomous recurrence
//! `x_{n+1} x_{n-1} = x_n^2 (z_n x_n + 1)`.
//!
//! The crate generates the sequences, predicts the continued fraction of each
//! partial sum (the terms `x_j` interlaced with `y_{j-1} z_j`), checks that
//! prediction against an independent expansion, and measures how fast the
//! partial sums approach the limit.
//!
//! ```
//! use engelcf::{EngelState, SeedConfig, predicted_cf};
//!
//! let cfg = SeedConfig::parse("6/7", "n").unwrap();
//! let state = EngelState::generate(cfg, 3, 100_000).unwrap();
//! assert_eq!(state.x(3).unwrap().to_string(), "403200");
//! assert_eq!(predicted_cf(&state, 3).unwrap().cf.to_string(), "[0;1,6,2,7,32,112]");
//! ```

pub mod batch;
pub mod cf;
pub mod decio;
pub mod engel;
pub mod error;
pub mod rational;
pub mod series;
pub mod zspec;

pub use cf::{cf_eval, cf_even_normalize, cf_expand, convergents, det_check, Cf, ConvergentTable};
pub use decio::{digits_of_sum, to_decimal, CertifiedDigits, DecimalString};
pub use engel::{
    check_growth, check_recurrence, init_seed, EngelState, SeedConfig, DEFAULT_DIGIT_BUDGET,
};
pub use error::{Error, ParseError, Result};
pub use rational::{Fraction, Rational};
pub use series::{
    irr_exponents, partial_sum, predicted_cf, tail_bound, verify_theorem, ExponentRow, PartialSum,
    PredictedCf, TheoremReport,
};
pub use zspec::{eval_z, parse_zspec, ZExpr};
