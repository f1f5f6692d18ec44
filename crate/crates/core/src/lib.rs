//! Moment generating Stirling numbers of both kinds, their generating
//! functions, and the exact moment formulas they give for passage and
//! recurrence times of finite Markov chains.
//!
//! Every algorithm is generic over [`Scalar`], implemented for
//! [`BigRational`](num_rational::BigRational), `f64` and `f32`. The aliases
//! at the crate root fix the exact rational instantiation used throughout
//! the tests and the command line tool.

pub mod chain;
pub mod distributions;
pub mod error;
pub mod identities;
pub mod io;
pub mod matrix;
pub mod moments;
pub mod msn;
pub mod msn1;
pub mod scalar;
pub mod series;
pub mod sim;

pub use chain::Side;
pub use distributions::DistributionSpec;
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use moments::{Method, MomentResult, Variable};
pub use scalar::{format_rational, parse_rational, Scalar};

pub type Rational = num_rational::BigRational;
pub type RationalMatrix = matrix::Matrix<Rational>;
pub type MsnTable = msn::MsnTable<Rational>;
pub type Msn1Table = msn1::Msn1Table<Rational>;
pub type TruncatedSeries = series::TruncatedSeries<Rational>;
pub type PartitionedChain = chain::PartitionedChain<Rational>;
