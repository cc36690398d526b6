//! Rational torsion of Jacobians and generalized Jacobians of X_0(N) for
//! squarefree N, over Q and over F_q(t) (Drinfeld modular curves).
//!
//! The closed-form structure results live in [`torsion`] and [`delta`];
//! [`eta`] and [`sublattice`] rebuild the same groups independently from
//! divisor lattices and exact q-expansions, and [`hecke`] models the Hecke
//! action on cuspidal local data.
//!
//! The exact engines ([`matrix`], [`snf`], [`qseries`], [`lattice`]) are
//! generic over a [`Scalar`] integer type; the aliases below fix the
//! arbitrary-precision instantiation used everywhere else.

pub mod arith;
pub mod base_ring;
pub mod delta;
pub mod error;
pub mod eta;
pub mod gf;
pub mod group;
pub mod hecke;
pub mod lattice;
pub mod matrix;
pub mod poly;
pub mod qseries;
pub mod scalar;
pub mod serde_int;
pub mod snf;
pub mod sublattice;
pub mod torsion;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use base_ring::{Constants, Modulus, PrimeElt, RingElt, Setting};
pub use error::{Error, Result};
pub use group::LocalizedAbelianGroup;
pub use lattice::{Character, CuspDivisor, WElem};
pub use matrix::Matrix;
pub use qseries::QSeries;
pub use scalar::Scalar;
pub use snf::Snf;

pub type IntMatrix = Matrix<BigInt>;
pub type SnfResult = Snf<BigInt>;
pub type Divisor = CuspDivisor<BigInt>;
pub type RationalDivisor = CuspDivisor<BigRational>;
pub type QSeriesZ = QSeries<BigInt>;
