//! Finite posets acting on order polynomials, order series and rational zeta
//! series.
//!
//! Posets compose by lexicographic sum. Counting order-preserving maps gives
//! each poset a vector over the binomial basis; that vector transports the
//! composition to power series over `x^i / (1-x)^(i+1)` and to finite
//! combinations of zeta values. Arithmetic is exact over [`Rational`] unless
//! a floating or fixed-point scalar is requested.
//!
//! ```
//! use posetoperad::{dsl::parse_poset, order::{d_vector, Guard}};
//!
//! let p = parse_poset("{x<y>z<w}").unwrap();
//! let d = d_vector(&p, &Guard::default()).unwrap();
//! assert_eq!(d.linear_extensions(), 5.into());
//! assert_eq!(
//!     d.triangulation_summary(),
//!     "5 x simplex[4], 5 x simplex[3], 1 x simplex[2]"
//! );
//! ```

pub mod basis;
pub mod corpus;
pub mod discrepancy;
pub mod dsl;
pub mod error;
pub mod fixed;
pub mod identities;
pub mod kernels;
pub mod order;
pub mod poset;
pub mod scalar;
pub mod series;
pub mod suite;
pub mod zeta;

pub use error::{Error, Result};
pub use poset::Poset;

/// Exact scalar used throughout.
pub type Rational = num_rational::BigRational;
/// Polynomial in the binomial basis `C(x, i)` over [`Rational`].
pub type Poly = basis::BinomialPoly<Rational>;
/// Polynomial in the monomial basis over [`Rational`].
pub type MonoPoly = basis::MonomialPoly<Rational>;
/// Exact order series.
pub type Series = series::SeriesVec<Rational>;
/// Order series with `f64` coefficients.
pub type SeriesF64 = series::SeriesVec<f64>;
/// Fixed-point real with 256 fractional bits, enough for 60 digits.
pub type HighPrec = fixed::Fixed<256>;
/// Exact rational combination of zeta values.
pub type Zeta = zeta::ZetaExpr;
