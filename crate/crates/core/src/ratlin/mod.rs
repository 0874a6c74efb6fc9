//! Exact dense-semantics matrices over `Z` and `Q` with sparse row storage.
//!
//! All values are immutable once built; every operation returns a new
//! matrix. Rationals are always kept in lowest terms with a positive
//! denominator (this is what [`BigRational`] guarantees).

use core::fmt;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

mod elim;
mod matrix;
mod rat;
mod smith;

pub use matrix::Matrix;
pub use smith::Smith;

/// Matrix with arbitrary-precision rational entries.
pub type RatMatrix = Matrix<BigRational>;
/// Matrix with arbitrary-precision integer entries.
pub type IntMatrix = Matrix<BigInt>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    NotSquare { rows: usize, cols: usize },
    Singular,
    Shape { op: &'static str, left: (usize, usize), right: (usize, usize) },
}

impl fmt::Display for LinAlgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinAlgError::NotSquare { rows, cols } => {
                write!(f, "matrix is {rows}x{cols}, expected square")
            }
            LinAlgError::Singular => f.write_str("matrix is singular"),
            LinAlgError::Shape { op, left, right } => {
                write!(f, "shape mismatch in {op}: {}x{} vs {}x{}", left.0, left.1, right.0, right.1)
            }
        }
    }
}

/// Ring operations the matrix code needs, by reference so big numbers are
/// not cloned on every multiply.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
}

macro_rules! impl_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn zero() -> Self {
                num_traits::Zero::zero()
            }
            fn one() -> Self {
                num_traits::One::one()
            }
            fn is_zero(&self) -> bool {
                num_traits::Zero::is_zero(self)
            }
            fn add_ref(&self, other: &Self) -> Self {
                self + other
            }
            fn sub_ref(&self, other: &Self) -> Self {
                self - other
            }
            fn mul_ref(&self, other: &Self) -> Self {
                self * other
            }
            fn neg_ref(&self) -> Self {
                -self
            }
        }
    };
}

impl_scalar!(BigInt);
impl_scalar!(BigRational);

/// `n` as a rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `p/q` in lowest terms. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Parse `"p/q"` or `"p"`. The result is reduced to lowest terms.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if num_traits::Zero::is_zero(&q) {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Canonical text form: `"p/q"` in lowest terms, or `"p"` when `q = 1`.
pub fn format_rational(q: &BigRational) -> alloc::string::String {
    alloc::format!("{q}")
}
