//! Exact rational numbers and the integer combinatorics behind them.
//!
//! Every bound, replication number and expansion factor in this crate is
//! carried as a reduced fraction. Decimal rendering happens only when a value
//! is printed.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num_integer::Integer;
use num_rational::Ratio;

/// A reduced fraction with a positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<i128>);

impl Rational {
    /// Builds `numer / denom`, reducing it.
    ///
    /// Panics if `denom` is zero.
    pub fn new(numer: i128, denom: i128) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(Ratio::new(numer, denom))
    }

    pub fn from_integer(n: i128) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Smallest integer not less than the value.
    pub fn ceil(&self) -> i128 {
        Integer::div_ceil(&self.numer(), &self.denom())
    }

    /// Largest integer not greater than the value.
    pub fn floor(&self) -> i128 {
        Integer::div_floor(&self.numer(), &self.denom())
    }

    /// Decimal rendering with `places` fractional digits, rounding half up
    /// (towards +infinity on an exact tie).
    pub fn to_decimal(&self, places: u32) -> String {
        let scale = 10i128.pow(places);
        // floor(x * scale + 1/2)
        let scaled = Integer::div_floor(&(2 * self.numer() * scale + self.denom()), &(2 * self.denom()));
        let negative = scaled < 0;
        let magnitude = scaled.unsigned_abs();
        let int_part = magnitude / scale as u128;
        let frac_part = magnitude % scale as u128;
        let sign = if negative { "-" } else { "" };
        if places == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part:0width$}", width = places as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl From<i128> for Rational {
    fn from(n: i128) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
///
/// Exact for every `n` up to 128.
pub fn binomial(n: u64, k: u64) -> i128 {
    if k > n {
        return 0;
    }
    num_integer::binomial(n as i128, k as i128)
}

/// Multinomial coefficient `(sum parts)! / prod(part!)`, computed as a product
/// of binomials so that no factorial is ever formed. `None` on overflow.
pub fn multinomial(parts: &[u64]) -> Option<i128> {
    let mut total: u64 = 0;
    let mut acc: i128 = 1;
    for &p in parts {
        total += p;
        acc = acc.checked_mul(binomial(total, p))?;
    }
    Some(acc)
}
