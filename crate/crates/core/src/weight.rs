//! Scalar abstraction for transition weights.
//!
//! Every check in this crate is an exact equality of masses, so the scalar
//! must be an ordered field without rounding. [`Weight`] is implemented for
//! `num_rational::Ratio<T>` over any signed integer type, which covers the
//! arbitrary-precision [`crate::Rational`] used throughout and the faster
//! (overflow-panicking) `Ratio<i64>`.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};

/// An exact, totally ordered field element usable as a probability weight.
pub trait Weight: Num + Signed + Clone + Ord + Debug + Send + Sync + 'static {
    /// Parses `"num/den"` or `"n"`. Non-reduced input is accepted and
    /// normalized; a zero denominator yields `None`.
    fn parse_weight(text: &str) -> Option<Self>;

    /// Always `"num/den"`, including `"1/1"` and `"0/1"`.
    fn to_fraction_string(&self) -> String;

    /// `num / den` as a weight. Panics on `den == 0`.
    fn ratio(num: i64, den: i64) -> Self;
}

impl<T> Weight for Ratio<T>
where
    T: Integer + Signed + Clone + FromStr + Display + Debug + FromPrimitive + Send + Sync + 'static,
{
    fn parse_weight(text: &str) -> Option<Self> {
        let text = text.trim();
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        if num.is_empty() || den.is_empty() || den.starts_with(['-', '+']) {
            return None;
        }
        let num = T::from_str(num).ok()?;
        let den = T::from_str(den).ok()?;
        if den.is_zero() {
            return None;
        }
        Some(Ratio::new(num, den))
    }

    fn to_fraction_string(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let num = T::from_i64(num).expect("numerator out of range");
        let den = T::from_i64(den).expect("denominator out of range");
        Ratio::new(num, den)
    }
}
