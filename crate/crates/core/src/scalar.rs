//! Numeric scalar abstraction shared by the Shapley, PQE and linear-algebra code.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

/// Field-like numbers the engines can accumulate into.
///
/// `BigRational` gives exact results; `f64`/`f32` trade exactness for speed.
pub trait Scalar: Num + Clone + Debug + PartialOrd + Send + Sync + 'static {
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self;

    fn from_rational(r: &BigRational) -> Self {
        Self::from_ratio(r.numer(), r.denom())
    }

    fn from_u64(n: u64) -> Self {
        Self::from_ratio(&BigInt::from(n), &BigInt::from(1))
    }

    fn approx(&self) -> f64;

    /// Whether arithmetic on this type is exact.
    fn is_exact() -> bool {
        false
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        BigRational::new(num.clone(), den.clone())
    }

    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_exact() -> bool {
        true
    }
}

impl Scalar for f64 {
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        BigRational::new(num.clone(), den.clone())
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    fn approx(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        BigRational::new(num.clone(), den.clone())
            .to_f32()
            .unwrap_or(f32::NAN)
    }

    fn approx(&self) -> f64 {
        *self as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_agree() {
        let (n, d) = (BigInt::from(14), BigInt::from(24));
        let exact = BigRational::from_ratio(&n, &d);
        assert_eq!(exact, BigRational::new(7.into(), 12.into()));
        assert!((f64::from_ratio(&n, &d) - 7.0 / 12.0).abs() < 1e-15);
        assert!((f32::from_ratio(&n, &d) - 7.0 / 12.0).abs() < 1e-6);
        assert_eq!(0.5f64.approx(), 0.5);
        assert!(BigRational::is_exact() && !f64::is_exact());
    }
}
