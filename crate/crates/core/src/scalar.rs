//! Scalar abstractions.
//!
//! Two tiers are used throughout the crate. [`Field`] is enough for the purely
//! algebraic parts (coboundaries, polynomial forms, exact rank) and is
//! implemented by `f32`, `f64` and [`num_rational::BigRational`]. [`Real`] adds
//! the floating-point operations needed by norms, quadrature and root finding.

use std::fmt::Debug;
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// Exact or floating coefficients for chain-level algebra.
pub trait Field:
    Num + Signed + Clone + Debug + PartialEq + FromPrimitive + Send + Sync + 'static
{
    /// Integer constant in this field.
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer constant representable in field")
    }

    /// Magnitude as `f64`, used only for reporting residuals.
    fn magnitude(&self) -> f64;
}

impl Field for f32 {
    fn magnitude(&self) -> f64 {
        f64::from(self.abs())
    }
}

impl Field for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Field for num_rational::BigRational {
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

/// Floating-point scalars (`f32`, `f64`).
pub trait Real: Field + Float + FromPrimitive + ToPrimitive + Sum + Default {
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Lossy conversion to `f64`.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Pairwise (cascade) summation with a fixed tree shape, so results depend only
/// on the order of the input slice.
pub fn pairwise_sum<R: Real>(values: &[R]) -> R {
    const LEAF: usize = 16;
    if values.len() <= LEAF {
        let mut acc = R::zero();
        for &v in values {
            acc = acc + v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Sign of a permutation given as a sequence of distinct keys: +1 for even,
/// -1 for odd, 0 if a key repeats.
pub fn permutation_sign<T: Ord>(keys: &[T]) -> i8 {
    let mut sign = 1i8;
    for i in 0..keys.len() {
        for j in (i + 1)..keys.len() {
            match keys[i].cmp(&keys[j]) {
                std::cmp::Ordering::Greater => sign = -sign,
                std::cmp::Ordering::Equal => return 0,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_small_input() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(pairwise_sum(&v), 5050.0);
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[2, 0, 1]), 1);
        assert_eq!(permutation_sign(&[0, 0, 1]), 0);
    }

    #[test]
    fn rational_magnitude() {
        let q = num_rational::BigRational::from_int(-3) / num_rational::BigRational::from_int(4);
        assert_eq!(q.magnitude(), 0.75);
    }
}
