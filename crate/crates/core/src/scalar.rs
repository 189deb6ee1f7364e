//! Scalar abstraction shared by the exact and floating point code paths.
//!
//! Combinatorial angles, connection polynomials and the φ functional are all
//! written against [`Scalar`], so the same routine runs in exact rational
//! arithmetic (for equality cases that must not be lost to rounding) and in
//! `f64` (for Monte Carlo comparisons).

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{FromPrimitive, Num, Zero};

/// A field-like number type usable for probabilities and angles.
pub trait Scalar: Num + Clone + PartialOrd + FromPrimitive + Debug {
    fn from_ratio(num: i64, den: i64) -> Self {
        let n = Self::from_i64(num).expect("scalar cannot represent integer");
        let d = Self::from_i64(den).expect("scalar cannot represent integer");
        n / d
    }

    fn from_count(k: u64) -> Self {
        Self::from_u64(k).expect("scalar cannot represent count")
    }

    /// Integer power by repeated squaring.
    fn powu(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl<T: Num + Clone + PartialOrd + FromPrimitive + Debug> Scalar for T {}

/// An angle stored as a rational multiple of π.
#[derive(Debug, Clone, PartialEq, PartialOrd)]
pub struct PiMultiple<T>(pub T);

impl<T: Scalar> PiMultiple<T> {
    pub fn zero() -> Self {
        PiMultiple(T::zero())
    }

    /// `k·π`.
    pub fn whole(k: i64) -> Self {
        PiMultiple(T::from_i64(k).expect("integer multiple"))
    }

    /// Combinatorial internal angle `((d−2)/d)·π` of a face of degree `d`.
    pub fn face_angle(degree: usize) -> Self {
        let d = degree as i64;
        PiMultiple(T::from_ratio(d - 2, d))
    }

    /// Coefficient of π.
    pub fn coefficient(&self) -> &T {
        &self.0
    }

    pub fn is_nonpositive(&self) -> bool {
        self.0 <= T::zero()
    }
}

impl<T: Scalar + Into<f64>> PiMultiple<T> {
    pub fn radians(&self) -> f64 {
        self.0.clone().into() * std::f64::consts::PI
    }
}

impl PiMultiple<crate::Rational> {
    pub fn to_radians(&self) -> f64 {
        (*self.0.numer() as f64 / *self.0.denom() as f64) * std::f64::consts::PI
    }
}

impl<T: Scalar> Add for PiMultiple<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        PiMultiple(self.0 + rhs.0)
    }
}

impl<T: Scalar> Sub for PiMultiple<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        PiMultiple(self.0 - rhs.0)
    }
}

impl<T: Scalar + Neg<Output = T>> Neg for PiMultiple<T> {
    type Output = Self;
    fn neg(self) -> Self {
        PiMultiple(-self.0)
    }
}

impl<T: Scalar> Mul<T> for PiMultiple<T> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        PiMultiple(self.0 * rhs)
    }
}

impl<T: Scalar> std::iter::Sum for PiMultiple<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl<T: Scalar> Zero for PiMultiple<T> {
    fn zero() -> Self {
        PiMultiple(T::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}
