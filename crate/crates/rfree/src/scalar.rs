//! Scalar abstraction for the geometric layer.
//!
//! The projective-metric formulas are written once against this trait and
//! instantiated twice: with plain floats for the Monte Carlo and search
//! sampling paths, and with [`Interval`] when the same quantities go into a
//! certificate and every bound must be validated.

use crate::interval::Interval;
use num_traits::{One, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Real:
    Clone
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;
    fn sqrt(&self) -> Self;
    /// Square root of `max(self, 0)`, for quantities that are nonnegative
    /// mathematically but may dip below zero through rounding.
    fn sqrt_clamped(&self) -> Self;
    fn abs(&self) -> Self;
    /// Tight square (for intervals, `{x^2 : x in I}` rather than `I*I`).
    fn square(&self) -> Self;
    /// `Some(sign)` when the sign is unambiguous and nonzero.
    fn sign_class(&self) -> Option<i8>;
    /// Pessimistic f64 image of the lower bound; for argmin bookkeeping and
    /// reports, never for certified decisions.
    fn approx_f64(&self) -> f64;
}

macro_rules! impl_real_float {
    ($t:ty) => {
        impl Real for $t {
            fn from_i64(v: i64) -> Self {
                v as $t
            }
            fn sqrt(&self) -> Self {
                <$t>::sqrt(*self)
            }
            fn sqrt_clamped(&self) -> Self {
                <$t>::sqrt(self.max(0.0))
            }
            fn abs(&self) -> Self {
                <$t>::abs(*self)
            }
            fn square(&self) -> Self {
                self * self
            }
            fn sign_class(&self) -> Option<i8> {
                if *self > 0.0 {
                    Some(1)
                } else if *self < 0.0 {
                    Some(-1)
                } else {
                    None
                }
            }
            fn approx_f64(&self) -> f64 {
                *self as f64
            }
        }
    };
}

impl_real_float!(f32);
impl_real_float!(f64);

impl Zero for Interval {
    fn zero() -> Self {
        Interval::from_i64(0)
    }
    fn is_zero(&self) -> bool {
        self.lo().is_zero() && self.hi().is_zero()
    }
}

impl One for Interval {
    fn one() -> Self {
        Interval::from_i64(1)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::add(&self, &rhs)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::sub(&self, &rhs)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        Interval::mul(&self, &rhs)
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, rhs: Interval) -> Interval {
        Interval::div(&self, &rhs)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::neg(&self)
    }
}

impl Real for Interval {
    fn from_i64(v: i64) -> Self {
        Interval::from_i64(v)
    }
    fn sqrt(&self) -> Self {
        Interval::sqrt(self)
    }
    fn sqrt_clamped(&self) -> Self {
        use crate::dyadic::Dyadic;
        if self.hi().signum() < 0 {
            return Interval::from_i64(0).with_prec(self.prec());
        }
        let lo = if self.lo().signum() < 0 {
            Dyadic::zero()
        } else {
            self.lo().clone()
        };
        Interval::new(lo, self.hi().clone(), self.prec()).sqrt()
    }
    fn abs(&self) -> Self {
        Interval::abs(self)
    }
    fn square(&self) -> Self {
        Interval::square(self)
    }
    fn sign_class(&self) -> Option<i8> {
        if self.lo().signum() > 0 {
            Some(1)
        } else if self.hi().signum() < 0 {
            Some(-1)
        } else {
            None
        }
    }
    fn approx_f64(&self) -> f64 {
        self.lo_f64()
    }
}
