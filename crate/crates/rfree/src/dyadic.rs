//! Arbitrary-precision binary floats `mant * 2^exp` with directed rounding.
//!
//! These are the endpoints of the validated intervals in [`crate::interval`].
//! Addition and multiplication are exact; division, square roots and decimal
//! conversion take an explicit precision and rounding direction, so every
//! rounded result brackets the true value from the requested side.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction: toward negative or positive infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// `mant * 2^exp`, kept normalized: `mant` is odd, or zero with `exp == 0`.
/// The normalized form makes structural equality and hashing canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        if mant.is_zero() {
            return Dyadic { mant, exp: 0 };
        }
        let tz = mant.trailing_zeros().expect("nonzero") as i64;
        if tz == 0 {
            Dyadic { mant, exp }
        } else {
            Dyadic {
                mant: mant >> tz,
                exp: exp + tz,
            }
        }
    }

    pub fn zero() -> Dyadic {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Dyadic {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_i64(v: i64) -> Dyadic {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Dyadic {
        Dyadic::new(v, 0)
    }

    /// Exact conversion; panics on NaN or infinity.
    pub fn from_f64(x: f64) -> Dyadic {
        assert!(x.is_finite(), "cannot represent {x}");
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { Sign::Minus } else { Sign::Plus };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Dyadic::new(BigInt::from_biguint(sign, BigUint::from(mant)), exp)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    /// -1, 0, or 1.
    pub fn signum(&self) -> i8 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Exponent of the leading bit: `2^(mag2()-1) <= |self| < 2^mag2()`.
    pub fn mag2(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.mant.bits() as i64 + self.exp
    }

    /// Exact multiplication by `2^k`.
    pub fn shl2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Round to `prec` significant bits in direction `dir`. `prec == 0` keeps
    /// the value exact.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        if prec == 0 || self.mant.is_zero() {
            return self.clone();
        }
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let s = bits - prec as u64;
        let divisor = BigInt::one() << s;
        let (q, r) = self.mant.div_mod_floor(&divisor);
        let q = match dir {
            Round::Down => q,
            Round::Up => {
                if r.is_zero() {
                    q
                } else {
                    q + 1
                }
            }
        };
        Dyadic::new(q, self.exp + s as i64)
    }

    /// Exact addition.
    pub fn add(&self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &rhs.mant << (rhs.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    /// Exact subtraction.
    pub fn sub(&self, rhs: &Dyadic) -> Dyadic {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            mant: -self.mant.clone(),
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Exact multiplication.
    pub fn mul(&self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: &self.mant * &rhs.mant,
            exp: self.exp + rhs.exp,
        }
    }

    /// Directed division to `prec` significant bits (`prec >= 1`).
    pub fn div(&self, rhs: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!rhs.is_zero(), "division by zero");
        assert!(prec >= 1);
        if self.is_zero() {
            return Dyadic::zero();
        }
        let nb = self.mant.bits() as i64;
        let db = rhs.mant.bits() as i64;
        let shift = (prec as i64 + 2 - (nb - db)).max(0) as u64;
        let num = &self.mant << shift;
        let (q, r) = num.div_mod_floor(&rhs.mant);
        let q = match dir {
            Round::Down => q,
            Round::Up => {
                if r.is_zero() {
                    q
                } else {
                    q + 1
                }
            }
        };
        Dyadic::new(q, self.exp - rhs.exp - shift as i64).round(prec, dir)
    }

    /// Directed square root of a non-negative value.
    pub fn sqrt(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(self.signum() >= 0, "sqrt of negative value");
        assert!(prec >= 1);
        if self.is_zero() {
            return Dyadic::zero();
        }
        let bits = self.mant.bits();
        let mut shift = (2 * (prec as u64 + 2)).saturating_sub(bits);
        if (self.exp - shift as i64).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = self.mant.magnitude() << shift;
        let root = m.sqrt();
        let exact = &root * &root == m;
        let root = match dir {
            Round::Down => root,
            Round::Up => {
                if exact {
                    root
                } else {
                    root + BigUint::one()
                }
            }
        };
        Dyadic::new(BigInt::from(root), (self.exp - shift as i64) / 2).round(prec, dir)
    }

    /// Exact conversion to a rational number.
    pub fn to_rat(&self) -> crate::Q {
        if self.exp >= 0 {
            crate::Q::from_integer(&self.mant << self.exp as u64)
        } else {
            crate::Q::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Smallest integer >= self.
    pub fn ceil_int(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.mant << self.exp as u64;
        }
        let den = BigInt::one() << (-self.exp) as u64;
        let (q, r) = self.mant.div_mod_floor(&den);
        if r.is_zero() {
            q
        } else {
            q + 1
        }
    }

    /// Nearest-ish f64 approximation, for reporting only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let shift = bits.saturating_sub(53) as i64;
        let top = (&self.mant >> shift as u64).to_f64().unwrap_or(f64::NAN);
        let e = self.exp + shift;
        if e > i32::MAX as i64 {
            return if self.signum() > 0 { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        if e < i32::MIN as i64 {
            return 0.0;
        }
        top * 2f64.powi(e as i32)
    }

    /// Directed decimal string in scientific notation with `sig` significant
    /// digits, e.g. `-3.333e-1`. Exact zero prints as `0`.
    pub fn to_decimal(&self, sig: u32, dir: Round) -> String {
        assert!(sig >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.signum() < 0;
        let mag_dir = if neg { dir.flip() } else { dir };
        let a = BigInt::from(self.mant.magnitude().clone());
        let e = self.exp;
        // Estimate the decimal exponent and correct until the digit count fits.
        let mut d10 = ((self.mag2() as f64) * std::f64::consts::LOG10_2).floor() as i64;
        for _ in 0..4 {
            let k = sig as i64 - 1 - d10;
            let mut num = &a * BigInt::from(10u32).pow(k.max(0) as u32);
            let mut den = BigInt::from(10u32).pow((-k).max(0) as u32);
            if e >= 0 {
                num <<= e as u64;
            } else {
                den <<= (-e) as u64;
            }
            let (q, r) = num.div_mod_floor(&den);
            let q = match mag_dir {
                Round::Down => q,
                Round::Up => {
                    if r.is_zero() {
                        q
                    } else {
                        q + 1
                    }
                }
            };
            let digits = q.to_string();
            if digits.len() == sig as usize {
                let expo = d10;
                let mut s = String::new();
                if neg {
                    s.push('-');
                }
                s.push_str(&digits[..1]);
                if sig > 1 {
                    s.push('.');
                    s.push_str(&digits[1..]);
                }
                s.push('e');
                s.push_str(&expo.to_string());
                return s;
            }
            // Off-by-one estimate, or rounding carried into an extra digit.
            d10 += digits.len() as i64 - sig as i64;
        }
        unreachable!("decimal exponent search did not settle");
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let sa = self.signum();
        let sb = other.signum();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same nonzero sign: compare leading-bit positions before subtracting.
        let (ma, mb) = (self.mag2(), other.mag2());
        if ma != mb {
            let by_mag = ma.cmp(&mb);
            return if sa > 0 { by_mag } else { by_mag.reverse() };
        }
        self.sub(other).mant.sign().cmp(&Sign::NoSign)
    }
}
