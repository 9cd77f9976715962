//! Validated interval arithmetic on dyadic endpoints.
//!
//! Every operation returns an interval guaranteed to contain the exact real
//! result. Ring operations on dyadics are exact, so the only widening comes
//! from the outward rounding applied at the working precision and from the
//! rigorous remainder bounds of the elementary-function series.
//!
//! An interval carries its working precision in bits; `prec == 0` means
//! "exact, never round" and is reserved for small integer constants. Binary
//! operations round at the larger of the two operand precisions.

use crate::dyadic::{Dyadic, Round};
use num_bigint::BigInt;
use num_rational::BigRational;

pub const DEFAULT_PREC: u32 = 128;

#[derive(Clone, Debug)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Interval {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi, prec }
    }

    pub fn point(v: Dyadic, prec: u32) -> Interval {
        Interval {
            lo: v.clone(),
            hi: v,
            prec,
        }
    }

    pub fn from_i64(v: i64) -> Interval {
        Interval::point(Dyadic::from_i64(v), 0)
    }

    pub fn from_f64(v: f64, prec: u32) -> Interval {
        Interval::point(Dyadic::from_f64(v), prec)
    }

    pub fn from_rat(q: &BigRational, prec: u32) -> Interval {
        let n = Dyadic::from_bigint(q.numer().clone());
        let d = Dyadic::from_bigint(q.denom().clone());
        if n.is_zero() {
            return Interval::point(Dyadic::zero(), prec);
        }
        Interval {
            lo: n.div(&d, prec.max(1), Round::Down),
            hi: n.div(&d, prec.max(1), Round::Up),
            prec,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(mut self, prec: u32) -> Interval {
        self.prec = prec;
        self
    }

    fn join(&self, rhs: &Interval) -> u32 {
        self.prec.max(rhs.prec)
    }

    /// Working precision for operations that must round (division, roots,
    /// elementary functions): exact inputs fall back to the default.
    fn eff(prec: u32) -> u32 {
        if prec == 0 {
            DEFAULT_PREC
        } else {
            prec
        }
    }

    fn rounded(lo: Dyadic, hi: Dyadic, prec: u32) -> Interval {
        Interval {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
            prec,
        }
    }

    pub fn add(&self, rhs: &Interval) -> Interval {
        Interval::rounded(self.lo.add(&rhs.lo), self.hi.add(&rhs.hi), self.join(rhs))
    }

    pub fn sub(&self, rhs: &Interval) -> Interval {
        Interval::rounded(self.lo.sub(&rhs.hi), self.hi.sub(&rhs.lo), self.join(rhs))
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, rhs: &Interval) -> Interval {
        let cands = [
            self.lo.mul(&rhs.lo),
            self.lo.mul(&rhs.hi),
            self.hi.mul(&rhs.lo),
            self.hi.mul(&rhs.hi),
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Interval::rounded(lo, hi, self.join(rhs))
    }

    /// Tight square: the result is never negative even when `0 ∈ self`.
    pub fn square(&self) -> Interval {
        let (lo, hi) = if self.lo.signum() >= 0 {
            (self.lo.mul(&self.lo), self.hi.mul(&self.hi))
        } else if self.hi.signum() <= 0 {
            (self.hi.mul(&self.hi), self.lo.mul(&self.lo))
        } else {
            let a = self.lo.mul(&self.lo);
            let b = self.hi.mul(&self.hi);
            (Dyadic::zero(), a.max(b))
        };
        Interval::rounded(lo, hi, self.prec)
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn checked_div(&self, rhs: &Interval) -> Option<Interval> {
        if rhs.contains_zero() {
            return None;
        }
        let prec = Interval::eff(self.join(rhs));
        let d = |a: &Dyadic, b: &Dyadic, dir: Round| a.div(b, prec, dir);
        let (lo, hi) = if rhs.lo.signum() > 0 {
            if self.lo.signum() >= 0 {
                (d(&self.lo, &rhs.hi, Round::Down), d(&self.hi, &rhs.lo, Round::Up))
            } else if self.hi.signum() <= 0 {
                (d(&self.lo, &rhs.lo, Round::Down), d(&self.hi, &rhs.hi, Round::Up))
            } else {
                (d(&self.lo, &rhs.lo, Round::Down), d(&self.hi, &rhs.lo, Round::Up))
            }
        } else {
            // rhs.hi < 0
            if self.lo.signum() >= 0 {
                (d(&self.hi, &rhs.hi, Round::Down), d(&self.lo, &rhs.lo, Round::Up))
            } else if self.hi.signum() <= 0 {
                (d(&self.hi, &rhs.lo, Round::Down), d(&self.lo, &rhs.hi, Round::Up))
            } else {
                (d(&self.hi, &rhs.hi, Round::Down), d(&self.lo, &rhs.hi, Round::Up))
            }
        };
        Some(Interval::new(lo, hi, prec))
    }

    pub fn div(&self, rhs: &Interval) -> Interval {
        self.checked_div(rhs)
            .expect("division by an interval containing zero")
    }

    pub fn recip(&self) -> Interval {
        Interval::from_i64(1).with_prec(self.prec).div(self)
    }

    /// Square root; requires a provably non-negative interval.
    pub fn sqrt(&self) -> Interval {
        assert!(self.lo.signum() >= 0, "sqrt of an interval below zero");
        let prec = Interval::eff(self.prec);
        Interval {
            lo: self.lo.sqrt(prec, Round::Down),
            hi: self.hi.sqrt(prec, Round::Up),
            prec,
        }
    }

    pub fn abs(&self) -> Interval {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            self.neg()
        } else {
            Interval {
                lo: Dyadic::zero(),
                hi: self.lo.neg().max(self.hi.clone()),
                prec: self.prec,
            }
        }
    }

    /// Integer power by repeated squaring; negative exponents go through the
    /// reciprocal and require an interval excluding zero.
    pub fn powi(&self, n: i64) -> Interval {
        if n == 0 {
            return Interval::from_i64(1).with_prec(self.prec);
        }
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut result: Option<Interval> = None;
        let mut base = self.clone();
        let mut k = n as u64;
        loop {
            if k & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.square();
        }
        result.unwrap()
    }

    /// Hull of the two intervals.
    pub fn hull(&self, rhs: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(rhs.lo.clone()),
            hi: self.hi.clone().max(rhs.hi.clone()),
            prec: self.join(rhs),
        }
    }

    /// Enclosure of `min(x, y)` over the two intervals.
    pub fn min_enclosure(&self, rhs: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(rhs.lo.clone()),
            hi: self.hi.clone().min(rhs.hi.clone()),
            prec: self.join(rhs),
        }
    }

    /// Enclosure of `max(x, y)` over the two intervals.
    pub fn max_enclosure(&self, rhs: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().max(rhs.lo.clone()),
            hi: self.hi.clone().max(rhs.hi.clone()),
            prec: self.join(rhs),
        }
    }

    pub fn intersect(&self, rhs: &Interval) -> Option<Interval> {
        let lo = self.lo.clone().max(rhs.lo.clone());
        let hi = self.hi.clone().min(rhs.hi.clone());
        if lo <= hi {
            Some(Interval::new(lo, hi, self.join(rhs)))
        } else {
            None
        }
    }

    /// Intersect with `[lo, hi]`; the caller guarantees the true value lies in
    /// both, so the result is never empty in a sound computation.
    pub fn clamp(&self, lo: Dyadic, hi: Dyadic) -> Interval {
        debug_assert!(lo <= hi);
        let new_lo = self.lo.clone().max(lo).min(hi.clone());
        let new_hi = self.hi.clone().min(hi).max(new_lo.clone());
        Interval {
            lo: new_lo,
            hi: new_hi,
            prec: self.prec,
        }
    }

    pub fn overlaps(&self, rhs: &Interval) -> bool {
        self.lo <= rhs.hi && rhs.lo <= self.hi
    }

    pub fn contains(&self, rhs: &Interval) -> bool {
        self.lo <= rhs.lo && rhs.hi <= self.hi
    }

    pub fn contains_rat(&self, q: &BigRational) -> bool {
        let enc = Interval::from_rat(q, self.prec.max(DEFAULT_PREC));
        self.lo <= enc.lo && enc.hi <= self.hi
    }

    pub fn definitely_gt(&self, rhs: &Interval) -> bool {
        self.lo > rhs.hi
    }

    pub fn definitely_lt(&self, rhs: &Interval) -> bool {
        self.hi < rhs.lo
    }

    pub fn definitely_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    /// Width over magnitude, as an f64 estimate for diagnostics.
    pub fn rel_width_f64(&self) -> f64 {
        if self.lo.is_zero() && self.hi.is_zero() {
            return 0.0;
        }
        let mag = self.lo.abs().max(self.hi.abs());
        self.width().to_f64() / mag.to_f64()
    }

    /// Separation between two intervals relative to their magnitude; zero when
    /// they overlap. Used by tests asserting identities at a tolerance.
    pub fn rel_gap_f64(&self, rhs: &Interval) -> f64 {
        let gap = self.lo.sub(&rhs.hi).max(rhs.lo.sub(&self.hi));
        if gap.signum() <= 0 {
            return 0.0;
        }
        let mag = self.lo.abs().max(rhs.lo.abs()).max(Dyadic::one());
        gap.to_f64() / mag.to_f64()
    }

    pub fn mid_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64()
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64()
    }

    /// Directed decimal endpoints, lower rounded down and upper rounded up.
    pub fn to_decimal_pair(&self, sig: u32) -> (String, String) {
        (
            self.lo.to_decimal(sig, Round::Down),
            self.hi.to_decimal(sig, Round::Up),
        )
    }

    /// `ceil` of the enclosed value, when the enclosure pins down a single
    /// integer answer.
    pub fn ceil_exact(&self) -> Option<BigInt> {
        let c_lo = self.lo.ceil_int();
        let c_hi = self.hi.ceil_int();
        if c_lo == c_hi {
            Some(c_lo)
        } else {
            None
        }
    }

    /// exp with rigorous remainder bounds; monotone on endpoints.
    pub fn exp(&self) -> Interval {
        let prec = Interval::eff(self.prec);
        Interval {
            lo: exp_dir(&self.lo, prec, Round::Down),
            hi: exp_dir(&self.hi, prec, Round::Up),
            prec,
        }
    }

    /// Natural log; requires a provably positive interval.
    pub fn ln(&self) -> Interval {
        assert!(self.lo.signum() > 0, "ln of an interval not strictly positive");
        let prec = Interval::eff(self.prec);
        Interval {
            lo: ln_dir(&self.lo, prec, Round::Down),
            hi: ln_dir(&self.hi, prec, Round::Up),
            prec,
        }
    }
}

impl PartialEq for Interval {
    fn eq(&self, other: &Interval) -> bool {
        self.lo == other.lo && self.hi == other.hi
    }
}

/// Directed bound on e^x. Halve the argument until |u| <= 1/4, run the Taylor
/// series with an explicit geometric tail bound, then square back up.
fn exp_dir(x: &Dyadic, prec: u32, dir: Round) -> Dyadic {
    let w = prec + 32;
    if x.is_zero() {
        return Dyadic::one();
    }
    let halvings = (x.mag2() + 2).max(0) as u32;
    let u = x.shl2(-(halvings as i64));
    let ui = Interval::point(u, w);
    // Taylor sum with tail: |R_n| <= |term_{n+1}| / (1 - |u|) <= 2|term_{n+1}|.
    let mut sum = Interval::from_i64(1).with_prec(w);
    let mut term = Interval::from_i64(1).with_prec(w);
    let mut i: i64 = 1;
    loop {
        term = term.mul(&ui).div(&Interval::from_i64(i).with_prec(w));
        sum = sum.add(&term);
        let tb = term.abs();
        if !sum.lo().is_zero() && tb.hi().is_zero() {
            break;
        }
        if !tb.hi().is_zero() && tb.hi().mag2() < sum.lo().mag2() - (w as i64 + 8) {
            break;
        }
        i += 1;
        assert!(i < 1000, "exp series failed to converge");
    }
    let tail = term.abs().hi().shl2(1);
    let mut enc = Interval::new(sum.lo().sub(&tail), sum.hi().add(&tail), w);
    for _ in 0..halvings {
        enc = enc.square();
    }
    match dir {
        Round::Down => enc.lo().round(prec, Round::Down),
        Round::Up => enc.hi().round(prec, Round::Up),
    }
}

/// Directed bound on ln x for x > 0 via atanh series on the reduced mantissa
/// plus an exact multiple of ln 2.
fn ln_dir(x: &Dyadic, prec: u32, dir: Round) -> Dyadic {
    assert!(x.signum() > 0);
    let w = prec + 32;
    // x = m * 2^k with m in [3/4, 3/2).
    let mut m = x.shl2(-(x.mag2() - 1)); // now in [1, 2)
    let mut k = x.mag2() - 1;
    let three_halves = Dyadic::new(BigInt::from(3), -1);
    if m >= three_halves {
        m = m.shl2(-1);
        k += 1;
    }
    let ln_m = atanh_log(&Interval::point(m, w), w);
    let enc = if k == 0 {
        ln_m
    } else {
        let ln2 = atanh_log(&Interval::from_i64(2).with_prec(w), w);
        ln_m.add(&ln2.mul(&Interval::from_i64(k).with_prec(w)))
    };
    match dir {
        Round::Down => enc.lo().round(prec, Round::Down),
        Round::Up => enc.hi().round(prec, Round::Up),
    }
}

/// ln m = 2 atanh t with t = (m-1)/(m+1), for m in an interval within
/// [3/4, 2]. Tail after the i-th odd term is bounded by |t|^(2i+3) * 3.
fn atanh_log(m: &Interval, w: u32) -> Interval {
    let one = Interval::from_i64(1).with_prec(w);
    let t = m.sub(&one).div(&m.add(&one));
    let t2 = t.square();
    let mut term = t.clone();
    let mut sum = t.clone();
    let mut i: i64 = 1;
    loop {
        term = term.mul(&t2);
        let contrib = term.div(&Interval::from_i64(2 * i + 1).with_prec(w));
        sum = sum.add(&contrib);
        let tb = contrib.abs();
        if tb.hi().is_zero()
            || (!sum.lo().is_zero()
                && tb.hi().mag2() < sum.lo().abs().max(Dyadic::one()).mag2() - (w as i64 + 8))
        {
            break;
        }
        i += 1;
        assert!(i < 2000, "log series failed to converge");
    }
    let tail = term.abs().hi().mul(&Dyadic::from_i64(3));
    let s = Interval::new(sum.lo().sub(&tail), sum.hi().add(&tail), w);
    s.add(&s)
}
