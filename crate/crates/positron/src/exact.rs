//! Exact dyadic (binary rational) arithmetic used as the value domain for
//! posit decoding, the quire and the test oracles.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

/// An exact value of the form `mant * 2^exp`. Closed under +, -, *.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }.normalized()
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::from(1), exp: 0 }
    }

    pub fn from_i128(v: i128) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    /// 2^k
    pub fn pow2(k: i64) -> Self {
        Dyadic { mant: BigInt::from(1), exp: k }
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0) as i64;
        if tz > 0 {
            self.mant >>= tz as usize;
            self.exp += tz;
        }
        self
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let exp = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - exp) as usize;
        let b = &other.mant << (other.exp - exp) as usize;
        Dyadic::new(a + b, exp)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let d = self.sub(other);
        if d.is_zero() {
            Ordering::Equal
        } else if d.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// Magnitude and position data for the shared rounding path. `None` for zero.
    /// Reduces an arbitrarily wide mantissa to at most 127 bits plus a sticky
    /// flag, which preserves round-to-nearest-even at any posit or binary64
    /// precision.
    pub fn round_parts(&self) -> Option<RoundParts> {
        round_parts_biguint(self.mant.is_negative(), self.mant.magnitude().clone(), self.exp, false)
    }

    /// Exact conversion to `f64` when representable, correctly rounded otherwise.
    pub fn to_f64(&self) -> f64 {
        match self.round_parts() {
            None => 0.0,
            Some(p) => p.to_f64(),
        }
    }
}

/// Magnitude of a nonzero value prepared for rounding: `mant * 2^exp`,
/// `sticky` true when nonzero bits were discarded below the mantissa.
#[derive(Clone, Copy, Debug)]
pub struct RoundParts {
    pub neg: bool,
    pub mant: u128,
    pub exp: i64,
    pub sticky: bool,
}

pub fn round_parts_biguint(neg: bool, mag: BigUint, exp: i64, sticky: bool) -> Option<RoundParts> {
    if mag.is_zero() {
        if sticky {
            // Nonzero value entirely below the retained bits: keep one bit.
            return Some(RoundParts { neg, mant: 1, exp, sticky: true });
        }
        return None;
    }
    let bits = mag.bits();
    if bits <= 127 {
        let mut mant: u128 = 0;
        for (i, d) in mag.to_u64_digits().iter().enumerate() {
            mant |= (*d as u128) << (64 * i);
        }
        Some(RoundParts { neg, mant, exp, sticky })
    } else {
        let drop = (bits - 127) as usize;
        let low_nonzero = mag.trailing_zeros().unwrap_or(0) < drop as u64;
        let top = mag >> drop;
        let mut mant: u128 = 0;
        for (i, d) in top.to_u64_digits().iter().enumerate() {
            mant |= (*d as u128) << (64 * i);
        }
        Some(RoundParts { neg, mant, exp: exp + drop as i64, sticky: sticky || low_nonzero })
    }
}

impl RoundParts {
    /// Round to binary64, nearest-even. Assumes the value is within the normal
    /// range of f64 (all values produced by this crate's benchmarks are).
    pub fn to_f64(&self) -> f64 {
        let nbits = 128 - self.mant.leading_zeros();
        let mut m = self.mant;
        let mut e = self.exp;
        let mut sticky = self.sticky;
        if nbits > 53 {
            let drop = nbits - 53;
            let guard = (m >> (drop - 1)) & 1 != 0;
            if drop > 1 {
                sticky |= m & ((1u128 << (drop - 1)) - 1) != 0;
            }
            m >>= drop;
            e += drop as i64;
            if guard && (sticky || m & 1 != 0) {
                m += 1;
            }
        }
        let mut v = m as f64;
        // Split the scaling to keep intermediates in range.
        let (e1, e2) = (e / 2, e - e / 2);
        v *= 2f64.powi(e1 as i32);
        v *= 2f64.powi(e2 as i32);
        if self.neg {
            -v
        } else {
            v
        }
    }
}

/// An exact real or the posit NaR exception value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactReal {
    NaR,
    Finite(Dyadic),
}

impl ExactReal {
    pub fn is_nar(&self) -> bool {
        matches!(self, ExactReal::NaR)
    }

    pub fn finite(&self) -> Option<&Dyadic> {
        match self {
            ExactReal::NaR => None,
            ExactReal::Finite(d) => Some(d),
        }
    }
}

/// Leading quotient bits of `num / den` as (magnitude, exp, sticky), enough to
/// round correctly at any precision up to `bits`.
pub fn div_witness(
    num: &BigUint,
    num_exp: i64,
    den: &BigUint,
    den_exp: i64,
    bits: u64,
) -> Option<(BigUint, i64, bool)> {
    if num.is_zero() {
        return None;
    }
    let shift = (bits + 2 + den.bits()).saturating_sub(num.bits());
    let scaled = num << shift as usize;
    let (q, r) = scaled.div_rem(den);
    Some((q, num_exp - den_exp - shift as i64, !r.is_zero()))
}

/// Quotient bits reduced for the shared rounder.
pub fn div_round_parts(
    num_neg: bool,
    num: &BigUint,
    num_exp: i64,
    den: &BigUint,
    den_exp: i64,
    bits: u64,
) -> Option<RoundParts> {
    let (q, exp, sticky) = div_witness(num, num_exp, den, den_exp, bits)?;
    round_parts_biguint(num_neg, q, exp, sticky)
}

/// Leading root bits of `sqrt(mag * 2^exp)` as (magnitude, exp, sticky).
pub fn sqrt_witness(mag: &BigUint, exp: i64, bits: u64) -> Option<(BigUint, i64, bool)> {
    if mag.is_zero() {
        return None;
    }
    let mut shift = (2 * (bits + 2)).saturating_sub(mag.bits());
    if (exp - shift as i64).rem_euclid(2) != 0 {
        shift += 1;
    }
    let scaled = mag << shift as usize;
    let root = scaled.sqrt();
    let sticky = &root * &root != scaled;
    Some((root, (exp - shift as i64) / 2, sticky))
}

/// Root bits reduced for the shared rounder.
pub fn sqrt_round_parts(mag: &BigUint, exp: i64, bits: u64) -> Option<RoundParts> {
    let (root, exp, sticky) = sqrt_witness(mag, exp, bits)?;
    round_parts_biguint(false, root, exp, sticky)
}

/// Rational `num / den` prepared for rounding (den > 0).
pub fn rational_round_parts(num: &BigInt, den: &BigInt, bits: u64) -> Option<RoundParts> {
    assert!(den.is_positive());
    div_round_parts(num.is_negative(), num.magnitude(), 0, den.magnitude(), 0, bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_basic_algebra() {
        let a = Dyadic::new(BigInt::from(3), -2); // 0.75
        let b = Dyadic::new(BigInt::from(3), -2);
        let p = a.mul(&b);
        assert_eq!(p, Dyadic::new(BigInt::from(9), -4)); // 9/16
        let s = a.add(&b);
        assert_eq!(s, Dyadic::new(BigInt::from(3), -1)); // 1.5
        assert!(a.sub(&b).is_zero());
    }

    #[test]
    fn to_f64_round_trips_doubles() {
        for v in [0.1f64, -3.5, 1.0, 123456.789, 2f64.powi(-40)] {
            let (m, e) = frexp_exact(v);
            let d = Dyadic::new(BigInt::from(m), e);
            assert_eq!(d.to_f64(), v);
        }
    }

    fn frexp_exact(v: f64) -> (i64, i64) {
        let bits = v.to_bits();
        let sign = if bits >> 63 != 0 { -1i64 } else { 1 };
        let biased = ((bits >> 52) & 0x7FF) as i64;
        let frac = (bits & ((1u64 << 52) - 1)) as i64;
        assert!(biased != 0 && biased != 0x7FF);
        (sign * (frac + (1 << 52)), biased - 1075)
    }

    #[test]
    fn div_parts_third() {
        // 1/3 = 0.0101...b with sticky
        let p = rational_round_parts(&BigInt::from(1), &BigInt::from(3), 64).unwrap();
        assert!(p.sticky);
        assert!(!p.neg);
        let approx = p.to_f64();
        assert!((approx - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn sqrt_parts_exact_and_inexact() {
        let p = sqrt_round_parts(&BigUint::from(4u32), 0, 64).unwrap();
        assert!(!p.sticky);
        assert_eq!(p.to_f64(), 2.0);
        let q = sqrt_round_parts(&BigUint::from(2u32), 0, 64).unwrap();
        assert!(q.sticky);
        assert!((q.to_f64() - 2f64.sqrt()).abs() < 1e-15);
    }
}
