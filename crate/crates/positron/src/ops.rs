//! Correctly-rounded posit arithmetic, comparisons, sign manipulation and
//! integer conversions. Everything here works on fixed-width machine integers
//! (u64/u128 mantissas with guard and sticky bits); the arbitrary-precision
//! oracle in `crate::oracle` provides the independent cross-check.

use crate::exact::RoundParts;
use crate::posit::{Decoded, Posit};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Magnitude of a normal posit: value = (-1)^neg * mant * 2^exp, mant has the
/// hidden bit set.
#[derive(Clone, Copy, Debug)]
struct Mag {
    neg: bool,
    mant: u64,
    exp: i64,
}

fn unpack<const N: u32>(p: Posit<N>) -> Option<Mag> {
    let neg = p.signed() < 0;
    match p.abs().decode() {
        Decoded::Normal(d) => {
            debug_assert_eq!(d.sign, 0);
            let mant = (1u64 << d.frac_bits) | d.frac;
            let exp = 4 * d.regime + d.exponent as i64 - d.frac_bits as i64;
            Some(Mag { neg, mant, exp })
        }
        _ => None,
    }
}

fn pack<const N: u32>(neg: bool, mant: u128, exp: i64, sticky: bool) -> Posit<N> {
    if mant == 0 && !sticky {
        return Posit::ZERO;
    }
    Posit::encode_parts_posit(RoundParts { neg, mant, exp, sticky })
}

pub fn add<const N: u32>(a: Posit<N>, b: Posit<N>) -> Posit<N> {
    if a.is_nar() || b.is_nar() {
        return Posit::NAR;
    }
    if a.is_zero() {
        return b;
    }
    if b.is_zero() {
        return a;
    }
    let x = unpack(a).unwrap();
    let y = unpack(b).unwrap();
    let (hi, lo) = if x.exp >= y.exp { (x, y) } else { (y, x) };
    let delta = hi.exp - lo.exp;
    let sh = |m: Mag| if m.neg { -(m.mant as i128) } else { m.mant as i128 };
    if delta <= 64 {
        // Exact path: mantissas fit in 126 bits after alignment.
        let v = (sh(hi) << delta) + sh(lo);
        if v == 0 {
            return Posit::ZERO;
        }
        pack(v < 0, v.unsigned_abs(), lo.exp, false)
    } else {
        // The smaller operand lies entirely below the rounding cut.
        let base = sh(hi) << 64;
        let exp = hi.exp - 64;
        let mag = if hi.neg == lo.neg {
            base.unsigned_abs()
        } else {
            base.unsigned_abs() - 1
        };
        pack(hi.neg, mag, exp, true)
    }
}

pub fn sub<const N: u32>(a: Posit<N>, b: Posit<N>) -> Posit<N> {
    add(a, b.neg())
}

pub fn mul<const N: u32>(a: Posit<N>, b: Posit<N>) -> Posit<N> {
    if a.is_nar() || b.is_nar() {
        return Posit::NAR;
    }
    if a.is_zero() || b.is_zero() {
        return Posit::ZERO;
    }
    let x = unpack(a).unwrap();
    let y = unpack(b).unwrap();
    pack(x.neg != y.neg, x.mant as u128 * y.mant as u128, x.exp + y.exp, false)
}

pub fn div<const N: u32>(a: Posit<N>, b: Posit<N>) -> Posit<N> {
    if a.is_nar() || b.is_nar() || b.is_zero() {
        return Posit::NAR;
    }
    if a.is_zero() {
        return Posit::ZERO;
    }
    let x = unpack(a).unwrap();
    let y = unpack(b).unwrap();
    // Normalize so the quotient always carries 64..=65 significant bits.
    let shift = 64 + bitlen(y.mant) - bitlen(x.mant);
    let num = (x.mant as u128) << shift;
    let q = num / y.mant as u128;
    let r = num % y.mant as u128;
    pack(x.neg != y.neg, q, x.exp - y.exp - shift as i64, r != 0)
}

pub fn sqrt<const N: u32>(a: Posit<N>) -> Posit<N> {
    if a.is_nar() {
        return Posit::NAR;
    }
    if a.is_zero() {
        return Posit::ZERO;
    }
    let x = unpack(a).unwrap();
    if x.neg {
        return Posit::NAR;
    }
    let mut k = 126 - bitlen(x.mant);
    if (x.exp - k as i64).rem_euclid(2) != 0 {
        k += 1;
    }
    let v = (x.mant as u128) << k;
    let q = isqrt_u128(v);
    pack(false, q, (x.exp - k as i64) / 2, q * q != v)
}

fn bitlen(v: u64) -> u32 {
    64 - v.leading_zeros()
}

fn isqrt_u128(v: u128) -> u128 {
    if v == 0 {
        return 0;
    }
    let mut x = (v as f64).sqrt() as u128 + 2;
    loop {
        let y = (x + v / x) / 2;
        if y >= x {
            break;
        }
        x = y;
    }
    while x * x > v {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= v {
        x += 1;
    }
    x
}

/// Selection per the total posit order (NaR least).
pub fn min<const N: u32>(a: Posit<N>, b: Posit<N>) -> Posit<N> {
    if a.signed() <= b.signed() {
        a
    } else {
        b
    }
}

pub fn max<const N: u32>(a: Posit<N>, b: Posit<N>) -> Posit<N> {
    if a.signed() >= b.signed() {
        a
    } else {
        b
    }
}

pub fn cmp_eq<const N: u32>(a: Posit<N>, b: Posit<N>) -> bool {
    a.signed() == b.signed()
}

pub fn cmp_lt<const N: u32>(a: Posit<N>, b: Posit<N>) -> bool {
    a.signed() < b.signed()
}

pub fn cmp_le<const N: u32>(a: Posit<N>, b: Posit<N>) -> bool {
    a.signed() <= b.signed()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignMode {
    Copy,
    Negate,
    Xor,
}

/// Replace the arithmetic sign of `a` using the sign of `b`; realized as a
/// conditional two's complement of the pattern.
pub fn sign_inject<const N: u32>(a: Posit<N>, b: Posit<N>, mode: SignMode) -> Posit<N> {
    let sa = a.bits() >> (N - 1) & 1;
    let sb = b.bits() >> (N - 1) & 1;
    let target = match mode {
        SignMode::Copy => sb,
        SignMode::Negate => sb ^ 1,
        SignMode::Xor => sa ^ sb,
    };
    if sa != target {
        a.neg()
    } else {
        a
    }
}

/// Integer conversion targets of the PCVT instruction family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntSpec {
    I32,
    U32,
    I64,
    U64,
}

impl IntSpec {
    fn range(self) -> (i128, i128) {
        match self {
            IntSpec::I32 => (i32::MIN as i128, i32::MAX as i128),
            IntSpec::U32 => (0, u32::MAX as i128),
            IntSpec::I64 => (i64::MIN as i128, i64::MAX as i128),
            IntSpec::U64 => (0, u64::MAX as i128),
        }
    }

    fn nar_value(self) -> i128 {
        match self {
            IntSpec::I32 => i32::MIN as i128,
            IntSpec::I64 => i64::MIN as i128,
            IntSpec::U32 | IntSpec::U64 => 0,
        }
    }
}

/// Round-to-nearest-even conversion to an integer, saturated to the target
/// range. NaR maps to the most negative signed value, 0 for unsigned targets.
/// The result is returned as the two's complement value in an i128.
pub fn posit_to_int<const N: u32>(p: Posit<N>, spec: IntSpec) -> i128 {
    if p.is_nar() {
        return spec.nar_value();
    }
    if p.is_zero() {
        return 0;
    }
    let m = unpack(p).unwrap();
    let (lo, hi) = spec.range();
    let mag: u128 = if m.exp >= 0 {
        if m.exp as u32 + bitlen(m.mant) > 67 {
            // Far beyond any target range.
            return if m.neg { lo } else { hi };
        }
        (m.mant as u128) << m.exp
    } else {
        let s = (-m.exp) as u32;
        if s >= 128 {
            0
        } else {
            let q = (m.mant as u128) >> s;
            let guard = s >= 1 && s <= 127 && (m.mant as u128) >> (s - 1) & 1 != 0;
            let sticky = s >= 2 && m.mant as u128 & ((1u128 << (s - 1)) - 1) != 0;
            if guard && (sticky || q & 1 != 0) {
                q + 1
            } else {
                q
            }
        }
    };
    let v = if m.neg { -(mag as i128) } else { mag as i128 };
    v.clamp(lo, hi)
}

pub fn int_to_posit_i64<const N: u32>(v: i64) -> Posit<N> {
    if v == 0 {
        return Posit::ZERO;
    }
    pack(v < 0, v.unsigned_abs() as u128, 0, false)
}

pub fn int_to_posit_u64<const N: u32>(v: u64) -> Posit<N> {
    if v == 0 {
        return Posit::ZERO;
    }
    pack(false, v as u128, 0, false)
}

/// Bit-level register move (PMV.X.W / PMV.W.X): identity on patterns.
pub fn bit_move<const N: u32>(p: Posit<N>) -> Posit<N> {
    p
}

impl<const N: u32> Add for Posit<N> {
    type Output = Posit<N>;
    fn add(self, rhs: Self) -> Self {
        add(self, rhs)
    }
}

impl<const N: u32> Sub for Posit<N> {
    type Output = Posit<N>;
    fn sub(self, rhs: Self) -> Self {
        sub(self, rhs)
    }
}

impl<const N: u32> Mul for Posit<N> {
    type Output = Posit<N>;
    fn mul(self, rhs: Self) -> Self {
        mul(self, rhs)
    }
}

impl<const N: u32> Div for Posit<N> {
    type Output = Posit<N>;
    fn div(self, rhs: Self) -> Self {
        div(self, rhs)
    }
}

impl<const N: u32> Neg for Posit<N> {
    type Output = Posit<N>;
    fn neg(self) -> Self {
        Posit::neg(self)
    }
}
