//! Posit bit patterns (es = 2), exact decoding and correctly-rounded encoding.
//!
//! Widths 8, 16, 32 and 64 are supported through the const parameter `N`.
//! The concrete aliases `P8`..`P64` live at the crate root.

use crate::exact::{Dyadic, ExactReal, RoundParts};
use num_bigint::BigInt;
use std::fmt;

/// An `N`-bit posit pattern. The all-zeros pattern is zero, `10...0` is NaR.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Posit<const N: u32>(u64);

pub type P8 = Posit<8>;
pub type P16 = Posit<16>;
pub type P32 = Posit<32>;
pub type P64 = Posit<64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PositClass {
    Zero,
    NaR,
    Normal,
}

/// Unpacked sign/regime/exponent/fraction view of a normal posit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecodedPosit {
    /// Sign bit, 0 or 1.
    pub sign: u8,
    /// Regime run length k.
    pub run_len: u32,
    /// Regime value r: -k when the run bit is 0, k-1 when it is 1.
    pub regime: i64,
    /// Exponent value in 0..=3; bits past the end of the pattern read as 0.
    pub exponent: u32,
    /// Unsigned fraction field F.
    pub frac: u64,
    /// Fraction bit count m, so f = F / 2^m.
    pub frac_bits: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decoded {
    Zero,
    NaR,
    Normal(DecodedPosit),
}

pub(crate) const fn mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl<const N: u32> Posit<N> {
    pub const ZERO: Self = Posit(0);
    pub const NAR: Self = Posit(1 << (N - 1));
    /// maxpos = 2^(4N-8)
    pub const MAXPOS: Self = Posit(mask(N - 1));
    /// minpos = 2^(-4N+8)
    pub const MINPOS: Self = Posit(1);
    pub const ONE: Self = Posit(1 << (N - 2));

    pub const fn from_bits(bits: u64) -> Self {
        Posit(bits & mask(N))
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn classify(self) -> PositClass {
        if self.0 == 0 {
            PositClass::Zero
        } else if self.0 == Self::NAR.0 {
            PositClass::NaR
        } else {
            PositClass::Normal
        }
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn is_nar(self) -> bool {
        self.0 == Self::NAR.0
    }

    /// Posit negation is the two's complement of the pattern. Zero and NaR are
    /// fixed points.
    pub fn neg(self) -> Self {
        Posit(self.0.wrapping_neg() & mask(N))
    }

    pub fn abs(self) -> Self {
        if self.signed() < 0 && !self.is_nar() {
            self.neg()
        } else {
            self
        }
    }

    /// The pattern interpreted as an N-bit two's complement signed integer.
    /// This is the total posit order (NaR least).
    pub fn signed(self) -> i64 {
        let sh = 64 - N;
        ((self.0 << sh) as i64) >> sh
    }

    /// Field decomposition per the posit format. Operates directly on the
    /// pattern; negative posits are not two's complemented first.
    pub fn decode(self) -> Decoded {
        match self.classify() {
            PositClass::Zero => return Decoded::Zero,
            PositClass::NaR => return Decoded::NaR,
            PositClass::Normal => {}
        }
        let w = N - 1;
        let sign = (self.0 >> w) as u8;
        // Align the w-bit body to the top of a u64.
        let body = (self.0 & mask(w)) << (64 - w);
        let r0 = (body >> 63) as u32;
        let run = if r0 == 1 {
            body.leading_ones().min(w)
        } else {
            body.leading_zeros().min(w)
        };
        let regime = if r0 == 0 { -(run as i64) } else { run as i64 - 1 };
        let consumed = run + if run < w { 1 } else { 0 };
        let rem = w - consumed;
        let e_bits = rem.min(2);
        let e_raw = if e_bits > 0 {
            ((body << consumed) >> (64 - e_bits)) as u32
        } else {
            0
        };
        let exponent = e_raw << (2 - e_bits);
        let frac_bits = rem - e_bits;
        let frac = if frac_bits > 0 {
            (body << (consumed + e_bits)) >> (64 - frac_bits)
        } else {
            0
        };
        Decoded::Normal(DecodedPosit { sign, run_len: run, regime, exponent, frac, frac_bits })
    }

    /// Exact value per the posit value formula: ((1-3s)+f) * 2^((1-2s)(4r+e+s)).
    pub fn exact_value(self) -> ExactReal {
        match self.decode() {
            Decoded::Zero => ExactReal::Finite(Dyadic::zero()),
            Decoded::NaR => ExactReal::NaR,
            Decoded::Normal(d) => ExactReal::Finite(d.exact_value()),
        }
    }

    /// Correctly-rounded encoding of an exact value: nearest pattern, ties to
    /// even; saturates at +/-maxpos; nonzero magnitudes below minpos become
    /// +/-minpos.
    pub fn encode_round(v: &ExactReal) -> Self {
        match v {
            ExactReal::NaR => Self::NAR,
            ExactReal::Finite(d) => match d.round_parts() {
                None => Self::ZERO,
                Some(p) => Posit(encode_parts(N, p)),
            },
        }
    }

    pub(crate) fn encode_parts_posit(p: RoundParts) -> Self {
        Posit(encode_parts(N, p))
    }

    /// Exact rational num/den (den > 0) rounded once into the posit format.
    pub fn from_rational(num: &BigInt, den: &BigInt) -> Self {
        match crate::exact::rational_round_parts(num, den, N as u64 + 4) {
            None => Self::ZERO,
            Some(p) => Posit(encode_parts(N, p)),
        }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::encode_round(&ExactReal::Finite(Dyadic::from_i128(v as i128)))
    }

    /// Exact in the float-to-posit direction up to the final posit rounding.
    pub fn from_f64(v: f64) -> Self {
        if v.is_nan() || v.is_infinite() {
            return Self::NAR;
        }
        if v == 0.0 {
            return Self::ZERO;
        }
        let bits = v.to_bits();
        let neg = bits >> 63 != 0;
        let biased = ((bits >> 52) & 0x7FF) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (frac as u128, -1074i64)
        } else {
            ((frac | (1 << 52)) as u128, biased - 1075)
        };
        Posit(encode_parts(N, RoundParts { neg, mant: m, exp: e, sticky: false }))
    }

    pub fn to_f64(self) -> f64 {
        match self.exact_value() {
            ExactReal::NaR => f64::NAN,
            ExactReal::Finite(d) => d.to_f64(),
        }
    }
}

impl DecodedPosit {
    pub fn exact_value(&self) -> Dyadic {
        let m = self.frac_bits;
        if self.sign == 0 {
            let mant = (1i128 << m) + self.frac as i128;
            let exp = 4 * self.regime + self.exponent as i64 - m as i64;
            Dyadic::new(BigInt::from(mant), exp)
        } else {
            let mant = self.frac as i128 - (1i128 << (m + 1));
            let exp = -(4 * self.regime + self.exponent as i64 + 1) - m as i64;
            Dyadic::new(BigInt::from(mant), exp)
        }
    }
}

/// The rounding authority shared by every operation in the crate: build the
/// ideal regime/exponent/fraction bit stream of the magnitude, cut it at N-1
/// bits and round nearest-even on the pattern with guard and sticky bits.
pub(crate) fn encode_parts(n: u32, p: RoundParts) -> u64 {
    debug_assert!(p.mant != 0);
    let w = n - 1;
    let bits = 128 - p.mant.leading_zeros();
    let scale = p.exp + bits as i64 - 1;
    let emax = 4 * (n as i64 - 2);
    if scale > emax {
        return apply_sign(n, mask(w), p.neg);
    }
    if scale < -emax {
        return apply_sign(n, 1, p.neg);
    }
    let r = scale.div_euclid(4);
    let e = scale.rem_euclid(4) as u128;
    let mut u: u64 = 0;
    let mut guard = false;
    let mut sticky = p.sticky;
    let (reg_len, reg_val) = if r >= 0 {
        let len = r as u32 + 2;
        (len, ((1u128 << (len - 1)) - 1) << 1)
    } else {
        let len = (-r) as u32 + 1;
        (len, 1u128)
    };
    place(w, 0, reg_len, reg_val, &mut u, &mut guard, &mut sticky);
    place(w, reg_len as i64, 2, e, &mut u, &mut guard, &mut sticky);
    let frac_len = bits - 1;
    if frac_len > 0 {
        let frac = p.mant & ((1u128 << frac_len) - 1);
        place(w, reg_len as i64 + 2, frac_len, frac, &mut u, &mut guard, &mut sticky);
    }
    if guard && (sticky || u & 1 == 1) {
        u += 1;
    }
    // A nonzero input never rounds to zero or past maxpos.
    let u = u.clamp(1, mask(w));
    apply_sign(n, u, p.neg)
}

/// OR the `len`-bit field `val` into the pattern/guard/sticky trio. Stream
/// position 0 is the bit right after the sign, position w is the guard.
fn place(w: u32, pos: i64, len: u32, val: u128, u: &mut u64, guard: &mut bool, sticky: &mut bool) {
    let end = pos + len as i64;
    if pos < w as i64 {
        let take = (w as i64 - pos).min(len as i64) as u32;
        let top = (val >> (len - take)) as u64;
        *u |= top << (w as i64 - pos - take as i64) as u32;
    }
    if pos <= w as i64 && (w as i64) < end {
        let i = (w as i64 - pos) as u32;
        *guard |= (val >> (len - 1 - i)) & 1 != 0;
    }
    let sfrom = (w as i64 + 1).max(pos);
    if sfrom < end {
        let cnt = (end - sfrom) as u32;
        *sticky |= val & ((1u128 << cnt) - 1) != 0;
    }
}

fn apply_sign(n: u32, u: u64, neg: bool) -> u64 {
    if neg {
        u.wrapping_neg() & mask(n)
    } else {
        u
    }
}

impl<const N: u32> fmt::Debug for Posit<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_hex(N, self.0))
    }
}

impl<const N: u32> fmt::Display for Posit<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_hex(N, self.0))
    }
}

/// Textual rendering of patterns, e.g. `p16:0xFA96`.
pub fn format_hex(n: u32, bits: u64) -> String {
    format!("p{}:0x{:0width$X}", n, bits & mask(n), width = (n / 4) as usize)
}

/// Parses `p<width>:0x<hex>` back into (width, bits).
pub fn parse_hex(s: &str) -> Result<(u32, u64), String> {
    let rest = s.strip_prefix('p').ok_or_else(|| format!("missing 'p' prefix in {s:?}"))?;
    let (wpart, hpart) =
        rest.split_once(":0x").ok_or_else(|| format!("missing ':0x' separator in {s:?}"))?;
    let n: u32 = wpart.parse().map_err(|_| format!("bad width in {s:?}"))?;
    if ![8, 16, 32, 64].contains(&n) {
        return Err(format!("unsupported width {n}"));
    }
    let bits = u64::from_str_radix(hpart, 16).map_err(|_| format!("bad hex in {s:?}"))?;
    if n < 64 && bits > mask(n) {
        return Err(format!("pattern wider than {n} bits in {s:?}"));
    }
    Ok((n, bits))
}
