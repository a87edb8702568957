//! Logarithm-approximate multiplication, division and square root: Mitchell
//! log-domain arithmetic on the decoded (scale, fraction) pair, re-encoded
//! through the standard rounding path so special-case handling is shared with
//! the exact units.

use crate::exact::{Dyadic, RoundParts};
use crate::posit::{Decoded, Posit};
use num_bigint::BigInt;
use num_traits::Signed;

/// Magnitude as (1 + F/2^m) * 2^scale.
struct LogForm {
    neg: bool,
    frac: u64,
    frac_bits: u32,
    scale: i64,
}

fn unpack<const N: u32>(p: Posit<N>) -> Option<LogForm> {
    let neg = p.signed() < 0;
    match p.abs().decode() {
        Decoded::Normal(d) => Some(LogForm {
            neg,
            frac: d.frac,
            frac_bits: d.frac_bits,
            scale: 4 * d.regime + d.exponent as i64,
        }),
        _ => None,
    }
}

fn pack<const N: u32>(neg: bool, mant: u128, exp: i64) -> Posit<N> {
    Posit::encode_parts_posit(RoundParts { neg, mant, exp, sticky: false })
}

/// Mitchell multiplication: fractions add; a carry out of the fraction bumps
/// the scale. Exact whenever either fraction is zero.
pub fn approx_mul<const N: u32>(a: Posit<N>, b: Posit<N>) -> Posit<N> {
    if a.is_nar() || b.is_nar() {
        return Posit::NAR;
    }
    if a.is_zero() || b.is_zero() {
        return Posit::ZERO;
    }
    let x = unpack(a).unwrap();
    let y = unpack(b).unwrap();
    let m = x.frac_bits.max(y.frac_bits);
    let sum = ((x.frac as u128) << (m - x.frac_bits)) + ((y.frac as u128) << (m - y.frac_bits));
    let (scale, frac) = if sum >> m != 0 {
        (x.scale + y.scale + 1, sum - (1 << m))
    } else {
        (x.scale + y.scale, sum)
    };
    pack(x.neg != y.neg, (1 << m) | frac, scale - m as i64)
}

/// Log-domain division: fractions subtract with a borrow from the scale.
pub fn approx_div<const N: u32>(a: Posit<N>, b: Posit<N>) -> Posit<N> {
    if a.is_nar() || b.is_nar() || b.is_zero() {
        return Posit::NAR;
    }
    if a.is_zero() {
        return Posit::ZERO;
    }
    let x = unpack(a).unwrap();
    let y = unpack(b).unwrap();
    let m = x.frac_bits.max(y.frac_bits);
    let diff = ((x.frac as i128) << (m - x.frac_bits)) - ((y.frac as i128) << (m - y.frac_bits));
    let (scale, frac) = if diff < 0 {
        (x.scale - y.scale - 1, (diff + (1 << m)) as u128)
    } else {
        (x.scale - y.scale, diff as u128)
    };
    pack(x.neg != y.neg, (1 << m) | frac, scale - m as i64)
}

/// Log-domain square root: halve the fraction for even scales, fold the odd
/// scale bit into the fraction otherwise.
pub fn approx_sqrt<const N: u32>(a: Posit<N>) -> Posit<N> {
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
    let m = x.frac_bits as i64;
    if x.scale.rem_euclid(2) == 0 {
        // (1 + f/2) * 2^(scale/2)
        let mant = (2u128 << m) + x.frac as u128;
        pack(false, mant, x.scale / 2 - m - 1)
    } else {
        // (1 + (1+f)/2) * 2^((scale-1)/2)
        let mant = (3u128 << m) + x.frac as u128;
        pack(false, mant, (x.scale - 1) / 2 - m - 1)
    }
}

/// True when |a - b| <= (num/den) * |b|, compared exactly.
pub fn rel_err_within(a: &Dyadic, b: &Dyadic, num: u32, den: u32) -> bool {
    let diff = a.sub(b).abs();
    let lhs = diff.mul(&Dyadic::new(BigInt::from(den), 0));
    let rhs = b.abs().mul(&Dyadic::new(BigInt::from(num), 0));
    !lhs.sub(&rhs).mant().is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops;
    use crate::posit::{P16, P64};

    #[test]
    fn exact_on_powers_of_two() {
        let x = P64::from_f64(1.3125);
        let p8 = P64::from_i64(8);
        assert_eq!(approx_mul(p8, x), ops::mul(p8, x));
        assert_eq!(approx_div(x, p8), ops::div(x, p8));
        assert_eq!(approx_sqrt(P64::from_i64(4)), P64::from_i64(2));
        assert_eq!(approx_sqrt(P64::from_i64(1)), P64::from_i64(1));
    }

    #[test]
    fn mitchell_mul_error_at_half() {
        // 1.5 * 1.5 = 2.25 approximated as 2.0
        let x = P16::from_f64(1.5);
        assert_eq!(approx_mul(x, x), P16::from_i64(2));
    }

    #[test]
    fn div_self_is_one() {
        for v in [1.5f64, 3.25, 0.0078125, -17.0, 123456.0] {
            let p = P64::from_f64(v);
            assert_eq!(approx_div(p, p), P64::from_i64(1), "v={v}");
        }
    }

    #[test]
    fn special_values_match_exact_units() {
        let one = P64::from_i64(1);
        assert!(approx_div(one, P64::ZERO).is_nar());
        assert!(approx_mul(P64::NAR, one).is_nar());
        assert!(approx_sqrt(P64::from_i64(-2)).is_nar());
        assert!(approx_mul(P64::ZERO, one).is_zero());
        assert_eq!(approx_div(one, one), one);
        assert_eq!(approx_mul(P64::MAXPOS, P64::MAXPOS), P64::MAXPOS);
    }

    #[test]
    fn sqrt_error_bound_spot() {
        // sqrt(2) ~ 1.4142 approximated as 1.5: +6.07% relative error.
        let two = P64::from_i64(2);
        let approx = approx_sqrt(two).exact_value();
        let exact = ops::sqrt(two).exact_value();
        assert!(rel_err_within(
            approx.finite().unwrap(),
            exact.finite().unwrap(),
            65,
            1000
        ));
    }
}
