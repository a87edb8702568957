//! Oracle cross-checks of the arithmetic library: exhaustive at 8 bits,
//! sampled at the wider widths. The oracle route (exact rationals + the shared
//! rounder) is independent of the fixed-width implementation route.

use crate::exact::Dyadic;
use crate::oracle::{oracle_op, OpKind};
use crate::ops::{self, IntSpec, SignMode};
use crate::posit::Posit;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checked: u64,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, msg: String) {
        if self.failures.len() < 32 {
            self.failures.push(msg);
        } else if self.failures.len() == 32 {
            self.failures.push("... further failures suppressed".into());
        }
    }
}

const BIN_OPS: [OpKind; 4] = [OpKind::Add, OpKind::Sub, OpKind::Mul, OpKind::Div];

fn apply<const N: u32>(op: OpKind, a: Posit<N>, b: Posit<N>) -> Posit<N> {
    match op {
        OpKind::Add => ops::add(a, b),
        OpKind::Sub => ops::sub(a, b),
        OpKind::Mul => ops::mul(a, b),
        OpKind::Div => ops::div(a, b),
        OpKind::Sqrt => ops::sqrt(a),
    }
}

fn check_pair<const N: u32>(r: &mut VerifyReport, a: Posit<N>, b: Posit<N>) {
    for op in BIN_OPS {
        let got = apply(op, a, b);
        let want = oracle_op(op, a, Some(b));
        r.checked += 1;
        if got != want {
            r.fail(format!("{op:?} {a} {b}: got {got}, oracle {want}"));
        }
    }
}

/// Independent nearest-even integer rounding of an exact posit value,
/// saturated to the target range.
fn oracle_to_int(d: &Dyadic, spec: IntSpec) -> i128 {
    let (lo, hi) = match spec {
        IntSpec::I32 => (i32::MIN as i128, i32::MAX as i128),
        IntSpec::U32 => (0, u32::MAX as i128),
        IntSpec::I64 => (i64::MIN as i128, i64::MAX as i128),
        IntSpec::U64 => (0, u64::MAX as i128),
    };
    let (num, den) = if d.exp() >= 0 {
        (d.mant() << d.exp() as usize, BigInt::from(1))
    } else {
        (d.mant().clone(), BigInt::from(1) << (-d.exp()) as usize)
    };
    let (q, rem) = num.div_mod_floor(&den);
    let twice: BigInt = &rem * 2;
    let rounded = match twice.cmp(&den) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1
            }
        }
    };
    let rounded = rounded.max(BigInt::from(lo)).min(BigInt::from(hi));
    let mag: i128 = rounded.abs().try_into().unwrap();
    if rounded.is_negative() {
        -mag
    } else {
        mag
    }
}

/// Exhaustive oracle agreement at n = 8: all 256x256 operand pairs for the
/// binary operations, comparisons and sign injection; all 256 patterns for
/// sqrt and the conversions.
pub fn exhaustive8() -> VerifyReport {
    let mut r = VerifyReport::default();
    for ab in 0u64..256 {
        let a = Posit::<8>::from_bits(ab);
        for bb in 0u64..256 {
            let b = Posit::<8>::from_bits(bb);
            check_pair(&mut r, a, b);
            check_order(&mut r, a, b);
            check_sign_inject(&mut r, a, b);
        }
        check_unary(&mut r, a);
    }
    r
}

fn check_unary<const N: u32>(r: &mut VerifyReport, a: Posit<N>) {
    let got = ops::sqrt(a);
    let want = oracle_op(OpKind::Sqrt, a, None);
    r.checked += 1;
    if got != want {
        r.fail(format!("Sqrt {a}: got {got}, oracle {want}"));
    }
    for spec in [IntSpec::I32, IntSpec::U32, IntSpec::I64, IntSpec::U64] {
        let got = ops::posit_to_int(a, spec);
        let want = match a.exact_value().finite() {
            None => match spec {
                IntSpec::I32 => i32::MIN as i128,
                IntSpec::I64 => i64::MIN as i128,
                _ => 0,
            },
            Some(d) => oracle_to_int(d, spec),
        };
        r.checked += 1;
        if got != want {
            r.fail(format!("{spec:?} {a}: got {got}, oracle {want}"));
        }
    }
    // Integer loads rejoin the rational rounder.
    let v = a.bits() as i64 - 128;
    let got = ops::int_to_posit_i64::<N>(v);
    let want = Posit::<N>::from_rational(&BigInt::from(v), &BigInt::from(1));
    r.checked += 1;
    if got != want {
        r.fail(format!("int {v}: got {got}, oracle {want}"));
    }
}

fn check_order<const N: u32>(r: &mut VerifyReport, a: Posit<N>, b: Posit<N>) {
    let (sa, sb) = (a.signed(), b.signed());
    r.checked += 1;
    if ops::cmp_eq(a, b) != (sa == sb)
        || ops::cmp_lt(a, b) != (sa < sb)
        || ops::cmp_le(a, b) != (sa <= sb)
        || ops::min(a, b).signed() != sa.min(sb)
        || ops::max(a, b).signed() != sa.max(sb)
    {
        r.fail(format!("order {a} {b}"));
        return;
    }
    // Comparisons agree with exact-value order away from NaR.
    if let (Some(va), Some(vb)) = (a.exact_value().finite(), b.exact_value().finite()) {
        let cmp = va.sub(vb);
        if ops::cmp_lt(a, b) != cmp.is_negative() || ops::cmp_eq(a, b) != cmp.is_zero() {
            r.fail(format!("value order {a} {b}"));
        }
    }
}

fn check_sign_inject<const N: u32>(r: &mut VerifyReport, a: Posit<N>, b: Posit<N>) {
    let sb = b.bits() >> (N - 1) & 1 != 0;
    let sa = a.bits() >> (N - 1) & 1 != 0;
    let expect = |neg: bool| if neg != sa { a.neg() } else { a };
    r.checked += 1;
    if ops::sign_inject(a, b, SignMode::Copy) != expect(sb)
        || ops::sign_inject(a, b, SignMode::Negate) != expect(!sb)
        || ops::sign_inject(a, b, SignMode::Xor) != expect(sa != sb)
    {
        r.fail(format!("sign-inject {a} {b}"));
    }
}

/// Deterministic stream of pseudo-random 64-bit values.
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// `pairs` random operand pairs per binary op plus `pairs` sqrt samples,
/// implementation vs oracle, at width N.
pub fn sampled<const N: u32>(pairs: u64, seed: u64) -> VerifyReport {
    let mut rng = SplitMix64(seed ^ N as u64);
    let mut r = VerifyReport::default();
    for _ in 0..pairs {
        let a = Posit::<N>::from_bits(rng.next());
        let b = Posit::<N>::from_bits(rng.next());
        check_pair(&mut r, a, b);
        check_unary(&mut r, a);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sampled_widths_agree() {
        for n in [sampled::<16>(500, 1), sampled::<32>(500, 2), sampled::<64>(500, 3)] {
            assert!(n.ok(), "{:?}", n.failures);
        }
    }

    #[test]
    fn oracle_to_int_rounds_ties_even() {
        let half = |v: i128| Dyadic::new(BigInt::from(v), -1);
        assert_eq!(oracle_to_int(&half(5), IntSpec::I64), 2);
        assert_eq!(oracle_to_int(&half(7), IntSpec::I64), 4);
        assert_eq!(oracle_to_int(&half(-5), IntSpec::I64), -2);
        assert_eq!(oracle_to_int(&Dyadic::from_i128(-3), IntSpec::U64), 0);
        assert_eq!(oracle_to_int(&Dyadic::pow2(100), IntSpec::I32), i32::MAX as i128);
    }
}
