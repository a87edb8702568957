//! Arithmetic modes the benchmark kernels are generic over: IEEE-754 double
//! with fused MAC, posit64 with and without the quire, and the high-precision
//! reference. Every mode counts its operations.

use crate::exact::{rational_round_parts, Dyadic};
use crate::oracle::{Mpf, MpfCtx};
use crate::posit::P64;
use crate::quire::Q64;
use crate::{approx, ops};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::cell::Cell;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ArithMode {
    DoubleFma,
    Posit64Quire,
    Posit64NoQuire,
    Reference,
}

impl ArithMode {
    pub const ALL: [ArithMode; 4] =
        [ArithMode::DoubleFma, ArithMode::Posit64Quire, ArithMode::Posit64NoQuire, ArithMode::Reference];

    pub fn name(self) -> &'static str {
        match self {
            ArithMode::DoubleFma => "double-fma",
            ArithMode::Posit64Quire => "posit64-quire",
            ArithMode::Posit64NoQuire => "posit64-noquire",
            ArithMode::Reference => "reference",
        }
    }

    pub fn parse(s: &str) -> Option<ArithMode> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }
}

/// Operation tally of one kernel run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub muls: u64,
    pub adds: u64,
    pub divs: u64,
    pub sqrts: u64,
    pub qmadds: u64,
    pub qrounds: u64,
}

#[derive(Debug, Default)]
pub struct Counters {
    muls: Cell<u64>,
    adds: Cell<u64>,
    divs: Cell<u64>,
    sqrts: Cell<u64>,
    qmadds: Cell<u64>,
    qrounds: Cell<u64>,
}

impl Counters {
    fn bump(c: &Cell<u64>) {
        c.set(c.get() + 1);
    }

    pub fn snapshot(&self) -> OpCounts {
        OpCounts {
            muls: self.muls.get(),
            adds: self.adds.get(),
            divs: self.divs.get(),
            sqrts: self.sqrts.get(),
            qmadds: self.qmadds.get(),
            qrounds: self.qrounds.get(),
        }
    }
}

/// One arithmetic mode: a value type, an accumulator type for inner reduction
/// loops, and the rounding convention tying them together.
pub trait Arith {
    type V: Clone;
    type Acc;

    /// The exact rational rounded once into this mode's format.
    fn from_rational(&self, r: &BigRational) -> Self::V;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn sub(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn div(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn sqrt(&self, a: &Self::V) -> Self::V;
    fn neg(&self, a: &Self::V) -> Self::V;
    /// `x + a*b` with this mode's fused-MAC convention.
    fn mac1(&self, x: &Self::V, a: &Self::V, b: &Self::V) -> Self::V;
    /// `x - a*b` with this mode's fused-MAC convention.
    fn msub1(&self, x: &Self::V, a: &Self::V, b: &Self::V) -> Self::V;

    fn acc_zero(&self) -> Self::Acc;
    /// Accumulator holding `x` (quire initialization sequence).
    fn acc_init(&self, x: &Self::V) -> Self::Acc;
    fn mac(&self, acc: &mut Self::Acc, a: &Self::V, b: &Self::V);
    fn msub(&self, acc: &mut Self::Acc, a: &Self::V, b: &Self::V);
    fn acc_add(&self, acc: &mut Self::Acc, v: &Self::V);
    fn round(&self, acc: &Self::Acc) -> Self::V;

    /// Exact value of `v`; None for NaR/NaN/infinite.
    fn to_exact(&self, v: &Self::V) -> Option<Dyadic>;
    fn counters(&self) -> &Counters;

    fn lit(&self, num: i64, den: i64) -> Self::V {
        self.from_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
}

// ---------------------------------------------------------------------------
// IEEE-754 binary64 with fused MAC
// ---------------------------------------------------------------------------

#[derive(Debug, Default)]
pub struct DoubleFma {
    pub counters: Counters,
}

fn rational_to_f64(r: &BigRational) -> f64 {
    match rational_round_parts(r.numer(), r.denom(), 64) {
        None => 0.0,
        Some(p) => p.to_f64(),
    }
}

fn f64_to_exact(v: f64) -> Option<Dyadic> {
    if !v.is_finite() {
        return None;
    }
    if v == 0.0 {
        return Some(Dyadic::zero());
    }
    let bits = v.to_bits();
    let neg = bits >> 63 != 0;
    let biased = ((bits >> 52) & 0x7FF) as i64;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    let (m, e) = if biased == 0 { (frac, -1074) } else { (frac + (1 << 52), biased - 1075) };
    let m = if neg { -m } else { m };
    Some(Dyadic::new(BigInt::from(m), e))
}

impl Arith for DoubleFma {
    type V = f64;
    type Acc = f64;

    fn from_rational(&self, r: &BigRational) -> f64 {
        rational_to_f64(r)
    }

    fn add(&self, a: &f64, b: &f64) -> f64 {
        Counters::bump(&self.counters.adds);
        a + b
    }

    fn sub(&self, a: &f64, b: &f64) -> f64 {
        Counters::bump(&self.counters.adds);
        a - b
    }

    fn mul(&self, a: &f64, b: &f64) -> f64 {
        Counters::bump(&self.counters.muls);
        a * b
    }

    fn div(&self, a: &f64, b: &f64) -> f64 {
        Counters::bump(&self.counters.divs);
        a / b
    }

    fn sqrt(&self, a: &f64) -> f64 {
        Counters::bump(&self.counters.sqrts);
        a.sqrt()
    }

    fn neg(&self, a: &f64) -> f64 {
        -a
    }

    fn mac1(&self, x: &f64, a: &f64, b: &f64) -> f64 {
        Counters::bump(&self.counters.muls);
        Counters::bump(&self.counters.adds);
        a.mul_add(*b, *x)
    }

    fn msub1(&self, x: &f64, a: &f64, b: &f64) -> f64 {
        Counters::bump(&self.counters.muls);
        Counters::bump(&self.counters.adds);
        (-a).mul_add(*b, *x)
    }

    fn acc_zero(&self) -> f64 {
        0.0
    }

    fn acc_init(&self, x: &f64) -> f64 {
        *x
    }

    fn mac(&self, acc: &mut f64, a: &f64, b: &f64) {
        *acc = self.mac1(acc, a, b);
    }

    fn msub(&self, acc: &mut f64, a: &f64, b: &f64) {
        *acc = self.msub1(acc, a, b);
    }

    fn acc_add(&self, acc: &mut f64, v: &f64) {
        *acc = self.add(acc, v);
    }

    fn round(&self, acc: &f64) -> f64 {
        *acc
    }

    fn to_exact(&self, v: &f64) -> Option<Dyadic> {
        f64_to_exact(*v)
    }

    fn counters(&self) -> &Counters {
        &self.counters
    }
}

// ---------------------------------------------------------------------------
// Posit64 with the quire
// ---------------------------------------------------------------------------

#[derive(Debug, Default)]
pub struct Posit64Quire {
    pub counters: Counters,
    /// Use the logarithm-approximate division and square-root units.
    pub approx_div_sqrt: bool,
}

fn posit_div(counters: &Counters, approx: bool, a: &P64, b: &P64) -> P64 {
    Counters::bump(&counters.divs);
    if approx {
        approx::approx_div(*a, *b)
    } else {
        ops::div(*a, *b)
    }
}

fn posit_sqrt(counters: &Counters, approx: bool, a: &P64) -> P64 {
    Counters::bump(&counters.sqrts);
    if approx {
        approx::approx_sqrt(*a)
    } else {
        ops::sqrt(*a)
    }
}

impl Arith for Posit64Quire {
    type V = P64;
    type Acc = Q64;

    fn from_rational(&self, r: &BigRational) -> P64 {
        P64::from_rational(r.numer(), r.denom())
    }

    fn add(&self, a: &P64, b: &P64) -> P64 {
        Counters::bump(&self.counters.adds);
        ops::add(*a, *b)
    }

    fn sub(&self, a: &P64, b: &P64) -> P64 {
        Counters::bump(&self.counters.adds);
        ops::sub(*a, *b)
    }

    fn mul(&self, a: &P64, b: &P64) -> P64 {
        Counters::bump(&self.counters.muls);
        ops::mul(*a, *b)
    }

    fn div(&self, a: &P64, b: &P64) -> P64 {
        posit_div(&self.counters, self.approx_div_sqrt, a, b)
    }

    fn sqrt(&self, a: &P64) -> P64 {
        posit_sqrt(&self.counters, self.approx_div_sqrt, a)
    }

    fn neg(&self, a: &P64) -> P64 {
        a.neg()
    }

    fn mac1(&self, x: &P64, a: &P64, b: &P64) -> P64 {
        let mut q = self.acc_init(x);
        self.mac(&mut q, a, b);
        self.round(&q)
    }

    fn msub1(&self, x: &P64, a: &P64, b: &P64) -> P64 {
        let mut q = self.acc_init(x);
        self.msub(&mut q, a, b);
        self.round(&q)
    }

    fn acc_zero(&self) -> Q64 {
        Q64::new()
    }

    fn acc_init(&self, x: &P64) -> Q64 {
        Counters::bump(&self.counters.qmadds);
        let mut q = Q64::new();
        q.init_from_posit(*x);
        q
    }

    fn mac(&self, acc: &mut Q64, a: &P64, b: &P64) {
        Counters::bump(&self.counters.qmadds);
        acc.madd(*a, *b);
    }

    fn msub(&self, acc: &mut Q64, a: &P64, b: &P64) {
        Counters::bump(&self.counters.qmadds);
        acc.msub(*a, *b);
    }

    fn acc_add(&self, acc: &mut Q64, v: &P64) {
        Counters::bump(&self.counters.qmadds);
        acc.madd(*v, P64::ONE);
    }

    fn round(&self, acc: &Q64) -> P64 {
        Counters::bump(&self.counters.qrounds);
        acc.round()
    }

    fn to_exact(&self, v: &P64) -> Option<Dyadic> {
        v.exact_value().finite().cloned()
    }

    fn counters(&self) -> &Counters {
        &self.counters
    }
}

// ---------------------------------------------------------------------------
// Posit64 without the quire: every fused MAC becomes mul then add
// ---------------------------------------------------------------------------

#[derive(Debug, Default)]
pub struct Posit64NoQuire {
    pub counters: Counters,
    pub approx_div_sqrt: bool,
}

impl Arith for Posit64NoQuire {
    type V = P64;
    type Acc = P64;

    fn from_rational(&self, r: &BigRational) -> P64 {
        P64::from_rational(r.numer(), r.denom())
    }

    fn add(&self, a: &P64, b: &P64) -> P64 {
        Counters::bump(&self.counters.adds);
        ops::add(*a, *b)
    }

    fn sub(&self, a: &P64, b: &P64) -> P64 {
        Counters::bump(&self.counters.adds);
        ops::sub(*a, *b)
    }

    fn mul(&self, a: &P64, b: &P64) -> P64 {
        Counters::bump(&self.counters.muls);
        ops::mul(*a, *b)
    }

    fn div(&self, a: &P64, b: &P64) -> P64 {
        posit_div(&self.counters, self.approx_div_sqrt, a, b)
    }

    fn sqrt(&self, a: &P64) -> P64 {
        posit_sqrt(&self.counters, self.approx_div_sqrt, a)
    }

    fn neg(&self, a: &P64) -> P64 {
        a.neg()
    }

    fn mac1(&self, x: &P64, a: &P64, b: &P64) -> P64 {
        let p = self.mul(a, b);
        self.add(x, &p)
    }

    fn msub1(&self, x: &P64, a: &P64, b: &P64) -> P64 {
        let p = self.mul(a, b);
        self.sub(x, &p)
    }

    fn acc_zero(&self) -> P64 {
        P64::ZERO
    }

    fn acc_init(&self, x: &P64) -> P64 {
        *x
    }

    fn mac(&self, acc: &mut P64, a: &P64, b: &P64) {
        *acc = self.mac1(acc, a, b);
    }

    fn msub(&self, acc: &mut P64, a: &P64, b: &P64) {
        *acc = self.msub1(acc, a, b);
    }

    fn acc_add(&self, acc: &mut P64, v: &P64) {
        *acc = self.add(acc, v);
    }

    fn round(&self, acc: &P64) -> P64 {
        *acc
    }

    fn to_exact(&self, v: &P64) -> Option<Dyadic> {
        v.exact_value().finite().cloned()
    }

    fn counters(&self) -> &Counters {
        &self.counters
    }
}

// ---------------------------------------------------------------------------
// High-precision software-float reference
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct Reference {
    pub counters: Counters,
    pub ctx: MpfCtx,
}

impl Default for Reference {
    fn default() -> Self {
        Reference { counters: Counters::default(), ctx: MpfCtx::reference() }
    }
}

impl Reference {
    pub fn with_precision(prec: u64) -> Self {
        Reference { counters: Counters::default(), ctx: MpfCtx::new(prec) }
    }
}

impl Arith for Reference {
    type V = Mpf;
    type Acc = Mpf;

    fn from_rational(&self, r: &BigRational) -> Mpf {
        self.ctx.from_rational(r.numer(), r.denom())
    }

    fn add(&self, a: &Mpf, b: &Mpf) -> Mpf {
        Counters::bump(&self.counters.adds);
        self.ctx.add(a, b)
    }

    fn sub(&self, a: &Mpf, b: &Mpf) -> Mpf {
        Counters::bump(&self.counters.adds);
        self.ctx.sub(a, b)
    }

    fn mul(&self, a: &Mpf, b: &Mpf) -> Mpf {
        Counters::bump(&self.counters.muls);
        self.ctx.mul(a, b)
    }

    fn div(&self, a: &Mpf, b: &Mpf) -> Mpf {
        Counters::bump(&self.counters.divs);
        self.ctx.div(a, b)
    }

    fn sqrt(&self, a: &Mpf) -> Mpf {
        Counters::bump(&self.counters.sqrts);
        self.ctx.sqrt(a)
    }

    fn neg(&self, a: &Mpf) -> Mpf {
        self.ctx.neg(a)
    }

    fn mac1(&self, x: &Mpf, a: &Mpf, b: &Mpf) -> Mpf {
        Counters::bump(&self.counters.muls);
        Counters::bump(&self.counters.adds);
        self.ctx.mul_add(a, b, x)
    }

    fn msub1(&self, x: &Mpf, a: &Mpf, b: &Mpf) -> Mpf {
        Counters::bump(&self.counters.muls);
        Counters::bump(&self.counters.adds);
        self.ctx.mul_add(&self.ctx.neg(a), b, x)
    }

    fn acc_zero(&self) -> Mpf {
        Mpf::zero()
    }

    fn acc_init(&self, x: &Mpf) -> Mpf {
        x.clone()
    }

    fn mac(&self, acc: &mut Mpf, a: &Mpf, b: &Mpf) {
        *acc = self.mac1(acc, a, b);
    }

    fn msub(&self, acc: &mut Mpf, a: &Mpf, b: &Mpf) {
        *acc = self.msub1(acc, a, b);
    }

    fn acc_add(&self, acc: &mut Mpf, v: &Mpf) {
        *acc = self.add(acc, v);
    }

    fn round(&self, acc: &Mpf) -> Mpf {
        acc.clone()
    }

    fn to_exact(&self, v: &Mpf) -> Option<Dyadic> {
        v.to_dyadic()
    }

    fn counters(&self) -> &Counters {
        &self.counters
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_rounding_per_mode() {
        let d = DoubleFma::default();
        assert_eq!(d.lit(3, 2), 1.5);
        assert_eq!(d.lit(1, 3), 1.0 / 3.0);
        let p = Posit64Quire::default();
        assert_eq!(p.lit(3, 2), P64::from_f64(1.5));
        let r = Reference::default();
        assert_eq!(r.to_exact(&r.lit(1, 4)).unwrap(), Dyadic::new(BigInt::from(1), -2));
    }

    #[test]
    fn fused_mac_is_single_rounding_for_double() {
        let d = DoubleFma::default();
        let x = 1.0;
        let a = 1.0 + 2f64.powi(-30);
        // (1 + eps)^2 - 1 computed fused keeps the eps^2 term.
        let fused = d.msub1(&x, &a, &a);
        assert_eq!(fused, -(2f64.powi(-29) + 2f64.powi(-60)));
    }

    #[test]
    fn quire_accumulator_counts_ops() {
        let m = Posit64Quire::default();
        let one = m.lit(1, 1);
        let mut acc = m.acc_init(&one);
        m.mac(&mut acc, &one, &one);
        m.msub(&mut acc, &one, &one);
        assert_eq!(m.round(&acc), one);
        let c = m.counters().snapshot();
        assert_eq!(c.qmadds, 3);
        assert_eq!(c.qrounds, 1);
        assert_eq!(c.muls, 0);
    }

    #[test]
    fn noquire_mac_is_mul_then_add() {
        let m = Posit64NoQuire::default();
        // (1 + 2^-50)(1 - 2^-50) = 1 - 2^-100: the rounded product is exactly
        // 1, so mul+add cancels to zero, while the fused path keeps -2^-100.
        let x = m.lit(-1, 1);
        let a = ops::add(P64::ONE, P64::from_f64(2f64.powi(-50)));
        let b = ops::sub(P64::ONE, P64::from_f64(2f64.powi(-50)));
        let q = Posit64Quire::default();
        let fused = q.mac1(&x, &a, &b);
        let unfused = m.mac1(&x, &a, &b);
        assert!(unfused.is_zero());
        assert_eq!(fused, P64::from_f64(-(2f64.powi(-100))));
        let c = m.counters().snapshot();
        assert_eq!(c.muls, 1);
        assert_eq!(c.adds, 1);
    }

    #[test]
    fn exact_views_agree_across_modes() {
        let modes_val = |num, den| {
            let d = DoubleFma::default();
            let p = Posit64Quire::default();
            let r = Reference::default();
            (
                d.to_exact(&d.lit(num, den)).unwrap(),
                p.to_exact(&p.lit(num, den)).unwrap(),
                r.to_exact(&r.lit(num, den)).unwrap(),
            )
        };
        // 3/8 is exact in every format.
        let (a, b, c) = modes_val(3, 8);
        assert_eq!(a, b);
        assert_eq!(b, c);
        let d = DoubleFma::default();
        assert!(d.to_exact(&f64::NAN).is_none());
        let p = Posit64Quire::default();
        assert!(p.to_exact(&P64::NAR).is_none());
    }
}
