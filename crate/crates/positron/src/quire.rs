//! The 16n-bit fixed-point accumulator for exact fused multiply-accumulate
//! chains. Products of two posits always land exactly on the quire grid, so a
//! whole accumulation sequence incurs a single rounding at `round()`.

use crate::exact::{Dyadic, ExactReal};
use crate::posit::Posit;
use num_bigint::BigInt;
use num_traits::Zero;

/// Up to 2^31 - 1 multiply-accumulates are guaranteed not to overflow the
/// 16n-bit two's complement window.
pub const QUIRE_CAPACITY: u64 = (1 << 31) - 1;

#[derive(Clone, Debug)]
pub struct Quire<const N: u32> {
    /// Accumulator scaled by 2^(8N-16): `acc * 2^-(8N-16)` is the value held.
    acc: BigInt,
    nar: bool,
    count: u64,
}

pub type Q32 = Quire<32>;
pub type Q64 = Quire<64>;

impl<const N: u32> Quire<N> {
    /// Fraction bit count below the binary point (reaches minpos^2).
    pub const FRAC_BITS: i64 = 8 * N as i64 - 16;

    pub fn new() -> Self {
        Quire { acc: BigInt::zero(), nar: false, count: 0 }
    }

    /// QCLR.S
    pub fn clear(&mut self) {
        self.acc = BigInt::zero();
        self.nar = false;
        self.count = 0;
    }

    /// QNEG.S. NaR is sticky.
    pub fn negate(&mut self) {
        self.acc = -&self.acc;
    }

    pub fn is_nar(&self) -> bool {
        self.nar
    }

    pub fn mac_count(&self) -> u64 {
        self.count
    }

    /// QMADD.S: acc += a * b, exactly.
    pub fn madd(&mut self, a: Posit<N>, b: Posit<N>) {
        self.accumulate(a, b, false)
    }

    /// QMSUB.S: acc -= a * b, exactly.
    pub fn msub(&mut self, a: Posit<N>, b: Posit<N>) {
        self.accumulate(a, b, true)
    }

    fn accumulate(&mut self, a: Posit<N>, b: Posit<N>, negate: bool) {
        assert!(
            self.count < QUIRE_CAPACITY,
            "quire capacity exceeded: more than {QUIRE_CAPACITY} accumulations"
        );
        self.count += 1;
        if a.is_nar() || b.is_nar() {
            self.nar = true;
            return;
        }
        let va = a.exact_value();
        let vb = b.exact_value();
        let prod = va.finite().unwrap().mul(vb.finite().unwrap());
        if prod.is_zero() {
            return;
        }
        let shift = prod.exp() + Self::FRAC_BITS;
        debug_assert!(shift >= 0, "posit product below the quire grid");
        let term = prod.mant() << shift as usize;
        if negate {
            self.acc -= term;
        } else {
            self.acc += term;
        }
    }

    /// Loads a posit exactly: QCLR.S followed by QMADD.S with a unit operand.
    pub fn init_from_posit(&mut self, p: Posit<N>) {
        self.clear();
        self.madd(p, Posit::ONE);
    }

    /// QROUND.S: the single rounding of the whole accumulation chain.
    pub fn round(&self) -> Posit<N> {
        Posit::encode_round(&self.value())
    }

    /// Exact fixed-point content (NaR when the flag is set).
    pub fn value(&self) -> ExactReal {
        if self.nar {
            ExactReal::NaR
        } else {
            ExactReal::Finite(Dyadic::new(self.acc.clone(), -Self::FRAC_BITS))
        }
    }

    #[cfg(test)]
    fn force_count(&mut self, c: u64) {
        self.count = c;
    }
}

impl<const N: u32> Default for Quire<N> {
    fn default() -> Self {
        Self::new()
    }
}
