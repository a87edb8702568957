//! Software posit arithmetic (es = 2, widths 8..64), the exact quire
//! accumulator, logarithm-approximate units, an assembler for the Xposit
//! RISC-V extension and a numerical-kernel benchmark harness.

pub mod approx;
pub mod exact;
pub mod harness;
pub mod isa;
pub mod kernels;
pub mod ops;
pub mod oracle;
pub mod posit;
pub mod quire;
pub mod vectors;
pub mod verify;

pub use posit::{P16, P32, P64, P8, Posit};
pub use quire::{Q32, Q64, Quire};
