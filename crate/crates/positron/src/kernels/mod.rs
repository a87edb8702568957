//! Benchmark kernels parameterized over arithmetic mode, plus the accuracy
//! metric computation.

pub mod arith;
pub mod gemm;
pub mod grid;
pub mod init;
pub mod progs;

use crate::exact::Dyadic;
use crate::oracle::MpfCtx;
use arith::{Arith, ArithMode, DoubleFma, OpCounts, Posit64NoQuire, Posit64Quire, Reference};
use init::DatasetSize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Kernel {
    Covariance,
    Gemm,
    ThreeMm,
    Cholesky,
    Durbin,
    Ludcmp,
    Fdtd2d,
    Seidel2d,
}

impl Kernel {
    pub const ALL: [Kernel; 8] = [
        Kernel::Covariance,
        Kernel::Gemm,
        Kernel::ThreeMm,
        Kernel::Cholesky,
        Kernel::Durbin,
        Kernel::Ludcmp,
        Kernel::Fdtd2d,
        Kernel::Seidel2d,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kernel::Covariance => "covariance",
            Kernel::Gemm => "gemm",
            Kernel::ThreeMm => "3mm",
            Kernel::Cholesky => "cholesky",
            Kernel::Durbin => "durbin",
            Kernel::Ludcmp => "ludcmp",
            Kernel::Fdtd2d => "fdtd-2d",
            Kernel::Seidel2d => "seidel-2d",
        }
    }

    pub fn parse(s: &str) -> Option<Kernel> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// Exact values of a kernel's output array (None per NaR/NaN element) plus
/// the mode's operation tally.
#[derive(Clone, Debug)]
pub struct KernelOutput {
    pub values: Vec<Option<Dyadic>>,
    pub counts: OpCounts,
}

fn run_with<A: Arith>(m: &A, kernel: Kernel, size: DatasetSize, quire_gemm: bool) -> KernelOutput {
    let out: Vec<A::V> = match kernel {
        Kernel::Covariance => progs::covariance(m, &init::covariance_init(size)),
        Kernel::Gemm => progs::gemm(m, &init::gemm_init(size), quire_gemm),
        Kernel::ThreeMm => progs::three_mm(m, &init::three_mm_init(size)),
        Kernel::Cholesky => progs::cholesky(m, &init::cholesky_init(size)),
        Kernel::Durbin => progs::durbin(m, &init::durbin_init(size)),
        Kernel::Ludcmp => progs::ludcmp(m, &init::ludcmp_init(size)),
        Kernel::Fdtd2d => progs::fdtd2d(m, &init::fdtd_init(size)),
        Kernel::Seidel2d => progs::seidel2d(m, &init::seidel_init(size)),
    };
    KernelOutput {
        values: out.iter().map(|v| m.to_exact(v)).collect(),
        counts: m.counters().snapshot(),
    }
}

pub fn run_kernel(kernel: Kernel, size: DatasetSize, mode: ArithMode) -> KernelOutput {
    run_kernel_opt(kernel, size, mode, false)
}

pub fn run_kernel_opt(
    kernel: Kernel,
    size: DatasetSize,
    mode: ArithMode,
    approx_div_sqrt: bool,
) -> KernelOutput {
    match mode {
        ArithMode::DoubleFma => run_with(&DoubleFma::default(), kernel, size, false),
        ArithMode::Posit64Quire => {
            let m = Posit64Quire { approx_div_sqrt, ..Default::default() };
            run_with(&m, kernel, size, true)
        }
        ArithMode::Posit64NoQuire => {
            let m = Posit64NoQuire { approx_div_sqrt, ..Default::default() };
            run_with(&m, kernel, size, false)
        }
        ArithMode::Reference => run_with(&Reference::default(), kernel, size, false),
    }
}

/// Reference run at a non-default precision (reference-convergence checks).
pub fn run_reference_at(kernel: Kernel, size: DatasetSize, prec: u64) -> KernelOutput {
    run_with(&Reference::with_precision(prec), kernel, size, false)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metrics {
    pub mse: f64,
    pub max_abs_e: f64,
    /// NaR/NaN elements in the measured output, excluded from the metrics.
    pub nar_count: usize,
    pub compared: usize,
}

/// MSE and MaxAbsE of `out` against `reference`, differences taken in the
/// high-precision float format.
pub fn compute_metrics(out: &[Option<Dyadic>], reference: &[Option<Dyadic>]) -> Metrics {
    assert_eq!(out.len(), reference.len(), "output shapes differ");
    let ctx = MpfCtx::reference();
    let mut sum = crate::oracle::Mpf::zero();
    let mut max = crate::oracle::Mpf::zero();
    let mut nar_count = 0;
    let mut compared = 0;
    for (o, r) in out.iter().zip(reference) {
        let (Some(o), Some(r)) = (o, r) else {
            nar_count += 1;
            continue;
        };
        let diff = ctx.sub(&ctx.from_dyadic(o), &ctx.from_dyadic(r));
        sum = ctx.add(&sum, &ctx.mul(&diff, &diff));
        let abs = ctx.abs(&diff);
        if abs.cmp_value(&max) == std::cmp::Ordering::Greater {
            max = abs;
        }
        compared += 1;
    }
    let mse = if compared == 0 {
        0.0
    } else {
        ctx.div(&sum, &ctx.from_i64(compared as i64)).to_f64()
    };
    Metrics { mse, max_abs_e: max.to_f64(), nar_count, compared }
}
