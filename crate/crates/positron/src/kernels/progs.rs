//! Ports of the eight PolyBench benchmarks, generic over the arithmetic mode.
//! Inner reduction loops run through the mode's accumulator (the quire in
//! posit64-quire mode); fdtd-2d and seidel-2d have no reduction loops, so the
//! quire and no-quire modes coincide there by construction.

use super::arith::Arith;
use super::gemm::{gemm_quire, GemmArgs};
use super::grid::Mat;
use super::init::{
    CholeskyInit, CovarianceInit, DurbinInit, FdtdInit, GemmInit, LudcmpInit, RatMat, SeidelInit,
    ThreeMmInit,
};
use num_rational::BigRational;

pub fn conv<A: Arith>(m: &A, r: &RatMat) -> Mat<A::V> {
    r.map(|v| m.from_rational(v))
}

fn conv_vec<A: Arith>(m: &A, r: &[BigRational]) -> Vec<A::V> {
    r.iter().map(|v| m.from_rational(v)).collect()
}

pub fn gemm<A: Arith>(m: &A, init: &GemmInit, quire_order: bool) -> Vec<A::V> {
    let a = conv(m, &init.a);
    let b = conv(m, &init.b);
    let c = conv(m, &init.c);
    let g = GemmArgs {
        a: &a,
        b: &b,
        c: &c,
        alpha: m.from_rational(&init.alpha),
        beta: m.from_rational(&init.beta),
    };
    if quire_order {
        gemm_quire(m, &g).into_vec()
    } else {
        super::gemm::gemm_interchange(m, &g).into_vec()
    }
}

fn matmul<A: Arith>(m: &A, x: &Mat<A::V>, y: &Mat<A::V>) -> Mat<A::V> {
    Mat::from_fn(x.rows(), y.cols(), |i, j| {
        let mut acc = m.acc_zero();
        for k in 0..x.cols() {
            m.mac(&mut acc, &x[(i, k)], &y[(k, j)]);
        }
        m.round(&acc)
    })
}

pub fn three_mm<A: Arith>(m: &A, init: &ThreeMmInit) -> Vec<A::V> {
    let a = conv(m, &init.a);
    let b = conv(m, &init.b);
    let c = conv(m, &init.c);
    let d = conv(m, &init.d);
    let e = matmul(m, &a, &b);
    let f = matmul(m, &c, &d);
    matmul(m, &e, &f).into_vec()
}

pub fn covariance<A: Arith>(m: &A, init: &CovarianceInit) -> Vec<A::V> {
    let (nv, no) = (init.m, init.n);
    let mut data = conv(m, &init.data);
    let float_n = m.from_rational(&init.float_n);
    let mut mean = Vec::with_capacity(nv);
    for j in 0..nv {
        let mut acc = m.acc_zero();
        for i in 0..no {
            m.acc_add(&mut acc, &data[(i, j)]);
        }
        mean.push(m.div(&m.round(&acc), &float_n));
    }
    for i in 0..no {
        for j in 0..nv {
            data[(i, j)] = m.sub(&data[(i, j)], &mean[j]);
        }
    }
    let fnm1 = m.sub(&float_n, &m.lit(1, 1));
    let mut cov = Mat::from_fn(nv, nv, |_, _| m.lit(0, 1));
    for i in 0..nv {
        for j in i..nv {
            let mut acc = m.acc_zero();
            for k in 0..no {
                m.mac(&mut acc, &data[(k, i)], &data[(k, j)]);
            }
            let v = m.div(&m.round(&acc), &fnm1);
            cov[(i, j)] = v.clone();
            cov[(j, i)] = v;
        }
    }
    cov.into_vec()
}

/// Output is the lower triangle (j <= i) of the decomposed matrix.
pub fn cholesky<A: Arith>(m: &A, init: &CholeskyInit) -> Vec<A::V> {
    let n = init.n;
    let mut a = conv(m, &init.a);
    for i in 0..n {
        for j in 0..i {
            let mut acc = m.acc_init(&a[(i, j)]);
            for k in 0..j {
                m.msub(&mut acc, &a[(i, k)], &a[(j, k)]);
            }
            let w = m.round(&acc);
            a[(i, j)] = m.div(&w, &a[(j, j)]);
        }
        let mut acc = m.acc_init(&a[(i, i)]);
        for k in 0..i {
            m.msub(&mut acc, &a[(i, k)], &a[(i, k)]);
        }
        a[(i, i)] = m.sqrt(&m.round(&acc));
    }
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in 0..=i {
            out.push(a[(i, j)].clone());
        }
    }
    out
}

pub fn durbin<A: Arith>(m: &A, init: &DurbinInit) -> Vec<A::V> {
    let n = init.n;
    let r = conv_vec(m, &init.r);
    let one = m.lit(1, 1);
    let mut y = vec![m.lit(0, 1); n];
    let mut z = vec![m.lit(0, 1); n];
    y[0] = m.neg(&r[0]);
    let mut beta = one.clone();
    let mut alpha = m.neg(&r[0]);
    for k in 1..n {
        beta = m.mul(&m.msub1(&one, &alpha, &alpha), &beta);
        let mut acc = m.acc_zero();
        for i in 0..k {
            m.mac(&mut acc, &r[k - i - 1], &y[i]);
        }
        let sum = m.round(&acc);
        alpha = m.neg(&m.div(&m.add(&r[k], &sum), &beta));
        for i in 0..k {
            z[i] = m.mac1(&y[i], &alpha, &y[k - i - 1]);
        }
        y[..k].clone_from_slice(&z[..k]);
        y[k] = alpha.clone();
    }
    y
}

pub fn ludcmp<A: Arith>(m: &A, init: &LudcmpInit) -> Vec<A::V> {
    let n = init.n;
    let mut a = conv(m, &init.a);
    let b = conv_vec(m, &init.b);
    for i in 0..n {
        for j in 0..i {
            let mut acc = m.acc_init(&a[(i, j)]);
            for k in 0..j {
                m.msub(&mut acc, &a[(i, k)], &a[(k, j)]);
            }
            let w = m.round(&acc);
            a[(i, j)] = m.div(&w, &a[(j, j)]);
        }
        for j in i..n {
            let mut acc = m.acc_init(&a[(i, j)]);
            for k in 0..i {
                m.msub(&mut acc, &a[(i, k)], &a[(k, j)]);
            }
            a[(i, j)] = m.round(&acc);
        }
    }
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = m.acc_init(&b[i]);
        for j in 0..i {
            m.msub(&mut acc, &a[(i, j)], &y[j]);
        }
        y.push(m.round(&acc));
    }
    let mut x = vec![m.lit(0, 1); n];
    for i in (0..n).rev() {
        let mut acc = m.acc_init(&y[i]);
        for j in i + 1..n {
            m.msub(&mut acc, &a[(i, j)], &x[j]);
        }
        x[i] = m.div(&m.round(&acc), &a[(i, i)]);
    }
    x
}

/// Output is ex, ey and hz concatenated.
pub fn fdtd2d<A: Arith>(m: &A, init: &FdtdInit) -> Vec<A::V> {
    let (tmax, nx, ny) = (init.tmax, init.nx, init.ny);
    let mut ex = conv(m, &init.ex);
    let mut ey = conv(m, &init.ey);
    let mut hz = conv(m, &init.hz);
    let fict = conv_vec(m, &init.fict);
    let half = m.lit(1, 2);
    let cseven = m.lit(7, 10);
    for t in 0..tmax {
        for j in 0..ny {
            ey[(0, j)] = fict[t].clone();
        }
        for i in 1..nx {
            for j in 0..ny {
                let d = m.sub(&hz[(i, j)], &hz[(i - 1, j)]);
                ey[(i, j)] = m.sub(&ey[(i, j)], &m.mul(&half, &d));
            }
        }
        for i in 0..nx {
            for j in 1..ny {
                let d = m.sub(&hz[(i, j)], &hz[(i, j - 1)]);
                ex[(i, j)] = m.sub(&ex[(i, j)], &m.mul(&half, &d));
            }
        }
        for i in 0..nx - 1 {
            for j in 0..ny - 1 {
                let dx = m.sub(&ex[(i, j + 1)], &ex[(i, j)]);
                let dy = m.sub(&ey[(i + 1, j)], &ey[(i, j)]);
                hz[(i, j)] = m.sub(&hz[(i, j)], &m.mul(&cseven, &m.add(&dx, &dy)));
            }
        }
    }
    let mut out = ex.into_vec();
    out.extend(ey.into_vec());
    out.extend(hz.into_vec());
    out
}

pub fn seidel2d<A: Arith>(m: &A, init: &SeidelInit) -> Vec<A::V> {
    let (tsteps, n) = (init.tsteps, init.n);
    let mut a = conv(m, &init.a);
    let nine = m.lit(9, 1);
    for _ in 0..tsteps {
        for i in 1..n - 1 {
            for j in 1..n - 1 {
                let mut s = m.add(&a[(i - 1, j - 1)], &a[(i - 1, j)]);
                s = m.add(&s, &a[(i - 1, j + 1)]);
                s = m.add(&s, &a[(i, j - 1)]);
                s = m.add(&s, &a[(i, j)]);
                s = m.add(&s, &a[(i, j + 1)]);
                s = m.add(&s, &a[(i + 1, j - 1)]);
                s = m.add(&s, &a[(i + 1, j)]);
                s = m.add(&s, &a[(i + 1, j + 1)]);
                a[(i, j)] = m.div(&s, &nine);
            }
        }
    }
    a.into_vec()
}
