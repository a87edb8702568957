//! The three GEMM formulations: PolyBench loop-interchange, quire dot-product
//! order, and the 6-loop tiled variant.

use super::arith::Arith;
use super::grid::Mat;

pub struct GemmArgs<'m, A: Arith> {
    pub a: &'m Mat<A::V>,
    pub b: &'m Mat<A::V>,
    pub c: &'m Mat<A::V>,
    pub alpha: A::V,
    pub beta: A::V,
}

/// `C = αAB + βC` in the i-(scale)-k-j interchanged order, per-statement
/// fused MAC.
pub fn gemm_interchange<A: Arith>(m: &A, g: &GemmArgs<A>) -> Mat<A::V> {
    let (ni, nj, nk) = (g.a.rows(), g.b.cols(), g.a.cols());
    let mut c = g.c.clone();
    for i in 0..ni {
        for j in 0..nj {
            c[(i, j)] = m.mul(&c[(i, j)], &g.beta);
        }
        for k in 0..nk {
            for j in 0..nj {
                let t = m.mul(&g.alpha, &g.a[(i, k)]);
                c[(i, j)] = m.mac1(&c[(i, j)], &t, &g.b[(k, j)]);
            }
        }
    }
    c
}

/// `C = αAB + βC` with one accumulator per output element over the whole
/// k dot product: βC into the accumulator, nk fused MACs, one rounding.
pub fn gemm_quire<A: Arith>(m: &A, g: &GemmArgs<A>) -> Mat<A::V> {
    let (ni, nj, nk) = (g.a.rows(), g.b.cols(), g.a.cols());
    let mut c = g.c.clone();
    for i in 0..ni {
        for j in 0..nj {
            c[(i, j)] = m.mul(&c[(i, j)], &g.beta);
        }
        for j in 0..nj {
            let mut acc = m.acc_init(&c[(i, j)]);
            for k in 0..nk {
                let t = m.mul(&g.alpha, &g.a[(i, k)]);
                m.mac(&mut acc, &t, &g.b[(k, j)]);
            }
            c[(i, j)] = m.round(&acc);
        }
    }
    c
}

/// 6-loop tiled variant: one accumulator init/round pair per output element
/// and k-tile, i.e. ceil(nk/nt) roundings per element.
pub fn gemm_tiled<A: Arith>(m: &A, g: &GemmArgs<A>, nt: usize) -> Mat<A::V> {
    assert!(nt >= 1, "tile size must be at least 1");
    let (ni, nj, nk) = (g.a.rows(), g.b.cols(), g.a.cols());
    let mut c = g.c.clone();
    for ii in (0..ni).step_by(nt) {
        for jj in (0..nj).step_by(nt) {
            for i in ii..(ii + nt).min(ni) {
                for j in jj..(jj + nt).min(nj) {
                    c[(i, j)] = m.mul(&c[(i, j)], &g.beta);
                }
            }
            for kk in (0..nk).step_by(nt) {
                for i in ii..(ii + nt).min(ni) {
                    for j in jj..(jj + nt).min(nj) {
                        let mut acc = m.acc_init(&c[(i, j)]);
                        for k in kk..(kk + nt).min(nk) {
                            let t = m.mul(&g.alpha, &g.a[(i, k)]);
                            m.mac(&mut acc, &t, &g.b[(k, j)]);
                        }
                        c[(i, j)] = m.round(&acc);
                    }
                }
            }
        }
    }
    c
}
