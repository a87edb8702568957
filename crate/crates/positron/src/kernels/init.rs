//! PolyBench 4.2 problem dimensions and initialization formulas, evaluated as
//! exact rationals so every arithmetic mode rounds the same pre-rounding data
//! exactly once.

use super::grid::Mat;
use num_bigint::BigInt;
use num_rational::BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DatasetSize {
    Mini,
    Small,
    Medium,
    Large,
}

impl DatasetSize {
    pub const ALL: [DatasetSize; 4] =
        [DatasetSize::Mini, DatasetSize::Small, DatasetSize::Medium, DatasetSize::Large];

    pub fn name(self) -> &'static str {
        match self {
            DatasetSize::Mini => "mini",
            DatasetSize::Small => "small",
            DatasetSize::Medium => "medium",
            DatasetSize::Large => "large",
        }
    }

    pub fn parse(s: &str) -> Option<DatasetSize> {
        Self::ALL.into_iter().find(|z| z.name() == s)
    }
}

pub type RatMat = Mat<BigRational>;

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub struct GemmInit {
    pub ni: usize,
    pub nj: usize,
    pub nk: usize,
    pub alpha: BigRational,
    pub beta: BigRational,
    pub a: RatMat,
    pub b: RatMat,
    pub c: RatMat,
}

pub fn gemm_dims(size: DatasetSize) -> (usize, usize, usize) {
    match size {
        DatasetSize::Mini => (20, 25, 30),
        DatasetSize::Small => (60, 70, 80),
        DatasetSize::Medium => (200, 220, 240),
        DatasetSize::Large => (1000, 1100, 1200),
    }
}

pub fn gemm_init(size: DatasetSize) -> GemmInit {
    let (ni, nj, nk) = gemm_dims(size);
    let m = |v: usize| v as i64;
    GemmInit {
        ni,
        nj,
        nk,
        alpha: rat(3, 2),
        beta: rat(6, 5),
        c: Mat::from_fn(ni, nj, |i, j| rat(m(i * j + 1) % m(ni), m(ni))),
        a: Mat::from_fn(ni, nk, |i, j| rat(m(i * (j + 1)) % m(nk), m(nk))),
        b: Mat::from_fn(nk, nj, |i, j| rat(m(i * (j + 2)) % m(nj), m(nj))),
    }
}

pub struct ThreeMmInit {
    pub ni: usize,
    pub nj: usize,
    pub nk: usize,
    pub nl: usize,
    pub nm: usize,
    pub a: RatMat,
    pub b: RatMat,
    pub c: RatMat,
    pub d: RatMat,
}

pub fn three_mm_dims(size: DatasetSize) -> (usize, usize, usize, usize, usize) {
    match size {
        DatasetSize::Mini => (16, 18, 20, 22, 24),
        DatasetSize::Small => (40, 50, 60, 70, 80),
        DatasetSize::Medium => (180, 190, 200, 210, 220),
        DatasetSize::Large => (800, 900, 1000, 1100, 1200),
    }
}

pub fn three_mm_init(size: DatasetSize) -> ThreeMmInit {
    let (ni, nj, nk, nl, nm) = three_mm_dims(size);
    let m = |v: usize| v as i64;
    ThreeMmInit {
        ni,
        nj,
        nk,
        nl,
        nm,
        a: Mat::from_fn(ni, nk, |i, j| rat(m(i * j + 1) % m(ni), 5 * m(ni))),
        b: Mat::from_fn(nk, nj, |i, j| rat(m(i * (j + 1) + 2) % m(nj), 5 * m(nj))),
        c: Mat::from_fn(nj, nm, |i, j| rat(m(i * (j + 3)) % m(nl), 5 * m(nl))),
        d: Mat::from_fn(nm, nl, |i, j| rat(m(i * (j + 2) + 2) % m(nk), 5 * m(nk))),
    }
}

pub struct CovarianceInit {
    /// Number of variables (columns of `data`, order of the output).
    pub m: usize,
    /// Number of observations (rows of `data`).
    pub n: usize,
    pub float_n: BigRational,
    pub data: RatMat,
}

pub fn covariance_dims(size: DatasetSize) -> (usize, usize) {
    match size {
        DatasetSize::Mini => (28, 32),
        DatasetSize::Small => (80, 100),
        DatasetSize::Medium => (240, 260),
        DatasetSize::Large => (1200, 1400),
    }
}

pub fn covariance_init(size: DatasetSize) -> CovarianceInit {
    let (m, n) = covariance_dims(size);
    CovarianceInit {
        m,
        n,
        float_n: int(n as i64),
        data: Mat::from_fn(n, m, |i, j| rat((i * j) as i64, m as i64)),
    }
}

pub fn linalg_dims(size: DatasetSize) -> usize {
    match size {
        DatasetSize::Mini => 40,
        DatasetSize::Small => 120,
        DatasetSize::Medium => 400,
        DatasetSize::Large => 2000,
    }
}

/// The positive-definite matrix shared by cholesky and ludcmp: the triangular
/// seed `A0[i][j] = 1 - j/n (j < i), 1 (j = i), 0 (j > i)` multiplied exactly
/// by its own transpose.
pub fn posdef_matrix(n: usize) -> RatMat {
    let seed = |i: usize, j: usize| -> i128 {
        // Numerator over denominator n.
        if j > i {
            0
        } else if j == i {
            n as i128
        } else {
            (n - j) as i128
        }
    };
    let den = BigInt::from((n as i128) * (n as i128));
    Mat::from_fn(n, n, |i, j| {
        let mut num: i128 = 0;
        for k in 0..=i.min(j) {
            num += seed(i, k) * seed(j, k);
        }
        BigRational::new(BigInt::from(num), den.clone())
    })
}

pub struct CholeskyInit {
    pub n: usize,
    pub a: RatMat,
}

pub fn cholesky_init(size: DatasetSize) -> CholeskyInit {
    let n = linalg_dims(size);
    CholeskyInit { n, a: posdef_matrix(n) }
}

pub struct LudcmpInit {
    pub n: usize,
    pub a: RatMat,
    pub b: Vec<BigRational>,
}

pub fn ludcmp_init(size: DatasetSize) -> LudcmpInit {
    let n = linalg_dims(size);
    // b[i] = (i+1)/n/2 + 4, exactly (i+1+8n)/(2n).
    let b = (0..n).map(|i| rat((i as i64 + 1) + 8 * n as i64, 2 * n as i64)).collect();
    LudcmpInit { n, a: posdef_matrix(n), b }
}

pub struct DurbinInit {
    pub n: usize,
    pub r: Vec<BigRational>,
}

pub fn durbin_init(size: DatasetSize) -> DurbinInit {
    let n = linalg_dims(size);
    DurbinInit { n, r: (0..n).map(|i| int(n as i64 + 1 - i as i64)).collect() }
}

pub struct FdtdInit {
    pub tmax: usize,
    pub nx: usize,
    pub ny: usize,
    pub ex: RatMat,
    pub ey: RatMat,
    pub hz: RatMat,
    pub fict: Vec<BigRational>,
}

pub fn fdtd_dims(size: DatasetSize) -> (usize, usize, usize) {
    match size {
        DatasetSize::Mini => (20, 20, 30),
        DatasetSize::Small => (40, 60, 80),
        DatasetSize::Medium => (100, 200, 240),
        DatasetSize::Large => (500, 1000, 1200),
    }
}

pub fn fdtd_init(size: DatasetSize) -> FdtdInit {
    let (tmax, nx, ny) = fdtd_dims(size);
    FdtdInit {
        tmax,
        nx,
        ny,
        ex: Mat::from_fn(nx, ny, |i, j| rat((i * (j + 1)) as i64, nx as i64)),
        ey: Mat::from_fn(nx, ny, |i, j| rat((i * (j + 2)) as i64, ny as i64)),
        hz: Mat::from_fn(nx, ny, |i, j| rat((i * (j + 3)) as i64, nx as i64)),
        fict: (0..tmax).map(|i| int(i as i64)).collect(),
    }
}

pub struct SeidelInit {
    pub tsteps: usize,
    pub n: usize,
    pub a: RatMat,
}

pub fn seidel_dims(size: DatasetSize) -> (usize, usize) {
    match size {
        DatasetSize::Mini => (20, 40),
        DatasetSize::Small => (40, 120),
        DatasetSize::Medium => (100, 400),
        DatasetSize::Large => (500, 2000),
    }
}

pub fn seidel_init(size: DatasetSize) -> SeidelInit {
    let (tsteps, n) = seidel_dims(size);
    SeidelInit {
        tsteps,
        n,
        a: Mat::from_fn(n, n, |i, j| rat((i * (j + 2) + 2) as i64, n as i64)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn gemm_mini_shapes_and_values() {
        let g = gemm_init(DatasetSize::Mini);
        assert_eq!((g.ni, g.nj, g.nk), (20, 25, 30));
        assert_eq!(g.c[(0, 0)], rat(1, 20));
        assert_eq!(g.a[(1, 0)], rat(1, 30));
        assert_eq!(g.b[(3, 4)], rat(18, 25));
    }

    #[test]
    fn posdef_matrix_is_symmetric_with_unit_corner() {
        let a = posdef_matrix(5);
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(a[(i, j)], a[(j, i)]);
            }
        }
        // Row 0 of the seed is (1, 0, 0, ...), so B[0][0] = 1.
        assert!(a[(0, 0)].is_one());
    }

    #[test]
    fn durbin_r_descends_from_n() {
        let d = durbin_init(DatasetSize::Mini);
        assert_eq!(d.r[0], int(41));
        assert_eq!(d.r[39], int(2));
    }

    #[test]
    fn fdtd_first_row_is_zero() {
        let f = fdtd_init(DatasetSize::Mini);
        assert!(f.ex[(0, 7)].is_zero());
        assert_eq!(f.hz[(1, 0)], rat(3, 20));
        assert_eq!(f.fict[3], int(3));
    }

    #[test]
    fn ludcmp_rhs_formula() {
        let l = ludcmp_init(DatasetSize::Mini);
        // (0+1)/40/2 + 4 = 321/80
        assert_eq!(l.b[0], rat(321, 80));
    }
}
