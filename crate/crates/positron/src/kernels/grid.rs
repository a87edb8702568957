//! Minimal row-major matrix container shared by the kernel ports.

use std::ops::{Index, IndexMut};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat<V> {
    rows: usize,
    cols: usize,
    d: Vec<V>,
}

impl<V> Mat<V> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> V) -> Self {
        let mut d = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                d.push(f(i, j));
            }
        }
        Mat { rows, cols, d }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn map<W>(&self, mut f: impl FnMut(&V) -> W) -> Mat<W> {
        Mat { rows: self.rows, cols: self.cols, d: self.d.iter().map(|v| f(v)).collect() }
    }

    pub fn into_vec(self) -> Vec<V> {
        self.d
    }

    pub fn as_slice(&self) -> &[V] {
        &self.d
    }
}

impl<V> Index<(usize, usize)> for Mat<V> {
    type Output = V;
    fn index(&self, (i, j): (usize, usize)) -> &V {
        debug_assert!(i < self.rows && j < self.cols);
        &self.d[i * self.cols + j]
    }
}

impl<V> IndexMut<(usize, usize)> for Mat<V> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut V {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.d[i * self.cols + j]
    }
}
