//! Dense matrices over a [`FiniteField`] and the handful of elimination
//! routines the form classifier needs.

use crate::field::{Elem, FiniteField};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Elem::ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries. Panics on a length mismatch.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix, f: &FiniteField) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimensions");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out[(i, j)], f.mul(a, other[(k, j)]));
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Elem], f: &FiniteField) -> Vec<Elem> {
        assert_eq!(self.cols, x.len(), "matrix-vector dimensions");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(Elem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    /// Pivots are taken in increasing column order.
    pub fn rref(&mut self, f: &FiniteField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = f.inv(self[(r, c)]).expect("pivot is nonzero");
            for j in 0..self.cols {
                self[(r, j)] = f.mul(self[(r, j)], inv);
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let factor = self[(i, c)];
                for j in 0..self.cols {
                    let v = f.sub(self[(i, j)], f.mul(factor, self[(r, j)]));
                    self[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &FiniteField) -> usize {
        self.clone().rref(f).len()
    }

    pub fn is_invertible(&self, f: &FiniteField) -> bool {
        self.rows == self.cols && self.rank(f) == self.rows
    }

    /// Basis of `{ y : self * y = 0 }`, one vector per free column, each with
    /// a 1 in its free coordinate.
    pub fn null_space(&self, f: &FiniteField) -> Vec<Vec<Elem>> {
        let mut red = self.clone();
        let pivots = red.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Elem::ZERO; self.cols];
                v[fc] = Elem::ONE;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(red[(row, fc)]);
                }
                v
            })
            .collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Elem;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Elem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Elem {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_diagonal() {
        let f = FiniteField::new(3, 1).unwrap();
        let m = Matrix::from_rows(2, 2, vec![Elem(2), Elem(0), Elem(0), Elem(0)]);
        assert_eq!(m.null_space(&f), vec![vec![Elem(0), Elem(1)]]);
        assert_eq!(m.rank(&f), 1);
    }

    #[test]
    fn null_space_vectors_are_annihilated() {
        let f = FiniteField::new(5, 1).unwrap();
        let m = Matrix::from_rows(
            2,
            4,
            vec![Elem(1), Elem(2), Elem(3), Elem(4), Elem(2), Elem(4), Elem(1), Elem(0)],
        );
        let basis = m.null_space(&f);
        assert_eq!(basis.len(), 4 - m.rank(&f));
        for v in basis {
            assert!(m.mul_vec(&v, &f).iter().all(|e| e.is_zero()));
        }
    }
}
