use std::fmt;

use rug::{Integer, Rational};

use super::LinalgError;
use crate::precision::BigReal;

/// Scalar ring used as a matrix entry.
pub trait Entry: Clone + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
}

impl Entry for BigReal {
    fn zero() -> Self {
        BigReal::zero()
    }
    fn one() -> Self {
        BigReal::one()
    }
    fn is_zero(&self) -> bool {
        self.is_exact_zero()
    }
    fn add(&self, o: &Self) -> Self {
        BigReal::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        BigReal::mul(self, o)
    }
}

impl Entry for Integer {
    fn zero() -> Self {
        Integer::new()
    }
    fn one() -> Self {
        Integer::from(1)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, o: &Self) -> Self {
        Integer::from(self + o)
    }
    fn mul(&self, o: &Self) -> Self {
        Integer::from(self * o)
    }
}

impl Entry for Rational {
    fn zero() -> Self {
        Rational::new()
    }
    fn one() -> Self {
        Rational::from(1)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, o: &Self) -> Self {
        Rational::from(self + o)
    }
    fn mul(&self, o: &Self) -> Self {
        Rational::from(self * o)
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Entry> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Entry::is_zero)
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U, E>(&self, f: impl FnMut(&T) -> Result<U, E>) -> Result<Matrix<U>, E> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| c.mul(x))
    }

    pub fn add(&self, o: &Self) -> Result<Self, LinalgError> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(LinalgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (o.rows, o.cols),
            });
        }
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    /// `self * o`, skipping exact zeros of the left factor.
    pub fn multiply(&self, o: &Self) -> Result<Self, LinalgError> {
        if self.cols != o.rows {
            return Err(LinalgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (o.rows, o.cols),
            });
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    let prod = a.mul(b);
                    out.data[idx] =
                        if out.data[idx].is_zero() { prod } else { out.data[idx].add(&prod) };
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product; entry `(i1*r2 + i2, j1*c2 + j2)` is `a[i1,j1] * b[i2,j2]`.
    pub fn kron(&self, o: &Self) -> Self {
        let (r2, c2) = (o.rows, o.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            let a = self.get(i / r2, j / c2);
            if a.is_zero() {
                T::zero()
            } else {
                a.mul(o.get(i % r2, j % c2))
            }
        })
    }

    pub fn pow(&self, k: u32) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = self.multiply(&acc)?;
        }
        Ok(acc)
    }

    /// The `d x d` block at block coordinates `(bi, bj)`.
    pub fn block(&self, bi: usize, bj: usize, d: usize) -> Self {
        Self::from_fn(d, d, |i, j| self.get(bi * d + i, bj * d + j).clone())
    }

    pub fn set_block(&mut self, bi: usize, bj: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(bi * b.rows + i, bj * b.cols + j, b.get(i, j).clone());
            }
        }
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }
}

impl Matrix<Integer> {
    pub fn from_i64(rows: usize, cols: usize, vals: &[i64]) -> Self {
        assert_eq!(vals.len(), rows * cols);
        Matrix { rows, cols, data: vals.iter().map(|&v| Integer::from(v)).collect() }
    }

    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_i64().unwrap_or(i64::MAX)).collect())
            .collect()
    }
}

impl Matrix<BigReal> {
    pub fn from_integers(m: &Matrix<Integer>, prec: u32) -> Self {
        m.map(|v| if *v == 0 { BigReal::zero() } else { BigReal::from_integer(v, prec) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: usize, vals: &[i64]) -> Matrix<Integer> {
        Matrix::from_i64(rows, vals.len() / rows, vals)
    }

    #[test]
    fn hand_product() {
        let a = im(2, &[1, 1, 0, 1]);
        let b = im(2, &[1, 0, 1, 1]);
        assert_eq!(a.multiply(&b).unwrap(), im(2, &[2, 1, 1, 1]));
        assert_eq!(Matrix::identity(2).multiply(&a).unwrap(), a);
        assert!(Matrix::<Integer>::zeros(2, 2).multiply(&a).unwrap().is_zero());
    }

    #[test]
    fn mismatch_rejected() {
        let a = im(2, &[1, 2, 3, 4, 5, 6]);
        assert!(a.multiply(&a).is_err());
        assert!(Matrix::<Integer>::new(2, 2, vec![Integer::new()]).is_err());
    }

    #[test]
    fn kron_printed_pattern() {
        let a0 = im(2, &[1, 1, 0, 1]);
        let d0 = im(4, &[1, 1, 1, 1, 0, 1, 0, 1, 0, 0, 1, 1, 0, 0, 0, 1]);
        assert_eq!(a0.kron(&a0), d0);
        let m = im(2, &[2, 3, 5, 7]);
        let blockdiag = im(4, &[2, 3, 0, 0, 5, 7, 0, 0, 0, 0, 2, 3, 0, 0, 5, 7]);
        assert_eq!(Matrix::identity(2).kron(&m), blockdiag);
    }

    #[test]
    fn unipotent_power() {
        let a0 = im(2, &[1, 1, 0, 1]);
        assert_eq!(a0.pow(7).unwrap(), im(2, &[1, 7, 0, 1]));
    }

    #[test]
    fn blocks_round_trip() {
        let mut m = Matrix::<Integer>::zeros(6, 6);
        let b = im(2, &[1, 2, 3, 4]);
        m.set_block(1, 2, &b);
        assert_eq!(m.block(1, 2, 2), b);
        assert_eq!(m.nonzero_count(), 4);
        assert_eq!(*m.get(2, 4), 1);
    }
}
