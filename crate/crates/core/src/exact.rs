//! Dense matrices over exact rings: integers, rationals and Gaussian rationals.

use std::fmt;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_traits::{Num, One, Zero};

use crate::error::{Error, Result};
use crate::numeric::CMatrix;
use crate::rational::{to_f64, Rational};

pub type IntMatrix = ExactMatrix<BigInt>;
pub type RationalMatrix = ExactMatrix<Rational>;
pub type GaussianRational = Complex<Rational>;
pub type GaussianMatrix = ExactMatrix<GaussianRational>;

#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Display> fmt::Debug for ExactMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.data[r * self.cols + c].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<T: Clone + Num> ExactMatrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    /// # Panics
    /// If the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ExactMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn map<U: Clone + Num>(&self, f: impl Fn(&T) -> U) -> ExactMatrix<U> {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| T::zero() - x.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |r, c| {
            (0..self.cols).fold(T::zero(), |acc, k| acc + self.get(r, k).clone() * rhs.get(k, c).clone())
        }))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs)?;
        Ok(Self::from_fn(self.rows, self.cols, |r, c| self.get(r, c).clone() + rhs.get(r, c).clone()))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs)?;
        Ok(Self::from_fn(self.rows, self.cols, |r, c| self.get(r, c).clone() - rhs.get(r, c).clone()))
    }

    fn same_shape(&self, rhs: &Self) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        Ok(())
    }

    /// Extracts the `size`×`size` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    /// Assembles `[[a, b], [c, d]]` from four blocks of compatible sizes.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let top = a.rows;
        let left = a.cols;
        Self::from_fn(a.rows + c.rows, a.cols + b.cols, |r, col| match (r < top, col < left) {
            (true, true) => a.get(r, col).clone(),
            (true, false) => b.get(r, col - left).clone(),
            (false, true) => c.get(r - top, col).clone(),
            (false, false) => d.get(r - top, col - left).clone(),
        })
    }
}

impl<T: Clone + Num> ExactMatrix<T> {
    /// Gauss–Jordan inverse over a field; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = a.get(col, col).clone();
            for c in 0..n {
                a.set(col, c, a.get(col, c).clone() / p.clone());
                inv.set(col, c, inv.get(col, c).clone() / p.clone());
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for c in 0..n {
                    let v = a.get(r, c).clone() - f.clone() * a.get(col, c).clone();
                    a.set(r, c, v);
                    let w = inv.get(r, c).clone() - f.clone() * inv.get(col, c).clone();
                    inv.set(r, c, w);
                }
            }
        }
        Some(inv)
    }

    /// Determinant by elimination over a field.
    pub fn determinant(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return T::zero();
            };
            if pivot != col {
                a.swap_rows(pivot, col);
                det = T::zero() - det;
            }
            let p = a.get(col, col).clone();
            det = det * p.clone();
            for r in col + 1..n {
                if a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone() / p.clone();
                for c in col..n {
                    let v = a.get(r, c).clone() - f.clone() * a.get(col, c).clone();
                    a.set(r, c, v);
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl IntMatrix {
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn to_rational(&self) -> RationalMatrix {
        self.map(|x| Rational::from_integer(x.clone()))
    }

    pub fn to_complex(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |r, c| {
            Complex64::new(to_f64(&Rational::from_integer(self.get(r, c).clone())), 0.0)
        })
    }

    pub fn to_gaussian(&self) -> GaussianMatrix {
        self.map(|x| Complex::new(Rational::from_integer(x.clone()), Rational::zero()))
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.transpose() == self.neg()
    }

    /// Standard symplectic form `[[0, -I], [I, 0]]` of size `2g`.
    pub fn standard_symplectic(g: usize) -> Self {
        Self::from_fn(2 * g, 2 * g, |r, c| {
            if r < g && c == r + g {
                -BigInt::one()
            } else if r >= g && c + g == r {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }
}

impl RationalMatrix {
    /// Converts back to integers when every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        if self.data.iter().all(|x| x.is_integer()) {
            Some(self.map(|x| x.to_integer()))
        } else {
            None
        }
    }

    pub fn to_gaussian(&self) -> GaussianMatrix {
        self.map(|x| Complex::new(x.clone(), Rational::zero()))
    }
}

impl GaussianMatrix {
    pub fn to_complex(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |r, c| {
            let z = self.get(r, c);
            Complex64::new(to_f64(&z.re), to_f64(&z.im))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn inverse_and_determinant() {
        let m = RationalMatrix::from_rows(vec![
            vec![int(2), int(1), int(0)],
            vec![int(1), int(3), int(1)],
            vec![int(0), int(1), int(4)],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), RationalMatrix::identity(3));
        assert_eq!(m.determinant(), int(18));
        let singular = RationalMatrix::from_rows(vec![vec![int(1), int(2)], vec![rat(1, 2), int(1)]]);
        assert!(singular.inverse().is_none());
        assert_eq!(singular.determinant(), int(0));
    }

    #[test]
    fn gaussian_inverse() {
        let i = Complex::new(int(0), int(1));
        let one = Complex::new(int(1), int(0));
        let zero = Complex::new(int(0), int(0));
        let p = GaussianMatrix::from_rows(vec![vec![i.clone(), -one.clone()], vec![one.clone(), zero.clone()]]);
        let inv = p.inverse().unwrap();
        assert_eq!(p.mul(&inv).unwrap(), GaussianMatrix::identity(2));
    }

    #[test]
    fn symplectic_form() {
        let j = IntMatrix::standard_symplectic(2);
        assert!(j.is_antisymmetric());
        assert_eq!(j.get(0, 2), &BigInt::from(-1));
        assert_eq!(j.get(2, 0), &BigInt::from(1));
        assert_eq!(j.mul(&j).unwrap(), IntMatrix::identity(4).neg());
    }
}
