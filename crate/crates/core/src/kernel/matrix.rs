use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{KernelError, Rational};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RationalMatrix = Matrix<Rational>;
pub type IntegerMatrix = Matrix<BigInt>;

impl<T> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, KernelError> {
        if data.len() != rows * cols {
            return Err(KernelError::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, KernelError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(KernelError::Dimension("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
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

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
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

impl<T: Clone> Matrix<T> {
    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T: PartialEq> Matrix<T> {
    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    fn first_asymmetry(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl<'a, T> Mul for &'a Matrix<T>
where
    T: Clone + Zero,
    &'a T: Mul<&'a T, Output = T>,
{
    type Output = Matrix<T>;

    fn mul(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "incompatible shapes for product");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| acc + &self[(i, k)] * &rhs[(k, j)])
        })
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl IntegerMatrix {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self, KernelError> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn to_rational(&self) -> RationalMatrix {
        self.map(|x| Rational::from_integer(x.clone()))
    }
}

impl RationalMatrix {
    /// Integer view when every entry has denominator 1.
    pub fn to_integer(&self) -> Option<IntegerMatrix> {
        if self.data.iter().all(|x| x.is_integer()) {
            Some(self.map(|x| x.to_integer()))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rational) -> RationalMatrix {
        self.map(|x| x * c)
    }

    /// `v^T · self · w` for column vectors of matching length.
    pub fn bilinear(&self, v: &[Rational], w: &[Rational]) -> Rational {
        assert!(v.len() == self.rows && w.len() == self.cols);
        let mut total = Rational::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                total += &v[i] * &self[(i, j)] * &w[j];
            }
        }
        total
    }
}

fn require_square<T>(m: &Matrix<T>) -> Result<(), KernelError> {
    if m.is_square() {
        Ok(())
    } else {
        Err(KernelError::Dimension(format!(
            "expected a square matrix, got {}x{}",
            m.rows, m.cols
        )))
    }
}

/// Exact determinant by Gaussian elimination over the rationals.
pub fn determinant(m: &RationalMatrix) -> Result<Rational, KernelError> {
    require_square(m)?;
    let n = m.rows;
    let mut a = m.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
            return Ok(Rational::zero());
        };
        if pivot != col {
            a.swap_rows(pivot, col);
            det = -det;
        }
        let p = a[(col, col)].clone();
        det *= &p;
        for r in col + 1..n {
            if a[(r, col)].is_zero() {
                continue;
            }
            let factor = &a[(r, col)] / &p;
            for c in col..n {
                let delta = &factor * &a[(col, c)];
                a[(r, c)] -= delta;
            }
        }
    }
    Ok(det)
}

/// Exact inverse by Gauss-Jordan elimination.
pub fn invert(m: &RationalMatrix) -> Result<RationalMatrix, KernelError> {
    require_square(m)?;
    let n = m.rows;
    let mut a = m.clone();
    let mut inv = RationalMatrix::identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[(r, col)].is_zero())
            .ok_or(KernelError::Singular { column: col })?;
        a.swap_rows(pivot, col);
        inv.swap_rows(pivot, col);
        let p = a[(col, col)].recip();
        for c in 0..n {
            a[(col, c)] *= &p;
            inv[(col, c)] *= &p;
        }
        for r in 0..n {
            if r == col || a[(r, col)].is_zero() {
                continue;
            }
            let factor = a[(r, col)].clone();
            for c in 0..n {
                let da = &factor * &a[(col, c)];
                a[(r, c)] -= da;
                let di = &factor * &inv[(col, c)];
                inv[(r, c)] -= di;
            }
        }
    }
    Ok(inv)
}

/// Determinants of the leading k×k blocks, k = 1..n.
pub fn leading_principal_minors(m: &RationalMatrix) -> Result<Vec<Rational>, KernelError> {
    require_square(m)?;
    (1..=m.rows)
        .map(|k| determinant(&Matrix::from_fn(k, k, |i, j| m[(i, j)].clone())))
        .collect()
}

/// Sylvester's criterion: the k-th leading minor must have sign (-1)^k.
pub fn is_negative_definite(m: &RationalMatrix) -> Result<bool, KernelError> {
    require_square(m)?;
    if let Some((row, col)) = m.first_asymmetry() {
        return Err(KernelError::NotSymmetric { row, col });
    }
    let minors = leading_principal_minors(m)?;
    Ok(minors.iter().enumerate().all(|(i, d)| {
        if i % 2 == 0 {
            d.is_negative()
        } else {
            d.is_positive()
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};

    fn qm(rows: &[&[i64]]) -> RationalMatrix {
        IntegerMatrix::from_i64_rows(rows).unwrap().to_rational()
    }

    #[test]
    fn empty_determinant_is_one() {
        let m = RationalMatrix::zeros(0, 0);
        assert_eq!(determinant(&m).unwrap(), int(1));
    }

    #[test]
    fn non_square_is_rejected() {
        let m = RationalMatrix::zeros(2, 3);
        assert!(matches!(determinant(&m), Err(KernelError::Dimension(_))));
        assert!(matches!(invert(&m), Err(KernelError::Dimension(_))));
    }

    #[test]
    fn two_by_two_inverse() {
        let m = qm(&[&[-2, 1], &[1, -2]]);
        let expected = qm(&[&[2, 1], &[1, 2]]).scale(&rat(-1, 3));
        assert_eq!(invert(&m).unwrap(), expected);
        assert_eq!(invert(&RationalMatrix::identity(4)).unwrap(), RationalMatrix::identity(4));
    }

    #[test]
    fn singular_names_the_column() {
        let m = qm(&[&[1, 2], &[2, 4]]);
        assert_eq!(invert(&m), Err(KernelError::Singular { column: 1 }));
        assert_eq!(determinant(&m).unwrap(), int(0));
    }

    #[test]
    fn definiteness() {
        assert!(!is_negative_definite(&qm(&[&[1]])).unwrap());
        assert!(is_negative_definite(&qm(&[&[-2, 1], &[1, -2]])).unwrap());
        assert!(!is_negative_definite(&qm(&[&[-1, 2], &[2, -1]])).unwrap());
        assert_eq!(
            is_negative_definite(&qm(&[&[-2, 1], &[0, -2]])),
            Err(KernelError::NotSymmetric { row: 0, col: 1 })
        );
    }
}
