use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntegerMatrix;

/// `left · A · right = diag(diagonal)` with `left`, `right` unimodular and
/// each diagonal entry dividing the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub diagonal: Vec<BigInt>,
    pub left: IntegerMatrix,
    pub right: IntegerMatrix,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    pub fn diagonal_matrix(&self) -> IntegerMatrix {
        let (r, c) = (self.left.rows(), self.right.cols());
        IntegerMatrix::from_fn(r, c, |i, j| {
            if i == j {
                self.diagonal[i].clone()
            } else {
                BigInt::zero()
            }
        })
    }
}

fn add_row_multiple(m: &mut IntegerMatrix, target: usize, source: usize, factor: &BigInt) {
    for j in 0..m.cols() {
        let delta = factor * &m[(source, j)];
        m[(target, j)] += delta;
    }
}

fn add_col_multiple(m: &mut IntegerMatrix, target: usize, source: usize, factor: &BigInt) {
    for i in 0..m.rows() {
        let delta = factor * &m[(i, source)];
        m[(i, target)] += delta;
    }
}

pub fn smith_normal_form(a: &IntegerMatrix) -> SmithDecomposition {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut left = IntegerMatrix::identity(rows);
    let mut right = IntegerMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d[(i, j)].is_zero()
                    && best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        left.swap_rows(t, pi);
        d.swap_cols(t, pj);
        right.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                add_row_multiple(&mut d, i, t, &q);
                add_row_multiple(&mut left, i, t, &q);
                if !d[(i, t)].is_zero() {
                    d.swap_rows(t, i);
                    left.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                add_col_multiple(&mut d, j, t, &q);
                add_col_multiple(&mut right, j, t, &q);
                if !d[(t, j)].is_zero() {
                    d.swap_cols(t, j);
                    right.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)]))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    add_row_multiple(&mut d, t, i, &one);
                    add_row_multiple(&mut left, t, i, &one);
                }
                None => break,
            }
        }

        if d[(t, t)].is_negative() {
            let minus = -BigInt::one();
            for j in 0..cols {
                d[(t, j)] = &d[(t, j)] * &minus;
            }
            for j in 0..rows {
                left[(t, j)] = &left[(t, j)] * &minus;
            }
        }
    }

    let diagonal = (0..rows.min(cols)).map(|i| d[(i, i)].clone()).collect();
    SmithDecomposition {
        diagonal,
        left,
        right,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::determinant;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn already_diagonal() {
        let m = IntegerMatrix::from_i64_rows(&[&[2, 0], &[0, 4]]).unwrap();
        assert_eq!(smith_normal_form(&m).diagonal, big(&[2, 4]));
    }

    #[test]
    fn zero_matrix() {
        let m = IntegerMatrix::zeros(2, 2);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal, big(&[0, 0]));
        assert_eq!(snf.rank(), 0);
    }

    #[test]
    fn coprime_diagonal_collapses() {
        let m = IntegerMatrix::from_i64_rows(&[&[2, 0], &[0, 3]]).unwrap();
        assert_eq!(smith_normal_form(&m).diagonal, big(&[1, 6]));
    }

    proptest! {
        #[test]
        fn decomposition_is_valid(
            rows in 1usize..5,
            cols in 1usize..5,
            entries in proptest::collection::vec(-9i64..10, 16),
        ) {
            let a = IntegerMatrix::from_fn(rows, cols, |i, j| BigInt::from(entries[i * 4 + j]));
            let snf = smith_normal_form(&a);
            prop_assert_eq!(&(&(&snf.left * &a) * &snf.right), &snf.diagonal_matrix());
            for w in snf.diagonal.windows(2) {
                prop_assert!(!w[0].is_negative());
                if w[0].is_zero() {
                    prop_assert!(w[1].is_zero());
                } else {
                    prop_assert!(w[1].is_multiple_of(&w[0]));
                }
            }
            let dl = determinant(&snf.left.to_rational()).unwrap();
            let dr = determinant(&snf.right.to_rational()).unwrap();
            prop_assert!(dl.abs().is_one() && dr.abs().is_one());
            if rows == cols {
                let det = determinant(&a.to_rational()).unwrap();
                let prod: BigInt = snf.diagonal.iter().product();
                prop_assert_eq!(det.abs().to_integer(), prod);
            }
        }
    }
}
