//! Smith normal form over the integers.
//!
//! Row/column reduction pivoting on the entry of least nonzero absolute
//! value. Both unimodular transforms are tracked.

use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// `u * m * v == diag` with `u`, `v` unimodular and the nonzero diagonal
/// entries `invariants` positive and forming a divisibility chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf<T> {
    pub u: Matrix<T>,
    pub v: Matrix<T>,
    pub diag: Matrix<T>,
    pub invariants: Vec<T>,
}

impl<T: Scalar> Snf<T> {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// Product of the invariant factors (|det| for square full-rank input).
    pub fn product(&self) -> T {
        self.invariants.iter().fold(T::one(), |acc, d| acc * d.clone())
    }

    /// Re-derive the decomposition by exact multiplication.
    pub fn verify(&self, m: &Matrix<T>) -> bool {
        if self.u.mul(m).mul(&self.v) != self.diag {
            return false;
        }
        if !self.u.is_unimodular() || !self.v.is_unimodular() {
            return false;
        }
        let r = self.diag.rows().min(self.diag.cols());
        for i in 0..self.diag.rows() {
            for j in 0..self.diag.cols() {
                if i != j && !self.diag[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        let diag: Vec<T> = (0..r).map(|i| self.diag[(i, i)].clone()).collect();
        let nonzero: Vec<T> = diag.iter().filter(|d| !d.is_zero()).cloned().collect();
        if nonzero != self.invariants || nonzero.iter().any(|d| !d.is_positive()) {
            return false;
        }
        // zeros trail and the chain divides
        let k = nonzero.len();
        diag[k..].iter().all(|d| d.is_zero()) && nonzero.windows(2).all(|w| w[1].is_multiple_of(&w[0]))
    }
}

fn min_abs_nonzero<T: Scalar>(a: &Matrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, T)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = a[(i, j)].abs();
            if v.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, _, b)| v < *b) {
                best = Some((i, j, v));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

pub fn smith_normal_form<T: Scalar>(m: &Matrix<T>) -> Snf<T> {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = Matrix::identity(r);
    let mut v = Matrix::identity(c);

    for t in 0..r.min(c) {
        loop {
            let Some((pi, pj)) = min_abs_nonzero(&a, t) else {
                break;
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..r {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let f = -(a[(i, t)].clone() / pivot.clone());
                a.add_row_multiple(i, t, &f);
                u.add_row_multiple(i, t, &f);
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..c {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let f = -(a[(t, j)].clone() / pivot.clone());
                a.add_col_multiple(j, t, &f);
                v.add_col_multiple(j, t, &f);
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = T::one();
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }

    let invariants = (0..r.min(c)).map(|i| a[(i, i)].clone()).filter(|d| !d.is_zero()).collect();
    Snf { u, v, diag: a, invariants }
}

/// Invariant factors (each > 1) of `Z^cols / rowspace(m)` together with the
/// free rank of that cokernel.
pub fn cokernel<T: Scalar>(m: &Matrix<T>) -> (Vec<T>, usize) {
    let snf = smith_normal_form(m);
    let free = m.cols() - snf.rank();
    let torsion = snf.invariants.into_iter().filter(|d| !d.is_one()).collect();
    (torsion, free)
}


/// Structure of `L / P` where `L` is the row lattice spanned by the rows of
/// `outer` together with `inner`, and `P` is spanned by the rows of `inner`.
///
/// Returns the invariant factors (> 1) and the free rank.
pub fn subquotient<T: Scalar>(outer: &Matrix<T>, inner: &Matrix<T>) -> (Vec<T>, usize) {
    assert_eq!(outer.cols(), inner.cols());
    let n = outer.cols();
    let stacked = Matrix::from_fn(outer.rows() + inner.rows(), n, |i, j| {
        if i < outer.rows() {
            outer[(i, j)].clone()
        } else {
            inner[(i - outer.rows(), j)].clone()
        }
    });
    let snf = smith_normal_form(&stacked);
    let rank = snf.rank();
    // coordinates of each row of `inner` in the basis d_j · (row j of V^{-1})
    let coords = Matrix::from_fn(inner.rows(), rank, |i, j| {
        let xv: T = (0..n).fold(T::zero(), |acc, k| acc + inner[(i, k)].clone() * snf.v[(k, j)].clone());
        debug_assert!(xv.is_multiple_of(&snf.invariants[j]));
        xv / snf.invariants[j].clone()
    });
    cokernel(&coords)
}

#[cfg(test)]
mod subquotient_tests {
    use super::*;

    #[test]
    fn index_two_sublattice() {
        // L = Z^2, P = 2Z ⊕ 6Z → L/P = Z/2 ⊕ Z/6
        let outer = Matrix::from_rows(vec![vec![1i64, 0], vec![0, 1]]);
        let inner = Matrix::from_rows(vec![vec![2i64, 0], vec![0, 6]]);
        assert_eq!(subquotient(&outer, &inner), (vec![2, 6], 0));
        // L = span{(1,1)} + P
        let outer = Matrix::from_rows(vec![vec![1i64, 1]]);
        let inner = Matrix::from_rows(vec![vec![4i64, 0], vec![0, 4]]);
        // L/P is generated by (1,1) of order 4
        assert_eq!(subquotient(&outer, &inner), (vec![4], 0));
    }
}
