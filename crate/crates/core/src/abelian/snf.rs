//! Smith normal form over the integers.
//!
//! Pivoting is deterministic: the entry of smallest nonzero absolute value in
//! the active block (first in row-major order among ties), row elimination
//! before column elimination, and signs fixed only at the very end. `U` and
//! `V` are tracked together with their inverses so callers can translate
//! coordinates in both directions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// Diagonal entries `d_0, d_1, ...` up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    /// Invariant factors other than 1 (the nonzero diagonal entries > 1).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .take(self.rank)
            .filter(|d| *d > BigInt::from(1))
            .collect()
    }
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
        self.u_inv.add_col_multiple(src, dst, &-k);
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
        self.v_inv.add_row_multiple(src, dst, &-k);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
}

/// Computes `U * A * V = D` with `U`, `V` unimodular and `D` diagonal,
/// nonnegative, with `d_i | d_{i+1}`.
pub fn snf(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        a: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    let mut rank = 0;
    for t in 0..m.min(n) {
        while let Some((pi, pj)) = find_pivot(&w.a, t) {
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let p = w.a[(t, t)].clone();

            let mut clean = true;
            for i in t + 1..m {
                if w.a[(i, t)].is_zero() {
                    continue;
                }
                let q = w.a[(i, t)].div_floor(&p);
                w.add_row(i, t, &-q);
                clean &= w.a[(i, t)].is_zero();
            }
            if !clean {
                continue;
            }
            for j in t + 1..n {
                if w.a[(t, j)].is_zero() {
                    continue;
                }
                let q = w.a[(t, j)].div_floor(&p);
                w.add_col(j, t, &-q);
                clean &= w.a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // Divisibility: fold a row holding a non-multiple into the pivot row.
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !w.a[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => w.add_row(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if w.a[(t, t)].is_zero() {
            break;
        }
        rank += 1;
    }
    for t in 0..rank {
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
    }
    SmithForm {
        u: w.u,
        d: w.a,
        v: w.v,
        u_inv: w.u_inv,
        v_inv: w.v_inv,
        rank,
    }
}

fn find_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Integer solution `c` of `c * A = x`, if one exists.
pub fn solve_left(form: &SmithForm, x: &[BigInt]) -> Option<Vec<BigInt>> {
    let y = form.v.apply(x);
    let m = form.d.rows();
    let mut z = vec![BigInt::zero(); m];
    for (j, yj) in y.iter().enumerate() {
        if j < form.rank {
            let d = &form.d[(j, j)];
            if !yj.is_multiple_of(d) {
                return None;
            }
            z[j] = yj / d;
        } else if !yj.is_zero() {
            return None;
        }
    }
    Some(form.u.apply(&z))
}

/// Basis (as rows) of the left kernel `{c : c * A = 0}`.
pub fn left_kernel(a: &IntMatrix) -> IntMatrix {
    let form = snf(a);
    let idx: Vec<usize> = (form.rank..a.rows()).collect();
    form.u.select_rows(&idx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SmithForm {
        let f = snf(a);
        assert_eq!(f.u.mul(a).mul(&f.v), f.d);
        assert_eq!(f.u.mul(&f.u_inv), IntMatrix::identity(a.rows()));
        assert_eq!(f.v.mul(&f.v_inv), IntMatrix::identity(a.cols()));
        f
    }

    #[test]
    fn identity_and_zero() {
        let f = check(&IntMatrix::identity(3));
        assert_eq!(f.d, IntMatrix::identity(3));
        let z = IntMatrix::zeros(2, 3);
        let f = check(&z);
        assert!(f.d.is_zero());
        assert_eq!(f.u, IntMatrix::identity(2));
        assert_eq!(f.v, IntMatrix::identity(3));
    }

    #[test]
    fn two_by_two_example() {
        let f = check(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]]));
        assert_eq!(f.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn coprime_diagonal_merges() {
        let f = check(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(f.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn empty_shapes() {
        let f = check(&IntMatrix::zeros(0, 2));
        assert_eq!(f.rank, 0);
        assert_eq!(f.v, IntMatrix::identity(2));
        check(&IntMatrix::zeros(3, 0));
    }

    #[test]
    fn solve_and_kernel() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 3], &[4, 6]]);
        let f = snf(&a);
        let x = vec![BigInt::from(6), BigInt::from(9)];
        let c = solve_left(&f, &x).unwrap();
        assert_eq!(a.apply(&c), x);
        assert!(solve_left(&f, &[BigInt::from(1), BigInt::from(0)]).is_none());
        let k = left_kernel(&a);
        assert_eq!(k.rows(), 1);
        assert!(k.mul(&a).is_zero());
    }
}
