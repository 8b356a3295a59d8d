//! Hermite and Smith normal forms over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::int_matrix::IntMatrix;

/// Column Hermite normal form `h = m * u` with `u` unimodular.
///
/// The nonzero columns of `h` come first. Column `k` has its leading nonzero
/// entry (the pivot) in row `pivot_rows[k]`, pivot rows strictly increase, pivots
/// are positive and every entry left of a pivot lies in `[0, pivot)`. Two
/// matrices with the same column span have the same nonzero columns in `h`.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub pivot_rows: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    /// The nonzero columns of `h`: a canonical basis of the column span.
    pub fn basis(&self) -> IntMatrix {
        self.h.select_columns(0..self.rank())
    }

    /// Columns of `u` spanning the integer kernel of the input.
    pub fn kernel(&self) -> IntMatrix {
        self.u.select_columns(self.rank()..self.u.cols())
    }
}

fn smallest_in_row(h: &IntMatrix, row: usize, from: usize) -> Option<usize> {
    (from..h.cols())
        .filter(|&j| !h[(row, j)].is_zero())
        .min_by(|&a, &b| h[(row, a)].abs().cmp(&h[(row, b)].abs()))
}

pub fn hnf(m: &IntMatrix) -> Hnf {
    let (rows, cols) = m.shape();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(cols);
    let mut pivot_rows = Vec::new();
    let mut pc = 0;
    for i in 0..rows {
        if pc == cols {
            break;
        }
        // Euclid on the row: gather the gcd of row i (columns pc..) into column pc.
        loop {
            let Some(j) = smallest_in_row(&h, i, pc) else {
                break;
            };
            h.swap_columns(pc, j);
            u.swap_columns(pc, j);
            let a = h[(i, pc)].clone();
            let mut clean = true;
            for j in pc + 1..cols {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let q = -h[(i, j)].div_floor(&a);
                h.add_column_multiple(j, pc, &q);
                u.add_column_multiple(j, pc, &q);
                if !h[(i, j)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(i, pc)].is_zero() {
            continue;
        }
        if h[(i, pc)].is_negative() {
            h.negate_column(pc);
            u.negate_column(pc);
        }
        let piv = h[(i, pc)].clone();
        for j in 0..pc {
            let q = -h[(i, j)].div_floor(&piv);
            h.add_column_multiple(j, pc, &q);
            u.add_column_multiple(j, pc, &q);
        }
        pivot_rows.push(i);
        pc += 1;
    }
    Hnf { h, u, pivot_rows }
}

/// Smith normal form `d = u * m * v`, with `u`, `v` unimodular, `d` diagonal,
/// nonnegative and `d_1 | d_2 | ...`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn snf(m: &IntMatrix) -> Snf {
    let (rows, cols) = m.shape();
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let n = rows.min(cols);
    for t in 0..n {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if d[(i, j)].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else {
            break;
        };
        d.swap_rows(t, bi);
        u.swap_rows(t, bi);
        d.swap_columns(t, bj);
        v.swap_columns(t, bj);
        loop {
            // bring the smallest entry of row t / column t into the pivot
            let mut bi = t;
            let mut bj = t;
            for i in t..rows {
                if !d[(i, t)].is_zero() && (d[(bi, bj)].is_zero() || d[(i, t)].abs() < d[(bi, bj)].abs()) {
                    bi = i;
                    bj = t;
                }
            }
            for j in t..cols {
                if !d[(t, j)].is_zero() && (d[(bi, bj)].is_zero() || d[(t, j)].abs() < d[(bi, bj)].abs()) {
                    bi = t;
                    bj = j;
                }
            }
            d.swap_rows(t, bi);
            u.swap_rows(t, bi);
            d.swap_columns(t, bj);
            v.swap_columns(t, bj);

            let piv = d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&piv);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&piv);
                d.add_column_multiple(j, t, &q);
                v.add_column_multiple(j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&piv)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    Snf { u, d, v }
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> IntMatrix {
    assert_eq!(m.rows(), m.cols());
    let f = hnf(m);
    debug_assert_eq!(f.h, IntMatrix::identity(m.rows()), "matrix is not unimodular");
    f.u
}
