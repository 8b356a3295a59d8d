//! Linear algebra over the prime field `F_p`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::int_matrix::IntMatrix;
use crate::error::{Error, Result};

/// Trial-division primality test.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Accept `p` only if it is a prime small enough that products of residues fit a `u64`.
pub fn check_prime(p: u64) -> Result<u64> {
    if p >= 1 << 32 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(p)
}

pub fn reduce(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits u64")
}

fn inv(a: u64, p: u64) -> u64 {
    pow(a, p - 2, p)
}

fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

/// Matrix over `F_p`, entries stored as least nonnegative residues.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x.rem_euclid(p as i64) as u64);
            }
        }
        m
    }

    /// Reduce an integer matrix mod `p`.
    pub fn from_int(p: u64, m: &IntMatrix) -> Self {
        let mut out = Self::zeros(p, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, reduce(&m[(i, j)], p));
            }
        }
        out
    }

    pub fn from_columns(p: u64, rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x % p);
            }
        }
        m
    }

    /// Integer lift by least nonnegative residues.
    pub fn lift(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = BigInt::from(self.get(i, j));
            }
        }
        m
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!(self.p, rhs.p, "mixed primes");
        assert_eq!(self.cols, rhs.rows, "shape mismatch in F_p product");
        let p = self.p;
        let mut out = Self::zeros(p, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = (out.data[idx] + a * rhs.get(k, j)) % p;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (a, b)| (acc + a * (b % self.p)) % self.p)
            })
            .collect()
    }

    /// Apply to an integer vector, reducing it first.
    pub fn apply_int(&self, v: &[BigInt]) -> Vec<u64> {
        let r: Vec<u64> = v.iter().map(|x| reduce(x, self.p)).collect();
        self.mul_vec(&r)
    }

    pub fn neg(&self) -> FpMatrix {
        let mut m = self.clone();
        for x in &mut m.data {
            *x = (self.p - *x) % self.p;
        }
        m
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.shape(), other.shape());
        let mut m = self.clone();
        for (x, y) in m.data.iter_mut().zip(&other.data) {
            *x = (*x + self.p - y) % self.p;
        }
        m
    }

    pub fn hstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.p, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    pub fn select_columns(&self, idx: impl IntoIterator<Item = usize>) -> FpMatrix {
        let cols: Vec<Vec<u64>> = idx.into_iter().map(|j| self.column(j)).collect();
        Self::from_columns(self.p, self.rows, &cols)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let iv = inv(m.get(r, c), p);
            for j in 0..m.cols {
                let v = m.get(r, j) * iv % p;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = (m.get(i, j) + p - f * m.get(r, j) % p) % p;
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Null space `{v : M v = 0}`.
    pub fn kernel(&self) -> FpSubspace {
        let (r, pivots) = self.rref();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let vectors: Vec<Vec<u64>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![0u64; self.cols];
                v[f] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - r.get(row, f)) % p;
                }
                v
            })
            .collect();
        FpSubspace::from_vectors(p, self.cols, &vectors)
    }

    /// Some `x` with `M x = b`.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let p = self.p;
        let aug = self.hstack(&FpMatrix::from_columns(p, self.rows, &[b.to_vec()]));
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols);
        }
        Some(x)
    }

    /// Image (column space) as a subspace.
    pub fn image(&self) -> FpSubspace {
        FpSubspace::from_vectors(self.p, self.rows, &self.columns())
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix(p={}) {}x{} [", self.p, self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Subspace of `F_p^n`, stored by the nonzero rows of its reduced row echelon form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FpSubspace {
    p: u64,
    ambient: usize,
    basis: FpMatrix,
    pivots: Vec<usize>,
}

impl FpSubspace {
    pub fn from_vectors(p: u64, ambient: usize, vectors: &[Vec<u64>]) -> Self {
        let mut m = FpMatrix::zeros(p, vectors.len(), ambient);
        for (i, v) in vectors.iter().enumerate() {
            assert_eq!(v.len(), ambient, "vector length mismatch");
            for (j, &x) in v.iter().enumerate() {
                m.set(i, j, x % p);
            }
        }
        let (r, pivots) = m.rref();
        let mut basis = FpMatrix::zeros(p, pivots.len(), ambient);
        for i in 0..pivots.len() {
            for j in 0..ambient {
                basis.set(i, j, r.get(i, j));
            }
        }
        FpSubspace {
            p,
            ambient,
            basis,
            pivots,
        }
    }

    /// Span of integer vectors reduced mod `p`.
    pub fn from_int_vectors(p: u64, ambient: usize, vectors: &[Vec<BigInt>]) -> Self {
        let red: Vec<Vec<u64>> = vectors
            .iter()
            .map(|v| v.iter().map(|x| reduce(x, p)).collect())
            .collect();
        Self::from_vectors(p, ambient, &red)
    }

    pub fn zero(p: u64, ambient: usize) -> Self {
        Self::from_vectors(p, ambient, &[])
    }

    pub fn full(p: u64, ambient: usize) -> Self {
        Self::from_vectors(p, ambient, &FpMatrix::identity(p, ambient).columns())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> Vec<Vec<u64>> {
        (0..self.dim()).map(|i| self.basis.row(i).to_vec()).collect()
    }

    /// Basis vectors as the columns of an `ambient x dim` matrix.
    pub fn basis_matrix(&self) -> FpMatrix {
        self.basis.transpose()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut rest: Vec<u64> = v.iter().map(|x| x % self.p).collect();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let f = rest[pc];
            if f == 0 {
                continue;
            }
            for (j, r) in rest.iter_mut().enumerate() {
                *r = (*r + self.p - f * self.basis.get(i, j) % self.p) % self.p;
            }
        }
        rest.iter().all(|&x| x == 0)
    }

    pub fn contains_subspace(&self, other: &FpSubspace) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &FpSubspace) -> FpSubspace {
        assert_eq!(self.ambient, other.ambient);
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Self::from_vectors(self.p, self.ambient, &vs)
    }

    pub fn intersection(&self, other: &FpSubspace) -> FpSubspace {
        assert_eq!(self.ambient, other.ambient);
        // a A = b B  <=>  [A^T | -B^T] (a, b) = 0
        let a = self.basis_matrix();
        let b = other.basis_matrix();
        let ker = a.hstack(&b.neg()).kernel();
        let vs: Vec<Vec<u64>> = ker
            .basis_vectors()
            .iter()
            .map(|k| a.mul_vec(&k[..self.dim()]))
            .collect();
        Self::from_vectors(self.p, self.ambient, &vs)
    }

    /// Image under a linear map.
    pub fn image(&self, m: &FpMatrix) -> FpSubspace {
        let vs: Vec<Vec<u64>> = self.basis_vectors().iter().map(|v| m.mul_vec(v)).collect();
        Self::from_vectors(self.p, m.rows(), &vs)
    }

    /// Preimage `{x : M x in self}`.
    pub fn preimage(&self, m: &FpMatrix) -> FpSubspace {
        assert_eq!(m.rows(), self.ambient);
        let q = QuotientMap::new(self);
        q.matrix.mul(m).kernel()
    }
}

/// Complement of `w`: the standard basis vectors at the non-pivot positions of its echelon form.
pub fn fp_complement(w: &FpSubspace) -> FpSubspace {
    let vectors: Vec<Vec<u64>> = (0..w.ambient)
        .filter(|c| !w.pivots.contains(c))
        .map(|c| {
            let mut v = vec![0; w.ambient];
            v[c] = 1;
            v
        })
        .collect();
    FpSubspace::from_vectors(w.p, w.ambient, &vectors)
}

/// Complement of `w` inside a larger subspace `v`, chosen greedily from `v`'s echelon basis.
pub fn fp_complement_within(w: &FpSubspace, v: &FpSubspace) -> FpSubspace {
    assert!(v.contains_subspace(w), "complement of a subspace not contained in the ambient");
    let mut acc = w.clone();
    let mut chosen = Vec::new();
    for b in v.basis_vectors() {
        if !acc.contains(&b) {
            acc = acc.sum(&FpSubspace::from_vectors(w.p, w.ambient, &[b.clone()]));
            chosen.push(b);
        }
    }
    FpSubspace::from_vectors(w.p, w.ambient, &chosen)
}

pub fn fp_kernel(m: &FpMatrix) -> FpSubspace {
    m.kernel()
}

pub fn fp_rank(m: &FpMatrix) -> usize {
    m.rank()
}

pub fn fp_solve(m: &FpMatrix, b: &[u64]) -> Option<Vec<u64>> {
    m.solve(b)
}

/// The projection `F_p^n -> F_p^n / W`, in coordinates given by the non-pivot
/// positions of `W`, together with the section sending each quotient basis vector
/// to the corresponding standard basis vector.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    pub matrix: FpMatrix,
    pub section: FpMatrix,
    pub free_positions: Vec<usize>,
}

impl QuotientMap {
    pub fn new(w: &FpSubspace) -> Self {
        let p = w.p;
        let n = w.ambient;
        let free: Vec<usize> = (0..n).filter(|c| !w.pivots.contains(c)).collect();
        let d = free.len();
        let mut matrix = FpMatrix::zeros(p, d, n);
        let mut section = FpMatrix::zeros(p, n, d);
        for (k, &c) in free.iter().enumerate() {
            matrix.set(k, c, 1);
            section.set(c, k, 1);
        }
        // e_pc = e_pc - w_i  (mod W), which has support only on free positions
        for (i, &pc) in w.pivots.iter().enumerate() {
            for (k, &c) in free.iter().enumerate() {
                let val = (p - w.basis.get(i, c)) % p;
                matrix.set(k, pc, val);
            }
        }
        QuotientMap {
            matrix,
            section,
            free_positions: free,
        }
    }

    pub fn dim(&self) -> usize {
        self.free_positions.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(3) && is_prime(5) && is_prime(101));
        assert!(!is_prime(0) && !is_prime(1) && !is_prime(4) && !is_prime(91));
        assert!(check_prime(6).is_err());
    }

    #[test]
    fn kernel_rank_examples() {
        let id = FpMatrix::identity(5, 3);
        assert_eq!(id.kernel().dim(), 0);
        assert_eq!(id.rank(), 3);
        let m = FpMatrix::from_rows(2, &[vec![1, 1]]);
        let k = m.kernel();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[1, 1]));
        let z = FpMatrix::zeros(3, 2, 4);
        assert_eq!(z.kernel(), FpSubspace::full(3, 4));
    }

    #[test]
    fn solve_examples() {
        let m = FpMatrix::from_rows(5, &[vec![1, 2], vec![3, 4]]);
        let x = m.solve(&[1, 0]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![1, 0]);
        let s = FpMatrix::from_rows(3, &[vec![1, 1], vec![2, 2]]);
        assert!(s.solve(&[1, 1]).is_none());
    }

    #[test]
    fn complement_examples() {
        let full = FpSubspace::full(2, 3);
        assert_eq!(fp_complement(&full).dim(), 0);
        let zero = FpSubspace::zero(2, 3);
        assert_eq!(fp_complement(&zero), full);
        let w = FpSubspace::from_vectors(2, 2, &[vec![1, 1]]);
        let u = fp_complement(&w);
        assert_eq!(u, FpSubspace::from_vectors(2, 2, &[vec![0, 1]]));
        assert_eq!(w.sum(&u).dim(), 2);
        assert_eq!(w.intersection(&u).dim(), 0);
    }

    #[test]
    fn quotient_map_kills_subspace() {
        let w = FpSubspace::from_vectors(5, 4, &[vec![1, 2, 0, 3], vec![0, 0, 1, 4]]);
        let q = QuotientMap::new(&w);
        assert_eq!(q.dim(), 2);
        for v in w.basis_vectors() {
            assert!(q.matrix.mul_vec(&v).iter().all(|&x| x == 0));
        }
        assert_eq!(q.matrix.mul(&q.section), FpMatrix::identity(5, 2));
    }

    #[test]
    fn intersection_and_preimage() {
        let a = FpSubspace::from_vectors(3, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let b = FpSubspace::from_vectors(3, 3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(a.intersection(&b), FpSubspace::from_vectors(3, 3, &[vec![0, 1, 0]]));
        let m = FpMatrix::from_rows(3, &[vec![1, 1], vec![0, 0], vec![0, 0]]);
        let pre = FpSubspace::zero(3, 3).preimage(&m);
        assert_eq!(pre, FpSubspace::from_vectors(3, 2, &[vec![1, 2]]));
        let within = fp_complement_within(&FpSubspace::from_vectors(3, 3, &[vec![0, 1, 0]]), &a);
        assert_eq!(within.dim(), 1);
    }
}
