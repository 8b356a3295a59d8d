use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::int_matrix::{unit_vector, IntMatrix};
use super::normal_form::hnf;
use crate::error::{Error, Result};

/// A subgroup of `Z^n`, stored by its canonical column Hermite basis.
///
/// Equality of lattices is equality of the stored bases.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Lattice {
    ambient: usize,
    basis: IntMatrix,
}

impl Lattice {
    /// Lattice spanned by the columns of `gens` (which must have `ambient` rows).
    pub fn from_generators(ambient: usize, gens: &IntMatrix) -> Self {
        assert_eq!(gens.rows(), ambient, "generators live in the wrong ambient");
        let f = hnf(gens);
        Lattice {
            ambient,
            basis: f.basis(),
        }
    }

    pub fn from_vectors(ambient: usize, vectors: &[Vec<BigInt>]) -> Self {
        Self::from_generators(ambient, &IntMatrix::from_columns(ambient, vectors))
    }

    pub fn zero(ambient: usize) -> Self {
        Lattice {
            ambient,
            basis: IntMatrix::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Lattice {
            ambient,
            basis: IntMatrix::identity(ambient),
        }
    }

    /// `k * Z^n`
    pub fn scaled_full(ambient: usize, k: u64) -> Self {
        Self::from_generators(ambient, &IntMatrix::scalar(ambient, k))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<BigInt>> {
        self.basis.columns()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    fn check_ambient(&self, other: &Lattice) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient);
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        let mut row = 0;
        for k in 0..self.rank() {
            while self.basis[(row, k)].is_zero() {
                if !rest[row].is_zero() {
                    return None;
                }
                row += 1;
            }
            let (q, r) = rest[row].div_rem(&self.basis[(row, k)]);
            if !r.is_zero() {
                return None;
            }
            for i in row..self.ambient {
                let b = &self.basis[(i, k)];
                if !b.is_zero() {
                    rest[i] -= b * &q;
                }
            }
            coords.push(q);
            row += 1;
        }
        if rest.iter().all(Zero::is_zero) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        self.ambient == other.ambient && other.basis.columns().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        self.check_ambient(other)?;
        Ok(Self::from_generators(
            self.ambient,
            &self.basis.hstack(&other.basis),
        ))
    }

    /// Add extra generators.
    pub fn extend(&self, vectors: &[Vec<BigInt>]) -> Lattice {
        let extra = IntMatrix::from_columns(self.ambient, vectors);
        Self::from_generators(self.ambient, &self.basis.hstack(&extra))
    }

    pub fn intersection(&self, other: &Lattice) -> Result<Lattice> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Lattice::zero(self.ambient));
        }
        // x = A u = B w  <=>  [A | -B] (u, w) = 0
        let stacked = self.basis.hstack(&other.basis.neg());
        let ker = hnf(&stacked).kernel();
        let u = ker.select_rows(0..self.rank());
        Ok(Self::from_generators(self.ambient, &(&self.basis * &u)))
    }

    /// Image of the lattice under `m`.
    pub fn image(&self, m: &IntMatrix) -> Lattice {
        assert_eq!(m.cols(), self.ambient);
        Self::from_generators(m.rows(), &(m * &self.basis))
    }

    /// `L_1 (+) L_2` inside `Z^(a+b)`.
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        Self::from_generators(
            self.ambient + other.ambient,
            &self.basis.block_diag(&other.basis),
        )
    }

    /// The quotient `Z^n / L` has no torsion.
    pub fn is_saturated(&self) -> bool {
        let d = super::normal_form::snf(&self.basis);
        d.diagonal().iter().all(|x| x == &BigInt::from(1))
    }
}

/// `{x : m x = 0}`, always saturated.
pub fn kernel_basis(m: &IntMatrix) -> Lattice {
    let f = hnf(m);
    Lattice::from_generators(m.cols(), &f.kernel())
}

/// `{x : m x in target}`.
pub fn preimage_lattice(m: &IntMatrix, target: &Lattice) -> Result<Lattice> {
    if target.ambient() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "preimage of a lattice in Z^{} under a {}x{} matrix",
            target.ambient(),
            m.rows(),
            m.cols()
        )));
    }
    let stacked = m.hstack(&target.basis().neg());
    let ker = hnf(&stacked).kernel();
    let x = ker.select_rows(0..m.cols());
    Ok(Lattice::from_generators(m.cols(), &x))
}

/// Some `x` with `m x = b`, or `None` when `b` is outside the column span.
pub fn solve_in_span(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), m.rows(), "right-hand side has wrong length");
    let f = hnf(m);
    let basis = Lattice {
        ambient: m.rows(),
        basis: f.basis(),
    };
    let y = basis.coordinates(b)?;
    let u = f.u.select_columns(0..f.rank());
    Some(u.mul_vec(&y))
}

/// Standard basis of `Z^n` as vectors.
pub fn standard_basis(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| unit_vector(n, i)).collect()
}
