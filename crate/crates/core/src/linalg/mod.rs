//! Exact integer and `F_p` linear algebra.

pub mod fp;
pub mod int_matrix;
pub mod lattice;
pub mod normal_form;
mod invariants;

pub use fp::{
    check_prime, fp_complement, fp_complement_within, fp_kernel, fp_rank, fp_solve, is_prime,
    FpMatrix, FpSubspace, QuotientMap,
};
pub use int_matrix::{is_zero_vec, unit_vector, vec_of, IntMatrix};
pub use invariants::GroupInvariants;
pub use lattice::{kernel_basis, preimage_lattice, solve_in_span, Lattice};
pub use normal_form::{hnf, snf, unimodular_inverse, Hnf, Snf};

/// `lattice_intersection` as a free function.
pub fn lattice_intersection(a: &Lattice, b: &Lattice) -> crate::Result<Lattice> {
    a.intersection(b)
}

/// `{x in Z^n : m x = 0 mod p}`.
pub fn mod_p_kernel(m: &FpMatrix) -> Lattice {
    preimage_lattice(&m.lift(), &Lattice::scaled_full(m.rows(), m.p()))
        .expect("shapes agree by construction")
}

/// `{x in Z^n : (m x mod p) in v}`.
pub fn mod_p_preimage(m: &FpMatrix, v: &FpSubspace) -> Lattice {
    assert_eq!(m.rows(), v.ambient(), "subspace lives in the wrong space");
    let target = Lattice::from_generators(v.ambient(), &v.basis_matrix().lift())
        .sum(&Lattice::scaled_full(v.ambient(), m.p()))
        .expect("same ambient");
    preimage_lattice(&m.lift(), &target).expect("shapes agree by construction")
}

/// Span mod `p` of the basis of a lattice.
pub fn reduce_lattice(l: &Lattice, p: u64) -> FpSubspace {
    FpSubspace::from_int_vectors(p, l.ambient(), &l.basis_vectors())
}
