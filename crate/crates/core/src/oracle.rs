//! Ground truth for underlying abelian groups.
//!
//! Everything here is computed from the raw matrices with the linear-algebra layer only:
//! a module is realised as a sublattice of `Z^(a+b)` modulo relations and its invariants
//! come from one Smith normal form.

use num_bigint::BigInt;

use crate::homology::ChainComplexR;
use crate::linalg::{kernel_basis, preimage_lattice, FpMatrix, IntMatrix, Lattice};
use crate::reduction::{RDiagram, SeparatedPresentation};

pub use crate::linalg::GroupInvariants;

/// `{(x, y) : p_1 x = p_2 y mod p}` for structure maps on generators.
fn pullback_lattice(p1: &FpMatrix, p2: &FpMatrix) -> Lattice {
    let p = p1.p();
    let glue = p1.lift().hstack(&p2.lift().neg());
    let modulus = Lattice::from_generators(glue.rows(), &IntMatrix::scalar(glue.rows(), p));
    preimage_lattice(&glue, &modulus).expect("shapes agree")
}

/// Invariants of `outer / inner` for lattices `inner ⊆ outer`.
fn quotient_invariants(outer: &Lattice, inner: &Lattice) -> GroupInvariants {
    let coords: Vec<Vec<BigInt>> = inner
        .basis_vectors()
        .iter()
        .map(|v| outer.coordinates(v).expect("inner lattice inside outer"))
        .collect();
    GroupInvariants::of_presentation(outer.rank(), &IntMatrix::from_columns(outer.rank(), &coords))
}

/// `S / f(K)` with `S`, `K` the pullback groups of the two diagrams.
pub fn underlying_invariants_of_presentation(pres: &SeparatedPresentation) -> GroupInvariants {
    let (k, s, f) = (pres.k(), pres.s(), pres.map());
    let s_lat = pullback_lattice(s.p1(), s.p2());
    let k_lat = pullback_lattice(k.p1(), k.p2());
    let rel = s.m1().relations().direct_sum(s.m2().relations());
    let image = k_lat.image(&f.f1().block_diag(f.f2()));
    let inner = image.sum(&rel).expect("same ambient");
    quotient_invariants(&s_lat, &inner)
}

/// `S / {(q_1 k, q_2 k)}`.
pub fn underlying_invariants_of_rdiagram(rd: &RDiagram) -> GroupInvariants {
    let s_lat = pullback_lattice(rd.s.p1(), rd.s.p2());
    let rel = rd.s.m1().relations().direct_sum(rd.s.m2().relations());
    let diagonal = rd.q1.vstack(&rd.q2);
    let image = Lattice::from_generators(diagonal.rows(), &diagonal);
    quotient_invariants(&s_lat, &image.sum(&rel).expect("same ambient"))
}

/// `R^m` as the lattice `{(x, y) : x = y mod p}` in `Z^(2m)`.
fn free_lattice(p: u64, m: usize) -> Lattice {
    let mut gens = IntMatrix::identity(m).vstack(&IntMatrix::identity(m));
    gens = gens.hstack(&IntMatrix::zeros(m, m).vstack(&IntMatrix::scalar(m, p)));
    Lattice::from_generators(2 * m, &gens)
}

/// `H^n` of the complex, computed on the integer model `C^k ⊂ Z^(2 rank)`.
pub fn homology_invariants_direct(c: &ChainComplexR, n: usize) -> GroupInvariants {
    let p = c.p();
    let m = c.ranks()[n];
    let (d1, d2) = c.outgoing(n);
    let cycles = kernel_basis(&d1.block_diag(&d2))
        .intersection(&free_lattice(p, m))
        .expect("same ambient");
    let (e1, e2) = c.incoming(n);
    let l = e1.cols();
    let boundaries = free_lattice(p, l).image(&e1.block_diag(&e2));
    quotient_invariants(&cycles, &boundaries)
}

pub fn invariants_equal(a: &GroupInvariants, b: &GroupInvariants) -> bool {
    a == b
}
