//! Random instances for property tests and the self-test command.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::homology::{kernel_lattice, ChainComplexR};
use crate::linalg::{IntMatrix, Lattice};
use crate::pullback::{
    separate, separate_morphism, DiagramMorphism, LatticeRModule, RModuleMap,
};
use crate::reduction::SeparatedPresentation;

pub const PRIMES: [u64; 3] = [2, 3, 5];

pub fn random_prime<R: Rng>(rng: &mut R) -> u64 {
    *PRIMES.choose(rng).expect("nonempty")
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    IntMatrix::from_rows_with_cols(
        data.into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect(),
        cols,
    )
    .expect("rectangular")
}

/// Product of `rows x inner` and `inner x cols` random matrices, so that the rank is
/// at most `inner`.
pub fn random_low_rank<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    inner: usize,
    bound: i64,
) -> IntMatrix {
    &random_matrix(rng, rows, inner, bound) * &random_matrix(rng, inner, cols, bound)
}

/// Random unimodular matrix built from elementary operations.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            u.negate_column(0);
        }
        return u;
    }
    for _ in 0..steps {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        match rng.gen_range(0..4) {
            0 => u.swap_columns(a, b),
            1 => u.negate_column(a),
            _ => u.add_column_multiple(a, b, &BigInt::from(rng.gen_range(-2i64..=2))),
        }
    }
    u
}

/// Random relations for `Z^n`: some `p^k e_i` and an occasional random vector.
fn random_relations<R: Rng>(rng: &mut R, n: usize, p: u64) -> Lattice {
    let mut rels = Vec::new();
    for i in 0..n {
        if rng.gen_bool(0.25) {
            let mut v = vec![BigInt::from(0); n];
            v[i] = BigInt::from(p.pow(rng.gen_range(1..=2)));
            rels.push(v);
        }
    }
    if n > 0 && rng.gen_bool(0.15) {
        rels.push(random_matrix(rng, n, 1, 3).column(0));
    }
    Lattice::from_vectors(n, &rels)
}

/// An `R`-closed sublattice of `Z^a/rel1 (+) Z^b/rel2` with `a + b <= max_ambient`.
pub fn random_lattice_module<R: Rng>(
    rng: &mut R,
    p: u64,
    max_ambient: usize,
    with_relations: bool,
) -> LatticeRModule {
    let total = rng.gen_range(1..=max_ambient.max(1));
    let a = rng.gen_range(0..=total);
    let b = total - a;
    let (rel1, rel2) = if with_relations {
        (random_relations(rng, a, p), random_relations(rng, b, p))
    } else {
        (Lattice::zero(a), Lattice::zero(b))
    };
    let ngens = rng.gen_range(0..=total + 1);
    let gens = random_matrix(rng, total, ngens, 3);
    LatticeRModule::closure(p, &gens, rel1, rel2).expect("closure is R-closed")
}

/// A random `R`-linear map out of `source`: the restriction of `diag(A_1, A_2)` to the
/// source lattice, landing in the `R`-closure of its image plus some extra generators.
pub fn random_r_linear_map<R: Rng>(
    rng: &mut R,
    source: &LatticeRModule,
    max_target_ambient: usize,
) -> RModuleMap {
    let p = source.p();
    let (a, b) = source.split();
    let c = rng.gen_range(0..=max_target_ambient.min(3));
    let d = rng.gen_range(0..=max_target_ambient.saturating_sub(c).min(3));
    let a1 = random_matrix(rng, c, a, 2);
    let a2 = random_matrix(rng, d, b, 2);
    let block = a1.block_diag(&a2);
    let (srel1, srel2) = source.component_relations();
    // target relations contain the images of the source relations
    let mut trel1 = srel1.image(&a1);
    let mut trel2 = srel2.image(&a2);
    if rng.gen_bool(0.3) {
        trel1 = trel1.sum(&random_relations(rng, c, p)).expect("same ambient");
        trel2 = trel2.sum(&random_relations(rng, d, p)).expect("same ambient");
    }
    let images = &block * source.lattice().basis();
    let extra_cols = rng.gen_range(0..=1);
    let extra = random_matrix(rng, c + d, extra_cols, 2);
    let target =
        LatticeRModule::closure(p, &images.hstack(&extra), trel1, trel2).expect("R-closed");
    RModuleMap::new(source.clone(), target, images).expect("restriction of a block map")
}

/// A separated presentation obtained by separating a random `R`-linear map.
pub fn random_separated_presentation<R: Rng>(
    rng: &mut R,
    p: u64,
    max_ambient: usize,
) -> SeparatedPresentation {
    let with_relations = rng.gen_bool(0.5);
    let source = random_lattice_module(rng, p, max_ambient, with_relations);
    let g = random_r_linear_map(rng, &source, max_ambient);
    let src = separate(&g.source).expect("R-closed");
    let tgt = separate(&g.target).expect("R-closed");
    let m = separate_morphism(&g, &src, &tgt).expect("separated map");
    SeparatedPresentation::new(m).expect("separations are separated")
}

/// A random morphism of separated diagrams, from a random `R`-linear map.
pub fn random_diagram_morphism<R: Rng>(rng: &mut R, p: u64, max_ambient: usize) -> DiagramMorphism {
    random_separated_presentation(rng, p, max_ambient).map().clone()
}

/// A random chain complex of free `R`-modules `C^0 -> C^1 -> ... -> C^(terms-1)`.
///
/// The last differential is random with `d_2 = d_1 + p D`. Going down, the columns of
/// each differential are random combinations of the kernel lattice of the next one,
/// so that consecutive compositions vanish.
pub fn random_complex<R: Rng>(
    rng: &mut R,
    p: u64,
    terms: usize,
    max_rank: usize,
) -> ChainComplexR {
    let ranks: Vec<usize> = (0..terms).map(|_| rng.gen_range(1..=max_rank)).collect();
    let mut diffs: Vec<(IntMatrix, IntMatrix)> = Vec::new();
    for k in (0..terms.saturating_sub(1)).rev() {
        let (m, n) = (ranks[k], ranks[k + 1]);
        let pair = match diffs.last() {
            None => {
                let inner = rng.gen_range(0..=m.min(n));
                let d1 = random_low_rank(rng, n, m, inner, 2);
                let d2 = if rng.gen_bool(0.3) {
                    d1.clone()
                } else {
                    let noise = random_low_rank(rng, n, m, inner.max(1), 1);
                    d1.add(&noise.scale(&BigInt::from(p)))
                };
                (d1, d2)
            }
            Some((e1, e2)) => {
                let kernel = kernel_lattice(p, e1, e2);
                let coeffs = random_matrix(rng, kernel.rank(), m, 2);
                let cols = kernel.basis() * &coeffs;
                (cols.select_rows(0..n), cols.select_rows(n..2 * n))
            }
        };
        diffs.push(pair);
    }
    diffs.reverse();
    ChainComplexR::new(p, ranks, diffs).expect("consistent by construction")
}
