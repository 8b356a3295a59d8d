//! Finitely generated abelian groups given by generators and a relation lattice.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::{preimage_lattice, GroupInvariants, IntMatrix, Lattice};

/// `Z^gens / relations`, with its invariant-factor normal form cached.
#[derive(Clone, PartialEq, Eq)]
pub struct ZModule {
    gens: usize,
    relations: Lattice,
    normal_form: GroupInvariants,
}

impl ZModule {
    pub fn new(gens: usize, relations: Lattice) -> Self {
        normalize(gens, relations)
    }

    pub fn free(gens: usize) -> Self {
        Self::new(gens, Lattice::zero(gens))
    }

    /// `(Z/k)^gens`
    pub fn elementary(gens: usize, k: u64) -> Self {
        Self::new(gens, Lattice::scaled_full(gens, k))
    }

    pub fn from_relation_vectors(gens: usize, rels: &[Vec<BigInt>]) -> Self {
        Self::new(gens, Lattice::from_vectors(gens, rels))
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &Lattice {
        &self.relations
    }

    pub fn normal_form(&self) -> &GroupInvariants {
        &self.normal_form
    }

    pub fn free_rank(&self) -> usize {
        self.normal_form.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.normal_form.invariant_factors
    }

    pub fn is_zero_module(&self) -> bool {
        self.normal_form.is_trivial()
    }

    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        self.relations.contains(v)
    }

    /// Elements are equal when their difference is a relation.
    pub fn equal_elements(&self, a: &[BigInt], b: &[BigInt]) -> bool {
        let d: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.is_zero_element(&d)
    }

    /// Isomorphic as abelian groups.
    pub fn isomorphic(&self, other: &ZModule) -> bool {
        self.normal_form == other.normal_form
    }

    /// `M (+) N` on concatenated generators.
    pub fn direct_sum(&self, other: &ZModule) -> ZModule {
        ZModule::new(
            self.gens + other.gens,
            self.relations.direct_sum(&other.relations),
        )
    }
}

impl fmt::Debug for ZModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ZModule({} gens, {} relations, {})",
            self.gens,
            self.relations.rank(),
            self.normal_form
        )
    }
}

impl fmt::Display for ZModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.normal_form)
    }
}

pub fn normalize(gens: usize, relations: Lattice) -> ZModule {
    assert_eq!(relations.ambient(), gens, "relations outside the generator space");
    let normal_form = GroupInvariants::of_presentation(gens, relations.basis());
    ZModule {
        gens,
        relations,
        normal_form,
    }
}

/// Homomorphism given by its matrix on generators (`target.gens x source.gens`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleMap {
    pub source: ZModule,
    pub target: ZModule,
    pub matrix: IntMatrix,
}

impl ModuleMap {
    /// Unchecked construction; see [`check_map`].
    pub fn new(source: ZModule, target: ZModule, matrix: IntMatrix) -> Self {
        assert_eq!(
            matrix.shape(),
            (target.gens(), source.gens()),
            "map matrix has the wrong shape"
        );
        ModuleMap {
            source,
            target,
            matrix,
        }
    }

    /// Construction that rejects ill-defined matrices.
    pub fn checked(source: ZModule, target: ZModule, matrix: IntMatrix) -> Result<Self> {
        if matrix.shape() != (target.gens(), source.gens()) {
            return Err(Error::DimensionMismatch(format!(
                "map matrix {}x{} between modules with {} and {} generators",
                matrix.rows(),
                matrix.cols(),
                source.gens(),
                target.gens()
            )));
        }
        let f = ModuleMap::new(source, target, matrix);
        if !check_map(&f) {
            return Err(Error::IllDefinedMap(
                "a relation is sent outside the target relations".into(),
            ));
        }
        Ok(f)
    }

    pub fn identity(m: &ZModule) -> Self {
        ModuleMap::new(m.clone(), m.clone(), IntMatrix::identity(m.gens()))
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(v)
    }

    /// The image as a lattice in the target generator space (including target relations).
    pub fn image_lattice(&self) -> Lattice {
        Lattice::from_generators(self.target.gens(), &self.matrix)
            .sum(self.target.relations())
            .expect("same ambient")
    }

    pub fn is_injective(&self) -> bool {
        kernel_of_map(self)
            .map(|k| k == *self.source.relations())
            .unwrap_or(false)
    }

    pub fn is_surjective(&self) -> bool {
        self.image_lattice() == Lattice::full(self.target.gens())
    }
}

/// Every relation of the source is sent into the target relations.
pub fn check_map(f: &ModuleMap) -> bool {
    f.source
        .relations()
        .basis_vectors()
        .iter()
        .all(|r| f.target.relations().contains(&f.matrix.mul_vec(r)))
}

/// `M / <relations + sub>` and the projection, which is the identity on generators.
pub fn quotient(m: &ZModule, sub: &[Vec<BigInt>]) -> (ZModule, ModuleMap) {
    let q = ZModule::new(m.gens(), m.relations().extend(sub));
    let proj = ModuleMap::new(m.clone(), q.clone(), IntMatrix::identity(m.gens()));
    (q, proj)
}

/// Quotient by a lattice of generator-space vectors.
pub fn quotient_by_lattice(m: &ZModule, sub: &Lattice) -> ZModule {
    ZModule::new(
        m.gens(),
        m.relations().sum(sub).expect("sublattice of the generator space"),
    )
}

/// Kernel of `f` as the lattice `{x : f(x) in target relations}`; it contains the
/// source relations, so the kernel submodule is this lattice modulo them.
pub fn kernel_of_map(f: &ModuleMap) -> Result<Lattice> {
    if !check_map(f) {
        return Err(Error::IllDefinedMap(
            "kernel of a map that does not respect relations".into(),
        ));
    }
    preimage_lattice(&f.matrix, f.target.relations())
}

/// `M[p] = {x : p x = 0}` as a lattice in the generator space (containing the relations).
pub fn p_torsion(m: &ZModule, p: u64) -> Lattice {
    preimage_lattice(&IntMatrix::scalar(m.gens(), p), m.relations())
        .expect("square multiplication map")
}
