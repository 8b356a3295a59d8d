//! The p-pullback ring `R = {(r1, r2) : r1 = r2 mod p}`, pullback diagrams
//! `(M_1 -> M_bar <- M_2)` and the separation of modules and morphisms.
//!
//! Over `R`, `R_1 = R_2 = Z` and `R_bar = F_p`. A pullback diagram stores the
//! two integer components as presentations and `M_bar` as an `F_p` space of a
//! given dimension; `p_1`, `p_2` are matrices over `F_p` on generators.
//! `P_1 = (p,0)R` acts on `M_1` as multiplication by `p` and kills `M_2`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{
    check_prime, mod_p_kernel, preimage_lattice, reduce_lattice, unit_vector, FpMatrix,
    FpSubspace, GroupInvariants, IntMatrix, Lattice, QuotientMap,
};
use crate::module::{kernel_of_map, ModuleMap, ZModule};

/// Element `(r1, r2)` of the p-pullback ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PprElement {
    p: u64,
    r1: BigInt,
    r2: BigInt,
}

impl PprElement {
    pub fn new(p: u64, r1: impl Into<BigInt>, r2: impl Into<BigInt>) -> Result<Self> {
        check_prime(p)?;
        let (r1, r2) = (r1.into(), r2.into());
        if crate::linalg::fp::reduce(&(&r1 - &r2), p) != 0 {
            return Err(Error::NotCongruent {
                p,
                r1: r1.to_string(),
                r2: r2.to_string(),
            });
        }
        Ok(PprElement { p, r1, r2 })
    }

    pub fn one(p: u64) -> Self {
        PprElement {
            p,
            r1: 1.into(),
            r2: 1.into(),
        }
    }

    /// `(0, p)`, generating `P_2`.
    pub fn p2_generator(p: u64) -> Self {
        PprElement {
            p,
            r1: 0.into(),
            r2: p.into(),
        }
    }

    /// `(p, 0)`, generating `P_1`.
    pub fn p1_generator(p: u64) -> Self {
        PprElement {
            p,
            r1: p.into(),
            r2: 0.into(),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn components(&self) -> (&BigInt, &BigInt) {
        (&self.r1, &self.r2)
    }

    /// The common residue `r1 mod p`.
    pub fn residue(&self) -> u64 {
        crate::linalg::fp::reduce(&self.r1, self.p)
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::MixedPrimes {
                left: self.p,
                right: other.p,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(PprElement {
            p: self.p,
            r1: &self.r1 + &other.r1,
            r2: &self.r2 + &other.r2,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(PprElement {
            p: self.p,
            r1: &self.r1 * &other.r1,
            r2: &self.r2 * &other.r2,
        })
    }

    pub fn neg(&self) -> Self {
        PprElement {
            p: self.p,
            r1: -&self.r1,
            r2: -&self.r2,
        }
    }

    /// Action on a pair `(x, y) in Z^a (+) Z^b`: `r1` on the first block, `r2` on the second.
    pub fn act(&self, a: usize, v: &[BigInt]) -> Vec<BigInt> {
        v.iter()
            .enumerate()
            .map(|(i, x)| if i < a { x * &self.r1 } else { x * &self.r2 })
            .collect()
    }
}

/// Checks that `R / (P_1 (+) P_2)` is `Z/p`, working in the basis `(1,1), (0,p)` of `R`.
pub fn quotient_ring_check(p: u64) -> Result<bool> {
    check_prime(p)?;
    let ring = Lattice::from_vectors(
        2,
        &[vec![1.into(), 1.into()], vec![0.into(), BigInt::from(p)]],
    );
    let p1 = PprElement::p1_generator(p);
    let p2 = PprElement::p2_generator(p);
    let mut ideal_coords = Vec::new();
    for g in ring.basis_vectors() {
        for gen in [&p1, &p2] {
            let v = gen.act(1, &g);
            ideal_coords.push(ring.coordinates(&v).expect("ideal inside R"));
        }
    }
    let inv = GroupInvariants::of_presentation(2, &IntMatrix::from_columns(2, &ideal_coords));
    Ok(inv.free_rank == 0 && inv.invariant_factors == vec![BigInt::from(p)])
}

/// `(M_1 -p_1-> M_bar <-p_2- M_2)` with `M_bar = F_p^mbar_dim`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PullbackDiagram {
    p: u64,
    m1: ZModule,
    m2: ZModule,
    mbar_dim: usize,
    p1: FpMatrix,
    p2: FpMatrix,
    preseparated: bool,
    separated: bool,
}

/// Outcome of [`is_separated`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeparationReport {
    pub preseparated: bool,
    pub separated: bool,
    /// `p_i` fails to be surjective.
    pub not_surjective: [bool; 2],
    /// Elements of `ker p_i` outside `p M_i`, tagged by component index (1 or 2).
    pub witnesses: Vec<(usize, Vec<BigInt>)>,
}

impl PullbackDiagram {
    pub fn new(
        p: u64,
        m1: ZModule,
        mbar_dim: usize,
        m2: ZModule,
        p1: FpMatrix,
        p2: FpMatrix,
    ) -> Result<Self> {
        check_prime(p)?;
        for (i, (m, pm)) in [(&m1, &p1), (&m2, &p2)].into_iter().enumerate() {
            if pm.p() != p || pm.shape() != (mbar_dim, m.gens()) {
                return Err(Error::DimensionMismatch(format!(
                    "p_{} is {}x{} over F_{}, expected {}x{} over F_{}",
                    i + 1,
                    pm.rows(),
                    pm.cols(),
                    pm.p(),
                    mbar_dim,
                    m.gens(),
                    p
                )));
            }
            for r in m.relations().basis_vectors() {
                if pm.apply_int(&r).iter().any(|&x| x != 0) {
                    return Err(Error::IllDefinedMap(format!(
                        "p_{} does not vanish on the relations of M_{}",
                        i + 1,
                        i + 1
                    )));
                }
            }
        }
        let mut d = PullbackDiagram {
            p,
            m1,
            m2,
            mbar_dim,
            p1,
            p2,
            preseparated: false,
            separated: false,
        };
        let report = is_separated(&d);
        d.preseparated = report.preseparated;
        d.separated = report.separated;
        Ok(d)
    }

    /// `(Z^n, F_p^n, Z^n)` with both maps the reduction mod `p`: the diagram of `R^n`.
    pub fn free(p: u64, rank: usize) -> Result<Self> {
        Self::new(
            p,
            ZModule::free(rank),
            rank,
            ZModule::free(rank),
            FpMatrix::identity(p, rank),
            FpMatrix::identity(p, rank),
        )
    }

    /// `(F_p^n, F_p^n, F_p^n; id, id)`: an `F_p` space viewed as an `R`-module.
    pub fn vector_space(p: u64, dim: usize) -> Result<Self> {
        Self::new(
            p,
            ZModule::elementary(dim, p),
            dim,
            ZModule::elementary(dim, p),
            FpMatrix::identity(p, dim),
            FpMatrix::identity(p, dim),
        )
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m1(&self) -> &ZModule {
        &self.m1
    }

    pub fn m2(&self) -> &ZModule {
        &self.m2
    }

    pub fn component(&self, i: usize) -> &ZModule {
        match i {
            1 => &self.m1,
            2 => &self.m2,
            _ => panic!("components are indexed 1 and 2"),
        }
    }

    pub fn structure_map(&self, i: usize) -> &FpMatrix {
        match i {
            1 => &self.p1,
            2 => &self.p2,
            _ => panic!("structure maps are indexed 1 and 2"),
        }
    }

    pub fn mbar_dim(&self) -> usize {
        self.mbar_dim
    }

    pub fn p1(&self) -> &FpMatrix {
        &self.p1
    }

    pub fn p2(&self) -> &FpMatrix {
        &self.p2
    }

    pub fn preseparated(&self) -> bool {
        self.preseparated
    }

    pub fn separated(&self) -> bool {
        self.separated
    }

    /// Normal forms `(M_1, M_2)` and `dim M_bar`.
    pub fn shape_invariants(&self) -> (GroupInvariants, usize, GroupInvariants) {
        (
            self.m1.normal_form().clone(),
            self.mbar_dim,
            self.m2.normal_form().clone(),
        )
    }

    /// `ker p_i` as a lattice on the generators of `M_i`.
    pub fn structure_kernel(&self, i: usize) -> Lattice {
        mod_p_kernel(self.structure_map(i))
    }

    /// `[p_1 | -p_2]`, whose kernel mod `p` is the pullback.
    fn gluing_matrix(&self) -> FpMatrix {
        self.p1.hstack(&self.p2.neg())
    }

    /// `Rel_1 (+) Rel_2` in `Z^(a+b)`.
    pub fn relation_lattice(&self) -> Lattice {
        self.m1.relations().direct_sum(self.m2.relations())
    }
}

/// Preseparated: both `p_i` onto. Separated: additionally `ker p_i = p M_i`.
pub fn is_separated(d: &PullbackDiagram) -> SeparationReport {
    let mut not_surjective = [false; 2];
    let mut witnesses = Vec::new();
    for i in 1..=2 {
        let pm = d.structure_map(i);
        not_surjective[i - 1] = pm.rank() != d.mbar_dim;
        let m = d.component(i);
        let ker = d.structure_kernel(i);
        let pm_lattice = Lattice::scaled_full(m.gens(), d.p)
            .sum(m.relations())
            .expect("same ambient");
        if ker != pm_lattice {
            witnesses.extend(
                ker.basis_vectors()
                    .into_iter()
                    .filter(|v| !pm_lattice.contains(v))
                    .map(|v| (i, v)),
            );
        }
    }
    let preseparated = !not_surjective[0] && !not_surjective[1];
    SeparationReport {
        preseparated,
        separated: preseparated && witnesses.is_empty(),
        not_surjective,
        witnesses,
    }
}

/// An `R`-submodule of `T_1 (+) T_2`, where `T_1 = Z^a / rel1` and `T_2 = Z^b / rel2`.
///
/// The stored lattice contains `rel1 (+) rel2`; the module is the quotient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticeRModule {
    p: u64,
    a: usize,
    b: usize,
    lattice: Lattice,
    rel1: Lattice,
    rel2: Lattice,
}

impl LatticeRModule {
    pub fn new(p: u64, a: usize, b: usize, generators: &IntMatrix) -> Result<Self> {
        Self::with_relations(p, generators, Lattice::zero(a), Lattice::zero(b))
    }

    /// Submodule generated by the columns of `generators` inside `Z^a/rel1 (+) Z^b/rel2`.
    pub fn with_relations(
        p: u64,
        generators: &IntMatrix,
        rel1: Lattice,
        rel2: Lattice,
    ) -> Result<Self> {
        check_prime(p)?;
        let (a, b) = (rel1.ambient(), rel2.ambient());
        if generators.rows() != a + b {
            return Err(Error::DimensionMismatch(format!(
                "generators have {} rows, ambient rank is {}",
                generators.rows(),
                a + b
            )));
        }
        let rel = rel1.direct_sum(&rel2);
        let lattice = Lattice::from_generators(a + b, generators)
            .sum(&rel)
            .expect("same ambient");
        let m = LatticeRModule {
            p,
            a,
            b,
            lattice,
            rel1,
            rel2,
        };
        let p2 = PprElement::p2_generator(p);
        for v in m.lattice.basis_vectors() {
            if !m.lattice.contains(&p2.act(a, &v)) {
                return Err(Error::NotRClosed(format!(
                    "(0,{p}) times a generator leaves the lattice"
                )));
            }
        }
        Ok(m)
    }

    /// Smallest `R`-closed lattice containing the given vectors.
    pub fn closure(
        p: u64,
        generators: &IntMatrix,
        rel1: Lattice,
        rel2: Lattice,
    ) -> Result<Self> {
        let a = rel1.ambient();
        let p2 = PprElement::p2_generator(p);
        let mut cols = generators.columns();
        let extra: Vec<Vec<BigInt>> = cols.iter().map(|v| p2.act(a, v)).collect();
        cols.extend(extra);
        let all = IntMatrix::from_columns(generators.rows(), &cols);
        Self::with_relations(p, &all, rel1, rel2)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn split(&self) -> (usize, usize) {
        (self.a, self.b)
    }

    pub fn ambient(&self) -> usize {
        self.a + self.b
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn relations(&self) -> Lattice {
        self.rel1.direct_sum(&self.rel2)
    }

    pub fn component_relations(&self) -> (&Lattice, &Lattice) {
        (&self.rel1, &self.rel2)
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn act(&self, r: &PprElement, v: &[BigInt]) -> Vec<BigInt> {
        r.act(self.a, v)
    }

    /// Underlying abelian group of `lattice / relations`.
    pub fn group_invariants(&self) -> GroupInvariants {
        let coords: Vec<Vec<BigInt>> = self
            .relations()
            .basis_vectors()
            .iter()
            .map(|r| self.lattice.coordinates(r).expect("relations lie in the lattice"))
            .collect();
        GroupInvariants::of_presentation(
            self.rank(),
            &IntMatrix::from_columns(self.rank(), &coords),
        )
    }

    /// Change ambient coordinates by a block-diagonal matrix `diag(u1, u2)`.
    pub fn transform(&self, u1: &IntMatrix, u2: &IntMatrix) -> Result<Self> {
        let block = u1.block_diag(u2);
        let gens = &block * self.lattice.basis();
        Self::with_relations(self.p, &gens, self.rel1.image(u1), self.rel2.image(u2))
    }
}

/// The pullback `{(m1, m2) : p_1 m1 = p_2 m2}` as a lattice module in `Z^(a+b)`.
pub fn pullback_group(d: &PullbackDiagram) -> LatticeRModule {
    let lattice = mod_p_kernel(&d.gluing_matrix());
    LatticeRModule::with_relations(
        d.p,
        lattice.basis(),
        d.m1.relations().clone(),
        d.m2.relations().clone(),
    )
    .expect("a pullback of R_i-linear maps is R-closed")
}

/// The separated diagram of a lattice module together with the data needed to move
/// elements between the module and its diagram.
///
/// Both components are presented on the lattice basis `s_1..s_k` of the module:
/// `M_1 = S / P_2 S` and `M_2 = S / P_1 S`. `M_bar` is `S / (P_1 S + P_2 S)` in the
/// coordinates of a [`QuotientMap`], and both `p_i` are that quotient map.
#[derive(Clone, Debug)]
pub struct Separation {
    pub module: LatticeRModule,
    pub diagram: PullbackDiagram,
    quotient: QuotientMap,
}

impl Separation {
    /// Coordinates of a module element in the lattice basis.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        self.module.lattice.coordinates(v)
    }

    /// Image of `s` in `M_1 (+) M_2`.
    pub fn embed(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = self.coordinates(v)?;
        let mut out = c.clone();
        out.extend(c);
        Some(out)
    }

    /// The image of the module in `Z^k (+) Z^k`, plus the diagram relations.
    pub fn embedded_lattice(&self) -> Lattice {
        let images: Vec<Vec<BigInt>> = self
            .module
            .lattice
            .basis_vectors()
            .iter()
            .map(|v| self.embed(v).expect("basis vector"))
            .collect();
        let k = self.module.rank();
        Lattice::from_vectors(2 * k, &images)
            .sum(&self.diagram.relation_lattice())
            .expect("same ambient")
    }

    /// Quotient map onto `M_bar` on the generators.
    pub fn quotient_map(&self) -> &QuotientMap {
        &self.quotient
    }
}

/// Separated diagram of an `R`-closed lattice module.
pub fn separate(s: &LatticeRModule) -> Result<Separation> {
    let p = s.p;
    let k = s.rank();
    let p1 = PprElement::p1_generator(p);
    let p2 = PprElement::p2_generator(p);
    let mut p1s = Vec::new();
    let mut p2s = Vec::new();
    for v in s.lattice.basis_vectors() {
        let a1 = s.lattice.coordinates(&s.act(&p1, &v));
        let a2 = s.lattice.coordinates(&s.act(&p2, &v));
        match (a1, a2) {
            (Some(a1), Some(a2)) => {
                p1s.push(a1);
                p2s.push(a2);
            }
            _ => return Err(Error::NotRClosed("P_i S is not inside S".into())),
        }
    }
    let rel: Vec<Vec<BigInt>> = s
        .relations()
        .basis_vectors()
        .iter()
        .map(|r| s.lattice.coordinates(r).expect("relations lie in the lattice"))
        .collect();

    let rel_lat = Lattice::from_vectors(k, &rel);
    let m1 = ZModule::new(k, rel_lat.extend(&p2s));
    let m2 = ZModule::new(k, rel_lat.extend(&p1s));
    let mut all = rel.clone();
    all.extend(p1s);
    all.extend(p2s);
    let w = FpSubspace::from_int_vectors(p, k, &all);
    let quotient = QuotientMap::new(&w);
    let diagram = PullbackDiagram::new(
        p,
        m1,
        quotient.dim(),
        m2,
        quotient.matrix.clone(),
        quotient.matrix.clone(),
    )?;
    if !diagram.separated() {
        return Err(Error::Consistency(
            "separation of a lattice module is not separated".into(),
        ));
    }
    Ok(Separation {
        module: s.clone(),
        diagram,
        quotient,
    })
}

/// `R`-linear map between lattice modules, given by the images of the source basis
/// vectors written in the target's ambient coordinates.
#[derive(Clone, Debug)]
pub struct RModuleMap {
    pub source: LatticeRModule,
    pub target: LatticeRModule,
    pub images: IntMatrix,
}

impl RModuleMap {
    pub fn new(source: LatticeRModule, target: LatticeRModule, images: IntMatrix) -> Result<Self> {
        if images.shape() != (target.ambient(), source.rank()) {
            return Err(Error::DimensionMismatch(format!(
                "images form a {}x{} matrix, expected {}x{}",
                images.rows(),
                images.cols(),
                target.ambient(),
                source.rank()
            )));
        }
        let map = RModuleMap {
            source,
            target,
            images,
        };
        map.check()?;
        Ok(map)
    }

    /// Image of a source element.
    pub fn apply(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = self.source.lattice.coordinates(v)?;
        Some(self.images.mul_vec(&c))
    }

    fn check(&self) -> Result<()> {
        let t_rel = self.target.relations();
        for img in self.images.columns() {
            if !self.target.lattice.contains(&img) {
                return Err(Error::NotRLinear("an image lies outside the target".into()));
            }
        }
        for r in self.source.relations().basis_vectors() {
            let img = self.apply(&r).expect("relation in lattice");
            if !t_rel.contains(&img) {
                return Err(Error::NotRLinear("a relation maps to a nonzero element".into()));
            }
        }
        let p2 = PprElement::p2_generator(self.source.p);
        for (j, v) in self.source.lattice.basis_vectors().iter().enumerate() {
            let lhs = self.apply(&self.source.act(&p2, v)).expect("R-closed source");
            let rhs = self.target.act(&p2, &self.images.column(j));
            let diff: Vec<BigInt> = lhs.iter().zip(&rhs).map(|(x, y)| x - y).collect();
            if !t_rel.contains(&diff) {
                return Err(Error::NotRLinear(format!(
                    "map does not commute with (0,p) on generator {j}"
                )));
            }
        }
        Ok(())
    }
}

/// Morphism of pullback diagrams `(f_1, f_bar, f_2)` with commuting squares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramMorphism {
    source: PullbackDiagram,
    target: PullbackDiagram,
    f1: IntMatrix,
    fbar: FpMatrix,
    f2: IntMatrix,
}

impl DiagramMorphism {
    pub fn new(
        source: PullbackDiagram,
        target: PullbackDiagram,
        f1: IntMatrix,
        fbar: FpMatrix,
        f2: IntMatrix,
    ) -> Result<Self> {
        if source.p != target.p || fbar.p() != source.p {
            return Err(Error::MixedPrimes {
                left: source.p,
                right: target.p,
            });
        }
        if f1.shape() != (target.m1.gens(), source.m1.gens())
            || f2.shape() != (target.m2.gens(), source.m2.gens())
            || fbar.shape() != (target.mbar_dim, source.mbar_dim)
        {
            return Err(Error::DimensionMismatch(
                "morphism components do not match the diagrams".into(),
            ));
        }
        let m = DiagramMorphism {
            source,
            target,
            f1,
            fbar,
            f2,
        };
        for i in 1..=2 {
            if !crate::module::check_map(&m.component_map(i)) {
                return Err(Error::IllDefinedMap(format!("f_{i} does not respect relations")));
            }
            let lhs = m.target.structure_map(i).mul(&FpMatrix::from_int(m.source.p, m.component(i)));
            let rhs = m.fbar.mul(m.source.structure_map(i));
            if lhs != rhs {
                return Err(Error::NotCommuting(format!("square {i}")));
            }
        }
        Ok(m)
    }

    pub fn identity(d: &PullbackDiagram) -> Self {
        DiagramMorphism {
            source: d.clone(),
            target: d.clone(),
            f1: IntMatrix::identity(d.m1.gens()),
            fbar: FpMatrix::identity(d.p, d.mbar_dim),
            f2: IntMatrix::identity(d.m2.gens()),
        }
    }

    pub fn zero(source: &PullbackDiagram, target: &PullbackDiagram) -> Self {
        DiagramMorphism {
            source: source.clone(),
            target: target.clone(),
            f1: IntMatrix::zeros(target.m1.gens(), source.m1.gens()),
            fbar: FpMatrix::zeros(source.p, target.mbar_dim, source.mbar_dim),
            f2: IntMatrix::zeros(target.m2.gens(), source.m2.gens()),
        }
    }

    pub fn source(&self) -> &PullbackDiagram {
        &self.source
    }

    pub fn target(&self) -> &PullbackDiagram {
        &self.target
    }

    pub fn f1(&self) -> &IntMatrix {
        &self.f1
    }

    pub fn f2(&self) -> &IntMatrix {
        &self.f2
    }

    pub fn fbar(&self) -> &FpMatrix {
        &self.fbar
    }

    pub fn component(&self, i: usize) -> &IntMatrix {
        match i {
            1 => &self.f1,
            2 => &self.f2,
            _ => panic!("components are indexed 1 and 2"),
        }
    }

    pub fn component_map(&self, i: usize) -> ModuleMap {
        ModuleMap::new(
            self.source.component(i).clone(),
            self.target.component(i).clone(),
            self.component(i).clone(),
        )
    }

    /// `ker f_i` as a lattice on the source generators (contains the source relations).
    pub fn component_kernel(&self, i: usize) -> Lattice {
        kernel_of_map(&self.component_map(i)).expect("checked on construction")
    }

    /// `f_1 (+) f_2` as a block matrix.
    pub fn block(&self) -> IntMatrix {
        self.f1.block_diag(&self.f2)
    }
}

/// Separate an `R`-linear map between lattice modules into `(f_1, f_bar, f_2)`.
pub fn separate_morphism(
    g: &RModuleMap,
    src: &Separation,
    tgt: &Separation,
) -> Result<DiagramMorphism> {
    if src.module != g.source || tgt.module != g.target {
        return Err(Error::DimensionMismatch(
            "separations do not belong to the map's source and target".into(),
        ));
    }
    let p = g.source.p;
    let k_src = g.source.rank();
    let k_tgt = g.target.rank();
    let coords_of = |v: &[BigInt]| -> Result<Vec<BigInt>> {
        tgt.coordinates(v)
            .ok_or_else(|| Error::NotRLinear("image outside target".into()))
    };
    let mut cols = Vec::with_capacity(k_src);
    for img in g.images.columns() {
        cols.push(coords_of(&img)?);
    }
    let f = IntMatrix::from_columns(k_tgt, &cols);

    // Alternative lifts s + (0,p)s of the same element of S/P_2S (and s + (p,0)s for
    // S/P_1S) must have the same image in the corresponding target component.
    for (gen, m) in [
        (PprElement::p2_generator(p), tgt.diagram.m1()),
        (PprElement::p1_generator(p), tgt.diagram.m2()),
    ] {
        for (j, v) in g.source.lattice.basis_vectors().iter().enumerate() {
            let shifted = g.apply(&g.source.act(&gen, v)).expect("R-closed");
            let alt: Vec<BigInt> = cols[j]
                .iter()
                .zip(coords_of(&shifted)?)
                .map(|(x, y)| x + y)
                .collect();
            if !m.equal_elements(&alt, &cols[j]) {
                return Err(Error::Consistency(
                    "component map depends on the chosen lift".into(),
                ));
            }
        }
    }

    // f_bar on the quotient basis of the source: e_k -> section -> f -> quotient.
    let fmod = FpMatrix::from_int(p, &f);
    let fbar = tgt
        .quotient
        .matrix
        .mul(&fmod)
        .mul(&src.quotient.section);
    DiagramMorphism::new(src.diagram.clone(), tgt.diagram.clone(), f.clone(), fbar, f)
}

/// Basis-coordinate form of a sublattice: coordinates of each basis vector of `sub`
/// with respect to the basis of `outer`.
fn coordinate_lattice(outer: &Lattice, sub: &Lattice) -> Lattice {
    let coords: Vec<Vec<BigInt>> = sub
        .basis_vectors()
        .iter()
        .map(|v| outer.coordinates(v).expect("sublattice"))
        .collect();
    Lattice::from_vectors(outer.rank(), &coords)
}

/// Monomorphism test via `mu : ker f_1 (+) ker f_2 -> M_bar`, `mu(m1, m2) = p_1 m1 - p_2 m2`.
pub fn is_mono(m: &DiagramMorphism) -> bool {
    let k = m.component_kernel(1).direct_sum(&m.component_kernel(2));
    let mu = m.source.gluing_matrix().mul(&FpMatrix::from_int(m.source.p, k.basis()));
    let ker_mu = mod_p_kernel(&mu);
    let zero = coordinate_lattice(&k, &m.source.relation_lattice());
    zero.contains_lattice(&ker_mu)
}

/// Monomorphism test on pullback groups directly: `f` restricted to
/// `pullback_group(source)` has kernel equal to the source relations.
pub fn is_mono_direct(m: &DiagramMorphism) -> bool {
    let pb = mod_p_kernel(&m.source.gluing_matrix());
    let on_pullback = &m.block() * pb.basis();
    let ker = preimage_lattice(&on_pullback, &m.target.relation_lattice())
        .expect("shapes agree");
    let zero = coordinate_lattice(&pb, &m.source.relation_lattice());
    ker == zero
}

/// The two conditions characterising monomorphisms through the structure maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonoConditions {
    /// `ker f_i` meets `ker p_i` only in zero, for `i = 1, 2`.
    pub kernels_meet_trivially: [bool; 2],
    /// `p_1(ker f_1)` and `p_2(ker f_2)` intersect in zero.
    pub images_disjoint: bool,
}

impl MonoConditions {
    pub fn all(&self) -> bool {
        self.kernels_meet_trivially[0] && self.kernels_meet_trivially[1] && self.images_disjoint
    }
}

pub fn mono_conditions(m: &DiagramMorphism) -> MonoConditions {
    let mut kernels_meet_trivially = [false; 2];
    let mut images = Vec::new();
    for i in 1..=2 {
        let kf = m.component_kernel(i);
        let kp = m.source.structure_kernel(i);
        let meet = kf.intersection(&kp).expect("same ambient");
        kernels_meet_trivially[i - 1] = m.source.component(i).relations().contains_lattice(&meet);
        images.push(reduce_lattice(&kf, m.source.p).image(m.source.structure_map(i)));
    }
    MonoConditions {
        kernels_meet_trivially,
        images_disjoint: images[0].intersection(&images[1]).dim() == 0,
    }
}

/// Sufficient conditions for surjectivity together with the ground truth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EpiConditions {
    /// `f_1`, `f_2` onto and some `c_i : ker f_i -> ker f_bar` onto.
    pub cond1: bool,
    /// `f_1` onto and `M_2 -> M_bar x_{N_bar} N_2` onto.
    pub cond2: bool,
    /// `f_2` onto and `M_1 -> M_bar x_{N_bar} N_1` onto.
    pub cond3: bool,
    /// `f_bar` onto and both `M_i -> M_bar x_{N_bar} N_i` onto.
    pub cond4: bool,
    /// Surjectivity computed on the pullback groups.
    pub direct: bool,
}

impl EpiConditions {
    pub fn any_condition(&self) -> bool {
        self.cond1 || self.cond2 || self.cond3 || self.cond4
    }
}

/// Is `M_i -> M_bar x_{N_bar} N_i`, `m -> (p_i m, f_i m)`, onto?
fn onto_partial_pullback(m: &DiagramMorphism, i: usize) -> bool {
    let p = m.source.p;
    let d = m.source.mbar_dim;
    let n = m.target.component(i);
    let glue = m.fbar.hstack(&m.target.structure_map(i).neg());
    let rel = Lattice::scaled_full(d, p).direct_sum(n.relations());
    let pb = mod_p_kernel(&glue).sum(&rel).expect("same ambient");
    let images = m.source.structure_map(i).lift().vstack(m.component(i));
    let img = Lattice::from_generators(d + n.gens(), &images)
        .sum(&rel)
        .expect("same ambient");
    img == pb
}

pub fn epi_conditions(m: &DiagramMorphism) -> EpiConditions {
    let p = m.source.p;
    let onto = |i: usize| m.component_map(i).is_surjective();
    let f_onto = [onto(1), onto(2)];
    let ker_fbar = m.fbar.kernel();
    let c_onto = |i: usize| {
        let img = reduce_lattice(&m.component_kernel(i), p).image(m.source.structure_map(i));
        img == ker_fbar
    };
    let fbar_onto = m.fbar.rank() == m.target.mbar_dim;
    let cond1 = f_onto[0] && f_onto[1] && (c_onto(1) || c_onto(2));
    let cond2 = f_onto[0] && onto_partial_pullback(m, 2);
    let cond3 = f_onto[1] && onto_partial_pullback(m, 1);
    let cond4 = fbar_onto && onto_partial_pullback(m, 1) && onto_partial_pullback(m, 2);

    let src_pb = mod_p_kernel(&m.source.gluing_matrix());
    let tgt_pb = mod_p_kernel(&m.target.gluing_matrix());
    let image = src_pb
        .image(&m.block())
        .sum(&m.target.relation_lattice())
        .expect("same ambient");
    EpiConditions {
        cond1,
        cond2,
        cond3,
        cond4,
        direct: image == tgt_pb,
    }
}

/// Helper for tests and callers: is the element `v` of `Z^(a+b)` in the pullback group?
pub fn in_pullback(d: &PullbackDiagram, v: &[BigInt]) -> bool {
    d.gluing_matrix().apply_int(v).iter().all(|&x| x == 0)
}

/// The `i`-th standard generator of the diagram's first component, paired with zero.
pub fn first_component_generator(d: &PullbackDiagram, i: usize) -> Vec<BigInt> {
    let mut v = unit_vector(d.m1.gens(), i);
    v.extend(std::iter::repeat_n(BigInt::zero(), d.m2.gens()));
    v
}
