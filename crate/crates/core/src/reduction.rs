//! Separated presentations `f : K -> S` and their reduction to R-diagrams.
//!
//! A presentation is reduced by quotienting `K` by a sub-diagram `L` and `S` by `f(L)`.
//! The three elementary reductions make `K_i = K_bar`, then `f_bar = 0`, then both
//! `f_i` injective; [`reduce_combined`] performs all three with one sub-diagram.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::{
    fp_complement, mod_p_kernel, mod_p_preimage, reduce_lattice, FpMatrix, FpSubspace,
    GroupInvariants, IntMatrix, Lattice, QuotientMap,
};
use crate::module::{kernel_of_map, quotient_by_lattice, ModuleMap, ZModule};
use crate::pullback::{is_separated, DiagramMorphism, PullbackDiagram};

/// A diagram morphism `f : K -> S` between separated diagrams; it presents `coker f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatedPresentation {
    map: DiagramMorphism,
}

/// Normal forms of the four objects of a presentation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ComponentForms {
    pub k1: GroupInvariants,
    pub kbar_dim: usize,
    pub k2: GroupInvariants,
    pub s1: GroupInvariants,
    pub sbar_dim: usize,
    pub s2: GroupInvariants,
}

impl SeparatedPresentation {
    pub fn new(map: DiagramMorphism) -> Result<Self> {
        for (name, d) in [("K", map.source()), ("S", map.target())] {
            let r = is_separated(d);
            if !r.separated {
                return Err(Error::NotSeparated(format!(
                    "{name}: preseparated = {}, {} kernel witnesses",
                    r.preseparated,
                    r.witnesses.len()
                )));
            }
        }
        Ok(SeparatedPresentation { map })
    }

    /// `0 -> S`, presenting `S` itself.
    pub fn of_module(s: PullbackDiagram) -> Result<Self> {
        let zero = PullbackDiagram::free(s.p(), 0)?;
        Self::new(DiagramMorphism::zero(&zero, &s))
    }

    pub fn p(&self) -> u64 {
        self.map.source().p()
    }

    pub fn map(&self) -> &DiagramMorphism {
        &self.map
    }

    pub fn k(&self) -> &PullbackDiagram {
        self.map.source()
    }

    pub fn s(&self) -> &PullbackDiagram {
        self.map.target()
    }

    /// Structure map `q_i : K_i -> K_bar`.
    pub fn q(&self, i: usize) -> &FpMatrix {
        self.k().structure_map(i)
    }

    pub fn forms(&self) -> ComponentForms {
        let (k1, kbar_dim, k2) = self.k().shape_invariants();
        let (s1, sbar_dim, s2) = self.s().shape_invariants();
        ComponentForms {
            k1,
            kbar_dim,
            k2,
            s1,
            sbar_dim,
            s2,
        }
    }
}

/// `(L_1, L_bar, L_2)`: lattices on the generators of `K_i` and a subspace of `K_bar`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubDiagram {
    pub l1: Lattice,
    pub lbar: FpSubspace,
    pub l2: Lattice,
}

impl SubDiagram {
    pub fn zero(k: &PullbackDiagram) -> Self {
        SubDiagram {
            l1: Lattice::zero(k.m1().gens()),
            lbar: FpSubspace::zero(k.p(), k.mbar_dim()),
            l2: Lattice::zero(k.m2().gens()),
        }
    }

    pub fn component(&self, i: usize) -> &Lattice {
        match i {
            1 => &self.l1,
            2 => &self.l2,
            _ => panic!("components are indexed 1 and 2"),
        }
    }
}

/// Which hypotheses a quotient must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientMode {
    /// Both `u_i : L_i -> L_bar` onto and `f_bar` injective on `L_bar`.
    Full,
    /// `u_side` onto, `f_side(L_side) = 0` and `f_bar(L_bar) = 0`; only the other
    /// component of `S` changes.
    TargetOnly { vanishing: usize },
    /// Only `q_i(L_i) = L_bar`; separatedness of the result is still checked.
    Unchecked,
}

fn hypothesis(ok: bool, condition: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Hypothesis { condition })
    }
}

/// `K/L -> S/f(L)`, after checking the hypotheses of `mode`.
pub fn quotient_presentation(
    pres: &SeparatedPresentation,
    l: &SubDiagram,
    mode: QuotientMode,
) -> Result<SeparatedPresentation> {
    let p = pres.p();
    let (k, s, f) = (pres.k(), pres.s(), pres.map());
    // u_i(L_i) as subspaces of K_bar
    let u_images: Vec<FpSubspace> = (1..=2)
        .map(|i| reduce_lattice(l.component(i), p).image(pres.q(i)))
        .collect();
    for (i, img) in u_images.iter().enumerate() {
        let carried: &'static str = if i == 0 {
            "q_1(L_1) inside L_bar"
        } else {
            "q_2(L_2) inside L_bar"
        };
        hypothesis(l.lbar.contains_subspace(img), carried)?;
    }
    let fbar_l = l.lbar.image(f.fbar());
    match mode {
        QuotientMode::Full => {
            hypothesis(u_images[0] == l.lbar, "u_1 surjective")?;
            hypothesis(u_images[1] == l.lbar, "u_2 surjective")?;
            hypothesis(fbar_l.dim() == l.lbar.dim(), "f_bar injective on L_bar")?;
        }
        QuotientMode::TargetOnly { vanishing } => {
            let (onto, vanish): (&'static str, &'static str) = match vanishing {
                1 => ("u_1 surjective", "f_1(L_1) = 0"),
                2 => ("u_2 surjective", "f_2(L_2) = 0"),
                _ => panic!("components are indexed 1 and 2"),
            };
            hypothesis(u_images[vanishing - 1] == l.lbar, onto)?;
            let img = l.component(vanishing).image(f.component(vanishing));
            hypothesis(
                s.component(vanishing).relations().contains_lattice(&img),
                vanish,
            )?;
            hypothesis(fbar_l.dim() == 0, "f_bar(L_bar) = 0")?;
        }
        QuotientMode::Unchecked => {
            hypothesis(u_images[0] == l.lbar, "u_1 surjective")?;
            hypothesis(u_images[1] == l.lbar, "u_2 surjective")?;
        }
    }

    let pi_k = QuotientMap::new(&l.lbar);
    let pi_s = QuotientMap::new(&fbar_l);
    let k_new = PullbackDiagram::new(
        p,
        quotient_by_lattice(k.m1(), &l.l1),
        pi_k.dim(),
        quotient_by_lattice(k.m2(), &l.l2),
        pi_k.matrix.mul(k.p1()),
        pi_k.matrix.mul(k.p2()),
    )?;
    let s_new = PullbackDiagram::new(
        p,
        quotient_by_lattice(s.m1(), &l.l1.image(f.f1())),
        pi_s.dim(),
        quotient_by_lattice(s.m2(), &l.l2.image(f.f2())),
        pi_s.matrix.mul(s.p1()),
        pi_s.matrix.mul(s.p2()),
    )?;
    let fbar = pi_s.matrix.mul(f.fbar()).mul(&pi_k.section);
    let map = DiagramMorphism::new(k_new, s_new, f.f1().clone(), fbar, f.f2().clone())?;
    SeparatedPresentation::new(map).map_err(|e| match e {
        Error::NotSeparated(msg) => Error::Consistency(format!("quotient is not separated: {msg}")),
        other => other,
    })
}

/// Re-present `K` as `(F_p^d, F_p^d, F_p^d; id, id)`.
///
/// Requires each `q_i : K_i -> K_bar` to be an isomorphism.
pub fn rebase_k_to_kbar(pres: &SeparatedPresentation) -> Result<SeparatedPresentation> {
    let p = pres.p();
    let k = pres.k();
    let d = k.mbar_dim();
    let mut comps = Vec::with_capacity(2);
    for i in 1..=2 {
        let q = pres.q(i);
        hypothesis(
            &mod_p_kernel(q) == k.component(i).relations(),
            "q_i is an isomorphism",
        )?;
        let mut cols = Vec::with_capacity(d);
        for j in 0..d {
            let mut e = vec![0u64; d];
            e[j] = 1;
            let x = q.solve(&e).ok_or(Error::Hypothesis {
                condition: "q_i is an isomorphism",
            })?;
            cols.push(x);
        }
        let lifts = FpMatrix::from_columns(p, k.component(i).gens(), &cols).lift();
        comps.push(pres.map().component(i) * &lifts);
    }
    let kbar = PullbackDiagram::vector_space(p, d)?;
    let f2 = comps.pop().expect("two components");
    let f1 = comps.pop().expect("two components");
    let map = DiagramMorphism::new(kbar, pres.s().clone(), f1, pres.map().fbar().clone(), f2)?;
    SeparatedPresentation::new(map)
}

/// The separated diagram of `R^rank`.
pub fn free_presentation_stub(p: u64, rank: usize) -> Result<PullbackDiagram> {
    PullbackDiagram::free(p, rank)
}

/// Quotient by `(ker q_1, 0, ker q_2)`, returned with `K = (K_bar, K_bar, K_bar; id, id)`.
pub fn reduce_k(pres: &SeparatedPresentation) -> Result<SeparatedPresentation> {
    let k = pres.k();
    let l = SubDiagram {
        l1: k.structure_kernel(1),
        lbar: FpSubspace::zero(pres.p(), k.mbar_dim()),
        l2: k.structure_kernel(2),
    };
    rebase_k_to_kbar(&quotient_presentation(pres, &l, QuotientMode::Full)?)
}

/// Quotient by `(q_1^{-1}(L_bar), L_bar, q_2^{-1}(L_bar))` with `L_bar` a complement of
/// `ker f_bar`; afterwards `f_bar = 0`.
pub fn reduce_barf(pres: &SeparatedPresentation) -> Result<SeparatedPresentation> {
    let lbar = fp_complement(&pres.map().fbar().kernel());
    let l = SubDiagram {
        l1: mod_p_preimage(pres.q(1), &lbar),
        l2: mod_p_preimage(pres.q(2), &lbar),
        lbar,
    };
    let out = quotient_presentation(pres, &l, QuotientMode::Full)?;
    if !out.map().fbar().is_zero() {
        return Err(Error::Consistency("f_bar is nonzero after reduction".into()));
    }
    Ok(out)
}

fn mono_step(pres: &SeparatedPresentation, side: usize) -> Result<SeparatedPresentation> {
    let other = 3 - side;
    let l_side = pres.map().component_kernel(side);
    let lbar = reduce_lattice(&l_side, pres.p()).image(pres.q(side));
    let l_other = mod_p_preimage(pres.q(other), &lbar);
    let l = if side == 2 {
        SubDiagram {
            l1: l_other,
            lbar,
            l2: l_side,
        }
    } else {
        SubDiagram {
            l1: l_side,
            lbar,
            l2: l_other,
        }
    };
    quotient_presentation(pres, &l, QuotientMode::TargetOnly { vanishing: side })
}

/// Make both `f_i` injective; requires `f_bar = 0`.
pub fn reduce_monos(pres: &SeparatedPresentation) -> Result<SeparatedPresentation> {
    hypothesis(pres.map().fbar().is_zero(), "f_bar = 0")?;
    let out = mono_step(&mono_step(pres, 2)?, 1)?;
    for i in 1..=2 {
        if !out.map().component_map(i).is_injective() {
            return Err(Error::Consistency(format!(
                "f_{i} is not injective after reduction"
            )));
        }
    }
    Ok(out)
}

/// Normal-form presentation: `K = F_p^kdim` mapped into `S_i` by monomorphisms `q_i`,
/// with `p_i q_i = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RDiagram {
    pub p: u64,
    pub kdim: usize,
    pub s: PullbackDiagram,
    pub q1: IntMatrix,
    pub q2: IntMatrix,
}

impl RDiagram {
    /// Read off an R-diagram from a presentation with `K = (K_bar, K_bar, K_bar; id, id)`.
    pub fn from_presentation(pres: &SeparatedPresentation) -> Result<Self> {
        let k = pres.k();
        let d = k.mbar_dim();
        let identity_k = (1..=2).all(|i| {
            k.component(i).gens() == d
                && pres.q(i) == &FpMatrix::identity(pres.p(), d)
                && k.component(i).relations() == &Lattice::scaled_full(d, pres.p())
        });
        if !identity_k {
            return Err(Error::InvalidRDiagram(
                "K is not of the form (K_bar, K_bar, K_bar; id, id)".into(),
            ));
        }
        if !pres.map().fbar().is_zero() {
            return Err(Error::InvalidRDiagram("f_bar is nonzero".into()));
        }
        Ok(RDiagram {
            p: pres.p(),
            kdim: d,
            s: pres.s().clone(),
            q1: pres.map().f1().clone(),
            q2: pres.map().f2().clone(),
        })
    }

    pub fn q(&self, i: usize) -> &IntMatrix {
        match i {
            1 => &self.q1,
            2 => &self.q2,
            _ => panic!("components are indexed 1 and 2"),
        }
    }

    /// The R-diagram as a separated presentation `(F_p^k)^3 -> S`.
    pub fn to_presentation(&self) -> Result<SeparatedPresentation> {
        let k = PullbackDiagram::vector_space(self.p, self.kdim)?;
        let map = DiagramMorphism::new(
            k,
            self.s.clone(),
            self.q1.clone(),
            FpMatrix::zeros(self.p, self.s.mbar_dim(), self.kdim),
            self.q2.clone(),
        )?;
        SeparatedPresentation::new(map)
    }

    pub fn forms(&self) -> RDiagramForms {
        RDiagramForms {
            kdim: self.kdim,
            s1: self.s.m1().normal_form().clone(),
            sbar_dim: self.s.mbar_dim(),
            s2: self.s.m2().normal_form().clone(),
        }
    }
}

/// Normal forms of an R-diagram's components.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RDiagramForms {
    pub kdim: usize,
    pub s1: GroupInvariants,
    pub sbar_dim: usize,
    pub s2: GroupInvariants,
}

impl fmt::Display for RDiagramForms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "K = F_p^{}, S_1 = {}, S_bar = F_p^{}, S_2 = {}",
            self.kdim, self.s1, self.sbar_dim, self.s2
        )
    }
}

/// Sequential reduction, recording every stage.
pub fn reduce_sequential(
    pres: &SeparatedPresentation,
) -> Result<(Vec<(&'static str, SeparatedPresentation)>, RDiagram)> {
    let a = reduce_k(pres)?;
    let b = rebase_k_to_kbar(&reduce_barf(&a)?)?;
    let c = rebase_k_to_kbar(&reduce_monos(&b)?)?;
    let rd = RDiagram::from_presentation(&c)?;
    let stages = vec![
        ("input", pres.clone()),
        ("reduce K", a),
        ("reduce f_bar", b),
        ("reduce to monos", c),
    ];
    Ok((stages, rd))
}

/// One quotient by `(q_1^{-1}(U + T_2bar) + T_1, U + T_1bar + T_2bar, q_2^{-1}(U + T_1bar) + T_2)`
/// with `T_i = ker f_i`, `T_ibar = q_i(T_i)` and `U` a complement of `ker f_bar`.
pub fn reduce_combined(pres: &SeparatedPresentation) -> Result<RDiagram> {
    let p = pres.p();
    let f = pres.map();
    let t: Vec<Lattice> = (1..=2).map(|i| f.component_kernel(i)).collect();
    let tbar: Vec<FpSubspace> = (1..=2)
        .map(|i| reduce_lattice(&t[i - 1], p).image(pres.q(i)))
        .collect();
    let u = fp_complement(&f.fbar().kernel());
    let l = SubDiagram {
        l1: mod_p_preimage(pres.q(1), &u.sum(&tbar[1]))
            .sum(&t[0])
            .expect("same ambient"),
        lbar: u.sum(&tbar[0]).sum(&tbar[1]),
        l2: mod_p_preimage(pres.q(2), &u.sum(&tbar[0]))
            .sum(&t[1])
            .expect("same ambient"),
    };
    let reduced = quotient_presentation(pres, &l, QuotientMode::Unchecked)?;
    let rd = RDiagram::from_presentation(&rebase_k_to_kbar(&reduced)?)?;
    let report = validate_rdiagram(&rd);
    if !report.all_pass() {
        return Err(Error::Consistency(format!(
            "combined reduction produced an invalid R-diagram: {report}"
        )));
    }
    Ok(rd)
}

/// Result of one R-diagram check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RDiagramReport {
    pub checks: Vec<Check>,
}

impl RDiagramReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for RDiagramReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .checks
            .iter()
            .map(|c| format!("{}: {}", c.name, if c.pass { "ok" } else { "FAIL" }))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

fn show(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn check(name: &'static str, witnesses: Vec<String>) -> Check {
    Check {
        name,
        pass: witnesses.is_empty(),
        witnesses,
    }
}

pub const CHECK_NAMES: [&str; 8] = [
    "q_1 well defined",
    "q_2 well defined",
    "q_1 mono",
    "q_2 mono",
    "p_1 q_1 = 0",
    "p_2 q_2 = 0",
    "p_i epi",
    "ker p_i = p S_i",
];

/// Every defining condition of an R-diagram, with violating vectors.
///
/// `f_bar = 0` holds by representation: `K_bar -> S_bar` is not stored.
pub fn validate_rdiagram(rd: &RDiagram) -> RDiagramReport {
    let p = rd.p;
    let mut checks = Vec::new();
    let shape_ok = (1..=2).all(|i| rd.q(i).shape() == (rd.s.component(i).gens(), rd.kdim));
    if !shape_ok {
        return RDiagramReport {
            checks: CHECK_NAMES
                .iter()
                .map(|&name| Check {
                    name,
                    pass: false,
                    witnesses: vec!["shape mismatch".into()],
                })
                .collect(),
        };
    }
    let k = ZModule::elementary(rd.kdim, p);
    let mut well_defined = [false; 2];
    for i in 1..=2 {
        let s = rd.s.component(i);
        let w: Vec<String> = (0..rd.kdim)
            .filter_map(|j| {
                let v: Vec<BigInt> = rd.q(i).column(j).iter().map(|x| x * p).collect();
                (!s.is_zero_element(&v)).then(|| format!("p * q_{i}(e_{j}) = {}", show(&v)))
            })
            .collect();
        well_defined[i - 1] = w.is_empty();
        checks.push(check(CHECK_NAMES[i - 1], w));
    }
    for i in 1..=2 {
        let w = if well_defined[i - 1] {
            let map = ModuleMap::new(k.clone(), rd.s.component(i).clone(), rd.q(i).clone());
            let ker = kernel_of_map(&map).expect("checked above");
            ker.basis_vectors()
                .into_iter()
                .filter(|v| !k.is_zero_element(v))
                .map(|v| format!("q_{i}{} = 0", show(&v)))
                .collect()
        } else {
            vec!["q_i is not well defined".into()]
        };
        checks.push(check(CHECK_NAMES[1 + i], w));
    }
    for i in 1..=2 {
        let comp = rd.s.structure_map(i).mul(&FpMatrix::from_int(p, rd.q(i)));
        let w: Vec<String> = (0..rd.kdim)
            .filter(|&j| comp.column(j).iter().any(|&x| x != 0))
            .map(|j| format!("p_{i} q_{i}(e_{j}) != 0"))
            .collect();
        checks.push(check(CHECK_NAMES[3 + i], w));
    }
    let sep = is_separated(&rd.s);
    let epi: Vec<String> = sep
        .not_surjective
        .iter()
        .enumerate()
        .filter(|(_, &bad)| bad)
        .map(|(i, _)| format!("p_{} is not onto", i + 1))
        .collect();
    checks.push(check(CHECK_NAMES[6], epi));
    let kernels: Vec<String> = sep
        .witnesses
        .iter()
        .map(|(i, v)| format!("{} in ker p_{i} but not in p S_{i}", show(v)))
        .collect();
    checks.push(check(CHECK_NAMES[7], kernels));
    RDiagramReport { checks }
}
