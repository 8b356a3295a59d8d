//! Homology of chain complexes of free `R`-modules.
//!
//! A differential `R^m -> R^n` is a pair of integer matrices `(d_1, d_2)` with
//! `d_1 = d_2 mod p`; `d_bar` is their common reduction. The kernel of a differential is
//! given a separated diagram `Q` built from adapted bases of `ker d_1` and `ker d_2`, the
//! incoming differential is rewritten as a morphism into `Q`, and the resulting separated
//! presentation of the homology is reduced to an R-diagram.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{
    check_prime, fp_complement, fp_complement_within, hnf, kernel_basis, mod_p_kernel,
    mod_p_preimage, reduce_lattice, snf, solve_in_span, unimodular_inverse, FpMatrix,
    FpSubspace, IntMatrix, Lattice, QuotientMap,
};
use crate::module::{kernel_of_map, quotient_by_lattice, ZModule};
use crate::pullback::{pullback_group, DiagramMorphism, PullbackDiagram};
use crate::reduction::{
    reduce_combined, validate_rdiagram, RDiagram, RDiagramForms, RDiagramReport,
    SeparatedPresentation,
};

/// `C^0 -> C^1 -> ... -> C^(k-1)` with `C^j = R^ranks[j]`; `diffs[j]` maps `C^j -> C^(j+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplexR {
    p: u64,
    ranks: Vec<usize>,
    diffs: Vec<(IntMatrix, IntMatrix)>,
}

impl ChainComplexR {
    /// Checks the prime and the matrix shapes; congruence and `d d = 0` are reported by
    /// [`validate_complex`].
    pub fn new(p: u64, ranks: Vec<usize>, diffs: Vec<(IntMatrix, IntMatrix)>) -> Result<Self> {
        check_prime(p)?;
        if ranks.is_empty() {
            return Err(Error::InvalidComplex("a complex needs at least one term".into()));
        }
        if diffs.len() + 1 != ranks.len() {
            return Err(Error::InvalidComplex(format!(
                "{} terms need {} differentials, got {}",
                ranks.len(),
                ranks.len() - 1,
                diffs.len()
            )));
        }
        for (k, (d1, d2)) in diffs.iter().enumerate() {
            let want = (ranks[k + 1], ranks[k]);
            if d1.shape() != want || d2.shape() != want {
                return Err(Error::DimensionMismatch(format!(
                    "differential {k} should be {}x{}, got {}x{} and {}x{}",
                    want.0,
                    want.1,
                    d1.rows(),
                    d1.cols(),
                    d2.rows(),
                    d2.cols()
                )));
            }
        }
        Ok(ChainComplexR { p, ranks, diffs })
    }

    /// Builds the complex from its differentials, inferring the ranks.
    pub fn from_differentials(p: u64, diffs: Vec<(IntMatrix, IntMatrix)>) -> Result<Self> {
        let Some(first) = diffs.first() else {
            return Err(Error::InvalidComplex(
                "ranks cannot be inferred without differentials".into(),
            ));
        };
        let mut ranks = vec![first.0.cols()];
        ranks.extend(diffs.iter().map(|d| d.0.rows()));
        Self::new(p, ranks, diffs)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn terms(&self) -> usize {
        self.ranks.len()
    }

    pub fn differentials(&self) -> &[(IntMatrix, IntMatrix)] {
        &self.diffs
    }

    /// `C^n -> C^(n+1)`, zero past the last term.
    pub fn outgoing(&self, n: usize) -> (IntMatrix, IntMatrix) {
        match self.diffs.get(n) {
            Some(d) => d.clone(),
            None => {
                let z = IntMatrix::zeros(0, self.ranks[n]);
                (z.clone(), z)
            }
        }
    }

    /// `C^(n-1) -> C^n`, zero before the first term.
    pub fn incoming(&self, n: usize) -> (IntMatrix, IntMatrix) {
        if n == 0 {
            let z = IntMatrix::zeros(self.ranks[0], 0);
            (z.clone(), z)
        } else {
            self.diffs[n - 1].clone()
        }
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n >= self.terms() {
            return Err(Error::InvalidDegree {
                degree: n,
                max: self.terms() - 1,
            });
        }
        Ok(())
    }

    fn require_valid(&self) -> Result<()> {
        let report = validate_complex(self);
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidComplex(report.to_string()))
        }
    }
}

/// One located violation in a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Index of the (first) differential involved.
    pub degree: usize,
    /// 0 for congruence, otherwise the component of the composition.
    pub component: usize,
    pub row: usize,
    pub col: usize,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComplexReport {
    pub congruence: Vec<Violation>,
    pub composition: Vec<Violation>,
}

impl ComplexReport {
    pub fn is_valid(&self) -> bool {
        self.congruence.is_empty() && self.composition.is_empty()
    }
}

impl fmt::Display for ComplexReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        let mut lines = Vec::new();
        for v in &self.congruence {
            lines.push(format!(
                "degree {}: entry ({}, {}) {}",
                v.degree, v.row, v.col, v.detail
            ));
        }
        for v in &self.composition {
            lines.push(format!(
                "degrees {}-{}: component {} entry ({}, {}) {}",
                v.degree,
                v.degree + 1,
                v.component,
                v.row,
                v.col,
                v.detail
            ));
        }
        write!(f, "{}", lines.join("; "))
    }
}

/// Congruence `d_1 = d_2 mod p` and `d d = 0`, located by degree and entry.
pub fn validate_complex(c: &ChainComplexR) -> ComplexReport {
    let mut report = ComplexReport::default();
    let p = BigInt::from(c.p);
    for (k, (d1, d2)) in c.diffs.iter().enumerate() {
        for i in 0..d1.rows() {
            for j in 0..d1.cols() {
                let diff = &d1[(i, j)] - &d2[(i, j)];
                if !(diff % &p).is_zero() {
                    report.congruence.push(Violation {
                        degree: k,
                        component: 0,
                        row: i,
                        col: j,
                        detail: format!("{} != {} mod {}", d1[(i, j)], d2[(i, j)], c.p),
                    });
                }
            }
        }
    }
    for k in 0..c.diffs.len().saturating_sub(1) {
        for comp in 1..=2 {
            let pick = |d: &(IntMatrix, IntMatrix)| if comp == 1 { d.0.clone() } else { d.1.clone() };
            let prod = &pick(&c.diffs[k + 1]) * &pick(&c.diffs[k]);
            for i in 0..prod.rows() {
                for j in 0..prod.cols() {
                    if !prod[(i, j)].is_zero() {
                        report.composition.push(Violation {
                            degree: k,
                            component: comp,
                            row: i,
                            col: j,
                            detail: format!("composition is {}", prod[(i, j)]),
                        });
                    }
                }
            }
        }
    }
    report
}

/// `{(x, y) in Z^m (+) Z^m : d_1 x = 0, d_2 y = 0, x = y mod p}`.
pub fn kernel_lattice(p: u64, d1: &IntMatrix, d2: &IntMatrix) -> Lattice {
    let m = d1.cols();
    let ker = kernel_basis(&d1.block_diag(d2));
    let diagonal = FpMatrix::identity(p, m).hstack(&FpMatrix::identity(p, m).neg());
    ker.intersection(&mod_p_kernel(&diagonal))
        .expect("same ambient")
}

/// `ker f = K (+) U` with `K = ker f ∩ ker g`; bases as matrix columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelSplit {
    pub k: IntMatrix,
    pub u: IntMatrix,
}

pub fn kernel_split(f: &IntMatrix, g: &IntMatrix) -> Result<KernelSplit> {
    if f.cols() != g.cols() {
        return Err(Error::DimensionMismatch(format!(
            "maps with domains of rank {} and {}",
            f.cols(),
            g.cols()
        )));
    }
    let b = kernel_basis(f).basis().clone();
    let h = hnf(&(g * &b));
    let adapted = &b * &h.u;
    let r = h.rank();
    Ok(KernelSplit {
        k: adapted.select_columns(r..adapted.cols()),
        u: adapted.select_columns(0..r),
    })
}

/// Adapted generators of the kernel of a differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSets {
    /// Basis of `ker d_1 ∩ ker d_2`.
    pub v12: IntMatrix,
    /// Completes `v12` to a basis of `ker d_1`.
    pub v1: IntMatrix,
    /// Completes `v12` to a basis of `ker d_2`.
    pub v2: IntMatrix,
    /// Completes the reductions of `ker d_1 + ker d_2` to a basis of `ker d_bar`.
    pub vbar: Vec<Vec<u64>>,
    /// Complement of `ker d_bar`.
    pub vbarc: Vec<Vec<u64>>,
}

pub fn generator_sets(d1: &IntMatrix, d2: &IntMatrix, p: u64) -> Result<GeneratorSets> {
    check_prime(p)?;
    let s1 = kernel_split(d1, d2)?;
    let s2 = kernel_split(d2, d1)?;
    let m = d1.cols();
    let ker_bar = FpMatrix::from_int(p, d1).kernel();
    let reductions = reduce_lattice(
        &Lattice::from_generators(m, &s1.k.hstack(&s1.u).hstack(&s2.u)),
        p,
    );
    Ok(GeneratorSets {
        v12: s1.k,
        v1: s1.u,
        v2: s2.u,
        vbar: fp_complement_within(&reductions, &ker_bar).basis_vectors(),
        vbarc: fp_complement(&ker_bar).basis_vectors(),
    })
}

/// Separated diagram `Q` of `ker(d_1, d_2)` and its embedding into `Z^m (+) Z^m`.
///
/// Generators come in four blocks of sizes `layout = [c, t, s_1, s_2]`:
/// `v12`, glued pairs, `p v1''` and `p v2''`. In `Q_1` the glued generators are the
/// vectors `x'` and the last block is `p`-torsion; in `Q_2` they are `y'` and the third
/// block is `p`-torsion. `x'` and `y'` complete `v12` to bases of the reductions
/// `I = red(ker d_1) ∩ red(ker d_2)`; `p_2` matches `y'` with `x'` modulo `p`.
#[derive(Clone, Debug)]
pub struct CanonicalKernel {
    pub diagram: PullbackDiagram,
    pub embed1: IntMatrix,
    pub embed2: IntMatrix,
    pub layout: [usize; 4],
    pub sets: GeneratorSets,
}

impl CanonicalKernel {
    /// `pullback_group(Q)` pushed into `Z^m (+) Z^m`.
    pub fn embedded_pullback(&self) -> Lattice {
        pullback_group(&self.diagram)
            .lattice()
            .image(&self.embed1.block_diag(&self.embed2))
    }

    pub fn generators(&self) -> usize {
        self.layout.iter().sum()
    }
}

/// Splits `{b : v_bar b in I}` (which contains `p Z^r`) as `W diag(1..1, p..p)`.
fn adapted_basis(v: &IntMatrix, i: &FpSubspace, p: u64) -> (IntMatrix, usize) {
    let r = v.cols();
    let x = mod_p_preimage(&FpMatrix::from_int(p, v), i);
    let f = snf(x.basis());
    let w = unimodular_inverse(&f.u);
    let t = f.diagonal().iter().filter(|d| **d == BigInt::from(1)).count();
    debug_assert_eq!(x.rank(), r);
    (&v.clone() * &w, t)
}

pub fn canonical_kernel_presentation(
    d1: &IntMatrix,
    d2: &IntMatrix,
    p: u64,
) -> Result<CanonicalKernel> {
    let sets = generator_sets(d1, d2, p)?;
    let m = d1.cols();
    let c = sets.v12.cols();
    let a_bar = FpSubspace::from_int_vectors(p, m, &sets.v12.hstack(&sets.v1).columns());
    let b_bar = FpSubspace::from_int_vectors(p, m, &sets.v12.hstack(&sets.v2).columns());
    let i = a_bar.intersection(&b_bar);
    let (v1a, t) = adapted_basis(&sets.v1, &i, p);
    let (v2a, t2) = adapted_basis(&sets.v2, &i, p);
    if t != t2 || c + t != i.dim() {
        return Err(Error::Consistency(format!(
            "glued blocks of sizes {t} and {t2} for an intersection of dimension {}",
            i.dim()
        )));
    }
    let (r1, r2) = (sets.v1.cols(), sets.v2.cols());
    let (s1, s2) = (r1 - t, r2 - t);
    let g = c + t + s1 + s2;
    let pz = BigInt::from(p);
    let x_glued = v1a.select_columns(0..t);
    let y_glued = v2a.select_columns(0..t);
    let v1_rest = v1a.select_columns(t..r1).scale(&pz);
    let v2_rest = v2a.select_columns(t..r2).scale(&pz);
    let embed1 = sets
        .v12
        .hstack(&x_glued)
        .hstack(&v1_rest)
        .hstack(&IntMatrix::zeros(m, s2));
    let embed2 = sets
        .v12
        .hstack(&y_glued)
        .hstack(&IntMatrix::zeros(m, s1))
        .hstack(&v2_rest);

    let torsion = |range: std::ops::Range<usize>| {
        let vs: Vec<Vec<BigInt>> = range
            .map(|k| {
                let mut v = vec![BigInt::zero(); g];
                v[k] = pz.clone();
                v
            })
            .collect();
        ZModule::from_relation_vectors(g, &vs)
    };
    let q1 = torsion(c + t + s1..g);
    let q2 = torsion(c + t..c + t + s1);

    // y'_j expressed in the basis (v12, x') of I modulo p
    let base = FpMatrix::from_int(p, &sets.v12.hstack(&x_glued));
    let mut p2 = FpMatrix::identity(p, g);
    for j in 0..t {
        let target = FpMatrix::from_int(p, &y_glued.select_columns([j])).column(0);
        let z = base.solve(&target).ok_or_else(|| {
            Error::Consistency("glued vector outside the common reduction".into())
        })?;
        for (row, val) in z.into_iter().enumerate() {
            p2.set(row, c + j, val);
        }
    }
    let diagram = PullbackDiagram::new(p, q1, g, q2, FpMatrix::identity(p, g), p2)?;
    if !diagram.separated() {
        return Err(Error::Consistency("kernel diagram is not separated".into()));
    }
    let ck = CanonicalKernel {
        diagram,
        embed1,
        embed2,
        layout: [c, t, s1, s2],
        sets,
    };
    if ck.embedded_pullback() != kernel_lattice(p, d1, d2) {
        return Err(Error::Consistency(
            "embedded kernel presentation differs from the kernel lattice".into(),
        ));
    }
    Ok(ck)
}

/// Express an incoming differential `R^l -> ker(d)` as a morphism from the free diagram
/// of rank `l` into `Q`.
pub fn rewrite_differential(
    prev: &(IntMatrix, IntMatrix),
    ck: &CanonicalKernel,
) -> Result<DiagramMorphism> {
    let p = ck.diagram.p();
    let (d1, d2) = prev;
    let l = d1.cols();
    let g = ck.generators();
    let pb = pullback_group(&ck.diagram);
    let basis = pb.lattice().basis();
    let embedded = &ck.embed1.block_diag(&ck.embed2) * basis;
    let mut f1_cols = Vec::with_capacity(l);
    let mut f2_cols = Vec::with_capacity(l);
    for j in 0..l {
        let mut target = d1.column(j);
        target.extend(d2.column(j));
        let coeff = solve_in_span(&embedded, &target).ok_or(Error::Expression { column: j })?;
        let pair = basis.mul_vec(&coeff);
        f1_cols.push(pair[..g].to_vec());
        f2_cols.push(pair[g..].to_vec());
    }
    let f1 = IntMatrix::from_columns(g, &f1_cols);
    let f2 = IntMatrix::from_columns(g, &f2_cols);
    let fbar = ck.diagram.p1().mul(&FpMatrix::from_int(p, &f1));
    DiagramMorphism::new(
        PullbackDiagram::free(p, l)?,
        ck.diagram.clone(),
        f1,
        fbar,
        f2,
    )
}

/// Separated presentation of `H^n` together with the kernel data it was built from.
#[derive(Clone, Debug)]
pub struct HomologyPresentation {
    pub degree: usize,
    pub kernel: CanonicalKernel,
    pub presentation: SeparatedPresentation,
}

pub fn homology_presentation(c: &ChainComplexR, n: usize) -> Result<HomologyPresentation> {
    c.check_degree(n)?;
    c.require_valid()?;
    let (d1, d2) = c.outgoing(n);
    let kernel = canonical_kernel_presentation(&d1, &d2, c.p)?;
    let map = rewrite_differential(&c.incoming(n), &kernel)?;
    Ok(HomologyPresentation {
        degree: n,
        kernel,
        presentation: SeparatedPresentation::new(map)?,
    })
}

/// `p_1 f_1(ker f_2) = 0` and `p_2 f_2(ker f_1) = 0` modulo `p`: values of the incoming
/// differential on the kernel of one component are divisible by `p` in the other.
pub fn check_divisibility(pres: &SeparatedPresentation) -> Result<()> {
    let f = pres.map();
    let s = pres.s();
    for (i, j) in [(1usize, 2usize), (2, 1)] {
        let t = f.component_kernel(j);
        let values = f.component(i) * t.basis();
        let reduced = s.structure_map(i).mul(&FpMatrix::from_int(pres.p(), &values));
        if !reduced.is_zero() {
            return Err(Error::Divisibility(format!(
                "f_{i} on ker f_{j} is not divisible by p"
            )));
        }
    }
    Ok(())
}

/// Components of the R-diagram of `H^n` read off directly from the rewritten
/// differential `f : (Z^l, F_p^l, Z^l) -> Q`:
///
/// * `K` is spanned by `w_bar`, a complement of `T_1bar + T_2bar` in `ker f_bar`,
///   where `T_i = ker f_i`;
/// * `S_bar = Q_bar / im f_bar`;
/// * `S_1 = Q_1 / (f_1(U) + f_1(T_2) + p im f_1)` with `U` lifting a complement of
///   `ker f_bar`, and symmetrically for `S_2`;
/// * `q_i` sends `w_bar` to `f_i(w)`.
#[derive(Clone, Debug)]
pub struct ClosedForm {
    pub rdiagram: RDiagram,
    pub w_sets: GeneratorSets,
}

fn closed_form_with_lifts(pres: &SeparatedPresentation, shift: bool) -> Result<RDiagram> {
    let p = pres.p();
    let f = pres.map();
    let q = pres.s();
    let l = pres.k().mbar_dim();
    let lift = |v: &FpSubspace| -> IntMatrix {
        let mut m = v.basis_matrix().lift();
        if shift {
            let ones = IntMatrix::from_columns(l, &vec![vec![BigInt::from(p); l]; m.cols()]);
            m = m.add(&ones);
        }
        m
    };
    let ker_fbar = f.fbar().kernel();
    let t: Vec<Lattice> = (1..=2).map(|i| f.component_kernel(i)).collect();
    let tbar = reduce_lattice(&t[0], p).sum(&reduce_lattice(&t[1], p));
    let w = fp_complement_within(&tbar, &ker_fbar);
    let u = lift(&fp_complement(&ker_fbar));
    let image_bar = FpSubspace::from_vectors(p, q.mbar_dim(), &f.fbar().columns());
    let pi = QuotientMap::new(&image_bar);
    let mut comps = Vec::new();
    let mut qs = Vec::new();
    for i in 1..=2 {
        let other = &t[2 - i];
        let fi = f.component(i);
        let gens = (fi * &u)
            .hstack(&(fi * other.basis()))
            .hstack(&fi.scale(&BigInt::from(p)));
        let sub = Lattice::from_generators(fi.rows(), &gens);
        comps.push(quotient_by_lattice(q.component(i), &sub));
        qs.push(fi * &lift(&w));
    }
    let s2 = comps.pop().expect("two components");
    let s1 = comps.pop().expect("two components");
    let s = PullbackDiagram::new(
        p,
        s1,
        pi.dim(),
        s2,
        pi.matrix.mul(q.p1()),
        pi.matrix.mul(q.p2()),
    )?;
    let q2 = qs.pop().expect("two components");
    let q1 = qs.pop().expect("two components");
    Ok(RDiagram {
        p,
        kdim: w.dim(),
        s,
        q1,
        q2,
    })
}

pub fn closed_form_components(c: &ChainComplexR, n: usize) -> Result<ClosedForm> {
    let hp = homology_presentation(c, n)?;
    closed_form_of(c, &hp)
}

fn closed_form_of(c: &ChainComplexR, hp: &HomologyPresentation) -> Result<ClosedForm> {
    check_divisibility(&hp.presentation)?;
    let least = closed_form_with_lifts(&hp.presentation, false)?;
    let shifted = closed_form_with_lifts(&hp.presentation, true)?;
    if least.forms() != shifted.forms() {
        return Err(Error::Consistency(format!(
            "closed form depends on the lift: {} vs {}",
            least.forms(),
            shifted.forms()
        )));
    }
    let (e1, e2) = c.incoming(hp.degree);
    Ok(ClosedForm {
        rdiagram: least,
        w_sets: generator_sets(&e1, &e2, c.p)?,
    })
}

/// End-to-end result for one degree.
#[derive(Clone, Debug)]
pub struct HomologyRDiagram {
    pub degree: usize,
    pub presentation: HomologyPresentation,
    pub rdiagram: RDiagram,
    pub report: RDiagramReport,
    pub closed_form: RDiagramForms,
}

/// Presentation, combined reduction, validation, and agreement with the closed form.
pub fn homology_rdiagram(c: &ChainComplexR, n: usize) -> Result<HomologyRDiagram> {
    let hp = homology_presentation(c, n)?;
    check_divisibility(&hp.presentation)?;
    let rdiagram = reduce_combined(&hp.presentation)?;
    let report = validate_rdiagram(&rdiagram);
    if !report.all_pass() {
        return Err(Error::Consistency(format!("invalid R-diagram: {report}")));
    }
    let closed = closed_form_of(c, &hp)?;
    let closed_form = closed.rdiagram.forms();
    if closed_form != rdiagram.forms() {
        return Err(Error::Consistency(format!(
            "closed form {} disagrees with reduction {}",
            closed_form,
            rdiagram.forms()
        )));
    }
    Ok(HomologyRDiagram {
        degree: n,
        presentation: hp,
        rdiagram,
        report,
        closed_form,
    })
}

/// `ker f_i` of an incoming differential as a lattice, for diagnostics.
pub fn component_kernels(m: &DiagramMorphism) -> [Lattice; 2] {
    [1, 2].map(|i| kernel_of_map(&m.component_map(i)).expect("checked morphism"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_zero_vec, vec_of};

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    fn lat(cols: &IntMatrix) -> Lattice {
        Lattice::from_generators(cols.rows(), cols)
    }

    /// `R --(2,0)--> R`
    fn example() -> ChainComplexR {
        ChainComplexR::new(2, vec![1, 1], vec![(m(&[vec![2]]), m(&[vec![0]]))]).unwrap()
    }

    #[test]
    fn validate_examples() {
        let zero = ChainComplexR::new(
            3,
            vec![2, 1],
            vec![(IntMatrix::zeros(1, 2), IntMatrix::zeros(1, 2))],
        )
        .unwrap();
        assert!(validate_complex(&zero).is_valid());
        let bad = ChainComplexR::new(2, vec![1, 1], vec![(m(&[vec![2]]), m(&[vec![1]]))]).unwrap();
        let r = validate_complex(&bad);
        assert_eq!(r.congruence.len(), 1);
        assert_eq!((r.congruence[0].row, r.congruence[0].col), (0, 0));
        let d = m(&[vec![1]]);
        let comp = ChainComplexR::new(2, vec![1, 1, 1], vec![(d.clone(), d.clone()), (d.clone(), d)])
            .unwrap();
        let r = validate_complex(&comp);
        assert!(r.congruence.is_empty());
        assert_eq!(r.composition.len(), 2);
        assert!(matches!(homology_rdiagram(&comp, 1), Err(Error::InvalidComplex(_))));
    }

    #[test]
    fn kernel_split_examples() {
        let s = kernel_split(&m(&[vec![1, 0]]), &m(&[vec![0, 1]])).unwrap();
        assert_eq!(s.k.cols(), 0);
        assert_eq!(lat(&s.u), Lattice::from_vectors(2, &[vec_of(&[0, 1])]));
        let s = kernel_split(&IntMatrix::zeros(1, 2), &m(&[vec![1, 0]])).unwrap();
        assert_eq!(lat(&s.k), Lattice::from_vectors(2, &[vec_of(&[0, 1])]));
        assert_eq!(lat(&s.u), Lattice::from_vectors(2, &[vec_of(&[1, 0])]));
        let f = m(&[vec![1, 2, 3]]);
        let s = kernel_split(&f, &f).unwrap();
        assert_eq!(lat(&s.k), kernel_basis(&f));
        assert_eq!(s.u.cols(), 0);
        assert!(kernel_split(&f, &m(&[vec![1]])).is_err());
    }

    #[test]
    fn generator_set_examples() {
        let g = generator_sets(&IntMatrix::zeros(1, 2), &IntMatrix::zeros(1, 2), 2).unwrap();
        assert_eq!(g.v12.cols(), 2);
        assert!(g.v1.cols() == 0 && g.v2.cols() == 0 && g.vbar.is_empty() && g.vbarc.is_empty());
        let g = generator_sets(&m(&[vec![2, 0]]), &m(&[vec![0, 2]]), 2).unwrap();
        assert_eq!(g.v12.cols(), 0);
        assert_eq!(lat(&g.v1), Lattice::from_vectors(2, &[vec_of(&[0, 1])]));
        assert_eq!(lat(&g.v2), Lattice::from_vectors(2, &[vec_of(&[1, 0])]));
        assert!(g.vbar.is_empty() && g.vbarc.is_empty());
        let id = IntMatrix::identity(2);
        let g = generator_sets(&id, &id, 3).unwrap();
        assert_eq!(g.v12.cols() + g.v1.cols() + g.v2.cols(), 0);
        assert!(g.vbar.is_empty());
        assert_eq!(g.vbarc.len(), 2);
    }

    #[test]
    fn kernel_presentation_examples() {
        let z = IntMatrix::zeros(0, 3);
        let ck = canonical_kernel_presentation(&z, &z, 5).unwrap();
        assert_eq!(ck.diagram, PullbackDiagram::free(5, 3).unwrap());

        let ck = canonical_kernel_presentation(&m(&[vec![2, 0]]), &m(&[vec![0, 2]]), 2).unwrap();
        let d = &ck.diagram;
        let z_plus_z2 = ZModule::from_relation_vectors(2, &[vec_of(&[0, 2])]);
        assert!(d.m1().isomorphic(&z_plus_z2));
        assert!(d.m2().isomorphic(&z_plus_z2));
        assert_eq!(d.mbar_dim(), 2);
        let expected = Lattice::from_vectors(4, &[vec_of(&[0, 2, 0, 0]), vec_of(&[0, 0, 2, 0])]);
        assert_eq!(ck.embedded_pullback(), expected);

        let id = IntMatrix::identity(2);
        let ck = canonical_kernel_presentation(&id, &id, 3).unwrap();
        assert_eq!(ck.generators(), 0);
    }

    #[test]
    fn kernel_presentation_with_glued_pairs() {
        // ((1,-1),(3,-1)) is in the kernel but not in the span of the naive generators
        let ck = canonical_kernel_presentation(&m(&[vec![1, 1]]), &m(&[vec![1, 3]]), 2).unwrap();
        assert_eq!(ck.layout, [0, 1, 0, 0]);
        assert!(ck.embedded_pullback().contains(&vec_of(&[1, -1, 3, -1])));
    }

    #[test]
    fn rewrite_examples() {
        let ck = canonical_kernel_presentation(&IntMatrix::zeros(0, 2), &IntMatrix::zeros(0, 2), 3)
            .unwrap();
        let zero = rewrite_differential(&(IntMatrix::zeros(2, 1), IntMatrix::zeros(2, 1)), &ck)
            .unwrap();
        assert!(zero.f1().is_zero() && zero.f2().is_zero() && zero.fbar().is_zero());
        // onto a v12 generator
        let e = m(&[vec![1], vec![0]]);
        let f = rewrite_differential(&(e.clone(), e), &ck).unwrap();
        assert_eq!(f.f1().column(0), vec_of(&[1, 0]));
        // image p * v1: p = 2, kernel of d1 = [2 0], d2 = [0 2]
        let ck = canonical_kernel_presentation(&m(&[vec![2, 0]]), &m(&[vec![0, 2]]), 2).unwrap();
        let prev = (m(&[vec![0], vec![2]]), m(&[vec![0], vec![0]]));
        let f = rewrite_differential(&prev, &ck).unwrap();
        // the first-component value is the generator 2 e_2 itself
        let gen = ck.embed1.mul_vec(&f.f1().column(0));
        assert_eq!(gen, vec_of(&[0, 2]));
        assert!(is_zero_vec(&ck.embed2.mul_vec(&f.f2().column(0))));
    }

    #[test]
    fn worked_example() {
        let c = example();
        let h = homology_rdiagram(&c, 1).unwrap();
        let f = h.rdiagram.forms();
        assert_eq!(f.kdim, 0);
        assert_eq!(f.s1.invariant_factors, vec![BigInt::from(2)]);
        assert_eq!(f.s1.free_rank, 0);
        assert_eq!(f.sbar_dim, 1);
        assert_eq!(f.s2, crate::linalg::GroupInvariants::free(1));
        let cf = closed_form_components(&c, 1).unwrap();
        assert_eq!(cf.rdiagram.forms(), f);
        // degree 0: the kernel of (2,0) is P_2 = (0,2)R, so S_1 = Z/2 and S_2 = Z
        let h0 = homology_rdiagram(&c, 0).unwrap().rdiagram.forms();
        assert_eq!(h0.s1.invariant_factors, vec![BigInt::from(2)]);
        assert_eq!(h0.s2, crate::linalg::GroupInvariants::free(1));
    }

    #[test]
    fn zero_and_exact_complexes() {
        let z = ChainComplexR::new(
            2,
            vec![0, 2],
            vec![(IntMatrix::zeros(2, 0), IntMatrix::zeros(2, 0))],
        )
        .unwrap();
        let h = homology_rdiagram(&z, 1).unwrap();
        assert_eq!(h.rdiagram.forms().s1, crate::linalg::GroupInvariants::free(2));
        assert_eq!(h.rdiagram.forms().sbar_dim, 2);
        let id = IntMatrix::identity(2);
        let e = ChainComplexR::new(3, vec![2, 2], vec![(id.clone(), id)]).unwrap();
        for n in 0..2 {
            let f = homology_rdiagram(&e, n).unwrap().rdiagram.forms();
            assert!(f.s1.is_trivial() && f.s2.is_trivial() && f.sbar_dim == 0 && f.kdim == 0);
        }
        assert!(matches!(
            homology_rdiagram(&e, 2),
            Err(Error::InvalidDegree { degree: 2, max: 1 })
        ));
    }

    #[test]
    fn torsion_in_free_part_counterexample() {
        // d^n: d1 = [2 0], d2 = [0 0]; d^(n-1): d1 = 0, d2 = (2, 0)^T, p = 2
        let c = ChainComplexR::new(
            2,
            vec![1, 2, 1],
            vec![
                (m(&[vec![0], vec![0]]), m(&[vec![2], vec![0]])),
                (m(&[vec![2, 0]]), m(&[vec![0, 0]])),
            ],
        )
        .unwrap();
        assert!(validate_complex(&c).is_valid());
        let h = homology_rdiagram(&c, 1).unwrap();
        assert!(h.report.all_pass());
    }
}
