//! The subcommands, as functions from documents to documents.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use rdiagram_core::homology::{
    homology_presentation, homology_rdiagram, validate_complex, ChainComplexR, ComplexReport,
    Violation,
};
use rdiagram_core::oracle::{
    homology_invariants_direct, underlying_invariants_of_presentation,
    underlying_invariants_of_rdiagram,
};
use rdiagram_core::pullback::quotient_ring_check;
use rdiagram_core::random::{random_complex, random_prime, random_separated_presentation};
use rdiagram_core::reduction::{reduce_combined, reduce_sequential, validate_rdiagram};

use crate::input::{ComplexDocument, DifferentialDoc, Entry};
use crate::output::{
    checks_of, int_matrix, CheckDoc, DegreeDoc, InvariantsDoc, InvariantsDocument, OracleDoc,
    RDiagramDocument, StageDoc,
};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degrees {
    One(usize),
    All,
}

impl Degrees {
    fn list(self, c: &ChainComplexR) -> Result<Vec<usize>, CliError> {
        match self {
            Degrees::All => Ok((0..c.terms()).collect()),
            Degrees::One(n) if n < c.terms() => Ok(vec![n]),
            Degrees::One(n) => Err(CliError::Invalid(format!(
                "degree {n} out of range, the complex has degrees 0..={}",
                c.terms().saturating_sub(1)
            ))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ViolationDoc {
    pub degree: usize,
    pub component: usize,
    pub row: usize,
    pub col: usize,
    pub detail: String,
}

impl From<&Violation> for ViolationDoc {
    fn from(v: &Violation) -> Self {
        ViolationDoc {
            degree: v.degree,
            component: v.component,
            row: v.row,
            col: v.col,
            detail: v.detail.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ValidationDocument {
    pub p: u64,
    pub ranks: Vec<usize>,
    pub valid: bool,
    pub congruence: Vec<ViolationDoc>,
    pub composition: Vec<ViolationDoc>,
    #[serde(skip)]
    pub text: String,
}

pub fn validate(doc: &ComplexDocument) -> Result<ValidationDocument, CliError> {
    let c = doc.to_complex()?;
    let report = validate_complex(&c);
    Ok(ValidationDocument {
        p: c.p(),
        ranks: c.ranks().to_vec(),
        valid: report.is_valid(),
        congruence: report.congruence.iter().map(Into::into).collect(),
        composition: report.composition.iter().map(Into::into).collect(),
        text: render_validation(&c, &report),
    })
}

fn render_validation(c: &ChainComplexR, report: &ComplexReport) -> String {
    if report.is_valid() {
        return format!("valid: p = {}, ranks {:?}\n", c.p(), c.ranks());
    }
    let mut out = format!("invalid: p = {}, ranks {:?}\n", c.p(), c.ranks());
    for v in &report.congruence {
        out.push_str(&format!(
            "  differential {}: entry ({}, {}) {}\n",
            v.degree, v.row, v.col, v.detail
        ));
    }
    for v in &report.composition {
        out.push_str(&format!(
            "  differentials {} and {}: component {} entry ({}, {}) {}\n",
            v.degree,
            v.degree + 1,
            v.component,
            v.row,
            v.col,
            v.detail
        ));
    }
    out
}

fn valid_complex(doc: &ComplexDocument) -> Result<ChainComplexR, CliError> {
    let c = doc.to_complex()?;
    let report = validate_complex(&c);
    if !report.is_valid() {
        return Err(CliError::Invalid(render_validation(&c, &report)));
    }
    Ok(c)
}

fn p_check(p: u64, enabled: bool) -> Result<Option<bool>, CliError> {
    if !enabled {
        return Ok(None);
    }
    match quotient_ring_check(p).map_err(CliError::from_core)? {
        true => Ok(Some(true)),
        false => Err(CliError::Consistency {
            message: format!("R / P_i is not Z/{p}"),
            reproducer: format!("{{\"p\": {p}}}"),
        }),
    }
}

fn consistency(doc: &ComplexDocument, degree: usize, message: String) -> CliError {
    let dump = serde_json::json!({
        "degree": degree,
        "error": message,
        "complex": doc,
    });
    CliError::Consistency {
        message,
        reproducer: serde_json::to_string_pretty(&dump).expect("plain data"),
    }
}

/// Promotes internal errors to consistency failures carrying the input as a reproducer.
fn in_degree(doc: &ComplexDocument, degree: usize, e: rdiagram_core::Error) -> CliError {
    match CliError::from_core(e) {
        CliError::Consistency { message, .. } => consistency(doc, degree, message),
        other => other,
    }
}

pub fn rdiagram(
    doc: &ComplexDocument,
    degrees: Degrees,
    trace: bool,
    check_ring: bool,
) -> Result<RDiagramDocument, CliError> {
    let ring = p_check(doc.p, check_ring)?;
    let c = valid_complex(doc)?;
    let mut out = Vec::new();
    for n in degrees.list(&c)? {
        let h = homology_rdiagram(&c, n).map_err(|e| in_degree(doc, n, e))?;
        let homology = homology_invariants_direct(&c, n);
        let group = underlying_invariants_of_rdiagram(&h.rdiagram);
        if homology != group {
            return Err(consistency(
                doc,
                n,
                format!("R-diagram group {group} differs from homology {homology}"),
            ));
        }
        let oracle = OracleDoc {
            homology: (&homology).into(),
            rdiagram: (&group).into(),
            agree: true,
        };
        let mut block = DegreeDoc::new(n, doc.label(n), &h.rdiagram, &h.report, oracle);
        if trace {
            let (stages, _) =
                reduce_sequential(&h.presentation.presentation).map_err(|e| in_degree(doc, n, e))?;
            block.trace = Some(stages.iter().map(|(s, pres)| StageDoc::new(s, pres)).collect());
        }
        out.push(block);
    }
    Ok(RDiagramDocument {
        p: c.p(),
        p_check: ring,
        degrees: out,
    })
}

pub fn invariants(
    doc: &ComplexDocument,
    degrees: Degrees,
    check_ring: bool,
) -> Result<InvariantsDocument, CliError> {
    let ring = p_check(doc.p, check_ring)?;
    let c = valid_complex(doc)?;
    let mut out = Vec::new();
    for n in degrees.list(&c)? {
        let oracle = homology_invariants_direct(&c, n);
        let hp = homology_presentation(&c, n).map_err(|e| in_degree(doc, n, e))?;
        let rd = reduce_combined(&hp.presentation).map_err(|e| in_degree(doc, n, e))?;
        let pipeline = underlying_invariants_of_rdiagram(&rd);
        if oracle != pipeline {
            return Err(consistency(
                doc,
                n,
                format!("pipeline gives {pipeline}, oracle gives {oracle}"),
            ));
        }
        out.push(InvariantsDoc {
            degree: n,
            label: doc.label(n).map(str::to_string),
            oracle: (&oracle).into(),
            pipeline: (&pipeline).into(),
            agree: true,
        });
    }
    Ok(InvariantsDocument {
        p: c.p(),
        p_check: ring,
        degrees: out,
    })
}

/// Re-validates every R-diagram of an emitted document.
pub fn recheck(doc: &RDiagramDocument) -> Result<Vec<(usize, Vec<CheckDoc>)>, CliError> {
    doc.degrees
        .iter()
        .map(|d| {
            let rd = d.to_rdiagram()?;
            Ok((d.degree, checks_of(&validate_rdiagram(&rd))))
        })
        .collect()
}

pub fn document_of(c: &ChainComplexR) -> ComplexDocument {
    let entries = |m| {
        int_matrix(m)
            .into_iter()
            .map(|row| row.into_iter().map(Entry::Str).collect())
            .collect()
    };
    ComplexDocument {
        p: c.p(),
        differentials: c
            .differentials()
            .iter()
            .map(|(d1, d2)| DifferentialDoc {
                d1: entries(d1),
                d2: entries(d2),
            })
            .collect(),
        ranks: Some(c.ranks().to_vec()),
        labels: None,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SelftestSummary {
    pub seed: u64,
    pub complexes: usize,
    pub degrees: usize,
    pub presentations: usize,
}

/// Random complexes through the whole pipeline and random presentations through both
/// reductions, each checked against the oracle.
pub fn selftest(seed: u64, trials: usize, check_ring: bool) -> Result<SelftestSummary, CliError> {
    if check_ring {
        for p in rdiagram_core::random::PRIMES {
            p_check(p, true)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degrees = 0;
    for _ in 0..trials {
        let p = random_prime(&mut rng);
        let terms = rng.gen_range(2..=3);
        let c = random_complex(&mut rng, p, terms, 4);
        let doc = document_of(&c);
        for n in 0..c.terms() {
            degrees += 1;
            let h = homology_rdiagram(&c, n).map_err(|e| consistency(&doc, n, e.to_string()))?;
            let homology = homology_invariants_direct(&c, n);
            let group = underlying_invariants_of_rdiagram(&h.rdiagram);
            if homology != group {
                return Err(consistency(
                    &doc,
                    n,
                    format!("R-diagram group {group} differs from homology {homology}"),
                ));
            }
        }
    }
    for trial in 0..trials {
        let p = random_prime(&mut rng);
        let pres = random_separated_presentation(&mut rng, p, 5);
        let fail = |message: String| CliError::Consistency {
            message: format!("presentation trial {trial}: {message}"),
            reproducer: format!("{{\"seed\": {seed}, \"trials\": {trials}}}"),
        };
        let combined = reduce_combined(&pres).map_err(|e| fail(e.to_string()))?;
        let (_, sequential) = reduce_sequential(&pres).map_err(|e| fail(e.to_string()))?;
        if combined.forms() != sequential.forms() {
            return Err(fail(format!(
                "combined {} vs sequential {}",
                combined.forms(),
                sequential.forms()
            )));
        }
        let before = underlying_invariants_of_presentation(&pres);
        let after = underlying_invariants_of_rdiagram(&combined);
        if before != after {
            return Err(fail(format!("group {before} became {after}")));
        }
    }
    Ok(SelftestSummary {
        seed,
        complexes: trials,
        degrees,
        presentations: trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::parse_document;

    fn example() -> ComplexDocument {
        parse_document(r#"{"p": 2, "differentials": [{"d1": [["2"]], "d2": [["0"]]}]}"#).unwrap()
    }

    #[test]
    fn worked_example_degree_one() {
        let out = rdiagram(&example(), Degrees::One(1), false, false).unwrap();
        let d = &out.degrees[0];
        assert_eq!(d.k_dim, 0);
        assert_eq!((d.s1.rank, d.s1.factors.clone()), (0, vec!["2".to_string()]));
        assert_eq!(d.sbar_dim, 1);
        assert_eq!((d.s2.rank, d.s2.factors.len()), (1, 0));
        assert!(d.valid && d.oracle.agree);
    }

    #[test]
    fn degree_out_of_range() {
        let err = rdiagram(&example(), Degrees::One(2), false, false).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn document_round_trip() {
        let doc = example();
        let c = doc.to_complex().unwrap();
        let again = document_of(&c).to_complex().unwrap();
        assert_eq!(again.differentials(), c.differentials());
    }

    #[test]
    fn short_selftest() {
        let s = selftest(7, 5, true).unwrap();
        assert_eq!(s.complexes, 5);
        assert!(s.degrees >= 10);
    }
}
