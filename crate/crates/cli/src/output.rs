//! Output documents for R-diagrams and invariants, in JSON and text.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use rdiagram_core::linalg::{FpMatrix, GroupInvariants, IntMatrix, Lattice};
use rdiagram_core::module::ZModule;
use rdiagram_core::pullback::PullbackDiagram;
use rdiagram_core::reduction::{RDiagram, RDiagramReport, SeparatedPresentation};

use crate::CliError;

pub type Matrix = Vec<Vec<String>>;

pub fn int_matrix(m: &IntMatrix) -> Matrix {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.to_string()).collect())
        .collect()
}

pub fn fp_matrix(m: &FpMatrix) -> Matrix {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

fn parse_rows(rows: &Matrix, cols: usize, what: &str) -> Result<IntMatrix, CliError> {
    let mut data = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(CliError::Parse(format!("{what}: row {i} has the wrong length")));
        }
        let parsed: Option<Vec<BigInt>> = row.iter().map(|s| s.parse().ok()).collect();
        data.push(parsed.ok_or_else(|| CliError::Parse(format!("{what}: bad entry in row {i}")))?);
    }
    Ok(IntMatrix::from_rows_with_cols(data, cols).expect("rows checked"))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Invariants {
    pub rank: usize,
    pub factors: Vec<String>,
}

impl From<&GroupInvariants> for Invariants {
    fn from(g: &GroupInvariants) -> Self {
        Invariants {
            rank: g.free_rank,
            factors: g.invariant_factors.iter().map(|d| d.to_string()).collect(),
        }
    }
}

/// A component `S_i = Z^generators / relations`, relations listed as vectors.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Component {
    pub rank: usize,
    pub factors: Vec<String>,
    pub generators: usize,
    pub relations: Matrix,
}

impl From<&ZModule> for Component {
    fn from(m: &ZModule) -> Self {
        let inv = Invariants::from(m.normal_form());
        Component {
            rank: inv.rank,
            factors: inv.factors,
            generators: m.gens(),
            relations: m
                .relations()
                .basis_vectors()
                .iter()
                .map(|v| v.iter().map(|x| x.to_string()).collect())
                .collect(),
        }
    }
}

impl Component {
    fn to_module(&self, what: &str) -> Result<ZModule, CliError> {
        let rels = parse_rows(&self.relations, self.generators, what)?;
        let vectors = rels.row_vecs();
        Ok(ZModule::new(self.generators, Lattice::from_vectors(self.generators, &vectors)))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckDoc {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
}

pub fn checks_of(report: &RDiagramReport) -> Vec<CheckDoc> {
    report
        .checks
        .iter()
        .map(|c| CheckDoc {
            name: c.name.to_string(),
            pass: c.pass,
            witnesses: c.witnesses.clone(),
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct OracleDoc {
    pub homology: Invariants,
    pub rdiagram: Invariants,
    pub agree: bool,
}

/// One stage of the sequential reduction, for `--trace`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct StageDoc {
    pub stage: String,
    pub k1: Invariants,
    pub kbar_dim: usize,
    pub k2: Invariants,
    pub s1: Invariants,
    pub sbar_dim: usize,
    pub s2: Invariants,
    pub f1: Matrix,
    pub fbar: Matrix,
    pub f2: Matrix,
}

impl StageDoc {
    pub fn new(stage: &str, pres: &SeparatedPresentation) -> Self {
        let f = pres.forms();
        let m = pres.map();
        StageDoc {
            stage: stage.to_string(),
            k1: (&f.k1).into(),
            kbar_dim: f.kbar_dim,
            k2: (&f.k2).into(),
            s1: (&f.s1).into(),
            sbar_dim: f.sbar_dim,
            s2: (&f.s2).into(),
            f1: int_matrix(m.f1()),
            fbar: fp_matrix(m.fbar()),
            f2: int_matrix(m.f2()),
        }
    }
}

/// The R-diagram of one homology module.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DegreeDoc {
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub p: u64,
    #[serde(rename = "K_dim")]
    pub k_dim: usize,
    #[serde(rename = "S1")]
    pub s1: Component,
    #[serde(rename = "Sbar_dim")]
    pub sbar_dim: usize,
    #[serde(rename = "S2")]
    pub s2: Component,
    pub q1: Matrix,
    pub q2: Matrix,
    pub p1: Matrix,
    pub p2: Matrix,
    pub valid: bool,
    pub checks: Vec<CheckDoc>,
    pub oracle: OracleDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<StageDoc>>,
}

impl DegreeDoc {
    pub fn new(
        degree: usize,
        label: Option<&str>,
        rd: &RDiagram,
        report: &RDiagramReport,
        oracle: OracleDoc,
    ) -> Self {
        DegreeDoc {
            degree,
            label: label.map(str::to_string),
            p: rd.p,
            k_dim: rd.kdim,
            s1: rd.s.m1().into(),
            sbar_dim: rd.s.mbar_dim(),
            s2: rd.s.m2().into(),
            q1: int_matrix(&rd.q1),
            q2: int_matrix(&rd.q2),
            p1: fp_matrix(rd.s.p1()),
            p2: fp_matrix(rd.s.p2()),
            valid: report.all_pass(),
            checks: checks_of(report),
            oracle,
            trace: None,
        }
    }

    /// Rebuilds the R-diagram from an emitted document.
    pub fn to_rdiagram(&self) -> Result<RDiagram, CliError> {
        let m1 = self.s1.to_module("S1 relations")?;
        let m2 = self.s2.to_module("S2 relations")?;
        let fp = |rows: &Matrix, cols: usize, what: &str| -> Result<FpMatrix, CliError> {
            if rows.len() != self.sbar_dim {
                return Err(CliError::Parse(format!("{what} has the wrong number of rows")));
            }
            Ok(FpMatrix::from_int(self.p, &parse_rows(rows, cols, what)?))
        };
        let p1 = fp(&self.p1, m1.gens(), "p1")?;
        let p2 = fp(&self.p2, m2.gens(), "p2")?;
        let q = |rows: &Matrix, gens: usize, what: &str| -> Result<IntMatrix, CliError> {
            if rows.len() != gens {
                return Err(CliError::Parse(format!("{what} has the wrong number of rows")));
            }
            parse_rows(rows, self.k_dim, what)
        };
        let q1 = q(&self.q1, m1.gens(), "q1")?;
        let q2 = q(&self.q2, m2.gens(), "q2")?;
        let s = PullbackDiagram::new(self.p, m1, self.sbar_dim, m2, p1, p2)
            .map_err(CliError::from_core)?;
        Ok(RDiagram {
            p: self.p,
            kdim: self.k_dim,
            s,
            q1,
            q2,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RDiagramDocument {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_check: Option<bool>,
    pub degrees: Vec<DegreeDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct InvariantsDoc {
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub oracle: Invariants,
    pub pipeline: Invariants,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct InvariantsDocument {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_check: Option<bool>,
    pub degrees: Vec<InvariantsDoc>,
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("plain data serializes")
}

fn group_name(rank: usize, factors: &[String]) -> String {
    let mut parts = Vec::new();
    match rank {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    parts.extend(factors.iter().map(|d| format!("Z/{d}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

pub fn invariants_name(inv: &Invariants) -> String {
    group_name(inv.rank, &inv.factors)
}

fn vector_space(p: u64, d: usize) -> String {
    match d {
        0 => "0".into(),
        1 => format!("F_{p}"),
        d => format!("F_{p}^{d}"),
    }
}

fn write_matrix(out: &mut String, name: &str, m: &Matrix) {
    if m.is_empty() || m[0].is_empty() {
        let _ = writeln!(out, "  {name} = (empty)");
        return;
    }
    let width = m.iter().flatten().map(String::len).max().unwrap_or(1);
    for (i, row) in m.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>width$}")).collect();
        let head = if i == 0 { format!("{name} =") } else { String::new() };
        let _ = writeln!(out, "  {head:<8}[ {} ]", cells.join(" "));
    }
}

/// The four-arrow picture followed by the matrices and checks.
pub fn render_degree(doc: &DegreeDoc) -> String {
    let mut out = String::new();
    let title = match &doc.label {
        Some(l) => format!("H^{} ({l})", doc.degree),
        None => format!("H^{}", doc.degree),
    };
    let k = format!("K = {}", vector_space(doc.p, doc.k_dim));
    let s1 = format!("S_1 = {}", group_name(doc.s1.rank, &doc.s1.factors));
    let s2 = format!("S_2 = {}", group_name(doc.s2.rank, &doc.s2.factors));
    let sbar = format!("S_bar = {}", vector_space(doc.p, doc.sbar_dim));
    let _ = writeln!(out, "{title}, p = {}", doc.p);
    let _ = writeln!(out, "{:^44}", k);
    let _ = writeln!(out, "{:^44}", "q_1 /      \\ q_2");
    let _ = writeln!(out, "{:^44}", "v          v");
    let _ = writeln!(out, "{:>20}    {:<20}", s1, s2);
    let _ = writeln!(out, "{:^44}", "p_1 \\      / p_2");
    let _ = writeln!(out, "{:^44}", "v          v");
    let _ = writeln!(out, "{:^44}", sbar);
    write_matrix(&mut out, "q_1", &doc.q1);
    write_matrix(&mut out, "q_2", &doc.q2);
    write_matrix(&mut out, "p_1", &doc.p1);
    write_matrix(&mut out, "p_2", &doc.p2);
    for c in &doc.checks {
        let _ = writeln!(out, "  check {}: {}", c.name, if c.pass { "ok" } else { "FAIL" });
        for w in &c.witnesses {
            let _ = writeln!(out, "    witness {w}");
        }
    }
    let _ = writeln!(
        out,
        "  underlying group: {} (homology {}, {})",
        invariants_name(&doc.oracle.rdiagram),
        invariants_name(&doc.oracle.homology),
        if doc.oracle.agree { "agree" } else { "DISAGREE" }
    );
    if let Some(trace) = &doc.trace {
        for s in trace {
            let _ = writeln!(
                out,
                "  stage {}: K = ({}, {}, {}), S = ({}, {}, {})",
                s.stage,
                invariants_name(&s.k1),
                vector_space(doc.p, s.kbar_dim),
                invariants_name(&s.k2),
                invariants_name(&s.s1),
                vector_space(doc.p, s.sbar_dim),
                invariants_name(&s.s2),
            );
            write_matrix(&mut out, "f_1", &s.f1);
            write_matrix(&mut out, "f_bar", &s.fbar);
            write_matrix(&mut out, "f_2", &s.f2);
        }
    }
    out
}

pub fn render_rdiagrams(doc: &RDiagramDocument) -> String {
    let mut blocks = Vec::new();
    if let Some(ok) = doc.p_check {
        blocks.push(format!("quotient ring check for p = {}: {}\n", doc.p, ok));
    }
    blocks.extend(doc.degrees.iter().map(render_degree));
    blocks.join("\n")
}

pub fn render_invariants(doc: &InvariantsDocument) -> String {
    let mut out = String::new();
    if let Some(ok) = doc.p_check {
        let _ = writeln!(out, "quotient ring check for p = {}: {}", doc.p, ok);
    }
    for d in &doc.degrees {
        let _ = writeln!(
            out,
            "H^{}: {} (pipeline {}, {})",
            d.degree,
            invariants_name(&d.oracle),
            invariants_name(&d.pipeline),
            if d.agree { "agree" } else { "DISAGREE" }
        );
    }
    out
}
