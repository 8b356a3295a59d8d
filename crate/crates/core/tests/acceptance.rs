//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines always appear in the output of
//! `cargo test`. Trial counts and time budgets are pinned below.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rdiagram_core::homology::{
    canonical_kernel_presentation, check_divisibility, closed_form_components, homology_presentation,
    ChainComplexR,
};
use rdiagram_core::linalg::{hnf, kernel_basis, snf, IntMatrix, Lattice};
use rdiagram_core::oracle::{
    homology_invariants_direct, underlying_invariants_of_presentation,
    underlying_invariants_of_rdiagram, GroupInvariants,
};
use rdiagram_core::pullback::{
    epi_conditions, is_mono, is_mono_direct, mono_conditions, separate,
};
use rdiagram_core::random::{
    random_complex, random_diagram_morphism, random_lattice_module, random_matrix, random_prime,
    random_separated_presentation, random_unimodular,
};
use rdiagram_core::reduction::{
    reduce_barf, reduce_combined, reduce_k, reduce_monos, reduce_sequential, validate_rdiagram,
    RDiagram,
};
use rdiagram_core::Error;

const PRESENTATION_TRIALS: usize = 1000;
const PRESENTATION_BUDGET: Duration = Duration::from_secs(60);
const MAX_GENERATORS: usize = 5;
const COMPLEX_TRIALS: usize = 300;
const MAX_COMPLEX_RANK: usize = 6;
const KERNEL_PAIRS: usize = 500;
const UNIQUENESS_TRIALS: usize = 200;
const MORPHISM_TRIALS: usize = 500;
const MATRIX_TRIALS: usize = 1000;
const MATRIX_MAX_DIM: usize = 8;
const MATRIX_MAX_ENTRY: i64 = 100;
const MATRIX_BUDGET: Duration = Duration::from_secs(30);
const EXAMPLE_BUDGET: Duration = Duration::from_secs(1);

struct Outcome {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(id: u32, name: &'static str, failures: &[String], detail: String) -> Outcome {
    let detail = match failures.first() {
        None => detail,
        Some(first) => format!("{detail}; {} failures, first: {first}", failures.len()),
    };
    Outcome {
        id,
        name,
        pass: failures.is_empty(),
        detail,
    }
}

/// Pipeline outputs collected by criterion 1 and re-checked by criteria 2 and 3.
struct PresentationRun {
    outcome: Outcome,
    rdiagrams: Vec<RDiagram>,
    sequential_mismatches: Vec<String>,
}

fn criterion_oracle_preservation(rng: &mut ChaCha8Rng) -> PresentationRun {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut mismatches = Vec::new();
    let mut rdiagrams = Vec::new();
    let mut nontrivial = 0;
    for trial in 0..PRESENTATION_TRIALS {
        let p = random_prime(rng);
        let pres = random_separated_presentation(rng, p, MAX_GENERATORS);
        let before = underlying_invariants_of_presentation(&pres);
        if !before.is_trivial() {
            nontrivial += 1;
        }
        let steps = (|| -> Result<_, Error> {
            let a = reduce_k(&pres)?;
            let b = reduce_barf(&a)?;
            let c = reduce_monos(&b)?;
            let rd = reduce_combined(&pres)?;
            let (_, seq) = reduce_sequential(&pres)?;
            Ok((a, b, c, rd, seq))
        })();
        match steps {
            Err(e) => failures.push(format!("trial {trial} (p = {p}): {e}")),
            Ok((a, b, c, rd, seq)) => {
                let after = [
                    ("reduce_K", underlying_invariants_of_presentation(&a)),
                    ("reduce_barf", underlying_invariants_of_presentation(&b)),
                    ("reduce_monos", underlying_invariants_of_presentation(&c)),
                    ("reduce_combined", underlying_invariants_of_rdiagram(&rd)),
                ];
                for (step, inv) in after {
                    if inv != before {
                        failures.push(format!("trial {trial}: {step} gives {inv}, expected {before}"));
                    }
                }
                if seq.forms() != rd.forms() {
                    mismatches.push(format!(
                        "trial {trial}: combined {} vs sequential {}",
                        rd.forms(),
                        seq.forms()
                    ));
                }
                rdiagrams.push(rd);
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > PRESENTATION_BUDGET {
        failures.push(format!("took {elapsed:?}, budget {PRESENTATION_BUDGET:?}"));
    }
    PresentationRun {
        outcome: outcome(
            1,
            "oracle preservation under every reduction",
            &failures,
            format!(
                "{PRESENTATION_TRIALS} presentations ({nontrivial} nontrivial), {:.2}s",
                elapsed.as_secs_f64()
            ),
        ),
        rdiagrams,
        sequential_mismatches: mismatches,
    }
}

/// Random two- and three-term complexes.
fn complexes(rng: &mut ChaCha8Rng) -> Vec<ChainComplexR> {
    (0..COMPLEX_TRIALS)
        .map(|i| {
            let p = random_prime(rng);
            random_complex(rng, p, 2 + i % 2, MAX_COMPLEX_RANK)
        })
        .collect()
}

fn criterion_validity(
    run: &PresentationRun,
    cs: &[ChainComplexR],
    divisibility: &mut Vec<String>,
) -> Outcome {
    let mut failures = Vec::new();
    for (i, rd) in run.rdiagrams.iter().enumerate() {
        let r = validate_rdiagram(rd);
        if !r.all_pass() {
            failures.push(format!("presentation {i}: {r}"));
        }
    }
    let mut degrees = 0;
    for (i, c) in cs.iter().enumerate() {
        for n in 0..c.terms() {
            degrees += 1;
            let result = homology_presentation(c, n).and_then(|hp| {
                if let Err(e) = check_divisibility(&hp.presentation) {
                    divisibility.push(format!("complex {i} degree {n}: {e}"));
                }
                reduce_combined(&hp.presentation)
            });
            match result {
                Err(e) => failures.push(format!("complex {i} degree {n}: {e}")),
                Ok(rd) => {
                    let r = validate_rdiagram(&rd);
                    if !r.all_pass() {
                        failures.push(format!("complex {i} degree {n}: {r}"));
                    }
                    let direct = homology_invariants_direct(c, n);
                    let via = underlying_invariants_of_rdiagram(&rd);
                    if direct != via {
                        failures.push(format!(
                            "complex {i} degree {n}: R-diagram group {via}, homology {direct}"
                        ));
                    }
                }
            }
        }
    }
    outcome(
        2,
        "R-diagram validity",
        &failures,
        format!(
            "{} reduced presentations, {} complexes / {degrees} degrees",
            run.rdiagrams.len(),
            cs.len()
        ),
    )
}

fn criterion_sequential(run: &PresentationRun) -> Outcome {
    outcome(
        3,
        "combined reduction equals sequential reductions",
        &run.sequential_mismatches,
        format!("{} trials", run.rdiagrams.len()),
    )
}

fn criterion_closed_form(cs: &[ChainComplexR], divisibility: &mut Vec<String>) -> Outcome {
    let mut failures = Vec::new();
    let mut degrees = 0;
    let mut with_k = 0;
    for (i, c) in cs.iter().enumerate() {
        for n in 0..c.terms() {
            degrees += 1;
            let pipeline = homology_presentation(c, n).and_then(|hp| {
                if let Err(e) = check_divisibility(&hp.presentation) {
                    divisibility.push(format!("complex {i} degree {n}: {e}"));
                }
                reduce_combined(&hp.presentation)
            });
            let closed = closed_form_components(c, n);
            match (pipeline, closed) {
                (Ok(rd), Ok(cf)) => {
                    if rd.kdim > 0 {
                        with_k += 1;
                    }
                    if rd.forms() != cf.rdiagram.forms() {
                        failures.push(format!(
                            "complex {i} degree {n}: pipeline {} vs closed form {}",
                            rd.forms(),
                            cf.rdiagram.forms()
                        ));
                    }
                }
                (Err(e), _) | (_, Err(e)) => {
                    failures.push(format!("complex {i} degree {n}: {e}"))
                }
            }
        }
    }
    outcome(
        4,
        "closed form agrees with the generic pipeline",
        &failures,
        format!("{degrees} degrees, {with_k} with K != 0"),
    )
}

/// `{(x, y) : d_1 x = 0, d_2 y = 0, x = y mod p}` computed independently of the library's
/// kernel routines: intersect the integer kernel with the lattice spanned by
/// `(e_i, e_i)` and `(0, p e_i)`.
fn brute_force_kernel(p: u64, d1: &IntMatrix, d2: &IntMatrix) -> Lattice {
    let m = d1.cols();
    let diag = IntMatrix::identity(m)
        .vstack(&IntMatrix::identity(m))
        .hstack(&IntMatrix::zeros(m, m).vstack(&IntMatrix::scalar(m, p)));
    let free = Lattice::from_generators(2 * m, &diag);
    kernel_basis(&d1.block_diag(d2)).intersection(&free).unwrap()
}

fn criterion_kernel_presentation(rng: &mut ChaCha8Rng) -> Outcome {
    let mut failures = Vec::new();
    let mut glued = 0;
    for trial in 0..KERNEL_PAIRS {
        let p = random_prime(rng);
        let rows = rng.gen_range(0..=6);
        let cols = rng.gen_range(1..=6);
        let inner = rng.gen_range(0..=rows.min(cols));
        let d1 = &random_matrix(rng, rows, inner, 2) * &random_matrix(rng, inner, cols, 2);
        let noise = &random_matrix(rng, rows, inner.max(1), 1)
            * &random_matrix(rng, inner.max(1), cols, 1);
        let d2 = d1.add(&noise.scale(&BigInt::from(p)));
        match canonical_kernel_presentation(&d1, &d2, p) {
            Err(e) => failures.push(format!("trial {trial}: {e}")),
            Ok(ck) => {
                if ck.layout[1] > 0 {
                    glued += 1;
                }
                if ck.embedded_pullback() != brute_force_kernel(p, &d1, &d2) {
                    failures.push(format!("trial {trial}: lattices differ (p = {p})"));
                }
                if !ck.diagram.separated() {
                    failures.push(format!("trial {trial}: Q not separated"));
                }
            }
        }
    }
    outcome(
        5,
        "canonical kernel presentation equals the kernel lattice",
        &failures,
        format!("{KERNEL_PAIRS} pairs, {glued} with glued generators"),
    )
}

fn criterion_worked_example() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let c = ChainComplexR::new(
        2,
        vec![1, 1],
        vec![(IntMatrix::from_rows(&[vec![2]]), IntMatrix::zeros(1, 1))],
    )
    .unwrap();
    let z2 = GroupInvariants {
        free_rank: 0,
        invariant_factors: vec![BigInt::from(2)],
    };
    match homology_presentation(&c, 1).and_then(|hp| reduce_combined(&hp.presentation)) {
        Err(e) => failures.push(e.to_string()),
        Ok(rd) => {
            let f = rd.forms();
            if f.kdim != 0 {
                failures.push(format!("K dimension {}", f.kdim));
            }
            if f.s1 != z2 {
                failures.push(format!("S_1 = {}", f.s1));
            }
            if f.sbar_dim != 1 {
                failures.push(format!("S_bar dimension {}", f.sbar_dim));
            }
            if f.s2 != GroupInvariants::free(1) {
                failures.push(format!("S_2 = {}", f.s2));
            }
            let group = underlying_invariants_of_rdiagram(&rd);
            if group != GroupInvariants::free(1) {
                failures.push(format!("underlying group {group}"));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > EXAMPLE_BUDGET {
        failures.push(format!("took {elapsed:?}"));
    }
    outcome(
        6,
        "worked example R -(2,0)-> R in degree 1",
        &failures,
        format!("K = 0, S_1 = Z/2, S_bar = F_2, S_2 = Z, {:.3}s", elapsed.as_secs_f64()),
    )
}

fn criterion_uniqueness(rng: &mut ChaCha8Rng) -> Outcome {
    let mut failures = Vec::new();
    for trial in 0..UNIQUENESS_TRIALS {
        let p = random_prime(rng);
        let with_relations = rng.gen_bool(0.5);
        let s = random_lattice_module(rng, p, MAX_GENERATORS, with_relations);
        let (a, b) = s.split();
        let mut forms = Vec::new();
        for _ in 0..2 {
            let u1 = random_unimodular(rng, a, 6);
            let u2 = random_unimodular(rng, b, 6);
            let moved = s.transform(&u1, &u2).unwrap();
            let d = separate(&moved).unwrap().diagram;
            forms.push(d.shape_invariants());
        }
        let base = separate(&s).unwrap().diagram.shape_invariants();
        if forms[0] != forms[1] || forms[0] != base {
            failures.push(format!("trial {trial}: {:?} vs {:?}", forms[0], forms[1]));
        }
    }
    outcome(
        7,
        "separated diagram is independent of the embedding",
        &failures,
        format!("{UNIQUENESS_TRIALS} modules, two unimodular changes each"),
    )
}

fn criterion_morphisms(rng: &mut ChaCha8Rng) -> Outcome {
    let mut failures = Vec::new();
    let mut monos = 0;
    let mut epis = [0usize; 4];
    let mut direct_epis = 0;
    for trial in 0..MORPHISM_TRIALS {
        let p = random_prime(rng);
        let m = random_diagram_morphism(rng, p, 4);
        let mono = is_mono(&m);
        if mono != is_mono_direct(&m) {
            failures.push(format!("trial {trial}: mu criterion {mono}, direct {}", !mono));
        }
        if mono_conditions(&m).all() != mono {
            failures.push(format!("trial {trial}: kernel and image conditions disagree"));
        }
        if mono {
            monos += 1;
        }
        let e = epi_conditions(&m);
        if e.direct {
            direct_epis += 1;
        }
        for (k, cond) in [e.cond1, e.cond2, e.cond3, e.cond4].into_iter().enumerate() {
            if cond {
                epis[k] += 1;
                if !e.direct {
                    failures.push(format!("trial {trial}: condition {} holds, map not onto", k + 1));
                }
            }
        }
    }
    outcome(
        8,
        "mono and epi criteria match direct computation",
        &failures,
        format!(
            "{MORPHISM_TRIALS} morphisms, {monos} mono, {direct_epis} epi, conditions true {:?}",
            epis
        ),
    )
}

fn is_diagonal_chain(d: &IntMatrix) -> bool {
    let n = d.rows().min(d.cols());
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            if i != j && !d[(i, j)].is_zero() {
                return false;
            }
        }
    }
    (0..n).all(|i| !d[(i, i)].is_negative())
        && (1..n).all(|i| {
            let (a, b) = (&d[(i - 1, i - 1)], &d[(i, i)]);
            if a.is_zero() {
                b.is_zero()
            } else {
                (b % a).is_zero()
            }
        })
}

fn criterion_linalg(rng: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    for trial in 0..MATRIX_TRIALS {
        let rows = rng.gen_range(0..=MATRIX_MAX_DIM);
        let cols = rng.gen_range(0..=MATRIX_MAX_DIM);
        let m = if rng.gen_bool(0.5) {
            random_matrix(rng, rows, cols, MATRIX_MAX_ENTRY)
        } else {
            let inner = rng.gen_range(0..=rows.min(cols));
            &random_matrix(rng, rows, inner, 10) * &random_matrix(rng, inner, cols, 10)
        };
        let h = hnf(&m);
        if &m * &h.u != h.h || !h.u.is_unimodular() {
            failures.push(format!("trial {trial}: HNF reconstruction"));
        }
        let s = snf(&m);
        if &(&s.u * &m) * &s.v != s.d || !s.u.is_unimodular() || !s.v.is_unimodular() {
            failures.push(format!("trial {trial}: SNF reconstruction"));
        }
        if !is_diagonal_chain(&s.d) {
            failures.push(format!("trial {trial}: SNF divisibility chain"));
        }
        let k = kernel_basis(&m);
        if !(&m * k.basis()).is_zero() {
            failures.push(format!("trial {trial}: kernel vector not killed"));
        }
        let kd = snf(k.basis()).diagonal();
        if !kd.iter().all(|x| x.is_one()) {
            failures.push(format!("trial {trial}: kernel not saturated"));
        }
        if k.rank() + h.rank() != cols {
            failures.push(format!("trial {trial}: rank-nullity"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > MATRIX_BUDGET {
        failures.push(format!("took {elapsed:?}, budget {MATRIX_BUDGET:?}"));
    }
    outcome(
        9,
        "normal forms and kernels verify themselves",
        &failures,
        format!("{MATRIX_TRIALS} matrices up to {MATRIX_MAX_DIM}x{MATRIX_MAX_DIM}, {:.2}s", elapsed.as_secs_f64()),
    )
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let mut outcomes = Vec::new();
    let run = criterion_oracle_preservation(&mut rng);
    let cs = complexes(&mut rng);
    let mut divisibility = Vec::new();
    let validity = criterion_validity(&run, &cs, &mut divisibility);
    let sequential = criterion_sequential(&run);
    let closed = criterion_closed_form(&cs, &mut divisibility);
    outcomes.push(run.outcome);
    outcomes.push(validity);
    outcomes.push(sequential);
    outcomes.push(closed);
    outcomes.push(criterion_kernel_presentation(&mut rng));
    outcomes.push(criterion_worked_example());
    outcomes.push(criterion_uniqueness(&mut rng));
    outcomes.push(criterion_morphisms(&mut rng));
    outcomes.push(criterion_linalg(&mut rng));
    outcomes.push(outcome(
        10,
        "divisibility by p on every pipeline run",
        &divisibility,
        "checked in criteria 2 and 4".into(),
    ));

    let mut failed = 0;
    for o in &outcomes {
        println!(
            "[{}] criterion {:>2}: {} ({})",
            if o.pass { "PASS" } else { "FAIL" },
            o.id,
            o.name,
            o.detail
        );
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", outcomes.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
