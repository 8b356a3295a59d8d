use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rdiagram_cli::commands::{self, Degrees};
use rdiagram_cli::input::{parse_document, ComplexDocument};
use rdiagram_cli::output::{render_invariants, render_rdiagrams, to_json, RDiagramDocument};
use rdiagram_cli::CliError;

#[derive(Parser)]
#[command(name = "rdiagram", version, about = "R-diagrams of homology modules over p-pullback rings")]
struct Cli {
    /// Also verify that R/P_1 and R/P_2 are Z/p for the primes involved.
    #[arg(long, global = true)]
    p_check: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct DegreeArgs {
    /// Single cohomological degree.
    #[arg(long)]
    degree: Option<usize>,
    /// Every degree of the complex.
    #[arg(long)]
    all: bool,
}

impl DegreeArgs {
    fn selection(&self) -> Degrees {
        match self.degree {
            Some(n) => Degrees::One(n),
            None => Degrees::All,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check congruence mod p and that consecutive differentials compose to zero.
    Validate {
        /// Complex document, or `-` for stdin.
        input: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compute the R-diagram of the homology.
    Rdiagram {
        input: PathBuf,
        #[command(flatten)]
        degrees: DegreeArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Include every stage of the sequential reduction.
        #[arg(long)]
        trace: bool,
    },
    /// Underlying group of the homology, from the oracle and from the pipeline.
    Invariants {
        input: PathBuf,
        #[command(flatten)]
        degrees: DegreeArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Re-validate the R-diagrams of a document emitted by `rdiagram --format json`.
    Recheck {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run random instances through the pipeline and compare with the oracle.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

fn read_input(path: &PathBuf) -> Result<String, CliError> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn complex_input(path: &PathBuf) -> Result<ComplexDocument, CliError> {
    parse_document(&read_input(path)?)
}

/// Returns the text for stdout and whether the run counts as a success.
fn run(cli: Cli) -> Result<(String, bool), CliError> {
    match cli.command {
        Command::Validate { input, format } => {
            let doc = complex_input(&input)?;
            let v = commands::validate(&doc)?;
            let p_check = cli.p_check.then(|| rdiagram_core::pullback::quotient_ring_check(doc.p));
            let mut text = match format {
                Format::Json => to_json(&v) + "\n",
                Format::Text => v.text.clone(),
            };
            if let Some(r) = p_check {
                let ok = r.map_err(CliError::from_core)?;
                if let Format::Text = format {
                    text.push_str(&format!("quotient ring check for p = {}: {ok}\n", doc.p));
                }
            }
            Ok((text, v.valid))
        }
        Command::Rdiagram {
            input,
            degrees,
            format,
            trace,
        } => {
            let doc = complex_input(&input)?;
            let out = commands::rdiagram(&doc, degrees.selection(), trace, cli.p_check)?;
            let text = match format {
                Format::Json => to_json(&out) + "\n",
                Format::Text => render_rdiagrams(&out),
            };
            Ok((text, true))
        }
        Command::Invariants {
            input,
            degrees,
            format,
        } => {
            let doc = complex_input(&input)?;
            let out = commands::invariants(&doc, degrees.selection(), cli.p_check)?;
            let text = match format {
                Format::Json => to_json(&out) + "\n",
                Format::Text => render_invariants(&out),
            };
            Ok((text, true))
        }
        Command::Recheck { input, format } => {
            let doc: RDiagramDocument = serde_json::from_str(&read_input(&input)?)
                .map_err(|e| CliError::Parse(e.to_string()))?;
            let results = commands::recheck(&doc)?;
            let mut all_ok = true;
            for (d, (_, checks)) in doc.degrees.iter().zip(&results) {
                if *checks != d.checks {
                    return Err(CliError::Consistency {
                        message: format!("degree {}: report differs from the document", d.degree),
                        reproducer: to_json(d),
                    });
                }
                all_ok &= checks.iter().all(|c| c.pass);
            }
            let text = match format {
                Format::Json => {
                    let v: Vec<_> = results
                        .iter()
                        .map(|(n, c)| serde_json::json!({"degree": n, "checks": c}))
                        .collect();
                    to_json(&v) + "\n"
                }
                Format::Text => results
                    .iter()
                    .map(|(n, checks)| {
                        let ok = checks.iter().all(|c| c.pass);
                        format!("H^{n}: {}\n", if ok { "valid R-diagram" } else { "INVALID" })
                    })
                    .collect(),
            };
            Ok((text, all_ok))
        }
        Command::Selftest { seed, trials } => {
            let s = commands::selftest(seed, trials, cli.p_check)?;
            Ok((
                format!(
                    "selftest seed {}: {} complexes ({} degrees) and {} presentations agree with the oracle\n",
                    s.seed, s.complexes, s.degrees, s.presentations
                ),
                true,
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Consistency { reproducer, .. } = &e {
                if !reproducer.is_empty() {
                    eprintln!("reproducer:\n{reproducer}");
                }
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
