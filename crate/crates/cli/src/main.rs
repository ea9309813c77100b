//! Command-line front end: generate, refute, check, translate, evaluate.

use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qproof::formula::ParseError;
use qproof::mres::{self, MResVerdict};
use qproof::qrat::{self, CheckerConfig, UnivRule, Verdict};
use qproof::semantics::{brute_force_truth_capped, DEFAULT_VAR_CAP};
use qproof::unitprop::AtMode;
use qproof::{emit_eq2_refutation, generate_eq2, parse_qdimacs, translate, write_qdimacs, QbfFormula};

#[derive(Parser)]
#[command(name = "qproof", version, about = "QBF proof toolkit: QRAT and merge-resolution checking")]
struct Cli {
    /// Print extra diagnostics (counters, warnings) to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a formula from a built-in family as QDIMACS.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Write a refutation of a built-in family as QRAT text.
    Refute {
        #[command(subcommand)]
        family: Family,
    },
    /// Check a proof against a formula and print a verdict line.
    Check {
        #[command(subcommand)]
        kind: CheckKind,
    },
    /// Compile a verified merge-resolution refutation into QRAT additions.
    Translate {
        /// QDIMACS file with the formula being refuted.
        #[arg(long)]
        formula: PathBuf,
        /// Merge-resolution trace file.
        #[arg(long)]
        mres: PathBuf,
        /// Output file; standard output if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide a small formula by brute force and print TRUE or FALSE.
    Eval {
        #[arg(long)]
        formula: PathBuf,
        /// Refuse formulas with more variables than this.
        #[arg(long, default_value_t = DEFAULT_VAR_CAP)]
        max_vars: usize,
    },
    /// Check a QRAT proof and print step and propagation counters.
    Stats {
        #[command(flatten)]
        check: QratCheckArgs,
    },
}

#[derive(Subcommand)]
enum Family {
    /// The squared-equality family at size n.
    Eq2 {
        #[arg(long)]
        n: u32,
        /// Output file; standard output if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CheckKind {
    /// Check a QRAT refutation.
    Qrat {
        #[command(flatten)]
        check: QratCheckArgs,
    },
    /// Check a merge-resolution refutation.
    Mres {
        /// QDIMACS file with the formula being refuted.
        #[arg(long)]
        formula: PathBuf,
        /// Trace file; standard input if omitted.
        #[arg(long)]
        proof: Option<PathBuf>,
    },
}

#[derive(Args)]
struct QratCheckArgs {
    /// QDIMACS file with the formula being refuted.
    #[arg(long)]
    formula: PathBuf,
    /// Proof file; standard input if omitted.
    #[arg(long)]
    proof: Option<PathBuf>,
    /// Propagation mode for asserted-tautology checks.
    #[arg(long, value_enum, default_value_t = AtArg::Prop)]
    at: AtArg,
    /// Rule tried for reductions the partner check does not justify.
    #[arg(long, value_enum, default_value_t = RuleArg::Ur)]
    univ_rule: RuleArg,
    /// Allow non-asserted additions justified by their pivot literal.
    #[arg(long)]
    qrat_adds: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AtArg {
    /// Every literal may propagate.
    Prop,
    /// Universal literals neither propagate nor rescue a clause.
    Univ,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    /// Plain reduction: no existential literal to the right of the pivot.
    Ur,
    /// Extended reduction via the inner-clause fixpoint.
    Eur,
}

impl QratCheckArgs {
    fn config(&self) -> CheckerConfig {
        CheckerConfig::new(
            match self.at {
                AtArg::Prop => AtMode::Propositional,
                AtArg::Univ => AtMode::UniversalAware,
            },
            match self.univ_rule {
                RuleArg::Ur => UnivRule::Ur,
                RuleArg::Eur => UnivRule::Eur,
            },
            self.qrat_adds,
        )
    }
}

/// Failure that maps to exit status 2: usage, I/O, or parse trouble.
struct Fatal(String);

impl fmt::Display for Fatal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn read_file(path: &Path) -> Result<String, Fatal> {
    fs::read_to_string(path).map_err(|e| Fatal(format!("cannot read {}: {e}", path.display())))
}

fn read_proof_source(path: &Option<PathBuf>) -> Result<(String, String), Fatal> {
    match path {
        Some(p) => Ok((read_file(p)?, p.display().to_string())),
        None => {
            let mut text = String::new();
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Fatal(format!("cannot read standard input: {e}")))?;
            Ok((text, "<stdin>".to_string()))
        }
    }
}

fn write_output(path: &Option<PathBuf>, content: &str) -> Result<(), Fatal> {
    match path {
        Some(p) => fs::write(p, content)
            .map_err(|e| Fatal(format!("cannot write {}: {e}", p.display()))),
        None => io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| Fatal(format!("cannot write standard output: {e}"))),
    }
}

fn located(source: &str, err: ParseError) -> Fatal {
    Fatal(format!("{source}: {err}"))
}

fn load_formula(path: &Path) -> Result<QbfFormula, Fatal> {
    let text = read_file(path)?;
    parse_qdimacs(&text).map_err(|e| located(&path.display().to_string(), e))
}

fn print_qrat_stats(stats: &qrat::CheckStats) {
    println!("steps-applied: {}", stats.steps_applied);
    println!("at-additions: {}", stats.at_additions);
    println!("qrat-additions: {}", stats.qrat_additions);
    println!("deletions: {}", stats.deletions);
    println!("qratu-reductions: {}", stats.qratu_reductions);
    println!("rule-reductions: {}", stats.rule_reductions);
    println!("propagations: {}", stats.propagations);
    println!("implied-literals: {}", stats.implied_literals);
    println!("max-clause-width: {}", stats.max_clause_width);
}

/// Prints the frozen verdict line and returns the exit status.
fn qrat_verdict(verdict: &Verdict) -> u8 {
    match verdict {
        Verdict::VerifiedRefutation | Verdict::VerifiedDerivation => {
            println!("VERIFIED");
            0
        }
        Verdict::Rejected { step, reason } => {
            println!("REJECTED step={step} reason={}", reason.code());
            eprintln!("step {step}: {reason}");
            1
        }
    }
}

fn mres_verdict(verdict: &MResVerdict) -> u8 {
    match verdict {
        MResVerdict::VerifiedRefutation | MResVerdict::VerifiedDerivation => {
            println!("VERIFIED");
            0
        }
        MResVerdict::Rejected { step, reason } => {
            println!("REJECTED step={step} reason={}", reason.code());
            eprintln!("step {step}: {reason}");
            1
        }
    }
}

fn run(cli: Cli) -> Result<u8, Fatal> {
    match cli.command {
        Command::Gen {
            family: Family::Eq2 { n, output },
        } => {
            let inst = generate_eq2(n).map_err(|e| Fatal(e.to_string()))?;
            write_output(&output, &write_qdimacs(inst.formula()))?;
            Ok(0)
        }
        Command::Refute {
            family: Family::Eq2 { n, output },
        } => {
            let proof = emit_eq2_refutation(n).map_err(|e| Fatal(e.to_string()))?;
            write_output(&output, &qrat::write_qrat(&proof))?;
            Ok(0)
        }
        Command::Check {
            kind: CheckKind::Qrat { check },
        } => {
            let f = load_formula(&check.formula)?;
            let (text, source) = read_proof_source(&check.proof)?;
            let proof = qrat::parse_qrat(&text).map_err(|e| located(&source, e))?;
            let report = qrat::check_refutation(&f, &proof, check.config());
            if cli.verbose {
                eprintln!("steps used: {}", report.steps_used);
                eprintln!("propagations: {}", report.stats.propagations);
            }
            Ok(qrat_verdict(&report.verdict))
        }
        Command::Check {
            kind: CheckKind::Mres { formula, proof },
        } => {
            let f = load_formula(&formula)?;
            let (text, source) = read_proof_source(&proof)?;
            let proof = mres::parse_mres(&text).map_err(|e| located(&source, e))?;
            let report = mres::check_refutation(&f, &proof);
            for warning in &report.warnings {
                eprintln!("warning: {warning}");
            }
            Ok(mres_verdict(&report.verdict))
        }
        Command::Translate {
            formula,
            mres: trace,
            output,
        } => {
            let f = load_formula(&formula)?;
            let text = read_file(&trace)?;
            let proof = mres::parse_mres(&text)
                .map_err(|e| located(&trace.display().to_string(), e))?;
            match translate(&f, &proof) {
                Ok(qrat_proof) => {
                    write_output(&output, &qrat::write_qrat(&qrat_proof))?;
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("{e}");
                    Ok(1)
                }
            }
        }
        Command::Eval { formula, max_vars } => {
            let f = load_formula(&formula)?;
            let value = brute_force_truth_capped(&f, max_vars)
                .map_err(|e| Fatal(e.to_string()))?;
            println!("{}", if value { "TRUE" } else { "FALSE" });
            Ok(0)
        }
        Command::Stats { check } => {
            let f = load_formula(&check.formula)?;
            let (text, source) = read_proof_source(&check.proof)?;
            let proof = qrat::parse_qrat(&text).map_err(|e| located(&source, e))?;
            let report = qrat::check_refutation(&f, &proof, check.config());
            print_qrat_stats(&report.stats);
            Ok(qrat_verdict(&report.verdict))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(fatal) => {
            eprintln!("error: {fatal}");
            ExitCode::from(2)
        }
    }
}
