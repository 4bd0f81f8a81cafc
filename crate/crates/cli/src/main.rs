//! `folner`: command-line access to the Følner, Reiter, mean and metric
//! algorithms.
//!
//! Exit codes: 0 success or witness, 2 refusal or refutation, 3 budget
//! exhausted, 64 usage error.

mod input;
mod selfcheck;
mod verify;
mod witness;

use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use folner_core::folner::{self, FolnerCheck};
use folner_core::means::{self, BinarySeqZ, ExplicitSeq, NatFunction};
use folner_core::metric::{self, ExactDistances, NaturalMetricOracle};
use folner_core::rational::{to_decimal, to_text, Q};
use folner_core::reiter::{self, KappaVerdict, ReiterFunction};
use folner_core::sequences::{self, CeFamilyModel, SequenceProgram};
use folner_core::wp::{decide_equal_via_folner, RecordingOracle};
use folner_core::{Error, ZooEnumerator};
use serde::Serialize;
use serde_json::{json, Value};

use crate::witness::Witness;

#[derive(Debug, Parser)]
#[command(name = "folner", version, about = "Følner sets, Reiter functions and metric amenability on numbered groups")]
struct Cli {
    /// Step budget for searches and enumerations.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Følner sets and the Følner function.
    #[command(subcommand)]
    Folner(FolnerCmd),
    /// Reiter functions and the merge verifier.
    #[command(subcommand)]
    Reiter(ReiterCmd),
    /// Decide equality of two words from a Følner oracle and equalities.
    DecideEq {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        w1: String,
        #[arg(long)]
        w2: String,
    },
    /// Finite-horizon checks of Følner sequences.
    #[command(subcommand)]
    Sequence(SequenceCmd),
    /// Means table of the slow-convergence sequence.
    Convmod {
        /// Convergence bound, e.g. `2^k`.
        #[arg(long)]
        f: String,
        #[arg(long)]
        kmax: u64,
        /// CSV destination; `-` for stdout.
        #[arg(long)]
        csv: Option<String>,
    },
    /// Means of binary sequences on ℤ.
    #[command(subcommand)]
    Means(MeansCmd),
    /// Matching-based metric amenability.
    #[command(subcommand)]
    Metric(MetricCmd),
    /// Re-check a witness document independently of the searches.
    Verify {
        /// Witness file; `-` for stdin.
        #[arg(long)]
        witness: String,
    },
    /// Seeded randomized sweep over the core algorithms.
    Selfcheck,
}

#[derive(Debug, Args)]
struct GroupArg {
    /// Group descriptor: inline JSON or a file path.
    #[arg(long)]
    group: String,
}

#[derive(Debug, Args)]
struct Target {
    #[command(flatten)]
    group: GroupArg,
    #[arg(long)]
    n: u64,
    /// Comma-separated words.
    #[arg(long = "D", allow_hyphen_values = true)]
    d: String,
}

#[derive(Debug, Subcommand)]
enum FolnerCmd {
    /// First injective 1/n-Følner set in finite-set order.
    Search {
        #[command(flatten)]
        target: Target,
    },
    /// Check a given set.
    Check {
        #[command(flatten)]
        target: Target,
        #[arg(long = "F")]
        f: String,
    },
    /// Least Følner set size inside a ball.
    Function {
        #[command(flatten)]
        target: Target,
        /// Ball radius.
        #[arg(long)]
        bound: u64,
    },
}

#[derive(Debug, Subcommand)]
enum ReiterCmd {
    /// Run the merge verifier on a Reiter function file.
    Verify {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        f: String,
    },
    /// Find a characteristic Reiter function by dovetailing the verifier.
    Compute {
        #[command(flatten)]
        target: Target,
    },
}

#[derive(Debug, Subcommand)]
enum SequenceCmd {
    Check {
        #[command(flatten)]
        group: GroupArg,
        /// Sequence program: inline JSON or a file path.
        #[arg(long)]
        prog: String,
        #[arg(long)]
        horizon: u64,
        #[arg(long)]
        nmax: u64,
        #[arg(long)]
        x: String,
    },
    /// The product-set construction driven by a c.e. family model.
    Reduction {
        #[arg(long)]
        model: String,
        #[arg(long)]
        horizon: u64,
        /// Generator indices to test.
        #[arg(long, default_value = "1")]
        gens: String,
        #[arg(long, default_value_t = 4)]
        nmax: u64,
    },
}

#[derive(Debug, Subcommand)]
enum MeansCmd {
    /// `m_j` for `j = 0..=jmax`.
    Table {
        /// Sequence: inline JSON or a file path.
        #[arg(long)]
        x: String,
        #[arg(long)]
        jmax: u64,
    },
    /// A nearby sequence whose mean jumps by more than one half.
    Witness {
        /// Explicit sequence: inline JSON or a file path.
        #[arg(long)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long = "q2")]
        q2: String,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 4096)]
        max_n: u64,
    },
}

#[derive(Debug, Subcommand)]
enum MetricCmd {
    /// μ(F, gF, B_{<q}) with a maximum matching and Hall certificate.
    Matching {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long = "F")]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        ball: String,
    },
    /// Check `--F` when given, otherwise search.
    Folner {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[arg(long = "D")]
        d: String,
        #[arg(long = "F")]
        f: Option<String>,
        /// Precision of the distance assignment.
        #[arg(long, default_value_t = 10)]
        l: u64,
    },
    /// Approximate a distance from a metric-Følner oracle and distance facts.
    Estimate {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        w1: String,
        #[arg(long)]
        w2: String,
        #[arg(long)]
        eps: String,
    },
    /// Finite-horizon check of a metric Følner sequence.
    Sequence {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        prog: String,
        #[arg(long)]
        horizon: u64,
        #[arg(long)]
        nmax: u64,
        #[arg(long)]
        x: String,
    },
}

/// A failed run: exit code and message.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 64,
            kind: "usage",
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match e {
            Error::Exhausted(_) => (3, "exhausted"),
            Error::InvalidArgument(_) | Error::WordSyntax { .. } | Error::NotReduced(_) | Error::Descriptor(_) => {
                (64, "usage")
            }
            _ => (2, "refusal"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

/// Text for stdout and the exit code.
struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn json(v: &impl Serialize, code: u8) -> Output {
        let mut text = serde_json::to_string_pretty(v).expect("output serializes");
        text.push('\n');
        Output { text, code }
    }
}

const DEFAULT_BUDGET: u64 = 1_000_000;

fn qs(v: &[Q]) -> Vec<String> {
    v.iter().map(to_text).collect()
}

fn kappa_json(v: &KappaVerdict) -> (Value, u8) {
    match v {
        KappaVerdict::Certified { moves, ratios } => (json!({"verdict": "certified", "moves": moves, "ratios": qs(ratios)}), 0),
        KappaVerdict::RefutedAtFullPartition { moves, ratios } => {
            (json!({"verdict": "refuted", "moves": moves, "ratios": qs(ratios)}), 2)
        }
        KappaVerdict::BudgetExhausted { moves, consumed, ratios } => (
            json!({"verdict": "budget_exhausted", "moves": moves, "consumed": consumed, "ratios": qs(ratios)}),
            3,
        ),
    }
}

fn csv_only(format: Option<Format>, what: &str) -> Result<(), Failure> {
    if format == Some(Format::Csv) {
        return Err(Failure::usage(format!("{what} has no CSV form")));
    }
    Ok(())
}

fn means_csv(x: &BinarySeqZ, jmax: u64) -> Result<String, Failure> {
    let mut out = String::from("j,mj_num,mj_den,mj_decimal\n");
    for j in 0..=jmax {
        let m = means::mean_at(x, j)?;
        writeln!(out, "{j},{},{},{}", m.numer(), m.denom(), to_decimal(&m, 6)).expect("string write");
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let budget = cli.budget.unwrap_or(DEFAULT_BUDGET);
    if budget == 0 {
        return Err(Failure::usage("--budget must be positive"));
    }
    let format = cli.format;
    match cli.command {
        Command::Folner(cmd) => {
            csv_only(format, "folner")?;
            match cmd {
                FolnerCmd::Search { target } => {
                    let group = input::group(&target.group.group)?;
                    let d = input::codes(&target.d)?;
                    let witness = folner::search_folner(&group, target.n, &d, budget)?;
                    Ok(Output::json(&Witness::Folner { group, d, witness }, 0))
                }
                FolnerCmd::Check { target, f } => {
                    let group = input::group(&target.group.group)?;
                    let d = input::codes(&target.d)?;
                    let f = input::codes(&f)?;
                    match folner::is_folner(&group, &f, &d, target.n)? {
                        FolnerCheck::Witness(witness) => Ok(Output::json(&Witness::Folner { group, d, witness }, 0)),
                        FolnerCheck::Refusal { x, defect } => Ok(Output::json(
                            &json!({"outcome": "refusal", "x": x, "defect": to_text(&defect)}),
                            2,
                        )),
                    }
                }
                FolnerCmd::Function { target, bound } => {
                    let group = input::group(&target.group.group)?;
                    let d = input::codes(&target.d)?;
                    let v = folner::folner_function(&group, target.n, &d, bound)?;
                    let code = if v.value.is_some() { 0 } else { 2 };
                    Ok(Output::json(&v, code))
                }
            }
        }
        Command::Reiter(cmd) => {
            csv_only(format, "reiter")?;
            match cmd {
                ReiterCmd::Verify { target, f } => {
                    let group = input::group(&target.group.group)?;
                    let d = input::codes(&target.d)?;
                    let (text, origin) = input::json_arg(&f)?;
                    let f = ReiterFunction::from_json(&text).map_err(|e| Failure::usage(format!("{origin}: {e}")))?;
                    let eq = ZooEnumerator::new(&group);
                    let v = reiter::kappa_verify(&eq, Some(&group), target.n, &d, &f, budget);
                    let (value, code) = kappa_json(&v);
                    Ok(Output::json(&value, code))
                }
                ReiterCmd::Compute { target } => {
                    let group = input::group(&target.group.group)?;
                    let d = input::codes(&target.d)?;
                    let eq = ZooEnumerator::new(&group);
                    let function = reiter::compute_reiter(&group, &eq, target.n, &d, budget)?;
                    Ok(Output::json(
                        &Witness::Reiter {
                            group,
                            n: target.n,
                            d,
                            function,
                        },
                        0,
                    ))
                }
            }
        }
        Command::DecideEq { group, w1, w2 } => {
            let group = input::group(&group.group)?;
            let (a, b) = (input::code(&w1)?, input::code(&w2)?);
            let eq = ZooEnumerator::new(&group);
            let mut oracle = RecordingOracle::new(&group);
            let equal = decide_equal_via_folner(&eq, &a, &b, &mut oracle, budget)?;
            let word = if equal { "equal" } else { "not-equal" };
            match format {
                Some(Format::Json) => Ok(Output::json(
                    &json!({"verdict": word, "oracle_queries": oracle.queries}),
                    0,
                )),
                Some(Format::Csv) => Err(Failure::usage("decide-eq has no CSV form")),
                None => Ok(Output {
                    text: format!("{word}\n"),
                    code: 0,
                }),
            }
        }
        Command::Sequence(cmd) => {
            csv_only(format, "sequence")?;
            match cmd {
                SequenceCmd::Check {
                    group,
                    prog,
                    horizon,
                    nmax,
                    x,
                } => {
                    let group = input::group(&group.group)?;
                    let (text, origin) = input::json_arg(&prog)?;
                    let prog: SequenceProgram =
                        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{origin}: {e}")))?;
                    let xs = input::codes(&x)?;
                    let report = sequences::verify_sequence_horizon(&group, &prog, horizon, &xs, nmax)?;
                    let code = if report.all_pass() { 0 } else { 2 };
                    Ok(Output::json(&report, code))
                }
                SequenceCmd::Reduction {
                    model,
                    horizon,
                    gens,
                    nmax,
                } => {
                    let (text, origin) = input::json_arg(&model)?;
                    let model = CeFamilyModel::from_json(&text).map_err(|e| Failure::usage(format!("{origin}: {e}")))?;
                    let gens = input::u64_list(&gens)?;
                    let verdict = sequences::reduction_case_study(&model, horizon, &gens, nmax);
                    Ok(Output::json(&verdict, 0))
                }
            }
        }
        Command::Convmod { f, kmax, csv } => {
            let f: NatFunction = f.parse()?;
            let built = means::build_x0(&f, kmax)?;
            let horizon = built.steps.last().map_or(5, |s| s.i_k);
            let table = csv.as_deref().map(|_| means_csv(&built.seq, horizon)).transpose()?;
            match (csv.as_deref(), table) {
                (Some("-"), Some(t)) => Ok(Output { text: t, code: 0 }),
                (Some(path), Some(t)) => {
                    std::fs::write(path, t).map_err(|e| Failure::usage(format!("{path}: {e}")))?;
                    let modulus = means::modulus_table(&built.seq, &f, kmax, horizon)?;
                    Ok(Output::json(&json!({"steps": built.steps, "modulus": modulus, "csv": path}), 0))
                }
                _ => {
                    let modulus = means::modulus_table(&built.seq, &f, kmax, horizon)?;
                    Ok(Output::json(&json!({"steps": built.steps, "modulus": modulus}), 0))
                }
            }
        }
        Command::Means(cmd) => match cmd {
            MeansCmd::Table { x, jmax } => {
                let (text, origin) = input::json_arg(&x)?;
                let x = BinarySeqZ::from_json(&text).map_err(|e| Failure::usage(format!("{origin}: {e}")))?;
                if format == Some(Format::Csv) {
                    return Ok(Output {
                        text: means_csv(&x, jmax)?,
                        code: 0,
                    });
                }
                let rows = (0..=jmax)
                    .map(|j| Ok(json!({"j": j, "mj": to_text(&means::mean_at(&x, j)?)})))
                    .collect::<Result<Vec<Value>, Failure>>()?;
                Ok(Output::json(&json!({"limit": to_text(&x.limit()), "rows": rows}), 0))
            }
            MeansCmd::Witness { x, q, q2, eps, max_n } => {
                csv_only(format, "means witness")?;
                let (text, origin) = input::json_arg(&x)?;
                let x: ExplicitSeq = serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{origin}: {e}")))?;
                let out = means::discontinuity_witness(
                    &x,
                    &input::rational(&q)?,
                    &input::rational(&q2)?,
                    &input::rational(&eps)?,
                    max_n,
                )?;
                let code = match out {
                    means::WitnessOutcome::Witness(_) => 0,
                    means::WitnessOutcome::Refused { .. } => 2,
                };
                Ok(Output::json(&out, code))
            }
        },
        Command::Metric(cmd) => {
            csv_only(format, "metric")?;
            match cmd {
                MetricCmd::Matching { group, f, g, ball } => {
                    let group = input::group(&group.group)?;
                    let f = input::codes(&f)?;
                    let g = input::code(&g)?;
                    let ball = input::rational(&ball)?;
                    let mut oracle = ExactDistances::new(&group);
                    let report = metric::eps_matching(&group, &f, &g, &ball, &mut oracle)?;
                    Ok(Output::json(&report, 0))
                }
                MetricCmd::Folner { group, m, n, d, f, l } => {
                    let group = input::group(&group.group)?;
                    let d = input::codes(&d)?;
                    match f {
                        Some(f) => {
                            let f = input::codes(&f)?;
                            let check = metric::is_metric_folner(&group, &f, &d, m, n)?;
                            let code = if check.is_witness() { 0 } else { 2 };
                            Ok(Output::json(&check, code))
                        }
                        None => {
                            let witness = metric::search_metric_folner(&group, l, m, n, &d, budget)?;
                            Ok(Output::json(&Witness::MetricFolner { group, witness }, 0))
                        }
                    }
                }
                MetricCmd::Estimate { group, w1, w2, eps } => {
                    let group = input::group(&group.group)?;
                    let (a, b) = (input::code(&w1)?, input::code(&w2)?);
                    let eps = input::rational(&eps)?;
                    let mut oracle = NaturalMetricOracle::new(&group);
                    let mut facts = ExactDistances::new(&group);
                    let e = metric::estimate_distance(&a, &b, &eps, &mut oracle, &mut facts, budget)?;
                    Ok(Output::json(&e, 0))
                }
                MetricCmd::Sequence {
                    group,
                    prog,
                    horizon,
                    nmax,
                    x,
                } => {
                    let group = input::group(&group.group)?;
                    let (text, origin) = input::json_arg(&prog)?;
                    let prog: SequenceProgram =
                        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{origin}: {e}")))?;
                    let xs = input::codes(&x)?;
                    let report = metric::verify_metric_sequence_horizon(&group, &prog, horizon, &xs, nmax)?;
                    let code = if report.all_pass() { 0 } else { 2 };
                    Ok(Output::json(&report, code))
                }
            }
        }
        Command::Verify { witness } => {
            csv_only(format, "verify")?;
            let (text, origin) = input::json_arg(&witness)?;
            let w: Witness = serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{origin}: {e}")))?;
            let verdict = verify::verify(&w);
            let code = if verdict.valid { 0 } else { 2 };
            Ok(Output::json(&verdict, code))
        }
        Command::Selfcheck => {
            csv_only(format, "selfcheck")?;
            let report = selfcheck::run(cli.seed);
            let code = if report.passed() { 0 } else { 2 };
            Ok(Output::json(&report, code))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            // A closed pipe downstream is not an error of ours.
            let _ = std::io::stdout().write_all(out.text.as_bytes());
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("{}", json!({"error": f.kind, "message": f.message}));
            ExitCode::from(f.code)
        }
    }
}
