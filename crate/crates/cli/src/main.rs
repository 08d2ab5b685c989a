use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use seqlab_core::algebra::{CoeffTable, RingElem};
use seqlab_core::quadratic::{
    eq2_reconcile, f_hypothesis_check, kappa_direct, kappa_reconcile, kappa_recursion_with, p_coeffs_closed,
    p_coeffs_recursion, p_iterate_oracle, q_genpoly_compare, DeltaRule, KappaMethod, KappaTable, QBinomial, QOrdering,
    RMode,
};
use seqlab_core::recurrences::{
    full_history_chains, full_history_nonhom_vector, full_history_oracle, order2_closed_fibword, order2_closed_kron,
    order2_nonhom_closed, order2_oracle, Order2Problem,
};
use seqlab_core::suites::instances::{generate_full_history, generate_order2, CoeffFile};
use seqlab_core::suites::{all_findings, render, render_errata_markdown, run_suite, Format, Suite, SuiteConfig};
use seqlab_core::vector::{fib_word_generalized, fib_word_prefix, step_prefix_kron};
use seqlab_core::{Error, Exec, Guards};

#[derive(Parser)]
#[command(name = "seqlab", version, about = "Exact closed forms for recurrences and quadratic-map iterates")]
struct Cli {
    /// Master seed for randomized suites.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,
    /// Memory budget for materialised vectors.
    #[arg(long, global = true, default_value_t = 2 << 30)]
    guard_bytes: u64,
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Evaluate a recurrence term.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Print a coefficient table.
    #[command(subcommand)]
    Table(TableCommand),
    /// Print binary words.
    #[command(subcommand)]
    Words(WordsCommand),
    /// Compare printed formulas with oracle computations.
    #[command(subcommand)]
    Reconcile(ReconcileCommand),
    /// Verdict table for the iterate hypothesis.
    #[command(subcommand)]
    Hypothesis(HypothesisCommand),
    /// Generate documentation.
    #[command(subcommand)]
    Docs(DocsCommand),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    suite: String,
    #[arg(long)]
    cases: Option<u32>,
    #[arg(long)]
    n_max: Option<u32>,
    /// Use the printed step-coefficient binomial (thm4).
    #[arg(long)]
    paper_verbatim: bool,
    /// Vector supplying the prefix (hypothesis).
    #[arg(long, value_enum, default_value_t = LambdaArg::Symbolic)]
    lambda: LambdaArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LambdaArg {
    Symbolic,
    #[value(name = "2")]
    Two,
}

impl LambdaArg {
    fn mode(self) -> RMode {
        match self {
            LambdaArg::Symbolic => RMode::Lambda,
            LambdaArg::Two => RMode::Two,
        }
    }
}

#[derive(Subcommand)]
enum EvalCommand {
    /// `x_n = a_n x_{n-1} + b_n x_{n-2} (+ c_n)`.
    Order2 {
        #[arg(long, value_enum)]
        method: Order2Method,
        #[arg(long)]
        n: u64,
        /// Coefficient file, or `gen:ones`, `gen:index`, `gen:random:SEED`, `gen:symbolic`.
        #[arg(long)]
        coeffs: String,
    },
    /// `w_n = Σ_j a_{n,j} w_j (+ c_n)`, reporting `Σ_{j≤n} w_j`.
    Fullhistory {
        #[arg(long, value_enum)]
        method: FullMethod,
        #[arg(long)]
        n: usize,
        /// `gen:ones`, `gen:random:SEED` or `gen:symbolic`.
        #[arg(long)]
        coeffs: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Order2Method {
    Oracle,
    Fibword,
    Kron,
    Nonhom,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FullMethod {
    Oracle,
    Chains,
    Nonhom,
}

#[derive(Subcommand)]
enum TableCommand {
    /// Coefficients `g_{n,k}` of the `n`-th iterate of `λ(x+1)x`.
    Pcoeffs {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = PMethod::Closed)]
        method: PMethod,
        #[arg(long)]
        paper_verbatim: bool,
    },
    /// `κ_{n,k}` for `1 ≤ n ≤ N`; rows `n`, columns `k`.
    Kappa {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = KSource::Direct)]
        source: KSource,
        /// δ rule for the recursion, e.g. `+2^n-1,-2^n-2`.
        #[arg(long)]
        rule: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PMethod {
    Oracle,
    Recursion,
    Closed,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KSource {
    Direct,
    Recursion,
}

#[derive(Subcommand)]
enum WordsCommand {
    /// Prefix of the Fibonacci word.
    Fib {
        #[arg(long)]
        len: usize,
    },
    /// Prefix of the generalized word `f_k`.
    Generalized {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        len: usize,
    },
    /// Prefix of the periodic step pattern `0_l ⌢ 1_m`.
    Step {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        len: usize,
    },
}

#[derive(Subcommand)]
enum ReconcileCommand {
    Kappa {
        #[arg(long)]
        n: u32,
        /// `;`-separated δ rules.
        #[arg(long)]
        candidates: Option<String>,
    },
    Genpoly {
        #[arg(long)]
        k: u32,
        /// Restrict to one ordering.
        #[arg(long)]
        ordering: Option<String>,
    },
    Eq2 {
        #[arg(long)]
        n: u32,
    },
}

#[derive(Subcommand)]
enum HypothesisCommand {
    F {
        #[arg(long)]
        n_max: u32,
        #[arg(long, value_enum, default_value_t = LambdaArg::Symbolic)]
        lambda: LambdaArg,
    },
}

#[derive(Subcommand)]
enum DocsCommand {
    /// Write the errata ledger as markdown.
    Errata {
        #[arg(long, default_value = "ERRATA.md")]
        out: PathBuf,
    },
}

struct Ctx {
    format: Format,
    guards: Guards,
    exec: Exec,
    seed: u64,
}

enum Failure {
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(String, u8), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = if cli.json {
        Format::Json
    } else {
        match cli.format {
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
            OutFormat::Text => Format::Text,
        }
    };
    let ctx = Ctx {
        format,
        guards: Guards::from_bytes(cli.guard_bytes),
        exec: if cli.sequential { Exec::Sequential } else { Exec::Parallel },
        seed: cli.seed,
    };
    match dispatch(&ctx, cli.command) {
        Ok((out, code)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::from(code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(ctx: &Ctx, command: Command) -> Outcome {
    match command {
        Command::Verify(args) => verify(ctx, args),
        Command::Eval(cmd) => eval(ctx, cmd),
        Command::Table(cmd) => table(ctx, cmd),
        Command::Words(cmd) => words(ctx, cmd),
        Command::Reconcile(cmd) => reconcile(ctx, cmd),
        Command::Hypothesis(HypothesisCommand::F { n_max, lambda }) => {
            let rep = f_hypothesis_check(n_max, lambda.mode(), &ctx.guards)?;
            match ctx.format {
                Format::Text => Ok((
                    rep.rows
                        .iter()
                        .map(|r| {
                            format!(
                                "n={} {} {}: f_n = {}\n",
                                r.n,
                                r.rule,
                                if r.holds { "holds" } else { "fails" },
                                r.f_n
                            )
                        })
                        .collect(),
                    0,
                )),
                _ => Ok((to_json(&rep), 0)),
            }
        }
        Command::Docs(DocsCommand::Errata { out }) => {
            let md = render_errata_markdown(&all_findings(&ctx.guards)?);
            fs::write(&out, md).map_err(|e| Failure::Usage(format!("{}: {e}", out.display())))?;
            Ok((format!("{}\n", out.display()), 0))
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn verify(ctx: &Ctx, args: VerifyArgs) -> Outcome {
    let suite = Suite::parse(&args.suite)?;
    let mut cfg = SuiteConfig::new(suite);
    cfg.master_seed = ctx.seed;
    cfg.format = ctx.format;
    cfg.guards = ctx.guards.clone();
    cfg.exec = ctx.exec;
    cfg.paper_verbatim = args.paper_verbatim;
    cfg.r_mode = args.lambda.mode();
    if let Some(c) = args.cases {
        cfg.cases = c;
    }
    if let Some(n) = args.n_max {
        cfg.n_max = n;
    }
    let report = run_suite(&cfg)?;
    Ok((render(&report, ctx.format), report.exit_code() as u8))
}

fn load_order2(spec: &str, n: u64, with_c: bool) -> Result<Order2Problem<RingElem>, Failure> {
    if let Some(name) = spec.strip_prefix("gen:") {
        return Ok(generate_order2(name, n, with_c)?);
    }
    let text = fs::read_to_string(spec).map_err(|e| Failure::Usage(format!("{spec}: {e}")))?;
    let file: CoeffFile = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{spec}: {e}")))?;
    let p = file.to_problem()?;
    Ok(Order2Problem {
        x1: RingElem::constant(p.x1),
        x2: RingElem::constant(p.x2),
        a: p.a.map(|v| RingElem::constant(v.clone())),
        b: p.b.map(|v| RingElem::constant(v.clone())),
        c: p.c.map(|c| c.map(|v| RingElem::constant(v.clone()))),
    })
}

fn value_output(ctx: &Ctx, header: Value, value: &RingElem) -> String {
    match ctx.format {
        Format::Text => format!("{value}\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["xexp", "lexp", "num", "den"]).expect("in memory");
            for t in value.to_json_terms() {
                w.write_record([t.xexp.to_string(), t.lexp.to_string(), t.num, t.den]).expect("in memory");
            }
            String::from_utf8(w.into_inner().expect("in memory")).expect("utf-8")
        }
        Format::Json => {
            let mut obj = header;
            obj["value"] = Value::String(value.to_string());
            obj["terms"] = serde_json::to_value(value).expect("serializable");
            to_json(&obj)
        }
    }
}

fn eval(ctx: &Ctx, cmd: EvalCommand) -> Outcome {
    match cmd {
        EvalCommand::Order2 { method, n, coeffs } => {
            let p = load_order2(&coeffs, n, method == Order2Method::Nonhom)?;
            let (name, value) = match method {
                Order2Method::Oracle => ("oracle", order2_oracle(&p, n)?),
                Order2Method::Fibword => ("fibword", order2_closed_fibword(&p, n, ctx.exec)?),
                Order2Method::Kron => ("kron", order2_closed_kron(&p, n, ctx.exec)?),
                Order2Method::Nonhom => ("nonhom", order2_nonhom_closed(&p, n)?),
            };
            Ok((value_output(ctx, json!({"recurrence": "order2", "method": name, "n": n}), &value), 0))
        }
        EvalCommand::Fullhistory { method, n, coeffs } => {
            let Some(name) = coeffs.strip_prefix("gen:") else {
                return Err(Failure::Usage("full-history coefficients must be a gen: generator".into()));
            };
            let p = generate_full_history(name, n.max(1), method == FullMethod::Nonhom)?;
            let (label, value) = match method {
                FullMethod::Oracle => ("oracle", full_history_oracle(&p, n)?),
                FullMethod::Chains => ("chains", full_history_chains(&p, n, ctx.exec)?.value),
                FullMethod::Nonhom => ("nonhom", full_history_nonhom_vector(&p, n)?),
            };
            Ok((value_output(ctx, json!({"recurrence": "fullhistory", "method": label, "n": n}), &value), 0))
        }
    }
}

fn pcoeffs_csv(table: &CoeffTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "k", "lexp", "coefficient"]).expect("in memory");
    for (k, g) in &table.entries {
        for t in g.to_json_terms() {
            let coeff = if t.den == "1" { t.num.clone() } else { format!("{}/{}", t.num, t.den) };
            w.write_record([table.n.to_string(), k.to_string(), t.lexp.to_string(), coeff]).expect("in memory");
        }
    }
    String::from_utf8(w.into_inner().expect("in memory")).expect("utf-8")
}

fn kappa_csv(tables: &[KappaTable]) -> String {
    let width = tables.iter().map(|t| t.counts.len()).max().unwrap_or(0);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["n".to_string()];
    header.extend((0..width).map(|k| format!("k{k}")));
    w.write_record(&header).expect("in memory");
    for t in tables {
        let mut row = vec![t.n.to_string()];
        row.extend((0..width).map(|k| t.get(k).to_string()));
        w.write_record(&row).expect("in memory");
    }
    String::from_utf8(w.into_inner().expect("in memory")).expect("utf-8")
}

fn table(ctx: &Ctx, cmd: TableCommand) -> Outcome {
    match cmd {
        TableCommand::Pcoeffs { n, method, paper_verbatim } => {
            let variant = if paper_verbatim { QBinomial::PaperVerbatim } else { QBinomial::Corrected };
            let t = match method {
                PMethod::Oracle => CoeffTable::from_polynomial(n, &p_iterate_oracle(n, &ctx.guards)?)?,
                PMethod::Recursion => p_coeffs_recursion(n, variant, &ctx.guards)?,
                PMethod::Closed => p_coeffs_closed(n, ctx.exec, &ctx.guards)?,
            };
            Ok((
                match ctx.format {
                    Format::Csv => pcoeffs_csv(&t),
                    Format::Text => t.entries.iter().map(|(k, g)| format!("g_{{{n},{k}}} = {g}\n")).collect(),
                    Format::Json => to_json(&t),
                },
                0,
            ))
        }
        TableCommand::Kappa { n, source, rule } => {
            let tables = match source {
                KSource::Direct => (1..=n)
                    .map(|m| kappa_direct(m, KappaMethod::Symbolic, &ctx.guards))
                    .collect::<Result<Vec<_>, _>>()?,
                KSource::Recursion => {
                    let rule = match rule {
                        Some(r) => DeltaRule::parse(&r)?,
                        None => DeltaRule::printed(),
                    };
                    kappa_recursion_with(n, &rule, &ctx.guards)?
                }
            };
            Ok((
                match ctx.format {
                    Format::Csv => kappa_csv(&tables),
                    Format::Text => tables
                        .iter()
                        .map(|t| {
                            let row: Vec<String> = t.counts.iter().map(ToString::to_string).collect();
                            format!("n={}: {}\n", t.n, row.join(" "))
                        })
                        .collect(),
                    Format::Json => to_json(&tables),
                },
                0,
            ))
        }
    }
}

fn words(ctx: &Ctx, cmd: WordsCommand) -> Outcome {
    let (name, word) = match cmd {
        WordsCommand::Fib { len } => ("fib".to_string(), fib_word_prefix(len)),
        WordsCommand::Generalized { k, len } => (format!("fib{k}"), fib_word_generalized(k, len)?),
        WordsCommand::Step { l, m, len } => {
            if l + m == 0 {
                return Err(Failure::Usage("l + m must be positive".into()));
            }
            (format!("step({l},{m})"), step_prefix_kron(l, m, len))
        }
    };
    Ok((
        match ctx.format {
            Format::Json => to_json(&json!({"word": name, "len": word.len(), "bits": word.to_string()})),
            _ => format!("{word}\n"),
        },
        0,
    ))
}

fn reconcile(ctx: &Ctx, cmd: ReconcileCommand) -> Outcome {
    match cmd {
        ReconcileCommand::Kappa { n, candidates } => {
            let rules = match candidates {
                Some(text) => text.split(';').map(DeltaRule::parse).collect::<Result<Vec<_>, _>>()?,
                None => DeltaRule::default_candidates(),
            };
            let rep = kappa_reconcile(n, &rules, &ctx.guards)?;
            Ok((
                match ctx.format {
                    Format::Text => {
                        let mut s = String::new();
                        for c in &rep.printed_vs_direct {
                            s += &format!(
                                "n={}: printed recursion {}\n",
                                c.n,
                                if c.agree { "agrees" } else { "differs" }
                            );
                        }
                        for c in &rep.candidates {
                            s += &match c.first_failure {
                                None => format!("candidate {}: matches for n <= {}\n", c.rule, rep.n_max),
                                Some(f) => format!("candidate {}: fails at n={f}\n", c.rule),
                            };
                        }
                        s
                    }
                    _ => to_json(&rep),
                },
                0,
            ))
        }
        ReconcileCommand::Genpoly { k, ordering } => {
            let orderings = match ordering {
                Some(o) => vec![QOrdering::parse(&o).ok_or_else(|| Failure::Usage(format!("unknown ordering `{o}`")))?],
                None => QOrdering::ALL.to_vec(),
            };
            let reports =
                orderings.into_iter().map(|o| q_genpoly_compare(k, o, &ctx.guards)).collect::<Result<Vec<_>, _>>()?;
            Ok((
                match ctx.format {
                    Format::Text => reports
                        .iter()
                        .map(|r| {
                            format!(
                                "k={} {}: {} (difference {})\n",
                                r.k,
                                r.ordering.name(),
                                if r.equal { "equal" } else { "differs" },
                                r.difference
                            )
                        })
                        .collect(),
                    _ => to_json(&reports),
                },
                0,
            ))
        }
        ReconcileCommand::Eq2 { n } => {
            let rep = eq2_reconcile(2..=n, &ctx.guards)?;
            Ok((
                match ctx.format {
                    Format::Text => format!("consistent: {}\n", rep.consistent.join("; ")),
                    _ => to_json(&rep),
                },
                0,
            ))
        }
    }
}
