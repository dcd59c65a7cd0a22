//! The `acx` command line.

use std::collections::HashMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bench::{generate, BenchParams, Family};
use crate::completion::{Inference, Item, Source, Trace, Verdict, DEFAULT_BUDGET};
use crate::error::EngineError;
use crate::oracle::{oracle_check, OracleBounds, OracleVerdict};
use crate::ordering::OrderingMode;
use crate::problem::{parse_problem, render_problem, Problem, TheoryKind};
use crate::prover::{prove, ProofReport, ProveOptions};
use crate::random::{random_problem, RandomParams};
use crate::samples;

pub const EXIT_VALID: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_ENGINE: i32 = 3;
pub const EXIT_INVALID: i32 = 10;

#[derive(Parser, Debug)]
#[command(
    name = "acx",
    version,
    about = "Ground AC completion modulo linear arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide the goals of a problem file.
    Prove(ProveArgs),
    /// Generate and decide a benchmark instance.
    Bench(BenchArgs),
    /// Replay the bundled examples and cross-check against the oracle.
    Selftest,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrderingArg {
    /// Abstract the input, then use the partial multiset ordering.
    Abstract,
    /// Complete the input as is under a total AC path ordering.
    Direct,
}

impl From<OrderingArg> for OrderingMode {
    fn from(a: OrderingArg) -> Self {
        match a {
            OrderingArg::Abstract => OrderingMode::Abstracted,
            OrderingArg::Direct => OrderingMode::Direct,
        }
    }
}

#[derive(Args, Debug)]
struct EngineArgs {
    /// Print the inference trace as a table.
    #[arg(long)]
    trace: bool,
    /// Also show inferences whose equation was discarded as trivial.
    #[arg(long)]
    trace_all: bool,
    /// Maximum number of inferences.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Term ordering.
    #[arg(long, value_enum, default_value = "abstract")]
    ordering: OrderingArg,
}

#[derive(Args, Debug)]
struct ProveArgs {
    file: PathBuf,
    /// Override the theory declared in the file (empty or lia).
    #[arg(long)]
    theory: Option<TheoryKind>,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// c1 or c2.
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    /// Write the generated problem to this file.
    #[arg(long)]
    emit: Option<PathBuf>,
    #[command(flatten)]
    engine: EngineArgs,
}

pub fn verdict_text(v: Verdict) -> &'static str {
    match v {
        Verdict::Valid => "valid",
        Verdict::ValidInconsistent => "valid (inconsistent hypotheses)",
        Verdict::Invalid => "invalid",
    }
}

fn join_refs(refs: &[String]) -> String {
    match refs {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} and {last}", init.join(", ")),
    }
}

/// Renders a trace as a table. Unless `all` is set, chains that ended in a
/// trivial equation are hidden and the remaining rows renumbered. Final
/// rules are shown in bold.
pub fn render_trace(trace: &Trace, final_labels: &[usize], all: bool) -> String {
    let visible: Vec<_> = trace
        .entries
        .iter()
        .filter(|e| all || !e.discharged)
        .collect();
    let number: HashMap<usize, usize> = visible
        .iter()
        .enumerate()
        .map(|(i, e)| (e.step, i + 1))
        .collect();
    let refer = |s: usize| number.get(&s).map_or(format!("#{s}"), |n| n.to_string());
    let mut out =
        String::from("| step | item | justification |\n|------|------|---------------|\n");
    for e in visible {
        let item = match &e.item {
            Item::Rule(r) if final_labels.contains(&e.step) => format!("**{r}**"),
            other => other.to_string(),
        };
        let source = match &e.source {
            Some(Source::Input(s, t)) => format!("{s} ≈ {t}"),
            Some(Source::Step(n)) => refer(*n),
            None => String::new(),
        };
        let refs: Vec<String> = e.rules.iter().map(|r| refer(*r)).collect();
        let name = e.inference.short_name();
        let why = match e.inference {
            Inference::Simplify => format!("{name} {source} by {}", join_refs(&refs)),
            Inference::Compose | Inference::Collapse => {
                format!("{name} {} and {}", refs[0], join_refs(&refs[1..]))
            }
            Inference::Deduce => format!("{name} from {}", join_refs(&refs)),
            Inference::Trivial | Inference::Bottom | Inference::Orient => {
                format!("{name} {source}")
            }
        };
        out.push_str(&format!("| {} | {item} | {why} |\n", number[&e.step]));
    }
    out
}

fn report(r: &ProofReport, engine: &EngineArgs, out: &mut dyn Write) -> std::io::Result<i32> {
    if engine.trace || engine.trace_all {
        let labels = r.completed.rule_labels();
        write!(
            out,
            "{}",
            render_trace(&r.completed.trace, &labels, engine.trace_all)
        )?;
        for (k, t) in r.context.k_bindings() {
            writeln!(out, "where {k} = {t}")?;
        }
        writeln!(out)?;
    }
    if r.goal_verdicts.len() > 1 {
        for (i, v) in r.goal_verdicts.iter().enumerate() {
            writeln!(out, "goal {}: {}", i + 1, verdict_text(*v))?;
        }
    }
    writeln!(out, "result: {}", verdict_text(r.verdict))?;
    writeln!(out, "rules: {}", r.completed.rules.len())?;
    writeln!(out, "time_ms: {}", r.elapsed.as_millis())?;
    Ok(match r.verdict {
        Verdict::Invalid => EXIT_INVALID,
        _ => EXIT_VALID,
    })
}

fn decide(
    problem: &Problem,
    theory: Option<TheoryKind>,
    engine: &EngineArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<i32> {
    let opts = ProveOptions {
        mode: engine.ordering.into(),
        budget: engine.budget,
        theory,
    };
    match prove(problem, &opts) {
        Ok(r) => report(&r, engine, out),
        Err(e) => {
            let hint = match e {
                EngineError::BudgetExceeded(_) | EngineError::RewriteBudget(..) => {
                    " (raise --budget)"
                }
                _ => "",
            };
            writeln!(err, "error: {e}{hint}")?;
            Ok(EXIT_ENGINE)
        }
    }
}

fn prove_cmd(args: &ProveArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let text = match std::fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => {
            writeln!(err, "error: cannot read {}: {e}", args.file.display())?;
            return Ok(EXIT_PARSE);
        }
    };
    let problem = match parse_problem(&text) {
        Ok(p) => p,
        Err(e) => {
            writeln!(err, "{}:{e}", args.file.display())?;
            return Ok(EXIT_PARSE);
        }
    };
    decide(&problem, args.theory, &args.engine, out, err)
}

fn bench_cmd(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let params = match BenchParams::new(args.n, args.d) {
        Ok(p) => p,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_USAGE);
        }
    };
    let problem = generate(args.family, params);
    if let Some(path) = &args.emit {
        if let Err(e) = std::fs::write(path, render_problem(&problem)) {
            writeln!(err, "error: cannot write {}: {e}", path.display())?;
            return Ok(EXIT_USAGE);
        }
    }
    decide(&problem, None, &args.engine, out, err)
}

struct Check {
    name: String,
    failure: Option<String>,
}

fn selftest_checks() -> Vec<Check> {
    let mut checks = Vec::new();
    let mut push = |name: &str, failure: Option<String>| {
        checks.push(Check {
            name: name.to_string(),
            failure,
        })
    };
    let run = |text: &str, mode: OrderingMode| {
        let p = parse_problem(text).map_err(|e| e.to_string())?;
        let opts = ProveOptions {
            mode,
            ..Default::default()
        };
        prove(&p, &opts).map(|r| (p, r)).map_err(|e| e.to_string())
    };
    let expect =
        |text: &str, mode: OrderingMode, want: Verdict, rules: Option<usize>| match run(text, mode)
        {
            Err(e) => Some(e),
            Ok((p, r)) => {
                let oracle = oracle_check(&p, &OracleBounds::default()).verdict();
                if r.verdict != want {
                    Some(format!("got {}", verdict_text(r.verdict)))
                } else if rules.is_some_and(|n| n != r.completed.rules.len()) {
                    Some(format!("got {} rules", r.completed.rules.len()))
                } else if (oracle == OracleVerdict::Derivable) != want.is_valid() {
                    Some(format!("oracle says {oracle:?}"))
                } else {
                    None
                }
            }
        };
    push(
        "ground AC example, 5 rules",
        expect(
            samples::GROUND_AC,
            OrderingMode::Abstracted,
            Verdict::Valid,
            Some(5),
        ),
    );
    push(
        "running example, abstracted",
        expect(
            samples::RUNNING,
            OrderingMode::Abstracted,
            Verdict::Valid,
            None,
        ),
    );
    let labels = match run(samples::RUNNING, OrderingMode::Direct) {
        Ok((_, r))
            if r.verdict == Verdict::Valid
                && r.completed.rule_labels() == samples::RUNNING_DIRECT_LABELS =>
        {
            None
        }
        Ok((_, r)) => Some(format!(
            "{} with rules {:?}",
            verdict_text(r.verdict),
            r.completed.rule_labels()
        )),
        Err(e) => Some(e),
    };
    push("running example, direct, final rule labels", labels);
    push(
        "inconsistent hypotheses",
        expect(
            samples::INCONSISTENT,
            OrderingMode::Abstracted,
            Verdict::ValidInconsistent,
            None,
        ),
    );
    push(
        "invalid goal",
        expect(
            samples::INVALID,
            OrderingMode::Abstracted,
            Verdict::Invalid,
            None,
        ),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut bad = Vec::new();
    for i in 0..50 {
        let p = random_problem(&mut rng, &RandomParams::default());
        let oracle = oracle_check(&p, &OracleBounds::default());
        if oracle.truncated {
            continue;
        }
        match prove(&p, &ProveOptions::default()) {
            Ok(r) if r.verdict.is_valid() == (oracle.verdict() == OracleVerdict::Derivable) => {}
            Ok(_) => bad.push(format!("#{i} disagrees")),
            Err(e) => bad.push(format!("#{i}: {e}")),
        }
    }
    push(
        "50 random problems agree with the oracle",
        (!bad.is_empty()).then(|| bad.join("; ")),
    );
    checks
}

fn selftest_cmd(out: &mut dyn Write) -> std::io::Result<i32> {
    let checks = selftest_checks();
    let failed = checks.iter().filter(|c| c.failure.is_some()).count();
    for c in &checks {
        match &c.failure {
            None => writeln!(out, "ok   {}", c.name)?,
            Some(why) => writeln!(out, "FAIL {}: {why}", c.name)?,
        }
    }
    writeln!(out, "{} passed, {failed} failed", checks.len() - failed)?;
    Ok(if failed == 0 { EXIT_VALID } else { EXIT_USAGE })
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_VALID
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Prove(a) => prove_cmd(a, out, err),
        Command::Bench(a) => bench_cmd(a, out, err),
        Command::Selftest => selftest_cmd(out),
    };
    result.unwrap_or(EXIT_USAGE)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(args.iter().copied(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    fn temp_file(name: &str, text: &str) -> PathBuf {
        let p = std::env::temp_dir().join(format!("acx-cli-{}-{name}", std::process::id()));
        std::fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn prove_reports_and_exits() {
        let f = temp_file("g.acx", samples::GROUND_AC);
        let (code, out, _) = run_args(&["acx", "prove", f.to_str().unwrap()]);
        assert_eq!(code, EXIT_VALID);
        assert!(out.contains("result: valid\nrules: 5\ntime_ms: "), "{out}");
        let f = temp_file("i.acx", samples::INVALID);
        let (code, out, _) = run_args(&["acx", "prove", f.to_str().unwrap()]);
        assert_eq!(code, EXIT_INVALID);
        assert!(out.contains("result: invalid"));
        let f = temp_file("c.acx", samples::INCONSISTENT);
        let (code, out, _) = run_args(&["acx", "prove", f.to_str().unwrap()]);
        assert_eq!(code, EXIT_VALID);
        assert!(out.contains("result: valid (inconsistent hypotheses)"));
    }

    #[test]
    fn trace_table_for_the_ground_example() {
        let f = temp_file("t.acx", samples::GROUND_AC);
        let (_, out, _) = run_args(&["acx", "prove", "--trace", f.to_str().unwrap()]);
        let rows: Vec<&str> = out
            .lines()
            .filter(|l| l.starts_with("| ") && !l.starts_with("| step"))
            .collect();
        assert_eq!(rows.len(), 10, "{out}");
        assert!(
            rows[0].starts_with("| 1 | **u(a1,a4) → a1** | Ori u(a1,a4) ≈ a1"),
            "{out}"
        );
        assert!(rows.iter().any(|r| r.contains("| Ded from ")), "{out}");
    }

    #[test]
    fn error_exit_codes() {
        assert_eq!(run_args(&["acx"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["acx", "prove", "--budget", "x", "f"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_args(&["acx", "prove", "/nonexistent/file.acx"]).0,
            EXIT_PARSE
        );
        let f = temp_file("bad.acx", "(const a)\n(goal (= a b))");
        let (code, _, err) = run_args(&["acx", "prove", f.to_str().unwrap()]);
        assert_eq!(code, EXIT_PARSE);
        assert!(err.contains(":2:"), "{err}");
        let f = temp_file("budget.acx", samples::RUNNING);
        let (code, _, err) = run_args(&["acx", "prove", "--budget", "3", f.to_str().unwrap()]);
        assert_eq!(code, EXIT_ENGINE);
        assert!(err.contains("budget"), "{err}");
        assert_eq!(
            run_args(&["acx", "bench", "c1", "--n", "1", "--d", "3"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_args(&["acx", "--help"]).0, EXIT_VALID);
    }

    #[test]
    fn bench_emits_a_parseable_problem() {
        let path = std::env::temp_dir().join(format!("acx-cli-{}-bench.acx", std::process::id()));
        let (code, out, _) = run_args(&[
            "acx",
            "bench",
            "c2",
            "--n",
            "3",
            "--d",
            "2",
            "--emit",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_VALID, "{out}");
        let p = parse_problem(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(p.goals.len(), 3);
    }

    #[test]
    fn selftest_passes() {
        let (code, out, _) = run_args(&["acx", "selftest"]);
        assert_eq!(code, EXIT_VALID, "{out}");
    }
}
