mod dev;
mod repl;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use clph::constraint::Formula;
use clph::engine::{Answer, Event, Outcome, Program, Search, SearchOptions};
use clph::modes::{check_program, is_kif_program};
use clph::parser::{parse_constraint, parse_program_with, parse_query, Source};
use clph::solver::{sol_with, SolveOptions, TraceEvent};
use clph::syntax::{Signature, VarGen};

#[derive(Parser)]
#[command(name = "clph", version, about = "Constraint logic programming over hedges")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum TraceLevel {
    /// Rule names and positions.
    Brief,
    /// Also the constraint after every step.
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Load a program and run a query.
    Run {
        file: PathBuf,
        #[arg(short, long)]
        query: String,
        /// Print every answer.
        #[arg(long, conflicts_with = "n")]
        all: bool,
        /// Print at most K answers.
        #[arg(short = 'n', value_name = "K")]
        n: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        max_depth: usize,
        #[arg(long, value_enum, num_args = 0..=1, require_equals = true, default_missing_value = "brief")]
        trace: Option<TraceLevel>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Keep disjunctive stores and dead bindings, and explore every
        /// proof of ground subgoals.
        #[arg(long)]
        full_search: bool,
    },
    /// Parse a program and run static checks.
    Check {
        /// Check well-modedness against the `:- mode` declarations.
        #[arg(long)]
        modes: bool,
        /// Check that every clause is in KIF form.
        #[arg(long)]
        kif: bool,
        file: PathBuf,
    },
    /// Solve a constraint and print its normal form.
    Solve {
        constraint: String,
        /// Comma-separated unordered symbols.
        #[arg(long, value_delimiter = ',')]
        unordered: Vec<String>,
        #[arg(long, value_enum, num_args = 0..=1, require_equals = true, default_missing_value = "brief")]
        trace: Option<TraceLevel>,
    },
    /// Interactive session.
    Repl { files: Vec<PathBuf> },
    /// Oracle utilities for debugging.
    #[command(subcommand)]
    Dev(dev::DevCommand),
}

/// A failure that ends the command with the given exit code.
pub(crate) struct Failure {
    pub code: u8,
    pub msg: String,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure { code: 1, msg: msg.into() }
    }
}

pub(crate) fn load(path: &Path, base: &Signature) -> Result<Source, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    parse_program_with(&text, base).map_err(|e| Failure::usage(format!("{}:{e}", path.display())))
}

pub(crate) fn signature_with(unordered: &[String]) -> Signature {
    let mut sig = Signature::new();
    for s in unordered {
        sig.unordered.insert(clph::syntax::Symbol::new(s.trim()));
    }
    sig
}

pub(crate) fn trace_line(ev: &TraceEvent, level: TraceLevel) -> String {
    let mut s = format!("{} @ disjunct={} literal={}", ev.rule, ev.disjunct, ev.literal);
    if level == TraceLevel::Full {
        let _ = write!(s, "\n    {}", ev.after);
    }
    s
}

pub(crate) fn event_line(ev: &Event, level: TraceLevel) -> String {
    match ev {
        Event::Reduce { depth, literal, clause: Some(k) } => format!("[{depth}] {literal} by clause {k}"),
        Event::Reduce { depth, literal, clause: None } => format!("[{depth}] {literal}"),
        Event::Solver(t) => format!("    {}", trace_line(t, level).replace('\n', "\n    ")),
    }
}

fn answer_json(a: &Answer) -> serde_json::Value {
    let bindings: serde_json::Map<String, serde_json::Value> =
        a.bindings.iter().map(|(v, val)| (v.to_string(), val.to_string().into())).collect();
    let residual: Vec<serde_json::Value> = a.residual.iter().map(|p| p.to_string().into()).collect();
    serde_json::json!({ "bindings": bindings, "residual": residual })
}

fn run(
    file: &Path,
    query: &str,
    limit: Option<usize>,
    max_depth: usize,
    trace: Option<TraceLevel>,
    format: Format,
    full_search: bool,
) -> Result<(), Failure> {
    let src = load(file, &Signature::new())?;
    let goal = parse_query(query, &src.program.sig).map_err(|e| Failure::usage(format!("query:{e}")))?;
    let opts = SearchOptions { max_depth, max_answers: limit, trace: trace.is_some(), gc: !full_search, prune_ground: !full_search, split: !full_search };
    let mut search = Search::new(&src.program, goal, opts);
    let mut found = 0;
    let mut cut = false;
    while let Some(o) = search.next() {
        if let Some(level) = trace {
            for ev in search.events.drain(..) {
                println!("{}", event_line(&ev, level));
            }
        }
        match o {
            Outcome::DepthExceeded => cut = true,
            Outcome::Answer(a) => {
                match format {
                    Format::Json => println!("{}", answer_json(&a)),
                    Format::Text => {
                        if found > 0 {
                            println!();
                        }
                        println!("{a}");
                    }
                }
                found += 1;
            }
        }
    }
    if cut {
        eprintln!("warning: some branches exceeded the depth limit of {max_depth}");
    }
    if found == 0 && format == Format::Text {
        println!("no");
    }
    Ok(())
}

fn check(file: &Path, modes: bool, kif: bool) -> Result<(), Failure> {
    let src = load(file, &Signature::new())?;
    let mut failed = Vec::new();
    if modes {
        let r = check_program(&src.program);
        for w in &r.warnings {
            eprintln!("warning: {w}");
        }
        if r.ok {
            println!("well-moded");
        } else {
            failed.push(format!("not well-moded: {}", r.violation.unwrap_or_default()));
        }
    }
    if kif {
        if is_kif_program(&src.program) {
            println!("KIF program");
        } else {
            failed.push("not a KIF program".to_string());
        }
    }
    if !modes && !kif {
        println!("ok: {} clauses", src.program.clauses.len());
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure { code: 2, msg: failed.join("\n") })
    }
}

pub(crate) fn solve_text(f: &Formula, sig: &Signature, trace: Option<TraceLevel>) -> Result<Vec<String>, Failure> {
    let opts = SolveOptions { record_trace: trace.is_some(), ..SolveOptions::default() };
    let out = sol_with(f, sig, &mut VarGen::new(), &opts).map_err(|e| Failure::usage(e.to_string()))?;
    let mut lines = Vec::new();
    if let Some(level) = trace {
        lines.extend(out.trace.iter().map(|ev| trace_line(ev, level)));
    }
    if out.exhausted {
        lines.push("warning: step limit reached".to_string());
    }
    lines.push(out.result.to_string());
    Ok(lines)
}

fn solve(constraint: &str, unordered: &[String], trace: Option<TraceLevel>) -> Result<(), Failure> {
    let sig = signature_with(unordered);
    let f = parse_constraint(constraint, &sig).map_err(|e| Failure::usage(format!("constraint:{e}")))?;
    for line in solve_text(&f, &sig, trace)? {
        println!("{line}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Run { file, query, all, n, max_depth, trace, format, full_search } => {
            let limit = if all { None } else { Some(n.unwrap_or(1)) };
            run(&file, &query, limit, max_depth, trace, format, full_search)
        }
        Command::Check { modes, kif, file } => check(&file, modes, kif),
        Command::Solve { constraint, unordered, trace } => solve(&constraint, &unordered, trace),
        Command::Repl { files } => {
            let mut program = Program::default();
            files.iter().try_for_each(|f| {
                let src = load(f, &program.sig)?;
                program.extend(src.program);
                Ok(())
            })
            .and_then(|()| repl::run(program))
        }
        Command::Dev(cmd) => dev::run(cmd),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
