use std::io::Write;

use clap::{Args, Subcommand};
use clph::constraint::dnf;
use clph::oracle::{brute_solutions, enum_ground, matches, Bounds, Domain, Ground};
use clph::parser::{parse_constraint, parse_hedge, parse_regex};
use clph::solver::sol;
use clph::syntax::{Signature, Symbol};

use crate::Failure;

#[derive(Args)]
pub(crate) struct SigArgs {
    /// Comma-separated ordered symbols.
    #[arg(long, value_delimiter = ',', default_value = "a,b")]
    ordered: Vec<String>,
    /// Comma-separated unordered symbols.
    #[arg(long, value_delimiter = ',')]
    unordered: Vec<String>,
    #[arg(long, default_value_t = 2)]
    depth: usize,
    #[arg(long, default_value_t = 2)]
    width: usize,
    #[arg(long, default_value_t = 4)]
    size: usize,
}

impl SigArgs {
    fn signature(&self) -> Signature {
        let mut sig = Signature::new();
        sig.ordered.extend(self.ordered.iter().map(|s| Symbol::new(s.trim())));
        sig.unordered.extend(self.unordered.iter().map(|s| Symbol::new(s.trim())));
        sig
    }

    fn bounds(&self) -> Bounds {
        Bounds::new(self.depth, self.width, self.size)
    }
}

#[derive(Subcommand)]
pub(crate) enum DevCommand {
    /// List the ground hedges within bounds.
    Enum(SigArgs),
    /// Compare the bounded solutions of a constraint and of its normal form.
    Brute {
        constraint: String,
        #[command(flatten)]
        sig: SigArgs,
    },
    /// Decide ground membership with the structural matcher.
    Member {
        hedge: String,
        regex: String,
        #[arg(long, value_delimiter = ',')]
        unordered: Vec<String>,
    },
}

fn show(g: &clph::oracle::Grounding) -> String {
    let parts: Vec<String> = g
        .iter()
        .map(|(v, val)| match val {
            Ground::Hedge(h) => format!("{v} = {h}"),
            Ground::Functor(f) => format!("{v} = {f}"),
        })
        .collect();
    format!("{{{}}}", parts.join(", "))
}

pub(crate) fn run(cmd: DevCommand) -> Result<(), Failure> {
    match cmd {
        DevCommand::Enum(a) => {
            // The list can be long; stop quietly when the reader closes the pipe.
            let mut out = std::io::stdout().lock();
            for h in enum_ground(&a.signature(), a.bounds()) {
                if writeln!(out, "{h}").is_err() {
                    break;
                }
            }
        }
        DevCommand::Brute { constraint, sig: a } => {
            let sig = a.signature();
            let f = parse_constraint(&constraint, &sig).map_err(|e| Failure::usage(format!("constraint:{e}")))?;
            let d = dnf(&f).map_err(|e| Failure::usage(e.to_string()))?;
            let solved = sol(&f, &sig).map_err(|e| Failure::usage(e.to_string()))?;
            let keep: Vec<_> = d.vars().into_iter().collect();
            let dom = Domain::new(&sig, a.bounds());
            let before = brute_solutions(&d, &keep, &sig, &dom);
            let after = brute_solutions(&solved, &keep, &sig, &dom);
            println!("normal form: {solved}");
            println!("solutions: {} before, {} after", before.len(), after.len());
            for g in before.difference(&after) {
                println!("lost: {}", show(g));
            }
            for g in after.difference(&before) {
                println!("gained: {}", show(g));
            }
        }
        DevCommand::Member { hedge, regex, unordered } => {
            let sig = crate::signature_with(&unordered);
            let h = parse_hedge(&hedge, &sig).map_err(|e| Failure::usage(format!("hedge:{e}")))?;
            let r = parse_regex(&regex).map_err(|e| Failure::usage(format!("regex:{e}")))?;
            if !h.is_ground() {
                return Err(Failure::usage("the hedge must be ground"));
            }
            println!("{}", matches(h.items(), &r, &sig));
        }
    }
    Ok(())
}
