use std::io::{self, BufRead, Write};
use std::path::Path;

use clph::engine::{Outcome, Program, Search, SearchOptions};
use clph::modes::{check_program, is_kif_program};
use clph::parser::{parse_constraint, parse_query};

use crate::{event_line, load, solve_text, Failure, TraceLevel};

const HELP: &str = "\
?- <goal>.             run a query; after each answer type ; for more
:load <file>           add the clauses and declarations of a file
:modes                 check well-modedness of the loaded program
:kif                   check that the loaded program is in KIF form
:trace on|off|full     toggle derivation traces
:solve <constraint>    normalize a constraint with the solver
:help                  this text
:quit                  leave";

struct Session {
    program: Program,
    trace: Option<TraceLevel>,
}

fn read_line(input: &mut impl BufRead) -> io::Result<Option<String>> {
    let mut buf = String::new();
    if input.read_line(&mut buf)? == 0 {
        return Ok(None);
    }
    Ok(Some(buf.trim().to_string()))
}

impl Session {
    fn command(&mut self, cmd: &str, arg: &str) -> bool {
        match cmd {
            "quit" | "q" => return false,
            "help" => println!("{HELP}"),
            "load" => match load(Path::new(arg), &self.program.sig) {
                Ok(src) => {
                    println!("loaded {} clauses", src.program.clauses.len());
                    self.program.extend(src.program);
                }
                Err(e) => println!("error: {}", e.msg),
            },
            "modes" => {
                let r = check_program(&self.program);
                for w in &r.warnings {
                    println!("warning: {w}");
                }
                match r.violation {
                    None => println!("well-moded"),
                    Some(v) => println!("not well-moded: {v}"),
                }
            }
            "kif" => println!("{}", if is_kif_program(&self.program) { "KIF program" } else { "not a KIF program" }),
            "trace" => match arg {
                "on" => self.trace = Some(TraceLevel::Brief),
                "full" => self.trace = Some(TraceLevel::Full),
                "off" => self.trace = None,
                _ => println!("usage: :trace on|off|full"),
            },
            "solve" => match parse_constraint(arg, &self.program.sig) {
                Ok(f) => match solve_text(&f, &self.program.sig, self.trace) {
                    Ok(lines) => lines.iter().for_each(|l| println!("{l}")),
                    Err(Failure { msg, .. }) => println!("error: {msg}"),
                },
                Err(e) => println!("error: {e}"),
            },
            _ => println!("unknown command :{cmd}; try :help"),
        }
        true
    }

    fn query(&mut self, text: &str, input: &mut impl BufRead) -> io::Result<()> {
        let goal = match parse_query(text, &self.program.sig) {
            Ok(g) => g,
            Err(e) => {
                println!("error: {e}");
                return Ok(());
            }
        };
        let opts = SearchOptions { trace: self.trace.is_some(), ..SearchOptions::default() };
        let mut search = Search::new(&self.program, goal, opts);
        let mut found = false;
        while let Some(o) = search.next() {
            if let Some(level) = self.trace {
                for ev in search.events.drain(..) {
                    println!("{}", event_line(&ev, level));
                }
            }
            let Outcome::Answer(a) = o else {
                println!("warning: depth limit reached on a branch");
                continue;
            };
            found = true;
            print!("{a} ");
            io::stdout().flush()?;
            if read_line(input)?.as_deref() != Some(";") {
                println!(".");
                return Ok(());
            }
        }
        println!("{}", if found { "no more answers" } else { "no" });
        Ok(())
    }
}

pub(crate) fn run(program: Program) -> Result<(), Failure> {
    let mut s = Session { program, trace: None };
    let stdin = io::stdin();
    let mut input = stdin.lock();
    let io_err = |e: io::Error| Failure::usage(e.to_string());
    loop {
        print!("?- ");
        io::stdout().flush().map_err(io_err)?;
        let Some(line) = read_line(&mut input).map_err(io_err)? else { break };
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(':').filter(|r| !r.starts_with('-')) {
            let (cmd, arg) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            if !s.command(cmd, arg.trim()) {
                break;
            }
            continue;
        }
        s.query(&line, &mut input).map_err(io_err)?;
    }
    println!();
    Ok(())
}
