//! Command-line front end: batch checking, a REPL, the session server and
//! proof export.

use std::io::{self, BufRead, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use taint_hol::engine::protocol::{serve_lines, serve_tcp, Server};
use taint_hol::engine::{parse_tactic, Goal, GoalState};
use taint_hol::frontend::{export_proof, import_proof, parse_judgement, run_script};
use taint_hol::kernel::{replay, Context};
use taint_hol::lattice::{load_lattice, TaintLattice};
use taint_hol::theory::{example_theories, theory_source, TheoryEnv};

#[derive(Parser)]
#[command(name = "taint-hol", version, about = "Higher-order logic with taint-labelled theorems")]
struct Cli {
    /// Lattice document to use instead of the shipped I <= W <= C <= Ch chain.
    #[arg(long, global = true)]
    lattice: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check theory files. Exits 0 iff every file checks.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Interactive proof session on standard input.
    Repl,
    /// Serve the session protocol.
    Serve {
        /// TCP port on 127.0.0.1; 0 picks a free port and prints it.
        #[arg(long, conflicts_with = "stdio")]
        port: Option<u16>,
        /// Serve on standard input and output.
        #[arg(long)]
        stdio: bool,
        /// Extra theory files to load before serving.
        #[arg(long)]
        load: Vec<PathBuf>,
    },
    /// Write the recorded proof of a theorem in text form.
    ExportProof {
        theorem: String,
        #[arg(long)]
        out: PathBuf,
        /// Extra theory files to load first.
        #[arg(long)]
        load: Vec<PathBuf>,
    },
    /// Replay an exported proof through the kernel and print its judgement.
    ReplayProof {
        file: PathBuf,
        #[arg(long)]
        load: Vec<PathBuf>,
    },
}

fn base_env(lattice: &Option<PathBuf>) -> Result<TheoryEnv, String> {
    let lat = match lattice {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            load_lattice(&text).map_err(|e| format!("{}: {e}", p.display()))?
        }
        None => TaintLattice::four_chain(),
    };
    Ok(TheoryEnv::new(lat))
}

/// Reads a script from disk, falling back to the shipped theories by name.
fn read_script(path: &Path) -> Result<String, String> {
    match std::fs::read_to_string(path) {
        Ok(s) => Ok(s),
        Err(e) => path
            .file_name()
            .and_then(|n| theory_source(&n.to_string_lossy()))
            .map(str::to_string)
            .ok_or_else(|| format!("{}: {e}", path.display())),
    }
}

fn load_files(env: TheoryEnv, files: &[PathBuf]) -> Result<TheoryEnv, String> {
    let mut env = env;
    for f in files {
        let src = read_script(f)?;
        env = run_script(&env, &src, &f.to_string_lossy()).map_err(|e| e.to_string())?.0;
    }
    Ok(env)
}

/// The environment for interactive use: the library and examples when they
/// check under the chosen lattice, plus any requested files.
fn session_env(lattice: &Option<PathBuf>, load: &[PathBuf]) -> Result<TheoryEnv, String> {
    let base = base_env(lattice)?;
    let env = match example_theories(&base) {
        Ok(env) => env,
        Err(e) => {
            eprintln!("warning: library not loaded: {e}");
            base
        }
    };
    load_files(env, load)
}

fn check(lattice: &Option<PathBuf>, files: &[PathBuf]) -> Result<bool, String> {
    let base = base_env(lattice)?;
    let mut all_ok = true;
    for f in files {
        let name = f.to_string_lossy();
        let src = match read_script(f) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("{e}");
                all_ok = false;
                continue;
            }
        };
        match run_script(&base, &src, &name) {
            Ok((_, report)) => {
                println!("{name}: ok");
                print!("{report}");
            }
            Err(e) => {
                eprintln!("{e}");
                all_ok = false;
            }
        }
    }
    Ok(all_ok)
}

fn repl(env: TheoryEnv, input: impl BufRead, mut out: impl Write) -> io::Result<()> {
    let mut env = env;
    let mut state: Option<GoalState> = None;
    let show = |out: &mut dyn Write, env: &TheoryEnv, s: &GoalState| -> io::Result<()> {
        let goals = s.render(env);
        if goals.is_empty() {
            return writeln!(out, "no goals; qed to finish");
        }
        for (i, g) in goals.iter().enumerate() {
            writeln!(out, "goal {}:\n{g}", i + 1)?;
        }
        Ok(())
    };
    for line in input.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with("--") {
            continue;
        }
        let (word, rest) = line.split_once(' ').unwrap_or((line, ""));
        match word {
            "quit" | "exit" => break,
            "help" => writeln!(
                out,
                "goal <label> <judgement> | <tactic> | undo | state | qed [name] | load <file> | quit"
            )?,
            "goal" => {
                let (label, text) = rest.trim().split_once(' ').unwrap_or((rest, ""));
                let started = env
                    .label(label)
                    .map_err(|e| e.to_string())
                    .and_then(|l| {
                        let (hyps, concl) = parse_judgement(env.signature(), text).map_err(|e| e.to_string())?;
                        let g = Goal::new(hyps.into_iter().collect::<Context>(), concl, l);
                        GoalState::new(&env, g).map_err(|e| e.to_string())
                    });
                match started {
                    Ok(s) => {
                        show(&mut out, &env, &s)?;
                        state = Some(s);
                    }
                    Err(e) => writeln!(out, "error: {e}")?,
                }
            }
            "load" => match load_files(env.clone(), &[PathBuf::from(rest.trim())]) {
                Ok(e) => {
                    env = e;
                    writeln!(out, "loaded {}", rest.trim())?;
                }
                Err(e) => writeln!(out, "error: {e}")?,
            },
            _ => {
                let Some(s) = state.as_mut() else {
                    writeln!(out, "error: no goal; start one with `goal <label> <formula>`")?;
                    continue;
                };
                let result = match word {
                    "undo" => s.undo().map_err(|e| e.to_string()),
                    "state" => Ok(()),
                    "qed" => {
                        match s.qed(&env) {
                            Ok(th) => {
                                writeln!(out, "{th}")?;
                                if !rest.trim().is_empty() {
                                    match env.add_theorem(rest.trim(), th) {
                                        Ok(e) => env = e,
                                        Err(e) => writeln!(out, "error: {e}")?,
                                    }
                                }
                                state = None;
                            }
                            Err(e) => writeln!(out, "error: {e}")?,
                        }
                        continue;
                    }
                    _ => parse_tactic(line)
                        .map_err(|e| e.to_string())
                        .and_then(|t| s.apply(&env, &t).map_err(|e| e.to_string())),
                };
                match result {
                    Ok(()) => show(&mut out, &env, s)?,
                    Err(e) => writeln!(out, "error: {e}")?,
                }
            }
        }
        out.flush()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.cmd {
        Cmd::Check { files } => check(&cli.lattice, &files),
        Cmd::Repl => {
            let env = session_env(&cli.lattice, &[])?;
            repl(env, io::stdin().lock(), io::stdout().lock()).map_err(|e| e.to_string())?;
            Ok(true)
        }
        Cmd::Serve { port, stdio, load } => {
            let server = Server::new(session_env(&cli.lattice, &load)?);
            if stdio || port.is_none() {
                serve_lines(&server, io::stdin().lock(), io::stdout().lock()).map_err(|e| e.to_string())?;
                return Ok(true);
            }
            let listener = TcpListener::bind(("127.0.0.1", port.unwrap_or(0))).map_err(|e| e.to_string())?;
            let addr = listener.local_addr().map_err(|e| e.to_string())?;
            println!("listening on {addr}");
            io::stdout().flush().map_err(|e| e.to_string())?;
            serve_tcp(Arc::new(server), listener).map_err(|e| e.to_string())?;
            Ok(true)
        }
        Cmd::ExportProof { theorem, out, load } => {
            let env = session_env(&cli.lattice, &load)?;
            let env = match env.theorem(&theorem) {
                Some(_) => env,
                None => load_files(env, &[PathBuf::from("peirce.thy")])?,
            };
            let th = env
                .theorem(&theorem)
                .ok_or_else(|| format!("no theorem named {theorem}"))?;
            std::fs::write(&out, export_proof(env.signature(), th.proof()))
                .map_err(|e| format!("{}: {e}", out.display()))?;
            println!("{theorem}: {th}");
            Ok(true)
        }
        Cmd::ReplayProof { file, load } => {
            let env = session_env(&cli.lattice, &load)?;
            let text = std::fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
            let p = import_proof(env.signature(), &text).map_err(|e| format!("{}:{e}", file.display()))?;
            let th = replay(&env, &p).map_err(|e| format!("{}: {e}", file.display()))?;
            println!("{th}");
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
