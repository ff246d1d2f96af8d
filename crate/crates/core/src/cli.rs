//! The `operad-forge` command line.
//!
//! Exit codes: 0 on success, 1 when a script breaks the continuity
//! constraint or a fuzz law fails, 2 on usage, syntax and reference errors.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::dsl::parser::{parse, ExprKind, Script};
use crate::dsl::{self, DiagnosticKind, Env, Value};
use crate::fuzz::{self, Law};
use crate::linkmonoid::{self, Alphabet, LinkWord};
use crate::render::{self, Figure};
use crate::action;

#[derive(Debug, Parser)]
#[command(name = "operad-forge", version, about = "Exact computations in the string-link infection operad")]
pub struct Cli {
    /// Alphabet file used for link literals when the script declares none.
    #[arg(long, global = true)]
    pub alphabet: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a script and report every binding.
    Check { file: PathBuf },
    /// Print the results of `compose(..)` bindings.
    Compose { file: PathBuf },
    /// Print the results of `act(..)` bindings.
    Act { file: PathBuf },
    /// Print every binding in canonical form.
    Normalize { file: PathBuf },
    /// Prime and S2 decompositions of every link binding.
    Decompose { file: PathBuf },
    /// Draw the last drawable binding, or the one named by `--name`.
    Render {
        file: PathBuf,
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        ascii: bool,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Print the results of `swapcheck(..)` bindings.
    SwapCheck { file: PathBuf },
    /// Check operad and action laws on seeded random instances.
    Fuzz {
        /// Optional script whose alphabet is used for random links.
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        ops: usize,
        #[arg(long, value_delimiter = ',', default_values_t = Law::ALL.map(|l| l.name().to_string()))]
        laws: Vec<String>,
    },
}

/// What a command produced.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn fail(code: i32, msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        stderr.push('\n');
        Output {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Output> {
    std::fs::read_to_string(path).map_err(|e| Output::fail(2, format!("{}: {e}", path.display())))
}

fn load_alphabet(cli: &Cli) -> Result<Option<Alphabet>, Output> {
    let Some(path) = &cli.alphabet else {
        return Ok(None);
    };
    let text = read(path)?;
    Alphabet::parse(&text)
        .map(Some)
        .map_err(|e| Output::fail(2, format!("{}: {e}", path.display())))
}

fn load(cli: &Cli, path: &PathBuf) -> Result<(Script, Env), Output> {
    let src = read(path)?;
    let alphabet = load_alphabet(cli)?;
    let report = |d: dsl::Diagnostic| {
        let code = if d.kind == DiagnosticKind::Violation { 1 } else { 2 };
        Output::fail(code, format!("{}:{d}", path.display()))
    };
    let script = parse(&src).map_err(report)?;
    let env = dsl::evaluate(&script, alphabet).map_err(report)?;
    Ok((script, env))
}

fn calls_named(script: &Script, env: &Env, call: &str) -> String {
    let mut out = String::new();
    for (stmt, (name, value)) in script.stmts.iter().zip(&env.bindings) {
        if matches!(&stmt.expr.kind, ExprKind::Call { name: n, .. } if n == call) {
            let _ = writeln!(out, "let {name} = {value};");
        }
    }
    out
}

fn check_report(env: &Env) -> String {
    let mut out = String::new();
    for (name, v) in &env.bindings {
        let _ = writeln!(out, "{name}: {} ok", v.type_name());
    }
    let _ = writeln!(out, "{} bindings checked", env.bindings.len());
    out
}

fn decompose_report(env: &Env) -> Result<String, Output> {
    let mut out = String::new();
    for (name, v) in &env.bindings {
        let Value::Link(w) = v else {
            continue;
        };
        let primes = Value::List(linkmonoid::decompose_primes(w).into_iter().map(Value::Link).collect());
        let _ = writeln!(out, "let {name}_primes = {primes};");
        if let LinkWord::Two { .. } = w {
            let s2 = linkmonoid::in_s2(w).map_err(|e| Output::fail(2, e.to_string()))?;
            if s2 {
                let (d, factors) = action::decompose_s2(w).map_err(|e| Output::fail(2, e.to_string()))?;
                let factors = Value::List(factors.into_iter().map(Value::Link).collect());
                let _ = writeln!(out, "let {name}_s2 = [{d}, {factors}];");
            } else {
                let _ = writeln!(out, "# {name} has central letters, so it lies outside S2");
            }
        }
    }
    Ok(out)
}

fn figure<'a>(env: &'a Env, name: Option<&str>) -> Result<Figure<'a>, Output> {
    let as_figure = |v: &'a Value| match v {
        Value::Diagram(d) => Some(Figure::Diagram(d)),
        Value::Cubes(e) => Some(Figure::Cubes(e)),
        Value::Overlap(e) => Some(Figure::Overlap(e)),
        _ => None,
    };
    match name {
        Some(n) => {
            let v = env.get(n).ok_or_else(|| Output::fail(2, format!("no binding named `{n}`")))?;
            as_figure(v).ok_or_else(|| Output::fail(2, format!("`{n}` is a {}, which cannot be drawn", v.type_name())))
        }
        None => env
            .bindings
            .iter()
            .rev()
            .find_map(|(_, v)| as_figure(v))
            .ok_or_else(|| Output::fail(2, "nothing to draw: no diagram, cubes or overlap binding")),
    }
}

fn emit(text: String, to: Option<&PathBuf>) -> Output {
    match to {
        Some(path) => match std::fs::write(path, text) {
            Ok(()) => Output::default(),
            Err(e) => Output::fail(2, format!("{}: {e}", path.display())),
        },
        None => Output {
            stdout: text,
            ..Output::default()
        },
    }
}

fn run_inner(cli: &Cli) -> Result<Output, Output> {
    let ok = |stdout: String| Output {
        stdout,
        ..Output::default()
    };
    Ok(match &cli.command {
        Command::Check { file } => ok(check_report(&load(cli, file)?.1)),
        Command::Compose { file } => {
            let (s, env) = load(cli, file)?;
            ok(calls_named(&s, &env, "compose"))
        }
        Command::Act { file } => {
            let (s, env) = load(cli, file)?;
            ok(calls_named(&s, &env, "act"))
        }
        Command::SwapCheck { file } => {
            let (s, env) = load(cli, file)?;
            ok(calls_named(&s, &env, "swapcheck"))
        }
        Command::Normalize { file } => ok(load(cli, file)?.1.print()),
        Command::Decompose { file } => ok(decompose_report(&load(cli, file)?.1)?),
        Command::Render {
            file,
            name,
            ascii,
            output,
        } => {
            let env = load(cli, file)?.1;
            let fig = figure(&env, name.as_deref())?;
            let text = if *ascii { render::ascii(&fig) } else { render::svg(&fig) };
            emit(text, output.as_ref())
        }
        Command::Fuzz { file, seed, ops, laws } => {
            let laws: Vec<Law> = laws
                .iter()
                .map(|l| l.parse())
                .collect::<Result<_, String>>()
                .map_err(|e| Output::fail(2, e))?;
            let alphabet = match file {
                Some(f) => load(cli, f)?.1.alphabet().cloned(),
                None => load_alphabet(cli)?,
            }
            .unwrap_or_else(fuzz::gen::default_alphabet);
            let report = fuzz::run(*seed, *ops, &laws, &alphabet);
            Output {
                code: if report.ok() { 0 } else { 1 },
                stdout: report.to_string(),
                stderr: String::new(),
            }
        }
    })
}

pub fn run(cli: &Cli) -> Output {
    run_inner(cli).unwrap_or_else(|e| e)
}

/// Parses `args` (program name first) and runs the command. Usage errors
/// come back as exit code 2 with clap's message.
pub fn run_args<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Output {
                    stdout: text,
                    ..Output::default()
                }
            } else {
                Output::fail(code, text.trim_end())
            }
        }
    }
}
