//! Command-line front end. `run_cli` is the whole program minus process
//! plumbing, so it can be driven from tests.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bigjson;
use crate::construction::verify::{verify_paper, VerifyOptions};
use crate::format::{run_document, ConstructionDoc, DocError};
use crate::hj::{self, HjChain, HjFraction, WahlParams};
use crate::zlinalg::{cokernel, snf, IntMatrix};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "ratblow", version, about = "Blow-up calculus, Wahl chains and rational blow-down homology")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Emit::Text, global = true)]
    pub emit: Emit,
    /// Print only the verdict line (text mode).
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rebuild the K^2 = 3 construction and check every invariant.
    VerifyPaper {
        /// Verify a stored construction (or a previous JSON report) instead of searching.
        #[arg(long)]
        assignment: Option<PathBuf>,
        /// Enumerate every reconstruction and compare their outcomes.
        #[arg(long)]
        all_solutions: bool,
    },
    /// Build a construction file and compute its blow-down.
    Run {
        file: PathBuf,
        /// Write the H1 relation matrix in matrix text format.
        #[arg(long)]
        export_presentation: Option<PathBuf>,
    },
    /// Hirzebruch-Jung continued fractions.
    Hj {
        #[command(subcommand)]
        op: HjCommand,
    },
    /// Smith normal form and cokernel of an integer matrix file.
    Snf { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum HjCommand {
    /// Expand p/q into [b1, ..., bk].
    Expand { p: i64, q: i64 },
    /// The Wahl chain of n^2/(na - 1).
    Wahl { n: i64, a: i64 },
    /// Recognize a string as a Wahl chain.
    Recognize {
        #[arg(required = true, allow_negative_numbers = true)]
        string: Vec<i64>,
    },
    /// Meridian coefficients and boundary order of a string.
    Meridians {
        #[arg(required = true, allow_negative_numbers = true)]
        string: Vec<i64>,
    },
}

struct Failure(i32, String);

fn input(msg: impl ToString) -> Failure {
    Failure(EXIT_INPUT, msg.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn join(xs: &[i64]) -> String {
    xs.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return if code == 0 { EXIT_OK } else { EXIT_INPUT };
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut w = |s: String| out.write_all(s.as_bytes()).map_err(|e| Failure(EXIT_INPUT, e.to_string()));
    match &cli.command {
        Command::VerifyPaper { assignment, all_solutions } => {
            let assignment = assignment.as_deref().map(load_assignment).transpose()?;
            let r = verify_paper(&VerifyOptions { assignment, all_solutions: *all_solutions });
            match (cli.emit, cli.quiet) {
                (Emit::Json, _) => w(r.to_json())?,
                (Emit::Text, true) => w(r.to_text().lines().last().unwrap_or_default().to_string() + "\n")?,
                (Emit::Text, false) => w(r.to_text())?,
            }
            Ok(if r.passed { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Run { file, export_presentation } => {
            let doc = ConstructionDoc::from_json(&read(file)?).map_err(|e| input(format!("{}: {e}", file.display())))?;
            let run = run_document(&doc).map_err(|e| input(format!("{}: {e}", file.display())))?;
            if let Some(path) = export_presentation {
                let p = run.presentation.as_ref().ok_or_else(|| Failure(EXIT_FAILED, "no presentation: chains did not validate".into()))?;
                fs::write(path, p.relations.to_text()).map_err(|e| input(format!("{}: {e}", path.display())))?;
            }
            let r = &run.report;
            match (cli.emit, cli.quiet) {
                (Emit::Json, _) => w(serde_json::to_string_pretty(r).expect("report serializes") + "\n")?,
                (Emit::Text, true) => w(r.to_text().lines().last().unwrap_or_default().to_string() + "\n")?,
                (Emit::Text, false) => w(r.to_text())?,
            }
            Ok(if r.passed { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Hj { op } => hj_command(op, cli.emit, &mut w),
        Command::Snf { file } => {
            let m = IntMatrix::parse_text(&read(file)?).map_err(|e| input(format!("{}: {e}", file.display())))?;
            let res = snf(&m);
            let diag: Vec<String> = res.diagonal().iter().map(|x| x.to_string()).collect();
            let group = cokernel(&m);
            match cli.emit {
                Emit::Text => w(format!("diagonal: {}\ncokernel: {group}\n", diag.join(" ")))?,
                Emit::Json => w(serde_json::to_string_pretty(&json!({
                    "diagonal": diag,
                    "cokernel": group,
                    "u": nested(&res.u),
                    "v": nested(&res.v),
                }))
                .expect("serializes")
                    + "\n")?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn nested(m: &IntMatrix) -> serde_json::Value {
    m.to_nested().iter().map(|r| r.iter().map(bigjson::to_value).collect::<Vec<_>>()).collect()
}

fn load_assignment(path: &Path) -> Result<ConstructionDoc, Failure> {
    let text = read(path)?;
    let fail = |e: DocError| input(format!("{}: {e}", path.display()));
    match ConstructionDoc::from_json(&text) {
        Ok(doc) => Ok(doc),
        Err(e) => {
            // Accept a full verification report and use its assignment.
            let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| fail(e.into()))?;
            match value.get("assignment") {
                Some(a) => serde_json::from_value(a.clone()).map_err(|e| fail(e.into())),
                None => Err(fail(e)),
            }
        }
    }
}

fn hj_command(op: &HjCommand, emit: Emit, w: &mut dyn FnMut(String) -> Result<(), Failure>) -> Result<i32, Failure> {
    let chain = |s: &[i64]| HjChain::new(s.to_vec()).map_err(input);
    match op {
        HjCommand::Expand { p, q } => {
            let f = HjFraction::new(*p, *q).map_err(input)?;
            let c = hj::hj_expand(f);
            match emit {
                Emit::Text => w(join(c.coefficients()) + "\n")?,
                Emit::Json => w(json!({"p": p, "q": q, "string": c}).to_string() + "\n")?,
            }
            Ok(EXIT_OK)
        }
        HjCommand::Wahl { n, a } => {
            let c = hj::wahl_chain(WahlParams::new(*n, *a).map_err(input)?).map_err(input)?;
            match emit {
                Emit::Text => w(join(c.coefficients()) + "\n")?,
                Emit::Json => w(json!({"n": n, "a": a, "string": c}).to_string() + "\n")?,
            }
            Ok(EXIT_OK)
        }
        HjCommand::Recognize { string } => {
            let c = chain(string)?;
            let found = hj::recognize_wahl(&c);
            match emit {
                Emit::Text => w(found.map_or("not a Wahl chain".to_string(), |p| p.to_string()) + "\n")?,
                Emit::Json => w(json!({"string": c, "wahl": found}).to_string() + "\n")?,
            }
            Ok(if found.is_some() { EXIT_OK } else { EXIT_FAILED })
        }
        HjCommand::Meridians { string } => {
            let m = hj::meridian_coefficients(&chain(string)?).map_err(input)?;
            match emit {
                Emit::Text => w(format!("coefficients: {}\norder: {}\n", join(&m.coefficients), m.order))?,
                Emit::Json => w(serde_json::to_string(&m).expect("serializes") + "\n")?,
            }
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_cli(std::iter::once("ratblow").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn hj_subcommands() {
        assert_eq!(run(&["hj", "expand", "36", "5"]), (0, "8 2 2 2 2\n".into(), String::new()));
        assert_eq!(run(&["hj", "wahl", "110", "67"]).1, "2 3 5 7 2 2 3 2 2 3 3\n");
        assert_eq!(run(&["hj", "recognize", "8", "2", "2", "2", "2"]).1, "C(6,1)\n");
        assert_eq!(run(&["hj", "recognize", "8", "2", "2", "2"]).0, 1);
        assert_eq!(run(&["hj", "meridians", "8", "2", "2", "2", "2"]).1, "coefficients: 1 8 15 22 29\norder: 36\n");
    }

    #[test]
    fn bad_arguments_exit_two() {
        assert_eq!(run(&["hj", "expand", "36", "6"]).0, 2);
        assert_eq!(run(&["hj", "expand", "x", "5"]).0, 2);
        assert_eq!(run(&["hj", "recognize", "1", "3"]).0, 2);
        assert_eq!(run(&["snf", "/nonexistent/matrix.txt"]).0, 2);
        assert_eq!(run(&["frobnicate"]).0, 2);
        assert_eq!(run(&["--help"]).0, 0);
    }
}
