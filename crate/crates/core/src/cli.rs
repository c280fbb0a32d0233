//! Command-line front end. `run` parses arguments, writes to the supplied
//! streams and returns the process exit code: 0 on success, 1 when a
//! verification fails, 2 on usage or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::classifier::compare;
use crate::genus::{GenusPoint, DEFAULT_P_MAX};
use crate::lambda::newton_adams_formula;
use crate::suites::{run_suite, SuiteConfig, SuiteReport};
use crate::symfun::{universal_compose, universal_product, UniversalKind, UniversalPoly};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Axioms,
    Adams,
    Genus,
    Theorem,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Adams => "adams",
            Suite::Genus => "genus",
            Suite::Theorem => "theorem",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bs3-lambda", version, about = "Lambda-ring algebra and the genus of BS^3")]
pub struct Cli {
    /// Largest n accepted by `universal product`; also caps the lambda index in `verify axioms`.
    #[arg(long, global = true, default_value_t = 5)]
    pub n_max: usize,
    /// Largest n*m accepted by `universal compose`.
    #[arg(long, global = true, default_value_t = 6)]
    pub nm_max: usize,
    /// Largest prime carrying a sign in genus points (rounded down to a prime).
    #[arg(long, global = true)]
    pub p_max: Option<u64>,
    /// Bound on |sigma2'| in KO scans.
    #[arg(long, global = true, default_value_t = 100)]
    pub bound: u64,
    /// Random samples per property check.
    #[arg(long, global = true, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a universal polynomial in the symbols Lr_i, Ls_j.
    Universal {
        #[command(subcommand)]
        which: UniversalCmd,
    },
    /// Print psi^k as a polynomial in Lr_1..Lr_k.
    Adams {
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Decide whether two genus points (JSON files) are homotopy equivalent.
    Compare { x: PathBuf, y: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum UniversalCmd {
    /// P_n: lambda^n of a product.
    Product { n: usize },
    /// P_{n,m}: lambda^n of lambda^m.
    Compose { n: usize, m: usize },
}

struct Usage(String);

fn with_schema<T: Serialize>(seed: Option<u64>, body: &T) -> Value {
    let mut v = json!({ "schema": SCHEMA_VERSION });
    if let Some(seed) = seed {
        v["seed"] = json!(seed);
    }
    if let Value::Object(fields) = serde_json::to_value(body).expect("serializable") {
        for (k, val) in fields {
            v[k] = val;
        }
    }
    v
}

fn emit_json(out: &mut dyn Write, v: &Value) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"))
}

fn universal(cli: &Cli, which: &UniversalCmd) -> Result<UniversalPoly, Usage> {
    let up = match *which {
        UniversalCmd::Product { n } => {
            if n == 0 || n > cli.n_max {
                return Err(Usage(format!("n = {n} is outside 1..={} (raise --n-max)", cli.n_max)));
            }
            universal_product(n, n, n)
        }
        UniversalCmd::Compose { n, m } => {
            if n == 0 || m == 0 || n * m > cli.nm_max {
                return Err(Usage(format!(
                    "n*m = {} is outside 1..={} (raise --nm-max)",
                    n * m,
                    cli.nm_max
                )));
            }
            universal_compose(n, m, n * m)
        }
    };
    up.map_err(|e| Usage(e.to_string()))
}

fn universal_label(up: &UniversalPoly) -> String {
    match up.kind {
        UniversalKind::Product { n } => format!("P_{n}"),
        UniversalKind::Composition { n, m } => format!("P_{{{n},{m}}}"),
    }
}

fn read_point(path: &Path, p_max: Option<u64>) -> Result<GenusPoint, Usage> {
    let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    let point: GenusPoint =
        serde_json::from_str(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    match p_max {
        Some(p) => {
            let signs = point.odd_signs().clone();
            GenusPoint::canonicalize(point.a_class() as i64, &signs, p)
                .map_err(|e| Usage(format!("{}: {e}", path.display())))
        }
        None => Ok(point),
    }
}

fn write_suite_text(out: &mut dyn Write, report: &SuiteReport) -> std::io::Result<()> {
    writeln!(out, "suite {} (seed {})", report.suite, report.seed)?;
    for c in &report.checks {
        writeln!(out, "  {} {}", if c.passed { "PASS" } else { "FAIL" }, c.name)?;
    }
    writeln!(out, "{}", if report.passed { "all checks passed" } else { "some checks FAILED" })
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Usage> {
    let io = |e: std::io::Error| Usage(format!("write failed: {e}"));
    match &cli.command {
        Command::Universal { which } => {
            let up = universal(cli, which)?;
            match cli.format {
                Format::Text => writeln!(out, "{} = {}", universal_label(&up), up.expr).map_err(io)?,
                Format::Json => emit_json(out, &with_schema(None, &up)).map_err(io)?,
            }
            Ok(0)
        }
        Command::Adams { k } => {
            let f = newton_adams_formula(*k as usize);
            match cli.format {
                Format::Text => writeln!(out, "psi^{} = {}", f.k, f.expr).map_err(io)?,
                Format::Json => emit_json(out, &with_schema(None, &*f)).map_err(io)?,
            }
            Ok(0)
        }
        Command::Verify { suite } => {
            let cfg = SuiteConfig {
                n_max: cli.n_max,
                nm_max: cli.nm_max,
                p_max: cli.p_max.unwrap_or(DEFAULT_P_MAX),
                bound: cli.bound,
                samples: cli.samples,
                seed: cli.seed,
            };
            let started = Instant::now();
            let report = run_suite(suite.name(), &cfg).expect("known suite");
            match cli.format {
                Format::Text => write_suite_text(out, &report).map_err(io)?,
                Format::Json => emit_json(out, &with_schema(Some(cli.seed), &report)).map_err(io)?,
            }
            // Timing goes to stderr so that stdout stays reproducible.
            writeln!(err, "elapsed: {:.2}s", started.elapsed().as_secs_f64()).map_err(io)?;
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Compare { x, y } => {
            let px = read_point(x, cli.p_max)?;
            let py = read_point(y, cli.p_max)?;
            let cmp = compare(&px, &py).map_err(|e| Usage(e.to_string()))?;
            match cli.format {
                Format::Text => {
                    writeln!(out, "X: {px}").map_err(io)?;
                    writeln!(out, "Y: {py}").map_err(io)?;
                    if cmp.equivalent {
                        writeln!(out, "equivalent").map_err(io)?;
                        if let Some(w) = &cmp.ko_witness {
                            writeln!(out, "KO witness: x -> {}", crate::genus::render_ko(&w.image_of_x()))
                                .map_err(io)?;
                        }
                    } else {
                        writeln!(out, "inequivalent").map_err(io)?;
                        writeln!(out, "distinguished by {}", cmp.distinguished_by.as_deref().unwrap_or("?"))
                            .map_err(io)?;
                    }
                }
                Format::Json => {
                    let body = json!({ "x": px, "y": py, "comparison": cmp });
                    emit_json(out, &with_schema(None, &body)).map_err(io)?;
                }
            }
            Ok(0)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("bs3-lambda").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn adams_text() {
        let (code, out, _) = call(&["adams", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "psi^2 = Lr1^2 - 2*Lr2");
    }

    #[test]
    fn adams_zero_is_usage_error() {
        assert_eq!(call(&["adams", "0"]).0, 2);
    }

    #[test]
    fn cap_errors_name_the_flag() {
        let (code, _, err) = call(&["universal", "product", "6"]);
        assert_eq!(code, 2);
        assert!(err.contains("--n-max"));
        let (code, _, err) = call(&["universal", "compose", "3", "3"]);
        assert_eq!(code, 2);
        assert!(err.contains("--nm-max"));
    }

    #[test]
    fn universal_json_has_schema() {
        let (code, out, _) = call(&["--format", "json", "universal", "compose", "2", "2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["kind"], "composition");
        assert_eq!(v["m"], 2);
    }

    #[test]
    fn unknown_suite_is_usage_error() {
        assert_eq!(call(&["verify", "everything"]).0, 2);
    }
}
