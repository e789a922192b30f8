//! Command-line front end.
//!
//! ```text
//! mockverify --all --order 50 --report json
//! mockverify --identity RLN-1.4 --order 60
//! mockverify --file my.ids --order 30
//! mockverify --dump 'phi(q)' --order 10
//! ```
//!
//! The exit code is 0 when every requested check passes, 1 when some check
//! fails and 2 for usage errors or unreadable input.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::catalog::{self, IdentitySpec, VerificationReport};
use crate::dsl;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Table,
    Json,
    Tsv,
}

#[derive(Debug, Parser)]
#[command(name = "mockverify", version, about = "Verify q-series identities to a given order")]
struct Args {
    /// Verify every built-in identity.
    #[arg(long)]
    all: bool,
    /// Verify one built-in identity; may be repeated.
    #[arg(long, value_name = "ID")]
    identity: Vec<String>,
    /// Verify the identities in a file of `name : lhs == rhs [@ order]` lines.
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
    /// Check coefficients through q^N instead of each entry's default.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(i64).range(1..))]
    order: Option<i64>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
    report: ReportFormat,
    /// Print the built-in identity ids with their default orders and tags.
    #[arg(long)]
    list: bool,
    /// Print the series of an expression through q^N (default 20).
    #[arg(long, value_name = "EXPR")]
    dump: Option<String>,
    /// Worker threads; 1 runs serially.
    #[arg(long, value_name = "K", value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
}

/// The JSON shape of one report.
#[derive(Debug, Serialize)]
pub struct JsonReport {
    pub id: String,
    pub order: i64,
    pub pass: bool,
    pub mismatch: Option<JsonMismatch>,
    pub ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct JsonMismatch {
    pub exp: i64,
    pub lhs: String,
    pub rhs: String,
}

impl From<&VerificationReport> for JsonReport {
    fn from(r: &VerificationReport) -> Self {
        JsonReport {
            id: r.id.clone(),
            order: r.order_checked,
            pass: r.pass,
            mismatch: r.first_mismatch.as_ref().map(|m| JsonMismatch {
                exp: m.exp,
                lhs: m.lhs.clone(),
                rhs: m.rhs.clone(),
            }),
            ms: r.wall_time.as_millis() as u64,
            error: r.error.clone(),
        }
    }
}

/// Runs the tool with process stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the tool writing to the given streams and returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&args, out) {
        Ok(code) => code,
        Err(Failure::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

enum Failure {
    Io(std::io::Error),
    Input(String),
}

impl From<String> for Failure {
    fn from(msg: String) -> Self {
        Failure::Input(msg)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn execute(args: &Args, out: &mut dyn Write) -> Result<i32, Failure> {
    if args.list {
        for s in catalog::builtin_catalog() {
            writeln!(out, "{}\t{}\t{}", s.id, s.default_order, s.tags.join(","))?;
        }
        return Ok(0);
    }
    if let Some(text) = &args.dump {
        let e = dsl::parse_expr(text).map_err(|e| e.to_string())?;
        let s = dsl::eval(&e, args.order.unwrap_or(20)).map_err(|e| e.to_string())?;
        writeln!(out, "{s}")?;
        return Ok(0);
    }
    let specs = selected(args)?;
    if specs.is_empty() {
        return Err(Failure::Input("nothing to verify; pass --all, --identity, --file, --list or --dump".into()));
    }
    let jobs = args.jobs.unwrap_or(0) as usize;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| e.to_string())?;
    let reports = pool.install(|| catalog::verify_many(&specs, args.order, jobs != 1));
    write_reports(&reports, args.report, out)?;
    Ok(if reports.iter().all(|r| r.pass) { 0 } else { 1 })
}

fn selected(args: &Args) -> Result<Vec<IdentitySpec>, String> {
    let mut specs = Vec::new();
    if args.all {
        specs.extend(catalog::builtin_catalog());
    }
    for id in &args.identity {
        specs.push(catalog::find(id).ok_or_else(|| format!("unknown identity `{id}`; see --list"))?);
    }
    if let Some(path) = &args.file {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let file = dsl::parse_file(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        for st in file.statements {
            let mut s = IdentitySpec::new(&st.name, st.lhs, st.rhs);
            if let Some(o) = st.order {
                s.default_order = o;
            }
            specs.push(s);
        }
    }
    Ok(specs)
}

/// Renders reports in the chosen format.
pub fn write_reports(reports: &[VerificationReport], format: ReportFormat, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        ReportFormat::Json => {
            let rows: Vec<JsonReport> = reports.iter().map(JsonReport::from).collect();
            serde_json::to_writer_pretty(&mut *out, &rows)?;
            writeln!(out)
        }
        ReportFormat::Tsv => {
            writeln!(out, "id\torder\tpass\texp\tlhs\trhs\tms\terror")?;
            for r in reports {
                let (e, l, rh) = match &r.first_mismatch {
                    Some(m) => (m.exp.to_string(), m.lhs.clone(), m.rhs.clone()),
                    None => Default::default(),
                };
                writeln!(
                    out,
                    "{}\t{}\t{}\t{e}\t{l}\t{rh}\t{}\t{}",
                    r.id,
                    r.order_checked,
                    r.pass,
                    r.wall_time.as_millis(),
                    r.error.as_deref().unwrap_or("")
                )?;
            }
            Ok(())
        }
        ReportFormat::Table => {
            let width = reports.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
            writeln!(out, "{:<width$}  {:>5}  {:<4}  {:>7}  detail", "id", "order", "", "ms")?;
            for r in reports {
                let detail = match (&r.first_mismatch, &r.error) {
                    (Some(m), _) => format!("q^{}: lhs {} rhs {}", m.exp, m.lhs, m.rhs),
                    (None, Some(e)) => e.clone(),
                    (None, None) => String::new(),
                };
                let line = format!(
                    "{:<width$}  {:>5}  {:<4}  {:>7}  {detail}",
                    r.id,
                    r.order_checked,
                    if r.pass { "ok" } else { "FAIL" },
                    r.wall_time.as_millis()
                );
                writeln!(out, "{}", line.trim_end())?;
            }
            let failed = reports.iter().filter(|r| !r.pass).count();
            writeln!(out, "{} checked, {} failed", reports.len(), failed)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(std::iter::once("mockverify").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn bad_flags_exit_2() {
        let (code, _, err) = run_capture(&["--bogus"]);
        assert_eq!(code, 2);
        assert!(err.contains("Usage"));
        assert_eq!(run_capture(&["--order", "0", "--all"]).0, 2);
        assert_eq!(run_capture(&[]).0, 2);
        assert_eq!(run_capture(&["--identity", "no-such-id"]).0, 2);
    }

    #[test]
    fn single_identity() {
        let (code, out, _) = run_capture(&["--identity", "cor-2.7-id2", "--order", "30", "--report", "tsv"]);
        assert_eq!(code, 0);
        assert!(out.lines().nth(1).unwrap().starts_with("cor-2.7-id2\t30\ttrue"));
    }

    #[test]
    fn dump_prints_series() {
        let (code, out, _) = run_capture(&["--dump", "phi(q)", "--order", "3"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("1 + 2*q + 2*q^2 + 3*q^3"), "{out}");
    }
}
