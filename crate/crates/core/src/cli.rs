//! Command-line front end. Every command writes CSV (header row, values with
//! 17 significant digits) and a JSON run manifest.
//!
//! With `--out PATH` the CSV goes to PATH and the manifest to
//! `PATH.manifest.json`; without it the CSV goes to stdout and the manifest
//! to stderr. `figures` treats `--out` as a directory (default `.`) and
//! writes `manifest.json` there.
//!
//! Exit codes: 0 success, 2 domain error, 3 verification failure,
//! 64 usage error, 74 unwritable output.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::asymptotics::{remainder_scan, Asymptotics, Sequence, SCAN_MAX};
use crate::binary::eta;
use crate::energy::{greedy_oracle, EnergyParams, GreedyEnergy};
use crate::limits::{child_identities, figure_scans, scan_extremum, ScanResult, ScanTarget};
use crate::{Error, VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

const ORACLE_MAX_N: u64 = 4096;

#[derive(Parser, Debug)]
#[command(
    name = "greedy-riesz",
    version,
    about = "Greedy Riesz s-energy sequences on the unit circle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Output path (directory for `figures`). Defaults to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct SArg {
    /// Riesz exponent s.
    #[arg(long, allow_hyphen_values = true)]
    s: f64,
}

#[derive(Args, Debug, Clone)]
struct NRange {
    /// Single N.
    #[arg(long = "N", conflicts_with = "range")]
    n: Option<u64>,
    /// Inclusive range a:b.
    #[arg(long, value_parser = parse_range)]
    range: Option<(u64, u64)>,
}

impl NRange {
    fn bounds(&self) -> Result<(u64, u64), String> {
        match (self.n, self.range) {
            (Some(n), None) => Ok((n, n)),
            (None, Some(r)) => Ok(r),
            _ => Err("one of --N or --range is required".into()),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Binary parts of N.
    ///
    /// CSV: index,exponent,theta,b  (theta_k = 2^{n_k}/N, b_k = sum_{j>=k} theta_j)
    Eta {
        #[arg(long = "N")]
        n: u64,
    },
    /// Greedy energies.
    ///
    /// CSV: N,s,energy,extremal_potential
    Energy {
        #[command(flatten)]
        s: SArg,
        #[command(flatten)]
        range: NRange,
    },
    /// Scaled energy sequence T_{N,s} against its prediction.
    ///
    /// CSV: N,s,exact,scaled,prediction,remainder,scaled_remainder
    Tseq {
        #[command(flatten)]
        s: SArg,
        #[command(flatten)]
        range: NRange,
    },
    /// Scaled extremal-potential sequence F_{N,s} against its prediction.
    ///
    /// CSV: N,s,exact,scaled,prediction,remainder,scaled_remainder
    Fseq {
        #[command(flatten)]
        s: SArg,
        #[command(flatten)]
        range: NRange,
    },
    /// Grid scan over P_M (R at s=0, K at s=1, H(.,s) otherwise).
    ///
    /// CSV: x,value
    Scan {
        #[command(flatten)]
        s: SArg,
        #[arg(long = "M", default_value_t = 16)]
        m: u32,
    },
    /// The five figure scans, one CSV (x,value) per figure in --out.
    Figures {
        #[arg(long = "M", default_value_t = 16)]
        m: u32,
    },
    /// Exact energy against the asymptotic expansion.
    ///
    /// CSV: N,s,energy,expansion,abs_error,rel_error
    ExpansionCheck {
        #[command(flatten)]
        s: SArg,
        #[command(flatten)]
        range: NRange,
    },
    /// Cesaro means of the greedy energy (-2 < s < 1, s != 0).
    ///
    /// CSV: N,s,cesaro_mean,half_equilibrium,gap
    Cesaro {
        #[command(flatten)]
        s: SArg,
        #[command(flatten)]
        range: NRange,
    },
    /// Brute-force greedy construction against the binary energy formula.
    ///
    /// Exit 3 if the relative gap exceeds --tol (default 1e-7).
    ///
    /// CSV: N,oracle,formula,rel_gap
    OracleVerify {
        #[command(flatten)]
        s: SArg,
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Parent-child identities for every x_{m,n} with m <= M.
    ///
    /// Exit 3 if a mismatch exceeds --tol (default 1e-12).
    ///
    /// CSV: M,n,odd_lhs,odd_rhs,even_lhs,even_rhs,mismatch
    Identities {
        #[command(flatten)]
        s: SArg,
        #[arg(long = "M", default_value_t = 6)]
        m: u32,
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn parse_range(v: &str) -> Result<(u64, u64), String> {
    let (a, b) = v.split_once(':').ok_or("expected a:b")?;
    let a: u64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if b < a {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok((a, b))
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

/// CSV body, manifest fields, and whether verification passed.
struct Outcome {
    files: Vec<(String, String)>,
    summary: Value,
    verified: bool,
}

impl Outcome {
    fn single(csv: String, summary: Value) -> Self {
        Self {
            files: vec![(String::new(), csv)],
            summary,
            verified: true,
        }
    }
}

/// Runs the CLI with the given arguments (program name first) and returns
/// the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let start = Instant::now();
    let (name, params) = describe(&cli.command);
    let result = match cli.common.jobs {
        Some(0) => Err(Failure::Usage("--jobs must be positive".into())),
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => Err(Failure::Usage(e.to_string())),
        },
        None => dispatch(&cli.command),
    };
    let (status, summary, files, error) = match result {
        Ok(o) => {
            let status = if o.verified { EXIT_OK } else { EXIT_VERIFY };
            (status, o.summary, o.files, None)
        }
        Err(Failure::Usage(m)) => (EXIT_USAGE, Value::Null, vec![], Some(m)),
        Err(Failure::Domain(e)) => (EXIT_DOMAIN, Value::Null, vec![], Some(e.to_string())),
    };
    if let Some(m) = &error {
        eprintln!("error: {m}");
        if status == EXIT_USAGE {
            eprintln!(
                "{}",
                <Cli as clap::CommandFactory>::command().render_usage()
            );
        }
    }
    let manifest = json!({
        "command": name,
        "params": params,
        "version": VERSION,
        "exit_status": status,
        "error": error,
        "summary": summary,
        "wall_time_s": start.elapsed().as_secs_f64(),
    });
    match emit(&cli.command, cli.common.out.as_deref(), &files, &manifest) {
        Ok(()) => status,
        Err(m) => {
            eprintln!("error: {m}");
            EXIT_IO
        }
    }
}

fn emit(
    cmd: &Command,
    out: Option<&Path>,
    files: &[(String, String)],
    manifest: &Value,
) -> Result<(), String> {
    let text = serde_json::to_string_pretty(manifest).map_err(|e| e.to_string())?;
    let write = |p: &Path, body: &str| {
        fs::write(p, body).map_err(|e| format!("cannot write {}: {e}", p.display()))
    };
    if let Command::Figures { .. } = cmd {
        let dir = out.unwrap_or(Path::new("."));
        fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
        for (name, body) in files {
            write(&dir.join(format!("{name}.csv")), body)?;
        }
        return write(&dir.join("manifest.json"), &text);
    }
    match out {
        Some(p) => {
            if let Some((_, body)) = files.first() {
                write(p, body)?;
            }
            let mut m = p.as_os_str().to_owned();
            m.push(".manifest.json");
            write(Path::new(&m), &text)
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            for (_, body) in files {
                stdout
                    .write_all(body.as_bytes())
                    .map_err(|e| e.to_string())?;
            }
            eprintln!("{text}");
            Ok(())
        }
    }
}

fn describe(cmd: &Command) -> (&'static str, Value) {
    let range = |r: &NRange| json!({ "N": r.n, "range": r.range.map(|(a, b)| [a, b]) });
    match cmd {
        Command::Eta { n } => ("eta", json!({ "N": n })),
        Command::Energy { s, range: r } => ("energy", json!({ "s": s.s, "N": range(r) })),
        Command::Tseq { s, range: r } => ("tseq", json!({ "s": s.s, "N": range(r) })),
        Command::Fseq { s, range: r } => ("fseq", json!({ "s": s.s, "N": range(r) })),
        Command::Scan { s, m } => ("scan", json!({ "s": s.s, "M": m })),
        Command::Figures { m } => ("figures", json!({ "M": m })),
        Command::ExpansionCheck { s, range: r } => {
            ("expansion-check", json!({ "s": s.s, "N": range(r) }))
        }
        Command::Cesaro { s, range: r } => ("cesaro", json!({ "s": s.s, "N": range(r) })),
        Command::OracleVerify { s, n, tol } => {
            ("oracle-verify", json!({ "s": s.s, "N": n, "tol": tol }))
        }
        Command::Identities { s, m, tol } => {
            ("identities", json!({ "s": s.s, "M": m, "tol": tol }))
        }
    }
}

fn dispatch(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Eta { n } => cmd_eta(*n),
        Command::Energy { s, range } => cmd_energy(s.s, range),
        Command::Tseq { s, range } => cmd_seq(s.s, range, Sequence::T),
        Command::Fseq { s, range } => cmd_seq(s.s, range, Sequence::F),
        Command::Scan { s, m } => {
            let r = scan_extremum(*m, ScanTarget::for_s(s.s))?;
            let summary = scan_summary(&r);
            Ok(Outcome::single(r.to_csv(), summary))
        }
        Command::Figures { m } => {
            let scans = figure_scans(*m)?;
            let summary: serde_json::Map<String, Value> = scans
                .iter()
                .map(|(name, r)| (name.to_string(), scan_summary(r)))
                .collect();
            let files = scans
                .into_iter()
                .map(|(name, r)| (name.to_string(), r.to_csv()))
                .collect();
            Ok(Outcome {
                files,
                summary: Value::Object(summary),
                verified: true,
            })
        }
        Command::ExpansionCheck { s, range } => cmd_expansion(s.s, range),
        Command::Cesaro { s, range } => cmd_cesaro(s.s, range),
        Command::OracleVerify { s, n, tol } => cmd_oracle(s.s, *n, tol.unwrap_or(1e-7)),
        Command::Identities { s, m, tol } => cmd_identities(s.s, *m, tol.unwrap_or(1e-12)),
    }
}

fn bounds(range: &NRange, min: u64) -> Result<(u64, u64), Failure> {
    let (a, b) = range.bounds().map_err(Failure::Usage)?;
    if a < min {
        return Err(Failure::Domain(Error::Domain(format!(
            "N must be at least {min}"
        ))));
    }
    Ok((a, b))
}

fn scan_summary(r: &ScanResult) -> Value {
    json!({
        "target": r.target.name(),
        "M": r.m,
        "orientation": r.orientation,
        "extremum": r.extremum,
        "arg": r.arg.to_string(),
        "arg_f64": r.arg_f64(),
        "error_bound": r.error_bound,
    })
}

fn cmd_eta(n: u64) -> Result<Outcome, Failure> {
    let theta = eta(n)?;
    let exps = crate::binary::decompose(n)?;
    let b = theta.suffix_sums();
    let mut csv = String::from("index,exponent,theta,b\n");
    for (i, e) in exps.exponents().iter().enumerate() {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            i + 1,
            e,
            num(theta.component(i)),
            num(b[i])
        );
    }
    let summary = json!({ "tau_b": exps.len(), "scale": theta.scale().to_string() });
    Ok(Outcome::single(csv, summary))
}

fn cmd_energy(s: f64, range: &NRange) -> Result<Outcome, Failure> {
    let (a, b) = bounds(range, 1)?;
    let ge = GreedyEnergy::new(EnergyParams::new(s))?;
    ge.energy(b + 1)?;
    let rows: Vec<(f64, f64)> = (a..=b)
        .into_par_iter()
        .map(|n| Ok((ge.energy(n)?, ge.extremal_potential(n)?)))
        .collect::<Result<_, Error>>()?;
    let mut csv = String::from("N,s,energy,extremal_potential\n");
    for (n, (e, u)) in (a..=b).zip(&rows) {
        let _ = writeln!(csv, "{n},{},{},{}", num(s), num(*e), num(*u));
    }
    Ok(Outcome::single(csv, json!({ "rows": rows.len() })))
}

fn cmd_seq(s: f64, range: &NRange, seq: Sequence) -> Result<Outcome, Failure> {
    let (a, b) = bounds(range, if seq == Sequence::T { 2 } else { 1 })?;
    if b > SCAN_MAX {
        return Err(Failure::Domain(Error::Domain(format!(
            "N must not exceed {SCAN_MAX}"
        ))));
    }
    let scan = remainder_scan(s, a, b, seq)?;
    let mut csv = String::from("N,s,exact,scaled,prediction,remainder,scaled_remainder\n");
    for r in &scan.rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            r.n,
            num(r.s),
            num(r.exact),
            num(r.scaled),
            num(r.prediction),
            num(r.remainder),
            num(r.scaled_remainder())
        );
    }
    let summary = json!({
        "sup_scaled_remainder": scan.sup,
        "argmax": scan.argmax,
        "octaves": scan.octaves,
        "divergence_alarm": scan.divergence_alarm,
        "expansion_rel_sup": scan.expansion_rel_sup,
        "expansion_abs_sup": scan.expansion_abs_sup,
    });
    Ok(Outcome::single(csv, summary))
}

fn cmd_expansion(s: f64, range: &NRange) -> Result<Outcome, Failure> {
    let (a, b) = bounds(range, 2)?;
    let asy = Asymptotics::new(s)?;
    asy.energy(b)?;
    let rows: Vec<(f64, f64)> = (a..=b)
        .into_par_iter()
        .map(|n| Ok((asy.energy(n)?, asy.expansion_e(n)?)))
        .collect::<Result<_, Error>>()?;
    let mut csv = String::from("N,s,energy,expansion,abs_error,rel_error\n");
    let mut worst = 0.0f64;
    for (n, (e, x)) in (a..=b).zip(&rows) {
        let d = (x - e).abs();
        let rel = d / e.abs().max(f64::MIN_POSITIVE);
        worst = worst.max(rel);
        let _ = writeln!(
            csv,
            "{n},{},{},{},{},{}",
            num(s),
            num(*e),
            num(*x),
            num(d),
            num(rel)
        );
    }
    Ok(Outcome::single(csv, json!({ "max_rel_error": worst })))
}

fn cmd_cesaro(s: f64, range: &NRange) -> Result<Outcome, Failure> {
    let (a, b) = bounds(range, 1)?;
    let asy = Asymptotics::new(s)?;
    let half = asy.equilibrium_energy()? / 2.0;
    asy.energy(b + 1)?;
    let rows: Vec<f64> = (a..=b)
        .into_par_iter()
        .map(|n| asy.cesaro_mean(n))
        .collect::<Result<_, Error>>()?;
    let mut csv = String::from("N,s,cesaro_mean,half_equilibrium,gap\n");
    for (n, c) in (a..=b).zip(&rows) {
        let _ = writeln!(
            csv,
            "{n},{},{},{},{}",
            num(s),
            num(*c),
            num(half),
            num(c - half)
        );
    }
    Ok(Outcome::single(csv, json!({ "half_equilibrium": half })))
}

fn cmd_oracle(s: f64, n: u64, tol: f64) -> Result<Outcome, Failure> {
    if !(2..=ORACLE_MAX_N).contains(&n) {
        return Err(Failure::Domain(Error::Domain(format!(
            "oracle supports 2 <= N <= {ORACLE_MAX_N}"
        ))));
    }
    if !(tol > 0.0) {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    let params = EnergyParams::new(s);
    let grid_bits = ((n as f64).log2().ceil() as u32 + 4).max(20);
    let run = greedy_oracle(n as usize, params, grid_bits, 1e-12)?;
    let ge = GreedyEnergy::new(params)?;
    let mut csv = String::from("N,oracle,formula,rel_gap\n");
    let mut worst = 0.0f64;
    for k in 2..=n {
        let want = ge.energy(k)?;
        let got = run.prefix_energies[k as usize];
        let rel = (got - want).abs() / want.abs().max(1.0);
        worst = worst.max(rel);
        let _ = writeln!(csv, "{k},{},{},{}", num(got), num(want), num(rel));
    }
    let summary = json!({ "grid_bits": grid_bits, "max_rel_gap": worst, "tol": tol });
    Ok(Outcome {
        verified: worst <= tol,
        ..Outcome::single(csv, summary)
    })
}

fn cmd_identities(s: f64, m: u32, tol: f64) -> Result<Outcome, Failure> {
    if m == 0 || m > 24 {
        return Err(Failure::Domain(Error::Domain(
            "M must lie in 1..=24".into(),
        )));
    }
    if !(tol > 0.0) {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    let cases: Vec<(u32, u64)> = (1..=m)
        .flat_map(|k| (0..1u64 << (k - 1)).map(move |n| (k, n)))
        .collect();
    let rows = cases
        .par_iter()
        .map(|&(k, n)| child_identities(k, n, s))
        .collect::<Result<Vec<_>, Error>>()?;
    let mut csv = String::from("M,n,odd_lhs,odd_rhs,even_lhs,even_rhs,mismatch\n");
    let mut worst = 0.0f64;
    for ((k, n), r) in cases.iter().zip(&rows) {
        let mm = r.max_mismatch();
        worst = worst.max(mm);
        let _ = writeln!(
            csv,
            "{k},{n},{},{},{},{},{}",
            num(r.odd_child.0),
            num(r.odd_child.1),
            num(r.even_child.0),
            num(r.even_child.1),
            num(mm)
        );
    }
    let summary = json!({ "cases": rows.len(), "max_mismatch": worst, "tol": tol });
    Ok(Outcome {
        verified: worst <= tol,
        ..Outcome::single(csv, summary)
    })
}
