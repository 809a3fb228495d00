//! Command-line front end of the `bexc` binary.
//!
//! Each subcommand writes CSV (or JSON) to `--out` or stdout. Lines starting
//! with `#` echo the parameters; a manifest `<out>.manifest.json` is written
//! next to every output file. Exit codes: 0 success, 1 numerical failure,
//! 2 usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::distribution::{self, laplace_pdf_with_tol, log_grid, DistributionTable, Method};
use crate::error::{Error, Result};
use crate::levy_limit::{self, LimitSpectrum};
use crate::mcsim::{self, McConfig};
use crate::moments::{self, MomentSet};
use crate::params::{BoundaryMode, ExcursionParams};
use crate::spectrum::{dk_asymptotic, lambda_asymptotic, solve_spectrum, SpectralData};

#[derive(Debug, Parser)]
#[command(name = "bexc", version, about = "Area distribution of Bessel excursions")]
pub struct Cli {
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues and origin coefficients with their asymptotic laws.
    Spectrum(SpectrumArgs),
    /// Scaled density on a log grid of `A/A0`.
    Pdf(PdfArgs),
    /// Moments at one drift or over a range of drifts.
    Moments(MomentsArgs),
    /// Monte Carlo ensemble and its comparison with the analytic density.
    Mc(McArgs),
    /// The one-sided Lévy limit against the full continued transform.
    LevyLimit(LevyArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Drift strength U0.
    #[arg(long, allow_hyphen_values = true)]
    u0: Option<f64>,
    /// Diffusion constant.
    #[arg(long, default_value_t = 0.5)]
    d: f64,
    /// Duration of the excursion.
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// `absorbing` or `continued`.
    #[arg(long, default_value = "absorbing")]
    mode: BoundaryMode,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn params(&self) -> Result<ExcursionParams> {
        let u0 = self.u0.ok_or_else(|| Error::InvalidParameter("--u0 is required".into()))?;
        ExcursionParams::new(u0, self.d, self.t, self.mode)
    }
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    common: Common,
    /// Number of eigenpairs.
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Debug, Args)]
struct PdfArgs {
    #[command(flatten)]
    common: Common,
    /// `lo:hi:n`, log-spaced.
    #[arg(long, default_value = "0.05:6:400")]
    grid: String,
    /// `hypseries`, `airy` or `talbot`.
    #[arg(long, default_value = "hypseries")]
    method: Method,
    /// Eigenpairs used by the sums.
    #[arg(long, default_value_t = 120)]
    k: usize,
    /// Emit physical `A` and `P(A, T)` instead of scaled columns.
    #[arg(long)]
    physical: bool,
}

#[derive(Debug, Args)]
struct MomentsArgs {
    #[command(flatten)]
    common: Common,
    /// `lo:hi[:n]`, a sweep of U0 emitted as CSV.
    #[arg(long, allow_hyphen_values = true)]
    u0_range: Option<String>,
    /// Order of the extra fractional moment; `2|α|/3` by default.
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Report moments in physical units.
    #[arg(long)]
    physical: bool,
}

#[derive(Debug, Args)]
struct McArgs {
    #[command(flatten)]
    common: Common,
    /// Accepted excursions.
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Largest time step; `1e-4 T` by default.
    #[arg(long)]
    dt: Option<f64>,
    /// Launch height; `0.0005 √(DT)` by default.
    #[arg(long)]
    x_start: Option<f64>,
    /// Relative width of the return-time window.
    #[arg(long)]
    window: Option<f64>,
    /// Comparison report (JSON).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LevyArgs {
    /// Drift strength, `-3 <= U0 < -1`.
    #[arg(long, allow_hyphen_values = true)]
    u0: f64,
    /// Eigenpairs of the full continued problem.
    #[arg(long, default_value_t = 120)]
    k: usize,
    /// Laplace variable grid `lo:hi:n`, equispaced.
    #[arg(long, default_value = "0:4:41")]
    s_grid: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Record of one invocation, written next to its output.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub params: Value,
    pub version: String,
    pub wall_time_s: f64,
    pub outputs: Vec<String>,
}

/// Parses `args` and runs; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // the global pool can be configured once per process; later calls keep it
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let result = dispatch(&cli.command, stdout, stderr);
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "bexc: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}

fn dispatch(cmd: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let start = Instant::now();
    let (name, out, params, extra) = match cmd {
        Command::Spectrum(a) => ("spectrum", &a.common.out, cmd_spectrum(a, stdout)?, vec![]),
        Command::Pdf(a) => ("pdf", &a.common.out, cmd_pdf(a, stdout, stderr)?, vec![]),
        Command::Moments(a) => ("moments", &a.common.out, cmd_moments(a, stdout, stderr)?, vec![]),
        Command::Mc(a) => ("mc", &a.common.out, cmd_mc(a, stdout)?, a.report.iter().cloned().collect()),
        Command::LevyLimit(a) => ("levy-limit", &a.out, cmd_levy(a, stdout, stderr)?, vec![]),
    };
    if let Some(path) = out {
        let mut outputs = vec![path.display().to_string()];
        outputs.extend(extra.iter().map(|p| p.display().to_string()));
        let manifest = RunManifest {
            subcommand: name.into(),
            params,
            version: env!("CARGO_PKG_VERSION").into(),
            wall_time_s: start.elapsed().as_secs_f64(),
            outputs,
        };
        std::fs::write(manifest_path(path), serde_json::to_string_pretty(&manifest)?)?;
    }
    Ok(())
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn sink<'a>(out: &Option<PathBuf>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

fn echo(w: &mut dyn Write, name: &str, params: &Value) -> Result<()> {
    writeln!(w, "# bexc {} {name}", env!("CARGO_PKG_VERSION"))?;
    writeln!(w, "# {params}")?;
    Ok(())
}

fn params_json(p: &ExcursionParams) -> Value {
    json!({ "u0": p.u0, "d": p.d, "t": p.t, "a0": p.a0(), "mode": p.mode.to_string() })
}

fn parse_range(s: &str, default_n: usize) -> Result<(f64, f64, usize)> {
    let bad = || Error::InvalidParameter(format!("expected lo:hi[:n], got `{s}`"));
    let parts: Vec<&str> = s.split(':').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n = match parts.get(2) {
        Some(t) => t.trim().parse().map_err(|_| bad())?,
        None => default_n,
    };
    if !(hi >= lo) || n == 0 || (n == 1 && hi != lo) {
        return Err(bad());
    }
    Ok((lo, hi, n))
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn cmd_spectrum(a: &SpectrumArgs, stdout: &mut dyn Write) -> Result<Value> {
    let p = a.common.params()?;
    let s = solve_spectrum(&p, a.k, a.tol)?;
    let meta = json!({ "params": params_json(&p), "k": a.k, "tol": a.tol });
    let mut w = sink(&a.common.out, stdout)?;
    echo(&mut w, "spectrum", &meta)?;
    let mut c = csv::Writer::from_writer(&mut w);
    c.write_record(["k", "lambda", "d", "lambda_asym", "d_asym"])?;
    for k in 0..s.lambdas.len() {
        c.write_record([
            k.to_string(),
            format!("{:.15e}", s.lambdas[k]),
            format!("{:.15e}", s.dks[k]),
            format!("{:.15e}", lambda_asymptotic(&p, k)),
            format!("{:.15e}", dk_asymptotic(&p, s.lambdas[k])),
        ])?;
    }
    c.flush()?;
    drop(c);
    w.flush()?;
    Ok(meta)
}

fn cmd_pdf(a: &PdfArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<Value> {
    let p = a.common.params()?;
    if a.method == Method::MC {
        return Err(Error::InvalidParameter("use the `mc` subcommand for Monte Carlo densities".into()));
    }
    let (lo, hi, n) = parse_range(&a.grid, 400)?;
    let grid = log_grid(lo, hi, n)?;
    let s = solve_spectrum(&p, a.k, 1e-10)?;
    let table = DistributionTable::compute(&p, &s, &grid, a.method)?;
    let fallbacks = table.method.iter().filter(|&&m| m != a.method).count();
    if fallbacks > 0 {
        writeln!(stderr, "bexc: {fallbacks} of {n} points fell back from {} to talbot", a.method)?;
    }
    let meta = json!({
        "params": params_json(&p), "grid": [lo, hi, n], "method": a.method.to_string(),
        "k": a.k, "physical": a.physical,
    });
    let mut w = sink(&a.common.out, stdout)?;
    echo(&mut w, "pdf", &meta)?;
    if a.physical {
        let (x, y) = table.physical();
        let a0 = p.a0();
        let mut c = csv::Writer::from_writer(&mut w);
        c.write_record(["area", "pdf", "err", "method"])?;
        for i in 0..table.len() {
            c.write_record([
                format!("{:.17e}", x[i]),
                format!("{:.17e}", y[i]),
                format!("{:.3e}", table.err[i] / a0),
                table.method[i].to_string(),
            ])?;
        }
        c.flush()?;
    } else {
        table.write_csv(&mut w)?;
    }
    w.flush()?;
    Ok(meta)
}

/// `[U0, m1, m2, m2_linear]` in units of `A0`, and the m2 failure if any.
fn moment_row(p: &ExcursionParams, tol: f64) -> Result<([f64; 4], Option<Error>)> {
    let a0 = p.a0();
    let m1 = moments::m1_closed(p)? / a0;
    let (m2, failure) = match moments::m2_series(p, tol) {
        Ok(v) => (v / (a0 * a0), None),
        Err(e) => (f64::NAN, Some(e)),
    };
    let lin = if p.index() >= 0.0 { moments::m2_linear(p) / (a0 * a0) } else { f64::NAN };
    Ok(([p.u0, m1, m2, lin], failure))
}

fn cmd_moments(a: &MomentsArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<Value> {
    let c = &a.common;
    if let Some(r) = &a.u0_range {
        let (lo, hi, n) = parse_range(r, 41)?;
        let rows: Vec<([f64; 4], Option<Error>)> = linspace(lo, hi, n)
            .into_iter()
            .map(|u| ExcursionParams::new(u, c.d, c.t, c.mode).and_then(|p| moment_row(&p, a.tol)))
            .collect::<Result<_>>()?;
        let failed: Vec<&(_, Option<Error>)> = rows.iter().filter(|r| r.1.is_some()).collect();
        if let Some((r, Some(e))) = failed.first() {
            writeln!(stderr, "bexc: m2 unavailable at {} of {n} drifts, first at U0 = {}: {e}", failed.len(), r[0])?;
        }
        let meta = json!({ "u0_range": [lo, hi, n], "d": c.d, "t": c.t, "mode": c.mode.to_string(), "tol": a.tol, "physical": a.physical });
        let scale = if a.physical { ExcursionParams::new(lo, c.d, c.t, c.mode)?.a0() } else { 1.0 };
        let mut w = sink(&c.out, stdout)?;
        echo(&mut w, "moments", &meta)?;
        let mut cw = csv::Writer::from_writer(&mut w);
        cw.write_record(["u0", "m1", "m2", "m2_linear"])?;
        for (r, _) in rows {
            cw.write_record([
                format!("{}", r[0]),
                format!("{:.15e}", r[1] * scale),
                format!("{:.15e}", r[2] * scale * scale),
                format!("{:.15e}", r[3] * scale * scale),
            ])?;
        }
        cw.flush()?;
        drop(cw);
        w.flush()?;
        return Ok(meta);
    }
    let p = c.params()?;
    let mut m = MomentSet::analytic(&p, a.tol)?;
    if let Some(nu) = a.nu {
        let s = solve_spectrum(&p, 120, 1e-10)?;
        let table = DistributionTable::compute(&p, &s, &distribution::default_grid(), default_method(&p))?;
        m.m_nu = moments::moment_quadrature(&table, nu)?;
        m.nu = nu;
        m.method_tags.m_nu = moments::MomentMethod::Quadrature;
    }
    if a.physical {
        let a0 = p.a0();
        m.m1 *= a0;
        m.m2 *= a0 * a0;
        m.m_nu *= a0.powf(m.nu);
    }
    let meta = json!({ "params": params_json(&p), "tol": a.tol, "nu": m.nu, "physical": a.physical });
    let mut w = sink(&c.out, stdout)?;
    writeln!(w, "{}", serde_json::to_string_pretty(&json!({ "meta": meta, "moments": m }))?)?;
    w.flush()?;
    Ok(meta)
}

fn default_method(p: &ExcursionParams) -> Method {
    if (p.index().abs() - 0.5).abs() < 1e-12 {
        Method::AiryClosed
    } else {
        Method::HypSeries
    }
}

/// The analytic table an ensemble is compared with.
pub fn reference_table(p: &ExcursionParams) -> Result<(SpectralData, DistributionTable)> {
    let s = solve_spectrum(p, 120, 1e-10)?;
    let t = DistributionTable::compute(p, &s, &distribution::default_grid(), default_method(p))?;
    Ok((s, t))
}

fn cmd_mc(a: &McArgs, stdout: &mut dyn Write) -> Result<Value> {
    let p = a.common.params()?;
    let mut cfg = McConfig::new(p, a.n, a.seed)?;
    if let Some(dt) = a.dt {
        cfg.dt = dt;
    }
    if let Some(x) = a.x_start {
        cfg.x_start = x;
        cfg.x0_reg = 0.25 * x;
    }
    if let Some(w) = a.window {
        cfg.return_window = w;
    }
    let ens = mcsim::sample_excursions(&cfg)?;
    let meta = json!({ "config": cfg, "acceptance_rate": ens.acceptance_rate, "launch_probability": ens.launch_probability });
    let mut w = sink(&a.common.out, stdout)?;
    echo(&mut w, "mc", &json!({ "config": cfg }))?;
    ens.write_csv(&mut w)?;
    w.flush()?;
    if let Some(path) = &a.report {
        let (_, table) = reference_table(&p)?;
        let report = mcsim::mc_vs_analytic(&ens, &table)?;
        let body = json!({ "config": cfg, "method": default_method(&p).to_string(), "report": report, "ks_pass": report.ks_pass() });
        std::fs::write(path, serde_json::to_string_pretty(&body)?)?;
    }
    Ok(meta)
}

fn cmd_levy(a: &LevyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<Value> {
    if !(-3.0..-1.0).contains(&a.u0) {
        return Err(Error::InvalidParameter(format!("levy-limit needs -3 <= U0 < -1, got {}", a.u0)));
    }
    let lim = LimitSpectrum::new(a.u0, 4)?;
    if !levy_limit::limit_is_reliable(a.u0) {
        writeln!(stderr, "bexc: U0 + 3 = {} exceeds {}; the limit law is a rough guide", a.u0 + 3.0, levy_limit::VALIDITY_MARGIN)?;
    }
    let (lo, hi, n) = parse_range(&a.s_grid, 41)?;
    if lo < 0.0 {
        return Err(Error::InvalidParameter("Laplace grid must be non-negative".into()));
    }
    let full = if a.u0 > -3.0 {
        let p = ExcursionParams::continued(a.u0)?;
        Some((p, solve_spectrum(&p, a.k, 1e-10)?))
    } else {
        None
    };
    let meta = json!({ "u0": a.u0, "k": a.k, "s_grid": [lo, hi, n], "limit": lim });
    let mut w = sink(&a.out, stdout)?;
    echo(&mut w, "levy-limit", &meta)?;
    let mut c = csv::Writer::from_writer(&mut w);
    c.write_record(["s_hat", "limit", "full", "rel_diff"])?;
    for s in linspace(lo, hi, n) {
        let l = levy_limit::limit_laplace(a.u0, s)?;
        let f = match &full {
            Some((p, sp)) => laplace_pdf_with_tol(p, sp, s, 1e-3)?.0,
            None => f64::NAN,
        };
        c.write_record([format!("{s}"), format!("{l:.15e}"), format!("{f:.15e}"), format!("{:.3e}", (l - f) / f)])?;
    }
    c.flush()?;
    drop(c);
    w.flush()?;
    Ok(meta)
}
