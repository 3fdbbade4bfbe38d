mod eval;
mod format;
mod sweep;
mod values;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hostler_core::golden;
use hostler_core::green::{hostler_green, pair_geometry, partial_wave_green, CoulombParams};
use hostler_core::identities::{large_order_stress, VerifyOptions};
use num_complex::Complex;
use serde::Serialize;

use crate::eval::EvalError;
use crate::format::{sig10, sig10_c, sig17, CNum, Num, Params, SCHEMA_VERSION};
use crate::sweep::{Row, Sweep, CSV_COLUMNS, IDENTITIES};
use crate::values::{parse_complex, parse_real};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "hostler", version, about = "Whittaker addition theorems and the Coulomb Green function")]
struct Cli {
    /// Working precision of extended evaluations, in significant digits.
    #[arg(long, global = true, env = "HOSTLER_DIGITS", default_value_t = 60)]
    digits: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one special function.
    Eval(EvalCmd),
    /// Sweep an identity over a parameter grid.
    Verify(VerifyCmd),
    /// Coulomb Green function by the closed form and the partial-wave series.
    Green(GreenCmd),
    /// Regenerate or check the golden reference files.
    Golden(GoldenCmd),
}

fn complex_arg(s: &str) -> Result<Complex<f64>, String> {
    parse_complex(s)
}

fn real_arg(s: &str) -> Result<f64, String> {
    parse_real(s)
}

fn point_arg(s: &str) -> Result<[f64; 3], String> {
    let v: Vec<f64> = s.split(',').map(parse_real).collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| format!("expected r,theta,phi, got {s:?}"))
}

#[derive(clap::Args)]
struct EvalCmd {
    /// One of the functions listed by `eval --list`.
    function: Option<String>,
    #[arg(long)]
    list: bool,
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    kappa: Option<Complex<f64>>,
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    mu: Option<Complex<f64>>,
    #[arg(long, value_parser = real_arg, allow_hyphen_values = true)]
    r: Option<f64>,
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    z: Option<Complex<f64>>,
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    a: Option<Complex<f64>>,
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    b: Option<Complex<f64>>,
    #[arg(long, value_parser = real_arg, allow_hyphen_values = true)]
    x: Option<f64>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<i64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_parser = real_arg, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, value_parser = real_arg, allow_hyphen_values = true)]
    nu: Option<f64>,
    #[arg(long, value_parser = real_arg, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long, value_parser = real_arg, allow_hyphen_values = true)]
    phi: Option<f64>,
    #[arg(long, value_parser = real_arg)]
    g: Option<f64>,
    #[arg(long, value_parser = real_arg)]
    k: Option<f64>,
    /// Field point `r,theta,phi`.
    #[arg(long, value_parser = point_arg)]
    p: Option<[f64; 3]>,
    /// Source point `r,theta,phi`.
    #[arg(long, value_parser = point_arg)]
    p0: Option<[f64; 3]>,
    /// Derivative with respect to the argument (Whittaker functions).
    #[arg(long)]
    deriv: bool,
    /// Evaluate at `--digits` digits.
    #[arg(long)]
    extended: bool,
    #[arg(long)]
    lmax: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    /// The acceptance grids.
    Acceptance,
    /// Term diagnostics of the large-order antipodal sum.
    Stress,
}

#[derive(clap::Args)]
struct VerifyCmd {
    identity: Option<String>,
    /// `name=v1,v2,...`; integers accept `a..b`, reals accept `pi` multiples.
    #[arg(long = "param", short = 'p')]
    params: Vec<String>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Relative residual above which a row fails.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long, value_enum, default_value = "table")]
    format: OutFormat,
    /// Write the rows to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Shorthand for `--format json`.
    #[arg(long)]
    json: bool,
    /// Evaluate at `--digits` digits.
    #[arg(long)]
    extended: bool,
    /// Sum exactly `lmax + 1` terms.
    #[arg(long)]
    lmax: Option<usize>,
    /// List the identities and their default grids.
    #[arg(long)]
    list: bool,
}

#[derive(clap::Args)]
struct GreenCmd {
    #[arg(long, value_parser = real_arg)]
    g: f64,
    #[arg(long, value_parser = real_arg)]
    k: f64,
    /// Field point `r,theta,phi`.
    #[arg(long, value_parser = point_arg)]
    p: [f64; 3],
    /// Source point `r,theta,phi`.
    #[arg(long, value_parser = point_arg)]
    p0: [f64; 3],
    /// Also print the free kernel `exp(-kR) / (4 pi R)`.
    #[arg(long)]
    compare: bool,
    #[arg(long)]
    lmax: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(clap::Args)]
struct GoldenCmd {
    #[arg(long)]
    dir: Option<PathBuf>,
    /// Compare against the files instead of regenerating them.
    #[arg(long)]
    check: bool,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn failure(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_FAIL)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Eval(c) => run_eval(c, cli.digits),
        Command::Verify(c) => run_verify(c, cli.digits),
        Command::Green(c) => run_green(c),
        Command::Golden(c) => run_golden(c),
    }
}

#[derive(Serialize)]
struct EvalJson<'a> {
    schema_version: u32,
    function: &'a str,
    params: &'a Params,
    value: CNum,
    n_terms: usize,
    condition_number: Num,
    precision: &'a str,
}

fn run_eval(c: EvalCmd, digits: u32) -> ExitCode {
    if c.list {
        for f in eval::FUNCTIONS {
            println!("{f}");
        }
        return ExitCode::SUCCESS;
    }
    let Some(function) = c.function.as_deref() else {
        return usage("eval needs a function name (see `eval --list`)");
    };
    let args = eval::Args {
        kappa: c.kappa,
        mu: c.mu,
        r: c.r,
        z: c.z,
        a: c.a,
        b: c.b,
        x: c.x,
        l: c.l,
        m: c.m,
        n: c.n,
        alpha: c.alpha,
        nu: c.nu,
        theta: c.theta,
        phi: c.phi,
        g: c.g,
        k: c.k,
        p: c.p,
        p0: c.p0,
        deriv: c.deriv,
        extended: c.extended,
        digits,
        lmax: c.lmax,
    };
    let ev = match eval::evaluate(function, &args) {
        Ok(ev) => ev,
        Err(EvalError::Usage(m)) => return usage(m),
        Err(EvalError::Numeric(m)) => return failure(m),
    };
    if c.json {
        let out = EvalJson {
            schema_version: SCHEMA_VERSION,
            function,
            params: &ev.params,
            value: ev.value.into(),
            n_terms: ev.n_terms,
            condition_number: Num(ev.condition_number),
            precision: &ev.precision,
        };
        println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    } else {
        println!("{function}({}) = {}", ev.params.joined().replace(';', ", "), sig10_c(ev.value));
        println!("n_terms: {}", ev.n_terms);
        println!("condition_number: {}", sig10(ev.condition_number));
        println!("precision: {}", ev.precision);
    }
    ExitCode::SUCCESS
}

#[derive(Serialize)]
struct SweepJson<'a> {
    schema_version: u32,
    rows: &'a [Row],
    passed: usize,
    failed: usize,
}

fn write_table(rows: &[Row], out: &mut dyn Write) -> io::Result<()> {
    writeln!(
        out,
        "{:>5}  {:<34} {:<48} {:>12} {:>12} {:>6} {:>9}  {}",
        "index", "identity", "params", "rel_err", "cond", "terms", "precision", "result"
    )?;
    for r in rows {
        let result = match (&r.error, r.pass) {
            (Some(e), _) => format!("ERROR {e}"),
            (None, true) => "pass".into(),
            (None, false) => "FAIL".into(),
        };
        let rel = match r.exact {
            Some(true) => "exact".to_string(),
            Some(false) => "inexact".to_string(),
            None => format!("{:.3e}", r.rel_err.0),
        };
        writeln!(
            out,
            "{:>5}  {:<34} {:<48} {:>12} {:>12.3e} {:>6} {:>9}  {result}",
            r.index,
            r.identity,
            r.params.joined(),
            rel,
            r.condition_number.0,
            r.n_terms,
            r.precision
        )?;
    }
    Ok(())
}

fn write_csv(rows: &[Row], out: &mut dyn Write) -> Result<(), String> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS).map_err(|e| e.to_string())?;
    let f = |x: f64| if x.is_finite() { sig17(x) } else { String::new() };
    for r in rows {
        let rec = [
            r.index.to_string(),
            r.identity.clone(),
            r.params.joined(),
            f(r.lhs.re.0),
            f(r.lhs.im.0),
            f(r.rhs.re.0),
            f(r.rhs.im.0),
            f(r.abs_err.0),
            f(r.rel_err.0),
            r.n_terms.to_string(),
            f(r.condition_number.0),
            r.precision.clone(),
            r.exact.map_or(String::new(), |b| b.to_string()),
            f(r.threshold.0),
            r.pass.to_string(),
            r.error.clone().unwrap_or_default(),
        ];
        w.write_record(&rec).map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())
}

fn run_verify(c: VerifyCmd, digits: u32) -> ExitCode {
    if c.list {
        for s in IDENTITIES {
            let grid: Vec<String> = s.params.iter().map(|p| format!("{}={}", p.name, p.default)).collect();
            println!("{:<34} {}", s.id, s.summary);
            println!("{:<34} threshold {:e}; {}", "", s.threshold, grid.join(" "));
        }
        return ExitCode::SUCCESS;
    }
    let mut opts = if c.extended {
        VerifyOptions::extended(digits)
    } else {
        VerifyOptions::default()
    };
    opts.lmax = c.lmax;

    let sweeps = match (c.preset, c.identity.as_deref()) {
        (Some(_), Some(_)) => return usage("give either an identity or --preset, not both"),
        (Some(Preset::Stress), None) => return run_stress(digits),
        (Some(Preset::Acceptance), None) => {
            if !c.params.is_empty() || c.threshold.is_some() {
                return usage("--param and --threshold do not apply to presets");
            }
            sweep::acceptance_sweeps()
        }
        (None, Some(id)) => match Sweep::new(id, &c.params, c.threshold) {
            Ok(s) => vec![s],
            Err(m) => return usage(m),
        },
        (None, None) => return usage("verify needs an identity, --preset or --list"),
    };

    let mut rows = Vec::new();
    for s in &sweeps {
        let next = rows.len();
        rows.extend(sweep::run(s, &opts, next));
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    let passed = rows.len() - failed;

    let format = if c.json { OutFormat::Json } else { c.format };
    let mut buf = Vec::new();
    let written = match format {
        OutFormat::Table => write_table(&rows, &mut buf).map_err(|e| e.to_string()),
        OutFormat::Csv => write_csv(&rows, &mut buf),
        OutFormat::Json => {
            let doc = SweepJson {
                schema_version: SCHEMA_VERSION,
                rows: &rows,
                passed,
                failed,
            };
            serde_json::to_writer_pretty(&mut buf, &doc).map_err(|e| e.to_string()).map(|_| buf.push(b'\n'))
        }
    };
    if let Err(e) = written {
        return failure(e);
    }
    match &c.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &buf) {
                return failure(format!("{}: {e}", path.display()));
            }
        }
        None => {
            let _ = io::stdout().write_all(&buf);
        }
    }
    let summary = format!("{passed} passed, {failed} failed");
    if c.output.is_some() || matches!(format, OutFormat::Table) {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

/// Published values of the large-order antipodal sum, to the quoted digits.
const STRESS_PUBLISHED: [(&str, f64); 2] = [("t0", 1.07239e7), ("t145", 3214.65)];
const STRESS_SURROGATE: usize = 168;

fn run_stress(digits: u32) -> ExitCode {
    let s = match large_order_stress(digits) {
        Ok(s) => s,
        Err(e) => return failure(e),
    };
    let six = |x: f64| format!("{x:.5e}").parse::<f64>().unwrap_or(f64::NAN);
    let mut ok = true;
    let mut line = |name: &str, got: f64, want: f64| {
        let hit = six(got) == six(want);
        ok &= hit;
        println!("{name:<10} {:<22} published {want:<12} {}", sig10(got), if hit { "match" } else { "MISMATCH" });
    };
    line(STRESS_PUBLISHED[0].0, s.t0, STRESS_PUBLISHED[0].1);
    line(STRESS_PUBLISHED[1].0, s.t145.unwrap_or(f64::NAN), STRESS_PUBLISHED[1].1);
    let sum_ok = (s.alternating_sum - 1.0).abs() <= 1e-6;
    ok &= sum_ok;
    println!(
        "{:<10} {:<22} expected 1            {}",
        "sum",
        sig10(s.alternating_sum),
        if sum_ok { "match" } else { "MISMATCH" }
    );
    let sur_ok = s.surrogate_first_below == Some(STRESS_SURROGATE);
    ok &= sur_ok;
    println!(
        "{:<10} {:<22} published {STRESS_SURROGATE:<12} {}",
        "surrogate",
        s.surrogate_first_below.map_or("none".into(), |l| l.to_string()),
        if sur_ok { "match" } else { "MISMATCH" }
    );
    println!("max term {} at l = {}, {} terms, {} digits", sig10(s.max_term), s.argmax, s.n_terms, s.digits);
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

#[derive(Serialize)]
struct GreenJson {
    schema_version: u32,
    params: Params,
    hostler: Num,
    partial_wave: Num,
    lmax_used: usize,
    residual: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    free: Option<Num>,
}

fn run_green(c: GreenCmd) -> ExitCode {
    let (p, p0) = match (eval::point(c.p), eval::point(c.p0)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(EvalError::Usage(m) | EvalError::Numeric(m)), _) | (_, Err(EvalError::Usage(m) | EvalError::Numeric(m))) => {
            return usage(m)
        }
    };
    let params = match CoulombParams::new(c.g, c.k) {
        Ok(x) => x,
        Err(e) => return usage(e),
    };
    let opts = VerifyOptions {
        lmax: c.lmax,
        ..Default::default()
    };
    let h = match hostler_green(params, p, p0) {
        Ok(h) => h,
        Err(e) => return usage(e),
    };
    let w = match partial_wave_green(params, p, p0, &opts) {
        Ok(w) => w,
        Err(e) => return usage(e),
    };
    let residual = (h - w.value).abs() / h.abs().max(w.value.abs());
    let lmax_used = w.diag.n_terms.saturating_sub(1);
    let free = c.compare.then(|| {
        let big_r = pair_geometry(&p, &p0).big_r;
        (-c.k * big_r).exp() / (4.0 * std::f64::consts::PI * big_r)
    });
    // canonical order so that swapping the points cannot change the output
    let (pa, pb) = if (p.r, p.theta, p.phi) <= (p0.r, p0.theta, p0.phi) { (p, p0) } else { (p0, p) };
    let pt = |q: &hostler_core::green::SphericalPoint| format!("{},{},{}", q.r, q.theta, q.phi);
    let shown = Params(vec![
        ("g".into(), format!("{}", c.g)),
        ("k".into(), format!("{}", c.k)),
        ("points".into(), format!("({}) ({})", pt(&pa), pt(&pb))),
    ]);
    if c.json {
        let doc = GreenJson {
            schema_version: SCHEMA_VERSION,
            params: shown,
            hostler: Num(h),
            partial_wave: Num(w.value),
            lmax_used,
            residual: Num(residual),
            free: free.map(Num),
        };
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        println!("{}", shown.joined().replace(';', ", "));
        println!("hostler:      {}", sig10(h));
        println!("partial_wave: {}", sig10(w.value));
        println!("lmax used:    {lmax_used}");
        println!("residual:     {residual:.3e}");
        if let Some(f) = free {
            println!("free kernel:  {}", sig10(f));
        }
    }
    ExitCode::SUCCESS
}

fn run_golden(c: GoldenCmd) -> ExitCode {
    let dir = c
        .dir
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden"));
    if !c.check {
        return match golden::write_all(&dir) {
            Ok(paths) => {
                for p in paths {
                    println!("wrote {}", p.display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => failure(e),
        };
    }
    let mut failed = 0;
    for g in golden::Group::ALL {
        let path = dir.join(g.file_name());
        let file = match golden::load(&path) {
            Ok(f) => f,
            Err(e) => return failure(e),
        };
        for chk in golden::check_file(&file) {
            if !chk.pass {
                failed += 1;
            }
            println!(
                "[{}] {:<32} rel_err {:.2e} (tolerance {:.0e}) {}",
                if chk.pass { "PASS" } else { "FAIL" },
                chk.identity_id,
                chk.rel_err,
                chk.tolerance,
                chk.detail
            );
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        failure(format!("{failed} golden records disagree"))
    }
}
