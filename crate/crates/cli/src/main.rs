use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use quasilr::algebra::parse_rational;
use quasilr::complexity::analyze;
use quasilr::diophantine::{estimates_csv, parse_schedule};
use quasilr::empirics::{complexity_csv, complexity_of, cutregions_csv, parse_radii, pw_estimate, repetitivity_csv, repetitivity_of};
use quasilr::io::{parse_scheme, pattern_csv};
use quasilr::report::{analysis_report, diophantine_report, DiophantineConfig, Selection};
use quasilr::scheme::Scheme;
use quasilr::Error;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "quasilr", version, about = "Exact analysis of polytopal cut-and-project schemes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Cap on worker threads (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Decimal digits in CSV output.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=1000))]
    precision: u32,
}

#[derive(Args)]
struct SchemeArg {
    /// Scheme description (JSON).
    #[arg(long)]
    scheme: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the standing assumptions; exit 0 iff all pass.
    Validate(SchemeArg),
    /// Complexity exponent, property C, flag groups, decomposition, homogeneity.
    Analyze {
        #[command(flatten)]
        s: SchemeArg,
        /// Largest scale tried in the weak homogeneity search.
        #[arg(long, default_value_t = 12)]
        nmax: u32,
        /// Also write analysis.json here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Diophantine checks and the combined LR verdict.
    Diophantine(DiophArgs),
    /// Points of the pattern in the box of radius L (CSV).
    Generate {
        #[command(flatten)]
        s: SchemeArg,
        /// Half-width L of the box, a rational.
        #[arg(long = "box")]
        l: String,
        /// Write points.csv here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Patch counts, repetitivity and cut-region tables over a radius sweep.
    Empirics(EmpiricsArgs),
}

#[derive(Args)]
struct DiophArgs {
    #[command(flatten)]
    s: SchemeArg,
    /// Radii R, as "2^a..2^b" or a comma list.
    #[arg(long, default_value = "2^4..2^16")]
    schedule: String,
    /// Largest scale tried in the weak homogeneity search.
    #[arg(long, default_value_t = 12)]
    nmax: u32,
    /// Scale N for D_F (default: the homogeneity scale, else 1).
    #[arg(long)]
    scale_n: Option<u32>,
    /// Run check D (with none of --d, --df, --flag, all applicable checks run).
    #[arg(long)]
    d: bool,
    /// Run check D_F.
    #[arg(long)]
    df: bool,
    /// Run the flag-group condition.
    #[arg(long)]
    flag: bool,
    /// Targets per factor for D_F.
    #[arg(long)]
    max_targets: Option<usize>,
    /// Flag-pair runs for the flag-group condition.
    #[arg(long)]
    max_runs: Option<usize>,
    /// Also write diophantine.json and the c(R) tables here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EmpiricsArgs {
    #[command(flatten)]
    s: SchemeArg,
    /// Increasing positive radii, comma separated.
    #[arg(long)]
    radii: String,
    /// Half-width L of the sampled box; needs L >= 4 max(r).
    #[arg(long = "box")]
    l: String,
    /// Directory for the CSV tables.
    #[arg(long)]
    out: PathBuf,
    /// Homogeneity bound for the analysis that fixes the exponent α.
    #[arg(long, default_value_t = 12)]
    nmax: u32,
    /// Probe points for the covering radius.
    #[arg(long, default_value_t = 256)]
    probes: usize,
    /// Seed for the probe points.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Fail {
    Lib(Error),
    Io(String),
    Invalid(Vec<String>),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Invalid(_) => 1,
            Fail::Io(_) => 2,
            Fail::Lib(e) => match e {
                Error::Parse(_) | Error::Parameter(_) => 2,
                Error::UnsupportedDimension(_) => 3,
                Error::Singular { .. } => 4,
                _ => 1,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Fail::Lib(e) => e.to_string(),
            Fail::Io(m) => m.clone(),
            Fail::Invalid(f) => format!("invalid scheme: {}", f.join("; ")),
        }
    }
}

type Res<T> = std::result::Result<T, Fail>;

fn read_scheme(p: &Path) -> Res<Scheme> {
    let text = fs::read_to_string(p).map_err(|e| Fail::Io(format!("{}: {e}", p.display())))?;
    Ok(parse_scheme(&text)?)
}

/// Loads and refuses schemes that break an assumption.
fn load(p: &Path) -> Res<Scheme> {
    let s = read_scheme(p)?;
    let v = s.validate();
    if !v.valid {
        return Err(Fail::Invalid(v.failures));
    }
    Ok(s)
}

fn json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("serializable") + "\n"
}

fn write(dir: &Path, name: &str, body: &str) -> Res<()> {
    fs::create_dir_all(dir).map_err(|e| Fail::Io(format!("{}: {e}", dir.display())))?;
    let p = dir.join(name);
    fs::write(&p, body).map_err(|e| Fail::Io(format!("{}: {e}", p.display())))
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|_| out.flush());
}

fn rational(s: &str) -> Res<BigRational> {
    Ok(parse_rational(s.trim())?)
}

fn run(cli: Cli) -> Res<u8> {
    let prec = cli.precision;
    match cli.cmd {
        Cmd::Validate(a) => {
            let s = read_scheme(&a.scheme)?;
            let v = s.validate();
            emit(&json(&v));
            Ok(if v.valid { 0 } else { 1 })
        }
        Cmd::Analyze { s, nmax, out } => {
            let a = analyze(&load(&s.scheme)?, nmax)?;
            let body = json(&analysis_report(&a));
            if let Some(dir) = out {
                write(&dir, "analysis.json", &body)?;
            }
            emit(&body);
            Ok(0)
        }
        Cmd::Diophantine(x) => {
            let a = analyze(&load(&x.s.scheme)?, x.nmax)?;
            let cfg = DiophantineConfig {
                schedule: parse_schedule(&x.schedule)?,
                scale_n: x.scale_n,
                max_targets: x.max_targets,
                max_runs: x.max_runs,
                selection: Selection { d: x.d, df: x.df, flag: x.flag },
            };
            let (report, runs) = diophantine_report(&a, &cfg)?;
            let body = json(&report);
            if let Some(dir) = &x.out {
                write(dir, "diophantine.json", &body)?;
                let p = prec as usize;
                if let Some(d) = &runs.d {
                    for f in &d.factors {
                        write(dir, &format!("D_factor{}.csv", f.factor), &estimates_csv(&f.estimates, p))?;
                    }
                }
                if let Some(df) = &runs.df {
                    for f in &df.factors {
                        write(dir, &format!("DF_factor{}.csv", f.factor), &estimates_csv(&f.estimates, p))?;
                    }
                }
                if let Some(fl) = &runs.flag {
                    let est: Vec<_> = fl.runs.iter().map(|r| r.estimate.clone()).collect();
                    write(dir, "flag_runs.csv", &estimates_csv(&est, p))?;
                }
            }
            emit(&body);
            Ok(0)
        }
        Cmd::Generate { s, l, out } => {
            let s = load(&s.scheme)?.reduce_cyclic()?;
            let p = s.generate_pattern(&rational(&l)?)?;
            let csv = pattern_csv(&p, s.d, s.k, prec);
            match out {
                Some(dir) => write(&dir, "points.csv", &csv)?,
                None => emit(&csv),
            }
            Ok(0)
        }
        Cmd::Empirics(x) => {
            let original = load(&x.s.scheme)?;
            let alpha = analyze(&original, x.nmax)?.alpha as u32;
            let s = original.reduce_cyclic()?;
            let radii = parse_radii(&x.radii)?;
            let l = rational(&x.l)?;
            let p = prec as usize;
            let pattern = s.generate_pattern(&l)?;
            write(&x.out, "points.csv", &pattern_csv(&pattern, s.d, s.k, prec))?;
            let table = complexity_of(&pattern, &radii, alpha)?;
            if table.drift {
                eprintln!("warning: p_hat/r^{alpha} drifts monotonically by more than a factor 10");
            }
            write(&x.out, "complexity.csv", &complexity_csv(&table, p))?;
            let rep = repetitivity_of(&pattern, s.d, &radii, x.probes, x.seed)?;
            write(&x.out, "repetitivity.csv", &repetitivity_csv(&rep, &l, p))?;
            match pw_estimate(&s, &radii) {
                Ok(rows) => write(&x.out, "cutregions.csv", &cutregions_csv(&rows, p))?,
                Err(e @ Error::UnsupportedDimension(_)) => {
                    eprintln!("skipping cutregions.csv: {e}");
                    return Ok(3);
                }
                Err(e) => return Err(e.into()),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
