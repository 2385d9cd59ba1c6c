use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qeuclid_core::frame::GammaChoice;
use qeuclid_core::ncalgebra::Algebra;
use qeuclid_core::scalar::{Field, IndexData, Params, RatFunc};
use qeuclid_core::suite::{self, CalculusChoice, ConfigError, ExportItem, Mode, RunConfig, SYMBOLIC_LIMIT};

#[derive(Parser)]
#[command(name = "qeuclid", version, about = "Verify and export the quantum Euclidean spaces R^N_q")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the identity suite and write a JSON report.
    Verify(VerifyArgs),
    /// Write R̂, g, the projectors, λ_a, frame components and L± entries as JSON.
    Export(ExportArgs),
}

#[derive(Args)]
struct Common {
    /// Dimensions, as a list (3,4) or a range (3-5).
    #[arg(long = "N", default_value = "3")]
    dims: String,
    /// symbolic or numeric.
    #[arg(long, default_value = "symbolic")]
    mode: String,
    /// Seed for the numeric sample points.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Normalization overrides, e.g. "gamma0=2*default,gammabar1=[s^2]".
    #[arg(long, default_value = "")]
    gamma: String,
    /// Run symbolic mode beyond N = 5.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// unbarred, barred or both.
    #[arg(long, default_value = "both")]
    calculus: String,
    /// Number of numeric sample points.
    #[arg(long, default_value_t = 3)]
    samples: usize,
    /// Comma-separated identity id prefixes.
    #[arg(long, default_value = "")]
    only: String,
    /// Also run the negative controls.
    #[arg(long)]
    controls: bool,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    common: Common,
    /// rhat, metric, projectors, lambda, frame, lmatrix or all.
    #[arg(long, default_value = "all")]
    what: String,
    /// Output directory; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_dims(s: &str) -> Result<Vec<usize>, ConfigError> {
    let bad = || ConfigError::Dim(format!("cannot read '{s}'"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(String::from).collect()
}

fn gamma(s: &str) -> Result<GammaChoice, ConfigError> {
    s.parse().map_err(|e: qeuclid_core::frame::FrameError| ConfigError::Gamma(e.to_string()))
}

fn init_threads() {
    if let Some(n) = std::env::var("QEUCLID_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second initialization only happens in-process, where the pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

enum Failure {
    Config(String),
    Io(String),
}

fn write_out(path: Option<&Path>, body: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{body}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Io(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn verify(a: VerifyArgs) -> Result<bool, Failure> {
    let cfg = RunConfig {
        dims: parse_dims(&a.common.dims).map_err(|e| Failure::Config(e.to_string()))?,
        calculus: a.calculus.parse::<CalculusChoice>().map_err(|e| Failure::Config(e.to_string()))?,
        mode: a.common.mode.parse::<Mode>().map_err(|e| Failure::Config(e.to_string()))?,
        samples: a.samples,
        seed: a.common.seed,
        gamma: gamma(&a.common.gamma).map_err(|e| Failure::Config(e.to_string()))?,
        only: split_list(&a.only),
        controls: a.controls,
        force: a.common.force,
    };
    let report = suite::run(&cfg).map_err(|e| Failure::Config(e.to_string()))?;
    write_out(a.out.as_deref(), &report.to_json())?;
    for r in report.failures() {
        eprintln!(
            "FAIL {} N={}{}{}{}: {}",
            r.id,
            r.n,
            r.calculus.map(|k| format!(" {k}")).unwrap_or_default(),
            r.sigma.map(|s| format!(" S={s}")).unwrap_or_default(),
            r.sample.as_deref().map(|s| format!(" s0={s}")).unwrap_or_default(),
            r.witness.as_deref().unwrap_or("held but was expected to fail"),
        );
    }
    let s = &report.summary;
    eprintln!("{} records, {} ok, {} not ok: {}", s.total, s.ok, s.not_ok, if s.green { "green" } else { "red" });
    Ok(s.green)
}

fn export_all<F: Field>(alg: &Algebra<F>, g: &GammaChoice, items: &[ExportItem], n: usize, out: Option<&Path>) -> Result<(), Failure> {
    for &item in items {
        let v = suite::export(alg, g, item).map_err(|e| Failure::Config(e.to_string()))?;
        let body = serde_json::to_string_pretty(&v).expect("json value serializes");
        match out {
            Some(dir) => write_out(Some(&dir.join(format!("{}_N{n}.json", item.name()))), &body)?,
            None => write_out(None, &body)?,
        }
    }
    Ok(())
}

fn export(a: ExportArgs) -> Result<(), Failure> {
    let cfg = |e: ConfigError| Failure::Config(e.to_string());
    let dims = parse_dims(&a.common.dims).map_err(cfg)?;
    let mode = a.common.mode.parse::<Mode>().map_err(cfg)?;
    let g = gamma(&a.common.gamma).map_err(cfg)?;
    let items: Vec<ExportItem> = if a.what == "all" {
        ExportItem::ALL.to_vec()
    } else {
        split_list(&a.what).iter().map(|w| w.parse()).collect::<Result<_, _>>().map_err(cfg)?
    };
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    }
    for n in dims {
        if mode == Mode::Symbolic && n > SYMBOLIC_LIMIT && !a.common.force {
            return Err(cfg(ConfigError::Budget(n)));
        }
        let idx = IndexData::new(n).map_err(|e| Failure::Config(format!("--N: {e}")))?;
        let alg_err = |e: qeuclid_core::ncalgebra::AlgebraError| Failure::Config(format!("--N {n}: {e}"));
        match mode {
            Mode::Symbolic => {
                let alg = Algebra::new(&idx, &Params::<RatFunc>::symbolic()).map_err(alg_err)?;
                export_all(&alg, &g, &items, n, a.out.as_deref())?;
            }
            Mode::Numeric => {
                let s0 = suite::sample_points(a.common.seed, 1).remove(0);
                let p = Params::numeric(s0).map_err(|e| Failure::Config(e.to_string()))?;
                let alg = Algebra::new(&idx, &p).map_err(alg_err)?;
                export_all(&alg, &g, &items, n, a.out.as_deref())?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    let res = match cli.cmd {
        Cmd::Verify(a) => verify(a).map(|green| if green { 0 } else { 1 }),
        Cmd::Export(a) => export(a).map(|_| 0),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
