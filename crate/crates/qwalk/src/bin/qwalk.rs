//! Command-line front end: simulations, spectral verification and sweeps,
//! emitting CSV/JSON for external plotting.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 numerical failure.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use qwalk::collapsed::build_collapsed_unitary;
use qwalk::error::Error;
use qwalk::full::{evolve, uniform_state_capped};
use qwalk::search::{
    grover_reference, probability_curve, run_search_at, t_final, t_final_stated, Backend,
};
use qwalk::spectral::{arc_threshold, eigendecompose_operator, DEFAULT_TOL_EIG};
use qwalk::verify::verify_range;
use qwalk::WalkConfig;

#[derive(Parser)]
#[command(
    name = "qwalk",
    version,
    about = "Quantum walk search on the hypercube: simulation, spectra, verification"
)]
struct Cli {
    /// JSON file preloading flag values; explicit flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TfConvention {
    /// t_f = round((pi/2) sqrt(2^{n-1})), the derived value (default).
    Derived,
    /// t_f = round((pi/2) sqrt(2^n)).
    Stated,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Full,
    Collapsed,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Full => Backend::Full,
            BackendArg::Collapsed => Backend::Collapsed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalue spectra of the collapsed U and U' for one n.
    Spectrum {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        tol_eig: Option<f64>,
    },
    /// Full-space state snapshot after a number of perturbed steps.
    Evolve {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long)]
        target: Option<u64>,
        /// Evolve under the unperturbed walk instead.
        #[arg(long)]
        unperturbed: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the search and report the exact and sampled success probability.
    Search {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        target: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_enum)]
        backend: Option<BackendArg>,
        #[arg(long, value_enum)]
        t_f_convention: Option<TfConvention>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Marked-node probability after each step up to t-max.
    Curve {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        t_max: Option<u64>,
        #[arg(long)]
        target: Option<u64>,
        #[arg(long, value_enum)]
        backend: Option<BackendArg>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the full invariant suite for each even n in a range.
    Verify {
        /// Inclusive range, e.g. 4..12.
        #[arg(long)]
        n_range: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Walk vs closed-form Grover, one row per n.
    Compare {
        /// Inclusive range, e.g. 4..12.
        #[arg(long)]
        n_range: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Flag defaults loadable from --config.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    n: Option<usize>,
    n_range: Option<String>,
    target: Option<u64>,
    steps: Option<u64>,
    seed: Option<u64>,
    trials: Option<usize>,
    backend: Option<String>,
    format: Option<String>,
    t_max: Option<u64>,
    tol_eig: Option<f64>,
    t_f_convention: Option<String>,
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file_cfg = match &cli.config {
        Some(path) => match load_config(path) {
            Ok(c) => c,
            Err(msg) => {
                eprintln!("qwalk: {msg}");
                return ExitCode::from(2);
            }
        },
        None => FileConfig::default(),
    };
    match run(cli.command, &file_cfg) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("qwalk: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn load_config(path: &PathBuf) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::EigenFailure { .. }
        | Error::NotOrthogonal { .. }
        | Error::ArcCount { .. }
        | Error::NotNormalized { .. } => 3,
        _ => 2,
    }
}

fn usage(msg: String) -> Error {
    Error::Io(std::io::Error::new(std::io::ErrorKind::InvalidInput, msg))
}

fn parse_range(spec: &str) -> Result<(usize, usize), Error> {
    let parts: Vec<&str> = spec.split("..").collect();
    if parts.len() != 2 {
        return Err(usage(format!("invalid n-range '{spec}' (expected MIN..MAX)")));
    }
    let lo = parts[0]
        .parse()
        .map_err(|_| usage(format!("invalid n-range lower bound '{}'", parts[0])))?;
    let hi = parts[1]
        .parse()
        .map_err(|_| usage(format!("invalid n-range upper bound '{}'", parts[1])))?;
    if lo > hi {
        return Err(usage(format!("empty n-range '{spec}'")));
    }
    Ok((lo, hi))
}

fn parse_backend(s: &str) -> Result<Backend, Error> {
    s.parse().map_err(usage)
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn run(command: Command, file_cfg: &FileConfig) -> Result<u8, Error> {
    match command {
        Command::Spectrum {
            n,
            format,
            output,
            tol_eig,
        } => {
            let n = n
                .or(file_cfg.n)
                .ok_or_else(|| usage("spectrum requires --n".into()))?;
            let tol_eig = tol_eig.or(file_cfg.tol_eig).unwrap_or(DEFAULT_TOL_EIG);
            let format = format.unwrap_or(match file_cfg.format.as_deref() {
                Some("json") => Format::Json,
                _ => Format::Csv,
            });
            let output = output.or_else(|| file_cfg.output.clone());
            cmd_spectrum(n, tol_eig, format, &output)
        }
        Command::Evolve {
            n,
            steps,
            target,
            unperturbed,
            output,
        } => {
            let n = n
                .or(file_cfg.n)
                .ok_or_else(|| usage("evolve requires --n".into()))?;
            let steps = steps.or(file_cfg.steps).unwrap_or(0);
            let target = target.or(file_cfg.target).unwrap_or(0);
            let output = output.or_else(|| file_cfg.output.clone());
            let cfg = WalkConfig::new(n)?.with_target(target)?;
            cfg.check_capacity()?;
            let state = uniform_state_capped(n, cfg.max_n)?;
            let state = evolve(&state, &cfg, steps, !unperturbed)?;
            let mut text = serde_json::to_string_pretty(&state)?;
            text.push('\n');
            emit(&output, &text)?;
            Ok(0)
        }
        Command::Search {
            n,
            target,
            seed,
            trials,
            backend,
            t_f_convention,
            output,
        } => {
            let n = n
                .or(file_cfg.n)
                .ok_or_else(|| usage("search requires --n".into()))?;
            let target = target.or(file_cfg.target).unwrap_or(0);
            let seed = seed.or(file_cfg.seed).unwrap_or(0);
            let trials = trials.or(file_cfg.trials).unwrap_or(0);
            let backend: Backend = match backend {
                Some(b) => b.into(),
                None => match file_cfg.backend.as_deref() {
                    Some(s) => parse_backend(s)?,
                    None => Backend::Collapsed,
                },
            };
            let convention = t_f_convention.unwrap_or(match file_cfg.t_f_convention.as_deref() {
                Some("stated") => TfConvention::Stated,
                _ => TfConvention::Derived,
            });
            let output = output.or_else(|| file_cfg.output.clone());
            let cfg = WalkConfig::new(n)?.with_target(target)?.with_seed(seed);
            let t_f = match convention {
                TfConvention::Derived => t_final(n),
                TfConvention::Stated => t_final_stated(n),
            };
            let outcome = run_search_at(&cfg, backend, t_f, trials)?;
            let mut text = serde_json::to_string_pretty(&outcome)?;
            text.push('\n');
            emit(&output, &text)?;
            Ok(0)
        }
        Command::Curve {
            n,
            t_max,
            target,
            backend,
            format,
            output,
        } => {
            let n = n
                .or(file_cfg.n)
                .ok_or_else(|| usage("curve requires --n".into()))?;
            let t_max = t_max
                .or(file_cfg.t_max)
                .ok_or_else(|| usage("curve requires --t-max".into()))?;
            if t_max < 1 {
                return Err(usage("curve requires --t-max >= 1".into()));
            }
            let target = target.or(file_cfg.target).unwrap_or(0);
            let backend: Backend = match backend {
                Some(b) => b.into(),
                None => match file_cfg.backend.as_deref() {
                    Some(s) => parse_backend(s)?,
                    None => Backend::Collapsed,
                },
            };
            let format = format.unwrap_or(match file_cfg.format.as_deref() {
                Some("json") => Format::Json,
                _ => Format::Csv,
            });
            let output = output.or_else(|| file_cfg.output.clone());
            let cfg = WalkConfig::new(n)?.with_target(target)?;
            let curve = probability_curve(&cfg, t_max, backend)?;
            let text = match format {
                Format::Csv => {
                    let mut s = String::from("#schema=qwalk.curve.v1\nt,p_target\n");
                    for (t, p) in &curve {
                        s.push_str(&format!("{t},{p}\n"));
                    }
                    s
                }
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&curve)?;
                    s.push('\n');
                    s
                }
            };
            emit(&output, &text)?;
            Ok(0)
        }
        Command::Verify { n_range, output } => {
            let spec = n_range
                .or_else(|| file_cfg.n_range.clone())
                .ok_or_else(|| usage("verify requires --n-range MIN..MAX".into()))?;
            let (lo, hi) = parse_range(&spec)?;
            let output = output.or_else(|| file_cfg.output.clone());
            let report = verify_range(lo, hi)?;
            let mut text = serde_json::to_string_pretty(&report)?;
            text.push('\n');
            emit(&output, &text)?;
            for c in &report.checks {
                let status = if c.pass { "pass" } else { "FAIL" };
                eprintln!(
                    "{status} n={:<3} {:<28} value={:<12.6e} bound={:.6e}{}",
                    c.n,
                    c.name,
                    c.value,
                    c.bound,
                    if c.enforced { "" } else { " (informational)" }
                );
            }
            Ok(if report.all_pass { 0 } else { 1 })
        }
        Command::Compare { n_range, output } => {
            let spec = n_range
                .or_else(|| file_cfg.n_range.clone())
                .ok_or_else(|| usage("compare requires --n-range MIN..MAX".into()))?;
            let (lo, hi) = parse_range(&spec)?;
            let output = output.or_else(|| file_cfg.output.clone());
            let mut text =
                String::from("#schema=qwalk.compare.v1\nn,t_f_walk,p_walk,iters_grover,p_grover\n");
            for n in lo..=hi {
                let cfg = WalkConfig::new(n)?;
                let outcome = run_search_at(&cfg, Backend::Collapsed, t_final(n), 0)?;
                let (iters, p_grover) = grover_reference(n)?;
                text.push_str(&format!(
                    "{n},{},{},{iters},{p_grover}\n",
                    outcome.t_f, outcome.p_exact
                ));
            }
            emit(&output, &text)?;
            Ok(0)
        }
    }
}

fn cmd_spectrum(
    n: usize,
    tol_eig: f64,
    format: Format,
    output: &Option<PathBuf>,
) -> Result<u8, Error> {
    #[derive(serde::Serialize)]
    struct Row {
        n: usize,
        operator: &'static str,
        re: f64,
        im: f64,
        residual: f64,
        on_arc: bool,
    }
    let mut rows = Vec::new();
    for (perturbed, label) in [(false, "U"), (true, "Uprime")] {
        let op = build_collapsed_unitary(n, perturbed)?;
        let pairs = eigendecompose_operator(&op, tol_eig)?;
        let threshold = arc_threshold(n);
        for p in pairs {
            rows.push(Row {
                n,
                operator: label,
                re: p.value.re,
                im: p.value.im,
                residual: p.residual,
                on_arc: p.value.re > threshold,
            });
        }
    }
    let text = match format {
        Format::Csv => {
            let mut s = String::from("#schema=qwalk.spectrum.v1\nn,operator,re,im,residual,on_arc\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.n, r.operator, r.re, r.im, r.residual, r.on_arc
                ));
            }
            s
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&rows)?;
            s.push('\n');
            s
        }
    };
    emit(output, &text)?;
    Ok(0)
}
