//! Command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};
use zakharov_core::{CaseKind, FdSolver, Grid1D, PhysicalCase, StepConfig};

use crate::config::{self, ConfigFile};
use crate::error::{HarnessError, Result};
use crate::invariants::run_invariant_suite;
use crate::limit::{limit_consistency_check, LimitRow, LimitSpec};
use crate::output::{fmt_sig, render_table, write_csv};
use crate::soliton::{soliton_benchmark, SolitonSpec};
use crate::sweep::{run_sweep, SweepKind, SweepSpec};

#[derive(Debug, Parser)]
#[command(
    name = "zakharov",
    version,
    about = "Finite difference solver and convergence studies for the 1D Zakharov system"
)]
pub struct Cli {
    /// Flat `key = value` file; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Run the invariant suite before the command (or alone).
    #[arg(long, global = true)]
    pub seed_check: bool,
    /// `case-I` or `case-II`.
    #[arg(long, global = true)]
    pub case: Option<String>,
    /// Comma-separated values; fractions like `1/64` are accepted.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub epsilon: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub h: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// Final time.
    #[arg(long = "T", global = true, allow_hyphen_values = true)]
    pub final_time: Option<String>,
    /// `a,b`
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub domain: Option<String>,
    /// `spatial`, `temporal`, `resonance-I` or `resonance-II`.
    #[arg(long, global = true)]
    pub sweep: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the text table.
    #[arg(long, global = true)]
    pub table: bool,
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long = "fp-tol", global = true)]
    pub fp_tol: Option<String>,
    /// Number of cells in a resonance chain.
    #[arg(long, global = true)]
    pub links: Option<usize>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Single run, prints diagnostics and optionally writes the final snapshot.
    Run,
    /// Convergence sweep with self-generated references.
    Sweep,
    /// Distance to the limiting Schrödinger solution for decreasing eps.
    LimitCheck,
    /// Bright-soliton benchmark of the splitting solver.
    SolitonBench,
}

/// Flags merged with the configuration file.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub case: Option<CaseKind>,
    pub epsilons: Option<Vec<f64>>,
    pub hs: Option<Vec<f64>>,
    pub taus: Option<Vec<f64>>,
    pub final_time: Option<f64>,
    pub domain: Option<(f64, f64)>,
    pub sweep: Option<SweepKind>,
    pub out: Option<PathBuf>,
    pub table: bool,
    pub workers: usize,
    pub fp_tol: Option<f64>,
    pub seed_check: bool,
    pub links: Option<usize>,
}

impl Settings {
    pub fn resolve(cli: &Cli, file: &ConfigFile) -> Result<Self> {
        let pick = |flag: &Option<String>, key: &str| {
            flag.clone().or_else(|| file.get(key).map(str::to_string))
        };
        let case = pick(&cli.case, "case")
            .map(|s| CaseKind::from_str(&s).map_err(HarnessError::from))
            .transpose()?;
        let list = |flag: &Option<String>, key: &str| {
            pick(flag, key).map(|s| config::parse_list(&s)).transpose()
        };
        let number = |flag: &Option<String>, key: &str| {
            pick(flag, key)
                .map(|s| config::parse_number(&s))
                .transpose()
        };
        let flag_bool = |set: bool, key: &str| -> Result<bool> {
            Ok(set
                || file
                    .get(key)
                    .map(config::parse_bool)
                    .transpose()?
                    .unwrap_or(false))
        };
        let usize_key = |flag: Option<usize>, key: &str| -> Result<Option<usize>> {
            match flag {
                Some(v) => Ok(Some(v)),
                None => file
                    .get(key)
                    .map(|s| {
                        s.trim().parse::<usize>().map_err(|_| {
                            HarnessError::Config(format!(
                                "{key} must be a positive integer, got '{s}'"
                            ))
                        })
                    })
                    .transpose(),
            }
        };
        let workers = usize_key(cli.workers, "workers")?
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        if workers == 0 {
            return Err(HarnessError::Config("workers must be at least 1".into()));
        }
        Ok(Self {
            case,
            epsilons: list(&cli.epsilon, "epsilon")?,
            hs: list(&cli.h, "h")?,
            taus: list(&cli.tau, "tau")?,
            final_time: number(&cli.final_time, "T")?,
            domain: pick(&cli.domain, "domain")
                .map(|s| config::parse_domain(&s))
                .transpose()?,
            sweep: pick(&cli.sweep, "sweep")
                .map(|s| SweepKind::from_str(&s))
                .transpose()?,
            out: cli
                .out
                .clone()
                .or_else(|| file.get("out").map(PathBuf::from)),
            table: flag_bool(cli.table, "table")?,
            workers,
            fp_tol: number(&cli.fp_tol, "fp-tol")?,
            seed_check: flag_bool(cli.seed_check, "seed-check")?,
            links: usize_key(cli.links, "links")?,
        })
    }

    fn step_config(&self) -> Result<StepConfig> {
        let mut step = StepConfig::default();
        if let Some(tol) = self.fp_tol {
            step.fp_tol = tol;
        }
        step.validate()?;
        Ok(step)
    }
}

fn single(name: &str, values: &Option<Vec<f64>>) -> Result<Option<f64>> {
    match values.as_deref() {
        None => Ok(None),
        Some([v]) => Ok(Some(*v)),
        Some(v) => Err(HarnessError::Config(format!(
            "--{name} takes a single value here, got {}",
            v.len()
        ))),
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let settings = Settings::resolve(cli, &file)?;
    if settings.seed_check {
        seed_check()?;
    }
    match cli.command {
        Some(Command::Run) => cmd_run(&settings),
        Some(Command::Sweep) => cmd_sweep(&settings),
        Some(Command::LimitCheck) => cmd_limit(&settings),
        Some(Command::SolitonBench) => cmd_soliton(&settings),
        None if settings.seed_check => Ok(()),
        None => Err(HarnessError::Config(
            "no command given (run, sweep, limit-check, soliton-bench or --seed-check)".into(),
        )),
    }
}

fn seed_check() -> Result<()> {
    let results = run_invariant_suite(20240601)?;
    let mut failed = Vec::new();
    for r in &results {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        println!(
            "{status} {:<32} {:.3e} (tol {:.0e})",
            r.name, r.value, r.tolerance
        );
        if !r.passed() {
            failed.push(r.name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(HarnessError::Invariant(failed.join(", ")))
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn cmd_run(s: &Settings) -> Result<()> {
    let case_kind = s.case.unwrap_or(CaseKind::CaseII);
    let eps = single("epsilon", &s.epsilons)?.unwrap_or(1.0);
    let h = single("h", &s.hs)?.unwrap_or(0.1);
    let tau = single("tau", &s.taus)?.unwrap_or(1e-3);
    let t = s.final_time.unwrap_or(1.0);
    let domain = s.domain.unwrap_or((-200.0, 200.0));
    let case = PhysicalCase::builtin(case_kind, eps, domain, t)?;
    let grid = Grid1D::with_spacing(domain.0, domain.1, h)?;
    let solver = FdSolver::new(&case, &grid, tau, s.step_config()?)?;
    let report = solver.run(&[t])?;
    let snap = &report.snapshots[0];
    println!("case {case_kind}, eps {eps}, {grid}, tau {tau}, T {t}");
    println!(
        "steps {}, max fixed-point iterations {}",
        report.steps, report.max_iterations
    );
    println!("relative parity defect {:.3e}", report.max_parity_defect);
    println!(
        "||E(T)|| {}  ||N(T)|| {}",
        fmt_sig(snap.e.norm_l2()),
        fmt_sig(snap.n.norm_l2())
    );
    if let Some(path) = &s.out {
        let mut w = File::create(path).map_err(io_err(path))?;
        let mut text = String::from("x,re_e,im_e,abs_e,f,n\n");
        for (j, x) in grid.nodes().into_iter().enumerate() {
            let e = snap.e.get(j);
            text.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt_sig(x),
                fmt_sig(e.re),
                fmt_sig(e.im),
                fmt_sig(e.norm()),
                fmt_sig(snap.f.get(j)),
                fmt_sig(snap.n.get(j))
            ));
        }
        w.write_all(text.as_bytes()).map_err(io_err(path))?;
    }
    Ok(())
}

/// Sweep specification from the defaults of `kind` overridden by the settings.
pub fn sweep_spec(s: &Settings) -> Result<SweepSpec> {
    let kind = s
        .sweep
        .ok_or_else(|| HarnessError::Config("sweep needs --sweep <kind>".into()))?;
    let case = s.case.unwrap_or(match kind {
        SweepKind::ResonanceI => CaseKind::CaseI,
        _ => CaseKind::CaseII,
    });
    let mut spec = SweepSpec::table_default(kind, case);
    match kind {
        SweepKind::Spatial => {
            if let Some(tau) = single("tau", &s.taus)? {
                spec.taus = vec![tau];
            }
            if let Some(hs) = &s.hs {
                spec.hs = hs.clone();
            }
            if let Some(e) = &s.epsilons {
                spec.epsilons = e.clone();
            }
        }
        SweepKind::Temporal => {
            if let Some(h) = single("h", &s.hs)? {
                spec.hs = vec![h];
            }
            if let Some(taus) = &s.taus {
                spec.taus = taus.clone();
            }
            if let Some(e) = &s.epsilons {
                spec.epsilons = e.clone();
            }
        }
        SweepKind::ResonanceI | SweepKind::ResonanceII => {
            let eps0 = single("epsilon", &s.epsilons)?.unwrap_or(spec.epsilons[0]);
            let tau0 = single("tau", &s.taus)?.unwrap_or(spec.taus[0]);
            let h = single("h", &s.hs)?.unwrap_or(spec.hs[0]);
            let links = s.links.unwrap_or(spec.epsilons.len());
            spec = SweepSpec::resonance(kind, case, eps0, tau0, links, h)?;
        }
    }
    if let Some(d) = s.domain {
        spec.domain = d;
    }
    if let Some(t) = s.final_time {
        spec.final_time = t;
    }
    spec.step = s.step_config()?;
    Ok(spec)
}

fn cmd_sweep(s: &Settings) -> Result<()> {
    let spec = sweep_spec(s)?;
    let outcome = run_sweep(&spec, s.workers)?;
    if let Some(c) = &outcome.stability {
        println!(
            "reference stability at eps={} h={} tau={}: e {} with refinement {} vs {} with {}, change {:.2}%",
            c.epsilon,
            c.h,
            c.tau,
            fmt_sig(c.e_err),
            c.factor,
            fmt_sig(c.e_err_half_factor),
            c.factor / 2,
            100.0 * c.relative_change
        );
        if !c.passed {
            return Err(HarnessError::Invariant(format!(
                "reference not converged: doubling the refinement changed the error by {:.1}%",
                100.0 * c.relative_change
            )));
        }
    }
    println!(
        "max relative parity defect {:.3e}",
        outcome.max_parity_defect
    );
    if let Some(path) = &s.out {
        write_csv(path, &outcome.records)?;
    }
    if s.table || s.out.is_none() {
        print!("{}", render_table(&outcome.records));
    }
    let failed: Vec<String> = outcome
        .failures()
        .map(|r| format!("eps={} h={} tau={}", r.epsilon, r.h, r.tau))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(HarnessError::Invariant(format!(
            "failed cells: {}",
            failed.join("; ")
        )))
    }
}

fn cmd_limit(s: &Settings) -> Result<()> {
    let case = s.case.unwrap_or(CaseKind::CaseI);
    let epsilons = s
        .epsilons
        .clone()
        .unwrap_or_else(|| vec![0.25, 0.125, 0.0625]);
    let mut spec = LimitSpec::new(case, epsilons);
    if let Some(h) = single("h", &s.hs)? {
        spec.h = h;
    }
    if let Some(tau) = single("tau", &s.taus)? {
        spec.tau = tau;
    }
    if let Some(d) = s.domain {
        spec.domain = d;
    }
    if let Some(t) = s.final_time {
        spec.final_time = t;
    }
    spec.step = s.step_config()?;
    let rows = limit_consistency_check(&spec, s.workers)?;
    println!(
        "{:<10}{:>14}{:>14}{:>10}",
        "eps", "split dt", "difference", "ratio"
    );
    for r in &rows {
        println!(
            "{:<10}{:>14}{:>14}{:>10}",
            crate::output::eps_label(r.epsilon),
            format!("{:.3e}", r.split_dt),
            format!("{:.3e}", r.difference),
            r.ratio.map_or("-".into(), |q| format!("{q:.2}"))
        );
    }
    if let Some(path) = &s.out {
        write_limit_csv(path, &rows)?;
    }
    Ok(())
}

fn write_limit_csv(path: &Path, rows: &[LimitRow]) -> Result<()> {
    let mut text = String::from("epsilon,split_dt,difference,ratio\n");
    for r in rows {
        text.push_str(&format!(
            "{},{},{},{}\n",
            fmt_sig(r.epsilon),
            fmt_sig(r.split_dt),
            fmt_sig(r.difference),
            r.ratio.map_or("-".into(), fmt_sig)
        ));
    }
    std::fs::write(path, text).map_err(io_err(path))
}

fn cmd_soliton(s: &Settings) -> Result<()> {
    let mut spec = SolitonSpec::default();
    if let Some(d) = s.domain {
        spec.domain = d;
    }
    if let Some(t) = s.final_time {
        spec.final_time = t;
    }
    if let Some(dt) = single("tau", &s.taus)? {
        spec.dt = dt;
    }
    if let Some(h) = single("h", &s.hs)? {
        spec.cells = Grid1D::with_spacing(spec.domain.0, spec.domain.1, h)?.cells();
    }
    let report = soliton_benchmark(&spec)?;
    println!(
        "soliton a={} M={} dt={} T={}: L2 error {:.3e}, max mass drift {:.3e}, {} steps",
        spec.amplitude,
        spec.cells,
        spec.dt,
        spec.final_time,
        report.l2_error,
        report.max_mass_drift,
        report.steps
    );
    Ok(())
}
