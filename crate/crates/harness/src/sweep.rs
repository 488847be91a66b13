//! Convergence sweeps against a fine-grid self-reference.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use log::info;
use rayon::prelude::*;
use zakharov_core::scheme::{self, Snapshot};
use zakharov_core::{CaseKind, Grid1D, PhysicalCase, StepConfig};

use crate::error::{HarnessError, Result};
use crate::measure::{compare, observed_order, ErrorPair};
use crate::output::fmt_sig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SweepKind {
    Spatial,
    Temporal,
    ResonanceI,
    ResonanceII,
}

impl SweepKind {
    pub fn name(self) -> &'static str {
        match self {
            SweepKind::Spatial => "spatial",
            SweepKind::Temporal => "temporal",
            SweepKind::ResonanceI => "resonance-I",
            SweepKind::ResonanceII => "resonance-II",
        }
    }

    pub fn is_resonance(self) -> bool {
        matches!(self, SweepKind::ResonanceI | SweepKind::ResonanceII)
    }

    /// `(eps divisor, tau divisor)` per chain link.
    fn coupling(self) -> (f64, f64) {
        match self {
            SweepKind::ResonanceI => (4.0, 8.0),
            _ => (2.0, 2.0),
        }
    }
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "spatial" => Ok(SweepKind::Spatial),
            "temporal" => Ok(SweepKind::Temporal),
            "resonance-i" => Ok(SweepKind::ResonanceI),
            "resonance-ii" => Ok(SweepKind::ResonanceII),
            other => Err(HarnessError::Config(format!(
                "unknown sweep '{other}' (expected spatial, temporal, resonance-I or resonance-II)"
            ))),
        }
    }
}

/// Refinement of the reference relative to the finest sweep member.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferencePolicy {
    pub r_h: usize,
    pub r_tau: usize,
    /// The reference step also satisfies `tau_ref <= eps / tau_eps_ratio`.
    pub tau_eps_ratio: f64,
}

impl Default for ReferencePolicy {
    fn default() -> Self {
        Self {
            r_h: 4,
            r_tau: 8,
            tau_eps_ratio: 20.0,
        }
    }
}

impl ReferencePolicy {
    fn validate(&self) -> Result<()> {
        if self.r_h < 4 || self.r_tau < 4 {
            return Err(HarnessError::Config(format!(
                "reference refinement factors must be at least 4, got r_h = {}, r_tau = {}",
                self.r_h, self.r_tau
            )));
        }
        Ok(())
    }

    /// Reference step for `tau` at `eps`: `tau / r` with `r` doubled until
    /// the `eps` cap holds. Returns `(tau_ref, r)`.
    fn reference_tau(&self, tau: f64, eps: f64, r_tau: usize) -> (f64, usize) {
        let mut r = r_tau;
        while tau / r as f64 > eps / self.tau_eps_ratio * (1.0 + 1e-12) {
            r *= 2;
        }
        (tau / r as f64, r)
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub case: CaseKind,
    pub domain: (f64, f64),
    pub final_time: f64,
    /// Rows for spatial and temporal sweeps; the chain for resonance sweeps.
    pub epsilons: Vec<f64>,
    pub hs: Vec<f64>,
    /// For resonance sweeps, the step of each chain link.
    pub taus: Vec<f64>,
    pub policy: ReferencePolicy,
    pub step: StepConfig,
    pub stability_check: bool,
}

/// `1, 1/2, ..., 1/2^6`
pub fn table_epsilons() -> Vec<f64> {
    (0..7).map(|k| 0.5f64.powi(k)).collect()
}

pub fn halving(start: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| start * 0.5f64.powi(k as i32)).collect()
}

impl SweepSpec {
    pub fn spatial(case: CaseKind, epsilons: Vec<f64>, hs: Vec<f64>, tau: f64) -> Self {
        Self {
            kind: SweepKind::Spatial,
            case,
            domain: (-200.0, 200.0),
            final_time: 1.0,
            epsilons,
            hs,
            taus: vec![tau],
            policy: ReferencePolicy::default(),
            step: StepConfig::default(),
            stability_check: true,
        }
    }

    pub fn temporal(case: CaseKind, epsilons: Vec<f64>, h: f64, taus: Vec<f64>) -> Self {
        Self {
            kind: SweepKind::Temporal,
            hs: vec![h],
            taus,
            ..Self::spatial(case, epsilons, vec![h], 0.0)
        }
    }

    /// Chain `(eps0 / c^m, tau0 / d^m)`, `m = 0..links`, with the coupling of `kind`.
    pub fn resonance(
        kind: SweepKind,
        case: CaseKind,
        eps0: f64,
        tau0: f64,
        links: usize,
        h: f64,
    ) -> Result<Self> {
        if !kind.is_resonance() {
            return Err(HarnessError::Config(format!(
                "{kind} is not a resonance sweep"
            )));
        }
        let (ce, ct) = kind.coupling();
        Ok(Self {
            kind,
            epsilons: (0..links).map(|m| eps0 / ce.powi(m as i32)).collect(),
            taus: (0..links).map(|m| tau0 / ct.powi(m as i32)).collect(),
            ..Self::spatial(case, Vec::new(), vec![h], 0.0)
        })
    }

    /// Default parameters of each sweep kind.
    pub fn table_default(kind: SweepKind, case: CaseKind) -> Self {
        match kind {
            SweepKind::Spatial => Self::spatial(case, table_epsilons(), halving(0.2, 4), 1e-4),
            SweepKind::Temporal => Self::temporal(case, table_epsilons(), 2.5e-3, halving(0.1, 8)),
            SweepKind::ResonanceI => {
                Self::resonance(kind, case, 0.5, 0.1, 4, 2.5e-3).expect("resonance kind")
            }
            SweepKind::ResonanceII => {
                Self::resonance(kind, case, 0.125, 0.0125, 4, 2.5e-3).expect("resonance kind")
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.policy.validate()?;
        let cfg = |msg: String| Err(HarnessError::Config(msg));
        if self.epsilons.is_empty() || self.hs.is_empty() || self.taus.is_empty() {
            return cfg(format!(
                "{} sweep needs at least one epsilon, h and tau",
                self.kind
            ));
        }
        if let Some(e) = self.epsilons.iter().find(|&&e| !(e > 0.0 && e <= 1.0)) {
            return cfg(format!("epsilon {e} outside (0, 1]"));
        }
        let check_halving = |name: &str, v: &[f64]| -> Result<()> {
            for w in v.windows(2) {
                if ((w[0] / w[1]) - 2.0).abs() > 1e-9 {
                    return Err(HarnessError::Config(format!(
                        "{name} list must decrease by exactly a factor 2, got {} then {}",
                        w[0], w[1]
                    )));
                }
            }
            Ok(())
        };
        match self.kind {
            SweepKind::Spatial => {
                check_halving("h", &self.hs)?;
                if self.taus.len() != 1 {
                    return cfg("spatial sweep takes a single tau".into());
                }
            }
            SweepKind::Temporal => {
                check_halving("tau", &self.taus)?;
                if self.hs.len() != 1 {
                    return cfg("temporal sweep takes a single h".into());
                }
            }
            SweepKind::ResonanceI | SweepKind::ResonanceII => {
                if self.hs.len() != 1 || self.taus.len() != self.epsilons.len() {
                    return cfg(
                        "resonance sweep takes a single h and one tau per chain link".into(),
                    );
                }
            }
        }
        Ok(())
    }

    fn physical(&self, eps: f64) -> Result<PhysicalCase> {
        Ok(PhysicalCase::builtin(
            self.case,
            eps,
            self.domain,
            self.final_time,
        )?)
    }

    fn grid(&self, h: f64) -> Result<Grid1D> {
        Ok(Grid1D::with_spacing(self.domain.0, self.domain.1, h)?)
    }

    /// Cells grouped into rows along which orders are reported.
    fn rows(&self) -> Vec<Vec<Cell>> {
        let cell = |epsilon, h, tau| Cell { epsilon, h, tau };
        match self.kind {
            SweepKind::Spatial => self
                .epsilons
                .iter()
                .map(|&e| self.hs.iter().map(|&h| cell(e, h, self.taus[0])).collect())
                .collect(),
            SweepKind::Temporal => self
                .epsilons
                .iter()
                .map(|&e| self.taus.iter().map(|&t| cell(e, self.hs[0], t)).collect())
                .collect(),
            SweepKind::ResonanceI | SweepKind::ResonanceII => vec![self
                .epsilons
                .iter()
                .zip(&self.taus)
                .map(|(&e, &t)| cell(e, self.hs[0], t))
                .collect()],
        }
    }

    /// Reference parameters for a cell, with refinement factors `(r_h, r_tau)`.
    fn reference_for(&self, row: &[Cell], cell: &Cell, r_h: usize, r_tau: usize) -> RefKey {
        match self.kind {
            SweepKind::Spatial => {
                let h_min = row.iter().map(|c| c.h).fold(f64::INFINITY, f64::min);
                RefKey::new(cell.epsilon, h_min / r_h as f64, cell.tau)
            }
            SweepKind::Temporal => {
                let t_min = row.iter().map(|c| c.tau).fold(f64::INFINITY, f64::min);
                let (tau_ref, _) = self.policy.reference_tau(t_min, cell.epsilon, r_tau);
                RefKey::new(cell.epsilon, cell.h, tau_ref)
            }
            SweepKind::ResonanceI | SweepKind::ResonanceII => {
                let (tau_ref, _) = self.policy.reference_tau(cell.tau, cell.epsilon, r_tau);
                RefKey::new(cell.epsilon, cell.h, tau_ref)
            }
        }
    }

    fn simulate(&self, eps: f64, h: f64, tau: f64) -> Result<RunOutcome> {
        let case = self.physical(eps)?;
        let grid = self.grid(h)?;
        let start = Instant::now();
        let report = scheme::run(&case, &grid, tau, self.step, &[self.final_time])?;
        Ok(RunOutcome {
            snapshot: report.snapshots.into_iter().next().expect("one snapshot"),
            max_parity_defect: report.max_parity_defect,
            max_iterations: report.max_iterations,
            wall_time: start.elapsed().as_secs_f64(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Cell {
    epsilon: f64,
    h: f64,
    tau: f64,
}

/// Bit-exact key of a reference configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct RefKey {
    eps: u64,
    h: u64,
    tau: u64,
}

impl RefKey {
    fn new(eps: f64, h: f64, tau: f64) -> Self {
        Self {
            eps: eps.to_bits(),
            h: h.to_bits(),
            tau: tau.to_bits(),
        }
    }

    fn params(&self) -> (f64, f64, f64) {
        (
            f64::from_bits(self.eps),
            f64::from_bits(self.h),
            f64::from_bits(self.tau),
        )
    }

    fn descriptor(&self) -> String {
        let (_, h, tau) = self.params();
        format!("self h={} tau={}", fmt_sig(h), fmt_sig(tau))
    }
}

struct RunOutcome {
    snapshot: Snapshot,
    max_parity_defect: f64,
    max_iterations: usize,
    wall_time: f64,
}

/// One cell of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRecord {
    pub kind: SweepKind,
    pub case: CaseKind,
    pub epsilon: f64,
    pub h: f64,
    pub tau: f64,
    pub final_time: f64,
    pub e_err: Option<f64>,
    pub n_err: Option<f64>,
    pub order_e: Option<f64>,
    pub order_n: Option<f64>,
    pub ref_descriptor: String,
    pub wall_time: f64,
    pub failure: Option<String>,
    pub max_parity_defect: Option<f64>,
    pub max_iterations: Option<usize>,
}

/// Reference-factor halving on the coarsest cell of the first row.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityCheck {
    pub epsilon: f64,
    pub h: f64,
    pub tau: f64,
    pub factor: usize,
    /// Error against the production reference (refinement `factor`).
    pub e_err: f64,
    /// Error against a reference refined by `factor / 2`.
    pub e_err_half_factor: f64,
    pub relative_change: f64,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub records: Vec<ErrorRecord>,
    pub stability: Option<StabilityCheck>,
    /// Largest relative parity defect over every run of the sweep, references included.
    pub max_parity_defect: f64,
}

impl SweepOutcome {
    pub fn failures(&self) -> impl Iterator<Item = &ErrorRecord> {
        self.records.iter().filter(|r| r.failure.is_some())
    }
}

/// Maximum relative change tolerated by the reference stability check.
pub const STABILITY_TOLERANCE: f64 = 0.1;

/// Runs every cell of `spec` on a pool of `workers` threads.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<SweepOutcome> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| HarnessError::Config(format!("cannot build worker pool: {e}")))?;
    pool.install(|| run_sweep_inner(spec))
}

fn run_sweep_inner(spec: &SweepSpec) -> Result<SweepOutcome> {
    let rows = spec.rows();
    let mut keyed: Vec<(Cell, RefKey)> = Vec::new();
    for row in &rows {
        for cell in row {
            keyed.push((
                *cell,
                spec.reference_for(row, cell, spec.policy.r_h, spec.policy.r_tau),
            ));
        }
    }
    let unique: Vec<RefKey> = {
        let mut keys: Vec<RefKey> = keyed.iter().map(|(_, k)| *k).collect();
        keys.sort();
        keys.dedup();
        keys
    };
    info!(
        "{} sweep: {} cells, {} references",
        spec.kind,
        keyed.len(),
        unique.len()
    );

    let references: BTreeMap<RefKey, std::result::Result<RunOutcome, String>> = unique
        .par_iter()
        .map(|key| {
            let (e, h, t) = key.params();
            (*key, spec.simulate(e, h, t).map_err(|err| err.to_string()))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();

    let cells: Vec<(
        Cell,
        RefKey,
        std::result::Result<(RunOutcome, ErrorPair), String>,
    )> = keyed
        .par_iter()
        .map(|(cell, key)| {
            let outcome = match &references[key] {
                Err(msg) => Err(format!("reference failed: {msg}")),
                Ok(reference) => spec
                    .simulate(cell.epsilon, cell.h, cell.tau)
                    .and_then(|run| {
                        let errs = compare(&reference.snapshot, &run.snapshot)?;
                        Ok((run, errs))
                    })
                    .map_err(|err| err.to_string()),
            };
            (*cell, *key, outcome)
        })
        .collect();

    let mut max_parity: f64 = references
        .values()
        .filter_map(|r| r.as_ref().ok())
        .map(|r| r.max_parity_defect)
        .fold(0.0, f64::max);
    let mut records: Vec<ErrorRecord> = Vec::with_capacity(cells.len());
    let mut offset = 0;
    for row in &rows {
        let mut prev: Option<(f64, f64, f64)> = None;
        for (cell, key, outcome) in &cells[offset..offset + row.len()] {
            let mut rec = ErrorRecord {
                kind: spec.kind,
                case: spec.case,
                epsilon: cell.epsilon,
                h: cell.h,
                tau: cell.tau,
                final_time: spec.final_time,
                e_err: None,
                n_err: None,
                order_e: None,
                order_n: None,
                ref_descriptor: key.descriptor(),
                wall_time: 0.0,
                failure: None,
                max_parity_defect: None,
                max_iterations: None,
            };
            let param = if spec.kind == SweepKind::Spatial {
                cell.h
            } else {
                cell.tau
            };
            match outcome {
                Ok((run, errs)) => {
                    max_parity = max_parity.max(run.max_parity_defect);
                    rec.e_err = Some(errs.e_err);
                    rec.n_err = Some(errs.n_err);
                    rec.wall_time = run.wall_time;
                    rec.max_parity_defect = Some(run.max_parity_defect);
                    rec.max_iterations = Some(run.max_iterations);
                    if let Some((pe, pn, pp)) = prev {
                        rec.order_e = observed_order(pe, errs.e_err, pp, param);
                        rec.order_n = observed_order(pn, errs.n_err, pp, param);
                    }
                    prev = Some((errs.e_err, errs.n_err, param));
                }
                Err(msg) => {
                    rec.failure = Some(msg.clone());
                    prev = None;
                }
            }
            records.push(rec);
        }
        offset += row.len();
    }

    let stability = if spec.stability_check {
        let (_, key, outcome) = &cells[0];
        match (outcome, &references[key]) {
            (Ok((run, errs)), Ok(_)) => {
                Some(stability_check(spec, &rows[0], &run.snapshot, errs.e_err)?)
            }
            _ => None,
        }
    } else {
        None
    };
    Ok(SweepOutcome {
        records,
        stability,
        max_parity_defect: max_parity,
    })
}

/// Recomputes the error of the coarsest cell of `row` against a reference
/// with half the refinement factor and compares with the production value.
fn stability_check(
    spec: &SweepSpec,
    row: &[Cell],
    coarse: &Snapshot,
    e_err: f64,
) -> Result<StabilityCheck> {
    let cell = row[0];
    let (r_h, r_tau) = (spec.policy.r_h, spec.policy.r_tau);
    let factor = if spec.kind == SweepKind::Spatial {
        r_h
    } else {
        r_tau
    };
    let key = spec.reference_for(row, &cell, r_h / 2, r_tau / 2);
    let (e, h, t) = key.params();
    let e_err_half = compare(&spec.simulate(e, h, t)?.snapshot, coarse)?.e_err;
    let relative_change = (e_err_half - e_err).abs() / e_err.abs().max(f64::MIN_POSITIVE);
    Ok(StabilityCheck {
        epsilon: cell.epsilon,
        h: cell.h,
        tau: cell.tau,
        factor,
        e_err,
        e_err_half_factor: e_err_half,
        relative_change,
        passed: relative_change < STABILITY_TOLERANCE,
    })
}
