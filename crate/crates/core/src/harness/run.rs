//! Single runs, convergence sweeps and energy studies.

use std::sync::Arc;

use crate::assembly::{error_degree, l2_error_with_degree, FieldVector};
use crate::error::Result;
use crate::harness::config::RunConfig;
use crate::manufactured::{make_case, CaseId, ManufacturedCase};
use crate::mesh::{uniform_interval_mesh, uniform_square_mesh, LagrangeSpace, Point};
use crate::nonlocal::NonlocalCoefficient;
use crate::stepper::{CoefficientRecord, CrankNicolson, EnergyRecord, Operators, SnapshotRecorder, TimeGrid};

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    pub field: FieldVector,
    pub error_l2: f64,
}

/// Outcome of one solve of a shipped case.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub config: RunConfig,
    /// Grid spacing `1 / n`.
    pub h: f64,
    /// Step actually used, `t_end / n_steps`.
    pub delta: f64,
    pub n_steps: usize,
    pub final_field: FieldVector,
    /// `||u(t_end) - U_N||_{L2}`.
    pub final_error: f64,
    pub energy_history: Vec<EnergyRecord>,
    pub coefficient_history: Vec<CoefficientRecord>,
    pub snapshots: Vec<Snapshot>,
}

impl RunReport {
    /// First step whose coefficient left the guarded range.
    pub fn first_guard_trip(&self) -> Option<&CoefficientRecord> {
        self.coefficient_history
            .iter()
            .find(|r| r.status != crate::nonlocal::GuardStatus::Ok)
    }
}

pub fn build_space(dim: usize, n: usize, k: usize) -> Result<Arc<LagrangeSpace>> {
    let mesh = if dim == 1 {
        uniform_interval_mesh(0.0, 1.0, n)?
    } else {
        uniform_square_mesh(n)?
    };
    Ok(Arc::new(LagrangeSpace::new(mesh, k)?))
}

/// Solves the case named in `config`.
pub fn run_solve(config: &RunConfig) -> Result<RunReport> {
    let case = make_case(config.case)?;
    run_case(&case, config)
}

/// Solves an already constructed case with the discretization of `config`.
pub fn run_case(case: &ManufacturedCase, config: &RunConfig) -> Result<RunReport> {
    config.validate()?;
    let space = build_space(case.dim, config.n, config.k)?;
    let ops = Operators::new(&space);
    let grid = TimeGrid::with_step(config.t_end, config.delta)?;
    let coefficient = NonlocalCoefficient::with_guards(case.gamma, config.guard_floor, config.guard_ceiling)?;
    let forcing = |p: Point, t: f64| case.f(p, t);
    let scheme = CrankNicolson::new(
        &ops,
        coefficient,
        case.has_forcing().then_some(&forcing as _),
        grid.delta(),
    )
    .with_solver(config.solver())
    .with_policy(config.guard_policy);

    let mut recorder = SnapshotRecorder::new(&grid, &config.snapshot_times());
    let u0 = |p: Point| case.u0(p);
    let state = scheme.run(&u0, &grid, &mut [&mut recorder])?;

    let exact = |p: Point, t: f64| case.u(p, t);
    let quad = error_degree(config.k);
    let final_error = l2_error_with_degree(&state.current, &exact, grid.t_end(), quad)?;
    let snapshots = recorder
        .snapshots
        .into_iter()
        .map(|(t, field)| {
            let error_l2 = l2_error_with_degree(&field, &exact, t, quad)?;
            Ok(Snapshot { t, field, error_l2 })
        })
        .collect::<Result<_>>()?;

    Ok(RunReport {
        config: config.clone(),
        h: config.spacing(),
        delta: grid.delta(),
        n_steps: grid.n_steps(),
        final_field: state.current,
        final_error,
        energy_history: state.energy_history,
        coefficient_history: state.coefficient_history,
        snapshots,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    /// Refine the mesh at fixed step.
    Space,
    /// Refine the step on a fixed mesh.
    Time,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub case: CaseId,
    pub k: usize,
    pub n: usize,
    pub h: f64,
    pub delta: f64,
    pub t_end: f64,
    /// `None` when the run failed; see `failure`.
    pub error_l2: Option<f64>,
    pub failure: Option<String>,
}

impl SweepRow {
    /// The refined parameter.
    pub fn parameter(&self, kind: SweepKind) -> f64 {
        match kind {
            SweepKind::Space => self.h,
            SweepKind::Time => self.delta,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub kind: SweepKind,
    /// Ordered from coarse to fine.
    pub rows: Vec<SweepRow>,
    /// `rates[i]` compares rows `i - 1` and `i`; always `None` for `i = 0`.
    pub rates: Vec<Option<f64>>,
    /// Least-squares slope of `log e` against `log h` (or `log delta`).
    pub slope: Option<f64>,
}

impl SweepResult {
    pub fn from_rows(kind: SweepKind, rows: Vec<SweepRow>) -> Self {
        let usable = |r: &SweepRow| r.error_l2.filter(|e| e.is_finite() && *e > 0.0);
        let mut rates = vec![None; rows.len()];
        for i in 1..rows.len() {
            if let (Some(e0), Some(e1)) = (usable(&rows[i - 1]), usable(&rows[i])) {
                let ratio = rows[i - 1].parameter(kind) / rows[i].parameter(kind);
                // exactly log2(e0 / e1) when the parameter halves
                rates[i] = Some((e0 / e1).log2() / ratio.log2());
            }
        }
        let points: Vec<(f64, f64)> = rows
            .iter()
            .filter_map(|r| usable(r).map(|e| (r.parameter(kind).ln(), e.ln())))
            .collect();
        Self {
            kind,
            slope: least_squares_slope(&points),
            rows,
            rates,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.failure.is_some())
    }
}

/// Slope of the least-squares line through `points`, if it is determined.
pub fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn sweep(case: &ManufacturedCase, kind: SweepKind, configs: Vec<RunConfig>) -> SweepResult {
    let rows = configs
        .into_iter()
        .map(|cfg| {
            let grid = TimeGrid::with_step(cfg.t_end, cfg.delta);
            let outcome = run_case(case, &cfg);
            SweepRow {
                case: case.id,
                k: cfg.k,
                n: cfg.n,
                h: cfg.spacing(),
                delta: grid.map(|g| g.delta()).unwrap_or(cfg.delta),
                t_end: cfg.t_end,
                error_l2: outcome.as_ref().ok().map(|r| r.final_error),
                failure: outcome.err().map(|e| e.to_string()),
            }
        })
        .collect();
    SweepResult::from_rows(kind, rows)
}

/// Final-time L2 errors over the resolutions `config.ns`, coarse to fine.
/// Failed runs are kept as rows without an error.
pub fn sweep_h(config: &RunConfig) -> Result<SweepResult> {
    config.validate()?;
    let case = make_case(config.case)?;
    let mut ns = config.ns.clone();
    ns.sort_unstable();
    ns.dedup();
    let configs = ns.into_iter().map(|n| RunConfig { n, ..config.clone() }).collect();
    Ok(sweep(&case, SweepKind::Space, configs))
}

/// Final-time L2 errors over the steps `config.deltas`, coarse to fine.
pub fn sweep_delta(config: &RunConfig) -> Result<SweepResult> {
    config.validate()?;
    let case = make_case(config.case)?;
    let mut deltas = config.deltas.clone();
    deltas.sort_by(|a, b| b.total_cmp(a));
    deltas.dedup();
    let configs = deltas
        .into_iter()
        .map(|delta| RunConfig {
            delta,
            ..config.clone()
        })
        .collect();
    Ok(sweep(&case, SweepKind::Time, configs))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergySeries {
    pub case: CaseId,
    /// `(t, ||U_n||^2_M)` at every time level.
    pub points: Vec<(f64, f64)>,
}

/// `ln E`, or negative infinity once the energy is exactly zero.
pub fn log_energy(energy: f64) -> f64 {
    if energy > 0.0 {
        energy.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// Discrete energy histories for each config.
pub fn energy_study(configs: &[RunConfig]) -> Result<Vec<EnergySeries>> {
    configs
        .iter()
        .map(|cfg| {
            let report = run_solve(cfg)?;
            Ok(EnergySeries {
                case: cfg.case,
                points: report.energy_history.iter().map(|r| (r.t, r.energy)).collect(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(h: f64, e: Option<f64>) -> SweepRow {
        SweepRow {
            case: CaseId::Example1,
            k: 1,
            n: (1.0 / h).round() as usize,
            h,
            delta: 1e-3,
            t_end: 1.0,
            error_l2: e,
            failure: None,
        }
    }

    #[test]
    fn rates_from_stored_errors() {
        let rows = vec![
            row(0.25, Some(1.6e-2)),
            row(0.125, Some(4.1e-3)),
            row(0.0625, Some(1.0e-3)),
        ];
        let s = SweepResult::from_rows(SweepKind::Space, rows);
        assert_eq!(s.rates[0], None);
        assert_eq!(s.rates[1], Some((1.6e-2f64 / 4.1e-3).log2()));
        assert_eq!(s.rates[2], Some((4.1e-3f64 / 1.0e-3).log2()));
        assert!((s.slope.unwrap() - 2.0).abs() < 0.01);
    }

    #[test]
    fn zero_error_leaves_rate_undefined() {
        let rows = vec![row(0.5, Some(0.0)), row(0.25, Some(0.0)), row(0.125, None)];
        let s = SweepResult::from_rows(SweepKind::Space, rows);
        assert!(s.rates.iter().all(Option::is_none));
        assert_eq!(s.slope, None);
    }

    #[test]
    fn slope_of_exact_power_law() {
        let pts: Vec<(f64, f64)> = [1.0f64, 0.5, 0.25]
            .iter()
            .map(|&h| (h.ln(), (3.0 * h.powi(3)).ln()))
            .collect();
        assert!((least_squares_slope(&pts).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(least_squares_slope(&pts[..1]), None);
    }

    #[test]
    fn log_energy_sentinel() {
        assert_eq!(log_energy(0.0), f64::NEG_INFINITY);
        assert_eq!(log_energy(1.0), 0.0);
    }
}
