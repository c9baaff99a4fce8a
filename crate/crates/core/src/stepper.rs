//! Linearized Crank-Nicolson time stepping.
//!
//! The first step is a predictor-corrector pair:
//!
//! ```text
//! (M/d + a(U_0) K/2) U_{1,0} = (M/d - a(U_0) K/2) U_0 + F_{1/2}
//! (M/d + a*     K/2) U_1     = (M/d - a*     K/2) U_0 + F_{1/2},   a* = a((U_{1,0} + U_0)/2)
//! ```
//!
//! and every later step freezes the coefficient at the extrapolation
//! `(3/2) U_{n-1} - (1/2) U_{n-2}`:
//!
//! ```text
//! (M/d + a* K/2) U_n = (M/d - a* K/2) U_{n-1} + F_{n-1/2}
//! ```
//!
//! with `F_{n-1/2}` the load vector at the midpoint time. Boundary nodes are
//! eliminated, so every solve is symmetric positive definite.

use std::sync::Arc;

use crate::assembly::{assemble_load, assemble_mass, assemble_stiffness, interpolate, l2_norm_sq, FieldVector};
use crate::error::{Error, Result};
use crate::linalg::{solve_spd, SolverConfig};
use crate::mesh::{LagrangeSpace, Point};
use crate::nonlocal::{GuardPolicy, GuardStatus, NonlocalCoefficient};
use crate::sparse::SparseSymMatrix;

/// Uniform grid `t_n = n * t_end / n_steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_end: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_end: f64, n_steps: usize) -> Result<Self> {
        if !(t_end > 0.0) || !t_end.is_finite() {
            return Err(Error::Config(format!("t_end must be positive, got {t_end}")));
        }
        if n_steps == 0 {
            return Err(Error::InvalidCount("time steps"));
        }
        Ok(Self { t_end, n_steps })
    }

    /// Grid with step as close as possible to `delta` that lands on `t_end`.
    pub fn with_step(t_end: f64, delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::Config(format!("delta must be positive, got {delta}")));
        }
        Self::new(t_end, ((t_end / delta).round() as usize).max(1))
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn delta(&self) -> f64 {
        self.t_end / self.n_steps as f64
    }

    pub fn time(&self, n: usize) -> f64 {
        if n == self.n_steps {
            self.t_end
        } else {
            n as f64 * self.delta()
        }
    }

    /// Index of the grid time nearest to `t`.
    pub fn nearest_index(&self, t: f64) -> usize {
        ((t / self.delta()).round().max(0.0) as usize).min(self.n_steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientRecord {
    pub step: usize,
    pub t: f64,
    pub value: f64,
    pub status: GuardStatus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRecord {
    pub t: f64,
    /// `int U^2 = U^T M U`.
    pub energy: f64,
}

#[derive(Debug, Clone)]
pub struct StepState {
    /// `U_n`.
    pub current: FieldVector,
    /// `U_{n-1}`, absent before the first step.
    pub previous: Option<FieldVector>,
    pub t: f64,
    pub step_index: usize,
    pub coefficient_history: Vec<CoefficientRecord>,
    pub energy_history: Vec<EnergyRecord>,
    /// Set once the solution went extinct under a negative exponent.
    pub frozen: bool,
}

impl StepState {
    pub fn energy(&self) -> f64 {
        self.energy_history.last().map_or(0.0, |r| r.energy)
    }

    /// First step whose guard status was not `Ok`.
    pub fn first_guard_trip(&self) -> Option<&CoefficientRecord> {
        self.coefficient_history.iter().find(|r| r.status != GuardStatus::Ok)
    }
}

/// Mass and stiffness matrices of a space, together with their
/// free-node blocks.
#[derive(Debug, Clone)]
pub struct Operators {
    space: Arc<LagrangeSpace>,
    mass: SparseSymMatrix,
    stiffness: SparseSymMatrix,
    mass_free: SparseSymMatrix,
    stiffness_free: SparseSymMatrix,
}

impl Operators {
    pub fn new(space: &Arc<LagrangeSpace>) -> Self {
        let mass = assemble_mass(space);
        let stiffness = assemble_stiffness(space);
        let free = space.free_node_indices();
        let mass_free = mass.principal_submatrix(free);
        let stiffness_free = stiffness.principal_submatrix(free);
        Self {
            space: space.clone(),
            mass,
            stiffness,
            mass_free,
            stiffness_free,
        }
    }

    pub fn space(&self) -> &Arc<LagrangeSpace> {
        &self.space
    }

    pub fn mass(&self) -> &SparseSymMatrix {
        &self.mass
    }

    pub fn stiffness(&self) -> &SparseSymMatrix {
        &self.stiffness
    }
}

/// Right-hand side `f(x, t)`.
pub type Forcing<'a> = &'a (dyn Fn(Point, f64) -> f64 + Sync);

/// Receives the state after initialization and after every step.
pub trait StepObserver {
    fn observe(&mut self, state: &StepState);
}

/// Records the solution at the grid times nearest to requested times.
#[derive(Debug, Clone, Default)]
pub struct SnapshotRecorder {
    targets: Vec<usize>,
    pub snapshots: Vec<(f64, FieldVector)>,
}

impl SnapshotRecorder {
    pub fn new(grid: &TimeGrid, times: &[f64]) -> Self {
        let mut targets: Vec<usize> = times.iter().map(|&t| grid.nearest_index(t)).collect();
        targets.sort_unstable();
        targets.dedup();
        Self {
            targets,
            snapshots: Vec::new(),
        }
    }
}

impl StepObserver for SnapshotRecorder {
    fn observe(&mut self, state: &StepState) {
        if self.targets.binary_search(&state.step_index).is_ok() {
            self.snapshots.push((state.t, state.current.clone()));
        }
    }
}

/// The linearized Crank-Nicolson scheme for one problem on one space.
pub struct CrankNicolson<'a> {
    ops: &'a Operators,
    coefficient: NonlocalCoefficient,
    forcing: Option<Forcing<'a>>,
    delta: f64,
    solver: SolverConfig,
    policy: GuardPolicy,
}

impl<'a> CrankNicolson<'a> {
    pub fn new(ops: &'a Operators, coefficient: NonlocalCoefficient, forcing: Option<Forcing<'a>>, delta: f64) -> Self {
        Self {
            ops,
            coefficient,
            forcing,
            delta,
            solver: SolverConfig::default(),
            policy: GuardPolicy::Warn,
        }
    }

    pub fn with_solver(mut self, solver: SolverConfig) -> Self {
        self.solver = solver;
        self
    }

    pub fn with_policy(mut self, policy: GuardPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    fn space(&self) -> &Arc<LagrangeSpace> {
        &self.ops.space
    }

    fn energy(&self, u: &FieldVector) -> Result<f64> {
        l2_norm_sq(u, &self.ops.mass)
    }

    /// `U_0 = I_h u_0` at `t = 0`.
    pub fn init(&self, u0: &dyn Fn(Point) -> f64) -> Result<StepState> {
        let current = interpolate(self.space(), u0)?;
        let energy = self.energy(&current)?;
        Ok(StepState {
            current,
            previous: None,
            t: 0.0,
            step_index: 0,
            coefficient_history: Vec::new(),
            energy_history: vec![EnergyRecord { t: 0.0, energy }],
            frozen: false,
        })
    }

    /// Coefficient frozen at `u`, or `None` when `u` has gone extinct under a
    /// negative exponent.
    fn frozen_coefficient(&self, u: &FieldVector, step: usize, t: f64) -> Result<(Option<f64>, GuardStatus)> {
        let s = self.energy(u)?;
        let (value, status) = match self.coefficient.value_from_energy(s) {
            Ok(a) => (Some(a), self.coefficient.check_guards(a)),
            Err(Error::DegenerateCoefficient { .. }) if s == 0.0 && self.coefficient.gamma < 0.0 => {
                (None, GuardStatus::Degenerate)
            }
            Err(e) => return Err(e),
        };
        if status != GuardStatus::Ok && self.policy == GuardPolicy::Abort {
            return Err(Error::GuardAbort {
                step,
                t,
                value: value.unwrap_or(f64::INFINITY),
                status,
            });
        }
        Ok((value, status))
    }

    fn load_at(&self, t: f64) -> Result<Option<Vec<f64>>> {
        match self.forcing {
            Some(f) => Ok(Some(assemble_load(self.space(), f, t)?.into_coefficients())),
            None => Ok(None),
        }
    }

    /// Solves `(M/d + a K/2) U = (M/d - a K/2) U_prev + F`.
    fn solve_step(&self, a: f64, prev: &FieldVector, load: Option<&[f64]>) -> Result<FieldVector> {
        let space = self.space();
        let inv_delta = 1.0 / self.delta;
        let mu = self.ops.mass.mul_vec(prev.coefficients())?;
        let ku = self.ops.stiffness.mul_vec(prev.coefficients())?;
        let mut rhs: Vec<f64> = mu.iter().zip(&ku).map(|(m, k)| inv_delta * m - 0.5 * a * k).collect();
        if let Some(f) = load {
            rhs.iter_mut().zip(f).for_each(|(r, fi)| *r += fi);
        }
        let lhs =
            SparseSymMatrix::linear_combination(inv_delta, &self.ops.mass_free, 0.5 * a, &self.ops.stiffness_free);
        let solution = solve_spd(&lhs, &space.restrict_free(&rhs), &self.solver)?;
        FieldVector::from_coefficients(space, space.expand_free(&solution.x))
    }

    fn advance(
        &self,
        mut state: StepState,
        next: FieldVector,
        value: Option<f64>,
        status: GuardStatus,
        t: f64,
    ) -> Result<StepState> {
        let step = state.step_index + 1;
        let energy = self.energy(&next)?;
        state.previous = Some(std::mem::replace(&mut state.current, next));
        state.t = t;
        state.step_index = step;
        state.frozen |= status == GuardStatus::Degenerate;
        state.coefficient_history.push(CoefficientRecord {
            step,
            t,
            value: value.unwrap_or(f64::INFINITY),
            status,
        });
        state.energy_history.push(EnergyRecord { t, energy });
        Ok(state)
    }

    /// Predictor-corrector step producing `U_1`.
    pub fn first_step(&self, state: StepState) -> Result<StepState> {
        if state.step_index != 0 {
            return Err(Error::Config(format!("first_step called at step {}", state.step_index)));
        }
        let t_next = state.t + self.delta;
        let inner = || -> Result<(FieldVector, Option<f64>, GuardStatus)> {
            let u0 = &state.current;
            let (a0, status0) = self.frozen_coefficient(u0, 1, t_next)?;
            let Some(a0) = a0 else {
                return Ok((FieldVector::zeros(self.space()), None, status0));
            };
            let load = self.load_at(state.t + 0.5 * self.delta)?;
            let predictor = self.solve_step(a0, u0, load.as_deref())?;
            let midpoint = predictor.combine(0.5, u0, 0.5);
            let (a1, status1) = self.frozen_coefficient(&midpoint, 1, t_next)?;
            let Some(a1) = a1 else {
                return Ok((FieldVector::zeros(self.space()), None, status1));
            };
            let corrected = self.solve_step(a1, u0, load.as_deref())?;
            Ok((corrected, Some(a1), status0.max(status1)))
        };
        let (next, value, status) = inner().map_err(|e| e.at_step(1, t_next))?;
        self.advance(state, next, value, status, t_next)
    }

    /// Multistep update producing `U_n` for `n >= 2`.
    pub fn step(&self, state: StepState) -> Result<StepState> {
        let step = state.step_index + 1;
        let t_next = state.t + self.delta;
        let Some(previous) = state.previous.as_ref() else {
            return Err(Error::Config(format!("step {step} needs two previous levels")));
        };
        if state.frozen {
            let zero = FieldVector::zeros(self.space());
            return self.advance(state, zero, None, GuardStatus::Degenerate, t_next);
        }
        let inner = || -> Result<(FieldVector, Option<f64>, GuardStatus)> {
            let extrapolated = state.current.combine(1.5, previous, -0.5);
            let (a, status) = self.frozen_coefficient(&extrapolated, step, t_next)?;
            let Some(a) = a else {
                return Ok((FieldVector::zeros(self.space()), None, status));
            };
            let load = self.load_at(state.t + 0.5 * self.delta)?;
            Ok((self.solve_step(a, &state.current, load.as_deref())?, Some(a), status))
        };
        let (next, value, status) = inner().map_err(|e| e.at_step(step, t_next))?;
        self.advance(state, next, value, status, t_next)
    }

    /// Runs `init`, the predictor-corrector step and `n_steps - 1`
    /// multistep updates, notifying observers after each level.
    pub fn run(
        &self,
        u0: &dyn Fn(Point) -> f64,
        grid: &TimeGrid,
        observers: &mut [&mut dyn StepObserver],
    ) -> Result<StepState> {
        if (grid.delta() - self.delta).abs() > 1e-12 * self.delta {
            return Err(Error::Config(format!(
                "grid step {} differs from scheme step {}",
                grid.delta(),
                self.delta
            )));
        }
        let mut state = self.init(u0)?;
        notify(observers, &state);
        for n in 1..=grid.n_steps() {
            state = if n == 1 {
                self.first_step(state)?
            } else {
                self.step(state)?
            };
            // keep grid times exact instead of accumulating t += delta
            let t = grid.time(n);
            state.t = t;
            if let Some(rec) = state.coefficient_history.last_mut() {
                rec.t = t;
            }
            if let Some(rec) = state.energy_history.last_mut() {
                rec.t = t;
            }
            notify(observers, &state);
        }
        Ok(state)
    }
}

fn notify(observers: &mut [&mut dyn StepObserver], state: &StepState) {
    for obs in observers.iter_mut() {
        obs.observe(state);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::uniform_interval_mesh;
    use std::f64::consts::PI;

    fn space(n: usize, k: usize) -> Arc<LagrangeSpace> {
        Arc::new(LagrangeSpace::new(uniform_interval_mesh(0.0, 1.0, n).unwrap(), k).unwrap())
    }

    #[test]
    fn time_grid() {
        let g = TimeGrid::new(10.0, 10_000).unwrap();
        assert!((g.delta() - 1e-3).abs() < 1e-18);
        assert_eq!(g.time(10_000), 10.0);
        assert_eq!(g.nearest_index(0.0104), 10);
        assert_eq!(g.nearest_index(50.0), 10_000);
        assert!(TimeGrid::new(0.0, 3).is_err());
        assert!(TimeGrid::new(1.0, 0).is_err());
        assert_eq!(TimeGrid::with_step(2.0, 1e-3).unwrap().n_steps(), 2000);
    }

    #[test]
    fn zero_data_stays_zero() {
        let s = space(8, 2);
        let ops = Operators::new(&s);
        for gamma in [0.5, -1.0 / 3.0, 0.0] {
            let cn = CrankNicolson::new(&ops, NonlocalCoefficient::new(gamma), None, 0.01);
            let grid = TimeGrid::new(0.05, 5).unwrap();
            let end = cn.run(&|_| 0.0, &grid, &mut []).unwrap();
            assert!(end.current.is_zero());
            assert_eq!(end.coefficient_history.len(), 5);
        }
    }

    #[test]
    fn negative_gamma_extinct_field_is_frozen() {
        let s = space(8, 1);
        let ops = Operators::new(&s);
        let cn = CrankNicolson::new(&ops, NonlocalCoefficient::new(-1.0 / 3.0), None, 0.1);
        let end = cn.run(&|_| 0.0, &TimeGrid::new(0.3, 3).unwrap(), &mut []).unwrap();
        assert!(end.frozen);
        assert!(end
            .coefficient_history
            .iter()
            .all(|r| r.status == GuardStatus::Degenerate));
        let abort =
            CrankNicolson::new(&ops, NonlocalCoefficient::new(-1.0 / 3.0), None, 0.1).with_policy(GuardPolicy::Abort);
        let err = abort
            .run(&|_| 0.0, &TimeGrid::new(0.3, 3).unwrap(), &mut [])
            .unwrap_err();
        assert!(matches!(err, Error::GuardAbort { step: 1, .. }));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn single_step_is_one_predictor_corrector_pair() {
        let s = space(16, 1);
        let ops = Operators::new(&s);
        let cn = CrankNicolson::new(&ops, NonlocalCoefficient::new(0.5), None, 0.01);
        let grid = TimeGrid::new(0.01, 1).unwrap();
        let end = cn.run(&|p| (PI * p[0]).sin(), &grid, &mut []).unwrap();
        assert_eq!(end.step_index, 1);
        assert_eq!(end.coefficient_history.len(), 1);
        assert_eq!(end.energy_history.len(), 2);
        assert!(end.previous.is_some());
    }

    #[test]
    fn step_requires_history() {
        let s = space(4, 1);
        let ops = Operators::new(&s);
        let cn = CrankNicolson::new(&ops, NonlocalCoefficient::new(1.0), None, 0.1);
        let state = cn.init(&|p| p[0] * (1.0 - p[0])).unwrap();
        assert!(cn.step(state.clone()).is_err());
        let one = cn.first_step(state).unwrap();
        assert!(cn.first_step(one).is_err());
    }

    #[test]
    fn init_sine_nodal_values() {
        let s = space(4, 1);
        let ops = Operators::new(&s);
        let cn = CrankNicolson::new(&ops, NonlocalCoefficient::new(1.0), None, 0.1);
        let st = cn.init(&|p| (PI * p[0]).sin()).unwrap();
        let c = st.current.coefficients();
        let r = 0.5f64.sqrt();
        assert!((c[1] - r).abs() < 1e-15 && (c[2] - 1.0).abs() < 1e-15 && (c[3] - r).abs() < 1e-15);
        assert_eq!((c[0], c[4]), (0.0, 0.0));
    }

    #[test]
    fn snapshot_times_snap_to_grid() {
        let s = space(4, 1);
        let ops = Operators::new(&s);
        let cn = CrankNicolson::new(&ops, NonlocalCoefficient::new(1.0), None, 0.1);
        let grid = TimeGrid::new(1.0, 10).unwrap();
        let mut snaps = SnapshotRecorder::new(&grid, &[0.0, 0.33, 0.98]);
        cn.run(&|p| (PI * p[0]).sin(), &grid, &mut [&mut snaps]).unwrap();
        let times: Vec<f64> = snaps.snapshots.iter().map(|(t, _)| *t).collect();
        assert_eq!(times.len(), 3);
        assert_eq!(times[0], 0.0);
        assert!((times[1] - 0.3).abs() < 1e-15);
        assert_eq!(times[2], 1.0);
    }
}
