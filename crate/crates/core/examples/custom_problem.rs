// Using the building blocks directly: a 2D problem with `gamma = 1`, a
// source switched off at `t = 0.25`, and an observer that tracks the peak
// nodal value.

use std::sync::Arc;

use nonlocal_parabolic::assembly::integral;
use nonlocal_parabolic::linalg::SolverConfig;
use nonlocal_parabolic::mesh::{uniform_square_mesh, LagrangeSpace, Point};
use nonlocal_parabolic::nonlocal::{GuardPolicy, NonlocalCoefficient};
use nonlocal_parabolic::stepper::{CrankNicolson, Operators, StepObserver, StepState, TimeGrid};

#[derive(Default)]
struct PeakTracker {
    peaks: Vec<(f64, f64)>,
}

impl StepObserver for PeakTracker {
    fn observe(&mut self, state: &StepState) {
        let peak = state.current.coefficients().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        self.peaks.push((state.t, peak));
    }
}

pub fn run_example() -> nonlocal_parabolic::Result<()> {
    let space = Arc::new(LagrangeSpace::new(uniform_square_mesh(12)?, 2)?);
    let ops = Operators::new(&space);
    let grid = TimeGrid::new(1.0, 100)?;
    let source = |p: Point, t: f64| if t < 0.25 { 20.0 * p[0] * p[1] } else { 0.0 };
    let scheme = CrankNicolson::new(&ops, NonlocalCoefficient::new(1.0), Some(&source), grid.delta())
        .with_solver(SolverConfig {
            tolerance: 1e-10,
            ..SolverConfig::default()
        })
        .with_policy(GuardPolicy::Abort);

    let mut tracker = PeakTracker::default();
    let u0 = |p: Point| 16.0 * p[0] * (1.0 - p[0]) * p[1] * (1.0 - p[1]);
    let state = scheme.run(&u0, &grid, &mut [&mut tracker])?;

    for &(t, peak) in tracker.peaks.iter().step_by(20) {
        println!("t = {t:.2}  max |U| = {peak:.5}");
    }
    println!(
        "final mass int U = {:.6}, energy {:.6}",
        integral(&state.current),
        state.energy()
    );
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
