// With `gamma = 0` the scheme is classical Crank-Nicolson for the heat
// equation. Starting from `sin(pi x)`, the lowest mode is damped by
// `((1 - pi^2 d / 2) / (1 + pi^2 d / 2))` per step.

use std::f64::consts::PI;
use std::sync::Arc;

use nonlocal_parabolic::assembly::l2_error;
use nonlocal_parabolic::mesh::{uniform_interval_mesh, LagrangeSpace, Point};
use nonlocal_parabolic::nonlocal::NonlocalCoefficient;
use nonlocal_parabolic::stepper::{CrankNicolson, Operators, TimeGrid};

pub fn run_example() -> nonlocal_parabolic::Result<()> {
    let grid = TimeGrid::new(0.5, 50)?;
    let d = grid.delta();
    let factor = ((1.0 - PI * PI * d / 2.0) / (1.0 + PI * PI * d / 2.0)).powi(grid.n_steps() as i32);
    println!("amplification over {} steps: {factor:.12}", grid.n_steps());
    for k in 1..=3 {
        let space = Arc::new(LagrangeSpace::new(uniform_interval_mesh(0.0, 1.0, 32)?, k)?);
        let ops = Operators::new(&space);
        let scheme = CrankNicolson::new(&ops, NonlocalCoefficient::new(0.0), None, d);
        let state = scheme.run(&|p: Point| (PI * p[0]).sin(), &grid, &mut [])?;
        let err = l2_error(&state.current, &|p, _| factor * (PI * p[0]).sin(), grid.t_end())?;
        println!("k = {k}: distance to the damped mode {err:.3e}");
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
