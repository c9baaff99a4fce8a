// One solve of the 1D case with `gamma = 1/2`, printing the error and the
// discrete coefficient against the exact `alpha l(t)^(2 gamma)`.

use nonlocal_parabolic::harness::{run_solve, RunConfig};
use nonlocal_parabolic::manufactured::{make_case, CaseId};

pub fn run_example() -> nonlocal_parabolic::Result<()> {
    let config = RunConfig {
        k: 2,
        n: 32,
        delta: 1e-2,
        t_end: 2.0,
        snapshots: vec![0.0, 0.5, 1.0, 2.0],
        ..RunConfig::for_case(CaseId::Example1)
    };
    let case = make_case(config.case)?;
    let report = run_solve(&config)?;
    println!(
        "{} steps of size {}, L2 error at t = {}: {:.3e}",
        report.n_steps, report.delta, config.t_end, report.final_error
    );
    for snap in &report.snapshots {
        println!("  t = {:<4} error {:.3e}", snap.t, snap.error_l2);
    }
    for rec in report.coefficient_history.iter().step_by(50) {
        let exact = case.coefficient(rec.t).unwrap_or(f64::NAN);
        println!("  a(U) at t = {:<5.2} {:.8}  exact {:.8}", rec.t, rec.value, exact);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
