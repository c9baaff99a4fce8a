// The `gamma = -1/3` case goes extinct at `t = 1`. As the energy collapses
// the coefficient `(int u^2)^(-1/3)` blows up and the guard log records the
// exit from the bounded regime.

use nonlocal_parabolic::harness::run::log_energy;
use nonlocal_parabolic::harness::{run_solve, RunConfig};
use nonlocal_parabolic::manufactured::CaseId;
use nonlocal_parabolic::nonlocal::GuardStatus;

pub fn run_example() -> nonlocal_parabolic::Result<()> {
    let config = RunConfig {
        n: 40,
        delta: 2e-3,
        ..RunConfig::for_case(CaseId::Example2)
    };
    let report = run_solve(&config)?;
    for rec in report.energy_history.iter().step_by(50) {
        println!("t = {:<5.2} energy {:.3e}", rec.t, rec.energy);
    }
    if let Some(trip) = report.first_guard_trip() {
        println!(
            "coefficient {:.3e} left [{:e}, {:e}] at t = {} ({})",
            trip.value, config.guard_floor, config.guard_ceiling, trip.t, trip.status
        );
    }
    let tripped = report
        .coefficient_history
        .iter()
        .filter(|r| r.status != GuardStatus::Ok)
        .count();
    println!("{tripped} of {} steps outside the guarded range", report.n_steps);
    for t in [0.5, 1.0, 1.5, 2.0] {
        let rec = report
            .energy_history
            .iter()
            .min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs()))
            .unwrap();
        println!("log energy at t = {t}: {:.3}", log_energy(rec.energy));
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
