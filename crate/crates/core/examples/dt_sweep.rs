// Step refinement for the 2D case with `gamma = 2`: second order in time.

use nonlocal_parabolic::harness::{sweep_delta, RunConfig};
use nonlocal_parabolic::manufactured::CaseId;

pub fn run_example() -> nonlocal_parabolic::Result<()> {
    let config = RunConfig {
        n: 8,
        deltas: vec![0.2, 0.1, 0.05, 0.025],
        ..RunConfig::for_case(CaseId::Example3)
    };
    let result = sweep_delta(&config)?;
    for (row, rate) in result.rows.iter().zip(&result.rates) {
        let rate = rate.map(|r| format!("{r:.3}")).unwrap_or_else(|| "-".into());
        println!(
            "delta {:<6} error {:.4e} rate {rate}",
            row.delta,
            row.error_l2.unwrap_or(f64::NAN)
        );
    }
    println!("fitted slope {:.3}", result.slope.unwrap_or(f64::NAN));
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
