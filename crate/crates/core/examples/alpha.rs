// Solves the scalar fixed point `alpha = (int w(., alpha)^2)^gamma` of each
// shipped exact solution and prints the result next to `G(alpha)`.

use nonlocal_parabolic::manufactured::{fixed_point_map, solve_case_alpha, AlphaSolveConfig, CaseId};

pub fn run_example() -> nonlocal_parabolic::Result<()> {
    for id in CaseId::ALL {
        let config = AlphaSolveConfig::for_case(id);
        let sol = solve_case_alpha(id)?;
        let g = fixed_point_map(id, sol.alpha, &config);
        println!(
            "{id}: alpha = {:.15}  G(alpha) = {g:.15}  bracket {:?}  {} iterations",
            sol.alpha, config.bracket, sol.iterations
        );
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
