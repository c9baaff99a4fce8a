// Checks each exact solution against the strong form of the equation
// with finite differences and a quadrature-evaluated coefficient.

use nonlocal_parabolic::manufactured::{make_case, verify_case, CaseId};

pub fn run_example() -> nonlocal_parabolic::Result<()> {
    for id in CaseId::ALL {
        let case = make_case(id)?;
        let r = verify_case(&case);
        println!("{id} (gamma = {:.4}, alpha = {:.12})", case.gamma, case.alpha);
        println!("  {}", case.notes);
        println!(
            "  PDE residual {:.2e}, fixed point {:.2e}, boundary trace {:.0e}, {} samples",
            r.max_pde_residual, r.fixed_point_residual, r.max_boundary_trace, r.samples
        );
        assert!(r.passes(1e-7, 1e-12), "{id} failed verification");
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
