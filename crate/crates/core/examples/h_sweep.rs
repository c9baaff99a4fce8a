// Mesh refinement for the 1D case at a small fixed step; the fitted slopes
// approach `k + 1`. Pass an output directory to also write CSV, SVG and
// metadata files.

use nonlocal_parabolic::harness::output::{emit_sweep, sweep_csv};
use nonlocal_parabolic::harness::{sweep_h, RunConfig, SweepResult};
use nonlocal_parabolic::manufactured::CaseId;

pub fn run_example() -> nonlocal_parabolic::Result<Vec<(RunConfig, SweepResult)>> {
    let mut sweeps = Vec::new();
    for k in 1..=3 {
        let config = RunConfig {
            k,
            ns: if k == 3 { vec![2, 4, 8, 16] } else { vec![4, 8, 16, 32] },
            delta: 1e-3,
            t_end: 1.0,
            ..RunConfig::for_case(CaseId::Example1)
        };
        let result = sweep_h(&config)?;
        print!("{}", sweep_csv(&result));
        println!("k = {k}: fitted slope {:.3}\n", result.slope.unwrap_or(f64::NAN));
        sweeps.push((config, result));
    }
    Ok(sweeps)
}

fn main() {
    let out_dir = std::env::args().nth(1);
    let result = run_example().and_then(|sweeps| {
        if let Some(dir) = out_dir {
            for (config, result) in &sweeps {
                let config = RunConfig {
                    out_dir: dir.clone().into(),
                    ..config.clone()
                };
                for path in emit_sweep(&config, result)? {
                    println!("wrote {}", path.display());
                }
            }
        }
        Ok(())
    });
    if let Err(e) = result {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
