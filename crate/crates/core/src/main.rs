use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nonlocal_parabolic::harness::config::parse_pairs;
use nonlocal_parabolic::harness::{self, output, RunConfig, SweepResult};
use nonlocal_parabolic::manufactured::{make_case, verify_case, CaseId};
use nonlocal_parabolic::{Error, Result};

/// Crank-Nicolson Galerkin solver for u_t - (int u^2)^gamma Lap u = f.
#[derive(Parser)]
#[command(name = "nlp", version)]
struct Cli {
    /// `key = value` config file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one case and write energy, guard log and snapshots.
    Solve(Overrides),
    /// Mesh refinement study at fixed step.
    SweepH {
        #[command(flatten)]
        overrides: Overrides,
        /// Degrees to sweep, one table per degree (default: `k`).
        #[arg(long, value_delimiter = ',')]
        ks: Vec<usize>,
    },
    /// Step refinement study on a fixed mesh.
    SweepDt(Overrides),
    /// Solve the fixed point for alpha.
    Alpha { case: CaseId },
    /// Energy histories of all three cases at their reference settings.
    Energy {
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Check an exact solution against the PDE and its fixed point.
    Verify { case: CaseId },
}

#[derive(Args, Default)]
struct Overrides {
    #[arg(long)]
    case: Option<String>,
    #[arg(long)]
    dim: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    t_end: Option<String>,
    #[arg(long)]
    solver_tol: Option<String>,
    #[arg(long)]
    solver_method: Option<String>,
    #[arg(long)]
    guard_floor: Option<String>,
    #[arg(long)]
    guard_ceiling: Option<String>,
    #[arg(long)]
    guard_policy: Option<String>,
    #[arg(long)]
    out_dir: Option<String>,
    #[arg(long)]
    snapshots: Option<String>,
    #[arg(long)]
    ns: Option<String>,
    #[arg(long)]
    deltas: Option<String>,
}

impl Overrides {
    fn pairs(&self) -> Vec<(&'static str, &str)> {
        [
            ("case", &self.case),
            ("dim", &self.dim),
            ("k", &self.k),
            ("n", &self.n),
            ("h", &self.h),
            ("delta", &self.delta),
            ("t_end", &self.t_end),
            ("solver_tol", &self.solver_tol),
            ("solver_method", &self.solver_method),
            ("guard_floor", &self.guard_floor),
            ("guard_ceiling", &self.guard_ceiling),
            ("guard_policy", &self.guard_policy),
            ("out_dir", &self.out_dir),
            ("snapshots", &self.snapshots),
            ("ns", &self.ns),
            ("deltas", &self.deltas),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
        .collect()
    }
}

/// Case defaults, then the config file, then the flags.
fn load_config(file: Option<&PathBuf>, overrides: &Overrides) -> Result<RunConfig> {
    let file_pairs = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            parse_pairs(&text)?
        }
        None => Vec::new(),
    };
    let flags = overrides.pairs();
    let case = flags
        .iter()
        .find(|(k, _)| *k == "case")
        .map(|(_, v)| *v)
        .or_else(|| file_pairs.iter().find(|(k, _)| k == "case").map(|(_, v)| v.as_str()))
        .unwrap_or("example1");
    let mut config = RunConfig::for_case(case.parse()?);
    config.apply(
        file_pairs
            .iter()
            .filter(|(k, _)| k != "case")
            .map(|(k, v)| (k.as_str(), v.as_str())),
    )?;
    config.apply(flags.into_iter().filter(|(k, _)| *k != "case"))?;
    config.validate()?;
    Ok(config)
}

fn print_paths(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn print_sweep(result: &SweepResult) {
    for (row, rate) in result.rows.iter().zip(&result.rates) {
        let err = row
            .error_l2
            .map(|e| format!("{e:.6e}"))
            .unwrap_or_else(|| "failed".into());
        let rate = rate.map(|r| format!("{r:.3}")).unwrap_or_default();
        println!(
            "k={} h={:<10} delta={:<10} error={err} rate={rate}",
            row.k, row.h, row.delta
        );
    }
    if let Some(s) = result.slope {
        println!("fitted slope {s:.4}");
    }
    for r in result.failures() {
        eprintln!(
            "run h={} delta={} failed: {}",
            r.h,
            r.delta,
            r.failure.as_deref().unwrap_or("")
        );
    }
}

fn run(cli: Cli) -> Result<()> {
    let file = cli.config.as_ref();
    match cli.command {
        Command::Solve(overrides) => {
            let config = load_config(file, &overrides)?;
            let report = harness::run_solve(&config)?;
            println!(
                "{}: k={} h={} delta={} steps={} L2 error at t={}: {:.6e}",
                config.case, config.k, report.h, report.delta, report.n_steps, config.t_end, report.final_error
            );
            if let Some(trip) = report.first_guard_trip() {
                println!("first guard trip: step {} t={} ({})", trip.step, trip.t, trip.status);
            }
            print_paths(&output::emit_solve(&report)?);
        }
        Command::SweepH { overrides, ks } => {
            let base = load_config(file, &overrides)?;
            let ks = if ks.is_empty() { vec![base.k] } else { ks };
            let mut failed = false;
            for k in ks {
                let config = RunConfig { k, ..base.clone() };
                config.validate()?;
                let result = harness::sweep_h(&config)?;
                print_sweep(&result);
                print_paths(&output::emit_sweep(&config, &result)?);
                failed |= result.failures().next().is_some();
            }
            if failed {
                return Err(Error::Numerical("one or more sweep runs failed".into()));
            }
        }
        Command::SweepDt(overrides) => {
            let config = load_config(file, &overrides)?;
            let result = harness::sweep_delta(&config)?;
            print_sweep(&result);
            print_paths(&output::emit_sweep(&config, &result)?);
            if result.failures().next().is_some() {
                return Err(Error::Numerical("one or more sweep runs failed".into()));
            }
        }
        Command::Alpha { case } => {
            let case = make_case(case)?;
            println!(
                "{} alpha = {:.15} (|alpha - G(alpha)| = {:.1e})",
                case.id, case.alpha, case.alpha_residual
            );
        }
        Command::Energy { out_dir } => {
            let dir = out_dir.unwrap_or_else(|| PathBuf::from("out"));
            let configs: Vec<RunConfig> = CaseId::ALL.into_iter().map(RunConfig::for_case).collect();
            let series = harness::energy_study(&configs)?;
            for s in &series {
                if let Some(&(t, e)) = s.points.last() {
                    println!("{}: energy at t={t} is {e:.6e}", s.case);
                }
            }
            print_paths(&output::emit_energy(&dir, &configs, &series)?);
        }
        Command::Verify { case } => {
            let case = make_case(case)?;
            let r = verify_case(&case);
            println!("{}: {}", case.id, case.notes);
            println!("  max PDE residual        {:.3e}", r.max_pde_residual);
            println!("  fixed-point residual    {:.3e}", r.fixed_point_residual);
            println!("  coefficient mismatch    {:.3e}", r.max_coefficient_mismatch);
            println!("  boundary trace          {:.3e}", r.max_boundary_trace);
            println!("  initial mass            {:.6e}", r.initial_mass);
            if !r.passes(1e-7, 1e-12) {
                return Err(Error::Numerical(format!("{} fails verification", case.id)));
            }
            println!("  ok");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
