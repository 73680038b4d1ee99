//! Batch front-end: parse a scenario (file or built-in name), run the
//! requested solver or study, and write frames, curves, summaries, and
//! plot-ready tables.
//!
//! Exit codes: 0 ok, 2 parse error, 3 validation failure, 4 numerical
//! failure.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bvmeasure::SkewPath;
use crate::curvegeom::{
    discrete_frechet, inscribe, integrate_tangent, invariants_exact, jump_angle_table,
    tantrix_variation, Curve,
};
use crate::error::{Error, Result};
use crate::export::{
    atomic_write, convergence_csv, curve_csv, curve_json, curve_obj, frames_csv, parse_curve_csv,
    summary_json, ConvergenceRow, Format, SummaryDoc,
};
use crate::scenario::{builtin, BuiltScenario, BuiltinParams, Scenario, BUILTIN_NAMES};
use crate::solver::{
    residual_check, solve_2d, solve_bv, solve_bv_general, solve_mollified_oracle, FramePath,
};

#[derive(Debug, Parser)]
#[command(
    name = "frenet-bv",
    about = "Frames and curves from curvature/torsion data of bounded variation",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a scenario and write frames, curve, and summary
    Solve(RunArgs),
    /// Solve the box-mollified system at a fixed half-width
    Oracle {
        /// Mollification half-width
        #[arg(long)]
        eps: f64,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Run the mollification ladder (and truncation ladder when the
    /// scenario declares a countable jump family) and tabulate distances
    Convergence(RunArgs),
    /// Check jump admissibility and the integral-equation residual
    Validate(RunArgs),
    /// Re-emit a previously written curve in another format
    Export {
        /// Directory containing curve.csv from an earlier run
        #[arg(long)]
        input: PathBuf,
        /// Target format: csv, json or obj
        #[arg(long)]
        format: String,
    },
    /// List the built-in scenario names
    List,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Scenario file path, or one of the built-in names (see `list`)
    #[arg(long)]
    scenario: String,
    /// Curvature-angle jump for parameterizable built-ins
    #[arg(long)]
    d: Option<f64>,
    /// Torsion-angle jump for parameterizable built-ins
    #[arg(long)]
    tau: Option<f64>,
    /// Seed for the randomized built-in
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override the base grid size
    #[arg(long)]
    grid: Option<usize>,
    /// Override the mollification ladder (comma separated)
    #[arg(long, value_delimiter = ',')]
    eps: Vec<f64>,
    /// Output formats (comma separated: csv, json, obj)
    #[arg(long, value_delimiter = ',', default_value = "csv,json")]
    format: Vec<String>,
}

impl RunArgs {
    fn build(&self) -> Result<BuiltScenario> {
        let mut params = BuiltinParams::default();
        if let Some(d) = self.d {
            params.d = d;
        }
        if let Some(tau) = self.tau {
            params.tau = tau;
        }
        if let Some(seed) = self.seed {
            params.seed = seed;
        }
        let scenario = if BUILTIN_NAMES.contains(&self.scenario.as_str()) {
            builtin(&self.scenario, params)?
        } else {
            let path = Path::new(&self.scenario);
            if !path.exists() {
                return Err(Error::ScenarioParse {
                    name: self.scenario.clone(),
                    message: "no scenario file at this path and no built-in of this name"
                        .into(),
                });
            }
            Scenario::from_file(path)?
        };
        let mut built = scenario.build()?;
        if let Some(grid) = self.grid {
            built.config.base_grid = grid;
            built.config.validate()?;
        }
        if !self.eps.is_empty() {
            built.config.eps_ladder = self.eps.clone();
            built.config.validate()?;
        }
        Ok(built)
    }

    fn formats(&self) -> Result<Vec<Format>> {
        self.format.iter().map(|f| f.parse()).collect()
    }
}

struct Solved {
    omega: SkewPath,
    path: FramePath,
    curve: Option<Curve>,
    summary: SummaryDoc,
}

fn run_solve(built: &BuiltScenario) -> Result<Solved> {
    let min_mass = if built.truncation_levels > 0 {
        1.0 / built.truncation_levels as f64
    } else {
        f64::EPSILON
    };
    let omega = built.data.materialize(min_mass)?;
    let path = match built.dimension {
        2 => solve_2d(
            omega.theta().expect("planar datum carries theta"),
            &built.initial,
            &built.config,
        )?,
        _ => solve_bv(&omega, &built.initial, &built.config)?,
    };
    summarize(built, omega, path)
}

fn summarize(built: &BuiltScenario, omega: SkewPath, path: FramePath) -> Result<Solved> {
    let residual = residual_check(&path, &omega)?;
    let mut invariants = invariants_exact(&path, &omega)?;
    let curve = if built.theta_monotone {
        Some(integrate_tangent(&path, true)?)
    } else {
        None
    };
    if let Some(c) = &curve {
        if c.len() > 4 {
            let k = (c.len() - 1).min(4096).max(3);
            let poly = inscribe(c, k)?;
            invariants.tc_polygonal = Some(poly.rotation());
            invariants.tat_polygonal = Some(poly.total_torsion());
        }
    }
    let (var, tv) = tantrix_variation(&path)?;
    let summary = SummaryDoc {
        name: built.name.clone(),
        dimension: built.dimension,
        length: path.length(),
        grid_nodes: path.len(),
        invariants: Some(invariants),
        tantrix_spherical_variation: Some(var),
        tantrix_total_variation: Some(tv),
        max_orthogonality_defect: path.max_orthogonality_defect(),
        max_residual: None,
        residual_at: None,
        jumps: jump_angle_table(&omega)?,
    }
    .with_residual(&residual);
    Ok(Solved {
        omega,
        path,
        curve,
        summary,
    })
}

fn write_solved(out: &Path, solved: &Solved, formats: &[Format]) -> Result<()> {
    for format in formats {
        match format {
            Format::Csv => {
                atomic_write(&out.join("frames.csv"), frames_csv(&solved.path).as_bytes())?;
                if let Some(c) = &solved.curve {
                    atomic_write(&out.join("curve.csv"), curve_csv(c).as_bytes())?;
                }
            }
            Format::Json => {
                atomic_write(
                    &out.join("summary.json"),
                    summary_json(&solved.summary)?.as_bytes(),
                )?;
                if let Some(c) = &solved.curve {
                    atomic_write(&out.join("curve.json"), curve_json(c)?.as_bytes())?;
                }
            }
            Format::Obj => {
                if let Some(c) = &solved.curve {
                    atomic_write(&out.join("curve.obj"), curve_obj(c).as_bytes())?;
                }
            }
        }
    }
    Ok(())
}

fn cmd_solve(args: &RunArgs) -> Result<()> {
    let built = args.build()?;
    let solved = run_solve(&built)?;
    write_solved(&args.out, &solved, &args.formats()?)?;
    println!(
        "solved `{}`: {} nodes, {} jumps, residual {:.3e}",
        built.name,
        solved.path.len(),
        solved.path.jump_records().len(),
        solved.summary.max_residual.unwrap_or(f64::NAN)
    );
    Ok(())
}

fn cmd_oracle(eps: f64, args: &RunArgs) -> Result<()> {
    let built = args.build()?;
    let omega = built.data.materialize(if built.truncation_levels > 0 {
        1.0 / built.truncation_levels as f64
    } else {
        f64::EPSILON
    })?;
    let path = solve_mollified_oracle(&omega, eps, &built.initial, &built.config)?;
    let mollified = omega.mollify(eps)?;
    let solved = summarize(&built, mollified, path)?;
    write_solved(&args.out, &solved, &args.formats()?)?;
    println!(
        "oracle eps={eps} on `{}`: {} nodes, residual {:.3e}",
        built.name,
        solved.path.len(),
        solved.summary.max_residual.unwrap_or(f64::NAN)
    );
    Ok(())
}

fn cmd_convergence(args: &RunArgs) -> Result<()> {
    let built = args.build()?;
    let reference = run_solve(&built)?;
    let reference_curve = reference
        .curve
        .as_ref()
        .ok_or(Error::ThetaNotIncreasing)?;
    let mut rows: Vec<ConvergenceRow> = Vec::new();

    // mollification ladder, one thread per half-width
    let ladder = built.config.eps_ladder.clone();
    let results: Vec<Result<(f64, Curve)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = ladder
            .iter()
            .map(|eps| {
                let built = &built;
                let omega = &reference.omega;
                let eps = *eps;
                scope.spawn(move || -> Result<(f64, Curve)> {
                    let path = solve_mollified_oracle(omega, eps, &built.initial, &built.config)?;
                    let curve = integrate_tangent(&path, built.theta_monotone)?;
                    Ok((eps, curve))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("ladder worker panicked"))
            .collect()
    });
    let exact = reference
        .summary
        .invariants
        .as_ref()
        .expect("solve produced invariants");
    for r in results {
        let (eps, curve) = r?;
        rows.push(ConvergenceRow {
            study: "mollify".into(),
            parameter: eps,
            frechet: discrete_frechet(&curve, reference_curve)?,
            tc_exact: exact.tc_exact,
            tat_exact: exact.tat_exact,
            discarded_mass: 0.0,
        });
    }

    if built.data.tail.is_some() {
        let levels = solve_bv_general(
            &built.data,
            &built.initial,
            &built.config,
            built.truncation_levels,
        )?;
        for level in &levels {
            let summary = invariants_exact(&level.path, &built.data.materialize(1.0)?)
                .ok();
            let _ = summary; // per-level invariants use the level's own datum below
            let level_omega = built
                .data
                .materialize(1.0 / built.truncation_levels as f64)?
                .truncate_jumps(level.n);
            let inv = invariants_exact(&level.path, &level_omega)?;
            rows.push(ConvergenceRow {
                study: "truncate".into(),
                parameter: level.n as f64,
                frechet: level.frechet_from_previous.unwrap_or(0.0),
                tc_exact: inv.tc_exact,
                tat_exact: inv.tat_exact,
                discarded_mass: level.discarded_mass,
            });
        }
    }

    atomic_write(
        &args.out.join("convergence.csv"),
        convergence_csv(&rows).as_bytes(),
    )?;
    println!(
        "convergence on `{}`: {} rows written",
        built.name,
        rows.len()
    );
    Ok(())
}

fn cmd_validate(args: &RunArgs) -> Result<()> {
    let built = args.build()?;
    let min_mass = if built.truncation_levels > 0 {
        1.0 / built.truncation_levels as f64
    } else {
        f64::EPSILON
    };
    let omega = built.data.materialize(min_mass)?;
    let report = omega.validate_jumps();
    for check in &report.checks {
        println!(
            "jump at {:.6}: d={:.6} tau={:.6} magnitude={:.6} {}",
            check.location,
            check.d_theta,
            check.d_phi,
            check.magnitude,
            if check.admissible { "ok" } else { "VIOLATION" }
        );
    }
    if !report.pass() {
        return Err(Error::JumpValidation {
            violations: report.violations(),
            total: report.checks.len(),
        });
    }
    let path = match built.dimension {
        2 => solve_2d(
            omega.theta().expect("planar datum carries theta"),
            &built.initial,
            &built.config,
        )?,
        _ => solve_bv(&omega, &built.initial, &built.config)?,
    };
    let residual = residual_check(&path, &omega)?;
    println!(
        "residual: max {:.3e} at s = {:.6} over {} nodes",
        residual.max_residual, residual.at_s, residual.nodes_checked
    );
    println!(
        "orthogonality: max defect {:.3e}",
        path.max_orthogonality_defect()
    );
    Ok(())
}

fn cmd_export(input: &Path, format: &str) -> Result<()> {
    let format: Format = format.parse()?;
    let csv_path = input.join("curve.csv");
    let text = std::fs::read_to_string(&csv_path).map_err(|source| Error::Io {
        path: csv_path.display().to_string(),
        source,
    })?;
    let curve = parse_curve_csv(&text)?;
    let (name, payload) = match format {
        Format::Csv => ("curve.csv".to_string(), curve_csv(&curve)),
        Format::Json => ("curve.json".to_string(), curve_json(&curve)?),
        Format::Obj => ("curve.obj".to_string(), curve_obj(&curve)),
    };
    atomic_write(&input.join(&name), payload.as_bytes())?;
    println!("exported {name}");
    Ok(())
}

/// Parses `argv` and runs the requested command, returning the process
/// exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own message; usage problems are parse errors
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Oracle { eps, args } => cmd_oracle(*eps, args),
        Command::Convergence(args) => cmd_convergence(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Export { input, format } => cmd_export(input, format),
        Command::List => {
            for name in BUILTIN_NAMES {
                println!("{name}");
            }
            Ok(())
        }
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
