//! Command-line front end: analyses, damping optimization, solver validation
//! runs, and table reproduction.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use tetra_lfa::analysis::{
    optimize_damping_with, smoothing_factor_classic, smoothing_factor_four_color,
    two_grid_factor, OptimizeMethod, Region, SampleGrid,
};
use tetra_lfa::geometry::{basis_from_tet, geometry_from_json, shape_catalog, TetGeometry};
use tetra_lfa::report::{
    run_log_csv, to_json_string, write_json, write_text, ReportFile, RunManifest, SolveSummary,
};
use tetra_lfa::solver::{measure_vs_prediction, CycleConfig, CycleKind};
use tetra_lfa::stencil::{assemble_stencil, coarse_stencil, Stencil15};
use tetra_lfa::symbols::{SmootherConfig, SmootherKind};
use tetra_lfa::Error;

#[derive(Parser)]
#[command(
    name = "tetra-lfa",
    about = "Local Fourier analysis and geometric multigrid for tetrahedral grids",
    version
)]
struct Cli {
    /// Worker threads for the frequency lattice (default: all cores;
    /// env fallback TETRA_LFA_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute a smoothing or two-grid factor
    Analyze(AnalyzeArgs),
    /// Search damping parameters minimizing the two-grid factor
    Optimize(OptimizeArgs),
    /// Run the multigrid solver and compare against the LFA prediction
    Solve(SolveArgs),
    /// Reproduce a published table as CSV
    Table(TableArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Geometry: `catalog:<name>` or a JSON file path
    #[arg(long)]
    geometry: String,
    /// Smoother: jacobi | gs-lex | four-color | zebra-line[:x|y|z] |
    /// zebra-plane[:x|y|z] | lex-plane[:x|y|z]
    #[arg(long, default_value = "four-color")]
    smoother: String,
    /// Damping factor(s), comma separated (4 for four-color)
    #[arg(long)]
    omega: Option<String>,
    /// Pre- and post-smoothing sweeps, e.g. 1,1
    #[arg(long, default_value = "1,1")]
    nu: String,
    /// Frequency samples per pi
    #[arg(long, default_value_t = 32)]
    resolution: usize,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value_t = Mode::TwoGrid)]
    mode: Mode,
    /// Relative threshold for excluding near-singular frequencies
    #[arg(long, default_value_t = 1e-10)]
    exclusion_tol: f64,
    /// Write the FactorReport JSON here (also printed to stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dump the assembled fine-grid stencil as CSV to this path
    #[arg(long)]
    dump_stencil: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Smoothing,
    TwoGrid,
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value_t = Method::Simplex)]
    method: Method,
    /// Damping grid step
    #[arg(long, default_value_t = 0.05)]
    resolution_omega: f64,
    /// Upper end of the damping scan
    #[arg(long, default_value_t = 2.0)]
    max_omega: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Grid,
    Simplex,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value_t = Cycle::W)]
    cycle: Cycle,
    /// Finest grid points per direction (must be 2^l + 1)
    #[arg(long, default_value_t = 65)]
    n: usize,
    #[arg(long, default_value_t = 50)]
    cycles: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write the per-cycle run log CSV here
    #[arg(long)]
    log: Option<PathBuf>,
    /// Write the summary JSON here (also printed to stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Cycle {
    #[value(alias = "V")]
    V,
    #[value(alias = "W")]
    W,
}

#[derive(Args)]
struct TableArgs {
    /// table1 | table2 | degenerate
    #[arg(long)]
    name: String,
    /// Also measure W-cycle rates with the solver (slower)
    #[arg(long, default_value_t = false)]
    with_solver: bool,
    /// Solver grid size used with --with-solver
    #[arg(long, default_value_t = 33)]
    n: usize,
    #[arg(long, default_value_t = 30)]
    cycles: usize,
    #[arg(long, default_value_t = 32)]
    resolution: usize,
    /// Write the CSV here (also printed to stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// Parsing helpers
// ---------------------------------------------------------------------------

fn parse_geometry(spec: &str) -> Result<TetGeometry, Error> {
    if let Some(name) = spec.strip_prefix("catalog:") {
        return shape_catalog(name);
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| Error::Config(format!("cannot read geometry file {spec}: {e}")))?;
    geometry_from_json(&text)
}

fn parse_axis(s: &str) -> Result<usize, Error> {
    match s {
        "x" | "0" => Ok(0),
        "y" | "1" => Ok(1),
        "z" | "2" => Ok(2),
        _ => Err(Error::Config(format!("unknown lattice axis '{s}' (use x, y or z)"))),
    }
}

fn parse_smoother_kind(s: &str) -> Result<SmootherKind, Error> {
    let (head, axis) = match s.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (s, None),
    };
    let kind = match head {
        "jacobi" => SmootherKind::Jacobi,
        "gs-lex" | "gs" => SmootherKind::GsLex,
        "four-color" | "fc" => SmootherKind::FourColor,
        // default axes are the strong directions of the catalog shapes
        "zebra-line" => SmootherKind::ZebraLine(axis.map_or(Ok(0), parse_axis)?),
        "zebra-plane" => SmootherKind::ZebraPlane(axis.map_or(Ok(2), parse_axis)?),
        "lex-plane" => SmootherKind::LexPlane(axis.map_or(Ok(2), parse_axis)?),
        _ => return Err(Error::Config(format!("unknown smoother '{s}'"))),
    };
    if axis.is_some()
        && matches!(kind, SmootherKind::Jacobi | SmootherKind::GsLex | SmootherKind::FourColor)
    {
        return Err(Error::Config(format!("smoother '{head}' takes no axis")));
    }
    Ok(kind)
}

fn parse_omega(kind: SmootherKind, omega: &Option<String>) -> Result<SmootherConfig, Error> {
    let list: Vec<f64> = match omega {
        None => return Ok(SmootherConfig::undamped(kind)),
        Some(s) => s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad damping value '{t}'")))
            })
            .collect::<Result<_, _>>()?,
    };
    SmootherConfig::new(kind, list)
}

fn parse_nu(s: &str) -> Result<(u32, u32), Error> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Config(format!("--nu expects n1,n2 (got '{s}')")));
    }
    let a = parts[0].trim().parse().map_err(|_| Error::Config(format!("bad nu '{s}'")))?;
    let b = parts[1].trim().parse().map_err(|_| Error::Config(format!("bad nu '{s}'")))?;
    Ok((a, b))
}

fn stencil_pair(geom: &TetGeometry) -> Result<(Stencil15, Stencil15), Error> {
    let basis = basis_from_tet(geom)?;
    Ok((assemble_stencil(&basis)?, coarse_stencil(&basis)?))
}

fn manifest(command: &str, c: &CommonArgs, cfg: &SmootherConfig, nu: (u32, u32)) -> RunManifest {
    RunManifest {
        command: command.into(),
        geometry: c.geometry.clone(),
        smoother: c.smoother.clone(),
        omega: cfg.omega.clone(),
        nu,
        resolution: c.resolution,
        seed: None,
        timestamp: 0,
    }
    .stamp_now()
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_analyze(a: &AnalyzeArgs) -> Result<(), Error> {
    let geom = parse_geometry(&a.common.geometry)?;
    let kind = parse_smoother_kind(&a.common.smoother)?;
    let cfg = parse_omega(kind, &a.common.omega)?;
    let (n1, n2) = parse_nu(&a.common.nu)?;
    let (st, st_h) = stencil_pair(&geom)?;
    if let Some(path) = &a.dump_stencil {
        write_text(path, &st.dump_csv())?;
    }
    let grid = SampleGrid::new(Region::LambdaFine, a.common.resolution)?
        .with_exclusion_tol(a.exclusion_tol);
    let report = match a.mode {
        Mode::Smoothing => match kind {
            SmootherKind::FourColor => {
                let omega: [f64; 4] = std::array::from_fn(|i| cfg.omega[i]);
                smoothing_factor_four_color(&st, &omega, n1 + n2, &grid)?
            }
            _ => smoothing_factor_classic(&st, &cfg, (n1 + n2).max(1), &grid)?,
        },
        Mode::TwoGrid => two_grid_factor(&st, &st_h, &cfg, n1, n2, &grid)?,
    };
    let file = ReportFile::new(&report, manifest("analyze", &a.common, &cfg, (n1, n2)));
    let json = to_json_string(&file)?;
    println!("{json}");
    if let Some(path) = &a.out {
        write_json(path, &file)?;
    }
    Ok(())
}

fn cmd_optimize(a: &OptimizeArgs) -> Result<(), Error> {
    let geom = parse_geometry(&a.common.geometry)?;
    let kind = parse_smoother_kind(&a.common.smoother)?;
    let (n1, n2) = parse_nu(&a.common.nu)?;
    let (st, st_h) = stencil_pair(&geom)?;
    let method = match a.method {
        Method::Grid => OptimizeMethod::Grid,
        Method::Simplex => OptimizeMethod::Simplex,
    };
    let (omega, report) = optimize_damping_with(
        &st,
        &st_h,
        kind,
        n1,
        n2,
        method,
        a.common.resolution,
        a.resolution_omega,
        a.max_omega,
    )?;
    let cfg = SmootherConfig::new(kind, omega.clone())?;
    let file = ReportFile::new(&report, manifest("optimize", &a.common, &cfg, (n1, n2)));
    let json = to_json_string(&file)?;
    println!("{json}");
    if let Some(path) = &a.out {
        write_json(path, &file)?;
    }
    Ok(())
}

fn levels_for_n(n: usize) -> Result<u32, Error> {
    let m = n.checked_sub(1).unwrap_or(0);
    if n >= 5 && m.is_power_of_two() {
        Ok(m.trailing_zeros())
    } else {
        Err(Error::Config(format!("grid size {n} is not of the form 2^l + 1 with l >= 2")))
    }
}

fn cmd_solve(a: &SolveArgs) -> Result<(), Error> {
    let geom = parse_geometry(&a.common.geometry)?;
    let kind = parse_smoother_kind(&a.common.smoother)?;
    let cfg = parse_omega(kind, &a.common.omega)?;
    let (n1, n2) = parse_nu(&a.common.nu)?;
    let (st, st_h) = stencil_pair(&geom)?;
    let cycle_cfg = CycleConfig {
        kind: if a.cycle == Cycle::V { CycleKind::V } else { CycleKind::W },
        nu1: n1,
        nu2: n2,
        smoother: cfg.clone(),
        levels: levels_for_n(a.n)?,
        cycles: a.cycles,
        seed: a.seed,
    };
    let (cmp, _report, run) = measure_vs_prediction(&st, &st_h, &cycle_cfg, a.common.resolution)?;
    if let Some(path) = &a.log {
        write_text(path, &run_log_csv(&run.records))?;
    }
    let mut mf = manifest("solve", &a.common, &cfg, (n1, n2));
    mf.seed = Some(a.seed);
    let summary = SolveSummary::new(&cmp, mf);
    let json = to_json_string(&summary)?;
    println!("{json}");
    if let Some(path) = &a.out {
        write_json(path, &summary)?;
    }
    Ok(())
}

fn table_factors(
    name: &str,
    cfg: &SmootherConfig,
    n1: u32,
    n2: u32,
    resolution: usize,
) -> Result<(f64, f64), Error> {
    let geom = shape_catalog(name)?;
    let (st, st_h) = stencil_pair(&geom)?;
    let grid = SampleGrid::new(Region::LambdaFine, resolution)?;
    let mu = match cfg.kind {
        SmootherKind::FourColor => {
            let omega: [f64; 4] = std::array::from_fn(|i| cfg.omega[i]);
            smoothing_factor_four_color(&st, &omega, n1 + n2, &grid)?.factor
        }
        _ => smoothing_factor_classic(&st, cfg, n1 + n2, &grid)?.factor,
    };
    let rho = two_grid_factor(&st, &st_h, cfg, n1, n2, &grid)?.factor;
    Ok((mu.powi((n1 + n2) as i32), rho))
}

fn measured_rate(
    name: &str,
    cfg: &SmootherConfig,
    n1: u32,
    n2: u32,
    a: &TableArgs,
) -> Result<f64, Error> {
    let geom = shape_catalog(name)?;
    let (st, _) = stencil_pair(&geom)?;
    let solver = tetra_lfa::solver::MultigridSolver::new(st, levels_for_n(a.n)?)?;
    let run = solver.run_cycles(&CycleConfig {
        kind: CycleKind::W,
        nu1: n1,
        nu2: n2,
        smoother: cfg.clone(),
        levels: levels_for_n(a.n)?,
        cycles: a.cycles,
        seed: 42,
    })?;
    Ok(run.asymptotic_rate)
}

fn cmd_table(a: &TableArgs) -> Result<(), Error> {
    let nus = [(1u32, 0u32), (1, 1), (2, 1), (2, 2)];
    let mut csv = String::new();
    match a.name.as_str() {
        "table1" => {
            let smoothers = [
                ("jacobi", SmootherConfig::new(SmootherKind::Jacobi, vec![0.8])?),
                ("gs", SmootherConfig::undamped(SmootherKind::GsLex)),
                ("fc", SmootherConfig::undamped(SmootherKind::FourColor)),
            ];
            csv.push_str("nu1,nu2");
            for (label, _) in &smoothers {
                csv.push_str(&format!(",{label}_mu,{label}_rho"));
                if a.with_solver {
                    csv.push_str(&format!(",{label}_rho_h"));
                }
            }
            csv.push('\n');
            for (n1, n2) in nus {
                csv.push_str(&format!("{n1},{n2}"));
                for (_, cfg) in &smoothers {
                    let (mu, rho) = table_factors("regular", cfg, n1, n2, a.resolution)?;
                    csv.push_str(&format!(",{mu:.3},{rho:.3}"));
                    if a.with_solver {
                        let r = measured_rate("regular", cfg, n1, n2, a)?;
                        csv.push_str(&format!(",{r:.3}"));
                    }
                }
                csv.push('\n');
            }
        }
        "table2" => {
            let cfg = SmootherConfig::undamped(SmootherKind::FourColor);
            csv.push_str(if a.with_solver { "nu1,nu2,mu,rho,rho_h\n" } else { "nu1,nu2,mu,rho\n" });
            for (n1, n2) in [(1u32, 0u32), (1, 1)] {
                let (mu, rho) = table_factors("optimized", &cfg, n1, n2, a.resolution)?;
                csv.push_str(&format!("{n1},{n2},{mu:.3},{rho:.3}"));
                if a.with_solver {
                    let r = measured_rate("optimized", &cfg, n1, n2, a)?;
                    csv.push_str(&format!(",{r:.3}"));
                }
                csv.push('\n');
            }
        }
        "degenerate" => {
            let cfg = SmootherConfig::undamped(SmootherKind::FourColor);
            csv.push_str("shape,mu2,rho\n");
            for name in tetra_lfa::geometry::CATALOG_NAMES {
                let (mu, rho) = table_factors(name, &cfg, 1, 1, a.resolution)?;
                csv.push_str(&format!("{name},{mu:.3},{rho:.3}\n"));
            }
        }
        other => return Err(Error::Config(format!("unknown table '{other}'"))),
    }
    print!("{csv}");
    if let Some(path) = &a.out {
        write_text(path, &csv)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("TETRA_LFA_THREADS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(t) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot configure {t} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.cmd {
        Cmd::Analyze(a) => cmd_analyze(a),
        Cmd::Optimize(a) => cmd_optimize(a),
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Table(a) => cmd_table(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Numerical(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
