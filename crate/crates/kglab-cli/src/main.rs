//! Command-line harness: run estimate scenarios from JSON configs, print
//! Fefferman-Phong norm estimates, sweep parameters and render stored
//! reports.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 invalid configuration or
//! usage, 3 estimate failure (a ratio exceeded its configured cap).

use kglab_cli::{config, report, scenario};

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{EstimateId, ScenarioConfig};
use scenario::{run_scenario, ScenarioError};

#[derive(Parser)]
#[command(
    name = "kglab",
    version,
    about = "Klein-Gordon spectral laboratory harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario configuration (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Output directory for reports and field files
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the RNG seed from the config
    #[arg(long)]
    seed: Option<u64>,
    /// Override the wall-clock budget per scenario
    #[arg(long)]
    budget_sec: Option<u64>,
    /// Size of the worker thread pool (defaults to all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the Picard solver and write the solution slices plus the
    /// convergence trace
    Solve {
        #[command(flatten)]
        common: CommonArgs,
        /// Write every n-th time slice
        #[arg(long, default_value_t = 4)]
        field_stride: usize,
    },
    /// Estimate the Fefferman-Phong norm of the configured potential
    Fpnorm {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the scenario for one estimate and write its report
    Check {
        /// Estimate to check; must match the config
        estimate: EstimateId,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run a scenario over a parameter grid
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Which parameter the values apply to
        #[arg(long, value_enum)]
        param: SweepParam,
        /// Comma-separated parameter values
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Render a stored report as a human-readable table
    Report {
        /// Path to a report.json
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SweepParam {
    /// Potential coupling strength
    Coupling,
    /// Carrier frequency of the first packet (x-axis component)
    Carrier,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

const EXIT_OK: u8 = 0;
const EXIT_RUNTIME: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_ESTIMATE_FAILED: u8 = 3;

fn load_config(common: &CommonArgs) -> Result<ScenarioConfig, ExitCode> {
    let text = match fs::read_to_string(&common.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", common.config.display());
            return Err(ExitCode::from(EXIT_RUNTIME));
        }
    };
    let mut cfg = match ScenarioConfig::from_json(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("invalid configuration: {e}");
            return Err(ExitCode::from(EXIT_INVALID));
        }
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(budget) = common.budget_sec {
        cfg.budget_sec = budget;
    }
    if let Some(threads) = common.threads {
        // a failure here only means the pool was already initialized
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    Ok(cfg)
}

fn report_scenario_error(e: &ScenarioError) -> ExitCode {
    eprintln!("{e}");
    match e {
        ScenarioError::Invalid(_) => ExitCode::from(EXIT_INVALID),
        _ => ExitCode::from(EXIT_RUNTIME),
    }
}

fn run(cli: Cli) -> Result<ExitCode, anyhow::Error> {
    match cli.command {
        Command::Check { estimate, common } => {
            let cfg = match load_config(&common) {
                Ok(c) => c,
                Err(code) => return Ok(code),
            };
            if cfg.estimate != estimate {
                eprintln!(
                    "invalid configuration: command asks for {:?} but the config declares {:?}",
                    estimate, cfg.estimate
                );
                return Ok(ExitCode::from(EXIT_INVALID));
            }
            let outcome = match run_scenario(&cfg) {
                Ok(o) => o,
                Err(e) => return Ok(report_scenario_error(&e)),
            };
            let out_dir = common.out.unwrap_or_else(|| PathBuf::from("out"));
            outcome.report.write_files(&out_dir)?;
            if let Some(sweep) = &outcome.sweep {
                let mut buf = Vec::new();
                kglab::resolvent::write_sweep_csv(sweep, &mut buf)?;
                fs::write(out_dir.join("zsweep.csv"), buf)?;
            }
            println!("{}", outcome.report.render_table());
            if outcome.report.pass {
                Ok(ExitCode::from(EXIT_OK))
            } else {
                eprintln!(
                    "estimate failed: max ratio {} exceeds cap {}",
                    outcome.report.max_ratio, outcome.report.ratio_cap
                );
                Ok(ExitCode::from(EXIT_ESTIMATE_FAILED))
            }
        }

        Command::Fpnorm { common } => {
            let cfg = match load_config(&common) {
                Ok(c) => c,
                Err(code) => return Ok(code),
            };
            let violations = cfg.validate();
            let spec = match (&cfg.potential, violations.is_empty()) {
                (Some(p), true) => *p,
                (None, _) => {
                    eprintln!("invalid configuration: fpnorm requires a potential section");
                    return Ok(ExitCode::from(EXIT_INVALID));
                }
                (_, false) => {
                    eprintln!("invalid configuration:\n{}", violations.join("\n"));
                    return Ok(ExitCode::from(EXIT_INVALID));
                }
            };
            let grid = kglab::Grid::new(cfg.grid.dim, cfg.grid.half_length, cfg.grid.points)?;
            let v = kglab::make_potential(spec.family(), grid, spec.fp_exponent())?;
            let radii = cfg
                .scan
                .radii
                .clone()
                .unwrap_or_else(|| kglab::dyadic_radii(&grid));
            let est = kglab::fp_norm(&v, spec.fp_exponent(), cfg.scan.center_stride, &radii)?;
            println!("{}", serde_json::to_string_pretty(&est)?);
            Ok(ExitCode::from(EXIT_OK))
        }

        Command::Solve {
            common,
            field_stride,
        } => {
            let cfg = match load_config(&common) {
                Ok(c) => c,
                Err(code) => return Ok(code),
            };
            let mut violations = cfg.validate();
            if cfg.time.is_none() {
                violations.push("solve requires a time section".into());
            }
            if cfg.potential.is_none() {
                violations.push("solve requires a potential section".into());
            }
            if cfg.data.is_none() {
                violations.push("solve requires a data section".into());
            }
            if field_stride == 0 {
                violations.push("field stride must be at least 1".into());
            }
            if !violations.is_empty() {
                eprintln!("invalid configuration:\n{}", violations.join("\n"));
                return Ok(ExitCode::from(EXIT_INVALID));
            }
            let out_dir = common.out.unwrap_or_else(|| PathBuf::from("out"));
            fs::create_dir_all(&out_dir)?;

            let grid = kglab::Grid::new(cfg.grid.dim, cfg.grid.half_length, cfg.grid.points)?;
            let spec = cfg.potential.as_ref().unwrap();
            let v = kglab::make_potential(spec.family(), grid, spec.fp_exponent())?;
            let time = cfg.time.unwrap();

            // first Cauchy sample of the configured family
            let data = build_first_sample(&cfg, grid)?;
            match kglab::picard_solve(
                &data,
                &v,
                time.t_end,
                time.dt,
                cfg.solver.tol,
                cfg.solver.max_iter,
            ) {
                Ok((u, trace)) => {
                    for m in (0..=u.steps()).step_by(field_stride) {
                        let path = out_dir.join(format!("slice_{m:05}.field"));
                        kglab::write_field(u.slice(m), &path)?;
                    }
                    fs::write(
                        out_dir.join("trace.json"),
                        serde_json::to_string_pretty(&trace)?,
                    )?;
                    println!(
                        "converged: {} ({} iterations, final residual {:e})",
                        trace.converged,
                        trace.iterates,
                        trace.residuals.last().copied().unwrap_or(0.0)
                    );
                    Ok(ExitCode::from(EXIT_OK))
                }
                Err(e) => {
                    // persist the trace for post-mortem before failing
                    let trace = match &e {
                        kglab::SolveError::Diverged { trace }
                        | kglab::SolveError::MaxIterations { trace, .. } => Some(trace),
                        _ => None,
                    };
                    if let Some(trace) = trace {
                        fs::write(
                            out_dir.join("trace.json"),
                            serde_json::to_string_pretty(trace)?,
                        )?;
                    }
                    eprintln!("solver failed: {e}");
                    Ok(ExitCode::from(EXIT_RUNTIME))
                }
            }
        }

        Command::Sweep {
            common,
            param,
            values,
        } => {
            let cfg = match load_config(&common) {
                Ok(c) => c,
                Err(code) => return Ok(code),
            };
            if values.is_empty() {
                eprintln!("invalid configuration: sweep needs at least one value");
                return Ok(ExitCode::from(EXIT_INVALID));
            }
            let out_dir = common.out.unwrap_or_else(|| PathBuf::from("out"));
            fs::create_dir_all(&out_dir)?;
            let mut rows = Vec::new();
            for &value in &values {
                let mut item = cfg.clone();
                match param {
                    SweepParam::Coupling => {
                        let Some(p) = item.potential else {
                            eprintln!("invalid configuration: coupling sweep needs a potential");
                            return Ok(ExitCode::from(EXIT_INVALID));
                        };
                        item.potential = Some(p.with_coupling(value));
                    }
                    SweepParam::Carrier => match &mut item.data {
                        Some(config::DataSpec::GaussianPackets { packets })
                            if !packets.is_empty() =>
                        {
                            for pk in packets.iter_mut() {
                                pk.carrier = [value, 0.0, 0.0];
                            }
                        }
                        _ => {
                            eprintln!(
                                "invalid configuration: carrier sweep needs gaussian packet data"
                            );
                            return Ok(ExitCode::from(EXIT_INVALID));
                        }
                    },
                }
                match run_scenario(&item) {
                    Ok(outcome) => {
                        let dir = out_dir.join(format!("{param:?}_{value}").to_lowercase());
                        outcome.report.write_files(&dir)?;
                        rows.push((value, outcome.report));
                    }
                    Err(e) => return Ok(report_scenario_error(&e)),
                }
            }
            let mut csv = String::from("param,value,max_ratio,median_ratio,pass\n");
            for (value, report) in &rows {
                csv.push_str(&format!(
                    "{:?},{},{},{},{}\n",
                    param, value, report.max_ratio, report.median_ratio, report.pass
                ));
            }
            fs::write(out_dir.join("sweep.csv"), csv)?;
            let all_pass = rows.iter().all(|(_, r)| r.pass);
            println!(
                "sweep complete: {}/{} scenarios passed",
                rows.iter().filter(|(_, r)| r.pass).count(),
                rows.len()
            );
            Ok(ExitCode::from(if all_pass {
                EXIT_OK
            } else {
                EXIT_ESTIMATE_FAILED
            }))
        }

        Command::Report { report } => {
            let text = fs::read_to_string(&report)?;
            let parsed: report::EstimateReport = serde_json::from_str(&text)?;
            println!("{}", parsed.render_table());
            Ok(ExitCode::from(EXIT_OK))
        }
    }
}

fn build_first_sample(
    cfg: &ScenarioConfig,
    grid: kglab::Grid,
) -> Result<kglab::CauchyData, anyhow::Error> {
    use kglab::synth::{gaussian_packet, random_bandlimited, GaussianPacket};
    use num_complex::Complex64;
    match cfg.data.as_ref().unwrap() {
        config::DataSpec::GaussianPackets { packets } => {
            let pk = &packets[0];
            let f = gaussian_packet(
                grid,
                &GaussianPacket {
                    center: pk.center,
                    width: pk.width,
                    carrier: pk.carrier,
                    amplitude: pk.amplitude,
                },
            );
            let g = kglab::bessel_derivative(&f, 1.0).scale(Complex64::new(0.0, 1.0));
            Ok(kglab::CauchyData::new(f, g)?)
        }
        config::DataSpec::RandomBandlimited { band, .. } => {
            let f = random_bandlimited(grid, *band, cfg.seed);
            let g = random_bandlimited(grid, *band, cfg.seed + 10_000);
            Ok(kglab::CauchyData::new(f, g)?)
        }
    }
}
