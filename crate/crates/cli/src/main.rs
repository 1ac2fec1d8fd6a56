//! `fracschro` — command-line front end for the fractional evolution
//! toolkit.
//!
//! Exit codes:
//!   0  success
//!   1  a verification check failed (`verify`)
//!   2  command-line usage error (from the argument parser)
//!   3  I/O or input-parsing error
//!   4  numeric or domain error (invalid orders, unstable configurations, …)

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use fracschro::fracderiv::ExponentialSignal;
use fracschro::harness::{reports_to_json, run_suite, SuiteConfig, SuiteSection};
use fracschro::kernel::{convolve_exponential, convolve_exponential_exact, FractionalOrder};
use fracschro::quad::QuadratureSpec;
use fracschro::scalar::{caputo_compare, scalar_weak_residual, ScalarProblem};
use fracschro::spectral::{
    load_potential, write_snapshot, GridSpec, SpectralOperator, WaveFunction,
};
use fracschro::{Error, Result};

#[derive(Parser)]
#[command(
    name = "fracschro",
    version,
    about = "Fractional-order evolution: kernels, weak scalar dynamics, spectral propagation, verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the fractional kernel convolved with an oscillation and
    /// compare against the closed form.
    Kernel {
        /// Kernel order β in (0, 1].
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        /// Oscillation frequency a (nonzero).
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        freq: f64,
        /// Evaluation time.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t: f64,
        /// Convolution cutoff Y for the quadrature.
        #[arg(long = "quad-y", default_value_t = 1e4)]
        quad_y: f64,
        /// Geometric panel count on (1, Y].
        #[arg(long = "quad-panels", default_value_t = 64)]
        quad_panels: usize,
        /// Tail-correction order (0, 1 or 2).
        #[arg(long = "tail-order", default_value_t = 1)]
        tail_order: u8,
    },
    /// Weak-formulation residual of a candidate oscillation, or the
    /// whole-line vs memory-from-zero modulus table (--contrast).
    Scalar {
        /// Fractional order α in (0, 1).
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Frequency of the dynamics.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        freq: f64,
        /// Candidate signal frequency (defaults to the dynamics frequency,
        /// i.e. the exact solution).
        #[arg(long = "candidate-freq", allow_negative_numbers = true)]
        candidate_freq: Option<f64>,
        /// Print the modulus contrast table instead of a residual.
        #[arg(long, default_value_t = false)]
        contrast: bool,
        /// Rate λ ≥ 0 for the contrast table.
        #[arg(long, default_value_t = 1.0)]
        rate: f64,
        /// Final time of the contrast grid.
        #[arg(long = "t-max", default_value_t = 2.0)]
        t_max: f64,
        /// Step of the contrast grid.
        #[arg(long = "t-step", default_value_t = 0.1)]
        t_step: f64,
    },
    /// Propagate an initial state under the fractional spectral group and
    /// emit snapshots.
    Propagate {
        /// Fractional order α in (0, 1).
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Grid points (even).
        #[arg(long, default_value_t = 32)]
        n: usize,
        /// Box length.
        #[arg(long, default_value_t = 16.0)]
        length: f64,
        /// Optional potential file: one sample per line (nonnegative),
        /// optional single header line.
        #[arg(long)]
        potential: Option<PathBuf>,
        /// Initial state: `mode:<m>` or `gaussian:<center>,<width>`.
        #[arg(long, default_value = "gaussian:8.0,1.0")]
        init: String,
        /// Comma-separated snapshot times.
        #[arg(long, default_value = "0.0,0.5,1.0")]
        times: String,
        /// Directory for snapshot_NNN.csv and norms.csv (stdout otherwise).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites and emit a JSON report.
    Verify {
        /// Fractional order α in (0, 1).
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Grid points for the spectral checks.
        #[arg(long, default_value_t = 32)]
        n: usize,
        /// Seed for the randomized probes.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Comma-separated sections: kernel, scalar, spectral, fourier,
        /// duality, or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Write the JSON report here and print a summary instead.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) | Error::Parse(_) => ExitCode::from(3),
                _ => ExitCode::from(4),
            }
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Kernel {
            beta,
            freq,
            t,
            quad_y,
            quad_panels,
            tail_order,
        } => {
            let quad = QuadratureSpec {
                truncation: quad_y,
                panels: quad_panels,
                nodes_per_panel: 16,
                tail_correction_order: tail_order,
            };
            let numeric = convolve_exponential(beta, freq, t, &quad)?;
            let exact = convolve_exponential_exact(beta, freq, t);
            let abs_error = (numeric - exact).norm();
            println!("beta = {beta}, freq = {freq}, t = {t}");
            println!("numeric   = {} {:+}i", numeric.re, numeric.im);
            println!("exact     = {} {:+}i", exact.re, exact.im);
            println!("abs_error = {abs_error:e}");
            println!("rel_error = {:e}", abs_error / exact.norm());
            Ok(ExitCode::SUCCESS)
        }
        Command::Scalar {
            alpha,
            freq,
            candidate_freq,
            contrast,
            rate,
            t_max,
            t_step,
        } => {
            let alpha = FractionalOrder::new(alpha)?;
            if contrast {
                let grid = time_grid(t_step, t_max)?;
                let samples = caputo_compare(alpha, rate, &grid)?;
                println!("t,modulus_weyl,modulus_caputo");
                for s in &samples {
                    println!("{},{},{}", s.t, s.modulus_weyl, s.modulus_caputo);
                }
            } else {
                let problem = ScalarProblem::new(alpha, freq)?;
                let candidate = ExponentialSignal::new(
                    Complex64::new(1.0, 0.0),
                    candidate_freq.unwrap_or(freq),
                )?;
                let residual =
                    scalar_weak_residual(&problem, &candidate, &QuadratureSpec::default())?;
                println!(
                    "alpha = {}, freq = {freq}, candidate_freq = {}",
                    alpha.value(),
                    candidate.frequency
                );
                println!("weak_residual = {residual:e}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Propagate {
            alpha,
            n,
            length,
            potential,
            init,
            times,
            out,
        } => {
            let alpha = FractionalOrder::new(alpha)?;
            let grid = GridSpec::new(n, length)?;
            let op = match &potential {
                Some(path) => {
                    let v = load_potential(path, n)?;
                    SpectralOperator::schrodinger(grid, &v)?
                }
                None => SpectralOperator::free_laplacian(grid),
            };
            let v0 = parse_init(grid, &init)?;
            let times = parse_times(&times)?;
            let base_norm = v0.norm();

            match out {
                None => {
                    let stdout = std::io::stdout();
                    let mut w = stdout.lock();
                    for &t in &times {
                        let v = op.propagate(alpha, t, &v0)?;
                        writeln!(
                            w,
                            "# t = {t} norm_drift = {:e}",
                            (v.norm() - base_norm).abs()
                        )?;
                        write_snapshot(&mut w, &v)?;
                    }
                }
                Some(dir) => {
                    fs::create_dir_all(&dir)?;
                    let mut norms = String::from("t,norm,drift\n");
                    for (i, &t) in times.iter().enumerate() {
                        let v = op.propagate(alpha, t, &v0)?;
                        let path = dir.join(format!("snapshot_{i:03}.csv"));
                        write_snapshot(fs::File::create(&path)?, &v)?;
                        let norm = v.norm();
                        norms.push_str(&format!("{t},{norm},{:e}\n", (norm - base_norm).abs()));
                    }
                    fs::write(dir.join("norms.csv"), norms)?;
                    println!("wrote {} snapshots to {}", times.len(), dir.display());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            alpha,
            n,
            seed,
            suite,
            out,
        } => {
            let cfg = SuiteConfig {
                alpha: FractionalOrder::new(alpha)?,
                n,
                seed,
                quad: QuadratureSpec::default(),
                sections: SuiteSection::parse_list(&suite)?,
            };
            let reports = run_suite(&cfg)?;
            let json = reports_to_json(&reports);
            match out {
                None => print!("{json}"),
                Some(path) => {
                    write_report(&path, &json)?;
                    for r in &reports {
                        println!(
                            "{}: {} (residual {:.3e}, tolerance {:.3e})",
                            r.name,
                            if r.passed { "PASS" } else { "FAIL" },
                            r.residual,
                            r.tolerance
                        );
                    }
                    println!(
                        "passed {}/{}; report written to {}",
                        reports.iter().filter(|r| r.passed).count(),
                        reports.len(),
                        path.display()
                    );
                }
            }
            if reports.iter().all(|r| r.passed) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn write_report(path: &Path, json: &str) -> Result<()> {
    fs::write(path, json)?;
    Ok(())
}

fn parse_times(s: &str) -> Result<Vec<f64>> {
    let times: Vec<f64> = s
        .split(',')
        .map(|p| {
            let p = p.trim();
            p.parse::<f64>()
                .map_err(|_| Error::Parse(format!("invalid time {p:?}")))
        })
        .collect::<Result<_>>()?;
    if times.is_empty() {
        return Err(Error::Parse("no snapshot times given".into()));
    }
    if let Some(bad) = times.iter().find(|t| !t.is_finite()) {
        return Err(Error::Parse(format!("snapshot times must be finite, got {bad}")));
    }
    Ok(times)
}

fn time_grid(step: f64, max: f64) -> Result<Vec<f64>> {
    if !(step.is_finite() && step > 0.0 && max.is_finite() && max >= step) {
        return Err(Error::Parse(format!(
            "need 0 < t-step <= t-max, got step {step}, max {max}"
        )));
    }
    let count = (max / step).round() as usize;
    Ok((1..=count).map(|k| k as f64 * step).collect())
}

fn parse_init(grid: GridSpec, spec: &str) -> Result<WaveFunction> {
    if let Some(rest) = spec.strip_prefix("mode:") {
        let m: i64 = rest
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid mode index {rest:?}")))?;
        WaveFunction::plane_wave(grid, m)
    } else if let Some(rest) = spec.strip_prefix("gaussian:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::Parse(format!(
                "gaussian init needs `gaussian:<center>,<width>`, got {spec:?}"
            )));
        }
        let center: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid gaussian center {:?}", parts[0])))?;
        let width: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid gaussian width {:?}", parts[1])))?;
        WaveFunction::gaussian(grid, center, width)
    } else {
        Err(Error::Parse(format!(
            "unknown init {spec:?} (expected `mode:<m>` or `gaussian:<center>,<width>`)"
        )))
    }
}
