//! Command-line front end: figure-data generation, invariance audits,
//! measurement simulation and the encoding comparison.
//!
//! All data goes to `--out` (or stdout); diagnostics go to stderr.
//! Exit codes: 0 success, 1 a requested check failed, 2 invalid
//! configuration. `BELLWAVE_THREADS` caps the worker pool; identical
//! inputs produce byte-identical outputs at any thread count.

use bellwave_cli::config;

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;

use bellwave::bell::{fixed_point_curves, Correlation, Family, FixedPointCurves};
use bellwave::kinematics::LorentzTransform;
use bellwave::tol;
use bellwave::wavepacket::{
    build_packet_tagged, distinguishability_report, draw_shots, measure_packet, packet_from_json,
    packet_to_json, transform_packet, transform_packet_verified, Envelope, MeasurementRecord,
    PacketParams,
};

#[derive(Parser)]
#[command(
    name = "bellwave",
    version,
    about = "Bell-encoded photonic wave packets under Lorentz transformations"
)]
struct Cli {
    /// JSON file with per-command defaults; flags take precedence.
    #[arg(long, global = true)]
    config: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Zero-level curves of the phase-matching residual plus the four
    /// analytic fixed points.
    FixedPoints(FixedPointsArgs),
    /// Amplitude/phase invariance audit over random transformations.
    Invariance(InvarianceArgs),
    /// Exact and sampled measurement statistics of one packet.
    Measure(MeasureArgs),
    /// Channel comparison of the Bell encoding vs the single-mode
    /// baseline.
    Compare(CompareArgs),
}

#[derive(Args)]
struct FixedPointsArgs {
    /// Solution family: phi or psi.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    theta1: Option<f64>,
    #[arg(long)]
    phi1: Option<f64>,
    /// Comma-separated rotation angles about y.
    #[arg(long, value_delimiter = ',')]
    varpi_list: Option<Vec<f64>>,
    /// Cells per axis of the marching-squares lattice.
    #[arg(long)]
    grid: Option<usize>,
    /// Output file for the curve polylines (stdout when omitted).
    #[arg(long)]
    out: Option<String>,
    /// Output file for the fixed points (csv only; defaults to
    /// `<out>.points.csv`, or stdout after the curves).
    #[arg(long)]
    points_out: Option<String>,
    /// csv (default) or json.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args, Clone)]
struct PacketArgs {
    /// gaussian-cone, uniform-cap or ring.
    #[arg(long)]
    envelope: Option<String>,
    #[arg(long)]
    theta0: Option<f64>,
    /// Width of the gaussian cone.
    #[arg(long)]
    env_width: Option<f64>,
    /// Cap opening for uniform-cap.
    #[arg(long)]
    theta_max: Option<f64>,
    #[arg(long)]
    n_samples: Option<usize>,
    /// Half-width of the polar exclusion band around pi/2.
    #[arg(long)]
    band: Option<f64>,
}

#[derive(Args)]
struct InvarianceArgs {
    /// Seed for the quadrature and the random transformations.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n_lambdas: Option<usize>,
    /// Rapidities are drawn uniformly from [-eta_max, eta_max].
    #[arg(long)]
    eta_max: Option<f64>,
    /// phi-a (default) or none; none demonstrates the dephasing of
    /// uncorrelated pairs.
    #[arg(long)]
    correlation: Option<String>,
    #[command(flatten)]
    packet: PacketArgs,
    #[arg(long)]
    out: Option<String>,
    /// json only.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct MeasureArgs {
    #[arg(long)]
    alpha_re: Option<f64>,
    #[arg(long)]
    alpha_im: Option<f64>,
    #[arg(long)]
    beta_re: Option<f64>,
    #[arg(long)]
    beta_im: Option<f64>,
    /// Normal-form transformation rz(lam)·ry(varpi)·bz(eta).
    #[arg(long)]
    lam: Option<f64>,
    #[arg(long)]
    varpi: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    /// Number of simulated single shots (0: exact statistics only).
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    packet: PacketArgs,
    /// Load the packet from a JSON file instead of building it.
    #[arg(long)]
    packet_in: Option<String>,
    /// Write the (untransformed) packet to a JSON file.
    #[arg(long)]
    packet_out: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// json only.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    seed: Option<u64>,
    /// Rotation angles about y; 0 stands for the identity channel.
    #[arg(long, value_delimiter = ',')]
    varpi_list: Option<Vec<f64>>,
    #[command(flatten)]
    packet: PacketArgs,
    #[arg(long)]
    out: Option<String>,
    /// csv (default) or json.
    #[arg(long)]
    format: Option<String>,
}

/// Invalid configuration (exit 2) vs failed checks (exit 1).
enum CliError {
    Config(String),
    ChecksFailed,
}

impl From<bellwave::Error> for CliError {
    fn from(e: bellwave::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

fn main() -> ExitCode {
    if let Err(msg) = init_thread_pool() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let cli = Cli::parse();
    let file_config = match cli.config.as_deref().map(config::load).transpose() {
        Ok(c) => c.unwrap_or_default(),
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::FixedPoints(args) => cmd_fixed_points(args, file_config.fixed_points),
        Command::Invariance(args) => cmd_invariance(args, file_config.invariance),
        Command::Measure(args) => cmd_measure(args, file_config.measure),
        Command::Compare(args) => cmd_compare(args, file_config.compare),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::ChecksFailed) => ExitCode::from(1),
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn init_thread_pool() -> Result<(), String> {
    let Ok(value) = std::env::var("BELLWAVE_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .map_err(|_| format!("BELLWAVE_THREADS must be a positive integer, got {value:?}"))?;
    if threads == 0 {
        return Err("BELLWAVE_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn pick<T>(flag: Option<T>, cfg: Option<T>) -> Option<T> {
    flag.or(cfg)
}

fn require<T>(value: Option<T>, name: &str) -> Result<T, CliError> {
    value.ok_or_else(|| bad(format!("missing required parameter --{name}")))
}

fn finite(value: f64, name: &str) -> Result<f64, CliError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad(format!("--{name} must be finite")))
    }
}

/// Full double precision: 17 significant digits, '.' decimal point.
fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_output(path: Option<&str>, content: &str) -> Result<(), CliError> {
    match path {
        Some(path) => {
            std::fs::write(path, content).map_err(|e| bad(format!("cannot write {path}: {e}")))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn resolve_envelope(args: &PacketArgs, cfg: &config::PacketCfg) -> Result<Envelope, CliError> {
    let scheme =
        pick(args.envelope.clone(), cfg.envelope.clone()).unwrap_or_else(|| "gaussian-cone".into());
    let theta0 = finite(pick(args.theta0, cfg.theta0).unwrap_or(0.3), "theta0")?;
    let width = finite(
        pick(args.env_width, cfg.env_width).unwrap_or(0.05),
        "env-width",
    )?;
    let theta_max = finite(
        pick(args.theta_max, cfg.theta_max).unwrap_or(0.4),
        "theta-max",
    )?;
    match scheme.as_str() {
        "gaussian-cone" => Ok(Envelope::GaussianCone { theta0, width }),
        "uniform-cap" => Ok(Envelope::UniformCap { theta_max }),
        "ring" => Ok(Envelope::Ring { theta0 }),
        other => Err(bad(format!("unknown envelope scheme {other:?}"))),
    }
}

fn resolve_packet(
    args: &PacketArgs,
    cfg: &config::PacketCfg,
) -> Result<(Envelope, usize, f64), CliError> {
    let envelope = resolve_envelope(args, cfg)?;
    let n_samples = pick(args.n_samples, cfg.n_samples).unwrap_or(256);
    if n_samples == 0 {
        return Err(bad("--n-samples must be at least 1"));
    }
    let band = finite(
        pick(args.band, cfg.band).unwrap_or(tol::EQUATOR_BAND),
        "band",
    )?;
    if band < 0.0 {
        return Err(bad("--band must be nonnegative"));
    }
    Ok((envelope, n_samples, band))
}

#[derive(Serialize, Clone)]
struct PacketEcho {
    envelope: Envelope,
    n_samples: usize,
    band_half_width: f64,
    seed: u64,
}

// ---------------------------------------------------------------- fixed-points

fn cmd_fixed_points(args: FixedPointsArgs, cfg: config::FixedPointsCfg) -> Result<(), CliError> {
    let family = match require(pick(args.family, cfg.family), "family")?.as_str() {
        "phi" => Family::Phi,
        "psi" => Family::Psi,
        other => return Err(bad(format!("--family must be phi or psi, got {other:?}"))),
    };
    let theta1 = finite(require(pick(args.theta1, cfg.theta1), "theta1")?, "theta1")?;
    let phi1 = finite(require(pick(args.phi1, cfg.phi1), "phi1")?, "phi1")?;
    let varpi_list = require(pick(args.varpi_list, cfg.varpi_list), "varpi-list")?;
    if varpi_list.is_empty() {
        return Err(bad("--varpi-list must name at least one angle"));
    }
    let grid = pick(args.grid, cfg.grid).unwrap_or(128);
    let format = pick(args.format, cfg.format).unwrap_or_else(|| "csv".into());
    let out = pick(args.out, cfg.out);
    let points_out = pick(args.points_out, cfg.points_out);

    let result = fixed_point_curves(&varpi_list, theta1, phi1, family, grid)?;

    match format.as_str() {
        "csv" => {
            let (curves_csv, points_csv) = render_curves_csv(&result);
            let derived_points = out.as_ref().map(|p| format!("{p}.points.csv"));
            match (&out, points_out.or(derived_points)) {
                (Some(_), Some(points_path)) => {
                    write_output(out.as_deref(), &curves_csv)?;
                    write_output(Some(&points_path), &points_csv)
                }
                _ => write_output(None, &format!("{curves_csv}\n{points_csv}")),
            }
        }
        "json" => {
            if points_out.is_some() {
                return Err(bad("--points-out applies to csv output only"));
            }
            write_output(out.as_deref(), &render_curves_json(&result)?)
        }
        other => Err(bad(format!("--format must be csv or json, got {other:?}"))),
    }
}

fn render_curves_csv(result: &FixedPointCurves) -> (String, String) {
    let mut curves = String::from("varpi,curve_id,x,y\n");
    let mut curve_id = 0usize;
    for set in &result.curves {
        for line in &set.polylines {
            for v in line {
                let _ = writeln!(
                    curves,
                    "{},{curve_id},{},{}",
                    fmt_f(set.varpi),
                    fmt_f(v[0]),
                    fmt_f(v[1])
                );
            }
            curve_id += 1;
        }
    }
    let mut points = String::from("label,x,y\n");
    for fp in &result.fixed_points {
        let _ = writeln!(points, "{},{},{}", fp.label, fmt_f(fp.x), fmt_f(fp.y));
    }
    (curves, points)
}

fn render_curves_json(result: &FixedPointCurves) -> Result<String, CliError> {
    #[derive(Serialize)]
    struct PointOut {
        label: String,
        x: f64,
        y: f64,
    }
    #[derive(Serialize)]
    struct CurveOut {
        varpi: f64,
        polylines: Vec<Vec<[f64; 2]>>,
    }
    #[derive(Serialize)]
    struct Doc {
        family: String,
        theta1: f64,
        phi1: f64,
        fixed_points: Vec<PointOut>,
        curves: Vec<CurveOut>,
    }
    let doc = Doc {
        family: result.family.name().into(),
        theta1: result.theta1,
        phi1: result.phi1,
        fixed_points: result
            .fixed_points
            .iter()
            .map(|fp| PointOut {
                label: fp.label.into(),
                x: fp.x,
                y: fp.y,
            })
            .collect(),
        curves: result
            .curves
            .iter()
            .map(|c| CurveOut {
                varpi: c.varpi,
                polylines: c.polylines.clone(),
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&doc).map_err(|e| bad(e.to_string()))? + "\n")
}

// ---------------------------------------------------------------- invariance

#[derive(Serialize)]
struct LambdaDesc {
    lam: f64,
    varpi: f64,
    eta: f64,
    desc: String,
}

#[derive(Serialize)]
struct LambdaResult {
    lambda: LambdaDesc,
    max_amplitude_deviation: f64,
    max_phase_deviation: f64,
    pass: bool,
}

#[derive(Serialize)]
struct InvarianceReport {
    seed: u64,
    n_lambdas: usize,
    threshold: f64,
    correlation: String,
    packet: PacketEcho,
    results: Vec<LambdaResult>,
    all_pass: bool,
}

fn cmd_invariance(args: InvarianceArgs, cfg: config::InvarianceCfg) -> Result<(), CliError> {
    let seed = require(pick(args.seed, cfg.seed), "seed")?;
    let n_lambdas = pick(args.n_lambdas, cfg.n_lambdas).unwrap_or(100);
    let eta_max = finite(pick(args.eta_max, cfg.eta_max).unwrap_or(2.0), "eta-max")?;
    if eta_max < 0.0 {
        return Err(bad("--eta-max must be nonnegative"));
    }
    let correlation = match pick(args.correlation, cfg.correlation)
        .unwrap_or_else(|| "phi-a".into())
        .as_str()
    {
        "phi-a" => Correlation::PhiA,
        "none" => Correlation::Uncorrelated,
        other => {
            return Err(bad(format!(
                "--correlation must be phi-a or none, got {other:?}"
            )))
        }
    };
    let (envelope, n_samples, band) = resolve_packet(&args.packet, &cfg.packet)?;
    let format = pick(args.format, cfg.format).unwrap_or_else(|| "json".into());
    if format != "json" {
        return Err(bad("invariance reports are json only"));
    }

    let alpha = Complex64::new(1.0, 0.0);
    let beta = Complex64::new(0.0, 0.0);
    let packet = build_packet_tagged(alpha, beta, &envelope, n_samples, seed, band, correlation)?;

    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x9E37_79B9_7F4A_7C15);
    let params: Vec<(f64, f64, f64)> = (0..n_lambdas)
        .map(|_| {
            let lam = rng.random_range(-PI..PI);
            let varpi = rng.random_range(-PI..PI);
            let eta = if eta_max > 0.0 {
                rng.random_range(-eta_max..eta_max)
            } else {
                0.0
            };
            (lam, varpi, eta)
        })
        .collect();

    let results: Vec<LambdaResult> = params
        .par_iter()
        .map(
            |&(lam, varpi, eta)| -> Result<LambdaResult, bellwave::Error> {
                let transform = LorentzTransform::normal_form(lam, varpi, eta)?;
                let (_, check) = transform_packet_verified(&packet, &transform)?;
                let pass = check.max_amplitude_deviation < tol::PHASE
                    && check.max_phase_deviation < tol::PHASE;
                Ok(LambdaResult {
                    lambda: LambdaDesc {
                        lam,
                        varpi,
                        eta,
                        desc: transform.to_string(),
                    },
                    max_amplitude_deviation: check.max_amplitude_deviation,
                    max_phase_deviation: check.max_phase_deviation,
                    pass,
                })
            },
        )
        .collect::<Result<_, _>>()?;

    let all_pass = results.iter().all(|r| r.pass);
    let report = InvarianceReport {
        seed,
        n_lambdas,
        threshold: tol::PHASE,
        correlation: correlation.name().into(),
        packet: PacketEcho {
            envelope,
            n_samples,
            band_half_width: band,
            seed,
        },
        results,
        all_pass,
    };
    let text = serde_json::to_string_pretty(&report).map_err(|e| bad(e.to_string()))? + "\n";
    write_output(pick(args.out, cfg.out).as_deref(), &text)?;
    if all_pass {
        Ok(())
    } else {
        eprintln!("invariance checks failed");
        Err(CliError::ChecksFailed)
    }
}

// ---------------------------------------------------------------- measure

#[derive(Serialize)]
struct ShotsReport {
    count: u64,
    seed: u64,
    gamma1: u64,
    gamma2: u64,
    null: u64,
    empirical_gamma1_given_detect: f64,
    empirical_detect: f64,
}

#[derive(Serialize)]
struct MeasureReport {
    alpha: [f64; 2],
    beta: [f64; 2],
    lambda: LambdaDesc,
    packet: PacketEcho,
    exact: MeasurementRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    shots: Option<ShotsReport>,
}

fn cmd_measure(args: MeasureArgs, cfg: config::MeasureCfg) -> Result<(), CliError> {
    let alpha = Complex64::new(
        finite(
            require(pick(args.alpha_re, cfg.alpha_re), "alpha-re")?,
            "alpha-re",
        )?,
        finite(pick(args.alpha_im, cfg.alpha_im).unwrap_or(0.0), "alpha-im")?,
    );
    let beta = Complex64::new(
        finite(
            require(pick(args.beta_re, cfg.beta_re), "beta-re")?,
            "beta-re",
        )?,
        finite(pick(args.beta_im, cfg.beta_im).unwrap_or(0.0), "beta-im")?,
    );
    let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-6 {
        return Err(bad(format!(
            "(alpha, beta) must be normalized, |.| = {norm}"
        )));
    }
    let (alpha, beta) = (alpha / norm, beta / norm);

    let lam = finite(pick(args.lam, cfg.lam).unwrap_or(0.0), "lam")?;
    let varpi = finite(pick(args.varpi, cfg.varpi).unwrap_or(0.0), "varpi")?;
    let eta = finite(pick(args.eta, cfg.eta).unwrap_or(0.0), "eta")?;
    let shots = pick(args.shots, cfg.shots).unwrap_or(0);
    let seed = pick(args.seed, cfg.seed);
    let format = pick(args.format, cfg.format).unwrap_or_else(|| "json".into());
    if format != "json" {
        return Err(bad("measurement reports are json only"));
    }

    let packet_in = pick(args.packet_in, cfg.packet_in);
    let (packet, echo) = match packet_in {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| bad(format!("cannot read {path}: {e}")))?;
            let loaded = packet_from_json(&text)?;
            let mut loaded = loaded;
            loaded.alpha = alpha;
            loaded.beta = beta;
            let echo = PacketEcho {
                envelope: loaded.quadrature.envelope,
                n_samples: loaded.samples.len(),
                band_half_width: loaded.quadrature.band_half_width,
                seed: loaded.quadrature.seed,
            };
            (loaded, echo)
        }
        None => {
            let seed = require(seed, "seed")?;
            let (envelope, n_samples, band) = resolve_packet(&args.packet, &cfg.packet)?;
            let packet = build_packet_tagged(
                alpha,
                beta,
                &envelope,
                n_samples,
                seed,
                band,
                Correlation::PhiA,
            )?;
            let echo = PacketEcho {
                envelope,
                n_samples,
                band_half_width: band,
                seed,
            };
            (packet, echo)
        }
    };

    if let Some(path) = pick(args.packet_out, cfg.packet_out) {
        write_output(Some(&path), &(packet_to_json(&packet)? + "\n"))?;
    }

    let transform = LorentzTransform::normal_form(lam, varpi, eta)?;
    let moved = transform_packet(&packet, &transform);
    let exact = measure_packet(&moved)?;

    let shots_report = if shots > 0 {
        let seed = require(seed, "seed")?;
        let tallies = draw_shots(&moved, shots, seed)?;
        let detected = tallies.gamma1 + tallies.gamma2;
        Some(ShotsReport {
            count: shots,
            seed,
            gamma1: tallies.gamma1,
            gamma2: tallies.gamma2,
            null: tallies.null,
            empirical_gamma1_given_detect: if detected > 0 {
                tallies.gamma1 as f64 / detected as f64
            } else {
                f64::NAN
            },
            empirical_detect: detected as f64 / shots as f64,
        })
    } else {
        None
    };

    let report = MeasureReport {
        alpha: [alpha.re, alpha.im],
        beta: [beta.re, beta.im],
        lambda: LambdaDesc {
            lam,
            varpi,
            eta,
            desc: transform.to_string(),
        },
        packet: echo,
        exact,
        shots: shots_report,
    };
    let text = serde_json::to_string_pretty(&report).map_err(|e| bad(e.to_string()))? + "\n";
    write_output(pick(args.out, cfg.out).as_deref(), &text)
}

// ---------------------------------------------------------------- compare

fn cmd_compare(args: CompareArgs, cfg: config::CompareCfg) -> Result<(), CliError> {
    let seed = require(pick(args.seed, cfg.seed), "seed")?;
    let varpi_list = pick(args.varpi_list, cfg.varpi_list).unwrap_or_else(|| vec![0.0, 0.9]);
    if varpi_list.is_empty() {
        return Err(bad("--varpi-list must name at least one angle"));
    }
    let (envelope, n_samples, _band) = resolve_packet(&args.packet, &cfg.packet)?;
    let format = pick(args.format, cfg.format).unwrap_or_else(|| "csv".into());

    let transforms = varpi_list
        .iter()
        .map(|&v| {
            finite(v, "varpi-list")?;
            Ok(if v == 0.0 {
                LorentzTransform::identity()
            } else {
                LorentzTransform::ry(v)?
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    // The logical basis pair. Superpositions are not a fair baseline
    // row: the momentum-adapted helicity phases scramble their
    // single-mode density matrix even without a transformation.
    let preparations = [
        (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
        (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
    ];
    let params = PacketParams {
        envelope,
        n_samples,
        seed,
    };
    let rows = distinguishability_report(&preparations, &transforms, &params)?;

    let text = match format.as_str() {
        "csv" => {
            let mut out = String::from("lambda_desc,encoding,error_prob,detect_prob\n");
            for row in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    row.lambda_desc,
                    row.encoding,
                    fmt_f(row.error_prob),
                    fmt_f(row.detect_prob)
                );
            }
            out
        }
        "json" => serde_json::to_string_pretty(&rows).map_err(|e| bad(e.to_string()))? + "\n",
        other => return Err(bad(format!("--format must be csv or json, got {other:?}"))),
    };
    write_output(pick(args.out, cfg.out).as_deref(), &text)
}
