//! Command-line front end: one subcommand per certificate or reproduction.
//!
//! Exit codes: 0 = check passed / extreme / found; 1 = check failed / not
//! extreme / not found; 2 = input or usage error.

mod config;
mod input;
mod reports;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use extremap_core::ballmaps::{
    ball_extremality_report, contact_points, max_norm_on_sphere, planar_example_check, planar_f,
    planar_g, BallMapJson, PLANAR_ENDPOINT_MARGIN,
};
use extremap_core::channels::{kraus_from_choi, ChannelJson, ChoiJson};
use extremap_core::error::CoreError;
use extremap_core::examples_catalog::{qubit_family, to_bloch_affine, to_channel};
use extremap_core::extremality::{
    choi_extremality, find_pure_images, fix_extreme_certificate, invertible_extreme_report,
    ExtremalityMode,
};
use extremap_core::operators::psd_report;
use extremap_core::sampling;
use extremap_core::states::pure_from_vector;
use extremap_core::wigner::{classify_wigner, WignerClass};

use config::{resolve, ConfigFlags, RunConfig};
use input::load_map_file;
use reports::{emit, emit_csv, InvertibleExtremeDto, WignerDto, WitnessDto};

#[derive(Parser)]
#[command(
    name = "extremap",
    version,
    about = "Certificates and reproductions for extreme positive and completely positive maps"
)]
struct Cli {
    #[command(flatten)]
    globals: GlobalFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalFlags {
    /// Numerical tolerance (default 1e-9)
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Multistart restarts for search-based certificates (default 64)
    #[arg(long, global = true)]
    restarts: Option<usize>,
    /// Sample count for sampled checks (default 200)
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Seed for every random draw (default 0)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the Choi matrix of a channel or superoperator file
    Choi { input: PathBuf },
    /// Spectral Kraus decomposition of a Choi (or channel) file
    Kraus { input: PathBuf },
    /// Predicate checks: complete positivity, trace preservation,
    /// unitality, sampled positivity
    Check {
        input: PathBuf,
        #[arg(long)]
        cp: bool,
        #[arg(long)]
        tp: bool,
        #[arg(long)]
        unital: bool,
        /// Sampled necessary positivity check (not a proof for n >= 3)
        #[arg(long)]
        positive_sample: bool,
    },
    /// Choi-criterion extremality in a chosen mode
    Extremal {
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
    /// The equivalent invertible-extreme conditions (inverse CP, single
    /// invertible Kraus, pure images in general position)
    Theorem5 { input: PathBuf },
    /// Classify a trace-preserving map as unitary / antiunitary / neither
    Wigner { input: PathBuf },
    /// Multistart search for pure states with pure images
    PureImage { input: PathBuf },
    /// Certify extremality from affinely independent pure images
    FixExtreme { input: PathBuf },
    /// Analyze one of the three qubit families
    Qubit {
        #[arg(long)]
        case: u8,
        #[arg(long, default_value_t = 0.0)]
        u: f64,
        #[arg(long, default_value_t = 0.0)]
        v: f64,
    },
    /// Contact analysis of an affine map against the unit ball
    Ball {
        #[arg(long)]
        map: PathBuf,
    },
    /// The planar two-extreme-point example on a grid
    Plane {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
    },
    /// Exploratory experiment: sample trace-preserving channels, certify
    /// fix-extremality from pure images, and classify each certified map;
    /// reports any certified map that fails the Wigner classification.
    /// Nothing is asserted about the outcome.
    ProbeConjecture {
        /// Channels to sample
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Hilbert-space dimension
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Emit CSV data for the figures
    Reproduce {
        #[command(subcommand)]
        what: ReproduceWhat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Unital,
    Tp,
    Bistochastic,
    Cone,
}

impl From<ModeArg> for ExtremalityMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Unital => ExtremalityMode::Unital,
            ModeArg::Tp => ExtremalityMode::TracePreserving,
            ModeArg::Bistochastic => ExtremalityMode::Bistochastic,
            ModeArg::Cone => ExtremalityMode::Cone,
        }
    }
}

#[derive(Subcommand)]
enum ReproduceWhat {
    /// x, f(x), g(x), f(x) - 1.01 g(x)
    Fg {
        #[arg(long, default_value_t = 2001)]
        grid: usize,
    },
    /// x, second difference of f over h^2 (excluding the endpoint margin)
    Fpp {
        #[arg(long, default_value_t = 2001)]
        grid: usize,
    },
    /// x, f(x) - g(x), f(x) - 1.01 g(x)
    Fmg {
        #[arg(long, default_value_t = 2001)]
        grid: usize,
    },
    /// Sphere samples and their images under a qubit family map:
    /// x, y, z, x', y', z'
    Ellipsoid {
        #[arg(long)]
        case: u8,
        #[arg(long, default_value_t = 0.0)]
        u: f64,
        #[arg(long, default_value_t = 0.0)]
        v: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let flags = ConfigFlags {
        tol: cli.globals.tol,
        restarts: cli.globals.restarts,
        samples: cli.globals.samples,
        seed: cli.globals.seed,
        output: cli.globals.output.clone(),
    };
    let cfg = match resolve(&flags) {
        Ok(cfg) => cfg,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::from(2);
        }
    };
    match run(&cli.command, &cfg) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

#[derive(Serialize)]
struct CheckResult {
    input_kind: &'static str,
    dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    cp: Option<CpCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace_preserving: Option<ResidualCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unital: Option<ResidualCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    positive_sample: Option<PositiveSampleCheck>,
    passed: bool,
}

#[derive(Serialize)]
struct CpCheck {
    passed: bool,
    min_choi_eigenvalue: f64,
}

#[derive(Serialize)]
struct ResidualCheck {
    passed: bool,
    residual: f64,
}

#[derive(Serialize)]
struct PositiveSampleCheck {
    passed: bool,
    samples: usize,
    worst_min_eigenvalue: f64,
    note: &'static str,
}

fn run(command: &Command, cfg: &RunConfig) -> anyhow::Result<u8> {
    match command {
        Command::Choi { input } => {
            let map = load_map_file(input)?;
            let choi = map.to_choi();
            emit(cfg, "choi", ChoiJson::from_choi(&choi))?;
            Ok(0)
        }
        Command::Kraus { input } => {
            let map = load_map_file(input)?;
            match kraus_from_choi(&map.to_choi(), cfg.tol) {
                Ok(ch) => {
                    emit(cfg, "kraus", ChannelJson::from_channel(&ch))?;
                    Ok(0)
                }
                Err(CoreError::NotCompletelyPositive { min_eigenvalue }) => {
                    #[derive(Serialize)]
                    struct NotCp {
                        error: &'static str,
                        min_eigenvalue: f64,
                    }
                    emit(
                        cfg,
                        "kraus",
                        NotCp {
                            error: "not completely positive",
                            min_eigenvalue,
                        },
                    )?;
                    Ok(1)
                }
                Err(other) => Err(other.into()),
            }
        }
        Command::Check {
            input,
            cp,
            tp,
            unital,
            positive_sample,
        } => {
            if !(*cp || *tp || *unital || *positive_sample) {
                anyhow::bail!(
                    "choose at least one of --cp, --tp, --unital, --positive-sample"
                );
            }
            let map = load_map_file(input)?;
            let superop = map.to_superop();
            let n = map.dim();
            let mut passed = true;

            let cp_result = if *cp {
                let report = psd_report(map.to_choi().matrix(), cfg.tol)?;
                passed &= report.is_psd;
                Some(CpCheck {
                    passed: report.is_psd,
                    min_choi_eigenvalue: report.min_eigenvalue,
                })
            } else {
                None
            };
            let tp_result = if *tp {
                let residual = superop.trace_preserving_residual();
                let ok = residual <= cfg.tol;
                passed &= ok;
                Some(ResidualCheck { passed: ok, residual })
            } else {
                None
            };
            let unital_result = if *unital {
                let image = superop.apply(&extremap_core::HermitianOp::identity(n))?;
                let residual = image
                    .sub(&extremap_core::HermitianOp::identity(n))
                    .frobenius_norm();
                let ok = residual <= cfg.tol;
                passed &= ok;
                Some(ResidualCheck { passed: ok, residual })
            } else {
                None
            };
            let sample_result = if *positive_sample {
                let mut rng = sampling::seeded_rng(cfg.seed);
                let mut worst = f64::INFINITY;
                for _ in 0..cfg.samples {
                    let x = sampling::random_unit_vector(&mut rng, n);
                    let state = pure_from_vector(&x)?;
                    let image = superop.apply(state.op())?;
                    let r = psd_report(&image, cfg.tol)?;
                    worst = worst.min(r.min_eigenvalue);
                }
                let scale = 1.0f64.max(superop.matrix().frobenius_norm());
                let ok = worst >= -cfg.tol * scale;
                passed &= ok;
                Some(PositiveSampleCheck {
                    passed: ok,
                    samples: cfg.samples,
                    worst_min_eigenvalue: worst,
                    note: "sampled necessary check; not a positivity proof for n >= 3",
                })
            } else {
                None
            };

            emit(
                cfg,
                "check",
                CheckResult {
                    input_kind: map.describe(),
                    dim: n,
                    cp: cp_result,
                    trace_preserving: tp_result,
                    unital: unital_result,
                    positive_sample: sample_result,
                    passed,
                },
            )?;
            Ok(if passed { 0 } else { 1 })
        }
        Command::Extremal { input, mode } => {
            let map = load_map_file(input)?;
            let ch = map.to_channel(cfg.tol)?;
            let report = choi_extremality(&ch, (*mode).into(), cfg.tol)?;
            let extreme = report.extreme;
            emit(cfg, "extremal", report)?;
            Ok(if extreme { 0 } else { 1 })
        }
        Command::Theorem5 { input } => {
            let map = load_map_file(input)?;
            let ch = map.to_channel(cfg.tol)?;
            let report = invertible_extreme_report(&ch, cfg.restarts, cfg.seed, cfg.tol)?;
            let all = report.cond_a_inverse_cp
                && report.cond_b_single_invertible_kraus
                && report.cond_de_rank_one_images;
            emit(cfg, "theorem5", InvertibleExtremeDto::from_report(&report))?;
            Ok(if all { 0 } else { 1 })
        }
        Command::Wigner { input } => {
            let map = load_map_file(input)?;
            let superop = map.to_superop();
            let classification = classify_wigner(&superop, cfg.tol)?;
            let wigner = classification.branch != WignerClass::NotWigner;
            emit(
                cfg,
                "wigner",
                WignerDto::from_classification(&classification, &superop, cfg.samples, cfg.seed)?,
            )?;
            Ok(if wigner { 0 } else { 1 })
        }
        Command::PureImage { input } => {
            let map = load_map_file(input)?;
            let ch = map.to_channel(cfg.tol)?;
            let search = find_pure_images(&ch, cfg.restarts, cfg.seed)?;
            #[derive(Serialize)]
            struct PureImageResult {
                witness_count: usize,
                best_residual: f64,
                excluded_points: usize,
                witnesses: Vec<WitnessDto>,
            }
            let found = !search.witnesses.is_empty();
            emit(
                cfg,
                "pure-image",
                PureImageResult {
                    witness_count: search.witnesses.len(),
                    best_residual: search.best_residual,
                    excluded_points: search.excluded_points,
                    witnesses: search
                        .witnesses
                        .iter()
                        .map(WitnessDto::from_witness)
                        .collect(),
                },
            )?;
            Ok(if found { 0 } else { 1 })
        }
        Command::FixExtreme { input } => {
            let map = load_map_file(input)?;
            let ch = map.to_channel(cfg.tol)?;
            let report = fix_extreme_certificate(&ch, cfg.restarts, cfg.seed)?;
            let certified = report.certified;
            emit(cfg, "fix-extreme", report)?;
            Ok(if certified { 0 } else { 1 })
        }
        Command::Qubit { case, u, v } => run_qubit(cfg, *case, *u, *v),
        Command::Ball { map } => {
            let text = std::fs::read_to_string(map)
                .map_err(|e| anyhow::anyhow!("cannot read '{}': {e}", map.display()))?;
            let json: BallMapJson = serde_json::from_str(&text)
                .map_err(|e| anyhow::anyhow!("ball map file field error: {e}"))?;
            let ball = json.to_map()?;
            let (max_norm, argmax) = max_norm_on_sphere(&ball, cfg.tol);
            match contact_points(&ball, cfg.tol, cfg.samples, cfg.seed) {
                Ok(contacts) => {
                    let extremality = ball_extremality_report(&ball, cfg.tol)?;
                    #[derive(Serialize)]
                    struct BallResult {
                        max_norm: f64,
                        argmax: Vec<f64>,
                        contacts: extremap_core::ballmaps::ContactReport,
                        extremality: extremap_core::ballmaps::BallExtremalityReport,
                    }
                    emit(
                        cfg,
                        "ball",
                        BallResult {
                            max_norm,
                            argmax,
                            contacts,
                            extremality,
                        },
                    )?;
                    Ok(0)
                }
                Err(CoreError::NotBallPositive { max_norm }) => {
                    #[derive(Serialize)]
                    struct NotPositive {
                        error: &'static str,
                        max_norm: f64,
                        argmax: Vec<f64>,
                    }
                    emit(
                        cfg,
                        "ball",
                        NotPositive {
                            error: "map does not send the unit ball into itself",
                            max_norm,
                            argmax,
                        },
                    )?;
                    Ok(1)
                }
                Err(other) => Err(other.into()),
            }
        }
        Command::Plane { alpha, grid } => {
            let report = planar_example_check(*alpha, *grid)?;
            let ok = report.f_ge_alpha_g_everywhere;
            emit(cfg, "plane", report)?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::ProbeConjecture { trials, dim } => run_probe(cfg, *trials, *dim),
        Command::Reproduce { what } => run_reproduce(cfg, what),
    }
}

/// Sample TP channels; every map certified fix-extreme is classified, and
/// certified maps outside both Wigner branches are reported verbatim. The
/// probe is exploratory: its exit code only signals that it ran.
fn run_probe(cfg: &RunConfig, trials: usize, dim: usize) -> anyhow::Result<u8> {
    use extremap_core::wigner::classify_wigner as classify;

    #[derive(Serialize)]
    struct ProbeHit {
        trial: usize,
        kraus_count: usize,
        image_affine_rank: usize,
        channel: ChannelJson,
    }
    #[derive(Serialize)]
    struct ProbeResult {
        trials: usize,
        dim: usize,
        certified_fix_extreme: usize,
        certified_wigner: usize,
        certified_not_wigner: Vec<ProbeHit>,
        note: &'static str,
    }

    let mut rng = sampling::seeded_rng(cfg.seed);
    let mut certified = 0usize;
    let mut wigner_count = 0usize;
    let mut hits = Vec::new();
    for trial in 0..trials {
        let s = 1 + trial % 2;
        let ch = sampling::random_tp_channel(&mut rng, dim, s);
        let cert = fix_extreme_certificate(&ch, cfg.restarts, cfg.seed.wrapping_add(trial as u64))?;
        if !cert.certified {
            continue;
        }
        certified += 1;
        let superop = extremap_core::channels::SuperOpMatrix::from_channel(&ch);
        let class = classify(&superop, cfg.tol)?;
        if class.branch == WignerClass::NotWigner {
            hits.push(ProbeHit {
                trial,
                kraus_count: ch.kraus_ops().len(),
                image_affine_rank: cert.image_affine_rank,
                channel: ChannelJson::from_channel(&ch),
            });
        } else {
            wigner_count += 1;
        }
    }
    emit(
        cfg,
        "probe-conjecture",
        ProbeResult {
            trials,
            dim,
            certified_fix_extreme: certified,
            certified_wigner: wigner_count,
            certified_not_wigner: hits,
            note: "exploratory probe; absence of counterexamples proves nothing",
        },
    )?;
    Ok(0)
}

fn run_qubit(cfg: &RunConfig, case: u8, u: f64, v: f64) -> anyhow::Result<u8> {
    let family = qubit_family(case, u, v)?;
    let ball = to_bloch_affine(&family);
    let (max_norm, _) = max_norm_on_sphere(&ball, cfg.tol);
    let report = to_channel(&family);
    let contacts = if max_norm <= 1.0 + cfg.tol {
        Some(contact_points(&ball, cfg.tol, cfg.samples, cfg.seed)?)
    } else {
        None
    };
    let extremality = report
        .channel
        .as_ref()
        .map(|ch| choi_extremality(ch, ExtremalityMode::TracePreserving, cfg.tol))
        .transpose()?;

    // the profile each case claims: 1 -> CP, extreme, two contact
    // clusters; 2 -> CP, extreme, one contact cluster at the north pole;
    // 3 -> ball-positive but not CP
    let profile_ok = match case {
        1 => {
            report.channel.is_some()
                && extremality.as_ref().map(|e| e.extreme).unwrap_or(false)
                && contacts.as_ref().map(|c| c.contact_points.len() == 2).unwrap_or(false)
        }
        2 => {
            let pole = contacts
                .as_ref()
                .map(|c| {
                    c.contact_points.len() == 1
                        && (c.contact_points[0][2] - 1.0).abs() <= 1e-6
                })
                .unwrap_or(false);
            report.channel.is_some()
                && extremality.as_ref().map(|e| e.extreme).unwrap_or(false)
                && pole
        }
        3 => max_norm <= 1.0 + cfg.tol && report.channel.is_none(),
        _ => false,
    };

    #[derive(Serialize)]
    struct QubitResult {
        family: extremap_core::examples_catalog::PauliDiagonalMap,
        max_norm: f64,
        choi_min_eigenvalue: f64,
        completely_positive: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        contacts: Option<extremap_core::ballmaps::ContactReport>,
        #[serde(skip_serializing_if = "Option::is_none")]
        extremality: Option<extremap_core::extremality::ExtremalityReport>,
        #[serde(skip_serializing_if = "Option::is_none")]
        channel: Option<ChannelJson>,
        profile_confirmed: bool,
    }
    emit(
        cfg,
        "qubit",
        QubitResult {
            family,
            max_norm,
            choi_min_eigenvalue: report.choi_min_eigenvalue,
            completely_positive: report.channel.is_some(),
            contacts,
            extremality,
            channel: report.channel.as_ref().map(ChannelJson::from_channel),
            profile_confirmed: profile_ok,
        },
    )?;
    Ok(if profile_ok { 0 } else { 1 })
}

fn run_reproduce(cfg: &RunConfig, what: &ReproduceWhat) -> anyhow::Result<u8> {
    let grid_xs = |grid: usize| -> Vec<f64> {
        (0..grid)
            .map(|i| -1.0 + 2.0 * i as f64 / (grid - 1) as f64)
            .collect()
    };
    match what {
        ReproduceWhat::Fg { grid } => {
            let mut out = String::from("x,f,g,f_minus_1_01_g\n");
            for x in grid_xs(*grid) {
                let f = planar_f(x);
                let g = planar_g(x);
                out.push_str(&format!("{x},{f},{g},{}\n", f - 1.01 * g));
            }
            emit_csv(cfg, &out)?;
            Ok(0)
        }
        ReproduceWhat::Fpp { grid } => {
            let xs = grid_xs(*grid);
            let h = 2.0 / (*grid as f64 - 1.0);
            let mut out = String::from("x,f_second_derivative\n");
            for i in 1..xs.len() - 1 {
                if xs[i].abs() > 1.0 - PLANAR_ENDPOINT_MARGIN {
                    continue;
                }
                let second =
                    (planar_f(xs[i + 1]) - 2.0 * planar_f(xs[i]) + planar_f(xs[i - 1])) / (h * h);
                out.push_str(&format!("{},{second}\n", xs[i]));
            }
            emit_csv(cfg, &out)?;
            Ok(0)
        }
        ReproduceWhat::Fmg { grid } => {
            let mut out = String::from("x,f_minus_g,f_minus_1_01_g\n");
            for x in grid_xs(*grid) {
                let f = planar_f(x);
                let g = planar_g(x);
                out.push_str(&format!("{x},{},{}\n", f - g, f - 1.01 * g));
            }
            emit_csv(cfg, &out)?;
            Ok(0)
        }
        ReproduceWhat::Ellipsoid { case, u, v } => {
            let family = qubit_family(*case, *u, *v)?;
            let ball = to_bloch_affine(&family);
            let mut out = String::from("x,y,z,xp,yp,zp\n");
            // deterministic spiral covering of the sphere
            let count = cfg.samples.max(16);
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            for i in 0..count {
                let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                let r = (1.0 - z * z).max(0.0).sqrt();
                let theta = golden * i as f64;
                let point = [r * theta.cos(), r * theta.sin(), z];
                let image = ball.apply(&point);
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    point[0], point[1], point[2], image[0], image[1], image[2]
                ));
            }
            emit_csv(cfg, &out)?;
            Ok(0)
        }
    }
}
