//! Command-line front end: flag parsing, sweep orchestration and the
//! CSV/JSON emitters.
//!
//! Output is byte-deterministic for a given configuration: fixed column
//! order, numbers printed with at most 12 significant digits, metadata keys
//! sorted.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::analysis::{sweep, ClassicalSetup, Experiment, SweepResult, DEFAULT_STEPS};
use crate::error::Error as SimError;
use crate::models::ScenarioId;
use crate::projectors::{clamp_probability, DetectorModel, ProjectorAngles};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "photon-indist",
    version,
    about = "Sweep the distinguishability parameter of a photonic interference scenario and classify the measured probability curve"
)]
struct Args {
    /// Scenario to simulate
    #[arg(long, value_parser = parse_scenario)]
    scenario: ScenarioId,

    /// Number of uniformly spaced gamma points on [0, pi/2]
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,

    /// Projector polarizer angle beta in radians, [0, pi/2]
    #[arg(long, value_parser = parse_radians, allow_negative_numbers = true)]
    beta: Option<f64>,

    /// Projector birefringence phase theta in radians, [0, 2 pi)
    #[arg(long, value_parser = parse_radians, allow_negative_numbers = true)]
    theta: Option<f64>,

    /// Detector efficiency for the polarizer cascade, [0, 1]
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,

    /// First polarizer angle (classical light), radians
    #[arg(long, value_parser = parse_radians, allow_negative_numbers = true)]
    theta1: Option<f64>,

    /// Second polarizer angle (classical light), radians
    #[arg(long, value_parser = parse_radians, allow_negative_numbers = true)]
    theta2: Option<f64>,

    /// Classical field amplitude E0
    #[arg(long, allow_negative_numbers = true)]
    amplitude: Option<f64>,

    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,

    /// Output file; standard output when omitted
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_scenario(s: &str) -> Result<ScenarioId, String> {
    s.parse()
}

fn parse_radians(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if t.ends_with('°') || t.to_ascii_lowercase().ends_with("deg") {
        return Err(format!("`{s}`: angles are given in radians, not degrees"));
    }
    let v: f64 = t.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(v)
}

/// Validated run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub steps: usize,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    /// `--help` / `--version`; not a failure.
    #[error("{0}")]
    Info(String),
    #[error("{0}")]
    Usage(String),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Simulation(#[from] SimError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => EXIT_OK,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Simulation(_) => EXIT_INVARIANT,
        }
    }
}

fn usage(flag: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{flag}: {reason}"))
}

pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Info(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    })?;

    if args.steps < 3 {
        return Err(usage(
            "--steps",
            format!("need at least 3 points, got {}", args.steps),
        ));
    }

    let mut experiment = Experiment::new(args.scenario);

    if args.scenario.needs_angles() {
        let beta = args
            .beta
            .ok_or_else(|| usage("--beta", format!("required for scenario {}", args.scenario)))?;
        let theta = args.theta.ok_or_else(|| {
            usage(
                "--theta",
                format!("required for scenario {}", args.scenario),
            )
        })?;
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&beta) {
            return Err(usage("--beta", format!("{beta} outside [0, pi/2]")));
        }
        if !(0.0..2.0 * std::f64::consts::PI).contains(&theta) {
            return Err(usage("--theta", format!("{theta} outside [0, 2 pi)")));
        }
        experiment = experiment.with_angles(ProjectorAngles::new(beta, theta)?);
    }

    if let Some(eta) = args.eta {
        let detectors =
            DetectorModel::new(eta).map_err(|_| usage("--eta", format!("{eta} outside [0, 1]")))?;
        experiment = experiment.with_detectors(detectors);
    }

    let defaults = ClassicalSetup::default();
    if let Some(amplitude) = args.amplitude {
        if !amplitude.is_finite() || amplitude < 0.0 {
            return Err(usage(
                "--amplitude",
                format!("{amplitude} must be a finite non-negative number"),
            ));
        }
    }
    experiment = experiment.with_classical(ClassicalSetup {
        theta1: args.theta1.unwrap_or(defaults.theta1),
        theta2: args.theta2.unwrap_or(defaults.theta2),
        field_amplitude: args.amplitude.unwrap_or(defaults.field_amplitude),
    });

    Ok(RunConfig {
        experiment,
        steps: args.steps,
        format: args.format,
        output: args.output,
    })
}

/// Runs the sweep and writes the table.
pub fn run(config: &RunConfig) -> Result<SweepResult, CliError> {
    let result = sweep(&config.experiment, config.steps)?;
    let text = match config.format {
        OutputFormat::Csv => render_csv(&result),
        OutputFormat::Json => render_json(&result),
    };
    match &config.output {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(result)
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros dropped.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_fraction(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_fraction(mantissa.to_string()))
    }
}

fn trim_fraction(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn rounded(x: f64) -> f64 {
    format_number(x).parse().expect("formatted number parses")
}

fn reported_probability(result: &SweepResult, p: f64) -> f64 {
    // Classical intensities are not probabilities and may exceed one.
    if result.scenario().is_quantum() {
        clamp_probability(p)
    } else {
        p.max(0.0)
    }
}

fn parameters(result: &SweepResult) -> BTreeMap<&'static str, f64> {
    let exp = &result.experiment;
    let mut params = BTreeMap::new();
    if let Some(angles) = exp.angles {
        params.insert("beta", angles.beta());
        params.insert("theta", angles.theta());
    }
    match exp.scenario {
        ScenarioId::HofmannCascade => {
            params.insert("eta", exp.detectors.eta());
        }
        ScenarioId::ClassicalPolarization => {
            params.insert("amplitude", exp.classical.field_amplitude);
            params.insert("theta1", exp.classical.theta1);
            params.insert("theta2", exp.classical.theta2);
        }
        _ => {}
    }
    params
}

pub fn render_csv(result: &SweepResult) -> String {
    let mut out = String::from("gamma,probability,closed_form,indistinguishability\n");
    for i in 0..result.gammas.len() {
        let indist = result.indistinguishability[i]
            .map(|v| format_number(clamp_probability(v)))
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{}\n",
            format_number(result.gammas[i]),
            format_number(reported_probability(result, result.probabilities[i])),
            format_number(result.closed_form[i]),
            indist
        ));
    }

    let mut meta: BTreeMap<&str, String> = BTreeMap::new();
    meta.insert("scenario", result.scenario().name().to_string());
    meta.insert("steps", result.gammas.len().to_string());
    meta.insert("verdict", result.verdict.to_string());
    meta.insert("max_deviation", format_number(result.max_deviation));
    let extrema = if result.extrema.is_empty() {
        "none".to_string()
    } else {
        result
            .extrema
            .iter()
            .map(|e| {
                format!(
                    "{}@{}:{}",
                    e.kind,
                    format_number(e.gamma),
                    format_number(e.value)
                )
            })
            .collect::<Vec<_>>()
            .join(";")
    };
    meta.insert("extrema", extrema);
    for (k, v) in parameters(result) {
        meta.insert(k, format_number(v));
    }
    for (k, v) in meta {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out
}

pub fn render_json(result: &SweepResult) -> String {
    let nums = |xs: &[f64]| Value::Array(xs.iter().map(|&x| json!(rounded(x))).collect());
    let probabilities: Vec<f64> = result
        .probabilities
        .iter()
        .map(|&p| reported_probability(result, p))
        .collect();
    let indist: Vec<Value> = result
        .indistinguishability
        .iter()
        .map(|v| v.map_or(Value::Null, |x| json!(rounded(clamp_probability(x)))))
        .collect();
    let extrema: Vec<Value> = result
        .extrema
        .iter()
        .map(|e| json!({"gamma": rounded(e.gamma), "kind": e.kind.to_string(), "value": rounded(e.value)}))
        .collect();
    let params: Map<String, Value> = parameters(result)
        .into_iter()
        .map(|(k, v)| (k.to_string(), json!(rounded(v))))
        .collect();

    let doc = json!({
        "scenario": result.scenario().name(),
        "gammas": nums(&result.gammas),
        "probabilities": nums(&probabilities),
        "closed_form": nums(&result.closed_form),
        "indistinguishability": indist,
        "verdict": result.verdict.to_string(),
        "extrema": extrema,
        "max_deviation": rounded(result.max_deviation),
        "parameters": params,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("json value serializes");
    s.push('\n');
    s
}
