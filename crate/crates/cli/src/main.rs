//! Command-line front end: encode/decode symbol files against the mixture
//! and baseline codecs, run reproducible experiments, and audit Kraft sums.
//!
//! Exit codes: 0 success, 2 validation error, 3 data error, 4 internal
//! invariant breach. Errors print one machine-parsable line to stderr:
//! `error[<class>]: <message>`.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};

use bayescode::container::{parse_rational, read_container, write_container};
use bayescode::lab::{run_experiment, Family, MarginSpec, SweepConfig};
use bayescode::measures::{Alphabet, BernoulliSource};
use bayescode::{
    BayesianCode, Codec, Error, FixedLengthCode, IntegerCode, LaplaceMixture, Rational,
    SequentialMeasure, Symbol,
};

const KNOWN_MEASURES: &str = "laplace, geometric, bernoulli";
const KNOWN_CODECS: &str = "bayes, lz78, per-symbol";
const KNOWN_EXPERIMENT_CODECS: &str =
    "bayes-laplace, bayes-geometric, bayes-bernoulli, lz78, per-symbol";

#[derive(Parser)]
#[command(
    name = "bayescode",
    version,
    about = "Exact universal-coding codecs and experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a whitespace-separated decimal symbol file into a container.
    Encode(EncodeArgs),
    /// Decode a container back into decimal symbols, one per line.
    Decode(DecodeArgs),
    /// Run a Monte Carlo sweep writing trajectory.csv and summaries.
    Experiment(ExperimentArgs),
    /// Brute-force Kraft sums for small parameters and print them.
    KraftAudit(KraftAuditArgs),
}

#[derive(Args, Default)]
struct EncodeArgs {
    /// Optional key=value config file; explicit flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Codec: bayes | lz78 | per-symbol.
    #[arg(long)]
    codec: Option<String>,
    /// Measure: laplace | geometric | bernoulli.
    #[arg(long)]
    measure: Option<String>,
    /// Bernoulli parameter as p/q.
    #[arg(long)]
    theta: Option<String>,
    /// Input symbol file.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output container file.
    #[arg(long = "out")]
    output: Option<PathBuf>,
}

#[derive(Args, Default)]
struct DecodeArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input container file.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output symbol file.
    #[arg(long = "out")]
    output: Option<PathBuf>,
}

#[derive(Args, Default)]
struct ExperimentArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Parameter family: bernoulli | digit-param.
    #[arg(long)]
    family: Option<String>,
    /// Comma-separated codec list (default depends on the family).
    #[arg(long)]
    codecs: Option<String>,
    /// Bernoulli parameter for the bayes-bernoulli codec.
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    /// Prefix horizon N.
    #[arg(long)]
    horizon: Option<usize>,
    /// Slack standing in for the reference decoder's description cost.
    #[arg(long)]
    delta: Option<u64>,
    /// Margin spec: omega+K or const:K.
    #[arg(long)]
    margin: Option<String>,
    /// Dyadic bits of sampled Bernoulli parameters.
    #[arg(long)]
    theta_bits: Option<u32>,
    /// Digit terms per factor for the digit-param family.
    #[arg(long)]
    precision: Option<u32>,
    /// Output directory.
    #[arg(long = "out")]
    output: Option<PathBuf>,
}

#[derive(Args, Default)]
struct KraftAuditArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Measure: laplace | bernoulli (binary alphabets only).
    #[arg(long)]
    measure: Option<String>,
    #[arg(long)]
    theta: Option<String>,
    /// Audit the global code jointly over lengths 1..=N.
    #[arg(long)]
    max_global: Option<usize>,
    /// Audit the per-length code for each n up to N.
    #[arg(long)]
    max_fixed: Option<usize>,
    /// Also print the partial integer-code Kraft sum over 1..=N terms.
    #[arg(long)]
    omega_terms: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Encode(args) => cmd_encode(args),
        Command::Decode(args) => cmd_decode(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::KraftAudit(args) => cmd_kraft_audit(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (class, code) = classify(&e);
            eprintln!("error[{class}]: {e}");
            ExitCode::from(code)
        }
    }
}

fn classify(e: &Error) -> (&'static str, u8) {
    match e {
        Error::InvalidConfig(_) | Error::UnsupportedBase(_) => ("validation", 2),
        Error::Internal(_) => ("internal", 4),
        Error::Trial { source, .. } => classify(source),
        _ => ("data", 3),
    }
}

// ---------------------------------------------------------------------------
// config files: key=value lines, '#' comments; explicit flags win
// ---------------------------------------------------------------------------

fn load_config(path: &Path) -> Result<HashMap<String, String>, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidConfig(format!("config {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidConfig(format!("config line {}: expected key=value", lineno + 1))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

struct Merged {
    map: HashMap<String, String>,
}

impl Merged {
    fn new(path: Option<&PathBuf>, known: &[&str]) -> Result<Self, Error> {
        let map = match path {
            Some(p) => load_config(p)?,
            None => HashMap::new(),
        };
        for key in map.keys() {
            if !known.contains(&key.as_str()) {
                return Err(Error::InvalidConfig(format!(
                    "unknown config key {key:?} (known: {})",
                    known.join(", ")
                )));
            }
        }
        Ok(Merged { map })
    }

    fn string(&self, key: &str, flag: Option<String>) -> Option<String> {
        flag.or_else(|| self.map.get(key).cloned())
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, flag: Option<T>) -> Result<Option<T>, Error> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.map.get(key) {
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| Error::InvalidConfig(format!("config {key}: bad value {raw:?}"))),
            None => Ok(None),
        }
    }

    fn path(&self, key: &str, flag: Option<PathBuf>) -> Option<PathBuf> {
        flag.or_else(|| self.map.get(key).map(PathBuf::from))
    }
}

fn require<T>(value: Option<T>, what: &str) -> Result<T, Error> {
    value.ok_or_else(|| Error::InvalidConfig(format!("missing required {what}")))
}

// ---------------------------------------------------------------------------
// symbol file io
// ---------------------------------------------------------------------------

fn read_symbols(path: &Path) -> Result<Vec<Symbol>, Error> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for token in text.split_whitespace() {
        let value: Symbol = token
            .parse()
            .map_err(|_| Error::Malformed(format!("symbol token {token:?}")))?;
        out.push(value);
    }
    Ok(out)
}

fn write_symbols(path: &Path, x: &[Symbol]) -> Result<(), Error> {
    let mut text = String::new();
    for s in x {
        text.push_str(&s.to_string());
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// codec construction
// ---------------------------------------------------------------------------

fn measure_alphabet(measure: &str) -> Result<Alphabet, Error> {
    match measure {
        "laplace" | "bernoulli" => Ok(Alphabet::Finite(2)),
        "geometric" => Ok(Alphabet::Positive),
        other => Err(Error::InvalidConfig(format!(
            "unknown measure {other:?} (known: {KNOWN_MEASURES})"
        ))),
    }
}

fn build_codec(codec: &str, measure: &str, theta: Option<&str>) -> Result<Codec, Error> {
    let alphabet = measure_alphabet(measure)?;
    match codec {
        "bayes" => match measure {
            "laplace" => Ok(Codec::bayes_laplace()),
            "geometric" => Ok(Codec::bayes_geometric()),
            "bernoulli" => {
                let theta = require(theta, "--theta for the bernoulli measure")?;
                let theta = BernoulliSource::new(parse_rational(theta)?)?;
                Ok(Codec::bayes_bernoulli(theta))
            }
            _ => unreachable!("alphabet lookup validated the measure"),
        },
        "lz78" => Ok(Codec::lz78(alphabet)),
        "per-symbol" => Ok(Codec::per_symbol(alphabet)),
        other => Err(Error::InvalidConfig(format!(
            "unknown codec {other:?} (known: {KNOWN_CODECS})"
        ))),
    }
}

fn build_experiment_codec(
    token: &str,
    family_alphabet: Alphabet,
    theta: Option<&str>,
) -> Result<Codec, Error> {
    match token {
        "bayes-laplace" => Ok(Codec::bayes_laplace()),
        "bayes-geometric" => Ok(Codec::bayes_geometric()),
        "bayes-bernoulli" => {
            let theta = require(theta, "--theta for the bayes-bernoulli codec")?;
            Ok(Codec::bayes_bernoulli(BernoulliSource::new(
                parse_rational(theta)?,
            )?))
        }
        "lz78" => Ok(Codec::lz78(family_alphabet)),
        "per-symbol" => Ok(Codec::per_symbol(family_alphabet)),
        other => Err(Error::InvalidConfig(format!(
            "unknown experiment codec {other:?} (known: {KNOWN_EXPERIMENT_CODECS})"
        ))),
    }
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

fn cmd_encode(args: EncodeArgs) -> Result<(), Error> {
    let merged = Merged::new(
        args.config.as_ref(),
        &["codec", "measure", "theta", "in", "out"],
    )?;
    let codec_name = merged
        .string("codec", args.codec)
        .unwrap_or_else(|| "bayes".into());
    let measure = require(merged.string("measure", args.measure), "--measure")?;
    let theta = merged.string("theta", args.theta);
    let input = require(merged.path("in", args.input), "--in")?;
    let output = require(merged.path("out", args.output), "--out")?;

    let codec = build_codec(&codec_name, &measure, theta.as_deref())?;
    let x = read_symbols(&input)?;
    let bytes = write_container(&codec, &x)?;
    fs::write(&output, bytes).map_err(|e| Error::Io(format!("{}: {e}", output.display())))?;
    Ok(())
}

fn cmd_decode(args: DecodeArgs) -> Result<(), Error> {
    let merged = Merged::new(args.config.as_ref(), &["in", "out"])?;
    let input = require(merged.path("in", args.input), "--in")?;
    let output = require(merged.path("out", args.output), "--out")?;
    let bytes = fs::read(&input).map_err(|e| Error::Io(format!("{}: {e}", input.display())))?;
    let (_codec, x) = read_container(&bytes)?;
    write_symbols(&output, &x)
}

fn cmd_experiment(args: ExperimentArgs) -> Result<(), Error> {
    let merged = Merged::new(
        args.config.as_ref(),
        &[
            "family",
            "codecs",
            "theta",
            "seed",
            "trials",
            "horizon",
            "delta",
            "margin",
            "theta-bits",
            "precision",
            "out",
        ],
    )?;
    let family_name = merged
        .string("family", args.family)
        .unwrap_or_else(|| "bernoulli".into());
    let theta_bits = merged.parsed("theta-bits", args.theta_bits)?.unwrap_or(16);
    let precision = merged.parsed("precision", args.precision)?.unwrap_or(24);
    let family = match family_name.as_str() {
        "bernoulli" => Family::Bernoulli { theta_bits },
        "digit-param" => Family::DigitParam { precision },
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown family {other:?} (known: bernoulli, digit-param)"
            )))
        }
    };
    let codecs_default = match family {
        Family::Bernoulli { .. } => "bayes-laplace,per-symbol,lz78",
        Family::DigitParam { .. } => "bayes-geometric,per-symbol,lz78",
    };
    let codec_list = merged
        .string("codecs", args.codecs)
        .unwrap_or_else(|| codecs_default.into());
    let theta = merged.string("theta", args.theta);
    let codecs = codec_list
        .split(',')
        .map(|token| build_experiment_codec(token.trim(), family.alphabet(), theta.as_deref()))
        .collect::<Result<Vec<_>, _>>()?;

    let margin = match merged.string("margin", args.margin) {
        Some(raw) => raw.parse::<MarginSpec>()?,
        None => MarginSpec::default(),
    };
    let cfg = SweepConfig {
        family,
        trials: merged.parsed("trials", args.trials)?.unwrap_or(100),
        horizon: merged.parsed("horizon", args.horizon)?.unwrap_or(1000),
        master_seed: merged.parsed("seed", args.seed)?.unwrap_or(1),
        delta: merged.parsed("delta", args.delta)?.unwrap_or(64),
        margin,
        codecs,
    };
    let out_dir = require(merged.path("out", args.output), "--out")?;
    let report = run_experiment(&cfg, &out_dir)?;
    println!(
        "wrote {} trials x {} prefixes x {} codecs to {}",
        report.trials,
        report.horizon,
        report.codecs.len(),
        out_dir.display()
    );
    for c in &report.codecs {
        println!(
            "{}: mean violations {} late-fraction {}",
            c.codec_id, c.mean_violation_decimal, c.late_violation_fraction_decimal
        );
    }
    Ok(())
}

fn cmd_kraft_audit(args: KraftAuditArgs) -> Result<(), Error> {
    let merged = Merged::new(
        args.config.as_ref(),
        &["measure", "theta", "max-global", "max-fixed", "omega-terms"],
    )?;
    let measure_name = merged
        .string("measure", args.measure)
        .unwrap_or_else(|| "laplace".into());
    let theta = merged.string("theta", args.theta);
    let max_global = merged.parsed("max-global", args.max_global)?.unwrap_or(6);
    let max_fixed = merged.parsed("max-fixed", args.max_fixed)?.unwrap_or(8);
    let omega_terms = merged.parsed("omega-terms", args.omega_terms)?.unwrap_or(0);

    match measure_name.as_str() {
        "laplace" => audit_binary_measure(LaplaceMixture::new(), max_global, max_fixed)?,
        "bernoulli" => {
            let theta = require(theta, "--theta for the bernoulli measure")?;
            let source = BernoulliSource::new(parse_rational(&theta)?)?;
            audit_binary_measure(source, max_global, max_fixed)?;
        }
        other => {
            return Err(Error::InvalidConfig(format!(
            "kraft-audit supports binary measures only, got {other:?} (known: laplace, bernoulli)"
        )))
        }
    }

    if omega_terms > 0 {
        let omega = IntegerCode::omega();
        let mut max_len = 0u64;
        for n in 1..=omega_terms {
            max_len = max_len.max(omega.len(n)?);
        }
        let mut acc = BigUint::from(0u8);
        for n in 1..=omega_terms {
            acc += BigUint::from(1u8) << (max_len - omega.len(n)?) as usize;
        }
        let den = BigUint::from(1u8) << max_len as usize;
        println!(
            "omega partial kraft sum over n <= {omega_terms}: {acc}/{den} (<= 1: {})",
            acc <= den
        );
    }
    Ok(())
}

fn audit_binary_measure<M: SequentialMeasure + Clone>(
    measure: M,
    max_global: usize,
    max_fixed: usize,
) -> Result<(), Error> {
    let name = measure.name();
    let one = Rational::from_integer(BigInt::from(1));
    let fixed = FixedLengthCode::new(measure.clone());
    for n in 1..=max_fixed {
        let mut sum = Rational::from_integer(BigInt::from(0));
        for pattern in 0..(1u64 << n) {
            let x: Vec<Symbol> = (0..n).map(|i| (pattern >> i) & 1).collect();
            sum += pow2_neg(fixed.codeword_len(&x)?);
        }
        println!(
            "fixed-length {name} kraft sum, n={n}: {}/{} (<= 1: {})",
            sum.numer(),
            sum.denom(),
            sum <= one
        );
    }
    let global = BayesianCode::with_omega(measure);
    let mut sum = Rational::from_integer(BigInt::from(0));
    for n in 1..=max_global {
        for pattern in 0..(1u64 << n) {
            let x: Vec<Symbol> = (0..n).map(|i| (pattern >> i) & 1).collect();
            sum += pow2_neg(global.total_len(&x)?);
        }
    }
    println!(
        "global {name} kraft sum, binary lengths 1..={max_global}: {}/{} (<= 1: {})",
        sum.numer(),
        sum.denom(),
        sum <= one
    );
    Ok(())
}

fn pow2_neg(k: u64) -> Rational {
    Rational::new(BigInt::from(1), BigInt::from(1) << k as usize)
}
