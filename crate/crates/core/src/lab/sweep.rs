//! Reproducible Monte Carlo sweeps over sampled parameters.
//!
//! A sweep draws `trials` parameters from the uniform prior, samples one
//! string of length `horizon` per parameter, and scores every configured
//! codec on every prefix: exact violation flags, per-prefix CSV rows, and
//! catch-up lower bounds for every ordered codec pair. Per-trial results
//! depend only on (master seed, trial index), aggregation is
//! order-independent, and nothing on the data path touches floating point,
//! so two runs with the same configuration produce byte-identical output.
//!
//! CSV rationals are serialized as numerator/denominator integer pairs: the
//! `neg_log_*` columns carry the exact probability whose negated base-2 log
//! they describe, and `shannon_red_times_den` carries
//! 2^code_len · neg_log_true_num, an integer equal to
//! 2^shannon_redundancy · neg_log_true_den. The violation flag is exactly
//! the comparison shannon_red_times_den ≤ neg_log_true_den.
//!
//! For the digit-parameterized family the true probability is only ever
//! known as a two-sided bracket; flags are decided by refining the bracket
//! until it clears the threshold, and the CSV probability columns carry the
//! bracket midpoint at the precision that decided every flag of that row's
//! prefix.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use super::{catchup_from_lengths, prob_le_pow2_neg, MarginSpec};
use crate::codec::{Codec, LabCodec};
use crate::error::{Error, Result};
use crate::measures::{
    sample_sequence, Alphabet, GeometricMixture, LaplaceMixture, MarginalBracket, PriorSampler,
    Rational, SequentialMeasure, Symbol,
};
use crate::rng::derive_seed;

/// Salt separating the string-sampling stream from the parameter stream.
const SAMPLE_SALT: u64 = 0xB0B;

/// The parameter family a sweep draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Dyadic Bernoulli parameters m / 2^theta_bits, uniform on m.
    Bernoulli { theta_bits: u32 },
    /// Digit-parameterized sources over the positive naturals, digits iid
    /// uniform, factors truncated to `precision` terms.
    DigitParam { precision: u32 },
}

impl Family {
    pub fn name(&self) -> String {
        match *self {
            Family::Bernoulli { theta_bits } => format!("bernoulli(bits={theta_bits})"),
            Family::DigitParam { precision } => format!("digit-param(precision={precision})"),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        match *self {
            Family::Bernoulli { .. } => Alphabet::Finite(2),
            Family::DigitParam { .. } => Alphabet::Positive,
        }
    }

    /// The exact mixture of the family under the uniform prior, reported in
    /// the trajectory's mixture columns.
    fn designated_mixture(&self) -> Box<dyn SequentialMeasure> {
        match *self {
            Family::Bernoulli { .. } => Box::new(LaplaceMixture::new()),
            Family::DigitParam { .. } => Box::new(GeometricMixture::new()),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Family::Bernoulli { theta_bits } => {
                if theta_bits == 0 || theta_bits > 63 {
                    return Err(Error::InvalidConfig(format!(
                        "theta_bits {theta_bits} outside 1..=63"
                    )));
                }
            }
            Family::DigitParam { precision } => {
                if precision == 0 {
                    return Err(Error::InvalidConfig("precision must be at least 1".into()));
                }
            }
        }
        Ok(())
    }
}

/// Full description of one sweep.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub family: Family,
    pub trials: u64,
    pub horizon: usize,
    pub master_seed: u64,
    pub delta: u64,
    pub margin: MarginSpec,
    pub codecs: Vec<Codec>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.horizon == 0 {
            return Err(Error::InvalidConfig("horizon must be at least 1".into()));
        }
        if self.codecs.is_empty() {
            return Err(Error::InvalidConfig("at least one codec required".into()));
        }
        for codec in &self.codecs {
            if codec.input_alphabet() != self.family.alphabet() {
                return Err(Error::InvalidConfig(format!(
                    "codec {} does not accept the {} family's alphabet",
                    codec.codec_id(),
                    self.family.name()
                )));
            }
        }
        Ok(())
    }
}

/// Per-codec violation aggregates over a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct CodecReport {
    pub codec_id: String,
    /// Σ over trials of the per-trial violation count.
    pub total_violations: u64,
    /// Σ of squared per-trial counts, for standard-error computations.
    pub violation_sum_sq: u128,
    pub max_violation_count: u64,
    pub trials_with_any_violation: u64,
    /// Trials with at least one violation at n in (horizon/2, horizon].
    pub trials_with_late_violation: u64,
    /// Exact mean as `total/trials`.
    pub mean_violation_count: String,
    pub mean_violation_decimal: String,
    pub violation_std_decimal: String,
    pub late_violation_fraction_decimal: String,
}

/// Catch-up lower-bound distribution for one ordered codec pair.
#[derive(Debug, Clone, Serialize)]
pub struct CatchupPairReport {
    pub codec_1: String,
    pub codec_2: String,
    pub zero_count: u64,
    pub min_cut_lb: u64,
    pub max_cut_lb: u64,
    pub mean_cut_lb_decimal: String,
}

/// Aggregate outcome of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub family: String,
    pub trials: u64,
    pub horizon: u64,
    pub master_seed: u64,
    pub delta: u64,
    pub margin: String,
    pub codecs: Vec<CodecReport>,
    pub catchup: Vec<CatchupPairReport>,
}

/// Header of the trajectory CSV, one row per (trial, n, codec).
pub const CSV_HEADER: &str = "trial,theta_seed,n,codec_id,code_len,neg_log_true_num,neg_log_true_den,neg_log_mix_num,neg_log_mix_den,shannon_red_times_den,barron_violation_flag";

struct RowData<'a> {
    trial: u64,
    theta_seed: u64,
    n: u64,
    codec_id: &'a str,
    code_len: u64,
    prob_true: &'a Rational,
    prob_mix: &'a Rational,
    violation: bool,
}

trait RowSink {
    fn row(&mut self, row: &RowData<'_>) -> Result<()>;
}

struct NullSink;

impl RowSink for NullSink {
    fn row(&mut self, _row: &RowData<'_>) -> Result<()> {
        Ok(())
    }
}

struct CsvSink<W: Write> {
    out: W,
}

impl<W: Write> CsvSink<W> {
    fn new(mut out: W) -> Result<Self> {
        writeln!(out, "{CSV_HEADER}").map_err(io_err)?;
        Ok(CsvSink { out })
    }

    fn finish(mut self) -> Result<()> {
        self.out.flush().map_err(io_err)
    }
}

impl<W: Write> RowSink for CsvSink<W> {
    fn row(&mut self, r: &RowData<'_>) -> Result<()> {
        let shifted = r.prob_true.numer() << usize::try_from(r.code_len).expect("len fits usize");
        debug_assert_eq!(r.violation, shifted <= *r.prob_true.denom());
        writeln!(
            self.out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.trial,
            r.theta_seed,
            r.n,
            r.codec_id,
            r.code_len,
            r.prob_true.numer(),
            r.prob_true.denom(),
            r.prob_mix.numer(),
            r.prob_mix.denom(),
            shifted,
            u8::from(r.violation),
        )
        .map_err(io_err)
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

/// Run a sweep and return the aggregate report (no files written).
pub fn monte_carlo_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    sweep_with_sink(cfg, &mut NullSink)
}

/// Run a sweep writing `trajectory.csv`, `summary.txt`, and `summary.json`
/// into `out_dir`. Byte-identical across runs with equal configurations.
pub fn run_experiment(cfg: &SweepConfig, out_dir: &Path) -> Result<SweepReport> {
    fs::create_dir_all(out_dir).map_err(io_err)?;
    let csv = fs::File::create(out_dir.join("trajectory.csv")).map_err(io_err)?;
    let mut sink = CsvSink::new(BufWriter::new(csv))?;
    let report = sweep_with_sink(cfg, &mut sink)?;
    sink.finish()?;
    fs::write(out_dir.join("summary.txt"), render_summary_text(&report)).map_err(io_err)?;
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::Internal(format!("summary serialization: {e}")))?;
    fs::write(out_dir.join("summary.json"), json + "\n").map_err(io_err)?;
    Ok(report)
}

/// The (theta seed, sampled string) of one trial, for external reproduction.
pub fn trial_string(cfg: &SweepConfig, trial: u64) -> Result<(u64, Vec<Symbol>)> {
    cfg.validate()?;
    let prior = PriorSampler::new(cfg.master_seed, 2);
    let trial_seed = prior.trial_seed(trial);
    let sample_seed = derive_seed(trial_seed, SAMPLE_SALT);
    let x = match cfg.family {
        Family::Bernoulli { theta_bits } => {
            let source = prior.bernoulli_source(trial, theta_bits)?;
            sample_sequence(&source, cfg.horizon, sample_seed)?
        }
        Family::DigitParam { precision } => {
            let source = prior.digit_source(trial, precision)?;
            source.sample_sequence(cfg.horizon, sample_seed)?
        }
    };
    Ok((trial_seed, x))
}

struct CodecAgg {
    total: u64,
    sum_sq: u128,
    max: u64,
    any: u64,
    late: u64,
}

struct PairAgg {
    zero: u64,
    min: u64,
    max: u64,
    sum: u128,
}

fn sweep_with_sink(cfg: &SweepConfig, sink: &mut dyn RowSink) -> Result<SweepReport> {
    cfg.validate()?;
    let prior = PriorSampler::new(cfg.master_seed, 2);
    let mixture = cfg.family.designated_mixture();
    let ids: Vec<String> = cfg.codecs.iter().map(|c| c.codec_id()).collect();
    let k = cfg.codecs.len();
    let mut codec_aggs: Vec<CodecAgg> = (0..k)
        .map(|_| CodecAgg {
            total: 0,
            sum_sq: 0,
            max: 0,
            any: 0,
            late: 0,
        })
        .collect();
    let mut pair_aggs: Vec<PairAgg> = (0..k * k)
        .map(|_| PairAgg {
            zero: 0,
            min: u64::MAX,
            max: 0,
            sum: 0,
        })
        .collect();

    for trial in 0..cfg.trials {
        run_trial(
            cfg,
            &prior,
            mixture.as_ref(),
            &ids,
            trial,
            sink,
            &mut codec_aggs,
            &mut pair_aggs,
        )
        .map_err(|e| e.in_trial(trial))?;
    }

    let codecs = ids
        .iter()
        .zip(&codec_aggs)
        .map(|(id, agg)| {
            let trials = cfg.trials;
            CodecReport {
                codec_id: id.clone(),
                total_violations: agg.total,
                violation_sum_sq: agg.sum_sq,
                max_violation_count: agg.max,
                trials_with_any_violation: agg.any,
                trials_with_late_violation: agg.late,
                mean_violation_count: format!("{}/{}", agg.total, trials),
                mean_violation_decimal: decimal_of_ratio(agg.total.into(), trials.into(), 6),
                violation_std_decimal: sample_std_decimal(agg.total, agg.sum_sq, trials, 6),
                late_violation_fraction_decimal: decimal_of_ratio(
                    agg.late.into(),
                    trials.into(),
                    6,
                ),
            }
        })
        .collect();

    let mut catchup = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if a == b {
                continue;
            }
            let agg = &pair_aggs[a * k + b];
            catchup.push(CatchupPairReport {
                codec_1: ids[a].clone(),
                codec_2: ids[b].clone(),
                zero_count: agg.zero,
                min_cut_lb: if agg.min == u64::MAX { 0 } else { agg.min },
                max_cut_lb: agg.max,
                mean_cut_lb_decimal: decimal_of_ratio(agg.sum, cfg.trials.into(), 6),
            });
        }
    }

    Ok(SweepReport {
        family: cfg.family.name(),
        trials: cfg.trials,
        horizon: cfg.horizon as u64,
        master_seed: cfg.master_seed,
        delta: cfg.delta,
        margin: cfg.margin.to_string(),
        codecs,
        catchup,
    })
}

/// Walker over the true measure's per-prefix probabilities: exact for the
/// Bernoulli family, a refinable bracket for the digit family.
enum TrueWalk<'a> {
    Exact {
        stepper: Box<dyn crate::measures::MarginalStepper + 'a>,
        current: Rational,
    },
    Bracket(MarginalBracket<'a>),
}

impl TrueWalk<'_> {
    fn push(&mut self, s: Symbol) -> Result<()> {
        match self {
            TrueWalk::Exact { stepper, current } => {
                *current = stepper.push(s)?;
                if current.is_zero() {
                    return Err(Error::Internal(
                        "sampled string hit zero mass under its own source".into(),
                    ));
                }
                Ok(())
            }
            TrueWalk::Bracket(bracket) => {
                bracket.push(s)?;
                Ok(())
            }
        }
    }

    /// Decide P(xⁿ) ≤ 2^−len exactly, refining brackets on demand.
    fn decide_violation(&mut self, len: u64) -> Result<bool> {
        match self {
            TrueWalk::Exact { current, .. } => Ok(prob_le_pow2_neg(current, len)),
            TrueWalk::Bracket(bracket) => loop {
                let (lo, hi) = bracket.bounds();
                if prob_le_pow2_neg(&hi, len) {
                    return Ok(true);
                }
                if !lo.is_zero() && !prob_le_pow2_neg(&lo, len) {
                    return Ok(false);
                }
                bracket.refine()?;
            },
        }
    }

    /// The probability written to CSV rows: the exact value, or the bracket
    /// midpoint at the deciding precision.
    fn representative(&self) -> Rational {
        match self {
            TrueWalk::Exact { current, .. } => current.clone(),
            TrueWalk::Bracket(bracket) => {
                let (lo, hi) = bracket.bounds();
                (lo + hi) / Rational::from(BigInt::from(2))
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_trial(
    cfg: &SweepConfig,
    prior: &PriorSampler,
    mixture: &dyn SequentialMeasure,
    ids: &[String],
    trial: u64,
    sink: &mut dyn RowSink,
    codec_aggs: &mut [CodecAgg],
    pair_aggs: &mut [PairAgg],
) -> Result<()> {
    let trial_seed = prior.trial_seed(trial);
    let sample_seed = derive_seed(trial_seed, SAMPLE_SALT);

    // the digit source must outlive its bracket walker
    let bernoulli_source;
    let digit_source;
    let (x, mut walk): (Vec<Symbol>, TrueWalk<'_>) = match cfg.family {
        Family::Bernoulli { theta_bits } => {
            bernoulli_source = prior.bernoulli_source(trial, theta_bits)?;
            let x = sample_sequence(&bernoulli_source, cfg.horizon, sample_seed)?;
            let walk = TrueWalk::Exact {
                stepper: bernoulli_source.stepper(),
                current: Rational::one(),
            };
            (x, walk)
        }
        Family::DigitParam { precision } => {
            digit_source = prior.digit_source(trial, precision)?;
            let x = digit_source.sample_sequence(cfg.horizon, sample_seed)?;
            (x, TrueWalk::Bracket(MarginalBracket::new(&digit_source)))
        }
    };

    let k = cfg.codecs.len();
    let lens: Vec<Vec<u64>> = cfg
        .codecs
        .iter()
        .map(|c| c.prefix_lengths(&x))
        .collect::<Result<_>>()?;

    let mut mix_stepper = mixture.stepper();
    let mut counts = vec![0u64; k];
    let mut late = vec![false; k];
    let half = cfg.horizon as u64 / 2;
    let mut flags = vec![false; k];
    for i in 0..x.len() {
        walk.push(x[i])?;
        let prob_mix = mix_stepper.push(x[i])?;
        let n = i as u64 + 1;
        // settle every codec's flag before emitting rows, so all rows of
        // this (trial, n) share one representative probability
        for c in 0..k {
            flags[c] = walk.decide_violation(lens[c][i])?;
        }
        let prob_true = walk.representative();
        for c in 0..k {
            if flags[c] {
                counts[c] += 1;
                if n > half {
                    late[c] = true;
                }
            }
            sink.row(&RowData {
                trial,
                theta_seed: trial_seed,
                n,
                codec_id: &ids[c],
                code_len: lens[c][i],
                prob_true: &prob_true,
                prob_mix: &prob_mix,
                violation: flags[c],
            })?;
        }
    }

    for (c, agg) in codec_aggs.iter_mut().enumerate() {
        agg.total += counts[c];
        agg.sum_sq += u128::from(counts[c]) * u128::from(counts[c]);
        agg.max = agg.max.max(counts[c]);
        agg.any += u64::from(counts[c] > 0);
        agg.late += u64::from(late[c]);
    }
    for a in 0..k {
        for b in 0..k {
            if a == b {
                continue;
            }
            let cut = catchup_from_lengths(&lens[a], &lens[b], cfg.margin, cfg.delta)?;
            let agg = &mut pair_aggs[a * k + b];
            agg.zero += u64::from(cut == 0);
            agg.min = agg.min.min(cut);
            agg.max = agg.max.max(cut);
            agg.sum += u128::from(cut);
        }
    }
    Ok(())
}

/// Floor-rounded decimal expansion of num/den with `places` fractional
/// digits, computed on integers.
fn decimal_of_ratio(num: u128, den: u128, places: u32) -> String {
    debug_assert!(den > 0);
    let scale = 10u128.pow(places);
    let scaled = num * scale / den;
    format!(
        "{}.{:0width$}",
        scaled / scale,
        scaled % scale,
        width = places as usize
    )
}

/// Sample standard deviation of the per-trial counts, floor-rounded.
fn sample_std_decimal(total: u64, sum_sq: u128, trials: u64, places: u32) -> String {
    if trials < 2 {
        return decimal_of_ratio(0, 1, places);
    }
    // variance = (T * sum_sq - total^2) / (T * (T-1))
    let t = BigUint::from(trials);
    let num = &t * BigUint::from(sum_sq) - BigUint::from(total) * BigUint::from(total);
    let den = &t * BigUint::from(trials - 1);
    // std * 10^places = sqrt(num * 10^(2*places) / den), floored
    let scaled = num * BigUint::from(10u32).pow(2 * places) / den;
    let root = scaled.sqrt();
    let scale = BigUint::from(10u32).pow(places);
    format!(
        "{}.{:0width$}",
        &root / &scale,
        &root % &scale,
        width = places as usize
    )
}

fn render_summary_text(report: &SweepReport) -> String {
    let mut s = String::new();
    s.push_str(&format!("family: {}\n", report.family));
    s.push_str(&format!("trials: {}\n", report.trials));
    s.push_str(&format!("horizon: {}\n", report.horizon));
    s.push_str(&format!("master_seed: {}\n", report.master_seed));
    s.push_str(&format!("delta: {}\n", report.delta));
    s.push_str(&format!("margin: {}\n", report.margin));
    for c in &report.codecs {
        s.push_str(&format!("codec: {}\n", c.codec_id));
        s.push_str(&format!("  total_violations: {}\n", c.total_violations));
        s.push_str(&format!(
            "  mean_violation_count: {} ({})\n",
            c.mean_violation_count, c.mean_violation_decimal
        ));
        s.push_str(&format!("  violation_std: {}\n", c.violation_std_decimal));
        s.push_str(&format!(
            "  max_violation_count: {}\n",
            c.max_violation_count
        ));
        s.push_str(&format!(
            "  trials_with_any_violation: {}\n",
            c.trials_with_any_violation
        ));
        s.push_str(&format!(
            "  trials_with_late_violation: {} (fraction {})\n",
            c.trials_with_late_violation, c.late_violation_fraction_decimal
        ));
    }
    for p in &report.catchup {
        s.push_str(&format!("catchup: {} vs {}\n", p.codec_1, p.codec_2));
        s.push_str(&format!("  zero_count: {}\n", p.zero_count));
        s.push_str(&format!("  min_cut_lb: {}\n", p.min_cut_lb));
        s.push_str(&format!("  max_cut_lb: {}\n", p.max_cut_lb));
        s.push_str(&format!("  mean_cut_lb: {}\n", p.mean_cut_lb_decimal));
    }
    s
}
