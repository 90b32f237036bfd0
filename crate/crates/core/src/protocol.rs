//! Checking a noisy decision device against a phase curve.
//!
//! A cohort of instances comparable to a target word is built. Each instance
//! gets a prediction and a confidence from the curve, and the device is
//! queried on every instance. Each disagreement multiplies the running
//! confidence by `1 − C_j`. The target is element 0 of the cohort, and its
//! device answer is reported as `s0`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::langs::{parse_language, Decision, LanguageSpec};
use crate::phase::{builtin_parameter, curve, CurveReport, Parameter};
use crate::report;
use crate::words::{last_rank_of_length, rank_u64, word_of_rank_u64, Cap, Rank, Word};

/// Anything that answers membership queries, possibly wrongly.
pub trait Device {
    fn query(&self, w: &Word) -> std::result::Result<Decision, String>;
}

/// Ground truth with seeded, per-instance random flips.
#[derive(Clone, Debug)]
pub struct DeviceModel {
    pub truth: LanguageSpec,
    pub flip_probability: BigRational,
    pub seed: u64,
}

impl DeviceModel {
    pub fn new(truth: LanguageSpec, flip_probability: BigRational, seed: u64) -> Result<Self> {
        if flip_probability.is_negative() || flip_probability > BigRational::one() {
            return Err(Error::Parse(format!(
                "flip probability must lie in [0, 1], got {}",
                report::compact(&flip_probability)
            )));
        }
        if flip_probability.denom().to_u64().is_none() {
            return Err(Error::Unsupported("flip probability denominator must fit in 64 bits".into()));
        }
        Ok(DeviceModel { truth, flip_probability, seed })
    }

    /// Whether the answer for `w` is flipped. Each word draws from its own
    /// stream so the outcome does not depend on query order.
    fn flips(&self, w: &Word) -> bool {
        if self.flip_probability.is_zero() {
            return false;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ fnv1a(w));
        let q = self.flip_probability.denom().to_u64().expect("checked in constructor");
        let p = self.flip_probability.numer().to_u64().expect("p ≤ q");
        rng.gen_range(0..q) < p
    }
}

fn fnv1a(w: &Word) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |x: u32| {
        for b in x.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    feed(w.alphabet().size());
    for &s in w.symbols() {
        feed(s);
    }
    h
}

impl Device for DeviceModel {
    fn query(&self, w: &Word) -> std::result::Result<Decision, String> {
        if w.alphabet() != self.truth.alphabet() {
            return Err(format!("device for {} cannot answer a word over {}", self.truth.alphabet(), w.alphabet()));
        }
        let truth = Decision::from_bool(self.truth.contains(w));
        Ok(if self.flips(w) { truth.flipped() } else { truth })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CohortPolicy {
    /// Words of the target's length, cycling through ranks from the target.
    SameLength,
    /// The target and the words of the next ranks.
    RankNeighborhood,
}

impl FromStr for CohortPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "same-length" => Ok(CohortPolicy::SameLength),
            "rank-neighborhood" => Ok(CohortPolicy::RankNeighborhood),
            _ => Err(Error::Parse(format!("unknown cohort policy `{s}`"))),
        }
    }
}

impl fmt::Display for CohortPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CohortPolicy::SameLength => "same-length",
            CohortPolicy::RankNeighborhood => "rank-neighborhood",
        })
    }
}

/// `size` instances with `p` first.
pub fn build_cohort(p: &Word, size: usize, policy: CohortPolicy) -> Result<Vec<Word>> {
    if size == 0 {
        return Err(Error::Parse("cohort size must be at least 1".into()));
    }
    let a = p.alphabet();
    let r = rank_u64(p.symbols(), a.size())
        .ok_or_else(|| Error::Unsupported("cohort targets must have ranks below 2^64".into()))?;
    match policy {
        CohortPolicy::SameLength => {
            let n = p.len() as u32;
            let available = a.count_of_length(n).unwrap_or(u64::MAX);
            if size as u64 > available {
                return Err(Error::InsufficientData(format!(
                    "cohort of {size} requested but only {available} words have length {n}"
                )));
            }
            let first = a.first_rank_of_length_u64(n).expect("fits since the target rank does");
            let offset = r - first;
            Ok((0..size as u64).map(|i| word_of_rank_u64(first + (offset + i) % available, a)).collect())
        }
        CohortPolicy::RankNeighborhood => (0..size as u64)
            .map(|i| {
                r.checked_add(i)
                    .map(|x| word_of_rank_u64(x, a))
                    .ok_or_else(|| Error::Unsupported("rank overflow in cohort".into()))
            })
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub outcome: Decision,
    #[serde(serialize_with = "report::rational")]
    pub confidence: BigRational,
    #[serde(serialize_with = "report::rational")]
    pub fraction: BigRational,
}

impl Prediction {
    /// Predicts ACCEPT iff `a ≥ 1/2`, with confidence `max(a, 1 − a)`.
    pub fn from_fraction(a: BigRational) -> Self {
        let other = BigRational::one() - &a;
        let outcome = Decision::from_bool(a >= BigRational::new(BigInt::one(), BigInt::from(2)));
        let confidence = if a >= other { a.clone() } else { other };
        Prediction { outcome, confidence, fraction: a }
    }
}

/// Prediction from the curve slice at `g(w)`.
pub fn predict_with_confidence(r: &CurveReport, w: &Word, g: &Parameter) -> Result<Prediction> {
    let value = g.eval(w);
    let slice = r.slice(&value).ok_or_else(|| Error::MissingSlice(report::compact(&value)))?;
    Ok(Prediction::from_fraction(slice.fraction()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceRecord {
    pub index: usize,
    pub word: Word,
    pub prediction: Option<Prediction>,
    pub device: Option<Decision>,
    pub mismatch: bool,
    /// Why the instance was left out of the product.
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    /// Device answer for the target (element 0).
    pub s0: Option<Decision>,
    #[serde(serialize_with = "report::rational")]
    pub overall_confidence: BigRational,
    pub mismatches: usize,
    pub skipped: usize,
    pub records: Vec<InstanceRecord>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs the cohort through the predictor and the device, folding
/// `overall_confidence *= 1 − C_j` over mismatches in cohort order.
pub fn run_verification<D, P>(device: &D, cohort: &[Word], predictor: P) -> Result<VerificationReport>
where
    D: Device + ?Sized,
    P: Fn(&Word) -> Result<Prediction>,
{
    if cohort.is_empty() {
        return Err(Error::Parse("cohort must not be empty".into()));
    }
    let mut report = VerificationReport {
        s0: None,
        overall_confidence: BigRational::one(),
        mismatches: 0,
        skipped: 0,
        records: Vec::with_capacity(cohort.len()),
    };
    for (index, w) in cohort.iter().enumerate() {
        let answer = match device.query(w) {
            Ok(a) => a,
            Err(message) => {
                return Err(Error::Device {
                    message: format!("instance {index} ({w}): {message}"),
                    partial: Box::new(report),
                })
            }
        };
        if index == 0 {
            report.s0 = Some(answer);
        }
        let record = match predictor(w) {
            Ok(pred) => {
                let mismatch = pred.outcome != answer;
                if mismatch {
                    report.overall_confidence *= BigRational::one() - &pred.confidence;
                    report.mismatches += 1;
                }
                InstanceRecord {
                    index,
                    word: w.clone(),
                    prediction: Some(pred),
                    device: Some(answer),
                    mismatch,
                    skipped: None,
                }
            }
            Err(e) => {
                report.skipped += 1;
                InstanceRecord {
                    index,
                    word: w.clone(),
                    prediction: None,
                    device: Some(answer),
                    mismatch: false,
                    skipped: Some(e.to_string()),
                }
            }
        };
        report.records.push(record);
    }
    Ok(report)
}

/// A verification run described by `key=value` lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub lang: String,
    pub param: Option<String>,
    pub max_rank: Rank,
    pub target: String,
    pub cohort_size: usize,
    pub cohort_policy: CohortPolicy,
    pub flip_probability: BigRational,
    pub seed: u64,
}

impl Scenario {
    pub const KEYS: [&'static str; 9] =
        ["lang", "param", "max_rank", "max_len", "target", "cohort_size", "cohort_policy", "flip_probability", "seed"];

    /// Parses `key=value` lines; `#` starts a comment. Unknown keys are
    /// rejected.
    pub fn parse(text: &str) -> Result<Scenario> {
        let mut lang = None;
        let mut param = None;
        let mut max_rank = None;
        let mut max_len = None;
        let mut target = None;
        let mut cohort_size = 8usize;
        let mut cohort_policy = CohortPolicy::SameLength;
        let mut flip_probability = BigRational::zero();
        let mut seed = 0u64;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key=value, got `{line}`", i + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| Error::Parse(format!("line {}: invalid {what} `{value}`", i + 1));
            match key {
                "lang" => lang = Some(value.to_string()),
                "param" => param = Some(value.to_string()),
                "max_rank" => max_rank = Some(value.parse::<Rank>().map_err(|_| bad("max_rank"))?),
                "max_len" => max_len = Some(value.parse::<u32>().map_err(|_| bad("max_len"))?),
                "target" => target = Some(value.to_string()),
                "cohort_size" => cohort_size = value.parse().map_err(|_| bad("cohort_size"))?,
                "cohort_policy" => cohort_policy = value.parse()?,
                "flip_probability" => {
                    flip_probability = report::parse_rational(value).map_err(|_| bad("flip_probability"))?
                }
                "seed" => seed = value.parse().map_err(|_| bad("seed"))?,
                other => {
                    return Err(Error::Parse(format!(
                        "line {}: unknown key `{other}` (known: {})",
                        i + 1,
                        Self::KEYS.join(", ")
                    )))
                }
            }
        }
        let lang = lang.ok_or_else(|| Error::Parse("missing key `lang`".into()))?;
        let target = target.ok_or_else(|| Error::Parse("missing key `target`".into()))?;
        let alphabet = parse_language(&lang, None)?.alphabet();
        let max_rank = match (max_rank, max_len) {
            (Some(_), Some(_)) => return Err(Error::Parse("give either max_rank or max_len, not both".into())),
            (Some(r), None) => r,
            (None, Some(n)) => last_rank_of_length(alphabet, n),
            (None, None) => return Err(Error::Parse("missing key `max_rank` or `max_len`".into())),
        };
        Ok(Scenario { lang, param, max_rank, target, cohort_size, cohort_policy, flip_probability, seed })
    }
}

/// Curve, cohort, device and report for one scenario.
pub fn run_scenario(s: &Scenario, cap: Cap) -> Result<VerificationReport> {
    let lang = parse_language(&s.lang, None)?;
    let param_name = match &s.param {
        Some(p) => p.clone(),
        None => {
            let base = s.lang.split('@').next().unwrap_or("");
            base.trim_start_matches("not-")
                .parse::<crate::langs::BuiltinLanguage>()
                .map(|b| b.canonical_parameter().to_string())
                .map_err(|_| Error::Parse(format!("language `{}` has no default parameter; set `param`", s.lang)))?
        }
    };
    let g = builtin_parameter(&param_name)?;
    let report = curve(&lang, &g, &s.max_rank, cap)?;
    let target = Word::parse(&s.target, lang.alphabet())?;
    let cohort = build_cohort(&target, s.cohort_size, s.cohort_policy)?;
    let device = DeviceModel::new(lang, s.flip_probability.clone(), s.seed)?;
    run_verification(&device, &cohort, |w| predict_with_confidence(&report, w, &g))
}
