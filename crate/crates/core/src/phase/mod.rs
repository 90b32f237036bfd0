//! Parameters, slices and accepting-fraction curves, plus the
//! finite-window transition verdicts and the balance audits built on them.

pub mod audit;
pub mod interval;
pub mod poly;
pub mod transition;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::iso::PreservingIso;
use crate::langs::{kernel, LanguageSpec};
use crate::report;
use crate::roughp::HeuristicOutcome;
use crate::words::{enumerate_words, xi_transcode, Alphabet, Cap, Rank, Word};

pub use audit::{
    adequacy_audit, chi_bounds, density, naeu_audit, naeu_audit_with, naeu_monotonicity, sparsity_probe,
    AdequacyReport, ChiReport, NaeuReport, SparsityReport,
};
pub use poly::PolySpec;
pub use transition::{detect_transition, TransitionTolerances, TransitionVerdicts};

pub type ParamFn = Arc<dyn Fn(&Word) -> BigRational + Send + Sync>;

/// A total, exact-valued map from words to rationals.
#[derive(Clone)]
pub struct Parameter {
    name: String,
    eval: ParamFn,
}

impl fmt::Debug for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Parameter({})", self.name)
    }
}

impl Parameter {
    pub fn new<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&Word) -> BigRational + Send + Sync + 'static,
    {
        Parameter { name: name.into(), eval: Arc::new(eval) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, w: &Word) -> BigRational {
        (self.eval)(w)
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Built-in parameters:
/// - `signed-length`: `+|w|` when the kernel starts with `1`, else `−|w|`
/// - `majority-balance`: `#k − #1` in the kernel
/// - `length`: `|w|`
pub fn builtin_parameter(name: &str) -> Result<Parameter> {
    match name.trim() {
        "signed-length" => Ok(Parameter::new("signed-length", |w: &Word| {
            let len = w.len() as i64;
            if kernel(w).first() == Some(1) {
                int(len)
            } else {
                int(-len)
            }
        })),
        "majority-balance" => Ok(Parameter::new("majority-balance", |w: &Word| {
            let k = w.alphabet().size();
            let kern = kernel(w);
            let top = kern.symbols().iter().filter(|&&s| s == k).count() as i64;
            let low = kern.symbols().iter().filter(|&&s| s == 1).count() as i64;
            int(top - low)
        })),
        "length" => Ok(Parameter::new("length", |w: &Word| int(w.len() as i64))),
        other => Err(Error::UnknownParameter(other.to_string())),
    }
}

/// `γ'(x) = γ(forward(x))`: a parameter on the target side of `iso` pulled
/// back to its source side.
pub fn transfer_parameter(g: &Parameter, iso: &PreservingIso) -> Parameter {
    let inner = g.eval.clone();
    let dst = iso.dst();
    Parameter { name: format!("{}∘xi", g.name), eval: Arc::new(move |x: &Word| inner(&xi_transcode(x, dst))) }
}

/// `|S ∩ L| / |S|`.
pub fn accepting_fraction<'a, I>(lang: &LanguageSpec, set: I) -> Result<BigRational>
where
    I: IntoIterator<Item = &'a Word>,
{
    let (mut total, mut accepted) = (0u64, 0u64);
    for w in set {
        lang.decide(w)?;
        total += 1;
        if lang.contains(w) {
            accepted += 1;
        }
    }
    if total == 0 {
        return Err(Error::UndefinedFraction);
    }
    Ok(BigRational::new(BigInt::from(accepted), BigInt::from(total)))
}

/// Counts for the words sharing one parameter value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceStats {
    #[serde(serialize_with = "report::rational")]
    pub value: BigRational,
    pub total: u64,
    pub accepted: u64,
    pub undecided: u64,
}

impl SliceStats {
    pub fn fraction(&self) -> BigRational {
        BigRational::new(BigInt::from(self.accepted), BigInt::from(self.total))
    }
}

/// Per-slice statistics over the words of rank `≤ max_rank`.
#[derive(Clone, Debug, Serialize)]
pub struct CurveReport {
    pub language: String,
    pub parameter: String,
    #[serde(serialize_with = "report::display")]
    pub alphabet: Alphabet,
    #[serde(serialize_with = "report::display")]
    pub max_rank: Rank,
    pub corpus_size: u64,
    pub with_heuristic: bool,
    pub slices: Vec<SliceStats>,
    #[serde(serialize_with = "report::rational")]
    pub threshold: BigRational,
    /// Whether the fractions actually cross 1/2; otherwise the threshold is
    /// the midpoint of the value range.
    pub threshold_crossing: bool,
    pub verdicts: Option<TransitionVerdicts>,
}

impl CurveReport {
    pub fn slice(&self, value: &BigRational) -> Option<&SliceStats> {
        self.slices.binary_search_by(|s| s.value.cmp(value)).ok().map(|i| &self.slices[i])
    }

    /// Exact CSV: `value,total,accepted,undecided,fraction`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,total,accepted,undecided,fraction\n");
        for s in &self.slices {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                report::compact(&s.value),
                s.total,
                s.accepted,
                s.undecided,
                report::exact(&s.fraction())
            ));
        }
        out
    }
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// First value where the slice fractions cross 1/2, interpolated linearly
/// between neighbouring slices; the midpoint of the value range when the
/// fractions never cross.
pub fn estimate_threshold(slices: &[SliceStats]) -> (BigRational, bool) {
    let h = half();
    if let Some(s) = slices.iter().find(|s| s.fraction() == h) {
        return (s.value.clone(), true);
    }
    for pair in slices.windows(2) {
        let (f0, f1) = (pair[0].fraction(), pair[1].fraction());
        if (f0 < h) != (f1 < h) {
            let t = &pair[0].value + (&h - &f0) * (&pair[1].value - &pair[0].value) / (&f1 - &f0);
            return (t, true);
        }
    }
    let mid = match (slices.first(), slices.last()) {
        (Some(a), Some(b)) => (&a.value + &b.value) * &h,
        _ => BigRational::zero(),
    };
    (mid, false)
}

/// Groups words by parameter value. With a heuristic, `accepted` counts
/// ACCEPT answers and `undecided` counts BOTTOM answers; without one,
/// `accepted` counts members.
pub fn slice_words<I, H>(lang: &LanguageSpec, g: &Parameter, words: I, heuristic: Option<H>) -> Result<Vec<SliceStats>>
where
    I: IntoIterator<Item = Word>,
    H: Fn(&Word) -> Result<HeuristicOutcome>,
{
    let mut map: BTreeMap<BigRational, SliceStats> = BTreeMap::new();
    for w in words {
        let value = g.eval(&w);
        let (acc, und) = match &heuristic {
            Some(h) => match h(&w)? {
                HeuristicOutcome::Accept => (1, 0),
                HeuristicOutcome::Reject => (0, 0),
                HeuristicOutcome::Bottom => (0, 1),
            },
            None => (lang.contains(&w) as u64, 0),
        };
        let entry =
            map.entry(value.clone()).or_insert_with(|| SliceStats { value, total: 0, accepted: 0, undecided: 0 });
        entry.total += 1;
        entry.accepted += acc;
        entry.undecided += und;
    }
    Ok(map.into_values().collect())
}

fn build_report(
    lang: &LanguageSpec,
    g: &Parameter,
    max_rank: &Rank,
    slices: Vec<SliceStats>,
    with_heuristic: bool,
) -> CurveReport {
    let corpus_size = slices.iter().map(|s| s.total).sum();
    let (threshold, threshold_crossing) = estimate_threshold(&slices);
    CurveReport {
        language: lang.name().to_string(),
        parameter: g.name().to_string(),
        alphabet: lang.alphabet(),
        max_rank: max_rank.clone(),
        corpus_size,
        with_heuristic,
        slices,
        threshold,
        threshold_crossing,
        verdicts: None,
    }
}

/// Accepting-fraction curve of `lang` over all words of rank `≤ max_rank`.
pub fn curve(lang: &LanguageSpec, g: &Parameter, max_rank: &Rank, cap: Cap) -> Result<CurveReport> {
    let words = enumerate_words(lang.alphabet(), max_rank, cap)?;
    let slices = slice_words(lang, g, words, None::<fn(&Word) -> Result<HeuristicOutcome>>)?;
    Ok(build_report(lang, g, max_rank, slices, false))
}

/// Like [`curve`], but counts the answers of an attached heuristic.
pub fn curve_with_heuristic<H>(
    lang: &LanguageSpec,
    g: &Parameter,
    max_rank: &Rank,
    cap: Cap,
    heuristic: H,
) -> Result<CurveReport>
where
    H: Fn(&Word) -> Result<HeuristicOutcome>,
{
    let words = enumerate_words(lang.alphabet(), max_rank, cap)?;
    let slices = slice_words(lang, g, words, Some(heuristic))?;
    Ok(build_report(lang, g, max_rank, slices, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langs::{builtin_language, complement, universal, BuiltinLanguage};
    use crate::words::{last_rank_of_length, words_of_length};

    fn a(k: u32) -> Alphabet {
        Alphabet::new(k).unwrap()
    }

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn fraction_examples() {
        let l = builtin_language(BuiltinLanguage::FirstSymbol, a(3));
        let member = l.witnesses().unwrap().member.clone();
        assert_eq!(accepting_fraction(&l, [&member]).unwrap(), r(1, 1));
        let len2: Vec<_> = words_of_length(a(3), 2, Cap::DEFAULT).unwrap().collect();
        // (1,1) and (1,3) have kernels starting with 1; (1,2) is the bare separator
        assert_eq!(accepting_fraction(&l, &len2).unwrap(), r(2, 9));
        let c = complement(&l);
        assert_eq!(accepting_fraction(&l, &len2).unwrap() + accepting_fraction(&c, &len2).unwrap(), r(1, 1));
        assert!(matches!(accepting_fraction(&l, []), Err(Error::UndefinedFraction)));
    }

    #[test]
    fn signed_length_curve() {
        let l = builtin_language(BuiltinLanguage::SignedLengthDemo, a(3));
        let g = builtin_parameter("signed-length").unwrap();
        let rep = curve(&l, &g, &last_rank_of_length(a(3), 8), Cap::DEFAULT).unwrap();
        assert_eq!(rep.slice(&r(2, 1)).unwrap().fraction(), r(1, 1));
        assert_eq!(rep.slice(&r(-2, 1)).unwrap().fraction(), r(0, 1));
        // ε sits alone at 0 and is rejected, so the crossing is between 0 and 1
        assert_eq!(rep.threshold, r(1, 2));
        assert!(rep.threshold_crossing);
        assert_eq!(rep.corpus_size, rep.slices.iter().map(|s| s.total).sum::<u64>());
        assert!(rep.to_csv().lines().any(|line| line.starts_with("2,") && line.ends_with(",0,1/1")));
    }

    #[test]
    fn universal_has_no_crossing() {
        let l = universal(a(2));
        let g = builtin_parameter("signed-length").unwrap();
        let rep = curve(&l, &g, &last_rank_of_length(a(2), 4), Cap::DEFAULT).unwrap();
        assert!(!rep.threshold_crossing);
        assert_eq!(rep.threshold, r(0, 1));
    }

    #[test]
    fn unknown_parameter() {
        assert!(matches!(builtin_parameter("nope"), Err(Error::UnknownParameter(_))));
    }

    #[test]
    fn transferred_parameter_on_empty_word() {
        let g = builtin_parameter("signed-length").unwrap();
        let iso = crate::iso::build_xi(a(3));
        let gp = transfer_parameter(&g, &iso);
        assert_eq!(gp.eval(&Word::empty(a(3))), g.eval(&Word::empty(a(4))));
    }
}
