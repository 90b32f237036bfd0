//! Self-checks over the whole library at a small, fixed scale.
//!
//! Each check exercises one structural property end to end and reports a
//! verdict instead of panicking, so callers can print a matrix.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::Serialize;

use crate::error::Result;
use crate::iso::{build_xi, conjugate_language, transfer_padding};
use crate::langs::{builtin_language, complement, BuiltinLanguage, Decision, LanguageSpec};
use crate::phase::audit::{derivative_condition, scaled_monotonicity};
use crate::phase::{builtin_parameter, chi_bounds, curve, transfer_parameter, PolySpec};
use crate::protocol::{run_verification, Device, Prediction};
use crate::roughp::{
    b_set, bottom_fraction, build_phi_csb, build_phi_oracle, default_csb_injections, errorless_heuristic,
    farago_target, Bijection, HeuristicOutcome, Identity,
};
use crate::words::{
    alpha_unrank, enumerate_words, last_rank_of_length, theta_rank, words_of_length, words_up_to_length, Alphabet, Cap,
    Rank, Word,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    /// Short statement of the property being checked.
    pub anchor: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn label(&self) -> &'static str {
        if self.pass {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

/// Sizes used by [`run_suite`]. The defaults finish in seconds.
#[derive(Clone, Debug)]
pub struct SuiteScale {
    pub codec_max_rank: u64,
    pub iso_max_rank: u64,
    pub pad_max_rank: u64,
    pub heuristic_max_len: u32,
    pub curve_max_len: u32,
    pub chi_max_n: u32,
    pub csb_max_rank: u64,
    pub csb_max_n: u32,
    pub analytic_max_n: u64,
}

impl Default for SuiteScale {
    fn default() -> Self {
        SuiteScale {
            codec_max_rank: 5_000,
            iso_max_rank: 2_000,
            pad_max_rank: 60,
            heuristic_max_len: 10,
            curve_max_len: 6,
            chi_max_n: 5,
            csb_max_rank: 2_000,
            csb_max_n: 8,
            analytic_max_n: 40,
        }
    }
}

type Outcome = Result<(bool, String)>;

fn alphabet(k: u32) -> Alphabet {
    Alphabet::new(k).expect("builtin alphabet sizes are valid")
}

fn builtins(k: u32) -> Vec<LanguageSpec> {
    BuiltinLanguage::ALL.iter().map(|&b| builtin_language(b, alphabet(k))).collect()
}

fn first_failure<T: std::fmt::Display>(ok: bool, count: u64, bad: Option<T>, what: &str) -> (bool, String) {
    match bad {
        Some(b) => (false, format!("{what} fails at {b}")),
        None => (ok, format!("{count} cases, no failures")),
    }
}

fn codec(scale: &SuiteScale, cap: Cap) -> Outcome {
    let mut bad = None;
    let mut count = 0u64;
    for k in 2..=5 {
        let a = alphabet(k);
        for (r, w) in enumerate_words(a, &Rank::from(scale.codec_max_rank), cap)?.enumerate() {
            count += 1;
            let rank = theta_rank(&w);
            if rank != Rank::from(r as u64) || alpha_unrank(&rank, a) != w {
                bad = Some(format!("k={k} rank {r}"));
                break;
            }
        }
    }
    Ok(first_failure(true, count, bad, "round trip"))
}

fn iso_preservation(scale: &SuiteScale, cap: Cap) -> Outcome {
    let src = alphabet(3);
    let iso = build_xi(src);
    let inv = iso.inverse();
    let langs = builtins(3);
    let conj: Vec<_> = langs.iter().map(|l| conjugate_language(l, &iso)).collect::<Result<_>>()?;
    let mut count = 0u64;
    for w in enumerate_words(src, &Rank::from(scale.iso_max_rank), cap)? {
        let v = iso.forward(&w)?;
        if theta_rank(&v) != theta_rank(&w) || iso.backward(&v)? != w || inv.forward(&v)? != w {
            return Ok((false, format!("rank or round trip fails at {w}")));
        }
        for (l, h) in langs.iter().zip(&conj) {
            if l.contains(&w) != h.contains(&v) || h.contains(&v) != l.contains(&iso.backward(&v)?) {
                return Ok((false, format!("membership of {} differs at {w}", l.name())));
            }
            count += 1;
        }
    }
    Ok((true, format!("{count} word-language pairs, ranks preserved both ways")))
}

fn padding_transfer(scale: &SuiteScale, cap: Cap) -> Outcome {
    let l = builtin_language(BuiltinLanguage::FirstSymbol, alphabet(3));
    let iso = build_xi(l.alphabet());
    let h = conjugate_language(&l, &iso)?;
    let padder = transfer_padding(&l, &iso)?;
    let ys: Vec<Word> = enumerate_words(iso.dst(), &Rank::from(scale.pad_max_rank), cap)?.collect();
    let mut count = 0u64;
    for y in &ys {
        for z in &ys {
            let p = (padder.pad)(y, z);
            if (padder.dec)(&p) != *z {
                return Ok((false, format!("dec(pad({y}, {z})) != {z}")));
            }
            if h.contains(&p) != h.contains(y) {
                return Ok((false, format!("membership changes for pad({y}, {z})")));
            }
            count += 1;
        }
    }
    Ok((true, format!("{count} pairs over k=4")))
}

fn pad_image(cap: Cap) -> Outcome {
    let l = builtin_language(BuiltinLanguage::FirstSymbol, alphabet(3));
    let x = Word::new(l.alphabet(), vec![2, 1])?;
    let mut images = BTreeSet::new();
    for y in words_up_to_length(l.alphabet(), 2, cap)? {
        images.insert(l.pad(&x, &y)?);
    }
    let mut injective = BTreeSet::new();
    let mut all = 0u64;
    for y in enumerate_words(l.alphabet(), &Rank::from(1_000u64), cap)? {
        injective.insert(l.pad(&x, &y)?);
        all += 1;
    }
    let ok = images.len() == 13 && injective.len() as u64 == all;
    Ok((ok, format!("{} images for |y| <= 2 (expected 13); {} distinct of {all}", images.len(), injective.len())))
}

fn complement_duality(cap: Cap) -> Outcome {
    for l in builtins(3) {
        let c = complement(&l);
        let back = complement(&c);
        for w in words_up_to_length(l.alphabet(), 4, cap)? {
            if c.contains(&w) == l.contains(&w) || back.contains(&w) != l.contains(&w) || back.name() != l.name() {
                return Ok((false, format!("{} at {w}", l.name())));
            }
        }
    }
    Ok((true, "complement flips membership and is an involution".into()))
}

fn errorless(scale: &SuiteScale, cap: Cap) -> Outcome {
    let l = builtin_language(BuiltinLanguage::OmegaParity, alphabet(2));
    let t = farago_target(&l);
    let mut count = 0u64;
    for w in words_up_to_length(l.alphabet(), scale.heuristic_max_len, cap)? {
        let member = t.target.contains(&w);
        let out = errorless_heuristic(&t, &w);
        let wrong = match out {
            HeuristicOutcome::Accept => !member,
            HeuristicOutcome::Reject => member,
            HeuristicOutcome::Bottom => !w.is_square(),
        };
        if wrong {
            return Ok((false, format!("heuristic answers {out} on {w}")));
        }
        count += 1;
    }
    let phi = Identity(l.alphabet());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for n in (0..=scale.heuristic_max_len).step_by(2) {
        let f = bottom_fraction(&t, &phi, n, cap)?;
        if f != Pow::pow(&half, n / 2) {
            return Ok((false, format!("bottom fraction {f} at n={n}")));
        }
    }
    Ok((true, format!("{count} words; bottom fraction 2^(-n/2) at every even n")))
}

fn phase_transfer(scale: &SuiteScale, cap: Cap) -> Outcome {
    let l = builtin_language(BuiltinLanguage::SignedLengthDemo, alphabet(3));
    let iso = build_xi(l.alphabet());
    let h = conjugate_language(&l, &iso)?;
    let g = builtin_parameter("signed-length")?;
    let g_pulled = transfer_parameter(&g, &iso);
    let max = last_rank_of_length(l.alphabet(), scale.curve_max_len);
    let left = curve(&l, &g_pulled, &max, cap)?;
    let right = curve(&h, &g, &max, cap)?;
    if left.slices != right.slices {
        return Ok((false, "slice tables differ".into()));
    }
    Ok((true, format!("{} slices identical", left.slices.len())))
}

fn chi(scale: &SuiteScale, cap: Cap) -> Outcome {
    let l = builtin_language(BuiltinLanguage::OmegaParity, alphabet(3));
    let t = farago_target(&l);
    let iso = build_xi(l.alphabet());
    let window = last_rank_of_length(iso.dst(), scale.chi_max_n);
    let phi = build_phi_oracle(&l, &t.target, &window, cap)?;
    let mut worst = String::new();
    for n in 0..=scale.chi_max_n {
        let r = chi_bounds(&iso, &phi, n, cap)?;
        if n == 0 && (r.chi_low, r.chi_upp) != (0, 0) {
            return Ok((false, format!("n=0 gives ({}, {})", r.chi_low, r.chi_upp)));
        }
        if !r.pass() {
            return Ok((
                false,
                format!(
                    "n={n}: chi_upp={} bound_ok={} interior_full={} boundary_ok={} union_exact={}",
                    r.chi_upp, r.bound_ok, r.interior_full, r.boundary_ok, r.union_exact
                ),
            ));
        }
        worst = format!("n={n}: chi_upp={}", r.chi_upp);
    }
    Ok((true, format!("bound, filling and union hold for n <= {}; last {worst}", scale.chi_max_n)))
}

fn monotonicity(scale: &SuiteScale) -> Outcome {
    let good: PolySpec = "n+8".parse()?;
    let bad: PolySpec = "10n+1".parse()?;
    let range = 0..=scale.analytic_max_n;
    let d = derivative_condition(3, &good, range.clone());
    let s = scaled_monotonicity(3, &good, range.clone());
    let neg = derivative_condition(3, &bad, range);
    let ok = d.pass && s.pass && neg.first_failure == Some(0);
    Ok((ok, format!("n+8: derivative {} scaled {}; 10n+1 first failure {:?}", d.pass, s.pass, neg.first_failure)))
}

fn non_sparsity(cap: Cap) -> Outcome {
    let cube: PolySpec = "n^3".parse()?;
    let mut out = Vec::new();
    for l in builtins(3) {
        let r = crate::phase::sparsity_probe(&l, &cube, 0..=8, cap)?;
        match r.first_exceeded {
            Some(n) => out.push(format!("{} at n={n}", l.name())),
            None => return Ok((false, format!("{} stays below n^3 up to n=8", l.name()))),
        }
    }
    Ok((true, out.join(", ")))
}

fn csb(scale: &SuiteScale, cap: Cap) -> Outcome {
    let l = builtin_language(BuiltinLanguage::OmegaParity, alphabet(2));
    let t = farago_target(&l);
    let (f, g) = default_csb_injections(&l)?;
    let phi = build_phi_csb(l.alphabet(), f, g, crate::roughp::DEFAULT_STEP_BUDGET);
    for x in enumerate_words(l.alphabet(), &Rank::from(scale.csb_max_rank), cap)? {
        let y = phi.forward(&x)?;
        if phi.backward(&y)? != x {
            return Ok((false, format!("backward(forward({x})) != {x}")));
        }
        if l.contains(&x) != t.target.contains(&y) {
            return Ok((false, format!("class changes at {x}")));
        }
        let x2 = phi.backward(&x)?;
        if phi.forward(&x2)? != x {
            return Ok((false, format!("forward(backward({x})) != {x}")));
        }
    }
    let window = last_rank_of_length(l.alphabet(), scale.csb_max_n);
    let oracle = build_phi_oracle(&l, &t.target, &window, cap)?;
    for n in 0..=scale.csb_max_n {
        let a = b_set(&phi, n, cap)?;
        let b = b_set(&oracle, n, cap)?;
        let ma = a.iter().filter(|x| l.contains(x)).count();
        let mb = b.iter().filter(|x| l.contains(x)).count();
        if a.len() != b.len() || ma != mb {
            return Ok((false, format!("n={n}: sizes {}/{} members {ma}/{mb}", a.len(), b.len())));
        }
    }
    Ok((
        true,
        format!(
            "bijective and class-preserving up to rank {}; B-set counts agree for n <= {}",
            scale.csb_max_rank, scale.csb_max_n
        ),
    ))
}

struct Fixed(Decision);

impl Device for Fixed {
    fn query(&self, _: &Word) -> std::result::Result<Decision, String> {
        Ok(self.0)
    }
}

fn protocol() -> Outcome {
    let a = alphabet(2);
    let cohort = vec![Word::new(a, vec![1])?, Word::new(a, vec![2])?];
    let conf = |p: i64, q: i64| BigRational::new(BigInt::from(p), BigInt::from(q));
    let agree = run_verification(&Fixed(Decision::Accept), &cohort, |_| Ok(Prediction::from_fraction(conf(1, 1))))?;
    let single =
        run_verification(&Fixed(Decision::Reject), &cohort[..1], |_| Ok(Prediction::from_fraction(conf(4, 5))))?;
    let double = run_verification(&Fixed(Decision::Reject), &cohort, |_| Ok(Prediction::from_fraction(conf(1, 1))))?;
    let ok = agree.overall_confidence == conf(1, 1)
        && agree.s0 == Some(Decision::Accept)
        && single.overall_confidence == conf(1, 5)
        && double.overall_confidence == conf(0, 1);
    Ok((
        ok,
        format!(
            "no mismatch {}, one mismatch {}, two certain mismatches {}",
            crate::report::exact(&agree.overall_confidence),
            crate::report::exact(&single.overall_confidence),
            crate::report::exact(&double.overall_confidence)
        ),
    ))
}

fn words_per_length(cap: Cap) -> Outcome {
    for k in 2..=4 {
        let a = alphabet(k);
        for n in 0..=5 {
            let got = words_of_length(a, n, cap)?.count() as u64;
            if Some(got) != a.count_of_length(n) {
                return Ok((false, format!("k={k} n={n}: {got} words")));
            }
        }
    }
    Ok((true, "k^n words of each length n".into()))
}

fn run(name: &'static str, anchor: &'static str, f: impl FnOnce() -> Outcome) -> CheckResult {
    let (pass, detail) = match f() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    CheckResult { name, anchor, pass, detail }
}

/// Runs every check at `scale`.
pub fn run_suite(scale: &SuiteScale, cap: Cap) -> Vec<CheckResult> {
    vec![
        run("codec", "rank and unrank are mutually inverse", || codec(scale, cap)),
        run("length-classes", "each length class holds k^n words", || words_per_length(cap)),
        run("iso-preservation", "transcoding preserves rank and membership both ways", || iso_preservation(scale, cap)),
        run("padding-transfer", "transferred padding decodes its payload and keeps membership", || {
            padding_transfer(scale, cap)
        }),
        run("pad-image", "padding is injective in the payload; 13 images for k=3, |y| <= 2", || pad_image(cap)),
        run("complement", "complement flips membership and is an involution", || complement_duality(cap)),
        run("errorless", "the square-parity heuristic never errs and gives up only on squares", || {
            errorless(scale, cap)
        }),
        run("phase-transfer", "curves agree under transcoding with the pulled-back parameter", || {
            phase_transfer(scale, cap)
        }),
        run("chi-bound", "conjugated B-sets fill whole Σ-lengths within 2n·log_k(k+1)", || chi(scale, cap)),
        run("monotonicity", "the derivative condition implies the scaled polynomial decays", || monotonicity(scale)),
        run("non-sparsity", "paddable built-ins over k=3 outgrow n^3", || non_sparsity(cap)),
        run("csb", "the back-and-forth bijection is class-preserving and matches the oracle's B-set counts", || {
            csb(scale, cap)
        }),
        run("protocol", "confidence is the product of 1 - C over mismatches", protocol),
    ]
}

/// Whether every check passed.
pub fn all_pass(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let results = run_suite(&SuiteScale::default(), Cap::DEFAULT);
        for r in &results {
            assert!(r.pass, "{}: {}", r.name, r.detail);
        }
        assert_eq!(results.len(), 13);
    }
}
