//! Acceptance gate. Each test prints one `criterion N: PASS|FAIL` line to
//! stderr (uncaptured) and then asserts the same verdict.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use phaselab::phase::audit::{derivative_condition, scaled_monotonicity};
use phaselab::phase::{
    builtin_parameter, chi_bounds, curve, detect_transition, sparsity_probe, transfer_parameter, ChiReport,
    CurveReport, PolySpec, TransitionTolerances,
};
use phaselab::protocol::{run_scenario, run_verification, Device, Prediction, Scenario};
use phaselab::roughp::Identity;
use phaselab::{
    alpha_unrank, bottom_fraction, build_phi_csb, build_phi_oracle, build_xi, builtin_language, conjugate_language,
    enumerate_words, errorless_heuristic, farago_target, theta_rank, transfer_padding, Alphabet, Bijection,
    BuiltinLanguage, Cap, Decision, HeuristicOutcome, Rank, Word,
};

fn report(n: u32, pass: bool, detail: &str) {
    let label = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {n}: {label} ({detail})");
    assert!(pass, "criterion {n}: {detail}");
}

fn a(k: u32) -> Alphabet {
    Alphabet::new(k).unwrap()
}

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

fn last_rank(k: u32, n: u32) -> Rank {
    phaselab::words::last_rank_of_length(a(k), n)
}

#[test]
fn criterion_01_codec_bijection() {
    let start = Instant::now();
    let mut failures = 0u64;
    let mut checked = 0u64;
    for k in 2..=5 {
        for r in 0..=10_000u64 {
            let rank = Rank::from(r);
            let w = alpha_unrank(&rank, a(k));
            if theta_rank(&w) != rank || alpha_unrank(&theta_rank(&w), a(k)) != w {
                failures += 1;
            }
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    report(
        1,
        failures == 0 && elapsed < Duration::from_secs(5),
        &format!("{checked} ranks, {failures} failures, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_02_xi_preservation() {
    let iso = build_xi(a(3));
    let langs: Vec<_> = BuiltinLanguage::ALL.iter().map(|&b| builtin_language(b, a(3))).collect();
    let conj: Vec<_> = langs.iter().map(|l| conjugate_language(l, &iso).unwrap()).collect();
    let mut failures = 0u64;
    for w in enumerate_words(a(3), &Rank::from(10_000u64), Cap::DEFAULT).unwrap() {
        let v = iso.forward(&w).unwrap();
        if theta_rank(&v) != theta_rank(&w) || iso.backward(&v).unwrap() != w {
            failures += 1;
        }
        let back = iso.backward(&v).unwrap();
        for (l, h) in langs.iter().zip(&conj) {
            if l.contains(&w) != h.contains(&v) || h.contains(&v) != l.contains(&back) {
                failures += 1;
            }
        }
    }
    report(2, failures == 0, &format!("10001 words x {} languages, {failures} failures", langs.len()));
}

#[test]
fn criterion_03_padding_transfer() {
    let l = builtin_language(BuiltinLanguage::FirstSymbol, a(3));
    let iso = build_xi(a(3));
    let h = conjugate_language(&l, &iso).unwrap();
    let padder = transfer_padding(&l, &iso).unwrap();
    let ys: Vec<Word> = enumerate_words(a(4), &Rank::from(200u64), Cap::DEFAULT).unwrap().collect();
    let mut failures = 0u64;
    for y in &ys {
        for z in &ys {
            let p = (padder.pad)(y, z);
            if (padder.dec)(&p) != *z || h.contains(&p) != h.contains(y) {
                failures += 1;
            }
        }
    }
    report(3, failures == 0, &format!("{} pairs, {failures} failures", ys.len() * ys.len()));
}

#[test]
fn criterion_04_errorless_heuristic() {
    let start = Instant::now();
    let l = builtin_language(BuiltinLanguage::OmegaParity, a(2));
    let t = farago_target(&l);
    let mut errors = 0u64;
    let mut words = 0u64;
    let mut bottoms = [0u64; 15];
    for n in 0..=14u32 {
        for w in phaselab::words::words_of_length(a(2), n, Cap::DEFAULT).unwrap() {
            words += 1;
            let member = t.target.contains(&w);
            let out = errorless_heuristic(&t, &w);
            match out {
                HeuristicOutcome::Accept if !member => errors += 1,
                HeuristicOutcome::Reject if member => errors += 1,
                HeuristicOutcome::Bottom if !w.is_square() => errors += 1,
                HeuristicOutcome::Bottom => bottoms[n as usize] += 1,
                _ => {}
            }
        }
    }
    let phi = Identity(a(2));
    let mut bound_ok = true;
    for n in (0..=14u32).step_by(2) {
        let f = bottom_fraction(&t, &phi, n, Cap::DEFAULT).unwrap();
        // f ≤ (1/√2)^n  ⟺  f² ≤ 2^-n, and the count is exactly 2^(n/2).
        let bound_sq = q(1, 1 << n);
        let identity = f == q(1 << (n / 2), 1 << n) && bottoms[n as usize] == 1 << (n / 2);
        if &f * &f > bound_sq || !identity {
            bound_ok = false;
        }
    }
    let elapsed = start.elapsed();
    report(
        4,
        errors == 0 && bound_ok && elapsed < Duration::from_secs(60),
        &format!("{words} words, {errors} errors, bound and counting identity {bound_ok}, {elapsed:.2?}"),
    );
}

/// χ reports for OMEGA_PARITY@3 against its target, n = 0..=12, through an
/// oracle that covers every rank of Π^{≤12}.
fn chi_reports() -> &'static Vec<ChiReport> {
    static CELL: OnceLock<Vec<ChiReport>> = OnceLock::new();
    CELL.get_or_init(|| {
        let l = builtin_language(BuiltinLanguage::OmegaParity, a(3));
        let t = farago_target(&l);
        let iso = build_xi(a(3));
        let window = last_rank(4, 12);
        let cap = Cap::new(100_000_000);
        let phi = build_phi_oracle(&l, &t.target, &window, cap).unwrap();
        assert!(phi.coverage().complete(), "{:?}", phi.coverage());
        (0..=12).map(|n| chi_bounds(&iso, &phi, n, cap).unwrap()).collect()
    })
}

#[test]
fn criterion_05_chi_bound() {
    let reports = chi_reports();
    let zero = &reports[0];
    let base = (zero.chi_low, zero.chi_upp) == (0, 0);
    let bad: Vec<u32> = reports.iter().filter(|r| !r.bound_ok).map(|r| r.n).collect();
    let top = reports.last().unwrap();
    report(
        5,
        base && bad.is_empty(),
        &format!(
            "n=0 gives ({}, {}); bound violated at {bad:?}; n=12 chi_upp={} vs bound ~{:.4}",
            zero.chi_low,
            zero.chi_upp,
            top.chi_upp,
            top.bound.to_f64()
        ),
    );
}

#[test]
fn criterion_06_filling_relation() {
    let reports = chi_reports();
    let bad: Vec<u32> =
        reports.iter().filter(|r| !(r.interior_full && r.boundary_ok && r.union_exact)).map(|r| r.n).collect();
    let blocks: usize = reports.iter().map(|r| r.blocks.len()).sum();
    report(6, bad.is_empty(), &format!("{blocks} blocks over n=0..=12, failing n: {bad:?}"));
}

fn window_sizes(r: &CurveReport) -> BTreeMap<BigRational, u64> {
    let one = BigRational::one();
    r.slices
        .iter()
        .map(|s| {
            let hi = &s.value + &one;
            let m = r.slices.iter().filter(|x| x.value >= s.value && x.value <= hi).map(|x| x.total).sum();
            (s.value.clone(), m)
        })
        .collect()
}

#[test]
fn criterion_07_phase_transfer() {
    let l = builtin_language(BuiltinLanguage::SignedLengthDemo, a(3));
    let iso = build_xi(a(3));
    let h = conjugate_language(&l, &iso).unwrap();
    let g = builtin_parameter("signed-length").unwrap();
    let g_pulled = transfer_parameter(&g, &iso);
    let max = last_rank(3, 8);
    let left = curve(&l, &g_pulled, &max, Cap::DEFAULT).unwrap();
    let right = curve(&h, &g, &max, Cap::DEFAULT).unwrap();
    let same = left.slices == right.slices;
    let windows = window_sizes(&left) == window_sizes(&right);
    report(
        7,
        same && windows,
        &format!(
            "{} slices over {} words, slices equal {same}, windows equal {windows}",
            left.slices.len(),
            left.corpus_size
        ),
    );
}

#[test]
fn criterion_08_transition_verdicts() {
    let tol = TransitionTolerances::default();
    let signed = builtin_language(BuiltinLanguage::SignedLengthDemo, a(3));
    let g = builtin_parameter("signed-length").unwrap();
    let c = curve(&signed, &g, &last_rank(3, 8), Cap::DEFAULT).unwrap();
    let v = detect_transition(&c, &tol).unwrap();

    let all = phaselab::langs::universal(a(3));
    let u = detect_transition(&curve(&all, &g, &last_rank(3, 8), Cap::DEFAULT).unwrap(), &tol).unwrap();

    let km = builtin_language(BuiltinLanguage::KernelMajority, a(3));
    let gm = builtin_parameter(BuiltinLanguage::KernelMajority.canonical_parameter()).unwrap();
    let m = detect_transition(&curve(&km, &gm, &last_rank(3, 8), Cap::DEFAULT).unwrap(), &tol).unwrap();

    report(
        8,
        v.all_pass() && !u.cond2.pass && !m.cond3.pass,
        &format!(
            "signed-length {}/{}/{}; always-accept cond2 {}; kernel-majority cond3 {}",
            v.cond1.label(),
            v.cond2.label(),
            v.cond3.label(),
            u.cond2.label(),
            m.cond3.label()
        ),
    );
}

#[test]
fn criterion_09_monotonicity() {
    let good: PolySpec = "n+4".parse().unwrap();
    let bad: PolySpec = "10n+1".parse().unwrap();
    let d = derivative_condition(3, &good, 0..=40);
    let s = scaled_monotonicity(3, &good, 0..=40);
    let neg = derivative_condition(3, &bad, 0..=40);
    report(
        9,
        d.pass && s.pass && neg.first_failure == Some(0),
        &format!(
            "n+4 derivative first failure {:?}, scaled first increase {:?}; 10n+1 first failure {:?}",
            d.first_failure, s.first_increase, neg.first_failure
        ),
    );
}

#[test]
fn criterion_10_pad_image_count() {
    let l = builtin_language(BuiltinLanguage::FirstSymbol, a(3));
    let x = Word::new(a(3), vec![2, 1]).unwrap();
    let images: BTreeSet<Word> =
        phaselab::words::words_up_to_length(a(3), 2, Cap::DEFAULT).unwrap().map(|y| l.pad(&x, &y).unwrap()).collect();
    let ys: Vec<Word> = enumerate_words(a(3), &Rank::from(1_000u64), Cap::DEFAULT).unwrap().collect();
    let distinct: BTreeSet<Word> = ys.iter().map(|y| l.pad(&x, y).unwrap()).collect();
    report(
        10,
        images.len() == 13 && distinct.len() == ys.len(),
        &format!("{} images for |y| <= 2; {} distinct of {}", images.len(), distinct.len(), ys.len()),
    );
}

#[test]
fn criterion_11_non_sparsity() {
    let cube: PolySpec = "n^3".parse().unwrap();
    let mut lines = Vec::new();
    let mut pass = true;
    for k in [2, 3] {
        for b in BuiltinLanguage::ALL {
            let l = builtin_language(b, a(k));
            let r = sparsity_probe(&l, &cube, 0..=8, Cap::DEFAULT).unwrap();
            if r.first_exceeded.is_none() {
                pass = false;
                let last = r.rows.last().unwrap();
                lines.push(format!("{} density {} at n=8", l.name(), last.density));
            }
        }
    }
    let detail =
        if lines.is_empty() { "all exceed n^3".to_string() } else { format!("below n^3: {}", lines.join(", ")) };
    report(11, pass, &detail);
}

struct Always(Decision);

impl Device for Always {
    fn query(&self, _: &Word) -> Result<Decision, String> {
        Ok(self.0)
    }
}

#[test]
fn criterion_12_protocol() {
    let clean = Scenario::parse(
        "lang=signed-length-demo@k=3\nmax_len=6\ntarget=3113\ncohort_size=12\nflip_probability=0\nseed=5\n",
    )
    .unwrap();
    let r = run_scenario(&clean, Cap::DEFAULT).unwrap();
    let l = builtin_language(BuiltinLanguage::SignedLengthDemo, a(3));
    let truth = Decision::from_bool(l.contains(&Word::parse("3113", a(3)).unwrap()));
    let clean_ok = r.overall_confidence == q(1, 1) && r.s0 == Some(truth) && r.skipped == 0;

    let one = vec![Word::new(a(3), vec![1]).unwrap()];
    let forced = run_verification(&Always(Decision::Reject), &one, |_| Ok(Prediction::from_fraction(q(4, 5)))).unwrap();
    let forced_ok = forced.overall_confidence == q(1, 5) && forced.mismatches == 1;

    let noisy = Scenario::parse(
        "lang=signed-length-demo@k=3\nmax_len=6\ntarget=2113\ncohort_size=40\nflip_probability=1/3\nseed=99\n",
    )
    .unwrap();
    let x = run_scenario(&noisy, Cap::DEFAULT).unwrap().to_json();
    let y = run_scenario(&noisy, Cap::DEFAULT).unwrap().to_json();
    let reproducible = x == y && !x.is_empty();
    report(
        12,
        clean_ok && forced_ok && reproducible && !forced.overall_confidence.is_zero(),
        &format!(
            "clean confidence {}, s0 {:?}; forced mismatch {}; reproducible {reproducible}",
            phaselab::report::exact(&r.overall_confidence),
            r.s0,
            phaselab::report::exact(&forced.overall_confidence)
        ),
    );
}

#[test]
fn criterion_13_csb_bijection() {
    let l = builtin_language(BuiltinLanguage::OmegaParity, a(2));
    let t = farago_target(&l);
    let (f, g) = phaselab::roughp::default_csb_injections(&l).unwrap();
    let phi = build_phi_csb(a(2), f, g, phaselab::roughp::DEFAULT_STEP_BUDGET);
    let mut failures = 0u64;
    let mut images = BTreeSet::new();
    for x in enumerate_words(a(2), &Rank::from(10_000u64), Cap::DEFAULT).unwrap() {
        let y = phi.forward(&x).unwrap();
        if phi.backward(&y).unwrap() != x || l.contains(&x) != t.target.contains(&y) {
            failures += 1;
        }
        let pre = phi.backward(&x).unwrap();
        if phi.forward(&pre).unwrap() != x {
            failures += 1;
        }
        if !images.insert(y) {
            failures += 1;
        }
    }
    let oracle = build_phi_oracle(&l, &t.target, &last_rank(2, 12), Cap::DEFAULT).unwrap();
    let mut mismatched = Vec::new();
    for n in 0..=12u32 {
        let cs = phaselab::b_set(&phi, n, Cap::DEFAULT).unwrap();
        let or = phaselab::b_set(&oracle, n, Cap::DEFAULT).unwrap();
        let cm = cs.iter().filter(|x| l.contains(x)).count();
        let om = or.iter().filter(|x| l.contains(x)).count();
        if cs.len() != or.len() || cm != om {
            mismatched.push(n);
        }
    }
    report(
        13,
        failures == 0 && mismatched.is_empty(),
        &format!("10001 words, {failures} failures; B-set counts differ at {mismatched:?}"),
    );
}
