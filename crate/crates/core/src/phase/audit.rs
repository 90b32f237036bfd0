//! Balance audits over `B`-sets, the index-range bound for pulled-back
//! conjugated `B`-sets, and density probes.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::iso::{conjugate_language, PreservingIso};
use crate::langs::LanguageSpec;
use crate::phase::interval::{self, Certainty, Interval};
use crate::phase::poly::PolySpec;
use crate::report;
use crate::roughp::{
    b_set, build_phi_oracle, errorless_heuristic, farago_target, roughp_decide, Bijection, FaragoTarget,
    HeuristicOutcome,
};
use crate::words::{rank_u64, words_up_to_length, xi_transcode, Cap, Rank, Word};

fn ratio(p: u64, q: u64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

#[derive(Clone, Debug, Serialize)]
pub struct NaeuRow {
    pub n: u32,
    pub b_size: u64,
    pub accepted_correct: u64,
    pub rejected_correct: u64,
    pub bottom: u64,
    /// Answers contradicting membership; zero for an errorless decider.
    pub errors: u64,
    #[serde(serialize_with = "report::rational")]
    pub accept_fraction: BigRational,
    #[serde(serialize_with = "report::rational")]
    pub reject_fraction: BigRational,
    /// `1/poly(n)`, absent when `poly(n) ≤ 0`.
    #[serde(serialize_with = "report::opt_rational")]
    pub bound: Option<BigRational>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityReport {
    pub range: (u64, u64),
    /// First `n` with `poly(n+1) > √2·poly(n)`.
    pub first_violation: Option<u64>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NaeuReport {
    pub language: String,
    pub bijection: String,
    pub decider: String,
    pub poly: String,
    pub rows: Vec<NaeuRow>,
    pub monotonicity: MonotonicityReport,
    pub pass: bool,
}

/// `poly(n)·(1/√2)^n` is nonincreasing on the integers of `range`,
/// decided exactly as `poly(n+1) ≤ √2·poly(n)`.
pub fn naeu_monotonicity(poly: &PolySpec, range: RangeInclusive<u64>) -> MonotonicityReport {
    let (lo, hi) = (*range.start(), *range.end());
    let first_violation = (lo..hi).find(|&n| !interval::le_sqrt2_times(&poly.eval_int(n + 1), &poly.eval_int(n)));
    MonotonicityReport { range: (lo, hi), first_violation, pass: first_violation.is_none() }
}

/// Counts correct ACCEPT and correct REJECT answers of `decide` over each
/// `B_n^φ` and compares both fractions with `1/poly(n)`.
pub fn naeu_audit_with<D>(
    lang: &LanguageSpec,
    phi: &dyn Bijection,
    decider_name: &str,
    decide: D,
    poly: &PolySpec,
    n_range: RangeInclusive<u32>,
    cap: Cap,
) -> Result<NaeuReport>
where
    D: Fn(&Word) -> Result<HeuristicOutcome>,
{
    let mut rows = Vec::new();
    for n in n_range.clone() {
        let set = b_set(phi, n, cap)?;
        if set.is_empty() {
            return Err(Error::UndefinedFraction);
        }
        let (mut acc, mut rej, mut bot, mut err) = (0u64, 0u64, 0u64, 0u64);
        for x in &set {
            let member = lang.contains(x);
            match decide(x)? {
                HeuristicOutcome::Accept if member => acc += 1,
                HeuristicOutcome::Reject if !member => rej += 1,
                HeuristicOutcome::Bottom => bot += 1,
                _ => err += 1,
            }
        }
        let size = set.len() as u64;
        let p = poly.eval_int(n as u64);
        let bound = p.is_positive().then(|| p.recip());
        let accept_fraction = ratio(acc, size);
        let reject_fraction = ratio(rej, size);
        let pass = bound.as_ref().is_some_and(|b| &accept_fraction >= b && &reject_fraction >= b);
        rows.push(NaeuRow {
            n,
            b_size: size,
            accepted_correct: acc,
            rejected_correct: rej,
            bottom: bot,
            errors: err,
            accept_fraction,
            reject_fraction,
            bound,
            pass,
        });
    }
    let monotonicity = naeu_monotonicity(poly, *n_range.start() as u64..=*n_range.end() as u64);
    let pass = monotonicity.pass && rows.iter().all(|r| r.pass);
    Ok(NaeuReport {
        language: lang.name().to_string(),
        bijection: phi.name(),
        decider: decider_name.to_string(),
        poly: poly.to_string(),
        rows,
        monotonicity,
        pass,
    })
}

/// NAEU audit with the decider `x ↦ heuristic(φ(x))`.
pub fn naeu_audit(
    lang: &LanguageSpec,
    phi: &dyn Bijection,
    t: &FaragoTarget,
    poly: &PolySpec,
    n_range: RangeInclusive<u32>,
    cap: Cap,
) -> Result<NaeuReport> {
    naeu_audit_with(
        lang,
        phi,
        &format!("heuristic({}) after phi", t.target.name()),
        |x| roughp_decide(t, phi, x),
        poly,
        n_range,
        cap,
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitGroup {
    /// Length, over the larger alphabet, of the transcoded image.
    pub m: u32,
    pub size: u64,
    pub members: u64,
    #[serde(serialize_with = "report::rational")]
    pub fraction: BigRational,
    pub within_tolerance: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitRow {
    pub n: u32,
    #[serde(serialize_with = "report::rational")]
    pub global_fraction: BigRational,
    pub groups: Vec<SplitGroup>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivativeRow {
    pub n: u64,
    #[serde(serialize_with = "report::interval")]
    pub lhs: Interval,
    #[serde(serialize_with = "report::interval")]
    pub rhs: Interval,
    pub verdict: Certainty,
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivativeReport {
    pub poly: String,
    pub k: u32,
    #[serde(serialize_with = "report::interval")]
    pub lambda: Interval,
    /// `|ln(1/√2)| / λ`.
    #[serde(serialize_with = "report::interval")]
    pub constant: Interval,
    pub rows: Vec<DerivativeRow>,
    pub first_failure: Option<u64>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScaledMonotonicityRow {
    pub n: u64,
    pub verdict: Certainty,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScaledMonotonicityReport {
    pub poly: String,
    pub k: u32,
    pub rows: Vec<ScaledMonotonicityRow>,
    /// First `n` where `Poly(λ(n+1))(1/√2)^{n+1} > Poly(λn)(1/√2)^n`.
    pub first_increase: Option<u64>,
    pub pass: bool,
}

/// Checks `Poly'(λn) ≤ (|ln(1/√2)|/λ)·Poly(λn)` with `λ = 2·log_k(k+1)`,
/// in interval arithmetic.
pub fn derivative_condition(k: u32, poly: &PolySpec, range: RangeInclusive<u64>) -> DerivativeReport {
    let width = interval::default_width();
    let lambda = interval::lambda(k, &width);
    let half_ln2 = interval::ln2(&width).scale(&BigRational::new(BigInt::one(), BigInt::from(2)));
    let constant = half_ln2.div(&lambda);
    let dp = poly.derivative();
    let mut rows = Vec::new();
    for n in range {
        let x = interval::scaled(&lambda, n);
        let lhs = dp.eval_interval(&x);
        let rhs = constant.mul(&poly.eval_interval(&x));
        let verdict = lhs.le(&rhs);
        rows.push(DerivativeRow { n, lhs, rhs, verdict });
    }
    let first_failure = rows.iter().find(|r| !r.verdict.passed()).map(|r| r.n);
    DerivativeReport { poly: poly.to_string(), k, lambda, constant, rows, first_failure, pass: first_failure.is_none() }
}

/// Checks that `Poly(λn)·(1/√2)^n` is nonincreasing, comparing
/// `Poly(λ(n+1))` with `√2·Poly(λn)` in interval arithmetic.
pub fn scaled_monotonicity(k: u32, poly: &PolySpec, range: RangeInclusive<u64>) -> ScaledMonotonicityReport {
    let width = interval::default_width();
    let lambda = interval::lambda(k, &width);
    let root2 = interval::sqrt2();
    let (lo, hi) = (*range.start(), *range.end());
    let rows: Vec<_> = (lo..hi)
        .map(|n| {
            let next = poly.eval_interval(&interval::scaled(&lambda, n + 1));
            let here = root2.mul(&poly.eval_interval(&interval::scaled(&lambda, n)));
            ScaledMonotonicityRow { n, verdict: next.le(&here) }
        })
        .collect();
    let first_increase = rows.iter().find(|r| !r.verdict.passed()).map(|r| r.n);
    ScaledMonotonicityReport { poly: poly.to_string(), k, rows, first_increase, pass: first_increase.is_none() }
}

#[derive(Clone, Debug)]
pub struct AdequacyConfig {
    /// Indices `n` whose `B`-sets are enumerated.
    pub set_range: RangeInclusive<u32>,
    /// Indices for the analytic derivative and monotonicity checks.
    pub analytic_range: RangeInclusive<u64>,
    pub tol_split: BigRational,
}

impl Default for AdequacyConfig {
    fn default() -> Self {
        AdequacyConfig {
            set_range: 1..=6,
            analytic_range: 0..=40,
            tol_split: BigRational::new(BigInt::one(), BigInt::from(10)),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AdequacyReport {
    pub language: String,
    pub k: u32,
    pub poly: String,
    #[serde(serialize_with = "report::rational")]
    pub tol_split: BigRational,
    pub split: Vec<SplitRow>,
    pub split_pass: bool,
    pub derivative: DerivativeReport,
    pub scaled_monotonicity: ScaledMonotonicityReport,
    pub alt_naeu: NaeuReport,
    pub pass: bool,
}

/// Extra balance conditions for odd alphabets.
///
/// 1. Within each `B_n^φ`, the member fraction of every part
///    `B_n^φ ∩ ξ⁻¹(B_m^ψ)` (with `ψ` the conjugated map) stays within
///    `tol_split` of the fraction over all of `B_n^φ`.
/// 2. The derivative condition with `λ = 2·log_k(k+1)`.
/// 3. NAEU for the decider that transcodes to the larger alphabet and runs
///    the heuristic of the conjugated language's target there, through a
///    class-preserving rank-matching bijection on that side.
pub fn adequacy_audit(
    lang: &LanguageSpec,
    iso: &PreservingIso,
    phi: &dyn Bijection,
    poly: &PolySpec,
    config: &AdequacyConfig,
    cap: Cap,
) -> Result<AdequacyReport> {
    let k = lang.alphabet().size();
    if k.is_multiple_of(2) {
        return Err(Error::NotApplicable(format!(
            "the additional balance conditions concern odd alphabets, got {}",
            lang.alphabet()
        )));
    }
    if iso.src() != lang.alphabet() || iso.dst().size() != k + 1 {
        return Err(Error::AlphabetMismatch { expected: k, found: iso.src().size() });
    }
    let dst = iso.dst();

    let mut split = Vec::new();
    let mut sets = Vec::new();
    let mut max_rank = 0u64;
    for n in config.set_range.clone() {
        let set = b_set(phi, n, cap)?;
        let mut groups: BTreeMap<u32, (u64, u64)> = BTreeMap::new();
        let mut members = 0u64;
        for x in &set {
            let image = phi.forward(x)?;
            let m = xi_transcode(&image, dst).len() as u32;
            let member = lang.contains(x);
            let e = groups.entry(m).or_default();
            e.0 += 1;
            e.1 += member as u64;
            members += member as u64;
            if let Some(r) = rank_u64(x.symbols(), k) {
                max_rank = max_rank.max(r);
            }
        }
        let global_fraction = ratio(members, set.len() as u64);
        let groups: Vec<SplitGroup> = groups
            .into_iter()
            .map(|(m, (size, mem))| {
                let fraction = ratio(mem, size);
                let dev = (&fraction - &global_fraction).abs();
                SplitGroup { m, size, members: mem, fraction, within_tolerance: dev <= config.tol_split }
            })
            .collect();
        let pass = groups.iter().all(|g| g.within_tolerance);
        split.push(SplitRow { n, global_fraction, groups, pass });
        sets.push(set);
    }
    let split_pass = split.iter().all(|r| r.pass);

    let derivative = derivative_condition(k, poly, config.analytic_range.clone());
    let scaled_monotonicity = scaled_monotonicity(k, poly, config.analytic_range.clone());

    let h = conjugate_language(lang, iso)?;
    let t_h = farago_target(&h);
    let phi_h = build_phi_oracle(&h, &t_h.target, &Rank::from(max_rank), cap)?;
    let alt_naeu = naeu_audit_with(
        lang,
        phi,
        &format!("heuristic({}) after {} and xi", t_h.target.name(), phi_h.name()),
        |x| {
            let v = phi_h.forward(&xi_transcode(x, dst))?;
            Ok(errorless_heuristic(&t_h, &v))
        },
        poly,
        config.set_range.clone(),
        cap,
    )?;

    let pass = split_pass && derivative.pass && scaled_monotonicity.pass && alt_naeu.pass;
    Ok(AdequacyReport {
        language: lang.name().to_string(),
        k,
        poly: poly.to_string(),
        tol_split: config.tol_split.clone(),
        split,
        split_pass,
        derivative,
        scaled_monotonicity,
        alt_naeu,
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChiBlock {
    pub j: u32,
    /// `|B_j^φ ∩ pulled-back set|`.
    pub contained: u64,
    /// `|B_j^φ| = k^j`.
    #[serde(serialize_with = "report::display")]
    pub size: BigUint,
    #[serde(serialize_with = "report::rational")]
    pub alpha: BigRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChiReport {
    pub n: u32,
    pub k: u32,
    pub pulled_back_size: u64,
    pub chi_low: u32,
    pub chi_upp: u32,
    /// Enclosure of `2n·log_k(k+1)`.
    #[serde(serialize_with = "report::interval")]
    pub bound: Interval,
    /// `chi_upp ≤ 2n·log_k(k+1)`, decided exactly as `k^chi_upp ≤ (k+1)^{2n}`.
    pub bound_ok: bool,
    pub blocks: Vec<ChiBlock>,
    /// Every block strictly between the extremes lies wholly inside the
    /// pulled-back set (checked member by member).
    pub interior_full: bool,
    /// The extreme blocks are nonempty and at most full.
    pub boundary_ok: bool,
    /// `Σ_j α_j·|B_j^φ|` equals the size of the pulled-back set.
    pub union_exact: bool,
}

impl ChiReport {
    pub fn pass(&self) -> bool {
        self.bound_ok && self.interior_full && self.boundary_ok && self.union_exact
    }
}

struct Bitset(Vec<u64>);

impl Bitset {
    fn insert(&mut self, i: u64) -> bool {
        let (w, b) = ((i / 64) as usize, i % 64);
        if self.0.len() <= w {
            self.0.resize(w + 1, 0);
        }
        let fresh = self.0[w] & (1 << b) == 0;
        self.0[w] |= 1 << b;
        fresh
    }

    fn contains(&self, i: u64) -> bool {
        let (w, b) = ((i / 64) as usize, i % 64);
        self.0.get(w).is_some_and(|x| x & (1 << b) != 0)
    }
}

/// Pulls the conjugated `B_n` back to the source alphabet and locates it
/// among the blocks `B_j^φ`.
pub fn chi_bounds(iso: &PreservingIso, phi: &dyn Bijection, n: u32, cap: Cap) -> Result<ChiReport> {
    let src = iso.src();
    let dst = iso.dst();
    if phi.domain() != src || phi.codomain() != src {
        return Err(Error::AlphabetMismatch { expected: src.size(), found: phi.domain().size() });
    }
    let k = src.size();
    let count = BigUint::from(dst.size()).pow(n);
    cap.check_big(&count)?;
    let first = dst.first_rank_of_length_u64(n).expect("checked by cap");
    let last = first + count.to_u64().expect("checked by cap") - 1;

    let mut pulled = Bitset(Vec::new());
    let mut contained: BTreeMap<u32, u64> = BTreeMap::new();
    let mut distinct = 0u64;
    for r in first..=last {
        // ψ⁻¹ = ξ∘φ⁻¹∘ξ⁻¹, and both transcodings keep ranks, so the
        // pulled-back word ξ⁻¹(ψ⁻¹(v)) has rank φ⁻¹(rank v)
        let w = phi.backward_rank(r)?;
        let image = phi.forward_rank(w)?;
        if image != r {
            return Err(Error::Construction(format!(
                "{} is not a bijection at rank {w}: forward gives {image}, expected {r}",
                phi.name()
            )));
        }
        if pulled.insert(w) {
            distinct += 1;
        }
        *contained.entry(src.length_of_rank(image)).or_default() += 1;
    }

    let chi_low = *contained.keys().next().expect("k^n ≥ 1");
    let chi_upp = *contained.keys().next_back().expect("k^n ≥ 1");
    let mut blocks = Vec::new();
    let mut interior_full = true;
    let mut boundary_ok = true;
    for j in chi_low..=chi_upp {
        let got = contained.get(&j).copied().unwrap_or(0);
        let size = BigUint::from(k).pow(j);
        let alpha = BigRational::new(BigInt::from(got), BigInt::from(size.clone()));
        if j != chi_low && j != chi_upp {
            // member-by-member check that B_j^φ lies inside the pulled-back set
            cap.check_big(&size)?;
            let lo = src.first_rank_of_length_u64(j).expect("checked by cap");
            let hi = lo + size.to_u64().expect("checked by cap") - 1;
            for u in lo..=hi {
                if !pulled.contains(phi.backward_rank(u)?) {
                    interior_full = false;
                    break;
                }
            }
            interior_full &= alpha.is_one();
        } else {
            boundary_ok &= alpha.is_positive() && alpha <= BigRational::one();
        }
        blocks.push(ChiBlock { j, contained: got, size, alpha });
    }
    let total: BigRational =
        blocks.iter().map(|b| &b.alpha * BigRational::from_integer(BigInt::from(b.size.clone()))).sum();
    let union_exact =
        distinct == count.to_u64().expect("checked") && total == BigRational::from_integer(BigInt::from(count.clone()));

    let width = interval::default_width();
    let bound = interval::log_k_of_k_plus_one(k, &width).scale(&BigRational::from_integer(BigInt::from(2 * n)));
    Ok(ChiReport {
        n,
        k,
        pulled_back_size: distinct,
        chi_low,
        chi_upp,
        bound,
        bound_ok: interval::power_le(k, chi_upp, 2 * n),
        blocks,
        interior_full,
        boundary_ok,
        union_exact,
    })
}

/// `|L ∩ Σ^{≤n}|`.
pub fn density(lang: &LanguageSpec, n: u32, cap: Cap) -> Result<u64> {
    Ok(words_up_to_length(lang.alphabet(), n, cap)?.filter(|w| lang.contains(w)).count() as u64)
}

#[derive(Clone, Debug, Serialize)]
pub struct SparsityRow {
    pub n: u32,
    pub density: u64,
    #[serde(serialize_with = "report::rational")]
    pub bound: BigRational,
    pub exceeded: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SparsityReport {
    pub language: String,
    pub poly: String,
    pub rows: Vec<SparsityRow>,
    /// First `n` with `density(n) > poly_s(n)`.
    pub first_exceeded: Option<u32>,
}

impl SparsityReport {
    pub fn verdict(&self) -> String {
        match self.first_exceeded {
            Some(n) => format!("density exceeds {} at n={n}: not sparse", self.poly),
            None => format!("consistent with sparse up to n={}", self.rows.last().map_or(0, |r| r.n)),
        }
    }
}

/// Compares the density with `poly_s` over `n_range`.
pub fn sparsity_probe(
    lang: &LanguageSpec,
    poly_s: &PolySpec,
    n_range: RangeInclusive<u32>,
    cap: Cap,
) -> Result<SparsityReport> {
    let top = *n_range.end();
    let mut per_length = vec![0u64; top as usize + 1];
    for w in words_up_to_length(lang.alphabet(), top, cap)? {
        if lang.contains(&w) {
            per_length[w.len()] += 1;
        }
    }
    let mut rows = Vec::new();
    let mut running = 0u64;
    for (n, &c) in per_length.iter().enumerate() {
        running += c;
        let n = n as u32;
        if !n_range.contains(&n) {
            continue;
        }
        let bound = poly_s.eval_int(n as u64);
        let exceeded = BigRational::from_integer(BigInt::from(running)) > bound;
        rows.push(SparsityRow { n, density: running, bound, exceeded });
    }
    let first_exceeded = rows.iter().find(|r| r.exceeded).map(|r| r.n);
    Ok(SparsityReport { language: lang.name().to_string(), poly: poly_s.to_string(), rows, first_exceeded })
}

/// `B_n^φ ∩ L` for a class-preserving `φ` has the size of `Σ^n ∩ H`.
pub fn b_set_member_count(lang: &LanguageSpec, phi: &dyn Bijection, n: u32, cap: Cap) -> Result<(u64, u64)> {
    let set = b_set(phi, n, cap)?;
    let members = set.iter().filter(|x| lang.contains(x)).count() as u64;
    Ok((set.len() as u64, members))
}
