//! Squares-or-odd-weight target languages, their errorless heuristic, and
//! class-preserving bijections between a language and its target.
//!
//! For a language `L` the target is `H_L = {xx | x ∈ L} ∪ {w | ω(w) odd}`.
//! The heuristic answers ACCEPT on odd weight, REJECT on even-weight
//! non-squares and BOTTOM on even-weight squares; it is never wrong.
//!
//! Two bijections `φ: Σ* → Σ*` with `x ∈ L ⟺ φ(x) ∈ H_L` are provided:
//! a rank-matching table over a finite window, and a chain-chasing
//! Cantor–Schröder–Bernstein construction from two explicit injections.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::iso::PreservingIso;
use crate::langs::LanguageSpec;
use crate::words::{
    ensure_same, omega_sum, rank_u64, word_of_rank_u64, words_of_length, xi_transcode, Alphabet, Cap, Rank, Word,
};

/// Step budget for chain chasing in [`CsbBijection`].
pub const DEFAULT_STEP_BUDGET: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HeuristicOutcome {
    Accept,
    Reject,
    Bottom,
}

impl HeuristicOutcome {
    pub fn symbol(self) -> &'static str {
        match self {
            HeuristicOutcome::Accept => "A",
            HeuristicOutcome::Reject => "R",
            HeuristicOutcome::Bottom => "_",
        }
    }

    pub fn is_bottom(self) -> bool {
        self == HeuristicOutcome::Bottom
    }
}

impl fmt::Display for HeuristicOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl Serialize for HeuristicOutcome {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

/// A language `L` together with its squares-or-odd-weight target.
#[derive(Clone, Debug)]
pub struct FaragoTarget {
    pub base: LanguageSpec,
    pub target: LanguageSpec,
}

fn square_or_odd(base: &LanguageSpec, w: &Word) -> bool {
    if omega_sum(w) % 2 == 1 {
        return true;
    }
    match w.square_root() {
        Some(half) => base.contains(&half),
        None => false,
    }
}

pub fn farago_target(lang: &LanguageSpec) -> FaragoTarget {
    let a = lang.alphabet();
    let base = lang.clone();
    let inner = lang.clone();
    let target = LanguageSpec::new(format!("target({})", lang.name()), a, move |w: &Word| square_or_odd(&inner, w))
        .with_witnesses(Word::from_valid(a, vec![1]), Word::from_valid(a, vec![2]))
        .expect("(1) has odd weight, (2) is an even-weight non-square");
    FaragoTarget { base, target }
}

/// The heuristic on its own; it only looks at weight parity and squareness.
pub fn square_parity_heuristic(w: &Word) -> HeuristicOutcome {
    if omega_sum(w) % 2 == 1 {
        HeuristicOutcome::Accept
    } else if w.is_square() {
        HeuristicOutcome::Bottom
    } else {
        HeuristicOutcome::Reject
    }
}

/// Errorless heuristic for `t.target`.
pub fn errorless_heuristic(t: &FaragoTarget, w: &Word) -> HeuristicOutcome {
    debug_assert_eq!(t.target.alphabet(), w.alphabet());
    square_parity_heuristic(w)
}

/// A bijection between word sets, with optional rank-level shortcuts.
pub trait Bijection: Send + Sync {
    fn name(&self) -> String;
    fn domain(&self) -> Alphabet;
    fn codomain(&self) -> Alphabet;
    fn forward(&self, w: &Word) -> Result<Word>;
    fn backward(&self, v: &Word) -> Result<Word>;

    fn forward_rank(&self, r: u64) -> Result<u64> {
        let v = self.forward(&word_of_rank_u64(r, self.domain()))?;
        rank_u64(v.symbols(), v.alphabet().size()).ok_or_else(|| overflow(&v))
    }

    fn backward_rank(&self, r: u64) -> Result<u64> {
        let w = self.backward(&word_of_rank_u64(r, self.codomain()))?;
        rank_u64(w.symbols(), w.alphabet().size()).ok_or_else(|| overflow(&w))
    }
}

fn overflow(w: &Word) -> Error {
    Error::Coverage { rank: crate::words::theta_rank(w).to_string(), detail: "rank does not fit in 64 bits".into() }
}

/// `w ↦ w` on one alphabet.
#[derive(Clone, Copy, Debug)]
pub struct Identity(pub Alphabet);

impl Bijection for Identity {
    fn name(&self) -> String {
        format!("identity@{}", self.0)
    }
    fn domain(&self) -> Alphabet {
        self.0
    }
    fn codomain(&self) -> Alphabet {
        self.0
    }
    fn forward(&self, w: &Word) -> Result<Word> {
        ensure_same(self.0, w.alphabet())?;
        Ok(w.clone())
    }
    fn backward(&self, v: &Word) -> Result<Word> {
        self.forward(v)
    }
    fn forward_rank(&self, r: u64) -> Result<u64> {
        Ok(r)
    }
    fn backward_rank(&self, r: u64) -> Result<u64> {
        Ok(r)
    }
}

impl Bijection for PreservingIso {
    fn name(&self) -> String {
        format!("xi({}->{})", self.src(), self.dst())
    }
    fn domain(&self) -> Alphabet {
        self.src()
    }
    fn codomain(&self) -> Alphabet {
        self.dst()
    }
    fn forward(&self, w: &Word) -> Result<Word> {
        PreservingIso::forward(self, w)
    }
    fn backward(&self, v: &Word) -> Result<Word> {
        PreservingIso::backward(self, v)
    }
    fn forward_rank(&self, r: u64) -> Result<u64> {
        Ok(r)
    }
    fn backward_rank(&self, r: u64) -> Result<u64> {
        Ok(r)
    }
}

const UNMAPPED: u32 = u32::MAX;

/// Coverage summary of a [`RankMatchingOracle`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCoverage {
    /// Window the oracle was asked to cover.
    pub requested_max_rank: u64,
    /// Last rank enumerated while matching.
    pub scanned_max_rank: u64,
    /// Every domain rank `≤` this value has an image.
    pub forward_covered: Option<u64>,
    /// Every codomain rank `≤` this value has a preimage.
    pub backward_covered: Option<u64>,
    /// Members of `L` in the scan left without a partner.
    pub unmatched_members: u64,
    /// Non-members of `L` in the scan left without a partner.
    pub unmatched_non_members: u64,
}

impl OracleCoverage {
    pub fn complete(&self) -> bool {
        self.forward_covered >= Some(self.requested_max_rank) && self.backward_covered >= Some(self.requested_max_rank)
    }
}

/// The `i`-th member of `L` maps to the `i`-th member of `H`, and the `i`-th
/// non-member to the `i`-th non-member, both in rank order.
#[derive(Clone)]
pub struct RankMatchingOracle {
    name: String,
    alphabet: Alphabet,
    forward: Vec<u32>,
    backward: Vec<u32>,
    coverage: OracleCoverage,
}

impl fmt::Debug for RankMatchingOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RankMatchingOracle").field("name", &self.name).field("coverage", &self.coverage).finish()
    }
}

impl RankMatchingOracle {
    pub fn coverage(&self) -> &OracleCoverage {
        &self.coverage
    }

    fn lookup(&self, table: &[u32], r: u64, side: &str) -> Result<u64> {
        match usize::try_from(r).ok().and_then(|i| table.get(i)) {
            Some(&v) if v != UNMAPPED => Ok(v as u64),
            _ => Err(Error::Coverage {
                rank: r.to_string(),
                detail: format!(
                    "{side} of {} is defined through rank {:?}",
                    self.name,
                    if side == "forward" { self.coverage.forward_covered } else { self.coverage.backward_covered }
                ),
            }),
        }
    }

    fn word_rank(&self, w: &Word) -> Result<u64> {
        ensure_same(self.alphabet, w.alphabet())?;
        rank_u64(w.symbols(), self.alphabet.size()).ok_or_else(|| overflow(w))
    }
}

impl Bijection for RankMatchingOracle {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn domain(&self) -> Alphabet {
        self.alphabet
    }
    fn codomain(&self) -> Alphabet {
        self.alphabet
    }
    fn forward(&self, w: &Word) -> Result<Word> {
        let r = self.forward_rank(self.word_rank(w)?)?;
        Ok(word_of_rank_u64(r, self.alphabet))
    }
    fn backward(&self, v: &Word) -> Result<Word> {
        let r = self.backward_rank(self.word_rank(v)?)?;
        Ok(word_of_rank_u64(r, self.alphabet))
    }
    fn forward_rank(&self, r: u64) -> Result<u64> {
        self.lookup(&self.forward, r, "forward")
    }
    fn backward_rank(&self, r: u64) -> Result<u64> {
        self.lookup(&self.backward, r, "backward")
    }
}

fn covered_prefix(table: &[u32]) -> Option<u64> {
    let first_gap = table.iter().position(|&v| v == UNMAPPED).unwrap_or(table.len());
    (first_gap as u64).checked_sub(1)
}

/// Builds the rank-matching bijection between `l` and `h` (same alphabet).
///
/// Enumeration continues past `max_rank` until every word of rank
/// `≤ max_rank` on either side has a partner, or until `cap` words have been
/// scanned; the coverage report says how far the table is defined.
pub fn build_phi_oracle(l: &LanguageSpec, h: &LanguageSpec, max_rank: &Rank, cap: Cap) -> Result<RankMatchingOracle> {
    ensure_same(l.alphabet(), h.alphabet())?;
    let a = l.alphabet();
    let want = max_rank.value() + 1u32;
    cap.check_big(&want)?;
    let r_max = max_rank.to_u64().expect("checked by cap");
    let limit = cap.get().min(UNMAPPED as u64);
    if r_max >= limit {
        return Err(Error::cap(r_max + 1, limit));
    }

    let (mut lm, mut ln, mut hm, mut hn) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut at_window = [0usize; 4];
    let mut w = Word::empty(a);
    let mut r = 0u64;
    loop {
        let r32 = r as u32;
        if l.contains(&w) {
            lm.push(r32);
        } else {
            ln.push(r32);
        }
        if h.contains(&w) {
            hm.push(r32);
        } else {
            hn.push(r32);
        }
        if r == r_max {
            at_window = [lm.len(), ln.len(), hm.len(), hn.len()];
        }
        let matched = r >= r_max
            && hm.len() >= at_window[0]
            && hn.len() >= at_window[1]
            && lm.len() >= at_window[2]
            && ln.len() >= at_window[3];
        if matched || r + 1 >= limit {
            break;
        }
        w.advance();
        r += 1;
    }
    let scanned = r;

    let size = scanned as usize + 1;
    let mut forward = vec![UNMAPPED; size];
    let mut backward = vec![UNMAPPED; size];
    for (src, dst) in [(&lm, &hm), (&ln, &hn)] {
        for (&x, &y) in src.iter().zip(dst.iter()) {
            forward[x as usize] = y;
            backward[y as usize] = x;
        }
    }
    let coverage = OracleCoverage {
        requested_max_rank: r_max,
        scanned_max_rank: scanned,
        forward_covered: covered_prefix(&forward),
        backward_covered: covered_prefix(&backward),
        unmatched_members: lm.len().abs_diff(hm.len()) as u64,
        unmatched_non_members: ln.len().abs_diff(hn.len()) as u64,
    };
    Ok(RankMatchingOracle {
        name: format!("rank-match({} -> {})", l.name(), h.name()),
        alphabet: a,
        forward,
        backward,
        coverage,
    })
}

pub type WordMap = Arc<dyn Fn(&Word) -> Word + Send + Sync>;
pub type PartialInverse = Arc<dyn Fn(&Word) -> Option<Word> + Send + Sync>;

/// An injective word map with a partial inverse (`None` off the image).
#[derive(Clone)]
pub struct Injection {
    pub name: String,
    pub apply: WordMap,
    pub invert: PartialInverse,
}

impl fmt::Debug for Injection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Injection({})", self.name)
    }
}

impl Injection {
    /// `x ↦ xx`, fixing `ε`.
    pub fn doubling() -> Self {
        Injection { name: "x -> xx".into(), apply: Arc::new(Word::doubled), invert: Arc::new(Word::square_root) }
    }
}

/// Default injections for `L` and its target:
/// `f(x) = xx`, and `g(y) = pad_L(c(y), y)` where the case word `c(y)` is the
/// member witness for odd-weight `y`, the half `x` for even-weight `y = xx`,
/// and the non-member witness otherwise.
pub fn default_csb_injections(lang: &LanguageSpec) -> Result<(Injection, Injection)> {
    let padder =
        lang.padder().ok_or_else(|| Error::Unsupported(format!("language {} has no padder", lang.name())))?.clone();
    let wit = lang
        .witnesses()
        .ok_or_else(|| Error::Unsupported(format!("language {} has no witnesses", lang.name())))?
        .clone();
    let pad = padder.pad.clone();
    let case_pad = Arc::new(move |y: &Word| {
        let case = if omega_sum(y) % 2 == 1 {
            wit.member.clone()
        } else if let Some(half) = y.square_root() {
            half
        } else {
            wit.non_member.clone()
        };
        pad(&case, y)
    });
    let apply = case_pad.clone();
    let dec = padder.dec;
    let g = Injection {
        name: format!("y -> pad[{}](case(y), y)", lang.name()),
        apply: Arc::new(move |y: &Word| apply(y)),
        invert: Arc::new(move |z: &Word| {
            let y = dec(z);
            (case_pad(&y) == *z).then_some(y)
        }),
    };
    Ok((Injection::doubling(), g))
}

/// Cantor–Schröder–Bernstein bijection from `f: A → B` and `g: B → A`.
///
/// A word whose preimage chain stops on the `A` side, or cycles, maps by
/// `f`; one whose chain stops on the `B` side maps by `g⁻¹`.
#[derive(Clone, Debug)]
pub struct CsbBijection {
    alphabet: Alphabet,
    f: Injection,
    g: Injection,
    budget: usize,
}

impl CsbBijection {
    fn exhausted(&self, w: &Word) -> Error {
        Error::Construction(format!(
            "preimage chain from {w} did not terminate within {} steps; an injection is not length-increasing",
            self.budget
        ))
    }
}

pub fn build_phi_csb(alphabet: Alphabet, f: Injection, g: Injection, budget: usize) -> CsbBijection {
    CsbBijection { alphabet, f, g, budget }
}

impl Bijection for CsbBijection {
    fn name(&self) -> String {
        format!("csb[f: {}, g: {}]", self.f.name, self.g.name)
    }
    fn domain(&self) -> Alphabet {
        self.alphabet
    }
    fn codomain(&self) -> Alphabet {
        self.alphabet
    }

    fn forward(&self, a: &Word) -> Result<Word> {
        ensure_same(self.alphabet, a.alphabet())?;
        let mut first_g_pre: Option<Word> = None;
        let mut cur = a.clone();
        for _ in 0..self.budget {
            let Some(b) = (self.g.invert)(&cur) else {
                return Ok((self.f.apply)(a));
            };
            let b_first = first_g_pre.get_or_insert_with(|| b.clone()).clone();
            match (self.f.invert)(&b) {
                None => return Ok(b_first),
                Some(next) if next == *a => return Ok((self.f.apply)(a)),
                Some(next) => cur = next,
            }
        }
        Err(self.exhausted(a))
    }

    fn backward(&self, b: &Word) -> Result<Word> {
        ensure_same(self.alphabet, b.alphabet())?;
        let mut first_f_pre: Option<Word> = None;
        let mut cur = b.clone();
        for _ in 0..self.budget {
            let Some(a) = (self.f.invert)(&cur) else {
                return Ok((self.g.apply)(b));
            };
            let a_first = first_f_pre.get_or_insert_with(|| a.clone()).clone();
            match (self.g.invert)(&a) {
                None => return Ok(a_first),
                Some(next) if next == *b => return Ok(a_first),
                Some(next) => cur = next,
            }
        }
        Err(self.exhausted(b))
    }
}

/// `v ↦ forward(φ(backward(v)))` over the other alphabet of `iso`.
#[derive(Clone)]
pub struct Conjugated {
    inner: Arc<dyn Bijection>,
    iso: PreservingIso,
}

impl Conjugated {
    pub fn new(inner: Arc<dyn Bijection>, iso: PreservingIso) -> Result<Self> {
        ensure_same(iso.src(), inner.domain())?;
        ensure_same(iso.src(), inner.codomain())?;
        Ok(Conjugated { inner, iso })
    }
}

impl Bijection for Conjugated {
    fn name(&self) -> String {
        format!("conj({}, {})", self.inner.name(), Bijection::name(&self.iso))
    }
    fn domain(&self) -> Alphabet {
        self.iso.dst()
    }
    fn codomain(&self) -> Alphabet {
        self.iso.dst()
    }
    fn forward(&self, v: &Word) -> Result<Word> {
        ensure_same(self.iso.dst(), v.alphabet())?;
        let w = self.inner.forward(&xi_transcode(v, self.iso.src()))?;
        Ok(xi_transcode(&w, self.iso.dst()))
    }
    fn backward(&self, v: &Word) -> Result<Word> {
        ensure_same(self.iso.dst(), v.alphabet())?;
        let w = self.inner.backward(&xi_transcode(v, self.iso.src()))?;
        Ok(xi_transcode(&w, self.iso.dst()))
    }
    // The transcoding preserves ranks, so the rank maps are the inner ones.
    fn forward_rank(&self, r: u64) -> Result<u64> {
        self.inner.forward_rank(r)
    }
    fn backward_rank(&self, r: u64) -> Result<u64> {
        self.inner.backward_rank(r)
    }
}

/// `B_n^φ = φ⁻¹(Σ^n)`: the preimages of all `k^n` words of length `n`.
pub fn b_set(phi: &dyn Bijection, n: u32, cap: Cap) -> Result<Vec<Word>> {
    words_of_length(phi.codomain(), n, cap)?.map(|u| phi.backward(&u)).collect()
}

/// Fraction of `B_n^φ` on which `heuristic(φ(w))` is BOTTOM.
pub fn bottom_fraction(t: &FaragoTarget, phi: &dyn Bijection, n: u32, cap: Cap) -> Result<BigRational> {
    ensure_same(t.target.alphabet(), phi.codomain())?;
    let set = b_set(phi, n, cap)?;
    if set.is_empty() {
        return Err(Error::UndefinedFraction);
    }
    let mut bottom = 0u64;
    for w in &set {
        if errorless_heuristic(t, &phi.forward(w)?).is_bottom() {
            bottom += 1;
        }
    }
    Ok(BigRational::new(BigInt::from(bottom), BigInt::from(set.len())))
}

/// The heuristic for `L` obtained by routing through `φ`:
/// `x ↦ heuristic(φ(x))`. Errorless whenever `φ` maps `L` onto the target.
pub fn roughp_decide(t: &FaragoTarget, phi: &dyn Bijection, x: &Word) -> Result<HeuristicOutcome> {
    Ok(errorless_heuristic(t, &phi.forward(x)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langs::{builtin_language, BuiltinLanguage};
    use crate::words::enumerate_words;

    fn a(k: u32) -> Alphabet {
        Alphabet::new(k).unwrap()
    }

    fn w(k: u32, s: &[u32]) -> Word {
        Word::new(a(k), s.to_vec()).unwrap()
    }

    fn frac(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn target_membership_examples() {
        let l = builtin_language(BuiltinLanguage::OmegaParity, a(2));
        let t = farago_target(&l);
        assert!(t.target.contains(&w(2, &[1, 2])));
        assert!(!t.target.contains(&w(2, &[1, 1, 2])));
        assert_eq!(t.target.contains(&Word::empty(a(2))), l.contains(&Word::empty(a(2))));
        // (1,1) = (1)(1) with (1) ∈ L
        assert!(t.target.contains(&w(2, &[1, 1])));
        assert!(!t.target.contains(&w(2, &[2, 2])));
    }

    #[test]
    fn heuristic_examples() {
        let t = farago_target(&builtin_language(BuiltinLanguage::OmegaParity, a(2)));
        assert_eq!(errorless_heuristic(&t, &w(2, &[1, 2])), HeuristicOutcome::Accept);
        assert_eq!(errorless_heuristic(&t, &w(2, &[1, 1, 2])), HeuristicOutcome::Reject);
        assert_eq!(errorless_heuristic(&t, &w(2, &[1, 2, 1, 2])), HeuristicOutcome::Bottom);
        assert_eq!(HeuristicOutcome::Bottom.to_string(), "_");
    }

    #[test]
    fn bottom_fraction_identity() {
        let t = farago_target(&builtin_language(BuiltinLanguage::OmegaParity, a(2)));
        let id = Identity(a(2));
        assert_eq!(bottom_fraction(&t, &id, 4, Cap::DEFAULT).unwrap(), frac(1, 4));
        assert_eq!(bottom_fraction(&t, &id, 3, Cap::DEFAULT).unwrap(), frac(0, 1));
        assert_eq!(bottom_fraction(&t, &id, 0, Cap::DEFAULT).unwrap(), frac(1, 1));
    }

    #[test]
    fn oracle_matches_smallest_members() {
        let l = builtin_language(BuiltinLanguage::FirstSymbol, a(2));
        let t = farago_target(&l);
        let phi = build_phi_oracle(&l, &t.target, &Rank::from(500), Cap::DEFAULT).unwrap();
        assert!(phi.coverage().complete());
        let words: Vec<_> = enumerate_words(a(2), &Rank::from(500), Cap::DEFAULT).unwrap().collect();
        let first_l = words.iter().find(|x| l.contains(x)).unwrap();
        let first_h = words.iter().find(|x| t.target.contains(x)).unwrap();
        assert_eq!(&phi.forward(first_l).unwrap(), first_h);
        for x in &words {
            let y = phi.forward(x).unwrap();
            assert_eq!(l.contains(x), t.target.contains(&y));
            assert_eq!(&phi.backward(&y).unwrap(), x);
        }
    }

    #[test]
    fn oracle_reports_partial_coverage() {
        let l = builtin_language(BuiltinLanguage::FirstSymbol, a(2));
        let none = crate::langs::empty(a(2));
        let phi = build_phi_oracle(&l, &none, &Rank::from(20), Cap::new(100)).unwrap();
        let cov = phi.coverage();
        assert!(!cov.complete());
        assert_eq!(cov.scanned_max_rank, 99);
        assert!(cov.unmatched_members > 0);
        // ε is a non-member on both sides, so it is still matched
        assert_eq!(phi.forward_rank(0).unwrap(), 0);
        assert!(matches!(phi.forward(&w(2, &[1])), Err(Error::Coverage { .. })));
    }

    #[test]
    fn csb_fixes_empty_word() {
        let l = builtin_language(BuiltinLanguage::OmegaParity, a(2));
        let (f, g) = default_csb_injections(&l).unwrap();
        let phi = build_phi_csb(a(2), f, g, DEFAULT_STEP_BUDGET);
        let e = Word::empty(a(2));
        assert_eq!(phi.forward(&e).unwrap(), e);
        assert_eq!(phi.backward(&e).unwrap(), e);
    }

    #[test]
    fn csb_budget_is_enforced() {
        // g(y) = y is not length-increasing; every chain through f-images loops
        let same = Injection {
            name: "id".into(),
            apply: Arc::new(|y: &Word| y.clone()),
            invert: Arc::new(|z: &Word| Some(z.clone())),
        };
        let shift = Injection {
            name: "shift".into(),
            apply: Arc::new(|x: &Word| {
                let mut s = vec![1];
                s.extend_from_slice(x.symbols());
                Word::new(x.alphabet(), s).unwrap()
            }),
            invert: Arc::new(|z: &Word| {
                (z.first() == Some(1)).then(|| Word::new(z.alphabet(), z.symbols()[1..].to_vec()).unwrap())
            }),
        };
        let phi = build_phi_csb(a(2), shift, same, 3);
        assert!(matches!(phi.forward(&w(2, &[1, 1, 1, 1, 1])), Err(Error::Construction(_))));
    }

    #[test]
    fn b_sets_of_identity() {
        let id = Identity(a(3));
        assert_eq!(b_set(&id, 0, Cap::DEFAULT).unwrap(), vec![Word::empty(a(3))]);
        assert_eq!(b_set(&id, 3, Cap::DEFAULT).unwrap().len(), 27);
        assert!(b_set(&id, 20, Cap::DEFAULT).is_err());
    }
}
