//! Alphabets `{1..k}`, words over them, and the bijective base-`k` numeration
//! that ranks every word by a unique nonnegative integer.
//!
//! The rank of `w = w_0 w_1 … w_{n-1}` is `Σ_j k^j · w_j` with digits in
//! `1..=k`, read little-endian. Ranking by this value orders words by length
//! first and then colexicographically (last symbol most significant), so the
//! enumeration order and numeric order coincide. The empty word has rank 0.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest alphabet the text codec can render (`1`–`9`, `a`–`z`).
pub const MAX_TEXT_ALPHABET: u32 = 35;

/// Text rendering of the empty word.
pub const EMPTY_WORD_TEXT: &str = "-";

/// The symbol set `{1..k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    size: u32,
}

impl Alphabet {
    pub fn new(size: u32) -> Result<Self> {
        if size < 2 {
            return Err(Error::InvalidAlphabet(size));
        }
        Ok(Alphabet { size })
    }

    pub fn size(self) -> u32 {
        self.size
    }

    pub fn contains(self, symbol: u32) -> bool {
        (1..=self.size).contains(&symbol)
    }

    /// The alphabet with one more symbol.
    pub fn grown(self) -> Alphabet {
        Alphabet { size: self.size + 1 }
    }

    /// `k^n`, if it fits.
    pub fn count_of_length(self, n: u32) -> Option<u64> {
        (self.size as u64).checked_pow(n)
    }

    /// Rank of the first word of length `n`: `(k^n − 1)/(k − 1)`.
    pub fn first_rank_of_length(self, n: u32) -> BigUint {
        let k = BigUint::from(self.size);
        (k.pow(n) - 1u32) / (self.size - 1)
    }

    pub fn first_rank_of_length_u64(self, n: u32) -> Option<u64> {
        self.first_rank_of_length(n).to_u64()
    }

    /// Length of the word whose rank is `rank`.
    pub fn length_of_rank(self, rank: u64) -> u32 {
        let k = self.size as u128;
        let r = rank as u128;
        let mut len = 0u32;
        // next_start = (k^(len+1) - 1)/(k - 1)
        let mut next_start: u128 = 1;
        let mut power: u128 = 1;
        while next_start <= r {
            power *= k;
            next_start += power;
            len += 1;
        }
        len
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={}", self.size)
    }
}

impl FromStr for Alphabet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s.trim().strip_prefix("k=").unwrap_or(s.trim());
        let size =
            digits.parse::<u32>().map_err(|_| Error::Parse(format!("invalid alphabet `{s}` (expected k=<int>)")))?;
        Alphabet::new(size)
    }
}

/// Upper bound on the number of words a single enumeration may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cap(u64);

impl Cap {
    pub const DEFAULT: Cap = Cap(10_000_000);
    pub const ENV_VAR: &'static str = "PHASELAB_CAP";

    pub fn new(limit: u64) -> Self {
        Cap(limit)
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// Reads `PHASELAB_CAP`, falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(Self::ENV_VAR) {
            Ok(v) => v
                .trim()
                .replace('_', "")
                .parse::<u64>()
                .map(Cap)
                .map_err(|_| Error::Parse(format!("{} must be an integer, got `{v}`", Self::ENV_VAR))),
            Err(_) => Ok(Self::DEFAULT),
        }
    }

    pub fn check(self, requested: u64) -> Result<()> {
        if requested > self.0 {
            return Err(Error::cap(requested, self.0));
        }
        Ok(())
    }

    pub fn check_big(self, requested: &BigUint) -> Result<()> {
        match requested.to_u64() {
            Some(r) => self.check(r),
            None => Err(Error::cap(requested, self.0)),
        }
    }
}

impl Default for Cap {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// A finite sequence of symbols over one alphabet.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: Alphabet,
    symbols: Vec<u32>,
}

impl Word {
    pub fn new(alphabet: Alphabet, symbols: Vec<u32>) -> Result<Self> {
        if let Some((position, &symbol)) = symbols.iter().enumerate().find(|(_, &s)| !alphabet.contains(s)) {
            return Err(Error::InvalidWord { symbol, position, size: alphabet.size() });
        }
        Ok(Word { alphabet, symbols })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Word { alphabet, symbols: Vec::new() }
    }

    /// Caller guarantees every symbol lies in `1..=alphabet.size()`.
    pub(crate) fn from_valid(alphabet: Alphabet, symbols: Vec<u32>) -> Self {
        debug_assert!(symbols.iter().all(|&s| alphabet.contains(s)));
        Word { alphabet, symbols }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u32> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn first(&self) -> Option<u32> {
        self.symbols.first().copied()
    }

    /// `self ++ other`. Both words must share an alphabet.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        ensure_same(self.alphabet, other.alphabet)?;
        let mut symbols = Vec::with_capacity(self.len() + other.len());
        symbols.extend_from_slice(&self.symbols);
        symbols.extend_from_slice(&other.symbols);
        Ok(Word::from_valid(self.alphabet, symbols))
    }

    /// `self ++ self`.
    pub fn doubled(&self) -> Word {
        let mut symbols = Vec::with_capacity(2 * self.len());
        symbols.extend_from_slice(&self.symbols);
        symbols.extend_from_slice(&self.symbols);
        Word::from_valid(self.alphabet, symbols)
    }

    /// The half `x` when `self = xx`.
    pub fn square_root(&self) -> Option<Word> {
        let n = self.len();
        if !n.is_multiple_of(2) {
            return None;
        }
        let (a, b) = self.symbols.split_at(n / 2);
        (a == b).then(|| Word::from_valid(self.alphabet, a.to_vec()))
    }

    /// Replaces `self` by the word of the next rank.
    pub(crate) fn advance(&mut self) {
        increment(&mut self.symbols, self.alphabet.size());
    }

    pub fn is_square(&self) -> bool {
        let n = self.len();
        n.is_multiple_of(2) && self.symbols[..n / 2] == self.symbols[n / 2..]
    }

    /// Parses the base-36 text form (`-` for the empty word).
    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Word> {
        let text = text.trim();
        if alphabet.size() > MAX_TEXT_ALPHABET {
            return Err(Error::Unsupported(format!("text codec supports k <= {MAX_TEXT_ALPHABET}, got {alphabet}")));
        }
        if text == EMPTY_WORD_TEXT {
            return Ok(Word::empty(alphabet));
        }
        if text.is_empty() {
            return Err(Error::Parse(format!("empty input; the empty word is written `{EMPTY_WORD_TEXT}`")));
        }
        let mut symbols = Vec::with_capacity(text.len());
        for (position, c) in text.chars().enumerate() {
            let symbol = match c {
                '1'..='9' => c as u32 - '0' as u32,
                'a'..='z' => c as u32 - 'a' as u32 + 10,
                'A'..='Z' => c as u32 - 'A' as u32 + 10,
                _ => return Err(Error::Parse(format!("invalid symbol character `{c}` at position {position}"))),
            };
            if !alphabet.contains(symbol) {
                return Err(Error::InvalidWord { symbol, position, size: alphabet.size() });
            }
            symbols.push(symbol);
        }
        Ok(Word::from_valid(alphabet, symbols))
    }

    /// Base-36 text form; only defined for `k <= 35`.
    pub fn to_text(&self) -> Result<String> {
        if self.alphabet.size() > MAX_TEXT_ALPHABET {
            return Err(Error::Unsupported(format!(
                "text codec supports k <= {MAX_TEXT_ALPHABET}, got {}",
                self.alphabet
            )));
        }
        Ok(self.render())
    }

    fn render(&self) -> String {
        if self.is_empty() {
            return EMPTY_WORD_TEXT.to_string();
        }
        self.symbols.iter().map(|&s| char::from_digit(s, 36).expect("symbol below 36")).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alphabet.size() <= MAX_TEXT_ALPHABET {
            f.write_str(&self.render())
        } else {
            write!(f, "{:?}", self.symbols)
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({}, {})", self.alphabet, self)
    }
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Canonical order: alphabet, then length, then colexicographic. Within one
/// alphabet this is exactly rank order.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.alphabet
            .cmp(&other.alphabet)
            .then(self.len().cmp(&other.len()))
            .then_with(|| self.symbols.iter().rev().cmp(other.symbols.iter().rev()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn ensure_same(expected: Alphabet, found: Alphabet) -> Result<()> {
    if expected != found {
        return Err(Error::AlphabetMismatch { expected: expected.size(), found: found.size() });
    }
    Ok(())
}

/// Exact nonnegative rank of a word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rank(BigUint);

impl Rank {
    pub fn new(value: BigUint) -> Self {
        Rank(value)
    }

    pub fn zero() -> Self {
        Rank(BigUint::zero())
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<u64> for Rank {
    fn from(v: u64) -> Self {
        Rank(BigUint::from(v))
    }
}

impl From<BigUint> for Rank {
    fn from(v: BigUint) -> Self {
        Rank(v)
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Rank {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim().replace('_', "").parse::<BigUint>().map(Rank).map_err(|_| Error::Parse(format!("invalid rank `{s}`")))
    }
}

pub(crate) fn rank_u64(symbols: &[u32], k: u32) -> Option<u64> {
    let k = k as u64;
    symbols.iter().rev().try_fold(0u64, |acc, &s| acc.checked_mul(k)?.checked_add(s as u64))
}

pub(crate) fn unrank_u64_into(mut r: u64, k: u32, out: &mut Vec<u32>) {
    out.clear();
    let k = k as u64;
    while r > 0 {
        let d = (r - 1) % k + 1;
        out.push(d as u32);
        r = (r - d) / k;
    }
}

pub(crate) fn word_of_rank_u64(r: u64, alphabet: Alphabet) -> Word {
    let mut symbols = Vec::new();
    unrank_u64_into(r, alphabet.size(), &mut symbols);
    Word::from_valid(alphabet, symbols)
}

/// Bijective base-`k` value `Σ_j k^j · w_j` of the word.
pub fn theta_rank(w: &Word) -> Rank {
    if let Some(r) = rank_u64(w.symbols(), w.alphabet().size()) {
        return Rank::from(r);
    }
    let k = BigUint::from(w.alphabet().size());
    let value = w.symbols().iter().rev().fold(BigUint::zero(), |acc, &s| acc * &k + s);
    Rank(value)
}

/// Inverse of [`theta_rank`]: emits `d = ((n − 1) mod k) + 1` and continues
/// with `(n − d)/k` until `n` reaches zero.
pub fn alpha_unrank(r: &Rank, alphabet: Alphabet) -> Word {
    if let Some(small) = r.to_u64() {
        return word_of_rank_u64(small, alphabet);
    }
    let k = BigUint::from(alphabet.size());
    let mut n = r.value().clone();
    let mut symbols = Vec::new();
    while !n.is_zero() {
        let d = (&n - 1u32).mod_floor(&k) + 1u32;
        symbols.push(d.to_u32().expect("digit below k"));
        n = (n - &d) / &k;
    }
    Word::from_valid(alphabet, symbols)
}

/// Re-expresses `w` over `dst` with the same rank.
pub fn xi_transcode(w: &Word, dst: Alphabet) -> Word {
    if w.alphabet() == dst {
        return w.clone();
    }
    match rank_u64(w.symbols(), w.alphabet().size()) {
        Some(r) => word_of_rank_u64(r, dst),
        None => alpha_unrank(&theta_rank(w), dst),
    }
}

/// Sum of the symbols of `w`.
pub fn omega_sum(w: &Word) -> u128 {
    w.symbols().iter().map(|&s| s as u128).sum()
}

/// Advances `symbols` to the word of the next rank.
pub(crate) fn increment(symbols: &mut Vec<u32>, k: u32) {
    for s in symbols.iter_mut() {
        if *s < k {
            *s += 1;
            return;
        }
        *s = 1;
    }
    symbols.push(1);
}

/// Words in rank order over a contiguous rank range.
#[derive(Clone, Debug)]
pub struct Words {
    alphabet: Alphabet,
    next: Vec<u32>,
    remaining: u64,
}

impl Words {
    /// Words with ranks `start, start+1, …` (`count` of them).
    pub(crate) fn from_rank(alphabet: Alphabet, start: u64, count: u64) -> Self {
        let mut next = Vec::new();
        unrank_u64_into(start, alphabet.size(), &mut next);
        Words { alphabet, next, remaining: count }
    }
}

impl Iterator for Words {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let out = Word::from_valid(self.alphabet, self.next.clone());
        if self.remaining > 0 {
            increment(&mut self.next, self.alphabet.size());
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, Some(n))
    }
}

impl ExactSizeIterator for Words {}

/// Words of rank `0..=max_rank` in canonical order.
pub fn enumerate_words(alphabet: Alphabet, max_rank: &Rank, cap: Cap) -> Result<Words> {
    let count = max_rank.value() + 1u32;
    cap.check_big(&count)?;
    let count = count.to_u64().expect("checked by cap");
    Ok(Words::from_rank(alphabet, 0, count))
}

/// All `k^n` words of length `n` in canonical order.
pub fn words_of_length(alphabet: Alphabet, n: u32, cap: Cap) -> Result<Words> {
    let count = BigUint::from(alphabet.size()).pow(n);
    cap.check_big(&count)?;
    let start = alphabet.first_rank_of_length_u64(n).ok_or_else(|| Error::cap(&count, cap.get()))?;
    Ok(Words::from_rank(alphabet, start, count.to_u64().expect("checked by cap")))
}

/// All words of length at most `n` (`(k^{n+1} − 1)/(k − 1)` of them).
pub fn words_up_to_length(alphabet: Alphabet, n: u32, cap: Cap) -> Result<Words> {
    let count = alphabet.first_rank_of_length(n + 1);
    cap.check_big(&count)?;
    Ok(Words::from_rank(alphabet, 0, count.to_u64().expect("checked by cap")))
}

/// Rank of the last word of length `n`.
pub fn last_rank_of_length(alphabet: Alphabet, n: u32) -> Rank {
    Rank(alphabet.first_rank_of_length(n + 1) - BigUint::one())
}
