//! Languages as total deciders, the kernel padding scheme, and the built-in
//! demo languages.
//!
//! A padded word has the shape `escape(kernel) ++ (1,2) ++ payload`, where
//! `escape` doubles every `1`. Reading a word left to right, `(1,1)` decodes
//! to a single `1`, the first `(1,2)` ends the kernel, and every other symbol
//! is copied. Every built-in decides membership on the kernel alone, so
//! padding never changes membership and the payload is always recoverable.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{ensure_same, omega_sum, Alphabet, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Decision {
    Accept,
    Reject,
}

impl Decision {
    pub fn from_bool(accept: bool) -> Self {
        if accept {
            Decision::Accept
        } else {
            Decision::Reject
        }
    }

    pub fn is_accept(self) -> bool {
        self == Decision::Accept
    }

    pub fn flipped(self) -> Self {
        match self {
            Decision::Accept => Decision::Reject,
            Decision::Reject => Decision::Accept,
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Accept => "ACCEPT",
            Decision::Reject => "REJECT",
        })
    }
}

pub type DecideFn = Arc<dyn Fn(&Word) -> bool + Send + Sync>;
pub type PadFn = Arc<dyn Fn(&Word, &Word) -> Word + Send + Sync>;
pub type DecFn = Arc<dyn Fn(&Word) -> Word + Send + Sync>;

/// A `(pad, dec)` pair. Both functions assume inputs over the owning
/// language's alphabet.
#[derive(Clone)]
pub struct Padder {
    pub pad: PadFn,
    pub dec: DecFn,
}

impl Padder {
    pub fn kernel_scheme() -> Self {
        Padder { pad: Arc::new(|x: &Word, y: &Word| kernel_pad(x, y)), dec: Arc::new(kernel_dec) }
    }
}

impl fmt::Debug for Padder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Padder")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witnesses {
    pub member: Word,
    pub non_member: Word,
}

/// A total membership decider over one alphabet.
#[derive(Clone)]
pub struct LanguageSpec {
    name: String,
    alphabet: Alphabet,
    decide: DecideFn,
    padder: Option<Padder>,
    witnesses: Option<Witnesses>,
}

impl fmt::Debug for LanguageSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LanguageSpec")
            .field("name", &self.name)
            .field("alphabet", &self.alphabet)
            .field("paddable", &self.padder.is_some())
            .field("witnesses", &self.witnesses)
            .finish()
    }
}

impl LanguageSpec {
    pub fn new<F>(name: impl Into<String>, alphabet: Alphabet, decide: F) -> Self
    where
        F: Fn(&Word) -> bool + Send + Sync + 'static,
    {
        LanguageSpec { name: name.into(), alphabet, decide: Arc::new(decide), padder: None, witnesses: None }
    }

    pub(crate) fn from_parts(
        name: String,
        alphabet: Alphabet,
        decide: DecideFn,
        padder: Option<Padder>,
        witnesses: Option<Witnesses>,
    ) -> Self {
        LanguageSpec { name, alphabet, decide, padder, witnesses }
    }

    pub fn with_padder(mut self, padder: Padder) -> Self {
        self.padder = Some(padder);
        self
    }

    /// Attaches witnesses after checking them against the decider.
    pub fn with_witnesses(mut self, member: Word, non_member: Word) -> Result<Self> {
        ensure_same(self.alphabet, member.alphabet())?;
        ensure_same(self.alphabet, non_member.alphabet())?;
        if !self.contains(&member) {
            return Err(Error::Construction(format!("{} rejects its member witness {member}", self.name)));
        }
        if self.contains(&non_member) {
            return Err(Error::Construction(format!("{} accepts its non-member witness {non_member}", self.name)));
        }
        self.witnesses = Some(Witnesses { member, non_member });
        Ok(self)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn padder(&self) -> Option<&Padder> {
        self.padder.as_ref()
    }

    pub fn witnesses(&self) -> Option<&Witnesses> {
        self.witnesses.as_ref()
    }

    pub(crate) fn decider(&self) -> &DecideFn {
        &self.decide
    }

    /// Membership without the alphabet check; for hot enumeration loops.
    pub fn contains(&self, w: &Word) -> bool {
        debug_assert_eq!(w.alphabet(), self.alphabet);
        (self.decide)(w)
    }

    pub fn decide(&self, w: &Word) -> Result<Decision> {
        ensure_same(self.alphabet, w.alphabet())?;
        Ok(Decision::from_bool((self.decide)(w)))
    }

    pub fn pad(&self, x: &Word, y: &Word) -> Result<Word> {
        let padder = self.require_padder()?;
        ensure_same(self.alphabet, x.alphabet())?;
        ensure_same(self.alphabet, y.alphabet())?;
        Ok((padder.pad)(x, y))
    }

    pub fn dec(&self, z: &Word) -> Result<Word> {
        let padder = self.require_padder()?;
        ensure_same(self.alphabet, z.alphabet())?;
        Ok((padder.dec)(z))
    }

    fn require_padder(&self) -> Result<&Padder> {
        self.padder.as_ref().ok_or_else(|| Error::Unsupported(format!("language {} has no padder", self.name)))
    }
}

/// Result of scanning a word for its kernel: the decoded prefix and the
/// index just past the separator, if one was found.
fn scan(symbols: &[u32]) -> (Vec<u32>, Option<usize>) {
    let mut out = Vec::with_capacity(symbols.len());
    let mut i = 0;
    while i < symbols.len() {
        let s = symbols[i];
        if s == 1 {
            match symbols.get(i + 1) {
                Some(1) => {
                    out.push(1);
                    i += 2;
                    continue;
                }
                Some(2) => return (out, Some(i + 2)),
                _ => {}
            }
        }
        out.push(s);
        i += 1;
    }
    (out, None)
}

/// The decoded prefix before the first unescaped `(1,2)`.
pub fn kernel(w: &Word) -> Word {
    Word::from_valid(w.alphabet(), scan(w.symbols()).0)
}

/// Doubles every `1`.
pub fn escape(w: &Word) -> Word {
    let mut out = Vec::with_capacity(w.len() + 2);
    for &s in w.symbols() {
        out.push(s);
        if s == 1 {
            out.push(1);
        }
    }
    Word::from_valid(w.alphabet(), out)
}

/// `escape(kernel(x)) ++ (1,2) ++ y`. Both words must share an alphabet.
pub fn kernel_pad(x: &Word, y: &Word) -> Word {
    debug_assert_eq!(x.alphabet(), y.alphabet());
    let k = kernel(x);
    let mut out = escape(&k).into_symbols();
    out.reserve(y.len() + 2);
    out.extend_from_slice(&[1, 2]);
    out.extend_from_slice(y.symbols());
    Word::from_valid(x.alphabet(), out)
}

/// The suffix after the first unescaped separator, or `ε` without one.
pub fn kernel_dec(z: &Word) -> Word {
    match scan(z.symbols()).1 {
        Some(at) => Word::from_valid(z.alphabet(), z.symbols()[at..].to_vec()),
        None => Word::empty(z.alphabet()),
    }
}

/// `lang.pad(x, y)`.
pub fn pad(lang: &LanguageSpec, x: &Word, y: &Word) -> Result<Word> {
    lang.pad(x, y)
}

/// `lang.dec(z)`.
pub fn dec(lang: &LanguageSpec, z: &Word) -> Result<Word> {
    lang.dec(z)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BuiltinLanguage {
    FirstSymbol,
    KernelMajority,
    OmegaParity,
    SignedLengthDemo,
}

impl BuiltinLanguage {
    pub const ALL: [BuiltinLanguage; 4] = [
        BuiltinLanguage::FirstSymbol,
        BuiltinLanguage::KernelMajority,
        BuiltinLanguage::OmegaParity,
        BuiltinLanguage::SignedLengthDemo,
    ];

    pub fn token(self) -> &'static str {
        match self {
            BuiltinLanguage::FirstSymbol => "first-symbol",
            BuiltinLanguage::KernelMajority => "kernel-majority",
            BuiltinLanguage::OmegaParity => "omega-parity",
            BuiltinLanguage::SignedLengthDemo => "signed-length-demo",
        }
    }

    /// Name of the parameter this language is meant to be sliced by.
    pub fn canonical_parameter(self) -> &'static str {
        match self {
            BuiltinLanguage::FirstSymbol | BuiltinLanguage::SignedLengthDemo => "signed-length",
            BuiltinLanguage::KernelMajority => "majority-balance",
            BuiltinLanguage::OmegaParity => "length",
        }
    }
}

impl fmt::Display for BuiltinLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for BuiltinLanguage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        BuiltinLanguage::ALL
            .into_iter()
            .find(|b| b.token() == norm)
            .ok_or_else(|| Error::UnknownLanguage(s.to_string()))
    }
}

fn first_symbol_is_one(w: &Word) -> bool {
    let (k, _) = scan(w.symbols());
    k.first() == Some(&1)
}

pub fn builtin_language(name: BuiltinLanguage, a: Alphabet) -> LanguageSpec {
    let k = a.size();
    let one = Word::from_valid(a, vec![1]);
    let (lang, member) = match name {
        BuiltinLanguage::FirstSymbol | BuiltinLanguage::SignedLengthDemo => {
            (LanguageSpec::new("", a, first_symbol_is_one), one)
        }
        BuiltinLanguage::KernelMajority => {
            let lang = LanguageSpec::new("", a, move |w: &Word| {
                let (kern, _) = scan(w.symbols());
                let top = kern.iter().filter(|&&s| s == k).count();
                let low = kern.iter().filter(|&&s| s == 1).count();
                top > low
            });
            (lang, Word::from_valid(a, vec![k]))
        }
        BuiltinLanguage::OmegaParity => {
            let lang = LanguageSpec::new("", a, |w: &Word| {
                let (kern, _) = scan(w.symbols());
                kern.iter().map(|&s| s as u64).sum::<u64>() % 2 == 1
            });
            (lang, one)
        }
    };
    lang.renamed(format!("{name}@{a}"))
        .with_padder(Padder::kernel_scheme())
        .with_witnesses(member, Word::empty(a))
        .expect("built-in witnesses are valid")
}

/// Flips the decider and swaps the witnesses; padding is unchanged.
pub fn complement(lang: &LanguageSpec) -> LanguageSpec {
    let inner = lang.decide.clone();
    let witnesses =
        lang.witnesses.as_ref().map(|w| Witnesses { member: w.non_member.clone(), non_member: w.member.clone() });
    let name = match lang.name.strip_prefix("not-") {
        Some(base) => base.to_string(),
        None => format!("not-{}", lang.name),
    };
    LanguageSpec::from_parts(name, lang.alphabet, Arc::new(move |w: &Word| !inner(w)), lang.padder.clone(), witnesses)
}

/// `Σ*`.
pub fn universal(a: Alphabet) -> LanguageSpec {
    LanguageSpec::new(format!("universal@{a}"), a, |_| true).with_padder(Padder::kernel_scheme())
}

/// `∅`.
pub fn empty(a: Alphabet) -> LanguageSpec {
    LanguageSpec::new(format!("empty@{a}"), a, |_| false).with_padder(Padder::kernel_scheme())
}

/// Parses tokens such as `first-symbol@k=3`, `universal@k=2` or
/// `not-omega-parity@k=2`. A token without `@` takes its alphabet from
/// `default_alphabet`.
pub fn parse_language(token: &str, default_alphabet: Option<Alphabet>) -> Result<LanguageSpec> {
    let token = token.trim();
    let (name, alphabet) = match token.split_once('@') {
        Some((name, a)) => (name, a.parse::<Alphabet>()?),
        None => (
            token,
            default_alphabet
                .ok_or_else(|| Error::Parse(format!("language `{token}` needs an alphabet, e.g. `{token}@k=3`")))?,
        ),
    };
    if let Some(inner) = name.strip_prefix("not-") {
        return Ok(complement(&parse_language(&format!("{inner}@{alphabet}"), None)?));
    }
    match name {
        "universal" | "all" => Ok(universal(alphabet)),
        "empty" | "none" => Ok(empty(alphabet)),
        _ => name
            .parse::<BuiltinLanguage>()
            .map(|b| builtin_language(b, alphabet))
            .map_err(|_| Error::UnknownLanguage(token.to_string())),
    }
}

/// Membership-relevant weight of a word's kernel.
pub fn kernel_omega(w: &Word) -> u128 {
    omega_sum(&kernel(w))
}
