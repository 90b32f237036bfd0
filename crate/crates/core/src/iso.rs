//! Rank-preserving isomorphisms between alphabets of sizes `k` and `k ± 1`,
//! and the conjugation of languages, padders and maps across them.
//!
//! Conjugation always reads left to right as functions are applied:
//! the conjugate of a map `f` on the source side is `v ↦ forward(f(backward(v)))`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::langs::{LanguageSpec, Padder, Witnesses};
use crate::words::{ensure_same, xi_transcode, Alphabet, Word};

/// The transcoding bijection between two alphabets whose sizes differ by one.
/// Membership is carried across by construction; storing both directions
/// makes the inverse an isomorphism of the same kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PreservingIso {
    src: Alphabet,
    dst: Alphabet,
}

impl PreservingIso {
    pub fn new(src: Alphabet, dst: Alphabet) -> Result<Self> {
        if src.size().abs_diff(dst.size()) != 1 {
            return Err(Error::Unsupported(format!(
                "isomorphisms connect alphabets differing in size by one, got {src} and {dst}"
            )));
        }
        Ok(PreservingIso { src, dst })
    }

    pub fn src(&self) -> Alphabet {
        self.src
    }

    pub fn dst(&self) -> Alphabet {
        self.dst
    }

    pub fn inverse(&self) -> PreservingIso {
        PreservingIso { src: self.dst, dst: self.src }
    }

    pub fn forward(&self, w: &Word) -> Result<Word> {
        ensure_same(self.src, w.alphabet())?;
        Ok(xi_transcode(w, self.dst))
    }

    pub fn backward(&self, v: &Word) -> Result<Word> {
        ensure_same(self.dst, v.alphabet())?;
        Ok(xi_transcode(v, self.src))
    }
}

/// The isomorphism from `src` to the alphabet with one more symbol.
pub fn build_xi(src: Alphabet) -> PreservingIso {
    PreservingIso { src, dst: src.grown() }
}

/// `H = forward(L)`: decides `v` by asking `L` about `backward(v)`.
pub fn conjugate_language(lang: &LanguageSpec, iso: &PreservingIso) -> Result<LanguageSpec> {
    ensure_same(iso.src(), lang.alphabet())?;
    let src = iso.src();
    let inner = lang.decider().clone();
    let decide = Arc::new(move |v: &Word| inner(&xi_transcode(v, src)));
    let padder = match lang.padder() {
        Some(_) => Some(transfer_padding(lang, iso)?),
        None => None,
    };
    let witnesses = lang.witnesses().map(|w| Witnesses {
        member: xi_transcode(&w.member, iso.dst()),
        non_member: xi_transcode(&w.non_member, iso.dst()),
    });
    Ok(LanguageSpec::from_parts(format!("xi({})@{}", lang.name(), iso.dst()), iso.dst(), decide, padder, witnesses))
}

/// Padding for `forward(L)`: `pad_H(y, z) = forward(pad_L(backward y, backward z))`
/// and `dec_H(z) = forward(dec_L(backward z))`.
pub fn transfer_padding(lang: &LanguageSpec, iso: &PreservingIso) -> Result<Padder> {
    ensure_same(iso.src(), lang.alphabet())?;
    let inner =
        lang.padder().ok_or_else(|| Error::Unsupported(format!("language {} has no padder", lang.name())))?.clone();
    let (src, dst) = (iso.src(), iso.dst());
    let pad_l = inner.pad.clone();
    let dec_l = inner.dec;
    Ok(Padder {
        pad: Arc::new(move |y: &Word, z: &Word| {
            xi_transcode(&pad_l(&xi_transcode(y, src), &xi_transcode(z, src)), dst)
        }),
        dec: Arc::new(move |z: &Word| xi_transcode(&dec_l(&xi_transcode(z, src)), dst)),
    })
}

/// `v ↦ forward(f(backward(v)))`.
pub fn conjugate_map<F>(f: F, iso: &PreservingIso) -> impl Fn(&Word) -> Word + Send + Sync
where
    F: Fn(&Word) -> Word + Send + Sync,
{
    let (src, dst) = (iso.src(), iso.dst());
    move |v: &Word| xi_transcode(&f(&xi_transcode(v, src)), dst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langs::{builtin_language, BuiltinLanguage, Decision};
    use crate::words::{enumerate_words, theta_rank, Cap, Rank};

    fn a(k: u32) -> Alphabet {
        Alphabet::new(k).unwrap()
    }

    fn w(k: u32, s: &[u32]) -> Word {
        Word::new(a(k), s.to_vec()).unwrap()
    }

    #[test]
    fn xi_examples() {
        let xi = build_xi(a(3));
        assert_eq!(xi.dst(), a(4));
        assert_eq!(xi.forward(&w(3, &[3, 3])).unwrap(), w(4, &[4, 2]));
        assert!(xi.forward(&Word::empty(a(3))).unwrap().is_empty());
        assert!(xi.forward(&w(4, &[1])).is_err());
        assert_eq!(xi.inverse().forward(&w(4, &[4, 2])).unwrap(), w(3, &[3, 3]));
    }

    #[test]
    fn sizes_must_be_adjacent() {
        assert!(PreservingIso::new(a(3), a(5)).is_err());
        assert!(PreservingIso::new(a(4), a(3)).is_ok());
    }

    #[test]
    fn round_trips_up_to_ten_thousand() {
        let xi = build_xi(a(3));
        for word in enumerate_words(a(3), &Rank::from(10_000), Cap::DEFAULT).unwrap() {
            let there = xi.forward(&word).unwrap();
            assert_eq!(theta_rank(&there), theta_rank(&word));
            assert_eq!(xi.backward(&there).unwrap(), word);
        }
    }

    #[test]
    fn conjugate_examples() {
        let xi = build_xi(a(3));
        let l = builtin_language(BuiltinLanguage::FirstSymbol, a(3));
        let h = conjugate_language(&l, &xi).unwrap();
        assert_eq!(h.alphabet(), a(4));
        let v = xi.forward(&w(3, &[1, 3])).unwrap();
        assert_eq!(h.decide(&v).unwrap(), Decision::Accept);
        assert_eq!(h.contains(&Word::empty(a(4))), l.contains(&Word::empty(a(3))));
        let wit = h.witnesses().unwrap();
        assert!(h.contains(&wit.member) && !h.contains(&wit.non_member));
        assert!(conjugate_language(&l, &build_xi(a(2))).is_err());
    }

    #[test]
    fn transferred_padding_example() {
        let xi = build_xi(a(3));
        let l = builtin_language(BuiltinLanguage::FirstSymbol, a(3));
        let h = conjugate_language(&l, &xi).unwrap();
        let e = Word::empty(a(4));
        assert_eq!(h.pad(&e, &e).unwrap(), xi.forward(&w(3, &[1, 2])).unwrap());
    }

    #[test]
    fn conjugated_map_is_identity_for_identity() {
        let xi = build_xi(a(2));
        let m = conjugate_map(|x: &Word| x.clone(), &xi);
        for v in enumerate_words(a(3), &Rank::from(500), Cap::DEFAULT).unwrap() {
            assert_eq!(m(&v), v);
        }
    }
}
