//! Exhaustive, exact experiments on decision-problem phase transitions.
//!
//! Words over `{1..k}` are ranked by bijective base-`k` numeration, which
//! gives rank-preserving bijections between alphabets of neighbouring sizes.
//! On top of that the crate provides kernel-paddable demo languages,
//! squares-or-odd-weight target languages with errorless heuristics,
//! class-preserving bijections, accepting-fraction curves with finite-window
//! transition verdicts, balance audits and a simulator for checking a noisy
//! decision device against a phase curve.

pub mod error;
pub mod iso;
pub mod langs;
pub mod phase;
pub mod protocol;
pub mod report;
pub mod roughp;
pub mod suite;
pub mod words;

pub use error::{Error, Result};
pub use iso::{build_xi, conjugate_language, conjugate_map, transfer_padding, PreservingIso};
pub use langs::{
    builtin_language, complement, dec, kernel, pad, parse_language, BuiltinLanguage, Decision, LanguageSpec, Padder,
    Witnesses,
};
pub use roughp::{
    b_set, bottom_fraction, build_phi_csb, build_phi_oracle, errorless_heuristic, farago_target, Bijection,
    CsbBijection, FaragoTarget, HeuristicOutcome, Injection, RankMatchingOracle,
};
pub use words::{alpha_unrank, enumerate_words, omega_sum, theta_rank, xi_transcode, Alphabet, Cap, Rank, Word};
