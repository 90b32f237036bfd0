use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use phaselab::langs::universal;
use phaselab::protocol::{run_verification, Device, Prediction};
use phaselab::roughp::{default_csb_injections, DEFAULT_STEP_BUDGET};
use phaselab::{
    alpha_unrank, build_phi_csb, build_xi, builtin_language, complement, errorless_heuristic, farago_target,
    theta_rank, xi_transcode, Alphabet, Bijection, BuiltinLanguage, Decision, HeuristicOutcome, Rank, Word,
};

fn word(k: u32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(1..=k, 0..=max_len).prop_map(move |s| Word::new(Alphabet::new(k).unwrap(), s).unwrap())
}

fn sized_word(max_len: usize) -> impl Strategy<Value = Word> {
    (2u32..=6).prop_flat_map(move |k| word(k, max_len))
}

fn language(k: u32) -> impl Strategy<Value = phaselab::LanguageSpec> {
    prop::sample::select(BuiltinLanguage::ALL.to_vec())
        .prop_map(move |b| builtin_language(b, Alphabet::new(k).unwrap()))
}

proptest! {
    #[test]
    fn codec_round_trip(w in sized_word(40)) {
        let r = theta_rank(&w);
        prop_assert_eq!(alpha_unrank(&r, w.alphabet()), w);
    }

    #[test]
    fn unrank_round_trip(k in 2u32..=9, r in any::<u64>()) {
        let rank = Rank::from(r);
        let w = alpha_unrank(&rank, Alphabet::new(k).unwrap());
        prop_assert_eq!(theta_rank(&w), rank);
    }

    #[test]
    fn xi_bijective_and_shortening(w in sized_word(30)) {
        let iso = build_xi(w.alphabet());
        let v = iso.forward(&w).unwrap();
        prop_assert!(v.len() <= w.len());
        prop_assert_eq!(theta_rank(&v), theta_rank(&w));
        prop_assert_eq!(iso.backward(&v).unwrap(), w.clone());
        prop_assert_eq!(xi_transcode(&v, w.alphabet()), w);
    }

    #[test]
    fn pad_invariants(
        (l, x, y) in (2u32..=5).prop_flat_map(|k| (language(k), word(k, 12), word(k, 12)))
    ) {
        let p = l.pad(&x, &y).unwrap();
        prop_assert_eq!(l.dec(&p).unwrap(), y);
        prop_assert_eq!(l.contains(&p), l.contains(&x));
    }

    #[test]
    fn pad_injective_in_payload(
        (l, x, y, z) in (2u32..=4).prop_flat_map(|k| (language(k), word(k, 8), word(k, 8), word(k, 8)))
    ) {
        prop_assume!(y != z);
        prop_assert_ne!(l.pad(&x, &y).unwrap(), l.pad(&x, &z).unwrap());
    }

    #[test]
    fn complement_duality(
        (l, w) in (2u32..=5).prop_flat_map(|k| (language(k), word(k, 16)))
    ) {
        let c = complement(&l);
        prop_assert_ne!(c.contains(&w), l.contains(&w));
        prop_assert_eq!(complement(&c).contains(&w), l.contains(&w));
        prop_assert_eq!(
            c.decide(&w).unwrap(),
            l.decide(&w).unwrap().flipped()
        );
    }

    #[test]
    fn conjugate_membership(
        (l, w) in (2u32..=5).prop_flat_map(|k| (language(k), word(k, 16)))
    ) {
        let iso = build_xi(l.alphabet());
        let h = phaselab::conjugate_language(&l, &iso).unwrap();
        prop_assert_eq!(h.contains(&iso.forward(&w).unwrap()), l.contains(&w));
    }

    #[test]
    fn heuristic_is_errorless(
        (l, w) in (2u32..=4).prop_flat_map(|k| (language(k), word(k, 20)))
    ) {
        let t = farago_target(&l);
        let member = t.target.contains(&w);
        match errorless_heuristic(&t, &w) {
            HeuristicOutcome::Accept => prop_assert!(member),
            HeuristicOutcome::Reject => prop_assert!(!member),
            HeuristicOutcome::Bottom => prop_assert!(w.is_square()),
        }
    }

    #[test]
    fn heuristic_answers_on_doubled_words(
        (l, x) in (2u32..=4).prop_flat_map(|k| (language(k), word(k, 10)))
    ) {
        let t = farago_target(&l);
        let xx = x.doubled();
        prop_assert_eq!(t.target.contains(&xx), l.contains(&x) || phaselab::omega_sum(&xx) % 2 == 1);
    }

    #[test]
    fn csb_is_bijective_and_class_preserving(
        (l, w) in (2u32..=3).prop_flat_map(|k| (language(k), word(k, 14)))
    ) {
        let t = farago_target(&l);
        let (f, g) = default_csb_injections(&l).unwrap();
        let phi = build_phi_csb(l.alphabet(), f, g, DEFAULT_STEP_BUDGET);
        let y = phi.forward(&w).unwrap();
        prop_assert_eq!(phi.backward(&y).unwrap(), w.clone());
        prop_assert_eq!(t.target.contains(&y), l.contains(&w));
        let x = phi.backward(&w).unwrap();
        prop_assert_eq!(phi.forward(&x).unwrap(), w);
    }

    #[test]
    fn product_rule_order_independent(
        cases in prop::collection::vec((0i64..=10, any::<bool>()), 1..12),
        seed in any::<u64>()
    ) {
        let a = Alphabet::new(2).unwrap();
        let cohort: Vec<Word> = (0..cases.len() as u64).map(|i| alpha_unrank(&Rank::from(i), a)).collect();
        let answers: HashMap<Word, (BigRational, Decision)> = cohort
            .iter()
            .zip(&cases)
            .map(|(w, &(p, acc))| {
                (w.clone(), (BigRational::new(BigInt::from(p), BigInt::from(10)), Decision::from_bool(acc)))
            })
            .collect();
        struct Table(HashMap<Word, (BigRational, Decision)>);
        impl Device for Table {
            fn query(&self, w: &Word) -> Result<Decision, String> {
                Ok(self.0[w].1)
            }
        }
        let dev = Table(answers.clone());
        let predict = |w: &Word| Ok(Prediction::from_fraction(answers[w].0.clone()));
        let forward = run_verification(&dev, &cohort, predict).unwrap();

        let mut shuffled = cohort.clone();
        let n = shuffled.len();
        for i in 0..n {
            let j = (seed.rotate_left(i as u32) as usize) % n;
            shuffled.swap(i, j);
        }
        let other = run_verification(&dev, &shuffled, predict).unwrap();
        prop_assert_eq!(&forward.overall_confidence, &other.overall_confidence);

        let mut expected = BigRational::from_integer(1.into());
        for w in &cohort {
            let p = Prediction::from_fraction(answers[w].0.clone());
            if p.outcome != answers[w].1 {
                expected *= BigRational::from_integer(1.into()) - p.confidence;
            }
        }
        prop_assert_eq!(forward.overall_confidence, expected);
    }
}

#[test]
fn universal_language_has_no_witnesses() {
    let u = universal(Alphabet::new(3).unwrap());
    assert!(u.witnesses().is_none());
}
