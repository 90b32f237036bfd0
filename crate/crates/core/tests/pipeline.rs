use num_bigint::BigInt;
use num_rational::BigRational;

use phaselab::phase::audit::AdequacyConfig;
use phaselab::phase::{adequacy_audit, builtin_parameter, curve, naeu_audit, PolySpec};
use phaselab::protocol::{run_scenario, Scenario};
use phaselab::words::last_rank_of_length;
use phaselab::{
    build_phi_oracle, build_xi, builtin_language, farago_target, parse_language, xi_transcode, Alphabet,
    BuiltinLanguage, Cap, Error, Rank, Word,
};

fn a(k: u32) -> Alphabet {
    Alphabet::new(k).unwrap()
}

#[test]
fn transcode_examples() {
    let w = Word::parse("21", a(3)).unwrap();
    assert_eq!(xi_transcode(&w, a(4)).to_text().unwrap(), "11");
    assert_eq!(xi_transcode(&Word::empty(a(3)), a(4)).to_text().unwrap(), "-");
    assert!(Word::parse("4", a(3)).is_err());
}

#[test]
fn signed_length_csv_has_pure_slices() {
    let l = builtin_language(BuiltinLanguage::SignedLengthDemo, a(3));
    let g = builtin_parameter("signed-length").unwrap();
    let r = curve(&l, &g, &last_rank_of_length(a(3), 8), Cap::DEFAULT).unwrap();
    let csv = r.to_csv();
    let line = csv.lines().find(|l| l.starts_with("2,")).unwrap();
    let fields: Vec<&str> = line.split(',').collect();
    assert_eq!(fields[1], fields[2]);
    assert_eq!(&fields[3..], ["0", "1/1"]);
    assert_eq!(r.to_csv(), curve(&l, &g, &last_rank_of_length(a(3), 8), Cap::DEFAULT).unwrap().to_csv());
}

#[test]
fn cap_is_enforced() {
    let l = builtin_language(BuiltinLanguage::FirstSymbol, a(2));
    let g = builtin_parameter("length").unwrap();
    let err = curve(&l, &g, &Rank::from(1_000u64), Cap::new(100)).unwrap_err();
    assert!(matches!(err, Error::CapExceeded { .. }), "{err:?}");
}

#[test]
fn adequacy_flags_steep_polynomial() {
    let l = builtin_language(BuiltinLanguage::OmegaParity, a(3));
    let t = farago_target(&l);
    let phi = build_phi_oracle(&l, &t.target, &last_rank_of_length(a(3), 5), Cap::DEFAULT).unwrap();
    let iso = build_xi(a(3));
    let config = AdequacyConfig { set_range: 1..=4, ..AdequacyConfig::default() };
    let steep: PolySpec = "10n+1".parse().unwrap();
    let r = adequacy_audit(&l, &iso, &phi, &steep, &config, Cap::DEFAULT).unwrap();
    assert!(!r.derivative.pass);
    assert_eq!(r.derivative.first_failure, Some(0));

    let gentle: PolySpec = "n+8".parse().unwrap();
    let r = adequacy_audit(&l, &iso, &phi, &gentle, &config, Cap::DEFAULT).unwrap();
    assert!(r.derivative.pass && r.scaled_monotonicity.pass);
}

#[test]
fn adequacy_rejects_even_alphabets() {
    let l = builtin_language(BuiltinLanguage::OmegaParity, a(2));
    let t = farago_target(&l);
    let phi = build_phi_oracle(&l, &t.target, &Rank::from(100u64), Cap::DEFAULT).unwrap();
    let poly: PolySpec = "n+8".parse().unwrap();
    let err = adequacy_audit(&l, &build_xi(a(2)), &phi, &poly, &AdequacyConfig::default(), Cap::DEFAULT).unwrap_err();
    assert!(matches!(err, Error::NotApplicable(_)));
}

#[test]
fn naeu_rows_are_errorless() {
    let l = builtin_language(BuiltinLanguage::OmegaParity, a(2));
    let t = farago_target(&l);
    let phi = build_phi_oracle(&l, &t.target, &last_rank_of_length(a(2), 8), Cap::DEFAULT).unwrap();
    let poly: PolySpec = "n+4".parse().unwrap();
    let r = naeu_audit(&l, &phi, &t, &poly, 1..=8, Cap::DEFAULT).unwrap();
    assert!(r.rows.iter().all(|row| row.errors == 0));
    assert!(r.rows.iter().all(|row| row.accepted_correct + row.rejected_correct + row.bottom == row.b_size));
}

#[test]
fn parse_language_tokens() {
    assert_eq!(parse_language("not-first-symbol@k=3", None).unwrap().name(), "not-first-symbol@k=3");
    assert!(parse_language("no-such@k=3", None).is_err());
    assert_eq!(parse_language("universal", Some(a(5))).unwrap().alphabet(), a(5));
}

#[test]
fn verify_without_noise_is_certain() {
    let s = Scenario::parse("lang=first-symbol@k=3\nparam=signed-length\nmax_len=6\ntarget=1322\ncohort_size=20\n")
        .unwrap();
    let r = run_scenario(&s, Cap::DEFAULT).unwrap();
    assert_eq!(r.overall_confidence, BigRational::from_integer(BigInt::from(1)));
    assert_eq!(r.records.len(), 20);
}
