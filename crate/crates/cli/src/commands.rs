use std::fmt::Write as _;
use std::io::Read;

use num_rational::BigRational;
use serde_json::json;

use phaselab::phase::audit::{b_set_member_count, AdequacyConfig};
use phaselab::phase::{
    adequacy_audit, builtin_parameter, chi_bounds, curve as build_curve, curve_with_heuristic, detect_transition,
    naeu_audit, sparsity_probe, Parameter, PolySpec, TransitionTolerances,
};
use phaselab::protocol::{run_scenario, CohortPolicy, Scenario};
use phaselab::report::{compact, exact, parse_rational};
use phaselab::roughp::{default_csb_injections, roughp_decide, DEFAULT_STEP_BUDGET};
use phaselab::suite::{all_pass, run_suite, SuiteScale};
use phaselab::words::last_rank_of_length;
use phaselab::{
    b_set, build_phi_csb, build_phi_oracle, build_xi, conjugate_language, errorless_heuristic, farago_target,
    parse_language, xi_transcode, Alphabet, Bijection, BuiltinLanguage, Cap, HeuristicOutcome, LanguageSpec, Rank,
    Word,
};

use crate::output::emit;
use crate::settings::Settings;
use crate::{
    AuditArgs, ConjugateArgs, Corpus, CurveArgs, Failure, HeuristicArgs, SuiteArgs, TranscodeArgs, VerifyArgs,
};

type Outcome = Result<(), Failure>;

const CORPUS_KEYS: [&str; 4] = ["lang", "k", "max_rank", "max_len"];

fn cap() -> Result<Cap, Failure> {
    Ok(Cap::from_env()?)
}

fn alphabet(k: Option<u32>) -> Result<Option<Alphabet>, Failure> {
    k.map(Alphabet::new).transpose().map_err(Failure::from)
}

fn rational(s: &str, what: &str) -> Result<BigRational, Failure> {
    parse_rational(s).map_err(|_| Failure::usage(format!("invalid {what} `{s}`")))
}

fn pick_string(s: &Settings, flag: Option<String>, key: &str) -> Option<String> {
    flag.or_else(|| s.raw(key).map(str::to_string))
}

fn language(s: &Settings, lang: Option<String>, k: Option<u32>) -> Result<LanguageSpec, Failure> {
    let token = pick_string(s, lang, "lang").ok_or_else(|| Failure::usage("missing --lang"))?;
    let k = s.pick(k, "k")?;
    Ok(parse_language(&token, alphabet(k)?)?)
}

struct Resolved {
    lang: LanguageSpec,
    max_rank: Rank,
}

fn corpus(s: &Settings, c: Corpus) -> Result<Resolved, Failure> {
    let lang = language(s, c.lang, c.k)?;
    let max_rank = pick_string(s, c.max_rank, "max_rank");
    let max_len = s.pick(c.max_len, "max_len")?;
    let max_rank = match (max_rank, max_len) {
        (Some(_), Some(_)) => return Err(Failure::usage("give either --max-rank or --max-len, not both")),
        (Some(r), None) => r.parse::<Rank>()?,
        (None, Some(n)) => last_rank_of_length(lang.alphabet(), n),
        (None, None) => return Err(Failure::usage("missing --max-rank or --max-len")),
    };
    Ok(Resolved { lang, max_rank })
}

fn default_parameter(lang: &LanguageSpec) -> Result<String, Failure> {
    let base = lang.name().split('@').next().unwrap_or("");
    base.trim_start_matches("not-")
        .parse::<BuiltinLanguage>()
        .map(|b| b.canonical_parameter().to_string())
        .map_err(|_| Failure::usage(format!("language `{}` has no default parameter; pass --param", lang.name())))
}

fn parameter(s: &Settings, flag: Option<String>, lang: &LanguageSpec) -> Result<Parameter, Failure> {
    let name = match pick_string(s, flag, "param") {
        Some(p) => p,
        None => default_parameter(lang)?,
    };
    Ok(builtin_parameter(&name)?)
}

fn text(w: &Word) -> Result<String, Failure> {
    Ok(w.to_text()?)
}

pub fn transcode(a: TranscodeArgs) -> Outcome {
    let s = Settings::load(a.common.config.as_deref(), &["k", "to", "input", "out"])?;
    let k: u32 = s.require(a.k, "k")?;
    let src = Alphabet::new(k)?;
    let dst = Alphabet::new(s.pick(a.to, "to")?.unwrap_or(k + 1))?;
    let input = match a.input.or_else(|| s.raw("input").map(Into::into)) {
        Some(p) => std::fs::read_to_string(&p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?,
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf).map_err(|e| Failure::io(format!("stdin: {e}")))?;
            buf
        }
    };
    let mut out = String::new();
    let mut errors = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match Word::parse(line, src) {
            Ok(w) => {
                out.push_str(&text(&xi_transcode(&w, dst))?);
                out.push('\n');
            }
            Err(e) => errors.push(format!("line {}: {e}", i + 1)),
        }
    }
    if !errors.is_empty() {
        return Err(Failure::usage(errors.join("\n")));
    }
    emit(pick_path(&s, a.common.out).as_deref(), &out)
}

fn pick_path(s: &Settings, flag: Option<std::path::PathBuf>) -> Option<std::path::PathBuf> {
    flag.or_else(|| s.raw("out").map(Into::into))
}

pub fn conjugate(a: ConjugateArgs) -> Outcome {
    let keys: Vec<&str> = CORPUS_KEYS.iter().copied().chain(["out"]).collect();
    let s = Settings::load(a.common.config.as_deref(), &keys)?;
    let r = corpus(&s, a.corpus)?;
    let iso = build_xi(r.lang.alphabet());
    let h = conjugate_language(&r.lang, &iso)?;
    let mut out = format!("# {} -> {}\nrank,word,image,member\n", r.lang.name(), h.name());
    for (i, w) in phaselab::enumerate_words(r.lang.alphabet(), &r.max_rank, cap()?)?.enumerate() {
        let v = iso.forward(&w)?;
        writeln!(out, "{i},{},{},{}", text(&w)?, text(&v)?, h.contains(&v) as u8).expect("string write");
    }
    emit(pick_path(&s, a.common.out).as_deref(), &out)
}

fn tolerances(s: &Settings, t: crate::Tolerances) -> Result<TransitionTolerances, Failure> {
    let mut tol = TransitionTolerances::default();
    if let Some(v) = pick_string(s, t.tol_mono, "tol_mono") {
        tol.mono = rational(&v, "--tol-mono")?;
    }
    if let Some(v) = pick_string(s, t.tol_limit, "tol_limit") {
        tol.limit = rational(&v, "--tol-limit")?;
    }
    if let Some(v) = s.pick(t.tol_r2, "tol_r2")? {
        tol.r2 = v;
    }
    if let Some(v) = pick_string(s, t.tol_delta, "tol_delta") {
        tol.delta = rational(&v, "--tol-delta")?;
    }
    if let Some(v) = pick_string(s, t.tol_cutoff, "tol_cutoff") {
        tol.cutoff = rational(&v, "--tol-cutoff")?;
    }
    Ok(tol)
}

pub fn curve(a: CurveArgs) -> Outcome {
    let keys: Vec<&str> = CORPUS_KEYS
        .iter()
        .copied()
        .chain(["param", "heuristic", "tol_mono", "tol_limit", "tol_r2", "tol_delta", "tol_cutoff", "json", "out"])
        .collect();
    let s = Settings::load(a.common.config.as_deref(), &keys)?;
    let r = corpus(&s, a.corpus)?;
    let g = parameter(&s, a.param, &r.lang)?;
    let tol = tolerances(&s, a.tol)?;
    let heuristic = a.heuristic || s.pick::<bool>(None, "heuristic")?.unwrap_or(false);
    let cap = cap()?;
    let mut report = if heuristic {
        let t = farago_target(&r.lang);
        let target = t.target.clone();
        curve_with_heuristic(&target, &g, &r.max_rank, cap, |w| Ok(errorless_heuristic(&t, w)))?
    } else {
        build_curve(&r.lang, &g, &r.max_rank, cap)?
    };
    let mut summary = format!(
        "language {}\nparameter {}\nwords {}\nslices {}\nthreshold {}{}\n",
        report.language,
        report.parameter,
        report.corpus_size,
        report.slices.len(),
        compact(&report.threshold),
        if report.threshold_crossing { "" } else { " (no crossing; midpoint of range)" }
    );
    match detect_transition(&report, &tol) {
        Ok(v) => {
            for (name, c) in [("cond1", &v.cond1), ("cond2", &v.cond2), ("cond3", &v.cond3)] {
                writeln!(summary, "{name} {} {}", c.label(), c.detail).expect("string write");
            }
            report.verdicts = Some(v);
        }
        Err(e) => writeln!(summary, "verdicts unavailable: {e}").expect("string write"),
    }
    let out = pick_path(&s, a.common.out);
    emit(out.as_deref(), &report.to_csv())?;
    if let Some(json) = a.json.or_else(|| s.raw("json").map(Into::into)) {
        let body = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
        emit(Some(&json), &body)?;
    }
    if out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(())
}

pub fn audit(a: AuditArgs) -> Outcome {
    let s = Settings::load(a.common.config.as_deref(), &["lang", "k", "poly", "poly_s", "max_n", "tol_split", "out"])?;
    let lang = language(&s, a.lang, a.k)?;
    let poly: PolySpec = pick_string(&s, a.poly, "poly").unwrap_or_else(|| "n+8".into()).parse()?;
    let poly_s: PolySpec = pick_string(&s, a.poly_s, "poly_s").unwrap_or_else(|| "n^3".into()).parse()?;
    let max_n = s.pick(a.max_n, "max_n")?.unwrap_or(6);
    let mut config = AdequacyConfig { set_range: 1..=max_n.max(1), ..AdequacyConfig::default() };
    if let Some(t) = pick_string(&s, a.tol_split, "tol_split") {
        config.tol_split = rational(&t, "--tol-split")?;
    }
    let cap = cap()?;
    let k = lang.alphabet().size();
    let t = farago_target(&lang);
    let iso = build_xi(lang.alphabet());
    let window = last_rank_of_length(lang.alphabet().grown(), max_n);
    let phi = build_phi_oracle(&lang, &t.target, &window, cap)?;

    let naeu = naeu_audit(&lang, &phi, &t, &poly, 1..=max_n.max(1), cap)?;
    let adequacy = match adequacy_audit(&lang, &iso, &phi, &poly, &config, cap) {
        Ok(r) => serde_json::to_value(r).expect("report serializes"),
        Err(phaselab::Error::NotApplicable(m)) => json!({ "not_applicable": m }),
        Err(e) => return Err(e.into()),
    };
    let chi = (0..=max_n).map(|n| chi_bounds(&iso, &phi, n, cap)).collect::<phaselab::Result<Vec<_>>>()?;
    let sparsity = sparsity_probe(&lang, &poly_s, 0..=max_n, cap)?;
    let b_counts = (0..=max_n)
        .map(|n| {
            b_set_member_count(&lang, &phi, n, cap)
                .map(|(size, members)| json!({ "n": n, "size": size, "members": members }))
        })
        .collect::<phaselab::Result<Vec<_>>>()?;
    let body = json!({
        "language": lang.name(),
        "k": k,
        "target": t.target.name(),
        "bijection": phi.name(),
        "oracle_coverage": phi.coverage(),
        "poly": poly.to_string(),
        "naeu": naeu,
        "adequacy": adequacy,
        "chi": chi,
        "b_sets": b_counts,
        "sparsity": sparsity,
        "sparsity_verdict": sparsity.verdict(),
    });
    emit(
        pick_path(&s, a.common.out).as_deref(),
        &(serde_json::to_string_pretty(&body).expect("json serializes") + "\n"),
    )
}

pub fn verify(a: VerifyArgs) -> Outcome {
    let keys: Vec<&str> = CORPUS_KEYS
        .iter()
        .copied()
        .chain(["param", "target", "cohort_size", "cohort_policy", "flip_probability", "seed", "out"])
        .collect();
    let s = Settings::load(a.common.config.as_deref(), &keys)?;
    let r = corpus(&s, a.corpus)?;
    let target = pick_string(&s, a.target, "target").ok_or_else(|| Failure::usage("missing --target"))?;
    let cohort_policy: CohortPolicy = match pick_string(&s, a.cohort_policy, "cohort_policy") {
        Some(p) => p.parse()?,
        None => CohortPolicy::SameLength,
    };
    let flip_probability = match pick_string(&s, a.flip_probability, "flip_probability") {
        Some(p) => rational(&p, "--flip-probability")?,
        None => BigRational::from_integer(0.into()),
    };
    let scenario = Scenario {
        lang: r.lang.name().to_string(),
        param: pick_string(&s, a.param, "param"),
        max_rank: r.max_rank,
        target,
        cohort_size: s.pick(a.cohort_size, "cohort_size")?.unwrap_or(8),
        cohort_policy,
        flip_probability,
        seed: s.pick(a.seed, "seed")?.unwrap_or(0),
    };
    let out = pick_path(&s, a.common.out);
    match run_scenario(&scenario, cap()?) {
        Ok(report) => emit(out.as_deref(), &(report.to_json() + "\n")),
        Err(phaselab::Error::Device { message, partial }) => {
            emit(out.as_deref(), &(partial.to_json() + "\n"))?;
            Err(Failure::check(format!("device failure: {message}")))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn lemma_suite(a: SuiteArgs) -> Outcome {
    let results = run_suite(&SuiteScale::default(), cap()?);
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for r in &results {
        println!("{}  {:width$}  {}", r.label(), r.name, r.detail);
    }
    if let Some(path) = a.out {
        emit(Some(&path), &(serde_json::to_string_pretty(&results).expect("json serializes") + "\n"))?;
    }
    if all_pass(&results) {
        return Ok(());
    }
    let failed: Vec<String> =
        results.iter().filter(|r| !r.pass).map(|r| format!("{}: \"{}\"", r.name, r.anchor)).collect();
    Err(Failure::check(format!("failed checks: {}", failed.join("; "))))
}

pub fn heuristic(a: HeuristicArgs) -> Outcome {
    let s = Settings::load(a.common.config.as_deref(), &["lang", "k", "max_len", "phi", "out"])?;
    let lang = language(&s, a.lang, a.k)?;
    let max_len = s.pick(a.max_len, "max_len")?.unwrap_or(10);
    let kind = pick_string(&s, a.phi, "phi").unwrap_or_else(|| "csb".into());
    let cap = cap()?;
    let t = farago_target(&lang);
    let mut out = format!("# {} via {kind}\nn,size,accept,reject,bottom,errors,bottom_fraction\n", t.target.name());
    let mut row = |n: u32, answers: Vec<(HeuristicOutcome, bool)>| {
        let (mut acc, mut rej, mut bot, mut err) = (0u64, 0u64, 0u64, 0u64);
        for (o, member) in &answers {
            match o {
                HeuristicOutcome::Accept if *member => acc += 1,
                HeuristicOutcome::Reject if !*member => rej += 1,
                HeuristicOutcome::Bottom => bot += 1,
                _ => err += 1,
            }
        }
        let size = answers.len() as u64;
        let frac = BigRational::new(bot.into(), size.max(1).into());
        writeln!(out, "{n},{size},{acc},{rej},{bot},{err},{}", exact(&frac)).expect("string write");
    };
    match kind.as_str() {
        "identity" => {
            for n in 0..=max_len {
                let answers = phaselab::words::words_of_length(lang.alphabet(), n, cap)?
                    .map(|w| (errorless_heuristic(&t, &w), t.target.contains(&w)))
                    .collect();
                row(n, answers);
            }
        }
        "oracle" | "csb" => {
            let phi: Box<dyn Bijection> = if kind == "oracle" {
                Box::new(build_phi_oracle(&lang, &t.target, &last_rank_of_length(lang.alphabet(), max_len), cap)?)
            } else {
                let (f, g) = default_csb_injections(&lang)?;
                Box::new(build_phi_csb(lang.alphabet(), f, g, DEFAULT_STEP_BUDGET))
            };
            for n in 0..=max_len {
                let answers = b_set(phi.as_ref(), n, cap)?
                    .into_iter()
                    .map(|x| Ok((roughp_decide(&t, phi.as_ref(), &x)?, lang.contains(&x))))
                    .collect::<phaselab::Result<Vec<_>>>()?;
                row(n, answers);
            }
        }
        other => return Err(Failure::usage(format!("unknown --phi `{other}` (identity, oracle, csb)"))),
    }
    emit(pick_path(&s, a.common.out).as_deref(), &out)
}
