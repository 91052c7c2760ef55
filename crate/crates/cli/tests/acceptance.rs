//! Acceptance runner: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p plainalign-cli --test acceptance`.

use std::path::Path;
use std::time::{Duration, Instant};

use plainalign_core::aligners::{align_embed_threshold, align_massalign, AlignerConfig};
use plainalign_core::corpus::{AlignmentSet, AnnotationLabel, DocumentPair, DomainTag};
use plainalign_core::eval::{cohen_kappa, evaluate_alignment, evaluate_alignment_sets, EvalSubset};
use plainalign_core::metrics::{bleu, fre_german, sari};
use plainalign_core::preprocess::{clean_aligned_pairs, PairCandidate};
use plainalign_harvest::{load_site_configs, FixedClock, FixtureTransport, Harvester, PairingStrategy};
use plainalign_testkit::properties::{self as p, Outcome};
use plainalign_testkit::strategies as s;
use plainalign_testkit::{confusion_records, planted_corpus, PlantedCorpusConfig};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(got: f64, want: f64, tol: f64, what: &str) -> Result<(), String> {
    ensure((got - want).abs() <= tol, format!("{what} = {got:.4}, expected {want} ± {tol}"))
}

fn budget(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, format!("took {elapsed:?}, limit {limit:?}"))
}

fn f_measure_anchors() -> Check {
    let start = Instant::now();
    let mut detail = Vec::new();
    for (tp, fp, fn_, pr, r, f1, f05) in [
        (22419, 4081, 24581, 0.846, 0.477, 0.610, 0.733),
        (106671, 4329, 133579, 0.961, 0.444, 0.608, 0.780),
    ] {
        let (gold, pred) = confusion_records(tp, fp, fn_);
        let rep = evaluate_alignment(&gold, &pred, EvalSubset::All, 0.5);
        within(rep.precision, pr, 0.001, "P")?;
        within(rep.recall, r, 0.001, "R")?;
        within(rep.f1, f1, 0.001, "F1")?;
        within(rep.f_beta, f05, 0.001, "F0.5")?;
        detail.push(format!("P={:.3} R={:.3} F1={:.3} F0.5={:.3}", rep.precision, rep.recall, rep.f1, rep.f_beta));
    }
    budget(start.elapsed(), Duration::from_secs(1))?;
    Ok(detail.join("; "))
}

fn fre_anchors() -> Check {
    let start = Instant::now();
    let tom = fre_german("Tom!").map_err(|e| e.to_string())?;
    let anti = fre_german("Anti-Semitismus.").map_err(|e| e.to_string())?;
    ensure(tom == 120.5, format!("Tom! scored {tom}"))?;
    ensure(anti == -172.0, format!("Anti-Semitismus. scored {anti}"))?;
    budget(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("Tom! = {tom}, Anti-Semitismus. = {anti}"))
}

fn runner(seed: u8) -> TestRunner {
    let config = Config { cases: 1000, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

fn property<S: Strategy>(name: &str, seed: u8, strategy: S, test: impl Fn(S::Value) -> Outcome) -> Result<String, String> {
    runner(seed).run(&strategy, test).map_err(|e| format!("{name}: {e}"))?;
    Ok(format!("{name} x1000"))
}

fn v(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn sari_identity() -> Check {
    let src = [
        "Der Gemeinderat hat die Erhöhung der Grundsteuer nach langer Debatte beschlossen.",
        "Die Beratungsstelle im Rathaus hilft bei der Beantragung von Wohngeld.",
        "Aufgrund von Bauarbeiten bleibt die Bibliothek bis Ende Mai geschlossen.",
    ];
    let refs = [
        "Der Gemeinde-Rat hat beschlossen: Die Grund-Steuer wird höher.",
        "Sie brauchen Hilfe beim Wohn-Geld? Im Rathaus hilft man Ihnen.",
        "Die Bibliothek ist bis Ende Mai zu.",
    ];
    let e = |r: plainalign_core::Result<f64>| r.map_err(|e| e.to_string());
    let perfect = e(sari(&src, &refs, &refs))?;
    let bleu_perfect = e(bleu(&refs, &refs))?;
    let copy = e(sari(&src, &src, &refs))?;
    ensure(perfect == 100.0, format!("SARI(output = ref) = {perfect}"))?;
    ensure(bleu_perfect == 100.0, format!("BLEU(output = ref) = {bleu_perfect}"))?;
    ensure(copy < perfect, format!("src2src SARI {copy} not below {perfect}"))?;
    let prop = property(
        "identity on random fixtures",
        3,
        (prop::collection::vec(s::sentence_text(), 1..5), prop::collection::vec(s::sentence_text(), 1..5)),
        |(sources, refs)| {
            let n = sources.len().min(refs.len());
            let (sources, refs) = (&sources[..n], &refs[..n]);
            prop_assume!(refs.iter().all(|r| !r.trim().is_empty()));
            let (sv, rv) = (v(sources), v(refs));
            prop_assert_eq!(sari(&sv, &rv, &rv).unwrap(), 100.0);
            prop_assert_eq!(bleu(&rv, &rv).unwrap(), 100.0);
            Ok(())
        },
    )?;
    Ok(format!("SARI {perfect}, BLEU {bleu_perfect}, src2src SARI {copy:.3}; {prop}"))
}

fn planted_recovery() -> Check {
    let start = Instant::now();
    let planted = planted_corpus(&PlantedCorpusConfig::default(), 11);
    ensure(planted.corpus.entries.len() == 30, "planted corpus must have 30 documents")?;
    let cfg = AlignerConfig::default();
    let gold = planted.corpus.alignment_set();
    let (mut mass, mut embed) = (AlignmentSet::new(), AlignmentSet::new());
    for (entry, (c, s)) in planted.corpus.entries.iter().zip(&planted.embeddings) {
        let id = entry.pair.pair_id.clone();
        mass.insert(id.clone(), align_massalign(&entry.pair, &cfg).map_err(|e| e.to_string())?);
        embed.insert(id, align_embed_threshold(&entry.pair, (c, s), &cfg).map_err(|e| e.to_string())?);
    }
    let m = evaluate_alignment_sets(&gold, &mass, EvalSubset::All, 0.5).map_err(|e| e.to_string())?;
    let e = evaluate_alignment_sets(&gold, &embed, EvalSubset::All, 0.5).map_err(|e| e.to_string())?;
    ensure(m.precision >= 0.90, format!("massalign precision {:.3}", m.precision))?;
    ensure(m.recall >= 0.85, format!("massalign recall {:.3}", m.recall))?;
    ensure(e.precision == 1.0, format!("embed precision {:.3}", e.precision))?;
    budget(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!(
        "massalign P={:.3} R={:.3}; embed@0.9 P={:.3} R={:.3}",
        m.precision, m.recall, e.precision, e.recall
    ))
}

fn cleaning() -> Check {
    let dup = |doc| PairCandidate::new("Der Vertrag wird heute unterschrieben.", "Heute wird der Vertrag unterschrieben.", doc);
    let input = [
        PairCandidate::new("Das ist schön!", "Das ist schön.", "doc1"),
        PairCandidate::new("Anti-Semitismus.", "Hass gegen Juden heißt Anti-Semitismus.", "doc1"),
        PairCandidate::new("Sie sprach über Anti-Semitismus im Alltag.", "Anti-Semitismus.", "doc1"),
        dup("doc1"),
        PairCandidate::new("Die Straße wird ab Montag gesperrt.", "Ab Montag ist die Straße zu.", "doc2"),
        dup("doc2"),
    ];
    let (kept, first) = clean_aligned_pairs(&input);
    ensure(first.removed_near_identical == 1, format!("near-identical removed: {}", first.removed_near_identical))?;
    ensure(first.removed_short == 2, format!("short removed: {}", first.removed_short))?;
    ensure(first.removed_duplicates == 1, format!("duplicates removed: {}", first.removed_duplicates))?;
    ensure(kept.len() == 2 && kept[0].origin_doc == "doc1", format!("kept {kept:?}"))?;
    let (_, second) = clean_aligned_pairs(&kept);
    ensure(second.kept == kept.len(), format!("second pass removed {}", kept.len() - second.kept))?;
    let prop = property(
        "idempotence",
        5,
        prop::collection::vec(("[ab]{1,3}( [ab]{1,3}){0,3}", "[ab]{1,3}( [ab]{1,3}){0,3}", "[xy]"), 0..12),
        |pairs| {
            let c: Vec<_> = pairs.iter().map(|(a, b, d)| PairCandidate::new(a.as_str(), b.as_str(), d.as_str())).collect();
            let (kept, _) = clean_aligned_pairs(&c);
            let (again, report) = clean_aligned_pairs(&kept);
            prop_assert_eq!(report.kept, kept.len());
            prop_assert_eq!(again, kept);
            Ok(())
        },
    )?;
    Ok(format!("removed short {}, near-identical {}, duplicate {}; second pass removed 0; {prop}",
        first.removed_short, first.removed_near_identical, first.removed_duplicates))
}

fn kappa_suite() -> Check {
    use AnnotationLabel::{Aligned, NotAligned};
    let e = |r: plainalign_core::Result<_>| r.map_err(|e: plainalign_core::Error| e.to_string());
    let same = [Aligned, NotAligned, AnnotationLabel::Partial, Aligned];
    let k_same = e(cohen_kappa(&same, &same))?.kappa;
    ensure(k_same == 1.0, format!("identical annotations: κ = {k_same}"))?;
    // 4 both aligned, 4 both not, 1 each way
    let mut a = vec![Aligned; 4];
    let mut b = vec![Aligned; 4];
    a.extend([NotAligned; 4]);
    b.extend([NotAligned; 4]);
    a.extend([Aligned, NotAligned]);
    b.extend([NotAligned, Aligned]);
    let k_hand = e(cohen_kappa(&a, &b))?.kappa;
    within(k_hand, 0.6, 1e-9, "κ of the 4/4/1/1 matrix")?;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let (x, y): (Vec<_>, Vec<_>) = (0..10_000)
        .map(|_| (AnnotationLabel::ALL[rng.gen_range(0..3)], AnnotationLabel::ALL[rng.gen_range(0..3)]))
        .unzip();
    let k_rand = e(cohen_kappa(&x, &y))?.kappa;
    ensure(k_rand.abs() < 0.05, format!("independent annotators: κ = {k_rand}"))?;
    Ok(format!("identical κ={k_same}, hand κ={k_hand:.9}, independent κ={k_rand:.4}"))
}

fn pooled_pair() -> impl Strategy<Value = DocumentPair> {
    (s::pooled_document("c", 10), s::pooled_document("s", 10))
        .prop_map(|(c, s)| DocumentPair::new("p", c, s, DomainTag::Other).unwrap())
}

fn property_suites() -> Check {
    let mut done = vec![
        property("round trip", 10, s::corpus(3, 6), |c| p::round_trip(&c))?,
        property("levenshtein", 11, ("[abcä]{0,6}", "[abcä]{0,6}", "[abcä]{0,6}"), |(a, b, c)| {
            p::levenshtein_axioms(&a, &b, &c)
        })?,
        property("expand_to_pairs", 12, s::records(5, 5), |rs| rs.iter().try_for_each(p::expansion_cardinality))?,
        property("gold vs gold", 13, s::records(6, 6), |rs| p::gold_against_itself(&rs))?,
        property("massalign monotone", 14, (pooled_pair(), 0.0f64..1.0, 0.0f64..1.0), |(pair, lo, hi)| {
            p::massalign_threshold_monotone(&pair, lo, hi)
        })?,
        property("cats monotone", 15, (pooled_pair(), 0.0f64..1.0, 0.0f64..1.0), |(pair, lo, hi)| {
            p::cats_threshold_monotone(&pair, lo, hi)
        })?,
    ];
    done.push(property(
        "embed monotone",
        16,
        (
            pooled_pair().prop_flat_map(|pair| {
                let (n, m) = (pair.complex.len(), pair.simple.len());
                (Just(pair), p::embedding_table(n, 4), p::embedding_table(m, 4))
            }),
            0.0f64..1.0,
            0.0f64..1.0,
            any::<bool>(),
        ),
        |((pair, c, s), lo, hi, mutual)| p::embed_threshold_monotone(&pair, (&c, &s), lo, hi, mutual),
    )?);
    done.push(property("stats permutation", 17, (s::corpus(4, 6), any::<u64>()), |(c, seed)| {
        p::stats_permutation_invariant(&c, seed)
    })?);
    Ok(done.join(", "))
}

fn harvester() -> Check {
    let start = Instant::now();
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("../harvest/tests/fixtures/site");
    let sites = load_site_configs(&fixtures.join("sites.json")).map_err(|e| e.to_string())?;
    let transport = FixtureTransport::from_dir(&fixtures).map_err(|e| e.to_string())?;
    let clock = FixedClock("2024-05-01".into());
    let out = tempfile::tempdir().map_err(|e| e.to_string())?;
    let report = Harvester::new(&transport, &clock).run(&sites, out.path()).map_err(|e| e.to_string())?;
    let counts = [
        report.pairs_by_method(PairingStrategy::LinkReference),
        report.pairs_by_method(PairingStrategy::TitleMatch),
        report.pairs_by_method(PairingStrategy::ManualMap),
        report.unpaired.len(),
    ];
    ensure(counts == [3, 2, 1, 1], format!("link/title/manual/unpaired = {counts:?}"))?;
    let read = |p: &Path| std::fs::read(p).map_err(|e| format!("{}: {e}", p.display()));
    ensure(
        read(&out.path().join("manifest.tsv"))? == read(&fixtures.join("expected_manifest.tsv"))?,
        "manifest differs from expected_manifest.tsv",
    )?;
    let mut goldens = 0;
    for entry in std::fs::read_dir(fixtures.join("golden")).map_err(|e| e.to_string())? {
        let golden = entry.map_err(|e| e.to_string())?.path();
        let name = golden.file_name().unwrap().to_string_lossy().into_owned();
        ensure(read(&out.path().join("corpus/stadt").join(&name))? == read(&golden)?, format!("{name} differs"))?;
        goldens += 1;
    }
    ensure(transport.requests().iter().all(|(u, _)| u.contains(".example/")), "request outside the fixture store")?;
    budget(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("3 link_reference, 2 title_match, 1 manual_map, 1 unpaired; {goldens} golden files byte-exact"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("F-measure anchors", f_measure_anchors),
        ("FRE anchors", fre_anchors),
        ("SARI/BLEU identity", sari_identity),
        ("planted-alignment recovery", planted_recovery),
        ("cleaning", cleaning),
        ("Cohen's kappa", kappa_suite),
        ("property suites", property_suites),
        ("offline harvester", harvester),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let ms = start.elapsed().as_millis();
        match result {
            Ok(detail) => println!("criterion {} PASS {name} ({ms} ms): {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL {name} ({ms} ms): {why}", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
