//! Library results checked against independent brute-force computations.

use std::collections::{HashMap, HashSet};

use plainalign_core::aligners::{align_cats_c3g, tfidf_cosine, AlignerConfig, TfIdfModel, GERMAN_STOPWORDS};
use plainalign_core::corpus::{Document, DocumentPair, DomainTag, SentenceAlignmentRecord};
use plainalign_core::eval::{evaluate_alignment, EvalSubset};
use plainalign_core::metrics::{bleu, fre_german, sari};
use plainalign_testkit::confusion_records;

fn stopwords() -> HashSet<String> {
    GERMAN_STOPWORDS.iter().map(|s| s.to_string()).collect()
}

fn words(s: &str, stop: &HashSet<String>) -> Vec<String> {
    s.split_whitespace()
        .map(|w| w.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase())
        .filter(|w| !w.is_empty() && !stop.contains(w))
        .collect()
}

fn brute_tfidf(corpus: &[&str], a: &str, b: &str) -> f64 {
    let stop = stopwords();
    let docs: Vec<Vec<String>> = corpus.iter().map(|s| words(s, &stop)).collect();
    let n = docs.len() as f64;
    let idf = |t: &str| {
        let df = docs.iter().filter(|d| d.iter().any(|w| w == t)).count() as f64;
        ((1.0 + n) / (1.0 + df)).ln() + 1.0
    };
    let vec = |s: &str| {
        let mut v: HashMap<String, f64> = HashMap::new();
        for w in words(s, &stop) {
            *v.entry(w).or_default() += 1.0;
        }
        for (t, x) in v.iter_mut() {
            *x *= idf(t);
        }
        v
    };
    let (va, vb) = (vec(a), vec(b));
    let dot: f64 = va.iter().map(|(t, x)| x * vb.get(t).unwrap_or(&0.0)).sum();
    let na = va.values().map(|x| x * x).sum::<f64>().sqrt();
    let nb = vb.values().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

#[test]
fn tfidf_matches_brute_force() {
    let corpus = [
        "der Hund läuft schnell",
        "die Katze läuft schnell",
        "der Hund schläft im Garten",
        "eine Katze frisst Fisch",
    ];
    let model = TfIdfModel::fit(corpus, &stopwords());
    // hund, katze, läuft and schnell all have df = 2, so the weights are equal
    let v = tfidf_cosine(&model, corpus[0], corpus[1]);
    assert!((v - 2.0 / 3.0).abs() < 1e-12, "{v}");
    for a in corpus {
        for b in corpus {
            let (got, want) = (tfidf_cosine(&model, a, b), brute_tfidf(&corpus, a, b));
            assert!((got - want).abs() < 1e-9, "{a:?} / {b:?}: {got} vs {want}");
        }
    }
}

fn brute_trigram(a: &str, b: &str) -> f64 {
    let grams = |s: &str| {
        let c: Vec<char> = s.to_lowercase().chars().collect();
        let mut m: HashMap<String, f64> = HashMap::new();
        for i in 0..c.len().saturating_sub(2) {
            *m.entry(c[i..i + 3].iter().collect()).or_default() += 1.0;
        }
        m
    };
    let (ga, gb) = (grams(a), grams(b));
    let dot: f64 = ga.iter().map(|(g, x)| x * gb.get(g).unwrap_or(&0.0)).sum();
    let na = ga.values().map(|x| x * x).sum::<f64>().sqrt();
    let nb = gb.values().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

#[test]
fn cats_matches_exhaustive_table() {
    let complex = [
        "Die Regierung hat ein neues Gesetz beschlossen.",
        "Das Gesetz gilt ab dem nächsten Jahr.",
        "Viele Menschen sind damit nicht einverstanden.",
        "Am Wochenende gab es Proteste in Berlin.",
        "Xylophon Quartett.",
    ];
    let simple = [
        "Die Regierung hat ein Gesetz gemacht.",
        "Viele Menschen finden das nicht gut.",
        "Das Gesetz gilt ab nächstem Jahr.",
        "Es gab Proteste.",
        "Berlin ist eine Stadt.",
    ];
    let pair = DocumentPair::new(
        "p",
        Document::from_paragraphs("c", [complex]).unwrap(),
        Document::from_paragraphs("s", [simple]).unwrap(),
        DomainTag::News,
    )
    .unwrap();
    for threshold in [0.0, 0.3, 0.5, 0.7] {
        let cfg = AlignerConfig { cats_threshold: threshold, ..Default::default() };
        let mut expected = Vec::new();
        for (i, c) in complex.iter().enumerate() {
            let mut best = (0, f64::MIN);
            for (j, s) in simple.iter().enumerate() {
                let v = brute_trigram(c, s);
                if v > best.1 {
                    best = (j, v);
                }
            }
            if best.1 > 0.0 && best.1 >= threshold {
                expected.push(SentenceAlignmentRecord::pair(i, best.0));
            }
        }
        assert_eq!(align_cats_c3g(&pair, &cfg).unwrap(), expected, "threshold {threshold}");
    }
}

/// Independent SARI over token lists, with multisets as sorted vectors.
fn brute_sari(src: &str, out: &str, refr: &str) -> f64 {
    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_lowercase).collect()
    }
    fn grams(t: &[String], n: usize) -> Vec<Vec<String>> {
        if t.len() < n {
            return Vec::new();
        }
        (0..=t.len() - n).map(|i| t[i..i + n].to_vec()).collect()
    }
    fn count(v: &[Vec<String>], g: &[String]) -> usize {
        v.iter().filter(|x| x.as_slice() == g).count()
    }
    fn distinct(v: &[Vec<String>]) -> Vec<Vec<String>> {
        let mut d = v.to_vec();
        d.sort();
        d.dedup();
        d
    }
    let and = |a: &[Vec<String>], b: &[Vec<String>]| -> Vec<Vec<String>> {
        distinct(a)
            .into_iter()
            .flat_map(|g| std::iter::repeat(g.clone()).take(count(a, &g).min(count(b, &g))))
            .collect()
    };
    let minus = |a: &[Vec<String>], b: &[Vec<String>]| -> Vec<Vec<String>> {
        distinct(a)
            .into_iter()
            .flat_map(|g| std::iter::repeat(g.clone()).take(count(a, &g).saturating_sub(count(b, &g))))
            .collect()
    };
    let f = |tp: usize, sel: usize, rel: usize| {
        let p = if sel == 0 { 1.0 } else { tp as f64 / sel as f64 };
        let r = if rel == 0 { 1.0 } else { tp as f64 / rel as f64 };
        if p == 0.0 || r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    };
    let (s, c, r) = (toks(src), toks(out), toks(refr));
    let mut total = 0.0;
    for n in 1..=4 {
        let (gs, gc, gr) = (grams(&s, n), grams(&c, n), grams(&r, n));
        let (sc, sr) = (and(&gs, &gc), and(&gs, &gr));
        let keep = f(and(&sc, &sr).len(), sc.len(), sr.len());
        let (snc, snr) = (minus(&gs, &gc), minus(&gs, &gr));
        let del = if snc.is_empty() { 1.0 } else { and(&snc, &snr).len() as f64 / snc.len() as f64 };
        let added = minus(&gc, &gs);
        let add = f(and(&added, &gr).len(), added.len(), minus(&gr, &gs).len());
        total += (keep + del + add) / 3.0;
    }
    100.0 * total / 4.0
}

#[test]
fn sari_src2src_hand_value() {
    let v = sari(&["a b c d"], &["a b c d"], &["b c"]).unwrap();
    // keep: (2/3 + 1/2 + 0 + 0) / 4; deletion and addition are perfect
    assert!((v - 76.388_888_888).abs() < 1e-6, "{v}");
    assert!((v - brute_sari("a b c d", "a b c d", "b c")).abs() < 1e-9);
}

#[test]
fn sari_matches_brute_force() {
    let items = [
        ("der hund bellt sehr laut", "der hund bellt", "der hund bellt laut"),
        ("a b a b c", "a b d", "a d d e"),
        ("x y z", "q", "x q"),
        ("eins zwei drei vier fünf", "eins zwei drei vier fünf", "eins zwei drei vier fünf"),
        ("k", "k k k", "k"),
    ];
    for (s, o, r) in items {
        let got = sari(&[s], &[o], &[r]).unwrap();
        let want = brute_sari(s, o, r);
        assert!((got - want).abs() < 1e-9, "{s:?}/{o:?}/{r:?}: {got} vs {want}");
    }
    let (s, o, r): (Vec<_>, Vec<_>, Vec<_>) = items.iter().map(|&(s, o, r)| (s, o, r)).fold(
        (Vec::new(), Vec::new(), Vec::new()),
        |(mut a, mut b, mut c), (s, o, r)| {
            a.push(s);
            b.push(o);
            c.push(r);
            (a, b, c)
        },
    );
    let mean = items.iter().map(|&(s, o, r)| brute_sari(s, o, r)).sum::<f64>() / items.len() as f64;
    assert!((sari(&s, &o, &r).unwrap() - mean).abs() < 1e-9);
}

#[test]
fn bleu_two_sentence_toy_corpus() {
    // clipped matches: 1-grams 6/7, 2-grams 4/5, 3-grams 2/3, 4-grams 1/2;
    // output length 7 against reference length 8
    let got = bleu(&["a b c d e", "x y"], &["a b c d f", "x y z"]).unwrap();
    let want = 100.0 * (-1.0f64 / 7.0).exp() * (8.0f64 / 35.0).powf(0.25);
    assert!((got - want).abs() < 1e-9, "{got} vs {want}");
}

#[test]
fn bleu_clips_repeated_ngrams() {
    // 1-grams "k k k" against "k": clipped to 1 of 3; higher orders have no matches
    assert_eq!(bleu(&["k k k"], &["k"]).unwrap(), 0.0);
    let got = bleu(&["k"], &["k k"]).unwrap();
    assert!((got - 100.0 * (1.0f64 - 2.0).exp()).abs() < 1e-9);
}

#[test]
fn reading_ease_anchors() {
    assert_eq!(fre_german("Tom!").unwrap(), 120.5);
    assert_eq!(fre_german("Anti-Semitismus.").unwrap(), -172.0);
    assert_eq!(fre_german("Das ist gut.").unwrap(), 118.5);
    // 6 words, 2 sentences, 7 syllables
    let v = fre_german("Das Haus ist alt. Es regnet.").unwrap();
    assert!((v - (180.0 - 3.0 - 58.5 * 7.0 / 6.0)).abs() < 1e-12);
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn f_measure_table_rows() {
    for (tp, fp, fn_, p, r, f1, f05) in [
        (22419, 4081, 24581, 0.846, 0.477, 0.610, 0.733),
        (106671, 4329, 133579, 0.961, 0.444, 0.608, 0.780),
    ] {
        let (gold, pred) = confusion_records(tp, fp, fn_);
        let rep = evaluate_alignment(&gold, &pred, EvalSubset::All, 0.5);
        assert_eq!((rep.tp, rep.fp, rep.fn_), (tp, fp, fn_));
        assert!(close(rep.precision, p, 0.0005) && close(rep.recall, r, 0.0005), "{rep:?}");
        assert!(close(rep.f1, f1, 0.001), "{rep:?}");
        assert!(close(rep.f_beta, f05, 0.001), "{rep:?}");
    }
}
