use super::ngrams::{intersect, ngrams, overlap, subtract, total};
use crate::error::{Error, Result};
use crate::preprocess::tokenize;

const MAX_ORDER: usize = 4;

fn lowered(text: &str) -> Vec<String> {
    tokenize(text).into_iter().map(|t| t.text.to_lowercase()).collect()
}

/// F1 from counts, where an empty selection or empty relevant set counts as perfect.
fn f1(tp: usize, selected: usize, relevant: usize) -> f64 {
    let p = if selected > 0 { tp as f64 / selected as f64 } else { 1.0 };
    let r = if relevant > 0 { tp as f64 / relevant as f64 } else { 1.0 };
    if p > 0.0 && r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

fn precision(tp: usize, selected: usize) -> f64 {
    if selected > 0 {
        tp as f64 / selected as f64
    } else {
        1.0
    }
}

/// SARI of one item in `[0, 1]`.
fn sentence_sari(source: &[String], output: &[String], reference: &[String]) -> f64 {
    let (mut keep, mut del, mut add) = (0.0, 0.0, 0.0);
    for n in 1..=MAX_ORDER {
        let (s, c, r) = (ngrams(source, n), ngrams(output, n), ngrams(reference, n));

        let s_c = intersect(&s, &c);
        let s_r = intersect(&s, &r);
        keep += f1(overlap(&s_c, &s_r), total(&s_c), total(&s_r));

        let s_not_c = subtract(&s, &c);
        let s_not_r = subtract(&s, &r);
        del += precision(overlap(&s_not_c, &s_not_r), total(&s_not_c));

        let added = subtract(&c, &s);
        add += f1(overlap(&added, &r), total(&added), total(&subtract(&r, &s)));
    }
    let k = MAX_ORDER as f64;
    (keep / k + del / k + add / k) / 3.0
}

/// Corpus SARI in `[0, 100]`: mean over items of the average of the keep F1,
/// deletion precision and addition F1, each averaged over n-gram orders 1 to 4.
/// Tokens are the lowercased tokenizer output, punctuation included.
pub fn sari(sources: &[&str], outputs: &[&str], references: &[&str]) -> Result<f64> {
    if sources.len() != outputs.len() || outputs.len() != references.len() {
        return Err(Error::Validation(format!(
            "sari needs parallel lists, got {} sources, {} outputs, {} references",
            sources.len(),
            outputs.len(),
            references.len()
        )));
    }
    if sources.is_empty() {
        return Err(Error::Validation("sari needs at least one item".into()));
    }
    let sum: f64 = sources
        .iter()
        .zip(outputs)
        .zip(references)
        .map(|((s, o), r)| sentence_sari(&lowered(s), &lowered(o), &lowered(r)))
        .sum();
    Ok(100.0 * sum / sources.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_output() {
        let v = sari(&["Der Hund bellt laut."], &["Der Hund bellt."], &["Der Hund bellt."]).unwrap();
        assert!((v - 100.0).abs() < 1e-9);
        let v = sari(&["a b"], &["a b"], &["a b"]).unwrap();
        assert!((v - 100.0).abs() < 1e-9);
    }

    #[test]
    fn copy_of_source() {
        let v = sari(&["a b c d"], &["a b c d"], &["b c"]).unwrap();
        assert!((v - 100.0 * (7.0 / 24.0 + 2.0) / 3.0).abs() < 1e-9);
    }

    #[test]
    fn mismatched() {
        assert!(sari(&["a"], &["a", "b"], &["a"]).is_err());
        assert!(sari(&[], &[], &[]).is_err());
    }
}
