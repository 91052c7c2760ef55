use super::ngrams::{ngrams, overlap, total};
use crate::error::{Error, Result};
use crate::preprocess::tokenize;

const MAX_ORDER: usize = 4;

fn tokens(text: &str) -> Vec<String> {
    tokenize(text).into_iter().map(|t| t.text).collect()
}

/// Corpus BLEU in `[0, 100]` with clipped n-gram counts for orders 1 to 4,
/// a brevity penalty and no smoothing. Orders for which the outputs contain
/// no n-gram at all are left out of the geometric mean.
pub fn bleu(outputs: &[&str], references: &[&str]) -> Result<f64> {
    if outputs.len() != references.len() {
        return Err(Error::Validation(format!(
            "bleu needs one reference per output, got {} outputs and {} references",
            outputs.len(),
            references.len()
        )));
    }
    if outputs.is_empty() {
        return Err(Error::Validation("bleu of an empty corpus".into()));
    }
    let mut matches = [0usize; MAX_ORDER];
    let mut candidates = [0usize; MAX_ORDER];
    let (mut out_len, mut ref_len) = (0usize, 0usize);
    for (o, r) in outputs.iter().zip(references) {
        let (o, r) = (tokens(o), tokens(r));
        out_len += o.len();
        ref_len += r.len();
        for n in 1..=MAX_ORDER {
            let (co, cr) = (ngrams(&o, n), ngrams(&r, n));
            matches[n - 1] += overlap(&co, &cr);
            candidates[n - 1] += total(&co);
        }
    }
    if out_len == 0 {
        return Ok(0.0);
    }
    let mut log_sum = 0.0;
    let mut orders = 0;
    for n in 0..MAX_ORDER {
        if candidates[n] == 0 {
            continue;
        }
        if matches[n] == 0 {
            return Ok(0.0);
        }
        log_sum += (matches[n] as f64 / candidates[n] as f64).ln();
        orders += 1;
    }
    let bp = if out_len > ref_len {
        1.0
    } else {
        (1.0 - ref_len as f64 / out_len as f64).exp()
    };
    Ok(100.0 * bp * (log_sum / orders as f64).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_is_perfect() {
        let v = bleu(&["Der Hund bellt.", "Ja"], &["Der Hund bellt.", "Ja"]).unwrap();
        assert!((v - 100.0).abs() < 1e-9);
    }

    #[test]
    fn disjoint_is_zero() {
        assert_eq!(bleu(&["a b c d e"], &["f g h i j"]).unwrap(), 0.0);
    }

    #[test]
    fn empty_corpus() {
        assert!(bleu(&[], &[]).is_err());
    }
}
