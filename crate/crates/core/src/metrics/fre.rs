use crate::error::{Error, Result};
use crate::preprocess::{segment_sentences, word_tokens};

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'ä' | 'ö' | 'ü' | 'y')
}

/// Number of maximal vowel groups in the lowercased word, at least 1.
pub fn count_syllables_de(word: &str) -> usize {
    let mut groups = 0;
    let mut in_group = false;
    for c in word.chars().flat_map(char::to_lowercase) {
        let v = is_vowel(c);
        if v && !in_group {
            groups += 1;
        }
        in_group = v;
    }
    groups.max(1)
}

/// German Flesch reading ease (Amstad): `180 − ASL − 58.5·ASW`, unclamped.
pub fn fre_german(text: &str) -> Result<f64> {
    let sentences = segment_sentences(text);
    fre_german_sentences(sentences.iter().map(|s| s.text.as_str()))
}

/// Same as [`fre_german`] for text already split into sentences.
pub fn fre_german_sentences<'a>(sentences: impl IntoIterator<Item = &'a str>) -> Result<f64> {
    let (mut n_sentences, mut words, mut syllables) = (0usize, 0usize, 0usize);
    for sentence in sentences {
        let before = words;
        for token in word_tokens(sentence) {
            words += 1;
            syllables += count_syllables_de(&token.text);
        }
        if words > before {
            n_sentences += 1;
        }
    }
    if words == 0 {
        return Err(Error::Validation("reading ease needs at least one word".into()));
    }
    let asl = words as f64 / n_sentences as f64;
    let asw = syllables as f64 / words as f64;
    Ok(180.0 - asl - 58.5 * asw)
}
