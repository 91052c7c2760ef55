use std::collections::HashSet;
use std::path::Path;
use std::sync::OnceLock;

use crate::corpus::{Document, Sentence};
use crate::error::{Error, Result};

/// Abbreviations that never end a sentence, matched case-insensitively.
pub const DEFAULT_ABBREVIATIONS: &[&str] = &[
    "z.B.", "bzw.", "Dr.", "Nr.", "ca.", "d.h.", "u.a.", "usw.", "etc.", "vgl.", "ggf.", "evtl.",
    "inkl.", "bspw.", "Prof.", "Hr.", "Fr.", "Str.", "Tel.", "Abs.", "Art.", "S.", "St.", "Mio.",
    "Mrd.", "Jh.", "z.T.", "u.U.", "o.ä.", "sog.", "geb.", "max.", "min.", "zzgl.", "Jan.",
    "Feb.", "Febr.", "Aug.", "Sept.", "Okt.", "Nov.", "Dez.",
];

/// Anything that turns raw text into numbered sentences.
pub trait SentenceSplitter: Send + Sync {
    fn split(&self, text: &str) -> Vec<Sentence>;
}

/// Punctuation-driven splitter.
///
/// A run of `.`, `!`, `?` or `…` (plus closing quotes/brackets) ends a sentence
/// when it is followed by whitespace and then an uppercase letter, an opening
/// quote or a digit. A single `.` closing a listed abbreviation, or closing a
/// one-to-three digit ordinal ("3. Oktober") when `ordinal_numbers` is set,
/// does not. Blank lines always end a sentence and start a new paragraph.
#[derive(Debug, Clone)]
pub struct RuleSplitter {
    abbreviations: HashSet<String>,
    pub ordinal_numbers: bool,
}

impl Default for RuleSplitter {
    fn default() -> Self {
        RuleSplitter::with_abbreviations(DEFAULT_ABBREVIATIONS.iter().copied())
    }
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?' | '…')
}

fn is_closer(c: char) -> bool {
    matches!(
        c,
        '"' | '\'' | '»' | '«' | '“' | '”' | '‘' | '’' | '›' | '‹' | ')' | ']'
    )
}

fn is_opener(c: char) -> bool {
    matches!(
        c,
        '„' | '"' | '»' | '«' | '‚' | '\'' | '(' | '[' | '“' | '‘' | '‹' | '›'
    )
}

impl RuleSplitter {
    pub fn with_abbreviations<I, S>(abbreviations: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        RuleSplitter {
            abbreviations: abbreviations
                .into_iter()
                .map(|a| a.as_ref().to_lowercase())
                .collect(),
            ordinal_numbers: true,
        }
    }

    fn suppresses_split(&self, word: &str) -> bool {
        let word = word.trim_start_matches(|c: char| !c.is_alphanumeric());
        if self.abbreviations.contains(&word.to_lowercase()) {
            return true;
        }
        if self.ordinal_numbers {
            let digits = word.trim_end_matches('.');
            if (1..=3).contains(&digits.len()) && digits.bytes().all(|b| b.is_ascii_digit()) {
                return true;
            }
        }
        false
    }

    /// Byte ranges of sentences inside one paragraph, untrimmed.
    fn sentence_spans(&self, paragraph: &str) -> Vec<(usize, usize)> {
        let chars: Vec<(usize, char)> = paragraph.char_indices().collect();
        let n = chars.len();
        let byte_at = |k: usize| if k < n { chars[k].0 } else { paragraph.len() };
        let mut spans = Vec::new();
        let mut start = 0;
        let mut k = 0;
        while k < n {
            if !is_terminator(chars[k].1) {
                k += 1;
                continue;
            }
            let run_start = k;
            let mut e = k + 1;
            while e < n && is_terminator(chars[e].1) {
                e += 1;
            }
            let run_end = e;
            while e < n && is_closer(chars[e].1) {
                e += 1;
            }
            if e >= n {
                break;
            }
            if !chars[e].1.is_whitespace() {
                k = e;
                continue;
            }
            let mut f = e;
            while f < n && chars[f].1.is_whitespace() {
                f += 1;
            }
            if f >= n {
                break;
            }
            let next = chars[f].1;
            if !(next.is_uppercase() || is_opener(next) || next.is_numeric()) {
                k = f;
                continue;
            }
            if run_end - run_start == 1 && chars[run_start].1 == '.' {
                let word_start = paragraph[..chars[run_start].0]
                    .rfind(char::is_whitespace)
                    .map(|i| i + paragraph[i..].chars().next().map_or(1, char::len_utf8))
                    .unwrap_or(0);
                if self.suppresses_split(&paragraph[word_start..byte_at(run_end)]) {
                    k = f;
                    continue;
                }
            }
            spans.push((start, byte_at(e)));
            start = byte_at(f);
            k = f;
        }
        spans.push((start, paragraph.len()));
        spans
    }
}

/// Byte ranges of paragraphs: maximal runs of non-blank lines.
fn paragraph_spans(text: &str) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut current: Option<(usize, usize)> = None;
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let line_start = offset;
        offset += line.len();
        if line.trim().is_empty() {
            if let Some(span) = current.take() {
                spans.push(span);
            }
            continue;
        }
        let line_end = line_start + line.trim_end_matches(['\n', '\r']).len();
        current = Some(match current {
            Some((s, _)) => (s, line_end),
            None => (line_start, line_end),
        });
    }
    spans.extend(current);
    spans
}

impl SentenceSplitter for RuleSplitter {
    fn split(&self, text: &str) -> Vec<Sentence> {
        let mut sentences = Vec::new();
        let mut paragraph_index = 0;
        for (ps, pe) in paragraph_spans(text) {
            let paragraph = &text[ps..pe];
            let before = sentences.len();
            for (s, e) in self.sentence_spans(paragraph) {
                let sentence = paragraph[s..e].trim();
                if !sentence.is_empty() {
                    sentences.push(Sentence {
                        index: sentences.len(),
                        text: sentence.to_string(),
                        paragraph_index,
                    });
                }
            }
            if sentences.len() > before {
                paragraph_index += 1;
            }
        }
        sentences
    }
}

fn default_splitter() -> &'static RuleSplitter {
    static SPLITTER: OnceLock<RuleSplitter> = OnceLock::new();
    SPLITTER.get_or_init(RuleSplitter::default)
}

/// Splits `text` with the default German rule splitter.
pub fn segment_sentences(text: &str) -> Vec<Sentence> {
    default_splitter().split(text)
}

/// Segments `text` into a document, collapsing whitespace inside each sentence.
pub fn document_from_text(
    doc_id: impl Into<String>,
    text: &str,
    splitter: &dyn SentenceSplitter,
) -> Result<Document> {
    let sentences = splitter
        .split(text)
        .into_iter()
        .map(|mut s| {
            s.text = s.text.split_whitespace().collect::<Vec<_>>().join(" ");
            s
        })
        .collect();
    Document::new(doc_id, sentences)
}

/// Parses an abbreviation list: one entry per line, `#` starts a comment.
pub fn parse_abbreviations(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect()
}

pub fn load_abbreviations(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_abbreviations(&text))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn texts(text: &str) -> Vec<String> {
        segment_sentences(text).into_iter().map(|s| s.text).collect()
    }

    #[test]
    fn splits_two_sentences() {
        assert_eq!(texts("Das ist gut. Das auch."), ["Das ist gut.", "Das auch."]);
    }

    #[test]
    fn abbreviation_suppresses_split() {
        assert_eq!(texts("Dr. Meier kommt."), ["Dr. Meier kommt."]);
        assert_eq!(
            texts("Obst, z.B. Äpfel, ist gesund. Nr. 5 fehlt."),
            ["Obst, z.B. Äpfel, ist gesund.", "Nr. 5 fehlt."]
        );
    }

    #[test]
    fn empty_input() {
        assert!(segment_sentences("").is_empty());
        assert!(segment_sentences(" \n\n ").is_empty());
    }

    #[test]
    fn lowercase_continuation_and_quotes() {
        assert_eq!(texts("Er kam um 3 Uhr. und ging."), ["Er kam um 3 Uhr. und ging."]);
        assert_eq!(
            texts("Er rief: „Hallo!“ Dann ging er. „Tschüss“, sagte sie."),
            ["Er rief: „Hallo!“", "Dann ging er.", "„Tschüss“, sagte sie."]
        );
        assert_eq!(texts("Wirklich?! Ja."), ["Wirklich?!", "Ja."]);
    }

    #[test]
    fn ordinals() {
        assert_eq!(texts("Am 3. Oktober ist frei."), ["Am 3. Oktober ist frei."]);
        let mut plain = RuleSplitter::default();
        plain.ordinal_numbers = false;
        assert_eq!(plain.split("Am 3. Oktober ist frei.").len(), 2);
    }

    #[test]
    fn paragraphs() {
        let s = segment_sentences("Eins. Zwei.\n\nDrei.\nVier ist\nlang.");
        let paras: Vec<usize> = s.iter().map(|s| s.paragraph_index).collect();
        assert_eq!(paras, [0, 0, 1, 1]);
        assert_eq!(s[3].text, "Vier ist\nlang.");
        // a paragraph boundary ends a sentence even without a terminator
        assert_eq!(texts("ohne Punkt\n\nweiter"), ["ohne Punkt", "weiter"]);
    }

    #[test]
    fn custom_abbreviations() {
        let list = parse_abbreviations("# Liste\nAbt.\n\nAbb. # Abbildung\n");
        assert_eq!(list, ["Abt.", "Abb."]);
        let splitter = RuleSplitter::with_abbreviations(list);
        assert_eq!(splitter.split("Siehe Abb. Drei. Ende.").len(), 2);
    }

    #[test]
    fn document_building_collapses_whitespace() {
        let doc = document_from_text("d", "Vier  ist\nlang. Ja.", &RuleSplitter::default()).unwrap();
        assert_eq!(doc.sentence_text(0), Some("Vier ist lang."));
    }

    proptest! {
        #[test]
        fn never_drops_characters(text in "[A-Za-zÄ0-9 .!?\n»«]{0,60}") {
            let mut rest = text.as_str();
            for s in segment_sentences(&text) {
                let at = rest.find(&s.text).expect("sentence is a substring in order");
                prop_assert!(rest[..at].trim().is_empty(), "gap {:?}", &rest[..at]);
                rest = &rest[at + s.text.len()..];
            }
            prop_assert!(rest.trim().is_empty());
        }
    }
}
