#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    /// False for pure punctuation.
    pub is_word: bool,
}

impl Token {
    fn word(text: &str) -> Self {
        Token { text: text.to_string(), is_word: true }
    }

    fn punct(c: char) -> Self {
        Token { text: c.to_string(), is_word: false }
    }
}

/// Splits on whitespace, then peels leading and trailing punctuation off each
/// chunk, one token per punctuation character. Inner punctuation (hyphens,
/// apostrophes, decimal commas) stays inside the word.
pub fn tokenize(sentence: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    for chunk in sentence.split_whitespace() {
        let Some(start) = chunk.find(char::is_alphanumeric) else {
            tokens.extend(chunk.chars().map(Token::punct));
            continue;
        };
        let end = chunk
            .char_indices()
            .rev()
            .find(|(_, c)| c.is_alphanumeric())
            .map(|(i, c)| i + c.len_utf8())
            .expect("chunk has an alphanumeric char");
        tokens.extend(chunk[..start].chars().map(Token::punct));
        tokens.push(Token::word(&chunk[start..end]));
        tokens.extend(chunk[end..].chars().map(Token::punct));
    }
    tokens
}

pub fn word_tokens(sentence: &str) -> impl Iterator<Item = Token> {
    tokenize(sentence).into_iter().filter(|t| t.is_word)
}

pub fn word_count(sentence: &str) -> usize {
    tokenize(sentence).iter().filter(|t| t.is_word).count()
}

/// Unit-cost edit distance over Unicode scalar values.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut curr = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        curr[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let substitution = prev[j] + usize::from(ca != cb);
            curr[j + 1] = substitution.min(prev[j + 1] + 1).min(curr[j] + 1);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}
