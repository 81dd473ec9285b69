//! Sentence preprocessing: case folding, punctuation stripping and stop-word
//! removal.
//!
//! Tokens are maximal runs of alphanumeric characters (Unicode aware), each
//! lowercased. Everything else, including apostrophes and hyphens, separates
//! tokens, so `"Don't"` becomes `["don", "t"]`.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use thiserror::Error;

const DEFAULT_ENGLISH: &str = include_str!("../data/stopwords_en.txt");

#[derive(Debug, Error)]
pub enum StopwordError {
    #[error("cannot read stop-word file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: stop-word entry {entry:?} is not a single lowercase token")]
    BadEntry { line: usize, entry: String },
}

/// A normalized, ordered list of word tokens.
///
/// Every token is non-empty, lowercase and purely alphanumeric.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TokenSequence(Vec<String>);

impl TokenSequence {
    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn into_inner(self) -> Vec<String> {
        self.0
    }

    /// Space-joined form, suitable for feeding back through [`normalize`].
    pub fn join(&self) -> String {
        self.0.join(" ")
    }

    /// Builds a sequence from raw words by normalizing each of them.
    ///
    /// Words that split into several tokens contribute all of them.
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out = Vec::new();
        for w in words {
            out.extend(normalize(w.as_ref()).0);
        }
        TokenSequence(out)
    }
}

impl<'a> IntoIterator for &'a TokenSequence {
    type Item = &'a String;
    type IntoIter = std::slice::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Lowercases `text` and splits it on every maximal run of non-alphanumeric
/// characters. Empty input yields an empty sequence.
pub fn normalize(text: &str) -> TokenSequence {
    let tokens = text
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| {
            // Some lowercase mappings (e.g. 'İ') expand to a combining mark,
            // which is not alphanumeric and would break the token invariant.
            t.chars()
                .flat_map(char::to_lowercase)
                .filter(|c| c.is_alphanumeric())
                .collect::<String>()
        })
        .filter(|t| !t.is_empty())
        .collect();
    TokenSequence(tokens)
}

/// A set of lowercase tokens to drop before comparison.
#[derive(Debug, Clone, Default)]
pub struct StopwordSet {
    words: HashSet<String>,
}

impl StopwordSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The bundled English list.
    pub fn english() -> Self {
        Self::parse(DEFAULT_ENGLISH).expect("bundled stop-word list is well formed")
    }

    /// Parses the stop-word file format: one lowercase token per line,
    /// `#`-prefixed and blank lines ignored.
    pub fn parse(text: &str) -> Result<Self, StopwordError> {
        let mut words = HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks = normalize(line);
            if toks.len() != 1 || toks.0[0] != line {
                return Err(StopwordError::BadEntry {
                    line: idx + 1,
                    entry: line.to_string(),
                });
            }
            words.insert(line.to_string());
        }
        Ok(StopwordSet { words })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, StopwordError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| StopwordError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for StopwordSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        StopwordSet {
            words: iter
                .into_iter()
                .map(Into::into)
                .map(|w: String| w.to_lowercase())
                .filter(|w| !w.is_empty())
                .collect(),
        }
    }
}

/// Drops every token present in `stopwords`, keeping the survivors in order.
pub fn remove_stopwords(seq: &TokenSequence, stopwords: &StopwordSet) -> TokenSequence {
    TokenSequence(
        seq.0
            .iter()
            .filter(|t| !stopwords.contains(t))
            .cloned()
            .collect(),
    )
}

/// Normalization followed by stop-word removal.
pub fn preprocess(text: &str, stopwords: &StopwordSet) -> TokenSequence {
    remove_stopwords(&normalize(text), stopwords)
}
