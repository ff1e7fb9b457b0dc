//! Finite alphabets of whitespace-free tokens and words over them.

use std::collections::HashMap;

use crate::error::{invalid, Error, Result};

/// A word is a sequence of letter indices into some [`Alphabet`].
pub type Word = Vec<usize>;

/// Ordered finite set of letters. Letters are arbitrary printable tokens
/// (not necessarily single characters).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<String>,
    index: HashMap<String, usize>,
}

impl Alphabet {
    pub fn new<I, S>(letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(invalid("alphabet must not be empty"));
        }
        let mut index = HashMap::with_capacity(letters.len());
        for (i, l) in letters.iter().enumerate() {
            if l.is_empty() || l.chars().any(char::is_whitespace) {
                return Err(invalid(format!("bad letter `{l}`")));
            }
            if index.insert(l.clone(), i).is_some() {
                return Err(invalid(format!("duplicate letter `{l}`")));
            }
        }
        Ok(Alphabet { letters, index })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn letter(&self, i: usize) -> &str {
        &self.letters[i]
    }

    pub fn index_of(&self, letter: &str) -> Option<usize> {
        self.index.get(letter).copied()
    }

    pub fn contains(&self, letter: &str) -> bool {
        self.index.contains_key(letter)
    }

    /// True when every letter is a single character, so words can be written
    /// without separators.
    pub fn is_compact(&self) -> bool {
        self.letters.iter().all(|l| l.chars().count() == 1)
    }

    /// Parse a word written either as whitespace-separated tokens or as a
    /// contiguous string split by longest match.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        if text.contains(char::is_whitespace) {
            return text
                .split_whitespace()
                .map(|t| self.index_of(t).ok_or_else(|| Error::UnknownLetter(t.to_string())))
                .collect();
        }
        let mut out = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let best = self
                .letters
                .iter()
                .enumerate()
                .filter(|(_, l)| rest.starts_with(l.as_str()))
                .max_by_key(|(_, l)| l.len());
            match best {
                Some((i, l)) => {
                    out.push(i);
                    rest = &rest[l.len()..];
                }
                None => return Err(Error::Tokenize(text.to_string())),
            }
        }
        Ok(out)
    }

    /// Map letter tokens to indices.
    pub fn encode<S: AsRef<str>>(&self, tokens: &[S]) -> Result<Word> {
        tokens
            .iter()
            .map(|t| {
                self.index_of(t.as_ref())
                    .ok_or_else(|| Error::UnknownLetter(t.as_ref().to_string()))
            })
            .collect()
    }

    pub fn decode(&self, word: &[usize]) -> Vec<String> {
        word.iter().map(|&i| self.letters[i].clone()).collect()
    }

    pub fn render(&self, word: &[usize]) -> String {
        let sep = if self.is_compact() { "" } else { " " };
        word.iter()
            .map(|&i| self.letters[i].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }
}

/// Join letter tokens, without separator when all are single characters.
pub fn render_tokens<S: AsRef<str>>(tokens: &[S]) -> String {
    let compact = tokens.iter().all(|t| t.as_ref().chars().count() == 1);
    let parts: Vec<&str> = tokens.iter().map(AsRef::as_ref).collect();
    parts.join(if compact { "" } else { " " })
}

/// All words of length exactly `len` over `k` letters, in lexicographic order.
pub fn words_of_length(k: usize, len: usize) -> impl Iterator<Item = Word> {
    let total = if k == 0 {
        usize::from(len == 0)
    } else {
        k.checked_pow(len as u32).unwrap_or(usize::MAX)
    };
    (0..total).map(move |mut n| {
        let mut w = vec![0; len];
        for slot in w.iter_mut().rev() {
            *slot = n % k;
            n /= k;
        }
        w
    })
}

/// All words of length at most `max_len`, shortlex order.
pub fn words_up_to(k: usize, max_len: usize) -> impl Iterator<Item = Word> {
    (0..=max_len).flat_map(move |len| words_of_length(k, len))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        assert!(Alphabet::new(["a b"]).is_err());
    }

    #[test]
    fn longest_match_tokenization() {
        let al = Alphabet::new(["a", "ab", "b"]).unwrap();
        assert_eq!(al.parse_word("abab").unwrap(), vec![1, 1]);
        assert_eq!(al.parse_word("a b ab").unwrap(), vec![0, 2, 1]);
        assert_eq!(al.parse_word("").unwrap(), Vec::<usize>::new());
        assert!(al.parse_word("c").is_err());
    }

    #[test]
    fn shortlex_enumeration() {
        let words: Vec<Word> = words_up_to(2, 2).collect();
        assert_eq!(
            words,
            vec![
                vec![],
                vec![0],
                vec![1],
                vec![0, 0],
                vec![0, 1],
                vec![1, 0],
                vec![1, 1]
            ]
        );
    }
}
