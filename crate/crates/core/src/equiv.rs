//! Bounded equivalence testing between transducers of any of the three kinds.

use crate::alphabet::{words_up_to, Alphabet, Word};
use crate::error::{syntax, Result};
use crate::fot::{parse_fot, FoTransducer};
use crate::lookahead::{parse_sstla, SstLa};
use crate::sst::{parse_sst, Sst};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transducer {
    Sst(Sst),
    SstLa(SstLa),
    Fot(FoTransducer),
}

impl Transducer {
    /// Parse any supported format, chosen by the first content line.
    pub fn parse(text: &str) -> Result<Self> {
        let head = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .find(|l| !l.is_empty())
            .unwrap_or("");
        match head {
            "sst" => parse_sst(text).map(Transducer::Sst),
            "sstla" => parse_sstla(text).map(Transducer::SstLa),
            "fot" => parse_fot(text).map(Transducer::Fot),
            other => Err(syntax(1, format!("unknown file kind `{other}`"))),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Transducer::Sst(_) => "sst",
            Transducer::SstLa(_) => "sstla",
            Transducer::Fot(_) => "fot",
        }
    }

    pub fn input(&self) -> &Alphabet {
        match self {
            Transducer::Sst(t) => t.input(),
            Transducer::SstLa(t) => t.input(),
            Transducer::Fot(t) => t.input(),
        }
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        match self {
            Transducer::Sst(t) => t.output_alphabet(),
            Transducer::SstLa(t) => t.output_alphabet(),
            Transducer::Fot(t) => t.output_alphabet(),
        }
    }

    pub fn output(&self, word: &[usize]) -> Result<Option<Word>> {
        match self {
            Transducer::Sst(t) => t.output(word),
            Transducer::SstLa(t) => t.la_output(word),
            Transducer::Fot(t) => t.output_string(word),
        }
    }

    /// Output as rendered tokens; `None` outside the domain.
    pub fn output_tokens(&self, tokens: &[String]) -> Result<Option<Vec<String>>> {
        let Ok(w) = self.input().encode(tokens) else {
            return Ok(None);
        };
        Ok(self.output(&w)?.map(|o| self.output_alphabet().decode(&o)))
    }

    pub fn transform(&self, input: &str) -> Result<Option<String>> {
        let w = self.input().parse_word(input)?;
        Ok(self.output(&w)?.map(|o| self.output_alphabet().render(&o)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivVerdict {
    Equal,
    Counterexample {
        input: Vec<String>,
        left: Option<Vec<String>>,
        right: Option<Vec<String>>,
    },
}

/// Compare on every word of length at most `max_len` in shortlex order. The
/// first machine's letters come first; a letter unknown to a machine puts
/// the word outside its domain.
pub fn equiv_bounded(t1: &Transducer, t2: &Transducer, max_len: usize) -> Result<EquivVerdict> {
    let mut letters: Vec<String> = t1.input().letters().to_vec();
    for l in t2.input().letters() {
        if !letters.contains(l) {
            letters.push(l.clone());
        }
    }
    let alphabet = Alphabet::new(letters)?;
    for w in words_up_to(alphabet.len(), max_len) {
        let tokens = alphabet.decode(&w);
        let left = t1.output_tokens(&tokens)?;
        let right = t2.output_tokens(&tokens)?;
        if left != right {
            return Ok(EquivVerdict::Counterexample {
                input: tokens,
                left,
                right,
            });
        }
    }
    Ok(EquivVerdict::Equal)
}
