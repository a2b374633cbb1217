use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::category::Category;
use super::GrammarError;

/// Surface marker in the lexicon file for entries instantiated for every numeral.
pub const NUMERAL_MARKER: &str = "#NUM";

/// Name of a semantic template plus an optional lemma, written `key` or `key:lemma`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SemKey {
    pub name: String,
    pub lemma: Option<String>,
}

impl SemKey {
    pub fn new(name: &str, lemma: Option<&str>) -> Self {
        SemKey {
            name: name.to_string(),
            lemma: lemma.map(str::to_string),
        }
    }

    pub fn parse(s: &str) -> Self {
        match s.split_once(':') {
            Some((k, l)) => SemKey::new(k, Some(l)),
            None => SemKey::new(s, None),
        }
    }
}

impl fmt::Display for SemKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lemma {
            Some(l) => write!(f, "{}:{}", self.name, l),
            None => write!(f, "{}", self.name),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexEntry {
    pub surface: Vec<String>,
    pub category: Category,
    pub key: SemKey,
}

#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    entries: BTreeMap<String, Vec<LexEntry>>,
    numeral: Vec<(Category, SemKey)>,
    multiwords: Vec<Vec<String>>,
}

const SMALL: &[&str] = &[
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
    "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen",
    "nineteen",
];
const TENS: &[&str] = &[
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety",
];

/// Value of a digit string or an English numeral word from zero to one hundred.
pub fn numeral_value(token: &str) -> Option<u64> {
    if !token.is_empty() && token.chars().all(|c| c.is_ascii_digit()) {
        return token.parse().ok();
    }
    let t = token.to_ascii_lowercase();
    if t == "hundred" || t == "one-hundred" {
        return Some(100);
    }
    if let Some(i) = SMALL.iter().position(|w| *w == t) {
        return Some(i as u64);
    }
    if let Some(i) = TENS.iter().position(|w| !w.is_empty() && *w == t) {
        return Some(10 * i as u64);
    }
    let (tens, ones) = t.split_once('-')?;
    let ti = TENS.iter().position(|w| !w.is_empty() && *w == tens)?;
    let oi = SMALL.iter().position(|w| *w == ones).filter(|i| (1..10).contains(i))?;
    Some((10 * ti + oi) as u64)
}

impl Lexicon {
    pub fn parse(text: &str) -> Result<Self, GrammarError> {
        let mut lex = Lexicon::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim_end();
            if line.trim().is_empty() || line.trim_start().starts_with('#') && !line.starts_with(NUMERAL_MARKER) {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            if cols.len() != 3 {
                return Err(GrammarError::LexiconFormat {
                    line: n + 1,
                    msg: format!("expected 3 tab-separated columns, found {}", cols.len()),
                });
            }
            let category: Category = cols[1].parse()?;
            let key = SemKey::parse(cols[2]);
            if cols[0] == NUMERAL_MARKER {
                lex.numeral.push((category, key));
                continue;
            }
            let surface: Vec<String> = cols[0].split_whitespace().map(str::to_string).collect();
            if surface.len() > 1 && !lex.multiwords.contains(&surface) {
                lex.multiwords.push(surface.clone());
            }
            lex.add(LexEntry { surface, category, key });
        }
        Ok(lex)
    }

    pub fn load(path: &Path) -> Result<Self, GrammarError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GrammarError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The lexicon shipped with the crate.
    pub fn fragment() -> Self {
        Self::parse(include_str!("../../data/lexicon.tsv")).expect("bundled lexicon is well-formed")
    }

    pub fn add(&mut self, entry: LexEntry) {
        let list = self.entries.entry(entry.surface.join("-")).or_default();
        if !list.contains(&entry) {
            list.push(entry);
        }
    }

    /// Multi-token surfaces declared in the lexicon.
    pub fn multiwords(&self) -> &[Vec<String>] {
        &self.multiwords
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(Vec::len).sum::<usize>() + self.numeral.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entries for a token: exact match, else lowercased match, else numeral entries.
    pub fn lookup(&self, token: &str) -> Vec<LexEntry> {
        if let Some(es) = self.entries.get(token) {
            return es.clone();
        }
        if let Some(es) = self.entries.get(&token.to_lowercase()) {
            return es.clone();
        }
        match numeral_value(token) {
            Some(v) => self
                .numeral
                .iter()
                .map(|(c, k)| LexEntry {
                    surface: vec![token.to_string()],
                    category: c.clone(),
                    key: SemKey::new(&k.name, Some(&v.to_string())),
                })
                .collect(),
            None => Vec::new(),
        }
    }
}

/// Whitespace tokenization with surrounding punctuation stripped; case is preserved.
pub fn tokenize(sentence: &str) -> Vec<String> {
    sentence
        .split_whitespace()
        .map(|w| {
            w.trim_matches(|c: char| matches!(c, '"' | '\'' | '(' | ')'))
                .trim_end_matches(['.', ',', '!', '?', ';', ':'])
                .to_string()
        })
        .filter(|w| !w.is_empty())
        .collect()
}
