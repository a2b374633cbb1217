use std::collections::BTreeMap;
use std::path::Path;

use crate::logic::syntax::parse_rational;
use crate::logic::UnitTable;

use super::AxiomError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexicalKb {
    antonyms: Vec<(String, String)>,
    dimensions: BTreeMap<String, String>,
    pub units: UnitTable,
}

impl Default for LexicalKb {
    fn default() -> Self {
        Self::standard()
    }
}

impl LexicalKb {
    pub fn empty() -> Self {
        LexicalKb {
            antonyms: Vec::new(),
            dimensions: BTreeMap::new(),
            units: UnitTable::default(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, AxiomError> {
        let mut kb = LexicalKb::empty();
        let mut section = String::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| AxiomError::KbFormat {
                line: n + 1,
                msg: msg.to_string(),
            };
            if let Some(s) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = s.to_string();
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            match section.as_str() {
                "antonyms" => match words.as_slice() {
                    [p, q] => kb.add_antonyms(p, q),
                    _ => return Err(err("expected `positive negative`")),
                },
                "dimensions" => {
                    let (p, d) = line.split_once('=').ok_or_else(|| err("expected `predicate=dimension`"))?;
                    kb.dimensions.insert(p.trim().to_string(), d.trim().to_string());
                }
                "units" => match words.as_slice() {
                    [name, dim, factor, aliases @ ..] => {
                        let f = parse_rational(factor).ok_or_else(|| err("bad conversion factor"))?;
                        kb.units.add(name, dim, f, aliases);
                    }
                    _ => return Err(err("expected `name dimension factor aliases...`")),
                },
                _ => return Err(err("entry outside a known section")),
            }
        }
        Ok(kb)
    }

    pub fn load(path: &Path) -> Result<Self, AxiomError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AxiomError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn standard() -> Self {
        Self::parse(include_str!("../../data/kb.txt")).expect("bundled knowledge base is well-formed")
    }

    pub fn add_antonyms(&mut self, positive: &str, negative: &str) {
        let pair = (positive.to_string(), negative.to_string());
        if !self.antonyms.contains(&pair) {
            self.antonyms.push(pair);
        }
    }

    pub fn antonym_pairs(&self) -> &[(String, String)] {
        &self.antonyms
    }

    /// Antonym of a predicate, queried in either direction.
    pub fn antonym(&self, pred: &str) -> Option<&str> {
        self.antonyms.iter().find_map(|(p, q)| {
            if p == pred {
                Some(q.as_str())
            } else if q == pred {
                Some(p.as_str())
            } else {
                None
            }
        })
    }

    pub fn is_negative(&self, pred: &str) -> bool {
        self.antonyms.iter().any(|(_, q)| q == pred)
    }

    /// The positive member of the scale a predicate lives on.
    pub fn scale<'a>(&'a self, pred: &'a str) -> &'a str {
        self.antonyms
            .iter()
            .find(|(_, q)| q == pred)
            .map(|(p, _)| p.as_str())
            .unwrap_or(pred)
    }

    pub fn dimension(&self, pred: &str) -> Option<&str> {
        self.dimensions.get(pred).map(String::as_str)
    }

    pub fn dimensions(&self) -> &BTreeMap<String, String> {
        &self.dimensions
    }
}
