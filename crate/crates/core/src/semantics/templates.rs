use std::collections::BTreeMap;
use std::path::Path;

use crate::grammar::Category;
use crate::logic::{read_term, Sort, Term, UnitTable};

use super::SemanticsError;

/// Values substituted for the placeholders of a template.
#[derive(Clone, Debug, Default)]
pub struct Fill {
    pub base: String,
    pub scale: String,
    pub dim: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct TemplateTable {
    macros: BTreeMap<String, String>,
    /// (key, category text or `*`) -> raw term text
    entries: BTreeMap<(String, String), String>,
}

impl TemplateTable {
    pub fn parse(text: &str) -> Result<Self, SemanticsError> {
        let mut t = TemplateTable::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim_end();
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let err = |msg: String| SemanticsError::TemplateFile { line: n + 1, msg };
            if let Some(rest) = line.strip_prefix('@') {
                let (name, body) = rest.split_once('\t').ok_or_else(|| err("macro without body".into()))?;
                t.macros.insert(name.trim().to_string(), body.trim().to_string());
                continue;
            }
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            if cols.len() != 3 {
                return Err(err(format!("expected 3 tab-separated columns, found {}", cols.len())));
            }
            let cat = if cols[1] == "*" {
                "*".to_string()
            } else {
                cols[1]
                    .parse::<Category>()
                    .map_err(|e| err(e.to_string()))?
                    .to_string()
            };
            t.entries.insert((cols[0].to_string(), cat), cols[2].to_string());
        }
        Ok(t)
    }

    pub fn load(path: &Path) -> Result<Self, SemanticsError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SemanticsError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The template table shipped with the crate.
    pub fn standard() -> Self {
        Self::parse(include_str!("../../data/templates.tsv")).expect("bundled templates are well-formed")
    }

    pub fn keys(&self) -> impl Iterator<Item = &(String, String)> {
        self.entries.keys()
    }

    /// Raw template text: word-specific entry for the category, then for any category,
    /// then the category-level default.
    pub fn lookup(&self, key: &str, cat: &Category) -> Option<&str> {
        let c = cat.to_string();
        self.entries
            .get(&(key.to_string(), c.clone()))
            .or_else(|| self.entries.get(&(key.to_string(), "*".to_string())))
            .or_else(|| self.entries.get(&("_".to_string(), c)))
            .map(String::as_str)
    }

    fn expand(&self, text: &str, depth: usize) -> Result<String, SemanticsError> {
        if depth > 32 {
            return Err(SemanticsError::TemplateFile {
                line: 0,
                msg: "macro expansion too deep".into(),
            });
        }
        let mut out = String::with_capacity(text.len());
        let mut rest = text;
        while let Some(i) = rest.find('$') {
            out.push_str(&rest[..i]);
            let after = &rest[i + 1..];
            let len = after
                .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                .unwrap_or(after.len());
            let name = &after[..len];
            match self.macros.get(name) {
                Some(body) => out.push_str(&self.expand(body, depth + 1)?),
                None => {
                    out.push('$');
                    out.push_str(name);
                }
            }
            rest = &after[len..];
        }
        out.push_str(rest);
        Ok(out)
    }

    /// Template text with macros expanded and placeholders filled.
    pub fn render(&self, raw: &str, fill: &Fill) -> Result<String, SemanticsError> {
        let text = self.expand(raw, 0)?;
        Ok(text
            .replace("_base", &fill.base)
            .replace("_scale", &fill.scale)
            .replace("_num", &fill.base)
            .replace("_unit", &fill.base)
            .replace("$dim", fill.dim.as_deref().unwrap_or("?0")))
    }

    /// Parsed instance whose sort variables are shifted by `offset`.
    pub fn instantiate(
        &self,
        key: &str,
        cat: &Category,
        fill: &Fill,
        units: &UnitTable,
        offset: u32,
    ) -> Result<Option<Term>, SemanticsError> {
        let Some(raw) = self.lookup(key, cat) else {
            return Ok(None);
        };
        let text = self.render(raw, fill)?;
        let term = read_term(&text, units).map_err(|e| SemanticsError::BadTemplate {
            key: key.to_string(),
            msg: format!("{e} in `{text}`"),
        })?;
        Ok(Some(term.map_types(&mut |t| {
            t.map_sorts(&mut |s| match s {
                Sort::Var(v) => Sort::Var(v + offset),
                other => other.clone(),
            })
        })))
    }
}
