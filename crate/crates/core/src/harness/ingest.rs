use std::path::Path;

use serde::Deserialize;

use super::{Gold, HarnessError, Problem};

#[derive(Deserialize)]
struct Line {
    id: Option<serde_json::Value>,
    premises: Option<Vec<String>>,
    hypothesis: Option<String>,
    gold: Option<String>,
    #[serde(default)]
    tags: Vec<String>,
}

fn read(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
}

/// One problem per non-blank line; unknown fields are ignored.
pub fn parse_jsonl(text: &str) -> Result<Vec<Problem>, HarnessError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let bad = |reason: String| HarnessError::MalformedLine { line, reason };
        let l: Line = serde_json::from_str(raw).map_err(|e| bad(e.to_string()))?;
        let id = match l.id {
            Some(serde_json::Value::String(s)) => s,
            Some(serde_json::Value::Number(n)) => n.to_string(),
            _ => return Err(bad("missing id".into())),
        };
        let premises = l.premises.ok_or_else(|| bad("missing premises".into()))?;
        if premises.is_empty() || premises.iter().any(|p| p.trim().is_empty()) {
            return Err(bad("premises must be non-empty".into()));
        }
        let hypothesis = l.hypothesis.ok_or_else(|| bad("missing hypothesis".into()))?;
        if hypothesis.trim().is_empty() {
            return Err(bad("empty hypothesis".into()));
        }
        let gold = match l.gold {
            None => Gold::Unlabeled,
            Some(g) => Gold::parse(&g).ok_or_else(|| bad(format!("unknown gold label {g:?}")))?,
        };
        out.push(Problem {
            id,
            premises,
            hypothesis,
            gold,
            tags: l.tags,
        });
    }
    Ok(out)
}

pub fn ingest_jsonl(path: &Path) -> Result<Vec<Problem>, HarnessError> {
    parse_jsonl(&read(path)?)
}

fn section_tag(title: &str) -> Option<&'static str> {
    let t = title.to_ascii_uppercase();
    [
        ("QUANTIFIER", "GQ"),
        ("PLURAL", "Plur"),
        ("ANAPHORA", "Anaph"),
        ("ELLIPSIS", "Ell"),
        ("ADJECTIVE", "Adj"),
        ("COMPARATIVE", "Com"),
        ("TEMPORAL", "Temp"),
        ("VERB", "Verb"),
        ("ATTITUDE", "Att"),
    ]
    .into_iter()
    .find(|(k, _)| t.contains(k))
    .map(|(_, v)| v)
}

fn text_of(node: roxmltree::Node) -> String {
    let s: String = node.descendants().filter(|n| n.is_text()).filter_map(|n| n.text()).collect();
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Problems from the FraCaS XML layout; tags come from the enclosing section comments.
pub fn parse_fracas(text: &str) -> Result<Vec<Problem>, HarnessError> {
    let doc = roxmltree::Document::parse(text).map_err(|e| HarnessError::MalformedXml(e.to_string()))?;
    let mut section: Option<&'static str> = None;
    let mut out = Vec::new();
    for node in doc.descendants().filter(|n| n.is_element()) {
        match node.tag_name().name() {
            "comment" if node.attribute("class") == Some("section") => {
                section = section_tag(&text_of(node));
            }
            "problem" => {
                let id = node
                    .attribute("id")
                    .ok_or_else(|| HarnessError::MalformedXml("problem without id".into()))?;
                let answer = node.attribute("fracas_answer").or_else(|| node.attribute("answer")).unwrap_or("undef");
                let gold = Gold::parse(answer).unwrap_or(Gold::Unlabeled);
                let premises: Vec<String> = node
                    .children()
                    .filter(|c| c.has_tag_name("p"))
                    .map(text_of)
                    .collect();
                let hypothesis = node
                    .children()
                    .find(|c| c.has_tag_name("h"))
                    .map(text_of)
                    .ok_or_else(|| HarnessError::MalformedXml(format!("problem {id} has no hypothesis")))?;
                if premises.is_empty() {
                    return Err(HarnessError::MalformedXml(format!("problem {id} has no premises")));
                }
                let mut tags = vec!["FraCaS".to_string()];
                if let Some(s) = section {
                    tags.insert(0, s.to_string());
                }
                out.push(Problem {
                    id: format!("fracas-{id}"),
                    premises,
                    hypothesis,
                    gold,
                    tags,
                });
            }
            _ => {}
        }
    }
    Ok(out)
}

pub fn ingest_fracas(path: &Path) -> Result<Vec<Problem>, HarnessError> {
    parse_fracas(&read(path)?)
}
