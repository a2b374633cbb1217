//! CCG categories, the fragment lexicon and a CKY chart parser.

pub mod category;
pub mod deriv;
pub mod lexicon;
pub mod parser;

pub use category::{Base, Category, Dir};
pub use deriv::{check_derivation, derive, DerivTree, Leaf, Rule};
pub use lexicon::{numeral_value, tokenize, LexEntry, Lexicon, SemKey};
pub use parser::{parse, parse_with, Strategy};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GrammarError {
    #[error("malformed category `{0}`")]
    BadCategory(String),
    #[error("unknown feature `{0}`")]
    BadFeature(String),
    #[error("no lexical entry for `{0}`")]
    LexiconMiss(String),
    #[error("lexicon line {line}: {msg}")]
    LexiconFormat { line: usize, msg: String },
    #[error("{0}")]
    Io(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        tokenize(s)
    }

    fn cat(s: &str) -> Category {
        s.parse().unwrap()
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(toks("John is tall."), ["John", "is", "tall"]);
        assert_eq!(toks("Bob is 170 cm tall."), ["Bob", "is", "170", "cm", "tall"]);
        assert_eq!(
            toks("ITEL won at least eleven orders."),
            ["ITEL", "won", "at", "least", "eleven", "orders"]
        );
        assert_eq!(toks("  "), Vec::<String>::new());
    }

    #[test]
    fn category_syntax() {
        for s in [
            "S[dcl]\\NP",
            "(S[adj]\\NP)/(S[adj]\\NP)",
            "((S[dcl]\\NP)/(S[adj]\\NP))\\((S[dcl]\\NP)/(S[adj]\\NP))",
            "N[num]",
            "(NP/N)/N[num]",
        ] {
            assert_eq!(cat(s).to_string(), s);
        }
        assert_eq!(cat("S/NP\\NP"), cat("(S/NP)\\NP"));
        assert!("NP[dcl]".parse::<Category>().is_err());
        assert!("S[foo]".parse::<Category>().is_err());
        assert!("(S".parse::<Category>().is_err());
        assert!(cat("NP").unifies(&cat("NP")));
        assert!(cat("S").unifies(&cat("S[dcl]")));
        assert!(!cat("S[adj]").unifies(&cat("S[dcl]")));
    }

    #[test]
    fn numerals() {
        assert_eq!(numeral_value("170"), Some(170));
        assert_eq!(numeral_value("eleven"), Some(11));
        assert_eq!(numeral_value("Fifty"), Some(50));
        assert_eq!(numeral_value("twenty-one"), Some(21));
        assert_eq!(numeral_value("hundred"), Some(100));
        assert_eq!(numeral_value("twenty-zero"), None);
        assert_eq!(numeral_value("tall"), None);
    }

    fn fig1a() -> DerivTree {
        let john = DerivTree::leaf("John", cat("N"), SemKey::new("name", Some("john")));
        let np = DerivTree::node(cat("NP"), Rule::LexRaise, vec![john]);
        let is = DerivTree::leaf("is", cat("(S[dcl]\\NP)/(S[adj]\\NP)"), SemKey::new("cop", None));
        let tall = DerivTree::leaf("tall", cat("S[adj]\\NP"), SemKey::new("adj", Some("tall")));
        let vp = DerivTree::node(cat("S[dcl]\\NP"), Rule::FwdApp, vec![is, tall]);
        DerivTree::node(cat("S[dcl]"), Rule::BwdApp, vec![np, vp])
    }

    #[test]
    fn check_derivation_examples() {
        let t = fig1a();
        assert!(check_derivation(&t));
        let mut bad = t.clone();
        bad.cat = cat("NP");
        assert!(!check_derivation(&bad));
        let leaf = DerivTree::leaf("John", cat("N"), SemKey::new("name", Some("john")));
        assert!(check_derivation(&leaf));
    }

    #[test]
    fn parse_john_is_tall() {
        let lex = Lexicon::fragment();
        let trees = parse(&toks("John is tall."), &lex).unwrap();
        assert!(!trees.is_empty());
        assert_eq!(trees[0], fig1a());
        for t in &trees {
            assert!(check_derivation(t));
            assert_eq!(t.yield_tokens(), ["John", "is", "tall"]);
        }
    }

    #[test]
    fn parse_rejects_bad_order() {
        let lex = Lexicon::fragment();
        assert!(parse(&toks("tall John is"), &lex).unwrap().is_empty());
        assert_eq!(
            parse(&toks("John is blorpy"), &lex),
            Err(GrammarError::LexiconMiss("blorpy".into()))
        );
    }

    #[test]
    fn parse_is_deterministic_and_strategies_differ_only_in_order() {
        let lex = Lexicon::fragment();
        let t = toks("Alex is not as tall as Chris is");
        let a = parse_with(&t, &lex, Strategy::Left).unwrap();
        let b = parse_with(&t, &lex, Strategy::Left).unwrap();
        let c = parse_with(&t, &lex, Strategy::Right).unwrap();
        assert_eq!(a, b);
        assert!(!a.is_empty());
        assert_eq!(a.len(), c.len());
        for x in &c {
            assert!(a.contains(x));
        }
    }

    #[test]
    fn lookup_case_fallback() {
        let lex = Lexicon::fragment();
        assert!(!lex.lookup("Most").is_empty());
        assert!(!lex.lookup("ITEL").is_empty());
        let n = lex.lookup("eleven");
        assert!(n.iter().any(|e| e.key == SemKey::new("num", Some("11"))));
        assert!(lex.multiwords().contains(&vec!["at".to_string(), "least".to_string()]));
        assert!(Lexicon::parse("a\tNP/N").is_err());
    }
}
