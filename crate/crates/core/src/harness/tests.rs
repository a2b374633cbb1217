use super::*;

const CAD_001: &str = r#"{"id":"cad-001","premises":["John is 5 cm taller than Bob.","Bob is 170 cm tall."],"hypothesis":"John is 175 cm tall.","gold":"yes"}"#;

#[test]
fn jsonl_ingestion() {
    let ps = parse_jsonl(CAD_001).unwrap();
    assert_eq!(ps.len(), 1);
    assert_eq!(ps[0].premises.len(), 2);
    assert_eq!(ps[0].gold, Gold::Yes);
    assert!(ps[0].tags.is_empty());
    assert!(parse_jsonl("").unwrap().is_empty());
    let missing = r#"{"id":"x","premises":["A dog barks."],"gold":"yes"}"#;
    let text = format!("{CAD_001}\n{missing}\n");
    assert_eq!(
        parse_jsonl(&text).unwrap_err(),
        HarnessError::MalformedLine {
            line: 2,
            reason: "missing hypothesis".into()
        }
    );
    assert!(matches!(parse_jsonl("{not json"), Err(HarnessError::MalformedLine { line: 1, .. })));
    let extra = r#"{"id":7,"premises":["p"],"hypothesis":"h","gold":"undef","source":"x"}"#;
    let p = &parse_jsonl(extra).unwrap()[0];
    assert_eq!((p.id.as_str(), p.gold), ("7", Gold::Unlabeled));
}

#[test]
fn fracas_ingestion() {
    let ps = parse_fracas(include_str!("../../tests/fixtures/fracas_sample.xml")).unwrap();
    assert_eq!(ps.len(), 4);
    let p235 = ps.iter().find(|p| p.id == "fracas-235").unwrap();
    assert_eq!(p235.premises.len(), 2);
    assert_eq!(p235.gold, Gold::Yes);
    assert_eq!(p235.tags[0], "Com");
    assert_eq!(ps[0].tags[0], "GQ");
    assert_eq!(ps[1].tags[0], "Adj");
    assert_eq!(ps[3].gold, Gold::Unlabeled);
    assert!(matches!(parse_fracas("<fracas><problem"), Err(HarnessError::MalformedXml(_))));
}

#[test]
fn combine_table() {
    use Answer::*;
    assert_eq!(combine_answers(Yes, Unknown), Yes);
    assert_eq!(combine_answers(Unknown, No), No);
    assert_eq!(combine_answers(Yes, No), Unknown);
    assert_eq!(combine_answers(Unknown, Unknown), Unknown);
    assert_eq!(combine_answers(No, No), No);
}

fn com_golds() -> Vec<Gold> {
    let mut g = vec![Gold::Yes; 19];
    g.extend(vec![Gold::No; 9]);
    g.extend(vec![Gold::Unknown; 3]);
    g
}

#[test]
fn majority_and_dummy_accuracy() {
    let (label, acc) = majority_baseline(&com_golds()).unwrap();
    assert_eq!(label, Answer::Yes);
    assert!((acc - 0.6129).abs() < 1e-3);
    let problems: Vec<ProblemReport> = com_golds()
        .into_iter()
        .enumerate()
        .map(|(i, gold)| ProblemReport {
            id: i.to_string(),
            tags: vec!["Com".into()],
            gold,
            answer: Answer::Unknown,
            correct: gold.answer().map(|g| g == Answer::Unknown),
            stage: Stage::Done,
            strategies: vec![],
            sentences: vec![],
            tff: None,
            wall_ms: 0,
        })
        .collect();
    let r = RunReport::new(problems);
    assert!((r.summary.accuracy.unwrap() - 3.0 / 31.0).abs() < 1e-9);
    assert_eq!(r.summary.per_tag["Com"].problems, 31);
    assert!(majority_baseline(&[Gold::Unlabeled]).is_none());
}

#[test]
fn failures_degrade_to_unknown() {
    let cfg = Config::default();
    let p = Problem {
        id: "bad".into(),
        premises: vec!["Colorless green ideas sleep furiously.".into()],
        hypothesis: "".into(),
        gold: Gold::Unknown,
        tags: vec![],
    };
    let o = run_pipeline(&p, &cfg, Strategy::Left);
    assert_eq!(o.verdict.answer, Answer::Unknown);
    assert_eq!(o.stage, Stage::Parse);
    assert!(o.error.is_some());
}

#[test]
fn pipeline_examples() {
    let cfg = Config::default();
    let problems = parse_jsonl(include_str!("../../data/curated.jsonl")).unwrap();
    for id in ["example-1", "cad-011", "cad-034", "med-1085"] {
        let p = problems.iter().find(|p| p.id == id).unwrap();
        let o = run_pipeline(p, &cfg, Strategy::Left);
        assert_eq!(Some(o.verdict.answer), p.gold.answer(), "{id}");
        assert_eq!(o.stage, Stage::Done);
        assert!(o.tff.is_some());
    }
}

#[test]
fn report_accounting() {
    let problems = parse_jsonl(include_str!("../../data/curated.jsonl")).unwrap();
    let cfg = Config {
        workers: 3,
        ..Config::default()
    };
    let r = evaluate(&problems, &cfg);
    assert_eq!(r.problems.len(), problems.len());
    let ids: Vec<&str> = r.problems.iter().map(|p| p.id.as_str()).collect();
    let want: Vec<&str> = problems.iter().map(|p| p.id.as_str()).collect();
    assert_eq!(ids, want);
    for tag in ["Com", "Adj", "GQ"] {
        let n = problems.iter().filter(|p| p.tags.iter().any(|t| t == tag)).count();
        assert_eq!(r.summary.per_tag[tag].problems, n);
    }
    let lines = r.jsonl(false);
    assert_eq!(lines.lines().count(), problems.len() + 1);
    assert!(r.table().contains("majority baseline"));
}
