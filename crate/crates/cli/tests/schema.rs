use hillproj_cli::{run, SCHEMA};
use serde_json::Value;

fn validator() -> jsonschema::Validator {
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn document(args: &[&str]) -> Value {
    let mut full = vec!["hillproj"];
    full.extend_from_slice(args);
    let out = run(full);
    let text = if out.stdout.is_empty() { out.stderr } else { out.stdout };
    let text = text.lines().last().filter(|l| l.starts_with("# ")).map(|l| l[2..].to_string()).unwrap_or(text);
    serde_json::from_str(&text).unwrap()
}

#[test]
fn every_document_validates() {
    let v = validator();
    let cases: Vec<Vec<&str>> = vec![
        vec!["classify", "--potential", "0"],
        vec!["classify", "--potential", "-1"],
        vec!["classify", "--potential", "pi^2"],
        vec!["classify", "--potential", "2 + 0.5*cos(2*pi*t)"],
        vec!["classify", "--potential", "40 + 10*cos(2*pi*t)"],
        vec!["classify", "--potential", "1e-7"],
        vec!["classify", "--potential", "cos("],
        vec!["report", "--kind", "hyp", "--k", "2", "--lambda", "0.3"],
        vec!["report", "--kind", "para", "--k", "1", "--sign", "plus"],
        vec!["report", "--kind", "ell", "--alpha", "7.5"],
        vec!["report", "--kind", "central", "--k", "2"],
        vec!["report", "--potential", "-3"],
        vec!["winding", "--interval", "0,3.14159265358979"],
        vec!["winding", "--interval", "-inf,inf"],
        vec!["winding", "--interval", "0,inf"],
        vec!["conjugacy", "--matrix-a", "0.5,0,0,2", "--matrix-b", "2,0,0,0.5"],
        vec!["conjugacy", "--matrix-a", "1,1,0,1", "--matrix-b", "1,-1,0,1"],
        vec!["conjugacy", "--matrix-a", "2,1,1,1", "--matrix-b", "1,1,1,2", "--k-a", "1", "--k-b", "1"],
        vec!["conjugacy", "--matrix-a", "0,-1,1,0", "--matrix-b", "0,1,-1,0", "--k-a", "0", "--k-b", "1"],
        vec!["sweep", "--template", "a + q*cos(2*pi*t)", "--param", "a=0:12:4", "--param", "q=0:3:3"],
    ];
    for args in cases {
        let doc = document(&args);
        let errors: Vec<String> = v.iter_errors(&doc).map(|e| format!("{e} at {}", e.instance_path())).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}\n{doc:#}");
    }
}

#[test]
fn schema_rejects_foreign_documents() {
    let v = validator();
    for bad in [
        r#"{"schema_version": 2, "command": "winding"}"#,
        r#"{"schema_version": 1, "command": "winding", "interval": [0, 1], "oriented": false, "class": {"class": "Bounded", "winding": 0.3}, "winding": 0.3}"#,
        r#"{"schema_version": 1, "command": "telepathy"}"#,
    ] {
        let doc: Value = serde_json::from_str(bad).unwrap();
        assert!(!v.is_valid(&doc), "{bad}");
    }
}
