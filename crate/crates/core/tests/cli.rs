use gmcalc::cli::run;

fn call(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = run(std::iter::once("gmcalc").chain(args.iter().copied()), &mut out);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["identity", "--n-max", "12"]).0, 0);
    assert_eq!(call(&["ktheory-check", "--prime", "3"]).0, 0);
    // The chart differs from the reference picture.
    assert_eq!(call(&["chart"]).0, 1);
    assert_eq!(call(&["no-such-command"]).0, 2);
    assert_eq!(call(&["chart", "--window", "garbage"]).0, 2);
}

#[test]
fn json_reports_parse() {
    let (code, out) = call(&["--format", "json", "burnside-check", "--prime", "3"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["command"], "burnside-check");
    assert_eq!(v["pass"], true);
    assert!(v["checks"][0]["claim"].is_string());
}

#[test]
fn chart_tsv_schema() {
    let (_, out) = call(&["chart", "--truncation", "3"]);
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).take_while(|l| !l.starts_with("PASS") && !l.starts_with("FAIL")).collect();
    assert_eq!(rows[0], "stem\tfiltration\tclass\td1_target");
    assert!(rows[1..].iter().all(|r| r.split('\t').count() == 4));
}

#[test]
fn output_is_deterministic() {
    for args in [&["selftest", "--cases", "50"][..], &["--seed", "7", "burnside-check", "--prime", "5"], &["--format", "grid", "chart"]] {
        assert_eq!(call(args), call(args));
    }
}
