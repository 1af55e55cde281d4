use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    root.join(format!("{name}.json")).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jsjtree")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn table_4() {
    let f = fixture("fig1");
    let a = run(&["invariant", &f, "--mode", "qi", "--table"]);
    assert_eq!(a.status.code(), Some(0));
    let text = stdout(&a);
    assert_eq!(text.lines().filter(|l| l.contains('{')).count(), 10);
    assert!(text.contains("{r2,r3,r5}") && text.contains("{c3,c4,c6}") && text.contains("{r7,r8,r9}"));
    assert_eq!(stdout(&run(&["invariant", &f, "--mode", "qi", "--table"])), text);
}

#[test]
fn compare_exit_codes() {
    let (g0, g2) = (fixture("ex11-g0"), fixture("ex11-g2"));
    assert_eq!(run(&["compare", &g0, &g2, "--mode", "qi"]).status.code(), Some(1));
    assert_eq!(run(&["compare", &g0, &g2, "--mode", "boundary"]).status.code(), Some(0));
    let f5 = fixture("fig5");
    assert_eq!(run(&["compare", &f5, &f5, "--mode", "boundary", "--max-xi", "0"]).status.code(), Some(2));
}

#[test]
fn witness_is_json() {
    let f = fixture("fig5");
    let o = run(&["compare", &f, &f, "--mode", "boundary", "--witness"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["Equivalent"]["xi"].is_array());
    assert!(v["Equivalent"]["beta"].is_array());
}

#[test]
fn dot_export() {
    let o = run(&["export-dot", &fixture("fig3")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("digraph"));
    // 5 vertices and 4 edges, one node per cell, two arcs per edge
    assert_eq!(text.matches("class=").count(), 9);
    assert_eq!(text.matches("->").count(), 8);
    assert!(text.contains("mult=\"inf\"") && text.contains("mult=\"1\""));
    assert!(text.contains("sign=0"));
}

#[test]
fn json_outputs_parse() {
    let f = fixture("fig1");
    for args in [
        vec!["invariant", f.as_str(), "--mode", "qi", "--json"],
        vec!["orbits", f.as_str(), "--mode", "qi+stretch", "--json"],
        vec!["imbalance", f.as_str(), "--json"],
        vec!["refine", f.as_str(), "--json"],
        vec!["stretch", f.as_str(), "--json"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    }
}

#[test]
fn stretch_table_text() {
    let text = stdout(&run(&["stretch", &fixture("ex11-g1")]));
    assert!(text.contains("e_u\t1/1") && text.contains("e_v\t2/1"), "{text}");
}

#[test]
fn every_fixture_runs_in_every_mode() {
    for name in ["fig1", "fig3", "fig4", "fig5", "ex11-g0", "ex11-g1", "ex11-g2"] {
        let f = fixture(name);
        for mode in ["type", "qi", "rel-qi", "boundary", "qi+stretch"] {
            let o = run(&["orbits", &f, "--mode", mode]);
            let ok = o.status.code() == Some(0);
            // fig5 carries no length data
            let expected = !(name == "fig5" && mode == "qi+stretch");
            assert_eq!(ok, expected, "{name} {mode}: {}", String::from_utf8_lossy(&o.stderr));
        }
    }
}

#[test]
fn oracle_check_finite_input() {
    let dir = std::env::temp_dir().join(format!("jsjtree-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let text = std::fs::read_to_string(fixture("fig3")).unwrap().replace("\"inf\"", "2");
    let path = dir.join("fig3-finite.json");
    std::fs::write(&path, text).unwrap();
    let o = run(&["oracle-check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 discrepancies"));
    assert_eq!(run(&["oracle-check", &fixture("fig3")]).status.code(), Some(65));
}

#[test]
fn error_exit_codes() {
    assert_eq!(run(&["invariant"]).status.code(), Some(64));
    assert_eq!(run(&["invariant", &fixture("fig1"), "--mode", "nonsense"]).status.code(), Some(64));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["invariant", "/nonexistent.json"]).status.code(), Some(65));
    let bad = std::env::temp_dir().join(format!("jsjtree-bad-{}.json", std::process::id()));
    std::fs::write(&bad, "{\"name\":\"x\",\"vertices\":[],\"edges\":[]}").unwrap();
    assert_eq!(run(&["invariant", bad.to_str().unwrap()]).status.code(), Some(65));
}

#[test]
fn trivial_jsj_warning_on_stderr() {
    let path = std::env::temp_dir().join(format!("jsjtree-lone-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"name":"lone","vertices":[{"id":"r","kind":"rigid"}],"edges":[]}"#).unwrap();
    let p = path.to_str().unwrap();
    let o = run(&["compare", p, p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("trivial JSJ"));
}
