use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cartwheel-discharge"))
        .args(args)
        .env_remove("CARTWHEEL_TRACE_DIR")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn text(o: &Output) -> String {
    format!("{}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr))
}

fn verify(d: &str, rules: &str, pres: &str, configs: &str, extra: &[&str]) -> Output {
    let (r, p, c) = (data(rules), data(pres), data(configs));
    let mut args = vec!["verify", "-d", d, "-r", r.to_str().unwrap(), "-p", p.to_str().unwrap(), "-c", c.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn synthetic_suite_verifies() {
    let o = verify("7", "rules-empty.txt", "present7-synthetic.txt", "configs-empty.txt", &[]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    assert!(text(&o).starts_with("verified degree 7"));
}

#[test]
fn demo_uses_every_disposition() {
    let o = verify("7", "rules-empty.txt", "present7-demo.txt", "configs-toy.txt", &["--trace", "--jobs", "1"]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    let out = String::from_utf8_lossy(&o.stdout);
    let verdicts: Vec<&str> = out.lines().filter_map(|l| l.split('\t').nth(4)).collect();
    assert_eq!(verdicts, ["split", "ok", "split", "ok", "ok"]);
    assert!(out.contains("1 reducible, 1 symmetries"));
}

#[test]
fn trace_is_independent_of_workers() {
    let args = ["--trace"];
    let a = verify("7", "rules-sample.txt", "present7-demo.txt", "configs-toy.txt", &[&args[..], &["--jobs", "1"]].concat());
    let b = verify("7", "rules-sample.txt", "present7-demo.txt", "configs-toy.txt", &[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(code(&a), code(&b));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn trace_dir_redirects_records() {
    let dir = tempfile::tempdir().unwrap();
    let (r, p, c) = (data("rules-empty.txt"), data("present7-demo.txt"), data("configs-toy.txt"));
    let o = Command::new(env!("CARGO_BIN_EXE_cartwheel-discharge"))
        .args(["verify", "-d", "7", "--trace", "-r", r.to_str().unwrap(), "-p", p.to_str().unwrap()])
        .args(["-c", c.to_str().unwrap()])
        .env("CARTWHEEL_TRACE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", text(&o));
    let trace = fs::read_to_string(dir.path().join("trace-d7.txt")).unwrap();
    assert_eq!(trace.lines().count(), 5);
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 1);
}

#[test]
fn tampered_bound_fails_at_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.txt");
    fs::write(&p, "degree 7\n\n0 H 1 1 0 2 2 0 3 3 0 4 4 0 5 5 0 6 6 0 7 7 -1\n").unwrap();
    let (r, c) = (data("rules-empty.txt"), data("configs-empty.txt"));
    let o = run(&["verify", "-d", "7", "-r", r.to_str().unwrap(), "-p", p.to_str().unwrap(), "-c", c.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(text(&o).contains("line 3:"), "{}", text(&o));
}

#[test]
fn missing_escalation_database_fails() {
    let o = verify("7", "rules-sample.txt", "present7-synthetic.txt", "configs-empty.txt", &[]);
    assert_eq!(code(&o), 1);
    let o = verify("7", "rules-sample.txt", "present7-synthetic.txt", "configs-toy.txt", &[]);
    assert_eq!(code(&o), 0, "{}", text(&o));
}

#[test]
fn malformed_inputs_exit_2() {
    let o = verify("7", "no-such-rules.txt", "present7-synthetic.txt", "configs-empty.txt", &[]);
    assert_eq!(code(&o), 2);
    let o = verify("8", "rules-empty.txt", "present7-synthetic.txt", "configs-empty.txt", &[]);
    assert_eq!(code(&o), 2);
    assert!(text(&o).contains("line 1:"));
    let o = verify("6", "rules-empty.txt", "present7-synthetic.txt", "configs-empty.txt", &[]);
    assert_eq!(code(&o), 2);
}

#[test]
fn derive_outlets_and_golden() {
    let r = data("rules-empty.txt");
    let o = run(&["derive-outlets", "-d", "7", "-r", r.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());

    let r = data("rules-sample.txt");
    let g = data("outlets-sample-d7.txt");
    let o = run(&["derive-outlets", "-d", "7", "-r", r.to_str().unwrap(), "--golden", g.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    assert_eq!(String::from_utf8_lossy(&o.stdout), fs::read_to_string(&g).unwrap());

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("golden.txt");
    fs::write(&bad, fs::read_to_string(&g).unwrap().replace("2 5 6", "2 5 7")).unwrap();
    let o = run(&["derive-outlets", "-d", "7", "-r", r.to_str().unwrap(), "--golden", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(text(&o).contains("entry 2"), "{}", text(&o));
}

#[test]
fn lint_findings() {
    let (r, p, c) = (data("rules-sample.txt"), data("present7-demo.txt"), data("configs-toy.txt"));
    let o = run(&["lint", "-r", r.to_str().unwrap(), "-p", p.to_str().unwrap(), "-c", c.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", text(&o));

    let dir = tempfile::tempdir().unwrap();
    let jump = dir.path().join("jump.txt");
    fs::write(&jump, "degree 7\n0 C 1 6\n2 R\n0 R\n").unwrap();
    let o = run(&["lint", "-p", jump.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(text(&o).contains("line 3: consecutive levels must differ by exactly 1"), "{}", text(&o));

    // a path on seven vertices has radius three
    let mut path = String::from("config far 7\nv 1 6 : 2 |\n");
    for v in 2..7 {
        path.push_str(&format!("v {v} 6 : {} | {} |\n", v - 1, v + 1));
    }
    path.push_str("v 7 6 : 6 |\nend\n");
    let far = dir.path().join("far.txt");
    fs::write(&far, path).unwrap();
    let o = run(&["lint", "-c", far.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(text(&o).contains("radius exceeds two"), "{}", text(&o));
}
