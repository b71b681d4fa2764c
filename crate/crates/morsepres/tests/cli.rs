use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morsepres")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(format!("cli-{}-{name}", std::process::id()))
}

#[test]
fn stats_counts_cells() {
    let o = bin(&["stats", "<x,y | x^2, x*y^-2>"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("cells: 29"), "{s}");
    assert!(s.contains("invariant factors: 1 4"), "{s}");
}

#[test]
fn catalog_accepts_both_spellings() {
    let a = stdout(&bin(&["catalog", "G", "-1", "-1", "-1", "-2"]));
    let b = stdout(&bin(&["catalog", "G(-1,-1,-1,-2)"]));
    assert_eq!(a, b);
    assert_eq!(a.trim(), "<x,y | x*y^-1*x^-1*y*x, y*x^-2*y^-1*x^2*y>");
    assert_eq!(bin(&["catalog", "Nope", "1"]).status.code(), Some(2));
    assert_eq!(bin(&["catalog", "AK", "0"]).status.code(), Some(2));
}

#[test]
fn torus_demo_ends_with_commutator() {
    let o = bin(&["torus-demo"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.trim_end().ends_with("x6 x4 x6^-1 x4^-1"), "{s}");
}

#[test]
fn search_and_replay_ak2() {
    let cert = scratch("ak2.txt");
    let c = cert.to_str().unwrap();
    let o = bin(&["search", "AK(2)", "--seed", "0", "--max-trials", "1000", "--target", "empty", "--out", c]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&cert).unwrap();
    assert!(text.contains("result: < | >"), "{text}");
    let r = bin(&["replay", c]);
    assert_eq!(r.status.code(), Some(0));
    assert!(stdout(&r).contains("ok target"));

    // a certificate doubles as a matching file
    let m = bin(&["morse", "AK(2)", "--matching", c]);
    assert_eq!(m.status.code(), Some(0));
    assert!(stdout(&m).starts_with("critical: 1 "));

    let broken = scratch("broken.txt");
    let kept: Vec<&str> = text.lines().filter(|l| !l.starts_with("pair: e:r1")).collect();
    std::fs::write(&broken, kept.join("\n")).unwrap();
    let r = bin(&["replay", broken.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(1));
    assert!(stdout(&r).contains("FAIL critical-count"));
}

#[test]
fn jobs_do_not_change_certificates() {
    let mut certs = Vec::new();
    for jobs in ["1", "8"] {
        let path = scratch(&format!("ms3-{jobs}.txt"));
        let o = bin(&["search", "MS(3)", "--seed", "5", "--max-trials", "100000", "--jobs", jobs, "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        certs.push((std::fs::read_to_string(&path).unwrap(), stdout(&o)));
    }
    assert_eq!(certs[0], certs[1]);
}

#[test]
fn exit_codes() {
    let o = bin(&["search", "<x,y | x^2, x*y^-2>", "--max-trials", "3", "--target", "gens:0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("target not reached"));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bin(&["stats", "<x | x*>"]).status.code(), Some(2));
    assert_eq!(bin(&["search", "AK(2)", "--target", "sometimes"]).status.code(), Some(2));
    assert_eq!(bin(&["replay", "/nonexistent/cert"]).status.code(), Some(2));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_output_parses() {
    for args in [
        vec!["--json", "stats", "AK(2)"],
        vec!["complex", "AK(2)", "--json"],
        vec!["--json", "simplify", "G(-1,-1,-1,-2)", "--log-moves"],
        vec!["--json", "catalog", "MS(3)"],
        vec!["--json", "torus-demo"],
        vec!["--json", "morse", "AK(2)", "--matching", "3:4"],
        vec!["--json", "search", "AK(2)"],
    ] {
        let o = bin(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert!(v.is_object() || v.is_array());
    }
    let v: serde_json::Value = serde_json::from_slice(&bin(&["--json", "stats", "<x,y | x^2, x*y^-2>"]).stdout).unwrap();
    assert_eq!(v["cells"], 29);
}

#[test]
fn complex_dump_round_trips() {
    let path = scratch("ak2.cx");
    let o = bin(&["complex", "AK(2)", "--dump", path.to_str().unwrap()]);
    assert!(stdout(&o).contains("cells: 53"));
    let c = morsepres::complex::parse_complex(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(c.len(), 53);
}

#[test]
fn simplify_logs_moves() {
    let s = stdout(&bin(&["simplify", "G(-1,-1,-1,-4)", "--log-moves"]));
    assert!(s.contains("trivialized: true"), "{s}");
    assert!(s.contains("moves: "), "{s}");
}
