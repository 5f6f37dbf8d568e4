use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn speedup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_speedup")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SMALL: &str = "[space]\ndepth = 1\nvars = 2\n[sampling]\nj = 2\nx = 2\no = 3\nseed = 4\n";

#[test]
fn count_and_enumerate() {
    let o = speedup(&["count", "-n", "1", "-m", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "18\n");
    let o = speedup(&["enumerate", "-n", "1", "-m", "2", "--from", "3", "--to", "4"]);
    assert_eq!(stdout(&o), "3\t~p1\n4\t~p2\n");
    let o = speedup(&["count", "-n", "2", "-m", "1", "--ops", "and,or"]);
    assert!(o.status.success());
}

#[test]
fn prove_prints_a_three_line_proof() {
    let o = speedup(&["prove", "-t", "p1,p1->p2", "-g", "p2", "--engine", "exact"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let numbered = text.lines().filter(|l| l.starts_with(|c: char| c.is_ascii_digit())).count();
    assert_eq!(numbered, 3, "{text}");
    assert!(text.contains("D = 3"));
    let o = speedup(&["prove", "-t", "p1", "-g", "p2"]);
    assert_eq!(stdout(&o), "not entailed\n");
    let o = speedup(&["prove", "-t", "p1,p1->p2", "-g", "p2", "--engine", "resolution"]);
    assert!(o.status.success());
}

#[test]
fn exit_codes() {
    assert_eq!(speedup(&["run", "-c", "missing.cfg"]).status.code(), Some(3));
    assert_eq!(speedup(&["bogus"]).status.code(), Some(2));
    assert_eq!(speedup(&["prove", "-g", "p1 ->"]).status.code(), Some(2));
    assert_eq!(speedup(&["count", "-n", "1"]).status.code(), Some(2));
    assert_eq!(speedup(&["audit", "-m", "/nonexistent/matrix.csv"]).status.code(), Some(4));
    assert_eq!(speedup(&["--help"]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "[sampling]\nx = 0\n").unwrap();
    assert_eq!(speedup(&["run", "-c", bad.to_str().unwrap()]).status.code(), Some(3));
}

fn run_into(dir: &Path, config: &Path) {
    let o = speedup(&["run", "-c", config.to_str().unwrap(), "-o", dir.to_str().unwrap(), "--threads", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn run_matrix_render_audit_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    fs::write(&cfg, SMALL).unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run_into(&a, &cfg);
    run_into(&b, &cfg);
    for f in ["results.csv", "matrix.csv", "incidence.ppm", "audit.txt"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let rebuilt = speedup(&["matrix", "-c", cfg.to_str().unwrap(), "-r", a.join("results.csv").to_str().unwrap()]);
    assert_eq!(rebuilt.stdout, fs::read(a.join("matrix.csv")).unwrap());

    let matrix = a.join("matrix.csv");
    let img = dir.path().join("m.ppm");
    let o = speedup(&["render", "-m", matrix.to_str().unwrap(), "-o", img.to_str().unwrap(), "--cell", "2", "--grayscale"]);
    assert!(o.status.success());
    assert!(fs::read(&img).unwrap().starts_with(b"P6\n"));
    let o = speedup(&["render", "-m", matrix.to_str().unwrap(), "-o", img.to_str().unwrap(), "--panels", "2"]);
    assert!(o.status.success());
    assert!(dir.path().join("m-1.ppm").exists() && dir.path().join("m-2.ppm").exists());

    let o = speedup(&["audit", "-m", matrix.to_str().unwrap(), "--exp-num", "4"]);
    let text = stdout(&o);
    assert!(text.starts_with("Exp. Num. | Cases | δ>0 | Percentage | δ<0 | Ratio\n4 | "));
    assert!(text.contains("verdict: possibly-normal"));

    let o = speedup(&["export-tptp", "-c", cfg.to_str().unwrap(), "--column", "1", "--row", "0"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("fof(goal, conjecture, "));
    assert_eq!(speedup(&["export-tptp", "-c", cfg.to_str().unwrap(), "--column", "99", "--row", "0"]).status.code(), Some(2));
}
