use std::path::Path;
use std::process::{Command, Output};

fn qchar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qchar")).args(args).output().expect("spawn qchar")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn body(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn fund_a2_text() {
    let o = qchar(&["fund", "--type", "A2", "--node", "1", "--format", "text"]);
    assert!(o.status.success());
    assert_eq!(body(&stdout(&o)), ["Y[1,0] : 1", "Y[1,2]^-1 Y[2,1] : 1", "Y[2,3]^-1 : 1"]);
}

#[test]
fn text_and_binary_files_agree() {
    let dir = tempfile::tempdir().unwrap();
    let txt = path(dir.path(), "d4.txt");
    let bin = path(dir.path(), "d4.qcht");
    let flat = path(dir.path(), "d4flat.qcht");
    assert!(qchar(&["fund", "--type", "D4", "--node", "2", "--out", &txt]).status.success());
    assert!(qchar(&["fund", "--type", "D4", "--node", "2", "--format", "bin", "--out", &bin]).status.success());
    assert!(qchar(&["fund", "--type", "D4", "--node", "2", "--format", "bin", "--flat", "--out", &flat])
        .status
        .success());
    let a = qchar(&["restrict", "--in", &txt]);
    let b = qchar(&["restrict", "--in", &bin]);
    let c = qchar(&["restrict", "--in", &flat]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    // bytes do not depend on the thread count
    let one = path(dir.path(), "t1.qcht");
    assert!(qchar(&["fund", "--type", "D4", "--node", "2", "--format", "bin", "--threads", "1", "--out", &one])
        .status
        .success());
    assert_eq!(std::fs::read(&one).unwrap(), std::fs::read(&bin).unwrap());
}

#[test]
fn decompose_e8_node1() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(dir.path(), "e8.qcht");
    assert!(qchar(&["fund", "--type", "E8", "--node", "1", "--format", "bin", "--out", &f]).status.success());
    let o = qchar(&["decompose", "--in", &f]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), ["w1 : 1", "0 : t^2"]);
    let o = qchar(&["decompose", "--in", &f, "--records"]);
    assert_eq!(stdout(&o), "1,0,0,0,0,0,0,0\t1\n0,0,0,0,0,0,0,0\tt^2\n");
}

#[test]
fn strict_stop_and_tolerant_run() {
    let o = qchar(&["general", "--type", "A1", "--drinfeld", "1:0,1:2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("l-dominant monomial 1"));
    let o = qchar(&["general", "--type", "A1", "--drinfeld", "1:0,1:2", "--tolerant"]);
    assert!(o.status.success());
    assert_eq!(body(&stdout(&o)).len(), 3);
}

#[test]
fn simple_reports_coefficients() {
    let o = qchar(&["simple", "--type", "A1", "--drinfeld", "1:0,1:2", "--chi"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("# a[-] : -t^-1"));
    assert!(s.contains("# normalization chi"));
    assert_eq!(body(&s).len(), 3);
}

#[test]
fn tensor_checks_order() {
    let dir = tempfile::tempdir().unwrap();
    let a = path(dir.path(), "a.txt");
    let b = path(dir.path(), "b.txt");
    assert!(qchar(&["general", "--type", "A1", "--drinfeld", "1:0", "--out", &a]).status.success());
    assert!(qchar(&["general", "--type", "A1", "--drinfeld", "1:2", "--out", &b]).status.success());
    let ok = qchar(&["tensor", "--factors", &format!("{a},{b}")]);
    assert!(ok.status.success());
    // standard module of 1:0,1:2: four monomials, Y[1,0] Y[1,2] on top
    let s = stdout(&ok);
    assert_eq!(body(&s).len(), 4);
    assert!(s.contains("Y[1,0] Y[1,2] : 1"));
    let bad = qchar(&["tensor", "--factors", &format!("{b},{a}")]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("suggested order"));
}

#[test]
fn crystal_check_against() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(dir.path(), "e6.txt");
    let g = path(dir.path(), "e6n2.txt");
    assert!(qchar(&["fund", "--type", "E6", "--node", "1", "--out", &f]).status.success());
    assert!(qchar(&["fund", "--type", "E6", "--node", "2", "--out", &g]).status.success());
    let o = qchar(&["crystal", "--type", "E6", "--node", "1", "--check-against", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 27);
    let o = qchar(&["crystal", "--type", "E6", "--node", "1", "--check-against", &g]);
    assert_eq!(o.status.code(), Some(3));
    let o = qchar(&["crystal", "--type", "A2", "--node", "1", "--edges"]);
    assert_eq!(stdout(&o), "Y[1,0] --1--> Y[1,2]^-1 Y[2,1]\nY[1,2]^-1 Y[2,1] --2--> Y[2,3]^-1\n");
}

#[test]
fn ic_prints_both_matrices() {
    let o = qchar(&["ic", "--type", "A2", "--weights", "w1+w2,0", "--records"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.starts_with("# P\n"));
    assert!(s.contains("# IC\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(qchar(&["fund", "--type", "E6", "--node", "9"]).status.code(), Some(1));
    assert_eq!(qchar(&["fund", "--type", "F4", "--node", "1"]).status.code(), Some(1));
    assert_eq!(qchar(&["nonsense"]).status.code(), Some(1));
    assert_eq!(qchar(&["fund", "--type", "E6", "--node", "1", "--max-depth", "2"]).status.code(), Some(4));
    assert_eq!(qchar(&["--help"]).status.code(), Some(0));
}

#[test]
fn memory_guard_checkpoint_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let ck = path(dir.path(), "run.ckpt");
    let full = qchar(&["fund", "--type", "E7", "--node", "2"]);
    // any real process is above 1 MiB, so the guard trips after layer 0
    let o = qchar(&["fund", "--type", "E7", "--node", "2", "--max-mem", "1", "--checkpoint", &ck]);
    assert_eq!(o.status.code(), Some(4));
    let resumed = qchar(&["resume", "--in", &ck]);
    assert!(resumed.status.success());
    assert_eq!(resumed.stdout, full.stdout);
    // periodic checkpoints during a normal run
    let ck2 = path(dir.path(), "periodic.ckpt");
    let o = qchar(&["fund", "--type", "E7", "--node", "2", "--checkpoint", &ck2, "--checkpoint-every", "5"]);
    assert!(o.status.success());
    assert!(Path::new(&ck2).exists());
}

#[test]
fn mem_report_peak_is_monotone() {
    let o = qchar(&["fund", "--type", "E7", "--node", "1", "--mem-report", "--threads", "1"]);
    assert!(o.status.success());
    let err = String::from_utf8(o.stderr).unwrap();
    let peaks: Vec<u64> = err
        .lines()
        .filter_map(|l| l.split("peak ").nth(1))
        .map(|p| p.trim_end_matches(" MiB").parse().unwrap())
        .collect();
    assert!(!peaks.is_empty());
    assert!(peaks.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn pipe_roundtrip() {
    let first = qchar(&["fund", "--type", "A1", "--node", "1"]);
    let mut child = Command::new(env!("CARGO_BIN_EXE_qchar"))
        .args(["restrict", "--in", "/dev/stdin"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(&first.stdout).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out), "-w1 : 1\nw1 : 1\n");
}
