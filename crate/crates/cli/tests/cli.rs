use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use buchidet::fixtures::ex_a1;
use buchidet::{emit_dpa, emit_nba, parse_dpa};
use tempfile::TempDir;

fn buchidet(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_buchidet"))
        .args(args)
        .current_dir(dir)
        .env_remove("BUCHIDET_STATE_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn setup() -> TempDir {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("ex-a1.hoa"), emit_nba(&ex_a1())).unwrap();
    dir
}

#[test]
fn det_fixture_gives_two_states() {
    let dir = setup();
    let o = buchidet(&["det", "ex-a1.hoa", "--merge", "safra"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(parse_dpa(&stdout(&o)).unwrap().num_states(), 2);
}

#[test]
fn universal_family_minimizes_to_one_state() {
    let dir = setup();
    assert_eq!(buchidet(&["gen", "cn", "2", "-o", "c2.hoa"], dir.path()).status.code(), Some(0));
    let o = buchidet(&["det", "c2.hoa", "--opts", "M", "-o", "c2.dpa", "--stats-json", "s.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let dpa = parse_dpa(&fs::read_to_string(dir.path().join("c2.dpa")).unwrap()).unwrap();
    assert_eq!(dpa.num_states(), 1);
    let stats: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("s.json")).unwrap()).unwrap();
    assert_eq!(stats["output_states"], 1);
    assert_eq!(stats["input_states"], 5);
    assert_eq!(stats["opts"], "M");
}

#[test]
fn unsupported_acceptance_exits_with_2() {
    let dir = setup();
    let rabin = "HOA: v1\nStates: 1\nStart: 0\nAP: 0\nacc-name: Rabin 1\nAcceptance: 2 Fin(0) & Inf(1)\n--BODY--\nState: 0\n[t] 0\n--END--\n";
    fs::write(dir.path().join("bad.hoa"), rabin).unwrap();
    let o = buchidet(&["det", "bad.hoa"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unsupported acceptance"));
}

#[test]
fn state_cap_exits_with_3() {
    let dir = setup();
    buchidet(&["gen", "cn", "4", "-o", "c4.hoa"], dir.path());
    assert_eq!(buchidet(&["det", "c4.hoa", "--state-cap", "10"], dir.path()).status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_buchidet"))
        .args(["det", "c4.hoa"])
        .current_dir(dir.path())
        .env("BUCHIDET_STATE_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_outcomes() {
    let dir = setup();
    buchidet(&["det", "ex-a1.hoa", "-o", "a.dpa"], dir.path());
    assert_eq!(buchidet(&["verify", "ex-a1.hoa", "a.dpa"], dir.path()).status.code(), Some(0));

    let mut broken = parse_dpa(&fs::read_to_string(dir.path().join("a.dpa")).unwrap()).unwrap();
    for p in 0..broken.num_states() {
        for a in 0..broken.num_symbols() {
            let pr = broken.priority(p, a);
            broken.set_priority(p, a, pr + 1);
        }
    }
    fs::write(dir.path().join("broken.dpa"), emit_dpa(&broken)).unwrap();
    let o = buchidet(&["verify", "ex-a1.hoa", "broken.dpa", "--prefix", "2", "--cycle", "2"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("counterexample: "), "{}", stdout(&o));

    buchidet(&["gen", "bn", "3", "-o", "b3.hoa"], dir.path());
    assert_eq!(buchidet(&["verify", "b3.hoa", "a.dpa"], dir.path()).status.code(), Some(2));
    assert_eq!(buchidet(&["verify", "missing.hoa", "a.dpa"], dir.path()).status.code(), Some(2));
}

#[test]
fn equiv_outcomes() {
    let dir = setup();
    buchidet(&["gen", "random", "--states", "6", "--seed", "11", "-o", "r.hoa"], dir.path());
    buchidet(&["det", "r.hoa", "--merge", "safra", "-o", "s.dpa"], dir.path());
    buchidet(&["det", "r.hoa", "--merge", "max", "--opts", "TEIMS", "-o", "m.dpa"], dir.path());
    assert_eq!(buchidet(&["equiv", "s.dpa", "s.dpa"], dir.path()).status.code(), Some(0));
    assert_eq!(buchidet(&["equiv", "s.dpa", "m.dpa"], dir.path()).status.code(), Some(0));
    let d = parse_dpa(&fs::read_to_string(dir.path().join("s.dpa")).unwrap()).unwrap();
    fs::write(dir.path().join("co.dpa"), emit_dpa(&d.complement())).unwrap();
    let o = buchidet(&["equiv", "s.dpa", "co.dpa"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("counterexample: "));
}

#[test]
fn gen_is_deterministic() {
    let dir = setup();
    let args = ["gen", "random", "--states", "7", "--symbols", "3", "--density", "1.2", "--acc-frac", "0.4", "--seed", "5"];
    let a = buchidet(&args, dir.path());
    let b = buchidet(&args, dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let bn = stdout(&buchidet(&["gen", "bn", "5"], dir.path()));
    assert!(bn.contains("States: 6"));
    let cn = stdout(&buchidet(&["gen", "cn", "2"], dir.path()));
    assert!(cn.contains("States: 5"));
}

#[test]
fn bench_rows_and_summary() {
    let dir = setup();
    let corpus = dir.path().join("corpus");
    fs::create_dir(&corpus).unwrap();
    fs::copy(dir.path().join("ex-a1.hoa"), corpus.join("a.hoa")).unwrap();
    buchidet(&["gen", "cn", "2", "-o", "corpus/b.hoa"], dir.path());
    buchidet(&["gen", "bn", "3", "-o", "corpus/c.hoa"], dir.path());
    let o = buchidet(&["bench", "corpus", "--configs", "def,TEIM", "--csv", "out.csv", "--jobs", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("out.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "file,config,merge,in_states,out_states,priorities,ms,status");
    let data: Vec<&str> = lines[1..].iter().copied().filter(|l| l.ends_with(",ok")).collect();
    assert_eq!(data.len(), 6);
    assert!(data[0].starts_with("a.hoa,def,safra,2,2,3,"));
    assert!(data[1].starts_with("a.hoa,TEIM,safra,2,2,2,"));
    assert!(lines.iter().any(|l| l.starts_with("summary,TEIM vs def,safra,")));
}

#[test]
fn bench_timeout_only_hits_the_slow_instance() {
    let dir = setup();
    let corpus = dir.path().join("corpus");
    fs::create_dir(&corpus).unwrap();
    fs::copy(dir.path().join("ex-a1.hoa"), corpus.join("a.hoa")).unwrap();
    buchidet(&["gen", "cn", "8", "-o", "corpus/big.hoa"], dir.path());
    let o = buchidet(&["bench", "corpus", "--configs", "def", "--timeout", "1"], dir.path());
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("a.hoa,def,safra,2,2,3,") && l.ends_with(",ok")), "{out}");
    assert!(out.lines().any(|l| l.starts_with("big.hoa,def,safra,17,,,") && l.ends_with(",timeout")), "{out}");
}
