use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn program(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn lrpgc(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lrpgc"));
    cmd.args(args).env_remove("LRPGC_FUEL");
    cmd
}

fn run(args: &[&str]) -> Output {
    lrpgc(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn eval_prints_the_summary_line() {
    let f = program("id.lrp", r"(\x -> x) True");
    let o = run(&["eval", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "WHNF\t1\t1\t1\t3\n");
}

#[test]
fn eval_and_measure_agree() {
    let f = program("agree.lrp", r"letrec f = \x -> Cons x Nil, a = f True in seq a (f False)");
    let e = stdout(&run(&["eval", f.to_str().unwrap()]));
    let m = stdout(&run(&["measure", f.to_str().unwrap()]));
    assert_eq!(m.lines().nth(1), e.lines().next());
    assert_eq!(m.lines().next(), Some("status\trln\trlnall\trlnLCSC\tspmax"));
}

#[test]
fn trace_lists_steps_then_summary() {
    let f = program("trace.lrp", r"(\x -> x) True");
    let o = run(&["trace", f.to_str().unwrap()]);
    assert_eq!(stdout(&o), "1\tlbeta\t3\nWHNF\t1\t1\t1\t3\n");
}

#[test]
fn exit_codes_follow_the_status() {
    let bh = program("bh.lrp", "letrec x = x in x");
    let o = run(&["eval", bh.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).ends_with("\tinf\n"));

    let lp = program("loop.lrp", r"letrec f = \x -> f x in f True");
    let o = lrpgc(&["eval", lp.to_str().unwrap()]).env("LRPGC_FUEL", "20").output().unwrap();
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).starts_with("FuelExhausted\t"));
    assert!(stdout(&o).contains("\t20\t"));

    // the flag wins over the environment
    let o = lrpgc(&["eval", lp.to_str().unwrap(), "--fuel", "7"]).env("LRPGC_FUEL", "20").output().unwrap();
    assert!(stdout(&o).contains("\t7\t"), "{}", stdout(&o));
}

#[test]
fn user_errors_exit_with_one() {
    let bad = program("bad.lrp", "(\\x -> \n");
    let o = run(&["eval", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.lrp:2:1:"), "{err}");

    assert_eq!(code(&run(&["eval", "/nonexistent/x.lrp"])), 1);
    assert_eq!(code(&run(&["eval"])), 1);
    assert_eq!(code(&run(&["bench", "fold", "--variant", "scan"])), 1);
}

#[test]
fn typed_rules_need_assumption() {
    let f = program("caseid.lrp", "case True of { True -> True; False -> False }");
    let o = run(&["transform", f.to_str().unwrap(), "--rule", "caseId", "--pos", "root"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8(o.stderr).unwrap().contains("typed"));
    let o = run(&["transform", f.to_str().unwrap(), "--rule", "caseId", "--pos", "root", "--assume-typed"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "True\n");
}

#[test]
fn transform_and_redexes() {
    let f = program("beta.lrp", r"(\x -> x) True");
    let o = run(&["redexes", f.to_str().unwrap(), "--rule", "lbeta"]);
    assert_eq!(stdout(&o), "lbeta\troot\tR\n");
    let o = run(&["transform", f.to_str().unwrap(), "--rule", "lbeta", "--all"]);
    assert_eq!(stdout(&o), "root\tletrec x = True in x\n");
    let o = run(&["transform", f.to_str().unwrap(), "--rule", "seqInsert", "--pos", "0.0", "--var", "x"]);
    assert_eq!(stdout(&o), "(\\x -> seq x x) True\n");
}

#[test]
fn psi_translates_arguments() {
    let f = program("psi.lrp", r"(\x -> x) True");
    let o = run(&["psi", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "letrec y0 = True in (\\x -> x) y0\n");
}

#[test]
fn reads_standard_input() {
    let mut child = lrpgc(&["eval", "-"]).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(b"seq True False").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(stdout(&o), "WHNF\t1\t1\t1\t3\n");
}

#[test]
fn bench_rows() {
    let o = run(&["bench", "fold", "--variant", "foldl", "--k", "100", "--inline", "plain"]);
    assert_eq!(stdout(&o), "foldl\tfalse\t100\t1206\t811\n");
    let o = run(&["bench", "cse", "--n", "10,20"]);
    assert_eq!(stdout(&o), "10\t44\t58\n20\t44\t78\n");
    let o = run(&["bench", "append", "--n", "2", "--context", "last,seq-dominated"]);
    assert_eq!(stdout(&o), "last\t2\t4\nseq-dominated\t2\t0\n");
}

#[test]
fn check_pair_reports_a_verdict() {
    let f = program("cpx.lrp", "letrec x = y, y = True, z = Cons x x in case z of { Nil -> x; Cons a b -> b }");
    let o = run(&["check", "pair", f.to_str().unwrap(), "--rule", "cpx-in", "--pos", "root", "--family", "a"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let line = stdout(&o);
    assert!(line.starts_with("pair\tEquivalenceConsistent\t0\t0\t"), "{line}");
}

#[test]
fn seeded_output_is_reproducible() {
    let args = ["check", "cp-bound", "--seed", "3", "--count", "5"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 5);
}
