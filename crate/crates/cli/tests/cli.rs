use std::io::Write as _;
use std::path::Path;
use std::process::{Command, Stdio};

const PETERSEN: &str = "10 15\n0 1\n1 2\n2 3\n3 4\n0 4\n0 5\n1 6\n2 7\n3 8\n4 9\n5 7\n7 9\n6 9\n6 8\n5 8\n";

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn run_in(dir: &Path, args: &[&str], stdin: &str) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_paritylab"))
        .args(args)
        .current_dir(dir)
        .env_remove("PARITYLAB_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().unwrap(),
    }
}

fn run(args: &[&str], stdin: &str) -> Run {
    run_in(&std::env::temp_dir(), args, stdin)
}

#[test]
fn petersen_perfect_matching() {
    let out = run(&["solve", "--a", "1", "--b", "1", "-"], PETERSEN);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("factor 5\n"), "{}", out.stdout);
}

#[test]
fn sharpness_pipeline_emits_hub_witness() {
    let graph = run(&["construct", "--r", "6", "--m", "2"], "");
    assert_eq!(graph.code, 0);
    assert!(graph.stdout.ends_with("# hubs: 42 43\n"));
    let out = run(&["solve", "--a", "1", "--b", "1", "-"], &graph.stdout);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("delta: -4\n"), "{}", out.stdout);

    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.txt"), &graph.stdout).unwrap();
    std::fs::write(dir.path().join("w.txt"), &out.stdout).unwrap();
    let check = run_in(dir.path(), &["verify-witness", "g.txt", "w.txt", "--a", "1", "--b", "1"], "");
    assert_eq!((check.code, check.stdout.as_str()), (0, "valid\n"));

    std::fs::write(dir.path().join("bad.txt"), out.stdout.replace("delta: -4", "delta: -2")).unwrap();
    let check = run_in(dir.path(), &["verify-witness", "g.txt", "bad.txt", "--a", "1", "--b", "1"], "");
    assert_eq!(check.code, 1);
    assert!(check.stdout.starts_with("invalid: delta mismatch"), "{}", check.stdout);
}

#[test]
fn hub_deficiency() {
    let graph = run(&["construct", "--r", "6", "--m", "2"], "").stdout;
    let out = run(&["deficiency", "--a", "1", "--b", "1", "--s", "42,43", "-"], &graph);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("S: 42 43\nT:\ndelta: -4\ntau: 6\n"), "{}", out.stdout);
    assert_eq!(out.stdout.matches("# odd component:").count(), 6);
}

#[test]
fn condition_report() {
    let out = run(&["check-conditions", "--r", "4", "--m", "4", "--a", "1", "--b", "3", "--n-even"], "");
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("Main-i: satisfied\n"), "{}", out.stdout);
    let out = run(&["check-conditions", "--r", "4", "--m", "4", "--a", "3", "--b", "1"], "");
    assert_eq!(out.code, 2);
}

#[test]
fn factors_chain_into_verify() {
    let dir = tempfile::tempdir().unwrap();
    let graph = run(&["gen-random", "--n", "16", "--r", "5", "--seed", "3"], "").stdout;
    std::fs::write(dir.path().join("g.txt"), &graph).unwrap();
    let out = run_in(dir.path(), &["solve", "--a", "1", "--b", "3", "g.txt"], "");
    assert_eq!(out.code, 0);
    std::fs::write(dir.path().join("f.txt"), &out.stdout).unwrap();
    let check = run_in(dir.path(), &["verify-factor", "g.txt", "f.txt", "--a", "1", "--b", "3"], "");
    assert_eq!((check.code, check.stdout.as_str()), (0, "valid\n"));
    let check = run_in(dir.path(), &["verify-factor", "g.txt", "f.txt", "--a", "3", "--b", "3"], "");
    assert_eq!(check.code, 1);
    assert!(check.stdout.starts_with("invalid: "));
}

#[test]
fn every_infeasible_exit_carries_a_valid_witness() {
    let dir = tempfile::tempdir().unwrap();
    let mut infeasible = 0;
    for seed in 0..12 {
        let n = 8 + seed % 5;
        let r = if n % 2 == 0 { 3 } else { 4 };
        let graph = run(&["gen-random", "--n", &n.to_string(), "--r", &r.to_string(), "--seed", &seed.to_string()], "");
        std::fs::write(dir.path().join("g.txt"), &graph.stdout).unwrap();
        for (a, b) in [(1, 1), (2, 2), (3, 3), (4, 4)] {
            let (a, b) = (a.to_string(), b.to_string());
            let out = run_in(dir.path(), &["solve", "--a", &a, "--b", &b, "g.txt"], "");
            if out.code == 0 {
                continue;
            }
            assert_eq!(out.code, 1, "{}", out.stderr);
            infeasible += 1;
            std::fs::write(dir.path().join("w.txt"), &out.stdout).unwrap();
            let check = run_in(dir.path(), &["verify-witness", "g.txt", "w.txt", "--a", &a, "--b", &b], "");
            assert_eq!(check.stdout, "valid\n");
        }
    }
    assert!(infeasible > 0);
}

#[test]
fn exhaustive_deciders() {
    let k3 = "3 3\n0 1\n1 2\n0 2\n";
    let out = run(&["decide", "--a", "1", "--b", "1", "-"], k3);
    assert_eq!((out.code, out.stdout.as_str()), (1, "S:\nT:\ndelta: -1\ntau: 1\n"));
    let out = run(&["decide", "--method", "brute", "--a", "2", "--b", "2", "-"], k3);
    assert_eq!((out.code, out.stdout.as_str()), (0, "feasible\n"));
    let out = run(&["decide", "--a", "1", "--b", "1", "-"], PETERSEN);
    assert_eq!((out.code, out.stdout.as_str()), (0, "feasible\n"));
}

#[test]
fn caps_exit_with_three() {
    let graph = run(&["construct", "--r", "6", "--m", "2"], "").stdout;
    let out = run(&["decide", "--a", "1", "--b", "1", "-"], &graph);
    assert_eq!(out.code, 3, "{}", out.stderr);
    assert!(out.stderr.contains("--enum-cap"));
    let out = run(&["decide", "--method", "brute", "--a", "1", "--b", "1", "-"], &graph);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("--edge-cap"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["solve", "-"], PETERSEN).code, 2);
    assert_eq!(run(&["solve", "--a", "1", "--b", "2", "-"], PETERSEN).code, 2);
    assert_eq!(run(&["solve", "--a", "1", "--b", "1", "-"], "3 1\n0 0\n").code, 2);
    assert_eq!(run(&["construct", "--r", "5", "--m", "2"], "").code, 2);
    assert_eq!(run(&["no-such-command"], "").code, 2);
    let out = run(&["connectivity", "-"], "3 2\n0 1\n1 7\n");
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 3"), "{}", out.stderr);
}

#[test]
fn connectivity_and_dot() {
    let out = run(&["connectivity", "-"], PETERSEN);
    assert_eq!(out.stdout, "lambda: 3\ncut: 0\n");
    let out = run(&["connectivity", "--dot", "-"], PETERSEN);
    assert!(out.stdout.starts_with("graph G {\n"));
    assert_eq!(out.stdout.matches("color=red").count(), 3);
    let out = run(&["solve", "--a", "1", "--b", "1", "--dot", "-"], PETERSEN);
    assert_eq!(out.stdout.matches("penwidth=3").count(), 5);
}

#[test]
fn seed_from_environment() {
    let flag = run(&["gen-random", "--n", "12", "--r", "3", "--seed", "17"], "").stdout;
    let out = Command::new(env!("CARGO_BIN_EXE_paritylab"))
        .args(["gen-random", "--n", "12", "--r", "3"])
        .env("PARITYLAB_SEED", "17")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), flag);
}

#[test]
fn experiment_csv() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("c.conf"),
        "petersen = true\nspecs = 1:1\nextremal_r = 4, 6\nextremal_m = 2\nextremal_specs = 1:1\n",
    )
    .unwrap();
    let out = run_in(dir.path(), &["experiment", "c.conf", "--format", "csv"], "");
    assert_eq!(out.code, 0, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "seed,n,r,lambda,a,b,case,outcome,delta");
    assert_eq!(lines[1], "-,10,3,3,1,1,Main-iii+Gallai-iii+BSW-ii,found,");
    assert_eq!(lines[2], "-,22,4,2,1,1,-,infeasible,-2");
    assert_eq!(lines[3], "-,44,6,2,1,1,-,infeasible,-4");
}
