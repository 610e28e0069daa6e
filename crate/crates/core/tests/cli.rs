use std::path::PathBuf;
use std::process::{Command, Output};

fn rmts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rmts")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rmts-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const SMALL_RUN: [&str; 10] = [
    "--m", "5", "--r", "2", "--ebn0-list", "1,3", "--frames", "300", "--decoder", "SC,TS-DFS-O,TS-BFS",
];

#[test]
fn bad_configuration_exits_nonzero() {
    for args in [
        &["--m", "3", "--r", "4", "--ebn0-list", "1"][..],
        &["--m", "8", "--r", "4", "--ebn0-list", "1", "--decoder", "ORACLE"],
        &["--m", "4", "--r", "2", "--ebn0-list", "1", "--omega", "99"],
        &["--m", "4", "--r", "2", "--ebn0-list", "1", "--omega", "lots"],
        &["--m", "4", "--r", "2"],
        &["--m", "4", "--r", "2", "--ebn0-list", "1", "--decoder", "VITERBI"],
    ] {
        let out = rmts(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn writes_csv_with_header_and_one_row_per_point() {
    let path = scratch("sweep.csv");
    let mut args = SMALL_RUN.to_vec();
    args.extend(["--out", path.to_str().unwrap()]);
    let out = rmts(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("schema,m,r,n,k,decoder,omega"));
    assert!(!lines[0].contains("wall_seconds"));
    assert_eq!(lines.len(), 1 + 3 * 2);
    assert!(lines[1..].iter().all(|l| l.starts_with("1,5,2,32,16,")));
}

#[test]
fn output_is_independent_of_worker_count() {
    let run = |workers: &str| {
        let mut args = SMALL_RUN.to_vec();
        args.extend(["--workers", workers]);
        let out = rmts(&args);
        assert!(out.status.success());
        out.stdout
    };
    let one = run("1");
    assert_eq!(one, run("3"));
    assert_eq!(one, run("1"));
}

#[test]
fn timing_and_trace_are_opt_in() {
    let trace = scratch("trace.txt");
    let out = rmts(&[
        "--m", "3", "--r", "1", "--ebn0-list", "2", "--frames", "5", "--timing",
        "--trace", trace.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.lines().next().unwrap().ends_with("wall_seconds"));
    let lines = std::fs::read_to_string(&trace).unwrap();
    assert!(lines.lines().count() >= 5);
    assert!(lines.lines().all(|l| l.starts_with("decoder=TS-BFS ebn0_db=2 frame=")));
    assert!(lines.contains("E={} pm_tmp=-"));
}
