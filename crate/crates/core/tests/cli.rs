use std::path::PathBuf;
use std::process::{Command, Output};

fn cdcroute(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdcroute"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn route_prints_path_and_weight() {
    for extra in [&[][..], &["--distributed"][..]] {
        let mut args = vec!["route", "examples/data/relay.net", "0", "4"];
        args.extend_from_slice(extra);
        let out = cdcroute(&args);
        assert_eq!(out.status.code(), Some(0));
        let text = stdout(&out);
        assert!(text.contains("path 0 -[1]-> 2 -[3]-> 4"), "{text}");
        assert!(text.contains("channels 1 3"));
        assert!(text.contains("weight 2"));
    }
}

#[test]
fn traces_written_by_both_modes_match() {
    let (a, b) = (tmp("central.trace"), tmp("dist.trace"));
    for (path, extra) in [(&a, None), (&b, Some("--distributed"))] {
        let mut args = vec!["route", "examples/data/relay.net", "0", "4", "--trace", path.to_str().unwrap()];
        args.extend(extra);
        assert_eq!(cdcroute(&args).status.code(), Some(0));
    }
    let central = std::fs::read_to_string(&a).unwrap();
    assert!(!central.is_empty());
    assert_eq!(central, std::fs::read_to_string(&b).unwrap());
}

#[test]
fn blocked_chain_exits_one() {
    let out = cdcroute(&["route", "examples/data/chain-blocked.net", "0", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no CDC path"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cdcroute(&["route"]).status.code(), Some(2));
    assert_eq!(cdcroute(&["route", "missing.net", "0", "1"]).status.code(), Some(2));
    assert_eq!(cdcroute(&["route", "examples/data/relay.net", "0", "9"]).status.code(), Some(2));
    assert_eq!(cdcroute(&["spanner", "examples/data/relay.net", "--k", "3"]).status.code(), Some(2));
    assert_eq!(cdcroute(&["gen", "--n", "10", "--channels", "2", "--per-node", "3"]).status.code(), Some(2));
}

#[test]
fn gen_spanner_and_verify() {
    let net = tmp("gen.net");
    let out = cdcroute(&[
        "gen", "--n", "30", "--mode", "fixed-range", "--range", "15", "--channels", "4",
        "--per-node", "2", "--seed", "3", "--out", net.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let net = net.to_str().unwrap();
    let out = cdcroute(&["spanner", net, "--k", "12", "--variant", "per-pair", "--verify", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("# variant per-pair"));
    assert!(text.contains("# t 4.2979"), "{text}");

    let small = tmp("small.net");
    let out = cdcroute(&[
        "gen", "--n", "7", "--mode", "fixed-range", "--range", "30", "--channels", "3",
        "--per-node", "2", "--seed", "1", "--out", small.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = cdcroute(&["verify", small.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("all solvers agree"));
}

#[test]
fn experiment_writes_identical_csv_twice() {
    let cfg = tmp("tiny.exp");
    let csv = tmp("tiny.csv");
    std::fs::write(
        &cfg,
        format!(
            "experiment 1\nn 15 30\nchannels 5\nper-node 2\ntrials 2\nseed 4\nside 30\nverify on\noutput {}\n",
            csv.display()
        ),
    )
    .unwrap();
    assert_eq!(cdcroute(&["experiment", cfg.to_str().unwrap()]).status.code(), Some(0));
    let first = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(cdcroute(&["experiment", cfg.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(first, std::fs::read_to_string(&csv).unwrap());
    assert!(first.starts_with("n,n_exp,C_total,channels_per_node,mode,messages_total"));
    assert_eq!(first.lines().count(), 1 + 4 + 2);
}
