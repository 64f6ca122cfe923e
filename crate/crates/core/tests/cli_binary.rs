use std::process::Command;

use serde_json::Value;

fn ait(args: &[&str], env: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ait"));
    cmd.args(args).env_remove("AIT_SEED").env_remove("AIT_CACHE_DIR");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn first(s: &str) -> Value {
    serde_json::from_str(s.lines().next().unwrap()).unwrap()
}

#[test]
fn exit_codes() {
    let (code, out, _) = ait(&["kc", "exact", "--x", "0", "--max-len", "8", "--max-steps", "64"], &[]);
    assert_eq!(code, 0);
    assert_eq!(first(&out)["value"], 7);
    let (code, out, _) = ait(&["kraft", "alloc", "--requests", "1,1,1"], &[]);
    assert_eq!(code, 1);
    assert_eq!(first(&out)["error"], "overflow");
    let (code, _, err) = ait(&["vm", "run", "--mode", "sideways", "--desc", "1111", "--max-steps", "1"], &[]);
    assert_eq!(code, 2);
    assert!(err.contains("plain"), "{err}");
}

#[test]
fn seed_from_environment() {
    let args = ["exp", "rank", "--n", "16", "--trials", "5"];
    let (_, by_env, _) = ait(&args, &[("AIT_SEED", "9")]);
    let (_, by_flag, _) = ait(&[&args[..], &["--seed", "9"]].concat(), &[]);
    let (_, default, _) = ait(&args, &[]);
    assert_eq!(first(&by_env)["seed"], 9);
    assert_eq!(by_env, by_flag);
    assert_eq!(first(&default)["seed"], 1);
    let (_, flag_wins, _) = ait(&[&args[..], &["--seed", "3"]].concat(), &[("AIT_SEED", "9")]);
    assert_eq!(first(&flag_wins)["seed"], 3);
    assert_eq!(ait(&args, &[("AIT_SEED", "many")]).0, 2);
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["vm", "enumerate", "--mode", "prefix", "--max-len", "10", "--max-steps", "32"];
    let (c0, plain, _) = ait(&args, &[]);
    let (c1, cold, _) = ait(&args, &[("AIT_CACHE_DIR", d)]);
    let (c2, warm, _) = ait(&args, &[("AIT_CACHE_DIR", d)]);
    assert_eq!((c0, c1, c2), (0, 0, 0));
    assert_eq!(plain, cold);
    assert_eq!(cold, warm);
    assert_eq!(std::fs::read_dir(d).unwrap().count(), 1);
    assert!(plain.lines().count() > 2);
}

#[test]
fn concurrent_writers_leave_a_valid_entry() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap().to_string();
    let args = ["--cache-dir", &d, "vm", "enumerate", "--mode", "plain", "--max-len", "12", "--max-steps", "64"];
    let outs: Vec<(i32, String, String)> = std::thread::scope(|s| {
        let hs: Vec<_> = (0..4).map(|_| s.spawn(|| ait(&args, &[]))).collect();
        hs.into_iter().map(|h| h.join().unwrap()).collect()
    });
    assert!(outs.iter().all(|o| o.0 == 0 && o.1 == outs[0].1));
    let (_, again, err) = ait(&args, &[]);
    assert_eq!(again, outs[0].1);
    assert!(!err.contains("unusable"), "{err}");
    let leftovers: Vec<_> = std::fs::read_dir(&d).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(leftovers.len(), 1, "{leftovers:?}");
}

#[test]
fn text_output() {
    let (code, out, _) = ait(&["--format", "text", "vm", "run", "--mode", "plain", "--desc", "1111", "--max-steps", "10"], &[]);
    assert_eq!(code, 0);
    assert!(out.contains("outcome = halted"), "{out}");
    assert!(!out.contains("config"));
}
