use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsubpi")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["congr", "x<y> | 0", "x<y>"]).status.code(), Some(0));
    assert_eq!(run(&["congr", "x<y>", "x<z>"]).status.code(), Some(1));
    assert_eq!(run(&["congr", "x<", "0"]).status.code(), Some(2));
    assert_eq!(run(&["suite", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn distance_step() {
    let o = run(&["pi-step", "@a<x,@b> | @a(y,@c). y<@c>"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "tensor: x<@b>");
}

#[test]
fn strict_orientation_breaks_the_name_game() {
    assert_eq!(run(&["bisim", "(\\x. x) y"]).status.code(), Some(0));
    let o = run(&["bisim", "(\\x. x) y", "--strict"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("\"side\": \"forward\""));
}

#[test]
fn suite_report_is_json() {
    let o = run(&["--json", "suite", "determinism", "--size", "5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["suite"], "determinism");
    assert_eq!(v["checked"], 40);
    assert_eq!(v["passed"], true);
}

#[test]
fn enumeration_count() {
    let o = run(&["enumerate", "--size", "6", "--count"]);
    assert_eq!(stdout(&o).trim(), "124");
    let o = run(&["enumerate", "--size", "6", "--mode", "vker", "--count"]);
    assert_eq!(stdout(&o).trim(), "121");
}

#[test]
fn out_file() {
    let path = std::env::temp_dir().join(format!("lsubpi-cli-{}.txt", std::process::id()));
    let o = run(&["--out", path.to_str().unwrap(), "trace-cbn", "(\\x. x) y"]);
    assert!(o.status.success());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(written.contains("db"), "{written}");
}
