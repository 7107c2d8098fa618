use std::path::Path;
use std::process::{Command, Output};

fn qlattice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlattice"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(text: &str, idx: usize) -> Vec<f64> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn euler_zeros_are_powers_of_two() {
    let o = qlattice(&[
        "zeros", "--family", "euler", "--q", "0.25", "--count", "3", "--format", "csv",
    ]);
    assert!(o.status.success());
    let z = column(&stdout(&o), 1);
    assert_eq!(z.len(), 3);
    for (v, e) in z.iter().zip([1.0, 2.0, 4.0]) {
        assert!((v - e).abs() < 1e-10 * e);
    }
}

#[test]
fn transform_of_zero_function_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("zero.csv");
    std::fs::write(&input, "k,q^k,value\n1,5e-1,0\n0,1,0\n-1,2,0\n").unwrap();
    let o = qlattice(&[
        "transform",
        "--input",
        input.to_str().unwrap(),
        "--window",
        "-4",
        "4",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let values = column(&stdout(&o), 2);
    assert_eq!(values.len(), 9);
    assert!(values.iter().all(|&v| v == 0.0));
}

#[test]
fn sonine_sweep_is_satisfied_everywhere() {
    let o = qlattice(&[
        "uncertainty",
        "--builtin",
        "sonine",
        "--nu",
        "0.5",
        "--alpha",
        "1.5",
        "--q",
        "0.5",
        "--sweep",
        "-5",
        "5",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let sat = header.iter().position(|&h| h == "satisfied").unwrap();
    let vac = header.iter().position(|&h| h == "vacuous").unwrap();
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 121);
    assert!(rows
        .iter()
        .filter(|r| r[vac] == "false")
        .all(|r| r[sat] == "true"));
}

fn write_out(args: &[&str], out: &Path) {
    let mut a: Vec<&str> = args.to_vec();
    a.extend(["--out", out.to_str().unwrap()]);
    let o = qlattice(&a);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let args = ["transform", "--builtin", "sonine", "--alpha", "1.5"];
    write_out(&args, &a);
    write_out(&args, &b);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn transform_output_feeds_recover() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.csv");
    let g = dir.path().join("g.csv");
    write_out(
        &[
            "transform",
            "--builtin",
            "sonine",
            "--alpha",
            "1.5",
            "--window",
            "-15",
            "80",
        ],
        &f,
    );
    write_out(
        &[
            "transform",
            "--input",
            f.to_str().unwrap(),
            "--window",
            "-15",
            "80",
        ],
        &g,
    );
    let o = qlattice(&[
        "recover",
        "--input",
        g.to_str().unwrap(),
        "--erased",
        "0,-1",
        "--format",
        "json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["max_error"].as_f64().unwrap() < 1e-5);
}

#[test]
fn exit_codes() {
    let o = qlattice(&["zeros", "--family", "euler", "--q", "1.5", "--count", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 1);
    let o = qlattice(&[
        "zeros",
        "--family",
        "euler",
        "--count",
        "40",
        "--max-terms",
        "16",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = qlattice(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
}
