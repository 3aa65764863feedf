use std::process::{Command, Output};

fn codeloss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_codeloss"))
        .args(args)
        .env_remove("CODELOSS_SEED")
        .output()
        .unwrap()
}

#[test]
fn sweep_to_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("loss.csv");
    let args = [
        "sweep",
        "--code",
        "c3",
        "--encoder",
        "linear:systematic",
        "--value",
        "ber",
        "--p",
        "0.05:0.25:0.05",
    ];
    let stdout = codeloss(&args).stdout;
    let mut with_file = args.to_vec();
    with_file.extend(["-o", path.to_str().unwrap()]);
    let o = codeloss(&with_file);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
    let text = String::from_utf8(stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 5 * 2);
}

#[test]
fn seed_is_read_from_environment() {
    let args = ["sweep", "--method", "mc", "--trials", "2000", "--p", "0.2"];
    let explicit = codeloss(&[&args[..], &["--seed", "42"]].concat()).stdout;
    let env = Command::new(env!("CARGO_BIN_EXE_codeloss"))
        .args(args)
        .env("CODELOSS_SEED", "42")
        .output()
        .unwrap()
        .stdout;
    assert_eq!(explicit, env);
    assert_ne!(
        explicit,
        codeloss(&[&args[..], &["--seed", "43"]].concat()).stdout
    );
}

#[test]
fn exit_codes() {
    assert_eq!(
        codeloss(&["sweep", "--code", "hamming:1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        codeloss(&["sweep", "--p", "0.7:0.2:0.1"]).status.code(),
        Some(2)
    );
    assert_eq!(codeloss(&["frobnicate"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.pgm");
    let out = dir.path().join("out.pgm");
    let o = codeloss(&[
        "image",
        "--p",
        "0.1",
        "-i",
        missing.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!out.exists());
    let bad = dir.path().join("bad.pgm");
    std::fs::write(&bad, b"P5\n4 4\n255\nxx").unwrap();
    let o = codeloss(&[
        "image",
        "--p",
        "0.1",
        "-i",
        bad.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_suite_passes() {
    let o = codeloss(&["verify", "h-closed-form"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() > 0);
    assert!(!text.contains("FAIL"));
}

#[test]
fn image_stats_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.pgm");
    let mut pgm = b"P2\n4 2\n15\n".to_vec();
    pgm.extend(b"0 3 6 9\n12 15 1 2\n");
    std::fs::write(&input, pgm).unwrap();
    let (out, stats) = (dir.path().join("out.pgm"), dir.path().join("stats.txt"));
    let o = codeloss(&[
        "image",
        "--p",
        "0",
        "-i",
        input.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
        "--stats",
        stats.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let line = std::fs::read_to_string(stats).unwrap();
    assert!(line.starts_with("pixels=8 wrong=0 "), "{line}");
    let decoded = codeloss::image::read_pgm(&std::fs::read(out).unwrap()).unwrap();
    assert_eq!(decoded.pixels(), &[0, 3, 6, 9, 12, 15, 1, 2]);
}
