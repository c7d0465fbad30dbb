use std::fs;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_avoid-lab");

const DUP: &str = "circuit dup\ninputs 1\noutputs 2\nout 1 = x1\nout 2 = x1\nend\n";

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn avoid_on_duplicator_never_returns_an_image_string() {
    let dir = tempfile::tempdir().unwrap();
    let dup = write(&dir, "dup.circ", DUP);
    for seed in ["7", "8", "9", "10"] {
        let (code, out, _) = run(&["avoid", "--circuit", &dup, "--epsilon-prime", "0.1", "--inverter", "perfect", "--seed", seed]);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        let head = lines.next().unwrap();
        assert!(head == "FOUND 01" || head == "FOUND 10" || head == "BOTTOM", "{head}");
        for (i, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(' ').collect();
            assert_eq!(fields[0], "ITER");
            assert_eq!(fields[1], (i + 1).to_string());
            assert_eq!(fields[2].len(), 2);
            assert!(fields[3] == "INVERTED" || fields[3] == "FAILED");
        }
    }
    let a = run(&["avoid", "--circuit", &dup, "--epsilon-prime", "1/10", "--inverter", "bounded:1", "--seed", "3", "--t", "5"]);
    let b = run(&["avoid", "--circuit", &dup, "--epsilon-prime", "0.1", "--inverter", "bounded:1", "--seed", "3", "--t", "5"]);
    assert_eq!(a, b);
}

#[test]
fn gen_then_eval_and_tt() {
    let (code, text, _) = run(&["gen", "--inputs", "3", "--outputs", "4", "--gates", "5", "--seed", "11"]);
    assert_eq!(code, 0);
    assert_eq!(run(&["gen", "--inputs", "3", "--outputs", "4", "--gates", "5", "--seed", "11"]).1, text);
    assert!(text.starts_with("circuit rand_n3_m4_g5_"));
    assert!(text.ends_with("end\n"));

    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "c.circ", &text);
    let c = avoid_lab::circuit::parse(&text).unwrap();
    let (code, out, _) = run(&["eval", "--circuit", &path, "--input", "101"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), c.eval(&"101".parse().unwrap()).unwrap().to_string());

    let (_, tt, _) = run(&["tt", "--circuit", &path]);
    assert_eq!(tt.lines().count(), 4);
    for (j, line) in tt.lines().enumerate() {
        assert_eq!(line, format!("{} {}", j + 1, c.truth_table(j + 1).unwrap()));
    }
    let (_, one, _) = run(&["tt", "--circuit", &path, "--output", "2"]);
    assert_eq!(one.trim(), c.truth_table(2).unwrap().to_string());

    assert_eq!(run(&["eval", "--circuit", &path, "--input", "10"]).0, 1);
    assert_eq!(run(&["tt", "--circuit", &path, "--output", "5"]).0, 1);
}

#[test]
fn mcsp_commands() {
    assert_eq!(run(&["mcsp-min", "--tt", "0001"]).1, "1\n");
    assert_eq!(run(&["mcsp-min", "--tt", "0110", "--basis", "aonx"]).1, "1\n");
    assert_eq!(run(&["mcsp", "--tt", "0001", "--size", "0"]).1, "NO\n");

    let dir = tempfile::tempdir().unwrap();
    let oracle = write(&dir, "par.txt", "oraclefun 3 01101001\n");
    assert_eq!(run(&["mcsp-min", "--tt", "01101001", "--oracles", &oracle]).1, "1\n");

    let (code, _, err) = run(&["mcsp-min", "--tt", "0101", "--basis", "nand"]);
    assert_eq!(code, 1);
    assert!(err.contains("nand"));
    let (code, _, err) = run(&["mcsp-min", "--tt", &"0110".repeat(8)]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn invert_command() {
    let dir = tempfile::tempdir().unwrap();
    let dup = write(&dir, "dup.circ", DUP);
    assert_eq!(run(&["invert", "--circuit", &dup, "--y", "11", "--inverter", "perfect", "--seed", "1"]).1, "INVERTED 1\nPROBES 2\n");
    assert_eq!(run(&["invert", "--circuit", &dup, "--y", "01", "--inverter", "lex:2", "--seed", "1"]).1, "FAILED\nPROBES 2\n");
    let (code, _, err) = run(&["invert", "--circuit", &dup, "--y", "01", "--inverter", "magic:3", "--seed", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("magic"));
}

#[test]
fn usage_errors_and_meta_flags() {
    let (code, out, _) = run(&["--version"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("avoid-lab "));
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["gen", "eval", "tt", "mcsp", "mcsp-min", "invert", "avoid", "verify", "corpus"] {
        assert!(out.contains(sub), "{sub} missing from help");
    }
    let (code, _, err) = run(&["avoid", "--circuit", "x.circ", "--epsilon-prime", "0.1", "--inverter", "perfect"]);
    assert_eq!(code, 1);
    assert!(err.contains("--seed"));
    let (code, _, err) = run(&["gen", "--inputs", "2", "--outputs", "3", "--gates", "1", "--seed", "1", "--colour", "red"]);
    assert_eq!(code, 1);
    assert!(err.contains("--colour"));
    let (code, _, err) = run(&["eval", "--circuit", "/nonexistent/c.circ", "--input", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("cannot read"));
}

#[test]
fn domain_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let square = write(&dir, "sq.circ", "circuit sq\ninputs 1\noutputs 1\nout 1 = x1\nend\n");
    let (code, _, err) = run(&["avoid", "--circuit", &square, "--epsilon-prime", "0.1", "--inverter", "perfect", "--seed", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("not an Avoid instance"));
    let bad = write(&dir, "bad.circ", "circuit b\ninputs 1\noutputs 1\nout 1 = g4\nend\n");
    let (code, _, err) = run(&["eval", "--circuit", &bad, "--input", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("line 4"), "{err}");
    let dup = write(&dir, "dup.circ", DUP);
    let (code, _, err) = run(&["avoid", "--circuit", &dup, "--epsilon-prime", "1.5", "--inverter", "perfect", "--seed", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("probability"), "{err}");
    let (code, _, err) = run(&["avoid", "--circuit", &dup, "--epsilon-prime", "0.1", "--inverter", "perfect", "--seed", "1", "--mode", "lemma"]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown mode"), "{err}");
}

#[test]
fn verify_writes_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(&dir, "small.cfg", "corpus_per_cell = 3\ncorpus_gates = 2, 5\n");
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let (code, out, err) = run(&["verify", "lemma-ratio", "--config", &cfg, "--csv", path.to_str().unwrap(), "--seed", "4"]);
        assert_eq!(code, 0, "{err}");
        assert_eq!(out, "lemma-ratio rows=36 holds=36 all_hold=true\n");
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().next().unwrap(), avoid_lab::lab::CSV_HEADER);
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(13) == Some("true")));

    let (code, _, err) = run(&["verify", "lemmas", "--csv", a.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown experiment"));
    let broken = write(&dir, "broken.cfg", "colour = red\n");
    let (code, _, err) = run(&["verify", "lemma-ratio", "--config", &broken, "--csv", a.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown key"));
}

#[test]
fn shipped_config_parses() {
    let text = include_str!("../configs/default.cfg");
    assert_eq!(avoid_lab::lab::LabConfig::parse(text).unwrap().corpus_size(), 150);
}

#[test]
fn corpus_command() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(&dir, "c.cfg", "corpus_per_cell = 2\n");
    let out_dir = dir.path().join("corpus");
    let (code, out, _) = run(&["corpus", "--config", &cfg, "--out-dir", out_dir.to_str().unwrap()]);
    assert_eq!(code, 0);
    let paths: Vec<&str> = out.lines().collect();
    assert_eq!(paths.len(), 12);
    for p in paths {
        let c = avoid_lab::circuit::parse(&fs::read_to_string(p).unwrap()).unwrap();
        assert_eq!(c.m(), c.n() + 1);
    }
    let (_, listing, _) = run(&["corpus", "--config", &cfg]);
    assert_eq!(listing.matches("\nend\n").count(), 12);
}
