use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pesto_lab::keyfile::{public_key_from_json, public_key_to_json};
use pesto_lab::scheme::public_eval;
use pesto_lab::{PestoParams, Polynomial, PublicKey};

const BIN: &str = env!("CARGO_BIN_EXE_pesto-lab");

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN).args(args).current_dir(dir).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn keygen_writes_a_quartic_key_pair() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["keygen", "-n", "6", "-m", "5", "-t", "2", "-s", "1", "-q", "3", "--seed", "42", "--out", "k"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let pk = public_key_from_json(&fs::read_to_string(dir.path().join("k.pub")).unwrap()).unwrap();
    assert_eq!(pk.polynomials().len(), 5);
    assert!(pk.polynomials().iter().all(|p| p.degree() == Some(4)));
    assert!(dir.path().join("k.sk").exists());
}

#[test]
fn keygen_names_the_violated_constraint() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["keygen", "-n", "6", "-m", "5", "-t", "7", "-s", "1", "--out", "k"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("t ≤ min(n,m)"), "{}", stderr(&o));
    assert!(!dir.path().join("k.pub").exists());
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(dir.path(), &["transmogrify"])), 1);
    assert_eq!(code(&run(dir.path(), &["attack", "--pk", "x.pub", "--out", "r"])), 1);
    assert_eq!(code(&run(dir.path(), &["eval", "--pk", "missing.pub", "--input", "0"])), 1);
    assert_eq!(code(&run(dir.path(), &["--help"])), 0);
}

#[test]
fn toy_pipeline_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(d, &["keygen", "--fixture", "toy", "--out", "toy"])), 0);
    let e = run(d, &["eval", "--pk", "toy.pub", "--input", "2,0,1,2,2,0"]);
    assert_eq!(stdout(&e).trim(), "1,2,2,1,2");

    let h = run(d, &["attack", "--method", "hole", "--pk", "toy.pub", "--target", "1,2,2,1,2", "--out", "h.sys"]);
    assert_eq!(code(&h), 0, "{}", stderr(&h));
    assert!(stdout(&h).contains("relation_dim=5\n"));
    fs::write(d.join("target.txt"), "1,2,2,1,2\n").unwrap();
    let g = run(
        d,
        &["attack", "--method", "groebner", "--pk", "toy.pub", "--target", "0,0,0,0,0", "--target-file", "target.txt", "--out", "g.sys"],
    );
    assert_eq!(code(&g), 0, "{}", stderr(&g));
    assert!(stdout(&g).contains("passes="));

    for sys in ["h.sys", "g.sys"] {
        let v = run(d, &["verify", "--pk", "toy.pub", "--target", "1,2,2,1,2", "--system", sys]);
        assert_eq!(code(&v), 0, "{}", stdout(&v));
        assert!(stdout(&v).contains("degree=PASS\nexhaustive=PASS\n"));
        assert!(stdout(&v).ends_with("verdict=PASS\n"));
    }

    let inv = run(d, &["invert", "--sk", "toy.sk", "--target", "1,2,2,1,2", "--seed", "3"]);
    assert_eq!(code(&inv), 0);
    let z = stdout(&inv);
    let back = run(d, &["eval", "--pk", "toy.pub", "--input", z.trim()]);
    assert_eq!(stdout(&back).trim(), "1,2,2,1,2");
}

#[test]
fn verify_reports_a_corrupted_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(d, &["keygen", "--fixture", "toy", "--out", "toy"]);
    run(d, &["attack", "--pk", "toy.pub", "--target", "1,2,2,1,2", "--out", "h.sys"]);
    let text = fs::read_to_string(d.join("h.sys")).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    // leading coefficient 1 -> 2 on the first polynomial
    lines[1] = format!("2*{}", lines[1]);
    fs::write(d.join("bad.sys"), lines.join("\n")).unwrap();
    let v = run(d, &["verify", "--pk", "toy.pub", "--target", "1,2,2,1,2", "--system", "bad.sys"]);
    assert_eq!(code(&v), 2);
    let out = stdout(&v);
    assert!(out.contains("exhaustive=FAIL\nfirst_difference="), "{out}");
    assert!(out.ends_with("verdict=FAIL\n"));
}

#[test]
fn verify_skips_exhaustive_check_beyond_the_guard() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = run(d, &["keygen", "-n", "20", "-m", "3", "-t", "1", "-s", "1", "--seed", "1", "--out", "big"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let z = vec!["1"; 20].join(",");
    let target = stdout(&run(d, &["eval", "--pk", "big.pub", "--input", &z]));
    let a = run(d, &["attack", "--pk", "big.pub", "--target", target.trim(), "--out", "big.sys"]);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    let v = run(d, &["verify", "--pk", "big.pub", "--target", target.trim(), "--system", "big.sys"]);
    assert_eq!(code(&v), 0);
    let out = stdout(&v);
    assert!(out.contains("degree=PASS\nexhaustive=SKIPPED\n"), "{out}");
    assert!(out.ends_with("verdict=PASS\n"));
}

#[test]
fn unstructured_quartics_are_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let params = PestoParams::toy();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let system: Vec<Polynomial> = (0..5).map(|_| Polynomial::random(params.field(), 6, 4, &mut rng)).collect();
    let pk = PublicKey::from_system(params, system).unwrap();
    fs::write(d.join("rand.pub"), public_key_to_json(&pk)).unwrap();
    let target = public_eval(&pk, &[0, 1, 2, 0, 1, 2]).unwrap();
    let target: Vec<String> = target.iter().map(u32::to_string).collect();
    for method in ["hole", "groebner"] {
        let o = run(d, &["attack", "--method", method, "--pk", "rand.pub", "--target", &target.join(","), "--out", "r.sys"]);
        assert_eq!(code(&o), 2, "{method}: {}", stdout(&o));
        assert!(stdout(&o).contains("status=structural_failure"));
        assert!(stderr(&o).contains("structural failure"));
    }
}

#[test]
fn invert_without_preimage_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(d, &["keygen", "-n", "3", "-m", "5", "-t", "2", "-s", "1", "--seed", "8", "--out", "wide"]);
    let pk = public_key_from_json(&fs::read_to_string(d.join("wide.pub")).unwrap()).unwrap();
    let image: std::collections::HashSet<Vec<u32>> = (0..27u32)
        .map(|i| public_eval(&pk, &[i / 9, (i / 3) % 3, i % 3]).unwrap())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let w = loop {
        let w: Vec<u32> = (0..5).map(|_| rng.gen_range(0..3)).collect();
        if !image.contains(&w) {
            break w;
        }
    };
    let w: Vec<String> = w.iter().map(u32::to_string).collect();
    let o = run(d, &["invert", "--sk", "wide.sk", "--target", &w.join(",")]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("no preimage"));
}

#[test]
fn bench_csv_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let empty = run(d, &["bench"]);
    assert_eq!(stdout(&empty), "n,m,method,wall_ms,matrix_rows,matrix_cols,relation_dim\n");

    let h = stdout(&run(d, &["bench", "--sweep", "6:5,9:7,12:9", "--method", "hole"]));
    let cols: Vec<usize> = h.lines().skip(1).map(|l| l.split(',').nth(5).unwrap().parse().unwrap()).collect();
    // C(n+m+2, 2)
    assert_eq!(cols, vec![78, 153, 253]);

    let o = run(d, &["bench", "--sweep", "6:5,9:7", "--method", "groebner", "--out", "g.csv"]);
    assert_eq!(code(&o), 0);
    let g = fs::read_to_string(d.join("g.csv")).unwrap();
    let cols: Vec<&str> = g.lines().skip(1).map(|l| l.split(',').nth(5).unwrap()).collect();
    // C(n+4, 4)
    assert_eq!(cols, vec!["210", "715"]);

    assert_eq!(code(&run(d, &["bench", "--sweep", "6"])), 1);
}
