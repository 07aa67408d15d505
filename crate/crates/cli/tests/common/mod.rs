use std::path::PathBuf;
use std::process::Command;

pub fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// `(golden name, arguments, expected exit code)`.
pub fn runs() -> Vec<(&'static str, Vec<&'static str>, i32)> {
    vec![
        ("root_system_a1", vec!["root-system", "--alg", "A1"], 0),
        ("root_system_a2", vec!["root-system", "--alg", "A2"], 0),
        (
            "bracket",
            vec![
                "bracket",
                "--alg",
                "A1",
                "--k",
                "2",
                "--a",
                "@tests/data/bracket_a.json",
                "--b",
                "@tests/data/bracket_b.json",
            ],
            0,
        ),
        (
            "check_commutator_element",
            vec![
                "check-commutator",
                "--element",
                "@tests/data/element.json",
                "--alg",
                "A1",
                "--k",
                "2",
            ],
            0,
        ),
        (
            "check_commutator_random",
            vec![
                "check-commutator",
                "--random",
                "6",
                "--alg",
                "A2",
                "--k",
                "3",
                "--seed",
                "7",
            ],
            0,
        ),
        (
            "check_commutator_corpus",
            vec![
                "check-commutator",
                "--corpus",
                "../core/tests/data/commutator_corpus.json",
            ],
            0,
        ),
        (
            "build_module",
            vec![
                "build-module",
                "--alg",
                "A1",
                "--k",
                "2",
                "--p",
                "2",
                "--lambda",
                "2",
            ],
            0,
        ),
        (
            "commutant",
            vec![
                "commutant",
                "--alg",
                "A1",
                "--k",
                "2",
                "--p",
                "3",
                "--lambda",
                "1",
            ],
            0,
        ),
        (
            "commutant_doubled",
            vec![
                "commutant",
                "--alg",
                "A1",
                "--k",
                "2",
                "--p",
                "2",
                "--lambda",
                "0",
                "--doubled",
            ],
            0,
        ),
        (
            "distinguish",
            vec![
                "distinguish",
                "--alg",
                "A1",
                "--p",
                "2",
                "--lambda",
                "0",
                "--mu",
                "0",
                "--mu",
                "1",
                "--mu",
                "2",
            ],
            0,
        ),
        (
            "distinguish_search",
            vec![
                "distinguish",
                "--alg",
                "A1",
                "--p",
                "2",
                "--lambda",
                "0",
                "--mu",
                "0",
                "--grid",
                "1",
                "--search",
                "1",
            ],
            1,
        ),
        (
            "sugawara_verify",
            vec![
                "sugawara-verify",
                "--alg",
                "A1",
                "--k",
                "2",
                "--p",
                "2",
                "--lambda",
                "1",
                "--depth",
                "1",
                "--lateral",
                "1",
                "--vdepth",
                "1",
                "--sample",
                "1",
            ],
            0,
        ),
        (
            "ek_identity",
            vec!["ek", "--alg", "A2", "--p", "3", "--lambda", "5,2"],
            0,
        ),
        (
            "ek_banded",
            vec![
                "ek",
                "--alg",
                "A1",
                "--p",
                "2",
                "--lambda",
                "6",
                "--pmatrix",
                "tests/data/pmatrix_a1_p2.json",
            ],
            0,
        ),
    ]
}

pub fn run(args: &[&str]) -> (i32, Vec<u8>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_loopalg"))
        .args(args)
        .current_dir(dir())
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        out.stdout,
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

pub fn golden_path(name: &str) -> PathBuf {
    dir().join("tests/golden").join(format!("{name}.json"))
}

/// Runs every golden command twice and compares bytes.
pub fn determinism_pairs() -> usize {
    let mut n = 0;
    for (name, args, _) in runs() {
        let (_, a, _) = run(&args);
        let (_, b, _) = run(&args);
        assert!(a == b, "{name} is not deterministic");
        n += 1;
    }
    n
}
