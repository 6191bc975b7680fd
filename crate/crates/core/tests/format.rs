//! Text format: round trips over the corpus, golden result files, and CLI exit codes.

mod common;

use std::fs;
use std::path::PathBuf;

use quasiproper::cli::{run, EXIT_ERROR, EXIT_FAIL, EXIT_PASS};
use quasiproper::game_format::{parse, read_result, serialize, FormatError, GameDocument};

fn game_path(name: &str) -> String {
    common::games_dir().join(format!("{name}.qpef")).display().to_string()
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn qpe(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qpe").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn corpus() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = fs::read_dir(common::games_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "qpef"))
        .collect();
    files.sort();
    files
}

#[test]
fn corpus_round_trips_through_canonical_form() {
    let files = corpus();
    assert!(files.len() >= 12);
    for path in files {
        let text = fs::read_to_string(&path).unwrap();
        let doc = parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let canon = serialize(&doc);
        let again = parse(&canon).unwrap();
        assert_eq!(again.game, doc.game, "{}", path.display());
        assert_eq!(again.names, doc.names);
        // canonical form is a fixed point
        assert_eq!(serialize(&again), canon, "{}", path.display());
    }
}

#[test]
fn random_games_round_trip() {
    use quasiproper::random_games::{random_game, GameShape};
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for shape in [GameShape::two_player_small(), GameShape::zero_sum_small(), GameShape::two_player_small().players(3)] {
        for _ in 0..30 {
            let game = random_game(&mut rng, &shape);
            let text = serialize(&GameDocument::new(game.clone()));
            assert_eq!(parse(&text).unwrap().game, game, "{text}");
        }
    }
}

#[test]
fn errors_point_at_the_offending_token() {
    let cases = [
        ("(game :players 2 (leaf (1 0.5)))", 1, 27),
        ("(game :players 1\n  (decision :player 2 :infoset H :actions (a)\n    (a (leaf (1)))))", 2, 3),
        ("(game :players 1 (leaf (1 2)))", 1, 18),
    ];
    for (text, line, col) in cases {
        let err = parse(text).unwrap_err();
        let (l, c) = match &err {
            FormatError::Syntax { line, col, .. } | FormatError::Invalid { line, col, .. } => (*line, *col),
            FormatError::Profile { line, col, .. } => (*line, *col),
        };
        assert_eq!((l, c), (line, col), "{text}: {err}");
    }
}

fn check_golden(name: &str, args: &[&str]) {
    let (code, out, err) = qpe(args);
    assert_eq!(code, EXIT_PASS, "{name}: {err}");
    let path = golden_dir().join(format!("{name}.result"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, &out).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}; rerun with UPDATE_GOLDEN=1", path.display()));
    assert_eq!(out, expected, "{name} drifted from its golden file");
    // and the schema reads back
    let entries = read_result(&out).unwrap();
    assert!(entries.iter().any(|(k, v)| k == "verify.pass" && v == "true"));
}

#[test]
fn golden_two_player_results() {
    for name in ["matching_pennies", "myerson_3x3", "weak_dominance", "signaling"] {
        check_golden(&format!("solve2p_{name}"), &["--game", &game_path(name), "--mode", "solve2p"]);
    }
}

#[test]
fn golden_zero_sum_results() {
    for name in ["zero_sum_2x2", "kuhn_poker"] {
        check_golden(&format!("solve-zs_{name}"), &["--game", &game_path(name), "--mode", "solve-zs"]);
    }
}

#[test]
fn exit_codes() {
    let pennies = game_path("matching_pennies");
    let one_shot = game_path("one_shot");
    let uniform = common::games_dir().join("one_shot_uniform.profile").display().to_string();

    assert_eq!(qpe(&["--game", &pennies, "--mode", "solve2p"]).0, EXIT_PASS);
    assert_eq!(qpe(&["--game", &game_path("three_coordination"), "--mode", "solve-n"]).0, EXIT_PASS);
    // uniform play with a strictly better action is not ε-quasi-proper at 1/100
    let (code, out, _) = qpe(&["--game", &one_shot, "--mode", "verify", "--profile", &uniform, "--eps", "1/100"]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.contains("verify.pass = false"), "{out}");

    // errors
    assert_eq!(qpe(&["--game", "/nonexistent.qpef", "--mode", "solve2p"]).0, EXIT_ERROR);
    assert_eq!(qpe(&["--game", &pennies, "--mode", "bogus"]).0, EXIT_ERROR);
    assert_eq!(qpe(&["--game", &pennies, "--mode", "verify"]).0, EXIT_ERROR);
    assert_eq!(qpe(&["--game", &pennies, "--mode", "solve2p", "--delta", "1/10"]).0, EXIT_ERROR);
    assert_eq!(qpe(&["--game", &pennies, "--mode", "solve-n", "--gamma", "1/10", "--eps", "1/10", "--squarings", "1,2"]).0, EXIT_ERROR);
    assert_eq!(qpe(&["--game", &game_path("three_chance"), "--mode", "solve2p"]).0, EXIT_ERROR);
    assert_eq!(qpe(&["--game", &pennies, "--mode", "solve2p", "--eps", "0.1"]).0, EXIT_ERROR);
    assert_eq!(qpe(&["--help"]).0, EXIT_PASS);
}

#[test]
fn out_flag_writes_the_document() {
    let dir = std::env::temp_dir().join(format!("qpe-out-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let target = dir.join("r.result");
    let (code, stdout, _) = qpe(&["--game", &game_path("single_action"), "--mode", "solve-zs", "--out", target.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS);
    assert!(stdout.is_empty());
    let written = fs::read_to_string(&target).unwrap();
    assert!(written.contains("mode = zero-sum"), "{written}");
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn examples_in_the_format_document_parse() {
    let doc = fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/format.md")).unwrap();
    let blocks: Vec<&str> = doc.split("```qpef\n").skip(1).map(|b| b.split("```").next().unwrap()).collect();
    assert!(!blocks.is_empty());
    for b in blocks {
        let parsed = parse(b).unwrap_or_else(|e| panic!("{e}\n{b}"));
        assert_eq!(serialize(&parsed), b, "documented example is not in canonical form");
    }
    let profile = doc.split("(profile").nth(1).unwrap().split("```").next().unwrap();
    let game = parse(&fs::read_to_string(common::games_dir().join("one_shot.qpef")).unwrap()).unwrap().game;
    quasiproper::game_format::parse_profile(&format!("(profile{profile}"), &game).unwrap();
}
