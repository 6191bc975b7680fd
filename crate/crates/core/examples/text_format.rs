//! Reading, writing and re-reading `.qpef` games and results.
use quasiproper::game_format::{emit_result, parse, serialize, ResultDocument, ResultMode};
use quasiproper::multiplayer::{fixed_point_search, IterationConfig};
use quasiproper::rat;

const SOURCE: &str = r#"
; entry deterrence with a chance move
(game :players 2 :names (Entrant Incumbent)
  (chance :id nature
    (tough 1/3 (decision :player 1 :infoset Enter :actions (in out)
      (out (leaf (0 2)))
      (in (decision :player 2 :infoset Respond :actions (fight share)
        (fight (leaf (-1 1))) (share (leaf (1 0)))))))
    (weak 2/3 (decision :player 1 :infoset Enter :actions (in out)
      (in (decision :player 2 :infoset Respond :actions (fight share)
        (fight (leaf (-1 -1))) (share (leaf (1 1)))))
      (out (leaf (0 2)))))))
"#;

fn main() {
    let doc = match parse(SOURCE) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    println!("canonical form:\n{}", serialize(&doc));
    println!("a typo is reported with its position: {}", parse("(game :players 2 (leaf (1 x)))").unwrap_err());

    let game = &doc.game;
    let out = fixed_point_search(game, &rat(1, 20), &rat(1, 10_000), &IterationConfig::default()).expect("search runs");
    let mut result = ResultDocument::new(ResultMode::Multiplayer);
    result.add_exact(game, &out.profile);
    print!("{}", emit_result(&result));
}
