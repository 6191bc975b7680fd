//! Zero-sum games by the simplex method over the ε-field.
use quasiproper::game_format::parse;
use quasiproper::pivot_solver::{simplex_zero_sum, DEFAULT_MAX_PIVOTS};

fn main() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/games/kuhn_poker.qpef")).expect("corpus file");
    let game = parse(&text).expect("valid game").game;
    let sol = simplex_zero_sum(&game, 8, DEFAULT_MAX_PIVOTS).expect("LP is bounded");
    println!("Kuhn poker: {} sequences for player 1, {} for player 2",
        sol.polytopes[0].num_sequences(), sol.polytopes[1].num_sequences());
    println!("perturbed value, low order first: {}", sol.value);
    println!("value of the game to player 1: {}", sol.value.constant_term());
    println!("{} simplex pivots", sol.pivots);
}
