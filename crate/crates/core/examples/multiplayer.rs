//! Three players: damped fixed-point search, exact δ-almost verification.
use quasiproper::game_format::parse;
use quasiproper::multiplayer::{fixed_point_search, IterationConfig};
use quasiproper::rat;

fn main() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/games/three_entry.qpef")).expect("corpus file");
    let game = parse(&text).expect("valid game").game;
    let (eps, delta) = (rat(1, 20), rat(1, 10_000));
    let out = fixed_point_search(&game, &eps, &delta, &IterationConfig::default()).expect("search runs");
    println!("{} iterations (restart {}), float residual {:e}", out.iterations, out.restart, out.float_residual);
    println!("exact residual |F(b) - b| = {}", out.residual);
    println!("δ-almost ε-quasi-proper at ε = {eps}, δ = {delta}: {}", out.report.pass);
    for (h, info) in game.infosets().iter().enumerate() {
        let local = out.profile.local(quasiproper::InfosetId(h));
        let shown: Vec<String> = info.actions.iter().zip(local).map(|(a, p)| format!("{a}={:.4}", quasiproper::Scalar::approx_f64(p))).collect();
        println!("  {}: {}", info.name, shown.join(" "));
    }
}
