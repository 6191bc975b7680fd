//! Quasi-proper equilibrium of a two-player game via the perturbed LCP.
use quasiproper::equilibrium::{extract_behavior, verify_nash, verify_samples, Provenance};
use quasiproper::pivot_solver::{solve_two_player, DEFAULT_MAX_PIVOTS};
use quasiproper::{rat, GameBuilder};

fn main() {
    // Row picks U or D; Col picks L or R without seeing it. D and R are weakly dominated.
    let mut b = GameBuilder::new(2);
    let leaf = |b: &mut GameBuilder, u: i64, v: i64| b.leaf(vec![rat(u, 1), rat(v, 1)]);
    let (ul, ur, dl, dr) = (leaf(&mut b, 1, 1), leaf(&mut b, 0, 0), leaf(&mut b, 0, 0), leaf(&mut b, 0, 0));
    let cu = b.decision_seq(1, "Col", &["L", "R"], vec![ul, ur]);
    let cd = b.decision_seq(1, "Col", &["L", "R"], vec![dl, dr]);
    let root = b.decision_seq(0, "Row", &["U", "D"], vec![cu, cd]);
    let game = b.build(root).expect("well-formed game");

    let sol = solve_two_player(&game, 8, DEFAULT_MAX_PIVOTS).expect("Lemke terminates");
    let eq = extract_behavior(&game, &sol.polytopes, &sol.plans, Provenance::Lcp).expect("extraction");
    println!("{} pivots on an LCP of dimension {}", sol.pivots, sol.z.len());
    for (h, info) in game.infosets().iter().enumerate() {
        for (a, label) in info.actions.iter().enumerate() {
            let id = quasiproper::InfosetId(h);
            println!("  {}.{label}: {}  (limit {})", info.name, eq.behavior.get(id, a), eq.limit.get(id, a));
        }
    }
    let (reports, best) = verify_samples(&game, &eq, &[rat(1, 100), rat(1, 10_000)]).expect("verification");
    for (eps0, r) in &reports {
        println!("quasi-proper at ε₀ = {eps0}: {}", r.pass);
    }
    if let Some(b) = best {
        println!("largest passing sample: {b}");
    }
    println!("limit is Nash: {}", verify_nash(&game, &eq.limit).expect("verification").pass);
}
