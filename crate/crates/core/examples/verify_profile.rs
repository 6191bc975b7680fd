//! Checking a given behaviour profile for ε-quasi-properness.
use quasiproper::equilibrium::{verify_delta_almost, verify_eps_quasi_proper};
use quasiproper::{rat, BehaviorProfile, GameBuilder, InfosetId};

fn main() {
    let mut b = GameBuilder::new(1);
    let high = b.leaf(vec![rat(3, 1)]);
    let low = b.leaf(vec![rat(1, 1)]);
    let root = b.decision_seq(0, "Choice", &["high", "low"], vec![high, low]);
    let game = b.build(root).expect("well-formed game");

    let eps = rat(1, 100);
    let mut profile = BehaviorProfile::<quasiproper::Rational>::uniform(&game);
    let report = verify_eps_quasi_proper(&game, &profile, &eps).expect("fully mixed");
    println!("uniform play: {} ({} violations)", report.pass, report.violations.len());

    profile.probs[InfosetId(0).0] = vec![rat(100, 101), rat(1, 101)];
    println!("low at ε/(1+ε): {}", verify_eps_quasi_proper(&game, &profile, &eps).expect("fully mixed").pass);
    // valuations within δ of each other are exempt
    let uniform = BehaviorProfile::uniform(&game);
    println!("uniform, δ = 3: {}", verify_delta_almost(&game, &uniform, &eps, &rat(3, 1)).expect("fully mixed").pass);
}
