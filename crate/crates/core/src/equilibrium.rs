//! Behaviour strategies from symbolic realization plans, their ε → 0
//! limits, and exact checks of the quasi-proper, δ-almost and Nash
//! conditions.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::eps_field::{EpsError, EpsPoly, EpsRat};
use crate::game_model::{best_response_value, expected_payoff, k_values, BehaviorProfile, GameError, GameTree};
use crate::scalar::Rational;
use crate::sequence_form::{realization_to_behavior, PerturbedPolytope, SequenceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquilibriumError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Eps(#[from] EpsError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("local strategy at {0} does not sum to one")]
    NotADistribution(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Lcp,
    Lp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicEquilibrium {
    pub behavior: BehaviorProfile<EpsRat>,
    pub limit: BehaviorProfile<Rational>,
    pub provenance: Provenance,
}

impl SymbolicEquilibrium {
    /// The profile at a concrete `ε₀`.
    pub fn at(&self, eps: &Rational) -> Result<BehaviorProfile<Rational>, EpsError> {
        let probs = self
            .behavior
            .probs
            .iter()
            .map(|local| local.iter().map(|p| p.eval_at(eps)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BehaviorProfile { probs })
    }
}

/// `b_ih(c; ε) = x_c(ε) / x_parent(ε)` for every player, then the limit.
/// `plans[p]` may include trailing wire variables.
pub fn extract_behavior(
    game: &GameTree,
    polytopes: &[PerturbedPolytope],
    plans: &[Vec<EpsPoly>],
    provenance: Provenance,
) -> Result<SymbolicEquilibrium, EquilibriumError> {
    let mut probs: Vec<Vec<EpsRat>> = game.infosets().iter().map(|_| Vec::new()).collect();
    for (poly, plan) in polytopes.iter().zip(plans) {
        let seqs: Vec<EpsRat> = plan[..poly.num_sequences()]
            .iter()
            .cloned()
            .map(EpsRat::from_poly)
            .collect();
        for (h, local) in realization_to_behavior(game, &poly.index, &seqs)? {
            probs[h.0] = local;
        }
    }
    let behavior = BehaviorProfile { probs };
    let mut limits = Vec::with_capacity(behavior.probs.len());
    for (h, local) in game.infosets().iter().zip(&behavior.probs) {
        let total = local.iter().fold(EpsRat::zero(), |acc, p| &acc + p);
        if total != EpsRat::one() {
            return Err(EquilibriumError::NotADistribution(h.name.clone()));
        }
        let lim = local.iter().map(EpsRat::limit_at_zero).collect::<Result<Vec<_>, _>>()?;
        if lim.iter().sum::<Rational>() != Rational::one() {
            return Err(EquilibriumError::NotADistribution(h.name.clone()));
        }
        limits.push(lim);
    }
    Ok(SymbolicEquilibrium {
        behavior,
        limit: BehaviorProfile { probs: limits },
        provenance,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyMode {
    /// `K^c < K^{c'} ⇒ b(c) ≤ ratio·b(c')`.
    QuasiProper { ratio: Rational },
    /// The same, triggered only by gaps of at least `delta`.
    DeltaAlmost { ratio: Rational, delta: Rational },
    Nash,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Ratio {
        player: usize,
        infoset: String,
        worse: String,
        better: String,
        k_worse: Rational,
        k_better: Rational,
    },
    Deviation {
        player: usize,
        payoff: Rational,
        best_response: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub mode: VerifyMode,
    pub pass: bool,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    fn from_violations(mode: VerifyMode, violations: Vec<Violation>) -> Self {
        VerificationReport {
            mode,
            pass: violations.is_empty(),
            violations,
        }
    }
}

fn ratio_check(
    game: &GameTree,
    profile: &BehaviorProfile<Rational>,
    ratio: &Rational,
    gap: &Rational,
) -> Result<Vec<Violation>, EquilibriumError> {
    profile.check(game)?;
    profile.require_fully_mixed(game)?;
    let mut violations = Vec::new();
    for (hid, info) in game.infosets().iter().enumerate() {
        let h = crate::game_model::InfosetId(hid);
        let k = k_values(game, profile, h)?;
        let local = profile.local(h);
        for c in 0..k.len() {
            for c2 in 0..k.len() {
                let triggered = if gap.is_zero() {
                    k[c] < k[c2]
                } else {
                    &k[c] + gap <= k[c2]
                };
                if triggered && local[c] > ratio * &local[c2] {
                    violations.push(Violation::Ratio {
                        player: info.owner,
                        infoset: info.name.clone(),
                        worse: info.actions[c].clone(),
                        better: info.actions[c2].clone(),
                        k_worse: k[c].clone(),
                        k_better: k[c2].clone(),
                    });
                }
            }
        }
    }
    Ok(violations)
}

/// ε₀-quasi-proper check of a fully mixed profile.
pub fn verify_eps_quasi_proper(
    game: &GameTree,
    profile: &BehaviorProfile<Rational>,
    eps: &Rational,
) -> Result<VerificationReport, EquilibriumError> {
    let v = ratio_check(game, profile, eps, &Rational::zero())?;
    Ok(VerificationReport::from_violations(VerifyMode::QuasiProper { ratio: eps.clone() }, v))
}

/// δ-almost ε₀-quasi-proper check.
pub fn verify_delta_almost(
    game: &GameTree,
    profile: &BehaviorProfile<Rational>,
    eps: &Rational,
    delta: &Rational,
) -> Result<VerificationReport, EquilibriumError> {
    let v = ratio_check(game, profile, eps, delta)?;
    Ok(VerificationReport::from_violations(
        VerifyMode::DeltaAlmost {
            ratio: eps.clone(),
            delta: delta.clone(),
        },
        v,
    ))
}

/// No player gains by deviating (best responses by backward induction).
pub fn verify_nash(game: &GameTree, profile: &BehaviorProfile<Rational>) -> Result<VerificationReport, EquilibriumError> {
    profile.check(game)?;
    let violations = (0..game.num_players())
        .filter_map(|player| {
            let payoff = expected_payoff(game, profile, player);
            let best_response = best_response_value(game, profile, player);
            (best_response > payoff).then_some(Violation::Deviation {
                player,
                payoff,
                best_response,
            })
        })
        .collect();
    Ok(VerificationReport::from_violations(VerifyMode::Nash, violations))
}

/// Solver output at `ε₀`, checked against the relaxed `2ε₀` ratio that
/// equilibria of the perturbed game are guaranteed to satisfy.
pub fn verify_solver_output(
    game: &GameTree,
    eq: &SymbolicEquilibrium,
    eps: &Rational,
) -> Result<VerificationReport, EquilibriumError> {
    let profile = eq.at(eps)?;
    let ratio = eps * Rational::from_integer(2.into());
    let v = ratio_check(game, &profile, &ratio, &Rational::zero())?;
    Ok(VerificationReport::from_violations(VerifyMode::QuasiProper { ratio }, v))
}

pub type SampleReports = Vec<(Rational, VerificationReport)>;

/// Verification at each sample; also returns the largest passing `ε₀`.
pub fn verify_samples(
    game: &GameTree,
    eq: &SymbolicEquilibrium,
    samples: &[Rational],
) -> Result<(SampleReports, Option<Rational>), EquilibriumError> {
    let mut out = Vec::new();
    let mut best: Option<Rational> = None;
    for eps in samples {
        let report = verify_solver_output(game, eq, eps)?;
        if report.pass && best.as_ref().is_none_or(|b| eps > b) {
            best = Some(eps.clone());
        }
        out.push((eps.clone(), report));
    }
    Ok((out, best))
}
