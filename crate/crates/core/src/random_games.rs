//! Random perfect-recall games for property tests and benchmarks.
//!
//! Games are built layer by layer. Each layer has one mover (a player or
//! chance), a fixed number of actions, and a visibility mask saying which
//! players observe the move. A player's information set is keyed by
//! everything it has observed so far, its own moves included, which makes
//! perfect recall hold by construction.

use std::collections::HashMap;

use rand::Rng;

use crate::game_model::{BehaviorProfile, GameBuilder, GameTree, Node, NodeId};
use crate::scalar::{int, rat, Rational};

#[derive(Debug, Clone)]
pub struct GameShape {
    pub players: usize,
    pub layers: usize,
    pub min_actions: usize,
    pub max_actions: usize,
    /// Probability that a layer is a chance move.
    pub chance_layer: f64,
    /// Probability that a move is observed by a non-mover.
    pub visibility: f64,
    /// Probability that a non-root node is cut off as a leaf early.
    pub early_leaf: f64,
    pub payoff_range: i64,
    pub zero_sum: bool,
}

impl GameShape {
    pub fn two_player_small() -> Self {
        GameShape {
            players: 2,
            layers: 4,
            min_actions: 2,
            max_actions: 3,
            chance_layer: 0.25,
            visibility: 0.5,
            early_leaf: 0.2,
            payoff_range: 5,
            zero_sum: false,
        }
    }

    pub fn zero_sum_small() -> Self {
        GameShape {
            zero_sum: true,
            ..Self::two_player_small()
        }
    }

    pub fn players(mut self, n: usize) -> Self {
        self.players = n;
        self
    }
}

struct Layer {
    mover: Option<usize>,
    actions: usize,
    visible: Vec<bool>,
}

pub fn random_game<R: Rng>(rng: &mut R, shape: &GameShape) -> GameTree {
    let layers: Vec<Layer> = (0..shape.layers)
        .map(|_| {
            let mover = if rng.gen_bool(shape.chance_layer) {
                None
            } else {
                Some(rng.gen_range(0..shape.players))
            };
            Layer {
                mover,
                actions: rng.gen_range(shape.min_actions..=shape.max_actions),
                visible: (0..shape.players).map(|_| rng.gen_bool(shape.visibility)).collect(),
            }
        })
        .collect();
    let mut builder = GameBuilder::new(shape.players);
    let mut keys = HashMap::new();
    let obs = vec![Vec::new(); shape.players];
    let root = grow(rng, shape, &layers, 0, &obs, &mut builder, &mut keys);
    builder.build(root).expect("generator produces valid games")
}

/// Infoset names keyed by (player, observation history).
type InfosetKeys = HashMap<(usize, Vec<(usize, usize)>), String>;

fn grow<R: Rng>(
    rng: &mut R,
    shape: &GameShape,
    layers: &[Layer],
    depth: usize,
    obs: &[Vec<(usize, usize)>],
    builder: &mut GameBuilder,
    keys: &mut InfosetKeys,
) -> NodeId {
    if depth == layers.len() || (depth > 0 && rng.gen_bool(shape.early_leaf)) {
        let first = rng.gen_range(-shape.payoff_range..=shape.payoff_range);
        let payoffs = (0..shape.players)
            .map(|i| match i {
                0 => int(first),
                1 if shape.zero_sum => int(-first),
                _ => int(rng.gen_range(-shape.payoff_range..=shape.payoff_range)),
            })
            .collect();
        return builder.leaf(payoffs);
    }
    let layer = &layers[depth];
    let labels: Vec<String> = (0..layer.actions).map(|a| format!("a{a}")).collect();
    let children: Vec<NodeId> = (0..layer.actions)
        .map(|a| {
            let next: Vec<_> = obs
                .iter()
                .enumerate()
                .map(|(i, o)| {
                    let mut o = o.clone();
                    if layer.visible[i] || layer.mover == Some(i) {
                        o.push((depth, a));
                    }
                    o
                })
                .collect();
            grow(rng, shape, layers, depth + 1, &next, builder, keys)
        })
        .collect();
    match layer.mover {
        None => {
            let weights: Vec<i64> = (0..layer.actions).map(|_| rng.gen_range(1..=4)).collect();
            let total: i64 = weights.iter().sum();
            let outcomes = labels
                .iter()
                .zip(&weights)
                .zip(&children)
                .map(|((l, &w), &c)| (l.as_str(), rat(w, total), c))
                .collect();
            builder.chance(None, outcomes)
        }
        Some(player) => {
            let mut key_obs = obs[player].clone();
            key_obs.push((depth, usize::MAX));
            let fresh = keys.len();
            let name = keys
                .entry((player, key_obs))
                .or_insert_with(|| format!("h{fresh}"))
                .clone();
            let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
            builder.decision_seq(player, &name, &refs, children)
        }
    }
}

/// A fully mixed profile with small random rational entries.
pub fn random_mixed_profile<R: Rng>(rng: &mut R, game: &GameTree) -> BehaviorProfile<Rational> {
    BehaviorProfile {
        probs: game
            .infosets()
            .iter()
            .map(|h| {
                let w: Vec<i64> = (0..h.num_actions()).map(|_| rng.gen_range(1..=9)).collect();
                let total: i64 = w.iter().sum();
                w.into_iter().map(|x| rat(x, total)).collect()
            })
            .collect(),
    }
}

/// Number of decision nodes owned by `player`.
pub fn decision_nodes(game: &GameTree, player: usize) -> usize {
    game.nodes()
        .iter()
        .filter(|n| matches!(n, Node::Decision { infoset, .. } if game.infoset(*infoset).owner == player))
        .count()
}
