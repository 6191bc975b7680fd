//! Finite extensive-form games of perfect recall.
//!
//! A [`GameBuilder`] collects raw nodes; [`GameBuilder::build`] validates
//! tree shape, chance distributions, information-set consistency and
//! perfect recall, producing an immutable [`GameTree`]. All evaluators are
//! generic over [`Scalar`] so the same code runs on exact rationals, the
//! symbolic ε-field and floats.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfosetId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("game must have at least one player")]
    NoPlayers,
    #[error("not a tree at node {node}: {reason}")]
    NotATree { node: NodeId, reason: String },
    #[error("chance node {node} has a bad distribution: {reason}")]
    BadChanceDistribution { node: NodeId, reason: String },
    #[error("information set {infoset} is inconsistent at node {node}: {reason}")]
    InconsistentInfoset {
        infoset: String,
        node: NodeId,
        reason: String,
    },
    #[error("information set {infoset} violates perfect recall at node {node}")]
    ImperfectRecall { infoset: String, node: NodeId },
    #[error("leaf {node} has {got} payoffs, expected {expected}")]
    BadPayoffs {
        node: NodeId,
        expected: usize,
        got: usize,
    },
    #[error("node {node} names player {player}, but the game has {players} players")]
    BadPlayer {
        node: NodeId,
        player: usize,
        players: usize,
    },
    #[error("conditional payoff at {infoset} is undefined: the set is reached with probability 0")]
    ConditionalOnNullSet { infoset: String },
    #[error("profile is not fully mixed (at information set {infoset})")]
    NotFullyMixed { infoset: String },
    #[error("action {action} is not available at information set {infoset}")]
    ActionNotInInfoset { infoset: String, action: String },
    #[error("profile does not match the game: {0}")]
    ProfileShape(String),
}

#[derive(Debug, Clone)]
enum RawKind {
    Leaf(Vec<Rational>),
    Chance {
        label: Option<String>,
        outcomes: Vec<(String, Rational, NodeId)>,
    },
    Decision {
        player: usize,
        infoset: String,
        actions: Vec<String>,
        children: Vec<(String, NodeId)>,
    },
}

/// Unvalidated game under construction. Node ids are handed out in
/// creation order; children must exist before their parent is added.
#[derive(Debug, Clone)]
pub struct GameBuilder {
    players: usize,
    nodes: Vec<RawKind>,
}

impl GameBuilder {
    pub fn new(players: usize) -> Self {
        GameBuilder {
            players,
            nodes: Vec::new(),
        }
    }

    fn push(&mut self, kind: RawKind) -> NodeId {
        self.nodes.push(kind);
        NodeId(self.nodes.len() - 1)
    }

    pub fn leaf(&mut self, payoffs: Vec<Rational>) -> NodeId {
        self.push(RawKind::Leaf(payoffs))
    }

    pub fn chance(&mut self, label: Option<&str>, outcomes: Vec<(&str, Rational, NodeId)>) -> NodeId {
        self.push(RawKind::Chance {
            label: label.map(str::to_owned),
            outcomes: outcomes
                .into_iter()
                .map(|(a, p, c)| (a.to_owned(), p, c))
                .collect(),
        })
    }

    /// Decision node of `player` (0-based) in information set `infoset`.
    /// `children` are labelled edges; the declared `actions` fix the order.
    pub fn decision(
        &mut self,
        player: usize,
        infoset: &str,
        actions: &[&str],
        children: Vec<(&str, NodeId)>,
    ) -> NodeId {
        self.push(RawKind::Decision {
            player,
            infoset: infoset.to_owned(),
            actions: actions.iter().map(|s| s.to_string()).collect(),
            children: children
                .into_iter()
                .map(|(a, c)| (a.to_owned(), c))
                .collect(),
        })
    }

    /// Shorthand for a decision node whose edges follow the action order.
    pub fn decision_seq(
        &mut self,
        player: usize,
        infoset: &str,
        actions: &[&str],
        children: Vec<NodeId>,
    ) -> NodeId {
        let labelled = actions.iter().copied().zip(children).collect();
        self.decision(player, infoset, actions, labelled)
    }

    /// Validates the subtree rooted at `root`.
    pub fn build(&self, root: NodeId) -> Result<GameTree, GameError> {
        GameTree::validate(self, root)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub label: String,
    pub prob: Rational,
    pub child: NodeId,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Leaf {
        payoffs: Vec<Rational>,
    },
    Chance {
        label: Option<String>,
        outcomes: Vec<Outcome>,
    },
    /// Children are ordered like the information set's actions.
    Decision {
        infoset: InfosetId,
        children: Vec<NodeId>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfoSet {
    pub name: String,
    pub owner: usize,
    pub actions: Vec<String>,
    pub members: Vec<NodeId>,
    /// The owner's (information set, action index) pairs on the path to
    /// any member; identical for all members by perfect recall.
    pub history: Vec<(InfosetId, usize)>,
}

impl InfoSet {
    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn action_index(&self, label: &str) -> Option<usize> {
        self.actions.iter().position(|a| a == label)
    }
}

/// A validated game. Node ids are renumbered in depth-first preorder, so
/// the root is always `NodeId(0)`; information sets are numbered in order
/// of first discovery, which is also the canonical per-player order.
#[derive(Debug, Clone, PartialEq)]
pub struct GameTree {
    players: usize,
    nodes: Vec<Node>,
    parents: Vec<Option<(NodeId, usize)>>,
    infosets: Vec<InfoSet>,
    player_infosets: Vec<Vec<InfosetId>>,
    leaves: Vec<NodeId>,
    action_offsets: Vec<usize>,
}

impl GameTree {
    fn validate(raw: &GameBuilder, root: NodeId) -> Result<GameTree, GameError> {
        if raw.players == 0 {
            return Err(GameError::NoPlayers);
        }
        if root.0 >= raw.nodes.len() {
            return Err(GameError::NotATree {
                node: root,
                reason: "root does not exist".into(),
            });
        }
        let mut game = GameTree {
            players: raw.players,
            nodes: Vec::new(),
            parents: Vec::new(),
            infosets: Vec::new(),
            player_infosets: vec![Vec::new(); raw.players],
            leaves: Vec::new(),
            action_offsets: Vec::new(),
        };
        let mut visited = vec![false; raw.nodes.len()];
        let mut names: HashMap<String, InfosetId> = HashMap::new();
        let mut histories = vec![Vec::new(); raw.players];
        game.copy_subtree(raw, root, None, &mut visited, &mut names, &mut histories)?;
        let mut offset = 0;
        for h in &game.infosets {
            game.action_offsets.push(offset);
            offset += h.actions.len();
        }
        Ok(game)
    }

    fn copy_subtree(
        &mut self,
        raw: &GameBuilder,
        raw_id: NodeId,
        parent: Option<(NodeId, usize)>,
        visited: &mut [bool],
        names: &mut HashMap<String, InfosetId>,
        histories: &mut [Vec<(InfosetId, usize)>],
    ) -> Result<NodeId, GameError> {
        let bad_ref = |reason: &str| GameError::NotATree {
            node: raw_id,
            reason: reason.to_owned(),
        };
        let Some(kind) = raw.nodes.get(raw_id.0) else {
            return Err(bad_ref("dangling child reference"));
        };
        if visited[raw_id.0] {
            return Err(bad_ref("node is reachable along two paths or lies on a cycle"));
        }
        visited[raw_id.0] = true;
        let id = NodeId(self.nodes.len());
        self.parents.push(parent);
        // placeholder, filled once the children are known
        self.nodes.push(Node::Leaf { payoffs: Vec::new() });
        let node = match kind {
            RawKind::Leaf(payoffs) => {
                if payoffs.len() != self.players {
                    return Err(GameError::BadPayoffs {
                        node: raw_id,
                        expected: self.players,
                        got: payoffs.len(),
                    });
                }
                self.leaves.push(id);
                Node::Leaf {
                    payoffs: payoffs.clone(),
                }
            }
            RawKind::Chance { label, outcomes } => {
                if outcomes.is_empty() {
                    return Err(GameError::BadChanceDistribution {
                        node: raw_id,
                        reason: "no outcomes".into(),
                    });
                }
                let mut total = Rational::zero();
                for (a, p, _) in outcomes {
                    if p.is_negative() {
                        return Err(GameError::BadChanceDistribution {
                            node: raw_id,
                            reason: format!("negative probability on {a}"),
                        });
                    }
                    total += p;
                }
                if !total.is_one() {
                    return Err(GameError::BadChanceDistribution {
                        node: raw_id,
                        reason: format!("probabilities sum to {total}"),
                    });
                }
                check_distinct(outcomes.iter().map(|o| &o.0)).map_err(|dup| {
                    GameError::BadChanceDistribution {
                        node: raw_id,
                        reason: format!("duplicate outcome label {dup}"),
                    }
                })?;
                let mut built = Vec::with_capacity(outcomes.len());
                for (i, (a, p, c)) in outcomes.iter().enumerate() {
                    let child = self.copy_subtree(raw, *c, Some((id, i)), visited, names, histories)?;
                    built.push(Outcome {
                        label: a.clone(),
                        prob: p.clone(),
                        child,
                    });
                }
                Node::Chance {
                    label: label.clone(),
                    outcomes: built,
                }
            }
            RawKind::Decision {
                player,
                infoset,
                actions,
                children,
            } => {
                let player = *player;
                if player >= self.players {
                    return Err(GameError::BadPlayer {
                        node: raw_id,
                        player,
                        players: self.players,
                    });
                }
                let inconsistent = |reason: String| GameError::InconsistentInfoset {
                    infoset: infoset.clone(),
                    node: raw_id,
                    reason,
                };
                if actions.is_empty() {
                    return Err(inconsistent("empty action set".into()));
                }
                check_distinct(actions.iter())
                    .map_err(|dup| inconsistent(format!("duplicate action {dup}")))?;
                if children.len() != actions.len() {
                    return Err(inconsistent(format!(
                        "{} children for {} actions",
                        children.len(),
                        actions.len()
                    )));
                }
                let mut ordered = Vec::with_capacity(actions.len());
                for a in actions {
                    let matches: Vec<_> = children.iter().filter(|(l, _)| l == a).collect();
                    if matches.len() != 1 {
                        return Err(inconsistent(format!("action {a} must label exactly one child")));
                    }
                    ordered.push(matches[0].1);
                }
                let hid = match names.get(infoset) {
                    Some(&hid) => {
                        let h = &self.infosets[hid.0];
                        if h.owner != player {
                            return Err(inconsistent(format!(
                                "owned by player {} and player {}",
                                h.owner + 1,
                                player + 1
                            )));
                        }
                        if &h.actions != actions {
                            return Err(inconsistent("members disagree on the action set".into()));
                        }
                        if h.history != histories[player] {
                            return Err(GameError::ImperfectRecall {
                                infoset: infoset.clone(),
                                node: raw_id,
                            });
                        }
                        self.infosets[hid.0].members.push(id);
                        hid
                    }
                    None => {
                        let hid = InfosetId(self.infosets.len());
                        names.insert(infoset.clone(), hid);
                        self.infosets.push(InfoSet {
                            name: infoset.clone(),
                            owner: player,
                            actions: actions.clone(),
                            members: vec![id],
                            history: histories[player].clone(),
                        });
                        self.player_infosets[player].push(hid);
                        hid
                    }
                };
                let mut built = Vec::with_capacity(ordered.len());
                for (i, c) in ordered.into_iter().enumerate() {
                    histories[player].push((hid, i));
                    let child = self.copy_subtree(raw, c, Some((id, i)), visited, names, histories);
                    histories[player].pop();
                    built.push(child?);
                }
                Node::Decision {
                    infoset: hid,
                    children: built,
                }
            }
        };
        self.nodes[id.0] = node;
        Ok(id)
    }

    pub fn num_players(&self) -> usize {
        self.players
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn parent(&self, id: NodeId) -> Option<(NodeId, usize)> {
        self.parents[id.0]
    }

    pub fn infoset(&self, id: InfosetId) -> &InfoSet {
        &self.infosets[id.0]
    }

    pub fn infosets(&self) -> &[InfoSet] {
        &self.infosets
    }

    pub fn num_infosets(&self) -> usize {
        self.infosets.len()
    }

    pub fn infoset_by_name(&self, name: &str) -> Option<InfosetId> {
        self.infosets.iter().position(|h| h.name == name).map(InfosetId)
    }

    /// `H_i` in canonical (first-discovery) order.
    pub fn player_infosets(&self, player: usize) -> &[InfosetId] {
        &self.player_infosets[player]
    }

    pub fn leaves(&self) -> &[NodeId] {
        &self.leaves
    }

    /// Index of `(h, a)` in a flat enumeration of all information-set actions.
    pub fn action_slot(&self, h: InfosetId, action: usize) -> usize {
        self.action_offsets[h.0] + action
    }

    pub fn num_action_slots(&self) -> usize {
        self.infosets.iter().map(|h| h.actions.len()).sum()
    }

    pub fn children(&self, id: NodeId) -> Vec<NodeId> {
        match &self.nodes[id.0] {
            Node::Leaf { .. } => Vec::new(),
            Node::Chance { outcomes, .. } => outcomes.iter().map(|o| o.child).collect(),
            Node::Decision { children, .. } => children.clone(),
        }
    }

    /// True when `later` is `h` itself or has `h` in its owner's history.
    pub fn weakly_follows(&self, later: InfosetId, h: InfosetId) -> bool {
        later == h || self.infosets[later.0].history.iter().any(|&(g, _)| g == h)
    }

    /// Edges from the root to `id`, as (parent, edge index) pairs.
    pub fn path_to(&self, id: NodeId) -> Vec<(NodeId, usize)> {
        let mut path = Vec::new();
        let mut cur = id;
        while let Some((p, e)) = self.parents[cur.0] {
            path.push((p, e));
            cur = p;
        }
        path.reverse();
        path
    }

    /// True when every leaf satisfies `u_2 = -u_1` (two players only).
    pub fn is_zero_sum(&self) -> bool {
        self.players == 2
            && self.leaves.iter().all(|&z| match &self.nodes[z.0] {
                Node::Leaf { payoffs } => (&payoffs[0] + &payoffs[1]).is_zero(),
                _ => unreachable!(),
            })
    }

    pub fn payoff(&self, leaf: NodeId, player: usize) -> &Rational {
        match &self.nodes[leaf.0] {
            Node::Leaf { payoffs } => &payoffs[player],
            _ => panic!("node {leaf} is not a leaf"),
        }
    }
}

fn check_distinct<'a>(labels: impl Iterator<Item = &'a String>) -> Result<(), String> {
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(l.clone());
        }
    }
    Ok(())
}

/// A local strategy for every information set, indexed by [`InfosetId`].
#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorProfile<T> {
    pub probs: Vec<Vec<T>>,
}

impl<T: Scalar> BehaviorProfile<T> {
    pub fn uniform(game: &GameTree) -> Self {
        BehaviorProfile {
            probs: game
                .infosets()
                .iter()
                .map(|h| {
                    let m = T::from_int(h.num_actions() as i64);
                    vec![T::one() / m; h.num_actions()]
                })
                .collect(),
        }
    }

    /// Pure profile choosing `choice[h]` at every information set.
    pub fn pure(game: &GameTree, choice: &[usize]) -> Self {
        BehaviorProfile {
            probs: game
                .infosets()
                .iter()
                .zip(choice)
                .map(|(h, &c)| {
                    (0..h.num_actions())
                        .map(|a| if a == c { T::one() } else { T::zero() })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn get(&self, h: InfosetId, action: usize) -> &T {
        &self.probs[h.0][action]
    }

    pub fn local(&self, h: InfosetId) -> &[T] {
        &self.probs[h.0]
    }

    pub fn is_fully_mixed(&self) -> bool {
        self.first_unmixed().is_none()
    }

    fn first_unmixed(&self) -> Option<InfosetId> {
        self.probs
            .iter()
            .position(|local| local.iter().any(|p| !p.positive()))
            .map(InfosetId)
    }

    pub fn require_fully_mixed(&self, game: &GameTree) -> Result<(), GameError> {
        match self.first_unmixed() {
            None => Ok(()),
            Some(h) => Err(GameError::NotFullyMixed {
                infoset: game.infoset(h).name.clone(),
            }),
        }
    }

    /// Checks the shape against `game` and that every local strategy is a
    /// distribution (nonnegative entries summing exactly to one).
    pub fn check(&self, game: &GameTree) -> Result<(), GameError> {
        if self.probs.len() != game.num_infosets() {
            return Err(GameError::ProfileShape(format!(
                "{} local strategies for {} information sets",
                self.probs.len(),
                game.num_infosets()
            )));
        }
        for (h, local) in game.infosets().iter().zip(&self.probs) {
            if local.len() != h.num_actions() {
                return Err(GameError::ProfileShape(format!(
                    "{} has {} actions but {} probabilities",
                    h.name,
                    h.num_actions(),
                    local.len()
                )));
            }
            let mut sum = T::zero();
            for p in local {
                if *p < T::zero() {
                    return Err(GameError::ProfileShape(format!("negative probability at {}", h.name)));
                }
                sum = sum + p.clone();
            }
            if sum != T::one() {
                return Err(GameError::ProfileShape(format!(
                    "local strategy at {} does not sum to one",
                    h.name
                )));
            }
        }
        Ok(())
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> BehaviorProfile<U> {
        BehaviorProfile {
            probs: self
                .probs
                .iter()
                .map(|local| local.iter().map(&mut f).collect())
                .collect(),
        }
    }
}

fn edge_prob<T: Scalar>(game: &GameTree, profile: &BehaviorProfile<T>, parent: NodeId, edge: usize) -> T {
    match game.node(parent) {
        Node::Chance { outcomes, .. } => T::from_rational(&outcomes[edge].prob),
        Node::Decision { infoset, .. } => profile.get(*infoset, edge).clone(),
        Node::Leaf { .. } => unreachable!("leaves have no children"),
    }
}

/// `ρ_b(v)`: chance and behaviour probabilities multiplied along the root path.
pub fn reach_probability<T: Scalar>(game: &GameTree, profile: &BehaviorProfile<T>, node: NodeId) -> T {
    game.path_to(node)
        .into_iter()
        .fold(T::one(), |acc, (p, e)| acc * edge_prob(game, profile, p, e))
}

/// Reach probabilities of every node in one pass. When `exclude` names a
/// player, that player's behaviour probabilities are treated as one.
pub fn reach_all<T: Scalar>(game: &GameTree, profile: &BehaviorProfile<T>, exclude: Option<usize>) -> Vec<T> {
    let mut reach = vec![T::zero(); game.nodes().len()];
    reach[0] = T::one();
    // preorder numbering: parents precede children
    for id in 1..game.nodes().len() {
        let (p, e) = game.parent(NodeId(id)).expect("non-root");
        let factor = match game.node(p) {
            Node::Decision { infoset, .. } if Some(game.infoset(*infoset).owner) == exclude => T::one(),
            _ => edge_prob(game, profile, p, e),
        };
        reach[id] = reach[p.0].clone() * factor;
    }
    reach
}

/// `ρ_b(h) = Σ_{v∈h} ρ_b(v)`.
pub fn infoset_reach<T: Scalar>(game: &GameTree, profile: &BehaviorProfile<T>, h: InfosetId) -> T {
    game.infoset(h)
        .members
        .iter()
        .fold(T::zero(), |acc, &v| acc + reach_probability(game, profile, v))
}

/// `U_i(b) = Σ_z u_i(z) ρ_b(z)`.
pub fn expected_payoff<T: Scalar>(game: &GameTree, profile: &BehaviorProfile<T>, player: usize) -> T {
    let reach = reach_all(game, profile, None);
    game.leaves().iter().fold(T::zero(), |acc, &z| {
        acc + T::from_rational(game.payoff(z, player)) * reach[z.0].clone()
    })
}

/// `U_ih(b)`: expected payoff of `player` conditional on reaching `h`.
pub fn conditional_payoff<T: Scalar>(
    game: &GameTree,
    profile: &BehaviorProfile<T>,
    player: usize,
    h: InfosetId,
) -> Result<T, GameError> {
    let reach = reach_all(game, profile, None);
    let total = game
        .infoset(h)
        .members
        .iter()
        .fold(T::zero(), |acc, v| acc + reach[v.0].clone());
    if total.is_zero() {
        return Err(GameError::ConditionalOnNullSet {
            infoset: game.infoset(h).name.clone(),
        });
    }
    let mut acc = T::zero();
    for &v in &game.infoset(h).members {
        let mut stack = vec![v];
        while let Some(n) = stack.pop() {
            match game.node(n) {
                Node::Leaf { payoffs } => {
                    acc = acc + T::from_rational(&payoffs[player]) * reach[n.0].clone();
                }
                _ => stack.extend(game.children(n)),
            }
        }
    }
    Ok(acc / total)
}

/// Target of [`own_realization_weight`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealizationTarget {
    Infoset(InfosetId),
    Action(InfosetId, usize),
}

/// `ρ_{b_i}(h)` or `ρ_{b_i}(c)`: product of the owner's own behaviour
/// probabilities along the (unique) own history.
pub fn own_realization_weight<T: Scalar>(
    game: &GameTree,
    profile: &BehaviorProfile<T>,
    target: RealizationTarget,
) -> T {
    let (h, action) = match target {
        RealizationTarget::Infoset(h) => (h, None),
        RealizationTarget::Action(h, a) => (h, Some(a)),
    };
    let base = game
        .infoset(h)
        .history
        .iter()
        .fold(T::one(), |acc, &(g, a)| acc * profile.get(g, a).clone());
    match action {
        Some(a) => base * profile.get(h, a).clone(),
        None => base,
    }
}

/// Bucketed best-response evaluation for one player: leaf mass is
/// accumulated per own sequence, then own information sets are maximised
/// bottom-up. This is exact for perfect-recall games, where each own
/// information set hangs below a unique own sequence.
struct OwnTree<'g, T> {
    game: &'g GameTree,
    player: usize,
    local: Vec<T>,
    children: Vec<Vec<InfosetId>>,
    registered: Vec<bool>,
}

impl<'g, T: Scalar> OwnTree<'g, T> {
    fn new(game: &'g GameTree, player: usize) -> Self {
        OwnTree {
            game,
            player,
            local: vec![T::zero(); game.num_action_slots() + 1],
            children: vec![Vec::new(); game.num_action_slots() + 1],
            registered: vec![false; game.num_infosets()],
        }
    }

    fn bucket(&self, h: InfosetId, a: usize) -> usize {
        1 + self.game.action_slot(h, a)
    }

    fn explore(&mut self, profile: &BehaviorProfile<T>, start: NodeId, weight: T, bucket: usize) {
        let mut stack = vec![(start, weight, bucket)];
        while let Some((node, w, b)) = stack.pop() {
            if w.is_zero() {
                continue;
            }
            match self.game.node(node) {
                Node::Leaf { payoffs } => {
                    let add = w * T::from_rational(&payoffs[self.player]);
                    self.local[b] = self.local[b].clone() + add;
                }
                Node::Chance { outcomes, .. } => {
                    for o in outcomes {
                        stack.push((o.child, w.clone() * T::from_rational(&o.prob), b));
                    }
                }
                Node::Decision { infoset, children } => {
                    let h = *infoset;
                    if self.game.infoset(h).owner == self.player {
                        if !self.registered[h.0] {
                            self.registered[h.0] = true;
                            self.children[b].push(h);
                        }
                        for (a, &c) in children.iter().enumerate() {
                            stack.push((c, w.clone(), self.bucket(h, a)));
                        }
                    } else {
                        for (a, &c) in children.iter().enumerate() {
                            stack.push((c, w.clone() * profile.get(h, a).clone(), b));
                        }
                    }
                }
            }
        }
    }

    fn value(&self, bucket: usize) -> T {
        let mut v = self.local[bucket].clone();
        for &h in &self.children[bucket] {
            v = v + self.infoset_value(h);
        }
        v
    }

    fn infoset_value(&self, h: InfosetId) -> T {
        (0..self.game.infoset(h).num_actions())
            .map(|a| self.value(self.bucket(h, a)))
            .reduce(T::max_of)
            .expect("nonempty action set")
    }
}

/// `K_i^{h,c}(b)`: the owner's best conditional payoff at `h` when
/// committing to `c` and optimising all later own play.
pub fn k_value<T: Scalar>(
    game: &GameTree,
    profile: &BehaviorProfile<T>,
    h: InfosetId,
    action: usize,
) -> Result<T, GameError> {
    profile.require_fully_mixed(game)?;
    let info = game.infoset(h);
    if action >= info.num_actions() {
        return Err(GameError::ActionNotInInfoset {
            infoset: info.name.clone(),
            action: action.to_string(),
        });
    }
    let owner = info.owner;
    let others = reach_all(game, profile, Some(owner));
    let mut tree = OwnTree::new(game, owner);
    let mut mass = T::zero();
    for &v in &info.members {
        let w = others[v.0].clone();
        mass = mass + w.clone();
        let child = game.children(v)[action];
        tree.explore(profile, child, w, 0);
    }
    if mass.is_zero() {
        return Err(GameError::NotFullyMixed {
            infoset: info.name.clone(),
        });
    }
    Ok(tree.value(0) / mass)
}

/// All K values of one information set, in action order.
pub fn k_values<T: Scalar>(game: &GameTree, profile: &BehaviorProfile<T>, h: InfosetId) -> Result<Vec<T>, GameError> {
    (0..game.infoset(h).num_actions())
        .map(|a| k_value(game, profile, h, a))
        .collect()
}

/// Best payoff `player` can reach by deviating to any behaviour strategy
/// while the others keep playing `profile`.
pub fn best_response_value<T: Scalar>(game: &GameTree, profile: &BehaviorProfile<T>, player: usize) -> T {
    let mut tree = OwnTree::new(game, player);
    tree.explore(profile, game.root(), T::one(), 0);
    tree.value(0)
}

/// `b ⧹_h b′ / c`: keep `profile` at information sets not weakly following
/// `h`, use `continuation` at those strictly following it, and play `c`
/// with certainty at `h`.
pub fn override_profile<T: Scalar>(
    game: &GameTree,
    profile: &BehaviorProfile<T>,
    h: InfosetId,
    continuation: &BehaviorProfile<T>,
    action: usize,
) -> Result<BehaviorProfile<T>, GameError> {
    let info = game.infoset(h);
    if action >= info.num_actions() {
        return Err(GameError::ActionNotInInfoset {
            infoset: info.name.clone(),
            action: action.to_string(),
        });
    }
    let mut out = profile.clone();
    for (g, other) in game.infosets().iter().enumerate() {
        let gid = InfosetId(g);
        if other.owner != info.owner || !game.weakly_follows(gid, h) {
            continue;
        }
        out.probs[g] = if gid == h {
            (0..info.num_actions())
                .map(|a| if a == action { T::one() } else { T::zero() })
                .collect()
        } else {
            continuation.probs[g].clone()
        };
    }
    Ok(out)
}
