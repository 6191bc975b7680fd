//! Sequences, realization plans, sequence-form payoff matrices and the
//! perturbed strategy polytopes whose per-infoset blocks are
//! ε-permutahedra.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::eps_field::EpsPoly;
use crate::game_model::{GameTree, InfosetId, Node, NodeId};
use crate::permutahedron::{
    permutahedron_block, ConstraintBlock, LinearConstraint, Mass, PermError, Sense, VarId, VarPool,
    DEFAULT_FACET_THRESHOLD,
};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("the sequence form needs exactly two players, found {0}")]
    WrongPlayerCount(usize),
    #[error("realization weight of the parent sequence of {infoset} is zero")]
    ZeroParentWeight { infoset: String },
    #[error("plan has {found} entries but the player has {expected} sequences")]
    PlanLength { expected: usize, found: usize },
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Sequence 0 is the empty sequence; every other sequence is one
/// (information set, action) pair of the player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceIndex {
    pub player: usize,
    sequences: Vec<Option<(InfosetId, usize)>>,
    infosets: Vec<InfosetId>,
    first_seq: BTreeMap<InfosetId, usize>,
    parent: BTreeMap<InfosetId, usize>,
    k: BTreeMap<InfosetId, usize>,
}

impl SequenceIndex {
    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn infosets(&self) -> &[InfosetId] {
        &self.infosets
    }

    /// `None` for the empty sequence.
    pub fn sequence(&self, s: usize) -> Option<(InfosetId, usize)> {
        self.sequences[s]
    }

    pub fn sequence_of(&self, h: InfosetId, action: usize) -> usize {
        self.first_seq[&h] + action
    }

    /// Sequences of the actions at `h`, in action order.
    pub fn action_sequences(&self, game: &GameTree, h: InfosetId) -> Vec<usize> {
        let first = self.first_seq[&h];
        (first..first + game.infoset(h).num_actions()).collect()
    }

    /// The owner's last sequence before `h` (0 when `h` is a first move).
    pub fn parent_of(&self, h: InfosetId) -> usize {
        self.parent[&h]
    }

    /// `k_h`: total action count of the own-history chain to `h`.
    pub fn k_of(&self, h: InfosetId) -> usize {
        self.k[&h]
    }

    pub fn label(&self, game: &GameTree, s: usize) -> String {
        match self.sequences[s] {
            None => "∅".into(),
            Some((h, a)) => {
                let info = game.infoset(h);
                format!("{}:{}", info.name, info.actions[a])
            }
        }
    }
}

pub fn build_sequences(game: &GameTree, player: usize) -> SequenceIndex {
    let mut idx = SequenceIndex {
        player,
        sequences: vec![None],
        infosets: game.player_infosets(player).to_vec(),
        first_seq: BTreeMap::new(),
        parent: BTreeMap::new(),
        k: BTreeMap::new(),
    };
    // canonical order puts every infoset after its own-history predecessors
    for &h in game.player_infosets(player) {
        let info = game.infoset(h);
        idx.first_seq.insert(h, idx.sequences.len());
        idx.sequences.extend((0..info.num_actions()).map(|a| Some((h, a))));
        let parent = info.history.last().map_or(0, |&(g, a)| idx.sequence_of(g, a));
        idx.parent.insert(h, parent);
        let k = info.history.iter().map(|&(g, _)| game.infoset(g).num_actions()).sum();
        idx.k.insert(h, k);
    }
    idx
}

/// Sequence pairs with nonzero entries, keyed by `(row, column)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: BTreeMap<(usize, usize), Rational>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&mut self, r: usize, c: usize, v: Rational) {
        let e = self.entries.entry((r, c)).or_insert_with(Rational::zero);
        *e += v;
        if e.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    /// `xᵀ M y`.
    pub fn bilinear<T: Scalar>(&self, x: &[T], y: &[T]) -> T {
        self.entries.iter().fold(T::zero(), |acc, ((r, c), v)| {
            acc + T::from_rational(v) * x[*r].clone() * y[*c].clone()
        })
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(r, c), v)| ((c, r), v.clone())).collect(),
        }
    }
}

/// For every leaf: its chance weight and each player's last own sequence.
pub fn leaf_sequences(game: &GameTree, indices: &[SequenceIndex]) -> Vec<(NodeId, Rational, Vec<usize>)> {
    let mut out = Vec::new();
    let mut stack = vec![(game.root(), Rational::one(), vec![0usize; indices.len()])];
    while let Some((node, w, seqs)) = stack.pop() {
        match game.node(node) {
            Node::Leaf { .. } => out.push((node, w, seqs)),
            Node::Chance { outcomes, .. } => {
                for o in outcomes {
                    stack.push((o.child, &w * &o.prob, seqs.clone()));
                }
            }
            Node::Decision { infoset, children } => {
                let owner = game.infoset(*infoset).owner;
                for (a, &c) in children.iter().enumerate() {
                    let mut s = seqs.clone();
                    if let Some(idx) = indices.iter().position(|i| i.player == owner) {
                        s[idx] = indices[idx].sequence_of(*infoset, a);
                    }
                    stack.push((c, w.clone(), s));
                }
            }
        }
    }
    out.sort_by_key(|(z, _, _)| *z);
    out
}

/// Sequence-form payoff matrices `(A, B)` of a two-player game.
pub fn payoff_matrices(game: &GameTree) -> Result<(SparseMatrix, SparseMatrix), SequenceError> {
    if game.num_players() != 2 {
        return Err(SequenceError::WrongPlayerCount(game.num_players()));
    }
    let idx = [build_sequences(game, 0), build_sequences(game, 1)];
    let mut a = SparseMatrix::new(idx[0].len(), idx[1].len());
    let mut b = a.clone();
    for (z, w, s) in leaf_sequences(game, &idx) {
        a.add(s[0], s[1], &w * game.payoff(z, 0));
        b.add(s[0], s[1], &w * game.payoff(z, 1));
    }
    Ok((a, b))
}

/// Realization plan of one player's part of a behaviour profile.
pub fn behavior_to_realization<T: Scalar>(
    idx: &SequenceIndex,
    local: impl Fn(InfosetId, usize) -> T,
) -> Vec<T> {
    let mut plan = vec![T::zero(); idx.len()];
    plan[0] = T::one();
    for s in 1..idx.len() {
        let (h, a) = idx.sequence(s).expect("non-empty sequence");
        plan[s] = plan[idx.parent_of(h)].clone() * local(h, a);
    }
    plan
}

/// Local strategies `x_c / x_parent` for every information set of the player.
pub fn realization_to_behavior<T: Scalar>(
    game: &GameTree,
    idx: &SequenceIndex,
    plan: &[T],
) -> Result<Vec<(InfosetId, Vec<T>)>, SequenceError> {
    if plan.len() < idx.len() {
        return Err(SequenceError::PlanLength {
            expected: idx.len(),
            found: plan.len(),
        });
    }
    idx.infosets()
        .iter()
        .map(|&h| {
            let parent = &plan[idx.parent_of(h)];
            if parent.is_zero() {
                return Err(SequenceError::ZeroParentWeight {
                    infoset: game.infoset(h).name.clone(),
                });
            }
            let local = idx
                .action_sequences(game, h)
                .into_iter()
                .map(|s| plan[s].clone() / parent.clone())
                .collect();
            Ok((h, local))
        })
        .collect()
}

/// The permutahedron parameters of one information set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfosetBlock {
    pub infoset: InfosetId,
    pub mass: Mass,
    pub k: usize,
    pub m: usize,
    pub block: ConstraintBlock,
}

/// One player's strategy polytope in Γ_ε. Variables are the sequences
/// (same ids) followed by comparator wire variables.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedPolytope {
    pub index: SequenceIndex,
    pub num_vars: usize,
    pub blocks: Vec<InfosetBlock>,
}

impl PerturbedPolytope {
    /// `x_∅ = 1`.
    pub fn root_pin(&self) -> LinearConstraint {
        LinearConstraint::new(vec![(0, Rational::one())], Sense::Eq, EpsPoly::one())
    }

    /// The root pin followed by every block's constraints.
    pub fn constraints(&self) -> Vec<LinearConstraint> {
        let mut out = vec![self.root_pin()];
        for b in &self.blocks {
            out.extend(b.block.constraints.iter().cloned());
        }
        out
    }

    pub fn num_sequences(&self) -> usize {
        self.index.len()
    }

    /// Completes a vector of sequence values with exact wire values.
    pub fn with_wires<T: Scalar>(&self, sequences: &[T]) -> Vec<T> {
        let mut values = sequences.to_vec();
        values.resize(self.num_vars, T::zero());
        for b in &self.blocks {
            b.block.fill_wires(&mut values);
        }
        values
    }

    /// Exact feasibility at `ε₀` of a full variable vector (nonnegativity included).
    pub fn contains(&self, values: &[Rational], eps: &Rational) -> bool {
        values.len() == self.num_vars
            && values.iter().all(|v| *v >= Rational::zero())
            && self.constraints().iter().all(|c| c.holds_at(values, eps))
    }

    pub fn contains_symbolically(&self, values: &[EpsPoly]) -> bool {
        values.len() == self.num_vars
            && values.iter().all(|v| !v.is_negative())
            && self.constraints().iter().all(|c| c.holds_symbolically(values))
    }
}

pub fn perturbed_constraints(game: &GameTree, player: usize) -> Result<PerturbedPolytope, SequenceError> {
    perturbed_constraints_with(game, player, DEFAULT_FACET_THRESHOLD)
}

/// Like [`perturbed_constraints`], with infosets of more than
/// `facet_threshold` actions realized by a comparator network.
pub fn perturbed_constraints_with(
    game: &GameTree,
    player: usize,
    facet_threshold: usize,
) -> Result<PerturbedPolytope, SequenceError> {
    let index = build_sequences(game, player);
    let mut pool = VarPool::starting_at(index.len());
    let mut blocks = Vec::new();
    for &h in index.infosets() {
        let primary: Vec<VarId> = index.action_sequences(game, h);
        let mass = Mass::Variable(index.parent_of(h));
        let k = index.k_of(h);
        let block = permutahedron_block(&mass, k, &primary, facet_threshold, &mut pool)?;
        blocks.push(InfosetBlock {
            infoset: h,
            mass,
            k,
            m: primary.len(),
            block,
        });
    }
    Ok(PerturbedPolytope {
        num_vars: pool.len(),
        index,
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game_model::{expected_payoff, BehaviorProfile, GameBuilder};
    use crate::permutahedron::{base_vector, facet_bound};
    use crate::random_games::{random_game, random_mixed_profile, GameShape};
    use crate::scalar::{int, rat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn matching_pennies() -> GameTree {
        let mut g = GameBuilder::new(2);
        let l: Vec<_> = [1, -1, -1, 1].iter().map(|&u| g.leaf(vec![int(u), int(-u)])).collect();
        let h = g.decision_seq(1, "P2", &["h", "t"], vec![l[0], l[1]]);
        let t = g.decision_seq(1, "P2", &["h", "t"], vec![l[2], l[3]]);
        let root = g.decision_seq(0, "P1", &["H", "T"], vec![h, t]);
        g.build(root).unwrap()
    }

    /// Root infoset with three actions; action 0 leads to a binary infoset.
    fn nested() -> GameTree {
        let mut g = GameBuilder::new(2);
        let a = g.leaf(vec![int(1), int(0)]);
        let b = g.leaf(vec![int(2), int(0)]);
        let inner = g.decision_seq(0, "second", &["x", "y"], vec![a, b]);
        let c = g.leaf(vec![int(0), int(0)]);
        let d = g.leaf(vec![int(0), int(0)]);
        let root = g.decision_seq(0, "first", &["c1", "c2", "c3"], vec![inner, c, d]);
        g.build(root).unwrap()
    }

    #[test]
    fn sequence_counts() {
        let mp = matching_pennies();
        assert_eq!(build_sequences(&mp, 0).len(), 3);
        let n = nested();
        assert_eq!(build_sequences(&n, 0).len(), 6);
        assert_eq!(build_sequences(&n, 1).len(), 1);

        let mut g = GameBuilder::new(1);
        let l: Vec<_> = (0..3).map(|i| g.leaf(vec![int(i)])).collect();
        let inner = g.decision_seq(0, "b", &["x", "y"], vec![l[0], l[1]]);
        let root = g.decision_seq(0, "a", &["p", "q"], vec![inner, l[2]]);
        assert_eq!(build_sequences(&g.build(root).unwrap(), 0).len(), 5);
    }

    #[test]
    fn matching_pennies_matrix() {
        let (a, b) = payoff_matrices(&matching_pennies()).unwrap();
        assert_eq!(a.entries.len(), 4);
        assert_eq!(a.get(1, 1), int(1));
        assert_eq!(a.get(1, 2), int(-1));
        assert_eq!(a.get(2, 1), int(-1));
        assert_eq!(a.get(2, 2), int(1));
        assert_eq!(b.get(1, 1), int(-1));
    }

    #[test]
    fn chance_weight_in_matrix() {
        let mut g = GameBuilder::new(2);
        let z = g.leaf(vec![int(6), int(0)]);
        let o = g.leaf(vec![int(0), int(0)]);
        let c = g.chance(None, vec![("l", rat(1, 3), z), ("r", rat(2, 3), o)]);
        let root = g.decision_seq(0, "h", &["only"], vec![c]);
        let (a, _) = payoff_matrices(&g.build(root).unwrap()).unwrap();
        assert_eq!(a.get(1, 0), int(2));
    }

    #[test]
    fn wrong_player_count() {
        let mut g = GameBuilder::new(1);
        let z = g.leaf(vec![int(1)]);
        assert_eq!(
            payoff_matrices(&g.build(z).unwrap()),
            Err(SequenceError::WrongPlayerCount(1))
        );
    }

    #[test]
    fn block_specs() {
        let poly = perturbed_constraints(&nested(), 0).unwrap();
        let first = &poly.blocks[0];
        assert_eq!((first.mass.clone(), first.k, first.m), (Mass::Variable(0), 0, 3));
        let second = &poly.blocks[1];
        assert_eq!((second.mass.clone(), second.k, second.m), (Mass::Variable(1), 3, 2));
        let one = int(1);
        assert_eq!(
            second.block.constraints,
            vec![
                LinearConstraint::new(
                    vec![(4, one.clone()), (5, one.clone()), (1, -one.clone())],
                    Sense::Eq,
                    EpsPoly::zero()
                ),
                LinearConstraint::new(vec![(4, one.clone())], Sense::Ge, EpsPoly::eps_pow(4)),
                LinearConstraint::new(vec![(5, one)], Sense::Ge, EpsPoly::eps_pow(4)),
            ]
        );
    }

    #[test]
    fn plan_behavior_conversions() {
        let mut g = GameBuilder::new(1);
        let l: Vec<_> = (0..2).map(|i| g.leaf(vec![int(i)])).collect();
        let root = g.decision_seq(0, "h", &["a", "b"], l);
        let game = g.build(root).unwrap();
        let idx = build_sequences(&game, 0);
        let b = [rat(2, 3), rat(1, 3)];
        assert_eq!(
            behavior_to_realization(&idx, |_, a| b[a].clone()),
            vec![int(1), rat(2, 3), rat(1, 3)]
        );
        let plan = vec![
            EpsPoly::one(),
            EpsPoly::one() - EpsPoly::eps_pow(1),
            EpsPoly::eps_pow(1),
        ];
        let plan: Vec<crate::EpsRat> = plan.into_iter().map(crate::EpsRat::from_poly).collect();
        let beh = realization_to_behavior(&game, &idx, &plan).unwrap();
        assert_eq!(beh[0].1, vec![plan[1].clone(), plan[2].clone()]);
        let zero = vec![int(0), int(0), int(0)];
        assert!(matches!(
            realization_to_behavior(&game, &idx, &zero),
            Err(SequenceError::ZeroParentWeight { .. })
        ));
    }

    /// A feasible plan: each block gets a random permutation of its
    /// base vector at mass `x_parent`.
    fn vertex_plan<R: Rng>(rng: &mut R, game: &GameTree, poly: &PerturbedPolytope, eps: &Rational) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); poly.num_sequences()];
        x[0] = int(1);
        for b in &poly.blocks {
            let seqs = poly.index.action_sequences(game, b.infoset);
            let parent = x[poly.index.parent_of(b.infoset)].clone();
            let mut p = base_vector(&parent, b.k, b.m, eps).unwrap();
            for i in (1..p.len()).rev() {
                p.swap(i, rng.gen_range(0..=i));
            }
            for (s, v) in seqs.into_iter().zip(p) {
                x[s] = v;
            }
        }
        poly.with_wires(&x)
    }

    #[test]
    fn feasible_points_conserve_and_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let eps = rat(1, 5);
        for _ in 0..30 {
            let game = random_game(&mut rng, &GameShape::two_player_small());
            for player in 0..2 {
                for threshold in [8, 1] {
                    let poly = perturbed_constraints_with(&game, player, threshold).unwrap();
                    let x = vertex_plan(&mut rng, &game, &poly, &eps);
                    assert!(poly.contains(&x, &eps));
                    for b in &poly.blocks {
                        let seqs = poly.index.action_sequences(&game, b.infoset);
                        let total: Rational = seqs.iter().map(|&s| x[s].clone()).sum();
                        assert_eq!(total, x[poly.index.parent_of(b.infoset)]);
                        let floor = crate::scalar::rat_pow(&eps, (b.k + b.m - 1) as u32);
                        assert!(seqs.iter().all(|&s| x[s] >= floor));
                        if b.m > 1 {
                            assert_eq!(facet_bound(b.k, b.m, 1), EpsPoly::eps_pow(b.k + b.m - 1));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bilinear_identity_and_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let game = random_game(&mut rng, &GameShape::two_player_small());
            let (a, b) = payoff_matrices(&game).unwrap();
            let idx = [build_sequences(&game, 0), build_sequences(&game, 1)];
            for _ in 0..20 {
                let prof: BehaviorProfile<Rational> = random_mixed_profile(&mut rng, &game);
                let x = behavior_to_realization(&idx[0], |h, c| prof.get(h, c).clone());
                let y = behavior_to_realization(&idx[1], |h, c| prof.get(h, c).clone());
                assert_eq!(a.bilinear(&x, &y), expected_payoff(&game, &prof, 0));
                assert_eq!(b.bilinear(&x, &y), expected_payoff(&game, &prof, 1));
                for (p, plan) in [(0, &x), (1, &y)] {
                    for (h, local) in realization_to_behavior(&game, &idx[p], plan).unwrap() {
                        assert_eq!(local, prof.local(h));
                    }
                }
            }
        }
    }
}
