use num_traits::{One, Zero};

use super::lemke::{lemke, LcpInstance, VarTag};
use super::simplex::{simplex, LpInstance};
use super::SolverError;
use crate::eps_field::EpsPoly;
use crate::game_model::GameTree;
use crate::permutahedron::{LinearConstraint, Sense, VarId};
use crate::scalar::Rational;
use crate::sequence_form::{
    build_sequences, leaf_sequences, payoff_matrices, perturbed_constraints_with, PerturbedPolytope,
    SequenceError, SparseMatrix,
};

/// A polytope rewritten as `G x ≥ g`: equalities become two opposite rows.
#[derive(Debug, Clone, PartialEq)]
pub struct GeRows {
    pub rows: Vec<Vec<(VarId, Rational)>>,
    pub rhs: Vec<EpsPoly>,
    /// Source constraint index; `Some(positive)` for split equalities.
    pub origin: Vec<(usize, Option<bool>)>,
}

pub fn ge_rows(constraints: &[LinearConstraint]) -> GeRows {
    let mut out = GeRows {
        rows: Vec::new(),
        rhs: Vec::new(),
        origin: Vec::new(),
    };
    let negate = |terms: &[(VarId, Rational)]| terms.iter().map(|(v, c)| (*v, -c)).collect::<Vec<_>>();
    for (i, c) in constraints.iter().enumerate() {
        match c.sense {
            Sense::Ge => {
                out.rows.push(c.terms.clone());
                out.rhs.push(c.rhs.clone());
                out.origin.push((i, None));
            }
            Sense::Le => {
                out.rows.push(negate(&c.terms));
                out.rhs.push(-c.rhs.clone());
                out.origin.push((i, None));
            }
            Sense::Eq => {
                out.rows.push(c.terms.clone());
                out.rhs.push(c.rhs.clone());
                out.origin.push((i, Some(true)));
                out.rows.push(negate(&c.terms));
                out.rhs.push(-c.rhs.clone());
                out.origin.push((i, Some(false)));
            }
        }
    }
    out
}

/// Cost matrices `C_i = Σ_z chance(z)·(max u_i + 1 − u_i(z))` over sequence
/// pairs. Entries are positive wherever a leaf sits, and because realization
/// plans spread total chance mass one over the leaves, minimizing `C_i` is
/// maximizing `u_i`.
pub fn cost_matrices(game: &GameTree) -> Result<[SparseMatrix; 2], SequenceError> {
    payoff_matrices(game)?;
    let idx = [build_sequences(game, 0), build_sequences(game, 1)];
    let mut costs = [
        SparseMatrix::new(idx[0].len(), idx[1].len()),
        SparseMatrix::new(idx[0].len(), idx[1].len()),
    ];
    for (p, cost) in costs.iter_mut().enumerate() {
        let top = game
            .leaves()
            .iter()
            .map(|&z| game.payoff(z, p).clone())
            .max()
            .expect("a game has leaves")
            + Rational::one();
        for (z, w, s) in leaf_sequences(game, &idx) {
            cost.add(s[0], s[1], &w * (&top - game.payoff(z, p)));
        }
    }
    Ok(costs)
}

/// The KKT system of both players' best-response LPs
///
/// ```text
///   min xᵀC₁y  s.t. G₁x ≥ g₁, x ≥ 0      min xᵀC₂y  s.t. G₂y ≥ g₂, y ≥ 0
/// ```
///
/// as one LCP in `z = (x, y, λ₁, λ₂)`:
///
/// ```text
///   w_x = C₁y − G₁ᵀλ₁,  w_y = C₂ᵀx − G₂ᵀλ₂,  w_λ₁ = G₁x − g₁,  w_λ₂ = G₂y − g₂
/// ```
pub fn assemble_lcp(polys: &[PerturbedPolytope; 2], costs: &[SparseMatrix; 2]) -> LcpInstance {
    let ge = [ge_rows(&polys[0].constraints()), ge_rows(&polys[1].constraints())];
    let n = [polys[0].num_vars, polys[1].num_vars];
    let r = [ge[0].rows.len(), ge[1].rows.len()];
    let var_off = [0, n[0]];
    let dual_off = [n[0] + n[1], n[0] + n[1] + r[0]];
    let dim = dual_off[1] + r[1];
    let mut m = vec![vec![Rational::zero(); dim]; dim];
    let mut q = vec![EpsPoly::zero(); dim];
    let mut tags = Vec::with_capacity(dim);

    for ((s1, s2), c) in &costs[0].entries {
        m[var_off[0] + s1][var_off[1] + s2] += c;
    }
    for ((s1, s2), c) in &costs[1].entries {
        m[var_off[1] + s2][var_off[0] + s1] += c;
    }
    for p in 0..2 {
        for (row, (terms, rhs)) in ge[p].rows.iter().zip(&ge[p].rhs).enumerate() {
            let lam = dual_off[p] + row;
            for (v, c) in terms {
                m[var_off[p] + v][lam] -= c;
                m[lam][var_off[p] + v] += c;
            }
            q[lam] = -rhs.clone();
        }
    }
    for p in 0..2 {
        let seqs = polys[p].num_sequences();
        tags.extend((0..n[p]).map(|var| {
            if var < seqs {
                VarTag::Plan { player: p, var }
            } else {
                VarTag::Wire { player: p, var }
            }
        }));
    }
    for (p, rows) in ge.iter().enumerate() {
        tags.extend(rows.origin.iter().map(|&(row, split)| match split {
            None => VarTag::SlackDual { player: p, row },
            Some(positive) => VarTag::EqualityDual { player: p, row, positive },
        }));
    }
    LcpInstance { m, q, tags }
}

/// Symbolic equilibrium plans of Γ_ε found by Lemke's algorithm.
#[derive(Debug, Clone)]
pub struct TwoPlayerSolution {
    pub polytopes: [PerturbedPolytope; 2],
    /// Full variable vectors (sequences, then wires).
    pub plans: [Vec<EpsPoly>; 2],
    pub lcp: LcpInstance,
    pub z: Vec<EpsPoly>,
    pub pivots: usize,
}

pub fn solve_two_player(
    game: &GameTree,
    facet_threshold: usize,
    max_pivots: usize,
) -> Result<TwoPlayerSolution, SolverError> {
    let costs = cost_matrices(game)?;
    let polytopes = [
        perturbed_constraints_with(game, 0, facet_threshold)?,
        perturbed_constraints_with(game, 1, facet_threshold)?,
    ];
    let lcp = assemble_lcp(&polytopes, &costs);
    let d = vec![Rational::one(); lcp.dim()];
    let sol = lemke(&lcp, &d, max_pivots)?;
    let n0 = polytopes[0].num_vars;
    let n1 = polytopes[1].num_vars;
    let plans = [sol.z[..n0].to_vec(), sol.z[n0..n0 + n1].to_vec()];
    Ok(TwoPlayerSolution {
        polytopes,
        plans,
        lcp,
        z: sol.z,
        pivots: sol.pivots,
    })
}

/// Maximin plans of the perturbed zero-sum game and its value.
#[derive(Debug, Clone)]
pub struct ZeroSumSolution {
    pub polytopes: [PerturbedPolytope; 2],
    pub plans: [Vec<EpsPoly>; 2],
    /// Player 1's value of Γ_ε.
    pub value: EpsPoly,
    pub pivots: usize,
    pub objective_trace: Vec<EpsPoly>,
}

/// `max g₂ᵀλ` over `x ∈ Q₁(ε)`, `λ ≥ 0` with `Aᵀx − G₂ᵀλ ≥ 0`: player 2's
/// inner minimization replaced by its dual. Player 2's plan is read off
/// the multipliers of the `Aᵀx − G₂ᵀλ ≥ 0` rows.
pub fn simplex_zero_sum(
    game: &GameTree,
    facet_threshold: usize,
    max_pivots: usize,
) -> Result<ZeroSumSolution, SolverError> {
    if !game.is_zero_sum() {
        return Err(SolverError::NotZeroSum);
    }
    let (a, _) = payoff_matrices(game)?;
    let polytopes = [
        perturbed_constraints_with(game, 0, facet_threshold)?,
        perturbed_constraints_with(game, 1, facet_threshold)?,
    ];
    let n1 = polytopes[0].num_vars;
    let n2 = polytopes[1].num_vars;
    let g2 = ge_rows(&polytopes[1].constraints());
    let lam = |r: usize| n1 + r;

    let mut constraints = polytopes[0].constraints();
    let first_dual_row = constraints.len();
    let mut columns: Vec<Vec<(VarId, Rational)>> = vec![Vec::new(); n2];
    for ((s1, s2), v) in &a.entries {
        columns[*s2].push((*s1, v.clone()));
    }
    for (r, terms) in g2.rows.iter().enumerate() {
        for (v, c) in terms {
            columns[*v].push((lam(r), -c));
        }
    }
    for terms in columns {
        constraints.push(LinearConstraint::new(terms, Sense::Ge, EpsPoly::zero()));
    }
    let mut objective = vec![EpsPoly::zero(); n1];
    objective.extend(g2.rhs.iter().cloned());
    let lp = LpInstance {
        num_vars: n1 + g2.rows.len(),
        objective,
        constraints,
    };
    let sol = simplex(&lp, max_pivots)?;
    let x = sol.x[..n1].to_vec();
    let y: Vec<EpsPoly> = sol.duals[first_dual_row..].iter().map(|d| -d.clone()).collect();
    debug_assert!(y.iter().all(|v| !v.is_negative()));
    Ok(ZeroSumSolution {
        polytopes,
        plans: [x, y],
        value: sol.objective,
        pivots: sol.pivots,
        objective_trace: sol.objective_trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game_model::GameBuilder;
    use crate::permutahedron::DEFAULT_FACET_THRESHOLD;
    use crate::scalar::{int, rat};

    fn simultaneous(rows: &[&[(i64, i64)]]) -> GameTree {
        let mut g = GameBuilder::new(2);
        let cols = rows[0].len();
        let labels2: Vec<String> = (0..cols).map(|j| format!("c{j}")).collect();
        let refs2: Vec<&str> = labels2.iter().map(String::as_str).collect();
        let labels1: Vec<String> = (0..rows.len()).map(|i| format!("r{i}")).collect();
        let refs1: Vec<&str> = labels1.iter().map(String::as_str).collect();
        let subtrees = rows
            .iter()
            .map(|row| {
                let leaves = row.iter().map(|&(u, v)| g.leaf(vec![int(u), int(v)])).collect();
                g.decision_seq(1, "col", &refs2, leaves)
            })
            .collect();
        let root = g.decision_seq(0, "row", &refs1, subtrees);
        g.build(root).unwrap()
    }

    #[test]
    fn lcp_dimension_matches_hand_count() {
        // player 1: root infoset of 2 actions followed by a second binary infoset
        let mut g = GameBuilder::new(2);
        let l: Vec<_> = (0..5).map(|i| g.leaf(vec![int(i), int(-i)])).collect();
        let inner = g.decision_seq(0, "b", &["x", "y"], vec![l[0], l[1]]);
        let p2 = g.decision_seq(1, "c", &["u", "v"], vec![l[2], l[3]]);
        let root = g.decision_seq(0, "a", &["p", "q"], vec![inner, p2]);
        let game = g.build(root).unwrap();
        let polys = [
            perturbed_constraints_with(&game, 0, DEFAULT_FACET_THRESHOLD).unwrap(),
            perturbed_constraints_with(&game, 1, DEFAULT_FACET_THRESHOLD).unwrap(),
        ];
        let lcp = assemble_lcp(&polys, &cost_matrices(&game).unwrap());
        // player 1: 5 vars, 4 inequalities, 3 equalities → 5 + 4 + 6
        // player 2: 3 vars, 2 inequalities, 2 equalities → 3 + 2 + 4
        assert_eq!(lcp.dim(), 15 + 9);
    }

    #[test]
    fn single_points_polytopes() {
        let mut g = GameBuilder::new(2);
        let z = g.leaf(vec![int(1), int(2)]);
        let a = g.decision_seq(0, "a", &["only"], vec![z]);
        let game = g.build(a).unwrap();
        let sol = solve_two_player(&game, DEFAULT_FACET_THRESHOLD, 1000).unwrap();
        assert_eq!(sol.plans[0], vec![EpsPoly::one(), EpsPoly::one()]);
        assert_eq!(sol.plans[1], vec![EpsPoly::one()]);
        assert!(sol.lcp.is_solution(&sol.z));
    }

    #[test]
    fn matching_pennies_symmetric() {
        let game = simultaneous(&[&[(1, -1), (-1, 1)], &[(-1, 1), (1, -1)]]);
        let sol = solve_two_player(&game, DEFAULT_FACET_THRESHOLD, 1000).unwrap();
        for plan in &sol.plans {
            assert_eq!(plan[1], plan[2]);
        }
        let zs = simplex_zero_sum(&game, DEFAULT_FACET_THRESHOLD, 1000).unwrap();
        assert_eq!(zs.value, EpsPoly::zero());
        assert!(zs.objective_trace.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn zero_sum_values() {
        let game = simultaneous(&[&[(2, -2), (0, 0)], &[(0, 0), (1, -1)]]);
        let zs = simplex_zero_sum(&game, DEFAULT_FACET_THRESHOLD, 1000).unwrap();
        assert_eq!(zs.value.constant_term(), rat(2, 3));
        for (p, plan) in zs.plans.iter().enumerate() {
            assert!(zs.polytopes[p].contains_symbolically(plan));
        }

        let mut g = GameBuilder::new(2);
        let z = g.leaf(vec![int(7), int(-7)]);
        let root = g.decision_seq(0, "h", &["only"], vec![z]);
        let zs = simplex_zero_sum(&g.build(root).unwrap(), DEFAULT_FACET_THRESHOLD, 100).unwrap();
        assert_eq!(zs.value, EpsPoly::from_int(7));

        let game = simultaneous(&[&[(1, 1)]]);
        assert!(matches!(
            simplex_zero_sum(&game, DEFAULT_FACET_THRESHOLD, 100),
            Err(SolverError::NotZeroSum)
        ));
    }
}
