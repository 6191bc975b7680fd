//! Test-only oracles, written against the public game API and kept
//! independent of the solver kernels they check.
#![allow(dead_code)]

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use quasiproper::eps_field::EpsPoly;
use quasiproper::game_model::{BehaviorProfile, GameTree, InfosetId, Node, NodeId};
use quasiproper::permutahedron::{ConstraintBlock, Sense};
use quasiproper::Rational;

pub fn games_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("games")
}

pub fn load(name: &str) -> GameTree {
    let path = games_dir().join(format!("{name}.qpef"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    quasiproper::game_format::parse(&text)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
        .game
}

// ---------------------------------------------------------------------------
// dense exact LP: max cᵀx, rows, x ≥ 0, Bland's rule

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

struct Dense {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    basis: Vec<usize>,
}

impl Dense {
    fn pivot(&mut self, r: usize, e: usize) {
        let p = self.a[r][e].clone();
        for v in self.a[r].iter_mut() {
            *v = &*v / &p;
        }
        self.b[r] = &self.b[r] / &p;
        let prow = self.a[r].clone();
        let pb = self.b[r].clone();
        for i in 0..self.a.len() {
            if i == r || self.a[i][e].is_zero() {
                continue;
            }
            let f = self.a[i][e].clone();
            for (v, pv) in self.a[i].iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v = &*v - &f * pv;
                }
            }
            self.b[i] = &self.b[i] - &f * &pb;
        }
        self.basis[r] = e;
    }

    /// Runs Bland's rule on cost `c` over `allowed` columns.
    fn optimize(&mut self, c: &[Rational], allowed: &[bool]) -> Result<(), ()> {
        loop {
            let n = c.len();
            let reduced = |j: usize| {
                let mut d = c[j].clone();
                for (i, &bi) in self.basis.iter().enumerate() {
                    if !self.a[i][j].is_zero() {
                        d -= &c[bi] * &self.a[i][j];
                    }
                }
                d
            };
            let Some(e) = (0..n).find(|&j| allowed[j] && !self.basis.contains(&j) && reduced(j).is_positive()) else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                if self.a[i][e].is_positive() {
                    let ratio = &self.b[i] / &self.a[i][e];
                    let take = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if take {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = best else { return Err(()) };
            self.pivot(r, e);
        }
    }
}

pub fn lp_max(c: &[Rational], rows: &[(Vec<Rational>, Rel, Rational)]) -> LpOutcome {
    let n = c.len();
    let m = rows.len();
    let mut norm = Vec::with_capacity(m);
    for (coef, rel, rhs) in rows {
        assert_eq!(coef.len(), n);
        if rhs.is_negative() {
            let rel = match rel {
                Rel::Le => Rel::Ge,
                Rel::Ge => Rel::Le,
                Rel::Eq => Rel::Eq,
            };
            norm.push((coef.iter().map(|v| -v).collect::<Vec<_>>(), rel, -rhs));
        } else {
            norm.push((coef.clone(), *rel, rhs.clone()));
        }
    }
    let slacks = norm.iter().filter(|r| r.1 != Rel::Eq).count();
    let arts = norm.iter().filter(|r| r.1 != Rel::Le).count();
    let cols = n + slacks + arts;
    let mut t = Dense {
        a: vec![vec![Rational::zero(); cols]; m],
        b: Vec::with_capacity(m),
        basis: vec![0; m],
    };
    let mut is_art = vec![false; cols];
    let (mut s, mut a) = (n, n + slacks);
    for (i, (coef, rel, rhs)) in norm.into_iter().enumerate() {
        t.a[i][..n].clone_from_slice(&coef);
        t.b.push(rhs);
        match rel {
            Rel::Le => {
                t.a[i][s] = Rational::one();
                t.basis[i] = s;
                s += 1;
            }
            Rel::Ge => {
                t.a[i][s] = -Rational::one();
                s += 1;
            }
            Rel::Eq => {}
        }
        if rel != Rel::Le {
            t.a[i][a] = Rational::one();
            t.basis[i] = a;
            is_art[a] = true;
            a += 1;
        }
    }
    let c1: Vec<Rational> = (0..cols)
        .map(|j| if is_art[j] { -Rational::one() } else { Rational::zero() })
        .collect();
    t.optimize(&c1, &vec![true; cols]).expect("phase one is bounded");
    let infeas: Rational = t
        .basis
        .iter()
        .zip(&t.b)
        .filter(|(bi, _)| is_art[**bi])
        .map(|(_, v)| v.clone())
        .sum();
    if infeas.is_positive() {
        return LpOutcome::Infeasible;
    }
    for r in 0..m {
        if is_art[t.basis[r]] {
            if let Some(e) = (0..cols).find(|&j| !is_art[j] && !t.a[r][j].is_zero()) {
                t.pivot(r, e);
            }
        }
    }
    let mut c2 = c.to_vec();
    c2.resize(cols, Rational::zero());
    let allowed: Vec<bool> = is_art.iter().map(|x| !x).collect();
    if t.optimize(&c2, &allowed).is_err() {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bi) in t.basis.iter().enumerate() {
        if bi < n {
            x[bi] = t.b[i].clone();
        }
    }
    let value = x.iter().zip(c).map(|(a, b)| a * b).sum();
    LpOutcome::Optimal { x, value }
}

pub fn lp_feasible(n: usize, rows: &[(Vec<Rational>, Rel, Rational)]) -> bool {
    !matches!(lp_max(&vec![Rational::zero(); n], rows), LpOutcome::Infeasible)
}

// ---------------------------------------------------------------------------
// permutahedra

pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, m - 1);
            out.push(q);
        }
    }
    out
}

/// `x ∈ conv{π(p)}` by an LP over convex weights on all `m!` vertices.
pub fn vertex_membership(p: &[Rational], x: &[Rational]) -> bool {
    let m = p.len();
    let perms = permutations(m);
    let mut rows = Vec::new();
    for c in 0..m {
        let coef = perms.iter().map(|pi| p[pi[c]].clone()).collect();
        rows.push((coef, Rel::Eq, x[c].clone()));
    }
    rows.push((vec![Rational::one(); perms.len()], Rel::Eq, Rational::one()));
    lp_feasible(perms.len(), &rows)
}

/// Whether some nonnegative wire assignment satisfies `block` once the
/// primary variables are fixed to `x` (evaluated at `eps`).
pub fn projection_feasible(block: &ConstraintBlock, x: &[Rational], eps: &Rational) -> bool {
    let index: HashMap<usize, usize> = block.auxiliary.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let primary: HashMap<usize, &Rational> = block.primary.iter().zip(x).map(|(&v, val)| (v, val)).collect();
    let n = block.auxiliary.len();
    let mut rows = Vec::new();
    for c in &block.constraints {
        let mut coef = vec![Rational::zero(); n];
        let mut rhs = c.rhs.eval(eps);
        for (v, a) in &c.terms {
            if let Some(&i) = index.get(v) {
                coef[i] += a;
            } else {
                rhs -= a * primary[v];
            }
        }
        let rel = match c.sense {
            Sense::Eq => Rel::Eq,
            Sense::Ge => Rel::Ge,
            Sense::Le => Rel::Le,
        };
        rows.push((coef, rel, rhs));
    }
    lp_feasible(n, &rows)
}

// ---------------------------------------------------------------------------
// games

/// Player 1's minimax value of the unperturbed sequence form.
pub fn unperturbed_value(game: &GameTree) -> Rational {
    assert_eq!(game.num_players(), 2);
    // sequence ids: 0 is empty, then (h, a) pairs in infoset order
    let mut seq: [HashMap<(usize, usize), usize>; 2] = [HashMap::new(), HashMap::new()];
    let mut count = [1usize, 1];
    for (h, info) in game.infosets().iter().enumerate() {
        for a in 0..info.num_actions() {
            seq[info.owner].insert((h, a), count[info.owner]);
            count[info.owner] += 1;
        }
    }
    let parent = |h: usize| -> usize {
        let info = &game.infosets()[h];
        info.history.last().map_or(0, |&(g, a)| seq[info.owner][&(g.0, a)])
    };
    let (n1, n2) = (count[0], count[1]);
    let mut a = vec![vec![Rational::zero(); n2]; n1];
    for &leaf in game.leaves() {
        let mut last = [0usize, 0];
        let mut w = Rational::one();
        for (node, e) in game.path_to(leaf) {
            match game.node(node) {
                Node::Chance { outcomes, .. } => w *= &outcomes[e].prob,
                Node::Decision { infoset, .. } => {
                    let owner = game.infoset(*infoset).owner;
                    last[owner] = seq[owner][&(infoset.0, e)];
                }
                Node::Leaf { .. } => unreachable!(),
            }
        }
        a[last[0]][last[1]] += w * game.payoff(leaf, 0);
    }
    let rows_of = |player: usize, nseq: usize| -> Vec<Vec<Rational>> {
        let mut rows = vec![{
            let mut r = vec![Rational::zero(); nseq];
            r[0] = Rational::one();
            r
        }];
        for (h, info) in game.infosets().iter().enumerate() {
            if info.owner != player {
                continue;
            }
            let mut r = vec![Rational::zero(); nseq];
            for act in 0..info.num_actions() {
                r[seq[player][&(h, act)]] += Rational::one();
            }
            r[parent(h)] -= Rational::one();
            rows.push(r);
        }
        rows
    };
    let e = rows_of(0, n1);
    let f = rows_of(1, n2);
    let r2 = f.len();
    // variables: x (n1), q⁺ (r2), q⁻ (r2); max q₀⁺ − q₀⁻
    let nv = n1 + 2 * r2;
    let mut c = vec![Rational::zero(); nv];
    c[n1] = Rational::one();
    c[n1 + r2] = -Rational::one();
    let mut rows = Vec::new();
    for (i, er) in e.iter().enumerate() {
        let mut coef = er.clone();
        coef.resize(nv, Rational::zero());
        rows.push((coef, Rel::Eq, if i == 0 { Rational::one() } else { Rational::zero() }));
    }
    for j in 0..n2 {
        let mut coef = vec![Rational::zero(); nv];
        for (i, row) in a.iter().enumerate() {
            coef[i] = -row[j].clone();
        }
        for (k, fr) in f.iter().enumerate() {
            coef[n1 + k] = fr[j].clone();
            coef[n1 + r2 + k] = -fr[j].clone();
        }
        rows.push((coef, Rel::Le, Rational::zero()));
    }
    match lp_max(&c, &rows) {
        LpOutcome::Optimal { value, .. } => value,
        other => panic!("sequence-form LP failed: {other:?}"),
    }
}

fn edge_weight(game: &GameTree, profile: &BehaviorProfile<Rational>, node: NodeId, e: usize, skip: usize) -> Rational {
    match game.node(node) {
        Node::Chance { outcomes, .. } => outcomes[e].prob.clone(),
        Node::Decision { infoset, .. } if game.infoset(*infoset).owner == skip => Rational::one(),
        Node::Decision { infoset, .. } => profile.probs[infoset.0][e].clone(),
        Node::Leaf { .. } => unreachable!(),
    }
}

fn subtree_value(
    game: &GameTree,
    profile: &BehaviorProfile<Rational>,
    owner: usize,
    pure: &HashMap<usize, usize>,
    node: NodeId,
) -> Rational {
    match game.node(node) {
        Node::Leaf { payoffs } => payoffs[owner].clone(),
        Node::Chance { outcomes, .. } => outcomes
            .iter()
            .map(|o| &o.prob * subtree_value(game, profile, owner, pure, o.child))
            .sum(),
        Node::Decision { infoset, children } => {
            if game.infoset(*infoset).owner == owner {
                let a = pure[&infoset.0];
                subtree_value(game, profile, owner, pure, children[a])
            } else {
                children
                    .iter()
                    .zip(&profile.probs[infoset.0])
                    .map(|(&c, p)| p * subtree_value(game, profile, owner, pure, c))
                    .sum()
            }
        }
    }
}

/// Number of pure continuations below `h`.
pub fn continuation_count(game: &GameTree, h: InfosetId) -> u64 {
    let owner = game.infoset(h).owner;
    game.infosets()
        .iter()
        .filter(|g| g.owner == owner && g.history.iter().any(|&(x, _)| x == h))
        .map(|g| g.num_actions() as u64)
        .product()
}

/// `K` by enumerating every pure continuation of the owner below `h`.
pub fn brute_k(game: &GameTree, profile: &BehaviorProfile<Rational>, h: InfosetId, action: usize) -> Rational {
    let info = game.infoset(h);
    let owner = info.owner;
    let later: Vec<usize> = game
        .infosets()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.owner == owner && g.history.iter().any(|&(x, _)| x == h))
        .map(|(i, _)| i)
        .collect();
    let weights: Vec<Rational> = info
        .members
        .iter()
        .map(|&v| {
            game.path_to(v)
                .into_iter()
                .map(|(p, e)| edge_weight(game, profile, p, e, owner))
                .product()
        })
        .collect();
    let mass: Rational = weights.iter().sum();
    let mut best: Option<Rational> = None;
    let mut choice = vec![0usize; later.len()];
    loop {
        let pure: HashMap<usize, usize> = later.iter().copied().zip(choice.iter().copied()).collect();
        let total: Rational = info
            .members
            .iter()
            .zip(&weights)
            .map(|(&v, w)| {
                let Node::Decision { children, .. } = game.node(v) else { unreachable!() };
                w * subtree_value(game, profile, owner, &pure, children[action])
            })
            .sum();
        let val = total / &mass;
        if best.as_ref().is_none_or(|b| val > *b) {
            best = Some(val);
        }
        // odometer over the later infosets' actions
        let mut i = 0;
        loop {
            if i == later.len() {
                return best.expect("at least one continuation");
            }
            choice[i] += 1;
            if choice[i] < game.infosets()[later[i]].num_actions() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// LCPs

/// Solves `a · X = rhs` for a column of polynomials (by coefficient).
fn solve_poly_system(a: &[Vec<Rational>], rhs: &[EpsPoly]) -> Option<Vec<EpsPoly>> {
    let n = a.len();
    let deg = rhs.iter().filter_map(|p| p.degree()).max().map_or(1, |d| d + 1);
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend((0..deg).map(|k| rhs[i].coeff(k)));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let prow = m[col].clone();
                for (v, pv) in m[r].iter_mut().zip(&prow) {
                    *v = &*v - &f * pv;
                }
            }
        }
    }
    Some((0..n).map(|i| EpsPoly::from_coeffs(m[i][n..].to_vec())).collect())
}

/// Every solution `z` of the LCP `(M, q)` supported on a nonsingular
/// complementary basis.
pub fn enumerate_lcp(mm: &[Vec<Rational>], q: &[EpsPoly]) -> Vec<Vec<EpsPoly>> {
    let n = q.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let sub: Vec<Vec<Rational>> = support
            .iter()
            .map(|&i| support.iter().map(|&j| mm[i][j].clone()).collect())
            .collect();
        let rhs: Vec<EpsPoly> = support.iter().map(|&i| -q[i].clone()).collect();
        let Some(zs) = solve_poly_system(&sub, &rhs) else { continue };
        let mut z = vec![EpsPoly::zero(); n];
        for (&i, v) in support.iter().zip(zs) {
            z[i] = v;
        }
        let w: Vec<EpsPoly> = (0..n)
            .map(|i| (0..n).fold(q[i].clone(), |acc, j| acc + z[j].scale(&mm[i][j])))
            .collect();
        if z.iter().chain(&w).all(|v| !v.is_negative()) && !out.contains(&z) {
            out.push(z);
        }
    }
    out
}
