use std::cmp::Ordering;
use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use super::tableau::Tableau;
use super::SolverError;
use crate::eps_field::EpsPoly;
use crate::scalar::Rational;

/// What an LCP coordinate stands for in an assembled game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarTag {
    Plan { player: usize, var: usize },
    Wire { player: usize, var: usize },
    /// Multiplier of an inequality row of a player's polytope.
    SlackDual { player: usize, row: usize },
    /// One half of a difference-split equality multiplier.
    EqualityDual { player: usize, row: usize, positive: bool },
    Free,
}

/// Find `z ≥ 0` with `w = M z + q ≥ 0` and `zᵀw = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LcpInstance {
    pub m: Vec<Vec<Rational>>,
    pub q: Vec<EpsPoly>,
    pub tags: Vec<VarTag>,
}

impl LcpInstance {
    pub fn new(m: Vec<Vec<Rational>>, q: Vec<EpsPoly>) -> Self {
        let tags = vec![VarTag::Free; q.len()];
        LcpInstance { m, q, tags }
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn w_of(&self, z: &[EpsPoly]) -> Vec<EpsPoly> {
        self.m
            .iter()
            .zip(&self.q)
            .map(|(row, q)| {
                row.iter()
                    .zip(z)
                    .filter(|(c, _)| !c.is_zero())
                    .fold(q.clone(), |acc, (c, zj)| acc + zj.scale(c))
            })
            .collect()
    }

    /// Exact symbolic check of feasibility and complementarity.
    pub fn is_solution(&self, z: &[EpsPoly]) -> bool {
        if z.len() != self.dim() {
            return false;
        }
        let w = self.w_of(z);
        z.iter().all(|v| !v.is_negative())
            && w.iter().all(|v| !v.is_negative())
            && z.iter().zip(&w).all(|(a, b)| (a * b).is_zero())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LcpSolution {
    pub z: Vec<EpsPoly>,
    pub w: Vec<EpsPoly>,
    pub pivots: usize,
}

/// Lemke's algorithm with covering vector `d`, lexicographic ratio test
/// (rhs in the ε-order first, then the rows of `B⁻¹`).
pub fn lemke(lcp: &LcpInstance, d: &[Rational], max_pivots: usize) -> Result<LcpSolution, SolverError> {
    let n = lcp.dim();
    if d.len() != n || d.iter().any(|x| !x.is_positive()) {
        return Err(SolverError::BadCovering);
    }
    if lcp.q.iter().all(|q| !q.is_negative()) {
        return Ok(LcpSolution {
            z: vec![EpsPoly::zero(); n],
            w: lcp.q.clone(),
            pivots: 0,
        });
    }
    // columns: w (0..n), z (n..2n), z0 (2n)
    let z0 = 2 * n;
    let rows = (0..n)
        .map(|i| {
            let mut row = vec![Rational::zero(); 2 * n + 1];
            row[i] = Rational::one();
            for (j, c) in lcp.m[i].iter().enumerate() {
                if !c.is_zero() {
                    row[n + j] = -c;
                }
            }
            row[z0] = -&d[i];
            row
        })
        .collect();
    let mut t = Tableau {
        rows,
        rhs: lcp.q.clone(),
        basis: (0..n).collect(),
    };
    let mut seen = HashSet::new();

    // z0 enters; the lexicographically most negative row leaves
    let r = lexmin_row(&t, n, z0, (0..n).collect(), true).expect("some q is negative");
    let mut leaving = t.basis[r];
    t.pivot(r, z0);
    let mut pivots = 1;
    loop {
        let entering = if leaving < n { leaving + n } else { leaving - n };
        let candidates: Vec<usize> = (0..n).filter(|&i| t.rows[i][entering].is_positive()).collect();
        let Some(r) = lexmin_row(&t, n, entering, candidates, false) else {
            return Err(SolverError::RayTermination {
                pivots,
                entering: name(entering, n),
            });
        };
        if pivots >= max_pivots {
            return Err(SolverError::IterationLimit { limit: max_pivots });
        }
        leaving = t.basis[r];
        t.pivot(r, entering);
        pivots += 1;
        if leaving == z0 {
            break;
        }
        let mut sig = t.basis.clone();
        sig.sort_unstable();
        if !seen.insert(sig) {
            return Err(SolverError::Cycling { pivots });
        }
    }
    let x = t.solution(2 * n + 1);
    let z = x[n..2 * n].to_vec();
    let w = x[..n].to_vec();
    Ok(LcpSolution { z, w, pivots })
}

fn name(col: usize, n: usize) -> String {
    match col {
        c if c < n => format!("w{c}"),
        c if c < 2 * n => format!("z{}", c - n),
        _ => "z0".into(),
    }
}

/// Row minimizing `(rhs_i, B⁻¹_i) / a_ie` lexicographically. For the
/// initial step the divisor is `−a_ie` (the covering column is negative).
fn lexmin_row(t: &Tableau, n: usize, e: usize, candidates: Vec<usize>, initial: bool) -> Option<usize> {
    let divisor = |i: usize| {
        let a = &t.rows[i][e];
        if initial {
            -a
        } else {
            a.clone()
        }
    };
    let ratio = |i: usize| {
        let inv = Rational::one() / divisor(i);
        t.rhs[i].scale(&inv)
    };
    let mut best: Vec<usize> = Vec::new();
    let mut best_ratio: Option<EpsPoly> = None;
    for i in candidates {
        let r = ratio(i);
        match best_ratio.as_ref().map(|b| r.cmp(b)) {
            None | Some(Ordering::Less) => {
                best = vec![i];
                best_ratio = Some(r);
            }
            Some(Ordering::Equal) => best.push(i),
            Some(Ordering::Greater) => {}
        }
    }
    // ties: compare B⁻¹ rows, which sit in the w columns
    let mut col = 0;
    while best.len() > 1 && col < n {
        let vals: Vec<Rational> = best.iter().map(|&i| &t.rows[i][col] / divisor(i)).collect();
        let min = vals.iter().min().expect("nonempty").clone();
        best = best.into_iter().zip(vals).filter(|(_, v)| *v == min).map(|(i, _)| i).collect();
        col += 1;
    }
    best.first().copied()
}
