use num_traits::{One, Signed, Zero};

use super::tableau::Tableau;
use super::SolverError;
use crate::eps_field::EpsPoly;
use crate::permutahedron::{LinearConstraint, Sense};
use crate::scalar::Rational;

/// `max cᵀx` subject to the constraints and `x ≥ 0`. The objective may
/// carry ε; the constraint matrix is rational.
#[derive(Debug, Clone, PartialEq)]
pub struct LpInstance {
    pub num_vars: usize,
    pub objective: Vec<EpsPoly>,
    pub constraints: Vec<LinearConstraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<EpsPoly>,
    /// One multiplier per constraint, with `objective = Σ duals·rhs`.
    /// Nonnegative for `≤`, nonpositive for `≥`.
    pub duals: Vec<EpsPoly>,
    pub objective: EpsPoly,
    pub pivots: usize,
    /// Objective value after every phase-two pivot.
    pub objective_trace: Vec<EpsPoly>,
}

struct Phase<'a> {
    t: &'a mut Tableau,
    cost: &'a [EpsPoly],
    allowed: &'a [bool],
    pivots: &'a mut usize,
    limit: usize,
}

impl Phase<'_> {
    fn reduced_costs(&self) -> (Vec<EpsPoly>, EpsPoly) {
        let ncols = self.cost.len();
        let mut d = self.cost.to_vec();
        let mut z = EpsPoly::zero();
        for (i, &b) in self.t.basis.iter().enumerate() {
            let cb = &self.cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, dj) in d.iter_mut().enumerate().take(ncols) {
                let a = &self.t.rows[i][j];
                if !a.is_zero() {
                    *dj = &*dj - &cb.scale(a);
                }
            }
            z = z + cb * &self.t.rhs[i];
        }
        (d, z)
    }

    /// Bland's rule until optimal. Returns the objective after each pivot.
    fn run(&mut self) -> Result<Vec<EpsPoly>, SolverError> {
        let (mut d, mut z) = self.reduced_costs();
        let mut trace = vec![z.clone()];
        loop {
            let Some(e) = (0..d.len()).find(|&j| self.allowed[j] && d[j].is_positive()) else {
                return Ok(trace);
            };
            let mut best: Option<(usize, EpsPoly)> = None;
            for i in 0..self.t.rows.len() {
                let a = &self.t.rows[i][e];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.t.rhs[i].scale(&(Rational::one() / a));
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.t.basis[i] < self.t.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return Err(SolverError::Unbounded);
            };
            if *self.pivots >= self.limit {
                return Err(SolverError::IterationLimit { limit: self.limit });
            }
            self.t.pivot(r, e);
            *self.pivots += 1;
            let de = d[e].clone();
            for (j, dj) in d.iter_mut().enumerate() {
                let a = &self.t.rows[r][j];
                if !a.is_zero() {
                    *dj = &*dj - &de.scale(a);
                }
            }
            z = z + &de * &self.t.rhs[r];
            trace.push(z.clone());
        }
    }
}

/// Two-phase simplex with Bland's rule over the ε-field.
pub fn simplex(lp: &LpInstance, max_pivots: usize) -> Result<LpSolution, SolverError> {
    let n = lp.num_vars;
    let m = lp.constraints.len();
    // column layout: structural, then one slack/surplus per inequality, then artificials
    let mut flip = vec![false; m];
    let mut senses = Vec::with_capacity(m);
    for (i, c) in lp.constraints.iter().enumerate() {
        flip[i] = c.rhs.is_negative();
        senses.push(match (c.sense, flip[i]) {
            (Sense::Ge, true) => Sense::Le,
            (Sense::Le, true) => Sense::Ge,
            (s, _) => s,
        });
    }
    let n_slack = senses.iter().filter(|s| **s != Sense::Eq).count();
    let n_art = senses.iter().filter(|s| **s != Sense::Le).count();
    let ncols = n + n_slack + n_art;
    let mut rows = vec![vec![Rational::zero(); ncols]; m];
    let mut rhs = Vec::with_capacity(m);
    let mut basis = vec![0; m];
    let mut id_col = vec![0; m];
    let mut artificial = vec![false; ncols];
    let (mut next_slack, mut next_art) = (n, n + n_slack);
    for (i, c) in lp.constraints.iter().enumerate() {
        let sign = if flip[i] { -Rational::one() } else { Rational::one() };
        for (v, coef) in &c.terms {
            rows[i][*v] += coef * &sign;
        }
        rhs.push(c.rhs.scale(&sign));
        match senses[i] {
            Sense::Le => {
                rows[i][next_slack] = Rational::one();
                basis[i] = next_slack;
                id_col[i] = next_slack;
                next_slack += 1;
            }
            Sense::Ge => {
                rows[i][next_slack] = -Rational::one();
                next_slack += 1;
            }
            Sense::Eq => {}
        }
        if senses[i] != Sense::Le {
            rows[i][next_art] = Rational::one();
            basis[i] = next_art;
            id_col[i] = next_art;
            artificial[next_art] = true;
            next_art += 1;
        }
    }
    let mut t = Tableau { rows, rhs, basis };
    let mut pivots = 0;

    let phase1_cost: Vec<EpsPoly> = (0..ncols)
        .map(|j| if artificial[j] { EpsPoly::from_int(-1) } else { EpsPoly::zero() })
        .collect();
    let everything = vec![true; ncols];
    let trace = Phase {
        t: &mut t,
        cost: &phase1_cost,
        allowed: &everything,
        pivots: &mut pivots,
        limit: max_pivots,
    }
    .run()?;
    if trace.last().expect("nonempty").is_negative() {
        return Err(SolverError::Infeasible);
    }
    // drive zero-valued artificials out where a structural column allows it
    for r in 0..m {
        if artificial[t.basis[r]] {
            if let Some(e) = (0..ncols).find(|&j| !artificial[j] && !t.rows[r][j].is_zero()) {
                t.pivot(r, e);
                pivots += 1;
            }
        }
    }

    let mut cost = lp.objective.clone();
    cost.resize(ncols, EpsPoly::zero());
    let allowed: Vec<bool> = artificial.iter().map(|a| !a).collect();
    let mut phase2 = Phase {
        t: &mut t,
        cost: &cost,
        allowed: &allowed,
        pivots: &mut pivots,
        limit: max_pivots,
    };
    let objective_trace = phase2.run()?;
    let (d, objective) = phase2.reduced_costs();
    let x = t.solution(ncols)[..n].to_vec();
    let duals = (0..m)
        .map(|i| {
            let y = -d[id_col[i]].clone();
            if flip[i] {
                -y
            } else {
                y
            }
        })
        .collect();
    Ok(LpSolution {
        x,
        duals,
        objective,
        pivots,
        objective_trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn c(terms: &[(usize, i64)], sense: Sense, rhs: EpsPoly) -> LinearConstraint {
        LinearConstraint::new(terms.iter().map(|&(v, k)| (v, int(k))).collect(), sense, rhs)
    }

    #[test]
    fn textbook_lp() {
        // max 3x + 2y, x + y ≤ 4, x + 3y ≤ 6, x ≤ 3
        let lp = LpInstance {
            num_vars: 2,
            objective: vec![EpsPoly::from_int(3), EpsPoly::from_int(2)],
            constraints: vec![
                c(&[(0, 1), (1, 1)], Sense::Le, EpsPoly::from_int(4)),
                c(&[(0, 1), (1, 3)], Sense::Le, EpsPoly::from_int(6)),
                c(&[(0, 1)], Sense::Le, EpsPoly::from_int(3)),
            ],
        };
        let sol = simplex(&lp, 100).unwrap();
        assert_eq!(sol.objective, EpsPoly::from_int(11));
        assert_eq!(sol.x, vec![EpsPoly::from_int(3), EpsPoly::from_int(1)]);
        let dual_obj = sol
            .duals
            .iter()
            .zip(&lp.constraints)
            .fold(EpsPoly::zero(), |acc, (y, c)| acc + y * &c.rhs);
        assert_eq!(dual_obj, sol.objective);
        assert!(sol.objective_trace.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn equality_and_ge_with_eps() {
        // max -x - y, x + y = 1, x ≥ ε
        let e = EpsPoly::eps_pow(1);
        let lp = LpInstance {
            num_vars: 2,
            objective: vec![EpsPoly::from_int(-1), EpsPoly::zero()],
            constraints: vec![
                c(&[(0, 1), (1, 1)], Sense::Eq, EpsPoly::one()),
                c(&[(0, 1)], Sense::Ge, e.clone()),
            ],
        };
        let sol = simplex(&lp, 100).unwrap();
        assert_eq!(sol.x, vec![e.clone(), EpsPoly::one() - e.clone()]);
        assert_eq!(sol.objective, -e);
        assert!(!sol.duals[1].is_positive());
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LpInstance {
            num_vars: 1,
            objective: vec![EpsPoly::zero()],
            constraints: vec![c(&[(0, 1)], Sense::Le, EpsPoly::from_int(-1))],
        };
        assert_eq!(simplex(&lp, 100), Err(SolverError::Infeasible));
        let lp = LpInstance {
            num_vars: 1,
            objective: vec![EpsPoly::one()],
            constraints: vec![c(&[(0, 1)], Sense::Ge, EpsPoly::one())],
        };
        assert_eq!(simplex(&lp, 100), Err(SolverError::Unbounded));
    }

    #[test]
    fn redundant_equalities() {
        let lp = LpInstance {
            num_vars: 2,
            objective: vec![EpsPoly::one(), EpsPoly::zero()],
            constraints: vec![
                c(&[(0, 1), (1, 1)], Sense::Eq, EpsPoly::from_int(2)),
                c(&[(0, 2), (1, 2)], Sense::Eq, EpsPoly::from_int(4)),
            ],
        };
        let sol = simplex(&lp, 100).unwrap();
        assert_eq!(sol.objective, EpsPoly::from_int(2));
        assert_eq!(sol.x[0], EpsPoly::constant(rat(2, 1)));
    }
}
