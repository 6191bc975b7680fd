use num_traits::{One, Zero};

use crate::eps_field::EpsPoly;
use crate::scalar::Rational;

/// Dense tableau `rows · x = rhs` with one basic variable per row.
#[derive(Debug, Clone)]
pub(crate) struct Tableau {
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<EpsPoly>,
    pub basis: Vec<usize>,
}

impl Tableau {
    /// Gauss-Jordan pivot making column `e` basic in row `r`.
    pub fn pivot(&mut self, r: usize, e: usize) {
        let inv = Rational::one() / &self.rows[r][e];
        if !inv.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
            self.rhs[r] = self.rhs[r].scale(&inv);
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let nonzero: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][e].is_zero() {
                continue;
            }
            let f = self.rows[i][e].clone();
            let row = &mut self.rows[i];
            for &j in &nonzero {
                row[j] -= &f * &pivot_row[j];
            }
            let delta = self.rhs[r].scale(&f);
            self.rhs[i] = &self.rhs[i] - &delta;
        }
        self.rows[r] = pivot_row;
        self.basis[r] = e;
    }

    /// Value of every column in the current basic solution.
    pub fn solution(&self, ncols: usize) -> Vec<EpsPoly> {
        let mut x = vec![EpsPoly::zero(); ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs[i].clone();
        }
        x
    }
}
