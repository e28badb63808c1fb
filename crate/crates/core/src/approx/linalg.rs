//! Exact rational Gauss-Jordan elimination.

use num_traits::{Signed, Zero};

use crate::symexpr::Rational;

/// `rows * x = rhs` over the rationals.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    pub cols: usize,
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

/// Reduced row echelon form with the solution set read off.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub pivots: Vec<usize>,
    pub consistent: bool,
    /// One vector per free column.
    pub nullspace: Vec<Vec<Rational>>,
    /// Free columns set to zero; `None` when inconsistent.
    pub particular: Option<Vec<Rational>>,
}

impl Reduced {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl LinearSystem {
    pub fn new(cols: usize) -> Self {
        LinearSystem {
            cols,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Rational>, rhs: Rational) {
        debug_assert_eq!(row.len(), self.cols);
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn is_homogeneous(&self) -> bool {
        self.rhs.iter().all(Zero::is_zero)
    }

    /// Columns left to right; in each, the largest magnitude entry among the
    /// remaining rows is the pivot (earliest row on ties).
    pub fn reduce(&self) -> Reduced {
        let n = self.cols;
        let mut m: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .zip(&self.rhs)
            .filter(|(r, b)| !b.is_zero() || r.iter().any(|q| !q.is_zero()))
            .map(|(r, b)| {
                let mut row = r.clone();
                row.push(b.clone());
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..n {
            if next == m.len() {
                break;
            }
            let mut best: Option<usize> = None;
            for (r, row) in m.iter().enumerate().skip(next) {
                if row[col].is_zero() {
                    continue;
                }
                if best.is_none_or(|b| row[col].abs() > m[b][col].abs()) {
                    best = Some(r);
                }
            }
            let Some(p) = best else { continue };
            m.swap(next, p);
            let inv = m[next][col].recip();
            for q in m[next].iter_mut() {
                *q *= &inv;
            }
            let pivot_row = m[next].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r == next || row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for (q, pq) in row.iter_mut().zip(&pivot_row).skip(col) {
                    if !pq.is_zero() {
                        *q -= &factor * pq;
                    }
                }
            }
            pivots.push(col);
            next += 1;
        }
        let consistent = m[next..].iter().all(|row| row[n].is_zero());
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let nullspace = free
            .iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); n];
                v[f] = Rational::from_integer(1.into());
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m[r][f].clone();
                }
                v
            })
            .collect();
        let particular = consistent.then(|| {
            let mut v = vec![Rational::zero(); n];
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = m[r][n].clone();
            }
            v
        });
        Reduced {
            pivots,
            consistent,
            nullspace,
            particular,
        }
    }
}
