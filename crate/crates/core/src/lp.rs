//! Exact two-phase simplex over the rationals.
//!
//! Problems are in standard form `min cᵀx  s.t.  Ax = b, x ≥ 0`. Pivoting follows
//! Bland's rule (lowest entering index, lowest leaving basic index on ratio
//! ties), which terminates on degenerate problems and makes the returned basic
//! solution a deterministic function of the input and its column order.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{Rational, RationalMatrix, RationalVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    /// An optimal basic solution.
    Optimal {
        x: RationalVector,
        value: Rational,
    },
    /// `Ax = b, x ≥ 0` has no solution. `farkas` is a `y` with `Aᵀy ≥ 0` and
    /// `bᵀy < 0`.
    Infeasible {
        farkas: RationalVector,
    },
    Unbounded,
}

struct Tableau {
    /// `m` constraint rows followed by one objective row; the last column is the
    /// right-hand side. The objective row holds reduced costs and `-value`.
    cells: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Columns that may enter the basis.
    allowed: Vec<bool>,
}

impl Tableau {
    fn rows(&self) -> usize {
        self.basis.len()
    }

    fn rhs(&self) -> usize {
        self.cells[0].len() - 1
    }

    fn objective(&self) -> &[Rational] {
        &self.cells[self.rows()]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.cells[row][col].recip();
        for v in self.cells[row].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = self.cells[row].clone();
        for (r, cells) in self.cells.iter_mut().enumerate() {
            if r == row || cells[col].is_zero() {
                continue;
            }
            let factor = cells[col].clone();
            for (v, p) in cells.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Runs Bland pivots to optimality. Returns `false` when unbounded.
    fn optimize(&mut self) -> bool {
        loop {
            let obj = self.objective();
            let entering = (0..self.rhs()).find(|&j| self.allowed[j] && obj[j].is_negative());
            let Some(col) = entering else { return true };
            let rhs = self.rhs();
            let mut leaving: Option<(usize, Rational)> = None;
            for r in 0..self.rows() {
                let a = &self.cells[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.cells[r][rhs] / a;
                let better = match &leaving {
                    None => true,
                    Some((best, best_ratio)) => {
                        ratio < *best_ratio
                            || (ratio == *best_ratio && self.basis[r] < self.basis[*best])
                    }
                };
                if better {
                    leaving = Some((r, ratio));
                }
            }
            match leaving {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }

    fn set_objective(&mut self, costs: &[Rational]) {
        let m = self.rows();
        let width = self.cells[0].len();
        let mut obj: Vec<Rational> = (0..width)
            .map(|j| costs.get(j).cloned().unwrap_or_else(Rational::zero))
            .collect();
        obj[width - 1] = Rational::zero();
        for r in 0..m {
            let cb = costs
                .get(self.basis[r])
                .cloned()
                .unwrap_or_else(Rational::zero);
            if cb.is_zero() {
                continue;
            }
            for (j, v) in obj.iter_mut().enumerate() {
                *v -= &cb * &self.cells[r][j];
            }
        }
        self.cells[m] = obj;
    }

    fn solution(&self, vars: usize) -> RationalVector {
        let rhs = self.rhs();
        let mut x = RationalVector::zeros(vars);
        for (r, &b) in self.basis.iter().enumerate() {
            if b < vars {
                x[b] = self.cells[r][rhs].clone();
            }
        }
        x
    }
}

/// Solves `min cᵀx  s.t.  a·x = b, x ≥ 0` exactly.
pub fn solve(a: &RationalMatrix, b: &RationalVector, c: &RationalVector) -> Result<LpOutcome> {
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: b.len(),
        });
    }
    if c.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c.len(),
        });
    }

    // Rows are sign-normalized so that b ≥ 0 and one artificial per row gives a
    // starting basis.
    let signs: Vec<bool> = (0..m).map(|i| b[i].is_negative()).collect();
    let width = n + m + 1;
    let mut cells = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut row = vec![Rational::zero(); width];
        for j in 0..n {
            row[j] = if signs[i] {
                -a[(i, j)].clone()
            } else {
                a[(i, j)].clone()
            };
        }
        row[n + i] = Rational::one();
        row[width - 1] = if signs[i] {
            -b[i].clone()
        } else {
            b[i].clone()
        };
        cells.push(row);
    }
    cells.push(vec![Rational::zero(); width]);
    let mut tableau = Tableau {
        cells,
        basis: (n..n + m).collect(),
        allowed: (0..width - 1).map(|j| j < n).collect(),
    };

    let phase_one: Vec<Rational> = (0..n + m)
        .map(|j| {
            if j < n {
                Rational::zero()
            } else {
                Rational::one()
            }
        })
        .collect();
    tableau.set_objective(&phase_one);
    tableau.optimize();

    let infeasibility = -tableau.objective()[width - 1].clone();
    if infeasibility.is_positive() {
        // Phase-one duals: y_i = 1 - (reduced cost of artificial i).
        let obj = tableau.objective();
        let farkas = (0..m)
            .map(|i| {
                let y = Rational::one() - &obj[n + i];
                // y' = -S y is a certificate for the original rows.
                if signs[i] {
                    y
                } else {
                    -y
                }
            })
            .collect();
        return Ok(LpOutcome::Infeasible { farkas });
    }

    // Drive zero-valued artificials out of the basis; rows that cannot pivot on an
    // original column are redundant.
    let mut redundant = Vec::new();
    for r in 0..m {
        if tableau.basis[r] < n {
            continue;
        }
        match (0..n).find(|&j| !tableau.cells[r][j].is_zero()) {
            Some(col) => tableau.pivot(r, col),
            None => redundant.push(r),
        }
    }
    for &r in redundant.iter().rev() {
        tableau.cells.remove(r);
        tableau.basis.remove(r);
    }

    tableau.set_objective(c.as_slice());
    if !tableau.optimize() {
        return Ok(LpOutcome::Unbounded);
    }
    let x = tableau.solution(n);
    let value = c.dot(&x);
    Ok(LpOutcome::Optimal { x, value })
}

/// A basic feasible solution of `a·x = b, x ≥ 0`, or the Farkas vector proving
/// there is none.
pub fn find_feasible(
    a: &RationalMatrix,
    b: &RationalVector,
) -> Result<std::result::Result<RationalVector, RationalVector>> {
    match solve(a, b, &RationalVector::zeros(a.cols()))? {
        LpOutcome::Optimal { x, .. } => Ok(Ok(x)),
        LpOutcome::Infeasible { farkas } => Ok(Err(farkas)),
        LpOutcome::Unbounded => unreachable!("zero objective is bounded"),
    }
}
