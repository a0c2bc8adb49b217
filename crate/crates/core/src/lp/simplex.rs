//! Dense two-phase primal simplex over exact rationals with Bland's rule.
//!
//! Variables are nonnegative. Rows are turned into equalities with one slack
//! or surplus column per inequality, right-hand sides are made nonnegative,
//! and an artificial column is added to every row that has no slack able to
//! start in the basis.

use num_traits::{Signed, Zero};

use crate::credal_set::Relation;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `optimize objective . x` subject to `rows`, `x >= 0`.
#[derive(Clone, Debug)]
pub struct StandardLp {
    pub num_vars: usize,
    pub rows: Vec<Row>,
    pub objective: Vec<Rational>,
    pub maximize: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimplexOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ColumnKind {
    Structural,
    Slack,
    Artificial,
}

struct Tableau {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    basis: Vec<usize>,
    kinds: Vec<ColumnKind>,
    pivots: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn build(lp: &StandardLp) -> Self {
        let m = lp.rows.len();
        let n = lp.num_vars;
        let inequalities = lp
            .rows
            .iter()
            .filter(|r| r.relation != Relation::Eq)
            .count();

        // First pass: sign-normalize rows and decide which need artificials.
        let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::with_capacity(m);
        for row in &lp.rows {
            debug_assert_eq!(row.coefficients.len(), n);
            if row.rhs.is_negative() {
                let relation = match row.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                rows.push((
                    row.coefficients.iter().map(|c| -c).collect(),
                    relation,
                    -&row.rhs,
                ));
            } else {
                rows.push((row.coefficients.clone(), row.relation, row.rhs.clone()));
            }
        }
        let artificials = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let total = n + inequalities + artificials;

        let mut kinds = vec![ColumnKind::Structural; n];
        kinds.extend(std::iter::repeat_n(ColumnKind::Slack, inequalities));
        kinds.extend(std::iter::repeat_n(ColumnKind::Artificial, artificials));

        let mut a = Vec::with_capacity(m);
        let mut b = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut next_slack = n;
        let mut next_art = n + inequalities;
        for (coeffs, relation, rhs) in rows {
            let mut full = coeffs;
            full.resize(total, Rational::zero());
            match relation {
                Relation::Le => {
                    full[next_slack] = Rational::from_integer(1.into());
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    full[next_slack] = Rational::from_integer((-1).into());
                    next_slack += 1;
                    full[next_art] = Rational::from_integer(1.into());
                    basis.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    full[next_art] = Rational::from_integer(1.into());
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            a.push(full);
            b.push(rhs);
        }
        Tableau {
            a,
            b,
            basis,
            kinds,
            pivots: 0,
        }
    }

    fn cols(&self) -> usize {
        self.kinds.len()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        self.pivots += 1;
        let p = self.a[row][col].clone();
        if p != Rational::from_integer(1.into()) {
            for v in self.a[row].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
            self.b[row] /= &p;
        }
        let pivot_row = self.a[row].clone();
        let pivot_b = self.b[row].clone();
        for i in 0..self.a.len() {
            if i == row || self.a[i][col].is_zero() {
                continue;
            }
            let factor = self.a[i][col].clone();
            for (v, pv) in self.a[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
            self.b[i] -= &factor * &pivot_b;
        }
        self.basis[row] = col;
    }

    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut d = cost.to_vec();
        for (i, &bv) in self.basis.iter().enumerate() {
            let cb = &cost[bv];
            if cb.is_zero() {
                continue;
            }
            for (dj, aij) in d.iter_mut().zip(&self.a[i]) {
                if !aij.is_zero() {
                    *dj -= cb * aij;
                }
            }
        }
        d
    }

    fn objective_value(&self, cost: &[Rational]) -> Rational {
        self.basis
            .iter()
            .zip(&self.b)
            .map(|(&bv, bi)| &cost[bv] * bi)
            .sum()
    }

    /// Minimizes `cost . x` from the current basic feasible solution. Columns
    /// for which `allowed` is false never enter.
    fn run(&mut self, cost: &[Rational], allowed: &dyn Fn(ColumnKind) -> bool) -> Step {
        loop {
            let d = self.reduced_costs(cost);
            // Bland: lowest-index improving column.
            let entering = (0..self.cols()).find(|&j| allowed(self.kinds[j]) && d[j].is_negative());
            let Some(col) = entering else {
                return Step::Optimal;
            };
            // Ratio test; ties go to the lowest-index basic variable.
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                let aij = &self.a[i][col];
                if !aij.is_positive() {
                    continue;
                }
                let ratio = &self.b[i] / aij;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return Step::Unbounded,
            }
        }
    }

    /// After phase one, pivots zero-level artificials out of the basis and
    /// drops rows that turn out to be redundant.
    fn expel_artificials(&mut self) {
        let mut i = 0;
        while i < self.a.len() {
            if self.kinds[self.basis[i]] != ColumnKind::Artificial {
                i += 1;
                continue;
            }
            let col = (0..self.cols())
                .find(|&j| self.kinds[j] != ColumnKind::Artificial && !self.a[i][j].is_zero());
            match col {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.a.remove(i);
                    self.b.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }
}

pub fn solve(lp: &StandardLp) -> SimplexOutcome {
    solve_counting(lp).0
}

/// Like [`solve`], also returning the number of pivots performed.
pub fn solve_counting(lp: &StandardLp) -> (SimplexOutcome, usize) {
    let mut t = Tableau::build(lp);
    let total = t.cols();

    let phase_one: Vec<Rational> = t
        .kinds
        .iter()
        .map(|k| match k {
            ColumnKind::Artificial => Rational::from_integer(1.into()),
            _ => Rational::zero(),
        })
        .collect();
    if let Step::Unbounded = t.run(&phase_one, &|_| true) {
        // Phase one is bounded below by zero.
        unreachable!("phase-one objective cannot be unbounded");
    }
    if t.objective_value(&phase_one).is_positive() {
        return (SimplexOutcome::Infeasible, t.pivots);
    }
    t.expel_artificials();

    let mut cost: Vec<Rational> = vec![Rational::zero(); total];
    for (c, o) in cost.iter_mut().zip(&lp.objective) {
        *c = if lp.maximize { -o } else { o.clone() };
    }
    if let Step::Unbounded = t.run(&cost, &|k| k != ColumnKind::Artificial) {
        return (SimplexOutcome::Unbounded, t.pivots);
    }

    let mut x = vec![Rational::zero(); lp.num_vars];
    for (i, &bv) in t.basis.iter().enumerate() {
        if bv < lp.num_vars {
            x[bv] = t.b[i].clone();
        }
    }
    let value: Rational = x.iter().zip(&lp.objective).map(|(a, b)| a * b).sum();
    (SimplexOutcome::Optimal { value, x }, t.pivots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn row(c: &[i64], relation: Relation, rhs: i64) -> Row {
        Row {
            coefficients: c.iter().map(|&v| int(v)).collect(),
            relation,
            rhs: int(rhs),
        }
    }

    #[test]
    fn textbook_max() {
        // max 2x + 3y; 2x + y <= 18, 6x + 5y <= 60, 2x + 5y <= 40 -> 28 at (5, 6)
        let lp = StandardLp {
            num_vars: 2,
            rows: vec![
                row(&[2, 1], Relation::Le, 18),
                row(&[6, 5], Relation::Le, 60),
                row(&[2, 5], Relation::Le, 40),
            ],
            objective: vec![int(2), int(3)],
            maximize: true,
        };
        assert_eq!(
            solve(&lp),
            SimplexOutcome::Optimal {
                value: int(28),
                x: vec![int(5), int(6)]
            }
        );
    }

    #[test]
    fn equality_and_ge_rows() {
        // min x + 2y; x + y = 1, x >= 1/3 (as 3x >= 1) -> x = 1, y = 0
        let lp = StandardLp {
            num_vars: 2,
            rows: vec![row(&[1, 1], Relation::Eq, 1), row(&[3, 0], Relation::Ge, 1)],
            objective: vec![int(1), int(2)],
            maximize: false,
        };
        assert_eq!(
            solve(&lp),
            SimplexOutcome::Optimal {
                value: int(1),
                x: vec![int(1), int(0)]
            }
        );
        let lp = StandardLp {
            maximize: true,
            ..lp
        };
        assert_eq!(
            solve(&lp),
            SimplexOutcome::Optimal {
                value: ratio(5, 3),
                x: vec![ratio(1, 3), ratio(2, 3)]
            }
        );
    }

    #[test]
    fn negative_rhs_is_normalized() {
        // -x <= -2 means x >= 2; min x -> 2
        let lp = StandardLp {
            num_vars: 1,
            rows: vec![row(&[-1], Relation::Le, -2), row(&[1], Relation::Le, 5)],
            objective: vec![int(1)],
            maximize: false,
        };
        assert_eq!(
            solve(&lp),
            SimplexOutcome::Optimal {
                value: int(2),
                x: vec![int(2)]
            }
        );
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = StandardLp {
            num_vars: 1,
            rows: vec![row(&[1], Relation::Eq, 1), row(&[1], Relation::Eq, 2)],
            objective: vec![int(1)],
            maximize: false,
        };
        assert_eq!(solve(&lp), SimplexOutcome::Infeasible);
        let lp = StandardLp {
            num_vars: 2,
            rows: vec![row(&[1, -1], Relation::Le, 1)],
            objective: vec![int(1), int(0)],
            maximize: true,
        };
        assert_eq!(solve(&lp), SimplexOutcome::Unbounded);
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        // x + y = 1 stated twice plus 2x + 2y = 2
        let lp = StandardLp {
            num_vars: 2,
            rows: vec![
                row(&[1, 1], Relation::Eq, 1),
                row(&[1, 1], Relation::Eq, 1),
                row(&[2, 2], Relation::Eq, 2),
            ],
            objective: vec![int(3), int(1)],
            maximize: true,
        };
        assert_eq!(
            solve(&lp),
            SimplexOutcome::Optimal {
                value: int(3),
                x: vec![int(1), int(0)]
            }
        );
    }

    #[test]
    fn beale_cycling_example_terminates() {
        // Beale's classic cycling instance under the largest-coefficient rule:
        // min -3/4 x4 + 20 x5 - 1/2 x6 + 6 x7
        let r = |v: &[Rational], rhs: Rational| Row {
            coefficients: v.to_vec(),
            relation: Relation::Le,
            rhs,
        };
        let lp = StandardLp {
            num_vars: 4,
            rows: vec![
                r(&[ratio(1, 4), int(-8), int(-1), int(9)], int(0)),
                r(&[ratio(1, 2), int(-12), ratio(-1, 2), int(3)], int(0)),
                r(&[int(0), int(0), int(1), int(0)], int(1)),
            ],
            objective: vec![ratio(-3, 4), int(20), ratio(-1, 2), int(6)],
            maximize: false,
        };
        match solve(&lp) {
            SimplexOutcome::Optimal { value, .. } => assert_eq!(value, ratio(-5, 4)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
