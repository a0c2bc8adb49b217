//! Convex sets of distributions described by linear constraints.
//!
//! Nonnegativity and normalization are implicit: they are added when a set is
//! handed to the solver, so the stored constraints are only the informative ones.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::domain::{Distribution, Model, VariableSpace};
use crate::error::{Error, Result};
use crate::lp;
use crate::rational::{in_unit_interval, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "=" | "==" => Some(Relation::Eq),
            "<=" => Some(Relation::Le),
            ">=" => Some(Relation::Ge),
            _ => None,
        }
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// `coefficients . p  (relation)  rhs`, one coefficient per state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    coefficients: Vec<Rational>,
    relation: Relation,
    rhs: Rational,
}

impl LinearConstraint {
    pub fn new(coefficients: Vec<Rational>, relation: Relation, rhs: Rational) -> Result<Self> {
        if coefficients.iter().all(Zero::is_zero) {
            return Err(Error::ZeroConstraint);
        }
        Ok(Self {
            coefficients,
            relation,
            rhs,
        })
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn rhs(&self) -> &Rational {
        &self.rhs
    }

    pub fn lhs(&self, p: &Distribution) -> Rational {
        crate::domain::dot(&self.coefficients, p.mass())
    }

    pub fn is_satisfied_by(&self, p: &Distribution) -> bool {
        self.relation.holds(&self.lhs(p), &self.rhs)
    }
}

/// The marginal tables a credal set was built from, kept so that the
/// maximum-entropy extension can be computed from them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginalSpec {
    pub model: Model,
    pub tables: Vec<Distribution>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CredalSet {
    space: VariableSpace,
    constraints: Vec<LinearConstraint>,
    marginals: Option<MarginalSpec>,
}

impl CredalSet {
    /// The whole simplex.
    pub fn unconstrained(space: VariableSpace) -> Self {
        Self {
            space,
            constraints: Vec::new(),
            marginals: None,
        }
    }

    pub fn from_constraints(
        space: VariableSpace,
        constraints: Vec<LinearConstraint>,
    ) -> Result<Self> {
        let n = space.state_count();
        for c in &constraints {
            if c.coefficients.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: c.coefficients.len(),
                });
            }
        }
        Ok(Self {
            space,
            constraints,
            marginals: None,
        })
    }

    /// The extension polytope: joint distributions whose marginal on every
    /// block equals that block's table. One equality per table cell.
    pub fn from_marginals(
        space: VariableSpace,
        model: &Model,
        tables: Vec<Distribution>,
    ) -> Result<Self> {
        model.check_space(&space)?;
        if tables.len() != model.len() {
            return Err(Error::BlockTableMismatch(format!(
                "{} blocks but {} tables",
                model.len(),
                tables.len()
            )));
        }
        let mut constraints = Vec::new();
        for (block, table) in model.blocks().iter().zip(&tables) {
            if &table.space().var_set() != block {
                return Err(Error::BlockTableMismatch(format!(
                    "table over {:?} given for block {}",
                    table.space().names(),
                    crate::domain::fmt_block(block)
                )));
            }
            let map = space.projection_map(table.space())?;
            for (cell, mass) in table.mass().iter().enumerate() {
                let coefficients = map
                    .iter()
                    .map(|&c| {
                        if c == cell {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect();
                constraints.push(LinearConstraint::new(
                    coefficients,
                    Relation::Eq,
                    mass.clone(),
                )?);
            }
        }
        Ok(Self {
            space,
            constraints,
            marginals: Some(MarginalSpec {
                model: model.clone(),
                tables,
            }),
        })
    }

    /// `lo_j <= p(s_j) <= hi_j` for every state.
    pub fn from_intervals(space: VariableSpace, bounds: &[(Rational, Rational)]) -> Result<Self> {
        let n = space.state_count();
        if bounds.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: bounds.len(),
            });
        }
        let mut constraints = Vec::with_capacity(2 * n);
        for (j, (lo, hi)) in bounds.iter().enumerate() {
            if !in_unit_interval(lo) || !in_unit_interval(hi) || lo > hi {
                return Err(Error::InvalidInterval {
                    state: space.state_label(j),
                    lo: lo.to_string(),
                    hi: hi.to_string(),
                });
            }
            let unit = unit_vector(n, j);
            constraints.push(LinearConstraint::new(
                unit.clone(),
                Relation::Le,
                hi.clone(),
            )?);
            constraints.push(LinearConstraint::new(unit, Relation::Ge, lo.clone())?);
        }
        Ok(Self {
            space,
            constraints,
            marginals: None,
        })
    }

    /// `p(chain[0]) >= p(chain[1]) >= ...`.
    pub fn from_ordering(space: VariableSpace, chain: &[usize]) -> Result<Self> {
        let n = space.state_count();
        let mut seen = HashSet::new();
        for &s in chain {
            if s >= n {
                return Err(Error::UnknownState(format!("#{s}")));
            }
            if !seen.insert(s) {
                return Err(Error::DuplicateState(space.state_label(s)));
            }
        }
        let constraints = chain
            .windows(2)
            .map(|w| {
                let mut c = vec![Rational::zero(); n];
                c[w[0]] = Rational::one();
                c[w[1]] = -Rational::one();
                LinearConstraint::new(c, Relation::Ge, Rational::zero())
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            space,
            constraints,
            marginals: None,
        })
    }

    pub fn space(&self) -> &VariableSpace {
        &self.space
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    /// The marginal tables, when the set was built purely from them.
    pub fn marginals(&self) -> Option<&MarginalSpec> {
        self.marginals.as_ref()
    }

    pub fn with_constraint(mut self, constraint: LinearConstraint) -> Result<Self> {
        let n = self.space.state_count();
        if constraint.coefficients.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: constraint.coefficients.len(),
            });
        }
        self.constraints.push(constraint);
        self.marginals = None;
        Ok(self)
    }

    pub fn intersect(&self, other: &CredalSet) -> Result<CredalSet> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let marginals = match (self.constraints.is_empty(), other.constraints.is_empty()) {
            (_, true) => self.marginals.clone(),
            (true, false) => other.marginals.clone(),
            (false, false) => None,
        };
        let mut constraints = self.constraints.clone();
        constraints.extend(other.constraints.iter().cloned());
        Ok(CredalSet {
            space: self.space.clone(),
            constraints,
            marginals,
        })
    }

    pub fn is_consistent(&self) -> bool {
        lp::feasible(self).is_some()
    }

    /// Whether `p` lies in the set, checked exactly.
    pub fn contains(&self, p: &Distribution) -> bool {
        p.space() == &self.space && self.constraints.iter().all(|c| c.is_satisfied_by(p))
    }
}

fn unit_vector(n: usize, j: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[j] = Rational::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::var_set;
    use crate::rational::{int, parse_rational, ratio};

    fn space() -> VariableSpace {
        VariableSpace::from_pairs([("C", vec!["B", "W"]), ("S", vec!["S", "C"])]).unwrap()
    }

    fn table(values: &[(&str, Vec<&str>)], mass: &[&str]) -> Distribution {
        let s = VariableSpace::from_pairs(values.iter().map(|(n, v)| (*n, v.clone()))).unwrap();
        Distribution::new(s, mass.iter().map(|m| parse_rational(m).unwrap()).collect()).unwrap()
    }

    fn shape_color_marginals() -> CredalSet {
        let model = Model::from_names(&[&["C"], &["S"]]).unwrap();
        CredalSet::from_marginals(
            space(),
            &model,
            vec![
                table(&[("C", vec!["B", "W"])], &["0.7", "0.3"]),
                table(&[("S", vec!["S", "C"])], &["0.6", "0.4"]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn marginal_system_matches_four_equations() {
        let k = shape_color_marginals();
        let rows: Vec<(Vec<i64>, Rational)> = vec![
            (vec![1, 1, 0, 0], ratio(7, 10)),
            (vec![0, 0, 1, 1], ratio(3, 10)),
            (vec![1, 0, 1, 0], ratio(6, 10)),
            (vec![0, 1, 0, 1], ratio(4, 10)),
        ];
        assert_eq!(k.constraints().len(), 4);
        for (c, (coeffs, rhs)) in k.constraints().iter().zip(rows) {
            assert_eq!(
                c.coefficients(),
                coeffs.into_iter().map(int).collect::<Vec<_>>().as_slice()
            );
            assert_eq!(c.relation(), Relation::Eq);
            assert_eq!(c.rhs(), &rhs);
        }
        assert!(k.is_consistent());
        assert!(k.marginals().is_some());
    }

    #[test]
    fn block_table_mismatch() {
        let model = Model::from_names(&[&["C"]]).unwrap();
        let t = table(&[("S", vec!["S", "C"])], &["0.6", "0.4"]);
        assert!(matches!(
            CredalSet::from_marginals(space(), &model, vec![t]),
            Err(Error::BlockTableMismatch(_))
        ));
        assert!(matches!(
            CredalSet::from_marginals(space(), &model, vec![]),
            Err(Error::BlockTableMismatch(_))
        ));
        // Value order must match the ambient variable.
        let t = table(&[("C", vec!["W", "B"])], &["0.6", "0.4"]);
        assert_eq!(
            CredalSet::from_marginals(space(), &model, vec![t]),
            Err(Error::SpaceMismatch)
        );
    }

    #[test]
    fn empty_block_model_is_whole_simplex() {
        let model = Model::from_names(&[&[]]).unwrap();
        let total = Distribution::new(VariableSpace::empty(), vec![int(1)]).unwrap();
        let k = CredalSet::from_marginals(space(), &model, vec![total]).unwrap();
        assert_eq!(k.constraints().len(), 1);
        for j in 0..4 {
            assert!(k.contains(&Distribution::point(space(), j)));
        }
    }

    #[test]
    fn interval_validation() {
        let ok = vec![(int(0), int(1)); 4];
        assert_eq!(
            CredalSet::from_intervals(space(), &ok)
                .unwrap()
                .constraints()
                .len(),
            8
        );
        let mut bad = ok.clone();
        bad[1] = (ratio(1, 2), ratio(1, 4));
        assert!(matches!(
            CredalSet::from_intervals(space(), &bad),
            Err(Error::InvalidInterval { .. })
        ));
        bad[1] = (int(0), ratio(3, 2));
        assert!(CredalSet::from_intervals(space(), &bad).is_err());
        assert!(CredalSet::from_intervals(space(), &ok[..3]).is_err());
    }

    #[test]
    fn infeasible_lower_bounds() {
        let s = VariableSpace::from_pairs([("X", vec!["a", "b"])]).unwrap();
        let k = CredalSet::from_intervals(s, &[(ratio(9, 10), int(1)), (ratio(9, 10), int(1))])
            .unwrap();
        assert!(!k.is_consistent());
    }

    #[test]
    fn ordering_constraints() {
        let k = CredalSet::from_ordering(space(), &[2, 0, 3]).unwrap();
        assert_eq!(k.constraints().len(), 2);
        assert_eq!(
            k.constraints()[0].coefficients(),
            &[int(-1), int(0), int(1), int(0)]
        );
        assert!(CredalSet::from_ordering(space(), &[1])
            .unwrap()
            .constraints()
            .is_empty());
        assert!(matches!(
            CredalSet::from_ordering(space(), &[1, 2, 1]),
            Err(Error::DuplicateState(_))
        ));
        assert!(CredalSet::from_ordering(space(), &[7]).is_err());
    }

    #[test]
    fn intersect_checks_space_and_keeps_marginals_against_simplex() {
        let k = shape_color_marginals();
        let whole = CredalSet::unconstrained(space());
        let both = k.intersect(&whole).unwrap();
        assert_eq!(both.constraints(), k.constraints());
        assert!(both.marginals().is_some());
        let other =
            CredalSet::unconstrained(VariableSpace::from_pairs([("X", vec!["a"])]).unwrap());
        assert_eq!(k.intersect(&other), Err(Error::SpaceMismatch));
    }

    #[test]
    fn contradictory_marginals_are_inconsistent() {
        let model = Model::new([var_set(["C"])]).unwrap();
        let a = CredalSet::from_marginals(
            space(),
            &model,
            vec![table(&[("C", vec!["B", "W"])], &["0.7", "0.3"])],
        )
        .unwrap();
        let b = CredalSet::from_marginals(
            space(),
            &model,
            vec![table(&[("C", vec!["B", "W"])], &["0.6", "0.4"])],
        )
        .unwrap();
        assert!(a.is_consistent() && b.is_consistent());
        assert!(!a.intersect(&b).unwrap().is_consistent());
    }

    #[test]
    fn zero_constraint_rejected() {
        assert_eq!(
            LinearConstraint::new(vec![int(0), int(0)], Relation::Le, int(1)),
            Err(Error::ZeroConstraint)
        );
    }
}
