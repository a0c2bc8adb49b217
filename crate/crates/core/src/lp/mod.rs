//! Optimizing linear objectives over credal sets.

pub mod simplex;

use num_traits::{One, Zero};

use crate::credal_set::{CredalSet, Relation};
use crate::domain::Distribution;
use crate::error::{Error, Result};
use crate::rational::Rational;
use simplex::{Row, SimplexOutcome, StandardLp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    pub fn opposite(self) -> Self {
        match self {
            Sense::Minimize => Sense::Maximize,
            Sense::Maximize => Sense::Minimize,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LpProblem<'a> {
    objective: Vec<Rational>,
    sense: Sense,
    credal: &'a CredalSet,
}

impl<'a> LpProblem<'a> {
    pub fn new(credal: &'a CredalSet, objective: Vec<Rational>, sense: Sense) -> Result<Self> {
        let n = credal.space().state_count();
        if objective.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: objective.len(),
            });
        }
        Ok(Self {
            objective,
            sense,
            credal,
        })
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        witness: Distribution,
    },
    Infeasible,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            LpOutcome::Infeasible => None,
        }
    }
}

/// The credal set's constraints followed by the normalization row.
pub(crate) fn credal_rows(credal: &CredalSet) -> Vec<Row> {
    let n = credal.space().state_count();
    let mut rows: Vec<Row> = credal
        .constraints()
        .iter()
        .map(|c| Row {
            coefficients: c.coefficients().to_vec(),
            relation: c.relation(),
            rhs: c.rhs().clone(),
        })
        .collect();
    rows.push(Row {
        coefficients: vec![Rational::one(); n],
        relation: Relation::Eq,
        rhs: Rational::one(),
    });
    rows
}

pub fn solve(problem: &LpProblem<'_>) -> Result<LpOutcome> {
    let credal = problem.credal;
    let lp = StandardLp {
        num_vars: credal.space().state_count(),
        rows: credal_rows(credal),
        objective: problem.objective.clone(),
        maximize: problem.sense == Sense::Maximize,
    };
    match simplex::solve(&lp) {
        SimplexOutcome::Optimal { value, x } => Ok(LpOutcome::Optimal {
            value,
            witness: Distribution::new_unchecked(credal.space().clone(), x),
        }),
        SimplexOutcome::Infeasible => Ok(LpOutcome::Infeasible),
        SimplexOutcome::Unbounded => Err(Error::Solver(
            "unbounded objective over a subset of the simplex".into(),
        )),
    }
}

/// A distribution in the set, or `None` when the set is empty.
pub fn feasible(credal: &CredalSet) -> Option<Distribution> {
    let n = credal.space().state_count();
    let problem = LpProblem {
        objective: vec![Rational::zero(); n],
        sense: Sense::Minimize,
        credal,
    };
    match solve(&problem) {
        Ok(LpOutcome::Optimal { witness, .. }) => Some(witness),
        _ => None,
    }
}
