//! JSON problem files.
//!
//! ```json
//! {
//!   "variables": { "C": ["B", "W"], "S": ["S", "C"] },
//!   "actions": ["a_BS", "a_BC"],
//!   "utilities": { "a_BS": { "B,S": "10", "B,C": "-5", "W,S": "-5", "W,C": "-5" }, ... },
//!   "constraints": {
//!     "marginals": [ { "block": ["C"], "table": { "B": "0.7", "W": "0.3" } } ],
//!     "intervals": { "B,S": ["0", "0.5"] },
//!     "ordering": ["B,S", "W,C"],
//!     "linear": [ { "coefficients": { "B,S": "1", "W,S": "1" }, "relation": "<=", "rhs": "0.6" } ]
//!   },
//!   "target_variables": ["C", "S"]
//! }
//! ```
//!
//! Numbers are strings holding decimals or fractions so they parse exactly;
//! JSON number literals are rejected. States are value names joined by commas
//! in declared variable order (for marginal tables, in the order the block
//! lists its variables). With `target_variables`, utilities are keyed by
//! states of the target variables only and the constraints must be marginals.

use indexmap::IndexMap;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::credal_set::{CredalSet, LinearConstraint, Relation};
use crate::domain::{DecisionProblem, Distribution, Model, VarSet, Variable, VariableSpace};
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};
use crate::reduction::{self, Extension, ReductionOutcome};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub variables: IndexMap<String, Vec<String>>,
    pub actions: Vec<String>,
    pub utilities: IndexMap<String, IndexMap<String, String>>,
    #[serde(default)]
    pub constraints: ConstraintsSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_variables: Option<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintsSection {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub marginals: Vec<MarginalEntry>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub intervals: IndexMap<String, [String; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ordering: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub linear: Vec<LinearEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarginalEntry {
    pub block: Vec<String>,
    /// Cells left out have mass zero.
    pub table: IndexMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearEntry {
    pub coefficients: IndexMap<String, String>,
    pub relation: String,
    pub rhs: String,
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Problem(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem file serializes")
    }

    pub fn compile(&self) -> Result<Problem> {
        Problem::from_file(self)
    }
}

/// A parsed and validated problem.
#[derive(Clone, Debug)]
pub struct Problem {
    /// Every declared variable.
    pub ambient: VariableSpace,
    /// Actions over the target variables, or over all variables.
    pub decision: DecisionProblem,
    pub target: Option<VarSet>,
    pub marginals: Option<(Model, Vec<Distribution>)>,
    /// Interval, ordering and raw linear constraints over the ambient states.
    pub extra: Vec<LinearConstraint>,
}

fn rat(text: &str, what: &str) -> Result<Rational> {
    parse_rational(text)
        .map_err(|_| Error::Problem(format!("{what}: cannot parse `{text}` as a rational")))
}

impl Problem {
    pub fn from_json(text: &str) -> Result<Self> {
        ProblemFile::from_json(text)?.compile()
    }

    pub fn from_file(file: &ProblemFile) -> Result<Self> {
        let vars = file
            .variables
            .iter()
            .map(|(name, values)| Variable::new(name.clone(), values.iter().cloned()))
            .collect::<Result<Vec<_>>>()?;
        let ambient = VariableSpace::new(vars)?;

        let target = match &file.target_variables {
            Some(names) => {
                let set: VarSet = names.iter().cloned().collect();
                if set.len() != names.len() {
                    return Err(Error::Problem(
                        "target_variables lists a variable twice".into(),
                    ));
                }
                if set.is_empty() {
                    return Err(Error::Problem("target_variables is empty".into()));
                }
                Some(set)
            }
            None => None,
        };
        let decision_space = match &target {
            Some(t) => ambient.subspace(t)?,
            None => ambient.clone(),
        };

        // Utilities.
        for name in file.utilities.keys() {
            if !file.actions.contains(name) {
                return Err(Error::UnknownAction(name.clone()));
            }
        }
        let n = decision_space.state_count();
        let mut utilities = Vec::with_capacity(file.actions.len());
        for action in &file.actions {
            let row_map = file
                .utilities
                .get(action)
                .ok_or_else(|| Error::Problem(format!("no utilities for action `{action}`")))?;
            let mut row: Vec<Option<Rational>> = vec![None; n];
            for (label, value) in row_map {
                let j = decision_space.parse_state_label(label)?;
                if row[j].is_some() {
                    return Err(Error::Problem(format!(
                        "utility of `{action}` at `{label}` given twice"
                    )));
                }
                row[j] = Some(rat(value, &format!("utility of `{action}` at `{label}`"))?);
            }
            let row = row
                .into_iter()
                .enumerate()
                .map(|(j, u)| {
                    u.ok_or_else(|| {
                        Error::Problem(format!(
                            "utility of `{action}` at `{}` is missing",
                            decision_space.state_label(j)
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            utilities.push(row);
        }
        let decision = DecisionProblem::new(decision_space, file.actions.clone(), utilities)?;

        // Marginals.
        let c = &file.constraints;
        let marginals = if c.marginals.is_empty() {
            None
        } else {
            let mut blocks = Vec::new();
            let mut tables = Vec::new();
            for entry in &c.marginals {
                let (block, table) = parse_marginal(&ambient, entry)?;
                blocks.push(block);
                tables.push(table);
            }
            Some((Model::over(&ambient, blocks)?, tables))
        };

        // Everything else.
        let mut extra = Vec::new();
        let na = ambient.state_count();
        for (label, [lo, hi]) in &c.intervals {
            let j = ambient.parse_state_label(label)?;
            let lo = rat(lo, &format!("interval lower bound of `{label}`"))?;
            let hi = rat(hi, &format!("interval upper bound of `{label}`"))?;
            let mut bounds = vec![(Rational::zero(), Rational::from_integer(1.into())); na];
            bounds[j] = (lo, hi);
            let k = CredalSet::from_intervals(ambient.clone(), &bounds)?;
            extra.extend(k.constraints()[2 * j..2 * j + 2].iter().cloned());
        }
        if !c.ordering.is_empty() {
            let chain = c
                .ordering
                .iter()
                .map(|l| ambient.parse_state_label(l))
                .collect::<Result<Vec<_>>>()?;
            extra.extend(
                CredalSet::from_ordering(ambient.clone(), &chain)?
                    .constraints()
                    .iter()
                    .cloned(),
            );
        }
        for (i, entry) in c.linear.iter().enumerate() {
            let mut coefficients = vec![Rational::zero(); na];
            for (label, value) in &entry.coefficients {
                let j = ambient.parse_state_label(label)?;
                coefficients[j] += rat(value, &format!("linear constraint {i} coefficient"))?;
            }
            let relation = Relation::parse(&entry.relation)
                .ok_or_else(|| Error::Problem(format!("unknown relation `{}`", entry.relation)))?;
            let rhs = rat(&entry.rhs, &format!("linear constraint {i} rhs"))?;
            extra.push(LinearConstraint::new(coefficients, relation, rhs)?);
        }

        if target.is_some() && !extra.is_empty() {
            return Err(Error::Problem(
                "with target_variables only marginal constraints are supported".into(),
            ));
        }
        Ok(Problem {
            ambient,
            decision,
            target,
            marginals,
            extra,
        })
    }

    /// The credal set over all declared variables.
    pub fn credal_set(&self) -> Result<CredalSet> {
        let mut k = match &self.marginals {
            Some((model, tables)) => {
                CredalSet::from_marginals(self.ambient.clone(), model, tables.clone())?
            }
            None => CredalSet::unconstrained(self.ambient.clone()),
        };
        for c in &self.extra {
            k = k.with_constraint(c.clone())?;
        }
        Ok(k)
    }

    /// The decision problem and credal set that criteria should run on. With
    /// target variables, both live on the (reduced, unless `Full`) working
    /// space and the utilities are lifted to it.
    pub fn working(&self, extension: Extension) -> Result<Working> {
        if self.target.is_none() {
            return Ok(Working {
                decision: self.decision.clone(),
                credal: self.credal_set()?,
                reduction: None,
            });
        }
        let (model, tables) = match &self.marginals {
            Some((m, t)) => (m.clone(), t.clone()),
            None => (Model::empty(), Vec::new()),
        };
        let projected =
            reduction::project_problem(&self.decision, &self.ambient, &model, &tables, extension)?;
        Ok(Working {
            decision: projected.lifted,
            credal: projected.credal,
            reduction: projected.reduction,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Working {
    pub decision: DecisionProblem,
    pub credal: CredalSet,
    pub reduction: Option<ReductionOutcome>,
}

fn parse_marginal(
    ambient: &VariableSpace,
    entry: &MarginalEntry,
) -> Result<(VarSet, Distribution)> {
    let block: VarSet = entry.block.iter().cloned().collect();
    if block.len() != entry.block.len() {
        return Err(Error::BlockTableMismatch(
            "block lists a variable twice".into(),
        ));
    }
    let space = ambient.subspace(&block)?;
    // Table keys follow the block's listed order; cells are indexed in ambient order.
    let listed: Vec<&Variable> = entry
        .block
        .iter()
        .map(|n| ambient.variable(n).expect("checked by subspace"))
        .collect();
    let position_in_space: Vec<usize> = entry
        .block
        .iter()
        .map(|n| space.variable_index(n).expect("in subspace"))
        .collect();
    let mut mass = vec![Rational::zero(); space.state_count()];
    let mut seen = vec![false; mass.len()];
    for (label, value) in &entry.table {
        let parts: Vec<&str> = if listed.is_empty() {
            Vec::new()
        } else {
            label.split(',').map(str::trim).collect()
        };
        if parts.len() != listed.len() {
            return Err(Error::UnknownState(label.clone()));
        }
        let mut values = vec![0; listed.len()];
        for ((part, var), &pos) in parts.iter().zip(&listed).zip(&position_in_space) {
            values[pos] = var.value_index(part).ok_or_else(|| Error::UnknownValue {
                variable: var.name().to_string(),
                value: part.to_string(),
            })?;
        }
        let cell = space.encode(&values);
        if seen[cell] {
            return Err(Error::Problem(format!(
                "marginal cell `{label}` given twice"
            )));
        }
        seen[cell] = true;
        mass[cell] = rat(value, &format!("marginal cell `{label}`"))?;
    }
    let table = Distribution::new(space, mass)
        .map_err(|e| Error::BlockTableMismatch(format!("table for {:?}: {e}", entry.block)))?;
    Ok((block, table))
}
