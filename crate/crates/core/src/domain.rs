//! Variables, joint states, distributions, models and decision problems.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A set of variable names. Ordered by name so that equality and hashing
/// ignore declaration order.
pub type VarSet = BTreeSet<String>;

pub fn var_set<I, S>(names: I) -> VarSet
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    names.into_iter().map(Into::into).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Variable {
    name: String,
    values: Vec<String>,
}

impl Variable {
    pub fn new<S: Into<String>, V: Into<String>>(
        name: S,
        values: impl IntoIterator<Item = V>,
    ) -> Result<Self> {
        let name = name.into();
        let values: Vec<String> = values.into_iter().map(Into::into).collect();
        if values.is_empty() {
            return Err(Error::EmptyVariable(name));
        }
        let mut seen = HashSet::new();
        for v in &values {
            if !seen.insert(v.as_str()) {
                return Err(Error::DuplicateValue {
                    variable: name,
                    value: v.clone(),
                });
            }
        }
        Ok(Self { name, values })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }

    pub fn value_index(&self, value: &str) -> Option<usize> {
        self.values.iter().position(|v| v == value)
    }
}

/// Ordered variables with finite value sets. The joint states are the
/// Cartesian product, enumerated lexicographically: the last variable varies
/// fastest, each variable's values in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableSpace {
    variables: Vec<Variable>,
}

impl VariableSpace {
    pub fn new(variables: Vec<Variable>) -> Result<Self> {
        if variables.is_empty() {
            return Err(Error::NoVariables);
        }
        Self::build(variables)
    }

    /// Convenience constructor from `(name, values)` pairs.
    pub fn from_pairs<N, V>(pairs: impl IntoIterator<Item = (N, Vec<V>)>) -> Result<Self>
    where
        N: Into<String>,
        V: Into<String>,
    {
        let vars = pairs
            .into_iter()
            .map(|(n, vs)| Variable::new(n, vs))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vars)
    }

    /// The space with no variables and a single (empty) state.
    pub fn empty() -> Self {
        Self {
            variables: Vec::new(),
        }
    }

    fn build(variables: Vec<Variable>) -> Result<Self> {
        let mut seen = HashSet::new();
        for v in &variables {
            if !seen.insert(v.name.as_str()) {
                return Err(Error::DuplicateVariable(v.name.clone()));
            }
        }
        Ok(Self { variables })
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, name: &str) -> Option<&Variable> {
        self.variables.iter().find(|v| v.name == name)
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn var_set(&self) -> VarSet {
        self.variables.iter().map(|v| v.name.clone()).collect()
    }

    pub fn names(&self) -> Vec<&str> {
        self.variables.iter().map(|v| v.name.as_str()).collect()
    }

    pub fn state_count(&self) -> usize {
        self.variables.iter().map(|v| v.values.len()).product()
    }

    /// Value indices of the state at `index`.
    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.variables.len()];
        for (slot, var) in out.iter_mut().zip(&self.variables).rev() {
            let k = var.values.len();
            *slot = index % k;
            index /= k;
        }
        out
    }

    pub fn encode(&self, values: &[usize]) -> usize {
        self.variables
            .iter()
            .zip(values)
            .fold(0, |acc, (var, &v)| acc * var.values.len() + v)
    }

    pub fn states(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.state_count()).map(move |i| self.decode(i))
    }

    /// Value names of a state joined by commas in variable order, e.g. `B,S`.
    pub fn state_label(&self, index: usize) -> String {
        self.decode(index)
            .iter()
            .zip(&self.variables)
            .map(|(&v, var)| var.values[v].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn state_labels(&self) -> Vec<String> {
        (0..self.state_count())
            .map(|i| self.state_label(i))
            .collect()
    }

    pub fn parse_state_label(&self, label: &str) -> Result<usize> {
        let parts: Vec<&str> = if self.variables.is_empty() {
            if label.trim().is_empty() {
                Vec::new()
            } else {
                return Err(Error::UnknownState(label.to_string()));
            }
        } else {
            label.split(',').map(str::trim).collect()
        };
        if parts.len() != self.variables.len() {
            return Err(Error::UnknownState(label.to_string()));
        }
        let mut values = Vec::with_capacity(parts.len());
        for (part, var) in parts.iter().zip(&self.variables) {
            let idx = var.value_index(part).ok_or_else(|| Error::UnknownValue {
                variable: var.name.clone(),
                value: part.to_string(),
            })?;
            values.push(idx);
        }
        Ok(self.encode(&values))
    }

    /// The variables in `names`, kept in this space's order. `names` may be empty.
    pub fn subspace(&self, names: &VarSet) -> Result<VariableSpace> {
        for n in names {
            if self.variable(n).is_none() {
                return Err(Error::UnknownVariable(n.clone()));
            }
        }
        Ok(VariableSpace {
            variables: self
                .variables
                .iter()
                .filter(|v| names.contains(&v.name))
                .cloned()
                .collect(),
        })
    }

    /// For each state of `self`, the index of the agreeing state of `sub`.
    /// Every variable of `sub` must appear in `self` with the same values.
    pub fn projection_map(&self, sub: &VariableSpace) -> Result<Vec<usize>> {
        let mut positions = Vec::with_capacity(sub.variables.len());
        for var in &sub.variables {
            let pos = self
                .variable_index(&var.name)
                .ok_or_else(|| Error::UnknownVariable(var.name.clone()))?;
            if self.variables[pos].values != var.values {
                return Err(Error::SpaceMismatch);
            }
            positions.push(pos);
        }
        Ok(self
            .states()
            .map(|s| sub.encode(&positions.iter().map(|&p| s[p]).collect::<Vec<_>>()))
            .collect())
    }
}

/// A probability distribution over the states of a space, with exact masses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    space: VariableSpace,
    mass: Vec<Rational>,
}

impl Distribution {
    pub fn new(space: VariableSpace, mass: Vec<Rational>) -> Result<Self> {
        if mass.len() != space.state_count() {
            return Err(Error::DimensionMismatch {
                expected: space.state_count(),
                actual: mass.len(),
            });
        }
        if let Some(neg) = mass.iter().find(|m| m.is_negative()) {
            return Err(Error::InvalidDistribution(format!("negative mass {neg}")));
        }
        let total: Rational = mass.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "masses sum to {total}, not 1"
            )));
        }
        Ok(Self { space, mass })
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn new_unchecked(space: VariableSpace, mass: Vec<Rational>) -> Self {
        debug_assert_eq!(mass.len(), space.state_count());
        Self { space, mass }
    }

    pub fn point(space: VariableSpace, index: usize) -> Self {
        let mut mass = vec![Rational::zero(); space.state_count()];
        mass[index] = Rational::one();
        Self { space, mass }
    }

    pub fn uniform(space: VariableSpace) -> Self {
        let n = space.state_count();
        let share = Rational::new(1.into(), n.into());
        Self {
            space,
            mass: vec![share; n],
        }
    }

    pub fn space(&self) -> &VariableSpace {
        &self.space
    }

    pub fn mass(&self) -> &[Rational] {
        &self.mass
    }

    pub fn into_mass(self) -> Vec<Rational> {
        self.mass
    }

    pub fn get(&self, label: &str) -> Result<&Rational> {
        Ok(&self.mass[self.space.parse_state_label(label)?])
    }

    /// Marginal on `names`: each state of the subspace receives the total mass
    /// of the states agreeing with it.
    pub fn project(&self, names: &VarSet) -> Result<Distribution> {
        let sub = self.space.subspace(names)?;
        let map = self.space.projection_map(&sub)?;
        let mut mass = vec![Rational::zero(); sub.state_count()];
        for (m, &target) in self.mass.iter().zip(&map) {
            mass[target] += m;
        }
        Ok(Distribution { space: sub, mass })
    }

    /// `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, lambda: &Rational, other: &Distribution) -> Result<Distribution> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let rest = Rational::one() - lambda;
        let mass = self
            .mass
            .iter()
            .zip(&other.mass)
            .map(|(a, b)| lambda * a + &rest * b)
            .collect();
        Distribution::new(self.space.clone(), mass)
    }
}

/// Marginals of `p` on every block of `model`, in block order.
pub fn project_model(p: &Distribution, model: &Model) -> Result<Vec<Distribution>> {
    model.blocks().iter().map(|b| p.project(b)).collect()
}

/// A model: variable subsets none of which is contained in another. It need
/// not cover the ambient variables.
#[derive(Clone, Debug, Eq)]
pub struct Model {
    blocks: Vec<VarSet>,
}

impl Model {
    pub fn new(blocks: impl IntoIterator<Item = VarSet>) -> Result<Self> {
        let blocks: Vec<VarSet> = blocks.into_iter().collect();
        for (i, a) in blocks.iter().enumerate() {
            for (j, b) in blocks.iter().enumerate() {
                if i != j && a.is_subset(b) {
                    return Err(Error::InvalidModel(format!(
                        "block {} is contained in block {}",
                        fmt_block(a),
                        fmt_block(b)
                    )));
                }
            }
        }
        Ok(Self { blocks })
    }

    /// Validates the antichain and that every variable belongs to `space`.
    pub fn over(space: &VariableSpace, blocks: impl IntoIterator<Item = VarSet>) -> Result<Self> {
        let model = Self::new(blocks)?;
        model.check_space(space)?;
        Ok(model)
    }

    pub fn from_names(blocks: &[&[&str]]) -> Result<Self> {
        Self::new(blocks.iter().map(|b| var_set(b.iter().copied())))
    }

    /// The model with no blocks.
    pub fn empty() -> Self {
        Self { blocks: Vec::new() }
    }

    pub fn check_space(&self, space: &VariableSpace) -> Result<()> {
        for v in self.variables() {
            if space.variable(&v).is_none() {
                return Err(Error::UnknownVariable(v));
            }
        }
        Ok(())
    }

    pub fn blocks(&self) -> &[VarSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn variables(&self) -> VarSet {
        self.blocks.iter().flatten().cloned().collect()
    }

    /// Blocks pairwise disjoint.
    pub fn is_partition(&self) -> bool {
        let mut seen = HashSet::new();
        self.blocks.iter().flatten().all(|v| seen.insert(v))
    }

    pub fn covers(&self, names: &VarSet) -> bool {
        names.is_subset(&self.variables())
    }

    pub fn contains_block(&self, block: &VarSet) -> bool {
        self.blocks.contains(block)
    }

    /// `self <= other`: every block of `self` lies inside some block of `other`.
    pub fn refines(&self, other: &Model) -> bool {
        is_refinement(self, other)
    }
}

impl PartialEq for Model {
    fn eq(&self, other: &Self) -> bool {
        let a: BTreeSet<&VarSet> = self.blocks.iter().collect();
        let b: BTreeSet<&VarSet> = other.blocks.iter().collect();
        a == b
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(fmt_block).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

pub fn fmt_block(block: &VarSet) -> String {
    format!(
        "{{{}}}",
        block
            .iter()
            .map(String::as_str)
            .collect::<Vec<_>>()
            .join(", ")
    )
}

pub fn is_refinement(x: &Model, y: &Model) -> bool {
    x.blocks
        .iter()
        .all(|bx| y.blocks.iter().any(|by| bx.is_subset(by)))
}

/// Actions and their utilities on every state of a space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionProblem {
    space: VariableSpace,
    actions: Vec<String>,
    utilities: Vec<Vec<Rational>>,
}

impl DecisionProblem {
    pub fn new(
        space: VariableSpace,
        actions: Vec<String>,
        utilities: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        if actions.is_empty() {
            return Err(Error::NoActions);
        }
        let mut seen = HashSet::new();
        for a in &actions {
            if !seen.insert(a.as_str()) {
                return Err(Error::DuplicateAction(a.clone()));
            }
        }
        if utilities.len() != actions.len() {
            return Err(Error::DimensionMismatch {
                expected: actions.len(),
                actual: utilities.len(),
            });
        }
        let n = space.state_count();
        for row in &utilities {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
        }
        Ok(Self {
            space,
            actions,
            utilities,
        })
    }

    pub fn space(&self) -> &VariableSpace {
        &self.space
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn action_count(&self) -> usize {
        self.actions.len()
    }

    pub fn action_index(&self, name: &str) -> Result<usize> {
        self.actions
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::UnknownAction(name.to_string()))
    }

    pub fn utilities(&self) -> &[Vec<Rational>] {
        &self.utilities
    }

    pub fn row(&self, action: usize) -> &[Rational] {
        &self.utilities[action]
    }

    pub fn expected_utility(&self, p: &Distribution, action: &str) -> Result<Rational> {
        let i = self.action_index(action)?;
        self.expected_utility_at(p, i)
    }

    pub fn expected_utility_at(&self, p: &Distribution, action: usize) -> Result<Rational> {
        if p.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(dot(p.mass(), &self.utilities[action]))
    }

    /// The same actions over a larger space whose states each carry the
    /// utility of their projection onto this problem's space.
    pub fn lift(&self, to: &VariableSpace) -> Result<DecisionProblem> {
        let map = to.projection_map(&self.space)?;
        let utilities = self
            .utilities
            .iter()
            .map(|row| map.iter().map(|&j| row[j].clone()).collect())
            .collect();
        Ok(DecisionProblem {
            space: to.clone(),
            actions: self.actions.clone(),
            utilities,
        })
    }

    /// Keeps only the listed actions, in the given order.
    pub fn restrict_actions(&self, keep: &[usize]) -> Result<DecisionProblem> {
        let actions = keep.iter().map(|&i| self.actions[i].clone()).collect();
        let utilities = keep.iter().map(|&i| self.utilities[i].clone()).collect();
        DecisionProblem::new(self.space.clone(), actions, utilities)
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
