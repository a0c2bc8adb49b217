//! Decision making with linear constraints on probabilities.
//!
//! A [`CredalSet`] is a convex set of distributions over the joint states of a
//! [`VariableSpace`], described by linear constraints: marginal tables over a
//! [`Model`], per-state probability intervals, orderings among state
//! probabilities, or raw linear constraints. Expected-utility intervals are
//! computed exactly with a rational simplex solver, and the decision criteria in
//! [`criteria`] rank actions from those intervals (or from the raw utilities for
//! the classical criteria). [`maxent`] computes the maximum-entropy extension of
//! marginal tables and [`reduction`] shrinks a model to the part that actually
//! constrains a set of target variables.

pub mod credal_set;
pub mod criteria;
pub mod domain;
pub mod error;
pub mod lp;
pub mod maxent;
pub mod problem;
pub mod rational;
pub mod reduction;
pub mod report;

pub use credal_set::{CredalSet, LinearConstraint, Relation};
pub use criteria::{CriterionId, CriterionResult, RankedAction, UtilityInterval};
pub use domain::{DecisionProblem, Distribution, Model, VarSet, Variable, VariableSpace};
pub use error::{Error, Result};
pub use lp::{LpOutcome, LpProblem, Sense};
pub use maxent::{LogBase, MaxEntOptions, MaxEntResult};
pub use rational::Rational;
pub use reduction::{ComponentPartition, ReductionOutcome};
