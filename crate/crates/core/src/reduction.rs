//! Connected components, channels and model reduction toward target variables.
//!
//! Reducing a model keeps only what can transmit constraint between target
//! variables: components that touch no target are dropped, non-target
//! variables appearing in a single block are deleted, and blocks contained in
//! other blocks are absorbed. Optimizing a target-measurable objective over the
//! reduced extension gives the same bounds as over the full one.

use std::collections::{BTreeSet, VecDeque};

use crate::credal_set::CredalSet;
use crate::criteria::UtilityInterval;
use crate::domain::{DecisionProblem, Distribution, Model, VarSet, VariableSpace};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentPartition {
    pub components: Vec<Vec<VarSet>>,
}

impl ComponentPartition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Component membership as sets of blocks, for order-free comparison.
    pub fn as_sets(&self) -> BTreeSet<BTreeSet<VarSet>> {
        self.components
            .iter()
            .map(|c| c.iter().cloned().collect())
            .collect()
    }
}

/// Groups blocks that are linked by chains of blocks sharing a variable.
/// Components and their blocks keep the model's order.
pub fn connected_components(model: &Model) -> ComponentPartition {
    let blocks = model.blocks();
    let mut component = vec![usize::MAX; blocks.len()];
    let mut components = Vec::new();
    for start in 0..blocks.len() {
        if component[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = Vec::new();
        let mut queue = VecDeque::from([start]);
        component[start] = id;
        while let Some(i) = queue.pop_front() {
            members.push(i);
            for j in 0..blocks.len() {
                if component[j] == usize::MAX && !blocks[i].is_disjoint(&blocks[j]) {
                    component[j] = id;
                    queue.push_back(j);
                }
            }
        }
        members.sort_unstable();
        components.push(members.into_iter().map(|i| blocks[i].clone()).collect());
    }
    ComponentPartition { components }
}

/// The blocks of every component that mentions a target variable.
pub fn restrict_to_target(model: &Model, target: &VarSet) -> Model {
    let keep: Vec<VarSet> = connected_components(model)
        .components
        .into_iter()
        .filter(|c| c.iter().any(|b| !b.is_disjoint(target)))
        .flatten()
        .collect();
    let keep: BTreeSet<VarSet> = keep.into_iter().collect();
    let blocks = model.blocks().iter().filter(|b| keep.contains(*b)).cloned();
    Model::new(blocks).expect("a subset of an antichain is an antichain")
}

/// Channels from `from` to `to`: sequences of distinct variables, at least
/// three long, in which every interior variable shares one block with its
/// predecessor and a different block with its successor. Paths longer than
/// `max_len` variables are not explored (`None`: number of model variables).
pub fn find_channels(
    model: &Model,
    from: &str,
    to: &str,
    max_len: Option<usize>,
) -> Vec<Vec<String>> {
    if from == to {
        return Vec::new();
    }
    let vars = model.variables();
    let cap = max_len.unwrap_or(vars.len());
    let blocks = model.blocks();
    let co_blocks = |a: &str, b: &str| -> Vec<usize> {
        blocks
            .iter()
            .enumerate()
            .filter(|(_, blk)| blk.contains(a) && blk.contains(b))
            .map(|(i, _)| i)
            .collect()
    };
    // Interior variable `mid` bridges `prev` and `next` through distinct blocks.
    let bridges = |prev: &str, mid: &str, next: &str| -> bool {
        let left = co_blocks(prev, mid);
        let right = co_blocks(mid, next);
        left.iter().any(|a| right.iter().any(|b| a != b))
    };

    let mut out = Vec::new();
    let mut path = vec![from.to_string()];
    fn extend(
        path: &mut Vec<String>,
        to: &str,
        cap: usize,
        vars: &VarSet,
        co: &dyn Fn(&str, &str) -> Vec<usize>,
        bridges: &dyn Fn(&str, &str, &str) -> bool,
        out: &mut Vec<Vec<String>>,
    ) {
        if path.len() >= cap {
            return;
        }
        let last = path.last().unwrap().clone();
        for next in vars {
            if path.contains(next) || co(&last, next).is_empty() {
                continue;
            }
            if path.len() >= 2 && !bridges(&path[path.len() - 2], &last, next) {
                continue;
            }
            path.push(next.clone());
            if next == to {
                if path.len() >= 3 {
                    out.push(path.clone());
                }
            } else {
                extend(path, to, cap, vars, co, bridges, out);
            }
            path.pop();
        }
    }
    if vars.contains(from) && vars.contains(to) {
        extend(&mut path, to, cap, &vars, &co_blocks, &bridges, &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionOutcome {
    pub reduced: Model,
    /// Blocks removed whole: components away from the target, blocks absorbed
    /// by a superset, and blocks emptied by variable deletion (as they stood
    /// when removed).
    pub dropped_blocks: Vec<VarSet>,
    /// Variables of the input model that appear nowhere in the result.
    pub dropped_variables: Vec<String>,
}

/// A single elementary reduction move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionStep {
    /// Delete a non-target variable found in exactly one block.
    DropVariable { block: usize, variable: String },
    /// Delete a block contained in another (or an empty or duplicate block).
    DropBlock { block: usize },
}

fn applicable_steps(blocks: &[VarSet], target: &VarSet) -> Vec<ReductionStep> {
    let mut steps = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        for v in b {
            if !target.contains(v) && blocks.iter().filter(|o| o.contains(v)).count() == 1 {
                steps.push(ReductionStep::DropVariable {
                    block: i,
                    variable: v.clone(),
                });
            }
        }
    }
    for (i, b) in blocks.iter().enumerate() {
        let absorbed = b.is_empty()
            || blocks
                .iter()
                .enumerate()
                .any(|(j, o)| j != i && b.is_subset(o) && (b != o || j < i));
        if absorbed {
            steps.push(ReductionStep::DropBlock { block: i });
        }
    }
    steps
}

/// Reduces with a caller-chosen order: `pick` receives the currently
/// applicable steps and returns the index of the one to apply.
pub fn reduce_with(
    model: &Model,
    target: &VarSet,
    mut pick: impl FnMut(&[ReductionStep]) -> usize,
) -> ReductionOutcome {
    let restricted = restrict_to_target(model, target);
    let mut dropped_blocks: Vec<VarSet> = model
        .blocks()
        .iter()
        .filter(|b| !restricted.contains_block(b))
        .cloned()
        .collect();
    let mut blocks: Vec<VarSet> = restricted.blocks().to_vec();
    loop {
        let steps = applicable_steps(&blocks, target);
        if steps.is_empty() {
            break;
        }
        match &steps[pick(&steps)] {
            ReductionStep::DropVariable { block, variable } => {
                blocks[*block].remove(variable);
            }
            ReductionStep::DropBlock { block } => {
                dropped_blocks.push(blocks.remove(*block));
            }
        }
    }
    let reduced = Model::new(blocks).expect("reduction fixpoint is an antichain");
    let kept = reduced.variables();
    let dropped_variables = model
        .variables()
        .into_iter()
        .filter(|v| !kept.contains(v))
        .collect();
    ReductionOutcome {
        reduced,
        dropped_blocks,
        dropped_variables,
    }
}

/// Deletes single-block non-target variables exhaustively, then absorbed
/// blocks, and repeats until nothing changes.
pub fn reduce(model: &Model, target: &VarSet) -> ReductionOutcome {
    reduce_with(model, target, |steps| {
        steps
            .iter()
            .position(|s| matches!(s, ReductionStep::DropVariable { .. }))
            .unwrap_or(0)
    })
}

/// Whether to optimize over the reduced model or over the full extension.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Extension {
    #[default]
    Reduced,
    Full,
}

/// A decision problem over target variables together with the credal set it
/// should be evaluated on, after lifting both to the working variable space.
#[derive(Clone, Debug)]
pub struct ProjectedProblem {
    pub space: VariableSpace,
    pub model: Model,
    pub credal: CredalSet,
    pub lifted: DecisionProblem,
    pub reduction: Option<ReductionOutcome>,
}

/// Builds the extension of `tables` (one per block of `model`, over the
/// ambient space) on the reduced model or on the full model, and lifts `dp`
/// (over the target variables) onto that space.
pub fn project_problem(
    dp: &DecisionProblem,
    ambient: &VariableSpace,
    model: &Model,
    tables: &[Distribution],
    extension: Extension,
) -> Result<ProjectedProblem> {
    model.check_space(ambient)?;
    if tables.len() != model.len() {
        return Err(Error::BlockTableMismatch(format!(
            "{} blocks but {} tables",
            model.len(),
            tables.len()
        )));
    }
    let target = dp.space().var_set();
    let target_space = ambient.subspace(&target)?;
    if &target_space != dp.space() {
        return Err(Error::SpaceMismatch);
    }

    let (working_model, reduction) = match extension {
        Extension::Reduced => {
            let outcome = reduce(model, &target);
            (outcome.reduced.clone(), Some(outcome))
        }
        Extension::Full => (model.clone(), None),
    };

    let mut names = working_model.variables();
    names.extend(target.iter().cloned());
    let space = ambient.subspace(&names)?;

    // Each surviving block lies inside an original block; its table is the
    // projection of that block's table.
    let mut working_tables = Vec::with_capacity(working_model.len());
    for block in working_model.blocks() {
        let source = model
            .blocks()
            .iter()
            .position(|b| block.is_subset(b))
            .ok_or_else(|| Error::InvalidModel(format!("no source block for {block:?}")))?;
        working_tables.push(tables[source].project(block)?);
    }
    let credal = CredalSet::from_marginals(space.clone(), &working_model, working_tables)?;
    let lifted = dp.lift(&space)?;
    Ok(ProjectedProblem {
        space,
        model: working_model,
        credal,
        lifted,
        reduction,
    })
}

/// Utility intervals of target-variable actions over the projection of the
/// extension of `tables`. Witnesses are reported on the target variables.
pub fn projected_utility_intervals(
    dp: &DecisionProblem,
    ambient: &VariableSpace,
    model: &Model,
    tables: &[Distribution],
    extension: Extension,
) -> Result<Vec<UtilityInterval>> {
    let full = CredalSet::from_marginals(ambient.clone(), model, tables.to_vec())?;
    if !full.is_consistent() {
        return Err(Error::EmptyCredalSet);
    }
    let projected = project_problem(dp, ambient, model, tables, extension)?;
    let target = dp.space().var_set();
    crate::criteria::utility_intervals(&projected.lifted, &projected.credal)?
        .into_iter()
        .map(|u| {
            Ok(UtilityInterval {
                lo_witness: u.lo_witness.project(&target)?,
                hi_witness: u.hi_witness.project(&target)?,
                ..u
            })
        })
        .collect()
}
