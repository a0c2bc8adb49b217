//! Maximum-entropy extension of marginal tables by iterative proportional
//! fitting, and Shannon entropy.

use std::fmt;

use num_traits::{Num, ToPrimitive};

use crate::credal_set::CredalSet;
use crate::domain::{Distribution, Model, VariableSpace};
use crate::error::{Error, Result};
use crate::rational::{to_f64, Rational};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum LogBase {
    #[default]
    E,
    Two,
}

impl LogBase {
    pub fn as_str(self) -> &'static str {
        match self {
            LogBase::E => "e",
            LogBase::Two => "2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "e" | "nats" => Some(LogBase::E),
            "2" | "bits" => Some(LogBase::Two),
            _ => None,
        }
    }

    fn ln(self) -> f64 {
        match self {
            LogBase::E => 1.0,
            LogBase::Two => std::f64::consts::LN_2,
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaxEntOptions {
    /// Stop once the largest marginal deviation is at most this.
    pub tolerance: f64,
    /// Cap on full sweeps over all blocks.
    pub max_iterations: usize,
    pub base: LogBase,
}

impl Default for MaxEntOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 10_000,
            base: LogBase::E,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaxEntResult {
    pub space: VariableSpace,
    pub distribution: Vec<f64>,
    /// Set when the fit is exact in rational arithmetic (partition models).
    pub exact: Option<Distribution>,
    pub entropy: f64,
    pub base: LogBase,
    pub iterations: usize,
    /// Largest absolute deviation of a fitted marginal cell from its table.
    pub residual: f64,
}

/// For one block: the cell of each joint state and the target cell masses.
struct BlockFit<T> {
    cell_of: Vec<usize>,
    target: Vec<T>,
}

fn sweep<T>(p: &mut [T], blocks: &[BlockFit<T>]) -> Result<()>
where
    T: Num + Clone + PartialOrd,
{
    for block in blocks {
        let current = cell_sums(p, block);
        for (mass, &cell) in p.iter_mut().zip(&block.cell_of) {
            let target = &block.target[cell];
            if target.is_zero() {
                *mass = T::zero();
            } else if current[cell].is_zero() {
                // Every consistent joint puts zero here; the tables disagree.
                return Err(Error::EmptyCredalSet);
            } else {
                *mass = mass.clone() * target.clone() / current[cell].clone();
            }
        }
    }
    Ok(())
}

fn cell_sums<T: Num + Clone>(p: &[T], block: &BlockFit<T>) -> Vec<T> {
    let mut sums = vec![T::zero(); block.target.len()];
    for (mass, &cell) in p.iter().zip(&block.cell_of) {
        sums[cell] = sums[cell].clone() + mass.clone();
    }
    sums
}

fn residual_f64(p: &[f64], blocks: &[BlockFit<f64>]) -> f64 {
    blocks
        .iter()
        .flat_map(|b| {
            cell_sums(p, b)
                .into_iter()
                .zip(&b.target)
                .map(|(s, t)| (s - t).abs())
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max)
}

/// The entropy-maximizing joint distribution whose block marginals equal
/// `tables`. Starts from uniform and rescales block by block, in model order.
pub fn maxent_extend(
    space: &VariableSpace,
    model: &Model,
    tables: &[Distribution],
    options: &MaxEntOptions,
) -> Result<MaxEntResult> {
    let credal = CredalSet::from_marginals(space.clone(), model, tables.to_vec())?;
    if !credal.is_consistent() {
        return Err(Error::EmptyCredalSet);
    }
    let n = space.state_count();
    let maps = tables
        .iter()
        .map(|t| space.projection_map(t.space()))
        .collect::<Result<Vec<_>>>()?;

    if model.is_partition() {
        // Disjoint blocks: one sweep from uniform lands on the product of the
        // tables, exactly.
        let blocks: Vec<BlockFit<Rational>> = maps
            .iter()
            .zip(tables)
            .map(|(m, t)| BlockFit {
                cell_of: m.clone(),
                target: t.mass().to_vec(),
            })
            .collect();
        let mut p = Distribution::uniform(space.clone()).into_mass();
        let iterations = if blocks.is_empty() { 0 } else { 1 };
        sweep(&mut p, &blocks)?;
        debug_assert!(blocks.iter().all(|b| cell_sums(&p, b) == b.target));
        let exact = Distribution::new(space.clone(), p)?;
        let distribution: Vec<f64> = exact.mass().iter().map(to_f64).collect();
        let entropy = entropy(&exact, options.base);
        return Ok(MaxEntResult {
            space: space.clone(),
            distribution,
            exact: Some(exact),
            entropy,
            base: options.base,
            iterations,
            residual: 0.0,
        });
    }

    let blocks: Vec<BlockFit<f64>> = maps
        .iter()
        .zip(tables)
        .map(|(m, t)| BlockFit {
            cell_of: m.clone(),
            target: t.mass().iter().map(to_f64).collect(),
        })
        .collect();
    let mut p = vec![1.0 / n as f64; n];
    let mut residual = residual_f64(&p, &blocks);
    let mut iterations = 0;
    while residual > options.tolerance {
        if iterations == options.max_iterations {
            return Err(Error::NonConvergence {
                iterations,
                residual,
            });
        }
        sweep(&mut p, &blocks)?;
        iterations += 1;
        residual = residual_f64(&p, &blocks);
        log::trace!("ipf sweep {iterations}: residual {residual:e}");
    }
    log::debug!("ipf converged after {iterations} sweeps, residual {residual:e}");
    Ok(MaxEntResult {
        space: space.clone(),
        entropy: entropy_of(&p, options.base),
        distribution: p,
        exact: None,
        base: options.base,
        iterations,
        residual,
    })
}

/// Maximum-entropy element of a credal set built from marginal tables.
pub fn maxent_of(credal: &CredalSet, options: &MaxEntOptions) -> Result<MaxEntResult> {
    let spec = credal.marginals().ok_or(Error::NotMarginalModel)?;
    maxent_extend(credal.space(), &spec.model, &spec.tables, options)
}

/// `-sum p log p` with `0 log 0 = 0`.
pub fn entropy(p: &Distribution, base: LogBase) -> f64 {
    let mass: Vec<f64> = p.mass().iter().map(|m| m.to_f64().unwrap_or(0.0)).collect();
    entropy_of(&mass, base)
}

pub fn entropy_of(mass: &[f64], base: LogBase) -> f64 {
    let nats: f64 = mass
        .iter()
        .filter(|&&m| m > 0.0)
        .map(|&m| -m * m.ln())
        .sum();
    nats / base.ln()
}
