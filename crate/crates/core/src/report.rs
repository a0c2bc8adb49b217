//! Command runners and the result document they produce.
//!
//! Rationals are carried as lowest-terms fraction strings so the JSON form is
//! lossless. The text form is rendered from the document alone.

use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::criteria::{self, CriterionId, CriterionResult, UtilityInterval};
use crate::domain::{fmt_block, Distribution, VarSet};
use crate::error::{Error, Result};
use crate::lp;
use crate::maxent::{self, MaxEntOptions, MaxEntResult};
use crate::problem::Problem;
use crate::rational::{format_decimal, format_fraction, parse_rational, Rational};
use crate::reduction::{Extension, ReductionOutcome};

/// State label -> exact mass.
pub type DistributionRecord = IndexMap<String, String>;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consistent: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<DistributionRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intervals: Option<Vec<IntervalRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decision: Option<DecisionRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub admissible: Option<Vec<AdmissibleRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maxent: Option<MaxEntRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub action: String,
    pub lo: String,
    pub hi: String,
    pub lo_witness: DistributionRecord,
    pub hi_witness: DistributionRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankRecord {
    pub action: String,
    pub score: String,
    pub eligible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub criterion: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    pub chosen: String,
    pub ranking: Vec<RankRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleRecord {
    pub action: String,
    pub witness: DistributionRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxEntRecord {
    pub variables: Vec<String>,
    pub distribution: IndexMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<DistributionRecord>,
    pub entropy: f64,
    pub base: String,
    pub iterations: usize,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionRecord {
    pub target: Vec<String>,
    pub reduced: Vec<Vec<String>>,
    pub dropped_blocks: Vec<Vec<String>>,
    pub dropped_variables: Vec<String>,
}

pub fn distribution_record(p: &Distribution) -> DistributionRecord {
    let space = p.space();
    p.mass()
        .iter()
        .enumerate()
        .map(|(j, m)| (space.state_label(j), format_fraction(m)))
        .collect()
}

pub fn interval_record(u: &UtilityInterval) -> IntervalRecord {
    IntervalRecord {
        action: u.action.clone(),
        lo: format_fraction(&u.lo),
        hi: format_fraction(&u.hi),
        lo_witness: distribution_record(&u.lo_witness),
        hi_witness: distribution_record(&u.hi_witness),
    }
}

pub fn decision_record(r: &CriterionResult) -> DecisionRecord {
    DecisionRecord {
        criterion: r.criterion.as_str().to_string(),
        alpha: r.alpha.as_ref().map(format_fraction),
        chosen: r.chosen.clone(),
        ranking: r
            .ranking
            .iter()
            .map(|a| RankRecord {
                action: a.action.clone(),
                score: format_fraction(&a.score),
                eligible: a.eligible,
            })
            .collect(),
    }
}

pub fn maxent_record(fit: &MaxEntResult) -> MaxEntRecord {
    MaxEntRecord {
        variables: fit.space.names().iter().map(|s| s.to_string()).collect(),
        distribution: fit
            .distribution
            .iter()
            .enumerate()
            .map(|(j, &x)| (fit.space.state_label(j), x))
            .collect(),
        exact: fit.exact.as_ref().map(distribution_record),
        entropy: fit.entropy,
        base: fit.base.as_str().to_string(),
        iterations: fit.iterations,
        residual: fit.residual,
    }
}

fn block_names(block: &VarSet) -> Vec<String> {
    block.iter().cloned().collect()
}

pub fn reduction_record(target: &VarSet, outcome: &ReductionOutcome) -> ReductionRecord {
    ReductionRecord {
        target: target.iter().cloned().collect(),
        reduced: outcome.reduced.blocks().iter().map(block_names).collect(),
        dropped_blocks: outcome.dropped_blocks.iter().map(block_names).collect(),
        dropped_variables: outcome.dropped_variables.clone(),
    }
}

/// Intervals over the working space, with witnesses projected back onto the
/// decision variables.
fn intervals_for(problem: &Problem, extension: Extension) -> Result<Vec<UtilityInterval>> {
    let working = problem.working(extension)?;
    let target = problem.decision.space().var_set();
    criteria::utility_intervals(&working.decision, &working.credal)?
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

fn require_consistent(problem: &Problem) -> Result<()> {
    if problem.credal_set()?.is_consistent() {
        Ok(())
    } else {
        Err(Error::EmptyCredalSet)
    }
}

/// Consistency of the constraints, with a witness when consistent.
pub fn run_check(problem: &Problem) -> Result<ResultDocument> {
    let witness = lp::feasible(&problem.credal_set()?);
    Ok(ResultDocument {
        command: "check".into(),
        consistent: Some(witness.is_some()),
        witness: witness.as_ref().map(distribution_record),
        ..Default::default()
    })
}

pub fn run_intervals(problem: &Problem) -> Result<ResultDocument> {
    require_consistent(problem)?;
    let intervals = intervals_for(problem, Extension::Reduced)?;
    let reduction = match &problem.target {
        Some(t) => problem
            .working(Extension::Reduced)?
            .reduction
            .map(|r| reduction_record(t, &r)),
        None => None,
    };
    Ok(ResultDocument {
        command: "intervals".into(),
        intervals: Some(intervals.iter().map(interval_record).collect()),
        reduction,
        ..Default::default()
    })
}

pub fn run_decide(
    problem: &Problem,
    criterion: CriterionId,
    alpha: Option<&Rational>,
) -> Result<ResultDocument> {
    if criterion.needs_alpha() && alpha.is_none() {
        return Err(Error::Problem(format!(
            "criterion `{criterion}` needs --alpha"
        )));
    }
    require_consistent(problem)?;
    let working = problem.working(Extension::Reduced)?;
    let result = criteria::choose(criterion, &working.decision, &working.credal, alpha)?;
    Ok(ResultDocument {
        command: "decide".into(),
        decision: Some(decision_record(&result)),
        ..Default::default()
    })
}

pub fn run_maxent(problem: &Problem, options: &MaxEntOptions) -> Result<ResultDocument> {
    require_consistent(problem)?;
    let working = problem.working(Extension::Reduced)?;
    let fit = maxent::maxent_of(&working.credal, options)?;
    Ok(ResultDocument {
        command: "maxent".into(),
        maxent: Some(maxent_record(&fit)),
        ..Default::default()
    })
}

pub fn run_reduce(problem: &Problem, with_intervals: bool) -> Result<ResultDocument> {
    let target = problem
        .target
        .as_ref()
        .ok_or_else(|| Error::Problem("reduce needs target_variables".into()))?;
    require_consistent(problem)?;
    let working = problem.working(Extension::Reduced)?;
    let outcome = working.reduction.expect("target present");
    let intervals = if with_intervals {
        Some(
            intervals_for(problem, Extension::Reduced)?
                .iter()
                .map(interval_record)
                .collect(),
        )
    } else {
        None
    };
    Ok(ResultDocument {
        command: "reduce".into(),
        reduction: Some(reduction_record(target, &outcome)),
        intervals,
        ..Default::default()
    })
}

pub fn run_admissible(problem: &Problem) -> Result<ResultDocument> {
    require_consistent(problem)?;
    let working = problem.working(Extension::Reduced)?;
    let target = problem.decision.space().var_set();
    let admissible = criteria::e_admissible(&working.decision, &working.credal)?
        .into_iter()
        .map(|a| {
            Ok(AdmissibleRecord {
                action: a.action,
                witness: distribution_record(&a.witness.project(&target)?),
                margin: a.margin.as_ref().map(format_fraction),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResultDocument {
        command: "admissible".into(),
        admissible: Some(admissible),
        ..Default::default()
    })
}

impl ResultDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Problem(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(consistent) = self.consistent {
            if consistent {
                let _ = writeln!(out, "consistent: yes");
            } else {
                let _ = writeln!(
                    out,
                    "consistent: no (the constraints admit no distribution)"
                );
            }
        }
        if let Some(w) = &self.witness {
            let _ = writeln!(out, "witness:");
            write_distribution(&mut out, w, "  ");
        }
        if let Some(r) = &self.reduction {
            let blocks = |bs: &[Vec<String>]| {
                bs.iter()
                    .map(|b| fmt_block(&b.iter().cloned().collect()))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            let _ = writeln!(out, "target variables: {}", r.target.join(", "));
            let _ = writeln!(out, "reduced model: {{{}}}", blocks(&r.reduced));
            let _ = writeln!(out, "dropped blocks: {{{}}}", blocks(&r.dropped_blocks));
            let _ = writeln!(
                out,
                "dropped variables: {}",
                list_or_none(&r.dropped_variables)
            );
        }
        if let Some(intervals) = &self.intervals {
            let _ = writeln!(out, "expected utility intervals:");
            let width = intervals.iter().map(|i| i.action.len()).max().unwrap_or(0);
            for i in intervals {
                let _ = writeln!(
                    out,
                    "  {:width$}  [{}, {}]",
                    i.action,
                    both(&i.lo),
                    both(&i.hi),
                    width = width
                );
            }
        }
        if let Some(d) = &self.decision {
            match &d.alpha {
                Some(a) => {
                    let _ = writeln!(out, "criterion: {} (alpha = {})", d.criterion, both(a));
                }
                None => {
                    let _ = writeln!(out, "criterion: {}", d.criterion);
                }
            }
            let _ = writeln!(out, "chosen: {}", d.chosen);
            let _ = writeln!(out, "ranking:");
            let width = d.ranking.iter().map(|r| r.action.len()).max().unwrap_or(0);
            for r in &d.ranking {
                let mark = if r.eligible { "" } else { "  (excluded)" };
                let _ = writeln!(
                    out,
                    "  {:width$}  {}{}",
                    r.action,
                    both(&r.score),
                    mark,
                    width = width
                );
            }
        }
        if let Some(adm) = &self.admissible {
            let names: Vec<&str> = adm.iter().map(|a| a.action.as_str()).collect();
            let _ = writeln!(out, "E-admissible: {}", list_or_none(&names));
            for a in adm {
                let _ = writeln!(out, "  {} optimal at:", a.action);
                write_distribution(&mut out, &a.witness, "    ");
            }
        }
        if let Some(m) = &self.maxent {
            let _ = writeln!(
                out,
                "maximum-entropy distribution over {}:",
                m.variables.join(", ")
            );
            let width = m.distribution.keys().map(String::len).max().unwrap_or(0);
            for (label, x) in &m.distribution {
                match m.exact.as_ref().and_then(|e| e.get(label)) {
                    Some(exact) => {
                        let _ = writeln!(out, "  {label:width$}  {}", both(exact));
                    }
                    None => {
                        let _ = writeln!(out, "  {label:width$}  {x:.12}");
                    }
                }
            }
            let _ = writeln!(out, "entropy: {:.12} (base {})", m.entropy, m.base);
            let _ = writeln!(out, "iterations: {}", m.iterations);
            let _ = writeln!(out, "residual: {:e}", m.residual);
        }
        out
    }
}

fn list_or_none<S: AsRef<str>>(items: &[S]) -> String {
    if items.is_empty() {
        "(none)".into()
    } else {
        items
            .iter()
            .map(AsRef::as_ref)
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// `fraction (~decimal)` from a fraction string.
fn both(fraction: &str) -> String {
    match parse_rational(fraction) {
        Ok(r) => format!("{fraction} (~{})", format_decimal(&r, 6)),
        Err(_) => fraction.to_string(),
    }
}

/// Writes the support of `d`; zero cells are left out.
fn write_distribution(out: &mut String, d: &DistributionRecord, indent: &str) {
    let width = d.keys().map(String::len).max().unwrap_or(0);
    for (label, mass) in d.iter().filter(|(_, m)| m.as_str() != "0") {
        let _ = writeln!(out, "{indent}{label:width$}  {}", both(mass));
    }
}
