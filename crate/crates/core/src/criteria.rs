//! Decision criteria over credal sets and over raw utility matrices.
//!
//! Every criterion scores each action and picks the highest score; ties go to
//! the action declared first.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::credal_set::{CredalSet, Relation};
use crate::domain::{DecisionProblem, Distribution};
use crate::error::{Error, Result};
use crate::lp::simplex::{self, Row, SimplexOutcome, StandardLp};
use crate::lp::{self, LpOutcome, LpProblem, Sense};
use crate::maxent::{self, MaxEntOptions, MaxEntResult};
use crate::rational::{format_fraction, from_f64, in_unit_interval, Rational};

/// Range of expected utility of one action as p ranges over the credal set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UtilityInterval {
    pub action: String,
    pub lo: Rational,
    pub hi: Rational,
    pub lo_witness: Distribution,
    pub hi_witness: Distribution,
}

impl UtilityInterval {
    pub fn contains(&self, value: &Rational) -> bool {
        &self.lo <= value && value <= &self.hi
    }

    pub fn is_within(&self, other: &UtilityInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CriterionId {
    /// Generalized maximin: best lower expected utility.
    Gm,
    /// Generalized Hurwicz: `alpha * lo + (1 - alpha) * hi`.
    Gh,
    /// E-admissibility, then maximin over the raw utilities.
    Levi,
    /// Expected utility at the maximum-entropy distribution.
    Pme,
    Maximin,
    Hurwicz,
    MinimaxRegret,
}

impl CriterionId {
    pub const ALL: [CriterionId; 7] = [
        CriterionId::Gm,
        CriterionId::Gh,
        CriterionId::Levi,
        CriterionId::Pme,
        CriterionId::Maximin,
        CriterionId::Hurwicz,
        CriterionId::MinimaxRegret,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CriterionId::Gm => "gm",
            CriterionId::Gh => "gh",
            CriterionId::Levi => "levi",
            CriterionId::Pme => "pme",
            CriterionId::Maximin => "maximin",
            CriterionId::Hurwicz => "hurwicz",
            CriterionId::MinimaxRegret => "regret",
        }
    }

    pub fn needs_alpha(self) -> bool {
        matches!(self, CriterionId::Gh | CriterionId::Hurwicz)
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CriterionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CriterionId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Problem(format!("unknown criterion `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedAction {
    pub action: String,
    pub index: usize,
    pub score: Rational,
    /// False for actions the criterion excludes before scoring (Levi's
    /// E-inadmissible actions).
    pub eligible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionResult {
    pub criterion: CriterionId,
    pub alpha: Option<Rational>,
    pub chosen: String,
    pub chosen_index: usize,
    /// Eligible actions first, then by descending score, then declaration order.
    pub ranking: Vec<RankedAction>,
}

impl CriterionResult {
    fn from_scores(
        criterion: CriterionId,
        alpha: Option<Rational>,
        actions: &[String],
        scores: Vec<Rational>,
        eligible: Vec<bool>,
    ) -> Self {
        let mut ranking: Vec<RankedAction> = actions
            .iter()
            .zip(scores)
            .zip(eligible)
            .enumerate()
            .map(|(index, ((action, score), eligible))| RankedAction {
                action: action.clone(),
                index,
                score,
                eligible,
            })
            .collect();
        ranking.sort_by(|a, b| {
            b.eligible
                .cmp(&a.eligible)
                .then_with(|| b.score.cmp(&a.score))
                .then_with(|| a.index.cmp(&b.index))
        });
        let top = &ranking[0];
        debug_assert!(top.eligible);
        CriterionResult {
            criterion,
            alpha,
            chosen: top.action.clone(),
            chosen_index: top.index,
            ranking,
        }
    }

    pub fn score_of(&self, action: &str) -> Option<&Rational> {
        self.ranking
            .iter()
            .find(|r| r.action == action)
            .map(|r| &r.score)
    }

    /// Eligible actions sharing the top score.
    pub fn argmax_set(&self) -> Vec<usize> {
        let best = &self.ranking[0].score;
        let mut set: Vec<usize> = self
            .ranking
            .iter()
            .filter(|r| r.eligible && &r.score == best)
            .map(|r| r.index)
            .collect();
        set.sort_unstable();
        set
    }
}

fn check_spaces(dp: &DecisionProblem, k: &CredalSet) -> Result<()> {
    if dp.space() != k.space() {
        return Err(Error::SpaceMismatch);
    }
    Ok(())
}

fn check_alpha(alpha: &Rational) -> Result<()> {
    if in_unit_interval(alpha) {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(format_fraction(alpha)))
    }
}

fn optimize(k: &CredalSet, row: &[Rational], sense: Sense) -> Result<(Rational, Distribution)> {
    match lp::solve(&LpProblem::new(k, row.to_vec(), sense)?)? {
        LpOutcome::Optimal { value, witness } => Ok((value, witness)),
        LpOutcome::Infeasible => Err(Error::EmptyCredalSet),
    }
}

/// Lower and upper expected utility of every action, two LP solves each.
pub fn utility_intervals(dp: &DecisionProblem, k: &CredalSet) -> Result<Vec<UtilityInterval>> {
    check_spaces(dp, k)?;
    dp.actions()
        .iter()
        .enumerate()
        .map(|(i, action)| {
            let (lo, lo_witness) = optimize(k, dp.row(i), Sense::Minimize)?;
            let (hi, hi_witness) = optimize(k, dp.row(i), Sense::Maximize)?;
            Ok(UtilityInterval {
                action: action.clone(),
                lo,
                hi,
                lo_witness,
                hi_witness,
            })
        })
        .collect()
}

fn action_names(intervals: &[UtilityInterval]) -> Vec<String> {
    intervals.iter().map(|u| u.action.clone()).collect()
}

pub fn gm_from_intervals(intervals: &[UtilityInterval]) -> CriterionResult {
    let scores = intervals.iter().map(|u| u.lo.clone()).collect();
    CriterionResult::from_scores(
        CriterionId::Gm,
        None,
        &action_names(intervals),
        scores,
        vec![true; intervals.len()],
    )
}

pub fn gh_from_intervals(
    intervals: &[UtilityInterval],
    alpha: &Rational,
) -> Result<CriterionResult> {
    check_alpha(alpha)?;
    let rest = Rational::one() - alpha;
    let scores = intervals
        .iter()
        .map(|u| alpha * &u.lo + &rest * &u.hi)
        .collect();
    Ok(CriterionResult::from_scores(
        CriterionId::Gh,
        Some(alpha.clone()),
        &action_names(intervals),
        scores,
        vec![true; intervals.len()],
    ))
}

/// Generalized maximin: the action with the largest minimum expected utility.
pub fn gm_choose(dp: &DecisionProblem, k: &CredalSet) -> Result<CriterionResult> {
    Ok(gm_from_intervals(&utility_intervals(dp, k)?))
}

/// Generalized Hurwicz with pessimism index `alpha`.
pub fn gh_choose(dp: &DecisionProblem, k: &CredalSet, alpha: &Rational) -> Result<CriterionResult> {
    check_alpha(alpha)?;
    gh_from_intervals(&utility_intervals(dp, k)?, alpha)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleAction {
    pub action: String,
    pub index: usize,
    /// A distribution in the set at which the action maximizes expected utility.
    pub witness: Distribution,
    /// Largest guaranteed lead over every other action at a single p; `None`
    /// when there are no competitors.
    pub margin: Option<Rational>,
}

/// Actions that maximize expected utility for at least one p in the set.
///
/// For each action `k`: maximize `eps` over `p` in the set subject to
/// `sum_j p_j (u_kj - u_ij) >= eps` for every other action `i`. The action is
/// admissible iff the optimum is at least zero. `eps` is free, so it is
/// carried as the difference of two nonnegative columns.
pub fn e_admissible(dp: &DecisionProblem, k: &CredalSet) -> Result<Vec<AdmissibleAction>> {
    check_spaces(dp, k)?;
    let n = dp.space().state_count();
    let m = dp.action_count();
    let base_rows = lp::credal_rows(k);

    let mut out = Vec::new();
    for target in 0..m {
        if m == 1 {
            let witness = lp::feasible(k).ok_or(Error::EmptyCredalSet)?;
            out.push(AdmissibleAction {
                action: dp.actions()[0].clone(),
                index: 0,
                witness,
                margin: None,
            });
            break;
        }
        let mut rows: Vec<Row> = base_rows
            .iter()
            .map(|r| {
                let mut coefficients = r.coefficients.clone();
                coefficients.extend([Rational::zero(), Rational::zero()]);
                Row {
                    coefficients,
                    relation: r.relation,
                    rhs: r.rhs.clone(),
                }
            })
            .collect();
        for other in (0..m).filter(|&i| i != target) {
            let mut coefficients: Vec<Rational> = dp
                .row(target)
                .iter()
                .zip(dp.row(other))
                .map(|(a, b)| a - b)
                .collect();
            coefficients.push(-Rational::one());
            coefficients.push(Rational::one());
            rows.push(Row {
                coefficients,
                relation: Relation::Ge,
                rhs: Rational::zero(),
            });
        }
        let mut objective = vec![Rational::zero(); n];
        objective.push(Rational::one());
        objective.push(-Rational::one());
        let program = StandardLp {
            num_vars: n + 2,
            rows,
            objective,
            maximize: true,
        };
        match simplex::solve(&program) {
            SimplexOutcome::Optimal { value, mut x } => {
                if value >= Rational::zero() {
                    x.truncate(n);
                    out.push(AdmissibleAction {
                        action: dp.actions()[target].clone(),
                        index: target,
                        witness: Distribution::new_unchecked(k.space().clone(), x),
                        margin: Some(value),
                    });
                }
            }
            SimplexOutcome::Infeasible => return Err(Error::EmptyCredalSet),
            SimplexOutcome::Unbounded => {
                return Err(Error::Solver("unbounded E-admissibility program".into()))
            }
        }
    }
    Ok(out)
}

/// Levi's rule, in its simplified form: a unique E-admissible action wins;
/// otherwise maximin over the raw utilities decides among the E-admissible ones.
pub fn levi_choose(dp: &DecisionProblem, k: &CredalSet) -> Result<CriterionResult> {
    let admissible = e_admissible(dp, k)?;
    let mut eligible = vec![false; dp.action_count()];
    for a in &admissible {
        eligible[a.index] = true;
    }
    Ok(CriterionResult::from_scores(
        CriterionId::Levi,
        None,
        dp.actions(),
        row_minima(dp),
        eligible,
    ))
}

/// Expected utility at the maximum-entropy element of a marginal credal set.
pub fn pme_choose(dp: &DecisionProblem, k: &CredalSet) -> Result<CriterionResult> {
    pme_choose_with(dp, k, &MaxEntOptions::default()).map(|(r, _)| r)
}

pub fn pme_choose_with(
    dp: &DecisionProblem,
    k: &CredalSet,
    options: &MaxEntOptions,
) -> Result<(CriterionResult, MaxEntResult)> {
    check_spaces(dp, k)?;
    let fit = maxent::maxent_of(k, options)?;
    let scores = match &fit.exact {
        Some(p) => (0..dp.action_count())
            .map(|i| dp.expected_utility_at(p, i))
            .collect::<Result<Vec<_>>>()?,
        None => {
            let mass = fit
                .distribution
                .iter()
                .map(|&x| from_f64(x).ok_or_else(|| Error::Solver("non-finite maxent mass".into())))
                .collect::<Result<Vec<_>>>()?;
            (0..dp.action_count())
                .map(|i| crate::domain::dot(&mass, dp.row(i)))
                .collect()
        }
    };
    let result = CriterionResult::from_scores(
        CriterionId::Pme,
        None,
        dp.actions(),
        scores,
        vec![true; dp.action_count()],
    );
    Ok((result, fit))
}

fn row_minima(dp: &DecisionProblem) -> Vec<Rational> {
    dp.utilities()
        .iter()
        .map(|row| row.iter().min().cloned().unwrap_or_else(Rational::zero))
        .collect()
}

fn row_maxima(dp: &DecisionProblem) -> Vec<Rational> {
    dp.utilities()
        .iter()
        .map(|row| row.iter().max().cloned().unwrap_or_else(Rational::zero))
        .collect()
}

/// Best worst outcome; ignores any probability information.
pub fn maximin_choose(dp: &DecisionProblem) -> CriterionResult {
    CriterionResult::from_scores(
        CriterionId::Maximin,
        None,
        dp.actions(),
        row_minima(dp),
        vec![true; dp.action_count()],
    )
}

/// Classical pessimism-optimism index over the raw utilities.
pub fn hurwicz_choose(dp: &DecisionProblem, alpha: &Rational) -> Result<CriterionResult> {
    check_alpha(alpha)?;
    let rest = Rational::one() - alpha;
    let scores = row_minima(dp)
        .iter()
        .zip(row_maxima(dp))
        .map(|(lo, hi)| alpha * lo + &rest * hi)
        .collect();
    Ok(CriterionResult::from_scores(
        CriterionId::Hurwicz,
        Some(alpha.clone()),
        dp.actions(),
        scores,
        vec![true; dp.action_count()],
    ))
}

/// Per action, the largest regret `max_i u_ij - u_kj` over states.
pub fn max_regrets(dp: &DecisionProblem) -> Vec<Rational> {
    let n = dp.space().state_count();
    let column_max: Vec<Rational> = (0..n)
        .map(|j| {
            dp.utilities()
                .iter()
                .map(|r| &r[j])
                .max()
                .cloned()
                .unwrap_or_else(Rational::zero)
        })
        .collect();
    dp.utilities()
        .iter()
        .map(|row| {
            row.iter()
                .zip(&column_max)
                .map(|(u, best)| best - u)
                .max()
                .unwrap_or_else(Rational::zero)
        })
        .collect()
}

/// Savage's minimax regret. Scores are negated maximum regrets.
pub fn minimax_regret_choose(dp: &DecisionProblem) -> CriterionResult {
    let scores = max_regrets(dp).into_iter().map(|r| -r).collect();
    CriterionResult::from_scores(
        CriterionId::MinimaxRegret,
        None,
        dp.actions(),
        scores,
        vec![true; dp.action_count()],
    )
}

/// Runs one criterion by id. `alpha` is required for `gh` and `hurwicz`.
pub fn choose(
    criterion: CriterionId,
    dp: &DecisionProblem,
    k: &CredalSet,
    alpha: Option<&Rational>,
) -> Result<CriterionResult> {
    let need_alpha =
        || alpha.ok_or_else(|| Error::Problem(format!("criterion `{criterion}` needs alpha")));
    match criterion {
        CriterionId::Gm => gm_choose(dp, k),
        CriterionId::Gh => gh_choose(dp, k, need_alpha()?),
        CriterionId::Levi => levi_choose(dp, k),
        CriterionId::Pme => pme_choose(dp, k),
        CriterionId::Maximin => Ok(maximin_choose(dp)),
        CriterionId::Hurwicz => hurwicz_choose(dp, need_alpha()?),
        CriterionId::MinimaxRegret => Ok(minimax_regret_choose(dp)),
    }
}
