//! Greedy swapping.

use std::collections::{HashMap, HashSet};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::choices::{Choice, ForcedConstraints, ForcingMode};
use super::{argmin, change_count, rank};
use crate::cost::{self, CostParameters, EstimateBreakdown, PredictionModel};
use crate::error::{Error, Result};
use crate::network::{ArchitectureConstraints, ArchitectureSet, LinearNetworkSystem};
use crate::synthesis::GainSchedule;

/// One accepted choice inside a subsequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapStep {
    /// Running index of the subsequence this step belongs to.
    pub subsequence: usize,
    pub mode: ForcingMode,
    pub choice: Choice,
    /// Architecture after the choice (before it for a winning `NoUpdate`
    /// in a rejection subsequence, which changes nothing).
    pub architecture: ArchitectureSet,
    pub cost: f64,
    /// Whether the architecture met the forced bounds of `mode`.
    pub within_forced_bounds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapOutcome {
    pub architecture: ArchitectureSet,
    pub cost: f64,
    pub initial_cost: f64,
    /// Outer selection-plus-rejection passes executed.
    pub passes: usize,
    /// Distinct architectures whose metric was evaluated.
    pub evaluations: usize,
    pub steps: Vec<SwapStep>,
}

fn total_changes(a: &ArchitectureSet, b: &ArchitectureSet) -> usize {
    change_count(a.actuators(), b.actuators()) + change_count(a.sensors(), b.sensors())
}

/// Greedy swapping against an arbitrary architecture metric.
///
/// Each outer pass runs a selection subsequence then a rejection
/// subsequence, each stopping at `2N′` changes from its entry point, when
/// `NoUpdate` wins, or when no choice is available. The loop exits when a
/// pass makes no net change, when the changes from `arch_init` reach `2N`,
/// or when a pass ends on an architecture already seen at the end of an
/// earlier pass. The result is the cheapest feasible end-of-pass
/// architecture, with `arch_init` as the starting candidate, so the cost
/// never exceeds that of `arch_init`.
pub fn greedy_swap_with<F>(
    arch_init: &ArchitectureSet,
    constraints: &ArchitectureConstraints,
    pools: (usize, usize),
    mut metric: F,
) -> Result<SwapOutcome>
where
    F: FnMut(&ArchitectureSet) -> Result<f64>,
{
    constraints.validate(pools.0, pools.1)?;
    arch_init.validate(pools.0, pools.1)?;
    if !constraints.is_satisfied_by(arch_init) {
        return Err(Error::Argument(format!(
            "initial architecture {arch_init} violates the cardinality bounds"
        )));
    }
    let shift = constraints.per_subsequence;
    let selection = ForcedConstraints::selection(*constraints, shift, pools);
    let rejection = ForcedConstraints::rejection(*constraints, shift, pools);
    let budget = constraints.max_changes.limit().map(|n| 2 * n);

    let mut memo: HashMap<ArchitectureSet, f64> = HashMap::new();
    let mut eval = |arch: &ArchitectureSet| -> Result<f64> {
        if let Some(v) = memo.get(arch) {
            return Ok(*v);
        }
        let v = rank(metric(arch)?);
        memo.insert(arch.clone(), v);
        Ok(v)
    };

    let initial_cost = eval(arch_init)?;
    let mut best = (arch_init.clone(), initial_cost);
    let mut seen: HashSet<ArchitectureSet> = HashSet::from([arch_init.clone()]);
    let mut current = arch_init.clone();
    let mut steps = Vec::new();
    let mut passes = 0;
    let mut n_count = 0;
    let mut subsequence = 0;

    while budget.is_none_or(|b| n_count < b) {
        passes += 1;
        let pass_start = current.clone();

        for forced in [&selection, &rejection] {
            subsequence += 1;
            let entry = current.clone();
            let mut n_changes = 0;
            while n_changes < 2 * shift {
                let options = forced.choices(&current);
                if options.is_empty() {
                    break;
                }
                let mut scores = Vec::with_capacity(options.len());
                for c in &options {
                    scores.push(eval(&c.applied(&current))?);
                }
                let pick = argmin(scores.iter().copied()).expect("options are nonempty");
                let choice = options[pick];
                choice.apply_to(&mut current);
                steps.push(SwapStep {
                    subsequence,
                    mode: forced.mode,
                    choice,
                    architecture: current.clone(),
                    cost: scores[pick],
                    within_forced_bounds: forced.is_satisfied_by(&current),
                });
                if choice == Choice::NoUpdate {
                    break;
                }
                n_changes = total_changes(&entry, &current);
            }
        }

        if total_changes(&pass_start, &current) == 0 {
            break;
        }
        n_count = total_changes(arch_init, &current);
        if constraints.is_satisfied_by(&current) {
            let c = eval(&current)?;
            if c < best.1 {
                best = (current.clone(), c);
            }
        }
        if !seen.insert(current.clone()) {
            break;
        }
    }

    Ok(SwapOutcome {
        architecture: best.0,
        cost: best.1,
        initial_cost,
        passes,
        evaluations: memo.len(),
        steps,
    })
}

/// Greedy swapping on the total estimated cost, with `arch_prev` as the
/// reference for switching costs. The model's feedback cache persists
/// across calls.
#[allow(clippy::too_many_arguments)]
pub fn greedy_swap_model(
    model: &mut PredictionModel,
    params: &CostParameters,
    arch_init: &ArchitectureSet,
    arch_prev: &ArchitectureSet,
    x_hat: &DVector<f64>,
    e_t: &DMatrix<f64>,
    constraints: &ArchitectureConstraints,
    pools: (usize, usize),
) -> Result<SwapOutcome> {
    let mut ctx = model.context(x_hat, e_t);
    greedy_swap_with(arch_init, constraints, pools, |arch| {
        let control = model.predicted_cost_cached(&mut ctx, arch)?;
        Ok(control + cost::running_cost(arch, params) + cost::switching_cost(arch, arch_prev, params))
    })
}

/// Greedy swapping from the previous architecture `arch_init`, which is
/// also the switching-cost reference. Returns the chosen architecture, its
/// cost breakdown and its gain schedule.
pub fn greedy_swap(
    system: &LinearNetworkSystem,
    arch_init: &ArchitectureSet,
    x_hat: &DVector<f64>,
    e_t: &DMatrix<f64>,
    params: &CostParameters,
    constraints: &ArchitectureConstraints,
) -> Result<(ArchitectureSet, EstimateBreakdown, GainSchedule)> {
    let mut model = PredictionModel::new(system, params)?;
    let pools = (system.actuator_count(), system.sensor_count());
    let outcome = greedy_swap_model(&mut model, params, arch_init, arch_init, x_hat, e_t, constraints, pools)?;
    let arch = outcome.architecture;
    let (_, breakdown, gains) = cost::total_estimated_cost(system, &arch, arch_init, x_hat, e_t, params)?;
    Ok((arch, breakdown, gains))
}
