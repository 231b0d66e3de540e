//! Combinatorial architecture search.
//!
//! Plain greedy selection and rejection work on any index pool and any
//! set metric. Greedy swapping alternates forced selection and rejection
//! subsequences starting from the previous architecture. The state-feedback
//! selector grows an actuator set by infinite-horizon LQR cost.

mod choices;
mod state_feedback;
mod swap;

pub use choices::{rejection_choices, selection_choices, Choice, ForcedConstraints, ForcingMode};
pub use state_feedback::{
    greedy_actuator_state_feedback, least_squares_identify, ActuatorSelector, Identification, StateFeedbackSelection,
};
pub use swap::{greedy_swap, greedy_swap_model, greedy_swap_with, SwapOutcome, SwapStep};

use crate::error::{Error, Result};

/// Swap distance `max(|s1 \ s2|, |s2 \ s1|)` between two sorted index sets.
pub fn change_count(s1: &[usize], s2: &[usize]) -> usize {
    let only_first = s1.iter().filter(|i| s2.binary_search(i).is_err()).count();
    let only_second = s2.iter().filter(|i| s1.binary_search(i).is_err()).count();
    only_first.max(only_second)
}

/// NaN is ranked with +∞ so that every metric value is comparable.
pub(crate) fn rank(value: f64) -> f64 {
    if value.is_nan() {
        f64::INFINITY
    } else {
        value
    }
}

/// Index of the first strict minimum.
pub(crate) fn argmin<I: IntoIterator<Item = f64>>(values: I) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.into_iter().enumerate() {
        let v = rank(v);
        if best.is_none_or(|(_, b)| v < b) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

/// Greedy selection: grows from the empty set, adding at each step the element whose
/// inclusion gives the lowest metric, until `l_max` elements are chosen.
/// Ties go to the lowest pool index; the metric sees sets in ascending order.
pub fn greedy_select<F>(pool: &[usize], mut metric: F, l_max: usize) -> Result<Vec<usize>>
where
    F: FnMut(&[usize]) -> f64,
{
    let mut pool = pool.to_vec();
    pool.sort_unstable();
    pool.dedup();
    if l_max > pool.len() {
        return Err(Error::Argument(format!(
            "cardinality bound {l_max} exceeds pool size {}",
            pool.len()
        )));
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(l_max);
    while chosen.len() < l_max {
        let candidates: Vec<usize> = pool.iter().copied().filter(|c| chosen.binary_search(c).is_err()).collect();
        let scores = candidates.iter().map(|&c| {
            let mut trial = chosen.clone();
            let pos = trial.binary_search(&c).unwrap_err();
            trial.insert(pos, c);
            metric(&trial)
        });
        let best = candidates[argmin(scores).expect("complement is nonempty below the bound")];
        let pos = chosen.binary_search(&best).unwrap_err();
        chosen.insert(pos, best);
    }
    Ok(chosen)
}

/// Greedy rejection: shrinks from the full pool, removing at each step the element
/// whose removal gives the lowest metric, until at most `l_max` remain.
pub fn greedy_reject<F>(pool: &[usize], mut metric: F, l_max: usize) -> Result<Vec<usize>>
where
    F: FnMut(&[usize]) -> f64,
{
    let mut kept = pool.to_vec();
    kept.sort_unstable();
    kept.dedup();
    while kept.len() > l_max {
        let scores = (0..kept.len()).map(|pos| {
            let mut trial = kept.clone();
            trial.remove(pos);
            metric(&trial)
        });
        let pos = argmin(scores).expect("set is nonempty above the bound");
        kept.remove(pos);
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn table(entries: &[(&[usize], f64)]) -> impl Fn(&[usize]) -> f64 {
        let map: HashMap<Vec<usize>, f64> = entries.iter().map(|(k, v)| (k.to_vec(), *v)).collect();
        move |s: &[usize]| map.get(s).copied().unwrap_or(f64::INFINITY)
    }

    #[test]
    fn change_count_examples() {
        assert_eq!(change_count(&[1, 2], &[1, 2]), 0);
        assert_eq!(change_count(&[1, 2], &[2, 3]), 1);
        assert_eq!(change_count(&[1], &[2, 3, 4]), 3);
    }

    #[test]
    fn select_examples() {
        let m = table(&[(&[0], 1.0), (&[1], 2.0)]);
        assert_eq!(greedy_select(&[0, 1], m, 1).unwrap(), vec![0]);
        assert_eq!(greedy_select(&[0, 1, 2], |_| 0.0, 3).unwrap(), vec![0, 1, 2]);
        assert!(greedy_select(&[0, 1], |_| 0.0, 3).is_err());
    }

    #[test]
    fn select_is_suboptimal_on_constructed_metric() {
        // a=0, b=1, c=2
        let m = table(&[
            (&[0], 1.0),
            (&[1], 2.0),
            (&[2], 3.0),
            (&[0, 1], 0.0),
            (&[0, 2], 4.0),
            (&[1, 2], -5.0),
        ]);
        assert_eq!(greedy_select(&[0, 1, 2], &m, 2).unwrap(), vec![0, 1]);
        let pairs: [&[usize]; 3] = [&[0, 1], &[0, 2], &[1, 2]];
        let best = pairs.iter().min_by(|x, y| m(x).total_cmp(&m(y))).unwrap();
        assert_eq!(*best, &[1usize, 2][..]);
    }

    #[test]
    fn reject_examples() {
        assert_eq!(greedy_reject(&[0, 1], |_| 0.0, 2).unwrap(), vec![0, 1]);
        let m = table(&[(&[0], 3.0), (&[1], 1.0)]);
        assert_eq!(greedy_reject(&[0, 1], m, 1).unwrap(), vec![1]);
    }

    #[test]
    fn reject_with_all_infinite_frontier_drops_lowest_indices() {
        let m = |s: &[usize]| if s.len() == 3 { 1.0 } else { f64::INFINITY };
        assert_eq!(greedy_reject(&[0, 1, 2], m, 1).unwrap(), vec![2]);
    }

    fn subsets(pool: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << pool) {
            if mask.count_ones() as usize == k {
                out.push((0..pool).filter(|i| mask & (1 << i) != 0).collect());
            }
        }
        out
    }

    proptest! {
        #[test]
        fn change_count_symmetric(a in proptest::collection::btree_set(0usize..12, 0..8),
                                  b in proptest::collection::btree_set(0usize..12, 0..8)) {
            let a: Vec<usize> = a.into_iter().collect();
            let b: Vec<usize> = b.into_iter().collect();
            prop_assert_eq!(change_count(&a, &b), change_count(&b, &a));
            if a.len() == b.len() {
                prop_assert_eq!(change_count(&a, &b) == 0, a == b);
            }
        }

        #[test]
        fn select_is_exact_for_modular_metrics(weights in proptest::collection::vec(-10.0f64..10.0, 1..=8),
                                               k_frac in 0.0f64..1.0) {
            let pool: Vec<usize> = (0..weights.len()).collect();
            let k = ((weights.len() as f64) * k_frac) as usize;
            let metric = |s: &[usize]| s.iter().map(|&i| weights[i]).sum::<f64>();
            let greedy = metric(&greedy_select(&pool, metric, k).unwrap());
            let exact = subsets(weights.len(), k).iter().map(|s| metric(s)).fold(f64::INFINITY, f64::min);
            prop_assert!((greedy - exact).abs() < 1e-9);
        }
    }
}
