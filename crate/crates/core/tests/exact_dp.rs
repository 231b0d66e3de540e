mod common;

use common::instances::dp_problem;
use common::*;
use nalgebra::DVector;
use selftune::exact_dp::{
    brute_force_value, dp_backward, evaluate, sequence_value, DpOptions,
};
use selftune::linalg;
use selftune::synthesis::lqr_backward;

#[test]
fn dp_matches_brute_force_on_random_states() {
    for seed in 0..10 {
        let problem = dp_problem(seed, 2, 3, 1, 3);
        let stages = dp_backward(&problem, &DpOptions::default()).unwrap();
        let mut g = rng(1000 + seed);
        for _ in 0..20 {
            let x = normal_vector(&mut g, 2) * 3.0;
            let (dp, _) = evaluate(&stages[0], &x);
            let oracle = brute_force_value(&problem, &x).unwrap();
            assert!(rel_err(dp, oracle) < 1e-8, "seed {seed}: dp {dp} vs brute force {oracle}");
        }
    }
}

#[test]
fn minimizing_piece_names_an_optimal_first_architecture() {
    let problem = dp_problem(3, 2, 3, 1, 2);
    let stages = dp_backward(&problem, &DpOptions::default()).unwrap();
    let x = DVector::from_vec(vec![1.0, -2.0]);
    let (value, first) = evaluate(&stages[0], &x);
    let first = first.unwrap();
    let best_with_first = (0..3)
        .map(|second| sequence_value(&problem, &[first, second], &x).unwrap())
        .fold(f64::INFINITY, f64::min);
    assert!(rel_err(best_with_first, value) < 1e-10);
}

#[test]
fn single_architecture_reduces_to_finite_horizon_lqr() {
    for seed in 0..10 {
        let problem = dp_problem(seed, 3, 1, 1, 4);
        let stages = dp_backward(&problem, &DpOptions::default()).unwrap();
        let schedule = lqr_backward(&problem.a, &problem.pool, &problem.q, &problem.r, &problem.q_terminal, 4).unwrap();
        for (tau, stage) in stages.iter().enumerate() {
            assert_eq!(stage.len(), 1);
            let piece = &stage.pieces()[0];
            assert!((&piece.p - &schedule.costs[tau]).norm() <= 1e-9 * schedule.costs[tau].norm().max(1.0));
            let offset: f64 = schedule.costs[tau + 1..]
                .iter()
                .map(|p| (p * &problem.w).trace())
                .sum();
            assert!(rel_err(piece.q, offset) < 1e-10, "tau {tau}: offset {} vs {offset}", piece.q);
        }
    }
}

#[test]
fn value_is_quadratic_in_state_up_to_the_offset() {
    let problem = dp_problem(7, 2, 3, 2, 3);
    let stages = dp_backward(&problem, &DpOptions::default()).unwrap();
    let zero = evaluate(&stages[0], &DVector::zeros(2)).0;
    let mut g = rng(70);
    for _ in 0..20 {
        let x = normal_vector(&mut g, 2);
        let c = uniform(&mut g, -4.0, 4.0);
        let base = evaluate(&stages[0], &x).0 - zero;
        let scaled = evaluate(&stages[0], &(&x * c)).0 - zero;
        assert!((scaled - c * c * base).abs() <= 1e-8 * scaled.abs().max(1.0));
    }
}

#[test]
fn pruning_preserves_the_value_function() {
    for seed in 0..5 {
        let problem = dp_problem(seed, 2, 4, 2, 3);
        let full = dp_backward(&problem, &DpOptions::default()).unwrap();
        let pruned = dp_backward(&problem, &DpOptions { prune: true, ..DpOptions::default() }).unwrap();
        let mut g = rng(500 + seed);
        for _ in 0..50 {
            let x = normal_vector(&mut g, 2);
            for (f, p) in full.iter().zip(&pruned) {
                assert!(p.len() <= f.len());
                assert!(rel_err(evaluate(p, &x).0, evaluate(f, &x).0) < 1e-12);
            }
        }
    }
}

#[test]
fn dp_value_never_exceeds_any_fixed_sequence() {
    let problem = dp_problem(11, 2, 3, 1, 3);
    let stages = dp_backward(&problem, &DpOptions::default()).unwrap();
    let mut g = rng(110);
    for _ in 0..20 {
        let x = normal_vector(&mut g, 2);
        let dp = evaluate(&stages[0], &x).0;
        for s in 0..27 {
            let seq = [s / 9, (s / 3) % 3, s % 3];
            assert!(dp <= sequence_value(&problem, &seq, &x).unwrap() * (1.0 + 1e-12) + 1e-12);
        }
    }
}

#[test]
fn stagewise_values_are_psd_quadratics() {
    let problem = dp_problem(2, 3, 3, 2, 3);
    for stage in dp_backward(&problem, &DpOptions::default()).unwrap() {
        for piece in stage.pieces() {
            assert!(linalg::is_psd(&piece.p, 1e-8));
            assert!(piece.q >= 0.0);
        }
    }
}
