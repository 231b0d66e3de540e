//! Priority choice lists for the forced selection and rejection
//! subsequences of greedy swapping.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::network::{ArchitectureConstraints, ArchitectureSet, DeviceKind};

/// One candidate modification of the active architecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Choice {
    NoUpdate,
    AddActuator(usize),
    RemoveActuator(usize),
    AddSensor(usize),
    RemoveSensor(usize),
}

impl Choice {
    pub fn add(kind: DeviceKind, index: usize) -> Self {
        match kind {
            DeviceKind::Actuator => Choice::AddActuator(index),
            DeviceKind::Sensor => Choice::AddSensor(index),
        }
    }

    pub fn remove(kind: DeviceKind, index: usize) -> Self {
        match kind {
            DeviceKind::Actuator => Choice::RemoveActuator(index),
            DeviceKind::Sensor => Choice::RemoveSensor(index),
        }
    }

    pub fn apply_to(&self, arch: &mut ArchitectureSet) {
        match *self {
            Choice::NoUpdate => {}
            Choice::AddActuator(i) => arch.insert(DeviceKind::Actuator, i),
            Choice::RemoveActuator(i) => arch.remove(DeviceKind::Actuator, i),
            Choice::AddSensor(j) => arch.insert(DeviceKind::Sensor, j),
            Choice::RemoveSensor(j) => arch.remove(DeviceKind::Sensor, j),
        }
    }

    pub fn applied(&self, arch: &ArchitectureSet) -> ArchitectureSet {
        let mut out = arch.clone();
        self.apply_to(&mut out);
        out
    }
}

impl fmt::Display for Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Choice::NoUpdate => write!(f, "c0"),
            Choice::AddActuator(i) => write!(f, "+A{i}"),
            Choice::RemoveActuator(i) => write!(f, "-A{i}"),
            Choice::AddSensor(j) => write!(f, "+S{j}"),
            Choice::RemoveSensor(j) => write!(f, "-S{j}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForcingMode {
    Selection,
    Rejection,
}

/// Cardinality bounds in force during one subsequence. Selection shifts all
/// four bounds up by `shift`, capped at the pool sizes so that a pool
/// already at its size never demands another addition; rejection uses the
/// base bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForcedConstraints {
    pub mode: ForcingMode,
    pub base: ArchitectureConstraints,
    pub shift: usize,
    /// Actuator and sensor pool sizes.
    pub pools: (usize, usize),
}

impl ForcedConstraints {
    pub fn selection(base: ArchitectureConstraints, shift: usize, pools: (usize, usize)) -> Self {
        Self {
            mode: ForcingMode::Selection,
            base,
            shift,
            pools,
        }
    }

    pub fn rejection(base: ArchitectureConstraints, shift: usize, pools: (usize, usize)) -> Self {
        Self {
            mode: ForcingMode::Rejection,
            base,
            shift,
            pools,
        }
    }

    fn pool(&self, kind: DeviceKind) -> usize {
        match kind {
            DeviceKind::Actuator => self.pools.0,
            DeviceKind::Sensor => self.pools.1,
        }
    }

    pub fn bounds(&self, kind: DeviceKind) -> (usize, usize) {
        let (lo, hi) = self.base.bounds(kind);
        match self.mode {
            ForcingMode::Rejection => (lo, hi),
            ForcingMode::Selection => {
                let cap = self.pool(kind);
                ((lo + self.shift).min(cap), (hi + self.shift).min(cap))
            }
        }
    }

    pub fn is_satisfied_by(&self, arch: &ArchitectureSet) -> bool {
        [DeviceKind::Actuator, DeviceKind::Sensor].into_iter().all(|kind| {
            let (lo, hi) = self.bounds(kind);
            (lo..=hi).contains(&arch.count(kind))
        })
    }

    /// Candidate modifications in evaluation order: `NoUpdate` (when allowed),
    /// then actuators by index, then sensors by index.
    pub fn choices(&self, arch: &ArchitectureSet) -> Vec<Choice> {
        let kinds = [DeviceKind::Actuator, DeviceKind::Sensor];
        let must: Vec<DeviceKind> = kinds
            .into_iter()
            .filter(|&k| {
                let (lo, hi) = self.bounds(k);
                match self.mode {
                    ForcingMode::Selection => arch.count(k) < lo,
                    ForcingMode::Rejection => arch.count(k) > hi,
                }
            })
            .collect();
        let (active_kinds, allow_no_update) = if must.is_empty() {
            let may = kinds
                .into_iter()
                .filter(|&k| {
                    let (lo, hi) = self.bounds(k);
                    match self.mode {
                        ForcingMode::Selection => arch.count(k) < hi,
                        ForcingMode::Rejection => arch.count(k) > lo,
                    }
                })
                .collect();
            (may, self.is_satisfied_by(arch))
        } else {
            (must, false)
        };

        let mut out = Vec::new();
        if allow_no_update {
            out.push(Choice::NoUpdate);
        }
        for kind in active_kinds {
            match self.mode {
                ForcingMode::Selection => {
                    out.extend((0..self.pool(kind)).filter(|&i| !arch.contains(kind, i)).map(|i| Choice::add(kind, i)))
                }
                ForcingMode::Rejection => out.extend(arch.devices(kind).iter().map(|&i| Choice::remove(kind, i))),
            }
        }
        out
    }
}

/// Choice list for the selection subsequence.
pub fn selection_choices(
    arch: &ArchitectureSet,
    constraints: &ArchitectureConstraints,
    shift: usize,
    pools: (usize, usize),
) -> Vec<Choice> {
    ForcedConstraints::selection(*constraints, shift, pools).choices(arch)
}

/// Choice list for the rejection subsequence.
pub fn rejection_choices(
    arch: &ArchitectureSet,
    constraints: &ArchitectureConstraints,
    shift: usize,
    pools: (usize, usize),
) -> Vec<Choice> {
    ForcedConstraints::rejection(*constraints, shift, pools).choices(arch)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arch(a: &[usize], s: &[usize]) -> ArchitectureSet {
        ArchitectureSet::new(a.to_vec(), s.to_vec()).unwrap()
    }

    fn bounds(act: (usize, usize), sen: (usize, usize)) -> ArchitectureConstraints {
        ArchitectureConstraints {
            act_min: act.0,
            act_max: act.1,
            sen_min: sen.0,
            sen_max: sen.1,
            ..ArchitectureConstraints::uniform(0, 0)
        }
    }

    #[test]
    fn selection_high_priority_actuators_only() {
        let c = bounds((1, 3), (0, 3));
        let out = selection_choices(&arch(&[], &[0, 1]), &c, 1, (4, 4));
        assert_eq!(out, (0..4).map(Choice::AddActuator).collect::<Vec<_>>());
    }

    #[test]
    fn selection_at_shifted_maxima_is_no_update_only() {
        let c = bounds((1, 2), (1, 2));
        let out = selection_choices(&arch(&[0, 1, 2], &[0, 1, 2]), &c, 1, (5, 5));
        assert_eq!(out, vec![Choice::NoUpdate]);
    }

    #[test]
    fn selection_between_bounds_offers_everything() {
        let c = bounds((0, 3), (0, 3));
        let out = selection_choices(&arch(&[0, 1], &[1, 2]), &c, 1, (3, 3));
        assert_eq!(out, vec![Choice::NoUpdate, Choice::AddActuator(2), Choice::AddSensor(0)]);
    }

    #[test]
    fn rejection_above_maximum_only_removes_actuators() {
        let c = bounds((1, 2), (1, 2));
        let out = rejection_choices(&arch(&[0, 1, 2], &[0]), &c, 1, (5, 5));
        assert_eq!(
            out,
            vec![Choice::RemoveActuator(0), Choice::RemoveActuator(1), Choice::RemoveActuator(2)]
        );
    }

    #[test]
    fn rejection_at_minima_is_no_update_only() {
        let c = bounds((1, 3), (2, 3));
        assert_eq!(rejection_choices(&arch(&[4], &[0, 1]), &c, 1, (5, 5)), vec![Choice::NoUpdate]);
    }

    #[test]
    fn rejection_sensor_above_minimum() {
        let c = bounds((1, 3), (1, 3));
        let out = rejection_choices(&arch(&[4], &[0, 3]), &c, 1, (5, 5));
        assert_eq!(out, vec![Choice::NoUpdate, Choice::RemoveSensor(0), Choice::RemoveSensor(3)]);
    }

    #[test]
    fn shifted_bounds_are_capped_at_pool_size() {
        let c = bounds((2, 2), (2, 2));
        let forced = ForcedConstraints::selection(c, 1, (2, 5));
        assert_eq!(forced.bounds(DeviceKind::Actuator), (2, 2));
        assert_eq!(forced.bounds(DeviceKind::Sensor), (3, 3));
        let out = forced.choices(&arch(&[0, 1], &[0, 1]));
        assert_eq!(out, vec![Choice::AddSensor(2), Choice::AddSensor(3), Choice::AddSensor(4)]);
    }

    #[test]
    fn add_then_remove_is_identity() {
        let base = arch(&[1], &[2]);
        for kind in [DeviceKind::Actuator, DeviceKind::Sensor] {
            let mut a = base.clone();
            Choice::add(kind, 3).apply_to(&mut a);
            Choice::remove(kind, 3).apply_to(&mut a);
            assert_eq!(a, base);
        }
        assert_eq!(Choice::NoUpdate.applied(&base), base);
    }
}
