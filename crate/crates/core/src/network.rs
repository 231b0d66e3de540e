//! Linear networks, actuator/sensor pools and architecture sets.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rng::{self, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviceKind {
    Actuator,
    Sensor,
}

impl fmt::Display for DeviceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeviceKind::Actuator => f.write_str("actuator"),
            DeviceKind::Sensor => f.write_str("sensor"),
        }
    }
}

/// A discrete-time LTI network `x⁺ = A x + B u + w`, `y = C x + v` together
/// with the candidate columns of `B` and rows of `C`.
///
/// Actuator candidates are the columns of `actuator_pool` (n×M), sensor
/// candidates the rows of `sensor_pool` (L×n). Measurement noise is
/// independent across sensors with a common variance.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearNetworkSystem {
    a: DMatrix<f64>,
    actuator_pool: DMatrix<f64>,
    sensor_pool: DMatrix<f64>,
    process_noise: DMatrix<f64>,
    sensor_noise_var: f64,
}

impl LinearNetworkSystem {
    pub fn new(
        a: DMatrix<f64>,
        actuator_pool: DMatrix<f64>,
        sensor_pool: DMatrix<f64>,
        process_noise: DMatrix<f64>,
        sensor_noise_var: f64,
    ) -> Result<Self> {
        let n = a.nrows();
        if n == 0 {
            return Err(Error::Argument("state dimension must be at least 1".into()));
        }
        linalg::require_shape(&a, n, n, "dynamics matrix")?;
        if actuator_pool.nrows() != n {
            return Err(Error::dim("actuator pool rows", n, actuator_pool.nrows()));
        }
        if sensor_pool.ncols() != n {
            return Err(Error::dim("sensor pool columns", n, sensor_pool.ncols()));
        }
        linalg::require_shape(&process_noise, n, n, "process noise covariance")?;
        linalg::require_psd(&process_noise, "process noise covariance W")?;
        if !(sensor_noise_var >= 0.0 && sensor_noise_var.is_finite()) {
            return Err(Error::Domain(format!(
                "sensor noise variance must be finite and >= 0, got {sensor_noise_var}"
            )));
        }
        Ok(Self {
            a,
            actuator_pool,
            sensor_pool,
            process_noise: linalg::symmetrize(&process_noise),
            sensor_noise_var,
        })
    }

    /// Both pools are the canonical basis `e_1 … e_n`.
    pub fn with_canonical_pools(
        a: DMatrix<f64>,
        process_noise: DMatrix<f64>,
        sensor_noise_var: f64,
    ) -> Result<Self> {
        let n = a.nrows();
        Self::new(
            a,
            DMatrix::identity(n, n),
            DMatrix::identity(n, n),
            process_noise,
            sensor_noise_var,
        )
    }

    pub fn with_noise(self, process_noise: DMatrix<f64>, sensor_noise_var: f64) -> Result<Self> {
        Self::new(
            self.a,
            self.actuator_pool,
            self.sensor_pool,
            process_noise,
            sensor_noise_var,
        )
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn actuator_pool(&self) -> &DMatrix<f64> {
        &self.actuator_pool
    }

    pub fn sensor_pool(&self) -> &DMatrix<f64> {
        &self.sensor_pool
    }

    pub fn process_noise(&self) -> &DMatrix<f64> {
        &self.process_noise
    }

    pub fn sensor_noise_var(&self) -> f64 {
        self.sensor_noise_var
    }

    pub fn actuator_count(&self) -> usize {
        self.actuator_pool.ncols()
    }

    pub fn sensor_count(&self) -> usize {
        self.sensor_pool.nrows()
    }

    pub fn pool_size(&self, kind: DeviceKind) -> usize {
        match kind {
            DeviceKind::Actuator => self.actuator_count(),
            DeviceKind::Sensor => self.sensor_count(),
        }
    }

    /// Replaces the dynamics matrix, keeping pools and noise.
    pub fn with_dynamics(&self, a: DMatrix<f64>) -> Result<Self> {
        linalg::require_shape(&a, self.n(), self.n(), "dynamics matrix")?;
        Ok(Self { a, ..self.clone() })
    }

    /// Measurement-noise covariance `v_var · I` for `count` active sensors.
    pub fn measurement_noise(&self, count: usize) -> DMatrix<f64> {
        DMatrix::identity(count, count) * self.sensor_noise_var
    }
}

/// Active actuator and sensor index sets, both kept sorted ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawArchitecture", into = "RawArchitecture")]
pub struct ArchitectureSet {
    actuators: Vec<usize>,
    sensors: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawArchitecture {
    actuators: Vec<usize>,
    sensors: Vec<usize>,
}

impl TryFrom<RawArchitecture> for ArchitectureSet {
    type Error = Error;

    fn try_from(raw: RawArchitecture) -> Result<Self> {
        ArchitectureSet::new(raw.actuators, raw.sensors)
    }
}

impl From<ArchitectureSet> for RawArchitecture {
    fn from(arch: ArchitectureSet) -> Self {
        RawArchitecture {
            actuators: arch.actuators,
            sensors: arch.sensors,
        }
    }
}

fn sorted_unique(mut idx: Vec<usize>, kind: DeviceKind) -> Result<Vec<usize>> {
    idx.sort_unstable();
    if let Some(w) = idx.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateIndex { kind, index: w[0] });
    }
    Ok(idx)
}

impl ArchitectureSet {
    pub fn new(actuators: Vec<usize>, sensors: Vec<usize>) -> Result<Self> {
        Ok(Self {
            actuators: sorted_unique(actuators, DeviceKind::Actuator)?,
            sensors: sorted_unique(sensors, DeviceKind::Sensor)?,
        })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full(actuator_count: usize, sensor_count: usize) -> Self {
        Self {
            actuators: (0..actuator_count).collect(),
            sensors: (0..sensor_count).collect(),
        }
    }

    pub fn actuators(&self) -> &[usize] {
        &self.actuators
    }

    pub fn sensors(&self) -> &[usize] {
        &self.sensors
    }

    pub fn devices(&self, kind: DeviceKind) -> &[usize] {
        match kind {
            DeviceKind::Actuator => &self.actuators,
            DeviceKind::Sensor => &self.sensors,
        }
    }

    pub fn count(&self, kind: DeviceKind) -> usize {
        self.devices(kind).len()
    }

    pub fn contains(&self, kind: DeviceKind, index: usize) -> bool {
        self.devices(kind).binary_search(&index).is_ok()
    }

    fn devices_mut(&mut self, kind: DeviceKind) -> &mut Vec<usize> {
        match kind {
            DeviceKind::Actuator => &mut self.actuators,
            DeviceKind::Sensor => &mut self.sensors,
        }
    }

    /// Adds `index`; no-op if already active.
    pub fn insert(&mut self, kind: DeviceKind, index: usize) {
        let set = self.devices_mut(kind);
        if let Err(pos) = set.binary_search(&index) {
            set.insert(pos, index);
        }
    }

    /// Removes `index`; no-op if inactive.
    pub fn remove(&mut self, kind: DeviceKind, index: usize) {
        let set = self.devices_mut(kind);
        if let Ok(pos) = set.binary_search(&index) {
            set.remove(pos);
        }
    }

    pub fn validate(&self, actuator_count: usize, sensor_count: usize) -> Result<()> {
        for (kind, pool) in [
            (DeviceKind::Actuator, actuator_count),
            (DeviceKind::Sensor, sensor_count),
        ] {
            if let Some(&index) = self.devices(kind).iter().find(|&&i| i >= pool) {
                return Err(Error::PoolBounds { kind, index, pool });
            }
        }
        Ok(())
    }

    pub fn validate_for(&self, system: &LinearNetworkSystem) -> Result<()> {
        self.validate(system.actuator_count(), system.sensor_count())
    }

    /// Inverse of [`indicator`].
    pub fn from_indicators(actuators: &[bool], sensors: &[bool]) -> Self {
        let pick = |v: &[bool]| v.iter().enumerate().filter(|(_, &on)| on).map(|(i, _)| i).collect();
        Self {
            actuators: pick(actuators),
            sensors: pick(sensors),
        }
    }
}

impl fmt::Display for ArchitectureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A={:?} S={:?}", self.actuators, self.sensors)
    }
}

/// `B` for the active actuators: pool columns in ascending index order.
pub fn build_input_matrix(system: &LinearNetworkSystem, arch: &ArchitectureSet) -> Result<DMatrix<f64>> {
    arch.validate_for(system)?;
    Ok(input_matrix_unchecked(system.actuator_pool(), arch.actuators()))
}

/// `C` for the active sensors: pool rows in ascending index order.
pub fn build_output_matrix(system: &LinearNetworkSystem, arch: &ArchitectureSet) -> Result<DMatrix<f64>> {
    arch.validate_for(system)?;
    Ok(output_matrix_unchecked(system.sensor_pool(), arch.sensors()))
}

pub(crate) fn input_matrix_unchecked(pool: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(pool.nrows(), idx.len(), |i, j| pool[(i, idx[j])])
}

pub(crate) fn output_matrix_unchecked(pool: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), pool.ncols(), |i, j| pool[(idx[i], j)])
}

/// Binary indicator of the active devices of `kind` over a pool of
/// `pool_size` candidates. Indices outside the pool are ignored.
pub fn indicator(arch: &ArchitectureSet, kind: DeviceKind, pool_size: usize) -> Vec<bool> {
    let mut out = vec![false; pool_size];
    for &i in arch.devices(kind) {
        if i < pool_size {
            out[i] = true;
        }
    }
    out
}

/// Limit on the number of architecture changes per greedy-swap call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChangeBudget {
    Bounded(usize),
    Unbounded(Unbounded),
}

/// Serialized as the string `"unbounded"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unbounded {
    Unbounded,
}

impl ChangeBudget {
    pub const UNBOUNDED: ChangeBudget = ChangeBudget::Unbounded(Unbounded::Unbounded);

    pub fn limit(&self) -> Option<usize> {
        match self {
            ChangeBudget::Bounded(n) => Some(*n),
            ChangeBudget::Unbounded(_) => None,
        }
    }
}

/// Cardinality bounds on the active sets plus the change budget of greedy
/// swapping (`max_changes` per call, `per_subsequence` per selection or
/// rejection subsequence).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchitectureConstraints {
    pub act_min: usize,
    pub act_max: usize,
    pub sen_min: usize,
    pub sen_max: usize,
    #[serde(default = "default_budget")]
    pub max_changes: ChangeBudget,
    #[serde(default = "default_per_subsequence")]
    pub per_subsequence: usize,
}

fn default_budget() -> ChangeBudget {
    ChangeBudget::UNBOUNDED
}

fn default_per_subsequence() -> usize {
    1
}

impl ArchitectureConstraints {
    /// Same bounds for both kinds, unbounded changes, one change per
    /// subsequence.
    pub fn uniform(min: usize, max: usize) -> Self {
        Self {
            act_min: min,
            act_max: max,
            sen_min: min,
            sen_max: max,
            max_changes: ChangeBudget::UNBOUNDED,
            per_subsequence: 1,
        }
    }

    pub fn with_budget(mut self, max_changes: ChangeBudget, per_subsequence: usize) -> Self {
        self.max_changes = max_changes;
        self.per_subsequence = per_subsequence;
        self
    }

    pub fn bounds(&self, kind: DeviceKind) -> (usize, usize) {
        match kind {
            DeviceKind::Actuator => (self.act_min, self.act_max),
            DeviceKind::Sensor => (self.sen_min, self.sen_max),
        }
    }

    pub fn validate(&self, actuator_count: usize, sensor_count: usize) -> Result<()> {
        for (kind, pool) in [
            (DeviceKind::Actuator, actuator_count),
            (DeviceKind::Sensor, sensor_count),
        ] {
            let (lo, hi) = self.bounds(kind);
            if lo > hi {
                return Err(Error::Argument(format!("{kind} lower bound {lo} exceeds upper bound {hi}")));
            }
            if hi > pool {
                return Err(Error::Argument(format!("{kind} upper bound {hi} exceeds pool size {pool}")));
            }
        }
        if self.per_subsequence == 0 {
            return Err(Error::Argument("per_subsequence must be at least 1".into()));
        }
        if let Some(n) = self.max_changes.limit() {
            if self.per_subsequence > n {
                return Err(Error::Argument(format!(
                    "per_subsequence {} exceeds max_changes {n}",
                    self.per_subsequence
                )));
            }
        }
        Ok(())
    }

    pub fn is_satisfied_by(&self, arch: &ArchitectureSet) -> bool {
        satisfies_constraints(arch, self)
    }
}

pub fn satisfies_constraints(arch: &ArchitectureSet, constraints: &ArchitectureConstraints) -> bool {
    let a = arch.actuators().len();
    let s = arch.sensors().len();
    (constraints.act_min..=constraints.act_max).contains(&a)
        && (constraints.sen_min..=constraints.sen_max).contains(&s)
}

/// Orthonormal eigenbasis and eigenvalues drawn for [`random_network`].
#[derive(Debug, Clone)]
pub struct SpectralFactors {
    pub basis: DMatrix<f64>,
    pub eigenvalues: DVector<f64>,
}

impl SpectralFactors {
    pub fn dynamics(&self) -> DMatrix<f64> {
        &self.basis * DMatrix::from_diagonal(&self.eigenvalues) * self.basis.transpose()
    }
}

/// Draws `V` (Q factor of a standard-normal matrix, columns sign-normalized
/// so `diag(R) > 0`), then `n` magnitudes uniform on `[lo, hi]`, then `n`
/// fair signs, all from the network stream of `seed` in that order.
pub fn random_spectral_factors(n: usize, lo: f64, hi: f64, seed: u64) -> Result<SpectralFactors> {
    if n < 1 {
        return Err(Error::Argument("network dimension must be at least 1".into()));
    }
    if !(0.0 <= lo && lo <= hi && hi.is_finite()) {
        return Err(Error::Argument(format!("invalid eigenvalue magnitude range [{lo}, {hi}]")));
    }
    let mut rng = rng::stream(seed, Stream::Network);
    let g = rng::standard_normal_matrix(&mut rng, n, n);
    let qr = g.qr();
    let r = qr.r();
    let mut basis = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            basis.column_mut(j).neg_mut();
        }
    }
    let magnitudes: Vec<f64> = (0..n)
        .map(|_| if lo == hi { lo } else { rng.random_range(lo..=hi) })
        .collect();
    let eigenvalues = DVector::from_iterator(
        n,
        magnitudes
            .into_iter()
            .map(|m| if rng.random_bool(0.5) { -m } else { m }),
    );
    Ok(SpectralFactors { basis, eigenvalues })
}

/// Symmetric random network `A = V Λ Vᵀ` with `|λ_i| ∈ [1 − eig_band, 1 + eig_band]`
/// and canonical-basis pools. Noise defaults to `W = I`, `v_var = 1`; use
/// [`LinearNetworkSystem::with_noise`] to change it.
pub fn random_network(n: usize, eig_band: f64, seed: u64) -> Result<LinearNetworkSystem> {
    if !(0.0..1.0).contains(&eig_band) {
        return Err(Error::Argument(format!("eig_band must lie in [0, 1), got {eig_band}")));
    }
    let factors = random_spectral_factors(n, 1.0 - eig_band, 1.0 + eig_band, seed)?;
    LinearNetworkSystem::with_canonical_pools(factors.dynamics(), DMatrix::identity(n, n), 1.0)
}

/// Symmetric random network whose eigenvalue magnitudes are uniform on
/// `[0, spectral_radius]`: mostly stable, with a few unstable modes when the
/// radius exceeds one.
pub fn random_network_in_disc(n: usize, spectral_radius: f64, seed: u64) -> Result<LinearNetworkSystem> {
    let factors = random_spectral_factors(n, 0.0, spectral_radius, seed)?;
    LinearNetworkSystem::with_canonical_pools(factors.dynamics(), DMatrix::identity(n, n), 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        v
    }

    fn canonical(n: usize) -> LinearNetworkSystem {
        LinearNetworkSystem::with_canonical_pools(DMatrix::identity(n, n), DMatrix::identity(n, n), 1.0).unwrap()
    }

    #[test]
    fn input_matrix_stacks_selected_columns() {
        let sys = canonical(3);
        let arch = ArchitectureSet::new(vec![2, 0], vec![]).unwrap();
        let b = build_input_matrix(&sys, &arch).unwrap();
        assert_eq!(b.column(0), e(3, 0));
        assert_eq!(b.column(1), e(3, 2));
    }

    #[test]
    fn empty_sets_give_empty_matrices() {
        let sys = canonical(3);
        let arch = ArchitectureSet::empty();
        assert_eq!(build_input_matrix(&sys, &arch).unwrap().shape(), (3, 0));
        assert_eq!(build_output_matrix(&sys, &arch).unwrap().shape(), (0, 3));
    }

    #[test]
    fn out_of_range_index_is_a_pool_error() {
        let sys = canonical(1);
        let arch = ArchitectureSet::new(vec![1], vec![]).unwrap();
        assert_eq!(
            build_input_matrix(&sys, &arch),
            Err(Error::PoolBounds {
                kind: DeviceKind::Actuator,
                index: 1,
                pool: 1
            })
        );
    }

    #[test]
    fn output_matrix_stacks_selected_rows() {
        let sys = canonical(2);
        let c = build_output_matrix(&sys, &ArchitectureSet::new(vec![], vec![1]).unwrap()).unwrap();
        assert_eq!(c, DMatrix::from_row_slice(1, 2, &[0.0, 1.0]));
        let c = build_output_matrix(&sys, &ArchitectureSet::new(vec![], vec![0, 1]).unwrap()).unwrap();
        assert_eq!(c, DMatrix::identity(2, 2));
    }

    #[test]
    fn indicators() {
        let arch = ArchitectureSet::new(vec![0, 2], vec![]).unwrap();
        assert_eq!(indicator(&arch, DeviceKind::Actuator, 3), vec![true, false, true]);
        assert_eq!(indicator(&ArchitectureSet::empty(), DeviceKind::Actuator, 2), vec![false, false]);
        assert_eq!(indicator(&ArchitectureSet::full(2, 0), DeviceKind::Actuator, 2), vec![true, true]);
    }

    #[test]
    fn duplicates_rejected() {
        assert!(matches!(
            ArchitectureSet::new(vec![1, 1], vec![]),
            Err(Error::DuplicateIndex { .. })
        ));
    }

    #[test]
    fn constraint_checks() {
        let five = ArchitectureSet::new((0..5).collect(), (0..5).collect()).unwrap();
        assert!(satisfies_constraints(&five, &ArchitectureConstraints::uniform(5, 5)));
        let c = ArchitectureConstraints {
            act_min: 1,
            ..ArchitectureConstraints::uniform(0, 3)
        };
        assert!(!satisfies_constraints(&ArchitectureSet::empty(), &c));
        let c = ArchitectureConstraints {
            act_min: 1,
            act_max: 2,
            sen_min: 1,
            sen_max: 3,
            ..ArchitectureConstraints::uniform(0, 0)
        };
        let arch = ArchitectureSet::new(vec![0, 1], vec![4]).unwrap();
        assert!(satisfies_constraints(&arch, &c));
    }

    #[test]
    fn constraint_validation() {
        let mut c = ArchitectureConstraints::uniform(2, 1);
        assert!(c.validate(5, 5).is_err());
        c = ArchitectureConstraints::uniform(1, 6);
        assert!(c.validate(5, 5).is_err());
        c = ArchitectureConstraints::uniform(1, 2).with_budget(ChangeBudget::Bounded(1), 2);
        assert!(c.validate(5, 5).is_err());
        c = ArchitectureConstraints::uniform(1, 2).with_budget(ChangeBudget::Bounded(2), 1);
        assert!(c.validate(5, 5).is_ok());
    }

    #[test]
    fn random_network_spectrum_band() {
        let sys = random_network(50, 0.1, 7).unwrap();
        let eig = nalgebra::SymmetricEigen::new(sys.a().clone()).eigenvalues;
        assert!(eig.iter().all(|l| (l.abs() - 1.0).abs() <= 0.1 + 1e-10));
    }

    #[test]
    fn zero_band_gives_unit_magnitudes() {
        let f = random_spectral_factors(6, 1.0, 1.0, 3).unwrap();
        assert!(f.eigenvalues.iter().all(|l| l.abs() == 1.0));
    }

    #[test]
    fn random_network_is_deterministic() {
        let a = random_network(8, 0.2, 11).unwrap();
        let b = random_network(8, 0.2, 11).unwrap();
        assert_eq!(a.a().as_slice(), b.a().as_slice());
        assert_ne!(a.a(), random_network(8, 0.2, 12).unwrap().a());
    }

    #[test]
    fn random_network_factors_are_orthonormal() {
        let f = random_spectral_factors(12, 0.9, 1.1, 5).unwrap();
        let vtv = f.basis.tr_mul(&f.basis);
        assert!((vtv - DMatrix::identity(12, 12)).amax() < 1e-10);
        let mut sampled: Vec<f64> = f.eigenvalues.iter().copied().collect();
        let mut computed: Vec<f64> = nalgebra::SymmetricEigen::new(f.dynamics()).eigenvalues.iter().copied().collect();
        sampled.sort_by(f64::total_cmp);
        computed.sort_by(f64::total_cmp);
        for (s, c) in sampled.iter().zip(&computed) {
            assert!((s - c).abs() < 1e-8);
        }
    }

    #[test]
    fn bad_arguments() {
        assert!(random_network(0, 0.1, 1).is_err());
        assert!(random_network(3, 1.0, 1).is_err());
    }

    #[test]
    fn architecture_serde_sorts_and_validates() {
        let arch: ArchitectureSet = serde_json::from_str(r#"{"actuators":[3,1],"sensors":[0]}"#).unwrap();
        assert_eq!(arch.actuators(), &[1, 3]);
        assert!(serde_json::from_str::<ArchitectureSet>(r#"{"actuators":[1,1],"sensors":[]}"#).is_err());
    }

    #[test]
    fn budget_serde() {
        let b: ChangeBudget = serde_json::from_str("\"unbounded\"").unwrap();
        assert_eq!(b, ChangeBudget::UNBOUNDED);
        let b: ChangeBudget = serde_json::from_str("2").unwrap();
        assert_eq!(b.limit(), Some(2));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn input_columns_follow_sorted_indices(bits in proptest::collection::vec(any::<bool>(), 1..=6)) {
                let m = bits.len();
                let n = 3;
                let pool = DMatrix::from_fn(n, m, |i, j| (i * 10 + j) as f64);
                let sys = LinearNetworkSystem::new(DMatrix::identity(n, n), pool.clone(), DMatrix::identity(n, n), DMatrix::zeros(n, n), 1.0).unwrap();
                let arch = ArchitectureSet::from_indicators(&bits, &[]);
                let b = build_input_matrix(&sys, &arch).unwrap();
                prop_assert_eq!(b.ncols(), arch.actuators().len());
                for (j, &idx) in arch.actuators().iter().enumerate() {
                    prop_assert_eq!(b.column(j), pool.column(idx));
                }
            }

            #[test]
            fn indicator_round_trip(a in proptest::collection::vec(any::<bool>(), 0..12), s in proptest::collection::vec(any::<bool>(), 0..12)) {
                let arch = ArchitectureSet::from_indicators(&a, &s);
                prop_assert_eq!(indicator(&arch, DeviceKind::Actuator, a.len()), a.clone());
                prop_assert_eq!(indicator(&arch, DeviceKind::Sensor, s.len()), s.clone());
                prop_assert_eq!(arch.actuators().len(), a.iter().filter(|&&b| b).count());
            }
        }
    }
}
