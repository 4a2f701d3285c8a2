//! Distinguishability and entanglement along a time grid, and the backflow
//! measures built from them.
//!
//! `N_D` accumulates every increase of the trace distance between two evolving
//! states; `N_E` does the same for the entanglement of formation between the
//! system and an untouched ancilla prepared in a Bell state. Both integrals are
//! discretized as sums of positive increments on a uniform grid.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::channels::DecoherenceRates;
// Unused when std is linked (tests), where inherent f64 methods win.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matcore::{clip_eigenvalue, hermitian_eigen, pauli, tensor, CMatrix, DensityMatrix, PureState};
use crate::scenario::Scenario;

/// Increments smaller than this do not count as backflow.
pub const INCREMENT_DEADBAND: f64 = 1e-12;
/// Spectral weights of `ρ` below this are dropped before building `τ`.
const RANK_CUTOFF: f64 = 1e-14;

/// Uniform grid `t_k = k·t_max/steps`, `k = 0..=steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_max: f64,
    steps: usize,
}

impl TimeGrid {
    pub const DEFAULT_T_MAX: f64 = 20.0;
    pub const DEFAULT_STEPS: usize = 4000;

    pub fn new(t_max: f64, steps: usize) -> Result<Self> {
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::Config(format!("t_max must be positive, got {t_max}")));
        }
        if steps == 0 {
            return Err(Error::Config("grid needs at least one step".into()));
        }
        Ok(TimeGrid { t_max, steps })
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn t(&self, k: usize) -> f64 {
        k as f64 * self.t_max / self.steps as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.steps).map(move |k| self.t(k))
    }
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid {
            t_max: Self::DEFAULT_T_MAX,
            steps: Self::DEFAULT_STEPS,
        }
    }
}

/// A scalar signal sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub values: Vec<f64>,
    /// Post-selection probability per grid point when a supermap is used. For
    /// state pairs this is the smaller of the two members' probabilities.
    pub success_probs: Option<Vec<f64>>,
}

impl Trajectory {
    pub fn new(grid: TimeGrid, values: Vec<f64>, success_probs: Option<Vec<f64>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Config(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NumericContract(format!("non-finite value at t={}", grid.t(k))));
        }
        if let Some(p) = &success_probs {
            if p.len() != grid.len() {
                return Err(Error::Config("success probability length mismatch".into()));
            }
        }
        Ok(Trajectory {
            grid,
            values,
            success_probs,
        })
    }
}

/// Accumulated backflow of one signal.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryResult {
    pub measure_value: f64,
    /// Maximal runs of increasing signal, as `(t_start, t_end)`.
    pub revival_intervals: Vec<(f64, f64)>,
    pub signal: Trajectory,
}

/// Two qubit states evolved side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct StatePair {
    pub rho1: DensityMatrix,
    pub rho2: DensityMatrix,
}

impl StatePair {
    pub fn plus_minus() -> Self {
        StatePair {
            rho1: DensityMatrix::from_pure(&PureState::plus()),
            rho2: DensityMatrix::from_pure(&PureState::minus()),
        }
    }

    pub fn zero_one() -> Self {
        StatePair {
            rho1: DensityMatrix::from_pure(&PureState::zero()),
            rho2: DensityMatrix::from_pure(&PureState::one()),
        }
    }

    /// Pure states at `±n` on the Bloch sphere; `n` is normalized here.
    pub fn antipodal(n: [f64; 3]) -> Result<Self> {
        let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if !(len > 0.0) {
            return Err(Error::Config("antipodal pair needs a nonzero direction".into()));
        }
        let u = [n[0] / len, n[1] / len, n[2] / len];
        Ok(StatePair {
            rho1: DensityMatrix::from_bloch(u)?,
            rho2: DensityMatrix::from_bloch([-u[0], -u[1], -u[2]])?,
        })
    }
}

/// `½ Σ |eig(ρ₁ − ρ₂)|`.
pub fn trace_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::Config(format!(
            "trace distance between dims {} and {}",
            rho1.dim(),
            rho2.dim()
        )));
    }
    let diff = rho1.matrix() - rho2.matrix();
    let eig = hermitian_eigen(&diff.hermitian_part())?;
    let d = 0.5 * eig.values.iter().map(|v| v.abs()).sum::<f64>();
    Ok(d.min(1.0))
}

fn sigma_y_sigma_y() -> CMatrix {
    tensor(&pauli::y(), &pauli::y())
}

/// Wootters concurrence of a two-qubit state.
///
/// With `ρ = WW†` the numbers `λ_i` (square roots of the spectrum of
/// `ρ(σ_y⊗σ_y)ρ*(σ_y⊗σ_y)`) are the singular values of the complex symmetric
/// matrix `τ = Wᵀ(σ_y⊗σ_y)W`. They are read off as the positive eigenvalues of
/// the Hermitian matrix `[[0, τ], [τ†, 0]]`, which avoids taking square roots
/// of near-zero eigenvalues.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::Config(format!(
            "concurrence needs a two-qubit state, got dim {}",
            rho.dim()
        )));
    }
    let eig = hermitian_eigen(rho.matrix())?;
    let mut w = CMatrix::zeros(4);
    for (k, &mu) in eig.values.iter().enumerate() {
        let mu = clip_eigenvalue(mu)?;
        if mu <= RANK_CUTOFF {
            continue;
        }
        let s = mu.sqrt();
        for r in 0..4 {
            w.set(r, k, eig.vectors.get(r, k) * s);
        }
    }
    let tau = &(&w.transpose() * &sigma_y_sigma_y()) * &w;
    let mut h = CMatrix::zeros(8);
    for i in 0..4 {
        for j in 0..4 {
            let v = tau.get(i, j);
            h.set(i, 4 + j, v);
            h.set(4 + j, i, v.conj());
        }
    }
    let sv = hermitian_eigen(&h)?.values;
    let c = sv[0] - sv[1] - sv[2] - sv[3];
    Ok(c.clamp(0.0, 1.0))
}

/// `h(x) = −x log₂x − (1−x) log₂(1−x)`.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// `E = h(½ + √(1−C²)/2)`.
pub fn entanglement_of_formation(c: f64) -> Result<f64> {
    if !(-1e-9..=1.0 + 1e-9).contains(&c) {
        return Err(Error::NumericContract(format!("concurrence {c} outside [0, 1]")));
    }
    let c = c.clamp(0.0, 1.0);
    Ok(binary_entropy(0.5 + 0.5 * (1.0 - c * c).max(0.0).sqrt()))
}

/// `Σ max(0, v_{k+1} − v_k)` with a dead-band, plus the revival intervals.
pub fn backflow_accumulate(signal: Trajectory) -> MemoryResult {
    let mut total = 0.0;
    let mut intervals = Vec::new();
    let mut open: Option<f64> = None;
    let v = &signal.values;
    for k in 0..v.len().saturating_sub(1) {
        let inc = v[k + 1] - v[k];
        if inc > INCREMENT_DEADBAND {
            total += inc;
            if open.is_none() {
                open = Some(signal.grid.t(k));
            }
        } else if let Some(start) = open.take() {
            intervals.push((start, signal.grid.t(k)));
        }
    }
    if let Some(start) = open {
        intervals.push((start, signal.grid.t(v.len() - 1)));
    }
    MemoryResult {
        measure_value: total,
        revival_intervals: intervals,
        signal,
    }
}

/// Trace distance of the evolved pair at every grid point.
pub fn trace_distance_trajectory(scenario: &Scenario, pair: &StatePair, grid: &TimeGrid) -> Result<Trajectory> {
    scenario.validate()?;
    let mut values = Vec::with_capacity(grid.len());
    let mut probs = Vec::with_capacity(grid.len());
    let mut postselected = false;
    for t in grid.points() {
        let map = scenario.step_map(t, false)?;
        postselected = map.is_postselected();
        let a = map.apply(&pair.rho1)?;
        let b = map.apply(&pair.rho2)?;
        values.push(trace_distance(&a.state, &b.state)?);
        probs.push(a.success_prob.min(b.success_prob));
    }
    Trajectory::new(*grid, values, postselected.then_some(probs))
}

/// Concurrence between system and ancilla, starting from the Bell state.
pub fn concurrence_trajectory(scenario: &Scenario, grid: &TimeGrid) -> Result<Trajectory> {
    scenario.validate()?;
    let bell = DensityMatrix::from_pure(&PureState::bell());
    let mut values = Vec::with_capacity(grid.len());
    let mut probs = Vec::with_capacity(grid.len());
    let mut postselected = false;
    for t in grid.points() {
        let map = scenario.step_map(t, true)?;
        postselected = map.is_postselected();
        let step = map.apply(&bell)?;
        values.push(concurrence(&step.state)?);
        probs.push(step.success_prob);
    }
    Trajectory::new(*grid, values, postselected.then_some(probs))
}

/// Entanglement of formation along the grid, from a concurrence trajectory.
pub fn eof_trajectory(concurrences: &Trajectory) -> Result<Trajectory> {
    let values = concurrences
        .values
        .iter()
        .map(|&c| entanglement_of_formation(c))
        .collect::<Result<Vec<_>>>()?;
    Trajectory::new(concurrences.grid, values, concurrences.success_probs.clone())
}

/// `N_D` for one initial pair.
pub fn nd_for_scenario(scenario: &Scenario, pair: &StatePair, grid: &TimeGrid) -> Result<MemoryResult> {
    Ok(backflow_accumulate(trace_distance_trajectory(scenario, pair, grid)?))
}

/// `N_E` for the Bell input.
pub fn ne_for_scenario(scenario: &Scenario, grid: &TimeGrid) -> Result<MemoryResult> {
    let c = concurrence_trajectory(scenario, grid)?;
    Ok(backflow_accumulate(eof_trajectory(&c)?))
}

/// Direction drawn uniformly on the unit sphere from sample stream `index`.
pub fn sample_direction(seed: u64, index: u64) -> [f64; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let unit = |r: &mut ChaCha8Rng| (r.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    let z = 2.0 * unit(&mut rng) - 1.0;
    let phi = 2.0 * PI * unit(&mut rng);
    let rho = (1.0 - z * z).max(0.0).sqrt();
    [rho * phi.cos(), rho * phi.sin(), z]
}

/// Best `N_D` over orthogonal pure pairs: the three Bloch-axis pairs followed
/// by `samples` random antipodal pairs. Each sample has its own random stream,
/// so results depend only on `seed`. Ties keep the earliest candidate.
///
/// This is an empirical lower bound on the maximum over all pairs.
pub fn pair_search(
    scenario: &Scenario,
    grid: &TimeGrid,
    samples: usize,
    seed: u64,
) -> Result<(StatePair, MemoryResult)> {
    if samples == 0 {
        return Err(Error::Config("pair search needs at least one sample".into()));
    }
    let mut directions = vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    directions.extend((0..samples as u64).map(|k| sample_direction(seed, k)));
    let mut best: Option<(StatePair, MemoryResult)> = None;
    for n in directions {
        let pair = StatePair::antipodal(n)?;
        let result = nd_for_scenario(scenario, &pair, grid)?;
        let better = match &best {
            None => true,
            Some((_, b)) => result.measure_value > b.measure_value,
        };
        if better {
            best = Some((pair, result));
        }
    }
    Ok(best.expect("at least one candidate"))
}

/// Trace-distance backflow is possible for phase-covariant dynamics iff
/// `γ_+ + γ_− + 4γ_z < 0` or `γ_+ + γ_− < 0` at some time.
pub fn td_witness(r: &DecoherenceRates) -> bool {
    let s = r.gamma_plus + r.gamma_minus;
    s + 4.0 * r.gamma_z < 0.0 || s < 0.0
}

/// `(σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
pub fn spin_flip(rho: &CMatrix) -> CMatrix {
    let yy = sigma_y_sigma_y();
    &(&yy * &rho.conj()) * &yy
}
