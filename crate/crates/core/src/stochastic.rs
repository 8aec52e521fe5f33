//! Stochastic gauge-field evolution: at every step the field operator acts
//! before the walk step with probability `r`.
//!
//! Each realization draws from its own ChaCha8 stream, keyed by a 64-bit mix of
//! `(master_seed, realization_index)` and placed on stream id
//! `realization_index`; step `t` consumes draw `t`. Ensemble averages are
//! reduced over a pairwise tree fixed by realization index, so the result is
//! bit-identical for any number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{FieldKind, WalkConfig};
use crate::error::{Error, Result};
use crate::state::{PhaseTable, ProbabilityDistribution, StateVector};

/// splitmix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic random stream of one realization.
#[derive(Debug, Clone)]
pub struct RealizationStream {
    rng: ChaCha8Rng,
}

impl RealizationStream {
    pub fn new(master_seed: u64, realization_index: u64) -> Self {
        const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
        let key =
            mix64(mix64(master_seed) ^ realization_index.wrapping_add(1).wrapping_mul(GOLDEN));
        let mut seed = [0u8; 32];
        let mut z = key;
        for chunk in seed.chunks_exact_mut(8) {
            z = z.wrapping_add(GOLDEN);
            chunk.copy_from_slice(&mix64(z).to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(seed);
        rng.set_stream(realization_index);
        RealizationStream { rng }
    }

    /// Uniform draw in `[0, 1)`.
    pub fn next_uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

/// Which steps had the field switched on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationTrace {
    pub applied: Vec<bool>,
}

impl RealizationTrace {
    pub fn applied_count(&self) -> usize {
        self.applied.iter().filter(|a| **a).count()
    }
}

/// `(steps + 1) × d` row-major table of position distributions, row `t` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSeries {
    d: usize,
    values: Vec<f64>,
}

impl DistributionSeries {
    pub fn new(d: usize, values: Vec<f64>) -> Result<Self> {
        if d < 2 || values.is_empty() || !values.len().is_multiple_of(d) {
            return Err(Error::domain(format!(
                "{} values do not form rows of width d = {d}",
                values.len()
            )));
        }
        Ok(DistributionSeries { d, values })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the last row, i.e. the number of steps covered.
    pub fn steps(&self) -> usize {
        self.len() - 1
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.values[t * self.d..(t + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.d)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn distribution(&self, t: usize, origin: usize) -> Result<ProbabilityDistribution> {
        if t >= self.len() {
            return Err(Error::domain(format!(
                "time {t} beyond last row {}",
                self.steps()
            )));
        }
        ProbabilityDistribution::new(self.row(t).to_vec(), origin)
    }
}

/// Output of one stochastic trajectory.
#[derive(Debug, Clone)]
pub struct Realization {
    pub distributions: DistributionSeries,
    pub trace: RealizationTrace,
    pub final_state: StateVector,
}

/// Probabilities averaged over realizations.
#[derive(Debug, Clone)]
pub struct EnsembleAverage {
    pub config: WalkConfig,
    pub n_realizations: usize,
    pub pbar: DistributionSeries,
    /// Largest `| ‖Ψ‖² − 1 |` over all final states.
    pub max_norm_error: f64,
}

/// One stochastic step: draws `u`, applies the field iff `u < r`, then `U`.
///
/// Exactly one draw is consumed per step whatever the field kind, so streams
/// stay aligned across configurations. With `FieldKind::None` the field is
/// never applied.
pub fn step_stochastic(
    state: &mut StateVector,
    config: &WalkConfig,
    field: Option<&PhaseTable>,
    stream: &mut RealizationStream,
) -> bool {
    let u = stream.next_uniform();
    let applied = match field {
        Some(table) if u < config.r => {
            state.apply_table(table);
            true
        }
        _ => false,
    };
    state.apply_u(config);
    applied
}

fn evolve(
    config: &WalkConfig,
    initial: &StateVector,
    field: Option<&PhaseTable>,
    index: u64,
    mut on_step: impl FnMut(bool),
) -> (Vec<f64>, StateVector) {
    let d = config.d;
    let mut values = vec![0.0; (config.steps + 1) * d];
    let mut state = initial.clone();
    let mut stream = RealizationStream::new(config.master_seed, index);
    state.probabilities_into(&mut values[..d]);
    for t in 1..=config.steps {
        on_step(step_stochastic(&mut state, config, field, &mut stream));
        state.probabilities_into(&mut values[t * d..(t + 1) * d]);
    }
    (values, state)
}

fn check_initial(config: &WalkConfig, initial: &StateVector) -> Result<()> {
    config.validate()?;
    if initial.d() != config.d {
        return Err(Error::domain(format!(
            "initial state has d = {}, config has d = {}",
            initial.d(),
            config.d
        )));
    }
    Ok(())
}

/// Runs one trajectory; a pure function of `(config, initial, realization_index)`.
pub fn run_realization(
    config: &WalkConfig,
    initial: &StateVector,
    realization_index: u64,
) -> Result<Realization> {
    check_initial(config, initial)?;
    let table = PhaseTable::for_config(config);
    let mut applied = Vec::with_capacity(config.steps);
    let (values, final_state) = evolve(config, initial, table.as_ref(), realization_index, |a| {
        applied.push(a)
    });
    Ok(Realization {
        distributions: DistributionSeries {
            d: config.d,
            values,
        },
        trace: RealizationTrace { applied },
        final_state,
    })
}

/// Field walk without randomness: `Φ_E^α` (or `Φ_B` for the spin-position
/// field) before every step. `alpha` is ignored for fields other than electric.
pub fn run_deterministic(
    config: &WalkConfig,
    initial: &StateVector,
    alpha: f64,
) -> Result<Realization> {
    check_initial(config, initial)?;
    let table = match config.field {
        FieldKind::Electric => Some(PhaseTable::electric(config.d, config.q, alpha)),
        _ => PhaseTable::for_config(config),
    };
    let d = config.d;
    let mut values = vec![0.0; (config.steps + 1) * d];
    let mut state = initial.clone();
    state.probabilities_into(&mut values[..d]);
    for t in 1..=config.steps {
        if let Some(table) = &table {
            state.apply_table(table);
        }
        state.apply_u(config);
        state.probabilities_into(&mut values[t * d..(t + 1) * d]);
    }
    Ok(Realization {
        distributions: DistributionSeries { d, values },
        trace: RealizationTrace {
            applied: vec![table.is_some(); config.steps],
        },
        final_state: state,
    })
}

struct Partial {
    sum: Vec<f64>,
    max_norm_error: f64,
}

fn tree_sum(
    config: &WalkConfig,
    initial: &StateVector,
    table: Option<&PhaseTable>,
    lo: u64,
    hi: u64,
) -> Partial {
    if hi - lo == 1 {
        let (sum, state) = evolve(config, initial, table, lo, |_| {});
        return Partial {
            sum,
            max_norm_error: (state.norm_sqr() - 1.0).abs(),
        };
    }
    let mid = lo + (hi - lo) / 2;
    let (mut left, right) = rayon::join(
        || tree_sum(config, initial, table, lo, mid),
        || tree_sum(config, initial, table, mid, hi),
    );
    for (a, b) in left.sum.iter_mut().zip(&right.sum) {
        *a += *b;
    }
    left.max_norm_error = left.max_norm_error.max(right.max_norm_error);
    left
}

/// Averages position probabilities over `config.realizations` trajectories.
///
/// Realizations run on the current rayon pool; the reduction tree depends only
/// on the index range, never on scheduling.
pub fn run_ensemble(config: &WalkConfig, initial: &StateVector) -> Result<EnsembleAverage> {
    check_initial(config, initial)?;
    let table = PhaseTable::for_config(config);
    let n = config.realizations as u64;
    let Partial {
        mut sum,
        max_norm_error,
    } = tree_sum(config, initial, table.as_ref(), 0, n);
    let scale = config.realizations as f64;
    for v in &mut sum {
        *v /= scale;
    }
    Ok(EnsembleAverage {
        config: config.clone(),
        n_realizations: config.realizations,
        pbar: DistributionSeries {
            d: config.d,
            values: sum,
        },
        max_norm_error,
    })
}

impl EnsembleAverage {
    pub fn field(&self) -> FieldKind {
        self.config.field
    }
}
