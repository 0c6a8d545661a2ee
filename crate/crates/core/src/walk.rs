//! Walk evolution W = S·C: coin first, then shift, repeated for each step.

use std::path::PathBuf;

use rand::distributions::WeightedIndex;
use rand::prelude::Distribution as _;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Layout, RegisterMap};
use crate::coin::{total_coin_matrix, CoinField, CoinSpec};
use crate::error::{Error, Result};
use crate::linear::{ancilla_residual, build_linear};
use crate::naive::build_naive;
use crate::shift::{build_shift, shift_permutation_matrix, ShiftScheme};
use crate::statevec::{ComplexMatrix, DenseState, SparseState, C64, MAX_DENSE_STATE_QUBITS, ZERO};
use crate::walsh::{build_dirac_coin, build_walsh_coin};

/// Largest ancilla probability tolerated after a step of the linear builder.
pub const ANCILLA_RESIDUAL_MAX: f64 = 1e-8;

/// How the coin operator of each step is realized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoinBuilder {
    Naive,
    Linear {
        #[serde(default = "yes")]
        parallel: bool,
    },
    Walsh {
        #[serde(default)]
        truncation: Option<usize>,
    },
    /// Dense product of the total coin and shift matrices.
    DenseOracle,
    /// A coin circuit stored as JSON.
    Circuit { path: PathBuf },
}

fn yes() -> bool {
    true
}

/// Initial walker state, loaded by direct assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialState {
    /// |k⟩|coin⟩.
    Basis { k: usize, coin: usize },
    /// |k⟩ ⊗ (c0|0⟩ + c1|1⟩).
    Product { k: usize, coin: [[f64; 2]; 2] },
    /// Amplitudes indexed by 2k + c.
    Superposition { values: Vec<[f64; 2]> },
}

impl InitialState {
    pub fn amplitudes(&self, n: usize) -> Result<Vec<C64>> {
        let dim = 2usize << n;
        let big = 1usize << n;
        let mut v = vec![ZERO; dim];
        match self {
            InitialState::Basis { k, coin } => {
                if *k >= big || *coin > 1 {
                    return Err(Error::InvalidInput(format!("basis state |{k}⟩|{coin}⟩ outside n = {n}")));
                }
                v[2 * k + coin] = C64::new(1.0, 0.0);
            }
            InitialState::Product { k, coin } => {
                if *k >= big {
                    return Err(Error::IndexOutOfRange { what: "k", value: *k, bound: big });
                }
                v[2 * k] = C64::new(coin[0][0], coin[0][1]);
                v[2 * k + 1] = C64::new(coin[1][0], coin[1][1]);
            }
            InitialState::Superposition { values } => {
                if values.len() != dim {
                    return Err(Error::SizeMismatch(format!("{} amplitudes for dimension {dim}", values.len())));
                }
                for (z, p) in v.iter_mut().zip(values) {
                    *z = C64::new(p[0], p[1]);
                }
            }
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput(format!("initial state norm² {norm} differs from 1")));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub n: usize,
    pub coin: CoinSpec,
    pub builder: CoinBuilder,
    pub shift: ShiftScheme,
    pub steps: usize,
    pub initial: InitialState,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl WalkConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("walk config: {e}")))
    }

    pub fn field(&self) -> Result<CoinField> {
        let f = self.coin.build()?;
        if f.n() != self.n {
            return Err(Error::SizeMismatch(format!("coin field has n = {}, config has n = {}", f.n(), self.n)));
        }
        Ok(f)
    }
}

/// Position probabilities with the coin traced out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub probabilities: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Vec<u64>>,
}

impl Distribution {
    /// Marginal over positions of a walk-layout state.
    pub fn from_amplitudes(amps: &[C64]) -> Self {
        let probabilities = amps.chunks(2).map(|c| c.iter().map(|z| z.norm_sqr()).sum()).collect();
        Distribution { probabilities, counts: None }
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// Probability on positions with |k − center| ≤ radius (no wraparound).
    pub fn mass_within(&self, center: usize, radius: usize) -> f64 {
        self.probabilities
            .iter()
            .enumerate()
            .filter(|(k, _)| k.abs_diff(center) <= radius)
            .map(|(_, p)| p)
            .sum()
    }

    /// Seeded multinomial sample of `shots` draws (ChaCha20).
    pub fn sample(&self, shots: u64, seed: u64) -> Result<Vec<u64>> {
        let weights: Vec<f64> = self.probabilities.iter().map(|p| p.max(0.0)).collect();
        let dist = WeightedIndex::new(&weights).map_err(|e| Error::InvalidInput(format!("sampling: {e}")))?;
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut counts = vec![0u64; weights.len()];
        for _ in 0..shots {
            counts[dist.sample(&mut rng)] += 1;
        }
        Ok(counts)
    }

    /// Empirical distribution of the sampled counts.
    pub fn empirical(&self) -> Option<Distribution> {
        let counts = self.counts.as_ref()?;
        let total: u64 = counts.iter().sum();
        Some(Distribution {
            probabilities: counts.iter().map(|&c| c as f64 / total as f64).collect(),
            counts: None,
        })
    }
}

/// (1/2) Σ |p_k − q_k|.
pub fn tvd(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.probabilities.len() != q.probabilities.len() {
        return Err(Error::SizeMismatch(format!(
            "distributions over {} and {} positions",
            p.probabilities.len(),
            q.probabilities.len()
        )));
    }
    Ok(0.5 * p.probabilities.iter().zip(&q.probabilities).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Result of [`run`]: the final distribution and walk-layout state.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkOutcome {
    pub distribution: Distribution,
    pub state: Vec<C64>,
    /// Largest ancilla probability seen after any step (linear builder).
    pub max_ancilla_residual: f64,
}

enum Engine {
    Matrix { w: ComplexMatrix, state: Vec<C64> },
    Dense { step: Circuit, state: DenseState },
    Ancilla { coin: Circuit, shift: Circuit, state: SparseState, n: usize, worst: f64 },
}

/// A walk in progress; each call to [`Walker::step`] applies S·C once.
pub struct Walker {
    engine: Engine,
}

fn check_dense(qubits: usize) -> Result<()> {
    if qubits > MAX_DENSE_STATE_QUBITS {
        return Err(Error::BackendInfeasible(format!(
            "{qubits} qubits exceed the dense statevector cap of {MAX_DENSE_STATE_QUBITS}"
        )));
    }
    Ok(())
}

/// Coin circuit for `config`, or `None` for the dense oracle.
pub fn coin_circuit(config: &WalkConfig) -> Result<Option<Circuit>> {
    let field = config.field()?;
    Ok(match &config.builder {
        CoinBuilder::Naive => Some(build_naive(&field)),
        CoinBuilder::Linear { parallel } => Some(build_linear(&field, *parallel)),
        CoinBuilder::Walsh { truncation } => Some(match config.coin.dirac() {
            Some(d) => build_dirac_coin(d, *truncation)?,
            None => build_walsh_coin(&field.euler_angles(), truncation.unwrap_or(config.n))?,
        }),
        CoinBuilder::DenseOracle => None,
        CoinBuilder::Circuit { path } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("reading {}: {e}", path.display())))?;
            let c = Circuit::from_json(&text)?;
            if c.register_map.n != config.n {
                return Err(Error::SizeMismatch(format!(
                    "circuit has n = {}, config has n = {}",
                    c.register_map.n, config.n
                )));
            }
            Some(c)
        }
    })
}

impl Walker {
    pub fn new(config: &WalkConfig) -> Result<Self> {
        let coin = coin_circuit(config)?;
        let init = config.initial.amplitudes(config.n)?;
        Walker::with_coin(config.n, coin, config.shift, &config.coin.build()?, init)
    }

    /// `coin = None` evolves with the dense matrices of `field`.
    pub fn with_coin(
        n: usize,
        coin: Option<Circuit>,
        shift: ShiftScheme,
        field: &CoinField,
        init: Vec<C64>,
    ) -> Result<Self> {
        let engine = match coin {
            None => {
                let w = shift_permutation_matrix(n)?.matmul(&total_coin_matrix(field)?)?;
                Engine::Matrix { w, state: init }
            }
            Some(c) => match c.register_map.layout {
                Layout::Walk => {
                    check_dense(n + 1)?;
                    let mut step = c;
                    step.extend_from(&build_shift(shift, n));
                    Engine::Dense { step, state: DenseState::from_vec(init)? }
                }
                Layout::LinearAncilla => {
                    let q = RegisterMap::linear(n).num_wires();
                    if q > 128 {
                        return Err(Error::BackendInfeasible(format!(
                            "linear builder at n = {n} needs {q} qubits, beyond the 128-bit sparse index"
                        )));
                    }
                    let state = SparseState::from_amplitudes(
                        q,
                        init.iter().enumerate().filter(|(_, a)| a.norm() > 0.0).map(|(i, &a)| (i as u128, a)),
                    )?;
                    Engine::Ancilla { coin: c, shift: build_shift(shift, n), state, n, worst: 0.0 }
                }
            },
        };
        Ok(Walker { engine })
    }

    pub fn step(&mut self) -> Result<()> {
        match &mut self.engine {
            Engine::Matrix { w, state } => *state = w.mul_vec(state)?,
            Engine::Dense { step, state } => state.apply_circuit(step)?,
            Engine::Ancilla { coin, shift, state, n, worst } => {
                state.apply_circuit(coin)?;
                let r = ancilla_residual(state, *n);
                *worst = worst.max(r);
                if r > ANCILLA_RESIDUAL_MAX {
                    return Err(Error::InvalidInput(format!("ancilla residual {r:e} after coin step")));
                }
                state.apply_circuit(shift)?;
            }
        }
        Ok(())
    }

    /// Walk-layout amplitudes (ancillas projected out).
    pub fn state(&self) -> Vec<C64> {
        match &self.engine {
            Engine::Matrix { state, .. } => state.clone(),
            Engine::Dense { state, .. } => state.amplitudes().to_vec(),
            Engine::Ancilla { state, n, .. } => state.project_low(n + 1),
        }
    }

    pub fn distribution(&self) -> Distribution {
        Distribution::from_amplitudes(&self.state())
    }

    pub fn max_ancilla_residual(&self) -> f64 {
        match &self.engine {
            Engine::Ancilla { worst, .. } => *worst,
            _ => 0.0,
        }
    }
}

/// Evolve for `config.steps` steps; samples when `shots` is set.
pub fn run(config: &WalkConfig) -> Result<WalkOutcome> {
    let mut w = Walker::new(config)?;
    for _ in 0..config.steps {
        w.step()?;
    }
    let mut distribution = w.distribution();
    if let Some(shots) = config.shots {
        if shots == 0 {
            return Err(Error::InvalidInput("shots must be at least 1".into()));
        }
        distribution.counts = Some(distribution.sample(shots, config.seed.unwrap_or(0))?);
    }
    Ok(WalkOutcome { distribution, state: w.state(), max_ancilla_residual: w.max_ancilla_residual() })
}

/// Distribution after every step, the initial one included.
pub fn run_trajectory(config: &WalkConfig) -> Result<Vec<Distribution>> {
    let mut w = Walker::new(config)?;
    let mut out = vec![w.distribution()];
    for _ in 0..config.steps {
        w.step()?;
        out.push(w.distribution());
    }
    Ok(out)
}

/// Reference evolution by repeated dense multiplication with S·C.
pub fn matrix_oracle_run(
    field: &CoinField,
    shift_matrix: &ComplexMatrix,
    steps: usize,
    init: &[C64],
) -> Result<Distribution> {
    let w = shift_matrix.matmul(&total_coin_matrix(field)?)?;
    let mut state = init.to_vec();
    for _ in 0..steps {
        state = w.mul_vec(&state)?;
    }
    Ok(Distribution::from_amplitudes(&state))
}

/// Oracle distribution for the field, shift and initial state of `config`.
pub fn oracle_for(config: &WalkConfig) -> Result<Distribution> {
    let field = config.field()?;
    matrix_oracle_run(
        &field,
        &shift_permutation_matrix(config.n)?,
        config.steps,
        &config.initial.amplitudes(config.n)?,
    )
}

/// Serialized result of a walk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkResults {
    pub config: WalkConfig,
    pub steps: usize,
    pub probabilities: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tvd_vs_oracle: Option<f64>,
}

impl WalkResults {
    pub fn new(config: &WalkConfig, outcome: &WalkOutcome, oracle: Option<&Distribution>) -> Result<Self> {
        let tvd_vs_oracle = oracle.map(|o| tvd(&outcome.distribution, o)).transpose()?;
        Ok(WalkResults {
            config: config.clone(),
            steps: config.steps,
            probabilities: outcome.distribution.probabilities.clone(),
            counts: outcome.distribution.counts.clone(),
            tvd_vs_oracle,
        })
    }
}
