//! Walsh-series synthesis of diagonal-in-position unitaries e^{i f̂ ⊗ σ}.
//!
//! Samples are indexed by position `k` and taken at the dyadic coordinate
//! `x_k`, so that w_j(x_k) = (−1)^{popcount(j & k)} and ŵ_j is the tensor
//! product of Z over the position bits set in `j`.

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, Op, RegisterMap, Sigma};
use crate::coin::{dyadic_coordinate, sup_derivative_estimate, CoinField, DiracParams, EulerAngles};
use crate::compile::{emit_term, gray_code_optimize};
use crate::error::{Error, Result};
use crate::statevec::{dense_limit, ComplexMatrix, Mat2};

/// Coefficients below this magnitude produce no gates.
pub const COEFF_EPS: f64 = 1e-14;

/// w_j(x) for x ∈ [0, 1]: bit `i` of `j` pairs with the dyadic digit of
/// weight 2^{−(i+1)} of `x`.
pub fn walsh_function(j: usize, x: f64) -> f64 {
    let mut parity = 0;
    for i in 0..usize::BITS - j.leading_zeros() {
        if j >> i & 1 == 1 {
            let digit = (x * 2f64.powi(i as i32 + 1)).floor() as u64 & 1;
            parity ^= digit;
        }
    }
    if parity == 0 {
        1.0
    } else {
        -1.0
    }
}

/// w_j evaluated at the dyadic point of position `k`.
pub fn walsh_sign(j: usize, k: usize) -> f64 {
    if (j & k).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// f = Σ_j a_j w_j over 2^n dyadic points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalshSeries {
    pub n: usize,
    pub coefficients: Vec<f64>,
    /// Samples the coefficients were computed from, by position.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<f64>,
}

impl WalshSeries {
    /// Σ_j a_j w_{jk} at position `k`.
    pub fn evaluate(&self, k: usize) -> f64 {
        self.coefficients.iter().enumerate().map(|(j, a)| a * walsh_sign(j, k)).sum()
    }

    /// Values at every position, by inverse transform.
    pub fn reconstruct(&self) -> Vec<f64> {
        let mut v = self.coefficients.clone();
        fwht(&mut v);
        v
    }

    pub fn truncate(&self, m: usize) -> Result<WalshSeries> {
        truncate(self, m)
    }

    /// Number of nonzero coefficients.
    pub fn live_terms(&self) -> usize {
        self.coefficients.iter().filter(|a| a.abs() > COEFF_EPS).count()
    }
}

/// In-place unnormalized Walsh–Hadamard butterfly.
fn fwht(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// a_j = 2^{−n} Σ_k f_k w_{jk}.
pub fn walsh_coefficients(samples: &[f64]) -> Result<WalshSeries> {
    let len = samples.len();
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::BadSampleCount(len));
    }
    let mut a = samples.to_vec();
    fwht(&mut a);
    let scale = 1.0 / len as f64;
    a.iter_mut().for_each(|x| *x *= scale);
    Ok(WalshSeries { n: len.trailing_zeros() as usize, coefficients: a, samples: samples.to_vec() })
}

/// Keep the 2^m lowest-index coefficients.
pub fn truncate(series: &WalshSeries, m: usize) -> Result<WalshSeries> {
    if m > series.n {
        return Err(Error::IndexOutOfRange { what: "truncation m", value: m, bound: series.n + 1 });
    }
    let mut out = series.clone();
    out.coefficients.iter_mut().skip(1 << m).for_each(|a| *a = 0.0);
    Ok(out)
}

/// sup |f − f_m| < sup f' / 2^m.
pub fn truncation_error_bound(f_prime_sup: f64, m: usize) -> f64 {
    f_prime_sup / 2f64.powi(m as i32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Smoothness {
    Efficient,
    Marginal,
    Fails,
}

/// Efficient when sup f' ≤ ε 2^n / 8, fails when sup f' ≥ ε 2^n.
pub fn smoothness_check(f_prime_sup: f64, epsilon: f64, n: usize) -> Smoothness {
    let scale = epsilon * 2f64.powi(n as i32);
    if f_prime_sup >= scale {
        Smoothness::Fails
    } else if f_prime_sup <= scale / 8.0 {
        Smoothness::Efficient
    } else {
        Smoothness::Marginal
    }
}

/// block-diag(e^{i f_k σ}) on the walk layout.
pub fn exact_unitary(samples: &[f64], sigma: Sigma) -> Result<ComplexMatrix> {
    let qubits = samples.len().trailing_zeros() as usize + 1;
    if qubits > dense_limit() {
        return Err(Error::DenseLimitExceeded { qubits, limit: dense_limit() });
    }
    let blocks: Vec<Mat2> = samples.iter().map(|&f| sigma.exp(f)).collect();
    Ok(ComplexMatrix::block_diag2(&blocks))
}

/// One ladder-rotation-ladder block per nonzero coefficient, in index order.
pub fn build_walsh_unoptimized(series: &WalshSeries, sigma: Sigma) -> Circuit {
    let mut c = Circuit::new(RegisterMap::walk(series.n), "walsh");
    c.set_param("n", series.n);
    c.set_param("sigma", sigma.to_string());
    for (j, &a) in series.coefficients.iter().enumerate() {
        if a.abs() > COEFF_EPS {
            emit_term(&mut c, j, a, sigma);
        }
    }
    c
}

/// Walsh circuit with the Gray-code pass applied.
pub fn build_walsh(series: &WalshSeries, sigma: Sigma) -> Circuit {
    gray_code_optimize(&build_walsh_unoptimized(series, sigma)).expect("Walsh blocks are in Walsh form")
}

/// e^{iF0} e^{iF1 Z} e^{iF2 Y} e^{iF3 Z} per position from Walsh circuits of
/// the four angle functions truncated at `m`; the F3 factor comes first in
/// time. Angles are unwrapped before the transform.
pub fn build_walsh_coin(angles: &EulerAngles, m: usize) -> Result<Circuit> {
    let un = angles.unwrapped();
    let parts = [(&un.f3, Sigma::Z), (&un.f2, Sigma::Y), (&un.f1, Sigma::Z), (&un.f0, Sigma::I)];
    let n = walsh_coefficients(&un.f0)?.n;
    let mut c = Circuit::new(RegisterMap::walk(n), "walsh-coin");
    c.set_param("n", n);
    c.set_param("truncation", m);
    for (f, s) in parts {
        let series = walsh_coefficients(f)?.truncate(m)?;
        let part = build_walsh(&series, s);
        c.extend_from(&part);
    }
    Ok(c)
}

/// [`build_walsh_coin`] on the Euler angles of `field`, full series.
pub fn build_walsh_coin_field(field: &CoinField) -> Result<Circuit> {
    build_walsh_coin(&field.euler_angles(), field.n())
}

/// Dirac coin as Rx(−2ma) on the coin followed by the Walsh circuit of the
/// position phase −qV(x_k)a, optionally truncated.
pub fn build_dirac_coin(params: &DiracParams, truncation: Option<usize>) -> Result<Circuit> {
    let n = params.n;
    let series = walsh_coefficients(&params.phases())?.truncate(truncation.unwrap_or(n))?;
    let mut c = Circuit::new(RegisterMap::walk(n), "walsh-dirac");
    c.set_param("n", n);
    c.set_param("truncation", truncation.unwrap_or(n));
    c.add(Gate::single(Op::Rx(-2.0 * params.mass * params.step), c.register_map.coin()));
    let phase = build_walsh(&series, Sigma::I);
    c.extend_from(&phase);
    Ok(c)
}

/// e^{i a x̂ ⊗ σ} with n controlled rotations e^{i (a/2^{p+1}) σ}, one per
/// position bit.
pub fn build_linear_phase(a: f64, sigma: Sigma, n: usize) -> Circuit {
    let map = RegisterMap::walk(n);
    let mut c = Circuit::new(map, "linear-phase");
    c.set_param("n", n);
    c.set_param("a", a);
    c.set_param("sigma", sigma.to_string());
    for p in 0..n {
        let theta = a / 2f64.powi(p as i32 + 1);
        c.add(Gate::controlled(Op::Rot(sigma, theta), map.position(p), map.coin()));
    }
    c
}

/// Real function on [0, 1] given to the Walsh builders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FunctionSpec {
    /// V0 (x − 1/2)².
    Harmonic {
        #[serde(rename = "V0", alias = "v0")]
        v0: f64,
    },
    /// a·x.
    Linear { a: f64 },
    /// Values by position; their count fixes n.
    Samples { values: Vec<f64> },
}

impl FunctionSpec {
    pub fn eval(&self, x: f64) -> Option<f64> {
        match self {
            FunctionSpec::Harmonic { v0 } => Some(v0 * (x - 0.5).powi(2)),
            FunctionSpec::Linear { a } => Some(a * x),
            FunctionSpec::Samples { .. } => None,
        }
    }

    /// Samples at the dyadic points of 2^n positions.
    pub fn samples(&self, n: usize) -> Result<Vec<f64>> {
        match self {
            FunctionSpec::Samples { values } => {
                if values.len() != 1 << n {
                    return Err(Error::BadSampleCount(values.len()));
                }
                Ok(values.clone())
            }
            f => (0..1usize << n)
                .map(|k| Ok(f.eval(dyadic_coordinate(k, n)?).expect("closed form")))
                .collect(),
        }
    }

    /// sup |f'| on [0, 1] and whether it is an estimate from samples.
    pub fn sup_derivative(&self, n: usize) -> Result<(f64, bool)> {
        Ok(match self {
            FunctionSpec::Harmonic { v0 } => (v0.abs(), false),
            FunctionSpec::Linear { a } => (a.abs(), false),
            FunctionSpec::Samples { .. } => (sup_derivative_estimate(&self.samples(n)?), true),
        })
    }
}
