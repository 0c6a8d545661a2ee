//! Resource tables of the three coin constructions as n grows.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{depth_with, gate_counts, Circuit, DepthConvention, GateKind};
use crate::coin::{random_field, reference_field, CoinField};
use crate::compile::compile_with;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linear::build_linear;
use crate::naive::build_naive;
use crate::shift::build_shift_qft;
use crate::walsh::build_walsh_coin_field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    Naive,
    Linear,
    Walsh,
}

impl Construction {
    pub const ALL: [Construction; 3] = [Construction::Naive, Construction::Linear, Construction::Walsh];

    pub fn as_str(self) -> &'static str {
        match self {
            Construction::Naive => "naive",
            Construction::Linear => "linear",
            Construction::Walsh => "walsh",
        }
    }

    /// Full-series coin circuit for `field`.
    pub fn build(self, field: &CoinField) -> Result<Circuit> {
        Ok(match self {
            Construction::Naive => build_naive(field),
            Construction::Linear => build_linear(field, true),
            Construction::Walsh => build_walsh_coin_field(field)?,
        })
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Construction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Construction::Naive),
            "linear" => Ok(Construction::Linear),
            "walsh" => Ok(Construction::Walsh),
            other => Err(Error::InvalidInput(format!("unknown construction `{other}`"))),
        }
    }
}

/// Seed of the random field used at each n other than 3.
pub const SCALING_SEED: u64 = 2022;

/// The reference coin set at n = 3, a seeded random field otherwise.
pub fn field_for(n: usize) -> CoinField {
    if n == 3 {
        reference_field()
    } else {
        random_field(n, SCALING_SEED + n as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub construction: Construction,
    pub qubits: usize,
    pub gates_uncompiled: usize,
    pub gates_compiled: usize,
    pub depth_compiled: usize,
    pub cnot_compiled: usize,
    /// Depth before compilation with SWAP-type gates weighted 3.
    pub depth_swap_weighted: usize,
}

/// Size, depth and CNOT count of a circuit before and after compilation.
pub fn measure(n: usize, construction: Construction, circuit: &Circuit, exec: Exec) -> Result<ScalingRow> {
    let compiled = compile_with(circuit, exec)?;
    Ok(ScalingRow {
        n,
        construction,
        qubits: circuit.num_wires(),
        gates_uncompiled: circuit.len(),
        gates_compiled: compiled.len(),
        depth_compiled: depth_with(&compiled, DepthConvention::Expanded),
        cnot_compiled: gate_counts(&compiled).get(&GateKind::Cx).copied().unwrap_or(0),
        depth_swap_weighted: depth_with(circuit, DepthConvention::SwapWeighted),
    })
}

pub fn scaling_row(construction: Construction, n: usize, exec: Exec) -> Result<ScalingRow> {
    let c = construction.build(&field_for(n))?;
    measure(n, construction, &c, exec)
}

/// One row per n; rows are computed independently under `exec`.
pub fn scaling_table(construction: Construction, ns: &[usize], exec: Exec) -> Result<Vec<ScalingRow>> {
    exec.try_map_slice(ns, |&n| scaling_row(construction, n, Exec::Sequential))
}

/// Least-squares line y ≈ slope·x + intercept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    /// max |y − ŷ| / |y| over the points.
    pub max_rel_residual: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<Fit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::SizeMismatch(format!("fit needs two or more paired points, got {} and {}", xs.len(), ys.len())));
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let pred = |x: f64| slope * x + intercept;
    let ss_res: f64 = xs.iter().zip(ys).map(|(&x, &y)| (y - pred(x)).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    let max_rel_residual = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| if y == 0.0 { (y - pred(x)).abs() } else { ((y - pred(x)) / y).abs() })
        .fold(0.0, f64::max);
    Ok(Fit { slope, intercept, r2, max_rel_residual })
}

/// Fit of ln y against x; e^{slope} is the growth factor per unit of x.
pub fn log_linear_fit(xs: &[f64], ys: &[f64]) -> Result<Fit> {
    let logs: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    linear_fit(xs, &logs)
}

/// A reference magnitude next to the value measured here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceComparison {
    pub quantity: String,
    pub reference: usize,
    pub measured: usize,
}

impl ReferenceComparison {
    /// max(measured/reference, reference/measured).
    pub fn factor(&self) -> f64 {
        let (a, b) = (self.measured as f64, self.reference as f64);
        (a / b).max(b / a)
    }
}

/// Compiled gate counts at n = 3 for the linear coin, the full Walsh coin
/// and the QFT shift, beside published values for the same quantities.
pub fn reference_magnitudes(exec: Exec) -> Result<Vec<ReferenceComparison>> {
    let field = reference_field();
    let lin = compile_with(&build_linear(&field, true), exec)?;
    let wal = compile_with(&build_walsh_coin_field(&field)?, exec)?;
    let qft = compile_with(&build_shift_qft(3), exec)?;
    Ok(vec![
        ReferenceComparison { quantity: "linear coin gates".into(), reference: 591, measured: lin.len() },
        ReferenceComparison { quantity: "walsh coin gates".into(), reference: 103, measured: wal.len() },
        ReferenceComparison { quantity: "qft shift gates".into(), reference: 30, measured: qft.len() },
    ])
}
