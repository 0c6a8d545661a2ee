//! Circuit representation: registers, gates and analytics.

mod depth;
pub mod qasm;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::{cis, Mat2, C64};

pub use depth::{depth, depth_with, layers, DepthConvention};

/// Pauli label of a rotation axis; `I` denotes a pure phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sigma {
    I,
    X,
    Y,
    Z,
}

impl Sigma {
    pub fn matrix(self) -> Mat2 {
        match self {
            Sigma::I => Mat2::identity(),
            Sigma::X => Mat2::x(),
            Sigma::Y => Mat2::y(),
            Sigma::Z => Mat2::z(),
        }
    }

    /// e^{iθσ}.
    pub fn exp(self, theta: f64) -> Mat2 {
        match self {
            Sigma::I => Mat2::diag(cis(theta), cis(theta)),
            Sigma::X => Mat2::rx(-2.0 * theta),
            Sigma::Y => Mat2::ry(-2.0 * theta),
            Sigma::Z => Mat2::rz(-2.0 * theta),
        }
    }

    pub fn parse(s: &str) -> Result<Sigma> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" => Ok(Sigma::I),
            "X" => Ok(Sigma::X),
            "Y" => Ok(Sigma::Y),
            "Z" => Ok(Sigma::Z),
            other => Err(Error::InvalidInput(format!("unknown sigma `{other}`"))),
        }
    }
}

impl fmt::Display for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Sigma::I => "I",
            Sigma::X => "X",
            Sigma::Y => "Y",
            Sigma::Z => "Z",
        };
        f.write_str(s)
    }
}

/// The operation a gate performs on its targets. Controls are held by
/// [`Gate`]; a controlled operation acts only when every control is `|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Op {
    X,
    Z,
    H,
    /// Exchange of two target wires.
    Swap,
    Rx(f64),
    Ry(f64),
    Rz(f64),
    P(f64),
    /// e^{iθσ}.
    Rot(Sigma, f64),
    U2(Mat2),
}

impl Op {
    pub fn num_targets(&self) -> usize {
        match self {
            Op::Swap => 2,
            _ => 1,
        }
    }

    /// Matrix of a single-target operation.
    pub fn mat2(&self) -> Option<Mat2> {
        Some(match *self {
            Op::X => Mat2::x(),
            Op::Z => Mat2::z(),
            Op::H => Mat2::h(),
            Op::Swap => return None,
            Op::Rx(t) => Mat2::rx(t),
            Op::Ry(t) => Mat2::ry(t),
            Op::Rz(t) => Mat2::rz(t),
            Op::P(t) => Mat2::phase(t),
            Op::Rot(s, t) => s.exp(t),
            Op::U2(m) => m,
        })
    }

    pub fn inverse(&self) -> Op {
        match *self {
            Op::X | Op::Z | Op::H | Op::Swap => *self,
            Op::Rx(t) => Op::Rx(-t),
            Op::Ry(t) => Op::Ry(-t),
            Op::Rz(t) => Op::Rz(-t),
            Op::P(t) => Op::P(-t),
            Op::Rot(s, t) => Op::Rot(s, -t),
            Op::U2(m) => Op::U2(m.adjoint()),
        }
    }

    fn params_finite(&self) -> bool {
        match self {
            Op::Rx(t) | Op::Ry(t) | Op::Rz(t) | Op::P(t) | Op::Rot(_, t) => t.is_finite(),
            Op::U2(m) => m.is_finite(),
            _ => true,
        }
    }
}

/// Tally key for gate counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    X,
    Cx,
    Mcx,
    Z,
    Cz,
    H,
    Swap,
    Cswap,
    Rx,
    Ry,
    Rz,
    P,
    Cp,
    Rot,
    Crot,
    U2,
    Cu2,
    Mcu2,
    /// Any other controlled combination (e.g. a controlled Rx).
    Controlled,
}

impl GateKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Cx => "cx",
            GateKind::Mcx => "mcx",
            GateKind::Z => "z",
            GateKind::Cz => "cz",
            GateKind::H => "h",
            GateKind::Swap => "swap",
            GateKind::Cswap => "cswap",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::P => "p",
            GateKind::Cp => "cp",
            GateKind::Rot => "rot",
            GateKind::Crot => "crot",
            GateKind::U2 => "u2",
            GateKind::Cu2 => "cu2",
            GateKind::Mcu2 => "mcu2",
            GateKind::Controlled => "controlled",
        }
    }

    /// Members of the compiled basis {Rx, Ry, Rz, P, CNOT}.
    pub fn is_basis(&self) -> bool {
        matches!(self, GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::P | GateKind::Cx)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub op: Op,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub controls: Vec<usize>,
    pub targets: Vec<usize>,
}

impl Gate {
    pub fn new(op: Op, controls: Vec<usize>, targets: Vec<usize>) -> Self {
        Gate { op, controls, targets }
    }

    pub fn single(op: Op, target: usize) -> Self {
        Gate::new(op, vec![], vec![target])
    }

    pub fn controlled(op: Op, control: usize, target: usize) -> Self {
        Gate::new(op, vec![control], vec![target])
    }

    pub fn x(t: usize) -> Self {
        Gate::single(Op::X, t)
    }

    pub fn cnot(c: usize, t: usize) -> Self {
        Gate::controlled(Op::X, c, t)
    }

    pub fn mcx(controls: Vec<usize>, t: usize) -> Self {
        Gate::new(Op::X, controls, vec![t])
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Gate::new(Op::Swap, vec![], vec![a, b])
    }

    pub fn cswap(c: usize, a: usize, b: usize) -> Self {
        Gate::new(Op::Swap, vec![c], vec![a, b])
    }

    pub fn wires(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.iter().chain(self.targets.iter()).copied()
    }

    pub fn arity(&self) -> usize {
        self.controls.len() + self.targets.len()
    }

    pub fn inverse(&self) -> Gate {
        Gate { op: self.op.inverse(), controls: self.controls.clone(), targets: self.targets.clone() }
    }

    pub fn kind(&self) -> GateKind {
        let nc = self.controls.len();
        match (self.op, nc) {
            (Op::X, 0) => GateKind::X,
            (Op::X, 1) => GateKind::Cx,
            (Op::X, _) => GateKind::Mcx,
            (Op::Z, 0) => GateKind::Z,
            (Op::Z, 1) => GateKind::Cz,
            (Op::H, 0) => GateKind::H,
            (Op::Swap, 0) => GateKind::Swap,
            (Op::Swap, 1) => GateKind::Cswap,
            (Op::Rx(_), 0) => GateKind::Rx,
            (Op::Ry(_), 0) => GateKind::Ry,
            (Op::Rz(_), 0) => GateKind::Rz,
            (Op::P(_), 0) => GateKind::P,
            (Op::P(_), 1) => GateKind::Cp,
            (Op::Rot(..), 0) => GateKind::Rot,
            (Op::Rot(..), 1) => GateKind::Crot,
            (Op::U2(_), 0) => GateKind::U2,
            (Op::U2(_), 1) => GateKind::Cu2,
            (Op::U2(_), _) => GateKind::Mcu2,
            _ => GateKind::Controlled,
        }
    }

    /// Check wire ranges, distinctness and parameter finiteness.
    pub fn validate(&self, num_wires: usize) -> Result<()> {
        if self.targets.len() != self.op.num_targets() {
            return Err(Error::GateArityMismatch {
                dim: 1 << self.op.num_targets(),
                targets: self.targets.len(),
            });
        }
        let mut seen = Vec::with_capacity(self.arity());
        for w in self.wires() {
            if w >= num_wires {
                return Err(Error::WireOutOfRange { wire: w, num_wires });
            }
            if seen.contains(&w) {
                return Err(Error::DuplicateQubit(w));
            }
            seen.push(w);
        }
        if !self.op.params_finite() {
            return Err(Error::InvalidInput(format!("non-finite parameter in {:?}", self.op)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layout {
    /// Position register plus one coin wire.
    Walk,
    /// Walk wires followed by 2^n − 1 ancillary coins and 2^n ancillary positions.
    LinearAncilla,
}

/// A named contiguous block of wires.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Register {
    pub name: &'static str,
    pub start: usize,
    pub len: usize,
}

/// Translation between logical registers and wire indices.
///
/// Wire 0 is the principal coin `s_0`, wires `1..=n` are position bits
/// `b_0..b_{n−1}`. The linear-ancilla layout appends ancillary coins
/// `s_1..s_{2^n−1}` and then ancillary positions `b'_0..b'_{2^n−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterMap {
    pub n: usize,
    pub layout: Layout,
}

impl RegisterMap {
    pub fn walk(n: usize) -> Self {
        RegisterMap { n, layout: Layout::Walk }
    }

    pub fn linear(n: usize) -> Self {
        RegisterMap { n, layout: Layout::LinearAncilla }
    }

    pub fn num_wires(&self) -> usize {
        match self.layout {
            Layout::Walk => self.n + 1,
            Layout::LinearAncilla => self.n + 1 + ((1usize << self.n) - 1) + (1usize << self.n),
        }
    }

    pub fn coin(&self) -> usize {
        0
    }

    pub fn position(&self, p: usize) -> usize {
        assert!(p < self.n, "position bit {p} out of range for n = {}", self.n);
        1 + p
    }

    pub fn positions(&self) -> Vec<usize> {
        (0..self.n).map(|p| self.position(p)).collect()
    }

    /// Coin wire `s_i`; `s_0` is the principal coin.
    pub fn s(&self, i: usize) -> usize {
        if i == 0 {
            return self.coin();
        }
        assert!(self.layout == Layout::LinearAncilla, "ancillary coins need the linear layout");
        assert!(i < 1usize << self.n, "ancillary coin {i} out of range");
        self.n + i
    }

    /// Ancillary position wire `b'_i`.
    pub fn bprime(&self, i: usize) -> usize {
        assert!(self.layout == Layout::LinearAncilla, "ancillary positions need the linear layout");
        assert!(i < 1usize << self.n, "ancillary position {i} out of range");
        self.n + (1usize << self.n) + i
    }

    /// Registers in wire order; together they cover every wire exactly once.
    pub fn registers(&self) -> Vec<Register> {
        let mut regs = vec![
            Register { name: "coin", start: 0, len: 1 },
            Register { name: "position", start: 1, len: self.n },
        ];
        if self.layout == Layout::LinearAncilla {
            let big = 1usize << self.n;
            regs.push(Register { name: "ancilla_coin", start: self.n + 1, len: big - 1 });
            regs.push(Register { name: "ancilla_position", start: self.n + big, len: big });
        }
        regs
    }

    /// Register name and offset of a wire.
    pub fn locate(&self, wire: usize) -> Option<(&'static str, usize)> {
        self.registers()
            .into_iter()
            .find(|r| wire >= r.start && wire < r.start + r.len)
            .map(|r| (r.name, wire - r.start))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub builder: String,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub register_map: RegisterMap,
    pub gates: Vec<Gate>,
    /// Scalar phase φ: the circuit implements e^{iφ} times the gate product.
    #[serde(default)]
    pub global_phase: f64,
    #[serde(default)]
    pub metadata: Metadata,
}

impl Circuit {
    pub fn new(register_map: RegisterMap, builder: &str) -> Self {
        Circuit {
            register_map,
            gates: Vec::new(),
            global_phase: 0.0,
            metadata: Metadata { builder: builder.to_string(), params: BTreeMap::new() },
        }
    }

    pub fn num_wires(&self) -> usize {
        self.register_map.num_wires()
    }

    /// Append a gate after validating it against the register map.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_wires())?;
        self.gates.push(gate);
        Ok(())
    }

    /// Append a gate built internally; wires are trusted to be valid.
    pub(crate) fn add(&mut self, gate: Gate) {
        debug_assert!(gate.validate(self.num_wires()).is_ok(), "{gate:?}");
        self.gates.push(gate);
    }

    pub fn extend_from(&mut self, other: &Circuit) {
        self.gates.extend(other.gates.iter().cloned());
        self.global_phase += other.global_phase;
    }

    pub fn set_param(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.metadata.params.insert(key.to_string(), value.into());
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            g.validate(self.num_wires())?;
        }
        if !self.global_phase.is_finite() {
            return Err(Error::InvalidInput("non-finite global phase".into()));
        }
        Ok(())
    }

    /// Inverse circuit: gates reversed and inverted, phase negated.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            register_map: self.register_map,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            global_phase: -self.global_phase,
            metadata: self.metadata.clone(),
        }
    }

    pub fn phase_factor(&self) -> C64 {
        cis(self.global_phase)
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Number of gates touching two or more wires.
    pub fn multi_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.arity() >= 2).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }

    pub fn from_json(text: &str) -> Result<Circuit> {
        let c: Circuit =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("circuit JSON: {e}")))?;
        c.validate()?;
        Ok(c)
    }
}

/// Exact tally of gates per kind.
pub fn gate_counts(circuit: &Circuit) -> BTreeMap<GateKind, usize> {
    let mut counts = BTreeMap::new();
    for g in &circuit.gates {
        *counts.entry(g.kind()).or_insert(0) += 1;
    }
    counts
}
