use super::{Circuit, Gate, Op};
use crate::compile;

/// How SWAP-type gates are weighted when layering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DepthConvention {
    /// SWAP and controlled-SWAP occupy 3 consecutive layers, every other gate 1.
    #[default]
    SwapWeighted,
    /// SWAP and controlled-SWAP are replaced by their compiled expansions first.
    Expanded,
}

fn weight(g: &Gate) -> usize {
    match g.op {
        Op::Swap => 3,
        _ => 1,
    }
}

/// ASAP depth with SWAP-type gates weighted 3.
pub fn depth(circuit: &Circuit) -> usize {
    depth_with(circuit, DepthConvention::SwapWeighted)
}

pub fn depth_with(circuit: &Circuit, convention: DepthConvention) -> usize {
    let mut free = vec![0usize; circuit.num_wires()];
    let mut place = |g: &Gate, w: usize| {
        let start = g.wires().map(|q| free[q]).max().unwrap_or(0);
        for q in g.wires() {
            free[q] = start + w;
        }
    };
    match convention {
        DepthConvention::SwapWeighted => {
            for g in &circuit.gates {
                place(g, weight(g));
            }
        }
        DepthConvention::Expanded => {
            for g in &circuit.gates {
                if matches!(g.op, Op::Swap) {
                    for h in compile::expand_swap(g) {
                        place(&h, 1);
                    }
                } else {
                    place(g, 1);
                }
            }
        }
    }
    free.into_iter().max().unwrap_or(0)
}

/// Greedy ASAP layering (unit weights): gate indices grouped by layer.
/// Analysis only; the gate order of the circuit is never changed.
pub fn layers(circuit: &Circuit) -> Vec<Vec<usize>> {
    let mut free = vec![0usize; circuit.num_wires()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, g) in circuit.gates.iter().enumerate() {
        let layer = g.wires().map(|q| free[q]).max().unwrap_or(0);
        for q in g.wires() {
            free[q] = layer + 1;
        }
        if out.len() <= layer {
            out.resize_with(layer + 1, Vec::new);
        }
        out[layer].push(i);
    }
    out
}
