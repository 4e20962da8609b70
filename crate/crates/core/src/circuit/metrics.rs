use serde::{Deserialize, Serialize};

use super::{lower, Circuit, Gate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub width: usize,
    /// ASAP depth of the lowered `{RY, RZ, CX}` circuit.
    pub native_depth: usize,
    pub cx_count: usize,
    pub abstract_stage1_steps: usize,
    pub abstract_stage2_cswap_depth: usize,
}

/// ASAP layer (1-based) of every gate: one more than the latest layer on any
/// of its qubits.
pub fn schedule(c: &Circuit) -> Vec<usize> {
    weighted_asap(c.width(), c.gates().iter().map(|g| (g, 1))).1
}

pub fn metrics(c: &Circuit) -> ResourceReport {
    let lowered = lower(c);
    let layers = schedule(&lowered);
    ResourceReport {
        width: c.width(),
        native_depth: layers.into_iter().max().unwrap_or(0),
        cx_count: lowered.count("cx"),
        abstract_stage1_steps: abstract_stage1_steps(c),
        abstract_stage2_cswap_depth: abstract_stage2_cswap_depth(c),
    }
}

/// Sequential rotation steps: ASAP depth over the non-zero rotation gates,
/// where a multiplexer with `c` controls occupies `2^c` steps on its qubits.
pub fn abstract_stage1_steps(c: &Circuit) -> usize {
    let rotations = c
        .gates()
        .iter()
        .filter(|g| !g.is_permutation() && !g.is_zero_rotation())
        .map(|g| {
            let weight = match g {
                Gate::MuxRy { controls, .. } | Gate::MuxRz { controls, .. } => 1 << controls.len(),
                _ => 1,
            };
            (g, weight)
        });
    weighted_asap(c.width(), rotations).0
}

/// ASAP depth of the CSWAP gates alone.
pub fn abstract_stage2_cswap_depth(c: &Circuit) -> usize {
    let cswaps = c
        .gates()
        .iter()
        .filter(|g| matches!(g, Gate::Cswap { .. }))
        .map(|g| (g, 1));
    weighted_asap(c.width(), cswaps).0
}

fn weighted_asap<'a>(
    width: usize,
    gates: impl Iterator<Item = (&'a Gate, usize)>,
) -> (usize, Vec<usize>) {
    let mut busy_until = vec![0usize; width];
    let mut layers = Vec::new();
    let mut depth = 0;
    for (g, weight) in gates {
        let qubits = g.qubits();
        let start = qubits.iter().map(|&q| busy_until[q]).max().unwrap_or(0);
        let end = start + weight;
        for q in qubits {
            busy_until[q] = end;
        }
        depth = depth.max(end);
        layers.push(end);
    }
    (depth, layers)
}
