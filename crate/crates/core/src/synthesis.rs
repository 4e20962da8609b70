//! Circuit construction from an angle tree.
//!
//! The split `s` counts levels from the bottom: the lowest `s` levels of the
//! tree are loaded by sequential multiplexed rotations into `s`-qubit
//! registers, the remaining `n − s` levels are merged with CSWAP chains.
//! `s = n` is the pure top-down circuit and `s = 1` the pure bottom-up one.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::amplitudes::InputVector;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::trees::{build_angle_tree, build_sparse_state_tree, build_state_tree, left_view, AngleNode, AngleTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    TopDown,
    BottomUp,
    Bidirectional,
    SparseBidirectional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthesisPlan {
    pub n: usize,
    pub s: usize,
    pub method: Method,
}

impl SynthesisPlan {
    /// Top-down and bottom-up fix the split at `n` and `1`.
    pub fn new(n: usize, s: usize, method: Method) -> Result<Self> {
        let s = match method {
            Method::TopDown => n,
            Method::BottomUp => 1,
            _ => s,
        };
        check_split(n, s)?;
        Ok(Self { n, s, method })
    }

    pub fn synthesize(&self, tree: &AngleTree) -> Result<Circuit> {
        if tree.num_qubits != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: tree.num_qubits,
            });
        }
        match self.method {
            Method::TopDown => synth_top_down(tree),
            Method::BottomUp => synth_bottom_up(tree),
            Method::Bidirectional => synth_bidirectional(tree, self.s),
            Method::SparseBidirectional => synth_sparse_bidirectional(tree, self.s),
        }
    }
}

fn check_split(n: usize, s: usize) -> Result<()> {
    if s == 0 || s > n {
        return Err(Error::SplitOutOfRange { s, n });
    }
    Ok(())
}

/// Build the angle tree for `input` and synthesize it with split `s`; sparse
/// input takes the pruned walk.
pub fn prepare(input: &InputVector, s: usize) -> Result<Circuit> {
    match input {
        InputVector::Dense(v) => synth_bidirectional(&build_angle_tree(&build_state_tree(v)), s),
        InputVector::Sparse(v) => {
            synth_sparse_bidirectional(&build_angle_tree(&build_sparse_state_tree(v)), s)
        }
    }
}

/// One qubit per level; level `v` is a multiplexed rotation controlled by all
/// shallower qubits.
pub fn synth_top_down(tree: &AngleTree) -> Result<Circuit> {
    if !tree.is_complete() {
        return Err(Error::SparseTreeUnsupported);
    }
    let n = tree.num_qubits;
    let mut c = Circuit::new(n);
    let root = &tree.root;
    c.ry(root.angle_y, 0)?;
    if root.angle_z != 0.0 {
        c.rz(root.angle_z, 0)?;
    }
    for level in 1..n {
        let nodes = root.nodes_at(level);
        let controls: Vec<usize> = (0..level).collect();
        c.push(Gate::MuxRy {
            angles: nodes.iter().map(|a| a.angle_y).collect(),
            controls: controls.clone(),
            target: level,
        })?;
        let angles_z: Vec<f64> = nodes.iter().map(|a| a.angle_z).collect();
        if angles_z.iter().any(|a| *a != 0.0) {
            c.push(Gate::MuxRz {
                angles: angles_z,
                controls,
                target: level,
            })?;
        }
    }
    c.set_outputs(&(0..n).collect::<Vec<_>>())?;
    Ok(c)
}

/// One qubit per angle-tree node; every node is rotated independently, then
/// levels are merged from the bottom up with CSWAP chains.
pub fn synth_bottom_up(tree: &AngleTree) -> Result<Circuit> {
    let n = tree.num_qubits;
    let root = &tree.root;
    let mut qubit: HashMap<(usize, usize), usize> = HashMap::new();
    let mut c = Circuit::new(0);
    let bottom = n - 1;
    for node in root.preorder().into_iter().filter(|a| a.level < bottom) {
        qubit.insert((node.level, node.index), c.add_qubit());
    }
    for node in root.nodes_at(bottom) {
        qubit.insert((node.level, node.index), c.add_qubit());
    }
    let q = |a: &AngleNode| qubit[&(a.level, a.index)];
    for level in (0..n).rev() {
        let nodes = root.nodes_at(level);
        for node in &nodes {
            c.ry(node.angle_y, q(node))?;
            if node.angle_z != 0.0 {
                c.rz(node.angle_z, q(node))?;
            }
        }
        for node in &nodes {
            if let (Some(l), Some(r)) = (node.left.as_deref(), node.right.as_deref()) {
                let lq: Vec<usize> = left_view(l).into_iter().map(q).collect();
                let rq: Vec<usize> = left_view(r).into_iter().map(q).collect();
                cswap_chain(&mut c, q(node), &lq, &rq)?;
            }
        }
    }
    let outputs: Vec<usize> = left_view(root).into_iter().map(q).collect();
    c.set_outputs(&outputs)?;
    Ok(c)
}

/// Append `CSWAP(control, left[i], right[i])` for every `i`.
pub fn cswap_chain(c: &mut Circuit, control: usize, left: &[usize], right: &[usize]) -> Result<()> {
    if left.len() != right.len() {
        return Err(Error::LengthMismatch {
            left: left.len(),
            right: right.len(),
        });
    }
    if left.is_empty() {
        return Err(Error::InvalidRegister("empty CSWAP chain".into()));
    }
    let mut all: Vec<usize> = left.iter().chain(right).copied().chain([control]).collect();
    all.sort_unstable();
    all.dedup();
    if all.len() != 2 * left.len() + 1 {
        return Err(Error::InvalidRegister(format!(
            "control {control}, {left:?} and {right:?} overlap"
        )));
    }
    for (&a, &b) in left.iter().zip(right) {
        c.cswap(control, a, b)?;
    }
    Ok(())
}

pub fn synth_bidirectional(tree: &AngleTree, s: usize) -> Result<Circuit> {
    check_split(tree.num_qubits, s)?;
    if !tree.is_complete() {
        return Err(Error::SparseTreeUnsupported);
    }
    two_stage(tree, s)
}

/// Same walk as [`synth_bidirectional`]; absent sub-trees take no qubits and
/// nodes with one child need no CSWAP chain.
pub fn synth_sparse_bidirectional(tree: &AngleTree, s: usize) -> Result<Circuit> {
    check_split(tree.num_qubits, s)?;
    two_stage(tree, s)
}

fn two_stage(tree: &AngleTree, s: usize) -> Result<Circuit> {
    let n = tree.num_qubits;
    let split = n - s;
    let root = &tree.root;
    let mut c = Circuit::new(0);

    let mut upper: HashMap<usize, usize> = HashMap::new();
    for node in root.preorder().into_iter().filter(|a| a.level < split) {
        // Above the split, (level, index) is determined by the heap position.
        upper.insert((1 << node.level) + node.index, c.add_qubit());
    }
    let subtrees = root.nodes_at(split);
    let mut registers: HashMap<usize, Vec<usize>> = HashMap::new();
    for sub in &subtrees {
        registers.insert(sub.index, (0..s).map(|_| c.add_qubit()).collect());
    }
    let q = |a: &AngleNode| -> usize {
        if a.level < split {
            upper[&((1 << a.level) + a.index)]
        } else {
            registers[&(a.index >> (a.level - split))][a.level - split]
        }
    };

    for sub in &subtrees {
        let reg = &registers[&sub.index];
        c.ry(sub.angle_y, reg[0])?;
        if sub.angle_z != 0.0 {
            c.rz(sub.angle_z, reg[0])?;
        }
        for k in 1..s {
            let base = sub.index << k;
            let nodes: Vec<Option<&AngleNode>> = (0..1usize << k)
                .map(|j| sub.find(split + k, base + j))
                .collect();
            let angles_y: Vec<f64> = nodes.iter().map(|a| a.map_or(0.0, |a| a.angle_y)).collect();
            let angles_z: Vec<f64> = nodes.iter().map(|a| a.map_or(0.0, |a| a.angle_z)).collect();
            let controls = reg[..k].to_vec();
            c.push(Gate::MuxRy {
                angles: angles_y,
                controls: controls.clone(),
                target: reg[k],
            })?;
            if angles_z.iter().any(|a| *a != 0.0) {
                c.push(Gate::MuxRz {
                    angles: angles_z,
                    controls,
                    target: reg[k],
                })?;
            }
        }
    }

    for level in (0..split).rev() {
        let nodes = root.nodes_at(level);
        for node in &nodes {
            c.ry(node.angle_y, q(node))?;
            if node.angle_z != 0.0 {
                c.rz(node.angle_z, q(node))?;
            }
        }
        for node in &nodes {
            if let (Some(l), Some(r)) = (node.left.as_deref(), node.right.as_deref()) {
                let lq: Vec<usize> = left_view(l).into_iter().map(q).collect();
                let rq: Vec<usize> = left_view(r).into_iter().map(q).collect();
                cswap_chain(&mut c, q(node), &lq, &rq)?;
            }
        }
    }

    let outputs: Vec<usize> = left_view(root).into_iter().map(q).collect();
    c.set_outputs(&outputs)?;
    Ok(c)
}
