//! State trees and angle trees.
//!
//! Levels are numbered from the root: the root sits at level 0 and the input
//! amplitudes (leaves of the state tree) at level `n`. The angle tree mirrors
//! the state tree without its leaf level, so its deepest nodes sit at `n - 1`.
//!
//! Each state-tree node stores a magnitude and a phase. A parent combines its
//! children as `√(|l|² + |r|²)` and `(φ_l + φ_r) / 2`; absent children (sparse
//! trees) and zero amplitudes count as magnitude 0, phase 0.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::amplitudes::{AmplitudeVector, SparseAmplitudeVector};

#[derive(Debug, Clone, PartialEq)]
pub struct StateNode {
    pub level: usize,
    pub index: usize,
    pub magnitude: f64,
    /// Principal argument for leaves, children's mean for interior nodes.
    pub phase: f64,
    pub left: Option<Box<StateNode>>,
    pub right: Option<Box<StateNode>>,
}

impl StateNode {
    fn leaf(level: usize, index: usize, amplitude: Complex64) -> Self {
        let magnitude = amplitude.norm();
        let phase = if magnitude == 0.0 { 0.0 } else { amplitude.arg() };
        Self {
            level,
            index,
            magnitude,
            phase,
            left: None,
            right: None,
        }
    }

    fn combine(left: Option<StateNode>, right: Option<StateNode>) -> Self {
        let (mag_l, phase_l) = left.as_ref().map_or((0.0, 0.0), |n| (n.magnitude, n.phase));
        let (mag_r, phase_r) = right.as_ref().map_or((0.0, 0.0), |n| (n.magnitude, n.phase));
        let child = left.as_ref().or(right.as_ref()).expect("at least one child");
        Self {
            level: child.level - 1,
            index: child.index / 2,
            magnitude: mag_l.hypot(mag_r),
            phase: (phase_l + phase_r) / 2.0,
            left: left.map(Box::new),
            right: right.map(Box::new),
        }
    }

    pub fn amplitude(&self) -> Complex64 {
        Complex64::from_polar(self.magnitude, self.phase)
    }

    pub fn is_leaf(&self) -> bool {
        self.left.is_none() && self.right.is_none()
    }

    pub fn node_count(&self) -> usize {
        1 + self.left.as_ref().map_or(0, |n| n.node_count())
            + self.right.as_ref().map_or(0, |n| n.node_count())
    }

    /// Find the node at `(level, index)` by descending along the index bits.
    pub fn find(&self, level: usize, index: usize) -> Option<&StateNode> {
        if level < self.level {
            return None;
        }
        let mut node = self;
        for depth in self.level..level {
            let bit = (index >> (level - depth - 1)) & 1;
            node = if bit == 0 { node.left.as_deref()? } else { node.right.as_deref()? };
        }
        (node.index == index).then_some(node)
    }

    pub fn to_json(&self) -> Value {
        let children: Vec<Value> = [&self.left, &self.right]
            .iter()
            .map(|c| c.as_ref().map_or(Value::Null, |c| c.to_json()))
            .collect();
        let amp = self.amplitude();
        json!({
            "level": self.level,
            "index": self.index,
            "amplitude": [amp.re, amp.im],
            "children": if self.is_leaf() { Value::Array(vec![]) } else { Value::Array(children) },
        })
    }
}

/// Root of a state tree together with the number of qubits it encodes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTree {
    pub num_qubits: usize,
    pub root: StateNode,
}

pub fn build_state_tree(v: &AmplitudeVector) -> StateTree {
    let n = v.num_qubits();
    let mut nodes: Vec<StateNode> = v
        .entries()
        .iter()
        .enumerate()
        .map(|(i, &a)| StateNode::leaf(n, i, a))
        .collect();
    while nodes.len() > 1 {
        let mut it = nodes.into_iter();
        let mut parents = Vec::with_capacity(it.len() / 2);
        while let (Some(l), Some(r)) = (it.next(), it.next()) {
            parents.push(StateNode::combine(Some(l), Some(r)));
        }
        nodes = parents;
    }
    StateTree {
        num_qubits: n,
        root: nodes.pop().expect("non-empty vector"),
    }
}

/// Pruned tree holding only the ancestors of the stored amplitudes.
pub fn build_sparse_state_tree(v: &SparseAmplitudeVector) -> StateTree {
    let n = v.num_qubits();
    let mut nodes: Vec<StateNode> = v
        .entries()
        .iter()
        .map(|&(i, a)| StateNode::leaf(n, i, a))
        .collect();
    for _ in 0..n {
        let mut parents = Vec::with_capacity(nodes.len());
        let mut it = nodes.into_iter().peekable();
        while let Some(node) = it.next() {
            let parent = if node.index % 2 == 1 {
                StateNode::combine(None, Some(node))
            } else if it.peek().is_some_and(|next| next.index == node.index + 1) {
                let right = it.next();
                StateNode::combine(Some(node), right)
            } else {
                StateNode::combine(Some(node), None)
            };
            parents.push(parent);
        }
        nodes = parents;
    }
    StateTree {
        num_qubits: n,
        root: nodes.pop().expect("non-empty sparse vector"),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngleNode {
    pub level: usize,
    pub index: usize,
    /// RY angle in `[0, π]`.
    pub angle_y: f64,
    /// RZ angle.
    pub angle_z: f64,
    pub left: Option<Box<AngleNode>>,
    pub right: Option<Box<AngleNode>>,
}

impl AngleNode {
    pub fn node_count(&self) -> usize {
        1 + self.left.as_ref().map_or(0, |n| n.node_count())
            + self.right.as_ref().map_or(0, |n| n.node_count())
    }

    pub fn child(&self, bit: usize) -> Option<&AngleNode> {
        if bit == 0 {
            self.left.as_deref()
        } else {
            self.right.as_deref()
        }
    }

    pub fn find(&self, level: usize, index: usize) -> Option<&AngleNode> {
        if level < self.level {
            return None;
        }
        let mut node = self;
        for depth in self.level..level {
            node = node.child((index >> (level - depth - 1)) & 1)?;
        }
        (node.index == index).then_some(node)
    }

    /// Pre-order traversal.
    pub fn preorder(&self) -> Vec<&AngleNode> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            out.push(node);
            if let Some(r) = node.right.as_deref() {
                stack.push(r);
            }
            if let Some(l) = node.left.as_deref() {
                stack.push(l);
            }
        }
        out
    }

    /// Nodes at `level` in index order.
    pub fn nodes_at(&self, level: usize) -> Vec<&AngleNode> {
        let mut current = vec![self];
        for _ in self.level..level {
            current = current
                .into_iter()
                .flat_map(|n| n.left.as_deref().into_iter().chain(n.right.as_deref()))
                .collect();
        }
        current
    }

    pub fn to_json(&self) -> Value {
        let children: Vec<Value> = if self.left.is_none() && self.right.is_none() {
            vec![]
        } else {
            [&self.left, &self.right]
                .iter()
                .map(|c| c.as_ref().map_or(Value::Null, |c| c.to_json()))
                .collect()
        };
        json!({
            "level": self.level,
            "index": self.index,
            "angles": { "y": self.angle_y, "z": self.angle_z },
            "children": children,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngleTree {
    pub num_qubits: usize,
    pub root: AngleNode,
}

impl AngleTree {
    /// True when every node of the `2^n − 1` node tree is present.
    pub fn is_complete(&self) -> bool {
        self.root.node_count() == (1usize << self.num_qubits) - 1
    }
}

pub fn build_angle_tree(tree: &StateTree) -> AngleTree {
    AngleTree {
        num_qubits: tree.num_qubits,
        root: angle_node(&tree.root),
    }
}

fn angle_node(node: &StateNode) -> AngleNode {
    let (angle_y, angle_z) = if node.magnitude == 0.0 {
        (0.0, 0.0)
    } else {
        let (mag_r, phase_r) = node.right.as_ref().map_or((0.0, 0.0), |r| (r.magnitude, r.phase));
        let ratio = (mag_r / node.magnitude).clamp(-1.0, 1.0);
        // 2·arg(right / parent) from stored phases; also set for an empty right child
        (2.0 * ratio.asin(), 2.0 * (phase_r - node.phase))
    };
    let sub = |c: &Option<Box<StateNode>>| {
        c.as_deref()
            .filter(|c| !c.is_leaf())
            .map(|c| Box::new(angle_node(c)))
    };
    AngleNode {
        level: node.level,
        index: node.index,
        angle_y,
        angle_z,
        left: sub(&node.left),
        right: sub(&node.right),
    }
}

/// Leftmost existing root-to-bottom path (falls back to the right child where
/// the left one is absent). Root first.
pub fn left_view(root: &AngleNode) -> Vec<&AngleNode> {
    let mut out = vec![root];
    let mut node = root;
    while let Some(next) = node.left.as_deref().or(node.right.as_deref()) {
        out.push(next);
        node = next;
    }
    out
}
