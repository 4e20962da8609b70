//! Gate-list circuit representation.
//!
//! Synthesis emits multiplexed rotations and CSWAPs as first-class gates;
//! [`lower`] rewrites them into the native `{RY, RZ, CX}` set. Qubit ids are
//! allocation-ordered integers and each qubit carries a [`Role`].

mod lower;
mod metrics;
mod qasm;

pub use lower::{lower, lower_gate, toffoli};
pub use metrics::{abstract_stage1_steps, abstract_stage2_cswap_depth, metrics, schedule, ResourceReport};
pub use qasm::{export_qasm, format_angle, QasmOptions};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
pub enum Gate {
    Ry {
        theta: f64,
        target: usize,
    },
    Rz {
        phi: f64,
        target: usize,
    },
    Cx {
        control: usize,
        target: usize,
    },
    /// Swaps `a` and `b` when `control` is set.
    Cswap {
        control: usize,
        a: usize,
        b: usize,
    },
    /// Uniformly controlled RY: `angles[j]` applies when the controls, read
    /// with the first control as most significant bit, equal `j`.
    MuxRy {
        angles: Vec<f64>,
        controls: Vec<usize>,
        target: usize,
    },
    /// Uniformly controlled RZ, same layout as [`Gate::MuxRy`].
    MuxRz {
        angles: Vec<f64>,
        controls: Vec<usize>,
        target: usize,
    },
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::Ry { .. } => "ry",
            Gate::Rz { .. } => "rz",
            Gate::Cx { .. } => "cx",
            Gate::Cswap { .. } => "cswap",
            Gate::MuxRy { .. } => "mux_ry",
            Gate::MuxRz { .. } => "mux_rz",
        }
    }

    /// Qubits touched, target last for rotations and CX.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Ry { target, .. } | Gate::Rz { target, .. } => vec![*target],
            Gate::Cx { control, target } => vec![*control, *target],
            Gate::Cswap { control, a, b } => vec![*control, *a, *b],
            Gate::MuxRy {
                controls, target, ..
            }
            | Gate::MuxRz {
                controls, target, ..
            } => controls.iter().copied().chain([*target]).collect(),
        }
    }

    pub fn is_native(&self) -> bool {
        matches!(self, Gate::Ry { .. } | Gate::Rz { .. } | Gate::Cx { .. })
    }

    /// CX and CSWAP only permute computational basis states.
    pub fn is_permutation(&self) -> bool {
        matches!(self, Gate::Cx { .. } | Gate::Cswap { .. })
    }

    /// Rotation whose angles are all exactly zero (an identity).
    pub fn is_zero_rotation(&self) -> bool {
        match self {
            Gate::Ry { theta: a, .. } | Gate::Rz { phi: a, .. } => *a == 0.0,
            Gate::MuxRy { angles, .. } | Gate::MuxRz { angles, .. } => {
                angles.iter().all(|a| *a == 0.0)
            }
            _ => false,
        }
    }

    fn validate(&self, width: usize) -> Result<()> {
        let qubits = self.qubits();
        if let Some(q) = qubits.iter().find(|&&q| q >= width) {
            return Err(Error::InvalidCircuit(format!(
                "{} uses qubit {q} outside width {width}",
                self.name()
            )));
        }
        let mut sorted = qubits.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != qubits.len() {
            return Err(Error::InvalidCircuit(format!(
                "{} repeats a qubit: {qubits:?}",
                self.name()
            )));
        }
        if let Gate::MuxRy {
            angles, controls, ..
        }
        | Gate::MuxRz {
            angles, controls, ..
        } = self
        {
            if controls.len() >= usize::BITS as usize || angles.len() != 1 << controls.len() {
                return Err(Error::InvalidCircuit(format!(
                    "{} with {} controls needs {} angles, got {}",
                    self.name(),
                    controls.len(),
                    1usize << controls.len().min(63),
                    angles.len()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Carries output bit `k`; bit 0 is the most significant.
    Output(usize),
    Ancilla,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    width: usize,
    roles: Vec<Role>,
    gates: Vec<Gate>,
}

impl Circuit {
    /// `width` ancilla qubits, no gates.
    pub fn new(width: usize) -> Self {
        Self {
            width,
            roles: vec![Role::Ancilla; width],
            gates: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn add_qubit(&mut self) -> usize {
        self.width += 1;
        self.roles.push(Role::Ancilla);
        self.width - 1
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.width)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn ry(&mut self, theta: f64, target: usize) -> Result<()> {
        self.push(Gate::Ry { theta, target })
    }

    pub fn rz(&mut self, phi: f64, target: usize) -> Result<()> {
        self.push(Gate::Rz { phi, target })
    }

    pub fn cx(&mut self, control: usize, target: usize) -> Result<()> {
        self.push(Gate::Cx { control, target })
    }

    pub fn cswap(&mut self, control: usize, a: usize, b: usize) -> Result<()> {
        self.push(Gate::Cswap { control, a, b })
    }

    /// Mark `outputs[k]` as the qubit carrying output bit `k`; all others become ancillas.
    pub fn set_outputs(&mut self, outputs: &[usize]) -> Result<()> {
        let mut roles = vec![Role::Ancilla; self.width];
        for (bit, &q) in outputs.iter().enumerate() {
            if q >= self.width || roles[q] != Role::Ancilla {
                return Err(Error::InvalidCircuit(format!(
                    "bad output assignment {outputs:?}"
                )));
            }
            roles[q] = Role::Output(bit);
        }
        self.roles = roles;
        Ok(())
    }

    /// Output qubits ordered by bit position.
    pub fn output_qubits(&self) -> Vec<usize> {
        let mut outs: Vec<(usize, usize)> = self
            .roles
            .iter()
            .enumerate()
            .filter_map(|(q, r)| match r {
                Role::Output(bit) => Some((*bit, q)),
                Role::Ancilla => None,
            })
            .collect();
        outs.sort_unstable();
        outs.into_iter().map(|(_, q)| q).collect()
    }

    pub fn num_outputs(&self) -> usize {
        self.output_qubits().len()
    }

    pub fn is_lowered(&self) -> bool {
        self.gates.iter().all(Gate::is_native)
    }

    pub fn count(&self, name: &str) -> usize {
        self.gates.iter().filter(|g| g.name() == name).count()
    }

    /// Check every invariant: gate operands, role count, contiguous output bits.
    pub fn validate(&self) -> Result<()> {
        if self.roles.len() != self.width {
            return Err(Error::InvalidCircuit(format!(
                "{} roles for width {}",
                self.roles.len(),
                self.width
            )));
        }
        let mut bits: Vec<usize> = self
            .roles
            .iter()
            .filter_map(|r| match r {
                Role::Output(b) => Some(*b),
                Role::Ancilla => None,
            })
            .collect();
        bits.sort_unstable();
        if bits.iter().enumerate().any(|(i, b)| i != *b) {
            return Err(Error::InvalidCircuit(format!(
                "output bits {bits:?} are not a contiguous range from 0"
            )));
        }
        self.gates.iter().try_for_each(|g| g.validate(self.width))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: Circuit = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub(crate) fn from_parts(width: usize, roles: Vec<Role>, gates: Vec<Gate>) -> Self {
        Self {
            width,
            roles,
            gates,
        }
    }
}
