//! Exact statevector simulation, output marginals and sampling.
//!
//! Basis index bit `w − 1 − q` holds qubit `q`, so qubit 0 is the most
//! significant bit. Output patterns follow the same convention over output
//! bit positions.

mod factored;

pub use factored::factored_marginals;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::amplitudes::AmplitudeVector;
use crate::circuit::{Circuit, Gate, Role};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_SIM_QUBITS: usize = 26;

/// Widths up to this use the dense simulator in [`exact_marginals`].
pub const DENSE_MARGINAL_LIMIT: usize = 16;

/// Memory guard for [`simulate`], overridable with `QSPREP_MAX_SIM_QUBITS`.
pub fn max_sim_qubits() -> usize {
    std::env::var("QSPREP_MAX_SIM_QUBITS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_SIM_QUBITS)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    width: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `width` qubits.
    pub fn zero(width: usize) -> Self {
        Self::basis(width, 0)
    }

    pub fn basis(width: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << width];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { width, amplitudes }
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "state length {len} is not a power of two"
            )));
        }
        Ok(Self {
            width: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Bit mask of qubit `q` in the basis index.
    pub fn mask(&self, q: usize) -> usize {
        1 << (self.width - 1 - q)
    }

    pub fn apply_gate(&mut self, gate: &Gate) {
        let width = self.width;
        apply(&mut self.amplitudes, gate, |q| 1 << (width - 1 - q));
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Largest entrywise difference after removing the relative global phase.
    pub fn distance_up_to_phase(&self, other: &StateVector) -> f64 {
        let inner = self.inner(other);
        let phase = if inner.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            inner / inner.norm()
        };
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a * phase - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Apply `c` to `|0…0⟩`. High-level gates act by their defining unitaries.
pub fn simulate(c: &Circuit) -> Result<StateVector> {
    let max = max_sim_qubits();
    if c.width() > max {
        return Err(Error::TooWide {
            width: c.width(),
            max,
        });
    }
    let mut psi = StateVector::zero(c.width());
    for g in c.gates() {
        psi.apply_gate(g);
    }
    Ok(psi)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Distribution {
    pub probs: Vec<f64>,
}

impl Distribution {
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn max_abs_diff(&self, other: &[f64]) -> f64 {
        self.probs
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Probability of each output pattern, summing over ancilla configurations.
pub fn output_marginals(psi: &StateVector, roles: &[Role]) -> Result<Distribution> {
    if roles.len() != psi.width {
        return Err(Error::DimensionMismatch {
            expected: psi.width,
            actual: roles.len(),
        });
    }
    let n = roles.iter().filter(|r| matches!(r, Role::Output(_))).count();
    // (basis mask, pattern mask) per output qubit
    let bits: Vec<(usize, usize)> = roles
        .iter()
        .enumerate()
        .filter_map(|(q, r)| match r {
            Role::Output(k) => Some((psi.mask(q), 1 << (n - 1 - k))),
            Role::Ancilla => None,
        })
        .collect();
    let mut probs = vec![0.0; 1 << n];
    for (i, a) in psi.amplitudes.iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let pattern = bits
            .iter()
            .filter(|(m, _)| i & m != 0)
            .fold(0, |acc, (_, b)| acc | b);
        probs[pattern] += p;
    }
    Ok(Distribution { probs })
}

/// Exact output marginals of `c`: dense simulation when narrow, otherwise the
/// factored evaluator.
pub fn exact_marginals(c: &Circuit) -> Result<Distribution> {
    if c.width() <= DENSE_MARGINAL_LIMIT {
        output_marginals(&simulate(c)?, c.roles())
    } else {
        factored_marginals(c)
    }
}

/// Empirical distribution of `shots` draws from `dist` (ChaCha8 seeded with `seed`).
pub fn sample(dist: &Distribution, shots: usize, seed: u64) -> Result<Distribution> {
    if shots == 0 {
        return Err(Error::InvalidInput("shots must be at least 1".into()));
    }
    let weighted = WeightedIndex::new(&dist.probs)
        .map_err(|e| Error::InvalidInput(format!("cannot sample distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0usize; dist.len()];
    for _ in 0..shots {
        counts[weighted.sample(&mut rng)] += 1;
    }
    Ok(Distribution {
        probs: counts
            .into_iter()
            .map(|k| k as f64 / shots as f64)
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateDistance {
    /// `|⟨target|ψ⟩|`
    pub overlap: f64,
    /// `arg⟨target|ψ⟩`
    pub global_phase: f64,
}

/// Compare an ancilla-free state against `target`.
pub fn state_distance(psi: &StateVector, target: &AmplitudeVector) -> Result<StateDistance> {
    if psi.amplitudes.len() != target.len() {
        return Err(Error::DimensionMismatch {
            expected: target.len(),
            actual: psi.amplitudes.len(),
        });
    }
    let inner: Complex64 = target
        .entries()
        .iter()
        .zip(&psi.amplitudes)
        .map(|(t, a)| t.conj() * a)
        .sum();
    Ok(StateDistance {
        overlap: inner.norm(),
        global_phase: inner.arg(),
    })
}

pub fn mae(est: &Distribution, target: &Distribution) -> Result<f64> {
    if est.len() != target.len() {
        return Err(Error::DimensionMismatch {
            expected: target.len(),
            actual: est.len(),
        });
    }
    if est.is_empty() {
        return Ok(0.0);
    }
    let total: f64 = est
        .probs
        .iter()
        .zip(&target.probs)
        .map(|(a, b)| (a - b).abs())
        .sum();
    Ok(total / est.len() as f64)
}

fn ry_matrix(theta: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    let re = |x: f64| Complex64::new(x, 0.0);
    [[re(c), re(-s)], [re(s), re(c)]]
}

fn rz_matrix(phi: f64) -> [[Complex64; 2]; 2] {
    let zero = Complex64::new(0.0, 0.0);
    [
        [Complex64::from_polar(1.0, -phi / 2.0), zero],
        [zero, Complex64::from_polar(1.0, phi / 2.0)],
    ]
}

/// Apply `gate` in place; `mask(q)` gives qubit `q`'s bit in the index.
pub(crate) fn apply(amps: &mut [Complex64], gate: &Gate, mask: impl Fn(usize) -> usize) {
    match gate {
        Gate::Ry { theta, target } => apply_1q(amps, mask(*target), &ry_matrix(*theta)),
        Gate::Rz { phi, target } => apply_1q(amps, mask(*target), &rz_matrix(*phi)),
        Gate::MuxRy {
            angles,
            controls,
            target,
        } => {
            let mats: Vec<_> = angles.iter().map(|a| ry_matrix(*a)).collect();
            apply_mux(amps, &controls.iter().map(|&q| mask(q)).collect::<Vec<_>>(), mask(*target), &mats);
        }
        Gate::MuxRz {
            angles,
            controls,
            target,
        } => {
            let mats: Vec<_> = angles.iter().map(|a| rz_matrix(*a)).collect();
            apply_mux(amps, &controls.iter().map(|&q| mask(q)).collect::<Vec<_>>(), mask(*target), &mats);
        }
        Gate::Cx { .. } | Gate::Cswap { .. } => permute(amps, gate, mask),
    }
}

/// Apply a CX or CSWAP to any basis-indexed vector.
pub(crate) fn permute<T>(v: &mut [T], gate: &Gate, mask: impl Fn(usize) -> usize) {
    match *gate {
        Gate::Cx { control, target } => {
            let (c, t) = (mask(control), mask(target));
            for i in 0..v.len() {
                if i & c != 0 && i & t == 0 {
                    v.swap(i, i | t);
                }
            }
        }
        Gate::Cswap { control, a, b } => {
            let (c, a, b) = (mask(control), mask(a), mask(b));
            for i in 0..v.len() {
                if i & c != 0 && i & a != 0 && i & b == 0 {
                    v.swap(i, (i & !a) | b);
                }
            }
        }
        _ => unreachable!("{} is not a permutation", gate.name()),
    }
}

fn apply_1q(amps: &mut [Complex64], t: usize, m: &[[Complex64; 2]; 2]) {
    for i in 0..amps.len() {
        if i & t == 0 {
            let (a0, a1) = (amps[i], amps[i | t]);
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[i | t] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

fn apply_mux(amps: &mut [Complex64], controls: &[usize], t: usize, mats: &[[[Complex64; 2]; 2]]) {
    let k = controls.len();
    for i in 0..amps.len() {
        if i & t == 0 {
            let j = controls
                .iter()
                .enumerate()
                .filter(|(_, &c)| i & c != 0)
                .fold(0, |acc, (pos, _)| acc | 1 << (k - 1 - pos));
            let m = &mats[j];
            let (a0, a1) = (amps[i], amps[i | t]);
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[i | t] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}
