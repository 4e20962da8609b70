//! Shared helpers: an independent matrix oracle for gates, input generators
//! and the 8-entry experiment vector.
#![allow(dead_code)]

pub mod qasm_grammar;

use num_complex::Complex64;
use qsprep::amplitudes::{load_vector, AmplitudeVector, LoadOptions, SparseAmplitudeVector};
use qsprep::circuit::Gate;
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::StandardNormal;

pub type Matrix = Vec<Vec<Complex64>>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Probabilities of the experiment vector used throughout the tests.
pub const EXPERIMENT_PROBS: [f64; 8] = [0.03, 0.06, 0.15, 0.05, 0.1, 0.3, 0.2, 0.11];

pub fn experiment_vector() -> AmplitudeVector {
    let raw: Vec<Complex64> = EXPERIMENT_PROBS
        .iter()
        .map(|p| Complex64::new(p.sqrt(), 0.0))
        .collect();
    load_vector(&raw, LoadOptions::default()).unwrap()
}

/// Sparse vector with `m` distinct random indices and standard-normal complex amplitudes.
pub fn random_sparse<R: Rng>(n: usize, m: usize, rng: &mut R) -> SparseAmplitudeVector {
    let idx = sample(rng, 1 << n, m).into_vec();
    let mut entries: Vec<(usize, Complex64)> = idx
        .into_iter()
        .map(|i| {
            (
                i,
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)),
            )
        })
        .collect();
    let norm = entries.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>().sqrt();
    for e in &mut entries {
        e.1 /= norm;
    }
    SparseAmplitudeVector::new(n, entries, LoadOptions::default()).unwrap()
}

pub fn identity(dim: usize) -> Matrix {
    (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { ONE } else { ZERO }).collect())
        .collect()
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![ZERO; ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![ZERO; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == ZERO {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

fn scale(a: &Matrix, k: Complex64) -> Matrix {
    a.iter().map(|r| r.iter().map(|x| x * k).collect()).collect()
}

pub fn ry(theta: f64) -> Matrix {
    let (s, c) = (theta / 2.0).sin_cos();
    vec![
        vec![Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        vec![Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

pub fn rz(phi: f64) -> Matrix {
    vec![
        vec![Complex64::from_polar(1.0, -phi / 2.0), ZERO],
        vec![ZERO, Complex64::from_polar(1.0, phi / 2.0)],
    ]
}

fn pauli_x() -> Matrix {
    vec![vec![ZERO, ONE], vec![ONE, ZERO]]
}

fn pauli_y() -> Matrix {
    let i = Complex64::new(0.0, 1.0);
    vec![vec![ZERO, -i], vec![i, ZERO]]
}

fn pauli_z() -> Matrix {
    vec![vec![ONE, ZERO], vec![ZERO, -ONE]]
}

fn projector(bit: usize) -> Matrix {
    if bit == 0 {
        vec![vec![ONE, ZERO], vec![ZERO, ZERO]]
    } else {
        vec![vec![ZERO, ZERO], vec![ZERO, ONE]]
    }
}

/// `⊗_q factors[q]` over `width` qubits, qubit 0 leftmost (most significant).
fn place(width: usize, factors: &[(usize, Matrix)]) -> Matrix {
    let mut out = vec![vec![ONE]];
    for q in 0..width {
        let m = factors
            .iter()
            .find(|(p, _)| *p == q)
            .map_or_else(|| identity(2), |(_, m)| m.clone());
        out = kron(&out, &m);
    }
    out
}

/// Unitary of `gate` on `width` qubits, built from its textbook definition.
pub fn gate_matrix(gate: &Gate, width: usize) -> Matrix {
    match gate {
        Gate::Ry { theta, target } => place(width, &[(*target, ry(*theta))]),
        Gate::Rz { phi, target } => place(width, &[(*target, rz(*phi))]),
        Gate::Cx { control, target } => add(
            &place(width, &[(*control, projector(0))]),
            &place(width, &[(*control, projector(1)), (*target, pauli_x())]),
        ),
        Gate::Cswap { control, a, b } => {
            // SWAP = (I + XX + YY + ZZ) / 2
            let mut swap_part = place(width, &[(*control, projector(1))]);
            for p in [pauli_x(), pauli_y(), pauli_z()] {
                swap_part = add(
                    &swap_part,
                    &place(
                        width,
                        &[(*control, projector(1)), (*a, p.clone()), (*b, p)],
                    ),
                );
            }
            add(
                &place(width, &[(*control, projector(0))]),
                &scale(&swap_part, Complex64::new(0.5, 0.0)),
            )
        }
        Gate::MuxRy {
            angles,
            controls,
            target,
        }
        | Gate::MuxRz {
            angles,
            controls,
            target,
        } => {
            let rot = |a: f64| {
                if matches!(gate, Gate::MuxRy { .. }) {
                    ry(a)
                } else {
                    rz(a)
                }
            };
            let k = controls.len();
            let dim = 1 << width;
            let mut total = vec![vec![ZERO; dim]; dim];
            for (j, a) in angles.iter().enumerate() {
                let mut factors: Vec<(usize, Matrix)> = controls
                    .iter()
                    .enumerate()
                    .map(|(pos, &c)| (c, projector((j >> (k - 1 - pos)) & 1)))
                    .collect();
                factors.push((*target, rot(*a)));
                total = add(&total, &place(width, &factors));
            }
            total
        }
    }
}

pub fn circuit_matrix(gates: &[Gate], width: usize) -> Matrix {
    gates
        .iter()
        .fold(identity(1 << width), |acc, g| matmul(&gate_matrix(g, width), &acc))
}

/// Largest entry difference once the global phase is removed.
pub fn distance_up_to_phase(a: &Matrix, b: &Matrix) -> f64 {
    let (mut best, mut pos) = (0.0, (0, 0));
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if x.norm() > best {
                best = x.norm();
                pos = (i, j);
            }
        }
    }
    let ratio = b[pos.0][pos.1] / a[pos.0][pos.1];
    let phase = ratio / ratio.norm();
    a.iter()
        .zip(b)
        .flat_map(|(r, s)| r.iter().zip(s).map(move |(x, y)| (x * phase - y).norm()))
        .fold(0.0, f64::max)
}

pub fn apply_matrix(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}
