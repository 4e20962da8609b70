//! Exact output marginals for circuits too wide for a dense statevector.
//!
//! Qubits are grouped into independent factors. A factor stays a quantum
//! state while any of its qubits still faces a rotation; once only CX/CSWAP
//! remain for all of them it is measured (Born rule) and carried on as a
//! classical distribution, since basis permutations commute with the final
//! computational-basis measurement. Ancillas are summed out as soon as they
//! are no longer used. Anything outside this pattern returns
//! [`Error::Unsupported`].

use num_complex::Complex64;

use super::{apply, permute, Distribution};
use crate::circuit::{Circuit, Role};
use crate::error::{Error, Result};

const MAX_FACTOR_QUBITS: usize = 28;

enum Data {
    Quantum(Vec<Complex64>),
    Classical(Vec<f64>),
}

/// Qubit `wires[p]` is bit `1 << p` of the local index.
struct Factor {
    wires: Vec<usize>,
    data: Data,
}

impl Factor {
    fn is_quantum(&self) -> bool {
        matches!(self.data, Data::Quantum(_))
    }

    fn measure(&mut self) {
        if let Data::Quantum(amps) = &self.data {
            self.data = Data::Classical(amps.iter().map(|a| a.norm_sqr()).collect());
        }
    }

    fn sum_out(&mut self, wire: usize) {
        let Data::Classical(p) = &self.data else {
            unreachable!("summing out a quantum factor")
        };
        let pos = self.wires.iter().position(|&w| w == wire).expect("wire in factor");
        let low = (1usize << pos) - 1;
        let reduced = (0..p.len() / 2)
            .map(|i| {
                let base = ((i >> pos) << (pos + 1)) | (i & low);
                p[base] + p[base | 1 << pos]
            })
            .collect();
        self.wires.remove(pos);
        self.data = Data::Classical(reduced);
    }
}

fn tensor<T: Copy + std::ops::Mul<Output = T>>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for y in b {
        out.extend(a.iter().map(|x| *x * *y));
    }
    out
}

struct Evaluator {
    factors: Vec<Option<Factor>>,
    owner: Vec<usize>,
    /// Index of the last rotation on each qubit.
    last_rotation: Vec<Option<usize>>,
}

impl Evaluator {
    fn factor(&self, id: usize) -> &Factor {
        self.factors[id].as_ref().expect("live factor")
    }

    /// Every qubit of the factor is past its last rotation at gate `i`.
    fn settled(&self, id: usize, i: usize) -> bool {
        self.factor(id)
            .wires
            .iter()
            .all(|&w| self.last_rotation[w].is_none_or(|r| r < i))
    }

    fn merge(&mut self, ids: &[usize]) -> Result<usize> {
        let first = ids[0];
        for &id in &ids[1..] {
            let other = self.factors[id].take().expect("live factor");
            let target = self.factors[first].as_mut().expect("live factor");
            if target.wires.len() + other.wires.len() > MAX_FACTOR_QUBITS {
                return Err(Error::Unsupported(format!(
                    "entangled block exceeds {MAX_FACTOR_QUBITS} qubits"
                )));
            }
            target.data = match (&target.data, &other.data) {
                (Data::Quantum(a), Data::Quantum(b)) => Data::Quantum(tensor(a, b)),
                (Data::Classical(a), Data::Classical(b)) => Data::Classical(tensor(a, b)),
                _ => unreachable!("mixed merge"),
            };
            for &w in &other.wires {
                self.owner[w] = first;
            }
            target.wires.extend(other.wires);
        }
        Ok(first)
    }
}

/// Output marginals of `c` without materializing the full state.
pub fn factored_marginals(c: &Circuit) -> Result<Distribution> {
    let width = c.width();
    let gates = c.gates();
    let mut last_rotation = vec![None; width];
    let mut last_use = vec![None; width];
    for (i, g) in gates.iter().enumerate() {
        for q in g.qubits() {
            last_use[q] = Some(i);
            if !g.is_permutation() {
                last_rotation[q] = Some(i);
            }
        }
    }
    let roles = c.roles();
    let mut ev = Evaluator {
        factors: (0..width)
            .map(|w| {
                let mut zero = vec![Complex64::new(0.0, 0.0); 2];
                zero[0] = Complex64::new(1.0, 0.0);
                Some(Factor {
                    wires: vec![w],
                    data: Data::Quantum(zero),
                })
            })
            .collect(),
        owner: (0..width).collect(),
        last_rotation,
    };

    for (i, g) in gates.iter().enumerate() {
        let qubits = g.qubits();
        let mut ids: Vec<usize> = qubits.iter().map(|&q| ev.owner[q]).collect();
        ids.sort_unstable();
        ids.dedup();
        if g.is_permutation() && ids.iter().all(|&id| ev.settled(id, i)) {
            for &id in &ids {
                ev.factors[id].as_mut().expect("live factor").measure();
            }
        } else if ids.iter().any(|&id| !ev.factor(id).is_quantum()) {
            return Err(Error::Unsupported(format!(
                "{} at position {i} couples measured and coherent qubits",
                g.name()
            )));
        }
        let id = ev.merge(&ids)?;
        let f = ev.factors[id].as_mut().expect("live factor");
        let wires = &f.wires;
        let local = |q: usize| 1 << wires.iter().position(|&w| w == q).expect("wire in factor");
        match &mut f.data {
            Data::Quantum(amps) => apply(amps, g, local),
            Data::Classical(p) => permute(p, g, local),
        }
        for &q in &qubits {
            if last_use[q] == Some(i) && roles[q] == Role::Ancilla && ev.settled(ev.owner[q], i + 1) {
                let f = ev.factors[ev.owner[q]].as_mut().expect("live factor");
                f.measure();
                f.sum_out(q);
            }
        }
    }

    let n = roles.iter().filter(|r| matches!(r, Role::Output(_))).count();
    let mut parts = Vec::new();
    for f in ev.factors.iter_mut().flatten() {
        f.measure();
        for w in f.wires.clone() {
            if roles[w] == Role::Ancilla {
                f.sum_out(w);
            }
        }
        let Data::Classical(p) = &f.data else {
            unreachable!()
        };
        // pattern mask for each local bit
        let masks: Vec<usize> = f
            .wires
            .iter()
            .map(|&w| match roles[w] {
                Role::Output(k) => 1 << (n - 1 - k),
                Role::Ancilla => unreachable!(),
            })
            .collect();
        parts.push((masks, p.clone()));
    }
    let probs = (0..1usize << n)
        .map(|pattern| {
            parts
                .iter()
                .map(|(masks, p)| {
                    let local = masks
                        .iter()
                        .enumerate()
                        .filter(|(_, &m)| pattern & m != 0)
                        .fold(0, |acc, (pos, _)| acc | 1 << pos);
                    p[local]
                })
                .product()
        })
        .collect();
    Ok(Distribution { probs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::{output_marginals, simulate};

    #[test]
    fn matches_dense_on_small_circuits() {
        let mut c = Circuit::new(5);
        c.ry(0.7, 0).unwrap();
        c.ry(1.1, 1).unwrap();
        c.rz(0.3, 1).unwrap();
        c.ry(2.0, 2).unwrap();
        c.ry(0.4, 3).unwrap();
        c.cswap(0, 1, 3).unwrap();
        c.cswap(0, 2, 4).unwrap();
        c.cx(1, 4).unwrap();
        c.set_outputs(&[0, 1, 4]).unwrap();
        let dense = output_marginals(&simulate(&c).unwrap(), c.roles()).unwrap();
        let fact = factored_marginals(&c).unwrap();
        assert!(dense.max_abs_diff(&fact.probs) < 1e-12);
    }

    #[test]
    fn rotation_after_permutation_stays_coherent() {
        let mut c = Circuit::new(2);
        c.ry(0.7, 0).unwrap();
        c.cx(0, 1).unwrap();
        c.ry(0.7, 0).unwrap();
        c.cx(1, 0).unwrap();
        c.set_outputs(&[0, 1]).unwrap();
        let dense = output_marginals(&simulate(&c).unwrap(), c.roles()).unwrap();
        assert!(dense.max_abs_diff(&factored_marginals(&c).unwrap().probs) < 1e-12);
    }

    #[test]
    fn unused_qubits() {
        let mut c = Circuit::new(3);
        c.ry(std::f64::consts::PI, 2).unwrap();
        c.set_outputs(&[2, 1]).unwrap();
        let d = factored_marginals(&c).unwrap();
        assert!(d.max_abs_diff(&[0.0, 0.0, 1.0, 0.0]) < 1e-15);
    }
}
