use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use super::{Circuit, Gate};

/// Rewrite every gate into `{RY, RZ, CX}`. Zero-angle rotations are dropped.
///
/// Costs: a multiplexer with `c ≥ 1` controls becomes `2^c` rotations and
/// `2^c` CX; a CSWAP becomes 8 CX plus single-qubit rotations. The CSWAP
/// expansion matches its unitary up to a global phase.
pub fn lower(c: &Circuit) -> Circuit {
    let gates = c.gates().iter().flat_map(lower_gate).collect();
    Circuit::from_parts(c.width(), c.roles().to_vec(), gates)
}

pub fn lower_gate(g: &Gate) -> Vec<Gate> {
    if g.is_zero_rotation() {
        return Vec::new();
    }
    match g {
        Gate::Ry { .. } | Gate::Rz { .. } | Gate::Cx { .. } => vec![g.clone()],
        Gate::MuxRy {
            angles,
            controls,
            target,
        } => gray_code_mux(angles, controls, *target, |theta, target| Gate::Ry {
            theta,
            target,
        }),
        Gate::MuxRz {
            angles,
            controls,
            target,
        } => gray_code_mux(angles, controls, *target, |phi, target| Gate::Rz {
            phi,
            target,
        }),
        &Gate::Cswap { control, a, b } => {
            let mut out = vec![Gate::Cx {
                control: b,
                target: a,
            }];
            out.extend(toffoli(control, a, b));
            out.push(Gate::Cx {
                control: b,
                target: a,
            });
            out
        }
    }
}

/// Multiplexed rotation as `R(θ_0) CX R(θ_1) CX … R(θ_{L−1}) CX`, where the
/// i-th CX is controlled by the bit that flips between Gray codes `g_i` and
/// `g_{i+1 mod L}`. Rotation `i` picks up sign `(−1)^{popcount(j & g_i)}`
/// under control value `j`, so the angles are the Walsh transform of the
/// multiplexer's angle list.
fn gray_code_mux(
    angles: &[f64],
    controls: &[usize],
    target: usize,
    rotation: impl Fn(f64, usize) -> Gate,
) -> Vec<Gate> {
    let k = controls.len();
    if k == 0 {
        return vec![rotation(angles[0], target)];
    }
    let len = 1usize << k;
    let mut out = Vec::with_capacity(2 * len);
    for i in 0..len {
        let gray = i ^ (i >> 1);
        let theta = angles
            .iter()
            .enumerate()
            .map(|(j, a)| if (j & gray).count_ones() % 2 == 0 { *a } else { -*a })
            .sum::<f64>()
            / len as f64;
        out.push(rotation(theta, target));
        let bit = if i == len - 1 {
            k - 1
        } else {
            (i + 1).trailing_zeros() as usize
        };
        out.push(Gate::Cx {
            control: controls[k - 1 - bit],
            target,
        });
    }
    out
}

fn hadamard(q: usize) -> [Gate; 2] {
    // H = i·RY(π/2)·RZ(π)
    [
        Gate::Rz { phi: PI, target: q },
        Gate::Ry {
            theta: FRAC_PI_2,
            target: q,
        },
    ]
}

fn t(q: usize) -> Gate {
    Gate::Rz {
        phi: FRAC_PI_4,
        target: q,
    }
}

fn tdg(q: usize) -> Gate {
    Gate::Rz {
        phi: -FRAC_PI_4,
        target: q,
    }
}

/// Six-CX Toffoli with `T`/`H` expressed as RZ/RY (exact up to global phase).
pub fn toffoli(c1: usize, c2: usize, target: usize) -> Vec<Gate> {
    let cx = |control, target| Gate::Cx { control, target };
    let mut g = Vec::with_capacity(19);
    g.extend(hadamard(target));
    g.push(cx(c2, target));
    g.push(tdg(target));
    g.push(cx(c1, target));
    g.push(t(target));
    g.push(cx(c2, target));
    g.push(tdg(target));
    g.push(cx(c1, target));
    g.push(t(c2));
    g.push(t(target));
    g.extend(hadamard(target));
    g.push(cx(c1, c2));
    g.push(t(c1));
    g.push(tdg(c2));
    g.push(cx(c1, c2));
    g
}
