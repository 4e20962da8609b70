use std::fmt::Write as _;

use super::{lower_gate, Circuit, Gate};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default)]
pub struct QasmOptions {
    /// Keep CSWAP as a defined gate and expand multiplexers inline instead of
    /// rejecting an unlowered circuit.
    pub keep_high_level: bool,
}

pub fn export_qasm(c: &Circuit, opts: &QasmOptions) -> Result<String> {
    if !opts.keep_high_level {
        if let Some(g) = c.gates().iter().find(|g| !g.is_native()) {
            return Err(Error::UnloweredGate(g.name().to_string()));
        }
    }
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    let has_cswap = c.gates().iter().any(|g| matches!(g, Gate::Cswap { .. }));
    if has_cswap {
        out.push_str("gate cswap c,a,b { cx b,a; ccx c,a,b; cx b,a; }\n");
    }
    let _ = writeln!(out, "qreg q[{}];", c.width());
    let mapping: Vec<String> = c
        .output_qubits()
        .iter()
        .enumerate()
        .map(|(bit, q)| format!("{bit}->q[{q}]"))
        .collect();
    let _ = writeln!(out, "// outputs (bit 0 most significant): {}", mapping.join(" "));
    for g in c.gates() {
        match g {
            Gate::Cswap { control, a, b } => {
                let _ = writeln!(out, "cswap q[{control}],q[{a}],q[{b}];");
            }
            Gate::MuxRy { .. } | Gate::MuxRz { .. } => {
                for native in lower_gate(g) {
                    write_native(&mut out, &native);
                }
            }
            _ => write_native(&mut out, g),
        }
    }
    Ok(out)
}

fn write_native(out: &mut String, g: &Gate) {
    let _ = match g {
        Gate::Ry { theta, target } => writeln!(out, "ry({}) q[{target}];", format_angle(*theta)),
        Gate::Rz { phi, target } => writeln!(out, "rz({}) q[{target}];", format_angle(*phi)),
        Gate::Cx { control, target } => writeln!(out, "cx q[{control}],q[{target}];"),
        _ => unreachable!("non-native gate {}", g.name()),
    };
}

/// `%.17g`-style formatting that always contains a decimal point, so the
/// literal is a QASM `real`.
pub fn format_angle(x: f64) -> String {
    if x == 0.0 {
        return "0.0".to_string();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..17).contains(&exp) {
        let fixed = format!("{:.*}", (16 - exp) as usize, x);
        with_point(strip_zeros(&fixed))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", with_point(strip_zeros(mantissa)), exp.abs())
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn with_point(s: &str) -> String {
    if s.contains('.') {
        s.to_string()
    } else {
        format!("{s}.0")
    }
}
