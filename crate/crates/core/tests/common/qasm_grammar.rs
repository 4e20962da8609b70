//! Minimal OpenQASM 2.0 checker for the subset the exporter writes: header,
//! include, one or more qregs, comments, gate definitions and applications
//! of `qelib1.inc` or user-defined gates.

use std::collections::HashMap;

/// (number of parameters, number of qubit arguments)
fn builtin_gates() -> HashMap<String, (usize, usize)> {
    [
        ("u3", 3, 1),
        ("u2", 2, 1),
        ("u1", 1, 1),
        ("cx", 0, 2),
        ("id", 0, 1),
        ("x", 0, 1),
        ("y", 0, 1),
        ("z", 0, 1),
        ("h", 0, 1),
        ("s", 0, 1),
        ("sdg", 0, 1),
        ("t", 0, 1),
        ("tdg", 0, 1),
        ("rx", 1, 1),
        ("ry", 1, 1),
        ("rz", 1, 1),
        ("cz", 0, 2),
        ("cy", 0, 2),
        ("ch", 0, 2),
        ("ccx", 0, 3),
        ("crz", 1, 2),
        ("cu1", 1, 2),
        ("cu3", 3, 2),
        ("U", 3, 1),
        ("CX", 0, 2),
    ]
    .into_iter()
    .map(|(n, p, q)| (n.to_string(), (p, q)))
    .collect()
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase() || c == 'U' || c == 'C')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `real | nninteger | pi | -expr`, no operators beyond unary minus.
fn is_param(s: &str) -> bool {
    let s = s.trim();
    let s = s.strip_prefix('-').unwrap_or(s);
    if s == "pi" {
        return true;
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], Some(&s[i + 1..])),
        None => (s, None),
    };
    let digits = |t: &str| !t.is_empty() && t.chars().all(|c| c.is_ascii_digit());
    let mantissa_ok = match mantissa.split_once('.') {
        Some((a, b)) => (digits(a) || a.is_empty()) && (digits(b) || b.is_empty()) && !(a.is_empty() && b.is_empty()),
        None => exponent.is_none() && digits(mantissa),
    };
    let exponent_ok = exponent.is_none_or(|e| {
        let e = e.strip_prefix(['+', '-']).unwrap_or(e);
        digits(e)
    });
    mantissa_ok && exponent_ok
}

struct Checker {
    gates: HashMap<String, (usize, usize)>,
    regs: HashMap<String, usize>,
}

impl Checker {
    /// Parse `name(params) args` (without the trailing `;`).
    fn application(&self, stmt: &str, formal: Option<&[&str]>) -> Result<(), String> {
        let stmt = stmt.trim();
        let (head, args) = match stmt.find('(') {
            Some(open) => {
                let close = stmt.find(')').ok_or_else(|| format!("unclosed '(' in {stmt:?}"))?;
                let params: Vec<&str> = stmt[open + 1..close].split(',').collect();
                let name = stmt[..open].trim();
                let &(np, _) = self.gates.get(name).ok_or_else(|| format!("unknown gate {name}"))?;
                if params.len() != np || !params.iter().all(|p| is_param(p)) {
                    return Err(format!("bad parameters in {stmt:?}"));
                }
                (name, &stmt[close + 1..])
            }
            None => {
                let (name, rest) = stmt
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| format!("no arguments in {stmt:?}"))?;
                if self.gates.get(name).is_some_and(|g| g.0 != 0) {
                    return Err(format!("missing parameters in {stmt:?}"));
                }
                (name, rest)
            }
        };
        let &(_, nq) = self.gates.get(head).ok_or_else(|| format!("unknown gate {head}"))?;
        let args: Vec<&str> = args.split(',').map(str::trim).collect();
        if args.len() != nq {
            return Err(format!("{head} takes {nq} qubits: {stmt:?}"));
        }
        let mut seen = Vec::new();
        for a in &args {
            match formal {
                Some(names) => {
                    if !names.contains(a) {
                        return Err(format!("unknown formal argument {a}"));
                    }
                }
                None => {
                    let open = a.find('[').ok_or_else(|| format!("expected indexed qubit, got {a}"))?;
                    let reg = &a[..open];
                    let idx: usize = a[open + 1..]
                        .strip_suffix(']')
                        .and_then(|i| i.parse().ok())
                        .ok_or_else(|| format!("bad index in {a}"))?;
                    let size = self.regs.get(reg).ok_or_else(|| format!("unknown register {reg}"))?;
                    if idx >= *size {
                        return Err(format!("{a} out of range"));
                    }
                }
            }
            if seen.contains(a) {
                return Err(format!("repeated argument {a} in {stmt:?}"));
            }
            seen.push(*a);
        }
        Ok(())
    }

    fn gate_definition(&mut self, stmt: &str) -> Result<(), String> {
        let open = stmt.find('{').ok_or("gate without body")?;
        let body = stmt[open + 1..].strip_suffix('}').ok_or("unterminated gate body")?;
        let header = stmt["gate".len()..open].trim();
        let (name, formals) = header.split_once(char::is_whitespace).ok_or("gate without arguments")?;
        if !is_ident(name) || name.contains('(') {
            return Err(format!("bad gate name {name}"));
        }
        let formals: Vec<&str> = formals.split(',').map(str::trim).collect();
        if !formals.iter().all(|f| is_ident(f)) {
            return Err(format!("bad formal arguments {formals:?}"));
        }
        for inner in body.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            self.application(inner, Some(&formals))?;
        }
        self.gates.insert(name.to_string(), (0, formals.len()));
        Ok(())
    }
}

/// Check `text`; returns the number of gate applications on success.
pub fn check(text: &str) -> Result<usize, String> {
    let mut chk = Checker {
        gates: HashMap::new(),
        regs: HashMap::new(),
    };
    let mut statements = Vec::new();
    for line in text.lines() {
        let line = line.split("//").next().unwrap().trim();
        if !line.is_empty() {
            statements.push(line.to_string());
        }
    }
    let mut it = statements.iter();
    if it.next().map(String::as_str) != Some("OPENQASM 2.0;") {
        return Err("missing OPENQASM 2.0 header".into());
    }
    let mut applications = 0;
    for stmt in it {
        if stmt == "include \"qelib1.inc\";" {
            chk.gates.extend(builtin_gates());
        } else if let Some(rest) = stmt.strip_prefix("qreg ") {
            let decl = rest.strip_suffix(';').ok_or("qreg without ';'")?;
            let open = decl.find('[').ok_or("qreg without size")?;
            let size: usize = decl[open + 1..]
                .strip_suffix(']')
                .and_then(|s| s.parse().ok())
                .ok_or("bad qreg size")?;
            if size == 0 || !is_ident(&decl[..open]) {
                return Err(format!("bad qreg {decl}"));
            }
            chk.regs.insert(decl[..open].to_string(), size);
        } else if stmt.starts_with("gate ") {
            chk.gate_definition(stmt)?;
        } else {
            let s = stmt.strip_suffix(';').ok_or_else(|| format!("missing ';' in {stmt:?}"))?;
            chk.application(s, None)?;
            applications += 1;
        }
    }
    if chk.regs.is_empty() {
        return Err("no qreg declared".into());
    }
    Ok(applications)
}
