//! OpenQASM 2.0 export of compiled circuits and a small reader for the
//! same dialect.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write;

use super::{Circuit, Gate, GateKind, Layout, Op, RegisterMap};
use crate::error::{Error, Result};
use crate::statevec::{cis, Mat2, C64};

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn operand(map: &RegisterMap, wire: usize) -> String {
    let (name, i) = map.locate(wire).expect("wire within register map");
    format!("{name}[{i}]")
}

/// Emit OpenQASM 2.0. Accepts X and the compiled basis {Rx, Ry, Rz, P, CNOT};
/// Rz is written as `p` and its phase difference goes into the recorded
/// global phase.
pub fn to_qasm(circuit: &Circuit) -> Result<String> {
    let map = &circuit.register_map;
    let mut phase = circuit.global_phase;
    let mut body = String::new();
    for g in &circuit.gates {
        let kind = g.kind();
        let q = |w: usize| operand(map, w);
        match (kind, g.op) {
            (GateKind::X, _) => writeln!(body, "x {};", q(g.targets[0])),
            (GateKind::Cx, _) => writeln!(body, "cx {},{};", q(g.controls[0]), q(g.targets[0])),
            (GateKind::Rx, Op::Rx(t)) => writeln!(
                body,
                "u3({},{},{}) {};",
                num(t),
                num(-FRAC_PI_2),
                num(FRAC_PI_2),
                q(g.targets[0])
            ),
            (GateKind::Ry, Op::Ry(t)) => {
                writeln!(body, "u3({},{},{}) {};", num(t), num(0.0), num(0.0), q(g.targets[0]))
            }
            (GateKind::Rz, Op::Rz(l)) => {
                phase -= l / 2.0;
                writeln!(body, "p({}) {};", num(l), q(g.targets[0]))
            }
            (GateKind::P, Op::P(l)) => writeln!(body, "p({}) {};", num(l), q(g.targets[0])),
            _ => return Err(Error::NotInBasis(kind.as_str().to_string())),
        }
        .expect("writing to a String");
    }
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    writeln!(out, "// global_phase: {}", num(phase)).unwrap();
    for r in map.registers() {
        if r.len > 0 {
            writeln!(out, "qreg {}[{}];", r.name, r.len).unwrap();
        }
    }
    out.push_str(&body);
    Ok(out)
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::QasmParse { line, msg: msg.into() }
}

fn parse_angle(s: &str, line: usize) -> Result<f64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return Ok(v);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, s),
    };
    let v = match body {
        "pi" => std::f64::consts::PI,
        "pi/2" => FRAC_PI_2,
        "pi/4" => std::f64::consts::FRAC_PI_4,
        _ => return Err(parse_err(line, format!("cannot read angle `{s}`"))),
    };
    Ok(if neg { -v } else { v })
}

/// Matrix of qelib1's `u3(θ, φ, λ)`.
pub fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    Mat2::new(
        C64::new(c, 0.0),
        -cis(lambda) * s,
        cis(phi) * s,
        cis(phi + lambda) * c,
    )
}

/// Read back the dialect written by [`to_qasm`].
pub fn from_qasm(text: &str) -> Result<Circuit> {
    let mut regs: Vec<(String, usize)> = Vec::new();
    let mut phase = 0.0;
    let mut stmts: Vec<(usize, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix("// global_phase:") {
            phase = parse_angle(rest, ln)?;
            continue;
        }
        let line = line.split("//").next().unwrap_or("").trim();
        if line.is_empty() || line.starts_with("OPENQASM") || line.starts_with("include") {
            continue;
        }
        let line = line.strip_suffix(';').ok_or_else(|| parse_err(ln, "missing `;`"))?;
        if let Some(decl) = line.strip_prefix("qreg") {
            let (name, size) = parse_ref(decl.trim(), ln)?;
            regs.push((name, size));
        } else {
            stmts.push((ln, line.to_string()));
        }
    }
    let size_of = |name: &str| regs.iter().find(|(n, _)| n == name).map(|(_, s)| *s);
    let n = size_of("position").unwrap_or(0);
    let layout = if size_of("ancilla_coin").is_some() || size_of("ancilla_position").is_some() {
        Layout::LinearAncilla
    } else {
        Layout::Walk
    };
    let map = RegisterMap { n, layout };
    for r in map.registers() {
        if r.len > 0 && size_of(r.name) != Some(r.len) {
            return Err(parse_err(0, format!("register `{}` must have size {}", r.name, r.len)));
        }
    }
    let wire = |operand: &str, ln: usize| -> Result<usize> {
        let (name, idx) = parse_ref(operand.trim(), ln)?;
        let reg = map
            .registers()
            .into_iter()
            .find(|r| r.name == name)
            .ok_or_else(|| parse_err(ln, format!("unknown register `{name}`")))?;
        if idx >= reg.len {
            return Err(parse_err(ln, format!("index {idx} out of range for `{name}`")));
        }
        Ok(reg.start + idx)
    };
    let mut c = Circuit::new(map, "qasm");
    c.global_phase = phase;
    for (ln, s) in stmts {
        let (head, args) = match s.find(')') {
            Some(p) if s.contains('(') => (s[..=p].to_string(), s[p + 1..].trim().to_string()),
            _ => {
                let mut it = s.splitn(2, char::is_whitespace);
                (it.next().unwrap_or("").to_string(), it.next().unwrap_or("").trim().to_string())
            }
        };
        let (name, params) = match head.find('(') {
            Some(p) => {
                let inner = &head[p + 1..head.len() - 1];
                let ps = inner.split(',').map(|a| parse_angle(a, ln)).collect::<Result<Vec<_>>>()?;
                (head[..p].trim().to_string(), ps)
            }
            None => (head.clone(), vec![]),
        };
        let ops: Vec<usize> = args.split(',').map(|a| wire(a, ln)).collect::<Result<_>>()?;
        let gate = match (name.as_str(), params.as_slice(), ops.as_slice()) {
            ("x", [], [t]) => Gate::x(*t),
            ("cx", [], [a, b]) => Gate::cnot(*a, *b),
            ("p" | "u1", [l], [t]) => Gate::single(Op::P(*l), *t),
            ("u3" | "u", [th, ph, la], [t]) => {
                let op = if *ph == -FRAC_PI_2 && *la == FRAC_PI_2 {
                    Op::Rx(*th)
                } else if *ph == 0.0 && *la == 0.0 {
                    Op::Ry(*th)
                } else {
                    Op::U2(u3_matrix(*th, *ph, *la))
                };
                Gate::single(op, *t)
            }
            _ => return Err(parse_err(ln, format!("unsupported statement `{s}`"))),
        };
        c.push(gate).map_err(|e| parse_err(ln, e.to_string()))?;
    }
    Ok(c)
}

fn parse_ref(s: &str, ln: usize) -> Result<(String, usize)> {
    let open = s.find('[').ok_or_else(|| parse_err(ln, format!("expected `name[index]`, got `{s}`")))?;
    let close = s.rfind(']').ok_or_else(|| parse_err(ln, "missing `]`"))?;
    let idx = s[open + 1..close]
        .trim()
        .parse()
        .map_err(|_| parse_err(ln, format!("bad index in `{s}`")))?;
    Ok((s[..open].trim().to_string(), idx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::circuit_unitary;

    #[test]
    fn emits_x_and_cx_lines() {
        let mut c = Circuit::new(RegisterMap::walk(2), "t");
        c.add(Gate::x(0));
        c.add(Gate::cnot(2, 0));
        let text = to_qasm(&c).unwrap();
        assert!(text.contains("x coin[0];"));
        assert!(text.contains("cx position[1],coin[0];"));
        assert!(text.contains("qreg position[2];"));
    }

    #[test]
    fn roundtrip_preserves_unitary() {
        let mut c = Circuit::new(RegisterMap::walk(2), "t");
        c.add(Gate::single(Op::Rx(0.3), 1));
        c.add(Gate::single(Op::Ry(-1.2), 0));
        c.add(Gate::single(Op::Rz(2.2), 2));
        c.add(Gate::single(Op::P(0.7), 0));
        c.add(Gate::cnot(1, 2));
        c.global_phase = 0.1;
        let back = from_qasm(&to_qasm(&c).unwrap()).unwrap();
        let d = circuit_unitary(&c).unwrap().max_abs_diff(&circuit_unitary(&back).unwrap()).unwrap();
        assert!(d < 1e-12, "{d}");
    }

    #[test]
    fn rejects_uncompiled() {
        let mut c = Circuit::new(RegisterMap::walk(2), "t");
        c.add(Gate::mcx(vec![1, 2], 0));
        assert_eq!(to_qasm(&c).unwrap_err().code(), "not-in-basis");
    }

    #[test]
    fn u3_matches_rotations() {
        assert!(u3_matrix(0.4, -FRAC_PI_2, FRAC_PI_2).max_abs_diff(&Mat2::rx(0.4)) < 1e-15);
        assert!(u3_matrix(0.4, 0.0, 0.0).max_abs_diff(&Mat2::ry(0.4)) < 1e-15);
    }
}
