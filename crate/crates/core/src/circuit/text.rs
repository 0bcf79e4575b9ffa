//! One gate per line:
//!
//! ```text
//! qubits 3
//! ancilla 2 init=+ end=postselect+
//! h 0
//! cx 0 1
//! rz(pi/4) 1
//! cnz(-pi/2) 0 1
//! ccx 0 1 2
//! ```
//!
//! `#` starts a comment. `mcx c1 … ck t` is a Toffoli with any number of
//! controls.

use std::fmt::Write as _;

use super::{Ancilla, Circuit, CircuitError, End, Gate, Init};
use crate::phase::Phase;
use crate::tensor::Effect;

fn err(line: usize, msg: impl Into<String>) -> CircuitError {
    CircuitError::Parse { line, msg: msg.into() }
}

fn split_angle(word: &str, line: usize) -> Result<(&str, Option<Phase>), CircuitError> {
    let Some(open) = word.find('(') else {
        return Ok((word, None));
    };
    let inner = word[open + 1..].strip_suffix(')').ok_or_else(|| err(line, format!("unclosed '(' in '{word}'")))?;
    let p: Phase = inner.parse().map_err(|_| err(line, format!("bad angle '{inner}'")))?;
    Ok((&word[..open], Some(p)))
}

fn ancilla(fields: &[&str], line: usize) -> Result<Ancilla, CircuitError> {
    let [q, rest @ ..] = fields else {
        return Err(err(line, "ancilla needs a qubit"));
    };
    let qubit = q.parse().map_err(|_| err(line, format!("bad qubit '{q}'")))?;
    let mut a = Ancilla { qubit, init: Init::Zero, end: End::Keep };
    for kv in rest {
        let (k, v) = kv.split_once('=').ok_or_else(|| err(line, format!("expected key=value, got '{kv}'")))?;
        match (k, v) {
            ("init", "0") => a.init = Init::Zero,
            ("init", "+") => a.init = Init::Plus,
            ("end", "postselect+") => a.end = End::PostSelect(Effect::Plus),
            ("end", "postselect-") => a.end = End::PostSelect(Effect::Minus),
            ("end", "postselect0") => a.end = End::PostSelect(Effect::Zero),
            ("end", "postselect1") => a.end = End::PostSelect(Effect::One),
            ("end", "measure") => a.end = End::Measure,
            ("end", "none") => a.end = End::Keep,
            _ => return Err(err(line, format!("unknown ancilla setting '{kv}'"))),
        }
    }
    Ok(a)
}

pub(super) fn parse(text: &str) -> Result<Circuit, CircuitError> {
    let mut qubits = None;
    let mut c = Circuit::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        let (name, angle) = split_angle(fields[0], line)?;
        let args = &fields[1..];
        if name == "qubits" {
            let n = args.first().and_then(|s| s.parse().ok()).ok_or_else(|| err(line, "qubits needs a count"))?;
            if qubits.replace(n).is_some() {
                return Err(err(line, "duplicate qubits header"));
            }
            continue;
        }
        if name == "ancilla" {
            c.ancillae.push(ancilla(args, line)?);
            continue;
        }
        let qs: Vec<usize> = args
            .iter()
            .map(|s| s.parse().map_err(|_| err(line, format!("bad qubit '{s}'"))))
            .collect::<Result<_, _>>()?;
        let arity = |k: usize| {
            if qs.len() == k {
                Ok(())
            } else {
                Err(err(line, format!("'{name}' takes {k} qubits, got {}", qs.len())))
            }
        };
        let need_angle = || angle.ok_or_else(|| err(line, format!("'{name}' needs an angle")));
        if angle.is_some() && !matches!(name, "rz" | "rx" | "cnz") {
            return Err(err(line, format!("'{name}' takes no angle")));
        }
        let g = match name {
            "h" => arity(1).map(|_| Gate::H(qs[0]))?,
            "x" => arity(1).map(|_| Gate::X(qs[0]))?,
            "s" => arity(1).map(|_| Gate::S(qs[0]))?,
            "sdg" => arity(1).map(|_| Gate::Sdg(qs[0]))?,
            "t" => arity(1).map(|_| Gate::T(qs[0]))?,
            "tdg" => arity(1).map(|_| Gate::Tdg(qs[0]))?,
            "z" => arity(1).map(|_| Gate::Rz(Phase::pi(), qs[0]))?,
            "rz" => arity(1).and_then(|_| Ok(Gate::Rz(need_angle()?, qs[0])))?,
            "rx" => arity(1).and_then(|_| Ok(Gate::Rx(need_angle()?, qs[0])))?,
            "cx" => arity(2).map(|_| Gate::Cx(qs[0], qs[1]))?,
            "cz" => arity(2).map(|_| Gate::Cz(qs[0], qs[1]))?,
            "ccz" => arity(3).map(|_| Gate::CnZ(Phase::pi(), qs.clone()))?,
            "ccx" => arity(3).map(|_| Gate::Toffoli(qs[..2].to_vec(), qs[2]))?,
            "mcx" if qs.len() >= 2 => Gate::Toffoli(qs[..qs.len() - 1].to_vec(), qs[qs.len() - 1]),
            "cnz" if !qs.is_empty() => Gate::CnZ(need_angle()?, qs.clone()),
            "mcx" | "cnz" => return Err(err(line, format!("'{name}' needs more qubits"))),
            _ => return Err(err(line, format!("unknown gate '{name}'"))),
        };
        c.gates.push(g);
    }
    c.qubits = qubits.ok_or_else(|| err(1, "missing 'qubits N' header"))?;
    c.validate().map_err(|e| match e {
        CircuitError::QubitOutOfRange { gate, .. } | CircuitError::RepeatedQubit(gate) => {
            err(gate_line(text, gate), e.to_string())
        }
        other => other,
    })?;
    Ok(c)
}

/// Line number of the `k`-th gate line, for error reporting.
fn gate_line(text: &str, k: usize) -> usize {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let b = l.split('#').next().unwrap().trim();
            !b.is_empty() && !b.starts_with("qubits") && !b.starts_with("ancilla")
        })
        .nth(k)
        .map_or(1, |(i, _)| i + 1)
}

fn qs(v: &[usize]) -> String {
    v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" ")
}

pub(super) fn format(c: &Circuit) -> String {
    let mut s = format!("qubits {}\n", c.qubits);
    for a in &c.ancillae {
        let init = match a.init {
            Init::Zero => "0",
            Init::Plus => "+",
        };
        let end = match a.end {
            End::PostSelect(Effect::Plus) => "postselect+",
            End::PostSelect(Effect::Minus) => "postselect-",
            End::PostSelect(Effect::Zero) => "postselect0",
            End::PostSelect(Effect::One) => "postselect1",
            End::Measure => "measure",
            End::Keep => "none",
        };
        writeln!(s, "ancilla {} init={init} end={end}", a.qubit).unwrap();
    }
    for g in &c.gates {
        let line = match g {
            Gate::H(q) => format!("h {q}"),
            Gate::X(q) => format!("x {q}"),
            Gate::S(q) => format!("s {q}"),
            Gate::Sdg(q) => format!("sdg {q}"),
            Gate::T(q) => format!("t {q}"),
            Gate::Tdg(q) => format!("tdg {q}"),
            Gate::Rz(p, q) => format!("rz({p}) {q}"),
            Gate::Rx(p, q) => format!("rx({p}) {q}"),
            Gate::Cx(a, b) => format!("cx {a} {b}"),
            Gate::Cz(a, b) => format!("cz {a} {b}"),
            Gate::CnZ(p, v) => format!("cnz({p}) {}", qs(v)),
            Gate::Toffoli(cs, t) if cs.len() == 2 => format!("ccx {} {t}", qs(cs)),
            Gate::Toffoli(cs, t) => format!("mcx {} {t}", qs(cs)),
        };
        s.push_str(&line);
        s.push('\n');
    }
    s
}
