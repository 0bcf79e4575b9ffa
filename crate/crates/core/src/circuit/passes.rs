//! T-count reduction passes and ancilla constructions for Toffoli gates.

use std::collections::BTreeSet;

use num_rational::Rational64;

use super::{extract::PhasePolynomial, Ancilla, Circuit, CircuitError, End, Gate, Init};
use crate::bits::BitString;
use crate::phase::Phase;
use crate::tensor::Effect;

/// Result of [`toffoli_cs_cancel`].
#[derive(Clone, Debug, PartialEq)]
pub struct CsCancel {
    pub circuit: Circuit,
    /// Number of windows rewritten; zero means the circuit is unchanged.
    pub matches: usize,
}

fn is_cs_dagger(g: &Gate, a: usize, b: usize) -> bool {
    match g {
        Gate::CnZ(p, qs) => {
            qs.len() == 2 && *p == Phase::pi_frac(-1, 2) && qs.iter().copied().collect::<BTreeSet<_>>() == BTreeSet::from([a, b])
        }
        _ => false,
    }
}

/// The Toffoli on `(a, b → t)` followed by CS† on `(a, b)`, as H on the
/// target around four π/4 gadgets.
fn cs_cancel_window(a: usize, b: usize, t: usize, qubits: usize) -> Vec<Gate> {
    let mut poly = PhasePolynomial::new(3);
    let q = Phase::pi_frac(1, 4);
    poly.add(BitString::from_positions(&[2], 3), q);
    poly.add(BitString::from_positions(&[0, 2], 3), -q);
    poly.add(BitString::from_positions(&[1, 2], 3), -q);
    poly.add(BitString::from_positions(&[0, 1, 2], 3), q);
    let wires = [a, b, t];
    let mut out = vec![Gate::H(t)];
    out.extend(poly.to_circuit().gates.iter().map(|g| g.relabel(|i| wires[i])));
    out.push(Gate::H(t));
    debug_assert!(out.iter().all(|g| g.qubits().iter().all(|&w| w < qubits)));
    out
}

/// Replace every adjacent Toffoli / controlled-S† pair sharing the control
/// pair (in either order) by a four-T realization.
pub fn toffoli_cs_cancel(c: &Circuit) -> CsCancel {
    let mut gates = Vec::with_capacity(c.gates.len());
    let mut matches = 0;
    let mut i = 0;
    while i < c.gates.len() {
        if let Some(next) = c.gates.get(i + 1) {
            let pair = match (&c.gates[i], next) {
                (Gate::Toffoli(cs, t), other) | (other, Gate::Toffoli(cs, t)) if cs.len() == 2 => {
                    is_cs_dagger(other, cs[0], cs[1]).then_some((cs[0], cs[1], *t))
                }
                _ => None,
            };
            if let Some((a, b, t)) = pair {
                gates.extend(cs_cancel_window(a, b, t, c.qubits));
                matches += 1;
                i += 2;
                continue;
            }
        }
        gates.push(c.gates[i].clone());
        i += 1;
    }
    CsCancel { circuit: Circuit { gates, ..c.clone() }, matches }
}

fn site_err(site: usize, msg: impl Into<String>) -> CircuitError {
    CircuitError::Site(site, msg.into())
}

/// `a` is a fresh |+⟩ at gate `j`: a |+⟩ ancilla untouched before `j`, or a
/// |0⟩ ancilla whose only earlier gate is a Hadamard.
fn fresh_plus(c: &Circuit, a: usize, j: usize) -> bool {
    let Some(anc) = c.ancilla(a) else { return false };
    let before: Vec<&Gate> = c.gates[..j].iter().filter(|g| g.qubits().contains(&a)).collect();
    match anc.init {
        Init::Plus => before.is_empty(),
        Init::Zero => matches!(before[..], [Gate::H(_)]),
    }
}

/// An X-rotation on a |+⟩ ancilla right after an H-box (multi-controlled Z
/// by π) that includes it becomes a controlled phase on the H-box's other
/// wires.
pub fn commute_x_through_hbox(c: &Circuit, site: usize) -> Result<Circuit, CircuitError> {
    let Some(Gate::Rx(alpha, a)) = c.gates.get(site) else {
        return Err(site_err(site, "not an X rotation"));
    };
    let a = *a;
    if alpha.is_zero() {
        return Ok(c.clone());
    }
    let j = (0..site)
        .rev()
        .find(|&j| c.gates[j].qubits().contains(&a))
        .ok_or_else(|| site_err(site, "no H-box before the rotation"))?;
    let others: Vec<usize> = match &c.gates[j] {
        Gate::CnZ(p, qs) if p.is_pi() => qs.iter().copied().filter(|&q| q != a).collect(),
        Gate::Cz(p, q) => vec![if *p == a { *q } else { *p }],
        _ => return Err(site_err(site, "previous gate on the qubit is not a multi-controlled Z")),
    };
    if !fresh_plus(c, a, j) {
        return Err(site_err(site, format!("qubit {a} is not a fresh |+> ancilla")));
    }
    let mut out = c.clone();
    if others.is_empty() {
        out.gates.remove(site);
    } else {
        out.gates[site] = Gate::CnZ(*alpha, others);
    }
    Ok(out)
}

fn check_controls(name: &'static str, n: usize) -> Result<(), CircuitError> {
    if n < 2 {
        Err(CircuitError::TooFewControls(name, n))
    } else {
        Ok(())
    }
}

/// Controls `0..n`, target `n`, ancilla `n+1`: the gadgets of the
/// multi-controlled Z on controls plus ancilla that involve the ancilla,
/// then H and S on the ancilla. Leaves `|AND(x)⟩` in the ancilla.
fn and_into_ancilla(n: usize) -> Circuit {
    let a = n + 1;
    let mut c = Circuit::new(n + 2);
    c.ancillae.push(Ancilla { qubit: a, init: Init::Plus, end: End::PostSelect(Effect::Plus) });
    let mut poly = PhasePolynomial::new(n + 2);
    let controls = BitString::ones(n);
    for sub in std::iter::once(BitString::zeros(n)).chain(controls.nonzero_subsets()) {
        let sign = if sub.weight() % 2 == 0 { 1 } else { -1 };
        let mut wires = sub.positions();
        wires.push(a);
        poly.add(BitString::from_positions(&wires, n + 2), Phase::from_ratio(Rational64::new(sign, 1 << n)));
    }
    c.gates = poly.to_circuit().gates;
    c.push(Gate::H(a)).push(Gate::S(a));
    c
}

/// The multi-controlled Z on the controls that corrects a ⟨−| outcome.
fn control_phase(n: usize) -> Gate {
    if n == 2 {
        Gate::Cz(0, 1)
    } else {
        Gate::CnZ(Phase::pi(), (0..n).collect())
    }
}

/// An `n`-control Toffoli using one |+⟩ ancilla post-selected on ⟨+|.
/// Returns the circuit and the correction, on the data qubits, for a ⟨−|
/// outcome instead.
pub fn ancilla_toffoli(n: usize) -> Result<(Circuit, Circuit), CircuitError> {
    check_controls("ancilla_toffoli", n)?;
    let mut c = and_into_ancilla(n);
    c.push(Gate::Cx(n + 1, n));
    let mut fix = Circuit::new(n + 1);
    fix.push(control_phase(n));
    Ok((c, fix))
}

/// A Toffoli compute–uncompute pair around a CX from the target into the
/// ancilla, with the uncompute replaced by measuring the ancilla. Returns
/// the circuit (ancilla measured) and the correction for the ⟨−| outcome.
pub fn gidney_pair(n: usize) -> Result<(Circuit, Circuit), CircuitError> {
    check_controls("gidney_pair", n)?;
    let mut c = and_into_ancilla(n);
    c.push(Gate::Cx(n, n + 1));
    c.ancillae[0].end = End::Measure;
    let mut fix = Circuit::new(n + 1);
    fix.push(control_phase(n)).push(Gate::Rz(Phase::pi(), n));
    Ok((c, fix))
}

/// The unoptimized pair [`gidney_pair`] stands for: Toffoli into a |0⟩
/// ancilla, CX from the target, Toffoli again, ancilla post-selected on ⟨+|.
pub fn gidney_reference(n: usize) -> Circuit {
    let a = n + 1;
    let controls: Vec<usize> = (0..n).collect();
    let mut c = Circuit::new(n + 2);
    c.ancillae.push(Ancilla { qubit: a, init: Init::Zero, end: End::PostSelect(Effect::Plus) });
    c.push(Gate::Toffoli(controls.clone(), a)).push(Gate::Cx(n, a)).push(Gate::Toffoli(controls, a));
    c
}
