use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;

use super::{Circuit, CircuitError, End, Gate, Init, MAX_QUBITS};
use crate::diagram::{Diagram, HLabel, NodeKind, WireBuilder};
use crate::phase::Phase;
use crate::tensor::{evaluate, post_select, Effect, Tensor};

/// The circuit as a diagram on all its qubits, ancillae included as plain
/// wires. Every gate is normalized, so the diagram equals the unitary.
pub fn circuit_to_diagram(c: &Circuit) -> Result<Diagram, CircuitError> {
    c.validate()?;
    let mut w = WireBuilder::new(c.qubits);
    for g in &c.gates {
        match g {
            Gate::H(q) => {
                w.hadamard(*q);
            }
            Gate::X(q) => {
                w.not(*q);
            }
            Gate::Cx(a, b) => w.cx(*a, *b),
            Gate::Cz(a, b) => {
                w.hbox(HLabel::exp(Phase::pi()), &[*a, *b]);
            }
            Gate::Rz(p, q) => {
                w.z(*q, *p);
            }
            Gate::Rx(p, q) => {
                w.x(*q, *p);
            }
            Gate::S(q) => {
                w.z(*q, Phase::pi_frac(1, 2));
            }
            Gate::Sdg(q) => {
                w.z(*q, Phase::pi_frac(-1, 2));
            }
            Gate::T(q) => {
                w.z(*q, Phase::pi_frac(1, 4));
            }
            Gate::Tdg(q) => {
                w.z(*q, Phase::pi_frac(-1, 4));
            }
            Gate::CnZ(p, qs) => {
                w.hbox(HLabel::exp(*p), qs);
            }
            Gate::Toffoli(cs, t) => {
                let all: Vec<usize> = cs.iter().copied().chain([*t]).collect();
                w.hadamard(*t);
                w.hbox(HLabel::exp(Phase::pi()), &all);
                w.hadamard(*t);
            }
        }
    }
    Ok(w.finish())
}

/// The unitary on all qubits, ancillae included.
pub fn unitary(c: &Circuit) -> Result<Tensor, CircuitError> {
    if c.qubits > MAX_QUBITS {
        return Err(CircuitError::TooLarge(c.qubits));
    }
    Ok(evaluate(&circuit_to_diagram(c)?)?)
}

/// Feed a state into input `wire`.
fn prepare(d: &mut Diagram, wire: usize, init: Init) {
    let i = d.inputs()[wire];
    let p = d.boundary_neighbor(i);
    d.remove_node(i);
    let s = d.add_node(match init {
        Init::Zero => NodeKind::X(Phase::zero()),
        Init::Plus => NodeKind::Z(Phase::zero()),
    });
    d.add_edge(s, p);
    d.mul_scalar(C64::new(FRAC_1_SQRT_2, 0.0));
}

/// The linear map on the remaining wires once every ancilla is prepared and
/// every post-selected or measured ancilla is projected. `outcomes` picks
/// the branch for measured ancillae and may override declared
/// post-selections.
pub fn branch(c: &Circuit, outcomes: &[(usize, Effect)]) -> Result<Tensor, CircuitError> {
    if c.qubits > MAX_QUBITS {
        return Err(CircuitError::TooLarge(c.qubits));
    }
    let mut d = circuit_to_diagram(c)?;
    let mut anc = c.ancillae.clone();
    // Highest wire first so earlier indices stay put.
    anc.sort_by_key(|a| std::cmp::Reverse(a.qubit));
    for a in &anc {
        let chosen = outcomes.iter().find(|(q, _)| *q == a.qubit).map(|(_, e)| *e);
        let effect = match (chosen, a.end) {
            (Some(e), _) => Some(e),
            (None, End::PostSelect(e)) => Some(e),
            (None, End::Measure) => return Err(CircuitError::MissingOutcome(a.qubit)),
            (None, End::Keep) => None,
        };
        if let Some(e) = effect {
            d = post_select(&d, a.qubit, e)?;
        }
        prepare(&mut d, a.qubit, a.init);
    }
    Ok(evaluate(&d)?)
}
