//! Diagonal diagrams back to circuits: phase polynomials and CX ladders.

use std::collections::{BTreeMap, BTreeSet};

use super::{Circuit, CircuitError, Gate};
use crate::bits::BitString;
use crate::diagram::{Diagram, NodeId, NodeKind};
use crate::fourier::hbox_terms;
use crate::phase::Phase;
use crate::rewrite::{apply_all, gadget_parts, Policy, Zs1};

/// `x ↦ Σ_c θ_c (⊕_{i∈c} x_i)`, keyed by the parity set `c`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PhasePolynomial {
    pub n: usize,
    pub terms: BTreeMap<BitString, Phase>,
}

impl PhasePolynomial {
    pub fn new(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    /// Add `θ` to the coefficient of parity `c`, dropping it if it vanishes.
    pub fn add(&mut self, c: BitString, theta: Phase) {
        let sum = self.terms.get(&c).map_or(theta, |&p| p + theta);
        if sum.is_zero() {
            self.terms.remove(&c);
        } else {
            self.terms.insert(c, sum);
        }
    }

    /// Add `θ·AND_{i∈d} x_i` by expanding it into parities.
    pub fn add_and(&mut self, d: &BitString, theta: Phase) {
        let pos = d.positions();
        for (c, t) in hbox_terms(theta, pos.len()) {
            let wires: Vec<usize> = c.positions().into_iter().map(|i| pos[i]).collect();
            self.add(BitString::from_positions(&wires, self.n), t);
        }
    }

    /// Gates over {CX, Rz}: for each term a CX ladder onto its lowest wire,
    /// the rotation, and the ladder undone. Adjacent identical CXs cancel.
    pub fn to_circuit(&self) -> Circuit {
        let mut gates = Vec::new();
        for (c, &theta) in &self.terms {
            let pos = c.positions();
            let (low, rest) = pos.split_first().expect("nonzero parity");
            let ladder: Vec<Gate> = rest.iter().map(|&q| Gate::Cx(q, *low)).collect();
            gates.extend(ladder.iter().cloned());
            gates.push(Gate::Rz(theta, *low));
            gates.extend(ladder.into_iter().rev());
        }
        Circuit { qubits: self.n, gates: cancel_cx_pairs(gates), ancillae: Vec::new() }
    }
}

fn cancel_cx_pairs(gates: Vec<Gate>) -> Vec<Gate> {
    let mut out: Vec<Gate> = Vec::with_capacity(gates.len());
    for g in gates {
        if matches!(g, Gate::Cx(..)) && out.last() == Some(&g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    out
}

fn not_extractable(msg: impl Into<String>) -> CircuitError {
    CircuitError::NotExtractable(msg.into())
}

/// Read a diagonal diagram made of wire spiders, phase gadgets and
/// exponentiated H-boxes as a circuit over {CX, Rz}, equal to it up to a
/// scalar.
pub fn extract_clifford_t(d: &Diagram) -> Result<Circuit, CircuitError> {
    let n = d.num_inputs();
    if d.num_outputs() != n {
        return Err(not_extractable(format!("{n} inputs but {} outputs", d.num_outputs())));
    }
    let fused = apply_all(d, &Zs1, &Policy::default()).map_err(|e| not_extractable(e.to_string()))?.diagram;
    // Spider carrying each wire, mapped to the wire index.
    let mut wire_of: BTreeMap<NodeId, usize> = BTreeMap::new();
    let mut poly = PhasePolynomial::new(n);
    for q in 0..n {
        let (i, o) = (fused.inputs()[q], fused.outputs()[q]);
        let (pi, po) = (fused.boundary_neighbor(i), fused.boundary_neighbor(o));
        if pi == o {
            continue;
        }
        if pi != po || !fused.kind(pi).is_some_and(NodeKind::is_z) {
            return Err(not_extractable(format!("wire {q} does not run through a single white spider")));
        }
        if wire_of.insert(pi, q).is_some() {
            return Err(not_extractable(format!("wire {q} shares its spider with another wire")));
        }
        let Some(NodeKind::Z(p)) = fused.kind(pi) else { unreachable!() };
        poly.add(BitString::from_positions(&[q], n), *p);
    }
    let attached = |node: NodeId| -> Result<BitString, CircuitError> {
        let mut wires = Vec::new();
        for (m, k) in fused.neighbors(node) {
            match wire_of.get(&m) {
                Some(&q) if k == 1 => wires.push(q),
                _ => return Err(not_extractable(format!("node {node} is not attached to wires by single edges"))),
            }
        }
        Ok(BitString::from_positions(&wires, n))
    };
    let mut seen: BTreeSet<NodeId> = wire_of.keys().copied().collect();
    seen.extend(fused.inputs().iter().chain(fused.outputs()).copied());
    for (id, kind) in fused.nodes() {
        if seen.contains(&id) {
            continue;
        }
        match kind {
            NodeKind::X(_) => {
                let (leaf, targets) =
                    gadget_parts(&fused, id).ok_or_else(|| not_extractable(format!("grey node {id} is not a gadget hub")))?;
                if targets.iter().any(|t| !wire_of.contains_key(t)) {
                    return Err(not_extractable(format!("gadget {id} touches a non-wire spider")));
                }
                let Some(NodeKind::Z(p)) = fused.kind(leaf) else { unreachable!() };
                let wires: Vec<usize> = targets.iter().map(|t| wire_of[t]).collect();
                poly.add(BitString::from_positions(&wires, n), *p);
                seen.insert(leaf);
            }
            NodeKind::H(label) => {
                let theta = match label.exponent() {
                    Some(e) => e,
                    None if (label.value().norm() - 1.0).abs() < 1e-12 => Phase::snap(label.value().arg(), 64, 1e-12),
                    None => return Err(not_extractable(format!("H-box {id} is not a phase"))),
                };
                let d = attached(id)?;
                if d.is_zero() {
                    return Err(not_extractable(format!("H-box {id} has no legs")));
                }
                poly.add_and(&d, theta);
            }
            // Leaves are claimed by their hubs.
            NodeKind::Z(_) => continue,
            _ => return Err(not_extractable(format!("unexpected node {id}"))),
        }
        seen.insert(id);
    }
    if let Some((id, _)) = fused.nodes().find(|(id, _)| !seen.contains(id)) {
        return Err(not_extractable(format!("unexpected node {id}")));
    }
    Ok(poly.to_circuit())
}
