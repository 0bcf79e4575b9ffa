//! Gate-list circuits, their diagrams, T-counting and the T-count reduction
//! passes for Toffoli-style gates.

mod extract;
mod passes;
mod semantics;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::fourier::hbox_terms;
use crate::phase::Phase;
use crate::tensor::Effect;

pub use extract::{extract_clifford_t, PhasePolynomial};
pub use passes::{
    ancilla_toffoli, commute_x_through_hbox, gidney_pair, gidney_reference, toffoli_cs_cancel, CsCancel,
};
pub use semantics::{branch, circuit_to_diagram, unitary};

/// Largest circuit the oracle-backed commands accept.
pub const MAX_QUBITS: usize = 14;

#[derive(Debug, Error, PartialEq)]
pub enum CircuitError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("gate {gate} uses qubit {qubit} but the circuit has {qubits}")]
    QubitOutOfRange { gate: usize, qubit: usize, qubits: usize },
    #[error("gate {0} repeats a qubit")]
    RepeatedQubit(usize),
    #[error("qubit {0} is declared as an ancilla twice")]
    DuplicateAncilla(usize),
    #[error("ancilla {0} is measured; choose a branch outcome for it")]
    MissingOutcome(usize),
    #[error("not extractable: {0}")]
    NotExtractable(String),
    #[error("site {0}: {1}")]
    Site(usize, String),
    #[error("{0} needs at least 2 controls, got {1}")]
    TooFewControls(&'static str, usize),
    #[error("circuit has {0} qubits; the limit is {MAX_QUBITS}")]
    TooLarge(usize),
    #[error(transparent)]
    Tensor(#[from] crate::tensor::TensorError),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Cx(usize, usize),
    Cz(usize, usize),
    Rz(Phase, usize),
    Rx(Phase, usize),
    /// The diagonal gate with `e^{iθ}` when every listed qubit is 1.
    CnZ(Phase, Vec<usize>),
    Toffoli(Vec<usize>, usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::S(q) | Gate::Sdg(q) | Gate::T(q) | Gate::Tdg(q) => vec![*q],
            Gate::Rz(_, q) | Gate::Rx(_, q) => vec![*q],
            Gate::Cx(a, b) | Gate::Cz(a, b) => vec![*a, *b],
            Gate::CnZ(_, qs) => qs.clone(),
            Gate::Toffoli(cs, t) => cs.iter().copied().chain([*t]).collect(),
        }
    }

    /// The same gate with every qubit `q` replaced by `f(q)`.
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> Gate {
        match self {
            Gate::H(q) => Gate::H(f(*q)),
            Gate::X(q) => Gate::X(f(*q)),
            Gate::S(q) => Gate::S(f(*q)),
            Gate::Sdg(q) => Gate::Sdg(f(*q)),
            Gate::T(q) => Gate::T(f(*q)),
            Gate::Tdg(q) => Gate::Tdg(f(*q)),
            Gate::Rz(p, q) => Gate::Rz(*p, f(*q)),
            Gate::Rx(p, q) => Gate::Rx(*p, f(*q)),
            Gate::Cx(a, b) => Gate::Cx(f(*a), f(*b)),
            Gate::Cz(a, b) => Gate::Cz(f(*a), f(*b)),
            Gate::CnZ(p, qs) => Gate::CnZ(*p, qs.iter().map(|&q| f(q)).collect()),
            Gate::Toffoli(cs, t) => Gate::Toffoli(cs.iter().map(|&q| f(q)).collect(), f(*t)),
        }
    }

    /// The single-qubit Z rotations this gate costs once every
    /// multi-qubit diagonal is expanded into phase gadgets.
    pub fn rotations(&self) -> Vec<Phase> {
        match self {
            Gate::H(_) | Gate::X(_) | Gate::Cx(..) => vec![],
            Gate::Cz(..) => vec![Phase::pi_frac(1, 2), Phase::pi_frac(1, 2), Phase::pi_frac(-1, 2)],
            Gate::Rz(p, _) | Gate::Rx(p, _) => vec![*p],
            Gate::S(_) => vec![Phase::pi_frac(1, 2)],
            Gate::Sdg(_) => vec![Phase::pi_frac(-1, 2)],
            Gate::T(_) => vec![Phase::pi_frac(1, 4)],
            Gate::Tdg(_) => vec![Phase::pi_frac(-1, 4)],
            Gate::CnZ(p, qs) => hbox_terms(*p, qs.len()).into_iter().map(|(_, t)| t).collect(),
            Gate::Toffoli(cs, _) => hbox_terms(Phase::pi(), cs.len() + 1).into_iter().map(|(_, t)| t).collect(),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Init {
    Zero,
    Plus,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum End {
    PostSelect(Effect),
    /// Measured; each outcome is a separate branch.
    Measure,
    /// Left as an output wire.
    Keep,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Ancilla {
    pub qubit: usize,
    pub init: Init,
    pub end: End,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Circuit {
    pub qubits: usize,
    pub gates: Vec<Gate>,
    pub ancillae: Vec<Ancilla>,
}

impl Circuit {
    pub fn new(qubits: usize) -> Self {
        Self { qubits, gates: Vec::new(), ancillae: Vec::new() }
    }

    pub fn push(&mut self, g: Gate) -> &mut Self {
        self.gates.push(g);
        self
    }

    pub fn ancilla(&self, q: usize) -> Option<&Ancilla> {
        self.ancillae.iter().find(|a| a.qubit == q)
    }

    /// Qubits that are not ancillae, in increasing order.
    pub fn data_qubits(&self) -> Vec<usize> {
        (0..self.qubits).filter(|&q| self.ancilla(q).is_none()).collect()
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        for (i, g) in self.gates.iter().enumerate() {
            let qs = g.qubits();
            for &q in &qs {
                if q >= self.qubits {
                    return Err(CircuitError::QubitOutOfRange { gate: i, qubit: q, qubits: self.qubits });
                }
            }
            let mut sorted = qs.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != qs.len() {
                return Err(CircuitError::RepeatedQubit(i));
            }
        }
        let mut seen = vec![false; self.qubits];
        for a in &self.ancillae {
            if a.qubit >= self.qubits {
                return Err(CircuitError::QubitOutOfRange { gate: usize::MAX, qubit: a.qubit, qubits: self.qubits });
            }
            if std::mem::replace(&mut seen[a.qubit], true) {
                return Err(CircuitError::DuplicateAncilla(a.qubit));
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Circuit, CircuitError> {
        text::parse(text)
    }

    pub fn to_text(&self) -> String {
        text::format(self)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Cost {
    Clifford,
    NonClifford,
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cost::Clifford => "clifford",
            Cost::NonClifford => "non-clifford",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TCountReport {
    /// Rotations by an odd multiple of π/4.
    pub t_count: usize,
    /// Every non-Clifford rotation, keyed by its magnitude (`pi/8`, ...).
    pub rotation_census: BTreeMap<String, usize>,
    pub ancilla_count: usize,
    /// Cost of the correction circuit, when there is one.
    pub correction_cost: Option<Cost>,
}

impl TCountReport {
    /// Number of rotations by exactly `angle` (in magnitude).
    pub fn rotations_of(&self, angle: Phase) -> usize {
        self.rotation_census.get(&angle.magnitude().to_string()).copied().unwrap_or(0)
    }

    pub fn total_rotations(&self) -> usize {
        self.rotation_census.values().sum()
    }
}

pub fn t_count(c: &Circuit) -> TCountReport {
    let mut rep = TCountReport {
        t_count: 0,
        rotation_census: BTreeMap::new(),
        ancilla_count: c.ancillae.len(),
        correction_cost: None,
    };
    for p in c.gates.iter().flat_map(Gate::rotations) {
        if p.is_clifford() {
            continue;
        }
        if p.is_t_like() {
            rep.t_count += 1;
        }
        *rep.rotation_census.entry(p.magnitude().to_string()).or_default() += 1;
    }
    rep
}

/// Clifford iff no gate needs a non-Clifford rotation.
pub fn classify(c: &Circuit) -> Cost {
    if t_count(c).rotation_census.is_empty() {
        Cost::Clifford
    } else {
        Cost::NonClifford
    }
}

/// T-count of `main` with the cost of its correction circuit filled in.
pub fn t_count_with_correction(main: &Circuit, correction: &Circuit) -> TCountReport {
    let mut rep = t_count(main);
    rep.correction_cost = Some(classify(correction));
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_t_counts() {
        let mut c = Circuit::new(3);
        c.push(Gate::Toffoli(vec![0, 1], 2));
        assert_eq!(t_count(&c).t_count, 7);
        let mut c = Circuit::new(2);
        c.push(Gate::CnZ(Phase::pi_frac(-1, 2), vec![0, 1]));
        assert_eq!(t_count(&c).t_count, 3);
        let mut c = Circuit::new(2);
        c.push(Gate::H(0)).push(Gate::Cx(0, 1)).push(Gate::S(1)).push(Gate::Cz(0, 1));
        let r = t_count(&c);
        assert_eq!(r.t_count, 0);
        assert!(r.rotation_census.is_empty());
        assert_eq!(classify(&c), Cost::Clifford);
    }

    #[test]
    fn census_groups_by_magnitude() {
        let mut c = Circuit::new(1);
        c.push(Gate::Rz(Phase::pi_frac(1, 8), 0)).push(Gate::Rz(Phase::pi_frac(-1, 8), 0)).push(Gate::Tdg(0));
        let r = t_count(&c);
        assert_eq!(r.t_count, 1);
        assert_eq!(r.rotations_of(Phase::pi_frac(1, 8)), 2);
        assert_eq!(r.rotations_of(Phase::pi_frac(1, 4)), 1);
    }

    #[test]
    fn validation() {
        let mut c = Circuit::new(2);
        c.push(Gate::Cx(0, 2));
        assert!(matches!(c.validate(), Err(CircuitError::QubitOutOfRange { qubit: 2, .. })));
        let mut c = Circuit::new(2);
        c.push(Gate::Cz(1, 1));
        assert_eq!(c.validate(), Err(CircuitError::RepeatedQubit(0)));
    }
}
