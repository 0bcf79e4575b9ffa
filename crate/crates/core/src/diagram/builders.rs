use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;

use super::{Diagram, DiagramError, HLabel, NodeId, NodeKind};
use crate::bits::BitString;
use crate::phase::Phase;

/// Builds circuit-shaped diagrams wire by wire.
///
/// Each wire has a dangling end (the last node placed on it). Placing a
/// node on a wire connects it to that end and makes it the new end.
#[derive(Clone, Debug)]
pub struct WireBuilder {
    d: Diagram,
    ends: Vec<Option<NodeId>>,
}

impl WireBuilder {
    /// `n` wires, each starting at an input boundary.
    pub fn new(n: usize) -> Self {
        let mut d = Diagram::new();
        let ends = (0..n).map(|_| Some(d.add_input())).collect();
        Self { d, ends }
    }

    /// `n` wires with no inputs, for building states.
    pub fn state(n: usize) -> Self {
        Self { d: Diagram::new(), ends: vec![None; n] }
    }

    pub fn num_wires(&self) -> usize {
        self.ends.len()
    }

    pub fn diagram(&self) -> &Diagram {
        &self.d
    }

    pub fn diagram_mut(&mut self) -> &mut Diagram {
        &mut self.d
    }

    /// Place a node of the given kind on wire `q`.
    pub fn place(&mut self, q: usize, kind: NodeKind) -> NodeId {
        let id = self.d.add_node(kind);
        if let Some(end) = self.ends[q] {
            self.d.add_edge(end, id);
        }
        self.ends[q] = Some(id);
        id
    }

    /// A phase-free white spider on wire `q` that further legs can attach to.
    pub fn tap(&mut self, q: usize) -> NodeId {
        self.place(q, NodeKind::Z(Phase::zero()))
    }

    pub fn z(&mut self, q: usize, phase: Phase) -> NodeId {
        self.place(q, NodeKind::Z(phase))
    }

    pub fn x(&mut self, q: usize, phase: Phase) -> NodeId {
        self.place(q, NodeKind::X(phase))
    }

    pub fn not(&mut self, q: usize) -> NodeId {
        self.x(q, Phase::pi())
    }

    /// Hadamard gate, normalized.
    pub fn hadamard(&mut self, q: usize) -> NodeId {
        self.d.mul_scalar(C64::new(FRAC_1_SQRT_2, 0.0));
        self.place(q, NodeKind::H(HLabel::default()))
    }

    /// An H-box attached to taps on the given wires: the diagonal gate with
    /// entry `label` when all of them are 1.
    pub fn hbox(&mut self, label: HLabel, wires: &[usize]) -> NodeId {
        let taps: Vec<NodeId> = wires.iter().map(|&q| self.tap(q)).collect();
        let h = self.d.add_node(NodeKind::H(label));
        for t in taps {
            self.d.add_edge(t, h);
        }
        h
    }

    /// A phase gadget on the given wires: grey hub plus a phased white leaf.
    /// Returns `(hub, leaf)`.
    pub fn gadget(&mut self, phase: Phase, wires: &[usize]) -> (NodeId, NodeId) {
        let taps: Vec<NodeId> = wires.iter().map(|&q| self.tap(q)).collect();
        let hub = self.d.add_node(NodeKind::X(Phase::zero()));
        let leaf = self.d.add_node(NodeKind::Z(phase));
        for t in taps {
            self.d.add_edge(t, hub);
        }
        self.d.add_edge(hub, leaf);
        // |+...+><+...+| + |-...-><-...-| over k+1 legs contributes 2^{(1-k)/2}
        // relative to the parity indicator.
        let k = wires.len() as i32;
        self.d.mul_scalar(C64::new(2f64.powf((k - 1) as f64 / 2.0), 0.0));
        (hub, leaf)
    }

    /// CNOT, normalized.
    pub fn cx(&mut self, control: usize, target: usize) {
        let c = self.tap(control);
        let t = self.x(target, Phase::zero());
        self.d.add_edge(c, t);
        self.d.mul_scalar(C64::new(2f64.sqrt(), 0.0));
    }

    /// Cap every wire with an output boundary.
    pub fn finish(mut self) -> Diagram {
        for end in self.ends.iter() {
            let o = self.d.add_output();
            match end {
                Some(e) => self.d.add_edge(*e, o),
                None => {
                    // An untouched state wire: |+> up to normalization.
                    let z = self.d.add_node(NodeKind::Z(Phase::zero()));
                    self.d.add_edge(z, o);
                }
            }
        }
        self.d
    }
}

impl Diagram {
    /// `n` plain wires.
    pub fn identity(n: usize) -> Diagram {
        WireBuilder::new(n).finish()
    }

    fn single(kind: NodeKind, inputs: usize, outputs: usize) -> Diagram {
        let mut d = Diagram::new();
        let ins: Vec<NodeId> = (0..inputs).map(|_| d.add_input()).collect();
        let node = d.add_node(kind);
        let outs: Vec<NodeId> = (0..outputs).map(|_| d.add_output()).collect();
        for b in ins.into_iter().chain(outs) {
            d.add_edge(b, node);
        }
        d
    }

    /// `|0…0⟩⟨0…0| + e^{iα}|1…1⟩⟨1…1|`.
    pub fn z_spider(phase: Phase, inputs: usize, outputs: usize) -> Diagram {
        Self::single(NodeKind::Z(phase), inputs, outputs)
    }

    /// `|+…+⟩⟨+…+| + e^{iα}|−…−⟩⟨−…−|`.
    pub fn x_spider(phase: Phase, inputs: usize, outputs: usize) -> Diagram {
        Self::single(NodeKind::X(phase), inputs, outputs)
    }

    /// Label at the all-ones entry, 1 elsewhere.
    pub fn h_box(label: impl Into<HLabel>, inputs: usize, outputs: usize) -> Diagram {
        Self::single(NodeKind::H(label.into()), inputs, outputs)
    }

    /// H-box labelled `e^{iα}` with `arity` outputs.
    pub fn exp_h_box(alpha: Phase, arity: usize) -> Diagram {
        Self::single(NodeKind::H(HLabel::exp(alpha)), 0, arity)
    }

    /// The n-wire diagonal gate with entry `e^{iα}` when all `wires` are 1.
    pub fn controlled_phase(alpha: Phase, wires: &[usize], n: usize) -> Result<Diagram, DiagramError> {
        check_wires(wires, n)?;
        let mut b = WireBuilder::new(n);
        b.hbox(HLabel::exp(alpha), wires);
        Ok(b.finish())
    }

    /// Diagonal gate multiplying `|b⟩` by `e^{iα·(⊕_{j∈targets} b_j)}`.
    pub fn phase_gadget(alpha: Phase, targets: &[usize], n: usize) -> Result<Diagram, DiagramError> {
        check_wires(targets, n)?;
        if targets.is_empty() {
            return Err(DiagramError::EmptyTargets);
        }
        let mut b = WireBuilder::new(n);
        b.gadget(alpha, targets);
        Ok(b.finish())
    }

    /// NOT on every wire `i` with `b_i = 0`.
    pub fn indexing_box(b: &BitString, n: usize) -> Result<Diagram, DiagramError> {
        if b.len() != n {
            return Err(DiagramError::LengthMismatch(b.len(), n));
        }
        let mut w = WireBuilder::new(n);
        for i in 0..n {
            if !b.bit(i) {
                w.not(i);
            }
        }
        Ok(w.finish())
    }

    /// `|+⟩^{⊗n}` as white spiders.
    pub fn plus_state(n: usize) -> Diagram {
        let mut d = WireBuilder::state(n).finish();
        d.mul_scalar(C64::new(FRAC_1_SQRT_2.powi(n as i32), 0.0));
        d
    }

    /// The ZH normal form `Σ_b a_b |b⟩`: for every `b` an n-ary H-box
    /// labelled `a_b`, joined through the indexing box of `b` to the output
    /// spiders.
    pub fn normal_form_state(coeffs: &[C64]) -> Result<Diagram, DiagramError> {
        let len = coeffs.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(DiagramError::NotPowerOfTwo(len));
        }
        let n = len.trailing_zeros() as usize;
        let mut d = Diagram::new();
        let spiders: Vec<NodeId> = (0..n).map(|_| d.add_node(NodeKind::Z(Phase::zero()))).collect();
        for (v, &a) in coeffs.iter().enumerate() {
            let b = BitString::new(v as u64, n);
            let h = d.add_node(NodeKind::H(HLabel::new(a)));
            for (i, &s) in spiders.iter().enumerate() {
                if b.bit(i) {
                    d.add_edge(s, h);
                } else {
                    let not = d.add_node(NodeKind::X(Phase::pi()));
                    d.add_edge(s, not);
                    d.add_edge(not, h);
                }
            }
        }
        for &s in &spiders {
            let o = d.add_output();
            d.add_edge(s, o);
        }
        Ok(d)
    }
}

fn check_wires(wires: &[usize], n: usize) -> Result<(), DiagramError> {
    let mut seen = vec![false; n];
    for &q in wires {
        if q >= n {
            return Err(DiagramError::WireOutOfRange(q, n));
        }
        if seen[q] {
            return Err(DiagramError::DuplicateWire(q));
        }
        seen[q] = true;
    }
    Ok(())
}
