//! Open ZH/ZX string diagrams.
//!
//! A [`Diagram`] is an undirected multigraph of generators. Spiders and
//! H-boxes are symmetric, so edges only record their endpoints and a
//! multiplicity. Boundary nodes have degree exactly one and are listed, in
//! order, as either an input or an output.

mod builders;
mod json;

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::phase::Phase;

pub use builders::WireBuilder;
pub use json::{DiagramJson, JsonEdge, JsonNode};

pub type NodeId = usize;

#[derive(Debug, Error, PartialEq)]
pub enum DiagramError {
    #[error("missing node {0}")]
    MissingNode(NodeId),
    #[error("boundary node {0} has degree {1}, expected 1")]
    BoundaryDegree(NodeId, usize),
    #[error("boundary node {0} is not listed as an input or output exactly once")]
    BoundaryListing(NodeId),
    #[error("non-boundary node {0} listed as an input or output")]
    NotBoundary(NodeId),
    #[error("global scalar is zero")]
    ZeroScalar,
    #[error("cannot compose: {0} outputs against {1} inputs")]
    ArityMismatch(usize, usize),
    #[error("duplicate wire index {0}")]
    DuplicateWire(usize),
    #[error("a phase gadget needs at least one target")]
    EmptyTargets,
    #[error("wire index {0} out of range for {1} wires")]
    WireOutOfRange(usize, usize),
    #[error("coefficient vector length {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),
    #[error("bit string length {0} does not match {1} wires")]
    LengthMismatch(usize, usize),
    #[error("malformed diagram JSON: {0}")]
    Json(String),
}

/// Label of an H-box: the complex number at its all-ones entry.
///
/// When the box was built as an exponentiated H-box the exact exponent is
/// kept alongside the value.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct HLabel {
    value: C64,
    exponent: Option<Phase>,
}

impl HLabel {
    pub fn new(value: C64) -> Self {
        Self { value, exponent: None }
    }

    /// The label `e^{iα}`.
    pub fn exp(alpha: Phase) -> Self {
        Self { value: alpha.exp_i(), exponent: Some(alpha) }
    }

    pub fn value(&self) -> C64 {
        self.value
    }

    pub fn exponent(&self) -> Option<Phase> {
        self.exponent
    }

    pub fn conj(&self) -> Self {
        Self { value: self.value.conj(), exponent: self.exponent.map(|a| a.adjoint()) }
    }

    pub fn is_default(&self) -> bool {
        (self.value + 1.0).norm() < 1e-12
    }

    pub fn is_one(&self) -> bool {
        (self.value - 1.0).norm() < 1e-12
    }

    /// Product of labels; exponents add when both are known.
    pub fn mul(&self, other: &HLabel) -> HLabel {
        match (self.exponent, other.exponent) {
            (Some(a), Some(b)) => HLabel::exp(a + b),
            _ => HLabel::new(self.value * other.value),
        }
    }
}

impl Default for HLabel {
    fn default() -> Self {
        HLabel::exp(Phase::pi())
    }
}

impl From<C64> for HLabel {
    fn from(value: C64) -> Self {
        HLabel::new(value)
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub enum NodeKind {
    Z(Phase),
    X(Phase),
    H(HLabel),
    Boundary,
}

impl NodeKind {
    pub fn is_z(&self) -> bool {
        matches!(self, NodeKind::Z(_))
    }

    pub fn is_x(&self) -> bool {
        matches!(self, NodeKind::X(_))
    }

    pub fn is_h(&self) -> bool {
        matches!(self, NodeKind::H(_))
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, NodeKind::Boundary)
    }

    /// Phase-free white spider.
    pub fn is_plain_z(&self) -> bool {
        matches!(self, NodeKind::Z(p) if p.is_zero())
    }

    pub fn is_plain_x(&self) -> bool {
        matches!(self, NodeKind::X(p) if p.is_zero())
    }

    /// The NOT gate as a generator: a π-phase grey spider.
    pub fn is_not(&self) -> bool {
        matches!(self, NodeKind::X(p) if p.is_pi())
    }

    pub fn adjoint(&self) -> NodeKind {
        match self {
            NodeKind::Z(p) => NodeKind::Z(p.adjoint()),
            NodeKind::X(p) => NodeKind::X(p.adjoint()),
            NodeKind::H(l) => NodeKind::H(l.conj()),
            NodeKind::Boundary => NodeKind::Boundary,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Diagram {
    nodes: BTreeMap<NodeId, NodeKind>,
    adj: BTreeMap<NodeId, BTreeMap<NodeId, usize>>,
    inputs: Vec<NodeId>,
    outputs: Vec<NodeId>,
    scalar: C64,
    next_id: NodeId,
}

impl Default for Diagram {
    fn default() -> Self {
        Self::new()
    }
}

impl Diagram {
    pub fn new() -> Self {
        Self {
            nodes: BTreeMap::new(),
            adj: BTreeMap::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            scalar: C64::new(1.0, 0.0),
            next_id: 0,
        }
    }

    pub fn add_node(&mut self, kind: NodeKind) -> NodeId {
        let id = self.next_id;
        self.next_id += 1;
        self.nodes.insert(id, kind);
        self.adj.insert(id, BTreeMap::new());
        id
    }

    pub fn add_input(&mut self) -> NodeId {
        let id = self.add_node(NodeKind::Boundary);
        self.inputs.push(id);
        id
    }

    pub fn add_output(&mut self) -> NodeId {
        let id = self.add_node(NodeKind::Boundary);
        self.outputs.push(id);
        id
    }

    /// Remove a node and all incident edges. Boundary lists are updated.
    pub fn remove_node(&mut self, id: NodeId) -> Option<NodeKind> {
        let kind = self.nodes.remove(&id)?;
        if let Some(nbrs) = self.adj.remove(&id) {
            for nb in nbrs.keys() {
                if let Some(m) = self.adj.get_mut(nb) {
                    m.remove(&id);
                }
            }
        }
        self.inputs.retain(|&i| i != id);
        self.outputs.retain(|&o| o != id);
        Some(kind)
    }

    /// Add `mult` parallel edges between `a` and `b` (a self-loop when equal).
    pub fn add_edges(&mut self, a: NodeId, b: NodeId, mult: usize) {
        assert!(self.nodes.contains_key(&a) && self.nodes.contains_key(&b), "edge to missing node");
        if mult == 0 {
            return;
        }
        *self.adj.get_mut(&a).unwrap().entry(b).or_insert(0) += mult;
        if a != b {
            *self.adj.get_mut(&b).unwrap().entry(a).or_insert(0) += mult;
        }
    }

    pub fn add_edge(&mut self, a: NodeId, b: NodeId) {
        self.add_edges(a, b, 1);
    }

    /// Remove every edge between `a` and `b`, returning the multiplicity.
    pub fn remove_edges(&mut self, a: NodeId, b: NodeId) -> usize {
        let m = self.adj.get_mut(&a).and_then(|m| m.remove(&b)).unwrap_or(0);
        if a != b {
            if let Some(n) = self.adj.get_mut(&b) {
                n.remove(&a);
            }
        }
        m
    }

    pub fn set_edge_multiplicity(&mut self, a: NodeId, b: NodeId, mult: usize) {
        self.remove_edges(a, b);
        self.add_edges(a, b, mult);
    }

    pub fn multiplicity(&self, a: NodeId, b: NodeId) -> usize {
        self.adj.get(&a).and_then(|m| m.get(&b)).copied().unwrap_or(0)
    }

    pub fn kind(&self, id: NodeId) -> Option<&NodeKind> {
        self.nodes.get(&id)
    }

    pub fn kind_mut(&mut self, id: NodeId) -> Option<&mut NodeKind> {
        self.nodes.get_mut(&id)
    }

    pub fn has_node(&self, id: NodeId) -> bool {
        self.nodes.contains_key(&id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &NodeKind)> + '_ {
        self.nodes.iter().map(|(&id, k)| (id, k))
    }

    pub fn node_ids(&self) -> Vec<NodeId> {
        self.nodes.keys().copied().collect()
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Neighbors with edge multiplicities, in id order. A self-loop appears
    /// as the node itself.
    pub fn neighbors(&self, id: NodeId) -> impl Iterator<Item = (NodeId, usize)> + '_ {
        self.adj.get(&id).into_iter().flat_map(|m| m.iter().map(|(&n, &k)| (n, k)))
    }

    pub fn neighbor_ids(&self, id: NodeId) -> Vec<NodeId> {
        self.neighbors(id).map(|(n, _)| n).collect()
    }

    /// Number of edge ends at `id`; a self-loop counts twice.
    pub fn degree(&self, id: NodeId) -> usize {
        self.neighbors(id).map(|(n, k)| if n == id { 2 * k } else { k }).sum()
    }

    /// Every edge once, as `(a, b, multiplicity)` with `a <= b`.
    pub fn edges(&self) -> Vec<(NodeId, NodeId, usize)> {
        let mut out = Vec::new();
        for (&a, nbrs) in &self.adj {
            for (&b, &k) in nbrs {
                if a <= b {
                    out.push((a, b, k));
                }
            }
        }
        out
    }

    pub fn inputs(&self) -> &[NodeId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[NodeId] {
        &self.outputs
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn set_boundaries(&mut self, inputs: Vec<NodeId>, outputs: Vec<NodeId>) {
        self.inputs = inputs;
        self.outputs = outputs;
    }

    pub fn scalar(&self) -> C64 {
        self.scalar
    }

    pub fn mul_scalar(&mut self, s: C64) {
        self.scalar *= s;
    }

    pub fn set_scalar(&mut self, s: C64) {
        self.scalar = s;
    }

    pub fn count_where(&self, pred: impl Fn(&NodeKind) -> bool) -> usize {
        self.nodes.values().filter(|k| pred(k)).count()
    }

    /// Check every structural invariant.
    pub fn validate(&self) -> Result<(), DiagramError> {
        if self.scalar.norm() == 0.0 {
            return Err(DiagramError::ZeroScalar);
        }
        for (&a, nbrs) in &self.adj {
            if !self.nodes.contains_key(&a) {
                return Err(DiagramError::MissingNode(a));
            }
            for &b in nbrs.keys() {
                if !self.nodes.contains_key(&b) {
                    return Err(DiagramError::MissingNode(b));
                }
            }
        }
        let mut listed: BTreeMap<NodeId, usize> = BTreeMap::new();
        for &b in self.inputs.iter().chain(self.outputs.iter()) {
            match self.nodes.get(&b) {
                None => return Err(DiagramError::MissingNode(b)),
                Some(k) if !k.is_boundary() => return Err(DiagramError::NotBoundary(b)),
                _ => *listed.entry(b).or_insert(0) += 1,
            }
        }
        for (&id, kind) in &self.nodes {
            if kind.is_boundary() {
                let deg = self.degree(id);
                if deg != 1 {
                    return Err(DiagramError::BoundaryDegree(id, deg));
                }
                if listed.get(&id) != Some(&1) {
                    return Err(DiagramError::BoundaryListing(id));
                }
            }
        }
        Ok(())
    }

    /// Copy all nodes of `other` into `self`, returning the id translation.
    fn absorb(&mut self, other: &Diagram) -> BTreeMap<NodeId, NodeId> {
        let map: BTreeMap<NodeId, NodeId> =
            other.nodes.iter().map(|(&id, &k)| (id, self.add_node(k))).collect();
        for (a, b, k) in other.edges() {
            self.add_edges(map[&a], map[&b], k);
        }
        self.scalar *= other.scalar;
        map
    }

    /// The only neighbor of a boundary node.
    pub fn boundary_neighbor(&self, b: NodeId) -> NodeId {
        self.neighbor_ids(b)[0]
    }

    /// Glue `first`'s outputs to `then`'s inputs, in order.
    pub fn compose(first: &Diagram, then: &Diagram) -> Result<Diagram, DiagramError> {
        if first.num_outputs() != then.num_inputs() {
            return Err(DiagramError::ArityMismatch(first.num_outputs(), then.num_inputs()));
        }
        let mut d = Diagram::new();
        let m1 = d.absorb(first);
        let m2 = d.absorb(then);
        let inputs: Vec<NodeId> = first.inputs.iter().map(|i| m1[i]).collect();
        let outputs: Vec<NodeId> = then.outputs.iter().map(|o| m2[o]).collect();
        let glue: Vec<(NodeId, NodeId)> =
            first.outputs.iter().zip(&then.inputs).map(|(o, i)| (m1[o], m2[i])).collect();
        d.inputs = inputs;
        d.outputs = outputs;
        for (o, i) in glue {
            d.fuse_boundaries(o, i);
        }
        Ok(d)
    }

    /// Join two boundary nodes into a plain wire, removing both.
    fn fuse_boundaries(&mut self, o: NodeId, i: NodeId) {
        let p = self.boundary_neighbor(o);
        if p == i {
            // o and i were wired to each other: a closed loop of dimension 2.
            self.remove_node(o);
            self.remove_node(i);
            self.scalar *= 2.0;
            return;
        }
        let q = self.boundary_neighbor(i);
        self.remove_node(o);
        self.remove_node(i);
        self.add_edge(p, q);
    }

    /// Side-by-side composition.
    pub fn tensor_product(a: &Diagram, b: &Diagram) -> Diagram {
        let mut d = Diagram::new();
        let ma = d.absorb(a);
        let mb = d.absorb(b);
        d.inputs = a.inputs.iter().map(|i| ma[i]).chain(b.inputs.iter().map(|i| mb[i])).collect();
        d.outputs =
            a.outputs.iter().map(|o| ma[o]).chain(b.outputs.iter().map(|o| mb[o])).collect();
        d
    }

    /// Dagger: boundaries swap roles, phases and labels are conjugated.
    pub fn adjoint(&self) -> Diagram {
        let mut d = self.clone();
        for k in d.nodes.values_mut() {
            *k = k.adjoint();
        }
        std::mem::swap(&mut d.inputs, &mut d.outputs);
        d.scalar = d.scalar.conj();
        d
    }

    /// Turn the `idx`-th input into an extra output (bending the wire).
    pub fn input_to_output(&mut self, idx: usize) {
        let b = self.inputs.remove(idx);
        self.outputs.push(b);
    }

    /// Renumber nodes densely in id order; inputs and outputs keep their order.
    pub fn compacted(&self) -> Diagram {
        let mut d = Diagram::new();
        let map = d.absorb(self);
        d.scalar = self.scalar;
        d.inputs = self.inputs.iter().map(|i| map[i]).collect();
        d.outputs = self.outputs.iter().map(|o| map[o]).collect();
        d
    }

    /// GraphViz rendering.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph diagram {\n");
        for (id, k) in self.nodes() {
            let (label, style) = match k {
                NodeKind::Z(p) => (p.to_string(), "shape=circle,style=filled,fillcolor=white"),
                NodeKind::X(p) => (p.to_string(), "shape=circle,style=filled,fillcolor=gray"),
                NodeKind::H(l) => {
                    (format!("{:.3}", l.value()), "shape=square,style=filled,fillcolor=yellow")
                }
                NodeKind::Boundary => {
                    let tag = if self.inputs.contains(&id) { "in" } else { "out" };
                    (tag.to_string(), "shape=plaintext")
                }
            };
            s.push_str(&format!("  n{id} [label=\"{label}\",{style}];\n"));
        }
        for (a, b, k) in self.edges() {
            for _ in 0..k {
                s.push_str(&format!("  n{a} -- n{b};\n"));
            }
        }
        s.push_str("}\n");
        s
    }
}
