//! Dense tensor semantics of diagrams.
//!
//! [`evaluate`] contracts a diagram into a [`Tensor`] by variable
//! elimination over binary variables:
//!
//! * all legs of a white spider share one variable, with weight `(1, e^{iα})`;
//! * a grey spider gets an internal variable `z` with weight `(1, e^{iα})`
//!   and a factor `(−1)^{z·x}/√2` towards each leg `x`;
//! * an H-box is a factor over its legs equal to the label when every leg is
//!   1 and to 1 otherwise;
//! * every edge not touching a white spider carries a fresh variable.
//!
//! Boundary indices are laid out outputs first, then inputs, row-major with
//! the first wire most significant. Read as a matrix, entry `[out][in]` is
//! `data[out * 2^inputs + in]`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, NodeId, NodeKind};
use crate::phase::Phase;

/// Largest number of boundary wires the dense oracle accepts.
pub const MAX_WIRES: usize = 14;
/// Largest intermediate factor, in variables.
pub const MAX_INTERMEDIATE: usize = 24;

#[derive(Debug, Error, PartialEq)]
pub enum TensorError {
    #[error("diagram has {0} boundary wires; the dense oracle handles at most {MAX_WIRES}")]
    Capacity(usize),
    #[error("contraction needs an intermediate tensor over {0} indices (limit {MAX_INTERMEDIATE})")]
    Intermediate(usize),
    #[error("shape mismatch: {0:?} vs {1:?}")]
    ShapeMismatch((usize, usize), (usize, usize)),
    #[error("output index {0} out of range ({1} outputs)")]
    OutputOutOfRange(usize, usize),
    #[error("malformed tensor dump at line {0}: {1}")]
    Parse(usize, String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// A dense tensor with one dimension-2 index per boundary wire.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    outputs: usize,
    inputs: usize,
    data: Vec<C64>,
}

impl Tensor {
    pub fn new(outputs: usize, inputs: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), 1 << (outputs + inputs), "tensor data length");
        Self { outputs, inputs, data }
    }

    /// A `2^outputs × 2^inputs` matrix given by rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let outputs = rows.len().trailing_zeros() as usize;
        let inputs = rows[0].len().trailing_zeros() as usize;
        Self::new(outputs, inputs, rows.iter().flatten().copied().collect())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let rows: Vec<Vec<C64>> =
            rows.iter().map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn identity(wires: usize) -> Self {
        let dim = 1 << wires;
        let mut data = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = C64::new(1.0, 0.0);
        }
        Self::new(wires, wires, data)
    }

    /// Diagonal gate with the given entries.
    pub fn diagonal(entries: &[C64]) -> Self {
        let dim = entries.len();
        let wires = dim.trailing_zeros() as usize;
        let mut data = vec![C64::new(0.0, 0.0); dim * dim];
        for (i, &e) in entries.iter().enumerate() {
            data[i * dim + i] = e;
        }
        Self::new(wires, wires, data)
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs
    }

    /// One `2` per boundary wire, outputs first.
    pub fn shape(&self) -> Vec<usize> {
        vec![2; self.outputs + self.inputs]
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, out: usize, inp: usize) -> C64 {
        self.data[(out << self.inputs) | inp]
    }

    pub fn scale(&self, s: C64) -> Tensor {
        Tensor::new(self.outputs, self.inputs, self.data.iter().map(|&x| x * s).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Matrix product `self · rhs`: apply `rhs` first.
    pub fn matmul(&self, rhs: &Tensor) -> Result<Tensor, TensorError> {
        if self.inputs != rhs.outputs {
            return Err(TensorError::ShapeMismatch(
                (self.outputs, self.inputs),
                (rhs.outputs, rhs.inputs),
            ));
        }
        let (r, k, c) = (1usize << self.outputs, 1usize << self.inputs, 1usize << rhs.inputs);
        let mut data = vec![C64::new(0.0, 0.0); r * c];
        for i in 0..r {
            for m in 0..k {
                let a = self.data[i * k + m];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..c {
                    data[i * c + j] += a * rhs.data[m * c + j];
                }
            }
        }
        Ok(Tensor::new(self.outputs, rhs.inputs, data))
    }

    /// Kronecker product, `self` on the first wires.
    pub fn kron(&self, rhs: &Tensor) -> Tensor {
        let (ar, ac) = (1usize << self.outputs, 1usize << self.inputs);
        let (br, bc) = (1usize << rhs.outputs, 1usize << rhs.inputs);
        let mut data = vec![C64::new(0.0, 0.0); ar * br * ac * bc];
        for i in 0..ar {
            for j in 0..ac {
                let a = self.data[i * ac + j];
                for k in 0..br {
                    for l in 0..bc {
                        data[(i * br + k) * (ac * bc) + j * bc + l] = a * rhs.data[k * bc + l];
                    }
                }
            }
        }
        Tensor::new(self.outputs + rhs.outputs, self.inputs + rhs.inputs, data)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Tensor {
        let (r, c) = (1usize << self.outputs, 1usize << self.inputs);
        let mut data = vec![C64::new(0.0, 0.0); r * c];
        for i in 0..r {
            for j in 0..c {
                data[j * r + i] = self.data[i * c + j].conj();
            }
        }
        Tensor::new(self.inputs, self.outputs, data)
    }

    /// Text dump: a shape header, the boundary split, then one `re im` pair
    /// per entry with 17 significant digits.
    pub fn dump(&self) -> String {
        let mut s = String::from("shape");
        for d in self.shape() {
            let _ = write!(s, " {d}");
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "outputs {} inputs {}", self.outputs, self.inputs);
        for x in &self.data {
            let _ = writeln!(s, "{:.16e} {:.16e}", x.re, x.im);
        }
        s
    }

    pub fn parse_dump(text: &str) -> Result<Tensor, TensorError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let err = |n: usize, m: &str| TensorError::Parse(n + 1, m.to_string());
        let (n0, header) = lines.next().ok_or_else(|| err(0, "empty input"))?;
        if !header.starts_with("shape") {
            return Err(err(n0, "expected shape header"));
        }
        let (n1, split) = lines.next().ok_or_else(|| err(n0 + 1, "missing outputs/inputs line"))?;
        let parts: Vec<&str> = split.split_whitespace().collect();
        let (outputs, inputs): (usize, usize) = match parts.as_slice() {
            ["outputs", o, "inputs", i] => (
                o.parse().map_err(|_| err(n1, "bad output count"))?,
                i.parse().map_err(|_| err(n1, "bad input count"))?,
            ),
            _ => return Err(err(n1, "expected 'outputs N inputs M'")),
        };
        let mut data = Vec::new();
        for (n, line) in lines {
            let nums: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| err(n, "bad number")))
                .collect::<Result<_, _>>()?;
            if nums.len() != 2 {
                return Err(err(n, "expected 're im'"));
            }
            data.push(C64::new(nums[0], nums[1]));
        }
        if data.len() != 1 << (outputs + inputs) {
            return Err(err(0, "entry count does not match shape"));
        }
        Ok(Tensor::new(outputs, inputs, data))
    }
}

/// Nonzero `λ` with `a ≈ λ·b`: read off the largest-magnitude entry of `b`.
pub fn proportionality_factor(a: &Tensor, b: &Tensor) -> Option<C64> {
    let (k, bk) = b
        .data
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))?;
    if bk.norm() == 0.0 {
        return None;
    }
    Some(a.data[k] / bk)
}

/// Largest entrywise deviation `|a − λ·b|`, relative to the largest entry of
/// `a`, after fitting `λ`. Zero tensors compare as described in
/// [`proportional`].
pub fn max_deviation(a: &Tensor, b: &Tensor, tol: f64) -> Result<f64, TensorError> {
    if (a.outputs, a.inputs) != (b.outputs, b.inputs) {
        return Err(TensorError::ShapeMismatch((a.outputs, a.inputs), (b.outputs, b.inputs)));
    }
    let (amax, bmax) = (a.max_abs(), b.max_abs());
    match (amax <= tol, bmax <= tol) {
        (true, true) => return Ok(0.0),
        (true, false) | (false, true) => return Ok(f64::INFINITY),
        _ => {}
    }
    let lambda = match proportionality_factor(a, b) {
        Some(l) if l.norm() > 0.0 => l,
        _ => return Ok(f64::INFINITY),
    };
    let dev = a
        .data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - lambda * y).norm())
        .fold(0.0, f64::max);
    Ok(dev / amax)
}

/// True iff `a = λ·b` for some nonzero `λ`, entrywise within `tol` times the
/// largest magnitude. Two zero tensors are proportional; a zero and a
/// nonzero tensor are not.
pub fn proportional(a: &Tensor, b: &Tensor, tol: f64) -> Result<bool, TensorError> {
    Ok(max_deviation(a, b, tol)? <= tol)
}

/// Distance between the unit vectors along `a` and `b` after removing the
/// best global phase.
pub fn phase_aligned_distance(a: &Tensor, b: &Tensor) -> f64 {
    let na = a.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let nb = b.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let inner: C64 = b.data.iter().zip(&a.data).map(|(y, x)| y.conj() * x).sum();
    let phase = if inner.norm() > 0.0 { inner / inner.norm() } else { C64::new(1.0, 0.0) };
    a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x / na - phase * y / nb).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Variable elimination order.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Order {
    /// Repeatedly eliminate the variable giving the smallest intermediate.
    Greedy,
    /// Eliminate variables in creation order.
    Sequential,
}

pub fn evaluate(d: &Diagram) -> Result<Tensor, TensorError> {
    evaluate_with(d, Order::Greedy)
}

#[derive(Clone, Debug)]
struct Factor {
    vars: Vec<usize>,
    data: Vec<C64>,
}

impl Factor {
    fn scalar(x: C64) -> Self {
        Factor { vars: Vec::new(), data: vec![x] }
    }

    /// Value at a full assignment given as a lookup `var -> bit`.
    fn index_of(&self, assign: &dyn Fn(usize) -> usize) -> usize {
        self.vars.iter().fold(0, |acc, &v| (acc << 1) | assign(v))
    }

    fn product(&self, other: &Factor) -> Factor {
        let vars: Vec<usize> =
            self.vars.iter().chain(&other.vars).copied().collect::<BTreeSet<_>>().into_iter().collect();
        let pos: BTreeMap<usize, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let k = vars.len();
        let mut data = Vec::with_capacity(1 << k);
        for idx in 0..1usize << k {
            let assign = |v: usize| (idx >> (k - 1 - pos[&v])) & 1;
            data.push(self.data[self.index_of(&assign)] * other.data[other.index_of(&assign)]);
        }
        Factor { vars, data }
    }

    fn sum_out(&self, var: usize) -> Factor {
        let p = self.vars.iter().position(|&v| v == var).expect("variable in factor");
        let k = self.vars.len();
        let shift = k - 1 - p;
        let mut vars = self.vars.clone();
        vars.remove(p);
        let mut data = vec![C64::new(0.0, 0.0); 1 << (k - 1)];
        for (idx, &x) in self.data.iter().enumerate() {
            let high = idx >> (shift + 1);
            let low = idx & ((1 << shift) - 1);
            data[(high << shift) | low] += x;
        }
        Factor { vars, data }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let n = self.0[c];
            self.0[c] = r;
            c = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Contract with an explicit elimination order.
pub fn evaluate_with(d: &Diagram, order: Order) -> Result<Tensor, TensorError> {
    d.validate()?;
    let wires = d.num_inputs() + d.num_outputs();
    if wires > MAX_WIRES {
        return Err(TensorError::Capacity(wires));
    }

    // Variables: one per white spider (merged along white-white edges), one
    // per unit of every other edge, one internal per grey spider.
    let mut nvars = 0usize;
    let mut z_var: BTreeMap<NodeId, usize> = BTreeMap::new();
    for (id, k) in d.nodes() {
        if k.is_z() {
            z_var.insert(id, nvars);
            nvars += 1;
        }
    }
    let mut legs: BTreeMap<NodeId, Vec<usize>> = d.node_ids().into_iter().map(|id| (id, Vec::new())).collect();
    let mut merges = Vec::new();
    for (a, b, mult) in d.edges() {
        let (ka, kb) = (d.kind(a).unwrap(), d.kind(b).unwrap());
        match (ka.is_z(), kb.is_z()) {
            (true, true) => merges.push((z_var[&a], z_var[&b])),
            (true, false) => legs.get_mut(&b).unwrap().extend(std::iter::repeat_n(z_var[&a], mult)),
            (false, true) => legs.get_mut(&a).unwrap().extend(std::iter::repeat_n(z_var[&b], mult)),
            (false, false) => {
                for _ in 0..mult {
                    let v = nvars;
                    nvars += 1;
                    legs.get_mut(&a).unwrap().push(v);
                    legs.get_mut(&b).unwrap().push(v);
                }
            }
        }
    }
    let mut uf = UnionFind((0..nvars).collect());
    for (x, y) in merges {
        uf.union(x, y);
    }

    let mut factors: Vec<Factor> = vec![Factor::scalar(d.scalar())];
    let mut open: Vec<usize> = Vec::new();
    let mut internal = nvars;
    let mut boundary_var: BTreeMap<NodeId, usize> = BTreeMap::new();
    for (id, kind) in d.nodes() {
        let node_legs: Vec<usize> = legs[&id].iter().map(|&v| uf.find(v)).collect();
        match kind {
            NodeKind::Z(p) => {
                let v = uf.find(z_var[&id]);
                factors.push(Factor { vars: vec![v], data: vec![C64::new(1.0, 0.0), p.exp_i()] });
            }
            NodeKind::X(p) => {
                let z = internal;
                internal += 1;
                factors.push(Factor { vars: vec![z], data: vec![C64::new(1.0, 0.0), p.exp_i()] });
                let h = C64::new(FRAC_1_SQRT_2, 0.0);
                for &l in &node_legs {
                    factors.push(Factor { vars: vec![z, l], data: vec![h, h, h, -h] });
                }
            }
            NodeKind::H(label) => {
                let vars: Vec<usize> = node_legs.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
                let k = vars.len();
                let mut data = vec![C64::new(1.0, 0.0); 1 << k];
                data[(1 << k) - 1] = label.value();
                factors.push(Factor { vars, data });
            }
            NodeKind::Boundary => {
                // The only leg is either a white spider's variable or a fresh
                // edge variable.
                let v = match node_legs.first() {
                    Some(&v) => v,
                    None => uf.find(z_var[&d.boundary_neighbor(id)]),
                };
                boundary_var.insert(id, v);
            }
        }
    }
    for &o in d.outputs().iter().chain(d.inputs()) {
        open.push(boundary_var[&o]);
    }
    let open_set: BTreeSet<usize> = open.iter().copied().collect();

    let mut all_vars: BTreeSet<usize> = BTreeSet::new();
    for f in &factors {
        all_vars.extend(f.vars.iter().copied());
    }
    let mut to_eliminate: Vec<usize> = all_vars.difference(&open_set).copied().collect();

    while !to_eliminate.is_empty() {
        let pick = match order {
            Order::Sequential => 0,
            Order::Greedy => {
                let mut best = (usize::MAX, 0);
                for (i, &v) in to_eliminate.iter().enumerate() {
                    let mut scope = BTreeSet::new();
                    for f in factors.iter().filter(|f| f.vars.contains(&v)) {
                        scope.extend(f.vars.iter().copied());
                    }
                    if scope.len() < best.0 {
                        best = (scope.len(), i);
                    }
                }
                best.1
            }
        };
        let v = to_eliminate.remove(pick);
        let (with, without): (Vec<Factor>, Vec<Factor>) =
            factors.into_iter().partition(|f| f.vars.contains(&v));
        factors = without;
        let scope: BTreeSet<usize> = with.iter().flat_map(|f| f.vars.iter().copied()).collect();
        if scope.len() > MAX_INTERMEDIATE {
            return Err(TensorError::Intermediate(scope.len()));
        }
        let merged = with.iter().fold(Factor::scalar(C64::new(1.0, 0.0)), |acc, f| acc.product(f));
        factors.push(merged.sum_out(v));
    }

    let result = factors.iter().fold(Factor::scalar(C64::new(1.0, 0.0)), |acc, f| acc.product(f));
    // Expand over the boundary order, duplicating shared variables.
    let mut data = Vec::with_capacity(1 << wires);
    for idx in 0..1usize << wires {
        let mut bits: BTreeMap<usize, usize> = BTreeMap::new();
        let mut consistent = true;
        for (w, &v) in open.iter().enumerate() {
            let bit = (idx >> (wires - 1 - w)) & 1;
            match bits.insert(v, bit) {
                Some(prev) if prev != bit => consistent = false,
                _ => {}
            }
        }
        if !consistent {
            data.push(C64::new(0.0, 0.0));
            continue;
        }
        let r = result.vars.iter().fold(0usize, |acc, v| (acc << 1) | bits.get(v).copied().unwrap_or(0));
        data.push(result.data[r]);
    }
    Ok(Tensor::new(d.num_outputs(), d.num_inputs(), data))
}

/// One-qubit effects for post-selection.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Effect {
    Plus,
    Minus,
    Zero,
    One,
}

impl Effect {
    pub(crate) fn kind(self) -> NodeKind {
        match self {
            Effect::Plus => NodeKind::Z(Phase::zero()),
            Effect::Minus => NodeKind::Z(Phase::pi()),
            Effect::Zero => NodeKind::X(Phase::zero()),
            Effect::One => NodeKind::X(Phase::pi()),
        }
    }
}

/// Compose the effect `⟨+|`, `⟨−|`, `⟨0|` or `⟨1|` onto output `wire`.
pub fn post_select(d: &Diagram, wire: usize, effect: Effect) -> Result<Diagram, TensorError> {
    if wire >= d.num_outputs() {
        return Err(TensorError::OutputOutOfRange(wire, d.num_outputs()));
    }
    let mut out = d.clone();
    let o = out.outputs()[wire];
    let p = out.boundary_neighbor(o);
    out.remove_node(o);
    let e = out.add_node(effect.kind());
    out.add_edge(p, e);
    out.mul_scalar(C64::new(FRAC_1_SQRT_2, 0.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::HLabel;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn spider_semantics() {
        let s = evaluate(&Diagram::z_spider(Phase::pi_frac(1, 2), 1, 1)).unwrap();
        assert!(proportional(&s, &Tensor::diagonal(&[c(1.0), C64::i()]), 1e-12).unwrap());
        let st = evaluate(&Diagram::z_spider(Phase::pi(), 0, 1)).unwrap();
        assert_eq!(st.data(), &[c(1.0), c(-1.0)]);
        let xor = evaluate(&Diagram::x_spider(Phase::zero(), 2, 1)).unwrap();
        let r = 1.0 / 2f64.sqrt();
        let expect = Tensor::from_real_rows(&[&[r, 0.0, 0.0, r], &[0.0, r, r, 0.0]]);
        assert!(max_deviation(&xor, &expect, 1e-12).unwrap() < 1e-12);
        assert!((xor.get(0, 0) - c(r)).norm() < 1e-12);
    }

    #[test]
    fn h_box_semantics() {
        let h = evaluate(&Diagram::h_box(HLabel::default(), 1, 1)).unwrap();
        assert!(max_deviation(&h, &Tensor::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]]), 1e-12).unwrap() < 1e-12);
        let z = evaluate(&Diagram::h_box(c(0.0), 0, 2)).unwrap();
        assert_eq!(z.data(), &[c(1.0), c(1.0), c(1.0), c(0.0)]);
        let hh = Diagram::compose(&Diagram::h_box(HLabel::default(), 1, 1), &Diagram::h_box(HLabel::default(), 1, 1))
            .unwrap();
        assert!(proportional(&evaluate(&hh).unwrap(), &Tensor::identity(1), 1e-12).unwrap());
    }

    #[test]
    fn plain_wires_and_loops() {
        assert_eq!(evaluate(&Diagram::identity(2)).unwrap(), Tensor::identity(2));
        let mut d = Diagram::new();
        let z = d.add_node(NodeKind::Z(Phase::zero()));
        d.add_edges(z, z, 1);
        assert_eq!(evaluate(&d).unwrap().data(), &[c(2.0)]);
        let mut e = Diagram::new();
        let h = e.add_node(NodeKind::H(HLabel::new(c(3.0))));
        e.add_edges(h, h, 1);
        // Σ_x H(x, x) = 1 + 3
        assert_eq!(evaluate(&e).unwrap().data(), &[c(4.0)]);
    }

    #[test]
    fn proportional_degenerate_cases() {
        let zero = Tensor::new(1, 0, vec![c(0.0), c(0.0)]);
        let one = Tensor::new(1, 0, vec![c(1.0), c(0.0)]);
        assert!(proportional(&zero, &zero, 1e-9).unwrap());
        assert!(!proportional(&zero, &one, 1e-9).unwrap());
        assert!(!proportional(&one, &zero, 1e-9).unwrap());
        let h = Tensor::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]]);
        let x = Tensor::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!(proportional(&h.scale(c(2.0)), &h, 1e-12).unwrap());
        assert!(!proportional(&h, &x, 1e-9).unwrap());
        assert!(proportional(&h, &Tensor::identity(2), 1e-9).is_err());
    }

    #[test]
    fn post_selection_effects() {
        let plus = Diagram::plus_state(1);
        let p = evaluate(&post_select(&plus, 0, Effect::Plus).unwrap()).unwrap();
        assert!((p.data()[0] - c(1.0)).norm() < 1e-12);
        let m = evaluate(&post_select(&plus, 0, Effect::Minus).unwrap()).unwrap();
        assert!(m.max_abs() < 1e-12);
        let id = Diagram::identity(1);
        let zero = evaluate(&post_select(&id, 0, Effect::Zero).unwrap()).unwrap();
        assert!(max_deviation(&zero, &Tensor::new(0, 1, vec![c(1.0), c(0.0)]), 1e-12).unwrap() < 1e-12);
        assert!(post_select(&id, 1, Effect::One).is_err());
    }

    #[test]
    fn capacity_is_enforced() {
        let d = Diagram::identity(8);
        assert_eq!(evaluate(&d).unwrap_err(), TensorError::Capacity(16));
    }

    #[test]
    fn dump_round_trip() {
        let t = evaluate(&Diagram::z_spider(Phase::pi_frac(1, 4), 1, 1)).unwrap();
        let back = Tensor::parse_dump(&t.dump()).unwrap();
        assert!(max_deviation(&t, &back, 0.0).unwrap() < 1e-15);
        assert!(t.dump().starts_with("shape 2 2\noutputs 1 inputs 1\n"));
    }
}
