//! The generating rules of the ZH-calculus, at fixed arity.
//!
//! Labels and phases are arbitrary complex numbers unless a rule states a
//! side condition. Scalars are tracked exactly.

use num_complex::Complex64 as C64;

use super::{has_self_loop, ids_where, merge_into, white_neighbors, Match, RewriteRule};
use crate::diagram::{Diagram, HLabel, NodeId, NodeKind};
use crate::phase::Phase;

fn pow2(e: f64) -> C64 {
    C64::new(2f64.powf(e), 0.0)
}

fn h_label(d: &Diagram, id: NodeId) -> Option<HLabel> {
    match d.kind(id) {
        Some(NodeKind::H(l)) => Some(*l),
        _ => None,
    }
}

fn z_phase(d: &Diagram, id: NodeId) -> Option<Phase> {
    match d.kind(id) {
        Some(NodeKind::Z(p)) => Some(*p),
        _ => None,
    }
}

/// Neighbors of `id` other than `except`, one entry per unit of multiplicity.
fn legs_except(d: &Diagram, id: NodeId, except: NodeId) -> Vec<NodeId> {
    d.neighbors(id)
        .filter(|&(n, _)| n != except)
        .flat_map(|(n, k)| std::iter::repeat_n(n, k))
        .collect()
}

/// The other endpoint of a degree-2 node with two distinct single edges.
fn other_end(d: &Diagram, id: NodeId, from: NodeId) -> Option<NodeId> {
    if d.degree(id) != 2 || d.multiplicity(id, from) != 1 || has_self_loop(d, id) {
        return None;
    }
    d.neighbor_ids(id).into_iter().find(|&n| n != from)
}

/// (ZS1) Adjacent white spiders fuse, adding their phases.
pub struct Zs1;

impl RewriteRule for Zs1 {
    fn name(&self) -> &'static str {
        "zs1"
    }

    fn find_matches(&self, d: &Diagram) -> Vec<Match> {
        d.edges()
            .into_iter()
            .filter(|&(a, b, _)| a != b && d.kind(a).unwrap().is_z() && d.kind(b).unwrap().is_z())
            .map(|(a, b, _)| Match::new(vec![a, b]))
            .collect()
    }

    fn rewrite(&self, d: &mut Diagram, m: &Match) {
        let (a, b) = (m.nodes[0], m.nodes[1]);
        let phase = z_phase(d, a).unwrap() + z_phase(d, b).unwrap();
        merge_into(d, b, a);
        // A loop on a white spider is a plain wire back into itself.
        d.remove_edges(a, a);
        *d.kind_mut(a).unwrap() = NodeKind::Z(phase);
    }
}

/// (ZS2) A phase-free white spider with two legs is a wire.
pub struct Zs2;

impl Zs2 {
    /// The inverse direction: put a phase-free white spider on the edge
    /// `a`–`b`.
    pub fn introduce(d: &mut Diagram, a: NodeId, b: NodeId) -> Option<NodeId> {
        if d.multiplicity(a, b) == 0 || a == b {
            return None;
        }
        let k = d.multiplicity(a, b);
        d.set_edge_multiplicity(a, b, k - 1);
        let z = d.add_node(NodeKind::Z(Phase::zero()));
        d.add_edge(a, z);
        d.add_edge(z, b);
        Some(z)
    }
}

impl RewriteRule for Zs2 {
    fn name(&self) -> &'static str {
        "zs2"
    }

    fn direction(&self) -> super::Direction {
        super::Direction::Both
    }

    fn find_matches(&self, d: &Diagram) -> Vec<Match> {
        ids_where(d, |k| k.is_plain_z())
            .into_iter()
            .filter(|&z| d.degree(z) == 2 && !has_self_loop(d, z))
            .map(|z| Match::new(vec![z]))
            .collect()
    }

    fn rewrite(&self, d: &mut Diagram, m: &Match) {
        let z = m.nodes[0];
        let ends = legs_except(d, z, z);
        d.remove_node(z);
        d.add_edge(ends[0], ends[1]);
    }
}

/// (HS1) An H-box joined through an unlabelled 2-ary H-box to an unlabelled
/// H-box fuses with it.
pub struct Hs1;

impl RewriteRule for Hs1 {
    fn name(&self) -> &'static str {
        "hs1"
    }

    fn find_matches(&self, d: &Diagram) -> Vec<Match> {
        let mut out = Vec::new();
        for mid in ids_where(d, |k| matches!(k, NodeKind::H(l) if l.is_default())) {
            if d.degree(mid) != 2 || has_self_loop(d, mid) || d.neighbors(mid).any(|(_, k)| k != 1) {
                continue;
            }
            let ends = d.neighbor_ids(mid);
            for (a, b) in [(ends[0], ends[1]), (ends[1], ends[0])] {
                let a_ok = h_label(d, a).is_some();
                let b_ok = h_label(d, b).is_some_and(|l| l.is_default());
                if a_ok && b_ok {
                    out.push(Match::new(vec![a, mid, b]));
                }
            }
        }
        out
    }

    fn rewrite(&self, d: &mut Diagram, m: &Match) {
        let (a, mid, b) = (m.nodes[0], m.nodes[1], m.nodes[2]);
        d.remove_node(mid);
        merge_into(d, b, a);
        d.mul_scalar(C64::new(2.0, 0.0));
    }
}

/// (HS2) Two unlabelled 2-ary H-boxes in a row cancel.
pub struct Hs2;

impl RewriteRule for Hs2 {
    fn name(&self) -> &'static str {
        "hs2"
    }

    fn find_matches(&self, d: &Diagram) -> Vec<Match> {
        let hs = ids_where(d, |k| matches!(k, NodeKind::H(l) if l.is_default()));
        let mut out = Vec::new();
        for &a in &hs {
            for &b in &hs {
                if a < b
                    && d.multiplicity(a, b) == 1
                    && other_end(d, a, b).is_some()
                    && other_end(d, b, a).is_some()
                {
                    out.push(Match::new(vec![a, b]));
                }
            }
        }
        out
    }

    fn rewrite(&self, d: &mut Diagram, m: &Match) {
        let (a, b) = (m.nodes[0], m.nodes[1]);
        let p = other_end(d, a, b).unwrap();
        let q = other_end(d, b, a).unwrap();
        d.remove_node(a);
        d.remove_node(b);
        d.add_edge(p, q);
        d.mul_scalar(C64::new(2.0, 0.0));
    }
}

/// (BA1) A phase-free grey spider joined by one edge to a phase-free white
/// spider becomes the complete bipartite graph of white spiders (one per
/// grey leg) and grey spiders (one per white leg).
pub struct Ba1;

impl RewriteRule for Ba1 {
    fn name(&self) -> &'static str {
        "ba1"
    }

    fn find_matches(&self, d: &Diagram) -> Vec<Match> {
        d.edges()
            .into_iter()
            .filter_map(|(a, b, k)| {
                let (ka, kb) = (d.kind(a).unwrap(), d.kind(b).unwrap());
                let (x, z) = if ka.is_plain_x() && kb.is_plain_z() {
                    (a, b)
                } else if kb.is_plain_x() && ka.is_plain_z() {
                    (b, a)
                } else {
                    return None;
                };
                (k == 1 && !has_self_loop(d, x) && !has_self_loop(d, z)).then(|| Match::new(vec![x, z]))
            })
            .collect()
    }

    fn rewrite(&self, d: &mut Diagram, m: &Match) {
        let (x, z) = (m.nodes[0], m.nodes[1]);
        let x_legs = legs_except(d, x, z);
        let z_legs = legs_except(d, z, x);
        d.remove_node(x);
        d.remove_node(z);
        let whites: Vec<NodeId> = x_legs
            .iter()
            .map(|&n| {
                let w = d.add_node(NodeKind::Z(Phase::zero()));
                d.add_edge(w, n);
                w
            })
            .collect();
        for &n in &z_legs {
            let g = d.add_node(NodeKind::X(Phase::zero()));
            d.add_edge(g, n);
            for &w in &whites {
                d.add_edge(w, g);
            }
        }
        let (m, n) = (x_legs.len() as f64, z_legs.len() as f64);
        d.mul_scalar(pow2((1.0 - m) * (1.0 - n) / 2.0));
    }
}

/// (BA2) An unlabelled H-box joined by one edge to a phase-free grey spider
/// becomes the complete bipartite graph of white spiders (one per H-box leg)
/// and unlabelled H-boxes (one per grey leg).
pub struct Ba2;

impl RewriteRule for Ba2 {
    fn name(&self) -> &'static str {
        "ba2"
    }

    fn find_matches(&self, d: &Diagram) -> Vec<Match> {
        d.edges()
            .into_iter()
            .filter_map(|(a, b, k)| {
                let is_h = |id: NodeId| h_label(d, id).is_some_and(|l| l.is_default());
                let (h, x) = if is_h(a) && d.kind(b).unwrap().is_plain_x() {
                    (a, b)
                } else if is_h(b) && d.kind(a).unwrap().is_plain_x() {
                    (b, a)
                } else {
                    return None;
                };
                (k == 1 && !has_self_loop(d, h) && !has_self_loop(d, x)).then(|| Match::new(vec![h, x]))
            })
            .collect()
    }

    fn rewrite(&self, d: &mut Diagram, m: &Match) {
        let (h, x) = (m.nodes[0], m.nodes[1]);
        let h_legs = legs_except(d, h, x);
        let x_legs = legs_except(d, x, h);
        d.remove_node(h);
        d.remove_node(x);
        let whites: Vec<NodeId> = h_legs
            .iter()
            .map(|&n| {
                let w = d.add_node(NodeKind::Z(Phase::zero()));
                d.add_edge(w, n);
                w
            })
            .collect();
        for &n in &x_legs {
            let b = d.add_node(NodeKind::H(HLabel::default()));
            d.add_edge(b, n);
            for &w in &whites {
                d.add_edge(w, b);
            }
        }
        d.mul_scalar(pow2((1.0 - x_legs.len() as f64) / 2.0));
    }
}

/// (M) Two one-legged H-boxes on the same white spider multiply.
pub struct Multiply;

impl RewriteRule for Multiply {
    fn name(&self) -> &'static str {
        "multiply"
    }

    fn find_matches(&self, d: &Diagram) -> Vec<Match> {
        let mut out = Vec::new();
        for z in ids_where(d, |k| k.is_z()) {
            let leaves: Vec<NodeId> = d
                .neighbors(z)
                .filter(|&(n, k)| k == 1 && n != z && h_label(d, n).is_some() && d.degree(n) == 1)
                .map(|(n, _)| n)
                .collect();
            for (i, &a) in leaves.iter().enumerate() {
                for &b in &leaves[i + 1..] {
                    out.push(Match::new(vec![z, a, b]));
                }
            }
        }
        out
    }

    fn rewrite(&self, d: &mut Diagram, m: &Match) {
        let (a, b) = (m.nodes[1], m.nodes[2]);
        let label = h_label(d, a).unwrap().mul(&h_label(d, b).unwrap());
        d.remove_node(b);
        *d.kind_mut(a).unwrap() = NodeKind::H(label);
    }
}

/// (U) A one-legged H-box labelled 1 is a one-legged white spider.
pub struct Unit;

impl RewriteRule for Unit {
    fn name(&self) -> &'static str {
        "unit"
    }

    fn find_matches(&self, d: &Diagram) -> Vec<Match> {
        ids_where(d, |k| matches!(k, NodeKind::H(l) if l.is_one()))
            .into_iter()
            .filter(|&h| d.degree(h) == 1)
            .map(|h| Match::new(vec![h]))
            .collect()
    }

    fn rewrite(&self, d: &mut Diagram, m: &Match) {
        *d.kind_mut(m.nodes[0]).unwrap() = NodeKind::Z(Phase::zero());
    }
}

/// (I) An H-box on white spiders `X` splits along a further white spider
/// `y`: one copy on `X ∪ {y}`, one on `X` plus a NOT into `y`.
pub struct Intro;

impl RewriteRule for Intro {
    fn name(&self) -> &'static str {
        "intro"
    }

    fn find_matches(&self, d: &Diagram) -> Vec<Match> {
        let mut out = Vec::new();
        let zs = ids_where(d, |k| k.is_z());
        for h in ids_where(d, |k| k.is_h()) {
            let Some(xs) = white_neighbors(d, h, &[]) else { continue };
            for &y in &zs {
                if !xs.contains(&y) {
                    out.push(Match::new(vec![h, y]));
                }
            }
        }
        out
    }

    fn rewrite(&self, d: &mut Diagram, m: &Match) {
        let (h, y) = (m.nodes[0], m.nodes[1]);
        let label = *d.kind(h).unwrap();
        let xs = white_neighbors(d, h, &[]).unwrap();
        d.add_edge(h, y);
        let twin = d.add_node(label);
        for &x in &xs {
            d.add_edge(twin, x);
        }
        let not = d.add_node(NodeKind::X(Phase::pi()));
        d.add_edge(twin, not);
        d.add_edge(not, y);
    }
}

/// (A) H-boxes `a` and `b` on the same white spiders `X`, whose remaining
/// legs meet at a phase-free white spider with a NOT on `b`'s side, average
/// to one H-box labelled `(a+b)/2` on `X`.
pub struct Average;

impl RewriteRule for Average {
    fn name(&self) -> &'static str {
        "average"
    }

    fn find_matches(&self, d: &Diagram) -> Vec<Match> {
        let mut out = Vec::new();
        for v in ids_where(d, |k| k.is_plain_z()) {
            if d.degree(v) != 2 || has_self_loop(d, v) || d.neighbors(v).any(|(_, k)| k != 1) {
                continue;
            }
            let ends = d.neighbor_ids(v);
            for (a, n) in [(ends[0], ends[1]), (ends[1], ends[0])] {
                if h_label(d, a).is_none() || !d.kind(n).unwrap().is_not() {
                    continue;
                }
                let Some(b) = other_end(d, n, v) else { continue };
                if b == a || h_label(d, b).is_none() || d.multiplicity(b, n) != 1 {
                    continue;
                }
                let (Some(xa), Some(xb)) = (white_neighbors(d, a, &[v]), white_neighbors(d, b, &[n])) else {
                    continue;
                };
                if xa == xb && !xa.contains(&v) {
                    out.push(Match::new(vec![v, a, n, b]));
                }
            }
        }
        out
    }

    fn rewrite(&self, d: &mut Diagram, m: &Match) {
        let (v, a, n, b) = (m.nodes[0], m.nodes[1], m.nodes[2], m.nodes[3]);
        let avg = (h_label(d, a).unwrap().value() + h_label(d, b).unwrap().value()) / 2.0;
        d.remove_node(v);
        d.remove_node(n);
        d.remove_node(b);
        *d.kind_mut(a).unwrap() = NodeKind::H(HLabel::new(avg));
        d.mul_scalar(C64::new(2.0, 0.0));
    }
}

/// (O) H-boxes `a` on `X ∪ {y}` and `b` on `X` plus a NOT into `y` become
/// `b` on `X` and `a/b` on `X ∪ {y}`. Requires `b ≠ 0`.
pub struct Ortho;

impl RewriteRule for Ortho {
    fn name(&self) -> &'static str {
        "ortho"
    }

    fn find_matches(&self, d: &Diagram) -> Vec<Match> {
        let mut out = Vec::new();
        for n in ids_where(d, |k| k.is_not()) {
            if d.degree(n) != 2 || has_self_loop(d, n) || d.neighbors(n).any(|(_, k)| k != 1) {
                continue;
            }
            let ends = d.neighbor_ids(n);
            for (b, y) in [(ends[0], ends[1]), (ends[1], ends[0])] {
                let Some(lb) = h_label(d, b) else { continue };
                if lb.value().norm() == 0.0 || !d.kind(y).unwrap().is_z() {
                    continue;
                }
                let Some(xb) = white_neighbors(d, b, &[n]) else { continue };
                if xb.contains(&y) {
                    continue;
                }
                for a in d.neighbor_ids(y) {
                    if a == b || h_label(d, a).is_none() || d.multiplicity(a, y) != 1 {
                        continue;
                    }
                    if white_neighbors(d, a, &[y]).is_some_and(|xa| xa == xb) {
                        out.push(Match::new(vec![a, b, n, y]));
                    }
                }
            }
        }
        out
    }

    fn rewrite(&self, d: &mut Diagram, m: &Match) {
        let (a, b, n) = (m.nodes[0], m.nodes[1], m.nodes[2]);
        let (la, lb) = (h_label(d, a).unwrap(), h_label(d, b).unwrap());
        let ratio = match (la.exponent(), lb.exponent()) {
            (Some(x), Some(y)) => HLabel::exp(x - y),
            _ => HLabel::new(la.value() / lb.value()),
        };
        d.remove_node(n);
        *d.kind_mut(a).unwrap() = NodeKind::H(ratio);
    }
}
