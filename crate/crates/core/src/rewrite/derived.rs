//! Rules derivable from the generating set, used as single steps.

use std::collections::BTreeSet;

use num_complex::Complex64 as C64;

use super::{has_self_loop, ids_where, merge_into, white_neighbors, Match, RewriteRule};
use crate::diagram::{Diagram, HLabel, NodeId, NodeKind};
use crate::phase::Phase;

fn h_label(d: &Diagram, id: NodeId) -> Option<HLabel> {
    match d.kind(id) {
        Some(NodeKind::H(l)) => Some(*l),
        _ => None,
    }
}

fn spider_phase(d: &Diagram, id: NodeId) -> Phase {
    match d.kind(id) {
        Some(NodeKind::Z(p)) | Some(NodeKind::X(p)) => *p,
        _ => panic!("node {id} is not a spider"),
    }
}

/// Grey spiders joined by at least one edge fuse, adding phases.
pub struct GreySpiderFusion;

impl RewriteRule for GreySpiderFusion {
    fn name(&self) -> &'static str {
        "grey_spider_fusion"
    }

    fn find_matches(&self, d: &Diagram) -> Vec<Match> {
        d.edges()
            .into_iter()
            .filter(|&(a, b, _)| a != b && d.kind(a).unwrap().is_x() && d.kind(b).unwrap().is_x())
            .map(|(a, b, _)| Match::new(vec![a, b]))
            .collect()
    }

    fn rewrite(&self, d: &mut Diagram, m: &Match) {
        let (a, b) = (m.nodes[0], m.nodes[1]);
        let phase = spider_phase(d, a) + spider_phase(d, b);
        // One joining edge is absorbed by the fusion; further parallel
        // edges become loops, which are trivial on a spider.
        merge_into(d, b, a);
        d.remove_edges(a, a);
        *d.kind_mut(a).unwrap() = NodeKind::X(phase);
    }
}

/// A grey spider is a white spider with an unlabelled H-box on every leg.
pub struct ColorChange;

impl RewriteRule for ColorChange {
    fn name(&self) -> &'static str {
        "color_change"
    }

    fn find_matches(&self, d: &Diagram) -> Vec<Match> {
        ids_where(d, |k| k.is_x()).into_iter().map(|x| Match::new(vec![x])).collect()
    }

    fn rewrite(&self, d: &mut Diagram, m: &Match) {
        let x = m.nodes[0];
        let deg = d.degree(x);
        let nbrs: Vec<(NodeId, usize)> = d.neighbors(x).collect();
        let phase = spider_phase(d, x);
        for (n, _) in &nbrs {
            d.remove_edges(x, *n);
        }
        *d.kind_mut(x).unwrap() = NodeKind::Z(phase);
        for (n, k) in nbrs {
            for _ in 0..k {
                let h = d.add_node(NodeKind::H(HLabel::default()));
                d.add_edge(x, h);
                if n == x {
                    // Both ends of a loop get their own H-box.
                    let h2 = d.add_node(NodeKind::H(HLabel::default()));
                    d.add_edge(h, h2);
                    d.add_edge(h2, x);
                } else {
                    d.add_edge(h, n);
                }
            }
        }
        d.mul_scalar(C64::new(2f64.powf(-(deg as f64) / 2.0), 0.0));
    }
}

/// A NOT between an H-box `a` (otherwise on white spiders `X`) and a white
/// spider `u` is absorbed: `a` on `X` times `1/a` on `X ∪ {u}`. Requires
/// `a ≠ 0`.
pub struct NotIntoHBox;

impl RewriteRule for NotIntoHBox {
    fn name(&self) -> &'static str {
        "not_into_hbox"
    }

    fn find_matches(&self, d: &Diagram) -> Vec<Match> {
        let mut out = Vec::new();
        for n in ids_where(d, |k| k.is_not()) {
            if d.degree(n) != 2 || has_self_loop(d, n) || d.neighbors(n).any(|(_, k)| k != 1) {
                continue;
            }
            let ends = d.neighbor_ids(n);
            for (h, u) in [(ends[0], ends[1]), (ends[1], ends[0])] {
                let ok = h_label(d, h).is_some_and(|l| l.value().norm() > 0.0)
                    && d.kind(u).unwrap().is_z()
                    && white_neighbors(d, h, &[n]).is_some();
                if ok {
                    out.push(Match::new(vec![h, n, u]));
                }
            }
        }
        out
    }

    fn rewrite(&self, d: &mut Diagram, m: &Match) {
        let (h, n, u) = (m.nodes[0], m.nodes[1], m.nodes[2]);
        let label = h_label(d, h).unwrap();
        let inv = match label.exponent() {
            Some(e) => HLabel::exp(-e),
            None => HLabel::new(1.0 / label.value()),
        };
        let xs = white_neighbors(d, h, &[n]).unwrap();
        d.remove_node(n);
        let g = d.add_node(NodeKind::H(inv));
        for &x in &xs {
            d.add_edge(g, x);
        }
        d.add_edge(g, u);
    }
}

/// A phase-free white spider with a double edge to an H-box and one further
/// edge is a plain wire from the H-box.
pub struct CopyAndId;

impl RewriteRule for CopyAndId {
    fn name(&self) -> &'static str {
        "copy_and_id"
    }

    fn find_matches(&self, d: &Diagram) -> Vec<Match> {
        let mut out = Vec::new();
        for z in ids_where(d, |k| k.is_plain_z()) {
            if d.degree(z) != 3 || has_self_loop(d, z) {
                continue;
            }
            let nbrs: Vec<(NodeId, usize)> = d.neighbors(z).collect();
            if let [(a, ka), (b, kb)] = nbrs[..] {
                let (h, u) = if ka == 2 { (a, b) } else { (b, a) };
                if (ka == 2 || kb == 2) && h_label(d, h).is_some() {
                    out.push(Match::new(vec![z, h, u]));
                }
            }
        }
        out
    }

    fn rewrite(&self, d: &mut Diagram, m: &Match) {
        let (z, h, u) = (m.nodes[0], m.nodes[1], m.nodes[2]);
        d.remove_node(z);
        d.add_edge(h, u);
    }
}

/// Parallel edges between an H-box and a white spider collapse to one.
pub struct MultiLegElim;

impl RewriteRule for MultiLegElim {
    fn name(&self) -> &'static str {
        "multi_leg_elim"
    }

    fn find_matches(&self, d: &Diagram) -> Vec<Match> {
        d.edges()
            .into_iter()
            .filter_map(|(a, b, k)| {
                if k < 2 || a == b {
                    return None;
                }
                let (ka, kb) = (d.kind(a).unwrap(), d.kind(b).unwrap());
                if ka.is_h() && kb.is_z() {
                    Some(Match::new(vec![a, b]))
                } else if kb.is_h() && ka.is_z() {
                    Some(Match::new(vec![b, a]))
                } else {
                    None
                }
            })
            .collect()
    }

    fn rewrite(&self, d: &mut Diagram, m: &Match) {
        d.set_edge_multiplicity(m.nodes[0], m.nodes[1], 1);
    }
}

/// H-boxes on exactly the same white spiders combine, multiplying labels.
pub struct CombineHBoxes;

impl RewriteRule for CombineHBoxes {
    fn name(&self) -> &'static str {
        "combine_hboxes"
    }

    fn find_matches(&self, d: &Diagram) -> Vec<Match> {
        let hs: Vec<(NodeId, BTreeSet<NodeId>)> = ids_where(d, |k| k.is_h())
            .into_iter()
            .filter_map(|h| white_neighbors(d, h, &[]).map(|xs| (h, xs)))
            .collect();
        let mut out = Vec::new();
        for (i, (a, xa)) in hs.iter().enumerate() {
            for (b, xb) in &hs[i + 1..] {
                if xa == xb {
                    out.push(Match::new(vec![*a, *b]));
                }
            }
        }
        out
    }

    fn rewrite(&self, d: &mut Diagram, m: &Match) {
        let (a, b) = (m.nodes[0], m.nodes[1]);
        let label = h_label(d, a).unwrap().mul(&h_label(d, b).unwrap());
        d.remove_node(b);
        *d.kind_mut(a).unwrap() = NodeKind::H(label);
    }
}

/// A phase gadget: a phase-free grey hub whose neighbors are white spiders
/// joined by single edges, one of which (the leaf) has no other legs.
/// Returns `(leaf, targets)`, choosing the highest-numbered candidate leaf.
pub fn gadget_parts(d: &Diagram, hub: NodeId) -> Option<(NodeId, BTreeSet<NodeId>)> {
    if !d.kind(hub)?.is_plain_x() {
        return None;
    }
    let mut xs = white_neighbors(d, hub, &[])?;
    let leaf = *xs.iter().rev().find(|&&n| d.degree(n) == 1)?;
    xs.remove(&leaf);
    (!xs.is_empty()).then_some((leaf, xs))
}

/// Phase gadgets on the same targets combine, adding phases.
pub struct CombineGadgets;

impl RewriteRule for CombineGadgets {
    fn name(&self) -> &'static str {
        "combine_gadgets"
    }

    fn find_matches(&self, d: &Diagram) -> Vec<Match> {
        let gs: Vec<(NodeId, NodeId, BTreeSet<NodeId>)> = ids_where(d, |k| k.is_plain_x())
            .into_iter()
            .filter_map(|h| gadget_parts(d, h).map(|(l, t)| (h, l, t)))
            .collect();
        let mut out = Vec::new();
        for (i, (h1, l1, t1)) in gs.iter().enumerate() {
            for (h2, l2, t2) in &gs[i + 1..] {
                if t1 == t2 && !t1.contains(l2) && !t2.contains(l1) {
                    out.push(Match::new(vec![*h1, *l1, *h2, *l2]));
                }
            }
        }
        out
    }

    fn rewrite(&self, d: &mut Diagram, m: &Match) {
        let (l1, h2, l2) = (m.nodes[1], m.nodes[2], m.nodes[3]);
        let k = d.degree(h2) - 1;
        let phase = spider_phase(d, l1) + spider_phase(d, l2);
        d.remove_node(h2);
        d.remove_node(l2);
        *d.kind_mut(l1).unwrap() = NodeKind::Z(phase);
        d.mul_scalar(C64::new(2f64.powf((1.0 - k as f64) / 2.0), 0.0));
    }
}
