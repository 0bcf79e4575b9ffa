//! Seeded randomized soundness checks.
//!
//! For every rule a generator builds a small diagram containing the rule's
//! left-hand side, with random labels, phases and leg counts. The rule is
//! applied at one of its matches and both sides are evaluated by the oracle.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagram::{Diagram, HLabel, NodeId, NodeKind};
use crate::phase::Phase;
use crate::fourier::lemmas;
use crate::rewrite::{all_rules, RewriteRule};
use crate::tensor::{evaluate, max_deviation, proportional, proportionality_factor};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// A label from the mix `±1, ±i, e^{iπ/4}`, random unimodular, random
/// complex.
pub fn random_label(rng: &mut impl Rng) -> HLabel {
    match rng.gen_range(0..7) {
        0 => HLabel::new(C64::new(1.0, 0.0)),
        1 => HLabel::default(),
        2 => HLabel::exp(Phase::pi_frac(1, 2)),
        3 => HLabel::exp(Phase::pi_frac(3, 2)),
        4 => HLabel::exp(Phase::pi_frac(1, 4)),
        5 => HLabel::exp(Phase::radians(rng.gen_range(0.0..2.0 * PI))),
        _ => HLabel::new(C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))),
    }
}

/// A label that is not (numerically) zero.
pub fn random_nonzero_label(rng: &mut impl Rng) -> HLabel {
    loop {
        let l = random_label(rng);
        if l.value().norm() > 1e-3 {
            return l;
        }
    }
}

/// Exact multiples of π/4, random reals, and occasionally complex phases.
pub fn random_phase(rng: &mut impl Rng) -> Phase {
    match rng.gen_range(0..4) {
        0 | 1 => Phase::pi_frac(rng.gen_range(0..8), 4),
        2 => Phase::radians(rng.gen_range(0.0..2.0 * PI)),
        _ => Phase::complex(C64::new(rng.gen_range(0.0..2.0 * PI), rng.gen_range(-0.5..0.5))),
    }
}

/// Builder shorthand for instance generators.
struct Gen<'a, R: Rng> {
    d: Diagram,
    rng: &'a mut R,
}

impl<'a, R: Rng> Gen<'a, R> {
    fn new(rng: &'a mut R) -> Self {
        Self { d: Diagram::new(), rng }
    }

    fn node(&mut self, k: NodeKind) -> NodeId {
        self.d.add_node(k)
    }

    fn edge(&mut self, a: NodeId, b: NodeId) {
        self.d.add_edge(a, b);
    }

    /// A boundary leg on `n`, randomly an input or an output.
    fn leg(&mut self, n: NodeId) {
        let b = if self.rng.gen_bool(0.5) { self.d.add_input() } else { self.d.add_output() };
        self.d.add_edge(n, b);
    }

    fn legs(&mut self, n: NodeId, k: usize) {
        for _ in 0..k {
            self.leg(n);
        }
    }

    /// A white spider with a random phase and one boundary leg.
    fn white_with_leg(&mut self) -> NodeId {
        let p = random_phase(self.rng);
        let z = self.node(NodeKind::Z(p));
        self.leg(z);
        z
    }

    fn count(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    fn finish(self) -> Diagram {
        self.d
    }
}

/// A diagram containing an instance of `rule`'s left-hand side, with leg
/// counts bounded by `size`.
pub fn rule_instance(rule: &str, size: usize, rng: &mut impl Rng) -> Option<Diagram> {
    let s = size.max(1);
    let mut g = Gen::new(rng);
    match rule {
        "zs1" => {
            let (m, n) = (g.count(0, s), g.count(0, s));
            let pa = random_phase(g.rng);
            let pb = random_phase(g.rng);
            let a = g.node(NodeKind::Z(pa));
            let b = g.node(NodeKind::Z(pb));
            let k = g.count(1, 2);
            g.d.add_edges(a, b, k);
            if g.rng.gen_bool(0.3) {
                g.d.add_edges(b, b, 1);
            }
            g.legs(a, m);
            g.legs(b, n);
        }
        "zs2" => {
            let z = g.node(NodeKind::Z(Phase::zero()));
            let l = random_label(g.rng);
            let h = g.node(NodeKind::H(l));
            let p = random_phase(g.rng);
            let x = g.node(NodeKind::X(p));
            g.edge(x, z);
            g.edge(z, h);
            let (m, n) = (g.count(0, s), g.count(1, s));
            g.legs(x, m);
            g.legs(h, n);
        }
        "hs1" => {
            let la = random_label(g.rng);
            let a = g.node(NodeKind::H(la));
            let mid = g.node(NodeKind::H(HLabel::default()));
            let b = g.node(NodeKind::H(HLabel::default()));
            g.edge(a, mid);
            g.edge(mid, b);
            let (m, n) = (g.count(0, s), g.count(0, s));
            g.legs(a, m);
            g.legs(b, n);
        }
        "hs2" => {
            let a = g.node(NodeKind::H(HLabel::default()));
            let b = g.node(NodeKind::H(HLabel::default()));
            let p = random_phase(g.rng);
            let z = g.node(NodeKind::Z(p));
            g.edge(a, b);
            g.edge(b, z);
            g.leg(a);
            let n = g.count(1, s);
            g.legs(z, n);
        }
        "ba1" => {
            let x = g.node(NodeKind::X(Phase::zero()));
            let z = g.node(NodeKind::Z(Phase::zero()));
            g.edge(x, z);
            let (m, n) = (g.count(0, s), g.count(0, s));
            g.legs(x, m);
            g.legs(z, n);
        }
        "ba2" => {
            let h = g.node(NodeKind::H(HLabel::default()));
            let x = g.node(NodeKind::X(Phase::zero()));
            g.edge(h, x);
            let (m, n) = (g.count(0, s), g.count(0, s));
            g.legs(h, m);
            g.legs(x, n);
        }
        "multiply" => {
            let p = random_phase(g.rng);
            let z = g.node(NodeKind::Z(p));
            let la = random_label(g.rng);
            let lb = random_label(g.rng);
            let a = g.node(NodeKind::H(la));
            let b = g.node(NodeKind::H(lb));
            g.edge(z, a);
            g.edge(z, b);
            let m = g.count(1, s);
            g.legs(z, m);
        }
        "unit" => {
            let p = random_phase(g.rng);
            let z = g.node(NodeKind::Z(p));
            let h = g.node(NodeKind::H(HLabel::new(C64::new(1.0, 0.0))));
            g.edge(z, h);
            let m = g.count(1, s);
            g.legs(z, m);
        }
        "intro" => {
            let la = random_label(g.rng);
            let h = g.node(NodeKind::H(la));
            let m = g.count(0, s);
            for _ in 0..m {
                let z = g.white_with_leg();
                g.edge(h, z);
            }
            g.white_with_leg();
        }
        "average" => {
            let la = random_label(g.rng);
            let lb = random_label(g.rng);
            let a = g.node(NodeKind::H(la));
            let b = g.node(NodeKind::H(lb));
            let m = g.count(0, s);
            for _ in 0..m {
                let z = g.white_with_leg();
                g.edge(a, z);
                g.edge(b, z);
            }
            let v = g.node(NodeKind::Z(Phase::zero()));
            let n = g.node(NodeKind::X(Phase::pi()));
            g.edge(a, v);
            g.edge(v, n);
            g.edge(n, b);
        }
        "ortho" => {
            let la = random_label(g.rng);
            let lb = random_nonzero_label(g.rng);
            let a = g.node(NodeKind::H(la));
            let b = g.node(NodeKind::H(lb));
            let m = g.count(0, s);
            for _ in 0..m {
                let z = g.white_with_leg();
                g.edge(a, z);
                g.edge(b, z);
            }
            let y = g.white_with_leg();
            let n = g.node(NodeKind::X(Phase::pi()));
            g.edge(a, y);
            g.edge(b, n);
            g.edge(n, y);
        }
        "grey_spider_fusion" => {
            let pa = random_phase(g.rng);
            let pb = random_phase(g.rng);
            let a = g.node(NodeKind::X(pa));
            let b = g.node(NodeKind::X(pb));
            let k = g.count(1, 2);
            g.d.add_edges(a, b, k);
            let (m, n) = (g.count(0, s), g.count(0, s));
            g.legs(a, m);
            g.legs(b, n);
        }
        "color_change" => {
            let p = random_phase(g.rng);
            let x = g.node(NodeKind::X(p));
            let m = g.count(0, s);
            g.legs(x, m);
            if g.rng.gen_bool(0.3) {
                g.d.add_edges(x, x, 1);
            }
        }
        "not_into_hbox" => {
            let la = random_nonzero_label(g.rng);
            let h = g.node(NodeKind::H(la));
            let m = g.count(0, s);
            for _ in 0..m {
                let z = g.white_with_leg();
                g.edge(h, z);
            }
            let n = g.node(NodeKind::X(Phase::pi()));
            let u = g.white_with_leg();
            g.edge(h, n);
            g.edge(n, u);
        }
        "copy_and_id" => {
            let la = random_label(g.rng);
            let h = g.node(NodeKind::H(la));
            let z = g.node(NodeKind::Z(Phase::zero()));
            g.d.add_edges(h, z, 2);
            let m = g.count(0, s);
            g.legs(h, m);
            let p = random_phase(g.rng);
            let u = g.node(NodeKind::Z(p));
            g.edge(z, u);
            let n = g.count(1, s);
            g.legs(u, n);
        }
        "multi_leg_elim" => {
            let la = random_label(g.rng);
            let h = g.node(NodeKind::H(la));
            let z = g.white_with_leg();
            let k = g.count(2, 3);
            g.d.add_edges(h, z, k);
            let m = g.count(0, s);
            g.legs(h, m);
        }
        "combine_hboxes" => {
            let la = random_label(g.rng);
            let lb = random_label(g.rng);
            let a = g.node(NodeKind::H(la));
            let b = g.node(NodeKind::H(lb));
            let m = g.count(1, s);
            for _ in 0..m {
                let z = g.white_with_leg();
                g.edge(a, z);
                g.edge(b, z);
            }
        }
        "combine_gadgets" => {
            let m = g.count(1, s);
            let targets: Vec<NodeId> = (0..m).map(|_| g.white_with_leg()).collect();
            for _ in 0..2 {
                let hub = g.node(NodeKind::X(Phase::zero()));
                let p = random_phase(g.rng);
                let leaf = g.node(NodeKind::Z(p));
                g.edge(hub, leaf);
                for &t in &targets {
                    g.edge(hub, t);
                }
            }
        }
        _ => return None,
    }
    Some(g.finish())
}

/// A random open diagram: `nodes` generators of random kinds joined by
/// random edges, with the given boundary counts.
pub fn random_diagram(rng: &mut impl Rng, inputs: usize, outputs: usize, nodes: usize) -> Diagram {
    let mut d = Diagram::new();
    let ids: Vec<NodeId> = (0..nodes.max(1))
        .map(|_| {
            let k = match rng.gen_range(0..3) {
                0 => NodeKind::Z(random_phase(rng)),
                1 => NodeKind::X(random_phase(rng)),
                _ => NodeKind::H(random_label(rng)),
            };
            d.add_node(k)
        })
        .collect();
    // A random spanning tree keeps most diagrams connected.
    for i in 1..ids.len() {
        let j = rng.gen_range(0..i);
        d.add_edge(ids[i], ids[j]);
    }
    let extra = rng.gen_range(0..=ids.len());
    for _ in 0..extra {
        let a = *ids.choose(rng).unwrap();
        let b = *ids.choose(rng).unwrap();
        d.add_edge(a, b);
    }
    for _ in 0..inputs {
        let b = d.add_input();
        d.add_edge(b, *ids.choose(rng).unwrap());
    }
    for _ in 0..outputs {
        let b = d.add_output();
        d.add_edge(b, *ids.choose(rng).unwrap());
    }
    d.set_scalar(C64::new(rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0)));
    d
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub instances: usize,
    pub passed: usize,
    /// Largest relative deviation from proportionality seen.
    pub max_deviation: f64,
    /// Whether every instance also matched with scalar exactly 1. Not
    /// tracked for lemma checks, which hold up to a scalar.
    pub exact_scalar: Option<bool>,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.passed == self.instances && self.instances > 0
    }
}

/// Check one rule on `instances` random diagrams.
pub fn check_rule(rule: &dyn RewriteRule, size: usize, instances: usize, tol: f64, rng: &mut impl Rng) -> CheckReport {
    let mut rep = CheckReport {
        name: rule.name().to_string(),
        instances,
        passed: 0,
        max_deviation: 0.0,
        exact_scalar: Some(true),
        failures: Vec::new(),
    };
    for i in 0..instances {
        let Some(lhs) = rule_instance(rule.name(), size, rng) else {
            rep.failures.push(format!("instance {i}: no generator"));
            continue;
        };
        let matches = rule.find_matches(&lhs);
        let Some(m) = matches.choose(rng) else {
            rep.failures.push(format!("instance {i}: generated instance has no match"));
            continue;
        };
        let rhs = match rule.apply(&lhs, m) {
            Ok(r) => r,
            Err(e) => {
                rep.failures.push(format!("instance {i}: {e}"));
                continue;
            }
        };
        if let Err(e) = rhs.validate() {
            rep.failures.push(format!("instance {i}: invalid result: {e}"));
            continue;
        }
        let (a, b) = match (evaluate(&lhs), evaluate(&rhs)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                rep.failures.push(format!("instance {i}: {e}"));
                continue;
            }
        };
        let dev = max_deviation(&b, &a, tol).unwrap_or(f64::INFINITY);
        rep.max_deviation = rep.max_deviation.max(dev);
        if dev <= tol {
            rep.passed += 1;
            if let Some(l) = proportionality_factor(&b, &a) {
                if (l - 1.0).norm() > 1e-8 {
                    rep.exact_scalar = Some(false);
                }
            }
        } else {
            rep.failures.push(format!("instance {i}: deviation {dev:.3e} at match {m}"));
        }
    }
    rep
}

/// Check every rule (or the one named) with a fixed seed.
pub fn check_rules(only: Option<&str>, size: usize, instances: usize, tol: f64, seed: u64) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for rule in all_rules() {
        if only.is_some_and(|n| n != rule.name()) {
            continue;
        }
        // Each rule gets its own stream so results do not depend on which
        // rules were selected.
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ hash_name(rule.name()));
        out.push(check_rule(rule.as_ref(), size, instances, tol, &mut rng));
    }
    out
}

/// Check the lemma and proposition identities (or the one named), each on
/// `instances` random pairs with up to `size` wires.
pub fn check_lemmas(only: Option<&str>, size: usize, instances: usize, tol: f64, seed: u64) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for &name in lemmas::LEMMAS {
        if only.is_some_and(|n| n != name) {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ hash_name(name));
        let mut rep = CheckReport {
            name: name.to_string(),
            instances,
            passed: 0,
            max_deviation: 0.0,
            exact_scalar: None,
            failures: Vec::new(),
        };
        for i in 0..instances {
            let n = rng.gen_range(1..=size.max(1));
            let (a, b) = lemmas::instances(name, n, &mut rng).expect("listed lemma");
            match (evaluate(&a), evaluate(&b)) {
                (Ok(ta), Ok(tb)) => {
                    let dev = max_deviation(&ta, &tb, tol).unwrap_or(f64::INFINITY);
                    rep.max_deviation = rep.max_deviation.max(dev);
                    if proportional(&ta, &tb, tol).unwrap_or(false) {
                        rep.passed += 1;
                    } else {
                        rep.failures.push(format!("instance {i} (n={n}): deviation {dev:.3e}"));
                    }
                }
                (Err(e), _) | (_, Err(e)) => rep.failures.push(format!("instance {i}: {e}")),
            }
        }
        out.push(rep);
    }
    out
}

/// Every rule and lemma check, rules first, each group ordered by name.
pub fn check_all(only: Option<&str>, size: usize, instances: usize, tol: f64, seed: u64) -> Vec<CheckReport> {
    let mut rules = check_rules(only, size, instances, tol, seed);
    rules.sort_by(|a, b| a.name.cmp(&b.name));
    let mut lemmas = check_lemmas(only, size, instances, tol, seed);
    lemmas.sort_by(|a, b| a.name.cmp(&b.name));
    rules.extend(lemmas);
    rules
}

/// Whether `name` names a rule or a lemma check.
pub fn is_check_name(name: &str) -> bool {
    all_rules().iter().any(|r| r.name() == name) || lemmas::LEMMAS.contains(&name)
}

fn hash_name(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}
