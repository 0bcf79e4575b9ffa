//! Local rewrites on diagrams.
//!
//! Each rule finds every place it applies ([`RewriteRule::find_matches`])
//! and rewrites one of them ([`RewriteRule::apply`]). Rules keep the global
//! scalar exact, so a rewritten diagram evaluates to the same tensor, not
//! merely a proportional one.

mod derived;
mod zh;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::diagram::{Diagram, NodeId, NodeKind};

pub use derived::{
    gadget_parts, ColorChange, CombineGadgets, CombineHBoxes, CopyAndId, GreySpiderFusion, MultiLegElim,
    NotIntoHBox,
};
pub use zh::{Average, Ba1, Ba2, Hs1, Hs2, Intro, Multiply, Ortho, Unit, Zs1, Zs2};

/// Default cap on rewrite steps for [`apply_all`].
pub const DEFAULT_STEP_CAP: usize = 10_000;

#[derive(Debug, Error, PartialEq)]
pub enum RewriteError {
    #[error("stale match for rule {rule} at nodes {nodes:?}")]
    Stale { rule: &'static str, nodes: Vec<NodeId> },
    #[error("rule {rule} still matching after {steps} steps")]
    StepCap { rule: &'static str, steps: usize },
    #[error("unknown rule '{0}'")]
    UnknownRule(String),
}

/// The nodes a rule's left-hand side is bound to, in a rule-specific order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Match {
    pub nodes: Vec<NodeId>,
}

impl Match {
    pub fn new(nodes: Vec<NodeId>) -> Self {
        Self { nodes }
    }
}

impl fmt::Display for Match {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.nodes)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    /// The rule also has an inverse exposed as a separate entry point.
    Both,
}

pub trait RewriteRule: Send + Sync {
    fn name(&self) -> &'static str;

    fn direction(&self) -> Direction {
        Direction::Forward
    }

    /// Every match in `d`, in a deterministic order.
    fn find_matches(&self, d: &Diagram) -> Vec<Match>;

    /// Rewrite in place. `m` must be a current match.
    fn rewrite(&self, d: &mut Diagram, m: &Match);

    /// Rewrite a copy of `d` at `m`, rejecting matches that no longer hold.
    fn apply(&self, d: &Diagram, m: &Match) -> Result<Diagram, RewriteError> {
        if !self.find_matches(d).contains(m) {
            return Err(RewriteError::Stale { rule: self.name(), nodes: m.nodes.clone() });
        }
        let mut out = d.clone();
        self.rewrite(&mut out, m);
        Ok(out)
    }
}

/// Every rule: the eleven ZH rules, then the derived ones.
pub fn all_rules() -> Vec<Box<dyn RewriteRule>> {
    let mut v = zh_rules();
    v.extend(derived_rules());
    v
}

pub fn zh_rules() -> Vec<Box<dyn RewriteRule>> {
    vec![
        Box::new(Zs1),
        Box::new(Zs2),
        Box::new(Hs1),
        Box::new(Hs2),
        Box::new(Ba1),
        Box::new(Ba2),
        Box::new(Multiply),
        Box::new(Unit),
        Box::new(Intro),
        Box::new(Average),
        Box::new(Ortho),
    ]
}

pub fn derived_rules() -> Vec<Box<dyn RewriteRule>> {
    vec![
        Box::new(GreySpiderFusion),
        Box::new(ColorChange),
        Box::new(NotIntoHBox),
        Box::new(CopyAndId),
        Box::new(MultiLegElim),
        Box::new(CombineHBoxes),
        Box::new(CombineGadgets),
    ]
}

pub fn rule_by_name(name: &str) -> Result<Box<dyn RewriteRule>, RewriteError> {
    all_rules()
        .into_iter()
        .find(|r| r.name() == name)
        .ok_or_else(|| RewriteError::UnknownRule(name.to_string()))
}

#[derive(Clone, Debug)]
pub struct Policy {
    pub max_steps: usize,
}

impl Default for Policy {
    fn default() -> Self {
        Self { max_steps: DEFAULT_STEP_CAP }
    }
}

#[derive(Clone, Debug)]
pub struct Rewritten {
    pub diagram: Diagram,
    pub steps: usize,
    /// One line per step: `step k: rule NAME at nodes [...]`.
    pub trace: Vec<String>,
}

/// Apply `rule` at its first match until none remain, re-matching after
/// every step.
pub fn apply_all(d: &Diagram, rule: &dyn RewriteRule, policy: &Policy) -> Result<Rewritten, RewriteError> {
    let mut cur = d.clone();
    let mut trace = Vec::new();
    for step in 0.. {
        let Some(m) = rule.find_matches(&cur).into_iter().next() else {
            return Ok(Rewritten { diagram: cur, steps: step, trace });
        };
        if step >= policy.max_steps {
            return Err(RewriteError::StepCap { rule: rule.name(), steps: step });
        }
        trace.push(format!("step {}: rule {} at nodes {}", step + 1, rule.name(), m));
        rule.rewrite(&mut cur, &m);
    }
    unreachable!()
}

// Shared matching helpers.

/// The neighbors of `h` other than `except`, provided each is a white spider
/// joined by a single edge.
pub(crate) fn white_neighbors(d: &Diagram, h: NodeId, except: &[NodeId]) -> Option<BTreeSet<NodeId>> {
    let mut out = BTreeSet::new();
    for (n, k) in d.neighbors(h) {
        if except.contains(&n) {
            continue;
        }
        if n == h || k != 1 || !d.kind(n)?.is_z() {
            return None;
        }
        out.insert(n);
    }
    Some(out)
}

pub(crate) fn has_self_loop(d: &Diagram, id: NodeId) -> bool {
    d.multiplicity(id, id) > 0
}

pub(crate) fn ids_where(d: &Diagram, pred: impl Fn(&NodeKind) -> bool) -> Vec<NodeId> {
    d.nodes().filter(|(_, k)| pred(k)).map(|(id, _)| id).collect()
}

/// Move every edge of `from` onto `to` (self-loops of `from` become
/// self-loops of `to`, edges between them become self-loops of `to`), then
/// delete `from`.
pub(crate) fn merge_into(d: &mut Diagram, from: NodeId, to: NodeId) {
    let nbrs: Vec<(NodeId, usize)> = d.neighbors(from).collect();
    for (n, k) in nbrs {
        let target = if n == from { to } else { n };
        d.add_edges(to, target, k);
    }
    d.remove_node(from);
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::WireBuilder;
    use crate::phase::Phase;
    use crate::tensor::{evaluate, max_deviation};

    #[test]
    fn zs1_chain_fuses_to_one_spider() {
        let mut b = WireBuilder::new(1);
        for _ in 0..5 {
            b.z(0, Phase::zero());
        }
        let d = b.finish();
        let out = apply_all(&d, &Zs1, &Policy::default()).unwrap();
        assert_eq!(out.steps, 4);
        assert_eq!(out.diagram.count_where(|k| k.is_z()), 1);
        assert_eq!(out.trace[0], format!("step 1: rule zs1 at nodes {:?}", [1, 2]));
        let dev = max_deviation(&evaluate(&d).unwrap(), &evaluate(&out.diagram).unwrap(), 1e-12).unwrap();
        assert!(dev < 1e-12);
    }

    #[test]
    fn identity_has_no_zs1_match() {
        assert!(Zs1.find_matches(&Diagram::identity(1)).is_empty());
    }

    #[test]
    fn stale_match_is_rejected() {
        let mut b = WireBuilder::new(1);
        b.z(0, Phase::zero());
        b.z(0, Phase::zero());
        let d = b.finish();
        let m = Zs1.find_matches(&d).remove(0);
        let once = Zs1.apply(&d, &m).unwrap();
        assert!(matches!(Zs1.apply(&once, &m), Err(RewriteError::Stale { .. })));
    }

    #[test]
    fn step_cap_is_reported() {
        // The bialgebra rule keeps matching inside its own right-hand side.
        let mut d = Diagram::new();
        let x = d.add_node(NodeKind::X(Phase::zero()));
        let z = d.add_node(NodeKind::Z(Phase::zero()));
        d.add_edge(x, z);
        for _ in 0..2 {
            let i = d.add_input();
            d.add_edge(i, x);
            let o = d.add_output();
            d.add_edge(z, o);
        }
        let err = apply_all(&d, &Ba1, &Policy { max_steps: 5 }).unwrap_err();
        assert_eq!(err, RewriteError::StepCap { rule: "ba1", steps: 5 });
    }

    #[test]
    fn registry_names_are_unique() {
        let names: BTreeSet<&str> = all_rules().iter().map(|r| r.name()).collect();
        assert_eq!(names.len(), 18);
        assert!(rule_by_name("ba1").is_ok());
        assert!(rule_by_name("nope").is_err());
    }
}
