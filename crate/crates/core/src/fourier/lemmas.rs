//! Disconnect and indexing boxes, and the identities relating them to
//! H-boxes and phase gadgets, as pairs of concrete diagrams.
//!
//! A disconnect box labelled `c` keeps the connection on wire `i` iff
//! `c_i = 1`. Attached to the taps of an H-box (white box) or a gadget hub
//! (grey box), it just selects which wires the box touches.

use rand::Rng;

use super::{expand_gadget, expand_hbox, gadget_terms};
use crate::bits::BitString;
use crate::diagram::{Diagram, HLabel, NodeId, NodeKind, WireBuilder};
use crate::phase::Phase;

/// Names accepted by [`instances`].
pub const LEMMAS: &[&str] = &[
    "and_to_xor_2",
    "xor_to_and_2",
    "index_copy",
    "disconnect_copy",
    "index_disconnect_commute",
    "complete_connections",
    "combine_hboxes_disconnect",
    "combine_gadgets_disconnect",
    "expand_hbox",
    "expand_gadget",
];

/// An H-box labelled `label` touching wire `i` iff `c_i = 1`.
pub fn disconnected_hbox(label: HLabel, c: &BitString) -> Diagram {
    let mut w = WireBuilder::new(c.len());
    w.hbox(label, &c.positions());
    w.finish()
}

/// A phase gadget touching wire `i` iff `c_i = 1`. With `c = 0…0` nothing
/// is attached and the result is the identity.
pub fn disconnected_gadget(alpha: Phase, c: &BitString) -> Diagram {
    let mut w = WireBuilder::new(c.len());
    if !c.is_zero() {
        w.gadget(alpha, &c.positions());
    }
    w.finish()
}

/// An H-box on every wire, through a NOT on each wire with `b_i = 0`: the
/// diagonal gate with `label` at `|b⟩` only.
pub fn indexed_hbox(label: HLabel, b: &BitString) -> Diagram {
    let n = b.len();
    let mut w = WireBuilder::new(n);
    let taps: Vec<NodeId> = (0..n).map(|q| w.tap(q)).collect();
    let d = w.diagram_mut();
    let h = d.add_node(NodeKind::H(label));
    for (i, &t) in taps.iter().enumerate() {
        if b.bit(i) {
            d.add_edge(t, h);
        } else {
            let not = d.add_node(NodeKind::X(Phase::pi()));
            d.add_edge(t, not);
            d.add_edge(not, h);
        }
    }
    w.finish()
}

/// One white spider per wire, copying it to two outputs.
fn copy(n: usize) -> Diagram {
    (0..n).fold(Diagram::identity(0), |acc, _| Diagram::tensor_product(&acc, &Diagram::z_spider(Phase::zero(), 1, 2)))
}

fn doubled(b: &BitString) -> BitString {
    let bits: Vec<bool> = (0..b.len()).flat_map(|i| [b.bit(i), b.bit(i)]).collect();
    BitString::from_bits(&bits)
}

fn then(a: &Diagram, b: &Diagram) -> Diagram {
    Diagram::compose(a, b).expect("matching wire counts")
}

fn random_bits(n: usize, rng: &mut impl Rng) -> BitString {
    BitString::new(rng.gen_range(0..1u64 << n), n)
}

fn random_angle(rng: &mut impl Rng) -> Phase {
    if rng.gen_bool(0.5) {
        Phase::pi_frac(rng.gen_range(-8..8), 8)
    } else {
        Phase::radians(rng.gen_range(-4.0..4.0))
    }
}

/// Diagrams on `n` wires (clamped per lemma) that the named identity says
/// are equal up to a scalar. `None` for an unknown name.
pub fn instances(name: &str, n: usize, rng: &mut impl Rng) -> Option<(Diagram, Diagram)> {
    let n = n.max(1);
    let pair = match name {
        "and_to_xor_2" => {
            // α·x₁x₂ = α/2·(x₁ + x₂ − x₁⊕x₂)
            let a = random_angle(rng);
            let half = a.scale(num_rational::Rational64::new(1, 2));
            let mut w = WireBuilder::new(2);
            w.z(0, half);
            w.z(1, half);
            w.gadget(-half, &[0, 1]);
            (Diagram::controlled_phase(a, &[0, 1], 2).ok()?, w.finish())
        }
        "xor_to_and_2" => {
            // α·(x₁⊕x₂) = α·(x₁ + x₂ − 2x₁x₂)
            let a = random_angle(rng);
            let mut w = WireBuilder::new(2);
            w.z(0, a);
            w.z(1, a);
            w.hbox(HLabel::exp(a.scale_int(-2)), &[0, 1]);
            (Diagram::phase_gadget(a, &[0, 1], 2).ok()?, w.finish())
        }
        "index_copy" => {
            let b = random_bits(n, rng);
            let lhs = then(&Diagram::indexing_box(&b, n).ok()?, &copy(n));
            let rhs = then(&copy(n), &Diagram::indexing_box(&doubled(&b), 2 * n).ok()?);
            (lhs, rhs)
        }
        "disconnect_copy" => {
            // An H-box reaching both copies of each selected wire equals one
            // reaching the wire before it is copied.
            let c = random_bits(n, rng);
            let label = HLabel::exp(random_angle(rng));
            let lhs = then(&copy(n), &disconnected_hbox(label, &doubled(&c)));
            let rhs = then(&disconnected_hbox(label, &c), &copy(n));
            (lhs, rhs)
        }
        "index_disconnect_commute" => {
            // Conjugating a gadget by an indexing box flips its sign iff
            // (|c| − b·c) is odd.
            let (b, c) = (random_bits(n, rng), random_bits(n, rng));
            let a = random_angle(rng);
            let x = Diagram::indexing_box(&b, n).ok()?;
            let lhs = then(&then(&x, &disconnected_gadget(a, &c)), &x);
            let flips = (c.weight() - b.and(&c).weight()) % 2 == 1;
            (lhs, disconnected_gadget(if flips { -a } else { a }, &c))
        }
        "complete_connections" => {
            // An H-box on d is the product of indexed H-boxes over every b ⊇ d.
            let d = random_bits(n, rng);
            let label = HLabel::exp(random_angle(rng));
            let mut rhs = Diagram::identity(n);
            for b in BitString::all(n).filter(|b| d.is_subset(b)) {
                rhs = then(&rhs, &indexed_hbox(label, &b));
            }
            (disconnected_hbox(label, &d), rhs)
        }
        "combine_hboxes_disconnect" => {
            let c = random_bits(n, rng);
            let (p, q) = (random_angle(rng), random_angle(rng));
            let lhs = then(&disconnected_hbox(HLabel::exp(p), &c), &disconnected_hbox(HLabel::exp(q), &c));
            (lhs, disconnected_hbox(HLabel::exp(p + q), &c))
        }
        "combine_gadgets_disconnect" => {
            let c = random_bits(n, rng);
            let (p, q) = (random_angle(rng), random_angle(rng));
            let lhs = then(&disconnected_gadget(p, &c), &disconnected_gadget(q, &c));
            (lhs, disconnected_gadget(p + q, &c))
        }
        "expand_hbox" => {
            let a = random_angle(rng);
            let all: Vec<usize> = (0..n).collect();
            (expand_hbox(a, n), Diagram::controlled_phase(a, &all, n).ok()?)
        }
        "expand_gadget" => {
            let t = loop {
                let t = random_bits(n, rng);
                if !t.is_zero() {
                    break t;
                }
            };
            let a = random_angle(rng);
            (expand_gadget(a, &t.positions(), n).ok()?, Diagram::phase_gadget(a, &t.positions(), n).ok()?)
        }
        _ => return None,
    };
    Some(pair)
}

/// The AND-form of a set of parity terms: every gadget `(c, θ)` replaced by
/// its exponentiated H-boxes.
pub fn and_form(terms: &[(BitString, Phase)], n: usize) -> Diagram {
    let mut w = WireBuilder::new(n);
    for (c, theta) in terms {
        for (d, phi) in gadget_terms(*theta, &c.positions(), n) {
            w.hbox(HLabel::exp(phi), &d.positions());
        }
    }
    w.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{evaluate, proportional};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn every_lemma_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for name in LEMMAS {
            for n in 1..=3 {
                for _ in 0..5 {
                    let (a, b) = instances(name, n, &mut rng).unwrap();
                    let (ta, tb) = (evaluate(&a).unwrap(), evaluate(&b).unwrap());
                    assert!(proportional(&ta, &tb, 1e-9).unwrap(), "{name} n={n}");
                }
            }
        }
    }

    #[test]
    fn commute_sign_is_checked_exhaustively() {
        let a = Phase::pi_frac(1, 3);
        for b in BitString::all(3) {
            for c in BitString::all(3) {
                let x = Diagram::indexing_box(&b, 3).unwrap();
                let lhs = evaluate(&then(&then(&x, &disconnected_gadget(a, &c)), &x)).unwrap();
                let plus = evaluate(&disconnected_gadget(a, &c)).unwrap();
                let minus = evaluate(&disconnected_gadget(-a, &c)).unwrap();
                let flips = (c.weight() - b.and(&c).weight()) % 2 == 1;
                assert_eq!(proportional(&lhs, &minus, 1e-9).unwrap(), flips || c.is_zero(), "{b} {c}");
                assert!(proportional(&lhs, if flips { &minus } else { &plus }, 1e-9).unwrap());
            }
        }
    }

    #[test]
    fn unknown_lemma() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(instances("nope", 2, &mut rng).is_none());
    }
}
