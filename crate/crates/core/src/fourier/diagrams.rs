//! Diagram-level transforms: phase gadgets ↔ exponentiated H-boxes.

use num_complex::Complex64 as C64;
use num_rational::Rational64;

use super::{forward, forward_exact, CoeffTable, FourierError, GadgetForm};
use crate::bits::BitString;
use crate::diagram::{Diagram, HLabel, NodeId, NodeKind, WireBuilder};
use crate::phase::Phase;

/// Replacement amplitude for zero entries in [`nf_to_gadget_form`].
pub const DEFAULT_EPS: f64 = 1e-6;

/// Imaginary parts up to this size count as real in [`to_zx`].
const REAL_TOL: f64 = 1e-9;

fn snap(v: C64) -> Phase {
    if v.im.abs() <= REAL_TOL {
        Phase::snap(v.re, 64, 1e-12)
    } else {
        Phase::complex(v)
    }
}

/// The diagonal gate `|b⟩ ↦ e^{iα_b}|b⟩` as a product of exponentiated
/// H-boxes, one per `b`, each attached through the indexing box of `b`.
pub fn phase_table_diagram(ct: &CoeffTable) -> Diagram {
    let n = ct.n();
    let mut w = WireBuilder::new(n);
    let taps: Vec<NodeId> = (0..n).map(|q| w.tap(q)).collect();
    let d = w.diagram_mut();
    for (b, a) in ct.iter() {
        let h = d.add_node(NodeKind::H(HLabel::exp(snap(a))));
        for (i, &t) in taps.iter().enumerate() {
            if b.bit(i) {
                d.add_edge(t, h);
            } else {
                let not = d.add_node(NodeKind::X(Phase::pi()));
                d.add_edge(t, not);
                d.add_edge(not, h);
            }
        }
    }
    w.finish()
}

/// The diagonal gate with phase `Σ_c α̃_c Ω(b, c) + g` as phase gadgets,
/// one per nonzero coefficient, with `e^{ig}` as scalar.
pub fn gadget_form_diagram(gf: &GadgetForm) -> Diagram {
    let mut w = WireBuilder::new(gf.n());
    for (c, t) in gf.iter() {
        if t.norm() > 0.0 {
            w.gadget(snap(t), &c.positions());
        }
    }
    let mut d = w.finish();
    d.mul_scalar((C64::i() * gf.global_phase()).exp());
    d
}

/// Parity terms `(c, α̃_c)` of the n-ary H-box labelled `e^{iα}`, zero terms
/// dropped. Exact phases give exact terms.
pub fn hbox_terms(alpha: Phase, n: usize) -> Vec<(BitString, Phase)> {
    let top = (1usize << n) - 1;
    if let Some(r) = alpha.exact() {
        let mut table = vec![Rational64::from_integer(0); 1 << n];
        table[top] = r;
        let (all, _) = forward_exact(&table);
        return all
            .into_iter()
            .enumerate()
            .skip(1)
            .filter(|(_, t)| *t != Rational64::from_integer(0))
            .map(|(c, t)| (BitString::new(c as u64, n), Phase::from_ratio(t)))
            .collect();
    }
    let mut ct = CoeffTable::zeros(n);
    ct.set(&BitString::ones(n), alpha.value());
    forward(&ct).iter().filter(|(_, t)| t.norm() > 0.0).map(|(c, t)| (c, Phase::complex(t))).collect()
}

/// The n-ary H-box labelled `e^{iα}` (on all `n` wires) built from phase
/// gadgets alone. Equal to [`Diagram::controlled_phase`] up to a scalar.
pub fn expand_hbox(alpha: Phase, n: usize) -> Diagram {
    let mut w = WireBuilder::new(n);
    for (c, t) in hbox_terms(alpha, n) {
        w.gadget(t, &c.positions());
    }
    w.finish()
}

/// AND terms `(d, θ_d)` of the phase gadget `α` on `targets`:
/// `θ_d = α·(−2)^{|d|−1}` for every nonempty `d ⊆ targets`.
pub fn gadget_terms(alpha: Phase, targets: &[usize], n: usize) -> Vec<(BitString, Phase)> {
    let t = BitString::from_positions(targets, n);
    t.nonzero_subsets()
        .map(|d| {
            let k = (-2i64).pow(d.weight() - 1);
            (d, alpha.scale_int(k))
        })
        .collect()
}

/// A phase gadget built from exponentiated H-boxes, one per nonempty subset
/// of `targets`. Equal to [`Diagram::phase_gadget`] up to a scalar.
pub fn expand_gadget(alpha: Phase, targets: &[usize], n: usize) -> Result<Diagram, FourierError> {
    // Reuse the builder's argument checks.
    Diagram::phase_gadget(alpha, targets, n)?;
    let mut w = WireBuilder::new(n);
    for (d, theta) in gadget_terms(alpha, targets, n) {
        w.hbox(HLabel::exp(theta), &d.positions());
    }
    Ok(w.finish())
}

/// Phase exponents for a vector of amplitudes: `α_b = −i ln a_b` on the
/// principal branch, with `ε` standing in for zero amplitudes.
fn exponents(coeffs: &[C64], eps: f64) -> Result<CoeffTable, FourierError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(FourierError::BadEpsilon(eps));
    }
    let alpha = coeffs
        .iter()
        .map(|&a| {
            let a = if a.norm() == 0.0 { C64::new(eps, 0.0) } else { a };
            C64::new(a.arg(), -a.norm().ln())
        })
        .collect();
    CoeffTable::new(alpha)
}

/// Approximate the normal form `Σ_b a_b |b⟩` by phase gadgets acting on
/// `|+⟩^{⊗n}`. Exact (up to scalar) when no amplitude is zero.
pub fn nf_to_gadget_form(coeffs: &[C64], eps: f64) -> Result<(GadgetForm, Diagram), FourierError> {
    let ct = exponents(coeffs, eps)?;
    let gf = forward(&ct);
    let gate = gadget_form_diagram(&gf);
    let state = Diagram::compose(&Diagram::plus_state(ct.n()), &gate)?;
    Ok((gf, state))
}

/// A ZX diagram (white and grey spiders only) for a gadget form with real
/// coefficients.
pub fn to_zx(gf: &GadgetForm) -> Result<Diagram, FourierError> {
    if let Some((c, t)) = gf.iter().find(|(_, t)| t.im.abs() > REAL_TOL) {
        return Err(FourierError::NonReal(c.to_string(), t.im));
    }
    let mut real = gf.clone();
    for (c, t) in gf.iter() {
        real.set(&c, C64::new(t.re, 0.0));
    }
    Ok(gadget_form_diagram(&real))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::inverse;
    use crate::rewrite::gadget_parts;
    use crate::tensor::{evaluate, max_deviation, proportional, Tensor};
    use std::f64::consts::PI;

    fn same(a: &Diagram, b: &Diagram) -> bool {
        proportional(&evaluate(a).unwrap(), &evaluate(b).unwrap(), 1e-9).unwrap()
    }

    #[test]
    fn ccz_has_seven_quarter_pi_gadgets() {
        let d = expand_hbox(Phase::pi(), 3);
        let hubs: Vec<_> = d.node_ids().into_iter().filter_map(|h| gadget_parts(&d, h)).collect();
        assert_eq!(hubs.len(), 7);
        for (leaf, _) in hubs {
            let Some(NodeKind::Z(p)) = d.kind(leaf) else { panic!() };
            assert!(p.is_t_like(), "{p}");
        }
        assert!(same(&d, &Diagram::controlled_phase(Phase::pi(), &[0, 1, 2], 3).unwrap()));
    }

    #[test]
    fn one_wire_hbox_is_a_rotation() {
        let a = Phase::radians(0.9);
        assert!(same(&expand_hbox(a, 1), &Diagram::z_spider(a, 1, 1)));
    }

    #[test]
    fn expansions_match_targets() {
        for n in 1..=4 {
            for a in [Phase::pi(), Phase::pi_frac(1, 2), Phase::pi_frac(1, 4), Phase::radians(1.234)] {
                let all: Vec<usize> = (0..n).collect();
                assert!(same(&expand_hbox(a, n), &Diagram::controlled_phase(a, &all, n).unwrap()));
                let g = expand_gadget(a, &all, n).unwrap();
                assert!(same(&g, &Diagram::phase_gadget(a, &all, n).unwrap()));
            }
        }
    }

    #[test]
    fn two_wire_gadget_is_two_rotations_and_a_cz_power() {
        let a = Phase::radians(0.37);
        let mut w = WireBuilder::new(2);
        w.z(0, a);
        w.z(1, a);
        w.hbox(HLabel::exp(a.scale_int(-2)), &[0, 1]);
        assert!(same(&w.finish(), &expand_gadget(a, &[0, 1], 2).unwrap()));
    }

    #[test]
    fn gadget_form_diagram_is_exact() {
        let ct = CoeffTable::from_real(&[0.3, -1.0, 2.5, 0.0, 1.0, 0.2, -0.7, 3.0]).unwrap();
        let gf = forward(&ct);
        let t = evaluate(&gadget_form_diagram(&gf)).unwrap();
        let diag: Vec<C64> = ct.values().iter().map(|a| (C64::i() * a).exp()).collect();
        assert!(max_deviation(&t, &Tensor::diagonal(&diag), 1e-12).unwrap() < 1e-9);
        assert!(same(&phase_table_diagram(&ct), &gadget_form_diagram(&gf)));
        assert!(same(&phase_table_diagram(&inverse(&gf)), &phase_table_diagram(&ct)));
    }

    #[test]
    fn nf_with_zero_uses_epsilon() {
        let (_, d) = nf_to_gadget_form(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], 1e-6).unwrap();
        let t = evaluate(&d).unwrap();
        let r = t.data()[1] / t.data()[0];
        assert!((r - 1e-6).norm() < 1e-12);
    }

    #[test]
    fn nf_unimodular_is_exact() {
        let coeffs: Vec<C64> = (0..4).map(|k| C64::from_polar(1.0, k as f64 * 0.7)).collect();
        let (_, d) = nf_to_gadget_form(&coeffs, DEFAULT_EPS).unwrap();
        let expect = Tensor::new(2, 0, coeffs);
        assert!(proportional(&evaluate(&d).unwrap(), &expect, 1e-9).unwrap());
    }

    #[test]
    fn to_zx_rejects_complex() {
        let mut gf = GadgetForm::zeros(2);
        gf.set(&"10".parse().unwrap(), C64::new(0.1, 0.5));
        assert!(matches!(to_zx(&gf), Err(FourierError::NonReal(c, _)) if c == "10"));
    }

    #[test]
    fn to_zx_has_only_spiders() {
        let mut a = vec![0.0; 8];
        a[7] = PI;
        let gf = forward(&CoeffTable::from_real(&a).unwrap());
        let d = to_zx(&gf).unwrap();
        assert!(d.nodes().all(|(_, k)| k.is_z() || k.is_x() || k.is_boundary()));
        assert!(same(&d, &Diagram::controlled_phase(Phase::pi(), &[0, 1, 2], 3).unwrap()));
        let zero = to_zx(&GadgetForm::zeros(2)).unwrap();
        assert!(same(&zero, &Diagram::identity(2)));
    }
}
