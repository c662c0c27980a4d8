use std::f64::consts::PI;

use proptest::prelude::*;

use onebit_core::infoprinciple::{
    check_set, classify_set, projector_column, proposition_operator, state_from_propositions,
    truth_probability, Pauli, Proposition, PropositionSet, SetReport,
};
use onebit_core::measurement::{
    correlator, measure, outcome_probability, prepare_along, spin_projector, Direction, Outcome,
};
use onebit_core::qmath::{fidelity, tensor_product, trace_distance};
use onebit_core::{DensityMatrix, Operator, OperatorKind, RandomSource, StateVector, C64};

fn state(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_filter_map("zero vector", |v| {
            StateVector::new(v.into_iter().map(|(re, im)| C64::new(re, im)).collect()).ok()
        })
}

fn direction() -> impl Strategy<Value = Direction> {
    (0.0f64..=PI, 0.0f64..(2.0 * PI)).prop_map(|(p, a)| Direction::new(p, a).unwrap())
}

fn u3(theta: f64, phi: f64, lambda: f64) -> Operator {
    let (s, c) = (theta / 2.0).sin_cos();
    Operator::new(
        vec![
            C64::new(c, 0.0),
            -C64::from_polar(s, lambda),
            C64::from_polar(s, phi),
            C64::from_polar(c, phi + lambda),
        ],
        OperatorKind::Unitary,
    )
    .unwrap()
}

fn cnot() -> Operator {
    let mut e = vec![C64::new(0.0, 0.0); 16];
    for (r, col) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        e[4 * r + col] = C64::new(1.0, 0.0);
    }
    Operator::new(e, OperatorKind::Unitary).unwrap()
}

fn two_site_unitary() -> impl Strategy<Value = Operator> {
    prop::array::uniform6(0.0f64..(2.0 * PI)).prop_map(|a| {
        u3(a[0], a[1], a[2])
            .kron(&u3(a[3], a[4], a[5]))
            .matmul(&cnot())
            .with_kind(OperatorKind::Unitary)
            .unwrap()
    })
}

fn density(n: usize) -> impl Strategy<Value = DensityMatrix> {
    (state(n), state(n), 0.0f64..=1.0).prop_map(|(a, b, w)| {
        DensityMatrix::mixture(&[(w, &a.density_matrix()), (1.0 - w, &b.density_matrix())]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 128,
        max_global_rejects: 20_000,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn normalization_closure(s in state(3), u in two_site_unitary(), d in direction(), seed in any::<u64>()) {
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        let t = s.apply(&u, &[2, 0]).unwrap();
        prop_assert!((t.norm_sqr() - 1.0).abs() < 1e-12);
        let m = measure(&t, 1, d, &mut RandomSource::new(seed, 0)).unwrap();
        prop_assert!((m.post_state.norm_sqr() - 1.0).abs() < 1e-12);
        let wide = tensor_product(&m.post_state, &prepare_along(d)).unwrap();
        prop_assert!((wide.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unitarity_preserves_fidelity(s in state(2), t in state(2), u in two_site_unitary()) {
        let before = fidelity(&s, &t).unwrap();
        let after = fidelity(&s.apply(&u, &[0, 1]).unwrap(), &t.apply(&u, &[0, 1]).unwrap()).unwrap();
        prop_assert!((before - after).abs() < 1e-10);
    }

    #[test]
    fn tensor_then_trace_recovers_factor(a in state(2), b in state(1)) {
        let joint = tensor_product(&a, &b).unwrap();
        let kept = joint.partial_trace(&[0, 1]).unwrap();
        prop_assert!(kept.max_deviation(&a.density_matrix()) < 1e-10);
        let other = joint.partial_trace(&[2]).unwrap();
        prop_assert!(other.max_deviation(&b.density_matrix()) < 1e-10);
    }

    #[test]
    fn trace_distance_is_a_metric(r in density(1), s in density(1), t in density(1)) {
        let rs = trace_distance(&r, &s).unwrap();
        let sr = trace_distance(&s, &r).unwrap();
        let st = trace_distance(&s, &t).unwrap();
        let rt = trace_distance(&r, &t).unwrap();
        prop_assert!((rs - sr).abs() < 1e-10);
        prop_assert!(rt <= rs + st + 1e-10);
        prop_assert!(trace_distance(&r, &r).unwrap() < 1e-10);
        prop_assert!((0.0..=1.0 + 1e-10).contains(&rs));
    }

    #[test]
    fn trace_distance_metric_on_two_systems(r in density(2), s in density(2), t in density(2)) {
        let rs = trace_distance(&r, &s).unwrap();
        let st = trace_distance(&s, &t).unwrap();
        let rt = trace_distance(&r, &t).unwrap();
        prop_assert!((rs - trace_distance(&s, &r).unwrap()).abs() < 1e-10);
        prop_assert!(rt <= rs + st + 1e-10);
    }

    #[test]
    fn born_completeness(s in state(3), site in 0usize..3, d in direction()) {
        let p = outcome_probability(&s, site, d, Outcome::Plus).unwrap();
        let m = outcome_probability(&s, site, d, Outcome::Minus).unwrap();
        prop_assert!((p + m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn repeated_measurement_is_repeatable(s in state(2), site in 0usize..2, d in direction(), seed in any::<u64>()) {
        let mut rng = RandomSource::new(seed, 1);
        let first = measure(&s, site, d, &mut rng).unwrap();
        let second = measure(&first.post_state, site, d, &mut rng).unwrap();
        prop_assert_eq!(first.value, second.value);
        prop_assert!((fidelity(&first.post_state, &second.post_state).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn complementarity(d in direction(), turn in 0.0f64..(2.0 * PI)) {
        // any unit vector orthogonal to d
        let n = d.bloch();
        let helper = if n[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
        let cross = |a: [f64; 3], b: [f64; 3]| [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        let u = cross(n, helper);
        let norm = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
        let u = u.map(|x| x / norm);
        let v = cross(n, u);
        let (s, c) = turn.sin_cos();
        let o = [0, 1, 2].map(|k| c * u[k] + s * v[k]);
        let p = outcome_probability(&prepare_along(d), 0, Direction::from_bloch(o).unwrap(), Outcome::Plus).unwrap();
        prop_assert!((p - 0.5).abs() < 1e-12);
    }

    #[test]
    fn correlator_matches_sequential_projections(s in state(2), da in direction(), db in direction()) {
        let mut e = 0.0;
        for va in [Outcome::Plus, Outcome::Minus] {
            let Ok((pa, post)) = s.project(&spin_projector(da, va), &[0]) else { continue };
            for vb in [Outcome::Plus, Outcome::Minus] {
                let pb = outcome_probability(&post, 1, db, vb).unwrap();
                e += va.sign() * vb.sign() * pa * pb;
            }
        }
        prop_assert!((correlator(&s, 0, da, 1, db).unwrap() - e).abs() < 1e-10);
    }

    #[test]
    fn valid_sets_certify_eigenstates(letters in prop::collection::vec(0usize..4, 3 * 3), truths in prop::array::uniform3(any::<bool>())) {
        let ps = random_set(&letters, &truths, 3);
        prop_assume!(check_set(&ps).is_ok());
        let s = state_from_propositions(&ps).unwrap();
        for p in ps.propositions() {
            let image = s.apply(&proposition_operator(p), &[0, 1, 2]).unwrap();
            // S|s⟩ = t|s⟩ with t = ±1 means ⟨s|S|s⟩ = t
            let mean = s.inner(&image).unwrap();
            prop_assert!((mean.re - p.eigenvalue()).abs() < 1e-10);
            prop_assert!((fidelity(&s, &image).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rank_one_columns_agree(letters in prop::collection::vec(0usize..4, 3 * 3), truths in prop::array::uniform3(any::<bool>())) {
        let ps = random_set(&letters, &truths, 3);
        prop_assume!(check_set(&ps).is_ok());
        let columns: Vec<StateVector> = (0..8).filter_map(|j| projector_column(&ps, j)).collect();
        prop_assert!(!columns.is_empty());
        for c in &columns[1..] {
            prop_assert!((fidelity(&columns[0], c).unwrap() - 1.0).abs() < 1e-10);
        }
    }
}

fn random_set(letters: &[usize], truths: &[bool], n: usize) -> PropositionSet {
    let paulis = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let props = letters
        .chunks(n)
        .zip(truths)
        .map(|(chunk, &t)| Proposition::new(chunk.iter().map(|&k| paulis[k]).collect(), t))
        .filter_map(Result::ok)
        .collect();
    PropositionSet::new(props).unwrap()
}

#[test]
fn one_bit_saturation() {
    for d in ["X", "Y", "Z"] {
        for t in ["+1", "-1"] {
            let ps = PropositionSet::parse(&format!("{d}={t}")).unwrap();
            let s = state_from_propositions(&ps).unwrap();
            for other in ["X", "Y", "Z"].into_iter().filter(|o| *o != d) {
                let q: Proposition = format!("{other}=+1").parse().unwrap();
                assert!((truth_probability(&s, &q).unwrap() - 0.5).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn entanglement_dichotomy_on_two_systems() {
    let letters = ["I", "X", "Y", "Z"];
    let mut strings = Vec::new();
    for a in letters {
        for b in letters {
            if a != "I" || b != "I" {
                strings.push(format!("{a}{b}"));
            }
        }
    }
    let mut valid = 0;
    for p in &strings {
        for q in &strings {
            for (tp, tq) in [("+1", "+1"), ("+1", "-1"), ("-1", "+1"), ("-1", "-1")] {
                let ps = PropositionSet::parse(&format!("{p}={tp}, {q}={tq}")).unwrap();
                if check_set(&ps) != SetReport::Ok {
                    continue;
                }
                valid += 1;
                let joint = |s: &str| !s.contains('I');
                let c = classify_set(&ps).unwrap();
                assert_eq!(c.entangled, joint(p) && joint(q), "{p}={tp}, {q}={tq}");
            }
        }
    }
    // 15 non-identity strings; each has 6 commuting independent partners
    assert_eq!(valid, 15 * 6 * 4);
}
