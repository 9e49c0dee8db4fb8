mod common;

use common::*;
use ising_qsim::builder::{closed_chain_circuit, execute, ClosurePolicy};
use ising_qsim::interference::*;
use ising_qsim::rng::seeded;
use ising_qsim::statevec::StateVector;
use ising_qsim::Error;
use num_complex::Complex64;

fn ferro_table_spec(n: usize, beta: f64) -> PlaquetteSpec {
    PlaquetteSpec::new(vec![1.0; n - 1], 1.0, beta).unwrap()
}

#[test]
fn three_spin_angles_match_reference_table() {
    for beta in [0.3, 1.0, 2.5] {
        let v = ferro_table_spec(3, beta).table_vector().unwrap();
        let a = compute_angles(&v, Subspace::Minus).unwrap();
        let (table, c8) = angle_table_n3(1.0, beta);
        for (k, c) in table {
            if k == 13 {
                continue;
            }
            assert!(
                (a.cos(k) - c).abs() < 1e-9,
                "beta {beta} theta {k}: {} vs {c}",
                a.cos(k)
            );
        }
        assert!((a.theta_n_minus().cos() - c8).abs() < 1e-9);
        assert!((a.theta_n_plus().sin() - c8).abs() < 1e-9);
    }
}

#[test]
fn three_spin_theta13_matches_exchanged_indices_not_reference() {
    for beta in [0.3, 1.0, 2.5] {
        let v = ferro_table_spec(3, beta).table_vector().unwrap();
        let a = compute_angles(&v, Subspace::Minus).unwrap();
        let reference = angle_table_n3(1.0, beta).0.into_iter().find(|e| e.0 == 13).unwrap().1;
        assert!((a.cos(13) - angle_n3_theta13_corrected(1.0, beta)).abs() < 1e-9);
        assert!((a.cos(13) - reference).abs() > 1e-3);
    }
}

#[test]
fn four_spin_angles_match_reference_table() {
    for beta in [0.3, 1.0, 2.5] {
        let v = ferro_table_spec(4, beta).table_vector().unwrap();
        let a = compute_angles(&v, Subspace::Minus).unwrap();
        let (table, s16) = angle_table_n4(1.0, beta);
        for (k, c) in table {
            assert!(
                (a.cos(k) - c).abs() < 1e-9,
                "beta {beta} theta {k}: {} vs {c}",
                a.cos(k)
            );
        }
        assert!((a.theta_n_minus().sin() - s16).abs() < 1e-9);
        assert!((a.theta_n_plus().cos() - s16).abs() < 1e-9);
    }
}

#[test]
fn axis_vector_is_left_in_place() {
    let mut v = vec![0.0; 8];
    v[3] = 1.0;
    let a = compute_angles(&v, Subspace::Minus).unwrap();
    let u = build_projection_unitary(&a);
    assert!(max_diff(&u.apply(&v), &v) < 1e-12);
    assert!(max_diff(&a.reconstruct(), &v) < 1e-12);
}

#[test]
fn projection_unitary_maps_source_onto_half() {
    for n in [3, 4] {
        for beta in [0.3, 1.0, 2.5] {
            let v = ferro_table_spec(n, beta).table_vector().unwrap();
            for sub in [Subspace::Minus, Subspace::Plus] {
                let a = compute_angles(&v, sub).unwrap();
                let u = build_projection_unitary(&a);
                assert!(u.orthogonality_deviation() < 1e-10);
                let out = u.apply(&v);
                let half = 1usize << n;
                let keep = if sub == Subspace::Minus {
                    0..half
                } else {
                    half..2 * half
                };
                let norm = v[keep.clone()].iter().map(|x| x * x).sum::<f64>().sqrt();
                let expected: Vec<f64> = (0..2 * half)
                    .map(|k| if keep.contains(&k) { v[k] / norm } else { 0.0 })
                    .collect();
                assert!(max_diff(&out, &expected) < 1e-10, "N={n} beta={beta} {sub}");
                assert!(max_diff(&a.reconstruct(), &v) < 1e-10);
                assert_eq!(a.rotation_sequence().len(), a.rotation_count());
                assert_eq!(a.rotation_count(), 3 * (1 << n) - 2);
            }
        }
    }
}

#[test]
fn degenerate_half_is_refused() {
    let mut v = vec![0.0; 8];
    v[1] = 1.0;
    match compute_angles(&v, Subspace::Plus) {
        Err(Error::DegenerateSubspace { norm }) => assert!(norm <= 1e-12),
        other => panic!("expected a degenerate-subspace error, got {other:?}"),
    }
    assert!(compute_angles(&[0.6, 0.6], Subspace::Minus).is_err());
}

#[test]
fn gray_transform_worked_example() {
    // Spin −1 is bit 0; the first qubit is the most significant.
    let bits = |s: &[i8]| s.iter().fold(0usize, |acc, &x| (acc << 1) | usize::from(x > 0));
    let steps = gray_transform(5);
    assert_eq!(
        apply_xor_steps(bits(&[-1, -1, 1, 1, 1]), 5, &steps),
        bits(&[-1, -1, 1, -1, -1])
    );
    assert_eq!(
        apply_xor_steps(bits(&[-1, 1, -1, -1, -1]), 5, &steps),
        bits(&[-1, 1, 1, -1, -1])
    );
}

#[test]
fn gray_transform_is_reflected_gray_code_and_invertible() {
    for q in 1..=6 {
        let steps = gray_transform(q);
        let mut rev = steps.clone();
        rev.reverse();
        for b in 0..1usize << q {
            let g = apply_xor_steps(b, q, &steps);
            assert_eq!(g, reference_gray(b));
            assert_eq!(apply_xor_steps(g, q, &rev), b);
            assert_eq!(gray_inverse(g), b);
        }
        for b in 0..(1usize << q) - 1 {
            let d = apply_xor_steps(b, q, &steps) ^ apply_xor_steps(b + 1, q, &steps);
            assert_eq!(d.count_ones(), 1);
        }
    }
}

/// Gray sequence built by reflection, independent of the bit formula.
fn reference_gray(b: usize) -> usize {
    let mut seq = vec![0usize];
    while seq.len() <= b {
        let k = seq.len();
        let refl: Vec<usize> = seq.iter().rev().map(|x| x | k).collect();
        seq.extend(refl);
    }
    seq[b]
}

#[test]
fn table_order_round_trips() {
    let v: Vec<f64> = (0..16).map(|k| k as f64 - 7.5).collect();
    assert_eq!(from_table_order(&to_table_order(&v)), v);
}

#[test]
fn physical_vector_matches_simulated_closed_chain() {
    let mut rng = seeded(11);
    for n in [3, 4, 5] {
        for beta in [0.3, 1.0, 2.5] {
            let couplings = random_pm(&mut rng, n - 1, 1.0);
            let spec = PlaquetteSpec::new(couplings.clone(), 1.0, beta).unwrap();
            let plan = closed_chain_circuit(&couplings, 1.0, None, beta, ClosurePolicy::Superpose).unwrap();
            let state = execute(&plan, &mut rng).unwrap().final_state;
            let v = spec.physical_vector().unwrap();
            for (p, &x) in v.iter().enumerate() {
                let w = p >> n;
                let index = (0..n).fold(w << n, |acc, k| acc | (((p >> (n - 1 - k)) & 1) << k));
                let a = state.amplitude(index);
                assert!((a.re - x).abs() < 1e-12 && a.im.abs() < 1e-15, "N={n} p={p}");
            }
        }
    }
}

fn closed_state(couplings: &[f64], beta: f64, extra: usize) -> StateVector {
    let n = couplings.len() + 1;
    let plan = closed_chain_circuit(couplings, 1.0, None, beta, ClosurePolicy::Superpose).unwrap();
    let st = execute(&plan, &mut seeded(0)).unwrap().final_state;
    let mut amps = st.amplitudes().to_vec();
    amps.resize(1 << (n + 1 + extra), Complex64::new(0.0, 0.0));
    StateVector::from_amplitudes(amps).unwrap()
}

#[test]
fn interference_selects_conditional_gibbs_for_every_realisation() {
    for n in [3usize, 4] {
        for beta in [0.3, 1.0, 2.5] {
            for r in 0..1u32 << (n - 1) {
                let couplings: Vec<f64> = (0..n - 1).map(|k| if r >> k & 1 == 1 { -1.0 } else { 1.0 }).collect();
                let spec = PlaquetteSpec::new(couplings.clone(), 1.0, beta).unwrap();
                for sub in [Subspace::Minus, Subspace::Plus] {
                    let mut st = closed_state(&couplings, beta, 1);
                    let layout = InterferenceLayout {
                        spins: (0..n).collect(),
                        workbit: n,
                        gray_workbit: n + 1,
                    };
                    apply_interference(&mut st, &layout, &spec, sub).unwrap();
                    assert!((st.norm_sqr() - 1.0).abs() < 1e-10);
                    let keep = usize::from(sub == Subspace::Plus);
                    let off: f64 = st
                        .probabilities()
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| (i >> n) & 1 != keep || (i >> (n + 1)) & 1 != 0)
                        .map(|(_, p)| p)
                        .sum();
                    assert!(off < 1e-10, "N={n} r={r} beta={beta} {sub}: leaked {off}");
                    let mut all = couplings.clone();
                    all.push(f64::from(sub.sign()));
                    let oracle = brute_gibbs(n, &closed_bonds(&all), &[], beta);
                    assert!(max_diff(&marginal(&st, n), &oracle) < 1e-10);
                }
            }
        }
    }
}

#[test]
fn gray_pipeline_equals_direct_rotations() {
    for n in [3usize, 4] {
        for sub in [Subspace::Minus, Subspace::Plus] {
            let couplings = vec![1.0, -1.0, 1.0][..n - 1].to_vec();
            let spec = PlaquetteSpec::new(couplings.clone(), 1.0, 0.8).unwrap();
            let int = Interference::new(spec, sub, DEFAULT_PLAQUETTE_CAP).unwrap();
            let layout = InterferenceLayout {
                spins: (0..n).collect(),
                workbit: n,
                gray_workbit: n + 1,
            };
            // Compare the two realisations on every basis state, i.e. as matrices.
            for b in 0..1usize << (n + 1) {
                let mut a = StateVector::basis(n + 2, b).unwrap();
                let mut g = a.clone();
                int.apply(&mut a, &layout, InterferenceMode::Direct).unwrap();
                int.apply(&mut g, &layout, InterferenceMode::GrayPipeline).unwrap();
                assert!(a.max_abs_diff(&g) < 1e-12, "N={n} {sub} column {b}");
            }
        }
    }
}

#[test]
fn gray_register_planes_join_consecutive_values() {
    // In the Gray register a table plane (p, p+1) rotates two consecutive
    // register values. They differ in one qubit only for even p, so the
    // rotations are not all single-qubit operations.
    let spec = ferro_table_spec(3, 1.0);
    let int = Interference::new(spec, Subspace::Minus, DEFAULT_PLAQUETTE_CAP).unwrap();
    let mut multi = 0;
    for r in int.table_rotations() {
        assert_eq!(r.a + 1, r.b);
        assert_eq!(gray_code(gray_inverse(r.a)), r.a);
        if (r.a ^ r.b).count_ones() > 1 {
            multi += 1;
        }
    }
    for r in int.physical_rotations() {
        assert_eq!(gray_code(r.a) + 1, gray_code(r.b));
    }
    assert!(multi > 0);
}

#[test]
fn beta_near_zero_selects_uniform_distribution() {
    let n = 4;
    let couplings = vec![1.0, 1.0, 1.0];
    let beta = 1e-9;
    let spec = PlaquetteSpec::new(couplings.clone(), 1.0, beta).unwrap();
    let mut st = closed_state(&couplings, beta, 1);
    let layout = InterferenceLayout {
        spins: (0..n).collect(),
        workbit: n,
        gray_workbit: n + 1,
    };
    apply_interference(&mut st, &layout, &spec, Subspace::Minus).unwrap();
    for p in marginal(&st, n) {
        assert!((p - 1.0 / 16.0).abs() < 1e-8);
    }
}

#[test]
fn cap_is_enforced() {
    let spec = PlaquetteSpec::new(vec![1.0; 6], 1.0, 1.0).unwrap();
    assert!(matches!(
        Interference::new(spec.clone(), Subspace::Plus, DEFAULT_PLAQUETTE_CAP),
        Err(Error::Capability(_))
    ));
    assert!(Interference::new(spec, Subspace::Plus, 7).is_ok());
}

#[test]
fn frustration_helper_picks_the_right_half() {
    assert_eq!(Subspace::for_frustration(&[1.0, 1.0], true), Subspace::Minus);
    assert_eq!(Subspace::for_frustration(&[1.0, -1.0], true), Subspace::Plus);
    assert_eq!(Subspace::for_frustration(&[-1.0, -1.0], false), Subspace::Plus);
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]

    #[test]
    fn random_vectors_project_onto_the_selected_half(
        log_len in 1u32..=8,
        plus in proptest::bool::ANY,
        raw in proptest::collection::vec(-1.0f64..1.0, 256),
    ) {
        let len = 1usize << log_len;
        let half = len / 2;
        let mut v: Vec<f64> = raw[..len].iter().map(|x| if x.abs() < 1e-3 { 0.5 } else { *x }).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        let sub = if plus { Subspace::Plus } else { Subspace::Minus };
        let keep = if plus { half..len } else { 0..half };
        let a = compute_angles(&v, sub).unwrap();
        let out = build_projection_unitary(&a).apply(&v);
        let out_norm = out.iter().map(|x| x * x).sum::<f64>().sqrt();
        proptest::prop_assert!((out_norm - 1.0).abs() < 1e-9);
        let leak = out.iter().enumerate().filter(|(k, _)| !keep.contains(k)).map(|(_, x)| x.abs()).fold(0.0, f64::max);
        proptest::prop_assert!(leak < 1e-9, "leak {leak} for length {len}");
        proptest::prop_assert_eq!(a.rotation_count(), 3 * half - 2);
    }
}
