use ising_qsim::commutators::RegisterOperator;
use ising_qsim::gates::*;
use ising_qsim::statevec::{GateMatrix, StateVector};
use num_complex::Complex64;

const BETAS: [f64; 4] = [0.0, 0.3, 1.0, 2.5];

fn real_matrix(g: &GateMatrix) -> Vec<f64> {
    g.entries().iter().map(|a| a.re).collect()
}

fn assert_close(a: &[f64], b: &[f64], tol: f64, what: &str) {
    let d = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(d < tol, "{what}: max deviation {d:e}");
}

/// Index of `|s_0, s_1, …⟩` in a gate's own basis (first spin most significant).
fn local(spins: &[i8]) -> usize {
    spins.iter().fold(0, |acc, &s| (acc << 1) | usize::from(s > 0))
}

/// Column of `gate` for the basis input `spins`.
fn column(gate: &GateMatrix, spins: &[i8]) -> Vec<f64> {
    let c = local(spins);
    (0..gate.dim()).map(|r| gate.entry(r, c).re).collect()
}

#[test]
fn rotation_matches_reference_matrix() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let r = rotation_r();
    assert_close(&real_matrix(&r), &[h, h, h, -h], 1e-15, "R");
    assert_close(&column(&r, &[-1]), &[h, h], 1e-15, "R|−⟩");
    let mut st = StateVector::new_ground(1).unwrap();
    st.apply_gate(&r, &[0]).unwrap();
    st.apply_gate(&r, &[0]).unwrap();
    assert!((st.amplitude(0).re - 1.0).abs() < 1e-15 && st.amplitude(1).norm() < 1e-15);
}

#[test]
fn entangler_matches_reference_ferro_and_antiferro_matrices() {
    for beta in BETAS {
        let j = 1.3;
        let x = (beta / 2.0).exp();
        let c = 2.0 * (beta * j).cosh();
        let n = 1.0 / c.sqrt();
        let (a, b) = (x.powf(j) * n, x.powf(-j) * n);
        #[rustfmt::skip]
        let plus = [
            a, b, 0.0, 0.0,
            -b, a, 0.0, 0.0,
            0.0, 0.0, b, a,
            0.0, 0.0, -a, b,
        ];
        #[rustfmt::skip]
        let minus = [
            b, a, 0.0, 0.0,
            -a, b, 0.0, 0.0,
            0.0, 0.0, a, b,
            0.0, 0.0, -b, a,
        ];
        assert_close(&real_matrix(&ising_entangle(j, beta).unwrap()), &plus, 1e-15, "S⁺");
        assert_close(&real_matrix(&ising_entangle(-j, beta).unwrap()), &minus, 1e-15, "S⁻");
    }
}

#[test]
fn entangler_action_follows_the_definition() {
    for beta in BETAS {
        for g in [-1.7, -0.4, 0.0, 0.9, 2.2] {
            let x = (beta / 2.0).exp();
            let c = 2.0 * (beta * g).cosh();
            let s = ising_entangle(g, beta).unwrap();
            for si in [-1i8, 1] {
                for sj in [-1i8, 1] {
                    let fi = f64::from(si);
                    let mut expect = vec![0.0; 4];
                    expect[local(&[si, sj])] += x.powf(-g * fi) / c.sqrt();
                    expect[local(&[si, -sj])] += f64::from(sj) * x.powf(g * fi) / c.sqrt();
                    assert_close(&column(&s, &[si, sj]), &expect, 1e-14, "S action");
                }
            }
        }
    }
}

#[test]
fn entangler_degenerates_to_equal_magnitudes() {
    let flat = |g: &GateMatrix| {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        g.entries()
            .iter()
            .all(|a| a.norm() < 1e-15 || (a.norm() - h).abs() < 1e-15)
    };
    assert!(flat(&ising_entangle(0.0, 1.7).unwrap()));
    for g in [-3.0, 0.5, 8.0] {
        assert!(flat(&ising_entangle(g, 0.0).unwrap()));
    }
}

#[test]
fn entangler_squares_are_transfer_matrix_entries() {
    let (j, beta): (f64, f64) = (0.8, 1.1);
    let x = (beta / 2.0).exp();
    let c = 2.0 * (beta * j).cosh();
    let s = ising_entangle(j, beta).unwrap();
    let transfer = [x.powf(2.0 * j), x.powf(-2.0 * j), x.powf(-2.0 * j), x.powf(2.0 * j)];
    for (k, (r, col)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
        let sq = s.entry(r, col).norm_sqr() * c;
        assert!((sq - transfer[k]).abs() < 1e-13);
    }
}

#[test]
fn xor_matches_reference_matrix_and_action() {
    #[rustfmt::skip]
    let reference = [
        0.0, -1.0, 0.0, 0.0,
        1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, -1.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
    ];
    let x = xor_gate();
    assert_eq!(real_matrix(&x), reference);
    for si in [-1i8, 1] {
        for sj in [-1i8, 1] {
            let mut expect = vec![0.0; 4];
            expect[local(&[si, si * sj])] = f64::from(si * sj);
            assert_eq!(column(&x, &[si, sj]), expect);
        }
    }
    assert_eq!(column(&x, &[1, 1]), vec![0.0, 0.0, 0.0, 1.0]);
    assert_eq!(column(&x, &[-1, 1]), vec![-1.0, 0.0, 0.0, 0.0]);
}

#[test]
fn xor_squared_is_diagonal_with_unit_entries() {
    let x = RegisterOperator::from_gates(2, &[(&xor_gate(), &[1, 0]), (&xor_gate(), &[1, 0])]).unwrap();
    for r in 0..4 {
        for c in 0..4 {
            let v = x.entry(r, c).norm();
            if r == c {
                assert!((v - 1.0).abs() < 1e-15);
            } else {
                assert!(v < 1e-15);
            }
        }
    }
}

#[test]
fn omega_follows_its_closed_form() {
    for beta in BETAS {
        for j in [0.0, 0.6, 1.0, 2.0] {
            let x = (beta / 2.0).exp();
            let c = 2.0 * (beta * j).cosh();
            let o = omega(j, beta).unwrap();
            for si in [-1i8, 1] {
                for sj in [-1i8, 1] {
                    for w in [-1i8, 1] {
                        let (fi, fj, fw) = (f64::from(si), f64::from(sj), f64::from(w));
                        let mut expect = vec![0.0; 8];
                        expect[local(&[si, sj, -sj * w])] += -fj * x.powf(j * fi) / c.sqrt();
                        expect[local(&[si, sj, sj * w])] += fj * fw * x.powf(-j * fi) / c.sqrt();
                        assert_close(&column(&o, &[si, sj, w]), &expect, 1e-14, "Ω action");
                    }
                }
            }
        }
    }
    // Ω|−,−,−⟩ = (x^{−J}|−,−,−⟩ + x^{J}|−,−,+⟩)/√c.
    let (j, beta) = (1.0, 0.9);
    let x = (beta / 2.0f64).exp();
    let c = 2.0 * (beta * j).cosh();
    let col = column(&omega(j, beta).unwrap(), &[-1, -1, -1]);
    assert!((col[0] - x.powf(-j) / c.sqrt()).abs() < 1e-15);
    assert!((col[1] - x.powf(j) / c.sqrt()).abs() < 1e-15);
}

#[test]
fn omega_is_xor_after_entangler() {
    for beta in BETAS {
        let j = 0.75;
        let direct = RegisterOperator::from_gates(3, &[(&omega(j, beta).unwrap(), &[2, 1, 0])]).unwrap();
        let composed = RegisterOperator::from_gates(
            3,
            &[(&ising_entangle(j, beta).unwrap(), &[2, 0]), (&xor_gate(), &[1, 0])],
        )
        .unwrap();
        assert!(direct.max_abs_diff(&composed) < 1e-15);
    }
}

#[test]
fn every_gate_is_unitary() {
    for beta in BETAS {
        for g in [-2.0, -0.5, 0.0, 0.3, 1.0, 4.0] {
            for d in [-1.5, 0.0, 0.7] {
                let gates = vec![
                    rotation_r(),
                    ising_entangle(g, beta).unwrap(),
                    xor_gate(),
                    gray_cnot(),
                    spin_phase(),
                    omega(g.abs(), beta).unwrap(),
                    rotation_r_field(d, beta).unwrap(),
                    ising_entangle_field(g, d, beta).unwrap(),
                    omega_field(g.abs(), d.abs(), beta).unwrap(),
                ];
                for gate in gates {
                    assert!(gate.unitarity_deviation() < 1e-12, "{}", gate.label());
                }
            }
        }
    }
}

#[test]
fn field_gates_reduce_at_zero_field() {
    for beta in BETAS {
        assert!(rotation_r_field(0.0, beta).unwrap().max_abs_diff(&rotation_r()) < 1e-15);
        for g in [-1.2, 0.0, 0.4, 2.0] {
            let a = ising_entangle_field(g, 0.0, beta).unwrap();
            assert!(a.max_abs_diff(&ising_entangle(g, beta).unwrap()) < 1e-15);
            let o = omega_field(g.abs(), 0.0, beta).unwrap();
            assert!(o.max_abs_diff(&omega(g.abs(), beta).unwrap()) < 1e-15);
        }
    }
}

#[test]
fn field_rotation_biases_the_branches() {
    for beta in [0.3, 1.0, 2.5] {
        for d in [-2.0, 0.5, 3.0] {
            let col = column(&rotation_r_field(d, beta).unwrap(), &[-1]);
            let ratio = col[1].powi(2) / col[0].powi(2);
            let expect = (2.0 * beta * d).exp();
            assert!((ratio / expect - 1.0).abs() < 1e-12, "β={beta} Δ={d}");
        }
    }
}

#[test]
fn field_rotation_follows_its_definition() {
    let (d, beta) = (0.8, 1.3);
    let x = (beta / 2.0f64).exp();
    let c = 2.0 * (beta * d).cosh();
    let r = rotation_r_field(d, beta).unwrap();
    for s in [-1i8, 1] {
        let f = f64::from(s);
        let expect = [x.powf(f * d) / c.sqrt(), -f * x.powf(-f * d) / c.sqrt()];
        assert_close(&column(&r, &[s]), &expect, 1e-15, "R^Δ");
    }
}

#[test]
fn two_qubit_field_circuit_has_the_stated_amplitudes() {
    for beta in [0.3, 1.0, 2.5] {
        for (j1, d1, d2) in [(1.0, 0.5, -0.3), (-0.7, 1.2, 0.9), (2.0, -1.0, 0.4)] {
            let x = (beta / 2.0f64).exp();
            let c0 = 2.0 * (beta * d1).cosh();
            let cs = |s: f64| 2.0 * (beta * (j1 + s * d2)).cosh();
            let mut st = StateVector::new_ground(2).unwrap();
            st.apply_gate(&rotation_r_field(d1, beta).unwrap(), &[0]).unwrap();
            st.apply_gate(&ising_entangle_field(j1, d2, beta).unwrap(), &[0, 1])
                .unwrap();
            for s1 in [-1.0, 1.0] {
                for s2 in [-1.0, 1.0] {
                    let idx = usize::from(s1 > 0.0) | usize::from(s2 > 0.0) << 1;
                    let expect = -s2 / (c0.sqrt() * cs(s1).sqrt()) * x.powf(j1 * s1 * s2 + d1 * s1 + d2 * s2);
                    let got = st.amplitude(idx);
                    assert!((got - Complex64::new(expect, 0.0)).norm() < 1e-14, "β={beta}");
                }
            }
        }
    }
}

#[test]
fn field_omega_follows_its_closed_form() {
    for beta in [0.3, 1.0, 2.5] {
        for (j, d) in [(1.0, 0.5), (0.4, 1.5), (2.0, 0.0)] {
            let x = (beta / 2.0f64).exp();
            let o = omega_field(j, d, beta).unwrap();
            for si in [-1i8, 1] {
                let fi = f64::from(si);
                let c = 2.0 * (beta * (j + fi * d)).cosh();
                for sj in [-1i8, 1] {
                    for w in [-1i8, 1] {
                        let (fj, fw) = (f64::from(sj), f64::from(w));
                        let e = j * fi + d;
                        let mut expect = vec![0.0; 8];
                        expect[local(&[si, sj, -sj * w])] += -fj * x.powf(e) / c.sqrt();
                        expect[local(&[si, sj, sj * w])] += fj * fw * x.powf(-e) / c.sqrt();
                        assert_close(&column(&o, &[si, sj, w]), &expect, 1e-14, "Ω^Δ action");
                    }
                }
            }
        }
    }
}

#[test]
fn extreme_couplings_stay_finite_and_unitary() {
    for (g, beta) in [(300.0, 10.0), (-300.0, 10.0), (1e3, 5.0)] {
        let s = ising_entangle(g, beta).unwrap();
        assert!(s.entries().iter().all(|a| a.re.is_finite()));
        assert!(s.unitarity_deviation() < 1e-12);
    }
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(ising_entangle(f64::NAN, 1.0).is_err());
    assert!(ising_entangle(1.0, -1.0).is_err());
    assert!(omega(-1.0, 1.0).is_err());
    assert!(omega_field(1.0, -0.5, 1.0).is_err());
}
