//! Shared test support: an independent brute-force oracle, a naive dense
//! gate application, and closed-form reference data.

#![allow(dead_code)]

use ising_qsim::ising::IsingModel;
use ising_qsim::statevec::{GateMatrix, StateVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Energy by explicit spin assignment: `−Σ G s_i s_j − Σ h s_i`.
pub fn brute_energy(bonds: &[(usize, usize, f64)], fields: &[f64], config: u64) -> f64 {
    let spin = |k: usize| if config >> k & 1 == 1 { 1.0 } else { -1.0 };
    let mut e = 0.0;
    for &(i, j, g) in bonds {
        e -= g * spin(i) * spin(j);
    }
    for (k, h) in fields.iter().enumerate() {
        e -= h * spin(k);
    }
    e
}

/// `e^{−βH}/Z` for every configuration, via log-sum-exp.
pub fn brute_gibbs(n: usize, bonds: &[(usize, usize, f64)], fields: &[f64], beta: f64) -> Vec<f64> {
    let logw: Vec<f64> = (0..1u64 << n).map(|y| -beta * brute_energy(bonds, fields, y)).collect();
    let m = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let z: f64 = logw.iter().map(|l| (l - m).exp()).sum();
    logw.iter().map(|l| (l - m).exp() / z).collect()
}

pub fn terms(model: &IsingModel) -> (Vec<(usize, usize, f64)>, Vec<f64>) {
    (
        model.bonds().iter().map(|b| (b.i, b.j, b.coupling)).collect(),
        model.fields().to_vec(),
    )
}

pub fn model_gibbs(model: &IsingModel) -> Vec<f64> {
    let (b, f) = terms(model);
    brute_gibbs(model.num_sites(), &b, &f, model.beta())
}

/// Partition function by enumeration.
pub fn brute_z(n: usize, bonds: &[(usize, usize, f64)], beta: f64) -> f64 {
    (0..1u64 << n)
        .map(|y| (-beta * brute_energy(bonds, &[], y)).exp())
        .sum()
}

pub fn closed_bonds(couplings: &[f64]) -> Vec<(usize, usize, f64)> {
    let n = couplings.len();
    couplings
        .iter()
        .enumerate()
        .map(|(k, &g)| (k, (k + 1) % n, g))
        .collect()
}

pub fn open_bonds(couplings: &[f64]) -> Vec<(usize, usize, f64)> {
    couplings.iter().enumerate().map(|(k, &g)| (k, k + 1, g)).collect()
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Distribution of the lowest `n` qubits.
pub fn marginal(state: &StateVector, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; 1 << n];
    for (i, a) in state.amplitudes().iter().enumerate() {
        out[i & ((1 << n) - 1)] += a.norm_sqr();
    }
    out
}

/// Distribution of the lowest `n` qubits conditioned on qubit `q` reading `bit`.
pub fn conditional(state: &StateVector, n: usize, q: usize, bit: usize) -> Vec<f64> {
    let mut out = vec![0.0; 1 << n];
    for (i, a) in state.amplitudes().iter().enumerate() {
        if (i >> q) & 1 == bit {
            out[i & ((1 << n) - 1)] += a.norm_sqr();
        }
    }
    let total: f64 = out.iter().sum();
    out.iter().map(|p| p / total).collect()
}

pub fn random_pm(rng: &mut impl Rng, k: usize, j: f64) -> Vec<f64> {
    (0..k).map(|_| if rng.random::<bool>() { j } else { -j }).collect()
}

pub fn random_gaussian(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    (0..k).map(|_| StandardNormal.sample(rng)).collect()
}

/// Gate application by looping over every amplitude, with no bit tricks.
pub fn naive_apply(amps: &[Complex64], n: usize, gate: &GateMatrix, targets: &[usize]) -> Vec<Complex64> {
    let a = targets.len();
    let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
    for (idx, &amp) in amps.iter().enumerate() {
        let mut sub = 0;
        for &t in targets {
            sub = (sub << 1) | ((idx >> t) & 1);
        }
        let mut base = idx;
        for &t in targets {
            base &= !(1 << t);
        }
        for r in 0..1usize << a {
            let mut j = base;
            for (pos, &t) in targets.iter().enumerate() {
                if (r >> (a - 1 - pos)) & 1 == 1 {
                    j |= 1 << t;
                }
            }
            out[j] += gate.entry(r, sub) * amp;
        }
    }
    let _ = n;
    out
}

/// Register index of a four-spin row label whose first spin is most significant.
pub fn table_row_index(row: usize) -> usize {
    (0..4).fold(0, |acc, k| acc | (((row >> (3 - k)) & 1) << k))
}

/// Four-spin ferromagnetic chain amplitudes after `R₁`, `S₁₂`, `S₂₃`, `S₃₄`,
/// one column per stage, rows ordered `|−−−−⟩ … |++++⟩` with `s_1` first.
pub fn amplitude_columns(j: f64, beta: f64) -> [[f64; 16]; 4] {
    let x = (beta / 2.0).exp();
    let c = 2.0 * (beta * j).cosh();
    let xj = |k: f64| x.powf(k * j);
    let r2 = 2f64.sqrt();
    let col3 = {
        let mut v = [0.0; 16];
        v[0] = 1.0 / r2;
        v[8] = 1.0 / r2;
        v
    };
    let col4 = {
        let mut v = [0.0; 16];
        let d = (2.0 * c).sqrt();
        v[0] = xj(1.0) / d;
        v[4] = -xj(-1.0) / d;
        v[8] = xj(-1.0) / d;
        v[12] = -xj(1.0) / d;
        v
    };
    let col5 = {
        let mut v = [0.0; 16];
        let d = r2 * c;
        v[0] = xj(2.0) / d;
        v[2] = -1.0 / d;
        v[4] = -xj(-2.0) / d;
        v[6] = 1.0 / d;
        v[8] = 1.0 / d;
        v[10] = -xj(-2.0) / d;
        v[12] = -1.0 / d;
        v[14] = xj(2.0) / d;
        v
    };
    let col6 = {
        let d = r2 * c.powf(1.5);
        let e = [
            xj(3.0),
            -xj(1.0),
            -xj(-1.0),
            xj(1.0),
            -xj(-1.0),
            xj(-3.0),
            xj(-1.0),
            -xj(1.0),
            xj(1.0),
            -xj(-1.0),
            -xj(-3.0),
            xj(-1.0),
            -xj(1.0),
            xj(-1.0),
            xj(1.0),
            -xj(3.0),
        ];
        let mut v = [0.0; 16];
        for (k, a) in e.iter().enumerate() {
            v[k] = a / d;
        }
        v
    };
    [col3, col4, col5, col6]
}

fn f_fn(x: f64, j: f64, k: f64, l: f64, m: f64) -> f64 {
    x.powf(4.0 * j * k) / (l + m * x.powf(8.0 * j)).sqrt()
}

fn h_fn(x: f64, j: f64, k: f64, l: f64, m: f64, n: f64) -> f64 {
    x.powf(4.0 * j * k) / (l + m * x.powf(8.0 * j) + n * x.powf(16.0 * j)).sqrt()
}

/// Reference cosines for the three-spin loop as `(k, cos θ_k)`, plus `cos θ_8⁻`.
/// Entry `θ_13` is `f_{1,1,3}`.
pub fn angle_table_n3(j: f64, beta: f64) -> (Vec<(usize, f64)>, f64) {
    let x = (beta / 2.0).exp();
    let f = |k, l, m| f_fn(x, j, k, l, m);
    let r2 = 2f64.sqrt();
    let r3 = 3f64.sqrt();
    let cos = vec![
        (1, 1.0 / r2),
        (2, -1.0 / r3),
        (3, -f(0.0, 1.0, 3.0)),
        (4, f(1.0, 1.0, 4.0)),
        (5, f(1.0, 1.0, 5.0)),
        (6, -f(1.0, 1.0, 6.0)),
        (7, -f(0.0, 2.0, 6.0)),
        (15, -1.0 / r2),
        (14, 1.0 / r3),
        (13, f(1.0, 1.0, 3.0)),
        (12, -f(0.0, 4.0, 1.0)),
        (11, -f(0.0, 5.0, 1.0)),
        (10, f(0.0, 6.0, 1.0)),
        (9, f(1.0, 6.0, 2.0)),
    ];
    let c8 = 1.0 / (f(0.0, 1.0, 3.0) * (1.0 + x.powf(4.0 * j)).powf(1.5));
    (cos, c8)
}

/// `θ_13` of the three-spin table with the first two `f` indices exchanged.
pub fn angle_n3_theta13_corrected(j: f64, beta: f64) -> f64 {
    let x = (beta / 2.0).exp();
    f_fn(x, j, 1.0, 3.0, 1.0)
}

/// Reference cosines for the four-spin loop as `(k, cos θ_k)`, plus `sin θ_16⁻`.
pub fn angle_table_n4(j: f64, beta: f64) -> (Vec<(usize, f64)>, f64) {
    let x = (beta / 2.0).exp();
    let h = |k, l, m, n| h_fn(x, j, k, l, m, n);
    let r2 = 2f64.sqrt();
    let r3 = 3f64.sqrt();
    let cos = vec![
        (1, 1.0 / r2),
        (2, -1.0 / r3),
        (3, -h(0.0, 1.0, 3.0, 0.0)),
        (4, h(1.0, 1.0, 4.0, 0.0)),
        (5, h(0.0, 2.0, 4.0, 0.0)),
        (6, -h(0.0, 3.0, 4.0, 0.0)),
        (7, -h(0.0, 4.0, 4.0, 0.0)),
        (8, -h(1.0, 4.0, 5.0, 0.0)),
        (9, -h(1.0, 4.0, 6.0, 0.0)),
        (10, h(1.0, 4.0, 7.0, 0.0)),
        (11, h(0.0, 5.0, 7.0, 0.0)),
        (12, -h(1.0, 5.0, 8.0, 0.0)),
        (13, -h(0.0, 6.0, 8.0, 0.0)),
        (14, h(0.0, 7.0, 8.0, 0.0)),
        (15, h(0.0, 8.0, 8.0, 0.0)),
        (17, -h(2.0, 2.0, 12.0, 2.0)),
        (18, -h(1.0, 2.0, 12.0, 1.0)),
        (19, h(1.0, 2.0, 11.0, 1.0)),
        (20, h(1.0, 2.0, 10.0, 1.0)),
        (21, -h(1.0, 2.0, 9.0, 1.0)),
        (22, -h(1.0, 2.0, 8.0, 1.0)),
        (23, h(1.0, 2.0, 7.0, 1.0)),
        (24, h(0.0, 2.0, 6.0, 1.0)),
        (25, h(2.0, 1.0, 6.0, 1.0)),
        (26, h(1.0, 1.0, 6.0, 0.0)),
        (27, -h(1.0, 1.0, 5.0, 0.0)),
        (28, -h(1.0, 1.0, 4.0, 0.0)),
        (29, h(1.0, 1.0, 3.0, 0.0)),
        (30, h(1.0, 1.0, 2.0, 0.0)),
        (31, -h(1.0, 1.0, 1.0, 0.0)),
    ];
    let s16 = 1.0 / (h(0.0, 1.0, 6.0, 1.0) * (1.0 + x.powf(4.0 * j)).powi(2));
    (cos, s16)
}
