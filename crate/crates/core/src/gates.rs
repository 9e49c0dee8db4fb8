//! The circuit's unitaries: the π/2 rotation `R`, Ising entanglement `S^G`,
//! the sign-carrying XOR `X`, the loop closer `Ω = X_{j,w} S^{|J|}_{i,w}`,
//! their field-carrying variants, and the plain CNOT and phase gates used by
//! the Gray-code pipeline.
//!
//! All matrices are written in the gate basis `|−−⟩, |−+⟩, |+−⟩, |++⟩`
//! with the first target most significant.

use num_complex::Complex64;

use crate::error::{arg, Result};
use crate::statevec::{GateMatrix, StateVector};

/// Coupling, field and temperature of a parameterised gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateParams {
    pub coupling: f64,
    pub delta: f64,
    pub beta: f64,
}

impl GateParams {
    pub fn new(coupling: f64, delta: f64, beta: f64) -> Result<Self> {
        if !(beta >= 0.0 && beta.is_finite()) {
            return arg(format!("beta must be finite and non-negative, got {beta}"));
        }
        if !coupling.is_finite() || !delta.is_finite() {
            return arg("coupling and field must be finite");
        }
        Ok(GateParams { coupling, delta, beta })
    }

    /// `x = e^{β/2}`.
    pub fn x(&self) -> f64 {
        (self.beta / 2.0).exp()
    }

    /// `c = 2cosh(βG)`.
    pub fn c(&self) -> f64 {
        2.0 * (self.beta * self.coupling).cosh()
    }

    /// `c_s^{G,Δ} = 2cosh[β(G + sΔ)]`.
    pub fn c_s(&self, s: i8) -> f64 {
        2.0 * (self.beta * (self.coupling + f64::from(s) * self.delta)).cosh()
    }
}

/// `e^{±t/2} / √(2cosh t)`, evaluated without overflow.
fn split_weights(t: f64) -> (f64, f64) {
    let a = t.abs();
    let log_norm = 0.5 * (a + (-2.0 * a).exp().ln_1p());
    let big = (a / 2.0 - log_norm).exp();
    let small = (-a / 2.0 - log_norm).exp();
    if t >= 0.0 {
        (big, small)
    } else {
        (small, big)
    }
}

fn real_gate(label: String, arity: usize, entries: &[f64]) -> Result<GateMatrix> {
    GateMatrix::from_real(label, arity, entries)
}

/// `R = (1/√2)[[1, 1], [1, −1]]`.
pub fn rotation_r() -> GateMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    real_gate("R".into(), 1, &[h, h, h, -h]).expect("R is unitary")
}

/// `S^G` with amplitudes `x^{±G}/√c`, `c = 2cosh(βG)`.
pub fn ising_entangle(g: f64, beta: f64) -> Result<GateMatrix> {
    let p = GateParams::new(g, 0.0, beta)?;
    let (up, down) = split_weights(p.beta * p.coupling);
    #[rustfmt::skip]
    let e = [
        up, down, 0.0, 0.0,
        -down, up, 0.0, 0.0,
        0.0, 0.0, down, up,
        0.0, 0.0, -up, down,
    ];
    real_gate(format!("S[G={g}]"), 2, &e)
}

/// `X|s_i, s_j⟩ = s_i s_j |s_i, s_i s_j⟩`.
pub fn xor_gate() -> GateMatrix {
    #[rustfmt::skip]
    let e = [
        0.0, -1.0, 0.0, 0.0,
        1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, -1.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
    ];
    real_gate("X".into(), 2, &e).expect("X is unitary")
}

/// Plain CNOT `|s_i, s_j⟩ ↦ |s_i, −s_i s_j⟩`, used to enter and leave Gray order.
pub fn gray_cnot() -> GateMatrix {
    #[rustfmt::skip]
    let e = [
        1.0, 0.0, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
        0.0, 0.0, 1.0, 0.0,
    ];
    real_gate("X'".into(), 2, &e).expect("CNOT is unitary")
}

/// `diag(1, −1)`: phase −1 on `|+⟩`.
pub fn spin_phase() -> GateMatrix {
    real_gate("Z".into(), 1, &[1.0, 0.0, 0.0, -1.0]).expect("Z is unitary")
}

/// `Ω^{|J|}` on `(s_i, s_j, w)`: `X_{j,w} · S^{|J|}_{i,w}` as one 8×8 unitary.
pub fn omega(abs_j: f64, beta: f64) -> Result<GateMatrix> {
    if !(abs_j >= 0.0) {
        return arg(format!("Ω needs a non-negative coupling magnitude, got {abs_j}"));
    }
    let s = ising_entangle(abs_j, beta)?;
    compose_local(format!("Ω[|J|={abs_j}]"), 3, &[(&s, &[0, 2]), (&xor_gate(), &[1, 2])])
}

/// `R^Δ|s⟩ = (x^{sΔ}|−⟩ − s x^{−sΔ}|+⟩)/√c₊^{0,Δ}`.
pub fn rotation_r_field(delta: f64, beta: f64) -> Result<GateMatrix> {
    let p = GateParams::new(0.0, delta, beta)?;
    let (up, down) = split_weights(p.beta * p.delta);
    real_gate(format!("R[Δ={delta}]"), 1, &[down, up, up, -down])
}

/// `S^{G,Δ}|s_i, s_j⟩ = (x^{−(G s_i + Δ)}|s_i, s_j⟩ + s_j x^{G s_i + Δ}|s_i, −s_j⟩)/√c_{s_i}`.
pub fn ising_entangle_field(g: f64, delta: f64, beta: f64) -> Result<GateMatrix> {
    let p = GateParams::new(g, delta, beta)?;
    let mut e = [0.0; 16];
    for si in [-1.0f64, 1.0] {
        let (up, down) = split_weights(p.beta * (p.coupling * si + p.delta));
        let block = if si < 0.0 { 0 } else { 2 };
        for (sj, col) in [(-1.0, block), (1.0, block + 1)] {
            let flip = if col == block { block + 1 } else { block };
            e[col * 4 + col] = down;
            e[flip * 4 + col] = sj * up;
        }
    }
    real_gate(format!("S[G={g},Δ={delta}]"), 2, &e)
}

/// `Ω^{|J|,|Δ|} = X_{j,w} · S^{|J|,|Δ|}_{i,w}`.
pub fn omega_field(abs_j: f64, abs_delta: f64, beta: f64) -> Result<GateMatrix> {
    if !(abs_j >= 0.0 && abs_delta >= 0.0) {
        return arg("Ω needs non-negative coupling and field magnitudes");
    }
    let s = ising_entangle_field(abs_j, abs_delta, beta)?;
    compose_local(
        format!("Ω[|J|={abs_j},|Δ|={abs_delta}]"),
        3,
        &[(&s, &[0, 2]), (&xor_gate(), &[1, 2])],
    )
}

/// Product of gates on a local register of `arity` qubits, applied in list
/// order; target positions count from the most significant local bit.
pub fn compose_local(label: String, arity: usize, ops: &[(&GateMatrix, &[usize])]) -> Result<GateMatrix> {
    let dim = 1usize << arity;
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for col in 0..dim {
        let mut st = StateVector::basis(arity, col)?;
        for (gate, positions) in ops {
            let targets: Vec<usize> = positions.iter().map(|&p| arity - 1 - p).collect();
            st.apply_gate(gate, &targets)?;
        }
        for (row, a) in st.amplitudes().iter().enumerate() {
            entries[row * dim + col] = *a;
        }
    }
    GateMatrix::new(label, arity, entries)
}
