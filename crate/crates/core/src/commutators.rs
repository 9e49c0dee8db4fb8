//! Commutation relations of `S` and `Ω` as explicit matrices on small
//! registers.
//!
//! Operators are embedded into the full `2^n`-dimensional register by
//! applying them to every basis state, so each relation is checked entry by
//! entry with no symbolic shortcuts.

use num_complex::Complex64;

use crate::error::Result;
use crate::gates::{ising_entangle, omega};
use crate::statevec::{GateMatrix, StateVector};
use crate::{spin_of_bit, Spin};

/// Dense operator on a register of `qubits` qubits, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RegisterOperator {
    pub qubits: usize,
    pub entries: Vec<Complex64>,
}

impl RegisterOperator {
    /// Product of gates applied in list order to a `qubits`-qubit register.
    pub fn from_gates(qubits: usize, ops: &[(&GateMatrix, &[usize])]) -> Result<Self> {
        let dim = 1usize << qubits;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for col in 0..dim {
            let mut st = StateVector::basis(qubits, col)?;
            for (gate, targets) in ops {
                st.apply_gate(gate, targets)?;
            }
            for (row, a) in st.amplitudes().iter().enumerate() {
                entries[row * dim + col] = *a;
            }
        }
        Ok(RegisterOperator { qubits, entries })
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim() + c]
    }

    pub fn mul(&self, other: &RegisterOperator) -> RegisterOperator {
        let d = self.dim();
        let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.entries[r * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..d {
                    entries[r * d + c] += a * other.entries[k * d + c];
                }
            }
        }
        RegisterOperator {
            qubits: self.qubits,
            entries,
        }
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &RegisterOperator) -> RegisterOperator {
        let ab = self.mul(other);
        let ba = other.mul(self);
        RegisterOperator {
            qubits: self.qubits,
            entries: ab.entries.iter().zip(&ba.entries).map(|(x, y)| x - y).collect(),
        }
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &RegisterOperator) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// One commutator evaluated on a minimal register.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorCheck {
    /// Relation in index notation, e.g. `[S_ij, S_ik]`.
    pub relation: String,
    pub qubits: usize,
    /// Largest entry of the commutator matrix.
    pub residual: f64,
    /// Whether the relation is expected to vanish.
    pub expect_zero: bool,
}

impl CommutatorCheck {
    pub fn passes(&self, tol: f64) -> bool {
        if self.expect_zero {
            self.residual < tol
        } else {
            self.residual >= tol
        }
    }
}

fn s_op(qubits: usize, j: f64, beta: f64, i: usize, k: usize) -> Result<RegisterOperator> {
    RegisterOperator::from_gates(qubits, &[(&ising_entangle(j, beta)?, &[i, k])])
}

fn omega_op(qubits: usize, j: f64, beta: f64, a: usize, b: usize, w: usize) -> Result<RegisterOperator> {
    RegisterOperator::from_gates(qubits, &[(&omega(j.abs(), beta)?, &[a, b, w])])
}

fn check(relation: &str, a: &RegisterOperator, b: &RegisterOperator, expect_zero: bool) -> CommutatorCheck {
    CommutatorCheck {
        relation: relation.to_string(),
        qubits: a.qubits,
        residual: a.commutator(b).max_abs(),
        expect_zero,
    }
}

/// Every `S`/`S`, `Ω`/`Ω` and `S`/`Ω` relation used when assembling lattices.
///
/// Sites are labelled `i, j, k, l` and workbits `w, w1, w2`; each relation
/// runs on the smallest register holding its operands.
pub fn commutator_suite(j: f64, beta: f64) -> Result<Vec<CommutatorCheck>> {
    let (i, jj, k, l) = (0, 1, 2, 3);
    let mut out = Vec::new();

    // Gates sharing their control commute.
    out.push(check(
        "[S_ij, S_ik]",
        &s_op(3, j, beta, i, jj)?,
        &s_op(3, j, beta, i, k)?,
        true,
    ));

    // Ω pairs on (i, j, k) with workbits w1 = 3, w2 = 4.
    let (w1, w2) = (3, 4);
    let a = omega_op(5, j, beta, i, jj, w1)?;
    out.push(check("[Ω_ijw1, Ω_jkw2]", &a, &omega_op(5, j, beta, jj, k, w2)?, true));
    out.push(check("[Ω_ijw1, Ω_ikw2]", &a, &omega_op(5, j, beta, i, k, w2)?, true));
    out.push(check("[Ω_ijw1, Ω_kjw2]", &a, &omega_op(5, j, beta, k, jj, w2)?, true));
    // Disjoint sites need l as well: i, j, k, l, w1, w2 on six qubits.
    let a6 = omega_op(6, j, beta, i, jj, 4)?;
    out.push(check("[Ω_ijw1, Ω_klw2]", &a6, &omega_op(6, j, beta, k, l, 5)?, true));

    // S against Ω with workbit w = 3 (or 4 when l is present).
    let s = s_op(4, j, beta, i, jj)?;
    out.push(check("[S_ij, Ω_ikw]", &s, &omega_op(4, j, beta, i, k, 3)?, true));
    out.push(check("[S_ij, Ω_kiw]", &s, &omega_op(4, j, beta, k, i, 3)?, true));
    out.push(check(
        "[S_ij, Ω_klw]",
        &s_op(5, j, beta, i, jj)?,
        &omega_op(5, j, beta, k, l, 4)?,
        true,
    ));
    out.push(check("[S_ij, Ω_jkw]", &s, &omega_op(4, j, beta, jj, k, 3)?, false));
    out.push(check("[S_ij, Ω_kjw]", &s, &omega_op(4, j, beta, k, jj, 3)?, false));
    Ok(out)
}

/// `[S_ij, Ω_kjw]` on the register `(i, j, k, w) = (0, 1, 2, 3)`.
pub fn s_omega_residual(j: f64, beta: f64) -> Result<RegisterOperator> {
    let s = s_op(4, j, beta, 0, 1)?;
    let o = omega_op(4, j, beta, 2, 1, 3)?;
    Ok(s.commutator(&o))
}

/// Candidate closed form of `[S_ij, Ω_kjw]`, evaluated column by column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidualForm {
    /// `(1/√(c_i c_k)) x^{Js_i}(x^{Js_k} + w x^{−Js_k}) |s_i,−s_j,s_k⟩(|s_j w⟩ − |−s_j w⟩)`.
    Reference,
    /// `(1/c) x^{Js_i}(w x^{−Js_k} − x^{Js_k}) |s_i,−s_j,s_k⟩(|s_j w⟩ + |−s_j w⟩)`,
    /// the form obtained by carrying out both products.
    Derived,
}

/// Matrix of a closed-form expression for `[S_ij, Ω_kjw]` on `(i, j, k, w) = (0, 1, 2, 3)`.
///
/// Both forms assume `J ≥ 0`, so that `S` and `Ω` carry the same coupling.
pub fn s_omega_closed_form(j: f64, beta: f64, form: ResidualForm) -> RegisterOperator {
    let x = (beta / 2.0).exp();
    let c = 2.0 * (beta * j).cosh();
    let dim = 16;
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    let spin = |idx: usize, q: usize| -> Spin { spin_of_bit((idx >> q) & 1) };
    let index = |si: Spin, sj: Spin, sk: Spin, w: Spin| -> usize {
        let b = |s: Spin| usize::from(s > 0);
        b(si) | b(sj) << 1 | b(sk) << 2 | b(w) << 3
    };
    for col in 0..dim {
        let (si, sj, sk, w) = (spin(col, 0), spin(col, 1), spin(col, 2), spin(col, 3));
        let (fi, fk, fw) = (f64::from(si), f64::from(sk), f64::from(w));
        let (coef, rel) = match form {
            ResidualForm::Reference => (x.powf(j * fi) * (x.powf(j * fk) + fw * x.powf(-j * fk)) / c, -1.0),
            ResidualForm::Derived => (x.powf(j * fi) * (fw * x.powf(-j * fk) - x.powf(j * fk)) / c, 1.0),
        };
        entries[index(si, -sj, sk, sj * w) * dim + col] += coef;
        entries[index(si, -sj, sk, -sj * w) * dim + col] += coef * rel;
    }
    RegisterOperator { qubits: 4, entries }
}
