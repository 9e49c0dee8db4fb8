//! Subspace selection after a loop has been closed with `Ω`.
//!
//! Closing a plaquette leaves its spins and the closing workbit `w` in a
//! superposition `|ψ₋⟩ + |ψ₊⟩` of the two bond signs. The interference
//! transformation `U±` is an orthogonal rotation of the `(w, spins)` register
//! that maps this vector onto its normalised `±` half. It is assembled from
//! plane rotations `g_i(θ_i)` acting on the coordinate pair `(e_i, e_{i+1})`,
//! with generalised Euler angles computed from the classically known
//! plaquette amplitudes.
//!
//! Vectors handled here use the *table order*: the register index with the
//! workbit as most significant bit followed by `s_1 … s_N`, permuted into Gray
//! order and multiplied by the parity sign `(−1)^{popcount}`. Plane `(p, p+1)`
//! in table order is the rotation between physical basis states
//! `gray⁻¹(p)` and `gray⁻¹(p+1)`. Those two states are adjacent binary
//! numbers, so a rotation plane generally spans more than one qubit.

use std::fmt;

use crate::error::{arg, Error, Result};
use crate::ising::{closed_chain_field_model, gibbs_from_energies, IsingModel, SignLedger};
use crate::statevec::StateVector;
use crate::{gates, spins_from_index, Spin};

/// Smallest norm of the selected half that can be renormalised.
pub const DEGENERATE_NORM: f64 = 1e-12;

/// Default largest plaquette, in spins, whose amplitudes are precomputed.
pub const DEFAULT_PLAQUETTE_CAP: usize = 6;

/// Tolerance on the norm of a vector passed to [`compute_angles`].
const UNIT_TOL: f64 = 1e-10;

/// Half of the `(w, spins)` space, labelled by the value of the closing workbit.
///
/// `Minus` is the half with an antiferromagnetic closing bond. The plaquette
/// is frustrated on that half when its other bonds carry an even number of
/// antiferromagnetic signs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subspace {
    Minus,
    Plus,
}

impl Subspace {
    pub fn from_sign(sign: Spin) -> Self {
        if sign < 0 {
            Subspace::Minus
        } else {
            Subspace::Plus
        }
    }

    pub fn sign(self) -> Spin {
        match self {
            Subspace::Minus => -1,
            Subspace::Plus => 1,
        }
    }

    /// Half in which a loop with the given open-path couplings is (un)frustrated.
    pub fn for_frustration(open_couplings: &[f64], frustrated: bool) -> Self {
        let antiferro = open_couplings.iter().filter(|&&g| g < 0.0).count();
        let closing_antiferro = (antiferro % 2 == 0) == frustrated;
        Subspace::from_sign(if closing_antiferro { -1 } else { 1 })
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subspace::Minus => "-",
            Subspace::Plus => "+",
        })
    }
}

/// `g_i(θ)`: rotation in the plane `(e_i, e_{i+1})`, `i` counted from 1.
///
/// Acting on a vector it maps `(x_i, x_{i+1}) ↦ (c·x_i + s·x_{i+1}, −s·x_i + c·x_{i+1})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneRotation {
    pub index: usize,
    pub theta: f64,
}

impl PlaneRotation {
    pub fn new(index: usize, theta: f64) -> Self {
        PlaneRotation { index, theta }
    }

    /// The transposed rotation `g_i(−θ)`.
    pub fn inverse(self) -> Self {
        PlaneRotation::new(self.index, -self.theta)
    }

    pub fn apply(&self, v: &mut [f64]) {
        let (s, c) = self.theta.sin_cos();
        let a = self.index - 1;
        let (xa, xb) = (v[a], v[a + 1]);
        v[a] = c * xa + s * xb;
        v[a + 1] = -s * xa + c * xb;
    }
}

/// Generalised Euler angles for a vector of length `2n`.
///
/// `theta(k)` for `k ≠ n` and the two variants of `θ_n` are stored; which one
/// the projection uses depends on [`EulerAngleSet::subspace`].
#[derive(Clone, Debug, PartialEq)]
pub struct EulerAngleSet {
    n: usize,
    theta: Vec<f64>,
    theta_n_plus: f64,
    subspace: Subspace,
    alpha_minus: f64,
    alpha_plus: f64,
}

impl EulerAngleSet {
    /// Half-dimension `n`.
    pub fn half_dim(&self) -> usize {
        self.n
    }

    pub fn subspace(&self) -> Subspace {
        self.subspace
    }

    /// Norm of the lower (`w = −1`) half of the source vector.
    pub fn alpha_minus(&self) -> f64 {
        self.alpha_minus
    }

    /// Norm of the upper (`w = +1`) half of the source vector.
    pub fn alpha_plus(&self) -> f64 {
        self.alpha_plus
    }

    /// `θ_k`, `1 ≤ k ≤ 2n−1`, with `θ_n` taken for the selected subspace.
    pub fn theta(&self, k: usize) -> f64 {
        if k == self.n && self.subspace == Subspace::Plus {
            self.theta_n_plus
        } else {
            self.theta[k - 1]
        }
    }

    /// `θ_n` of the `−` construction.
    pub fn theta_n_minus(&self) -> f64 {
        self.theta[self.n - 1]
    }

    /// `θ_n` of the `+` construction.
    pub fn theta_n_plus(&self) -> f64 {
        self.theta_n_plus
    }

    pub fn cos(&self, k: usize) -> f64 {
        self.theta(k).cos()
    }

    pub fn sin(&self, k: usize) -> f64 {
        self.theta(k).sin()
    }

    /// All angles `θ_1..θ_{2n−1}` for the selected subspace.
    pub fn angles(&self) -> Vec<f64> {
        (1..2 * self.n).map(|k| self.theta(k)).collect()
    }

    /// Same angles targeting the other half.
    pub fn with_subspace(&self, subspace: Subspace) -> Self {
        EulerAngleSet {
            subspace,
            ..self.clone()
        }
    }

    fn rot(&self, k: usize) -> PlaneRotation {
        PlaneRotation::new(k, self.theta(k))
    }

    /// Plane rotations of `U±` in the order they act on a vector.
    pub fn rotation_sequence(&self) -> Vec<PlaneRotation> {
        let n = self.n;
        let mut seq = Vec::with_capacity(3 * n - 2);
        match self.subspace {
            Subspace::Minus => {
                // U₋ = A B Aᵀ with A = g_1 … g_{n−1}, B = g_{2n−1} … g_n.
                seq.extend((1..n).map(|k| self.rot(k).inverse()));
                seq.extend((n..2 * n).rev().map(|k| self.rot(k)));
                seq.extend((1..n).rev().map(|k| self.rot(k)));
            }
            Subspace::Plus => {
                // U₊ = A₊ B₊ᵀ A₊ᵀ with A₊ = g_{n+1} … g_{2n−1}, B₊ = g_1 … g_n.
                seq.extend((n + 1..2 * n).rev().map(|k| self.rot(k)));
                seq.extend((1..=n).map(|k| self.rot(k).inverse()));
                seq.extend((n + 1..2 * n).map(|k| self.rot(k).inverse()));
            }
        }
        seq
    }

    /// Number of plane rotations in `U±`.
    pub fn rotation_count(&self) -> usize {
        3 * self.n - 2
    }

    /// Unit vector in the selected half onto which `U±` maps the source.
    pub fn target_axis(&self) -> Vec<f64> {
        let mut e = vec![0.0; 2 * self.n];
        match self.subspace {
            Subspace::Minus => e[self.n - 1] = 1.0,
            Subspace::Plus => e[self.n] = 1.0,
        }
        e
    }

    /// Source vector rebuilt from the angles by applying the `G` products to
    /// the axis vector `e_n` (or `e_{n+1}`).
    pub fn reconstruct(&self) -> Vec<f64> {
        let n = self.n;
        let mut v = self.target_axis();
        match self.subspace {
            Subspace::Minus => {
                // v = A Bᵀ e_n.
                for k in n..2 * n {
                    self.rot(k).inverse().apply(&mut v);
                }
                for k in (1..n).rev() {
                    self.rot(k).apply(&mut v);
                }
            }
            Subspace::Plus => {
                // v = A₊ B₊ e_{n+1}.
                for k in (1..=n).rev() {
                    self.rot(k).apply(&mut v);
                }
                for k in n + 1..2 * n {
                    self.rot(k).inverse().apply(&mut v);
                }
            }
        }
        v
    }
}

fn angle(c: f64, s: f64) -> f64 {
    s.atan2(c)
}

/// Euler angles of a real unit vector `v` of length `2n`.
///
/// The lower half `v_1..v_n` (workbit `−`) is first rotated onto `e_n` with
/// `θ_1..θ_{n−1}`, then the result is rotated onto `e_n` (for `−`) or
/// `e_{n+1}` (for `+`) with `θ_n..θ_{2n−1}`.
pub fn compute_angles(v: &[f64], subspace: Subspace) -> Result<EulerAngleSet> {
    let m = v.len();
    if m < 2 || m % 2 != 0 {
        return arg(format!("Euler angles need an even length of at least 2, got {m}"));
    }
    if let Some(x) = v.iter().find(|x| !x.is_finite()) {
        return arg(format!("vector entry {x} is not finite"));
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > UNIT_TOL {
        return arg(format!("vector norm {norm} differs from 1"));
    }
    let n = m / 2;
    let alpha_minus = v[..n].iter().map(|x| x * x).sum::<f64>().sqrt();
    let alpha_plus = v[n..].iter().map(|x| x * x).sum::<f64>().sqrt();
    let selected = match subspace {
        Subspace::Minus => alpha_minus,
        Subspace::Plus => alpha_plus,
    };
    if !(selected > DEGENERATE_NORM) {
        return Err(Error::DegenerateSubspace { norm: selected });
    }

    let mut theta = vec![0.0; m - 1];

    // Prefix norms r_j = ‖(v_1..v_j)‖, 1-based.
    let mut r = vec![0.0; n + 1];
    let mut acc = 0.0;
    for j in 1..=n {
        acc += v[j - 1] * v[j - 1];
        r[j] = acc.sqrt();
    }
    for k in 1..n {
        if r[k + 1] == 0.0 {
            continue;
        }
        let c = v[k] / r[k + 1];
        let s = if k == 1 { v[0] / r[2] } else { r[k] / r[k + 1] };
        theta[k - 1] = angle(c, s);
    }

    // v' = (0, …, 0, α₋, v_{n+1}, …, v_{2n}) and its tail norms ρ_j = ‖(v'_j..v'_{2n})‖.
    // With n = 1 there is no lower-half rotation, so the sign of v_1 is folded into v_2.
    let mut vp = vec![0.0; m + 1];
    vp[n] = alpha_minus;
    vp[n + 1..=m].copy_from_slice(&v[n..]);
    if n == 1 && v[0] < 0.0 {
        vp[2] = -vp[2];
    }
    let mut rho = vec![0.0; m + 2];
    let mut acc = 0.0;
    for j in (n..=m).rev() {
        acc += vp[j] * vp[j];
        rho[j] = acc.sqrt();
    }
    for k in n..m {
        if rho[k] == 0.0 {
            continue;
        }
        let c = vp[k] / rho[k];
        let s = if k == m - 1 {
            vp[m] / rho[k]
        } else {
            rho[k + 1] / rho[k]
        };
        theta[k - 1] = angle(c, s);
    }

    let theta_n_plus = if n == 1 {
        angle(alpha_plus, v[0] * v[1].signum())
    } else {
        angle(alpha_plus, alpha_minus)
    };

    Ok(EulerAngleSet {
        n,
        theta,
        theta_n_plus,
        subspace,
        alpha_minus,
        alpha_plus,
    })
}

/// Dense real orthogonal matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl OrthogonalMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, r: usize, c: usize) -> f64 {
        self.entries[r * self.dim + c]
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.entry(r, c) * v[c]).sum())
            .collect()
    }

    /// `max |MᵀM − I|`.
    pub fn orthogonality_deviation(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for a in 0..d {
            for b in 0..d {
                let dot: f64 = (0..d).map(|r| self.entry(r, a) * self.entry(r, b)).sum();
                let expected = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - expected).abs());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &OrthogonalMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `U±` as an explicit `2n × 2n` matrix.
pub fn build_projection_unitary(angles: &EulerAngleSet) -> OrthogonalMatrix {
    let dim = 2 * angles.half_dim();
    let seq = angles.rotation_sequence();
    let mut entries = vec![0.0; dim * dim];
    for col in 0..dim {
        let mut e = vec![0.0; dim];
        e[col] = 1.0;
        for g in &seq {
            g.apply(&mut e);
        }
        for (row, x) in e.into_iter().enumerate() {
            entries[row * dim + col] = x;
        }
    }
    OrthogonalMatrix { dim, entries }
}

/// Plane rotations of `U±` in application order.
pub fn rotation_sequence(angles: &EulerAngleSet) -> Vec<PlaneRotation> {
    angles.rotation_sequence()
}

/// One `X'` step `|s_c, s_t⟩ ↦ |s_c, −s_c s_t⟩` of the Gray transform.
///
/// Positions count from the most significant qubit of the sub-register
/// `(w_x, w, s_1, …, s_N)`, so position 0 is the Gray workbit `w_x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct XorStep {
    pub control: usize,
    pub target: usize,
}

/// XOR steps taking binary order to Gray order on `num_qubits` qubits,
/// starting from the last pair. Running them in reverse order undoes them.
pub fn gray_transform(num_qubits: usize) -> Vec<XorStep> {
    (1..num_qubits)
        .rev()
        .map(|t| XorStep {
            control: t - 1,
            target: t,
        })
        .collect()
}

/// Image of a sub-register index under a list of XOR steps.
pub fn apply_xor_steps(index: usize, num_qubits: usize, steps: &[XorStep]) -> usize {
    let bit = |pos: usize| num_qubits - 1 - pos;
    steps.iter().fold(index, |y, st| {
        if (y >> bit(st.control)) & 1 == 1 {
            y ^ (1 << bit(st.target))
        } else {
            y
        }
    })
}

/// Binary-reflected Gray code of `b`.
pub fn gray_code(b: usize) -> usize {
    b ^ (b >> 1)
}

/// Inverse of [`gray_code`].
pub fn gray_inverse(mut p: usize) -> usize {
    let mut b = 0;
    while p != 0 {
        b ^= p;
        p >>= 1;
    }
    b
}

fn parity_sign(p: usize) -> f64 {
    if p.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Physical (workbit-major) vector to table order: `ṽ[p] = (−1)^{|p|} v[gray⁻¹(p)]`.
pub fn to_table_order(v: &[f64]) -> Vec<f64> {
    (0..v.len()).map(|p| parity_sign(p) * v[gray_inverse(p)]).collect()
}

/// Inverse of [`to_table_order`].
pub fn from_table_order(t: &[f64]) -> Vec<f64> {
    let mut v = vec![0.0; t.len()];
    for (p, &x) in t.iter().enumerate() {
        v[gray_inverse(p)] = parity_sign(p) * x;
    }
    v
}

/// A closed loop `s_1 − s_2 − … − s_N − s_1` whose last bond is closed by `Ω`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaquetteSpec {
    /// `G_1..G_{N−1}` along the open path.
    pub couplings: Vec<f64>,
    /// `|G_N|` of the closing bond between `s_N` and `s_1`.
    pub abs_closing: f64,
    /// Circuit field parameters `Δ_1..Δ_N`, if any.
    pub deltas: Option<Vec<f64>>,
    pub beta: f64,
}

impl PlaquetteSpec {
    pub fn new(couplings: Vec<f64>, abs_closing: f64, beta: f64) -> Result<Self> {
        let spec = PlaquetteSpec {
            couplings,
            abs_closing: abs_closing.abs(),
            deltas: None,
            beta,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_deltas(mut self, deltas: Vec<f64>) -> Result<Self> {
        self.deltas = Some(deltas);
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_spins();
        if n < 3 {
            return arg(format!("a plaquette needs at least 3 spins, got {n}"));
        }
        if let Some(d) = &self.deltas {
            if d.len() != n {
                return arg(format!("{} field parameters for {n} spins", d.len()));
            }
        }
        self.model(1)?;
        Ok(())
    }

    pub fn num_spins(&self) -> usize {
        self.couplings.len() + 1
    }

    /// Closed-chain Hamiltonian realised when the closing workbit reads `w`.
    pub fn model(&self, w: Spin) -> Result<IsingModel> {
        match &self.deltas {
            None => {
                let mut all = self.couplings.clone();
                all.push(f64::from(w) * self.abs_closing);
                IsingModel::closed_chain(&all, self.beta)
            }
            Some(d) => closed_chain_field_model(&self.couplings, self.abs_closing, d, w, self.beta),
        }
    }

    /// Prepared `(w, spins)` amplitudes in workbit-major order, `s_N` least
    /// significant: `Φ_N(s) √(e^{−βH_w(s)}/Σ_{w,s} e^{−βH_w(s)})`.
    pub fn physical_vector(&self) -> Result<Vec<f64>> {
        let n = self.num_spins();
        let size = 1usize << n;
        let mut energies = Vec::with_capacity(2 * size);
        for w in [-1, 1] {
            let model = self.model(w)?;
            for p in 0..size {
                energies.push(model.energy_of_index(loop_to_sites(p, n)));
            }
        }
        let gibbs = gibbs_from_energies(&energies, self.beta);
        Ok((0..2 * size)
            .map(|p| {
                let spins = spins_from_index(loop_to_sites(p % size, n), n);
                f64::from(SignLedger::big_phi(&spins)) * gibbs.weights[p].sqrt()
            })
            .collect())
    }

    /// [`PlaquetteSpec::physical_vector`] in table order.
    pub fn table_vector(&self) -> Result<Vec<f64>> {
        Ok(to_table_order(&self.physical_vector()?))
    }
}

/// Site-order configuration index (bit `k` is `s_{k+1}`) of a loop-order
/// spin index (`s_1` most significant of `n` bits).
fn loop_to_sites(p: usize, n: usize) -> u64 {
    (0..n).fold(0u64, |acc, k| acc | ((((p >> (n - 1 - k)) & 1) as u64) << k))
}

/// Where a plaquette lives in a register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterferenceLayout {
    /// Register qubits of `s_1..s_N`.
    pub spins: Vec<usize>,
    /// Closing workbit `w`.
    pub workbit: usize,
    /// Gray workbit `w_x`, in `|−⟩` before and after.
    pub gray_workbit: usize,
}

impl InterferenceLayout {
    /// Sub-register `(w, s_1, …, s_N)`, most significant first.
    pub fn register(&self) -> Vec<usize> {
        let mut q = vec![self.workbit];
        q.extend(&self.spins);
        q
    }

    /// Sub-register `(w_x, w, s_1, …, s_N)`, most significant first.
    pub fn gray_register(&self) -> Vec<usize> {
        let mut q = vec![self.gray_workbit];
        q.extend(self.register());
        q
    }
}

/// How `U±` is applied to the register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum InterferenceMode {
    /// Two-level rotations between physical basis states.
    #[default]
    Direct,
    /// Gray transform and parity phases, table-order rotations, then both undone.
    GrayPipeline,
}

/// Two-level rotation between physical sub-register levels `a` and `b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevelRotation {
    pub a: usize,
    pub b: usize,
    pub cos: f64,
    pub sin: f64,
}

/// Precomputed interference step for one plaquette and subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct Interference {
    spec: PlaquetteSpec,
    angles: EulerAngleSet,
    table_rotations: Vec<LevelRotation>,
    physical_rotations: Vec<LevelRotation>,
}

impl Interference {
    /// Computes the angles for `spec`; refuses plaquettes above `cap` spins.
    pub fn new(spec: PlaquetteSpec, subspace: Subspace, cap: usize) -> Result<Self> {
        let n = spec.num_spins();
        if n > cap {
            return Err(Error::Capability(format!(
                "interference on a {n}-spin plaquette exceeds the precomputation cap of {cap} spins"
            )));
        }
        let angles = compute_angles(&spec.table_vector()?, subspace)?;
        let table_rotations: Vec<LevelRotation> = angles
            .rotation_sequence()
            .iter()
            .map(|g| {
                let (sin, cos) = g.theta.sin_cos();
                LevelRotation {
                    a: g.index - 1,
                    b: g.index,
                    cos,
                    sin,
                }
            })
            .collect();
        let physical_rotations = table_rotations
            .iter()
            .map(|r| LevelRotation {
                a: gray_inverse(r.a),
                b: gray_inverse(r.b),
                cos: r.cos,
                sin: r.sin * parity_sign(r.a) * parity_sign(r.b),
            })
            .collect();
        Ok(Interference {
            spec,
            angles,
            table_rotations,
            physical_rotations,
        })
    }

    pub fn spec(&self) -> &PlaquetteSpec {
        &self.spec
    }

    pub fn angles(&self) -> &EulerAngleSet {
        &self.angles
    }

    pub fn subspace(&self) -> Subspace {
        self.angles.subspace()
    }

    /// Probability that the closing workbit would read the selected sign.
    pub fn selected_weight(&self) -> f64 {
        match self.subspace() {
            Subspace::Minus => self.angles.alpha_minus().powi(2),
            Subspace::Plus => self.angles.alpha_plus().powi(2),
        }
    }

    /// Rotations between physical `(w, spins)` levels, in application order.
    pub fn physical_rotations(&self) -> &[LevelRotation] {
        &self.physical_rotations
    }

    /// Rotations between table-order levels, in application order.
    pub fn table_rotations(&self) -> &[LevelRotation] {
        &self.table_rotations
    }

    /// Applies `U±` to the plaquette qubits of `state`.
    pub fn apply(&self, state: &mut StateVector, layout: &InterferenceLayout, mode: InterferenceMode) -> Result<()> {
        if layout.spins.len() != self.spec.num_spins() {
            return arg(format!(
                "layout has {} spin qubits for a {}-spin plaquette",
                layout.spins.len(),
                self.spec.num_spins()
            ));
        }
        match mode {
            InterferenceMode::Direct => {
                let qubits = layout.register();
                for r in &self.physical_rotations {
                    state.rotate_levels(&qubits, r.a, r.b, r.cos, r.sin)?;
                }
            }
            InterferenceMode::GrayPipeline => {
                let qubits = layout.gray_register();
                let steps = gray_transform(qubits.len());
                let cnot = gates::gray_cnot();
                let phase = gates::spin_phase();
                for st in &steps {
                    state.apply_gate(&cnot, &[qubits[st.control], qubits[st.target]])?;
                }
                for &q in &qubits {
                    state.apply_gate(&phase, &[q])?;
                }
                for r in &self.table_rotations {
                    state.rotate_levels(&qubits, r.a, r.b, r.cos, r.sin)?;
                }
                for &q in &qubits {
                    state.apply_gate(&phase, &[q])?;
                }
                for st in steps.iter().rev() {
                    state.apply_gate(&cnot, &[qubits[st.control], qubits[st.target]])?;
                }
            }
        }
        Ok(())
    }
}

/// Selects the `subspace` half of a closed plaquette in `state`, using the
/// default precomputation cap and direct rotations.
pub fn apply_interference(
    state: &mut StateVector,
    layout: &InterferenceLayout,
    spec: &PlaquetteSpec,
    subspace: Subspace,
) -> Result<()> {
    Interference::new(spec.clone(), subspace, DEFAULT_PLAQUETTE_CAP)?.apply(state, layout, InterferenceMode::Direct)
}
