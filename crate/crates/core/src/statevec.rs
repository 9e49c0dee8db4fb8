//! Dense complex statevector engine.
//!
//! Bit `k` of an amplitude index is qubit `k`; bit 0 is `|−⟩` (spin −1) and
//! bit 1 is `|+⟩` (spin +1). A gate's own basis lists its first target as the
//! most significant bit, so a two-qubit gate on `[i, j]` is written in the
//! order `|−−⟩, |−+⟩, |+−⟩, |++⟩` of `(s_i, s_j)`.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{arg, Error, Result};
#[cfg(feature = "parallel")]
use crate::parallel::PARALLEL_THRESHOLD;
use crate::parallel::{ordered_sum, Parallelism};
use crate::{spin_of_bit, Spin};

/// Register size used when `ISING_QSIM_MAX_QUBITS` is unset.
pub const DEFAULT_MAX_QUBITS: usize = 24;

/// Environment variable overriding the register cap.
pub const MAX_QUBITS_ENV: &str = "ISING_QSIM_MAX_QUBITS";

/// Hard ceiling on the cap, set by 64-bit basis indices.
const ABSOLUTE_MAX_QUBITS: usize = 40;

/// Tolerance of the unitarity check performed on every gate.
pub const UNITARITY_TOL: f64 = 1e-12;

/// Branch probability below which a measurement is forced to the other outcome.
pub const FORCED_BRANCH_PROB: f64 = 1e-15;

/// Largest register the engine will allocate.
pub fn max_qubits() -> usize {
    std::env::var(MAX_QUBITS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .map_or(DEFAULT_MAX_QUBITS, |n| n.min(ABSOLUTE_MAX_QUBITS))
}

/// A 1-, 2- or 3-qubit unitary with a display label.
#[derive(Clone, Debug, PartialEq)]
pub struct GateMatrix {
    arity: usize,
    entries: Vec<Complex64>,
    label: String,
}

impl GateMatrix {
    /// Builds a gate from row-major entries, rejecting non-unitary input.
    pub fn new(label: impl Into<String>, arity: usize, entries: Vec<Complex64>) -> Result<Self> {
        let label = label.into();
        if !(1..=3).contains(&arity) {
            return arg(format!("gate `{label}`: arity {arity} is not 1, 2 or 3"));
        }
        let dim = 1usize << arity;
        if entries.len() != dim * dim {
            return arg(format!(
                "gate `{label}`: expected {} entries, got {}",
                dim * dim,
                entries.len()
            ));
        }
        let gate = GateMatrix { arity, entries, label };
        let deviation = gate.unitarity_deviation();
        if !(deviation <= UNITARITY_TOL) {
            return Err(Error::NotUnitary {
                label: gate.label,
                deviation,
            });
        }
        Ok(gate)
    }

    /// Builds a gate from real row-major entries.
    pub fn from_real(label: impl Into<String>, arity: usize, entries: &[f64]) -> Result<Self> {
        Self::new(label, arity, entries.iter().map(|&e| Complex64::new(e, 0.0)).collect())
    }

    /// Identity on `arity` qubits.
    pub fn identity(arity: usize) -> Result<Self> {
        let dim = 1usize << arity;
        let mut e = vec![0.0; dim * dim];
        for k in 0..dim {
            e[k * dim + k] = 1.0;
        }
        Self::from_real(format!("I{arity}"), arity, &e)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Matrix dimension `2^arity`.
    pub fn dim(&self) -> usize {
        1 << self.arity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Entry in row `r`, column `c` of the gate basis.
    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim() + c]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Same matrix under a new label.
    pub fn relabeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Largest entry of `|M†M − I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    acc += self.entry(k, r).conj() * self.entry(k, c);
                }
                if r == c {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// Largest entry-wise distance to `other`.
    pub fn max_abs_diff(&self, other: &GateMatrix) -> f64 {
        if self.arity != other.arity {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for GateMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Register offsets of the gate-basis states for `targets`.
fn target_offsets(targets: &[usize]) -> Vec<usize> {
    let k = targets.len();
    (0..1usize << k)
        .map(|r| {
            targets
                .iter()
                .enumerate()
                .filter(|&(pos, _)| (r >> (k - 1 - pos)) & 1 == 1)
                .map(|(_, &t)| 1usize << t)
                .sum()
        })
        .collect()
}

/// The `m`-th index with zero bits at every position of `sorted_targets`.
#[inline]
fn insert_zero_bits(mut m: usize, sorted_targets: &[usize]) -> usize {
    for &t in sorted_targets {
        let low = m & ((1usize << t) - 1);
        m = ((m >> t) << (t + 1)) | low;
    }
    m
}

fn validate_targets(num_qubits: usize, targets: &[usize]) -> Result<()> {
    for (a, &t) in targets.iter().enumerate() {
        if t >= num_qubits {
            return arg(format!(
                "target qubit {t} out of range for a {num_qubits}-qubit register"
            ));
        }
        if targets[..a].contains(&t) {
            return arg(format!("duplicate target qubit {t}"));
        }
    }
    Ok(())
}

/// A normalised complex amplitude vector over `2^num_qubits` basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The all-`|−⟩` register.
    pub fn new_ground(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    /// The computational basis state `index`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_size(num_qubits)?;
        if index >= 1usize << num_qubits {
            return arg(format!("basis index {index} out of range"));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << num_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amps })
    }

    /// Wraps raw amplitudes; the length must be a power of two. No normalisation is applied.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return arg(format!("amplitude count {} is not a power of two", amps.len()));
        }
        let num_qubits = amps.len().trailing_zeros() as usize;
        check_size(num_qubits)?;
        Ok(StateVector { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Number of amplitudes.
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    /// `Σ|a|²`.
    pub fn norm_sqr(&self) -> f64 {
        ordered_sum(self.amps.len(), Parallelism::default(), |i| self.amps[i].norm_sqr())
    }

    /// Largest amplitude-wise distance to `other` (infinite for mismatched sizes).
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        if self.amps.len() != other.amps.len() {
            return f64::INFINITY;
        }
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Applies `gate` to `targets` in place.
    pub fn apply_gate(&mut self, gate: &GateMatrix, targets: &[usize]) -> Result<()> {
        self.apply_gate_with(gate, targets, Parallelism::default())
    }

    /// Applies `gate` to `targets` in place with an explicit execution strategy.
    pub fn apply_gate_with(&mut self, gate: &GateMatrix, targets: &[usize], mode: Parallelism) -> Result<()> {
        if targets.len() != gate.arity() {
            return arg(format!(
                "gate `{}` has arity {} but {} targets were given",
                gate.label(),
                gate.arity(),
                targets.len()
            ));
        }
        validate_targets(self.num_qubits, targets)?;
        let offsets = target_offsets(targets);
        let mut sorted = targets.to_vec();
        sorted.sort_unstable();
        let groups = self.amps.len() >> targets.len();
        let kernel = GateKernel {
            matrix: gate.entries(),
            offsets: &offsets,
            sorted: &sorted,
        };
        match mode {
            Parallelism::Sequential => kernel.run_seq(&mut self.amps, 0..groups),
            #[cfg(feature = "parallel")]
            Parallelism::Parallel => {
                if self.amps.len() < PARALLEL_THRESHOLD {
                    kernel.run_seq(&mut self.amps, 0..groups)
                } else {
                    kernel.run_par(&mut self.amps, groups)
                }
            }
        }
        Ok(())
    }

    /// Consuming variant of [`StateVector::apply_gate`].
    pub fn applied(mut self, gate: &GateMatrix, targets: &[usize]) -> Result<Self> {
        self.apply_gate(gate, targets)?;
        Ok(self)
    }

    /// Rotates every pair of amplitudes whose `qubits` sub-index equals `a` and `b`:
    /// `(x_a, x_b) ↦ (c·x_a + s·x_b, −s·x_a + c·x_b)`. The first entry of
    /// `qubits` is the most significant bit of the sub-index.
    pub fn rotate_levels(&mut self, qubits: &[usize], a: usize, b: usize, c: f64, s: f64) -> Result<()> {
        validate_targets(self.num_qubits, qubits)?;
        let dim = 1usize << qubits.len();
        if a >= dim || b >= dim || a == b {
            return arg(format!("invalid level pair ({a}, {b}) for {} qubits", qubits.len()));
        }
        let offsets = target_offsets(qubits);
        let (oa, ob) = (offsets[a], offsets[b]);
        let mut sorted = qubits.to_vec();
        sorted.sort_unstable();
        for m in 0..self.amps.len() >> qubits.len() {
            let base = insert_zero_bits(m, &sorted);
            let xa = self.amps[base + oa];
            let xb = self.amps[base + ob];
            self.amps[base + oa] = xa * c + xb * s;
            self.amps[base + ob] = xb * c - xa * s;
        }
        Ok(())
    }

    /// `|⟨index|ψ⟩|²`.
    pub fn probability_of(&self, index: usize) -> Result<f64> {
        match self.amps.get(index) {
            Some(a) => Ok(a.norm_sqr()),
            None => arg(format!(
                "basis index {index} out of range for {} amplitudes",
                self.amps.len()
            )),
        }
    }

    /// Born probabilities of every basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Probability that `qubit` is found in `|+⟩`.
    pub fn prob_plus(&self, qubit: usize) -> Result<f64> {
        validate_targets(self.num_qubits, &[qubit])?;
        let (minus, plus) = self.branch_weights(qubit);
        Ok(plus / (minus + plus))
    }

    pub(crate) fn branch_weights(&self, qubit: usize) -> (f64, f64) {
        let mode = Parallelism::default();
        let mask = 1usize << qubit;
        let plus = ordered_sum(self.amps.len(), mode, |i| {
            if i & mask != 0 {
                self.amps[i].norm_sqr()
            } else {
                0.0
            }
        });
        let minus = ordered_sum(self.amps.len(), mode, |i| {
            if i & mask == 0 {
                self.amps[i].norm_sqr()
            } else {
                0.0
            }
        });
        (minus, plus)
    }

    /// Projective measurement of `qubit`, collapsing and renormalising in place.
    ///
    /// One uniform variate is drawn per call. If one branch has probability
    /// below [`FORCED_BRANCH_PROB`] the other branch is taken.
    pub fn measure_qubit<R: Rng + ?Sized>(&mut self, qubit: usize, rng: &mut R) -> Result<Spin> {
        validate_targets(self.num_qubits, &[qubit])?;
        let (minus, plus) = self.branch_weights(qubit);
        let total = minus + plus;
        let p_minus = minus / total;
        let u: f64 = rng.random();
        let outcome = choose_outcome(p_minus, u);
        self.collapse(qubit, outcome, if outcome < 0 { minus } else { plus });
        Ok(outcome)
    }

    /// Projects `qubit` onto `outcome` and renormalises; returns the branch probability.
    pub fn project(&mut self, qubit: usize, outcome: Spin) -> Result<f64> {
        validate_targets(self.num_qubits, &[qubit])?;
        let (minus, plus) = self.branch_weights(qubit);
        let weight = if outcome < 0 { minus } else { plus };
        let probability = weight / (minus + plus);
        if !(probability >= FORCED_BRANCH_PROB) {
            return Err(Error::ImpossibleOutcome {
                qubit,
                outcome,
                probability,
            });
        }
        self.collapse(qubit, outcome, weight);
        Ok(probability)
    }

    pub(crate) fn collapse(&mut self, qubit: usize, outcome: Spin, weight: f64) {
        let keep = if outcome > 0 { 1usize << qubit } else { 0 };
        let mask = 1usize << qubit;
        let scale = 1.0 / weight.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == keep {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// Draws a basis index from the Born distribution using one uniform variate.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                last_nonzero = i;
            }
            acc += p;
            if u < acc {
                return i;
            }
        }
        last_nonzero
    }

    /// Spin of `qubit` in basis state `index`.
    pub fn spin_at(index: usize, qubit: usize) -> Spin {
        spin_of_bit((index >> qubit) & 1)
    }
}

/// Outcome for a uniform variate `u` given the probability of `|−⟩`.
pub(crate) fn choose_outcome(p_minus: f64, u: f64) -> Spin {
    if p_minus < FORCED_BRANCH_PROB {
        1
    } else if 1.0 - p_minus < FORCED_BRANCH_PROB || u < p_minus {
        -1
    } else {
        1
    }
}

fn check_size(num_qubits: usize) -> Result<()> {
    let cap = max_qubits();
    if num_qubits == 0 {
        return arg("a register needs at least one qubit");
    }
    if num_qubits > cap {
        return Err(Error::Resource {
            what: "qubit register",
            requested: num_qubits,
            cap,
        });
    }
    Ok(())
}

struct GateKernel<'a> {
    matrix: &'a [Complex64],
    offsets: &'a [usize],
    sorted: &'a [usize],
}

impl GateKernel<'_> {
    /// # Safety
    /// `amps` must point to the register the kernel was built for, and no
    /// other thread may touch the same group concurrently.
    #[inline]
    unsafe fn apply_group(&self, amps: *mut Complex64, m: usize) {
        let dim = self.offsets.len();
        let base = insert_zero_bits(m, self.sorted);
        let mut local = [Complex64::new(0.0, 0.0); 8];
        // SAFETY: `base + offset` is in bounds for every group index below
        // `len >> arity`, and distinct groups touch disjoint index sets.
        {
            for (r, &off) in self.offsets.iter().enumerate() {
                local[r] = *amps.add(base + off);
            }
            for (r, &off) in self.offsets.iter().enumerate() {
                let row = &self.matrix[r * dim..(r + 1) * dim];
                let mut acc = Complex64::new(0.0, 0.0);
                for (m_rc, x) in row.iter().zip(&local[..dim]) {
                    acc += m_rc * x;
                }
                *amps.add(base + off) = acc;
            }
        }
    }

    fn run_seq(&self, amps: &mut [Complex64], groups: std::ops::Range<usize>) {
        let ptr = amps.as_mut_ptr();
        for m in groups {
            // SAFETY: exclusive borrow of `amps`, groups visited one at a time.
            unsafe { self.apply_group(ptr, m) };
        }
    }

    #[cfg(feature = "parallel")]
    fn run_par(&self, amps: &mut [Complex64], groups: usize) {
        use rayon::prelude::*;

        #[derive(Clone, Copy)]
        struct Shared(*mut Complex64);
        // SAFETY: the pointer is only used to write disjoint index sets from
        // different tasks while `amps` is mutably borrowed by this call.
        unsafe impl Send for Shared {}
        unsafe impl Sync for Shared {}
        impl Shared {
            fn ptr(self) -> *mut Complex64 {
                self.0
            }
        }

        let shared = Shared(amps.as_mut_ptr());
        const BLOCK: usize = 1 << 11;
        (0..groups.div_ceil(BLOCK)).into_par_iter().for_each(|b| {
            let lo = b * BLOCK;
            let hi = (lo + BLOCK).min(groups);
            for m in lo..hi {
                // SAFETY: each group index is visited by exactly one task.
                unsafe { self.apply_group(shared.ptr(), m) };
            }
        });
    }
}
