//! Classical Ising models and the exact oracle: energies, Gibbs
//! distributions by enumeration, partial partition functions of closed
//! chains, frustration, ground states and sign conventions.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::{spin_of_bit, Spin};

/// Largest model the enumeration oracle accepts.
pub const ORACLE_MAX_SITES: usize = 24;

/// Relative tolerance used to decide that two energies are equal.
const ENERGY_EPS: f64 = 1e-9;

/// Lattice shape a model was built for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Topology {
    #[serde(rename = "open-chain")]
    OpenChain,
    #[serde(rename = "closed-chain")]
    ClosedChain,
    #[serde(rename = "bethe")]
    Bethe,
    #[serde(rename = "square-2d")]
    Square2d,
    #[serde(rename = "cubic-3d")]
    Cubic3d,
    #[serde(rename = "general")]
    General,
}

impl Topology {
    pub fn as_str(self) -> &'static str {
        match self {
            Topology::OpenChain => "open-chain",
            Topology::ClosedChain => "closed-chain",
            Topology::Bethe => "bethe",
            Topology::Square2d => "square-2d",
            Topology::Cubic3d => "cubic-3d",
            Topology::General => "general",
        }
    }
}

/// Coupling `G` between sites `i` and `j`; positive is ferromagnetic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bond {
    pub i: usize,
    pub j: usize,
    pub coupling: f64,
}

impl Bond {
    pub fn new(i: usize, j: usize, coupling: f64) -> Self {
        Bond { i, j, coupling }
    }
}

/// `H = −Σ G_ij s_i s_j − Σ h_i s_i` at inverse temperature `β`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsingModel {
    num_sites: usize,
    bonds: Vec<Bond>,
    fields: Vec<f64>,
    beta: f64,
    topology: Topology,
}

impl IsingModel {
    /// Validated model; `fields` may be empty for a zero field.
    pub fn new(num_sites: usize, bonds: Vec<Bond>, fields: Vec<f64>, beta: f64, topology: Topology) -> Result<Self> {
        if num_sites == 0 {
            return arg("a model needs at least one site");
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return arg(format!("beta must be positive and finite, got {beta}"));
        }
        let fields = if fields.is_empty() {
            vec![0.0; num_sites]
        } else {
            fields
        };
        if fields.len() != num_sites {
            return arg(format!("{} fields given for {num_sites} sites", fields.len()));
        }
        if let Some(h) = fields.iter().find(|h| !h.is_finite()) {
            return arg(format!("field {h} is not finite"));
        }
        let mut seen = BTreeSet::new();
        for b in &bonds {
            if b.i >= num_sites || b.j >= num_sites {
                return arg(format!(
                    "bond ({}, {}) has an endpoint outside 0..{num_sites}",
                    b.i, b.j
                ));
            }
            if b.i == b.j {
                return arg(format!("bond ({}, {}) is a self-loop", b.i, b.j));
            }
            if !b.coupling.is_finite() {
                return arg(format!("bond ({}, {}) coupling is not finite", b.i, b.j));
            }
            if !seen.insert((b.i.min(b.j), b.i.max(b.j))) {
                return arg(format!("duplicate bond ({}, {})", b.i, b.j));
            }
        }
        Ok(IsingModel {
            num_sites,
            bonds,
            fields,
            beta,
            topology,
        })
    }

    /// Open chain `0−1−…−N` with couplings `G_1..G_{N−1}`.
    pub fn open_chain(couplings: &[f64], beta: f64) -> Result<Self> {
        let bonds = couplings
            .iter()
            .enumerate()
            .map(|(k, &g)| Bond::new(k, k + 1, g))
            .collect();
        Self::new(couplings.len() + 1, bonds, vec![], beta, Topology::OpenChain)
    }

    /// Closed chain of `couplings.len()` sites; the last coupling joins site `N−1` to site 0.
    pub fn closed_chain(couplings: &[f64], beta: f64) -> Result<Self> {
        let n = couplings.len();
        if n < 3 {
            return arg(format!("a closed chain needs at least 3 sites, got {n}"));
        }
        let bonds = couplings
            .iter()
            .enumerate()
            .map(|(k, &g)| Bond::new(k, (k + 1) % n, g))
            .collect();
        Self::new(n, bonds, vec![], beta, Topology::ClosedChain)
    }

    /// Same model with per-site fields replaced.
    pub fn with_fields(self, fields: Vec<f64>) -> Result<Self> {
        Self::new(self.num_sites, self.bonds, fields, self.beta, self.topology)
    }

    /// Same model at a different inverse temperature.
    pub fn with_beta(self, beta: f64) -> Result<Self> {
        Self::new(self.num_sites, self.bonds, self.fields, beta, self.topology)
    }

    /// Same model with one more bond.
    pub fn with_bond(mut self, bond: Bond) -> Result<Self> {
        self.bonds.push(bond);
        Self::new(self.num_sites, self.bonds, self.fields, self.beta, self.topology)
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    /// `x = e^{β/2}`.
    pub fn x(&self) -> f64 {
        (self.beta / 2.0).exp()
    }

    pub fn has_fields(&self) -> bool {
        self.fields.iter().any(|&h| h != 0.0)
    }

    /// Energy of an explicit spin assignment.
    pub fn energy(&self, config: &[Spin]) -> Result<f64> {
        if config.len() != self.num_sites {
            return arg(format!(
                "configuration has {} spins, model has {} sites",
                config.len(),
                self.num_sites
            ));
        }
        if let Some(s) = config.iter().find(|&&s| s != 1 && s != -1) {
            return arg(format!("spin value {s} is not ±1"));
        }
        let bond: f64 = self
            .bonds
            .iter()
            .map(|b| b.coupling * f64::from(config[b.i] * config[b.j]))
            .sum();
        let field: f64 = self.fields.iter().zip(config).map(|(h, &s)| h * f64::from(s)).sum();
        Ok(-bond - field)
    }

    /// Energy of the configuration whose bit `k` is site `k`.
    pub fn energy_of_index(&self, index: u64) -> f64 {
        let mut e = 0.0;
        for b in &self.bonds {
            let same = ((index >> b.i) ^ (index >> b.j)) & 1 == 0;
            e -= if same { b.coupling } else { -b.coupling };
        }
        for (k, &h) in self.fields.iter().enumerate() {
            if h != 0.0 {
                e -= h * f64::from(spin_of_bit(((index >> k) & 1) as usize));
            }
        }
        e
    }

    /// Energies of all `2^N` configurations in index order.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        check_oracle_size(self.num_sites)?;
        let count = 1u64 << self.num_sites;
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            if count >= 1 << 14 {
                return Ok((0..count).into_par_iter().map(|y| self.energy_of_index(y)).collect());
            }
        }
        Ok((0..count).map(|y| self.energy_of_index(y)).collect())
    }
}

fn check_oracle_size(n: usize) -> Result<()> {
    if n > ORACLE_MAX_SITES {
        return Err(Error::Resource {
            what: "enumeration oracle",
            requested: n,
            cap: ORACLE_MAX_SITES,
        });
    }
    Ok(())
}

/// Exact Boltzmann weights of every configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct GibbsDistribution {
    /// `e^{−βH}/Z` indexed by configuration (bit `k` is site `k`).
    pub weights: Vec<f64>,
    /// `Z = Σ e^{−βH}`; may overflow to infinity where `log_partition_function` does not.
    pub partition_function: f64,
    pub log_partition_function: f64,
    pub beta: f64,
}

/// Enumerates all `2^N` configurations.
pub fn gibbs_distribution(model: &IsingModel) -> Result<GibbsDistribution> {
    let energies = model.spectrum()?;
    Ok(gibbs_from_energies(&energies, model.beta()))
}

pub(crate) fn gibbs_from_energies(energies: &[f64], beta: f64) -> GibbsDistribution {
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let mut weights: Vec<f64> = energies.iter().map(|&e| (-beta * (e - e_min)).exp()).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let log_z = -beta * e_min + total.ln();
    GibbsDistribution {
        weights,
        partition_function: log_z.exp(),
        log_partition_function: log_z,
        beta,
    }
}

/// Partition functions of a closed chain with its last bond ferro or antiferro.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialPartitionPair {
    /// `Z_N` with `J_N = +|J_N|`.
    pub z_plus: f64,
    /// `Z_N` with `J_N = −|J_N|`.
    pub z_minus: f64,
    /// `Z_k^0` for `k = 2..=N` (constraint `s_k = s_1`).
    pub z0: Vec<f64>,
    /// `Z_k^1` for `k = 2..=N` (constraint `s_k = −s_1`).
    pub z1: Vec<f64>,
    pub abs_jn: f64,
    pub beta: f64,
}

impl PartialPartitionPair {
    /// `Z⁺/Z⁻`.
    pub fn ratio(&self) -> f64 {
        self.z_plus / self.z_minus
    }

    /// Probability that measuring the closing workbit gives a ferromagnetic bond.
    pub fn ferro_probability(&self) -> f64 {
        self.z_plus / (self.z_plus + self.z_minus)
    }
}

/// Splits the closed-chain partition function on the constraint `s_k = ±s_1`
/// and recurses down to the two-spin base case `Z_2^0 = 2x^{2J_1}`,
/// `Z_2^1 = 2x^{−2J_1}`. Each level is `Z_k^0 = x^{2J_{k−1}} Z_{k−1}^0 +
/// x^{−2J_{k−1}} Z_{k−1}^1` and symmetrically for `Z_k^1`; this reproduces
/// enumeration exactly with no extra per-level factor.
pub fn partial_partition_functions(couplings: &[f64], abs_jn: f64, beta: f64) -> Result<PartialPartitionPair> {
    let n = couplings.len() + 1;
    if n < 3 {
        return arg(format!("the recursion needs N ≥ 3, got N = {n}"));
    }
    if !(beta >= 0.0 && beta.is_finite()) {
        return arg(format!("beta must be finite and non-negative, got {beta}"));
    }
    let x2 = |j: f64| (beta * j).exp();
    let mut z0 = vec![2.0 * x2(couplings[0])];
    let mut z1 = vec![2.0 * x2(-couplings[0])];
    for &j in &couplings[1..] {
        let (a, b) = (*z0.last().unwrap(), *z1.last().unwrap());
        z0.push(x2(j) * a + x2(-j) * b);
        z1.push(x2(-j) * a + x2(j) * b);
    }
    let (a, b) = (*z0.last().unwrap(), *z1.last().unwrap());
    let j = abs_jn.abs();
    Ok(PartialPartitionPair {
        z_plus: x2(j) * a + x2(-j) * b,
        z_minus: x2(-j) * a + x2(j) * b,
        z0,
        z1,
        abs_jn: j,
        beta,
    })
}

/// `f_N(k)`: sum of `x^{4ΣJ}` over all `k`-subsets of the open-chain couplings.
pub fn subset_sum_generator(couplings: &[f64], k: usize, beta: f64) -> f64 {
    // Elementary symmetric polynomial of the terms x^{4J_i}.
    let terms: Vec<f64> = couplings.iter().map(|&j| (2.0 * beta * j).exp()).collect();
    let mut e = vec![0.0; terms.len() + 1];
    e[0] = 1.0;
    for t in &terms {
        for m in (1..e.len()).rev() {
            e[m] += e[m - 1] * t;
        }
    }
    e.get(k).copied().unwrap_or(0.0)
}

/// Closed-chain partition function from the subset expansion
/// `Z = 2 x^{−2(J+ΣJ_i)} Σ_k x^{2(J + (−1)^{k+N−1} J_N)} f_N(k)` with `J = |J_N|`.
pub fn partition_expansion(couplings: &[f64], j_n: f64, beta: f64) -> Result<f64> {
    let n = couplings.len() + 1;
    if n < 3 {
        return arg(format!("the expansion needs N ≥ 3, got N = {n}"));
    }
    let j = j_n.abs();
    let sum_j: f64 = couplings.iter().sum();
    let mut total = 0.0;
    for k in 0..n {
        let sign = if (k + n - 1) % 2 == 0 { 1.0 } else { -1.0 };
        total += (beta * (j + sign * j_n)).exp() * subset_sum_generator(couplings, k, beta);
    }
    Ok(2.0 * (-beta * (j + sum_j)).exp() * total)
}

/// Where `Z⁺/Z⁻` sits relative to `[x^{−4|J|}, x^{4|J|}]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioBounds {
    pub ratio: f64,
    pub lower: f64,
    pub upper: f64,
    pub holds: bool,
    /// `ratio / upper`; tends to `1/N` as `T → 0` when every `|J_i|` is equal.
    pub fraction_of_upper: f64,
}

/// Checks `x^{−4|J|} ≤ Z⁺/Z⁻ ≤ x^{4|J|}` (with a relative slack of `1e-12`).
pub fn ratio_bounds_check(pair: &PartialPartitionPair, j: f64, beta: f64) -> RatioBounds {
    let upper = (2.0 * beta * j.abs()).exp();
    let lower = 1.0 / upper;
    let ratio = pair.ratio();
    let slack = 1e-12;
    RatioBounds {
        ratio,
        lower,
        upper,
        holds: ratio >= lower * (1.0 - slack) && ratio <= upper * (1.0 + slack),
        fraction_of_upper: ratio / upper,
    }
}

/// Whether a closed loop has an odd number of antiferromagnetic bonds.
pub fn frustration_parity(loop_bonds: &[Bond]) -> Result<bool> {
    check_single_loop(loop_bonds)?;
    Ok(loop_bonds.iter().filter(|b| b.coupling < 0.0).count() % 2 == 1)
}

fn check_single_loop(bonds: &[Bond]) -> Result<()> {
    if bonds.len() < 3 {
        return arg(format!("a loop needs at least 3 bonds, got {}", bonds.len()));
    }
    let mut sites: Vec<usize> = bonds.iter().flat_map(|b| [b.i, b.j]).collect();
    sites.sort_unstable();
    sites.dedup();
    if sites.len() != bonds.len() {
        return arg("bonds do not form a single closed loop");
    }
    for &s in &sites {
        let degree = bonds.iter().filter(|b| b.i == s || b.j == s).count();
        if degree != 2 {
            return arg(format!("site {s} has degree {degree} in the loop"));
        }
    }
    let mut visited = vec![sites[0]];
    let mut current = sites[0];
    let mut prev_bond = usize::MAX;
    loop {
        let (k, b) = bonds
            .iter()
            .enumerate()
            .find(|&(k, b)| k != prev_bond && (b.i == current || b.j == current))
            .expect("degree 2 guarantees a next bond");
        let next = if b.i == current { b.j } else { b.i };
        prev_bond = k;
        if next == sites[0] {
            break;
        }
        visited.push(next);
        current = next;
    }
    if visited.len() != sites.len() {
        return arg("bonds form more than one loop");
    }
    Ok(())
}

/// Exhaustive minimum-energy set.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundStates {
    pub energy: f64,
    /// Configuration indices (bit `k` is site `k`), ascending.
    pub configs: Vec<u64>,
}

impl GroundStates {
    pub fn degeneracy(&self) -> usize {
        self.configs.len()
    }
}

/// Whether two energies agree to the tolerance used for ground-state matching.
pub fn energies_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= ENERGY_EPS * (1.0 + a.abs().max(b.abs()))
}

pub fn ground_states(model: &IsingModel) -> Result<GroundStates> {
    let energies = model.spectrum()?;
    let energy = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let configs = energies
        .iter()
        .enumerate()
        .filter(|&(_, &e)| energies_equal(e, energy))
        .map(|(y, _)| y as u64)
        .collect();
    Ok(GroundStates { energy, configs })
}

/// Gibbs mass of the ground-state set, `p* = g e^{−βE_min}/Z`.
pub fn ground_state_probability(model: &IsingModel) -> Result<f64> {
    let gs = ground_states(model)?;
    let gibbs = gibbs_distribution(model)?;
    Ok(gs.configs.iter().map(|&y| gibbs.weights[y as usize]).sum())
}

/// Checks that all `±1` closed chains of length `n` with the given frustration
/// share one sorted energy spectrum.
pub fn loop_spectrum_equivalence(n: usize, frustrated: bool) -> Result<bool> {
    if !(3..=12).contains(&n) {
        return arg(format!("loop length must be in 3..=12, got {n}"));
    }
    let mut reference: Option<Vec<f64>> = None;
    for realization in 0u32..1 << n {
        let couplings: Vec<f64> = (0..n)
            .map(|k| if realization >> k & 1 == 1 { -1.0 } else { 1.0 })
            .collect();
        if (realization.count_ones() % 2 == 1) != frustrated {
            continue;
        }
        let spectrum = sorted_spectrum(&IsingModel::closed_chain(&couplings, 1.0)?)?;
        match &reference {
            None => reference = Some(spectrum),
            Some(r) => {
                if r.iter().zip(&spectrum).any(|(a, b)| !energies_equal(*a, *b)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Energies of all configurations in ascending order.
pub fn sorted_spectrum(model: &IsingModel) -> Result<Vec<f64>> {
    let mut s = model.spectrum()?;
    s.sort_by(f64::total_cmp);
    Ok(s)
}

/// Configuration-dependent amplitude signs of the chain circuits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SignLedger;

impl SignLedger {
    /// `φ_N = −Π_{i=2..N} (−s_i)`. The open-chain circuit produces `−φ_N`.
    pub fn phi(config: &[Spin]) -> Spin {
        -config.iter().skip(1).fold(1i8, |acc, &s| acc * -s)
    }

    /// `Φ_N = (−1)^N Π s_i`, the sign carried by the closed-chain circuit.
    pub fn big_phi(config: &[Spin]) -> Spin {
        let parity: Spin = if config.len() % 2 == 0 { 1 } else { -1 };
        parity * config.iter().product::<Spin>()
    }
}

/// `(1/2β) ln(c₊/c₋)` with `c_s = 2cosh β(J + sΔ)`: the field shift the
/// `S^{J,Δ}` normaliser puts on its control spin.
pub fn field_shift(j: f64, delta: f64, beta: f64) -> f64 {
    (log_cosh(beta * (j + delta)) - log_cosh(beta * (j - delta))) / (2.0 * beta)
}

fn log_cosh(t: f64) -> f64 {
    let a = t.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// Hamiltonian realised by the field-carrying open-chain circuit:
/// bonds `J_i` and fields `h_i = Δ_i − field_shift(J_i, Δ_{i+1})`, `h_N = Δ_N`.
pub fn open_chain_field_model(couplings: &[f64], deltas: &[f64], beta: f64) -> Result<IsingModel> {
    let n = couplings.len() + 1;
    if deltas.len() != n {
        return arg(format!("{} field parameters for {n} sites", deltas.len()));
    }
    let mut h = deltas.to_vec();
    for i in 0..n - 1 {
        h[i] -= field_shift(couplings[i], deltas[i + 1], beta);
    }
    IsingModel::open_chain(couplings, beta)?.with_fields(h)
}

/// Circuit field parameters `Δ` that realise target fields `h` on an open chain.
pub fn open_chain_deltas_for_fields(couplings: &[f64], fields: &[f64], beta: f64) -> Result<Vec<f64>> {
    let n = couplings.len() + 1;
    if fields.len() != n {
        return arg(format!("{} fields for {n} sites", fields.len()));
    }
    let mut deltas = fields.to_vec();
    for i in (0..n - 1).rev() {
        deltas[i] = fields[i] + field_shift(couplings[i], deltas[i + 1], beta);
    }
    Ok(deltas)
}

/// Hamiltonian realised by the field-carrying closed-chain circuit when the
/// closing workbit reads `w`: `J_N = w|J_N|`, `Δ_1 → w|Δ_1|`, and
/// `h_N = Δ_N − field_shift(|J_N|, |Δ_1|)`.
pub fn closed_chain_field_model(
    couplings: &[f64],
    abs_jn: f64,
    deltas: &[f64],
    w: Spin,
    beta: f64,
) -> Result<IsingModel> {
    let n = couplings.len() + 1;
    if n < 3 {
        return arg(format!("a closed chain needs at least 3 sites, got {n}"));
    }
    if deltas.len() != n {
        return arg(format!("{} field parameters for {n} sites", deltas.len()));
    }
    let w = f64::from(w);
    let mut d = deltas.to_vec();
    d[0] = w * deltas[0].abs();
    let mut h = d.clone();
    for i in 0..n - 1 {
        h[i] -= field_shift(couplings[i], d[i + 1], beta);
    }
    h[n - 1] -= field_shift(abs_jn.abs(), deltas[0].abs(), beta);
    let mut all = couplings.to_vec();
    all.push(w * abs_jn.abs());
    IsingModel::closed_chain(&all, beta)?.with_fields(h)
}
