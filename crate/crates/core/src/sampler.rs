//! Repeated preparation and measurement of a circuit plan.
//!
//! Every sample is an independent run of the plan followed by a measurement
//! of the whole register. The deterministic prefix of a plan, and each
//! branch after a workbit measurement, is computed once and memoised per
//! outcome history; a sample then draws the same uniform variates a literal
//! re-execution would, so the two are bit-identical.
//!
//! Samples are drawn in blocks of [`SAMPLE_BLOCK`]. Block `b` uses the RNG
//! stream `b` of a master seed, so results do not depend on whether blocks
//! run on the rayon pool or sequentially.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::Rng;

use crate::builder::{pattern_signs, run_deterministic, CircuitPlan, ExecOptions, Step};
use crate::error::{arg, Result};
use crate::ising::{energies_equal, IsingModel};
use crate::parallel::Parallelism;
use crate::rng::{stream_rng, SimRng};
use crate::statevec::{choose_outcome, StateVector};
use crate::stats::{binomial_sigma, lag1_autocorrelation, linear_slope, total_variation};
use crate::{builder, Spin};

/// Samples per RNG stream.
pub const SAMPLE_BLOCK: usize = 1 << 14;

/// Largest joint (bond signs, spins) space compared against the oracle automatically.
pub const AUTO_ORACLE_BITS: usize = 20;

/// One measured run: spin configuration and ledger sign pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Draw {
    /// Bit `k` is spin `k`.
    pub config: u64,
    /// Bit `k` set iff ledger entry `k` came out ferromagnetic.
    pub pattern: u64,
}

enum Node {
    Measure {
        workbit: usize,
        step: usize,
        minus: f64,
        plus: f64,
        state: StateVector,
        children: [Option<Box<Node>>; 2],
    },
    Leaf {
        cdf: Vec<f64>,
        last_nonzero: usize,
    },
}

/// A plan with its branch states memoised.
pub struct PreparedSampler<'a> {
    plan: &'a CircuitPlan,
    options: ExecOptions,
    root: Node,
}

impl<'a> PreparedSampler<'a> {
    pub fn new(plan: &'a CircuitPlan, options: ExecOptions) -> Result<Self> {
        let state = StateVector::new_ground(plan.num_qubits())?;
        let root = build_node(plan, state, 0, options)?;
        Ok(PreparedSampler { plan, options, root })
    }

    /// One preparation and full-register measurement.
    pub fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Draw> {
        let plan = self.plan;
        let options = self.options;
        let mut outcomes: Vec<(usize, Spin)> = Vec::new();
        let mut node = &mut self.root;
        loop {
            match node {
                Node::Measure {
                    workbit,
                    step,
                    minus,
                    plus,
                    state,
                    children,
                } => {
                    let total = *minus + *plus;
                    let u: f64 = rng.random();
                    let outcome = choose_outcome(*minus / total, u);
                    let decision = match plan.steps()[*step] {
                        Step::Measure { decision, .. } => decision,
                        _ => unreachable!("measure nodes point at measure steps"),
                    };
                    outcomes.push((decision, outcome));
                    let slot = usize::from(outcome > 0);
                    if children[slot].is_none() {
                        let mut next = state.clone();
                        next.collapse(*workbit, outcome, if outcome < 0 { *minus } else { *plus });
                        children[slot] = Some(Box::new(build_node(plan, next, *step + 1, options)?));
                    }
                    node = children[slot].as_mut().expect("child was just built");
                }
                Node::Leaf { cdf, last_nonzero } => {
                    let u: f64 = rng.random();
                    let k = cdf.partition_point(|&c| c <= u);
                    let index = if k == cdf.len() { *last_nonzero } else { k };
                    return Ok(decode(plan, index, &outcomes));
                }
            }
        }
    }
}

fn build_node(plan: &CircuitPlan, mut state: StateVector, from: usize, options: ExecOptions) -> Result<Node> {
    for (k, step) in plan.steps().iter().enumerate().skip(from) {
        if let Step::Measure { workbit, .. } = step {
            let (minus, plus) = state.branch_weights(*workbit);
            return Ok(Node::Measure {
                workbit: *workbit,
                step: k,
                minus,
                plus,
                state,
                children: [None, None],
            });
        }
        run_deterministic(&mut state, step, options)?;
    }
    let mut cdf = Vec::with_capacity(state.len());
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (i, a) in state.amplitudes().iter().enumerate() {
        let p = a.norm_sqr();
        if p > 0.0 {
            last_nonzero = i;
        }
        acc += p;
        cdf.push(acc);
    }
    Ok(Node::Leaf { cdf, last_nonzero })
}

fn decode(plan: &CircuitPlan, index: usize, outcomes: &[(usize, Spin)]) -> Draw {
    let n = plan.num_spin_qubits();
    let config = (index & ((1usize << n) - 1)) as u64;
    let mut pattern = 0u64;
    for (k, d) in plan.bond_ledger().iter().enumerate() {
        let plus = if d.measured {
            outcomes.iter().any(|&(dec, s)| dec == k && s > 0)
        } else {
            (index >> d.workbit) & 1 == 1
        };
        if plus {
            pattern |= 1 << k;
        }
    }
    Draw { config, pattern }
}

/// Register index and realised signs from one literal execution followed by
/// [`StateVector::sample`]; the reference the cached sampler must reproduce.
pub fn draw_by_reexecution<R: Rng + ?Sized>(plan: &CircuitPlan, rng: &mut R, options: ExecOptions) -> Result<Draw> {
    let run = builder::execute_with(plan, rng, None, options)?;
    let index = run.final_state.sample(rng);
    let outcomes: Vec<(usize, Spin)> = plan
        .bond_ledger()
        .iter()
        .enumerate()
        .filter(|(_, d)| d.measured)
        .map(|(k, d)| (k, run.realized_bonds[&d.key()]))
        .collect();
    Ok(decode(plan, index, &outcomes))
}

/// `count` draws from stream blocks of `seed`, in block order.
pub fn sample_stream(plan: &CircuitPlan, count: usize, seed: u64, options: ExecOptions) -> Result<Vec<Draw>> {
    let blocks = count.div_ceil(SAMPLE_BLOCK);
    let block = |b: usize| -> Result<Vec<Draw>> {
        let len = SAMPLE_BLOCK.min(count - b * SAMPLE_BLOCK);
        let mut rng = stream_rng(seed, b as u64);
        let mut sampler = PreparedSampler::new(plan, options)?;
        (0..len).map(|_| sampler.draw(&mut rng)).collect()
    };
    let parts: Vec<Result<Vec<Draw>>> = match options.parallelism {
        Parallelism::Sequential => (0..blocks).map(block).collect(),
        #[cfg(feature = "parallel")]
        Parallelism::Parallel => {
            use rayon::prelude::*;
            (0..blocks).into_par_iter().map(block).collect()
        }
    };
    let mut out = Vec::with_capacity(count);
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Histogram and observables of repeated sampling.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleReport {
    pub num_spins: usize,
    /// Spin configuration counts (bit `k` is site `k`).
    pub counts: BTreeMap<u64, u64>,
    /// Counts per (ledger sign pattern, configuration).
    pub joint_counts: BTreeMap<(u64, u64), u64>,
    pub total: u64,
    pub energy_mean: f64,
    /// Mean of `Σ s_i / N`.
    pub magnetization_mean: f64,
    pub site_magnetization: Vec<f64>,
    /// Total-variation distance to the exact joint distribution, when computed.
    pub tv_distance_to_oracle: Option<f64>,
    /// Master seed of the sample streams.
    pub seed: u64,
}

impl SampleReport {
    /// Empirical frequency of a spin configuration.
    pub fn frequency(&self, config: u64) -> f64 {
        self.counts.get(&config).copied().unwrap_or(0) as f64 / self.total as f64
    }
}

/// Realised Hamiltonians per ledger sign pattern.
struct ModelCache<'a> {
    plan: &'a CircuitPlan,
    models: HashMap<u64, IsingModel>,
}

impl<'a> ModelCache<'a> {
    fn new(plan: &'a CircuitPlan) -> Self {
        ModelCache {
            plan,
            models: HashMap::new(),
        }
    }

    fn get(&mut self, pattern: u64) -> Result<&IsingModel> {
        if !self.models.contains_key(&pattern) {
            let l = self.plan.bond_ledger().len();
            let m = self.plan.realized_model(&pattern_signs(pattern, l))?;
            self.models.insert(pattern, m);
        }
        Ok(&self.models[&pattern])
    }

    fn energy(&mut self, d: &Draw) -> Result<f64> {
        Ok(self.get(d.pattern)?.energy_of_index(d.config))
    }
}

/// Energies of a list of draws under their realised Hamiltonians.
pub fn draw_energies(plan: &CircuitPlan, draws: &[Draw]) -> Result<Vec<f64>> {
    let mut cache = ModelCache::new(plan);
    draws.iter().map(|d| cache.energy(d)).collect()
}

/// Builds a report from draws; the oracle comparison is made when `oracle` is given.
pub fn summarize(plan: &CircuitPlan, draws: &[Draw], seed: u64, oracle: Option<&[f64]>) -> Result<SampleReport> {
    let n = plan.num_spin_qubits();
    let mut counts = BTreeMap::new();
    let mut joint_counts = BTreeMap::new();
    let mut site = vec![0.0; n];
    let mut mag = 0.0;
    let mut energy = 0.0;
    let mut cache = ModelCache::new(plan);
    for d in draws {
        *counts.entry(d.config).or_insert(0u64) += 1;
        *joint_counts.entry((d.pattern, d.config)).or_insert(0u64) += 1;
        let mut m = 0.0;
        for (k, s) in site.iter_mut().enumerate() {
            let spin = if d.config >> k & 1 == 1 { 1.0 } else { -1.0 };
            *s += spin;
            m += spin;
        }
        mag += m / n as f64;
        energy += cache.energy(d)?;
    }
    let total = draws.len() as u64;
    let t = total as f64;
    let tv = oracle.map(|w| {
        let mut empirical = vec![0.0; w.len()];
        for (&(pattern, config), &c) in &joint_counts {
            empirical[((pattern << n) | config) as usize] = c as f64 / t;
        }
        total_variation(&empirical, w)
    });
    Ok(SampleReport {
        num_spins: n,
        counts,
        joint_counts,
        total,
        energy_mean: energy / t,
        magnetization_mean: mag / t,
        site_magnetization: site.into_iter().map(|s| s / t).collect(),
        tv_distance_to_oracle: tv,
        seed,
    })
}

fn auto_oracle(plan: &CircuitPlan) -> Result<Option<Vec<f64>>> {
    if plan.num_spin_qubits() + plan.bond_ledger().len() <= AUTO_ORACLE_BITS {
        plan.joint_distribution().map(Some)
    } else {
        Ok(None)
    }
}

/// Prepares and measures `plan` `count` times.
///
/// The master seed of the sample streams is drawn from `rng`. The report is
/// compared with the exact joint distribution when it has at most
/// `2^AUTO_ORACLE_BITS` entries.
pub fn sample_configurations(plan: &CircuitPlan, count: usize, rng: &mut SimRng) -> Result<SampleReport> {
    sample_configurations_with(plan, count, rng, ExecOptions::default())
}

pub fn sample_configurations_with(
    plan: &CircuitPlan,
    count: usize,
    rng: &mut SimRng,
    options: ExecOptions,
) -> Result<SampleReport> {
    if count == 0 {
        return arg("sample count must be at least 1");
    }
    let seed: u64 = rng.random();
    let draws = sample_stream(plan, count, seed, options)?;
    let oracle = auto_oracle(plan)?;
    summarize(plan, &draws, seed, oracle.as_deref())
}

/// Lag-1 autocorrelation of sampled energies.
#[derive(Clone, Debug, PartialEq)]
pub struct AutocorrelationReport {
    /// `None` when every sampled energy is equal.
    pub rho1: Option<f64>,
    /// `4/√count`.
    pub bound: f64,
    pub count: usize,
}

impl AutocorrelationReport {
    pub fn within_bound(&self) -> bool {
        self.rho1.map_or(true, |r| r.abs() < self.bound)
    }
}

pub fn autocorrelation_check(plan: &CircuitPlan, count: usize, rng: &mut SimRng) -> Result<AutocorrelationReport> {
    if count < 1000 {
        return arg(format!("autocorrelation needs at least 1000 samples, got {count}"));
    }
    let seed: u64 = rng.random();
    let draws = sample_stream(plan, count, seed, ExecOptions::default())?;
    let energies = draw_energies(plan, &draws)?;
    Ok(AutocorrelationReport {
        rho1: lag1_autocorrelation(&energies),
        bound: 4.0 / (count as f64).sqrt(),
        count,
    })
}

/// Outcome of a prepare-and-measure ground-state search.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundSearchReport {
    /// Lowest-energy configuration seen (bit `k` is site `k`).
    pub config: u64,
    pub energy: f64,
    /// Runs performed, at least 1.
    pub attempts: u64,
    /// Whether `config` is a certified minimum of its realised Hamiltonian.
    pub verified: bool,
    /// Exact minimum energy, for plans without workbit-decided bonds.
    pub oracle_min: Option<f64>,
    /// Probability that one run hits a ground state.
    pub p_star: Option<f64>,
    /// `1/p*`.
    pub expected_attempts: Option<f64>,
}

/// Exact data for verified ground-state searches.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundOracle {
    /// Minimum energy of the realised Hamiltonian per ledger pattern.
    pub min_energy: Vec<f64>,
    pub p_star: f64,
}

impl GroundOracle {
    pub fn for_plan(plan: &CircuitPlan) -> Result<Self> {
        let n = plan.num_spin_qubits();
        let l = plan.bond_ledger().len();
        let joint = plan.joint_distribution()?;
        let mut min_energy = Vec::with_capacity(1 << l);
        let mut p_star = 0.0;
        for pattern in 0u64..1 << l {
            let model = plan.realized_model(&pattern_signs(pattern, l))?;
            let spectrum = model.spectrum()?;
            let e_min = spectrum.iter().copied().fold(f64::INFINITY, f64::min);
            for (y, &e) in spectrum.iter().enumerate() {
                if energies_equal(e, e_min) {
                    p_star += joint[((pattern as usize) << n) | y];
                }
            }
            min_energy.push(e_min);
        }
        Ok(GroundOracle { min_energy, p_star })
    }
}

/// Prepares and measures until a ground state is certified by `oracle`, or
/// `max_attempts` runs have been made.
///
/// Without an oracle the search runs all `max_attempts` and reports the
/// lowest energy seen, flagged as not verified.
pub fn ground_state_search<R: Rng + ?Sized>(
    plan: &CircuitPlan,
    rng: &mut R,
    max_attempts: u64,
    oracle: Option<&GroundOracle>,
) -> Result<GroundSearchReport> {
    if max_attempts == 0 {
        return arg("max_attempts must be at least 1");
    }
    let mut sampler = PreparedSampler::new(plan, ExecOptions::default())?;
    let mut cache = ModelCache::new(plan);
    let mut best: Option<(Draw, f64)> = None;
    let mut attempts = 0;
    let mut verified = false;
    while attempts < max_attempts {
        attempts += 1;
        let d = sampler.draw(rng)?;
        let e = cache.energy(&d)?;
        if best.map_or(true, |(_, be)| e < be) {
            best = Some((d, e));
        }
        if let Some(o) = oracle {
            if energies_equal(e, o.min_energy[d.pattern as usize]) {
                best = Some((d, e));
                verified = true;
                break;
            }
        }
    }
    let (draw, energy) = best.expect("at least one attempt");
    let oracle_min = oracle.filter(|o| o.min_energy.len() == 1).map(|o| o.min_energy[0]);
    Ok(GroundSearchReport {
        config: draw.config,
        energy,
        attempts,
        verified,
        oracle_min,
        p_star: oracle.map(|o| o.p_star),
        expected_attempts: oracle.map(|o| 1.0 / o.p_star),
    })
}

/// Empirical and exact statistics of one workbit-decided bond sign.
#[derive(Clone, Debug, PartialEq)]
pub struct BondSignReport {
    pub ferro: u64,
    pub antiferro: u64,
    pub p_hat: f64,
    pub q_hat: f64,
    /// `p̂/q̂`; infinite when no antiferromagnetic outcome was seen.
    pub ratio_hat: f64,
    /// Exact probability of a ferromagnetic outcome.
    pub p_oracle: f64,
    /// Binomial standard error at `p_oracle`.
    pub sigma: f64,
    pub within_3sigma: bool,
    /// `x^{−4|J|}` and `x^{4|J|}`.
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// Exact ratio inside the bounds.
    pub oracle_within_bounds: bool,
    /// Empirical ratio inside the bounds within three standard errors.
    pub empirical_within_bounds: bool,
}

/// Frequency of a ferromagnetic outcome for ledger entry `decision`.
pub fn bond_sign_frequency(
    plan: &CircuitPlan,
    decision: usize,
    count: usize,
    rng: &mut SimRng,
) -> Result<BondSignReport> {
    let Some(entry) = plan.bond_ledger().get(decision) else {
        return arg(format!("plan has no bond decision {decision}"));
    };
    if count == 0 {
        return arg("sample count must be at least 1");
    }
    let n = plan.num_spin_qubits();
    let joint = plan.joint_distribution()?;
    let p_oracle: f64 = joint
        .iter()
        .enumerate()
        .filter(|(idx, _)| (idx >> n) >> decision & 1 == 1)
        .map(|(_, w)| w)
        .sum();
    let seed: u64 = rng.random();
    let draws = sample_stream(plan, count, seed, ExecOptions::default())?;
    let ferro = draws.iter().filter(|d| d.pattern >> decision & 1 == 1).count() as u64;
    let antiferro = count as u64 - ferro;
    let p_hat = ferro as f64 / count as f64;
    let q_hat = 1.0 - p_hat;
    let ratio_hat = p_hat / q_hat;
    let sigma = binomial_sigma(p_oracle, count as u64);
    let bound = (2.0 * plan.beta() * entry.magnitude).exp();
    let (lower, upper) = (1.0 / bound, bound);
    let p_ratio = p_oracle / (1.0 - p_oracle);
    let sigma_ratio = sigma / (1.0 - p_oracle).powi(2);
    Ok(BondSignReport {
        ferro,
        antiferro,
        p_hat,
        q_hat,
        ratio_hat,
        p_oracle,
        sigma,
        within_3sigma: (p_hat - p_oracle).abs() <= 3.0 * sigma,
        lower_bound: lower,
        upper_bound: upper,
        oracle_within_bounds: p_ratio >= lower * (1.0 - 1e-12) && p_ratio <= upper * (1.0 + 1e-12),
        empirical_within_bounds: ratio_hat - 3.0 * sigma_ratio <= upper && ratio_hat + 3.0 * sigma_ratio >= lower,
    })
}

/// Frustrated fraction of the connector-formed plaquettes at one `β`.
#[derive(Clone, Debug, PartialEq)]
pub struct DefectRow {
    pub beta: f64,
    pub frustrated_fraction: f64,
    /// Binomial standard error over all inspected loops.
    pub sigma: f64,
    pub oracle_fraction: Option<f64>,
    pub loops_per_sample: usize,
    pub samples: usize,
}

/// Defect fractions across a `β` grid and the large-`β` log slope.
#[derive(Clone, Debug, PartialEq)]
pub struct DefectScan {
    pub rows: Vec<DefectRow>,
    /// Least-squares slope of `ln(fraction)` against `β` over rows with `β ≥ slope_from`.
    pub log_slope: Option<f64>,
    pub slope_from: f64,
}

impl DefectScan {
    /// Whether the measured fraction never increases with `β`.
    pub fn is_monotone_decreasing(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].frustrated_fraction <= w[0].frustrated_fraction)
    }
}

fn loop_sign(plan: &CircuitPlan, edges: &[(usize, usize); 4], pattern: u64) -> f64 {
    let mut sign = 1.0;
    for &(a, b) in edges {
        let k = (a.min(b), a.max(b));
        if let Some(pos) = plan.bond_ledger().iter().position(|d| d.key() == k) {
            if pattern >> pos & 1 == 0 {
                sign = -sign;
            }
        } else if let Some(bond) = plan
            .base_model()
            .bonds()
            .iter()
            .find(|b| (b.i.min(b.j), b.i.max(b.j)) == k)
        {
            if bond.coupling < 0.0 {
                sign = -sign;
            }
        }
    }
    sign
}

/// Four-site cycles of the bond graph that contain at least one connector.
fn loop_edges(plan: &CircuitPlan) -> Vec<[(usize, usize); 4]> {
    let n = plan.num_spin_qubits();
    let mut keys = BTreeSet::new();
    for b in plan.base_model().bonds() {
        keys.insert((b.i.min(b.j), b.i.max(b.j)));
    }
    let connectors: BTreeSet<_> = plan.bond_ledger().iter().map(|d| d.key()).collect();
    keys.extend(connectors.iter().copied());
    let has = |a: usize, b: usize| keys.contains(&(a.min(b), a.max(b)));
    let mut out = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let sites = [a, b, c, d];
                    if a >= b.min(c).min(d) || b > d {
                        continue;
                    }
                    if sites.iter().collect::<BTreeSet<_>>().len() != 4 {
                        continue;
                    }
                    if !(has(a, b) && has(b, c) && has(c, d) && has(d, a)) {
                        continue;
                    }
                    let mut edges = [
                        (a.min(b), a.max(b)),
                        (b.min(c), b.max(c)),
                        (c.min(d), c.max(d)),
                        (d.min(a), d.max(a)),
                    ];
                    if !edges.iter().any(|e| connectors.contains(e)) {
                        continue;
                    }
                    edges.sort_unstable();
                    out.insert(edges);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Fraction of frustrated connector-formed plaquettes as a function of `β`.
///
/// A loop counts when it is a four-site cycle of the lattice containing at
/// least one connector. The slope is fitted over rows with `β ≥ slope_from`.
pub fn defect_density_scan(
    spec: &builder::AssemblySpec,
    betas: &[f64],
    samples_per_beta: usize,
    slope_from: f64,
    rng: &mut SimRng,
) -> Result<DefectScan> {
    if samples_per_beta == 0 || betas.is_empty() {
        return arg("defect scan needs at least one beta and one sample");
    }
    let mut rows = Vec::with_capacity(betas.len());
    for &beta in betas {
        let plan = builder::lattice_assembly_circuit(&builder::AssemblySpec { beta, ..spec.clone() })?;
        let loops = loop_edges(&plan);
        if loops.is_empty() {
            return arg("the assembly has no connector-formed plaquettes");
        }
        let l = plan.bond_ledger().len();
        let frac = |pattern: u64| {
            loops.iter().filter(|e| loop_sign(&plan, e, pattern) < 0.0).count() as f64 / loops.len() as f64
        };
        let oracle_fraction = if plan.num_spin_qubits() + l <= AUTO_ORACLE_BITS {
            let joint = plan.joint_distribution()?;
            let n = plan.num_spin_qubits();
            let mut f = 0.0;
            for pattern in 0u64..1 << l {
                let lo = (pattern as usize) << n;
                let mass: f64 = joint[lo..lo + (1 << n)].iter().sum();
                f += mass * frac(pattern);
            }
            Some(f)
        } else {
            None
        };
        let seed: u64 = rng.random();
        let draws = sample_stream(&plan, samples_per_beta, seed, ExecOptions::default())?;
        let fraction = draws.iter().map(|d| frac(d.pattern)).sum::<f64>() / draws.len() as f64;
        let trials = (draws.len() * loops.len()) as u64;
        rows.push(DefectRow {
            beta,
            frustrated_fraction: fraction,
            sigma: binomial_sigma(fraction, trials),
            oracle_fraction,
            loops_per_sample: loops.len(),
            samples: samples_per_beta,
        });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| r.beta >= slope_from && r.frustrated_fraction > 0.0)
        .map(|r| (r.beta, r.frustrated_fraction.ln()))
        .unzip();
    Ok(DefectScan {
        log_slope: linear_slope(&xs, &ys),
        rows,
        slope_from,
    })
}
