//! Circuit plans for open and closed chains, Bethe trees and assembled
//! lattices, and their execution on a [`StateVector`].
//!
//! Spin site `k` always lives on register qubit `k`. Workbits follow the
//! spins, and the Gray workbit `w_x` (present only when a plan interferes) is
//! the highest qubit.
//!
//! Each plan carries the Hamiltonian it prepares as a deterministic part plus
//! one [`BondDecision`] per workbit whose bond sign is decided by measurement
//! or left in superposition.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{arg, Error, Result};
use crate::gates;
use crate::interference::{
    Interference, InterferenceLayout, InterferenceMode, PlaquetteSpec, Subspace, DEFAULT_PLAQUETTE_CAP,
};
use crate::ising::{gibbs_from_energies, open_chain_field_model, Bond, IsingModel, Topology};
use crate::parallel::Parallelism;
use crate::statevec::{max_qubits, GateMatrix, StateVector};
use crate::Spin;

/// What happens to the workbit that closes a chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosurePolicy {
    /// Measure it; the outcome decides the closing bond sign.
    Measure,
    /// Rotate onto the chosen bond-sign half with `U±`.
    Interfere(Subspace),
    /// Leave it unmeasured, entangled with the spins.
    Superpose,
}

/// Unordered bond key `(min, max)`.
pub type BondKey = (usize, usize);

fn bond_key(i: usize, j: usize) -> BondKey {
    (i.min(j), i.max(j))
}

/// A bond whose sign is carried by a workbit.
#[derive(Clone, Debug, PartialEq)]
pub struct BondDecision {
    pub workbit: usize,
    pub i: usize,
    pub j: usize,
    pub magnitude: f64,
    /// Site and magnitude of a field whose sign follows the bond sign.
    pub signed_field: Option<(usize, f64)>,
    pub measured: bool,
}

impl BondDecision {
    pub fn key(&self) -> BondKey {
        bond_key(self.i, self.j)
    }
}

/// One instruction of a [`CircuitPlan`].
#[derive(Clone, Debug)]
pub enum Step {
    Apply {
        gate: GateMatrix,
        targets: Vec<usize>,
    },
    /// Projective measurement deciding `bond_ledger[decision]`.
    Measure {
        workbit: usize,
        decision: usize,
    },
    Interfere {
        interference: Arc<Interference>,
        layout: InterferenceLayout,
    },
    /// Returns a workbit in a definite state to `|−⟩` so it can be reused.
    Reset {
        qubit: usize,
    },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Apply { gate, targets } => write!(f, "apply {} on {:?}", gate.label(), targets),
            Step::Measure { workbit, decision } => {
                write!(f, "measure workbit q{workbit} (bond decision {decision})")
            }
            Step::Interfere { interference, layout } => write!(
                f,
                "interfere U{} on w=q{} spins {:?} (w_x=q{}, {} rotations)",
                interference.subspace(),
                layout.workbit,
                layout.spins,
                layout.gray_workbit,
                interference.physical_rotations().len()
            ),
            Step::Reset { qubit } => write!(f, "reset q{qubit} to |-⟩"),
        }
    }
}

/// An ordered program realising a `T` operator.
#[derive(Clone, Debug)]
pub struct CircuitPlan {
    label: String,
    num_spins: usize,
    num_qubits: usize,
    num_workbits: usize,
    steps: Vec<Step>,
    bond_ledger: Vec<BondDecision>,
    base_model: IsingModel,
    constraints: Vec<String>,
}

impl CircuitPlan {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn num_spin_qubits(&self) -> usize {
        self.num_spins
    }

    /// Register size including workbits.
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Logical workbits allocated, counting reuses of one qubit separately.
    pub fn num_workbits(&self) -> usize {
        self.num_workbits
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn bond_ledger(&self) -> &[BondDecision] {
        &self.bond_ledger
    }

    /// Hamiltonian without the workbit-decided bonds.
    pub fn base_model(&self) -> &IsingModel {
        &self.base_model
    }

    pub fn beta(&self) -> f64 {
        self.base_model.beta()
    }

    /// Ordering constraints the plan relies on.
    pub fn constraints(&self) -> &[String] {
        &self.constraints
    }

    /// Number of measurement steps.
    pub fn num_measurements(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, Step::Measure { .. })).count()
    }

    /// Whether some workbit stays entangled with the spins.
    pub fn has_unmeasured_workbits(&self) -> bool {
        self.bond_ledger.iter().any(|d| !d.measured)
    }

    /// Hamiltonian for given signs of every ledger entry.
    pub fn realized_model(&self, signs: &[Spin]) -> Result<IsingModel> {
        if signs.len() != self.bond_ledger.len() {
            return arg(format!(
                "{} signs for {} bond decisions",
                signs.len(),
                self.bond_ledger.len()
            ));
        }
        let mut bonds = self.base_model.bonds().to_vec();
        let mut fields = self.base_model.fields().to_vec();
        for (d, &s) in self.bond_ledger.iter().zip(signs) {
            let s = f64::from(s);
            bonds.push(Bond::new(d.i, d.j, s * d.magnitude));
            if let Some((site, h)) = d.signed_field {
                fields[site] += s * h;
            }
        }
        IsingModel::new(
            self.num_spins,
            bonds,
            fields,
            self.base_model.beta(),
            self.base_model.topology(),
        )
    }

    /// Hamiltonian for measured bond signs keyed by bond.
    pub fn realized_model_for(&self, realized: &BTreeMap<BondKey, Spin>) -> Result<IsingModel> {
        let signs = self
            .bond_ledger
            .iter()
            .map(|d| {
                realized
                    .get(&d.key())
                    .copied()
                    .ok_or_else(|| Error::Argument(format!("no sign for bond {:?}", d.key())))
            })
            .collect::<Result<Vec<_>>>()?;
        self.realized_model(&signs)
    }

    /// Exact joint distribution of ledger signs and spins.
    ///
    /// Entry `(pattern << N) | config` is the probability that ledger entry
    /// `k` has sign `+` iff bit `k` of `pattern` is set and the spins are
    /// `config`. With no ledger entries this is the Gibbs distribution.
    pub fn joint_distribution(&self) -> Result<Vec<f64>> {
        let l = self.bond_ledger.len();
        if l + self.num_spins > crate::ising::ORACLE_MAX_SITES {
            return Err(Error::Resource {
                what: "joint oracle",
                requested: l + self.num_spins,
                cap: crate::ising::ORACLE_MAX_SITES,
            });
        }
        let mut energies = Vec::with_capacity(1 << (l + self.num_spins));
        for pattern in 0u64..1 << l {
            let model = self.realized_model(&pattern_signs(pattern, l))?;
            energies.extend(model.spectrum()?);
        }
        Ok(gibbs_from_energies(&energies, self.beta()).weights)
    }

    /// Checks the structural invariants: each logical workbit is measured at
    /// most once, and the first gate touching each connected component of
    /// the interaction graph acts on a single qubit.
    pub fn check_invariants(&self) -> Result<()> {
        let mut measured = BTreeSet::new();
        for step in &self.steps {
            if let Step::Measure { decision, .. } = step {
                if !measured.insert(*decision) {
                    return arg(format!("bond decision {decision} is measured twice"));
                }
            }
        }
        let mut parent: Vec<usize> = (0..self.num_spins).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let pairs = self
            .base_model
            .bonds()
            .iter()
            .map(|b| (b.i, b.j))
            .chain(self.bond_ledger.iter().map(|d| (d.i, d.j)));
        for (i, j) in pairs {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
        let mut started = BTreeSet::new();
        for step in &self.steps {
            if let Step::Apply { gate, targets } = step {
                for &t in targets.iter().filter(|&&t| t < self.num_spins) {
                    let root = find(&mut parent, t);
                    if started.insert(root) && gate.arity() != 1 {
                        return arg(format!(
                            "first gate on the component of site {t} is `{}` on {} qubits",
                            gate.label(),
                            gate.arity()
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Human-readable step list.
    pub fn dump(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CircuitPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "plan {}: {} spins, {} qubits, {} workbits, beta = {}",
            self.label,
            self.num_spins,
            self.num_qubits,
            self.num_workbits,
            self.beta()
        )?;
        for (k, step) in self.steps.iter().enumerate() {
            writeln!(f, "{k:4}  {step}")?;
        }
        for (k, d) in self.bond_ledger.iter().enumerate() {
            writeln!(
                f,
                "bond decision {k}: q{} decides ({}, {}) with |J| = {}{}",
                d.workbit,
                d.i,
                d.j,
                d.magnitude,
                if d.measured { "" } else { " (unmeasured)" }
            )?;
        }
        for c in &self.constraints {
            writeln!(f, "constraint: {c}")?;
        }
        Ok(())
    }
}

/// Signs of `len` ledger entries encoded in `pattern`.
pub fn pattern_signs(pattern: u64, len: usize) -> Vec<Spin> {
    (0..len).map(|k| if pattern >> k & 1 == 1 { 1 } else { -1 }).collect()
}

fn apply(gate: GateMatrix, targets: Vec<usize>) -> Step {
    Step::Apply { gate, targets }
}

fn check_register(num_qubits: usize) -> Result<()> {
    let cap = max_qubits();
    if num_qubits > cap {
        return Err(Error::Resource {
            what: "register",
            requested: num_qubits,
            cap,
        });
    }
    Ok(())
}

/// Open-chain gates: `R` (or `R^{Δ_1}`) on qubit 0, then `S^{G_i}` (or
/// `S^{G_i,Δ_{i+1}}`) on `(i−1, i)`.
fn chain_steps(couplings: &[f64], deltas: Option<&[f64]>, beta: f64, field_on_first: bool) -> Result<Vec<Step>> {
    if let Some(d) = deltas {
        if d.len() != couplings.len() + 1 {
            return arg(format!(
                "{} field parameters for {} sites",
                d.len(),
                couplings.len() + 1
            ));
        }
    }
    let mut steps = Vec::with_capacity(couplings.len() + 1);
    match deltas {
        Some(d) if field_on_first => steps.push(apply(gates::rotation_r_field(d[0], beta)?, vec![0])),
        _ => steps.push(apply(gates::rotation_r(), vec![0])),
    }
    for (k, &g) in couplings.iter().enumerate() {
        let gate = match deltas {
            Some(d) => gates::ising_entangle_field(g, d[k + 1], beta)?,
            None => gates::ising_entangle(g, beta)?,
        };
        steps.push(apply(gate, vec![k, k + 1]));
    }
    Ok(steps)
}

/// `T_N = S_{N−1,N} … S_{12} R_1` for couplings `G_1..G_{N−1}` and optional
/// field parameters `Δ_1..Δ_N`.
pub fn open_chain_circuit(couplings: &[f64], deltas: Option<&[f64]>, beta: f64) -> Result<CircuitPlan> {
    let n = couplings.len() + 1;
    if couplings.is_empty() {
        return arg("an open chain needs at least 2 sites");
    }
    check_register(n)?;
    let model = match deltas {
        Some(d) => open_chain_field_model(couplings, d, beta)?,
        None => IsingModel::open_chain(couplings, beta)?,
    };
    Ok(CircuitPlan {
        label: format!("open-chain N={n}"),
        num_spins: n,
        num_qubits: n,
        num_workbits: 0,
        steps: chain_steps(couplings, deltas, beta, true)?,
        bond_ledger: vec![],
        base_model: model,
        constraints: vec![],
    })
}

/// Open chain closed by `Ω^{|G_N|}` on `(s_N, s_1, w)`.
///
/// With fields the first spin gets a plain `R`, the chain uses `S^{G_i,Δ_{i+1}}`
/// and the loop is closed with `Ω^{|G_N|,|Δ_1|}`, so the field on site 1
/// takes the sign of the closing bond.
pub fn closed_chain_circuit(
    couplings: &[f64],
    abs_closing: f64,
    deltas: Option<&[f64]>,
    beta: f64,
    policy: ClosurePolicy,
) -> Result<CircuitPlan> {
    closed_chain_circuit_with_cap(couplings, abs_closing, deltas, beta, policy, DEFAULT_PLAQUETTE_CAP)
}

/// [`closed_chain_circuit`] with an explicit interference precomputation cap.
pub fn closed_chain_circuit_with_cap(
    couplings: &[f64],
    abs_closing: f64,
    deltas: Option<&[f64]>,
    beta: f64,
    policy: ClosurePolicy,
    cap: usize,
) -> Result<CircuitPlan> {
    let n = couplings.len() + 1;
    if n < 3 {
        return arg(format!("a closed chain needs at least 3 sites, got {n}"));
    }
    if !(abs_closing.is_finite() && abs_closing >= 0.0) {
        return arg(format!(
            "closing magnitude must be finite and non-negative, got {abs_closing}"
        ));
    }
    let interferes = matches!(policy, ClosurePolicy::Interfere(_));
    let num_qubits = n + 1 + usize::from(interferes);
    if let ClosurePolicy::Interfere(_) = policy {
        if n > cap {
            return Err(Error::Capability(format!(
                "interference on a {n}-spin plaquette exceeds the precomputation cap of {cap} spins"
            )));
        }
    }
    check_register(num_qubits)?;
    let w = n;
    let mut steps = chain_steps(couplings, deltas, beta, false)?;
    let omega = match deltas {
        Some(d) => gates::omega_field(abs_closing, d[0].abs(), beta)?,
        None => gates::omega(abs_closing, beta)?,
    };
    steps.push(apply(omega, vec![n - 1, 0, w]));

    let mut spec = PlaquetteSpec::new(couplings.to_vec(), abs_closing, beta)?;
    if let Some(d) = deltas {
        spec = spec.with_deltas(d.to_vec())?;
    }
    let decision = |measured| BondDecision {
        workbit: w,
        i: n - 1,
        j: 0,
        magnitude: abs_closing,
        signed_field: deltas.map(|d| (0, d[0].abs())),
        measured,
    };
    let (base_model, bond_ledger) = match policy {
        ClosurePolicy::Interfere(sub) => {
            let interference = Interference::new(spec.clone(), sub, cap)?;
            steps.push(Step::Interfere {
                interference: Arc::new(interference),
                layout: InterferenceLayout {
                    spins: (0..n).collect(),
                    workbit: w,
                    gray_workbit: n + 1,
                },
            });
            (spec.model(sub.sign())?, vec![])
        }
        ClosurePolicy::Measure => {
            steps.push(Step::Measure {
                workbit: w,
                decision: 0,
            });
            (open_part(&spec)?, vec![decision(true)])
        }
        ClosurePolicy::Superpose => (open_part(&spec)?, vec![decision(false)]),
    };
    Ok(CircuitPlan {
        label: format!("closed-chain N={n} ({})", policy_name(policy)),
        num_spins: n,
        num_qubits,
        num_workbits: 1,
        steps,
        bond_ledger,
        base_model,
        constraints: vec![],
    })
}

fn policy_name(policy: ClosurePolicy) -> String {
    match policy {
        ClosurePolicy::Measure => "measure".into(),
        ClosurePolicy::Interfere(s) => format!("interfere {s}"),
        ClosurePolicy::Superpose => "superpose".into(),
    }
}

/// Closed-chain Hamiltonian minus the closing bond and its signed field.
fn open_part(spec: &PlaquetteSpec) -> Result<IsingModel> {
    let plus = spec.model(1)?;
    let n = spec.num_spins();
    let bonds: Vec<Bond> = plus
        .bonds()
        .iter()
        .copied()
        .filter(|b| bond_key(b.i, b.j) != bond_key(n - 1, 0))
        .collect();
    let mut fields = plus.fields().to_vec();
    if let Some(d) = &spec.deltas {
        fields[0] -= d[0].abs();
    }
    IsingModel::new(n, bonds, fields, spec.beta, Topology::ClosedChain)
}

/// A tree of spins rooted at `root`; edges are `(a, b, G)` in either orientation.
#[derive(Clone, Debug, PartialEq)]
pub struct BetheTree {
    pub num_sites: usize,
    pub root: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

impl BetheTree {
    /// Complete tree with `branching` children per node and `depth` levels
    /// below the root, numbered breadth first, every edge with coupling `g(k)`.
    pub fn regular(branching: usize, depth: usize, mut g: impl FnMut(usize) -> f64) -> Self {
        let mut edges = Vec::new();
        let mut level = vec![0usize];
        let mut next_id = 1;
        for _ in 0..depth {
            let mut next = Vec::new();
            for &p in &level {
                for _ in 0..branching {
                    edges.push((p, next_id, g(edges.len())));
                    next.push(next_id);
                    next_id += 1;
                }
            }
            level = next;
        }
        BetheTree {
            num_sites: next_id,
            root: 0,
            edges,
        }
    }

    /// The same tree with its edge list permuted.
    pub fn reordered(&self, order: &[usize]) -> Self {
        BetheTree {
            edges: order.iter().map(|&k| self.edges[k]).collect(),
            ..self.clone()
        }
    }
}

/// `R` on the root, then `S^G` from parent to child on every edge.
///
/// Edges are taken in the given order whenever the parent is already
/// entangled; other edges wait for a later pass.
pub fn bethe_circuit(tree: &BetheTree, beta: f64) -> Result<CircuitPlan> {
    let n = tree.num_sites;
    if n == 0 || tree.root >= n {
        return arg("tree root must be a valid site");
    }
    if tree.edges.iter().any(|&(a, b, _)| a >= n || b >= n || a == b) {
        return arg("tree edge endpoints must be distinct sites in range");
    }
    if tree.edges.len() + 1 != n {
        return arg(format!(
            "{} edges cannot form a tree on {n} sites; loops need lattice assembly",
            tree.edges.len()
        ));
    }
    let mut adjacency = vec![Vec::new(); n];
    for &(a, b, _) in &tree.edges {
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([tree.root]);
    seen[tree.root] = true;
    while let Some(u) = queue.pop_front() {
        for &v in &adjacency[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return arg("edges contain a cycle or leave sites disconnected; loops need lattice assembly");
    }
    check_register(n)?;

    let mut steps = vec![apply(gates::rotation_r(), vec![tree.root])];
    let mut occupied = vec![false; n];
    occupied[tree.root] = true;
    let mut pending: Vec<(usize, usize, f64)> = tree.edges.clone();
    let mut bonds = Vec::with_capacity(n - 1);
    while !pending.is_empty() {
        let k = pending
            .iter()
            .position(|&(a, b, _)| occupied[a] != occupied[b])
            .expect("a connected tree always has a frontier edge");
        let (a, b, g) = pending.remove(k);
        let (parent, child) = if occupied[a] { (a, b) } else { (b, a) };
        occupied[child] = true;
        steps.push(apply(gates::ising_entangle(g, beta)?, vec![parent, child]));
        bonds.push(Bond::new(parent, child, g));
    }
    let model = IsingModel::new(n, bonds, vec![], beta, Topology::Bethe)?;
    Ok(CircuitPlan {
        label: format!("bethe N={n}"),
        num_spins: n,
        num_qubits: n,
        num_workbits: 0,
        steps,
        bond_ledger: vec![],
        base_model: model,
        constraints: vec![],
    })
}

/// A prefabricated closed plaquette: `couplings[k]` joins `sites[k]` and
/// `sites[(k+1) % L]`. The last bond is closed with `Ω` and its sign is
/// selected by interference.
#[derive(Clone, Debug, PartialEq)]
pub struct PrefabPlaquette {
    pub sites: Vec<usize>,
    pub couplings: Vec<f64>,
}

/// A bond between two plaquettes, closed with `Ω_{i,j,w}` and measured.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Connector {
    pub i: usize,
    pub j: usize,
    pub magnitude: f64,
}

/// Plaquettes, connectors and options of a lattice assembly.
#[derive(Clone, Debug, PartialEq)]
pub struct AssemblySpec {
    pub num_sites: usize,
    /// 2 or 3; recorded in the topology tag.
    pub dimension: usize,
    pub beta: f64,
    pub plaquettes: Vec<PrefabPlaquette>,
    pub connectors: Vec<Connector>,
    /// Order in which connectors are closed; `None` is list order.
    pub connector_order: Option<Vec<usize>>,
    /// Largest plaquette whose interference angles are precomputed.
    pub cap: usize,
    /// Reset and reuse one workbit for every plaquette and connector.
    pub reuse_workbits: bool,
}

impl AssemblySpec {
    /// `rows × cols` square lattice tiled by ferromagnetic 2×2 plaquettes of
    /// coupling `j`, with every remaining nearest-neighbour bond a connector of
    /// magnitude `j`. Site `(r, c)` is `r·cols + c`. Both sides must be even.
    pub fn square_lattice(rows: usize, cols: usize, j: f64, beta: f64) -> Result<Self> {
        Self::cubic_lattice(rows, cols, 1, j, beta).map(|mut s| {
            s.dimension = 2;
            s
        })
    }

    /// `rows × cols × layers` lattice tiled in every layer by 2×2 plaquettes;
    /// all other bonds, including every inter-layer bond, are connectors.
    /// Site `(r, c, l)` is `(l·rows + r)·cols + c`.
    pub fn cubic_lattice(rows: usize, cols: usize, layers: usize, j: f64, beta: f64) -> Result<Self> {
        if rows == 0 || cols == 0 || layers == 0 || rows % 2 != 0 || cols % 2 != 0 {
            return arg(format!(
                "lattice sides must be even and positive, got {rows}×{cols}×{layers}"
            ));
        }
        let site = |r: usize, c: usize, l: usize| (l * rows + r) * cols + c;
        let mut plaquettes = Vec::new();
        let mut in_plaquette = BTreeSet::new();
        for l in 0..layers {
            for r in (0..rows).step_by(2) {
                for c in (0..cols).step_by(2) {
                    let sites = vec![
                        site(r, c, l),
                        site(r, c + 1, l),
                        site(r + 1, c + 1, l),
                        site(r + 1, c, l),
                    ];
                    for k in 0..4 {
                        in_plaquette.insert(bond_key(sites[k], sites[(k + 1) % 4]));
                    }
                    plaquettes.push(PrefabPlaquette {
                        sites,
                        couplings: vec![j; 4],
                    });
                }
            }
        }
        let mut connectors = Vec::new();
        for l in 0..layers {
            for r in 0..rows {
                for c in 0..cols {
                    let here = site(r, c, l);
                    let mut push = |there: usize| {
                        if !in_plaquette.contains(&bond_key(here, there)) {
                            connectors.push(Connector {
                                i: here,
                                j: there,
                                magnitude: j.abs(),
                            });
                        }
                    };
                    if c + 1 < cols {
                        push(site(r, c + 1, l));
                    }
                    if r + 1 < rows {
                        push(site(r + 1, c, l));
                    }
                    if l + 1 < layers {
                        push(site(r, c, l + 1));
                    }
                }
            }
        }
        Ok(AssemblySpec {
            num_sites: rows * cols * layers,
            dimension: if layers > 1 { 3 } else { 2 },
            beta,
            plaquettes,
            connectors,
            connector_order: None,
            cap: DEFAULT_PLAQUETTE_CAP,
            reuse_workbits: true,
        })
    }

    pub fn with_connector_order(mut self, order: Vec<usize>) -> Self {
        self.connector_order = Some(order);
        self
    }
}

/// Plaquettes closed and interfered one by one, then connectors closed with
/// `Ω` and measured immediately.
pub fn lattice_assembly_circuit(spec: &AssemblySpec) -> Result<CircuitPlan> {
    let n = spec.num_sites;
    if !(spec.dimension == 2 || spec.dimension == 3) {
        return arg(format!("assembly dimension must be 2 or 3, got {}", spec.dimension));
    }
    let mut owner = vec![None; n];
    for (p, plaq) in spec.plaquettes.iter().enumerate() {
        if plaq.sites.len() != plaq.couplings.len() {
            return arg(format!(
                "plaquette {p} has {} sites and {} couplings",
                plaq.sites.len(),
                plaq.couplings.len()
            ));
        }
        if plaq.sites.len() > spec.cap {
            return Err(Error::Capability(format!(
                "plaquette {p} has {} spins, above the precomputation cap of {}",
                plaq.sites.len(),
                spec.cap
            )));
        }
        for &s in &plaq.sites {
            if s >= n {
                return arg(format!("plaquette {p} site {s} is outside 0..{n}"));
            }
            if let Some(q) = owner[s] {
                return arg(format!("plaquettes {q} and {p} overlap at site {s}"));
            }
            owner[s] = Some(p);
        }
    }
    if let Some(s) = owner.iter().position(Option::is_none) {
        return arg(format!("site {s} belongs to no plaquette"));
    }
    let mut keys = BTreeSet::new();
    for plaq in &spec.plaquettes {
        let l = plaq.sites.len();
        for k in 0..l {
            keys.insert(bond_key(plaq.sites[k], plaq.sites[(k + 1) % l]));
        }
    }
    for (k, c) in spec.connectors.iter().enumerate() {
        if c.i >= n || c.j >= n || c.i == c.j {
            return arg(format!("connector {k} ({}, {}) is dangling", c.i, c.j));
        }
        if !(c.magnitude.is_finite() && c.magnitude >= 0.0) {
            return arg(format!("connector {k} magnitude must be finite and non-negative"));
        }
        if !keys.insert(bond_key(c.i, c.j)) {
            return arg(format!("connector {k} ({}, {}) duplicates a bond", c.i, c.j));
        }
    }
    let order: Vec<usize> = match &spec.connector_order {
        Some(o) => {
            let mut sorted = o.clone();
            sorted.sort_unstable();
            if sorted != (0..spec.connectors.len()).collect::<Vec<_>>() {
                return arg("connector order must be a permutation of the connector indices");
            }
            o.clone()
        }
        None => (0..spec.connectors.len()).collect(),
    };

    let num_logical = spec.plaquettes.len() + spec.connectors.len();
    let physical_workbits = if spec.reuse_workbits {
        usize::from(num_logical > 0)
    } else {
        num_logical
    };
    let has_gray = !spec.plaquettes.is_empty();
    let num_qubits = n + physical_workbits + usize::from(has_gray);
    check_register(num_qubits)?;
    let gray = n + physical_workbits;
    let workbit_for = |logical: usize| if spec.reuse_workbits { n } else { n + logical };

    let mut steps = Vec::new();
    let mut bonds = Vec::new();
    for (p, plaq) in spec.plaquettes.iter().enumerate() {
        let l = plaq.sites.len();
        let w = workbit_for(p);
        steps.push(apply(gates::rotation_r(), vec![plaq.sites[0]]));
        for k in 0..l - 1 {
            steps.push(apply(
                gates::ising_entangle(plaq.couplings[k], spec.beta)?,
                vec![plaq.sites[k], plaq.sites[k + 1]],
            ));
            bonds.push(Bond::new(plaq.sites[k], plaq.sites[k + 1], plaq.couplings[k]));
        }
        let closing = plaq.couplings[l - 1];
        steps.push(apply(
            gates::omega(closing.abs(), spec.beta)?,
            vec![plaq.sites[l - 1], plaq.sites[0], w],
        ));
        let subspace = Subspace::from_sign(if closing < 0.0 { -1 } else { 1 });
        let pspec = PlaquetteSpec::new(plaq.couplings[..l - 1].to_vec(), closing.abs(), spec.beta)?;
        steps.push(Step::Interfere {
            interference: Arc::new(Interference::new(pspec, subspace, spec.cap)?),
            layout: InterferenceLayout {
                spins: plaq.sites.clone(),
                workbit: w,
                gray_workbit: gray,
            },
        });
        bonds.push(Bond::new(plaq.sites[l - 1], plaq.sites[0], closing));
        if spec.reuse_workbits {
            steps.push(Step::Reset { qubit: w });
        }
    }
    let mut ledger = Vec::with_capacity(spec.connectors.len());
    for &k in &order {
        let c = spec.connectors[k];
        let w = workbit_for(spec.plaquettes.len() + k);
        steps.push(apply(gates::omega(c.magnitude, spec.beta)?, vec![c.i, c.j, w]));
        steps.push(Step::Measure {
            workbit: w,
            decision: ledger.len(),
        });
        ledger.push(BondDecision {
            workbit: w,
            i: c.i,
            j: c.j,
            magnitude: c.magnitude,
            signed_field: None,
            measured: true,
        });
        if spec.reuse_workbits {
            steps.push(Step::Reset { qubit: w });
        }
    }
    let topology = if spec.dimension == 3 {
        Topology::Cubic3d
    } else {
        Topology::Square2d
    };
    let base_model = IsingModel::new(n, bonds, vec![], spec.beta, topology)?;
    Ok(CircuitPlan {
        label: format!(
            "lattice-assembly {}D N={n}, {} plaquettes, {} connectors",
            spec.dimension,
            spec.plaquettes.len(),
            spec.connectors.len()
        ),
        num_spins: n,
        num_qubits,
        num_workbits: num_logical,
        steps,
        bond_ledger: ledger,
        base_model,
        constraints: vec![
            "within a plaquette, S on a spin precedes any Ω that targets the same spin as its XOR control".into(),
            "connector Ω steps commute with each other and may be closed in any order".into(),
        ],
    })
}

/// Forced measurement outcomes keyed by the bond a workbit decides.
pub type OutcomeScript = BTreeMap<BondKey, Spin>;

/// Result of running a plan once.
#[derive(Clone, Debug)]
pub struct ExecutionResult {
    pub final_state: StateVector,
    /// Signs of the measured bonds.
    pub realized_bonds: BTreeMap<BondKey, Spin>,
    /// Norm of the state after each step.
    pub trace: Vec<f64>,
}

impl ExecutionResult {
    /// Hamiltonian the final state samples from; requires every workbit measured.
    pub fn realized_model(&self, plan: &CircuitPlan) -> Result<IsingModel> {
        if plan.has_unmeasured_workbits() {
            return arg("the plan leaves workbits unmeasured; use the joint distribution");
        }
        plan.realized_model_for(&self.realized_bonds)
    }

    /// Distribution of the spin qubits with workbits summed out.
    pub fn spin_probabilities(&self, plan: &CircuitPlan) -> Vec<f64> {
        spin_marginal(&self.final_state, plan.num_spin_qubits())
    }
}

/// Marginal over the lowest `num_spins` qubits.
pub fn spin_marginal(state: &StateVector, num_spins: usize) -> Vec<f64> {
    let mask = (1usize << num_spins) - 1;
    let mut out = vec![0.0; 1 << num_spins];
    for (i, a) in state.amplitudes().iter().enumerate() {
        out[i & mask] += a.norm_sqr();
    }
    out
}

/// Execution knobs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExecOptions {
    pub parallelism: Parallelism,
    pub interference: InterferenceMode,
}

/// Runs `plan` with random measurement outcomes.
pub fn execute<R: Rng + ?Sized>(plan: &CircuitPlan, rng: &mut R) -> Result<ExecutionResult> {
    execute_with(plan, rng, None, ExecOptions::default())
}

/// Runs `plan`, forcing the outcomes listed in `script`.
pub fn execute_scripted<R: Rng + ?Sized>(
    plan: &CircuitPlan,
    rng: &mut R,
    script: &OutcomeScript,
) -> Result<ExecutionResult> {
    execute_with(plan, rng, Some(script), ExecOptions::default())
}

pub fn execute_with<R: Rng + ?Sized>(
    plan: &CircuitPlan,
    rng: &mut R,
    script: Option<&OutcomeScript>,
    options: ExecOptions,
) -> Result<ExecutionResult> {
    let mut state = StateVector::new_ground(plan.num_qubits)?;
    let mut realized = BTreeMap::new();
    let mut trace = Vec::with_capacity(plan.steps.len());
    for step in &plan.steps {
        match step {
            Step::Measure { workbit, decision } => {
                let key = plan.bond_ledger[*decision].key();
                let outcome = match script.and_then(|s| s.get(&key)) {
                    Some(&forced) => {
                        state.project(*workbit, forced)?;
                        forced
                    }
                    None => state.measure_qubit(*workbit, rng)?,
                };
                realized.insert(key, outcome);
            }
            other => run_deterministic(&mut state, other, options)?,
        }
        trace.push(state.norm_sqr().sqrt());
    }
    Ok(ExecutionResult {
        final_state: state,
        realized_bonds: realized,
        trace,
    })
}

/// Applies a step that involves no randomness.
pub(crate) fn run_deterministic(state: &mut StateVector, step: &Step, options: ExecOptions) -> Result<()> {
    match step {
        Step::Apply { gate, targets } => state.apply_gate_with(gate, targets, options.parallelism),
        Step::Interfere { interference, layout } => interference.apply(state, layout, options.interference),
        Step::Reset { qubit } => reset_qubit(state, *qubit),
        Step::Measure { .. } => unreachable!("measurements are handled by the caller"),
    }
}

/// Tolerance for a qubit to count as definite before a reset.
const DEFINITE_TOL: f64 = 1e-9;

fn reset_qubit(state: &mut StateVector, qubit: usize) -> Result<()> {
    let p = state.prob_plus(qubit)?;
    if p > 1.0 - DEFINITE_TOL {
        let not = GateMatrix::from_real("NOT", 1, &[0.0, 1.0, 1.0, 0.0])?;
        state.apply_gate(&not, &[qubit])
    } else if p < DEFINITE_TOL {
        Ok(())
    } else {
        Err(Error::Argument(format!(
            "cannot reset qubit {qubit}: it is not in a definite state (P(+) = {p})"
        )))
    }
}
