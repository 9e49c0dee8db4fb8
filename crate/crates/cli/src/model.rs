//! Circuit plans for model files.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use clap::ValueEnum;
use ising_qsim::builder::{
    bethe_circuit, closed_chain_circuit, lattice_assembly_circuit, open_chain_circuit, AssemblySpec, BetheTree,
    CircuitPlan, ClosurePolicy, Connector, PrefabPlaquette,
};
use ising_qsim::interference::{Subspace, DEFAULT_PLAQUETTE_CAP};
use ising_qsim::ising::{open_chain_deltas_for_fields, Topology};
use ising_qsim::modelfile::ModelFile;
use sha2::{Digest, Sha256};

/// How the closing bond of a closed chain is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    /// Measure the workbit; the bond sign is sampled.
    Measure,
    /// Interfere into the ferromagnetic closing bond.
    InterferePlus,
    /// Interfere into the antiferromagnetic closing bond.
    InterfereMinus,
}

/// A parsed model file with its content hash.
pub struct LoadedModel {
    pub file: ModelFile,
    /// Lowercase hex SHA-256 of the file bytes.
    pub sha256: String,
}

pub fn load(path: &std::path::Path, beta: Option<f64>) -> Result<LoadedModel> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text = String::from_utf8(bytes.clone()).with_context(|| format!("{} is not UTF-8", path.display()))?;
    let mut file = ModelFile::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(b) = beta {
        file.beta = b;
    }
    file.to_model()
        .with_context(|| format!("validating {}", path.display()))?;
    let sha256 = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    Ok(LoadedModel { file, sha256 })
}

fn key(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

fn bond_map(file: &ModelFile) -> Result<BTreeMap<(usize, usize), f64>> {
    let mut map = BTreeMap::new();
    for &(i, j, g) in &file.bonds {
        if map.insert(key(i, j), g).is_some() {
            bail!("bond ({i}, {j}) is listed twice");
        }
    }
    Ok(map)
}

fn chain_couplings(map: &BTreeMap<(usize, usize), f64>, n: usize) -> Result<Vec<f64>> {
    (0..n - 1)
        .map(|k| {
            map.get(&key(k, k + 1))
                .copied()
                .ok_or_else(|| anyhow!("chain bond ({k}, {}) is missing", k + 1))
        })
        .collect()
}

fn has_fields(file: &ModelFile) -> bool {
    file.fields.iter().any(|&h| h != 0.0)
}

/// Circuit plan preparing the Gibbs state of `file`.
///
/// `policy` applies to closed chains only; without it the closing bond takes
/// the sign written in the file.
pub fn plan_for(file: &ModelFile, policy: Option<PolicyArg>) -> Result<CircuitPlan> {
    let n = file.sites;
    let map = bond_map(file)?;
    if policy.is_some() && file.topology != Topology::ClosedChain {
        bail!("--policy applies to closed-chain models only");
    }
    if has_fields(file) && !matches!(file.topology, Topology::OpenChain) {
        bail!(
            "local fields are supported on open chains only; {} models with fields have no fixed-field circuit",
            file.topology.as_str()
        );
    }
    let plan = match file.topology {
        Topology::OpenChain => {
            if map.len() != n.saturating_sub(1) {
                bail!("an open chain of {n} sites needs exactly {} bonds (k, k+1)", n.saturating_sub(1));
            }
            let couplings = chain_couplings(&map, n)?;
            let deltas = if has_fields(file) {
                Some(open_chain_deltas_for_fields(&couplings, &file.fields, file.beta)?)
            } else {
                None
            };
            open_chain_circuit(&couplings, deltas.as_deref(), file.beta)?
        }
        Topology::ClosedChain => {
            if n < 3 || map.len() != n {
                bail!("a closed chain of {n} sites needs exactly {n} bonds (k, k+1) and ({}, 0)", n.saturating_sub(1));
            }
            let couplings = chain_couplings(&map, n)?;
            let closing = *map
                .get(&key(n - 1, 0))
                .ok_or_else(|| anyhow!("closing bond ({}, 0) is missing", n - 1))?;
            let policy = match policy {
                Some(PolicyArg::Measure) => ClosurePolicy::Measure,
                Some(PolicyArg::InterferePlus) => ClosurePolicy::Interfere(Subspace::Plus),
                Some(PolicyArg::InterfereMinus) => ClosurePolicy::Interfere(Subspace::Minus),
                None if closing < 0.0 => ClosurePolicy::Interfere(Subspace::Minus),
                None => ClosurePolicy::Interfere(Subspace::Plus),
            };
            closed_chain_circuit(&couplings, closing.abs(), None, file.beta, policy)?
        }
        Topology::Bethe => {
            let tree = BetheTree {
                num_sites: n,
                root: 0,
                edges: file.bonds.clone(),
            };
            bethe_circuit(&tree, file.beta)?
        }
        Topology::Square2d | Topology::Cubic3d => lattice_plan(file, &map)?,
        Topology::General => bail!(
            "topology \"general\" has no preparation circuit; use open-chain, closed-chain, bethe, square-2d or cubic-3d"
        ),
    };
    Ok(plan)
}

fn lattice_plan(file: &ModelFile, map: &BTreeMap<(usize, usize), f64>) -> Result<CircuitPlan> {
    if file.plaquettes.is_empty() {
        bail!("{} models need a plaquettes list", file.topology.as_str());
    }
    let mut remaining = map.clone();
    let mut plaquettes = Vec::with_capacity(file.plaquettes.len());
    for (p, sites) in file.plaquettes.iter().enumerate() {
        let l = sites.len();
        let mut couplings = Vec::with_capacity(l);
        for k in 0..l {
            let (a, b) = (sites[k], sites[(k + 1) % l]);
            let g = remaining
                .remove(&key(a, b))
                .ok_or_else(|| anyhow!("plaquette {p} bond ({a}, {b}) is missing or shared"))?;
            couplings.push(g);
        }
        plaquettes.push(PrefabPlaquette {
            sites: sites.clone(),
            couplings,
        });
    }
    let connectors = remaining
        .into_iter()
        .map(|((i, j), g)| Connector {
            i,
            j,
            magnitude: g.abs(),
        })
        .collect();
    let spec = AssemblySpec {
        num_sites: file.sites,
        dimension: if file.topology == Topology::Cubic3d { 3 } else { 2 },
        beta: file.beta,
        plaquettes,
        connectors,
        connector_order: None,
        cap: DEFAULT_PLAQUETTE_CAP,
        reuse_workbits: true,
    };
    Ok(lattice_assembly_circuit(&spec)?)
}

/// Site `k` is character `k`: `1` for spin `+1`, `0` for `−1`.
pub fn bitstring(config: u64, n: usize) -> String {
    (0..n).map(|k| if config >> k & 1 == 1 { '1' } else { '0' }).collect()
}
