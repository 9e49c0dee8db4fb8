//! Built-in self-checks.

use anyhow::Result;
use clap::ValueEnum;
use ising_qsim::builder::{open_chain_circuit, Step};
use ising_qsim::commutators::{commutator_suite, s_omega_closed_form, s_omega_residual, ResidualForm};
use ising_qsim::interference::{compute_angles, PlaquetteSpec, Subspace};
use ising_qsim::ising::{gibbs_distribution, partial_partition_functions, ratio_bounds_check, IsingModel};
use ising_qsim::rng::seeded;
use ising_qsim::statevec::StateVector;
use rand::Rng;
use serde::Serialize;

use crate::reference;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Commutation relations of `S` and `Ω` as register matrices.
    Commutators,
    /// Four-spin chain amplitudes after each gate.
    Table1,
    /// Euler angles of the three- and four-spin loops.
    Angles,
    /// Loop partition recursion against enumeration, and its bounds.
    Recursion,
    /// Every suite.
    All,
}

/// One named check.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    /// `true` when the residual must stay below the tolerance, `false` when it must exceed it.
    pub expect_below: bool,
    pub pass: bool,
}

fn check(suite: &'static str, name: String, residual: f64, tolerance: f64, expect_below: bool) -> Check {
    let pass = if expect_below {
        residual < tolerance
    } else {
        residual >= tolerance
    };
    Check {
        suite,
        name,
        residual,
        tolerance,
        expect_below,
        pass,
    }
}

pub fn run(suite: Suite) -> Result<Vec<Check>> {
    Ok(match suite {
        Suite::Commutators => commutators()?,
        Suite::Table1 => table1()?,
        Suite::Angles => angles()?,
        Suite::Recursion => recursion()?,
        Suite::All => {
            let mut all = commutators()?;
            all.extend(table1()?);
            all.extend(angles()?);
            all.extend(recursion()?);
            all
        }
    })
}

fn commutators() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (j, beta) in [(1.0, 0.7), (0.5, 2.0), (-1.3, 0.4)] {
        for c in commutator_suite(j, beta)? {
            let tol = if c.expect_zero { 1e-12 } else { 1e-3 };
            out.push(check(
                "commutators",
                format!("{} J={j} beta={beta} ({} qubits)", c.relation, c.qubits),
                c.residual,
                tol,
                c.expect_zero,
            ));
        }
        if j < 0.0 {
            continue;
        }
        let residual = s_omega_residual(j, beta)?;
        let closed = s_omega_closed_form(j, beta, ResidualForm::Derived);
        out.push(check(
            "commutators",
            format!("[S_ij, Ω_kjw] closed form J={j} beta={beta}"),
            residual.max_abs_diff(&closed),
            1e-10,
            true,
        ));
    }
    Ok(out)
}

fn table1() -> Result<Vec<Check>> {
    let (j, beta) = (1.0, 0.7);
    let plan = open_chain_circuit(&[j; 3], None, beta)?;
    let cols = reference::four_spin_chain_columns(j, beta);
    let mut st = StateVector::new_ground(4)?;
    let mut out = Vec::new();
    for (k, step) in plan.steps().iter().enumerate() {
        if let Step::Apply { gate, targets } = step {
            st.apply_gate(gate, targets)?;
        }
        let dev = (0..16)
            .map(|r| (st.amplitude(reference::row_index(r)) - cols[k][r]).norm())
            .fold(0.0, f64::max);
        out.push(check(
            "table1",
            format!("column {} after {}", k + 3, step),
            dev,
            1e-12,
            true,
        ));
    }
    Ok(out)
}

fn angles() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for beta in [0.3, 1.0, 2.5] {
        for n in [3, 4] {
            let spec = PlaquetteSpec::new(vec![1.0; n - 1], 1.0, beta)?;
            let a = compute_angles(&spec.table_vector()?, Subspace::Minus)?;
            let (cos, extra, extra_value) = if n == 3 {
                let (c, c8) = reference::three_spin_cosines(1.0, beta);
                (c, "cos θ_8", a.theta_n_minus().cos() - c8)
            } else {
                let (c, s16) = reference::four_spin_cosines(1.0, beta);
                (c, "sin θ_16", a.theta_n_minus().sin() - s16)
            };
            let dev = cos.iter().map(|&(k, c)| (a.cos(k) - c).abs()).fold(0.0, f64::max);
            out.push(check(
                "angles",
                format!("N={n} beta={beta} all {} tabulated cosines", cos.len()),
                dev,
                1e-9,
                true,
            ));
            out.push(check(
                "angles",
                format!("N={n} beta={beta} {extra}"),
                extra_value.abs(),
                1e-9,
                true,
            ));
        }
    }
    Ok(out)
}

fn recursion() -> Result<Vec<Check>> {
    let mut rng = seeded(2024);
    let mut out = Vec::new();
    for n in 3..=10 {
        let (mut worst, mut bound_ratio) = (0.0f64, 0.0f64);
        for _ in 0..100 {
            let beta = rng.random_range(0.1..3.0);
            let c: Vec<f64> = (0..n - 1)
                .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
                .collect();
            let pair = partial_partition_functions(&c, 1.0, beta)?;
            for (sign, z) in [(1.0, pair.z_plus), (-1.0, pair.z_minus)] {
                let mut all = c.clone();
                all.push(sign);
                let exact = gibbs_distribution(&IsingModel::closed_chain(&all, beta)?)?.partition_function;
                worst = worst.max((z - exact).abs() / exact);
            }
            let b = ratio_bounds_check(&pair, 1.0, beta);
            bound_ratio = bound_ratio.max(b.ratio / b.upper).max(b.lower / b.ratio);
        }
        out.push(check(
            "recursion",
            format!("N={n} Z± vs enumeration, 100 draws"),
            worst,
            1e-9,
            true,
        ));
        out.push(check(
            "recursion",
            format!("N={n} largest of Z⁺/Z⁻/x^{{4J}} and x^{{−4J}}/(Z⁺/Z⁻), 100 draws"),
            bound_ratio,
            1.0 + 1e-12,
            true,
        ));
    }
    Ok(out)
}
