//! `ising-qsim`: prepare, sample and search Gibbs states of Ising models from
//! TOML model files, and run the built-in self-checks.
//!
//! Every report carries the tool version, the SHA-256 of the model file and
//! the seed, so a rerun with the same inputs reproduces it byte for byte.
//! The exit code is 0 when every check of the command passes, 1 when one
//! fails and 2 on an error.

mod model;
mod reference;
mod verify;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use ising_qsim::builder::{execute, CircuitPlan};
use ising_qsim::ising::gibbs_distribution;
use ising_qsim::rng::seeded;
use ising_qsim::sampler::{ground_state_search, sample_configurations, GroundOracle, AUTO_ORACLE_BITS};
use serde::Serialize;

use model::{bitstring, PolicyArg};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest deviation from the oracle that `prepare` accepts.
const PREPARE_TOLERANCE: f64 = 1e-10;

#[derive(Parser)]
#[command(
    name = "ising-qsim",
    version,
    about = "Statevector Gibbs-state preparation for Ising spin glasses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML model file.
    #[arg(long)]
    model: PathBuf,
    /// Inverse temperature, overriding the model file.
    #[arg(long)]
    beta: Option<f64>,
    /// Seed for measurement outcomes and sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Closing-bond policy for closed chains.
    #[arg(long, value_enum)]
    policy: Option<PolicyArg>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit JSON instead of CSV or text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the circuit once and compare every configuration probability with the oracle.
    Prepare {
        #[command(flatten)]
        common: Common,
    },
    /// Prepare and measure repeatedly; emit the histogram.
    Sample {
        #[command(flatten)]
        common: Common,
        /// Number of preparations.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Prepare and measure until a ground state is found.
    Groundstate {
        #[command(flatten)]
        common: Common,
        /// Give up after this many preparations.
        #[arg(long, default_value_t = 100_000)]
        max_attempts: u64,
    },
    /// Run a built-in self-check suite.
    Verify {
        #[arg(value_enum)]
        suite: verify::Suite,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Serialize)]
struct Header {
    tool: &'static str,
    version: &'static str,
    model_sha256: String,
    seed: u64,
    beta: f64,
    plan: String,
}

impl Header {
    fn comment_lines(&self) -> String {
        format!(
            "# tool={} version={}\n# model_sha256={}\n# seed={}\n# beta={}\n# plan={}\n",
            self.tool, self.version, self.model_sha256, self.seed, self.beta, self.plan
        )
    }

    fn text_lines(&self) -> String {
        format!(
            "tool: {}\nversion: {}\nmodel_sha256: {}\nseed: {}\nbeta: {}\nplan: {}\n",
            self.tool, self.version, self.model_sha256, self.seed, self.beta, self.plan
        )
    }
}

#[derive(Serialize)]
struct RealizedBond {
    i: usize,
    j: usize,
    sign: i8,
}

fn load(common: &Common) -> Result<(CircuitPlan, Header)> {
    let loaded = model::load(&common.model, common.beta)?;
    let plan = model::plan_for(&loaded.file, common.policy)?;
    let header = Header {
        tool: "ising-qsim",
        version: VERSION,
        model_sha256: loaded.sha256,
        seed: common.seed,
        beta: loaded.file.beta,
        plan: plan.label().to_string(),
    };
    Ok((plan, header))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn json(value: &impl Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn prepare(common: &Common) -> Result<bool> {
    #[derive(Serialize)]
    struct Row {
        config: String,
        probability: f64,
        oracle_weight: f64,
        abs_deviation: f64,
    }
    #[derive(Serialize)]
    struct Report {
        #[serde(flatten)]
        header: Header,
        realized_bonds: Vec<RealizedBond>,
        max_abs_deviation: f64,
        tolerance: f64,
        pass: bool,
        rows: Vec<Row>,
    }
    let (plan, header) = load(common)?;
    let res = execute(&plan, &mut seeded(common.seed))?;
    let oracle = gibbs_distribution(&res.realized_model(&plan)?)?.weights;
    let probs = res.spin_probabilities(&plan);
    let n = plan.num_spin_qubits();
    let rows: Vec<Row> = probs
        .iter()
        .zip(&oracle)
        .enumerate()
        .map(|(y, (&p, &w))| Row {
            config: bitstring(y as u64, n),
            probability: p,
            oracle_weight: w,
            abs_deviation: (p - w).abs(),
        })
        .collect();
    let max_dev = rows.iter().map(|r| r.abs_deviation).fold(0.0, f64::max);
    let realized_bonds: Vec<RealizedBond> = res
        .realized_bonds
        .iter()
        .map(|(&(i, j), &sign)| RealizedBond { i, j, sign })
        .collect();
    let pass = max_dev < PREPARE_TOLERANCE;
    let text = if common.json {
        json(&Report {
            header,
            realized_bonds,
            max_abs_deviation: max_dev,
            tolerance: PREPARE_TOLERANCE,
            pass,
            rows,
        })?
    } else {
        let mut s = header.comment_lines();
        let bonds: Vec<String> = realized_bonds
            .iter()
            .map(|b| format!("({},{}):{:+}", b.i, b.j, b.sign))
            .collect();
        writeln!(s, "# realized_bonds={}", bonds.join(";"))?;
        writeln!(s, "# max_abs_deviation={max_dev:e}")?;
        writeln!(s, "# pass={pass}")?;
        s.push_str("config,probability,oracle_weight,abs_deviation\n");
        for r in &rows {
            writeln!(
                s,
                "{},{:e},{:e},{:e}",
                r.config, r.probability, r.oracle_weight, r.abs_deviation
            )?;
        }
        s
    };
    emit(common.out.as_deref(), &text)?;
    Ok(pass)
}

fn sample(common: &Common, samples: usize) -> Result<bool> {
    #[derive(Serialize)]
    struct Row {
        bonds: String,
        config: String,
        count: u64,
        frequency: f64,
        oracle_weight: Option<f64>,
    }
    #[derive(Serialize)]
    struct Report {
        #[serde(flatten)]
        header: Header,
        samples: u64,
        stream_seed: u64,
        tv_distance: Option<f64>,
        energy_mean: f64,
        magnetization_mean: f64,
        site_magnetization: Vec<f64>,
        rows: Vec<Row>,
    }
    let (plan, header) = load(common)?;
    let report = sample_configurations(&plan, samples, &mut seeded(common.seed))?;
    let n = plan.num_spin_qubits();
    let l = plan.bond_ledger().len();
    let joint = if n + l <= AUTO_ORACLE_BITS {
        Some(plan.joint_distribution()?)
    } else {
        None
    };
    let rows: Vec<Row> = report
        .joint_counts
        .iter()
        .map(|(&(pattern, config), &count)| Row {
            bonds: bitstring(pattern, l),
            config: bitstring(config, n),
            count,
            frequency: count as f64 / report.total as f64,
            oracle_weight: joint.as_ref().map(|w| w[((pattern << n) | config) as usize]),
        })
        .collect();
    let text = if common.json {
        json(&Report {
            header,
            samples: report.total,
            stream_seed: report.seed,
            tv_distance: report.tv_distance_to_oracle,
            energy_mean: report.energy_mean,
            magnetization_mean: report.magnetization_mean,
            site_magnetization: report.site_magnetization.clone(),
            rows,
        })?
    } else {
        let mut s = header.comment_lines();
        writeln!(s, "# samples={}", report.total)?;
        writeln!(s, "# stream_seed={}", report.seed)?;
        match report.tv_distance_to_oracle {
            Some(tv) => writeln!(s, "# tv_distance={tv:e}")?,
            None => writeln!(s, "# tv_distance=")?,
        }
        writeln!(s, "# energy_mean={:e}", report.energy_mean)?;
        writeln!(s, "# magnetization_mean={:e}", report.magnetization_mean)?;
        s.push_str("bonds,config,count,frequency,oracle_weight\n");
        for r in &rows {
            let w = r.oracle_weight.map(|w| format!("{w:e}")).unwrap_or_default();
            writeln!(s, "{},{},{},{:e},{}", r.bonds, r.config, r.count, r.frequency, w)?;
        }
        s
    };
    emit(common.out.as_deref(), &text)?;
    Ok(true)
}

fn groundstate(common: &Common, max_attempts: u64) -> Result<bool> {
    #[derive(Serialize)]
    struct Report {
        #[serde(flatten)]
        header: Header,
        config: String,
        energy: f64,
        attempts: u64,
        verified: bool,
        oracle_min_energy: Option<f64>,
        p_star: Option<f64>,
        expected_attempts: Option<f64>,
    }
    let (plan, header) = load(common)?;
    let n = plan.num_spin_qubits();
    let oracle = if n + plan.bond_ledger().len() <= AUTO_ORACLE_BITS {
        Some(GroundOracle::for_plan(&plan)?)
    } else {
        None
    };
    let rep = ground_state_search(&plan, &mut seeded(common.seed), max_attempts, oracle.as_ref())?;
    let pass = oracle.is_none() || rep.verified;
    let report = Report {
        header,
        config: bitstring(rep.config, n),
        energy: rep.energy,
        attempts: rep.attempts,
        verified: rep.verified,
        oracle_min_energy: rep.oracle_min,
        p_star: rep.p_star,
        expected_attempts: rep.expected_attempts,
    };
    let text = if common.json {
        json(&report)?
    } else {
        let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_else(|| "n/a".into());
        let mut s = report.header.text_lines();
        writeln!(s, "config: {}", report.config)?;
        writeln!(s, "energy: {}", report.energy)?;
        writeln!(s, "attempts: {}", report.attempts)?;
        writeln!(s, "verified: {}", report.verified)?;
        writeln!(s, "oracle_min_energy: {}", opt(report.oracle_min_energy))?;
        writeln!(s, "p_star: {}", opt(report.p_star))?;
        writeln!(s, "expected_attempts: {}", opt(report.expected_attempts))?;
        s
    };
    emit(common.out.as_deref(), &text)?;
    Ok(pass)
}

fn run_verify(suite: verify::Suite, out: Option<&Path>, as_json: bool) -> Result<bool> {
    #[derive(Serialize)]
    struct Report {
        tool: &'static str,
        version: &'static str,
        pass: bool,
        checks: Vec<verify::Check>,
    }
    let checks = verify::run(suite)?;
    let pass = checks.iter().all(|c| c.pass);
    let text = if as_json {
        json(&Report {
            tool: "ising-qsim",
            version: VERSION,
            pass,
            checks,
        })?
    } else {
        let mut s = format!("tool: ising-qsim\nversion: {VERSION}\n");
        for c in &checks {
            let cmp = if c.expect_below { "<" } else { ">=" };
            writeln!(
                s,
                "{} [{}] {}: residual {:.3e} {cmp} {:.0e}",
                if c.pass { "PASS" } else { "FAIL" },
                c.suite,
                c.name,
                c.residual,
                c.tolerance
            )?;
        }
        let failed = checks.iter().filter(|c| !c.pass).count();
        writeln!(s, "{} checks, {failed} failed", checks.len())?;
        s
    };
    emit(out, &text)?;
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Prepare { common } => prepare(common),
        Command::Sample { common, samples } => sample(common, *samples),
        Command::Groundstate { common, max_attempts } => groundstate(common, *max_attempts),
        Command::Verify { suite, out, json } => run_verify(*suite, out.as_deref(), *json),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
