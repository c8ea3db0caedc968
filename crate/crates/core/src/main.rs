//! Command-line front end: every module exposed as a subcommand with
//! JSON/CSV output for batch runs and plot-data emission.
//!
//! Exit codes: 0 success, 1 failed `--check`, 2 unknown subcommand or bad
//! flags (clap), 3 invalid parameters, 4 desk-scale guard tripped.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use pfres::blockenc::{compose_product, compose_sum, encode, verify_block};
use pfres::commutators::{self, exact_pair_norm, ExactPair};
use pfres::cutoff::{self, LeakageParams};
use pfres::densemat::DenseOperator;
use pfres::gatecost::{self, Model, SweepVariable};
use pfres::lattice::{RawParams, SimulationParams};
use pfres::lcu::{self, LcuDecomposition};
use pfres::operators;
use pfres::smx;
use pfres::stateprep::{self, PrepConfig};
use pfres::{Error, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "pfres", version, about = "Pauli-Fierz simulation resource estimator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// LCU decompositions of the lattice operators.
    Lcu {
        #[command(subcommand)]
        action: LcuAction,
    },
    /// Dense operator oracles.
    Ops {
        #[command(subcommand)]
        action: OpsAction,
    },
    /// Block-encoding verification.
    Blockenc {
        #[command(subcommand)]
        action: BlockencAction,
    },
    /// Commutator bounds and exact checks.
    Comm {
        #[command(subcommand)]
        action: CommAction,
    },
    /// Divide-and-conquer budget tree.
    Trotter {
        #[command(subcommand)]
        action: TrotterAction,
    },
    /// Split-and-merge multi-controlled-X counting.
    Smx {
        #[command(subcommand)]
        action: SmxAction,
    },
    /// Total cost models and ratio sweeps.
    Cost {
        #[command(subcommand)]
        action: CostAction,
    },
    /// Electric-cutoff growth bounds.
    Cutoff {
        #[command(subcommand)]
        action: CutoffAction,
    },
    /// Momentum-state preparation simulation.
    Stateprep {
        #[command(subcommand)]
        action: StateprepAction,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OpName {
    A,
    A2,
    E2,
    U,
    Grad,
    Lap,
}

#[derive(Args)]
struct OpSpec {
    /// Operator to decompose or rebuild.
    #[arg(long, value_enum)]
    op: OpName,
    /// Electric cutoff Λ (power of two).
    #[arg(long, default_value_t = 2)]
    lambda: u64,
    /// Lattice spacing Δ.
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    /// Stencil half-width a.
    #[arg(long, default_value_t = 1)]
    a: u32,
    /// Finite-difference spacing h.
    #[arg(long, default_value_t = 1.0)]
    h: f64,
    /// Ring length for the stencil operators.
    #[arg(long, default_value_t = 8)]
    ring: usize,
}

impl OpSpec {
    fn decomposition(&self) -> pfres::Result<LcuDecomposition> {
        Ok(match self.op {
            OpName::A => lcu::lcu_a(2 * self.lambda, self.delta)?,
            OpName::A2 => lcu::lcu_a_squared(2 * self.lambda, self.delta)?,
            OpName::E2 => lcu::lcu_e_squared(self.lambda)?,
            OpName::U => lcu::lcu_u(2 * self.lambda)?,
            OpName::Grad => lcu::lcu_gradient(self.a, self.h, self.ring),
            OpName::Lap => lcu::lcu_laplacian(self.a, self.h, self.ring),
        })
    }

    fn direct(&self) -> pfres::Result<DenseOperator> {
        Ok(match self.op {
            OpName::A => operators::op_a(self.lambda, self.delta),
            OpName::A2 => {
                let a = operators::op_a(self.lambda, self.delta);
                a.mul(&a)
            }
            OpName::E2 => operators::op_e2(self.lambda),
            OpName::U => operators::op_u(self.lambda),
            OpName::Grad => {
                operators::op_i_grad(self.a, self.h, self.ring).scale(num_complex::Complex64::new(0.0, -1.0))
            }
            OpName::Lap => operators::op_laplacian(self.a, self.h, self.ring),
        })
    }

    fn name(&self) -> &'static str {
        match self.op {
            OpName::A => "A",
            OpName::A2 => "A2",
            OpName::E2 => "E2",
            OpName::U => "U",
            OpName::Grad => "grad",
            OpName::Lap => "lap",
        }
    }
}

#[derive(Args)]
struct OutputSpec {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum LcuAction {
    /// Emit the structured term list.
    Decompose {
        #[command(flatten)]
        op: OpSpec,
        #[command(flatten)]
        output: OutputSpec,
    },
    /// Compare the dense reconstruction against the direct operator.
    Verify {
        #[command(flatten)]
        op: OpSpec,
        #[command(flatten)]
        output: OutputSpec,
    },
    /// Run the full reconstruction grid.
    Check,
}

#[derive(Subcommand)]
enum OpsAction {
    /// Dump a dense operator as JSON [re, im] pairs.
    Build {
        #[command(flatten)]
        op: OpSpec,
        #[command(flatten)]
        output: OutputSpec,
    },
    /// Spectral norm of an operator or truncated fragment.
    Norm {
        #[command(flatten)]
        op: OpSpec,
        #[command(flatten)]
        output: OutputSpec,
    },
    /// Hermiticity and exponential identities.
    Check,
}

#[derive(Subcommand)]
enum BlockencAction {
    /// Verify the PREP/SELECT contraction of one operator encoding.
    Verify {
        #[command(flatten)]
        op: OpSpec,
        #[command(flatten)]
        output: OutputSpec,
    },
    /// Encoding, sum and product spot checks.
    Check,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PairName {
    E2u,
    E2Disjoint,
    E2w,
    Hf1Hf2,
    Hf1Hpi,
    HsHf1,
    HsHf2,
    Hf2Hpi,
    HsHpi,
    HveeHpi,
    HvneHpi,
}

#[derive(Subcommand)]
enum CommAction {
    /// Evaluate the pairwise bound table at the given parameters.
    Table {
        #[command(flatten)]
        params: ParamsArg,
        #[command(flatten)]
        output: OutputSpec,
    },
    /// Exact commutator norm on a named shared support.
    Exact {
        #[arg(long, value_enum)]
        pair: PairName,
        #[arg(long, default_value_t = 2)]
        lambda: u64,
        #[command(flatten)]
        output: OutputSpec,
    },
    /// Nested-commutator bound from an inner sum and fragment norms.
    Nested {
        #[arg(long)]
        inner_sum: f64,
        #[arg(long, value_delimiter = ',')]
        norms: Vec<f64>,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        p_prime: u32,
        #[command(flatten)]
        output: OutputSpec,
    },
    /// Golden values and dominance report.
    Check,
}

#[derive(Subcommand)]
enum TrotterAction {
    /// Emit the budget tree with all node values.
    Budget {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long, default_value_t = 1)]
        p1: u32,
        #[command(flatten)]
        output: OutputSpec,
    },
    /// Recurrence identities on the reference tree.
    Check,
}

#[derive(Subcommand)]
enum SmxAction {
    /// Exact counts for one partition.
    Count {
        #[arg(long)]
        m: u128,
        /// Equal group count; use --widths for uneven splits.
        #[arg(long, default_value_t = 1)]
        groups: u32,
        #[arg(long, value_delimiter = ',')]
        widths: Option<Vec<u32>>,
        #[command(flatten)]
        output: OutputSpec,
    },
    /// CSV over all realizable equal splits of M.
    Sweep {
        #[arg(long)]
        m: u128,
        #[command(flatten)]
        output: OutputSpec,
    },
    /// Best realizable equal split.
    Optimize {
        #[arg(long)]
        m: u128,
        #[command(flatten)]
        output: OutputSpec,
    },
    /// Golden values.
    Check,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepArg {
    N,
    Lambda,
}

#[derive(Subcommand)]
enum CostAction {
    /// Divide-and-conquer total.
    Dc {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long, default_value_t = 1)]
        p1: u32,
        #[command(flatten)]
        output: OutputSpec,
    },
    /// Qubitization total.
    Qub {
        #[command(flatten)]
        params: ParamsArg,
        #[command(flatten)]
        output: OutputSpec,
    },
    /// Ratio sweep CSV over N or Λ.
    Ratio {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long, value_enum)]
        sweep: SweepArg,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 41)]
        points: usize,
        /// Comma-separated subset of dc1, dc2, qub.
        #[arg(long, value_delimiter = ',', default_values_t = vec!["dc1".to_string(), "dc2".to_string(), "qub".to_string()])]
        models: Vec<String>,
        #[command(flatten)]
        output: OutputSpec,
    },
    /// Reference-ratio and ordering spot checks.
    Check,
}

#[derive(Subcommand)]
enum CutoffAction {
    /// Long-time leakage bound Λ(t).
    Leakage {
        /// LeakageParams as a JSON file; flags below override fields.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long)]
        lambda0: Option<f64>,
        #[arg(long)]
        delta_step: Option<u64>,
        #[arg(long)]
        chi: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        /// Simulation parameters JSON: derives χ from the per-link norm
        /// bound and reports the ηN^(2/3)t/Ω^(2/3) scaling companion.
        #[arg(long)]
        sim_params: Option<PathBuf>,
        #[command(flatten)]
        output: OutputSpec,
    },
    /// Hydrogenic heuristic ηZ²max/2.
    Heuristic {
        #[arg(long)]
        eta: u64,
        #[arg(long)]
        z_max: f64,
        #[command(flatten)]
        output: OutputSpec,
    },
    /// Identities at t = 0 and the linear-growth band.
    Check,
}

#[derive(Subcommand)]
enum StateprepAction {
    /// Exact enumeration of the preparation.
    Sim {
        #[arg(long)]
        np: u32,
        #[arg(long)]
        m: u64,
        #[command(flatten)]
        output: OutputSpec,
    },
    /// Itemized gate estimate.
    Gates {
        #[arg(long)]
        np: u32,
        #[arg(long)]
        m: u64,
        #[command(flatten)]
        output: OutputSpec,
    },
    /// Probability bookkeeping identities.
    Check,
}

#[derive(Args)]
struct ParamsArg {
    /// Simulation parameters as a JSON file; defaults to the neon
    /// reference instance.
    #[arg(long)]
    params: Option<PathBuf>,
}

impl ParamsArg {
    fn load(&self) -> pfres::Result<SimulationParams> {
        match &self.params {
            None => Ok(SimulationParams::neon_reference()),
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                let raw: RawParams = serde_json::from_str(&text)?;
                SimulationParams::derive(&raw)
            }
        }
    }
}

fn emit_json<T: Serialize>(value: &T, out: &OutputSpec) -> pfres::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    emit_text(&text, out)
}

fn emit_text(text: &str, out: &OutputSpec) -> pfres::Result<()> {
    match &out.out {
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")?;
        }
        Some(path) => {
            std::fs::write(path, format!("{text}\n"))?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> pfres::Result<()> {
    match cli.command {
        Command::Lcu { action } => run_lcu(action),
        Command::Ops { action } => run_ops(action),
        Command::Blockenc { action } => run_blockenc(action),
        Command::Comm { action } => run_comm(action),
        Command::Trotter { action } => run_trotter(action),
        Command::Smx { action } => run_smx(action),
        Command::Cost { action } => run_cost(action),
        Command::Cutoff { action } => run_cutoff(action),
        Command::Stateprep { action } => run_stateprep(action),
    }
}

fn run_lcu(action: LcuAction) -> pfres::Result<()> {
    match action {
        LcuAction::Decompose { op, output } => {
            let dec = op.decomposition()?;
            emit_json(
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "op": op.name(),
                    "dim": dec.target_dim,
                    "l1": dec.l1,
                    "terms": dec.terms,
                }),
                &output,
            )
        }
        LcuAction::Verify { op, output } => {
            let dec = op.decomposition()?;
            let direct = op.direct()?;
            let deviation = dec.reconstruct()?.max_abs_diff(&direct);
            let row = lcu::table2_row(op.name(), 2 * op.lambda, op.delta, op.lambda, op.a, op.h);
            let count = if row.nonidentity_only {
                dec.term_count_nonidentity()
            } else {
                dec.term_count()
            };
            let ok = deviation < 1e-9
                && count as u64 <= row.term_limit
                && row.l1_limit.is_none_or(|lim| dec.l1 <= lim + 1e-12);
            emit_json(
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "op": op.name(),
                    "deviation": deviation,
                    "term_count": count,
                    "term_limit": row.term_limit,
                    "l1": dec.l1,
                    "l1_limit": row.l1_limit,
                    "ok": ok,
                }),
                &output,
            )?;
            if !ok {
                return Err(Error::CheckFailed("lcu verification failed".into()));
            }
            Ok(())
        }
        LcuAction::Check => {
            let mut worst: f64 = 0.0;
            for lambda in [2u64, 4, 8] {
                for delta in [0.3, 1.0] {
                    for (dec, direct) in [
                        (lcu::lcu_a(2 * lambda, delta)?, operators::op_a(lambda, delta)),
                        (lcu::lcu_e_squared(lambda)?, operators::op_e2(lambda)),
                        (lcu::lcu_u(2 * lambda)?, operators::op_u(lambda)),
                    ] {
                        worst = worst.max(dec.reconstruct()?.max_abs_diff(&direct));
                    }
                }
            }
            if worst >= 1e-9 {
                return Err(Error::CheckFailed(format!("reconstruction deviation {worst}")));
            }
            println!("lcu check ok (max deviation {worst:.3e})");
            Ok(())
        }
    }
}

fn run_ops(action: OpsAction) -> pfres::Result<()> {
    match action {
        OpsAction::Build { op, output } => {
            let m = op.direct()?;
            emit_json(
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "op": op.name(),
                    "dim": m.dim(),
                    "entries": m.to_pairs(),
                }),
                &output,
            )
        }
        OpsAction::Norm { op, output } => {
            let m = op.direct()?;
            emit_json(
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "op": op.name(),
                    "norm": m.spectral_norm()?,
                }),
                &output,
            )
        }
        OpsAction::Check => {
            for lambda in [2u64, 4, 8] {
                let a = operators::op_a(lambda, 1.0);
                if !a.is_hermitian(1e-9) {
                    return Err(Error::CheckFailed(format!("A not Hermitian at Λ={lambda}")));
                }
                let dev = a.exp_i_hermitian(1.0)?.max_abs_diff(&operators::op_u(lambda));
                if dev >= 1e-9 {
                    return Err(Error::CheckFailed(format!(
                        "exp(iΔA) != U at Λ={lambda}: {dev}"
                    )));
                }
            }
            println!("ops check ok");
            Ok(())
        }
    }
}

fn run_blockenc(action: BlockencAction) -> pfres::Result<()> {
    match action {
        BlockencAction::Verify { op, output } => {
            let dec = op.decomposition()?;
            let be = encode(&dec)?;
            let deviation = verify_block(&be, &op.direct()?)?;
            emit_json(
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "op": op.name(),
                    "lambda": be.lambda,
                    "ancilla_width": be.ancilla_width(),
                    "deviation": deviation,
                    "ok": deviation < 1e-9,
                }),
                &output,
            )?;
            if deviation >= 1e-9 {
                return Err(Error::CheckFailed("block-encoding deviation too large".into()));
            }
            Ok(())
        }
        BlockencAction::Check => {
            let e2 = encode(&lcu::lcu_e_squared(2)?)?;
            let u = encode(&lcu::lcu_u(4)?)?;
            let d1 = verify_block(&e2, &operators::op_e2(2))?;
            let sum = compose_sum(&[(0.5, e2.clone()), (1.0, u.clone())])?;
            let target = operators::op_e2(2).scale_real(0.5).add(&operators::op_u(2));
            let d2 = verify_block(&sum, &target)?;
            let prod = compose_product(&[e2, u])?;
            let d3 = verify_block(&prod, &operators::op_e2(2).mul(&operators::op_u(2)))?;
            let worst = d1.max(d2).max(d3);
            if worst >= 1e-9 {
                return Err(Error::CheckFailed(format!("block deviation {worst}")));
            }
            println!("blockenc check ok (max deviation {worst:.3e})");
            Ok(())
        }
    }
}

fn comm_params(lambda: u64) -> pfres::Result<SimulationParams> {
    SimulationParams::derive(&RawParams {
        eta: 2,
        n: 64,
        l: 32.0,
        lambda,
        a: 1,
        h: None,
        c: pfres::lattice::SPEED_OF_LIGHT,
        k: 1,
        z: vec![2.0],
        t: 1.0,
        eps: 1e-3,
    })
}

fn run_comm(action: CommAction) -> pfres::Result<()> {
    match action {
        CommAction::Table { params, output } => {
            let p = params.load()?;
            emit_json(
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "entries": commutators::table(&p),
                }),
                &output,
            )
        }
        CommAction::Exact { pair, lambda, output } => {
            let p = comm_params(lambda)?;
            let pair = match pair {
                PairName::E2u => ExactPair::E2U,
                PairName::E2Disjoint => ExactPair::E2DisjointE2,
                PairName::E2w => ExactPair::E2WPlaquette,
                PairName::Hf1Hf2 => ExactPair::Hf1Hf2,
                PairName::Hf1Hpi => ExactPair::Hf1Hpi { sites: 4 },
                PairName::HsHf1 => ExactPair::HsHf1,
                PairName::HsHf2 => ExactPair::HsHf2,
                PairName::Hf2Hpi => ExactPair::Hf2Hpi { sites: 3 },
                PairName::HsHpi => ExactPair::HsHpi { sites: 3 },
                PairName::HveeHpi => ExactPair::HveeHpi { sites: 4 },
                PairName::HvneHpi => ExactPair::HvneHpi { sites: 4 },
            };
            let exact = exact_pair_norm(&pair, &p)?;
            emit_json(
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "pair": format!("{pair:?}"),
                    "exact": exact,
                }),
                &output,
            )
        }
        CommAction::Nested { inner_sum, norms, p, p_prime, output } => {
            let bound = commutators::nested_bound(inner_sum, &norms, p, p_prime)?;
            emit_json(
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "bound": bound,
                }),
                &output,
            )
        }
        CommAction::Check => {
            for lambda in [2u64, 4, 8] {
                let p = comm_params(lambda)?;
                let got = exact_pair_norm(&ExactPair::E2U, &p)?;
                let expect = 2.0 * lambda as f64 - 1.0;
                if (got - expect).abs() >= 1e-9 {
                    return Err(Error::CheckFailed(format!(
                        "[E²,U] at Λ={lambda}: {got} != {expect}"
                    )));
                }
            }
            let p = comm_params(2)?;
            for entry in commutators::dominance_report(&p)? {
                if !entry.dominated {
                    return Err(Error::CheckFailed(format!(
                        "{}: exact {} exceeds bound {}",
                        entry.pair, entry.exact, entry.bound
                    )));
                }
            }
            println!("comm check ok");
            Ok(())
        }
    }
}

fn run_trotter(action: TrotterAction) -> pfres::Result<()> {
    match action {
        TrotterAction::Budget { params, p1, output } => {
            let p = params.load()?;
            let (chosen, tree) = gatecost::budget_tree(&p, p1)?;
            emit_json(
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "p1": p1,
                    "chosen": chosen,
                    "tree": tree,
                    "total_error": tree.total_error()?,
                    "total_gates": tree.total_gates()?,
                    "target_eps": p.eps,
                }),
                &output,
            )
        }
        TrotterAction::Check => {
            let p = SimulationParams::neon_reference();
            let (_, tree) = gatecost::budget_tree(&p, 1)?;
            let [r1, r2, r3] = tree.r;
            let [n1, n2, n3] = tree.n_exp;
            let [e1, e2, e3] = tree.split_eps;
            let [d1, d2, d31, d32] = tree.delta;
            let direct = r1 * e1
                + r1 * n1 * d1
                + r1 * r2 * n1 * e2
                + r1 * r2 * n1 * n2 * d2
                + r1 * r2 * r3 * n1 * n2 * e3
                + r1 * r2 * r3 * n1 * n2 * n3 * (d31 + d32);
            let rec = tree.total_error()?;
            if ((rec - direct) / direct.max(1e-300)).abs() >= 1e-12 {
                return Err(Error::CheckFailed(format!("recurrence {rec} != direct {direct}")));
            }
            println!("trotter check ok");
            Ok(())
        }
    }
}

fn run_smx(action: SmxAction) -> pfres::Result<()> {
    match action {
        SmxAction::Count { m, groups, widths, output } => {
            let p = match widths {
                Some(w) => smx::Partition::from_widths(m, w)?,
                None => smx::Partition::equal(m, groups)?,
            };
            emit_json(
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "m": p.m.to_string(),
                    "padded": p.padded(),
                    "widths": p.widths,
                    "t": smx::t_count(&p).to_string(),
                    "cnot": smx::cnot_count(&p).to_string(),
                    "ancillae": p.ancillae().to_string(),
                }),
                &output,
            )
        }
        SmxAction::Sweep { m, output } => {
            let mut text = String::from("M,n,T_n,savings,ancillae\n");
            for row in smx::sweep(m)? {
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.m, row.n, row.t_count, row.savings, row.ancillae
                ));
            }
            emit_text(text.trim_end(), &output)
        }
        SmxAction::Optimize { m, output } => {
            let (p, savings) = smx::optimize_partition(m)?;
            emit_json(
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "m": p.m.to_string(),
                    "groups": p.group_count(),
                    "t": smx::t_count(&p).to_string(),
                    "savings": savings.to_string(),
                    "ancillae": p.ancillae().to_string(),
                    "formula_optimum_n": smx::optimal_equal_split(m)?,
                }),
                &output,
            )
        }
        SmxAction::Check => {
            let flat = smx::t_count(&smx::Partition::equal(16, 1)?);
            let split = smx::t_count(&smx::Partition::equal(16, 2)?);
            if flat != 192 || split != 96 || smx::t_savings_equal(16, 2)? != 96 {
                return Err(Error::CheckFailed(format!("golden values: {flat}, {split}")));
            }
            println!("smx check ok");
            Ok(())
        }
    }
}

fn parse_models(names: &[String]) -> pfres::Result<Vec<Model>> {
    names
        .iter()
        .map(|n| match n.as_str() {
            "dc1" => Ok(Model::Dc1),
            "dc2" => Ok(Model::Dc2),
            "qub" => Ok(Model::Qub),
            other => Err(Error::InvalidParams(format!("unknown model {other}"))),
        })
        .collect()
}

fn run_cost(action: CostAction) -> pfres::Result<()> {
    match action {
        CostAction::Dc { params, p1, output } => {
            let p = params.load()?;
            emit_json(&gatecost::dc_total(&p, p1)?, &output)
        }
        CostAction::Qub { params, output } => {
            let p = params.load()?;
            emit_json(&gatecost::qub_total(&p)?, &output)
        }
        CostAction::Ratio { params, sweep, from, to, points, models, output } => {
            let p = params.load()?;
            let models = parse_models(&models)?;
            let variable = match sweep {
                SweepArg::N => SweepVariable::N,
                SweepArg::Lambda => SweepVariable::Lambda,
            };
            let rows = gatecost::cost_ratio_sweep(variable, from, to, points, &p, &models)?;
            let mut text = String::from("x");
            for m in &models {
                text.push_str(&format!(",ratio_{}", m.name()));
            }
            text.push('\n');
            for row in rows {
                text.push_str(&format!("{}", row.x));
                for r in row.ratios {
                    text.push_str(&format!(",{r}"));
                }
                text.push('\n');
            }
            emit_text(text.trim_end(), &output)
        }
        CostAction::Check => {
            let p = SimulationParams::neon_reference();
            let models = [Model::Qub, Model::Dc1, Model::Dc2];
            let rows =
                gatecost::cost_ratio_sweep(SweepVariable::Lambda, 2.0, 1e6, 13, &p, &models)?;
            if (rows[0].ratios.iter().any(|r| (r - 1.0).abs() > 1e-12))
                || rows.iter().any(|r| r.ratios[1] > r.ratios[0] + 1e-9)
            {
                return Err(Error::CheckFailed("Λ-sweep ordering violated".into()));
            }
            let rows = gatecost::cost_ratio_sweep(SweepVariable::N, 1e2, 1e9, 8, &p, &models)?;
            if rows.iter().any(|r| r.ratios[0] > r.ratios[1] + 1e-9) {
                return Err(Error::CheckFailed("N-sweep ordering violated".into()));
            }
            println!("cost check ok");
            Ok(())
        }
    }
}

fn run_cutoff(action: CutoffAction) -> pfres::Result<()> {
    match action {
        CutoffAction::Leakage { params, lambda0, delta_step, chi, t, sim_params, output } => {
            let mut lp = match params {
                Some(path) => serde_json::from_str::<LeakageParams>(&std::fs::read_to_string(path)?)?,
                None => LeakageParams { lambda0: 2.0, delta_step: 2, chi: 1.0, r: 0.0, t: 0.0 },
            };
            let mut companion = serde_json::Value::Null;
            if let Some(path) = sim_params {
                let raw: RawParams = serde_json::from_str(&std::fs::read_to_string(path)?)?;
                let sp = SimulationParams::derive(&raw)?;
                lp.chi = cutoff::chi_bound(&sp);
                lp.t = sp.t;
                lp.lambda0 = sp.lambda as f64;
                companion = json!({
                    "chi_bound": lp.chi,
                    "scaling_form": cutoff::leakage_scaling(&sp),
                });
            }
            if let Some(v) = lambda0 {
                lp.lambda0 = v;
            }
            if let Some(v) = delta_step {
                lp.delta_step = v;
            }
            if let Some(v) = chi {
                lp.chi = v;
            }
            if let Some(v) = t {
                lp.t = v;
            }
            let lambda_t = cutoff::leakage_lambda(&lp)?;
            emit_json(
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "params": lp,
                    "lambda_t": lambda_t,
                    "companion": companion,
                }),
                &output,
            )
        }
        CutoffAction::Heuristic { eta, z_max, output } => {
            emit_json(
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "eta": eta,
                    "z_max": z_max,
                    "lambda": cutoff::heuristic_lambda(eta, z_max)?,
                }),
                &output,
            )
        }
        CutoffAction::Check => {
            let lp = LeakageParams { lambda0: 4.0, delta_step: 2, chi: 1.5, r: 0.0, t: 0.0 };
            if cutoff::leakage_lambda(&lp)? != 4.0 {
                return Err(Error::CheckFailed("Λ(0) != Λ₀".into()));
            }
            if cutoff::heuristic_lambda(10, 10.0)? != 500.0 {
                return Err(Error::CheckFailed("heuristic != 500".into()));
            }
            println!("cutoff check ok");
            Ok(())
        }
    }
}

fn run_stateprep(action: StateprepAction) -> pfres::Result<()> {
    match action {
        StateprepAction::Sim { np, m, output } => {
            let out = stateprep::simulate_prep(&PrepConfig { n_p: np, m })?;
            emit_json(
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "n_p": np,
                    "m": m,
                    "failure_prob": out.failure_prob,
                    "deviation_sum": out.deviation_sum,
                    "max_ratio_error": out.max_ratio_error,
                    "per_box_mass": out.per_box_mass,
                }),
                &output,
            )
        }
        StateprepAction::Gates { np, m, output } => {
            let gates = stateprep::prep_gate_estimate(&PrepConfig { n_p: np, m })?;
            emit_json(&gates, &output)
        }
        StateprepAction::Check => {
            let out = stateprep::simulate_prep(&PrepConfig { n_p: 4, m: 256 })?;
            let success: f64 = out.amplitudes.iter().map(|(_, a)| a).sum();
            if (success + out.failure_prob - 1.0).abs() >= 1e-12 {
                return Err(Error::CheckFailed("probabilities do not sum to 1".into()));
            }
            if out.deviation_sum >= 1.0 / 256.0 {
                return Err(Error::CheckFailed("amplitude deviation exceeds 1/M".into()));
            }
            println!("stateprep check ok");
            Ok(())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(err) => {
            let (kind, code) = match &err {
                Error::Guard(_) => ("guard", 4),
                Error::CheckFailed(_) => ("check_failed", 1),
                Error::InvalidParams(_) | Error::Json(_) | Error::DimMismatch(..)
                | Error::UnsupportedTruncation { .. } => ("invalid_params", 3),
                Error::Io(_) => ("io", 3),
            };
            let payload = json!({
                "schema_version": SCHEMA_VERSION,
                "error": err.to_string(),
                "kind": kind,
            });
            eprintln!("{payload}");
            std::process::exit(code);
        }
    }
}
