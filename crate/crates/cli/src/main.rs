use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use qwalk_core::circuit::{depth_with, gate_counts, qasm};
use qwalk_core::coin::{random_field, total_coin_matrix, CoinSpec};
use qwalk_core::compile::compile;
use qwalk_core::linear::{ancilla_residual, build_linear, predicted_depth, predicted_q1_depth, predicted_q2_depth};
use qwalk_core::scaling::{scaling_table, Construction};
use qwalk_core::shift::{build_shift, predicted_cost, shift_permutation_matrix, CostScheme, ShiftScheme};
use qwalk_core::statevec::circuit_unitary;
use qwalk_core::walk::{oracle_for, run, CoinBuilder, WalkConfig, WalkResults};
use qwalk_core::walsh::{build_dirac_coin, build_walsh_coin};
use qwalk_core::{Circuit, DepthConvention, SparseState};
use serde::Serialize;

/// Circuits for quantum walks with position-dependent coins.
///
/// The dense-matrix qubit cap (default 14) can be raised with the
/// QWALK_DENSE_LIMIT environment variable.
#[derive(Parser)]
#[command(name = "qwalk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a coin circuit from a coin specification.
    Build {
        #[arg(long)]
        construction: Construction,
        /// Coin specification (JSON).
        #[arg(long)]
        coin: PathBuf,
        /// Keep Walsh terms up to this order (walsh only).
        #[arg(long)]
        truncation: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        /// Also write the compiled circuit as OpenQASM 2.0.
        #[arg(long)]
        qasm: Option<PathBuf>,
    },
    /// Depth, gate counts and closed-form predictions of a stored circuit.
    Analyze {
        #[arg(long)]
        circuit: PathBuf,
        /// Lower to {Rx, Ry, Rz, P, CNOT} first.
        #[arg(long)]
        compile: bool,
    },
    /// Check a construction against its dense oracle on a seeded field.
    Verify {
        #[arg(long)]
        construction: Construction,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a walk; each --out gets JSON or CSV by extension.
    Walk {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, required = true)]
        out: Vec<PathBuf>,
        /// Overrides the sampling seed of the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Resource table over a range of n, written as CSV.
    Scaling {
        /// All constructions when omitted.
        #[arg(long)]
        construction: Option<Construction>,
        #[arg(long, default_value = "1..6", value_parser = parse_range)]
        n_range: (usize, usize),
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a shift circuit and compare with the published costs.
    Shift {
        #[arg(long)]
        scheme: ShiftScheme,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// `a..b` and `a..=b` are both inclusive; a single number is a one-point range.
fn parse_range(s: &str) -> std::result::Result<(usize, usize), String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let a = parse(s)?;
            (a, a)
        }
    };
    if a == 0 || b < a {
        return Err(format!("empty or invalid range `{s}`"));
    }
    Ok((a, b))
}

const VERIFY_TOL: f64 = 1e-10;
const WALSH_VERIFY_TOL: f64 = 1e-9;

enum Status {
    Ok,
    VerificationFailed,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn build(construction: Construction, coin: &Path, truncation: Option<usize>) -> Result<Circuit> {
    let spec: CoinSpec = serde_json::from_str(&read(coin)?).context("coin specification")?;
    let field = spec.build()?;
    if truncation.is_some() && construction != Construction::Walsh {
        bail!("--truncation applies to the walsh construction only");
    }
    Ok(match (construction, spec.dirac()) {
        (Construction::Walsh, Some(d)) => build_dirac_coin(d, truncation)?,
        (Construction::Walsh, None) => build_walsh_coin(&field.euler_angles(), truncation.unwrap_or(field.n()))?,
        (c, _) => c.build(&field)?,
    })
}

fn analyze(path: &Path, compile_first: bool) -> Result<()> {
    let mut c = Circuit::from_json(&read(path)?)?;
    if compile_first {
        c = compile(&c)?;
    }
    let n = c.register_map.n;
    println!("builder: {}", c.metadata.builder);
    println!("n: {n}");
    println!("qubits: {}", c.num_wires());
    println!("gates: {}", c.len());
    println!("multi-qubit gates: {}", c.multi_qubit_count());
    println!("depth: {}", depth_with(&c, DepthConvention::SwapWeighted));
    println!("depth (swaps expanded): {}", depth_with(&c, DepthConvention::Expanded));
    for (kind, count) in gate_counts(&c) {
        println!("  {kind}: {count}");
    }
    match c.metadata.builder.as_str() {
        "linear" => {
            println!("predicted depth bound 20n+2δ-7: {}", predicted_depth(n));
            println!("predicted Q1 depth bound 5n-2+δ: {}", predicted_q1_depth(n));
            println!("predicted Q2 depth bound 5n-2: {}", predicted_q2_depth(n));
        }
        "naive" => println!("predicted coin gates 2^n: {}", 1usize << n),
        "shift-qft" => print_cost("qft", predicted_cost(CostScheme::Qft, n)),
        "shift-id" => {
            print_cost("id", predicted_cost(CostScheme::Id, n));
            print_cost("id with ancilla", predicted_cost(CostScheme::IdAncilla, n));
        }
        _ => {}
    }
    Ok(())
}

fn print_cost(name: &str, (size, depth): (usize, usize)) {
    println!("predicted {name} size: {size}, depth: {depth}");
}

fn verify(construction: Construction, n: usize, seed: u64) -> Result<Status> {
    let field = random_field(n, seed);
    let (dev, tol) = match construction {
        Construction::Linear => {
            let c = build_linear(&field, true);
            let mut dev = 0.0f64;
            for input in 0..2usize << n {
                let mut s = SparseState::basis(c.num_wires(), input as u128)?;
                s.apply_circuit(&c)?;
                let (k, coin) = (input / 2, input % 2);
                let out = s.project_low(n + 1);
                let u = field.coin(k);
                for (i, a) in out.iter().enumerate() {
                    let want = if i / 2 == k { u.0[i % 2][coin] } else { Default::default() };
                    dev = dev.max((a - want).norm());
                }
                dev = dev.max(ancilla_residual(&s, n));
            }
            (dev, VERIFY_TOL)
        }
        c => {
            let u = circuit_unitary(&c.build(&field)?)?;
            let tol = if c == Construction::Walsh { WALSH_VERIFY_TOL } else { VERIFY_TOL };
            (u.max_abs_diff(&total_coin_matrix(&field)?)?, tol)
        }
    };
    println!("{construction} n={n} seed={seed}: max deviation {dev:.3e} (tolerance {tol:e})");
    Ok(if dev <= tol { Status::Ok } else { Status::VerificationFailed })
}

#[derive(Serialize)]
struct PositionRow {
    k: usize,
    p_k: f64,
    count: Option<u64>,
}

fn walk(config_path: &Path, outs: &[PathBuf], seed: Option<u64>) -> Result<()> {
    let mut config = WalkConfig::from_json(&read(config_path)?)?;
    if let Some(s) = seed {
        config.seed = Some(s);
    }
    let mut run_config = config.clone();
    if let CoinBuilder::Circuit { path } = &mut run_config.builder {
        if path.is_relative() {
            *path = config_path.parent().unwrap_or(Path::new(".")).join(&*path);
        }
    }
    let outcome = run(&run_config)?;
    // The oracle is skipped when the dense matrices would not fit.
    let oracle = oracle_for(&run_config).ok();
    let results = WalkResults::new(&config, &outcome, oracle.as_ref())?;
    for out in outs {
        match out.extension().and_then(|e| e.to_str()) {
            Some("json") => write(out, &serde_json::to_string_pretty(&results)?)?,
            Some("csv") => {
                let mut w = csv::Writer::from_path(out).with_context(|| format!("writing {}", out.display()))?;
                for (k, &p_k) in results.probabilities.iter().enumerate() {
                    w.serialize(PositionRow { k, p_k, count: results.counts.as_ref().map(|c| c[k]) })?;
                }
                w.flush()?;
            }
            _ => bail!("output {} must end in .json or .csv", out.display()),
        }
    }
    if let Some(t) = results.tvd_vs_oracle {
        println!("tvd vs dense oracle: {t:.3e}");
    }
    Ok(())
}

fn scaling(construction: Option<Construction>, (lo, hi): (usize, usize), out: &Path) -> Result<()> {
    let ns: Vec<usize> = (lo..=hi).collect();
    let constructions = construction.map_or(Construction::ALL.to_vec(), |c| vec![c]);
    let mut w = csv::Writer::from_path(out).with_context(|| format!("writing {}", out.display()))?;
    println!("{:<8} {:>2} {:>6} {:>10} {:>10} {:>10} {:>10}", "builder", "n", "qubits", "gates", "compiled", "depth", "cnot");
    for c in constructions {
        for row in scaling_table(c, &ns, Default::default())? {
            println!(
                "{:<8} {:>2} {:>6} {:>10} {:>10} {:>10} {:>10}",
                row.construction.as_str(),
                row.n,
                row.qubits,
                row.gates_uncompiled,
                row.gates_compiled,
                row.depth_compiled,
                row.cnot_compiled
            );
            w.serialize(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn shift(scheme: ShiftScheme, n: usize, check: bool, out: Option<&Path>) -> Result<Status> {
    let c = build_shift(scheme, n);
    let compiled = compile(&c)?;
    println!("{} n={n}: {} gates, depth {}", c.metadata.builder, c.len(), depth_with(&c, DepthConvention::SwapWeighted));
    println!("compiled: {} gates, depth {}", compiled.len(), depth_with(&compiled, DepthConvention::Expanded));
    match scheme {
        ShiftScheme::Qft => print_cost("qft", predicted_cost(CostScheme::Qft, n)),
        ShiftScheme::Id => print_cost("id", predicted_cost(CostScheme::Id, n)),
    }
    if let Some(path) = out {
        write(path, &c.to_json())?;
    }
    if check {
        let dev = circuit_unitary(&c)?.max_abs_diff(&shift_permutation_matrix(n)?)?;
        println!("max deviation from the shift permutation: {dev:.3e}");
        if dev > WALSH_VERIFY_TOL {
            return Ok(Status::VerificationFailed);
        }
    }
    Ok(Status::Ok)
}

fn dispatch(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Build { construction, coin, truncation, out, qasm: qasm_out } => {
            let c = build(construction, &coin, truncation)?;
            write(&out, &c.to_json())?;
            if let Some(q) = qasm_out {
                write(&q, &qasm::to_qasm(&compile(&c)?)?)?;
            }
            println!("{}: {} gates on {} qubits", c.metadata.builder, c.len(), c.num_wires());
            Ok(Status::Ok)
        }
        Command::Analyze { circuit, compile } => analyze(&circuit, compile).map(|_| Status::Ok),
        Command::Verify { construction, n, seed } => verify(construction, n, seed),
        Command::Walk { config, out, seed } => walk(&config, &out, seed).map(|_| Status::Ok),
        Command::Scaling { construction, n_range, out } => scaling(construction, n_range, &out).map(|_| Status::Ok),
        Command::Shift { scheme, n, verify, out } => shift(scheme, n, verify, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::VerificationFailed) => ExitCode::from(1),
        Err(e) => {
            match e.downcast_ref::<qwalk_core::Error>() {
                Some(core) => eprintln!("error [{}]: {e:#}", core.code()),
                None => eprintln!("error: {e:#}"),
            }
            ExitCode::from(2)
        }
    }
}
