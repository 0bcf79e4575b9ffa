use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use thiserror::Error;

use zh_fourier::circuit::{
    self, ancilla_toffoli, branch, circuit_to_diagram, classify, commute_x_through_hbox, extract_clifford_t,
    gidney_pair, t_count, toffoli_cs_cancel, Circuit, CircuitError, Gate, TCountReport,
};
use zh_fourier::fourier::{self, FourierError};
use zh_fourier::tensor::{self, max_deviation, proportional, TensorError};
use zh_fourier::verify::{check_all, is_check_name, DEFAULT_SEED};
use zh_fourier::{Diagram, DiagramError, Phase};

#[derive(Parser)]
#[command(name = "zhft", version, about = "Fourier transforms between ZH and ZX diagrams, and T-count passes")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Config {
    /// Stand-in amplitude for zeros when taking logarithms
    #[arg(long, global = true, default_value_t = fourier::DEFAULT_EPS)]
    eps: f64,
    /// Tolerance for oracle comparisons
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Largest qubit count the tensor oracle will evaluate
    #[arg(long, global = true, default_value_t = circuit::MAX_QUBITS)]
    max_qubits: usize,
    /// Print reports as JSON
    #[arg(long, global = true)]
    json: bool,
    /// Print each step
    #[arg(long, global = true)]
    trace: bool,
    /// Allow an output file to replace an input file
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficient table to spectrum, or back with --inverse
    Fourier {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Read a spectrum and write the coefficient table
        #[arg(long)]
        inverse: bool,
        /// Treat the table values as amplitudes a_b and use α_b = −i ln a_b
        #[arg(long, conflicts_with = "inverse")]
        amplitudes: bool,
    },
    /// Run passes over a circuit file
    Optimize {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Comma-separated passes: cs-cancel, x-through-hbox, extract
        #[arg(short, long, value_delimiter = ',', default_value = "cs-cancel")]
        passes: Vec<String>,
        /// Check the result against the input with the tensor oracle
        #[arg(long)]
        verify: bool,
    },
    /// Emit a multi-controlled Toffoli construction
    SynthToffoli {
        #[arg(long, default_value_t = 2)]
        controls: usize,
        /// One |+> ancilla, post-selected, with a correction circuit
        #[arg(long, conflicts_with = "gidney")]
        ancilla: bool,
        /// Compute-uncompute pair with a measured ancilla
        #[arg(long)]
        gidney: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Where to write the correction circuit (default: OUTPUT.correction)
        #[arg(long)]
        correction: Option<PathBuf>,
        /// Check the construction with the tensor oracle
        #[arg(long)]
        verify: bool,
    },
    /// Check every rewrite rule and lemma on random instances
    VerifyRules {
        /// Only this rule or lemma
        #[arg(long)]
        rule: Option<String>,
        /// Largest instance size
        #[arg(long, default_value_t = 3)]
        size: usize,
        #[arg(long, default_value_t = 20)]
        instances: usize,
    },
    /// Evaluate a diagram JSON file to a tensor dump
    Eval {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {msg}")]
    Input { path: PathBuf, msg: String },
    #[error("refusing to overwrite input {0} (use --force)")]
    Overwrite(PathBuf),
    #[error("invalid option: {0}")]
    Config(String),
    #[error("unknown pass '{0}'")]
    UnknownPass(String),
    #[error("unknown rule or lemma '{0}'")]
    UnknownRule(String),
    #[error("verification failed: max deviation {0:.3e}")]
    Verification(f64),
    #[error("{0} check(s) failed")]
    Checks(usize),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Fourier(#[from] FourierError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

impl CliError {
    /// 1 for a failed check, 2 for bad input or usage.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) | CliError::Checks(_) => 1,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (fs::canonicalize(a), fs::canonicalize(b)) {
        (Ok(x), Ok(y)) => x == y,
        _ => a == b,
    }
}

/// Write to `out`, or stdout when absent, refusing to replace any input.
fn write(cfg: &Config, out: Option<&Path>, inputs: &[&Path], text: &str) -> Result<()> {
    let Some(out) = out else {
        print!("{text}");
        return Ok(());
    };
    if !cfg.force && inputs.iter().any(|i| same_file(i, out)) {
        return Err(CliError::Overwrite(out.to_path_buf()));
    }
    fs::write(out, text).map_err(|source| CliError::Io { path: out.to_path_buf(), source })
}

fn input_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input { path: path.to_path_buf(), msg: e.to_string() }
}

fn validate(cfg: &Config) -> Result<()> {
    if !(cfg.eps > 0.0 && cfg.eps < 1.0) {
        return Err(CliError::Config(format!("--eps must lie in (0, 1), got {}", cfg.eps)));
    }
    if !(cfg.tol > 0.0) {
        return Err(CliError::Config(format!("--tol must be positive, got {}", cfg.tol)));
    }
    if cfg.max_qubits > tensor::MAX_WIRES {
        return Err(CliError::Config(format!("--max-qubits is at most {}", tensor::MAX_WIRES)));
    }
    Ok(())
}

fn cmd_fourier(cfg: &Config, input: &Path, output: Option<&Path>, inverse: bool, amplitudes: bool) -> Result<()> {
    let text = read(input)?;
    let out = if inverse {
        let gf = fourier::parse_spectrum(&text).map_err(|e| input_err(input, e))?;
        fourier::format_table(&fourier::inverse(&gf))
    } else {
        let ct = fourier::parse_table(&text).map_err(|e| input_err(input, e))?;
        let gf = if amplitudes {
            fourier::nf_to_gadget_form(ct.values(), cfg.eps)?.0
        } else {
            fourier::forward(&ct)
        };
        fourier::format_spectrum(&gf)
    };
    write(cfg, output, &[input], &out)
}

fn report_json(r: &TCountReport) -> serde_json::Value {
    json!({
        "t_count": r.t_count,
        "rotation_census": r.rotation_census,
        "ancilla_count": r.ancilla_count,
        "correction_cost": r.correction_cost.map(|c| c.to_string()),
    })
}

fn report_line(r: &TCountReport) -> String {
    let census: Vec<String> = r.rotation_census.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    let mut s = format!("t-count {}, rotations {{{}}}, ancillae {}", r.t_count, census.join(", "), r.ancilla_count);
    if let Some(c) = r.correction_cost {
        s.push_str(&format!(", correction {c}"));
    }
    s
}

/// Semantics used to compare circuits: the post-selected map when every
/// ancilla has a fixed end, the full unitary otherwise.
fn semantics(c: &Circuit, max_qubits: usize) -> Result<tensor::Tensor> {
    if c.qubits > max_qubits {
        return Err(CliError::Config(format!("circuit has {} qubits; --max-qubits is {max_qubits}", c.qubits)));
    }
    let measured = c.ancillae.iter().any(|a| a.end == circuit::End::Measure);
    Ok(if measured { circuit::unitary(c)? } else { branch(c, &[])? })
}

fn x_through_hbox_all(c: &Circuit, trace: &mut Vec<String>) -> Circuit {
    let mut cur = c.clone();
    for site in 0..cur.gates.len() {
        if let Ok(next) = commute_x_through_hbox(&cur, site) {
            if next != cur {
                trace.push(format!("x-through-hbox: rewrote gate {site}"));
            }
            cur = next;
        }
    }
    cur
}

fn cmd_optimize(cfg: &Config, input: &Path, output: Option<&Path>, passes: &[String], verify: bool) -> Result<()> {
    let text = read(input)?;
    let original = Circuit::parse(&text).map_err(|e| input_err(input, e))?;
    let mut cur = original.clone();
    let mut trace = Vec::new();
    for p in passes {
        let before = t_count(&cur).t_count;
        match p.as_str() {
            "cs-cancel" => {
                let r = toffoli_cs_cancel(&cur);
                if r.matches == 0 {
                    trace.push("cs-cancel: no match".to_string());
                }
                cur = r.circuit;
            }
            "x-through-hbox" => cur = x_through_hbox_all(&cur, &mut trace),
            "extract" => {
                if !cur.ancillae.is_empty() {
                    return Err(CircuitError::NotExtractable("circuit has ancillae".into()).into());
                }
                cur = extract_clifford_t(&circuit_to_diagram(&cur)?)?;
            }
            other => return Err(CliError::UnknownPass(other.to_string())),
        }
        trace.push(format!("{p}: t-count {before} -> {}", t_count(&cur).t_count));
    }
    let (before, after) = (t_count(&original), t_count(&cur));
    let mut deviation = None;
    if verify {
        let (a, b) = (semantics(&original, cfg.max_qubits)?, semantics(&cur, cfg.max_qubits)?);
        let dev = max_deviation(&a, &b, cfg.tol)?;
        deviation = Some(dev);
        if !proportional(&a, &b, cfg.tol)? {
            return Err(CliError::Verification(dev));
        }
    }
    write(cfg, output, &[input], &cur.to_text())?;
    if cfg.json {
        let v = json!({"before": report_json(&before), "after": report_json(&after), "max_deviation": deviation});
        eprintln!("{v}");
    } else {
        if cfg.trace {
            for line in &trace {
                eprintln!("{line}");
            }
        }
        eprintln!("t-count: {} -> {}", before.t_count, after.t_count);
        if let Some(d) = deviation {
            eprintln!("verified: max deviation {d:.3e}");
        }
    }
    Ok(())
}

fn plain_toffoli(n: usize) -> Result<Circuit> {
    let d = fourier::expand_hbox(Phase::pi(), n + 1);
    let mut c = Circuit::new(n + 1);
    c.push(Gate::H(n));
    c.gates.extend(extract_clifford_t(&d)?.gates);
    c.push(Gate::H(n));
    Ok(c)
}

fn with_suffix(p: &Path, suffix: &str) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn cmd_synth(cfg: &Config, n: usize, ancilla: bool, gidney: bool, output: Option<&Path>, correction: Option<&Path>, verify: bool) -> Result<()> {
    let (main, fix) = if ancilla {
        let (m, f) = ancilla_toffoli(n)?;
        (m, Some(f))
    } else if gidney {
        let (m, f) = gidney_pair(n)?;
        (m, Some(f))
    } else {
        (plain_toffoli(n)?, None)
    };
    let mut report = t_count(&main);
    report.correction_cost = fix.as_ref().map(classify);
    if verify {
        verify_synth(cfg, n, &main, fix.as_ref(), gidney)?;
    }
    write(cfg, output, &[], &main.to_text())?;
    if let Some(fix) = &fix {
        let target = correction.map(Path::to_path_buf).or_else(|| output.map(|o| with_suffix(o, ".correction")));
        match target {
            Some(p) => write(cfg, Some(&p), &[], &fix.to_text())?,
            None => {
                println!("# correction for the <-| outcome:");
                for line in fix.to_text().lines() {
                    println!("# {line}");
                }
            }
        }
    }
    if cfg.json {
        eprintln!("{}", report_json(&report));
    } else {
        eprintln!("{}", report_line(&report));
    }
    Ok(())
}

fn verify_synth(cfg: &Config, n: usize, main: &Circuit, fix: Option<&Circuit>, gidney: bool) -> Result<()> {
    if main.qubits > cfg.max_qubits {
        return Err(CliError::Config(format!("construction has {} qubits; --max-qubits is {}", main.qubits, cfg.max_qubits)));
    }
    let reference = if gidney {
        branch(&circuit::gidney_reference(n), &[])?
    } else {
        let mut t = Circuit::new(n + 1);
        t.push(Gate::Toffoli((0..n).collect(), n));
        circuit::unitary(&t)?
    };
    let a = n + 1;
    let mut branches = vec![branch(main, &[(a, tensor::Effect::Plus)]).or_else(|_| branch(main, &[]))?];
    if let Some(fix) = fix {
        let minus = branch(main, &[(a, tensor::Effect::Minus)])?;
        branches.push(circuit::unitary(fix)?.matmul(&minus)?);
    }
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for b in &branches {
        worst = worst.max(max_deviation(b, &reference, cfg.tol)?);
        ok &= proportional(b, &reference, cfg.tol)?;
    }
    if !ok {
        return Err(CliError::Verification(worst));
    }
    eprintln!("verified {} branch(es): max deviation {worst:.3e}", branches.len());
    Ok(())
}

fn cmd_verify_rules(cfg: &Config, rule: Option<&str>, size: usize, instances: usize) -> Result<()> {
    if let Some(r) = rule {
        if !is_check_name(r) {
            return Err(CliError::UnknownRule(r.to_string()));
        }
    }
    let reports = check_all(rule, size, instances, cfg.tol, cfg.seed);
    let failed = reports.iter().filter(|r| !r.ok()).count();
    if cfg.json {
        let v = json!({"seed": cfg.seed, "size": size, "instances": instances, "tol": cfg.tol, "checks": reports});
        println!("{}", serde_json::to_string_pretty(&v).expect("serializable report"));
    } else {
        println!("seed {}  size {size}  instances {instances}  tol {:e}", cfg.seed, cfg.tol);
        for r in &reports {
            let status = if r.ok() { "PASS" } else { "FAIL" };
            let exact = match r.exact_scalar {
                Some(true) => "exact",
                Some(false) => "scalar differs",
                None => "-",
            };
            println!("{status}  {:<28} {:>3}/{:<3} max dev {:.2e}  {exact}", r.name, r.passed, r.instances, r.max_deviation);
            if cfg.trace {
                for f in &r.failures {
                    println!("      {f}");
                }
            }
        }
    }
    if failed > 0 {
        return Err(CliError::Checks(failed));
    }
    Ok(())
}

fn cmd_eval(cfg: &Config, input: &Path, output: Option<&Path>) -> Result<()> {
    let text = read(input)?;
    let d = Diagram::from_json_str(&text).map_err(|e| input_err(input, e))?;
    let wires = d.num_inputs() + d.num_outputs();
    if wires > cfg.max_qubits {
        return Err(CliError::Config(format!("diagram has {wires} open wires; --max-qubits is {}", cfg.max_qubits)));
    }
    let t = tensor::evaluate(&d)?;
    write(cfg, output, &[input], &t.dump())
}

fn run(cli: Cli) -> Result<()> {
    let cfg = &cli.config;
    validate(cfg)?;
    match &cli.command {
        Command::Fourier { input, output, inverse, amplitudes } => {
            cmd_fourier(cfg, input, output.as_deref(), *inverse, *amplitudes)
        }
        Command::Optimize { input, output, passes, verify } => cmd_optimize(cfg, input, output.as_deref(), passes, *verify),
        Command::SynthToffoli { controls, ancilla, gidney, output, correction, verify } => {
            cmd_synth(cfg, *controls, *ancilla, *gidney, output.as_deref(), correction.as_deref(), *verify)
        }
        Command::VerifyRules { rule, size, instances } => cmd_verify_rules(cfg, rule.as_deref(), *size, *instances),
        Command::Eval { input, output } => cmd_eval(cfg, input, output.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
