use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qccsim::chsh::{format_fixed, maximize_s, s_factor, scan_s};
use qccsim::circuit::{self, classify, format_angle, parse_angle, EngineChoice, ParseError, Simulability};
use qccsim::lhv::{classical_max_s, enumerate_strategies, fit_lhv, FitOutcome, DEFAULT_FIT_TOL};
use qccsim::protocols::{
    bb84_simulate, superdense_code, teleport_stabilizer_branch, teleport_statevector_branch, Branch, QubitPreparation,
};
use qccsim::rng::seeded;
use qccsim::statevector::QubitSpec;
use qccsim::{MeasurementSettings64, StateVector64};

const EXIT_INTERNAL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NON_SIMULABLE: u8 = 3;

#[derive(Parser)]
#[command(name = "qccsim", version, about = "CHSH analysis, stabilizer simulation, LHV models and quantum protocols")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// CHSH S-factor evaluation, scans and maximization
    #[command(subcommand)]
    Chsh(ChshCommand),
    /// Local hidden variable models for the CHSH experiment
    #[command(subcommand)]
    Lhv(LhvCommand),
    /// Teleport one qubit through a Bell pair
    Teleport(TeleportArgs),
    /// Send two classical bits with one qubit of a Bell pair
    Superdense(SuperdenseArgs),
    /// BB84 key distribution, optionally with an intercept-resend eavesdropper
    Bb84(Bb84Args),
    /// Run a circuit file
    Run(RunArgs),
    /// Report whether a circuit file is stabilizer-simulable (exit 3 if not)
    Classify(ClassifyArgs),
}

#[derive(Subcommand)]
enum ChshCommand {
    /// Evaluate the four correlations and S at one setting
    Eval(EvalArgs),
    /// Write S over an (alpha2, chi2) grid as CSV
    Scan(ScanArgs),
    /// Maximize S over the free angles
    Max(MaxArgs),
}

#[derive(Args)]
struct StateArg {
    /// psi-plus, phi-plus, or product:<q>;<q> with each <q> a named state
    /// (0, 1, +, -, +i, -i, optionally gate-prefixed like t|+>) or real
    /// amplitudes `a,b`
    #[arg(long, default_value = "psi-plus")]
    state: String,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    state: StateArg,
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    alpha1: f64,
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    chi1: f64,
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    alpha2: f64,
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    chi2: f64,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    state: StateArg,
    #[arg(long, value_parser = angle, allow_hyphen_values = true, default_value = "pi/2")]
    alpha1: f64,
    #[arg(long, value_parser = angle, allow_hyphen_values = true, default_value = "-pi/4")]
    chi1: f64,
    /// Grid points per axis over [-pi, pi]
    #[arg(long, default_value_t = 201, value_parser = clap::value_parser!(u64).range(2..=20001))]
    resolution: u64,
    /// Output path; CSV goes to stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MaxArgs {
    #[command(flatten)]
    state: StateArg,
    /// Fix alpha1 (requires --chi1); otherwise all four angles are free
    #[arg(long, value_parser = angle, allow_hyphen_values = true, requires = "chi1")]
    alpha1: Option<f64>,
    #[arg(long, value_parser = angle, allow_hyphen_values = true, requires = "alpha1")]
    chi1: Option<f64>,
}

#[derive(Subcommand)]
enum LhvCommand {
    /// Print the classical bound on |S|
    Bound,
    /// Fit a local model to four correlations
    Fit(FitArgs),
}

#[derive(Args)]
struct FitArgs {
    #[arg(long, allow_hyphen_values = true)]
    e11: f64,
    #[arg(long, allow_hyphen_values = true)]
    e12: f64,
    #[arg(long, allow_hyphen_values = true)]
    e21: f64,
    #[arg(long, allow_hyphen_values = true)]
    e22: f64,
    #[arg(long, default_value_t = DEFAULT_FIT_TOL)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolEngine {
    Statevector,
    Stabilizer,
}

#[derive(Args)]
struct TeleportArgs {
    /// Real amplitudes `a,b`, a named state (0, 1, +, -, +i, -i) or a
    /// gate-prefixed one such as `t|+>`
    #[arg(long, allow_hyphen_values = true)]
    input: String,
    #[arg(long, value_enum, default_value = "statevector")]
    engine: ProtocolEngine,
    /// Force the Bell-measurement outcomes, e.g. `10`
    #[arg(long, value_parser = bit_pair)]
    branch: Option<(bool, bool)>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SuperdenseArgs {
    /// Two bits, e.g. `01`
    #[arg(long, value_parser = bit_pair)]
    bits: (bool, bool),
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct Bb84Args {
    #[arg(long, default_value_t = 10_000)]
    rounds: usize,
    #[arg(long)]
    eavesdrop: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum RunEngine {
    Auto,
    Statevector,
    Stabilizer,
}

#[derive(Args)]
struct RunArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    engine: RunEngine,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ClassifyArgs {
    file: PathBuf,
}

/// Bad input detected after flag parsing; exits with the usage code.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn angle(s: &str) -> Result<f64, String> {
    parse_angle(s).ok_or_else(|| format!("`{s}` is not an angle (use radians or pi tokens like -3pi/4)"))
}

fn bit_pair(s: &str) -> Result<(bool, bool), String> {
    match s.as_bytes() {
        [a @ (b'0' | b'1'), b @ (b'0' | b'1')] => Ok((*a == b'1', *b == b'1')),
        _ => Err(format!("expected two bits like `01`, got `{s}`")),
    }
}

enum Qubit {
    Amplitudes(QubitSpec<f64>),
    Prepared(QubitPreparation),
}

impl Qubit {
    fn parse(s: &str) -> Result<Self> {
        if let Some((a, b)) = s.split_once(',') {
            let parse = |t: &str| t.trim().parse::<f64>().map_err(|_| usage(format!("bad amplitude `{t}`")));
            let (a, b) = (parse(a)?, parse(b)?);
            return Ok(Qubit::Amplitudes([a.into(), b.into()]));
        }
        QubitPreparation::parse(s).map(Qubit::Prepared).map_err(|e| usage(e.to_string()))
    }

    fn amplitudes(&self) -> Result<QubitSpec<f64>> {
        match self {
            Qubit::Amplitudes(a) => Ok(*a),
            Qubit::Prepared(p) => Ok(p.to_statevector::<f64>()?.as_qubit().expect("one qubit")),
        }
    }
}

fn parse_state(s: &str) -> Result<StateVector64> {
    match s.to_ascii_lowercase().as_str() {
        "psi-plus" | "psi_plus" => return Ok(StateVector64::psi_plus()),
        "phi-plus" | "phi_plus" => return Ok(StateVector64::phi_plus()),
        _ => {}
    }
    let factors = s
        .strip_prefix("product:")
        .ok_or_else(|| usage(format!("unknown state `{s}`; use psi-plus, phi-plus or product:<q>;<q>")))?;
    let specs = factors.split(';').map(|f| Qubit::parse(f.trim())?.amplitudes()).collect::<Result<Vec<_>>>()?;
    if specs.len() != 2 {
        return Err(usage(format!("a product state needs 2 factors, got {}", specs.len())));
    }
    Ok(StateVector64::product(&specs)?)
}

fn fixed(v: f64) -> String {
    format_fixed(v, 9)
}

fn chsh_eval(args: &EvalArgs) -> Result<()> {
    let state = parse_state(&args.state.state)?;
    let settings = MeasurementSettings64::new(args.alpha1, args.alpha2, args.chi1, args.chi2);
    let r = s_factor(&state, &settings)?;
    println!("state={}", args.state.state);
    for (name, v) in
        [("alpha1", settings.alpha1), ("chi1", settings.chi1), ("alpha2", settings.alpha2), ("chi2", settings.chi2)]
    {
        println!("{name}={}", format_angle(v));
    }
    for (i, row) in r.correlations.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            println!("E{}{}={}", i + 1, j + 1, fixed(*e));
        }
    }
    println!("S={}", fixed(r.s_value));
    Ok(())
}

fn chsh_scan(args: &ScanArgs) -> Result<()> {
    let state = parse_state(&args.state.state)?;
    let grid = scan_s(&state, args.alpha1, args.chi1, args.resolution as usize)?;
    let csv = grid.to_csv();
    match &args.out {
        Some(path) => {
            fs::write(path, &csv).with_context(|| format!("writing {}", path.display()))?;
            let (a2, c2, s) = grid.max_cell();
            println!("rows={}", grid.alpha2_axis.len() * grid.chi2_axis.len());
            println!("out={}", path.display());
            println!("max_S={} alpha2={} chi2={}", fixed(s), fixed(a2), fixed(c2));
        }
        None => std::io::stdout().lock().write_all(csv.as_bytes())?,
    }
    Ok(())
}

fn chsh_max(args: &MaxArgs) -> Result<()> {
    let state = parse_state(&args.state.state)?;
    let fixed_angles = args.alpha1.zip(args.chi1);
    let (settings, s) = maximize_s(&state, fixed_angles)?;
    println!("state={}", args.state.state);
    println!("alpha1={}", fixed(settings.alpha1));
    println!("chi1={}", fixed(settings.chi1));
    println!("alpha2={}", fixed(settings.alpha2));
    println!("chi2={}", fixed(settings.chi2));
    println!("S={}", fixed(s));
    Ok(())
}

fn lhv_fit(args: &FitArgs) -> Result<()> {
    let targets = [[args.e11, args.e12], [args.e21, args.e22]];
    match fit_lhv(targets, args.tol)? {
        FitOutcome::Infeasible => println!("INFEASIBLE"),
        FitOutcome::Feasible(model) => {
            let sign = |v: i8| if v > 0 { '+' } else { '-' };
            for (s, w) in enumerate_strategies().iter().zip(model.weights()) {
                println!("weight[{}{}{}{}]={}", sign(s.a1), sign(s.a2), sign(s.b1), sign(s.b2), format_fixed(*w, 10));
            }
            let e = model.correlations();
            println!("E11={} E12={} E21={} E22={}", fixed(e[0][0]), fixed(e[0][1]), fixed(e[1][0]), fixed(e[1][1]));
            println!("S={}", fixed(model.s_value()));
        }
    }
    Ok(())
}

fn teleport(args: &TeleportArgs) -> Result<()> {
    let branch = args.branch.map_or(Branch::Sampled, |(a, b)| Branch::Forced(u8::from(a), u8::from(b)));
    let mut rng = seeded(args.seed);
    let input = Qubit::parse(&args.input)?;
    let report = match args.engine {
        ProtocolEngine::Statevector => {
            let state = StateVector64::from_amplitudes(input.amplitudes()?.to_vec())?;
            teleport_statevector_branch(&state, branch, &mut rng)?.report
        }
        ProtocolEngine::Stabilizer => {
            let Qubit::Prepared(prep) = input else {
                return Err(usage("the stabilizer engine takes a named input state, not amplitudes"));
            };
            teleport_stabilizer_branch(&prep, branch, &mut rng)?.report
        }
    };
    print!("{}", report.render());
    Ok(())
}

fn read_circuit(path: &PathBuf) -> Result<(String, circuit::Circuit)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let c = circuit::parse(&text).map_err(|e| anyhow::Error::new(e).context(path.display().to_string()))?;
    Ok((text, c))
}

fn run_file(args: &RunArgs) -> Result<()> {
    let (_, c) = read_circuit(&args.file)?;
    let engine = match args.engine {
        RunEngine::Auto => EngineChoice::Auto,
        RunEngine::Statevector => EngineChoice::Statevector,
        RunEngine::Stabilizer => EngineChoice::Stabilizer,
    };
    print!("{}", circuit::run(&c, engine, args.seed)?.render());
    Ok(())
}

fn classify_file(args: &ClassifyArgs) -> Result<u8> {
    let (text, c) = read_circuit(&args.file)?;
    let class = classify(&c);
    match class.value {
        Simulability::StabilizerSimulable => {
            println!("class=StabilizerSimulable");
            Ok(0)
        }
        Simulability::RequiresStatevector => {
            println!("class=RequiresStatevector");
            let lines: Vec<&str> = text.lines().collect();
            for loc in &class.witnesses {
                let source = lines.get(loc.line - 1).map_or("", |l| l.split('#').next().unwrap_or("").trim());
                println!("witness={loc} {source}");
            }
            Ok(EXIT_NON_SIMULABLE)
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Chsh(ChshCommand::Eval(a)) => chsh_eval(&a)?,
        Command::Chsh(ChshCommand::Scan(a)) => chsh_scan(&a)?,
        Command::Chsh(ChshCommand::Max(a)) => chsh_max(&a)?,
        Command::Lhv(LhvCommand::Bound) => println!("{:.1}", classical_max_s()),
        Command::Lhv(LhvCommand::Fit(a)) => lhv_fit(&a)?,
        Command::Teleport(a) => teleport(&a)?,
        Command::Superdense(a) => print!("{}", superdense_code(a.bits, &mut seeded(a.seed))?.render()),
        Command::Bb84(a) => print!("{}", bb84_simulate(a.rounds, a.eavesdrop, &mut seeded(a.seed))?.render()),
        Command::Run(a) => run_file(&a)?,
        Command::Classify(a) => return classify_file(&a),
    }
    Ok(0)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() || err.downcast_ref::<ParseError>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<qccsim::Error>() {
        Some(qccsim::Error::NonCliffordGate { .. }) => EXIT_NON_SIMULABLE,
        Some(qccsim::Error::Projection { .. } | qccsim::Error::Model(_)) | None => EXIT_INTERNAL,
        Some(_) => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            if let Some(qccsim::Error::NonCliffordGate { witnesses, .. }) = err.downcast_ref::<qccsim::Error>() {
                for loc in witnesses {
                    eprintln!("witness={loc}");
                }
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
