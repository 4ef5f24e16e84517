use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use chebrad_core::factor::DEFAULT_MAX_FIELD_SIZE;
use chebrad_core::montes::IndexOptions;
use chebrad_core::padic::DEFAULT_TRIAL_BOUND;
use chebrad_core::radical::{ell_phi, monogenic_density};
use chebrad_core::{
    analyze, build_instance, index_at_prime, orbit_graph, AnalysisOptions, ChebInstance, Error, FactorOptions,
    Irreducibility,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

mod verify;

/// Exit codes, part of the stable interface.
mod exit {
    pub const USAGE: u8 = 1;
    pub const OUT_OF_THEORY: u8 = 2;
    pub const RESOURCE: u8 = 3;
    pub const VERIFY: u8 = 4;
}

#[derive(Parser, Debug)]
#[command(name = "chebrad", version, about = "Discriminants, indices and integral bases of T_l^n(x) - t")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// RNG seed for polynomial factorization.
    #[arg(long, global = true, env = "CHEBRAD_SEED", default_value_t = 0)]
    seed: u64,

    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Write the output to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full report: D(Phi), monogenicity, indices, Delta(K), integral basis.
    Analyze {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Trial-division bound used when factoring t^2 - 4.
        #[arg(long, default_value_t = DEFAULT_TRIAL_BOUND)]
        factor_bound: u64,
    },
    /// Newton polygon of Phi at a prime (default: ell).
    Polygon {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        prime: Option<u64>,
        /// Render SVG instead of ASCII.
        #[arg(long)]
        svg: bool,
    },
    /// Functional graph of T_ell on F_{p^m}, as DOT.
    Orbit {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_FIELD_SIZE)]
        max_field_size: u64,
    },
    /// Cross-check sweeps; exit 4 on the first failing family.
    Verify {
        #[arg(long, value_enum, default_value_t = Sweep::All)]
        sweep: Sweep,
        /// Restrict sweeps to this ell.
        #[arg(long)]
        ell: Option<u64>,
        /// Restrict sweeps to this n.
        #[arg(long)]
        n: Option<u32>,
    },
    /// Truncated Euler product for the density of monogenic t.
    Density {
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 100_000)]
        prime_bound: u64,
    },
}

#[derive(Args, Debug)]
struct InstanceArgs {
    #[arg(long)]
    ell: u64,
    #[arg(long)]
    n: u32,
    #[arg(long, allow_hyphen_values = true)]
    t: BigInt,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sweep {
    All,
    DiscOracle,
    ClosedForm,
    Squeeze,
    Dedekind,
    Examples,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) | Error::DivisionByZero => exit::USAGE,
            Error::OutOfTheory(_) => exit::OUT_OF_THEORY,
            Error::ResourceLimit(_) => exit::RESOURCE,
            Error::TheoremViolation(_) | Error::Internal(_) => exit::VERIFY,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: exit::USAGE, message: e.to_string() }
    }
}

type CmdResult = Result<u8, Failure>;

fn emit(out: &Option<PathBuf>, body: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, body),
        None => io::stdout().lock().write_all(body.as_bytes()),
    }
}

fn instance(args: &InstanceArgs) -> Result<ChebInstance, Failure> {
    Ok(build_instance(args.ell, args.n, &args.t)?)
}

fn out_of_theory(reasons: &[String]) -> Failure {
    let message = serde_json::json!({ "status": "out-of-theory", "reasons": reasons }).to_string();
    Failure { code: exit::OUT_OF_THEORY, message }
}

fn cmd_analyze(cli: &Cli, args: &InstanceArgs, factor_bound: u64) -> CmdResult {
    let inst = instance(args)?;
    if let Irreducibility::Reducible { reason } = &inst.irreducibility {
        return Err(out_of_theory(&[format!("Phi is reducible: {reason}")]));
    }
    let opts = AnalysisOptions {
        seed: cli.seed,
        factor: FactorOptions { bound: factor_bound, ..FactorOptions::default() },
    };
    let report = analyze(&inst, &opts)?;
    let body = if cli.json { report.to_json() + "\n" } else { report.to_string() };
    emit(&cli.out, &body)?;
    if report.out_of_theory() {
        let reasons: Vec<String> = report
            .primes
            .iter()
            .filter(|e| e.out_of_theory)
            .map(|e| format!("p = {}: {}", e.prime, e.note))
            .collect();
        return Err(out_of_theory(&reasons));
    }
    Ok(0)
}

fn cmd_polygon(cli: &Cli, args: &InstanceArgs, prime: Option<u64>, svg: bool) -> CmdResult {
    let inst = instance(args)?;
    let p = prime.unwrap_or(inst.ell);
    let mut opts = IndexOptions { seed: cli.seed, ..IndexOptions::default() };
    if p == inst.ell {
        opts.lifts.push(ell_phi(&inst));
    }
    let res = index_at_prime(&inst.phi_poly, p, &opts)?;
    let body = if cli.json {
        serde_json::to_string_pretty(&res).map_err(|e| Failure { code: exit::VERIFY, message: e.to_string() })? + "\n"
    } else if svg {
        let mut s = String::new();
        let h = 430;
        s.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"{}\">\n",
            h * res.contributions.len().max(1)
        ));
        for (k, c) in res.contributions.iter().enumerate() {
            s.push_str(&format!("<!-- phi = {}, multiplicity {} -->\n", c.phi, c.multiplicity));
            s.push_str(&c.polygon.render_svg(c.phi.degree().unwrap_or(1)).replacen("<svg ", &format!("<svg y=\"{}\" ", k * h), 1));
        }
        s.push_str("</svg>\n");
        s
    } else {
        let mut s = format!("Phi = T_{}^{}(x) - {}, p = {p}\n", inst.ell, inst.n, inst.t);
        if res.contributions.is_empty() {
            s.push_str("no repeated factor modulo p; polygon empty\n");
        }
        for c in &res.contributions {
            s.push_str(&format!("phi = {}  (multiplicity {}, regular: {})\n", c.phi, c.multiplicity, c.regular));
            s.push_str(&c.polygon.render_ascii(c.phi.degree().unwrap_or(1)));
        }
        let total = if res.exact { res.lower.to_string() } else { format!("[{}, {}]", res.lower, res.upper) };
        s.push_str(&format!("ind_{p} = {total}\n"));
        s
    };
    emit(&cli.out, &body)?;
    Ok(0)
}

fn cmd_orbit(cli: &Cli, ell: u64, p: u64, m: usize, max: u64) -> CmdResult {
    let g = orbit_graph(ell, p, m, max)?;
    let body = if cli.json {
        serde_json::to_string_pretty(&g).map_err(|e| Failure { code: exit::VERIFY, message: e.to_string() })? + "\n"
    } else {
        g.to_dot()
    };
    emit(&cli.out, &body)?;
    eprintln!("nodes: {}, edges: {}", g.len(), g.len());
    Ok(0)
}

fn cmd_density(cli: &Cli, ell: u64, bound: u64) -> CmdResult {
    let d = monogenic_density(ell, bound)?;
    let body = if cli.json {
        serde_json::to_string_pretty(&d).map_err(|e| Failure { code: exit::VERIFY, message: e.to_string() })? + "\n"
    } else {
        format!(
            "ell = {ell}, odd primes <= {bound}\nprefactor = {}/{}\nproduct = {:.12}\ndensity = {:.12} (tail <= {:.3e})\n",
            d.prefactor[0], d.prefactor[1], d.partial_product, d.value, d.tail_bound
        )
    };
    emit(&cli.out, &body)?;
    Ok(0)
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Analyze { instance, factor_bound } => cmd_analyze(cli, instance, *factor_bound),
        Command::Polygon { instance, prime, svg } => cmd_polygon(cli, instance, *prime, *svg),
        Command::Orbit { ell, prime, m, max_field_size } => cmd_orbit(cli, *ell, *prime, *m, *max_field_size),
        Command::Verify { sweep, ell, n } => {
            let (body, ok) = verify::run(*sweep, *ell, *n, cli.seed, cli.json);
            emit(&cli.out, &body)?;
            Ok(if ok { 0 } else { exit::VERIFY })
        }
        Command::Density { ell, prime_bound } => cmd_density(cli, *ell, *prime_bound),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}
