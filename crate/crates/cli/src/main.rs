use std::collections::BTreeSet;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cuspidal::arith::factor_u64;
use cuspidal::hecke::eisenstein_entry;
use cuspidal::hecke::EisensteinReport;
use cuspidal::{Error, Modulus, Setting};
use cuspidal_cli::select::PrimeSelection;
use cuspidal_cli::table::{aligned, csv};
use cuspidal_cli::verify::{
    default_hecke_moduli, ff_levels_suite, ff_suite, hecke_suite, matrix_suite, nf_levels_suite, nf_suite, Budget,
};
use cuspidal_cli::{DeltaReport, Format, TorsionReport, VerifyReport};

/// Rational torsion of Jacobians and generalized Jacobians of X_0(N).
#[derive(Parser)]
#[command(name = "cuspidal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// J(F)_Tor and J̃(F)_Tor with their character decomposition
    Torsion(LevelArgs),
    /// orders and images of the connecting map δ, and C ∩ ker δ
    Delta(LevelArgs),
    /// run verification suites
    Verify(VerifyArgs),
    /// Δ-quotient checks over Q for every squarefree N ≤ nmax (same as verify --nf)
    VerifyEta(VerifyEtaArgs),
    /// Eisenstein checks for the Hecke action on cuspidal data
    Hecke(HeckeArgs),
}

#[derive(Args, Clone)]
struct ModulusArgs {
    /// work over Q; optionally give the level here
    #[arg(long, num_args = 0..=1, value_name = "LEVEL", conflicts_with = "ff")]
    nf: Option<Option<String>>,
    /// work over F_q(t)
    #[arg(long, value_name = "Q")]
    ff: Option<u64>,
    /// level: an integer, a polynomial, or a comma list of primes
    #[arg(long)]
    level: Option<String>,
}

impl ModulusArgs {
    fn setting(&self) -> Option<Setting> {
        match (&self.nf, self.ff) {
            (_, Some(q)) => Some(Setting::Ff { q }),
            (Some(_), None) => Some(Setting::Nf),
            (None, None) => None,
        }
    }

    fn level_text(&self) -> Option<&str> {
        self.level.as_deref().or(self.nf.as_ref().and_then(|v| v.as_deref()))
    }

    fn modulus(&self) -> Result<Modulus, Error> {
        let setting = self.setting().unwrap_or(Setting::Nf);
        let text = self.level_text().ok_or(Error::EmptyLevel)?;
        Modulus::parse(setting, text)
    }
}

#[derive(Args, Clone, Copy)]
struct FormatArgs {
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

impl FormatArgs {
    fn format(self) -> Format {
        match (self.json, self.csv) {
            (true, _) => Format::Json,
            (_, true) => Format::Csv,
            _ => Format::Text,
        }
    }
}

#[derive(Args)]
struct LevelArgs {
    #[command(flatten)]
    modulus: ModulusArgs,
    /// also invert the primes dividing this integer
    #[arg(long)]
    invert: Option<u64>,
    #[command(flatten)]
    format: FormatArgs,
}

impl LevelArgs {
    fn inverted(&self) -> BTreeSet<u64> {
        self.invert.map_or_else(BTreeSet::new, |n| factor_u64(n).into_iter().map(|(p, _)| p).collect())
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    modulus: ModulusArgs,
    /// matrix identities for s = 1..=smax
    #[arg(long)]
    matrix: bool,
    #[arg(long, default_value_t = 4)]
    smax: usize,
    /// Hecke/Eisenstein checks
    #[arg(long)]
    hecke: bool,
    /// largest level for the sweep over Q
    #[arg(long, default_value_t = 60)]
    nmax: u64,
    /// largest degree for the sweep over F_q(t)
    #[arg(long, default_value_t = 3)]
    dmax: usize,
    /// Hecke primes: a norm range such as 2..50, or a comma list
    #[arg(long = "p", alias = "primes", default_value = "2..=50")]
    primes: String,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// stop starting new levels after this many seconds
    #[arg(long)]
    budget_secs: Option<u64>,
    #[command(flatten)]
    format: FormatArgs,
}

#[derive(Args)]
struct VerifyEtaArgs {
    #[arg(long, default_value_t = 60)]
    nmax: u64,
    #[arg(long)]
    budget_secs: Option<u64>,
    #[command(flatten)]
    format: FormatArgs,
}

#[derive(Args)]
struct HeckeArgs {
    #[command(flatten)]
    modulus: ModulusArgs,
    /// a norm range such as 2..50, or a comma list of primes
    #[arg(long, alias = "p", default_value = "2..=50")]
    primes: String,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_parser = ["json", "text", "csv"], default_value = "text")]
    report: String,
}

/// Truncation for q-expansions from CUSPIDAL_TRUNC, if set.
fn truncation() -> Result<Option<usize>, Error> {
    match std::env::var("CUSPIDAL_TRUNC") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t > 0)
            .map(Some)
            .ok_or(Error::Parse { input: v, reason: "CUSPIDAL_TRUNC must be a positive integer".into() }),
        Err(_) => Ok(None),
    }
}

fn run_verify(args: &VerifyArgs) -> Result<VerifyReport, Error> {
    let budget = args.budget_secs.map_or(Budget::unlimited(), Budget::seconds);
    let selection = PrimeSelection::parse(&args.primes)?;
    let level = args.modulus.level_text();
    let setting = args.modulus.setting();
    let any = args.matrix || args.hecke || setting.is_some();
    let mut suites = Vec::new();
    if args.matrix || !any {
        suites.push(matrix_suite(args.smax));
    }
    if args.hecke {
        let moduli = match level {
            Some(_) => vec![args.modulus.modulus()?],
            None => match setting {
                Some(Setting::Nf) => cuspidal::base_ring::nf_squarefree_levels(args.nmax),
                Some(Setting::Ff { q }) => cuspidal::base_ring::ff_squarefree_levels(q, args.dmax)?,
                None => default_hecke_moduli()?,
            },
        };
        suites.push(hecke_suite(&moduli, &selection, args.samples, args.seed, budget)?);
    } else if level.is_some() {
        let m = args.modulus.modulus()?;
        let name = m.describe();
        suites.push(match m.setting() {
            Setting::Nf => nf_levels_suite(&name, &[m], truncation()?, budget)?,
            Setting::Ff { .. } => ff_levels_suite(&name, &[m], budget)?,
        });
    }
    if !args.hecke && level.is_none() {
        match setting {
            Some(Setting::Nf) => suites.push(nf_suite(args.nmax, truncation()?, budget)?),
            Some(Setting::Ff { q }) => suites.push(ff_suite(q, args.dmax, budget)?),
            None if !any => {
                suites.push(nf_suite(args.nmax, truncation()?, budget)?);
                for q in [2, 3] {
                    suites.push(ff_suite(q, args.dmax, budget)?);
                }
                suites.push(hecke_suite(&default_hecke_moduli()?, &selection, args.samples, args.seed, budget)?);
            }
            None => {}
        }
    }
    Ok(VerifyReport { suites })
}

fn render_hecke(report: &EisensteinReport, format: Format) -> String {
    let mark = |b: bool| if b { "yes" } else { "no" }.to_string();
    let rows: Vec<Vec<String>> = report
        .entries
        .iter()
        .map(|e| {
            vec![
                e.prime.clone(),
                e.norm.to_string(),
                mark(e.divisor_action),
                mark(e.d3_eisenstein),
                mark(e.exponent_two),
                mark(e.commutes),
                e.exponent_one.map_or("-".to_string(), mark),
            ]
        })
        .collect();
    let headers = ["p", "|p|", "τ_p = |p|+1 on cusps", "D_3 Eisenstein", "exponent two", "commute", "exponent one"];
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("serializable") + "\n",
        Format::Csv => csv(&headers, &rows),
        Format::Text => format!("{}\n\n{}", report.modulus, aligned(&headers, &rows)),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Torsion(args) => {
            let report = TorsionReport::build(&args.modulus.modulus()?, &args.inverted())?;
            print!("{}", report.render(args.format.format()));
            Ok(ExitCode::SUCCESS)
        }
        Command::Delta(args) => {
            let report = DeltaReport::build(&args.modulus.modulus()?, &args.inverted())?;
            print!("{}", report.render(args.format.format()));
            Ok(if report.kernel_matches { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Verify(args) => {
            let report = run_verify(&args)?;
            print!("{}", report.render(args.format.format()));
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::VerifyEta(args) => {
            let budget = args.budget_secs.map_or(Budget::unlimited(), Budget::seconds);
            let report = VerifyReport { suites: vec![nf_suite(args.nmax, truncation()?, budget)?] };
            print!("{}", report.render(args.format.format()));
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Hecke(args) => {
            let modulus = args.modulus.modulus()?;
            let primes = PrimeSelection::parse(&args.primes)?.resolve(&modulus)?;
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let entries = primes
                .iter()
                .map(|p| eisenstein_entry(&modulus, p, &primes, args.samples, &mut rng))
                .collect::<Result<Vec<_>, _>>()?;
            let report = EisensteinReport { modulus: modulus.describe(), entries };
            let format = match args.report.as_str() {
                "json" => Format::Json,
                "csv" => Format::Csv,
                _ => Format::Text,
            };
            print!("{}", render_hecke(&report, format));
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
