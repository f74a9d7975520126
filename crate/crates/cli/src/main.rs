use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use vbracket::bracket::{self, ExpansionTerm};
use vbracket::lattice::ii11;
use vbracket::oracle::{self, Suite, SuiteOptions};
use vbracket::voa::graded_dims;
use vbracket::{Error, FockElement, Lattice, LatticeVector, LatticeVoa, Q};

mod checks;

#[derive(Parser)]
#[command(
    name = "vbracket",
    version,
    about = "Exact brackets of physical states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the bracket of two states
    Bracket(BracketArgs),
    /// Print the symbolic term list of the bracket formula
    Expand(ExpandArgs),
    /// Compare the formula with the quantisation oracle on a suite
    Verify(VerifyArgs),
    /// Graded dimensions of a lattice vertex algebra
    Dims(DimsArgs),
    /// Quick structural and identity checks
    Selftest(FormatArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct FormatArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct BracketArgs {
    /// Built-in lattice (II11, E8, E8x3) or a lattice JSON file
    #[arg(long, default_value = "E8x3")]
    lattice: String,
    /// Coordinates of alpha in the basis e, f
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    alpha: (i64, i64),
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    beta: (i64, i64),
    #[arg(long, allow_hyphen_values = true)]
    v: String,
    #[arg(long, allow_hyphen_values = true)]
    w: String,
    /// Evaluate through covariant quantisation instead of the formula
    #[arg(long)]
    oracle: bool,
    #[command(flatten)]
    fmt: FormatArgs,
}

#[derive(Args)]
struct ExpandArgs {
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    alpha: (i64, i64),
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    beta: (i64, i64),
    /// Treat both inputs as Virasoro primaries
    #[arg(long)]
    primary: bool,
    #[command(flatten)]
    fmt: FormatArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite JSON file, or the built-in suite `core`
    #[arg(long, default_value = "core")]
    suite: String,
    /// Seed for the built-in suite
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Also check antisymmetry on the oracle side
    #[arg(long)]
    oracle_antisymmetry: bool,
    /// Skip the identity checks run alongside the suite
    #[arg(long)]
    no_checks: bool,
    #[command(flatten)]
    fmt: FormatArgs,
}

#[derive(Args)]
struct DimsArgs {
    #[arg(long, default_value = "E8x3")]
    lattice: String,
    #[arg(long, default_value_t = 2)]
    max_weight: i64,
    #[command(flatten)]
    fmt: FormatArgs,
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected a,b, got '{s}'"))?;
    let p = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("'{t}': {e}"));
    Ok((p(a)?, p(b)?))
}

enum Failure {
    Engine(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

type CmdResult = Result<(), Failure>;

fn vec2(p: (i64, i64)) -> LatticeVector {
    ii11::vector(p.0, p.1)
}

fn element_json(v: &FockElement) -> BTreeMap<String, Q> {
    v.iter().map(|(s, c)| (s.to_string(), c.clone())).collect()
}

fn print_json(value: &impl Serialize) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serialisable output")
    );
}

fn cmd_bracket(args: BracketArgs) -> CmdResult {
    let voa = LatticeVoa::new(Lattice::resolve(&args.lattice)?)?;
    let (alpha, beta) = (vec2(args.alpha), vec2(args.beta));
    let v = voa.parse(&args.v)?;
    let w = voa.parse(&args.w)?;
    let (value, terms, nonzero) = if args.oracle {
        let out = oracle::bracket_oracle(&voa, &alpha, &beta, &v, &w)?;
        (out, None, None)
    } else {
        let out = bracket::bracket_detailed(&voa, &alpha, &beta, &v, &w)?;
        (out.value, Some(out.terms), Some(out.nonzero_terms))
    };
    let weight = 1 - ii11::half_norm(&alpha.add(&beta));
    match args.fmt.format {
        Format::Json => print_json(&json!({
            "lattice": voa.lattice().name,
            "alpha": [args.alpha.0, args.alpha.1],
            "beta": [args.beta.0, args.beta.1],
            "method": if args.oracle { "oracle" } else { "formula" },
            "weight": weight,
            "formula_terms": terms,
            "nonzero_terms": nonzero,
            "result_terms": value.len(),
            "value": element_json(&value),
        })),
        Format::Text => {
            println!("weight {weight}, {} terms", value.len());
            println!("{}", vbracket::voa::format_element(&value));
        }
    }
    Ok(())
}

fn cmd_expand(args: ExpandArgs) -> CmdResult {
    let (alpha, beta) = (vec2(args.alpha), vec2(args.beta));
    let (wv, ww) = (1 - ii11::half_norm(&alpha), 1 - ii11::half_norm(&beta));
    let terms: Vec<ExpansionTerm> =
        bracket::expand_symbolic(&alpha, &beta, wv, ww, args.primary, args.primary)?;
    match args.fmt.format {
        Format::Json => print_json(&json!({
            "alpha": [args.alpha.0, args.alpha.1],
            "beta": [args.beta.0, args.beta.1],
            "weights": [wv, ww],
            "primary": args.primary,
            "terms": terms,
        })),
        Format::Text => {
            for t in &terms {
                println!("{t}");
            }
        }
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> CmdResult {
    let suite = if args.suite == "core" {
        checks::builtin_suite(args.seed)?
    } else {
        Suite::from_json_file(&args.suite)?
    };
    if suite.cases.is_empty() {
        eprintln!("warning: suite has no cases");
    }
    let voa = LatticeVoa::new(Lattice::resolve(&suite.lattice)?)?;
    let opts = SuiteOptions {
        oracle_antisymmetry: args.oracle_antisymmetry,
    };
    let report = oracle::equivalence_suite(&voa, &suite.cases, opts)?;
    let results = if args.no_checks {
        Vec::new()
    } else {
        checks::run_all()
    };
    let ok = report.all_passed() && results.iter().all(|c| c.passed);
    match args.fmt.format {
        Format::Json => print_json(&json!({
            "passed": ok,
            "suite": report,
            "checks": results,
        })),
        Format::Text => {
            print!("{report}");
            for c in &results {
                println!("{c}");
            }
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification("verification failed".into()))
    }
}

fn cmd_dims(args: DimsArgs) -> CmdResult {
    let lattice = Lattice::resolve(&args.lattice)?;
    let dims = graded_dims(&lattice, args.max_weight)?;
    match args.fmt.format {
        Format::Json => print_json(&json!({
            "lattice": lattice.name,
            "dims": dims,
        })),
        Format::Text => {
            for (w, d) in dims.iter().enumerate() {
                println!("{w}\t{d}");
            }
        }
    }
    Ok(())
}

fn cmd_selftest(args: FormatArgs) -> CmdResult {
    let results = checks::run_all();
    let ok = results.iter().all(|c| c.passed);
    match args.format {
        Format::Json => print_json(&json!({ "passed": ok, "checks": results })),
        Format::Text => {
            for c in &results {
                println!("{c}");
            }
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification("self-test failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Bracket(a) => cmd_bracket(a),
        Command::Expand(a) => cmd_expand(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Dims(a) => cmd_dims(a),
        Command::Selftest(a) => cmd_selftest(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Engine(e)) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs() {
        assert_eq!(parse_pair("1,-1"), Ok((1, -1)));
        assert_eq!(parse_pair(" 2 , 0"), Ok((2, 0)));
        assert!(parse_pair("1").is_err());
        assert!(parse_pair("a,1").is_err());
    }

    #[test]
    fn builtin_suite_is_seeded() {
        let a = checks::builtin_suite(4).unwrap();
        assert_eq!(a, checks::builtin_suite(4).unwrap());
        assert_ne!(a, checks::builtin_suite(5).unwrap());
        assert_eq!(a.cases.len(), 12);
    }
}
