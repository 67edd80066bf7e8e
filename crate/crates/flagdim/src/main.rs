//! Command-line front end.
//!
//! Exit codes: 0 success, 1 internal invariant violation, 2 invalid input,
//! 3 valid input outside the rule or theorem coverage.

use clap::{Parser, Subcommand, ValueEnum};

use flagdim::arith::AlgebraClass;
use flagdim::cdim::{cdim, explain, CdimQuery};
use flagdim::error::Error;
use flagdim::flags::{decompose_primary_variety, reduce_flag, FlagSpec};
use flagdim::motive::{decompose_square, middle_chow_decomposition, verify_rank_identity};
use flagdim::output::{
    CdimPayload, MotivePayload, OutputDocument, RankIdentityPayload, ReducePayload, WeylPayload,
    WeylVerification,
};
use flagdim::parity::certify_incompressible;
use flagdim::weyl::{brute_force_double_cosets, enumerate_double_cosets, RootSubset};

const EXIT_INTERNAL: i32 = 1;
const EXIT_INVALID: i32 = 2;
const EXIT_UNCOVERED: i32 = 3;

/// Ceiling for the exhaustive S_n backend used by `weyl --verify`.
fn brute_force_ceiling() -> usize {
    std::env::var("FLAGDIM_BRUTE_MAX_N")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(8)
}

/// Largest accepted e for the enumeration commands.
fn max_e() -> u64 {
    std::env::var("FLAGDIM_MAX_E")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(512)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Parser)]
#[command(name = "flagdim", version, about = "canonical p-dimension data for flag varieties of central simple algebras")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a flag variety to its primary-decomposed normal form.
    Reduce {
        /// Index of the algebra (at least 2).
        #[arg(long)]
        index: u64,
        /// Comma-separated strictly increasing reduced dimensions.
        #[arg(long)]
        flags: String,
    },
    /// Canonical p-dimension of a flag variety.
    Cdim {
        #[arg(long)]
        index: u64,
        #[arg(long)]
        flags: String,
        /// A prime, or 0 for canonical dimension itself.
        #[arg(long)]
        p: u64,
        /// Assume the base field has characteristic 0.
        #[arg(long)]
        char0: bool,
        /// Exit 3 unless the result is exact.
        #[arg(long)]
        require_exact: bool,
    },
    /// Double cosets of the cut-at-e parabolic in S_2e.
    Weyl {
        #[arg(long)]
        e: u64,
        /// Cross-check against the exhaustive S_n backend.
        #[arg(long)]
        verify: bool,
    },
    /// Motivic decomposition of X_e x X_e and its middle Chow summands.
    Motive {
        #[arg(long)]
        e: u64,
        /// Check the Poincare rank identity coefficient-wise.
        #[arg(long)]
        verify_ranks: bool,
    },
    /// Parity certificates for 2-incompressibility of X_e.
    Certify {
        #[arg(long)]
        index: u64,
        #[arg(long)]
        e: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    };
    std::process::exit(code);
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::HypothesisViolated(_) => EXIT_UNCOVERED,
        Error::Internal(_) | Error::CertificateCheck(_) => EXIT_INTERNAL,
        _ => EXIT_INVALID,
    }
}

/// Strictly increasing comma-separated integers; whitespace is rejected.
fn parse_flags(text: &str) -> Result<Vec<u64>, Error> {
    if text.chars().any(char::is_whitespace) {
        return Err(Error::InvalidFlag("whitespace in flag list".into()));
    }
    let dims: Vec<u64> = text
        .split(',')
        .map(|part| {
            part.parse::<u64>()
                .map_err(|_| Error::InvalidFlag(format!("cannot parse {part:?}")))
        })
        .collect::<Result<_, _>>()?;
    if dims.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidFlag(format!(
            "{text}: reduced dimensions must be strictly increasing"
        )));
    }
    Ok(dims)
}

fn run(cli: &Cli) -> Result<i32, Error> {
    match &cli.command {
        Command::Reduce { index, flags } => cmd_reduce(cli.format, *index, flags),
        Command::Cdim {
            index,
            flags,
            p,
            char0,
            require_exact,
        } => cmd_cdim(cli.format, *index, flags, *p, *char0, *require_exact),
        Command::Weyl { e, verify } => cmd_weyl(cli.format, *e, *verify),
        Command::Motive { e, verify_ranks } => cmd_motive(cli.format, *e, *verify_ranks),
        Command::Certify { index, e } => cmd_certify(cli.format, *index, *e),
    }
}

fn cmd_reduce(format: Format, index: u64, flags: &str) -> Result<i32, Error> {
    if index < 2 {
        return Err(Error::InvalidFlag("index must be at least 2".into()));
    }
    let dims = parse_flags(flags)?;
    let algebra = AlgebraClass::with_index(index)?;
    let spec = FlagSpec::new(index, dims.clone())?;
    let (reduced, mut trace) = reduce_flag(&algebra, &spec)?;
    let d = reduced.factors()[0].flag.dims()[0];
    let final_expr = if d < index {
        let (decomposed, tail) = decompose_primary_variety(&algebra, d)?;
        trace.extend(tail)?;
        decomposed
    } else {
        reduced
    };
    let payload = ReducePayload {
        index,
        flags: dims,
        display: final_expr.to_string(),
        reduced: final_expr,
    };
    let doc = OutputDocument::new(
        format!("reduce --index {index} --flags {flags}"),
        payload,
        Some(trace.lines()),
    );
    match format {
        Format::Json => println!("{}", doc.to_json()),
        Format::Text => {
            println!("{}", doc.result.display);
            for line in doc.trace.as_deref().unwrap_or_default() {
                println!("  {line}");
            }
        }
    }
    Ok(0)
}

fn cmd_cdim(
    format: Format,
    index: u64,
    flags: &str,
    p: u64,
    char0: bool,
    require_exact: bool,
) -> Result<i32, Error> {
    if index < 2 {
        return Err(Error::InvalidFlag("index must be at least 2".into()));
    }
    let dims = parse_flags(flags)?;
    let query = CdimQuery {
        algebra: AlgebraClass::with_index(index)?,
        flag: FlagSpec::new(index, dims.clone())?,
        p,
        char_zero: char0,
    };
    let result = cdim(&query)?;
    let exact = result.exact;
    let explanation = explain(&result);
    let payload = CdimPayload {
        index,
        flags: dims,
        p,
        char_zero: char0,
        cdim: result,
    };
    let doc = OutputDocument::new(
        format!(
            "cdim --index {index} --flags {flags} --p {p}{}{}",
            if char0 { " --char0" } else { "" },
            if require_exact { " --require-exact" } else { "" }
        ),
        payload,
        Some(explanation.lines().map(str::to_string).collect()),
    );
    match format {
        Format::Json => println!("{}", doc.to_json()),
        Format::Text => {
            let name = if p == 0 {
                "cdim".to_string()
            } else {
                format!("cdim_{p}")
            };
            println!(
                "{name}({}) = {}",
                doc.result.cdim.trace.steps()[0].before,
                doc.result.cdim.display_value()
            );
            print!("{explanation}");
        }
    }
    if require_exact && !exact {
        return Ok(EXIT_UNCOVERED);
    }
    Ok(0)
}

fn cmd_weyl(format: Format, e: u64, verify: bool) -> Result<i32, Error> {
    if e < 1 || e > max_e() {
        return Err(Error::InvalidFlag(format!(
            "e must lie in 1..={}",
            max_e()
        )));
    }
    let n = 2 * e as usize;
    let subset = RootSubset::maximal_parabolic(n, e as usize)?;
    let summands = enumerate_double_cosets(n, &subset)?;
    let verification = if verify {
        if n > brute_force_ceiling() {
            return Err(Error::InvalidFlag(format!(
                "--verify needs n = 2e <= {} (set FLAGDIM_BRUTE_MAX_N to raise it)",
                brute_force_ceiling()
            )));
        }
        let brute = brute_force_double_cosets(n, &subset)?;
        let matches = brute.len() == summands.len()
            && brute
                .iter()
                .zip(&summands)
                .all(|((rep, _), summand)| rep == &summand.representative);
        if !matches {
            return Err(Error::Internal(
                "exhaustive double-coset scan disagrees with the closed form".into(),
            ));
        }
        Some(WeylVerification {
            n: n as u64,
            brute_force_cosets: brute.len() as u64,
            matches,
        })
    } else {
        None
    };
    let payload = WeylPayload {
        e,
        summands,
        verification,
    };
    let doc = OutputDocument::new(
        format!("weyl --e {e}{}", if verify { " --verify" } else { "" }),
        payload,
        None,
    );
    match format {
        Format::Json => println!("{}", doc.to_json()),
        Format::Text => {
            println!("{} double cosets for the cut at e = {e} in S_{n}:", doc.result.summands.len());
            for s in &doc.result.summands {
                println!(
                    "  l={} length={} rep={} subset={} flag={}",
                    s.index_l, s.length, s.representative, s.subset, s.flag_type
                );
            }
            if let Some(v) = &doc.result.verification {
                println!(
                    "verified against the exhaustive S_{} scan: {} cosets, representatives match",
                    v.n, v.brute_force_cosets
                );
            }
        }
    }
    Ok(0)
}

fn cmd_motive(format: Format, e: u64, verify_ranks: bool) -> Result<i32, Error> {
    if e < 1 || e > max_e() {
        return Err(Error::InvalidFlag(format!(
            "e must lie in 1..={}",
            max_e()
        )));
    }
    let decomposition = decompose_square(e as usize)?;
    let middle_chow = middle_chow_decomposition(e as usize)?;
    let rank_identity = if verify_ranks {
        let report = verify_rank_identity(e as usize)?;
        Some(RankIdentityPayload {
            holds: true,
            total: report.total().to_string(),
            per_degree: report
                .rows()
                .into_iter()
                .map(|(d, lhs, rhs)| (d as u64, lhs.to_string(), rhs.to_string()))
                .collect(),
        })
    } else {
        None
    };
    let payload = MotivePayload {
        e,
        decomposition,
        middle_chow,
        rank_identity,
    };
    let doc = OutputDocument::new(
        format!(
            "motive --e {e}{}",
            if verify_ranks { " --verify-ranks" } else { "" }
        ),
        payload,
        None,
    );
    match format {
        Format::Json => println!("{}", doc.to_json()),
        Format::Text => {
            println!("{}", doc.result.decomposition);
            println!("middle Chow summands:");
            for s in &doc.result.middle_chow {
                println!(
                    "  CH_{{{}}}({})  split rank {}",
                    s.homological_degree, s.flag_type, s.split_rank
                );
            }
            if let Some(r) = &doc.result.rank_identity {
                println!(
                    "rank identity holds coefficient-wise; both sides total {}",
                    r.total
                );
            }
        }
    }
    Ok(0)
}

fn cmd_certify(format: Format, index: u64, e: u64) -> Result<i32, Error> {
    if e < 1 || e > max_e() {
        return Err(Error::InvalidFlag(format!(
            "e must lie in 1..={}",
            max_e()
        )));
    }
    let algebra = AlgebraClass::with_index(index)?;
    let verdict = certify_incompressible(&algebra, e)?;
    let doc = OutputDocument::new(
        format!("certify --index {index} --e {e}"),
        verdict,
        None,
    );
    match format {
        Format::Json => println!("{}", doc.to_json()),
        Format::Text => {
            let v = &doc.result;
            println!(
                "X_{}(A), ind A = {}: {}",
                v.e,
                v.index.value(),
                if v.incompressible_2 {
                    "2-incompressible"
                } else {
                    "not certified"
                }
            );
            println!(
                "cdim_2 = {}, cdim = {}, dim = {}",
                v.cdim_chain.0, v.cdim_chain.1, v.cdim_chain.2
            );
            for (i, c) in v.certificates.iter().enumerate() {
                let label = match &c.summand {
                    flagdim::parity::CertificateSummand::Diagonal => "diagonal".to_string(),
                    flagdim::parity::CertificateSummand::TwistedDiagonal => {
                        "twisted-diagonal".to_string()
                    }
                    flagdim::parity::CertificateSummand::Flag(s) => format!(
                        "CH_{{{}}}({})",
                        s.homological_degree, s.flag_type
                    ),
                };
                println!("certificate {i}: {label} -> {}", c.verdict);
                for step in &c.steps {
                    println!("    - {} [{}]", step.claim, step.justification);
                }
            }
        }
    }
    Ok(0)
}
