//! Command line front end for the postlie library.
//!
//! Four subcommands: `expand` prints an expansion degree by degree, `verify`
//! runs one of the named check suites, `bch` prints the bracketized table of
//! the Baker-Campbell-Hausdorff series, and `count` counts planar forests.
//! Exit code 0 means success, 1 means a verification failed, 2 means the
//! invocation was malformed. Output is deterministic for fixed flags and
//! seed. `POSTLIE_THREADS` sets how many worker threads a suite may use.

mod render;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use postlie::bch::{bch_table, BchTable};
use postlie::coeff::rat;
use postlie::hopf::verify_hopf_properties;
use postlie::lift::{bch_recursion, bch_recursion_inverse, expansion_at_weight, verify_main_theorem};
use postlie::magnus::{inverse_postlie_magnus, postlie_magnus, verify_round_trips};
use postlie::matrix::{RatMatrix, TriangularModel};
use postlie::reference::{chi_reference, theta_reference};
use postlie::tree::{enumerate_forests, Alphabet};
use postlie::{Coeff, Error, Expansion, Rational, Report};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "postlie",
    version,
    about = "Exact post-Lie and Rota-Baxter computations on planar rooted forests"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print an expansion of the generator degree by degree.
    Expand {
        /// Which expansion to print.
        #[arg(long, value_enum)]
        what: What,
        /// Truncation order.
        #[arg(long, default_value_t = 5)]
        order: usize,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Weight for the recursion expansions: a rational or "symbolic".
        #[arg(long)]
        weight: Option<String>,
    },
    /// Run a named verification suite; exits 0 iff every check passes.
    Verify {
        /// Suite to run.
        #[arg(long, value_enum)]
        suite: Suite,
        /// Truncation order; each suite has its own default.
        #[arg(long)]
        order: Option<usize>,
        /// Matrix dimension, rbmodel only.
        #[arg(long)]
        dim: Option<usize>,
        /// Sample seed, rbmodel only.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the Baker-Campbell-Hausdorff table in right-nested bracket form.
    Bch {
        /// Truncation order.
        #[arg(long, default_value_t = 5)]
        order: usize,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Count the planar forests with exactly the given number of vertices.
    Count {
        /// Vertex count.
        #[arg(long)]
        order: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum What {
    /// Direct expansion chi.
    Magnus,
    /// Inverse expansion theta.
    MagnusInv,
    /// Weighted recursion chi_lambda.
    BchRec,
    /// Inverse weighted recursion theta_lambda.
    BchRecInv,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Latex,
    Json,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Suite {
    /// Direct expansion against the frozen order-5 references.
    #[value(name = "appendixA")]
    DirectReference,
    /// Inverse expansion against the frozen order-5 references.
    #[value(name = "appendixB")]
    InverseReference,
    /// Weighted recursion against the direct expansion at weight one.
    #[value(name = "theorem5")]
    MainTheorem,
    /// Exponential round trips for both expansions.
    #[value(name = "glf")]
    RoundTrips,
    /// Coproduct, product, antipode and post-Lie identities.
    #[value(name = "hopf")]
    HopfProperties,
    /// Triangular Rota-Baxter matrix model.
    #[value(name = "rbmodel")]
    MatrixModel,
}

struct CliError {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: 2,
        message: message.into(),
    }
}

fn failed(error: Error) -> CliError {
    CliError {
        code: 1,
        message: error.to_string(),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Expand {
            what,
            order,
            format,
            weight,
        } => run_expand(what, order, format, weight),
        Command::Verify {
            suite,
            order,
            dim,
            seed,
        } => run_verify(suite, order, dim, seed),
        Command::Bch { order, format } => run_bch(order, format),
        Command::Count { order } => {
            println!("{}", enumerate_forests(&Alphabet::default(), order).len());
            Ok(0)
        }
    }
}

enum WeightArg {
    Symbolic,
    Value(Rational),
}

fn parse_weight(raw: Option<&str>) -> Result<WeightArg, CliError> {
    let raw = match raw {
        None | Some("symbolic") => return Ok(WeightArg::Symbolic),
        Some(raw) => raw,
    };
    let value: Rational = raw
        .parse()
        .map_err(|_| usage(format!("--weight must be a rational like 3/2, or \"symbolic\"; got \"{raw}\"")))?;
    if value.is_zero() {
        return Err(usage("--weight must be nonzero"));
    }
    Ok(WeightArg::Value(value))
}

fn run_expand(
    what: What,
    order: usize,
    format: Format,
    weight: Option<String>,
) -> Result<u8, CliError> {
    if order == 0 {
        return Err(usage("--order must be at least 1"));
    }
    let token = What::to_possible_value(&what).unwrap().get_name().to_string();
    match what {
        What::Magnus | What::MagnusInv => {
            if weight.is_some() {
                return Err(usage("--weight only applies to bch-rec and bch-rec-inv"));
            }
            let (name, expansion) = match what {
                What::Magnus => ("chi", postlie_magnus(order)),
                _ => ("theta", inverse_postlie_magnus(order)),
            };
            print_rational(&token, name, &expansion, format);
        }
        What::BchRec | What::BchRecInv => {
            let (name, expansion) = match what {
                What::BchRec => ("chi_lambda", bch_recursion(order, false)),
                _ => ("theta_lambda", bch_recursion_inverse(order)),
            };
            let expansion = expansion.map_err(failed)?;
            match parse_weight(weight.as_deref())? {
                WeightArg::Symbolic => print_laurent(&token, name, &expansion, format),
                WeightArg::Value(w) => {
                    let at = expansion_at_weight(&expansion, &w).map_err(failed)?;
                    print_rational(&token, name, &at, format);
                }
            }
        }
    }
    Ok(0)
}

fn print_rational(token: &str, name: &str, expansion: &Expansion<Rational>, format: Format) {
    match format {
        Format::Text => {
            for n in 1..=expansion.order() {
                println!(
                    "{name}^({n}) = {}",
                    render::text_rational(expansion.component(n))
                );
            }
        }
        Format::Latex => {
            let head = latex_name(name);
            for n in 1..=expansion.order() {
                println!(
                    "{head}^{{({n})}} = {}",
                    render::latex_rational(expansion.component(n))
                );
            }
        }
        Format::Json => print_expansion_json(token, expansion.order(), |n| {
            expansion.component(n).to_json()
        }),
    }
}

fn print_laurent(
    token: &str,
    name: &str,
    expansion: &Expansion<postlie::Laurent>,
    format: Format,
) {
    match format {
        Format::Text => {
            for n in 1..=expansion.order() {
                println!(
                    "{name}^({n}) = {}",
                    render::text_laurent(expansion.component(n))
                );
            }
        }
        Format::Latex => {
            let head = latex_name(name);
            for n in 1..=expansion.order() {
                println!(
                    "{head}^{{({n})}} = {}",
                    render::latex_laurent(expansion.component(n))
                );
            }
        }
        Format::Json => print_expansion_json(token, expansion.order(), |n| {
            expansion.component(n).to_json()
        }),
    }
}

fn latex_name(name: &str) -> String {
    match name {
        "chi" => "\\chi".to_string(),
        "theta" => "\\theta".to_string(),
        "chi_lambda" => "\\chi_\\lambda".to_string(),
        "theta_lambda" => "\\theta_\\lambda".to_string(),
        other => other.to_string(),
    }
}

fn print_expansion_json(
    token: &str,
    order: usize,
    component: impl Fn(usize) -> serde_json::Value,
) {
    let components: Vec<_> = (1..=order)
        .map(|n| json!({ "degree": n, "series": component(n) }))
        .collect();
    let doc = json!({ "what": token, "order": order, "components": components });
    println!("{doc}");
}

fn thread_count() -> Result<usize, CliError> {
    match std::env::var("POSTLIE_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(1),
        Err(std::env::VarError::NotUnicode(_)) => {
            Err(usage("POSTLIE_THREADS must be a positive integer"))
        }
        Ok(raw) => match raw.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(usage(format!(
                "POSTLIE_THREADS must be a positive integer; got \"{raw}\""
            ))),
        },
    }
}

fn run_verify(
    suite: Suite,
    order: Option<usize>,
    dim: Option<usize>,
    seed: Option<u64>,
) -> Result<u8, CliError> {
    if suite != Suite::MatrixModel && (dim.is_some() || seed.is_some()) {
        return Err(usage("--dim and --seed only apply to the rbmodel suite"));
    }
    let threads = thread_count()?;
    let reports = match suite {
        Suite::DirectReference => {
            let order = order.unwrap_or(5);
            if !(1..=5).contains(&order) {
                return Err(usage("the frozen references cover orders 1 through 5"));
            }
            vec![reference_report(
                "direct expansion against the frozen references",
                "chi",
                &postlie_magnus(order),
                &chi_reference(),
                order,
            )]
        }
        Suite::InverseReference => {
            let order = order.unwrap_or(5);
            if !(1..=5).contains(&order) {
                return Err(usage("the frozen references cover orders 1 through 5"));
            }
            vec![reference_report(
                "inverse expansion against the frozen references",
                "theta",
                &inverse_postlie_magnus(order),
                &theta_reference(),
                order,
            )]
        }
        Suite::MainTheorem => {
            let order = order.unwrap_or(7).max(1);
            vec![verify_main_theorem(order).map_err(failed)?]
        }
        Suite::RoundTrips => vec![verify_round_trips(order.unwrap_or(7).max(1))],
        Suite::HopfProperties => vec![verify_hopf_properties(order.unwrap_or(6).max(1))],
        Suite::MatrixModel => {
            let order = order.unwrap_or(8);
            if order == 0 {
                return Err(usage("--order must be at least 1"));
            }
            let dim = dim.unwrap_or(6);
            if dim < 2 {
                return Err(usage("--dim must be at least 2"));
            }
            matrix_model_reports(order, dim, seed.unwrap_or(42), threads)?
        }
    };
    for (i, report) in reports.iter().enumerate() {
        if i > 0 {
            println!();
        }
        print!("{report}");
    }
    Ok(if reports.iter().all(Report::passed) { 0 } else { 1 })
}

fn reference_report(
    title: &str,
    name: &str,
    got: &Expansion<Rational>,
    reference: &Expansion<Rational>,
    order: usize,
) -> Report {
    let mut report = Report::new(format!("{title}, order {order}"));
    for n in 1..=order {
        let diff = got.component(n) - reference.component(n);
        let detail = match diff.terms().next() {
            None => format!("{} terms", got.component(n).len()),
            Some((f, c)) => format!(
                "first difference at {} with coefficient {c}",
                f.serialize()
            ),
        };
        report.push(format!("{name}^({n}) matches"), diff.is_zero(), detail);
    }
    report
}

fn matrix_model_reports(
    factorization_order: usize,
    dim: usize,
    seed: u64,
    threads: usize,
) -> Result<Vec<Report>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = RatMatrix::random_small(dim, &mut rng);
    let a = RatMatrix::random_small(dim, &mut rng);
    type Job = Box<dyn FnOnce() -> Result<Report, Error> + Send>;
    let mut jobs: Vec<Job> = Vec::new();
    jobs.push(Box::new(move || {
        Ok(TriangularModel::new(dim).verify_rb_identity(100, seed))
    }));
    {
        let x = x.clone();
        jobs.push(Box::new(move || {
            TriangularModel::new(dim).verify_et9(&x, factorization_order)
        }));
    }
    for n in 1..=3 {
        let x = x.clone();
        jobs.push(Box::new(move || {
            TriangularModel::new(dim).verify_derivative_identity(&x, n, 6)
        }));
    }
    jobs.push(Box::new(move || {
        TriangularModel::new(dim).verify_spitzer(&a, 6)
    }));
    run_jobs(jobs, threads)
        .into_iter()
        .map(|r| r.map_err(failed))
        .collect()
}

fn run_jobs<T: Send>(jobs: Vec<Box<dyn FnOnce() -> T + Send>>, threads: usize) -> Vec<T> {
    if threads <= 1 || jobs.len() <= 1 {
        return jobs.into_iter().map(|job| job()).collect();
    }
    let workers = threads.min(jobs.len());
    let queue = std::sync::Mutex::new(jobs.into_iter().enumerate().rev().collect::<Vec<_>>());
    let results = std::sync::Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let next = queue.lock().unwrap().pop();
                match next {
                    Some((i, job)) => {
                        let value = job();
                        results.lock().unwrap().push((i, value));
                    }
                    None => break,
                }
            });
        }
    });
    let mut out = results.into_inner().unwrap();
    out.sort_by_key(|(i, _)| *i);
    out.into_iter().map(|(_, value)| value).collect()
}

fn run_bch(order: usize, format: Format) -> Result<u8, CliError> {
    if order == 0 {
        return Err(usage("--order must be at least 1"));
    }
    let table = bch_table(order);
    match format {
        Format::Text => {
            for n in 1..=order {
                println!("{}", table.component_text(n));
            }
        }
        Format::Latex => {
            for n in 1..=order {
                println!("{}", bch_component_latex(&table, n));
            }
        }
        Format::Json => {
            let components: Vec<_> = (1..=order)
                .map(|n| {
                    let terms: Vec<_> = table
                        .component(n)
                        .iter()
                        .map(|t| json!({ "coeff": t.coeff.json(), "bracket": t.expr.to_string() }))
                        .collect();
                    json!({ "degree": n, "terms": terms })
                })
                .collect();
            println!("{}", json!({ "order": order, "components": components }));
        }
    }
    Ok(0)
}

fn bch_component_latex(table: &BchTable, n: usize) -> String {
    let terms = table.component(n);
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, term) in terms.iter().enumerate() {
        let negative = term.coeff < rat(0, 1);
        let magnitude = if negative {
            -term.coeff.clone()
        } else {
            term.coeff.clone()
        };
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if magnitude != rat(1, 1) {
            out.push_str(&magnitude.latex());
            out.push_str("\\, ");
        }
        out.push_str(&term.expr.to_string());
    }
    out
}
