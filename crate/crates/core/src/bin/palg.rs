use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use palg::algebra::{make_bnalg, powerset_algebra, product, FinitePAlgebra};
use palg::duality::{join_irreducibles, upset_algebra};
use palg::encodings::{graph_encode, graph_isomorphism, make_n, recover_graph, tuple_label};
use palg::fo::{eval_with_witness, fo_recover_graph, parse_formula, Env};
use palg::format::{parse_algebra, parse_dot, parse_poset, write_algebra, write_dot, write_poset};
use palg::morphism::find_embedding;
use palg::suites::{run_suite, Suite, SuiteOptions};
use palg::{Error, Limits};

#[derive(Parser)]
#[command(name = "palg", version, about = "Finite p-algebras, their duals, and graph encodings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an algebra and write it in the algebra file format.
    Build {
        #[command(subcommand)]
        kind: BuildKind,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
        #[arg(long, global = true, default_value_t = Limits::default().max_size)]
        max_size: usize,
    },
    /// Algebra file to its poset of join-irreducibles, or poset file to its upset algebra.
    Dual {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = Limits::default().max_size)]
        max_size: usize,
    },
    /// Encode a graph given in the DOT subset `graph { a -- b; c; }`.
    EncodeGraph {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Algebra)]
        mode: Mode,
        /// Recover the graph from the algebra and compare it with the input.
        #[arg(long)]
        recover: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = Limits::default().max_size)]
        max_size: usize,
    },
    /// Read the graph off an algebra with one atom.
    RecoverGraph {
        input: PathBuf,
        /// Use the first-order definitions instead of the direct computation.
        #[arg(long)]
        fo: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a formula; `-` reads the algebra from standard input.
    Eval {
        algebra: PathBuf,
        formula: String,
        /// Value of a free variable, as `name=label` or `name=index`.
        #[arg(long = "var", value_name = "NAME=ELEMENT")]
        vars: Vec<String>,
    },
    /// Run a verification suite.
    Check {
        #[arg(value_parser = Suite::NAMES)]
        suite: String,
        #[arg(long, default_value_t = SuiteOptions::default().max_index)]
        max_index: usize,
        /// Largest poset; defaults to 5, or 4 for the `si` suite.
        #[arg(long)]
        max_poset: Option<usize>,
        #[arg(long, default_value_t = SuiteOptions::default().max_vertices)]
        max_vertices: usize,
        #[arg(long, default_value_t = Limits::default().max_size)]
        max_size: usize,
    },
    /// Find the least embedding of one algebra into another.
    Embed { source: PathBuf, target: PathBuf },
}

#[derive(Subcommand)]
enum BuildKind {
    /// The 2^i-element Boolean algebra with a new top.
    Bnalg { i: usize },
    /// The six-element algebra N.
    #[command(name = "N", alias = "n")]
    N,
    /// The Boolean algebra of subsets of an n-element set.
    Powerset { n: usize },
    /// Direct product; factors are `bnalgI`, `powersetK`, `N` or algebra files.
    Product {
        #[arg(required = true)]
        factors: Vec<String>,
    },
    /// The upset algebra of a poset file.
    Upset { poset: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Poset,
    Algebra,
    Embed,
}

/// A failure with its exit code.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::CapExceeded { .. }) { 3 } else { 2 };
        Failure(code, e.to_string())
    }
}

type CliResult = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure(2, e.to_string()))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure(2, format!("{}: {e}", path.display())))
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure(2, format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure(2, e.to_string())),
    }
}

fn limits(max_size: usize) -> Limits {
    Limits {
        max_size,
        ..Limits::default()
    }
}

fn factor(name: &str) -> Result<FinitePAlgebra, Failure> {
    if name == "N" || name == "n" {
        return Ok(make_n());
    }
    let numbered = |prefix: &str| name.strip_prefix(prefix).and_then(|r| r.parse::<usize>().ok());
    if let Some(i) = numbered("bnalg") {
        return Ok(make_bnalg(i)?);
    }
    if let Some(k) = numbered("powerset") {
        return Ok(powerset_algebra(k)?);
    }
    Ok(parse_algebra(&read(Path::new(name))?)?)
}

fn summary(a: &FinitePAlgebra) -> String {
    format!(
        "size {}, boolean {}",
        a.size(),
        if a.is_boolean() { "yes" } else { "no" }
    )
}

/// Writes an algebra; the summary goes to stderr when the algebra itself
/// goes to stdout.
fn emit_algebra(output: &Option<PathBuf>, a: &FinitePAlgebra) -> Result<(), Failure> {
    emit(output, &write_algebra(a))?;
    if output.is_some() {
        println!("{}", summary(a));
    } else {
        eprintln!("{}", summary(a));
    }
    Ok(())
}

fn element(a: &FinitePAlgebra, text: &str) -> Result<usize, Failure> {
    a.element(text)
        .or_else(|| text.parse::<usize>().ok().filter(|&x| x < a.size()))
        .ok_or_else(|| Failure(2, format!("no element `{text}`")))
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Build { kind, output, max_size } => {
            let lim = limits(max_size);
            let a = match kind {
                BuildKind::Bnalg { i } => make_bnalg(i)?,
                BuildKind::N => make_n(),
                BuildKind::Powerset { n } => powerset_algebra(n)?,
                BuildKind::Product { factors } => {
                    let fs: Vec<FinitePAlgebra> =
                        factors.iter().map(|f| factor(f)).collect::<Result<_, _>>()?;
                    product(&fs, &lim)?
                }
                BuildKind::Upset { poset } => upset_algebra(&parse_poset(&read(&poset)?)?, &lim)?,
            };
            emit_algebra(&output, &a)?;
            Ok(0)
        }
        Command::Dual { input, output, max_size } => {
            let text = read(&input)?;
            let is_algebra = text
                .parse::<toml::Table>()
                .map(|t| t.contains_key("star"))
                .unwrap_or(false);
            if is_algebra {
                let p = join_irreducibles(&parse_algebra(&text)?);
                emit(&output, &write_poset(&p))?;
            } else {
                let a = upset_algebra(&parse_poset(&text)?, &limits(max_size))?;
                emit_algebra(&output, &a)?;
            }
            Ok(0)
        }
        Command::EncodeGraph { input, mode, recover, output, max_size } => {
            let g = parse_dot(&read(&input)?)?;
            let enc = graph_encode(&g, &limits(max_size))?;
            let text = match mode {
                Mode::Poset => write_poset(&enc.poset),
                Mode::Algebra => write_algebra(&enc.algebra),
                Mode::Embed => {
                    let mut s = format!("# coordinates: {}\n", enc.index_labels.join(" "));
                    for x in enc.algebra.elements() {
                        s.push_str(&format!(
                            "{} -> {}\n",
                            enc.algebra.label(x),
                            tuple_label(&enc.embedding.coords[x])
                        ));
                    }
                    s
                }
            };
            emit(&output, &text)?;
            eprintln!(
                "|I| = {}, algebra size {}, join-irreducibles {}",
                enc.index_labels.len(),
                enc.algebra.size(),
                enc.algebra.join_irreducible_elements().len()
            );
            if recover {
                let back = recover_graph(&enc.algebra)?;
                let iso = graph_isomorphism(&back, &g).is_some();
                println!("isomorphic: {}", if iso { "yes" } else { "no" });
                return Ok(if iso { 0 } else { 1 });
            }
            Ok(0)
        }
        Command::RecoverGraph { input, fo, output } => {
            let a = parse_algebra(&read(&input)?)?;
            let g = if fo { fo_recover_graph(&a)? } else { recover_graph(&a)? };
            emit(&output, &write_dot(&g))?;
            Ok(0)
        }
        Command::Eval { algebra, formula, vars } => {
            let a = parse_algebra(&read(&algebra)?)?;
            let phi = parse_formula(&formula)?;
            let mut env = Env::new();
            for v in &vars {
                let (name, value) = v
                    .split_once('=')
                    .ok_or_else(|| Failure(2, format!("expected NAME=ELEMENT, got `{v}`")))?;
                env.insert(name.trim().to_string(), element(&a, value.trim())?);
            }
            let r = eval_with_witness(&a, &phi, &env)?;
            println!("{}", r.value);
            if !r.witness.is_empty() {
                let parts: Vec<String> = r
                    .witness
                    .iter()
                    .map(|(v, x)| format!("{v} = {}", a.label(*x)))
                    .collect();
                println!("witness: {}", parts.join(", "));
            }
            Ok(0)
        }
        Command::Check {
            suite,
            max_index,
            max_poset,
            max_vertices,
            max_size,
        } => {
            let defaults = SuiteOptions::default();
            let seed = match std::env::var("PALG_SEED") {
                Ok(s) => Some(
                    s.trim()
                        .parse::<u64>()
                        .map_err(|_| Failure(2, format!("PALG_SEED must be an integer, got `{s}`")))?,
                ),
                Err(_) => None,
            };
            let opts = SuiteOptions {
                max_index,
                max_poset: max_poset.unwrap_or(defaults.max_poset),
                max_si_poset: max_poset.unwrap_or(defaults.max_si_poset),
                max_vertices,
                seed,
                limits: limits(max_size),
            };
            let report = run_suite(suite.parse()?, &opts)?;
            print!("{report}");
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Embed { source, target } => {
            let a = parse_algebra(&read(&source)?)?;
            let b = parse_algebra(&read(&target)?)?;
            match find_embedding(&a, &b) {
                Some(h) => {
                    for x in a.elements() {
                        println!("{} -> {}", a.label(x), b.label(h.apply(x)));
                    }
                    Ok(0)
                }
                None => {
                    println!("no embedding");
                    Ok(1)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, message)) => {
            eprintln!("palg: {message}");
            ExitCode::from(code)
        }
    }
}
