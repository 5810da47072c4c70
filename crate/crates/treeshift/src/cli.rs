//! Command-line front end.
//!
//! Verdicts map to exit codes (0 irreducible, 1 not, 2 empty) so the tool
//! composes in scripts; crosscheck disagreements exit 3 because they mean a
//! correctness bug; usage errors exit 64 and I/O errors 74.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::batch::{
    all_instances, bench_csv, bench_reduction, sample_instances, verdict_trio_many,
};
use crate::decide::{decide_direct, decide_grouped};
use crate::graph::{graph_of, to_dot, ExtGraph};
use crate::instance::{parse_instance, random_instance, serialize_instance, ParsedInstance};
use crate::oracle::{cpc_connected, cpc_witness, decide_oracle};
use crate::reduction::{dc_fixpoint, enhanced_fixpoint, grouping};
use crate::tsft::{AllowableSet, Verdict};

pub const EXIT_DISAGREEMENT: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

#[derive(Parser)]
#[command(
    name = "treeshift",
    about = "Decide CPC-irreducibility of tree shifts of finite type",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Decide CPC-irreducibility of an instance file.
    Decide {
        file: PathBuf,
        /// Use the grouping flowchart instead of the direct one.
        #[arg(long)]
        grouped: bool,
        /// Print the full certificate after the verdict.
        #[arg(long)]
        certificate: bool,
    },
    /// Reduce the instance graph to its (d,c)-fixpoint.
    Reduce {
        file: PathBuf,
        /// Retire each divergent edge as it fires.
        #[arg(long)]
        enhanced: bool,
        /// Print one line per reduction step.
        #[arg(long)]
        trace: bool,
        /// Write the reduced graph as DOT to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Print the SCC partition and the grouped graph.
    Group { file: PathBuf },
    /// Run the fixed-point connectedness oracle.
    Oracle {
        file: PathBuf,
        /// Query one ordered symbol pair instead of the full verdict.
        #[arg(long, num_args = 2, value_names = ["ALPHA", "BETA"])]
        pair: Option<Vec<String>>,
        /// With --pair, print the witness pattern when connected.
        #[arg(long)]
        witness: bool,
    },
    /// Write the raw instance graph as DOT.
    Dot { file: PathBuf, output: PathBuf },
    /// Generate a random instance to standard output.
    Gen {
        #[arg(long)]
        symbols: usize,
        #[arg(long)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cross-validate the direct, grouped, and oracle deciders.
    Crosscheck {
        /// Alphabet size; 2 or less runs the exhaustive instance space.
        #[arg(long, default_value_t = 2)]
        symbols: usize,
        /// Sample count for alphabet sizes above 2.
        #[arg(long, default_value_t = 10000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time the reduction fixpoint over random graphs; emits CSV.
    Bench {
        /// Comma-separated vertex counts.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum CliError {
    Usage(String),
    Io(String),
    Disagreement,
}

impl CliError {
    fn report(self) -> i32 {
        match self {
            CliError::Usage(msg) => {
                eprintln!("error: {}", msg);
                EXIT_USAGE
            }
            CliError::Io(msg) => {
                eprintln!("error: {}", msg);
                EXIT_IO
            }
            CliError::Disagreement => EXIT_DISAGREEMENT,
        }
    }
}

/// Parses arguments and runs a command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{}", err);
                    0
                }
                _ => {
                    eprint!("{}", err);
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => err.report(),
    }
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Decide {
            file,
            grouped,
            certificate,
        } => {
            let instance = load(&file)?;
            let cert = if grouped {
                decide_grouped(&instance.allowable)
            } else {
                decide_direct(&instance.allowable)
            };
            println!("{}", cert.verdict);
            if certificate {
                print!("{}", cert);
            }
            Ok(cert.verdict.exit_code())
        }
        Command::Reduce {
            file,
            enhanced,
            trace,
            dot,
        } => {
            let instance = load(&file)?;
            let graph = graph_of(&instance.allowable);
            let (limit, steps) = if enhanced {
                enhanced_fixpoint(&graph)
            } else {
                dc_fixpoint(&graph)
            };
            print!("{}", render_graph(&limit));
            if trace {
                println!("trace:");
                for step in &steps {
                    println!("{}", step.render(limit.alphabet()));
                }
            }
            if let Some(path) = dot {
                fs::write(&path, to_dot(&limit))
                    .map_err(|e| CliError::Io(format!("{}: {}", path.display(), e)))?;
            }
            Ok(0)
        }
        Command::Group { file } => {
            let instance = load(&file)?;
            let graph = graph_of(&instance.allowable);
            if graph.vertex_count() == 0 {
                return Err(CliError::Usage("instance has no symbols".into()));
            }
            let grouped = grouping(&graph).expect("nonempty graphs group");
            println!("components: {}", grouped.components.len());
            for (i, comp) in grouped.components.iter().enumerate() {
                let members: Vec<&str> = comp
                    .iter()
                    .map(|&s| instance.allowable.alphabet().name(s))
                    .collect();
                println!("component {}: {}", i, members.join(" "));
            }
            print!("{}", render_graph(&grouped.graph));
            Ok(0)
        }
        Command::Oracle {
            file,
            pair,
            witness,
        } => {
            let instance = load(&file)?;
            match pair {
                None => {
                    if witness {
                        return Err(CliError::Usage("--witness requires --pair".into()));
                    }
                    let verdict = decide_oracle(&instance.allowable);
                    println!("{}", verdict);
                    Ok(verdict.exit_code())
                }
                Some(pair) => run_oracle_pair(&instance.allowable, &pair, witness),
            }
        }
        Command::Dot { file, output } => {
            let instance = load(&file)?;
            let graph = graph_of(&instance.allowable);
            fs::write(&output, to_dot(&graph))
                .map_err(|e| CliError::Io(format!("{}: {}", output.display(), e)))?;
            Ok(0)
        }
        Command::Gen {
            symbols,
            density,
            seed,
        } => {
            if symbols == 0 {
                return Err(CliError::Usage("--symbols must be positive".into()));
            }
            if !(0.0..=1.0).contains(&density) {
                return Err(CliError::Usage("--density must lie in [0, 1]".into()));
            }
            let instance = random_instance(symbols, density, seed);
            println!("# symbols={} density={} seed={}", symbols, density, seed);
            print!("{}", serialize_instance(&instance));
            Ok(0)
        }
        Command::Crosscheck {
            symbols,
            samples,
            seed,
        } => run_crosscheck(symbols, samples, seed),
        Command::Bench { sizes, seed } => {
            let sizes = sizes.unwrap_or_else(|| vec![4, 6, 8, 10, 12]);
            if sizes.is_empty() {
                return Err(CliError::Usage("--sizes needs at least one size".into()));
            }
            let records = bench_reduction(&sizes, seed);
            print!("{}", bench_csv(&records));
            for r in &records {
                if r.steps > r.vertices * r.vertices {
                    eprintln!(
                        "termination bound violated: {} steps on {} vertices",
                        r.steps, r.vertices
                    );
                    return Err(CliError::Disagreement);
                }
            }
            Ok(0)
        }
    }
}

fn load(path: &PathBuf) -> Result<ParsedInstance, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {}", path.display(), e)))?;
    let parsed = parse_instance(&text).map_err(|e| CliError::Usage(e.to_string()))?;
    for warning in &parsed.warnings {
        eprintln!("warning: {}", warning);
    }
    Ok(parsed)
}

fn render_graph(g: &ExtGraph) -> String {
    let mut out = String::new();
    let names: Vec<&str> = g.alphabet().names().collect();
    let _ = writeln!(out, "vertices: {}", names.join(" "));
    let conv: Vec<String> = g
        .convergent()
        .iter()
        .map(|&(a, b)| format!("({},{})", g.alphabet().name(a), g.alphabet().name(b)))
        .collect();
    let _ = writeln!(out, "convergent: {}", conv.join(" "));
    let div: Vec<String> = g
        .divergent()
        .iter()
        .map(|&(a, b, c)| {
            format!(
                "({},{},{})",
                g.alphabet().name(a),
                g.alphabet().name(b),
                g.alphabet().name(c)
            )
        })
        .collect();
    let _ = writeln!(out, "divergent: {}", div.join(" "));
    out
}

fn run_oracle_pair(
    b: &AllowableSet,
    pair: &[String],
    witness: bool,
) -> Result<i32, CliError> {
    let [alpha_name, beta_name] = pair else {
        return Err(CliError::Usage("--pair expects exactly two symbols".into()));
    };
    for name in [alpha_name, beta_name] {
        if b.alphabet().id_of(name).is_none() {
            return Err(CliError::Usage(format!("unknown symbol '{}'", name)));
        }
    }
    let essential = b.essentialize();
    if essential.alphabet().is_empty() {
        println!("{}", Verdict::Empty);
        return Ok(Verdict::Empty.exit_code());
    }
    let resolve = |name: &str| essential.alphabet().id_of(name);
    let (Some(alpha), Some(beta)) = (resolve(alpha_name), resolve(beta_name)) else {
        println!("not-connected (symbol eliminated by essentialization)");
        return Ok(1);
    };
    let connected =
        cpc_connected(&essential, alpha, beta).expect("essentialized instance with known symbols");
    if connected {
        println!("connected");
        if witness {
            let pattern = cpc_witness(&essential, alpha, beta)
                .expect("query validated above")
                .expect("connected pairs have witnesses");
            print!("{}", pattern.render(essential.alphabet()));
        }
        Ok(0)
    } else {
        println!("not-connected");
        Ok(1)
    }
}

fn run_crosscheck(symbols: usize, samples: usize, seed: u64) -> Result<i32, CliError> {
    if symbols == 0 {
        return Err(CliError::Usage("--symbols must be positive".into()));
    }
    let instances = if symbols <= 2 {
        all_instances(symbols)
    } else {
        sample_instances(symbols, samples, seed)
    };
    let outcomes = verdict_trio_many(&instances);
    let mut agreeing = 0usize;
    let mut disagreements = Vec::new();
    for (instance, outcome) in instances.iter().zip(&outcomes) {
        if outcome.agree() {
            agreeing += 1;
        } else {
            disagreements.push((instance.clone(), *outcome));
        }
    }
    println!("{}/{} agree", agreeing, instances.len());
    if disagreements.is_empty() {
        Ok(0)
    } else {
        for (instance, outcome) in disagreements {
            eprintln!(
                "disagreement: direct={} grouped={} oracle={}",
                outcome.direct, outcome.grouped, outcome.oracle
            );
            eprint!("{}", serialize_instance(&instance));
        }
        Err(CliError::Disagreement)
    }
}
