use std::fmt::Write as _;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use paritylab::conditions::check_main_conditions;
use paritylab::connectivity::edge_connectivity;
use paritylab::deficiency::{
    decide_by_enumeration, deficiency, verify_witness, Decision, DeficiencyWitness, OracleError,
    DEFAULT_ENUMERATION_LIMIT,
};
use paritylab::experiment::{run_verification_experiment, ExperimentConfig};
use paritylab::factor::{
    brute_force_factor, find_infeasibility_witness, find_parity_factor, verify_factor, Factor, Solution, SolverError,
    DEFAULT_EDGE_LIMIT,
};
use paritylab::generators::{extremal_construction, random_regular, ExtremalParams, DEFAULT_MAX_ATTEMPTS};
use paritylab::graph::{Graph, VertexSet};
use paritylab::parity::ParitySpec;

#[derive(Parser)]
#[command(name = "paritylab", version, about = "Decide, construct and certify (g,f)-parity factors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a parity factor, or print a deficiency witness proving there is none.
    Solve {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
        enum_cap: usize,
        /// Emit Graphviz DOT with the certificate highlighted.
        #[arg(long)]
        dot: bool,
    },
    /// Decide feasibility with an exhaustive oracle.
    Decide {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value_t = Method::Lovasz)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
        enum_cap: usize,
        #[arg(long, default_value_t = DEFAULT_EDGE_LIMIT)]
        edge_cap: usize,
        #[arg(long)]
        dot: bool,
    },
    /// Evaluate the deficiency of one pair (S, T).
    Deficiency {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        spec: SpecArgs,
        /// Space- or comma-separated vertex ids.
        #[arg(long, default_value = "")]
        s: String,
        #[arg(long, default_value = "")]
        t: String,
        #[arg(long)]
        dot: bool,
    },
    /// Check a factor block against a graph.
    VerifyFactor {
        graph: PathBuf,
        factor: PathBuf,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Check a witness block against a graph.
    VerifyWitness {
        graph: PathBuf,
        witness: PathBuf,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Edge connectivity and a minimum cut.
    Connectivity {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        dot: bool,
    },
    /// The sharpness graph: r copies of K_{r+1} minus a matching of size m/2, plus m hubs.
    Construct {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: usize,
    },
    /// A uniform-ish random r-regular graph.
    GenRandom {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, env = "PARITYLAB_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
        max_attempts: usize,
    },
    /// Which sufficient conditions hold for the given parameters.
    CheckConditions {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        /// The graph has an even number of vertices.
        #[arg(long)]
        n_even: bool,
    },
    /// Run a verification sweep described by a config file.
    Experiment {
        config: PathBuf,
        /// Overrides the config's seed.
        #[arg(long, env = "PARITYLAB_SEED")]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Args)]
struct Input {
    /// Graph file, or `-` for standard input.
    #[arg(default_value = "-")]
    input: PathBuf,
}

#[derive(Args)]
struct SpecArgs {
    /// Constant lower bound.
    #[arg(long, requires = "b", conflicts_with = "spec")]
    a: Option<usize>,
    /// Constant upper bound.
    #[arg(long, requires = "a")]
    b: Option<usize>,
    /// Per-vertex bounds, one `g f` line per vertex.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Lovasz,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
}

/// Maps to exit code 3.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct CapExceeded(String);

/// Maps to exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct Usage(String);

const FEASIBLE: u8 = 0;
const INFEASIBLE: u8 = 1;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.downcast_ref::<CapExceeded>().is_some() { 3 } else { 2 })
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Solve { input, spec, enum_cap, dot } => {
            let g = read_graph(&input.input)?;
            let spec = spec.resolve(g.order())?;
            match find_parity_factor(&g, &spec)? {
                Solution::Found(f) => {
                    print!("{}", if dot { factor_dot(&g, &f) } else { f.to_text() });
                    Ok(FEASIBLE)
                }
                Solution::Infeasible => {
                    let w = find_infeasibility_witness(&g, &spec, enum_cap)?.ok_or_else(|| {
                        CapExceeded(format!(
                            "no factor exists, but no witness was found and n = {} exceeds --enum-cap {enum_cap}",
                            g.order()
                        ))
                    })?;
                    emit_witness(&g, &w, dot);
                    Ok(INFEASIBLE)
                }
            }
        }
        Command::Decide { input, spec, method, enum_cap, edge_cap, dot } => {
            let g = read_graph(&input.input)?;
            let spec = spec.resolve(g.order())?;
            let witness = match method {
                Method::Lovasz => match decide_by_enumeration(&g, &spec, enum_cap) {
                    Ok(Decision::Feasible) => None,
                    Ok(Decision::Infeasible(w)) => Some(w),
                    Err(e @ OracleError::GraphTooLargeForEnumeration { .. }) => {
                        return Err(CapExceeded(format!("{e}; raise --enum-cap")).into())
                    }
                    Err(e) => return Err(e.into()),
                },
                Method::Brute => match brute_force_factor(&g, &spec, edge_cap) {
                    Ok(Solution::Found(_)) => None,
                    Ok(Solution::Infeasible) => Some(
                        find_infeasibility_witness(&g, &spec, enum_cap)?
                            .ok_or_else(|| CapExceeded("infeasible, but no witness within --enum-cap".into()))?,
                    ),
                    Err(e @ SolverError::TooManyEdges { .. }) => {
                        return Err(CapExceeded(format!("{e}; raise --edge-cap")).into())
                    }
                    Err(e) => return Err(e.into()),
                },
            };
            match witness {
                None => {
                    println!("feasible");
                    Ok(FEASIBLE)
                }
                Some(w) => {
                    emit_witness(&g, &w, dot);
                    Ok(INFEASIBLE)
                }
            }
        }
        Command::Deficiency { input, spec, s, t, dot } => {
            let g = read_graph(&input.input)?;
            let spec = spec.resolve(g.order())?;
            let s = parse_ids(&s, g.order()).context("--s")?;
            let t = parse_ids(&t, g.order()).context("--t")?;
            let w = deficiency(&g, &spec, &s, &t)?;
            if dot {
                print!("{}", witness_dot(&g, &w));
            } else {
                print!("{}", w.to_text());
                for c in &w.odd_components {
                    println!("# odd component: {c}");
                }
            }
            Ok(FEASIBLE)
        }
        Command::VerifyFactor { graph, factor, spec } => {
            let g = read_graph(&graph)?;
            let spec = spec.resolve(g.order())?;
            let f = Factor::parse(&read_text(&factor)?, g.order()).context("reading factor")?;
            Ok(report_check(verify_factor(&g, &spec, &f).map_err(|v| v.to_string())))
        }
        Command::VerifyWitness { graph, witness, spec } => {
            let g = read_graph(&graph)?;
            let spec = spec.resolve(g.order())?;
            let w = DeficiencyWitness::parse(&read_text(&witness)?, g.order()).context("reading witness")?;
            Ok(report_check(verify_witness(&g, &spec, &w).map_err(|v| v.to_string())))
        }
        Command::Connectivity { input, dot } => {
            let g = read_graph(&input.input)?;
            let (lambda, cert) = edge_connectivity(&g)?;
            if dot {
                print!("{}", cut_dot(&g, &cert.cut_side));
            } else {
                println!("lambda: {lambda}");
                println!("cut: {}", cert.cut_side);
            }
            Ok(FEASIBLE)
        }
        Command::Construct { r, m } => {
            let x = extremal_construction(ExtremalParams::new(r, m).map_err(|e| Usage(e.to_string()))?);
            print!("{}", x.graph.to_text());
            println!("# hubs: {}", x.hubs);
            Ok(FEASIBLE)
        }
        Command::GenRandom { n, r, seed, max_attempts } => {
            print!("{}", random_regular(n, r, seed, max_attempts)?.to_text());
            Ok(FEASIBLE)
        }
        Command::CheckConditions { r, m, a, b, n_even } => {
            let report = check_main_conditions(r, m, a, b, n_even).map_err(|e| Usage(e.to_string()))?;
            print!("{report}");
            Ok(FEASIBLE)
        }
        Command::Experiment { config, seed, format } => {
            let mut cfg = ExperimentConfig::parse(&read_text(&config)?)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let report = run_verification_experiment(&cfg)?;
            match format {
                Format::Table => print!("{}", report.to_table()),
                Format::Csv => print!("{}", report.to_csv()),
            }
            Ok(FEASIBLE)
        }
    }
}

impl SpecArgs {
    fn resolve(&self, n: usize) -> Result<ParitySpec> {
        let spec = match (self.a, self.b, &self.spec) {
            (Some(a), Some(b), None) => ParitySpec::constant(a, b, n).map_err(|e| Usage(e.to_string()))?,
            (None, None, Some(path)) => {
                ParitySpec::parse(&read_text(path)?).with_context(|| format!("reading {}", path.display()))?
            }
            _ => return Err(Usage("give either --a and --b, or --spec".into()).into()),
        };
        spec.check_order(n).map_err(|e| Usage(e.to_string()))?;
        Ok(spec)
    }
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).context("reading standard input")?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = read_text(path)?;
    Graph::parse(&text).with_context(|| format!("parsing graph from {}", path.display()))
}

fn parse_ids(text: &str, n: usize) -> Result<VertexSet> {
    let ids = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().with_context(|| format!("invalid vertex id {s:?}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(VertexSet::new(n, ids)?)
}

fn report_check(result: std::result::Result<(), String>) -> u8 {
    match result {
        Ok(()) => {
            println!("valid");
            FEASIBLE
        }
        Err(reason) => {
            println!("invalid: {reason}");
            INFEASIBLE
        }
    }
}

fn emit_witness(g: &Graph, w: &DeficiencyWitness, dot: bool) {
    if dot {
        print!("{}", witness_dot(g, w));
    } else {
        print!("{}", w.to_text());
    }
}

fn dot_with(
    g: &Graph,
    node_attrs: impl Fn(usize) -> Option<&'static str>,
    edge_attrs: impl Fn(usize, usize) -> Option<&'static str>,
) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.order() {
        match node_attrs(v) {
            Some(attrs) => {
                let _ = writeln!(out, "  {v} [{attrs}];");
            }
            None => {
                let _ = writeln!(out, "  {v};");
            }
        }
    }
    for &(u, v) in g.edges() {
        match edge_attrs(u, v) {
            Some(attrs) => {
                let _ = writeln!(out, "  {u} -- {v} [{attrs}];");
            }
            None => {
                let _ = writeln!(out, "  {u} -- {v};");
            }
        }
    }
    out.push_str("}\n");
    out
}

fn factor_dot(g: &Graph, f: &Factor) -> String {
    dot_with(g, |_| None, |u, v| f.edges().binary_search(&(u, v)).is_ok().then_some("penwidth=3, color=red"))
}

/// S filled, T boxed, odd components dashed.
fn witness_dot(g: &Graph, w: &DeficiencyWitness) -> String {
    let odd: Vec<bool> = {
        let mut mask = vec![false; g.order()];
        for c in &w.odd_components {
            for v in c.iter() {
                mask[v] = true;
            }
        }
        mask
    };
    let mut out = dot_with(
        g,
        |v| {
            if w.s.contains(v) {
                Some("style=filled, fillcolor=lightblue")
            } else if w.t.contains(v) {
                Some("shape=box, style=filled, fillcolor=orange")
            } else if odd[v] {
                Some("style=dashed")
            } else {
                None
            }
        },
        |_, _| None,
    );
    out.insert_str(out.len() - 2, &format!("  label=\"delta = {}, tau = {}\";\n", w.delta, w.tau));
    out
}

fn cut_dot(g: &Graph, side: &VertexSet) -> String {
    dot_with(
        g,
        |v| side.contains(v).then_some("style=filled, fillcolor=lightblue"),
        |u, v| (side.contains(u) != side.contains(v)).then_some("style=bold, color=red"),
    )
}
