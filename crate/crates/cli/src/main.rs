use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use graphcx::corpus::{enumerate_graphs, Complex, Filter};
use graphcx::graph::{product_all, Derived};
use graphcx::involution::{audit_pairing, PairingFailure, VertexLevel};
use graphcx::text::{parse_graph_text, parse_literal};
use graphcx::{
    alpha, alpha22, canonicalize, named_identity, shlb_residual, verify_pairing, AlgebraError, AlphaInput, Canonical,
    GraphError, HalfEdge, NamedIdentity, OrientedGraph, TensorVector,
};
use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "graphcx", version, about = "Oriented graph complex operations and identity checks")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for corpus-wide checks.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical class of a graph.
    Canon { graph: String },
    /// Elementary graph operations.
    Op {
        #[command(subcommand)]
        op: Op,
    },
    /// Apply α_{m,n} to n graphs.
    Alpha {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        graphs: Vec<String>,
    },
    /// Check identities over given inputs or the enumerated corpus.
    Verify {
        #[command(subcommand)]
        check: Verify,
    },
    /// List the basis of one bidegree.
    Enumerate {
        #[arg(long)]
        v: u32,
        #[arg(long)]
        e: usize,
        #[arg(long)]
        connected: bool,
        #[arg(long)]
        one_pi: bool,
    },
    /// Dimensions, ranks and Betti numbers up to the given bounds.
    Homology {
        #[arg(long)]
        max_v: u32,
        #[arg(long)]
        max_e: usize,
        /// Write each differential matrix as triplets into this directory.
        #[arg(long, value_name = "DIR")]
        matrices: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Op {
    /// Disjoint union, relabeling later factors after earlier ones.
    Product {
        #[arg(required = true, num_args = 2..)]
        graphs: Vec<String>,
    },
    /// Contract edge `e<k>` (or `k`).
    Contract { graph: String, edge: String },
    /// Splice two half-edges, e.g. `e1.s e3.t`.
    Splice { graph: String, h1: String, h2: String },
    /// Splice, then contract the first new edge.
    Surgery { graph: String, h1: String, h2: String },
}

#[derive(Subcommand)]
enum Verify {
    /// The residual of the strong homotopy identity at (m, n).
    Shlb {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        source: Source,
    },
    /// d_squared, leibniz, jacobi, coderivation and cojacobi.
    Classical {
        #[command(flatten)]
        source: Source,
    },
    /// α_{2,2} vanishes when a factor is 1PI.
    Onepi {
        #[command(flatten)]
        source: Source,
    },
    /// Check that μ pairs the proof set into cancelling pairs.
    Involution {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, required = true, num_args = 1..)]
        inputs: Vec<String>,
        /// Tally every element by case and outcome instead of stopping at
        /// the first failure.
        #[arg(long)]
        audit: bool,
    },
}

/// For `shlb`, `--inputs` lists the n factors of one input. For the other
/// checks it lists a pool from which all tuples are drawn.
#[derive(Args)]
struct Source {
    #[arg(long, num_args = 1.., conflicts_with = "corpus", required_unless_present = "corpus")]
    inputs: Vec<String>,
    /// Draw inputs from every class with 2 <= V <= max-v and E <= max-e.
    #[arg(long)]
    corpus: bool,
    #[arg(long, default_value_t = 4)]
    max_v: u32,
    #[arg(long, default_value_t = 6)]
    max_e: usize,
}

enum Failure {
    Input(String),
    Valency(String),
    Arity(String),
    Violated(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Violated(_) => 1,
            Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
            Failure::Valency(_) => 4,
            Failure::Arity(_) => 5,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Valency(m) | Failure::Arity(m) | Failure::Internal(m) => {
                write!(f, "error: {m}")
            }
            Failure::Violated(m) => f.write_str(m),
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Failure {
        match e {
            GraphError::LowValency { .. } => Failure::Valency(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Failure {
        Failure::Arity(e.to_string())
    }
}

impl From<graphcx::involution::FError> for Failure {
    fn from(e: graphcx::involution::FError) -> Failure {
        use graphcx::involution::FError;
        match e {
            FError::Arity(a) => a.into(),
            FError::InputHasLoop | FError::OutOfRange { .. } => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn read_graph(arg: &str) -> Result<OrientedGraph, Failure> {
    if arg.contains(';') {
        return Ok(parse_literal(arg)?);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| Failure::Input(format!("{arg}: {e}")))?;
    Ok(parse_graph_text(&text)?)
}

fn read_graphs(args: &[String]) -> Result<Vec<OrientedGraph>, Failure> {
    args.iter().map(|a| read_graph(a)).collect()
}

fn arity(expected: usize, found: usize) -> Result<(), Failure> {
    if expected == found {
        Ok(())
    } else {
        Err(AlgebraError::ArityMismatch { expected, found }.into())
    }
}

fn canonical_json(c: &Canonical) -> Value {
    match c {
        Canonical::Zero => json!({ "zero": true }),
        Canonical::Class(s, k) => json!({ "sign": s.as_i64(), "key": k.to_string() }),
    }
}

fn derived_report(d: Option<Derived>, as_json: bool) -> String {
    let Some(d) = d else {
        return if as_json { json!({ "zero": true }).to_string() } else { "0".into() };
    };
    let class = canonicalize(&d.graph).times(d.sign);
    if as_json {
        json!({ "sign": d.sign.as_i64(), "graph": d.graph.to_literal(), "class": canonical_json(&class) }).to_string()
    } else {
        format!("{} * {}\nclass: {class}", d.sign, d.graph)
    }
}

fn parse_edge(graph: &OrientedGraph, token: &str) -> Result<usize, Failure> {
    let k: usize = token
        .trim_start_matches('e')
        .parse()
        .map_err(|_| Failure::Input(format!("bad edge `{token}`, expected e<k> or k")))?;
    if k == 0 || k > graph.edge_count() {
        return Err(GraphError::EdgeOutOfRange {
            edge: k,
            edge_count: graph.edge_count(),
        }
        .into());
    }
    Ok(k - 1)
}

fn parse_half(token: &str) -> Result<HalfEdge, Failure> {
    Ok(token.parse::<HalfEdge>()?)
}

fn run_op(op: Op, as_json: bool) -> Outcome {
    match op {
        Op::Product { graphs } => {
            let graphs = read_graphs(&graphs)?;
            let p = product_all(&graphs).expect("at least two factors");
            let class = canonicalize(&p);
            Ok(if as_json {
                json!({ "graph": p.to_literal(), "class": canonical_json(&class) }).to_string()
            } else {
                format!("{p}\nclass: {class}")
            })
        }
        Op::Contract { graph, edge } => {
            let g = read_graph(&graph)?;
            let edge = parse_edge(&g, &edge)?;
            Ok(derived_report(g.contract(edge)?, as_json))
        }
        Op::Splice { graph, h1, h2 } => {
            let g = read_graph(&graph)?;
            let d = g.splice(parse_half(&h1)?, parse_half(&h2)?)?;
            Ok(derived_report(Some(d), as_json))
        }
        Op::Surgery { graph, h1, h2 } => {
            let g = read_graph(&graph)?;
            Ok(derived_report(g.surgery(parse_half(&h1)?, parse_half(&h2)?)?, as_json))
        }
    }
}

fn corpus(max_v: u32, max_e: usize) -> Vec<OrientedGraph> {
    let mut out = Vec::new();
    for v in 2..=max_v {
        for e in 0..=max_e {
            out.extend(enumerate_graphs(v, e, Filter::ALL).graphs());
        }
    }
    out
}

fn tuples(pool: &[OrientedGraph], n: usize) -> Vec<Vec<OrientedGraph>> {
    let mut out: Vec<Vec<OrientedGraph>> = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                pool.iter().map(move |g| {
                    let mut t = t.clone();
                    t.push(g.clone());
                    t
                })
            })
            .collect();
    }
    out
}

fn pool(source: &Source) -> Result<Vec<OrientedGraph>, Failure> {
    if source.corpus {
        Ok(corpus(source.max_v, source.max_e))
    } else {
        read_graphs(&source.inputs)
    }
}

fn describe(input: &[OrientedGraph]) -> String {
    input.iter().map(OrientedGraph::to_literal).collect::<Vec<_>>().join(" ⊗ ")
}

/// One line per identity and the offending inputs with their residuals.
struct Sweep {
    name: String,
    checked: usize,
    offenders: Vec<(Vec<OrientedGraph>, TensorVector)>,
}

fn sweep(
    name: String,
    inputs: Vec<Vec<OrientedGraph>>,
    check: impl Fn(&AlphaInput) -> Result<TensorVector, Failure> + Sync,
) -> Result<Sweep, Failure> {
    let results: Vec<Result<Option<(Vec<OrientedGraph>, TensorVector)>, Failure>> = inputs
        .par_iter()
        .map(|t| {
            let r = check(&AlphaInput::new(t.clone()))?;
            Ok((!r.is_zero()).then(|| (t.clone(), r)))
        })
        .collect();
    let mut offenders = Vec::new();
    for r in results {
        offenders.extend(r?);
    }
    Ok(Sweep {
        name,
        checked: inputs.len(),
        offenders,
    })
}

fn report_sweeps(sweeps: Vec<Sweep>, as_json: bool) -> Outcome {
    let failed = sweeps.iter().any(|s| !s.offenders.is_empty());
    let text = if as_json {
        let items: Vec<Value> = sweeps
            .iter()
            .map(|s| {
                json!({
                    "identity": s.name,
                    "checked": s.checked,
                    "violations": s.offenders.iter().map(|(t, r)| json!({
                        "input": t.iter().map(OrientedGraph::to_literal).collect::<Vec<_>>(),
                        "residual": r.json_value(),
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::to_string_pretty(&json!({ "pass": !failed, "checks": items })).expect("json")
    } else {
        let mut lines = Vec::new();
        for s in &sweeps {
            if s.offenders.is_empty() {
                lines.push(format!("{}: {} inputs, all zero", s.name, s.checked));
            } else {
                lines.push(format!("{}: {} of {} inputs nonzero", s.name, s.offenders.len(), s.checked));
                for (t, r) in &s.offenders {
                    lines.push(format!("  on {}:", describe(t)));
                    lines.extend(r.to_string().lines().map(|l| format!("    {l}")));
                }
            }
        }
        lines.join("\n")
    };
    if failed {
        Err(Failure::Violated(text))
    } else {
        Ok(text)
    }
}

fn run_verify(check: Verify, as_json: bool) -> Outcome {
    match check {
        Verify::Shlb { m, n, source } => {
            let inputs = if source.corpus {
                tuples(&pool(&source)?, n)
            } else {
                let factors = read_graphs(&source.inputs)?;
                arity(n, factors.len())?;
                vec![factors]
            };
            let name = format!("shlb({m},{n})");
            let s = sweep(name, inputs, |input| Ok(shlb_residual(m, n, input)?))?;
            report_sweeps(vec![s], as_json)
        }
        Verify::Classical { source } => {
            let pool = pool(&source)?;
            let mut sweeps = Vec::new();
            for identity in [
                NamedIdentity::DSquared,
                NamedIdentity::Leibniz,
                NamedIdentity::Jacobi,
                NamedIdentity::Coderivation,
                NamedIdentity::CoJacobi,
            ] {
                let n = identity.arity().1;
                sweeps.push(sweep(identity.name().into(), tuples(&pool, n), |input| {
                    Ok(named_identity(identity, input)?)
                })?);
            }
            report_sweeps(sweeps, as_json)
        }
        Verify::Onepi { source } => {
            let pool = pool(&source)?;
            let pairs: Vec<Vec<OrientedGraph>> = tuples(&pool, 2)
                .into_iter()
                .filter(|t| t[0].is_one_pi() || t[1].is_one_pi())
                .collect();
            let s = sweep("alpha22 with a 1PI factor".into(), pairs, |input| {
                let f = input.factors();
                Ok(alpha22(&f[0], &f[1]))
            })?;
            report_sweeps(vec![s], as_json)
        }
        Verify::Involution { m, n, inputs, audit } => {
            let factors = read_graphs(&inputs)?;
            arity(n, factors.len())?;
            let input = AlphaInput::new(factors);
            if audit {
                let a = audit_pairing(m, &input, VertexLevel::Product)?;
                let text = if as_json {
                    serde_json::to_string_pretty(&a).expect("json")
                } else {
                    let mut lines = vec![format!(
                        "|F| = {}, failures = {} ({} with nonzero term)",
                        a.size, a.failures, a.failures_with_term
                    )];
                    lines.extend(a.tally.iter().map(|(k, v)| format!("{v:>8}  {k}")));
                    lines.extend(a.first_failures.iter().map(|f| format!("failure: {f}")));
                    lines.join("\n")
                };
                return if a.failures == 0 { Ok(text) } else { Err(Failure::Violated(text)) };
            }
            match verify_pairing(m, &input) {
                Ok(cert) => Ok(if as_json {
                    cert.to_json()
                } else {
                    format!(
                        "certified: |F| = {}, {} pairs, {} fixed points, Σ_F = {}",
                        cert.size,
                        cert.pairs.len(),
                        cert.fixed_points,
                        cert.total
                    )
                }),
                Err(PairingFailure::Input(e)) => Err(e.into()),
                Err(e) => Err(Failure::Violated(if as_json {
                    json!({ "pass": false, "failure": e.to_string() }).to_string()
                } else {
                    format!("involution check failed: {e}")
                })),
            }
        }
    }
}

fn run_homology(max_v: u32, max_e: usize, matrices: Option<PathBuf>, as_json: bool) -> Outcome {
    let complex = Complex::build(max_v, max_e).map_err(|e| Failure::Internal(e.to_string()))?;
    for (b, square) in complex.squares() {
        if !square.is_zero() {
            return Err(Failure::Internal(format!("d∘d is nonzero at {b}")));
        }
    }
    if let Some(dir) = matrices {
        std::fs::create_dir_all(&dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
        for b in complex.degrees() {
            if let Some(m) = complex.matrices.get(&b) {
                let path = dir.join(format!("d_{}_{}.txt", b.v, b.e));
                std::fs::write(&path, m.to_triplets()).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            }
        }
    }
    let rows = complex.homology();
    if as_json {
        return Ok(serde_json::to_string_pretty(&rows).expect("json"));
    }
    let dash = |x: Option<usize>| x.map_or("-".to_string(), |x| x.to_string());
    let mut lines = vec![format!("{:>3} {:>3} {:>6} {:>8} {:>8} {:>6}", "V", "E", "dim", "rank_out", "rank_in", "betti")];
    for r in rows {
        lines.push(format!(
            "{:>3} {:>3} {:>6} {:>8} {:>8} {:>6}",
            r.bidegree.v,
            r.bidegree.e,
            r.dim,
            r.rank_out,
            dash(r.rank_in),
            dash(r.betti)
        ));
    }
    Ok(lines.join("\n"))
}

fn run(cli: Cli) -> Outcome {
    let as_json = cli.json;
    match cli.command {
        Command::Canon { graph } => {
            let c = canonicalize(&read_graph(&graph)?);
            Ok(if as_json { canonical_json(&c).to_string() } else { c.to_string() })
        }
        Command::Op { op } => run_op(op, as_json),
        Command::Alpha { m, n, graphs } => {
            let factors = read_graphs(&graphs)?;
            arity(n, factors.len())?;
            let v = alpha(m, n, &AlphaInput::new(factors))?;
            Ok(if as_json {
                serde_json::to_string_pretty(&v.json_value()).expect("json")
            } else {
                v.to_string()
            })
        }
        Command::Verify { check } => run_verify(check, as_json),
        Command::Enumerate { v, e, connected, one_pi } => {
            let basis = enumerate_graphs(v, e, Filter { connected, one_pi });
            Ok(if as_json {
                let keys: Vec<String> = basis.keys.iter().map(ToString::to_string).collect();
                json!({ "v": v, "e": e, "count": keys.len(), "keys": keys }).to_string()
            } else {
                basis.to_text().trim_end().to_string()
            })
        }
        Command::Homology { max_v, max_e, matrices } => run_homology(max_v, max_e, matrices, as_json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    // A closed pipe on stdout is not an error worth reporting.
    let emit = |text: &str| {
        let _ = writeln!(std::io::stdout().lock(), "{text}");
    };
    match run(cli) {
        Ok(out) => {
            if !out.is_empty() {
                emit(&out);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            match &f {
                Failure::Violated(report) => emit(report),
                other => eprintln!("{other}"),
            }
            ExitCode::from(f.code())
        }
    }
}
