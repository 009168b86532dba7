//! `gps`: command-line front end for gps-core.
//!
//! Results are written as JSON (stdout or `--output`). Exit status is 0 on
//! success, 1 when an input violates a contract or a check fails, and 2 on
//! I/O or parse errors.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use gps_core::bounds::BoundCheck;
use gps_core::colouring::{self, VertexOrdering, DEFAULT_COLR_CAP};
use gps_core::decomposition::{self, TreeDecomposition, DEFAULT_EXACT_CAP};
use gps_core::geometry::{self, PointSet};
use gps_core::io::{parse_graph, write_graph, GraphFormat};
use gps_core::localise::{self, GrowthPoly, LocalisingDistribution};
use gps_core::product;
use gps_core::separators::{self, CombinedParams};
use gps_core::shortcuts::{self, ShortcutSystem};
use gps_core::testgen;
use gps_core::{Error, Graph};

#[derive(Parser)]
#[command(name = "gps", version, about = "Graph product structure toolkit")]
struct Cli {
    /// Format of graph inputs.
    #[arg(long, value_enum, default_value_t = InputFormat::Auto, global = true)]
    format: InputFormat,

    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Text,
    Json,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Strong or cartesian product of two graphs.
    Product {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = ProductKind::Strong)]
        kind: ProductKind,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        emit: OutputFormat,
    },
    /// Tree decompositions.
    #[command(subcommand)]
    Td(TdCommand),
    /// Balanced separators for subgraphs of products.
    #[command(subcommand)]
    Separate(SeparateCommand),
    /// Random r-localising sets.
    #[command(subcommand)]
    Localise(LocaliseCommand),
    /// Strong colouring numbers.
    #[command(subcommand)]
    Colr(ColrCommand),
    /// Shortcut systems.
    #[command(subcommand)]
    Shortcut(ShortcutCommand),
    /// Geometric graphs and the unit-disc embedding.
    #[command(subcommand)]
    Geo(GeoCommand),
    /// Witness gadgets.
    #[command(subcommand)]
    Witness(WitnessCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum ProductKind {
    Strong,
    Cartesian,
}

#[derive(Subcommand)]
enum TdCommand {
    /// Exact treewidth (subset dynamic programme, size-capped).
    Exact { graph: PathBuf },
    /// Min-fill heuristic decomposition.
    Heuristic { graph: PathBuf },
    /// Check a decomposition against a graph.
    Validate {
        graph: PathBuf,
        #[arg(long)]
        td: PathBuf,
    },
    /// Balanced separator from a bag of a decomposition.
    Separator {
        graph: PathBuf,
        /// Decomposition to use; computed if absent.
        #[arg(long)]
        td: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SeparateCommand {
    /// Residue-class deletion for subgraphs of Z^d x H.
    Layered {
        graph: PathBuf,
        /// Tree decomposition of H.
        #[arg(long)]
        h_td: PathBuf,
    },
    /// Fragmentation plus decomposition for subgraphs of G1 x G2.
    Combined {
        graph: PathBuf,
        #[arg(long)]
        g1: PathBuf,
        #[arg(long)]
        g2: PathBuf,
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        growth: GrowthArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = localise::DEFAULT_RESAMPLE_CAP)]
        max_draws: usize,
    },
}

#[derive(Args)]
struct GrowthArgs {
    /// Ball growth bound g(r) = (2r+1)^c.
    #[arg(long, default_value_t = 1)]
    growth_c: u32,
}

#[derive(Subcommand)]
enum LocaliseCommand {
    /// Sample an r-localising set with f_{r,p,q}.
    Sample {
        graph: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Weighted fragmentation.
    Fragment {
        graph: PathBuf,
        #[arg(long)]
        r: usize,
        /// JSON array of non-negative integer weights; all 1 if absent.
        #[arg(long)]
        weights: Option<PathBuf>,
        #[command(flatten)]
        growth: GrowthArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = localise::DEFAULT_RESAMPLE_CAP)]
        max_draws: usize,
    },
    /// The distribution table f_{r,p,q}.
    Distribution {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
    },
    /// Least radius from which p = r^(-c-1/2), q = r^(-1/2) always work.
    R0 {
        #[arg(long)]
        c: u32,
    },
}

#[derive(Subcommand)]
enum ColrCommand {
    /// Largest reachable set under a given ordering.
    Eval {
        graph: PathBuf,
        /// JSON array listing the vertices from first to last.
        #[arg(long)]
        order: PathBuf,
        #[arg(long)]
        r: usize,
    },
    /// Exact colouring number with an optimal ordering.
    Exact {
        graph: PathBuf,
        #[arg(long)]
        r: usize,
    },
    /// Product ordering of G x H and the resulting bound check.
    Product {
        graph: PathBuf,
        #[arg(long)]
        order: PathBuf,
        #[arg(long)]
        h: PathBuf,
        #[arg(long)]
        r: usize,
    },
}

#[derive(Subcommand)]
enum ShortcutCommand {
    /// Shortcut system realising the k-th power.
    Power {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Add the endpoint edges of a shortcut system.
    Apply {
        graph: PathBuf,
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        emit: OutputFormat,
    },
    /// Check a shortcut system.
    Validate {
        graph: PathBuf,
        #[arg(long)]
        system: PathBuf,
    },
}

#[derive(Subcommand)]
enum GeoCommand {
    /// Unit-disc graph of a CSV point set.
    Udg {
        points: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        emit: OutputFormat,
    },
    /// Embedding of the unit-disc graph into Z^d x K_t.
    Embed {
        points: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Symmetric k-nearest-neighbour graph.
    Knn {
        points: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        emit: OutputFormat,
    },
}

#[derive(Subcommand)]
enum WitnessCommand {
    /// 1-subdivision of K_{n,n} in K_{1,n} □ K_{1,n}.
    StarCartesian {
        #[arg(long)]
        n: usize,
    },
    /// K_{n,n} and a complete binary tree in K_{1,n} ⊠ K_{1,n}.
    StarStrong {
        #[arg(long)]
        n: usize,
    },
}

enum Failure {
    /// A contract violation or failed check; exit 1.
    Contract(String),
    /// Unreadable or malformed input; exit 2.
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Contract(e.to_string())
        }
    }
}

type CmdResult = Result<Output, Failure>;

/// What a command produced: the text to write and, for checks, the first
/// violation (printed to stderr with exit status 1).
struct Output {
    body: String,
    violation: Option<String>,
}

impl Output {
    fn json(value: impl Serialize) -> Self {
        let mut body = serde_json::to_string_pretty(&value).expect("serializable");
        body.push('\n');
        Output { body, violation: None }
    }

    fn failing(mut self, violation: Option<String>) -> Self {
        self.violation = violation;
        self
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|out| {
        match &cli.output {
            Some(path) => fs::write(path, &out.body).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
            None => {
                let mut stdout = io::stdout().lock();
                stdout
                    .write_all(out.body.as_bytes())
                    .map_err(|e| Failure::Input(e.to_string()))?;
            }
        }
        match out.violation {
            Some(v) => Err(Failure::Contract(v)),
            None => Ok(()),
        }
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Contract(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn exact_cap(default: usize) -> Result<usize, Failure> {
    match std::env::var("GPS_EXACT_CAP") {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(c) if c > 0 => Ok(c),
            _ => Err(Failure::Input(format!("GPS_EXACT_CAP must be a positive integer, got {s:?}"))),
        },
        Err(_) => Ok(default),
    }
}

fn bounds_violation(bounds: &[BoundCheck]) -> Option<String> {
    bounds
        .iter()
        .find(|b| !b.holds)
        .map(|b| format!("bound failed: {} ({} vs {})", b.name, b.lhs, b.rhs))
}

fn emit_graph(g: &Graph, emit: OutputFormat) -> Output {
    let format = match emit {
        OutputFormat::Text => GraphFormat::Text,
        OutputFormat::Json => GraphFormat::Json,
    };
    Output {
        body: write_graph(g, format),
        violation: None,
    }
}

fn run(cli: &Cli) -> CmdResult {
    let format = match cli.format {
        InputFormat::Text => Some(GraphFormat::Text),
        InputFormat::Json => Some(GraphFormat::Json),
        InputFormat::Auto => None,
    };
    let graph = |path: &Path| -> Result<Graph, Failure> {
        parse_graph(&read(path)?, format).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    };
    let points = |path: &Path| -> Result<PointSet, Failure> {
        PointSet::from_csv(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    };

    match &cli.command {
        Command::Product { a, b, kind, emit } => {
            let (a, b) = (graph(a)?, graph(b)?);
            let g = match kind {
                ProductKind::Strong => product::strong_product(&a, &b)?,
                ProductKind::Cartesian => product::cartesian_product(&a, &b)?,
            };
            Ok(emit_graph(&g, *emit))
        }
        Command::Td(cmd) => td(cmd, &graph),
        Command::Separate(cmd) => separate(cmd, &graph),
        Command::Localise(cmd) => localise_cmd(cmd, &graph),
        Command::Colr(cmd) => colr(cmd, &graph),
        Command::Shortcut(cmd) => shortcut(cmd, &graph),
        Command::Geo(cmd) => geo(cmd, &points),
        Command::Witness(cmd) => {
            let report = match cmd {
                WitnessCommand::StarCartesian { n } => testgen::star_cartesian_subdivision_witness(*n),
                WitnessCommand::StarStrong { n } => testgen::strong_star_binary_tree_witness(*n),
            };
            let failure = report.failure.clone();
            Ok(Output::json(report).failing(failure))
        }
    }
}

type GraphReader<'a> = dyn Fn(&Path) -> Result<Graph, Failure> + 'a;

fn td_value(td: &TreeDecomposition) -> Value {
    serde_json::from_str(&td.to_json()).expect("decomposition JSON")
}

fn read_td(path: &Path) -> Result<TreeDecomposition, Failure> {
    TreeDecomposition::from_json(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn td(cmd: &TdCommand, graph: &GraphReader) -> CmdResult {
    match cmd {
        TdCommand::Exact { graph: p } => {
            let g = graph(p)?;
            let (w, td) = decomposition::exact_treewidth_capped(&g, exact_cap(DEFAULT_EXACT_CAP)?)?;
            Ok(Output::json(json!({ "method": "exact", "width": w, "td": td_value(&td) })))
        }
        TdCommand::Heuristic { graph: p } => {
            let g = graph(p)?;
            let (w, td) = decomposition::heuristic_treewidth(&g);
            Ok(Output::json(json!({ "method": "min-fill", "width": w, "td": td_value(&td) })))
        }
        TdCommand::Validate { graph: p, td } => {
            let g = graph(p)?;
            let td = read_td(td)?;
            let verdict = td.validate(&g).err().map(|v| v.to_string());
            Ok(Output::json(json!({
                "valid": verdict.is_none(),
                "violation": verdict,
                "width": td.width(),
            }))
            .failing(verdict.map(|v| format!("invalid tree decomposition: {v}"))))
        }
        TdCommand::Separator { graph: p, td } => {
            let g = graph(p)?;
            let td = match td {
                Some(path) => read_td(path)?,
                None => separators::td_with_cap(&g, exact_cap(DEFAULT_EXACT_CAP)?)?,
            };
            let sep = decomposition::separator_from_td(&g, &td)?;
            let limit = decomposition::balance_limit(g.n());
            let bounds = vec![
                BoundCheck::at_most("|separator| <= width + 1", sep.order(), td.width() + 1),
                BoundCheck::at_most("|strict side 1| <= ceil(2n/3)", sep.strict1(), limit),
                BoundCheck::at_most("|strict side 2| <= ceil(2n/3)", sep.strict2(), limit),
            ];
            let violation = bounds_violation(&bounds);
            Ok(Output::json(json!({ "separation": sep, "width": td.width(), "bounds": bounds })).failing(violation))
        }
    }
}

fn separate(cmd: &SeparateCommand, graph: &GraphReader) -> CmdResult {
    match cmd {
        SeparateCommand::Layered { graph: p, h_td } => {
            let g = graph(p)?;
            let h_td = read_td(h_td)?;
            let report = separators::layered_deletion(&g, &h_td)?;
            let violation = bounds_violation(&report.bounds);
            Ok(Output::json(report).failing(violation))
        }
        SeparateCommand::Combined {
            graph: p,
            g1,
            g2,
            beta,
            growth,
            seed,
            max_draws,
        } => {
            let (g, g1, g2) = (graph(p)?, graph(g1)?, graph(g2)?);
            let cap = exact_cap(DEFAULT_EXACT_CAP)?;
            let mut params = CombinedParams::new(GrowthPoly::grid(growth.growth_c), *beta, *seed);
            params.max_draws = *max_draws;
            let provider = move |h: &Graph| separators::td_with_cap(h, cap);
            let report = separators::combined_separator(&g, &g1, &g2, &params, &provider)?;
            let violation = bounds_violation(&report.bounds);
            Ok(Output::json(report).failing(violation))
        }
    }
}

fn distribution_value(d: &LocalisingDistribution) -> Value {
    json!({
        "r": d.r(),
        "p": d.p().to_string(),
        "q": d.q().to_string(),
        "f": d.f().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "sum": d.sum().to_string(),
        "valid": d.is_valid(),
    })
}

fn localise_cmd(cmd: &LocaliseCommand, graph: &GraphReader) -> CmdResult {
    match cmd {
        LocaliseCommand::Sample { graph: p, r, p: prob, q, seed } => {
            let g = graph(p)?;
            let dist = LocalisingDistribution::from_f64(*r, *prob, *q)?;
            let set = localise::sample_localising(&g, &dist, *seed)?;
            let check = set.verify(&g).err();
            Ok(Output::json(json!({
                "seed": seed,
                "distribution": distribution_value(&dist),
                "members": set.members,
                "certificate": set.certificate,
                "certified": check.is_none(),
            }))
            .failing(check))
        }
        LocaliseCommand::Fragment {
            graph: p,
            r,
            weights,
            growth,
            seed,
            max_draws,
        } => {
            let g = graph(p)?;
            let w: Vec<u64> = match weights {
                Some(path) => read_json(path)?,
                None => vec![1; g.n()],
            };
            let poly = GrowthPoly::grid(growth.growth_c);
            let frag = localise::weighted_fragment(&g, &w, *r, &poly, *seed, *max_draws)?;
            let bounds = vec![
                BoundCheck::at_most(
                    "w(X)^2 r <= 4 w(V)^2",
                    frag.weight as u128 * frag.weight as u128 * *r as u128,
                    4 * frag.total_weight as u128 * frag.total_weight as u128,
                ),
                BoundCheck {
                    name: "largest component <= g(r)".into(),
                    lhs: frag.largest_component.to_string(),
                    rhs: frag.growth_at_r.clone(),
                    holds: frag.component_bound_holds(),
                },
            ];
            let violation = bounds_violation(&bounds);
            Ok(Output::json(json!({ "fragment": frag, "bounds": bounds })).failing(violation))
        }
        LocaliseCommand::Distribution { r, p, q } => {
            let dist = LocalisingDistribution::from_f64(*r, *p, *q)?;
            Ok(Output::json(distribution_value(&dist)))
        }
        LocaliseCommand::R0 { c } => {
            let r0 = localise::min_valid_radius(*c)?;
            Ok(Output::json(json!({
                "c": c,
                "r0": r0,
                "condition_at_r0": localise::radius_condition(r0, *c),
                "condition_at_r0_minus_1": localise::radius_condition(r0 - 1, *c),
                "distribution_valid_at_r0": LocalisingDistribution::for_exponent(r0, *c)?.is_valid(),
            })))
        }
    }
}

fn read_order(path: &Path) -> Result<VertexOrdering, Failure> {
    let order: Vec<usize> = read_json(path)?;
    Ok(VertexOrdering::new(order)?)
}

fn colr(cmd: &ColrCommand, graph: &GraphReader) -> CmdResult {
    match cmd {
        ColrCommand::Eval { graph: p, order, r } => {
            let g = graph(p)?;
            let ord = read_order(order)?;
            let value = colouring::eval_colr(&g, &ord, *r)?;
            Ok(Output::json(json!({ "r": r, "value": value })))
        }
        ColrCommand::Exact { graph: p, r } => {
            let g = graph(p)?;
            let (value, ord) = colouring::exact_colr_capped(&g, *r, exact_cap(DEFAULT_COLR_CAP)?)?;
            Ok(Output::json(json!({ "r": r, "value": value, "order": ord.order() })))
        }
        ColrCommand::Product { graph: p, order, h, r } => {
            let (g, h) = (graph(p)?, graph(h)?);
            let ord = read_order(order)?;
            let prod = product::strong_product(&g, &h)?;
            let pord = colouring::product_ordering(&ord, &h);
            let lhs = colouring::eval_colr(&prod, &pord, *r)?;
            let base = colouring::eval_colr(&g, &ord, *r)?;
            let factor = (h.max_degree() as u128 + 2).checked_pow(*r as u32).unwrap_or(u128::MAX);
            let bounds = vec![BoundCheck::below(
                "col(G x H) < col(G) (Delta(H)+2)^r",
                lhs as u128,
                (base as u128).saturating_mul(factor),
            )];
            let violation = bounds_violation(&bounds);
            Ok(Output::json(json!({
                "r": r,
                "order": pord.order(),
                "value": lhs,
                "base_value": base,
                "bounds": bounds,
            }))
            .failing(violation))
        }
    }
}

fn read_system(path: &Path) -> Result<ShortcutSystem, Failure> {
    ShortcutSystem::from_json(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn shortcut(cmd: &ShortcutCommand, graph: &GraphReader) -> CmdResult {
    match cmd {
        ShortcutCommand::Power { graph: p, k } => {
            let g = graph(p)?;
            let sys = shortcuts::power_shortcut_system(&g, *k);
            let usage = sys.usage(g.n());
            let max_usage = usage.iter().copied().max().unwrap_or(0);
            let longest = sys.paths.iter().map(|p| p.len() - 1).max().unwrap_or(0);
            let bounds = vec![
                BoundCheck::at_most("max internal usage <= 2k Delta^k", max_usage, sys.d),
                BoundCheck::at_most("longest path <= k", longest, sys.k),
            ];
            let violation = bounds_violation(&bounds);
            Ok(Output::json(json!({ "system": sys, "usage": usage, "bounds": bounds })).failing(violation))
        }
        ShortcutCommand::Apply { graph: p, system, emit } => {
            let g = graph(p)?;
            let sys = read_system(system)?;
            Ok(emit_graph(&shortcuts::apply_shortcuts(&g, &sys)?, *emit))
        }
        ShortcutCommand::Validate { graph: p, system } => {
            let g = graph(p)?;
            let sys = read_system(system)?;
            let verdict = shortcuts::validate_shortcuts(&g, &sys).err().map(|v| v.to_string());
            Ok(Output::json(json!({
                "valid": verdict.is_none(),
                "violation": verdict,
                "usage": sys.usage(g.n()),
            }))
            .failing(verdict.map(|v| format!("invalid shortcut system: {v}"))))
        }
    }
}

fn geo(cmd: &GeoCommand, points: &dyn Fn(&Path) -> Result<PointSet, Failure>) -> CmdResult {
    match cmd {
        GeoCommand::Udg { points: p, emit } => Ok(emit_graph(&geometry::unit_disc_graph(&points(p)?), *emit)),
        GeoCommand::Knn { points: p, k, emit } => Ok(emit_graph(&geometry::knn_graph(&points(p)?, *k)?, *emit)),
        GeoCommand::Embed { points: p, k } => {
            let ps = points(p)?;
            let emb = geometry::embed_unit_disc(&ps, *k)?;
            let g = geometry::unit_disc_graph(&ps);
            let check = emb.verify(&g).err();
            let bounds = vec![
                BoundCheck::at_most("max cell occupancy <= t", emb.max_cell_occupancy(), emb.t),
                BoundCheck::at_most("max sub-cube occupancy <= k", emb.max_subcube_occupancy, emb.k),
            ];
            let violation = check.or_else(|| bounds_violation(&bounds));
            Ok(Output::json(json!({ "embedding": emb, "edges": g.num_edges(), "bounds": bounds })).failing(violation))
        }
    }
}
