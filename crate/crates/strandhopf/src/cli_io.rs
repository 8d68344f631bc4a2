//! JSON documents for graphs and theories, the command-line interface and the
//! DOT exporter.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::graph_core::{self, GraphError, OneGraph, RawStrand, RawTwoGraph, TwoGraph};
use crate::models::{self, Theory, WeightRule};
use crate::{hopf, iso, rewrite, series};

/// Errors of the document layer and the CLI, each with a stable kind string.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    InvalidGraph(String),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("{0}")]
    Computation(String),
    #[error("{0}")]
    Usage(String),
}

impl IoError {
    pub fn kind(&self) -> &'static str {
        match self {
            IoError::Io(_) => "io",
            IoError::Parse(_) => "parse",
            IoError::InvalidGraph(_) => "invalid_graph",
            IoError::InvalidArgument(_) => "invalid_argument",
            IoError::Computation(_) => "computation",
            IoError::Usage(_) => "usage",
        }
    }

    /// Machine-readable form written to stderr.
    pub fn to_json(&self) -> String {
        json!({"error": {"kind": self.kind(), "message": self.to_string()}}).to_string()
    }
}

impl From<GraphError> for IoError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::UnknownEdge(_) | GraphError::UnknownVertex(_) => IoError::InvalidArgument(e.to_string()),
            GraphError::Invalid(_) | GraphError::InvalidOneGraph(_) => IoError::InvalidGraph(e.to_string()),
            _ => IoError::Computation(e.to_string()),
        }
    }
}

pub type IoResult<T> = Result<T, IoError>;

// ---------------------------------------------------------------------------
// graph documents
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfEdgeDoc {
    pub id: String,
    pub vertex: String,
}

fn is_zero(c: &u32) -> bool {
    *c == 0
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrandDoc {
    pub id: String,
    pub half_edge: String,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub colour: u32,
}

/// JSON form of a 2-graph; fixed points of `iota` and `sigma2` are omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub vertices: Vec<String>,
    pub half_edges: Vec<HalfEdgeDoc>,
    pub strands: Vec<StrandDoc>,
    #[serde(default)]
    pub iota: Vec<[String; 2]>,
    pub sigma1: Vec<[String; 2]>,
    #[serde(default)]
    pub sigma2: Vec<[String; 2]>,
}

fn pairs_in(v: &[[String; 2]]) -> Vec<(String, String)> {
    v.iter().map(|[a, b]| (a.clone(), b.clone())).collect()
}

fn pairs_out(v: &[(String, String)]) -> Vec<[String; 2]> {
    v.iter().map(|(a, b)| [a.clone(), b.clone()]).collect()
}

impl GraphDocument {
    pub fn to_raw(&self) -> RawTwoGraph {
        RawTwoGraph {
            vertices: self.vertices.clone(),
            half_edges: self.half_edges.iter().map(|h| (h.id.clone(), h.vertex.clone())).collect(),
            strands: self
                .strands
                .iter()
                .map(|s| RawStrand { id: s.id.clone(), half_edge: s.half_edge.clone(), colour: s.colour })
                .collect(),
            iota: pairs_in(&self.iota),
            sigma1: pairs_in(&self.sigma1),
            sigma2: pairs_in(&self.sigma2),
        }
    }

    pub fn from_graph(g: &TwoGraph) -> Self {
        let raw = g.to_raw();
        GraphDocument {
            vertices: raw.vertices,
            half_edges: raw.half_edges.into_iter().map(|(id, vertex)| HalfEdgeDoc { id, vertex }).collect(),
            strands: raw
                .strands
                .into_iter()
                .map(|s| StrandDoc { id: s.id, half_edge: s.half_edge, colour: s.colour })
                .collect(),
            iota: pairs_out(&raw.iota),
            sigma1: pairs_out(&raw.sigma1),
            sigma2: pairs_out(&raw.sigma2),
        }
    }

    pub fn to_graph(&self) -> IoResult<TwoGraph> {
        Ok(TwoGraph::from_raw(&self.to_raw())?)
    }
}

pub fn parse_document(text: &str) -> IoResult<GraphDocument> {
    serde_json::from_str(text).map_err(|e| IoError::Parse(format!("graph document: {e}")))
}

/// Parses and validates a graph document.
pub fn parse_graph(text: &str) -> IoResult<TwoGraph> {
    parse_document(text)?.to_graph()
}

/// Pretty JSON with a trailing newline; stable for a given labelled graph.
pub fn graph_to_json(g: &TwoGraph) -> String {
    let mut s = serde_json::to_string_pretty(&GraphDocument::from_graph(g)).expect("serializable");
    s.push('\n');
    s
}

/// Single-line JSON, as used in NDJSON streams.
pub fn graph_to_json_line(g: &TwoGraph) -> String {
    serde_json::to_string(&GraphDocument::from_graph(g)).expect("serializable")
}

pub fn read_graph(path: &Path) -> IoResult<TwoGraph> {
    parse_graph(&read_file(path)?)
}

fn read_file(path: &Path) -> IoResult<String> {
    std::fs::read_to_string(path).map_err(|e| IoError::Io(format!("{}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// 1-graph and theory documents
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneHalfEdgeDoc {
    pub id: String,
    pub vertex: String,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub colour: u32,
}

/// JSON form of a 1-graph; unpaired half-edges are external legs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneGraphDocument {
    pub vertices: Vec<String>,
    pub half_edges: Vec<OneHalfEdgeDoc>,
    #[serde(default)]
    pub pairs: Vec<[String; 2]>,
}

impl OneGraphDocument {
    pub fn from_graph(g: &OneGraph) -> Self {
        let he = g.half_edges();
        OneGraphDocument {
            vertices: g.vertices().to_vec(),
            half_edges: (0..he.len())
                .map(|h| OneHalfEdgeDoc {
                    id: he[h].clone(),
                    vertex: g.vertices()[g.attach()[h]].clone(),
                    colour: g.colours()[h],
                })
                .collect(),
            pairs: (0..he.len())
                .filter(|&h| g.pairing()[h] > h)
                .map(|h| [he[h].clone(), he[g.pairing()[h]].clone()])
                .collect(),
        }
    }

    pub fn to_graph(&self) -> IoResult<OneGraph> {
        let hs = self.half_edges.iter().map(|h| (h.id.clone(), h.vertex.clone(), h.colour)).collect();
        Ok(OneGraph::new(self.vertices.clone(), hs, &pairs_in(&self.pairs))?)
    }
}

pub fn parse_one_graph(text: &str) -> IoResult<OneGraph> {
    let doc: OneGraphDocument =
        serde_json::from_str(text).map_err(|e| IoError::Parse(format!("1-graph document: {e}")))?;
    doc.to_graph()
}

/// A rational written as a JSON integer or a string such as `"-3/2"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalDoc {
    Int(i64),
    Text(String),
}

impl RationalDoc {
    fn parse(&self) -> IoResult<BigRational> {
        match self {
            RationalDoc::Int(n) => Ok(BigRational::from_integer(BigInt::from(*n))),
            RationalDoc::Text(s) => parse_rational(s),
        }
    }

    fn from_rational(q: &BigRational) -> Self {
        if q.is_integer() {
            if let Ok(n) = q.to_integer().to_string().parse::<i64>() {
                return RationalDoc::Int(n);
            }
        }
        RationalDoc::Text(q.to_string())
    }
}

pub fn parse_rational(s: &str) -> IoResult<BigRational> {
    let bad = || IoError::Parse(format!("not a rational number: `{s}`"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => {
            (n.trim().parse::<BigInt>().map_err(|_| bad())?, d.trim().parse::<BigInt>().map_err(|_| bad())?)
        }
        None => (s.trim().parse::<BigInt>().map_err(|_| bad())?, BigInt::from(1)),
    };
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedGraphDoc {
    pub graph: OneGraphDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<RationalDoc>,
}

/// JSON form of a theory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoryDocument {
    #[serde(default)]
    pub name: String,
    pub dimension: u32,
    pub zeta: RationalDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<u32>,
    pub rule: String,
    #[serde(default)]
    pub orientable_only: bool,
    pub propagators: Vec<WeightedGraphDoc>,
    pub vertices: Vec<WeightedGraphDoc>,
}

impl TheoryDocument {
    pub fn from_theory(t: &Theory) -> Self {
        let rule = match t.rule {
            WeightRule::Explicit => "explicit",
            WeightRule::Matrix => "matrix",
            WeightRule::Tensorial => "tensorial",
        };
        TheoryDocument {
            name: t.name.clone(),
            dimension: t.dimension,
            zeta: RationalDoc::from_rational(&t.zeta),
            rank: t.rank,
            rule: rule.into(),
            orientable_only: t.orientable_only,
            propagators: t
                .propagators
                .iter()
                .map(|(g, w)| WeightedGraphDoc {
                    graph: OneGraphDocument::from_graph(g),
                    weight: Some(RationalDoc::from_rational(w)),
                })
                .collect(),
            vertices: t
                .vertices
                .iter()
                .map(|(g, w)| WeightedGraphDoc {
                    graph: OneGraphDocument::from_graph(g),
                    weight: w.as_ref().map(RationalDoc::from_rational),
                })
                .collect(),
        }
    }

    pub fn to_theory(&self) -> IoResult<Theory> {
        let rule = match self.rule.as_str() {
            "explicit" => WeightRule::Explicit,
            "matrix" => WeightRule::Matrix,
            "tensorial" => WeightRule::Tensorial,
            other => return Err(IoError::Parse(format!("unknown weight rule `{other}`"))),
        };
        let mut propagators = Vec::new();
        for p in &self.propagators {
            let w = p.weight.as_ref().ok_or_else(|| IoError::Parse("propagators need a weight".into()))?;
            propagators.push((p.graph.to_graph()?, w.parse()?));
        }
        let mut vertices = Vec::new();
        for v in &self.vertices {
            vertices.push((v.graph.to_graph()?, v.weight.as_ref().map(|w| w.parse()).transpose()?));
        }
        let t = Theory {
            name: self.name.clone(),
            propagators,
            vertices,
            dimension: self.dimension,
            zeta: self.zeta.parse()?,
            rank: self.rank,
            rule,
            orientable_only: self.orientable_only,
        };
        t.check().map_err(|e| IoError::InvalidArgument(e.to_string()))?;
        Ok(t)
    }
}

pub fn theory_to_json(t: &Theory) -> String {
    let mut s = serde_json::to_string_pretty(&TheoryDocument::from_theory(t)).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_theory(text: &str) -> IoResult<Theory> {
    let doc: TheoryDocument =
        serde_json::from_str(text).map_err(|e| IoError::Parse(format!("theory document: {e}")))?;
    doc.to_theory()
}

/// A preset name or the path of a theory document.
pub fn load_theory(name_or_path: &str) -> IoResult<Theory> {
    if Theory::PRESETS.contains(&name_or_path) {
        return Ok(Theory::preset(name_or_path)?);
    }
    let path = Path::new(name_or_path);
    if path.exists() {
        return parse_theory(&read_file(path)?);
    }
    Err(IoError::InvalidArgument(format!("unknown theory `{name_or_path}` (presets: {})", Theory::PRESETS.join(", "))))
}

// ---------------------------------------------------------------------------
// DOT export
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DotMode {
    /// One node per strand section, grouped by half-edge and vertex.
    Stranded,
    /// One node per half-edge; vertex graphs drawn inside vertex clusters.
    Vertexgraph,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn to_dot(g: &TwoGraph, mode: DotMode) -> String {
    let mut out = String::from("graph G {\n  compound=true;\n  node [shape=point];\n");
    let by_vertex = g.half_edges_by_vertex();
    let by_half_edge = g.strands_by_half_edge();
    let hnode = |h: usize| quote(&format!("h:{}", g.half_edges()[h]));
    let snode = |s: usize| quote(&format!("s:{}", g.strands()[s]));
    for (v, hs) in by_vertex.iter().enumerate() {
        let _ = writeln!(
            out,
            "  subgraph {} {{\n    label={};",
            quote(&format!("cluster_v_{}", g.vertices()[v])),
            quote(&g.vertices()[v])
        );
        for &h in hs {
            match mode {
                DotMode::Stranded => {
                    let _ = writeln!(
                        out,
                        "    subgraph {} {{\n      label={};\n      style=dotted;",
                        quote(&format!("cluster_h_{}", g.half_edges()[h])),
                        quote(&g.half_edges()[h])
                    );
                    for &s in &by_half_edge[h] {
                        let _ = writeln!(out, "      {};", snode(s));
                    }
                    out.push_str("    }\n");
                }
                DotMode::Vertexgraph => {
                    let _ = writeln!(out, "    {} [shape=circle, label={}];", hnode(h), quote(&g.half_edges()[h]));
                }
            }
        }
        out.push_str("  }\n");
    }
    let mu = g.mu();
    for s in 0..g.num_strands() {
        let t = g.sigma1()[s];
        if t > s {
            match mode {
                DotMode::Stranded => {
                    let _ = writeln!(out, "  {} -- {};", snode(s), snode(t));
                }
                DotMode::Vertexgraph => {
                    let c = g.colours()[s];
                    let label = if c > 0 { format!(" [label=\"{c}\"]") } else { String::new() };
                    let _ = writeln!(out, "  {} -- {}{label};", hnode(mu[s]), hnode(mu[t]));
                }
            }
        }
    }
    for (a, b) in g.edges() {
        match mode {
            DotMode::Stranded => {
                for &s in &by_half_edge[a] {
                    let t = g.sigma2()[s];
                    if t != s {
                        let _ = writeln!(out, "  {} -- {} [style=dashed];", snode(s), snode(t));
                    }
                }
            }
            DotMode::Vertexgraph => {
                let _ = writeln!(out, "  {} -- {} [color=\"black:invis:black\"];", hnode(a), hnode(b));
            }
        }
    }
    out.push_str("}\n");
    out
}

// ---------------------------------------------------------------------------
// CLI
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Parser, Debug)]
#[command(name = "strandhopf", version, about = "2-graphs, their contraction Hopf algebra and power counting")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a graph document against the 2-graph axioms (exit 1 if invalid).
    Validate { file: String },
    /// Structural data, symmetry and degrees of a graph.
    Info {
        file: String,
        #[arg(long)]
        theory: Option<String>,
    },
    /// Contract the listed edges (`e1,e2`, 1-based, or half-edge labels).
    Contract {
        file: String,
        #[arg(long, value_delimiter = ',', required = true)]
        edges: Vec<String>,
    },
    /// Coproduct terms of a graph.
    Coproduct { file: String },
    /// Antipode terms of a graph.
    Antipode { file: String },
    /// Power counting and divergence per connected component.
    Classify {
        file: String,
        #[arg(long)]
        theory: String,
    },
    /// Stream enumerated graph classes as NDJSON graph documents.
    Enumerate {
        #[arg(long)]
        theory: String,
        #[arg(long)]
        max_edges: usize,
        #[arg(long)]
        connected: bool,
        /// 1-graph document; keeps graphs with this boundary.
        #[arg(long)]
        boundary: Option<String>,
        #[arg(long, default_value_t = series::DEFAULT_MAX_COMPONENTS)]
        max_components: usize,
    },
    /// Coefficient-wise check of the central identity (exit 1 on FAIL).
    CentralCheck {
        #[arg(long)]
        theory: String,
        #[arg(long)]
        max_edges: usize,
        #[arg(long, default_value_t = series::DEFAULT_MAX_COMPONENTS)]
        max_components: usize,
        #[arg(long)]
        bridgeless: bool,
    },
    /// Render a graph as DOT.
    ExportDot {
        file: String,
        #[arg(long, value_enum, default_value = "stranded")]
        mode: DotMode,
    },
    /// Print the JSON document of a theory (preset name or file).
    Theory { theory: String },
}

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

fn configure_threads() -> IoResult<()> {
    if let Ok(v) = std::env::var("STRANDHOPF_THREADS") {
        let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            IoError::InvalidArgument(format!("STRANDHOPF_THREADS must be a positive integer, got `{v}`"))
        })?;
        // a global pool may already exist when called repeatedly in-process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Runs the CLI and returns the exit code; all output goes to the writers.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            let _ = writeln!(err, "{}", IoError::Usage(first).to_json());
            return EXIT_ERROR;
        }
    };
    match configure_threads().and_then(|_| execute(&cli, out)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", e.to_json());
            EXIT_ERROR
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> IoResult<()> {
    out.write_all(text.as_bytes()).map_err(|e| IoError::Io(e.to_string()))
}

fn emit_json(out: &mut dyn Write, v: &Value) -> IoResult<()> {
    emit(out, &format!("{}\n", serde_json::to_string_pretty(v).expect("serializable")))
}

fn table(rows: &[(String, String)]) -> String {
    let w = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
}

fn value_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Flat `key value` rendering of a JSON object.
fn object_table(v: &Value) -> String {
    let rows: Vec<(String, String)> = match v {
        Value::Object(m) => m.iter().map(|(k, x)| (k.clone(), value_cell(x))).collect(),
        other => vec![(String::new(), value_cell(other))],
    };
    table(&rows)
}

fn emit_value(out: &mut dyn Write, format: Format, v: &Value) -> IoResult<()> {
    match format {
        Format::Json => emit_json(out, v),
        Format::Table => emit(out, &object_table(v)),
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> IoResult<i32> {
    let format = cli.format;
    match &cli.command {
        Command::Validate { file } => {
            let doc = parse_document(&read_file(Path::new(file))?)?;
            let report = doc.to_raw().validate();
            let v = json!({
                "valid": report.is_valid(),
                "violations": report
                    .violations
                    .iter()
                    .map(|x| json!({"axiom": x.axiom.reason(), "detail": x.detail}))
                    .collect::<Vec<_>>(),
            });
            match format {
                Format::Json => emit_json(out, &v)?,
                Format::Table => {
                    let mut rows = vec![("valid".to_string(), report.is_valid().to_string())];
                    rows.extend(report.violations.iter().map(|x| (x.axiom.reason().to_string(), x.detail.clone())));
                    emit(out, &table(&rows))?;
                }
            }
            Ok(if report.is_valid() { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Info { file, theory } => {
            let g = read_graph(Path::new(file))?;
            let t = theory.as_deref().map(load_theory).transpose()?;
            emit_value(out, format, &info(&g, t.as_ref())?)?;
            Ok(EXIT_OK)
        }
        Command::Contract { file, edges } => {
            let g = read_graph(Path::new(file))?;
            let ids: Vec<&str> = edges.iter().map(|s| s.trim()).collect();
            let q = rewrite::contract_edges(&g, &ids)?;
            emit(out, &graph_to_json(&q))?;
            Ok(EXIT_OK)
        }
        Command::Coproduct { file } => {
            let g = read_graph(Path::new(file))?;
            let rows = hopf::tensor_rows(&hopf::coproduct_graph(&g));
            emit_terms(out, format, &g, serde_json::to_value(&rows).expect("serializable"))?;
            Ok(EXIT_OK)
        }
        Command::Antipode { file } => {
            let g = read_graph(Path::new(file))?;
            let rows = hopf::element_rows(&hopf::antipode_graph(&g));
            emit_terms(out, format, &g, serde_json::to_value(&rows).expect("serializable"))?;
            Ok(EXIT_OK)
        }
        Command::Classify { file, theory } => {
            let g = read_graph(Path::new(file))?;
            let t = load_theory(theory)?;
            let report = models::classify(&t, &g)?;
            match format {
                Format::Json => emit_json(out, &serde_json::to_value(&report).expect("serializable"))?,
                Format::Table => {
                    let mut s = String::from("component  omega_sd  E  V  V_bd  K_bd  bridgeless  divergent\n");
                    for (i, c) in report.components.iter().enumerate() {
                        let _ = writeln!(
                            s,
                            "{i:<9}  {:<8}  {}  {}  {:<4}  {:<4}  {:<10}  {}",
                            c.omega_sd,
                            c.edges,
                            c.vertices,
                            c.boundary_vertices,
                            c.boundary_components,
                            c.bridgeless,
                            c.divergent
                        );
                    }
                    emit(out, &s)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Enumerate { theory, max_edges, connected, boundary, max_components } => {
            let t = load_theory(theory)?;
            if *max_edges > series::MAX_CENTRAL_EDGES {
                return Err(IoError::InvalidArgument(format!(
                    "max-edges {max_edges} exceeds the supported bound {}",
                    series::MAX_CENTRAL_EDGES
                )));
            }
            let b = boundary.as_deref().map(|p| parse_one_graph(&read_file(Path::new(p))?)).transpose()?;
            let classes = series::enumerate_with_components(&t, *max_edges, *connected, b.as_ref(), *max_components);
            let mut s = String::new();
            if format == Format::Table {
                s.push_str("edges  automorphisms  code\n");
            }
            for c in &classes {
                match format {
                    Format::Json => {
                        s.push_str(&graph_to_json_line(&c.graph));
                        s.push('\n');
                    }
                    Format::Table => {
                        let _ = writeln!(s, "{:<5}  {:<13}  {}", c.edges, c.automorphisms, c.code.to_hex());
                    }
                }
            }
            emit(out, &s)?;
            Ok(EXIT_OK)
        }
        Command::CentralCheck { theory, max_edges, max_components, bridgeless } => {
            let t = load_theory(theory)?;
            let opts = series::CentralOptions {
                max_edges: *max_edges,
                max_components: *max_components,
                bridgeless: *bridgeless,
            };
            let r = series::check_central_identity_with(&t, opts)?;
            let first = r.mismatches().next().cloned();
            let v = json!({
                "theory": r.theory,
                "max_edges": r.max_edges,
                "max_components": r.max_components,
                "bridgeless": r.bridgeless,
                "result": if r.pass { "PASS" } else { "FAIL" },
                "pairs_checked": r.pairs.len(),
                "mismatches": r.mismatches().count(),
                "multi_trace_right_factors": r.multi_trace_right_factors,
                "first_mismatch": first,
            });
            emit_value(out, format, &v)?;
            Ok(if r.pass { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::ExportDot { file, mode } => {
            let g = read_graph(Path::new(file))?;
            emit(out, &to_dot(&g, *mode))?;
            Ok(EXIT_OK)
        }
        Command::Theory { theory } => {
            emit(out, &theory_to_json(&load_theory(theory)?))?;
            Ok(EXIT_OK)
        }
    }
}

fn emit_terms(out: &mut dyn Write, format: Format, g: &TwoGraph, rows: Value) -> IoResult<()> {
    match format {
        Format::Json => emit_json(out, &json!({"graph": iso::canonical_form(g).to_hex(), "terms": rows})),
        Format::Table => {
            let mut s = String::new();
            for r in rows.as_array().expect("term list") {
                let side = |k: &str, inv: &str| -> String {
                    let mut parts: Vec<String> =
                        r[k].as_array().map(|a| a.iter().map(value_cell).collect()).unwrap_or_default();
                    if let Some(a) = r.get(inv).and_then(|x| x.as_array()) {
                        parts.extend(a.iter().map(|x| format!("inv({})", value_cell(x))));
                    }
                    if parts.is_empty() {
                        "1".into()
                    } else {
                        parts.join("*")
                    }
                };
                let _ = write!(s, "{}\t{}", value_cell(&r["coefficient"]), side("left", "left_inverses"));
                if r.get("right").is_some() {
                    let _ = write!(s, "\t{}", side("right", "right_inverses"));
                }
                s.push('\n');
            }
            emit(out, &s)
        }
    }
}

/// Summary used by `info`.
pub fn info(g: &TwoGraph, theory: Option<&Theory>) -> IoResult<Value> {
    let (internal, external) = g.faces();
    let (code, aut) = iso::canonical_form_with_aut(g);
    let mut v = json!({
        "vertices": g.num_vertices(),
        "half_edges": g.num_half_edges(),
        "strands": g.num_strands(),
        "edges": g.num_edges(),
        "external_legs": g.external_half_edges().len(),
        "components": g.num_components(),
        "internal_faces": internal.len(),
        "external_faces": external.len(),
        "euler_characteristic": g.euler_characteristic(),
        "orientable": graph_core::is_orientable(g),
        "bridgeless": g.is_bridgeless(),
        "canonical_code": code.to_hex(),
        "automorphisms": aut.to_string(),
        "boundary_code": iso::canonical_form_one(&g.boundary()).to_hex(),
    });
    let m = v.as_object_mut().expect("object");
    if g.is_connected() && g.is_map_class() {
        if let Ok(k) = models::genus(g) {
            m.insert("genus".into(), json!(k));
        }
    }
    if g.is_connected() && g.coloured_rank().is_some_and(|r| r >= 2) {
        m.insert("gurau".into(), serde_json::to_value(models::gurau_degrees(g)?).expect("serializable"));
    }
    if let Some(t) = theory {
        m.insert("theory".into(), json!(t.name));
        m.insert("omega_sd".into(), json!(models::superficial_degree(t, g)?.to_string()));
        m.insert("divergent".into(), json!(models::is_divergent(t, g)?));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn graph_round_trip_is_byte_identical() {
        for (name, g) in fixtures::corpus() {
            let text = graph_to_json(&g);
            let back = parse_graph(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(back, g, "{name}");
            assert_eq!(graph_to_json(&back), text, "{name}");
        }
    }

    #[test]
    fn colour_is_optional() {
        let text = r#"{"vertices":["v"],"half_edges":[{"id":"h","vertex":"v"},{"id":"k","vertex":"v"}],
            "strands":[{"id":"a","half_edge":"h"},{"id":"b","half_edge":"k"}],
            "iota":[["h","k"]],"sigma1":[["a","b"]],"sigma2":[["a","b"]]}"#;
        let g = parse_graph(text).unwrap();
        assert_eq!(g.num_edges(), 1);
        assert!(!graph_to_json(&g).contains("colour"));
    }

    #[test]
    fn invalid_documents() {
        assert_eq!(parse_graph("{").unwrap_err().kind(), "parse");
        assert_eq!(
            parse_graph(r#"{"vertices":[],"half_edges":[],"strands":[],"sigma1":[],"extra":1}"#).unwrap_err().kind(),
            "parse"
        );
        let bad = r#"{"vertices":["v"],"half_edges":[{"id":"h","vertex":"w"}],"strands":[],"sigma1":[]}"#;
        assert_eq!(parse_graph(bad).unwrap_err().kind(), "invalid_graph");
    }

    #[test]
    fn theory_round_trip() {
        for name in Theory::PRESETS {
            let t = Theory::preset(name).unwrap();
            let text = theory_to_json(&t);
            let back = parse_theory(&text).unwrap();
            assert_eq!(theory_to_json(&back), text);
            assert_eq!(back.zeta, t.zeta);
            assert_eq!(back.vertices.len(), t.vertices.len());
        }
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn dot_modes() {
        let g = fixtures::fish(false);
        let s = to_dot(&g, DotMode::Stranded);
        assert!(s.starts_with("graph G {") && s.contains("style=dashed"));
        let v = to_dot(&g, DotMode::Vertexgraph);
        assert!(v.contains("shape=circle"));
        assert_eq!(to_dot(&g, DotMode::Stranded), s);
    }

    #[test]
    fn usage_errors_are_json() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["strandhopf", "bogus"], &mut o, &mut e), EXIT_ERROR);
        let v: Value = serde_json::from_slice(&e).unwrap();
        assert_eq!(v["error"]["kind"], "usage");
    }
}
