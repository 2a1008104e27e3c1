use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use surfcover::covers::io::{parse_cover, parse_voltage, write_cover};
use surfcover::covers::{
    cover_add_triangle_edge, cover_contract_edge, cover_delete_edge, cover_delete_vertex, derived_cover,
    orientation_double_cover, verify_cover, CoverError, CoverMap,
};
use surfcover::embedding::io::{parse_embedding, write_embedding};
use surfcover::embedding::{is_planar, min_euler_genus_with, EmbeddingError, GenusOptions, Planarity, DEFAULT_TRACE_BUDGET};
use surfcover::families::{generate, reduce_to_k5_form, FamilyError, FamilyInstance, FamilySpec};
use surfcover::graph::io::{comments, parse_graph, parse_graphs, to_dot, write_graph, write_graph_with_comments};
use surfcover::graph::{EdgeId, GraphError, MultiGraph, VertexId};
use surfcover::minors::{
    contains_minor, extract_family_minor, tree_path_or_subtree, verify_yminor_certificate, CertError, ExtractError,
    MinorError, TreeLemmaError, TreeOutcome, DEFAULT_MINOR_BUDGET,
};
use surfcover::search::{decide_toy, run_search, Filter, SearchError, SearchOptions, SearchSpec};
use surfcover::theorems::{embedding_genus, ply_bound, validate_embedded_cover, BoundFamily, TheoremError};

use crate::{Cli, Command, Output};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Budget(_) => 3,
            _ => 2,
        }
    }
}

macro_rules! input_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Input(e.to_string())
            }
        }
    )*};
}
input_errors!(GraphError, CoverError, FamilyError, CertError, ExtractError, TreeLemmaError, TheoremError);

impl From<EmbeddingError> for CliError {
    fn from(e: EmbeddingError) -> Self {
        match e {
            EmbeddingError::Budget { .. } => CliError::Budget(e.to_string()),
            e => CliError::Input(e.to_string()),
        }
    }
}

impl From<MinorError> for CliError {
    fn from(e: MinorError) -> Self {
        match e {
            MinorError::Budget(_) => CliError::Budget(e.to_string()),
            e => CliError::Input(e.to_string()),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::TooLarge { .. } | SearchError::Inconclusive { .. } => CliError::Budget(e.to_string()),
            SearchError::Embedding(e) => e.into(),
            e => CliError::Input(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn read_graph(path: &Path) -> Result<MultiGraph> {
    Ok(parse_graph(&read(path)?)?)
}

/// Writes to the `-o` file, or appends to the report when there is none.
fn emit(out: &Output, text: &str, report: &mut String) -> Result<()> {
    match &out.output {
        Some(p) => write(p, text),
        None => {
            report.push_str(text);
            Ok(())
        }
    }
}

fn family_spec(s: &str) -> Result<FamilySpec> {
    Ok(s.parse::<FamilySpec>()?)
}

fn genus_options(cli: &Cli) -> GenusOptions {
    GenusOptions { seed: cli.seed, jobs: cli.jobs, ..Default::default() }
}

/// Runs one subcommand, printing its report; returns the exit code.
pub fn run(cli: &Cli) -> Result<u8> {
    let mut report = String::new();
    let code = dispatch(cli, &mut report)?;
    print!("{report}");
    Ok(code)
}

fn dispatch(cli: &Cli, r: &mut String) -> Result<u8> {
    match &cli.command {
        Command::Gen { family, out } => {
            let inst = generate(&family_spec(family)?)?;
            if out.output.is_some() {
                let _ = writeln!(r, "vertices={} edges={}", inst.graph.vertex_count(), inst.graph.edge_count());
            }
            emit(out, &write_graph_with_comments(&inst.graph, &inst.annotations()), r)?;
        }
        Command::Genus { graph, budget, exhaustive, out } => {
            let g = read_graph(graph)?;
            let opts = GenusOptions { budget: budget.unwrap_or(DEFAULT_TRACE_BUDGET), exhaustive: *exhaustive, ..genus_options(cli) };
            let res = min_euler_genus_with(&g, &opts)?;
            let _ = writeln!(r, "genus={} lower={} exact={} traces={}", res.genus, res.lower_bound, res.exact, res.traces);
            if out.output.is_some() {
                emit(out, &write_embedding(&res.witness), r)?;
            }
        }
        Command::Planar { graph } => {
            let g = read_graph(graph)?;
            match is_planar(&g) {
                Planarity::Planar(_) => r.push_str("planar=true\n"),
                Planarity::NonPlanar(k) => {
                    let edges: Vec<String> = k.edges.iter().map(|e| e.to_string()).collect();
                    let _ = writeln!(r, "planar=false kuratowski={:?} edges={}", k.kind, edges.join(","));
                    return Ok(1);
                }
            }
        }
        Command::VerifyCover { base, cover } => {
            let b = read_graph(base)?;
            let (c, stated) = parse_cover(&b, &read(cover)?)?;
            match verify_cover(&c) {
                Ok(p) if p == stated => {
                    let _ = writeln!(r, "cover ply={p}");
                }
                Ok(p) => {
                    let _ = writeln!(r, "not a cover: header states ply {stated}, fibres have size {p}");
                    return Ok(1);
                }
                Err(e) => {
                    let _ = writeln!(r, "not a cover: {e}");
                    return Ok(1);
                }
            }
        }
        Command::MakeCover { base, voltage, ply, index, graph_out, out } => {
            let b = read_graph(base)?;
            let (c, p) = match (voltage, ply, index) {
                (Some(v), _, _) => {
                    let va = parse_voltage(&b, &read(v)?)?;
                    (derived_cover(&va), va.ply)
                }
                (None, Some(p), Some(i)) => {
                    let spec = SearchSpec::new(b, *p, Filter::Planar)?;
                    if *i >= spec.size() {
                        return Err(CliError::Usage(format!("index {i} outside 0..{}", spec.size())));
                    }
                    (spec.cover(*i), *p)
                }
                _ => return Err(CliError::Usage("give --voltage, or --ply with --index".into())),
            };
            if let Some(path) = graph_out {
                write(path, &write_graph(&c.cover))?;
            }
            let comps = surfcover::graph::connected_components(&c.cover).len();
            let _ = writeln!(r, "ply={p} vertices={} edges={} components={comps}", c.cover.vertex_count(), c.cover.edge_count());
            if out.output.is_some() {
                emit(out, &write_cover(&c, p), r)?;
            } else {
                r.push_str(&write_cover(&c, p));
            }
        }
        Command::DoubleCover { base, embedding, embedding_out, graph_out, out } => {
            let g = read_graph(base)?;
            let eg = parse_embedding(&g, &read(embedding)?)?;
            let dc = orientation_double_cover(&eg)?;
            let _ = writeln!(
                r,
                "ply=2 genus={} orientable={} connected={}",
                embedding_genus(&dc.embedding),
                dc.embedding.is_orientable(),
                surfcover::graph::is_connected(&dc.map.cover)
            );
            if let Some(path) = embedding_out {
                write(path, &write_embedding(&dc.embedding))?;
            }
            if let Some(path) = graph_out {
                write(path, &write_graph(&dc.map.cover))?;
            }
            if out.output.is_some() {
                emit(out, &write_cover(&dc.map, 2), r)?;
            }
        }
        Command::LiftOp { base, cover, op, ids, base_out, out } => {
            let b = read_graph(base)?;
            let (c, _) = parse_cover(&b, &read(cover)?)?;
            let p = verify_cover(&c)?;
            let lifted = lift_op(&c, op, ids)?;
            let q = verify_cover(&lifted)?;
            debug_assert_eq!(p, q);
            let _ = writeln!(
                r,
                "ply={q} base={}/{} cover={}/{}",
                lifted.base.vertex_count(),
                lifted.base.edge_count(),
                lifted.cover.vertex_count(),
                lifted.cover.edge_count()
            );
            if let Some(path) = base_out {
                write(path, &write_graph(&lifted.base))?;
            }
            if out.output.is_some() {
                emit(out, &write_cover(&lifted, q), r)?;
            }
        }
        Command::Minor { host, pattern, budget } => {
            let h = read_graph(host)?;
            let p = read_graph(pattern)?;
            match contains_minor(&h, &p, budget.unwrap_or(DEFAULT_MINOR_BUDGET))? {
                Some(w) => {
                    r.push_str("minor=true\n");
                    r.push_str(&w.to_text(p.name().unwrap_or("pattern"), h.name().unwrap_or("host")));
                }
                None => {
                    r.push_str("minor=false\n");
                    return Ok(1);
                }
            }
        }
        Command::TreeLemma { tree, marked, k } => {
            let t = read_graph(tree)?;
            let marked: BTreeSet<VertexId> = marked.iter().map(|&v| VertexId(v)).collect();
            let list = |vs: &[VertexId]| vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
            match tree_path_or_subtree(&t, &marked, *k)? {
                TreeOutcome::Path(p) => {
                    let _ = writeln!(r, "path {}", list(&p));
                }
                TreeOutcome::Subtree { vertices, leaves } => {
                    let _ = writeln!(r, "subtree leaves {}", list(&leaves));
                    let _ = writeln!(r, "vertices {}", list(&vertices));
                }
            }
        }
        Command::Extract { host, copies, k } => {
            let h = read_graph(host)?;
            let text = read(copies)?;
            let mut list = Vec::new();
            for (i, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap().trim();
                if line.is_empty() {
                    continue;
                }
                let copy: std::result::Result<Vec<VertexId>, _> = line.split_whitespace().map(|s| s.parse().map(VertexId)).collect();
                list.push(copy.map_err(|_| CliError::Input(format!("{}:{}: bad vertex", copies.display(), i + 1)))?);
            }
            let ex = extract_family_minor(&h, &list, *k)?;
            let _ = writeln!(r, "family={}", ex.pattern.spec);
            for n in &ex.notes {
                let _ = writeln!(r, "note {n}");
            }
            r.push_str(&ex.witness.to_text(&ex.pattern.spec.to_string(), h.name().unwrap_or("host")));
        }
        Command::Reduce { family, out } => {
            let spec = family_spec(family)?;
            let inst = generate(&spec)?;
            let red = reduce_to_k5_form(&inst)?;
            let target = FamilySpec::new(spec.family.k5_form().expect("reduction succeeded"), spec.k);
            verify_yminor_certificate(&inst.graph, &red.certificate, &generate(&target)?.graph)?;
            let _ = writeln!(r, "target={target} ops={} verified=true", red.certificate.ops.len());
            emit(out, &red.certificate.to_text(), r)?;
        }
        Command::Bound { family, k, genus } => {
            let fam: BoundFamily = family.parse()?;
            let b = ply_bound(fam, *k, *genus);
            let _ = writeln!(r, "family={fam} k={k} genus={genus}");
            let _ = writeln!(r, "{b}");
        }
        Command::Validate { base, cover, embedding, family } => {
            let text = read(base)?;
            let g = parse_graph(&text)?;
            let inst = instance_for(&g, &text, family.as_deref())?;
            let (c, _) = parse_cover(&inst.graph, &read(cover)?)?;
            let eg = parse_embedding(&c.cover, &read(embedding)?)?;
            let rep = validate_embedded_cover(&c, &inst, &eg)?;
            r.push_str(&rep.to_text());
            if !rep.passed() {
                return Ok(1);
            }
        }
        Command::Search { base, ply, filter, resume, range, stop_after } => {
            let filter: Filter = filter.parse().map_err(CliError::Usage)?;
            let mut spec = SearchSpec::new(read_graph(base)?, *ply, filter)?;
            if let Some(range) = range {
                let (lo, hi) = range
                    .split_once(':')
                    .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
                    .ok_or_else(|| CliError::Usage(format!("bad range `{range}`, expected lo:hi")))?;
                spec = spec.with_range(lo, hi)?;
            }
            let opts = SearchOptions { jobs: cli.jobs, checkpoint: resume.clone(), stop_after: *stop_after, first_hit: false };
            let out = run_search(&spec, &opts)?;
            let _ = writeln!(r, "checked={} hits={}", out.checked, out.hits.len());
            for h in &out.hits {
                let _ = writeln!(r, "hit {h}");
            }
            if !out.complete {
                let _ = writeln!(r, "complete=false remaining={}", spec.hi - spec.lo - out.checked);
            }
        }
        Command::DecideToy { genus, forbidden, max_n } => {
            let targets = parse_graphs(&read(forbidden)?)?;
            let rep = decide_toy(*genus, &targets, *max_n, &genus_options(cli))?;
            let _ = writeln!(r, "graphs={} embeddable={} hits={}", rep.graphs, rep.embeddable, rep.hits.len());
            for h in &rep.hits {
                let edges: Vec<String> = h.graph.edges().map(|(_, u, v)| format!("{u}-{v}")).collect();
                let name = targets[h.target].name().unwrap_or("target");
                let _ = writeln!(r, "hit {name} ply={} n={} edges={}", h.ply, h.graph.vertex_count(), edges.join(","));
            }
        }
        Command::ExportDot { graph, cover, out } => {
            let g = read_graph(graph)?;
            let dot = match cover {
                Some(path) => {
                    let (c, _) = parse_cover(&g, &read(path)?)?;
                    let fibre = |w: VertexId| c.image(w).map_or(0, |v| v.index());
                    to_dot(&c.cover, Some(&fibre))
                }
                None => to_dot(&g, None),
            };
            emit(out, &dot, r)?;
        }
    }
    Ok(0)
}

fn lift_op(c: &CoverMap, op: &str, ids: &[u32]) -> Result<CoverMap> {
    let arity = |n: usize| {
        if ids.len() == n {
            Ok(())
        } else {
            Err(CliError::Usage(format!("`{op}` takes {n} identifiers, got {}", ids.len())))
        }
    };
    Ok(match op {
        "delete-edge" => {
            arity(1)?;
            cover_delete_edge(c, EdgeId(ids[0]))?
        }
        "delete-vertex" => {
            arity(1)?;
            cover_delete_vertex(c, VertexId(ids[0]))?
        }
        "contract" => {
            arity(1)?;
            cover_contract_edge(c, EdgeId(ids[0]))?
        }
        "add-edge" => {
            arity(3)?;
            cover_add_triangle_edge(c, VertexId(ids[0]), VertexId(ids[1]), VertexId(ids[2]))?
        }
        _ => return Err(CliError::Usage(format!("unknown operation `{op}`"))),
    })
}

/// The family member a base file describes, checked against the file.
fn instance_for(g: &MultiGraph, text: &str, family: Option<&str>) -> Result<FamilyInstance> {
    let spec = match family {
        Some(f) => family_spec(f)?,
        None => {
            let tag = comments(text)
                .into_iter()
                .find_map(|c| c.strip_prefix("family:").map(|s| s.trim().to_string()))
                .ok_or_else(|| CliError::Usage("base has no `family:` comment; pass --family".into()))?;
            family_spec(&tag)?
        }
    };
    let inst = generate(&spec)?;
    if write_graph(&inst.graph) != write_graph(g) {
        return Err(CliError::Input(format!("base graph is not {spec} as generated")));
    }
    Ok(inst)
}
