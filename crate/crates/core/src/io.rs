//! Text formats.
//!
//! Multigraph edge lists are UTF-8 and tab-separated:
//!
//! ```text
//! # comment
//! types: citations authors
//! node: isolated_paper
//! p1	p2	1.0	0.5
//! ```
//!
//! The `types:` directive must precede every edge line. It may also appear
//! behind a comment marker (`# types: a b`). Edge fields are split on tabs;
//! lines without tabs fall back to whitespace splitting. Clustering files hold
//! one `node<TAB>label` pair per line.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::multigraph::MultiGraph;
use crate::nodes::NodeSet;

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path.display(), e))
}

pub fn write_string(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent.display(), e))?;
        }
    }
    fs::write(path, contents).map_err(|e| Error::io(path.display(), e))
}

pub fn load_multigraph(path: &Path) -> Result<MultiGraph> {
    parse_multigraph(&read_to_string(path)?)
}

fn split_fields(line: &str) -> Vec<&str> {
    if line.contains('\t') {
        line.split('\t').map(str::trim).filter(|s| !s.is_empty()).collect()
    } else {
        line.split_whitespace().collect()
    }
}

fn directive<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(key)?;
    rest.strip_prefix(':').map(str::trim)
}

pub fn parse_multigraph(text: &str) -> Result<MultiGraph> {
    let mut types: Option<Vec<String>> = None;
    let mut ids: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut pairs: HashMap<(usize, usize), usize> = HashMap::new();

    let mut intern = |id: &str, ids: &mut Vec<String>| -> usize {
        if let Some(&i) = index.get(id) {
            return i;
        }
        ids.push(id.to_string());
        index.insert(id.to_string(), ids.len() - 1);
        ids.len() - 1
    };

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if types.is_none() {
                if let Some(names) = directive(comment.trim(), "types") {
                    types = Some(parse_types(names).map_err(|e| e.at_line(line_no))?);
                }
            }
            continue;
        }
        if let Some(names) = directive(line, "types") {
            if types.is_some() {
                return Err(Error::Parse("repeated `types:` directive".into()).at_line(line_no));
            }
            types = Some(parse_types(names).map_err(|e| e.at_line(line_no))?);
            continue;
        }
        if let Some(id) = directive(line, "node") {
            if id.is_empty() {
                return Err(Error::Parse("empty node identifier".into()).at_line(line_no));
            }
            intern(id, &mut ids);
            continue;
        }
        let Some(k) = types.as_ref().map(Vec::len) else {
            return Err(
                Error::Parse("edge line before `types:` directive".into()).at_line(line_no)
            );
        };
        let fields = split_fields(line);
        if fields.len() < 2 {
            return Err(Error::Parse(format!("malformed edge line `{line}`")).at_line(line_no));
        }
        let found = fields.len() - 2;
        if found != k {
            return Err(Error::DimensionMismatch { expected: k, found }.at_line(line_no));
        }
        let weights = fields[2..]
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("invalid weight `{f}`")))
            })
            .collect::<Result<Vec<f64>>>()
            .map_err(|e| e.at_line(line_no))?;
        for &w in &weights {
            if !w.is_finite() {
                return Err(Error::NonFiniteWeight(w).at_line(line_no));
            }
            if w < 0.0 {
                return Err(Error::NegativeWeight(w).at_line(line_no));
            }
        }
        if fields[0] == fields[1] {
            return Err(Error::SelfLoop(fields[0].to_string()).at_line(line_no));
        }
        let u = intern(fields[0], &mut ids);
        let v = intern(fields[1], &mut ids);
        if pairs.insert((u.min(v), u.max(v)), line_no).is_some() {
            return Err(
                Error::DuplicateEdge(fields[0].to_string(), fields[1].to_string())
                    .at_line(line_no),
            );
        }
        edges.push((u, v, weights));
    }

    let types = types.ok_or_else(|| Error::Parse("missing `types:` directive".into()))?;
    let nodes = NodeSet::new(ids)?.shared();
    MultiGraph::new(nodes, types, edges)
}

fn parse_types(names: &str) -> Result<Vec<String>> {
    let types: Vec<String> = names.split_whitespace().map(str::to_string).collect();
    if types.is_empty() {
        return Err(Error::Parse("`types:` lists no edge types".into()));
    }
    Ok(types)
}

fn fmt_weight(out: &mut String, w: f64) {
    // shortest round-trip representation
    let _ = write!(out, "{w}");
}

pub fn format_multigraph(g: &MultiGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "types: {}", g.edge_types().join(" "));
    for id in g.nodes().iter() {
        let _ = writeln!(out, "node: {id}");
    }
    for r in g.edges() {
        out.push_str(g.nodes().id(r.u));
        out.push('\t');
        out.push_str(g.nodes().id(r.v));
        for &w in r.w {
            out.push('\t');
            fmt_weight(&mut out, w);
        }
        out.push('\n');
    }
    out
}

pub fn save_multigraph(g: &MultiGraph, path: &Path) -> Result<()> {
    write_string(path, &format_multigraph(g))
}

/// Writes a single-weight graph in the multigraph format with one type, `weight`.
pub fn format_graph(g: &Graph) -> String {
    let mut out = String::from("types: weight\n");
    for id in g.nodes().iter() {
        let _ = writeln!(out, "node: {id}");
    }
    for &(u, v, w) in g.edges() {
        let _ = write!(out, "{}\t{}\t", g.nodes().id(u), g.nodes().id(v));
        fmt_weight(&mut out, w);
        out.push('\n');
    }
    out
}

pub fn save_graph(g: &Graph, path: &Path) -> Result<()> {
    write_string(path, &format_graph(g))
}

/// Reads a single-weight graph; the file must declare exactly one edge type.
pub fn load_graph(path: &Path) -> Result<Graph> {
    let mg = load_multigraph(path)?;
    if mg.k() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: mg.k(),
        });
    }
    mg.extract_type(0)
}

/// Parses `node<TAB>label` lines. With `universe`, the result is aligned to it
/// and must cover exactly its nodes.
pub fn parse_clustering(text: &str, universe: Option<&Arc<NodeSet>>) -> Result<Clustering> {
    let mut ids = Vec::new();
    let mut labels = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields = split_fields(line);
        if fields.len() != 2 {
            return Err(
                Error::Parse(format!("expected `node<TAB>label`, got `{line}`")).at_line(lineno + 1)
            );
        }
        ids.push(fields[0].to_string());
        labels.push(fields[1].to_string());
    }
    let nodes = NodeSet::new(ids)?.shared();
    let c = Clustering::from_labels(nodes, &labels)?;
    match universe {
        Some(u) => c.aligned_to(u),
        None => Ok(c),
    }
}

pub fn load_clustering(path: &Path, universe: Option<&Arc<NodeSet>>) -> Result<Clustering> {
    parse_clustering(&read_to_string(path)?, universe)
}

pub fn format_clustering(c: &Clustering) -> String {
    let mut out = String::new();
    for (id, label) in c.assignments() {
        let _ = writeln!(out, "{id}\t{label}");
    }
    out
}

pub fn save_clustering(c: &Clustering, path: &Path) -> Result<()> {
    write_string(path, &format_clustering(c))
}

/// Square matrix as CSV, identifiers on the header row and first column.
pub fn format_matrix_csv(ids: &[String], m: &[Vec<f64>]) -> String {
    let mut out = String::new();
    out.push_str("id");
    for id in ids {
        let _ = write!(out, ",{id}");
    }
    out.push('\n');
    for (id, row) in ids.iter().zip(m) {
        out.push_str(id);
        for x in row {
            let _ = write!(out, ",{x:.6}");
        }
        out.push('\n');
    }
    out
}
