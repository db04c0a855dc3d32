//! Point CSV and graph JSON.
//!
//! Points are written one `x,y` pair per line using Rust's shortest
//! round-trip float formatting, so reading a file back gives the identical
//! `f64` values. Blank lines and lines starting with `#` are skipped.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use betaskel::{PointSet, SkeletonGraph};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub fn points_to_csv(ps: &PointSet) -> String {
    let mut out = String::with_capacity(ps.len() * 24);
    for p in ps.points() {
        writeln!(out, "{},{}", p.x(), p.y()).unwrap();
    }
    out
}

/// Parses point CSV text; `source` names the input in error messages.
pub fn parse_points_csv(text: &str, source: &str) -> CliResult<PointSet> {
    let mut coords = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |msg: String| CliError::Parse {
            path: source.to_string(),
            line: idx + 1,
            msg,
        };
        let (x, y) = line
            .split_once(',')
            .ok_or_else(|| parse_err(format!("expected `x,y`, got `{line}`")))?;
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| parse_err(format!("`{}`: {e}", s.trim())))
        };
        coords.push((num(x)?, num(y)?));
    }
    PointSet::from_coords(coords).map_err(|e| CliError::Parse {
        path: source.to_string(),
        line: 0,
        msg: e.to_string(),
    })
}

/// On-disk graph: vertex coordinates plus undirected index pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<[f64; 2]>,
    pub edges: Vec<[usize; 2]>,
}

impl GraphFile {
    pub fn new(ps: &PointSet, edges: &[(usize, usize)]) -> Self {
        GraphFile {
            vertices: ps.points().iter().map(|p| [p.x(), p.y()]).collect(),
            edges: edges.iter().map(|&(i, j)| [i, j]).collect(),
        }
    }

    pub fn from_graph(ps: &PointSet, g: &SkeletonGraph) -> Self {
        Self::new(ps, g.edges())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("graph serializes");
        s.push('\n');
        s
    }

    pub fn into_parts(self) -> betaskel::Result<(PointSet, SkeletonGraph)> {
        let ps = PointSet::from_coords(self.vertices.iter().map(|v| (v[0], v[1])))?;
        let g = SkeletonGraph::from_edges(&ps, self.edges.iter().map(|e| (e[0], e[1])))?;
        Ok((ps, g))
    }
}

/// Points, and edges when the input was a graph file.
pub struct Input {
    pub points: PointSet,
    pub graph: Option<SkeletonGraph>,
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Reads `.json` files as graphs and anything else as point CSV.
pub fn load_input(path: &Path) -> CliResult<Input> {
    let text = read_text(path)?;
    let name = path.display().to_string();
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        let file: GraphFile = serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: name.clone(),
            source,
        })?;
        let (points, graph) = file.into_parts().map_err(|e| CliError::Parse {
            path: name,
            line: 0,
            msg: e.to_string(),
        })?;
        Ok(Input {
            points,
            graph: Some(graph),
        })
    } else {
        Ok(Input {
            points: parse_points_csv(&text, &name)?,
            graph: None,
        })
    }
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, content: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, content).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

/// Edge list CSV, one `i,j` per line.
pub fn edges_to_csv(edges: &[(usize, usize)]) -> String {
    let mut out = String::new();
    for (i, j) in edges {
        writeln!(out, "{i},{j}").unwrap();
    }
    out
}
