//! Edge-list file ingestion and emission.
//!
//! Text format: one "u v" pair per line, whitespace separated, lines starting
//! with the comment prefix (default '#') skipped. Binary format: consecutive
//! little-endian (u: u64, v: u64) records, no header.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeListFormat {
    Text,
    Binary,
}

#[derive(Clone, Debug)]
pub struct EdgeListFile {
    pub path: PathBuf,
    pub format: EdgeListFormat,
    pub comment_prefix: char,
}

impl EdgeListFile {
    pub fn text(path: impl Into<PathBuf>) -> Self {
        EdgeListFile {
            path: path.into(),
            format: EdgeListFormat::Text,
            comment_prefix: '#',
        }
    }

    pub fn binary(path: impl Into<PathBuf>) -> Self {
        EdgeListFile {
            path: path.into(),
            format: EdgeListFormat::Binary,
            comment_prefix: '#',
        }
    }
}

/// A loaded edge list with dense vertex IDs plus the original-ID mapping.
#[derive(Clone, Debug)]
pub struct LoadedEdgeList {
    pub edges: Vec<(usize, usize)>,
    pub vertex_count: usize,
    /// original file ID -> dense ID, in first-encounter order
    pub relabeling: HashMap<u64, usize>,
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Load an edge list, relabeling endpoints to dense IDs 0..n-1 in order of
/// first encounter. An empty file yields an empty graph.
pub fn load_edge_list(file: &EdgeListFile) -> Result<LoadedEdgeList> {
    let raw = match file.format {
        EdgeListFormat::Text => load_text(file)?,
        EdgeListFormat::Binary => load_binary(&file.path)?,
    };

    let mut relabeling = HashMap::new();
    let mut edges = Vec::with_capacity(raw.len());
    for (u, v) in raw {
        let next = relabeling.len();
        let du = *relabeling.entry(u).or_insert(next);
        let next = relabeling.len();
        let dv = *relabeling.entry(v).or_insert(next);
        edges.push((du, dv));
    }
    let vertex_count = relabeling.len();
    Ok(LoadedEdgeList {
        edges,
        vertex_count,
        relabeling,
    })
}

fn load_text(file: &EdgeListFile) -> Result<Vec<(u64, u64)>> {
    let f = File::open(&file.path).map_err(|e| io_err(&file.path, e))?;
    let reader = BufReader::new(f);
    let mut edges = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| io_err(&file.path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with(file.comment_prefix) {
            continue;
        }
        let mut it = trimmed.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<u64> {
            tok.ok_or_else(|| parse_err(file, lineno, "expected two fields"))?
                .parse()
                .map_err(|e| parse_err(file, lineno, &format!("{e}")))
        };
        let u = parse(it.next())?;
        let v = parse(it.next())?;
        if it.next().is_some() {
            return Err(parse_err(file, lineno, "trailing fields"));
        }
        edges.push((u, v));
    }
    Ok(edges)
}

fn parse_err(file: &EdgeListFile, lineno: usize, detail: &str) -> Error {
    Error::ParseError {
        path: file.path.display().to_string(),
        line: lineno + 1,
        detail: detail.to_string(),
    }
}

fn load_binary(path: &Path) -> Result<Vec<(u64, u64)>> {
    let mut f = BufReader::new(File::open(path).map_err(|e| io_err(path, e))?);
    let mut buf = Vec::new();
    f.read_to_end(&mut buf).map_err(|e| io_err(path, e))?;
    if buf.len() % 16 != 0 {
        return Err(Error::ParseError {
            path: path.display().to_string(),
            line: buf.len() / 16 + 1,
            detail: "truncated binary record".into(),
        });
    }
    Ok(buf
        .chunks_exact(16)
        .map(|c| {
            (
                u64::from_le_bytes(c[..8].try_into().unwrap()),
                u64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect())
}

pub fn store_text(path: &Path, edges: &[(usize, usize)]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
    for &(u, v) in edges {
        writeln!(w, "{u} {v}").map_err(|e| io_err(path, e))?;
    }
    Ok(())
}

pub fn store_binary(path: &Path, edges: &[(usize, usize)]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
    for &(u, v) in edges {
        w.write_all(&(u as u64).to_le_bytes())
            .and_then(|_| w.write_all(&(v as u64).to_le_bytes()))
            .map_err(|e| io_err(path, e))?;
    }
    Ok(())
}

/// Canonicalize each pair to (min, max). With `dedup`, duplicate pairs are
/// removed as well. Used for the ingestion --symmetrize / --dedup flags.
pub fn normalize_edges(edges: &mut Vec<(usize, usize)>, dedup: bool) {
    for e in edges.iter_mut() {
        *e = (e.0.min(e.1), e.0.max(e.1));
    }
    if dedup {
        edges.sort_unstable();
        edges.dedup();
    }
}
