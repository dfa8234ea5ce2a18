//! Edge-list text format and the JSON role side-car.
//!
//! ```text
//! n m
//! u v      (m lines, 0-indexed, u < v)
//! ```

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{Graph, Vertex};
use crate::{Error, Result};

pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", g.n(), g.m())?;
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph> {
    let mut lines = input
        .lines()
        .enumerate()
        .filter(|(_, l)| l.as_ref().map_or(true, |l| !l.trim().is_empty()));
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Malformed("empty edge list".into()))?;
    let header = header?;
    let (n, m) = parse_pair(&header, 1)?;
    let mut edges = Vec::with_capacity(m);
    for (i, line) in lines {
        let (u, v) = parse_pair(&line?, i + 1)?;
        if u >= v {
            return Err(Error::Malformed(format!("line {}: expected u < v", i + 1)));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Malformed(format!(
            "header announces {m} edges, found {}",
            edges.len()
        )));
    }
    Graph::from_edges(n, edges)
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_ascii_whitespace();
    let mut next = || {
        it.next()
            .and_then(|t| t.parse::<usize>().ok())
            .ok_or_else(|| Error::Malformed(format!("line {lineno}: expected two integers")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Malformed(format!("line {lineno}: trailing tokens")));
    }
    Ok((a, b))
}

#[derive(Serialize, Deserialize)]
struct RolesFile {
    roles: BTreeMap<String, String>,
}

pub fn roles_to_json(g: &Graph) -> Result<String> {
    let file = RolesFile {
        roles: g
            .roles()
            .iter()
            .map(|(v, r)| (v.to_string(), r.clone()))
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

pub fn read_roles_json(text: &str) -> Result<BTreeMap<Vertex, String>> {
    let file: RolesFile = serde_json::from_str(text)?;
    file.roles
        .into_iter()
        .map(|(k, v)| {
            k.parse::<Vertex>()
                .map(|k| (k, v))
                .map_err(|_| Error::Malformed(format!("role key {k:?} is not a vertex id")))
        })
        .collect()
}
