//! Subdivisions and the binary-tree gadget used by the bounded-degree
//! lower bound.

use std::collections::BTreeMap;

use super::{Graph, Vertex};
use crate::stats::ceil_log2;
use crate::{Error, Result};

pub const BRANCH_ROLE: &str = "branch";

/// Replaces every edge by a path with `k` internal vertices.
///
/// Original vertices keep their ids and are tagged [`BRANCH_ROLE`]; the
/// internal vertices of edge `i` (in `g.edges()` order) follow, listed from
/// the smaller endpoint to the larger.
pub fn k_subdivide(g: &Graph, k: usize) -> Graph {
    let n = g.n() + k * g.m();
    let mut edges = Vec::with_capacity((k + 1) * g.m());
    let mut next = g.n();
    for &(u, v) in g.edges() {
        let mut prev = u;
        for _ in 0..k {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, v));
    }
    let roles = (0..g.n()).map(|v| (v, BRANCH_ROLE.to_string())).collect();
    Graph::from_edges(n, edges)
        .expect("subdivision of a simple graph is simple")
        .with_roles(roles)
        .expect("branch ids are in range")
}

/// The graph `G[ℓ]` with its tree roots.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub graph: Graph,
    /// `roots[v]` is the root of the tree standing in for `v`; equal to `v`.
    pub roots: Vec<Vertex>,
    pub ell: usize,
    /// Largest leaf depth over all trees.
    pub max_leaf_depth: usize,
}

/// Smallest `ℓ` accepted by [`gadget_bintree`] for an `n`-vertex graph.
pub fn gadget_min_length(n: usize) -> usize {
    2 * ceil_log2(n.max(1)) + 1
}

/// Builds `G[ℓ]`: a balanced binary tree per vertex with one leaf per
/// neighbour, and for each edge `uv` a path between the matching leaves
/// whose length makes the two roots exactly `ℓ` apart.
pub fn gadget_bintree(g: &Graph, ell: usize) -> Result<Gadget> {
    let big_n = g.n();
    if let Some(v) = (0..big_n).find(|&v| g.degree(v) == 0) {
        return Err(Error::IsolatedVertex(v));
    }
    let required = gadget_min_length(big_n);
    if ell < required {
        return Err(Error::GadgetTooShort { got: ell, required });
    }

    let mut edges = Vec::new();
    let mut next = big_n;
    // leaves[v][i] = (leaf vertex, depth) for the i-th neighbour of v.
    let mut leaves: Vec<Vec<(Vertex, usize)>> = Vec::with_capacity(big_n);
    for v in 0..big_n {
        let mut out = Vec::with_capacity(g.degree(v));
        grow(v, g.degree(v), 0, &mut next, &mut edges, &mut out);
        leaves.push(out);
    }
    let max_leaf_depth = leaves.iter().flatten().map(|&(_, d)| d).max().unwrap_or(0);

    for &(u, v) in g.edges() {
        let iu = g.neighbors(u).binary_search(&v).expect("edge present");
        let iv = g.neighbors(v).binary_search(&u).expect("edge present");
        let (a, da) = leaves[u][iu];
        let (b, db) = leaves[v][iv];
        if da + db >= ell {
            return Err(Error::GadgetTooShort {
                got: ell,
                required: da + db + 1,
            });
        }
        let len = ell - da - db;
        let mut prev = a;
        for _ in 1..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, b));
    }

    let roles: BTreeMap<Vertex, String> = (0..big_n).map(|v| (v, format!("root:{v}"))).collect();
    let graph = Graph::from_edges(next, edges)?.with_roles(roles)?;
    Ok(Gadget {
        graph,
        roots: (0..big_n).collect(),
        ell,
        max_leaf_depth,
    })
}

/// Balanced binary tree below `node` with `count` leaves; a single leaf is
/// the node itself.
fn grow(
    node: Vertex,
    count: usize,
    depth: usize,
    next: &mut Vertex,
    edges: &mut Vec<(Vertex, Vertex)>,
    leaves: &mut Vec<(Vertex, usize)>,
) {
    if count == 1 {
        leaves.push((node, depth));
        return;
    }
    let left = *next;
    let right = *next + 1;
    *next += 2;
    edges.push((node, left));
    edges.push((node, right));
    grow(left, count.div_ceil(2), depth + 1, next, edges, leaves);
    grow(right, count / 2, depth + 1, next, edges, leaves);
}
