//! Adjacency labels: degeneracy orientation labels and shrubdepth
//! connection-model labels.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::bits::{width_for, BitString};
use crate::eqlabel::{Decoder, EqLabel, LabelScheme, Part};
use crate::{Error, Graph, Result, Vertex};

/// Label of `x` is `(- | x, out(x)...)` for the smallest-last orientation,
/// so every vertex holds at most `degeneracy + 1` codes.
pub fn build_adjacency_labels(g: &Graph) -> LabelScheme {
    let deg = g.degeneracy_order();
    orientation_scheme(&deg.out_neighbors)
}

/// Labels `(- | x, p(x))` for a forest, each component rooted at its
/// smallest vertex.
pub fn build_forest_labels(g: &Graph) -> Result<LabelScheme> {
    if !g.is_forest() {
        return Err(Error::NotAcyclic);
    }
    let n = g.n();
    let mut parent: Vec<Option<Vertex>> = vec![None; n];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    stack.push(w);
                }
            }
        }
    }
    let out: Vec<Vec<Vertex>> = parent.iter().map(|p| p.iter().copied().collect()).collect();
    Ok(orientation_scheme(&out))
}

fn orientation_scheme(out: &[Vec<Vertex>]) -> LabelScheme {
    let labels = out
        .iter()
        .enumerate()
        .map(|(x, outs)| {
            let mut codes = Vec::with_capacity(outs.len() + 1);
            codes.push(x as u64);
            codes.extend(outs.iter().map(|&w| w as u64));
            EqLabel::new(vec![Part::codes(codes)])
        })
        .collect();
    LabelScheme::new(labels, Decoder::Orientation)
}

/// Bounds on the arboricity of `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ArboricityBounds {
    /// Largest `⌈m'/(n'-1)⌉` over the cores visited by the degeneracy order.
    pub lower: usize,
    /// The degeneracy.
    pub upper: usize,
}

pub fn arboricity_bounds(g: &Graph) -> Result<ArboricityBounds> {
    if g.n() < 2 {
        return Err(Error::InvalidParameter(
            "arboricity bounds need n >= 2".into(),
        ));
    }
    let deg = g.degeneracy_order();
    let mut added = vec![false; g.n()];
    let (mut nv, mut m) = (0usize, 0usize);
    let mut lower = 0;
    for &v in deg.order.iter().rev() {
        m += g.neighbors(v).iter().filter(|&&w| added[w]).count();
        added[v] = true;
        nv += 1;
        if nv >= 2 {
            lower = lower.max(m.div_ceil(nv - 1));
        }
    }
    Ok(ArboricityBounds {
        lower,
        upper: deg.degeneracy,
    })
}

/// One tree node in a connection model file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelNode {
    pub id: u64,
    pub parent: Option<u64>,
    pub color: u32,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    depth: u32,
    colors: u32,
    nodes: Vec<ModelNode>,
    leaf_of: BTreeMap<String, u64>,
    phi: Vec<[u32; 4]>,
}

/// A colored rooted tree of depth `d` whose leaves are the graph's vertices;
/// `u` and `v` are adjacent iff `φ(χ(u), χ(v), χ(lca(u, v))) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionModel {
    depth: u32,
    colors: u32,
    nodes: Vec<ModelNode>,
    index: HashMap<u64, usize>,
    leaf_of: Vec<u64>,
    phi: Vec<bool>,
}

impl ConnectionModel {
    /// Validates and builds a model. `leaf_of[v]` is the node id of the leaf
    /// for vertex `v`; `phi` lists the triples `(a, b, c)` mapped to 1.
    pub fn new(
        depth: u32,
        colors: u32,
        nodes: Vec<ModelNode>,
        leaf_of: Vec<u64>,
        phi: &[(u32, u32, u32)],
    ) -> Result<Self> {
        let bad = |m: String| Error::MalformedModel(m);
        if colors == 0 {
            return Err(bad("need at least one color".into()));
        }
        if colors > 64 {
            return Err(bad(format!(
                "{colors} colors exceeds the table limit of 64"
            )));
        }
        let mut index = HashMap::new();
        for (i, node) in nodes.iter().enumerate() {
            if index.insert(node.id, i).is_some() {
                return Err(bad(format!("duplicate node id {}", node.id)));
            }
            if node.color >= colors {
                return Err(bad(format!(
                    "node {} has color {} >= {colors}",
                    node.id, node.color
                )));
            }
        }
        let roots = nodes.iter().filter(|nd| nd.parent.is_none()).count();
        if roots != 1 {
            return Err(bad(format!("expected one root, found {roots}")));
        }
        let mut children = vec![0usize; nodes.len()];
        for node in &nodes {
            if let Some(p) = node.parent {
                let pi = *index
                    .get(&p)
                    .ok_or_else(|| bad(format!("node {} has unknown parent {p}", node.id)))?;
                children[pi] += 1;
            }
        }
        let k = colors as usize;
        let mut table = vec![false; k * k * k];
        for &(a, b, c) in phi {
            if a >= colors || b >= colors || c >= colors {
                return Err(bad(format!("phi entry ({a},{b},{c}) out of color range")));
            }
            table[(a as usize * k + b as usize) * k + c as usize] = true;
        }
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if table[(a * k + b) * k + c] != table[(b * k + a) * k + c] {
                        return Err(bad(format!("phi is not symmetric at ({a},{b},{c})")));
                    }
                }
            }
        }
        let model = ConnectionModel {
            depth,
            colors,
            nodes,
            index,
            leaf_of,
            phi: table,
        };
        for i in 0..model.nodes.len() {
            let d = model.node_depth(i)?;
            if children[i] == 0 && d != depth as usize {
                return Err(bad(format!(
                    "leaf {} at depth {d}, expected {depth}",
                    model.nodes[i].id
                )));
            }
            if d > depth as usize {
                return Err(bad(format!(
                    "node {} deeper than {depth}",
                    model.nodes[i].id
                )));
            }
        }
        let mut used = vec![false; model.nodes.len()];
        for (v, id) in model.leaf_of.iter().enumerate() {
            let i = *model
                .index
                .get(id)
                .ok_or_else(|| bad(format!("vertex {v} mapped to unknown node {id}")))?;
            if children[i] != 0 {
                return Err(bad(format!("vertex {v} mapped to inner node {id}")));
            }
            if std::mem::replace(&mut used[i], true) {
                return Err(bad(format!("leaf {id} assigned to two vertices")));
            }
        }
        let leaves = children.iter().filter(|&&c| c == 0).count();
        if leaves != model.leaf_of.len() {
            return Err(bad(format!(
                "{leaves} leaves but {} vertices",
                model.leaf_of.len()
            )));
        }
        Ok(model)
    }

    fn node_depth(&self, mut i: usize) -> Result<usize> {
        let mut d = 0;
        while let Some(p) = self.nodes[i].parent {
            i = self.index[&p];
            d += 1;
            if d > self.nodes.len() {
                return Err(Error::MalformedModel("parent pointers form a cycle".into()));
            }
        }
        Ok(d)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        let n = file.leaf_of.len();
        let mut leaf_of = vec![None; n];
        for (key, &node) in &file.leaf_of {
            let v: usize = key
                .parse()
                .map_err(|_| Error::MalformedModel(format!("bad vertex key {key:?}")))?;
            match leaf_of.get_mut(v) {
                Some(slot) => *slot = Some(node),
                None => {
                    return Err(Error::MalformedModel(format!(
                        "vertex {v} out of range for {n} vertices"
                    )))
                }
            }
        }
        let leaf_of = leaf_of
            .into_iter()
            .map(|x| x.expect("keys are 0..n"))
            .collect();
        let mut phi = Vec::new();
        for [a, b, c, bit] in file.phi {
            match bit {
                0 => {}
                1 => phi.push((a, b, c)),
                _ => {
                    return Err(Error::MalformedModel(format!(
                        "phi bit {bit} is not 0 or 1"
                    )))
                }
            }
        }
        Self::new(file.depth, file.colors, file.nodes, leaf_of, &phi)
    }

    pub fn to_json(&self) -> Result<String> {
        let k = self.colors as usize;
        let mut phi = Vec::new();
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    phi.push([
                        a as u32,
                        b as u32,
                        c as u32,
                        self.phi[(a * k + b) * k + c] as u32,
                    ]);
                }
            }
        }
        let file = ModelFile {
            depth: self.depth,
            colors: self.colors,
            nodes: self.nodes.clone(),
            leaf_of: self
                .leaf_of
                .iter()
                .enumerate()
                .map(|(v, &id)| (v.to_string(), id))
                .collect(),
            phi,
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn n(&self) -> usize {
        self.leaf_of.len()
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn colors(&self) -> u32 {
        self.colors
    }

    pub fn phi(&self, a: u32, b: u32, c: u32) -> bool {
        let k = self.colors as usize;
        self.phi[(a as usize * k + b as usize) * k + c as usize]
    }

    /// Node indices from the leaf of `v` up to the root.
    fn path(&self, v: Vertex) -> Vec<usize> {
        let mut i = self.index[&self.leaf_of[v]];
        let mut out = vec![i];
        while let Some(p) = self.nodes[i].parent {
            i = self.index[&p];
            out.push(i);
        }
        out
    }

    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        if u == v {
            return false;
        }
        let (pu, pv) = (self.path(u), self.path(v));
        let lca = pu
            .iter()
            .zip(&pv)
            .find(|(a, b)| a == b)
            .map(|(&a, _)| a)
            .expect("paths share the root");
        let color = |i: usize| self.nodes[i].color;
        self.phi(color(pu[0]), color(pv[0]), color(lca))
    }

    pub fn to_graph(&self) -> Graph {
        let n = self.n();
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        let edges: Vec<_> = edges.filter(|&(u, v)| self.adjacent(u, v)).collect();
        Graph::from_edges(n, edges).expect("model edges are simple")
    }

    /// Checks that the model reproduces `g` on every pair.
    pub fn check_against(&self, g: &Graph) -> Result<()> {
        if g.n() != self.n() {
            return Err(Error::GraphMismatch {
                predicate: g.n(),
                labels: self.n(),
            });
        }
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                if self.adjacent(u, v) != g.has_edge(u, v) {
                    return Err(Error::MalformedModel(format!(
                        "model disagrees with the graph on pair ({u}, {v})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Label of `x` is `(φ | -), (χ(t_0) | t_0), ..., (χ(t_d) | t_d)` along the
/// leaf-to-root path `t_0(x), ..., t_d(x)`.
pub fn build_shrubdepth_labels(model: &ConnectionModel) -> LabelScheme {
    let k = model.colors as usize;
    let cw = width_for(k as u64);
    let table = BitString::from_bools(model.phi.iter().copied());
    debug_assert_eq!(table.len(), k * k * k);
    let labels = (0..model.n())
        .map(|v| {
            let mut parts = vec![Part::prefix(table.clone())];
            for i in model.path(v) {
                let node = &model.nodes[i];
                let mut color = BitString::new();
                color.push_uint(node.color as u64, cw);
                parts.push(Part {
                    prefix: color,
                    codes: vec![node.id],
                });
            }
            EqLabel::new(parts)
        })
        .collect();
    LabelScheme::new(
        labels,
        Decoder::Shrubdepth {
            colors: model.colors,
            depth: model.depth,
        },
    )
}
