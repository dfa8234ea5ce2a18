//! Deterministic graph generators.
//!
//! Specs have a compact text form `name:arg,arg,...` used by the CLI, e.g.
//! `hypercube:4`, `grid:30,30`, `random_tree:500,7`. Random generators draw
//! from [`crate::rng`] so a spec plus seed always yields the same graph.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng as _;

use super::{Graph, Vertex};
use crate::rng::rng_from_seed;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec {
    Hypercube {
        d: u32,
    },
    Grid {
        w: usize,
        h: usize,
    },
    KingGrid {
        w: usize,
        h: usize,
    },
    Grid3 {
        w: usize,
        h: usize,
        d: usize,
    },
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    Complete {
        n: usize,
    },
    /// `K_{1,n-1}` with the center at vertex 0.
    Star {
        n: usize,
    },
    Empty {
        n: usize,
    },
    Petersen,
    RandomTree {
        n: usize,
        seed: u64,
    },
    RandomBipartite {
        a: usize,
        b: usize,
        deg: usize,
        seed: u64,
    },
    Gnp {
        n: usize,
        p: f64,
        seed: u64,
    },
    RandomSubgraph {
        base: Box<GeneratorSpec>,
        p: f64,
        seed: u64,
    },
    InducedSubhypercube {
        d: u32,
        vertices: Vec<u64>,
    },
}

pub fn generate(spec: &GeneratorSpec) -> Result<Graph> {
    use GeneratorSpec::*;
    match *spec {
        Hypercube { d } => {
            if d > 24 {
                return Err(Error::InvalidParameter(format!(
                    "hypercube dimension {d} > 24"
                )));
            }
            let n = 1usize << d;
            let edges = (0..n).flat_map(|v| {
                (0..d)
                    .map(move |i| v ^ (1 << i))
                    .filter(move |&w| w > v)
                    .map(move |w| (v, w))
            });
            Graph::from_edges(n, edges)
        }
        Grid { w, h } => grid_like(w, h, false),
        KingGrid { w, h } => grid_like(w, h, true),
        Grid3 { w, h, d } => {
            positive(&[w, h, d])?;
            let id = |x: usize, y: usize, z: usize| (z * h + y) * w + x;
            let mut edges = Vec::new();
            for z in 0..d {
                for y in 0..h {
                    for x in 0..w {
                        if x + 1 < w {
                            edges.push((id(x, y, z), id(x + 1, y, z)));
                        }
                        if y + 1 < h {
                            edges.push((id(x, y, z), id(x, y + 1, z)));
                        }
                        if z + 1 < d {
                            edges.push((id(x, y, z), id(x, y, z + 1)));
                        }
                    }
                }
            }
            Graph::from_edges(w * h * d, edges)
        }
        Path { n } => Graph::from_edges(n, (1..n).map(|i| (i - 1, i))),
        Cycle { n } => {
            if n < 3 {
                return Err(Error::InvalidParameter("cycle needs n >= 3".into()));
            }
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        Complete { n } => {
            Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
        }
        Star { n } => {
            positive(&[n])?;
            Graph::from_edges(n, (1..n).map(|v| (0, v)))
        }
        Empty { n } => Ok(Graph::empty(n)),
        Petersen => {
            let mut edges = Vec::new();
            for i in 0..5 {
                edges.push((i, (i + 1) % 5));
                edges.push((i, i + 5));
                edges.push((5 + i, 5 + (i + 2) % 5));
            }
            Graph::from_edges(10, edges)
        }
        RandomTree { n, seed } => random_tree(n, seed),
        RandomBipartite { a, b, deg, seed } => {
            let mut rng = rng_from_seed(seed);
            let k = deg.min(b);
            let mut edges = Vec::with_capacity(a * k);
            for u in 0..a {
                for j in sample(&mut rng, b, k).into_iter() {
                    edges.push((u, a + j));
                }
            }
            Graph::from_edges(a + b, edges)
        }
        Gnp { n, p, seed } => {
            probability(p)?;
            let mut rng = rng_from_seed(seed);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, edges)
        }
        RandomSubgraph { ref base, p, seed } => {
            probability(p)?;
            let g = generate(base)?;
            let mut rng = rng_from_seed(seed);
            Ok(g.spanning_subgraph(|_, _, _| rng.gen_bool(p)))
        }
        InducedSubhypercube { d, ref vertices } => induced_subhypercube(d, vertices),
    }
}

/// Subgraph of `Q_d` induced by `vertices` (bitmask ids), relabelled in order.
pub fn induced_subhypercube(d: u32, vertices: &[u64]) -> Result<Graph> {
    if d > 63 {
        return Err(Error::InvalidParameter(format!(
            "hypercube dimension {d} > 63"
        )));
    }
    let mut index = std::collections::HashMap::with_capacity(vertices.len());
    for (i, &v) in vertices.iter().enumerate() {
        if d < 64 && v >> d != 0 {
            return Err(Error::InvalidParameter(format!(
                "{v} is not a vertex of Q_{d}"
            )));
        }
        if index.insert(v, i).is_some() {
            return Err(Error::InvalidParameter(format!("vertex {v} listed twice")));
        }
    }
    let mut edges = Vec::new();
    for (i, &v) in vertices.iter().enumerate() {
        for bit in 0..d {
            if let Some(&j) = index.get(&(v ^ (1 << bit))) {
                if i < j {
                    edges.push((i, j));
                }
            }
        }
    }
    Graph::from_edges(vertices.len(), edges)
}

fn grid_like(w: usize, h: usize, diagonals: bool) -> Result<Graph> {
    positive(&[w, h])?;
    let id = |x: usize, y: usize| y * w + x;
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < h {
                edges.push((id(x, y), id(x, y + 1)));
                if diagonals {
                    if x + 1 < w {
                        edges.push((id(x, y), id(x + 1, y + 1)));
                    }
                    if x > 0 {
                        edges.push((id(x, y), id(x - 1, y + 1)));
                    }
                }
            }
        }
    }
    Graph::from_edges(w * h, edges)
}

/// Uniform labelled tree via a random Prüfer sequence.
fn random_tree(n: usize, seed: u64) -> Result<Graph> {
    if n <= 2 {
        return Graph::from_edges(n, (1..n).map(|i| (0, i)));
    }
    let mut rng = rng_from_seed(seed);
    let code: Vec<Vertex> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<Vertex>> = (0..n)
        .filter(|&v| degree[v] == 1)
        .map(std::cmp::Reverse)
        .collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("a leaf always exists");
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.push(std::cmp::Reverse(c));
        }
    }
    let std::cmp::Reverse(a) = leaves.pop().unwrap();
    let std::cmp::Reverse(b) = leaves.pop().unwrap();
    edges.push((a, b));
    Graph::from_edges(n, edges)
}

fn positive(values: &[usize]) -> Result<()> {
    if values.iter().any(|&v| v == 0) {
        Err(Error::InvalidParameter(
            "dimensions must be positive".into(),
        ))
    } else {
        Ok(())
    }
}

fn probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "probability {p} outside [0, 1]"
        )))
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GeneratorSpec::*;
        match self {
            Hypercube { d } => write!(f, "hypercube:{d}"),
            Grid { w, h } => write!(f, "grid:{w},{h}"),
            KingGrid { w, h } => write!(f, "king_grid:{w},{h}"),
            Grid3 { w, h, d } => write!(f, "grid3:{w},{h},{d}"),
            Path { n } => write!(f, "path:{n}"),
            Cycle { n } => write!(f, "cycle:{n}"),
            Complete { n } => write!(f, "complete:{n}"),
            Star { n } => write!(f, "star:{n}"),
            Empty { n } => write!(f, "empty:{n}"),
            Petersen => write!(f, "petersen"),
            RandomTree { n, seed } => write!(f, "random_tree:{n},{seed}"),
            RandomBipartite { a, b, deg, seed } => {
                write!(f, "random_bipartite:{a},{b},{deg},{seed}")
            }
            Gnp { n, p, seed } => write!(f, "gnp:{n},{p},{seed}"),
            RandomSubgraph { base, p, seed } => write!(f, "random_subgraph:{p},{seed},{base}"),
            InducedSubhypercube { d, vertices } => {
                let list: Vec<String> = vertices.iter().map(u64::to_string).collect();
                write!(f, "induced_subhypercube:{d},{}", list.join(";"))
            }
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use GeneratorSpec::*;
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let args: Vec<&str> = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(',').collect()
        };
        let bad = || Error::InvalidParameter(format!("cannot parse generator spec {s:?}"));
        let want = |k: usize| if args.len() == k { Ok(()) } else { Err(bad()) };
        let int = |i: usize| args[i].trim().parse::<usize>().map_err(|_| bad());
        let seed = |i: usize| args[i].trim().parse::<u64>().map_err(|_| bad());
        let real = |i: usize| args[i].trim().parse::<f64>().map_err(|_| bad());
        Ok(match name {
            "hypercube" => {
                want(1)?;
                Hypercube { d: int(0)? as u32 }
            }
            "grid" | "king_grid" => {
                want(2)?;
                let (w, h) = (int(0)?, int(1)?);
                if name == "grid" {
                    Grid { w, h }
                } else {
                    KingGrid { w, h }
                }
            }
            "grid3" => {
                want(3)?;
                Grid3 {
                    w: int(0)?,
                    h: int(1)?,
                    d: int(2)?,
                }
            }
            "path" | "cycle" | "complete" | "star" | "empty" => {
                want(1)?;
                let n = int(0)?;
                match name {
                    "path" => Path { n },
                    "cycle" => Cycle { n },
                    "complete" => Complete { n },
                    "star" => Star { n },
                    _ => Empty { n },
                }
            }
            "petersen" => {
                want(0)?;
                Petersen
            }
            "random_tree" => {
                want(2)?;
                RandomTree {
                    n: int(0)?,
                    seed: seed(1)?,
                }
            }
            "random_bipartite" => {
                want(4)?;
                RandomBipartite {
                    a: int(0)?,
                    b: int(1)?,
                    deg: int(2)?,
                    seed: seed(3)?,
                }
            }
            "gnp" => {
                want(3)?;
                Gnp {
                    n: int(0)?,
                    p: real(1)?,
                    seed: seed(2)?,
                }
            }
            "random_subgraph" => {
                let mut parts = rest.splitn(3, ',');
                let p = parts
                    .next()
                    .and_then(|x| x.trim().parse().ok())
                    .ok_or_else(bad)?;
                let seed = parts
                    .next()
                    .and_then(|x| x.trim().parse().ok())
                    .ok_or_else(bad)?;
                let base = parts.next().ok_or_else(bad)?.parse()?;
                RandomSubgraph {
                    base: Box::new(base),
                    p,
                    seed,
                }
            }
            "induced_subhypercube" => {
                let (d, list) = rest.split_once(',').ok_or_else(bad)?;
                let vertices = list
                    .split(';')
                    .filter(|x| !x.is_empty())
                    .map(|x| x.trim().parse::<u64>().map_err(|_| bad()))
                    .collect::<Result<_>>()?;
                InducedSubhypercube {
                    d: d.trim().parse().map_err(|_| bad())?,
                    vertices,
                }
            }
            _ => return Err(bad()),
        })
    }
}
