//! Problem instances, packings, the text format, and instance generation.

use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt::Write as _;
use thiserror::Error;

/// An undirected multigraph with a partition of its terminals into blocks.
///
/// Vertices are `0..n` internally; the text format is 1-indexed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    edges: Vec<(usize, usize)>,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<Option<usize>>,
}

impl Instance {
    pub fn new(n: usize, edges: Vec<(usize, usize)>, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let bad = |msg: String| Error::InvalidInstance(msg);
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(bad(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(bad(format!("self-loop at {u}")));
            }
        }
        let mut block_of = vec![None; n];
        for (i, b) in blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(bad(format!("block {i} is empty")));
            }
            for &t in b {
                if t >= n {
                    return Err(bad(format!("terminal {t} out of range")));
                }
                if block_of[t].is_some() {
                    return Err(bad(format!("terminal {t} listed twice")));
                }
                block_of[t] = Some(i);
            }
        }
        Ok(Instance {
            n,
            edges,
            blocks,
            block_of,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Number of terminals.
    pub fn k(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, v: usize) -> Option<usize> {
        self.block_of[v]
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        self.block_of[v].is_some()
    }

    /// Terminals in ascending vertex order.
    pub fn terminals(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.is_terminal(v)).collect()
    }

    /// Adjacency lists of `(neighbour, edge id)` in ascending edge id.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        adj
    }

    /// Number of distinct blocks that contain at least one terminal.
    pub fn distinct_blocks(&self) -> usize {
        self.blocks.iter().filter(|b| !b.is_empty()).count()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let perr = |line: usize, msg: &str| Error::Parse {
            line,
            msg: msg.to_string(),
        };
        let ints = |line: usize, l: &str| -> Result<Vec<usize>> {
            l.split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>()
                        .map_err(|_| perr(line, &format!("bad integer {tok:?}")))
                })
                .collect()
        };
        let (hl, header) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
        let h = ints(hl, header)?;
        if h.len() != 3 {
            return Err(perr(hl, "header must be `n m b`"));
        }
        let (n, m, b) = (h[0], h[1], h[2]);
        let vertex = |line: usize, x: usize| -> Result<usize> {
            if x == 0 || x > n {
                Err(perr(line, &format!("vertex {x} out of range 1..={n}")))
            } else {
                Ok(x - 1)
            }
        };
        let mut seen = vec![false; n];
        let mut blocks = Vec::with_capacity(b);
        for _ in 0..b {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| perr(hl, "missing block line"))?;
            let mut blk = Vec::new();
            for x in ints(ln, l)? {
                let t = vertex(ln, x)?;
                if seen[t] {
                    return Err(perr(ln, &format!("terminal {x} in more than one block")));
                }
                seen[t] = true;
                blk.push(t);
            }
            if blk.is_empty() {
                return Err(perr(ln, "empty block"));
            }
            blocks.push(blk);
        }
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (ln, l) = lines.next().ok_or_else(|| perr(hl, "missing edge line"))?;
            let e = ints(ln, l)?;
            if e.len() != 2 {
                return Err(perr(ln, "edge line must be `u v`"));
            }
            let (u, v) = (vertex(ln, e[0])?, vertex(ln, e[1])?);
            if u == v {
                return Err(perr(ln, &format!("self-loop at {}", e[0])));
            }
            edges.push((u, v));
        }
        if let Some((ln, _)) = lines.next() {
            return Err(perr(ln, "trailing content"));
        }
        Instance::new(n, edges, blocks)
    }

    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} {}", self.n, self.m(), self.blocks.len());
        for b in &self.blocks {
            let ids: Vec<String> = b.iter().map(|t| (t + 1).to_string()).collect();
            let _ = writeln!(s, "{}", ids.join(" "));
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "{} {}", u + 1, v + 1);
        }
        s
    }

    /// Splits into connected sub-instances. Block fragments keep their global
    /// block index in [`Component::block_ids`].
    pub fn connected_components(&self) -> Vec<Component> {
        let adj = self.adjacency();
        let mut comp = vec![usize::MAX; self.n];
        let mut order = Vec::new();
        for r in 0..self.n {
            if comp[r] != usize::MAX {
                continue;
            }
            let id = order.len();
            let mut verts = vec![r];
            comp[r] = id;
            let mut i = 0;
            while i < verts.len() {
                let u = verts[i];
                i += 1;
                for &(w, _) in &adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        verts.push(w);
                    }
                }
            }
            verts.sort_unstable();
            order.push(verts);
        }
        let mut local = vec![0usize; self.n];
        for verts in &order {
            for (i, &v) in verts.iter().enumerate() {
                local[v] = i;
            }
        }
        let mut edge_lists = vec![Vec::new(); order.len()];
        for (e, &(u, _)) in self.edges.iter().enumerate() {
            edge_lists[comp[u]].push(e);
        }
        order
            .into_iter()
            .zip(edge_lists)
            .enumerate()
            .map(|(c, (vertex_map, edge_map))| {
                let edges = edge_map
                    .iter()
                    .map(|&e| (local[self.edges[e].0], local[self.edges[e].1]))
                    .collect();
                let mut blocks = Vec::new();
                let mut block_ids = Vec::new();
                for (i, b) in self.blocks.iter().enumerate() {
                    let frag: Vec<usize> =
                        b.iter().filter(|&&t| comp[t] == c).map(|&t| local[t]).collect();
                    if !frag.is_empty() {
                        blocks.push(frag);
                        block_ids.push(i);
                    }
                }
                let inst = Instance::new(vertex_map.len(), edges, blocks)
                    .expect("restriction of a valid instance is valid");
                Component {
                    inst,
                    vertex_map,
                    edge_map,
                    block_ids,
                }
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Seeded connected instance: a random spanning tree plus random extra
    /// edges (parallel edges allowed), with `k` terminals over `num_blocks`
    /// non-empty blocks.
    pub fn random(n: usize, m: usize, k: usize, num_blocks: usize, seed: u64) -> Result<Self> {
        let g = |msg: &str| Error::Generator(msg.to_string());
        if n == 0 {
            return Err(g("n must be positive"));
        }
        if k > n {
            return Err(g(&format!("k = {k} exceeds n = {n}")));
        }
        if num_blocks > k {
            return Err(g(&format!("num_blocks = {num_blocks} exceeds k = {k}")));
        }
        if num_blocks == 0 && k > 0 {
            return Err(g("terminals need at least one block"));
        }
        if m + 1 < n {
            return Err(g(&format!("m = {m} too small to connect n = {n}")));
        }
        if n == 1 && m > 0 {
            return Err(g("a single vertex admits no edges"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let mut edges = Vec::with_capacity(m);
        for i in 1..n {
            let j = rng.gen_range(0..i);
            edges.push((perm[j], perm[i]));
        }
        while edges.len() < m {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                edges.push((u, v));
            }
        }
        edges.shuffle(&mut rng);
        let mut terms: Vec<usize> = (0..n).collect();
        terms.shuffle(&mut rng);
        terms.truncate(k);
        let mut blocks = vec![Vec::new(); num_blocks];
        for (i, &t) in terms.iter().enumerate() {
            let b = if i < num_blocks {
                i
            } else {
                rng.gen_range(0..num_blocks)
            };
            blocks[b].push(t);
        }
        for b in &mut blocks {
            b.sort_unstable();
        }
        Instance::new(n, edges, blocks)
    }

    /// Copy with vertices renamed by `perm` (old id `v` becomes `perm[v]`).
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::Precondition("permutation length".into()));
        }
        let edges = self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&t| perm[t]).collect())
            .collect();
        Instance::new(self.n, edges, blocks)
    }

    /// Copy with blocks listed in the order `order` (new block `i` is old block `order[i]`).
    pub fn permute_blocks(&self, order: &[usize]) -> Result<Self> {
        let blocks = order.iter().map(|&i| self.blocks[i].clone()).collect();
        Instance::new(self.n, self.edges.clone(), blocks)
    }
}

/// A connected piece of an instance with maps back to the parent's ids.
#[derive(Debug, Clone)]
pub struct Component {
    pub inst: Instance,
    /// Local vertex id to parent vertex id.
    pub vertex_map: Vec<usize>,
    /// Local edge id to parent edge id.
    pub edge_map: Vec<usize>,
    /// Local block index to parent block index.
    pub block_ids: Vec<usize>,
}

/// A set of paths, each a vertex sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Packing {
    pub paths: Vec<Vec<usize>>,
}

impl Packing {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Output format: `p`, then one line of 1-indexed vertex ids per path.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.paths.len());
        for p in &self.paths {
            let ids: Vec<String> = p.iter().map(|v| (v + 1).to_string()).collect();
            let _ = writeln!(s, "{}", ids.join(" "));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, h) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing path count".into(),
        })?;
        let p: usize = h.trim().parse().map_err(|_| Error::Parse {
            line: 1,
            msg: "bad path count".into(),
        })?;
        let mut paths = Vec::with_capacity(p);
        for (i, l) in lines {
            let path = l
                .split_whitespace()
                .map(|t| match t.parse::<usize>() {
                    Ok(x) if x > 0 => Ok(x - 1),
                    _ => Err(Error::Parse {
                        line: i + 1,
                        msg: format!("bad vertex {t:?}"),
                    }),
                })
                .collect::<Result<Vec<_>>>()?;
            paths.push(path);
        }
        if paths.len() != p {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected {p} paths, found {}", paths.len()),
            });
        }
        Ok(Packing { paths })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("path {0} has fewer than two vertices")]
    TooShort(usize),
    #[error("path {0} uses vertex {1} out of range")]
    OutOfRange(usize, usize),
    #[error("path {0} endpoint {1} is not a terminal")]
    EndpointNotTerminal(usize, usize),
    #[error("path {0} joins two terminals of block {1}")]
    SameBlock(usize, usize),
    #[error("path {0} has terminal {1} as an internal vertex")]
    InternalTerminal(usize, usize),
    #[error("path {0} has no edge between {1} and {2}")]
    MissingEdge(usize, usize, usize),
    #[error("vertex {0} is used more than once")]
    VertexReused(usize),
}

/// Checks that `p` is a set of vertex-disjoint S-paths of `inst`.
pub fn validate_packing(inst: &Instance, p: &Packing) -> std::result::Result<(), Violation> {
    let adj: HashSet<(usize, usize)> = inst
        .edges()
        .iter()
        .map(|&(u, v)| (u.min(v), u.max(v)))
        .collect();
    let mut used = vec![false; inst.n()];
    for (i, path) in p.paths.iter().enumerate() {
        if path.len() < 2 {
            return Err(Violation::TooShort(i));
        }
        if let Some(&v) = path.iter().find(|&&v| v >= inst.n()) {
            return Err(Violation::OutOfRange(i, v));
        }
        let (a, b) = (path[0], path[path.len() - 1]);
        let ba = inst.block_of(a).ok_or(Violation::EndpointNotTerminal(i, a))?;
        let bb = inst.block_of(b).ok_or(Violation::EndpointNotTerminal(i, b))?;
        if ba == bb {
            return Err(Violation::SameBlock(i, ba));
        }
        if let Some(&v) = path[1..path.len() - 1].iter().find(|&&v| inst.is_terminal(v)) {
            return Err(Violation::InternalTerminal(i, v));
        }
        for w in path.windows(2) {
            if !adj.contains(&(w[0].min(w[1]), w[0].max(w[1]))) {
                return Err(Violation::MissingEdge(i, w[0], w[1]));
            }
        }
        for &v in path {
            if used[v] {
                return Err(Violation::VertexReused(v));
            }
            used[v] = true;
        }
    }
    Ok(())
}
