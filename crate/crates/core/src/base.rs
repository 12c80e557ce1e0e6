//! Feasible sets and feasible bases, described combinatorially by the
//! singletons they contain and the forest formed by their lines.

use crate::error::{Error, Result};
use crate::instance::{validate_packing, Instance, Packing};
use crate::representation::{Kind, Representation, WVector};
use std::collections::VecDeque;
use std::fmt;

/// A union of singletons and lines, given by terminal ids and edge ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FeasibleSet {
    pub terminals: Vec<usize>,
    pub edges: Vec<usize>,
}

impl FeasibleSet {
    pub fn new(mut terminals: Vec<usize>, mut edges: Vec<usize>) -> Self {
        terminals.sort_unstable();
        terminals.dedup();
        edges.sort_unstable();
        edges.dedup();
        FeasibleSet { terminals, edges }
    }

    /// The vectors of all elements: singletons, then `e°, e•` per line.
    pub fn vectors(&self, rep: &Representation) -> Result<Vec<WVector>> {
        let mut out = Vec::with_capacity(self.terminals.len() + 2 * self.edges.len());
        for &t in &self.terminals {
            out.push(rep.singleton_vec(t)?);
        }
        for &e in &self.edges {
            let (c, b) = rep.edge_twins(e)?;
            out.push(c);
            out.push(b);
        }
        Ok(out)
    }

    /// Number of vectors.
    pub fn size(&self) -> usize {
        self.terminals.len() + 2 * self.edges.len()
    }
}

/// One connected component `Z` of the forest `G[B]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentInfo {
    pub vertices: Vec<usize>,
    pub terminals: Vec<usize>,
    pub covered: Vec<usize>,
    pub edge_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Defect {
    NotTree,
    SharedBlock,
    TooManyEnds,
    NoTerminal,
    TooFewEnds,
}

fn components(inst: &Instance, set: &FeasibleSet) -> (Vec<usize>, Vec<ComponentInfo>) {
    let n = inst.n();
    let mut adj = vec![Vec::new(); n];
    for &e in &set.edges {
        let (u, v) = inst.edges()[e];
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut covered = vec![false; n];
    for &t in &set.terminals {
        covered[t] = true;
    }
    let mut comp = vec![usize::MAX; n];
    let mut infos = Vec::new();
    for r in 0..n {
        if comp[r] != usize::MAX {
            continue;
        }
        let id = infos.len();
        comp[r] = id;
        let mut verts = vec![r];
        let mut i = 0;
        while i < verts.len() {
            let u = verts[i];
            i += 1;
            for &w in &adj[u] {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    verts.push(w);
                }
            }
        }
        verts.sort_unstable();
        let terminals: Vec<usize> = verts.iter().copied().filter(|&v| inst.is_terminal(v)).collect();
        let cov = terminals.iter().copied().filter(|&t| covered[t]).collect();
        infos.push(ComponentInfo {
            vertices: verts,
            terminals,
            covered: cov,
            edge_count: 0,
        });
    }
    for &e in &set.edges {
        infos[comp[inst.edges()[e].0]].edge_count += 1;
    }
    (comp, infos)
}

fn defects(inst: &Instance, info: &ComponentInfo, base: bool) -> Option<Defect> {
    if info.edge_count + 1 != info.vertices.len() {
        return Some(Defect::NotTree);
    }
    let mut blocks: Vec<usize> = info.terminals.iter().filter_map(|&t| inst.block_of(t)).collect();
    blocks.sort_unstable();
    if blocks.windows(2).any(|w| w[0] == w[1]) {
        return Some(Defect::SharedBlock);
    }
    let ends = info.terminals.len() + info.covered.len();
    if ends > 2 {
        return Some(Defect::TooManyEnds);
    }
    if base {
        if info.terminals.is_empty() {
            return Some(Defect::NoTerminal);
        }
        if ends < 2 {
            return Some(Defect::TooFewEnds);
        }
    }
    None
}

fn well_formed(inst: &Instance, set: &FeasibleSet) -> bool {
    set.terminals.iter().all(|&t| t < inst.n() && inst.is_terminal(t))
        && set.edges.iter().all(|&e| e < inst.m())
        && set.terminals.windows(2).all(|w| w[0] < w[1])
        && set.edges.windows(2).all(|w| w[0] < w[1])
}

/// Whether the vectors of `set` are linearly independent, decided
/// combinatorially: every component of `G[U]` is a tree with at most one
/// terminal per block and at most two terminal ends, counting covered
/// terminals twice.
pub fn is_feasible_independent(inst: &Instance, set: &FeasibleSet) -> bool {
    if !well_formed(inst, set) {
        return false;
    }
    let (_, infos) = components(inst, set);
    infos.iter().all(|c| defects(inst, c, false).is_none())
}

/// Whether `set` is a basis of `W`: independent and every component holds a
/// terminal and exactly two terminal ends.
pub fn is_feasible_base(inst: &Instance, set: &FeasibleSet) -> bool {
    first_defect(inst, set, true).is_none() && well_formed(inst, set)
}

/// The first component defect, if any.
pub fn first_defect(inst: &Instance, set: &FeasibleSet, base: bool) -> Option<(usize, Defect)> {
    let (_, infos) = components(inst, set);
    infos
        .iter()
        .enumerate()
        .find_map(|(i, c)| defects(inst, c, base).map(|d| (i, d)))
}

/// A feasible base with its component bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibleBase {
    set: FeasibleSet,
    comp: Vec<usize>,
    components: Vec<ComponentInfo>,
}

impl FeasibleBase {
    /// Validates `set` and builds the bookkeeping.
    pub fn from_set(inst: &Instance, set: FeasibleSet) -> Result<Self> {
        if !well_formed(inst, &set) {
            return Err(Error::Invariant("malformed feasible set".into()));
        }
        let (comp, components) = components(inst, &set);
        if let Some((i, c)) = components
            .iter()
            .enumerate()
            .find_map(|(i, c)| defects(inst, c, true).map(|d| (i, d)))
        {
            return Err(Error::Invariant(format!(
                "component {i} of the base is defective: {c:?}"
            )));
        }
        Ok(FeasibleBase {
            set,
            comp,
            components,
        })
    }

    pub fn set(&self) -> &FeasibleSet {
        &self.set
    }

    /// Covered terminals `T[B]`, ascending.
    pub fn covered(&self) -> &[usize] {
        &self.set.terminals
    }

    /// Base edges `E[B]`, ascending.
    pub fn edges(&self) -> &[usize] {
        &self.set.edges
    }

    pub fn components(&self) -> &[ComponentInfo] {
        &self.components
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.comp[v]
    }

    /// Number of paths encoded: `|E[B]| - n + k`.
    pub fn packing_size(&self, inst: &Instance) -> usize {
        self.set.edges.len() + inst.k() - inst.n()
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.set.edges.binary_search(&e).is_ok()
    }

    pub fn contains_terminal(&self, t: usize) -> bool {
        self.set.terminals.binary_search(&t).is_ok()
    }

    /// `B' = B - {s, t} - removed lines + added lines`.
    pub fn apply_symmetric_difference(
        &self,
        inst: &Instance,
        add: &[usize],
        remove_singletons: &[usize],
        remove_lines: &[usize],
    ) -> Result<Self> {
        for &t in remove_singletons {
            if !self.contains_terminal(t) {
                return Err(Error::Precondition(format!("singleton {t} not in base")));
            }
        }
        for &e in remove_lines {
            if !self.contains_edge(e) {
                return Err(Error::Precondition(format!("line {e} not in base")));
            }
        }
        for &e in add {
            if e >= inst.m() || self.contains_edge(e) {
                return Err(Error::Precondition(format!("line {e} cannot be added")));
            }
        }
        let terminals = self
            .set
            .terminals
            .iter()
            .copied()
            .filter(|t| !remove_singletons.contains(t))
            .collect();
        let edges = self
            .set
            .edges
            .iter()
            .copied()
            .filter(|e| !remove_lines.contains(e))
            .chain(add.iter().copied())
            .collect();
        let set = FeasibleSet::new(terminals, edges);
        FeasibleBase::from_set(inst, set).map_err(|e| {
            Error::Invariant(format!("symmetric difference is not a feasible base: {e}"))
        })
    }

    /// Vectors of the base in column order: singletons, then `e°, e•` per line.
    pub fn vectors(&self, rep: &Representation) -> Result<Vec<WVector>> {
        self.set.vectors(rep)
    }

    /// Column index of each base element: singleton columns first, then two
    /// per line.
    pub fn singleton_column(&self, t: usize) -> Option<usize> {
        self.set.terminals.binary_search(&t).ok()
    }

    pub fn line_column(&self, e: usize, kind: Kind) -> Option<usize> {
        self.set
            .edges
            .binary_search(&e)
            .ok()
            .map(|i| self.set.terminals.len() + 2 * i + kind.index())
    }

    /// `B: terminals=<ids> edges=<pairs>` with 1-indexed vertices.
    pub fn dump(&self, inst: &Instance) -> String {
        let ts: Vec<String> = self.set.terminals.iter().map(|t| (t + 1).to_string()).collect();
        let es: Vec<String> = self
            .set
            .edges
            .iter()
            .map(|&e| {
                let (u, v) = inst.edges()[e];
                format!("{}-{}", u.min(v) + 1, u.max(v) + 1)
            })
            .collect();
        format!("B: terminals={} edges={}", ts.join(","), es.join(","))
    }
}

impl fmt::Display for FeasibleBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B(|T|={}, |E|={})", self.set.terminals.len(), self.set.edges.len())
    }
}

/// All singletons plus a spanning forest in which every tree holds exactly
/// one terminal, grown from all terminals at once in ascending order.
pub fn initialize_base(inst: &Instance) -> Result<FeasibleBase> {
    let terms = inst.terminals();
    if terms.is_empty() {
        return Err(Error::Precondition("instance has no terminals".into()));
    }
    let adj = inst.adjacency();
    let mut seen = vec![false; inst.n()];
    let mut queue = VecDeque::new();
    for &t in &terms {
        seen[t] = true;
        queue.push_back(t);
    }
    let mut edges = Vec::with_capacity(inst.n() - terms.len());
    while let Some(u) = queue.pop_front() {
        for &(w, e) in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                edges.push(e);
                queue.push_back(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Precondition("instance is not connected".into()));
    }
    FeasibleBase::from_set(inst, FeasibleSet::new(terms, edges))
}

/// A feasible base whose two-terminal trees are exactly the given paths:
/// the path edges, grown into a spanning forest from the paths and from
/// every terminal off the paths. It has `n - k + |packing|` lines.
pub fn base_from_packing(inst: &Instance, packing: &Packing) -> Result<FeasibleBase> {
    validate_packing(inst, packing)
        .map_err(|v| Error::Precondition(format!("not a packing: {v}")))?;
    let n = inst.n();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    let mut edges = Vec::new();
    let adj = inst.adjacency();
    for path in &packing.paths {
        for w in path.windows(2) {
            let e = adj[w[0]]
                .iter()
                .find(|&&(x, _)| x == w[1])
                .map(|&(_, e)| e)
                .expect("validated edge");
            edges.push(e);
        }
        for &v in path {
            seen[v] = true;
            queue.push_back(v);
        }
    }
    let mut covered = Vec::new();
    for t in inst.terminals() {
        if !seen[t] {
            seen[t] = true;
            covered.push(t);
            queue.push_back(t);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &(w, e) in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                edges.push(e);
                queue.push_back(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Precondition("instance is not connected".into()));
    }
    FeasibleBase::from_set(inst, FeasibleSet::new(covered, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::representation::rank;

    fn inst(text: &str) -> Instance {
        Instance::parse(text).unwrap()
    }

    #[test]
    fn init_path() {
        let i = inst("3 2 2\n1\n3\n1 2\n2 3\n");
        let b = initialize_base(&i).unwrap();
        assert_eq!(b.covered(), &[0, 2]);
        assert_eq!(b.edges().len(), 1);
        assert_eq!(b.covered().len() + 2 * b.edges().len(), 2 * 3 - 2);
        let rep = Representation::standard(&i, Field::new(3).unwrap()).unwrap();
        assert_eq!(rank(&rep.field, &b.vectors(&rep).unwrap()), 4);
    }

    #[test]
    fn init_single_and_star() {
        let i = inst("1 0 1\n1\n");
        let b = initialize_base(&i).unwrap();
        assert_eq!((b.covered(), b.edges()), (&[0][..], &[][..]));
        let s = inst("4 3 2\n1\n3 4\n2 1\n2 3\n2 4\n");
        let b = initialize_base(&s).unwrap();
        assert_eq!(b.components().len(), 3);
        assert_eq!(b.edges().len(), 1);
    }

    #[test]
    fn characterisation_examples() {
        let i = inst("3 3 2\n1\n3\n1 2\n2 3\n3 1\n");
        let cyc = FeasibleSet::new(vec![], vec![0, 1, 2]);
        assert!(!is_feasible_independent(&i, &cyc));
        let same = inst("3 2 1\n1 3\n1 2\n2 3\n");
        assert!(!is_feasible_independent(&same, &FeasibleSet::new(vec![], vec![0, 1])));
        let b = initialize_base(&i).unwrap();
        assert!(is_feasible_independent(&i, b.set()));
        assert!(is_feasible_base(&i, b.set()));
        let dropped = FeasibleSet::new(b.covered()[1..].to_vec(), b.edges().to_vec());
        assert_eq!(first_defect(&i, &dropped, true).map(|d| d.1), Some(Defect::TooFewEnds));
        let noterm = inst("3 1 1\n1\n2 3\n");
        let set = FeasibleSet::new(vec![0], vec![0]);
        assert_eq!(first_defect(&noterm, &set, true).map(|d| d.1), Some(Defect::NoTerminal));
    }

    #[test]
    fn symmetric_difference_example() {
        let i = inst("3 2 2\n1\n3\n1 2\n2 3\n");
        let b = FeasibleBase::from_set(&i, FeasibleSet::new(vec![0, 2], vec![0])).unwrap();
        let b2 = b.apply_symmetric_difference(&i, &[1], &[0, 2], &[]).unwrap();
        assert_eq!(b2.edges(), &[0, 1]);
        assert!(b2.covered().is_empty());
        let rep = Representation::standard(&i, Field::new(3).unwrap()).unwrap();
        assert_eq!(rank(&rep.field, &b2.vectors(&rep).unwrap()), 4);
        assert_eq!(b.apply_symmetric_difference(&i, &[], &[], &[]).unwrap(), b);
        assert!(matches!(
            b2.apply_symmetric_difference(&i, &[], &[0], &[]),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            b.apply_symmetric_difference(&i, &[1], &[0], &[]),
            Err(Error::Invariant(_))
        ));
    }

    #[test]
    fn from_packing() {
        let i = inst("5 5 2\n1 4\n3 5\n1 2\n2 3\n3 4\n4 5\n5 1\n");
        let p = Packing {
            paths: vec![vec![0, 1, 2], vec![3, 4]],
        };
        let b = base_from_packing(&i, &p).unwrap();
        assert_eq!(b.packing_size(&i), 2);
        assert!(b.covered().is_empty());
    }

    #[test]
    fn dump_format() {
        let i = inst("3 2 2\n1\n3\n1 2\n2 3\n");
        let b = initialize_base(&i).unwrap();
        assert_eq!(b.dump(&i), "B: terminals=1,3 edges=1-2");
    }
}
