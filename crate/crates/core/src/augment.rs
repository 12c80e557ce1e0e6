//! One augmentation step: given a feasible base and its dependence matrix,
//! find a feasible base with one more line, or certify that none exists.
//!
//! The search walks the dependence graph from a singleton `s`, alternating
//! between non-base lines and base lines, to another singleton `t`. Along
//! the way it carries a projective direction: on a non-base line, the
//! combination of its two rows that survives elimination of everything
//! before it; on a base line, the single row that this combination induces
//! on the line's two columns. States are (line, direction) pairs, so each
//! line is visited at most `q + 1` times. Every candidate is checked by the
//! determinant of the full exchange submatrix before it is accepted.

use crate::base::{base_from_packing, FeasibleBase};
use crate::bounds::{upper_bound, UpperBound};
use crate::dependence::{build_dependence_graph, DependenceGraph, DependenceMatrix};
use crate::error::{Error, Result};
use crate::exact::{find_packing, Exact};
use crate::field::Field;
use crate::representation::{is_nonsingular, rank, Representation};
use serde::Serialize;
use std::collections::VecDeque;

/// `s, l_0, l_1, ..., l_2p, t`: `added` are the non-base lines
/// `l_0, l_2, ...`, `removed` the base lines `l_1, l_3, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AugmentingPath {
    pub s: usize,
    pub t: usize,
    pub added: Vec<usize>,
    pub removed: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// The base already meets an upper bound.
    Bound(UpperBound),
    /// Exhaustive search found no larger packing.
    Exhaustive,
    /// The exhaustive search ran out of budget.
    Unproven,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Via {
    Search,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    NewBase {
        base: FeasibleBase,
        path: Option<AugmentingPath>,
        via: Via,
    },
    Maximum(Certificate),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AugmentStats {
    pub row_states: u64,
    pub col_states: u64,
    pub rejected_candidates: u64,
    pub single_source_passes: u64,
    pub exhaustive_runs: u64,
}

impl AugmentStats {
    pub fn absorb(&mut self, o: &AugmentStats) {
        self.row_states += o.row_states;
        self.col_states += o.col_states;
        self.rejected_candidates += o.rejected_candidates;
        self.single_source_passes += o.single_source_passes;
        self.exhaustive_runs += o.exhaustive_runs;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AugmentOptions {
    /// Re-check every new base with the characterisation and, when the
    /// dimension is at most `rank_check_limit`, with exact rank.
    pub verify: bool,
    pub rank_check_limit: usize,
    /// Step budget of the exhaustive fallback.
    pub exhaustive_budget: u64,
    /// Skip the bound check and the fallback, reporting only what the path
    /// search finds.
    pub search_only: bool,
}

impl Default for AugmentOptions {
    fn default() -> Self {
        AugmentOptions {
            verify: cfg!(debug_assertions),
            rank_check_limit: 400,
            exhaustive_budget: 2_000_000,
            search_only: false,
        }
    }
}

const NONE: u32 = u32::MAX;
const SOURCE: u32 = u32::MAX - 1;

#[derive(Clone, Copy)]
enum Block {
    Single(usize),
    Line(usize),
}

struct Searcher<'a> {
    f: Field,
    inv: Vec<u32>,
    d: &'a DependenceMatrix,
    g: &'a DependenceGraph,
    base: &'a FeasibleBase,
    singles: usize,
    q1: usize,
    stats: AugmentStats,
}

impl<'a> Searcher<'a> {
    fn new(f: Field, d: &'a DependenceMatrix, g: &'a DependenceGraph, base: &'a FeasibleBase) -> Self {
        let inv = (0..f.q()).map(|x| f.inv(x).unwrap_or(0)).collect();
        Searcher {
            f,
            inv,
            d,
            g,
            base,
            singles: base.covered().len(),
            q1: f.q() as usize + 1,
            stats: AugmentStats::default(),
        }
    }

    fn block(&self, c: usize) -> Block {
        if c < self.singles {
            Block::Single(c)
        } else {
            Block::Line((c - self.singles) / 2)
        }
    }

    /// Index in `0..=q` of the projective point of `(a, b)`, with a representative.
    fn normalize(&self, a: u32, b: u32) -> Option<(usize, [u32; 2])> {
        if a != 0 {
            let x = self.f.mul(b, self.inv[a as usize]);
            Some((x as usize, [1, x]))
        } else if b != 0 {
            Some((self.q1 - 1, [0, 1]))
        } else {
            None
        }
    }

    fn dot(&self, w: [u32; 2], x: u32, y: u32) -> u32 {
        self.f.add(self.f.mul(w[0], x), self.f.mul(w[1], y))
    }

    fn search(&mut self, origins: &[usize]) -> Option<AugmentingPath> {
        let f = self.f;
        let d = self.d;
        let q1 = self.q1;
        let nlines = d.rows.len() / 2;
        let blines = self.base.edges().len();
        let mut row_parent = vec![NONE; nlines * q1];
        let mut row_dir = vec![[0u32; 2]; nlines * q1];
        let mut row_origin = vec![0u32; nlines * q1];
        let mut col_parent = vec![NONE; blines * q1];
        let mut col_dir = vec![[0u32; 2]; blines * q1];
        let mut col_origin = vec![0u32; blines * q1];
        let mut stamp_blocks = vec![usize::MAX; self.singles + blines];
        let mut stamp_rows = vec![usize::MAX; nlines];
        let mut tick = 0usize;
        let mut queue: VecDeque<(bool, usize)> = VecDeque::new();

        for &j in origins {
            tick += 1;
            for &(r, _) in &self.g.col_adj[j] {
                let line = r / 2;
                if stamp_rows[line] == tick {
                    continue;
                }
                stamp_rows[line] = tick;
                let (a0, a1) = (d.get(2 * line, j), d.get(2 * line + 1, j));
                if let Some((idx, dir)) = self.normalize(f.neg(a1), a0) {
                    let id = line * q1 + idx;
                    if row_parent[id] == NONE {
                        row_parent[id] = SOURCE;
                        row_dir[id] = dir;
                        row_origin[id] = j as u32;
                        queue.push_back((true, id));
                    }
                }
            }
        }

        while let Some((is_row, id)) = queue.pop_front() {
            tick += 1;
            if is_row {
                self.stats.row_states += 1;
                let line = id / q1;
                let psi = row_dir[id];
                let origin = row_origin[id] as usize;
                let (r0, r1) = (2 * line, 2 * line + 1);
                let cols = self.g.row_adj[r0].iter().chain(&self.g.row_adj[r1]);
                for &(c, _) in cols {
                    let blk = self.block(c);
                    let key = match blk {
                        Block::Single(j) => j,
                        Block::Line(l) => self.singles + l,
                    };
                    if stamp_blocks[key] == tick {
                        continue;
                    }
                    stamp_blocks[key] = tick;
                    match blk {
                        Block::Single(j) => {
                            if j == origin || self.dot(psi, d.get(r0, j), d.get(r1, j)) == 0 {
                                continue;
                            }
                            if let Some(p) = self.finish(origin, j, id, &row_parent, &col_parent) {
                                return Some(p);
                            }
                        }
                        Block::Line(l) => {
                            let c0 = self.singles + 2 * l;
                            let x = self.dot(psi, d.get(r0, c0), d.get(r1, c0));
                            let y = self.dot(psi, d.get(r0, c0 + 1), d.get(r1, c0 + 1));
                            if let Some((idx, dir)) = self.normalize(x, y) {
                                let cid = l * q1 + idx;
                                if col_parent[cid] == NONE {
                                    col_parent[cid] = id as u32;
                                    col_dir[cid] = dir;
                                    col_origin[cid] = origin as u32;
                                    queue.push_back((false, cid));
                                }
                            }
                        }
                    }
                }
            } else {
                self.stats.col_states += 1;
                let l = id / q1;
                let phi = col_dir[id];
                let c0 = self.singles + 2 * l;
                let rows = self.g.col_adj[c0].iter().chain(&self.g.col_adj[c0 + 1]);
                for &(r, _) in rows {
                    let line = r / 2;
                    if stamp_rows[line] == tick {
                        continue;
                    }
                    stamp_rows[line] = tick;
                    let (r0, r1) = (2 * line, 2 * line + 1);
                    // Left kernel of [phi; D[line, l]] is the cross product of its columns.
                    let u = [phi[0], d.get(r0, c0), d.get(r1, c0)];
                    let v = [phi[1], d.get(r0, c0 + 1), d.get(r1, c0 + 1)];
                    let m1 = f.sub(f.mul(u[2], v[0]), f.mul(u[0], v[2]));
                    let m2 = f.sub(f.mul(u[0], v[1]), f.mul(u[1], v[0]));
                    if let Some((idx, dir)) = self.normalize(m1, m2) {
                        let rid = line * q1 + idx;
                        if row_parent[rid] == NONE {
                            row_parent[rid] = id as u32;
                            row_dir[rid] = dir;
                            row_origin[rid] = col_origin[id];
                            queue.push_back((true, rid));
                        }
                    }
                }
            }
        }
        None
    }

    /// Rebuilds the walk ending in row state `id` and accepts it if its
    /// exchange submatrix is nonsingular.
    fn finish(
        &mut self,
        s: usize,
        t: usize,
        id: usize,
        row_parent: &[u32],
        col_parent: &[u32],
    ) -> Option<AugmentingPath> {
        let q1 = self.q1;
        let mut rows = Vec::new();
        let mut cols = Vec::new();
        let mut cur = id;
        loop {
            rows.push(cur / q1);
            let p = row_parent[cur];
            if p == SOURCE {
                break;
            }
            cols.push(p as usize / q1);
            cur = col_parent[p as usize] as usize;
        }
        rows.reverse();
        cols.reverse();
        let distinct = |v: &[usize]| {
            let mut w = v.to_vec();
            w.sort_unstable();
            w.windows(2).all(|x| x[0] != x[1])
        };
        let mut ok = distinct(&rows) && distinct(&cols);
        if ok {
            let mut colset = vec![s, t];
            for &l in &cols {
                colset.push(self.singles + 2 * l);
                colset.push(self.singles + 2 * l + 1);
            }
            let m: Vec<Vec<u32>> = rows
                .iter()
                .flat_map(|&line| [2 * line, 2 * line + 1])
                .map(|r| colset.iter().map(|&c| self.d.get(r, c)).collect())
                .collect();
            ok = is_nonsingular(&self.f, &m);
        }
        if !ok {
            self.stats.rejected_candidates += 1;
            return None;
        }
        let covered = self.base.covered();
        Some(AugmentingPath {
            s: covered[s],
            t: covered[t],
            added: rows.iter().map(|&line| self.d.rows[2 * line].0).collect(),
            removed: cols.iter().map(|&l| self.base.edges()[l]).collect(),
        })
    }
}

fn check_new_base(rep: &Representation, old: &FeasibleBase, new: &FeasibleBase, opts: &AugmentOptions) -> Result<()> {
    if new.edges().len() != old.edges().len() + 1 || new.covered().len() + 2 != old.covered().len() {
        return Err(Error::SearchBug(format!("{new} does not extend {old}")));
    }
    if opts.verify && rep.dim() <= opts.rank_check_limit {
        let r = rank(&rep.field, &new.vectors(rep)?);
        if r != rep.dim() {
            return Err(Error::SearchBug(format!(
                "new base has rank {r}, expected {}: {}",
                rep.dim(),
                new.dump(rep.inst)
            )));
        }
    }
    Ok(())
}

/// Runs only the augmenting-path search: first from all singletons at once,
/// then from each singleton alone.
pub fn search_augmenting_path(
    rep: &Representation,
    base: &FeasibleBase,
    d: &DependenceMatrix,
    stats: &mut AugmentStats,
) -> Option<AugmentingPath> {
    let g = build_dependence_graph(d);
    let mut s = Searcher::new(rep.field, d, &g, base);
    let all: Vec<usize> = (0..base.covered().len()).collect();
    let mut found = s.search(&all);
    if found.is_none() && all.len() >= 2 {
        for &j in &all {
            s.stats.single_source_passes += 1;
            found = s.search(&[j]);
            if found.is_some() {
                break;
            }
        }
    }
    stats.absorb(&s.stats);
    found
}

/// Returns a feasible base with one more line than `base`, or certifies
/// that `base` already has the maximum number of lines.
pub fn augment_or_maximum(
    rep: &Representation,
    base: &FeasibleBase,
    d: &DependenceMatrix,
    opts: &AugmentOptions,
) -> Result<(Outcome, AugmentStats)> {
    let inst = rep.inst;
    let mut stats = AugmentStats::default();
    let p = base.packing_size(inst);
    if !opts.search_only {
        let ub = upper_bound(inst);
        if p >= ub.value {
            return Ok((Outcome::Maximum(Certificate::Bound(ub)), stats));
        }
    }
    if let Some(path) = search_augmenting_path(rep, base, d, &mut stats) {
        let new = base
            .apply_symmetric_difference(inst, &path.added, &[path.s, path.t], &path.removed)
            .map_err(|e| Error::SearchBug(format!("{path:?}: {e}")))?;
        check_new_base(rep, base, &new, opts)?;
        let outcome = Outcome::NewBase {
            base: new,
            path: Some(path),
            via: Via::Search,
        };
        return Ok((outcome, stats));
    }
    if opts.search_only {
        return Ok((Outcome::Maximum(Certificate::Unproven), stats));
    }
    stats.exhaustive_runs += 1;
    match find_packing(inst, p + 1, opts.exhaustive_budget) {
        Exact::Found(packing) => {
            let new = base_from_packing(inst, &packing)?;
            check_new_base(rep, base, &new, opts)?;
            let outcome = Outcome::NewBase {
                base: new,
                path: None,
                via: Via::Exhaustive,
            };
            Ok((outcome, stats))
        }
        Exact::Infeasible => Ok((Outcome::Maximum(Certificate::Exhaustive), stats)),
        Exact::BudgetExceeded => Ok((Outcome::Maximum(Certificate::Unproven), stats)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::initialize_base;
    use crate::dependence::compute_dependence;
    use crate::field::select_prime;
    use crate::instance::Instance;

    fn step(inst: &Instance, base: &FeasibleBase) -> Outcome {
        let f = Field::new(select_prime(inst.num_blocks()).unwrap()).unwrap();
        let rep = Representation::standard(inst, f).unwrap();
        let d = compute_dependence(&rep, base).unwrap();
        augment_or_maximum(&rep, base, &d, &AugmentOptions::default()).unwrap().0
    }

    #[test]
    fn path_augments_then_stops() {
        let i = Instance::parse("3 2 2\n1\n3\n1 2\n2 3\n").unwrap();
        let b = initialize_base(&i).unwrap();
        let Outcome::NewBase { base, via, .. } = step(&i, &b) else {
            panic!("expected augmentation")
        };
        assert_eq!(via, Via::Search);
        assert_eq!(base.edges(), &[0, 1]);
        assert!(base.covered().is_empty());
        assert!(matches!(step(&i, &base), Outcome::Maximum(_)));
    }

    #[test]
    fn search_alone_on_path() {
        let i = Instance::parse("3 2 2\n1\n3\n1 2\n2 3\n").unwrap();
        let rep = Representation::standard(&i, Field::new(3).unwrap()).unwrap();
        let b = initialize_base(&i).unwrap();
        let d = compute_dependence(&rep, &b).unwrap();
        let mut st = AugmentStats::default();
        let p = search_augmenting_path(&rep, &b, &d, &mut st).unwrap();
        assert_eq!((p.s, p.t), (0, 2));
        assert_eq!((p.added, p.removed), (vec![1], vec![]));
    }

    #[test]
    fn star_stops_after_one() {
        let i = Instance::parse("4 3 2\n1\n3 4\n2 1\n2 3\n2 4\n").unwrap();
        let b = initialize_base(&i).unwrap();
        let Outcome::NewBase { base, .. } = step(&i, &b) else {
            panic!("expected augmentation")
        };
        assert!(matches!(step(&i, &base), Outcome::Maximum(_)));
    }
}
