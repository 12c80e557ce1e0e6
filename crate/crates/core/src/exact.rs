//! Exhaustive search for a packing of a given size, used when the
//! augmenting-path search fails and the upper bounds do not certify
//! maximality.

use crate::instance::{Instance, Packing};
use std::collections::HashSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exact {
    Found(Packing),
    Infeasible,
    BudgetExceeded,
}

struct Search<'a> {
    inst: &'a Instance,
    adj: Vec<Vec<usize>>,
    blocked: Vec<bool>,
    failed: HashSet<(Vec<u64>, usize)>,
    steps: u64,
    budget: u64,
    chosen: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn key(&self) -> Vec<u64> {
        let mut k = vec![0u64; self.blocked.len().div_ceil(64)];
        for (v, &b) in self.blocked.iter().enumerate() {
            if b {
                k[v / 64] |= 1 << (v % 64);
            }
        }
        k
    }

    /// Paths stay inside one class of the unblocked graph; bound each class
    /// by its terminals.
    fn bound(&self) -> usize {
        let n = self.inst.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(u, v) in self.inst.edges() {
            if self.blocked[u] || self.blocked[v] {
                continue;
            }
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a] = b;
            }
        }
        // Terminal-terminal edges join classes only as complete paths, which
        // the union above already accounts for.
        let mut per_class: std::collections::HashMap<usize, Vec<usize>> = Default::default();
        for t in self.inst.terminals() {
            if !self.blocked[t] {
                let r = find(&mut parent, t);
                per_class.entry(r).or_default().push(self.inst.block_of(t).unwrap());
            }
        }
        per_class
            .values()
            .map(|bs| {
                let mut counts = std::collections::HashMap::new();
                for &b in bs {
                    *counts.entry(b).or_insert(0usize) += 1;
                }
                let largest = counts.values().copied().max().unwrap_or(0);
                (bs.len() / 2).min(bs.len() - largest)
            })
            .sum()
    }

    fn run(&mut self, need: usize) -> Option<bool> {
        if need == 0 {
            return Some(true);
        }
        self.steps += 1;
        if self.steps > self.budget {
            return None;
        }
        if self.bound() < need {
            return Some(false);
        }
        let key = (self.key(), need);
        if self.failed.contains(&key) {
            return Some(false);
        }
        let t = match self.inst.terminals().into_iter().find(|&t| !self.blocked[t]) {
            Some(t) => t,
            None => return Some(false),
        };
        self.blocked[t] = true;
        let mut seen_sets = HashSet::new();
        let mut path = vec![t];
        if self.extend(&mut path, need, &mut seen_sets)? {
            return Some(true);
        }
        let r = self.run(need)?;
        self.blocked[t] = false;
        if !r {
            self.failed.insert(key);
        }
        Some(r)
    }

    /// Grows `path` (whose vertices are blocked) through non-terminals.
    fn extend(&mut self, path: &mut Vec<usize>, need: usize, seen: &mut HashSet<Vec<u64>>) -> Option<bool> {
        let u = *path.last().unwrap();
        let start_block = self.inst.block_of(path[0]);
        for i in 0..self.adj[u].len() {
            let w = self.adj[u][i];
            if self.blocked[w] {
                continue;
            }
            self.steps += 1;
            if self.steps > self.budget {
                return None;
            }
            self.blocked[w] = true;
            path.push(w);
            let done = match self.inst.block_of(w) {
                Some(b) if Some(b) != start_block => {
                    if seen.insert(self.key()) {
                        self.chosen.push(path.clone());
                        let r = self.run(need - 1)?;
                        if !r {
                            self.chosen.pop();
                        }
                        r
                    } else {
                        false
                    }
                }
                Some(_) => false,
                None => self.extend(path, need, seen)?,
            };
            if done {
                return Some(true);
            }
            path.pop();
            self.blocked[w] = false;
        }
        Some(false)
    }
}

/// Looks for `target` vertex-disjoint S-paths, giving up after `budget`
/// search steps.
pub fn find_packing(inst: &Instance, target: usize, budget: u64) -> Exact {
    let mut adj: Vec<Vec<usize>> = inst.adjacency().into_iter().map(|a| a.into_iter().map(|x| x.0).collect()).collect();
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    let mut s = Search {
        inst,
        adj,
        blocked: vec![false; inst.n()],
        failed: HashSet::new(),
        steps: 0,
        budget,
        chosen: Vec::new(),
    };
    match s.run(target) {
        Some(true) => Exact::Found(Packing { paths: s.chosen }),
        Some(false) => Exact::Infeasible,
        None => Exact::BudgetExceeded,
    }
}
