//! Brute-force ground truth for small instances.

use crate::error::{Error, Result};
use crate::field::{select_prime, Field};
use crate::instance::{Instance, Packing};
use crate::representation::{rank, Representation};
use std::collections::HashMap;

pub const DEFAULT_PACKING_CAP: usize = 10;
pub const MAX_PACKING_CAP: usize = 20;
pub const DEFAULT_LINES_CAP: (usize, usize) = (7, 10);

/// Every S-path as (vertex mask, path), one per vertex set.
fn all_s_paths(inst: &Instance) -> Vec<(u32, Vec<usize>)> {
    let n = inst.n();
    let adj: Vec<Vec<usize>> = inst
        .adjacency()
        .into_iter()
        .map(|a| {
            let mut v: Vec<usize> = a.into_iter().map(|x| x.0).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    let mut found: HashMap<u32, Vec<usize>> = HashMap::new();
    fn dfs(
        inst: &Instance,
        adj: &[Vec<usize>],
        path: &mut Vec<usize>,
        mask: u32,
        found: &mut HashMap<u32, Vec<usize>>,
    ) {
        let u = *path.last().unwrap();
        for &w in &adj[u] {
            if mask & (1 << w) != 0 {
                continue;
            }
            path.push(w);
            match inst.block_of(w) {
                Some(b) => {
                    if Some(b) != inst.block_of(path[0]) && path[0] < w {
                        found.entry(mask | 1 << w).or_insert_with(|| path.clone());
                    }
                }
                None => dfs(inst, adj, path, mask | 1 << w, found),
            }
            path.pop();
        }
    }
    for t in 0..n {
        if inst.is_terminal(t) {
            dfs(inst, &adj, &mut vec![t], 1 << t, &mut found);
        }
    }
    let mut out: Vec<(u32, Vec<usize>)> = found.into_iter().collect();
    out.sort();
    out
}

/// Maximum S-path packing by enumerating all S-paths and packing their
/// vertex sets exactly. Refuses instances with more than `cap` vertices.
pub fn brute_force_packing(inst: &Instance, cap: usize) -> Result<(usize, Packing)> {
    let cap = cap.min(MAX_PACKING_CAP);
    if inst.n() > cap {
        return Err(Error::OracleCap(format!("n = {} exceeds cap {cap}", inst.n())));
    }
    let paths = all_s_paths(inst);
    let masks: Vec<u32> = paths.iter().map(|p| p.0).collect();
    // best[used] for the paths from index i on is memoised per (i, used).
    let mut memo: HashMap<(usize, u32), usize> = HashMap::new();
    fn best(i: usize, used: u32, masks: &[u32], memo: &mut HashMap<(usize, u32), usize>) -> usize {
        if i == masks.len() {
            return 0;
        }
        if let Some(&v) = memo.get(&(i, used)) {
            return v;
        }
        let mut v = best(i + 1, used, masks, memo);
        if masks[i] & used == 0 {
            v = v.max(1 + best(i + 1, used | masks[i], masks, memo));
        }
        memo.insert((i, used), v);
        v
    }
    let p = best(0, 0, &masks, &mut memo);
    let mut chosen = Vec::new();
    let (mut i, mut used, mut left) = (0, 0u32, p);
    while left > 0 {
        if masks[i] & used == 0 && 1 + best(i + 1, used | masks[i], &masks, &mut memo) == left {
            chosen.push(paths[i].1.clone());
            used |= masks[i];
            left -= 1;
        }
        i += 1;
    }
    Ok((p, Packing { paths: chosen }))
}

/// Maximum number of lines in a feasible base, by enumerating every
/// singleton set and edge subset of the right size and testing rank.
/// Requires at least two blocks.
pub fn brute_force_max_lines(inst: &Instance, cap: (usize, usize)) -> Result<usize> {
    if inst.n() > cap.0 || inst.m() > cap.1 {
        return Err(Error::OracleCap(format!(
            "n = {}, m = {} exceeds cap {cap:?}",
            inst.n(),
            inst.m()
        )));
    }
    if inst.num_blocks() < 2 {
        return Err(Error::Precondition("need at least two blocks".into()));
    }
    let field = Field::new(select_prime(inst.num_blocks())?)?;
    let rep = Representation::standard(inst, field)?;
    let dim = rep.dim();
    let terms = inst.terminals();
    let singles: Vec<_> = terms.iter().map(|&t| rep.singleton_vec(t)).collect::<Result<_>>()?;
    let lines: Vec<_> = (0..inst.m()).map(|e| rep.edge_twins(e)).collect::<Result<_>>()?;
    let mut best = None;
    for emask in 0u32..1 << inst.m() {
        let ecount = emask.count_ones() as usize;
        if 2 * ecount > dim || best.is_some_and(|b| b >= ecount) {
            continue;
        }
        let need = dim - 2 * ecount;
        if need > terms.len() {
            continue;
        }
        let mut base_vecs = Vec::with_capacity(dim);
        for (e, (c, b)) in lines.iter().enumerate() {
            if emask & (1 << e) != 0 {
                base_vecs.push(c.clone());
                base_vecs.push(b.clone());
            }
        }
        if rank(&field, &base_vecs) != base_vecs.len() {
            continue;
        }
        for tmask in 0u32..1 << terms.len() {
            if tmask.count_ones() as usize != need {
                continue;
            }
            let mut vecs = base_vecs.clone();
            for (i, s) in singles.iter().enumerate() {
                if tmask & (1 << i) != 0 {
                    vecs.push(s.clone());
                }
            }
            if rank(&field, &vecs) == dim {
                best = Some(ecount);
                break;
            }
        }
    }
    best.ok_or_else(|| Error::Invariant("no feasible base exists".into()))
}
