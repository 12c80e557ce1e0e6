//! The main loop: initialise a base, augment until maximal, and read the
//! packing off the final base. Components are solved independently.

use crate::augment::{augment_or_maximum, AugmentOptions, AugmentStats, Certificate, Outcome, Via};
use crate::base::{initialize_base, FeasibleBase};
use crate::dependence::compute_dependence;
use crate::error::{Error, Result};
use crate::field::{select_prime, Field};
use crate::instance::{Component, Instance, Packing};
use crate::representation::{Labeling, Representation};
use serde::Serialize;
use std::collections::VecDeque;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub augment: AugmentOptions,
    /// Check the reconstruction identity and base invariants every iteration.
    pub verify: bool,
    /// Worker threads for independent components.
    pub threads: usize,
    /// Reverse every edge orientation.
    pub flip_orientation: bool,
    /// Keep a dump of every base and dependence matrix.
    pub dump: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            augment: AugmentOptions::default(),
            verify: cfg!(debug_assertions),
            threads: 1,
            flip_orientation: false,
            dump: false,
        }
    }
}

impl SolveOptions {
    /// No per-iteration verification.
    pub fn fast() -> Self {
        SolveOptions {
            augment: AugmentOptions {
                verify: false,
                ..AugmentOptions::default()
            },
            verify: false,
            ..SolveOptions::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Proof {
    /// Fewer than two blocks meet the component.
    Trivial,
    /// The packing meets an upper bound.
    Bound,
    /// Exhaustive search ruled out a larger packing.
    Exhaustive,
    /// Maximality rests on the augmenting-path search alone.
    SearchOnly,
}

/// One base and its dependence matrix, kept when dumping.
#[derive(Debug, Clone, Serialize)]
pub struct Dump {
    pub base: String,
    pub dependence_csv: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentReport {
    pub vertices: usize,
    pub edges: usize,
    pub terminals: usize,
    /// Augmentations that produced a new base.
    pub iterations: usize,
    pub augment_calls: usize,
    pub exhaustive_augmentations: usize,
    pub initial_lines: usize,
    pub final_lines: usize,
    pub packing_size: usize,
    pub proof: Proof,
    /// Field operations of each dependence-matrix computation.
    pub dependence_ops: Vec<u64>,
    /// Line and singleton counts after each step, starting with the initial base.
    pub trace: Vec<(usize, usize)>,
    pub search: AugmentStats,
    #[serde(skip)]
    pub dumps: Vec<Dump>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub packing: Packing,
    pub packing_size: usize,
    pub q: Option<u32>,
    pub components: Vec<ComponentReport>,
    pub elapsed_ms: u128,
}

impl SolveReport {
    pub fn iterations(&self) -> usize {
        self.components.iter().map(|c| c.iterations).sum()
    }

    pub fn dependence_ops(&self) -> u64 {
        self.components.iter().flat_map(|c| &c.dependence_ops).sum()
    }

    /// Every component's maximality has a proof beyond the search itself.
    pub fn proven(&self) -> bool {
        self.components.iter().all(|c| c.proof != Proof::SearchOnly)
    }

    /// `key=value` lines.
    pub fn stats_text(&self) -> String {
        let sum = |f: &dyn Fn(&ComponentReport) -> u64| -> u64 { self.components.iter().map(f).sum() };
        let mut out = vec![
            format!("q={}", self.q.map_or("none".to_string(), |q| q.to_string())),
            format!("packing_size={}", self.packing_size),
            format!("components={}", self.components.len()),
            format!("iterations={}", self.iterations()),
            format!("augment_calls={}", sum(&|c| c.augment_calls as u64)),
            format!("exhaustive_augmentations={}", sum(&|c| c.exhaustive_augmentations as u64)),
            format!("dependence_field_ops={}", self.dependence_ops()),
            format!("search_row_states={}", sum(&|c| c.search.row_states)),
            format!("search_col_states={}", sum(&|c| c.search.col_states)),
            format!("search_rejected={}", sum(&|c| c.search.rejected_candidates)),
            format!("exhaustive_runs={}", sum(&|c| c.search.exhaustive_runs)),
            format!("proven={}", self.proven()),
            format!("elapsed_ms={}", self.elapsed_ms),
        ];
        out.push(String::new());
        out.join("\n")
    }
}

/// The tree path between the two terminals of every component of `G[B]`
/// that covers no terminal.
pub fn restore_packing(inst: &Instance, base: &FeasibleBase) -> Result<Packing> {
    let mut tree_adj = vec![Vec::new(); inst.n()];
    for &e in base.edges() {
        let (u, v) = inst.edges()[e];
        tree_adj[u].push(v);
        tree_adj[v].push(u);
    }
    let mut back = vec![usize::MAX; inst.n()];
    let mut paths = Vec::new();
    for comp in base.components() {
        match (comp.terminals.as_slice(), comp.covered.len()) {
            (&[_], 1) => {}
            (&[t1, t2], 0) => {
                back[t1] = t1;
                let mut queue = VecDeque::from([t1]);
                while let Some(u) = queue.pop_front() {
                    for &w in &tree_adj[u] {
                        if back[w] == usize::MAX {
                            back[w] = u;
                            queue.push_back(w);
                        }
                    }
                }
                let mut path = vec![t2];
                let mut v = t2;
                while v != t1 {
                    v = back[v];
                    path.push(v);
                }
                path.reverse();
                paths.push(path);
            }
            _ => return Err(Error::Invariant("final base is not feasible".into())),
        }
    }
    Ok(Packing { paths })
}

fn empty_report(inst: &Instance) -> ComponentReport {
    ComponentReport {
        vertices: inst.n(),
        edges: inst.m(),
        terminals: inst.k(),
        iterations: 0,
        augment_calls: 0,
        exhaustive_augmentations: 0,
        initial_lines: 0,
        final_lines: 0,
        packing_size: 0,
        proof: Proof::Trivial,
        dependence_ops: Vec::new(),
        trace: Vec::new(),
        search: AugmentStats::default(),
        dumps: Vec::new(),
    }
}

/// Solves one connected instance. Returns the final base (if the reduction
/// ran), its packing, and the report.
pub fn solve_connected(
    inst: &Instance,
    field: Field,
    labeling: Labeling,
    opts: &SolveOptions,
) -> Result<(Option<FeasibleBase>, Packing, ComponentReport)> {
    let mut report = empty_report(inst);
    if inst.num_blocks() < 2 {
        return Ok((None, Packing::default(), report));
    }
    let labeling = if opts.flip_orientation {
        labeling.flipped(inst)
    } else {
        labeling
    };
    let rep = Representation::new(inst, field, labeling)?;
    let mut base = initialize_base(inst)?;
    report.initial_lines = base.edges().len();
    report.trace.push((base.edges().len(), base.covered().len()));
    loop {
        let d = compute_dependence(&rep, &base)?;
        if opts.verify {
            if base.covered().len() + 2 * base.edges().len() != rep.dim() {
                return Err(Error::Invariant("base size identity fails".into()));
            }
            d.verify_reconstruction(&rep, &base)?;
        }
        if opts.dump {
            report.dumps.push(Dump {
                base: base.dump(inst),
                dependence_csv: d.to_csv(),
            });
        }
        report.dependence_ops.push(d.ops);
        report.augment_calls += 1;
        let (outcome, stats) = augment_or_maximum(&rep, &base, &d, &opts.augment)?;
        report.search.absorb(&stats);
        match outcome {
            Outcome::NewBase { base: next, via, .. } => {
                if next.edges().len() != base.edges().len() + 1
                    || next.covered().len() + 2 != base.covered().len()
                {
                    return Err(Error::Invariant("augmentation changed sizes wrongly".into()));
                }
                base = next;
                report.iterations += 1;
                if via == Via::Exhaustive {
                    report.exhaustive_augmentations += 1;
                }
                report.trace.push((base.edges().len(), base.covered().len()));
                if report.iterations > inst.k() / 2 {
                    return Err(Error::Invariant("more augmentations than k / 2".into()));
                }
            }
            Outcome::Maximum(cert) => {
                report.proof = match cert {
                    Certificate::Bound(_) => Proof::Bound,
                    Certificate::Exhaustive => Proof::Exhaustive,
                    Certificate::Unproven => Proof::SearchOnly,
                };
                break;
            }
        }
    }
    let packing = restore_packing(inst, &base)?;
    report.final_lines = base.edges().len();
    report.packing_size = packing.len();
    if packing.len() != base.packing_size(inst) {
        return Err(Error::Invariant("packing size differs from |E[B]| - n + k".into()));
    }
    Ok((Some(base), packing, report))
}

fn solve_component(c: &Component, field: Option<Field>, opts: &SolveOptions) -> Result<(Packing, ComponentReport)> {
    let Some(field) = field else {
        return Ok((Packing::default(), empty_report(&c.inst)));
    };
    let labeling = Labeling::with_block_ids(&c.inst, field, &c.block_ids)?;
    let (_, local, report) = solve_connected(&c.inst, field, labeling, opts)?;
    let paths = local
        .paths
        .into_iter()
        .map(|p| p.into_iter().map(|v| c.vertex_map[v]).collect())
        .collect();
    Ok((Packing { paths }, report))
}

pub fn solve(inst: &Instance) -> Result<SolveReport> {
    solve_with(inst, &SolveOptions::default())
}

pub fn solve_with(inst: &Instance, opts: &SolveOptions) -> Result<SolveReport> {
    let start = Instant::now();
    let q = if inst.num_blocks() >= 2 {
        Some(select_prime(inst.num_blocks())?)
    } else {
        None
    };
    let field = q.map(Field::new).transpose()?;
    let comps = inst.connected_components();
    let threads = opts.threads.max(1).min(comps.len().max(1));
    let results: Vec<Result<(Packing, ComponentReport)>> = if threads <= 1 {
        comps.iter().map(|c| solve_component(c, field, opts)).collect()
    } else {
        let mut slots: Vec<Option<Result<(Packing, ComponentReport)>>> = vec![None; comps.len()];
        let chunk = comps.len().div_ceil(threads);
        std::thread::scope(|s| {
            for (cs, out) in comps.chunks(chunk).zip(slots.chunks_mut(chunk)) {
                s.spawn(move || {
                    for (c, o) in cs.iter().zip(out.iter_mut()) {
                        *o = Some(solve_component(c, field, opts));
                    }
                });
            }
        });
        slots.into_iter().map(|r| r.expect("every component solved")).collect()
    };
    let mut packing = Packing::default();
    let mut components = Vec::with_capacity(results.len());
    for r in results {
        let (p, rep) = r?;
        packing.paths.extend(p.paths);
        components.push(rep);
    }
    Ok(SolveReport {
        packing_size: packing.len(),
        packing,
        q,
        components,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::FeasibleSet;
    use crate::instance::validate_packing;

    fn inst(text: &str) -> Instance {
        Instance::parse(text).unwrap()
    }

    #[test]
    fn path() {
        let i = inst("3 2 2\n1\n3\n1 2\n2 3\n");
        let r = solve(&i).unwrap();
        assert_eq!(r.packing_size, 1);
        assert_eq!(r.packing.paths, vec![vec![0, 1, 2]]);
        assert_eq!(r.q, Some(3));
    }

    #[test]
    fn triangle() {
        let i = inst("3 3 3\n1\n2\n3\n1 2\n2 3\n3 1\n");
        let r = solve(&i).unwrap();
        assert_eq!(r.packing_size, 1);
        validate_packing(&i, &r.packing).unwrap();
    }

    #[test]
    fn single_block() {
        let i = inst("3 2 1\n1 3\n1 2\n2 3\n");
        let r = solve(&i).unwrap();
        assert_eq!(r.packing_size, 0);
        assert_eq!(r.q, None);
    }

    #[test]
    fn restore_examples() {
        let i = inst("3 2 2\n1\n3\n1 2\n2 3\n");
        let b = FeasibleBase::from_set(&i, FeasibleSet::new(vec![], vec![0, 1])).unwrap();
        assert_eq!(restore_packing(&i, &b).unwrap().paths, vec![vec![0, 1, 2]]);
        let b0 = initialize_base(&i).unwrap();
        assert!(restore_packing(&i, &b0).unwrap().is_empty());
        let two = inst("5 3 3\n1\n3\n4\n1 2\n2 3\n4 5\n");
        let b = FeasibleBase::from_set(&two, FeasibleSet::new(vec![3], vec![0, 1, 2])).unwrap();
        assert_eq!(restore_packing(&two, &b).unwrap().paths, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn disconnected_and_threads() {
        let i = inst("6 4 2\n1 4\n3 6\n1 2\n2 3\n4 5\n5 6\n");
        let one = solve(&i).unwrap();
        let opts = SolveOptions {
            threads: 2,
            ..SolveOptions::default()
        };
        let two = solve_with(&i, &opts).unwrap();
        assert_eq!(one.packing, two.packing);
        assert_eq!(one.packing_size, 2);
        validate_packing(&i, &one.packing).unwrap();
    }
}
