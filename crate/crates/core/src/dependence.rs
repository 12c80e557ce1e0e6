//! The dependence matrix `D(B)`: coefficients expressing every twin of a
//! non-base line in the base `B`, computed by forest traversals.

use crate::base::FeasibleBase;
use crate::error::{Error, Result};
use crate::representation::{Kind, Representation};
use std::fmt::Write as _;

/// Dense `|L \ B| x |B|` matrix with entries stored as `u16` residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependenceMatrix {
    /// Row labels: both twins of every non-base edge, ascending edge id,
    /// circ before bullet.
    pub rows: Vec<(usize, Kind)>,
    /// Number of columns, `|B| = 2n - k`.
    pub cols: usize,
    data: Vec<u16>,
    /// Field operations spent building the matrix.
    pub ops: u64,
    /// Traversals per component of `G[B]`, in component order.
    pub traversals: Vec<usize>,
}

impl DependenceMatrix {
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c] as u32
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u16] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Row index of twin `kind` of non-base edge `e`.
    pub fn row_of(&self, e: usize, kind: Kind) -> Option<usize> {
        self.rows
            .binary_search_by_key(&(e, kind.index()), |&(f, k)| (f, k.index()))
            .ok()
    }

    /// `row,col,value` lines for every nonzero entry.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("row,col,value\n");
        for r in 0..self.rows.len() {
            for (c, &v) in self.row(r).iter().enumerate() {
                if v != 0 {
                    let _ = writeln!(s, "{r},{c},{v}");
                }
            }
        }
        s
    }

    /// Checks `sum_b d(w, b) b = w` for every row, exactly.
    pub fn verify_reconstruction(&self, rep: &Representation, base: &FeasibleBase) -> Result<()> {
        let f = rep.field;
        let inst = rep.inst;
        let cols = column_vectors(rep, base);
        for (r, &(e, kind)) in self.rows.iter().enumerate() {
            let mut acc = rep.zero();
            for (c, &d) in self.row(r).iter().enumerate() {
                if d != 0 {
                    for &(i, x) in &cols[c] {
                        acc[i] = f.add(acc[i], f.mul(d as u32, x));
                    }
                }
            }
            if acc != rep.edge_twin(e, kind)? {
                let (u, v) = inst.edges()[e];
                return Err(Error::Invariant(format!(
                    "row for {kind:?} twin of edge {}-{} does not reconstruct",
                    u + 1,
                    v + 1
                )));
            }
        }
        Ok(())
    }
}

/// Sparse vectors of the base columns.
pub fn column_vectors(rep: &Representation, base: &FeasibleBase) -> Vec<Vec<(usize, u32)>> {
    let f = rep.field;
    let mut cols: Vec<Vec<(usize, u32)>> = base
        .covered()
        .iter()
        .map(|&t| vec![(rep.singleton_index(t), 1)])
        .collect();
    for &e in base.edges() {
        let (u, v) = rep.inst.edges()[e];
        for kind in Kind::BOTH {
            let (iu, cu) = rep.twin_entry(u, kind);
            let (iv, cv) = rep.twin_entry(v, kind);
            cols.push(vec![
                (iu, f.mul(rep.mu(e, u), cu)),
                (iv, f.mul(rep.mu(e, v), cv)),
            ]);
        }
    }
    cols
}

struct Rows {
    width: usize,
    data: Vec<u16>,
    ops: u64,
}

impl Rows {
    fn idx(&self, v: usize, kind: Kind) -> usize {
        (2 * v + kind.index()) * self.width
    }

    fn clear(&mut self, v: usize, kind: Kind) {
        let i = self.idx(v, kind);
        self.data[i..i + self.width].fill(0);
        self.ops += self.width as u64;
    }

    fn copy(&mut self, from: usize, to: usize, kind: Kind) {
        let (a, b) = (self.idx(from, kind), self.idx(to, kind));
        self.data.copy_within(a..a + self.width, b);
        self.ops += self.width as u64;
    }

    fn add_at(&mut self, rep: &Representation, v: usize, kind: Kind, col: usize, x: u32) {
        let i = self.idx(v, kind) + col;
        self.data[i] = rep.field.add(self.data[i] as u32, x) as u16;
        self.ops += 1;
    }

    fn row(&self, v: usize, kind: Kind) -> &[u16] {
        let i = self.idx(v, kind);
        &self.data[i..i + self.width]
    }
}

/// Breadth-first order of a tree of `G[B]` from `root`, as
/// `(vertex, parent, edge)` triples after the root.
fn tree_order(tree_adj: &[Vec<(usize, usize)>], root: usize, mark: &mut [usize], stamp: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    let mut queue = std::collections::VecDeque::from([root]);
    mark[root] = stamp;
    while let Some(u) = queue.pop_front() {
        for &(w, e) in &tree_adj[u] {
            if mark[w] != stamp {
                mark[w] = stamp;
                out.push((w, u, e));
                queue.push_back(w);
            }
        }
    }
    out
}

/// Computes `D(B)` in `O(mn)` field operations without matrix inversion.
///
/// Each component of `G[B]` with a covered terminal is traversed once from
/// it. A component with two uncovered terminals `t1 < t2` is traversed from
/// `t1` with a zero root row, which yields `t2 - t1` and
/// `theta(t2) t2 - theta(t1) t1`; these give the true row of `t2`, and a
/// second traversal from `t2` fills in every vertex.
pub fn compute_dependence(rep: &Representation, base: &FeasibleBase) -> Result<DependenceMatrix> {
    let inst = rep.inst;
    let f = rep.field;
    if f.q() > u16::MAX as u32 {
        return Err(Error::Precondition("modulus does not fit 16-bit storage".into()));
    }
    let width = rep.dim();
    if base.covered().len() + 2 * base.edges().len() != width {
        return Err(Error::Invariant("base size differs from 2n - k".into()));
    }
    let mut tree_adj = vec![Vec::new(); inst.n()];
    for &e in base.edges() {
        let (u, v) = inst.edges()[e];
        tree_adj[u].push((v, e));
        tree_adj[v].push((u, e));
    }
    let mut rows = Rows {
        width,
        data: vec![0; 2 * inst.n() * width],
        ops: 0,
    };
    let mut mark = vec![usize::MAX; inst.n()];
    let mut stamp = 0;
    let mut traversals = Vec::with_capacity(base.components().len());
    let propagate = |rows: &mut Rows, order: &[(usize, usize, usize)]| {
        for &(v, u, e) in order {
            let mu = rep.mu(e, v);
            for kind in Kind::BOTH {
                rows.copy(u, v, kind);
                let col = base.line_column(e, kind).expect("tree edge is in the base");
                rows.add_at(rep, v, kind, col, mu);
            }
        }
    };
    for comp in base.components() {
        match (comp.terminals.as_slice(), comp.covered.as_slice()) {
            (&[t], &[_]) => {
                let col = base.singleton_column(t).expect("covered terminal");
                let theta = rep.theta_of(t).expect("terminal");
                rows.clear(t, Kind::Circ);
                rows.clear(t, Kind::Bullet);
                rows.add_at(rep, t, Kind::Circ, col, 1);
                rows.add_at(rep, t, Kind::Bullet, col, theta);
                let order = tree_order(&tree_adj, t, &mut mark, stamp);
                stamp += 1;
                propagate(&mut rows, &order);
                traversals.push(1);
            }
            (&[t1, t2], &[]) => {
                let th1 = rep.theta_of(t1).expect("terminal");
                let th2 = rep.theta_of(t2).expect("terminal");
                rows.clear(t1, Kind::Circ);
                rows.clear(t1, Kind::Bullet);
                let order = tree_order(&tree_adj, t1, &mut mark, stamp);
                stamp += 1;
                propagate(&mut rows, &order);
                let denom = f.sub(th1, th2);
                let inv = f.inv(denom).map_err(|_| {
                    Error::Invariant(format!(
                        "terminals {} and {} share a block inside one tree",
                        t1 + 1,
                        t2 + 1
                    ))
                })?;
                let i2c = rows.idx(t2, Kind::Circ);
                let i2b = rows.idx(t2, Kind::Bullet);
                for c in 0..width {
                    let x = f.sub(
                        f.mul(th1, rows.data[i2c + c] as u32),
                        rows.data[i2b + c] as u32,
                    );
                    let x = f.mul(x, inv);
                    rows.data[i2c + c] = x as u16;
                    rows.data[i2b + c] = f.mul(th2, x) as u16;
                }
                rows.ops += 4 * width as u64;
                let order = tree_order(&tree_adj, t2, &mut mark, stamp);
                stamp += 1;
                propagate(&mut rows, &order);
                traversals.push(2);
            }
            _ => {
                return Err(Error::Invariant(
                    "component of G[B] violates the base characterisation".into(),
                ))
            }
        }
    }
    let non_base: Vec<usize> = (0..inst.m()).filter(|&e| !base.contains_edge(e)).collect();
    let mut labels = Vec::with_capacity(2 * non_base.len());
    let mut data = vec![0u16; 2 * non_base.len() * width];
    let mut ops = rows.ops;
    for (i, &e) in non_base.iter().enumerate() {
        let (u, v) = inst.edges()[e];
        let (mu_u, mu_v) = (rep.mu(e, u), rep.mu(e, v));
        for kind in Kind::BOTH {
            let r = 2 * i + kind.index();
            let out = &mut data[r * width..(r + 1) * width];
            let (ru, rv) = (rows.row(u, kind), rows.row(v, kind));
            for c in 0..width {
                let a = f.mul(mu_u, ru[c] as u32);
                let b = f.mul(mu_v, rv[c] as u32);
                out[c] = f.add(a, b) as u16;
            }
            ops += 2 * width as u64;
            labels.push((e, kind));
        }
    }
    Ok(DependenceMatrix {
        rows: labels,
        cols: width,
        data,
        ops,
        traversals,
    })
}

/// Nonzero pattern of `D(B)` with its scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependenceGraph {
    /// For each row, `(column, value)` pairs in ascending column.
    pub row_adj: Vec<Vec<(usize, u32)>>,
    /// For each column, `(row, value)` pairs in ascending row.
    pub col_adj: Vec<Vec<(usize, u32)>>,
}

pub fn build_dependence_graph(d: &DependenceMatrix) -> DependenceGraph {
    let mut row_adj = vec![Vec::new(); d.rows.len()];
    let mut col_adj = vec![Vec::new(); d.cols];
    for (r, adj) in row_adj.iter_mut().enumerate() {
        for (c, &x) in d.row(r).iter().enumerate() {
            if x != 0 {
                adj.push((c, x as u32));
                col_adj[c].push((r, x as u32));
            }
        }
    }
    DependenceGraph { row_adj, col_adj }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{initialize_base, FeasibleSet};
    use crate::field::Field;
    use crate::instance::Instance;

    fn path3() -> Instance {
        Instance::parse("3 2 2\n1\n3\n1 2\n2 3\n").unwrap()
    }

    #[test]
    fn path_example() {
        let i = path3();
        let rep = Representation::standard(&i, Field::new(3).unwrap()).unwrap();
        let b = FeasibleBase::from_set(&i, FeasibleSet::new(vec![0, 2], vec![0])).unwrap();
        let d = compute_dependence(&rep, &b).unwrap();
        d.verify_reconstruction(&rep, &b).unwrap();
        let r = d.row_of(1, Kind::Circ).unwrap();
        // columns: t1, t3, e12°, e12•
        let row: Vec<u32> = (0..d.cols).map(|c| d.get(r, c)).collect();
        assert_eq!(row, vec![1, 2, 2, 0]);
        let g = build_dependence_graph(&d);
        assert_eq!(g.row_adj[r].iter().map(|x| x.0).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(d.traversals, vec![1, 1]);
    }

    #[test]
    fn two_terminal_component() {
        let i = Instance::parse("4 4 2\n1\n4\n1 2\n2 3\n3 4\n2 4\n").unwrap();
        let rep = Representation::standard(&i, Field::new(3).unwrap()).unwrap();
        let b = FeasibleBase::from_set(&i, FeasibleSet::new(vec![], vec![0, 1, 2])).unwrap();
        let d = compute_dependence(&rep, &b).unwrap();
        d.verify_reconstruction(&rep, &b).unwrap();
        assert_eq!(d.traversals, vec![2]);
    }

    #[test]
    fn cycle_support() {
        // 1 is the only terminal; 2-3-4 hang below it and 2-4 closes a cycle.
        let i = Instance::parse("4 4 1\n1\n1 2\n2 3\n3 4\n2 4\n").unwrap();
        let rep = Representation::standard(&i, Field::new(3).unwrap()).unwrap();
        let b = FeasibleBase::from_set(&i, FeasibleSet::new(vec![0], vec![0, 1, 2])).unwrap();
        let d = compute_dependence(&rep, &b).unwrap();
        d.verify_reconstruction(&rep, &b).unwrap();
        let r = d.row_of(3, Kind::Circ).unwrap();
        let support: Vec<usize> = (0..d.cols).filter(|&c| d.get(r, c) != 0).collect();
        let want = vec![
            b.line_column(1, Kind::Circ).unwrap(),
            b.line_column(2, Kind::Circ).unwrap(),
        ];
        assert_eq!(support, want);
    }

    #[test]
    fn initial_base_reconstructs() {
        for seed in 0..20 {
            let i = Instance::random(12, 20, 5, 3, seed).unwrap();
            let rep = Representation::standard(&i, Field::new(5).unwrap()).unwrap();
            let b = initialize_base(&i).unwrap();
            let d = compute_dependence(&rep, &b).unwrap();
            d.verify_reconstruction(&rep, &b).unwrap();
        }
    }

    #[test]
    fn zero_matrix_graph() {
        let d = DependenceMatrix {
            rows: vec![(0, Kind::Circ)],
            cols: 3,
            data: vec![0; 3],
            ops: 0,
            traversals: vec![],
        };
        let g = build_dependence_graph(&d);
        assert!(g.row_adj[0].is_empty());
    }
}
