//! Vector representation of an instance: labels, coordinates of `W`,
//! singletons, vertex-twins and edge-twins.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::instance::Instance;

pub type WVector = Vec<u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Circ,
    Bullet,
}

impl Kind {
    pub const BOTH: [Kind; 2] = [Kind::Circ, Kind::Bullet];

    pub fn index(self) -> usize {
        match self {
            Kind::Circ => 0,
            Kind::Bullet => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coordinate {
    Singleton(usize),
    Circ(usize),
    Bullet(usize),
}

/// Block labels and edge orientations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    /// Label of each block of the instance, indexed by local block.
    pub theta: Vec<u32>,
    /// The endpoint of each edge oriented `+1`; the other is `-1`.
    pub plus: Vec<usize>,
}

impl Labeling {
    /// `theta(block i) = i + 1` and `mu_e(smaller endpoint) = +1`.
    pub fn new(inst: &Instance, field: Field) -> Result<Self> {
        let ids: Vec<usize> = (0..inst.num_blocks()).collect();
        Self::with_block_ids(inst, field, &ids)
    }

    /// Labels blocks by global index: `theta(block i) = block_ids[i] + 1`.
    pub fn with_block_ids(inst: &Instance, field: Field, block_ids: &[usize]) -> Result<Self> {
        if block_ids.len() != inst.num_blocks() {
            return Err(Error::Precondition("one block id per block".into()));
        }
        if block_ids.iter().any(|&b| b + 1 >= field.q() as usize) {
            return Err(Error::Precondition(format!(
                "block labels must stay below q = {}",
                field.q()
            )));
        }
        let theta = block_ids.iter().map(|&b| b as u32 + 1).collect();
        let plus = inst.edges().iter().map(|&(u, v)| u.min(v)).collect();
        Ok(Labeling { theta, plus })
    }

    /// Same labels with every edge orientation reversed.
    pub fn flipped(&self, inst: &Instance) -> Self {
        let plus = inst
            .edges()
            .iter()
            .zip(&self.plus)
            .map(|(&(u, v), &p)| if p == u { v } else { u })
            .collect();
        Labeling {
            theta: self.theta.clone(),
            plus,
        }
    }

    /// `mu_e(v)` as a residue.
    pub fn mu(&self, field: &Field, e: usize, v: usize) -> u32 {
        if self.plus[e] == v {
            1
        } else {
            field.neg(1)
        }
    }
}

/// Coordinates and vector constructors for one instance.
#[derive(Debug, Clone)]
pub struct Representation<'a> {
    pub inst: &'a Instance,
    pub field: Field,
    pub labeling: Labeling,
    /// Singleton index of a terminal, or circ index of a non-terminal
    /// (its bullet index is one more).
    coord: Vec<usize>,
    dim: usize,
}

impl<'a> Representation<'a> {
    pub fn new(inst: &'a Instance, field: Field, labeling: Labeling) -> Result<Self> {
        if labeling.theta.len() != inst.num_blocks() || labeling.plus.len() != inst.m() {
            return Err(Error::Precondition("labeling does not fit instance".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for &t in &labeling.theta {
            if t % field.q() == 0 || !seen.insert(t % field.q()) {
                return Err(Error::Precondition("theta must be injective and nonzero".into()));
            }
        }
        for (e, &(u, v)) in inst.edges().iter().enumerate() {
            if labeling.plus[e] != u && labeling.plus[e] != v {
                return Err(Error::Precondition(format!("orientation of edge {e}")));
            }
        }
        let mut coord = vec![0; inst.n()];
        let mut next = 0;
        for (v, c) in coord.iter_mut().enumerate() {
            if inst.is_terminal(v) {
                *c = next;
                next += 1;
            }
        }
        for (v, c) in coord.iter_mut().enumerate() {
            if !inst.is_terminal(v) {
                *c = next;
                next += 2;
            }
        }
        Ok(Representation {
            inst,
            field,
            labeling,
            coord,
            dim: next,
        })
    }

    /// Representation with the default labeling.
    pub fn standard(inst: &'a Instance, field: Field) -> Result<Self> {
        let lab = Labeling::new(inst, field)?;
        Self::new(inst, field, lab)
    }

    /// `2n - k`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coordinate_index(&self, c: Coordinate) -> Result<usize> {
        let inst = self.inst;
        match c {
            Coordinate::Singleton(t) if t < inst.n() && inst.is_terminal(t) => Ok(self.coord[t]),
            Coordinate::Circ(v) if v < inst.n() && !inst.is_terminal(v) => Ok(self.coord[v]),
            Coordinate::Bullet(v) if v < inst.n() && !inst.is_terminal(v) => Ok(self.coord[v] + 1),
            _ => Err(Error::Precondition(format!("no coordinate {c:?}"))),
        }
    }

    pub fn coordinates(&self) -> Vec<Coordinate> {
        let mut out = vec![Coordinate::Singleton(0); self.dim];
        for v in 0..self.inst.n() {
            if self.inst.is_terminal(v) {
                out[self.coord[v]] = Coordinate::Singleton(v);
            } else {
                out[self.coord[v]] = Coordinate::Circ(v);
                out[self.coord[v] + 1] = Coordinate::Bullet(v);
            }
        }
        out
    }

    /// Label of a terminal's block.
    pub fn theta_of(&self, t: usize) -> Option<u32> {
        self.inst.block_of(t).map(|b| self.labeling.theta[b])
    }

    /// Index of the singleton coordinate of terminal `t`.
    #[inline]
    pub fn singleton_index(&self, t: usize) -> usize {
        self.coord[t]
    }

    /// The single nonzero entry `(index, value)` of a vertex-twin.
    #[inline]
    pub fn twin_entry(&self, v: usize, kind: Kind) -> (usize, u32) {
        match self.theta_of(v) {
            Some(th) => (
                self.coord[v],
                if kind == Kind::Circ { 1 } else { th },
            ),
            None => (self.coord[v] + kind.index(), 1),
        }
    }

    /// `mu_e(v)`.
    #[inline]
    pub fn mu(&self, e: usize, v: usize) -> u32 {
        self.labeling.mu(&self.field, e, v)
    }

    pub fn zero(&self) -> WVector {
        vec![0; self.dim]
    }

    pub fn singleton_vec(&self, t: usize) -> Result<WVector> {
        let i = self.coordinate_index(Coordinate::Singleton(t))?;
        let mut x = self.zero();
        x[i] = 1;
        Ok(x)
    }

    pub fn vertex_twin(&self, v: usize, kind: Kind) -> Result<WVector> {
        if v >= self.inst.n() {
            return Err(Error::Precondition(format!("vertex {v} out of range")));
        }
        let (i, c) = self.twin_entry(v, kind);
        let mut x = self.zero();
        x[i] = c;
        Ok(x)
    }

    pub fn edge_twin(&self, e: usize, kind: Kind) -> Result<WVector> {
        let &(u, v) = self
            .inst
            .edges()
            .get(e)
            .ok_or_else(|| Error::Precondition(format!("edge {e} out of range")))?;
        let mut x = self.zero();
        for w in [u, v] {
            let (i, c) = self.twin_entry(w, kind);
            x[i] = self.field.add(x[i], self.field.mul(self.mu(e, w), c));
        }
        Ok(x)
    }

    /// `(e°, e•)`.
    pub fn edge_twins(&self, e: usize) -> Result<(WVector, WVector)> {
        Ok((self.edge_twin(e, Kind::Circ)?, self.edge_twin(e, Kind::Bullet)?))
    }

    /// `sum_i mu_{e_i}(v_i) e_i^kind` along the walk `v_0 e_1 v_1 ... e_k v_k`.
    pub fn walk_sum(&self, vertices: &[usize], edges: &[usize], kind: Kind) -> Result<WVector> {
        if vertices.len() != edges.len() + 1 {
            return Err(Error::Precondition("walk needs one more vertex than edges".into()));
        }
        let mut acc = self.zero();
        for (i, &e) in edges.iter().enumerate() {
            let (a, b) = (vertices[i], vertices[i + 1]);
            let &(u, v) = self
                .inst
                .edges()
                .get(e)
                .ok_or_else(|| Error::Precondition(format!("edge {e} out of range")))?;
            if !((u == a && v == b) || (u == b && v == a)) {
                return Err(Error::Precondition(format!(
                    "edge {e} does not join {a} and {b}"
                )));
            }
            let x = self.edge_twin(e, kind)?;
            let s = self.mu(e, b);
            for (y, xi) in acc.iter_mut().zip(x) {
                *y = self.field.add(*y, self.field.mul(s, xi));
            }
        }
        Ok(acc)
    }
}

/// Exact rank over `F_q` by Gaussian elimination.
pub fn rank(field: &Field, vectors: &[WVector]) -> usize {
    let mut rows: Vec<WVector> = vectors.to_vec();
    let ncol = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncol {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (y, &pv) in row.iter_mut().zip(&pivot) {
                    *y = field.sub(*y, field.mul(f, pv));
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Whether a square matrix is nonsingular over `F_q`.
pub fn is_nonsingular(field: &Field, rows: &[WVector]) -> bool {
    rows.iter().all(|r| r.len() == rows.len()) && rank(field, rows) == rows.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(text: &str) -> Instance {
        Instance::parse(text).unwrap()
    }

    #[test]
    fn labeling_examples() {
        let i = inst("5 1 2\n1\n3\n5 2\n");
        let f = Field::new(3).unwrap();
        let l = Labeling::new(&i, f).unwrap();
        assert_eq!(l.theta, vec![1, 2]);
        assert_eq!(l.mu(&f, 0, 1), 1);
        assert_eq!(l.mu(&f, 0, 4), 2);
        let i3 = inst("3 0 3\n1\n2\n3\n");
        let l = Labeling::new(&i3, Field::new(5).unwrap()).unwrap();
        assert_eq!(l.theta, vec![1, 2, 3]);
    }

    #[test]
    fn twins() {
        let i = inst("4 2 2\n1\n2\n2 3\n1 4\n");
        let f = Field::new(3).unwrap();
        let r = Representation::standard(&i, f).unwrap();
        assert_eq!(r.dim(), 2 * 4 - 2);
        let t2 = r.singleton_index(1);
        let b = r.vertex_twin(1, Kind::Bullet).unwrap();
        assert_eq!(b[t2], 2);
        assert_eq!(b.iter().filter(|&&x| x != 0).count(), 1);
        assert_eq!(r.vertex_twin(0, Kind::Bullet), r.vertex_twin(0, Kind::Circ));
        let c3 = r.vertex_twin(2, Kind::Circ).unwrap();
        let b3 = r.vertex_twin(2, Kind::Bullet).unwrap();
        assert!(c3.iter().zip(&b3).all(|(a, b)| *a == 0 || *b == 0));
        // e = {2, 3}: terminal 2 (block 2) is the smaller endpoint.
        let eb = r.edge_twin(0, Kind::Bullet).unwrap();
        let mut want = r.zero();
        want[t2] = 2;
        want[r.coordinate_index(Coordinate::Bullet(2)).unwrap()] = 2;
        assert_eq!(eb, want);
    }

    #[test]
    fn edge_between_nonterminals() {
        let i = inst("3 2 1\n3\n1 2\n1 2\n");
        let r = Representation::standard(&i, Field::new(3).unwrap()).unwrap();
        let ec = r.edge_twin(0, Kind::Circ).unwrap();
        let mut want = r.zero();
        want[r.coordinate_index(Coordinate::Circ(0)).unwrap()] = 1;
        want[r.coordinate_index(Coordinate::Circ(1)).unwrap()] = 2;
        assert_eq!(ec, want);
        assert_eq!(r.edge_twins(0).unwrap(), r.edge_twins(1).unwrap());
    }

    #[test]
    fn rank_examples() {
        let f = Field::new(5).unwrap();
        assert_eq!(rank(&f, &[]), 0);
        assert_eq!(rank(&f, &[vec![1, 2, 3], vec![2, 4, 1]]), 1);
        assert_eq!(rank(&f, &[vec![1, 2], vec![0, 1]]), 2);
    }

    #[test]
    fn walk_examples() {
        let i = inst("3 3 1\n3\n1 2\n2 3\n3 1\n");
        let r = Representation::standard(&i, Field::new(3).unwrap()).unwrap();
        let w = r.walk_sum(&[1, 0], &[0], Kind::Circ).unwrap();
        let f = r.field;
        let v0 = r.vertex_twin(0, Kind::Circ).unwrap();
        let v1 = r.vertex_twin(1, Kind::Circ).unwrap();
        let want: WVector = v0.iter().zip(&v1).map(|(a, b)| f.sub(*a, *b)).collect();
        assert_eq!(w, want);
        let cyc = r.walk_sum(&[0, 1, 2, 0], &[0, 1, 2], Kind::Bullet).unwrap();
        assert!(cyc.iter().all(|&x| x == 0));
        assert!(r.walk_sum(&[0, 2], &[0], Kind::Circ).is_err());
    }
}
