//! Upper bounds on the packing number of a connected instance.

use crate::instance::Instance;
use std::collections::VecDeque;

struct Network {
    head: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<u32>,
    next: Vec<usize>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Network {
            head: vec![usize::MAX; nodes],
            to: Vec::new(),
            cap: Vec::new(),
            next: Vec::new(),
        }
    }

    fn arc(&mut self, a: usize, b: usize, c: u32) {
        for (x, y, c) in [(a, b, c), (b, a, 0)] {
            self.to.push(y);
            self.cap.push(c);
            self.next.push(self.head[x]);
            self.head[x] = self.to.len() - 1;
        }
    }

    fn max_flow(&mut self, s: usize, t: usize, limit: u32) -> u32 {
        let mut flow = 0;
        let mut pred = vec![usize::MAX; self.head.len()];
        while flow < limit {
            pred.fill(usize::MAX);
            let mut queue = VecDeque::from([s]);
            let mut reached = false;
            while let Some(u) = queue.pop_front() {
                let mut a = self.head[u];
                while a != usize::MAX {
                    let w = self.to[a];
                    if self.cap[a] > 0 && w != s && pred[w] == usize::MAX {
                        pred[w] = a;
                        if w == t {
                            reached = true;
                            break;
                        }
                        queue.push_back(w);
                    }
                    a = self.next[a];
                }
                if reached {
                    break;
                }
            }
            if !reached {
                break;
            }
            let mut v = t;
            while v != s {
                let a = pred[v];
                self.cap[a] -= 1;
                self.cap[a ^ 1] += 1;
                v = self.to[a ^ 1];
            }
            flow += 1;
        }
        flow
    }
}

/// Maximum number of vertex-disjoint paths from block `b` to the other
/// terminals whose internal vertices are non-terminals.
pub fn block_connectivity(inst: &Instance, b: usize) -> usize {
    let n = inst.n();
    let (src, sink) = (2 * n, 2 * n + 1);
    let mut net = Network::new(2 * n + 2);
    let side = |v: usize| inst.block_of(v).map(|x| x == b);
    for v in 0..n {
        net.arc(2 * v, 2 * v + 1, 1);
        match side(v) {
            Some(true) => net.arc(src, 2 * v, 1),
            Some(false) => net.arc(2 * v + 1, sink, 1),
            None => {}
        }
    }
    for &(u, v) in inst.edges() {
        for (a, c) in [(u, v), (v, u)] {
            // leave `a`, enter `c`: sources may only start, sinks may only end
            let a_ok = side(a) != Some(false);
            let c_ok = side(c) != Some(true);
            if a_ok && c_ok {
                net.arc(2 * a + 1, 2 * c, 1);
            }
        }
    }
    net.max_flow(src, sink, inst.blocks()[b].len() as u32) as usize
}

/// Every bound used to certify maximality, with their minimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpperBound {
    pub half_terminals: usize,
    pub outside_largest_block: usize,
    pub half_connectivity: usize,
    pub value: usize,
}

pub fn upper_bound(inst: &Instance) -> UpperBound {
    let k = inst.k();
    let largest = inst.blocks().iter().map(Vec::len).max().unwrap_or(0);
    let kappa: Vec<usize> = (0..inst.num_blocks())
        .map(|b| block_connectivity(inst, b))
        .collect();
    let total: usize = kappa.iter().sum();
    let without_best = total - kappa.iter().copied().max().unwrap_or(0);
    let half_connectivity = (total / 2).min(without_best);
    let half_terminals = k / 2;
    let outside_largest_block = k - largest;
    UpperBound {
        half_terminals,
        outside_largest_block,
        half_connectivity,
        value: half_terminals.min(outside_largest_block).min(half_connectivity),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_and_star() {
        let p = Instance::parse("3 2 2\n1\n3\n1 2\n2 3\n").unwrap();
        assert_eq!(upper_bound(&p).value, 1);
        let s = Instance::parse("4 3 2\n1\n3 4\n2 1\n2 3\n2 4\n").unwrap();
        assert_eq!(block_connectivity(&s, 0), 1);
        assert_eq!(block_connectivity(&s, 1), 1);
        assert_eq!(upper_bound(&s).value, 1);
    }

    #[test]
    fn terminal_blocks_interior() {
        // 1 - 2 - 3 with all three terminals in distinct blocks: 1 cannot reach 3.
        let i = Instance::parse("3 2 3\n1\n2\n3\n1 2\n2 3\n").unwrap();
        assert_eq!(block_connectivity(&i, 0), 1);
        assert_eq!(block_connectivity(&i, 1), 1);
        assert_eq!(upper_bound(&i).value, 1);
    }

    #[test]
    fn cut_vertex() {
        // Four terminals in distinct blocks joined through one hub.
        let i = Instance::parse("5 4 4\n1\n2\n3\n4\n1 5\n2 5\n3 5\n4 5\n").unwrap();
        let ub = upper_bound(&i);
        assert_eq!(ub.half_terminals, 2);
        assert_eq!(ub.half_connectivity, 2);
    }
}
