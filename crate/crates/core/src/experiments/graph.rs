use std::collections::VecDeque;

use rand_core::Rng;
use serde::{Deserialize, Serialize};

use crate::prng::fair_bit;

/// Index of the unordered pair {i, j}, i < j, in lexicographic order.
fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Undirected graph, one bit per unordered pair in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub n: usize,
    pub edges: Vec<bool>,
}

impl Graph {
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        Graph {
            n,
            edges: (0..n * n.saturating_sub(1) / 2).map(|_| fair_bit(rng)).collect(),
        }
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.edges[pair_index(self.n, i, j)],
            std::cmp::Ordering::Greater => self.edges[pair_index(self.n, j, i)],
            std::cmp::Ordering::Equal => false,
        }
    }

    /// Breadth-first search from vertex 0.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for (v, s) in seen.iter_mut().enumerate() {
                if !*s && self.adjacent(u, v) {
                    *s = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tournament {
    pub n: usize,
    /// Bit for pair {i, j}, i < j; true means i → j.
    pub orientation: Vec<bool>,
}

impl Tournament {
    pub fn new(n: usize, orientation: Vec<bool>) -> Self {
        assert_eq!(orientation.len(), n * n.saturating_sub(1) / 2);
        Tournament { n, orientation }
    }

    pub fn from_fn(n: usize, beats: impl Fn(usize, usize) -> bool) -> Self {
        let mut orientation = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                orientation.push(beats(i, j));
            }
        }
        Tournament { n, orientation }
    }

    /// i → j for every i < j.
    pub fn transitive(n: usize) -> Self {
        Self::from_fn(n, |_, _| true)
    }

    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        Self::from_fn(n, |_, _| false).map_bits(|_| fair_bit(rng))
    }

    fn map_bits(mut self, mut f: impl FnMut(bool) -> bool) -> Self {
        for b in &mut self.orientation {
            *b = f(*b);
        }
        self
    }

    pub fn beats(&self, i: usize, j: usize) -> bool {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.orientation[pair_index(self.n, i, j)],
            std::cmp::Ordering::Greater => !self.orientation[pair_index(self.n, j, i)],
            std::cmp::Ordering::Equal => false,
        }
    }

    /// True when every earlier vertex of `chain` beats every later one.
    pub fn is_transitive_chain(&self, chain: &[usize]) -> bool {
        chain
            .iter()
            .enumerate()
            .all(|(a, &u)| chain[a + 1..].iter().all(|&v| self.beats(u, v)))
    }
}

/// Transitive chain built as in the inductive proof: take the lowest
/// remaining vertex, keep the larger of its out- and in-neighbourhoods
/// (out on ties) and recurse there. Length is at least ceil(log2(n + 1)).
pub fn transitive_witness(t: &Tournament) -> Vec<usize> {
    let mut head = Vec::new();
    let mut tail = Vec::new();
    let mut rest: Vec<usize> = (0..t.n).collect();
    while let Some((&v, others)) = rest.split_first() {
        let (out, inn): (Vec<usize>, Vec<usize>) = others.iter().partition(|&&u| t.beats(v, u));
        if out.len() >= inn.len() {
            head.push(v);
            rest = out;
        } else {
            tail.push(v);
            rest = inn;
        }
    }
    tail.reverse();
    head.extend(tail);
    head
}

/// Largest transitive sub-tournament by dynamic programming over subsets:
/// S is transitive iff some v in S beats all of S \ {v}, which is transitive.
pub fn max_transitive(t: &Tournament) -> usize {
    assert!(t.n <= 20, "exact search is limited to small tournaments");
    let n = t.n;
    let out: Vec<u32> = (0..n)
        .map(|v| (0..n).filter(|&u| t.beats(v, u)).fold(0, |m, u| m | 1 << u))
        .collect();
    let mut trans = vec![false; 1 << n];
    trans[0] = true;
    let mut best = 0;
    for s in 1u32..1 << n {
        let ok = (0..n).any(|v| {
            let rest = s & !(1 << v);
            s >> v & 1 == 1 && rest & !out[v] == 0 && trans[rest as usize]
        });
        if ok {
            trans[s as usize] = true;
            best = best.max(s.count_ones() as usize);
        }
    }
    best
}

pub fn ceil_log2(n: usize) -> usize {
    n.next_power_of_two().trailing_zeros() as usize
}
