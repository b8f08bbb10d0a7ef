//! The arrow graph `E_S`, chain invariants `(s, c)` and frames.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::action::ActionData;
use crate::error::{Error, Result};
use crate::monomial::{permutations, Monomial, SupportSet};

/// Vertices `0..n`; arrow `(i, j)` whenever `x_i^{d-1} x_j ∈ S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    arrows: BTreeSet<(usize, usize)>,
}

impl DirectedGraph {
    pub fn new(n: usize, arrows: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let arrows: BTreeSet<_> = arrows.into_iter().collect();
        assert!(arrows.iter().all(|&(i, j)| i < n && j < n));
        Self { n, arrows }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn arrows(&self) -> &BTreeSet<(usize, usize)> {
        &self.arrows
    }

    pub fn has(&self, i: usize, j: usize) -> bool {
        self.arrows.contains(&(i, j))
    }

    pub fn out(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.range((i, 0)..(i + 1, 0)).map(|&(_, j)| j)
    }

    /// Arrows as 1-based pairs, for reports.
    pub fn arrows_one_based(&self) -> Vec<(usize, usize)> {
        self.arrows.iter().map(|&(i, j)| (i + 1, j + 1)).collect()
    }
}

pub fn edge_graph(s: &SupportSet) -> DirectedGraph {
    let d = s.degree();
    let n = s.n_vars();
    let mut arrows = vec![];
    for m in s.iter() {
        let Some(i) = (0..n).find(|&i| m.exponent(i) >= d - 1) else {
            continue;
        };
        if m.exponent(i) == d {
            arrows.push((i, i));
        } else if let Some(j) = (0..n).find(|&j| j != i && m.exponent(j) == 1) {
            arrows.push((i, j));
        }
    }
    DirectedGraph::new(n, arrows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainInvariants {
    pub s: usize,
    pub c: usize,
    /// The chain `(i_1, ..., i_s)`, 0-based; its closing arrow is
    /// `(i_s, i_{s-c})`.
    pub witness: Vec<usize>,
}

impl ChainInvariants {
    pub fn witness_one_based(&self) -> Vec<usize> {
        self.witness.iter().map(|i| i + 1).collect()
    }
}

pub fn chain_invariants(data: &ActionData) -> Result<ChainInvariants> {
    let s = data.invariant_monomials();
    chain_invariants_of(&edge_graph(&s), data.weights())
}

/// Longest chain of arrows through vertices of pairwise distinct weight
/// that closes back onto itself; ties broken by smallest closing offset,
/// then by the lexicographically smallest chain.
pub fn chain_invariants_of<W: Eq>(graph: &DirectedGraph, weights: &[W]) -> Result<ChainInvariants> {
    let n = graph.n_vertices();
    if let Some(i) = (0..n).find(|&i| graph.out(i).next().is_none()) {
        return Err(Error::SmallSupport(i + 1));
    }
    let mut best: Option<ChainInvariants> = None;
    let mut chain = Vec::with_capacity(n);
    for start in 0..n {
        chain.push(start);
        extend(graph, weights, &mut chain, &mut best);
        chain.pop();
    }
    Ok(best.expect("every vertex has an out-arrow, so chains exist"))
}

fn extend<W: Eq>(graph: &DirectedGraph, weights: &[W], chain: &mut Vec<usize>, best: &mut Option<ChainInvariants>) {
    let s = chain.len();
    let last = chain[s - 1];
    if let Some(c) = (0..s).find(|&c| graph.has(last, chain[s - 1 - c])) {
        let better = match best {
            None => true,
            Some(b) => s > b.s || (s == b.s && (c < b.c || (c == b.c && *chain < b.witness))),
        };
        if better {
            *best = Some(ChainInvariants { s, c, witness: chain.clone() });
        }
    }
    for j in graph.out(last).collect::<Vec<_>>() {
        if chain.iter().any(|&i| weights[i] == weights[j]) {
            continue;
        }
        chain.push(j);
        extend(graph, weights, chain, best);
        chain.pop();
    }
}

/// Every arrow between chain vertices is a chain arrow or the closing arrow.
pub fn spoon_violations(graph: &DirectedGraph, inv: &ChainInvariants) -> Vec<(usize, usize)> {
    let w = &inv.witness;
    let s = w.len();
    let mut allowed: BTreeSet<(usize, usize)> = (0..s - 1).map(|t| (w[t], w[t + 1])).collect();
    allowed.insert((w[s - 1], w[s - 1 - inv.c]));
    let mut bad = vec![];
    for &a in w {
        for &b in w {
            if graph.has(a, b) && !allowed.contains(&(a, b)) {
                bad.push((a, b));
            }
        }
    }
    bad
}

/// The monomials `x_i^{d-1} x_{f(i)}` of a frame.
pub fn frame_support(d: u32, frame: &[usize]) -> SupportSet {
    let n = frame.len();
    SupportSet::new(d, n, frame.iter().enumerate().map(|(i, &j)| Monomial::binomial(n, i, d - 1, j, 1)))
        .expect("frame monomials have degree d")
}

/// All maps `[n] → [n]` (as value vectors) in lexicographic order, or one
/// representative per conjugacy class under relabeling (the lexicographically
/// smallest member of each class).
pub fn enumerate_frames(n: usize, representatives_only: bool) -> Vec<Vec<usize>> {
    let total = n.pow(n as u32);
    let decode = |mut x: usize| -> Vec<usize> {
        let mut f = vec![0; n];
        for i in (0..n).rev() {
            f[i] = x % n;
            x /= n;
        }
        f
    };
    let encode = |f: &[usize]| f.iter().fold(0usize, |acc, &v| acc * n + v);
    if !representatives_only {
        return (0..total).map(decode).collect();
    }
    let perms = permutations(n);
    let mut seen = vec![false; total];
    let mut reps = vec![];
    for x in 0..total {
        if seen[x] {
            continue;
        }
        let f = decode(x);
        reps.push(f.clone());
        for p in &perms {
            // σ f σ^{-1}: vertex p[i] maps to p[f[i]].
            let mut g = vec![0; n];
            for i in 0..n {
                g[p[i]] = p[f[i]];
            }
            seen[encode(&g)] = true;
        }
    }
    reps
}
