//! Decomposing a support set into K/T/Y blocks on disjoint variables.

use serde::{Deserialize, Serialize};

use crate::graph::{edge_graph, DirectedGraph};
use crate::monomial::{Monomial, SupportSet};
use crate::smooth::KtyKind;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub kind: KtyKind,
    /// Variables in formula order, 0-based. For Y-blocks:
    /// `x_1..x_a, y_1..y_b, z, w`.
    pub variables: Vec<usize>,
    /// `[k]` for K and T, `[a, b]` with `a >= b` for Y.
    pub params: Vec<usize>,
}

impl Block {
    /// The block's formula monomials, in the ambient `n` variables.
    pub fn monomials(&self, d: u32, n: usize) -> Vec<Monomial> {
        let (k, b) = match self.kind {
            KtyKind::Y => (self.params[0], self.params[1]),
            _ => (self.params[0], 0),
        };
        let local = crate::smooth::kty_support(self.kind, d, k, b).expect("valid block parameters");
        local
            .iter()
            .map(|m| {
                let mut e = vec![0; n];
                for (i, &x) in m.exponents().iter().enumerate() {
                    e[self.variables[i]] += x;
                }
                Monomial::new(e)
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleDecomposition {
    pub blocks: Vec<Block>,
}

/// First decomposition in the order: fewer blocks, then block candidates in
/// the order T, K, Y by size and lexicographic variable list; each block
/// contains the smallest variable not yet covered.
pub fn find_simple_decomposition(s: &SupportSet) -> Option<SimpleDecomposition> {
    let n = s.n_vars();
    let g = edge_graph(s);
    for max_blocks in 1..=n {
        let mut blocks = vec![];
        if search(s, &g, 0, max_blocks, &mut blocks) {
            return Some(SimpleDecomposition { blocks });
        }
    }
    None
}

fn search(s: &SupportSet, g: &DirectedGraph, covered: u64, left: usize, out: &mut Vec<Block>) -> bool {
    let n = s.n_vars();
    let Some(v) = (0..n).find(|&i| covered & (1 << i) == 0) else {
        return true;
    };
    if left == 0 {
        return false;
    }
    for block in candidates(s, g, covered, v) {
        let mask = block.variables.iter().fold(covered, |m, &i| m | 1 << i);
        out.push(block);
        if search(s, g, mask, left - 1, out) {
            return true;
        }
        out.pop();
    }
    false
}

/// Simple paths in the arrow graph through uncovered vertices.
fn paths(g: &DirectedGraph, covered: u64) -> Vec<Vec<usize>> {
    fn rec(g: &DirectedGraph, covered: u64, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        let last = *cur.last().unwrap();
        for j in g.out(last).collect::<Vec<_>>() {
            if covered & (1 << j) != 0 || cur.contains(&j) {
                continue;
            }
            cur.push(j);
            rec(g, covered, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    for start in 0..g.n_vertices() {
        if covered & (1 << start) == 0 {
            rec(g, covered, &mut vec![start], &mut out);
        }
    }
    out
}

fn candidates(s: &SupportSet, g: &DirectedGraph, covered: u64, v: usize) -> Vec<Block> {
    let d = s.degree();
    let n = s.n_vars();
    let all_paths = paths(g, covered);
    let mut out = vec![];
    // T: path ending in a loop.
    let mut t: Vec<&Vec<usize>> = all_paths
        .iter()
        .filter(|p| p.contains(&v) && g.has(*p.last().unwrap(), *p.last().unwrap()))
        .collect();
    t.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out.extend(t.into_iter().map(|p| Block { kind: KtyKind::T, variables: p.clone(), params: vec![p.len()] }));
    // K: cycle of length >= 2 started at v.
    let mut k: Vec<&Vec<usize>> = all_paths
        .iter()
        .filter(|p| p.len() >= 2 && p[0] == v && g.has(*p.last().unwrap(), v))
        .collect();
    k.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out.extend(k.into_iter().map(|p| Block { kind: KtyKind::K, variables: p.clone(), params: vec![p.len()] }));
    // Y: two chains into z, then z -> w and a loop at w, plus x_a y_b w.
    if d == 3 {
        let mut y = vec![];
        for w in (0..n).filter(|&w| covered & (1 << w) == 0 && g.has(w, w)) {
            for z in (0..n).filter(|&z| z != w && covered & (1 << z) == 0 && g.has(z, w)) {
                let into_z: Vec<&Vec<usize>> = all_paths
                    .iter()
                    .filter(|p| g.has(*p.last().unwrap(), z) && !p.contains(&z) && !p.contains(&w))
                    .collect();
                for xs in &into_z {
                    for ys in &into_z {
                        if xs.len() < ys.len() || (xs.len() == ys.len() && xs >= ys) {
                            continue;
                        }
                        if xs.iter().any(|i| ys.contains(i)) {
                            continue;
                        }
                        let mut vars: Vec<usize> = xs.to_vec();
                        vars.extend(ys.iter());
                        vars.push(z);
                        vars.push(w);
                        if !vars.contains(&v) {
                            continue;
                        }
                        let mut e = vec![0; n];
                        e[*xs.last().unwrap()] = 1;
                        e[*ys.last().unwrap()] = 1;
                        e[w] = 1;
                        if !s.contains(&Monomial::new(e)) {
                            continue;
                        }
                        y.push(Block { kind: KtyKind::Y, variables: vars, params: vec![xs.len(), ys.len()] });
                    }
                }
            }
        }
        y.sort_by(|a, b| a.variables.len().cmp(&b.variables.len()).then(a.variables.cmp(&b.variables)));
        out.extend(y);
    }
    debug_assert!(out.iter().all(|b| b.monomials(d, n).iter().all(|m| s.contains(m))));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sup(d: u32, n: usize, items: &[&str]) -> SupportSet {
        SupportSet::parse(d, n, items).unwrap()
    }

    #[test]
    fn fermat_is_singletons() {
        let s = sup(3, 4, &["x1^3", "x2^3", "x3^3", "x4^3", "x1x2x3"]);
        let dec = find_simple_decomposition(&s).unwrap();
        assert_eq!(dec.blocks.len(), 4);
        assert!(dec.blocks.iter().all(|b| b.kind == KtyKind::T && b.params == vec![1]));
    }

    #[test]
    fn case_two_is_not_simple() {
        let s = sup(3, 6, &["x1^2x2", "x2^2x3", "x3^2x4", "x4^3", "x5^2x2", "x1x5x6", "x6^2x3", "x2x6x4"]);
        assert_eq!(find_simple_decomposition(&s), None);
    }

    #[test]
    fn two_cycles() {
        let s = sup(3, 6, &["x1^2x2", "x2^2x3", "x3^2x1", "x4^2x5", "x5^2x6", "x6^2x4"]);
        let dec = find_simple_decomposition(&s).unwrap();
        assert_eq!(dec.blocks.len(), 2);
        assert!(dec.blocks.iter().all(|b| b.kind == KtyKind::K && b.params == vec![3]));
        assert_eq!(dec.blocks[0].variables, vec![0, 1, 2]);
    }

    #[test]
    fn y_block_found() {
        // x^2 z + y^2 z + z^2 w + w^3 + x y w with (x, y, z, w) = (x1..x4).
        let s = sup(3, 4, &["x1^2x3", "x2^2x3", "x3^2x4", "x4^3", "x1x2x4"]);
        let dec = find_simple_decomposition(&s).unwrap();
        assert_eq!(dec.blocks.len(), 1);
        assert_eq!(dec.blocks[0].kind, KtyKind::Y);
        assert_eq!(dec.blocks[0].params, vec![1, 1]);
        let quartic = sup(4, 4, &["x1^3x3", "x2^3x3", "x3^3x4", "x4^4", "x1x2x4^2"]);
        assert_eq!(find_simple_decomposition(&quartic), None);
    }
}
