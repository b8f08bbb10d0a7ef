//! Buchberger's algorithm for homogeneous ideals over a prime field.
//!
//! Monomials are packed into a `u128`, eight bits per variable with variable
//! `i` in byte `i`. For monomials of equal degree, grevlex with
//! `x1 > x2 > ...` is then the reverse of integer order, so a homogeneous
//! polynomial sorted by ascending packed value has its leading term first.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

pub type Packed = u128;

pub const MAX_VARS: usize = 16;
const GUARD: Packed = 0x8080_8080_8080_8080_8080_8080_8080_8080;

pub fn pack(exps: &[u32]) -> Packed {
    assert!(exps.len() <= MAX_VARS, "at most {MAX_VARS} variables");
    exps.iter().enumerate().fold(0, |acc, (i, &e)| {
        assert!(e < 128, "exponent too large to pack");
        acc | (e as Packed) << (8 * i)
    })
}

pub fn unpack(m: Packed, n: usize) -> Vec<u32> {
    (0..n).map(|i| ((m >> (8 * i)) & 0xff) as u32).collect()
}

fn degree(m: Packed) -> u32 {
    (0..MAX_VARS).map(|i| ((m >> (8 * i)) & 0xff) as u32).sum()
}

fn divides(a: Packed, b: Packed) -> bool {
    ((b | GUARD) - a) & GUARD == GUARD
}

fn lcm(a: Packed, b: Packed) -> Packed {
    let mut out = 0;
    for i in 0..MAX_VARS {
        let sh = 8 * i;
        out |= ((a >> sh) & 0xff).max((b >> sh) & 0xff) << sh;
    }
    out
}

fn coprime(a: Packed, b: Packed) -> bool {
    (0..MAX_VARS).all(|i| ((a >> (8 * i)) & 0xff) == 0 || ((b >> (8 * i)) & 0xff) == 0)
}

/// Single variable with positive exponent, if `m` is a pure power.
fn pure_power_var(m: Packed) -> Option<usize> {
    let nz: Vec<usize> = (0..MAX_VARS).filter(|&i| (m >> (8 * i)) & 0xff != 0).collect();
    (nz.len() == 1).then(|| nz[0])
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Homogeneous polynomial over `F_p`: terms sorted leading-first, no zero
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPoly {
    pub terms: Vec<(Packed, u64)>,
}

impl HPoly {
    pub fn from_terms(mut terms: Vec<(Packed, u64)>, p: u64) -> HPoly {
        terms.sort_by_key(|t| t.0);
        let mut out: Vec<(Packed, u64)> = vec![];
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = (last.1 + c) % p,
                _ => out.push((m, c % p)),
            }
        }
        out.retain(|t| t.1 != 0);
        HPoly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Packed {
        self.terms[0].0
    }

    pub fn degree(&self) -> u32 {
        degree(self.lead())
    }

    fn monic(mut self, p: u64) -> HPoly {
        let inv = inv_mod(self.terms[0].1, p);
        for t in self.terms.iter_mut() {
            t.1 = t.1 * inv % p;
        }
        self
    }
}

/// Outcome of a (possibly early-stopped) Gröbner basis run.
#[derive(Clone, Debug)]
pub struct GroebnerRun {
    pub basis: Vec<HPoly>,
    /// Smallest `k` with `x_i^k` a leading term, per variable.
    pub pure_powers: Vec<Option<u32>>,
    /// Highest degree fully processed.
    pub degree_reached: u32,
}

impl GroebnerRun {
    pub fn zero_dimensional(&self) -> bool {
        self.pure_powers.iter().all(|p| p.is_some())
    }
}

struct Engine {
    p: u64,
    basis: Vec<HPoly>,
    /// Pairs `(lcm, i, j)` with `i < j`.
    pairs: Vec<(Packed, usize, usize)>,
}

impl Engine {
    fn reduce(&self, f: &HPoly) -> HPoly {
        let p = self.p;
        let mut acc: HashMap<Packed, u64> = HashMap::with_capacity(f.terms.len() * 4);
        let mut heap: BinaryHeap<Reverse<Packed>> = BinaryHeap::new();
        for &(m, c) in &f.terms {
            acc.insert(m, c);
            heap.push(Reverse(m));
        }
        let mut out = vec![];
        while let Some(Reverse(m)) = heap.pop() {
            while heap.peek() == Some(&Reverse(m)) {
                heap.pop();
            }
            let c = match acc.remove(&m) {
                Some(c) if c != 0 => c,
                _ => continue,
            };
            match self.basis.iter().find(|g| divides(g.lead(), m)) {
                Some(g) => {
                    let q = m - g.lead();
                    for &(gm, gc) in &g.terms[1..] {
                        let t = gm + q;
                        let e = acc.entry(t).or_insert_with(|| {
                            heap.push(Reverse(t));
                            0
                        });
                        *e = (*e + (p - gc) * c % p) % p;
                    }
                }
                None => out.push((m, c)),
            }
        }
        HPoly { terms: out }
    }

    fn s_poly(&self, i: usize, j: usize, l: Packed) -> HPoly {
        let p = self.p;
        let (f, g) = (&self.basis[i], &self.basis[j]);
        let (qf, qg) = (l - f.lead(), l - g.lead());
        let mut terms: Vec<(Packed, u64)> = f.terms[1..].iter().map(|&(m, c)| (m + qf, c)).collect();
        terms.extend(g.terms[1..].iter().map(|&(m, c)| (m + qg, (p - c) % p)));
        HPoly::from_terms(terms, p)
    }

    /// Gebauer–Möller update after appending `basis[h]`.
    fn update(&mut self, h: usize) {
        let lh = self.basis[h].lead();
        let new: Vec<(Packed, usize)> = (0..h).map(|g| (lcm(lh, self.basis[g].lead()), g)).collect();
        // Criterion M: drop (h,g) when another new pair's lcm properly
        // divides its lcm; of equal lcms keep the first.
        let mut kept: Vec<(Packed, usize)> = vec![];
        for (idx, &(l, g)) in new.iter().enumerate() {
            let co = coprime(lh, self.basis[g].lead());
            let dominated = new.iter().enumerate().any(|(k, &(l2, _))| {
                k != idx && divides(l2, l) && (l2 != l || k < idx)
            });
            if co || !dominated {
                kept.push((l, g));
            }
        }
        // Keep pairs whose lcm is not shared with a coprime (product
        // criterion) pair of the same lcm.
        let mut fresh = vec![];
        for &(l, g) in &kept {
            let co = coprime(lh, self.basis[g].lead());
            if co {
                continue;
            }
            if kept
                .iter()
                .any(|&(l2, g2)| l2 == l && g2 != g && coprime(lh, self.basis[g2].lead()))
            {
                continue;
            }
            fresh.push((l, g, h));
        }
        // Criterion B on old pairs.
        let basis = &self.basis;
        self.pairs.retain(|&(l, i, j)| {
            !(divides(lh, l) && lcm(basis[i].lead(), lh) != l && lcm(basis[j].lead(), lh) != l)
        });
        self.pairs.extend(fresh);
    }

    fn insert(&mut self, f: HPoly) {
        self.basis.push(f.monic(self.p));
        let h = self.basis.len() - 1;
        self.update(h);
    }
}

/// Gröbner basis of the homogeneous ideal generated by `gens`, computed
/// degree by degree up to `max_degree`. With `stop_when_zero_dim`, stops
/// after the first degree at which every variable has a pure-power leading
/// term (the pure-power degrees are already final then).
pub fn groebner(gens: &[HPoly], n_vars: usize, p: u64, max_degree: u32, stop_when_zero_dim: bool) -> GroebnerRun {
    let mut eng = Engine { p, basis: vec![], pairs: vec![] };
    let mut inputs: Vec<&HPoly> = gens.iter().filter(|g| !g.is_zero()).collect();
    inputs.sort_by_key(|g| g.degree());
    let mut pure: Vec<Option<u32>> = vec![None; n_vars];
    let mut reached = 0;
    let mut next_input = 0;
    let min_deg = inputs.first().map(|g| g.degree()).unwrap_or(0);
    for deg in min_deg..=max_degree {
        // Pairs of this degree in normal order: ascending lcm, then index.
        let mut todo: Vec<(Packed, usize, usize)> = vec![];
        eng.pairs.retain(|&(l, i, j)| {
            if degree(l) == deg {
                todo.push((l, i, j));
                false
            } else {
                true
            }
        });
        todo.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        for (l, i, j) in todo {
            let s = eng.s_poly(i, j, l);
            let r = eng.reduce(&s);
            if !r.is_zero() {
                eng.insert(r);
            }
        }
        while next_input < inputs.len() && inputs[next_input].degree() == deg {
            let r = eng.reduce(inputs[next_input]);
            next_input += 1;
            if !r.is_zero() {
                eng.insert(r);
            }
        }
        reached = deg;
        for g in &eng.basis {
            if let Some(v) = pure_power_var(g.lead()) {
                let k = degree(g.lead());
                if pure[v].is_none_or(|old| k < old) {
                    pure[v] = Some(k);
                }
            }
        }
        if stop_when_zero_dim && pure.iter().all(|x| x.is_some()) {
            break;
        }
        if eng.pairs.is_empty() && next_input == inputs.len() {
            break;
        }
    }
    GroebnerRun { basis: interreduce(eng.basis, p), pure_powers: pure, degree_reached: reached }
}

/// Drops elements whose leading term is divisible by another's, then
/// tail-reduces each element by the rest. Output sorted by leading term.
fn interreduce(basis: Vec<HPoly>, p: u64) -> Vec<HPoly> {
    let mut minimal: Vec<HPoly> = vec![];
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && divides(h.lead(), g.lead()) && (h.lead() != g.lead() || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    minimal.sort_by_key(|g| Reverse(g.lead()));
    let mut out = vec![];
    for i in 0..minimal.len() {
        let others = Engine {
            p,
            basis: minimal.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone()).collect(),
            pairs: vec![],
        };
        let lead = minimal[i].terms[0];
        let tail = HPoly { terms: minimal[i].terms[1..].to_vec() };
        let mut terms = vec![lead];
        terms.extend(others.reduce(&tail).terms);
        out.push(HPoly { terms });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 101;

    fn poly(terms: &[(&[u32], u64)]) -> HPoly {
        HPoly::from_terms(terms.iter().map(|(e, c)| (pack(e), *c)).collect(), P)
    }

    #[test]
    fn packed_order_is_grevlex() {
        // Degree 2 in three variables, grevlex descending.
        let want: Vec<&[u32]> = vec![&[2, 0, 0], &[1, 1, 0], &[0, 2, 0], &[1, 0, 1], &[0, 1, 1], &[0, 0, 2]];
        let packed: Vec<Packed> = want.iter().map(|e| pack(e)).collect();
        assert!(packed.windows(2).all(|w| w[0] < w[1]));
        assert!(divides(pack(&[1, 0, 1]), pack(&[2, 1, 1])));
        assert!(!divides(pack(&[0, 2, 0]), pack(&[2, 1, 1])));
        assert_eq!(lcm(pack(&[2, 0, 1]), pack(&[1, 3, 0])), pack(&[2, 3, 1]));
        assert_eq!(unpack(pack(&[3, 0, 7]), 3), vec![3, 0, 7]);
    }

    #[test]
    fn pure_squares() {
        let gens = vec![poly(&[(&[2, 0], 3)]), poly(&[(&[0, 2], 3)])];
        let run = groebner(&gens, 2, P, 3, false);
        assert_eq!(run.pure_powers, vec![Some(2), Some(2)]);
        assert_eq!(run.basis.len(), 2);
    }

    #[test]
    fn common_zero_has_no_pure_power() {
        // x^2, xy vanish on (0:1).
        let gens = vec![poly(&[(&[2, 0], 1)]), poly(&[(&[1, 1], 1)])];
        let run = groebner(&gens, 2, P, 5, false);
        assert_eq!(run.pure_powers, vec![Some(2), None]);
        assert!(!run.zero_dimensional());
    }

    #[test]
    fn cyclic_relations() {
        // Partials of x^2 y + y^2 z + z^2 x (K-type, d=3, k=3).
        let gens = vec![
            poly(&[(&[1, 1, 0], 2), (&[0, 0, 2], 1)]),
            poly(&[(&[2, 0, 0], 1), (&[0, 1, 1], 2)]),
            poly(&[(&[0, 2, 0], 1), (&[1, 0, 1], 2)]),
        ];
        let run = groebner(&gens, 3, P, 4, false);
        assert!(run.zero_dimensional());
        let again = groebner(&gens, 3, P, 4, false);
        assert_eq!(run.basis, again.basis);
    }
}
