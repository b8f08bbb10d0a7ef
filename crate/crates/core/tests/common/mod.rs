//! Independent brute-force oracles shared by the integration suites.
#![allow(dead_code)]

use hypersym::action::{ActionData, Target};
use hypersym::monomial::{enumerate_monomials, permutations, Monomial, SupportSet};
use hypersym::smooth::SparsePoly;

/// Block formulas written out directly from the K/T/Y definitions, over
/// the block's own variables `0..len`.
fn block_supports(d: u32, len: usize) -> Vec<Vec<Vec<u32>>> {
    let mono = |pairs: &[(usize, u32)]| {
        let mut e = vec![0u32; len];
        for &(i, k) in pairs {
            e[i] += k;
        }
        e
    };
    let mut out = vec![];
    if len == 1 {
        out.push(vec![mono(&[(0, d)])]);
        return out;
    }
    // K: closed cycle.
    out.push((0..len).map(|i| mono(&[(i, d - 1), ((i + 1) % len, 1)])).collect());
    // T: chain capped by a pure power.
    let mut t: Vec<Vec<u32>> = (0..len - 1).map(|i| mono(&[(i, d - 1), (i + 1, 1)])).collect();
    t.push(mono(&[(len - 1, d)]));
    out.push(t);
    // Y: x_1..x_a, y_1..y_b, z, w.
    if d == 3 && len >= 4 {
        for a in 1..=len - 3 {
            let b = len - 2 - a;
            if b < 1 || b > a {
                continue;
            }
            let (z, w) = (a + b, a + b + 1);
            let mut y: Vec<Vec<u32>> = vec![];
            for i in 0..a - 1 {
                y.push(mono(&[(i, 2), (i + 1, 1)]));
            }
            for i in a..a + b - 1 {
                y.push(mono(&[(i, 2), (i + 1, 1)]));
            }
            y.push(mono(&[(a - 1, 2), (z, 1)]));
            y.push(mono(&[(a + b - 1, 2), (z, 1)]));
            y.push(mono(&[(z, 2), (w, 1)]));
            y.push(mono(&[(w, 3)]));
            y.push(mono(&[(a - 1, 1), (a + b - 1, 1), (w, 1)]));
            out.push(y);
        }
    }
    out
}

/// Tries every set partition of the variables and every ordering of each
/// block against every block formula.
pub fn is_simple_oracle(s: &SupportSet) -> bool {
    let n = s.n_vars();
    let d = s.degree();
    let contains = |e: Vec<u32>| s.contains(&Monomial::new(e));
    let block_fits = |vars: &[usize]| -> bool {
        let k = vars.len();
        let shapes = block_supports(d, k);
        for order in permutations(k) {
            let assigned: Vec<usize> = order.iter().map(|&i| vars[i]).collect();
            for shape in &shapes {
                let ok = shape.iter().all(|local| {
                    let mut e = vec![0u32; n];
                    for (i, &x) in local.iter().enumerate() {
                        e[assigned[i]] += x;
                    }
                    contains(e)
                });
                if ok {
                    return true;
                }
            }
        }
        false
    };
    fn rec(remaining: u32, n: usize, fits: &dyn Fn(&[usize]) -> bool) -> bool {
        if remaining == 0 {
            return true;
        }
        let first = remaining.trailing_zeros() as usize;
        let rest = remaining & !(1 << first);
        // Every subset of `rest` joined with `first` forms the next block.
        let mut sub = rest;
        loop {
            let block_mask = sub | (1 << first);
            let vars: Vec<usize> = (0..n).filter(|&i| block_mask & (1 << i) != 0).collect();
            if fits(&vars) && rec(remaining & !block_mask, n, fits) {
                return true;
            }
            if sub == 0 {
                return false;
            }
            sub = (sub - 1) & rest;
        }
    }
    rec((1u32 << n) - 1, n, &block_fits)
}

/// Counts `#{x in Z^k / L : m x = 0}` for each `m` in `1..=bound` by
/// enumerating `(Z/D)^k` modulo the row span, where `D = |det|`.
pub fn torsion_counts_by_cosets(rows: &[Vec<i64>], bound: u64) -> Option<Vec<u64>> {
    let k = rows.len();
    let det = det_i64(rows).unsigned_abs();
    if det == 0 {
        return None;
    }
    let dm = det as i64;
    let size = (det as usize).pow(k as u32);
    let encode = |v: &[i64]| v.iter().fold(0usize, |acc, &x| acc * det as usize + x.rem_euclid(dm) as usize);
    let decode = |mut x: usize| {
        let mut v = vec![0i64; k];
        for i in (0..k).rev() {
            v[i] = (x % det as usize) as i64;
            x /= det as usize;
        }
        v
    };
    // Subgroup H of (Z/D)^k generated by the rows.
    let mut in_h = vec![false; size];
    in_h[0] = true;
    let mut frontier = vec![0usize];
    while let Some(x) = frontier.pop() {
        let v = decode(x);
        for r in rows {
            let y: Vec<i64> = v.iter().zip(r).map(|(a, b)| a + b).collect();
            let code = encode(&y);
            if !in_h[code] {
                in_h[code] = true;
                frontier.push(code);
            }
        }
    }
    let h_size = in_h.iter().filter(|&&b| b).count() as u64;
    let mut counts = vec![];
    for m in 1..=bound {
        let hits = (0..size)
            .filter(|&x| {
                let v: Vec<i64> = decode(x).iter().map(|a| a * m as i64).collect();
                in_h[encode(&v)]
            })
            .count() as u64;
        counts.push(hits / h_size);
    }
    Some(counts)
}

/// Same counts computed from invariant factors.
pub fn torsion_counts_from_factors(factors: &[u64], bound: u64) -> Vec<u64> {
    (1..=bound).map(|m| factors.iter().map(|&n| num_gcd(m, n)).product()).collect()
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

pub fn det_i64(rows: &[Vec<i64>]) -> i64 {
    let k = rows.len();
    if k == 1 {
        return rows[0][0];
    }
    (0..k)
        .map(|j| {
            let minor: Vec<Vec<i64>> =
                rows[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * rows[0][j] * det_i64(&minor)
        })
        .sum()
}

/// The field `F_{p^k}` as polynomials modulo a monic irreducible of degree `k`.
pub struct FiniteField {
    pub p: u64,
    pub k: usize,
    modulus: Vec<u64>,
}

impl FiniteField {
    pub fn new(p: u64, k: usize) -> Self {
        if k == 1 {
            return Self { p, k, modulus: vec![0, 1] };
        }
        // Degree <= 3: irreducible iff no root in F_p.
        assert!(k <= 3);
        let total = p.pow(k as u32);
        for code in 0..total {
            let mut m: Vec<u64> = (0..k).map(|i| (code / p.pow(i as u32)) % p).collect();
            m.push(1);
            let has_root = (0..p).any(|x| m.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) == 0);
            if !has_root {
                return Self { p, k, modulus: m };
            }
        }
        unreachable!("an irreducible polynomial of degree {k} exists");
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.k as u32)
    }

    pub fn element(&self, code: u64) -> Vec<u64> {
        (0..self.k).map(|i| (code / self.p.pow(i as u32)) % self.p).collect()
    }

    pub fn constant(&self, c: i64) -> Vec<u64> {
        let mut v = vec![0; self.k];
        v[0] = c.rem_euclid(self.p as i64) as u64;
        v
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut prod = vec![0u64; 2 * self.k - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for deg in (self.k..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            for (i, &m) in self.modulus.iter().enumerate().take(self.k) {
                let idx = deg - self.k + i;
                prod[idx] = (prod[idx] + (p - c) * m % p) % p;
            }
            prod[deg] = 0;
        }
        prod.truncate(self.k);
        prod
    }

    pub fn pow(&self, a: &[u64], e: u32) -> Vec<u64> {
        let mut r = self.constant(1);
        for _ in 0..e {
            r = self.mul(&r, a);
        }
        r
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }
}

/// A projective point over `F_{p^k}` where all partials of `f` vanish.
pub fn singular_point(f: &SparsePoly, field: &FiniteField) -> Option<Vec<Vec<u64>>> {
    let n = f.n_vars();
    let q = field.size();
    let partials: Vec<Vec<(Vec<u32>, Vec<u64>)>> = (0..n)
        .map(|i| {
            f.terms()
                .iter()
                .filter(|(m, _)| m.exponent(i) > 0)
                .map(|(m, &c)| {
                    let mut e = m.exponents().to_vec();
                    let k = e[i];
                    e[i] -= 1;
                    (e, field.constant(c * k as i64))
                })
                .collect()
        })
        .collect();
    // Points normalized with the first nonzero coordinate equal to 1.
    for lead in 0..n {
        let free = n - lead - 1;
        for code in 0..q.pow(free as u32) {
            let mut pt = vec![field.constant(0); n];
            pt[lead] = field.constant(1);
            for j in 0..free {
                pt[lead + 1 + j] = field.element((code / q.pow(j as u32)) % q);
            }
            let all_zero = partials.iter().all(|terms| {
                let mut acc = field.constant(0);
                for (e, c) in terms {
                    let mut t = c.clone();
                    for (v, &k) in e.iter().enumerate() {
                        if k > 0 {
                            t = field.mul(&t, &field.pow(&pt[v], k));
                        }
                    }
                    acc = field.add(&acc, &t);
                }
                field.is_zero(&acc)
            });
            if all_zero {
                return Some(pt);
            }
        }
    }
    None
}

/// Every support set `S_I` of a cyclic action `diag[ω^{a_1}:…:ω^{a_{N-1}}:1]`
/// with `ω^n = 1`, `n <= max_order`, for every target weight. Deduplicated.
pub fn cyclic_supports(d: u32, n_vars: usize, max_order: u64) -> Vec<SupportSet> {
    let all = enumerate_monomials(d, n_vars);
    let mut seen = std::collections::BTreeSet::new();
    for order in 1..=max_order {
        let count = order.pow(n_vars as u32 - 1);
        for code in 0..count {
            let w: Vec<u64> = (0..n_vars - 1).map(|i| (code / order.pow(i as u32)) % order).collect();
            let weight = |m: &Monomial| -> u64 { (0..n_vars - 1).map(|i| w[i] * m.exponent(i) as u64).sum::<u64>() % order };
            let mut classes: std::collections::BTreeMap<u64, Vec<Monomial>> = Default::default();
            for m in all.iter() {
                classes.entry(weight(m)).or_default().push(m.clone());
            }
            for class in classes.into_values() {
                seen.insert(class.iter().map(|m| m.exponents().to_vec()).collect::<Vec<_>>());
            }
        }
    }
    seen.into_iter()
        .map(|ms| SupportSet::new(d, n_vars, ms.into_iter().map(Monomial::new)).unwrap())
        .collect()
}

pub fn catalog_data(generators: &str, degree: u32, first: &str, n: usize) -> ActionData {
    let m = Monomial::parse(first, n).unwrap();
    ActionData::from_generator_string(degree, generators, &Target::Monomial(m)).unwrap()
}
