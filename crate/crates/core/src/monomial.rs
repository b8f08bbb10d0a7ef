//! Monomials, support sets, and the monomial-level combinatorics (M-sets).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exponent vector. Variables are 0-based internally and rendered 1-based.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Self { exps }
    }

    /// `x_i^a * x_j^b`; when `i == j` the exponents add.
    pub fn binomial(n: usize, i: usize, a: u32, j: usize, b: u32) -> Self {
        let mut exps = vec![0; n];
        exps[i] += a;
        exps[j] += b;
        Self { exps }
    }

    pub fn pure_power(n: usize, i: usize, d: u32) -> Self {
        Self::binomial(n, i, d, i, 0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn n_vars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i]
    }

    /// Monomial after renaming variable `i` to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Monomial {
        let mut exps = vec![0; self.exps.len()];
        for (i, &e) in self.exps.iter().enumerate() {
            exps[perm[i]] = e;
        }
        Monomial { exps }
    }

    pub fn to_i64(&self) -> Vec<i64> {
        self.exps.iter().map(|&e| e as i64).collect()
    }

    /// Difference of exponent vectors `self - other`.
    pub fn difference(&self, other: &Monomial) -> Vec<i64> {
        self.exps
            .iter()
            .zip(&other.exps)
            .map(|(&a, &b)| a as i64 - b as i64)
            .collect()
    }

    /// Parses `x1^2*x2`, `x1^2x2`, `x1^2 x2` or an exponent list `[2,1,0]`.
    /// Variable-style input needs the number of variables.
    pub fn parse(s: &str, n_vars: usize) -> Result<Monomial> {
        let t = s.trim();
        if t.starts_with('[') {
            let m: Monomial = t.parse()?;
            if m.n_vars() != n_vars {
                return Err(Error::Parse(format!("`{t}` has {} entries, expected {n_vars}", m.n_vars())));
            }
            return Ok(m);
        }
        let mut exps = vec![0u32; n_vars];
        if t == "1" {
            return Ok(Monomial { exps });
        }
        let b = t.as_bytes();
        let mut pos = 0;
        let bad = |msg: &str| Error::Parse(format!("monomial `{t}`: {msg}"));
        let read_number = |pos: &mut usize| -> Option<u64> {
            let start = *pos;
            while *pos < b.len() && b[*pos].is_ascii_digit() {
                *pos += 1;
            }
            t[start..*pos].parse().ok()
        };
        while pos < b.len() {
            match b[pos] {
                b' ' | b'*' => pos += 1,
                b'x' | b'X' => {
                    pos += 1;
                    if pos < b.len() && b[pos] == b'_' {
                        pos += 1;
                    }
                    let idx = read_number(&mut pos).ok_or_else(|| bad("missing variable index"))?;
                    if idx == 0 || idx as usize > n_vars {
                        return Err(bad(&format!("variable index {idx} out of range 1..={n_vars}")));
                    }
                    let mut e = 1;
                    if pos < b.len() && b[pos] == b'^' {
                        pos += 1;
                        e = read_number(&mut pos).ok_or_else(|| bad("missing exponent"))?;
                    }
                    exps[idx as usize - 1] += e as u32;
                }
                _ => return Err(bad(&format!("unexpected character at offset {pos}"))),
            }
        }
        Ok(Monomial { exps })
    }
}

impl FromStr for Monomial {
    type Err = Error;

    /// Only the exponent-list form is self-describing.
    fn from_str(s: &str) -> Result<Monomial> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected exponent list, got `{t}`")))?;
        let exps = inner
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("exponent list `{t}`: {e}")))?;
        Ok(Monomial { exps })
    }
}

/// Graded order; within a degree, larger exponents on earlier variables come
/// first (so `x1^d` is the smallest monomial of degree `d`).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.exps.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Monomial { exps: Vec::deserialize(d)? })
    }
}

/// All degree-`d` monomials in `n` variables, in monomial order.
pub fn enumerate_monomials(d: u32, n: usize) -> SupportSet {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Monomial::new(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = vec![];
    if n > 0 {
        rec(0, d, &mut vec![0; n], &mut out);
    }
    SupportSet { degree: d, n_vars: n, monomials: out }
}

/// A sorted, duplicate-free set of degree-`d` monomials in `n` variables.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SupportSet {
    degree: u32,
    n_vars: usize,
    monomials: Vec<Monomial>,
}

impl SupportSet {
    pub fn new(degree: u32, n_vars: usize, monomials: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let mut monomials: Vec<Monomial> = monomials.into_iter().collect();
        for m in &monomials {
            if m.n_vars() != n_vars || m.degree() != degree {
                return Err(Error::Invalid(format!(
                    "monomial {m} is not of degree {degree} in {n_vars} variables"
                )));
            }
        }
        monomials.sort();
        monomials.dedup();
        Ok(Self { degree, n_vars, monomials })
    }

    pub fn parse(degree: u32, n_vars: usize, items: &[impl AsRef<str>]) -> Result<Self> {
        let ms = items
            .iter()
            .map(|s| Monomial::parse(s.as_ref(), n_vars))
            .collect::<Result<Vec<_>>>()?;
        Self::new(degree, n_vars, ms)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Monomial> {
        self.monomials.iter()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.monomials.binary_search(m).is_ok()
    }

    pub fn is_subset(&self, other: &SupportSet) -> bool {
        self.monomials.iter().all(|m| other.contains(m))
    }

    pub fn permuted(&self, perm: &[usize]) -> SupportSet {
        let mut monomials: Vec<Monomial> = self.monomials.iter().map(|m| m.permuted(perm)).collect();
        monomials.sort();
        SupportSet { degree: self.degree, n_vars: self.n_vars, monomials }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.monomials.iter().map(|m| m.to_string()).collect()
    }

    /// Monomials with total degree at least `d-1` in the variables of `a` and
    /// degree zero in those of `b`. Indices are 0-based.
    pub fn m_set(&self, a: &[usize], b: &[usize]) -> Result<SupportSet> {
        if let Some(x) = a.iter().find(|x| b.contains(x)) {
            return Err(Error::Invalid(format!("index {} appears in both A and B", x + 1)));
        }
        if let Some(x) = a.iter().chain(b).find(|&&x| x >= self.n_vars) {
            return Err(Error::Invalid(format!("index {} out of range", x + 1)));
        }
        let monomials = self
            .monomials
            .iter()
            .filter(|m| in_m_set(m, a, b, self.degree))
            .cloned()
            .collect();
        Ok(SupportSet { degree: self.degree, n_vars: self.n_vars, monomials })
    }

    /// First `(A, B)` with `|B| < |A|` and `M(A;B)` empty, in order of
    /// increasing `|A|` then lexicographic `A`, with `|A| <= max_a`.
    pub fn small_witness(&self, max_a: usize) -> Option<(Vec<usize>, Vec<usize>)> {
        let n = self.n_vars;
        for size in 1..=max_a.min(n) {
            for a in subsets_of_size(n, size) {
                if let Some(b) = self.small_witness_for(&a) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// For a fixed `A`, the best `B` is the set of variables `j` outside `A`
    /// such that some monomial with `A`-degree `d-1` uses `x_j` (any `B` must
    /// contain all of them). A pure `A`-monomial can never be excluded.
    fn small_witness_for(&self, a: &[usize]) -> Option<Vec<usize>> {
        let d = self.degree;
        let mut forced = vec![false; self.n_vars];
        for m in &self.monomials {
            let deg_a: u32 = a.iter().map(|&i| m.exponent(i)).sum();
            if deg_a == d {
                return None;
            }
            if deg_a + 1 == d {
                let j = (0..self.n_vars).find(|j| !a.contains(j) && m.exponent(*j) > 0).unwrap();
                forced[j] = true;
            }
        }
        let b: Vec<usize> = (0..self.n_vars).filter(|&j| forced[j]).collect();
        (b.len() < a.len()).then_some(b)
    }
}

pub(crate) fn in_m_set(m: &Monomial, a: &[usize], b: &[usize], d: u32) -> bool {
    let deg_a: u32 = a.iter().map(|&i| m.exponent(i)).sum();
    deg_a + 1 >= d && b.iter().all(|&j| m.exponent(j) == 0)
}

/// Increasing `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

impl fmt::Debug for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_strings().join(", "))
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_strings().join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(d: u32, n: usize, items: &[&str]) -> SupportSet {
        SupportSet::parse(d, n, items).unwrap()
    }

    fn binom(n: u64, k: u64) -> u64 {
        (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate_monomials(3, 6).len() as u64, binom(8, 5));
        assert_eq!(enumerate_monomials(4, 4).len() as u64, binom(7, 3));
        let lin = enumerate_monomials(1, 3);
        assert_eq!(lin.to_strings(), vec!["x1", "x2", "x3"]);
        let cubics = enumerate_monomials(3, 2);
        assert_eq!(cubics.to_strings(), vec!["x1^3", "x1^2*x2", "x1*x2^2", "x2^3"]);
        let all = enumerate_monomials(3, 4);
        assert!(all.monomials().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn parse_and_render() {
        let m = Monomial::parse("x1^2*x2", 3).unwrap();
        assert_eq!(m.exponents(), &[2, 1, 0]);
        assert_eq!(Monomial::parse("x1^2x2", 3).unwrap(), m);
        assert_eq!(Monomial::parse("[2,1,0]", 3).unwrap(), m);
        assert_eq!(Monomial::parse("x2 x1 x1", 3).unwrap(), m);
        assert_eq!(m.to_string(), "x1^2*x2");
        assert!(Monomial::parse("x4", 3).is_err());
        assert!(Monomial::parse("y1", 3).is_err());
        assert!(Monomial::parse("[1,2]", 3).is_err());
        assert_eq!(serde_json::to_string(&m).unwrap(), "[2,1,0]");
    }

    #[test]
    fn m_set_examples() {
        let a = s(4, 4, &["x1^3*x2", "x2^3*x3", "x3^3*x2", "x4^3*x3"]);
        assert!(a.m_set(&[0, 2], &[1]).unwrap().is_empty());
        let b = s(4, 4, &["x1^3*x2", "x2^3*x3", "x3^4", "x4^3*x2"]);
        assert!(b.m_set(&[0, 3], &[1]).unwrap().is_empty());
        assert_eq!(b.m_set(&[0, 1, 2, 3], &[]).unwrap(), b);
        assert!(b.m_set(&[0, 1], &[1]).is_err());
    }

    #[test]
    fn small_witness_scan() {
        let a = s(4, 4, &["x1^3*x2", "x2^3*x3", "x3^3*x2", "x4^3*x3"]);
        assert_eq!(a.small_witness(3), Some((vec![0, 2], vec![1])));
        let fermat = s(3, 3, &["x1^3", "x2^3", "x3^3"]);
        assert_eq!(fermat.small_witness(3), None);
    }

    #[test]
    fn permutation_listing() {
        let p = permutations(4);
        assert_eq!(p.len(), 24);
        assert_eq!(p[0], vec![0, 1, 2, 3]);
        assert_eq!(p[23], vec![3, 2, 1, 0]);
        assert_eq!(permutations(0).len(), 1);
    }
}
