//! Finite subgroups of the diagonal torus, written additively as `(Q/Z)^N`.
//!
//! A diagonal matrix `diag(exp(2πi v_1), ..., exp(2πi v_N))` is stored as
//! the vector `v` of rationals mod 1. Projective classes are normalized by
//! subtracting the last coordinate, so the last entry is always zero.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::lattice::{congruence_kernel, smith_normal_form, AbelianPresentation, IntegerMatrix};

/// An element of `(Q/Z)^N` as numerators over one shared, reduced denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QzVector {
    den: u64,
    num: Vec<u64>,
}

impl QzVector {
    pub fn zero(n: usize) -> Self {
        Self { den: 1, num: vec![0; n] }
    }

    /// `num[i] / den` reduced mod 1 and to lowest common terms.
    pub fn new(den: u64, num: Vec<i64>) -> Self {
        assert!(den > 0, "zero denominator");
        let d = den as i128;
        let num: Vec<u64> = num.iter().map(|&x| (x as i128).rem_euclid(d) as u64).collect();
        Self { den, num }.reduced()
    }

    fn reduced(mut self) -> Self {
        let g = self.num.iter().fold(self.den, |g, &x| g.gcd(&x));
        if g > 1 {
            self.den /= g;
            for x in self.num.iter_mut() {
                *x /= g;
            }
        }
        self
    }

    pub fn len(&self) -> usize {
        self.num.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn numerators(&self) -> &[u64] {
        &self.num
    }

    /// Additive order of the element (its reduced denominator).
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &QzVector) -> QzVector {
        assert_eq!(self.len(), other.len());
        let den = self.den.lcm(&other.den);
        let (a, b) = (den / self.den, den / other.den);
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(&x, &y)| ((x as u128 * a as u128 + y as u128 * b as u128) % den as u128) as i64)
            .collect();
        QzVector::new(den, num)
    }

    pub fn scale(&self, k: i64) -> QzVector {
        let d = self.den as i128;
        let num = self
            .num
            .iter()
            .map(|&x| ((x as i128 * k as i128).rem_euclid(d)) as i64)
            .collect();
        QzVector::new(self.den, num)
    }

    pub fn neg(&self) -> QzVector {
        self.scale(-1)
    }

    /// Subtracts the last coordinate from all coordinates (quotient by the
    /// diagonal line).
    pub fn projective(&self) -> QzVector {
        let Some(&last) = self.num.last() else {
            return self.clone();
        };
        let d = self.den as i64;
        QzVector::new(self.den, self.num.iter().map(|&x| x as i64 - last as i64 + d).collect())
    }

    /// Pairing `Σ a_i v_i mod 1`, returned as (numerator, denominator) with
    /// the denominator equal to `self.den`.
    pub fn pair(&self, a: &[i64]) -> u64 {
        assert_eq!(a.len(), self.len());
        let d = self.den as i128;
        let s: i128 = a
            .iter()
            .zip(&self.num)
            .map(|(&x, &y)| x as i128 * y as i128)
            .sum();
        s.rem_euclid(d) as u64
    }

    pub fn pair_u32(&self, a: &[u32]) -> u64 {
        let d = self.den as u128;
        let s: u128 = a.iter().zip(&self.num).map(|(&x, &y)| x as u128 * y as u128).sum();
        (s % d) as u64
    }
}

impl fmt::Debug for QzVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .num
            .iter()
            .map(|&x| {
                if x == 0 {
                    "0".to_string()
                } else {
                    let g = x.gcd(&self.den);
                    format!("{}/{}", x / g, self.den / g)
                }
            })
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// A finite subgroup of the projective diagonal torus, with generators in
/// invariant-factor form: generator `i` has order `structure.factors()[i]`
/// and the group is their internal direct sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteDiagonalGroup {
    n_vars: usize,
    generators: Vec<QzVector>,
    structure: AbelianPresentation,
}

impl FiniteDiagonalGroup {
    pub fn trivial(n_vars: usize) -> Self {
        Self {
            n_vars,
            generators: vec![],
            structure: AbelianPresentation::trivial(),
        }
    }

    /// Subgroup generated by arbitrary elements; generators are re-chosen
    /// to match the invariant factors.
    pub fn generated_by(n_vars: usize, elements: &[QzVector]) -> Self {
        let pres = subgroup_presentation(elements);
        Self {
            n_vars,
            generators: pres.basis,
            structure: pres.structure,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn generators(&self) -> &[QzVector] {
        &self.generators
    }

    pub fn structure(&self) -> &AbelianPresentation {
        &self.structure
    }

    pub fn order(&self) -> u64 {
        self.structure.order()
    }

    /// Every element, as `Σ a_i g_i` in mixed-radix order.
    pub fn elements(&self) -> Vec<QzVector> {
        let mut out = vec![QzVector::zero(self.n_vars)];
        for (g, &n) in self.generators.iter().zip(self.structure.factors()) {
            let mut next = Vec::with_capacity(out.len() * n as usize);
            for k in 0..n {
                let step = g.scale(k as i64);
                next.extend(out.iter().map(|x| x.add(&step)));
            }
            out = next;
        }
        out
    }

    pub fn element_set(&self) -> HashSet<QzVector> {
        self.elements().into_iter().collect()
    }

    /// Brute-force closure of the generators (breadth-first), used to
    /// re-check the claimed order on small groups.
    pub fn closure_order(&self, limit: usize) -> Option<usize> {
        let mut seen: HashSet<QzVector> = HashSet::new();
        let mut frontier = vec![QzVector::zero(self.n_vars)];
        seen.insert(frontier[0].clone());
        while let Some(x) = frontier.pop() {
            for g in &self.generators {
                let y = x.add(g);
                if seen.insert(y.clone()) {
                    if seen.len() > limit {
                        return None;
                    }
                    frontier.push(y);
                }
            }
        }
        Some(seen.len())
    }
}

pub(crate) struct SubgroupPresentation {
    pub structure: AbelianPresentation,
    /// New generators, one per invariant factor.
    pub basis: Vec<QzVector>,
    /// `basis[i] = Σ_j combos[i][j] · gens[j]`.
    pub combos: Vec<Vec<BigInt>>,
}

/// Presentation of the subgroup of `(Q/Z)^r` generated by `gens`.
pub(crate) fn subgroup_presentation(gens: &[QzVector]) -> SubgroupPresentation {
    let m = gens.len();
    if m == 0 {
        return SubgroupPresentation {
            structure: AbelianPresentation::trivial(),
            basis: vec![],
            combos: vec![],
        };
    }
    let r = gens[0].len();
    let den = gens.iter().fold(1u64, |l, g| l.lcm(&g.den));
    // Relations x with Σ_j x_j gens_j ≡ 0: one congruence per coordinate.
    let rows: Vec<Vec<BigInt>> = (0..r)
        .map(|c| {
            gens.iter()
                .map(|g| BigInt::from(g.num[c] * (den / g.den)))
                .collect()
        })
        .collect();
    let moduli = vec![BigInt::from(den); r];
    let relations = congruence_kernel(m, &rows, &moduli);
    let snf = smith_normal_form(&IntegerMatrix::from_rows(m, relations.basis()));
    let v_inv = snf.v_inverse();
    let diag = snf.diagonal();
    assert_eq!(diag.len(), m, "finite generators must give a full-rank relation lattice");

    let mut factors = vec![];
    let mut basis = vec![];
    let mut combos = vec![];
    for (i, d) in diag.iter().enumerate() {
        let d = d.to_u64().expect("order exceeds u64");
        assert!(d > 0);
        if d == 1 {
            continue;
        }
        let combo = v_inv.row(i).to_vec();
        let mut acc = QzVector::zero(r);
        for (k, g) in combo.iter().zip(gens) {
            let k = k.mod_floor(&BigInt::from(g.den)).to_i64().unwrap();
            acc = acc.add(&g.scale(k));
        }
        factors.push(d);
        basis.push(acc);
        combos.push(combo);
    }
    SubgroupPresentation {
        structure: AbelianPresentation::new(factors).expect("SNF yields a divisibility chain"),
        basis,
        combos,
    }
}

/// Result of solving a family of weight-equality congruences.
#[derive(Clone, Debug)]
pub struct TorsionDual {
    /// Dimension of the connected (torus) part of the solution group.
    pub free_rank: usize,
    /// The finite part, as a subgroup of the projective torus.
    pub group: FiniteDiagonalGroup,
}

/// All `v ∈ (Q/Z)^N` with `c·v ≡ 0` for every constraint `c`, modulo the
/// diagonal line. Constraints must have coordinate sum zero (differences of
/// equal-degree exponent vectors).
pub fn torsion_dual(n_vars: usize, constraints: &[Vec<i64>]) -> TorsionDual {
    assert!(n_vars >= 1);
    for c in constraints {
        assert_eq!(c.len(), n_vars, "constraint length mismatch");
        assert_eq!(c.iter().sum::<i64>(), 0, "constraint is not a difference of equal-degree monomials");
    }
    // With v_N normalized to 0, only the first N-1 coordinates matter.
    let reduced: Vec<Vec<i64>> = constraints.iter().map(|c| c[..n_vars - 1].to_vec()).collect();
    let a = IntegerMatrix::from_rows_i64(n_vars - 1, &reduced);
    let snf = smith_normal_form(&a);
    let rank = snf.rank();
    let diag = snf.diagonal();
    let mut generators = vec![];
    let mut factors = vec![];
    for (i, d) in diag.iter().enumerate().take(rank) {
        let d = d.to_u64().expect("torsion order exceeds u64");
        if d <= 1 {
            continue;
        }
        let col = snf.v.column(i);
        let mut num: Vec<i64> = col
            .iter()
            .map(|x| x.mod_floor(&BigInt::from(d)).to_i64().unwrap())
            .collect();
        num.push(0);
        generators.push(QzVector::new(d, num));
        factors.push(d);
    }
    TorsionDual {
        free_rank: (n_vars - 1) - rank,
        group: FiniteDiagonalGroup {
            n_vars,
            generators,
            structure: AbelianPresentation::new(factors).expect("SNF yields a divisibility chain"),
        },
    }
}
