//! Exact integer matrix algebra over arbitrary-precision integers.
//!
//! Everything here works over `BigInt`: Smith normal form with explicit
//! unimodular transforms, Hermite normal form of row lattices, integer
//! kernels and kernels of congruence systems.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from `i64` rows. `cols` is needed to give empty
    /// matrices a shape.
    pub fn from_rows_i64(cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {r}");
            for (c, &x) in row.iter().enumerate() {
                m.data[r * cols + c] = BigInt::from(x);
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {r}");
            for (c, x) in row.iter().enumerate() {
                m.data[r * cols + c] = x.clone();
            }
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in entries.iter().enumerate() {
            m.data[i * n + i] = BigInt::from(x);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: BigInt) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntegerMatrix {
        let mut out = IntegerMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c).is_zero()))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] -= k * row[src]
    fn sub_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for c in 0..self.cols {
            let s = self.data[src * self.cols + c].clone();
            if !s.is_zero() {
                self.data[dst * self.cols + c] -= k * s;
            }
        }
    }

    /// col[dst] -= k * col[src]
    fn sub_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for r in 0..self.rows {
            let s = self.data[r * self.cols + src].clone();
            if !s.is_zero() {
                self.data[r * self.cols + dst] -= k * s;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let x = std::mem::take(&mut self.data[r * self.cols + c]);
            self.data[r * self.cols + c] = -x;
        }
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Invariant-factor presentation `Z/n1 ⊕ ... ⊕ Z/nr` with `n1 | n2 | ...`
/// and every `ni ≥ 2`. The trivial group is the empty list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct AbelianPresentation {
    factors: Vec<u64>,
}

impl AbelianPresentation {
    pub fn trivial() -> Self {
        Self { factors: vec![] }
    }

    /// Validates the divisibility chain.
    pub fn new(factors: Vec<u64>) -> Result<Self, String> {
        if factors.iter().any(|&n| n < 2) {
            return Err(format!("invariant factors must be >= 2, got {factors:?}"));
        }
        if factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(format!("invariant factors must form a divisibility chain, got {factors:?}"));
        }
        Ok(Self { factors })
    }

    /// Normalizes an arbitrary list of cyclic orders (`Z/m1 ⊕ Z/m2 ⊕ ...`,
    /// entries of 1 allowed) into invariant-factor form.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let snf = smith_normal_form(&IntegerMatrix::diagonal(
            &orders.iter().map(|&m| m as i64).collect::<Vec<_>>(),
        ));
        Self::from_diagonal(&snf.d)
    }

    pub(crate) fn from_diagonal(d: &IntegerMatrix) -> Self {
        let k = d.rows().min(d.cols());
        let factors = (0..k)
            .map(|i| d.get(i, i))
            .filter(|x| !x.is_zero() && !x.is_one())
            .map(|x| x.to_u64().expect("invariant factor exceeds u64"))
            .collect();
        Self { factors }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Primary decomposition, e.g. `[6, 6]` renders as `C2^2 ⊕ C3^2`.
    pub fn primary_form(&self) -> String {
        if self.factors.is_empty() {
            return "C1".to_string();
        }
        let mut parts: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
        for &n in &self.factors {
            let mut m = n;
            let mut p = 2;
            while m > 1 {
                if m % p == 0 {
                    let mut q = 1;
                    while m % p == 0 {
                        m /= p;
                        q *= p;
                    }
                    parts.entry(p).or_default().push(q);
                }
                p += 1;
            }
        }
        let mut out = vec![];
        for qs in parts.values() {
            let mut run: Vec<(u64, usize)> = vec![];
            for &q in qs {
                match run.last_mut() {
                    Some((r, c)) if *r == q => *c += 1,
                    _ => run.push((q, 1)),
                }
            }
            for (q, c) in run {
                if c == 1 {
                    out.push(format!("C{q}"));
                } else {
                    out.push(format!("C{q}^{c}"));
                }
            }
        }
        out.join(" ⊕ ")
    }
}

impl fmt::Display for AbelianPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.factors)
    }
}

/// `U·A·V = D` with `U`, `V` unimodular and `D` diagonal, `d1 | d2 | ...`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
    v_inv: IntegerMatrix,
}

impl SnfResult {
    pub fn v_inverse(&self) -> &IntegerMatrix {
        &self.v_inv
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

fn smallest_nonzero(
    d: &IntegerMatrix,
    cells: impl Iterator<Item = (usize, usize)>,
) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for (r, c) in cells {
        let x = d.get(r, c);
        if x.is_zero() {
            continue;
        }
        let a = x.abs();
        if best.as_ref().is_none_or(|(_, b)| a < *b) {
            best = Some(((r, c), a));
        }
    }
    best.map(|(rc, _)| rc)
}

/// Smith normal form. The pivot is always the nonzero entry of smallest
/// absolute value, ties broken in row-major order, so the output is a
/// deterministic function of the input.
pub fn smith_normal_form(a: &IntegerMatrix) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntegerMatrix::identity(m);
    let mut v = IntegerMatrix::identity(n);
    let mut v_inv = IntegerMatrix::identity(n);

    for t in 0..m.min(n) {
        let cells = (t..m).flat_map(|r| (t..n).map(move |c| (r, c)));
        let Some((pr, pc)) = smallest_nonzero(&d, cells) else {
            break;
        };
        d.swap_rows(t, pr);
        u.swap_rows(t, pr);
        d.swap_cols(t, pc);
        v.swap_cols(t, pc);
        v_inv.swap_rows(t, pc);

        loop {
            let mut clean = true;
            for r in t + 1..m {
                if d.get(r, t).is_zero() {
                    continue;
                }
                let q = d.get(r, t).div_floor(d.get(t, t));
                d.sub_row_multiple(r, t, &q);
                u.sub_row_multiple(r, t, &q);
                if !d.get(r, t).is_zero() {
                    clean = false;
                }
            }
            for c in t + 1..n {
                if d.get(t, c).is_zero() {
                    continue;
                }
                let q = d.get(t, c).div_floor(d.get(t, t));
                d.sub_col_multiple(c, t, &q);
                v.sub_col_multiple(c, t, &q);
                // V ← V·E with E = I - q e_t e_c^T, so V⁻¹ ← E⁻¹·V⁻¹.
                let neg = -q;
                v_inv.sub_row_multiple(t, c, &neg);
                if !d.get(t, c).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                let cells = std::iter::once((t, t))
                    .chain((t + 1..m).map(|r| (r, t)))
                    .chain((t + 1..n).map(|c| (t, c)));
                let (pr, pc) = smallest_nonzero(&d, cells).expect("pivot vanished");
                d.swap_rows(t, pr);
                u.swap_rows(t, pr);
                d.swap_cols(t, pc);
                v.swap_cols(t, pc);
                v_inv.swap_rows(t, pc);
                continue;
            }
            let piv = d.get(t, t).clone();
            let bad = (t + 1..m)
                .flat_map(|r| (t + 1..n).map(move |c| (r, c)))
                .find(|&(r, c)| !d.get(r, c).is_multiple_of(&piv));
            match bad {
                Some((r, _)) => {
                    let minus_one = -BigInt::one();
                    d.sub_row_multiple(t, r, &minus_one);
                    u.sub_row_multiple(t, r, &minus_one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfResult { u, d, v, v_inv }
}

/// `Z^cols / rowspace(A)` as (free rank, torsion).
pub fn quotient_structure(a: &IntegerMatrix) -> (usize, AbelianPresentation) {
    let snf = smith_normal_form(a);
    (a.cols() - snf.rank(), AbelianPresentation::from_diagonal(&snf.d))
}

/// Basis (as rows) of the integer kernel `{x ∈ Z^cols : A x = 0}`.
pub fn integer_kernel(a: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    (rank..a.cols()).map(|i| snf.v.column(i)).collect()
}

/// Lattice spanned by `{x ∈ Z^n : Σ_j rows[i][j] x_j ≡ 0 (mod moduli[i])}`.
/// A modulus of zero asks for exact equality.
pub fn congruence_kernel(n: usize, rows: &[Vec<BigInt>], moduli: &[BigInt]) -> Lattice {
    assert_eq!(rows.len(), moduli.len());
    let m = rows.len();
    let mut a = IntegerMatrix::zeros(m, n + m);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), n);
        for (j, x) in row.iter().enumerate() {
            a.set(i, j, x.clone());
        }
        a.set(i, n + i, moduli[i].clone());
    }
    let kernel = integer_kernel(&a);
    let projected: Vec<Vec<BigInt>> = kernel.into_iter().map(|v| v[..n].to_vec()).collect();
    Lattice::from_generators(n, &projected)
}

/// Row-style Hermite normal form: echelon rows with positive pivots and
/// entries above each pivot reduced into `[0, pivot)`. Zero rows dropped.
pub fn hermite_normal_form(n: usize, generators: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = generators.to_vec();
    let mut r = 0;
    for col in 0..n {
        if r >= rows.len() {
            break;
        }
        loop {
            let mut best: Option<(usize, BigInt)> = None;
            for (i, row) in rows.iter().enumerate().skip(r) {
                if !row[col].is_zero() {
                    let a = row[col].abs();
                    if best.as_ref().is_none_or(|(_, b)| a < *b) {
                        best = Some((i, a));
                    }
                }
            }
            let Some((p, _)) = best else { break };
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[r][col]);
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot_row.iter()) {
                    *x -= &q * y;
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[r][col].is_zero() {
            continue;
        }
        if rows[r][col].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        let pivot_row = rows[r].clone();
        for row in rows.iter_mut().take(r) {
            let q = row[col].div_floor(&pivot_row[col]);
            if !q.is_zero() {
                for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                    *x -= &q * y;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows.retain(|row| row.iter().any(|x| !x.is_zero()));
    rows
}

/// A sublattice of `Z^n` held in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<BigInt>>,
}

impl Lattice {
    pub fn from_generators(dim: usize, generators: &[Vec<BigInt>]) -> Self {
        Self {
            dim,
            basis: hermite_normal_form(dim, generators),
        }
    }

    pub fn from_generators_i64(dim: usize, generators: &[Vec<i64>]) -> Self {
        let g: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_generators(dim, &g)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        for row in &self.basis {
            let col = row.iter().position(|x| !x.is_zero()).expect("zero basis row");
            if w[..col].iter().any(|x| !x.is_zero()) {
                return false;
            }
            let (q, rem) = w[col].div_rem(&row[col]);
            if !rem.is_zero() {
                return false;
            }
            for (x, y) in w.iter_mut().zip(row.iter()) {
                *x -= &q * y;
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    pub fn contains_i64(&self, v: &[i64]) -> bool {
        let w: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        self.contains(&w)
    }

    /// Basis rows as `i64`; panics if an entry does not fit.
    pub fn basis_i64(&self) -> Vec<Vec<i64>> {
        self.basis
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().expect("lattice entry exceeds i64")).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(cols: usize, rows: &[&[i64]]) -> IntegerMatrix {
        IntegerMatrix::from_rows_i64(cols, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn diag_i64(snf: &SnfResult) -> Vec<i64> {
        snf.diagonal().iter().map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn snf_of_coprime_diagonal() {
        let snf = smith_normal_form(&m(2, &[&[2, 0], &[0, 3]]));
        assert_eq!(diag_i64(&snf), vec![1, 6]);
    }

    #[test]
    fn snf_of_identity() {
        let snf = smith_normal_form(&IntegerMatrix::identity(3));
        assert_eq!(snf.d, IntegerMatrix::identity(3));
    }

    #[test]
    fn snf_of_two_by_two() {
        let a = m(2, &[&[2, 4], &[6, 8]]);
        let snf = smith_normal_form(&a);
        assert_eq!(diag_i64(&snf), vec![2, 4]);
        assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d);
        assert_eq!(snf.v.mul(snf.v_inverse()), IntegerMatrix::identity(2));
    }

    #[test]
    fn snf_empty_matrices() {
        let snf = smith_normal_form(&IntegerMatrix::zeros(0, 4));
        assert_eq!(snf.rank(), 0);
        assert_eq!(snf.v, IntegerMatrix::identity(4));
        let snf = smith_normal_form(&IntegerMatrix::zeros(3, 0));
        assert_eq!(snf.u, IntegerMatrix::identity(3));
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(
            quotient_structure(&m(2, &[&[2, 0], &[0, 3]])),
            (0, AbelianPresentation::new(vec![6]).unwrap())
        );
        assert_eq!(
            quotient_structure(&m(4, &[&[0, 0, 0, 0]])),
            (4, AbelianPresentation::trivial())
        );
    }

    #[test]
    fn presentation_validation() {
        assert!(AbelianPresentation::new(vec![2, 4]).is_ok());
        assert!(AbelianPresentation::new(vec![4, 2]).is_err());
        assert!(AbelianPresentation::new(vec![1, 2]).is_err());
        assert_eq!(
            AbelianPresentation::from_cyclic_orders(&[2, 2, 3, 3]).factors(),
            &[6, 6]
        );
        assert_eq!(
            AbelianPresentation::new(vec![2, 2, 6]).unwrap().primary_form(),
            "C2^3 ⊕ C3"
        );
    }

    #[test]
    fn hnf_and_membership() {
        let l = Lattice::from_generators_i64(3, &[vec![2, 4, 6], vec![0, 3, 3], vec![2, 7, 9]]);
        assert_eq!(l.rank(), 2);
        assert!(l.contains_i64(&[2, 1, 3]));
        assert!(!l.contains_i64(&[1, 0, 0]));
        // Canonical: a different generating set of the same lattice.
        let l2 = Lattice::from_generators_i64(3, &[vec![2, 1, 3], vec![0, 3, 3]]);
        assert_eq!(l, l2);
    }

    #[test]
    fn congruence_kernel_basic() {
        // x + y ≡ 0 mod 3 inside Z^2.
        let k = congruence_kernel(2, &[vec![BigInt::from(1), BigInt::from(1)]], &[BigInt::from(3)]);
        assert!(k.contains_i64(&[1, 2]));
        assert!(k.contains_i64(&[3, 0]));
        assert!(!k.contains_i64(&[1, 0]));
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn determinant_matches_known_values() {
        assert_eq!(m(2, &[&[2, 4], &[6, 8]]).determinant(), BigInt::from(-8));
        assert_eq!(m(3, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]]).determinant(), BigInt::from(-5));
    }
}
