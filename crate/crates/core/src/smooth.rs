//! Smoothness over prime fields, the K/T/Y building blocks, and largeness
//! verdicts for support sets.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::{groebner, pack, HPoly, MAX_VARS};
use crate::monomial::{Monomial, SupportSet};

/// A homogeneous polynomial with integer coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    degree: u32,
    n_vars: usize,
    terms: BTreeMap<Monomial, i64>,
}

impl SparsePoly {
    pub fn new(degree: u32, n_vars: usize, terms: impl IntoIterator<Item = (Monomial, i64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (m, c) in terms {
            if m.n_vars() != n_vars || m.degree() != degree {
                return Err(Error::Invalid(format!("term {m} is not of degree {degree} in {n_vars} variables")));
            }
            *map.entry(m).or_insert(0) += c;
        }
        map.retain(|_, c| *c != 0);
        Ok(Self { degree, n_vars, terms: map })
    }

    /// Sum of the monomials of `s` with the given coefficients.
    pub fn from_support(s: &SupportSet, coefficients: &[i64]) -> Result<Self> {
        if coefficients.len() != s.len() {
            return Err(Error::Invalid(format!(
                "{} coefficients for {} monomials",
                coefficients.len(),
                s.len()
            )));
        }
        Self::new(s.degree(), s.n_vars(), s.iter().cloned().zip(coefficients.iter().copied()))
    }

    /// Parses `2*x1^3*x2 + x1^2*x3*x4 - x4^3*x3`.
    pub fn parse(degree: u32, n_vars: usize, text: &str) -> Result<Self> {
        let mut terms = vec![];
        let cleaned = text.replace('-', "+-");
        for raw in cleaned.split('+').map(str::trim).filter(|t| !t.is_empty()) {
            let (sign, body) = match raw.strip_prefix('-') {
                Some(rest) => (-1, rest.trim()),
                None => (1, raw),
            };
            let split = body.find(|c: char| !c.is_ascii_digit()).unwrap_or(body.len());
            let (num, mono) = body.split_at(split);
            let coeff: i64 = if num.is_empty() {
                1
            } else {
                num.parse().map_err(|_| Error::Parse(format!("bad coefficient in `{raw}`")))?
            };
            let mono = mono.trim().trim_start_matches('*').trim();
            let m = if mono.is_empty() { Monomial::parse("1", n_vars)? } else { Monomial::parse(mono, n_vars)? };
            terms.push((m, sign * coeff));
        }
        Self::new(degree, n_vars, terms)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, i64> {
        &self.terms
    }

    pub fn support(&self) -> SupportSet {
        SupportSet::new(self.degree, self.n_vars, self.terms.keys().cloned()).expect("terms are homogeneous")
    }

    /// Partial derivatives reduced mod `p`.
    fn partials_mod(&self, p: u64) -> Vec<HPoly> {
        (0..self.n_vars)
            .map(|i| {
                let terms = self
                    .terms
                    .iter()
                    .filter(|(m, _)| m.exponent(i) > 0)
                    .map(|(m, &c)| {
                        let mut e = m.exponents().to_vec();
                        let a = e[i] as i64;
                        e[i] -= 1;
                        let c = (c.rem_euclid(p as i64) as u64) * (a as u64 % p) % p;
                        (pack(&e), c)
                    })
                    .collect();
                HPoly::from_terms(terms, p)
            })
            .collect()
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, &c)) in self.terms.iter().enumerate() {
            match (k, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            match c.unsigned_abs() {
                1 => write!(f, "{m}")?,
                mag => write!(f, "{mag}*{m}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum KtyKind {
    K,
    T,
    Y,
}

/// Support of a K-block (`k` variables), T-block (`k` variables) or Y-block
/// (`a + b + 2` variables), as exponent vectors over the block's own variables.
pub fn kty_support(kind: KtyKind, d: u32, k: usize, b: usize) -> Result<Vec<Monomial>> {
    let mono = |n: usize, i: usize, e: u32, j: usize, f: u32| Monomial::binomial(n, i, e, j, f);
    match kind {
        KtyKind::K | KtyKind::T => {
            if k == 0 {
                return Err(Error::Invalid("block needs at least one variable".into()));
            }
            if k == 1 {
                return Ok(vec![Monomial::pure_power(1, 0, d)]);
            }
            let mut out: Vec<Monomial> = (0..k - 1).map(|i| mono(k, i, d - 1, i + 1, 1)).collect();
            out.push(match kind {
                KtyKind::K => mono(k, k - 1, d - 1, 0, 1),
                _ => Monomial::pure_power(k, k - 1, d),
            });
            Ok(out)
        }
        KtyKind::Y => {
            let a = k;
            if d != 3 {
                return Err(Error::Invalid(format!("Y-type blocks exist only in degree 3, not {d}")));
            }
            if a == 0 || b == 0 {
                return Err(Error::Invalid("Y-type blocks need a >= 1 and b >= 1".into()));
            }
            let n = a + b + 2;
            let (z, w) = (a + b, a + b + 1);
            let mut out = vec![];
            out.extend((0..a - 1).map(|i| mono(n, i, 2, i + 1, 1)));
            out.extend((a..a + b - 1).map(|i| mono(n, i, 2, i + 1, 1)));
            out.push(mono(n, a - 1, 2, z, 1));
            out.push(mono(n, a + b - 1, 2, z, 1));
            out.push(mono(n, z, 2, w, 1));
            out.push(Monomial::pure_power(n, w, 3));
            let mut e = vec![0; n];
            e[a - 1] = 1;
            e[a + b - 1] = 1;
            e[w] = 1;
            out.push(Monomial::new(e));
            Ok(out)
        }
    }
}

/// The polynomial of a K-, T- or Y-block with unit coefficients. For K and
/// T, `params = [k]`; for Y, `params = [a, b]` and `d` must be 3.
pub fn make_kty(kind: KtyKind, d: u32, params: &[usize]) -> Result<SparsePoly> {
    let (k, b) = match (kind, params) {
        (KtyKind::K | KtyKind::T, [k]) => (*k, 0),
        (KtyKind::Y, [a, b]) => (*a, *b),
        _ => return Err(Error::Invalid(format!("bad parameters {params:?} for {kind:?}"))),
    };
    let support = kty_support(kind, d, k, b)?;
    let n = support[0].n_vars();
    SparsePoly::new(d, n, support.into_iter().map(|m| (m, 1)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothnessCheck {
    pub smooth: bool,
    /// Smallest pure power of each variable among the leading terms.
    pub pure_powers: Vec<Option<u32>>,
}

/// Degree by which the Jacobian ideal of a smooth form contains every
/// monomial: the partials form a regular sequence of `N` forms of degree
/// `d-1`, whose quotient vanishes beyond degree `N(d-2)`.
pub fn saturation_degree(d: u32, n: usize) -> u32 {
    n as u32 * (d - 2) + 1
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|q| q * q <= p).all(|q| !p.is_multiple_of(q))
}

pub fn is_smooth_modp(f: &SparsePoly, p: u64) -> Result<SmoothnessCheck> {
    if !is_prime(p) || p >= 1 << 31 {
        return Err(Error::Invalid(format!("{p} is not a prime below 2^31")));
    }
    if (f.degree as u64).is_multiple_of(p) {
        return Err(Error::EulerObstruction { p, d: f.degree });
    }
    if f.n_vars > MAX_VARS {
        return Err(Error::Invalid(format!("at most {MAX_VARS} variables supported")));
    }
    if f.terms.values().all(|&c| c.rem_euclid(p as i64) == 0) {
        return Err(Error::ZeroPolynomial);
    }
    let partials = f.partials_mod(p);
    let run = groebner(&partials, f.n_vars, p, saturation_degree(f.degree, f.n_vars), true);
    Ok(SmoothnessCheck { smooth: run.zero_dimensional(), pure_powers: run.pure_powers })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessCertificate {
    pub prime: u64,
    pub degree: u32,
    pub variables: usize,
    /// Coefficient of each monomial, keyed by its rendering.
    pub coefficients: BTreeMap<String, u64>,
    pub pure_power_degrees: Vec<Option<u32>>,
}

impl SmoothnessCertificate {
    pub fn polynomial(&self) -> Result<SparsePoly> {
        let terms = self
            .coefficients
            .iter()
            .map(|(m, &c)| Ok((Monomial::parse(m, self.variables)?, c as i64)))
            .collect::<Result<Vec<_>>>()?;
        SparsePoly::new(self.degree, self.variables, terms)
    }

    /// Re-runs the computation and compares the pure-power summary.
    pub fn verify(&self) -> Result<bool> {
        let f = self.polynomial()?;
        if f.terms.values().any(|&c| c.rem_euclid(self.prime as i64) == 0) {
            return Ok(false);
        }
        let check = is_smooth_modp(&f, self.prime)?;
        Ok(check.smooth && check.pure_powers == self.pure_power_degrees)
    }
}

/// Certificate for one polynomial, if it is smooth mod `p`.
pub fn certify_polynomial(f: &SparsePoly, p: u64) -> Result<Option<SmoothnessCertificate>> {
    let check = is_smooth_modp(f, p)?;
    if !check.smooth {
        return Ok(None);
    }
    Ok(Some(SmoothnessCertificate {
        prime: p,
        degree: f.degree,
        variables: f.n_vars,
        coefficients: f
            .terms
            .iter()
            .map(|(m, &c)| (m.to_string(), c.rem_euclid(p as i64) as u64))
            .collect(),
        pure_power_degrees: check.pure_powers,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LargenessVerdict {
    Large { certificate: SmoothnessCertificate },
    /// `M(A;B)` is empty with `|B| < |A|` (0-based indices).
    SmallWitness { a: Vec<usize>, b: Vec<usize> },
    Inconclusive { trials: usize, primes: Vec<u64> },
}

impl LargenessVerdict {
    pub fn is_large(&self) -> bool {
        matches!(self, LargenessVerdict::Large { .. })
    }

    pub fn is_small(&self) -> bool {
        matches!(self, LargenessVerdict::SmallWitness { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargenessConfig {
    pub primes: Vec<u64>,
    pub trials: usize,
    /// Largest `|A|` scanned for an empty `M(A;B)`.
    pub witness_max_a: usize,
}

impl Default for LargenessConfig {
    fn default() -> Self {
        Self { primes: vec![101, 211, 307], trials: 32, witness_max_a: usize::MAX }
    }
}

/// Small-witness scan, then random coefficient sampling over each prime.
pub fn certify_large<R: Rng>(s: &SupportSet, config: &LargenessConfig, rng: &mut R) -> Result<LargenessVerdict> {
    if s.is_empty() {
        return Err(Error::Invalid("empty support".into()));
    }
    let max_a = config.witness_max_a.min(s.n_vars().saturating_sub(1));
    if let Some((a, b)) = s.small_witness(max_a) {
        return Ok(LargenessVerdict::SmallWitness { a, b });
    }
    for &p in &config.primes {
        for _ in 0..config.trials {
            let coeffs: Vec<i64> = (0..s.len()).map(|_| rng.gen_range(1..p) as i64).collect();
            let f = SparsePoly::from_support(s, &coeffs)?;
            if let Some(certificate) = certify_polynomial(&f, p)? {
                return Ok(LargenessVerdict::Large { certificate });
            }
        }
    }
    Ok(LargenessVerdict::Inconclusive { trials: config.trials, primes: config.primes.clone() })
}

/// True iff `M(A;B)` is empty, which proves `S` small when `|B| < |A|`.
pub fn verify_small_witness(s: &SupportSet, a: &[usize], b: &[usize]) -> Result<bool> {
    if b.len() >= a.len() {
        return Err(Error::Invalid(format!("need |B| < |A|, got |A|={}, |B|={}", a.len(), b.len())));
    }
    Ok(s.m_set(a, b)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sup(d: u32, n: usize, items: &[&str]) -> SupportSet {
        SupportSet::parse(d, n, items).unwrap()
    }

    #[test]
    fn kty_shapes() {
        let k = make_kty(KtyKind::K, 3, &[3]).unwrap();
        assert_eq!(k, SparsePoly::parse(3, 3, "x1^2*x2 + x2^2*x3 + x3^2*x1").unwrap());
        let t = make_kty(KtyKind::T, 4, &[2]).unwrap();
        assert_eq!(t, SparsePoly::parse(4, 2, "x1^3*x2 + x2^4").unwrap());
        let y = make_kty(KtyKind::Y, 3, &[1, 1]).unwrap();
        // Variables x, y, z, w.
        assert_eq!(y, SparsePoly::parse(3, 4, "x1^2*x3 + x2^2*x3 + x3^2*x4 + x4^3 + x1*x2*x4").unwrap());
        assert!(make_kty(KtyKind::Y, 4, &[1, 1]).is_err());
        assert_eq!(make_kty(KtyKind::K, 3, &[1]).unwrap().to_string(), "x1^3");
        assert_eq!(make_kty(KtyKind::K, 4, &[2]).unwrap().terms().len(), 2);
    }

    #[test]
    fn smoothness_examples() {
        let fermat = SparsePoly::new(3, 6, (0..6).map(|i| (Monomial::pure_power(6, i, 3), 1))).unwrap();
        assert!(is_smooth_modp(&fermat, 7).unwrap().smooth);
        let cusp = SparsePoly::parse(3, 2, "x1^2*x2").unwrap();
        assert!(!is_smooth_modp(&cusp, 7).unwrap().smooth);
        assert_eq!(is_smooth_modp(&fermat, 3), Err(Error::EulerObstruction { p: 3, d: 3 }));
        let zero = SparsePoly::parse(3, 2, "7*x1^3").unwrap();
        assert_eq!(is_smooth_modp(&zero, 7), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn quartic_coefficient_remark() {
        let good = SparsePoly::parse(
            4,
            4,
            "2*x1^3*x2 + x1^2*x3*x4 + x1*x2*x4^2 + x2^3*x3 + x3^3*x2 + x4^3*x3",
        )
        .unwrap();
        assert!(is_smooth_modp(&good, 101).unwrap().smooth);
        let ones = SparsePoly::parse(4, 4, "x1^3*x2 + x1^2*x3*x4 + x1*x2*x4^2 + x2^3*x3 + x3^3*x2 + x4^3*x3").unwrap();
        assert!(!is_smooth_modp(&ones, 101).unwrap().smooth);
    }

    #[test]
    fn largeness_verdicts() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cfg = LargenessConfig::default();
        let two = sup(3, 6, &["x1^2x2", "x2^2x3", "x3^2x4", "x4^3", "x5^2x2", "x1x5x6", "x6^2x3", "x2x6x4"]);
        let v = certify_large(&two, &cfg, &mut rng).unwrap();
        let LargenessVerdict::Large { certificate } = v else { panic!("expected large, got {v:?}") };
        assert!(certificate.verify().unwrap());
        let small = sup(4, 4, &["x1^3*x2", "x2^3*x3", "x3^3*x2", "x4^3*x3"]);
        assert_eq!(
            certify_large(&small, &cfg, &mut rng).unwrap(),
            LargenessVerdict::SmallWitness { a: vec![0, 2], b: vec![1] }
        );
        let w = sup(4, 4, &["x1^3x2", "x2^3x3", "x3^4", "x4^3x3", "x1^3x4", "x2^2x3x4", "x2x3x4^2"]);
        assert!(verify_small_witness(&w, &[1, 3], &[2]).unwrap());
        let fermat = sup(3, 3, &["x1^3", "x2^3", "x3^3"]);
        assert!(!verify_small_witness(&fermat, &[0, 1], &[2]).unwrap());
    }

    #[test]
    fn certificate_json_round_trip() {
        let f = make_kty(KtyKind::T, 3, &[3]).unwrap();
        let cert = certify_polynomial(&f, 101).unwrap().unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        let back: SmoothnessCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
        assert!(back.verify().unwrap());
    }
}
