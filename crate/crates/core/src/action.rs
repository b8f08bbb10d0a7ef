//! Diagonal actions `I = (G, λ, λ_1, ..., λ_N)` of a finite abelian group.
//!
//! `G` is fixed by its invariant factors `n_1 | ... | n_r`; a character is a
//! residue vector `(c_1, ..., c_r)` with `c_k mod n_k`, meaning
//! `g ↦ exp(2πi Σ c_k g_k / n_k)`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{congruence_kernel, hermite_normal_form, AbelianPresentation};
use crate::monomial::{enumerate_monomials, permutations, Monomial, SupportSet};
use crate::torus::{subgroup_presentation, torsion_dual, FiniteDiagonalGroup, QzVector};

pub type Character = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ActionData {
    degree: u32,
    variables: usize,
    invariant_factors: AbelianPresentation,
    weights: Vec<Character>,
    target: Character,
}

/// How the semi-invariance character `λ` is specified.
#[derive(Clone, Debug)]
pub enum Target {
    Trivial,
    /// `λ` is the weight of this monomial.
    Monomial(Monomial),
    Character(Vec<i64>),
}

impl ActionData {
    pub fn new(
        degree: u32,
        variables: usize,
        invariant_factors: AbelianPresentation,
        weights: Vec<Vec<i64>>,
        target: Vec<i64>,
    ) -> Result<Self> {
        if degree < 3 || variables < 3 {
            return Err(Error::Invalid(format!(
                "need degree >= 3 and at least 3 variables, got d={degree}, N={variables}"
            )));
        }
        if weights.len() != variables {
            return Err(Error::Invalid(format!("expected {variables} weights, got {}", weights.len())));
        }
        let f = invariant_factors.factors().to_vec();
        let reduce = |c: &[i64]| -> Result<Character> {
            if c.len() != f.len() {
                return Err(Error::Invalid(format!(
                    "character {c:?} has {} components, group has {}",
                    c.len(),
                    f.len()
                )));
            }
            Ok(c.iter().zip(&f).map(|(&x, &n)| x.rem_euclid(n as i64) as u64).collect())
        };
        let weights = weights.iter().map(|w| reduce(w)).collect::<Result<Vec<_>>>()?;
        let target = reduce(&target)?;
        let data = Self { degree, variables, invariant_factors, weights, target };
        if data.group_structure().order() != data.invariant_factors.order() {
            return Err(Error::NotFaithful);
        }
        Ok(data)
    }

    /// The group generated by linear diagonal elements `gens` (entries of
    /// `(Q/Z)^N`), with weights read off as coordinates.
    pub fn from_torus_generators(degree: u32, gens: &[QzVector], target: &Target) -> Result<Self> {
        let n = gens.first().map(|g| g.len()).ok_or_else(|| Error::Invalid("no generators".into()))?;
        let pres = subgroup_presentation(gens);
        let factors = pres.structure.factors().to_vec();
        let mut weights = vec![vec![0i64; factors.len()]; n];
        for (k, (b, &m)) in pres.basis.iter().zip(&factors).enumerate() {
            for (i, w) in weights.iter_mut().enumerate() {
                w[k] = (b.numerators()[i] * (m / b.denominator())) as i64;
            }
        }
        let target = match target {
            Target::Trivial => vec![0; factors.len()],
            Target::Character(c) => c.clone(),
            Target::Monomial(m) => {
                if m.n_vars() != n {
                    return Err(Error::Invalid(format!("target monomial {m} has wrong variable count")));
                }
                (0..factors.len())
                    .map(|k| weights.iter().zip(m.exponents()).map(|(w, &a)| w[k] * a as i64).sum())
                    .collect()
            }
        };
        Self::new(degree, n, pres.structure, weights, target)
    }

    /// Parses `diag[w:w^6:w^4:1:w^5:w^2]; w^8=1` (also `|` for `;`, unicode
    /// symbols, products like `a*b`, `ab`, `w^2z`).
    pub fn from_generator_string(degree: u32, s: &str, target: &Target) -> Result<Self> {
        let gens = parse_generator_string(s)?;
        Self::from_torus_generators(degree, &gens, target)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn n_vars(&self) -> usize {
        self.variables
    }

    pub fn presentation(&self) -> &AbelianPresentation {
        &self.invariant_factors
    }

    pub fn weights(&self) -> &[Character] {
        &self.weights
    }

    pub fn target(&self) -> &Character {
        &self.target
    }

    fn factors(&self) -> &[u64] {
        self.invariant_factors.factors()
    }

    /// Image of the `k`-th presentation generator as a linear diagonal element.
    pub fn torus_generators(&self) -> Vec<QzVector> {
        self.factors()
            .iter()
            .enumerate()
            .map(|(k, &m)| QzVector::new(m, self.weights.iter().map(|w| w[k] as i64).collect()))
            .collect()
    }

    /// Linear torus image of the group element with coordinates `a`.
    pub fn torus_element(&self, a: &[i64]) -> QzVector {
        let gens = self.torus_generators();
        let mut acc = QzVector::zero(self.variables);
        for (g, &x) in gens.iter().zip(a) {
            acc = acc.add(&g.scale(x));
        }
        acc
    }

    pub fn weight_of(&self, m: &Monomial) -> Character {
        self.factors()
            .iter()
            .enumerate()
            .map(|(k, &n)| {
                let s: u128 = self
                    .weights
                    .iter()
                    .zip(m.exponents())
                    .map(|(w, &a)| w[k] as u128 * a as u128)
                    .sum();
                (s % n as u128) as u64
            })
            .collect()
    }

    pub fn invariant_monomials(&self) -> SupportSet {
        let all = enumerate_monomials(self.degree, self.variables);
        let kept: Vec<Monomial> = all
            .iter()
            .filter(|m| self.weight_of(m) == self.target)
            .cloned()
            .collect();
        SupportSet::new(self.degree, self.variables, kept).expect("degree-d monomials")
    }

    /// `λ_i ↦ λ_i + ξ`, `λ ↦ λ + dξ`.
    pub fn twist(&self, xi: &[i64]) -> ActionData {
        let f = self.factors();
        let add = |c: &Character, mult: i64| -> Character {
            c.iter()
                .zip(xi)
                .zip(f)
                .map(|((&x, &y), &n)| (x as i64 + mult * y).rem_euclid(n as i64) as u64)
                .collect()
        };
        ActionData {
            degree: self.degree,
            variables: self.variables,
            invariant_factors: self.invariant_factors.clone(),
            weights: self.weights.iter().map(|w| add(w, 1)).collect(),
            target: add(&self.target, self.degree as i64),
        }
    }

    /// Renames variable `i` to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> ActionData {
        let mut weights = vec![vec![]; self.variables];
        for (i, w) in self.weights.iter().enumerate() {
            weights[perm[i]] = w.clone();
        }
        ActionData { weights, ..self.clone() }
    }

    /// Equivalence for a shared presentation: some `ξ` with `λ_i' = λ_i + ξ`
    /// and `λ' = λ + dξ`.
    pub fn are_equivalent(&self, other: &ActionData) -> Result<bool> {
        if self.degree != other.degree
            || self.variables != other.variables
            || self.invariant_factors != other.invariant_factors
        {
            return Err(Error::Incomparable);
        }
        // ξ is forced by the first weight.
        let xi: Vec<i64> = other.weights[0]
            .iter()
            .zip(&self.weights[0])
            .map(|(&a, &b)| a as i64 - b as i64)
            .collect();
        Ok(self.twist(&xi) == *other)
    }

    /// Restriction to the subgroup generated by the given group elements
    /// (coordinates with respect to the presentation).
    pub fn induce(&self, generators: &[Vec<i64>]) -> Result<ActionData> {
        let r = self.factors().len();
        if let Some(g) = generators.iter().find(|g| g.len() != r) {
            return Err(Error::NotInGroup(format!("{g:?} has {} coordinates, group has {r}", g.len())));
        }
        let torus: Vec<QzVector> = generators.iter().map(|a| self.torus_element(a)).collect();
        if torus.is_empty() {
            return Self::from_torus_generators(self.degree, &[QzVector::zero(self.variables)], &Target::Trivial);
        }
        let pres = subgroup_presentation(&torus);
        let mut target = vec![];
        let mut weights = vec![vec![0i64; pres.structure.factors().len()]; self.variables];
        for (l, (combo, &m)) in pres.combos.iter().zip(pres.structure.factors()).enumerate() {
            // Coordinates in G of the new generator.
            let mut a = vec![BigInt::from(0); r];
            for (c, g) in combo.iter().zip(generators) {
                for (x, &y) in a.iter_mut().zip(g) {
                    *x += c * y;
                }
            }
            let b = &pres.basis[l];
            for (i, w) in weights.iter_mut().enumerate() {
                w[l] = (b.numerators()[i] * (m / b.denominator())) as i64;
            }
            target.push(character_value(&a, &self.target, self.factors(), m)?);
        }
        Self::new(self.degree, self.variables, pres.structure, weights, target)
    }

    /// Restriction to the subgroup generated by linear diagonal elements,
    /// which must lie in the group.
    pub fn induce_by_elements(&self, elements: &[QzVector]) -> Result<ActionData> {
        let index = self.element_index(1 << 20)?;
        let coords = elements
            .iter()
            .map(|e| {
                index
                    .get(e)
                    .cloned()
                    .ok_or_else(|| Error::NotInGroup(format!("{e:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.induce(&coords)
    }

    /// Map from linear torus image to coordinates, for groups up to `limit`.
    fn element_index(&self, limit: u64) -> Result<HashMap<QzVector, Vec<i64>>> {
        if self.invariant_factors.order() > limit {
            return Err(Error::Invalid("group too large to enumerate".into()));
        }
        let mut out = HashMap::new();
        let f = self.factors().to_vec();
        let mut a = vec![0i64; f.len()];
        loop {
            out.insert(self.torus_element(&a), a.clone());
            let mut k = 0;
            loop {
                if k == f.len() {
                    return Ok(out);
                }
                a[k] += 1;
                if a[k] < f[k] as i64 {
                    break;
                }
                a[k] = 0;
                k += 1;
            }
        }
    }

    /// Invariant factors of the image of `G` in the projective torus.
    pub fn group_structure(&self) -> AbelianPresentation {
        let gens: Vec<QzVector> = self.torus_generators().iter().map(|g| g.projective()).collect();
        subgroup_presentation(&gens).structure
    }

    /// The image of `G` in the projective torus, as an explicit group.
    pub fn projective_group(&self) -> FiniteDiagonalGroup {
        let gens: Vec<QzVector> = self.torus_generators().iter().map(|g| g.projective()).collect();
        FiniteDiagonalGroup::generated_by(self.variables, &gens)
    }

    /// Lattice of `(u, t) ∈ Z^{N+1}` with `Σ u_i λ_i = t λ` and `Σ u_i = t d`.
    /// It is unchanged by twists and by automorphisms of `G`, and determines
    /// the data up to both.
    pub fn relation_lattice(&self) -> Vec<Vec<BigInt>> {
        let n = self.variables;
        let mut rows = vec![];
        let mut moduli = vec![];
        for (k, &m) in self.factors().iter().enumerate() {
            let mut row: Vec<BigInt> = self.weights.iter().map(|w| BigInt::from(w[k])).collect();
            row.push(-BigInt::from(self.target[k]));
            rows.push(row);
            moduli.push(BigInt::from(m));
        }
        let mut row = vec![BigInt::from(1); n];
        row.push(-BigInt::from(self.degree));
        rows.push(row);
        moduli.push(BigInt::from(0));
        congruence_kernel(n + 1, &rows, &moduli).basis().to_vec()
    }

    /// Key identifying the class up to coordinate permutation, twist and
    /// group automorphism.
    pub fn canonical_form(&self) -> CanonicalKey {
        let support = self.invariant_monomials();
        let lattice = self.relation_lattice();
        let n = self.variables;
        let mut best_support: Option<Vec<Vec<u32>>> = None;
        let mut candidates = vec![];
        for perm in permutations(n) {
            let s: Vec<Vec<u32>> = support.permuted(&perm).iter().map(|m| m.exponents().to_vec()).collect();
            match &best_support {
                Some(b) if s > *b => continue,
                Some(b) if s == *b => candidates.push(perm),
                _ => {
                    best_support = Some(s);
                    candidates = vec![perm];
                }
            }
        }
        let mut best_lattice: Option<Vec<Vec<BigInt>>> = None;
        for perm in candidates {
            let moved: Vec<Vec<BigInt>> = lattice
                .iter()
                .map(|row| {
                    let mut r = row.clone();
                    for i in 0..n {
                        r[perm[i]] = row[i].clone();
                    }
                    r
                })
                .collect();
            let h = hermite_normal_form(n + 1, &moved);
            if best_lattice.as_ref().is_none_or(|b| h < *b) {
                best_lattice = Some(h);
            }
        }
        CanonicalKey {
            degree: self.degree,
            n_vars: n,
            support: best_support.unwrap_or_default(),
            lattice: best_lattice
                .unwrap_or_default()
                .iter()
                .map(|r| r.iter().map(|x| x.to_i64().expect("small lattice entries")).collect())
                .collect(),
        }
    }

    /// Generator-string rendering with one symbol per invariant factor.
    pub fn to_generator_string(&self) -> String {
        const SYMBOLS: [&str; 6] = ["w", "z", "a", "b", "c", "e"];
        let r = self.factors().len();
        let entries: Vec<String> = self
            .weights
            .iter()
            .map(|w| {
                let parts: Vec<String> = (0..r)
                    .filter(|&k| w[k] != 0)
                    .map(|k| if w[k] == 1 { SYMBOLS[k].to_string() } else { format!("{}^{}", SYMBOLS[k], w[k]) })
                    .collect();
                if parts.is_empty() { "1".to_string() } else { parts.join("*") }
            })
            .collect();
        let rels: Vec<String> = self
            .factors()
            .iter()
            .enumerate()
            .map(|(k, n)| format!("{}^{}", SYMBOLS[k], n))
            .collect();
        if rels.is_empty() {
            format!("diag[{}]", entries.join(":"))
        } else {
            format!("diag[{}]; {}=1", entries.join(":"), rels.join("="))
        }
    }
}

/// `λ(Σ a_k g_k)` as a residue mod `m`, where `m` is the order of the element.
fn character_value(a: &[BigInt], lambda: &[u64], factors: &[u64], m: u64) -> Result<i64> {
    // Σ a_k λ_k / n_k as a fraction; must have denominator dividing m.
    let l = factors.iter().fold(1u64, |acc, &n| num_integer::lcm(acc, n)).max(1);
    let num: BigInt = a
        .iter()
        .zip(lambda)
        .zip(factors)
        .map(|((x, &t), &n)| x * BigInt::from(t) * BigInt::from(l / n))
        .sum();
    let num = num_integer::Integer::mod_floor(&num, &BigInt::from(l));
    let scaled = num * BigInt::from(m);
    let (q, r) = num_integer::Integer::div_rem(&scaled, &BigInt::from(l));
    if r != BigInt::from(0) {
        return Err(Error::Invalid("character value inconsistent with element order".into()));
    }
    Ok(q.to_i64().expect("small"))
}

/// Canonical class key: sorted support and HNF relation lattice after the
/// lexicographically smallest relabeling.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    degree: u32,
    n_vars: usize,
    support: Vec<Vec<u32>>,
    lattice: Vec<Vec<i64>>,
}

impl CanonicalKey {
    pub fn support(&self) -> SupportSet {
        SupportSet::new(
            self.degree,
            self.n_vars,
            self.support.iter().map(|e| Monomial::new(e.clone())),
        )
        .expect("stored support is well formed")
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.support.iter().map(|e| Monomial::new(e.clone()).to_string()).collect();
        let l: Vec<String> = self
            .lattice
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "d{}n{}|{}|{}", self.degree, self.n_vars, s.join("+"), l.join(";"))
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Largest diagonal group under which every monomial of a support set has
/// one common weight.
#[derive(Clone, Debug)]
pub struct Stabilizer {
    /// Dimension of the connected part; zero means the group is finite.
    pub free_rank: usize,
    /// Finite part, in the projective torus.
    pub group: FiniteDiagonalGroup,
    /// The finite part as action data, `λ` being the common weight.
    pub data: ActionData,
}

pub fn equal_weight_stabilizer(support: &SupportSet) -> Result<Stabilizer> {
    let first = support
        .monomials()
        .first()
        .ok_or_else(|| Error::Invalid("empty support".into()))?;
    let constraints: Vec<Vec<i64>> = support.iter().skip(1).map(|m| m.difference(first)).collect();
    let td = torsion_dual(support.n_vars(), &constraints);
    let gens: Vec<QzVector> = if td.group.generators().is_empty() {
        vec![QzVector::zero(support.n_vars())]
    } else {
        td.group.generators().to_vec()
    };
    let data = ActionData::from_torus_generators(support.degree(), &gens, &Target::Monomial(first.clone()))?;
    Ok(Stabilizer { free_rank: td.free_rank, group: td.group, data })
}

/// Parses a diagonal generator string into linear torus elements, one per
/// root-of-unity symbol.
pub fn parse_generator_string(s: &str) -> Result<Vec<QzVector>> {
    let bad = |msg: String| Error::Parse(format!("generator string `{}`: {msg}", s.trim()));
    let t = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
    let open = t.find('[').ok_or_else(|| bad("missing `[`".into()))?;
    let close = t.find(']').ok_or_else(|| bad("missing `]`".into()))?;
    let head = t[..open].trim();
    if !(head.is_empty() || head == "diag") {
        return Err(bad(format!("unexpected prefix `{head}`")));
    }
    let body = &t[open + 1..close];
    let rest = t[close + 1..].trim().trim_start_matches([';', '|', ',']).trim();

    // Relations: `w^8=1`, `a^2=b^2=w^3=1`, possibly several separated by `,`/`;`.
    let mut symbols: Vec<(String, u64)> = vec![];
    for chunk in rest.split([',', ';']).map(str::trim).filter(|c| !c.is_empty()) {
        let parts: Vec<&str> = chunk.split('=').map(str::trim).collect();
        if parts.len() < 2 || *parts.last().unwrap() != "1" {
            return Err(bad(format!("relation `{chunk}` must end in `=1`")));
        }
        for p in &parts[..parts.len() - 1] {
            let (name, exp) = p.split_once('^').ok_or_else(|| bad(format!("relation term `{p}` lacks `^`")))?;
            let name = name.trim().to_string();
            let order: u64 = exp
                .trim()
                .trim_matches(['{', '}'])
                .parse()
                .map_err(|_| bad(format!("bad order in `{p}`")))?;
            if order == 0 || name.is_empty() || !name.chars().all(char::is_alphabetic) {
                return Err(bad(format!("bad relation term `{p}`")));
            }
            if symbols.iter().any(|(s, _)| *s == name) {
                return Err(bad(format!("symbol `{name}` declared twice")));
            }
            symbols.push((name, order));
        }
    }
    // Longest names first so `ab` splits only when `ab` is not itself a symbol.
    let mut by_len: Vec<usize> = (0..symbols.len()).collect();
    by_len.sort_by_key(|&i| std::cmp::Reverse(symbols[i].0.chars().count()));

    let entries: Vec<&str> = body.split(':').map(str::trim).collect();
    let n = entries.len();
    let mut exps = vec![vec![0i64; n]; symbols.len()];
    for (i, e) in entries.iter().enumerate() {
        let chars: Vec<char> = e.chars().collect();
        let mut pos = 0;
        while pos < chars.len() {
            let c = chars[pos];
            if c == '*' || c.is_whitespace() || c == '\\' || c == '{' || c == '}' {
                pos += 1;
                continue;
            }
            if c == '1' && (pos + 1 == chars.len() || !chars[pos + 1].is_ascii_digit()) {
                pos += 1;
                continue;
            }
            let rest: String = chars[pos..].iter().collect();
            let hit = by_len.iter().find(|&&k| rest.starts_with(symbols[k].0.as_str()));
            let Some(&k) = hit else {
                return Err(bad(format!("unknown symbol at `{rest}` in entry {}", i + 1)));
            };
            pos += symbols[k].0.chars().count();
            let mut exp = 1i64;
            if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                let braced = pos < chars.len() && chars[pos] == '{';
                if braced {
                    pos += 1;
                }
                let start = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                exp = chars[start..pos]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| bad(format!("bad exponent in entry {}", i + 1)))?;
                if braced && pos < chars.len() && chars[pos] == '}' {
                    pos += 1;
                }
            }
            exps[k][i] += exp;
        }
    }
    if symbols.is_empty() {
        return Ok(vec![QzVector::zero(n)]);
    }
    Ok(symbols
        .iter()
        .zip(exps)
        .map(|((_, order), e)| QzVector::new(*order, e))
        .collect())
}
