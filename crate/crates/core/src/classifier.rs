//! Closure of supports, prime-bounded maximality, and the frame-seeded
//! search for maximal classes.
//!
//! A maximal class is the same thing as a closed support set (one equal to
//! the invariant monomials of its own stabilizer) that is large and has no
//! proper closed subset that is large. Every large set contains a frame, so
//! the search starts from the closure of each frame and adds monomials one
//! at a time, stopping at large sets.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicUsize, Ordering};

use dashmap::DashMap;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::action::{equal_weight_stabilizer, ActionData, CanonicalKey, Stabilizer};
use crate::error::{Error, Result};
use crate::graph::{chain_invariants_of, edge_graph, enumerate_frames, frame_support, spoon_violations, ChainInvariants};
use crate::lattice::{AbelianPresentation, Lattice};
use crate::monomial::{enumerate_monomials, permutations, Monomial, SupportSet};
use crate::simplicity::{find_simple_decomposition, SimpleDecomposition};
use crate::smooth::{certify_large, LargenessConfig, LargenessVerdict};
use crate::torus::QzVector;

pub const DEFAULT_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Result of closing a support set.
#[derive(Clone, Debug)]
pub struct Closure {
    /// Stabilizer of the input; its free rank is positive when the
    /// stabilizer is not finite.
    pub stabilizer: Stabilizer,
    /// All monomials with the common weight under the full stabilizer.
    pub support: SupportSet,
}

/// Monomials `β` with `β - α_0` in the lattice spanned by the differences
/// of `S0`. This is the invariant set of the full stabilizer (finite or
/// not), and closing twice changes nothing.
pub fn closure(s0: &SupportSet) -> Result<Closure> {
    let stabilizer = equal_weight_stabilizer(s0)?;
    let first = &s0.monomials()[0];
    let diffs: Vec<Vec<i64>> = s0.iter().map(|m| m.difference(first)).collect();
    let lattice = Lattice::from_generators_i64(s0.n_vars(), &diffs);
    let all = enumerate_monomials(s0.degree(), s0.n_vars());
    let support = SupportSet::new(
        s0.degree(),
        s0.n_vars(),
        all.iter().filter(|m| lattice.contains_i64(&m.difference(first))).cloned(),
    )?;
    Ok(Closure { stabilizer, support })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Maximality {
    Maximal { primes: Vec<u64> },
    /// A prime-index overgroup `<G, h>` whose weight class is large.
    NonMaximal { prime: u64, extension: String, support: Vec<String> },
    /// Some weight class could not be decided.
    Unresolved { prime: u64, extension: String, support: Vec<String> },
}

impl Maximality {
    pub fn is_maximal(&self) -> bool {
        matches!(self, Maximality::Maximal { .. })
    }
}

/// Deterministic RNG for the verdict on one support set.
fn verdict_rng(seed: u64, s: &SupportSet) -> ChaCha8Rng {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    s.to_strings().hash(&mut h);
    ChaCha8Rng::seed_from_u64(seed ^ h.finish())
}

/// Shared memo of largeness verdicts keyed by support set.
#[derive(Default)]
pub struct VerdictCache {
    map: DashMap<SupportSet, LargenessVerdict>,
}

impl VerdictCache {
    pub fn verdict(&self, s: &SupportSet, cfg: &LargenessConfig, seed: u64) -> Result<LargenessVerdict> {
        if let Some(v) = self.map.get(s) {
            return Ok(v.clone());
        }
        let v = certify_large(s, cfg, &mut verdict_rng(seed, s))?;
        self.map.insert(s.clone(), v.clone());
        Ok(v)
    }
}

/// Looks for a large weight class of `S_I` under some `<G, h>` with `p h ∈ G`,
/// for every prime in `primes`. A strict overgroup with a large class always
/// has such an intermediate step, and classes only shrink further up.
pub fn is_maximal(data: &ActionData, primes: &[u64], cfg: &LargenessConfig, seed: u64) -> Result<Maximality> {
    is_maximal_cached(data, primes, cfg, seed, &VerdictCache::default())
}

pub fn is_maximal_cached(
    data: &ActionData,
    primes: &[u64],
    cfg: &LargenessConfig,
    seed: u64,
    cache: &VerdictCache,
) -> Result<Maximality> {
    let n = data.n_vars();
    let s = data.invariant_monomials();
    let monos: Vec<Vec<u64>> = s.iter().map(|m| m.exponents().iter().map(|&e| e as u64).collect()).collect();
    let group = data.projective_group();
    let members: HashSet<QzVector> = group.element_set();
    let mut class_memo: HashMap<Vec<usize>, LargenessVerdict> = HashMap::new();
    for &p in primes {
        // Representatives of G / pG.
        let mut reps = vec![QzVector::zero(n)];
        for (g, &order) in group.generators().iter().zip(group.structure().factors()) {
            let k = num_integer::gcd(order, p);
            let mut next = vec![];
            for a in 0..k {
                let step = g.scale(a as i64);
                next.extend(reps.iter().map(|r| r.add(&step)));
            }
            reps = next;
        }
        let torsion_count = (p as usize).pow(n as u32 - 1);
        for g in &reps {
            let base_den = g.denominator() * p;
            let base: Vec<i64> = g.numerators().iter().map(|&x| x as i64).collect();
            for t_index in 0..torsion_count {
                // h = g/p + t/p with t ∈ (Z/p)^{N-1} × {0}.
                let mut t = t_index;
                let mut num = base.clone();
                for x in num.iter_mut().take(n - 1) {
                    *x += (t as u64 % p) as i64 * g.denominator() as i64;
                    t /= p as usize;
                }
                let h = QzVector::new(base_den, num);
                if members.contains(&h) {
                    continue;
                }
                let den = h.denominator();
                let hn = h.numerators();
                let mut classes: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
                for (idx, e) in monos.iter().enumerate() {
                    let w = e.iter().zip(hn).map(|(&a, &b)| a as u128 * b as u128).sum::<u128>() % den as u128;
                    classes.entry(w as u64).or_default().push(idx);
                }
                for class in classes.into_values() {
                    let verdict = match class_memo.get(&class) {
                        Some(v) => v.clone(),
                        None => {
                            let sub = SupportSet::new(
                                s.degree(),
                                n,
                                class.iter().map(|&i| s.monomials()[i].clone()),
                            )?;
                            let v = cache.verdict(&sub, cfg, seed)?;
                            class_memo.insert(class.clone(), v.clone());
                            v
                        }
                    };
                    let support = || class.iter().map(|&i| s.monomials()[i].to_string()).collect();
                    match verdict {
                        LargenessVerdict::Large { .. } => {
                            return Ok(Maximality::NonMaximal { prime: p, extension: format!("{h:?}"), support: support() })
                        }
                        LargenessVerdict::Inconclusive { .. } => {
                            return Ok(Maximality::Unresolved { prime: p, extension: format!("{h:?}"), support: support() })
                        }
                        LargenessVerdict::SmallWitness { .. } => {}
                    }
                }
            }
        }
    }
    Ok(Maximality::Maximal { primes: primes.to_vec() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaViolation {
    pub lemma: String,
    pub detail: String,
}

/// Runtime checks of the structural lemmas on one large instance.
pub fn check_lemmas(data: &ActionData) -> Vec<LemmaViolation> {
    let s = data.invariant_monomials();
    let n = data.n_vars();
    let d = data.degree();
    let w = data.weights();
    let g = edge_graph(&s);
    let mut out = vec![];
    let mut fail = |lemma: &str, detail: String| out.push(LemmaViolation { lemma: lemma.into(), detail });
    if let Some((a, b)) = s.small_witness(3) {
        fail("main criterion", format!("M(A;B) empty for A={a:?}, B={b:?}"));
    }
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            for c in 0..n {
                if !(g.has(a, c) && g.has(b, c)) || w[c] == w[a] || w[c] == w[b] {
                    continue;
                }
                for f in g.out(c).collect::<Vec<_>>() {
                    if !(0..n).any(|e| e != c && g.has(e, f)) {
                        fail("any d", format!("(a,b,c,f)=({},{},{},{})", a + 1, b + 1, c + 1, f + 1));
                    }
                    if d == 3 {
                        let ok = (0..n).filter(|&e| e != a && e != b && e != c && g.has(e, f)).any(|e| {
                            let mut m = vec![0; n];
                            m[a] += 1;
                            m[b] += 1;
                            m[e] += 1;
                            w[e] == w[c] || s.contains(&Monomial::new(m))
                        });
                        if !ok {
                            fail("key", format!("(a,b,c,f)=({},{},{},{})", a + 1, b + 1, c + 1, f + 1));
                        }
                    }
                }
            }
        }
    }
    match chain_invariants_of(&g, w) {
        Err(e) => fail("chain invariants", e.to_string()),
        Ok(inv) => {
            let bad = spoon_violations(&g, &inv);
            if !bad.is_empty() {
                fail("restriction of edges in a spoon", format!("extra arrows {bad:?} on {:?}", inv.witness_one_based()));
            }
            if inv.s > inv.c + 1 && inv.c >= 1 && n < inv.s + inv.c {
                fail("loop", format!("s={}, c={}, N={n}", inv.s, inv.c));
            }
            if d == 3 && inv.c == 1 {
                fail("d=3 c>1", format!("s={}, c=1", inv.s));
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationRecord {
    pub key: CanonicalKey,
    pub generators: String,
    pub data: ActionData,
    pub support: Vec<String>,
    pub structure: AbelianPresentation,
    pub structure_text: String,
    pub largeness: LargenessVerdict,
    pub simple: Option<SimpleDecomposition>,
    pub maximality: Maximality,
    pub chain: Option<ChainInvariants>,
}

impl ClassificationRecord {
    pub fn is_simple(&self) -> bool {
        self.simple.is_some()
    }

    /// Builds the record for a closed support set.
    pub fn for_support(
        s: &SupportSet,
        primes: &[u64],
        cfg: &LargenessConfig,
        seed: u64,
        cache: &VerdictCache,
    ) -> Result<Self> {
        let st = equal_weight_stabilizer(s)?;
        if st.free_rank > 0 {
            return Err(Error::Invalid("support has a positive-dimensional stabilizer".into()));
        }
        let data = st.data;
        if data.invariant_monomials() != *s {
            return Err(Error::Invalid(format!("support {s} is not closed")));
        }
        let structure = data.group_structure();
        Ok(ClassificationRecord {
            key: data.canonical_form(),
            generators: data.to_generator_string(),
            support: s.to_strings(),
            structure_text: structure.primary_form(),
            structure,
            largeness: cache.verdict(s, cfg, seed)?,
            simple: find_simple_decomposition(s),
            maximality: is_maximal_cached(&data, primes, cfg, seed, cache)?,
            chain: chain_invariants_of(&edge_graph(s), data.weights()).ok(),
            data,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyConfig {
    pub degree: u32,
    pub n_vars: usize,
    pub primes: Vec<u64>,
    pub largeness: LargenessConfig,
    pub seed: u64,
}

impl ClassifyConfig {
    pub fn new(degree: u32, n_vars: usize) -> Self {
        Self { degree, n_vars, primes: DEFAULT_PRIMES.to_vec(), largeness: LargenessConfig::default(), seed: 0 }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchStats {
    pub frame_classes: usize,
    pub closed_sets_visited: usize,
    pub large_closed_sets: usize,
    pub small_closed_sets: usize,
    pub inconclusive_closed_sets: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub config: ClassifyConfig,
    pub records: Vec<ClassificationRecord>,
    /// Closed sets whose largeness could not be decided.
    pub inconclusive: Vec<Vec<String>>,
    /// Large closed sets that are not minimal (kept for auditing).
    pub non_minimal_large: usize,
    pub lemma_instances_checked: usize,
    pub lemma_violations: Vec<LemmaViolation>,
    /// Records whose prime-bounded maximality test disagrees with the search.
    pub maximality_disagreements: Vec<String>,
    pub stats: SearchStats,
}

impl Classification {
    pub fn non_simple(&self) -> impl Iterator<Item = &ClassificationRecord> {
        self.records.iter().filter(|r| !r.is_simple())
    }
}

/// All degree-`d` monomials with index maps and relabeling tables.
struct Universe {
    d: u32,
    n: usize,
    monos: Vec<Monomial>,
    /// `perm_tables[p][i]`: index of monomial `i` after relabeling by `p`.
    perm_tables: Vec<Vec<u8>>,
}

impl Universe {
    fn new(d: u32, n: usize) -> Result<Self> {
        let all = enumerate_monomials(d, n);
        if all.len() > 128 {
            return Err(Error::Invalid(format!(
                "{} monomials of degree {d} in {n} variables; at most 128 supported",
                all.len()
            )));
        }
        let monos = all.monomials().to_vec();
        let index: HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let perm_tables = permutations(n)
            .iter()
            .map(|p| monos.iter().map(|m| index[&m.permuted(p)] as u8).collect())
            .collect();
        Ok(Self { d, n, monos, perm_tables })
    }

    fn support(&self, mask: u128) -> SupportSet {
        SupportSet::new(self.d, self.n, bits(mask).map(|i| self.monos[i].clone())).expect("universe monomials")
    }

    #[cfg(test)]
    fn mask_of(&self, s: &SupportSet) -> u128 {
        s.iter().fold(0, |m, x| m | 1u128 << self.monos.iter().position(|y| y == x).unwrap())
    }

    fn permute(&self, mask: u128, p: usize) -> u128 {
        let t = &self.perm_tables[p];
        bits(mask).fold(0, |m, i| m | 1u128 << t[i])
    }

    /// Smallest relabeling of the mask, compared as a sorted monomial list.
    fn canonical(&self, mask: u128) -> u128 {
        // Lower index = earlier monomial; compare by reversed bit order so
        // that sets with earlier monomials sort first.
        (0..self.perm_tables.len())
            .map(|p| self.permute(mask, p))
            .min_by_key(|&m| std::cmp::Reverse(m.reverse_bits()))
            .unwrap()
    }

    fn is_sub_up_to_relabeling(&self, small: u128, big: u128) -> bool {
        (0..self.perm_tables.len()).any(|p| {
            let m = self.permute(small, p);
            m & big == m
        })
    }
}

fn bits(mut mask: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let i = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(i)
    })
}

/// The character group of a root stabilizer, with each monomial's
/// character relative to a base monomial.
struct RootGroup {
    factors: Vec<u64>,
    size: usize,
    /// Character index of `α - α_0` for every universe monomial.
    chi: Vec<usize>,
}

impl RootGroup {
    fn new(u: &Universe, data: &ActionData, base: &Monomial) -> Self {
        let factors = data.presentation().factors().to_vec();
        let size = factors.iter().product::<u64>() as usize;
        let base_w = data.weight_of(base);
        let chi = u
            .monos
            .iter()
            .map(|m| {
                let w = data.weight_of(m);
                let comps: Vec<u64> = w
                    .iter()
                    .zip(&base_w)
                    .zip(&factors)
                    .map(|((&a, &b), &n)| (a + n - b) % n)
                    .collect();
                Self::encode(&factors, &comps)
            })
            .collect();
        Self { factors, size, chi }
    }

    fn encode(factors: &[u64], comps: &[u64]) -> usize {
        comps.iter().zip(factors).fold(0usize, |acc, (&c, &n)| acc * n as usize + c as usize)
    }

    fn decode(&self, mut x: usize) -> Vec<u64> {
        let mut out = vec![0; self.factors.len()];
        for (k, &n) in self.factors.iter().enumerate().rev() {
            out[k] = (x % n as usize) as u64;
            x /= n as usize;
        }
        out
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.decode(a), self.decode(b));
        let s: Vec<u64> = x.iter().zip(&y).zip(&self.factors).map(|((&p, &q), &n)| (p + q) % n).collect();
        Self::encode(&self.factors, &s)
    }

    /// `Ψ + <x>` as a membership table.
    fn extend(&self, psi: &[bool], x: usize) -> Vec<bool> {
        let mut out = psi.to_vec();
        let mut coset: Vec<usize> = (0..self.size).filter(|&i| psi[i]).collect();
        loop {
            coset = coset.iter().map(|&m| self.add(m, x)).collect();
            if out[coset[0]] {
                return out;
            }
            for &m in &coset {
                out[m] = true;
            }
        }
    }

    fn mask(&self, psi: &[bool]) -> u128 {
        self.chi.iter().enumerate().fold(0, |m, (i, &c)| if psi[c] { m | 1u128 << i } else { m })
    }
}

/// Re-derives the maximal classes for `(d, N)`.
pub fn classify(cfg: &ClassifyConfig) -> Result<Classification> {
    let u = Universe::new(cfg.degree, cfg.n_vars)?;
    let frames = enumerate_frames(cfg.n_vars, true);
    let visited: DashMap<u128, ()> = DashMap::new();
    let verdicts = VerdictCache::default();
    let large: DashMap<u128, ()> = DashMap::new();
    let inconclusive: DashMap<u128, ()> = DashMap::new();
    let small_count = AtomicUsize::new(0);

    frames.par_iter().try_for_each(|frame| -> Result<()> {
        let fs = frame_support(cfg.degree, frame);
        let st = equal_weight_stabilizer(&fs)?;
        if st.free_rank > 0 {
            return Err(Error::Invalid(format!("frame {frame:?} has an infinite stabilizer")));
        }
        let base = fs.monomials()[0].clone();
        let root = RootGroup::new(&u, &st.data, &base);
        let mut psi = vec![false; root.size];
        psi[0] = true;
        for m in fs.iter() {
            let i = u.monos.iter().position(|x| x == m).unwrap();
            psi = root.extend(&psi, root.chi[i]);
        }
        let mut stack = vec![psi];
        while let Some(psi) = stack.pop() {
            let mask = root.mask(&psi);
            let canon = u.canonical(mask);
            if visited.insert(canon, ()).is_some() {
                continue;
            }
            let s = u.support(canon);
            let verdict = verdicts.verdict(&s, &cfg.largeness, cfg.seed)?;
            match verdict {
                LargenessVerdict::Large { .. } => {
                    large.insert(canon, ());
                    continue;
                }
                LargenessVerdict::Inconclusive { .. } => {
                    inconclusive.insert(canon, ());
                }
                LargenessVerdict::SmallWitness { .. } => {
                    small_count.fetch_add(1, Ordering::Relaxed);
                }
            }
            let mut seen_children = HashSet::new();
            for i in bits(!mask & full_mask(u.monos.len())) {
                let child = root.extend(&psi, root.chi[i]);
                let cm = root.mask(&child);
                if seen_children.insert(cm) {
                    stack.push(child);
                }
            }
        }
        Ok(())
    })?;

    let mut large_sets: Vec<u128> = large.iter().map(|e| *e.key()).collect();
    large_sets.sort_by_key(|m| std::cmp::Reverse(m.reverse_bits()));
    // Minimal: no other large closed set sits inside it after relabeling.
    let minimal: Vec<u128> = large_sets
        .par_iter()
        .filter(|&&big| {
            !large_sets
                .iter()
                .any(|&small| small != big && small.count_ones() < big.count_ones() && u.is_sub_up_to_relabeling(small, big))
        })
        .cloned()
        .collect();

    let mut lemma_violations = vec![];
    for &m in &large_sets {
        let s = u.support(m);
        let data = equal_weight_stabilizer(&s)?.data;
        for v in check_lemmas(&data) {
            lemma_violations.push(LemmaViolation { lemma: v.lemma, detail: format!("{} on {s}", v.detail) });
        }
    }

    let mut records: Vec<ClassificationRecord> = minimal
        .par_iter()
        .map(|&m| ClassificationRecord::for_support(&u.support(m), &cfg.primes, &cfg.largeness, cfg.seed, &verdicts))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| a.key.cmp(&b.key));
    let mut keys = HashSet::new();
    records.retain(|r| keys.insert(r.key.clone()));
    let maximality_disagreements = records
        .iter()
        .filter(|r| !r.maximality.is_maximal())
        .map(|r| format!("{}: {:?}", r.key, r.maximality))
        .collect();

    let mut inc: Vec<u128> = inconclusive.iter().map(|e| *e.key()).collect();
    inc.sort_by_key(|m| std::cmp::Reverse(m.reverse_bits()));
    Ok(Classification {
        config: cfg.clone(),
        records,
        inconclusive: inc.iter().map(|&m| u.support(m).to_strings()).collect(),
        non_minimal_large: large_sets.len() - minimal.len(),
        lemma_instances_checked: large_sets.len(),
        lemma_violations,
        maximality_disagreements,
        stats: SearchStats {
            frame_classes: frames.len(),
            closed_sets_visited: visited.len(),
            large_closed_sets: large_sets.len(),
            small_closed_sets: small_count.load(Ordering::Relaxed),
            inconclusive_closed_sets: inc.len(),
        },
    })
}

fn full_mask(len: usize) -> u128 {
    if len == 128 {
        u128::MAX
    } else {
        (1u128 << len) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::Target;

    fn sup(d: u32, n: usize, items: &[&str]) -> SupportSet {
        SupportSet::parse(d, n, items).unwrap()
    }

    #[test]
    fn closure_of_case_two_frame() {
        let frame = sup(3, 6, &["x1^2x2", "x2^2x3", "x3^2x4", "x4^3", "x5^2x2", "x6^2x3"]);
        let c = closure(&frame).unwrap();
        assert_eq!(c.stabilizer.free_rank, 0);
        assert_eq!(c.stabilizer.group.order(), 32);
        let case = ActionData::from_generator_string(3, "diag[w:w^6:w^4:1:w^5:w^2]; w^8=1", &Target::Trivial).unwrap();
        let s2 = case.invariant_monomials();
        assert!(c.support.is_subset(&s2) && c.support != s2);
        let again = closure(&c.support).unwrap();
        assert_eq!(again.support, c.support);
    }

    #[test]
    fn closure_of_fermat_and_everything() {
        let fermat = sup(3, 6, &["x1^3", "x2^3", "x3^3", "x4^3", "x5^3", "x6^3"]);
        let c = closure(&fermat).unwrap();
        assert_eq!(c.support, fermat);
        assert_eq!(c.stabilizer.group.order(), 243);
        let all = enumerate_monomials(3, 4);
        let c = closure(&all).unwrap();
        assert_eq!(c.support, all);
        assert!(c.stabilizer.group.structure().is_trivial());
    }

    #[test]
    fn closure_with_continuous_stabilizer() {
        // x1^3 and x2^3 alone leave a two-dimensional torus.
        let s = sup(3, 4, &["x1^3", "x2^3"]);
        let c = closure(&s).unwrap();
        assert_eq!(c.stabilizer.free_rank, 2);
        assert_eq!(c.support, s);
    }

    #[test]
    fn maximality_examples() {
        let cfg = LargenessConfig::default();
        let case = ActionData::from_generator_string(3, "diag[w:w^6:w^4:1:w^5:w^2]; w^8=1", &Target::Trivial).unwrap();
        let sub = case.induce(&[vec![2]]).unwrap();
        match is_maximal(&sub, &[2], &cfg, 1).unwrap() {
            Maximality::NonMaximal { prime, .. } => assert_eq!(prime, 2),
            other => panic!("expected non-maximal, got {other:?}"),
        }
        let fermat = ActionData::from_generator_string(4, "diag[a:b:c:1]; a^4=b^4=c^4=1", &Target::Trivial).unwrap();
        assert!(is_maximal(&fermat, &DEFAULT_PRIMES, &cfg, 1).unwrap().is_maximal());
    }

    #[test]
    fn root_group_closure_matches_lattice_closure() {
        let u = Universe::new(3, 4).unwrap();
        for frame in enumerate_frames(4, true) {
            let fs = frame_support(3, &frame);
            let st = equal_weight_stabilizer(&fs).unwrap();
            let root = RootGroup::new(&u, &st.data, &fs.monomials()[0]);
            let mut psi = vec![false; root.size];
            psi[0] = true;
            for m in fs.iter() {
                let i = u.monos.iter().position(|x| x == m).unwrap();
                psi = root.extend(&psi, root.chi[i]);
            }
            let mask = root.mask(&psi);
            let c = closure(&fs).unwrap();
            assert_eq!(u.support(mask), c.support);
            for i in bits(!mask & full_mask(u.monos.len())).take(4) {
                let child = root.mask(&root.extend(&psi, root.chi[i]));
                let mut grown: Vec<Monomial> = c.support.monomials().to_vec();
                grown.push(u.monos[i].clone());
                let s = SupportSet::new(3, 4, grown).unwrap();
                assert_eq!(u.support(child), closure(&s).unwrap().support);
            }
            assert_eq!(u.mask_of(&c.support), mask);
        }
    }

    #[test]
    fn plane_cubics_are_all_simple() {
        let c = classify(&ClassifyConfig::new(3, 3)).unwrap();
        assert!(!c.records.is_empty());
        assert!(c.records.iter().all(|r| r.is_simple()));
        assert!(c.inconclusive.is_empty());
        assert!(c.lemma_violations.is_empty());
    }
}
