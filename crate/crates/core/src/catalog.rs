//! The 13 known non-simple maximal cases and per-case verification.

use serde::{Deserialize, Serialize};

use crate::action::{ActionData, CanonicalKey, Target};
use crate::classifier::{is_maximal_cached, Maximality, VerdictCache};
use crate::error::{Error, Result};
use crate::graph::{chain_invariants, ChainInvariants};
use crate::monomial::{Monomial, SupportSet};
use crate::simplicity::{find_simple_decomposition, SimpleDecomposition};
use crate::smooth::{LargenessConfig, LargenessVerdict};

const CATALOG_JSON: &str = include_str!("../data/catalog.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogCase {
    pub label: String,
    pub degree: u32,
    pub variables: usize,
    /// Group in `diag[...]; relations` notation.
    pub generators: String,
    /// Claimed invariant factors.
    pub structure: Vec<u64>,
    /// Claimed `S_I`; its first monomial fixes the weight `λ`.
    pub support: Vec<String>,
}

impl CatalogCase {
    pub fn claimed_support(&self) -> Result<SupportSet> {
        SupportSet::parse(self.degree, self.variables, &self.support)
    }

    pub fn action_data(&self) -> Result<ActionData> {
        let first = self.support.first().ok_or_else(|| Error::Invalid("empty support".into()))?;
        let target = Target::Monomial(Monomial::parse(first, self.variables)?);
        let data = ActionData::from_generator_string(self.degree, &self.generators, &target)?;
        if data.n_vars() != self.variables {
            return Err(Error::Invalid(format!(
                "generators act on {} variables, case declares {}",
                data.n_vars(),
                self.variables
            )));
        }
        Ok(data)
    }
}

pub fn catalog() -> Vec<CatalogCase> {
    serde_json::from_str(CATALOG_JSON).expect("bundled catalog parses")
}

pub fn find_case(label: &str) -> Result<CatalogCase> {
    catalog().into_iter().find(|c| c.label == label).ok_or_else(|| Error::UnknownLabel(label.into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub label: String,
    pub generators: String,
    pub key: CanonicalKey,
    pub structure: Vec<u64>,
    pub structure_text: String,
    pub support: Vec<String>,
    pub largeness: LargenessVerdict,
    pub simple: Option<SimpleDecomposition>,
    pub maximality: Maximality,
    pub chain: Option<ChainInvariants>,
    pub checks: Vec<Check>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

/// Runs all checks on a case. Parse failures are errors; failed checks are
/// reported, never raised.
pub fn verify_case(case: &CatalogCase, primes: &[u64], cfg: &LargenessConfig, seed: u64) -> Result<CaseReport> {
    let data = case.action_data()?;
    let claimed = case.claimed_support()?;
    let cache = VerdictCache::default();
    let s = data.invariant_monomials();
    let structure = data.group_structure();
    let largeness = cache.verdict(&s, cfg, seed)?;
    let simple = find_simple_decomposition(&s);
    let maximality = is_maximal_cached(&data, primes, cfg, seed, &cache)?;
    let chain = chain_invariants(&data);

    let mut checks = vec![];
    let mut check = |name: &str, passed: bool, detail: String| {
        checks.push(Check { name: name.into(), passed, detail })
    };
    check(
        "structure",
        structure.factors() == case.structure.as_slice(),
        format!("computed {:?}, claimed {:?}", structure.factors(), case.structure),
    );
    let missing: Vec<String> = claimed.iter().filter(|m| !s.contains(m)).map(|m| m.to_string()).collect();
    let extra: Vec<String> = s.iter().filter(|m| !claimed.contains(m)).map(|m| m.to_string()).collect();
    check(
        "S mismatch",
        missing.is_empty() && extra.is_empty(),
        format!("claimed but not invariant {missing:?}; invariant but not claimed {extra:?}"),
    );
    check("large", largeness.is_large(), verdict_summary(&largeness));
    check(
        "not simple",
        simple.is_none(),
        match &simple {
            None => "no K/T/Y decomposition".into(),
            Some(dec) => format!("decomposes into {} blocks", dec.blocks.len()),
        },
    );
    check("maximal", maximality.is_maximal(), format!("{maximality:?}"));
    check(
        "chain invariants",
        chain.is_ok(),
        match &chain {
            Ok(inv) => format!("(s, c) = ({}, {}), chain {:?}", inv.s, inv.c, inv.witness_one_based()),
            Err(e) => e.to_string(),
        },
    );

    Ok(CaseReport {
        label: case.label.clone(),
        generators: case.generators.clone(),
        key: data.canonical_form(),
        structure: structure.factors().to_vec(),
        structure_text: structure.primary_form(),
        support: s.to_strings(),
        largeness,
        simple,
        maximality,
        chain: chain.ok(),
        checks,
    })
}

fn verdict_summary(v: &LargenessVerdict) -> String {
    match v {
        LargenessVerdict::Large { certificate } => format!("smooth member mod {}", certificate.prime),
        LargenessVerdict::SmallWitness { a, b } => {
            let one = |v: &[usize]| v.iter().map(|i| i + 1).collect::<Vec<_>>();
            format!("M(A;B) empty for A={:?}, B={:?}", one(a), one(b))
        }
        LargenessVerdict::Inconclusive { trials, primes } => format!("no smooth member in {trials} trials over {primes:?}"),
    }
}
