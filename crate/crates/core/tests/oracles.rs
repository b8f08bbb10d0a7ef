mod common;

use std::collections::HashSet;

use hypersym::catalog::catalog;
use hypersym::lattice::{quotient_structure, IntegerMatrix};
use hypersym::monomial::SupportSet;
use hypersym::simplicity::find_simple_decomposition;
use hypersym::smooth::{is_smooth_modp, SparsePoly};
use hypersym::torus::{FiniteDiagonalGroup, QzVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

#[test]
fn simplicity_matches_block_enumeration_on_cyclic_supports() {
    for (d, n) in [(3, 3), (3, 4), (4, 3), (4, 4)] {
        let supports = cyclic_supports(d, n, 12);
        let mut simple = 0;
        for s in &supports {
            let found = find_simple_decomposition(s);
            assert_eq!(found.is_some(), is_simple_oracle(s), "d={d} n={n} S={s}");
            if let Some(dec) = found {
                simple += 1;
                let mut covered: Vec<usize> = dec.blocks.iter().flat_map(|b| b.variables.clone()).collect();
                covered.sort();
                assert_eq!(covered, (0..n).collect::<Vec<_>>());
                for b in &dec.blocks {
                    assert!(b.monomials(d, n).iter().all(|m| s.contains(m)));
                }
            }
        }
        assert!(simple > 0 && simple < supports.len());
    }
}

#[test]
fn simplicity_matches_block_enumeration_on_catalog() {
    for case in catalog() {
        let s = case.claimed_support().unwrap();
        assert_eq!(find_simple_decomposition(&s).is_some(), is_simple_oracle(&s), "{}", case.label);
        let data = case.action_data().unwrap();
        let si = data.invariant_monomials();
        assert_eq!(find_simple_decomposition(&si).is_some(), is_simple_oracle(&si), "{}", case.label);
    }
}

#[test]
fn simple_decompositions_are_smooth() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (d, n) in [(3, 4), (4, 4)] {
        for s in cyclic_supports(d, n, 8) {
            let Some(dec) = find_simple_decomposition(&s) else { continue };
            let terms: Vec<_> =
                dec.blocks.iter().flat_map(|b| b.monomials(d, n)).map(|m| (m, rng.gen_range(1..101i64))).collect();
            let f = SparsePoly::new(d, n, terms).unwrap();
            assert!(is_smooth_modp(&f, 101).unwrap().smooth, "{f}");
        }
    }
}

fn check_quotient(rows: &[Vec<i64>]) {
    let k = rows.len();
    let m = IntegerMatrix::from_rows_i64(k, rows);
    let (free, pres) = quotient_structure(&m);
    let det = det_i64(rows).unsigned_abs();
    match torsion_counts_by_cosets(rows, det.max(1)) {
        None => assert!(free > 0, "{rows:?}"),
        Some(counts) => {
            assert_eq!(free, 0, "{rows:?}");
            assert_eq!(pres.order(), det, "{rows:?}");
            assert_eq!(counts, torsion_counts_from_factors(pres.factors(), det.max(1)), "{rows:?}");
        }
    }
}

#[test]
fn quotient_structure_matches_cosets_for_all_small_2x2() {
    for code in 0..9u32.pow(4) {
        let e: Vec<i64> = (0..4).map(|i| (code / 9u32.pow(i)) as i64 % 9 - 4).collect();
        let rows = vec![vec![e[0], e[1]], vec![e[2], e[3]]];
        if det_i64(&rows).unsigned_abs() <= 200 {
            check_quotient(&rows);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn quotient_structure_matches_cosets_3x3(e in proptest::collection::vec(-3i64..=3, 9)) {
        let rows: Vec<Vec<i64>> = e.chunks(3).map(|c| c.to_vec()).collect();
        prop_assume!(det_i64(&rows).unsigned_abs() <= 60);
        check_quotient(&rows);
    }

    #[test]
    fn diagonal_group_structure_matches_element_orders(
        n in 3usize..=4,
        gens in proptest::collection::vec((1u64..=12, proptest::collection::vec(0i64..12, 4)), 1..=3),
    ) {
        let elements: Vec<QzVector> = gens
            .iter()
            .map(|(den, num)| QzVector::new(*den, num[..n].to_vec()))
            .collect();
        let group = FiniteDiagonalGroup::generated_by(n, &elements);
        prop_assume!(group.order() <= 200);
        // Breadth-first closure of the generators.
        let mut seen: HashSet<QzVector> = HashSet::from([QzVector::zero(n)]);
        let mut frontier = vec![QzVector::zero(n)];
        while let Some(x) = frontier.pop() {
            for g in &elements {
                let y = x.add(g);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        prop_assert_eq!(seen.len() as u64, group.order());
        let bound = group.structure().exponent();
        let counts: Vec<u64> = (1..=bound)
            .map(|m| seen.iter().filter(|x| x.scale(m as i64).is_zero()).count() as u64)
            .collect();
        prop_assert_eq!(counts, torsion_counts_from_factors(group.structure().factors(), bound));
    }
}

/// Random polynomials in at most 3 variables: any singular point found
/// over `F_{p^k}` must be reflected by the Gröbner test.
#[test]
fn groebner_refutations_agree_with_point_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut refuted = 0;
    let mut smooth = 0;
    for &(p, k) in &[(5u64, 1usize), (7, 1), (11, 1), (5, 2), (7, 2), (11, 2), (5, 3), (7, 3)] {
        let field = FiniteField::new(p, k);
        for _ in 0..25 {
            let n = rng.gen_range(2..=3usize);
            let d = if p == 5 { 3 } else { rng.gen_range(3..=4u32) };
            let all = hypersym::monomial::enumerate_monomials(d, n);
            let size = rng.gen_range(n..=all.len().min(n + 3));
            let mut picks: Vec<_> = all.iter().cloned().collect();
            for i in 0..picks.len() {
                let j = rng.gen_range(i..picks.len());
                picks.swap(i, j);
            }
            picks.truncate(size);
            let s = SupportSet::new(d, n, picks).unwrap();
            let coeffs: Vec<i64> = (0..s.len()).map(|_| rng.gen_range(1..p as i64)).collect();
            let f = SparsePoly::from_support(&s, &coeffs).unwrap();
            let verdict = is_smooth_modp(&f, p).unwrap().smooth;
            if let Some(pt) = singular_point(&f, &field) {
                assert!(!verdict, "{f} singular at {pt:?} over F_{p}^{k}");
                refuted += 1;
            } else if verdict {
                smooth += 1;
            }
        }
    }
    assert!(refuted > 20 && smooth > 5, "refuted {refuted}, smooth {smooth}");
}

#[test]
fn finite_field_arithmetic() {
    for (p, k) in [(5u64, 2usize), (7, 3), (3, 3)] {
        let f = FiniteField::new(p, k);
        let q = f.size();
        // Frobenius: x^q = x for every element.
        for code in [1, 2, q / 2, q - 1] {
            let x = f.element(code);
            assert_eq!(f.pow(&x, q as u32), x);
        }
    }
}
