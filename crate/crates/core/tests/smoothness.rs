use hypersym::monomial::Monomial;
use hypersym::smooth::{is_smooth_modp, make_kty, KtyKind, SparsePoly};

/// Determinant of the exponent matrix of a K- or T-block.
fn exponent_determinant(kind: KtyKind, d: u32, k: usize) -> i64 {
    let a = d as i64 - 1;
    match (kind, k) {
        (_, 1) => d as i64,
        (KtyKind::K, _) => a.pow(k as u32) - (-1i64).pow(k as u32),
        _ => a.pow(k as u32 - 1) * d as i64,
    }
}

fn eval(m: &Monomial, x: &[u64], p: u64) -> u64 {
    m.exponents().iter().zip(x).fold(1, |acc, (&e, &v)| acc * v.pow(e) % p)
}

/// Brute-force search for a nonzero common zero of all partials over F_p.
fn singular_point(f: &SparsePoly, p: u64) -> Option<Vec<u64>> {
    let n = f.n_vars();
    let mut x = vec![0u64; n];
    loop {
        let mut k = 0;
        loop {
            if k == n {
                return None;
            }
            x[k] += 1;
            if x[k] < p {
                break;
            }
            x[k] = 0;
            k += 1;
        }
        let all_zero = (0..n).all(|i| {
            let s = f.terms().iter().filter(|(m, _)| m.exponent(i) > 0).fold(0, |acc, (m, &c)| {
                let mut e = m.exponents().to_vec();
                let a = e[i] as u64;
                e[i] -= 1;
                let val = eval(&Monomial::new(e), &x, p);
                (acc + (c.rem_euclid(p as i64) as u64) * a % p * val) % p
            });
            s == 0
        });
        if all_zero {
            return Some(x.clone());
        }
    }
}

#[test]
fn k_and_t_blocks_are_smooth_away_from_their_determinant() {
    for d in [3u32, 4] {
        for k in 1..=6 {
            for p in [7u64, 11, 101] {
                for kind in [KtyKind::K, KtyKind::T] {
                    let f = make_kty(kind, d, &[k]).unwrap();
                    let smooth = is_smooth_modp(&f, p).unwrap().smooth;
                    if exponent_determinant(kind, d, k) % p as i64 != 0 {
                        assert!(smooth, "{kind:?} d={d} k={k} p={p}");
                    } else {
                        assert!(!smooth, "{kind:?} d={d} k={k} p={p}");
                        assert!(singular_point(&f, p).is_some());
                    }
                }
            }
        }
    }
}

#[test]
fn y_blocks_are_smooth() {
    for a in 1..=4 {
        for b in 1..=a {
            let f = make_kty(KtyKind::Y, 3, &[a, b]).unwrap();
            assert!(is_smooth_modp(&f, 101).unwrap().smooth, "Y a={a} b={b}");
        }
    }
}

#[test]
fn groebner_runs_are_deterministic() {
    let f = make_kty(KtyKind::Y, 3, &[3, 2]).unwrap();
    let a = is_smooth_modp(&f, 211).unwrap();
    let b = is_smooth_modp(&f, 211).unwrap();
    assert_eq!(a, b);
}
