use hadacode::bh::{bh_search, blend_check, fourier, gh_check, BhMatrix, SearchOptions};
use hadacode::fixtures;
use hadacode::laurent::divisors;
use hadacode::ph::{Modulus, PhMatrix};
use proptest::prelude::*;

fn bh_fixtures() -> Vec<BhMatrix> {
    fixtures::ids()
        .filter(|id| id.starts_with("bh_"))
        .map(|id| fixtures::bh(id).unwrap())
        .collect()
}

fn corpus() -> Vec<BhMatrix> {
    let mut v = bh_fixtures();
    v.extend((2..=10).map(|n| fourier(n).unwrap()));
    v
}

#[test]
fn fourier_matrices_verify() {
    for n in 2..=32 {
        assert!(fourier(n).unwrap().is_bh(), "fourier({n})");
    }
}

#[test]
fn every_single_exponent_change_breaks_orthogonality() {
    for m in corpus() {
        let n = m.order();
        for i in 0..n {
            for j in 0..n {
                let mut e = m.exponents().to_vec();
                e[i][j] = (e[i][j] + 1) % m.m();
                assert!(!BhMatrix::new(m.m(), e).unwrap().is_bh());
            }
        }
    }
}

#[test]
fn normalization_is_idempotent_and_preserves_orthogonality() {
    for m in corpus() {
        let n = m.normalize();
        assert!(n.is_normalized());
        assert!(n.is_bh());
        assert_eq!(n.normalize(), n);
    }
}

#[test]
fn gh_check_is_the_conjunction_over_divisors() {
    let mut cases: Vec<(Vec<Vec<i64>>, u64)> = corpus()
        .iter()
        .map(|m| (PhMatrix::from_bh(m).exponents().to_vec(), m.m()))
        .collect();
    cases.push((
        fixtures::ph("ph_6_f43")
            .unwrap()
            .matrix
            .exponents()
            .to_vec(),
        12,
    ));
    cases.push((
        PhMatrix::from_bh(&fourier(6).unwrap()).exponents().to_vec(),
        12,
    ));
    for (e, k) in cases {
        let expected = divisors(k)
            .into_iter()
            .filter(|&d| d > 1)
            .find(|&d| !BhMatrix::from_exponents_mod(d, &e).unwrap().is_bh());
        let rep = gh_check(&e, k).unwrap();
        assert_eq!(rep.failing_divisor, expected);
        assert_eq!(rep.is_gh, expected.is_none());
    }
}

#[test]
fn kronecker_products_verify() {
    let all = corpus();
    for a in &all {
        for b in &all {
            if a.m() == b.m() && a.order() * b.order() <= 64 {
                let k = a.kronecker(b).unwrap();
                assert_eq!(k.order(), a.order() * b.order());
                assert!(k.is_bh());
            }
        }
    }
}

#[test]
fn search_results_verify_and_are_sorted() {
    for (n, m) in [
        (2, 2),
        (2, 3),
        (3, 3),
        (4, 2),
        (4, 4),
        (2, 6),
        (3, 6),
        (4, 6),
    ] {
        let found = bh_search(n, m, SearchOptions::default()).unwrap();
        assert!(found.iter().all(|b| b.is_bh() && b.is_normalized()));
        let keys: Vec<_> = found.iter().map(|b| b.exponents().to_vec()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(keys, sorted, "n = {n}, m = {m}");
    }
}

#[test]
fn search_is_schedule_independent() {
    for (n, m) in [(4, 4), (3, 6), (6, 3)] {
        let par = bh_search(n, m, SearchOptions::default()).unwrap();
        let seq = bh_search(
            n,
            m,
            SearchOptions {
                parallel: false,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(par, seq);
    }
}

#[test]
fn blend_outcomes_on_shifted_copies() {
    // A shifted copy evaluates to the same matrix, so the sum blend returns it.
    for m in corpus() {
        let h = m.m();
        let lifted = PhMatrix::from_bh(&m);
        let n = m.order();
        let t: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| (i * j) as i64 % 3 - 1).collect())
            .collect();
        let shifted = lifted.shift(&Modulus::cyclotomic(h), &t).unwrap();
        let rep = blend_check(&m, &shifted, h).unwrap();
        assert!(rep.sum_is_bh);
        assert_eq!(rep.sum.as_ref(), Some(&m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn row_and_column_operations_preserve_orthogonality(
        pick in 0usize..32,
        r in (0usize..64, 0usize..64),
        c in (0usize..64, 0usize..64),
        add in (0usize..64, 0u64..64),
    ) {
        let all = corpus();
        let m = &all[pick % all.len()];
        let n = m.order();
        let mut e = m.exponents().to_vec();
        e.swap(r.0 % n, r.1 % n);
        for row in e.iter_mut() {
            row.swap(c.0 % n, c.1 % n);
        }
        for v in e[add.0 % n].iter_mut() {
            *v = (*v + add.1) % m.m();
        }
        let t = BhMatrix::new(m.m(), e).unwrap();
        prop_assert!(t.is_bh());
        prop_assert!(t.normalize().is_bh());
    }
}
