use hadacode::bh::{bh_search, fourier, BhMatrix, SearchOptions};
use hadacode::codes::{
    bh_row_distance_bound, code_from_matrix, equidistant_check, gray_expand, merged_distance_check,
    min_distance_hamming, min_distance_weighted, plotkin_check, GrayMap, PlotkinReport,
};
use hadacode::fixtures;
use hadacode::gray::{gamma_average, prime_power, WeightTable};
use hadacode::laurent::{rat, Rational};
use hadacode::ph::{crt_merge, Modulus, PhMatrix};
use proptest::prelude::*;

fn scaled(m: &BhMatrix, factor: u64, modulus: u64) -> BhMatrix {
    let e: Vec<Vec<i64>> = m
        .exponents()
        .iter()
        .map(|r| r.iter().map(|&v| (v * factor) as i64).collect())
        .collect();
    BhMatrix::from_exponents_mod(modulus, &e).unwrap()
}

/// Butson-Hadamard matrices over `p^k`-th roots of unity with `p` odd.
fn odd_prime_power_cases() -> Vec<BhMatrix> {
    let f3in9 = scaled(&fourier(3).unwrap(), 3, 9);
    let f9 = fourier(9).unwrap();
    vec![
        fixtures::bh("bh_9_9").unwrap(),
        f3in9.kronecker(&f9).unwrap(),
        f3in9.kronecker(&f3in9).unwrap(),
        fourier(25).unwrap(),
        fourier(27).unwrap(),
        fourier(3).unwrap(),
        fourier(5).unwrap(),
    ]
}

/// `n (p - 1) p^(k - 2)`, as a rational so that `k = 1` gives `n (p - 1) / p`.
fn predicted(n: usize, m: u64) -> Rational {
    let (p, k) = prime_power(m).unwrap();
    let base = rat(n as i64 * (p as i64 - 1));
    if k >= 2 {
        base * rat((p as i64).pow(k - 2))
    } else {
        base / rat(p as i64)
    }
}

fn check_g2_law(m: &BhMatrix) {
    let m = m.normalize();
    let (p, k) = prime_power(m.m()).unwrap();
    let want = predicted(m.order(), m.m());
    let image = gray_expand(&m, GrayMap::G2).unwrap();
    assert_eq!(image[0].len(), m.order() * p.pow(k - 1) as usize);
    let gray = min_distance_hamming(&image).unwrap();
    let code = code_from_matrix(&m, true).unwrap();
    let w2 = WeightTable::w2(p, k).unwrap();
    let weighted = min_distance_weighted(&code, &w2).unwrap();
    if k >= 2 {
        assert_eq!(
            gray.min_distance,
            want,
            "order {} over Z_{}",
            m.order(),
            m.m()
        );
    }
    assert_eq!(weighted.min_distance, gray.min_distance);
    assert!(weighted.equidistant && gray.equidistant);
    assert!(equidistant_check(&code, &w2).unwrap());
}

#[test]
fn g2_distance_law_on_enlarged_matrices() {
    let cases = odd_prime_power_cases();
    assert_eq!(cases[1].order(), 27);
    for m in &cases {
        assert!(m.is_bh());
        check_g2_law(m);
    }
}

#[test]
fn g1_distance_law() {
    let cases = vec![
        fixtures::bh("bh_8_4").unwrap(),
        fixtures::bh("bh_9_9").unwrap(),
        fourier(4).unwrap(),
        fourier(8).unwrap(),
        fourier(16).unwrap(),
        fourier(9).unwrap(),
        fourier(27).unwrap(),
        fourier(25).unwrap(),
        fourier(4)
            .unwrap()
            .kronecker(&fixtures::bh("bh_8_4").unwrap())
            .unwrap(),
    ];
    for m in cases {
        let m = m.normalize();
        let (p, k) = prime_power(m.m()).unwrap();
        let image = gray_expand(&m, GrayMap::G1).unwrap();
        let rep = min_distance_hamming(&image).unwrap();
        assert_eq!(rep.min_distance, predicted(m.order(), m.m()));
        let w1 = WeightTable::w1(p, k).unwrap();
        let gamma = gamma_average(&w1);
        let code = code_from_matrix(&m, true).unwrap();
        let weighted = min_distance_weighted(&code, &w1).unwrap();
        assert_eq!(weighted.min_distance, &gamma * rat(m.order() as i64));
        assert!(weighted.equidistant);
        assert_eq!(
            plotkin_check(
                m.order() as u64,
                &weighted.min_distance,
                &gamma,
                code.length() as u64
            ),
            PlotkinReport::Bounded {
                bound: rat(m.order() as i64),
                meets: true,
                optimal: true
            }
        );
    }
}

#[test]
fn row_distance_bound_holds() {
    let mut cases: Vec<BhMatrix> = fixtures::ids()
        .filter(|id| id.starts_with("bh_"))
        .map(|id| fixtures::bh(id).unwrap())
        .collect();
    cases.extend((3..=16).map(|n| fourier(n).unwrap()));
    for (n, m) in [(3, 3), (4, 4), (3, 6), (6, 3), (6, 6)] {
        cases.extend(
            bh_search(
                n,
                m,
                SearchOptions {
                    limit: 30,
                    ..Default::default()
                },
            )
            .unwrap(),
        );
    }
    assert!(cases.len() >= 20);
    for m in cases {
        let r = bh_row_distance_bound(&m).unwrap();
        assert!(r.satisfied, "{m:?}: {r:?}");
        let rows_normalized = bh_row_distance_bound(&m.normalize()).unwrap();
        assert!(rows_normalized.satisfied);
    }
}

#[test]
fn deleting_a_constant_first_column_keeps_distances() {
    for id in fixtures::ids().filter(|id| id.starts_with("bh_")) {
        let m = fixtures::bh(id).unwrap().normalize();
        let full = min_distance_hamming(m.exponents()).unwrap();
        let code = code_from_matrix(&m, true).unwrap();
        let cut = min_distance_hamming(code.codewords()).unwrap();
        assert_eq!(full, cut, "{id}");
    }
}

fn merge_bases() -> Vec<(PhMatrix, u64, u64)> {
    let c = fixtures::ph("ph_3_merge_c").unwrap().matrix;
    vec![
        (c.clone(), 3, 6),
        (fixtures::ph("ph_6_f43").unwrap().matrix, 4, 3),
        (fixtures::ph("ph_3_phi3_x2").unwrap().matrix, 6, 3),
        (c.kronecker(&c), 3, 6),
        (
            c.kronecker(&fixtures::ph("ph_3_phi3_x2").unwrap().matrix),
            6,
            3,
        ),
        (fixtures::ph("ph_6_f43_shifted").unwrap().matrix, 3, 4),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn merged_distance_dominates_inputs(
        base in 0usize..6,
        t1 in prop::collection::vec(-3i64..3, 225),
        t2 in prop::collection::vec(-3i64..3, 225),
        perm in 0usize..1000,
    ) {
        let bases = merge_bases();
        let (c0, h, k) = &bases[base];
        prop_assert!(c0.verify(&Modulus::CyclotomicProduct(vec![*h, *k])).unwrap().ok);
        let n = c0.order();
        let rp: Vec<usize> = (0..n).map(|i| (i + perm) % n).collect();
        let id: Vec<usize> = (0..n).collect();
        let zero = vec![0i64; n];
        let c = c0.equiv_transform(&rp, &id, &zero, &zero).unwrap();
        let lift = |t: &[i64], q: u64| {
            PhMatrix::new(
                (0..n).map(|i| (0..n).map(|j| c.get(i, j) + q as i64 * t[i * n + j]).collect()).collect(),
            )
            .unwrap()
            .normalize()
        };
        let a = lift(&t1, *h);
        let b = lift(&t2, *k);
        let merged = crt_merge(&a, &b, *h, *k).unwrap();
        let rep = merged_distance_check(&a, &b, &merged, *h, *k).unwrap();
        prop_assert!(rep.satisfied, "{:?}", rep);
        prop_assert!(rep.d >= rep.d1.max(rep.d2));
    }

    #[test]
    fn plotkin_identity(n in 2u64..200, num in 1i64..50, den in 1i64..10) {
        let gamma = Rational::new(num.into(), den.into());
        let d = &gamma * rat(n as i64);
        prop_assert_eq!(
            plotkin_check(n, &d, &gamma, n - 1),
            PlotkinReport::Bounded { bound: rat(n as i64), meets: true, optimal: true }
        );
    }

    #[test]
    fn g2_law_survives_equivalence(pick in 0usize..3, perm in 0usize..10_000, shifts in prop::collection::vec(0u64..27, 54)) {
        let cases = odd_prime_power_cases();
        let m = &cases[pick];
        let n = m.order();
        let mut e: Vec<Vec<u64>> = (0..n)
            .map(|i| m.exponents()[(i * 7 + perm) % n].clone())
            .collect();
        for (i, row) in e.iter_mut().enumerate() {
            row.rotate_left(perm % n);
            for (j, v) in row.iter_mut().enumerate() {
                *v = (*v + shifts[i % 27] + shifts[27 + j % 27]) % m.m();
            }
        }
        let t = BhMatrix::new(m.m(), e).unwrap();
        prop_assert!(t.is_bh());
        check_g2_law(&t);
    }
}
