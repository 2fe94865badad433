use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use syzlab_core::boij_soderberg::*;
use syzlab_core::koszul::{betti_table, hilbert_check};
use syzlab_core::{FieldChoice, RingContext};

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

#[test]
fn small_pure_tables() {
    assert_eq!(pure_table(1, 2).unwrap().betti, vec![int(1), int(3), int(2)]);
    let single = pure_table(5, 4).unwrap();
    assert_eq!(single.betti, [1, 4, 6, 4, 1].map(int).to_vec());
    for r in 1..=8 {
        for i in 0..=r + 1 {
            let t = pure_table(i, r).unwrap();
            assert!(herzog_kuhl_residuals(&t).iter().all(Zero::is_zero), "Pi_{i}, r={r}");
            assert!(hilbert_check(&t.to_table()).passed);
        }
    }
    assert!(pure_table(4, 2).is_err());
}

#[test]
fn engine_two_row_tables_decompose_exactly() {
    for (n, b, d) in [(1, -1, 6), (2, -1, 3), (2, -1, 4), (1, -2, 4), (1, -1, 4)] {
        let t = betti_table(RingContext::new(n, b, d).unwrap(), FieldChoice::default_prime()).unwrap();
        let dec = decompose(&t).unwrap();
        let back = dec.synthesize().unwrap();
        for p in 0..=dec.r {
            for q in [1, 2] {
                assert_eq!(back.get(p, q), int(t.get(p, q) as i64), "({n},{b},{d}) p={p} q={q}");
            }
        }
        assert!(dec.coeffs.iter().all(|x| *x >= BigRational::zero()));
    }
    let t = betti_table(RingContext::new(1, -1, 6).unwrap(), FieldChoice::default_prime()).unwrap();
    let dec = decompose(&t).unwrap();
    assert_eq!(dec.to_csv(), "i,x\n6,6\n");
}

#[test]
fn peel_orders_agree() {
    let x: Vec<BigRational> = (1..=7).map(|k| rational(k, 3)).collect();
    let t = synthesize(&x, 7).unwrap();
    assert_eq!(decompose_with(&t, PeelOrder::LowCorner).unwrap(), decompose_with(&t, PeelOrder::HighCorner).unwrap());
}

#[test]
fn tables_outside_the_cone_are_refused() {
    let mut t = synthesize(&[int(1), int(1)], 2).unwrap();
    t.set(0, 1, int(5));
    assert!(matches!(decompose(&t), Err(syzlab_core::Error::NotInPureCone(_))));
}

#[test]
fn sampler_is_deterministic_and_robust() {
    let a = sample_profiles(200, 200, 7, CoeffDistribution::Uniform, &DEFAULT_GRID).unwrap();
    let b = sample_profiles(200, 200, 7, CoeffDistribution::Uniform, &DEFAULT_GRID).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    let e = sample_profiles(200, 200, 7, CoeffDistribution::Exponential, &DEFAULT_GRID).unwrap();
    let m1 = a.row(1.0).unwrap().median_rho;
    let m2 = e.row(1.0).unwrap().median_rho;
    assert!((m1 - m2).abs() < 0.05, "{m1} vs {m2}");
    assert_eq!(a.row(0.0).unwrap().median_rho, 1.0);
}

fn coeffs(r: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec((0i64..30, 1i64..10), r).prop_map(|v| v.into_iter().map(|(n, d)| rational(n, d)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decompose_inverts_synthesize((r, x) in (1usize..=20).prop_flat_map(|r| (Just(r), coeffs(r)))) {
        let t = synthesize(&x, r).unwrap();
        prop_assert!(hilbert_check(&t).passed);
        let dec = decompose(&t).unwrap();
        prop_assert_eq!(dec.interior(), x.as_slice());
    }

    #[test]
    fn log_entries_match_exact_entries(r in 1usize..=14, i_frac in 0.0f64..1.0) {
        let i = ((r + 2) as f64 * i_frac) as usize;
        let t = pure_table(i, r).unwrap();
        for p in 0..=r {
            let exact = syzlab_core::koszul::rational_f64(&t.betti[p]).ln();
            prop_assert!((exact - ln_pure_entry(i, r, p)).abs() < 1e-9);
        }
    }
}
