use syzlab_core::predictors::*;

fn err(g: u64, d: u64, a: f64) -> f64 {
    (curve_gaussian_normalized(g, d, a).unwrap() - (-a * a / 2.0).exp()).abs()
}

#[test]
fn centre_converges_monotonically() {
    for g in [0u64, 2] {
        for d0 in [40u64, 75] {
            let errs: Vec<f64> = (0..5).map(|k| err(g, d0 << k, 0.0)).collect();
            assert!(errs.windows(2).all(|w| w[1] < w[0]), "g={g} d0={d0}: {errs:?}");
        }
    }
}

#[test]
fn off_centre_error_shrinks_like_inverse_root() {
    for g in [0u64, 2] {
        for a in [0.5, 1.0] {
            for k in 0..5 {
                let d = 75u64 << k;
                let r = (d - g) as f64;
                assert!(err(g, d, a) * r.sqrt() <= 1.5, "g={g} a={a} d={d}");
            }
            assert!(err(g, 2400, a) < err(g, 75, a) / 4.0);
        }
    }
}

#[test]
fn exact_value_at_eighty() {
    let v = curve_gaussian_normalized(0, 80, 0.0).unwrap();
    assert!((v - 0.97257).abs() < 5e-5, "{v}");
}

#[test]
fn outside_the_domain() {
    assert!(curve_gaussian_normalized(2, 4, 0.0).is_err());
    assert!(curve_gaussian_normalized(0, 10, 10.0).is_err());
}
