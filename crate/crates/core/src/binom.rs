//! Binomial coefficients in the three widths the crate needs.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// `C(n, k)` for signed arguments: zero when `k < 0`, `n < 0` or `k > n`.
///
/// Panics on `u128` overflow, which never happens for the parameter ranges
/// used by the formulas (`n` at most a few hundred with small `k`, or
/// `n <= 120`).
pub fn binom(n: i64, k: i64) -> u128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiplication
        acc = acc
            .checked_mul(n - i)
            .expect("binomial coefficient overflows u128")
            / (i + 1);
    }
    acc
}

/// `C(n, k)` as an `i128`, convenient for signed range formulas.
pub fn binom_i(n: i64, k: i64) -> i128 {
    i128::try_from(binom(n, k)).expect("binomial coefficient overflows i128")
}

/// `C(n, k)` as a big integer; zero outside `0 <= k <= n`.
pub fn binom_big(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}
