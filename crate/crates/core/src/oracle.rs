//! Ground truth for C_n mod p, independent of the automaton.
//!
//! Everything here reduces to Lucas' theorem on base-p digits; the Catalan
//! number itself is the integer difference binom(2n,n) - binom(2n,n+1), so
//! no division by n+1 ever happens and no case split on p | n+1 is needed.

use crate::algebra::{mul_mod, sub_mod, Residue};
use crate::{Error, Result};

/// binom(a, b) mod p for single base-p digits a, b < p, by the
/// multiplicative formula with one inverse at the end.
fn digit_binomial(a: u64, b: u64, p: u64) -> Residue {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 1..=b {
        num = mul_mod(num, a - b + i, p);
        den = mul_mod(den, i, p);
    }
    // a < p, so every factor of den is a unit mod p
    mul_mod(
        num,
        crate::algebra::fp_inverse(den, p).expect("digit < p"),
        p,
    )
}

/// binom(m, k) mod p as the product of digitwise binomials (Lucas).
/// Zero exactly when some base-p digit of k exceeds the digit of m,
/// which covers k > m as well.
pub fn lucas_binomial(mut m: u64, mut k: u64, p: u64) -> Residue {
    let mut acc = 1 % p;
    while m > 0 || k > 0 {
        acc = mul_mod(acc, digit_binomial(m % p, k % p, p), p);
        if acc == 0 {
            return 0;
        }
        m /= p;
        k /= p;
    }
    acc
}

/// C_n mod p as binom(2n,n) - binom(2n,n+1), both via Lucas.
pub fn catalan_mod(n: u64, p: u64) -> Residue {
    debug_assert!(n < 1 << 63, "2n must not overflow");
    sub_mod(
        lucas_binomial(2 * n, n, p),
        lucas_binomial(2 * n, n + 1, p),
        p,
    )
}

/// Largest n with C_n representable in u64 through the recurrence below.
pub const CATALAN_EXACT_MAX: u64 = 35;

/// Exact C_n for n <= 35, by C_{k+1} = C_k * 2(2k+1) / (k+2). The division
/// is exact at every step; the product is taken in u128 before dividing.
pub fn catalan_exact(n: u64) -> Result<u64> {
    if n > CATALAN_EXACT_MAX {
        return Err(Error::CatalanRange(n));
    }
    let mut c = 1u128;
    for k in 0..n as u128 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    Ok(c as u64)
}

/// C_0 mod p, C_1 mod p, ... C_{limit-1} mod p.
pub fn catalan_stream(p: u64, limit: u64) -> impl Iterator<Item = Residue> {
    (0..limit).map(move |n| catalan_mod(n, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{digits_lsd, primes_up_to};

    /// Exact binomial table in u128, the cross-check oracle for Lucas.
    fn pascal(n: usize) -> Vec<Vec<u128>> {
        let mut t = vec![vec![1u128]];
        for i in 1..=n {
            let prev = &t[i - 1];
            let mut row = vec![1u128; i + 1];
            for j in 1..i {
                row[j] = prev[j - 1] + prev[j];
            }
            t.push(row);
        }
        t
    }

    /// binom(m, k) from the table, 0 when k > m.
    fn binom(t: &[Vec<u128>], m: usize, k: usize) -> u128 {
        t[m].get(k).copied().unwrap_or(0)
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(lucas_binomial(10, 0, 5), 1);
        assert_eq!(lucas_binomial(8, 4, 5), 0); // 70 = 2 * 5 * 7
        assert_eq!(lucas_binomial(10, 5, 7), 0); // 252 = 7 * 36
        assert_eq!(lucas_binomial(4, 7, 5), 0); // k > m
    }

    #[test]
    fn lucas_matches_exact_binomials() {
        let table = pascal(40);
        for p in [5u64, 7, 13] {
            for m in 0..=40u64 {
                for k in 0..=m {
                    let exact = (table[m as usize][k as usize] % p as u128) as u64;
                    assert_eq!(lucas_binomial(m, k, p), exact, "m={m} k={k} p={p}");
                }
            }
        }
    }

    #[test]
    fn lucas_zero_criterion() {
        for p in [5u64, 7, 13] {
            for m in 0..=40u64 {
                for k in 0..=m {
                    let digit_exceeds = digits_lsd(k, p)
                        .iter()
                        .enumerate()
                        .any(|(i, &kd)| kd > *digits_lsd(m, p).get(i).unwrap_or(&0));
                    assert_eq!(
                        lucas_binomial(m, k, p) == 0,
                        digit_exceeds,
                        "m={m} k={k} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn catalan_exact_examples() {
        assert_eq!(catalan_exact(0).unwrap(), 1);
        assert_eq!(catalan_exact(5).unwrap(), 42);
        assert_eq!(catalan_exact(10).unwrap(), 16796);
        assert_eq!(catalan_exact(35).unwrap(), 3_116_285_494_907_301_262);
        assert_eq!(catalan_exact(36), Err(Error::CatalanRange(36)));
    }

    #[test]
    fn catalan_exact_satisfies_binomial_identity() {
        // (n+1) * C_n = binom(2n, n) exactly, and the subtraction form
        // binom(2n,n) - binom(2n,n+1) equals C_n exactly.
        let table = pascal(72);
        for n in 0..=35u64 {
            let c = catalan_exact(n).unwrap() as u128;
            let central = binom(&table, 2 * n as usize, n as usize);
            assert_eq!((n as u128 + 1) * c, central);
            let next = binom(&table, 2 * n as usize, n as usize + 1);
            assert_eq!(c, central - next);
        }
    }

    #[test]
    fn catalan_mod_examples() {
        assert_eq!(catalan_mod(0, 5), 1);
        assert_eq!(catalan_mod(0, 101), 1);
        assert_eq!(catalan_mod(4, 5), 4); // C_4 = 14
        assert_eq!(catalan_mod(29, 5), 3); // C_29 = 1002242216651368
    }

    #[test]
    fn catalan_mod_matches_exact_values() {
        for p in [5u64, 7, 11, 13, 101] {
            for n in 0..=35u64 {
                assert_eq!(
                    catalan_mod(n, p),
                    catalan_exact(n).unwrap() % p,
                    "n={n} p={p}"
                );
            }
        }
    }

    #[test]
    fn catalan_mod_matches_exact_binomial_difference_beyond_u64() {
        // past the exact-value range, fall back on the u128 Pascal table
        let table = pascal(120);
        for p in primes_up_to(23).into_iter().filter(|&p| p >= 5) {
            for n in 0..=60u64 {
                let diff = binom(&table, 2 * n as usize, n as usize)
                    - binom(&table, 2 * n as usize, n as usize + 1);
                assert_eq!(catalan_mod(n, p), (diff % p as u128) as u64, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn stream_examples() {
        let first: Vec<_> = catalan_stream(5, 5).collect();
        assert_eq!(first, vec![1, 1, 2, 0, 4]);
        assert_eq!(catalan_stream(7, 0).count(), 0);
        assert_eq!(catalan_stream(7, 11).last().unwrap(), 3); // C_10 = 16796
    }

    #[test]
    fn stream_agrees_with_pointwise_calls() {
        for (n, v) in catalan_stream(13, 500).enumerate() {
            assert_eq!(v, catalan_mod(n as u64, 13));
        }
    }
}
