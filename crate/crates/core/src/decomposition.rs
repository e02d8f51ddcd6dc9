//! Every non-zero residue mod p as a product of central binomial
//! coefficients binom(2d, d) with d <= (p-1)/2.
//!
//! The recursion for a prime q <= p-2 rests on binom(q+1, (q+1)/2) having
//! q-valuation exactly 1 and every other prime factor strictly below q:
//! q is that central binomial times the inverse of the cofactor, and the
//! inverse of any already-decomposed value is its (p-2)-th power. Exponents
//! live mod p-1, which keeps the vectors small and the values intact.

use std::collections::HashMap;
use std::sync::Mutex;

use std::collections::BTreeMap;

use crate::algebra::{factorize, fp_pow, is_prime, mul_mod, primes_up_to, Residue};
use crate::oracle::lucas_binomial;
use crate::{Error, Result};

/// Multiset of generator indices in exponent form: d -> e_d with
/// 0 <= d <= (p-1)/2 and 0 <= e_d < p-1. Zero exponents are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExponentVector {
    e: BTreeMap<u32, u64>,
}

impl ExponentVector {
    pub fn is_empty(&self) -> bool {
        self.e.is_empty()
    }

    pub fn exponents(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.e.iter().map(|(&d, &e)| (d, e))
    }

    /// Add `times` copies of another vector, reducing mod p-1.
    fn add_scaled(&mut self, other: &ExponentVector, times: u64, p: u64) {
        for (d, e) in other.exponents() {
            let slot = self.e.entry(d).or_insert(0);
            // e, times < p-1 <= 2^63, so the product fits u128
            *slot = ((*slot as u128 + e as u128 * times as u128) % (p as u128 - 1)) as u64;
            if *slot == 0 {
                self.e.remove(&d);
            }
        }
    }

    fn add_single(&mut self, d: u32, times: u64, p: u64) {
        let mut one = ExponentVector::default();
        one.e.insert(d, 1);
        self.add_scaled(&one, times, p);
    }
}

/// binom(2d, d) mod p for d <= (p-1)/2; always non-zero since 2d < p.
pub fn central_binomial_mod(d: u32, p: u64) -> Result<Residue> {
    let half = ((p - 1) / 2) as u32;
    if d > half {
        return Err(Error::DigitRange { p, d, half });
    }
    Ok(lucas_binomial(2 * d as u64, d as u64, p))
}

/// Pi binom(2d, d)^{e_d} mod p.
pub fn value(e: &ExponentVector, p: u64) -> Result<Residue> {
    let mut acc = 1 % p;
    for (d, ed) in e.exponents() {
        acc = mul_mod(acc, fp_pow(central_binomial_mod(d, p)?, ed, p), p);
    }
    Ok(acc)
}

/// The generator indices with multiplicity, ascending.
pub fn flatten(e: &ExponentVector) -> Vec<u32> {
    let mut out = Vec::new();
    for (d, ed) in e.exponents() {
        for _ in 0..ed {
            out.push(d);
        }
    }
    out
}

pub fn verify_decomposition(e: &ExponentVector, r: Residue, p: u64) -> bool {
    value(e, p).map(|v| v == r % p).unwrap_or(false)
}

/// Exponent vector whose value is the prime q mod p, for q <= p-2.
pub fn decompose_prime(q: u64, p: u64) -> Result<ExponentVector> {
    if q > p - 2 || !is_prime(q) {
        return Err(Error::PrimeRange { q, limit: p - 1 });
    }
    static CACHE: Mutex<Option<HashMap<(u64, u64), ExponentVector>>> = Mutex::new(None);
    if let Some(hit) = CACHE
        .lock()
        .expect("decomposition cache poisoned")
        .get_or_insert_with(HashMap::new)
        .get(&(q, p))
    {
        return Ok(hit.clone());
    }
    let result = if q == 2 {
        let mut e = ExponentVector::default();
        e.e.insert(1, 1);
        e
    } else {
        // binom(q+1, (q+1)/2) = q * cofactor, cofactor a product of
        // primes < q; q = binom * cofactor^{-1} = binom * cofactor^{p-2}
        let m = q + 1;
        let half = m / 2;
        let mut cofactor = ExponentVector::default();
        for s in primes_up_to(m) {
            let v = crate::algebra::binomial_valuation(s, m, half)?;
            if s == q {
                assert_eq!(v, 1, "central binomial must have q-valuation 1");
                continue;
            }
            if v > 0 {
                debug_assert!(s < q);
                cofactor.add_scaled(&decompose_prime(s, p)?, v, p);
            }
        }
        let mut e = ExponentVector::default();
        e.add_single(half as u32, 1, p);
        e.add_scaled(&cofactor, p - 2, p);
        e
    };
    CACHE
        .lock()
        .expect("decomposition cache poisoned")
        .get_or_insert_with(HashMap::new)
        .insert((q, p), result.clone());
    Ok(result)
}

/// Exponent vector whose value is r, for any non-zero residue r. Prime
/// factors of r are always <= p-2: they cannot equal p-1 because p-1 is
/// even and composite for p >= 5, so the prime recursion applies to each.
pub fn decompose_residue(r: Residue, p: u64) -> Result<ExponentVector> {
    if r == 0 {
        return Err(Error::ZeroResidue);
    }
    if r >= p {
        return Err(Error::ResidueRange { r, p });
    }
    let mut e = ExponentVector::default();
    for (q, mult) in factorize(r) {
        e.add_scaled(&decompose_prime(q, p)?, mult as u64, p);
    }
    Ok(e)
}

/// Closure of {binom(2d,d) mod p : d <= (p-1)/2} under multiplication,
/// computed directly and independently of the decomposer. The residues
/// decompose exactly when this closure is the full group of units.
pub fn generators_span_units(p: u64) -> bool {
    let half = (p - 1) / 2;
    let generators: Vec<Residue> = (0..=half).map(|d| lucas_binomial(2 * d, d, p)).collect();
    let mut seen = vec![false; p as usize];
    let mut stack = vec![1u64];
    seen[1] = true;
    let mut count = 1u64;
    while let Some(c) = stack.pop() {
        for &g in &generators {
            let t = mul_mod(c, g, p);
            if !seen[t as usize] {
                seen[t as usize] = true;
                count += 1;
                stack.push(t);
            }
        }
    }
    count == p - 1
}
