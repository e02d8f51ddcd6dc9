//! Modular arithmetic, primality, factorization, and polynomials over F_p.
//!
//! The modulus p is passed explicitly to every operation; values are plain
//! `u64` residues in `0..p`. Polynomials are dense coefficient vectors with
//! no trailing zero, so equal polynomials have equal representations.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::{Error, Result};

/// A value reduced modulo the working prime. Always in `0..p`.
pub type Residue = u64;

/// (prime, exponent) pairs sorted by prime.
pub type Factorization = Vec<(u64, u32)>;

#[inline(always)]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

#[inline(always)]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline(always)]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

/// base^exp mod p by binary exponentiation. `fp_pow(0, 0, p) == 1`.
pub fn fp_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    base %= p;
    let mut acc = 1 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse via Fermat: a^(p-2) mod p.
pub fn fp_inverse(a: u64, p: u64) -> Result<u64> {
    if a.is_multiple_of(p) {
        return Err(Error::NonInvertible { p });
    }
    Ok(fp_pow(a, p - 2, p))
}

/// Deterministic Miller-Rabin, exact on the full u64 range.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for q in WITNESSES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in WITNESSES {
        let mut x = fp_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Trial division. `factorize(1)` is empty; n must be >= 1.
pub fn factorize(mut n: u64) -> Factorization {
    assert!(n >= 1, "factorize needs n >= 1");
    let mut out = Vec::new();
    let mut push = |q: u64, n: &mut u64| {
        let mut e = 0u32;
        while n.is_multiple_of(q) {
            *n /= q;
            e += 1;
        }
        if e > 0 {
            out.push((q, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut q = 5;
    while q * q <= n {
        push(q, &mut n);
        push(q + 2, &mut n);
        q += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// q-adic valuation of binom(m, k): the number of carries when adding
/// k and m-k in base q (Kummer). q must be prime; errors when k > m.
pub fn binomial_valuation(q: u64, m: u64, k: u64) -> Result<u64> {
    debug_assert!(is_prime(q));
    if k > m {
        return Err(Error::BinomialRange { m, k });
    }
    let (mut x, mut y) = (k, m - k);
    let mut carry = 0u64;
    let mut carries = 0u64;
    while x > 0 || y > 0 || carry > 0 {
        let s = x % q + y % q + carry;
        carry = u64::from(s >= q);
        carries += carry;
        x /= q;
        y /= q;
    }
    Ok(carries)
}

/// Base-p digits of n, least significant first. n = 0 gives `[0]`.
pub fn digits_lsd(n: u64, p: u64) -> Vec<u32> {
    debug_assert!(p >= 2 && p <= u32::MAX as u64);
    if n == 0 {
        return vec![0];
    }
    let mut digits = Vec::new();
    let mut m = n;
    while m > 0 {
        digits.push((m % p) as u32);
        m /= p;
    }
    digits
}

/// Dense polynomial over F_p. Invariant: the last coefficient is non-zero
/// (the zero polynomial is the empty vector), and all coefficients are in
/// `0..p`. Equal polynomials therefore compare equal componentwise.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpPolynomial {
    coeffs: Vec<u64>,
}

impl FpPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: u64, p: u64) -> Self {
        Self::from_coeffs(vec![c], p)
    }

    /// x^k
    pub fn x_power(k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        Self { coeffs }
    }

    /// Reduces mod p and strips trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<u64>, p: u64) -> Self {
        for c in &mut coeffs {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Horner evaluation at x0.
    pub fn eval(&self, x0: u64, p: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = add_mod(mul_mod(acc, x0, p), c, p);
        }
        acc
    }

    /// Quotient by x. The constant term must be zero.
    pub(crate) fn div_x(&self) -> Self {
        debug_assert!(self.coeff(0) == 0);
        Self {
            coeffs: self.coeffs.iter().skip(1).copied().collect(),
        }
    }

    /// Quotient by D = 1 - 4x, or None when D does not divide self.
    /// Divisibility is equivalent to vanishing at the root 1/4 of D.
    pub(crate) fn div_d(&self, p: u64) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let inv4 = fp_inverse(4 % p, p).expect("p not divisible by 2");
        if self.eval(inv4, p) != 0 {
            return None;
        }
        // (1 - 4x) * q = f gives q_0 = f_0 and q_i = f_i + 4 q_{i-1}.
        let mut q = vec![0u64; self.coeffs.len() - 1];
        let mut prev = 0u64;
        for (i, slot) in q.iter_mut().enumerate() {
            *slot = add_mod(self.coeffs[i], mul_mod(4 % p, prev, p), p);
            prev = *slot;
        }
        Some(Self::from_coeffs(q, p))
    }
}

/// Schoolbook product; plenty at the degrees the automaton produces.
pub fn poly_mul(f: &FpPolynomial, g: &FpPolynomial, p: u64) -> FpPolynomial {
    if f.is_zero() || g.is_zero() {
        return FpPolynomial::zero();
    }
    let mut out = vec![0u64; f.coeffs.len() + g.coeffs.len() - 1];
    for (i, &a) in f.coeffs.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.coeffs.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(a, b, p), p);
        }
    }
    FpPolynomial::from_coeffs(out, p)
}

/// Section operator: coefficient i of the result is coefficient p*i + r
/// of f. Inverse direction of interleaving f into its p residue classes.
pub fn poly_cartier(r: u32, f: &FpPolynomial, p: u64) -> FpPolynomial {
    debug_assert!((r as u64) < p);
    let mut out = Vec::new();
    let mut idx = r as usize;
    while idx < f.coeffs.len() {
        out.push(f.coeffs[idx]);
        idx += p as usize;
    }
    FpPolynomial::from_coeffs(out, p)
}

/// (1 - 4x)^k over F_p, memoized per (k, p). The cache is a plain mutex
/// map: reads clone the stored value, misses are computed inside the lock.
pub fn poly_d_power(k: u64, p: u64) -> FpPolynomial {
    static CACHE: Mutex<Option<HashMap<(u64, u64), FpPolynomial>>> = Mutex::new(None);
    let mut guard = CACHE.lock().expect("d-power cache poisoned");
    let cache = guard.get_or_insert_with(HashMap::new);
    if let Some(f) = cache.get(&(k, p)) {
        return f.clone();
    }
    let d = FpPolynomial::from_coeffs(vec![1, p - 4 % p], p);
    let mut acc = FpPolynomial::constant(1, p);
    let mut base = d;
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul(&acc, &base, p);
        }
        base = poly_mul(&base, &base, p);
        e >>= 1;
    }
    cache.insert((k, p), acc.clone());
    acc
}

/// Primes in [2, n], by trial testing; n is small everywhere we call this.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&q| is_prime(q)).collect()
}
