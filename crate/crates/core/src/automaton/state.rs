//! Canonical algebraic automaton states.
//!
//! A state denotes the formal power series (U + V*G) / (x^a * D^b) where
//! G = sqrt(1-4x) with G(0) = 1 and D = 1-4x = G^2. The pair {1, G} is a
//! basis of the quadratic extension of F_p(x), so once (U, V) is in lowest
//! terms against x and D the quadruple is the unique representation of its
//! series, and state equality is componentwise equality.

use crate::algebra::{
    add_mod, mul_mod, poly_cartier, poly_d_power, poly_mul, FpPolynomial, Residue,
};
use crate::oracle::{catalan_mod, lucas_binomial};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AutomatonState {
    pub u: FpPolynomial,
    pub v: FpPolynomial,
    /// power of x in the denominator
    pub a: u32,
    /// power of D = 1-4x in the denominator
    pub b: u32,
}

impl AutomatonState {
    /// Reduce to lowest terms: cancel common factors of x against a and of
    /// D against b. x and D are coprime, so the two loops are independent
    /// and the result is unique.
    pub(crate) fn canonical(
        mut u: FpPolynomial,
        mut v: FpPolynomial,
        mut a: u32,
        mut b: u32,
        p: u64,
    ) -> Self {
        if u.is_zero() && v.is_zero() {
            return Self { u, v, a: 0, b: 0 };
        }
        while a > 0 && u.coeff(0) == 0 && v.coeff(0) == 0 {
            u = u.div_x();
            v = v.div_x();
            a -= 1;
        }
        while b > 0 {
            match (u.div_d(p), v.div_d(p)) {
                (Some(nu), Some(nv)) => {
                    u = nu;
                    v = nv;
                    b -= 1;
                }
                _ => break,
            }
        }
        Self { u, v, a, b }
    }

    pub fn is_zero_series(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }
}

/// The state of the Catalan generating function C(x) = (1 - G) / (2x),
/// already in lowest terms: ((p+1)/2 - (p+1)/2 * G) / x.
pub fn initial_state(p: u64) -> AutomatonState {
    let inv2 = p.div_ceil(2);
    AutomatonState {
        u: FpPolynomial::constant(inv2, p),
        v: FpPolynomial::constant(p - inv2, p),
        a: 1,
        b: 0,
    }
}

/// The section Lambda_r of the state's series, in canonical form.
///
/// Writing the series over the p-th-power denominator x^{pa} D^{pb} and
/// using Lambda_r(g^p h) = g Lambda_r(h) together with G^p = D^{(p-1)/2} G:
/// U' = Lambda_r(U x^{(p-1)a} D^{(p-1)b}) * D,
/// V' = Lambda_r(V x^{(p-1)a} D^{(p-1)b + (p+1)/2}),
/// over the denominator (a, b+1).
pub fn cartier_transition(s: &AutomatonState, r: u32, p: u64) -> AutomatonState {
    debug_assert!((r as u64) < p);
    let xpow = FpPolynomial::x_power(((p - 1) * s.a as u64) as usize);
    let du = poly_d_power((p - 1) * s.b as u64, p);
    let dv = poly_d_power((p - 1) * s.b as u64 + p.div_ceil(2), p);
    let fu = poly_mul(&poly_mul(&s.u, &xpow, p), &du, p);
    let fv = poly_mul(&poly_mul(&s.v, &xpow, p), &dv, p);
    let nu = poly_mul(&poly_cartier(r, &fu, p), &poly_d_power(1, p), p);
    let nv = poly_cartier(r, &fv, p);
    AutomatonState::canonical(nu, nv, s.a, s.b + 1, p)
}

/// Constant term of the state's series: expand (U + V*G) * D^{-b} as a
/// power series to order a and take the coefficient of x^a. Coefficients
/// below x^a must vanish for the state to be a power series at all.
///
/// G = 1 - 2 * sum_{k>=1} C_{k-1} x^k, and the coefficient of x^k in
/// D^{-b} is binom(b+k-1, k) * 4^k.
pub fn output(s: &AutomatonState, p: u64) -> Result<Residue> {
    let order = s.a as usize;
    let mut g = vec![0u64; order + 1];
    g[0] = 1;
    for (k, gk) in g.iter_mut().enumerate().skip(1) {
        *gk = (p - mul_mod(2, catalan_mod(k as u64 - 1, p), p)) % p;
    }
    // w = U + V*G truncated to x^order
    let mut w = vec![0u64; order + 1];
    for (j, wj) in w.iter_mut().enumerate() {
        let mut acc = s.u.coeff(j);
        for i in 0..=j {
            acc = add_mod(acc, mul_mod(s.v.coeff(i), g[j - i], p), p);
        }
        *wj = acc;
    }
    // fold in D^{-b}
    let mut dinv = vec![0u64; order + 1];
    for (k, dk) in dinv.iter_mut().enumerate() {
        *dk = if k == 0 {
            1
        } else {
            mul_mod(
                lucas_binomial(s.b as u64 + k as u64 - 1, k as u64, p),
                crate::algebra::fp_pow(4, k as u64, p),
                p,
            )
        };
    }
    let mut n = vec![0u64; order + 1];
    for (j, nj) in n.iter_mut().enumerate() {
        let mut acc = 0u64;
        for k in 0..=j {
            acc = add_mod(acc, mul_mod(w[j - k], dinv[k], p), p);
        }
        *nj = acc;
    }
    for (j, &nj) in n.iter().enumerate().take(order) {
        if nj != 0 {
            return Err(Error::NotAPowerSeries { order: j as u32 });
        }
    }
    Ok(n[order])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_state_examples() {
        let s5 = initial_state(5);
        assert_eq!(s5.u.coeffs(), &[3]);
        assert_eq!(s5.v.coeffs(), &[2]);
        assert_eq!((s5.a, s5.b), (1, 0));
        let s7 = initial_state(7);
        assert_eq!(s7.u.coeffs(), &[4]);
        assert_eq!(s7.v.coeffs(), &[3]);
        for p in [5u64, 7, 11, 13, 101] {
            assert_eq!(output(&initial_state(p), p).unwrap(), 1);
        }
    }

    #[test]
    fn transition_outputs_are_catalan_digits() {
        // constant term of Lambda_r(C) is C_r by definition of Lambda_r
        for p in [5u64, 7, 13] {
            let init = initial_state(p);
            for r in 0..p as u32 {
                let t = cartier_transition(&init, r, p);
                assert_eq!(
                    output(&t, p).unwrap(),
                    catalan_mod(r as u64, p),
                    "p={p} r={r}"
                );
            }
        }
    }

    #[test]
    fn transition_examples_p5() {
        let init = initial_state(5);
        assert_eq!(output(&cartier_transition(&init, 3, 5), 5).unwrap(), 0);
        assert_eq!(output(&cartier_transition(&init, 2, 5), 5).unwrap(), 2);
    }

    #[test]
    fn canonical_strips_common_factors() {
        let p = 7u64;
        let base = cartier_transition(&initial_state(p), 1, p);
        let x = FpPolynomial::x_power(1);
        let d = poly_d_power(1, p);
        let blown_u = poly_mul(&poly_mul(&base.u, &x, p), &d, p);
        let blown_v = poly_mul(&poly_mul(&base.v, &x, p), &d, p);
        let reduced = AutomatonState::canonical(blown_u, blown_v, base.a + 1, base.b + 1, p);
        assert_eq!(reduced, base);
    }

    #[test]
    fn canonical_zero_series() {
        let z = AutomatonState::canonical(FpPolynomial::zero(), FpPolynomial::zero(), 2, 3, 5);
        assert!(z.is_zero_series());
        assert_eq!((z.a, z.b), (0, 0));
        assert_eq!(output(&z, 5).unwrap(), 0);
    }

    #[test]
    fn output_rejects_poles() {
        // 1/x is not a power series
        let pole = AutomatonState {
            u: FpPolynomial::constant(1, 5),
            v: FpPolynomial::zero(),
            a: 1,
            b: 0,
        };
        assert_eq!(output(&pole, 5), Err(Error::NotAPowerSeries { order: 0 }));
    }

    #[test]
    fn output_of_plain_constant() {
        for c in 0..5u64 {
            let s = AutomatonState {
                u: FpPolynomial::constant(c, 5),
                v: FpPolynomial::zero(),
                a: 0,
                b: 0,
            };
            assert_eq!(output(&s, 5).unwrap(), c);
        }
    }

    #[test]
    fn output_handles_d_denominator() {
        // G / D = 1/G = sum binom(2k,k) x^k has constant term 1
        let s = AutomatonState {
            u: FpPolynomial::zero(),
            v: FpPolynomial::constant(1, 7),
            a: 0,
            b: 1,
        };
        assert_eq!(output(&s, 7).unwrap(), 1);
    }

    #[test]
    fn two_step_transitions_match_two_digit_indices() {
        // reading digits r0 then r1 must land on a state whose constant
        // term is C_{r0 + p*r1}
        let p = 5u64;
        let init = initial_state(p);
        for r0 in 0..p as u32 {
            for r1 in 0..p as u32 {
                let t = cartier_transition(&cartier_transition(&init, r0, p), r1, p);
                let n = r0 as u64 + p * r1 as u64;
                assert_eq!(output(&t, p).unwrap(), catalan_mod(n, p), "n={n}");
            }
        }
    }
}
