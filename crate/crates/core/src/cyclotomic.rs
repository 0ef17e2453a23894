//! Integer combinations of n-th roots of unity with exact equality in `ℤ[ζₙ]`.
//!
//! A [`CyclotomicSum`] is stored as an element of the group ring `ℤ[x]/(xⁿ - 1)`
//! (coefficient of `ζᵏ` at position `k`). Two sums are equal when their
//! difference is divisible by `Φₙ`, which is decided by exact polynomial
//! remainder; nothing is ever evaluated numerically.

use std::collections::HashMap;
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::params::divisors;

/// Coefficients of `Φₙ`, constant term first.
pub type Polynomial = Vec<i64>;

fn cache() -> &'static Mutex<HashMap<usize, Arc<Polynomial>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Polynomial>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Exact quotient of `num` by the monic polynomial `den`.
fn exact_div_monic(num: &[i64], den: &[i64]) -> Polynomial {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn];
        if c == 0 {
            continue;
        }
        quot[k] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[k + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "division was not exact");
    quot
}

/// `Φₙ`, built as `(xⁿ - 1) / ∏_{d | n, d < n} Φ_d`. Results are memoized.
///
/// # Panics
///
/// Panics if `n == 0`.
pub fn cyclotomic_polynomial(n: usize) -> Arc<Polynomial> {
    assert!(n > 0, "cyclotomic polynomial of order 0");
    if let Some(p) = cache().lock().unwrap().get(&n) {
        return Arc::clone(p);
    }
    let mut poly = vec![0i64; n + 1];
    poly[0] = -1;
    poly[n] = 1;
    for d in divisors(n as u64) {
        let d = d as usize;
        if d < n {
            poly = exact_div_monic(&poly, &cyclotomic_polynomial(d));
        }
    }
    let poly = Arc::new(poly);
    cache()
        .lock()
        .unwrap()
        .entry(n)
        .or_insert_with(|| Arc::clone(&poly));
    poly
}

#[derive(Debug, Clone)]
pub struct CyclotomicSum {
    coeffs: Vec<i64>,
}

impl CyclotomicSum {
    pub fn zero(order: usize) -> Self {
        assert!(order > 0, "roots of unity of order 0");
        Self {
            coeffs: vec![0; order],
        }
    }

    pub fn constant(order: usize, c: i64) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `Σ coeffs[k] ζᵏ`; the vector length is the order.
    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        assert!(!coeffs.is_empty(), "roots of unity of order 0");
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Adds `c ζᵉ`; negative exponents wrap.
    pub fn add_term(&mut self, exponent: i64, c: i64) {
        let n = self.order() as i64;
        self.coeffs[exponent.rem_euclid(n) as usize] += c;
    }

    /// Canonical remainder modulo `Φₙ`, of length `φ(n)`.
    pub fn reduced(&self) -> Vec<i128> {
        let phi = cyclotomic_polynomial(self.order());
        let deg = phi.len() - 1;
        let terms: Vec<(usize, i128)> = phi[..deg]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| (j, i128::from(c)))
            .collect();
        let mut v: Vec<i128> = self.coeffs.iter().map(|&c| i128::from(c)).collect();
        for top in (deg..v.len()).rev() {
            let c = v[top];
            if c == 0 {
                continue;
            }
            v[top] = 0;
            let base = top - deg;
            for &(j, pj) in &terms {
                v[base + j] -= c * pj;
            }
        }
        v.truncate(deg);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|&c| c == 0)
    }

    /// Equality in `ℤ[ζₙ]`.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok((self - other).is_zero())
    }
}

impl Add for &CyclotomicSum {
    type Output = CyclotomicSum;

    fn add(self, rhs: &CyclotomicSum) -> CyclotomicSum {
        assert_eq!(self.order(), rhs.order(), "cyclotomic orders differ");
        CyclotomicSum {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CyclotomicSum {
    type Output = CyclotomicSum;

    fn sub(self, rhs: &CyclotomicSum) -> CyclotomicSum {
        self + &(-rhs)
    }
}

impl Neg for &CyclotomicSum {
    type Output = CyclotomicSum;

    fn neg(self) -> CyclotomicSum {
        CyclotomicSum {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CyclotomicSum {
    type Output = CyclotomicSum;

    fn neg(self) -> CyclotomicSum {
        -&self
    }
}

/// `Σ signs[t] ζ^exponents[t]` with `ζ` a primitive n-th root of unity.
/// Signs are `+1` or `-1`.
pub fn root_power_sum(n: usize, exponents: &[i64], signs: &[i8]) -> Result<CyclotomicSum> {
    if exponents.len() != signs.len() {
        return Err(Error::LengthMismatch {
            exponents: exponents.len(),
            signs: signs.len(),
        });
    }
    let mut s = CyclotomicSum::zero(n);
    for (&e, &sg) in exponents.iter().zip(signs) {
        s.add_term(e, i64::from(sg.signum()));
    }
    Ok(s)
}

/// `ζᵃ + ζ⁻ᵃ + ζᵃᵏ + ζ⁻ᵃᵏ`.
pub fn four_term_sum(n: usize, a: i64, k: i64) -> CyclotomicSum {
    let n_i = n as i64;
    let a = a.rem_euclid(n_i);
    let ak = (a * k.rem_euclid(n_i)) % n_i;
    let mut s = CyclotomicSum::zero(n);
    for e in [a, -a, ak, -ak] {
        s.add_term(e, 1);
    }
    s
}

/// `ζⁱ + ζ⁻ⁱ = ζʲ + ζ⁻ʲ` holds exactly when `i ≡ ±j (mod n)`.
pub fn pair_equality(n: u64, i: i64, j: i64) -> bool {
    let n = n as i64;
    let (i, j) = (i.rem_euclid(n), j.rem_euclid(n));
    i == j || (i + j) % n == 0
}

/// Outcome of comparing the four-term sums for indices `i` and `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourTermCheck {
    /// The sums agree for both `l = 1` and `l = k - 1`, checked in `ℤ[ζₙ]`.
    pub identity_holds: bool,
    /// `i ≡ ±j` or `i ≡ ±jk (mod n)`.
    pub congruence_holds: bool,
}

impl FourTermCheck {
    pub fn consistent(&self) -> bool {
        self.identity_holds == self.congruence_holds
    }
}

/// For `k² ≡ -1 (mod n)`, compares
/// `ζ^{il} + ζ^{-il} + ζ^{ilk} + ζ^{-ilk}` with the same expression in `j`
/// at `l = 1` and `l = k - 1`, and separately evaluates the congruence
/// condition that should be equivalent to it.
pub fn four_term_identity(n: u64, k: i64, i: i64, j: i64) -> Result<FourTermCheck> {
    let n_i = n as i64;
    if n == 0 || (k.rem_euclid(n_i) * k.rem_euclid(n_i) + 1) % n_i != 0 {
        return Err(Error::NotSquareRootOfMinusOne { k, n });
    }
    let order = n as usize;
    let mut identity_holds = true;
    for l in [1, k - 1] {
        let l = l.rem_euclid(n_i);
        let lhs = four_term_sum(order, i.rem_euclid(n_i) * l % n_i, k);
        let rhs = four_term_sum(order, j.rem_euclid(n_i) * l % n_i, k);
        if !lhs.equals(&rhs)? {
            identity_holds = false;
            break;
        }
    }
    let jk = j.rem_euclid(n_i) * k.rem_euclid(n_i) % n_i;
    let congruence_holds = pair_equality(n, i, j) || pair_equality(n, i, jk);
    Ok(FourTermCheck {
        identity_holds,
        congruence_holds,
    })
}

/// All `k` in `[0, n)` with `k² ≡ -1 (mod n)`.
pub fn square_roots_of_minus_one(n: u64) -> Vec<i64> {
    (0..n)
        .filter(|&k| (k * k + 1) % n == 0)
        .map(|k| k as i64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Direct evaluation `Φₙ(1)` etc. from the coefficient vector.
    fn eval(poly: &[i64], x: i64) -> i64 {
        poly.iter().rev().fold(0, |acc, &c| acc * x + c)
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
    }

    #[test]
    fn phi_105_has_a_minus_two() {
        let p = cyclotomic_polynomial(105);
        assert_eq!(p.len() - 1, 48);
        assert_eq!(p[7], -2);
        assert_eq!(p[41], -2);
        // Every smaller order stays within {-1, 0, 1}.
        for n in 1..105 {
            assert!(
                cyclotomic_polynomial(n).iter().all(|c| c.abs() <= 1),
                "n = {n}"
            );
        }
    }

    #[test]
    fn degree_sums_and_values_at_one() {
        for n in 1..=300usize {
            let total: usize = divisors(n as u64)
                .into_iter()
                .map(|d| cyclotomic_polynomial(d as usize).len() - 1)
                .sum();
            assert_eq!(total, n);
            if n > 1 {
                let ps: Vec<u64> = divisors(n as u64)
                    .into_iter()
                    .filter(|&d| crate::params::is_prime(d))
                    .collect();
                let expected = if ps.len() == 1 { ps[0] as i64 } else { 1 };
                assert_eq!(eval(&cyclotomic_polynomial(n), 1), expected, "n = {n}");
            }
        }
    }

    #[test]
    fn root_power_sum_examples() {
        let s = root_power_sum(7, &[1, -1], &[1, 1]).unwrap();
        assert_eq!(s.coeffs(), &[0, 1, 0, 0, 0, 0, 1]);
        let one = root_power_sum(13, &[0], &[1]).unwrap();
        assert!(one.equals(&CyclotomicSum::constant(13, 1)).unwrap());
        let prim = root_power_sum(5, &[1, 2, 3, 4], &[1, 1, 1, 1]).unwrap();
        assert!(prim.equals(&CyclotomicSum::constant(5, -1)).unwrap());
        assert!(root_power_sum(5, &[1, 2], &[1]).is_err());
    }

    #[test]
    fn equality_examples() {
        let a = root_power_sum(7, &[1, 6], &[1, 1]).unwrap();
        assert!(a.equals(&a).unwrap());
        let full = root_power_sum(5, &[0, 1, 2, 3, 4], &[1; 5]).unwrap();
        assert!(full.equals(&CyclotomicSum::zero(5)).unwrap());
        let b = root_power_sum(7, &[2, 5], &[1, 1]).unwrap();
        assert!(!a.equals(&b).unwrap());
        assert_eq!(
            a.equals(&CyclotomicSum::zero(5)),
            Err(Error::OrderMismatch { left: 7, right: 5 })
        );
    }

    #[test]
    fn four_term_examples() {
        let c = four_term_identity(13, 5, 1, 5).unwrap();
        assert_eq!((c.identity_holds, c.congruence_holds), (true, true));
        let c = four_term_identity(13, 5, 1, 2).unwrap();
        assert_eq!((c.identity_holds, c.congruence_holds), (false, false));
        let c = four_term_identity(13, 5, 1, 1).unwrap();
        assert_eq!((c.identity_holds, c.congruence_holds), (true, true));
        assert!(four_term_identity(13, 4, 1, 1).is_err());
    }

    #[test]
    fn pair_equality_examples() {
        assert!(pair_equality(7, 2, 5));
        assert!(!pair_equality(7, 1, 2));
        assert!(!pair_equality(2, 0, 1));
        let lhs = root_power_sum(2, &[0, 0], &[1, 1]).unwrap();
        let rhs = root_power_sum(2, &[1, -1], &[1, 1]).unwrap();
        assert!(!lhs.equals(&rhs).unwrap());
    }

    #[test]
    fn pair_equality_agrees_with_exact_equality() {
        // Remainders mod Φₙ are canonical, so comparing them is equality.
        for n in 1..=200u64 {
            let order = n as usize;
            let reduced: Vec<Vec<i128>> = (0..n as i64)
                .map(|i| root_power_sum(order, &[i, -i], &[1, 1]).unwrap().reduced())
                .collect();
            for i in 0..n as i64 {
                for j in 0..n as i64 {
                    let exact = reduced[i as usize] == reduced[j as usize];
                    assert_eq!(exact, pair_equality(n, i, j), "{n} {i} {j}");
                }
            }
        }
    }

    fn arb_sum(n: usize) -> impl Strategy<Value = CyclotomicSum> {
        prop::collection::vec(-5i64..=5, n).prop_map(CyclotomicSum::from_coeffs)
    }

    proptest! {
        #[test]
        fn equality_ignores_multiples_of_phi(
            (s, shift, mult) in (1usize..120).prop_flat_map(|n| (arb_sum(n), 0..n, -4i64..=4))
        ) {
            let n = s.order();
            let phi = cyclotomic_polynomial(n);
            let mut t = s.clone();
            for (j, &c) in phi.iter().enumerate() {
                t.add_term((j + shift) as i64, mult * c);
            }
            prop_assert!(s.equals(&t).unwrap());
            prop_assert!(t.equals(&s).unwrap());
        }

        #[test]
        fn equality_is_transitive(
            (a, b, c) in (1usize..60).prop_flat_map(|n| (arb_sum(n), arb_sum(n), arb_sum(n)))
        ) {
            prop_assert!(a.equals(&a).unwrap());
            prop_assert_eq!(a.equals(&b).unwrap(), b.equals(&a).unwrap());
            if a.equals(&b).unwrap() && b.equals(&c).unwrap() {
                prop_assert!(a.equals(&c).unwrap());
            }
        }

        #[test]
        fn four_term_identity_matches_congruence(n in 1u64..=200, i in any::<i64>(), j in any::<i64>()) {
            let i = i.rem_euclid(n as i64);
            let j = j.rem_euclid(n as i64);
            for k in square_roots_of_minus_one(n) {
                prop_assert!(four_term_identity(n, k, i, j).unwrap().consistent());
            }
        }
    }
}
