//! Stabilizers of irreducible characters of `S` inside `Out(S) = ⟨φ⟩`.
//!
//! `φ` has order `2f + 1`, so the stabilizer of a character is `⟨φⁿ⟩` for a
//! divisor `n` of `2f + 1`; we call the least such `n` the character's exact
//! stabilizer exponent. It equals the size of the character's `⟨φ⟩`-orbit.
//!
//! The closed-form side consists of the divisibility predicates
//! ([`x_invariant`], [`y_invariant`], [`z_invariant`]) and witness
//! constructors with their exception tables. The independent side is
//! [`orbit_oracle`], which walks the doubling map on torus residues.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::{
    canonical_indices, canonicalize, family_count, phi_power_on_label, CharacterLabel, Family,
    FastTorus,
};
use crate::check_budget;
use crate::error::{Error, Result};
use crate::numtheory::{euclid_gcd, shifted_q2, Sign, SplitTorus};
use crate::params::SuzukiParams;

/// A label together with its exact stabilizer exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerDescriptor {
    pub label: CharacterLabel,
    pub exponent: u32,
}

fn pow2_minus_1(n: u32) -> BigUint {
    (BigUint::one() << n as usize) - 1u32
}

fn split_torus(family: Family) -> Option<SplitTorus> {
    match family {
        Family::Y => Some(SplitTorus::Plus),
        Family::Z => Some(SplitTorus::Minus),
        _ => None,
    }
}

/// `X_i` is fixed by `φⁿ` iff `q² - 1 | (2ⁿ - 1) i`.
pub fn x_invariant(p: &SuzukiParams, i: &BigUint, n: u32) -> Result<bool> {
    p.require_divisor(n)?;
    let max = p.q2() / 2u32 - 1u32;
    if i.is_zero() || i > &max {
        return Err(Error::InvalidIndex {
            family: Family::X,
            index: i.to_string(),
        });
    }
    Ok((pow2_minus_1(n) * i % p.a0()).is_zero())
}

fn split_invariant(p: &SuzukiParams, torus: SplitTorus, j: &BigUint, n: u32) -> Result<bool> {
    p.require_divisor(n)?;
    let t = torus.order(p);
    if j.is_zero() || j >= t {
        let family = match torus {
            SplitTorus::Plus => Family::Y,
            SplitTorus::Minus => Family::Z,
        };
        return Err(Error::InvalidIndex {
            family,
            index: j.to_string(),
        });
    }
    Ok(Sign::BOTH
        .iter()
        .any(|&s| (shifted_q2(p, n, s) * j % t).is_zero()))
}

/// `Y_j` is fixed by `φⁿ` iff `q² + r + 1` divides `(q² - 2ⁿ) j` or `(q² + 2ⁿ) j`.
pub fn y_invariant(p: &SuzukiParams, j: &BigUint, n: u32) -> Result<bool> {
    split_invariant(p, SplitTorus::Plus, j, n)
}

/// `Z_k` is fixed by `φⁿ` iff `q² - r + 1` divides `(q² - 2ⁿ) k` or `(q² + 2ⁿ) k`.
pub fn z_invariant(p: &SuzukiParams, k: &BigUint, n: u32) -> Result<bool> {
    split_invariant(p, SplitTorus::Minus, k, n)
}

/// Whether `label` is fixed by `φⁿ`. `1`, `St` and `W` are always fixed.
pub fn is_invariant(p: &SuzukiParams, label: &CharacterLabel, n: u32) -> Result<bool> {
    match label.family() {
        Family::X => x_invariant(p, label.index(), n),
        Family::Y => y_invariant(p, label.index(), n),
        Family::Z => z_invariant(p, label.index(), n),
        _ => {
            p.require_divisor(n)?;
            Ok(true)
        }
    }
}

/// `X_i` with `i = (q² - 1)/(2ⁿ - 1)` has stabilizer exactly `⟨φⁿ⟩`, except
/// that no `X_i` is fixed by `φ` itself.
pub fn x_with_stabilizer(p: &SuzukiParams, n: u32) -> Result<Option<BigUint>> {
    p.require_divisor(n)?;
    if n == 1 {
        return Ok(None);
    }
    Ok(Some(p.a0() / pow2_minus_1(n)))
}

/// `(n, f mod 4)` pairs for which no `Y_j` has stabilizer exactly `⟨φⁿ⟩`.
pub fn y_exception(f: u32, n: u32) -> bool {
    matches!((n, f % 4), (1, 1 | 2) | (3, 0 | 3))
}

/// `(n, f mod 4)` pairs for which no `Z_k` has stabilizer exactly `⟨φⁿ⟩`.
pub fn z_exception(f: u32, n: u32) -> bool {
    matches!((n, f % 4), (1, 0 | 3) | (3, 1 | 2))
}

fn split_with_stabilizer(p: &SuzukiParams, family: Family, n: u32) -> Result<Option<BigUint>> {
    p.require_divisor(n)?;
    let torus = split_torus(family).expect("Y or Z");
    let exceptional = match family {
        Family::Y => y_exception(p.f(), n),
        _ => z_exception(p.f(), n),
    };
    if exceptional {
        return Ok(None);
    }
    if n == p.out_order() {
        return Ok(Some(BigUint::one()));
    }
    let t = torus.order(p);
    for sign in Sign::BOTH {
        let g = euclid_gcd(t, &shifted_q2(p, n, sign));
        if !g.is_one() {
            let raw = (t / g).into();
            return canonicalize(p, family, &raw).map(Some);
        }
    }
    Ok(None)
}

/// A `Y_j` whose stabilizer in `⟨φ⟩` is exactly `⟨φⁿ⟩`, if one exists.
///
/// `j = (q² + r + 1) / gcd(q² + r + 1, q² ∓ 2ⁿ)` with the sign that makes the
/// gcd nontrivial, canonicalized.
pub fn y_with_stabilizer(p: &SuzukiParams, n: u32) -> Result<Option<BigUint>> {
    split_with_stabilizer(p, Family::Y, n)
}

/// The `Z` counterpart of [`y_with_stabilizer`], over `q² - r + 1`.
pub fn z_with_stabilizer(p: &SuzukiParams, n: u32) -> Result<Option<BigUint>> {
    split_with_stabilizer(p, Family::Z, n)
}

/// Witness label in `family` with exact stabilizer exponent `n`.
pub fn witness(p: &SuzukiParams, family: Family, n: u32) -> Result<Option<CharacterLabel>> {
    let index = match family {
        Family::X => x_with_stabilizer(p, n)?,
        Family::Y => y_with_stabilizer(p, n)?,
        Family::Z => z_with_stabilizer(p, n)?,
        Family::One | Family::St | Family::W => {
            p.require_divisor(n)?;
            let label = match family {
                Family::One => CharacterLabel::trivial(),
                Family::St => CharacterLabel::steinberg(),
                _ => CharacterLabel::new(p, Family::W, BigUint::one())?,
            };
            return Ok((n == 1).then_some(label));
        }
    };
    index.map(|i| CharacterLabel::new(p, family, i)).transpose()
}

/// Least divisor `n` of `2f + 1` with `label` fixed by `φⁿ`.
///
/// Computed from the invariance predicates and from the orbit length under
/// [`phi_power_on_label`]; the two must agree.
pub fn exact_stabilizer_exponent(p: &SuzukiParams, label: &CharacterLabel) -> Result<u32> {
    let mut by_predicate = None;
    for n in p.outer_divisors() {
        if is_invariant(p, label, n)? {
            by_predicate = Some(n);
            break;
        }
    }
    let by_predicate = by_predicate.ok_or_else(|| {
        Error::Inconsistent(format!("{label} is not fixed by φ^(2f+1) at f={}", p.f()))
    })?;

    let mut orbit = 1u32;
    let mut image = phi_power_on_label(p, label, 1);
    while &image != label {
        orbit += 1;
        if orbit > p.out_order() {
            break;
        }
        image = phi_power_on_label(p, &image, 1);
    }
    if orbit != by_predicate {
        return Err(Error::Inconsistent(format!(
            "{label} at f={}: invariance predicates give {by_predicate}, orbit length {orbit}",
            p.f()
        )));
    }
    Ok(orbit)
}

pub fn describe(p: &SuzukiParams, label: CharacterLabel) -> Result<StabilizerDescriptor> {
    let exponent = exact_stabilizer_exponent(p, &label)?;
    Ok(StabilizerDescriptor { label, exponent })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrbitCount {
    pub stabilizer_exponent: u32,
    pub count: u64,
}

/// Number of labels of one family per exact stabilizer exponent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub f: u32,
    pub family: String,
    pub orbits: Vec<OrbitCount>,
}

impl OrbitReport {
    pub fn counts(&self) -> BTreeMap<u32, u64> {
        self.orbits
            .iter()
            .map(|o| (o.stabilizer_exponent, o.count))
            .collect()
    }

    pub fn count(&self, exponent: u32) -> u64 {
        self.orbits
            .iter()
            .find(|o| o.stabilizer_exponent == exponent)
            .map_or(0, |o| o.count)
    }

    pub fn total(&self) -> u64 {
        self.orbits.iter().map(|o| o.count).sum()
    }
}

/// Length of the orbit of residue `x` under doubling, modulo its class.
fn doubling_orbit(torus: &FastTorus, x: u64, limit: u32) -> u32 {
    let mut y = x;
    for k in 1..=limit {
        y = torus.double(y);
        if torus.same_class(x, y) {
            return k;
        }
    }
    0
}

/// Exhaustive stabilizer statistics for one family, by walking the doubling
/// map over every canonical index. Requires `f <= ORACLE_MAX_F`.
pub fn orbit_oracle(p: &SuzukiParams, family: Family) -> Result<OrbitReport> {
    check_budget(p)?;
    let out = p.out_order();
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    match family.torus() {
        None => {
            let n: u64 = family_count(p, family).try_into().expect("small family");
            counts.insert(1, n);
        }
        Some(_) => {
            let torus = FastTorus::new(p, family)?;
            let reps = canonical_indices(p, family)?;
            counts = reps
                .par_iter()
                .fold(BTreeMap::new, |mut acc: BTreeMap<u32, u64>, &x| {
                    *acc.entry(doubling_orbit(&torus, x, out)).or_default() += 1;
                    acc
                })
                .reduce(BTreeMap::new, |mut a, b| {
                    for (k, v) in b {
                        *a.entry(k).or_default() += v;
                    }
                    a
                });
        }
    }
    if let Some(&bad) = counts.keys().find(|&&k| k == 0 || !out.is_multiple_of(k)) {
        return Err(Error::Inconsistent(format!(
            "orbit length {bad} does not divide {out} at f={}",
            p.f()
        )));
    }
    Ok(OrbitReport {
        f: p.f(),
        family: family.to_string(),
        orbits: counts
            .into_iter()
            .map(|(stabilizer_exponent, count)| OrbitCount {
                stabilizer_exponent,
                count,
            })
            .collect(),
    })
}

/// Every label of `family` with its exact stabilizer exponent, from the
/// doubling walk. Requires the oracle budget.
pub fn orbit_exponents(p: &SuzukiParams, family: Family) -> Result<Vec<(u64, u32)>> {
    check_budget(p)?;
    let torus = FastTorus::new(p, family)?;
    let out = p.out_order();
    Ok(canonical_indices(p, family)?
        .par_iter()
        .map(|&x| (x, doubling_orbit(&torus, x, out)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn params(f: u32) -> SuzukiParams {
        SuzukiParams::new(f).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn label(p: &SuzukiParams, family: Family, i: u64) -> CharacterLabel {
        CharacterLabel::new(p, family, big(i)).unwrap()
    }

    #[test]
    fn x_invariance_examples() {
        assert!(x_invariant(&params(4), &big(73), 3).unwrap());
        assert!(!x_invariant(&params(1), &big(1), 1).unwrap());
        for f in 1..=6 {
            let p = params(f);
            for i in 1..=(1u64 << (2 * f)) - 1 {
                assert!(x_invariant(&p, &big(i), p.out_order()).unwrap());
            }
        }
        assert!(x_invariant(&params(1), &big(4), 1).is_err());
        assert!(x_invariant(&params(1), &big(1), 2).is_err());
    }

    #[test]
    fn x_witness_examples() {
        assert_eq!(x_with_stabilizer(&params(4), 3).unwrap(), Some(big(73)));
        assert_eq!(x_with_stabilizer(&params(1), 1).unwrap(), None);
        assert_eq!(x_with_stabilizer(&params(7), 5).unwrap(), Some(big(1057)));
        let p = params(7);
        assert_eq!(
            exact_stabilizer_exponent(&p, &label(&p, Family::X, 1057)).unwrap(),
            5
        );
        assert!(x_with_stabilizer(&params(7), 7).is_err());
    }

    #[test]
    fn y_invariance_examples() {
        assert!(y_invariant(&params(1), &big(1), 3).unwrap());
        assert!(!y_invariant(&params(1), &big(1), 1).unwrap());
        let p = params(4);
        let j = p.a1() / euclid_gcd(p.a1(), &shifted_q2(&p, 3, Sign::Plus));
        assert!(y_invariant(&p, &j, 3).unwrap());
    }

    #[test]
    fn z_invariance_examples() {
        assert!(z_invariant(&params(1), &big(1), 1).unwrap());
        assert!(!z_invariant(&params(2), &big(1), 1).unwrap());
        assert!(z_invariant(&params(1), &big(1), 3).unwrap());
        assert!(z_invariant(&params(1), &big(5), 1).is_err());
    }

    #[test]
    fn y_witness_examples() {
        assert_eq!(y_with_stabilizer(&params(1), 1).unwrap(), None);
        let p = params(4);
        assert_eq!(y_with_stabilizer(&p, 3).unwrap(), None);
        let j = p.a1() / 5u32;
        assert!(y_invariant(&p, &j, 1).unwrap());
        let p = params(3);
        let j = y_with_stabilizer(&p, 1).unwrap().unwrap();
        assert_eq!(
            exact_stabilizer_exponent(&p, &label(&p, Family::Y, j.try_into().unwrap())).unwrap(),
            1
        );
    }

    #[test]
    fn z_witness_examples() {
        assert_eq!(z_with_stabilizer(&params(1), 1).unwrap(), Some(big(1)));
        assert_eq!(z_with_stabilizer(&params(4), 1).unwrap(), None);
        assert!(z_with_stabilizer(&params(2), 3).is_err());
    }

    #[test]
    fn exact_exponents_at_f1() {
        let p = params(1);
        assert_eq!(
            exact_stabilizer_exponent(&p, &label(&p, Family::X, 1)).unwrap(),
            3
        );
        assert_eq!(
            exact_stabilizer_exponent(&p, &label(&p, Family::Z, 1)).unwrap(),
            1
        );
        assert_eq!(
            exact_stabilizer_exponent(&p, &label(&p, Family::W, 1)).unwrap(),
            1
        );
    }

    #[test]
    fn oracle_at_f1() {
        let p = params(1);
        let counts = |fam| orbit_oracle(&p, fam).unwrap().counts();
        assert_eq!(counts(Family::X), BTreeMap::from([(3, 3)]));
        assert_eq!(counts(Family::Y), BTreeMap::from([(3, 3)]));
        assert_eq!(counts(Family::Z), BTreeMap::from([(1, 1)]));
        assert_eq!(counts(Family::W), BTreeMap::from([(1, 2)]));
        assert_eq!(
            orbit_oracle(&params(11), Family::X),
            Err(Error::BudgetExceeded { f: 11, max: 10 })
        );
    }

    #[test]
    fn oracle_at_f4_shows_the_y_exception() {
        let r = orbit_oracle(&params(4), Family::Y).unwrap();
        assert!(r.count(9) > 0);
        assert_eq!(r.count(3), 0);
        assert_eq!(r.count(1), 1);
    }

    #[test]
    fn predicates_agree_with_doubling_walk() {
        for f in 1..=7 {
            let p = params(f);
            for fam in Family::SEMISIMPLE {
                for (x, m) in orbit_exponents(&p, fam).unwrap() {
                    let l = label(&p, fam, x);
                    for n in p.outer_divisors() {
                        assert_eq!(
                            is_invariant(&p, &l, n).unwrap(),
                            n % m == 0,
                            "f={f} {l} n={n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn exception_tables_are_mirror_images() {
        for f in 0..8 {
            let mirror = match f % 4 {
                0 => 1,
                1 => 0,
                2 => 3,
                _ => 2,
            };
            for n in [1, 3, 5, 9] {
                assert_eq!(y_exception(f, n), z_exception(mirror, n));
            }
        }
    }

    #[test]
    fn split_tori_never_divide_small_shifts() {
        for f in 1..=64 {
            let p = params(f);
            for n in p.proper_outer_divisors() {
                for s in Sign::BOTH {
                    let shift = shifted_q2(&p, n, s);
                    assert!(!(&shift % p.a1()).is_zero());
                    // Sz(8) is the lone exception: 5 | 8 + 2.
                    let divides = (&shift % p.a2()).is_zero();
                    assert_eq!(divides, (f, n, s) == (1, 1, Sign::Plus), "f={f} n={n}");
                }
            }
        }
    }

    #[test]
    fn witnesses_are_canonical() {
        let p = params(7);
        for n in p.outer_divisors() {
            for fam in Family::SEMISIMPLE {
                if let Some(l) = witness(&p, fam, n).unwrap() {
                    let raw = BigInt::from(l.index().clone());
                    assert_eq!(&canonicalize(&p, fam, &raw).unwrap(), l.index());
                }
            }
        }
    }
}
