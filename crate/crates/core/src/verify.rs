//! Verification sweeps: every closed form against its independent oracle over
//! a parameter range. Sweeps over `f` run on the ambient rayon pool.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::{canonicalize, Family};
use crate::check_budget;
use crate::cyclotomic::{four_term_sum, pair_equality, square_roots_of_minus_one};
use crate::degrees::{
    cd_closed_form, cd_from_witnesses, cd_oracle, check_degree_count_bound, ExtensionSpec,
};
use crate::error::Result;
use crate::numtheory::{
    coincidence_classify, euclid_gcd, exactly_one_divisible_by_four, gcd_q4_plus1,
    gcd_q4_plus1_two_power, gcd_torus, shifted_q2, CoincidenceCase, Sign, SplitTorus,
};
use crate::params::SuzukiParams;
use crate::stabilizers::{orbit_exponents, orbit_oracle, witness, y_exception, z_exception};
#[cfg(test)]
use crate::ORACLE_MAX_F;

/// Tally of one sweep. `failures` holds human-readable counterexamples,
/// smallest parameters first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub name: String,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl SweepReport {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_owned(),
            ..Self::default()
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn absorb(&mut self, other: SweepReport) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.failures.first().map(String::as_str)
    }
}

fn merge_ordered(name: &str, parts: Vec<SweepReport>) -> SweepReport {
    let mut out = SweepReport::new(name);
    for p in parts {
        out.absorb(p);
    }
    out
}

/// Coincidences found by Euclid alone: `(torus, n_sign, m_sign, value)`.
fn euclid_coincidences(p: &SuzukiParams, m: u32, n: u32) -> Vec<(SplitTorus, Sign, Sign, BigUint)> {
    let mut found = Vec::new();
    for torus in SplitTorus::BOTH {
        let t = torus.order(p);
        for n_sign in Sign::BOTH {
            let d1 = euclid_gcd(t, &shifted_q2(p, n, n_sign));
            if d1 == BigUint::from(1u32) {
                continue;
            }
            for m_sign in Sign::BOTH {
                if euclid_gcd(t, &shifted_q2(p, m, m_sign)) == d1 {
                    found.push((torus, n_sign, m_sign, d1.clone()));
                }
            }
        }
    }
    found
}

fn gcd_identities_for(f: u32) -> Result<SweepReport> {
    let mut rep = SweepReport::new("gcd identities");
    let p = SuzukiParams::new(f)?;
    let q4_plus_1 = p.q4_plus_1();
    let proper = p.proper_outer_divisors();
    for &n in &proper {
        rep.check(exactly_one_divisible_by_four(f, n), || {
            format!("f={f} n={n}: not exactly one of 2f±n+1 divisible by 4")
        });
        for sign in Sign::BOTH {
            let shift = shifted_q2(&p, n, sign);
            let closed = gcd_q4_plus1(&p, n, sign)?.value;
            let oracle = euclid_gcd(&q4_plus_1, &shift);
            rep.check(closed == oracle, || {
                format!("f={f} n={n}: gcd(q^4+1, q^2{sign}2^n) closed {closed} vs Euclid {oracle}")
            });
            let two_power = match sign {
                Sign::Plus => (BigUint::from(1u32) << n as usize) + 1u32,
                Sign::Minus => (BigUint::from(1u32) << n as usize) - 1u32,
            };
            let closed = gcd_q4_plus1_two_power(&p, n, sign)?.value;
            let oracle = euclid_gcd(&q4_plus_1, &two_power);
            rep.check(closed == oracle, || {
                format!("f={f} n={n}: gcd(q^4+1, 2^n{sign}1) closed {closed} vs Euclid {oracle}")
            });
            for torus in SplitTorus::BOTH {
                let closed = gcd_torus(&p, torus, n, sign)?.value;
                let oracle = euclid_gcd(torus.order(&p), &shift);
                rep.check(closed == oracle, || {
                    format!("f={f} n={n} {torus:?} sign {sign}: closed {closed} vs Euclid {oracle}")
                });
            }
        }
        for torus in SplitTorus::BOTH {
            let hits = Sign::BOTH
                .iter()
                .filter(|&&s| {
                    euclid_gcd(torus.order(&p), &shifted_q2(&p, n, s)) != BigUint::from(1u32)
                })
                .count();
            rep.check(hits <= 1, || {
                format!("f={f} n={n} {torus:?}: both signs give a nontrivial gcd")
            });
        }
    }
    for &n in &proper {
        for &m in &proper {
            if m >= n || n % m != 0 {
                continue;
            }
            let oracle = euclid_coincidences(&p, m, n);
            let classified = coincidence_classify(&p, m, n);
            let ok = match (&classified, oracle.as_slice()) {
                (Ok(None), []) => true,
                (Ok(Some(c)), [(torus, n_sign, m_sign, value)]) => {
                    let (case, e_torus, e_n, e_m) = CoincidenceCase::expected(f);
                    (m, n) == (1, 3)
                        && c.case == case
                        && (c.torus, c.n_sign, c.m_sign) == (*torus, *n_sign, *m_sign)
                        && (e_torus, e_n, e_m) == (*torus, *n_sign, *m_sign)
                        && c.value == *value
                        && *value == BigUint::from(5u32)
                }
                _ => false,
            };
            rep.check(ok, || {
                format!("f={f} (m,n)=({m},{n}): classifier {classified:?} vs Euclid {oracle:?}")
            });
        }
    }
    Ok(rep)
}

/// Closed-form gcds against Euclid, the mod-4 dichotomy and the coincidence
/// classifier, for `1 <= f <= f_max`.
pub fn verify_gcd_identities(f_max: u32) -> Result<SweepReport> {
    let parts = (1..=f_max)
        .into_par_iter()
        .map(gcd_identities_for)
        .collect::<Result<Vec<_>>>()?;
    Ok(merge_ordered("gcd identities", parts))
}

fn stabilizers_for(f: u32) -> Result<SweepReport> {
    let mut rep = SweepReport::new("stabilizers");
    let p = SuzukiParams::new(f)?;
    for family in Family::SEMISIMPLE {
        let report = orbit_oracle(&p, family)?;
        let exponents = orbit_exponents(&p, family)?;
        for n in p.outer_divisors() {
            let w = witness(&p, family, n)?;
            let found = report.count(n) > 0;
            rep.check(w.is_some() == found, || {
                format!(
                    "f={f} {family} n={n}: witness {w:?}, oracle count {}",
                    report.count(n)
                )
            });
            if let Some(label) = &w {
                let idx: u64 = label
                    .index()
                    .try_into()
                    .expect("budget keeps indices small");
                let m = exponents.iter().find(|(x, _)| *x == idx).map(|&(_, m)| m);
                rep.check(m == Some(n), || {
                    format!("f={f} witness {label} for n={n} has oracle exponent {m:?}")
                });
            }
            let expected_gap = match family {
                Family::X => n == 1,
                Family::Y => y_exception(f, n),
                _ => z_exception(f, n),
            };
            rep.check(expected_gap == !found, || {
                format!("f={f} {family} n={n}: exception table says {expected_gap}, oracle found {found}")
            });
        }
    }
    if matches!(f % 4, 0 | 3) {
        // A nontrivial Y character fixed by φ itself.
        let fixed = (p.a1() % 5u32).is_zero() && {
            let j = canonicalize(&p, Family::Y, &BigInt::from(p.a1() / 5u32))?;
            let j = u64::try_from(&j).expect("budget keeps indices small");
            orbit_exponents(&p, Family::Y)?.contains(&(j, 1))
        };
        rep.check(fixed, || format!("f={f}: Y_(a1/5) is not fixed by φ"));
    }
    Ok(rep)
}

/// Witness constructors and exception tables against exhaustive orbits.
pub fn verify_stabilizers(f_max: u32) -> Result<SweepReport> {
    check_budget(&SuzukiParams::new(f_max.max(1))?)?;
    let parts = (1..=f_max)
        .into_par_iter()
        .map(stabilizers_for)
        .collect::<Result<Vec<_>>>()?;
    Ok(merge_ordered("stabilizers", parts))
}

fn degree_sets_for(f: u32) -> Result<SweepReport> {
    let mut rep = SweepReport::new("degree sets");
    for spec in ExtensionSpec::all(f)? {
        let closed = cd_closed_form(&spec);
        let oracle = cd_oracle(&spec)?;
        let keys = oracle.degrees();
        rep.check(keys == closed, || {
            let extra: BTreeSet<_> = keys.difference(&closed).collect();
            let missing: BTreeSet<_> = closed.difference(&keys).collect();
            format!(
                "f={f} d={}: oracle-only {extra:?}, closed-only {missing:?}",
                spec.d()
            )
        });
        rep.check(oracle.sum_of_squares() == spec.group_order(), || {
            format!("f={f} d={}: sum of squared degrees is not |G|", spec.d())
        });
        let from_witnesses = cd_from_witnesses(&spec)?;
        rep.check(from_witnesses == closed, || {
            format!(
                "f={f} d={}: witness route disagrees with closed form",
                spec.d()
            )
        });
    }
    Ok(rep)
}

/// Closed-form `cd(G)` against the orbit-counting oracle for every `d | 2f + 1`.
pub fn verify_degree_sets(f_max: u32) -> Result<SweepReport> {
    check_budget(&SuzukiParams::new(f_max.max(1))?)?;
    let parts = (1..=f_max)
        .into_par_iter()
        .map(degree_sets_for)
        .collect::<Result<Vec<_>>>()?;
    Ok(merge_ordered("degree sets", parts))
}

/// Lower bounds on `|cd(G)|` for `1 < f <= f_max`, `1 < d | 2f + 1`.
pub fn verify_degree_count_bound(f_max: u32) -> Result<SweepReport> {
    let mut rep = SweepReport::new("degree count bound");
    for f in 2..=f_max {
        for spec in ExtensionSpec::all(f)? {
            if spec.d() == 1 {
                continue;
            }
            let r = check_degree_count_bound(&spec);
            rep.check(r.hypotheses_hold && r.satisfied, || {
                format!(
                    "f={f} d={}: |cd(G)| = {} < {}",
                    spec.d(),
                    r.cardinality,
                    r.bound
                )
            });
        }
    }
    Ok(rep)
}

fn cyclotomic_for(n: u64) -> SweepReport {
    let mut rep = SweepReport::new("cyclotomic");
    let order = n as usize;
    let n_i = n as i64;
    for k in square_roots_of_minus_one(n) {
        let reduce = |l: i64| -> Vec<Vec<i128>> {
            (0..n_i)
                .map(|i| four_term_sum(order, i * l.rem_euclid(n_i) % n_i, k).reduced())
                .collect()
        };
        let at_one = reduce(1);
        let at_k_minus_1 = reduce(k - 1);
        for i in 0..n_i {
            for j in 0..n_i {
                let identity = at_one[i as usize] == at_one[j as usize]
                    && at_k_minus_1[i as usize] == at_k_minus_1[j as usize];
                let congruence = pair_equality(n, i, j) || pair_equality(n, i, j * k % n_i);
                rep.check(identity == congruence, || {
                    format!("n={n} k={k} i={i} j={j}: identity {identity}, congruence {congruence}")
                });
            }
        }
    }
    rep
}

/// The four-term root-of-unity identity against its congruence criterion,
/// over every `n <= n_max`, every square root `k` of `-1` and all `(i, j)`.
pub fn verify_cyclotomic(n_max: u64) -> SweepReport {
    let parts: Vec<SweepReport> = (1..=n_max).into_par_iter().map(cyclotomic_for).collect();
    merge_ordered("cyclotomic", parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweeps_pass() {
        for rep in [
            verify_gcd_identities(24).unwrap(),
            verify_stabilizers(5).unwrap(),
            verify_degree_sets(5).unwrap(),
            verify_degree_count_bound(16).unwrap(),
            verify_cyclotomic(60),
        ] {
            assert!(rep.checks > 0, "{}", rep.name);
            assert!(rep.passed(), "{}: {:?}", rep.name, rep.first_failure());
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert!(verify_degree_sets(ORACLE_MAX_F + 1).is_err());
        assert!(verify_stabilizers(ORACLE_MAX_F + 1).is_err());
    }
}
