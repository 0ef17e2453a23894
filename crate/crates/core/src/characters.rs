//! Irreducible characters of `S = ²B₂(q²)` by family and torus index.
//!
//! | family | degree              | torus (index modulus) | count        |
//! |--------|---------------------|-----------------------|--------------|
//! | `One`  | 1                   |                       | 1            |
//! | `St`   | q⁴                  |                       | 1            |
//! | `X`    | q⁴ + 1              | A0, order q² - 1      | q²/2 - 1     |
//! | `Y`    | (q² - r + 1)(q² - 1)| A1, order q² + r + 1  | (q² + r)/4   |
//! | `Z`    | (q² + r + 1)(q² - 1)| A2, order q² - r + 1  | (q² - r)/4   |
//! | `W`    | r(q² - 1)/2         |                       | 2            |
//!
//! Note that each of `Y` and `Z` is indexed by one factor of `q⁴ + 1` while its
//! degree carries the other factor. This pairing is easy to invert by mistake.
//!
//! An `X` index is a nonzero residue mod `q² - 1` up to sign. A `Y` or `Z`
//! index is a nonzero residue up to multiplication by `{±1, ±q²}`, which is a
//! cyclic group of order 4 because `q⁴ ≡ -1` modulo both `q² ± r + 1`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::check_budget;
use crate::cyclotomic::CyclotomicSum;
use crate::error::{Error, Result};
use crate::params::{SuzukiParams, Torus};

/// Largest torus order accepted by [`torus_value`].
pub const MAX_CYCLOTOMIC_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    One,
    St,
    X,
    Y,
    Z,
    W,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::One,
        Family::St,
        Family::X,
        Family::Y,
        Family::Z,
        Family::W,
    ];

    /// The families parameterized by a torus.
    pub const SEMISIMPLE: [Family; 3] = [Family::X, Family::Y, Family::Z];

    pub fn torus(self) -> Option<Torus> {
        match self {
            Family::X => Some(Torus::A0),
            Family::Y => Some(Torus::A1),
            Family::Z => Some(Torus::A2),
            _ => None,
        }
    }

    pub(crate) fn require_torus(self) -> Result<Torus> {
        self.torus().ok_or(Error::NoTorus(self))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::One => "1",
            Family::St => "St",
            Family::X => "X",
            Family::Y => "Y",
            Family::Z => "Z",
            Family::W => "W",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "1" | "one" | "trivial" => Ok(Family::One),
            "st" | "steinberg" => Ok(Family::St),
            "x" => Ok(Family::X),
            "y" => Ok(Family::Y),
            "z" => Ok(Family::Z),
            "w" => Ok(Family::W),
            other => Err(format!("unknown character family `{other}`")),
        }
    }
}

/// An irreducible character of `S`, with a canonical index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharacterLabel {
    family: Family,
    index: BigUint,
}

impl CharacterLabel {
    pub fn trivial() -> Self {
        Self {
            family: Family::One,
            index: BigUint::zero(),
        }
    }

    pub fn steinberg() -> Self {
        Self {
            family: Family::St,
            index: BigUint::zero(),
        }
    }

    /// Builds a label from an index that must already be canonical.
    pub fn new(p: &SuzukiParams, family: Family, index: BigUint) -> Result<Self> {
        let invalid = || Error::InvalidIndex {
            family,
            index: index.to_string(),
        };
        let ok = match family {
            Family::One | Family::St => index.is_zero(),
            Family::W => index == BigUint::one() || index == BigUint::from(2u32),
            Family::X | Family::Y | Family::Z => {
                let torus = family.require_torus()?;
                !index.is_zero()
                    && &index < p.torus_order(torus)
                    && canonical_residue(p, family, &index) == index
            }
        };
        if ok {
            Ok(Self { family, index })
        } else {
            Err(invalid())
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn index(&self) -> &BigUint {
        &self.index
    }
}

impl fmt::Display for CharacterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::One | Family::St => write!(f, "{}", self.family),
            _ => write!(f, "{}_{}", self.family, self.index),
        }
    }
}

/// The residues identified with one index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexClass {
    pub torus_order: BigUint,
    pub multipliers: Vec<BigUint>,
    /// Sorted, without repeats.
    pub members: Vec<BigUint>,
}

impl IndexClass {
    pub fn representative(&self) -> &BigUint {
        &self.members[0]
    }
}

/// `{1, -1}` for `X`; `{1, -1, q², -q²}` for `Y`, `Z` (all mod the torus order).
pub fn multipliers(p: &SuzukiParams, family: Family) -> Result<Vec<BigUint>> {
    let torus = family.require_torus()?;
    let t = p.torus_order(torus);
    let mut ms = vec![BigUint::one(), t - 1u32];
    if family != Family::X {
        let q2 = p.q2() % t;
        ms.push(t - &q2);
        ms.push(q2);
    }
    Ok(ms)
}

fn reduce_signed(raw: &BigInt, t: &BigUint) -> BigUint {
    let t = BigInt::from(t.clone());
    let r = ((raw % &t) + &t) % &t;
    r.to_biguint().expect("nonnegative residue")
}

/// Least member of the class of `x`; 0 maps to 0.
fn canonical_residue(p: &SuzukiParams, family: Family, x: &BigUint) -> BigUint {
    let torus = family.torus().expect("semisimple family");
    let t = p.torus_order(torus);
    let x = x % t;
    multipliers(p, family)
        .expect("semisimple family")
        .iter()
        .map(|m| (m * &x) % t)
        .min()
        .expect("nonempty multiplier set")
}

pub fn index_class(p: &SuzukiParams, family: Family, raw_index: &BigInt) -> Result<IndexClass> {
    let torus = family.require_torus()?;
    let t = p.torus_order(torus);
    let x = reduce_signed(raw_index, t);
    if x.is_zero() {
        return Err(Error::InvalidIndex {
            family,
            index: raw_index.to_string(),
        });
    }
    let multipliers = multipliers(p, family)?;
    let mut members: Vec<BigUint> = multipliers.iter().map(|m| (m * &x) % t).collect();
    members.sort();
    members.dedup();
    Ok(IndexClass {
        torus_order: t.clone(),
        multipliers,
        members,
    })
}

/// Smallest positive member of the class of `raw_index`.
pub fn canonicalize(p: &SuzukiParams, family: Family, raw_index: &BigInt) -> Result<BigUint> {
    Ok(index_class(p, family, raw_index)?.representative().clone())
}

pub fn degree_of(p: &SuzukiParams, family: Family) -> BigUint {
    match family {
        Family::One => BigUint::one(),
        Family::St => p.q4(),
        Family::X => p.q4_plus_1(),
        Family::Y => p.a2() * p.a0(),
        Family::Z => p.a1() * p.a0(),
        Family::W => p.r() * p.a0() / 2u32,
    }
}

pub fn family_count(p: &SuzukiParams, family: Family) -> BigUint {
    match family {
        Family::One | Family::St => BigUint::one(),
        Family::X => p.q2() / 2u32 - 1u32,
        Family::Y => (p.q2() + p.r()) / 4u32,
        Family::Z => (p.q2() - p.r()) / 4u32,
        Family::W => BigUint::from(2u32),
    }
}

/// Value of an `X`, `Y` or `Z` character at the `l`-th power of a torus generator:
/// `X_i ↦ ε^{il} + ε^{-il}`, `Y_j ↦ -(ε^{jl} + ε^{-jl} + ε^{jlq²} + ε^{-jlq²})`.
pub fn torus_value(p: &SuzukiParams, label: &CharacterLabel, l: i64) -> Result<CyclotomicSum> {
    let torus = label.family.require_torus()?;
    let t_big = p.torus_order(torus);
    let t = t_big
        .to_u64()
        .filter(|&t| t <= MAX_CYCLOTOMIC_ORDER)
        .ok_or_else(|| Error::TorusTooLarge(t_big.to_string()))?;
    let t_i = t as i64;
    let idx = (label.index.to_u64().expect("index below torus order") % t) as i64;
    let e = idx * l.rem_euclid(t_i) % t_i;
    let mut sum = CyclotomicSum::zero(t as usize);
    if label.family == Family::X {
        sum.add_term(e, 1);
        sum.add_term(-e, 1);
    } else {
        let q2 = (p.q2() % t_big).to_i64().expect("reduced");
        let eq = e * q2 % t_i;
        for x in [e, -e, eq, -eq] {
            sum.add_term(x, -1);
        }
    }
    Ok(sum)
}

/// The image of a label under the n-th power of the field automorphism.
/// `1`, `St` and the `W` pair are fixed; torus indices are multiplied by `2ⁿ`.
pub fn phi_power_on_label(p: &SuzukiParams, label: &CharacterLabel, n: u32) -> CharacterLabel {
    match label.family.torus() {
        None => label.clone(),
        Some(torus) => {
            let t = p.torus_order(torus);
            let factor = BigUint::from(2u32).modpow(&BigUint::from(n), t);
            CharacterLabel {
                family: label.family,
                index: canonical_residue(p, label.family, &(factor * &label.index)),
            }
        }
    }
}

/// Machine-word view of one torus with its multiplier group.
#[derive(Debug, Clone)]
pub(crate) struct FastTorus {
    pub order: u64,
    multipliers: Vec<u64>,
}

impl FastTorus {
    pub fn new(p: &SuzukiParams, family: Family) -> Result<Self> {
        check_budget(p)?;
        let torus = family.require_torus()?;
        let order = p.torus_order_u64(torus).expect("budget keeps tori small");
        let multipliers = multipliers(p, family)?
            .iter()
            .map(|m| m.to_u64().expect("reduced"))
            .collect();
        Ok(Self { order, multipliers })
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        ((u128::from(a) * u128::from(b)) % u128::from(self.order)) as u64
    }

    pub fn class(&self, x: u64) -> impl Iterator<Item = u64> + '_ {
        self.multipliers.iter().map(move |&m| self.mul(m, x))
    }

    pub fn same_class(&self, x: u64, y: u64) -> bool {
        self.class(x).any(|z| z == y)
    }

    pub fn double(&self, x: u64) -> u64 {
        self.mul(2, x)
    }
}

type TableKey = (u32, Family);

fn table_cache() -> &'static Mutex<HashMap<TableKey, Arc<Vec<u64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<TableKey, Arc<Vec<u64>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Canonical indices of an `X`, `Y` or `Z` family in ascending order.
///
/// Requires `f <= ORACLE_MAX_F`. Tables are memoized per `(f, family)`.
pub fn canonical_indices(p: &SuzukiParams, family: Family) -> Result<Arc<Vec<u64>>> {
    let key = (p.f(), family);
    if let Some(t) = table_cache().lock().unwrap().get(&key) {
        return Ok(Arc::clone(t));
    }
    let torus = FastTorus::new(p, family)?;
    let mut seen = vec![false; torus.order as usize];
    let mut reps = Vec::new();
    for x in 1..torus.order {
        if seen[x as usize] {
            continue;
        }
        reps.push(x);
        for y in torus.class(x) {
            seen[y as usize] = true;
        }
    }
    let reps = Arc::new(reps);
    table_cache().lock().unwrap().insert(key, Arc::clone(&reps));
    Ok(reps)
}

/// Every label of one family. Torus families require the oracle budget.
pub fn labels(p: &SuzukiParams, family: Family) -> Result<Vec<CharacterLabel>> {
    let mk = |i: u64| CharacterLabel {
        family,
        index: BigUint::from(i),
    };
    Ok(match family {
        Family::One | Family::St => vec![mk(0)],
        Family::W => vec![mk(1), mk(2)],
        _ => canonical_indices(p, family)?
            .iter()
            .map(|&i| mk(i))
            .collect(),
    })
}
