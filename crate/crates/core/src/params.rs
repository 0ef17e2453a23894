//! Numeric parameters of the Suzuki group `²B₂(q²)` with `q² = 2^(2f+1)`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the three maximal cyclic tori of the group.
///
/// `A0` has order `q² - 1`, `A1` has order `q² + r + 1` and `A2` has order
/// `q² - r + 1`. Every semisimple element is conjugate into one of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Torus {
    A0,
    A1,
    A2,
}

impl fmt::Display for Torus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Torus::A0 => "A0",
            Torus::A1 => "A1",
            Torus::A2 => "A2",
        };
        f.write_str(s)
    }
}

/// All exact quantities derived from the field parameter `f`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SuzukiParams {
    f: u32,
    q2: BigUint,
    r: BigUint,
    a0: BigUint,
    a1: BigUint,
    a2: BigUint,
    group_order: BigUint,
}

impl SuzukiParams {
    pub fn new(f: u32) -> Result<Self> {
        if f < 1 {
            return Err(Error::InvalidField(f));
        }
        let one = BigUint::one();
        let q2 = &one << (2 * f as usize + 1);
        let r = &one << (f as usize + 1);
        let a0 = &q2 - &one;
        let a1 = &q2 + &r + &one;
        let a2 = &q2 - &r + &one;
        let q4 = &q2 * &q2;
        let group_order = (&q4 + &one) * &q4 * &a0;
        Ok(Self {
            f,
            q2,
            r,
            a0,
            a1,
            a2,
            group_order,
        })
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn q2(&self) -> &BigUint {
        &self.q2
    }

    pub fn r(&self) -> &BigUint {
        &self.r
    }

    /// `q² - 1`, the order of `A0`.
    pub fn a0(&self) -> &BigUint {
        &self.a0
    }

    /// `q² + r + 1`, the order of `A1`.
    pub fn a1(&self) -> &BigUint {
        &self.a1
    }

    /// `q² - r + 1`, the order of `A2`.
    pub fn a2(&self) -> &BigUint {
        &self.a2
    }

    pub fn q4(&self) -> BigUint {
        &self.q2 * &self.q2
    }

    pub fn q4_plus_1(&self) -> BigUint {
        self.q4() + 1u32
    }

    /// `(q⁴ + 1) q⁴ (q² - 1)`.
    pub fn group_order(&self) -> &BigUint {
        &self.group_order
    }

    /// Order of the (cyclic) outer automorphism group, `2f + 1`.
    pub fn out_order(&self) -> u32 {
        2 * self.f + 1
    }

    pub fn torus_order(&self, torus: Torus) -> &BigUint {
        match torus {
            Torus::A0 => &self.a0,
            Torus::A1 => &self.a1,
            Torus::A2 => &self.a2,
        }
    }

    /// Machine-word torus order, when it fits.
    pub fn torus_order_u64(&self, torus: Torus) -> Option<u64> {
        self.torus_order(torus).to_u64()
    }

    /// Positive divisors of `2f + 1`, ascending.
    pub fn outer_divisors(&self) -> Vec<u32> {
        divisors(u64::from(self.out_order()))
            .into_iter()
            .map(|d| d as u32)
            .collect()
    }

    /// Divisors of `2f + 1` other than `2f + 1` itself.
    pub fn proper_outer_divisors(&self) -> Vec<u32> {
        let mut ds = self.outer_divisors();
        ds.pop();
        ds
    }

    pub fn divides_out_order(&self, n: u32) -> bool {
        n != 0 && self.out_order().is_multiple_of(n)
    }

    pub(crate) fn require_divisor(&self, n: u32) -> Result<()> {
        if self.divides_out_order(n) {
            Ok(())
        } else {
            Err(Error::NotADivisor {
                divisor: u64::from(n),
                value: u64::from(self.out_order()),
            })
        }
    }

    pub(crate) fn require_proper_divisor(&self, n: u32) -> Result<()> {
        if self.divides_out_order(n) && n != self.out_order() {
            Ok(())
        } else {
            Err(Error::NotProperDivisor {
                divisor: u64::from(n),
                value: u64::from(self.out_order()),
            })
        }
    }
}

/// Positive divisors of `n` in ascending order, by trial division.
pub fn divisors(n: u64) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && divisors(n).len() == 2
}
