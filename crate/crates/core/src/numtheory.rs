//! Closed-form gcds between `q⁴ + 1`, its factors `q² ± r + 1`, and the
//! shifted powers `q² ± 2ⁿ` for proper divisors `n` of `2f + 1`.
//!
//! Every closed form here has a Euclid counterpart ([`euclid_gcd`]); the
//! `*_checked` entry points run both and fail on disagreement.
//!
//! # Branch table for the split factors
//!
//! Write `x = 2f + n + 1` for the `q² + 2ⁿ` shift and `x = 2f - n + 1` for the
//! `q² - 2ⁿ` shift, and `h = 2^((n+1)/2)`.
//!
//! | condition on `x` | `gcd(q²+r+1, q²±2ⁿ)` | `gcd(q²-r+1, q²±2ⁿ)` |
//! |------------------|----------------------|----------------------|
//! | `8 \| x`         | `2ⁿ + h + 1`         | `2ⁿ - h + 1`         |
//! | `4 ∥ x`          | `2ⁿ - h + 1`         | `2ⁿ + h + 1`         |
//! | `4 ∤ x`          | `1`                  | `1`                  |
//!
//! The pairing was fixed against the Euclid oracle (for example at `f = 4`,
//! `n = 3`: `gcd(545, 520) = 5 = 2³ - 2² + 1` with `x = 12`).

use std::fmt;
use std::io::Write;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{SuzukiParams, Torus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Minus, Sign::Plus];

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// The two factors of `q⁴ + 1 = (q² + r + 1)(q² - r + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SplitTorus {
    /// `q² + r + 1`, the order of `A1`.
    Plus,
    /// `q² - r + 1`, the order of `A2`.
    Minus,
}

impl SplitTorus {
    pub const BOTH: [SplitTorus; 2] = [SplitTorus::Plus, SplitTorus::Minus];

    pub fn torus(self) -> Torus {
        match self {
            SplitTorus::Plus => Torus::A1,
            SplitTorus::Minus => Torus::A2,
        }
    }

    pub fn order(self, p: &SuzukiParams) -> &BigUint {
        p.torus_order(self.torus())
    }

    fn column(self) -> &'static str {
        match self {
            SplitTorus::Plus => "q2+r+1",
            SplitTorus::Minus => "q2-r+1",
        }
    }
}

/// Which closed-form shape a gcd took.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GcdKind {
    TrivialOne,
    /// `2^(2n) + 1`.
    FermatFactor,
    /// `2ⁿ + 2^((n+1)/2) + 1`.
    TorusPlus,
    /// `2ⁿ - 2^((n+1)/2) + 1`; equals 1 when `n = 1`.
    TorusMinus,
}

/// The congruence condition that selected a closed form.
///
/// `residue` is always `2f ± n + 1` with the sign of the `q² ± 2ⁿ` shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    FourDivides {
        residue: u32,
    },
    FourDoesNotDivide {
        residue: u32,
    },
    EightDivides {
        residue: u32,
    },
    FourExactlyDivides {
        residue: u32,
    },
    /// `gcd(q⁴ + 1, 2ⁿ ± 1)`, unconditionally 1.
    TwoPowerCoprime,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::FourDivides { residue } => write!(f, "4|{residue}"),
            Branch::FourDoesNotDivide { residue } => write!(f, "4!|{residue}"),
            Branch::EightDivides { residue } => write!(f, "8|{residue}"),
            Branch::FourExactlyDivides { residue } => write!(f, "4||{residue}"),
            Branch::TwoPowerCoprime => f.write_str("coprime"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcdCase {
    pub kind: GcdKind,
    pub value: BigUint,
    pub branch: Branch,
}

impl GcdCase {
    pub fn is_trivial(&self) -> bool {
        self.value.is_one()
    }
}

/// Plain Euclid. `euclid_gcd(0, 0)` is 0.
pub fn euclid_gcd(a: &BigUint, b: &BigUint) -> BigUint {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let t = &a % &b;
        a = b;
        b = t;
    }
    a
}

fn pow2(e: u32) -> BigUint {
    BigUint::one() << e as usize
}

fn signed_pow2(e: u32, sign: Sign) -> BigUint {
    match sign {
        Sign::Plus => pow2(e) + 1u32,
        Sign::Minus => pow2(e) - 1u32,
    }
}

/// `gcd(2ⁿ ± 1, 2ᵐ ± 1)` for `m | n`.
///
/// With base 2 the term `gcd(p - 1, 2)` is 1, so the four shapes reduce to
/// `2ᵐ - 1`, `1` or `2ᵐ + 1` depending on the signs and the parity of `n/m`.
pub fn gcd_two_powers(n: u32, m: u32, sign_n: Sign, sign_m: Sign) -> Result<BigUint> {
    if m == 0 || n == 0 || !n.is_multiple_of(m) {
        return Err(Error::NotADivisor {
            divisor: u64::from(m),
            value: u64::from(n),
        });
    }
    let odd_ratio = (n / m) % 2 == 1;
    let value = match (sign_n, sign_m) {
        (Sign::Minus, Sign::Minus) => signed_pow2(m, Sign::Minus),
        (Sign::Minus, Sign::Plus) if odd_ratio => BigUint::one(),
        (Sign::Minus, Sign::Plus) => signed_pow2(m, Sign::Plus),
        (Sign::Plus, Sign::Minus) => BigUint::one(),
        (Sign::Plus, Sign::Plus) if odd_ratio => signed_pow2(m, Sign::Plus),
        (Sign::Plus, Sign::Plus) => BigUint::one(),
    };
    Ok(value)
}

/// `q² + 2ⁿ` or `q² - 2ⁿ`.
pub fn shifted_q2(p: &SuzukiParams, n: u32, sign: Sign) -> BigUint {
    match sign {
        Sign::Plus => p.q2() + pow2(n),
        Sign::Minus => p.q2() - pow2(n),
    }
}

/// `2f + 1 ± n`, the quantity whose 2-adic valuation picks the branch.
fn branch_residue(p: &SuzukiParams, n: u32, sign: Sign) -> u32 {
    match sign {
        Sign::Plus => p.out_order() + n,
        Sign::Minus => p.out_order() - n,
    }
}

/// `gcd(q⁴ + 1, q² ± 2ⁿ)`: `2^(2n) + 1` when `4 | 2f ± n + 1`, else 1.
pub fn gcd_q4_plus1(p: &SuzukiParams, n: u32, sign: Sign) -> Result<GcdCase> {
    p.require_proper_divisor(n)?;
    let residue = branch_residue(p, n, sign);
    let case = if residue.is_multiple_of(4) {
        GcdCase {
            kind: GcdKind::FermatFactor,
            value: pow2(2 * n) + 1u32,
            branch: Branch::FourDivides { residue },
        }
    } else {
        GcdCase {
            kind: GcdKind::TrivialOne,
            value: BigUint::one(),
            branch: Branch::FourDoesNotDivide { residue },
        }
    };
    Ok(case)
}

/// `gcd(q⁴ + 1, 2ⁿ ± 1) = 1`.
pub fn gcd_q4_plus1_two_power(p: &SuzukiParams, n: u32, _sign: Sign) -> Result<GcdCase> {
    p.require_proper_divisor(n)?;
    Ok(GcdCase {
        kind: GcdKind::TrivialOne,
        value: BigUint::one(),
        branch: Branch::TwoPowerCoprime,
    })
}

/// `gcd(q² ± r + 1, q² ± 2ⁿ)` per the branch table in the module docs.
pub fn gcd_torus(p: &SuzukiParams, torus: SplitTorus, n: u32, sign: Sign) -> Result<GcdCase> {
    p.require_proper_divisor(n)?;
    let residue = branch_residue(p, n, sign);
    let h = pow2(n.div_ceil(2));
    let plus = || (pow2(n) + &h + 1u32, GcdKind::TorusPlus);
    let minus = || (pow2(n) - &h + 1u32, GcdKind::TorusMinus);
    let (value, kind, branch) = if residue.is_multiple_of(8) {
        let (v, k) = match torus {
            SplitTorus::Plus => plus(),
            SplitTorus::Minus => minus(),
        };
        (v, k, Branch::EightDivides { residue })
    } else if residue.is_multiple_of(4) {
        let (v, k) = match torus {
            SplitTorus::Plus => minus(),
            SplitTorus::Minus => plus(),
        };
        (v, k, Branch::FourExactlyDivides { residue })
    } else {
        (
            BigUint::one(),
            GcdKind::TrivialOne,
            Branch::FourDoesNotDivide { residue },
        )
    };
    Ok(GcdCase {
        kind,
        value,
        branch,
    })
}

fn verify(case: GcdCase, euclid: BigUint, what: impl FnOnce() -> String) -> Result<GcdCase> {
    if case.value == euclid {
        Ok(case)
    } else {
        Err(Error::Inconsistent(format!(
            "{}: closed form {} vs Euclid {}",
            what(),
            case.value,
            euclid
        )))
    }
}

/// [`gcd_q4_plus1`] verified against Euclid.
pub fn gcd_q4_plus1_checked(p: &SuzukiParams, n: u32, sign: Sign) -> Result<GcdCase> {
    let case = gcd_q4_plus1(p, n, sign)?;
    let euclid = euclid_gcd(&p.q4_plus_1(), &shifted_q2(p, n, sign));
    verify(case, euclid, || {
        format!("gcd(q^4+1, q^2{sign}2^{n}) at f={}", p.f())
    })
}

/// [`gcd_torus`] verified against Euclid.
pub fn gcd_torus_checked(
    p: &SuzukiParams,
    torus: SplitTorus,
    n: u32,
    sign: Sign,
) -> Result<GcdCase> {
    let case = gcd_torus(p, torus, n, sign)?;
    let euclid = euclid_gcd(torus.order(p), &shifted_q2(p, n, sign));
    verify(case, euclid, || {
        format!("gcd({}, q^2{sign}2^{n}) at f={}", torus.column(), p.f())
    })
}

/// Exactly one of `2f - n + 1`, `2f + n + 1` is divisible by 4 (for odd `n`).
pub fn exactly_one_divisible_by_four(f: u32, n: u32) -> bool {
    let minus = (2 * f + 1 - n).is_multiple_of(4);
    let plus = (2 * f + 1 + n).is_multiple_of(4);
    minus ^ plus
}

/// The four ways a gcd for `n = 3` can collide with one for `m = 1`.
///
/// All four have common value 5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CoincidenceCase {
    /// `f ≡ 0 (mod 4)`: `(q²+r+1, q²+8) = (q²+r+1, q²-2)`.
    I,
    /// `f ≡ 3 (mod 4)`: `(q²+r+1, q²-8) = (q²+r+1, q²+2)`.
    II,
    /// `f ≡ 1 (mod 4)`: `(q²-r+1, q²-8) = (q²-r+1, q²+2)`.
    III,
    /// `f ≡ 2 (mod 4)`: `(q²-r+1, q²+8) = (q²-r+1, q²-2)`.
    IV,
}

impl CoincidenceCase {
    pub fn expected(f: u32) -> (CoincidenceCase, SplitTorus, Sign, Sign) {
        match f % 4 {
            0 => (
                CoincidenceCase::I,
                SplitTorus::Plus,
                Sign::Plus,
                Sign::Minus,
            ),
            1 => (
                CoincidenceCase::III,
                SplitTorus::Minus,
                Sign::Minus,
                Sign::Plus,
            ),
            2 => (
                CoincidenceCase::IV,
                SplitTorus::Minus,
                Sign::Plus,
                Sign::Minus,
            ),
            _ => (
                CoincidenceCase::II,
                SplitTorus::Plus,
                Sign::Minus,
                Sign::Plus,
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coincidence {
    pub case: CoincidenceCase,
    pub torus: SplitTorus,
    /// Shift sign of the gcd at the larger divisor `n`.
    pub n_sign: Sign,
    /// Shift sign of the gcd at the smaller divisor `m`.
    pub m_sign: Sign,
    pub value: BigUint,
}

/// Detects a collision between a nontrivial gcd `(q² ± r + 1, q² ± 2ⁿ)` and
/// one of `(q² ± r + 1, q² ± 2ᵐ)` over the same factor.
///
/// Collisions only happen for `(m, n) = (1, 3)`; anything else is reported as
/// [`Error::Inconsistent`].
pub fn coincidence_classify(p: &SuzukiParams, m: u32, n: u32) -> Result<Option<Coincidence>> {
    p.require_proper_divisor(m)?;
    p.require_proper_divisor(n)?;
    if m == n || !n.is_multiple_of(m) {
        return Err(Error::NotADivisor {
            divisor: u64::from(m),
            value: u64::from(n),
        });
    }
    for torus in SplitTorus::BOTH {
        for n_sign in Sign::BOTH {
            let d1 = gcd_torus(p, torus, n, n_sign)?;
            if d1.is_trivial() {
                continue;
            }
            for m_sign in Sign::BOTH {
                let d2 = gcd_torus(p, torus, m, m_sign)?;
                if d1.value != d2.value {
                    continue;
                }
                let (case, e_torus, e_n, e_m) = CoincidenceCase::expected(p.f());
                if (m, n) != (1, 3) || (e_torus, e_n, e_m) != (torus, n_sign, m_sign) {
                    return Err(Error::Inconsistent(format!(
                        "unexpected gcd coincidence at f={}, m={m}, n={n}",
                        p.f()
                    )));
                }
                return Ok(Some(Coincidence {
                    case,
                    torus,
                    n_sign,
                    m_sign,
                    value: d1.value,
                }));
            }
        }
    }
    Ok(None)
}

/// One row of the gcd verification table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GcdRow {
    pub f: u32,
    pub n: u32,
    pub torus: &'static str,
    pub sign: char,
    pub closed_form: String,
    pub euclid: String,
    pub branch: String,
    #[serde(rename = "match")]
    pub matches: bool,
}

pub const GCD_CSV_HEADER: [&str; 8] = [
    "f",
    "n",
    "torus",
    "sign",
    "closed_form",
    "euclid",
    "branch",
    "match",
];

/// Rows for every `f` in range, every proper divisor `n` of `2f + 1`,
/// each of `q⁴+1`, `q²+r+1`, `q²-r+1` and each shift sign.
pub fn gcd_table(fs: impl IntoIterator<Item = u32>) -> Result<Vec<GcdRow>> {
    let mut rows = Vec::new();
    for f in fs {
        let p = SuzukiParams::new(f)?;
        let q4_plus_1 = p.q4_plus_1();
        for n in p.proper_outer_divisors() {
            for sign in Sign::BOTH {
                let shift = shifted_q2(&p, n, sign);
                let mut push = |torus: &'static str, case: GcdCase, modulus: &BigUint| {
                    let euclid = euclid_gcd(modulus, &shift);
                    rows.push(GcdRow {
                        f,
                        n,
                        torus,
                        sign: sign.symbol(),
                        matches: case.value == euclid,
                        closed_form: case.value.to_string(),
                        euclid: euclid.to_string(),
                        branch: case.branch.to_string(),
                    });
                };
                push("q4+1", gcd_q4_plus1(&p, n, sign)?, &q4_plus_1);
                for torus in SplitTorus::BOTH {
                    push(
                        torus.column(),
                        gcd_torus(&p, torus, n, sign)?,
                        torus.order(&p),
                    );
                }
            }
        }
    }
    Ok(rows)
}

/// Writes the header and rows as CSV. An empty table is header-only.
pub fn write_gcd_csv<W: Write>(out: W, rows: &[GcdRow]) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(GCD_CSV_HEADER)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
