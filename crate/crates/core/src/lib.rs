//! Exact character degrees of the almost simple groups `²B₂(q²) ≤ G ≤ Aut(²B₂(q²))`,
//! `q² = 2^(2f+1)`.
//!
//! Closed forms are computed for any `f`. Every closed form has an independent
//! check: Euclid for the gcd identities, exact arithmetic in `ℤ[ζₙ]` for root
//! of unity identities, and exhaustive orbit enumeration (for `f <= ORACLE_MAX_F`)
//! for stabilizers and degree multisets.

pub mod characters;
pub mod cyclotomic;
pub mod degrees;
pub mod error;
pub mod numtheory;
pub mod params;
pub mod stabilizers;
pub mod verify;

pub use characters::{CharacterLabel, Family};
pub use cyclotomic::CyclotomicSum;
pub use degrees::{
    cd_closed_form, cd_family, cd_oracle, check_degree_count_bound, DegreeMultiset, DegreeReport,
    ExtensionSpec,
};
pub use error::{Error, Result};
pub use params::{SuzukiParams, Torus};
pub use stabilizers::{orbit_oracle, OrbitReport};

/// Largest `f` for which exhaustive enumeration over torus indices is allowed.
pub const ORACLE_MAX_F: u32 = 10;

pub fn within_budget(f: u32) -> bool {
    f <= ORACLE_MAX_F
}

pub(crate) fn check_budget(p: &SuzukiParams) -> Result<()> {
    if within_budget(p.f()) {
        Ok(())
    } else {
        Err(Error::BudgetExceeded {
            f: p.f(),
            max: ORACLE_MAX_F,
        })
    }
}
