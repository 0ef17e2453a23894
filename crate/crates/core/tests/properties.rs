use num_bigint::BigUint;
use num_traits::One;
use proptest::prelude::*;

use suzuki_cd::characters::{degree_of, family_count};
use suzuki_cd::numtheory::{gcd_q4_plus1_checked, gcd_torus_checked, Sign, SplitTorus};
use suzuki_cd::{
    cd_closed_form, cd_oracle, check_degree_count_bound, DegreeReport, ExtensionSpec, Family,
    SuzukiParams,
};

fn spec_strategy(f_max: u32) -> impl Strategy<Value = ExtensionSpec> {
    (1..=f_max).prop_flat_map(|f| {
        let ds = SuzukiParams::new(f).unwrap().outer_divisors();
        prop::sample::select(ds).prop_map(move |d| ExtensionSpec::new(f, d).unwrap())
    })
}

#[test]
fn simple_group_degrees_sum_to_group_order() {
    for f in 1..=40 {
        let p = SuzukiParams::new(f).unwrap();
        let sum: BigUint = Family::ALL
            .iter()
            .map(|&fam| {
                let deg = degree_of(&p, fam);
                family_count(&p, fam) * &deg * &deg
            })
            .sum();
        assert_eq!(&sum, p.group_order(), "f={f}");
    }
}

#[test]
fn degrees_are_bounded_by_largest_multiple() {
    for f in 1..=30 {
        for spec in ExtensionSpec::all(f).unwrap() {
            let p = spec.params();
            let ceiling = BigUint::from(spec.d()) * p.a1() * p.a0();
            let top = cd_closed_form(&spec).into_iter().next_back().unwrap();
            assert!(top <= ceiling, "f={f} d={}", spec.d());
            assert!(top >= p.a1() * p.a0(), "f={f} d={}", spec.d());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn oracle_matches_closed_form(spec in spec_strategy(6)) {
        let oracle = cd_oracle(&spec).unwrap();
        prop_assert_eq!(oracle.degrees(), cd_closed_form(&spec));
        prop_assert_eq!(oracle.sum_of_squares(), spec.group_order());
        let report = DegreeReport::new(&spec, Some(&oracle));
        prop_assert!(report.verified_against_oracle);
    }

    #[test]
    fn degrees_divide_group_order(spec in spec_strategy(40)) {
        let order = spec.group_order();
        for deg in cd_closed_form(&spec) {
            prop_assert!((&order % &deg) == BigUint::from(0u32), "{} does not divide |G|", deg);
        }
    }

    #[test]
    fn one_and_steinberg_always_present(spec in spec_strategy(60)) {
        let cd = cd_closed_form(&spec);
        prop_assert!(cd.contains(&BigUint::one()));
        prop_assert!(cd.contains(&spec.params().q4()));
    }

    #[test]
    fn checked_gcds_agree(f in 1u32..=200, sign_plus in any::<bool>()) {
        let p = SuzukiParams::new(f).unwrap();
        let sign = if sign_plus { Sign::Plus } else { Sign::Minus };
        for n in p.proper_outer_divisors() {
            prop_assert!(gcd_q4_plus1_checked(&p, n, sign).is_ok());
            for torus in SplitTorus::BOTH {
                prop_assert!(gcd_torus_checked(&p, torus, n, sign).is_ok());
            }
        }
    }

    #[test]
    fn proper_extensions_have_many_degrees(spec in spec_strategy(40)) {
        prop_assume!(spec.f() > 1 && spec.d() > 1);
        prop_assert!(check_degree_count_bound(&spec).passed());
    }
}
