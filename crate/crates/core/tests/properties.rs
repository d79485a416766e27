use num_rational::Ratio;
use numsg::brute;
use numsg::relations::{self, generators_from_uw, k_closed_form, l_function, q_closed_form_exact, RhoVector, UWPair};
use numsg::report::{parse_json, to_json_string, Results, RunRecord};
use numsg::semigroup::{profile, GeneratorTuple};
use proptest::prelude::*;

fn uw_pair() -> impl Strategy<Value = UWPair> {
    ([1u64..=20, 1..=20, 1..=20], [1u64..=20, 1..=20, 1..=20]).prop_map(|(u, w)| UWPair::new(u, w).unwrap())
}

fn rho() -> impl Strategy<Value = RhoVector> {
    [-6.0f64..6.0, -6.0..6.0, -6.0..6.0].prop_map(|e| RhoVector::new(e.map(f64::exp2)).unwrap())
}

proptest! {
    #[test]
    fn k_is_at_least_sqrt3(uw in uw_pair()) {
        prop_assert!(k_closed_form(&uw).unwrap() >= 3f64.sqrt() - 1e-12);
    }

    #[test]
    fn q_and_p_bounds_away_from_unit_ratio(uw in uw_pair()) {
        let q = q_closed_form_exact(&uw).unwrap();
        if uw.u() == uw.w() {
            prop_assert_eq!(q, Ratio::new(1, 9));
        } else {
            prop_assert!(q < Ratio::new(1, 9));
        }
    }

    #[test]
    fn l_is_k_squared(uw in uw_pair()) {
        let k = k_closed_form(&uw).unwrap();
        let l = l_function(&uw.rho());
        prop_assert!((l - k * k).abs() <= 1e-12 * l);
    }

    #[test]
    fn l_is_cyclic(r in rho()) {
        let l = l_function(&r);
        prop_assert!((l_function(&r.rotate()) - l).abs() <= 1e-12 * l);
    }

    #[test]
    fn discriminant_matches_gamma4(r in rho()) {
        let g4 = r.gamma4();
        let scale = r.gammas().0.powi(6);
        prop_assert!((g4 * g4 - r.discriminant()).abs() <= 1e-12 * scale);
    }

    /// Closed forms against direct enumeration on valid random standard forms.
    #[test]
    fn closed_forms_match_enumeration(uw in ([1u64..=6, 1..=6, 1..=6], [1u64..=6, 1..=6, 1..=6])
        .prop_filter_map("valid standard form", |(u, w)| {
            let uw = UWPair::new(u, w).ok()?;
            relations::validate_uw(&uw).ok()?;
            Some(uw)
        }))
    {
        let d = generators_from_uw(&uw).unwrap();
        let b = brute::profile(&d);
        prop_assert_eq!(relations::conductor_closed_form(&uw).unwrap(), b.frobenius + 1);
        prop_assert_eq!(relations::genus_closed_form(&uw).unwrap(), b.genus);
    }

    #[test]
    fn profile_record_round_trips(d in [3u64..60, 3..60, 3..60]) {
        let g = GeneratorTuple::from_slice(&d).unwrap();
        prop_assume!(g.gcd() == 1);
        let rec = RunRecord::new("analyze", serde_json::json!({ "generators": d }), Results::Profile(profile(&g).unwrap()), None);
        prop_assert_eq!(parse_json(&to_json_string(&rec).unwrap()).unwrap(), rec);
    }
}
