use proptest::prelude::*;

use strip_cgm::competition::second_class_vs_interface;
use strip_cgm::lpp::*;
use strip_cgm::mixing::{build_generator, stationary_distribution, tv_distance};
use strip_cgm::stationary::verify_reversal_identity;
use strip_cgm::tasep::{Configuration, DisagreementConfig, Params};

fn config_strategy(max: usize) -> impl Strategy<Value = Configuration> {
    prop::collection::vec(0u8..2, 1..=max).prop_map(|b| Configuration::new(b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn jump_times_equal_passage_times(
        eta0 in config_strategy(6),
        alpha in 0.2f64..2.0,
        beta in 0.2f64..2.0,
        seed in any::<u64>(),
    ) {
        let n = eta0.len();
        let params = Params::new(n, alpha, beta).unwrap();
        let spec = EnvironmentSpec::strip(alpha, beta, n).unwrap();
        let region = Region::support_rows(&spec, -(eta0.particles() as i64), 40).unwrap();
        let f = WeightField::sample(spec, region, seed);
        let (traj, labels) = tasep_from_weights(&f, &eta0, &params, 10.0).unwrap();
        prop_assert!(traj.validate().is_ok());
        let pf = passage_times(&f, Source::interface(GrowthInterface::from_config(&eta0))).unwrap();
        prop_assert!(check_label_identity(&labels, &pf, 10.0).is_ok());
    }

    #[test]
    fn dp_equals_enumeration(a in 0i64..=7, seed in any::<u64>()) {
        let b = 7 - a;
        let f = WeightField::sample(EnvironmentSpec::Homogeneous, Region::rectangle((0, 0), (a, b)), seed);
        let pf = passage_times(&f, Source::point((0, 0))).unwrap();
        prop_assert_eq!(max_path_weight(&f, (0, 0), (a, b)).unwrap(), pf.get((a, b)));
        let g = pf.geodesic((a, b)).unwrap();
        prop_assert_eq!(g.len(), 8);
        prop_assert!((g.weight(&|x: Site| f.get(x).unwrap()) - pf.get((a, b)).unwrap()).abs() <= 1e-12 * pf.get((a, b)).unwrap());
    }

    #[test]
    fn passage_times_increase_along_up_right_steps(w in 1usize..8, seed in any::<u64>()) {
        let spec = EnvironmentSpec::strip(0.5, 0.5, w).unwrap();
        let region = Region::support_rows(&spec, 0, 12).unwrap();
        let f = WeightField::sample(spec, region.clone(), seed);
        let pf = passage_times(&f, Source::point((1, 0))).unwrap();
        for x in region.iter() {
            let Some(g) = pf.get(x) else { continue };
            for y in [(x.0 + 1, x.1), (x.0, x.1 + 1)] {
                if let Some(h) = pf.get(y) {
                    prop_assert!(h > g);
                }
            }
        }
    }

    #[test]
    fn reversal_identity_holds(n in 1usize..10, m in 1i64..40, seed in any::<u64>()) {
        prop_assert!(verify_reversal_identity(n, m, seed).unwrap() <= 1e-9);
    }

    #[test]
    fn second_class_tracks_interface(
        bits in prop::collection::vec(0u8..2, 2..7),
        at in 0usize..6,
        seed in any::<u64>(),
    ) {
        let mut vals = bits;
        let at = at % vals.len();
        vals[at] = 2;
        let n = vals.len();
        let xi = DisagreementConfig { vals };
        let r = second_class_vs_interface(&xi, &Params::triple_point(n), 60.0, seed).unwrap();
        prop_assert!(r.identity_holds);
        prop_assert_eq!(r.monochromatic_violations, 0);
    }

    #[test]
    fn index_round_trip(n in 1usize..16, k in any::<usize>()) {
        let k = k % (1 << n);
        prop_assert_eq!(Configuration::from_index(n, k).index(), k);
    }

    #[test]
    fn stationary_law_is_a_distribution(n in 1usize..7, alpha in 0.1f64..3.0, beta in 0.1f64..3.0) {
        let pi = stationary_distribution(&build_generator(&Params::new(n, alpha, beta).unwrap()).unwrap()).unwrap();
        prop_assert!((pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(pi.iter().all(|&p| p > 0.0));
        let uniform = vec![1.0 / pi.len() as f64; pi.len()];
        let d = tv_distance(&pi, &uniform).unwrap();
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert_eq!(d, tv_distance(&uniform, &pi).unwrap());
    }
}
