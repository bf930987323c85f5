use probmet::functors::{ddf_to_levels, levels_to_ddf};
use probmet::gen;
use probmet::spaces::Witness;
use probmet::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ext() -> impl Strategy<Value = ExtReal> {
    prop_oneof![
        1 => Just(ExtReal::Infinite),
        6 => (0..60u64, 1..9u64).prop_map(|(p, q)| ExtReal::ratio(p, q)),
    ]
}

fn level() -> impl Strategy<Value = UnitVal> {
    (1..=24u64).prop_map(|k| UnitVal::ratio(k, 24))
}

fn level_function() -> impl Strategy<Value = LevelFunction> {
    proptest::collection::vec((1..24u64, ext()), 0..5).prop_map(|raw| {
        let mut cuts: Vec<u64> = raw.iter().map(|(c, _)| *c).collect();
        cuts.sort();
        cuts.dedup();
        cuts.push(24);
        let mut values: Vec<ExtReal> = raw.into_iter().map(|(_, v)| v).collect();
        values.push(ExtReal::zero());
        values.sort_by(|a, b| b.cmp(a));
        let pieces = cuts
            .iter()
            .zip(values)
            .map(|(&c, v)| (UnitVal::ratio(c, 24), v))
            .collect();
        LevelFunction::new(pieces).unwrap()
    })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn addition_is_associative_and_commutative(a in ext(), b in ext(), c in ext()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert!(&a + &b >= a);
    }

    #[test]
    fn comparison_is_a_total_order(a in ext(), b in ext(), c in ext()) {
        use std::cmp::Ordering::*;
        prop_assert_eq!(ext_cmp(&a, &b), ext_cmp(&b, &a).reverse());
        if ext_cmp(&a, &b) != Greater && ext_cmp(&b, &c) != Greater {
            prop_assert_ne!(ext_cmp(&a, &c), Greater);
        }
        if ext_cmp(&a, &b) == Equal {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn rational_strings_round_trip(a in ext(), l in level()) {
        prop_assert_eq!(a.to_string().parse::<ExtReal>().unwrap(), a);
        prop_assert_eq!(l.to_string().parse::<UnitVal>().unwrap(), l);
    }

    #[test]
    fn sup_and_min_are_pointwise(f in level_function(), g in level_function(), h in level_function()) {
        let sup = pointwise_sup(&[&f, &g, &h]).unwrap();
        let min = pointwise_min(&[&f, &g, &h]).unwrap();
        for k in 1..=96u64 {
            let l = UnitVal::ratio(k, 96);
            let vals = [f.eval(&l).unwrap(), g.eval(&l).unwrap(), h.eval(&l).unwrap()];
            prop_assert_eq!(sup.eval(&l).unwrap(), vals.iter().max().copied().unwrap());
            prop_assert_eq!(min.eval(&l).unwrap(), vals.iter().min().copied().unwrap());
        }
    }

    #[test]
    fn canonical_form_is_idempotent(f in level_function()) {
        prop_assert_eq!(LevelFunction::new(f.pieces().to_vec()).unwrap(), f.clone());
        prop_assert!(f.pieces().windows(2).all(|w| w[0].1 > w[1].1));
    }

    #[test]
    fn stored_form_is_left_continuous(f in level_function(), l in level()) {
        // the value at λ is attained just below λ
        let at = f.eval(&l).unwrap();
        let below = f
            .endpoints()
            .filter(|b| **b < l)
            .last()
            .cloned()
            .unwrap_or_else(UnitVal::zero);
        for k in 1..6u64 {
            let t = UnitVal::ratio(k, 6);
            let rho = below.lerp(&l, t.as_rational());
            prop_assert_eq!(f.eval(&rho).unwrap(), at);
        }
        let mut prev = &ExtReal::Infinite;
        for k in 1..=48u64 {
            let v = f.eval(&UnitVal::ratio(k, 48)).unwrap();
            prop_assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn conversions_invert_on_functions(f in level_function()) {
        let alpha = levels_to_ddf(&f);
        prop_assert_eq!(ddf_to_levels(&alpha), f.clone());
        // d_λ < γ  ⇔  α(γ) > 1 − λ
        for k in 1..=24u64 {
            let l = UnitVal::ratio(k, 24);
            for g in 0..=40u64 {
                let gamma = ExtReal::ratio(g, 4);
                prop_assert_eq!(
                    f.eval(&l).unwrap() < &gamma,
                    alpha.eval(&gamma) > l.complement()
                );
            }
        }
    }

    #[test]
    fn round_trips_on_spaces(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = gen::tnorm(&mut r);
        let s = gen::valid_level_space(&mut r, 5, t);
        prop_assert_eq!(delta(&phi(&s)), s.clone());
        let a = phi(&s);
        prop_assert_eq!(phi(&delta(&a)), a);
    }

    #[test]
    fn generated_spaces_are_valid(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = gen::tnorm(&mut r);
        let s = gen::valid_level_space(&mut r, 5, t);
        prop_assert!(validate_level_space(&s).passed());
        prop_assert!(validate_ddf_space(&phi(&s)).passed());
        prop_assert!(ut_oracle_grid(&s, 12).passed());
    }

    #[test]
    fn corrupted_spaces_fail_with_replayable_witnesses(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = gen::tnorm(&mut r);
        let s = gen::valid_level_space(&mut r, 5, t);
        if let Some(bad) = gen::corrupt(&mut r, &s) {
            let lr = validate_level_space(&bad);
            let dr = validate_ddf_space(&phi(&bad));
            prop_assert!(!lr.passed());
            prop_assert!(!dr.passed());
            for w in &lr.witnesses {
                prop_assert!(w.replay_levels(&bad), "{}", w.render(bad.points()));
            }
            for w in &dr.witnesses {
                prop_assert!(w.replay_ddf(&phi(&bad)), "{}", w.render(bad.points()));
            }
        }
    }

    #[test]
    fn mixed_triangle_witnesses_are_strict(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = gen::tnorm(&mut r);
        let s = gen::valid_level_space(&mut r, 5, t);
        let Some(bad) = gen::corrupt(&mut r, &s) else { return Ok(()) };
        for w in validate_level_space(&bad).witnesses {
            if let Witness::MixedTriangle { x, y, z, eps, lambda, lambda2, .. } = w {
                let guard = t.apply(&lambda2.complement(), &lambda.complement());
                prop_assert!(guard > eps.complement());
                let lhs = bad.dist(x, z).eval(&eps).unwrap();
                let rhs = bad.dist(x, y).eval(&lambda).unwrap() + bad.dist(y, z).eval(&lambda2).unwrap();
                prop_assert!(*lhs > rhs);
            }
        }
    }

    #[test]
    fn maps_get_the_same_verdict_in_both_forms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = gen::tnorm(&mut r);
        let x = gen::valid_level_space(&mut r, 5, t);
        let y = gen::valid_level_space(&mut r, 5, t);
        if let Some(f) = gen::map(&mut r, x.points(), y.points()) {
            let lv = is_nonexpansive(&f, &x, &y).unwrap().passed();
            let dv = is_nonexpansive(&f, &phi(&x), &phi(&y)).unwrap().passed();
            prop_assert_eq!(lv, dv);
            // the same map out of the pulled-back structure always passes
            let src = StructuredSource::new(
                x.points().to_vec(),
                vec![(PointMap::identity(x.points()), x.clone()), (f.clone(), y.clone())],
            ).unwrap();
            let finer = initial_lift(&src).unwrap();
            prop_assert!(is_nonexpansive(&f, &finer, &y).unwrap().passed());
            prop_assert!(is_nonexpansive(&f, &phi(&finer), &phi(&y)).unwrap().passed());
        }
    }
}

#[test]
fn tnorm_laws_hold_on_a_fine_grid() {
    let grid: Vec<UnitVal> = (0..=16).map(|k| UnitVal::ratio(k, 16)).collect();
    for t in TNorm::ALL {
        assert!(tnorm_laws_check(&t, &grid).passed(), "{t}");
        assert_eq!(t.apply(&UnitVal::one(), &UnitVal::ratio(3, 7)), UnitVal::ratio(3, 7));
    }
}
