use probmet::bridge::MetricSpace;
use probmet::gen;
use probmet::topology::oracle;
use probmet::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shortest path by enumerating every simple path.
fn path_oracle(m: &MetricSpace, x: usize, z: usize) -> ExtReal {
    fn walk(m: &MetricSpace, at: usize, z: usize, seen: &mut Vec<bool>, acc: ExtReal, best: &mut ExtReal) {
        if at == z {
            if acc < *best {
                *best = acc;
            }
            return;
        }
        for next in 0..m.len() {
            if !seen[next] {
                seen[next] = true;
                walk(m, next, z, seen, &acc + &m.dist(at, next), best);
                seen[next] = false;
            }
        }
    }
    let mut seen = vec![false; m.len()];
    seen[x] = true;
    let mut best = ExtReal::Infinite;
    walk(m, x, z, &mut seen, ExtReal::zero(), &mut best);
    best
}

fn levelwise_le(a: &LevelSpace, b: &LevelSpace) -> bool {
    a.table().iter().zip(b.table()).all(|(x, y)| x.le(y))
}

fn valid_space(r: &mut ChaCha8Rng, max: usize, t: TNorm) -> LevelSpace {
    gen::valid_level_space(r, max, t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lifts_are_initial(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = gen::tnorm(&mut r);
        let n = r.gen_range(1..=4);
        let domain = gen::ids(n);
        let legs: Vec<(PointMap, LevelSpace)> = (0..r.gen_range(1..=3))
            .filter_map(|_| {
                let mut y = valid_space(&mut r, 4, t);
                while y.is_empty() {
                    y = valid_space(&mut r, 4, t);
                }
                gen::map(&mut r, &domain, y.points()).map(|f| (f, y))
            })
            .collect();
        let src = StructuredSource::new(domain.clone(), legs.clone()).unwrap();
        let lift = initial_lift(&src).unwrap();
        prop_assert!(validate_level_space(&lift).passed());
        for (f, y) in &legs {
            prop_assert!(is_nonexpansive(f, &lift, y).unwrap().passed());
        }
        // h is non-expansive into the lift iff every composite is
        let z = valid_space(&mut r, 4, t);
        if let Some(h) = gen::map(&mut r, z.points(), &domain) {
            let all = legs.iter().all(|(f, y)| {
                is_nonexpansive(&h.then(f).unwrap(), &z, y).unwrap().passed()
            });
            prop_assert_eq!(is_nonexpansive(&h, &z, &lift).unwrap().passed(), all);
        }
        // structures making every leg non-expansive lie above the lift
        let candidate = Space::from_fn(domain.clone(), t, false, |i, j| {
            let bump = LevelFunction::constant(gen::positive(&mut r, 3));
            if r.gen_bool(0.5) {
                pointwise_sup(&[lift.dist(i, j), &bump]).unwrap()
            } else {
                bump
            }
        }).unwrap();
        if legs.iter().all(|(f, y)| is_nonexpansive(f, &candidate, y).unwrap().passed()) {
            prop_assert!(levelwise_le(&lift, &candidate));
        }
        if src.is_point_separating() && legs.iter().all(|(_, y)| y.separated()) {
            prop_assert!(lift.separated());
        }
    }

    #[test]
    fn products_project_and_stay_valid(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = gen::tnorm(&mut r);
        let factors: Vec<LevelSpace> = (0..r.gen_range(1..=3)).map(|_| valid_space(&mut r, 3, t)).collect();
        let (p, proj) = product(&factors).unwrap();
        prop_assert_eq!(p.len(), factors.iter().map(|f| f.len()).product::<usize>());
        prop_assert!(validate_level_space(&p).passed());
        for (pr, f) in proj.iter().zip(&factors) {
            prop_assert!(is_nonexpansive(pr, &p, f).unwrap().passed());
        }
    }

    #[test]
    fn quotient_preserves_and_reflects(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = gen::tnorm(&mut r);
        let s = valid_space(&mut r, 5, t);
        let (q, m) = t0_quotient(&s).unwrap();
        prop_assert!(validate_level_space(&q).passed());
        prop_assert!(m.is_surjective());
        for i in 0..s.len() {
            for j in 0..s.len() {
                prop_assert_eq!(q.dist(m.apply(i), m.apply(j)), s.dist(i, j));
            }
        }
        let y = valid_space(&mut r, 4, t);
        if y.separated() && !y.is_empty() {
            if let Some(g) = gen::map(&mut r, q.points(), y.points()) {
                let through = m.then(&g).unwrap();
                prop_assert_eq!(
                    is_nonexpansive(&g, &q, &y).unwrap().passed(),
                    is_nonexpansive(&through, &s, &y).unwrap().passed()
                );
            }
        }
    }

    #[test]
    fn closure_characterizations_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = gen::tnorm(&mut r);
        let s = valid_space(&mut r, 6, t);
        let a = gen::subset(&mut r, s.len());
        let cl = closure(&s, &a).unwrap();
        for y in 0..s.len() {
            let c = cl.contains(&y);
            prop_assert_eq!(oracle::by_neighbourhoods(&s, &a, y), c);
            prop_assert_eq!(oracle::by_radii(&s, &a, y), c);
            prop_assert_eq!(oracle::by_diagonal(&s, &a, y), c);
        }
        if s.separated() {
            prop_assert_eq!(&cl, &a);
            prop_assert!(strong_topology(&s).is_discrete());
        }
    }

    #[test]
    fn closure_operator_laws(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = gen::tnorm(&mut r);
        let s = valid_space(&mut r, 6, t);
        let a = gen::subset(&mut r, s.len());
        let b = gen::subset(&mut r, s.len());
        let cl = |x: &PointSet| closure(&s, x).unwrap();
        prop_assert!(cl(&PointSet::new()).is_empty());
        prop_assert!(a.is_subset(&cl(&a)));
        prop_assert_eq!(cl(&cl(&a)), cl(&a));
        let ab: PointSet = a.union(&b).copied().collect();
        let union: PointSet = cl(&a).union(&cl(&b)).copied().collect();
        prop_assert_eq!(cl(&ab), union);
        prop_assert!(cl(&a).is_subset(&cl(&ab)));
        let y = valid_space(&mut r, 5, t);
        if let Some(f) = gen::map(&mut r, s.points(), y.points()) {
            if is_nonexpansive(&f, &s, &y).unwrap().passed() {
                let image_of_closure = f.image_of(&cl(&a));
                prop_assert!(image_of_closure.is_subset(&closure(&y, &f.image_of(&a)).unwrap()));
            }
        }
    }

    #[test]
    fn witnesses_separate_exactly_the_outside(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = gen::tnorm(&mut r);
        let s = valid_space(&mut r, 5, t);
        let a = gen::subset(&mut r, s.len());
        let cl = closure(&s, &a).unwrap();
        let mut family = Vec::new();
        for y in 0..s.len() {
            match cospan_witness(&s, &a, y) {
                Ok(c) => {
                    prop_assert!(!cl.contains(&y));
                    prop_assert!(validate_level_space(&c.target).passed());
                    prop_assert!(c.target.separated());
                    prop_assert!(is_nonexpansive(&c.u, &s, &c.target).unwrap().passed());
                    prop_assert!(is_nonexpansive(&c.v, &s, &c.target).unwrap().passed());
                    prop_assert!(cl.iter().all(|&p| c.u.apply(p) == c.v.apply(p)));
                    prop_assert_ne!(c.u.apply(y), c.v.apply(y));
                    family.push(c);
                }
                Err(Error::PointInClosure(_)) => prop_assert!(cl.contains(&y)),
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
        prop_assert_eq!(reg_closure_sampled(&s, &a, &family).unwrap(), cl);
    }

    #[test]
    fn t0_characterizations_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = gen::tnorm(&mut r);
        let s = valid_space(&mut r, 5, t);
        let report = is_t0(&s).unwrap();
        prop_assert_eq!(report.holds(), s.pairs().all(|(_, _, d)| !d.is_zero()));
    }

    #[test]
    fn epis_are_the_dense_maps(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = gen::tnorm(&mut r);
        let x = valid_space(&mut r, 4, t);
        let y = valid_space(&mut r, 4, t);
        let Some(f) = gen::map(&mut r, x.points(), y.points()) else { return Ok(()) };
        let Ok(cls) = classify_morphism(&f, &x, &y) else { return Ok(()) };
        // right-cancellable against every witness cospan of the image
        let image = f.image();
        let cancellable = (0..y.len()).all(|p| match cospan_witness(&y, &image, p) {
            Ok(c) => c.u.apply(p) == c.v.apply(p),
            Err(_) => true,
        });
        prop_assert_eq!(cls.epi, cancellable);
        prop_assert_eq!(cls.mono, f.is_injective());
    }

    #[test]
    fn path_metric_matches_enumeration(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(0..=6);
        let raw = MetricSpace::from_fn(gen::ids(n), false, |_, _| {
            if r.gen_ratio(1, 6) { ExtReal::Infinite } else { gen::positive(&mut r, 6) }
        }).unwrap();
        let done = path_metric(&raw);
        for x in 0..n {
            for z in 0..n {
                if x != z {
                    prop_assert_eq!(done.dist(x, z), path_oracle(&raw, x, z));
                }
            }
        }
        prop_assert!(done.validate().is_ok());
        prop_assert_eq!(path_metric(&done), done);
    }

    #[test]
    fn metrics_embed_fully(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = gen::tnorm(&mut r);
        let n = r.gen_range(0..=5);
        let pseudo = r.gen_bool(0.3);
        let m = gen::metric(&mut r, n, pseudo);
        let s = embed_metric(&m, t).unwrap();
        prop_assert!(validate_level_space(&s).passed());
        prop_assert_eq!(&coreflect(&s).unwrap().0, &m);
        if m.separated() {
            let (back, q) = reflect(&s).unwrap();
            prop_assert_eq!(&back, &m);
            prop_assert_eq!(q, PointMap::identity(m.points()));
        }
    }

    #[test]
    fn coreflection_and_reflection_factor(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = gen::tnorm(&mut r);
        let s = valid_space(&mut r, 5, t);
        let (upper, _) = coreflect(&s).unwrap();
        prop_assert!(upper.validate().is_ok());
        let (lower, q) = reflect(&s).unwrap();
        prop_assert!(lower.validate().is_ok());
        for i in 0..s.len() {
            for j in 0..s.len() {
                let d1 = if i == j { ExtReal::zero() } else { s.dist(i, j).last_value().clone() };
                prop_assert!(lower.dist(q.apply(i), q.apply(j)) <= d1);
                prop_assert!(d1 <= upper.dist(i, j));
            }
        }
        // maps from an embedded metric into s also land in the coreflection
        let zn = r.gen_range(0..=4);
        let zm = gen::metric(&mut r, zn, false);
        let z = embed_metric(&zm, t).unwrap();
        if let Some(f) = gen::map(&mut r, z.points(), s.points()) {
            if is_nonexpansive(&f, &z, &s).unwrap().passed() {
                let up = embed_metric(&upper, t).unwrap();
                prop_assert!(is_nonexpansive(&f, &z, &up).unwrap().passed());
            }
        }
        // maps from s into an embedded metric factor through the reflection
        let wn = r.gen_range(1..=4);
        let wm = gen::metric(&mut r, wn, false);
        let w = embed_metric(&wm, t).unwrap();
        if let Some(f) = gen::map(&mut r, s.points(), w.points()) {
            if is_nonexpansive(&f, &s, &w).unwrap().passed() {
                let mut assign = vec![None; lower.len()];
                for i in 0..s.len() {
                    let slot = &mut assign[q.apply(i)];
                    prop_assert!(slot.is_none() || *slot == Some(f.apply(i)));
                    *slot = Some(f.apply(i));
                }
                let assign: Vec<usize> = assign.into_iter().map(Option::unwrap).collect();
                let fstar = PointMap::new(lower.points().to_vec(), w.points().to_vec(), assign).unwrap();
                prop_assert_eq!(q.then(&fstar).unwrap(), f);
                let low = embed_metric(&lower, t).unwrap();
                prop_assert!(is_nonexpansive(&fstar, &low, &w).unwrap().passed());
            }
        }
    }
}
