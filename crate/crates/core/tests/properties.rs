use laakso::fractal::Address;
use laakso::geodesic::tail_sum;
use laakso::oracle::ApproxGraph;
use laakso::{
    classify, connect, distance, geodesic_path, minimal_interval, Enclosure, Point, Rational,
    ScaleFactor, SpaceConfig, Strategy as Route,
};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

fn address() -> impl Strategy<Value = Address> {
    (
        prop::collection::vec(0u8..=1, 0..5),
        prop::collection::vec(0u8..=1, 1..4),
    )
        .prop_map(|(p, c)| Address::new(p, c).unwrap())
}

fn height() -> impl Strategy<Value = Rational> {
    prop_oneof![
        (0i64..=81).prop_map(|j| r(j, 81)),
        (1i64..=20).prop_flat_map(|q| (0..=q).prop_map(move |j| r(j, q))),
    ]
}

fn point() -> impl Strategy<Value = Point> {
    (address(), height()).prop_map(|(a, h)| SpaceConfig::middle_third().canonicalize(a, h).unwrap())
}

fn two_thirds_pow(k: usize) -> Rational {
    r(2, 1) / Rational::from_integer(BigInt::from(3).pow(k as u32))
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 200,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn equality_matches_digit_window(a in address(), b in address()) {
        let window = 60;
        let same = (1..=window).all(|i| a.digit(i) == b.digit(i));
        prop_assert_eq!(a == b, same);
        let again: Address = a.to_string().parse().unwrap();
        prop_assert_eq!(again, a);
    }

    #[test]
    fn value_follows_lexicographic_order(a in address(), b in address()) {
        let s = Rational::from_integer(3.into());
        let (va, vb) = (a.value_exact(&s), b.value_exact(&s));
        prop_assert_eq!(va.cmp(&vb), a.cmp_lex(&b));
    }

    #[test]
    fn single_switch_moves_by_cell_gap(a in address(), k in 1usize..12) {
        let s = Rational::from_integer(3.into());
        let b = a.switch(k);
        prop_assert_eq!((a.value_exact(&s) - b.value_exact(&s)).abs(), two_thirds_pow(k));
        prop_assert_eq!(a.difference_orders(&b).iter().collect::<Vec<_>>(), vec![k]);
    }

    #[test]
    fn level_digits_round_trip(k in 1usize..8, seed in any::<u64>()) {
        let cfg = SpaceConfig::middle_third();
        let ms = cfg.mseq();
        let d = ms.denom(k).unwrap();
        let span = u64::try_from(d.clone()).unwrap();
        let mut n = 1 + seed % (span - 1);
        if n % 3 == 0 { n += 1; }
        if n >= span { n -= 2; }
        let y = Rational::new(BigInt::from(n), d);
        let level = ms.classify_height(&y).unwrap().unwrap();
        prop_assert_eq!(level.order, k);
        let digits = ms.digits(&level).unwrap();
        prop_assert_eq!(ms.omega_value(&digits).unwrap(), level);
    }

    #[test]
    fn non_levels_classify_as_none(
        (p, q) in prop::sample::select(vec![2i64, 4, 5, 7, 10, 11, 25])
            .prop_flat_map(|q| (1..q, Just(q)))
    ) {
        let cfg = SpaceConfig::middle_third();
        prop_assert!(cfg.mseq().classify_height(&r(p, q)).unwrap().is_none());
    }

    #[test]
    fn metric_axioms(x in point(), y in point(), z in point()) {
        let cfg = SpaceConfig::middle_third();
        let dxy = distance(&cfg, &x, &y).unwrap();
        prop_assert_eq!(&dxy, &distance(&cfg, &y, &x).unwrap());
        prop_assert_eq!(dxy.is_zero(), x == y);
        prop_assert!(dxy >= (x.height() - y.height()).abs());
        let dxz = distance(&cfg, &x, &z).unwrap();
        let dzy = distance(&cfg, &z, &y).unwrap();
        prop_assert!(dxy <= dxz + dzy);
    }

    #[test]
    fn geodesics_realize_the_distance(x in point(), y in point()) {
        prop_assume!(x != y);
        let cfg = SpaceConfig::middle_third();
        let d = distance(&cfg, &x, &y).unwrap();
        let g = geodesic_path(&cfg, &x, &y, 6).unwrap();
        g.validate(&cfg).unwrap();
        prop_assert_eq!(g.length(), Enclosure::Exact(d.clone()));
        prop_assert!(classify(&g).inversions() <= 2);
        let mi = minimal_interval(&cfg, &x, &y).unwrap();
        for s in g.segments() {
            prop_assert!(s.from >= mi.a && s.from <= mi.b && s.to >= mi.a && s.to <= mi.b);
        }
        for strategy in [Route::Nearest, Route::IncreasingOrder] {
            let p = connect(&cfg, &x, &y, strategy, 6).unwrap();
            p.validate(&cfg).unwrap();
            prop_assert!(p.length().interval().hi >= d);
        }
    }

    #[test]
    fn limit_heights_match_truncated_sums(x in point(), y in point()) {
        let cfg = SpaceConfig::middle_third();
        prop_assume!(!x.address().same_asymptotic(y.address()));
        let p = connect(&cfg, &x, &y, Route::IncreasingOrder, 3).unwrap();
        let q = connect(&cfg, &x, &y, Route::IncreasingOrder, 9).unwrap();
        prop_assert_eq!(&p.limit().unwrap().omega_bar, &q.limit().unwrap().omega_bar);
        prop_assert_eq!(p.length(), q.length());
    }
}

#[test]
fn levels_of_different_orders_are_disjoint() {
    let cfg = SpaceConfig::middle_third();
    let ms = cfg.mseq();
    let (zero, one) = (r(0, 1), r(1, 1));
    let mut seen = std::collections::HashMap::new();
    for k in 1..=6 {
        for w in ms.levels_in(k, &zero, &one).unwrap() {
            assert!(seen.insert(w.value.clone(), k).is_none(), "{} repeated", w.value);
        }
    }
}

#[test]
fn union_of_levels_is_dense_at_each_order() {
    let cfg = SpaceConfig::middle_third();
    let ms = cfg.mseq();
    let (zero, one) = (r(0, 1), r(1, 1));
    let mut all = Vec::new();
    for k in 1..=5 {
        all.extend(ms.levels_in(k, &zero, &one).unwrap().into_iter().map(|w| w.value));
        all.sort();
        let gap = r(2, 1) / Rational::from_integer(ms.denom(k).unwrap());
        for pair in all.windows(2) {
            assert!(&pair[1] - &pair[0] <= gap);
        }
    }
}

#[test]
fn nesting_is_strict_and_of_the_requested_order() {
    let cfg = SpaceConfig::middle_third();
    let ms = cfg.mseq();
    let (zero, one) = (r(0, 1), r(1, 1));
    let levels: Vec<_> = (1..=3).flat_map(|k| ms.levels_in(k, &zero, &one).unwrap()).collect();
    for w1 in &levels {
        for w2 in &levels {
            if w1.value == w2.value {
                continue;
            }
            for m in (w1.order.max(w2.order) + 1)..=5 {
                let w = ms.nested_between(w1, w2, m).unwrap();
                assert_eq!(w.order, m);
                let (lo, hi) = if w1.value < w2.value { (w1, w2) } else { (w2, w1) };
                assert!(lo.value < w.value && w.value < hi.value);
                assert_eq!(ms.classify_height(&w.value).unwrap(), Some(w));
            }
        }
    }
}

#[test]
fn four_adic_sequence_is_constant() {
    let cfg = SpaceConfig::new(ScaleFactor::from_dimension(r(3, 2)).unwrap());
    for i in 1..=32 {
        assert_eq!(cfg.mseq().m(i).unwrap(), BigInt::from(4));
    }
    cfg.mseq().validate(64).unwrap();
}

#[test]
fn derived_scale_geodesics_are_exact_in_length() {
    let cfg = SpaceConfig::new(ScaleFactor::from_dimension(r(13, 10)).unwrap());
    let x = cfg.parse_point("0@0").unwrap();
    let y = cfg.parse_point("(1)@1").unwrap();
    assert_eq!(distance(&cfg, &x, &y).unwrap(), r(1, 1));
    let g = geodesic_path(&cfg, &x, &y, 4).unwrap();
    g.validate(&cfg).unwrap();
    assert_eq!(g.length(), Enclosure::Exact(r(1, 1)));
    let limit = g.limit().unwrap();
    let iv = limit.omega_bar.interval();
    let d4 = Rational::from_integer(cfg.mseq().denom(4).unwrap());
    assert!(iv.width() <= d4.recip());
    let x = cfg.parse_point("(01)@1/3").unwrap();
    let y = cfg.parse_point("(10)@1/2").unwrap();
    let d = distance(&cfg, &x, &y).unwrap();
    let g = geodesic_path(&cfg, &x, &y, 3).unwrap();
    g.validate(&cfg).unwrap();
    assert_eq!(g.length(), Enclosure::Exact(d));
}

#[test]
fn tail_sum_enclosure_contains_long_partial_sums() {
    let cfg = SpaceConfig::new(ScaleFactor::from_dimension(r(13, 10)).unwrap());
    let orders = Address::constant(0).difference_orders(&Address::constant(1));
    let enclosure = tail_sum(cfg.mseq(), &orders, 2).unwrap();
    let mut partial = Rational::zero();
    for k in 3..=30 {
        partial += Rational::from_integer(cfg.mseq().denom(k).unwrap()).recip();
    }
    let iv = enclosure.interval();
    assert!(iv.lo <= partial && partial <= iv.hi);
}

#[test]
fn deeper_graphs_never_lengthen_paths() {
    let cfg = SpaceConfig::middle_third();
    let extras = [r(1, 5), r(1, 10)];
    let g2 = ApproxGraph::build(&cfg, 2, &extras).unwrap();
    let g3 = ApproxGraph::build(&cfg, 3, &extras).unwrap();
    let n = g2.vertex_count();
    for u in (0..n).step_by(5) {
        let x = g2.point_at(&cfg, u).unwrap();
        for v in (0..n).step_by(7) {
            let y = g2.point_at(&cfg, v).unwrap();
            let (d2, d3) = (
                g2.graph_distance(&cfg, &x, &y).unwrap(),
                g3.graph_distance(&cfg, &x, &y).unwrap(),
            );
            let d = distance(&cfg, &x, &y).unwrap();
            assert!(d2 >= d3 && d3 >= d);
            assert!(d3 >= (x.height() - y.height()).abs());
        }
    }
}
