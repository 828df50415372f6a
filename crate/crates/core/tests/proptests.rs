use proptest::prelude::*;

use colored_range::colortree::{ColorSplitTree, TesterMode};
use colored_range::data::merge_histograms;
use colored_range::k1::{build_exact_k1_dominance, K1Result, RangeFamily};
use colored_range::oracle::{oracle_colors, oracle_type2};
use colored_range::type2::{
    build_4sided, build_estimator, build_general, build_shallow_cutting, points_of, split_by_weight, Axis, Type2Params,
    WPoint,
};
use colored_range::{Color, Dataset, Histogram, RangeQuery, RawPoint, Rect, Seed};

fn raw_points(dim: usize, max_len: usize, coord: i64, colors: u32, wmax: i64) -> impl Strategy<Value = Vec<RawPoint>> {
    prop::collection::vec((prop::collection::vec(-coord..=coord, dim), 0..colors, 1..=wmax), 1..max_len)
        .prop_map(|v| v.into_iter().map(|(c, col, w)| RawPoint::weighted(&c, col, w)).collect())
}

fn rank_rect(m: usize) -> impl Strategy<Value = Rect> {
    let m = m as i64;
    (0..=m + 1, 0..=m + 1, 0..=m + 1, 0..=m + 1).prop_map(|(a, b, c, d)| Rect::unchecked(a.min(b), a.max(b), c.min(d), c.max(d)))
}

fn ds_and_rects(max_len: usize, colors: u32, wmax: i64) -> impl Strategy<Value = (Dataset, Vec<Rect>)> {
    raw_points(2, max_len, 50, colors, wmax).prop_flat_map(|raw| {
        let ds = Dataset::reduce_to_rank_space(&raw).unwrap();
        let m = ds.m();
        (Just(ds), prop::collection::vec(rank_rect(m), 1..20))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_mapping_preserves_dominance_membership(
        raw in raw_points(3, 60, 20, 6, 1),
        corners in prop::collection::vec(prop::array::uniform3(-22i64..=22), 1..20),
    ) {
        let ds = Dataset::reduce_to_rank_space(&raw).unwrap();
        for c in corners {
            let q = RangeQuery::Dominance3(c);
            let mapped = ds.map_query(&q).unwrap();
            for p in ds.points() {
                prop_assert_eq!(q.contains_original(p), mapped.contains(p));
            }
        }
    }

    #[test]
    fn rank_mapping_preserves_rect_membership(
        raw in raw_points(2, 60, 20, 6, 1),
        b in prop::array::uniform4(-22i64..=22),
    ) {
        let ds = Dataset::reduce_to_rank_space(&raw).unwrap();
        let q = RangeQuery::Rect2(Rect::unchecked(b[0].min(b[1]), b[0].max(b[1]), b[2].min(b[3]), b[2].max(b[3])));
        let mapped = ds.map_query(&q).unwrap();
        for p in ds.points() {
            prop_assert_eq!(q.contains_original(p), mapped.contains(p));
        }
    }

    #[test]
    fn histogram_merge_equals_bulk_sum(items in prop::collection::vec((0u32..20, 1u64..50), 0..60), cuts in prop::collection::vec(0usize..60, 0..4)) {
        let mut bounds: Vec<usize> = cuts.into_iter().map(|c| c.min(items.len())).collect();
        bounds.push(0);
        bounds.push(items.len());
        bounds.sort_unstable();
        let parts: Vec<Histogram> = bounds
            .windows(2)
            .map(|w| Histogram::from_items(items[w[0]..w[1]].iter().map(|&(c, w)| (Color(c), w))))
            .collect();
        let refs: Vec<&Histogram> = parts.iter().collect();
        let merged = merge_histograms(&refs).unwrap();
        let bulk = Histogram::from_items(items.iter().map(|&(c, w)| (Color(c), w)));
        prop_assert_eq!(merged.total_weight(), bulk.total_weight());
        prop_assert_eq!(merged, bulk);
    }

    #[test]
    fn split_by_weight_partitions_into_light_slabs(weights in prop::collection::vec(1u64..20, 0..80), threshold in 1u64..40) {
        let pts: Vec<WPoint> = weights.iter().enumerate().map(|(i, &w)| WPoint { x: i as i64, y: 0, color: Color(0), weight: w }).collect();
        let slabs = split_by_weight(&pts, Axis::X, threshold).unwrap();
        let mut next = 0;
        for s in &slabs {
            prop_assert_eq!(s.start, next);
            prop_assert!(s.end > s.start);
            next = s.end;
            // Dropping the last point leaves the slab within the threshold.
            let head: u64 = weights[s.start..s.end - 1].iter().sum();
            prop_assert!(head <= threshold);
        }
        prop_assert_eq!(next, weights.len());
    }

    #[test]
    fn estimator_counts_bracket_the_true_count((ds, rects) in ds_and_rects(80, 12, 1), t_yes in 1usize..6) {
        let pts = points_of(&ds);
        let e = build_estimator(&pts, 4, t_yes, t_yes * 16).unwrap();
        for r in rects {
            let k = oracle_type2(&ds, &r).unwrap().len();
            let counts = e.canonical_counts(r.x_lo, r.x_hi, r.y_lo, r.y_hi);
            prop_assert!(counts.iter().sum::<usize>() >= k);
            prop_assert!(counts.iter().all(|&c| c <= k));
            if e.estimate_many_colors(r.x_lo, r.x_hi, r.y_lo, r.y_hi).yes {
                prop_assert!(k <= t_yes * 16);
            }
        }
    }

    #[test]
    fn capped_answers_are_exact_or_justified_null((ds, rects) in ds_and_rects(120, 20, 5), tau in 1usize..6) {
        let st = build_4sided(&points_of(&ds), tau).unwrap();
        for r in rects {
            let want = oracle_type2(&ds, &r).unwrap();
            match st.query(r.x_lo, r.x_hi, r.y_lo, r.y_hi) {
                Some(h) => prop_assert_eq!(h, want),
                None => prop_assert!(want.len() > tau),
            }
        }
    }

    #[test]
    fn general_structure_matches_weighted_oracle((ds, rects) in ds_and_rects(120, 15, 9), tau in 2usize..10) {
        let base = Type2Params::defaults(ds.n());
        let params = Type2Params { tau, t_no: tau, t_yes: base.t_yes.min(tau), ..base };
        let st = build_general(&points_of(&ds), params).unwrap();
        for r in rects {
            let (h, _) = st.query_type2(&r).unwrap();
            prop_assert_eq!(h, oracle_type2(&ds, &r).unwrap());
        }
    }

    #[test]
    fn shallow_cutting_invariants(raw in raw_points(2, 120, 1000, 15, 1), t in 1usize..6) {
        let ds = Dataset::reduce_to_rank_space(&raw).unwrap();
        let pts = points_of(&ds);
        let sc = build_shallow_cutting(&pts, t);
        prop_assert!(sc.len() <= 4 * ds.m() / t + 1);
        prop_assert!(sc.corners.windows(2).all(|w| w[0].0 > w[1].0 && w[0].1 < w[1].1));
        for (&(x, y), cl) in sc.corners.iter().zip(&sc.clists) {
            prop_assert!(cl.len() <= 2 * t);
            prop_assert_eq!(cl.clone(), oracle_type2(&ds, &Rect::two_sided(x, y)).unwrap().colors());
        }
        for p in &pts {
            if sc.locate(p.x, p.y).is_none() {
                prop_assert!(oracle_type2(&ds, &Rect::two_sided(p.x, p.y)).unwrap().len() >= t);
            }
        }
    }

    #[test]
    fn exact_tester_and_color_tree_match_oracle(
        raw in raw_points(3, 80, 30, 10, 1),
        corners in prop::collection::vec(prop::array::uniform3(0i64..=80), 1..20),
        seed in any::<u64>(),
    ) {
        let ds = Dataset::reduce_to_rank_space(&raw).unwrap();
        let k1 = build_exact_k1_dominance(&ds, Seed(seed)).unwrap();
        let tree = ColorSplitTree::build(&ds, TesterMode::Exact, RangeFamily::Dominance3, 20, Seed(seed)).unwrap();
        for c in corners {
            let q = RangeQuery::Dominance3(c);
            let want = oracle_colors(&ds, &q).unwrap();
            let got = k1.query(&c);
            match (&got, want.len()) {
                (K1Result::Empty, 0) | (K1Result::Multi, 2..) => {}
                (K1Result::Single(col, w), 1) => {
                    prop_assert_eq!(*col, want[0]);
                    prop_assert!(q.contains(ds.point(*w)));
                }
                _ => prop_assert!(false, "{:?} vs {:?}", got, want),
            }
            prop_assert_eq!(tree.report_colors(&ds, &q).unwrap().0, want);
        }
    }
}
