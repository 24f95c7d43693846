use std::sync::OnceLock;

use cantorloop::cantor::cantor3_split;
use cantorloop::cantor::corner_word_value;
use cantorloop::curve::{
    build_polyline, dist_sq, eval, length_stats, link_point, lower_bound, modulus_check, polyline_is_simple,
    witness_bound_sq, witness_pair, CirclePos, CurveError,
};
use cantorloop::exact::{rat, rat_int, rat_pow_inv, Rat};
use cantorloop::param::{address_to_param, endpoints, gap_interval, Address, Pad};
use cantorloop::pattern::{pattern_closure, root_entry, root_exit, PatternTable, SearchOptions};
use cantorloop::{Box3, Point3};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn table() -> &'static PatternTable {
    static T: OnceLock<PatternTable> = OnceLock::new();
    T.get_or_init(|| pattern_closure(SearchOptions::default()).expect("closure exists"))
}

fn diam_sq(n: usize) -> Rat {
    rat_int(3) * rat_pow_inv(9, n as u32)
}

#[test]
fn eval_examples() {
    for n in 0..5 {
        let a = eval(table(), &CirclePos::Fractal(rat_int(0)), n).unwrap();
        assert_eq!(a.point, root_entry().to_rational());
        assert!(a.error_sq <= diam_sq(n));
        let b = eval(table(), &CirclePos::Fractal(rat_int(1)), n).unwrap();
        assert_eq!(b.point, root_exit().to_rational());
        assert!(b.error_sq <= diam_sq(n));
    }
    let r = eval(table(), &CirclePos::Return(rat(1, 2)), 3).unwrap();
    assert_eq!(r.point, [rat(1, 2), rat_int(0), rat_int(0)]);
    assert!(r.error_sq.is_zero());
    for u in [rat_int(0), rat_int(1), rat(3, 2)] {
        assert!(matches!(eval(table(), &CirclePos::Return(u), 1), Err(CurveError::ReturnOutOfRange(_))));
    }
}

#[test]
fn gap_values_follow_the_link() {
    let tree = table().tree();
    for s in [Address::root(), Address::new(vec![3]).unwrap(), Address::new(vec![0, 7]).unwrap()] {
        let node = tree.node(&s).unwrap();
        let links = tree.links(&node).unwrap();
        for j in 0..7u8 {
            let gap = gap_interval(&s, j).unwrap();
            let (lo, len) = (gap.lo.to_rational(), gap.length().to_rational());
            for u in [rat(1, 4), rat(1, 2), rat(5, 7)] {
                let t = &lo + &len * &u;
                let v = eval(table(), &CirclePos::Fractal(t), 6).unwrap();
                assert!(v.error_sq.is_zero());
                assert_eq!(v.point, link_point(&links[j as usize], &u));
            }
        }
    }
}

#[test]
fn endpoint_coherence() {
    let tree = table().tree();
    for n in 0..=3 {
        for x in Address::all_of_length(n) {
            let t = address_to_param(&x, Pad::Zero).to_rational();
            let want = tree.node(&x).unwrap().entry.to_rational();
            for depth in n..=n + 2 {
                let v = eval(table(), &CirclePos::Fractal(t.clone()), depth).unwrap();
                assert_eq!(v.point, want, "address {x} depth {depth}");
            }
        }
    }
}

#[test]
fn polyline_counts() {
    let p0 = build_polyline(table(), 0).unwrap();
    assert_eq!(p0.len(), 2);
    assert_eq!(p0.points().cloned().collect::<Vec<_>>(), vec![root_entry(), root_exit()]);
    assert!(p0.closed);
    let p1 = build_polyline(table(), 1).unwrap();
    assert_eq!(p1.len(), 16);
    assert_eq!(p1.edges().len(), 16);
    // straight links: 2 vertices per depth-n cube
    for n in 2..=4 {
        assert_eq!(build_polyline(table(), n).unwrap().len(), 2 * 8usize.pow(n as u32));
    }
}

#[test]
fn polyline_exports() {
    let p1 = build_polyline(table(), 1).unwrap();
    let obj = p1.to_obj();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 16);
    let l: Vec<&str> = obj.lines().filter(|l| l.starts_with("l ")).collect();
    assert_eq!(l.len(), 1);
    let idx: Vec<usize> = l[0][2..].split(' ').map(|x| x.parse().unwrap()).collect();
    assert_eq!(idx.len(), 17);
    assert_eq!(idx.first(), idx.last());
    let csv = p1.to_csv();
    assert!(csv.starts_with("t_numerator,t_denom_exp15,x,y,z\n"));
    assert_eq!(csv.lines().count(), 17);
    assert!(!csv.contains('\r'));
}

#[test]
fn polyline_range_and_cube_confinement() {
    let tree = table().tree();
    for n in 0..=3 {
        let poly = build_polyline(table(), n).unwrap();
        let unit = Box3::unit();
        assert!(poly.points().all(|p| unit.contains_point(p)));
        let level = tree.level(n).unwrap();
        for (i, node) in level.iter().enumerate() {
            let (a, b) = (&poly.vertices[2 * i], &poly.vertices[2 * i + 1]);
            let (lo, hi) = endpoints(&node.address);
            assert_eq!((&a.t, &b.t), (lo.value(), hi.value()));
            for k in 0..=n {
                let cube = tree.node(&node.address.prefix(k)).unwrap().cube;
                assert!(cube.contains_point(&a.point) && cube.contains_point(&b.point));
            }
        }
        // parameters strictly increase along the polyline
        assert!(poly.vertices.windows(2).all(|w| w[0].t < w[1].t));
    }
}

#[test]
fn polyline_is_simple_at_small_depth() {
    // at depth 0 the closing edge retraces the single chord
    assert!(!polyline_is_simple(&build_polyline(table(), 0).unwrap()));
    for n in 1..=2 {
        assert!(polyline_is_simple(&build_polyline(table(), n).unwrap()), "depth {n}");
    }
}

#[test]
fn simplicity_check_catches_a_crossing() {
    let mut poly = build_polyline(table(), 1).unwrap();
    // (4/9,0,0) lies on the closing edge from (2/3,0,0) to (1/3,0,0)
    let v = poly.vertices[3].clone();
    poly.vertices[3].point = Point3::from_ints([4, 0, 0], 2);
    assert!(!polyline_is_simple(&poly));
    poly.vertices[3] = v;
    assert!(polyline_is_simple(&poly));
}

#[test]
fn witness_examples() {
    let zero = [rat_int(0), rat_int(0), rat_int(0)];
    let w = witness_pair(table(), &zero, 4).unwrap();
    // both words are all-origin, so both witnesses are the same point of
    // the origin cube; its parameter is set by the slots holding corner 000
    assert_eq!(w.positions.0, w.positions.1);
    assert!(Box3::new(Point3::origin(), 4).contains_point(&w.points.0));
    assert!(w.deviation_sq <= diam_sq(4));
    let one = [rat_int(1), rat_int(1), rat_int(1)];
    for n in 1..6 {
        let w = witness_pair(table(), &one, n).unwrap();
        assert!(w.deviation_sq <= witness_bound_sq(n));
    }
    let half = [rat(1, 2), rat(1, 2), rat(1, 2)];
    let w = witness_pair(table(), &half, 6).unwrap();
    assert!(w.deviation_sq <= witness_bound_sq(6));
    // 2√3/729 = 0.0047518…
    assert!(rat(4751, 1_000_000).pow(2) < witness_bound_sq(6) && witness_bound_sq(6) < rat(4752, 1_000_000).pow(2));
}

#[test]
fn witnesses_are_sound_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let n = rng.random_range(0..=6usize);
        let y: [Rat; 3] = std::array::from_fn(|_| {
            let q = rng.random_range(1..10_000i64);
            rat(rng.random_range(0..=q), q)
        });
        let w = witness_pair(table(), &y, n).unwrap();
        assert!(w.deviation_sq <= witness_bound_sq(n));
        // independent check: each curve point lies in the depth-n cube of its word
        let (p, q) = cantor3_split(&y, n).unwrap();
        for (word, pt) in [(&p, &w.points.0), (&q, &w.points.1)] {
            let cube = Box3::new(corner_word_value(word), n as u32);
            assert!(cube.contains_point(pt));
        }
        // and the reported positions evaluate to those points
        let a = eval(table(), &w.positions.0, n).unwrap();
        assert_eq!(a.point, w.points.0.to_rational());
        assert_eq!(dist_sq(&w.midpoint, &y), w.deviation_sq);
    }
}

#[test]
fn length_grows_past_the_lower_bound() {
    for n in 0..=6 {
        // closed form (7/5)((8/3)^n − 1)
        let closed = rat(7, 5) * (Rat::new(8.into(), 3.into()).pow(n as i32) - rat_int(1));
        assert_eq!(lower_bound(n), closed);
    }
    assert_eq!(lower_bound(3), rat(679, 27));
    for n in 0..=3 {
        let s = length_stats(table(), n).unwrap();
        assert!(s.polyline_length >= s.lower_bound_f64, "{s:?}");
    }
    assert!(length_stats(table(), 3).unwrap().polyline_length > 25.0);
}

#[test]
fn modulus_shrinks_with_depth() {
    let r1 = modulus_check(table(), 1, 4).unwrap();
    let r2 = modulus_check(table(), 2, 4).unwrap();
    assert!(r1.within_bound && r2.within_bound, "{r1:?} {r2:?}");
    assert!(r2.max_adjacent < r1.max_adjacent);
    assert!(r2.wrap_distance < r1.wrap_distance);
    assert!(modulus_check(table(), 0, 4).is_err());
    assert!(modulus_check(table(), 1, 0).is_err());
}

#[test]
fn gap_steps_are_link_fractions() {
    // inside one root gap, samples k·15^-1/m land on the link at u = k/m
    let m = 4;
    let gap = gap_interval(&Address::root(), 0).unwrap();
    let lo = gap.lo.to_rational();
    let step = rat(1, 15 * m);
    let link = &table().tree().links(&table().tree().root()).unwrap()[0];
    let len_sq = dist_sq(&link_point(link, &rat_int(0)), &link_point(link, &rat_int(1)));
    let mut prev = eval(table(), &CirclePos::Fractal(lo.clone()), 1).unwrap().point;
    for k in 1..=m {
        let t = &lo + &step * rat_int(k);
        let cur = eval(table(), &CirclePos::Fractal(t), 1).unwrap().point;
        assert_eq!(dist_sq(&prev, &cur), &len_sq / rat_int(m * m));
        prev = cur;
    }
}
