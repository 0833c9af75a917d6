use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use proptest::prelude::*;
use quasilr::algebra::{FieldScalar, NumberField};
use quasilr::geometry::{arrangement_census, Halfspace, Hyperplane, Side, Window, WindowPolytope};

type P = (BigRational, BigRational);

fn r(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn square(k: &NumberField) -> Window {
    let v = |x: i64, y: i64| vec![k.int(x), k.int(y)];
    Window::new(2, vec![WindowPolytope::from_vertices(k, 2, None, vec![v(0, 0), v(4, 0), v(4, 4), v(0, 4)]).unwrap()]).unwrap()
}

fn line(k: &NumberField, a: i64, b: i64, c: i64) -> Hyperplane {
    Hyperplane::new(vec![k.int(a), k.int(b)], k.int(c)).unwrap()
}

fn inside(p: &P) -> bool {
    let (lo, hi) = (r(0), r(4));
    p.0 > lo && p.0 < hi && p.1 > lo && p.1 < hi
}

/// Faces of the open square cut by lines a·x + b·y = c: 1 + (lines meeting the interior)
/// + Σ over interior crossing points of (multiplicity − 1).
fn oracle(lines: &[(i64, i64, i64)]) -> usize {
    // canonical line keys so duplicates collapse
    let mut uniq: BTreeSet<(BigRational, BigRational, BigRational)> = BTreeSet::new();
    for &(a, b, c) in lines {
        let lead = if a != 0 { r(a) } else { r(b) };
        uniq.insert((r(a) / &lead, r(b) / &lead, r(c) / &lead));
    }
    let ls: Vec<_> = uniq.into_iter().collect();
    // a line meets the open square iff the corners are not all on one closed side
    let corners = [(0, 0), (4, 0), (4, 4), (0, 4)];
    let meets = |l: &(BigRational, BigRational, BigRational)| {
        let s: Vec<BigRational> = corners.iter().map(|&(x, y)| &l.0 * r(x) + &l.1 * r(y) - &l.2).collect();
        s.iter().any(|v| v > &r(0)) && s.iter().any(|v| v < &r(0))
    };
    let live: Vec<_> = ls.into_iter().filter(meets).collect();
    let mut points: BTreeMap<P, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..live.len() {
        for j in i + 1..live.len() {
            let (a1, b1, c1) = &live[i];
            let (a2, b2, c2) = &live[j];
            let det = a1 * b2 - a2 * b1;
            if det == r(0) {
                continue;
            }
            let p = ((c1 * b2 - c2 * b1) / &det, (a1 * c2 - a2 * c1) / &det);
            if inside(&p) {
                let e = points.entry(p).or_default();
                e.insert(i);
                e.insert(j);
            }
        }
    }
    1 + live.len() + points.values().map(|s| s.len() - 1).sum::<usize>()
}

fn lines_strategy() -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    prop::collection::vec((-3i64..=3, -3i64..=3, -6i64..=18), 0..7).prop_map(|v| v.into_iter().filter(|l| l.0 != 0 || l.1 != 0).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn face_count_matches_line_oracle(ls in lines_strategy()) {
        let k = NumberField::golden();
        let hs: Vec<Hyperplane> = ls.iter().map(|&(a, b, c)| line(&k, a, b, c)).collect();
        let arr = arrangement_census(&square(&k), &hs, true).unwrap();
        prop_assert_eq!(arr.face_count, oracle(&ls));
    }

    #[test]
    fn volumes_partition_the_window(ls in lines_strategy()) {
        let k = NumberField::golden();
        let hs: Vec<Hyperplane> = ls.iter().map(|&(a, b, c)| line(&k, a, b, c)).collect();
        let arr = arrangement_census(&square(&k), &hs, true).unwrap();
        let faces = arr.faces.unwrap();
        let total = faces.iter().fold(k.zero(), |s, f| &s + &f.volume);
        prop_assert_eq!(total, k.int(16));
        let min = faces.iter().map(|f| f.volume.clone()).min().unwrap();
        prop_assert_eq!(min, arr.min_volume);
        prop_assert!(faces.iter().all(|f| f.volume > k.zero()));
    }

    #[test]
    fn more_cutters_never_merge_faces(ls in lines_strategy(), extra in (-3i64..=3, 1i64..=3, -6i64..=18)) {
        let k = NumberField::golden();
        let mut hs: Vec<Hyperplane> = ls.iter().map(|&(a, b, c)| line(&k, a, b, c)).collect();
        let before = arrangement_census(&square(&k), &hs, false).unwrap();
        hs.push(line(&k, extra.0, extra.1, extra.2));
        let after = arrangement_census(&square(&k), &hs, false).unwrap();
        prop_assert!(after.face_count >= before.face_count);
        prop_assert!(after.min_volume <= before.min_volume);
    }
}

#[test]
fn irrational_cuts_of_an_interval() {
    let k = NumberField::golden();
    let phi = k.theta();
    let w = Window::new(1, vec![WindowPolytope::from_vertices(&k, 1, None, vec![vec![k.zero()], vec![phi.clone()]]).unwrap()]).unwrap();
    // cuts at 1, φ − 1 and a repeated 1; one outside
    let cuts = [k.one(), &phi - &k.one(), k.one(), k.int(3)];
    let hs: Vec<Hyperplane> = cuts.iter().map(|c| Hyperplane::new(vec![k.one()], c.clone()).unwrap()).collect();
    let arr = arrangement_census(&w, &hs, true).unwrap();
    assert_eq!(arr.face_count, 3);
    // pieces φ − 1, 2 − φ, φ − 1
    assert_eq!(arr.min_volume, &k.int(2) - &phi);
}

#[test]
fn touching_pieces_merge_across_shared_edges() {
    let k = NumberField::golden();
    let v = |x: i64, y: i64| vec![k.int(x), k.int(y)];
    let left = WindowPolytope::from_vertices(&k, 2, None, vec![v(0, 0), v(2, 0), v(2, 2), v(0, 2)]).unwrap();
    let right = WindowPolytope::from_vertices(&k, 2, None, vec![v(2, 0), v(4, 0), v(4, 2), v(2, 2)]).unwrap();
    let w = Window::new(2, vec![left, right]).unwrap();
    let none = arrangement_census(&w, &[], false).unwrap();
    assert_eq!(none.face_count, 1);
    assert_eq!(none.min_volume, k.int(8));
    // a cutter along the shared edge separates them again
    let cut = arrangement_census(&w, &[line(&k, 1, 0, 2)], false).unwrap();
    assert_eq!(cut.face_count, 2);
}

#[test]
fn three_dimensional_windows_are_rejected() {
    let k = NumberField::golden();
    let mut hs = Vec::new();
    for i in 0..3 {
        let e: Vec<FieldScalar> = (0..3).map(|j| if i == j { k.one() } else { k.zero() }).collect();
        hs.push(Halfspace::new(e.clone(), k.zero(), Side::Ge).unwrap());
        hs.push(Halfspace::new(e, k.one(), Side::Le).unwrap());
    }
    let w = Window::new(3, vec![WindowPolytope::from_halfspaces(&k, 3, None, hs).unwrap()]).unwrap();
    assert!(matches!(arrangement_census(&w, &[], false), Err(quasilr::Error::UnsupportedDimension(3))));
}
