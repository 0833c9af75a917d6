use std::collections::BTreeSet;

use num_rational::BigRational;
use proptest::prelude::*;
use quasilr::fixtures;
use quasilr::geometry::Location;
use quasilr::io::{parse_scheme, pattern_csv, scheme_to_json};
use quasilr::scheme::Scheme;
use quasilr::Error;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn coords(s: &Scheme, l: i64) -> BTreeSet<Vec<i64>> {
    s.generate_pattern(&q(l)).unwrap().points.into_iter().map(|p| p.coords).collect()
}

fn in_open_window(s: &Scheme, m: &[i64]) -> bool {
    let x = s.star_map(m);
    s.window.pieces().iter().any(|p| p.locate(&x) == Location::Interior)
}

#[test]
fn fibonacci_pattern_matches_brute_force() {
    let s = fixtures::fibonacci().unwrap();
    let l = q(20);
    let mut want = BTreeSet::new();
    for a in -80i64..=80 {
        for b in -80i64..=80 {
            let x = &s.physical(&[a, b])[0];
            if x.abs() <= quasilr::algebra::FieldScalar::from_rational(&s.field, l.clone()) && in_open_window(&s, &[a, b]) {
                want.insert(vec![a, b]);
            }
        }
    }
    assert!(want.len() > 20);
    assert_eq!(coords(&s, 20), want);
}

#[test]
fn ammann_beenker_points_lie_in_the_window() {
    let s = fixtures::ammann_beenker().unwrap();
    let p = s.generate_pattern(&q(10)).unwrap();
    assert!(p.points.len() > 100);
    for pt in &p.points {
        assert!(in_open_window(&s, &pt.coords));
        assert!(pt.phys.iter().all(|x| x.abs().to_f64() <= 10.0));
        assert_eq!(pt.phys, s.physical(&pt.coords));
    }
}

#[test]
fn larger_boxes_restrict_to_smaller_ones() {
    for s in [fixtures::ammann_beenker().unwrap(), fixtures::decorated_ammann_beenker().unwrap()] {
        let small = s.generate_pattern(&q(8)).unwrap();
        let big = s.generate_pattern(&q(16)).unwrap();
        let restricted: Vec<_> = big.points.iter().filter(|p| p.phys.iter().all(|x| x.abs().to_f64() <= 8.0)).cloned().collect();
        let key = |v: &[quasilr::scheme::PatternPoint]| v.iter().map(|p| (p.coords.clone(), p.label.clone())).collect::<BTreeSet<_>>();
        assert_eq!(key(&restricted), key(&small.points));
    }
}

#[test]
fn boundary_hits_are_reported_as_singular() {
    // window [1 − φ, 1): e_1 projects onto the right endpoint
    let s = fixtures::fibonacci_with_shift(q(0)).unwrap();
    match s.generate_pattern(&q(5)) {
        Err(Error::Singular { coords }) => assert!(!in_open_window(&s, &coords)),
        other => panic!("expected a singular position, got {:?}", other.map(|p| p.points.len())),
    }
}

#[test]
fn fixtures_validate_and_rational_slopes_do_not() {
    for (name, s) in fixtures::all() {
        assert!(s.validate().valid, "{name}");
    }
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/invalid/rational_slope.json")).unwrap();
    let v = parse_scheme(&text).unwrap().validate();
    assert!(!v.valid && !v.internal_dense);
}

#[test]
fn unknown_keys_are_rejected() {
    let s = fixtures::fibonacci().unwrap();
    let text = scheme_to_json(&s).replacen('{', "{\n  \"colour\": \"blue\",", 1);
    assert!(matches!(parse_scheme(&text), Err(Error::Parse(_))));
}

#[test]
fn cyclic_reduction() {
    let s = fixtures::penrose().unwrap();
    let red = s.reduce_cyclic().unwrap();
    assert!(red.cyclic.is_none());
    assert_eq!(red.window.pieces().len(), 4);
    assert!(red.validate().valid);
    let fib = fixtures::fibonacci().unwrap();
    assert_eq!(scheme_to_json(&fib.reduce_cyclic().unwrap()), scheme_to_json(&fib));
}

#[test]
fn reduced_points_come_from_kappa_filtered_lattice_points() {
    // every reduced point is an original lattice point of residue 0 whose star image,
    // shifted back by some component's representative, lands in that component's window
    let s = fixtures::penrose().unwrap();
    let red = s.reduce_cyclic().unwrap();
    let c = s.cyclic.as_ref().unwrap();
    let p = red.generate_pattern(&q(6)).unwrap();
    assert!(!p.points.is_empty());
    // reduced lattice coordinates map to original ones through the common physical image
    let m = s.stacked().inverse().unwrap().mul(&red.stacked()).unwrap();
    for pt in &p.points {
        let orig: Vec<i64> = (0..s.k)
            .map(|i| {
                let v = (0..red.k).fold(s.field.zero(), |acc, j| &acc + &m.get(i, j).scale_int(&pt.coords[j].into()));
                i64::try_from(v.as_rational().unwrap().to_integer()).unwrap()
            })
            .collect();
        assert_eq!(c.residue(&orig), 0);
        let hit = c.windows.iter().any(|(g, w)| {
            let shift = c.shifts.get(g).cloned().unwrap_or_else(|| vec![0; s.k]);
            let x: Vec<i64> = orig.iter().zip(&shift).map(|(a, b)| a + b).collect();
            c.residue(&x) == *g && w.pieces().iter().any(|piece| piece.locate(&s.star_map(&x)) == Location::Interior)
        });
        assert!(hit, "{:?}", pt.coords);
    }
}

#[test]
fn unlabel_keeps_subspaces() {
    let s = fixtures::decorated_ammann_beenker().unwrap();
    let u = s.unlabel().unwrap();
    assert!(!u.window.is_labelled());
    assert!(u.validate().valid);
    assert_eq!(u.window.support().subspaces, s.window.support().subspaces);
}

#[test]
fn csv_rounds_half_to_even() {
    let k = quasilr::algebra::NumberField::golden();
    assert_eq!(k.rat(1, 8).to_decimal(2), "0.12");
    assert_eq!(k.rat(3, 8).to_decimal(2), "0.38");
    assert_eq!(k.rat(-1, 8).to_decimal(2), "-0.12");
    let s = fixtures::fibonacci().unwrap();
    let csv = pattern_csv(&s.generate_pattern(&q(3)).unwrap(), 1, 2, 4);
    assert!(csv.starts_with("x1,label,g1,g2\n"));
    assert!(csv.lines().skip(1).all(|l| l.split(',').next().unwrap().split('.').nth(1).map(str::len) == Some(4)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn star_map_is_linear(a in prop::collection::vec(-50i64..50, 4), b in prop::collection::vec(-50i64..50, 4)) {
        let s = fixtures::ammann_beenker().unwrap();
        let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let lhs = s.star_map(&sum);
        let rhs: Vec<_> = s.star_map(&a).iter().zip(s.star_map(&b)).map(|(x, y)| x + &y).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn shifted_fibonacci_patterns_restrict(num in 1i64..999, l in 5i64..40) {
        let s = fixtures::fibonacci_with_shift(BigRational::new(num.into(), 1000.into())).unwrap();
        let small = coords(&s, l);
        let big: BTreeSet<Vec<i64>> = s
            .generate_pattern(&q(2 * l))
            .unwrap()
            .points
            .into_iter()
            .filter(|p| p.phys[0].abs() <= quasilr::algebra::FieldScalar::from_rational(&s.field, q(l)))
            .map(|p| p.coords)
            .collect();
        prop_assert_eq!(small, big);
    }
}

#[test]
fn small_boxes() {
    let s = fixtures::fibonacci().unwrap();
    let p = s.generate_pattern(&q(10)).unwrap();
    assert!((12..=15).contains(&p.points.len()), "{}", p.points.len());
    let mut xs: Vec<_> = p.points.iter().map(|pt| pt.phys[0].clone()).collect();
    xs.sort();
    let gaps: BTreeSet<_> = xs.windows(2).map(|w| &w[1] - &w[0]).collect();
    let g: Vec<_> = gaps.into_iter().collect();
    assert_eq!(g.len(), 2);
    assert_eq!(g[1].checked_div(&g[0]).unwrap(), s.field.theta());

    // AB vertices with unit edges: nearest neighbours are the short rhomb diagonals, 2 sin(π/8)
    let ab = fixtures::ammann_beenker().unwrap();
    let pts = ab.generate_pattern(&q(5)).unwrap().points;
    let xy: Vec<(f64, f64)> = pts.iter().map(|p| (p.phys[0].to_f64(), p.phys[1].to_f64())).collect();
    let mut min = f64::INFINITY;
    for i in 0..xy.len() {
        for j in i + 1..xy.len() {
            min = min.min((xy[i].0 - xy[j].0).hypot(xy[i].1 - xy[j].1));
        }
    }
    assert!((min - 2.0 * (std::f64::consts::PI / 8.0).sin()).abs() < 1e-9, "{min}");
    // density: vol(W) / covolume of the lifted lattice
    let poly: Vec<(f64, f64)> = ab.window.pieces()[0].vertices().iter().map(|v| (v[0].to_f64(), v[1].to_f64())).collect();
    let area = 0.5
        * (0..poly.len())
            .map(|i| {
                let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
                a.0 * b.1 - b.0 * a.1
            })
            .sum::<f64>()
            .abs();
    let m: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| ab.stacked().get(i, j).to_f64()).collect()).collect();
    let expected = 100.0 * area / det4(&m).abs();
    assert!((pts.len() as f64 - expected).abs() <= 0.2 * expected, "{} vs {expected}", pts.len());
}

fn det4(m: &[Vec<f64>]) -> f64 {
    // cofactor expansion along the first row
    let minor = |c: usize| -> f64 {
        let r: Vec<Vec<f64>> = m[1..].iter().map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| *x).collect()).collect();
        r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
    };
    (0..4).map(|c| if c % 2 == 0 { m[0][c] * minor(c) } else { -m[0][c] * minor(c) }).sum()
}
