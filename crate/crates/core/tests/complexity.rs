use quasilr::algebra::{dot, FieldScalar, Lattice};
use quasilr::complexity::{analyze, stabiliser, Homogeneity};
use quasilr::fixtures;
use quasilr::scheme::Scheme;

fn prepared() -> Vec<(&'static str, Scheme)> {
    fixtures::all().into_iter().map(|(n, s)| (n, s.reduce_cyclic().unwrap())).collect()
}

fn neg(v: &[FieldScalar]) -> Vec<FieldScalar> {
    v.iter().map(|x| -x).collect()
}

#[test]
fn exponent_bounds_and_consequences() {
    for (name, s) in prepared() {
        let a = analyze(&s, 12).unwrap();
        let (d, n) = (s.d as i64, s.n as i64);
        assert!(d <= a.alpha && a.alpha <= n * d, "{name}: α = {}", a.alpha);
        assert_eq!(a.alpha, a.subspace_flags.iter().map(|f| f.alpha).max().unwrap(), "{name}");
        for st in &a.stabilisers {
            assert!(st.rank <= s.k && st.beta < s.n.max(1), "{name}");
        }
        if a.c {
            let c = &a.consequences;
            assert!(c.hyperplane_spanning && c.one_dimensional && c.finite_index_sums, "{name}");
        }
    }
}

#[test]
fn stabilisers_fix_their_subspaces() {
    for (name, s) in prepared() {
        let a = analyze(&s, 12).unwrap();
        assert_eq!(stabiliser(&a.scheme, &[]), Lattice::standard(s.k), "{name}");
        for st in &a.stabilisers {
            for g in st.lattice.basis() {
                let x = a.scheme.proj_internal.mul_rat(g);
                assert!(dot(&s.field, st.subspace.normal(), &x).is_zero(), "{name}");
            }
        }
    }
}

#[test]
fn difference_set_is_symmetric_with_zero() {
    for (name, s) in prepared() {
        let a = analyze(&s, 12).unwrap();
        let zero = vec![s.field.zero(); s.n];
        assert!(a.f_set.contains(&zero), "{name}");
        for f in &a.f_set {
            assert!(a.f_set.contains(&neg(f)), "{name}");
        }
        // every flag vertex lies on each member hyperplane
        for fl in &a.flags {
            for &m in &fl.members {
                let h = &a.support.hyperplanes[m];
                assert_eq!(dot(&s.field, h.normal(), &fl.vertex), h.offset().clone(), "{name}");
            }
        }
    }
}

#[test]
fn decomposition_splits_back_to_the_input() {
    for (name, s) in prepared() {
        let a = analyze(&s, 12).unwrap();
        let dec = &a.decomposition;
        assert_eq!(dec.factors.iter().map(|f| f.n).sum::<usize>(), s.n, "{name}");
        for v in &a.vertices {
            let parts = dec.split(v);
            let back = parts.iter().fold(vec![s.field.zero(); s.n], |acc, p| acc.iter().zip(p).map(|(x, y)| x + y).collect());
            assert_eq!(&back, v, "{name}");
        }
    }
    let rect = analyze(&fixtures::rectangle().unwrap(), 12).unwrap();
    assert!(rect.decomposition.is_decomposable());
    let ab = analyze(&fixtures::ammann_beenker().unwrap(), 12).unwrap();
    assert!(!ab.decomposition.is_decomposable());
}

#[test]
fn homogeneity_classes() {
    let h = |s: Scheme, n| analyze(&s, n).unwrap().homogeneity;
    assert_eq!(h(fixtures::fibonacci().unwrap(), 12), Homogeneity::Homogeneous);
    assert_eq!(h(fixtures::ammann_beenker().unwrap(), 12), Homogeneity::Homogeneous);
    assert_eq!(h(fixtures::fibonacci_inhomogeneous().unwrap(), 12), Homogeneity::NotWithinBound(12));
    assert_eq!(h(fixtures::fibonacci_inhomogeneous().unwrap(), 13), Homogeneity::Weakly(13));
    let non_c = analyze(&fixtures::non_c_square().unwrap(), 12).unwrap();
    assert!(!non_c.c && non_c.alpha > non_c.scheme.d as i64);
    assert_eq!(non_c.homogeneity, Homogeneity::Undetermined);
    assert!(!non_c.all_flag_groups_finite());
}

#[test]
fn vertex_difference_denominators() {
    // the Fibonacci endpoints differ by φ = π_<(0, −1); the perturbed window adds 1/13
    let a = analyze(&fixtures::fibonacci().unwrap(), 12).unwrap();
    assert_eq!(a.f_denominator, Some(1.into()));
    let b = analyze(&fixtures::fibonacci_inhomogeneous().unwrap(), 12).unwrap();
    assert_eq!(b.f_denominator, Some(13.into()));
}
