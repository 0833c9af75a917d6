//! Builders for the reference schemes used in tests, docs and the demo.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::{FieldMatrix, FieldScalar, NumberField};
use crate::error::Result;
use crate::geometry::{convex_hull, Window, WindowPolytope};
use crate::scheme::{separated, shell, CyclicData, Scheme};

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn add(a: &[FieldScalar], b: &[FieldScalar]) -> Vec<FieldScalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn shifted_interval(k: &NumberField, lo: FieldScalar, hi: FieldScalar, label: Option<&str>) -> Result<WindowPolytope> {
    WindowPolytope::from_vertices(k, 1, label.map(String::from), vec![vec![lo], vec![hi]])
}

/// Fibonacci chain: k = 2, d = n = 1, π_∨ = (1, φ−1), π_< = (1, −φ), window [1−φ+s, 1+s), s = 1/1000.
pub fn fibonacci() -> Result<Scheme> {
    fibonacci_with_shift(r(1, 1000))
}

pub fn fibonacci_with_shift(s: BigRational) -> Result<Scheme> {
    let k = NumberField::golden();
    let phi = k.theta();
    let pp = FieldMatrix::new(&k, vec![vec![k.one(), &phi - &k.one()]])?;
    let pi = FieldMatrix::new(&k, vec![vec![k.one(), -&phi]])?;
    let sh = FieldScalar::from_rational(&k, s);
    let w = shifted_interval(&k, &k.one() - &phi + &sh, &k.one() + &sh, None)?;
    Scheme::new(k.clone(), pp, pi, Window::new(1, vec![w])?, None)
}

/// Fibonacci projections with window [s, s + φ − 1 + 1/13): the vertex difference
/// needs scale 13, beyond the default homogeneity search.
pub fn fibonacci_inhomogeneous() -> Result<Scheme> {
    let k = NumberField::golden();
    let phi = k.theta();
    let pp = FieldMatrix::new(&k, vec![vec![k.one(), &phi - &k.one()]])?;
    let pi = FieldMatrix::new(&k, vec![vec![k.one(), -&phi]])?;
    let lo = k.rat(1, 1000);
    let hi = &lo + &phi - k.one() + k.rat(1, 13);
    let w = shifted_interval(&k, lo, hi, None)?;
    Scheme::new(k, pp, pi, Window::new(1, vec![w])?, None)
}

fn ab_projections(k: &NumberField) -> Result<(FieldMatrix, FieldMatrix)> {
    let s = k.theta().scale(&r(1, 2));
    let (z, o) = (k.zero(), k.one());
    // physical e_j ↦ ξ₈^j, internal e_j ↦ ξ₈^{3j}
    let pp = FieldMatrix::new(k, vec![vec![o.clone(), s.clone(), z.clone(), -&s], vec![z.clone(), s.clone(), o.clone(), s.clone()]])?;
    let pi = FieldMatrix::new(k, vec![vec![o.clone(), -&s, z.clone(), s.clone()], vec![z.clone(), s.clone(), -&o, s.clone()]])?;
    Ok((pp, pi))
}

/// Vertices of the regular octagon π_<([−½,½]⁴) (edge length 1), counter-clockwise.
fn ab_octagon(k: &NumberField, pi: &FieldMatrix) -> Vec<Vec<FieldScalar>> {
    let mut pts = Vec::new();
    for mask in 0..16u32 {
        let v: Vec<BigRational> = (0..4).map(|j| if mask >> j & 1 == 1 { r(1, 2) } else { r(-1, 2) }).collect();
        pts.push(pi.mul_rat(&v));
    }
    let _ = k;
    convex_hull(pts)
}

fn ab_shift(k: &NumberField) -> Vec<FieldScalar> {
    vec![k.rat(1, 3), k.rat(1, 5)]
}

/// Ammann–Beenker: Z⁴ over Q(√2), octagon window translated by (1/3, 1/5).
pub fn ammann_beenker() -> Result<Scheme> {
    let k = NumberField::quadratic(2)?;
    let (pp, pi) = ab_projections(&k)?;
    let t = ab_shift(&k);
    let oct: Vec<Vec<FieldScalar>> = ab_octagon(&k, &pi).iter().map(|v| add(v, &t)).collect();
    let w = Window::new(2, vec![WindowPolytope::from_vertices(&k, 2, None, oct)?])?;
    Scheme::new(k, pp, pi, w, None)
}

/// The octagon cut into 8 labelled triangles from its centre.
pub fn decorated_ammann_beenker() -> Result<Scheme> {
    let k = NumberField::quadratic(2)?;
    let (pp, pi) = ab_projections(&k)?;
    let t = ab_shift(&k);
    let oct: Vec<Vec<FieldScalar>> = ab_octagon(&k, &pi).iter().map(|v| add(v, &t)).collect();
    let mut pieces = Vec::new();
    for i in 0..8 {
        let tri = vec![t.clone(), oct[i].clone(), oct[(i + 1) % 8].clone()];
        pieces.push(WindowPolytope::from_vertices(&k, 2, Some(format!("T{i}")), tri)?);
    }
    Scheme::new(k, pp, pi, Window::new(2, pieces)?, None)
}

/// AB lattice with an axis-parallel rectangle window: decomposable.
pub fn rectangle() -> Result<Scheme> {
    let k = NumberField::quadratic(2)?;
    let (pp, pi) = ab_projections(&k)?;
    let (x0, y0) = (k.rat(1, 3), k.rat(1, 5));
    let x1 = &x0 + &k.one();
    let y1 = &y0 + &k.theta();
    let pts = vec![vec![x0.clone(), y0.clone()], vec![x1.clone(), y0.clone()], vec![x1, y1.clone()], vec![x0, y1]];
    let w = Window::new(2, vec![WindowPolytope::from_vertices(&k, 2, None, pts)?])?;
    Scheme::new(k, pp, pi, w, None)
}

/// 4-to-2 scheme over Q(2^{1/4}) with stabiliser-free axes and a square window.
pub fn non_c_square() -> Result<Scheme> {
    let k = NumberField::new(vec![(-2).into(), 0.into(), 0.into(), 0.into(), 1.into()], r(1, 1), r(2, 1))?;
    let t = |i: u32| k.theta().pow(i);
    let pp = FieldMatrix::new(&k, vec![vec![t(0), t(1), t(2), t(3)], vec![t(3), t(0), -t(1), t(2)]])?;
    let pi = FieldMatrix::new(&k, vec![vec![t(0), -t(1), t(2), -t(3)], vec![t(2), t(3), t(0), t(1)]])?;
    let (x0, y0) = (k.rat(1, 3), k.rat(1, 7));
    let x1 = &x0 + &k.one();
    let y1 = &y0 + &k.one();
    let pts = vec![vec![x0.clone(), y0.clone()], vec![x1.clone(), y0.clone()], vec![x1, y1.clone()], vec![x0, y1]];
    let w = Window::new(2, vec![WindowPolytope::from_vertices(&k, 2, None, pts)?])?;
    Scheme::new(k, pp, pi, w, None)
}

/// Penrose (vertex) scheme in the oblique real bases (1, ξ₅) and (1, ξ₅²), with the
/// cyclic component κ(m) = Σ m_j mod 5 and pentagon windows ±P, ±φP.
pub fn penrose() -> Result<Scheme> {
    let k = NumberField::golden();
    let (z, o, phi) = (k.zero(), k.one(), k.theta());
    let pm1 = &phi - &o;
    // physical e_j ↦ ξ^j, internal e_j ↦ ζ^j with ζ = ξ²
    let pp = FieldMatrix::new(&k, vec![vec![o.clone(), z.clone(), -&o, -&pm1], vec![z.clone(), o.clone(), pm1.clone(), -&pm1]])?;
    let pi = FieldMatrix::new(&k, vec![vec![o.clone(), z.clone(), -&o, phi.clone()], vec![z.clone(), o.clone(), -&phi, phi.clone()]])?;
    let pent = [vec![o.clone(), z.clone()], vec![z.clone(), o.clone()], vec![-&o, -&phi], vec![phi.clone(), phi.clone()], vec![-&phi, -&o]];
    let shift = vec![k.rat(1, 7), k.rat(1, 11)];
    let scaled = |c: &FieldScalar| -> Result<Window> {
        let pts: Vec<Vec<FieldScalar>> = pent.iter().map(|v| add(&v.iter().map(|x| x * c).collect::<Vec<_>>(), &shift)).collect();
        Window::new(2, vec![WindowPolytope::from_vertices(&k, 2, None, pts)?])
    };
    let mut windows = BTreeMap::new();
    windows.insert(1u32, scaled(&o)?);
    windows.insert(2, scaled(&-&phi)?);
    windows.insert(3, scaled(&phi)?);
    windows.insert(4, scaled(&-&o)?);
    let kappa = vec![1i64; 4];
    // Choose residue representatives whose translated windows are pairwise separated.
    let mut shifts = BTreeMap::new();
    let mut placed: Vec<WindowPolytope> = Vec::new();
    for (g, w) in &windows {
        let piece = &w.pieces()[0];
        let mut chosen = None;
        'search: for rad in 1..6 {
            for cand in shell(4, rad) {
                let res = cand.iter().sum::<i64>().rem_euclid(5) as u32;
                if res != *g {
                    continue;
                }
                let t: Vec<FieldScalar> = pi.mul_int(&cand).iter().map(|x| -x).collect();
                let moved = piece.translate(&t);
                if placed.iter().all(|p| separated(p, &moved)) {
                    placed.push(moved);
                    chosen = Some(cand);
                    break 'search;
                }
            }
        }
        shifts.insert(*g, chosen.expect("separating representative exists"));
    }
    let cyc = CyclicData { modulus: 5, kappa, windows, shifts };
    Scheme::new(k, pp, pi, Window::empty(2), Some(cyc))
}

/// Continued fraction value [0; a_1, …] as an exact rational.
pub fn cf_value(quotients: &[i64]) -> BigRational {
    let mut x: Option<BigRational> = None;
    for &a in quotients.iter().rev() {
        let a = BigRational::from_integer(BigInt::from(a));
        x = Some(match x {
            None => a,
            Some(t) => a + t.recip(),
        });
    }
    x.unwrap_or_else(|| BigRational::from_integer(0.into()))
}

/// Partial quotients of the near-Liouville slope (before the irrational perturbation).
pub const LIOUVILLE_QUOTIENTS: [i64; 7] = [0, 1, 3, 6, 12, 24, 10000];

/// Codimension-one scheme whose slope has rapidly growing partial quotients:
/// α = [0; 1, 3, 6, 12, 24, 10000] + 2^{1/3}·10⁻³⁰, π_< = (1, −α), π_∨ ≈ (0, 1).
pub fn liouville() -> Result<Scheme> {
    let k = NumberField::new(vec![(-2).into(), 0.into(), 0.into(), 1.into()], r(1, 1), r(2, 1))?;
    let tiny = BigRational::new(1.into(), BigInt::from(10).pow(30));
    let alpha = FieldScalar::from_rational(&k, cf_value(&LIOUVILLE_QUOTIENTS)) + k.theta().scale(&tiny);
    let pp = FieldMatrix::new(&k, vec![vec![k.theta().scale(&r(1, 1_000_000)), k.one()]])?;
    let pi = FieldMatrix::new(&k, vec![vec![k.one(), -alpha]])?;
    let w = shifted_interval(&k, k.rat(1, 7), k.rat(8, 7), None)?;
    Scheme::new(k, pp, pi, Window::new(1, vec![w])?, None)
}

/// Named fixtures, in a fixed order.
pub fn all() -> Vec<(&'static str, Scheme)> {
    vec![
        ("fibonacci", fibonacci().expect("fixture")),
        ("ammann_beenker", ammann_beenker().expect("fixture")),
        ("decorated_ammann_beenker", decorated_ammann_beenker().expect("fixture")),
        ("penrose", penrose().expect("fixture")),
        ("rectangle", rectangle().expect("fixture")),
        ("non_c_square", non_c_square().expect("fixture")),
        ("liouville", liouville().expect("fixture")),
        ("fibonacci_inhomogeneous", fibonacci_inhomogeneous().expect("fixture")),
    ]
}
