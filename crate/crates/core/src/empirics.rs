//! Brute-force ground truth: patch censuses, repetitivity probes, cut regions.
//!
//! Everything here works on generated point patterns, so it is only as good as
//! the box it was sampled from. Patch equality is exact: points are compared
//! through lattice coordinates, which π_∨ determines injectively.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::hash::{Hash, Hasher};

use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{rat_f64, FieldScalar, LinForm};
use crate::enumerate::enumerate_box;
use crate::error::{Error, Result};
use crate::geometry::{arrangement_census, Hyperplane};
use crate::scheme::{PointPattern, Scheme};

/// One translation class of r-patches.
#[derive(Clone, Debug)]
pub struct PatchClass {
    /// (lattice offset from the centre, label id), sorted.
    pub offsets: Vec<(Vec<i64>, u32)>,
    /// Indices into [`PatchCensus::centers`].
    pub centers: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct PatchCensus {
    pub r: BigRational,
    pub box_radius: BigRational,
    pub labels: Vec<Option<String>>,
    pub centers: Vec<Vec<f64>>,
    pub center_coords: Vec<Vec<i64>>,
    /// In order of first occurrence.
    pub classes: Vec<PatchClass>,
    pub p_hat: usize,
}

/// Closed max-norm ball test ‖a − b‖ ≤ r with an exact fallback near the sphere.
fn within(a: &(Vec<f64>, &[FieldScalar]), b: &(Vec<f64>, &[FieldScalar]), r: f64, r_exact: &FieldScalar) -> bool {
    for t in 0..a.0.len() {
        let diff = (a.0[t] - b.0[t]).abs();
        let tol = 1e-9 * (1.0 + a.0[t].abs() + b.0[t].abs());
        if diff > r + tol {
            return false;
        }
        if diff >= r - tol && (&a.1[t] - &b.1[t]).abs() > *r_exact {
            return false;
        }
    }
    true
}

type Patch = Vec<(Vec<i64>, u32)>;

/// Census of r-patches whose centres lie in the (L − r)-box of a pattern with box radius L.
pub fn patch_census_of(pattern: &PointPattern, r: &BigRational) -> Result<PatchCensus> {
    let l = &pattern.box_radius;
    if r.is_negative() {
        return Err(Error::Parameter("patch radius must be nonnegative".into()));
    }
    if l < &(r * BigRational::from_integer(4.into())) {
        return Err(Error::Parameter(format!("box radius {l} is below 4r = {}", r * BigRational::from_integer(4.into()))));
    }
    let pts = &pattern.points;
    let Some(first) = pts.first() else {
        return Ok(PatchCensus { r: r.clone(), box_radius: l.clone(), labels: vec![], centers: vec![], center_coords: vec![], classes: vec![], p_hat: 0 });
    };
    let field = first.phys[0].field().clone();
    let labels: Vec<Option<String>> = pts.iter().map(|p| p.label.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let label_id = |s: &Option<String>| labels.binary_search(s).unwrap() as u32;

    let rf = rat_f64(r);
    let r_exact = FieldScalar::from_rational(&field, r.clone());
    let inner = l - r;
    let inner_exact = FieldScalar::from_rational(&field, inner.clone());
    let inner_f = rat_f64(&inner);
    let keyed: Vec<(Vec<f64>, &[FieldScalar])> = pts.iter().map(|p| (p.approx.clone(), &p.phys[..])).collect();
    let centers: Vec<usize> = (0..pts.len())
        .filter(|&i| {
            pts[i].approx.iter().zip(&pts[i].phys).all(|(a, x)| {
                if a.abs() < inner_f - 1e-9 * (1.0 + inner_f) {
                    true
                } else if a.abs() > inner_f + 1e-9 * (1.0 + inner_f) {
                    false
                } else {
                    x.abs() <= inner_exact
                }
            })
        })
        .collect();

    let cell = rf.max(1.0);
    let cell_of = |x: &[f64]| -> Vec<i64> { x.iter().map(|v| (v / cell).floor() as i64).collect() };
    let mut grid: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (i, p) in pts.iter().enumerate() {
        grid.entry(cell_of(&p.approx)).or_default().push(i);
    }
    let d = first.approx.len();
    let neighbours: Vec<Vec<i64>> = (0..3usize.pow(d as u32))
        .map(|mut c| {
            (0..d)
                .map(|_| {
                    let v = (c % 3) as i64 - 1;
                    c /= 3;
                    v
                })
                .collect()
        })
        .collect();

    // (hash, sorted (offset, label id) members) per centre
    let patches: Vec<(u64, Patch)> = centers
        .par_iter()
        .map(|&ci| {
            let c = &pts[ci];
            let home = cell_of(&c.approx);
            let mut members = Vec::new();
            for off in &neighbours {
                let key: Vec<i64> = home.iter().zip(off).map(|(a, b)| a + b).collect();
                if let Some(list) = grid.get(&key) {
                    for &j in list {
                        if within(&keyed[j], &keyed[ci], rf, &r_exact) {
                            let diff: Vec<i64> = pts[j].coords.iter().zip(&c.coords).map(|(a, b)| a - b).collect();
                            members.push((diff, label_id(&pts[j].label)));
                        }
                    }
                }
            }
            members.sort();
            let mut h = DefaultHasher::new();
            members.hash(&mut h);
            (h.finish(), members)
        })
        .collect();

    let mut classes: Vec<PatchClass> = Vec::new();
    let mut by_hash: HashMap<u64, Vec<usize>> = HashMap::new();
    for (pos, (h, members)) in patches.into_iter().enumerate() {
        let bucket = by_hash.entry(h).or_default();
        match bucket.iter().find(|&&ci| classes[ci].offsets == members) {
            Some(&ci) => classes[ci].centers.push(pos),
            None => {
                bucket.push(classes.len());
                classes.push(PatchClass { offsets: members, centers: vec![pos] });
            }
        }
    }
    Ok(PatchCensus {
        r: r.clone(),
        box_radius: l.clone(),
        labels,
        centers: centers.iter().map(|&i| pts[i].approx.clone()).collect(),
        center_coords: centers.iter().map(|&i| pts[i].coords.clone()).collect(),
        p_hat: classes.len(),
        classes,
    })
}

/// Generates the pattern on the L-box and takes its r-patch census.
pub fn patch_census(s: &Scheme, r: &BigRational, l: &BigRational) -> Result<PatchCensus> {
    if l < &(r * BigRational::from_integer(4.into())) {
        return Err(Error::Parameter(format!("box radius {l} is below 4r")));
    }
    patch_census_of(&s.generate_pattern(l)?, r)
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexityRow {
    pub r: f64,
    pub p_hat: usize,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexityTable {
    pub alpha: u32,
    pub rows: Vec<ComplexityRow>,
    /// The ratio column moves monotonically by more than a factor 10.
    pub drift: bool,
}

fn check_radii(radii: &[BigRational]) -> Result<()> {
    if radii.is_empty() || radii.iter().any(|r| !r.is_positive()) || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parameter("radii must be positive and increasing".into()));
    }
    Ok(())
}

fn monotone_drift(col: &[f64]) -> bool {
    let up = col.windows(2).all(|w| w[1] >= w[0]);
    let down = col.windows(2).all(|w| w[1] <= w[0]);
    let (lo, hi) = col.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    (up || down) && col.len() > 1 && hi > 10.0 * lo
}

/// p̂(r) and p̂(r)/r^α on one pattern of box radius L.
pub fn empirical_complexity(s: &Scheme, radii: &[BigRational], l: &BigRational, alpha: u32) -> Result<ComplexityTable> {
    check_radii(radii)?;
    let pattern = s.generate_pattern(l)?;
    complexity_of(&pattern, radii, alpha)
}

pub fn complexity_of(pattern: &PointPattern, radii: &[BigRational], alpha: u32) -> Result<ComplexityTable> {
    check_radii(radii)?;
    let mut rows = Vec::new();
    for r in radii {
        let c = patch_census_of(pattern, r)?;
        let rf = rat_f64(r);
        rows.push(ComplexityRow { r: rf, p_hat: c.p_hat, ratio: c.p_hat as f64 / rf.powi(alpha as i32) });
    }
    let drift = monotone_drift(&rows.iter().map(|r| r.ratio).collect::<Vec<_>>());
    Ok(ComplexityTable { alpha, rows, drift })
}

#[derive(Clone, Debug, Serialize)]
pub struct RepetitivityRow {
    pub r: f64,
    /// None when some class occurs only once in the box ("≥ L").
    pub rho_hat: Option<f64>,
    pub ratio: Option<f64>,
}

/// Seeded probe points in the max-norm ball of radius `half`.
pub fn probes(d: usize, half: f64, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..d).map(|_| rng.gen_range(-half..=half)).collect()).collect()
}

/// Largest distance from a probe to the nearest occurrence of any class.
pub fn covering_radius(c: &PatchCensus, probes: &[Vec<f64>]) -> Option<f64> {
    if c.classes.iter().any(|k| k.centers.len() < 2) {
        return None;
    }
    let per_class: Vec<f64> = c
        .classes
        .par_iter()
        .map(|k| {
            probes
                .iter()
                .map(|p| k.centers.iter().map(|&i| c.centers[i].iter().zip(p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        })
        .collect();
    Some(per_class.into_iter().fold(0.0, f64::max))
}

/// ρ̂(r): covering radius of every class's centre set, seen from seeded probes
/// in the half box of the largest radius. A lower-bound proxy for ρ(r); it is
/// only meaningful for r ≪ L.
pub fn empirical_repetitivity(s: &Scheme, radii: &[BigRational], l: &BigRational, n_probes: usize, seed: u64) -> Result<Vec<RepetitivityRow>> {
    check_radii(radii)?;
    let pattern = s.generate_pattern(l)?;
    repetitivity_of(&pattern, s.d, radii, n_probes, seed)
}

pub fn repetitivity_of(pattern: &PointPattern, d: usize, radii: &[BigRational], n_probes: usize, seed: u64) -> Result<Vec<RepetitivityRow>> {
    check_radii(radii)?;
    let half = rat_f64(&(&pattern.box_radius - radii.last().unwrap())) / 2.0;
    let pr = probes(d, half.max(0.0), n_probes, seed);
    radii
        .iter()
        .map(|r| {
            let c = patch_census_of(pattern, r)?;
            let rho = covering_radius(&c, &pr);
            let rf = rat_f64(r);
            Ok(RepetitivityRow { r: rf, rho_hat: rho, ratio: rho.map(|x| x / rf) })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct CutRegionCensus {
    pub r: BigRational,
    pub count: usize,
    pub min_volume: FieldScalar,
    pub cutters: usize,
}

/// Γ(r) = {γ : ‖γ_∨‖_∞ ≤ r and ‖γ_<‖_∞ ≤ r}, sorted.
pub fn lattice_ball(s: &Scheme, r: &BigRational) -> Vec<Vec<i64>> {
    let rf = rat_f64(r);
    let stacked = s.stacked();
    let forms: Vec<LinForm> = (0..s.k).map(|i| LinForm::new(stacked.row(i), &s.field.zero())).collect();
    let neg = -r.clone();
    enumerate_box(&stacked.to_f64(), &vec![-rf; s.k], &vec![rf; s.k])
        .into_iter()
        .filter(|m| forms.iter().all(|f| f.cmp_rational(m, r) != Ordering::Greater && f.cmp_rational(m, &neg) != Ordering::Less))
        .collect()
}

/// Translates H − γ_< (γ ∈ Γ(r), H ∈ 𝓗) that meet the interior of the window's hull.
pub fn cut_region_cutters(s: &Scheme, r: &BigRational) -> Result<Vec<Hyperplane>> {
    let s = if s.cyclic.is_some() { s.reduce_cyclic()? } else { s.clone() };
    let ball = lattice_ball(&s, r);
    let support = s.window.support();
    let verts: Vec<&Vec<FieldScalar>> = s.window.pieces().iter().flat_map(|p| p.vertices()).collect();
    let cols: Vec<Vec<FieldScalar>> = (0..s.k).map(|j| s.proj_internal.column(j)).collect();
    let mut out: HashSet<Hyperplane> = HashSet::new();
    for h in &support.hyperplanes {
        let coeffs: Vec<FieldScalar> = cols.iter().map(|c| crate::algebra::dot(&s.field, h.normal(), c)).collect();
        // offset of H − γ_< is c − n·γ_<
        let form = LinForm::new(&coeffs, &s.field.zero());
        let vals: Vec<FieldScalar> = verts.iter().map(|v| crate::algebra::dot(&s.field, h.normal(), v)).collect();
        let lo = vals.iter().min().unwrap().clone();
        let hi = vals.iter().max().unwrap().clone();
        let (lof, hif, cf) = (lo.to_f64(), hi.to_f64(), h.offset().to_f64());
        let found: Vec<Hyperplane> = ball
            .par_iter()
            .filter_map(|m| {
                let approx = cf - form.approx_at(m);
                let tol = 1e-9 * (1.0 + approx.abs());
                if approx < lof - tol || approx > hif + tol {
                    return None;
                }
                let off = h.offset() - &form.value_at(m);
                (off > lo && off < hi).then(|| Hyperplane::new(h.normal().to_vec(), off).expect("nonzero normal"))
            })
            .collect();
        out.extend(found);
    }
    let mut v: Vec<Hyperplane> = out.into_iter().collect();
    v.sort_by(|a, b| a.cmp_canonical(b));
    Ok(v)
}

/// Cut regions 𝓒(r): components of int(W) minus all translates H − γ_<, γ ∈ Γ(r).
pub fn cut_region_census(s: &Scheme, r: &BigRational) -> Result<CutRegionCensus> {
    if s.n > 2 {
        return Err(Error::UnsupportedDimension(s.n));
    }
    let cutters = cut_region_cutters(s, r)?;
    let w = if s.cyclic.is_some() { s.reduce_cyclic()?.window } else { s.window.clone() };
    let a = arrangement_census(&w, &cutters, false)?;
    Ok(CutRegionCensus { r: r.clone(), count: a.face_count, min_volume: a.min_volume, cutters: cutters.len() })
}

#[derive(Clone, Debug, Serialize)]
pub struct PwRow {
    pub r: f64,
    pub regions: usize,
    pub cutters: usize,
    pub min_volume: f64,
    pub product: f64,
}

/// min cut-region volume × r^d: bounded below under PW, decaying when PW fails.
pub fn pw_estimate(s: &Scheme, radii: &[BigRational]) -> Result<Vec<PwRow>> {
    check_radii(radii)?;
    radii
        .iter()
        .map(|r| {
            let c = cut_region_census(s, r)?;
            let rf = rat_f64(r);
            let v = c.min_volume.to_f64();
            Ok(PwRow { r: rf, regions: c.count, cutters: c.cutters, min_volume: v, product: v * rf.powi(s.d as i32) })
        })
        .collect()
}

/// Parses "a,b,c" into positive rationals.
pub fn parse_radii(s: &str) -> Result<Vec<BigRational>> {
    let v = s.split(',').map(|t| crate::algebra::parse_rational(t.trim())).collect::<Result<Vec<_>>>()?;
    check_radii(&v)?;
    Ok(v)
}

/// Ratio of largest to smallest entry of a positive column.
pub fn band_factor(col: &[f64]) -> f64 {
    let (lo, hi) = col.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    if lo > 0.0 {
        hi / lo
    } else {
        f64::INFINITY
    }
}

fn fmt_f(x: f64, precision: usize) -> String {
    format!("{x:.precision$}")
}

pub fn complexity_csv(t: &ComplexityTable, precision: usize) -> String {
    let mut out = format!("r,p_hat,p_hat_over_r^{}\n", t.alpha);
    for row in &t.rows {
        out.push_str(&format!("{},{},{}\n", row.r, row.p_hat, fmt_f(row.ratio, precision)));
    }
    out
}

/// Classes seen only once are written as ">=L" for the box radius L.
pub fn repetitivity_csv(rows: &[RepetitivityRow], l: &BigRational, precision: usize) -> String {
    let ge = format!(">={}", crate::algebra::rational_string(l));
    let mut out = String::from("r,rho_hat,rho_hat_over_r\n");
    for row in rows {
        let (a, b) = match (row.rho_hat, row.ratio) {
            (Some(x), Some(y)) => (fmt_f(x, precision), fmt_f(y, precision)),
            _ => (ge.clone(), ge.clone()),
        };
        out.push_str(&format!("{},{},{}\n", row.r, a, b));
    }
    out
}

pub fn cutregions_csv(rows: &[PwRow], precision: usize) -> String {
    let mut out = String::from("r,regions,cutters,min_volume,min_volume_times_r^d\n");
    for row in rows {
        out.push_str(&format!("{},{},{},{:.p$e},{:.p$e}\n", row.r, row.regions, row.cutters, row.min_volume, row.product, p = precision));
    }
    out
}
