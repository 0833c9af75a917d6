//! Cut-and-project schemes over Z^k: validation, the star map, cyclic reduction,
//! label removal and pattern generation.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{integer_kernel, rat_f64, FieldMatrix, FieldScalar, LinForm, NumberField};
use crate::enumerate::enumerate_box;
use crate::error::{Error, Result};
use crate::geometry::{Halfspace, Side, SupportSet, Window, WindowPolytope};

/// Cyclic internal component Z/m: points γ use the window of residue κ·γ mod m.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicData {
    pub modulus: u32,
    pub kappa: Vec<i64>,
    pub windows: BTreeMap<u32, Window>,
    pub shifts: BTreeMap<u32, Vec<i64>>,
}

impl CyclicData {
    pub fn residue(&self, g: &[i64]) -> u32 {
        let s: i64 = self.kappa.iter().zip(g).map(|(a, b)| a * b).sum();
        s.rem_euclid(self.modulus as i64) as u32
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scheme {
    pub field: NumberField,
    pub k: usize,
    pub d: usize,
    pub n: usize,
    pub proj_physical: FieldMatrix,
    pub proj_internal: FieldMatrix,
    /// Empty when the window lives in `cyclic`.
    pub window: Window,
    pub cyclic: Option<CyclicData>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub stacked_invertible: bool,
    pub physical_injective: bool,
    pub internal_injective: bool,
    pub internal_dense: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PatternPoint {
    pub phys: Vec<FieldScalar>,
    pub approx: Vec<f64>,
    pub label: Option<String>,
    pub coords: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointPattern {
    pub points: Vec<PatternPoint>,
    pub box_radius: BigRational,
}

/// Exact membership tests for one window, as affine forms in lattice coordinates.
pub(crate) struct WindowForms {
    /// slack forms per piece (positive inside)
    pieces: Vec<Vec<(LinForm, bool)>>,
    labels: Vec<Option<String>>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

pub(crate) enum Membership {
    Inside(usize),
    Outside,
}

impl WindowForms {
    pub fn new(s: &Scheme, w: &Window) -> WindowForms {
        let support = w.support();
        let cols: Vec<Vec<FieldScalar>> = (0..s.k).map(|j| s.proj_internal.column(j)).collect();
        let pieces = w
            .pieces()
            .iter()
            .map(|p| {
                p.halfspaces()
                    .iter()
                    .map(|h| {
                        let sgn = if h.side == Side::Le { -1 } else { 1 };
                        let coeffs: Vec<FieldScalar> =
                            cols.iter().map(|c| crate::algebra::dot(&s.field, h.plane.normal(), c).scale(&BigRational::from_integer(sgn.into()))).collect();
                        let off = h.plane.offset().scale(&BigRational::from_integer(sgn.into()));
                        (LinForm::new(&coeffs, &off), support.hyperplanes.contains(&h.plane))
                    })
                    .collect()
            })
            .collect();
        let (lo, hi) = if w.is_empty() {
            (vec![0.0; s.n], vec![0.0; s.n])
        } else {
            let (lo, hi) = w.bbox();
            (lo.iter().map(|x| x.to_f64()).collect(), hi.iter().map(|x| x.to_f64()).collect())
        };
        WindowForms { pieces, labels: w.pieces().iter().map(|p| p.label.clone()).collect(), lo, hi }
    }

    /// Interior membership of γ_<; a point on a supporting hyperplane of the closed window is singular.
    pub fn classify(&self, m: &[i64]) -> Result<Membership> {
        let mut hit = None;
        for (pi, forms) in self.pieces.iter().enumerate() {
            let mut inside = true;
            let mut on_support = false;
            for (f, supporting) in forms {
                match f.sign_at(m) {
                    Ordering::Less => {
                        inside = false;
                        on_support = false;
                        break;
                    }
                    Ordering::Equal => {
                        if *supporting {
                            on_support = true;
                        }
                    }
                    Ordering::Greater => {}
                }
            }
            if !inside {
                continue;
            }
            if on_support {
                return Err(Error::Singular { coords: m.to_vec() });
            }
            hit.get_or_insert(pi);
        }
        Ok(hit.map(Membership::Inside).unwrap_or(Membership::Outside))
    }

    pub fn label(&self, i: usize) -> &Option<String> {
        &self.labels[i]
    }
}

impl Scheme {
    pub fn new(field: NumberField, proj_physical: FieldMatrix, proj_internal: FieldMatrix, window: Window, cyclic: Option<CyclicData>) -> Result<Scheme> {
        let d = proj_physical.nrows();
        let n = proj_internal.nrows();
        let k = proj_physical.ncols();
        if proj_internal.ncols() != k || d + n != k || d == 0 || n == 0 {
            return Err(Error::Shape(format!("projections must be d×k and n×k with k = d + n (got {d}×{k}, {n}×{})", proj_internal.ncols())));
        }
        if window.dim() != n {
            return Err(Error::Shape("window dimension differs from n".into()));
        }
        if let Some(c) = &cyclic {
            if c.kappa.len() != k || c.modulus == 0 {
                return Err(Error::InvalidScheme("cyclic data has wrong shape".into()));
            }
            if c.windows.values().any(|w| w.dim() != n) {
                return Err(Error::Shape("cyclic window dimension".into()));
            }
            for (g, shift) in &c.shifts {
                if shift.len() != k || c.residue(shift) != *g {
                    return Err(Error::InvalidScheme(format!("shift for residue {g} has the wrong residue")));
                }
            }
        } else if window.is_empty() {
            return Err(Error::InvalidWindow("window has no pieces".into()));
        }
        Ok(Scheme { field, k, d, n, proj_physical, proj_internal, window, cyclic })
    }

    /// x ↦ x^⋆ on lattice coordinates.
    pub fn star_map(&self, x: &[i64]) -> Vec<FieldScalar> {
        self.proj_internal.mul_int(x)
    }

    pub fn physical(&self, x: &[i64]) -> Vec<FieldScalar> {
        self.proj_physical.mul_int(x)
    }

    pub fn stacked(&self) -> FieldMatrix {
        let mut rows = self.proj_physical.rows().to_vec();
        rows.extend(self.proj_internal.rows().iter().cloned());
        FieldMatrix::new(&self.field, rows).expect("same field")
    }

    pub fn support(&self) -> SupportSet {
        self.window.support()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        let stacked_invertible = self.stacked().rank() == self.k;
        if !stacked_invertible {
            failures.push("stacked projection matrix is singular".to_string());
        }
        let physical_injective = integer_kernel(&self.proj_physical.rational_restriction(), self.k).rank() == 0;
        if !physical_injective {
            failures.push("physical projection is not injective on the lattice".to_string());
        }
        let internal_injective = integer_kernel(&self.proj_internal.rational_restriction(), self.k).rank() == 0;
        if !internal_injective {
            failures.push("internal projection is not injective on the lattice".to_string());
        }
        // Γ_< is dense iff the row space of π_< holds no nonzero rational vector.
        let perp = self.proj_internal.nullspace();
        let internal_dense = if perp.is_empty() {
            false
        } else {
            let nt = FieldMatrix::new(&self.field, perp).expect("same field");
            integer_kernel(&nt.rational_restriction(), self.k).rank() == 0
        };
        if !internal_dense {
            failures.push("internal projection of the lattice is not dense".to_string());
        }
        ValidationReport { valid: failures.is_empty(), stacked_invertible, physical_injective, internal_injective, internal_dense, failures }
    }

    /// Changes lattice coordinates: the new e_i is the old vector `basis[i]`.
    pub fn rebase(&self, basis: &[Vec<BigInt>], window: Window) -> Result<Scheme> {
        let b: Vec<Vec<BigRational>> = basis.iter().map(|r| r.iter().cloned().map(BigRational::from_integer).collect()).collect();
        let compose = |p: &FieldMatrix| -> Result<FieldMatrix> {
            let cols: Vec<Vec<FieldScalar>> = b.iter().map(|v| p.mul_rat(v)).collect();
            let rows = (0..p.nrows()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
            FieldMatrix::new(&self.field, rows)
        };
        Scheme::new(self.field.clone(), compose(&self.proj_physical)?, compose(&self.proj_internal)?, window, None)
    }

    /// Restricts to the residue-zero sublattice and moves every component window into one fiber.
    pub fn reduce_cyclic(&self) -> Result<Scheme> {
        let Some(c) = &self.cyclic else {
            return Ok(self.clone());
        };
        let mut row: Vec<BigRational> = c.kappa.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        row.push(BigRational::from_integer(BigInt::from(-(c.modulus as i64))));
        let ker = integer_kernel(&[row], self.k + 1);
        let gens: Vec<Vec<BigInt>> = ker
            .int_basis()
            .into_iter()
            .map(|mut v| {
                v.pop();
                v
            })
            .collect();
        let g_lat = crate::algebra::Lattice::from_int_generators(self.k, &gens);
        let basis = g_lat.int_basis();
        let mut pieces: Vec<WindowPolytope> = Vec::new();
        for (g, w) in &c.windows {
            if w.is_empty() {
                continue;
            }
            let shift = match c.shifts.get(g) {
                Some(s) => s.clone(),
                None if *g == 0 => vec![0; self.k],
                None => return Err(Error::InvalidScheme(format!("missing shift for residue {g}"))),
            };
            let t: Vec<FieldScalar> = self.star_map(&shift).iter().map(|x| -x).collect();
            pieces.extend(w.translate(&t).pieces().iter().cloned());
        }
        let window = Window::new(self.n, pieces)?;
        self.rebase(&basis, window)
    }

    /// Translates each label class by a lattice translate so classes are pairwise
    /// separated, then drops the labels.
    pub fn unlabel(&self) -> Result<Scheme> {
        if !self.window.is_labelled() {
            return Ok(self.clone());
        }
        const BOUND: i64 = 8;
        let labels = self.window.labels();
        let mut placed: Vec<WindowPolytope> = Vec::new();
        for (li, lab) in labels.iter().enumerate() {
            let group: Vec<WindowPolytope> = self.window.pieces().iter().filter(|p| &p.label == lab).cloned().collect();
            if li == 0 {
                placed.extend(group);
                continue;
            }
            let mut found = None;
            'shells: for r in 0..=BOUND {
                for g in shell(self.k, r) {
                    let t = self.star_map(&g);
                    let moved: Vec<WindowPolytope> = group.iter().map(|p| p.translate(&t)).collect();
                    if moved.iter().all(|a| placed.iter().all(|b| separated(a, b))) {
                        found = Some(moved);
                        break 'shells;
                    }
                }
            }
            match found {
                Some(m) => placed.extend(m),
                None => return Err(Error::SearchExhausted(format!("no separating lattice translate with coefficients up to {BOUND}"))),
            }
        }
        for p in &mut placed {
            p.label = None;
        }
        let window = Window::new(self.n, placed)?;
        if window.support().subspaces != self.window.support().subspaces {
            return Err(Error::InvalidWindow("unlabel changed the supporting subspaces".into()));
        }
        let mut s = self.clone();
        s.window = window;
        Ok(s)
    }

    /// Cyclic reduction followed by label removal: the form every analysis works on.
    pub fn normalized(&self) -> Result<Scheme> {
        self.reduce_cyclic()?.unlabel()
    }

    fn windows(&self) -> Vec<(Option<u32>, Window)> {
        match &self.cyclic {
            Some(c) => c.windows.iter().filter(|(_, w)| !w.is_empty()).map(|(g, w)| (Some(*g), w.clone())).collect(),
            None => vec![(None, self.window.clone())],
        }
    }

    /// All γ with ‖γ_∨‖_∞ ≤ L and γ_< in the open window.
    pub fn generate_pattern(&self, l: &BigRational) -> Result<PointPattern> {
        if l < &BigRational::zero() {
            return Err(Error::Parameter("box radius must be nonnegative".into()));
        }
        let lf = rat_f64(l);
        let stacked = self.stacked().to_f64();
        let cols: Vec<Vec<FieldScalar>> = (0..self.k).map(|j| self.proj_physical.column(j)).collect();
        let phys_forms: Vec<LinForm> = (0..self.d).map(|i| LinForm::new(&cols.iter().map(|c| c[i].clone()).collect::<Vec<_>>(), &self.field.zero())).collect();
        let neg_l = -l.clone();
        let mut points = Vec::new();
        for (residue, w) in self.windows() {
            let forms = WindowForms::new(self, &w);
            let mut lo = vec![-lf; self.d];
            let mut hi = vec![lf; self.d];
            lo.extend(forms.lo.iter());
            hi.extend(forms.hi.iter());
            let cands = enumerate_box(&stacked, &lo, &hi);
            let found: Vec<Result<Option<PatternPoint>>> = cands
                .par_iter()
                .map(|m| {
                    if let (Some(g), Some(c)) = (residue, &self.cyclic) {
                        if c.residue(m) != g {
                            return Ok(None);
                        }
                    }
                    if phys_forms.iter().any(|f| f.cmp_rational(m, l) == Ordering::Greater || f.cmp_rational(m, &neg_l) == Ordering::Less) {
                        return Ok(None);
                    }
                    match forms.classify(m)? {
                        Membership::Outside => Ok(None),
                        Membership::Inside(pi) => {
                            let phys = self.physical(m);
                            Ok(Some(PatternPoint {
                                approx: phys.iter().map(|x| x.to_f64()).collect(),
                                phys,
                                label: forms.label(pi).clone(),
                                coords: m.clone(),
                            }))
                        }
                    }
                })
                .collect();
            for r in found {
                if let Some(p) = r? {
                    points.push(p);
                }
            }
        }
        points.sort_by(|a, b| a.coords.cmp(&b.coords));
        Ok(PointPattern { points, box_radius: l.clone() })
    }
}

/// Integer vectors of max-norm exactly r, lexicographic.
pub(crate) fn shell(k: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![-r; k];
    loop {
        if cur.iter().any(|x| x.abs() == r) || r == 0 {
            out.push(cur.clone());
        }
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < r {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = -r;
                }
                break;
            }
        }
    }
}

/// Closed pieces strictly separated by a facet plane of one of them.
pub(crate) fn separated(a: &WindowPolytope, b: &WindowPolytope) -> bool {
    let (alo, ahi) = approx_bbox(a);
    let (blo, bhi) = approx_bbox(b);
    let gap = (0..alo.len()).any(|i| blo[i] > ahi[i] + 1e-9 * (1.0 + ahi[i].abs()) || alo[i] > bhi[i] + 1e-9 * (1.0 + bhi[i].abs()));
    if gap {
        return true;
    }
    let strict =
        |p: &WindowPolytope, q: &WindowPolytope| p.halfspaces().iter().any(|h: &Halfspace| q.vertices().iter().all(|v| h.slack(v).sign() == Ordering::Less));
    strict(a, b) || strict(b, a)
}

fn approx_bbox(p: &WindowPolytope) -> (Vec<f64>, Vec<f64>) {
    let n = p.dim();
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for v in p.vertices() {
        for i in 0..n {
            let x = v[i].to_f64();
            lo[i] = lo[i].min(x);
            hi[i] = hi[i].max(x);
        }
    }
    (lo, hi)
}

/// Lattice coordinates as i64, or a parameter error.
pub fn to_i64_vec(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter().map(|x| x.to_i64().ok_or_else(|| Error::Parameter("coordinate exceeds i64".into()))).collect()
}
