//! Hyperplanes, convex window pieces and windows in internal space.

use std::cmp::Ordering;

use crate::algebra::{dot, FieldMatrix, FieldScalar, NumberField};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Le,
    Ge,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Le => Side::Ge,
            Side::Ge => Side::Le,
        }
    }
}

/// Lexicographic exact comparison of field vectors.
pub fn cmp_vec(a: &[FieldScalar], b: &[FieldScalar]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// The plane {x : normal·x = offset}, scaled so the first nonzero normal entry is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    normal: Vec<FieldScalar>,
    offset: FieldScalar,
}

impl Hyperplane {
    /// Canonical form; the flag reports whether the scaling factor was negative.
    pub fn canonical(normal: Vec<FieldScalar>, offset: FieldScalar) -> Result<(Hyperplane, bool)> {
        let lead = normal.iter().find(|x| !x.is_zero()).cloned().ok_or_else(|| Error::InvalidWindow("zero normal vector".into()))?;
        let inv = lead.inv()?;
        let flipped = lead.sign() == Ordering::Less;
        let normal = normal.iter().map(|x| x * &inv).collect();
        Ok((Hyperplane { normal, offset: &offset * &inv }, flipped))
    }

    pub fn new(normal: Vec<FieldScalar>, offset: FieldScalar) -> Result<Hyperplane> {
        Ok(Self::canonical(normal, offset)?.0)
    }

    pub fn normal(&self) -> &[FieldScalar] {
        &self.normal
    }
    pub fn offset(&self) -> &FieldScalar {
        &self.offset
    }
    pub fn dim(&self) -> usize {
        self.normal.len()
    }
    pub fn field(&self) -> &NumberField {
        self.offset.field()
    }

    /// normal·x − offset.
    pub fn eval(&self, x: &[FieldScalar]) -> FieldScalar {
        dot(self.field(), &self.normal, x) - &self.offset
    }

    pub fn contains(&self, x: &[FieldScalar]) -> bool {
        self.eval(x).is_zero()
    }

    /// The parallel subspace V(H).
    pub fn subspace(&self) -> Hyperplane {
        Hyperplane { normal: self.normal.clone(), offset: self.field().zero() }
    }

    /// H + t.
    pub fn translate(&self, t: &[FieldScalar]) -> Hyperplane {
        let off = &self.offset + &dot(self.field(), &self.normal, t);
        Hyperplane { normal: self.normal.clone(), offset: off }
    }

    pub fn cmp_canonical(&self, o: &Hyperplane) -> Ordering {
        cmp_vec(&self.normal, &o.normal).then_with(|| self.offset.cmp(&o.offset))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Halfspace {
    pub plane: Hyperplane,
    pub side: Side,
}

impl Halfspace {
    /// {x : normal·x ≤ offset} (or ≥), canonicalized.
    pub fn new(normal: Vec<FieldScalar>, offset: FieldScalar, side: Side) -> Result<Halfspace> {
        let (plane, flipped) = Hyperplane::canonical(normal, offset)?;
        Ok(Halfspace { plane, side: if flipped { side.flip() } else { side } })
    }

    /// Signed slack: positive strictly inside, zero on the plane.
    pub fn slack(&self, x: &[FieldScalar]) -> FieldScalar {
        let v = self.plane.eval(x);
        match self.side {
            Side::Le => -v,
            Side::Ge => v,
        }
    }

    pub fn translate(&self, t: &[FieldScalar]) -> Halfspace {
        Halfspace { plane: self.plane.translate(t), side: self.side }
    }

    /// Outward normal.
    pub fn outward(&self) -> Vec<FieldScalar> {
        match self.side {
            Side::Le => self.plane.normal.clone(),
            Side::Ge => self.plane.normal.iter().map(|x| -x).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Interior,
    Boundary,
    Outside,
}

/// A bounded convex polytope with nonempty interior, given by its facets.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowPolytope {
    pub label: Option<String>,
    halfspaces: Vec<Halfspace>,
    vertices: Vec<Vec<FieldScalar>>,
}

pub(crate) fn combinations(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, n, &mut Vec::new(), &mut out);
    out
}

fn affine_rank(field: &NumberField, pts: &[Vec<FieldScalar>]) -> usize {
    if pts.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<FieldScalar>> = pts[1..].iter().map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect()).collect();
    if rows.is_empty() {
        return 0;
    }
    FieldMatrix::new(field, rows).map(|m| m.rank()).unwrap_or(0)
}

fn cross(o: &[FieldScalar], a: &[FieldScalar], b: &[FieldScalar]) -> FieldScalar {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Strict convex hull in counter-clockwise order (collinear points dropped).
pub fn convex_hull(mut pts: Vec<Vec<FieldScalar>>) -> Vec<Vec<FieldScalar>> {
    pts.sort_by(|a, b| cmp_vec(a, b));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Vec<FieldScalar>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).sign() != Ordering::Greater {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<FieldScalar>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).sign() != Ordering::Greater {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

impl WindowPolytope {
    /// Builds a piece from halfspaces; redundant halfspaces are dropped.
    pub fn from_halfspaces(field: &NumberField, n: usize, label: Option<String>, hs: Vec<Halfspace>) -> Result<Self> {
        if hs.iter().any(|h| h.plane.dim() != n) {
            return Err(Error::Shape("halfspace dimension".into()));
        }
        if n == 0 {
            return Err(Error::InvalidWindow("internal dimension 0".into()));
        }
        let mut vertices: Vec<Vec<FieldScalar>> = Vec::new();
        for combo in combinations(hs.len(), n) {
            let rows: Vec<Vec<FieldScalar>> = combo.iter().map(|&i| hs[i].plane.normal.clone()).collect();
            let m = FieldMatrix::new(field, rows)?;
            if m.rank() < n {
                continue;
            }
            let rhs: Vec<FieldScalar> = combo.iter().map(|&i| hs[i].plane.offset.clone()).collect();
            let v = m.solve(&rhs).expect("full rank system");
            if hs.iter().all(|h| h.slack(&v).sign() != Ordering::Less) && !vertices.contains(&v) {
                vertices.push(v);
            }
        }
        if n <= 2 && !bounded(&hs) {
            return Err(Error::InvalidWindow("unbounded piece".into()));
        }
        if affine_rank(field, &vertices) < n || vertices.len() < n + 1 {
            return Err(Error::InvalidWindow("piece has empty interior".into()));
        }
        let mut facets: Vec<Halfspace> = Vec::new();
        for h in hs {
            let on: Vec<Vec<FieldScalar>> = vertices.iter().filter(|v| h.plane.contains(v)).cloned().collect();
            let is_facet = if n == 1 { !on.is_empty() } else { on.len() >= n && affine_rank(field, &on) == n - 1 };
            if is_facet && !facets.contains(&h) {
                facets.push(h);
            }
        }
        if n == 2 {
            vertices = convex_hull(vertices);
        } else {
            vertices.sort_by(|a, b| cmp_vec(a, b));
        }
        Ok(WindowPolytope { label, halfspaces: facets, vertices })
    }

    /// Convex hull of the given points (n ≤ 2); every point must be a hull vertex or on a hull edge.
    pub fn from_vertices(field: &NumberField, n: usize, label: Option<String>, pts: Vec<Vec<FieldScalar>>) -> Result<Self> {
        if pts.iter().any(|p| p.len() != n) {
            return Err(Error::Shape("vertex dimension".into()));
        }
        match n {
            1 => {
                let lo = pts.iter().map(|p| p[0].clone()).min().ok_or_else(|| Error::InvalidWindow("no vertices".into()))?;
                let hi = pts.iter().map(|p| p[0].clone()).max().unwrap();
                if lo == hi {
                    return Err(Error::InvalidWindow("piece has empty interior".into()));
                }
                let hs = vec![Halfspace::new(vec![field.one()], lo, Side::Ge)?, Halfspace::new(vec![field.one()], hi, Side::Le)?];
                Self::from_halfspaces(field, 1, label, hs)
            }
            2 => {
                let hull = convex_hull(pts.clone());
                if hull.len() < 3 {
                    return Err(Error::InvalidWindow("piece has empty interior".into()));
                }
                let mut hs = Vec::new();
                for i in 0..hull.len() {
                    let a = &hull[i];
                    let b = &hull[(i + 1) % hull.len()];
                    let normal = vec![&b[1] - &a[1], &a[0] - &b[0]];
                    let off = dot(field, &normal, a);
                    hs.push(Halfspace::new(normal, off, Side::Le)?);
                }
                let piece = Self::from_halfspaces(field, 2, label, hs)?;
                for p in &pts {
                    if piece.locate(p) == Location::Interior {
                        return Err(Error::InvalidWindow("vertices not in convex position".into()));
                    }
                }
                Ok(piece)
            }
            _ => Err(Error::UnsupportedDimension(n)),
        }
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }
    pub fn vertices(&self) -> &[Vec<FieldScalar>] {
        &self.vertices
    }
    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }
    pub fn field(&self) -> &NumberField {
        self.vertices[0][0].field()
    }

    pub fn locate(&self, x: &[FieldScalar]) -> Location {
        let mut boundary = false;
        for h in &self.halfspaces {
            match h.slack(x).sign() {
                Ordering::Less => return Location::Outside,
                Ordering::Equal => boundary = true,
                Ordering::Greater => {}
            }
        }
        if boundary {
            Location::Boundary
        } else {
            Location::Interior
        }
    }

    pub fn translate(&self, t: &[FieldScalar]) -> WindowPolytope {
        WindowPolytope {
            label: self.label.clone(),
            halfspaces: self.halfspaces.iter().map(|h| h.translate(t)).collect(),
            vertices: self.vertices.iter().map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect()).collect(),
        }
    }

    /// Length (n = 1) or area (n = 2).
    pub fn volume(&self) -> Result<FieldScalar> {
        match self.dim() {
            1 => Ok((&self.vertices[1][0] - &self.vertices[0][0]).abs()),
            2 => Ok(polygon_area(&self.vertices)),
            n => Err(Error::UnsupportedDimension(n)),
        }
    }

    /// Vertices lying on the plane of facet `i`.
    pub fn facet_vertices(&self, i: usize) -> Vec<Vec<FieldScalar>> {
        self.vertices.iter().filter(|v| self.halfspaces[i].plane.contains(v)).cloned().collect()
    }
}

/// Shoelace area of a counter-clockwise polygon.
pub fn polygon_area(v: &[Vec<FieldScalar>]) -> FieldScalar {
    let field = v[0][0].field();
    let mut acc = field.zero();
    for i in 0..v.len() {
        let a = &v[i];
        let b = &v[(i + 1) % v.len()];
        acc = acc + &a[0] * &b[1] - &b[0] * &a[1];
    }
    acc.scale(&num_rational::BigRational::new(1.into(), 2.into())).abs()
}

/// Outward normals positively span R^n (n ≤ 2).
fn bounded(hs: &[Halfspace]) -> bool {
    let outs: Vec<Vec<FieldScalar>> = hs.iter().map(|h| h.outward()).collect();
    match outs.first().map(|o| o.len()) {
        Some(1) => outs.iter().any(|o| o[0].sign() == Ordering::Greater) && outs.iter().any(|o| o[0].sign() == Ordering::Less),
        Some(2) => {
            // A nonzero recession direction can be taken on the boundary of some constraint.
            for u in &outs {
                for y in [vec![-&u[1], u[0].clone()], vec![u[1].clone(), -&u[0]]] {
                    let field = y[0].field().clone();
                    if outs.iter().all(|w| dot(&field, w, &y).sign() != Ordering::Greater) {
                        return false;
                    }
                }
            }
            true
        }
        _ => true,
    }
}

/// Finite union of convex pieces with pairwise disjoint interiors.
#[derive(Clone, Debug, PartialEq)]
pub struct Window {
    n: usize,
    pieces: Vec<WindowPolytope>,
}

/// Supporting hyperplanes 𝓗 and supporting subspaces 𝓗₀, both in canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportSet {
    pub hyperplanes: Vec<Hyperplane>,
    pub subspaces: Vec<Hyperplane>,
}

impl Window {
    pub fn new(n: usize, pieces: Vec<WindowPolytope>) -> Result<Window> {
        if pieces.iter().any(|p| p.dim() != n) {
            return Err(Error::Shape("piece dimension".into()));
        }
        let w = Window { n, pieces };
        if n <= 2 {
            for i in 0..w.pieces.len() {
                for j in i + 1..w.pieces.len() {
                    if !interiors_disjoint(&w.pieces[i], &w.pieces[j]) {
                        return Err(Error::InvalidWindow(format!("pieces {i} and {j} overlap")));
                    }
                }
            }
        }
        Ok(w)
    }

    /// The empty window (used for cyclic schemes, whose windows live per residue).
    pub fn empty(n: usize) -> Window {
        Window { n, pieces: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn pieces(&self) -> &[WindowPolytope] {
        &self.pieces
    }
    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_labelled(&self) -> bool {
        self.pieces.iter().any(|p| p.label.is_some())
    }

    /// Distinct labels in order of first appearance.
    pub fn labels(&self) -> Vec<Option<String>> {
        let mut out: Vec<Option<String>> = Vec::new();
        for p in &self.pieces {
            if !out.contains(&p.label) {
                out.push(p.label.clone());
            }
        }
        out
    }

    pub fn translate(&self, t: &[FieldScalar]) -> Window {
        Window { n: self.n, pieces: self.pieces.iter().map(|p| p.translate(t)).collect() }
    }

    pub fn volume(&self) -> Result<FieldScalar> {
        let field = self.pieces[0].field().clone();
        let mut acc = field.zero();
        for p in &self.pieces {
            acc = acc + p.volume()?;
        }
        Ok(acc)
    }

    /// Exact bounding box (lower and upper corners).
    pub fn bbox(&self) -> (Vec<FieldScalar>, Vec<FieldScalar>) {
        let mut lo: Vec<FieldScalar> = self.pieces[0].vertices[0].clone();
        let mut hi = lo.clone();
        for p in &self.pieces {
            for v in &p.vertices {
                for i in 0..self.n {
                    if v[i] < lo[i] {
                        lo[i] = v[i].clone();
                    }
                    if v[i] > hi[i] {
                        hi[i] = v[i].clone();
                    }
                }
            }
        }
        (lo, hi)
    }

    /// Max-norm diameter.
    pub fn diameter(&self) -> FieldScalar {
        let (lo, hi) = self.bbox();
        lo.iter().zip(&hi).map(|(a, b)| b - a).max().unwrap()
    }

    /// Facets that are not part of the labelled boundary: each such facet is
    /// covered by opposite facets of same-label pieces (decided exactly for n ≤ 2).
    pub fn covered_facets(&self) -> Vec<(usize, usize)> {
        if self.n > 2 {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (pi, p) in self.pieces.iter().enumerate() {
            for (fi, h) in p.halfspaces.iter().enumerate() {
                let mut cover: Vec<(FieldScalar, FieldScalar)> = Vec::new();
                let mut any = false;
                for (qi, q) in self.pieces.iter().enumerate() {
                    if qi == pi || q.label != p.label {
                        continue;
                    }
                    for (gi, g) in q.halfspaces.iter().enumerate() {
                        if g.plane == h.plane && g.side != h.side {
                            any = true;
                            if self.n == 2 {
                                cover.push(segment_param(&h.plane, &q.facet_vertices(gi)));
                            }
                        }
                    }
                }
                let covered = if self.n == 1 {
                    any
                } else {
                    let (lo, hi) = segment_param(&h.plane, &p.facet_vertices(fi));
                    interval_covered(&lo, &hi, cover)
                };
                if covered {
                    out.push((pi, fi));
                }
            }
        }
        out
    }

    /// Supporting hyperplanes and subspaces.
    pub fn support(&self) -> SupportSet {
        let covered = self.covered_facets();
        let mut hyperplanes: Vec<Hyperplane> = Vec::new();
        for (pi, p) in self.pieces.iter().enumerate() {
            for (fi, h) in p.halfspaces.iter().enumerate() {
                if !covered.contains(&(pi, fi)) && !hyperplanes.contains(&h.plane) {
                    hyperplanes.push(h.plane.clone());
                }
            }
        }
        // A plane may carry both a covered and an uncovered facet.
        hyperplanes.sort_by(|a, b| a.cmp_canonical(b));
        let mut subspaces: Vec<Hyperplane> = Vec::new();
        for h in &hyperplanes {
            let s = h.subspace();
            if !subspaces.contains(&s) {
                subspaces.push(s);
            }
        }
        subspaces.sort_by(|a, b| a.cmp_canonical(b));
        SupportSet { hyperplanes, subspaces }
    }

    /// Index of the piece whose interior contains x, or the boundary status.
    pub fn locate(&self, x: &[FieldScalar]) -> (Location, Option<usize>) {
        let mut boundary = None;
        for (i, p) in self.pieces.iter().enumerate() {
            match p.locate(x) {
                Location::Interior => return (Location::Interior, Some(i)),
                Location::Boundary => {
                    boundary.get_or_insert(i);
                }
                Location::Outside => {}
            }
        }
        match boundary {
            Some(i) => (Location::Boundary, Some(i)),
            None => (Location::Outside, None),
        }
    }
}

/// Parameter interval of a segment along a line in the plane.
fn segment_param(plane: &Hyperplane, pts: &[Vec<FieldScalar>]) -> (FieldScalar, FieldScalar) {
    let n = plane.normal();
    let t = |p: &Vec<FieldScalar>| &(-&n[1]) * &p[0] + &n[0] * &p[1];
    let vals: Vec<FieldScalar> = pts.iter().map(t).collect();
    (vals.iter().min().unwrap().clone(), vals.iter().max().unwrap().clone())
}

fn interval_covered(lo: &FieldScalar, hi: &FieldScalar, mut cover: Vec<(FieldScalar, FieldScalar)>) -> bool {
    cover.sort_by(|a, b| a.0.cmp(&b.0));
    let mut reach = lo.clone();
    for (a, b) in cover {
        if a > reach {
            break;
        }
        if b > reach {
            reach = b;
        }
    }
    reach >= *hi
}

/// Separating-axis test for convex pieces (n ≤ 2).
pub fn interiors_disjoint(a: &WindowPolytope, b: &WindowPolytope) -> bool {
    let sep = |p: &WindowPolytope, q: &WindowPolytope| p.halfspaces.iter().any(|h| q.vertices.iter().all(|v| h.slack(v).sign() != Ordering::Greater));
    sep(a, b) || sep(b, a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(k: &NumberField, x: i64, y: i64) -> Vec<FieldScalar> {
        vec![k.int(x), k.int(y)]
    }

    #[test]
    fn unit_square_support() {
        let k = NumberField::rationals();
        let sq = WindowPolytope::from_vertices(&k, 2, None, vec![pt(&k, 0, 0), pt(&k, 1, 0), pt(&k, 1, 1), pt(&k, 0, 1)]).unwrap();
        let w = Window::new(2, vec![sq]).unwrap();
        let s = w.support();
        assert_eq!(s.hyperplanes.len(), 4);
        assert_eq!(s.subspaces.len(), 2);
        assert_eq!(w.volume().unwrap(), k.one());
    }

    #[test]
    fn same_label_split_square_is_one_boundary() {
        let k = NumberField::rationals();
        let a = WindowPolytope::from_vertices(&k, 2, None, vec![pt(&k, 0, 0), pt(&k, 1, 0), pt(&k, 0, 1)]).unwrap();
        let b = WindowPolytope::from_vertices(&k, 2, None, vec![pt(&k, 1, 0), pt(&k, 1, 1), pt(&k, 0, 1)]).unwrap();
        let w = Window::new(2, vec![a.clone(), b.clone()]).unwrap();
        assert_eq!(w.support().hyperplanes.len(), 4);
        let mut b2 = b;
        b2.label = Some("x".into());
        let w2 = Window::new(2, vec![a, b2]).unwrap();
        assert_eq!(w2.support().hyperplanes.len(), 5);
    }

    #[test]
    fn overlap_rejected() {
        let k = NumberField::rationals();
        let a = WindowPolytope::from_vertices(&k, 2, None, vec![pt(&k, 0, 0), pt(&k, 2, 0), pt(&k, 0, 2)]).unwrap();
        let b = WindowPolytope::from_vertices(&k, 2, None, vec![pt(&k, 0, 0), pt(&k, 1, 0), pt(&k, 1, 1), pt(&k, 0, 1)]).unwrap();
        assert!(Window::new(2, vec![a, b]).is_err());
    }

    #[test]
    fn unbounded_rejected() {
        let k = NumberField::rationals();
        let hs = vec![
            Halfspace::new(vec![k.one(), k.zero()], k.zero(), Side::Ge).unwrap(),
            Halfspace::new(vec![k.zero(), k.one()], k.zero(), Side::Ge).unwrap(),
            Halfspace::new(vec![k.one(), k.int(-1)], k.one(), Side::Le).unwrap(),
        ];
        assert!(WindowPolytope::from_halfspaces(&k, 2, None, hs).is_err());
    }
}
