//! Faces of a window cut by a finite set of hyperplanes (n ≤ 2).
//!
//! Cells are split recursively with f64 predicates; any sign that is not
//! clearly decided falls back to an exact 3×3 determinant in the field.
//! Faces are open, so cells of different pieces merge only across a shared
//! edge of positive length that does not lie on a cutter.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::algebra::FieldScalar;
use crate::error::{Error, Result};

use super::polytope::{cmp_vec, polygon_area, Hyperplane, Window};

/// One open face: a union of convex cells.
#[derive(Clone, Debug)]
pub struct Face {
    /// Convex cells (CCW polygons; for n = 1 the two endpoints).
    pub cells: Vec<Vec<Vec<FieldScalar>>>,
    pub volume: FieldScalar,
    pub lowest: Vec<FieldScalar>,
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    pub face_count: usize,
    pub min_volume: FieldScalar,
    /// Present when requested; sorted by lowest vertex.
    pub faces: Option<Vec<Face>>,
}

struct Line {
    a: [FieldScalar; 2],
    c: FieldScalar,
    af: [f64; 2],
    cf: f64,
    cutter: bool,
}

#[derive(Clone)]
struct Cell {
    piece: usize,
    pts: Vec<[f64; 2]>,
    // edge i runs from vertex i to vertex i+1 and lies on line edges[i];
    // vertex i is the meet of edges[i-1] and edges[i]
    edges: Vec<usize>,
}

/// Connected components of int(W) minus the cutters, with their volumes.
pub fn arrangement_census(w: &Window, cutters: &[Hyperplane], keep_faces: bool) -> Result<Arrangement> {
    match w.dim() {
        1 => census_1d(w, cutters, keep_faces),
        2 => census_2d(w, cutters, keep_faces),
        n => Err(Error::UnsupportedDimension(n)),
    }
}

fn census_1d(w: &Window, cutters: &[Hyperplane], keep_faces: bool) -> Result<Arrangement> {
    let field = w.pieces().first().ok_or_else(|| Error::InvalidWindow("empty window".into()))?.field().clone();
    let cuts: Vec<FieldScalar> = cutters.iter().map(|h| h.offset().clone()).collect();
    let mut cuts_sorted = cuts.clone();
    cuts_sorted.sort();
    cuts_sorted.dedup();
    let mut segs: Vec<(FieldScalar, FieldScalar)> = Vec::new();
    for p in w.pieces() {
        let v = p.vertices();
        let (lo, hi) = (v.iter().map(|x| x[0].clone()).min().unwrap(), v.iter().map(|x| x[0].clone()).max().unwrap());
        let start = cuts_sorted.partition_point(|c| c <= &lo);
        let mut prev = lo;
        for c in &cuts_sorted[start..] {
            if c >= &hi {
                break;
            }
            segs.push((prev, c.clone()));
            prev = c.clone();
        }
        segs.push((prev, hi));
    }
    segs.sort();
    // merge across shared endpoints that are not cut points
    let mut faces: Vec<Vec<(FieldScalar, FieldScalar)>> = Vec::new();
    for s in segs {
        if let Some(last) = faces.last_mut() {
            let end = &last.last().unwrap().1;
            if *end == s.0 && cuts_sorted.binary_search(end).is_err() {
                last.push(s);
                continue;
            }
        }
        faces.push(vec![s]);
    }
    let vols: Vec<FieldScalar> = faces.iter().map(|f| f.iter().map(|(a, b)| b - a).fold(field.zero(), |x, y| x + y)).collect();
    let min_volume = vols.iter().min().cloned().ok_or_else(|| Error::InvalidWindow("empty window".into()))?;
    let out = keep_faces.then(|| {
        faces
            .iter()
            .zip(&vols)
            .map(|(f, v)| Face {
                cells: f.iter().map(|(a, b)| vec![vec![a.clone()], vec![b.clone()]]).collect(),
                volume: v.clone(),
                lowest: vec![f[0].0.clone()],
            })
            .collect()
    });
    Ok(Arrangement { face_count: faces.len(), min_volume, faces: out })
}

struct Ctx {
    lines: Vec<Line>,
}

impl Ctx {
    fn meet_f64(&self, p: usize, q: usize) -> [f64; 2] {
        let (a, b) = (&self.lines[p], &self.lines[q]);
        let det = a.af[0] * b.af[1] - a.af[1] * b.af[0];
        [(a.cf * b.af[1] - a.af[1] * b.cf) / det, (a.af[0] * b.cf - a.cf * b.af[0]) / det]
    }

    fn meet(&self, p: usize, q: usize) -> Vec<FieldScalar> {
        let (a, b) = (&self.lines[p], &self.lines[q]);
        let det = &a.a[0] * &b.a[1] - &a.a[1] * &b.a[0];
        let inv = det.inv().expect("edges of a cell are not parallel");
        vec![(&a.c * &b.a[1] - &a.a[1] * &b.c) * inv.clone(), (&a.a[0] * &b.c - &a.c * &b.a[0]) * inv]
    }

    /// Sign of line l at the meet of lines p and q.
    fn side(&self, l: usize, p: usize, q: usize, approx: &[f64; 2]) -> Ordering {
        let ln = &self.lines[l];
        let v = ln.af[0] * approx[0] + ln.af[1] * approx[1] - ln.cf;
        let scale = ln.af[0].abs() * approx[0].abs() + ln.af[1].abs() * approx[1].abs() + ln.cf.abs();
        if v.abs() > 1e-8 * (1.0 + scale) {
            return if v > 0.0 { Ordering::Greater } else { Ordering::Less };
        }
        let (a, b) = (&self.lines[p], &self.lines[q]);
        let det = &a.a[0] * &b.a[1] - &a.a[1] * &b.a[0];
        let x0 = &a.c * &b.a[1] - &a.a[1] * &b.c;
        let x1 = &a.a[0] * &b.c - &a.c * &b.a[0];
        let num = &ln.a[0] * &x0 + &ln.a[1] * &x1 - &ln.c * &det;
        let s = num.sign();
        if det.sign() == Ordering::Less {
            s.reverse()
        } else {
            s
        }
    }
}

fn census_2d(w: &Window, cutters: &[Hyperplane], keep_faces: bool) -> Result<Arrangement> {
    let field = w.pieces().first().ok_or_else(|| Error::InvalidWindow("empty window".into()))?.field().clone();
    let mut index: HashMap<Hyperplane, usize> = HashMap::new();
    let mut lines: Vec<Line> = Vec::new();
    let mut add = |h: &Hyperplane, cutter: bool, lines: &mut Vec<Line>| -> usize {
        if let Some(&i) = index.get(h) {
            lines[i].cutter |= cutter;
            return i;
        }
        let a = [h.normal()[0].clone(), h.normal()[1].clone()];
        let af = [a[0].to_f64(), a[1].to_f64()];
        lines.push(Line { cf: h.offset().to_f64(), c: h.offset().clone(), a, af, cutter });
        index.insert(h.clone(), lines.len() - 1);
        lines.len() - 1
    };
    let mut cells = Vec::new();
    for (pi, p) in w.pieces().iter().enumerate() {
        let v = p.vertices();
        let mut edges = Vec::new();
        for i in 0..v.len() {
            let (s, t) = (&v[i], &v[(i + 1) % v.len()]);
            let h =
                p.halfspaces().iter().find(|h| h.plane.contains(s) && h.plane.contains(t)).ok_or_else(|| Error::InvalidWindow("edge without facet".into()))?;
            edges.push(add(&h.plane, false, &mut lines));
        }
        // vertex i is the meet of edges[i-1] and edges[i]
        let pts = v.iter().map(|x| [x[0].to_f64(), x[1].to_f64()]).collect();
        cells.push(Cell { piece: pi, pts, edges });
    }
    let mut cut_ids = Vec::new();
    for h in cutters {
        if h.dim() != 2 {
            return Err(Error::Shape("cutter dimension".into()));
        }
        cut_ids.push(add(h, true, &mut lines));
    }
    cut_ids.sort_unstable();
    cut_ids.dedup();
    let ctx = Ctx { lines };

    let mut done: Vec<Cell> = Vec::new();
    for c in cells {
        split_all(&ctx, c, &cut_ids, &mut done);
    }

    // union cells of different pieces across uncut shared edges
    let mut parent: Vec<usize> = (0..done.len()).collect();
    if w.pieces().len() > 1 {
        let mut by_line: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        for (ci, c) in done.iter().enumerate() {
            for (ei, &l) in c.edges.iter().enumerate() {
                if !ctx.lines[l].cutter {
                    by_line.entry(l).or_default().push((ci, ei));
                }
            }
        }
        for (l, list) in by_line {
            for x in 0..list.len() {
                for y in x + 1..list.len() {
                    let (ca, ea) = list[x];
                    let (cb, eb) = list[y];
                    if done[ca].piece != done[cb].piece && overlap(&ctx, l, &done[ca], ea, &done[cb], eb) {
                        let (ra, rb) = (find(&mut parent, ca), find(&mut parent, cb));
                        parent[ra.max(rb)] = ra.min(rb);
                    }
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..done.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let face_count = groups.len();

    let approx: Vec<f64> = done.iter().map(|c| shoelace_f64(&c.pts)).collect();
    let mut face_area: Vec<(f64, Vec<usize>)> = groups.into_values().map(|g| (g.iter().map(|&i| approx[i]).sum(), g)).collect();
    let fmin = face_area.iter().map(|f| f.0).fold(f64::INFINITY, f64::min);
    let exact_cells = |c: &Cell| -> Vec<Vec<FieldScalar>> {
        let m = c.edges.len();
        (0..m).map(|i| ctx.meet(c.edges[(i + m - 1) % m], c.edges[i])).collect()
    };
    let exact_area = |g: &[usize]| -> FieldScalar { g.iter().map(|&i| polygon_area(&exact_cells(&done[i]))).fold(field.zero(), |a, b| a + b) };
    let min_volume = face_area
        .iter()
        .filter(|f| f.0 <= fmin * (1.0 + 1e-6) + 1e-12)
        .map(|f| exact_area(&f.1))
        .min()
        .ok_or_else(|| Error::InvalidWindow("empty window".into()))?;
    let faces = keep_faces.then(|| {
        face_area.iter_mut().for_each(|f| f.1.sort_unstable());
        let mut faces: Vec<Face> = face_area
            .iter()
            .map(|(_, g)| {
                let cells: Vec<Vec<Vec<FieldScalar>>> = g.iter().map(|&i| exact_cells(&done[i])).collect();
                let volume = cells.iter().map(|c| polygon_area(c)).fold(field.zero(), |a, b| a + b);
                let lowest = cells.iter().flatten().min_by(|a, b| cmp_vec(a, b)).unwrap().clone();
                Face { cells, volume, lowest }
            })
            .collect();
        faces.sort_by(|a, b| cmp_vec(&a.lowest, &b.lowest));
        faces
    });
    Ok(Arrangement { face_count, min_volume, faces })
}

fn find(p: &mut [usize], mut i: usize) -> usize {
    while p[i] != i {
        p[i] = p[p[i]];
        i = p[i];
    }
    i
}

fn shoelace_f64(p: &[[f64; 2]]) -> f64 {
    let m = p.len();
    (0..m).map(|i| p[i][0] * p[(i + 1) % m][1] - p[(i + 1) % m][0] * p[i][1]).sum::<f64>() / 2.0
}

/// Splits `cell` by every cutter crossing its interior, depth first.
fn split_all(ctx: &Ctx, cell: Cell, cuts: &[usize], out: &mut Vec<Cell>) {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &cell.pts {
        for t in 0..2 {
            lo[t] = lo[t].min(p[t]);
            hi[t] = hi[t].max(p[t]);
        }
    }
    // keep cutters that may cross the bounding box
    let live: Vec<usize> = cuts
        .iter()
        .copied()
        .filter(|&l| {
            let ln = &ctx.lines[l];
            let mid = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
            let v = ln.af[0] * mid[0] + ln.af[1] * mid[1] - ln.cf;
            let reach = ln.af[0].abs() * (hi[0] - lo[0]) / 2.0 + ln.af[1].abs() * (hi[1] - lo[1]) / 2.0;
            v.abs() <= reach * (1.0 + 1e-9) + 1e-9
        })
        .collect();
    for (i, &l) in live.iter().enumerate() {
        if let Some((a, b)) = split(ctx, &cell, l) {
            let rest = &live[i + 1..];
            split_all(ctx, a, rest, out);
            split_all(ctx, b, rest, out);
            return;
        }
    }
    out.push(cell);
}

fn split(ctx: &Ctx, cell: &Cell, l: usize) -> Option<(Cell, Cell)> {
    let m = cell.edges.len();
    if cell.edges.contains(&l) {
        return None;
    }
    let signs: Vec<Ordering> = (0..m).map(|i| ctx.side(l, cell.edges[(i + m - 1) % m], cell.edges[i], &cell.pts[i])).collect();
    if !signs.contains(&Ordering::Less) || !signs.contains(&Ordering::Greater) {
        return None;
    }
    let part = |w: Ordering| {
        let mut c = Cell { piece: cell.piece, pts: vec![], edges: vec![] };
        for i in 0..m {
            let (si, sj) = (signs[i], signs[(i + 1) % m]);
            let e = cell.edges[i];
            if si == w {
                c.pts.push(cell.pts[i]);
                c.edges.push(e);
                if sj == w.reverse() {
                    c.pts.push(ctx.meet_f64(e, l));
                    c.edges.push(l);
                }
            } else if si == Ordering::Equal {
                c.pts.push(cell.pts[i]);
                c.edges.push(if sj == w { e } else { l });
            } else if sj == w {
                c.pts.push(ctx.meet_f64(e, l));
                c.edges.push(e);
            }
        }
        c
    };
    Some((part(Ordering::Less), part(Ordering::Greater)))
}

fn overlap(ctx: &Ctx, l: usize, a: &Cell, ea: usize, b: &Cell, eb: usize) -> bool {
    let ends = |c: &Cell, e: usize| {
        let m = c.edges.len();
        let p = ctx.meet(c.edges[(e + m - 1) % m], c.edges[e]);
        let q = ctx.meet(c.edges[e], c.edges[(e + 1) % m]);
        (p, q)
    };
    // parametrize along the line by the coordinate with nonzero direction
    let dir_t = if ctx.lines[l].a[1].is_zero() { 1 } else { 0 };
    let (p, q) = ends(a, ea);
    let (r, s) = ends(b, eb);
    let (a0, a1) = if p[dir_t] <= q[dir_t] { (p[dir_t].clone(), q[dir_t].clone()) } else { (q[dir_t].clone(), p[dir_t].clone()) };
    let (b0, b1) = if r[dir_t] <= s[dir_t] { (r[dir_t].clone(), s[dir_t].clone()) } else { (s[dir_t].clone(), r[dir_t].clone()) };
    a0.max(b0) < a1.min(b1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::NumberField;
    use crate::geometry::WindowPolytope;

    fn square(k: &NumberField) -> Window {
        let p = |x: i64, y: i64| vec![k.int(x), k.int(y)];
        Window::new(2, vec![WindowPolytope::from_vertices(k, 2, None, vec![p(0, 0), p(1, 0), p(1, 1), p(0, 1)]).unwrap()]).unwrap()
    }

    fn line(k: &NumberField, a: i64, b: i64, c: FieldScalar) -> Hyperplane {
        Hyperplane::new(vec![k.int(a), k.int(b)], c).unwrap()
    }

    /// V − E + F over the bounded subdivision of a single convex piece.
    fn euler(arr: &Arrangement) -> i64 {
        let faces = arr.faces.as_ref().unwrap();
        let cells: Vec<&Vec<Vec<FieldScalar>>> = faces.iter().flat_map(|f| &f.cells).collect();
        let mut verts: Vec<Vec<FieldScalar>> = cells.iter().flat_map(|c| c.iter().cloned()).collect();
        verts.sort_by(|a, b| cmp_vec(a, b));
        verts.dedup();
        // split every cell edge at vertices strictly inside it
        let mut segs: Vec<(Vec<FieldScalar>, Vec<FieldScalar>)> = Vec::new();
        for c in &cells {
            for i in 0..c.len() {
                let (p, q) = (&c[i], &c[(i + 1) % c.len()]);
                let mut on: Vec<Vec<FieldScalar>> = verts
                    .iter()
                    .filter(|v| {
                        let cross = (&q[0] - &p[0]) * (&v[1] - &p[1]) - (&q[1] - &p[1]) * (&v[0] - &p[0]);
                        let lo = |t: usize| p[t].clone().min(q[t].clone());
                        let hi = |t: usize| p[t].clone().max(q[t].clone());
                        cross.is_zero() && (0..2).all(|t| lo(t) <= v[t] && v[t] <= hi(t))
                    })
                    .cloned()
                    .collect();
                on.sort_by(|a, b| cmp_vec(a, b));
                for w in on.windows(2) {
                    segs.push((w[0].clone(), w[1].clone()));
                }
            }
        }
        segs.sort_by(|a, b| cmp_vec(&a.0, &b.0).then_with(|| cmp_vec(&a.1, &b.1)));
        segs.dedup();
        verts.len() as i64 - segs.len() as i64 + cells.len() as i64
    }

    #[test]
    fn interval_half() {
        let k = NumberField::rationals();
        let w = Window::new(1, vec![WindowPolytope::from_vertices(&k, 1, None, vec![vec![k.zero()], vec![k.one()]]).unwrap()]).unwrap();
        let a = arrangement_census(&w, &[Hyperplane::new(vec![k.one()], k.rat(1, 2)).unwrap()], true).unwrap();
        assert_eq!((a.face_count, a.min_volume), (2, k.rat(1, 2)));
    }

    #[test]
    fn square_diagonals() {
        let k = NumberField::rationals();
        let w = square(&k);
        let cuts = [line(&k, 1, -1, k.zero()), line(&k, 1, 1, k.one())];
        let a = arrangement_census(&w, &cuts, true).unwrap();
        assert_eq!((a.face_count, a.min_volume.clone()), (4, k.rat(1, 4)));
        assert_eq!(euler(&a), 1);
    }

    #[test]
    fn square_irrational_cut() {
        let k = NumberField::quadratic(2).unwrap();
        let w = square(&k);
        let a = arrangement_census(&w, &[line(&k, 1, 0, k.theta() - k.one())], true).unwrap();
        assert_eq!(a.face_count, 2);
        assert_eq!(a.min_volume, k.theta() - k.one());
        let total = a.faces.unwrap().iter().fold(k.zero(), |s, f| s + f.volume.clone());
        assert_eq!(total, k.one());
    }

    #[test]
    fn concurrent_lines_and_partition() {
        let k = NumberField::rationals();
        let w = square(&k);
        // three lines through (1/2, 1/2) plus a grid line
        let cuts = [line(&k, 1, -1, k.zero()), line(&k, 1, 1, k.one()), line(&k, 1, 0, k.rat(1, 2)), line(&k, 0, 1, k.rat(1, 3))];
        let a = arrangement_census(&w, &cuts, true).unwrap();
        assert_eq!(a.face_count, 10);
        assert_eq!(euler(&a), 1);
        let total = a.faces.as_ref().unwrap().iter().fold(k.zero(), |s, f| s + f.volume.clone());
        assert_eq!(total, k.one());
    }

    #[test]
    fn merge_across_uncut_shared_edge() {
        let k = NumberField::rationals();
        let p = |x: i64, y: i64| vec![k.int(x), k.int(y)];
        let a = WindowPolytope::from_vertices(&k, 2, None, vec![p(0, 0), p(1, 0), p(0, 1)]).unwrap();
        let b = WindowPolytope::from_vertices(&k, 2, None, vec![p(1, 0), p(1, 1), p(0, 1)]).unwrap();
        let w = Window::new(2, vec![a, b]).unwrap();
        assert_eq!(arrangement_census(&w, &[], false).unwrap().face_count, 1);
        let cut = arrangement_census(&w, &[line(&k, 1, 0, k.rat(1, 2))], false).unwrap();
        assert_eq!(cut.face_count, 2);
        let diag = arrangement_census(&w, &[line(&k, 1, 1, k.one())], false).unwrap();
        assert_eq!(diag.face_count, 2);
    }

    #[test]
    fn three_dims_rejected() {
        let w = Window::empty(3);
        assert!(matches!(arrangement_census(&w, &[], false), Err(Error::UnsupportedDimension(3))));
    }
}
