//! Dense matrices over Q and over a number field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::{FieldScalar, NumberField};
use crate::error::{Error, Result};

pub type QMatrix = Vec<Vec<BigRational>>;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Reduced row echelon form; returns pivot columns.
pub fn rref(m: &mut QMatrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &QMatrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of the right kernel {x : M x = 0} over Q.
pub fn nullspace(m: &QMatrix, cols: usize) -> Vec<Vec<BigRational>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

/// Some rational solution of A x = b, if one exists.
pub fn solve(a: &QMatrix, b: &[BigRational], cols: usize) -> Option<Vec<BigRational>> {
    let mut aug: QMatrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][cols].clone();
    }
    Some(x)
}

pub fn det(m: &QMatrix) -> BigRational {
    let n = m.len();
    let mut a = m.clone();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return BigRational::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    d
}

/// Rank over the field (equal to the real rank, as the field embeds in R).
pub fn field_rank(m: &FieldMatrix) -> usize {
    m.rank()
}

/// Scales a rational row to a primitive integer row with the same sign pattern.
pub fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// A dense matrix over a number field.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldMatrix {
    field: NumberField,
    rows: Vec<Vec<FieldScalar>>,
    cols: usize,
}

impl FieldMatrix {
    pub fn new(field: &NumberField, rows: Vec<Vec<FieldScalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        for r in &rows {
            if r.len() != cols {
                return Err(Error::Shape("ragged matrix".into()));
            }
            if r.iter().any(|x| x.field() != field) {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(FieldMatrix { field: field.clone(), rows, cols })
    }

    pub fn zeros(field: &NumberField, r: usize, c: usize) -> Self {
        FieldMatrix { field: field.clone(), rows: vec![vec![field.zero(); c]; r], cols: c }
    }

    pub fn identity(field: &NumberField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.rows[i][i] = field.one();
        }
        m
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }
    pub fn ncols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &FieldScalar {
        &self.rows[i][j]
    }
    pub fn row(&self, i: usize) -> &[FieldScalar] {
        &self.rows[i]
    }
    pub fn rows(&self) -> &[Vec<FieldScalar>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vec<FieldScalar> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> FieldMatrix {
        let rows = (0..self.cols).map(|j| self.column(j)).collect();
        FieldMatrix { field: self.field.clone(), rows, cols: self.rows.len() }
    }

    pub fn mul(&self, o: &FieldMatrix) -> Result<FieldMatrix> {
        if self.cols != o.nrows() {
            return Err(Error::Shape("matrix product".into()));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..o.cols)
                    .map(|j| {
                        let mut acc = self.field.zero();
                        for (k, x) in r.iter().enumerate() {
                            if !x.is_zero() && !o.rows[k][j].is_zero() {
                                acc = acc + x * &o.rows[k][j];
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Ok(FieldMatrix { field: self.field.clone(), rows, cols: o.cols })
    }

    pub fn mul_vec(&self, v: &[FieldScalar]) -> Vec<FieldScalar> {
        self.rows.iter().map(|r| dot(&self.field, r, v)).collect()
    }

    /// Image of an integer vector.
    pub fn mul_int(&self, v: &[i64]) -> Vec<FieldScalar> {
        self.rows
            .iter()
            .map(|r| {
                let mut acc = self.field.zero();
                for (x, &c) in r.iter().zip(v) {
                    if c != 0 {
                        acc = acc + x.scale(&q(c));
                    }
                }
                acc
            })
            .collect()
    }

    /// Image of a rational vector.
    pub fn mul_rat(&self, v: &[BigRational]) -> Vec<FieldScalar> {
        self.rows
            .iter()
            .map(|r| {
                let mut acc = self.field.zero();
                for (x, c) in r.iter().zip(v) {
                    if !c.is_zero() {
                        acc = acc + x.scale(c);
                    }
                }
                acc
            })
            .collect()
    }

    /// Row echelon reduction (reduced); returns pivot columns.
    fn rref_in_place(rows: &mut [Vec<FieldScalar>], cols: usize) -> Vec<usize> {
        let n = rows.len();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == n {
                break;
            }
            let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else { continue };
            rows.swap(r, p);
            let inv = rows[r][c].inv().expect("nonzero pivot");
            for x in rows[r].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..n {
                if i != r && !rows[i][c].is_zero() {
                    let f = rows[i][c].clone();
                    for j in c..rows[i].len() {
                        let d = &f * &rows[r][j];
                        rows[i][j] = &rows[i][j] - &d;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        Self::rref_in_place(&mut rows, self.cols).len()
    }

    /// Basis of the right kernel over the field.
    pub fn nullspace(&self) -> Vec<Vec<FieldScalar>> {
        let mut a = self.rows.clone();
        let pivots = Self::rref_in_place(&mut a, self.cols);
        (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -&a[r][f];
                }
                v
            })
            .collect()
    }

    /// Some solution of M x = b, if one exists.
    pub fn solve(&self, b: &[FieldScalar]) -> Option<Vec<FieldScalar>> {
        let mut aug: Vec<Vec<FieldScalar>> = self
            .rows
            .iter()
            .zip(b)
            .map(|(r, x)| {
                let mut r = r.clone();
                r.push(x.clone());
                r
            })
            .collect();
        let pivots = Self::rref_in_place(&mut aug, self.cols + 1);
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug[r][self.cols].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Result<FieldMatrix> {
        let n = self.rows.len();
        if n != self.cols {
            return Err(Error::Shape("inverse of non-square matrix".into()));
        }
        let mut aug: Vec<Vec<FieldScalar>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut r = r.clone();
                for j in 0..n {
                    r.push(if i == j { self.field.one() } else { self.field.zero() });
                }
                r
            })
            .collect();
        let pivots = Self::rref_in_place(&mut aug, n);
        if pivots.len() < n {
            return Err(Error::DivisionByZero);
        }
        let rows = aug.into_iter().map(|r| r[n..].to_vec()).collect();
        Ok(FieldMatrix { field: self.field.clone(), rows, cols: n })
    }

    pub fn det(&self) -> FieldScalar {
        let n = self.rows.len();
        let mut a = self.rows.clone();
        let mut d = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return self.field.zero() };
            if p != c {
                a.swap(p, c);
                d = -d;
            }
            d = &d * &a[c][c];
            let inv = a[c][c].inv().expect("nonzero");
            for i in c + 1..n {
                if !a[i][c].is_zero() {
                    let f = &a[i][c] * &inv;
                    for j in c..n {
                        let t = &f * &a[c][j];
                        a[i][j] = &a[i][j] - &t;
                    }
                }
            }
        }
        d
    }

    /// Rational rows equivalent to M x = 0 for rational x: each field row
    /// contributes one row per power-basis coordinate.
    pub fn rational_restriction(&self) -> QMatrix {
        let g = self.field.degree();
        let mut out = Vec::with_capacity(self.rows.len() * g);
        for r in &self.rows {
            for t in 0..g {
                out.push(r.iter().map(|x| x.coeffs()[t].clone()).collect());
            }
        }
        out
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.iter().map(|x| x.to_f64()).collect()).collect()
    }
}

pub fn dot(field: &NumberField, a: &[FieldScalar], b: &[FieldScalar]) -> FieldScalar {
    let mut acc = field.zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc + x * y;
        }
    }
    acc
}
