//! Lattices in Q^k: Hermite normal form, integer kernels, indices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::clear_denominators;

/// Row-style Hermite normal form of the lattice spanned by integer rows.
///
/// Output rows are nonzero and in echelon form; each pivot is positive and the
/// entries above it lie in [0, pivot). The result is unique for a lattice.
pub fn hnf_rows(mut rows: Vec<Vec<BigInt>>, cols: usize) -> Vec<Vec<BigInt>> {
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows.len() {
                if !rows[i][c].is_zero() && best.is_none_or(|b| rows[i][c].abs() < rows[b][c].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            rows.swap(r, b);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let f = rows[i][c].div_floor(&rows[r][c]);
                let (head, tail) = rows.split_at_mut(i);
                for (x, y) in tail[0].iter_mut().zip(&head[r]) {
                    *x -= &f * y;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r == rows.len() || rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let f = rows[i][c].div_floor(&rows[r][c]);
            if !f.is_zero() {
                let (head, tail) = rows.split_at_mut(r);
                for (x, y) in head[i].iter_mut().zip(&tail[0]) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// A lattice (discrete subgroup) of Q^k, stored by its canonical HNF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<BigRational>>,
}

impl Lattice {
    pub fn from_generators(dim: usize, gens: &[Vec<BigRational>]) -> Self {
        let den = gens.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let rows: Vec<Vec<BigInt>> = gens.iter().map(|g| g.iter().map(|x| x.numer() * (&den / x.denom())).collect()).collect();
        let h = hnf_rows(rows, dim);
        let d = BigRational::from_integer(den);
        let basis = h.into_iter().map(|r| r.into_iter().map(|x| BigRational::from_integer(x) / &d).collect()).collect();
        Lattice { dim, basis }
    }

    pub fn from_int_generators(dim: usize, gens: &[Vec<BigInt>]) -> Self {
        let basis = hnf_rows(gens.to_vec(), dim).into_iter().map(|r| r.into_iter().map(BigRational::from_integer).collect()).collect();
        Lattice { dim, basis }
    }

    /// Z^k.
    pub fn standard(dim: usize) -> Self {
        let gens: Vec<Vec<BigInt>> = (0..dim).map(|i| (0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
        Self::from_int_generators(dim, &gens)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Vec<BigRational>] {
        &self.basis
    }

    pub fn is_integral(&self) -> bool {
        self.basis.iter().flatten().all(|x| x.is_integer())
    }

    /// Integer basis rows (panics unless integral).
    pub fn int_basis(&self) -> Vec<Vec<BigInt>> {
        self.basis
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        assert!(x.is_integer(), "lattice is not integral");
                        x.to_integer()
                    })
                    .collect()
            })
            .collect()
    }

    /// Integer coordinates of `v` in the HNF basis, if `v` is in the lattice.
    pub fn coords(&self, v: &[BigRational]) -> Option<Vec<BigInt>> {
        let mut rem = v.to_vec();
        let mut out = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            let p = b.iter().position(|x| !x.is_zero()).expect("nonzero basis row");
            if rem[..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let c = &rem[p] / &b[p];
            if !c.is_integer() {
                return None;
            }
            for (x, y) in rem.iter_mut().zip(b) {
                *x -= &c * y;
            }
            out.push(c.to_integer());
        }
        if rem.iter().all(|x| x.is_zero()) {
            Some(out)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_int(&self, v: &[BigInt]) -> bool {
        let r: Vec<BigRational> = v.iter().cloned().map(BigRational::from_integer).collect();
        self.contains(&r)
    }

    pub fn contains_lattice(&self, o: &Lattice) -> bool {
        o.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, o: &Lattice) -> Lattice {
        let mut gens = self.basis.clone();
        gens.extend(o.basis.iter().cloned());
        Lattice::from_generators(self.dim, &gens)
    }

    /// [self : sub]; `None` when `sub` is not contained or has lower rank.
    pub fn index_of(&self, sub: &Lattice) -> Option<BigInt> {
        if sub.rank() != self.rank() || !self.contains_lattice(sub) {
            return None;
        }
        let c: Vec<Vec<BigInt>> = sub.basis.iter().map(|b| self.coords(b).unwrap()).collect();
        Some(det_int(&c).abs())
    }

    /// (Q-span) ∩ Z^k.
    pub fn saturation(&self) -> Lattice {
        let perp = integer_kernel(&self.basis, self.dim);
        integer_kernel(perp.basis(), self.dim)
    }
}

/// Outcome of comparing a lattice with a candidate super-lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Index {
    Finite(BigInt),
    Infinite,
    NotContained,
}

/// [sup : sub] through the HNF coordinates of `sub` in `sup`.
pub fn hnf_and_index(sub: &Lattice, sup: &Lattice) -> Index {
    if !sup.contains_lattice(sub) {
        return Index::NotContained;
    }
    match sup.index_of(sub) {
        Some(i) => Index::Finite(i),
        None => Index::Infinite,
    }
}

/// Determinant of a square integer matrix (Bareiss).
pub fn det_int(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// The saturated lattice {c ∈ Z^k : M c = 0} for a rational matrix M with k columns.
pub fn integer_kernel(m: &[Vec<BigRational>], k: usize) -> Lattice {
    let a: Vec<Vec<BigInt>> = m.iter().map(|r| clear_denominators(r)).collect();
    let rows_m = a.len();
    // Rows are [column j of A | e_j]; unimodular row operations keep the right block unimodular.
    let aug: Vec<Vec<BigInt>> = (0..k)
        .map(|j| {
            let mut r: Vec<BigInt> = a.iter().map(|row| row[j].clone()).collect();
            r.extend((0..k).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let h = hnf_rows(aug, rows_m + k);
    let gens: Vec<Vec<BigInt>> = h.into_iter().filter(|r| r[..rows_m].iter().all(|x| x.is_zero())).map(|r| r[rows_m..].to_vec()).collect();
    Lattice::from_int_generators(k, &gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::q;

    fn ints(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn hnf_is_canonical() {
        let a = Lattice::from_int_generators(2, &ints(&[&[2, 0], &[0, 3]]));
        let b = Lattice::from_int_generators(2, &ints(&[&[2, 3], &[4, 3], &[0, 6]]));
        assert_eq!(a, b);
        assert_eq!(Lattice::standard(2).index_of(&a), Some(BigInt::from(6)));
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x + 4y = 0 has kernel generated by (2,-1)
        let k = integer_kernel(&[vec![q(2), q(4)]], 2);
        assert_eq!(k.rank(), 1);
        assert!(k.contains_int(&[BigInt::from(-2), BigInt::from(1)]));
        assert_eq!(k.saturation(), k);
    }

    #[test]
    fn det_bareiss() {
        assert_eq!(det_int(&ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]])), BigInt::from(18));
        assert_eq!(det_int(&ints(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
    }
}
