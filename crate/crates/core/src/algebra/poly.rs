//! Dense univariate polynomials over Q, lowest degree first.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) type Poly = Vec<BigRational>;

pub(crate) fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn from_ints(c: &[BigInt]) -> Poly {
    let mut p: Poly = c.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    trim(&mut p);
    p
}

pub(crate) fn degree(p: &Poly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub(crate) fn sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
        out.push(x - y);
    }
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; panics on a zero divisor.
pub(crate) fn divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    let mut rem = a.clone();
    trim(&mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = &rem[dr] / &lead;
        let shift = dr - db;
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] -= &c * bj;
        }
        quot[shift] = c;
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

pub(crate) fn derivative(p: &Poly) -> Poly {
    let mut out: Poly = p.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect();
    trim(&mut out);
    out
}

pub(crate) fn eval(p: &Poly, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Extended Euclid: returns (g, s) with s*a = g (mod m), g monic.
pub(crate) fn ext_gcd_mod(a: &Poly, m: &Poly) -> (Poly, Poly) {
    let (mut r0, mut r1) = (m.clone(), a.clone());
    let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![BigRational::one()]);
    trim(&mut r1);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let s2 = sub(&s0, &mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if let Some(d) = degree(&r0) {
        let lead = r0[d].clone();
        for c in r0.iter_mut() {
            *c /= &lead;
        }
        for c in s0.iter_mut() {
            *c /= &lead;
        }
    }
    (r0, s0)
}

fn sign_changes(seq: &[Poly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in seq {
        let v = eval(p, x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots of a squarefree `p` in the half-open interval (lo, hi].
pub(crate) fn count_roots(p: &Poly, lo: &BigRational, hi: &BigRational) -> usize {
    let mut seq = vec![p.clone(), derivative(p)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let (_, r) = divrem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    sign_changes(&seq, lo).saturating_sub(sign_changes(&seq, hi))
}
