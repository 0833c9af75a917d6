//! Continued fractions of field elements, with exact periodicity for quadratic irrationals.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::FieldScalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfExpansion {
    pub quotients: Vec<BigInt>,
    /// (preperiod length, period) for quadratic irrationals.
    pub periodic: Option<(usize, Vec<BigInt>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BadCertificate {
    /// Eventually periodic, hence bounded partial quotients.
    Certified {
        period: Vec<BigInt>,
    },
    NotApplicable,
}

/// Partial quotients by exact floor and field reciprocal; quadratic inputs also get their period.
pub fn cf_expand(x: &FieldScalar, depth: usize) -> Result<CfExpansion> {
    if x.as_rational().is_some() {
        return Err(Error::RationalInput);
    }
    let periodic = if x.field().degree() == 2 { Some(quadratic_period(x)) } else { None };
    let quotients = match &periodic {
        Some((pre, per)) => {
            let first = quadratic_prefix(x, *pre);
            (0..depth).map(|i| if i < *pre { first[i].clone() } else { per[(i - pre) % per.len()].clone() }).collect()
        }
        None => {
            let mut out = Vec::with_capacity(depth);
            let mut y = x.clone();
            for _ in 0..depth {
                let a = y.floor();
                out.push(a.clone());
                let frac = &y - &FieldScalar::from_rational(y.field(), BigRational::from_integer(a));
                y = frac.inv()?;
            }
            out
        }
    };
    Ok(CfExpansion { quotients, periodic })
}

pub fn is_bad_quadratic(x: &FieldScalar) -> Result<BadCertificate> {
    if x.as_rational().is_some() {
        return Err(Error::RationalInput);
    }
    if x.field().degree() != 2 {
        return Ok(BadCertificate::NotApplicable);
    }
    let (_, period) = quadratic_period(x);
    Ok(BadCertificate::Certified { period })
}

/// x = (P + √D)/Q with Q | D − P².
fn pq_form(x: &FieldScalar) -> (BigInt, BigInt, BigInt) {
    let f = x.field();
    let mp = f.minpoly();
    let (b, c) = (BigRational::from_integer(mp[1].clone()), BigRational::from_integer(mp[0].clone()));
    let disc = &b * &b - BigRational::from_integer(4.into()) * &c;
    // θ = (−b + s√Δ)/2 with s = ±1 fixed by the isolating interval
    let theta_f = f.theta_f64();
    let bf = num_traits::ToPrimitive::to_f64(&b).unwrap();
    let s = if theta_f > -bf / 2.0 { 1 } else { -1 };
    let u = x.coeffs()[0].clone();
    let v = x.coeffs()[1].clone();
    let two = BigRational::from_integer(2.into());
    let rat_part = &two * &u - &v * &b;
    let l = rat_part.denom().lcm(v.denom()).lcm(disc.denom());
    let lq = BigRational::from_integer(l.clone());
    let p = (&rat_part * &lq).to_integer();
    let root_coeff = &v * &lq; // numerator: p + s·root_coeff·√Δ, denominator 2L
    let d = (&root_coeff * &root_coeff * &disc).to_integer();
    let mut q = BigInt::from(2) * &l;
    let mut p = p;
    if (root_coeff.is_negative()) != (s < 0) {
        p = -p;
        q = -q;
    }
    let mut d = d;
    if !(&d - &p * &p).is_multiple_of(&q) {
        let aq = q.abs();
        p *= &aq;
        d = d * &aq * &aq;
        q *= &aq;
    }
    (p, q, d)
}

fn step(p: &BigInt, q: &BigInt, d: &BigInt, r: &BigInt) -> (BigInt, BigInt, BigInt) {
    let a = if q.is_positive() { (p + r).div_floor(q) } else { (-p - r - BigInt::one()).div_floor(&-q) };
    let p2 = &a * q - p;
    let q2 = (d - &p2 * &p2) / q;
    (a, p2, q2)
}

fn quadratic_prefix(x: &FieldScalar, n: usize) -> Vec<BigInt> {
    let (mut p, mut q, d) = pq_form(x);
    let r = d.sqrt();
    let mut out = Vec::new();
    for _ in 0..n {
        let (a, p2, q2) = step(&p, &q, &d, &r);
        out.push(a);
        p = p2;
        q = q2;
    }
    out
}

fn quadratic_period(x: &FieldScalar) -> (usize, Vec<BigInt>) {
    let (mut p, mut q, d) = pq_form(x);
    let r = d.sqrt();
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut quotients = Vec::new();
    loop {
        if let Some(&i) = seen.get(&(p.clone(), q.clone())) {
            return (i, quotients[i..].to_vec());
        }
        seen.insert((p.clone(), q.clone()), quotients.len());
        let (a, p2, q2) = step(&p, &q, &d, &r);
        quotients.push(a);
        p = p2;
        q = q2;
        debug_assert!(!q.is_zero());
    }
}

/// Convergent denominators q_0, q_1, … of [a_0; a_1, …].
pub fn convergent_denominators(a: &[BigInt]) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::new();
    for (i, ai) in a.iter().enumerate() {
        let q = match i {
            0 => BigInt::one(),
            1 => ai.clone(),
            _ => ai * &out[i - 1] + &out[i - 2],
        };
        out.push(q);
    }
    out
}

/// [0; 2, 1, 4, 8, 12, 16, …] with a_i = 4(i − 2) for i ≥ 3: even denominators sit at odd indices, each ≡ 2 mod 4.
pub fn mod4_example_quotients(n: usize) -> Vec<BigInt> {
    (0..n)
        .map(|i| match i {
            0 => BigInt::zero(),
            1 => BigInt::from(2),
            2 => BigInt::one(),
            _ => BigInt::from(4 * (i as i64 - 2)),
        })
        .collect()
}
