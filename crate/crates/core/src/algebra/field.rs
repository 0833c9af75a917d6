//! Real number fields Q(θ) and their elements.
//!
//! A field is given by a monic integer minimal polynomial and a rational
//! interval isolating the real embedding of θ. Elements are stored in the
//! power basis; signs are decided by interval refinement, never by floats.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{self, Poly};
use crate::error::{Error, Result};

/// Bits of precision kept for the cached enclosure of θ.
const BASE_BITS: u32 = 320;
/// Scale of the cached fixed-point powers used for fast approximation.
pub(crate) const FIX_BITS: u32 = 256;

#[derive(Clone, Debug)]
struct Interval {
    lo: BigRational,
    hi: BigRational,
}

impl Interval {
    fn point(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for x in &c[1..] {
            if *x < lo {
                lo = x.clone();
            }
            if *x > hi {
                hi = x.clone();
            }
        }
        Interval { lo, hi }
    }

    fn scale(&self, c: &BigRational) -> Interval {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }
}

struct FieldData {
    minpoly_int: Vec<BigInt>,
    minpoly: Poly,
    lo: BigRational,
    hi: BigRational,
    /// Enclosures of θ^t, t < g, at `BASE_BITS` precision.
    powers: Vec<Interval>,
    /// round(θ^t * 2^FIX_BITS).
    fixed: Vec<BigInt>,
    theta_f64: f64,
}

/// A real number field Q(θ) with a chosen real embedding.
#[derive(Clone)]
pub struct NumberField {
    data: Arc<FieldData>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({:?}, θ≈{})", self.data.minpoly_int, self.data.theta_f64)
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.data, &other.data) {
            return true;
        }
        if self.degree() == 1 && other.degree() == 1 {
            return true;
        }
        self.data.minpoly_int == other.data.minpoly_int && self.data.lo <= other.data.hi && other.data.lo <= self.data.hi
    }
}
impl Eq for NumberField {}

fn bisect(p: &Poly, lo: &mut BigRational, hi: &mut BigRational, bits: u32) {
    let width = BigRational::new(BigInt::one(), BigInt::one() << bits);
    let sign_lo = poly::eval(p, lo).signum();
    while &*hi - &*lo > width {
        let mid = (&*lo + &*hi) / BigRational::from_integer(2.into());
        let v = poly::eval(p, &mid);
        if v.is_zero() {
            *lo = mid.clone();
            *hi = mid;
            return;
        }
        if v.signum() == sign_lo {
            *lo = mid;
        } else {
            *hi = mid;
        }
    }
}

/// Rounds to a dyadic grid so cached powers stay small.
fn dyadic_outward(lo: &BigRational, hi: &BigRational, bits: u32) -> (BigRational, BigRational) {
    let scale = BigInt::one() << bits;
    let l = (lo * BigRational::from_integer(scale.clone())).floor().to_integer();
    let h = (hi * BigRational::from_integer(scale.clone())).ceil().to_integer();
    (BigRational::new(l, scale.clone()), BigRational::new(h, scale))
}

fn is_irreducible(c: &[BigInt]) -> Result<()> {
    // Rational roots of a monic integer polynomial are integer divisors of c0.
    let g = c.len() - 1;
    if g == 1 {
        return Ok(());
    }
    let p = poly::from_ints(c);
    let c0 = c[0].abs();
    if c0.is_zero() {
        return Err(Error::InvalidField("minimal polynomial has root 0".into()));
    }
    let divisors = small_divisors(&c0)?;
    for d in &divisors {
        for s in [d.clone(), -d.clone()] {
            if poly::eval(&p, &BigRational::from_integer(s)).is_zero() {
                return Err(Error::InvalidField("minimal polynomial has a rational root".into()));
            }
        }
    }
    if g == 4 {
        // x^4+a x^3+b x^2+c x+d = (x^2+p x+q)(x^2+r x+s)
        let (d, cc, b, a) = (&c[0], &c[1], &c[2], &c[3]);
        for q in divisors.iter().flat_map(|q| [q.clone(), -q.clone()]) {
            let s = d / &q;
            let pr = b - &q - &s;
            // p, r are integer roots of t^2 - a t + pr
            let disc = a * a - BigInt::from(4) * &pr;
            if disc.is_negative() {
                continue;
            }
            let r0 = disc.sqrt();
            if &r0 * &r0 != disc || (a + &r0).is_odd() {
                continue;
            }
            let p1: BigInt = (a + &r0) / 2;
            let r1 = a - &p1;
            for (pp, rr) in [(p1.clone(), r1.clone()), (r1, p1)] {
                if &pp * &s + &q * &rr == *cc {
                    return Err(Error::InvalidField("minimal polynomial splits into quadratics".into()));
                }
            }
        }
    }
    Ok(())
}

fn small_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let v = n.to_u64().filter(|v| *v <= 1_000_000_000_000).ok_or_else(|| Error::InvalidField("constant term too large for irreducibility check".into()))?;
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= v {
        if v % i == 0 {
            out.push(BigInt::from(i));
            if i * i != v {
                out.push(BigInt::from(v / i));
            }
        }
        i += 1;
    }
    Ok(out)
}

impl NumberField {
    /// Builds Q(θ) from a monic integer polynomial (lowest degree first) and an
    /// interval `(lo, hi]` containing exactly one real root.
    ///
    /// Irreducibility is checked fully up to degree 4; above that only the
    /// absence of rational roots is checked.
    pub fn new(minpoly: Vec<BigInt>, lo: BigRational, hi: BigRational) -> Result<Self> {
        if minpoly.len() < 2 {
            return Err(Error::InvalidField("degree must be at least 1".into()));
        }
        if !minpoly.last().unwrap().is_one() {
            return Err(Error::InvalidField("minimal polynomial must be monic".into()));
        }
        if lo >= hi {
            return Err(Error::InvalidField("empty isolating interval".into()));
        }
        is_irreducible(&minpoly)?;
        let p = poly::from_ints(&minpoly);
        if poly::count_roots(&p, &lo, &hi) != 1 {
            return Err(Error::InvalidField("interval does not isolate exactly one root".into()));
        }
        let (mut l, mut h) = (lo.clone(), hi.clone());
        if minpoly.len() == 2 {
            let r = BigRational::from_integer(-minpoly[0].clone());
            l = r.clone();
            h = r;
        } else {
            // The root lies in (lo, hi]; hi itself is irrational-free so strict.
            bisect(&p, &mut l, &mut h, BASE_BITS + 8);
            let (dl, dh) = dyadic_outward(&l, &h, BASE_BITS + 4);
            l = dl;
            h = dh;
        }
        let g = minpoly.len() - 1;
        let theta = Interval { lo: l.clone(), hi: h.clone() };
        let mut powers = vec![Interval::point(BigRational::one())];
        for t in 1..g {
            let next = powers[t - 1].mul(&theta);
            powers.push(next);
        }
        let scale = BigRational::from_integer(BigInt::one() << FIX_BITS);
        let fixed = powers.iter().map(|iv| (((&iv.lo + &iv.hi) / BigRational::from_integer(2.into())) * &scale).round().to_integer()).collect();
        let theta_f64 = ((&l + &h) / BigRational::from_integer(2.into())).to_f64().unwrap_or(f64::NAN);
        Ok(NumberField { data: Arc::new(FieldData { minpoly_int: minpoly, minpoly: p, lo, hi, powers, fixed, theta_f64 }) })
    }

    /// The field Q itself.
    pub fn rationals() -> Self {
        NumberField::new(vec![BigInt::zero(), BigInt::one()], BigRational::from_integer((-1).into()), BigRational::from_integer(1.into()))
            .expect("Q is a valid field")
    }

    /// Q(√d) with θ the positive root of x² − d.
    pub fn quadratic(d: i64) -> Result<Self> {
        if d <= 0 {
            return Err(Error::InvalidField("need d > 0".into()));
        }
        let hi = BigRational::from_integer((d + 1).into());
        NumberField::new(vec![(-d).into(), 0.into(), 1.into()], BigRational::zero(), hi)
    }

    /// Q(φ), φ = (1+√5)/2 the positive root of x² − x − 1.
    pub fn golden() -> Self {
        NumberField::new(vec![(-1).into(), (-1).into(), 1.into()], BigRational::from_integer(1.into()), BigRational::from_integer(2.into()))
            .expect("golden field")
    }

    pub fn degree(&self) -> usize {
        self.data.minpoly_int.len() - 1
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.data.minpoly_int
    }

    /// The isolating interval as supplied.
    pub fn root_interval(&self) -> (&BigRational, &BigRational) {
        (&self.data.lo, &self.data.hi)
    }

    pub fn theta_f64(&self) -> f64 {
        self.data.theta_f64
    }

    pub(crate) fn fixed_powers(&self) -> &[BigInt] {
        &self.data.fixed
    }

    pub fn zero(&self) -> FieldScalar {
        FieldScalar::from_rational(self, BigRational::zero())
    }

    pub fn one(&self) -> FieldScalar {
        FieldScalar::from_rational(self, BigRational::one())
    }

    pub fn int(&self, n: i64) -> FieldScalar {
        FieldScalar::from_rational(self, BigRational::from_integer(n.into()))
    }

    pub fn rat(&self, n: i64, d: i64) -> FieldScalar {
        FieldScalar::from_rational(self, BigRational::new(n.into(), d.into()))
    }

    /// The generator θ.
    pub fn theta(&self) -> FieldScalar {
        let g = self.degree();
        if g == 1 {
            return FieldScalar::from_rational(self, BigRational::from_integer(-self.data.minpoly_int[0].clone()));
        }
        let mut c = vec![BigRational::zero(); g];
        c[1] = BigRational::one();
        FieldScalar { field: self.clone(), coeffs: c }
    }

    /// Element a0 + a1 θ + ... from small integers.
    pub fn elem(&self, coeffs: &[i64]) -> FieldScalar {
        let c: Vec<BigRational> = coeffs.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        FieldScalar::new(self, c).expect("coefficient count within degree")
    }

    fn reduce(&self, mut p: Poly) -> Vec<BigRational> {
        let g = self.degree();
        let m = &self.data.minpoly_int;
        while p.len() > g {
            let top = p.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let base = p.len() - g;
            for (j, mj) in m.iter().take(g).enumerate() {
                p[base + j] -= &top * BigRational::from_integer(mj.clone());
            }
        }
        p.resize(g, BigRational::zero());
        p
    }

    /// Enclosure of θ^t (t < g) at `bits` precision.
    fn powers_at(&self, bits: u32) -> Vec<Interval> {
        if bits <= BASE_BITS || self.degree() == 1 {
            return self.data.powers.clone();
        }
        let (mut l, mut h) = (self.data.powers[1].lo.clone(), self.data.powers[1].hi.clone());
        bisect(&self.data.minpoly, &mut l, &mut h, bits + 8);
        let (l, h) = dyadic_outward(&l, &h, bits + 4);
        let theta = Interval { lo: l, hi: h };
        let mut out = vec![Interval::point(BigRational::one())];
        for t in 1..self.degree() {
            let next = out[t - 1].mul(&theta);
            out.push(next);
        }
        out
    }
}

/// An element of a number field, in power-basis coordinates.
#[derive(Clone)]
pub struct FieldScalar {
    field: NumberField,
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (t, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match t {
                0 => format!("{}", c),
                1 => format!("{}*t", c),
                _ => format!("{}*t^{}", c, t),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl PartialEq for FieldScalar {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}
impl Eq for FieldScalar {}

impl Hash for FieldScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for FieldScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldScalar {
    /// Panics when the operands live in different fields.
    fn cmp(&self, other: &Self) -> Ordering {
        exact_compare(self, other).expect("comparison across number fields")
    }
}

/// Exact comparison of two field elements under the real embedding.
pub fn exact_compare(a: &FieldScalar, b: &FieldScalar) -> Result<Ordering> {
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    Ok((a - b).sign())
}

impl FieldScalar {
    pub fn new(field: &NumberField, mut coeffs: Vec<BigRational>) -> Result<Self> {
        let g = field.degree();
        if coeffs.len() > g {
            return Err(Error::Shape(format!("{} coefficients for degree {}", coeffs.len(), g)));
        }
        coeffs.resize(g, BigRational::zero());
        Ok(FieldScalar { field: field.clone(), coeffs })
    }

    pub fn from_rational(field: &NumberField, r: BigRational) -> Self {
        let mut coeffs = vec![BigRational::zero(); field.degree()];
        coeffs[0] = r;
        FieldScalar { field: field.clone(), coeffs }
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check(&self, o: &FieldScalar) {
        assert!(Arc::ptr_eq(&self.field.data, &o.field.data) || self.field == o.field, "arithmetic across number fields");
    }

    fn enclosure(&self, bits: u32) -> Interval {
        let pw = self.field.powers_at(bits);
        let mut acc = Interval::point(BigRational::zero());
        for (c, p) in self.coeffs.iter().zip(pw.iter()) {
            if !c.is_zero() {
                acc = acc.add(&p.scale(c));
            }
        }
        acc
    }

    /// Fast sign attempt through the fixed-point powers. `None` when inconclusive.
    fn quick_sign(&self) -> Option<Ordering> {
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut sum = BigInt::zero();
        let mut bound = BigInt::from(2);
        for (c, f) in self.coeffs.iter().zip(self.field.fixed_powers()) {
            let n = c.numer() * (&den / c.denom());
            sum += &n * f;
            bound += n.abs();
        }
        if sum.abs() > bound {
            Some(if sum.is_positive() { Ordering::Greater } else { Ordering::Less })
        } else {
            None
        }
    }

    /// Sign under the real embedding.
    pub fn sign(&self) -> Ordering {
        if let Some(r) = self.as_rational() {
            return r.cmp(&BigRational::zero());
        }
        if let Some(s) = self.quick_sign() {
            return s;
        }
        let mut bits = BASE_BITS;
        loop {
            let e = self.enclosure(bits);
            if e.lo.is_positive() {
                return Ordering::Greater;
            }
            if e.hi.is_negative() {
                return Ordering::Less;
            }
            // Nonzero irrational element: refinement terminates.
            bits *= 2;
        }
    }

    pub fn signum(&self) -> i32 {
        match self.sign() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> FieldScalar {
        if self.sign() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    /// Nearest double to the embedded value.
    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.as_rational() {
            return r.to_f64().unwrap_or(f64::NAN);
        }
        // fixed-point sum first; its error is at most `bound` units
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut sum = BigInt::zero();
        let mut bound = BigInt::from(2);
        for (c, f) in self.coeffs.iter().zip(self.field.fixed_powers()) {
            let n = c.numer() * (&den / c.denom());
            sum += &n * f;
            bound += n.abs();
        }
        if sum.abs() > (bound << 64u32) {
            return BigRational::new(sum, den << FIX_BITS).to_f64().unwrap_or(f64::NAN);
        }
        let mut bits = BASE_BITS;
        loop {
            let e = self.enclosure(bits);
            let mid = (&e.lo + &e.hi) / BigRational::from_integer(2.into());
            let width = &e.hi - &e.lo;
            let tol = mid.abs() * BigRational::new(BigInt::one(), BigInt::one() << 60u32);
            if width <= tol {
                return mid.to_f64().unwrap_or(f64::NAN);
            }
            bits *= 2;
        }
    }

    /// Exact floor under the real embedding.
    pub fn floor(&self) -> BigInt {
        if let Some(r) = self.as_rational() {
            return r.floor().to_integer();
        }
        let mut bits = BASE_BITS;
        loop {
            let e = self.enclosure(bits);
            let a = e.lo.floor().to_integer();
            let b = e.hi.floor().to_integer();
            if a == b {
                return a;
            }
            bits *= 2;
        }
    }

    pub fn inv(&self) -> Result<FieldScalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(FieldScalar::from_rational(&self.field, r.recip()));
        }
        let mut a = self.coeffs.clone();
        poly::trim(&mut a);
        let (g, s) = poly::ext_gcd_mod(&a, &self.field.data.minpoly);
        if g.len() != 1 {
            return Err(Error::InvalidField("minimal polynomial is reducible".into()));
        }
        Ok(FieldScalar { field: self.field.clone(), coeffs: self.field.reduce(s) })
    }

    pub fn checked_div(&self, o: &FieldScalar) -> Result<FieldScalar> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: u32) -> FieldScalar {
        let mut acc = self.field.one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, r: &BigRational) -> FieldScalar {
        FieldScalar { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn scale_int(&self, n: &BigInt) -> FieldScalar {
        let r = BigRational::from_integer(n.clone());
        self.scale(&r)
    }
}

impl<'a> Add<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn add(self, o: &FieldScalar) -> FieldScalar {
        self.check(o);
        FieldScalar { field: self.field.clone(), coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn sub(self, o: &FieldScalar) -> FieldScalar {
        self.check(o);
        FieldScalar { field: self.field.clone(), coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl<'a> Mul<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn mul(self, o: &FieldScalar) -> FieldScalar {
        self.check(o);
        let g = self.coeffs.len();
        let mut p = vec![BigRational::zero(); 2 * g - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    p[i + j] += a * b;
                }
            }
        }
        FieldScalar { field: self.field.clone(), coeffs: self.field.reduce(p) }
    }
}

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        FieldScalar { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        -&self
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $m(self, o: FieldScalar) -> FieldScalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $m(self, o: &FieldScalar) -> FieldScalar {
                (&self).$m(o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

/// Parses "p", "-p/q" into a rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Canonical string form of a rational ("p" or "p/q").
pub fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}


impl FieldScalar {
    /// Decimal string with `digits` fractional digits, rounded half to even.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let y = self.scale(&BigRational::from_integer(scale.clone()));
        let n = y.floor();
        let frac = &y - &FieldScalar::from_rational(&self.field, BigRational::from_integer(n.clone()));
        let half = FieldScalar::from_rational(&self.field, BigRational::new(1.into(), 2.into()));
        let n = match frac.cmp(&half) {
            Ordering::Greater => n + 1,
            Ordering::Less => n,
            Ordering::Equal => {
                if n.is_even() {
                    n
                } else {
                    n + 1
                }
            }
        };
        format_fixed(&n, digits)
    }
}

/// Formats the integer `n / 10^digits`.
pub fn format_fixed(n: &BigInt, digits: u32) -> String {
    let neg = n.is_negative();
    let s = n.abs().to_string();
    let d = digits as usize;
    let body = if d == 0 {
        s
    } else if s.len() > d {
        format!("{}.{}", &s[..s.len() - d], &s[s.len() - d..])
    } else {
        format!("0.{}{}", "0".repeat(d - s.len()), s)
    };
    if neg && n.abs() > BigInt::zero() {
        format!("-{body}")
    } else {
        body
    }
}
