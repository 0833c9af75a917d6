//! Affine forms m ↦ Σ m_j a_j − c over a number field, evaluated at integer points
//! with an f64 filter and an exact fallback.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{FieldScalar, NumberField};

#[derive(Clone, Debug)]
pub struct LinForm {
    field: NumberField,
    approx: Vec<f64>,
    approx_off: f64,
    den: BigInt,
    num: Vec<Vec<BigInt>>,
    off: Vec<BigInt>,
}

impl LinForm {
    pub fn new(coeffs: &[FieldScalar], offset: &FieldScalar) -> LinForm {
        let field = offset.field().clone();
        let mut den = BigInt::one();
        for c in coeffs.iter().chain(std::iter::once(offset)) {
            for r in c.coeffs() {
                den = den.lcm(r.denom());
            }
        }
        let g = field.degree();
        let ints = |c: &FieldScalar| -> Vec<BigInt> {
            let mut v: Vec<BigInt> = c.coeffs().iter().map(|r| (r * BigRational::from_integer(den.clone())).to_integer()).collect();
            v.resize(g, BigInt::zero());
            v
        };
        LinForm {
            approx: coeffs.iter().map(|c| c.to_f64()).collect(),
            approx_off: offset.to_f64(),
            num: coeffs.iter().map(ints).collect(),
            off: ints(offset),
            den,
            field,
        }
    }

    pub fn approx_at(&self, m: &[i64]) -> f64 {
        self.approx.iter().zip(m).map(|(a, &x)| a * x as f64).sum::<f64>() - self.approx_off
    }

    fn error_bound(&self, m: &[i64]) -> f64 {
        let mag: f64 = self.approx.iter().zip(m).map(|(a, &x)| (a * x as f64).abs()).sum::<f64>() + self.approx_off.abs();
        mag * 1e-12 + 1e-300
    }

    pub fn value_at(&self, m: &[i64]) -> FieldScalar {
        let mut c = self.off.iter().map(|x| -x).collect::<Vec<BigInt>>();
        for (row, &x) in self.num.iter().zip(m) {
            if x != 0 {
                let x = BigInt::from(x);
                for (ct, w) in c.iter_mut().zip(row) {
                    *ct += w * &x;
                }
            }
        }
        let coeffs = c.into_iter().map(|t| BigRational::new(t, self.den.clone())).collect();
        FieldScalar::new(&self.field, coeffs).expect("degree matches")
    }

    /// Exact sign of the form at m.
    pub fn sign_at(&self, m: &[i64]) -> Ordering {
        let v = self.approx_at(m);
        if v.abs() > self.error_bound(m) {
            return if v > 0.0 { Ordering::Greater } else { Ordering::Less };
        }
        self.value_at(m).sign()
    }

    /// True iff the form vanishes exactly at m.
    pub fn is_zero_at(&self, m: &[i64]) -> bool {
        let v = self.approx_at(m);
        if v.abs() > self.error_bound(m) {
            return false;
        }
        self.value_at(m).is_zero()
    }

    /// Sign of (form − r) for a rational r.
    pub fn cmp_rational(&self, m: &[i64], r: &BigRational) -> Ordering {
        let rf = rat_f64(r);
        let v = self.approx_at(m) - rf;
        if rf.is_finite() && v.abs() > self.error_bound(m) + rf.abs() * 1e-12 {
            return if v > 0.0 { Ordering::Greater } else { Ordering::Less };
        }
        (self.value_at(m) - FieldScalar::from_rational(&self.field, r.clone())).sign()
    }

    pub fn is_constant_zero(&self) -> bool {
        self.num.iter().all(|r| r.iter().all(|x| x.is_zero())) && self.off.iter().all(|x| x.is_zero())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.approx.iter().fold(0.0f64, |a, b| a.max(b.abs()))
    }
}

/// f64 value of a rational.
pub fn rat_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| if r.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filtered_sign_matches_exact() {
        let k = NumberField::golden();
        // m0 − m1·φ at Fibonacci pairs: tiny alternating values
        let f = LinForm::new(&[k.one(), -k.theta()], &k.zero());
        let (mut a, mut b) = (1i64, 1i64);
        for _ in 0..40 {
            let s = f.sign_at(&[a, b]);
            assert_eq!(s, f.value_at(&[a, b]).sign());
            assert_ne!(s, Ordering::Equal);
            let c = a + b;
            b = a;
            a = c;
        }
        assert!(f.is_zero_at(&[0, 0]));
    }
}
