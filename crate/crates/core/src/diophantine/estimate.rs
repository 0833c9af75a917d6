//! Empirical Diophantine constants c(R) = min ‖g_< − t‖·η(g)^δ over η(g) ≤ R.
//!
//! Radii are processed shell by shell. Within the shell R_{j−1} < η ≤ R_j only elements
//! with ‖g_< − t‖ ≤ X/R_{j−1}^δ are enumerated; X grows until the shell minimum is
//! certified to lie below it, so every reported minimum is exact over the shell.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::{rat_f64, FieldScalar, LinForm};
use crate::enumerate::enumerate_box;
use crate::error::{Error, Result};
use crate::scheme::Scheme;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eta {
    /// max(‖g_∨‖_∞, ‖g_<‖_∞) of the lift.
    TotalSpace,
    /// max |m_i| over the coordinates in the group basis.
    Coefficient,
}

/// A subgroup of Q^k given by a basis, viewed through the scheme's projections.
#[derive(Clone, Debug)]
pub struct EmbeddedGroup {
    pub basis: Vec<Vec<BigRational>>,
    pub delta: BigRational,
    pub eta: Eta,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateRecord {
    pub radius: u64,
    /// running minimum over η ≤ R
    pub c: f64,
    /// minimum over the shell R_{j−1} < η ≤ R_j
    pub c_shell: f64,
    /// min ‖g_< − t‖ over η ≤ R, times R^δ
    pub dirichlet: f64,
    /// Witness for `c`, in Z^k coordinates (rational for refined lattices).
    pub witness: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiophantineEstimate {
    pub target: Vec<FieldScalar>,
    pub records: Vec<EstimateRecord>,
}

impl DiophantineEstimate {
    pub fn is_nonincreasing(&self) -> bool {
        self.records.windows(2).all(|w| w[1].c <= w[0].c)
    }
}

struct Forms {
    phys: Vec<LinForm>,
    internal: Vec<LinForm>,
    shifted: Vec<LinForm>,
}

#[derive(Clone)]
struct Cand {
    m: Vec<i64>,
    eta: f64,
    dist: f64,
}

fn forms(s: &Scheme, g: &EmbeddedGroup, t: &[FieldScalar]) -> Forms {
    let pv: Vec<Vec<FieldScalar>> = g.basis.iter().map(|b| s.proj_physical.mul_rat(b)).collect();
    let pi: Vec<Vec<FieldScalar>> = g.basis.iter().map(|b| s.proj_internal.mul_rat(b)).collect();
    let zero = s.field.zero();
    let col = |v: &Vec<Vec<FieldScalar>>, i: usize| v.iter().map(|x| x[i].clone()).collect::<Vec<_>>();
    Forms {
        phys: (0..s.d).map(|i| LinForm::new(&col(&pv, i), &zero)).collect(),
        internal: (0..s.n).map(|i| LinForm::new(&col(&pi, i), &zero)).collect(),
        shifted: (0..s.n).map(|i| LinForm::new(&col(&pi, i), &t[i])).collect(),
    }
}

fn exact_abs_f64(x: FieldScalar) -> f64 {
    x.to_f64().abs()
}

impl Forms {
    fn eta_approx(&self, eta: Eta, m: &[i64]) -> f64 {
        match eta {
            Eta::Coefficient => m.iter().map(|x| x.unsigned_abs() as f64).fold(0.0, f64::max),
            Eta::TotalSpace => self.phys.iter().chain(&self.internal).map(|f| f.approx_at(m).abs()).fold(0.0, f64::max),
        }
    }
    fn eta_exact(&self, eta: Eta, m: &[i64]) -> f64 {
        match eta {
            Eta::Coefficient => self.eta_approx(eta, m),
            Eta::TotalSpace => self.phys.iter().chain(&self.internal).map(|f| exact_abs_f64(f.value_at(m))).fold(0.0, f64::max),
        }
    }
    /// η ≤ r, decided exactly.
    fn eta_le(&self, eta: Eta, m: &[i64], r: u64) -> bool {
        match eta {
            Eta::Coefficient => m.iter().all(|x| x.unsigned_abs() <= r),
            Eta::TotalSpace => {
                let rq = BigRational::from_integer(BigInt::from(r));
                let nq = -rq.clone();
                self.phys.iter().chain(&self.internal).all(|f| f.cmp_rational(m, &rq) != Ordering::Greater && f.cmp_rational(m, &nq) != Ordering::Less)
            }
        }
    }
    fn dist_approx(&self, m: &[i64]) -> f64 {
        self.shifted.iter().map(|f| f.approx_at(m).abs()).fold(0.0, f64::max)
    }
    fn dist_exact(&self, m: &[i64]) -> f64 {
        self.shifted.iter().map(|f| exact_abs_f64(f.value_at(m))).fold(0.0, f64::max)
    }
    fn hits_target(&self, m: &[i64]) -> bool {
        self.shifted.iter().all(|f| f.is_zero_at(m))
    }
}

/// Candidates with η ≤ r and, when `tau` is finite, ‖g_< − t‖ ≤ τ.
fn candidates(g: &EmbeddedGroup, f: &Forms, t: &[f64], r: u64, tau: f64) -> Vec<Vec<i64>> {
    let rf = r as f64;
    let rank = g.basis.len();
    let mut a: Vec<Vec<f64>> = Vec::new();
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    let coeffs = |lf: &LinForm| -> Vec<f64> {
        (0..rank)
            .map(|i| {
                let mut e = vec![0i64; rank];
                e[i] = 1;
                lf.approx_at(&e) - lf.approx_at(&vec![0; rank])
            })
            .collect()
    };
    match g.eta {
        Eta::Coefficient => {
            for i in 0..rank {
                let mut row = vec![0.0; rank];
                row[i] = 1.0;
                a.push(row);
                lo.push(-rf);
                hi.push(rf);
            }
        }
        Eta::TotalSpace => {
            for p in &f.phys {
                a.push(coeffs(p));
                lo.push(-rf);
                hi.push(rf);
            }
        }
    }
    for (i, q) in f.internal.iter().enumerate() {
        let (mut l, mut h) = if tau.is_finite() { (t[i] - tau, t[i] + tau) } else { (f64::NEG_INFINITY, f64::INFINITY) };
        if g.eta == Eta::TotalSpace {
            l = l.max(-rf);
            h = h.min(rf);
        }
        if l > h {
            return Vec::new();
        }
        if l.is_finite() || h.is_finite() {
            a.push(coeffs(q));
            lo.push(l);
            hi.push(h);
        }
    }
    enumerate_box(&a, &lo, &hi)
}

/// Tabulates c(R) for each target over the schedule.
pub fn dioph_estimate(s: &Scheme, g: &EmbeddedGroup, targets: &[Vec<FieldScalar>], schedule: &[u64]) -> Result<Vec<DiophantineEstimate>> {
    if g.delta <= BigRational::zero() {
        return Err(Error::Parameter("delta must be positive".into()));
    }
    if g.basis.is_empty() || g.basis.iter().any(|b| b.len() != s.k) {
        return Err(Error::Parameter("group basis must be nonempty vectors of length k".into()));
    }
    if schedule.is_empty() || schedule.windows(2).any(|w| w[1] <= w[0]) || schedule[0] == 0 {
        return Err(Error::Parameter("schedule must be positive and increasing".into()));
    }
    targets.iter().map(|t| estimate_one(s, g, t, schedule)).collect()
}

fn estimate_one(s: &Scheme, g: &EmbeddedGroup, t: &[FieldScalar], schedule: &[u64]) -> Result<DiophantineEstimate> {
    let delta = rat_f64(&g.delta);
    let f = forms(s, g, t);
    let tf: Vec<f64> = t.iter().map(|x| x.to_f64()).collect();
    let mut records = Vec::new();
    let mut best: Option<(f64, Vec<i64>)> = None;
    let mut min_dist = f64::INFINITY;
    let mut prev_r = 0u64;
    let mut prev_shell = f64::INFINITY;
    for &r in schedule {
        let mut x = if prev_r == 0 { f64::INFINITY } else { (2.0 * prev_shell).max(min_dist * (prev_r as f64).powf(delta)).max(1e-300) };
        let mut tries = 0;
        let (shell_best, shell_dist) = loop {
            let tau = if x.is_finite() { x / (prev_r as f64).powf(delta) } else { f64::INFINITY };
            let cands: Vec<Cand> = candidates(g, &f, &tf, r, tau)
                .into_iter()
                .filter(|m| f.eta_le(g.eta, m, r) && !(prev_r > 0 && f.eta_le(g.eta, m, prev_r)))
                .map(|m| Cand { eta: f.eta_approx(g.eta, &m), dist: f.dist_approx(&m), m })
                .filter(|c| !(c.dist < 1e-9 * (1.0 + c.eta) && f.hits_target(&c.m)))
                .collect();
            let approx_min = cands.iter().map(|c| c.dist * c.eta.powf(delta)).fold(f64::INFINITY, f64::min);
            let dist_min_approx = cands.iter().map(|c| c.dist).fold(f64::INFINITY, f64::min);
            // exact evaluation for near-minimal candidates
            let mut sb: Option<(f64, Vec<i64>)> = None;
            let mut sd = f64::INFINITY;
            for c in &cands {
                let near_c = c.dist * c.eta.powf(delta) <= approx_min * (1.0 + 1e-6) + 1e-300;
                let near_d = c.dist <= dist_min_approx * (1.0 + 1e-6) + 1e-300;
                if !(near_c || near_d) {
                    continue;
                }
                let d = f.dist_exact(&c.m);
                if near_d {
                    sd = sd.min(d);
                }
                if near_c {
                    let v = d * f.eta_exact(g.eta, &c.m).powf(delta);
                    let better = match &sb {
                        None => true,
                        Some((bv, bm)) => v < *bv || (v == *bv && c.m < *bm),
                    };
                    if better {
                        sb = Some((v, c.m.clone()));
                    }
                }
            }
            match sb {
                Some((v, m)) if !x.is_finite() || v <= x => break (Some((v, m)), sd),
                _ => {
                    tries += 1;
                    if tries > 60 {
                        break (None, sd);
                    }
                    x *= 4.0;
                }
            }
        };
        if let Some((v, m)) = &shell_best {
            let better = match &best {
                None => true,
                Some((bv, bm)) => v < bv || (v == bv && m < bm),
            };
            if better {
                best = Some((*v, m.clone()));
            }
        }
        min_dist = min_dist.min(shell_dist);
        prev_shell = shell_best.as_ref().map(|b| b.0).unwrap_or(prev_shell);
        let (c, wm) = best.clone().ok_or_else(|| Error::SearchExhausted("no group element within the first radius".into()))?;
        let witness = (0..s.k).map(|t| wm.iter().zip(&g.basis).map(|(&a, b)| &b[t] * BigRational::from_integer(a.into())).sum()).collect();
        records.push(EstimateRecord {
            radius: r,
            c,
            c_shell: shell_best.map(|b| b.0).unwrap_or(f64::INFINITY),
            dirichlet: min_dist * (r as f64).powf(delta),
            witness,
        });
        prev_r = r;
    }
    Ok(DiophantineEstimate { target: t.to_vec(), records })
}

/// Default schedule 2^4, …, 2^16.
pub fn default_schedule() -> Vec<u64> {
    (4..=16).map(|j| 1u64 << j).collect()
}

/// Parses "2^a..2^b" or a comma list of integers.
pub fn parse_schedule(s: &str) -> Result<Vec<u64>> {
    let bad = || Error::Parameter(format!("bad schedule {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let exp = |x: &str| x.trim().strip_prefix("2^").and_then(|e| e.parse::<u32>().ok()).ok_or_else(bad);
        let (a, b) = (exp(a)?, exp(b)?);
        if a > b || b > 40 {
            return Err(bad());
        }
        return Ok((a..=b).map(|j| 1u64 << j).collect());
    }
    let v: Vec<u64> = s.split(',').map(|x| x.trim().parse::<u64>().map_err(|_| bad())).collect::<Result<_>>()?;
    if v.is_empty() || v[0] == 0 || v.windows(2).any(|w| w[1] <= w[0]) {
        return Err(bad());
    }
    Ok(v)
}

/// Verdict from a c(R) column: failing iff c(R_max) < c(R_min)/32 and the column is
/// nonincreasing over at least its last four points.
pub fn empirical_verdict(e: &DiophantineEstimate) -> Verdict {
    let c: Vec<f64> = e.records.iter().map(|r| r.c).collect();
    if c.len() >= 4 && c[c.len() - 1] < c[0] / 32.0 && c[c.len() - 4..].windows(2).all(|w| w[1] <= w[0]) {
        Verdict::EmpiricallyFailing
    } else {
        Verdict::EmpiricallyConsistent
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    EmpiricallyFailing,
    EmpiricallyConsistent,
    Certified,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::EmpiricallyConsistent => "empirically-consistent",
            Verdict::EmpiricallyFailing => "empirically-failing",
        }
    }
}
