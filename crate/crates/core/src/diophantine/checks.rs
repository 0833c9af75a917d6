//! Scheme-level Diophantine checks: D, D_F and the flag-group condition.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::cf::{is_bad_quadratic, BadCertificate};
use super::estimate::{dioph_estimate, empirical_verdict, DiophantineEstimate, EmbeddedGroup, Eta, Verdict};
use crate::algebra::{FieldScalar, Lattice};
use crate::complexity::{factor_flag_group, Analysis};
use crate::error::{Error, Result};
use crate::geometry::cmp_vec;

#[derive(Clone, Debug)]
pub struct FactorCheck {
    pub factor: usize,
    pub delta: BigRational,
    pub certificate: Option<Vec<BigInt>>,
    pub estimates: Vec<DiophantineEstimate>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct DReport {
    pub factors: Vec<FactorCheck>,
    /// Period certificates for rank-2 stabilisers (quadratic fields), per supporting subspace.
    pub stabiliser_certificates: Vec<Option<Vec<BigInt>>>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct DfReport {
    pub scale: u32,
    pub factors: Vec<FactorCheck>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct FlagRun {
    pub flags: (usize, usize),
    pub factor: usize,
    pub estimate: DiophantineEstimate,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct FlagReport {
    pub runs: Vec<FlagRun>,
    /// Pairs skipped because of the run limit.
    pub skipped: usize,
    pub verdict: Verdict,
}

fn require_c(a: &Analysis) -> Result<()> {
    if !a.c {
        return Err(Error::Parameter("Diophantine checks need property C".into()));
    }
    Ok(())
}

/// Ratio of the internal images of a rank-2 group, read along one nonzero coordinate.
fn ratio_certificate(a: &Analysis, l: &Lattice) -> Option<Vec<BigInt>> {
    if l.rank() != 2 || a.scheme.field.degree() != 2 {
        return None;
    }
    let g1 = a.scheme.proj_internal.mul_rat(&l.basis()[0]);
    let g2 = a.scheme.proj_internal.mul_rat(&l.basis()[1]);
    let i = (0..g2.len()).find(|&i| !g2[i].is_zero())?;
    let x = g1[i].checked_div(&g2[i]).ok()?;
    // collinearity: both images on one line
    if (0..g1.len()).any(|j| &g1[j] * &g2[i] != &g2[j] * &g1[i]) {
        return None;
    }
    match is_bad_quadratic(&x) {
        Ok(BadCertificate::Certified { period }) => Some(period),
        _ => None,
    }
}

fn worst(v: impl Iterator<Item = Verdict>) -> Verdict {
    v.min().unwrap_or(Verdict::EmpiricallyConsistent)
}

fn scaled(l: &Lattice, n: u32) -> Vec<Vec<BigRational>> {
    let q = BigRational::new(1.into(), n.into());
    l.basis().iter().map(|b| b.iter().map(|x| x * &q).collect()).collect()
}

/// Property D per factor: certificate for 2-to-1 factors over quadratic fields, estimator otherwise.
pub fn check_d(a: &Analysis, schedule: &[u64]) -> Result<DReport> {
    require_c(a)?;
    let s = &a.scheme;
    let mut factors = Vec::new();
    for (i, f) in a.decomposition.factors.iter().enumerate() {
        let certificate = if f.n == 1 && f.k == 2 { ratio_certificate(a, &f.lattice) } else { None };
        let g = EmbeddedGroup { basis: f.lattice.basis().to_vec(), delta: f.delta.clone(), eta: Eta::TotalSpace };
        let estimates = dioph_estimate(s, &g, &[vec![s.field.zero(); s.n]], schedule)?;
        let verdict = if certificate.is_some() { Verdict::Certified } else { worst(estimates.iter().map(empirical_verdict)) };
        factors.push(FactorCheck { factor: i, delta: f.delta.clone(), certificate, estimates, verdict });
    }
    let stabiliser_certificates = a.stabilisers.iter().map(|st| ratio_certificate(a, &st.lattice)).collect();
    Ok(DReport { verdict: worst(factors.iter().map(|f| f.verdict)), factors, stabiliser_certificates })
}

/// D_F per factor on (1/N)Γ_i, targets the components F_i (at most `max_targets` each).
pub fn check_df(a: &Analysis, schedule: &[u64], scale: u32, max_targets: Option<usize>) -> Result<DfReport> {
    require_c(a)?;
    if scale == 0 {
        return Err(Error::Parameter("scale N must be positive".into()));
    }
    let s = &a.scheme;
    let mut factors = Vec::new();
    for (i, f) in a.decomposition.factors.iter().enumerate() {
        let mut targets: Vec<Vec<FieldScalar>> = a.f_set.iter().map(|x| a.decomposition.split(x)[i].clone()).collect();
        targets.sort_by(|x, y| cmp_vec(x, y));
        targets.dedup();
        if let Some(m) = max_targets {
            targets.truncate(m);
        }
        let g = EmbeddedGroup { basis: scaled(&f.lattice, scale), delta: f.delta.clone(), eta: Eta::TotalSpace };
        let estimates = dioph_estimate(s, &g, &targets, schedule)?;
        let verdict = worst(estimates.iter().map(empirical_verdict));
        factors.push(FactorCheck { factor: i, delta: f.delta.clone(), certificate: None, estimates, verdict });
    }
    Ok(DfReport { scale, verdict: worst(factors.iter().map(|f| f.verdict)), factors })
}

/// Γ_i[f, f′]_< against v(f′)_i − v(f)_i for flag pairs in canonical order, up to `max_runs`.
pub fn check_flag_condition(a: &Analysis, schedule: &[u64], max_runs: Option<usize>) -> Result<FlagReport> {
    require_c(a)?;
    let s = &a.scheme;
    let mut runs = Vec::new();
    let mut seen: Vec<(Lattice, Vec<FieldScalar>)> = Vec::new();
    let mut skipped = 0;
    for (fi, f) in a.flags.iter().enumerate() {
        for (gi, g) in a.flags.iter().enumerate() {
            let (Some(la), Some(lb)) = (&a.flag_groups[fi].lattice, &a.flag_groups[gi].lattice) else {
                return Err(Error::Parameter("flag group of infinite index".into()));
            };
            let diff: Vec<FieldScalar> = g.vertex.iter().zip(&f.vertex).map(|(x, y)| x - y).collect();
            let parts = a.decomposition.split(&diff);
            for (i, fac) in a.decomposition.factors.iter().enumerate() {
                let lat = factor_flag_group(s, &a.support, &a.decomposition, i, la, lb);
                let key = (lat.clone(), parts[i].clone());
                if seen.contains(&key) {
                    continue;
                }
                if max_runs.is_some_and(|m| runs.len() >= m) {
                    skipped += 1;
                    continue;
                }
                seen.push(key);
                let grp = EmbeddedGroup { basis: lat.basis().to_vec(), delta: fac.delta.clone(), eta: Eta::TotalSpace };
                let est = dioph_estimate(s, &grp, &[parts[i].clone()], schedule)?.remove(0);
                let verdict = empirical_verdict(&est);
                runs.push(FlagRun { flags: (fi, gi), factor: i, estimate: est, verdict });
            }
        }
    }
    Ok(FlagReport { verdict: worst(runs.iter().map(|r| r.verdict)), runs, skipped })
}

/// CSV rows "R,target_index,c_R,c_shell,dirichlet,w1,…,wk" (witness in lattice coordinates).
pub fn estimates_csv(estimates: &[DiophantineEstimate], precision: usize) -> String {
    let k = estimates.iter().flat_map(|e| e.records.first()).map(|r| r.witness.len()).next().unwrap_or(0);
    let mut out = String::from("R,target_index,c_R,c_shell,dirichlet");
    for i in 1..=k {
        out.push_str(&format!(",w{i}"));
    }
    out.push('\n');
    for (ti, e) in estimates.iter().enumerate() {
        for r in &e.records {
            out.push_str(&format!("{},{},{:.p$e},{:.p$e},{:.p$e}", r.radius, ti, r.c, r.c_shell, r.dirichlet, p = precision));
            for w in &r.witness {
                out.push(',');
                out.push_str(&crate::algebra::rational_string(w));
            }
            out.push('\n');
        }
    }
    out
}
