//! JSON reports. Exact values are written as arrays of rational strings, one per
//! power-basis coefficient.

use num_bigint::BigInt;
use serde::Serialize;

use crate::algebra::{rational_string, FieldScalar, Lattice};
use crate::complexity::{Analysis, Factor};
use crate::diophantine::{
    check_d, check_df, check_flag_condition, empirical_verdict, DReport, DfReport, DiophantineEstimate, FactorCheck, FlagReport, Verdict,
};
use crate::error::Result;

pub type Exact = Vec<String>;

pub fn exact(x: &FieldScalar) -> Exact {
    x.coeffs().iter().map(rational_string).collect()
}

pub fn exact_vec(v: &[FieldScalar]) -> Vec<Exact> {
    v.iter().map(exact).collect()
}

pub fn lattice_json(l: &Lattice) -> Vec<Vec<String>> {
    l.basis().iter().map(|b| b.iter().map(rational_string).collect()).collect()
}

#[derive(Serialize)]
pub struct HyperplaneJson {
    pub normal: Vec<Exact>,
    pub offset: Exact,
}

#[derive(Serialize)]
pub struct StabiliserJson {
    pub subspace: Vec<Exact>,
    pub rank: usize,
    pub beta: usize,
    pub alpha_h: i64,
    pub lattice: Vec<Vec<String>>,
}

#[derive(Serialize)]
pub struct FlagJson {
    pub subspaces: Vec<usize>,
    pub alpha_f: i64,
}

#[derive(Serialize)]
pub struct FlagGroupJson {
    pub hyperplanes: Vec<usize>,
    pub vertex: Vec<Exact>,
    /// Index of Γ in Γ[f]; null when infinite.
    pub index: Option<String>,
    pub lattice: Option<Vec<Vec<String>>>,
}

#[derive(Serialize)]
pub struct FactorJson {
    pub subspaces: Vec<usize>,
    pub basis: Vec<Vec<Exact>>,
    pub lattice: Vec<Vec<String>>,
    pub k: usize,
    pub n: usize,
    pub d: i64,
    pub delta: String,
    pub r: Vec<usize>,
    pub csr_rank_ok: bool,
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum DecompositionJson {
    Word(&'static str),
    Split { factors: Vec<FactorJson>, sum_finite_index: bool },
}

#[derive(Serialize)]
pub struct ConsequencesJson {
    pub hyperplane_spanning: bool,
    pub one_dimensional: bool,
    pub finite_index_sums: bool,
}

#[derive(Serialize)]
pub struct SchemeSummary {
    pub k: usize,
    pub d: usize,
    pub n: usize,
    pub minpoly: Vec<String>,
}

#[derive(Serialize)]
pub struct AnalysisReport {
    pub scheme: SchemeSummary,
    pub alpha: i64,
    #[serde(rename = "C")]
    pub c: bool,
    pub supporting_hyperplanes: Vec<HyperplaneJson>,
    pub stabilisers: Vec<StabiliserJson>,
    pub flags: Vec<FlagJson>,
    pub consequences: ConsequencesJson,
    pub flag_groups: Vec<FlagGroupJson>,
    /// C ⇔ every flag group has finite index.
    pub c_matches_flag_groups: bool,
    pub decomposition: DecompositionJson,
    pub factors: Vec<FactorJson>,
    pub homogeneity: String,
    pub f_denominator: Option<String>,
    pub vertices: Vec<Vec<Exact>>,
    #[serde(rename = "F")]
    pub f: Vec<Vec<Exact>>,
}

pub fn analysis_report(a: &Analysis) -> AnalysisReport {
    let s = &a.scheme;
    let mk = |f: &Factor| FactorJson {
        subspaces: (0..a.support.subspaces.len()).filter(|i| !f.block.contains(i)).collect(),
        basis: f.basis.iter().map(|b| exact_vec(b)).collect(),
        lattice: lattice_json(&f.lattice),
        k: f.k,
        n: f.n,
        d: f.d,
        delta: rational_string(&f.delta),
        r: f.r.clone(),
        csr_rank_ok: f.csr_rank_ok(),
    };
    let decomposition = if a.decomposition.is_decomposable() {
        DecompositionJson::Split { factors: a.decomposition.factors.iter().map(mk).collect(), sum_finite_index: a.decomposition.sum_finite_index }
    } else {
        DecompositionJson::Word("indecomposable")
    };
    let factors = a.decomposition.factors.iter().map(mk).collect();
    AnalysisReport {
        scheme: SchemeSummary { k: s.k, d: s.d, n: s.n, minpoly: s.field.minpoly().iter().map(|c| c.to_string()).collect() },
        alpha: a.alpha,
        c: a.c,
        supporting_hyperplanes: a.support.hyperplanes.iter().map(|h| HyperplaneJson { normal: exact_vec(h.normal()), offset: exact(h.offset()) }).collect(),
        stabilisers: a
            .stabilisers
            .iter()
            .map(|st| StabiliserJson {
                subspace: exact_vec(st.subspace.normal()),
                rank: st.rank,
                beta: st.beta,
                alpha_h: st.alpha(s.d),
                lattice: lattice_json(&st.lattice),
            })
            .collect(),
        flags: a.subspace_flags.iter().map(|f| FlagJson { subspaces: f.members.clone(), alpha_f: f.alpha }).collect(),
        consequences: ConsequencesJson {
            hyperplane_spanning: a.consequences.hyperplane_spanning,
            one_dimensional: a.consequences.one_dimensional,
            finite_index_sums: a.consequences.finite_index_sums,
        },
        flag_groups: a
            .flags
            .iter()
            .zip(&a.flag_groups)
            .map(|(f, g)| FlagGroupJson {
                hyperplanes: f.members.clone(),
                vertex: exact_vec(&f.vertex),
                index: g.index.as_ref().map(|i| i.to_string()),
                lattice: g.lattice.as_ref().map(lattice_json),
            })
            .collect(),
        c_matches_flag_groups: a.c == a.all_flag_groups_finite(),
        decomposition,
        factors,
        homogeneity: a.homogeneity.describe(),
        f_denominator: a.f_denominator.as_ref().map(BigInt::to_string),
        vertices: a.vertices.iter().map(|v| exact_vec(v)).collect(),
        f: a.f_set.iter().map(|v| exact_vec(v)).collect(),
    }
}

#[derive(Serialize)]
pub struct EstimateSummary {
    pub target: Vec<Exact>,
    pub c_first: f64,
    pub c_last: f64,
    pub verdict: &'static str,
}

fn summarize(e: &DiophantineEstimate) -> EstimateSummary {
    EstimateSummary {
        target: exact_vec(&e.target),
        c_first: e.records.first().map(|r| r.c).unwrap_or(f64::NAN),
        c_last: e.records.last().map(|r| r.c).unwrap_or(f64::NAN),
        verdict: empirical_verdict(e).as_str(),
    }
}

#[derive(Serialize)]
pub struct FactorCheckJson {
    pub factor: usize,
    pub delta: String,
    /// Continued-fraction period when the factor is certified badly approximable.
    pub period: Option<Vec<String>>,
    pub verdict: &'static str,
    pub estimates: Vec<EstimateSummary>,
}

fn factor_json(f: &FactorCheck) -> FactorCheckJson {
    FactorCheckJson {
        factor: f.factor,
        delta: rational_string(&f.delta),
        period: f.certificate.as_ref().map(|p| p.iter().map(|x| x.to_string()).collect()),
        verdict: f.verdict.as_str(),
        estimates: f.estimates.iter().map(summarize).collect(),
    }
}

#[derive(Serialize)]
pub struct DJson {
    pub verdict: &'static str,
    pub factors: Vec<FactorCheckJson>,
    pub stabiliser_periods: Vec<Option<Vec<String>>>,
}

#[derive(Serialize)]
pub struct DfJson {
    pub scale_n: u32,
    pub verdict: &'static str,
    pub factors: Vec<FactorCheckJson>,
}

#[derive(Serialize)]
pub struct FlagRunJson {
    pub flags: [usize; 2],
    pub factor: usize,
    pub estimate: EstimateSummary,
}

#[derive(Serialize)]
pub struct FlagJsonBlock {
    pub verdict: &'static str,
    pub runs: Vec<FlagRunJson>,
    pub skipped: usize,
}

/// Which Diophantine checks to run; `None` in all three means "dispatch".
#[derive(Clone, Copy, Debug, Default)]
pub struct Selection {
    pub d: bool,
    pub df: bool,
    pub flag: bool,
}

#[derive(Clone, Debug)]
pub struct DiophantineConfig {
    pub schedule: Vec<u64>,
    pub scale_n: Option<u32>,
    pub max_targets: Option<usize>,
    pub max_runs: Option<usize>,
    pub selection: Selection,
}

#[derive(Serialize)]
pub struct DiophantineReport {
    pub alpha: i64,
    #[serde(rename = "C")]
    pub c: bool,
    pub homogeneity: String,
    /// "D" for weakly homogeneous schemes, "D_F" otherwise.
    pub dispatch: &'static str,
    pub notes: Vec<String>,
    #[serde(rename = "D", skip_serializing_if = "Option::is_none")]
    pub d: Option<DJson>,
    #[serde(rename = "D_F", skip_serializing_if = "Option::is_none")]
    pub df: Option<DfJson>,
    #[serde(rename = "flag_condition", skip_serializing_if = "Option::is_none")]
    pub flag: Option<FlagJsonBlock>,
    pub lr: String,
}

/// Raw check results, for CSV export.
#[derive(Default)]
pub struct DiophantineRuns {
    pub d: Option<DReport>,
    pub df: Option<DfReport>,
    pub flag: Option<FlagReport>,
}

fn lr_line(path: &str, v: Verdict) -> String {
    match v {
        Verdict::Certified => "LR: certified-consistent".into(),
        Verdict::EmpiricallyConsistent => "LR: empirically-consistent".into(),
        Verdict::EmpiricallyFailing => format!("LR: fails ({path} necessary)"),
    }
}

/// Runs the checks. Weakly homogeneous schemes go down the D path ("C and D");
/// the rest through D_F and the flag-group condition.
pub fn diophantine_report(a: &Analysis, cfg: &DiophantineConfig) -> Result<(DiophantineReport, DiophantineRuns)> {
    let mut report = DiophantineReport {
        alpha: a.alpha,
        c: a.c,
        homogeneity: a.homogeneity.describe(),
        dispatch: if a.homogeneity.scale().is_some() { "D" } else { "D_F" },
        notes: Vec::new(),
        d: None,
        df: None,
        flag: None,
        lr: String::new(),
    };
    let mut runs = DiophantineRuns::default();
    if !a.c {
        report.lr = "LR: fails (C fails, exact)".into();
        return Ok((report, runs));
    }
    let sel = cfg.selection;
    let any = sel.d || sel.df || sel.flag;
    let (want_d, want_df, want_flag) = if any {
        (sel.d, sel.df, sel.flag)
    } else if report.dispatch == "D" {
        (true, false, false)
    } else {
        (false, true, true)
    };
    let mut decisive: Option<(&str, Verdict)> = None;
    if want_d {
        let r = check_d(a, &cfg.schedule)?;
        report.d = Some(DJson {
            verdict: r.verdict.as_str(),
            factors: r.factors.iter().map(factor_json).collect(),
            stabiliser_periods: r.stabiliser_certificates.iter().map(|c| c.as_ref().map(|p| p.iter().map(|x| x.to_string()).collect())).collect(),
        });
        if report.dispatch == "D" {
            decisive = Some(("D", r.verdict));
        }
        runs.d = Some(r);
    }
    if want_df {
        let scale = cfg.scale_n.or(a.homogeneity.scale()).unwrap_or(1);
        if a.scheme.n == 1 {
            report.notes.push("codimension one: N = 1 suffices for D_F".into());
        }
        let r = check_df(a, &cfg.schedule, if a.scheme.n == 1 && cfg.scale_n.is_none() { 1 } else { scale }, cfg.max_targets)?;
        report.df = Some(DfJson { scale_n: r.scale, verdict: r.verdict.as_str(), factors: r.factors.iter().map(factor_json).collect() });
        if report.dispatch == "D_F" {
            decisive = Some(("D_F", r.verdict));
        }
        runs.df = Some(r);
    }
    if want_flag {
        let r = check_flag_condition(a, &cfg.schedule, cfg.max_runs)?;
        if r.skipped > 0 {
            report.notes.push(format!("{} flag-pair runs skipped by the run limit", r.skipped));
        }
        report.flag = Some(FlagJsonBlock {
            verdict: r.verdict.as_str(),
            runs: r.runs.iter().map(|x| FlagRunJson { flags: [x.flags.0, x.flags.1], factor: x.factor, estimate: summarize(&x.estimate) }).collect(),
            skipped: r.skipped,
        });
        if report.dispatch == "D_F" {
            let v = decisive.map(|d| d.1.min(r.verdict)).unwrap_or(r.verdict);
            decisive = Some(("D_F", v));
        }
        runs.flag = Some(r);
    }
    report.lr = match decisive {
        Some((path, v)) => lr_line(path, v),
        None => "LR: undecided (dispatched check not selected)".into(),
    };
    Ok((report, runs))
}
