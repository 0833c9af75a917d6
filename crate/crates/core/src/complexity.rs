//! Algebraic analysis: stabilisers, flags, the complexity exponent α, property C,
//! decompositions, generalised vertices, flag groups and weak homogeneity.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::algebra::matrix::solve;
use crate::algebra::{dot, integer_kernel, FieldMatrix, FieldScalar, Lattice, QMatrix};
use crate::error::{Error, Result};
use crate::geometry::polytope::combinations;
use crate::geometry::{cmp_vec, Hyperplane, SupportSet};
use crate::scheme::Scheme;

#[derive(Clone, Debug, PartialEq)]
pub struct StabiliserInfo {
    pub subspace: Hyperplane,
    pub lattice: Lattice,
    pub rank: usize,
    pub beta: usize,
}

impl StabiliserInfo {
    /// α_H = d − rk(H) + β_H.
    pub fn alpha(&self, d: usize) -> i64 {
        d as i64 - self.rank as i64 + self.beta as i64
    }
}

/// n supporting subspaces meeting in {0}.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceFlag {
    pub members: Vec<usize>,
    pub alpha: i64,
}

/// n supporting hyperplanes meeting in the single point `vertex`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConcreteFlag {
    pub members: Vec<usize>,
    pub vertex: Vec<FieldScalar>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    /// Indices of the subspaces V with V ∉ S_i.
    pub block: Vec<usize>,
    /// Basis of X_i.
    pub basis: Vec<Vec<FieldScalar>>,
    pub lattice: Lattice,
    pub k: usize,
    pub n: usize,
    pub d: i64,
    pub delta: BigRational,
    /// rk(Γ^V ∩ Γ_i) for V in the block.
    pub r: Vec<usize>,
}

impl Factor {
    /// r_i = k_i − δ_i − 1 for every V outside S_i.
    pub fn csr_rank_ok(&self) -> bool {
        let want = BigRational::from_integer(BigInt::from(self.k as i64 - 1)) - &self.delta;
        self.r.iter().all(|&r| BigRational::from_integer(BigInt::from(r)) == want)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub factors: Vec<Factor>,
    pub sum_finite_index: bool,
    /// inverse of the matrix whose columns are the concatenated factor bases
    splitter: FieldMatrix,
}

impl Decomposition {
    pub fn is_decomposable(&self) -> bool {
        self.factors.len() > 1
    }

    /// Components of x along R^n = ⊕ X_i.
    pub fn split(&self, x: &[FieldScalar]) -> Vec<Vec<FieldScalar>> {
        let c = self.splitter.mul_vec(x);
        let n = x.len();
        let field = x[0].field();
        let mut out = Vec::new();
        let mut off = 0;
        for f in &self.factors {
            let mut v = vec![field.zero(); n];
            for (j, b) in f.basis.iter().enumerate() {
                for t in 0..n {
                    v[t] = &v[t] + &(&b[t] * &c[off + j]);
                }
            }
            off += f.basis.len();
            out.push(v);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Homogeneous,
    Weakly(u32),
    NotWithinBound(u32),
    /// Some flag group has infinite index (C fails); the coset search does not apply.
    Undetermined,
}

impl Homogeneity {
    pub fn scale(&self) -> Option<u32> {
        match self {
            Homogeneity::Homogeneous => Some(1),
            Homogeneity::Weakly(n) => Some(*n),
            _ => None,
        }
    }
    pub fn describe(&self) -> String {
        match self {
            Homogeneity::Homogeneous => "homogeneous".into(),
            Homogeneity::Weakly(n) => format!("weakly-homogeneous(N={n})"),
            Homogeneity::NotWithinBound(n) => format!("not-within-bound(N<={n})"),
            Homogeneity::Undetermined => "undetermined".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlagGroup {
    /// Γ[f] in rational lattice coordinates; `None` if Γ has infinite index in it.
    pub lattice: Option<Lattice>,
    pub index: Option<BigInt>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CConsequences {
    pub hyperplane_spanning: bool,
    pub one_dimensional: bool,
    pub finite_index_sums: bool,
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub scheme: Scheme,
    pub support: SupportSet,
    pub stabilisers: Vec<StabiliserInfo>,
    pub subspace_flags: Vec<SubspaceFlag>,
    pub flags: Vec<ConcreteFlag>,
    pub alpha: i64,
    pub c: bool,
    pub consequences: CConsequences,
    pub decomposition: Decomposition,
    pub vertices: Vec<Vec<FieldScalar>>,
    pub f_set: Vec<Vec<FieldScalar>>,
    pub flag_groups: Vec<FlagGroup>,
    pub homogeneity: Homogeneity,
    /// Least N with F ⊂ (1/N)Γ_<, if every element of F has a rational lift.
    pub f_denominator: Option<BigInt>,
}

fn restriction_rows(s: &Scheme, normals: &[&Hyperplane]) -> QMatrix {
    let rows: Vec<Vec<FieldScalar>> = normals.iter().map(|h| (0..s.k).map(|j| dot(&s.field, h.normal(), &s.proj_internal.column(j))).collect()).collect();
    if rows.is_empty() {
        return Vec::new();
    }
    FieldMatrix::new(&s.field, rows).expect("same field").rational_restriction()
}

/// Γ^S = ⋂_{V∈S} Γ^V; the empty set gives Γ.
pub fn stabiliser(s: &Scheme, subspaces: &[&Hyperplane]) -> Lattice {
    if subspaces.is_empty() {
        return Lattice::standard(s.k);
    }
    integer_kernel(&restriction_rows(s, subspaces), s.k)
}

/// Field rank of the internal images of a lattice.
pub fn internal_rank(s: &Scheme, l: &Lattice) -> usize {
    if l.rank() == 0 {
        return 0;
    }
    let rows: Vec<Vec<FieldScalar>> = l.basis().iter().map(|b| s.proj_internal.mul_rat(b)).collect();
    FieldMatrix::new(&s.field, rows).expect("same field").rank()
}

pub fn stabiliser_info(s: &Scheme, v: &Hyperplane) -> StabiliserInfo {
    let lattice = stabiliser(s, &[v]);
    StabiliserInfo { subspace: v.clone(), rank: lattice.rank(), beta: internal_rank(s, &lattice), lattice }
}

fn normals_rank(s: &Scheme, hs: &[&Hyperplane]) -> usize {
    if hs.is_empty() {
        return 0;
    }
    FieldMatrix::new(&s.field, hs.iter().map(|h| h.normal().to_vec()).collect()).expect("same field").rank()
}

/// Flags of subspaces and of concrete hyperplanes.
pub fn enumerate_flags(s: &Scheme, support: &SupportSet) -> Result<(Vec<Vec<usize>>, Vec<ConcreteFlag>)> {
    let n = s.n;
    let sub_flags: Vec<Vec<usize>> = combinations(support.subspaces.len(), n)
        .into_iter()
        .filter(|c| normals_rank(s, &c.iter().map(|&i| &support.subspaces[i]).collect::<Vec<_>>()) == n)
        .collect();
    let mut flags = Vec::new();
    for c in combinations(support.hyperplanes.len(), n) {
        let hs: Vec<&Hyperplane> = c.iter().map(|&i| &support.hyperplanes[i]).collect();
        let m = FieldMatrix::new(&s.field, hs.iter().map(|h| h.normal().to_vec()).collect())?;
        if m.rank() < n {
            continue;
        }
        let rhs: Vec<FieldScalar> = hs.iter().map(|h| h.offset().clone()).collect();
        flags.push(ConcreteFlag { members: c, vertex: m.solve(&rhs).expect("full rank") });
    }
    if sub_flags.is_empty() || flags.is_empty() {
        return Err(Error::InvalidWindow("no flags: too few supporting hyperplanes for a compact window".into()));
    }
    Ok((sub_flags, flags))
}

/// Connected components of the linear matroid on the subspace normals.
fn matroid_components(s: &Scheme, subspaces: &[Hyperplane]) -> Vec<Vec<usize>> {
    let m = subspaces.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..m {
        let mut cand: Vec<&Hyperplane> = basis.iter().map(|&b| &subspaces[b]).collect();
        cand.push(&subspaces[i]);
        if normals_rank(s, &cand) > basis.len() {
            basis.push(i);
        }
    }
    for i in 0..m {
        if basis.contains(&i) {
            continue;
        }
        // fundamental circuit of i: basis elements with nonzero coefficient
        let bm = FieldMatrix::new(&s.field, basis.iter().map(|&b| subspaces[b].normal().to_vec()).collect()).expect("field").transpose();
        let coeffs = bm.solve(subspaces[i].normal()).expect("in span");
        for (j, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, basis[j]));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..m {
        let r = find(&mut parent, i);
        match roots.iter().position(|&x| x == r) {
            Some(p) => groups[p].push(i),
            None => {
                roots.push(r);
                groups.push(vec![i]);
            }
        }
    }
    groups
}

pub fn find_decomposition(s: &Scheme, support: &SupportSet) -> Result<Decomposition> {
    let subs = &support.subspaces;
    let blocks = matroid_components(s, subs);
    let mut factors = Vec::new();
    let mut cols: Vec<Vec<FieldScalar>> = Vec::new();
    for block in &blocks {
        let rest: Vec<&Hyperplane> = (0..subs.len()).filter(|i| !block.contains(i)).map(|i| &subs[i]).collect();
        let basis = if rest.is_empty() {
            FieldMatrix::identity(&s.field, s.n).rows().to_vec()
        } else {
            FieldMatrix::new(&s.field, rest.iter().map(|h| h.normal().to_vec()).collect())?.nullspace()
        };
        let lattice = stabiliser(s, &rest);
        let k = lattice.rank();
        let n = basis.len();
        let d = k as i64 - n as i64;
        let r = block
            .iter()
            .map(|&v| {
                let mut with = rest.clone();
                with.push(&subs[v]);
                stabiliser(s, &with).rank()
            })
            .collect();
        cols.extend(basis.iter().cloned());
        factors.push(Factor { block: block.clone(), basis, lattice, k, n, d, delta: BigRational::new(d.into(), (n.max(1) as i64).into()), r });
    }
    if cols.len() != s.n {
        return Err(Error::InvalidScheme("supporting subspaces do not split the internal space".into()));
    }
    let b = FieldMatrix::new(&s.field, cols)?.transpose();
    let splitter = b.inverse()?;
    let sum = factors.iter().fold(Lattice::from_generators(s.k, &[]), |acc, f| acc.sum(&f.lattice));
    Ok(Decomposition { sum_finite_index: sum.rank() == s.k, factors, splitter })
}

/// Rational x with π_< x = v (unique by injectivity), if any.
pub fn rational_lift(s: &Scheme, v: &[FieldScalar]) -> Option<Vec<BigRational>> {
    let a = s.proj_internal.rational_restriction();
    let g = s.field.degree();
    let b: Vec<BigRational> = v.iter().flat_map(|x| (0..g).map(move |t| x.coeffs()[t].clone())).collect();
    solve(&a, &b, s.k)
}

/// Γ[f]: Γ together with rational lifts of the generators of Ver(f) − v(f).
pub fn flag_group(s: &Scheme, support: &SupportSet, f: &ConcreteFlag) -> FlagGroup {
    let hs: Vec<&Hyperplane> = f.members.iter().map(|&i| &support.hyperplanes[i]).collect();
    let m = FieldMatrix::new(&s.field, hs.iter().map(|h| h.normal().to_vec()).collect()).expect("field");
    let mut gens: Vec<Vec<BigRational>> = Lattice::standard(s.k).basis().to_vec();
    for (hi, h) in hs.iter().enumerate() {
        for j in 0..s.k {
            let mut rhs = vec![s.field.zero(); s.n];
            rhs[hi] = dot(&s.field, h.normal(), &s.proj_internal.column(j));
            let v = m.solve(&rhs).expect("flag normals independent");
            match rational_lift(s, &v) {
                Some(x) => gens.push(x),
                None => return FlagGroup { lattice: None, index: None },
            }
        }
    }
    let l = Lattice::from_generators(s.k, &gens);
    let index = l.index_of(&Lattice::standard(s.k));
    FlagGroup { lattice: Some(l), index }
}

/// Γ_i[f, f′] = {γ ∈ Γ[f] + Γ[f′] : γ_< ∈ X_i}.
pub fn factor_flag_group(s: &Scheme, support: &SupportSet, dec: &Decomposition, i: usize, a: &Lattice, b: &Lattice) -> Lattice {
    let sum = a.sum(b);
    let rest: Vec<&Hyperplane> = (0..support.subspaces.len()).filter(|v| !dec.factors[i].block.contains(v)).map(|v| &support.subspaces[v]).collect();
    if rest.is_empty() {
        return sum;
    }
    let m = restriction_rows(s, &rest);
    let mb: Vec<Vec<BigRational>> = m.iter().map(|row| sum.basis().iter().map(|bv| row.iter().zip(bv).map(|(x, y)| x * y).sum()).collect()).collect();
    let c = integer_kernel(&mb, sum.rank());
    let gens: Vec<Vec<BigRational>> =
        c.basis().iter().map(|cv| (0..s.k).map(|t| cv.iter().zip(sum.basis()).map(|(x, bv)| x * &bv[t]).sum()).collect()).collect();
    Lattice::from_generators(s.k, &gens)
}

fn in_image(s: &Scheme, h: &Hyperplane, x: &FieldScalar) -> bool {
    let g = s.field.degree();
    let gens: Vec<Vec<BigRational>> = (0..s.k)
        .map(|j| {
            let v = dot(&s.field, h.normal(), &s.proj_internal.column(j));
            (0..g).map(|t| v.coeffs()[t].clone()).collect()
        })
        .collect();
    Lattice::from_generators(g, &gens).contains(&x.coeffs()[..g])
}

/// Coset representatives of Γ[f] / Z^k.
fn coset_reps(k: usize, l: &Lattice) -> Vec<Vec<BigRational>> {
    let coords: Vec<Vec<BigInt>> = Lattice::standard(k).basis().iter().map(|e| l.coords(e).expect("Z^k inside")).collect();
    let h = crate::algebra::hnf_rows(coords, k);
    let diag: Vec<i64> = (0..k).map(|i| h[i][i].to_i64().expect("small index")).collect();
    let mut reps = vec![vec![0i64; k]];
    for (i, &d) in diag.iter().enumerate() {
        let mut next = Vec::new();
        for r in &reps {
            for a in 0..d {
                let mut v = r.clone();
                v[i] = a;
                next.push(v);
            }
        }
        reps = next;
    }
    reps.iter().map(|a| (0..k).map(|t| a.iter().zip(l.basis()).map(|(&x, b)| &b[t] * BigRational::from_integer(x.into())).sum()).collect()).collect()
}

/// Semi-decision of weak homogeneity up to N_max, from the definition: a common point
/// p = v(f) + (1/N)g_< with g ranging over Γ[f]/Γ for a fixed flag f.
pub fn weak_homogeneity(s: &Scheme, support: &SupportSet, flags: &[ConcreteFlag], groups: &[FlagGroup], n_max: u32) -> Homogeneity {
    let Some(l) = groups.first().and_then(|g| g.lattice.clone()) else {
        return Homogeneity::Undetermined;
    };
    if groups.iter().any(|g| g.lattice.is_none()) {
        return Homogeneity::Undetermined;
    }
    let v0 = &flags[0].vertex;
    let reps: Vec<Vec<FieldScalar>> = coset_reps(s.k, &l).iter().map(|g| s.proj_internal.mul_rat(g)).collect();
    for n in 1..=n_max {
        let nq = BigRational::from_integer(n.into());
        for g in &reps {
            let ok = support.hyperplanes.iter().all(|h| {
                let x = (h.offset() - &dot(&s.field, h.normal(), v0)).scale(&nq) - dot(&s.field, h.normal(), g);
                in_image(s, h, &x)
            });
            if ok {
                return if n == 1 { Homogeneity::Homogeneous } else { Homogeneity::Weakly(n) };
            }
        }
    }
    Homogeneity::NotWithinBound(n_max)
}

fn dedup_sorted(mut v: Vec<Vec<FieldScalar>>) -> Vec<Vec<FieldScalar>> {
    v.sort_by(|a, b| cmp_vec(a, b));
    v.dedup();
    v
}

pub fn analyze(scheme: &Scheme, n_max: u32) -> Result<Analysis> {
    let s = scheme.normalized()?;
    let support = s.support();
    let stabilisers: Vec<StabiliserInfo> = support.subspaces.iter().map(|v| stabiliser_info(&s, v)).collect();
    let (sub_idx, flags) = enumerate_flags(&s, &support)?;
    let subspace_flags: Vec<SubspaceFlag> = sub_idx
        .into_iter()
        .map(|m| {
            let alpha = m.iter().map(|&i| stabilisers[i].alpha(s.d)).sum();
            SubspaceFlag { members: m, alpha }
        })
        .collect();
    let alpha = subspace_flags.iter().map(|f| f.alpha).max().expect("flags exist");
    let c = alpha == s.d as i64;

    let hyperplane_spanning = stabilisers.iter().all(|st| st.beta == s.n - 1);
    let mut one_dimensional = true;
    let mut finite_index_sums = true;
    for f in &subspace_flags {
        let mut sum = Lattice::from_generators(s.k, &[]);
        for h in &f.members {
            let others: Vec<&Hyperplane> = f.members.iter().filter(|x| *x != h).map(|&i| &support.subspaces[i]).collect();
            let g = stabiliser(&s, &others);
            if s.n > 1 && internal_rank(&s, &g) != 1 {
                one_dimensional = false;
            }
            sum = sum.sum(&g);
        }
        if sum.rank() != s.k {
            finite_index_sums = false;
        }
    }
    let decomposition = find_decomposition(&s, &support)?;
    let vertices = dedup_sorted(flags.iter().map(|f| f.vertex.clone()).collect());
    let mut diffs = Vec::new();
    for a in &vertices {
        for b in &vertices {
            diffs.push(a.iter().zip(b).map(|(x, y)| x - y).collect());
        }
    }
    let f_set = dedup_sorted(diffs);
    let flag_groups: Vec<FlagGroup> = flags.iter().map(|f| flag_group(&s, &support, f)).collect();
    let homogeneity = weak_homogeneity(&s, &support, &flags, &flag_groups, n_max);
    let mut f_denominator = Some(BigInt::one());
    for f in &f_set {
        match (rational_lift(&s, f), f_denominator.as_mut()) {
            (Some(x), Some(acc)) => {
                for q in &x {
                    *acc = acc.lcm(q.denom());
                }
            }
            _ => f_denominator = None,
        }
    }
    Ok(Analysis {
        consequences: CConsequences { hyperplane_spanning, one_dimensional, finite_index_sums },
        scheme: s,
        support,
        stabilisers,
        subspace_flags,
        flags,
        alpha,
        c,
        decomposition,
        vertices,
        f_set,
        flag_groups,
        homogeneity,
        f_denominator,
    })
}

impl Analysis {
    pub fn all_flag_groups_finite(&self) -> bool {
        self.flag_groups.iter().all(|g| g.index.is_some())
    }
}
