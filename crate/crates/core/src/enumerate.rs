//! Integer points in a box under a linear map (Fincke–Pohst over an enclosing ellipsoid).
//!
//! `enumerate_box` returns a superset of {m ∈ Z^k : lo ≤ A m ≤ hi}, widened by a small
//! relative margin; callers filter exactly.

use rayon::prelude::*;

const MARGIN: f64 = 1e-9;

struct Qr {
    r: Vec<Vec<f64>>,
    y: Vec<f64>,
    budget: f64,
}

fn householder(mut m: Vec<Vec<f64>>, mut c: Vec<f64>, k: usize) -> Qr {
    let rows = m.len();
    for j in 0..k {
        let norm = (j..rows).map(|i| m[i][j] * m[i][j]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if m[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (0..rows).map(|i| if i < j { 0.0 } else { m[i][j] }).collect();
        v[j] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv == 0.0 {
            continue;
        }
        for col in j..k {
            let s: f64 = (j..rows).map(|i| v[i] * m[i][col]).sum::<f64>() * 2.0 / vv;
            for i in j..rows {
                m[i][col] -= s * v[i];
            }
        }
        let s: f64 = (j..rows).map(|i| v[i] * c[i]).sum::<f64>() * 2.0 / vv;
        for i in j..rows {
            c[i] -= s * v[i];
        }
    }
    let resid: f64 = c[k..].iter().map(|x| x * x).sum();
    Qr { r: m[..k].to_vec(), y: c[..k].to_vec(), budget: rows as f64 * (1.0 + 1e-7) - resid + 1e-9 }
}

/// All integer m (up to the margin) with lo_i ≤ (A m)_i ≤ hi_i; A has at least k rows and rank k.
/// Output is sorted lexicographically.
pub fn enumerate_box(a: &[Vec<f64>], lo: &[f64], hi: &[f64]) -> Vec<Vec<i64>> {
    let k = a[0].len();
    let mut rows = Vec::new();
    let mut c = Vec::new();
    let mut half_w = Vec::new();
    let mut mid_v = Vec::new();
    for i in 0..a.len() {
        let mid = (lo[i] + hi[i]) / 2.0;
        let scale = a[i].iter().fold(0.0f64, |s, x| s.max(x.abs())).max(lo[i].abs()).max(hi[i].abs());
        let h = (hi[i] - lo[i]) / 2.0 + MARGIN * (1.0 + scale);
        if h < 0.0 {
            return Vec::new();
        }
        rows.push(a[i].iter().map(|x| x / h).collect::<Vec<f64>>());
        c.push(mid / h);
        half_w.push(h);
        mid_v.push(mid);
    }
    // Reduce the scaled basis first so thin boxes give small search trees.
    let u = lll(&rows, k);
    let reduced: Vec<Vec<f64>> = rows.iter().map(|r| (0..k).map(|j| (0..k).map(|i| r[i] * u[i][j] as f64).sum()).collect()).collect();
    let qr = householder(reduced, c, k);
    if qr.budget < 0.0 {
        return Vec::new();
    }
    let top = k - 1;
    let (l, hi_t) = range(&qr, top, 0.0, qr.budget);
    let check = |m: &Vec<i64>| {
        a.iter().enumerate().all(|(i, row)| {
            let v: f64 = row.iter().zip(m).map(|(x, &y)| x * y as f64).sum();
            (v - mid_v[i]).abs() <= half_w[i] * (1.0 + 1e-7)
        })
    };
    let to_m = |y: &Vec<i64>| -> Vec<i64> { (0..k).map(|i| (0..k).map(|j| u[i][j] * y[j]).sum()).collect() };
    let mut out: Vec<Vec<i64>> = (l..=hi_t)
        .into_par_iter()
        .flat_map_iter(|t| {
            let mut local = Vec::new();
            let mut y = vec![0i64; k];
            y[top] = t;
            let d = qr.r[top][top] * t as f64 - qr.y[top];
            let rem = qr.budget - d * d;
            if rem >= 0.0 {
                descend(&qr, top, &mut y, rem, &mut |y| {
                    let m = to_m(y);
                    if check(&m) {
                        local.push(m);
                    }
                });
            }
            local
        })
        .collect();
    out.sort();
    out
}

/// LLL reduction (δ = 0.99) of the columns of `rows`; returns the unimodular transform.
fn lll(rows: &[Vec<f64>], k: usize) -> Vec<Vec<i64>> {
    let m = rows.len();
    let mut b: Vec<Vec<f64>> = (0..k).map(|j| (0..m).map(|i| rows[i][j]).collect()).collect();
    let mut u: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| (i == j) as i64).collect()).collect();
    let dotp = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    let gso = |b: &Vec<Vec<f64>>| {
        let mut bs: Vec<Vec<f64>> = Vec::new();
        let mut mu = vec![vec![0.0; k]; k];
        let mut nrm = vec![0.0; k];
        for i in 0..k {
            let mut v = b[i].clone();
            for j in 0..i {
                mu[i][j] = if nrm[j] > 0.0 { dotp(&b[i], &bs[j]) / nrm[j] } else { 0.0 };
                for t in 0..m {
                    v[t] -= mu[i][j] * bs[j][t];
                }
            }
            nrm[i] = dotp(&v, &v);
            bs.push(v);
        }
        (mu, nrm)
    };
    let mut i = 1;
    let mut guard = 0;
    while i < k && guard < 10_000 {
        guard += 1;
        for j in (0..i).rev() {
            let (mu, _) = gso(&b);
            let q = mu[i][j].round();
            if q != 0.0 && q.abs() < 1e15 {
                let qi = q as i64;
                for t in 0..m {
                    b[i][t] -= q * b[j][t];
                }
                for row in u.iter_mut() {
                    row[i] -= qi * row[j];
                }
            }
        }
        let (mu, nrm) = gso(&b);
        if nrm[i] >= (0.99 - mu[i][i - 1] * mu[i][i - 1]) * nrm[i - 1] {
            i += 1;
        } else {
            b.swap(i, i - 1);
            for row in u.iter_mut() {
                row.swap(i, i - 1);
            }
            i = i.max(2) - 1;
        }
    }
    u
}

fn range(qr: &Qr, i: usize, s: f64, rem: f64) -> (i64, i64) {
    let rii = qr.r[i][i];
    let center = (qr.y[i] - s) / rii;
    let rad = rem.max(0.0).sqrt() / rii.abs();
    let l = (center - rad - 1e-9 * (1.0 + center.abs())).ceil();
    let u = (center + rad + 1e-9 * (1.0 + center.abs())).floor();
    (l as i64, u as i64)
}

fn descend(qr: &Qr, level: usize, m: &mut Vec<i64>, rem: f64, f: &mut dyn FnMut(&Vec<i64>)) {
    if level == 0 {
        f(m);
        return;
    }
    let i = level - 1;
    let s: f64 = (i + 1..m.len()).map(|j| qr.r[i][j] * m[j] as f64).sum();
    let (l, u) = range(qr, i, s, rem);
    for t in l..=u {
        m[i] = t;
        let d = qr.r[i][i] * t as f64 + s - qr.y[i];
        let r2 = rem - d * d;
        if r2 >= -1e-9 {
            descend(qr, i, m, r2.max(0.0), f);
        }
    }
    m[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(a: &[Vec<f64>], lo: &[f64], hi: &[f64], b: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for x in -b..=b {
            for y in -b..=b {
                let ok = a.iter().enumerate().all(|(i, r)| {
                    let v = r[0] * x as f64 + r[1] * y as f64;
                    v >= lo[i] && v <= hi[i]
                });
                if ok {
                    out.push(vec![x, y]);
                }
            }
        }
        out
    }

    #[test]
    fn matches_brute_force() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let a = vec![vec![1.0, phi - 1.0], vec![1.0, -phi]];
        let lo = [-7.3, -0.6];
        let hi = [9.1, 0.9];
        let got = enumerate_box(&a, &lo, &hi);
        let want = brute(&a, &lo, &hi, 40);
        for w in &want {
            assert!(got.contains(w));
        }
        assert!(got.len() <= want.len() + 2);
    }

    #[test]
    fn rectangular_constraints() {
        let a = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        let got = enumerate_box(&a, &[-3.0, -3.0, -0.5], &[3.0, 3.0, 0.5]);
        assert_eq!(got.len(), 7);
    }
}
