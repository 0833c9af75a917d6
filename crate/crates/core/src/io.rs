//! Scheme files (JSON) and CSV helpers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::algebra::{parse_rational, rational_string, FieldMatrix, FieldScalar, NumberField};
use crate::error::{Error, Result};
use crate::geometry::{Halfspace, Side, Window, WindowPolytope};
use crate::scheme::{CyclicData, Scheme};

/// A field element: power-basis coefficients as rational strings, or a single rational.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ScalarRepr {
    Coeffs(Vec<String>),
    Rational(String),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RootRepr {
    pub lo: String,
    pub hi: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FieldRepr {
    pub minpoly: Vec<i64>,
    pub root: RootRepr,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct HalfspaceRepr {
    pub normal: Vec<ScalarRepr>,
    pub offset: ScalarRepr,
    pub side: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PieceRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<ScalarRepr>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halfspaces: Option<Vec<HalfspaceRepr>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CyclicRepr {
    pub modulus: u32,
    pub kappa: Vec<i64>,
    pub windows: BTreeMap<String, Vec<PieceRepr>>,
    #[serde(default)]
    pub shifts: BTreeMap<String, Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SchemeRepr {
    pub field: FieldRepr,
    pub k: usize,
    pub d: usize,
    pub n: usize,
    pub proj_physical: Vec<Vec<ScalarRepr>>,
    pub proj_internal: Vec<Vec<ScalarRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Vec<PieceRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic: Option<CyclicRepr>,
}

fn scalar(field: &NumberField, s: &ScalarRepr) -> Result<FieldScalar> {
    match s {
        ScalarRepr::Rational(r) => Ok(FieldScalar::from_rational(field, parse_rational(r)?)),
        ScalarRepr::Coeffs(c) => {
            if c.len() > field.degree() {
                return Err(Error::Parse(format!("scalar has {} coefficients, field degree is {}", c.len(), field.degree())));
            }
            FieldScalar::new(field, c.iter().map(|x| parse_rational(x)).collect::<Result<Vec<BigRational>>>()?)
        }
    }
}

pub fn scalar_repr(x: &FieldScalar) -> ScalarRepr {
    ScalarRepr::Coeffs(x.coeffs().iter().map(rational_string).collect())
}

fn matrix(field: &NumberField, rows: &[Vec<ScalarRepr>], r: usize, c: usize, name: &str) -> Result<FieldMatrix> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(Error::Shape(format!("{name} must be {r}×{c}")));
    }
    let rows = rows.iter().map(|row| row.iter().map(|x| scalar(field, x)).collect()).collect::<Result<Vec<Vec<FieldScalar>>>>()?;
    FieldMatrix::new(field, rows)
}

fn window(field: &NumberField, n: usize, pieces: &[PieceRepr]) -> Result<Window> {
    let mut out = Vec::new();
    for p in pieces {
        let piece = match (&p.vertices, &p.halfspaces) {
            (Some(v), None) => {
                let pts = v.iter().map(|pt| pt.iter().map(|x| scalar(field, x)).collect()).collect::<Result<Vec<Vec<FieldScalar>>>>()?;
                WindowPolytope::from_vertices(field, n, p.label.clone(), pts)?
            }
            (None, Some(hs)) => {
                let hs = hs
                    .iter()
                    .map(|h| {
                        let side = match h.side.as_str() {
                            "le" => Side::Le,
                            "ge" => Side::Ge,
                            o => return Err(Error::Parse(format!("side must be \"le\" or \"ge\", got {o:?}"))),
                        };
                        let normal = h.normal.iter().map(|x| scalar(field, x)).collect::<Result<Vec<_>>>()?;
                        Halfspace::new(normal, scalar(field, &h.offset)?, side)
                    })
                    .collect::<Result<Vec<_>>>()?;
                WindowPolytope::from_halfspaces(field, n, p.label.clone(), hs)?
            }
            _ => return Err(Error::Parse("each window piece needs exactly one of \"vertices\" or \"halfspaces\"".into())),
        };
        out.push(piece);
    }
    Window::new(n, out)
}

impl SchemeRepr {
    pub fn build(&self) -> Result<Scheme> {
        let field = NumberField::new(
            self.field.minpoly.iter().map(|&x| BigInt::from(x)).collect(),
            parse_rational(&self.field.root.lo)?,
            parse_rational(&self.field.root.hi)?,
        )?;
        if self.k != self.d + self.n {
            return Err(Error::Shape("k must equal d + n".into()));
        }
        let pp = matrix(&field, &self.proj_physical, self.d, self.k, "proj_physical")?;
        let pi = matrix(&field, &self.proj_internal, self.n, self.k, "proj_internal")?;
        let (w, cyclic) = match (&self.window, &self.cyclic) {
            (Some(w), None) => (window(&field, self.n, w)?, None),
            (None, Some(c)) => {
                let parse_res = |s: &String| s.parse::<u32>().map_err(|_| Error::Parse(format!("bad residue {s:?}")));
                let mut windows = BTreeMap::new();
                for (g, w) in &c.windows {
                    windows.insert(parse_res(g)?, window(&field, self.n, w)?);
                }
                let mut shifts = BTreeMap::new();
                for (g, s) in &c.shifts {
                    shifts.insert(parse_res(g)?, s.clone());
                }
                let cd = CyclicData { modulus: c.modulus, kappa: c.kappa.clone(), windows, shifts };
                (Window::empty(self.n), Some(cd))
            }
            _ => return Err(Error::Parse("give exactly one of \"window\" or \"cyclic\"".into())),
        };
        Scheme::new(field, pp, pi, w, cyclic)
    }

    pub fn from_scheme(s: &Scheme) -> SchemeRepr {
        let (lo, hi) = s.field.root_interval();
        let mat = |m: &FieldMatrix| m.rows().iter().map(|r| r.iter().map(scalar_repr).collect()).collect();
        let win = |w: &Window| -> Vec<PieceRepr> {
            w.pieces()
                .iter()
                .map(|p| PieceRepr {
                    label: p.label.clone(),
                    vertices: Some(p.vertices().iter().map(|v| v.iter().map(scalar_repr).collect()).collect()),
                    halfspaces: None,
                })
                .collect()
        };
        SchemeRepr {
            field: FieldRepr {
                minpoly: s.field.minpoly().iter().map(|x| i64::try_from(x).expect("small minimal polynomial")).collect(),
                root: RootRepr { lo: rational_string(lo), hi: rational_string(hi) },
            },
            k: s.k,
            d: s.d,
            n: s.n,
            proj_physical: mat(&s.proj_physical),
            proj_internal: mat(&s.proj_internal),
            window: if s.cyclic.is_none() { Some(win(&s.window)) } else { None },
            cyclic: s.cyclic.as_ref().map(|c| CyclicRepr {
                modulus: c.modulus,
                kappa: c.kappa.clone(),
                windows: c.windows.iter().map(|(g, w)| (g.to_string(), win(w))).collect(),
                shifts: c.shifts.iter().map(|(g, v)| (g.to_string(), v.clone())).collect(),
            }),
        }
    }
}

/// Parses a scheme file; JSON syntax errors carry line and column.
pub fn parse_scheme(text: &str) -> Result<Scheme> {
    let repr: SchemeRepr = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    repr.build()
}

pub fn scheme_to_json(s: &Scheme) -> String {
    serde_json::to_string_pretty(&SchemeRepr::from_scheme(s)).expect("serializable") + "\n"
}

/// RFC 4180 field quoting.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Pattern CSV: x1..xd, label, g1..gk.
pub fn pattern_csv(p: &crate::scheme::PointPattern, d: usize, k: usize, precision: u32) -> String {
    let mut out = String::new();
    let mut head: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    head.push("label".into());
    head.extend((1..=k).map(|i| format!("g{i}")));
    out.push_str(&head.join(","));
    out.push('\n');
    for pt in &p.points {
        let mut row: Vec<String> = pt.phys.iter().map(|x| x.to_decimal(precision)).collect();
        row.push(csv_field(pt.label.as_deref().unwrap_or("")));
        row.extend(pt.coords.iter().map(|c| c.to_string()));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
