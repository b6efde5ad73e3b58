//! The saturating-set / covering-code bridge.
//!
//! The canonical homogeneous coordinates of a saturating set of size `n` in
//! `PG(r-1,q)` form the columns of a parity check matrix of a q-ary code of
//! length `n`, codimension `r`, covering radius 2; `(1,mu)`-saturating sets
//! correspond to `(2,mu)` multiple coverings of the farthest-off points.

use std::io::{BufRead, Write};

use crate::bounds::{comparison_bounds, d_closed, space_bounds, theorem1_bound};
use crate::geometry::{IncidencePlane, ProjectiveSpace};
use crate::gf::{prime_power, FieldElement, FieldSpec};
use crate::oracle::EnumerationBudget;
use crate::saturation::{is_mu_saturating, is_saturating_space, PointSet};
use crate::{Error, Result};

/// Columns over `GF(q)`: nonzero, pairwise non-proportional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    field: FieldSpec,
    r: u32,
    cols: Vec<Vec<FieldElement>>,
}

impl ParityCheckMatrix {
    pub fn new(field: FieldSpec, r: u32, cols: Vec<Vec<FieldElement>>) -> Result<Self> {
        if cols.is_empty() {
            return Err(Error::EmptySet);
        }
        for (j, col) in cols.iter().enumerate() {
            if col.len() != r as usize {
                return Err(Error::InvalidRange(format!(
                    "column {j} has {} entries, expected {r}",
                    col.len()
                )));
            }
            if col.iter().all(|c| c.is_zero()) {
                return Err(Error::InvalidRange(format!("column {j} is zero")));
            }
            for value in col {
                field.element(value.value())?;
            }
        }
        // Proportional columns collapse to the same canonical form.
        let mut canon: Vec<Vec<FieldElement>> = cols
            .iter()
            .map(|c| canonical_column(&field, c))
            .collect::<Result<_>>()?;
        canon.sort();
        for pair in canon.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::InvalidRange(
                    "proportional columns (repeated projective point)".into(),
                ));
            }
        }
        Ok(ParityCheckMatrix { field, r, cols })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// Codimension (number of rows).
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Code length (number of columns).
    pub fn n(&self) -> u32 {
        self.cols.len() as u32
    }

    pub fn col(&self, j: u32) -> &[FieldElement] {
        &self.cols[j as usize]
    }

    pub fn cols(&self) -> &[Vec<FieldElement>] {
        &self.cols
    }

    /// Text format: header `q <q> r <r> n <n>`, then `r` rows of `n`
    /// field-element encodings.
    pub fn write(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "q {} r {} n {}", self.q(), self.r, self.n())?;
        for i in 0..self.r as usize {
            let row: Vec<String> = self.cols.iter().map(|c| c[i].value().to_string()).collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        Ok(())
    }

    pub fn load(reader: impl BufRead) -> Result<Self> {
        let mut rows: Vec<(usize, String)> = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let content = match line.split_once('#') {
                Some((before, _)) => before,
                None => line.as_str(),
            };
            if !content.trim().is_empty() {
                rows.push((i + 1, content.trim().to_string()));
            }
        }
        let (hline, header) = rows.first().ok_or(Error::ParseError {
            line: 1,
            msg: "empty matrix file".into(),
        })?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        let bad = |msg: &str| Error::ParseError {
            line: *hline,
            msg: msg.into(),
        };
        if toks.len() != 6 || toks[0] != "q" || toks[2] != "r" || toks[4] != "n" {
            return Err(bad("expected header `q <q> r <r> n <n>`"));
        }
        let q: u64 = toks[1].parse().map_err(|_| bad("bad q"))?;
        let r: u32 = toks[3].parse().map_err(|_| bad("bad r"))?;
        let n: usize = toks[5].parse().map_err(|_| bad("bad n"))?;
        let (p, m) = prime_power(q).ok_or(bad("q is not a prime power"))?;
        let field = FieldSpec::new(p, m)?;
        if rows.len() != 1 + r as usize {
            return Err(Error::ParseError {
                line: rows.last().map(|r| r.0).unwrap_or(1),
                msg: format!("expected {r} matrix rows"),
            });
        }
        let mut cols = vec![Vec::with_capacity(r as usize); n];
        for (line_no, row) in &rows[1..] {
            let entries: Vec<&str> = row.split_whitespace().collect();
            if entries.len() != n {
                return Err(Error::ParseError {
                    line: *line_no,
                    msg: format!("expected {n} entries"),
                });
            }
            for (j, tok) in entries.iter().enumerate() {
                let v: u32 = tok.parse().map_err(|_| Error::ParseError {
                    line: *line_no,
                    msg: format!("bad entry `{tok}`"),
                })?;
                cols[j].push(field.element(v)?);
            }
        }
        ParityCheckMatrix::new(field, r, cols)
    }
}

fn canonical_column(field: &FieldSpec, col: &[FieldElement]) -> Result<Vec<FieldElement>> {
    let lead = col
        .iter()
        .position(|c| !c.is_zero())
        .ok_or_else(|| Error::InvalidRange("zero column".into()))?;
    if col[lead] == FieldElement(1) {
        return Ok(col.to_vec());
    }
    let scale = field.inv(col[lead])?;
    Ok(col.iter().map(|&c| field.mul(c, scale)).collect())
}

/// Parity check matrix of the set's coordinates in a generated plane
/// (`r = 3`); columns follow the set's sorted point indices.
pub fn export_parity_check(plane: &IncidencePlane, set: &PointSet) -> Result<ParityCheckMatrix> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if set.geometry() != plane.geometry_id() {
        return Err(Error::GeometryMismatch {
            set: set.geometry().to_string(),
            expected: plane.geometry_id().to_string(),
        });
    }
    let field = plane.field().ok_or(Error::NoCoordinates)?.clone();
    let cols = set
        .indices()
        .iter()
        .map(|&p| plane.point_coords(p).expect("generated plane").to_vec())
        .collect();
    ParityCheckMatrix::new(field, 3, cols)
}

/// Same export from `PG(N,q)` (`r = N+1`).
pub fn export_parity_check_space(
    space: &ProjectiveSpace,
    set: &PointSet,
) -> Result<ParityCheckMatrix> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if set.geometry() != space.geometry_id() {
        return Err(Error::GeometryMismatch {
            set: set.geometry().to_string(),
            expected: space.geometry_id().to_string(),
        });
    }
    let cols = set
        .indices()
        .iter()
        .map(|&p| space.point(p as u64).to_vec())
        .collect();
    ParityCheckMatrix::new(space.field().clone(), space.n_dim() + 1, cols)
}

/// `(2,mu)`-MCF check by mapping columns back to points of the generated
/// geometry and delegating to the saturation verifier.
pub fn check_mcf(h: &ParityCheckMatrix, mu: u64) -> Result<bool> {
    let field = h.field().clone();
    if h.r() == 3 {
        let plane = IncidencePlane::generate(&field)?;
        let indices: Vec<u32> = h
            .cols()
            .iter()
            .map(|c| {
                let canon = canonical_column(&field, c)?;
                Ok(plane
                    .index_of_coords([canon[0], canon[1], canon[2]])
                    .expect("generated plane has coordinates"))
            })
            .collect::<Result<_>>()?;
        let set = PointSet::new(plane.geometry_id(), indices, plane.point_count() as u64)?;
        Ok(is_mu_saturating(&plane, &set, mu)?.saturating)
    } else {
        let space = ProjectiveSpace::build(&field, h.r() - 1)?;
        let indices: Vec<u32> = h
            .cols()
            .iter()
            .map(|c| Ok(space.index_of(&canonical_column(&field, c)?) as u32))
            .collect::<Result<_>>()?;
        let set = PointSet::new(space.geometry_id(), indices, space.point_count())?;
        Ok(is_saturating_space(&space, &set, mu)?.saturating)
    }
}

/// Independent `(2,mu)`-MCF check by direct syndrome enumeration: every
/// canonical syndrome not proportional to a column must lie in the span of
/// at least `mu` unordered column pairs. Intended for small `q^r`.
pub fn check_mcf_direct(
    h: &ParityCheckMatrix,
    mu: u64,
    budget: &EnumerationBudget,
) -> Result<bool> {
    let q = h.q() as u64;
    let r = h.r();
    let space_size = q.checked_pow(r).filter(|&s| s <= budget.max_subsets);
    if space_size.is_none() {
        return Err(Error::BudgetExceeded(format!(
            "syndrome space q^r = {q}^{r} exceeds max_subsets {}",
            budget.max_subsets
        )));
    }
    let field = h.field();
    let canon_cols: Vec<Vec<FieldElement>> = h
        .cols()
        .iter()
        .map(|c| canonical_column(field, c))
        .collect::<Result<_>>()?;
    for s in canonical_points(field, r) {
        if canon_cols.contains(&s) {
            continue; // syndromes of S itself are exempt
        }
        let mut m = 0u64;
        for i in 0..canon_cols.len() {
            for j in (i + 1)..canon_cols.len() {
                if in_span(field, &canon_cols[i], &canon_cols[j], &s) {
                    m += 1;
                }
            }
        }
        if m < mu {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All canonical representatives of the projective points of `GF(q)^r`.
fn canonical_points(field: &FieldSpec, r: u32) -> Vec<Vec<FieldElement>> {
    let q = field.q() as u64;
    let r = r as usize;
    let mut out = Vec::new();
    for lead in (0..r).rev() {
        let tail = r - lead - 1;
        let count = q.pow(tail as u32);
        for t in 0..count {
            let mut v = t;
            let mut point = vec![FieldElement(0); r];
            point[lead] = FieldElement(1);
            for j in (0..tail).rev() {
                point[lead + 1 + j] = FieldElement((v % q) as u32);
                v /= q;
            }
            out.push(point);
        }
    }
    out
}

/// Whether `s` lies in the span of two independent columns, via Gaussian
/// elimination on the r x 3 matrix `[a b s]`.
fn in_span(field: &FieldSpec, a: &[FieldElement], b: &[FieldElement], s: &[FieldElement]) -> bool {
    let r = a.len();
    let mut rows: Vec<[FieldElement; 3]> = (0..r).map(|i| [a[i], b[i], s[i]]).collect();
    let mut rank = 0usize;
    for col in 0..3 {
        let Some(pivot) = (rank..r).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field.inv(rows[rank][col]).expect("nonzero pivot");
        for cell in rows[rank][col..].iter_mut() {
            *cell = field.mul(*cell, inv);
        }
        let pivot_row = rows[rank];
        for row in rows[(rank + 1)..].iter_mut() {
            let factor = row[col];
            if !factor.is_zero() {
                for (c, cell) in row.iter_mut().enumerate().skip(col) {
                    *cell = field.sub(*cell, field.mul(factor, pivot_row[c]));
                }
            }
        }
        rank += 1;
    }
    // a, b are distinct projective points, so rank([a b]) = 2; s in span
    // exactly when adding it does not raise the rank.
    rank == 2
}

/// One cell of the length-function bound table.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct LengthTableRow {
    pub q: u32,
    pub mu: u32,
    pub n_dim: u32,
    pub bound: Option<f64>,
    pub valid: bool,
    pub invalid_reason: Option<String>,
    pub prior_bound: Option<f64>,
    pub improves: Option<bool>,
}

/// Upper bounds on `l_mu(2, N+1, q)` over the given ranges, with validity
/// flags and prior-bound comparison columns.
pub fn length_function_table(qs: &[u32], mus: &[u32], n_dims: &[u32]) -> Vec<LengthTableRow> {
    let mut rows = Vec::new();
    for &q in qs {
        for &mu in mus {
            for &n_dim in n_dims {
                let (bound, invalid_reason) = if n_dim == 2 {
                    if mu == 1 {
                        (Some(theorem1_bound(q)), None)
                    } else {
                        match d_closed(q, mu) {
                            Ok(d) => {
                                let q1 = q as f64 + 1.0;
                                (Some(2.0 * d.value * (q1 * q1.ln()).sqrt() + 2.0), None)
                            }
                            Err(e) => (None, Some(e.to_string())),
                        }
                    }
                } else {
                    match space_bounds(n_dim, q, mu) {
                        Ok(v) => (Some(v), None),
                        Err(e) => (None, Some(e.to_string())),
                    }
                };
                // Prior bounds are stated for the plane only.
                let (prior_bound, improves) = if n_dim == 2 {
                    let cmp = comparison_bounds(q, mu);
                    let prior = if mu == 1 {
                        Some(cmp.prior_3sqrt2)
                    } else if cmp.prior_66_applicable {
                        Some(cmp.prior_66sqrt)
                    } else {
                        None
                    };
                    let improves = match (bound, prior) {
                        (Some(b), Some(p)) => Some(b < p),
                        _ => None,
                    };
                    (prior, improves)
                } else {
                    (None, None)
                };
                rows.push(LengthTableRow {
                    q,
                    mu,
                    n_dim,
                    bound,
                    valid: invalid_reason.is_none(),
                    invalid_reason,
                    prior_bound,
                    improves,
                });
            }
        }
    }
    rows
}

/// Stable CSV rendering of the table: `q,mu,N,bound,valid,prior_bound,improves`.
pub fn write_length_table_csv(rows: &[LengthTableRow], mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "q,mu,N,bound,valid,prior_bound,improves")?;
    for row in rows {
        let fmt_f = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.6}"));
        let fmt_b = |v: Option<bool>| v.map_or(String::new(), |x| x.to_string());
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            row.q,
            row.mu,
            row.n_dim,
            fmt_f(row.bound),
            row.valid,
            fmt_f(row.prior_bound),
            fmt_b(row.improves)
        )?;
    }
    Ok(())
}
