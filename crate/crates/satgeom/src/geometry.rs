//! Projective geometries: generated `PG(2,q)`, ingested incidence planes of
//! order `q` (not necessarily Desarguesian), and `PG(N,q)`.
//!
//! Points of a generated plane are enumerated in a fixed canonical order:
//! `(0,0,1)`, then `(0,1,a)` for ascending `a`, then `(1,a,b)` in
//! lexicographic order of `(a,b)`; homogeneous coordinates are canonicalized
//! so the first nonzero coordinate equals 1. Lines are enumerated by the same
//! rule applied to their coefficient triples. This makes every index, file
//! export, and random construction reproducible.

use std::io::{BufRead, Write};

use crate::gf::{FieldElement, FieldSpec};
use crate::{Error, Result};

/// Default cap on the number of points of a generated geometry.
pub const DEFAULT_POINT_CAP: u64 = 1 << 17;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaneSource {
    GeneratedPg2,
    Ingested,
}

/// A projective plane of order `q` given by its point/line incidence.
///
/// Exactly `q^2+q+1` points and lines, `q+1` points per line, `q+1` lines
/// per point, any two distinct points on exactly one common line. These
/// axioms are validated for every constructed instance.
#[derive(Clone, Debug)]
pub struct IncidencePlane {
    q: u32,
    /// Per line, the sorted point indices (length `q+1`).
    lines: Vec<Vec<u32>>,
    /// Per point, the sorted indices of the `q+1` lines through it.
    point_to_lines: Vec<Vec<u32>>,
    field: Option<FieldSpec>,
    source: PlaneSource,
    id: String,
}

impl IncidencePlane {
    /// Builds `PG(2,q)` over the given field under [`DEFAULT_POINT_CAP`].
    pub fn generate(field: &FieldSpec) -> Result<Self> {
        Self::generate_with_cap(field, DEFAULT_POINT_CAP)
    }

    pub fn generate_with_cap(field: &FieldSpec, cap: u64) -> Result<Self> {
        let q = field.q();
        let n = q as u64 * q as u64 + q as u64 + 1;
        if n > cap {
            return Err(Error::FieldTooLarge { q: q as u64, cap });
        }
        let n = n as u32;
        let mut lines: Vec<Vec<u32>> = Vec::with_capacity(n as usize);
        for line_idx in 0..n {
            let coeff = plane_coords(q, line_idx);
            let mut pts = line_point_indices(field, coeff)?;
            pts.sort_unstable();
            lines.push(pts);
        }
        let point_to_lines = validate_axioms(q, &lines)?;
        Ok(IncidencePlane {
            q,
            lines,
            point_to_lines,
            field: Some(field.clone()),
            source: PlaneSource::GeneratedPg2,
            id: format!("pg(2,{q})"),
        })
    }

    /// Reads a plane from the text format and validates all axioms.
    ///
    /// Format: header `q <q> points <P> lines <L>`, then `L` lines each
    /// holding the `q+1` ascending point indices of one line; `#` starts a
    /// comment.
    pub fn load(reader: impl BufRead) -> Result<Self> {
        let mut rows: Vec<(usize, String)> = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let content = match line.split_once('#') {
                Some((before, _)) => before,
                None => line.as_str(),
            };
            let content = content.trim();
            if !content.is_empty() {
                rows.push((i + 1, content.to_string()));
            }
        }
        let (header_line, header) = rows.first().ok_or(Error::ParseError {
            line: 1,
            msg: "empty plane file".into(),
        })?;
        let tokens: Vec<&str> = header.split_whitespace().collect();
        let parse_err = |msg: &str| Error::ParseError {
            line: *header_line,
            msg: msg.into(),
        };
        if tokens.len() != 6 || tokens[0] != "q" || tokens[2] != "points" || tokens[4] != "lines" {
            return Err(parse_err("expected header `q <q> points <P> lines <L>`"));
        }
        let q: u32 = tokens[1].parse().map_err(|_| parse_err("bad q"))?;
        let p_count: u64 = tokens[3].parse().map_err(|_| parse_err("bad point count"))?;
        let l_count: u64 = tokens[5].parse().map_err(|_| parse_err("bad line count"))?;
        let n = q as u64 * q as u64 + q as u64 + 1;
        if p_count != n {
            return Err(Error::AxiomViolation {
                which: "point count".into(),
                witness: format!("header says {p_count} points, order {q} needs {n}"),
            });
        }
        if l_count != n {
            return Err(Error::AxiomViolation {
                which: "line count".into(),
                witness: format!("header says {l_count} lines, order {q} needs {n}"),
            });
        }
        let mut lines: Vec<Vec<u32>> = Vec::with_capacity(n as usize);
        for (line_no, row) in &rows[1..] {
            let mut pts = Vec::with_capacity(q as usize + 1);
            for tok in row.split_whitespace() {
                let v: u32 = tok.parse().map_err(|_| Error::ParseError {
                    line: *line_no,
                    msg: format!("bad point index `{tok}`"),
                })?;
                pts.push(v);
            }
            lines.push(pts);
        }
        if lines.len() as u64 != n {
            return Err(Error::ParseError {
                line: rows.last().map(|r| r.0).unwrap_or(1),
                msg: format!("expected {n} line rows, found {}", lines.len()),
            });
        }
        let point_to_lines = validate_axioms(q, &lines)?;
        let id = format!("plane(q={q};{:016x})", incidence_hash(&lines));
        Ok(IncidencePlane {
            q,
            lines,
            point_to_lines,
            field: None,
            source: PlaneSource::Ingested,
            id,
        })
    }

    /// Writes the plane file format; line rows are emitted in lexicographic
    /// order so output is canonical regardless of internal order.
    pub fn write(&self, mut w: impl Write) -> std::io::Result<()> {
        let n = self.point_count();
        writeln!(w, "q {} points {} lines {}", self.q, n, n)?;
        let mut sorted = self.lines.clone();
        sorted.sort_unstable();
        for line in &sorted {
            let row: Vec<String> = line.iter().map(|p| p.to_string()).collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        Ok(())
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn point_count(&self) -> u32 {
        self.lines.len() as u32
    }

    pub fn line_count(&self) -> u32 {
        self.lines.len() as u32
    }

    /// Sorted point indices of line `l`.
    pub fn line(&self, l: u32) -> &[u32] {
        &self.lines[l as usize]
    }

    /// Sorted indices of the `q+1` lines through point `p`.
    pub fn lines_through(&self, p: u32) -> &[u32] {
        &self.point_to_lines[p as usize]
    }

    pub fn source(&self) -> PlaneSource {
        self.source
    }

    /// The field, present only for generated planes.
    pub fn field(&self) -> Option<&FieldSpec> {
        self.field.as_ref()
    }

    /// Stable identifier used to tie point sets to their geometry.
    pub fn geometry_id(&self) -> &str {
        &self.id
    }

    /// Canonical homogeneous coordinates of a point (generated planes only).
    pub fn point_coords(&self, p: u32) -> Option<[FieldElement; 3]> {
        self.field.as_ref().map(|_| plane_coords(self.q, p))
    }

    /// Index of the canonical coordinate triple (generated planes only).
    pub fn index_of_coords(&self, coords: [FieldElement; 3]) -> Option<u32> {
        self.field.as_ref().map(|_| plane_index(self.q, coords))
    }

    /// The unique line through two distinct points.
    pub fn line_through(&self, p: u32, r: u32) -> Result<u32> {
        if p == r {
            return Err(Error::SamePoint(p));
        }
        let a = self.lines_through(p);
        let b = self.lines_through(r);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return Ok(a[i]),
            }
        }
        // Unreachable on a validated plane.
        Err(Error::AxiomViolation {
            which: "two points on a common line".into(),
            witness: format!("points {p}, {r}"),
        })
    }
}

/// Canonical coordinates of the point (or line coefficient triple) with the
/// given index in the fixed enumeration order.
pub fn plane_coords(q: u32, index: u32) -> [FieldElement; 3] {
    if index == 0 {
        [FieldElement(0), FieldElement(0), FieldElement(1)]
    } else if index <= q {
        [FieldElement(0), FieldElement(1), FieldElement(index - 1)]
    } else {
        let rest = index - 1 - q;
        [FieldElement(1), FieldElement(rest / q), FieldElement(rest % q)]
    }
}

/// Inverse of [`plane_coords`]; input must be canonical.
pub fn plane_index(q: u32, coords: [FieldElement; 3]) -> u32 {
    let [x0, x1, x2] = coords;
    if x0.is_zero() {
        if x1.is_zero() {
            debug_assert_eq!(x2, FieldElement(1));
            0
        } else {
            debug_assert_eq!(x1, FieldElement(1));
            1 + x2.value()
        }
    } else {
        debug_assert_eq!(x0, FieldElement(1));
        1 + q + x1.value() * q + x2.value()
    }
}

/// Enumerates the canonical indices of the points on the line with
/// coefficients `c`, i.e. the solutions of `c0*x0 + c1*x1 + c2*x2 = 0`,
/// grouped by the canonical point shapes (0,0,1), (0,1,a), (1,a,b).
fn line_point_indices(field: &FieldSpec, c: [FieldElement; 3]) -> Result<Vec<u32>> {
    let q = field.q();
    let mut pts = Vec::with_capacity(q as usize + 1);
    let [c0, c1, c2] = c;
    if c2.is_zero() {
        pts.push(0);
    }
    if !c2.is_zero() {
        let inv_c2 = field.inv(c2)?;
        // (0,1,a): a = -c1/c2.
        let a = field.neg(field.mul(c1, inv_c2));
        pts.push(1 + a.value());
        // (1,a,b): b = -(c0 + c1*a)/c2 for every a.
        for a in 0..q {
            let num = field.add(c0, field.mul(c1, FieldElement(a)));
            let b = field.neg(field.mul(num, inv_c2));
            pts.push(1 + q + a * q + b.value());
        }
    } else if !c1.is_zero() {
        // No (0,1,a) solution; (1,a,b): a = -c0/c1, b free.
        let a = field.neg(field.mul(c0, field.inv(c1)?));
        for b in 0..q {
            pts.push(1 + q + a.value() * q + b);
        }
    } else {
        // Canonical c with c1 = c2 = 0 is (1,0,0): all (0,1,a), no (1,a,b).
        debug_assert_eq!(c0, FieldElement(1));
        for a in 0..q {
            pts.push(1 + a);
        }
    }
    debug_assert_eq!(pts.len(), q as usize + 1, "line {c:?}");
    Ok(pts)
}

/// Checks every incidence-plane axiom and returns the per-point line lists.
fn validate_axioms(q: u32, lines: &[Vec<u32>]) -> Result<Vec<Vec<u32>>> {
    let n = (q as u64 * q as u64 + q as u64 + 1) as usize;
    if lines.len() != n {
        return Err(Error::AxiomViolation {
            which: "line count".into(),
            witness: format!("{} lines, expected {n}", lines.len()),
        });
    }
    let k = q as usize + 1;
    let mut point_to_lines: Vec<Vec<u32>> = vec![Vec::with_capacity(k); n];
    for (li, line) in lines.iter().enumerate() {
        if line.len() != k {
            return Err(Error::AxiomViolation {
                which: "line size".into(),
                witness: format!("line {li} has {} points, expected {k}", line.len()),
            });
        }
        for pair in line.windows(2) {
            if pair[0] >= pair[1] {
                return Err(Error::AxiomViolation {
                    which: "line point order".into(),
                    witness: format!("line {li} not strictly ascending"),
                });
            }
        }
        for &p in line {
            if p as usize >= n {
                return Err(Error::AxiomViolation {
                    which: "point index range".into(),
                    witness: format!("line {li} references point {p} >= {n}"),
                });
            }
            point_to_lines[p as usize].push(li as u32);
        }
    }
    for (p, ls) in point_to_lines.iter().enumerate() {
        if ls.len() != k {
            return Err(Error::AxiomViolation {
                which: "point degree".into(),
                witness: format!("point {p} lies on {} lines, expected {k}", ls.len()),
            });
        }
    }
    // Any two distinct points on exactly one common line: stamp the co-points
    // of each point; a re-stamp means two common lines, and the count q(q+1)
    // = n-1 then forces full coverage.
    let mut stamp = vec![u32::MAX; n];
    for (p, through) in point_to_lines.iter().enumerate() {
        for &li in through {
            for &r in &lines[li as usize] {
                if r as usize == p {
                    continue;
                }
                if stamp[r as usize] == p as u32 {
                    return Err(Error::AxiomViolation {
                        which: "unique line through two points".into(),
                        witness: format!("points {p}, {r} share two lines"),
                    });
                }
                stamp[r as usize] = p as u32;
            }
        }
    }
    Ok(point_to_lines)
}

fn incidence_hash(lines: &[Vec<u32>]) -> u64 {
    let mut sorted = lines.to_vec();
    sorted.sort_unstable();
    let mut h: u64 = 0xcbf29ce484222325;
    for line in &sorted {
        for &p in line {
            for b in p.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        }
    }
    h
}

/// `PG(N,q)`: canonical point enumeration plus lines through point pairs.
#[derive(Clone, Debug)]
pub struct ProjectiveSpace {
    n_dim: u32,
    field: FieldSpec,
    /// Flattened canonical coordinates, `n_dim + 1` entries per point.
    coords: Vec<FieldElement>,
    theta: u64,
    id: String,
}

impl ProjectiveSpace {
    pub fn build(field: &FieldSpec, n_dim: u32) -> Result<Self> {
        Self::build_with_cap(field, n_dim, DEFAULT_POINT_CAP)
    }

    pub fn build_with_cap(field: &FieldSpec, n_dim: u32, cap: u64) -> Result<Self> {
        if n_dim < 2 {
            return Err(Error::InvalidRange(format!("dimension N={n_dim} < 2")));
        }
        let q = field.q() as u64;
        let mut theta: u64 = 0;
        for _ in 0..=n_dim {
            theta = theta
                .checked_mul(q)
                .and_then(|t| t.checked_add(1))
                .filter(|&t| t <= cap)
                .ok_or(Error::SpaceTooLarge {
                    points: u64::MAX,
                    cap,
                })?;
        }
        let dim = n_dim as usize + 1;
        let mut coords: Vec<FieldElement> = Vec::with_capacity(theta as usize * dim);
        for lead in (0..dim).rev() {
            let tail = dim - lead - 1;
            let block = (q as u128).pow(tail as u32) as u64;
            for t in 0..block {
                let mut v = t;
                let mut point = vec![FieldElement(0); dim];
                point[lead] = FieldElement(1);
                // Big-endian digits of t fill the tail, leftmost major.
                for j in (0..tail).rev() {
                    point[lead + 1 + j] = FieldElement((v % q) as u32);
                    v /= q;
                }
                coords.extend_from_slice(&point);
            }
        }
        debug_assert_eq!(coords.len() as u64, theta * dim as u64);
        Ok(ProjectiveSpace {
            n_dim,
            field: field.clone(),
            coords,
            theta,
            id: format!("pg({n_dim},{})", field.q()),
        })
    }

    pub fn n_dim(&self) -> u32 {
        self.n_dim
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Number of points `(q^(N+1)-1)/(q-1)`.
    pub fn point_count(&self) -> u64 {
        self.theta
    }

    pub fn geometry_id(&self) -> &str {
        &self.id
    }

    pub fn point(&self, index: u64) -> &[FieldElement] {
        let dim = self.n_dim as usize + 1;
        &self.coords[index as usize * dim..(index as usize + 1) * dim]
    }

    /// Index of a canonical coordinate tuple.
    pub fn index_of(&self, point: &[FieldElement]) -> u64 {
        let dim = self.n_dim as usize + 1;
        debug_assert_eq!(point.len(), dim);
        let q = self.q() as u64;
        let lead = point.iter().position(|c| !c.is_zero()).expect("zero tuple");
        debug_assert_eq!(point[lead], FieldElement(1));
        let tail = dim - lead - 1;
        // Points with a later lead come first: (q^tail - 1)/(q - 1) of them.
        let mut start = 0u64;
        let mut pw = 1u64;
        for _ in 0..tail {
            start += pw;
            pw *= q;
        }
        let mut offset = 0u64;
        for j in 0..tail {
            offset = offset * q + point[lead + 1 + j].value() as u64;
        }
        start + offset
    }

    /// Scales a nonzero tuple so its first nonzero coordinate is 1.
    pub fn canonicalize(&self, point: &mut [FieldElement]) -> Result<()> {
        let lead = point
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| Error::InvalidRange("zero coordinate tuple".into()))?;
        if point[lead] != FieldElement(1) {
            let scale = self.field.inv(point[lead])?;
            for c in point.iter_mut() {
                *c = self.field.mul(*c, scale);
            }
        }
        Ok(())
    }

    /// The `q+1` point indices of the line spanned by two distinct points.
    pub fn line_points(&self, a: u64, b: u64) -> Result<Vec<u32>> {
        if a == b {
            return Err(Error::SamePoint(a as u32));
        }
        let dim = self.n_dim as usize + 1;
        let pa: Vec<FieldElement> = self.point(a).to_vec();
        let pb: Vec<FieldElement> = self.point(b).to_vec();
        let mut out = Vec::with_capacity(self.q() as usize + 1);
        out.push(a as u32);
        let mut buf = vec![FieldElement(0); dim];
        for t in self.field.elements() {
            for i in 0..dim {
                buf[i] = self.field.add(self.field.mul(t, pa[i]), pb[i]);
            }
            self.canonicalize(&mut buf)?;
            out.push(self.index_of(&buf) as u32);
        }
        out.sort_unstable();
        debug_assert_eq!(out.len(), self.q() as usize + 1);
        Ok(out)
    }
}
