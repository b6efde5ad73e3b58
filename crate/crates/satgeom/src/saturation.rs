//! Saturation verifiers and exact coverage multiplicities.
//!
//! A point `Q` outside `S` is covered with multiplicity
//! `m(Q) = sum over lines l through Q of C(|l ∩ S|, 2)`; `S` is
//! `(1,mu)`-saturating when `m(Q) >= mu` for every external `Q`, and plain
//! saturating for `mu = 1`. Points of `S` itself need no coverage.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::geometry::{IncidencePlane, ProjectiveSpace};
use crate::{Error, Result};

/// A sorted duplicate-free set of point indices tied to one geometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    geometry: String,
    indices: Vec<u32>,
}

impl PointSet {
    /// Sorts the indices and validates range and uniqueness.
    pub fn new(geometry: impl Into<String>, mut indices: Vec<u32>, point_count: u64) -> Result<Self> {
        indices.sort_unstable();
        for pair in indices.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::PreconditionFailed(format!(
                    "duplicate point index {}",
                    pair[0]
                )));
            }
        }
        if let Some(&last) = indices.last() {
            if last as u64 >= point_count {
                return Err(Error::InvalidRange(format!(
                    "point index {last} outside geometry of {point_count} points"
                )));
            }
        }
        Ok(PointSet {
            geometry: geometry.into(),
            indices,
        })
    }

    pub fn geometry(&self) -> &str {
        &self.geometry
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, p: u32) -> bool {
        self.indices.binary_search(&p).is_ok()
    }

    /// File format: `geometry <hash-or-name>` then one line of ascending
    /// indices, space-separated.
    pub fn write(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "geometry {}", self.geometry)?;
        let row: Vec<String> = self.indices.iter().map(|p| p.to_string()).collect();
        writeln!(w, "{}", row.join(" "))?;
        Ok(())
    }

    pub fn load(reader: impl BufRead, point_count: u64) -> Result<Self> {
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
        if rows.is_empty() {
            return Err(Error::ParseError {
                line: 1,
                msg: "empty point-set file".into(),
            });
        }
        let (hline, header) = &rows[0];
        let geometry = header
            .strip_prefix("geometry ")
            .ok_or(Error::ParseError {
                line: *hline,
                msg: "expected `geometry <id>`".into(),
            })?
            .trim()
            .to_string();
        let mut indices = Vec::new();
        for (line_no, row) in &rows[1..] {
            for tok in row.split_whitespace() {
                indices.push(tok.parse().map_err(|_| Error::ParseError {
                    line: *line_no,
                    msg: format!("bad point index `{tok}`"),
                })?);
            }
        }
        PointSet::new(geometry, indices, point_count)
    }
}

/// Exact coverage multiplicity of every point of the geometry.
#[derive(Clone, Debug)]
pub struct CoverageProfile {
    geometry: String,
    m: Vec<u64>,
    in_set: Vec<bool>,
}

impl CoverageProfile {
    pub fn geometry(&self) -> &str {
        &self.geometry
    }

    /// `m(Q)`, the secant multiplicity through point `Q`.
    pub fn multiplicity(&self, q: u32) -> u64 {
        self.m[q as usize]
    }

    pub fn in_set(&self, q: u32) -> bool {
        self.in_set[q as usize]
    }

    pub fn point_count(&self) -> u32 {
        self.m.len() as u32
    }

    /// Least-index external point with `m(Q) < mu`, if any.
    pub fn first_deficient(&self, mu: u64) -> Option<UncoveredWitness> {
        for q in 0..self.m.len() {
            if !self.in_set[q] && self.m[q] < mu {
                return Some(UncoveredWitness {
                    point: q as u32,
                    multiplicity: self.m[q],
                    deficit: mu - self.m[q],
                });
            }
        }
        None
    }
}

/// Outcome of a saturation check; `witness` is the least-index uncovered
/// point when the check fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationCheck {
    pub saturating: bool,
    pub witness: Option<UncoveredWitness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UncoveredWitness {
    pub point: u32,
    pub multiplicity: u64,
    pub deficit: u64,
}

fn check_geometry(expected: &str, set: &PointSet) -> Result<()> {
    if set.geometry() != expected {
        return Err(Error::GeometryMismatch {
            set: set.geometry().to_string(),
            expected: expected.to_string(),
        });
    }
    Ok(())
}

/// Computes `m(Q)` for every point: per-line intersection sizes are counted
/// once by walking the pencils of the set's points, then each `r`-secant
/// adds `C(r,2)` to all of its points.
pub fn coverage_profile(plane: &IncidencePlane, set: &PointSet) -> Result<CoverageProfile> {
    check_geometry(plane.geometry_id(), set)?;
    let n = plane.point_count() as usize;
    let mut line_count = vec![0u32; n];
    let mut touched: Vec<u32> = Vec::new();
    for &p in set.indices() {
        for &l in plane.lines_through(p) {
            if line_count[l as usize] == 0 {
                touched.push(l);
            }
            line_count[l as usize] += 1;
        }
    }
    let mut m = vec![0u64; n];
    for &l in &touched {
        let r = line_count[l as usize] as u64;
        if r >= 2 {
            let weight = r * (r - 1) / 2;
            for &p in plane.line(l) {
                m[p as usize] += weight;
            }
        }
    }
    let mut in_set = vec![false; n];
    for &p in set.indices() {
        in_set[p as usize] = true;
    }
    Ok(CoverageProfile {
        geometry: plane.geometry_id().to_string(),
        m,
        in_set,
    })
}

/// True iff every point outside `S` lies on a secant of `S`.
pub fn is_saturating(plane: &IncidencePlane, set: &PointSet) -> Result<SaturationCheck> {
    is_mu_saturating(plane, set, 1)
}

/// True iff every point outside `S` has `m(Q) >= mu`.
pub fn is_mu_saturating(plane: &IncidencePlane, set: &PointSet, mu: u64) -> Result<SaturationCheck> {
    if mu < 1 {
        return Err(Error::InvalidRange("mu must be at least 1".into()));
    }
    let profile = coverage_profile(plane, set)?;
    let witness = profile.first_deficient(mu);
    Ok(SaturationCheck {
        saturating: witness.is_none(),
        witness,
    })
}

/// `(1,mu)`-saturation in `PG(N,q)`.
///
/// Lines are materialized from unordered pairs of `S`; a line spanned by
/// several pairs is aggregated once, with the pair count per line being
/// exactly `C(|l ∩ S|, 2)`.
pub fn is_saturating_space(
    space: &ProjectiveSpace,
    set: &PointSet,
    mu: u64,
) -> Result<SaturationCheck> {
    if mu < 1 {
        return Err(Error::InvalidRange("mu must be at least 1".into()));
    }
    check_geometry(space.geometry_id(), set)?;
    let theta = space.point_count();
    // Two distinct lines share at most one point, so the two smallest
    // indices key a line uniquely.
    let mut by_line: HashMap<(u32, u32), (Vec<u32>, u64)> = HashMap::new();
    let pts = set.indices();
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            let line = space.line_points(a as u64, b as u64)?;
            let key = (line[0], line[1]);
            let entry = by_line.entry(key).or_insert_with(|| (line, 0));
            entry.1 += 1;
        }
    }
    let mut m = vec![0u64; theta as usize];
    for (line, pairs) in by_line.values() {
        for &p in line {
            m[p as usize] += pairs;
        }
    }
    let mut in_set = vec![false; theta as usize];
    for &p in pts {
        in_set[p as usize] = true;
    }
    let profile = CoverageProfile {
        geometry: space.geometry_id().to_string(),
        m,
        in_set,
    };
    let witness = profile.first_deficient(mu);
    Ok(SaturationCheck {
        saturating: witness.is_none(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::io::Cursor;

    fn plane(q: u32) -> IncidencePlane {
        let (p, m) = crate::gf::prime_power(q as u64).unwrap();
        IncidencePlane::generate(&FieldSpec::new(p, m).unwrap()).unwrap()
    }

    fn set(plane: &IncidencePlane, idx: &[u32]) -> PointSet {
        PointSet::new(plane.geometry_id(), idx.to_vec(), plane.point_count() as u64).unwrap()
    }

    #[test]
    fn empty_set_has_zero_coverage() {
        let pl = plane(3);
        let s = set(&pl, &[]);
        let cov = coverage_profile(&pl, &s).unwrap();
        for p in 0..pl.point_count() {
            assert_eq!(cov.multiplicity(p), 0);
            assert!(!cov.in_set(p));
        }
        assert!(!is_saturating(&pl, &s).unwrap().saturating);
    }

    #[test]
    fn a_full_line_saturates_nothing() {
        for q in [2u32, 3, 4] {
            let pl = plane(q);
            let line_pts = pl.line(0).to_vec();
            let s = set(&pl, &line_pts);
            let cov = coverage_profile(&pl, &s).unwrap();
            for p in 0..pl.point_count() {
                if s.contains(p) {
                    assert!(cov.in_set(p));
                } else {
                    // Every line through an external point meets the full
                    // line exactly once.
                    assert_eq!(cov.multiplicity(p), 0, "q={q} point {p}");
                }
            }
            let check = is_saturating(&pl, &s).unwrap();
            assert!(!check.saturating);
            let expected_witness = (0..pl.point_count()).find(|&p| !s.contains(p)).unwrap();
            assert_eq!(check.witness.unwrap().point, expected_witness);
        }
    }

    /// The complement of a line in the Fano plane is a 4-arc.
    fn fano_arc(pl: &IncidencePlane) -> PointSet {
        let on_line: Vec<u32> = pl.line(0).to_vec();
        let rest: Vec<u32> = (0..7).filter(|p| !on_line.contains(p)).collect();
        set(pl, &rest)
    }

    #[test]
    fn fano_quadrangle_covers_everything_twice() {
        let pl = plane(2);
        let arc = fano_arc(&pl);
        assert_eq!(arc.len(), 4);
        let cov = coverage_profile(&pl, &arc).unwrap();
        for p in 0..7 {
            if !arc.contains(p) {
                assert_eq!(cov.multiplicity(p), 2, "external point {p}");
            }
        }
        assert!(is_saturating(&pl, &arc).unwrap().saturating);
        assert!(is_mu_saturating(&pl, &arc, 2).unwrap().saturating);
        let three = is_mu_saturating(&pl, &arc, 3).unwrap();
        assert!(!three.saturating);
        assert_eq!(three.witness.unwrap().deficit, 1);
    }

    #[test]
    fn full_plane_is_vacuously_saturating() {
        let pl = plane(2);
        let all = set(&pl, &(0..7).collect::<Vec<_>>());
        assert!(is_saturating(&pl, &all).unwrap().saturating);
        assert!(is_mu_saturating(&pl, &all, 99).unwrap().saturating);
    }

    #[test]
    fn three_secant_counts_three() {
        // A 3-secant contributes C(3,2) = 3 to each of its external points.
        let pl = plane(4);
        let line = pl.line(7);
        let s = set(&pl, &line[..3]);
        let cov = coverage_profile(&pl, &s).unwrap();
        for &p in &line[3..] {
            assert_eq!(cov.multiplicity(p), 3);
        }
        assert!(is_mu_saturating(&pl, &s, 3).unwrap().witness.is_some());
    }

    #[test]
    fn mu_one_equals_plain_saturation() {
        let pl = plane(3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let k = rng.random_range(0..8);
            let mut idx: Vec<u32> = (0..13).collect();
            for i in 0..k {
                let j = rng.random_range(i..13);
                idx.swap(i as usize, j as usize);
            }
            let s = set(&pl, &idx[..k as usize]);
            assert_eq!(
                is_saturating(&pl, &s).unwrap(),
                is_mu_saturating(&pl, &s, 1).unwrap()
            );
        }
    }

    #[test]
    fn per_line_contribution_matches_definition() {
        // For each line l, exactly q+1-|l ∩ S| external points receive its
        // C(|l ∩ S|,2) contribution; checked via a naive per-point recount.
        let pl = plane(3);
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..30 {
            let k = rng.random_range(0..10) as usize;
            let mut idx: Vec<u32> = (0..13).collect();
            for i in 0..k {
                let j = rng.random_range(i as u32..13) as usize;
                idx.swap(i, j);
            }
            let s = set(&pl, &idx[..k]);
            let cov = coverage_profile(&pl, &s).unwrap();
            for p in 0..13u32 {
                let mut naive = 0u64;
                for &l in pl.lines_through(p) {
                    let r = pl.line(l).iter().filter(|&&x| s.contains(x)).count() as u64;
                    naive += if r >= 2 { r * (r - 1) / 2 } else { 0 };
                }
                assert_eq!(cov.multiplicity(p), naive);
            }
        }
    }

    #[test]
    fn coverage_is_monotone_under_chains() {
        let pl = plane(4);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            let mut idx: Vec<u32> = (0..21).collect();
            for i in 0..12u32 {
                let j = rng.random_range(i..21);
                idx.swap(i as usize, j as usize);
            }
            let small = set(&pl, &idx[..6]);
            let large = set(&pl, &idx[..12]);
            let cs = coverage_profile(&pl, &small).unwrap();
            let cl = coverage_profile(&pl, &large).unwrap();
            for p in 0..21 {
                assert!(cs.multiplicity(p) <= cl.multiplicity(p));
            }
        }
    }

    #[test]
    fn exhaustive_small_sets_match_naive_recount() {
        // All subsets of size <= 4 in PG(2,2) and size <= 3 in PG(2,3)
        // (the <=6 sweep of the larger orders lives in the oracle tests).
        for (q, max_k) in [(2u32, 4usize), (3, 3)] {
            let pl = plane(q);
            let n = pl.point_count();
            let mut stack: Vec<u32> = Vec::new();
            exhaustive(&pl, n, max_k, 0, &mut stack);
        }
    }

    fn exhaustive(pl: &IncidencePlane, n: u32, max_k: usize, from: u32, stack: &mut Vec<u32>) {
        let s = set(pl, stack);
        let cov = coverage_profile(pl, &s).unwrap();
        for p in 0..n {
            let mut naive = 0u64;
            for &l in pl.lines_through(p) {
                let r = pl.line(l).iter().filter(|&&x| s.contains(x)).count() as u64;
                naive += if r >= 2 { r * (r - 1) / 2 } else { 0 };
            }
            assert_eq!(cov.multiplicity(p), naive);
        }
        if stack.len() == max_k {
            return;
        }
        for p in from..n {
            stack.push(p);
            exhaustive(pl, n, max_k, p + 1, stack);
            stack.pop();
        }
    }

    #[test]
    fn geometry_mismatch_is_detected() {
        let pl2 = plane(2);
        let pl3 = plane(3);
        let s = set(&pl3, &[0, 1, 2]);
        assert!(matches!(
            coverage_profile(&pl2, &s),
            Err(Error::GeometryMismatch { .. })
        ));
    }

    #[test]
    fn space_check_agrees_with_plane_check() {
        for q in [2u32, 3, 4] {
            let (p, m) = crate::gf::prime_power(q as u64).unwrap();
            let field = FieldSpec::new(p, m).unwrap();
            let pl = IncidencePlane::generate(&field).unwrap();
            let sp = ProjectiveSpace::build(&field, 2).unwrap();
            let n = pl.point_count();
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + q as u64);
            for _ in 0..100 {
                let k = rng.random_range(2..(n / 2).max(3));
                let mut idx: Vec<u32> = (0..n).collect();
                for i in 0..k {
                    let j = rng.random_range(i..n);
                    idx.swap(i as usize, j as usize);
                }
                let chosen = &idx[..k as usize];
                let s_pl = set(&pl, chosen);
                let s_sp =
                    PointSet::new(sp.geometry_id(), chosen.to_vec(), sp.point_count()).unwrap();
                for mu in 1..=3u64 {
                    assert_eq!(
                        is_mu_saturating(&pl, &s_pl, mu).unwrap().saturating,
                        is_saturating_space(&sp, &s_sp, mu).unwrap().saturating,
                        "q={q} mu={mu} set {chosen:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn space_check_matches_direct_recount_in_pg3_2() {
        let field = FieldSpec::new(2, 1).unwrap();
        let sp = ProjectiveSpace::build(&field, 3).unwrap();
        // Four points in general position spanning PG(3,2).
        let e0 = sp.index_of(&[1, 0, 0, 0].map(crate::gf::FieldElement));
        let e1 = sp.index_of(&[0, 1, 0, 0].map(crate::gf::FieldElement));
        let e2 = sp.index_of(&[0, 0, 1, 0].map(crate::gf::FieldElement));
        let e3 = sp.index_of(&[0, 0, 0, 1].map(crate::gf::FieldElement));
        let idx: Vec<u32> = vec![e0 as u32, e1 as u32, e2 as u32, e3 as u32];
        let s = PointSet::new(sp.geometry_id(), idx.clone(), sp.point_count()).unwrap();
        // Direct per-definition recount: for each Q, enumerate the lines
        // through Q (via all other points, deduplicated) and add C(r,2).
        for mu in 1..=3u64 {
            let check = is_saturating_space(&sp, &s, mu).unwrap();
            let mut all_ok = true;
            let mut first_bad = None;
            for qpt in 0..sp.point_count() {
                if idx.contains(&(qpt as u32)) {
                    continue;
                }
                let mut seen: Vec<Vec<u32>> = Vec::new();
                let mut m = 0u64;
                for other in 0..sp.point_count() {
                    if other == qpt {
                        continue;
                    }
                    let line = sp.line_points(qpt, other).unwrap();
                    if seen.contains(&line) {
                        continue;
                    }
                    let r = line
                        .iter()
                        .filter(|&&x| idx.contains(&x))
                        .count() as u64;
                    m += if r >= 2 { r * (r - 1) / 2 } else { 0 };
                    seen.push(line);
                }
                if m < mu && all_ok {
                    all_ok = false;
                    first_bad = Some(qpt as u32);
                }
            }
            assert_eq!(check.saturating, all_ok, "mu={mu}");
            if let Some(w) = check.witness {
                assert_eq!(Some(w.point), first_bad);
            }
        }
    }

    #[test]
    fn full_space_is_saturating() {
        let field = FieldSpec::new(2, 1).unwrap();
        let sp = ProjectiveSpace::build(&field, 3).unwrap();
        let all: Vec<u32> = (0..sp.point_count() as u32).collect();
        let s = PointSet::new(sp.geometry_id(), all, sp.point_count()).unwrap();
        assert!(is_saturating_space(&sp, &s, 5).unwrap().saturating);
    }

    #[test]
    fn point_set_file_round_trip() {
        let pl = plane(3);
        let s = set(&pl, &[7, 2, 11]);
        let mut buf = Vec::new();
        s.write(&mut buf).unwrap();
        let re = PointSet::load(Cursor::new(&buf), pl.point_count() as u64).unwrap();
        assert_eq!(re, s);
        assert_eq!(re.indices(), &[2, 7, 11]);
    }

    #[test]
    fn duplicate_indices_are_rejected() {
        let pl = plane(2);
        assert!(matches!(
            PointSet::new(pl.geometry_id(), vec![1, 1], 7),
            Err(Error::PreconditionFailed(_))
        ));
    }
}
