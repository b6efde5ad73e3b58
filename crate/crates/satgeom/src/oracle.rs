//! Brute-force enumeration oracles.
//!
//! Everything here recomputes quantities from first principles by exhaustive
//! lexicographic enumeration, deliberately independent of the closed-form
//! implementations it cross-checks: exact uncovered probabilities, coverage
//! histograms, minimal saturating-set sizes on tiny planes, and covering
//! radii of parity check matrices.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bounds::binomial;
use crate::codes::ParityCheckMatrix;
use crate::geometry::IncidencePlane;
use crate::gf::FieldElement;
use crate::saturation::{is_mu_saturating, PointSet};
use crate::{Error, Result};

/// Caps on exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnumerationBudget {
    pub max_subsets: u64,
    pub max_seconds: f64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_subsets: 10_000_000,
            max_seconds: 600.0,
        }
    }
}

impl EnumerationBudget {
    fn admit(&self, combinations: &BigUint, what: &str) -> Result<()> {
        if combinations > &BigUint::from(self.max_subsets) {
            return Err(Error::BudgetExceeded(format!(
                "{what} needs {combinations} subsets, cap is {}",
                self.max_subsets
            )));
        }
        Ok(())
    }
}

struct Clock {
    start: Instant,
    limit: f64,
    ticks: u64,
}

impl Clock {
    fn new(limit: f64) -> Self {
        Clock {
            start: Instant::now(),
            limit,
            ticks: 0,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.ticks += 1;
        if self.ticks.is_multiple_of(8192) && self.start.elapsed().as_secs_f64() > self.limit {
            return Err(Error::BudgetExceeded(format!(
                "wall clock limit {}s reached",
                self.limit
            )));
        }
        Ok(())
    }
}

/// Exact uncovered probability by full enumeration: the fraction of all
/// `(w+1)`-subsets under which every line through `a` holds at most one
/// subset point and `a` itself is outside the subset.
pub fn brute_pi(
    plane: &IncidencePlane,
    a: u32,
    w: u32,
    budget: &EnumerationBudget,
) -> Result<BigRational> {
    let n = plane.point_count();
    let k = w as usize + 1;
    let total = binomial(n as u64, k as u64);
    budget.admit(&total, "brute_pi")?;
    // Position of the line through a and p within a's pencil.
    let pencil = pencil_positions(plane, a);
    let mut counts = vec![0u32; plane.lines_through(a).len()];
    let mut clock = Clock::new(budget.max_seconds);
    let mut good = BigUint::zero();
    // State: how many chosen points already share a line through a with
    // another choice (bad > 0), and whether a itself was chosen.
    #[allow(clippy::too_many_arguments)]
    fn rec(
        plane: &IncidencePlane,
        pencil: &[usize],
        a: u32,
        counts: &mut [u32],
        bad: &mut u32,
        has_a: bool,
        next: u32,
        remaining: usize,
        clock: &mut Clock,
        good: &mut BigUint,
    ) -> Result<()> {
        if remaining == 0 {
            clock.tick()?;
            if !has_a && *bad == 0 {
                *good += BigUint::one();
            }
            return Ok(());
        }
        let n = plane.point_count();
        for p in next..=(n - remaining as u32) {
            if p == a {
                rec(plane, pencil, a, counts, bad, true, p + 1, remaining - 1, clock, good)?;
                continue;
            }
            let pos = pencil[p as usize];
            counts[pos] += 1;
            if counts[pos] == 2 {
                *bad += 1;
            }
            rec(plane, pencil, a, counts, bad, has_a, p + 1, remaining - 1, clock, good)?;
            if counts[pos] == 2 {
                *bad -= 1;
            }
            counts[pos] -= 1;
        }
        Ok(())
    }
    let mut bad = 0u32;
    rec(
        plane, &pencil, a, &mut counts, &mut bad, false, 0, k, &mut clock, &mut good,
    )?;
    Ok(BigRational::new(BigInt::from(good), BigInt::from(total)))
}

/// Histogram of the exact coverage multiplicity `m(a)` over every
/// `(w+1)`-subset avoiding `a`. The histogram totals `C(q^2+q, w+1)`.
pub fn brute_t(
    plane: &IncidencePlane,
    a: u32,
    w: u32,
    budget: &EnumerationBudget,
) -> Result<BTreeMap<u64, BigUint>> {
    let n = plane.point_count();
    let k = w as usize + 1;
    let total = binomial(n as u64 - 1, k as u64);
    budget.admit(&total, "brute_t")?;
    let pencil = pencil_positions(plane, a);
    // Points other than a, in ascending order.
    let pool: Vec<u32> = (0..n).filter(|&p| p != a).collect();
    let mut counts = vec![0u32; plane.lines_through(a).len()];
    let mut histogram: BTreeMap<u64, BigUint> = BTreeMap::new();
    let mut clock = Clock::new(budget.max_seconds);
    #[allow(clippy::too_many_arguments)]
    fn rec(
        pool: &[u32],
        pencil: &[usize],
        counts: &mut [u32],
        m: &mut u64,
        next: usize,
        remaining: usize,
        clock: &mut Clock,
        histogram: &mut BTreeMap<u64, BigUint>,
    ) -> Result<()> {
        if remaining == 0 {
            clock.tick()?;
            *histogram.entry(*m).or_default() += BigUint::one();
            return Ok(());
        }
        for i in next..=(pool.len() - remaining) {
            let pos = pencil[pool[i] as usize];
            // Adding a point to a line holding c points raises m(a) by c.
            *m += counts[pos] as u64;
            counts[pos] += 1;
            rec(pool, pencil, counts, m, i + 1, remaining - 1, clock, histogram)?;
            counts[pos] -= 1;
            *m -= counts[pos] as u64;
        }
        Ok(())
    }
    let mut m = 0u64;
    rec(
        &pool, &pencil, &mut counts, &mut m, 0, k, &mut clock, &mut histogram,
    )?;
    Ok(histogram)
}

fn pencil_positions(plane: &IncidencePlane, a: u32) -> Vec<usize> {
    let lines = plane.lines_through(a);
    let mut pos = vec![usize::MAX; plane.point_count() as usize];
    for (i, &l) in lines.iter().enumerate() {
        for &p in plane.line(l) {
            if p != a {
                pos[p as usize] = i;
            }
        }
    }
    pos
}

#[derive(Clone, Debug)]
pub struct MinSaturating {
    pub size: u32,
    pub witness: PointSet,
    pub subsets_checked: u64,
}

/// Smallest `(1,mu)`-saturating set, found by checking `k`-subsets in
/// lexicographic order for `k = 1, 2, ..`; exact on planes of order <= 5.
pub fn brute_min_saturating(
    plane: &IncidencePlane,
    mu: u64,
    budget: &EnumerationBudget,
) -> Result<MinSaturating> {
    if plane.q() > 5 {
        return Err(Error::BudgetExceeded(format!(
            "minimal-set search is capped at plane order 5, got {}",
            plane.q()
        )));
    }
    let n = plane.point_count();
    let start = Instant::now();
    let mut checked = 0u64;
    for k in 1..=n {
        let mut stack: Vec<u32> = Vec::with_capacity(k as usize);
        if let Some(witness) = search(plane, mu, n, k, 0, &mut stack, &mut checked, budget, &start)?
        {
            return Ok(MinSaturating {
                size: k,
                witness,
                subsets_checked: checked,
            });
        }
    }
    unreachable!("the full point set is vacuously saturating");
}

#[allow(clippy::too_many_arguments)]
fn search(
    plane: &IncidencePlane,
    mu: u64,
    n: u32,
    k: u32,
    next: u32,
    stack: &mut Vec<u32>,
    checked: &mut u64,
    budget: &EnumerationBudget,
    start: &Instant,
) -> Result<Option<PointSet>> {
    if stack.len() == k as usize {
        *checked += 1;
        if *checked > budget.max_subsets {
            return Err(Error::BudgetExceeded(format!(
                "checked {checked} candidate sets, cap is {}",
                budget.max_subsets
            )));
        }
        if (*checked).is_multiple_of(8192) && start.elapsed().as_secs_f64() > budget.max_seconds {
            return Err(Error::BudgetExceeded(format!(
                "wall clock limit {}s reached",
                budget.max_seconds
            )));
        }
        let set = PointSet::new(plane.geometry_id(), stack.clone(), n as u64)?;
        if is_mu_saturating(plane, &set, mu)?.saturating {
            return Ok(Some(set));
        }
        return Ok(None);
    }
    let remaining = k as usize - stack.len();
    for p in next..=(n - remaining as u32) {
        stack.push(p);
        let hit = search(plane, mu, n, k, p + 1, stack, checked, budget, start)?;
        stack.pop();
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

/// Covering radius of the code with parity check matrix `h`: the maximum
/// over syndromes of the least number of columns (with nonzero scalar
/// coefficients) summing to the syndrome, capped at 3.
pub fn brute_covering_radius(h: &ParityCheckMatrix, budget: &EnumerationBudget) -> Result<u32> {
    let q = h.q() as u64;
    let r = h.r();
    let size = q
        .checked_pow(r)
        .filter(|&s| s <= budget.max_subsets)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "syndrome space q^r = {q}^{r} exceeds max_subsets {}",
                budget.max_subsets
            ))
        })?;
    let field = h.field();
    let encode = |v: &[FieldElement]| -> usize {
        v.iter()
            .rev()
            .fold(0usize, |acc, c| acc * q as usize + c.value() as usize)
    };
    let mut dist = vec![3u8; size as usize];
    dist[0] = 0;
    let n = h.n() as usize;
    let mut scaled: Vec<Vec<Vec<FieldElement>>> = Vec::with_capacity(n);
    for j in 0..n {
        let col = h.col(j as u32);
        let mut per_alpha = Vec::with_capacity(q as usize - 1);
        for alpha in 1..h.q() {
            let s: Vec<FieldElement> = col
                .iter()
                .map(|&c| field.mul(c, FieldElement(alpha)))
                .collect();
            let idx = encode(&s);
            if dist[idx] > 1 {
                dist[idx] = 1;
            }
            per_alpha.push(s);
        }
        scaled.push(per_alpha);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for si in &scaled[i] {
                for sj in &scaled[j] {
                    let sum: Vec<FieldElement> = si
                        .iter()
                        .zip(sj)
                        .map(|(&x, &y)| field.add(x, y))
                        .collect();
                    let idx = encode(&sum);
                    if dist[idx] > 2 {
                        dist[idx] = 2;
                    }
                }
            }
        }
    }
    Ok(*dist.iter().max().unwrap() as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{pi_exact, t_count, theorem1_bound};
    use crate::codes::export_parity_check;
    use crate::gf::FieldSpec;
    use crate::saturation::is_saturating;

    fn plane(q: u32) -> IncidencePlane {
        let (p, m) = crate::gf::prime_power(q as u64).unwrap();
        IncidencePlane::generate(&FieldSpec::new(p, m).unwrap()).unwrap()
    }

    fn ratio(n: u64, d: u64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn fano_pair_probability() {
        let pl = plane(2);
        let budget = EnumerationBudget::default();
        // Of the 21 pairs, 12 leave a fixed point uncovered: 4/7.
        for a in 0..7 {
            assert_eq!(brute_pi(&pl, a, 1, &budget).unwrap(), ratio(12, 21));
        }
        assert_eq!(brute_pi(&pl, 0, 1, &budget).unwrap(), ratio(4, 7));
    }

    #[test]
    fn fano_triple_probability_matches_formula() {
        let pl = plane(2);
        let budget = EnumerationBudget::default();
        assert_eq!(brute_pi(&pl, 3, 2, &budget).unwrap(), ratio(8, 35));
        assert_eq!(brute_pi(&pl, 3, 2, &budget).unwrap(), pi_exact(2, 2).unwrap());
    }

    #[test]
    fn full_plane_covers_everything() {
        let pl = plane(2);
        let budget = EnumerationBudget::default();
        assert!(brute_pi(&pl, 0, 6, &budget).unwrap().is_zero());
    }

    #[test]
    fn budget_rejects_large_enumerations() {
        let pl = plane(5);
        let tight = EnumerationBudget {
            max_subsets: 100,
            max_seconds: 600.0,
        };
        assert!(matches!(
            brute_pi(&pl, 0, 4, &tight),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn fano_coverage_histogram() {
        let pl = plane(2);
        let budget = EnumerationBudget::default();
        let hist = brute_t(&pl, 0, 2, &budget).unwrap();
        let expect: BTreeMap<u64, BigUint> =
            [(0u64, 8u32), (1, 12)].map(|(m, c)| (m, BigUint::from(c))).into();
        assert_eq!(hist, expect);
    }

    #[test]
    fn single_point_histogram_is_trivial() {
        for q in [2u32, 3] {
            let pl = plane(q);
            let budget = EnumerationBudget::default();
            let hist = brute_t(&pl, 0, 0, &budget).unwrap();
            assert_eq!(hist.len(), 1);
            assert_eq!(hist[&0], BigUint::from(q * q + q));
        }
    }

    #[test]
    fn histogram_matches_t_counts_on_pg2_3() {
        let pl = plane(3);
        let budget = EnumerationBudget::default();
        for w in 0..=5u32 {
            let hist = brute_t(&pl, 7, w, &budget).unwrap();
            let total: BigUint = hist.values().cloned().sum();
            assert_eq!(total, binomial(12, w as u64 + 1));
            for i in 0..=3u32 {
                let counted = hist.get(&(i as u64)).cloned().unwrap_or_default();
                assert_eq!(counted, t_count(3, w, i), "w={w} i={i}");
            }
        }
    }

    #[test]
    fn fano_minimum_is_the_quadrangle() {
        let pl = plane(2);
        let budget = EnumerationBudget::default();
        let found = brute_min_saturating(&pl, 1, &budget).unwrap();
        assert_eq!(found.size, 4);
        assert!(is_saturating(&pl, &found.witness).unwrap().saturating);
        assert!((found.size as f64) <= theorem1_bound(2));
        // Lexicographically first witness is reproducible.
        let again = brute_min_saturating(&pl, 1, &budget).unwrap();
        assert_eq!(found.witness, again.witness);
    }

    #[test]
    fn minimum_size_is_monotone_in_mu() {
        let pl = plane(3);
        let budget = EnumerationBudget::default();
        let s1 = brute_min_saturating(&pl, 1, &budget).unwrap();
        let s2 = brute_min_saturating(&pl, 2, &budget).unwrap();
        assert!(s2.size >= s1.size);
        assert!(is_mu_saturating(&pl, &s2.witness, 2).unwrap().saturating);
    }

    #[test]
    fn oversized_plane_is_rejected() {
        let pl = plane(7);
        let budget = EnumerationBudget::default();
        assert!(matches!(
            brute_min_saturating(&pl, 1, &budget),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn identity_columns_have_radius_three() {
        // Over GF(2), the 3 unit columns reach (1,1,1) only with all three.
        let field = FieldSpec::new(2, 1).unwrap();
        let cols = vec![
            vec![FieldElement(1), FieldElement(0), FieldElement(0)],
            vec![FieldElement(0), FieldElement(1), FieldElement(0)],
            vec![FieldElement(0), FieldElement(0), FieldElement(1)],
        ];
        let h = ParityCheckMatrix::new(field, 3, cols).unwrap();
        let budget = EnumerationBudget::default();
        assert_eq!(brute_covering_radius(&h, &budget).unwrap(), 3);
    }

    #[test]
    fn saturating_set_gives_radius_at_most_two() {
        let pl = plane(3);
        let budget = EnumerationBudget::default();
        let min = brute_min_saturating(&pl, 1, &budget).unwrap();
        let h = export_parity_check(&pl, &min.witness).unwrap();
        assert!(brute_covering_radius(&h, &budget).unwrap() <= 2);
    }

    #[test]
    fn uncovered_witness_forces_radius_three() {
        // A triangle in PG(2,3) spans the space but its three sides cover
        // only 6 of the 10 external points.
        let pl = plane(3);
        let side = pl.line_through(0, 1).unwrap();
        let apex = (0..13).find(|&p| !pl.line(side).contains(&p)).unwrap();
        let set = PointSet::new(pl.geometry_id(), vec![0, 1, apex], 13).unwrap();
        let check = is_saturating(&pl, &set).unwrap();
        assert!(!check.saturating);
        let h = export_parity_check(&pl, &set).unwrap();
        let budget = EnumerationBudget::default();
        assert_eq!(brute_covering_radius(&h, &budget).unwrap(), 3);
    }

    #[test]
    fn single_column_cannot_reach_radius_two() {
        let pl = plane(2);
        let set = PointSet::new(pl.geometry_id(), vec![3], 7).unwrap();
        let h = export_parity_check(&pl, &set).unwrap();
        assert_eq!(h.n(), 1);
        let budget = EnumerationBudget::default();
        assert!(brute_covering_radius(&h, &budget).unwrap() >= 2);
    }
}
