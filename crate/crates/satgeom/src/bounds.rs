//! Exact and closed-form evaluation of the probabilities, counts, and size
//! bounds behind the random constructions.
//!
//! Exact quantities (`pi_exact`, the `T_i` counts, `pi_mu_exact`, `R_{w,q}`)
//! use arbitrary-precision integers and rationals. Closed forms evaluate in
//! `f64`; threshold decisions within 1% of the boundary are re-checked with
//! [`BigFixed`] arithmetic carrying more than 50 significant digits.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::gf::prime_power;
use crate::highprec::BigFixed;
use crate::{Error, Result};

/// `C(n,k)` as an exact integer, 0 when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut res = BigUint::from(1u32);
    for i in 1..=k {
        res = res * BigUint::from(n - k + i) / BigUint::from(i);
    }
    res
}

/// `C(n,k)` with a possibly negative lower index, which counts nothing.
fn binomial_i(n: u64, k: i64) -> BigUint {
    if k < 0 {
        BigUint::zero()
    } else {
        binomial(n, k as u64)
    }
}

fn plane_points(q: u32) -> u64 {
    let q = q as u64;
    q * q + q + 1
}

/// Exact probability that a fixed point is uncovered by a random
/// `(w+1)`-subset: `q^(w+1) C(q+1,w+1) / C(q^2+q+1,w+1)`.
pub fn pi_exact(q: u32, w: u32) -> Result<BigRational> {
    let n = plane_points(q);
    let k = w as u64 + 1;
    if k > n {
        return Err(Error::InvalidRange(format!(
            "subset size {k} exceeds the {n} points of a plane of order {q}"
        )));
    }
    let num = BigUint::from(q).pow(w + 1) * binomial(q as u64 + 1, k);
    let den = binomial(n, k);
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PiUpper {
    pub value: f64,
    /// Whether `w < (q^2-1)/(q+2)` holds, the condition under which the
    /// exponential really is an upper bound.
    pub valid: bool,
}

/// `e^(-w^2/(2q+2))`, an upper bound on [`pi_exact`] within its range.
pub fn pi_upper(q: u32, w: u32) -> PiUpper {
    let value = (-((w as f64).powi(2)) / (2.0 * q as f64 + 2.0)).exp();
    let valid = (w as u64) * (q as u64 + 2) < (q as u64) * (q as u64) - 1;
    PiUpper { value, valid }
}

/// `2 sqrt((q+1) ln(q+1)) + 2`, the saturating-set size bound.
pub fn theorem1_bound(q: u32) -> f64 {
    let q1 = q as f64 + 1.0;
    2.0 * (q1 * q1.ln()).sqrt() + 2.0
}

/// `1 - (q+1)^(2-2c^2)`, the success-probability bound for scaling `c`.
pub fn theorem2_bound(q: u32, c: f64) -> f64 {
    1.0 - (q as f64 + 1.0).powf(2.0 - 2.0 * c * c)
}

/// `1 / sqrt((q+1) ln(q+1))`.
pub fn delta(q: u32) -> f64 {
    let q1 = q as f64 + 1.0;
    1.0 / (q1 * q1.ln()).sqrt()
}

/// `e^(-w^2/(2q+2) + k(w+1)/(2q(q+1)))`: the uncovered-point bound when the
/// sample must avoid an existing `k`-set. Reduces to [`pi_upper`] at `k = 0`.
pub fn lambda_upper(q: u32, w: u32, k: u32) -> Result<f64> {
    if (w as u64) * (q as u64 + 2) >= (q as u64) * (q as u64) - 1 {
        return Err(Error::InvalidRange(format!(
            "w={w} outside w < (q^2-1)/(q+2) for q={q}"
        )));
    }
    let (qf, wf, kf) = (q as f64, w as f64, k as f64);
    Ok((-wf * wf / (2.0 * qf + 2.0) + kf * (wf + 1.0) / (2.0 * qf * (qf + 1.0))).exp())
}

/// Number of `(w+1)`-subsets avoiding a fixed point `A` that cover `A`
/// exactly `i` times, `i <= 3`, as an exact integer.
///
/// Degenerate parameter ranges (binomials with negative lower index)
/// contribute 0.
pub fn t_count(q: u32, w: u32, i: u32) -> BigUint {
    assert!(i <= 3, "closed-form T_i stops at i = 3");
    let q64 = q as u64;
    let w64 = w as i64;
    let qq = BigUint::from(q);
    // Each term: (lines with 2 or 3 points choose ...) * q^e * C(rest, e)
    // where the free points sit on distinct remaining lines through A.
    let pow_binom = |e: i64, n: u64| -> BigUint {
        if e < 0 {
            BigUint::zero()
        } else {
            qq.pow(e as u32) * binomial_i(n, e)
        }
    };
    match i {
        0 => pow_binom(w64 + 1, q64 + 1),
        1 => binomial(q64 + 1, 1) * binomial(q64, 2) * pow_binom(w64 - 1, q64),
        2 => binomial(q64 + 1, 2) * binomial(q64, 2).pow(2) * pow_binom(w64 - 3, q64 - 1),
        3 => {
            binomial(q64 + 1, 1) * binomial(q64, 3) * pow_binom(w64 - 2, q64)
                + binomial(q64 + 1, 3) * binomial(q64, 2).pow(3) * pow_binom(w64 - 5, q64 - 2)
        }
        _ => unreachable!(),
    }
}

/// `R_{w,q} = T_0 / C(q^2+q+1, w+1)`.
pub fn r_wq(q: u32, w: u32) -> Result<BigRational> {
    pi_exact(q, w)
}

/// Exact probability that a fixed point is not `mu`-covered:
/// `(T_0 + .. + T_{mu-1}) / C(q^2+q+1, w+1)`, for `mu <= 4`.
pub fn pi_mu_exact(q: u32, w: u32, mu: u32) -> Result<BigRational> {
    if !(1..=4).contains(&mu) {
        return Err(Error::UnsupportedMu(mu));
    }
    let n = plane_points(q);
    let k = w as u64 + 1;
    if k > n {
        return Err(Error::InvalidRange(format!(
            "subset size {k} exceeds the {n} points of a plane of order {q}"
        )));
    }
    let mut num = BigUint::zero();
    for i in 0..mu {
        num += t_count(q, w, i);
    }
    Ok(BigRational::new(
        BigInt::from(num),
        BigInt::from(binomial(n, k)),
    ))
}

/// Closed-form upper bound on `(q+1)^2 pi_mu` as a function of the scaling
/// `d > 1`, for `mu in {2,3,4}`. The derivation assumes `w < (q+1)/2`.
pub fn pi_mu_closed(q: u32, d: f64, mu: u32) -> Result<f64> {
    let q1 = q as f64 + 1.0;
    let l = q1.ln();
    let d2 = d * d;
    let base = |num: f64| num / q1.powf(2.0 * d2 - 2.0);
    match mu {
        2 => Ok(base(2.0 + 8.0 * d2 * l)),
        3 => Ok(base(1.0 + 8.0 * d2 * l + 16.0 * d2 * d2 * l * l)),
        4 => {
            let pi3 = base(1.0 + 8.0 * d2 * l + 16.0 * d2 * d2 * l * l);
            let w_hat = d * ((2.0 * q as f64 + 2.0) * 2.0 * l).sqrt();
            let extra = (3.0 * w_hat.powi(3) + w_hat.powi(6) / (6.0 * q1)) / q1.powf(2.0 * d2);
            Ok(pi3 + extra)
        }
        other => Err(Error::UnsupportedMu(other)),
    }
}

/// [`pi_mu_closed`] in fixed-point big arithmetic, with `d = d_num/d_den`.
pub fn pi_mu_closed_hp(q: u32, d_num: i64, d_den: u64, mu: u32) -> Result<BigFixed> {
    if !(2..=4).contains(&mu) {
        return Err(Error::UnsupportedMu(mu));
    }
    let q1 = BigFixed::from_u64(q as u64 + 1);
    let l = q1.ln();
    let d = BigFixed::from_ratio(d_num, d_den);
    let d2 = d.mul(&d);
    let two = BigFixed::from_u64(2);
    let two_d2 = d2.mul(&two);
    // (q+1)^(2d^2-2) = exp((2d^2-2) ln(q+1))
    let denom = two_d2.sub(&two).mul(&l).exp();
    let eight_d2_l = d2.mul(&l).mul_u32(8);
    let pi3_num = BigFixed::one()
        .add(&eight_d2_l)
        .add(&d2.mul(&d2).mul(&l).mul(&l).mul_u32(16));
    let value = match mu {
        2 => two.add(&eight_d2_l).div(&denom),
        3 => pi3_num.div(&denom),
        4 => {
            let pi3 = pi3_num.div(&denom);
            // w_hat = d sqrt((2q+2) ln((q+1)^2))
            let w_hat = d.mul(
                &BigFixed::from_u64(2 * q as u64 + 2)
                    .mul(&l.mul(&two))
                    .sqrt(),
            );
            let w3 = w_hat.powi(3);
            let w6 = w_hat.powi(6);
            let denom_full = two_d2.mul(&l).exp(); // (q+1)^(2d^2)
            let extra = w3
                .mul_u32(3)
                .add(&w6.div(&q1.mul_u32(6)))
                .div(&denom_full);
            pi3.add(&extra)
        }
        _ => unreachable!(),
    };
    Ok(value)
}

/// Result of scanning `(q+1)^2 pi_mu < 1` up to `q_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdScan {
    pub mu: u32,
    pub d: f64,
    pub q_max: u32,
    /// Smallest prime power from which every prime power up to `q_max`
    /// satisfies the inequality.
    pub q_star_prime_power: u32,
    /// Same over all integers `q >= 2`.
    pub q_star_integer: Option<u32>,
    pub last_fail_prime_power: Option<u32>,
    pub last_fail_integer: Option<u32>,
    /// How many boundary cases needed the high-precision recheck.
    pub hp_rechecks: u32,
}

/// Scans all `q <= q_max`, deciding the inequality in `f64` and re-deciding
/// with 50+ digit arithmetic whenever the value lands within 1% of 1.
///
/// `d` is interpreted to three decimal places for the exact recheck.
pub fn threshold_scan(mu: u32, d: f64, q_max: u32) -> Result<ThresholdScan> {
    if !(2..=4).contains(&mu) {
        return Err(Error::UnsupportedMu(mu));
    }
    if q_max < 2 {
        return Err(Error::InvalidRange("q_max must be at least 2".into()));
    }
    let d_num = (d * 1000.0).round() as i64;
    let mut hp_rechecks = 0u32;
    let mut last_fail_integer = None;
    let mut last_fail_prime_power = None;
    let mut any_pp_pass = false;
    for q in 2..=q_max {
        let coarse = pi_mu_closed(q, d, mu)?;
        let satisfied = if (coarse - 1.0).abs() < 0.01 {
            hp_rechecks += 1;
            pi_mu_closed_hp(q, d_num, 1000, mu)? < BigFixed::one()
        } else {
            coarse < 1.0
        };
        let is_pp = prime_power(q as u64).is_some();
        if satisfied {
            if is_pp {
                any_pp_pass = true;
            }
        } else {
            last_fail_integer = Some(q);
            if is_pp {
                last_fail_prime_power = Some(q);
            }
        }
    }
    // q* over prime powers: the first prime power past the last failure.
    let q_star_prime_power = {
        let from = last_fail_prime_power.map_or(2, |f| f + 1);
        (from..=q_max).find(|&q| prime_power(q as u64).is_some())
    };
    let q_star_prime_power = match q_star_prime_power {
        Some(q) if any_pp_pass && last_fail_integer.is_none_or(|f| f < q_max) => q,
        _ => return Err(Error::NotFound(q_max)),
    };
    let q_star_integer = match last_fail_integer {
        Some(f) if f < q_max => Some(f + 1),
        Some(_) => None,
        None => Some(2),
    };
    Ok(ThresholdScan {
        mu,
        d,
        q_max,
        q_star_prime_power,
        q_star_integer,
        last_fail_prime_power,
        last_fail_integer,
        hp_rechecks,
    })
}

/// `D_1..D_mu` from `D_1 = 1`, `D_i = D_{i-1} + 1 + (D_{i-1}+delta)/q + delta`.
pub fn d_sequence(q: u32, mu: u32) -> Vec<f64> {
    assert!(mu >= 1);
    let del = delta(q);
    let mut out = Vec::with_capacity(mu as usize);
    out.push(1.0);
    for _ in 2..=mu {
        let prev = *out.last().unwrap();
        out.push(prev + 1.0 + (prev + del) / q as f64 + del);
    }
    out
}

/// Which row of the closed `D_mu` table produced the value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum DRow {
    /// `D_1 = 1` (plain saturating sets).
    BaseMu1,
    /// 2.4 for `mu = 2`, `q >= 97`.
    Mu2,
    /// 2.6 for `mu = 3`, `q >= 181`.
    Mu3,
    /// 2.8 for `mu = 4`, `q >= 125`.
    Mu4,
    /// `mu + 1` for `mu <= sqrt(q)`, `q >= 4`.
    MuPlusOne,
    /// `2mu - 1` for `mu <= ((1-delta)q - delta + 1)/2 + 1`, `q >= 3`.
    TwoMuMinusOne,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DClosed {
    pub value: f64,
    pub row: DRow,
}

/// Best applicable row of the closed `D_mu` table for `(mu, q)`.
pub fn d_closed(q: u32, mu: u32) -> Result<DClosed> {
    if mu == 1 {
        return Ok(DClosed {
            value: 1.0,
            row: DRow::BaseMu1,
        });
    }
    let mut best: Option<DClosed> = None;
    let mut consider = |value: f64, row: DRow| {
        if best.is_none_or(|b| value < b.value) {
            best = Some(DClosed { value, row });
        }
    };
    match (mu, q) {
        (2, q) if q >= 97 => consider(2.4, DRow::Mu2),
        (3, q) if q >= 181 => consider(2.6, DRow::Mu3),
        (4, q) if q >= 125 => consider(2.8, DRow::Mu4),
        _ => {}
    }
    if q >= 4 && (mu as u64) * (mu as u64) <= q as u64 {
        consider(mu as f64 + 1.0, DRow::MuPlusOne);
    }
    if q >= 3 {
        let del = delta(q);
        let cap = ((1.0 - del) * q as f64 - del + 1.0) / 2.0 + 1.0;
        if mu as f64 <= cap {
            consider(2.0 * mu as f64 - 1.0, DRow::TwoMuMinusOne);
        }
    }
    best.ok_or(Error::NoApplicableRow { mu, q })
}

/// Size bound for (multiple) saturating sets in `PG(N,q)`, `N > 2`.
///
/// `mu = 1` uses the inductive lift of the plane bound (valid for even
/// `N >= 6`, `N != 8,12`, `q >= 79` with `q+1 >= 2 n_q`); `mu >= 2` uses the
/// direct lift with `n_{q,mu} = 2 D_mu sqrt((q+1)ln(q+1)) + 2` (valid for
/// even `N >= 4` with `q^((N-2)/2) + 1 - mu >= n_{q,mu}`).
pub fn space_bounds(n_dim: u32, q: u32, mu: u32) -> Result<f64> {
    let violated = |which: &str| Err(Error::ConstraintViolated(which.to_string()));
    let qf = q as f64;
    if mu == 1 {
        if !n_dim.is_multiple_of(2) || n_dim < 6 {
            return violated("N must be even and at least 6");
        }
        if n_dim == 8 || n_dim == 12 {
            return violated("N = 8 and N = 12 are excluded");
        }
        if q < 79 {
            return violated("q >= 79 required");
        }
        let n_q = theorem1_bound(q);
        if (q as f64 + 1.0) < 2.0 * n_q {
            return violated("q + 1 >= 2 n_q required");
        }
        let half = ((n_dim - 2) / 2) as i32;
        Ok(n_q * qf.powi(half) + 2.0 * qf.powi(half - 1))
    } else {
        if !n_dim.is_multiple_of(2) || n_dim < 4 {
            return violated("N must be even and at least 4");
        }
        let d = d_closed(q, mu).map_err(|_| {
            Error::ConstraintViolated(format!("no D_mu row applies to mu={mu}, q={q}"))
        })?;
        let q1 = qf + 1.0;
        let n_q_mu = 2.0 * d.value * (q1 * q1.ln()).sqrt() + 2.0;
        let half = ((n_dim - 2) / 2) as i32;
        let q_half = qf.powi(half);
        if q_half + 1.0 - (mu as f64) < n_q_mu {
            return violated("q^((N-2)/2) + 1 - mu >= n_{q,mu} required");
        }
        Ok(q_half * n_q_mu + (mu.max(3) as f64) * (q_half - 1.0) / (qf - 1.0))
    }
}

/// Prior plane bounds used for side-by-side comparison tables.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct ComparisonBounds {
    /// `5 sqrt(q ln q)`.
    pub prior_5sqrt: f64,
    /// `3 sqrt(2) sqrt(q ln q)`, the sharper constant of the same bound.
    pub prior_3sqrt2: f64,
    /// `66 sqrt(mu q ln q)`, applicable for `mu < 121 q ln q`.
    pub prior_66sqrt: f64,
    pub prior_66_applicable: bool,
    /// This crate's bound: `theorem1_bound` for `mu = 1`, otherwise
    /// `2 D_mu sqrt((q+1)ln(q+1)) + 2` when a `D_mu` row applies.
    pub paper_bound: Option<f64>,
    /// Whether `paper_bound` beats the applicable prior.
    pub improves: Option<bool>,
}

pub fn comparison_bounds(q: u32, mu: u32) -> ComparisonBounds {
    let qlnq = (q as f64 * (q as f64).ln()).sqrt();
    let prior_5sqrt = 5.0 * qlnq;
    let prior_3sqrt2 = 3.0 * 2f64.sqrt() * qlnq;
    let prior_66sqrt = 66.0 * (mu as f64).sqrt() * qlnq;
    let prior_66_applicable = (mu as f64) < 121.0 * q as f64 * (q as f64).ln();
    let paper_bound = if mu == 1 {
        Some(theorem1_bound(q))
    } else {
        d_closed(q, mu).ok().map(|d| {
            let q1 = q as f64 + 1.0;
            2.0 * d.value * (q1 * q1.ln()).sqrt() + 2.0
        })
    };
    let improves = paper_bound.map(|b| {
        if mu == 1 {
            b < prior_3sqrt2
        } else {
            prior_66_applicable && b < prior_66sqrt
        }
    });
    ComparisonBounds {
        prior_5sqrt,
        prior_3sqrt2,
        prior_66sqrt,
        prior_66_applicable,
        paper_bound,
        improves,
    }
}
