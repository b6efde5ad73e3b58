//! Wasm bindings behind the static demo page.
//!
//! Three interactive operations, each returning a JSON string the page can
//! render directly: a seeded random construction with its full coverage map,
//! size-bound curves over prime powers, and the closed-form threshold scan.
//! Errors come back as `{"error": ...}` rather than traps.

use wasm_bindgen::prelude::*;

use satgeom::bounds::{
    comparison_bounds, d_closed, pi_mu_closed, theorem1_bound, threshold_scan,
};
use satgeom::geometry::IncidencePlane;
use satgeom::gf::{prime_power, FieldSpec};
use satgeom::randomized::{
    construct_mu_direct, construct_mu_iterative, construct_saturating, ConstructorParams,
};
use satgeom::saturation::coverage_profile;
use satgeom::{Error, Result};
use serde_json::{json, Value};

/// Keeps a browser tab responsive; construction is quadratic-ish in q.
const DEMO_MAX_Q: u32 = 256;

fn plane_for(q: u32) -> Result<IncidencePlane> {
    let (p, m) = prime_power(q as u64).ok_or(Error::InvalidRange(format!(
        "q = {q} is not a prime power"
    )))?;
    IncidencePlane::generate(&FieldSpec::new(p, m)?)
}

fn construct_value(q: u32, c: f64, mu: u32, seed: u32) -> Result<Value> {
    if q > DEMO_MAX_Q {
        return Err(Error::InvalidRange(format!(
            "demo is capped at q <= {DEMO_MAX_Q}"
        )));
    }
    let plane = plane_for(q)?;
    let params = ConstructorParams {
        c: c.max(1.0),
        mu,
        seed: seed as u64,
        ..Default::default()
    };
    let out = if mu <= 1 {
        construct_saturating(&plane, &params)?
    } else if matches!((mu, q), (2, 97..) | (3, 181..) | (4, 125..)) {
        construct_mu_direct(&plane, mu, &params)?
    } else {
        construct_mu_iterative(&plane, mu, &params)?
    };
    let coverage = coverage_profile(&plane, &out.set)?;
    let m: Vec<u64> = (0..plane.point_count())
        .map(|p| coverage.multiplicity(p))
        .collect();
    Ok(json!({
        "q": q,
        "mu": mu.max(1),
        "points": plane.point_count(),
        "w": out.w,
        "size": out.set.len(),
        "trials": out.trials_used,
        "bound": out.size_bound,
        "verified": out.verified,
        "range_ok": out.theorem_range_ok,
        "set": out.set.indices(),
        "coverage": m,
    }))
}

fn bounds_curves_value(q_max: u32, mu: u32) -> Result<Value> {
    if !(1..=4).contains(&mu) {
        return Err(Error::UnsupportedMu(mu));
    }
    let mut rows = Vec::new();
    for q in 3..=q_max {
        if prime_power(q as u64).is_none() {
            continue;
        }
        let q1 = q as f64 + 1.0;
        let mu_bound = if mu == 1 {
            Some(theorem1_bound(q))
        } else {
            d_closed(q, mu)
                .ok()
                .map(|d| 2.0 * d.value * (q1 * q1.ln()).sqrt() + 2.0)
        };
        let cmp = comparison_bounds(q, mu);
        rows.push(json!({
            "q": q,
            "bound": mu_bound,
            "prior_3sqrt2": cmp.prior_3sqrt2,
            "prior_66sqrt": if cmp.prior_66_applicable { Some(cmp.prior_66sqrt) } else { None },
        }));
    }
    Ok(json!({ "mu": mu, "rows": rows }))
}

fn threshold_curve_value(mu: u32, d: f64, q_max: u32) -> Result<Value> {
    let mut points = Vec::new();
    for q in 2..=q_max {
        let value = pi_mu_closed(q, d, mu)?;
        points.push(json!({
            "q": q,
            "value": value,
            "prime_power": prime_power(q as u64).is_some(),
        }));
    }
    let scan = threshold_scan(mu, d, q_max);
    let (q_star, last_fail) = match &scan {
        Ok(s) => (Some(s.q_star_prime_power), s.last_fail_prime_power),
        Err(_) => (None, None),
    };
    Ok(json!({
        "mu": mu,
        "d": d,
        "points": points,
        "q_star": q_star,
        "last_fail": last_fail,
    }))
}

fn to_json_string(result: Result<Value>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

/// Random (1,mu)-saturating set in PG(2,q) with the per-point coverage map.
#[wasm_bindgen]
pub fn construct_demo(q: u32, c: f64, mu: u32, seed: u32) -> String {
    to_json_string(construct_value(q, c, mu, seed))
}

/// Size-bound curves over prime powers up to `q_max`.
#[wasm_bindgen]
pub fn bounds_curves(q_max: u32, mu: u32) -> String {
    to_json_string(bounds_curves_value(q_max, mu))
}

/// `(q+1)^2 pi_mu` closed-form values and the threshold crossing.
#[wasm_bindgen]
pub fn threshold_curve(mu: u32, d: f64, q_max: u32) -> String {
    to_json_string(threshold_curve_value(mu, d, q_max))
}
