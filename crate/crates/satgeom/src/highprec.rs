//! Fixed-point big arithmetic for threshold decisions near 1.
//!
//! Values are `mantissa / 2^PREC_BITS` with a `BigInt` mantissa. With 256
//! fractional bits (about 77 decimal digits) and series truncated at
//! `2^-(PREC_BITS+16)`, results of the ln/exp/pow chains used here are good
//! to well over 50 significant digits, which is what the boundary checks
//! demand.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

pub const PREC_BITS: u32 = 256;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BigFixed(BigInt);

impl BigFixed {
    pub fn zero() -> Self {
        BigFixed(BigInt::zero())
    }

    pub fn one() -> Self {
        BigFixed(BigInt::from(1) << PREC_BITS)
    }

    pub fn from_u64(v: u64) -> Self {
        BigFixed(BigInt::from(v) << PREC_BITS)
    }

    pub fn from_ratio(num: i64, den: u64) -> Self {
        assert!(den != 0);
        BigFixed((BigInt::from(num) << PREC_BITS) / BigInt::from(den))
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        BigFixed(&self.0 + &rhs.0)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        BigFixed(&self.0 - &rhs.0)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        BigFixed((&self.0 * &rhs.0) >> PREC_BITS)
    }

    pub fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.0.is_zero(), "division by zero");
        BigFixed((&self.0 << PREC_BITS) / &rhs.0)
    }

    pub fn div_u32(&self, n: u32) -> Self {
        BigFixed(&self.0 / BigInt::from(n))
    }

    pub fn mul_u32(&self, n: u32) -> Self {
        BigFixed(&self.0 * BigInt::from(n))
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.0.is_negative(), "sqrt of negative");
        BigFixed((&self.0 << PREC_BITS).sqrt())
    }

    /// Natural logarithm; the argument is reduced to `[1,2)` and the residual
    /// handled with the atanh series.
    pub fn ln(&self) -> Self {
        assert!(self.0.is_positive(), "ln of non-positive");
        let bits = self.0.bits() as i64;
        let k = bits - PREC_BITS as i64 - 1;
        let mantissa = if k >= 0 {
            BigFixed(&self.0 >> k as u32)
        } else {
            BigFixed(&self.0 << (-k) as u32)
        };
        // mantissa in [1,2): ln m = 2 atanh((m-1)/(m+1)), |t| < 1/3.
        let one = Self::one();
        let t = mantissa.sub(&one).div(&mantissa.add(&one));
        let ln_m = atanh_series(&t).mul_u32(2);
        let ln2_k = BigFixed(&ln2().0 * BigInt::from(k));
        ln_m.add(&ln2_k)
    }

    /// Exponential with argument reduction by `ln 2`.
    pub fn exp(&self) -> Self {
        let ln2 = ln2();
        // Truncated quotient keeps |r| < ln2, enough for the series.
        let n = (&self.0 / &ln2.0).to_i64().expect("exp argument out of range");
        let r = self.sub(&BigFixed(&ln2.0 * BigInt::from(n)));
        let mut term = Self::one();
        let mut sum = Self::one();
        let mut i = 1u32;
        loop {
            term = term.mul(&r).div_u32(i);
            if term.0.magnitude().bits() < 16 {
                break;
            }
            sum = sum.add(&term);
            i += 1;
            assert!(i < 10_000, "exp series did not converge");
        }
        if n >= 0 {
            BigFixed(sum.0 << n as u32)
        } else {
            BigFixed(sum.0 >> (-n) as u32)
        }
    }

    /// `self^e` for positive `self` via `exp(e ln self)`.
    pub fn pow(&self, e: &Self) -> Self {
        self.ln().mul(e).exp()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().map(|v| v / 2f64.powi(PREC_BITS as i32)).unwrap_or(f64::INFINITY)
    }

    /// Decimal rendering with the given number of fractional digits.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let neg = self.0.is_negative();
        let mag = self.0.magnitude().clone();
        let int_part = &mag >> PREC_BITS;
        let frac = &mag - (&int_part << PREC_BITS);
        let scaled = (frac * num_bigint::BigUint::from(10u32).pow(digits)) >> PREC_BITS;
        let frac_str = format!("{:0>width$}", scaled.to_string(), width = digits as usize);
        format!("{}{}.{}", if neg { "-" } else { "" }, int_part, frac_str)
    }
}

/// atanh(t) = t + t^3/3 + t^5/5 + ... for |t| < 1/3.
fn atanh_series(t: &BigFixed) -> BigFixed {
    let t2 = t.mul(t);
    let mut term = t.clone();
    let mut sum = t.clone();
    let mut n = 3u32;
    loop {
        term = term.mul(&t2);
        let contrib = term.div_u32(n);
        if contrib.0.magnitude().bits() < 16 {
            break;
        }
        sum = sum.add(&contrib);
        n += 2;
        assert!(n < 10_000, "atanh series did not converge");
    }
    sum
}

/// `ln 2 = 2 atanh(1/3)`, cached.
fn ln2() -> &'static BigFixed {
    static LN2: OnceLock<BigFixed> = OnceLock::new();
    LN2.get_or_init(|| atanh_series(&BigFixed::from_ratio(1, 3)).mul_u32(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_prefix(value: &BigFixed, expected: &str) {
        let rendered = value.to_decimal_string(55);
        assert!(
            rendered.starts_with(expected),
            "expected prefix {expected}, got {rendered}"
        );
    }

    #[test]
    fn ln2_to_fifty_digits() {
        assert_prefix(
            ln2(),
            "0.69314718055994530941723212145817656807550013436025",
        );
    }

    #[test]
    fn e_to_fifty_digits() {
        let e = BigFixed::one().exp();
        assert_prefix(&e, "2.71828182845904523536028747135266249775724709369995");
    }

    #[test]
    fn ln10_to_fifty_digits() {
        let ln10 = BigFixed::from_u64(10).ln();
        assert_prefix(&ln10, "2.30258509299404568401799145468436420760110148862877");
    }

    #[test]
    fn sqrt2_to_fifty_digits() {
        let s = BigFixed::from_u64(2).sqrt();
        assert_prefix(&s, "1.41421356237309504880168872420969807856967187537694");
    }

    #[test]
    fn exp_ln_round_trip() {
        for v in [3u64, 97, 1000, 123456] {
            let x = BigFixed::from_u64(v);
            let back = x.ln().exp();
            let diff = back.sub(&x);
            let rel = diff.0.magnitude().bits() as i64 - x.0.magnitude().bits() as i64;
            assert!(rel < -(PREC_BITS as i64 - 24), "v={v} rel bits {rel}");
        }
    }

    #[test]
    fn pow_matches_f64() {
        // 98^0.88 and 126^1.92 against double precision.
        let cases = [(98u64, (88, 100u64)), (126, (192, 100)), (182, (138, 100))];
        for (base, (en, ed)) in cases {
            let e = BigFixed::from_ratio(en, ed);
            let got = BigFixed::from_u64(base).pow(&e).to_f64();
            let expect = (base as f64).powf(en as f64 / ed as f64);
            assert!(
                (got - expect).abs() / expect < 1e-12,
                "{base}^{en}/{ed}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn negative_exponent_shrinks() {
        let x = BigFixed::from_u64(5).pow(&BigFixed::from_ratio(-1, 2));
        let expect = 1.0 / 5f64.sqrt();
        assert!((x.to_f64() - expect).abs() < 1e-14);
    }

    #[test]
    fn decimal_rendering_pads_zeroes() {
        let x = BigFixed::from_ratio(1, 1000);
        assert!(x.to_decimal_string(6).starts_with("0.000999")); // truncation, not rounding
        let y = BigFixed::from_u64(3);
        assert_eq!(y.to_decimal_string(3), "3.000");
    }
}
