//! Exact arithmetic in the Galois field `GF(q)`, `q = p^m`.
//!
//! Elements are encoded as integers in `[0, q)`: the base-`p` digits of the
//! value are the coefficients of the representing polynomial, little-endian.
//! The modulus is fixed deterministically (lexicographically smallest monic
//! irreducible by little-endian coefficient tuple) so that point enumeration
//! and every downstream index is reproducible across runs.

use crate::{Error, Result};

/// Default cap on the field order.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

const MAX_M: usize = 32;

/// An element of `GF(q)`, encoded as an integer in `[0, q)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Description of `GF(q)` with its fixed irreducible modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    q: u32,
    /// Little-endian coefficients, length `m+1`, monic. For `m = 1` this is
    /// the degenerate polynomial `x` and arithmetic is plain `mod p`.
    modulus: Vec<u32>,
    /// Bit mask of the modulus for the `p = 2` fast path.
    modulus_bits: u32,
}

impl FieldSpec {
    /// Builds `GF(p^m)` under [`DEFAULT_FIELD_CAP`].
    pub fn new(p: u32, m: u32) -> Result<Self> {
        Self::with_cap(p, m, DEFAULT_FIELD_CAP)
    }

    /// Builds `GF(p^m)` with an explicit order cap.
    ///
    /// The modulus is the lexicographically smallest (by little-endian
    /// coefficient tuple) monic irreducible polynomial of degree `m` over
    /// `GF(p)`, found by scanning candidates and trial-dividing by every
    /// monic polynomial of degree at most `m/2`.
    pub fn with_cap(p: u32, m: u32, cap: u64) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if m < 1 || m as usize > MAX_M {
            return Err(Error::InvalidRange(format!("extension degree m={m}")));
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= cap)
            .ok_or(Error::FieldTooLarge {
                q: (p as u64).saturating_pow(m),
                cap,
            })?;
        let q = q as u32;
        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, m)
        };
        let modulus_bits = if p == 2 {
            modulus
                .iter()
                .enumerate()
                .fold(0u32, |acc, (i, &c)| acc | (c << i))
        } else {
            0
        };
        Ok(FieldSpec {
            p,
            m,
            q,
            modulus,
            modulus_bits,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Little-endian modulus coefficients (length `m+1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Checked constructor for elements.
    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if value < self.q {
            Ok(FieldElement(value))
        } else {
            Err(Error::InvalidRange(format!(
                "element {value} outside GF({})",
                self.q
            )))
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if self.m == 1 {
            let s = a.0 as u64 + b.0 as u64;
            return FieldElement((s % self.p as u64) as u32);
        }
        let da = self.digits(a.0);
        let db = self.digits(b.0);
        let mut out = [0u32; MAX_M];
        for i in 0..self.m as usize {
            out[i] = (da[i] + db[i]) % self.p;
        }
        FieldElement(self.compose(&out))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 {
            return a;
        }
        if self.m == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let da = self.digits(a.0);
        let mut out = [0u32; MAX_M];
        for i in 0..self.m as usize {
            out[i] = if da[i] == 0 { 0 } else { self.p - da[i] };
        }
        FieldElement(self.compose(&out))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.m == 1 {
            return FieldElement(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        if self.p == 2 {
            // Carryless multiply with on-the-fly reduction.
            let mut acc = 0u32;
            let mut x = a.0;
            let mut y = b.0;
            while y != 0 {
                if y & 1 == 1 {
                    acc ^= x;
                }
                y >>= 1;
                x <<= 1;
                if (x >> self.m) & 1 == 1 {
                    x ^= self.modulus_bits;
                }
            }
            return FieldElement(acc);
        }
        let m = self.m as usize;
        let p = self.p as u64;
        let da = self.digits(a.0);
        let db = self.digits(b.0);
        let mut prod = [0u64; 2 * MAX_M];
        for i in 0..m {
            if da[i] != 0 {
                let ai = da[i] as u64;
                for j in 0..m {
                    prod[i + j] += ai * db[j] as u64;
                }
            }
        }
        // Reduce x^i for i >= m using x^m = -(lower part of modulus).
        for i in (m..=2 * m - 2).rev() {
            let c = prod[i] % p;
            if c != 0 {
                for j in 0..m {
                    let mj = self.modulus[j] as u64;
                    if mj != 0 {
                        prod[i - m + j] += c * (p - mj);
                    }
                }
            }
            prod[i] = 0;
        }
        let mut out = [0u32; MAX_M];
        for i in 0..m {
            out[i] = (prod[i] % p) as u32;
        }
        FieldElement(self.compose(&out))
    }

    /// Square-and-multiply exponentiation; `pow(a, 0) = 1`.
    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via `a^(q-2)`.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero { q: self.q });
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    fn digits(&self, mut v: u32) -> [u32; MAX_M] {
        let mut out = [0u32; MAX_M];
        for d in out.iter_mut().take(self.m as usize) {
            *d = v % self.p;
            v /= self.p;
        }
        out
    }

    fn compose(&self, digits: &[u32; MAX_M]) -> u32 {
        let mut v = 0u32;
        for i in (0..self.m as usize).rev() {
            v = v * self.p + digits[i];
        }
        v
    }
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Decomposes `q` as `p^m` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 0u64;
    for d in 2..=q {
        if d * d > q {
            p = q; // q itself is prime
            break;
        }
        if q.is_multiple_of(d) {
            p = d;
            break;
        }
    }
    let mut rest = q;
    let mut m = 0u32;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    if rest == 1 {
        Some((p as u32, m))
    } else {
        None
    }
}

/// Irreducibility of a monic polynomial over `GF(p)` by trial division
/// against every monic polynomial of degree `1..=deg/2`.
///
/// `coeffs` is little-endian and must be monic of degree at least 1.
pub fn poly_is_irreducible(p: u32, coeffs: &[u32]) -> bool {
    let deg = coeffs.len() - 1;
    assert!(deg >= 1 && coeffs[deg] == 1, "monic polynomial expected");
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        let mut divisor = vec![0u32; d + 1];
        divisor[d] = 1;
        for k in 0..count {
            let mut v = k;
            for c in divisor.iter_mut().take(d) {
                *c = (v % p as u64) as u32;
                v /= p as u64;
            }
            if poly_rem_is_zero(p, coeffs, &divisor) {
                return false;
            }
        }
    }
    true
}

/// True when `divisor` divides `poly` exactly over `GF(p)`.
fn poly_rem_is_zero(p: u32, poly: &[u32], divisor: &[u32]) -> bool {
    let p64 = p as u64;
    let d = divisor.len() - 1;
    let mut rem: Vec<u64> = poly.iter().map(|&c| c as u64).collect();
    for i in (d..rem.len()).rev() {
        let c = rem[i] % p64;
        if c != 0 {
            // divisor is monic: subtract c * divisor shifted by i - d
            for (j, &dc) in divisor.iter().enumerate() {
                if dc != 0 {
                    rem[i - d + j] += c * (p64 - dc as u64);
                }
            }
        }
        rem[i] = 0;
    }
    rem.iter().take(d).all(|&c| c % p64 == 0)
}

/// Smallest monic irreducible of degree `m >= 2` in lexicographic order of the
/// little-endian coefficient tuple `(c0, .., c_{m-1})`.
fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let m = m as usize;
    let count = (p as u64).pow(m as u32);
    let mut poly = vec![0u32; m + 1];
    poly[m] = 1;
    for k in 0..count {
        // Lexicographic order: c0 varies slowest, so read the big-endian
        // digits of k into (c0, .., c_{m-1}).
        let mut v = k;
        for i in (0..m).rev() {
            poly[i] = (v % p as u64) as u32;
            v /= p as u64;
        }
        if poly_is_irreducible(p, &poly) {
            return poly.clone();
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over GF(p)")
}
