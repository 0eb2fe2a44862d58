//! Elementary arithmetic functions: p-adic valuations and the counting
//! functions `s_p`, `d_p`, `r_p`, `u'` and the cap `v(a, u)`.
//!
//! Parameters are `u64`; anything of the shape `p^u * j` is computed with
//! checked arithmetic or `BigUint` so that large exponents never wrap.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime number, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct PrimeP(u64);

impl PrimeP {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(PrimeP(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Whether `p` divides `x`.
    #[inline]
    pub fn divides(self, x: u64) -> bool {
        x.is_multiple_of(self.0)
    }

    /// `p^e` as an arbitrary precision integer.
    pub fn pow_big(self, e: u32) -> BigUint {
        BigUint::from(self.0).pow(e)
    }

    /// Split `x = p^v * x'` with `p` not dividing `x'`.
    pub fn split(self, x: u64) -> (u32, u64) {
        assert!(x > 0, "cannot split 0");
        let mut v = 0;
        let mut rest = x;
        while rest.is_multiple_of(self.0) {
            rest /= self.0;
            v += 1;
        }
        (v, rest)
    }
}

impl fmt::Display for PrimeP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<'de> Deserialize<'de> for PrimeP {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = u64::deserialize(d)?;
        PrimeP::new(p).map_err(serde::de::Error::custom)
    }
}

/// Trial division up to `sqrt(n)`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The p-adic valuation of a positive integer.
pub fn vp(x: u64, p: PrimeP) -> Result<u32> {
    if x == 0 {
        return Err(Error::ZeroValuation);
    }
    Ok(p.split(x).0)
}

/// The p-adic valuation of a positive arbitrary precision integer.
pub fn vp_big(x: &BigUint, p: PrimeP) -> Result<u32> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let pb = BigUint::from(p.get());
    let mut v = 0;
    let mut rest = x.clone();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&rest, &pb);
        if !r.is_zero() {
            return Ok(v);
        }
        rest = q;
        v += 1;
    }
}

fn require_coprime(p: PrimeP, j: u64) -> Result<()> {
    if j == 0 {
        return Err(Error::InvalidArgument("j must be positive".into()));
    }
    if p.divides(j) {
        return Err(Error::InvalidArgument(format!(
            "j = {j} is divisible by p = {p}"
        )));
    }
    Ok(())
}

/// Number of `k >= 0` with `p^k * j <= bound`.
pub(crate) fn count_chain(p: PrimeP, j: u64, bound: u128) -> u32 {
    let mut count = 0;
    let mut x = j as u128;
    while x <= bound {
        count += 1;
        x = match x.checked_mul(p.get() as u128) {
            Some(y) => y,
            None => break,
        };
    }
    count
}

/// `s_p(m, i, j)`: the number of elements of `{j, pj, p^2 j, ...}` that are
/// at most `m(i+1)`.
pub fn s_p(p: PrimeP, m: u64, i: u64, j: u64) -> Result<u32> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    require_coprime(p, j)?;
    Ok(s_p_unchecked(p, m, i, j))
}

/// `s_p` without argument validation; callers guarantee `p` does not divide `j`.
#[inline]
pub(crate) fn s_p_unchecked(p: PrimeP, m: u64, i: u64, j: u64) -> u32 {
    count_chain(p, j, m as u128 * (i as u128 + 1))
}

/// `d_p(m, u, j) = floor((p^{u-1} j - 1) / m)`.
pub fn d_p(p: PrimeP, m: u64, u: u32, j: u64) -> Result<BigUint> {
    if m == 0 || u == 0 || j == 0 {
        return Err(Error::InvalidArgument("m, u, j must be positive".into()));
    }
    require_coprime(p, j)?;
    let top = p.pow_big(u - 1) * BigUint::from(j) - BigUint::one();
    Ok(top / BigUint::from(m))
}

/// `floor(a / p^s)`, zero once `p^s` exceeds `u64`.
fn div_pow(a: u64, p: PrimeP, s: u32) -> u64 {
    match p.get().checked_pow(s) {
        Some(q) => a / q,
        None => 0,
    }
}

/// `r_p(a, u, i)`: the length of the cyclic group `W_r(F_p)` attached to the
/// representation-graded piece of weight `a`, level `u`, degree `2i`.
pub fn r_p(p: PrimeP, a: u64, u: u32, i: u64) -> Result<u32> {
    if a == 0 || u == 0 {
        return Err(Error::InvalidArgument("a and u must be positive".into()));
    }
    if a <= i {
        return Ok(u);
    }
    // i < a = floor(a / p^0); the first s with floor(a / p^s) <= i decides.
    for s in 1..u {
        if div_pow(a, p, s) <= i {
            return Ok(u - s);
        }
    }
    Ok(0)
}

/// The unique `u'` with `p^{u'-1} <= m(i+1) < p^{u'}`.
pub fn u_prime(p: PrimeP, m: u64, i: u64) -> Result<u32> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    Ok(count_chain(p, 1, m as u128 * (i as u128 + 1)))
}

/// `v(a, u) = min(u, v_p(a) + 1)`.
pub fn v_cap(u: u32, a: u64, p: PrimeP) -> Result<u32> {
    if u == 0 {
        return Err(Error::InvalidArgument("u must be positive".into()));
    }
    Ok(u.min(vp(a, p)? + 1))
}
