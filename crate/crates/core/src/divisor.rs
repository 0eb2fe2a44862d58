//! Divisors on `W(F_p)`: finitely supported order vectors over the integers
//! prime to `p`.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{s_p_unchecked, PrimeP};
use crate::error::{invalid, Error, Result};
use crate::truncation::u_p_segment;

/// A divisor `sum_j ord_j · [j]`, zero orders not stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Divisor {
    p: PrimeP,
    orders: BTreeMap<u64, i64>,
}

impl Divisor {
    pub fn zero(p: PrimeP) -> Self {
        Divisor {
            p,
            orders: BTreeMap::new(),
        }
    }

    /// Indices must be positive and prime to `p`.
    pub fn from_orders(p: PrimeP, orders: impl IntoIterator<Item = (u64, i64)>) -> Result<Self> {
        let mut d = Divisor::zero(p);
        for (j, o) in orders {
            if j == 0 || p.divides(j) {
                return invalid(format!(
                    "divisor index {j} must be positive and prime to {p}"
                ));
            }
            d.bump(j, o);
        }
        Ok(d)
    }

    fn bump(&mut self, j: u64, by: i64) {
        if by == 0 {
            return;
        }
        let e = self.orders.entry(j).or_insert(0);
        *e += by;
        if *e == 0 {
            self.orders.remove(&j);
        }
    }

    pub fn p(&self) -> PrimeP {
        self.p
    }

    pub fn ord(&self, j: u64) -> i64 {
        self.orders.get(&j).copied().unwrap_or(0)
    }

    /// Nonzero orders in increasing `j`.
    pub fn orders(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.orders.iter().map(|(&j, &o)| (j, o))
    }

    pub fn support(&self) -> Vec<u64> {
        self.orders.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.orders.values().all(|&o| o >= 0)
    }

    /// `sum_j ord_j`.
    pub fn degree(&self) -> i64 {
        self.orders.values().sum()
    }

    /// Pointwise `self ≥ other`.
    pub fn geq(&self, other: &Divisor) -> Result<bool> {
        self.check_prime(other)?;
        let keys = self.orders.keys().chain(other.orders.keys());
        Ok(keys.into_iter().all(|&j| self.ord(j) >= other.ord(j)))
    }

    fn check_prime(&self, other: &Divisor) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p.get(), other.p.get()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Divisor) -> Result<Divisor> {
        self.check_prime(other)?;
        let mut out = self.clone();
        for (&j, &o) in &other.orders {
            out.bump(j, o);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Divisor) -> Result<Divisor> {
        self.checked_add(&-other)
    }
}

impl Neg for &Divisor {
    type Output = Divisor;

    fn neg(self) -> Divisor {
        Divisor {
            p: self.p,
            orders: self.orders.iter().map(|(&j, &o)| (j, -o)).collect(),
        }
    }
}

/// Panics on a prime mismatch; use [`Divisor::checked_add`] otherwise.
impl Add for &Divisor {
    type Output = Divisor;

    fn add(self, other: &Divisor) -> Divisor {
        self.checked_add(other)
            .expect("divisors over the same prime")
    }
}

impl Sub for &Divisor {
    type Output = Divisor;

    fn sub(self, other: &Divisor) -> Divisor {
        self.checked_sub(other)
            .expect("divisors over the same prime")
    }
}

/// `div(W_r(F_p))`: `ord_j = card({1..r} ∩ {j p^k})`.
pub fn div_witt(r: u64, p: PrimeP) -> Result<Divisor> {
    if r == 0 {
        return invalid("div_witt needs r >= 1");
    }
    let orders = (1..=r)
        .filter(|&j| !p.divides(j))
        .map(|j| (j, u_p_segment(r, j, p) as i64));
    Divisor::from_orders(p, orders)
}

fn check_pair(m: u64, n: u64) -> Result<()> {
    if n == 0 || m <= n {
        return invalid(format!("need m > n >= 1, got m = {m}, n = {n}"));
    }
    Ok(())
}

/// `div(α_p(m,n,i)) = sum_{0 ≤ h < i} (div W_{m(h+1)} - div W_{n(h+1)})`.
pub fn alpha_divisor(p: PrimeP, m: u64, n: u64, i: u64) -> Result<Divisor> {
    check_pair(m, n)?;
    let mut orders: BTreeMap<u64, i64> = BTreeMap::new();
    for h in 0..i {
        let top = m
            .checked_mul(h + 1)
            .ok_or_else(|| Error::InvalidArgument("m(i+1) overflows".into()))?;
        for j in (1..=top).filter(|&j| !p.divides(j)) {
            let diff = s_p_unchecked(p, m, h, j) as i64 - s_p_unchecked(p, n, h, j) as i64;
            *orders.entry(j).or_insert(0) += diff;
        }
    }
    let d = Divisor::from_orders(p, orders)?;
    if !d.is_effective() {
        return Err(Error::Invariant(format!(
            "alpha divisor not effective for p={p}, m={m}, n={n}, i={i}"
        )));
    }
    Ok(d)
}

/// Whether `div(α_p(m,n,i)) ≥ div(W_{n(i+1)}(F_p))`.
pub fn kills_module(p: PrimeP, m: u64, n: u64, i: u64) -> Result<bool> {
    check_pair(m, n)?;
    let r = n
        .checked_mul(i + 1)
        .ok_or_else(|| Error::InvalidArgument("n(i+1) overflows".into()))?;
    alpha_divisor(p, m, n, i)?.geq(&div_witt(r, p)?)
}

#[derive(Serialize, Deserialize)]
struct DivisorJson {
    p: PrimeP,
    orders: BTreeMap<u64, i64>,
}

impl Serialize for Divisor {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        DivisorJson {
            p: self.p,
            orders: self.orders.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Divisor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = DivisorJson::deserialize(d)?;
        Divisor::from_orders(raw.p, raw.orders).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: u64) -> PrimeP {
        PrimeP::new(x).unwrap()
    }

    fn orders(d: &Divisor) -> Vec<(u64, i64)> {
        d.orders().collect()
    }

    #[test]
    fn div_witt_examples() {
        assert_eq!(orders(&div_witt(4, p(2)).unwrap()), vec![(1, 3), (3, 1)]);
        assert_eq!(orders(&div_witt(1, p(5)).unwrap()), vec![(1, 1)]);
        assert_eq!(
            orders(&div_witt(6, p(3)).unwrap()),
            vec![(1, 2), (2, 2), (4, 1), (5, 1)]
        );
        assert!(div_witt(0, p(2)).is_err());
    }

    #[test]
    fn alpha_examples() {
        assert!(alpha_divisor(p(2), 3, 1, 0).unwrap().is_zero());
        assert_eq!(alpha_divisor(p(2), 3, 1, 2).unwrap().ord(1), 2);
        assert!(alpha_divisor(p(2), 2, 2, 1).is_err());
    }

    #[test]
    fn geq_examples() {
        let d = div_witt(9, p(2)).unwrap();
        assert!(d.geq(&d).unwrap());
        assert!(!Divisor::zero(p(2)).geq(&d).unwrap());
        assert!(d.geq(&Divisor::zero(p(3))).is_err());
        let a = alpha_divisor(p(2), 3, 1, 6).unwrap();
        let w = div_witt(7, p(2)).unwrap();
        let pointwise = (1..=21u64)
            .filter(|j| j % 2 == 1)
            .all(|j| a.ord(j) >= w.ord(j));
        assert_eq!(a.geq(&w).unwrap(), pointwise);
    }

    #[test]
    fn kills_examples() {
        for (m, n) in [(2u64, 1u64), (5, 3), (9, 2)] {
            assert!(!kills_module(p(2), m, n, 0).unwrap());
        }
        assert!(!kills_module(p(7), 3, 2, 1).unwrap());
        assert!((0..40).any(|i| kills_module(p(2), 4, 2, i).unwrap()));
    }

    #[test]
    fn json_omits_zero_orders() {
        let d = Divisor::from_orders(p(2), [(1, 2), (3, 0)]).unwrap();
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"p":2,"orders":{"1":2}}"#
        );
        let back: Divisor = serde_json::from_str(r#"{"p":2,"orders":{"1":2,"3":0}}"#).unwrap();
        assert_eq!(back, d);
        assert!(serde_json::from_str::<Divisor>(r#"{"p":2,"orders":{"2":1}}"#).is_err());
    }

    proptest! {
        #[test]
        fn telescoping(pp in prop_oneof![Just(2u64), Just(3), Just(5)], n in 1u64..6, dk in 1u64..5, dm in 1u64..5, i in 0u64..6) {
            let (k, m) = (n + dk, n + dk + dm);
            let lhs = &alpha_divisor(p(pp), m, k, i).unwrap() + &alpha_divisor(p(pp), k, n, i).unwrap();
            prop_assert_eq!(lhs, alpha_divisor(p(pp), m, n, i).unwrap());
        }

        #[test]
        fn witt_length(pp in prop_oneof![Just(2u64), Just(3), Just(7)], r in 1u64..200) {
            prop_assert_eq!(div_witt(r, p(pp)).unwrap().degree(), r as i64);
        }
    }
}
