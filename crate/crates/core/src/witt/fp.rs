use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::WittVectorZ;
use crate::arith::PrimeP;
use crate::error::{Error, Result};
use crate::truncation::TruncationSet;

/// Element of `W_S(F_p)`, coordinates in `{0, ..., p-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WittVectorFp {
    p: PrimeP,
    set: TruncationSet,
    coords: Vec<u64>,
}

impl WittVectorFp {
    /// Coordinates are reduced mod `p`.
    pub fn new(p: PrimeP, set: TruncationSet, coords: Vec<u64>) -> Result<Self> {
        if coords.len() != set.len() {
            return Err(Error::TruncationMismatch(format!(
                "{} coordinates for a set of size {}",
                coords.len(),
                set.len()
            )));
        }
        let coords = coords.into_iter().map(|a| a % p.get()).collect();
        Ok(WittVectorFp { p, set, coords })
    }

    pub fn zero(p: PrimeP, set: TruncationSet) -> Self {
        let coords = vec![0; set.len()];
        WittVectorFp { p, set, coords }
    }

    pub fn one(p: PrimeP, set: TruncationSet) -> Self {
        let mut x = WittVectorFp::zero(p, set);
        if !x.coords.is_empty() {
            x.coords[0] = 1;
        }
        x
    }

    /// The image of the integer `c` under `Z -> W_S(F_p)`.
    pub fn from_integer(p: PrimeP, set: TruncationSet, c: &BigInt) -> Self {
        WittVectorFp::reduce(p, &WittVectorZ::from_integer(set, c))
    }

    pub fn p(&self) -> PrimeP {
        self.p
    }

    pub fn set(&self) -> &TruncationSet {
        &self.set
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn coord(&self, n: u64) -> Option<u64> {
        self.set.index_of(n).map(|k| self.coords[k])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&a| a == 0)
    }

    /// Canonical lift with coordinates in `{0, ..., p-1}`.
    pub fn lift(&self) -> WittVectorZ {
        let coords = self.coords.iter().map(|&a| BigInt::from(a)).collect();
        WittVectorZ::new(self.set.clone(), coords).expect("sizes agree")
    }

    /// Coordinatewise reduction mod `p`.
    pub fn reduce(p: PrimeP, x: &WittVectorZ) -> Self {
        let pb = BigInt::from(p.get());
        let coords = x
            .coords()
            .iter()
            .map(|a| a.mod_floor(&pb).to_u64().expect("residue fits"))
            .collect();
        WittVectorFp {
            p,
            set: x.set().clone(),
            coords,
        }
    }

    fn check_prime(&self, other: &WittVectorFp) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p.get(), other.p.get()));
        }
        Ok(())
    }

    pub fn add(&self, other: &WittVectorFp) -> Result<Self> {
        self.check_prime(other)?;
        Ok(WittVectorFp::reduce(
            self.p,
            &self.lift().add(&other.lift())?,
        ))
    }

    pub fn neg(&self) -> Result<Self> {
        Ok(WittVectorFp::reduce(self.p, &self.lift().neg()?))
    }

    pub fn sub(&self, other: &WittVectorFp) -> Result<Self> {
        self.check_prime(other)?;
        Ok(WittVectorFp::reduce(
            self.p,
            &self.lift().sub(&other.lift())?,
        ))
    }

    pub fn mul(&self, other: &WittVectorFp) -> Result<Self> {
        self.check_prime(other)?;
        Ok(WittVectorFp::reduce(
            self.p,
            &self.lift().mul(&other.lift())?,
        ))
    }

    pub fn scale(&self, c: &BigInt) -> Result<Self> {
        Ok(WittVectorFp::reduce(self.p, &self.lift().scale(c)?))
    }

    pub fn frobenius(&self, s: u64) -> Result<Self> {
        Ok(WittVectorFp::reduce(self.p, &self.lift().frobenius(s)?))
    }

    pub fn verschiebung(&self, s: u64, set: &TruncationSet) -> Result<Self> {
        Ok(WittVectorFp::reduce(
            self.p,
            &self.lift().verschiebung(s, set)?,
        ))
    }

    pub fn restrict(&self, target: &TruncationSet) -> Result<Self> {
        Ok(WittVectorFp::reduce(self.p, &self.lift().restrict(target)?))
    }
}

#[derive(Serialize, Deserialize)]
struct FpJson {
    p: PrimeP,
    #[serde(rename = "S")]
    set: TruncationSet,
    coords: BTreeMap<u64, u64>,
}

impl Serialize for WittVectorFp {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        FpJson {
            p: self.p,
            set: self.set.clone(),
            coords: self
                .set
                .members()
                .iter()
                .copied()
                .zip(self.coords.iter().copied())
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for WittVectorFp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = FpJson::deserialize(d)?;
        let keys: Vec<u64> = raw.coords.keys().copied().collect();
        if keys != raw.set.members() {
            return Err(D::Error::custom("coords must be given exactly on S"));
        }
        if raw.coords.values().any(|&a| a >= raw.p.get()) {
            return Err(D::Error::custom("coordinates must lie in 0..p"));
        }
        WittVectorFp::new(raw.p, raw.set, raw.coords.into_values().collect())
            .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: u64) -> PrimeP {
        PrimeP::new(x).unwrap()
    }

    #[test]
    fn one_plus_one_mod_two() {
        let s = TruncationSet::segment(2);
        let one = WittVectorFp::one(p(2), s.clone());
        assert_eq!(one.add(&one).unwrap().coords(), &[0, 1]);
        assert_eq!(
            WittVectorFp::from_integer(p(2), s, &BigInt::from(2)).coords(),
            &[0, 1]
        );
    }

    #[test]
    fn unit_laws() {
        let s = TruncationSet::segment(6);
        let x = WittVectorFp::new(p(3), s.clone(), vec![1, 2, 0, 2, 1, 1]).unwrap();
        assert_eq!(x.mul(&WittVectorFp::one(p(3), s.clone())).unwrap(), x);
        assert_eq!(x.add(&WittVectorFp::zero(p(3), s)).unwrap(), x);
    }

    #[test]
    fn f2_v2_is_two() {
        let s = TruncationSet::segment(2);
        let half = s.quotient(2).unwrap();
        for coords in [[0u64, 0], [1, 0], [0, 1], [1, 1]] {
            let x = WittVectorFp::new(p(2), s.clone(), coords.to_vec()).unwrap();
            let fx = x.frobenius(2).unwrap();
            assert_eq!(fx.set(), &half);
            let y = WittVectorFp::new(p(2), half.clone(), vec![coords[0]]).unwrap();
            let fv = y.verschiebung(2, &s).unwrap().frobenius(2).unwrap();
            assert!(fv.is_zero());
        }
    }

    #[test]
    fn prime_mismatch() {
        let s = TruncationSet::segment(1);
        let a = WittVectorFp::one(p(2), s.clone());
        let b = WittVectorFp::one(p(3), s);
        assert_eq!(a.add(&b), Err(Error::PrimeMismatch(2, 3)));
    }

    #[test]
    fn json_round_trip() {
        let x = WittVectorFp::new(p(2), TruncationSet::segment(4), vec![1, 0, 1, 1]).unwrap();
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(
            text,
            r#"{"p":2,"S":[1,2,3,4],"coords":{"1":1,"2":0,"3":1,"4":1}}"#
        );
        let back: WittVectorFp = serde_json::from_str(&text).unwrap();
        assert_eq!(back, x);
        assert!(
            serde_json::from_str::<WittVectorFp>(r#"{"p":2,"S":[1,2],"coords":{"1":1}}"#).is_err()
        );
        assert!(
            serde_json::from_str::<WittVectorFp>(r#"{"p":4,"S":[1],"coords":{"1":1}}"#).is_err()
        );
    }
}
