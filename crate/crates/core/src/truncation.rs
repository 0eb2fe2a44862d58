//! Truncation sets: finite subsets of the positive integers that are stable
//! under taking divisors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{count_chain, PrimeP};
use crate::error::{Error, Result};

/// A finite, division-stable set of positive integers, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct TruncationSet {
    members: Vec<u64>,
}

impl TruncationSet {
    /// Validates membership and division-stability. Input order and
    /// duplicates do not matter.
    pub fn new(mut members: Vec<u64>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if members.first() == Some(&0) {
            return Err(Error::InvalidArgument(
                "truncation sets contain positive integers only".into(),
            ));
        }
        let set = TruncationSet { members };
        for &s in &set.members {
            for d in divisors(s) {
                if !set.contains(d) {
                    return Err(Error::NotDivisionStable(set.members.clone(), d));
                }
            }
        }
        Ok(set)
    }

    /// Smallest truncation set containing the given integers.
    pub fn closure(generators: &[u64]) -> Result<Self> {
        if generators.contains(&0) {
            return Err(Error::InvalidArgument(
                "truncation sets contain positive integers only".into(),
            ));
        }
        let mut members: Vec<u64> = generators.iter().flat_map(|&s| divisors(s)).collect();
        members.sort_unstable();
        members.dedup();
        Ok(TruncationSet { members })
    }

    pub fn empty() -> Self {
        TruncationSet::default()
    }

    /// `{1, ..., r}`.
    pub fn segment(r: u64) -> Self {
        TruncationSet {
            members: (1..=r).collect(),
        }
    }

    /// All divisors of `r`.
    pub fn divisor_set(r: u64) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidArgument("divisor_set needs r >= 1".into()));
        }
        Ok(TruncationSet {
            members: divisors(r),
        })
    }

    /// `{1, p, ..., p^{u-1}}`.
    pub fn p_typical(p: PrimeP, u: u32) -> Self {
        let mut members = Vec::with_capacity(u as usize);
        let mut x = 1u64;
        for _ in 0..u {
            members.push(x);
            x *= p.get();
        }
        TruncationSet { members }
    }

    /// Length `u` if this set is `{1, p, ..., p^{u-1}}`.
    pub fn p_typical_length(&self, p: PrimeP) -> Option<u32> {
        let mut x = 1u64;
        for &s in &self.members {
            if s != x {
                return None;
            }
            x = x.checked_mul(p.get())?;
        }
        Some(self.members.len() as u32)
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn max(&self) -> Option<u64> {
        self.members.last().copied()
    }

    pub fn contains(&self, s: u64) -> bool {
        self.members.binary_search(&s).is_ok()
    }

    /// Position of `s` in the sorted member list.
    pub fn index_of(&self, s: u64) -> Option<usize> {
        self.members.binary_search(&s).ok()
    }

    pub fn is_subset(&self, other: &TruncationSet) -> bool {
        self.members.iter().all(|&s| other.contains(s))
    }

    /// `S/s = {t : st ∈ S}`.
    pub fn quotient(&self, s: u64) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidArgument("quotient by 0".into()));
        }
        let members = self
            .members
            .iter()
            .filter(|&&x| x % s == 0)
            .map(|&x| x / s)
            .collect();
        Ok(TruncationSet { members })
    }

    /// `u_p(S, j) = card(S ∩ {j, pj, p^2 j, ...})`.
    pub fn u_p(&self, j: u64, p: PrimeP) -> Result<u32> {
        if j == 0 || p.divides(j) {
            return Err(Error::InvalidArgument(format!(
                "j = {j} must be positive and prime to {p}"
            )));
        }
        let mut count = 0;
        let mut x = j;
        while self.contains(x) {
            count += 1;
            x = match x.checked_mul(p.get()) {
                Some(y) => y,
                None => break,
            };
        }
        Ok(count)
    }

    /// Members not divisible by `p`, i.e. the indices of the p-typical factors.
    pub fn prime_to(&self, p: PrimeP) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().copied().filter(move |&s| !p.divides(s))
    }

    pub fn intersection(&self, other: &TruncationSet) -> Self {
        let members = self
            .members
            .iter()
            .copied()
            .filter(|&s| other.contains(s))
            .collect();
        TruncationSet { members }
    }

    pub fn union(&self, other: &TruncationSet) -> Self {
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        members.sort_unstable();
        members.dedup();
        TruncationSet { members }
    }
}

impl<'de> Deserialize<'de> for TruncationSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let members = Vec::<u64>::deserialize(d)?;
        TruncationSet::new(members).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for TruncationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, s) in self.members.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

/// Sorted divisors of a positive integer.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `u_p({1,...,r}, j)` without building the segment.
pub(crate) fn u_p_segment(r: u64, j: u64, p: PrimeP) -> u32 {
    count_chain(p, j, r as u128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::s_p;

    fn p(x: u64) -> PrimeP {
        PrimeP::new(x).unwrap()
    }

    fn set(xs: &[u64]) -> TruncationSet {
        TruncationSet::new(xs.to_vec()).unwrap()
    }

    #[test]
    fn constructors() {
        assert_eq!(TruncationSet::segment(4).members(), &[1, 2, 3, 4]);
        assert!(TruncationSet::segment(0).is_empty());
        assert_eq!(TruncationSet::segment(1).members(), &[1]);
        assert_eq!(
            TruncationSet::divisor_set(12).unwrap().members(),
            &[1, 2, 3, 4, 6, 12]
        );
        assert_eq!(TruncationSet::divisor_set(1).unwrap().members(), &[1]);
        assert_eq!(TruncationSet::divisor_set(7).unwrap().members(), &[1, 7]);
        assert!(TruncationSet::divisor_set(0).is_err());
    }

    #[test]
    fn rejects_non_division_stable() {
        assert_eq!(
            TruncationSet::new(vec![1, 4]),
            Err(Error::NotDivisionStable(vec![1, 4], 2))
        );
        assert!(TruncationSet::new(vec![0, 1]).is_err());
        assert_eq!(TruncationSet::closure(&[4, 3]).unwrap(), set(&[1, 2, 3, 4]));
        assert!(TruncationSet::new(vec![]).unwrap().is_empty());
    }

    #[test]
    fn quotients() {
        let s = TruncationSet::divisor_set(12).unwrap();
        assert_eq!(s.quotient(3).unwrap(), set(&[1, 2, 4]));
        assert_eq!(s.quotient(1).unwrap(), s);
        assert!(set(&[1, 2]).quotient(5).unwrap().is_empty());
    }

    #[test]
    fn u_p_examples() {
        assert_eq!(TruncationSet::segment(4).u_p(1, p(2)).unwrap(), 3);
        assert_eq!(TruncationSet::segment(4).u_p(5, p(2)).unwrap(), 0);
        // {3, 6, 12} all lie in the divisors of 12
        assert_eq!(
            TruncationSet::divisor_set(12)
                .unwrap()
                .u_p(3, p(2))
                .unwrap(),
            3
        );
        assert!(TruncationSet::segment(4).u_p(2, p(2)).is_err());
    }

    #[test]
    fn union_of_divisor_sets() {
        for r in 0..30 {
            let s = TruncationSet::segment(r);
            let u = s.members().iter().fold(TruncationSet::empty(), |acc, &x| {
                acc.union(&TruncationSet::divisor_set(x).unwrap())
            });
            assert_eq!(u, s);
        }
    }

    #[test]
    fn segment_u_p_is_s_p() {
        for &pp in &[2u64, 3, 5] {
            for m in 1..6 {
                for i in 0..5 {
                    let seg = TruncationSet::segment(m * (i + 1));
                    for j in (1..35).filter(|j| j % pp != 0) {
                        let a = seg.u_p(j, p(pp)).unwrap();
                        assert_eq!(a, s_p(p(pp), m, i, j).unwrap());
                        assert_eq!(a, u_p_segment(m * (i + 1), j, p(pp)));
                    }
                }
            }
        }
    }

    #[test]
    fn display() {
        assert_eq!(
            TruncationSet::divisor_set(12).unwrap().to_string(),
            "{1,2,3,4,6,12}"
        );
        assert_eq!(TruncationSet::empty().to_string(), "{}");
    }
}
