//! Big Witt vectors `W_S(Z)` and `W_S(F_p)` over a truncation set `S`.
//!
//! Coordinates follow the convention `x = prod_d (1 - a_d t^d)^{-1}`, so the
//! ghost components are `w_n = sum_{d | n} d * a_d^{n/d}` and `x = sum_d V_d[a_d]`.
//! Ring operations, Frobenius and Verschiebung go through the ghost map,
//! which is injective over `Z`. Over `F_p` coordinates are lifted to
//! `{0, ..., p-1}`, the integral operation is applied and the result reduced.

mod fp;
mod ptypical;

pub use fp::WittVectorFp;
pub use ptypical::{
    p_typical_from_zmod, p_typical_to_zmod, teichmuller_mod, PTypicalComponent, PTypicalDecomp,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::truncation::{divisors, TruncationSet};

/// Element of `W_S(Z)` in Witt coordinates, one integer per member of `S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WittVectorZ {
    set: TruncationSet,
    coords: Vec<BigInt>,
}

/// Ghost components of a Witt vector, one integer per member of `S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GhostVector {
    set: TruncationSet,
    ghost: Vec<BigInt>,
}

impl GhostVector {
    pub fn new(set: TruncationSet, ghost: Vec<BigInt>) -> Result<Self> {
        if ghost.len() != set.len() {
            return Err(Error::TruncationMismatch(format!(
                "{} ghost components for a set of size {}",
                ghost.len(),
                set.len()
            )));
        }
        Ok(GhostVector { set, ghost })
    }

    pub fn set(&self) -> &TruncationSet {
        &self.set
    }

    pub fn components(&self) -> &[BigInt] {
        &self.ghost
    }

    /// Ghost component at `n`, if `n ∈ S`.
    pub fn at(&self, n: u64) -> Option<&BigInt> {
        self.set.index_of(n).map(|k| &self.ghost[k])
    }
}

fn check_same(a: &TruncationSet, b: &TruncationSet) -> Result<()> {
    if a != b {
        return Err(Error::TruncationMismatch(format!("{a} vs {b}")));
    }
    Ok(())
}

impl WittVectorZ {
    pub fn new(set: TruncationSet, coords: Vec<BigInt>) -> Result<Self> {
        if coords.len() != set.len() {
            return Err(Error::TruncationMismatch(format!(
                "{} coordinates for a set of size {}",
                coords.len(),
                set.len()
            )));
        }
        Ok(WittVectorZ { set, coords })
    }

    pub fn from_i64(set: TruncationSet, coords: &[i64]) -> Result<Self> {
        WittVectorZ::new(set, coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(set: TruncationSet) -> Self {
        let coords = vec![BigInt::zero(); set.len()];
        WittVectorZ { set, coords }
    }

    pub fn one(set: TruncationSet) -> Self {
        WittVectorZ::from_integer(set, &BigInt::one())
    }

    /// The image of the integer `c` under `Z -> W_S(Z)`.
    pub fn from_integer(set: TruncationSet, c: &BigInt) -> Self {
        let ghost = vec![c.clone(); set.len()];
        unghost(&GhostVector { set, ghost }).expect("integers are in the image of the ghost map")
    }

    /// Teichmüller representative `[a] = (a, 0, 0, ...)`.
    pub fn teichmuller(set: TruncationSet, a: &BigInt) -> Self {
        let mut x = WittVectorZ::zero(set);
        if x.set.contains(1) {
            x.coords[0] = a.clone();
        }
        x
    }

    pub fn set(&self) -> &TruncationSet {
        &self.set
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn coord(&self, n: u64) -> Option<&BigInt> {
        self.set.index_of(n).map(|k| &self.coords[k])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn ghost(&self) -> GhostVector {
        ghost_of(self)
    }

    pub fn add(&self, other: &WittVectorZ) -> Result<Self> {
        check_same(&self.set, &other.set)?;
        let (a, b) = (ghost_of(self), ghost_of(other));
        let ghost = a.ghost.iter().zip(&b.ghost).map(|(x, y)| x + y).collect();
        unghost(&GhostVector {
            set: self.set.clone(),
            ghost,
        })
    }

    pub fn neg(&self) -> Result<Self> {
        let g = ghost_of(self);
        let ghost = g.ghost.iter().map(|x| -x).collect();
        unghost(&GhostVector {
            set: self.set.clone(),
            ghost,
        })
    }

    pub fn sub(&self, other: &WittVectorZ) -> Result<Self> {
        self.add(&other.neg()?)
    }

    pub fn mul(&self, other: &WittVectorZ) -> Result<Self> {
        check_same(&self.set, &other.set)?;
        let (a, b) = (ghost_of(self), ghost_of(other));
        let ghost = a.ghost.iter().zip(&b.ghost).map(|(x, y)| x * y).collect();
        unghost(&GhostVector {
            set: self.set.clone(),
            ghost,
        })
    }

    /// Multiplication by an integer.
    pub fn scale(&self, c: &BigInt) -> Result<Self> {
        let g = ghost_of(self);
        let ghost = g.ghost.iter().map(|x| x * c).collect();
        unghost(&GhostVector {
            set: self.set.clone(),
            ghost,
        })
    }

    /// `F_s : W_S -> W_{S/s}`, ghost rule `w'_t = w_{st}`.
    pub fn frobenius(&self, s: u64) -> Result<Self> {
        let target = self.set.quotient(s)?;
        let g = ghost_of(self);
        let ghost = target
            .members()
            .iter()
            .map(|&t| g.at(s * t).expect("st ∈ S by definition of S/s").clone())
            .collect();
        unghost(&GhostVector { set: target, ghost })
    }

    /// `V_s : W_{S/s} -> W_S`, ghost rule `w'_t = s w_{t/s}` if `s | t`, else 0.
    /// `self` must live over `S/s`.
    pub fn verschiebung(&self, s: u64, set: &TruncationSet) -> Result<Self> {
        let source = set.quotient(s)?;
        check_same(&source, &self.set)?;
        let g = ghost_of(self);
        let sb = BigInt::from(s);
        let ghost = set
            .members()
            .iter()
            .map(|&t| {
                if t % s == 0 {
                    &sb * g.at(t / s).expect("t/s ∈ S/s")
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        unghost(&GhostVector {
            set: set.clone(),
            ghost,
        })
    }

    /// Restriction to a truncation subset: projection onto its coordinates.
    pub fn restrict(&self, target: &TruncationSet) -> Result<Self> {
        if !target.is_subset(&self.set) {
            return Err(Error::TruncationMismatch(format!(
                "{target} is not a subset of {}",
                self.set
            )));
        }
        let coords = target
            .members()
            .iter()
            .map(|&t| self.coord(t).expect("subset").clone())
            .collect();
        Ok(WittVectorZ {
            set: target.clone(),
            coords,
        })
    }
}

/// Ghost components `w_n = sum_{d | n} d * a_d^{n/d}`.
pub fn ghost_of(x: &WittVectorZ) -> GhostVector {
    let ghost = x
        .set
        .members()
        .iter()
        .map(|&n| {
            let mut w = BigInt::zero();
            for d in divisors(n) {
                let a = x.coord(d).expect("division-stable");
                if !a.is_zero() {
                    w += BigInt::from(d) * num_traits::pow(a.clone(), (n / d) as usize);
                }
            }
            w
        })
        .collect();
    GhostVector {
        set: x.set.clone(),
        ghost,
    }
}

/// Inverse of the ghost map by triangular back-substitution.
pub fn unghost(w: &GhostVector) -> Result<WittVectorZ> {
    let members = w.set.members();
    let mut coords: Vec<BigInt> = Vec::with_capacity(members.len());
    for (k, &n) in members.iter().enumerate() {
        let mut rest = w.ghost[k].clone();
        for d in divisors(n) {
            if d == n {
                break;
            }
            let idx = w.set.index_of(d).expect("division-stable");
            let a = &coords[idx];
            if !a.is_zero() {
                rest -= BigInt::from(d) * num_traits::pow(a.clone(), (n / d) as usize);
            }
        }
        let (q, r) = rest.div_rem(&BigInt::from(n));
        if !r.is_zero() {
            return Err(Error::NonIntegralGhost(n));
        }
        coords.push(q);
    }
    Ok(WittVectorZ {
        set: w.set.clone(),
        coords,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seg(r: u64) -> TruncationSet {
        TruncationSet::segment(r)
    }

    fn w(r: u64, xs: &[i64]) -> WittVectorZ {
        WittVectorZ::from_i64(seg(r), xs).unwrap()
    }

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn ghost_examples() {
        assert_eq!(ghost_of(&w(2, &[2, 0])).components(), &ints(&[2, 4])[..]);
        assert!(ghost_of(&WittVectorZ::zero(seg(5)))
            .components()
            .iter()
            .all(Zero::is_zero));
        assert_eq!(ghost_of(&w(2, &[0, 1])).components(), &ints(&[0, 2])[..]);
    }

    #[test]
    fn unghost_examples() {
        let g = GhostVector::new(seg(2), ints(&[2, 2])).unwrap();
        assert_eq!(unghost(&g).unwrap(), w(2, &[2, -1]));
        let g = GhostVector::new(seg(3), ints(&[0, 0, 0])).unwrap();
        assert!(unghost(&g).unwrap().is_zero());
        let g = GhostVector::new(seg(2), ints(&[1, 0])).unwrap();
        assert_eq!(unghost(&g), Err(Error::NonIntegralGhost(2)));
    }

    #[test]
    fn ring_examples() {
        let one = WittVectorZ::one(seg(2));
        assert_eq!(one, w(2, &[1, 0]));
        assert_eq!(one.add(&one).unwrap(), w(2, &[2, -1]));
        let x = w(2, &[3, -5]);
        assert_eq!(x.mul(&one).unwrap(), x);
        assert_eq!(w(2, &[0, 1]).mul(&w(2, &[0, 1])).unwrap(), w(2, &[0, 2]));
        assert!(w(2, &[1, 0]).add(&w(3, &[1, 0, 0])).is_err());
    }

    #[test]
    fn frobenius_examples() {
        let x = w(4, &[1, 2, 3, 4]);
        assert_eq!(x.frobenius(1).unwrap(), x);
        assert_eq!(w(2, &[1, 1]).frobenius(2).unwrap(), w(1, &[3]));
        assert!(WittVectorZ::zero(seg(6)).frobenius(2).unwrap().is_zero());
    }

    #[test]
    fn verschiebung_examples() {
        let x = w(4, &[1, 2, 3, 4]);
        assert_eq!(x.verschiebung(1, &seg(4)).unwrap(), x);
        assert_eq!(
            WittVectorZ::one(seg(1)).verschiebung(2, &seg(2)).unwrap(),
            w(2, &[0, 1])
        );
        assert!(WittVectorZ::zero(seg(2))
            .verschiebung(3, &seg(7))
            .unwrap()
            .is_zero());
        assert!(x.verschiebung(2, &seg(4)).is_err());
    }

    #[test]
    fn restrict_examples() {
        let x = w(2, &[2, -1]);
        assert_eq!(x.restrict(&seg(2)).unwrap(), x);
        assert_eq!(x.restrict(&seg(1)).unwrap(), w(1, &[2]));
        assert!(x.restrict(&TruncationSet::empty()).unwrap().is_zero());
        assert!(x.restrict(&seg(3)).is_err());
    }

    fn vec_strategy(r: u64) -> impl Strategy<Value = WittVectorZ> {
        proptest::collection::vec(-6i64..7, r as usize)
            .prop_map(move |xs| WittVectorZ::from_i64(TruncationSet::segment(r), &xs).unwrap())
    }

    proptest! {
        #[test]
        fn ghost_round_trip(x in (1u64..10).prop_flat_map(vec_strategy)) {
            prop_assert_eq!(unghost(&ghost_of(&x)).unwrap(), x);
        }

        #[test]
        fn ring_laws((x, y, z) in (1u64..9).prop_flat_map(|r| (vec_strategy(r), vec_strategy(r), vec_strategy(r)))) {
            prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
            prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
            prop_assert_eq!(x.mul(&y.add(&z).unwrap()).unwrap(), x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap());
            prop_assert_eq!(x.add(&y).unwrap().add(&z).unwrap(), x.add(&y.add(&z).unwrap()).unwrap());
            prop_assert!(x.sub(&x).unwrap().is_zero());
        }

        #[test]
        fn verschiebung_shifts_coordinates((x, s) in (1u64..5).prop_flat_map(|r| (vec_strategy(r), 1u64..4))) {
            let target = TruncationSet::segment(x.set().len() as u64 * s);
            let v = x.verschiebung(s, &target).unwrap();
            for &n in target.members() {
                let expect = if n % s == 0 { x.coord(n / s).unwrap().clone() } else { BigInt::zero() };
                prop_assert_eq!(v.coord(n).unwrap(), &expect);
            }
        }

        #[test]
        fn frobenius_is_multiplicative((x, y, s) in (2u64..10).prop_flat_map(|r| (vec_strategy(r), vec_strategy(r), 1u64..5))) {
            let lhs = x.mul(&y).unwrap().frobenius(s).unwrap();
            let rhs = x.frobenius(s).unwrap().mul(&y.frobenius(s).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
