//! The p-typical decomposition `η : W_S(F_p) -> prod_j W_{u_p(S,j)}(F_p)`,
//! `η_j = res ∘ F_j`, with each factor identified with `Z/p^u` through the
//! ring isomorphism sending `k·1` to `k`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::WittVectorFp;
use crate::arith::PrimeP;
use crate::error::{Error, Result};
use crate::truncation::TruncationSet;

/// Teichmüller lift `a^{p^{u-1}} mod p^u` of a residue `a` mod `p`.
pub fn teichmuller_mod(p: PrimeP, a: u64, u: u32) -> BigUint {
    if u == 0 {
        return BigUint::zero();
    }
    let modulus = p.pow_big(u);
    BigUint::from(a % p.get()).modpow(&p.pow_big(u - 1), &modulus)
}

/// `W_u(F_p) -> Z/p^u` on the truncation set `{1, p, ..., p^{u-1}}`.
/// `x = sum_r V^r [a_{p^r}]` maps to `sum_r p^r τ(a_{p^r})`.
pub fn p_typical_to_zmod(x: &WittVectorFp) -> Result<BigUint> {
    let p = x.p();
    let u = x.set().p_typical_length(p).ok_or(Error::NotPTypical)?;
    let modulus = p.pow_big(u);
    let mut acc = BigUint::zero();
    for (r, &a) in x.coords().iter().enumerate() {
        acc += p.pow_big(r as u32) * teichmuller_mod(p, a, u);
    }
    Ok(acc % modulus)
}

/// Inverse of [`p_typical_to_zmod`]: peel off one Teichmüller digit at a time.
pub fn p_typical_from_zmod(p: PrimeP, u: u32, c: &BigUint) -> WittVectorFp {
    let pb = BigUint::from(p.get());
    let mut rest = c % p.pow_big(u);
    let mut coords = Vec::with_capacity(u as usize);
    for r in 0..u {
        let a = (&rest % &pb).to_u64().expect("residue fits");
        coords.push(a);
        let width = u - r;
        let modulus = p.pow_big(width);
        let t = teichmuller_mod(p, a, width);
        let diff = (&rest + &modulus - t) % &modulus;
        debug_assert!((&diff % &pb).is_zero());
        rest = diff / &pb;
    }
    WittVectorFp::new(p, TruncationSet::p_typical(p, u), coords).expect("sizes agree")
}

/// One factor of the decomposition: the value in `Z/p^u` at index `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PTypicalComponent {
    pub j: u64,
    pub u: u32,
    #[serde(with = "crate::json::big_uint")]
    pub value: BigUint,
}

/// `W_S(F_p)` in decomposed form: one residue mod `p^{u_p(S,j)}` for every
/// `j ∈ S` prime to `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PTypicalDecomp {
    p: PrimeP,
    set: TruncationSet,
    components: Vec<PTypicalComponent>,
}

fn modulus(p: PrimeP, u: u32) -> BigUint {
    p.pow_big(u)
}

impl PTypicalDecomp {
    /// Builds a decomposition from values listed in increasing `j`; values are
    /// reduced into their modulus.
    pub fn new(p: PrimeP, set: TruncationSet, values: Vec<BigUint>) -> Result<Self> {
        let idx: Vec<u64> = set.prime_to(p).collect();
        if idx.len() != values.len() {
            return Err(Error::InconsistentDecomposition(format!(
                "{} values for {} factors",
                values.len(),
                idx.len()
            )));
        }
        let components = idx
            .into_iter()
            .zip(values)
            .map(|(j, v)| {
                let u = set.u_p(j, p).expect("j prime to p");
                PTypicalComponent {
                    j,
                    u,
                    value: v % modulus(p, u),
                }
            })
            .collect();
        Ok(PTypicalDecomp { p, set, components })
    }

    pub fn zero(p: PrimeP, set: TruncationSet) -> Self {
        let n = set.prime_to(p).count();
        PTypicalDecomp::new(p, set, vec![BigUint::zero(); n]).expect("sizes agree")
    }

    /// Rebuilds `S = ∪_j {j, pj, ..., p^{u_j - 1} j}` from the listed factors.
    pub fn from_components(p: PrimeP, mut components: Vec<PTypicalComponent>) -> Result<Self> {
        components.sort_by_key(|c| c.j);
        let mut members = Vec::new();
        for c in &components {
            if c.j == 0 || p.divides(c.j) || c.u == 0 {
                return Err(Error::InconsistentDecomposition(format!(
                    "bad factor j = {}, u = {}",
                    c.j, c.u
                )));
            }
            let mut x = c.j;
            for _ in 0..c.u {
                members.push(x);
                x = x
                    .checked_mul(p.get())
                    .ok_or_else(|| Error::InvalidArgument("index overflow".into()))?;
            }
        }
        let set = TruncationSet::new(members)
            .map_err(|e| Error::InconsistentDecomposition(e.to_string()))?;
        let expected: Vec<u64> = set.prime_to(p).collect();
        let given: Vec<u64> = components.iter().map(|c| c.j).collect();
        if expected != given {
            return Err(Error::InconsistentDecomposition(format!(
                "factors {given:?}, expected {expected:?}"
            )));
        }
        for c in &components {
            let u = set.u_p(c.j, p)?;
            if u != c.u {
                return Err(Error::InconsistentDecomposition(format!(
                    "factor {} has u = {}, expected {u}",
                    c.j, c.u
                )));
            }
            if c.value >= modulus(p, u) {
                return Err(Error::InconsistentDecomposition(format!(
                    "value at {} exceeds p^{u}",
                    c.j
                )));
            }
        }
        Ok(PTypicalDecomp { p, set, components })
    }

    pub fn p(&self) -> PrimeP {
        self.p
    }

    pub fn set(&self) -> &TruncationSet {
        &self.set
    }

    pub fn components(&self) -> &[PTypicalComponent] {
        &self.components
    }

    pub fn component(&self, j: u64) -> Option<&BigUint> {
        self.components
            .binary_search_by_key(&j, |c| c.j)
            .ok()
            .map(|k| &self.components[k].value)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.value.is_zero())
    }

    /// `η(x)`.
    pub fn decompose(x: &WittVectorFp) -> Result<Self> {
        let p = x.p();
        let set = x.set().clone();
        let mut values = Vec::new();
        for j in set.prime_to(p) {
            let u = set.u_p(j, p)?;
            let fj = x.frobenius(j)?;
            let head = fj.restrict(&TruncationSet::p_typical(p, u))?;
            values.push(p_typical_to_zmod(&head)?);
        }
        PTypicalDecomp::new(p, set, values)
    }

    /// `η^{-1}`. Writes `x = sum_j V_j(c_j · 1)`; the component of
    /// `η(V_j(c·1))` at `jk` is `c·j`, so the `c_j` are found in increasing `j`.
    pub fn recompose(&self) -> Result<WittVectorFp> {
        let p = self.p;
        let mut residual: Vec<BigInt> = self
            .components
            .iter()
            .map(|c| BigInt::from(c.value.clone()))
            .collect();
        let mut x = WittVectorFp::zero(p, self.set.clone());
        for k in 0..self.components.len() {
            let PTypicalComponent { j, u, .. } = self.components[k];
            let m = BigInt::from(modulus(p, u));
            let inv = BigInt::from(j).extended_gcd(&m).x.mod_floor(&m);
            let c = (&residual[k] * inv).mod_floor(&m);
            if c.is_zero() {
                continue;
            }
            for (l, other) in self.components.iter().enumerate().skip(k) {
                if other.j % j == 0 {
                    residual[l] -= &c * BigInt::from(j);
                }
            }
            let quotient = self.set.quotient(j)?;
            let term = WittVectorFp::from_integer(p, quotient, &c).verschiebung(j, &self.set)?;
            x = x.add(&term)?;
        }
        debug_assert!(residual
            .iter()
            .zip(&self.components)
            .all(|(r, c)| r.mod_floor(&BigInt::from(modulus(p, c.u))).is_zero()));
        Ok(x)
    }

    fn check_same(&self, other: &PTypicalDecomp) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p.get(), other.p.get()));
        }
        if self.set != other.set {
            return Err(Error::TruncationMismatch(format!(
                "{} vs {}",
                self.set, other.set
            )));
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &PTypicalDecomp,
        f: impl Fn(&BigUint, &BigUint) -> BigUint,
    ) -> Result<Self> {
        self.check_same(other)?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| PTypicalComponent {
                j: a.j,
                u: a.u,
                value: f(&a.value, &b.value) % modulus(self.p, a.u),
            })
            .collect();
        Ok(PTypicalDecomp {
            p: self.p,
            set: self.set.clone(),
            components,
        })
    }

    pub fn add(&self, other: &PTypicalDecomp) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn mul(&self, other: &PTypicalDecomp) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// `res^η`: reduce each surviving factor to its new modulus; factors
    /// outside `T` are annihilated.
    pub fn restrict(&self, target: &TruncationSet) -> Result<Self> {
        if !target.is_subset(&self.set) {
            return Err(Error::TruncationMismatch(format!(
                "{target} is not a subset of {}",
                self.set
            )));
        }
        let values = target
            .prime_to(self.p)
            .map(|j| self.component(j).expect("T ⊆ S").clone())
            .collect();
        PTypicalDecomp::new(self.p, target.clone(), values)
    }

    /// `F_s^η` for `s = p^v s'`: factor `j` with `s' | j` goes to factor
    /// `j/s'` of `S/s`, reduced mod `p^{u-v}`.
    pub fn frobenius(&self, s: u64) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidArgument("F_0 is undefined".into()));
        }
        let (_, s1) = self.p.split(s);
        let target = self.set.quotient(s)?;
        let values = target
            .prime_to(self.p)
            .map(|j| self.component(j * s1).expect("j s' ∈ S").clone())
            .collect();
        PTypicalDecomp::new(self.p, target, values)
    }

    /// `V_s^η` for `s = p^v s'`, with `self` over `S/s`: factor `j` goes to
    /// factor `s'j` of `S` by `x ↦ s' p^v x`; other factors are zero.
    pub fn verschiebung(&self, s: u64, set: &TruncationSet) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidArgument("V_0 is undefined".into()));
        }
        let source = set.quotient(s)?;
        if source != self.set {
            return Err(Error::TruncationMismatch(format!(
                "{} vs {}",
                self.set, source
            )));
        }
        let (v, s1) = self.p.split(s);
        let factor = BigUint::from(s1) * self.p.pow_big(v);
        let values = set
            .prime_to(self.p)
            .map(|j| {
                if j % s1 == 0 {
                    match self.component(j / s1) {
                        Some(x) => x * &factor,
                        None => BigUint::zero(),
                    }
                } else {
                    BigUint::zero()
                }
            })
            .collect();
        PTypicalDecomp::new(self.p, set.clone(), values)
    }

    pub fn one(p: PrimeP, set: TruncationSet) -> Self {
        let n = set.prime_to(p).count();
        PTypicalDecomp::new(p, set, vec![BigUint::one(); n]).expect("sizes agree")
    }
}

#[derive(Serialize, Deserialize)]
struct DecompJson {
    p: PrimeP,
    components: Vec<PTypicalComponent>,
}

impl Serialize for PTypicalDecomp {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        DecompJson {
            p: self.p,
            components: self.components.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for PTypicalDecomp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = DecompJson::deserialize(d)?;
        PTypicalDecomp::from_components(raw.p, raw.components).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: u64) -> PrimeP {
        PrimeP::new(x).unwrap()
    }

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    /// `k·1` built by repeated addition in the coordinate model.
    fn multiples_of_one(p: PrimeP, u: u32) -> Vec<WittVectorFp> {
        let set = TruncationSet::p_typical(p, u);
        let one = WittVectorFp::one(p, set.clone());
        let mut out = vec![WittVectorFp::zero(p, set)];
        let n = p.get().pow(u);
        for k in 1..n {
            let next = out[k as usize - 1].add(&one).unwrap();
            out.push(next);
        }
        out
    }

    #[test]
    fn zmod_matches_repeated_addition() {
        for (pp, umax) in [(2u64, 5u32), (3, 3), (5, 2)] {
            for u in 1..=umax {
                let table = multiples_of_one(p(pp), u);
                for (k, x) in table.iter().enumerate() {
                    assert_eq!(
                        p_typical_to_zmod(x).unwrap(),
                        big(k as u64),
                        "p={pp} u={u} k={k}"
                    );
                    assert_eq!(&p_typical_from_zmod(p(pp), u, &big(k as u64)), x);
                }
            }
        }
    }

    #[test]
    fn zmod_examples() {
        let x = WittVectorFp::new(p(2), TruncationSet::p_typical(p(2), 2), vec![0, 1]).unwrap();
        assert_eq!(p_typical_to_zmod(&x).unwrap(), big(2));
        let x = WittVectorFp::new(p(3), TruncationSet::p_typical(p(3), 1), vec![2]).unwrap();
        assert_eq!(p_typical_to_zmod(&x).unwrap(), big(2));
        assert_eq!(
            p_typical_to_zmod(&WittVectorFp::zero(p(2), TruncationSet::p_typical(p(2), 3)))
                .unwrap(),
            big(0)
        );
        let bad = WittVectorFp::zero(p(2), TruncationSet::segment(3));
        assert_eq!(p_typical_to_zmod(&bad), Err(Error::NotPTypical));
    }

    #[test]
    fn eta_examples() {
        let s = TruncationSet::segment(2);
        let d = PTypicalDecomp::decompose(&WittVectorFp::one(p(3), s.clone())).unwrap();
        assert_eq!(d.component(1), Some(&big(1)));
        assert_eq!(d.component(2), Some(&big(1)));
        assert!(
            PTypicalDecomp::decompose(&WittVectorFp::zero(p(3), s.clone()))
                .unwrap()
                .is_zero()
        );

        let one = WittVectorFp::one(p(3), TruncationSet::segment(1));
        let v = one.verschiebung(2, &s).unwrap();
        let d = PTypicalDecomp::decompose(&v).unwrap();
        assert_eq!(d.component(1), Some(&big(0)));
        assert_eq!(d.component(2), Some(&big(2)));
        let dv = PTypicalDecomp::decompose(&one)
            .unwrap()
            .verschiebung(2, &s)
            .unwrap();
        assert_eq!(dv, d);
        assert_eq!(
            PTypicalDecomp::zero(p(3), s.clone()).recompose().unwrap(),
            WittVectorFp::zero(p(3), s)
        );
    }

    #[test]
    fn p_typical_cyclic_model() {
        for pp in [2u64, 3] {
            let pr = p(pp);
            for u in 2..=5u32 {
                let small = TruncationSet::p_typical(pr, u - 1);
                let large = TruncationSet::p_typical(pr, u);
                for k in 0..pp.pow(u - 1).min(40) {
                    let x = p_typical_from_zmod(pr, u - 1, &big(k));
                    let vx = x.verschiebung(pp, &large).unwrap();
                    assert_eq!(p_typical_to_zmod(&vx).unwrap(), big(k * pp) % pr.pow_big(u));
                }
                for k in 0..pp.pow(u).min(60) {
                    let y = p_typical_from_zmod(pr, u, &big(k));
                    let expect = big(k) % pr.pow_big(u - 1);
                    assert_eq!(
                        p_typical_to_zmod(&y.frobenius(pp).unwrap()).unwrap(),
                        expect
                    );
                    assert_eq!(
                        p_typical_to_zmod(&y.restrict(&small).unwrap()).unwrap(),
                        expect
                    );
                }
            }
        }
    }

    #[test]
    fn json_schema() {
        let d = PTypicalDecomp::new(p(2), TruncationSet::segment(4), vec![big(5), big(0)]).unwrap();
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(
            text,
            r#"{"p":2,"components":[{"j":1,"u":3,"value":5},{"j":3,"u":1,"value":0}]}"#
        );
        let back: PTypicalDecomp = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);
        let bad = r#"{"p":2,"components":[{"j":1,"u":3,"value":9}]}"#;
        assert!(serde_json::from_str::<PTypicalDecomp>(bad).is_err());
        let gap = r#"{"p":2,"components":[{"j":3,"u":1,"value":0}]}"#;
        assert!(serde_json::from_str::<PTypicalDecomp>(gap).is_err());
    }

    fn fp_strategy(pp: u64, r: u64) -> impl Strategy<Value = WittVectorFp> {
        proptest::collection::vec(0..pp, r as usize)
            .prop_map(move |xs| WittVectorFp::new(p(pp), TruncationSet::segment(r), xs).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn eta_round_trip(x in (prop_oneof![Just(2u64), Just(3)], 1u64..10).prop_flat_map(|(pp, r)| fp_strategy(pp, r))) {
            let d = PTypicalDecomp::decompose(&x).unwrap();
            prop_assert_eq!(d.recompose().unwrap(), x);
        }

        #[test]
        fn eta_is_ring_hom((x, y) in (prop_oneof![Just(2u64), Just(3)], 1u64..9).prop_flat_map(|(pp, r)| (fp_strategy(pp, r), fp_strategy(pp, r)))) {
            let (dx, dy) = (PTypicalDecomp::decompose(&x).unwrap(), PTypicalDecomp::decompose(&y).unwrap());
            prop_assert_eq!(PTypicalDecomp::decompose(&x.add(&y).unwrap()).unwrap(), dx.add(&dy).unwrap());
            prop_assert_eq!(PTypicalDecomp::decompose(&x.mul(&y).unwrap()).unwrap(), dx.mul(&dy).unwrap());
        }
    }
}
