//! Finite abelian p-groups as sums of labelled cyclic factors, and
//! homomorphisms between them given by integer matrices.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{vp_big, PrimeP};
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};

/// One summand `Z/p^exponent`, optionally tagged with its factor index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CyclicFactor {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<u64>,
    pub exponent: u32,
}

/// `⊕ Z/p^{e}` with every `e ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinAbPGroup {
    p: PrimeP,
    factors: Vec<CyclicFactor>,
}

impl FinAbPGroup {
    pub fn trivial(p: PrimeP) -> Self {
        FinAbPGroup {
            p,
            factors: Vec::new(),
        }
    }

    /// Zero exponents are dropped.
    pub fn new(p: PrimeP, factors: impl IntoIterator<Item = CyclicFactor>) -> Self {
        let factors = factors.into_iter().filter(|f| f.exponent > 0).collect();
        FinAbPGroup { p, factors }
    }

    pub fn from_exponents(p: PrimeP, exponents: impl IntoIterator<Item = u32>) -> Self {
        FinAbPGroup::new(
            p,
            exponents.into_iter().map(|exponent| CyclicFactor {
                label: None,
                exponent,
            }),
        )
    }

    /// Group from invariant factors; each must be a power of `p`.
    pub fn from_invariants(p: PrimeP, invariants: &[BigInt]) -> Result<Self> {
        let mut exps = Vec::with_capacity(invariants.len());
        for d in invariants {
            let mag = d.magnitude();
            let e = if mag.is_zero() {
                return Err(Error::Invariant("group has a free summand".into()));
            } else {
                vp_big(mag, p)?
            };
            if p.pow_big(e) != *mag {
                return Err(Error::Invariant(format!(
                    "invariant factor {d} is not a power of {p}"
                )));
            }
            exps.push(e);
        }
        Ok(FinAbPGroup::from_exponents(p, exps))
    }

    pub fn p(&self) -> PrimeP {
        self.p
    }

    pub fn factors(&self) -> &[CyclicFactor] {
        &self.factors
    }

    /// Exponent multiset, largest first.
    pub fn exponents(&self) -> Vec<u32> {
        let mut e: Vec<u32> = self.factors.iter().map(|f| f.exponent).collect();
        e.sort_unstable_by(|a, b| b.cmp(a));
        e
    }

    /// Length as a `Z_p`-module: `log_p` of the order.
    pub fn length(&self) -> u64 {
        self.factors.iter().map(|f| f.exponent as u64).sum()
    }

    pub fn order(&self) -> BigUint {
        self.p.pow_big(self.length() as u32)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_isomorphic(&self, other: &FinAbPGroup) -> bool {
        self.p == other.p && self.exponents() == other.exponents()
    }

    /// Relation matrix `diag(p^{e_k})`.
    pub fn relations(&self) -> IntMatrix {
        let d: Vec<BigInt> = self
            .factors
            .iter()
            .map(|f| BigInt::from(self.p.pow_big(f.exponent)))
            .collect();
        IntMatrix::diagonal(&d)
    }

    fn modulus(&self, k: usize) -> BigInt {
        BigInt::from(self.p.pow_big(self.factors[k].exponent))
    }
}

#[derive(Serialize)]
struct GroupJson {
    p: PrimeP,
    exponents: Vec<u32>,
    length: u64,
}

impl Serialize for FinAbPGroup {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        GroupJson {
            p: self.p,
            exponents: self.exponents(),
            length: self.length(),
        }
        .serialize(ser)
    }
}

/// A homomorphism of finite abelian p-groups: column `k` is the image of the
/// `k`-th source generator in target coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: FinAbPGroup,
    target: FinAbPGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    /// Checks shapes and that every source relation maps to zero.
    pub fn new(source: FinAbPGroup, target: FinAbPGroup, matrix: IntMatrix) -> Result<Self> {
        if source.p != target.p {
            return Err(Error::PrimeMismatch(source.p.get(), target.p.get()));
        }
        if matrix.rows() != target.factors.len() || matrix.cols() != source.factors.len() {
            return Err(Error::InvalidArgument(
                "matrix shape does not match the groups".into(),
            ));
        }
        for c in 0..matrix.cols() {
            let order = source.modulus(c);
            for r in 0..matrix.rows() {
                if !(matrix.get(r, c) * &order).is_multiple_of(&target.modulus(r)) {
                    return Err(Error::Invariant(format!(
                        "generator {c} does not map to an element of matching order"
                    )));
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            matrix,
        })
    }

    pub fn zero(source: FinAbPGroup, target: FinAbPGroup) -> Self {
        let matrix = IntMatrix::zeros(target.factors.len(), source.factors.len());
        GroupHom {
            source,
            target,
            matrix,
        }
    }

    pub fn source(&self) -> &FinAbPGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbPGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Whether entries agree modulo the target orders.
    pub fn same_map(&self, other: &GroupHom) -> bool {
        self.source.factors == other.source.factors
            && self.target.factors == other.target.factors
            && (0..self.matrix.rows()).all(|r| {
                let m = self.target.modulus(r);
                (0..self.matrix.cols())
                    .all(|c| (self.matrix.get(r, c) - other.matrix.get(r, c)).is_multiple_of(&m))
            })
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom> {
        if inner.target.factors != self.source.factors {
            return Err(Error::InvalidArgument(
                "composition of incompatible maps".into(),
            ));
        }
        GroupHom::new(
            inner.source.clone(),
            self.target.clone(),
            self.matrix.mul(&inner.matrix),
        )
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.rows()).all(|r| {
            let m = self.target.modulus(r);
            (0..self.matrix.cols()).all(|c| self.matrix.get(r, c).is_multiple_of(&m))
        })
    }

    /// Kernel by Smith normal form: lift to `Z^s`, intersect with the
    /// preimage of the target relations, divide out the source relations.
    pub fn kernel(&self) -> Result<FinAbPGroup> {
        let s = self.source.factors.len();
        if s == 0 {
            return Ok(FinAbPGroup::trivial(self.source.p));
        }
        let lattice = linalg::subgroup_relations(&self.matrix, &self.target.relations());
        let basis = lattice_basis(&lattice);
        let rel = self.source.relations();
        let mut coords = Vec::with_capacity(s);
        for c in 0..s {
            let y = linalg::solve(&basis, &rel.column(c)).ok_or_else(|| {
                Error::Invariant("source relation outside the kernel lattice".into())
            })?;
            coords.push(y);
        }
        let y = IntMatrix::from_columns(basis.cols(), &coords);
        FinAbPGroup::from_invariants(self.source.p, &linalg::cokernel_invariants(&y))
    }

    /// Cokernel `Z^t / (image + target relations)`.
    pub fn cokernel(&self) -> Result<FinAbPGroup> {
        let rel = self.matrix.hstack(&self.target.relations());
        FinAbPGroup::from_invariants(self.target.p, &linalg::cokernel_invariants(&rel))
    }

    /// Image generators as integer columns in target coordinates.
    pub fn image_generators(&self) -> IntMatrix {
        self.matrix.clone()
    }
}

/// A basis (as columns) of the lattice spanned by the columns of `gens`.
pub(crate) fn lattice_basis(gens: &IntMatrix) -> IntMatrix {
    // Column-style Hermite reduction via Smith: span(A) = span(U^{-1} D).
    let s = linalg::smith(gens);
    let cols: Vec<Vec<BigInt>> = (0..s.rank)
        .map(|k| {
            s.u_inv
                .column(k)
                .into_iter()
                .map(|x| x * &s.diag[k])
                .collect()
        })
        .collect();
    IntMatrix::from_columns(gens.rows(), &cols)
}

/// The subgroup of `group` generated by the columns of `gens`.
pub fn subgroup(group: &FinAbPGroup, gens: &IntMatrix) -> Result<FinAbPGroup> {
    if gens.cols() == 0 {
        return Ok(FinAbPGroup::trivial(group.p));
    }
    let rel = linalg::subgroup_relations(gens, &group.relations());
    FinAbPGroup::from_invariants(group.p, &linalg::cokernel_invariants(&rel))
}

/// Generators of the intersection of the subgroups spanned by `xs` and `ys`.
pub fn intersect(group: &FinAbPGroup, xs: &IntMatrix, ys: &IntMatrix) -> IntMatrix {
    if xs.cols() == 0 || ys.cols() == 0 {
        return IntMatrix::zeros(group.factors.len(), 0);
    }
    linalg::intersect_spans(xs, ys, &group.relations())
}
