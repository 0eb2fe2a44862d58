//! The cyclic bar construction of the pointed monoid `Π_m = {0, 1, x, ..., x^{m-1}}`
//! (`x^m = 0`) in a fixed weight `i`, as a normalized integral chain complex,
//! with its homology, the predicted answer, and the maps induced by `Π_m -> Π_n`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::linalg::{smith, IntMatrix};

/// Largest total basis size [`build_complex`] will construct.
pub const BASIS_GUARD: usize = 4000;

/// A simplex `(x^{i_0}, ..., x^{i_k})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct BarTuple(pub Vec<u32>);

impl BarTuple {
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    /// Face `d_t`; `None` when it hits the basepoint or is degenerate.
    pub fn face(&self, t: usize, m: u32) -> Option<BarTuple> {
        let e = &self.0;
        let k = self.degree();
        assert!(k >= 1 && t <= k, "face index out of range");
        let out: Vec<u32> = if t < k {
            let mut v = e[..t].to_vec();
            v.push(e[t] + e[t + 1]);
            v.extend_from_slice(&e[t + 2..]);
            v
        } else {
            let mut v = vec![e[k] + e[0]];
            v.extend_from_slice(&e[1..k]);
            v
        };
        if out.iter().any(|&x| x >= m) || out[1..].contains(&0) {
            return None;
        }
        Some(BarTuple(out))
    }
}

impl fmt::Display for BarTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// Normalized chains of `N^cy(Π_m)` in weight `i`, basepoint removed.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    m: u32,
    i: u32,
    bases: Vec<Vec<BarTuple>>,
    index: Vec<HashMap<BarTuple, usize>>,
    /// `boundaries[k] : C_k -> C_{k-1}`; `boundaries[0]` has no rows.
    boundaries: Vec<IntMatrix>,
}

fn enumerate(m: u32, i: u32) -> Vec<Vec<BarTuple>> {
    let mut bases: Vec<Vec<BarTuple>> = vec![Vec::new(); i as usize + 1];
    fn tails(rest: u32, m: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<BarTuple>>) {
        if rest == 0 {
            out[cur.len() - 1].push(BarTuple(cur.clone()));
            return;
        }
        for e in 1..=rest.min(m - 1) {
            cur.push(e);
            tails(rest - e, m, cur, out);
            cur.pop();
        }
    }
    for first in 0..=i.min(m - 1) {
        let mut cur = vec![first];
        tails(i - first, m, &mut cur, &mut bases);
    }
    for b in &mut bases {
        b.sort();
    }
    while bases.last().is_some_and(|b| b.is_empty()) {
        bases.pop();
    }
    bases
}

/// Builds the complex and checks `∂∘∂ = 0`.
pub fn build_complex(m: u32, i: u32) -> Result<ChainComplex> {
    if m < 2 || i < 1 {
        return invalid(format!("need m >= 2 and i >= 1, got m = {m}, i = {i}"));
    }
    let bases = enumerate(m, i);
    let total: usize = bases.iter().map(Vec::len).sum();
    if total > BASIS_GUARD {
        return Err(Error::GuardExceeded(format!(
            "{total} simplices exceed {BASIS_GUARD}"
        )));
    }
    let index: Vec<HashMap<BarTuple, usize>> = bases
        .iter()
        .map(|b| b.iter().cloned().enumerate().map(|(k, t)| (t, k)).collect())
        .collect();
    let mut boundaries = vec![IntMatrix::zeros(0, bases[0].len())];
    for k in 1..bases.len() {
        let mut d = IntMatrix::zeros(bases[k - 1].len(), bases[k].len());
        for (c, tuple) in bases[k].iter().enumerate() {
            for t in 0..=k {
                if let Some(face) = tuple.face(t, m) {
                    let r = index[k - 1][&face];
                    let sign = if t % 2 == 0 { 1 } else { -1 };
                    let v = d.get(r, c) + sign;
                    d.set(r, c, v);
                }
            }
        }
        boundaries.push(d);
    }
    let c = ChainComplex {
        m,
        i,
        bases,
        index,
        boundaries,
    };
    c.check_boundary_squared()?;
    Ok(c)
}

impl ChainComplex {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn weight(&self) -> u32 {
        self.i
    }

    /// Highest degree with a nonzero chain group.
    pub fn top_degree(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn basis(&self, k: usize) -> &[BarTuple] {
        self.bases.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn rank(&self, k: usize) -> usize {
        self.basis(k).len()
    }

    /// `∂_k : C_k -> C_{k-1}`.
    pub fn boundary(&self, k: usize) -> IntMatrix {
        match self.boundaries.get(k) {
            Some(d) => d.clone(),
            None => IntMatrix::zeros(self.rank(k.saturating_sub(1)), 0),
        }
    }

    pub fn index_of(&self, t: &BarTuple) -> Option<usize> {
        self.index.get(t.degree())?.get(t).copied()
    }

    fn check_boundary_squared(&self) -> Result<()> {
        for k in 2..self.bases.len() {
            if !self.boundaries[k - 1].mul(&self.boundaries[k]).is_zero() {
                return Err(Error::MalformedComplex(format!("∂∘∂ ≠ 0 in degree {k}")));
            }
        }
        Ok(())
    }

    /// Alternating sum of chain ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.bases
            .iter()
            .enumerate()
            .map(|(k, b)| {
                if k % 2 == 0 {
                    b.len() as i64
                } else {
                    -(b.len() as i64)
                }
            })
            .sum()
    }
}

/// Homology in one degree: `Z^rank ⊕ ⊕ Z/t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DegreeHomology {
    pub deg: usize,
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl DegreeHomology {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

/// Nonzero homology groups in increasing degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct HomologyResult(pub Vec<DegreeHomology>);

impl HomologyResult {
    pub fn degree(&self, k: usize) -> DegreeHomology {
        self.0
            .iter()
            .find(|h| h.deg == k)
            .cloned()
            .unwrap_or(DegreeHomology {
                deg: k,
                rank: 0,
                torsion: Vec::new(),
            })
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .map(|h| {
                if h.deg % 2 == 0 {
                    h.rank as i64
                } else {
                    -(h.rank as i64)
                }
            })
            .sum()
    }
}

/// Homology of one degree with the data needed to name classes.
#[derive(Debug, Clone)]
pub struct HomologyGroup {
    pub deg: usize,
    /// Orders of the generators: `0` for a free summand, `≥ 2` otherwise.
    pub orders: Vec<BigInt>,
    /// Generators as chains in `C_deg`.
    pub generators: Vec<Vec<BigInt>>,
    /// Chain coordinates -> cycle coordinates (rows `r_k..` of `V^{-1}`).
    to_cycle: IntMatrix,
    /// Cycle coordinates -> class coordinates (`U'`), only the nontrivial rows.
    to_class: IntMatrix,
}

impl HomologyGroup {
    pub fn summary(&self) -> DegreeHomology {
        let rank = self.orders.iter().filter(|d| d.is_zero()).count();
        let torsion = self
            .orders
            .iter()
            .filter(|d| !d.is_zero())
            .map(|d| d.to_u64().unwrap_or(u64::MAX))
            .collect();
        DegreeHomology {
            deg: self.deg,
            rank,
            torsion,
        }
    }

    /// Coordinates of the class of a cycle, reduced modulo the orders.
    pub fn class_of(&self, cycle: &[BigInt]) -> Vec<BigInt> {
        let y = self.to_cycle.mul_vec(cycle);
        let c = self.to_class.mul_vec(&y);
        c.into_iter()
            .zip(&self.orders)
            .map(|(x, d)| if d.is_zero() { x } else { x.mod_floor(d) })
            .collect()
    }
}

/// Homology of `c` in degree `k`, generators included.
pub fn homology_group(c: &ChainComplex, k: usize) -> HomologyGroup {
    let n = c.rank(k);
    let dk = c.boundary(k);
    let (r, v, v_inv) = if dk.rows() == 0 || dk.cols() == 0 {
        (0, IntMatrix::identity(n), IntMatrix::identity(n))
    } else {
        let s = smith(&dk);
        (s.rank, s.v, s.v_inv)
    };
    let z = n - r;
    let cycles = v.select_cols(r..n);
    let to_cycle = v_inv.select_rows(r..n);
    let next = c.boundary(k + 1);
    let bc = to_cycle.mul(&next);
    let (diag, rank2, u2, u2_inv) = if bc.rows() == 0 || bc.cols() == 0 {
        (
            Vec::new(),
            0,
            IntMatrix::identity(z),
            IntMatrix::identity(z),
        )
    } else {
        let s = smith(&bc);
        (s.diag, s.rank, s.u, s.u_inv)
    };
    let mut orders = Vec::new();
    let mut rows = Vec::new();
    for l in 0..z {
        let d = diag
            .get(l)
            .filter(|_| l < rank2)
            .map_or_else(BigInt::zero, |d| d.abs());
        if d.is_one() {
            continue;
        }
        orders.push(d);
        rows.push(l);
    }
    let to_class = IntMatrix::from_fn(rows.len(), z, |a, b| u2.get(rows[a], b).clone());
    let generators = rows
        .iter()
        .map(|&l| cycles.mul_vec(&u2_inv.column(l)))
        .collect();
    HomologyGroup {
        deg: k,
        orders,
        generators,
        to_cycle,
        to_class,
    }
}

/// Reduced integral homology in every degree.
pub fn homology(c: &ChainComplex) -> Result<HomologyResult> {
    c.check_boundary_squared()?;
    let groups = (0..=c.top_degree())
        .map(|k| homology_group(c, k).summary())
        .filter(|h| !h.is_zero())
        .collect();
    Ok(HomologyResult(groups))
}

/// `Z` in degrees `2d` and `2d+1` when `m ∤ i`, `Z/m` in degree `2d+1` when
/// `m | i`, with `d = ⌊(i-1)/m⌋`.
pub fn predicted_homology(m: u32, i: u32) -> Result<HomologyResult> {
    if m < 2 || i < 1 {
        return invalid(format!("need m >= 2 and i >= 1, got m = {m}, i = {i}"));
    }
    let d = ((i - 1) / m) as usize;
    let groups = if !i.is_multiple_of(m) {
        vec![
            DegreeHomology {
                deg: 2 * d,
                rank: 1,
                torsion: Vec::new(),
            },
            DegreeHomology {
                deg: 2 * d + 1,
                rank: 1,
                torsion: Vec::new(),
            },
        ]
    } else {
        vec![DegreeHomology {
            deg: 2 * d + 1,
            rank: 0,
            torsion: vec![m as u64],
        }]
    };
    Ok(HomologyResult(groups))
}

/// The chain map induced by `Π_m -> Π_n`, `x^e ↦ x^e` for `e < n`, else `0`.
#[derive(Debug, Clone)]
pub struct InducedMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    /// `maps[k] : C_k(source) -> C_k(target)`.
    pub maps: Vec<IntMatrix>,
}

pub fn induced_map(m: u32, n: u32, i: u32) -> Result<InducedMap> {
    if n < 2 || m <= n {
        return invalid(format!("need m > n >= 2, got m = {m}, n = {n}"));
    }
    let source = build_complex(m, i)?;
    let target = build_complex(n, i)?;
    let maps = (0..=source.top_degree())
        .map(|k| {
            let mut f = IntMatrix::zeros(target.rank(k), source.rank(k));
            for (c, t) in source.basis(k).iter().enumerate() {
                if t.0.iter().all(|&e| e < n) {
                    let r = target
                        .index_of(t)
                        .expect("surviving tuple is a target simplex");
                    f.set(r, c, BigInt::one());
                }
            }
            f
        })
        .collect();
    let map = InducedMap {
        source,
        target,
        maps,
    };
    map.check_chain_map()?;
    Ok(map)
}

impl InducedMap {
    pub fn chain_matrix(&self, k: usize) -> IntMatrix {
        self.maps
            .get(k)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(self.target.rank(k), self.source.rank(k)))
    }

    fn check_chain_map(&self) -> Result<()> {
        for k in 1..=self.source.top_degree() {
            let lhs = self.target.boundary(k).mul(&self.chain_matrix(k));
            let rhs = self.chain_matrix(k - 1).mul(&self.source.boundary(k));
            if lhs != rhs {
                return Err(Error::MalformedComplex(format!(
                    "not a chain map in degree {k}"
                )));
            }
        }
        Ok(())
    }

    /// Matrix of `H_k(source) -> H_k(target)` in the generator bases; entries
    /// reduced modulo the target orders.
    pub fn on_homology(&self, k: usize) -> HomologyMap {
        let src = homology_group(&self.source, k);
        let tgt = homology_group(&self.target, k);
        let f = self.chain_matrix(k);
        let cols: Vec<Vec<BigInt>> = src
            .generators
            .iter()
            .map(|g| tgt.class_of(&f.mul_vec(g)))
            .collect();
        let matrix = IntMatrix::from_columns(tgt.orders.len(), &cols);
        HomologyMap {
            source_orders: src.orders,
            target_orders: tgt.orders,
            matrix,
        }
    }
}

/// A map between homology groups in generator coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyMap {
    pub source_orders: Vec<BigInt>,
    pub target_orders: Vec<BigInt>,
    pub matrix: IntMatrix,
}

impl HomologyMap {
    /// `self ∘ inner`, reduced modulo the target orders.
    pub fn compose(&self, inner: &HomologyMap) -> HomologyMap {
        let prod = self.matrix.mul(&inner.matrix);
        let matrix = IntMatrix::from_fn(prod.rows(), prod.cols(), |r, c| {
            let d = &self.target_orders[r];
            if d.is_zero() {
                prod.get(r, c).clone()
            } else {
                prod.get(r, c).mod_floor(d)
            }
        });
        HomologyMap {
            source_orders: inner.source_orders.clone(),
            target_orders: self.target_orders.clone(),
            matrix,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BarReport {
    pub m: u32,
    pub i: u32,
    pub homology: HomologyResult,
    pub predicted: HomologyResult,
    #[serde(rename = "match")]
    pub matches: bool,
}

/// Computed and predicted homology side by side.
pub fn bar_report(m: u32, i: u32) -> Result<BarReport> {
    let homology = homology(&build_complex(m, i)?)?;
    let predicted = predicted_homology(m, i)?;
    let matches = homology == predicted;
    Ok(BarReport {
        m,
        i,
        homology,
        predicted,
        matches,
    })
}
