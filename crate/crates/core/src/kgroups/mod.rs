//! Relative K-groups `K_q(F_p[x]/(x^m), (x))` as explicit finite abelian
//! p-groups, the maps induced by `F_p[x]/(x^m) -> F_p[x]/(x^n)`, and their
//! vanishing thresholds.
//!
//! For `q = 2i+1` the group is the cokernel of
//! `V_m : ⊕_j Z/p^{s_p(1,i,j)} -> ⊕_j Z/p^{s_p(m,i,j)}`, where for
//! `m = p^v m'` the factor `j` is sent to the factor `m'j` by `x ↦ m' p^v x`.
//! Even and non-positive degrees vanish.

mod group;
mod thresholds;

pub use group::{intersect, subgroup, CyclicFactor, FinAbPGroup, GroupHom};
pub use thresholds::{
    condition_holds, i0, lemma_exponential_check, m0, milnor_intersection, q0, stays_zero_check,
    valuation_cross_check, I0Certificate, M0Certificate, MilnorResult, Q0Certificate, Valuations,
};

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::{s_p_unchecked, PrimeP};
use crate::error::{invalid, Error, Result};
use crate::linalg::{self, IntMatrix};

/// Largest number of unit-group elements the brute-force oracle enumerates.
pub const UNITS_GUARD: u64 = 1_000_000;

/// `Some(i)` when `q = 2i+1 ≥ 1`.
pub fn odd_weight(q: i64) -> Option<u64> {
    (q >= 1 && q % 2 == 1).then(|| ((q - 1) / 2) as u64)
}

fn checked_top(m: u64, i: u64) -> Result<u64> {
    m.checked_mul(i + 1)
        .ok_or_else(|| Error::InvalidArgument(format!("m(i+1) overflows for m = {m}, i = {i}")))
}

/// Exponent of the cokernel factor `j` in degree `2i+1` for `x^m`.
pub(crate) fn coker_exponent(p: PrimeP, m: u64, i: u64, j: u64) -> u32 {
    let a = s_p_unchecked(p, m, i, j);
    let (_, m1) = p.split(m);
    if j.is_multiple_of(m1) {
        a - s_p_unchecked(p, 1, i, j / m1)
    } else {
        a
    }
}

/// Factor indices `j ∈ I_p` with `j ≤ bound`.
pub fn indices(p: PrimeP, bound: u64) -> impl Iterator<Item = u64> {
    (1..=bound).filter(move |&j| !p.divides(j))
}

/// `K_q(F_p[x]/(x^m), (x))`, factors labelled by `j`.
pub fn relative_k(p: PrimeP, m: u64, q: i64) -> Result<FinAbPGroup> {
    if m == 0 {
        return invalid("m must be at least 1");
    }
    let Some(i) = odd_weight(q) else {
        return Ok(FinAbPGroup::trivial(p));
    };
    let top = checked_top(m, i)?;
    let factors = indices(p, top).map(|j| CyclicFactor {
        label: Some(j),
        exponent: coker_exponent(p, m, i, j),
    });
    let g = FinAbPGroup::new(p, factors);
    debug_assert_eq!(g.length(), (m - 1) * (i + 1));
    Ok(g)
}

/// The same group from the full integer presentation by Smith normal form.
pub fn relative_k_presentation(p: PrimeP, m: u64, q: i64) -> Result<FinAbPGroup> {
    if m == 0 {
        return invalid("m must be at least 1");
    }
    let Some(i) = odd_weight(q) else {
        return Ok(FinAbPGroup::trivial(p));
    };
    let top = checked_top(m, i)?;
    let js: Vec<u64> = indices(p, top).collect();
    let (v, m1) = p.split(m);
    let mut columns: Vec<Vec<BigInt>> = Vec::new();
    for (k, &j) in js.iter().enumerate() {
        let mut col = vec![BigInt::from(0); js.len()];
        col[k] = BigInt::from(p.pow_big(s_p_unchecked(p, m, i, j)));
        columns.push(col);
    }
    for j0 in indices(p, i + 1) {
        if s_p_unchecked(p, 1, i, j0) == 0 {
            continue;
        }
        let target = js
            .binary_search(&(m1 * j0))
            .map_err(|_| Error::Invariant("V_m leaves the index range".into()))?;
        let mut col = vec![BigInt::from(0); js.len()];
        col[target] = BigInt::from(m1) * BigInt::from(p.pow_big(v));
        columns.push(col);
    }
    let rel = IntMatrix::from_columns(js.len(), &columns);
    FinAbPGroup::from_invariants(p, &linalg::cokernel_invariants(&rel))
}

/// Brute force: the group `1 + x F_p[x]/(x^n)` under multiplication,
/// structure read off from the counts `#{g : g^{p^k} = 1}`.
pub fn k1_units_oracle(p: PrimeP, n: u64) -> Result<FinAbPGroup> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    let pp = p.get();
    let len = (n - 1) as usize;
    let size = (0..len).try_fold(1u64, |acc, _| {
        acc.checked_mul(pp).filter(|&s| s <= UNITS_GUARD)
    });
    let Some(size) = size else {
        return Err(Error::GuardExceeded(format!(
            "{p}^{} units exceeds {UNITS_GUARD}",
            n - 1
        )));
    };
    let mul = |a: &[u64], b: &[u64]| -> Vec<u64> {
        // index 0 is the constant term
        let mut c = vec![0u64; a.len()];
        for (k, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (l, &y) in b.iter().enumerate().take(a.len() - k) {
                c[k + l] = (c[k + l] + x * y) % pp;
            }
        }
        c
    };
    let pow_p = |a: &[u64]| -> Vec<u64> {
        let mut acc = a.to_vec();
        for _ in 1..pp {
            acc = mul(&acc, a);
        }
        acc
    };
    let mut one = vec![0u64; n as usize];
    one[0] = 1;
    // counts[k] = #{g : g^{p^k} = 1}
    let mut counts: Vec<u64> = vec![0; 1];
    let mut digits = vec![0u64; len];
    for _ in 0..size {
        let mut g = one.clone();
        g[1..].copy_from_slice(&digits);
        let mut k = 0;
        while g != one {
            g = pow_p(&g);
            k += 1;
        }
        if counts.len() <= k {
            counts.resize(k + 1, 0);
        }
        counts[k] += 1;
        for d in digits.iter_mut() {
            *d += 1;
            if *d < pp {
                break;
            }
            *d = 0;
        }
    }
    let mut cumulative = Vec::with_capacity(counts.len());
    let mut acc = 0u64;
    for c in &counts {
        acc += c;
        cumulative.push(acc);
    }
    let log = |x: u64| -> Result<u32> {
        let mut e = 0;
        let mut y = x;
        while y > 1 {
            if !y.is_multiple_of(pp) {
                return Err(Error::Invariant(format!("{x} is not a power of {p}")));
            }
            y /= pp;
            e += 1;
        }
        Ok(e)
    };
    let logs: Vec<u32> = cumulative.iter().map(|&c| log(c)).collect::<Result<_>>()?;
    // at_least[k] = number of cyclic factors of exponent ≥ k
    let at_least: Vec<u32> = (0..logs.len())
        .map(|k| if k == 0 { 0 } else { logs[k] - logs[k - 1] })
        .collect();
    let mut exps = Vec::new();
    for k in 1..at_least.len() {
        let next = at_least.get(k + 1).copied().unwrap_or(0);
        for _ in 0..(at_least[k] - next) {
            exps.push(k as u32);
        }
    }
    Ok(FinAbPGroup::from_exponents(p, exps))
}

/// `w_j = sum_{0 ≤ h < i} (s_p(m,h,j) - s_p(n,h,j))`.
pub fn twist(p: PrimeP, m: u64, n: u64, i: u64, j: u64) -> u64 {
    (0..i)
        .map(|h| s_p_unchecked(p, m, h, j) as u64 - s_p_unchecked(p, n, h, j) as u64)
        .sum()
}

/// One factor of the induced map: `Z/p^a -> Z/p^b`, `x ↦ p^w x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct MapFactor {
    pub j: u64,
    pub a: u32,
    pub b: u32,
    pub w: u64,
}

impl MapFactor {
    fn kernel_exponent(&self) -> u32 {
        let killed = (self.b as u64).saturating_sub(self.w) as u32;
        self.a - killed.min(self.a)
    }

    fn cokernel_exponent(&self) -> u32 {
        if self.a == 0 {
            self.b
        } else {
            self.w.min(self.b as u64) as u32
        }
    }

    fn is_zero(&self) -> bool {
        self.a == 0 || self.w >= self.b as u64
    }
}

/// The map `K_q(x^m) -> K_q(x^n)` factor by factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct KMapDesc {
    pub p: PrimeP,
    pub m: u64,
    pub n: u64,
    pub q: i64,
    pub factors: Vec<MapFactor>,
}

impl KMapDesc {
    pub fn source(&self) -> FinAbPGroup {
        FinAbPGroup::new(
            self.p,
            self.factors.iter().map(|f| CyclicFactor {
                label: Some(f.j),
                exponent: f.a,
            }),
        )
    }

    pub fn target(&self) -> FinAbPGroup {
        FinAbPGroup::new(
            self.p,
            self.factors.iter().map(|f| CyclicFactor {
                label: Some(f.j),
                exponent: f.b,
            }),
        )
    }

    pub fn factor(&self, j: u64) -> Option<&MapFactor> {
        self.factors.iter().find(|f| f.j == j)
    }

    /// The homomorphism as a matrix between the labelled groups.
    pub fn to_hom(&self) -> Result<GroupHom> {
        let (source, target) = (self.source(), self.target());
        let rows: Vec<u64> = target
            .factors()
            .iter()
            .map(|f| f.label.expect("labelled"))
            .collect();
        let cols: Vec<u64> = source
            .factors()
            .iter()
            .map(|f| f.label.expect("labelled"))
            .collect();
        let matrix = IntMatrix::from_fn(rows.len(), cols.len(), |r, c| {
            if rows[r] != cols[c] {
                return BigInt::from(0);
            }
            let f = self.factor(rows[r]).expect("listed");
            BigInt::from(self.p.pow_big(f.cokernel_exponent()))
        });
        GroupHom::new(source, target, matrix)
    }

    /// Kernel and cokernel, factor by factor.
    pub fn ker_coker(&self) -> (FinAbPGroup, FinAbPGroup) {
        let ker = self.factors.iter().map(|f| CyclicFactor {
            label: Some(f.j),
            exponent: f.kernel_exponent(),
        });
        let coker = self.factors.iter().map(|f| CyclicFactor {
            label: Some(f.j),
            exponent: f.cokernel_exponent(),
        });
        (
            FinAbPGroup::new(self.p, ker),
            FinAbPGroup::new(self.p, coker),
        )
    }

    /// Kernel and cokernel by Smith normal form on the realized matrix.
    pub fn ker_coker_snf(&self) -> Result<(FinAbPGroup, FinAbPGroup)> {
        let h = self.to_hom()?;
        Ok((h.kernel()?, h.cokernel()?))
    }

    pub fn is_zero(&self) -> bool {
        self.factors.iter().all(MapFactor::is_zero)
    }
}

fn check_pair(m: u64, n: u64) -> Result<()> {
    if n == 0 || m <= n {
        return invalid(format!("need m > n >= 1, got m = {m}, n = {n}"));
    }
    Ok(())
}

/// The map induced by `F_p[x]/(x^m) -> F_p[x]/(x^n)` in degree `q`.
pub fn transfer_map(p: PrimeP, m: u64, n: u64, q: i64) -> Result<KMapDesc> {
    check_pair(m, n)?;
    let mut factors = Vec::new();
    if let Some(i) = odd_weight(q) {
        for j in indices(p, checked_top(m, i)?) {
            let a = coker_exponent(p, m, i, j);
            let b = if j <= n * (i + 1) {
                coker_exponent(p, n, i, j)
            } else {
                0
            };
            if a == 0 && b == 0 {
                continue;
            }
            let w = twist(p, m, n, i, j);
            // source relations must land in the target relations
            if (a as u64) + w < b as u64 {
                return Err(Error::Invariant(format!(
                    "map does not descend at j = {j} for p={p}, m={m}, n={n}, q={q}"
                )));
            }
            factors.push(MapFactor { j, a, b, w });
        }
    }
    Ok(KMapDesc {
        p,
        m,
        n,
        q,
        factors,
    })
}

/// Kernel and cokernel of a map description.
pub fn ker_coker(desc: &KMapDesc) -> (FinAbPGroup, FinAbPGroup) {
    desc.ker_coker()
}

/// Whether the induced map in degree `q` is zero.
pub fn is_zero_map(p: PrimeP, m: u64, n: u64, q: i64) -> Result<bool> {
    Ok(transfer_map(p, m, n, q)?.is_zero())
}
