//! Vanishing thresholds `i_0`, `m_0`, `q_0`, the three-way valuation check,
//! and the intersection of images over all `m > n`.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{indices, is_zero_map, odd_weight, relative_k, transfer_map, twist, FinAbPGroup};
use crate::arith::{d_p, r_p, s_p, s_p_unchecked, u_prime, v_cap, PrimeP};
use crate::error::{invalid, Error, Result};
use crate::linalg::IntMatrix;

/// Upper bound on the number of `i` scanned per index `j` in [`i0`].
pub const I_SCAN_CAP: u64 = 1 << 22;
/// Upper bound on the `m` searched by [`m0`].
pub const M_SEARCH_CAP: u64 = 1 << 40;
/// Upper bound on the summation range in [`valuation_cross_check`].
pub const VALUATION_RANGE_CAP: u64 = 50_000_000;

/// Per-`j` vanishing condition `v_p(α_p(m,n,i,j)) ≥ s_p(n,i,j)`.
pub fn condition_holds(p: PrimeP, m: u64, n: u64, i: u64, j: u64) -> bool {
    twist(p, m, n, i, j) >= s_p_unchecked(p, n, i, j) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct I0Certificate {
    pub i0: u64,
    /// An index `j` at which the condition fails for `i = i0 - 1`.
    pub failing_j: u64,
}

/// `ceil(n / (m - n))`: from this `i` on the condition, once true, stays true.
fn stays_zero_start(m: u64, n: u64) -> u64 {
    n.div_ceil(m - n)
}

/// Last `i` at which the condition fails for this `j`, if any.
fn last_failure(p: PrimeP, m: u64, n: u64, j: u64) -> Result<Option<u64>> {
    let start = stays_zero_start(m, n);
    let mut w = 0u64;
    let mut last = None;
    let mut i = 0u64;
    loop {
        let holds = w >= s_p_unchecked(p, n, i, j) as u64;
        if !holds {
            last = Some(i);
        } else if i + 1 >= start {
            return Ok(last);
        }
        w += s_p_unchecked(p, m, i, j) as u64 - s_p_unchecked(p, n, i, j) as u64;
        i += 1;
        if i > I_SCAN_CAP {
            return Err(Error::SearchExhausted(I_SCAN_CAP));
        }
    }
}

fn check_thresholds(m: u64, n: u64) -> Result<()> {
    if n <= 1 || m <= n {
        return invalid(format!("need m > n > 1, got m = {m}, n = {n}"));
    }
    Ok(())
}

/// The least `i_0` with `kills_module(p, m, n, i)` for every `i ≥ i_0`.
/// Only `j < 2mn/(m-n)` can fail.
pub fn i0(p: PrimeP, m: u64, n: u64) -> Result<I0Certificate> {
    check_thresholds(m, n)?;
    let bound = (2 * m as u128 * n as u128).div_ceil((m - n) as u128);
    let bound = u64::try_from(bound).map_err(|_| Error::InvalidArgument("2mn overflows".into()))?;
    let mut best = I0Certificate {
        i0: 0,
        failing_j: 0,
    };
    for j in indices(p, bound.saturating_sub(1)) {
        if let Some(last) = last_failure(p, m, n, j)? {
            if last + 1 > best.i0 {
                best = I0Certificate {
                    i0: last + 1,
                    failing_j: j,
                };
            }
        }
    }
    if best.i0 == 0 {
        return Err(Error::Invariant(
            "the condition cannot hold at i = 0".into(),
        ));
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct M0Certificate {
    pub m0: u64,
    /// A pair `(i, j)` with `i ≥ 1` failing at `m0 - 1`, when `m0 - 1 > n`.
    pub witness: Option<(u64, u64)>,
}

fn good_for_positive_i(p: PrimeP, m: u64, n: u64) -> Result<bool> {
    Ok(i0(p, m, n)?.i0 <= 1)
}

/// The least `m_0` with `kills_module(p, m, n, i)` for all `m ≥ m_0`, `i > 0`.
/// The condition is monotone in `m`, so an exponential then binary search
/// over `m` suffices.
pub fn m0(p: PrimeP, n: u64) -> Result<M0Certificate> {
    if n <= 1 {
        return invalid("m0 needs n > 1");
    }
    let mut lo = n; // largest m known bad (n itself is outside the domain)
    let mut step = 1u64;
    let hi = loop {
        let m = n + step;
        if m > M_SEARCH_CAP {
            return Err(Error::SearchExhausted(M_SEARCH_CAP));
        }
        if good_for_positive_i(p, m, n)? {
            break m;
        }
        lo = m;
        step *= 2;
    };
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if good_for_positive_i(p, mid, n)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let witness = if hi - 1 > n {
        let cert = i0(p, hi - 1, n)?;
        Some((cert.i0 - 1, cert.failing_j))
    } else {
        None
    };
    Ok(M0Certificate { m0: hi, witness })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Q0Certificate {
    pub q0: i64,
    /// The largest `q` with a nonzero map, if any.
    pub last_nonzero: Option<i64>,
    /// `m = n + 1`, a case the general existence statement does not cover.
    pub beyond_theorem: bool,
}

/// The least `q_0 ≥ 1` with the induced map zero in every degree `q ≥ q_0`.
pub fn q0(p: PrimeP, m: u64, n: u64) -> Result<Q0Certificate> {
    if n == 0 || m <= n {
        return invalid(format!("need m > n >= 1, got m = {m}, n = {n}"));
    }
    let beyond_theorem = m == n + 1;
    if n == 1 {
        return Ok(Q0Certificate {
            q0: 1,
            last_nonzero: None,
            beyond_theorem,
        });
    }
    let bound = i0(p, m, n)?.i0;
    let mut last = None;
    for i in 0..bound {
        let q = 2 * i as i64 + 1;
        if !is_zero_map(p, m, n, q)? {
            last = Some(q);
        }
    }
    let q0 = last.map_or(1, |q| q + 1);
    Ok(Q0Certificate {
        q0,
        last_nonzero: last,
        beyond_theorem,
    })
}

/// The three independent evaluations of `v_p(α_p(m,n,i,j))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Valuations {
    /// Sum of `s_p` differences.
    pub v1: u64,
    /// Sum of `r_p` over `d_p(m,u,j) < a ≤ d_p(n,u,j)`.
    pub v2: u64,
    /// Count of graded pieces over the same range.
    pub v3: u64,
}

impl Valuations {
    pub fn agree(&self) -> bool {
        self.v1 == self.v2 && self.v2 == self.v3
    }
}

/// Evaluates the valuation three ways. `u` defaults to `u'(p, max(m,n), i) + 1`
/// and must satisfy `p^u j > m(i+1)`. `m = n` is allowed and gives zeros.
pub fn valuation_cross_check(
    p: PrimeP,
    m: u64,
    n: u64,
    i: u64,
    j: u64,
    u: Option<u32>,
) -> Result<Valuations> {
    if n == 0 || m < n {
        return invalid(format!("need m >= n >= 1, got m = {m}, n = {n}"));
    }
    s_p(p, m, i, j)?;
    let u = match u {
        Some(u) => u,
        None => u_prime(p, m.max(n), i)? + 1,
    };
    let bound = m as u128 * (i as u128 + 1);
    if u == 0 || p.pow_big(u) * BigUint::from(j) <= BigUint::from(bound) {
        return Err(Error::BelowStabilization {
            u,
            bound: u64::try_from(bound).unwrap_or(u64::MAX),
        });
    }
    let v1 = twist(p, m, n, i, j);
    let d = d_p(p, m, u, j)?;
    let e = d_p(p, n, u, j)?;
    let width = (&e - &d).to_u64().filter(|&w| w <= VALUATION_RANGE_CAP);
    let (Some(_), Some(d), Some(e)) = (width, d.to_u64(), e.to_u64()) else {
        return Err(Error::GuardExceeded(format!(
            "summation range exceeds {VALUATION_RANGE_CAP}"
        )));
    };
    let mut v2 = 0u64;
    let mut v3 = 0u64;
    for a in (d + 1)..=e {
        let cap = v_cap(u, a, p)?;
        v2 += r_p(p, a, cap, i)? as u64;
        let mut q = a;
        for r in 1..=cap {
            if r > 1 {
                if !p.divides(q) {
                    break;
                }
                q /= p.get();
            }
            if q <= i {
                v3 += 1;
            }
        }
    }
    Ok(Valuations { v1, v2, v3 })
}

/// Hypothesis `(m-n)(p^t - 1) j ≥ 2t mn (p-1)` with `t = s_p(n,i,j)`, and
/// conclusion `v_p(α_p(m,n,i,j)) ≥ t`.
pub fn lemma_exponential_check(p: PrimeP, m: u64, n: u64, i: u64, j: u64) -> Result<(bool, bool)> {
    if n == 0 || m <= n {
        return invalid(format!("need m > n >= 1, got m = {m}, n = {n}"));
    }
    let t = s_p(p, n, i, j)?;
    let lhs = BigUint::from(m - n) * (p.pow_big(t) - 1u32) * BigUint::from(j);
    let rhs = BigUint::from(2 * t as u64)
        * BigUint::from(m)
        * BigUint::from(n)
        * BigUint::from(p.get() - 1);
    let hypothesis = lhs >= rhs;
    let conclusion = twist(p, m, n, i, j) >= t as u64;
    Ok((hypothesis, conclusion))
}

/// For `i ≥ 1` with `i(m-n) ≥ n`: whether the condition at `i - 1` implies
/// it at `i`. `None` outside that range.
pub fn stays_zero_check(p: PrimeP, m: u64, n: u64, i: u64, j: u64) -> Result<Option<bool>> {
    if n == 0 || m <= n {
        return invalid(format!("need m > n >= 1, got m = {m}, n = {n}"));
    }
    s_p(p, n, i, j)?;
    if i == 0 || (i as u128) * ((m - n) as u128) < n as u128 {
        return Ok(None);
    }
    Ok(Some(
        !condition_holds(p, m, n, i - 1, j) || condition_holds(p, m, n, i, j),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MilnorResult {
    pub group: FinAbPGroup,
    /// Least `m` from which the running intersection no longer changes.
    pub stabilized_at: u64,
}

/// `∩_{n < m ≤ m_max} im(K_q(x^m) -> K_q(x^n))` as a subgroup of `K_q(x^n)`,
/// by Smith normal form on stacked relations, checked against the factorwise
/// closed form.
pub fn milnor_intersection(p: PrimeP, n: u64, q: i64, m_max: u64) -> Result<MilnorResult> {
    if n == 0 || m_max <= n {
        return invalid(format!("need m_max > n >= 1, got n = {n}, m_max = {m_max}"));
    }
    let target = relative_k(p, n, q)?;
    let labels: Vec<u64> = target
        .factors()
        .iter()
        .map(|f| f.label.expect("labelled"))
        .collect();
    let Some(_) = odd_weight(q) else {
        return Ok(MilnorResult {
            group: target,
            stabilized_at: n + 1,
        });
    };

    // exponent of p generating the image at each target factor; b means zero
    let mut closed: Vec<u32> = vec![0; labels.len()];
    let mut running: Option<IntMatrix> = None;
    let mut orders: Vec<u64> = Vec::new();
    for m in (n + 1)..=m_max {
        let desc = transfer_map(p, m, n, q)?;
        let mut cols = Vec::new();
        for (k, &j) in labels.iter().enumerate() {
            let f = desc.factor(j).expect("target factors are listed");
            let level = if f.a == 0 {
                f.b
            } else {
                f.w.min(f.b as u64) as u32
            };
            closed[k] = closed[k].max(level);
            let mut col = vec![num_bigint::BigInt::from(0); labels.len()];
            col[k] = num_bigint::BigInt::from(p.pow_big(level));
            cols.push(col);
        }
        let image = IntMatrix::from_columns(labels.len(), &cols);
        let next = match &running {
            None => image,
            Some(cur) => super::intersect(&target, cur, &image),
        };
        orders.push(super::subgroup(&target, &next)?.length());
        running = Some(next);
    }
    let gens = running.expect("m_max > n");
    let group = super::subgroup(&target, &gens)?;
    let expected = FinAbPGroup::new(
        p,
        target
            .factors()
            .iter()
            .zip(&closed)
            .map(|(f, &c)| super::CyclicFactor {
                label: f.label,
                exponent: f.exponent - c,
            }),
    );
    if !group.is_isomorphic(&expected) {
        return Err(Error::Invariant(format!(
            "intersection {:?} disagrees with the factorwise value {:?}",
            group.exponents(),
            expected.exponents()
        )));
    }
    let last = *orders.last().expect("nonempty");
    let first_stable = orders.iter().position(|&o| o == last).expect("present");
    let stabilized_at = n + 1 + first_stable as u64;
    if stabilized_at >= m_max {
        return Err(Error::SearchExhausted(m_max));
    }
    Ok(MilnorResult {
        group: expected,
        stabilized_at,
    })
}
