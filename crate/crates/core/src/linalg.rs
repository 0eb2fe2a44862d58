//! Exact integer matrices and Smith normal form with unimodular transforms.
//!
//! Everything is `BigInt`; matrices here stay at a few hundred rows, so the
//! dense cubic algorithm is fine.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for k in 0..n {
            m.set(k, k, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        IntMatrix::from_fn(nrows, ncols, |r, c| rows[r][c].clone().into())
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        assert!(
            columns.iter().all(|c| c.len() == rows),
            "column length mismatch"
        );
        IntMatrix::from_fn(rows, columns.len(), |r, c| columns[c][r].clone())
    }

    /// Diagonal `rows x rows` matrix.
    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        IntMatrix::from_fn(n, n, |r, c| {
            if r == c {
                entries[r].clone()
            } else {
                BigInt::zero()
            }
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        IntMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.data[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(
            self.cols,
            v.len(),
            "dimension mismatch in matrix-vector product"
        );
        (0..self.rows)
            .map(|r| {
                let mut acc = BigInt::zero();
                for (c, x) in v.iter().enumerate() {
                    let a = self.get(r, c);
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        IntMatrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        })
    }

    pub fn select_rows(&self, range: std::ops::Range<usize>) -> IntMatrix {
        IntMatrix::from_fn(range.len(), self.cols, |r, c| {
            self.get(range.start + r, c).clone()
        })
    }

    pub fn select_cols(&self, range: std::ops::Range<usize>) -> IntMatrix {
        IntMatrix::from_fn(self.rows, range.len(), |r, c| {
            self.get(r, range.start + c).clone()
        })
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// row `dst` += k * row `src`
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let s = self.data[src * self.cols + c].clone();
            if !s.is_zero() {
                self.data[dst * self.cols + c] += k * s;
            }
        }
    }

    /// col `dst` += k * col `src`
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let s = self.data[r * self.cols + src].clone();
            if !s.is_zero() {
                self.data[r * self.cols + dst] += k * s;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let x = &mut self.data[r * self.cols + c];
            *x = -&*x;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let x = &mut self.data[r * self.cols + c];
            *x = -&*x;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal with
/// nonnegative entries `d_0 | d_1 | ...`.
#[derive(Debug, Clone)]
pub struct Smith {
    /// Diagonal of `D`, length `min(rows, cols)`.
    pub diag: Vec<BigInt>,
    pub rank: usize,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        self.u.swap_rows(x, y);
        self.u_inv.swap_cols(x, y);
    }

    fn swap_cols(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        self.v.swap_cols(x, y);
        self.v_inv.swap_rows(x, y);
    }

    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row(dst, src, k);
        self.u.add_row(dst, src, k);
        self.u_inv.add_col(src, dst, &-k);
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col(dst, src, k);
        self.v.add_col(dst, src, k);
        self.v_inv.add_row(src, dst, &-k);
    }

    fn negate_row(&mut self, r: usize) {
        self.a.negate_row(r);
        self.u.negate_row(r);
        self.u_inv.negate_col(r);
    }

    /// Smallest nonzero entry (by absolute value) of the trailing block.
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for r in t..self.a.rows {
            for c in t..self.a.cols {
                let x = self.a.get(r, c);
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|b| ax < b.2) {
                    let unit = ax.is_one();
                    best = Some((r, c, ax));
                    if unit {
                        let b = best.unwrap();
                        return Some((b.0, b.1));
                    }
                }
            }
        }
        best.map(|b| (b.0, b.1))
    }

    /// Clears row and column `t` outside the pivot; returns false if a
    /// nonzero remainder was left behind.
    fn eliminate(&mut self, t: usize) -> bool {
        let mut clean = true;
        let pivot = self.a.get(t, t).clone();
        for r in t + 1..self.a.rows {
            let x = self.a.get(r, t);
            if x.is_zero() {
                continue;
            }
            let q = x.div_floor(&pivot);
            self.add_row(r, t, &-q);
            if !self.a.get(r, t).is_zero() {
                clean = false;
            }
        }
        for c in t + 1..self.a.cols {
            let x = self.a.get(t, c);
            if x.is_zero() {
                continue;
            }
            let q = x.div_floor(&pivot);
            self.add_col(c, t, &-q);
            if !self.a.get(t, c).is_zero() {
                clean = false;
            }
        }
        clean
    }

    /// Moves the smallest nonzero entry of row/column `t` to the pivot.
    fn repivot(&mut self, t: usize) {
        let mut best = (t, t, self.a.get(t, t).abs());
        for r in t + 1..self.a.rows {
            let x = self.a.get(r, t).abs();
            if !x.is_zero() && (best.2.is_zero() || x < best.2) {
                best = (r, t, x);
            }
        }
        for c in t + 1..self.a.cols {
            let x = self.a.get(t, c).abs();
            if !x.is_zero() && (best.2.is_zero() || x < best.2) {
                best = (t, c, x);
            }
        }
        self.swap_rows(t, best.0);
        self.swap_cols(t, best.1);
    }

    fn non_divisible(&self, t: usize) -> Option<usize> {
        let pivot = self.a.get(t, t);
        for r in t + 1..self.a.rows {
            for c in t + 1..self.a.cols {
                if !self.a.get(r, c).is_multiple_of(pivot) {
                    return Some(r);
                }
            }
        }
        None
    }
}

/// Smith normal form with transforms.
pub fn smith(a: &IntMatrix) -> Smith {
    let (rows, cols) = (a.rows, a.cols);
    let mut w = Work {
        a: a.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let n = rows.min(cols);
    let mut rank = 0;
    for t in 0..n {
        let Some((r, c)) = w.min_entry(t) else { break };
        w.swap_rows(t, r);
        w.swap_cols(t, c);
        loop {
            if !w.eliminate(t) {
                w.repivot(t);
                continue;
            }
            match w.non_divisible(t) {
                Some(r) => {
                    w.add_row(t, r, &BigInt::one());
                }
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.negate_row(t);
        }
        rank += 1;
    }
    let diag = (0..n).map(|k| w.a.get(k, k).clone()).collect();
    Smith {
        diag,
        rank,
        u: w.u,
        u_inv: w.u_inv,
        v: w.v,
        v_inv: w.v_inv,
    }
}

/// Basis (as columns) of the integer kernel `{x : A x = 0}`.
pub fn kernel(a: &IntMatrix) -> IntMatrix {
    let s = smith(a);
    s.v.select_cols(s.rank..a.cols)
}

/// An integer solution of `A x = b`, if one exists.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows, b.len(), "dimension mismatch in solve");
    let s = smith(a);
    let ub = s.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.cols];
    for (k, rhs) in ub.iter().enumerate() {
        if k < s.rank {
            let (q, r) = rhs.div_rem(&s.diag[k]);
            if !r.is_zero() {
                return None;
            }
            y[k] = q;
        } else if !rhs.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// Invariant factors (entries > 1, plus `0` for each free summand) of the
/// abelian group `Z^gens / (column span of relations)`.
pub fn cokernel_invariants(relations: &IntMatrix) -> Vec<BigInt> {
    let gens = relations.rows;
    let s = smith(relations);
    let mut out: Vec<BigInt> = s.diag[..s.rank]
        .iter()
        .filter(|d| !d.is_one())
        .cloned()
        .collect();
    out.extend(std::iter::repeat_n(BigInt::zero(), gens - s.rank));
    out
}

/// Relations among the generators `xs` (columns) of the subgroup they span
/// in `Z^n / span(relations)`: the `x`-part of the kernel of `[xs | relations]`.
pub fn subgroup_relations(xs: &IntMatrix, relations: &IntMatrix) -> IntMatrix {
    let k = xs.cols;
    let ker = kernel(&xs.hstack(relations));
    ker.select_rows(0..k)
}

/// Generators (columns) of `span(xs) ∩ span(ys)` modulo `span(relations)`,
/// as elements of `Z^n`.
pub fn intersect_spans(xs: &IntMatrix, ys: &IntMatrix, relations: &IntMatrix) -> IntMatrix {
    let ker = kernel(&xs.hstack(&ys.neg()).hstack(relations));
    let coeffs = ker.select_rows(0..xs.cols);
    xs.mul(&coeffs)
}
