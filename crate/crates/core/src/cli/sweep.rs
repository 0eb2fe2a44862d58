use clap::ValueEnum;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{Report, SweepArgs};
use crate::arith::{u_prime, PrimeP};
use crate::cyclicbar::bar_report;
use crate::divisor::kills_module;
use crate::error::{invalid, Error, Result};
use crate::kgroups::{
    indices, relative_k, relative_k_presentation, transfer_map, valuation_cross_check,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum SweepKind {
    /// Length and structure of K_{2i+1}(x^m) against the presentation.
    Length,
    /// The three valuation formulas over all factors `j`.
    Valuation,
    /// Divisor criterion implies the map is zero.
    Kills,
    /// Kernel/cokernel closed form against Smith normal form.
    Map,
    /// Cyclic bar homology against the prediction.
    Bar,
}

/// A parameter grid for one kind of check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub p: Vec<u64>,
    pub m: Vec<u64>,
    pub n: Vec<u64>,
    pub i: Vec<u64>,
    pub umax: Option<u32>,
}

/// `"2,3,7-9"` → `[2, 3, 7, 8, 9]`.
pub fn parse_range(text: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let num = |s: &str| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidArgument(format!("bad range element {s:?}")))
        };
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return invalid(format!("empty span {part}"));
                }
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return invalid(format!("empty range {text:?}"));
    }
    Ok(out)
}

impl SweepSpec {
    pub fn from_args(a: &SweepArgs) -> Result<Self> {
        let p = parse_range(&a.p)?;
        for &x in &p {
            PrimeP::new(x)?;
        }
        Ok(SweepSpec {
            kind: a.kind,
            p,
            m: parse_range(&a.m)?,
            n: parse_range(&a.n)?,
            i: parse_range(&a.i)?,
            umax: a.umax,
        })
    }

    fn cells(&self) -> Vec<(u64, u64, u64, u64)> {
        let mut out = Vec::new();
        let ps: &[u64] = if self.kind == SweepKind::Bar {
            &[0]
        } else {
            &self.p
        };
        for &p in ps {
            for &m in &self.m {
                let ns: &[u64] = match self.kind {
                    SweepKind::Length | SweepKind::Bar => &[0],
                    _ => &self.n,
                };
                for &n in ns {
                    let valid = match self.kind {
                        SweepKind::Length => m >= 1,
                        SweepKind::Bar => m >= 2,
                        _ => n >= 1 && m > n,
                    };
                    if !valid {
                        continue;
                    }
                    for &i in &self.i {
                        if self.kind == SweepKind::Bar && i == 0 {
                            continue;
                        }
                        out.push((p, m, n, i));
                    }
                }
            }
        }
        out
    }
}

fn eval(
    kind: SweepKind,
    umax: Option<u32>,
    (p, m, n, i): (u64, u64, u64, u64),
) -> Result<Vec<Value>> {
    let q = 2 * i as i64 + 1;
    let rec = match kind {
        SweepKind::Length => {
            let pr = PrimeP::new(p)?;
            let g = relative_k(pr, m, q)?;
            let expected = (m - 1) * (i + 1);
            let same = g.is_isomorphic(&relative_k_presentation(pr, m, q)?);
            let even_trivial = relative_k(pr, m, q + 1)?.is_trivial();
            vec![json!({
                "p": p, "m": m, "q": q,
                "length": g.length(), "expected": expected, "exponents": g.exponents(),
                "ok": g.length() == expected && same && even_trivial,
            })]
        }
        SweepKind::Valuation => {
            let pr = PrimeP::new(p)?;
            let lo = u_prime(pr, m, i)? + 1;
            let hi = umax.unwrap_or(lo).max(lo);
            let mut rows = Vec::new();
            for j in indices(pr, m * (i + 1)) {
                for u in lo..=hi {
                    let v = valuation_cross_check(pr, m, n, i, j, Some(u))?;
                    rows.push(json!({
                        "p": p, "m": m, "n": n, "i": i, "j": j, "u": u,
                        "v1": v.v1, "v2": v.v2, "v3": v.v3, "ok": v.agree(),
                    }));
                }
            }
            rows
        }
        SweepKind::Kills => {
            let pr = PrimeP::new(p)?;
            let kills = kills_module(pr, m, n, i)?;
            let zero = transfer_map(pr, m, n, q)?.is_zero();
            vec![
                json!({ "p": p, "m": m, "n": n, "i": i, "kills": kills, "zero": zero, "ok": !kills || zero }),
            ]
        }
        SweepKind::Map => {
            let pr = PrimeP::new(p)?;
            let d = transfer_map(pr, m, n, q)?;
            let (k, c) = d.ker_coker();
            let (k2, c2) = d.ker_coker_snf()?;
            let diff = k.length() as i64 - c.length() as i64;
            let ok =
                k.is_isomorphic(&k2) && c.is_isomorphic(&c2) && diff == ((m - n) * (i + 1)) as i64;
            vec![json!({
                "p": p, "m": m, "n": n, "q": q,
                "ker": k.exponents(), "coker": c.exponents(), "is_zero": d.is_zero(), "ok": ok,
            })]
        }
        SweepKind::Bar => {
            let (m32, i32_) = (u32::try_from(m), u32::try_from(i));
            let (Ok(m32), Ok(i32_)) = (m32, i32_) else {
                return invalid("bar parameters must fit in u32");
            };
            let r = bar_report(m32, i32_)?;
            vec![
                json!({ "m": m, "i": i, "homology": r.homology, "predicted": r.predicted, "ok": r.matches }),
            ]
        }
    };
    Ok(rec)
}

/// Evaluates every cell in parallel; records come back in grid order.
pub fn cmd_sweep(spec: &SweepSpec) -> Result<Report> {
    let cells = spec.cells();
    if cells.is_empty() {
        return invalid("the sweep grid is empty");
    }
    let results: Vec<Vec<Value>> = cells
        .par_iter()
        .map(|&c| eval(spec.kind, spec.umax, c))
        .collect::<Result<_>>()?;
    let records: Vec<Value> = results.into_iter().flatten().collect();
    let failures = records
        .iter()
        .filter(|r| r["ok"] != Value::Bool(true))
        .cloned()
        .collect();
    Ok(Report {
        name: "sweep",
        records,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2,3,7-9").unwrap(), vec![2, 3, 7, 8, 9]);
        assert_eq!(parse_range("5").unwrap(), vec![5]);
        assert_eq!(parse_range("3,2,3").unwrap(), vec![2, 3]);
        assert!(parse_range("").is_err());
        assert!(parse_range("5-2").is_err());
        assert!(parse_range("a").is_err());
    }

    #[test]
    fn empty_grid_is_an_error() {
        let spec = SweepSpec {
            kind: SweepKind::Kills,
            p: vec![2],
            m: vec![2],
            n: vec![3],
            i: vec![0],
            umax: None,
        };
        assert!(cmd_sweep(&spec).is_err());
    }

    #[test]
    fn length_sweep_is_clean() {
        let spec = SweepSpec {
            kind: SweepKind::Length,
            p: vec![2, 3],
            m: (1..=6).collect(),
            n: vec![],
            i: (0..=3).collect(),
            umax: None,
        };
        let r = cmd_sweep(&spec).unwrap();
        assert_eq!(r.records.len(), 2 * 6 * 4);
        assert!(r.failures.is_empty());
    }
}
