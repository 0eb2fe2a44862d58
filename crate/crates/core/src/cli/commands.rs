use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::arith::PrimeP;
use crate::cyclicbar::{bar_report, induced_map};
use crate::divisor::{alpha_divisor, div_witt, kills_module};
use crate::error::{invalid, Result};
use crate::json::{big_int_value, u64_value};
use crate::kgroups::{
    i0, k1_units_oracle, m0, milnor_intersection, odd_weight, q0, relative_k,
    relative_k_presentation, transfer_map, valuation_cross_check,
};
use crate::truncation::TruncationSet;
use crate::witt::{PTypicalDecomp, WittVectorFp};

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("values serialize")
}

pub fn cmd_kgroup(p: u64, m: u64, q: i64) -> Result<Value> {
    let pr = PrimeP::new(p)?;
    let group = relative_k(pr, m, q)?;
    let expected = odd_weight(q).map_or(0, |i| (m - 1) * (i + 1));
    Ok(json!({
        "p": p,
        "m": u64_value(m),
        "q": q,
        "group": to_value(&group),
        "expected_length": u64_value(expected),
    }))
}

pub fn cmd_map(p: u64, m: u64, n: u64, q: i64) -> Result<Value> {
    let pr = PrimeP::new(p)?;
    let desc = transfer_map(pr, m, n, q)?;
    let (ker, coker) = desc.ker_coker();
    Ok(json!({
        "p": p,
        "m": u64_value(m),
        "n": u64_value(n),
        "q": q,
        "group": to_value(&relative_k(pr, m, q)?),
        "target": to_value(&relative_k(pr, n, q)?),
        "map": { "factors": to_value(&desc.factors) },
        "ker": to_value(&ker),
        "coker": to_value(&coker),
        "is_zero": desc.is_zero(),
    }))
}

pub fn cmd_thresholds(p: u64, m: Option<u64>, n: u64) -> Result<Value> {
    let pr = PrimeP::new(p)?;
    let mut out = json!({ "p": p, "n": u64_value(n) });
    if let Some(m) = m {
        out["m"] = u64_value(m);
        if n > 1 {
            let c = i0(pr, m, n)?;
            out["i0"] = json!({
                "i0": u64_value(c.i0),
                "failing_j": u64_value(c.failing_j),
                "lower_bound": u64_value((p - 1) / m),
            });
        }
        out["q0"] = to_value(&q0(pr, m, n)?);
    }
    if n > 1 {
        let c = m0(pr, n)?;
        out["m0"] = json!({
            "m0": u64_value(c.m0),
            "witness": c.witness.map(|(i, j)| json!({ "i": u64_value(i), "j": u64_value(j) })),
        });
    } else if m.is_none() {
        return invalid("thresholds needs n > 1, or -m for q0");
    }
    Ok(out)
}

pub fn cmd_divisor(p: u64, m: u64, n: u64, i: u64) -> Result<Value> {
    let pr = PrimeP::new(p)?;
    let alpha = alpha_divisor(pr, m, n, i)?;
    let r = n
        .checked_mul(i + 1)
        .ok_or_else(|| crate::Error::InvalidArgument("n(i+1) overflows".into()))?;
    let witt = div_witt(r, pr)?;
    Ok(json!({
        "p": p,
        "m": u64_value(m),
        "n": u64_value(n),
        "i": u64_value(i),
        "alpha": to_value(&alpha),
        "witt": to_value(&witt),
        "kills": kills_module(pr, m, n, i)?,
    }))
}

pub fn cmd_bar(m: u32, i: u32, n: Option<u32>) -> Result<Value> {
    let mut out = to_value(&bar_report(m, i)?);
    if let Some(n) = n {
        let f = induced_map(m, n, i)?;
        let mut maps = Vec::new();
        for k in 0..=f.source.top_degree() {
            let h = f.on_homology(k);
            if h.source_orders.is_empty() && h.target_orders.is_empty() {
                continue;
            }
            let rows: Vec<Vec<Value>> = (0..h.matrix.rows())
                .map(|r| {
                    (0..h.matrix.cols())
                        .map(|c| big_int_value(h.matrix.get(r, c)))
                        .collect()
                })
                .collect();
            maps.push(json!({
                "deg": k,
                "source": h.source_orders.iter().map(big_int_value).collect::<Vec<_>>(),
                "target": h.target_orders.iter().map(big_int_value).collect::<Vec<_>>(),
                "matrix": rows,
            }));
        }
        out["n"] = json!(n);
        out["induced"] = Value::Array(maps);
    }
    Ok(out)
}

type Check = (&'static str, fn() -> Result<bool>);

fn p(x: u64) -> PrimeP {
    PrimeP::new(x).expect("prime literal")
}

const CHECKS: &[Check] = &[
    ("kgroup_2_4_1", || {
        Ok(relative_k(p(2), 4, 1)?.exponents() == vec![2, 1])
    }),
    ("kgroup_length_identity", || {
        for pp in [2, 3, 5] {
            for m in 1..=8 {
                for i in 0..=5u64 {
                    if relative_k(p(pp), m, 2 * i as i64 + 1)?.length() != (m - 1) * (i + 1) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }),
    ("kgroup_presentation", || {
        for m in 1..=8 {
            for q in [1, 3, 5, 7] {
                if !relative_k(p(2), m, q)?.is_isomorphic(&relative_k_presentation(p(2), m, q)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }),
    ("units_oracle", || {
        for n in 1..=8 {
            if !relative_k(p(2), n, 1)?.is_isomorphic(&k1_units_oracle(p(2), n)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }),
    ("valuation_2_3_1_2_1_4", || {
        let v = valuation_cross_check(p(2), 3, 1, 2, 1, Some(4))?;
        Ok((v.v1, v.v2, v.v3) == (2, 2, 2))
    }),
    ("map_ker_coker_snf", || {
        for (m, n, q) in [(4, 2, 1), (3, 1, 5), (6, 3, 7), (5, 2, 3)] {
            let d = transfer_map(p(2), m, n, q)?;
            let (k, c) = d.ker_coker();
            let (k2, c2) = d.ker_coker_snf()?;
            if !k.is_isomorphic(&k2) || !c.is_isomorphic(&c2) {
                return Ok(false);
            }
        }
        Ok(true)
    }),
    ("divisor_examples", || {
        let w = div_witt(4, p(2))?;
        Ok(w.ord(1) == 3 && w.ord(3) == 1 && !kills_module(p(7), 3, 2, 1)?)
    }),
    ("i0_certificate", || {
        let c = i0(p(2), 4, 2)?;
        Ok(!kills_module(p(2), 4, 2, c.i0 - 1)?
            && (c.i0..c.i0 + 10).all(|i| kills_module(p(2), 4, 2, i).unwrap_or(false)))
    }),
    ("q0_certificate", || {
        let c = q0(p(2), 4, 2)?;
        let zero_above =
            (c.q0..c.q0 + 20).all(|q| crate::kgroups::is_zero_map(p(2), 4, 2, q).unwrap_or(false));
        Ok(zero_above && !crate::kgroups::is_zero_map(p(2), 4, 2, c.q0 - 1)?)
    }),
    ("milnor_intersection", || {
        let bound = m0(p(2), 2)?.m0 + 2;
        let full = milnor_intersection(p(2), 2, 1, bound)?
            .group
            .is_isomorphic(&relative_k(p(2), 2, 1)?);
        let trivial = milnor_intersection(p(2), 2, 3, bound)?.group.is_trivial();
        Ok(full && trivial)
    }),
    ("witt_one_plus_one", || {
        let s = TruncationSet::segment(2);
        let one = WittVectorFp::one(p(2), s);
        Ok(one.add(&one)?.coords() == [0, 1])
    }),
    ("witt_eta_round_trip", || {
        for pp in [2u64, 3] {
            let s = TruncationSet::segment(8);
            for seed in 0..20u64 {
                let coords = (0..8).map(|k| (seed * 7 + k * 3 + k * k) % pp).collect();
                let x = WittVectorFp::new(p(pp), s.clone(), coords)?;
                if PTypicalDecomp::decompose(&x)?.recompose()? != x {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }),
    ("witt_from_integer", || {
        let x = WittVectorFp::from_integer(p(3), TruncationSet::segment(6), &BigInt::from(5));
        let d = PTypicalDecomp::decompose(&x)?;
        Ok(d.components()
            .iter()
            .all(|c| c.value == num_bigint::BigUint::from(5u32) % p(3).pow_big(c.u)))
    }),
    ("bar_prediction", || {
        for m in 2..=4 {
            for i in 1..=6 {
                if !bar_report(m, i)?.matches {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }),
];

/// Runs the fixed battery; one record per check.
pub fn cmd_selftest() -> super::Report {
    let mut report = super::Report {
        name: "selftest",
        ..Default::default()
    };
    for (name, check) in CHECKS {
        let record = match check() {
            Ok(ok) => json!({ "check": name, "ok": ok }),
            Err(e) => json!({ "check": name, "ok": false, "error": e.to_string() }),
        };
        if record["ok"] != Value::Bool(true) {
            report.failures.push(record.clone());
        }
        report.records.push(record);
    }
    report
}
