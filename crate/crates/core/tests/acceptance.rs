//! Acceptance criteria 1-10. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion; exits nonzero if any criterion fails.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use wittkit::arith::PrimeP;
use wittkit::cyclicbar::{build_complex, homology, induced_map, predicted_homology};
use wittkit::divisor::{alpha_divisor, div_witt, kills_module};
use wittkit::kgroups::{
    i0, indices, is_zero_map, k1_units_oracle, lemma_exponential_check, m0, milnor_intersection,
    q0, relative_k, stays_zero_check, transfer_map, valuation_cross_check,
};
use wittkit::truncation::TruncationSet;
use wittkit::witt::{PTypicalDecomp, WittVectorFp};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn p(x: u64) -> PrimeP {
    PrimeP::new(x).unwrap()
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn lift<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn length_identity() -> Outcome {
    let mut cells = 0;
    for pp in [2, 3, 5] {
        for m in 1..=10u64 {
            for i in 0..=8u64 {
                let g = lift(relative_k(p(pp), m, 2 * i as i64 + 1))?;
                ensure!(
                    g.length() == (m - 1) * (i + 1),
                    "p={pp} m={m} i={i}: length {}",
                    g.length()
                );
                cells += 1;
            }
            for q in [-5, -1, 0, 2, 4, 6, 8, 10, 12, 14, 16, 18] {
                ensure!(
                    lift(relative_k(p(pp), m, q))?.is_trivial(),
                    "p={pp} m={m} q={q} not trivial"
                );
            }
        }
    }
    Ok(format!(
        "{cells} odd-degree groups, even and non-positive degrees trivial"
    ))
}

fn units_oracle() -> Outcome {
    let cases = (2..=9).map(|n| (2, n)).chain((2..=6).map(|n| (3, n)));
    let mut count = 0;
    for (pp, n) in cases {
        let a = lift(relative_k(p(pp), n, 1))?;
        let b = lift(k1_units_oracle(p(pp), n))?;
        ensure!(
            a.exponents() == b.exponents(),
            "p={pp} n={n}: {:?} vs {:?}",
            a.exponents(),
            b.exponents()
        );
        count += 1;
    }
    Ok(format!("{count} unit groups match"))
}

/// The grid shared by criteria 3 and 6: p ∈ {2,3}, 1 ≤ n < m ≤ 6, 0 ≤ i ≤ 6, j ≤ m(i+1).
fn valuation_grid() -> Vec<(u64, u64, u64, u64, u64)> {
    let mut out = Vec::new();
    for pp in [2, 3] {
        for m in 2..=6u64 {
            for n in 1..m {
                for i in 0..=6u64 {
                    for j in indices(p(pp), m * (i + 1)) {
                        out.push((pp, m, n, i, j));
                    }
                }
            }
        }
    }
    out
}

fn valuation_triple() -> Outcome {
    let grid = valuation_grid();
    for &(pp, m, n, i, j) in &grid {
        let v = lift(valuation_cross_check(p(pp), m, n, i, j, None))?;
        ensure!(v.agree(), "p={pp} m={m} n={n} i={i} j={j}: {v:?}");
    }
    Ok(format!("{} cells, zero mismatches", grid.len()))
}

fn random_fp(rng: &mut StdRng, pp: u64, set: &TruncationSet) -> WittVectorFp {
    let coords = (0..set.len()).map(|_| rng.gen_range(0..pp)).collect();
    WittVectorFp::new(p(pp), set.clone(), coords).unwrap()
}

fn eta(x: &WittVectorFp) -> Result<PTypicalDecomp, String> {
    lift(PTypicalDecomp::decompose(x))
}

fn witt_models() -> Outcome {
    const PAIRS: usize = 200;
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut checks = 0usize;
    for pp in [2u64, 3] {
        for r in 1..=12u64 {
            let set = TruncationSet::segment(r);
            for _ in 0..PAIRS {
                let x = random_fp(&mut rng, pp, &set);
                let y = random_fp(&mut rng, pp, &set);
                let (ex, ey) = (eta(&x)?, eta(&y)?);
                ensure!(
                    lift(ex.recompose())? == x,
                    "p={pp} r={r}: recompose(η(x)) ≠ x for {x:?}"
                );
                ensure!(
                    eta(&lift(x.add(&y))?)? == lift(ex.add(&ey))?,
                    "p={pp} r={r}: add"
                );
                ensure!(
                    eta(&lift(x.mul(&y))?)? == lift(ex.mul(&ey))?,
                    "p={pp} r={r}: mul"
                );

                let s = rng.gen_range(1..=r);
                let fx = lift(x.frobenius(s))?;
                ensure!(eta(&fx)? == lift(ex.frobenius(s))?, "p={pp} r={r}: F_{s}");

                let small = lift(set.quotient(s))?;
                let z = random_fp(&mut rng, pp, &small);
                let vz = lift(z.verschiebung(s, &set))?;
                ensure!(
                    eta(&vz)? == lift(eta(&z)?.verschiebung(s, &set))?,
                    "p={pp} r={r}: V_{s}"
                );

                let t = rng.gen_range(0..=r);
                let sub = if rng.gen_bool(0.5) {
                    TruncationSet::segment(t)
                } else {
                    lift(TruncationSet::divisor_set(t.max(1)))?
                };
                let rx = lift(x.restrict(&sub))?;
                ensure!(
                    eta(&rx)? == lift(ex.restrict(&sub))?,
                    "p={pp} r={r}: res to {sub}"
                );
                checks += 1;
            }
        }
    }
    Ok(format!(
        "{checks} random pairs, add/mul/F/V/res diagrams commute"
    ))
}

fn divisor_algebra() -> Outcome {
    let mut checks = 0usize;
    for pp in [2u64, 3] {
        let pr = p(pp);
        for r in 1..=8u64 {
            ensure!(
                lift(div_witt(r, pr))?.degree() == r as i64,
                "p={pp} r={r}: degree"
            );
        }
        for n in 1..=8u64 {
            for m in (n + 1)..=8 {
                for i in 0..=8u64 {
                    let a = lift(alpha_divisor(pr, m, n, i))?;
                    ensure!(a.is_effective(), "p={pp} m={m} n={n} i={i}: not effective");
                    for k in (n + 1)..m {
                        let sum =
                            &lift(alpha_divisor(pr, m, k, i))? + &lift(alpha_divisor(pr, k, n, i))?;
                        ensure!(
                            sum == a,
                            "telescoping fails at p={pp} m={m} k={k} n={n} i={i}"
                        );
                    }
                    for j in indices(pr, m * (i + 1) + 1) {
                        let mut count = 0i64;
                        for h in 0..i {
                            let (lo, hi) = (n * (h + 1), m * (h + 1));
                            let mut x = j;
                            while x <= hi {
                                if x > lo {
                                    count += 1;
                                }
                                x *= pp;
                            }
                        }
                        ensure!(
                            a.ord(j) == count,
                            "counting identity at p={pp} m={m} n={n} i={i} j={j}"
                        );
                    }
                    checks += 1;
                }
            }
        }
    }
    Ok(format!(
        "{checks} divisors: telescoping, effectivity, degree and counting identities"
    ))
}

fn thresholds_certified() -> Outcome {
    let mut notes = Vec::new();
    for pp in [2u64, 3, 5, 7] {
        for m in 3..=6u64 {
            for n in 2..m {
                let c = lift(i0(p(pp), m, n))?;
                ensure!(
                    c.i0 >= (pp - 1) / m,
                    "p={pp} m={m} n={n}: i0 = {} below bound",
                    c.i0
                );
                ensure!(
                    !lift(kills_module(p(pp), m, n, c.i0 - 1))?,
                    "p={pp} m={m} n={n}: kills at i0-1"
                );
                for i in c.i0..=c.i0 + 10 {
                    ensure!(
                        lift(kills_module(p(pp), m, n, i))?,
                        "p={pp} m={m} n={n}: fails at i={i} ≥ i0"
                    );
                }
            }
        }
    }
    for pp in [2u64, 3] {
        for n in 2..=4u64 {
            let c = lift(m0(p(pp), n))?;
            for m in c.m0..=c.m0 + 5 {
                for i in 1..=20 {
                    ensure!(
                        lift(kills_module(p(pp), m, n, i))?,
                        "p={pp} n={n}: m={m} i={i} fails above m0"
                    );
                }
            }
            if c.m0 - 1 > n {
                let (i, _) = c.witness.ok_or("missing witness")?;
                ensure!(
                    !lift(kills_module(p(pp), c.m0 - 1, n, i))?,
                    "p={pp} n={n}: witness does not fail"
                );
            }
            notes.push(format!("m0({pp},{n})={}", c.m0));
        }
    }
    let grid = valuation_grid();
    let mut hyps = 0;
    for &(pp, m, n, i, j) in &grid {
        let (h, c) = lift(lemma_exponential_check(p(pp), m, n, i, j))?;
        ensure!(
            !h || c,
            "exponential lemma fails at p={pp} m={m} n={n} i={i} j={j}"
        );
        hyps += h as usize;
    }
    let mut stays = 0;
    for pp in [2u64, 3, 5, 7] {
        for m in 2..=6u64 {
            for n in 1..m {
                for i in 1..=40u64 {
                    for j in indices(p(pp), m * (i + 1)) {
                        if let Some(ok) = lift(stays_zero_check(p(pp), m, n, i, j))? {
                            ensure!(ok, "stays-zero fails at p={pp} m={m} n={n} i={i} j={j}");
                            stays += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!(
        "i0 and m0 certified ({}); exponential lemma {hyps} hypotheses; stays-zero {stays} cases",
        notes.join(" ")
    ))
}

fn vanishing_degree() -> Outcome {
    let mut notes = Vec::new();
    for pp in [2u64, 3] {
        for m in 3..=6u64 {
            for n in 1..(m - 1) {
                let c = lift(q0(p(pp), m, n))?;
                for q in c.q0..=c.q0 + 20 {
                    ensure!(
                        lift(is_zero_map(p(pp), m, n, q))?,
                        "p={pp} m={m} n={n}: nonzero at q={q} ≥ q0={}",
                        c.q0
                    );
                }
                let below = if c.q0 % 2 == 0 { c.q0 - 1 } else { c.q0 - 2 };
                if below >= 1 {
                    ensure!(
                        !lift(is_zero_map(p(pp), m, n, below))?,
                        "p={pp} m={m} n={n}: zero at q={below} < q0"
                    );
                }
                notes.push(format!("q0({pp},{m},{n})={}", c.q0));
            }
        }
    }
    let mut cells = 0;
    for pp in [2u64, 3] {
        for m in 2..=6u64 {
            for n in 1..m {
                for i in 0..=30u64 {
                    if lift(kills_module(p(pp), m, n, i))? {
                        ensure!(
                            lift(is_zero_map(p(pp), m, n, 2 * i as i64 + 1))?,
                            "kills but nonzero at p={pp} m={m} n={n} i={i}"
                        );
                    }
                    cells += 1;
                }
            }
        }
    }
    Ok(format!(
        "{}; kills ⇒ zero on {cells} cells",
        notes.join(" ")
    ))
}

fn milnor() -> Outcome {
    let mut notes = Vec::new();
    for pp in [2u64, 3] {
        for n in 2..=4u64 {
            let bound = lift(m0(p(pp), n))?.m0 + 2;
            let full = lift(milnor_intersection(p(pp), n, 1, bound))?;
            ensure!(
                full.group.is_isomorphic(&lift(relative_k(p(pp), n, 1))?),
                "p={pp} n={n}: q=1 not the full group"
            );
            let mut stab = vec![full.stabilized_at];
            for i in 1..=3i64 {
                let r = lift(milnor_intersection(p(pp), n, 2 * i + 1, bound))?;
                ensure!(
                    r.group.is_trivial(),
                    "p={pp} n={n} q={}: {:?}",
                    2 * i + 1,
                    r.group.exponents()
                );
                ensure!(r.stabilized_at < bound, "p={pp} n={n}: no stabilization");
                stab.push(r.stabilized_at);
            }
            notes.push(format!("({pp},{n}) m_max={bound} stable at {stab:?}"));
        }
    }
    Ok(notes.join("; "))
}

fn bar() -> Outcome {
    let mut cells = 0;
    for m in 2..=4u32 {
        for i in 1..=8u32 {
            let c = lift(build_complex(m, i))?;
            for k in 2..=c.top_degree() {
                ensure!(
                    c.boundary(k - 1).mul(&c.boundary(k)).is_zero(),
                    "∂∂ ≠ 0 at m={m} i={i} k={k}"
                );
            }
            let h = lift(homology(&c))?;
            ensure!(h == lift(predicted_homology(m, i))?, "m={m} i={i}: {h:?}");
            ensure!(
                h.euler_characteristic() == c.euler_characteristic(),
                "m={m} i={i}: Euler characteristic"
            );
            cells += 1;
        }
    }
    for i in 1..=6u32 {
        let maps: Vec<_> = [(3, 2), (4, 2), (4, 3)]
            .iter()
            .map(|&(m, n)| induced_map(m, n, i))
            .collect();
        let maps: Vec<_> = maps.into_iter().map(lift).collect::<Result<_, _>>()?;
        for f in &maps {
            for k in 1..=f.source.top_degree() {
                let lhs = f.target.boundary(k).mul(&f.chain_matrix(k));
                let rhs = f.chain_matrix(k - 1).mul(&f.source.boundary(k));
                ensure!(lhs == rhs, "not a chain map at i={i} k={k}");
            }
        }
        let (f32_, f42, f43) = (&maps[0], &maps[1], &maps[2]);
        for k in 0..=f42.source.top_degree() {
            ensure!(
                f32_.chain_matrix(k).mul(&f43.chain_matrix(k)) == f42.chain_matrix(k),
                "chain functoriality at i={i} k={k}"
            );
            let composed = f32_.on_homology(k).compose(&f43.on_homology(k));
            ensure!(
                composed.matrix == f42.on_homology(k).matrix,
                "homology functoriality at i={i} k={k}"
            );
        }
    }
    Ok(format!(
        "{cells} complexes match the prediction; induced maps functorial for i ≤ 6"
    ))
}

fn transfer_functoriality() -> Outcome {
    let mut cells = 0;
    for pp in [2u64, 3] {
        for m in 3..=6u64 {
            for k in 2..m {
                for n in 1..k {
                    for q in 1..=9i64 {
                        let outer = lift(transfer_map(p(pp), k, n, q))?;
                        let inner = lift(transfer_map(p(pp), m, k, q))?;
                        let direct = lift(transfer_map(p(pp), m, n, q))?;
                        let composed = lift(lift(outer.to_hom())?.compose(&lift(inner.to_hom())?))?;
                        ensure!(
                            composed.same_map(&lift(direct.to_hom())?),
                            "p={pp} m={m} k={k} n={n} q={q}"
                        );
                        cells += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{cells} composites equal the direct map"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("length identity", length_identity),
        ("K_1 unit-group oracle", units_oracle),
        ("valuation triple agreement", valuation_triple),
        ("Witt model equivalence", witt_models),
        ("divisor algebra", divisor_algebra),
        ("thresholds i0, m0 and lemmas", thresholds_certified),
        ("vanishing degree q0", vanishing_degree),
        ("intersection of images", milnor),
        ("cyclic bar homology", bar),
        ("functoriality of transfer", transfer_functoriality),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS [{secs:.1}s] {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL [{secs:.1}s] {name}: {why}", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
