//! Vanishing thresholds for the transfer maps.

use wittkit::kgroups::{i0, m0, milnor_intersection, q0};
use wittkit::{PrimeP, Result};

fn main() -> Result<()> {
    let p = PrimeP::new(2)?;
    for (m, n) in [(3, 2), (4, 2), (5, 3), (6, 4)] {
        let a = i0(p, m, n)?;
        let b = q0(p, m, n)?;
        println!(
            "m={m} n={n}: i0 = {} (failing j {:?}), q0 = {}",
            a.i0, a.failing_j, b.q0
        );
    }
    for n in 2..=4 {
        let c = m0(p, n)?;
        println!("n={n}: m0 = {}, witness below it {:?}", c.m0, c.witness);
    }
    let n = 3;
    let bound = m0(p, n)?.m0 + 2;
    for q in [1, 3, 5] {
        let r = milnor_intersection(p, n, q, bound)?;
        println!(
            "intersection of images in K_{q} (n={n}): {:?}, stable from m = {}",
            r.group.exponents(),
            r.stabilized_at
        );
    }
    Ok(())
}
