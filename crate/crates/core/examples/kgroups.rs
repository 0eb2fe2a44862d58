//! Relative K-groups of truncated polynomial rings and the transfer maps between them.

use wittkit::kgroups::{k1_units_oracle, relative_k, transfer_map};
use wittkit::{PrimeP, Result};

fn main() -> Result<()> {
    let p = PrimeP::new(3)?;
    for q in 1..=7 {
        let g = relative_k(p, 6, q)?;
        println!("K_{q}(Z/3[x]/(x^6), (x)) exponents {:?}", g.exponents());
    }
    println!(
        "units oracle for n = 6: {:?}",
        k1_units_oracle(p, 6)?.exponents()
    );

    let f = transfer_map(p, 6, 3, 5)?;
    let (ker, coker) = f.ker_coker();
    println!(
        "m=6 -> n=3, q=5: zero = {}, ker {:?}, coker {:?}",
        f.is_zero(),
        ker.exponents(),
        coker.exponents()
    );
    for fac in &f.factors {
        println!(
            "  j = {}: Z/3^{} -> Z/3^{} by 3^{}",
            fac.j, fac.a, fac.b, fac.w
        );
    }
    Ok(())
}
