//! Divisors on the prime-to-p indices and the module-killing test.

use wittkit::divisor::{alpha_divisor, div_witt, kills_module};
use wittkit::{PrimeP, Result};

fn main() -> Result<()> {
    let p = PrimeP::new(2)?;
    for r in [4, 8] {
        let d = div_witt(r, p)?;
        println!(
            "div(W_{r}) = {:?}  degree {}",
            d.orders().collect::<Vec<_>>(),
            d.degree()
        );
    }
    let (m, n) = (4, 2);
    for i in 0..=5 {
        let a = alpha_divisor(p, m, n, i)?;
        let kills = kills_module(p, m, n, i)?;
        println!(
            "i = {i}: alpha = {:?}, kills = {kills}",
            a.orders().collect::<Vec<_>>()
        );
    }
    Ok(())
}
