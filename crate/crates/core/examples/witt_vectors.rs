//! Big Witt vectors over Z and F_p, and the p-typical decomposition.

use num_bigint::BigInt;
use wittkit::truncation::TruncationSet;
use wittkit::witt::{PTypicalDecomp, WittVectorFp, WittVectorZ};
use wittkit::{PrimeP, Result};

fn main() -> Result<()> {
    let s = TruncationSet::segment(6);
    let one = WittVectorZ::one(s.clone());
    let two = one.add(&one)?;
    println!("1 + 1 in W_{s}(Z) = {:?}", two.coords());
    println!("ghost components: {:?}", two.ghost().components());

    let t = WittVectorZ::teichmuller(s.clone(), &BigInt::from(3));
    println!("[3]·2 = {:?}", t.mul(&two)?.coords());
    println!("F_2([3]) = {:?}", t.frobenius(2)?.coords());

    let p = PrimeP::new(2)?;
    let x = WittVectorFp::new(p, s.clone(), vec![1, 0, 1, 1, 0, 1])?;
    let y = WittVectorFp::one(p, s.clone());
    println!("over F_2: x + 1 = {:?}", x.add(&y)?.coords());

    // η: W_S(F_p) splits into a product of Z/p^u indexed by j prime to p.
    let eta = PTypicalDecomp::decompose(&x)?;
    for c in eta.components() {
        println!("  j = {}: {} mod 2^{}", c.j, c.value, c.u);
    }
    assert_eq!(eta.recompose()?, x);
    println!("{}", serde_json::to_string(&eta).expect("serializable"));
    Ok(())
}
