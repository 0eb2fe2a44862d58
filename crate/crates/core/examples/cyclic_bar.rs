//! Homology of the weight-i part of the cyclic bar construction of Z/m.

use wittkit::cyclicbar::{build_complex, homology, induced_map, predicted_homology};
use wittkit::Result;

fn main() -> Result<()> {
    for m in 2..=4 {
        for i in 1..=6 {
            let c = build_complex(m, i)?;
            let h = homology(&c)?;
            let ok = h == predicted_homology(m, i)?;
            let ranks: Vec<_> = (0..=c.top_degree()).map(|k| c.rank(k)).collect();
            let groups: Vec<_> =
                h.0.iter()
                    .map(|d| format!("H{}: Z^{} {:?}", d.deg, d.rank, d.torsion))
                    .collect();
            println!(
                "m={m} i={i} ranks {ranks:?} -> {} [{}]",
                groups.join(", "),
                if ok { "as predicted" } else { "MISMATCH" }
            );
        }
    }
    let f = induced_map(3, 2, 2)?;
    let h1 = f.on_homology(1);
    println!(
        "Z/3 -> Z/2 on H_1 (i=2): {:?} -> {:?}, matrix {:?}",
        h1.source_orders, h1.target_orders, h1.matrix
    );
    Ok(())
}
