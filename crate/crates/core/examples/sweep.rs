//! A parallel parameter sweep, printed as CSV.

use wittkit::cli::{cmd_sweep, parse_range, SweepKind, SweepSpec};
use wittkit::Result;

fn main() -> Result<()> {
    let spec = SweepSpec {
        kind: SweepKind::Kills,
        p: parse_range("2,3")?,
        m: parse_range("3-5")?,
        n: parse_range("1-4")?,
        i: parse_range("0-6")?,
        umax: None,
    };
    let report = cmd_sweep(&spec)?;
    println!(
        "{} records, {} failures",
        report.records.len(),
        report.failures.len()
    );
    for r in report.records.iter().take(8) {
        println!("{r}");
    }
    Ok(())
}
