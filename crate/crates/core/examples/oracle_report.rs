//! Dense-matrix identity checks behind the averaged electric walk.
//!
//! `cargo run --release --example oracle_report -- [q]`

use std::f64::consts::FRAC_PI_4;

use qwalk::oracle::run_verification;

fn main() -> qwalk::Result<()> {
    let q = std::env::args()
        .nth(1)
        .map_or(Ok(1), |s| s.parse())
        .expect("q");
    let report = run_verification(q, FRAC_PI_4)?;
    print!("{}", report.summary());
    Ok(())
}
